//! Truncation families: finite windows onto a flat, infinite-mass prior.
//!
//! Window `N` has parameter atoms `θ ∈ {−N, …, N}`, each with the same prior
//! weight, and a location likelihood `L(x | θ) = ℓ(x − θ)`. The joint carrier
//! is `Θ_N × X_N` with atoms labelled `(θ,x)`, where `X_N` collects every `x`
//! reachable from `Θ_N` plus the observed value. Windows are nested. The
//! posterior of the query parameter is the ordinary conditional probability
//! `P(θ = q | x = x_obs)` in each window.

use std::collections::BTreeSet;

use num_traits::Zero;

use crate::error::{Error as CoreError, Result as CoreResult};
use crate::measure::{Carrier, Event, SigmaFiniteMeasure, Statistic};
use crate::model::{ModelSpec, ParseError};
use crate::rational::{self, Rational};
use crate::state::RenyiState;

/// Event names used in each window model.
pub const DATA: &str = "data";
pub const QUERY: &str = "query";

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Likelihood {
    /// `ℓ(d)` for listed offsets `d = x − θ`, zero elsewhere.
    Offsets(Vec<(i64, Rational)>),
    /// `L(x | θ) = c` for every `x` in the parameter grid; not a probability
    /// kernel, and the data mass grows with the window.
    Constant(Rational),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncationFamily {
    pub prior_weight: Rational,
    pub likelihood: Likelihood,
    pub observed: i64,
    pub query: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindowPosterior {
    pub window: u32,
    pub atoms: usize,
    pub data_mass: Rational,
    pub posterior: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PosteriorSequence {
    pub windows: Vec<WindowPosterior>,
    /// `max |p_{k+1} − p_k|` over consecutive reported windows.
    pub max_successive_difference: Rational,
    /// Posterior exactly constant across the reported windows.
    pub stabilized: bool,
}

impl TruncationFamily {
    fn x_values(&self, n: i64) -> BTreeSet<i64> {
        let mut xs: BTreeSet<i64> = match &self.likelihood {
            Likelihood::Offsets(offsets) => (-n..=n)
                .flat_map(|theta| offsets.iter().map(move |(d, _)| theta + d))
                .collect(),
            Likelihood::Constant(_) => (-n..=n).collect(),
        };
        xs.insert(self.observed);
        xs
    }

    fn likelihood(&self, theta: i64, x: i64) -> Rational {
        match &self.likelihood {
            Likelihood::Offsets(offsets) => offsets
                .iter()
                .find(|(d, _)| *d == x - theta)
                .map(|(_, w)| w.clone())
                .unwrap_or_else(Rational::zero),
            Likelihood::Constant(c) => c.clone(),
        }
    }

    /// The finite model for window `n`, with events `data` and `query` and
    /// the statistic `(θ,x) ↦ θ`.
    pub fn model(&self, n: u32) -> CoreResult<ModelSpec> {
        let n = i64::from(n);
        let xs = self.x_values(n);
        let pairs: Vec<(i64, i64)> = (-n..=n).flat_map(|theta| xs.iter().map(move |&x| (theta, x))).collect();
        let carrier = Carrier::new(pairs.iter().map(|(t, x)| format!("({t},{x})")))?;
        let weights = pairs
            .iter()
            .map(|&(t, x)| &self.prior_weight * self.likelihood(t, x))
            .collect();
        let measure = SigmaFiniteMeasure::new(&carrier, weights)?;

        let thetas = Carrier::new((-n..=n).map(|t| t.to_string()))?;
        let map = pairs.iter().map(|(t, _)| (t + n) as usize).collect();
        let statistic = Statistic::from_indices(&carrier, &thetas, map)?;

        let data = Event::from_indices(&carrier, (0..pairs.len()).filter(|&i| pairs[i].1 == self.observed));
        let query = Event::from_indices(&carrier, (0..pairs.len()).filter(|&i| pairs[i].0 == self.query));

        let mut model = ModelSpec::new(carrier);
        model.measure = Some(measure);
        model.statistic = Some(statistic);
        model.events = vec![(DATA.into(), data), (QUERY.into(), query)];
        Ok(model)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PosteriorError {
    #[error("window {window}: {source}")]
    Window { window: u32, source: CoreError },
    #[error("no windows requested")]
    NoWindows,
}

/// `P(query | data)` in each window, computed by plain conditioning.
pub fn posterior_sequence(family: &TruncationFamily, windows: &[u32]) -> Result<PosteriorSequence, PosteriorError> {
    if windows.is_empty() {
        return Err(PosteriorError::NoWindows);
    }
    let results = windows
        .iter()
        .map(|&window| {
            let wrap = |source| PosteriorError::Window { window, source };
            let model = family.model(window).map_err(wrap)?;
            let state = RenyiState::new(model.measure.clone().expect("window model has a measure"));
            let data = model.event(DATA).expect("data event");
            let query = model.event(QUERY).expect("query event");
            let data_mass = state.representative().mass(&data).map_err(wrap)?;
            let posterior = state.probability(&query, &data).map_err(wrap)?;
            Ok(WindowPosterior {
                window,
                atoms: model.carrier.len(),
                data_mass,
                posterior,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;

    let max_successive_difference = results
        .windows(2)
        .map(|w| {
            let d = &w[1].posterior - &w[0].posterior;
            if d < Rational::zero() {
                -d
            } else {
                d
            }
        })
        .max()
        .unwrap_or_else(Rational::zero);
    let stabilized = results.windows(2).all(|w| w[0].posterior == w[1].posterior);
    Ok(PosteriorSequence {
        windows: results,
        max_successive_difference,
        stabilized,
    })
}

/// Parses a `[family]` file:
///
/// ```text
/// [family]
/// prior = 1
/// likelihood = offsets -2:1 -1:2 0:3 1:2 2:1   # or: constant 1
/// observed = 0
/// query = 0
/// ```
pub fn parse_family(text: &str) -> Result<TruncationFamily, ParseError> {
    let err = |line: usize, message: String| ParseError {
        line,
        section: "family".into(),
        message,
    };
    let mut prior = None;
    let mut likelihood = None;
    let mut observed = None;
    let mut query = None;
    let mut saw_header = false;

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if content == "[family]" {
            if saw_header {
                return Err(err(line, "duplicate section".into()));
            }
            saw_header = true;
            continue;
        }
        if !saw_header {
            return Err(err(line, "expected `[family]` header".into()));
        }
        let (key, value) = content
            .split_once('=')
            .map(|(k, v)| (k.trim(), v.trim()))
            .ok_or_else(|| err(line, "expected `key = value`".into()))?;
        let slot_taken = match key {
            "prior" => prior
                .replace(parse_positive(value).ok_or_else(|| err(line, format!("malformed prior weight `{value}`")))?)
                .is_some(),
            "likelihood" => likelihood
                .replace(parse_likelihood(value).map_err(|m| err(line, m))?)
                .is_some(),
            "observed" => observed
                .replace(
                    value
                        .parse::<i64>()
                        .map_err(|_| err(line, format!("malformed integer `{value}`")))?,
                )
                .is_some(),
            "query" => query
                .replace(
                    value
                        .parse::<i64>()
                        .map_err(|_| err(line, format!("malformed integer `{value}`")))?,
                )
                .is_some(),
            _ => return Err(err(line, format!("unknown key `{key}`"))),
        };
        if slot_taken {
            return Err(err(line, format!("duplicate key `{key}`")));
        }
    }
    let missing = |key: &str| err(0, format!("missing `{key}`"));
    Ok(TruncationFamily {
        prior_weight: prior.unwrap_or_else(|| rational::int(1)),
        likelihood: likelihood.ok_or_else(|| missing("likelihood"))?,
        observed: observed.ok_or_else(|| missing("observed"))?,
        query: query.ok_or_else(|| missing("query"))?,
    })
}

fn parse_positive(text: &str) -> Option<Rational> {
    rational::parse(text).filter(|r| *r > Rational::zero())
}

fn parse_likelihood(text: &str) -> Result<Likelihood, String> {
    let mut parts = text.split_whitespace();
    match parts.next() {
        Some("constant") => {
            let c = parts.next().ok_or("missing constant value")?;
            if parts.next().is_some() {
                return Err("trailing input after constant".into());
            }
            parse_positive(c)
                .map(Likelihood::Constant)
                .ok_or_else(|| format!("malformed constant `{c}`"))
        }
        Some("offsets") => {
            let mut offsets: Vec<(i64, Rational)> = Vec::new();
            for token in parts {
                let (d, w) = token
                    .split_once(':')
                    .ok_or_else(|| format!("expected `offset:weight`, got `{token}`"))?;
                let d: i64 = d.parse().map_err(|_| format!("malformed offset `{d}`"))?;
                let w = rational::parse(w)
                    .filter(|w| *w >= Rational::zero())
                    .ok_or_else(|| format!("malformed weight `{w}`"))?;
                if offsets.iter().any(|(e, _)| *e == d) {
                    return Err(format!("duplicate offset {d}"));
                }
                offsets.push((d, w));
            }
            if offsets.iter().all(|(_, w)| w.is_zero()) {
                return Err("likelihood has no positive weight".into());
            }
            offsets.sort_by_key(|(d, _)| *d);
            Ok(Likelihood::Offsets(offsets))
        }
        _ => Err("expected `offsets ...` or `constant c`".into()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn flat_window(width: i64) -> TruncationFamily {
        TruncationFamily {
            prior_weight: int(1),
            likelihood: Likelihood::Offsets((-width..=width).map(|d| (d, int(1))).collect()),
            observed: 0,
            query: 0,
        }
    }

    #[test]
    fn window_models_are_nested() {
        let family = flat_window(2);
        let small = family.model(2).unwrap();
        let large = family.model(3).unwrap();
        assert!(small.carrier.atoms().iter().all(|a| large.carrier.contains(a)));
        assert_eq!(small.carrier.len(), 5 * 9);
    }

    #[test]
    fn stabilizes_once_support_is_covered() {
        let seq = posterior_sequence(&flat_window(2), &[2, 3, 4]).unwrap();
        assert!(seq.stabilized);
        assert!(seq.windows.iter().all(|w| w.posterior == ratio(1, 5)));
        assert_eq!(seq.max_successive_difference, int(0));
    }

    #[test]
    fn small_window_differs() {
        let seq = posterior_sequence(&flat_window(2), &[1, 2]).unwrap();
        assert_eq!(seq.windows[0].posterior, ratio(1, 3));
        assert_eq!(seq.windows[1].posterior, ratio(1, 5));
        assert!(!seq.stabilized);
        assert_eq!(seq.max_successive_difference, ratio(2, 15));
    }

    #[test]
    fn data_outside_window_is_an_error() {
        let family = TruncationFamily {
            observed: 10,
            ..flat_window(1)
        };
        let err = posterior_sequence(&family, &[3, 20]).unwrap_err();
        assert!(matches!(
            err,
            PosteriorError::Window {
                window: 3,
                source: CoreError::NotElementary(_)
            }
        ));
        assert_eq!(posterior_sequence(&family, &[]).unwrap_err(), PosteriorError::NoWindows);
    }

    #[test]
    fn family_file() {
        let text = "[family]\nprior = 2\nlikelihood = offsets 1:1 -1:1 0:2 # tent\nobserved = 0\nquery = 1\n";
        let family = parse_family(text).unwrap();
        assert_eq!(family.prior_weight, int(2));
        assert_eq!(
            family.likelihood,
            Likelihood::Offsets(vec![(-1, int(1)), (0, int(2)), (1, int(1))])
        );
        assert_eq!((family.observed, family.query), (0, 1));

        let constant = parse_family("[family]\nlikelihood = constant 1\nobserved = 0\nquery = 0\n").unwrap();
        assert_eq!(constant.likelihood, Likelihood::Constant(int(1)));
        assert_eq!(constant.prior_weight, int(1));

        for bad in [
            "likelihood = constant 1\n",
            "[family]\nlikelihood = constant 0\nobserved = 0\nquery = 0\n",
            "[family]\nlikelihood = offsets 0:0\nobserved = 0\nquery = 0\n",
            "[family]\nlikelihood = offsets 0:1\nobserved = x\nquery = 0\n",
            "[family]\nlikelihood = offsets 0:1\nquery = 0\n",
            "[family]\nlikelihood = offsets 0:1\nobserved = 0\nobserved = 1\nquery = 0\n",
            "[family]\nwidth = 3\n",
        ] {
            assert!(parse_family(bad).is_err(), "{bad:?}");
        }
    }
}
