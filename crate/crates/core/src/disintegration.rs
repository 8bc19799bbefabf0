//! Conditional Rényi states `t ↦ P^t` for a statistic `T : Ω → Ω_T`.
//!
//! Given a measure `ν` on `Ω_T` that dominates the pushforward `P_T`, the
//! representative kernel at `t` is
//!
//! ```text
//! P^t(ω) = μ(ω) [T(ω) = t] / ν(t)
//! ```
//!
//! so that `Σ_t φ(t) P^t(A) ν(t) = ∫ φ(T) A dμ` for every nonnegative `φ`
//! and `A`. Kernels are only determined up to a factor `c(t)` that is
//! positive on the support of `P_T`; [`ConditionalState::rescale`] moves
//! within that class.
//!
//! On a finite carrier every kernel is a measure (or the zero table), so the
//! almost-everywhere caveats of the general theory do not arise here.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::measure::{Event, NonNegFunction, SigmaFiniteMeasure};
use crate::rational::{self, Rational};
use crate::state::RenyiState;

pub use crate::measure::Statistic;

/// How to pick the dominating measure `ν` on `Ω_T`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NuMode {
    /// Weight 1 on every atom of `Ω_T`.
    Counting,
    /// `ν = P_T` for the state's representative; kernels become probabilities.
    Pushforward,
    /// A caller-supplied measure, checked for domination.
    Supplied(SigmaFiniteMeasure),
}

/// A measure `ν` on `Ω_T` with `ν(t) > 0` wherever `P_T(t) > 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DominatingMeasure {
    measure: SigmaFiniteMeasure,
}

impl DominatingMeasure {
    /// Checks that `measure` dominates `pushforward`.
    pub fn new(measure: SigmaFiniteMeasure, pushforward: &SigmaFiniteMeasure) -> Result<Self> {
        measure
            .carrier()
            .ensure_same(pushforward.carrier(), "dominating measure is not on the codomain")?;
        for (i, (nu, pt)) in measure.weights().iter().zip(pushforward.weights()).enumerate() {
            if nu.is_zero() && !pt.is_zero() {
                return Err(Error::DominationFailure(measure.carrier().atom(i).to_string()));
            }
        }
        Ok(DominatingMeasure { measure })
    }

    pub fn measure(&self) -> &SigmaFiniteMeasure {
        &self.measure
    }
}

pub fn choose_dominating(p: &RenyiState, statistic: &Statistic, mode: NuMode) -> Result<DominatingMeasure> {
    let pushforward = p.representative().pushforward(statistic)?;
    match mode {
        NuMode::Counting => Ok(DominatingMeasure {
            measure: SigmaFiniteMeasure::counting(statistic.codomain()),
        }),
        NuMode::Pushforward => Ok(DominatingMeasure { measure: pushforward }),
        NuMode::Supplied(nu) => DominatingMeasure::new(nu, &pushforward),
    }
}

#[derive(Clone, Debug)]
pub struct ConditionalState {
    base: RenyiState,
    statistic: Statistic,
    nu: DominatingMeasure,
    // None is the zero table
    kernels: Vec<Option<SigmaFiniteMeasure>>,
}

pub fn disintegrate(p: &RenyiState, statistic: &Statistic, nu: &DominatingMeasure) -> Result<ConditionalState> {
    let mu = p.representative();
    let pushforward = mu.pushforward(statistic)?;
    let nu = DominatingMeasure::new(nu.measure.clone(), &pushforward)?;
    let domain = statistic.domain();
    let kernels = (0..statistic.codomain().len())
        .map(|t| {
            let nu_t = nu.measure.weight(t);
            if nu_t.is_zero() || pushforward.weight(t).is_zero() {
                return None;
            }
            let weights = mu
                .weights()
                .iter()
                .zip(statistic.map())
                .map(|(w, &s)| if s == t { w / nu_t } else { Rational::zero() })
                .collect();
            Some(SigmaFiniteMeasure::new(domain, weights).expect("fiber has positive mass"))
        })
        .collect();
    Ok(ConditionalState {
        base: p.clone(),
        statistic: statistic.clone(),
        nu,
        kernels,
    })
}

impl ConditionalState {
    pub fn base(&self) -> &RenyiState {
        &self.base
    }

    pub fn statistic(&self) -> &Statistic {
        &self.statistic
    }

    pub fn nu(&self) -> &DominatingMeasure {
        &self.nu
    }

    /// The kernel `P^t`, or `None` for the zero table.
    pub fn kernel(&self, t: usize) -> Option<&SigmaFiniteMeasure> {
        self.kernels[t].as_ref()
    }

    /// Kernel weights at `t` as a full table (zeros for the zero kernel).
    pub fn kernel_table(&self, t: usize) -> Vec<Rational> {
        match &self.kernels[t] {
            Some(k) => k.weights().to_vec(),
            None => vec![Rational::zero(); self.statistic.domain().len()],
        }
    }

    /// `P^t(A) = Σ_{T(ω)=t} A(ω) P^t(ω)`.
    pub fn kernel_mass(&self, a: &NonNegFunction, t: usize) -> Result<Rational> {
        self.statistic
            .domain()
            .ensure_same(a.carrier(), "function is not on the statistic's domain")?;
        match &self.kernels[t] {
            Some(k) => k.integrate(a),
            None => Ok(Rational::zero()),
        }
    }

    /// `P^t(A | B) = P^t(A 1_B) / P^t(B)`.
    ///
    /// Only defined where `μ({T = t} ∩ B) > 0`; elsewhere this is an error
    /// rather than a default value. The ratio never involves `ν` and is
    /// unchanged by rescaling the kernel.
    pub fn conditional_given(&self, a: &NonNegFunction, b: &Event, t: usize) -> Result<Rational> {
        if !self.base.is_elementary_condition(b) {
            return Err(Error::NotElementary(b.to_string()));
        }
        let kernel_b = self.kernel_mass(&b.indicator(), t)?;
        if kernel_b.is_zero() {
            return Err(Error::OffSupport {
                atom: self.statistic.codomain().atom(t).to_string(),
                condition: b.to_string(),
            });
        }
        Ok(self.kernel_mass(&a.restrict_to(b)?, t)? / kernel_b)
    }

    /// `P_T({t} | B) = μ({T = t} ∩ B) / μ(B)`.
    pub fn pushforward_given(&self, b: &Event, t: usize) -> Result<Rational> {
        let mu = self.base.representative();
        let mass_b = mu.mass(b)?;
        if mass_b.is_zero() {
            return Err(Error::NotElementary(b.to_string()));
        }
        Ok(mu.mass(&self.statistic.fiber(t).intersection(b)?)? / mass_b)
    }

    /// Replaces each kernel `P^t` by `c(t) P^t`. `c` must be positive
    /// wherever `P_T` is; elsewhere the kernel is the zero table and `c` is
    /// ignored.
    pub fn rescale(&self, c: &[Rational]) -> Result<ConditionalState> {
        let codomain = self.statistic.codomain();
        if c.len() != codomain.len() {
            return Err(Error::LengthMismatch {
                expected: codomain.len(),
                got: c.len(),
            });
        }
        let kernels = self
            .kernels
            .iter()
            .zip(c)
            .enumerate()
            .map(|(t, (k, factor))| match k {
                Some(k) => k
                    .scale(factor)
                    .map_err(|_| {
                        Error::NonPositiveScale(format!("{} at `{}`", rational::to_exact(factor), codomain.atom(t)))
                    })
                    .map(Some),
                None => Ok(None),
            })
            .collect::<Result<_>>()?;
        Ok(ConditionalState {
            kernels,
            ..self.clone()
        })
    }
}

/// One row of a factorization check, for a single `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorizationRow {
    pub t: usize,
    /// `P^t(A 1_B)`
    pub joint: Rational,
    /// `P^t(B)`
    pub kernel_b: Rational,
    /// `P^t(A | B)`, absent where `P^t(B) = 0`
    pub conditional: Option<Rational>,
    /// `P_T({t} | B)`
    pub pushforward_given: Rational,
    /// `(P^t(B) / P(B)) ν(t)`
    pub proof_rhs: Rational,
    pub factorization_holds: bool,
    pub proof_identity_holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorizationReport {
    /// `P(B)` for the stored representative.
    pub mass_b: Rational,
    pub rows: Vec<FactorizationRow>,
}

impl FactorizationReport {
    pub fn passed(&self) -> bool {
        self.rows
            .iter()
            .all(|r| r.factorization_holds && r.proof_identity_holds)
    }
}

/// Checks `P^t(A 1_B) = P^t(A | B) P^t(B)` at every `t` (with the left side
/// required to vanish where `P^t(B) = 0`), and
/// `P_T({t} | B) = (P^t(B) / P(B)) ν(t)` at every `t`.
pub fn verify_factorization(c: &ConditionalState, a: &NonNegFunction, b: &Event) -> Result<FactorizationReport> {
    let mass_b = c.base.representative().mass(b)?;
    if mass_b.is_zero() {
        return Err(Error::NotElementary(b.to_string()));
    }
    let a_on_b = a.restrict_to(b)?;
    let one_b = b.indicator();
    let rows = (0..c.statistic.codomain().len())
        .map(|t| {
            let joint = c.kernel_mass(&a_on_b, t)?;
            let kernel_b = c.kernel_mass(&one_b, t)?;
            let (conditional, factorization_holds) = if kernel_b.is_zero() {
                (None, joint.is_zero())
            } else {
                let cond = c.conditional_given(a, b, t)?;
                let holds = joint == &cond * &kernel_b;
                (Some(cond), holds)
            };
            let pushforward_given = c.pushforward_given(b, t)?;
            let proof_rhs = &kernel_b / &mass_b * c.nu.measure.weight(t);
            let proof_identity_holds = pushforward_given == proof_rhs;
            Ok(FactorizationRow {
                t,
                joint,
                kernel_b,
                conditional,
                pushforward_given,
                proof_rhs,
                factorization_holds,
                proof_identity_holds,
            })
        })
        .collect::<Result<_>>()?;
    Ok(FactorizationReport { mass_b, rows })
}

/// `E[A | T = t] = Σ_{T(ω)=t} A(ω) μ(ω) / μ(T = t)`; requires a finite,
/// normalizable state and `P_T(t) > 0`.
pub fn kolmogorov_conditional(p: &RenyiState, a: &NonNegFunction, statistic: &Statistic, t: usize) -> Result<Rational> {
    let nu = DominatingMeasure {
        measure: p.representative().pushforward(statistic)?,
    };
    let c = disintegrate(p, statistic, &nu)?;
    let whole = Event::full(statistic.domain());
    c.conditional_given(a, &whole, t)
}

impl ConditionalState {
    /// Total kernel mass `P^t(Ω)`; equals 1 on the support when `ν = P_T`.
    pub fn kernel_total(&self, t: usize) -> Rational {
        self.kernels[t]
            .as_ref()
            .map(SigmaFiniteMeasure::total)
            .unwrap_or_else(Rational::zero)
    }

    pub fn is_probability_kernel(&self, t: usize) -> bool {
        self.kernel_total(t).is_one()
    }
}
