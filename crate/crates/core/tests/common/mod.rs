//! Random model generators and brute-force oracles shared by the integration
//! suites. Oracles work on plain `Vec<Rational>` tables and never call the
//! library operations they are used to check.

#![allow(dead_code)]

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use renyi::rational::{int, ratio};
use renyi::{Carrier, Event, NonNegFunction, Rational, SigmaFiniteMeasure, Statistic};

pub use rand::SeedableRng;
pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn carrier(n: usize) -> Carrier {
    Carrier::new((0..n).map(|i| format!("w{i}"))).unwrap()
}

/// Nonnegative rational with small numerator and denominator; zero with
/// probability `p_zero`.
pub fn weight(rng: &mut TestRng, p_zero: f64) -> Rational {
    if rng.gen_bool(p_zero) {
        Rational::zero()
    } else {
        ratio(rng.gen_range(1..=12), rng.gen_range(1..=7))
    }
}

pub fn positive(rng: &mut TestRng) -> Rational {
    ratio(rng.gen_range(1..=20), rng.gen_range(1..=9))
}

/// Random weights on `n` atoms, at least one positive.
pub fn weights(rng: &mut TestRng, n: usize) -> Vec<Rational> {
    let mut w: Vec<Rational> = (0..n).map(|_| weight(rng, 0.25)).collect();
    if w.iter().all(Zero::is_zero) {
        let i = rng.gen_range(0..n);
        w[i] = positive(rng);
    }
    w
}

pub fn measure(rng: &mut TestRng, max_atoms: usize) -> SigmaFiniteMeasure {
    let n = rng.gen_range(1..=max_atoms);
    let c = carrier(n);
    SigmaFiniteMeasure::new(&c, weights(rng, n)).unwrap()
}

pub fn function(rng: &mut TestRng, c: &Carrier) -> NonNegFunction {
    NonNegFunction::new(c, (0..c.len()).map(|_| weight(rng, 0.3)).collect()).unwrap()
}

pub fn event(rng: &mut TestRng, c: &Carrier) -> Event {
    let mask = (0..c.len()).map(|_| rng.gen_bool(0.5)).collect();
    Event::from_mask(c, mask).unwrap()
}

/// Event with positive mass under `weights`.
pub fn elementary_event(rng: &mut TestRng, c: &Carrier, weights: &[Rational]) -> Event {
    loop {
        let e = event(rng, c);
        if e.indices().any(|i| !weights[i].is_zero()) {
            return e;
        }
    }
}

pub fn statistic(rng: &mut TestRng, domain: &Carrier) -> Statistic {
    let k = rng.gen_range(1..=4);
    let codomain = Carrier::new((0..k).map(|i| format!("t{i}"))).unwrap();
    let map = (0..domain.len()).map(|_| rng.gen_range(0..k)).collect();
    Statistic::from_indices(domain, &codomain, map).unwrap()
}

pub fn shuffled<T>(rng: &mut TestRng, mut items: Vec<T>) -> Vec<T> {
    items.shuffle(rng);
    items
}

// ---- oracles ----

pub fn sum(values: impl IntoIterator<Item = Rational>) -> Rational {
    values.into_iter().fold(Rational::zero(), |a, b| a + b)
}

/// `Σ_{ω ∈ B} f(ω) μ(ω)` by direct enumeration.
pub fn integral_over(f: &[Rational], mu: &[Rational], b: &[bool]) -> Rational {
    sum((0..mu.len()).filter(|&i| b[i]).map(|i| &f[i] * &mu[i]))
}

pub fn mass_of(mu: &[Rational], b: &[bool]) -> Rational {
    sum((0..mu.len()).filter(|&i| b[i]).map(|i| mu[i].clone()))
}

/// Elementary `P(A | B) = ∫_B A dμ / μ(B)`.
pub fn conditional(a: &[Rational], mu: &[Rational], b: &[bool]) -> Rational {
    integral_over(a, mu, b) / mass_of(mu, b)
}

/// Elementary `E[A | T = t]` by enumerating the fiber.
pub fn fiber_expectation(a: &[Rational], mu: &[Rational], map: &[usize], t: usize) -> Option<Rational> {
    let fiber: Vec<bool> = map.iter().map(|&s| s == t).collect();
    let m = mass_of(mu, &fiber);
    (!m.is_zero()).then(|| integral_over(a, mu, &fiber) / m)
}

/// `P_T({t} | B)` by enumeration.
pub fn pushforward_given(mu: &[Rational], map: &[usize], b: &[bool], t: usize) -> Rational {
    let joint: Vec<bool> = (0..mu.len()).map(|i| b[i] && map[i] == t).collect();
    mass_of(mu, &joint) / mass_of(mu, b)
}

/// The probability vector `μ(· ∩ B) / μ(B)` on the whole carrier.
pub fn conditional_vector(mu: &[Rational], b: &[bool]) -> Vec<Rational> {
    let m = mass_of(mu, b);
    (0..mu.len())
        .map(|i| if b[i] { &mu[i] / &m } else { Rational::zero() })
        .collect()
}

/// Scale-equivalence by cross-multiplication: `p_i q_j = p_j q_i` for all
/// `i, j`, plus matching zero patterns.
pub fn proportional(p: &[Rational], q: &[Rational]) -> bool {
    p.len() == q.len()
        && (0..p.len()).all(|i| p[i].is_zero() == q[i].is_zero())
        && (0..p.len()).all(|i| (0..p.len()).all(|j| &p[i] * &q[j] == &p[j] * &q[i]))
        && p.iter().any(|x| !x.is_zero())
}

pub fn one() -> Rational {
    int(1)
}
