//! Finite carriers, events, nonnegative functions and measures with exact
//! rational weights.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

#[derive(Debug)]
struct CarrierInner {
    atoms: Vec<String>,
    index: HashMap<String, usize>,
}

/// An ordered, non-empty set of distinct atom labels.
///
/// Cloning is cheap. Two carriers are equal when they list the same labels in
/// the same order.
#[derive(Clone)]
pub struct Carrier(Arc<CarrierInner>);

impl Carrier {
    pub fn new<I, S>(atoms: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let atoms: Vec<String> = atoms.into_iter().map(Into::into).collect();
        if atoms.is_empty() {
            return Err(Error::EmptyCarrier);
        }
        let mut index = HashMap::with_capacity(atoms.len());
        for (i, atom) in atoms.iter().enumerate() {
            if index.insert(atom.clone(), i).is_some() {
                return Err(Error::DuplicateAtom(atom.clone()));
            }
        }
        Ok(Carrier(Arc::new(CarrierInner { atoms, index })))
    }

    /// Carrier with atoms labelled `1..=n`.
    pub fn numbered(n: usize) -> Result<Self> {
        Self::new((1..=n).map(|i| i.to_string()))
    }

    pub fn len(&self) -> usize {
        self.0.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn atoms(&self) -> &[String] {
        &self.0.atoms
    }

    pub fn atom(&self, i: usize) -> &str {
        &self.0.atoms[i]
    }

    pub fn index_of(&self, atom: &str) -> Result<usize> {
        self.0
            .index
            .get(atom)
            .copied()
            .ok_or_else(|| Error::UnknownAtom(atom.to_string()))
    }

    pub fn contains(&self, atom: &str) -> bool {
        self.0.index.contains_key(atom)
    }

    pub(crate) fn ensure_same(&self, other: &Carrier, what: &'static str) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::CarrierMismatch(what))
        }
    }
}

impl PartialEq for Carrier {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.atoms == other.0.atoms
    }
}

impl Eq for Carrier {}

impl fmt::Debug for Carrier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.atoms()).finish()
    }
}

/// A subset of a carrier. The empty event is allowed.
#[derive(Clone, PartialEq, Eq)]
pub struct Event {
    carrier: Carrier,
    members: Vec<bool>,
}

impl Event {
    pub fn from_atoms<I, S>(carrier: &Carrier, atoms: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut members = vec![false; carrier.len()];
        for atom in atoms {
            members[carrier.index_of(atom.as_ref())?] = true;
        }
        Ok(Event {
            carrier: carrier.clone(),
            members,
        })
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(carrier: &Carrier, indices: I) -> Self {
        let mut members = vec![false; carrier.len()];
        for i in indices {
            members[i] = true;
        }
        Event {
            carrier: carrier.clone(),
            members,
        }
    }

    pub fn from_mask(carrier: &Carrier, members: Vec<bool>) -> Result<Self> {
        if members.len() != carrier.len() {
            return Err(Error::LengthMismatch {
                expected: carrier.len(),
                got: members.len(),
            });
        }
        Ok(Event {
            carrier: carrier.clone(),
            members,
        })
    }

    pub fn empty(carrier: &Carrier) -> Self {
        Event {
            carrier: carrier.clone(),
            members: vec![false; carrier.len()],
        }
    }

    pub fn full(carrier: &Carrier) -> Self {
        Event {
            carrier: carrier.clone(),
            members: vec![true; carrier.len()],
        }
    }

    pub fn singleton(carrier: &Carrier, i: usize) -> Self {
        Self::from_indices(carrier, [i])
    }

    pub fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members[i]
    }

    pub fn mask(&self) -> &[bool] {
        &self.members
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().enumerate().filter(|(_, &m)| m).map(|(i, _)| i)
    }

    pub fn labels(&self) -> Vec<&str> {
        self.indices().map(|i| self.carrier.atom(i)).collect()
    }

    pub fn len(&self) -> usize {
        self.members.iter().filter(|&&m| m).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.members.iter().any(|&m| m)
    }

    pub fn is_full(&self) -> bool {
        self.members.iter().all(|&m| m)
    }

    pub fn union(&self, other: &Event) -> Result<Event> {
        self.zip(other, |a, b| a || b)
    }

    pub fn intersection(&self, other: &Event) -> Result<Event> {
        self.zip(other, |a, b| a && b)
    }

    pub fn complement(&self) -> Event {
        Event {
            carrier: self.carrier.clone(),
            members: self.members.iter().map(|m| !m).collect(),
        }
    }

    pub fn is_subset(&self, other: &Event) -> bool {
        self.carrier == other.carrier && self.members.iter().zip(&other.members).all(|(&a, &b)| !a || b)
    }

    pub fn indicator(&self) -> NonNegFunction {
        NonNegFunction {
            carrier: self.carrier.clone(),
            values: self
                .members
                .iter()
                .map(|&m| if m { rational::int(1) } else { Rational::zero() })
                .collect(),
        }
    }

    /// Member indices in carrier order; the key that orders events
    /// lexicographically.
    pub fn sort_key(&self) -> Vec<usize> {
        self.indices().collect()
    }

    fn zip(&self, other: &Event, op: impl Fn(bool, bool) -> bool) -> Result<Event> {
        self.carrier
            .ensure_same(&other.carrier, "events on different carriers")?;
        Ok(Event {
            carrier: self.carrier.clone(),
            members: self
                .members
                .iter()
                .zip(&other.members)
                .map(|(&a, &b)| op(a, b))
                .collect(),
        })
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.labels().join(" "))
    }
}

impl fmt::Debug for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A total function from the atoms of a carrier to the nonnegative rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonNegFunction {
    carrier: Carrier,
    values: Vec<Rational>,
}

impl NonNegFunction {
    pub fn new(carrier: &Carrier, values: Vec<Rational>) -> Result<Self> {
        check_table(carrier, &values)?;
        Ok(NonNegFunction {
            carrier: carrier.clone(),
            values,
        })
    }

    pub fn constant(carrier: &Carrier, value: Rational) -> Result<Self> {
        Self::new(carrier, vec![value; carrier.len()])
    }

    pub fn zero(carrier: &Carrier) -> Self {
        NonNegFunction {
            carrier: carrier.clone(),
            values: vec![Rational::zero(); carrier.len()],
        }
    }

    pub fn one(carrier: &Carrier) -> Self {
        Event::full(carrier).indicator()
    }

    pub fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn value(&self, i: usize) -> &Rational {
        &self.values[i]
    }

    pub fn add(&self, other: &NonNegFunction) -> Result<NonNegFunction> {
        self.carrier
            .ensure_same(&other.carrier, "functions on different carriers")?;
        Ok(NonNegFunction {
            carrier: self.carrier.clone(),
            values: self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn mul(&self, other: &NonNegFunction) -> Result<NonNegFunction> {
        self.carrier
            .ensure_same(&other.carrier, "functions on different carriers")?;
        Ok(NonNegFunction {
            carrier: self.carrier.clone(),
            values: self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect(),
        })
    }

    /// `f · 1_B`.
    pub fn restrict_to(&self, event: &Event) -> Result<NonNegFunction> {
        self.carrier
            .ensure_same(event.carrier(), "function and event on different carriers")?;
        Ok(NonNegFunction {
            carrier: self.carrier.clone(),
            values: self
                .values
                .iter()
                .zip(event.mask())
                .map(|(v, &m)| if m { v.clone() } else { Rational::zero() })
                .collect(),
        })
    }

    /// `φ ∘ T` for `φ` on the codomain of `statistic`.
    pub fn pull_back(&self, statistic: &Statistic) -> Result<NonNegFunction> {
        self.carrier
            .ensure_same(statistic.codomain(), "function is not on the statistic's codomain")?;
        Ok(NonNegFunction {
            carrier: statistic.domain().clone(),
            values: statistic.map().iter().map(|&t| self.values[t].clone()).collect(),
        })
    }
}

/// A measure on a finite carrier: finite nonnegative weights, not all zero.
///
/// On a finite carrier every such measure is σ-finite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaFiniteMeasure {
    carrier: Carrier,
    weights: Vec<Rational>,
}

impl SigmaFiniteMeasure {
    pub fn new(carrier: &Carrier, weights: Vec<Rational>) -> Result<Self> {
        check_table(carrier, &weights)?;
        if weights.iter().all(Zero::is_zero) {
            return Err(Error::ZeroMeasure);
        }
        Ok(SigmaFiniteMeasure {
            carrier: carrier.clone(),
            weights,
        })
    }

    pub fn counting(carrier: &Carrier) -> Self {
        SigmaFiniteMeasure {
            carrier: carrier.clone(),
            weights: vec![rational::int(1); carrier.len()],
        }
    }

    pub fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn weight(&self, i: usize) -> &Rational {
        &self.weights[i]
    }

    pub fn total(&self) -> Rational {
        self.weights.iter().sum()
    }

    /// `∫ f dμ = Σ f(ω) μ(ω)`.
    pub fn integrate(&self, f: &NonNegFunction) -> Result<Rational> {
        self.carrier
            .ensure_same(f.carrier(), "function and measure on different carriers")?;
        Ok(f.values.iter().zip(&self.weights).map(|(v, w)| v * w).sum())
    }

    /// `μ(B)`.
    pub fn mass(&self, event: &Event) -> Result<Rational> {
        self.carrier
            .ensure_same(event.carrier(), "event and measure on different carriers")?;
        Ok(self
            .weights
            .iter()
            .zip(event.mask())
            .filter(|(_, &m)| m)
            .map(|(w, _)| w)
            .sum())
    }

    pub fn scale(&self, c: &Rational) -> Result<SigmaFiniteMeasure> {
        if !rational::is_positive(c) {
            return Err(Error::NonPositiveScale(rational::to_exact(c)));
        }
        Ok(SigmaFiniteMeasure {
            carrier: self.carrier.clone(),
            weights: self.weights.iter().map(|w| w * c).collect(),
        })
    }

    /// `μ(· ∩ B)`; fails when `μ(B) = 0`.
    pub fn restrict(&self, event: &Event) -> Result<SigmaFiniteMeasure> {
        self.carrier
            .ensure_same(event.carrier(), "event and measure on different carriers")?;
        let weights: Vec<Rational> = self
            .weights
            .iter()
            .zip(event.mask())
            .map(|(w, &m)| if m { w.clone() } else { Rational::zero() })
            .collect();
        if weights.iter().all(Zero::is_zero) {
            return Err(Error::NullRestriction(event.to_string()));
        }
        Ok(SigmaFiniteMeasure {
            carrier: self.carrier.clone(),
            weights,
        })
    }

    /// Image measure under `statistic`: weight at `t` is the mass of the
    /// fiber `T⁻¹(t)`.
    pub fn pushforward(&self, statistic: &Statistic) -> Result<SigmaFiniteMeasure> {
        self.carrier
            .ensure_same(statistic.domain(), "measure is not on the statistic's domain")?;
        let mut weights = vec![Rational::zero(); statistic.codomain().len()];
        for (w, &t) in self.weights.iter().zip(statistic.map()) {
            weights[t] += w;
        }
        Ok(SigmaFiniteMeasure {
            carrier: statistic.codomain().clone(),
            weights,
        })
    }

    /// Support `{ω : μ(ω) > 0}`.
    pub fn support(&self) -> Event {
        Event {
            carrier: self.carrier.clone(),
            members: self.weights.iter().map(|w| !w.is_zero()).collect(),
        }
    }
}

/// A total map `T : Ω → Ω_T` between finite carriers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Statistic {
    domain: Carrier,
    codomain: Carrier,
    map: Vec<usize>,
}

impl Statistic {
    /// Builds `T` from codomain labels listed in domain order.
    pub fn new<S: AsRef<str>>(domain: &Carrier, codomain: &Carrier, images: &[S]) -> Result<Self> {
        if images.len() != domain.len() {
            return Err(Error::LengthMismatch {
                expected: domain.len(),
                got: images.len(),
            });
        }
        let map = images
            .iter()
            .map(|t| codomain.index_of(t.as_ref()))
            .collect::<Result<_>>()?;
        Ok(Statistic {
            domain: domain.clone(),
            codomain: codomain.clone(),
            map,
        })
    }

    pub fn from_indices(domain: &Carrier, codomain: &Carrier, map: Vec<usize>) -> Result<Self> {
        if map.len() != domain.len() {
            return Err(Error::LengthMismatch {
                expected: domain.len(),
                got: map.len(),
            });
        }
        if let Some(&bad) = map.iter().find(|&&t| t >= codomain.len()) {
            return Err(Error::UnknownAtom(format!("codomain index {bad}")));
        }
        Ok(Statistic {
            domain: domain.clone(),
            codomain: codomain.clone(),
            map,
        })
    }

    pub fn identity(carrier: &Carrier) -> Self {
        Statistic {
            domain: carrier.clone(),
            codomain: carrier.clone(),
            map: (0..carrier.len()).collect(),
        }
    }

    pub fn domain(&self) -> &Carrier {
        &self.domain
    }

    pub fn codomain(&self) -> &Carrier {
        &self.codomain
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn image_of(&self, i: usize) -> usize {
        self.map[i]
    }

    /// The fiber `{ω : T(ω) = t}`.
    pub fn fiber(&self, t: usize) -> Event {
        Event::from_indices(
            &self.domain,
            self.map.iter().enumerate().filter(|(_, &s)| s == t).map(|(i, _)| i),
        )
    }

    /// `T⁻¹(C)`.
    pub fn preimage(&self, event: &Event) -> Result<Event> {
        self.codomain
            .ensure_same(event.carrier(), "event is not on the statistic's codomain")?;
        Ok(Event::from_indices(
            &self.domain,
            (0..self.map.len()).filter(|&i| event.contains(self.map[i])),
        ))
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &Statistic) -> Result<Statistic> {
        self.codomain.ensure_same(&next.domain, "statistics do not compose")?;
        Ok(Statistic {
            domain: self.domain.clone(),
            codomain: next.codomain.clone(),
            map: self.map.iter().map(|&t| next.map[t]).collect(),
        })
    }
}

fn check_table(carrier: &Carrier, values: &[Rational]) -> Result<()> {
    if values.len() != carrier.len() {
        return Err(Error::LengthMismatch {
            expected: carrier.len(),
            got: values.len(),
        });
    }
    if let Some((i, v)) = values.iter().enumerate().find(|(_, v)| v < &&Rational::zero()) {
        return Err(Error::NegativeValue {
            atom: carrier.atom(i).to_string(),
            value: rational::to_exact(v),
        });
    }
    Ok(())
}

pub fn integrate(f: &NonNegFunction, m: &SigmaFiniteMeasure) -> Result<Rational> {
    m.integrate(f)
}

pub fn mass(event: &Event, m: &SigmaFiniteMeasure) -> Result<Rational> {
    m.mass(event)
}
