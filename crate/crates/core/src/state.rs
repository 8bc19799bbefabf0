//! Rényi states, bunches of elementary conditions, conditional families and
//! the reconstruction of a generating measure from a consistent family.
//!
//! A [`RenyiState`] is the class `[μ] = {cμ | c > 0}`. It assigns
//! `P(A | B) = ∫ A 1_B dμ / μ(B)` to every elementary condition `B`
//! (`0 < μ(B)`), and that value does not depend on the representative.

use std::collections::{HashMap, HashSet, VecDeque};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::measure::{Carrier, Event, NonNegFunction, SigmaFiniteMeasure};
use crate::rational::{self, Rational};

#[derive(Clone, Debug)]
pub struct RenyiState {
    representative: SigmaFiniteMeasure,
}

impl RenyiState {
    pub fn new(representative: SigmaFiniteMeasure) -> Self {
        RenyiState { representative }
    }

    pub fn representative(&self) -> &SigmaFiniteMeasure {
        &self.representative
    }

    pub fn carrier(&self) -> &Carrier {
        self.representative.carrier()
    }

    /// `P(A | B)`.
    pub fn condition(&self, a: &NonNegFunction, b: &Event) -> Result<Rational> {
        let mass_b = self.representative.mass(b)?;
        if mass_b.is_zero() {
            return Err(Error::NotElementary(b.to_string()));
        }
        Ok(self.representative.integrate(&a.restrict_to(b)?)? / mass_b)
    }

    /// `P(A | B)` for an event `A`.
    pub fn probability(&self, a: &Event, b: &Event) -> Result<Rational> {
        self.condition(&a.indicator(), b)
    }

    pub fn is_elementary_condition(&self, b: &Event) -> bool {
        self.representative.mass(b).map(|m| !m.is_zero()).unwrap_or(false)
    }

    /// All events of positive mass. Refuses when `2^|Ω|` exceeds `limit`.
    pub fn maximal_bunch(&self, limit: u128) -> Result<Bunch> {
        let n = self.carrier().len();
        let too_large = Error::CarrierTooLarge { atoms: n, limit };
        if n >= 128 || (1u128 << n) > limit {
            return Err(too_large);
        }
        let conditions = (1u128..(1u128 << n))
            .map(|bits| Event::from_indices(self.carrier(), (0..n).filter(|&i| bits >> i & 1 == 1)))
            .filter(|e| self.is_elementary_condition(e))
            .collect();
        Bunch::new(self.carrier(), conditions)
    }

    pub fn states_equal(&self, other: &RenyiState) -> bool {
        states_equal(self, other)
    }
}

/// True iff one representative is a positive multiple of the other. The
/// factor is read off the first atom where either weight is nonzero and then
/// checked on every atom.
pub fn states_equal(p: &RenyiState, q: &RenyiState) -> bool {
    if p.carrier() != q.carrier() {
        return false;
    }
    let (pw, qw) = (p.representative.weights(), q.representative.weights());
    let Some(i) = (0..pw.len()).find(|&i| !pw[i].is_zero() || !qw[i].is_zero()) else {
        return false;
    };
    if pw[i].is_zero() || qw[i].is_zero() {
        return false;
    }
    let c = &qw[i] / &pw[i];
    pw.iter().zip(qw).all(|(a, b)| &(a * &c) == b)
}

impl PartialEq for RenyiState {
    fn eq(&self, other: &Self) -> bool {
        states_equal(self, other)
    }
}

/// A finite family of events, meant to satisfy the bunch axioms:
///
/// 1. `∅` is not a member,
/// 2. members are closed under pairwise union,
/// 3. the members cover the carrier.
///
/// Construction only deduplicates and orders the events (lexicographically by
/// member indices); the axioms are checked by [`Bunch::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bunch {
    carrier: Carrier,
    conditions: Vec<Event>,
}

impl Bunch {
    pub fn new(carrier: &Carrier, conditions: Vec<Event>) -> Result<Self> {
        for c in &conditions {
            carrier.ensure_same(c.carrier(), "bunch member on a different carrier")?;
        }
        let mut conditions = conditions;
        conditions.sort_by_key(Event::sort_key);
        conditions.dedup();
        Ok(Bunch {
            carrier: carrier.clone(),
            conditions,
        })
    }

    pub fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    pub fn conditions(&self) -> &[Event] {
        &self.conditions
    }

    pub fn len(&self) -> usize {
        self.conditions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.conditions.is_empty()
    }

    pub fn position(&self, event: &Event) -> Option<usize> {
        self.conditions.iter().position(|c| c == event)
    }

    pub fn validate(&self) -> BunchReport {
        let empty_member = self.conditions.iter().any(Event::is_empty);

        let members: HashSet<&[bool]> = self.conditions.iter().map(Event::mask).collect();
        let mut missing_union = None;
        'outer: for (i, b) in self.conditions.iter().enumerate() {
            for c in &self.conditions[i + 1..] {
                let u = b.union(c).expect("same carrier");
                if !members.contains(u.mask()) {
                    missing_union = Some((b.clone(), c.clone()));
                    break 'outer;
                }
            }
        }

        let mut covered = Event::empty(&self.carrier);
        for c in &self.conditions {
            covered = covered.union(c).expect("same carrier");
        }
        let uncovered = covered.complement();

        BunchReport {
            empty_member,
            missing_union,
            uncovered: (!uncovered.is_empty()).then_some(uncovered),
        }
    }
}

/// Outcome of checking the three bunch axioms, with a witness for each
/// violation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BunchReport {
    /// Axiom 1: `∅` is a member.
    pub empty_member: bool,
    /// Axiom 2: a pair whose union is not a member.
    pub missing_union: Option<(Event, Event)>,
    /// Axiom 3: atoms covered by no member.
    pub uncovered: Option<Event>,
}

impl BunchReport {
    pub fn is_valid(&self) -> bool {
        !self.empty_member && self.missing_union.is_none() && self.uncovered.is_none()
    }

    pub fn axiom_holds(&self, axiom: u8) -> bool {
        match axiom {
            1 => !self.empty_member,
            2 => self.missing_union.is_none(),
            3 => self.uncovered.is_none(),
            _ => true,
        }
    }

    /// Witness text for a violated axiom.
    pub fn witness(&self, axiom: u8) -> Option<String> {
        match axiom {
            1 => self.empty_member.then(|| "{} is a member".to_string()),
            2 => self
                .missing_union
                .as_ref()
                .map(|(b, c)| format!("union of {b} and {c} is missing")),
            3 => self.uncovered.as_ref().map(|u| format!("atoms {u} are not covered")),
            _ => None,
        }
    }

    pub fn first_violation(&self) -> Option<Error> {
        (1..=3).find(|&a| !self.axiom_holds(a)).map(|axiom| Error::BunchAxiom {
            axiom,
            detail: self.witness(axiom).unwrap_or_default(),
        })
    }

    pub fn into_result(self) -> Result<()> {
        self.first_violation().map_or(Ok(()), Err)
    }
}

pub fn validate_bunch(bunch: &Bunch) -> BunchReport {
    bunch.validate()
}

/// Smallest union-closed family containing `conditions`.
pub fn close_under_union(carrier: &Carrier, conditions: Vec<Event>) -> Result<Bunch> {
    let seed = Bunch::new(carrier, conditions)?;
    let report = seed.validate();
    if report.empty_member {
        return Err(report.first_violation().expect("axiom 1 violated"));
    }
    if !report.axiom_holds(3) {
        return Err(Error::BunchAxiom {
            axiom: 3,
            detail: report.witness(3).unwrap_or_default(),
        });
    }

    let mut members: Vec<Event> = seed.conditions.clone();
    let mut seen: HashSet<Vec<bool>> = members.iter().map(|e| e.mask().to_vec()).collect();
    let mut frontier = 0;
    // each new member is combined with everything before it exactly once
    while frontier < members.len() {
        let fresh = members[frontier].clone();
        for i in 0..frontier {
            let u = members[i].union(&fresh)?;
            if seen.insert(u.mask().to_vec()) {
                members.push(u);
            }
        }
        frontier += 1;
    }
    Bunch::new(carrier, members)
}

/// A family `{P(· | B) | B ∈ 𝓑}` of probability vectors, one per bunch
/// member, each supported inside its condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionalFamily {
    bunch: Bunch,
    tables: Vec<Vec<Rational>>,
}

impl ConditionalFamily {
    /// `tables[i]` is the vector for `bunch.conditions()[i]`, indexed by the
    /// atoms of the whole carrier.
    pub fn new(bunch: Bunch, tables: Vec<Vec<Rational>>) -> Result<Self> {
        if tables.len() != bunch.len() {
            return Err(Error::LengthMismatch {
                expected: bunch.len(),
                got: tables.len(),
            });
        }
        for (b, table) in bunch.conditions.iter().zip(&tables) {
            check_conditional_table(b, table)?;
        }
        Ok(ConditionalFamily { bunch, tables })
    }

    /// Builds the family from `(condition, vector)` pairs, which must name
    /// every bunch member exactly once.
    pub fn from_pairs(bunch: Bunch, pairs: Vec<(Event, Vec<Rational>)>) -> Result<Self> {
        let mut slots: Vec<Option<Vec<Rational>>> = vec![None; bunch.len()];
        for (event, table) in pairs {
            let i = bunch.position(&event).ok_or_else(|| Error::InvalidTable {
                condition: event.to_string(),
                detail: "condition is not a bunch member".into(),
            })?;
            if slots[i].replace(table).is_some() {
                return Err(Error::InvalidTable {
                    condition: event.to_string(),
                    detail: "duplicate table".into(),
                });
            }
        }
        let tables = slots
            .into_iter()
            .zip(&bunch.conditions)
            .map(|(slot, b)| {
                slot.ok_or_else(|| Error::InvalidTable {
                    condition: b.to_string(),
                    detail: "missing table".into(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(bunch, tables)
    }

    /// The family `B ↦ P(· | B)` induced by `state` on `bunch`.
    pub fn generate(state: &RenyiState, bunch: &Bunch) -> Result<Self> {
        state
            .carrier()
            .ensure_same(bunch.carrier(), "state and bunch on different carriers")?;
        let tables = bunch
            .conditions
            .iter()
            .map(|b| {
                let mass_b = state.representative().mass(b)?;
                if mass_b.is_zero() {
                    return Err(Error::NotElementary(b.to_string()));
                }
                Ok(state
                    .representative()
                    .weights()
                    .iter()
                    .zip(b.mask())
                    .map(|(w, &m)| if m { w / &mass_b } else { Rational::zero() })
                    .collect())
            })
            .collect::<Result<_>>()?;
        Ok(ConditionalFamily {
            bunch: bunch.clone(),
            tables,
        })
    }

    pub fn bunch(&self) -> &Bunch {
        &self.bunch
    }

    pub fn tables(&self) -> &[Vec<Rational>] {
        &self.tables
    }

    pub fn table(&self, condition: usize) -> &[Rational] {
        &self.tables[condition]
    }

    /// `F(A | B_i)` for the `i`-th condition.
    pub fn prob(&self, condition: usize, a: &Event) -> Rational {
        self.tables[condition]
            .iter()
            .zip(a.mask())
            .filter(|(_, &m)| m)
            .map(|(p, _)| p)
            .sum()
    }

    /// Copy with one table replaced, without re-checking the new table.
    #[doc(hidden)]
    pub fn with_table_unchecked(&self, condition: usize, table: Vec<Rational>) -> Self {
        let mut out = self.clone();
        out.tables[condition] = table;
        out
    }
}

fn check_conditional_table(b: &Event, table: &[Rational]) -> Result<()> {
    let invalid = |detail: String| Error::InvalidTable {
        condition: b.to_string(),
        detail,
    };
    if table.len() != b.carrier().len() {
        return Err(invalid(format!(
            "expected {} entries, got {}",
            b.carrier().len(),
            table.len()
        )));
    }
    for (i, p) in table.iter().enumerate() {
        if p < &Rational::zero() {
            return Err(invalid(format!("negative entry at `{}`", b.carrier().atom(i))));
        }
        if !p.is_zero() && !b.contains(i) {
            return Err(invalid(format!(
                "mass outside the condition at `{}`",
                b.carrier().atom(i)
            )));
        }
    }
    let total: Rational = table.iter().sum();
    if !total.is_one() {
        return Err(invalid(format!("entries sum to {}", rational::to_exact(&total))));
    }
    Ok(())
}

/// An instance of `F(A|B) ≠ F(AB|C) / F(B|C)` with `B ⊆ C`, `A = {atom}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConsistencyViolation {
    pub atom: usize,
    pub b: Event,
    pub c: Event,
    /// `F({atom} | B)`
    pub lhs: Rational,
    /// `F({atom} | C) / F(B | C)`
    pub rhs: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConsistencyReport {
    /// Nested pairs `B ⊆ C` with `F(B|C) > 0` that were checked.
    pub pairs_checked: usize,
    pub violation: Option<ConsistencyViolation>,
}

impl ConsistencyReport {
    pub fn is_consistent(&self) -> bool {
        self.violation.is_none()
    }
}

/// Checks `F(A|B) = F(AB|C) / F(B|C)` for every nested pair `B ⊆ C` with
/// `F(B|C) > 0`. Singletons `A = {a}`, `a ∈ B`, suffice since both sides are
/// additive in `A`. Stops at the first violation.
pub fn check_consistency(family: &ConditionalFamily) -> Result<ConsistencyReport> {
    family.bunch.validate().into_result()?;
    let conditions = &family.bunch.conditions;
    let mut pairs_checked = 0;
    for (ci, c) in conditions.iter().enumerate() {
        for (bi, b) in conditions.iter().enumerate() {
            if !b.is_subset(c) {
                continue;
            }
            let b_given_c = family.prob(ci, b);
            if b_given_c.is_zero() {
                continue;
            }
            pairs_checked += 1;
            for atom in b.indices() {
                let lhs = &family.tables[bi][atom];
                let rhs = &family.tables[ci][atom] / &b_given_c;
                if *lhs != rhs {
                    return Ok(ConsistencyReport {
                        pairs_checked,
                        violation: Some(ConsistencyViolation {
                            atom,
                            b: b.clone(),
                            c: c.clone(),
                            lhs: lhs.clone(),
                            rhs,
                        }),
                    });
                }
            }
        }
    }
    Ok(ConsistencyReport {
        pairs_checked,
        violation: None,
    })
}

/// Recovers a state `[μ]` that generates `family`.
///
/// Each condition `B` gets a scale `λ_B` with `μ|_B = λ_B · F(·|B)`, so that
/// `λ_B = μ(B)`. For every pair `B, C` with union `U`, `λ_B = λ_U · F(B|U)`.
/// The first condition (lexicographic order) is pinned to `λ = 1`, scales are
/// propagated breadth-first along these edges, and every pair constraint is
/// then verified, including atomwise agreement on `B ∩ C`.
pub fn reconstruct(family: &ConditionalFamily) -> Result<RenyiState> {
    let bunch = &family.bunch;
    bunch.validate().into_result()?;
    let conditions = &bunch.conditions;
    let k = conditions.len();
    let position: HashMap<&[bool], usize> = conditions.iter().enumerate().map(|(i, e)| (e.mask(), i)).collect();

    // (b, c, u, F(b|u), F(c|u)) for each unordered pair
    let mut edges = Vec::new();
    for bi in 0..k {
        for ci in bi + 1..k {
            let u = conditions[bi].union(&conditions[ci])?;
            let ui = position[u.mask()];
            let b_in_u = family.prob(ui, &conditions[bi]);
            let c_in_u = family.prob(ui, &conditions[ci]);
            for (x, ratio) in [(bi, &b_in_u), (ci, &c_in_u)] {
                if ratio.is_zero() {
                    let other = if x == bi { ci } else { bi };
                    return Err(Error::DegeneratePair {
                        b: conditions[x].to_string(),
                        c: conditions[other].to_string(),
                    });
                }
            }
            edges.push((bi, ci, ui, b_in_u, c_in_u));
        }
    }

    let mut adjacency: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); k];
    for (bi, ci, ui, b_in_u, c_in_u) in &edges {
        for (x, ratio) in [(*bi, b_in_u), (*ci, c_in_u)] {
            if x != *ui {
                // λ_x = λ_u · ratio
                adjacency[*ui].push((x, ratio.clone()));
                adjacency[x].push((*ui, ratio.recip()));
            }
        }
    }

    let mut scale: Vec<Option<Rational>> = vec![None; k];
    scale[0] = Some(Rational::one());
    let mut queue = VecDeque::from([0]);
    while let Some(i) = queue.pop_front() {
        let here = scale[i].clone().expect("visited");
        for (j, factor) in &adjacency[i] {
            if scale[*j].is_none() {
                scale[*j] = Some(&here * factor);
                queue.push_back(*j);
            }
        }
    }
    // a valid bunch contains the union of all members, adjacent to every node
    let scale: Vec<Rational> = scale
        .into_iter()
        .map(|s| s.expect("bunch graph is connected"))
        .collect();

    let not_representable = |b: usize, c: usize| Error::NotRepresentable {
        b: conditions[b].to_string(),
        c: conditions[c].to_string(),
    };
    for (bi, ci, ui, b_in_u, c_in_u) in &edges {
        if scale[*bi] != &scale[*ui] * b_in_u || scale[*ci] != &scale[*ui] * c_in_u {
            return Err(not_representable(*bi, *ci));
        }
        let overlap = conditions[*bi].intersection(&conditions[*ci])?;
        for atom in overlap.indices() {
            if &scale[*bi] * &family.tables[*bi][atom] != &scale[*ci] * &family.tables[*ci][atom] {
                return Err(not_representable(*bi, *ci));
            }
        }
    }

    let whole = conditions
        .iter()
        .position(Event::is_full)
        .expect("valid bunch contains the carrier");
    let weights = family.tables[whole].iter().map(|p| p * &scale[whole]).collect();
    let mu = SigmaFiniteMeasure::new(bunch.carrier(), weights)?;
    Ok(RenyiState::new(mu))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn abc() -> Carrier {
        Carrier::new(["a", "b", "c"]).unwrap()
    }

    fn ev(c: &Carrier, atoms: &[&str]) -> Event {
        Event::from_atoms(c, atoms).unwrap()
    }

    fn state(c: &Carrier, w: &[i64]) -> RenyiState {
        RenyiState::new(SigmaFiniteMeasure::new(c, w.iter().map(|&x| int(x)).collect()).unwrap())
    }

    #[test]
    fn condition_examples() {
        let die = Carrier::numbered(6).unwrap();
        let p = RenyiState::new(SigmaFiniteMeasure::counting(&die));
        let evens = ev(&die, &["2", "4", "6"]);
        assert_eq!(p.probability(&evens, &Event::full(&die)).unwrap(), ratio(1, 2));

        let c = abc();
        let p = state(&c, &[1, 2, 3]);
        assert_eq!(
            p.probability(&ev(&c, &["a"]), &ev(&c, &["a", "b"])).unwrap(),
            ratio(1, 3)
        );

        let p = state(&c, &[1, 2, 0]);
        let err = p.probability(&ev(&c, &["a"]), &ev(&c, &["c"])).unwrap_err();
        assert!(matches!(err, Error::NotElementary(_)));
    }

    #[test]
    fn elementary_condition_examples() {
        let c = abc();
        let p = state(&c, &[1, 0, 3]);
        assert!(!p.is_elementary_condition(&ev(&c, &["b"])));
        assert!(p.is_elementary_condition(&Event::full(&c)));
        assert!(p.is_elementary_condition(&ev(&c, &["a", "b"])));
        assert!(!p.is_elementary_condition(&Event::empty(&c)));
    }

    #[test]
    fn maximal_bunch_examples() {
        let ab = Carrier::new(["a", "b"]).unwrap();
        let bunch = state(&ab, &[1, 1]).maximal_bunch(1 << 20).unwrap();
        assert_eq!(
            bunch.conditions(),
            &[ev(&ab, &["a"]), ev(&ab, &["a", "b"]), ev(&ab, &["b"])]
        );

        let bunch = state(&ab, &[1, 0]).maximal_bunch(1 << 20).unwrap();
        assert_eq!(bunch.conditions(), &[ev(&ab, &["a"]), ev(&ab, &["a", "b"])]);
        assert!(bunch.validate().is_valid());

        let big = RenyiState::new(SigmaFiniteMeasure::counting(&Carrier::numbered(40).unwrap()));
        assert!(matches!(
            big.maximal_bunch(1 << 20),
            Err(Error::CarrierTooLarge { atoms: 40, .. })
        ));
        let huge = RenyiState::new(SigmaFiniteMeasure::counting(&Carrier::numbered(200).unwrap()));
        assert!(matches!(
            huge.maximal_bunch(u128::MAX),
            Err(Error::CarrierTooLarge { .. })
        ));
    }

    #[test]
    fn validate_bunch_examples() {
        let ab = Carrier::new(["a", "b"]).unwrap();
        let ok = Bunch::new(&ab, vec![ev(&ab, &["a"]), ev(&ab, &["b"]), ev(&ab, &["a", "b"])]).unwrap();
        assert!(validate_bunch(&ok).is_valid());

        let no_union = Bunch::new(&ab, vec![ev(&ab, &["a"]), ev(&ab, &["b"])]).unwrap();
        let report = validate_bunch(&no_union);
        assert!(report.axiom_holds(1) && report.axiom_holds(3));
        assert_eq!(report.missing_union, Some((ev(&ab, &["a"]), ev(&ab, &["b"]))));

        let with_empty = Bunch::new(&ab, vec![Event::empty(&ab), ev(&ab, &["a", "b"])]).unwrap();
        let report = validate_bunch(&with_empty);
        assert!(!report.axiom_holds(1));
        assert!(matches!(
            report.first_violation(),
            Some(Error::BunchAxiom { axiom: 1, .. })
        ));
    }

    #[test]
    fn close_under_union_examples() {
        let ab = Carrier::new(["a", "b"]).unwrap();
        let closed = close_under_union(&ab, vec![ev(&ab, &["a"]), ev(&ab, &["b"])]).unwrap();
        assert_eq!(
            closed.conditions(),
            &[ev(&ab, &["a"]), ev(&ab, &["a", "b"]), ev(&ab, &["b"])]
        );
        assert_eq!(close_under_union(&ab, closed.conditions().to_vec()).unwrap(), closed);

        let err = close_under_union(&ab, vec![ev(&ab, &["a"])]).unwrap_err();
        assert!(matches!(err, Error::BunchAxiom { axiom: 3, .. }));
        let err = close_under_union(&ab, vec![Event::empty(&ab), ev(&ab, &["a", "b"])]).unwrap_err();
        assert!(matches!(err, Error::BunchAxiom { axiom: 1, .. }));
    }

    #[test]
    fn generated_family_is_consistent() {
        let c = abc();
        let p = state(&c, &[1, 2, 3]);
        let bunch = p.maximal_bunch(1 << 10).unwrap();
        let family = ConditionalFamily::generate(&p, &bunch).unwrap();
        let report = check_consistency(&family).unwrap();
        assert!(report.is_consistent());
        assert!(report.pairs_checked >= bunch.len());
    }

    #[test]
    fn inconsistent_table_is_reported() {
        // P({a}|{a,b}) = 1/2, P({a}|{a,b,c}) = 1/6, P({a,b}|{a,b,c}) = 1/2
        let c = abc();
        let ab = ev(&c, &["a", "b"]);
        let all = Event::full(&c);
        let bunch = Bunch::new(&c, vec![ab.clone(), all.clone()]).unwrap();
        let family = ConditionalFamily::from_pairs(
            bunch,
            vec![
                (ab.clone(), vec![ratio(1, 2), ratio(1, 2), int(0)]),
                (all.clone(), vec![ratio(1, 6), ratio(1, 3), ratio(1, 2)]),
            ],
        )
        .unwrap();
        let v = check_consistency(&family).unwrap().violation.unwrap();
        assert_eq!((v.atom, &v.b, &v.c), (0, &ab, &all));
        assert_eq!(v.lhs, ratio(1, 2));
        assert_eq!(v.rhs, ratio(1, 3));
    }

    #[test]
    fn unnested_bunch_is_trivially_consistent() {
        // only reflexive nesting besides members inside Ω; a single-member bunch
        let c = abc();
        let bunch = Bunch::new(&c, vec![Event::full(&c)]).unwrap();
        let family = ConditionalFamily::new(bunch, vec![vec![ratio(1, 2), ratio(1, 4), ratio(1, 4)]]).unwrap();
        let report = check_consistency(&family).unwrap();
        assert!(report.is_consistent());
        assert_eq!(report.pairs_checked, 1);
    }

    #[test]
    fn consistency_requires_valid_bunch() {
        let ab = Carrier::new(["a", "b"]).unwrap();
        let bunch = Bunch::new(&ab, vec![ev(&ab, &["a"]), ev(&ab, &["b"])]).unwrap();
        let family = ConditionalFamily::new(bunch, vec![vec![int(1), int(0)], vec![int(0), int(1)]]).unwrap();
        assert!(matches!(
            check_consistency(&family),
            Err(Error::BunchAxiom { axiom: 2, .. })
        ));
    }

    #[test]
    fn family_tables_are_checked() {
        let c = abc();
        let ab = ev(&c, &["a", "b"]);
        let bunch = Bunch::new(&c, vec![ab.clone(), Event::full(&c)]).unwrap();
        let outside = ConditionalFamily::new(
            bunch.clone(),
            vec![vec![ratio(1, 2), int(0), ratio(1, 2)], vec![int(1), int(0), int(0)]],
        );
        assert!(matches!(outside, Err(Error::InvalidTable { .. })));
        let unnormalized = ConditionalFamily::new(
            bunch.clone(),
            vec![vec![int(1), int(1), int(0)], vec![int(1), int(0), int(0)]],
        );
        assert!(matches!(unnormalized, Err(Error::InvalidTable { .. })));
        let missing = ConditionalFamily::from_pairs(bunch, vec![(ab, vec![int(1), int(0), int(0)])]);
        assert!(matches!(missing, Err(Error::InvalidTable { .. })));
    }

    #[test]
    fn reconstruct_round_trip() {
        let c = abc();
        let p = state(&c, &[1, 2, 3]);
        let bunch = Bunch::new(&c, vec![ev(&c, &["a", "b"]), ev(&c, &["b", "c"]), Event::full(&c)]).unwrap();
        let family = ConditionalFamily::generate(&p, &bunch).unwrap();
        let q = reconstruct(&family).unwrap();
        assert!(states_equal(&p, &q));
        // reference condition {a b} is pinned to mass 1
        assert_eq!(q.representative().mass(&ev(&c, &["a", "b"])).unwrap(), int(1));
        assert_eq!(q.representative().weights(), &[ratio(1, 3), ratio(2, 3), int(1)]);
    }

    #[test]
    fn reconstruct_single_condition() {
        let die = Carrier::numbered(6).unwrap();
        let bunch = Bunch::new(&die, vec![Event::full(&die)]).unwrap();
        let family = ConditionalFamily::new(bunch, vec![vec![ratio(1, 6); 6]]).unwrap();
        let q = reconstruct(&family).unwrap();
        assert!(states_equal(&q, &RenyiState::new(SigmaFiniteMeasure::counting(&die))));
    }

    #[test]
    fn reconstruct_rejects_perturbed_family() {
        let c = abc();
        let p = state(&c, &[1, 2, 3]);
        let ab = ev(&c, &["a", "b"]);
        let bunch = Bunch::new(&c, vec![ab.clone(), ev(&c, &["b", "c"]), Event::full(&c)]).unwrap();
        let family = ConditionalFamily::generate(&p, &bunch).unwrap();
        let i = bunch.position(&ab).unwrap();
        let perturbed = family.with_table_unchecked(i, vec![ratio(1, 2), ratio(1, 2), int(0)]);
        let err = reconstruct(&perturbed).unwrap_err();
        assert!(matches!(err, Error::NotRepresentable { .. }), "{err:?}");
    }

    #[test]
    fn reconstruct_rejects_degenerate_pair() {
        // F({a} | {a b}) = 0 although {a} is a condition
        let ab = Carrier::new(["a", "b"]).unwrap();
        let bunch = Bunch::new(&ab, vec![ev(&ab, &["a"]), ev(&ab, &["b"]), Event::full(&ab)]).unwrap();
        let family = ConditionalFamily::from_pairs(
            bunch,
            vec![
                (ev(&ab, &["a"]), vec![int(1), int(0)]),
                (ev(&ab, &["b"]), vec![int(0), int(1)]),
                (Event::full(&ab), vec![int(0), int(1)]),
            ],
        )
        .unwrap();
        assert!(check_consistency(&family).unwrap().is_consistent());
        assert!(matches!(reconstruct(&family), Err(Error::DegeneratePair { .. })));
    }

    #[test]
    fn states_equal_examples() {
        let c = abc();
        assert!(states_equal(&state(&c, &[1, 2, 3]), &state(&c, &[2, 4, 6])));
        assert!(!states_equal(&state(&c, &[1, 2, 3]), &state(&c, &[1, 2, 4])));
        assert!(states_equal(&state(&c, &[1, 0, 3]), &state(&c, &[2, 0, 6])));
        assert!(!states_equal(&state(&c, &[0, 1, 3]), &state(&c, &[1, 1, 3])));
        assert!(!states_equal(&state(&c, &[1, 0, 3]), &state(&c, &[1, 1, 3])));
        let other = Carrier::new(["x", "y", "z"]).unwrap();
        assert!(!states_equal(&state(&c, &[1, 2, 3]), &state(&other, &[1, 2, 3])));
    }
}
