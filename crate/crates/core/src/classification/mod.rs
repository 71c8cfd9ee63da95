//! Classification tuples `[P,L,f,Q]` and `[S,M,F,g,Q]`, the bijection
//! between them, signatures, isomorphism and enumeration.

mod bijection;
mod enumerate;
mod omega;
mod random;
mod signature;

pub use bijection::{ca_to_tba, tba_to_ca};
pub use enumerate::{enumerate_ca_systems, enumerate_posystems, enumerate_systems, Enumeration};
pub use omega::{omega_cat_check, OmegaDecision};
pub use random::{random_posystem, random_tba_system};
pub use signature::{signature_of, signature_realizable, Signature};

use std::fmt;

use serde::Serialize;

use crate::algebra::{generate_algebra, AlgebraKind};
use crate::canon::{canonical_form, isomorphism};
use crate::error::{Error, Result};
use crate::posystem::POSystem;
use crate::report::Report;
use crate::subset::Subset;

/// A cardinality: finite or countably infinite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Card {
    Finite(u64),
    Infinite,
}

impl Card {
    pub fn is_finite(self) -> bool {
        matches!(self, Card::Finite(_))
    }
}

impl std::ops::Add for Card {
    type Output = Card;
    fn add(self, rhs: Card) -> Card {
        match (self, rhs) {
            (Card::Finite(a), Card::Finite(b)) => Card::Finite(a + b),
            _ => Card::Infinite,
        }
    }
}

impl fmt::Display for Card {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Card::Finite(n) => write!(f, "{n}"),
            Card::Infinite => write!(f, "inf"),
        }
    }
}

/// `[P, L, f]`. `f` is stored total over the carrier with 0 off its domain
/// `L_min ∩ P^d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExtendedPOSystem {
    pub p: POSystem,
    pub l: Subset,
    pub f: Vec<u32>,
}

impl ExtendedPOSystem {
    pub fn new(p: POSystem, l: Subset, f: Vec<u32>) -> Result<ExtendedPOSystem> {
        let e = ExtendedPOSystem { p, l, f };
        e.check()?;
        Ok(e)
    }

    /// `L = P` with `f` given on the minimal discrete points.
    pub fn compact(p: POSystem, f: Vec<u32>) -> Result<ExtendedPOSystem> {
        let l = p.carrier();
        ExtendedPOSystem::new(p, l, f)
    }

    fn check(&self) -> Result<()> {
        let n = self.p.len();
        if self.f.len() != n {
            return Err(Error::InvalidInput(format!("f has {} entries for {} elements", self.f.len(), n)));
        }
        if !self.l.is_subset(self.p.carrier()) || !self.p.is_lower(self.l) {
            return Err(Error::InvalidInput("L must be a lower subset".into()));
        }
        let dom = self.l_min_d();
        for x in 0..n {
            match (dom.contains(x), self.f[x]) {
                (true, 0) => return Err(Error::MissingCount(self.p.name(x).to_string())),
                (false, v) if v > 0 => {
                    return Err(Error::InvalidInput(format!("f defined at `{}` outside L_min^d", self.p.name(x))))
                }
                _ => {}
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    pub fn l_min(&self) -> Subset {
        self.p.min_of(self.l)
    }

    /// `L_min ∩ P^d`, the domain of `f`.
    pub fn l_min_d(&self) -> Subset {
        self.l_min() & self.p.discrete()
    }

    /// `P^d ⊆ L_min`.
    pub fn finite_crowded(&self) -> bool {
        self.p.discrete().is_subset(self.l_min())
    }

    /// Size of the part `X_p`.
    pub fn card(&self, x: usize) -> Card {
        if self.l_min_d().contains(x) {
            Card::Finite(self.f[x] as u64)
        } else {
            Card::Infinite
        }
    }

    pub fn is_compact(&self) -> bool {
        self.l == self.p.carrier()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TBASystem {
    pub base: ExtendedPOSystem,
    pub q: Vec<Subset>,
}

impl TBASystem {
    pub fn p(&self) -> &POSystem {
        &self.base.p
    }

    pub fn marks(&self) -> Vec<Subset> {
        let mut m = vec![self.base.l];
        m.extend(self.q.iter().copied());
        m
    }

    pub fn weights(&self) -> Vec<u64> {
        self.base.f.iter().map(|&x| x as u64).collect()
    }

    pub fn canonical(&self) -> Vec<u8> {
        let mut b = vec![b'T'];
        b.extend(canonical_form(self.p(), &self.marks(), &self.weights()).bytes);
        b
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CASystem {
    pub s: POSystem,
    pub m: Subset,
    pub fset: Subset,
    /// Total over `S`; 0 means no isolated points.
    pub g: Vec<u32>,
    pub q: Vec<Subset>,
}

impl CASystem {
    pub fn marks(&self) -> Vec<Subset> {
        let mut m = vec![self.m, self.fset];
        m.extend(self.q.iter().copied());
        m
    }

    pub fn weights(&self) -> Vec<u64> {
        self.g.iter().map(|&x| x as u64).collect()
    }

    pub fn canonical(&self) -> Vec<u8> {
        let mut b = vec![b'C'];
        b.extend(canonical_form(&self.s, &self.marks(), &self.weights()).bytes);
        b
    }
}

pub fn validate_tba_system(t: &TBASystem) -> Report {
    let mut r = Report::new();
    let e = &t.base;
    let p = &e.p;
    r.push("L lower", p.is_lower(e.l), format!("L = {}", p.format_subset(e.l)));
    let dom = e.l_min_d();
    let bad_f: Vec<&str> = (0..p.len())
        .filter(|&x| dom.contains(x) != (e.f.get(x).copied().unwrap_or(0) > 0))
        .map(|x| p.name(x))
        .collect();
    r.push(
        "f domain",
        e.f.len() == p.len() && bad_f.is_empty(),
        format!("f must be positive exactly on L_min^d; offending: {}", bad_f.join(" ")),
    );
    for (i, &q) in t.q.iter().enumerate() {
        r.push(&format!("Q{} lower", i + 1), p.is_lower(q), format!("Q{} = {}", i + 1, p.format_subset(q)));
    }
    let stray = p.discrete() - e.l_min();
    r.push("finite-crowded", stray.is_empty(), format!("discrete elements outside L_min: {}", p.format_subset(stray)));
    let d = generate_algebra(p, &t.q, AlgebraKind::Tba);
    let atoms: Vec<String> = d.atoms().iter().map(|&a| p.format_subset(a)).collect();
    r.push("generation", d.is_full_powerset(), format!("generated subalgebra has atoms {}", atoms.join(" ")));
    r
}

pub fn validate_ca_system(c: &CASystem) -> Report {
    let mut r = Report::new();
    let s = &c.s;
    r.push("S poset", s.is_poset(), format!("reflexive: {}", s.format_subset(s.reflexive())));
    r.push("M lower", s.is_lower(c.m), format!("M = {}", s.format_subset(c.m)));
    for (i, &q) in c.q.iter().enumerate() {
        r.push(&format!("Q{} lower", i + 1), s.is_lower(q), format!("Q{} = {}", i + 1, s.format_subset(q)));
    }
    let m_min = s.min_of(c.m);
    r.push(
        "F in M_min",
        c.fset.is_subset(m_min),
        format!("F = {}, M_min = {}", s.format_subset(c.fset), s.format_subset(m_min)),
    );
    let zero: Subset = c.fset.iter().filter(|&x| c.g.get(x).copied().unwrap_or(0) == 0).collect();
    r.push(
        "g positive on F",
        c.g.len() == s.len() && zero.is_empty(),
        format!("g vanishes on {}", s.format_subset(zero)),
    );
    let d = generate_algebra(s, &c.q, AlgebraKind::Closure);
    let atoms: Vec<String> = d.atoms().iter().map(|&a| s.format_subset(a)).collect();
    r.push("generation", d.is_full_powerset(), format!("generated closure subalgebra has atoms {}", atoms.join(" ")));
    r
}

/// Order-isomorphism between two TBA systems matching `L`, every `Q_j` and `f`.
pub fn iso_tba(a: &TBASystem, b: &TBASystem) -> Option<Vec<usize>> {
    if a.q.len() != b.q.len() {
        return None;
    }
    isomorphism((a.p(), &a.marks(), &a.weights()), (b.p(), &b.marks(), &b.weights()))
}

/// Order-isomorphism between two CA systems matching `M`, `F`, every `Q_j` and `g`.
pub fn iso_ca(a: &CASystem, b: &CASystem) -> Option<Vec<usize>> {
    if a.q.len() != b.q.len() {
        return None;
    }
    isomorphism((&a.s, &a.marks(), &a.weights()), (&b.s, &b.marks(), &b.weights()))
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn atomless() -> TBASystem {
        let p = POSystem::from_named(&["p"], &[("p", "p")]).unwrap();
        let base = ExtendedPOSystem::compact(p, vec![0]).unwrap();
        TBASystem { base, q: vec![Subset::singleton(0)] }
    }

    #[test]
    fn atomless_is_valid() {
        assert!(validate_tba_system(&atomless()).ok());
    }

    #[test]
    fn discrete_antichain_with_empty_l_is_not_finite_crowded() {
        let p = POSystem::antichain(2);
        let base = ExtendedPOSystem::new(p, Subset::EMPTY, vec![0, 0]).unwrap();
        let t = TBASystem { base, q: vec![Subset::singleton(0)] };
        let r = validate_tba_system(&t);
        assert!(r.failed("finite-crowded"));
    }

    #[test]
    fn reflexive_antichain_with_carrier_ideal_does_not_generate() {
        let p = POSystem::from_named(&["p", "q"], &[("p", "p"), ("q", "q")]).unwrap();
        let full = p.carrier();
        let base = ExtendedPOSystem::compact(p, vec![0, 0]).unwrap();
        let t = TBASystem { base, q: vec![full] };
        let r = validate_tba_system(&t);
        assert_eq!(r.failed_laws(), vec!["generation"]);
    }

    #[test]
    fn zero_count_on_domain_is_rejected() {
        let p = POSystem::antichain(1);
        assert_eq!(ExtendedPOSystem::compact(p, vec![0]).unwrap_err(), Error::MissingCount("e0".into()));
    }

    #[test]
    fn permuted_ideals_are_distinct() {
        let p = POSystem::antichain(2);
        let base = ExtendedPOSystem::compact(p, vec![1, 1]).unwrap();
        let a = TBASystem { base: base.clone(), q: vec![Subset::singleton(0), Subset::EMPTY] };
        let b = TBASystem { base, q: vec![Subset::EMPTY, Subset::singleton(0)] };
        assert!(iso_tba(&a, &b).is_none());
        let c = TBASystem { base: a.base.clone(), q: vec![Subset::singleton(1), Subset::EMPTY] };
        assert_eq!(iso_tba(&a, &c), Some(vec![1, 0]));
    }
}
