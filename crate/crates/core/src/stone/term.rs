//! Space terms and the inductive construction of a space with a complete
//! `[P,L,f]`-partition.

use std::fmt;

use serde::Serialize;

use crate::classification::ExtendedPOSystem;
use crate::error::{Error, Result};
use crate::subset::Subset;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum AttachCase {
    /// Crowded new part with compact closure: fibre is the Cantor set.
    #[serde(rename = "1A")]
    A1,
    /// Crowded new part with non-compact closure: fibre is the Cantor set minus a point.
    #[serde(rename = "1B")]
    B1,
    /// Infinite discrete new part with compact closure.
    #[serde(rename = "2A")]
    A2,
    /// Infinite discrete new part with non-compact closure.
    #[serde(rename = "2B")]
    B2,
}

impl AttachCase {
    pub fn select(crowded: bool, compact_closure: bool) -> AttachCase {
        match (crowded, compact_closure) {
            (true, true) => AttachCase::A1,
            (true, false) => AttachCase::B1,
            (false, true) => AttachCase::A2,
            (false, false) => AttachCase::B2,
        }
    }

    pub fn crowded(self) -> bool {
        matches!(self, AttachCase::A1 | AttachCase::B1)
    }

    pub fn compact_closure(self) -> bool {
        matches!(self, AttachCase::A1 | AttachCase::A2)
    }
}

impl fmt::Display for AttachCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AttachCase::A1 => "1A",
            AttachCase::B1 => "1B",
            AttachCase::A2 => "2A",
            AttachCase::B2 => "2B",
        })
    }
}

/// Labels are element indices of the system the term was built for.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SpaceTerm {
    CantorD1(usize),
    CantorD0(usize),
    FinDisc(usize, u32),
    OmegaDisc(usize),
    Sum(Box<SpaceTerm>, Box<SpaceTerm>),
    Attach { case: AttachCase, base: Box<SpaceTerm>, closed_sel: Subset, new_label: usize },
}

impl SpaceTerm {
    pub fn labels(&self) -> Subset {
        match self {
            SpaceTerm::CantorD1(a) | SpaceTerm::CantorD0(a) | SpaceTerm::FinDisc(a, _) | SpaceTerm::OmegaDisc(a) => {
                Subset::singleton(*a)
            }
            SpaceTerm::Sum(x, y) => x.labels() | y.labels(),
            SpaceTerm::Attach { base, new_label, .. } => base.labels().with(*new_label),
        }
    }

    pub fn format(&self, e: &ExtendedPOSystem) -> String {
        let name = |a: &usize| e.p.name(*a).to_string();
        match self {
            SpaceTerm::CantorD1(a) => format!("D1[{}]", name(a)),
            SpaceTerm::CantorD0(a) => format!("D0[{}]", name(a)),
            SpaceTerm::FinDisc(a, m) => format!("Fin{}[{}]", m, name(a)),
            SpaceTerm::OmegaDisc(a) => format!("Omega[{}]", name(a)),
            SpaceTerm::Sum(x, y) => format!("Sum({}, {})", x.format(e), y.format(e)),
            SpaceTerm::Attach { case, base, closed_sel, new_label } => {
                format!("Attach({}, {}, {}, {})", case, base.format(e), e.p.format_subset(*closed_sel), name(new_label))
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum BuildStrategy {
    /// Remove the last element of a fixed topological order.
    #[default]
    LastTopological,
    /// Remove the maximal element with the smallest index.
    FirstMaximal,
}

/// A term together with the system it realises.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Space {
    pub system: ExtendedPOSystem,
    pub term: SpaceTerm,
}

fn base_term(e: &ExtendedPOSystem, p: usize) -> SpaceTerm {
    match (e.p.is_reflexive(p), e.l.contains(p)) {
        (true, true) => SpaceTerm::CantorD1(p),
        (true, false) => SpaceTerm::CantorD0(p),
        (false, true) => SpaceTerm::FinDisc(p, e.f[p]),
        (false, false) => SpaceTerm::OmegaDisc(p),
    }
}

fn build_rec(e: &ExtendedPOSystem, set: Subset, order: &[usize], strategy: BuildStrategy) -> SpaceTerm {
    let p = match strategy {
        BuildStrategy::LastTopological => *order.iter().rev().find(|&&x| set.contains(x)).expect("nonempty"),
        BuildStrategy::FirstMaximal => e.p.max_of(set).first().expect("nonempty"),
    };
    let rest = set.without(p);
    if rest.is_empty() {
        return base_term(e, p);
    }
    let w = build_rec(e, rest, order, strategy);
    let below = e.p.strictly_below(p).without(p) & rest;
    if below.is_empty() {
        return SpaceTerm::Sum(Box::new(w), Box::new(base_term(e, p)));
    }
    SpaceTerm::Attach {
        case: AttachCase::select(e.p.is_reflexive(p), e.l.contains(p)),
        base: Box::new(w),
        closed_sel: below,
        new_label: p,
    }
}

/// Builds a space with a complete `[P,L,f]`-partition by removing a maximal
/// element, building the rest and attaching the removed part over the closure
/// of the elements below it.
pub fn build_space(e: &ExtendedPOSystem, strategy: BuildStrategy, allow_non_categorical: bool) -> Result<Space> {
    if e.is_empty() {
        return Err(Error::InvalidInput("empty PO system".into()));
    }
    if !e.finite_crowded() && !allow_non_categorical {
        return Err(Error::InvalidInput(
            "system is not finite-crowded; pass allow_non_categorical to build it anyway".into(),
        ));
    }
    let order = e.p.topological_order();
    let term = build_rec(e, e.p.carrier(), &order, strategy);
    Ok(Space { system: e.clone(), term })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::posystem::POSystem;

    fn one(refl: bool, l: bool, f: u32) -> ExtendedPOSystem {
        let p = if refl {
            POSystem::from_named(&["p"], &[("p", "p")]).unwrap()
        } else {
            POSystem::from_named::<&str>(&["p"], &[]).unwrap()
        };
        ExtendedPOSystem::new(p, if l { Subset::singleton(0) } else { Subset::EMPTY }, vec![f]).unwrap()
    }

    #[test]
    fn base_cases() {
        let b = |e: &ExtendedPOSystem| build_space(e, BuildStrategy::default(), true).unwrap().term;
        assert_eq!(b(&one(true, true, 0)), SpaceTerm::CantorD1(0));
        assert_eq!(b(&one(true, false, 0)), SpaceTerm::CantorD0(0));
        assert_eq!(b(&one(false, true, 4)), SpaceTerm::FinDisc(0, 4));
        assert_eq!(b(&one(false, false, 0)), SpaceTerm::OmegaDisc(0));
    }

    #[test]
    fn infinite_discrete_needs_flag() {
        assert!(build_space(&one(false, false, 0), BuildStrategy::default(), false).is_err());
    }

    #[test]
    fn chain_with_open_top() {
        let p = POSystem::from_named(&["a", "b"], &[("a", "a"), ("a", "b"), ("b", "b")]).unwrap();
        let e = ExtendedPOSystem::new(p, Subset::singleton(0), vec![0, 0]).unwrap();
        let s = build_space(&e, BuildStrategy::default(), false).unwrap();
        assert_eq!(
            s.term,
            SpaceTerm::Attach {
                case: AttachCase::B1,
                base: Box::new(SpaceTerm::CantorD1(0)),
                closed_sel: Subset::singleton(0),
                new_label: 1
            }
        );
        assert_eq!(s.term.format(&e), "Attach(1B, D1[a], {a}, b)");
    }

    #[test]
    fn strategies_differ_on_antichains() {
        let p = POSystem::from_named(&["a", "b"], &[("a", "a"), ("b", "b")]).unwrap();
        let e = ExtendedPOSystem::compact(p, vec![0, 0]).unwrap();
        let x = build_space(&e, BuildStrategy::LastTopological, false).unwrap();
        let y = build_space(&e, BuildStrategy::FirstMaximal, false).unwrap();
        assert_ne!(x.term, y.term);
    }
}
