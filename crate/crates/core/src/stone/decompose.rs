//! Decomposition of the covered compact part of a model into trim pieces.

use serde_json::{json, Value};

use crate::classification::Card;
use crate::error::{Error, Result};
use crate::subset::Subset;

use super::model::Model;

/// Levels below the model depth a compact cell may be refined to reach trims.
pub const TRIM_DESCENT: usize = 16;

/// A union of cells whose type is `up(label)`, holding one point of `label`
/// when it is discrete.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrimPiece {
    pub label: usize,
    pub cells: Vec<usize>,
    /// 0 for the part covering the compact closures, `j` for the clump of
    /// exhaustion steps ending at depth `j`.
    pub step: usize,
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    /// The model refined far enough to carry the pieces.
    pub model: Model,
    pub pieces: Vec<TrimPiece>,
    /// Depth from which the uncovered part has no labels of compact closure.
    pub main_depth: usize,
    /// Hull cells of trailing exhaustion steps that do not yet make a full clump.
    pub unclumped: Vec<usize>,
}

impl Decomposition {
    pub fn count(&self, label: usize, step: Option<usize>) -> usize {
        self.pieces.iter().filter(|t| t.label == label && step.is_none_or(|s| t.step == s)).count()
    }

    pub fn to_json(&self) -> Value {
        let p = &self.model.system.p;
        let pieces: Vec<Value> =
            self.pieces.iter().map(|t| json!({"label": p.name(t.label), "step": t.step, "cells": t.cells})).collect();
        json!({"main_depth": self.main_depth, "pieces": pieces, "unclumped": self.unclumped})
    }
}

fn trim_label(m: &Model, id: usize) -> Option<usize> {
    let c = &m.cells[id];
    let p = &m.system.p;
    if !c.compact {
        return None;
    }
    let q = p.min_of(c.ty).iter().next()?;
    let single = c.ty == p.up(q);
    let point = p.is_reflexive(q) || c.mark(q) == Card::Finite(1);
    (single && point).then_some(q)
}

/// Splits compact cells into trim cells.
fn trims(m: &mut Model, id: usize, cap: usize, out: &mut Vec<(usize, usize)>) -> Result<()> {
    if let Some(q) = trim_label(m, id) {
        out.push((q, id));
        return Ok(());
    }
    if m.cells[id].depth >= cap {
        return Err(Error::InvalidModel(format!("cell {id} does not split into trim cells by depth {cap}")));
    }
    let ch = m.refine(id);
    if ch.is_empty() {
        return Err(Error::InvalidModel(format!("point cell {id} is not trim")));
    }
    for c in ch {
        trims(m, c, cap, out)?;
    }
    Ok(())
}

/// Groups trim cells: one piece per point for discrete labels, one piece per
/// crowded label, and cells of non-minimal labels join a piece below them.
fn group(m: &Model, cells: &[(usize, usize)], mins: Subset, step: usize) -> Vec<TrimPiece> {
    let p = &m.system.p;
    let mut pieces: Vec<TrimPiece> = Vec::new();
    for q in mins {
        let own: Vec<usize> = cells.iter().filter(|(l, _)| *l == q).map(|&(_, c)| c).collect();
        if p.is_reflexive(q) {
            pieces.push(TrimPiece { label: q, cells: own, step });
        } else {
            pieces.extend(own.into_iter().map(|c| TrimPiece { label: q, cells: vec![c], step }));
        }
    }
    for &(r, c) in cells.iter().filter(|(l, _)| !mins.contains(*l)) {
        let host = pieces.iter_mut().find(|t| p.lt(t.label, r)).expect("a minimal label lies below");
        host.cells.push(c);
    }
    pieces
}

/// Decomposes the covered part of `m`. The cells of the hull up to the first
/// depth whose uncovered cells avoid `L` form the main part; it splits into
/// `f(q)` trim pieces for discrete and one for crowded minimal labels. Later
/// hull cells are clumped by depth until their type is `P - L` and each clump
/// splits into trim pieces of the minimal labels of `P - L`.
pub fn minimum_decomposition(m: &Model) -> Result<Decomposition> {
    let e = &m.system;
    let p = &e.p;
    let mut work = m.clone();
    let cap = m.depth + TRIM_DESCENT;
    let hull = work.hull();
    let mut open_depth = None;
    for d in 0..=m.depth {
        let uncovered = work.cells.iter().filter(|c| c.depth == d && !c.compact);
        if uncovered.clone().all(|c| !c.ty.meets(e.l)) {
            open_depth = Some(d);
            break;
        }
    }
    let j0 = open_depth
        .ok_or_else(|| Error::InvalidModel(format!("compact closures are not covered by depth {}", m.depth)))?;
    let (main, later): (Vec<usize>, Vec<usize>) = hull.into_iter().partition(|&c| work.cells[c].depth <= j0);

    let mut main_trims = Vec::new();
    for &c in &main {
        trims(&mut work, c, cap, &mut main_trims)?;
    }
    let main_ty = main.iter().fold(Subset::EMPTY, |a, &c| a | work.cells[c].ty);
    let mut pieces = group(&work, &main_trims, p.min_of(main_ty), 0);

    let rest = p.carrier() - e.l;
    let mut clump: Vec<usize> = Vec::new();
    let mut unclumped = Vec::new();
    for d in j0 + 1..=m.depth {
        clump.extend(later.iter().copied().filter(|&c| work.cells[c].depth == d));
        let ty = clump.iter().fold(Subset::EMPTY, |a, &c| a | work.cells[c].ty);
        if ty == rest && !clump.is_empty() {
            let mut ts = Vec::new();
            for &c in &clump {
                trims(&mut work, c, cap, &mut ts)?;
            }
            pieces.extend(group(&work, &ts, p.min_of(rest), d));
            clump.clear();
        }
    }
    unclumped.extend(clump);
    Ok(Decomposition { model: work, pieces, main_depth: j0, unclumped })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classification::ExtendedPOSystem;
    use crate::measures::{mu_sum, Measure};
    use crate::posystem::POSystem;
    use crate::stone::{approximate, build_space, mu_of_cell, BuildStrategy};

    fn decompose(e: &ExtendedPOSystem, k: usize) -> Decomposition {
        let s = build_space(e, BuildStrategy::default(), true).unwrap();
        minimum_decomposition(&approximate(&s, k)).unwrap()
    }

    fn piece_measure(d: &Decomposition, t: &TrimPiece) -> Measure {
        let ms: Vec<Measure> = t.cells.iter().map(|&c| mu_of_cell(&d.model, c).unwrap()).collect();
        mu_sum(&d.model.system, &ms).unwrap()
    }

    #[test]
    fn finite_discrete() {
        let e = ExtendedPOSystem::compact(POSystem::antichain(1), vec![3]).unwrap();
        let d = decompose(&e, 2);
        assert_eq!(d.pieces.len(), 3);
        assert!(d.pieces.iter().all(|t| t.cells.len() == 1));
    }

    #[test]
    fn cantor_is_one_trim() {
        let p = POSystem::from_named(&["p"], &[("p", "p")]).unwrap();
        let e = ExtendedPOSystem::compact(p, vec![0]).unwrap();
        let d = decompose(&e, 3);
        assert_eq!(d.pieces, vec![TrimPiece { label: 0, cells: vec![0], step: 0 }]);
    }

    #[test]
    fn chain_with_open_top() {
        let p = POSystem::from_named(&["a", "b"], &[("a", "a"), ("a", "b"), ("b", "b")]).unwrap();
        let e = ExtendedPOSystem::new(p, Subset::singleton(0), vec![0, 0]).unwrap();
        let d = decompose(&e, 4);
        assert_eq!(d.count(0, None), 1);
        assert_eq!(d.count(1, None), 3);
        for t in &d.pieces {
            assert_eq!(piece_measure(&d, t), Measure::trim(t.label));
        }
    }

    #[test]
    fn piece_counts_on_small_systems() {
        for e in crate::stone::check::tests::systems(3, 3) {
            let d = decompose(&e, 4);
            let p = &e.p;
            for q in e.l_min() {
                let n = if p.is_reflexive(q) { 1 } else { e.f[q] as usize };
                assert_eq!(d.count(q, Some(0)), n, "{e:?} label {q}");
            }
            let steps: std::collections::BTreeSet<usize> = d.pieces.iter().map(|t| t.step).filter(|&s| s > 0).collect();
            for s in steps {
                for q in p.min_of(p.carrier() - e.l) {
                    assert_eq!(d.count(q, Some(s)), 1, "{e:?} step {s}");
                }
            }
            assert_eq!(
                d.pieces.iter().filter(|t| t.step == 0).count(),
                d.pieces.iter().filter(|t| t.step == 0 && e.l.contains(t.label)).count(),
                "{e:?}"
            );
            for t in &d.pieces {
                assert_eq!(piece_measure(&d, t), Measure::trim(t.label));
            }
        }
    }
}
