//! Back-and-forth construction of a label-preserving correspondence between
//! two cell models of the same extended PO system.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::classification::{Card, ExtendedPOSystem};
use crate::error::{Error, Result};
use crate::measures::{vaught_split, Measure};
use crate::subset::Subset;

use super::model::{mu_of_cell, Model};

/// Extra refinement levels tried below the requested depth before a split is
/// declared impossible.
pub const MAX_EXTRA_LEVELS: usize = 8;
const NODE_CAP: usize = 200_000;
const FRONTIER_CAP: usize = 4096;

/// Type, escape set and point counts of a clopen set. Counts are kept for
/// discrete labels minimal in the type or in the compact part `type - escape`.
/// On compact sets this is the measure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenMeasure {
    pub ty: Subset,
    pub escape: Subset,
    pub counts: BTreeMap<usize, Card>,
}

impl GenMeasure {
    pub fn of(m: &Model, cells: &[usize]) -> GenMeasure {
        let p = &m.system.p;
        let ty = cells.iter().fold(Subset::EMPTY, |a, &c| a | m.cells[c].ty);
        let escape = cells.iter().fold(Subset::EMPTY, |a, &c| a | m.cells[c].escape);
        let counted = (p.min_of(ty) | p.min_of(ty - escape)) & p.discrete();
        let counts =
            counted.iter().map(|x| (x, cells.iter().fold(Card::Finite(0), |a, &c| a + m.cells[c].mark(x)))).collect();
        GenMeasure { ty, escape, counts }
    }

    pub fn describe(&self, m: &Model) -> String {
        let p = &m.system.p;
        let counts: Vec<String> = self.counts.iter().map(|(&x, n)| format!("{}={}", p.name(x), n)).collect();
        format!(
            "type {} escape {} counts [{}]",
            p.format_subset(self.ty),
            p.format_subset(self.escape),
            counts.join(", ")
        )
    }

    fn admits(&self, m: &Model, cell: usize) -> bool {
        let c = &m.cells[cell];
        c.ty.is_subset(self.ty)
            && c.escape.is_subset(self.escape)
            && self.counts.iter().all(|(&x, &n)| le(c.mark(x), n))
    }
}

fn le(a: Card, b: Card) -> bool {
    match (a, b) {
        (_, Card::Infinite) => true,
        (Card::Infinite, Card::Finite(_)) => false,
        (Card::Finite(x), Card::Finite(y)) => x <= y,
    }
}

/// Matched clopen sets, each a union of cells of its model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piece {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct Matching {
    pub depth: usize,
    /// `levels[d]` partitions both spaces; it refines `levels[d - 1]`.
    pub levels: Vec<Vec<Piece>>,
    /// Binary compact splits confirmed by the measure calculus.
    pub certificates: usize,
}

impl Matching {
    pub fn last(&self) -> &[Piece] {
        self.levels.last().map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn to_json(&self) -> Value {
        let levels: Vec<Value> =
            self.levels.iter().map(|l| Value::Array(l.iter().map(|p| json!({"a": p.a, "b": p.b})).collect())).collect();
        json!({"depth": self.depth, "levels": levels, "certificates": self.certificates})
    }
}

fn splittable(m: &Model, c: usize) -> bool {
    !m.cells[c].is_leaf() || m.is_refinable(c)
}

/// Partitions `frontier` into groups realising each target, refining cells
/// of `m` when no partition exists at the current resolution.
fn realize(m: &mut Model, mut frontier: Vec<usize>, targets: &[GenMeasure], limit: usize) -> Option<Vec<Vec<usize>>> {
    for _ in 0..=MAX_EXTRA_LEVELS {
        if let Some(g) = search(m, &frontier, targets) {
            return Some(g);
        }
        let shallow = frontier.iter().filter(|&&c| splittable(m, c)).map(|&c| m.cells[c].depth).min()?;
        if shallow >= limit || frontier.len() > FRONTIER_CAP {
            return None;
        }
        frontier = frontier
            .into_iter()
            .flat_map(|c| if m.cells[c].depth == shallow && splittable(m, c) { m.refine(c) } else { vec![c] })
            .collect();
    }
    None
}

/// Pairs targets with equal single cells first and places the remaining
/// cells around them; falls back to a full search when that fails.
fn search(m: &Model, frontier: &[usize], targets: &[GenMeasure]) -> Option<Vec<Vec<usize>>> {
    let single: Vec<GenMeasure> = frontier.iter().map(|&c| GenMeasure::of(m, &[c])).collect();
    let mut used = vec![false; frontier.len()];
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); targets.len()];
    for (t, target) in targets.iter().enumerate() {
        if let Some(i) = (0..frontier.len()).find(|&i| !used[i] && single[i] == *target) {
            used[i] = true;
            groups[t].push(frontier[i]);
        }
    }
    if used.iter().any(|&u| u) {
        let rest: Vec<usize> = (0..frontier.len()).filter(|&i| !used[i]).map(|i| frontier[i]).collect();
        if let Some(g) = search_from(m, &rest, targets, groups) {
            return Some(g);
        }
    }
    search_from(m, frontier, targets, vec![Vec::new(); targets.len()])
}

fn search_from(
    m: &Model,
    cells: &[usize],
    targets: &[GenMeasure],
    mut groups: Vec<Vec<usize>>,
) -> Option<Vec<Vec<usize>>> {
    let mut order: Vec<usize> = cells.to_vec();
    // Cells with many labels and points first: they constrain the most.
    order.sort_by_key(|&c| {
        let cell = &m.cells[c];
        let pts: u64 = cell.marks.values().map(|n| if let Card::Finite(k) = n { *k } else { u64::MAX / 64 }).sum();
        (std::cmp::Reverse(cell.ty.len()), std::cmp::Reverse(pts), c)
    });
    let fit_of = |c: usize| -> Vec<usize> { (0..targets.len()).filter(|&t| targets[t].admits(m, c)).collect() };
    order.sort_by_key(|&c| fit_of(c).len());
    let fits: Vec<Vec<usize>> = order.iter().map(|&c| fit_of(c)).collect();
    if fits.iter().any(Vec::is_empty) {
        return None;
    }
    let mut st = Search { m, order: &order, fits: &fits, targets, nodes: 0 };
    if st.dfs(0, &mut groups) {
        Some(groups)
    } else {
        None
    }
}

/// Point counts of `cells` on the counted labels of `target`.
fn points(m: &Model, cells: &[usize], target: &GenMeasure) -> BTreeMap<usize, Card> {
    target.counts.keys().map(|&x| (x, cells.iter().fold(Card::Finite(0), |a, &c| a + m.cells[c].mark(x)))).collect()
}

struct Search<'a> {
    m: &'a Model,
    order: &'a [usize],
    fits: &'a [Vec<usize>],
    targets: &'a [GenMeasure],
    nodes: usize,
}

impl Search<'_> {
    /// Whether the cells from `i` on can still complete every group.
    fn reachable(&self, i: usize, groups: &[Vec<usize>]) -> bool {
        let m = self.m;
        let empty = groups.iter().filter(|g| g.is_empty()).count();
        if empty > self.order.len() - i {
            return false;
        }
        for (t, target) in self.targets.iter().enumerate() {
            let have = GenMeasure::of(m, &groups[t]);
            let (mut ty, mut esc) = (have.ty, have.escape);
            let mut pts = points(m, &groups[t], target);
            for j in i..self.order.len() {
                if self.fits[j].contains(&t) {
                    let c = &m.cells[self.order[j]];
                    ty |= c.ty;
                    esc |= c.escape;
                    for (&x, n) in pts.iter_mut() {
                        *n = *n + c.mark(x);
                    }
                }
            }
            if !target.ty.is_subset(ty) || !target.escape.is_subset(esc) {
                return false;
            }
            if target.counts.iter().any(|(x, &n)| !le(n, pts[x])) {
                return false;
            }
        }
        true
    }

    fn dfs(&mut self, i: usize, groups: &mut Vec<Vec<usize>>) -> bool {
        self.nodes += 1;
        if self.nodes > NODE_CAP {
            return false;
        }
        if i == self.order.len() {
            return (0..self.targets.len()).all(|t| GenMeasure::of(self.m, &groups[t]) == self.targets[t]);
        }
        if !self.reachable(i, groups) {
            return false;
        }
        let c = self.order[i];
        for &t in &self.fits[i] {
            // Interchangeable empty targets: only try the first.
            if groups[t].is_empty() && (0..t).any(|s| groups[s].is_empty() && self.targets[s] == self.targets[t]) {
                continue;
            }
            groups[t].push(c);
            let target = &self.targets[t];
            let pts = points(self.m, &groups[t], target);
            let ok = target.counts.iter().all(|(x, &n)| le(pts[x], n));
            if ok && self.dfs(i + 1, groups) {
                return true;
            }
            groups[t].pop();
        }
        false
    }
}

/// Cells of `cells` at depth `d`: shallower cells are replaced by their
/// descendants at depth `d` (points stay), deeper cells are kept.
fn at_depth(m: &mut Model, cells: &[usize], d: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut stack: Vec<usize> = cells.iter().rev().copied().collect();
    while let Some(c) = stack.pop() {
        if m.cells[c].depth >= d || !splittable(m, c) {
            out.push(c);
        } else {
            let ch = m.refine(c);
            stack.extend(ch.into_iter().rev());
        }
    }
    out
}

fn measure_of_group(e: &ExtendedPOSystem, m: &Model, cells: &[usize]) -> Option<Measure> {
    let ms: Option<Vec<Measure>> = cells.iter().map(|&c| mu_of_cell(m, c).ok()).collect();
    crate::measures::mu_sum(e, &ms?).ok()
}

/// Builds a matching of depth `k`. Odd levels split the pieces of `a` into
/// their cells at that depth, even levels those of `b`, and the other side is
/// partitioned to match. Non-compact cells of the splitting side stay together
/// as one remainder piece, since the other side may have fewer non-compact
/// cells at any finite resolution (a cylinder partition of the Cantor set
/// minus a point has exactly one non-compact part).
pub fn back_and_forth(a: &mut Model, b: &mut Model, k: usize) -> Result<Matching> {
    let (ra, rb) = (GenMeasure::of(a, &[0]), GenMeasure::of(b, &[0]));
    if a.system != b.system || ra != rb {
        return Err(Error::MeasureMismatch(format!("roots differ: {} / {}", ra.describe(a), rb.describe(b))));
    }
    let e = a.system.clone();
    let mut levels = vec![vec![Piece { a: vec![0], b: vec![0] }]];
    let mut certificates = 0;
    for d in 1..=k {
        let forth = d % 2 == 1;
        let mut next = Vec::new();
        for piece in levels.last().expect("level 0").clone() {
            let (src, dst, from, to) = if forth {
                (&mut *a, &mut *b, piece.a.clone(), piece.b.clone())
            } else {
                (&mut *b, &mut *a, piece.b.clone(), piece.a.clone())
            };
            let cells = at_depth(src, &from, d);
            // Compact cells are pieces of their own; the non-compact rest is one piece.
            let mut split: Vec<Vec<usize>> =
                cells.iter().filter(|&&c| src.cells[c].compact).map(|&c| vec![c]).collect();
            let rest: Vec<usize> = cells.iter().copied().filter(|&c| !src.cells[c].compact).collect();
            if !rest.is_empty() {
                split.push(rest);
            }
            let targets: Vec<GenMeasure> = split.iter().map(|g| GenMeasure::of(src, g)).collect();
            let limit = d + MAX_EXTRA_LEVELS;
            let groups = realize(dst, to.clone(), &targets, limit).ok_or_else(|| {
                Error::SplitFailed(format!(
                    "level {d}: no partition of {} cells into {} pieces",
                    to.len(),
                    targets.len()
                ))
            })?;
            if targets.len() == 2 {
                if let (Some(whole), Some(t1), Some(t2)) = (
                    measure_of_group(&e, dst, &to),
                    measure_of_group(&e, src, &split[0]),
                    measure_of_group(&e, src, &split[1]),
                ) {
                    vaught_split(&e, &whole, &t1, &t2)?;
                    certificates += 1;
                }
            }
            for (c, g) in split.into_iter().zip(groups) {
                next.push(if forth { Piece { a: c, b: g } } else { Piece { a: g, b: c } });
            }
        }
        levels.push(next);
    }
    Ok(Matching { depth: k, levels, certificates })
}
