//! Measures of compact open sets: formal sums `Σ n_p·p` over the minimal
//! elements of the set's type.
//!
//! The type of an open set is upper (a point of `X_p` is a limit of `X_q`
//! for every `q > p`), so a measure determines the type as `up(F)`. Adding
//! two disjoint sets unions the types; on the new minimal elements the
//! discrete counts add and crowded ones stay at 1.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::classification::{validate_tba_system, ExtendedPOSystem, TBASystem};
use crate::error::{Error, Result};
use crate::posystem::POSystem;
use crate::subset::Subset;

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Measure {
    /// `(p, n_p)` sorted by `p`.
    terms: Vec<(usize, u32)>,
}

impl Measure {
    pub fn zero() -> Measure {
        Measure::default()
    }

    /// The measure `1·p` of a `p`-trim set.
    pub fn trim(p: usize) -> Measure {
        Measure { terms: vec![(p, 1)] }
    }

    /// Unchecked; see [`validate_measure`].
    pub fn from_terms(mut terms: Vec<(usize, u32)>) -> Measure {
        terms.sort();
        Measure { terms }
    }

    pub fn terms(&self) -> &[(usize, u32)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn support(&self) -> Subset {
        self.terms.iter().map(|&(p, _)| p).collect()
    }

    pub fn count(&self, p: usize) -> u32 {
        self.terms.iter().find(|t| t.0 == p).map_or(0, |t| t.1)
    }

    /// Total number of trim pieces in a minimum decomposition.
    pub fn total(&self) -> u32 {
        self.terms.iter().map(|t| t.1).sum()
    }

    pub fn type_of(&self, p: &POSystem) -> Subset {
        p.up_set(self.support())
    }

    /// `a` for a single trim term `1·a`.
    pub fn as_trim(&self) -> Option<usize> {
        match self.terms.as_slice() {
            [(p, 1)] => Some(*p),
            _ => None,
        }
    }

    pub fn format(&self, p: &POSystem) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        self.terms.iter().map(|&(x, n)| format!("{}*{}", n, p.name(x))).collect::<Vec<_>>().join(" + ")
    }
}

fn budget_check(e: &ExtendedPOSystem, p: usize, n: u32) -> Result<()> {
    if e.l_min_d().contains(p) && n > e.f[p] {
        return Err(Error::BudgetExceeded(e.p.name(p).to_string(), e.f[p]));
    }
    Ok(())
}

pub fn validate_measure(e: &ExtendedPOSystem, m: &Measure) -> Result<()> {
    let p = &e.p;
    let f = m.support();
    if !f.is_subset(p.carrier()) {
        return Err(Error::InvalidInput("measure term outside the carrier".into()));
    }
    if !p.is_antichain(f) {
        return Err(Error::InvalidInput(format!("support {} is not an antichain", p.format_subset(f))));
    }
    for &(x, n) in m.terms() {
        if n == 0 {
            return Err(Error::InvalidInput(format!("zero multiplicity at `{}`", p.name(x))));
        }
        if !p.discrete().contains(x) && n != 1 {
            return Err(Error::InvalidInput(format!("crowded `{}` must have multiplicity 1", p.name(x))));
        }
        budget_check(e, x, n)?;
    }
    Ok(())
}

/// Measure of a set with type `t` and the given point counts on the discrete
/// minimal elements of `t`.
pub fn measure_from_type(e: &ExtendedPOSystem, t: Subset, counts: &[(usize, u32)]) -> Result<Measure> {
    let p = &e.p;
    if t.is_empty() {
        return Err(Error::InvalidInput("empty type; use the zero measure".into()));
    }
    if !t.is_subset(p.carrier()) || !p.is_upper(t) {
        return Err(Error::NotUpper);
    }
    let mins = p.min_of(t);
    let need = mins & p.discrete();
    for &(x, _) in counts {
        if !need.contains(x) {
            return Err(Error::InvalidInput(format!(
                "count given for `{}`, not a discrete minimal element of the type",
                p.name(x)
            )));
        }
    }
    let mut terms = Vec::new();
    for x in mins {
        let n = if need.contains(x) {
            match counts.iter().find(|c| c.0 == x) {
                Some(&(_, n)) if n > 0 => n,
                _ => return Err(Error::MissingCount(p.name(x).to_string())),
            }
        } else {
            1
        };
        budget_check(e, x, n)?;
        terms.push((x, n));
    }
    Ok(Measure { terms })
}

/// Measure of a disjoint union.
pub fn mu_add(e: &ExtendedPOSystem, a: &Measure, b: &Measure) -> Result<Measure> {
    let p = &e.p;
    let (fa, fb) = (a.support(), b.support());
    let mins = p.min_of(p.up_set(fa | fb));
    let mut terms = Vec::new();
    for x in mins {
        let n = if p.discrete().contains(x) { a.count(x) + b.count(x) } else { 1 };
        budget_check(e, x, n)?;
        terms.push((x, n));
    }
    Ok(Measure { terms })
}

pub fn mu_sum<'a, I: IntoIterator<Item = &'a Measure>>(e: &ExtendedPOSystem, ms: I) -> Result<Measure> {
    ms.into_iter().try_fold(Measure::zero(), |acc, m| mu_add(e, &acc, m))
}

/// Splits a `p`-trim set into a `p`-trim and a `q`-trim piece.
pub fn trim_split(e: &ExtendedPOSystem, m: &Measure, q: usize) -> Result<(Measure, Measure)> {
    let p = m.as_trim().ok_or_else(|| Error::InvalidInput("trim_split needs a measure of the form 1*p".into()))?;
    if !e.p.lt(p, q) {
        return Err(Error::NotAbove(e.p.name(p).to_string(), e.p.name(q).to_string()));
    }
    Ok((Measure::trim(p), Measure::trim(q)))
}

/// Minimum trim decomposition: `n_p` copies of each `p` in the support.
pub fn mu_partition(m: &Measure) -> Result<Vec<usize>> {
    if m.is_zero() {
        return Err(Error::ZeroMeasure);
    }
    Ok(m.terms.iter().flat_map(|&(p, n)| std::iter::repeat_n(p, n as usize)).collect())
}

fn partition_or_empty(m: &Measure) -> Vec<usize> {
    mu_partition(m).unwrap_or_default()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "step", rename_all = "lowercase")]
pub enum SplitStep {
    /// Piece `piece` of type `ty` is handed to side `side`.
    Assign { piece: usize, ty: usize, side: u8 },
    /// Piece `piece` (type `ty`) gives up a new piece `new_piece` of type `new_ty`.
    Split { piece: usize, ty: usize, new_piece: usize, new_ty: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VaughtSplit {
    /// Type of each piece: the minimum decomposition of `m` first, then split-off pieces.
    pub pieces: Vec<usize>,
    /// Side (1 or 2) of each piece.
    pub side: Vec<u8>,
    pub steps: Vec<SplitStep>,
}

impl VaughtSplit {
    pub fn side_types(&self, s: u8) -> Vec<usize> {
        self.pieces.iter().zip(&self.side).filter(|(_, &x)| x == s).map(|(&t, _)| t).collect()
    }
}

/// Distributes a minimum decomposition of `m` between two targets with
/// `t1 + t2 = m`, splitting trim pieces where a target needs a type that
/// is not minimal in `m`.
pub fn vaught_split(e: &ExtendedPOSystem, m: &Measure, t1: &Measure, t2: &Measure) -> Result<VaughtSplit> {
    let p = &e.p;
    let sum = mu_add(e, t1, t2)?;
    if &sum != m {
        return Err(Error::Inconsistent(format!(
            "{} + {} = {}, not {}",
            t1.format(p),
            t2.format(p),
            sum.format(p),
            m.format(p)
        )));
    }
    let mut pieces = partition_or_empty(m);
    let mut side = vec![0u8; pieces.len()];
    let mut steps = Vec::new();
    let mut targets: Vec<(usize, u8)> = partition_or_empty(t1).into_iter().map(|t| (t, 1)).collect();
    targets.extend(partition_or_empty(t2).into_iter().map(|t| (t, 2)));
    let rank: Vec<usize> = {
        let order = p.topological_order();
        let mut r = vec![0; p.len()];
        for (i, &x) in order.iter().enumerate() {
            r[x] = i;
        }
        r
    };
    targets.sort_by_key(|&(t, s)| (rank[t], s));
    let mut unmatched = Vec::new();
    for &(t, s) in &targets {
        match (0..pieces.len()).find(|&i| side[i] == 0 && pieces[i] == t) {
            Some(i) => {
                side[i] = s;
                steps.push(SplitStep::Assign { piece: i, ty: t, side: s });
            }
            None => unmatched.push((t, s)),
        }
    }
    if let Some(i) = side.iter().position(|&s| s == 0) {
        return Err(Error::Inconsistent(format!("piece of type {} left over", p.name(pieces[i]))));
    }
    for (t, s) in unmatched {
        let src = (0..pieces.len())
            .filter(|&i| p.lt(pieces[i], t))
            .min_by_key(|&i| (rank[pieces[i]], i))
            .ok_or_else(|| Error::Inconsistent(format!("no piece below type {}", p.name(t))))?;
        let new_piece = pieces.len();
        steps.push(SplitStep::Split { piece: src, ty: pieces[src], new_piece, new_ty: t });
        pieces.push(t);
        side.push(s);
        steps.push(SplitStep::Assign { piece: new_piece, ty: t, side: s });
    }
    Ok(VaughtSplit { pieces, side, steps })
}

/// Every valid measure of `e` whose discrete counts are at most `cap`
/// (budgets on `L_min^d` apply as well), zero included.
pub fn all_measures(e: &ExtendedPOSystem, cap: u32) -> Vec<Measure> {
    let p = &e.p;
    let mut out = Vec::new();
    for f in p.carrier().subsets().filter(|&f| p.is_antichain(f)) {
        let mut partial = vec![Vec::new()];
        for x in f {
            let hi = if !p.discrete().contains(x) {
                1
            } else if e.l_min_d().contains(x) {
                e.f[x].min(cap)
            } else {
                cap
            };
            partial = partial
                .into_iter()
                .flat_map(|t: Vec<(usize, u32)>| {
                    (1..=hi).map(move |n| {
                        let mut t = t.clone();
                        t.push((x, n));
                        t
                    })
                })
                .collect();
        }
        out.extend(partial.into_iter().map(Measure::from_terms));
    }
    out.sort();
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitInvariants {
    pub r: usize,
    /// Nonempty `σ ⊆ {0..r}`; index `r` stands for the hull `E`.
    pub regions: Vec<Subset>,
    pub hull: Measure,
    pub inside_tuples: u128,
    pub outside_choices: u128,
    pub count: u128,
    /// True when `X` is compact and the count is the exact number of invariants.
    pub exact: bool,
}

/// Counts the invariant tuples `(μ(B_σ))_σ` for `r`-tuples of ring elements,
/// where the `B_σ` are the atoms of the ring generated by the tuple and the
/// compact hull `E` of type `up(L)`.
pub fn orbit_invariants(t: &TBASystem, r: usize) -> Result<OrbitInvariants> {
    if !(1..=2).contains(&r) {
        return Err(Error::InvalidInput("r must be 1 or 2".into()));
    }
    let rep = validate_tba_system(t);
    if !rep.ok() {
        return Err(Error::NotCategorical(rep.failed_laws().join(", ")));
    }
    let e = &t.base;
    let p = &e.p;
    let l_min = e.l_min();
    let hull =
        Measure::from_terms(l_min.iter().map(|x| (x, if e.l_min_d().contains(x) { e.f[x] } else { 1 })).collect());
    let regions: Vec<Subset> = Subset::full(r + 1).subsets().filter(|s| !s.is_empty()).collect();
    let inside_slots = regions.iter().filter(|s| s.contains(r)).count();
    let outside_slots = regions.len() - inside_slots;

    // Inside E: ordered tuples of measures adding up to the hull.
    let cap = e.f.iter().copied().max().unwrap_or(1).max(1);
    let candidates = all_measures(e, cap);
    let mut reach: BTreeMap<Measure, u128> = BTreeMap::new();
    reach.insert(Measure::zero(), 1);
    for _ in 0..inside_slots {
        let mut next: BTreeMap<Measure, u128> = BTreeMap::new();
        for (partial, ways) in &reach {
            for c in &candidates {
                if let Ok(s) = mu_add(e, partial, c) {
                    if below_hull(p, &s, &hull) {
                        *next.entry(s).or_insert(0) += ways;
                    }
                }
            }
        }
        reach = next;
    }
    let inside_tuples = reach.get(&hull).copied().unwrap_or(0);

    // Outside E: each region is empty or has a type inside P − L.
    let outer = p.carrier() - e.l;
    let outside_measures = candidates.iter().filter(|m| !m.is_zero() && m.support().is_subset(outer)).count() as u128;
    let outside_choices = (1 + outside_measures).pow(outside_slots as u32);
    Ok(OrbitInvariants {
        r,
        regions,
        hull,
        inside_tuples,
        outside_choices,
        count: inside_tuples * outside_choices,
        exact: e.is_compact(),
    })
}

/// A partial sum can still complete to `hull`: its type lies in the hull's
/// type and its discrete counts on the hull's support do not exceed it.
fn below_hull(p: &POSystem, s: &Measure, hull: &Measure) -> bool {
    s.type_of(p).is_subset(hull.type_of(p))
        && s.terms()
            .iter()
            .all(|&(x, n)| !hull.support().contains(x) || !p.discrete().contains(x) || n <= hull.count(x))
}
