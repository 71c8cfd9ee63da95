//! Finite PO systems: a carrier with an antisymmetric transitive relation `<`
//! in which `p < p` is allowed.
//!
//! Points with `p < p` are the reflexive (crowded) points; the rest form the
//! discrete part. Subsets of the carrier are [`Subset`] bitmasks indexed by
//! element position, and the derived-set operator `Q' = {p | p < q, q in Q}`
//! turns `2^P` into a topological Boolean algebra.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::subset::{Subset, MAX_ELEMENTS};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct POSystem {
    names: Vec<String>,
    /// `below[q]` = `{p | p < q}`.
    below: Vec<Subset>,
    /// `above[p]` = `{q | p < q}`.
    above: Vec<Subset>,
}

impl POSystem {
    /// Builds a PO system from index pairs `(p, q)` meaning `p < q`, checking
    /// antisymmetry and transitivity without closing the relation.
    pub fn new(names: Vec<String>, pairs: &[(usize, usize)]) -> Result<POSystem> {
        let n = names.len();
        if n > MAX_ELEMENTS {
            return Err(Error::TooLarge(n, MAX_ELEMENTS));
        }
        let mut seen = HashMap::new();
        for (i, name) in names.iter().enumerate() {
            if seen.insert(name.as_str(), i).is_some() {
                return Err(Error::DuplicateElement(name.clone()));
            }
        }
        let mut below = vec![Subset::EMPTY; n];
        let mut above = vec![Subset::EMPTY; n];
        for &(p, q) in pairs {
            if p >= n || q >= n {
                return Err(Error::InvalidInput(format!("pair ({p}, {q}) out of range")));
            }
            below[q] = below[q].with(p);
            above[p] = above[p].with(q);
        }
        let sys = POSystem { names, below, above };
        sys.check_axioms()?;
        Ok(sys)
    }

    /// Like [`POSystem::new`] but first takes the transitive closure of the
    /// given pairs, so any generating set of the order is accepted.
    pub fn from_generating_pairs(names: Vec<String>, pairs: &[(usize, usize)]) -> Result<POSystem> {
        let n = names.len();
        if n > MAX_ELEMENTS {
            return Err(Error::TooLarge(n, MAX_ELEMENTS));
        }
        let mut above = vec![Subset::EMPTY; n];
        for &(p, q) in pairs {
            if p >= n || q >= n {
                return Err(Error::InvalidInput(format!("pair ({p}, {q}) out of range")));
            }
            above[p] = above[p].with(q);
        }
        // Warshall over bitmask rows.
        for k in 0..n {
            for p in 0..n {
                if above[p].contains(k) {
                    above[p] = above[p] | above[k];
                }
            }
        }
        let closed: Vec<(usize, usize)> = (0..n).flat_map(|p| above[p].iter().map(move |q| (p, q))).collect();
        POSystem::new(names, &closed)
    }

    /// Validates a named relation. Reports the first antisymmetry violation
    /// as [`Error::Cycle`] and the first missing transitive pair as
    /// [`Error::Transitivity`].
    pub fn from_named<S: AsRef<str>>(elements: &[S], rel: &[(S, S)]) -> Result<POSystem> {
        let names: Vec<String> = elements.iter().map(|s| s.as_ref().to_string()).collect();
        let index: HashMap<&str, usize> = names.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        let lookup = |s: &str| index.get(s).copied().ok_or_else(|| Error::UnknownElement(s.to_string()));
        let mut pairs = Vec::with_capacity(rel.len());
        for (p, q) in rel {
            pairs.push((lookup(p.as_ref())?, lookup(q.as_ref())?));
        }
        POSystem::new(names.clone(), &pairs)
    }

    /// Discrete PO system (antichain, no reflexive points) on `n` anonymous elements.
    pub fn antichain(n: usize) -> POSystem {
        POSystem::new(default_names(n), &[]).expect("antichain is a PO system")
    }

    fn check_axioms(&self) -> Result<()> {
        let n = self.len();
        for p in 0..n {
            for q in self.above[p] {
                if q != p && self.above[q].contains(p) {
                    return Err(Error::Cycle(self.names[p].clone(), self.names[q].clone()));
                }
            }
        }
        for p in 0..n {
            for q in self.above[p] {
                let missing = self.above[q] - self.above[p];
                if let Some(r) = missing.first() {
                    return Err(Error::Transitivity(
                        self.names[p].clone(),
                        self.names[q].clone(),
                        self.names[r].clone(),
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn carrier(&self) -> Subset {
        Subset::full(self.len())
    }

    /// `p < q`.
    #[inline]
    pub fn lt(&self, p: usize, q: usize) -> bool {
        self.above[p].contains(q)
    }

    /// `p <= q`, i.e. `p < q` or `p = q`.
    #[inline]
    pub fn le(&self, p: usize, q: usize) -> bool {
        p == q || self.lt(p, q)
    }

    pub fn is_reflexive(&self, p: usize) -> bool {
        self.lt(p, p)
    }

    pub fn strictly_below(&self, q: usize) -> Subset {
        self.below[q]
    }

    pub fn strictly_above(&self, p: usize) -> Subset {
        self.above[p]
    }

    /// `P_1`: the reflexive points.
    pub fn reflexive(&self) -> Subset {
        (0..self.len()).filter(|&p| self.is_reflexive(p)).collect()
    }

    /// `P^d`: the points with `p ≮ p`.
    pub fn discrete(&self) -> Subset {
        self.carrier() - self.reflexive()
    }

    /// Minimal elements of `(P, <=)`.
    pub fn minimal(&self) -> Subset {
        self.min_of(self.carrier())
    }

    pub fn is_poset(&self) -> bool {
        self.reflexive().is_empty()
    }

    /// Derived set `Q' = {p | p < q for some q in Q}`.
    pub fn derived_set(&self, q: Subset) -> Subset {
        q.iter().fold(Subset::EMPTY, |acc, x| acc | self.below[x])
    }

    /// Closure `Q ∪ Q'`.
    pub fn closure(&self, q: Subset) -> Subset {
        q | self.derived_set(q)
    }

    /// `{q | q >= p}`.
    pub fn up(&self, p: usize) -> Subset {
        self.above[p].with(p)
    }

    /// `{q | q <= p}`.
    pub fn down(&self, p: usize) -> Subset {
        self.below[p].with(p)
    }

    pub fn up_set(&self, s: Subset) -> Subset {
        s.iter().fold(Subset::EMPTY, |acc, p| acc | self.up(p))
    }

    pub fn down_set(&self, s: Subset) -> Subset {
        s.iter().fold(Subset::EMPTY, |acc, p| acc | self.down(p))
    }

    pub fn is_lower(&self, s: Subset) -> bool {
        self.derived_set(s).is_subset(s)
    }

    pub fn is_upper(&self, s: Subset) -> bool {
        s.iter().all(|p| self.above[p].is_subset(s))
    }

    /// No two distinct members are comparable.
    pub fn is_antichain(&self, s: Subset) -> bool {
        s.iter().all(|p| !(self.above[p].without(p)).meets(s))
    }

    /// Minimal members of `s` with respect to `<=`.
    pub fn min_of(&self, s: Subset) -> Subset {
        s.iter().filter(|&p| !(self.below[p].without(p)).meets(s)).collect()
    }

    pub fn max_of(&self, s: Subset) -> Subset {
        s.iter().filter(|&p| !(self.above[p].without(p)).meets(s)).collect()
    }

    /// All lower subsets, in increasing bitmask order.
    pub fn lower_sets(&self) -> Vec<Subset> {
        let order = self.topological_order();
        let mut out = Vec::new();
        self.collect_lower(&order, Subset::EMPTY, &mut out);
        out.sort();
        out
    }

    // Elements are decided in topological order, so everything strictly
    // below the next element has already been decided.
    fn collect_lower(&self, order: &[usize], acc: Subset, out: &mut Vec<Subset>) {
        let Some((&p, rest)) = order.split_first() else {
            out.push(acc);
            return;
        };
        self.collect_lower(rest, acc, out);
        if self.below[p].without(p).is_subset(acc) {
            self.collect_lower(rest, acc.with(p), out);
        }
    }

    /// A topological order of the strict part, smallest index first among ready elements.
    pub fn topological_order(&self) -> Vec<usize> {
        let n = self.len();
        let mut placed = Subset::EMPTY;
        let mut order = Vec::with_capacity(n);
        while order.len() < n {
            let next = (0..n)
                .find(|&p| !placed.contains(p) && (self.below[p].without(p)).is_subset(placed))
                .expect("strict part is acyclic");
            placed = placed.with(next);
            order.push(next);
        }
        order
    }

    /// Covering pairs of the strict order (`p < q`, `p != q`, nothing strictly between).
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for q in 0..self.len() {
            for p in self.below[q].without(q) {
                let between = (self.above[p] & self.below[q]).without(p).without(q);
                if between.is_empty() {
                    out.push((p, q));
                }
            }
        }
        out.sort();
        out
    }

    /// All pairs of the relation, reflexive ones included.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        (0..self.len()).flat_map(|p| self.above[p].iter().map(move |q| (p, q))).collect()
    }

    /// Sub-PO system on `s`, with the map from new to old indices.
    pub fn restrict(&self, s: Subset) -> (POSystem, Vec<usize>) {
        let old: Vec<usize> = s.iter().collect();
        let names = old.iter().map(|&i| self.names[i].clone()).collect();
        let mut pairs = Vec::new();
        for (a, &p) in old.iter().enumerate() {
            for (b, &q) in old.iter().enumerate() {
                if self.lt(p, q) {
                    pairs.push((a, b));
                }
            }
        }
        (POSystem::new(names, &pairs).expect("restriction of a PO system"), old)
    }

    /// Relabels elements: new index `i` is old index `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> POSystem {
        let mut inv = vec![0; perm.len()];
        for (i, &o) in perm.iter().enumerate() {
            inv[o] = i;
        }
        let names = perm.iter().map(|&o| self.names[o].clone()).collect();
        let pairs: Vec<_> = self.pairs().into_iter().map(|(p, q)| (inv[p], inv[q])).collect();
        POSystem::new(names, &pairs).expect("relabelling preserves axioms")
    }

    pub fn with_names(&self, names: Vec<String>) -> Result<POSystem> {
        POSystem::new(names, &self.pairs())
    }

    pub fn format_subset(&self, s: Subset) -> String {
        let parts: Vec<&str> = s.iter().map(|i| self.name(i)).collect();
        format!("{{{}}}", parts.join(","))
    }
}

pub fn default_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("e{i}")).collect()
}

impl fmt::Debug for POSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rel: Vec<String> =
            self.pairs().into_iter().map(|(p, q)| format!("{}<{}", self.names[p], self.names[q])).collect();
        write!(f, "POSystem[{}; {}]", self.names.join(" "), rel.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(names: &[&str], rel: &[(&str, &str)]) -> Result<POSystem> {
        POSystem::from_named(names, rel)
    }

    #[test]
    fn single_point_cases() {
        let p = sys(&["p"], &[]).unwrap();
        assert!(p.is_poset());
        assert_eq!(p.discrete(), Subset::singleton(0));
        let q = sys(&["p"], &[("p", "p")]).unwrap();
        assert!(!q.is_poset());
        assert_eq!(q.discrete(), Subset::EMPTY);
        assert_eq!(q.reflexive(), Subset::singleton(0));
    }

    #[test]
    fn antisymmetry_violation_is_cycle_error() {
        let err = sys(&["a", "b"], &[("a", "b"), ("b", "a")]).unwrap_err();
        assert_eq!(err, Error::Cycle("a".into(), "b".into()));
    }

    #[test]
    fn transitivity_violation_has_witness() {
        let err = sys(&["a", "b", "c"], &[("a", "b"), ("b", "c")]).unwrap_err();
        assert_eq!(err, Error::Transitivity("a".into(), "b".into(), "c".into()));
    }

    #[test]
    fn generating_pairs_are_closed() {
        let p = POSystem::from_generating_pairs(default_names(3), &[(0, 1), (1, 2)]).unwrap();
        assert!(p.lt(0, 2));
        assert_eq!(p.covers(), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn derived_set_examples() {
        // a < b, a < a
        let p = sys(&["a", "b"], &[("a", "b"), ("a", "a")]).unwrap();
        assert_eq!(p.derived_set(Subset::singleton(1)), Subset::singleton(0));
        assert_eq!(p.derived_set(Subset::EMPTY), Subset::EMPTY);
        assert_eq!(p.closure(Subset::singleton(1)), p.carrier());
        let r = sys(&["p"], &[("p", "p")]).unwrap();
        assert_eq!(r.derived_set(Subset::singleton(0)), Subset::singleton(0));
    }

    #[test]
    fn lower_sets_are_exact() {
        let p = POSystem::from_generating_pairs(default_names(4), &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
        let brute: Vec<Subset> = p.carrier().subsets().filter(|&s| p.is_lower(s)).collect();
        let mut brute = brute;
        brute.sort();
        assert_eq!(p.lower_sets(), brute);
    }

    #[test]
    fn min_and_antichain() {
        let p = POSystem::from_generating_pairs(default_names(3), &[(0, 1)]).unwrap();
        assert_eq!(p.minimal(), Subset::from_indices([0, 2]));
        assert!(p.is_antichain(Subset::from_indices([1, 2])));
        assert!(!p.is_antichain(Subset::from_indices([0, 1])));
        assert_eq!(p.topological_order(), vec![0, 1, 2]);
    }
}
