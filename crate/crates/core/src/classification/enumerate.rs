use std::collections::{BTreeMap, HashSet};

use crate::algebra::{generate_algebra, AlgebraKind};
use crate::canon::canonical_form;
use crate::error::{Error, Result};
use crate::posystem::{default_names, POSystem};
use crate::subset::Subset;

use super::{CASystem, ExtendedPOSystem, TBASystem};

pub const MAX_ENUMERATION_SIZE: usize = 6;

#[derive(Clone, Debug)]
pub struct Enumeration {
    /// Sorted by carrier size, then canonical bytes.
    pub systems: Vec<TBASystem>,
    /// Number of classes per carrier size.
    pub counts: BTreeMap<usize, usize>,
}

fn posets(n: usize) -> Vec<POSystem> {
    if n == 0 {
        return vec![POSystem::antichain(0)];
    }
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for smaller in posets(n - 1) {
        // The new element n-1 is maximal with the lower set `d` strictly below it.
        for d in smaller.lower_sets() {
            let mut pairs = smaller.pairs();
            pairs.extend(d.iter().map(|x| (x, n - 1)));
            let p = POSystem::new(default_names(n), &pairs).expect("extension by a maximal element");
            if seen.insert(canonical_form(&p, &[], &[]).bytes) {
                out.push(p);
            }
        }
    }
    out
}

/// One representative per isomorphism class of PO systems on `n` elements.
/// With `posets_only`, reflexive points are excluded.
pub fn enumerate_posystems(n: usize, posets_only: bool) -> Vec<POSystem> {
    let base = posets(n);
    if posets_only {
        return base;
    }
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for p in base {
        for refl in p.carrier().subsets() {
            let mut pairs = p.pairs();
            pairs.extend(refl.iter().map(|x| (x, x)));
            let q = POSystem::new(p.names().to_vec(), &pairs).expect("reflexive points keep the axioms");
            if seen.insert(canonical_form(&q, &[], &[]).bytes) {
                out.push(q);
            }
        }
    }
    out
}

fn tuples(items: &[Subset], n: usize) -> Vec<Vec<Subset>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|t| {
                items.iter().map(move |&s| {
                    let mut t = t.clone();
                    t.push(s);
                    t
                })
            })
            .collect();
    }
    out
}

/// Assignments of values `lo..=hi` to the members of `dom`, as total vectors of length `len`.
fn assignments(dom: Subset, len: usize, lo: u32, hi: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![0; len]];
    for x in dom {
        out = out
            .into_iter()
            .flat_map(|v| {
                (lo..=hi).map(move |val| {
                    let mut v = v.clone();
                    v[x] = val;
                    v
                })
            })
            .collect();
    }
    out
}

fn check_bounds(max_p: usize, n: usize, max_f: u32) -> Result<()> {
    if max_p > MAX_ENUMERATION_SIZE {
        return Err(Error::LimitExceeded(format!("carrier size {max_p} above {MAX_ENUMERATION_SIZE}")));
    }
    if n == 0 || max_f == 0 {
        return Err(Error::InvalidInput("need n >= 1 and max_f >= 1".into()));
    }
    Ok(())
}

/// Representatives of all valid TBA systems with `1 <= |P| <= max_p`, `n`
/// ideals and `f <= max_f`, one per isomorphism class.
pub fn enumerate_systems(max_p: usize, n: usize, max_f: u32) -> Result<Enumeration> {
    check_bounds(max_p, n, max_f)?;
    let mut systems = Vec::new();
    let mut counts = BTreeMap::new();
    for size in 1..=max_p {
        let mut found: BTreeMap<Vec<u8>, TBASystem> = BTreeMap::new();
        for p in enumerate_posystems(size, false) {
            let lowers = p.lower_sets();
            let gens: Vec<Vec<Subset>> = tuples(&lowers, n)
                .into_iter()
                .filter(|q| generate_algebra(&p, q, AlgebraKind::Tba).is_full_powerset())
                .collect();
            if gens.is_empty() {
                continue;
            }
            for &l in &lowers {
                if !p.discrete().is_subset(p.min_of(l)) {
                    continue;
                }
                let dom = p.min_of(l) & p.discrete();
                for f in assignments(dom, size, 1, max_f) {
                    let base = ExtendedPOSystem::new(p.clone(), l, f).expect("f on L_min^d");
                    for q in &gens {
                        let t = TBASystem { base: base.clone(), q: q.clone() };
                        found.entry(t.canonical()).or_insert(t);
                    }
                }
            }
        }
        counts.insert(size, found.len());
        systems.extend(found.into_values());
    }
    Ok(Enumeration { systems, counts })
}

/// Representatives of all valid CA systems with `1 <= |S| <= max_s`, `n`
/// ideals and `g <= max_g`, one per isomorphism class, sorted by size then
/// canonical bytes.
pub fn enumerate_ca_systems(max_s: usize, n: usize, max_g: u32) -> Result<Vec<CASystem>> {
    check_bounds(max_s, n, max_g)?;
    let mut out = Vec::new();
    for size in 1..=max_s {
        let mut found: BTreeMap<Vec<u8>, CASystem> = BTreeMap::new();
        for s in enumerate_posystems(size, true) {
            let lowers = s.lower_sets();
            let gens: Vec<Vec<Subset>> = tuples(&lowers, n)
                .into_iter()
                .filter(|q| generate_algebra(&s, q, AlgebraKind::Closure).is_full_powerset())
                .collect();
            if gens.is_empty() {
                continue;
            }
            let all_g = assignments(s.carrier(), size, 0, max_g);
            for &m in &lowers {
                for fset in s.min_of(m).subsets() {
                    for g in all_g.iter().filter(|g| fset.iter().all(|x| g[x] > 0)) {
                        for q in &gens {
                            let c = CASystem { s: s.clone(), m, fset, g: g.clone(), q: q.clone() };
                            found.entry(c.canonical()).or_insert(c);
                        }
                    }
                }
            }
        }
        out.extend(found.into_values());
    }
    Ok(out)
}
