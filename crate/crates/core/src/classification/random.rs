//! Random PO systems and tuples for sampling sweeps.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::algebra::{generate_algebra, AlgebraKind};
use crate::posystem::{default_names, POSystem};
use crate::subset::Subset;

use super::{ExtendedPOSystem, TBASystem};

/// A PO system on `n` elements: a random strict order compatible with a
/// shuffled linear order, plus random reflexive points.
pub fn random_posystem<R: Rng>(rng: &mut R, n: usize, density: f64) -> POSystem {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(density) {
                pairs.push((perm[i], perm[j]));
            }
        }
        if rng.gen_bool(0.5) {
            pairs.push((i, i));
        }
    }
    POSystem::from_generating_pairs(default_names(n), &pairs).expect("acyclic relation")
}

fn random_lower<R: Rng>(rng: &mut R, p: &POSystem) -> Subset {
    *p.lower_sets().choose(rng).expect("the empty set is lower")
}

/// Draws until a valid TBA system with `1 <= |P| <= max_p`, `n` ideals and
/// `f <= max_f` turns up, giving up after `tries` draws.
pub fn random_tba_system<R: Rng>(rng: &mut R, max_p: usize, n: usize, max_f: u32, tries: usize) -> Option<TBASystem> {
    for _ in 0..tries {
        let size = rng.gen_range(1..=max_p);
        let p = random_posystem(rng, size, 0.4);
        let q: Vec<Subset> = (0..n).map(|_| random_lower(rng, &p)).collect();
        if !generate_algebra(&p, &q, AlgebraKind::Tba).is_full_powerset() {
            continue;
        }
        let l = random_lower(rng, &p);
        if !p.discrete().is_subset(p.min_of(l)) {
            continue;
        }
        let dom = p.min_of(l) & p.discrete();
        let f = (0..size).map(|x| if dom.contains(x) { rng.gen_range(1..=max_f) } else { 0 }).collect();
        let base = ExtendedPOSystem::new(p, l, f).expect("f on L_min^d");
        return Some(TBASystem { base, q });
    }
    None
}
