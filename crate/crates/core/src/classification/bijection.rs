use crate::algebra::{atom_name, generate_algebra, AlgebraKind};
use crate::error::{Error, Result};
use crate::posystem::POSystem;
use crate::subset::Subset;

use super::{validate_ca_system, validate_tba_system, CASystem, ExtendedPOSystem, TBASystem};

fn reject(what: &str, r: &crate::report::Report) -> Error {
    Error::InvalidInput(format!("{what} invalid: {}", r.failed_laws().join(", ")))
}

/// The closure subalgebra generated by `Q`, read as a CA system.
pub fn tba_to_ca(t: &TBASystem) -> Result<CASystem> {
    let r = validate_tba_system(t);
    if !r.ok() {
        return Err(reject("TBA system", &r));
    }
    let e = &t.base;
    let p = &e.p;
    let c = generate_algebra(p, &t.q, AlgebraKind::Closure);
    let atoms = c.atoms();
    let closures = c.atom_closures();
    let mut pairs = Vec::new();
    for (i, &a) in atoms.iter().enumerate() {
        for (j, &cl) in closures.iter().enumerate() {
            if i != j && a.is_subset(cl) {
                pairs.push((i, j));
            }
        }
    }
    let names = atoms.iter().map(|&a| atom_name(p, a)).collect();
    let s = POSystem::new(names, &pairs)?;
    let mut m = Subset::EMPTY;
    let mut fset = Subset::EMPTY;
    let mut g = vec![0; atoms.len()];
    for (i, &a) in atoms.iter().enumerate() {
        let crowded = a & p.derived_set(a);
        let discrete = a - crowded;
        if a.is_subset(e.l) {
            m = m.with(i);
        }
        if crowded.is_empty() {
            fset = fset.with(i);
        }
        g[i] = discrete.iter().map(|x| e.f[x]).sum();
    }
    let q = t.q.iter().map(|&qi| c.project(qi)).collect();
    Ok(CASystem { s, m, fset, g, q })
}

/// Splits every atom `s` into a crowded copy (unless `s ∈ F`) and a discrete
/// copy (when `g(s) > 0`).
pub fn ca_to_tba(c: &CASystem) -> Result<TBASystem> {
    let r = validate_ca_system(c);
    if !r.ok() {
        return Err(reject("CA system", &r));
    }
    let s = &c.s;
    let n = s.len();
    let h: Subset = (0..n).filter(|&x| c.g[x] > 0).collect();
    let mut crowded_ix = vec![None; n];
    let mut discrete_ix = vec![None; n];
    let mut names = Vec::new();
    for x in 0..n {
        if !c.fset.contains(x) {
            crowded_ix[x] = Some(names.len());
            names.push(format!("{}.c", s.name(x)));
        }
        if h.contains(x) {
            discrete_ix[x] = Some(names.len());
            names.push(format!("{}.d", s.name(x)));
        }
    }
    let mut pairs = Vec::new();
    for x in 0..n {
        let Some(xc) = crowded_ix[x] else { continue };
        for t in 0..n {
            if let Some(tc) = crowded_ix[t] {
                if s.le(t, x) {
                    pairs.push((tc, xc));
                }
            }
            if let Some(td) = discrete_ix[t] {
                if s.lt(t, x) && t != x {
                    pairs.push((td, xc));
                }
            }
        }
    }
    let p = POSystem::new(names, &pairs)?;
    let split = |set: Subset| -> Subset {
        let mut out = Subset::EMPTY;
        for x in set {
            if let Some(i) = crowded_ix[x] {
                out = out.with(i);
            }
            if let Some(i) = discrete_ix[x] {
                out = out.with(i);
            }
        }
        out
    };
    let mut l = Subset::EMPTY;
    let mut f = vec![0; p.len()];
    for x in 0..n {
        if c.m.contains(x) && !c.fset.contains(x) {
            l = l.with(crowded_ix[x].expect("crowded copy exists off F"));
        }
        if let Some(i) = discrete_ix[x] {
            l = l.with(i);
            f[i] = c.g[x];
        }
    }
    let q = c.q.iter().map(|&qi| split(qi)).collect();
    let base = ExtendedPOSystem::new(p, l, f)?;
    Ok(TBASystem { base, q })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classification::{iso_ca, iso_tba};

    fn single(refl: bool) -> POSystem {
        if refl {
            POSystem::from_named(&["p"], &[("p", "p")]).unwrap()
        } else {
            POSystem::from_named::<&str>(&["p"], &[]).unwrap()
        }
    }

    #[test]
    fn atomless_algebra_maps_to_single_crowded_atom() {
        let t = TBASystem {
            base: ExtendedPOSystem::compact(single(true), vec![0]).unwrap(),
            q: vec![Subset::singleton(0)],
        };
        let c = tba_to_ca(&t).unwrap();
        assert_eq!(c.s.len(), 1);
        assert_eq!((c.m, c.fset, c.g.clone()), (Subset::singleton(0), Subset::EMPTY, vec![0]));
        assert_eq!(c.q, vec![Subset::singleton(0)]);
    }

    #[test]
    fn merged_atom_regression() {
        // c < c, d unrelated and discrete; the closure algebra of [P] has one atom {c,d}.
        let p = POSystem::from_named(&["c", "d"], &[("c", "c")]).unwrap();
        let full = p.carrier();
        let t = TBASystem { base: ExtendedPOSystem::compact(p, vec![0, 2]).unwrap(), q: vec![full] };
        let c = tba_to_ca(&t).unwrap();
        assert_eq!(c.s.len(), 1);
        assert_eq!((c.m, c.fset, c.g.clone()), (Subset::singleton(0), Subset::EMPTY, vec![2]));
        let back = ca_to_tba(&c).unwrap();
        assert!(iso_tba(&back, &t).is_some());
    }

    #[test]
    fn finite_boolean_algebra_from_ca() {
        let c = CASystem {
            s: single(false),
            m: Subset::singleton(0),
            fset: Subset::singleton(0),
            g: vec![5],
            q: vec![Subset::singleton(0)],
        };
        let t = ca_to_tba(&c).unwrap();
        assert_eq!(t.p().len(), 1);
        assert!(!t.p().is_reflexive(0));
        assert_eq!((t.base.l, t.base.f.clone()), (Subset::singleton(0), vec![5]));
        assert!(iso_ca(&tba_to_ca(&t).unwrap(), &c).is_some());
    }

    #[test]
    fn atomless_ring_without_identity_from_ca() {
        let c = CASystem {
            s: single(false),
            m: Subset::EMPTY,
            fset: Subset::EMPTY,
            g: vec![0],
            q: vec![Subset::singleton(0)],
        };
        let t = ca_to_tba(&c).unwrap();
        assert!(t.p().is_reflexive(0));
        assert_eq!(t.base.l, Subset::EMPTY);
    }

    #[test]
    fn posets_map_to_discrete_atoms() {
        // Discrete 2-chain a < b is not finite-crowded; use a discrete antichain.
        let p = POSystem::antichain(2);
        let t = TBASystem { base: ExtendedPOSystem::compact(p, vec![2, 3]).unwrap(), q: vec![Subset::singleton(0)] };
        let c = tba_to_ca(&t).unwrap();
        assert_eq!(c.fset, c.s.min_of(c.m));
        assert_eq!(c.g, vec![2, 3]);
    }
}
