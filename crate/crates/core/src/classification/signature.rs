use serde::Serialize;

use crate::algebra::{generate_algebra, AlgebraKind};
use crate::canon::canonical_form;
use crate::error::Result;
use crate::posystem::POSystem;
use crate::report::Report;
use crate::subset::Subset;

use super::{ca_to_tba, tba_to_ca, CASystem, TBASystem};

/// A finite closure algebra presented by its atom poset (`D < E` iff
/// `D ⊆ closure(E)`), with distinguished generators and per-atom `h`, `k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Signature {
    #[serde(skip)]
    pub atoms: POSystem,
    pub generators: Vec<Subset>,
    pub h: Vec<u32>,
    pub k: Vec<u8>,
}

impl Signature {
    pub fn canonical(&self) -> Vec<u8> {
        let weights: Vec<u64> = self.h.iter().zip(&self.k).map(|(&h, &k)| h as u64 * 3 + k as u64).collect();
        let mut b = vec![b'S'];
        b.extend(canonical_form(&self.atoms, &self.generators, &weights).bytes);
        b
    }

    fn to_ca(&self) -> CASystem {
        let n = self.atoms.len();
        CASystem {
            s: self.atoms.clone(),
            m: (0..n).filter(|&i| self.k[i] <= 1).collect(),
            fset: (0..n).filter(|&i| self.k[i] == 0).collect(),
            g: self.h.clone(),
            q: self.generators.clone(),
        }
    }
}

pub fn signature_of(t: &TBASystem) -> Result<Signature> {
    let c = tba_to_ca(t)?;
    let n = c.s.len();
    let k = (0..n)
        .map(|i| match (c.fset.contains(i), c.m.contains(i)) {
            (true, _) => 0,
            (false, true) => 1,
            (false, false) => 2,
        })
        .collect();
    Ok(Signature { atoms: c.s, generators: c.q, h: c.g, k })
}

/// Checks the three realizability conditions and, when they hold, builds a
/// TBA system with this signature.
pub fn signature_realizable(s: &Signature) -> (Report, Option<TBASystem>) {
    let a = &s.atoms;
    let n = a.len();
    let mut r = Report::new();
    let well_formed = a.is_poset() && s.h.len() == n && s.k.len() == n && s.k.iter().all(|&k| k <= 2);
    r.push("well-formed", well_formed, "atom order must be a poset with h, k given per atom, k <= 2");
    if !well_formed {
        return (r, None);
    }
    let gens_lower = s.generators.iter().all(|&g| a.is_lower(g));
    let c = generate_algebra(a, &s.generators, AlgebraKind::Closure);
    r.push(
        "generated by closed elements",
        gens_lower && c.is_full_powerset(),
        "generators must be closed and generate the whole closure algebra",
    );
    let bad_b: Vec<&str> = (0..n)
        .filter(|&d| s.k[d] == 0 && (s.h[d] == 0 || !a.strictly_below(d).is_empty()))
        .map(|d| a.name(d))
        .collect();
    r.push(
        "finite atoms are closed with isolated points",
        bad_b.is_empty(),
        format!("offending atoms: {}", bad_b.join(" ")),
    );
    let bad_c: Vec<String> = a
        .pairs()
        .into_iter()
        .filter(|&(d, e)| s.k[d] > s.k[e])
        .map(|(d, e)| format!("{}<{}", a.name(d), a.name(e)))
        .collect();
    r.push("k monotone", bad_c.is_empty(), format!("k decreases along {}", bad_c.join(" ")));
    if !r.ok() {
        return (r, None);
    }
    let witness = ca_to_tba(&s.to_ca()).ok();
    (r, witness)
}
