use serde::Serialize;

use crate::algebra::{atom_posystem, generate_algebra, AlgebraKind};
use crate::error::{Error, Result};
use crate::subset::Subset;

use super::{validate_tba_system, Card, ExtendedPOSystem, TBASystem};

#[derive(Clone, Debug, Serialize)]
pub struct AtomCount {
    pub atom: Subset,
    pub isolated: Card,
    /// First element contributing an infinite count, if any.
    pub witness: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct OmegaDecision {
    pub categorical: bool,
    pub atoms: Vec<AtomCount>,
    /// The finite-crowded system of the TBA generated by the ideals, when categorical.
    pub refined: Option<TBASystem>,
}

/// Decides whether the ring with ideals given by lower sets `c` is countably
/// categorical: the closure algebra they generate must have finitely many
/// isolated points in every atom.
pub fn omega_cat_check(e: &ExtendedPOSystem, c: &[Subset]) -> Result<OmegaDecision> {
    let p = &e.p;
    for (i, &ci) in c.iter().enumerate() {
        if !ci.is_subset(p.carrier()) || !p.is_lower(ci) {
            return Err(Error::InvalidInput(format!("C{} is not a lower subset", i + 1)));
        }
    }
    let closure = generate_algebra(p, c, AlgebraKind::Closure);
    let mut atoms = Vec::new();
    for &a in closure.atoms() {
        let mut isolated = Card::Finite(0);
        let mut witness = None;
        for x in a & p.discrete() {
            if (p.up(x) & a) != Subset::singleton(x) {
                continue;
            }
            let card = e.card(x);
            if !card.is_finite() && witness.is_none() {
                witness = Some(x);
            }
            isolated = isolated + card;
        }
        atoms.push(AtomCount { atom: a, isolated, witness });
    }
    let categorical = atoms.iter().all(|a| a.isolated.is_finite());
    let refined = if categorical { Some(refine(e, c)?) } else { None };
    Ok(OmegaDecision { categorical, atoms, refined })
}

fn refine(e: &ExtendedPOSystem, c: &[Subset]) -> Result<TBASystem> {
    let d = generate_algebra(&e.p, c, AlgebraKind::Tba);
    let sys = atom_posystem(&d)?;
    let np = sys.system.len();
    let mut l = Subset::EMPTY;
    for (i, &a) in d.atoms().iter().enumerate() {
        if a.is_subset(e.l) {
            l = l.with(i);
        }
    }
    let dom = sys.system.min_of(l) & sys.system.discrete();
    let mut f = vec![0; np];
    for i in dom {
        let total: u32 = d.atoms()[i].iter().map(|x| e.f[x]).sum();
        f[i] = total;
    }
    let base = ExtendedPOSystem::new(sys.system, l, f)?;
    let q = c.iter().map(|&ci| d.project(ci)).collect();
    let t = TBASystem { base, q };
    let r = validate_tba_system(&t);
    if !r.ok() {
        return Err(Error::InvalidInput(format!("refined system invalid: {}", r.failed_laws().join(", "))));
    }
    Ok(t)
}
