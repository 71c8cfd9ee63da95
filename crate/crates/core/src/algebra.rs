//! Subalgebras of `2^P` generated by a family of subsets, optionally closed
//! under the derived-set or closure operator of a PO system.
//!
//! A finite Boolean subalgebra is determined by its atoms, so a
//! [`SetAlgebra`] stores the atom partition of the carrier. Membership is
//! "union of atoms" and the member list is produced on demand.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::posystem::POSystem;
use crate::subset::Subset;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AlgebraKind {
    Boolean,
    Tba,
    Closure,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetAlgebra {
    base: POSystem,
    kind: AlgebraKind,
    generators: Vec<Subset>,
    /// Sorted by lowest element.
    atoms: Vec<Subset>,
}

/// Splits every block of `parts` along `s`.
fn refine(parts: &mut Vec<Subset>, s: Subset) -> bool {
    let mut changed = false;
    let mut out = Vec::with_capacity(parts.len() + 1);
    for &b in parts.iter() {
        let inside = b & s;
        let outside = b - s;
        if !inside.is_empty() && !outside.is_empty() {
            changed = true;
            out.push(inside);
            out.push(outside);
        } else {
            out.push(b);
        }
    }
    *parts = out;
    changed
}

fn sort_atoms(atoms: &mut [Subset]) {
    atoms.sort_by_key(|a| a.first());
}

/// Least subalgebra of `2^P` containing `gens` and the carrier, closed under
/// the operator selected by `kind`.
pub fn generate_algebra(p: &POSystem, gens: &[Subset], kind: AlgebraKind) -> SetAlgebra {
    let carrier = p.carrier();
    let mut atoms = if carrier.is_empty() { Vec::new() } else { vec![carrier] };
    for &g in gens {
        refine(&mut atoms, g & carrier);
    }
    if kind != AlgebraKind::Boolean {
        // The operators are union-additive, so closing the atoms suffices.
        loop {
            let images: Vec<Subset> = atoms
                .iter()
                .map(|&a| match kind {
                    AlgebraKind::Tba => p.derived_set(a),
                    _ => p.closure(a),
                })
                .collect();
            let mut changed = false;
            for img in images {
                changed |= refine(&mut atoms, img);
            }
            if !changed {
                break;
            }
        }
    }
    sort_atoms(&mut atoms);
    SetAlgebra { base: p.clone(), kind, generators: gens.to_vec(), atoms }
}

impl SetAlgebra {
    /// Algebra given directly by an atom partition. Fails if `atoms` is not a
    /// partition of the carrier into nonempty blocks.
    pub fn from_atoms(p: &POSystem, atoms: Vec<Subset>, kind: AlgebraKind) -> Result<SetAlgebra> {
        let mut seen = Subset::EMPTY;
        for &a in &atoms {
            if a.is_empty() || a.meets(seen) {
                return Err(Error::InvalidInput("atoms must be disjoint and nonempty".into()));
            }
            seen |= a;
        }
        if seen != p.carrier() {
            return Err(Error::InvalidInput("atoms must cover the carrier".into()));
        }
        let mut atoms = atoms;
        sort_atoms(&mut atoms);
        let alg = SetAlgebra { base: p.clone(), kind, generators: Vec::new(), atoms };
        Ok(alg)
    }

    pub fn base(&self) -> &POSystem {
        &self.base
    }

    pub fn kind(&self) -> AlgebraKind {
        self.kind
    }

    pub fn generators(&self) -> &[Subset] {
        &self.generators
    }

    pub fn atoms(&self) -> &[Subset] {
        &self.atoms
    }

    pub fn num_members(&self) -> u64 {
        1u64 << self.atoms.len()
    }

    /// Is `s` a union of atoms?
    pub fn contains(&self, s: Subset) -> bool {
        s.is_subset(self.base.carrier()) && self.atoms.iter().all(|&a| a.is_subset(s) || !a.meets(s))
    }

    /// Every member, ordered by the bitmask of atom indices it is built from.
    pub fn members(&self) -> Vec<Subset> {
        Subset::full(self.atoms.len()).subsets().map(|sel| self.lift(sel)).collect()
    }

    /// Index of the atom containing element `p`.
    pub fn atom_of(&self, p: usize) -> usize {
        self.atoms.iter().position(|a| a.contains(p)).expect("atoms partition the carrier")
    }

    /// Union of the atoms whose indices are in `sel`.
    pub fn lift(&self, sel: Subset) -> Subset {
        sel.iter().fold(Subset::EMPTY, |acc, i| acc | self.atoms[i])
    }

    /// Atom indices of the atoms meeting `s`; exact inverse of [`lift`] on members.
    ///
    /// [`lift`]: SetAlgebra::lift
    pub fn project(&self, s: Subset) -> Subset {
        (0..self.atoms.len()).filter(|&i| self.atoms[i].meets(s)).collect()
    }

    pub fn is_full_powerset(&self) -> bool {
        self.atoms.len() == self.base.len()
    }

    /// Closed under the derived-set operator of the base.
    pub fn is_tba_closed(&self) -> bool {
        self.atoms.iter().all(|&a| self.contains(self.base.derived_set(a)))
    }

    /// Closures of the atoms, in atom order.
    pub fn atom_closures(&self) -> Vec<Subset> {
        self.atoms.iter().map(|&a| self.base.closure(a)).collect()
    }

    /// Distinct atoms have distinct closures.
    pub fn atoms_have_distinct_closures(&self) -> bool {
        let cl = self.atom_closures();
        (0..cl.len()).all(|i| (i + 1..cl.len()).all(|j| cl[i] != cl[j]))
    }

    /// `s` is closed in the base topology: `s' ⊆ s`.
    pub fn is_closed_set(&self, s: Subset) -> bool {
        self.base.derived_set(s).is_subset(s)
    }

    /// The Boolean algebra generated by the closed members equals `self`.
    ///
    /// Closed members are exactly unions of atom closures when the algebra is
    /// closure-stable, so their Boolean span is generated by those closures.
    pub fn generated_by_closed(&self) -> bool {
        let mut parts = if self.atoms.is_empty() { Vec::new() } else { vec![self.base.carrier()] };
        for c in self.atom_closures() {
            if self.contains(c) {
                refine(&mut parts, c);
            }
        }
        parts.len() == self.atoms.len()
    }
}

/// The PO system on the atoms of a TBA: `A < B` iff `A ⊆ B'`.
#[derive(Clone, Debug)]
pub struct AtomSystem {
    pub system: POSystem,
    pub algebra: SetAlgebra,
}

impl AtomSystem {
    /// Lower subset of the atom system to the closed member it names.
    pub fn gamma(&self, lower: Subset) -> Subset {
        self.algebra.lift(lower)
    }

    /// Member of the algebra to the set of atoms it contains.
    pub fn ungamma(&self, member: Subset) -> Subset {
        self.algebra.project(member)
    }
}

/// Atom name: element names joined by `+`.
pub fn atom_name(p: &POSystem, atom: Subset) -> String {
    atom.iter().map(|i| p.name(i)).collect::<Vec<_>>().join("+")
}

pub fn atom_posystem(d: &SetAlgebra) -> Result<AtomSystem> {
    let p = d.base();
    if !d.is_tba_closed() {
        return Err(Error::NotATba);
    }
    if !d.generated_by_closed() {
        return Err(Error::NotGeneratedByClosed);
    }
    let atoms = d.atoms();
    let names: Vec<String> = atoms.iter().map(|&a| atom_name(p, a)).collect();
    let mut pairs = Vec::new();
    for (j, &b) in atoms.iter().enumerate() {
        let db = p.derived_set(b);
        for (i, &a) in atoms.iter().enumerate() {
            if a.is_subset(db) {
                pairs.push((i, j));
            }
        }
    }
    let system = POSystem::new(names, &pairs)?;
    Ok(AtomSystem { system, algebra: d.clone() })
}

/// The crowded and discrete parts of an atom of a closure algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AtomSplit {
    pub atom: Subset,
    /// `A ∩ A'`.
    pub crowded: Subset,
    /// `A − A'`.
    pub discrete: Subset,
    /// Derived set of the crowded part.
    pub crowded_derived: Subset,
    /// Whether the discrete part has empty derived set.
    pub hypothesis_holds: bool,
}

pub fn split_atoms_cd(c: &SetAlgebra) -> Vec<AtomSplit> {
    let p = c.base();
    c.atoms()
        .iter()
        .map(|&a| {
            let crowded = a & p.derived_set(a);
            let discrete = a - crowded;
            AtomSplit {
                atom: a,
                crowded,
                discrete,
                crowded_derived: p.derived_set(crowded),
                hypothesis_holds: p.derived_set(discrete).is_empty(),
            }
        })
        .collect()
}
