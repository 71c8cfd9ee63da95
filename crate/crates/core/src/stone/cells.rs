//! Cells of a space term: lazily refinable clopen pieces with their type,
//! discrete point counts and escape set.
//!
//! Cantor factors use binary words; the fibre point `x0` of an attachment is
//! the all-zeros branch and the point deleted from `D0` is the all-ones branch.
//! The escape set of a cell `A` is `{q | A ∩ closure(X_q) is not compact}`,
//! so a cell is compact iff its escape set is empty.

use std::collections::BTreeMap;

use crate::classification::Card;
use crate::subset::Subset;

use super::term::{AttachCase, SpaceTerm};

/// A finite binary word, bit `i` of `bits` being letter `i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word {
    pub len: u8,
    pub bits: u64,
}

impl Word {
    pub fn push(self, b: bool) -> Word {
        assert!(self.len < 64, "word too long");
        Word { len: self.len + 1, bits: self.bits | (b as u64) << self.len }
    }

    pub fn all_zeros(self) -> bool {
        self.bits == 0
    }

    pub fn all_ones(self) -> bool {
        self.bits.count_ones() == self.len as u32
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Key {
    Cyl(Word),
    FinAll,
    FinPt(u32),
    Tail(u32),
    Pt(u32),
    SumRoot,
    Left(Box<Key>),
    Right(Box<Key>),
    /// `X ∩ (U × v)` for a crowded attachment.
    Prod(Box<Key>, Word),
    /// Whole space of a 2B attachment.
    Root2,
    /// `X ∩ (U × ({0} ∪ {1/m | m >= n}))`; `anchor` names the base point placed in this cell.
    Base2 {
        u: Box<Key>,
        n: u32,
        anchor: Box<Key>,
    },
    /// The point `(x_anchor, 1/n)`.
    Pt2 {
        anchor: Box<Key>,
        n: u32,
    },
    VTail(u32),
    VPt(u32),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Info {
    pub ty: Subset,
    pub marks: BTreeMap<usize, Card>,
    pub escape: Subset,
}

impl Info {
    fn single(a: usize, mark: Option<Card>, escape: bool) -> Info {
        Info {
            ty: Subset::singleton(a),
            marks: mark.map(|c| (a, c)).into_iter().collect(),
            escape: if escape { Subset::singleton(a) } else { Subset::EMPTY },
        }
    }

    pub fn compact(&self) -> bool {
        self.escape.is_empty()
    }
}

/// The compiled form of a [`SpaceTerm`].
#[derive(Clone, Debug)]
pub enum Node {
    D1(usize),
    D0(usize),
    Fin(usize, u32),
    Omega(usize),
    Sum(Box<Node>, Box<Node>),
    Attach { case: AttachCase, base: Box<Node>, c: Subset, p: usize },
}

impl Node {
    pub fn compile(t: &SpaceTerm) -> Node {
        match t {
            SpaceTerm::CantorD1(a) => Node::D1(*a),
            SpaceTerm::CantorD0(a) => Node::D0(*a),
            SpaceTerm::FinDisc(a, m) => Node::Fin(*a, *m),
            SpaceTerm::OmegaDisc(a) => Node::Omega(*a),
            SpaceTerm::Sum(x, y) => Node::Sum(Box::new(Node::compile(x)), Box::new(Node::compile(y))),
            SpaceTerm::Attach { case, base, closed_sel, new_label } => {
                Node::Attach { case: *case, base: Box::new(Node::compile(base)), c: *closed_sel, p: *new_label }
            }
        }
    }

    pub fn root(&self) -> Key {
        match self {
            Node::D1(_) | Node::D0(_) => Key::Cyl(Word::default()),
            Node::Fin(..) => Key::FinAll,
            Node::Omega(_) => Key::Tail(0),
            Node::Sum(..) => Key::SumRoot,
            Node::Attach { case, base, .. } => match case {
                AttachCase::A1 | AttachCase::B1 => Key::Prod(Box::new(base.root()), Word::default()),
                AttachCase::A2 => Key::Base2 { u: Box::new(base.root()), n: 1, anchor: Box::new(base.root()) },
                AttachCase::B2 => Key::Root2,
            },
        }
    }

    pub fn info(&self, key: &Key) -> Info {
        match (self, key) {
            (Node::D1(a), Key::Cyl(_)) => Info::single(*a, None, false),
            (Node::D0(a), Key::Cyl(w)) => Info::single(*a, None, w.all_ones()),
            (Node::Fin(a, m), Key::FinAll) => Info::single(*a, Some(Card::Finite(*m as u64)), false),
            (Node::Fin(a, _), Key::FinPt(_)) => Info::single(*a, Some(Card::Finite(1)), false),
            (Node::Omega(a), Key::Tail(_)) => Info::single(*a, Some(Card::Infinite), true),
            (Node::Omega(a), Key::Pt(_)) => Info::single(*a, Some(Card::Finite(1)), false),
            (Node::Sum(x, y), Key::SumRoot) => {
                let (ix, iy) = (x.info(&x.root()), y.info(&y.root()));
                let mut marks = ix.marks;
                for (k, v) in iy.marks {
                    let e = marks.entry(k).or_insert(Card::Finite(0));
                    *e = *e + v;
                }
                Info { ty: ix.ty | iy.ty, marks, escape: ix.escape | iy.escape }
            }
            (Node::Sum(x, _), Key::Left(k)) => x.info(k),
            (Node::Sum(_, y), Key::Right(k)) => y.info(k),
            (Node::Attach { case, base, c, p }, key) => attach_info(*case, base, *c, *p, key),
            _ => panic!("cell key {key:?} does not belong to this node"),
        }
    }

    pub fn children(&self, key: &Key) -> Vec<Key> {
        match (self, key) {
            (Node::D1(_) | Node::D0(_), Key::Cyl(w)) => vec![Key::Cyl(w.push(false)), Key::Cyl(w.push(true))],
            (Node::Fin(_, m), Key::FinAll) if *m >= 2 => (0..*m).map(Key::FinPt).collect(),
            (Node::Omega(_), Key::Tail(j)) => vec![Key::Pt(*j), Key::Tail(j + 1)],
            (Node::Sum(x, y), Key::SumRoot) => {
                // Nested sums are flattened so every summand sits one level down.
                let side = |n: &Node| match n {
                    Node::Sum(..) => n.children(&Key::SumRoot),
                    _ => vec![n.root()],
                };
                let mut out: Vec<Key> = side(x).into_iter().map(|k| Key::Left(Box::new(k))).collect();
                out.extend(side(y).into_iter().map(|k| Key::Right(Box::new(k))));
                out
            }
            (Node::Sum(x, _), Key::Left(k)) => x.children(k).into_iter().map(|c| Key::Left(Box::new(c))).collect(),
            (Node::Sum(_, y), Key::Right(k)) => y.children(k).into_iter().map(|c| Key::Right(Box::new(c))).collect(),
            (Node::Attach { base, c, .. }, key) => attach_children(base, *c, key),
            _ => Vec::new(),
        }
    }
}

fn meets(base: &Node, u: &Key, c: Subset) -> bool {
    base.info(u).ty.meets(c)
}

/// Base children of `u`, or `u` itself when it is a leaf.
fn base_children(base: &Node, u: &Key) -> Vec<Key> {
    let ch = base.children(u);
    if ch.is_empty() {
        vec![u.clone()]
    } else {
        ch
    }
}

/// The child whose anchor is inherited: the first compact child meeting `C`,
/// else the first child meeting `C`.
fn canonical_child(base: &Node, c: Subset, children: &[Key]) -> Option<usize> {
    let meeting: Vec<usize> = (0..children.len()).filter(|&i| meets(base, &children[i], c)).collect();
    meeting.iter().copied().find(|&i| base.info(&children[i]).compact()).or_else(|| meeting.first().copied())
}

fn attach_info(case: AttachCase, base: &Node, c: Subset, p: usize, key: &Key) -> Info {
    match key {
        Key::Prod(u, v) => {
            let iu = base.info(u);
            let meet = iu.ty.meets(c);
            let in0 = v.all_zeros();
            let fibre_open = case == AttachCase::B1 && v.all_ones();
            let mut ty = Subset::EMPTY;
            let mut escape = Subset::EMPTY;
            let mut marks = BTreeMap::new();
            if in0 {
                ty = iu.ty;
                escape = iu.escape;
                marks = iu.marks;
            }
            if meet {
                ty = ty.with(p);
                if iu.escape.meets(c) || fibre_open {
                    escape = escape.with(p);
                }
            }
            Info { ty, marks, escape }
        }
        Key::Base2 { u, .. } => {
            let mut i = base.info(u);
            if i.ty.meets(c) {
                i.ty = i.ty.with(p);
                i.marks.insert(p, Card::Infinite);
                if i.escape.meets(c) {
                    i.escape = i.escape.with(p);
                }
            }
            i
        }
        Key::Root2 => {
            let mut i = base.info(&base.root());
            i.ty = i.ty.with(p);
            i.marks.insert(p, Card::Infinite);
            i.escape = i.escape.with(p);
            i
        }
        Key::Pt2 { .. } | Key::VPt(_) => Info::single(p, Some(Card::Finite(1)), false),
        Key::VTail(_) => Info::single(p, Some(Card::Infinite), true),
        _ => panic!("cell key {key:?} does not belong to an attachment"),
    }
}

fn attach_children(base: &Node, c: Subset, key: &Key) -> Vec<Key> {
    match key {
        Key::Prod(u, v) => {
            let meet = meets(base, u, c);
            let leaf = base.children(u).is_empty();
            if leaf && !meet {
                return Vec::new();
            }
            let mut out = Vec::new();
            for u2 in base_children(base, u) {
                let m2 = meets(base, &u2, c);
                for b in [false, true] {
                    let v2 = v.push(b);
                    if v2.all_zeros() || m2 {
                        out.push(Key::Prod(Box::new(u2.clone()), v2));
                    }
                }
            }
            out
        }
        Key::Base2 { u, n, anchor } => {
            let meet = meets(base, u, c);
            let ch = base.children(u);
            if ch.is_empty() && !meet {
                return Vec::new();
            }
            let mut out = Vec::new();
            if meet {
                out.push(Key::Pt2 { anchor: anchor.clone(), n: *n });
            }
            if ch.is_empty() {
                out.push(Key::Base2 { u: u.clone(), n: n + 1, anchor: anchor.clone() });
                return out;
            }
            let canon = canonical_child(base, c, &ch);
            for (i, u2) in ch.into_iter().enumerate() {
                let a2 = if Some(i) == canon { anchor.clone() } else { Box::new(u2.clone()) };
                out.push(Key::Base2 { u: Box::new(u2), n: n + 1, anchor: a2 });
            }
            out
        }
        Key::Root2 => {
            let r = base.root();
            let inner = Key::Base2 { u: Box::new(r.clone()), n: 1, anchor: Box::new(r) };
            let mut out = attach_children(base, c, &inner);
            out.push(Key::VTail(2));
            out
        }
        Key::VTail(j) => vec![Key::VPt(*j), Key::VTail(j + 1)],
        _ => Vec::new(),
    }
}
