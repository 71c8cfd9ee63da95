//! Finite-depth cell trees of a space term.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use crate::classification::{Card, ExtendedPOSystem};
use crate::error::{Error, Result};
use crate::measures::Measure;
use crate::subset::Subset;

use super::cells::{Key, Node};
use super::term::Space;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub id: usize,
    pub parent: Option<usize>,
    pub depth: usize,
    /// Labels present in the cell.
    pub ty: Subset,
    /// Discrete point counts per discrete label.
    pub marks: BTreeMap<usize, Card>,
    pub compact: bool,
    /// Labels whose closure meets the cell in a non-compact set.
    pub escape: Subset,
    pub children: Vec<usize>,
}

impl Cell {
    pub fn mark(&self, p: usize) -> Card {
        self.marks.get(&p).copied().unwrap_or(Card::Finite(0))
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }
}

#[derive(Clone, Debug)]
pub struct Model {
    pub system: ExtendedPOSystem,
    pub depth: usize,
    /// Ids are indices; cells of depth `d` come before cells of depth `d + 1`.
    pub cells: Vec<Cell>,
    node: Node,
    keys: Vec<Key>,
}

/// Builds the cell tree of `space` down to depth `k`.
pub fn approximate(space: &Space, k: usize) -> Model {
    let node = Node::compile(&space.term);
    let root = node.root();
    let mut m = Model { system: space.system.clone(), depth: 0, cells: Vec::new(), node, keys: Vec::new() };
    m.push(None, 0, root);
    for _ in 0..k {
        m.deepen();
    }
    m
}

impl Model {
    fn push(&mut self, parent: Option<usize>, depth: usize, key: Key) -> usize {
        let info = self.node.info(&key);
        let id = self.cells.len();
        self.cells.push(Cell {
            id,
            parent,
            depth,
            ty: info.ty,
            compact: info.compact(),
            marks: info.marks,
            escape: info.escape,
            children: Vec::new(),
        });
        self.keys.push(key);
        if let Some(p) = parent {
            self.cells[p].children.push(id);
        }
        id
    }

    pub fn root(&self) -> &Cell {
        &self.cells[0]
    }

    /// Whether `refine` would add children to the cell.
    pub fn is_refinable(&self, id: usize) -> bool {
        self.cells[id].children.is_empty() && !self.node.children(&self.keys[id]).is_empty()
    }

    /// Splits a leaf into its children and returns their ids. Cells that
    /// are points stay leaves.
    pub fn refine(&mut self, id: usize) -> Vec<usize> {
        if !self.cells[id].children.is_empty() {
            return self.cells[id].children.clone();
        }
        let depth = self.cells[id].depth + 1;
        let keys = self.node.children(&self.keys[id]);
        let ids: Vec<usize> = keys.into_iter().map(|k| self.push(Some(id), depth, k)).collect();
        self.depth = self.depth.max(depth);
        ids
    }

    /// Refines every leaf at the current maximal depth.
    pub fn deepen(&mut self) {
        let d = self.depth;
        let leaves: Vec<usize> = self.cells.iter().filter(|c| c.depth == d && c.is_leaf()).map(|c| c.id).collect();
        for id in leaves {
            self.refine(id);
        }
        self.depth = d + 1;
    }

    /// Leaves of the tree in depth-first order.
    pub fn leaves(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![0];
        while let Some(id) = stack.pop() {
            let c = &self.cells[id];
            if c.is_leaf() {
                out.push(id);
            }
            stack.extend(c.children.iter().rev());
        }
        out
    }

    pub fn descendants(&self, id: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![id];
        while let Some(x) = stack.pop() {
            out.push(x);
            stack.extend(self.cells[x].children.iter().rev());
        }
        out
    }

    pub fn ancestor_at(&self, mut id: usize, depth: usize) -> usize {
        while self.cells[id].depth > depth {
            id = self.cells[id].parent.expect("depth > 0 has a parent");
        }
        id
    }

    /// Compact cells whose parent is not compact, or the root when it is compact.
    pub fn hull(&self) -> Vec<usize> {
        if self.cells[0].compact {
            return vec![0];
        }
        self.cells
            .iter()
            .filter(|c| c.compact && c.parent.is_some_and(|p| !self.cells[p].compact))
            .map(|c| c.id)
            .collect()
    }

    /// Union of the types of the non-compact leaves.
    pub fn remainder_type(&self) -> Subset {
        self.leaves()
            .into_iter()
            .filter(|&id| !self.cells[id].compact)
            .fold(Subset::EMPTY, |acc, id| acc | self.cells[id].ty)
    }

    pub fn to_json(&self) -> Value {
        let p = &self.system.p;
        let cells: Vec<Value> = self
            .cells
            .iter()
            .map(|c| {
                let mut o = Map::new();
                o.insert("id".into(), json!(c.id));
                o.insert("parent".into(), json!(c.parent));
                o.insert("depth".into(), json!(c.depth));
                o.insert("type".into(), json!(c.ty.iter().map(|x| p.name(x)).collect::<Vec<_>>()));
                let marks: BTreeMap<&str, Value> = c
                    .marks
                    .iter()
                    .map(|(&x, &n)| {
                        let v = match n {
                            Card::Finite(k) => json!(k),
                            Card::Infinite => json!("inf"),
                        };
                        (p.name(x), v)
                    })
                    .collect();
                o.insert("marks".into(), json!(marks));
                o.insert("compact".into(), json!(c.compact));
                o.insert("escape".into(), json!(c.escape.iter().map(|x| p.name(x)).collect::<Vec<_>>()));
                Value::Object(o)
            })
            .collect();
        let mut cov = Map::new();
        cov.insert("hull".into(), json!(self.hull()));
        cov.insert("remainder_type".into(), json!(self.remainder_type().iter().map(|x| p.name(x)).collect::<Vec<_>>()));
        let mut o = Map::new();
        o.insert("depth".into(), json!(self.depth));
        o.insert("cells".into(), Value::Array(cells));
        o.insert("coverage".into(), Value::Object(cov));
        Value::Object(o)
    }
}

/// Measure of a compact cell: its minimal labels, weighted by point counts
/// for discrete labels.
pub fn mu_of_cell(m: &Model, id: usize) -> Result<Measure> {
    let c = m.cells.get(id).ok_or_else(|| Error::InvalidInput(format!("no cell {id}")))?;
    if !c.compact {
        return Err(Error::NonCompactCell(id));
    }
    let p = &m.system.p;
    let mut terms = Vec::new();
    for x in p.min_of(c.ty) {
        let n = if p.is_reflexive(x) {
            1
        } else {
            match c.mark(x) {
                Card::Finite(n) if n > 0 => n as u32,
                _ => return Err(Error::InvalidModel(format!("cell {id} has no finite count for {}", p.name(x)))),
            }
        };
        terms.push((x, n));
    }
    Ok(Measure::from_terms(terms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::posystem::POSystem;
    use crate::stone::{build_space, BuildStrategy};

    fn space(p: POSystem, l: Subset, f: Vec<u32>) -> Space {
        let e = ExtendedPOSystem::new(p, l, f).unwrap();
        build_space(&e, BuildStrategy::default(), true).unwrap()
    }

    fn leaves_at(m: &Model, d: usize) -> usize {
        m.cells.iter().filter(|c| c.depth == d).count()
    }

    #[test]
    fn cantor_counts() {
        let p = POSystem::from_named(&["p"], &[("p", "p")]).unwrap();
        let d1 = approximate(&space(p.clone(), Subset::singleton(0), vec![0]), 3);
        assert_eq!(leaves_at(&d1, 3), 8);
        assert!(d1.cells.iter().all(|c| c.compact));
        let d0 = approximate(&space(p, Subset::EMPTY, vec![0]), 3);
        let last: Vec<&Cell> = d0.cells.iter().filter(|c| c.depth == 3).collect();
        assert_eq!(last.iter().filter(|c| c.compact).count(), 7);
        assert_eq!(d0.remainder_type(), Subset::singleton(0));
    }

    #[test]
    fn discrete_counts() {
        let p = POSystem::antichain(1);
        let fin = approximate(&space(p.clone(), Subset::singleton(0), vec![3]), 4);
        assert_eq!(fin.leaves().len(), 3);
        assert_eq!(mu_of_cell(&fin, 0).unwrap(), Measure::from_terms(vec![(0, 3)]));
        let om = approximate(&space(p, Subset::EMPTY, vec![0]), 4);
        let pts = om.leaves().into_iter().filter(|&i| om.cells[i].compact).count();
        assert_eq!(pts, 4);
    }

    #[test]
    fn chain_root_of_compact_part() {
        let p = POSystem::from_named(&["a", "b"], &[("a", "a"), ("a", "b"), ("b", "b")]).unwrap();
        let m = approximate(&space(p, Subset::singleton(0), vec![0, 0]), 3);
        assert!(!m.root().compact);
        let h = m.hull();
        assert_eq!(mu_of_cell(&m, h[0]).unwrap(), Measure::trim(0));
        assert!(matches!(mu_of_cell(&m, 0), Err(Error::NonCompactCell(0))));
    }

    #[test]
    fn json_is_deterministic() {
        let p = POSystem::from_named(&["a", "b"], &[("a", "a"), ("a", "b"), ("b", "b")]).unwrap();
        let s = space(p, Subset::singleton(0), vec![0, 0]);
        let a = serde_json::to_string(&approximate(&s, 3).to_json()).unwrap();
        let b = serde_json::to_string(&approximate(&s, 3).to_json()).unwrap();
        assert_eq!(a, b);
        assert!(a.starts_with("{\"depth\":3,\"cells\":[{\"id\":0,\"parent\":null"));
    }
}
