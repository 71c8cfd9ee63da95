//! Canonical labelling of PO systems decorated with marked subsets and
//! integer weights.
//!
//! Colour refinement on (reflexivity, marks, weight, colours above, colours
//! below) followed by individualisation of the first non-singleton cell. Each
//! leaf of the search orders the elements; the lexicographically least leaf
//! encoding is the canonical string.

use crate::posystem::POSystem;
use crate::subset::Subset;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Canonical {
    pub bytes: Vec<u8>,
    /// `order[i]` is the original element placed at canonical position `i`.
    pub order: Vec<usize>,
}

struct Input<'a> {
    p: &'a POSystem,
    marks: &'a [Subset],
    weights: &'a [u64],
}

impl Input<'_> {
    fn weight(&self, v: usize) -> u64 {
        self.weights.get(v).copied().unwrap_or(0)
    }

    fn encode(&self, order: &[usize]) -> Vec<u8> {
        let n = order.len();
        let mut out = Vec::with_capacity(4 + n * (10 + self.marks.len()) + n * n / 8 + 1);
        out.push(n as u8);
        out.push(self.marks.len() as u8);
        for &v in order {
            out.push(self.p.is_reflexive(v) as u8);
            for m in self.marks {
                out.push(m.contains(v) as u8);
            }
            out.extend_from_slice(&self.weight(v).to_be_bytes());
        }
        let mut byte = 0u8;
        let mut bit = 0;
        for &u in order {
            for &v in order {
                if u != v && self.p.lt(u, v) {
                    byte |= 1 << bit;
                }
                bit += 1;
                if bit == 8 {
                    out.push(byte);
                    byte = 0;
                    bit = 0;
                }
            }
        }
        if bit > 0 {
            out.push(byte);
        }
        out
    }

    fn initial_colours(&self) -> Vec<u32> {
        let keys: Vec<(bool, Vec<bool>, u64)> = (0..self.p.len())
            .map(|v| (self.p.is_reflexive(v), self.marks.iter().map(|m| m.contains(v)).collect(), self.weight(v)))
            .collect();
        rank(&keys)
    }

    fn refine(&self, colours: &mut Vec<u32>) {
        let n = colours.len();
        let mut count = distinct(colours);
        loop {
            let keys: Vec<(u32, Vec<u32>, Vec<u32>)> = (0..n)
                .map(|v| {
                    let mut up: Vec<u32> = self.p.strictly_above(v).without(v).iter().map(|u| colours[u]).collect();
                    let mut down: Vec<u32> = self.p.strictly_below(v).without(v).iter().map(|u| colours[u]).collect();
                    up.sort_unstable();
                    down.sort_unstable();
                    (colours[v], up, down)
                })
                .collect();
            *colours = rank(&keys);
            let c = distinct(colours);
            if c == count {
                return;
            }
            count = c;
        }
    }

    fn search(&self, mut colours: Vec<u32>, best: &mut Option<(Vec<u8>, Vec<usize>)>) {
        self.refine(&mut colours);
        let n = colours.len();
        let mut sizes = vec![0usize; n];
        for &c in &colours {
            sizes[c as usize] += 1;
        }
        match (0..n).find(|&c| sizes[c] > 1) {
            None => {
                let mut order = vec![0; n];
                for (v, &c) in colours.iter().enumerate() {
                    order[c as usize] = v;
                }
                let enc = self.encode(&order);
                if best.as_ref().is_none_or(|(b, _)| enc < *b) {
                    *best = Some((enc, order));
                }
            }
            Some(cell) => {
                let cell = cell as u32;
                for v in (0..n).filter(|&v| colours[v] == cell) {
                    let next: Vec<u32> =
                        colours.iter().enumerate().map(|(u, &c)| 2 * c + (c == cell && u != v) as u32).collect();
                    self.search(next, best);
                }
            }
        }
    }
}

fn rank<K: Ord + Clone>(keys: &[K]) -> Vec<u32> {
    let mut sorted: Vec<K> = keys.to_vec();
    sorted.sort();
    sorted.dedup();
    keys.iter().map(|k| sorted.binary_search(k).expect("key present") as u32).collect()
}

fn distinct(colours: &[u32]) -> usize {
    let mut c = colours.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

/// Canonical string and labelling. Two inputs get equal bytes iff some
/// order-isomorphism matches reflexivity, every mark (in order) and every weight.
pub fn canonical_form(p: &POSystem, marks: &[Subset], weights: &[u64]) -> Canonical {
    let input = Input { p, marks, weights };
    if p.is_empty() {
        return Canonical { bytes: input.encode(&[]), order: Vec::new() };
    }
    let mut best = None;
    input.search(input.initial_colours(), &mut best);
    let (bytes, order) = best.expect("search reaches a leaf");
    Canonical { bytes, order }
}

/// An isomorphism `theta` with `theta[x]` the image in `b` of element `x` of `a`.
pub fn isomorphism(a: (&POSystem, &[Subset], &[u64]), b: (&POSystem, &[Subset], &[u64])) -> Option<Vec<usize>> {
    if a.0.len() != b.0.len() || a.1.len() != b.1.len() {
        return None;
    }
    let ca = canonical_form(a.0, a.1, a.2);
    let cb = canonical_form(b.0, b.1, b.2);
    if ca.bytes != cb.bytes {
        return None;
    }
    let mut theta = vec![0; ca.order.len()];
    for (i, &x) in ca.order.iter().enumerate() {
        theta[x] = cb.order[i];
    }
    Some(theta)
}
