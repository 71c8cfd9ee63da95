//! Cell-level verification of the complete-partition laws.

use crate::classification::Card;
use crate::report::Report;
use crate::subset::Subset;

use super::model::Model;

/// Levels a cell may be refined before a limit or trim witness must appear.
pub const WITNESS_WINDOW: usize = 2;

fn sum_marks(m: &Model, ids: &[usize], p: usize) -> Card {
    ids.iter().fold(Card::Finite(0), |acc, &c| acc + m.cells[c].mark(p))
}

/// Checks every cell reachable from the root against the partition laws and
/// names each violated law with a witness cell.
pub fn check_partition_invariants(m: &Model) -> Report {
    let mut r = Report::new();
    let e = &m.system;
    let p = &e.p;
    let names = |s: Subset| p.format_subset(s);
    let reach = m.descendants(0);
    let depth = m.depth;

    for &id in &reach {
        let c = &m.cells[id];
        if !c.is_leaf() {
            let ty = c.children.iter().fold(Subset::EMPTY, |a, &x| a | m.cells[x].ty);
            let esc = c.children.iter().fold(Subset::EMPTY, |a, &x| a | m.cells[x].escape);
            let mut bad = Vec::new();
            if ty != c.ty {
                bad.push(format!("children types {} != {}", names(ty), names(c.ty)));
            }
            if esc != c.escape {
                bad.push(format!("children escape {} != {}", names(esc), names(c.escape)));
            }
            for x in p.discrete() {
                let s = sum_marks(m, &c.children, x);
                if s != c.mark(x) {
                    bad.push(format!("children hold {} points of {}, cell {}", s, p.name(x), c.mark(x)));
                }
            }
            if c.children.iter().any(|&x| m.cells[x].ty.is_empty()) {
                bad.push("empty child".into());
            }
            r.push("Partition", bad.is_empty(), format!("cell {id}: {}", bad.join("; ")));
        }
        r.push("UpperType", p.is_upper(c.ty), format!("cell {id}: type {} is not upper", names(c.ty)));
        let comp_ok = c.compact == c.escape.is_empty() && c.escape.is_subset(c.ty);
        r.push(
            "Compactness",
            comp_ok,
            format!("cell {id}: compact={} escape {} type {}", c.compact, names(c.escape), names(c.ty)),
        );
        let marked = c.marks.iter().filter(|(_, n)| **n != Card::Finite(0)).fold(Subset::EMPTY, |a, (&x, _)| a.with(x));
        let crowd_ok =
            marked == (c.ty & p.discrete()) && !(c.is_leaf() && c.depth < depth && !(c.ty & p.reflexive()).is_empty());
        r.push("Crowdedness", crowd_ok, format!("cell {id}: marks on {} with type {}", names(marked), names(c.ty)));
    }

    let root = m.root();
    r.push(
        "Compactness",
        root.escape == p.carrier() - e.l,
        format!("root escape {} but non-compact closures are {}", names(root.escape), names(p.carrier() - e.l)),
    );
    let mut budget = Vec::new();
    for x in root.ty & p.discrete() {
        let want = e.card(x);
        if root.mark(x) != want {
            budget.push(format!("{} has {} points, expected {}", p.name(x), root.mark(x), want));
        }
    }
    r.push("DiscreteBudget", budget.is_empty(), budget.join("; "));

    // trims[id][d]: minimal labels q with a q-trim cell at most d levels below id.
    let mut trims: Vec<Vec<Subset>> = vec![Vec::new(); m.cells.len()];
    for &id in reach.iter().rev() {
        let c = &m.cells[id];
        let mut own = Subset::EMPTY;
        if c.compact {
            for q in p.min_of(c.ty) {
                if c.ty == p.up(q) && (p.is_reflexive(q) || c.mark(q) == Card::Finite(1)) {
                    own = own.with(q);
                }
            }
        }
        let mut tr = vec![own];
        for level in 1..=WITNESS_WINDOW {
            let below = c.children.iter().fold(Subset::EMPTY, |a, &ch| a | trims[ch][level - 1]);
            tr.push(own | below);
        }
        trims[id] = tr;
    }

    for &id in &reach {
        let c = &m.cells[id];
        if c.depth + WITNESS_WINDOW > depth {
            continue;
        }
        let mut near = vec![id];
        let mut frontier = vec![id];
        for _ in 0..WITNESS_WINDOW {
            frontier = frontier.iter().flat_map(|&x| m.cells[x].children.iter().copied()).collect();
            near.extend(&frontier);
        }
        for q in c.ty {
            for hi in c.ty & p.strictly_above(q) {
                if hi == q {
                    continue;
                }
                let ok = near.iter().any(|&x| m.cells[x].ty.contains(hi) && !m.cells[x].ty.contains(q));
                r.push(
                    "LimitPoint",
                    ok,
                    format!(
                        "cell {id}: no {} region apart from {} within {WITNESS_WINDOW} levels",
                        p.name(hi),
                        p.name(q)
                    ),
                );
            }
        }
        let have = trims[id][WITNESS_WINDOW];
        for q in p.min_of(c.ty) {
            r.push(
                "TrimBasis",
                have.contains(q),
                format!("cell {id}: no {}-trim descendant within {WITNESS_WINDOW} levels", p.name(q)),
            );
        }
    }
    r
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::classification::{enumerate_posystems, ExtendedPOSystem};
    use crate::stone::{approximate, build_space, BuildStrategy};

    pub(crate) fn systems(max_p: usize, max_f: u32) -> Vec<ExtendedPOSystem> {
        let mut out = Vec::new();
        for n in 1..=max_p {
            for p in enumerate_posystems(n, false) {
                for l in p.lower_sets() {
                    let dom = p.min_of(l) & p.discrete();
                    let mut fs = vec![vec![0u32; n]];
                    for x in dom {
                        fs = fs
                            .into_iter()
                            .flat_map(|f| {
                                (1..=max_f).map(move |v| {
                                    let mut f = f.clone();
                                    f[x] = v;
                                    f
                                })
                            })
                            .collect();
                    }
                    for f in fs {
                        let e = ExtendedPOSystem::new(p.clone(), l, f).unwrap();
                        if e.finite_crowded() {
                            out.push(e);
                        }
                    }
                }
            }
        }
        out
    }

    #[test]
    fn built_models_pass_small() {
        for e in systems(3, 2) {
            let s = build_space(&e, BuildStrategy::default(), false).unwrap();
            for k in 0..=4 {
                let m = approximate(&s, k);
                let r = check_partition_invariants(&m);
                assert!(r.ok(), "{} at depth {k}:\n{}", s.term.format(&e), r);
            }
        }
    }

    #[test]
    fn sequence_attachments_pass() {
        let mut seen = 0;
        for n in 2..=3 {
            for p in enumerate_posystems(n, false) {
                for l in p.lower_sets() {
                    let f: Vec<u32> = (0..n).map(|x| u32::from((p.min_of(l) & p.discrete()).contains(x))).collect();
                    let e = ExtendedPOSystem::new(p.clone(), l, f).unwrap();
                    let s = build_space(&e, BuildStrategy::default(), true).unwrap();
                    if !format!("{:?}", s.term).contains("A2") && !format!("{:?}", s.term).contains("B2") {
                        continue;
                    }
                    seen += 1;
                    let m = approximate(&s, 4);
                    let r = check_partition_invariants(&m);
                    assert!(r.ok(), "{}:\n{}", s.term.format(&e), r);
                }
            }
        }
        assert!(seen > 0);
    }
}
