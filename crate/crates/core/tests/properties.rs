use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use stonekit::classification::{enumerate_posystems, random_tba_system, ExtendedPOSystem, TBASystem};
use stonekit::dsl::{parse, print_block, Item};
use stonekit::measures::{all_measures, mu_add, mu_sum, Measure};
use stonekit::stone::{approximate, build_space, check_partition_invariants, mu_of_cell, BuildStrategy};
use stonekit::{POSystem, Subset};

fn arb_posystem(max_n: usize) -> impl Strategy<Value = POSystem> {
    (1..=max_n).prop_flat_map(|n| {
        (
            proptest::collection::vec(any::<bool>(), n * (n - 1) / 2),
            proptest::collection::vec(any::<bool>(), n),
            Just((0..n).collect::<Vec<usize>>()).prop_shuffle(),
        )
            .prop_map(move |(up, refl, perm)| {
                let mut pairs = Vec::new();
                let mut k = 0;
                for i in 0..n {
                    for j in i + 1..n {
                        if up[k] {
                            pairs.push((perm[i], perm[j]));
                        }
                        k += 1;
                    }
                    if refl[i] {
                        pairs.push((i, i));
                    }
                }
                let names = (0..n).map(|i| format!("p{i}")).collect();
                POSystem::from_generating_pairs(names, &pairs).unwrap()
            })
    })
}

fn small_systems() -> Vec<ExtendedPOSystem> {
    let mut out = Vec::new();
    for n in 1..=3 {
        for p in enumerate_posystems(n, false) {
            for l in p.lower_sets() {
                let mut f = vec![0; n];
                for x in p.min_of(l) & p.discrete() {
                    f[x] = 1 + (x as u32 % 3);
                }
                out.push(ExtendedPOSystem::new(p.clone(), l, f).unwrap());
            }
        }
    }
    out
}

fn finite_crowded() -> Vec<ExtendedPOSystem> {
    small_systems().into_iter().filter(|e| e.finite_crowded()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn derived_set_laws(p in arb_posystem(10), a in any::<u32>(), b in any::<u32>()) {
        let full = p.carrier();
        let (a, b) = (Subset(a) & full, Subset(b) & full);
        let d = |s| p.derived_set(s);
        prop_assert!(d(Subset::EMPTY).is_empty());
        prop_assert_eq!(d(a | b), d(a) | d(b));
        prop_assert!(d(d(a)).is_subset(d(a)));
        prop_assert_eq!(p.closure(p.closure(a)), p.closure(a));
        prop_assert!(p.is_lower(d(a)));
    }

    #[test]
    fn canonical_form_ignores_labels(seed in any::<u64>(), shift in 0usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = random_tba_system(&mut rng, 5, 2, 3, 10_000).unwrap();
        let n = t.p().len();
        let perm: Vec<usize> = (0..n).map(|i| (i + shift) % n).collect();
        let map = |s: Subset| -> Subset { s.iter().map(|x| perm[x]).collect() };
        let pairs: Vec<(usize, usize)> = t.p().pairs().into_iter().map(|(a, b)| (perm[a], perm[b])).collect();
        let names = (0..n).map(|i| format!("r{i}")).collect();
        let mut f = vec![0; n];
        for i in 0..n {
            f[perm[i]] = t.base.f[i];
        }
        let base = ExtendedPOSystem::new(POSystem::new(names, &pairs).unwrap(), map(t.base.l), f).unwrap();
        let u = TBASystem { base, q: t.q.iter().map(|&s| map(s)).collect() };
        prop_assert_eq!(t.canonical(), u.canonical());
    }

    #[test]
    fn printer_round_trips_random_names(
        seed in any::<u64>(),
        names in proptest::collection::hash_set("[a-z][a-z0-9_.'+-]{0,5}", 5),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = random_tba_system(&mut rng, 5, 2, 3, 10_000).unwrap();
        let names: Vec<String> = names.into_iter().take(t.p().len()).collect();
        let p = t.p().with_names(names).unwrap();
        let base = ExtendedPOSystem::new(p, t.base.l, t.base.f.clone()).unwrap();
        let item = Item::Tba(TBASystem { base, q: t.q.clone() });
        let text = print_block("R", &item);
        let back = parse(&text).unwrap();
        prop_assert_eq!(&back[0].item, &item);
    }

    #[test]
    fn parser_never_panics(text in "\\PC{0,80}") {
        let _ = parse(&text);
    }

    #[test]
    fn measure_addition_is_commutative_and_associative(i in any::<prop::sample::Index>(), a in any::<prop::sample::Index>(), b in any::<prop::sample::Index>(), c in any::<prop::sample::Index>()) {
        let systems = small_systems();
        let e = i.get(&systems);
        let ms = all_measures(e, 3);
        let (x, y, z) = (a.get(&ms), b.get(&ms), c.get(&ms));
        let xy = mu_add(e, x, y);
        prop_assert_eq!(&xy, &mu_add(e, y, x));
        if let (Ok(xy), Ok(yz)) = (xy, mu_add(e, y, z)) {
            prop_assert_eq!(mu_add(e, &xy, z).ok(), mu_add(e, x, &yz).ok());
        }
        let plus_zero = mu_add(e, x, &Measure::zero()).ok();
        prop_assert_eq!(plus_zero.as_ref(), Some(x));
    }

    #[test]
    fn cell_measures_add_over_children(i in any::<prop::sample::Index>(), k in 1usize..=4, first in any::<bool>()) {
        let systems = finite_crowded();
        let e = i.get(&systems);
        let strategy = if first { BuildStrategy::FirstMaximal } else { BuildStrategy::LastTopological };
        let m = approximate(&build_space(e, strategy, false).unwrap(), k);
        for c in &m.cells {
            if !c.compact || c.is_leaf() {
                continue;
            }
            let parts: Vec<Measure> = c.children.iter().map(|&x| mu_of_cell(&m, x).unwrap()).collect();
            prop_assert_eq!(mu_sum(e, &parts).unwrap(), mu_of_cell(&m, c.id).unwrap());
        }
    }

    #[test]
    fn deeper_models_extend_shallower_ones(i in any::<prop::sample::Index>(), k in 0usize..=4) {
        let systems = finite_crowded();
        let e = i.get(&systems);
        let s = build_space(e, BuildStrategy::default(), false).unwrap();
        let (a, b) = (approximate(&s, k), approximate(&s, k + 1));
        prop_assert!(check_partition_invariants(&b).ok());
        for c in &a.cells {
            let d = &b.cells[c.id];
            prop_assert_eq!((c.parent, c.depth, c.ty, &c.marks, c.compact, c.escape), (d.parent, d.depth, d.ty, &d.marks, d.compact, d.escape));
            if c.depth < k {
                prop_assert_eq!(&c.children, &d.children);
            }
        }
        prop_assert!(b.cells.len() >= a.cells.len());
    }
}
