use stonekit::classification::{enumerate_ca_systems, enumerate_systems, signature_of};
use stonekit::dsl::{parse, parse_measure, print, print_block, Block, Item};
use stonekit::measures::all_measures;

fn round_trip(name: &str, item: Item) {
    let text = print_block(name, &item);
    let blocks = parse(&text).unwrap_or_else(|e| panic!("{e}\n{text}"));
    assert_eq!(blocks.len(), 1);
    assert_eq!(blocks[0].item, item, "{text}");
    assert_eq!(print(&blocks), text);
}

#[test]
fn enumerated_tba_systems_round_trip() {
    for n in 1..=2 {
        for (i, t) in enumerate_systems(4, n, 3).unwrap().systems.into_iter().enumerate() {
            let s = signature_of(&t).unwrap();
            round_trip(&format!("T{i}"), Item::Tba(t));
            round_trip(&format!("S{i}"), Item::Signature(s));
        }
    }
}

#[test]
fn enumerated_ca_systems_round_trip() {
    for c in enumerate_ca_systems(3, 2, 2).unwrap() {
        round_trip("C", Item::Ca(c));
    }
}

#[test]
fn several_blocks_and_comments() {
    let text = "# two systems\n\nposystem A # trailing comment\n  elements: p, q\n  order: p<q\nend\n\nposystem B\n  elements: x\n  L: x\n  f: x=4\nend\n";
    let blocks = parse(text).unwrap();
    assert_eq!(blocks.iter().map(|b| (b.name.as_str(), b.line)).collect::<Vec<_>>(), [("A", 3), ("B", 8)]);
    assert!(matches!(blocks[0].item, Item::Po(_)));
    assert!(matches!(blocks[1].item, Item::Extended(_)));
    let printed = print(&blocks);
    assert_eq!(print(&parse(&printed).unwrap()), printed);
}

#[test]
fn order_accepts_chains_and_reports_cycles() {
    let b = parse("posystem C\n  elements: a b c\n  order: a<b<c\nend\n").unwrap();
    assert_eq!(print_block("C", &b[0].item), "posystem C\n  elements: a b c\n  order: a<b b<c\nend\n");
    let e = parse("posystem C\n  elements: a b\n  order: a<b b<a\nend\n").unwrap_err();
    assert_eq!(e.line, 3);
    assert!(e.message.contains("antisymmetry"), "{e}");
}

#[test]
fn positioned_errors() {
    let cases: &[(&str, usize, usize, &str)] = &[
        ("posystem X\n  elements: a\n  colour: a\nend\n", 3, 3, "unknown key"),
        ("posystem X\n  elements: a\n  L a\nend\n", 3, 5, "missing `:`"),
        ("posystem X\n  elements: a a\nend\n", 2, 15, "duplicate element"),
        ("posystem X\n  elements: a\n  L: a\n  L: a\nend\n", 4, 3, "duplicate key"),
        ("posystem X\n  elements: a\n  L: a\n  f: a=x\nend\n", 4, 8, "not a count"),
        ("posystem X\n  elements: a\n  L: a\n  f: a\nend\n", 4, 7, "expected `=`"),
        ("posystem X\n  elements: a\n  Q2: a\nend\n", 3, 1, "without Q1"),
        ("posystem X\n  elements: a\n  L: a\n  M: a\nend\n", 4, 1, "mixed"),
        ("posystem X\n  elements: a ; b\nend\n", 2, 15, "unexpected character"),
        ("elements: a\n", 1, 1, "expected a block"),
        ("posystem\n", 1, 9, "block name"),
        ("posystem X\n  elements: a\n  L: a\n  f: a=1\n  Q1: a\n  k: a=1\nend\n", 6, 1, "mixed"),
        ("posystem X\n  elements: a\n  Q1: a\n  k: a=3\nend\n", 4, 8, "k is 0"),
        ("posystem X\n  elements: a b\n  Q1: a b\n  k: a=1\nend\n", 4, 1, "no k value for `b`"),
        ("posystem X\n  elements: a\n  order: a<\nend\n", 3, 12, "chain ends"),
    ];
    for &(text, line, column, msg) in cases {
        let e = parse(text).unwrap_err();
        assert_eq!((e.line, e.column), (line, column), "{text:?}: {e}");
        assert!(e.message.contains(msg), "{text:?}: {e}");
    }
}

#[test]
fn missing_count_is_positioned() {
    let e = parse("posystem X\n  elements: a\n  L: a\n  Q1: a\nend\n").unwrap_err();
    assert_eq!(e.line, 3);
    assert!(e.message.contains("missing count for discrete minimal element `a`"), "{e}");
}

#[test]
fn measures_round_trip() {
    let blocks: Vec<Block> =
        parse("posystem M\n  elements: a b c\n  reflexive: c\n  order: a<c b<c\n  L: a b c\n  f: a=3 b=2\nend\n")
            .unwrap();
    let Item::Extended(e) = &blocks[0].item else { panic!() };
    for m in all_measures(e, 3) {
        let text = m.format(&e.p);
        assert_eq!(parse_measure(&text, &e.p).unwrap(), m, "{text}");
    }
    assert!(parse_measure("1*a +", &e.p).is_err());
    assert!(parse_measure("0*a", &e.p).is_err());
    assert!(parse_measure("a + a", &e.p).is_err());
}
