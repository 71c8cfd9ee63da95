//! Command-line front end.
//!
//! Exit codes: 0 for success and positive decisions, 2 for negative
//! decisions (invalid system, not categorical, not isomorphic, failed check),
//! 1 for input and usage errors.

use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use crate::algebra::{atom_name, atom_posystem, generate_algebra, AlgebraKind};
use crate::classification::{
    ca_to_tba, enumerate_systems, iso_ca, iso_tba, omega_cat_check, random_tba_system, signature_of,
    signature_realizable, tba_to_ca, validate_ca_system, validate_tba_system, CASystem, ExtendedPOSystem, Signature,
    TBASystem,
};
use crate::dsl::{self, Block, Item, GRAMMAR};
use crate::error::Error;
use crate::measures::{mu_add, orbit_invariants, validate_measure, vaught_split, Measure, SplitStep};
use crate::posystem::POSystem;
use crate::report::Report;
use crate::stone::{
    approximate, back_and_forth, build_space, check_partition_invariants, minimum_decomposition, BuildStrategy, Space,
};
use crate::subset::Subset;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_FALSE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "stonekit", version, about = "Classification tuples, measures and Stone space models")]
struct Cli {
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Strategy {
    Last,
    First,
}

impl From<Strategy> for BuildStrategy {
    fn from(s: Strategy) -> BuildStrategy {
        match s {
            Strategy::Last => BuildStrategy::LastTopological,
            Strategy::First => BuildStrategy::FirstMaximal,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Validate every block of a file
    Validate { file: PathBuf },
    /// Decide countable categoricity of [P,L,f] with the ideals Q1.. as generators
    OmegaCat { file: PathBuf },
    /// Atoms of the algebra generated by the ideals
    Atoms { file: PathBuf },
    /// Map a TBA system to its closure-algebra system
    ToCa { file: PathBuf },
    /// Map a closure-algebra system to its TBA system
    ToTba { file: PathBuf },
    /// Signature of a TBA system, or realizability of a signature block
    Signature { file: PathBuf },
    /// Isomorphism test of two blocks (two files or one file with two blocks)
    Iso {
        #[arg(num_args = 1..=2, required = true)]
        files: Vec<PathBuf>,
    },
    /// List TBA systems up to isomorphism
    Enumerate {
        #[arg(long = "max-p", default_value_t = 2)]
        max_p: usize,
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long = "max-f", default_value_t = 1)]
        max_f: u32,
        /// Random tuples to draw and look up in the list
        #[arg(long, default_value_t = 0)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Sum of two measures
    MuAdd { file: PathBuf, a: String, b: String },
    /// Split a measure into two summands along a minimum decomposition
    MuSplit { file: PathBuf, m: String, t1: String, t2: String },
    /// Space term realising [P,L,f]
    Build {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "last")]
        strategy: Strategy,
    },
    /// Cell model of the space to a given depth
    Approximate {
        file: PathBuf,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[arg(long, value_enum, default_value = "last")]
        strategy: Strategy,
    },
    /// Check the partition laws on a cell model
    Check {
        file: PathBuf,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[arg(long, value_enum, default_value = "last")]
        strategy: Strategy,
    },
    /// Back-and-forth matching of two models (two strategies for one block)
    Match {
        #[arg(num_args = 1..=2, required = true)]
        files: Vec<PathBuf>,
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
    /// Minimum decomposition of the covered part into trim pieces
    Decompose {
        file: PathBuf,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[arg(long, value_enum, default_value = "last")]
        strategy: Strategy,
    },
    /// Count invariants of r-tuples of ring elements
    Orbits {
        file: PathBuf,
        #[arg(long, default_value_t = 1)]
        r: usize,
    },
}

struct Out {
    code: i32,
    text: String,
    json: Value,
}

impl Out {
    fn new(code: i32, text: impl Into<String>, json: Value) -> Out {
        Out { code, text: text.into(), json }
    }
}

fn color_enabled() -> bool {
    std::env::var("STONEKIT_COLOR").is_ok_and(|v| v == "1")
}

fn paint(text: &str) -> String {
    if !color_enabled() {
        return text.to_string();
    }
    text.lines()
        .map(|l| {
            if let Some(rest) = l.strip_prefix("FAIL") {
                format!("\x1b[31mFAIL\x1b[0m{rest}")
            } else if let Some(rest) = l.strip_prefix("ok ") {
                format!("\x1b[32mok\x1b[0m {rest}")
            } else {
                l.to_string()
            }
        })
        .collect::<Vec<_>>()
        .join("\n")
        + if text.ends_with('\n') { "\n" } else { "" }
}

/// Runs the command line `argv` (program name first) and returns the exit
/// code with everything that should be printed.
pub fn run<I, S>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => (EXIT_OK, e.to_string()),
                _ => (EXIT_INPUT, format!("{e}\nInput grammar:\n{GRAMMAR}")),
            };
        }
    };
    match dispatch(&cli.cmd) {
        Ok(out) => {
            let text = match cli.format {
                Format::Text => paint(&out.text),
                Format::Json => {
                    let mut o = Map::new();
                    o.insert("exit".into(), json!(out.code));
                    o.insert("result".into(), out.json);
                    serde_json::to_string_pretty(&Value::Object(o)).expect("json") + "\n"
                }
            };
            (out.code, text)
        }
        Err(msg) => match cli.format {
            Format::Text => (EXIT_INPUT, format!("error: {msg}\n")),
            Format::Json => {
                let v = json!({"exit": EXIT_INPUT, "error": msg});
                (EXIT_INPUT, serde_json::to_string_pretty(&v).expect("json") + "\n")
            }
        },
    }
}

type Res<T> = std::result::Result<T, String>;

fn read_blocks(path: &PathBuf) -> Res<Vec<Block>> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let blocks = dsl::parse(&text).map_err(|e| format!("{}:{e}", path.display()))?;
    if blocks.is_empty() {
        return Err(format!("{}: no blocks", path.display()));
    }
    Ok(blocks)
}

fn one_block(path: &PathBuf) -> Res<Block> {
    Ok(read_blocks(path)?.remove(0))
}

fn two_blocks(files: &[PathBuf]) -> Res<(Block, Block)> {
    if files.len() == 2 {
        return Ok((one_block(&files[0])?, one_block(&files[1])?));
    }
    let mut b = read_blocks(&files[0])?;
    if b.len() < 2 {
        return Err(format!("{}: expected two blocks or a second file", files[0].display()));
    }
    let second = b.remove(1);
    Ok((b.remove(0), second))
}

fn wrong_kind(b: &Block, want: &str) -> String {
    format!("block `{}` is a {}, expected {want}", b.name, b.item.kind())
}

fn extended(b: &Block) -> Res<(ExtendedPOSystem, Vec<Subset>)> {
    match &b.item {
        Item::Extended(e) => Ok((e.clone(), Vec::new())),
        Item::Tba(t) => Ok((t.base.clone(), t.q.clone())),
        _ => Err(wrong_kind(b, "system with L and f")),
    }
}

fn tba(b: &Block) -> Res<TBASystem> {
    match &b.item {
        Item::Tba(t) => Ok(t.clone()),
        _ => Err(wrong_kind(b, "TBA system")),
    }
}

fn ca(b: &Block) -> Res<CASystem> {
    match &b.item {
        Item::Ca(c) => Ok(c.clone()),
        _ => Err(wrong_kind(b, "CA system")),
    }
}

fn err_s(e: Error) -> String {
    e.to_string()
}

fn names(p: &POSystem, s: Subset) -> Vec<String> {
    s.iter().map(|x| p.name(x).to_string()).collect()
}

fn counts(p: &POSystem, v: &[u32]) -> Value {
    let m: Map<String, Value> =
        v.iter().enumerate().filter(|(_, &x)| x > 0).map(|(i, &x)| (p.name(i).to_string(), json!(x))).collect();
    Value::Object(m)
}

fn po_json(p: &POSystem) -> Map<String, Value> {
    let mut o = Map::new();
    o.insert("elements".into(), json!(p.names()));
    o.insert("reflexive".into(), json!(names(p, p.reflexive())));
    let order: Vec<[&str; 2]> = p.covers().iter().map(|&(a, b)| [p.name(a), p.name(b)]).collect();
    o.insert("order".into(), json!(order));
    o
}

pub fn item_json(name: &str, item: &Item) -> Value {
    let ideals = |p: &POSystem, q: &[Subset]| json!(q.iter().map(|&s| names(p, s)).collect::<Vec<_>>());
    let mut o = Map::new();
    o.insert("name".into(), json!(name));
    o.insert("kind".into(), json!(item.kind()));
    o.extend(po_json(item.posystem()));
    match item {
        Item::Po(_) => {}
        Item::Extended(e) => {
            o.insert("L".into(), json!(names(&e.p, e.l)));
            o.insert("f".into(), counts(&e.p, &e.f));
        }
        Item::Tba(t) => {
            let p = t.p();
            o.insert("L".into(), json!(names(p, t.base.l)));
            o.insert("f".into(), counts(p, &t.base.f));
            o.insert("Q".into(), ideals(p, &t.q));
        }
        Item::Ca(c) => {
            o.insert("M".into(), json!(names(&c.s, c.m)));
            o.insert("F".into(), json!(names(&c.s, c.fset)));
            o.insert("g".into(), counts(&c.s, &c.g));
            o.insert("Q".into(), ideals(&c.s, &c.q));
        }
        Item::Signature(s) => {
            o.insert("Q".into(), ideals(&s.atoms, &s.generators));
            o.insert("h".into(), counts(&s.atoms, &s.h));
            let k: Map<String, Value> =
                s.k.iter().enumerate().map(|(i, &x)| (s.atoms.name(i).to_string(), json!(x))).collect();
            o.insert("k".into(), Value::Object(k));
        }
    }
    Value::Object(o)
}

fn report_json(r: &Report) -> Value {
    json!({"ok": r.ok(), "checks": r.checks})
}

fn decision(ok: bool) -> i32 {
    if ok {
        EXIT_OK
    } else {
        EXIT_FALSE
    }
}

fn theta_text(a: &POSystem, b: &POSystem, theta: &[usize]) -> String {
    theta.iter().enumerate().map(|(i, &j)| format!("{}->{}", a.name(i), b.name(j))).collect::<Vec<_>>().join(" ")
}

fn measure(text: &str, e: &ExtendedPOSystem) -> Res<Measure> {
    let m = dsl::parse_measure(text, &e.p).map_err(|err| format!("measure `{text}`: {err}"))?;
    validate_measure(e, &m).map_err(|err| format!("measure `{text}`: {err}"))?;
    Ok(m)
}

fn space(b: &Block, strategy: BuildStrategy) -> Res<Space> {
    let (e, _) = extended(b)?;
    build_space(&e, strategy, true).map_err(err_s)
}

fn dispatch(cmd: &Cmd) -> Res<Out> {
    match cmd {
        Cmd::Validate { file } => validate(&read_blocks(file)?),
        Cmd::OmegaCat { file } => {
            let b = one_block(file)?;
            let (e, c) = extended(&b)?;
            let d = omega_cat_check(&e, &c).map_err(err_s)?;
            let p = &e.p;
            let atoms: Vec<Value> = d
                .atoms
                .iter()
                .map(|a| json!({"atom": atom_name(p, a.atom), "isolated": a.isolated.to_string(), "witness": a.witness.map(|x| p.name(x))}))
                .collect();
            let mut text = String::new();
            if let Some(t) = &d.refined {
                text.push_str("ω-categorical; refined tuple:\n");
                text.push_str(&dsl::print_block(&b.name, &Item::Tba(t.clone())));
            } else {
                text.push_str("not ω-categorical\n");
                for a in d.atoms.iter().filter(|a| !a.isolated.is_finite()) {
                    let w = a.witness.map_or(String::new(), |x| format!(" from {}", p.name(x)));
                    text.push_str(&format!("atom {} has infinitely many isolated points{w}\n", atom_name(p, a.atom)));
                }
            }
            let refined = d.refined.as_ref().map(|t| item_json(&b.name, &Item::Tba(t.clone())));
            Ok(Out::new(
                decision(d.categorical),
                text,
                json!({"categorical": d.categorical, "atoms": atoms, "refined": refined}),
            ))
        }
        Cmd::Atoms { file } => {
            let b = one_block(file)?;
            let (p, q, kind) = match &b.item {
                Item::Tba(t) => (t.p().clone(), t.q.clone(), AlgebraKind::Tba),
                Item::Ca(c) => (c.s.clone(), c.q.clone(), AlgebraKind::Closure),
                Item::Signature(s) => (s.atoms.clone(), s.generators.clone(), AlgebraKind::Closure),
                _ => return Err(wrong_kind(&b, "block with ideals")),
            };
            let d = generate_algebra(&p, &q, kind);
            let atoms: Vec<String> = d.atoms().iter().map(|&a| atom_name(&p, a)).collect();
            let mut text = format!("{} atoms: {}\n", atoms.len(), atoms.join(" "));
            let mut j = json!({"atoms": atoms, "full": d.is_full_powerset()});
            if kind == AlgebraKind::Tba {
                if let Ok(sys) = atom_posystem(&d) {
                    text.push_str(&dsl::print_block(&format!("{}_atoms", b.name), &Item::Po(sys.system.clone())));
                    j["system"] = Value::Object(po_json(&sys.system));
                }
            }
            Ok(Out::new(EXIT_OK, text, j))
        }
        Cmd::ToCa { file } => {
            let b = one_block(file)?;
            let c = tba_to_ca(&tba(&b)?).map_err(err_s)?;
            let item = Item::Ca(c);
            Ok(Out::new(EXIT_OK, dsl::print_block(&b.name, &item), item_json(&b.name, &item)))
        }
        Cmd::ToTba { file } => {
            let b = one_block(file)?;
            let t = ca_to_tba(&ca(&b)?).map_err(err_s)?;
            let item = Item::Tba(t);
            Ok(Out::new(EXIT_OK, dsl::print_block(&b.name, &item), item_json(&b.name, &item)))
        }
        Cmd::Signature { file } => {
            let b = one_block(file)?;
            match &b.item {
                Item::Signature(s) => {
                    let (r, w) = signature_realizable(s);
                    let mut text = r.to_string();
                    let mut j = json!({"realizable": r.ok(), "report": report_json(&r)});
                    if let Some(t) = w {
                        let item = Item::Tba(t);
                        text.push_str("witness:\n");
                        text.push_str(&dsl::print_block(&b.name, &item));
                        j["witness"] = item_json(&b.name, &item);
                    }
                    Ok(Out::new(decision(r.ok()), text, j))
                }
                _ => {
                    let s = signature_of(&tba(&b)?).map_err(err_s)?;
                    let item = Item::Signature(s);
                    Ok(Out::new(EXIT_OK, dsl::print_block(&b.name, &item), item_json(&b.name, &item)))
                }
            }
        }
        Cmd::Iso { files } => {
            let (a, b) = two_blocks(files)?;
            let (theta, pa, pb) = match (&a.item, &b.item) {
                (Item::Tba(x), Item::Tba(y)) => (iso_tba(x, y), x.p(), y.p()),
                (Item::Ca(x), Item::Ca(y)) => (iso_ca(x, y), &x.s, &y.s),
                (Item::Signature(x), Item::Signature(y)) => (signature_iso(x, y), &x.atoms, &y.atoms),
                _ => return Err(format!("cannot compare a {} with a {}", a.item.kind(), b.item.kind())),
            };
            Ok(match theta {
                Some(t) => {
                    let text = format!("isomorphic: {}\n", theta_text(pa, pb, &t));
                    let map: Map<String, Value> =
                        t.iter().enumerate().map(|(i, &j)| (pa.name(i).to_string(), json!(pb.name(j)))).collect();
                    Out::new(EXIT_OK, text, json!({"isomorphic": true, "theta": map}))
                }
                None => Out::new(EXIT_FALSE, "not isomorphic\n", json!({"isomorphic": false})),
            })
        }
        Cmd::Enumerate { max_p, n, max_f, samples, seed } => {
            let en = enumerate_systems(*max_p, *n, *max_f).map_err(err_s)?;
            let mut text = String::new();
            for (i, t) in en.systems.iter().enumerate() {
                text.push_str(&dsl::print_block(&format!("T{}", i + 1), &Item::Tba(t.clone())));
                text.push('\n');
            }
            for (size, c) in &en.counts {
                text.push_str(&format!("|P| = {size}: {c} classes\n"));
            }
            let mut misses = 0;
            if *samples > 0 {
                let known: std::collections::HashSet<Vec<u8>> = en.systems.iter().map(|t| t.canonical()).collect();
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                for _ in 0..*samples {
                    if let Some(t) = random_tba_system(&mut rng, *max_p, *n, *max_f, 1000) {
                        if !known.contains(&t.canonical()) {
                            misses += 1;
                            text.push_str(&format!("sample not listed:\n{}", dsl::print_block("S", &Item::Tba(t))));
                        }
                    }
                }
                text.push_str(&format!("{samples} samples, {misses} not listed\n"));
            }
            let counts: BTreeMap<String, usize> = en.counts.iter().map(|(k, v)| (k.to_string(), *v)).collect();
            let systems: Vec<Value> = en
                .systems
                .iter()
                .enumerate()
                .map(|(i, t)| item_json(&format!("T{}", i + 1), &Item::Tba(t.clone())))
                .collect();
            Ok(Out::new(
                decision(misses == 0),
                text,
                json!({"counts": counts, "systems": systems, "samples": samples, "unlisted": misses}),
            ))
        }
        Cmd::MuAdd { file, a, b } => {
            let (e, _) = extended(&one_block(file)?)?;
            let (ma, mb) = (measure(a, &e)?, measure(b, &e)?);
            let s = mu_add(&e, &ma, &mb).map_err(err_s)?;
            let f = s.format(&e.p);
            Ok(Out::new(EXIT_OK, format!("{f}\n"), json!({"sum": f})))
        }
        Cmd::MuSplit { file, m, t1, t2 } => {
            let (e, _) = extended(&one_block(file)?)?;
            let p = &e.p;
            let (mm, a, b) = (measure(m, &e)?, measure(t1, &e)?, measure(t2, &e)?);
            let v = vaught_split(&e, &mm, &a, &b).map_err(err_s)?;
            let mut text = String::new();
            for s in &v.steps {
                text.push_str(&match s {
                    SplitStep::Assign { piece, ty, side } => {
                        format!("piece {piece} ({}) -> side {side}\n", p.name(*ty))
                    }
                    SplitStep::Split { piece, ty, new_piece, new_ty } => {
                        format!("piece {piece} ({}) splits off piece {new_piece} ({})\n", p.name(*ty), p.name(*new_ty))
                    }
                });
            }
            let side = |s: u8| v.side_types(s).iter().map(|&x| p.name(x).to_string()).collect::<Vec<_>>();
            text.push_str(&format!("side 1: {}\nside 2: {}\n", side(1).join(" "), side(2).join(" ")));
            let pieces: Vec<&str> = v.pieces.iter().map(|&x| p.name(x)).collect();
            Ok(Out::new(EXIT_OK, text, json!({"pieces": pieces, "side": v.side, "steps": v.steps})))
        }
        Cmd::Build { file, strategy } => {
            let b = one_block(file)?;
            let s = space(&b, (*strategy).into())?;
            let t = s.term.format(&s.system);
            let fc = s.system.finite_crowded();
            let mut text = format!("{t}\n");
            if !fc {
                text.push_str("note: system is not finite-crowded\n");
            }
            Ok(Out::new(EXIT_OK, text, json!({"term": t, "finite_crowded": fc})))
        }
        Cmd::Approximate { file, depth, strategy } => {
            let s = space(&one_block(file)?, (*strategy).into())?;
            let m = approximate(&s, *depth);
            let p = &s.system.p;
            let mut text = String::new();
            for c in &m.cells {
                let marks: Vec<String> = c.marks.iter().map(|(&x, n)| format!("{}={n}", p.name(x))).collect();
                text.push_str(&format!(
                    "{}{} {} [{}]{}{}\n",
                    "  ".repeat(c.depth),
                    c.id,
                    if c.compact { "compact" } else { "open" },
                    names(p, c.ty).join(" "),
                    if marks.is_empty() { String::new() } else { format!(" {}", marks.join(" ")) },
                    if c.compact { String::new() } else { format!(" escape [{}]", names(p, c.escape).join(" ")) },
                ));
            }
            Ok(Out::new(EXIT_OK, text, m.to_json()))
        }
        Cmd::Check { file, depth, strategy } => {
            let s = space(&one_block(file)?, (*strategy).into())?;
            let m = approximate(&s, *depth);
            let r = check_partition_invariants(&m);
            Ok(Out::new(decision(r.ok()), summarize(&r), report_json(&r)))
        }
        Cmd::Match { files, depth } => {
            let (sa, sb) = if files.len() == 1 && read_blocks(&files[0])?.len() == 1 {
                let b = one_block(&files[0])?;
                (space(&b, BuildStrategy::LastTopological)?, space(&b, BuildStrategy::FirstMaximal)?)
            } else {
                let (a, b) = two_blocks(files)?;
                (space(&a, BuildStrategy::default())?, space(&b, BuildStrategy::default())?)
            };
            let (mut ma, mut mb) = (approximate(&sa, *depth), approximate(&sb, *depth));
            let ta = sa.term.format(&sa.system);
            let tb = sb.term.format(&sb.system);
            match back_and_forth(&mut ma, &mut mb, *depth) {
                Ok(mt) => {
                    let text = format!(
                        "{ta}\n{tb}\nmatched to depth {}: {} pieces, {} split certificates\n",
                        mt.depth,
                        mt.last().len(),
                        mt.certificates
                    );
                    let mut j = mt.to_json();
                    j["pieces"] = json!(mt.last().len());
                    Ok(Out::new(EXIT_OK, text, j))
                }
                Err(Error::MeasureMismatch(msg)) => Ok(Out::new(
                    EXIT_FALSE,
                    format!("{ta}\n{tb}\nno matching: {msg}\n"),
                    json!({"matched": false, "reason": msg}),
                )),
                Err(e) => Err(e.to_string()),
            }
        }
        Cmd::Decompose { file, depth, strategy } => {
            let s = space(&one_block(file)?, (*strategy).into())?;
            let m = approximate(&s, *depth);
            let d = minimum_decomposition(&m).map_err(err_s)?;
            let p = &s.system.p;
            let mut text = format!("main part up to depth {}\n", d.main_depth);
            for t in &d.pieces {
                let cells: Vec<String> = t.cells.iter().map(|c| c.to_string()).collect();
                text.push_str(&format!("step {} trim {}: cells {}\n", t.step, p.name(t.label), cells.join(" ")));
            }
            if !d.unclumped.is_empty() {
                text.push_str(&format!("{} hull cells wait for a later clump\n", d.unclumped.len()));
            }
            Ok(Out::new(EXIT_OK, text, d.to_json()))
        }
        Cmd::Orbits { file, r } => {
            let t = tba(&one_block(file)?)?;
            let o = orbit_invariants(&t, *r).map_err(err_s)?;
            let bound = if o.exact { "exact" } else { "upper bound" };
            let text = format!("{} invariants for {}-tuples ({bound})\n", o.count, o.r);
            Ok(Out::new(
                EXIT_OK,
                text,
                json!({"r": o.r, "count": o.count.to_string(), "exact": o.exact, "hull": o.hull.format(t.p())}),
            ))
        }
    }
}

fn summarize(r: &Report) -> String {
    let mut by_law: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
    for c in &r.checks {
        let e = by_law.entry(c.law.as_str()).or_default();
        if c.ok {
            e.0 += 1;
        } else {
            e.1 += 1;
        }
    }
    let mut text = String::new();
    for (law, (ok, bad)) in &by_law {
        if *bad == 0 {
            text.push_str(&format!("ok   {law} ({ok} checks)\n"));
        }
    }
    for c in r.checks.iter().filter(|c| !c.ok) {
        text.push_str(&format!("FAIL {}: {}\n", c.law, c.detail));
    }
    text
}

fn signature_iso(a: &Signature, b: &Signature) -> Option<Vec<usize>> {
    let k = |s: &Signature| s.k.iter().map(|&x| x as u32).collect::<Vec<_>>();
    let to_ca = |s: &Signature| CASystem {
        s: s.atoms.clone(),
        m: (0..s.atoms.len()).filter(|&i| s.k[i] <= 1).collect(),
        fset: (0..s.atoms.len()).filter(|&i| s.k[i] == 0).collect(),
        g: s.h.iter().zip(k(s)).map(|(&h, k)| h * 3 + k).collect(),
        q: s.generators.clone(),
    };
    iso_ca(&to_ca(a), &to_ca(b))
}

fn validate(blocks: &[Block]) -> Res<Out> {
    let mut text = String::new();
    let mut all = true;
    let mut js = Vec::new();
    for b in blocks {
        let r = match &b.item {
            Item::Tba(t) => validate_tba_system(t),
            Item::Ca(c) => validate_ca_system(c),
            Item::Signature(s) => signature_realizable(s).0,
            Item::Po(p) => {
                let mut r = Report::new();
                r.push("PO system", true, "");
                r.push("poset", true, format!("{} reflexive points", p.reflexive().len()));
                r
            }
            Item::Extended(e) => {
                let mut r = Report::new();
                r.push("finite-crowded", e.finite_crowded(), "a discrete element is not minimal in L");
                r
            }
        };
        all &= r.ok();
        text.push_str(&format!("{} `{}`: {}\n", b.item.kind(), b.name, if r.ok() { "valid" } else { "invalid" }));
        text.push_str(&r.to_string());
        js.push(json!({"name": b.name, "kind": b.item.kind(), "valid": r.ok(), "report": report_json(&r)}));
    }
    Ok(Out::new(decision(all), text, json!({"valid": all, "blocks": js})))
}
