//! `ql`: command line front end for the quotient-ring laboratory.

use qlab_cli::corpus;

use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use qlab_core::ideals::IdealLattice;
use qlab_core::quotient::build_qmax;
use qlab_core::report::{render_markdown, ring_report, CorpusReport, RingReport};
use qlab_core::ring::{FiniteRing, RingDef};
use qlab_core::tot::{
    analyze, brute_force_qtot, morita_chain, qtot_shortcut, simplified_chain, verify_suite, Caps,
    Chain,
};

#[derive(Parser)]
#[command(
    name = "ql",
    version,
    about = "exact computation of maximal and total right quotient rings of finite rings"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Validate a ring definition file (a structure-constant table).
    Validate { file: PathBuf },
    /// Classify the right ideals of a ring.
    Ideals {
        ring: String,
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Build the maximal right quotient ring.
    Qmax {
        ring: String,
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Compute the total right quotient ring.
    Qtot {
        ring: String,
        #[arg(long, value_enum, default_value_t = MethodArg::All)]
        method: MethodArg,
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Run the verification suite and the regression pins over a corpus.
    Verify {
        #[arg(long)]
        corpus: Option<PathBuf>,
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Emit the aggregated corpus report.
    Report {
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = FormatArg::Json)]
        format: FormatArg,
        #[arg(long)]
        corpus: Option<PathBuf>,
        #[arg(long)]
        cap: Option<usize>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Morita,
    Filter,
    Shortcut,
    Oracle,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Md,
}

/// Default caps, overridden by QL_CAP and then by an explicit --cap.
fn caps(cli_cap: Option<usize>) -> Caps {
    let mut c = Caps::default();
    if let Ok(v) = std::env::var("QL_CAP") {
        if let Ok(n) = v.parse::<usize>() {
            c.ideals = n;
            c.subrings = n;
        }
    }
    if let Some(n) = cli_cap {
        c.ideals = n;
        c.subrings = n;
    }
    c
}

fn load_def(path: &Path) -> Result<Arc<FiniteRing>> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading ring definition {}", path.display()))?;
    let def: RingDef = serde_json::from_str(&text)
        .with_context(|| format!("parsing ring definition {}", path.display()))?;
    Ok(FiniteRing::new(&def)?)
}

/// A ring argument is a corpus name, a definition file path, or a
/// constructor expression, tried in that order.
fn resolve_ring(arg: &str) -> Result<Arc<FiniteRing>> {
    for e in corpus::builtin_corpus()? {
        if e.name.eq_ignore_ascii_case(arg) {
            return Ok(e.ring);
        }
    }
    let p = Path::new(arg);
    if p.exists() {
        return load_def(p);
    }
    corpus::parse_expr(arg)
}

fn load_entries(path: &Option<PathBuf>) -> Result<Vec<corpus::CorpusEntry>> {
    match path {
        Some(p) => corpus::load_corpus(p),
        None => corpus::builtin_corpus(),
    }
}

fn print_chain(c: &Chain) {
    let orders: Vec<String> = c.steps.iter().map(|s| s.subring.order().to_string()).collect();
    println!(
        "  {} chain: orders [{}], gamma {}, fixpoint order {}",
        c.method.as_str(),
        orders.join(" -> "),
        c.gamma,
        c.fixpoint().subring.order()
    );
}

fn cmd_qtot(ring_name: &str, method: MethodArg, cap: Option<usize>) -> Result<i32> {
    let ring = resolve_ring(ring_name)?;
    let caps = caps(cap);
    let lat = IdealLattice::build(&ring, caps.ideals)?;
    let qm = build_qmax(&ring, &lat)?;
    println!("{}: order {}, maximal quotient ring order {}", ring.name(), ring.order(), qm.ring.order());
    let mut orders: Vec<(&str, u64)> = Vec::new();
    if matches!(method, MethodArg::Morita | MethodArg::All) {
        let c = morita_chain(&qm, &lat)?;
        print_chain(&c);
        orders.push(("morita", c.fixpoint().subring.order()));
    }
    if matches!(method, MethodArg::Filter | MethodArg::All) {
        match simplified_chain(&qm, &lat) {
            Ok(c) => {
                print_chain(&c);
                orders.push(("filter", c.fixpoint().subring.order()));
            }
            Err(e) => println!("  filter chain: aborted ({e})"),
        }
    }
    if matches!(method, MethodArg::Shortcut | MethodArg::All) {
        match qtot_shortcut(&qm, &lat) {
            Ok(s) => {
                println!("  shortcut: order {}", s.order());
                orders.push(("shortcut", s.order()));
            }
            Err(e) if matches!(method, MethodArg::All) => {
                println!("  shortcut: unavailable ({e})");
            }
            Err(e) => return Err(e.into()),
        }
    }
    if matches!(method, MethodArg::Oracle | MethodArg::All) {
        let s = brute_force_qtot(&qm, &lat, caps.subrings)?;
        println!("  oracle: order {}", s.order());
        orders.push(("oracle", s.order()));
    }
    if orders.len() > 1 {
        let agree = orders.windows(2).all(|w| w[0].1 == w[1].1);
        println!("  agreement: {}", if agree { "yes" } else { "NO" });
        if !agree {
            return Ok(1);
        }
    }
    Ok(0)
}

fn analyze_corpus(entries: &[corpus::CorpusEntry], caps: &Caps) -> Result<Vec<RingReport>> {
    entries
        .iter()
        .map(|e| {
            let a = analyze(&e.ring, caps)
                .with_context(|| format!("analyzing corpus entry {:?}", e.name))?;
            let v = verify_suite(&a);
            let mut r = ring_report(&a, v);
            r.name = e.name.clone();
            Ok(r)
        })
        .collect()
}

fn run() -> Result<i32> {
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::Validate { file } => {
            let ring = load_def(&file)?;
            println!(
                "ok: {} (order {}, {} basis elements)",
                ring.name(),
                ring.order(),
                ring.rank()
            );
            Ok(0)
        }
        Cmd::Ideals { ring, cap } => {
            let ring = resolve_ring(&ring)?;
            let lat = IdealLattice::build(&ring, caps(cap).ideals)?;
            println!(
                "{}: {} right ideals ({} dense, {} essential), minimal dense order {}",
                ring.name(),
                lat.len(),
                lat.dense_indices().len(),
                lat.essential_indices().len(),
                lat.ideals[lat.minimal_dense].elements.len()
            );
            for (i, ideal) in lat.ideals.iter().enumerate() {
                println!(
                    "  #{i}: order {}{}{}",
                    ideal.elements.len(),
                    if ideal.dense { ", dense" } else { "" },
                    if ideal.essential { ", essential" } else { "" },
                );
            }
            Ok(0)
        }
        Cmd::Qmax { ring, cap } => {
            let ring = resolve_ring(&ring)?;
            let lat = IdealLattice::build(&ring, caps(cap).ideals)?;
            let qm = build_qmax(&ring, &lat)?;
            println!(
                "{}: maximal quotient ring of order {} (additive type {:?})",
                ring.name(),
                qm.ring.order(),
                qm.ring.moduli()
            );
            println!(
                "  built on the minimal dense right ideal of order {}",
                lat.ideals[qm.d_index].elements.len()
            );
            println!(
                "  embedding is {}",
                if qm.lambda.image_set.len() == qm.ring.order() as usize {
                    "onto: the ring is its own maximal quotient ring"
                } else {
                    "proper"
                }
            );
            Ok(0)
        }
        Cmd::Qtot { ring, method, cap } => cmd_qtot(&ring, method, cap),
        Cmd::Verify { corpus, cap } => {
            let entries = load_entries(&corpus)?;
            let reports = analyze_corpus(&entries, &caps(cap))?;
            let mut failed = false;
            for (e, r) in entries.iter().zip(&reports) {
                let clauses = &r.verification.clauses;
                let bad = r.verification.failures();
                let pins = e.expect.mismatches(r);
                let ok = bad.is_empty() && pins.is_empty();
                failed |= !ok;
                println!(
                    "{} {} ({} clauses)",
                    if ok { "PASS" } else { "FAIL" },
                    e.name,
                    clauses.len()
                );
                for c in bad {
                    println!("    clause {}: {}", c.name, c.detail);
                }
                for p in pins {
                    println!("    pin {p}");
                }
            }
            Ok(if failed { 1 } else { 0 })
        }
        Cmd::Report { out, format, corpus, cap } => {
            let entries = load_entries(&corpus)?;
            let reports = analyze_corpus(&entries, &caps(cap))?;
            let rep = CorpusReport::new(reports);
            let text = match format {
                FormatArg::Json => serde_json::to_string_pretty(&rep)?,
                FormatArg::Md => render_markdown(&rep),
            };
            match out {
                Some(p) => {
                    std::fs::write(&p, text)
                        .with_context(|| format!("writing report to {}", p.display()))?;
                    println!("wrote {}", p.display());
                }
                None => println!("{text}"),
            }
            Ok(if rep.all_pass() { 0 } else { 1 })
        }
    }
}

fn main() {
    match run() {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::exit(1);
        }
    }
}
