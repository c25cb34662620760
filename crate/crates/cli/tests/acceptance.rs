//! Acceptance criteria for the laboratory, one test per criterion. Each test
//! prints a single verdict line; the shared corpus analysis is computed once.

use std::process::Command;
use std::sync::{Arc, OnceLock};

use qlab_cli::corpus::{builtin_corpus, CorpusEntry};
use qlab_core::construct::{matrix_ring, prime_field};
use qlab_core::ring::{are_isomorphic, regular_elements, FiniteRing};
use qlab_core::tot::{analyze, lambda_image, verify_suite, Analysis, Caps, VerificationReport};

struct Entry {
    name: String,
    ring: Arc<FiniteRing>,
    analysis: Analysis,
    suite: VerificationReport,
}

static CORPUS: OnceLock<Vec<Entry>> = OnceLock::new();

fn corpus() -> &'static [Entry] {
    CORPUS.get_or_init(|| {
        builtin_corpus()
            .expect("builtin corpus must construct")
            .into_iter()
            .map(|CorpusEntry { name, ring, .. }| {
                let analysis = analyze(&ring, &Caps::default())
                    .unwrap_or_else(|e| panic!("analysis of {name} failed: {e}"));
                let suite = verify_suite(&analysis);
                Entry { name, ring, analysis, suite }
            })
            .collect()
    })
}

fn verdict(n: usize, what: &str, pass: bool) {
    println!("criterion {n:02} ({what}): {}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "criterion {n:02} ({what}) failed");
}

fn clause_passes(e: &Entry, name: &str) -> bool {
    let c = e
        .suite
        .clauses
        .iter()
        .find(|c| c.name == name)
        .unwrap_or_else(|| panic!("suite is missing clause {name}"));
    if !c.pass {
        eprintln!("  {}: clause {} failed: {}", e.name, c.name, c.detail);
    }
    c.pass
}

#[test]
fn criterion_01_fixpoint_constructions_agree_with_the_oracle() {
    let mut pass = true;
    for e in corpus() {
        let a = &e.analysis;
        let oracle = &a.oracle;
        if !a.morita.fixpoint().subring.set_eq(oracle) {
            eprintln!("  {}: refinement fixpoint differs from the oracle", e.name);
            pass = false;
        }
        // The filter chain is only guaranteed to agree when every
        // intermediate ring is flat on the left.
        if !a.cond_c.holds {
            continue;
        }
        match &a.filter {
            Ok(chain) if chain.fixpoint().subring.set_eq(oracle) => {}
            Ok(_) => {
                eprintln!("  {}: filter fixpoint differs from the oracle", e.name);
                pass = false;
            }
            Err(err) => {
                eprintln!("  {}: filter chain aborted: {err}", e.name);
                pass = false;
            }
        }
    }
    verdict(1, "both constructions reach the oracle fixpoint", pass);
}

#[test]
fn criterion_02_chains_agree_step_by_step() {
    let mut pass = true;
    for e in corpus() {
        let a = &e.analysis;
        if !a.cond_c.holds {
            continue;
        }
        let Ok(filter) = &a.filter else {
            eprintln!("  {}: filter chain aborted", e.name);
            pass = false;
            continue;
        };
        if a.morita.gamma != filter.gamma || a.morita.steps.len() != filter.steps.len() {
            eprintln!("  {}: chain lengths differ", e.name);
            pass = false;
            continue;
        }
        for (i, (m, f)) in a.morita.steps.iter().zip(&filter.steps).enumerate() {
            if !m.subring.set_eq(&f.subring) {
                eprintln!("  {}: step {} differs between the chains", e.name, i);
                pass = false;
            }
        }
    }
    verdict(2, "the two descending chains coincide stepwise", pass);
}

#[test]
fn criterion_03_semihereditary_shortcut() {
    let mut pass = true;
    let mut seen = 0;
    for e in corpus() {
        let a = &e.analysis;
        if !a.semihereditary {
            continue;
        }
        seen += 1;
        match &a.shortcut {
            Some(s) if s.set_eq(&a.oracle) => {}
            Some(_) => {
                eprintln!("  {}: one-pass formula differs from the oracle", e.name);
                pass = false;
            }
            None => {
                eprintln!("  {}: semihereditary ring without a shortcut result", e.name);
                pass = false;
            }
        }
        if a.morita.gamma > 1 {
            eprintln!("  {}: fixpoint index {} exceeds 1", e.name, a.morita.gamma);
            pass = false;
        }
        if let Ok(f) = &a.filter {
            if f.gamma > 1 {
                eprintln!("  {}: filter fixpoint index {} exceeds 1", e.name, f.gamma);
                pass = false;
            }
        }
    }
    let t2 = corpus().iter().find(|e| e.name == "T2(F2)").expect("T2(F2) is in the corpus");
    if t2.analysis.shortcut.as_ref().map(|s| s.order()) != Some(16) {
        eprintln!("  T2(F2): shortcut order is not 16");
        pass = false;
    }
    verdict(3, "one-pass formula on semihereditary rings", pass && seen > 0);
}

#[test]
fn criterion_04_regular_rings_are_their_own_total_quotients() {
    let mut pass = true;
    let mut seen = 0;
    for e in corpus() {
        let a = &e.analysis;
        if !a.regular {
            continue;
        }
        seen += 1;
        if !a.oracle.set_eq(&lambda_image(&a.qmax)) {
            eprintln!("  {}: total quotient ring exceeds the embedded copy", e.name);
            pass = false;
        }
    }
    verdict(4, "regular rings gain nothing", pass && seen > 0);
}

#[test]
fn criterion_05_triangular_rings_reach_a_semisimple_maximum() {
    let mut pass = true;
    for name in ["T2(F2)", "T2(F3)"] {
        let e = corpus().iter().find(|e| e.name == name).expect("triangular entry");
        let a = &e.analysis;
        let qmax_order = a.qmax.ring.order();
        if a.oracle.order() != qmax_order {
            eprintln!("  {name}: total and maximal quotient rings differ");
            pass = false;
        }
        if !a.lambek_perfectness.is_perfect() {
            eprintln!("  {name}: dense-filter localization is not perfect");
            pass = false;
        }
        if !a.qmax_semisimple {
            eprintln!("  {name}: maximal quotient ring is not semisimple");
            pass = false;
        }
    }
    verdict(5, "triangular corpus rings", pass);
}

#[test]
fn criterion_06_induction_suite_holds_on_the_whole_corpus() {
    let mut pass = true;
    for e in corpus() {
        if !e.suite.pass() {
            for c in e.suite.failures() {
                eprintln!("  {}: clause {} failed: {}", e.name, c.name, c.detail);
            }
            pass = false;
        }
        pass &= clause_passes(e, "tensor_collapse");
    }
    verdict(6, "full lemma suite including tensor collapse", pass);
}

#[test]
fn criterion_07_perfect_extensions_round_trip() {
    let mut pass = true;
    for e in corpus() {
        pass &= clause_passes(e, "perfect_round_trip");
        if e.analysis.perfect_family.is_empty() {
            eprintln!("  {}: no perfect intermediate ring found at all", e.name);
            pass = false;
        }
    }
    verdict(7, "flat epimorphisms recover their filter", pass);
}

#[test]
fn criterion_08_torsion_kernel_identity() {
    let mut pass = true;
    for e in corpus() {
        pass &= clause_passes(e, "torsion_kernel_agreement");
    }
    verdict(8, "tensor kernels on cyclic modules match the filter", pass);
}

#[test]
fn criterion_09_classical_localization_is_trivial() {
    let mut pass = true;
    for e in corpus() {
        if !regular_elements(&e.ring).all_units {
            eprintln!("  {}: a regular element is not a unit", e.name);
            pass = false;
        }
        pass &= clause_passes(e, "classical_quotients_trivial");
    }
    verdict(9, "every regular element is already a unit", pass);
}

#[test]
fn criterion_10_maximal_quotient_rings_build_everywhere() {
    let mut pass = true;
    for e in corpus() {
        let lam = &e.analysis.qmax.lambda;
        if lam.image_set.len() != e.ring.order() as usize {
            eprintln!("  {}: embedding into the maximal quotient ring is not injective", e.name);
            pass = false;
        }
    }
    let t2 = corpus().iter().find(|e| e.name == "T2(F2)").expect("T2(F2) is in the corpus");
    let qmax = &t2.analysis.qmax.ring;
    if qmax.order() != 16 {
        eprintln!("  T2(F2): maximal quotient ring order is {}", qmax.order());
        pass = false;
    }
    let m2 = matrix_ring(&prime_field(2).unwrap(), 2).unwrap();
    if !are_isomorphic(qmax, &m2) {
        eprintln!("  T2(F2): maximal quotient ring is not isomorphic to M2(F2)");
        pass = false;
    }
    verdict(10, "maximal quotient rings and the matrix identification", pass);
}

#[test]
fn criterion_11_reports_are_deterministic() {
    let run = || {
        let out = Command::new(env!("CARGO_BIN_EXE_ql"))
            .args(["report", "--format", "json"])
            .output()
            .expect("report run");
        assert!(out.status.success(), "report run failed: {}", String::from_utf8_lossy(&out.stderr));
        let text = String::from_utf8(out.stdout).expect("utf8 report");
        // The generation timestamp is the single permitted difference.
        let stripped: Vec<&str> = text
            .lines()
            .filter(|l| !l.contains("generated_unix_seconds"))
            .collect();
        assert!(stripped.len() + 1 == text.lines().count(), "timestamp line missing");
        stripped.join("\n")
    };
    let first = run();
    let second = run();
    assert!(!first.is_empty());
    verdict(11, "two report runs agree byte for byte", first == second);
}
