//! Serializable summaries of an analysis, suitable for CI diffs and a
//! human-readable rendering. Every field is computed from engine output;
//! reports never echo expectation values back.

use serde::Serialize;

use crate::quotient::is_kasch;
use crate::ring::regular_elements;
use crate::tot::{Analysis, Chain, VerificationReport};

#[derive(Clone, Debug, Serialize)]
pub struct StepSummary {
    pub order: u64,
    pub filter_members: usize,
    pub flat_left: bool,
    pub epi: bool,
    pub perfect_extension: bool,
    pub filter_perfect: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ChainSummary {
    pub method: &'static str,
    pub gamma: usize,
    pub steps: Vec<StepSummary>,
}

fn summarize_chain(c: &Chain) -> ChainSummary {
    ChainSummary {
        method: c.method.as_str(),
        gamma: c.gamma,
        steps: c
            .steps
            .iter()
            .map(|s| StepSummary {
                order: s.subring.order(),
                filter_members: s.filter.members.len(),
                flat_left: s.flat_left,
                epi: s.epi,
                perfect_extension: s.perfect_extension,
                filter_perfect: s.filter_perfect,
            })
            .collect(),
    }
}

/// Everything the laboratory reports about one ring.
#[derive(Clone, Debug, Serialize)]
pub struct RingReport {
    pub name: String,
    pub order: u64,
    pub ideals: usize,
    pub dense_ideals: usize,
    pub essential_ideals: usize,
    pub minimal_dense_order: usize,
    pub qmax_order: u64,
    pub qtot_order: u64,
    pub qmax_equals_qtot: bool,
    pub chains: Vec<ChainSummary>,
    pub filter_chain_abort: Option<String>,
    pub shortcut_order: Option<u64>,
    pub intermediate_subrings: usize,
    pub perfect_members: usize,
    pub condition_c: bool,
    pub condition_c_prime: bool,
    pub semihereditary: bool,
    pub regular: bool,
    pub commutative: bool,
    pub nonsingular: bool,
    pub kasch: bool,
    pub carrier_kasch: bool,
    pub qmax_semisimple: bool,
    pub dense_filter_perfect: bool,
    pub classical_quotients_trivial: bool,
    pub verification: VerificationReport,
}

pub fn ring_report(a: &Analysis, verification: VerificationReport) -> RingReport {
    let mut chains = vec![summarize_chain(&a.morita)];
    if let Ok(c) = &a.filter {
        chains.push(summarize_chain(c));
    }
    RingReport {
        name: a.ring.name().to_string(),
        order: a.ring.order(),
        ideals: a.lat.len(),
        dense_ideals: a.lat.dense_indices().len(),
        essential_ideals: a.lat.essential_indices().len(),
        minimal_dense_order: a.lat.ideals[a.lat.minimal_dense].elements.len(),
        qmax_order: a.qmax.ring.order(),
        qtot_order: a.oracle.order(),
        qmax_equals_qtot: a.oracle.order() == a.qmax.ring.order(),
        chains,
        filter_chain_abort: a.filter.as_ref().err().map(|e| e.to_string()),
        shortcut_order: a.shortcut.as_ref().map(|s| s.order()),
        intermediate_subrings: a.intermediates.len(),
        perfect_members: a.perfect_family.len(),
        condition_c: a.cond_c.holds,
        condition_c_prime: a.cond_c_prime.holds,
        semihereditary: a.semihereditary,
        regular: a.regular,
        commutative: a.commutative,
        nonsingular: a.nonsingular,
        kasch: is_kasch(&a.lat),
        carrier_kasch: a.carrier_kasch,
        qmax_semisimple: a.qmax_semisimple,
        dense_filter_perfect: a.lambek_perfectness.is_perfect(),
        classical_quotients_trivial: regular_elements(&a.ring).all_units,
        verification,
    }
}

/// Report over a whole corpus. The timestamp is informational only and must
/// be excluded when comparing runs.
#[derive(Clone, Debug, Serialize)]
pub struct CorpusReport {
    pub generated_unix_seconds: u64,
    pub rings: Vec<RingReport>,
}

impl CorpusReport {
    pub fn new(rings: Vec<RingReport>) -> CorpusReport {
        let generated_unix_seconds = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        CorpusReport { generated_unix_seconds, rings }
    }

    pub fn all_pass(&self) -> bool {
        self.rings.iter().all(|r| r.verification.pass())
    }
}

fn yn(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// Markdown rendering of the same data.
pub fn render_markdown(rep: &CorpusReport) -> String {
    let mut out = String::new();
    out.push_str("# Quotient ring laboratory report\n\n");
    out.push_str(
        "| ring | order | ideals | dense | min dense | Qmax | Qtot | gamma | C | C' | semiher | regular | Kasch | suite |\n",
    );
    out.push_str("|---|---|---|---|---|---|---|---|---|---|---|---|---|---|\n");
    for r in &rep.rings {
        let gamma = r
            .chains
            .iter()
            .map(|c| format!("{}:{}", c.method, c.gamma))
            .collect::<Vec<_>>()
            .join(" ");
        out.push_str(&format!(
            "| {} | {} | {} | {} | {} | {} | {} | {} | {} | {} | {} | {} | {} | {} |\n",
            r.name,
            r.order,
            r.ideals,
            r.dense_ideals,
            r.minimal_dense_order,
            r.qmax_order,
            r.qtot_order,
            gamma,
            yn(r.condition_c),
            yn(r.condition_c_prime),
            yn(r.semihereditary),
            yn(r.regular),
            yn(r.kasch),
            if r.verification.pass() { "pass" } else { "FAIL" },
        ));
    }
    out.push('\n');
    for r in &rep.rings {
        let failures = r.verification.failures();
        if !failures.is_empty() {
            out.push_str(&format!("## Failures for {}\n\n", r.name));
            for c in failures {
                out.push_str(&format!("- `{}`: {}\n", c.name, c.detail));
            }
            out.push('\n');
        }
    }
    let interesting: Vec<&RingReport> = rep
        .rings
        .iter()
        .filter(|r| r.qmax_equals_qtot && !r.dense_filter_perfect)
        .collect();
    if !interesting.is_empty() {
        out.push_str("## Rings where Qmax = Qtot without a perfect dense filter\n\n");
        for r in interesting {
            out.push_str(&format!("- {}\n", r.name));
        }
        out.push('\n');
    }
    let max_gamma = rep
        .rings
        .iter()
        .flat_map(|r| r.chains.iter().map(|c| c.gamma))
        .max()
        .unwrap_or(0);
    out.push_str(&format!(
        "Largest fixpoint index over the corpus: {max_gamma}. A finite ring needing more than one step has not been observed.\n",
    ));
    out
}
