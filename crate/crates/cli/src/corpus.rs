//! The built-in ring corpus with its regression pins, a small constructor
//! expression language, and the loader for user corpus files.

use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use qlab_core::construct::{self, QuiverDef};
use qlab_core::report::RingReport;
use qlab_core::ring::{FiniteRing, RingDef};
use serde::Deserialize;

/// Regression pins. Every field is optional; pins are checked against the
/// computed report and never feed any computation.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Expectations {
    pub qmax_order: Option<u64>,
    pub qtot_order: Option<u64>,
    pub gamma: Option<usize>,
    pub ideals: Option<usize>,
    pub dense_ideals: Option<usize>,
    pub semihereditary: Option<bool>,
    pub regular: Option<bool>,
    pub condition_c: Option<bool>,
}

fn pin<T: PartialEq + std::fmt::Display>(
    out: &mut Vec<String>,
    what: &str,
    want: &Option<T>,
    got: &T,
) {
    if let Some(w) = want {
        if w != got {
            out.push(format!("{what}: expected {w}, computed {got}"));
        }
    }
}

impl Expectations {
    /// All pin mismatches against a computed report.
    pub fn mismatches(&self, r: &RingReport) -> Vec<String> {
        let mut out = Vec::new();
        pin(&mut out, "qmax_order", &self.qmax_order, &r.qmax_order);
        pin(&mut out, "qtot_order", &self.qtot_order, &r.qtot_order);
        pin(&mut out, "ideals", &self.ideals, &r.ideals);
        pin(&mut out, "dense_ideals", &self.dense_ideals, &r.dense_ideals);
        pin(&mut out, "semihereditary", &self.semihereditary, &r.semihereditary);
        pin(&mut out, "regular", &self.regular, &r.regular);
        pin(&mut out, "condition_c", &self.condition_c, &r.condition_c);
        if let Some(g) = self.gamma {
            for c in &r.chains {
                if c.gamma != g {
                    out.push(format!(
                        "gamma ({}): expected {g}, computed {}",
                        c.method, c.gamma
                    ));
                }
            }
        }
        out
    }
}

pub struct CorpusEntry {
    pub name: String,
    pub ring: Arc<FiniteRing>,
    pub expect: Expectations,
}

/// Group algebra of a cyclic group of order `n` over the prime field F_p:
/// basis indexed by group elements, products add indices mod `n`.
pub fn cyclic_group_algebra(p: u64, n: usize) -> Result<Arc<FiniteRing>> {
    if n == 0 {
        bail!("the group must have at least one element");
    }
    let mut mul = vec![vec![vec![0i64; n]; n]; n];
    for i in 0..n {
        for j in 0..n {
            mul[i][j][(i + j) % n] = 1;
        }
    }
    let mut unit = vec![0i64; n];
    unit[0] = 1;
    let def = RingDef { name: format!("F{p}[C{n}]"), moduli: vec![p; n], unit, mul };
    Ok(FiniteRing::new(&def)?)
}

/// Depth of bracket nesting, counting both `()` and `[]`.
fn split_top_level_products(s: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0usize;
    let mut start = 0usize;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => depth = depth.saturating_sub(1),
            'x' if depth == 0 => {
                parts.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&s[start..]);
    parts
}

fn parse_digits(s: &str) -> (&str, &str) {
    let end = s.find(|c: char| !c.is_ascii_digit()).unwrap_or(s.len());
    (&s[..end], &s[end..])
}

fn parse_atom(s: &str) -> Result<Arc<FiniteRing>> {
    if let Some(inner) = s.strip_prefix('(').and_then(|t| t.strip_suffix(')')) {
        return parse_expr_normalized(inner);
    }
    if let Some(rest) = s.strip_prefix('Z') {
        let (d, tail) = parse_digits(rest);
        if d.is_empty() || !tail.is_empty() {
            bail!("cannot parse cyclic ring from {s:?}");
        }
        return Ok(construct::cyclic(d.parse()?)?);
    }
    for (tag, kind) in [('M', "matrix"), ('T', "triangular")] {
        if let Some(rest) = s.strip_prefix(tag) {
            let (d, tail) = parse_digits(rest);
            let inner = tail
                .strip_prefix('(')
                .and_then(|t| t.strip_suffix(')'))
                .ok_or_else(|| anyhow!("{kind} ring needs a parenthesized base in {s:?}"))?;
            if d.is_empty() {
                bail!("{kind} ring needs a size in {s:?}");
            }
            let base = parse_expr_normalized(inner)?;
            let n: usize = d.parse()?;
            return Ok(match tag {
                'M' => construct::matrix_ring(&base, n)?,
                _ => construct::triangular_ring(&base, n)?,
            });
        }
    }
    if let Some(rest) = s.strip_prefix('F') {
        let (d, tail) = parse_digits(rest);
        if d.is_empty() {
            bail!("field needs a characteristic in {s:?}");
        }
        let p: u64 = d.parse()?;
        if tail.is_empty() {
            return Ok(construct::prime_field(p)?);
        }
        if let Some(exp) = tail.strip_prefix("[x]/(x^").and_then(|t| t.strip_suffix(')')) {
            let field = construct::prime_field(p)?;
            return Ok(construct::truncated_polynomial(&field, exp.parse()?)?);
        }
        if let Some(n) = tail.strip_prefix("[C").and_then(|t| t.strip_suffix(']')) {
            return cyclic_group_algebra(p, n.parse()?);
        }
    }
    bail!("cannot parse ring expression {s:?}")
}

fn parse_expr_normalized(s: &str) -> Result<Arc<FiniteRing>> {
    let parts = split_top_level_products(s);
    let mut rings = parts.iter().map(|p| parse_atom(p)).collect::<Result<Vec<_>>>()?;
    let mut acc = rings.remove(0);
    for r in rings {
        acc = construct::product(&acc, &r)?;
    }
    Ok(acc)
}

/// Build a ring from a constructor expression. Products split on top-level
/// `x`; atoms are `Zn`, `Fp`, `Fp[x]/(x^m)`, `Fp[Cn]`, `Mn(expr)`,
/// `Tn(expr)`, and parenthesized expressions. Spaces, underscores, and a
/// `Z/n` slash are tolerated.
pub fn parse_expr(src: &str) -> Result<Arc<FiniteRing>> {
    let mut s: String = src.chars().filter(|c| !c.is_whitespace() && *c != '_').collect();
    if let Some(rest) = s.strip_prefix("Z/") {
        s = format!("Z{rest}");
    }
    parse_expr_normalized(&s).with_context(|| format!("in ring expression {src:?}"))
}

fn quiver_a3() -> Result<Arc<FiniteRing>> {
    // Path algebra of 1 -> 2 -> 3 over F2 with the composite path forced to
    // zero: five paths survive, so the order is 32.
    Ok(construct::path_algebra(&QuiverDef {
        field: 2,
        vertices: 3,
        arrows: vec![(0, 1), (1, 2)],
        zero_relations: vec![vec![0, 1]],
    })?)
}

/// The twelve shipped rings with their pinned invariants.
pub fn builtin_corpus() -> Result<Vec<CorpusEntry>> {
    let pins = |qmax: u64,
                qtot: u64,
                ideals: usize,
                dense: usize,
                sh: bool,
                reg: bool| Expectations {
        qmax_order: Some(qmax),
        qtot_order: Some(qtot),
        gamma: Some(0),
        ideals: Some(ideals),
        dense_ideals: Some(dense),
        semihereditary: Some(sh),
        regular: Some(reg),
        condition_c: Some(true),
    };
    let mut out = vec![
        CorpusEntry { name: "F2".into(), ring: parse_expr("F2")?, expect: pins(2, 2, 2, 1, true, true) },
        CorpusEntry { name: "F3".into(), ring: parse_expr("F3")?, expect: pins(3, 3, 2, 1, true, true) },
        CorpusEntry { name: "Z4".into(), ring: parse_expr("Z4")?, expect: pins(4, 4, 3, 1, false, false) },
        CorpusEntry { name: "Z6".into(), ring: parse_expr("Z6")?, expect: pins(6, 6, 4, 1, true, true) },
        CorpusEntry { name: "F2xF2".into(), ring: parse_expr("F2xF2")?, expect: pins(4, 4, 4, 1, true, true) },
        CorpusEntry { name: "F2xF3".into(), ring: parse_expr("F2xF3")?, expect: pins(6, 6, 4, 1, true, true) },
        CorpusEntry { name: "M2(F2)".into(), ring: parse_expr("M2(F2)")?, expect: pins(16, 16, 5, 1, true, true) },
        CorpusEntry { name: "T2(F2)".into(), ring: parse_expr("T2(F2)")?, expect: pins(16, 16, 7, 2, true, false) },
        CorpusEntry { name: "T2(F3)".into(), ring: parse_expr("T2(F3)")?, expect: pins(81, 81, 8, 2, true, false) },
        CorpusEntry { name: "F2[x]/(x^2)".into(), ring: parse_expr("F2[x]/(x^2)")?, expect: pins(4, 4, 3, 1, false, false) },
        CorpusEntry { name: "F2[C2]".into(), ring: parse_expr("F2[C2]")?, expect: pins(4, 4, 3, 1, false, false) },
    ];
    out.push(CorpusEntry {
        name: "A3quiver".into(),
        ring: quiver_a3()?,
        expect: pins(32, 32, 23, 2, false, false),
    });
    Ok(out)
}

/// One entry of a corpus file: a name, exactly one definition (constructor
/// expression, structure-constant table, or quiver), and optional pins.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FileEntry {
    name: String,
    #[serde(default)]
    expr: Option<String>,
    #[serde(default)]
    table: Option<RingDef>,
    #[serde(default)]
    quiver: Option<QuiverDef>,
    #[serde(default)]
    expect: Expectations,
}

/// Load a corpus from a JSON file: an array of entries as in `FileEntry`.
pub fn load_corpus(path: &std::path::Path) -> Result<Vec<CorpusEntry>> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading corpus file {}", path.display()))?;
    let entries: Vec<FileEntry> = serde_json::from_str(&text)
        .with_context(|| format!("parsing corpus file {}", path.display()))?;
    let mut out = Vec::new();
    for e in entries {
        let defined = [e.expr.is_some(), e.table.is_some(), e.quiver.is_some()]
            .iter()
            .filter(|&&b| b)
            .count();
        if defined != 1 {
            bail!("entry {:?} must define exactly one of expr, table, quiver", e.name);
        }
        let ring = if let Some(x) = &e.expr {
            parse_expr(x).with_context(|| format!("entry {:?}", e.name))?
        } else if let Some(t) = &e.table {
            FiniteRing::new(t).with_context(|| format!("entry {:?}", e.name))?
        } else {
            construct::path_algebra(e.quiver.as_ref().unwrap())
                .with_context(|| format!("entry {:?}", e.name))?
        };
        out.push(CorpusEntry { name: e.name, ring, expect: e.expect });
    }
    Ok(out)
}

#[cfg(test)]
mod test {
    use super::*;

    #[test]
    fn expressions_build_the_advertised_rings() {
        assert_eq!(parse_expr("Z/4").unwrap().order(), 4);
        assert_eq!(parse_expr("F2 x F3").unwrap().order(), 6);
        assert_eq!(parse_expr("T2(F_3)").unwrap().order(), 27);
        assert_eq!(parse_expr("M2(F2)").unwrap().order(), 16);
        assert_eq!(parse_expr("F2[x]/(x^2)").unwrap().order(), 4);
        assert_eq!(parse_expr("F2[C2]").unwrap().order(), 4);
        assert_eq!(parse_expr("M2(F2)xZ4").unwrap().order(), 64);
        assert!(parse_expr("Q8").is_err());
    }

    #[test]
    fn builtin_corpus_has_twelve_validated_entries() {
        let c = builtin_corpus().unwrap();
        assert_eq!(c.len(), 12);
        assert_eq!(c.iter().filter(|e| e.ring.order() == 32).count(), 1);
    }
}
