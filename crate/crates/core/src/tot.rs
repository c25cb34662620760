//! The total right quotient ring, computed three independent ways: an
//! elementwise refinement chain, a filter chain, and a brute-force search
//! over all intermediate subrings of the maximal quotient ring. The three
//! must agree, and `verify_suite` checks the supporting lemmas about the
//! chains on a concrete ring, clause by clause.
//!
//! Both chains start at the full carrier of the maximal quotient ring and
//! descend. The elementwise step keeps the elements `s` with
//! `(R : s lambda(r)) . S = S` for every `r`; the filter step localizes at
//! `{I : iota(I) . Q = Q}`. Chains are strictly decreasing subsets of a
//! finite set, so they stabilize at some finite index `gamma`; transfinite
//! steps never arise.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::Error;
use crate::ideals::{
    check_gabriel_axioms, filter_of_extension, is_flat_left, is_right_semihereditary,
    is_subset_sorted, lambek_filter, singular_submodule, GabrielFilter, IdealLattice,
};
use crate::module::{
    extension_as_left_module, extension_as_right_module, is_submodule_set, quotient_module,
    tensor, FiniteModule, Submodule,
};
use crate::par;
use crate::quotient::{
    build_qmax, is_kasch, is_ring_epimorphism, module_of_quotients, perfectness_of_filter,
    ring_of_quotients, PerfectnessReport, Qmax, TorsionTheory,
};
use crate::ring::{
    additive_span, enumerate_intermediate_subrings, is_subring_set, is_von_neumann_regular,
    realize_subring, regular_elements, subring_generated, FiniteRing, RealizedSubring, Subring,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Morita,
    Filter,
    Shortcut,
    Oracle,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Morita => "morita",
            Method::Filter => "filter",
            Method::Shortcut => "shortcut",
            Method::Oracle => "oracle",
        }
    }
}

/// One member of a descending chain, with the evidence collected about its
/// extension `R -> Q`.
#[derive(Clone)]
pub struct ChainStep {
    pub subring: Subring,
    /// `{I : iota(I) . Q = Q}`, the filter whose localization is the next
    /// member of the filter chain.
    pub filter: GabrielFilter,
    /// First broken filter axiom, if any.
    pub gabriel_issue: Option<String>,
    pub flat_left: bool,
    pub epi: bool,
    pub perfect_extension: bool,
    /// Perfect and the filter round-trips: localizing `filter` returns this
    /// step itself.
    pub filter_perfect: bool,
}

#[derive(Clone)]
pub struct Chain {
    pub method: Method,
    pub steps: Vec<ChainStep>,
    /// Index of the first repeated step.
    pub gamma: usize,
}

impl Chain {
    pub fn fixpoint(&self) -> &ChainStep {
        self.steps.last().expect("a chain has at least its starting step")
    }
}

/// Enumeration budgets. `ideals` caps the ideal lattices, `subrings` the
/// intermediate-subring searches.
#[derive(Clone, Copy, Debug)]
pub struct Caps {
    pub ideals: usize,
    pub subrings: usize,
}

impl Default for Caps {
    fn default() -> Caps {
        Caps { ideals: 100_000, subrings: 10_000 }
    }
}

/// Does `iota(I) . S` additively span the subset `S` of the carrier? `S`
/// must be a subring containing the image of `lambda`, so products of ideal
/// generators with members of `S` stay inside `S` and generate the whole
/// span.
fn ideal_spans_subset(
    carrier: &FiniteRing,
    lambda_gens: &[u64],
    s: &[u64],
) -> bool {
    let mut prods = Vec::with_capacity(lambda_gens.len() * s.len());
    for &ig in lambda_gens {
        for &t in s {
            prods.push(carrier.mul(ig, t));
        }
    }
    additive_span(carrier, &prods).len() == s.len()
}

/// One elementwise refinement step: the elements `s` of `S` such that
/// `(R : s lambda(r))` spans `S` for every `r` in the base ring. The result
/// is again a subring containing `lambda(R)`; failure of that is fatal, not
/// a diagnostic, because it would falsify the refinement lemma.
pub fn morita_prime(qmax: &Qmax, lat: &IdealLattice, s: &Subring) -> Result<Subring, Error> {
    let carrier = &qmax.ring;
    let base = &qmax.lambda.base;
    let lam: Vec<u64> = base.elements().map(|r| qmax.lambda.apply(r)).collect();
    let spans: Vec<bool> = par::map_range(lat.len(), |i| {
        let gens: Vec<u64> = lat.ideals[i].gens.iter().map(|&g| qmax.lambda.apply(g)).collect();
        ideal_spans_subset(carrier, &gens, &s.elements)
    });
    let keep: Vec<bool> = par::map_slice(&s.elements, |&x| {
        lam.iter().all(|&lr| spans[qmax.colon_index[carrier.mul(x, lr) as usize]])
    });
    let elements: Vec<u64> =
        s.elements.iter().zip(&keep).filter(|(_, &k)| k).map(|(&e, _)| e).collect();
    is_subring_set(carrier, &elements)
        .map_err(|e| Error::Internal(format!("refinement step left a non-subring: {e}")))?;
    for &im in &qmax.lambda.image_set {
        if elements.binary_search(&im).is_err() {
            return Err(Error::Internal(
                "refinement step dropped an element of the base ring".into(),
            ));
        }
    }
    Ok(Subring { ring: carrier.clone(), elements, gens: Vec::new() })
}

/// Realize a chain member and collect the evidence about its extension: left
/// flatness, the epimorphism test, the attached filter, and that filter's
/// localization inside the carrier.
fn step_evidence(
    qmax: &Qmax,
    lat: &IdealLattice,
    cur: &Subring,
) -> Result<(ChainStep, Vec<u64>), Error> {
    let rz = realize_subring(&qmax.lambda, cur)?;
    let flat_left = is_flat_left(&rz.ext, lat);
    let epi = is_ring_epimorphism(&rz.ext);
    let filter = filter_of_extension(&rz.ext, lat);
    let gabriel_issue = check_gabriel_axioms(lat, &filter).err();
    let localized: Vec<u64> = qmax
        .ring
        .elements()
        .filter(|&q| filter.contains(qmax.colon_index[q as usize]))
        .collect();
    let round_trip = localized == cur.elements;
    let step = ChainStep {
        subring: cur.clone(),
        filter,
        gabriel_issue,
        flat_left,
        epi,
        perfect_extension: flat_left && epi,
        filter_perfect: flat_left && epi && round_trip,
    };
    Ok((step, localized))
}

/// The elementwise chain: start at the full carrier and refine with
/// `morita_prime` until nothing changes. Always well defined; per-step
/// evidence is recorded but never aborts the descent.
pub fn morita_chain(qmax: &Qmax, lat: &IdealLattice) -> Result<Chain, Error> {
    let mut steps = Vec::new();
    let mut cur = Subring::whole(&qmax.ring);
    loop {
        let (step, _) = step_evidence(qmax, lat, &cur)?;
        steps.push(step);
        let next = morita_prime(qmax, lat, &cur)?;
        if next.elements == cur.elements {
            break;
        }
        debug_assert!(next.elements.len() < cur.elements.len());
        cur = next;
    }
    let gamma = steps.len() - 1;
    Ok(Chain { method: Method::Morita, steps, gamma })
}

/// The filter chain: localize at the filter of the current step, starting
/// from the full carrier, until the localization returns the step itself.
/// Every step must be flat on the left; a non-flat step makes the attached
/// torsion theory non-hereditary and the run aborts with `FlatnessFailure`.
pub fn simplified_chain(qmax: &Qmax, lat: &IdealLattice) -> Result<Chain, Error> {
    let mut steps: Vec<ChainStep> = Vec::new();
    let mut cur = Subring::whole(&qmax.ring);
    loop {
        let (step, localized) = step_evidence(qmax, lat, &cur)?;
        let flat = step.flat_left;
        let issue = step.gabriel_issue.clone();
        let fixed = localized == cur.elements;
        steps.push(step);
        if !flat {
            return Err(Error::FlatnessFailure { step: steps.len() - 1 });
        }
        if let Some(e) = issue {
            return Err(Error::Internal(format!(
                "filter of a flat extension fails a filter axiom: {e}"
            )));
        }
        if fixed {
            break;
        }
        is_subring_set(&qmax.ring, &localized)
            .map_err(|e| Error::Internal(format!("localization is not a subring: {e}")))?;
        cur = Subring { ring: qmax.ring.clone(), elements: localized, gens: Vec::new() };
    }
    let gamma = steps.len() - 1;
    Ok(Chain { method: Method::Filter, steps, gamma })
}

/// One-pass formula for the total quotient ring of a right semihereditary
/// ring: the elements whose colon spans the whole carrier. Claimed only in
/// the semihereditary case, so anything else is a precondition failure.
pub fn qtot_shortcut(qmax: &Qmax, lat: &IdealLattice) -> Result<Subring, Error> {
    if !is_right_semihereditary(lat) {
        return Err(Error::Precondition(
            "the one-pass formula is only valid for right semihereditary rings".into(),
        ));
    }
    let filter = filter_of_extension(&qmax.lambda, lat);
    let elements: Vec<u64> = qmax
        .ring
        .elements()
        .filter(|&q| filter.contains(qmax.colon_index[q as usize]))
        .collect();
    is_subring_set(&qmax.ring, &elements)?;
    Ok(Subring { ring: qmax.ring.clone(), elements, gens: Vec::new() })
}

/// The copy of the base ring inside the carrier.
pub fn lambda_image(qmax: &Qmax) -> Subring {
    Subring {
        ring: qmax.ring.clone(),
        elements: qmax.lambda.image_set.clone(),
        gens: qmax.lambda.images.clone(),
    }
}

/// All subrings between `lambda(R)` and the full carrier.
pub fn intermediate_subrings(qmax: &Qmax, cap: usize) -> Result<Vec<Subring>, Error> {
    enumerate_intermediate_subrings(&lambda_image(qmax), &Subring::whole(&qmax.ring), cap)
}

/// The brute-force oracle over a precomputed list of intermediate subrings:
/// keep the ones whose extension is flat and epimorphic, check that the
/// family is directed (pairwise joins stay in the family), and return its
/// maximum together with the whole family.
pub fn brute_force_qtot_with(
    qmax: &Qmax,
    lat: &IdealLattice,
    subrings: &[Subring],
) -> Result<(Subring, Vec<Subring>), Error> {
    let verdicts: Vec<Result<bool, Error>> = par::map_slice(subrings, |s| {
        let rz = realize_subring(&qmax.lambda, s)?;
        Ok(is_flat_left(&rz.ext, lat) && is_ring_epimorphism(&rz.ext))
    });
    let mut family: Vec<Subring> = Vec::new();
    for (s, v) in subrings.iter().zip(verdicts) {
        if v? {
            family.push(s.clone());
        }
    }
    let keys: std::collections::HashSet<&[u64]> =
        family.iter().map(|s| s.elements.as_slice()).collect();
    for i in 0..family.len() {
        for j in (i + 1)..family.len() {
            let mut seeds = family[i].elements.clone();
            seeds.extend_from_slice(&family[j].elements);
            let join = subring_generated(&qmax.ring, &seeds);
            if !keys.contains(join.elements.as_slice()) {
                return Err(Error::Directedness(format!(
                    "the join of members of orders {} and {} is not perfect",
                    family[i].order(),
                    family[j].order()
                )));
            }
        }
    }
    let max = family
        .iter()
        .max_by_key(|s| s.elements.len())
        .expect("the base ring itself is always a perfect member")
        .clone();
    for s in &family {
        if !is_subset_sorted(&s.elements, &max.elements) {
            return Err(Error::Directedness(format!(
                "a member of order {} is not contained in the maximum of order {}",
                s.order(),
                max.order()
            )));
        }
    }
    Ok((max, family))
}

pub fn brute_force_qtot(qmax: &Qmax, lat: &IdealLattice, cap: usize) -> Result<Subring, Error> {
    let subrings = intermediate_subrings(qmax, cap)?;
    Ok(brute_force_qtot_with(qmax, lat, &subrings)?.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// Every intermediate subring flat as a left module over the base.
    C,
    /// Every intermediate subring flat as a right module over the base.
    CPrime,
}

impl Side {
    pub fn as_str(self) -> &'static str {
        match self {
            Side::C => "C",
            Side::CPrime => "C'",
        }
    }
}

#[derive(Clone)]
pub struct ConditionReport {
    pub side: Side,
    pub holds: bool,
    /// First intermediate subring failing the flatness test.
    pub witness: Option<Subring>,
    pub examined: usize,
}

/// Test condition (C) or (C') over a precomputed list of intermediate
/// subrings. The right-sided condition is checked through the opposite
/// ring: `S` is flat on the right over `R` exactly when `S^op` is flat on
/// the left over `R^op`.
pub fn condition_report_with(
    qmax: &Qmax,
    lat: &IdealLattice,
    subrings: &[Subring],
    side: Side,
    cap: usize,
) -> Result<ConditionReport, Error> {
    let op_lat = match side {
        Side::C => None,
        Side::CPrime => Some(IdealLattice::build(&qmax.lambda.base.opposite(), cap)?),
    };
    let verdicts: Vec<Result<bool, Error>> = par::map_slice(subrings, |s| {
        let rz = realize_subring(&qmax.lambda, s)?;
        Ok(match side {
            Side::C => is_flat_left(&rz.ext, lat),
            Side::CPrime => is_flat_left(&rz.ext.opposite(), op_lat.as_ref().unwrap()),
        })
    });
    let mut witness = None;
    for (s, v) in subrings.iter().zip(verdicts) {
        if !v? {
            witness = Some(s.clone());
            break;
        }
    }
    Ok(ConditionReport { side, holds: witness.is_none(), witness, examined: subrings.len() })
}

pub fn condition_report(
    qmax: &Qmax,
    lat: &IdealLattice,
    side: Side,
    cap: usize,
) -> Result<ConditionReport, Error> {
    let subrings = intermediate_subrings(qmax, cap)?;
    condition_report_with(qmax, lat, &subrings, side, cap)
}

/// Everything the laboratory computes about one ring.
pub struct Analysis {
    pub ring: Arc<FiniteRing>,
    pub lat: IdealLattice,
    pub qmax: Qmax,
    /// Ideal lattice of the carrier ring itself.
    pub carrier_lat: IdealLattice,
    pub morita: Chain,
    /// The filter chain, or the abort that condition (C) failing forced.
    pub filter: Result<Chain, Error>,
    pub oracle: Subring,
    pub perfect_family: Vec<Subring>,
    pub intermediates: Vec<Subring>,
    pub cond_c: ConditionReport,
    pub cond_c_prime: ConditionReport,
    /// Present exactly when the ring is right semihereditary.
    pub shortcut: Option<Subring>,
    pub semihereditary: bool,
    pub regular: bool,
    pub commutative: bool,
    pub nonsingular: bool,
    /// The carrier has no proper dense right ideals.
    pub carrier_kasch: bool,
    pub qmax_semisimple: bool,
    pub lambek_perfectness: PerfectnessReport,
}

pub fn analyze(ring: &Arc<FiniteRing>, caps: &Caps) -> Result<Analysis, Error> {
    let lat = IdealLattice::build(ring, caps.ideals)?;
    let qmax = build_qmax(ring, &lat)?;
    let carrier_lat = IdealLattice::build(&qmax.ring, caps.ideals)?;
    let morita = morita_chain(&qmax, &lat)?;
    let filter = simplified_chain(&qmax, &lat);
    let intermediates = intermediate_subrings(&qmax, caps.subrings)?;
    let (oracle, perfect_family) = brute_force_qtot_with(&qmax, &lat, &intermediates)?;
    let cond_c = condition_report_with(&qmax, &lat, &intermediates, Side::C, caps.ideals)?;
    let cond_c_prime =
        condition_report_with(&qmax, &lat, &intermediates, Side::CPrime, caps.ideals)?;
    let semihereditary = is_right_semihereditary(&lat);
    let shortcut = if semihereditary { Some(qtot_shortcut(&qmax, &lat)?) } else { None };
    let lambek_perfectness = perfectness_of_filter(&qmax, &lat, &lambek_filter(&lat))?;
    Ok(Analysis {
        regular: is_von_neumann_regular(ring),
        commutative: ring.is_commutative(),
        nonsingular: singular_submodule(&lat.regular, &lat).is_zero(),
        carrier_kasch: is_kasch(&carrier_lat),
        qmax_semisimple: crate::ideals::is_semisimple(&carrier_lat),
        ring: ring.clone(),
        lat,
        qmax,
        carrier_lat,
        morita,
        filter,
        oracle,
        perfect_family,
        intermediates,
        cond_c,
        cond_c_prime,
        shortcut,
        semihereditary,
        lambek_perfectness,
    })
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct Clause {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct VerificationReport {
    pub ring: String,
    pub clauses: Vec<Clause>,
}

impl VerificationReport {
    pub fn pass(&self) -> bool {
        self.clauses.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> Vec<&Clause> {
        self.clauses.iter().filter(|c| !c.pass).collect()
    }

    fn add(&mut self, name: &'static str, pass: bool, detail: impl Into<String>) {
        self.clauses.push(Clause { name, pass, detail: detail.into() });
    }

    fn run(
        &mut self,
        name: &'static str,
        f: impl FnOnce() -> Result<(bool, String), Error>,
    ) {
        match f() {
            Ok((pass, detail)) => self.add(name, pass, detail),
            Err(e) => self.add(name, false, format!("suite error: {e}")),
        }
    }
}

/// The torsion theories along the filter chain: the dense filter first, then
/// the filter attached to each step. Index `i` is the theory whose
/// localization produced step `i`; the final entry is the fixpoint's own
/// filter.
fn chain_filters(lat: &IdealLattice, chain: &Chain) -> Vec<GabrielFilter> {
    let mut taus = vec![lambek_filter(lat)];
    for s in &chain.steps {
        taus.push(s.filter.clone());
    }
    taus
}

fn subset_usize(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|x| b.binary_search(x).is_ok())
}

/// `Q_beta / Q_alpha` as a module over the base ring, for nested subsets of
/// the carrier.
fn subquotient_module(
    qmax: &Qmax,
    outer: &RealizedSubring,
    inner: &[u64],
) -> Result<FiniteModule, Error> {
    let m = extension_as_right_module(&outer.ext);
    let mut back: HashMap<u64, u64> = HashMap::new();
    for (i, &c) in outer.to_carrier.iter().enumerate() {
        back.insert(c, i as u64);
    }
    let mut elements: Vec<u64> = inner
        .iter()
        .map(|&c| {
            back.get(&c).copied().ok_or_else(|| {
                Error::Internal("inner chain member escapes the outer one".into())
            })
        })
        .collect::<Result<_, _>>()?;
    elements.sort_unstable();
    if !is_submodule_set(&m, &elements) {
        return Err(Error::Internal("a chain member is not a module over the base".into()));
    }
    let _ = qmax;
    let sub = Submodule { elements, gens: Vec::new() };
    Ok(quotient_module(&m, &sub)?.module)
}

/// Machine check of the supporting lemmas on one analyzed ring. Failures are
/// report entries, never panics: a red clause is a finding.
pub fn verify_suite(a: &Analysis) -> VerificationReport {
    let mut rep = VerificationReport { ring: a.ring.name().to_string(), clauses: Vec::new() };
    let fc: Option<&Chain> = a.filter.as_ref().ok();
    let chains: Vec<&Chain> = std::iter::once(&a.morita).chain(fc).collect();

    // Chains descend, and so do their attached filters; every filter member
    // is dense.
    rep.run("chain_monotone", || {
        let lambek = lambek_filter(&a.lat);
        let mut ok = true;
        let mut detail = String::new();
        for c in &chains {
            for w in c.steps.windows(2) {
                if !is_subset_sorted(&w[1].subring.elements, &w[0].subring.elements)
                    || w[1].subring.elements.len() >= w[0].subring.elements.len()
                {
                    ok = false;
                    detail = format!("{} chain does not strictly descend", c.method.as_str());
                }
                if !subset_usize(&w[1].filter.members, &w[0].filter.members) {
                    ok = false;
                    detail = format!("{} chain filters do not descend", c.method.as_str());
                }
            }
            for s in &c.steps {
                if !subset_usize(&s.filter.members, &lambek.members) {
                    ok = false;
                    detail = format!("{} chain has a non-dense filter member", c.method.as_str());
                }
            }
        }
        if ok {
            detail = format!(
                "{} chain(s), gamma {}",
                chains.len(),
                chains.iter().map(|c| c.gamma.to_string()).collect::<Vec<_>>().join("/")
            );
        }
        Ok((ok, detail))
    });

    // Q_beta / Q_alpha is torsion for the earlier theory and torsion-free
    // for the later one.
    rep.run("quotient_torsion_duality", || {
        let Some(c) = fc else {
            return Ok((true, "filter chain unavailable, nothing to compare".into()));
        };
        let taus = chain_filters(&a.lat, c);
        let mut pairs = 0;
        for beta in 0..c.steps.len() {
            let outer = realize_subring(&a.qmax.lambda, &c.steps[beta].subring)?;
            for alpha in (beta + 1)..c.steps.len() {
                let q = subquotient_module(&a.qmax, &outer, &c.steps[alpha].subring.elements)?;
                let tt_beta = TorsionTheory::new(&a.lat, taus[beta].clone());
                let tt_alpha = TorsionTheory::new(&a.lat, taus[alpha].clone());
                if !tt_beta.is_torsion(&q) {
                    return Ok((false, format!("Q_{beta}/Q_{alpha} is not torsion at {beta}")));
                }
                if !tt_alpha.is_torsion_free(&q) {
                    return Ok((
                        false,
                        format!("Q_{beta}/Q_{alpha} is not torsion-free at {alpha}"),
                    ));
                }
                pairs += 1;
            }
        }
        Ok((true, format!("{pairs} pair(s) checked")))
    });

    // Q_alpha tensored with an earlier Q_beta collapses onto Q_beta.
    rep.run("tensor_collapse", || {
        let Some(c) = fc else {
            return Ok((true, "filter chain unavailable, nothing to compare".into()));
        };
        let mut pairs = 0;
        for alpha in 0..c.steps.len() {
            let rz_alpha = realize_subring(&a.qmax.lambda, &c.steps[alpha].subring)?;
            let right = extension_as_right_module(&rz_alpha.ext);
            for beta in 0..alpha {
                let rz_beta = realize_subring(&a.qmax.lambda, &c.steps[beta].subring)?;
                let left = extension_as_left_module(&rz_beta.ext);
                let t = tensor(&right, &left)?;
                if t.order() != c.steps[beta].subring.order() as u128 {
                    return Ok((
                        false,
                        format!(
                            "|Q_{alpha} (x) Q_{beta}| = {} but |Q_{beta}| = {}",
                            t.order(),
                            c.steps[beta].subring.order()
                        ),
                    ));
                }
                let mut prods = Vec::new();
                for &x in &c.steps[alpha].subring.elements {
                    for &y in &c.steps[beta].subring.elements {
                        prods.push(a.qmax.ring.mul(x, y));
                    }
                }
                if additive_span(&a.qmax.ring, &prods) != c.steps[beta].subring.elements {
                    return Ok((
                        false,
                        format!("the product span of Q_{alpha} Q_{beta} is not Q_{beta}"),
                    ));
                }
                pairs += 1;
            }
        }
        Ok((true, format!("{pairs} pair(s) checked")))
    });

    // The oracle's total quotient ring sits inside every chain member.
    rep.run("total_inside_chain", || {
        for c in &chains {
            for (i, s) in c.steps.iter().enumerate() {
                if !is_subset_sorted(&a.oracle.elements, &s.subring.elements) {
                    return Ok((
                        false,
                        format!("oracle escapes {} step {i}", c.method.as_str()),
                    ));
                }
            }
        }
        Ok((true, "oracle contained in every step".into()))
    });

    // Two chain theories are equal exactly when the earlier one is perfect.
    rep.run("filter_equality_iff_perfect", || {
        let Some(c) = fc else {
            return Ok((true, "filter chain unavailable, nothing to compare".into()));
        };
        let taus = chain_filters(&a.lat, c);
        let perfect: Vec<bool> = taus
            .iter()
            .map(|f| perfectness_of_filter(&a.qmax, &a.lat, f).map(|p| p.is_perfect()))
            .collect::<Result<_, _>>()?;
        for i in 0..taus.len() {
            for j in (i + 1)..taus.len() {
                let eq = taus[i] == taus[j];
                if eq != perfect[i] {
                    return Ok((
                        false,
                        format!(
                            "theories {i} and {j}: equal={eq} but perfect({i})={}",
                            perfect[i]
                        ),
                    ));
                }
            }
        }
        Ok((true, format!("{} theories compared", taus.len())))
    });

    // A chain member is a perfect extension exactly when it already is the
    // total quotient ring.
    rep.run("perfect_iff_total", || {
        for c in &chains {
            for (i, s) in c.steps.iter().enumerate() {
                let is_total = s.subring.elements == a.oracle.elements;
                if s.perfect_extension != is_total {
                    return Ok((
                        false,
                        format!(
                            "{} step {i}: perfect={} but equals-total={}",
                            c.method.as_str(),
                            s.perfect_extension,
                            is_total
                        ),
                    ));
                }
            }
        }
        Ok((true, "flags agree on every step".into()))
    });

    // Perfect theory makes its localization perfect, and a perfect
    // localization makes the next theory perfect.
    rep.run("perfectness_propagation", || {
        let Some(c) = fc else {
            return Ok((true, "filter chain unavailable, nothing to compare".into()));
        };
        let taus = chain_filters(&a.lat, c);
        for (alpha, s) in c.steps.iter().enumerate() {
            let tau_perfect =
                perfectness_of_filter(&a.qmax, &a.lat, &taus[alpha])?.is_perfect();
            if tau_perfect && !s.perfect_extension {
                return Ok((
                    false,
                    format!("theory {alpha} perfect but step {alpha} is not"),
                ));
            }
            let next_perfect =
                perfectness_of_filter(&a.qmax, &a.lat, &taus[alpha + 1])?.is_perfect();
            if s.perfect_extension && !next_perfect {
                return Ok((
                    false,
                    format!("step {alpha} perfect but theory {} is not", alpha + 1),
                ));
            }
        }
        Ok((true, format!("{} step(s) checked", c.steps.len())))
    });

    // The theory of a flat localization refines the theory that produced it.
    rep.run("localization_theory_smaller", || {
        let Some(c) = fc else {
            return Ok((true, "filter chain unavailable, nothing to compare".into()));
        };
        let taus = chain_filters(&a.lat, c);
        for (alpha, s) in c.steps.iter().enumerate() {
            if !subset_usize(&s.filter.members, &taus[alpha].members) {
                return Ok((
                    false,
                    format!("filter of step {alpha} is not inside theory {alpha}"),
                ));
            }
        }
        Ok((true, format!("{} step(s) checked", c.steps.len())))
    });

    // One-step localization of cyclic modules: kernel of the canonical map
    // is the torsion submodule, the module is torsion exactly when the
    // localization vanishes, and the cokernel is torsion.
    rep.run("localization_lemma", || {
        let mut taus = vec![lambek_filter(&a.lat)];
        if let Some(c) = fc {
            for s in &c.steps {
                if !taus.contains(&s.filter) {
                    taus.push(s.filter.clone());
                }
            }
        }
        let mut checked = 0;
        for f in &taus {
            let tt = TorsionTheory::new(&a.lat, f.clone());
            for i in 0..a.lat.len() {
                let ideal = &a.lat.ideals[i];
                let sub =
                    Submodule { elements: ideal.elements.clone(), gens: ideal.gens.clone() };
                let m = quotient_module(&a.lat.regular, &sub)?.module;
                let moq = module_of_quotients(&a.lat, f, &m)?;
                let t = tt.torsion_submodule(&m);
                if !t.set_eq(&moq.phi_kernel(&m)) {
                    return Ok((false, format!("kernel mismatch on cyclic module {i}")));
                }
                if tt.is_torsion(&m) != (moq.module.order() == 1) {
                    return Ok((false, format!("vanishing mismatch on cyclic module {i}")));
                }
                let coker = quotient_module(&moq.module, &moq.phi_image(&m))?.module;
                if !tt.is_torsion(&coker) {
                    return Ok((false, format!("cokernel not torsion on cyclic module {i}")));
                }
                checked += 1;
            }
        }
        Ok((true, format!("{checked} module/theory pair(s) checked")))
    });

    // Each chain member is torsion-free for its producing theory, and its
    // quotient by the base ring is torsion for it.
    rep.run("localization_closure", || {
        let Some(c) = fc else {
            return Ok((true, "filter chain unavailable, nothing to compare".into()));
        };
        let taus = chain_filters(&a.lat, c);
        for (alpha, s) in c.steps.iter().enumerate() {
            let rz = realize_subring(&a.qmax.lambda, &s.subring)?;
            let m = extension_as_right_module(&rz.ext);
            let tt = TorsionTheory::new(&a.lat, taus[alpha].clone());
            if !tt.is_torsion_free(&m) {
                return Ok((false, format!("step {alpha} is not torsion-free")));
            }
            let base = Submodule {
                elements: rz.ext.image_set.clone(),
                gens: rz.ext.images.clone(),
            };
            let q = quotient_module(&m, &base)?.module;
            if !tt.is_torsion(&q) {
                return Ok((false, format!("step {alpha} over the base is not torsion")));
            }
        }
        Ok((true, format!("{} step(s) checked", c.steps.len())))
    });

    // Under condition (C) the two constructions agree step by step.
    rep.run("elementwise_matches_filter", || {
        if !a.cond_c.holds {
            return Ok((true, "condition (C) fails, stepwise agreement not claimed".into()));
        }
        let Some(c) = fc else {
            return Ok((
                false,
                "condition (C) holds but the filter chain aborted".into(),
            ));
        };
        if c.steps.len() != a.morita.steps.len() {
            return Ok((
                false,
                format!(
                    "lengths differ: filter {} vs elementwise {}",
                    c.steps.len(),
                    a.morita.steps.len()
                ),
            ));
        }
        for (i, (x, y)) in c.steps.iter().zip(&a.morita.steps).enumerate() {
            if x.subring.elements != y.subring.elements {
                return Ok((false, format!("chains differ at step {i}")));
            }
        }
        Ok((true, format!("both chains agree on all {} step(s)", c.steps.len())))
    });

    // Both fixpoints, the oracle, and (when defined) the one-pass formula
    // give the same carrier subset.
    rep.run("construction_agreement", || {
        if a.morita.fixpoint().subring.elements != a.oracle.elements {
            return Ok((false, "elementwise fixpoint differs from the oracle".into()));
        }
        if let Some(c) = fc {
            if c.fixpoint().subring.elements != a.oracle.elements {
                return Ok((false, "filter fixpoint differs from the oracle".into()));
            }
        }
        if let Some(sc) = &a.shortcut {
            if sc.elements != a.oracle.elements {
                return Ok((false, "one-pass formula differs from the oracle".into()));
            }
        }
        Ok((true, format!("all methods give order {}", a.oracle.order())))
    });

    // Semihereditary rings finish in at most one step.
    rep.run("semihereditary_one_step", || {
        if !a.semihereditary {
            return Ok((true, "not semihereditary, nothing to check".into()));
        }
        for c in &chains {
            if c.gamma > 1 {
                return Ok((
                    false,
                    format!("{} chain has gamma {}", c.method.as_str(), c.gamma),
                ));
            }
        }
        if a.shortcut.is_none() {
            return Ok((false, "one-pass formula missing".into()));
        }
        Ok((true, "gamma <= 1 and the one-pass formula agrees".into()))
    });

    // Regular rings are their own total quotient ring.
    rep.run("regular_collapse", || {
        if !a.regular {
            return Ok((true, "not regular, nothing to check".into()));
        }
        if a.oracle.elements != a.qmax.lambda.image_set {
            return Ok((false, "total quotients of a regular ring exceed the ring".into()));
        }
        Ok((true, "total quotients equal the base ring".into()))
    });

    // Every two-sided non-zero-divisor is already a unit, so the classical
    // quotient ring is the ring itself and sits inside the total one.
    rep.run("classical_quotients_trivial", || {
        let reg = regular_elements(&a.ring);
        if !reg.all_units {
            return Ok((false, "a regular element is not a unit".into()));
        }
        if !a
            .qmax
            .lambda
            .image_set
            .iter()
            .all(|e| a.oracle.elements.binary_search(e).is_ok())
        {
            return Ok((false, "the base ring escapes the total quotient ring".into()));
        }
        Ok((true, format!("{} regular element(s), all units", reg.elements.len())))
    });

    // Every perfect extension found by the oracle round-trips through its
    // filter: the filter satisfies the axioms and localizing it returns the
    // same subring.
    rep.run("perfect_round_trip", || {
        for (i, s) in a.perfect_family.iter().enumerate() {
            let rz = realize_subring(&a.qmax.lambda, s)?;
            let f = filter_of_extension(&rz.ext, &a.lat);
            if let Err(e) = check_gabriel_axioms(&a.lat, &f) {
                return Ok((false, format!("member {i}: {e}")));
            }
            let localized = ring_of_quotients(&a.qmax, &a.lat, &f)?;
            if !localized.set_eq(s) {
                return Ok((false, format!("member {i} does not round-trip")));
            }
        }
        Ok((true, format!("{} member(s) round-trip", a.perfect_family.len())))
    });

    // For every flat extension found, the tensor-kernel description of
    // torsion agrees with the filter-membership description on every cyclic
    // module.
    rep.run("torsion_kernel_agreement", || {
        let mut exts: Vec<&Subring> = vec![];
        let mut seen: std::collections::HashSet<&[u64]> = std::collections::HashSet::new();
        for s in a
            .perfect_family
            .iter()
            .chain(chains.iter().flat_map(|c| c.steps.iter().map(|s| &s.subring)))
        {
            if seen.insert(s.elements.as_slice()) {
                exts.push(s);
            }
        }
        let mut checked = 0;
        for s in exts {
            let rz = realize_subring(&a.qmax.lambda, s)?;
            if !is_flat_left(&rz.ext, &a.lat) {
                continue;
            }
            let f = filter_of_extension(&rz.ext, &a.lat);
            let left = extension_as_left_module(&rz.ext);
            for i in 0..a.lat.len() {
                let ideal = &a.lat.ideals[i];
                let sub =
                    Submodule { elements: ideal.elements.clone(), gens: ideal.gens.clone() };
                let m = quotient_module(&a.lat.regular, &sub)?.module;
                let t = tensor(&m, &left)?;
                let unit = rz.ring.unit();
                for x in m.elements() {
                    let in_kernel = t.pure(&m, x, &left, unit).iter().all(|&c| c == 0);
                    let by_filter = f.contains(a.lat.annihilator(&m, x));
                    if in_kernel != by_filter {
                        return Ok((
                            false,
                            format!(
                                "cyclic module {i}, element {x}: kernel={in_kernel} filter={by_filter}"
                            ),
                        ));
                    }
                }
                checked += 1;
            }
        }
        Ok((true, format!("{checked} flat extension/module pair(s) checked")))
    });

    // For a right nonsingular ring, the dense-ideal theory is perfect
    // exactly when the maximal quotient ring is semisimple.
    rep.run("nonsingular_semisimple", || {
        if !a.nonsingular {
            return Ok((true, "singular ring, nothing to check".into()));
        }
        let perfect = a.lambek_perfectness.is_perfect();
        if perfect != a.qmax_semisimple {
            return Ok((
                false,
                format!("dense theory perfect={perfect}, carrier semisimple={}", a.qmax_semisimple),
            ));
        }
        Ok((true, format!("both sides {}", perfect)))
    });

    // Chains stabilize within the carrier's size, and the fixpoints are
    // perfect extensions.
    rep.run("stable_perfect_fixpoint", || {
        for c in &chains {
            if c.gamma + 1 > a.qmax.ring.order() as usize {
                return Ok((false, format!("{} chain too long", c.method.as_str())));
            }
            let f = c.fixpoint();
            if !f.perfect_extension {
                return Ok((
                    false,
                    format!("{} fixpoint is not a perfect extension", c.method.as_str()),
                ));
            }
            if !f.filter_perfect {
                return Ok((
                    false,
                    format!("{} fixpoint filter does not round-trip", c.method.as_str()),
                ));
            }
        }
        Ok((true, "fixpoints are perfect and reached within bounds".into()))
    });

    rep
}

#[cfg(test)]
mod test {
    use super::*;
    use crate::construct;

    fn full(ring: &Arc<FiniteRing>) -> Analysis {
        analyze(ring, &Caps::default()).unwrap()
    }

    fn assert_suite(a: &Analysis) {
        let rep = verify_suite(a);
        assert!(
            rep.pass(),
            "{}: failing clauses {:?}",
            rep.ring,
            rep.failures()
        );
    }

    #[test]
    fn triangular_ring_expands_to_the_full_matrix_ring() {
        let f2 = construct::prime_field(2).unwrap();
        let t2 = construct::triangular_ring(&f2, 2).unwrap();
        let a = full(&t2);
        assert_eq!(a.morita.gamma, 0);
        assert_eq!(a.morita.fixpoint().subring.order(), 16);
        let filter = a.filter.as_ref().unwrap();
        assert_eq!(filter.gamma, 0);
        assert_eq!(a.oracle.order(), 16);
        assert!(a.semihereditary);
        assert_eq!(a.shortcut.as_ref().unwrap().order(), 16);
        assert!(a.cond_c.holds);
        assert!(a.lambek_perfectness.is_perfect());
        assert!(a.qmax_semisimple);
        assert!(a.nonsingular);
        assert_suite(&a);
    }

    #[test]
    fn kasch_rings_are_their_own_total_quotients() {
        let f2 = construct::prime_field(2).unwrap();
        for ring in [
            construct::cyclic(4).unwrap(),
            construct::cyclic(6).unwrap(),
            construct::matrix_ring(&f2, 2).unwrap(),
            construct::truncated_polynomial(&f2, 2).unwrap(),
        ] {
            let a = full(&ring);
            assert_eq!(a.qmax.ring.order(), ring.order(), "{}", ring.name());
            assert_eq!(a.oracle.order(), ring.order(), "{}", ring.name());
            assert_eq!(a.morita.gamma, 0, "{}", ring.name());
            assert_eq!(a.filter.as_ref().unwrap().gamma, 0, "{}", ring.name());
            assert_suite(&a);
        }
    }

    #[test]
    fn regular_rings_collapse() {
        let f2 = construct::prime_field(2).unwrap();
        let f3 = construct::prime_field(3).unwrap();
        for ring in [
            construct::product(&f2, &f2).unwrap(),
            construct::product(&f2, &f3).unwrap(),
            construct::matrix_ring(&f2, 2).unwrap(),
        ] {
            let a = full(&ring);
            assert!(a.regular, "{}", ring.name());
            assert_eq!(a.oracle.elements, a.qmax.lambda.image_set, "{}", ring.name());
            assert!(a.semihereditary, "{}", ring.name());
            assert_eq!(
                a.shortcut.as_ref().unwrap().elements,
                a.oracle.elements,
                "{}",
                ring.name()
            );
            assert_suite(&a);
        }
    }

    #[test]
    fn commutative_rings_have_matching_condition_sides() {
        let f2 = construct::prime_field(2).unwrap();
        for ring in [
            construct::cyclic(4).unwrap(),
            construct::cyclic(6).unwrap(),
            construct::truncated_polynomial(&f2, 2).unwrap(),
            construct::product(&f2, &f2).unwrap(),
        ] {
            let a = full(&ring);
            assert!(a.commutative, "{}", ring.name());
            assert_eq!(a.cond_c.holds, a.cond_c_prime.holds, "{}", ring.name());
        }
    }

    #[test]
    fn shortcut_requires_semihereditary() {
        let z4 = construct::cyclic(4).unwrap();
        let lat = IdealLattice::build(&z4, 100).unwrap();
        let qm = build_qmax(&z4, &lat).unwrap();
        assert!(matches!(qtot_shortcut(&qm, &lat), Err(Error::Precondition(_))));
    }

    #[test]
    fn triangular_over_f3_expands_as_well() {
        let f3 = construct::prime_field(3).unwrap();
        let t3 = construct::triangular_ring(&f3, 2).unwrap();
        let a = full(&t3);
        assert_eq!(a.oracle.order(), 81);
        assert_eq!(a.morita.gamma, 0);
        assert_suite(&a);
    }
}
