//! The lattice of right ideals of a finite ring, with essentiality and
//! density flags, colon ideals, and Gabriel filters.
//!
//! Right ideals are exactly the submodules of the regular module, so the
//! enumeration is inherited from there; classification is where the work is.
//! Density uses the elementwise criterion: `I` is dense iff for all `x /= 0`
//! and all `y` some `r` has `y r` in `I` and `x r /= 0`. Dense ideals always
//! exist (the whole ring is one) and are closed under intersection, so the
//! minimal dense ideal is well defined; it is the carrier of the maximal
//! quotient construction.

use std::collections::HashMap;
use std::sync::Arc;

use crate::bits::BitSet;
use crate::error::Error;
use crate::mat::{Mat, SubgroupBasis};
use crate::module::{
    enumerate_submodules, extension_as_left_module, is_projective, is_submodule_set,
    realize_submodule, tensor, FiniteModule, Submodule,
};
use crate::ring::{Extension, FiniteRing};

#[derive(Clone, Debug)]
pub struct Ideal {
    pub elements: Vec<u64>,
    pub gens: Vec<u64>,
    pub essential: bool,
    pub dense: bool,
}

pub struct IdealLattice {
    ring: Arc<FiniteRing>,
    pub regular: FiniteModule,
    pub ideals: Vec<Ideal>,
    index: HashMap<Vec<u64>, usize>,
    pub whole: usize,
    pub zero: usize,
    pub minimal_dense: usize,
}

fn is_essential(ring: &FiniteRing, contains: &dyn Fn(u64) -> bool) -> bool {
    // Meets every nonzero principal right ideal, hence every nonzero ideal.
    for a in ring.elements().skip(1) {
        let hit = ring.elements().any(|r| {
            let x = ring.mul(a, r);
            x != 0 && contains(x)
        });
        if !hit {
            return false;
        }
    }
    true
}

fn is_dense(ring: &FiniteRing, elements: &[u64], contains: &dyn Fn(u64) -> bool) -> bool {
    // The colon (I : y) only depends on the coset of y, so walk coset reps.
    let order = ring.order();
    let mut seen = BitSet::new(order as usize);
    for y in ring.elements() {
        if seen.contains(y) {
            continue;
        }
        for &i in elements {
            seen.insert(ring.add(y, i));
        }
        let colon: Vec<u64> = ring.elements().filter(|&r| contains(ring.mul(y, r))).collect();
        // Left annihilator of the colon must vanish.
        for x in ring.elements().skip(1) {
            if colon.iter().all(|&r| ring.mul(x, r) == 0) {
                return false;
            }
        }
    }
    true
}

pub fn intersect_sorted(a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

pub fn is_subset_sorted(a: &[u64], b: &[u64]) -> bool {
    let mut j = 0;
    for &x in a {
        while j < b.len() && b[j] < x {
            j += 1;
        }
        if j == b.len() || b[j] != x {
            return false;
        }
    }
    true
}

impl IdealLattice {
    pub fn build(ring: &Arc<FiniteRing>, cap: usize) -> Result<IdealLattice, Error> {
        let regular = FiniteModule::regular(ring);
        let subs = enumerate_submodules(&regular, cap)?;
        let flags = crate::par::map_slice(&subs, |sub: &Submodule| {
            let contains = |e: u64| sub.contains(e);
            let essential = is_essential(ring, &contains);
            // Dense ideals are essential; skip the heavy test otherwise.
            let dense = essential && is_dense(ring, &sub.elements, &contains);
            (essential, dense)
        });
        let mut ideals = Vec::with_capacity(subs.len());
        let mut index = HashMap::new();
        for (sub, (essential, dense)) in subs.into_iter().zip(flags) {
            index.insert(sub.elements.clone(), ideals.len());
            ideals.push(Ideal { elements: sub.elements, gens: sub.gens, essential, dense });
        }
        let whole = *index
            .get(&ring.elements().collect::<Vec<u64>>())
            .ok_or_else(|| Error::Internal("the whole ring is missing from its own lattice".into()))?;
        let zero = *index
            .get(&vec![0u64])
            .ok_or_else(|| Error::Internal("the zero ideal is missing".into()))?;
        if !ideals[whole].dense {
            return Err(Error::Internal("the whole ring must be dense".into()));
        }
        let mut min: Vec<u64> = ideals[whole].elements.clone();
        for id in &ideals {
            if id.dense {
                min = intersect_sorted(&min, &id.elements);
            }
        }
        let minimal_dense = *index.get(&min).ok_or_else(|| {
            Error::Internal("intersection of dense ideals is not in the lattice".into())
        })?;
        if !ideals[minimal_dense].dense {
            return Err(Error::Internal(
                "intersection of dense ideals is not dense".into(),
            ));
        }
        Ok(IdealLattice { ring: ring.clone(), regular, ideals, index, whole, zero, minimal_dense })
    }

    pub fn ring(&self) -> &Arc<FiniteRing> {
        &self.ring
    }

    pub fn len(&self) -> usize {
        self.ideals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ideals.is_empty()
    }

    pub fn find(&self, elements: &[u64]) -> Option<usize> {
        self.index.get(elements).copied()
    }

    pub fn contains_elem(&self, i: usize, e: u64) -> bool {
        self.ideals[i].elements.binary_search(&e).is_ok()
    }

    /// The colon ideal `(I : y) = {r : y r in I}`.
    pub fn colon(&self, i: usize, y: u64) -> usize {
        let id = &self.ideals[i];
        let elements: Vec<u64> = self
            .ring
            .elements()
            .filter(|&r| id.elements.binary_search(&self.ring.mul(y, r)).is_ok())
            .collect();
        self.find(&elements)
            .expect("a colon of a right ideal is a right ideal, so it is in the lattice")
    }

    pub fn is_subideal(&self, a: usize, b: usize) -> bool {
        is_subset_sorted(&self.ideals[a].elements, &self.ideals[b].elements)
    }

    pub fn intersection(&self, a: usize, b: usize) -> usize {
        let elems = intersect_sorted(&self.ideals[a].elements, &self.ideals[b].elements);
        self.find(&elems).expect("an intersection of right ideals is a right ideal")
    }

    pub fn dense_indices(&self) -> Vec<usize> {
        (0..self.ideals.len()).filter(|&i| self.ideals[i].dense).collect()
    }

    pub fn essential_indices(&self) -> Vec<usize> {
        (0..self.ideals.len()).filter(|&i| self.ideals[i].essential).collect()
    }

    /// The right annihilator of a module element, as a lattice index.
    pub fn annihilator(&self, m: &FiniteModule, x: u64) -> usize {
        debug_assert!(Arc::ptr_eq(m.ring(), &self.ring) || m.ring().same_structure(&self.ring));
        let elements: Vec<u64> = self.ring.elements().filter(|&r| m.act(x, r) == 0).collect();
        self.find(&elements).expect("an annihilator is a right ideal")
    }
}

/// A filter of right ideals, stored as sorted lattice indices. The name is
/// aspirational: axiom checks live in `check_gabriel_axioms`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GabrielFilter {
    pub members: Vec<usize>,
}

impl GabrielFilter {
    pub fn contains(&self, i: usize) -> bool {
        self.members.binary_search(&i).is_ok()
    }

    /// The smallest member, which exists because filters here are finite and
    /// closed under intersection.
    pub fn min_member(&self, lat: &IdealLattice) -> usize {
        let mut min = *self.members.first().expect("a filter is never empty");
        for &i in &self.members {
            min = lat.intersection(min, i);
        }
        assert!(self.contains(min), "filter is not intersection-closed");
        min
    }
}

/// The filter of all dense right ideals.
pub fn lambek_filter(lat: &IdealLattice) -> GabrielFilter {
    GabrielFilter { members: lat.dense_indices() }
}

/// Additive span of `iota(gens) . S` inside the target of an extension,
/// as a subgroup order.
fn span_order(ext: &Extension, gens: &[u64]) -> u128 {
    let s = &ext.target;
    let mut rows = Vec::new();
    for &g in gens {
        let ig = ext.apply(g);
        for q in 0..s.rank() {
            rows.push(s.decode_i128(s.mul(ig, s.basis_elem(q))));
        }
    }
    if rows.is_empty() {
        return 1;
    }
    SubgroupBasis::new(s.moduli(), &Mat::from_rows(rows)).order()
}

/// The filter `{I : iota(I) S = S}` attached to an extension `R -> S`.
pub fn filter_of_extension(ext: &Extension, lat: &IdealLattice) -> GabrielFilter {
    let target_order = ext.target.order() as u128;
    let members: Vec<usize> = (0..lat.len())
        .filter(|&i| span_order(ext, &lat.ideals[i].gens) == target_order)
        .collect();
    GabrielFilter { members }
}

/// Check the Gabriel axioms: upward closure, closure under colon, the gluing
/// axiom, and closure under intersection. Returns a witness on failure.
pub fn check_gabriel_axioms(lat: &IdealLattice, f: &GabrielFilter) -> Result<(), String> {
    if f.members.is_empty() {
        return Err("filter is empty".into());
    }
    for &i in &f.members {
        for j in 0..lat.len() {
            if lat.is_subideal(i, j) && !f.contains(j) {
                return Err(format!("not upward closed: {i} in, superideal {j} out"));
            }
        }
        for y in lat.ring().elements() {
            if !f.contains(lat.colon(i, y)) {
                return Err(format!("colon ({i} : {y}) escapes the filter"));
            }
        }
        for &j in &f.members {
            if !f.contains(lat.intersection(i, j)) {
                return Err(format!("intersection of members {i} and {j} escapes"));
            }
        }
    }
    // Gluing: if some member J has (I : j) in the filter for all j in J,
    // then I must be a member.
    for i in 0..lat.len() {
        if f.contains(i) {
            continue;
        }
        for &j in &f.members {
            let glued = lat.ideals[j]
                .elements
                .iter()
                .all(|&y| f.contains(lat.colon(i, y)));
            if glued {
                return Err(format!("gluing fails: {i} glued over member {j} but is not a member"));
            }
        }
    }
    Ok(())
}

/// Jacobson radical as a lattice index: intersection of maximal right ideals.
pub fn radical(lat: &IdealLattice) -> usize {
    let proper: Vec<usize> = (0..lat.len()).filter(|&i| i != lat.whole).collect();
    let maximal: Vec<usize> = proper
        .iter()
        .copied()
        .filter(|&i| {
            proper.iter().all(|&j| j == i || !lat.is_subideal(i, j))
        })
        .collect();
    let mut rad = lat.whole;
    for &m in &maximal {
        rad = lat.intersection(rad, m);
    }
    rad
}

pub fn is_semisimple(lat: &IdealLattice) -> bool {
    radical(lat) == lat.zero
}

/// Elements whose annihilator is essential. The set is a submodule, which is
/// re-checked rather than assumed.
pub fn singular_submodule(m: &FiniteModule, lat: &IdealLattice) -> Submodule {
    let elements: Vec<u64> = m
        .elements()
        .filter(|&x| lat.ideals[lat.annihilator(m, x)].essential)
        .collect();
    assert!(
        is_submodule_set(m, &elements),
        "singular elements failed to form a submodule"
    );
    Submodule { elements, gens: Vec::new() }
}

/// Is the target of the extension flat as a left module over the base?
/// Checked ideal by ideal: `I (x) S -> S` must be injective, which for
/// finite groups means the tensor order equals the image span order.
pub fn is_flat_left(ext: &Extension, base_lattice: &IdealLattice) -> bool {
    flatness_defect(ext, base_lattice).is_none()
}

/// The first right ideal witnessing non-flatness, if any.
pub fn flatness_defect(ext: &Extension, base_lattice: &IdealLattice) -> Option<usize> {
    let left = extension_as_left_module(ext);
    let verdicts = crate::par::map_range(base_lattice.len(), |i| {
        let ideal = &base_lattice.ideals[i];
        let sub = Submodule { elements: ideal.elements.clone(), gens: ideal.gens.clone() };
        let rz = realize_submodule(&base_lattice.regular, &sub)
            .expect("a right ideal realizes as a module");
        let t = tensor(&rz.module, &left).expect("tensor over the common base ring");
        // The natural map's image is the additive span of iota(I) S.
        let image = span_order(ext, &ideal.gens);
        t.order() == image
    });
    verdicts.into_iter().position(|ok| !ok)
}

/// Every right ideal projective, which for a finite ring is both the
/// hereditary and the semihereditary condition.
pub fn is_right_semihereditary(lat: &IdealLattice) -> bool {
    crate::par::all_range(lat.len(), |i| {
        let ideal = &lat.ideals[i];
        let sub = Submodule { elements: ideal.elements.clone(), gens: ideal.gens.clone() };
        let rz = realize_submodule(&lat.regular, &sub)
            .expect("a right ideal realizes as a module");
        is_projective(&rz.module)
    })
}

#[cfg(test)]
mod test {
    use super::*;
    use crate::construct;
    use crate::ring::{subring_generated, realize_subring, Extension};

    fn t2f2() -> Arc<FiniteRing> {
        construct::triangular_ring(&construct::prime_field(2).unwrap(), 2).unwrap()
    }

    #[test]
    fn lattice_counts_and_density_pins() {
        // (ring, ideal count, dense count, minimal dense order)
        let f2 = construct::prime_field(2).unwrap();
        let f3 = construct::prime_field(3).unwrap();
        let cases: Vec<(Arc<FiniteRing>, usize, usize, u64)> = vec![
            (t2f2(), 7, 2, 4),
            (construct::triangular_ring(&f3, 2).unwrap(), 8, 2, 9),
            (construct::cyclic(4).unwrap(), 3, 1, 4),
            (construct::cyclic(6).unwrap(), 4, 1, 6),
            (construct::matrix_ring(&f2, 2).unwrap(), 5, 1, 16),
            (construct::truncated_polynomial(&f2, 2).unwrap(), 3, 1, 4),
            (construct::product(&f2, &f3).unwrap(), 4, 1, 6),
        ];
        for (ring, n_ideals, n_dense, d_order) in cases {
            let lat = IdealLattice::build(&ring, 100_000).unwrap();
            assert_eq!(lat.len(), n_ideals, "{}", ring.name());
            assert_eq!(lat.dense_indices().len(), n_dense, "{}", ring.name());
            assert_eq!(
                lat.ideals[lat.minimal_dense].elements.len() as u64,
                d_order,
                "{}",
                ring.name()
            );
            // Dense implies essential.
            for id in &lat.ideals {
                assert!(!id.dense || id.essential);
            }
        }
    }

    #[test]
    fn essential_flags_for_t2() {
        let lat = IdealLattice::build(&t2f2(), 1000).unwrap();
        // Essential and dense coincide for T2(F2): the socle span{E12, E22}
        // and the whole ring.
        let ess = lat.essential_indices();
        assert_eq!(ess, lat.dense_indices());
        assert_eq!(ess.len(), 2);
        let d = lat.minimal_dense;
        let ring = lat.ring().clone();
        // The minimal dense ideal is span{E12, E22}.
        let e12 = ring.basis_elem(1);
        let e22 = ring.basis_elem(2);
        assert!(lat.contains_elem(d, e12) && lat.contains_elem(d, e22));
        assert!(!lat.contains_elem(d, ring.basis_elem(0)));
    }

    #[test]
    fn z4_and_z6_density() {
        let z4 = construct::cyclic(4).unwrap();
        let lat = IdealLattice::build(&z4, 100).unwrap();
        // 2Z/4 is essential but not dense.
        let two = lat.find(&[0, 2]).unwrap();
        assert!(lat.ideals[two].essential);
        assert!(!lat.ideals[two].dense);
        assert_eq!(lat.minimal_dense, lat.whole);
        let z6 = construct::cyclic(6).unwrap();
        let lat6 = IdealLattice::build(&z6, 100).unwrap();
        // The two proper factors meet trivially, so neither is essential.
        assert_eq!(lat6.essential_indices(), vec![lat6.whole]);
    }

    #[test]
    fn colon_and_filter_axioms() {
        let lat = IdealLattice::build(&t2f2(), 1000).unwrap();
        let lambek = lambek_filter(&lat);
        check_gabriel_axioms(&lat, &lambek).unwrap();
        assert_eq!(lambek.min_member(&lat), lat.minimal_dense);
        // The improper filter {R} is also Gabriel.
        let improper = GabrielFilter { members: vec![lat.whole] };
        check_gabriel_axioms(&lat, &improper).unwrap();
        // All ideals is Gabriel as well.
        let all = GabrielFilter { members: (0..lat.len()).collect() };
        check_gabriel_axioms(&lat, &all).unwrap();
        // A non-filter: the zero ideal alone is not upward closed.
        assert!(check_gabriel_axioms(&lat, &GabrielFilter { members: vec![lat.zero] }).is_err());
    }

    #[test]
    fn extension_filter_for_t2_in_m2_is_lambek() {
        let f2 = construct::prime_field(2).unwrap();
        let m2 = construct::matrix_ring(&f2, 2).unwrap();
        let sub = subring_generated(&m2, &[m2.basis_elem(0), m2.basis_elem(1), m2.basis_elem(3)]);
        let unit_emb = Extension::new(&f2, &m2, vec![m2.unit()]).unwrap();
        let rz = realize_subring(&unit_emb, &sub).unwrap();
        let incl = Extension::new(
            &rz.ring,
            &m2,
            (0..rz.ring.rank()).map(|i| rz.to_carrier[rz.ring.basis_elem(i) as usize]).collect(),
        )
        .unwrap();
        let lat = IdealLattice::build(&rz.ring, 1000).unwrap();
        let f = filter_of_extension(&incl, &lat);
        assert_eq!(f, lambek_filter(&lat));
        check_gabriel_axioms(&lat, &f).unwrap();
    }

    #[test]
    fn radical_and_semisimplicity() {
        let f2 = construct::prime_field(2).unwrap();
        let f3 = construct::prime_field(3).unwrap();
        assert!(is_semisimple(&IdealLattice::build(&construct::matrix_ring(&f2, 2).unwrap(), 1000).unwrap()));
        assert!(is_semisimple(&IdealLattice::build(&construct::product(&f2, &f3).unwrap(), 100).unwrap()));
        let latt2 = IdealLattice::build(&t2f2(), 1000).unwrap();
        assert!(!is_semisimple(&latt2));
        // rad T2 = span{E12}, order 2.
        assert_eq!(latt2.ideals[radical(&latt2)].elements.len(), 2);
        let lat4 = IdealLattice::build(&construct::cyclic(4).unwrap(), 100).unwrap();
        assert_eq!(radical(&lat4), lat4.find(&[0, 2]).unwrap());
    }

    #[test]
    fn singular_submodules() {
        let z4 = construct::cyclic(4).unwrap();
        let lat = IdealLattice::build(&z4, 100).unwrap();
        let z = singular_submodule(&lat.regular, &lat);
        assert_eq!(z.elements, vec![0, 2]);
        let latt2 = IdealLattice::build(&t2f2(), 1000).unwrap();
        let zt = singular_submodule(&latt2.regular, &latt2);
        assert!(zt.is_zero(), "T2(F2) is right nonsingular");
    }

    #[test]
    fn flatness_of_extensions() {
        // T2 inside M2 is flat on the left.
        let f2 = construct::prime_field(2).unwrap();
        let m2 = construct::matrix_ring(&f2, 2).unwrap();
        let sub = subring_generated(&m2, &[m2.basis_elem(0), m2.basis_elem(1), m2.basis_elem(3)]);
        let unit_emb = Extension::new(&f2, &m2, vec![m2.unit()]).unwrap();
        let rz = realize_subring(&unit_emb, &sub).unwrap();
        let incl = Extension::new(
            &rz.ring,
            &m2,
            (0..rz.ring.rank()).map(|i| rz.to_carrier[rz.ring.basis_elem(i) as usize]).collect(),
        )
        .unwrap();
        let lat = IdealLattice::build(&rz.ring, 1000).unwrap();
        assert!(is_flat_left(&incl, &lat));
        // F2[x]/(x^2) diagonally inside its product with F2 is not: the
        // second factor is the residue field, which is not flat.
        let tp = construct::truncated_polynomial(&f2, 2).unwrap();
        let p = construct::product(&tp, &f2).unwrap();
        // Images of 1 and x: (1, 1) and (x, 0).
        let ext = Extension::new(&tp, &p, vec![p.unit(), p.basis_elem(1)]).unwrap();
        let latp = IdealLattice::build(&tp, 100).unwrap();
        assert!(!is_flat_left(&ext, &latp));
        let defect = flatness_defect(&ext, &latp).unwrap();
        // The witness is the maximal ideal (x).
        assert_eq!(latp.ideals[defect].elements.len(), 2);
        // Identity extensions are always flat.
        assert!(is_flat_left(&Extension::identity(&tp), &latp));
    }

    #[test]
    fn semihereditary_verdicts() {
        let f2 = construct::prime_field(2).unwrap();
        assert!(is_right_semihereditary(&IdealLattice::build(&t2f2(), 1000).unwrap()));
        assert!(is_right_semihereditary(
            &IdealLattice::build(&construct::matrix_ring(&f2, 2).unwrap(), 1000).unwrap()
        ));
        assert!(!is_right_semihereditary(
            &IdealLattice::build(&construct::cyclic(4).unwrap(), 100).unwrap()
        ));
        assert!(!is_right_semihereditary(
            &IdealLattice::build(&construct::truncated_polynomial(&f2, 2).unwrap(), 100).unwrap()
        ));
    }
}
