//! The maximal right ring of quotients, realized as the endomorphism ring of
//! the minimal dense right ideal, plus the torsion theories and localizations
//! attached to filters of right ideals.
//!
//! For a finite ring the minimal dense right ideal `D` exists (dense ideals
//! are intersection-closed and the ring itself is dense), and every module
//! map `D -> R` lands back in `D`: its preimage of `D` is dense, hence
//! contains `D`. So `Hom(D, R) = End(D)`, composition makes it a ring, and
//! left multiplication embeds `R` into it. That endomorphism ring is the
//! maximal quotient ring; the construction checks its own invariants instead
//! of trusting the theory, and reports `RealizationViolation` if anything is
//! off.

use std::sync::Arc;

use crate::error::Error;
use crate::ideals::{filter_of_extension, GabrielFilter, IdealLattice};
use crate::mat::Mat;
use crate::module::{
    extension_as_left_module, extension_as_right_module, hom_group, realize_submodule,
    submodule_generated, tensor, FiniteModule, Hom, HomGroup, Submodule,
};
use crate::ring::{Extension, FiniteRing, RingDef, Subring};

/// The maximal right quotient ring of a base ring, with the embedding and
/// the colon ideal `(R : q)` of every carrier element.
pub struct Qmax {
    pub ring: Arc<FiniteRing>,
    /// Left multiplication `R -> Q`.
    pub lambda: Extension,
    /// Base-lattice index of `(R : q) = {r : q lambda(r) in lambda(R)}`,
    /// indexed by carrier element. Every colon is dense; `build_qmax`
    /// verifies that.
    pub colon_index: Vec<usize>,
    /// Lattice index of the minimal dense right ideal used as the carrier.
    pub d_index: usize,
}

pub fn build_qmax(ring: &Arc<FiniteRing>, lat: &IdealLattice) -> Result<Qmax, Error> {
    if ring.order() == 1 {
        return Ok(Qmax {
            ring: ring.clone(),
            lambda: Extension::identity(ring),
            colon_index: vec![lat.whole],
            d_index: lat.minimal_dense,
        });
    }
    let d_index = lat.minimal_dense;
    let d = &lat.ideals[d_index];
    let sub = Submodule { elements: d.elements.clone(), gens: d.gens.clone() };
    let rz = realize_submodule(&lat.regular, &sub)?;
    let hg = hom_group(&rz.module, &lat.regular);
    for h in &hg.gens {
        for &im in &h.images {
            if !lat.contains_elem(d_index, im) {
                return Err(Error::RealizationViolation(
                    "a map out of the minimal dense ideal escapes it".into(),
                ));
            }
        }
    }
    let s = hg.orders.len();
    let t = rz.module.rank();
    if s == 0 {
        return Err(Error::RealizationViolation(
            "trivial endomorphism group for a nontrivial ring".into(),
        ));
    }
    // phi after psi; ring multiplication is composition in this order, so
    // that left multiplications compose covariantly.
    let compose = |phi: &Hom, psi: &Hom| -> Result<Vec<i64>, Error> {
        let images = (0..t)
            .map(|a| {
                let mid = rz
                    .from_carrier(&lat.regular, psi.images[a])
                    .ok_or_else(|| {
                        Error::RealizationViolation("composition left the ideal".into())
                    })?;
                Ok(phi.apply(&rz.module, &lat.regular, mid))
            })
            .collect::<Result<Vec<u64>, Error>>()?;
        let coords = hg
            .coords_of(&Hom { images })
            .ok_or_else(|| Error::Internal("composite escaped the hom group".into()))?;
        Ok(coords.into_iter().map(|x| x as i64).collect())
    };
    let mut mul = vec![vec![Vec::new(); s]; s];
    for i in 0..s {
        for j in 0..s {
            mul[i][j] = compose(&hg.gens[i], &hg.gens[j])?;
        }
    }
    let identity = Hom {
        images: (0..t).map(|a| rz.to_carrier[rz.module.gen_elem(a) as usize]).collect(),
    };
    let unit = hg
        .coords_of(&identity)
        .ok_or_else(|| Error::Internal("identity map escaped the hom group".into()))?
        .into_iter()
        .map(|x| x as i64)
        .collect();
    let def = RingDef {
        name: format!("Qmax({})", ring.name()),
        moduli: hg.orders.clone(),
        unit,
        mul,
    };
    let q = FiniteRing::new(&def)
        .map_err(|e| Error::RealizationViolation(format!("endomorphism ring invalid: {e}")))?;
    // Left multiplication by r maps D into D because it is itself a module
    // map out of D; coords_of certifies that en passant.
    let lam_images: Vec<u64> = (0..ring.rank())
        .map(|i| {
            let r = ring.basis_elem(i);
            let images: Vec<u64> = (0..t)
                .map(|a| ring.mul(r, rz.to_carrier[rz.module.gen_elem(a) as usize]))
                .collect();
            let coords = hg.coords_of(&Hom { images }).ok_or_else(|| {
                Error::RealizationViolation("left multiplication escaped the hom group".into())
            })?;
            Ok(q.encode(&coords))
        })
        .collect::<Result<_, Error>>()?;
    let lambda = Extension::new(ring, &q, lam_images)
        .map_err(|e| Error::RealizationViolation(format!("embedding invalid: {e}")))?;
    let colon_index: Vec<usize> = q
        .elements()
        .map(|qe| {
            let elements: Vec<u64> = ring
                .elements()
                .filter(|&r| lambda.image_contains(q.mul(qe, lambda.apply(r))))
                .collect();
            let idx = lat.find(&elements).ok_or_else(|| {
                Error::Internal("a colon of the carrier is not a right ideal".into())
            })?;
            if !lat.ideals[idx].dense {
                return Err(Error::RealizationViolation(format!(
                    "colon of carrier element {qe} is not dense"
                )));
            }
            Ok(idx)
        })
        .collect::<Result<_, Error>>()?;
    Ok(Qmax { ring: q, lambda, colon_index, d_index })
}

/// A ring is right Kasch when its only dense right ideal is the whole ring;
/// equivalently its maximal quotient ring is itself.
pub fn is_kasch(lat: &IdealLattice) -> bool {
    lat.dense_indices() == vec![lat.whole]
}

/// The hereditary torsion theory of a finite Gabriel filter. Finite filters
/// that are upward closed and intersection closed are principal, so torsion
/// can be read off the minimal member; the annihilator route is computed as
/// well and the two must agree.
pub struct TorsionTheory<'a> {
    pub lat: &'a IdealLattice,
    pub filter: GabrielFilter,
    pub min: usize,
}

impl<'a> TorsionTheory<'a> {
    pub fn new(lat: &'a IdealLattice, filter: GabrielFilter) -> TorsionTheory<'a> {
        let min = filter.min_member(lat);
        TorsionTheory { lat, filter, min }
    }

    pub fn from_extension(lat: &'a IdealLattice, ext: &Extension) -> TorsionTheory<'a> {
        TorsionTheory::new(lat, filter_of_extension(ext, lat))
    }

    /// `t(M)`, computed two ways: elements killed by the minimal member, and
    /// elements whose annihilator is in the filter.
    pub fn torsion_submodule(&self, m: &FiniteModule) -> Submodule {
        let min_elems = &self.lat.ideals[self.min].elements;
        let killed: Vec<u64> = m
            .elements()
            .filter(|&x| min_elems.iter().all(|&r| m.act(x, r) == 0))
            .collect();
        let by_ann: Vec<u64> = m
            .elements()
            .filter(|&x| self.filter.contains(self.lat.annihilator(m, x)))
            .collect();
        assert_eq!(killed, by_ann, "the two torsion routes disagree");
        submodule_generated(m, &killed)
    }

    pub fn is_torsion(&self, m: &FiniteModule) -> bool {
        self.torsion_submodule(m).order() == m.order()
    }

    pub fn is_torsion_free(&self, m: &FiniteModule) -> bool {
        self.torsion_submodule(m).is_zero()
    }

    /// The saturation of a submodule: elements pushed into it by the minimal
    /// member.
    pub fn saturation(&self, m: &FiniteModule, sub: &Submodule) -> Submodule {
        let min_elems = &self.lat.ideals[self.min].elements;
        let elements: Vec<u64> = m
            .elements()
            .filter(|&x| min_elems.iter().all(|&r| sub.contains(m.act(x, r))))
            .collect();
        submodule_generated(m, &elements)
    }
}

/// The ring of quotients at a filter, as the subring
/// `{q : (R : q) in F}` of the maximal quotient ring. Only filters of dense
/// ideals make sense here; anything else cannot live inside the maximal
/// quotient ring.
pub fn ring_of_quotients(
    qmax: &Qmax,
    lat: &IdealLattice,
    f: &GabrielFilter,
) -> Result<Subring, Error> {
    for &i in &f.members {
        if !lat.ideals[i].dense {
            return Err(Error::Precondition(format!(
                "filter member {i} is not dense, so the localization is not a subring of the maximal quotients"
            )));
        }
    }
    let elements: Vec<u64> = qmax
        .ring
        .elements()
        .filter(|&q| f.contains(qmax.colon_index[q as usize]))
        .collect();
    crate::ring::is_subring_set(&qmax.ring, &elements)?;
    Ok(Subring { ring: qmax.ring.clone(), elements, gens: Vec::new() })
}

/// Is the extension a ring epimorphism? For finite rings this is exactly the
/// multiplication map `S (x)_R S -> S` being bijective, and it is always
/// surjective, so orders decide.
pub fn is_ring_epimorphism(ext: &Extension) -> bool {
    let right = extension_as_right_module(ext);
    let left = extension_as_left_module(ext);
    let t = tensor(&right, &left).expect("restrictions share the base ring");
    t.order() == ext.target.order() as u128
}

/// Flat plus epimorphism, the two halves of a perfect localization.
pub fn is_perfect_extension(ext: &Extension, base_lat: &IdealLattice) -> bool {
    crate::ideals::is_flat_left(ext, base_lat) && is_ring_epimorphism(ext)
}

/// The three checkable pieces of filter perfection: the localization is flat
/// on the left, it is a ring epimorphism, and the filter round-trips through
/// its own localization.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PerfectnessReport {
    pub flat: bool,
    pub epi: bool,
    pub round_trip: bool,
}

impl PerfectnessReport {
    pub fn is_perfect(&self) -> bool {
        self.flat && self.epi && self.round_trip
    }
}

pub fn perfectness_of_filter(
    qmax: &Qmax,
    lat: &IdealLattice,
    f: &GabrielFilter,
) -> Result<PerfectnessReport, Error> {
    let rf = ring_of_quotients(qmax, lat, f)?;
    let rz = crate::ring::realize_subring(&qmax.lambda, &rf)?;
    let flat = crate::ideals::is_flat_left(&rz.ext, lat);
    let epi = is_ring_epimorphism(&rz.ext);
    let round_trip = filter_of_extension(&rz.ext, lat) == *f;
    Ok(PerfectnessReport { flat, epi, round_trip })
}

/// One localization step of a module at a finite filter of right ideals.
///
/// A finite filter is principal, and its minimal member `D` is a two-sided
/// idempotent ideal: `(D : r)` is a member for every `r`, so `D ⊆ (D : r)`,
/// which says exactly `r D ⊆ D`. The direct limit `lim Hom(I, M)` over the
/// filter therefore collapses to `Hom(D, M)`, and the right action of `r`
/// restricts to `f · r : i -> f(r i)`. The canonical map sends `x` to left
/// multiplication `i -> x i`.
pub struct ModuleOfQuotients {
    /// `Hom(D, M)` as a right module over the base ring.
    pub module: FiniteModule,
    dgens: Vec<u64>,
    hg: HomGroup,
}

pub fn module_of_quotients(
    lat: &IdealLattice,
    f: &GabrielFilter,
    m: &FiniteModule,
) -> Result<ModuleOfQuotients, Error> {
    let ring = lat.ring();
    let min = f.min_member(lat);
    let d = &lat.ideals[min];
    let sub = Submodule { elements: d.elements.clone(), gens: d.gens.clone() };
    let dmod = realize_submodule(&lat.regular, &sub)?;
    let dgens: Vec<u64> = (0..dmod.module.rank())
        .map(|i| dmod.to_carrier[dmod.module.gen_elem(i) as usize])
        .collect();
    let hg = hom_group(&dmod.module, m);
    let n = hg.orders.len();
    let mut action = Vec::with_capacity(ring.rank());
    for p in 0..ring.rank() {
        let ep = ring.basis_elem(p);
        let mut rows = Vec::with_capacity(n);
        for fg in &hg.gens {
            let mut images = Vec::with_capacity(dgens.len());
            for &i_carrier in &dgens {
                let prod = ring.mul(ep, i_carrier);
                let idx = dmod.from_carrier(&lat.regular, prod).ok_or_else(|| {
                    Error::Internal(
                        "minimal filter member is not closed under left multiplication".into(),
                    )
                })?;
                images.push(fg.apply(&dmod.module, m, idx));
            }
            let coords = hg
                .coords_of(&Hom { images })
                .ok_or_else(|| Error::Internal("translated map escaped the hom group".into()))?;
            rows.push(coords.into_iter().map(|c| c as i128).collect());
        }
        action.push(if n == 0 { Mat::zeros(0, 0) } else { Mat::from_rows(rows) });
    }
    let module = FiniteModule::new(ring, hg.orders.clone(), action)?;
    Ok(ModuleOfQuotients { module, dgens, hg })
}

impl ModuleOfQuotients {
    /// The canonical map `phi_M : M -> M_(F)`, `x -> (i -> x i)`.
    pub fn phi(&self, m: &FiniteModule, x: u64) -> u64 {
        let images: Vec<u64> = self.dgens.iter().map(|&i| m.act(x, i)).collect();
        let coords = self
            .hg
            .coords_of(&Hom { images })
            .expect("left multiplication is a module map into the hom group");
        self.module.encode(&coords)
    }

    /// Kernel of the canonical map, as a submodule of `M`.
    pub fn phi_kernel(&self, m: &FiniteModule) -> Submodule {
        let elems: Vec<u64> = m.elements().filter(|&x| self.phi(m, x) == 0).collect();
        submodule_generated(m, &elems)
    }

    /// Image of the canonical map, as a submodule of `M_(F)`.
    pub fn phi_image(&self, m: &FiniteModule) -> Submodule {
        let gens: Vec<u64> = (0..m.rank()).map(|i| self.phi(m, m.gen_elem(i))).collect();
        submodule_generated(&self.module, &gens)
    }
}
