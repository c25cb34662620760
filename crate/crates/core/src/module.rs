//! Finite right modules over a finite ring.
//!
//! A module is the additive group `Z_{m_1} x ... x Z_{m_t}` together with one
//! action matrix per ring basis element: `x . e_p = x A_p` on digit rows. All
//! module-theoretic machinery reduces to integer linear algebra over these
//! matrices: hom groups are congruence kernels, tensor products are cokernels
//! of presented relation maps, projectivity is a splitting congruence.
//!
//! Left modules are right modules over the opposite ring; the two
//! `extension_as_*_module` constructors make that convention concrete.

use std::collections::HashMap;
use std::sync::Arc;

use crate::bits::BitSet;
use crate::error::Error;
use crate::mat::{kernel_mod, solve_congruence, Mat, QuotientGroup, SubgroupBasis};
use crate::ring::{Extension, FiniteRing, MAX_ORDER};

pub struct FiniteModule {
    ring: Arc<FiniteRing>,
    moduli: Vec<u64>,
    strides: Vec<u64>,
    order: u64,
    /// One `t x t` matrix per ring basis element, entries reduced mod the
    /// column modulus.
    action: Vec<Mat>,
}

impl FiniteModule {
    pub fn new(
        ring: &Arc<FiniteRing>,
        moduli: Vec<u64>,
        action: Vec<Mat>,
    ) -> Result<FiniteModule, Error> {
        let t = moduli.len();
        let k = ring.rank();
        if action.len() != k {
            return Err(Error::BadModule(format!(
                "need {k} action matrices, got {}",
                action.len()
            )));
        }
        if let Some(i) = moduli.iter().position(|&m| m == 0) {
            return Err(Error::BadModule(format!("modulus {i} is zero")));
        }
        let mut order128: u128 = 1;
        for &m in &moduli {
            order128 = order128.saturating_mul(m as u128);
        }
        if order128 > MAX_ORDER {
            return Err(Error::BadModule(format!(
                "order {order128} exceeds the supported maximum {MAX_ORDER}"
            )));
        }
        let mut reduced = Vec::with_capacity(k);
        for (p, a) in action.into_iter().enumerate() {
            if a.rows() != t || a.cols() != t {
                return Err(Error::BadModule(format!(
                    "action matrix {p} is {}x{}, expected {t}x{t}",
                    a.rows(),
                    a.cols()
                )));
            }
            let mut b = a;
            for i in 0..t {
                for j in 0..t {
                    b[(i, j)] = b[(i, j)].rem_euclid(moduli[j] as i128);
                }
            }
            reduced.push(b);
        }
        // Torsion compatibility: m_i g_i = 0 and d_p e_p = 0 must both be
        // respected by the action.
        for (p, a) in reduced.iter().enumerate() {
            let dp = ring.moduli()[p] as i128;
            for i in 0..t {
                let mi = moduli[i] as i128;
                for j in 0..t {
                    let mj = moduli[j] as i128;
                    if (mi * a[(i, j)]) % mj != 0 {
                        return Err(Error::BadModule(format!(
                            "action {p} breaks torsion of generator {i} at column {j}"
                        )));
                    }
                    if (dp * a[(i, j)]) % mj != 0 {
                        return Err(Error::BadModule(format!(
                            "action {p} breaks ring torsion at entry ({i}, {j})"
                        )));
                    }
                }
            }
        }
        let mut strides = vec![0u64; t];
        let mut acc = 1u64;
        for i in 0..t {
            strides[i] = acc;
            acc *= moduli[i];
        }
        let m = FiniteModule {
            ring: ring.clone(),
            moduli,
            strides,
            order: order128 as u64,
            action: reduced,
        };
        // Composition: acting by e_p then e_q equals acting by e_p e_q.
        for p in 0..k {
            for q in 0..k {
                let prod = ring.decode(ring.mul(ring.basis_elem(p), ring.basis_elem(q)));
                let lhs = m.action[p].mul(&m.action[q]);
                for i in 0..t {
                    for j in 0..t {
                        let rhs: i128 = (0..k)
                            .map(|l| prod[l] as i128 * m.action[l][(i, j)])
                            .sum();
                        if (lhs[(i, j)] - rhs) % m.moduli[j] as i128 != 0 {
                            return Err(Error::BadModule(format!(
                                "action is not multiplicative on basis pair ({p}, {q})"
                            )));
                        }
                    }
                }
            }
        }
        // Unit acts as the identity.
        let u = ring.decode(ring.unit());
        for i in 0..t {
            for j in 0..t {
                let s: i128 = (0..k).map(|l| u[l] as i128 * m.action[l][(i, j)]).sum();
                let want = i128::from(i == j);
                if (s - want) % m.moduli[j] as i128 != 0 {
                    return Err(Error::BadModule(format!(
                        "unit does not act as identity at entry ({i}, {j})"
                    )));
                }
            }
        }
        Ok(m)
    }

    /// The ring as a right module over itself.
    pub fn regular(ring: &Arc<FiniteRing>) -> FiniteModule {
        let k = ring.rank();
        let mut action = Vec::with_capacity(k);
        for p in 0..k {
            let rows: Vec<Vec<i128>> = (0..k)
                .map(|i| ring.decode_i128(ring.mul(ring.basis_elem(i), ring.basis_elem(p))))
                .collect();
            action.push(Mat::from_rows(rows));
        }
        FiniteModule::new(ring, ring.moduli().to_vec(), action)
            .expect("the regular module of a valid ring is valid")
    }

    pub fn ring(&self) -> &Arc<FiniteRing> {
        &self.ring
    }

    pub fn rank(&self) -> usize {
        self.moduli.len()
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn zero(&self) -> u64 {
        0
    }

    pub fn elements(&self) -> impl Iterator<Item = u64> {
        0..self.order
    }

    pub fn gen_elem(&self, i: usize) -> u64 {
        self.strides[i]
    }

    pub fn decode(&self, e: u64) -> Vec<u64> {
        self.moduli
            .iter()
            .zip(&self.strides)
            .map(|(&m, &s)| (e / s) % m)
            .collect()
    }

    pub fn decode_i128(&self, e: u64) -> Vec<i128> {
        self.decode(e).into_iter().map(|x| x as i128).collect()
    }

    pub fn encode(&self, digits: &[u64]) -> u64 {
        debug_assert_eq!(digits.len(), self.moduli.len());
        digits
            .iter()
            .zip(self.moduli.iter().zip(&self.strides))
            .map(|(&x, (&m, &s))| (x % m) * s)
            .sum()
    }

    pub fn encode_i128(&self, digits: &[i128]) -> u64 {
        debug_assert_eq!(digits.len(), self.moduli.len());
        digits
            .iter()
            .zip(self.moduli.iter().zip(&self.strides))
            .map(|(&x, (&m, &s))| x.rem_euclid(m as i128) as u64 * s)
            .sum()
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        let mut out = 0;
        for (&m, &s) in self.moduli.iter().zip(&self.strides) {
            let x = (a / s) % m;
            let y = (b / s) % m;
            out += ((x + y) % m) * s;
        }
        out
    }

    pub fn neg(&self, a: u64) -> u64 {
        let mut out = 0;
        for (&m, &s) in self.moduli.iter().zip(&self.strides) {
            let x = (a / s) % m;
            out += ((m - x) % m) * s;
        }
        out
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    pub fn smul(&self, n: u64, a: u64) -> u64 {
        let mut out = 0;
        for (&m, &s) in self.moduli.iter().zip(&self.strides) {
            let x = (a / s) % m;
            out += ((x as u128 * n as u128) % m as u128) as u64 * s;
        }
        out
    }

    pub fn additive_order(&self, a: u64) -> u64 {
        let mut l = 1u64;
        for (&m, &s) in self.moduli.iter().zip(&self.strides) {
            let x = (a / s) % m;
            let o = m / gcd(m, x);
            l = l / gcd(l, o) * o;
        }
        l
    }

    /// Action of the `p`-th ring basis element.
    pub fn act_basis(&self, x: u64, p: usize) -> u64 {
        let xd = self.decode(x);
        let a = &self.action[p];
        let t = self.moduli.len();
        let mut out = 0u64;
        for j in 0..t {
            let mut acc: i128 = 0;
            for i in 0..t {
                acc += xd[i] as i128 * a[(i, j)];
            }
            out += acc.rem_euclid(self.moduli[j] as i128) as u64 * self.strides[j];
        }
        out
    }

    /// Action of an arbitrary ring element: `x . r`.
    pub fn act(&self, x: u64, r: u64) -> u64 {
        let xd = self.decode(x);
        let rd = self.ring.decode(r);
        let t = self.moduli.len();
        let mut out = 0u64;
        for j in 0..t {
            let mut acc: i128 = 0;
            for (p, &rp) in rd.iter().enumerate() {
                if rp == 0 {
                    continue;
                }
                let a = &self.action[p];
                for i in 0..t {
                    acc += rp as i128 * xd[i] as i128 * a[(i, j)];
                }
            }
            out += acc.rem_euclid(self.moduli[j] as i128) as u64 * self.strides[j];
        }
        out
    }

    pub fn action_matrix(&self, p: usize) -> &Mat {
        &self.action[p]
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// The target of an extension as a right module over the base, by restriction
/// of scalars along the embedding.
pub fn extension_as_right_module(ext: &Extension) -> FiniteModule {
    let s = &ext.target;
    let k = ext.base.rank();
    let t = s.rank();
    let mut action = Vec::with_capacity(k);
    for p in 0..k {
        let ip = ext.apply(ext.base.basis_elem(p));
        let rows: Vec<Vec<i128>> = (0..t)
            .map(|i| s.decode_i128(s.mul(s.basis_elem(i), ip)))
            .collect();
        action.push(Mat::from_rows(rows));
    }
    FiniteModule::new(&ext.base, s.moduli().to_vec(), action)
        .expect("restriction of scalars along a ring embedding is a module")
}

/// The target of an extension as a left module over the base, encoded as a
/// right module over the opposite of the base.
pub fn extension_as_left_module(ext: &Extension) -> FiniteModule {
    let s = &ext.target;
    let op = ext.base.opposite();
    let k = op.rank();
    let t = s.rank();
    let mut action = Vec::with_capacity(k);
    for p in 0..k {
        let ip = ext.apply(ext.base.basis_elem(p));
        let rows: Vec<Vec<i128>> = (0..t)
            .map(|i| s.decode_i128(s.mul(ip, s.basis_elem(i))))
            .collect();
        action.push(Mat::from_rows(rows));
    }
    FiniteModule::new(&op, s.moduli().to_vec(), action)
        .expect("a left action is a right action of the opposite ring")
}

/// A submodule, stored as its sorted element set inside the ambient module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Submodule {
    pub elements: Vec<u64>,
    pub gens: Vec<u64>,
}

impl Submodule {
    pub fn zero() -> Submodule {
        Submodule { elements: vec![0], gens: Vec::new() }
    }

    pub fn whole(m: &FiniteModule) -> Submodule {
        Submodule { elements: m.elements().collect(), gens: Vec::new() }
    }

    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }

    pub fn contains(&self, e: u64) -> bool {
        self.elements.binary_search(&e).is_ok()
    }

    pub fn set_eq(&self, other: &Submodule) -> bool {
        self.elements == other.elements
    }

    pub fn is_zero(&self) -> bool {
        self.elements.len() == 1
    }
}

pub fn submodule_generated(m: &FiniteModule, seeds: &[u64]) -> Submodule {
    let mut set = BitSet::new(m.order() as usize);
    let mut list: Vec<u64> = Vec::new();
    let push = |set: &mut BitSet, list: &mut Vec<u64>, e: u64| {
        if set.insert(e) {
            list.push(e);
        }
    };
    push(&mut set, &mut list, 0);
    for &s in seeds {
        push(&mut set, &mut list, s);
    }
    let k = m.ring().rank();
    let mut next = 0;
    while next < list.len() {
        let x = list[next];
        next += 1;
        // Every sum pair is covered when its later member is processed; the
        // finite additive closure supplies negatives on its own.
        for idx in 0..next {
            let z = m.add(x, list[idx]);
            push(&mut set, &mut list, z);
        }
        for p in 0..k {
            let z = m.act_basis(x, p);
            push(&mut set, &mut list, z);
        }
    }
    let mut elements = set.to_vec();
    elements.sort_unstable();
    let mut gens = seeds.to_vec();
    gens.sort_unstable();
    gens.dedup();
    Submodule { elements, gens }
}

/// Extend a submodule by one element (same closure, seeded by the union).
pub fn submodule_extend(m: &FiniteModule, base: &Submodule, extra: u64) -> Submodule {
    let mut set = BitSet::new(m.order() as usize);
    let mut list: Vec<u64> = Vec::new();
    for &e in &base.elements {
        if set.insert(e) {
            list.push(e);
        }
    }
    if set.insert(extra) {
        list.push(extra);
    }
    let base_len = base.elements.len();
    let k = m.ring().rank();
    let mut next = 0;
    while next < list.len() {
        let x = list[next];
        next += 1;
        // The closed base contributes nothing new on its own; (base, fresh)
        // pairs are covered when the fresh element is processed.
        if next <= base_len {
            continue;
        }
        for idx in 0..next {
            let z = m.add(x, list[idx]);
            if set.insert(z) {
                list.push(z);
            }
        }
        for p in 0..k {
            let z = m.act_basis(x, p);
            if set.insert(z) {
                list.push(z);
            }
        }
    }
    let mut elements = set.to_vec();
    elements.sort_unstable();
    let mut gens = base.gens.clone();
    gens.push(extra);
    gens.sort_unstable();
    gens.dedup();
    Submodule { elements, gens }
}

pub fn is_submodule_set(m: &FiniteModule, elements: &[u64]) -> bool {
    let contains = |e: u64| elements.binary_search(&e).is_ok();
    if !contains(0) {
        return false;
    }
    let k = m.ring().rank();
    elements.iter().all(|&a| {
        elements.iter().all(|&b| contains(m.add(a, b)))
            && (0..k).all(|p| contains(m.act_basis(a, p)))
    })
}

/// All submodules, by breadth-first one-element extensions with memoized
/// closures. Canonically sorted by (order, element set).
pub fn enumerate_submodules(m: &FiniteModule, cap: usize) -> Result<Vec<Submodule>, Error> {
    let mut found: HashMap<Vec<u64>, Submodule> = HashMap::new();
    let zero = Submodule::zero();
    let mut queue: Vec<Submodule> = vec![zero.clone()];
    found.insert(zero.elements.clone(), zero);
    let mut next = 0;
    while next < queue.len() {
        let cur = queue[next].clone();
        next += 1;
        let candidates: Vec<u64> =
            m.elements().filter(|&e| !cur.contains(e)).collect();
        let extensions =
            crate::par::map_slice(&candidates, |&e| submodule_extend(m, &cur, e));
        for sub in extensions {
            if !found.contains_key(&sub.elements) {
                if found.len() >= cap {
                    return Err(Error::CapExceeded { cap, what: "submodules" });
                }
                found.insert(sub.elements.clone(), sub.clone());
                queue.push(sub);
            }
        }
    }
    let mut out: Vec<Submodule> = found.into_values().collect();
    out.sort_by(|a, b| {
        (a.elements.len(), &a.elements).cmp(&(b.elements.len(), &b.elements))
    });
    Ok(out)
}

/// A submodule realized as a standalone module, with translation back into
/// the ambient carrier.
pub struct RealizedModule {
    pub module: FiniteModule,
    /// Carrier element of each standalone element index.
    pub to_carrier: Vec<u64>,
    basis: SubgroupBasis,
}

impl RealizedModule {
    /// Standalone index of a carrier element, if it lies in the submodule.
    pub fn from_carrier(&self, carrier: &FiniteModule, e: u64) -> Option<u64> {
        self.basis
            .coords_of(&carrier.decode_i128(e))
            .map(|c| self.module.encode(&c))
    }
}

pub fn realize_submodule(m: &FiniteModule, sub: &Submodule) -> Result<RealizedModule, Error> {
    let rows: Vec<Vec<i128>> = sub.elements.iter().map(|&e| m.decode_i128(e)).collect();
    let gens_mat =
        if rows.is_empty() { Mat::zeros(0, m.rank()) } else { Mat::from_rows(rows) };
    let basis = SubgroupBasis::new(m.moduli(), &gens_mat);
    if basis.order() != sub.elements.len() as u128 {
        return Err(Error::Internal(format!(
            "subgroup basis order {} does not match submodule order {}",
            basis.order(),
            sub.elements.len()
        )));
    }
    let s = basis.orders.len();
    let gen_elems: Vec<u64> = (0..s).map(|g| m.encode_i128(basis.gens.row(g))).collect();
    let k = m.ring().rank();
    let mut action = Vec::with_capacity(k);
    for p in 0..k {
        let mut rows = Vec::with_capacity(s);
        for &g in &gen_elems {
            let img = m.act_basis(g, p);
            let coords = basis.coords_of(&m.decode_i128(img)).ok_or_else(|| {
                Error::Internal("submodule is not closed under the ring action".into())
            })?;
            rows.push(coords.into_iter().map(|x| x as i128).collect());
        }
        action.push(if s == 0 { Mat::zeros(0, 0) } else { Mat::from_rows(rows) });
    }
    let module = FiniteModule::new(m.ring(), basis.orders.clone(), action)?;
    let to_carrier: Vec<u64> = module
        .elements()
        .map(|e| {
            module
                .decode(e)
                .iter()
                .zip(&gen_elems)
                .fold(0u64, |acc, (&c, &g)| m.add(acc, m.smul(c, g)))
        })
        .collect();
    {
        let mut sorted = to_carrier.clone();
        sorted.sort_unstable();
        if sorted != sub.elements {
            return Err(Error::Internal(
                "realized submodule does not cover the submodule".into(),
            ));
        }
    }
    Ok(RealizedModule { module, to_carrier, basis })
}

/// A quotient module `M / N` with its projection.
pub struct QuotientModule {
    pub module: FiniteModule,
    qg: QuotientGroup,
}

impl QuotientModule {
    pub fn project(&self, carrier: &FiniteModule, x: u64) -> u64 {
        self.module.encode(&self.qg.project(&carrier.decode_i128(x)))
    }
}

pub fn quotient_module(m: &FiniteModule, sub: &Submodule) -> Result<QuotientModule, Error> {
    // Compress the subgroup to an independent generating set first; feeding
    // every element to the Smith pass would be wasteful.
    let rows: Vec<Vec<i128>> = sub.elements.iter().map(|&e| m.decode_i128(e)).collect();
    let sg = SubgroupBasis::new(m.moduli(), &Mat::from_rows(rows));
    let qg = QuotientGroup::new(m.moduli(), &sg.gens);
    let s = qg.orders.len();
    let reps: Vec<u64> = (0..s).map(|g| m.encode_i128(&qg.lift_gen(g))).collect();
    let k = m.ring().rank();
    let mut action = Vec::with_capacity(k);
    for p in 0..k {
        let rows: Vec<Vec<i128>> = reps
            .iter()
            .map(|&r| {
                qg.project(&m.decode_i128(m.act_basis(r, p)))
                    .into_iter()
                    .map(|x| x as i128)
                    .collect()
            })
            .collect();
        action.push(if s == 0 { Mat::zeros(0, 0) } else { Mat::from_rows(rows) });
    }
    let module = FiniteModule::new(m.ring(), qg.orders.clone(), action)?;
    Ok(QuotientModule { module, qg })
}

/// A module homomorphism, by the images of the domain's additive generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hom {
    pub images: Vec<u64>,
}

impl Hom {
    pub fn apply(&self, dom: &FiniteModule, cod: &FiniteModule, x: u64) -> u64 {
        dom.decode(x)
            .iter()
            .zip(&self.images)
            .fold(0u64, |acc, (&c, &im)| cod.add(acc, cod.smul(c, im)))
    }

    pub fn is_zero(&self) -> bool {
        self.images.iter().all(|&x| x == 0)
    }
}

/// `Hom_R(M, N)` as a finite abelian group in invariant-factor form.
pub struct HomGroup {
    pub orders: Vec<u64>,
    pub gens: Vec<Hom>,
    basis: SubgroupBasis,
    cod_moduli: Vec<u64>,
}

impl HomGroup {
    pub fn order(&self) -> u128 {
        self.orders.iter().fold(1u128, |a, &m| a * m as u128)
    }

    /// Coordinates of a hom with respect to `gens`, if it is in the group
    /// (it always is when it really is R-linear).
    pub fn coords_of(&self, h: &Hom) -> Option<Vec<u64>> {
        let mut digits = Vec::new();
        for &im in &h.images {
            let mut e = im;
            for &m in &self.cod_moduli {
                digits.push((e % m) as i128);
                e /= m;
            }
        }
        self.basis.coords_of(&digits)
    }

    pub fn hom_from_coords(&self, cod: &FiniteModule, coords: &[u64]) -> Hom {
        let n = self.gens.first().map_or(0, |h| h.images.len());
        let mut images = vec![0u64; n];
        for (g, &c) in coords.iter().enumerate() {
            for (i, im) in images.iter_mut().enumerate() {
                *im = cod.add(*im, cod.smul(c, self.gens[g].images[i]));
            }
        }
        Hom { images }
    }
}

/// Solve for all R-linear maps `M -> N`. Unknowns are the digit vectors of
/// the generator images; R-linearity and additive well-definedness are
/// entrywise congruences, so the hom group is a congruence kernel reduced
/// modulo the codomain's moduli.
pub fn hom_group(dom: &FiniteModule, cod: &FiniteModule) -> HomGroup {
    debug_assert!(
        Arc::ptr_eq(dom.ring(), cod.ring()) || dom.ring().same_structure(cod.ring())
    );
    let tm = dom.rank();
    let tn = cod.rank();
    let k = dom.ring().rank();
    let unknowns = tm * tn;
    let cols = tm * tn + tm * k * tn;
    let mut w = Mat::zeros(unknowns, cols);
    let mut moduli = vec![0i128; cols];
    // Well-definedness: m_i phi(g_i) = 0 in N.
    for i in 0..tm {
        for j in 0..tn {
            let col = i * tn + j;
            w[(i * tn + j, col)] = dom.moduli()[i] as i128;
            moduli[col] = cod.moduli()[j] as i128;
        }
    }
    // Linearity: phi(g_i . e_p) = phi(g_i) . e_p.
    let base = tm * tn;
    for i in 0..tm {
        for p in 0..k {
            let am = dom.action_matrix(p);
            let an = cod.action_matrix(p);
            for jp in 0..tn {
                let col = base + (i * k + p) * tn + jp;
                moduli[col] = cod.moduli()[jp] as i128;
                for a in 0..tm {
                    w[(a * tn + jp, col)] = w[(a * tn + jp, col)] + am[(i, a)];
                }
                for b in 0..tn {
                    w[(i * tn + b, col)] = w[(i * tn + b, col)] - an[(b, jp)];
                }
            }
        }
    }
    let lattice = kernel_mod(&w, &moduli);
    let ambient: Vec<u64> = (0..tm).flat_map(|_| cod.moduli().to_vec()).collect();
    let basis = SubgroupBasis::new(&ambient, &lattice);
    let gens: Vec<Hom> = (0..basis.orders.len())
        .map(|g| {
            let row = basis.gens.row(g);
            let images = (0..tm)
                .map(|i| cod.encode_i128(&row[i * tn..(i + 1) * tn]))
                .collect();
            Hom { images }
        })
        .collect();
    HomGroup {
        orders: basis.orders.clone(),
        gens,
        basis,
        cod_moduli: cod.moduli().to_vec(),
    }
}

/// Brute-force hom group for cross-checks: every image tuple is tested
/// against additivity and R-linearity directly. Guarded by a hard size cap.
pub fn hom_group_exhaustive(dom: &FiniteModule, cod: &FiniteModule) -> Vec<Hom> {
    let tm = dom.rank();
    let total = (cod.order() as u128).pow(tm as u32);
    assert!(total <= 4096, "exhaustive hom scan is only for small cases");
    let k = dom.ring().rank();
    let mut out = Vec::new();
    let mut images = vec![0u64; tm];
    'outer: loop {
        let ok = (0..tm).all(|i| {
            cod.smul(dom.moduli()[i], images[i]) == 0
                && (0..k).all(|p| {
                    let lhs = dom
                        .decode(dom.act_basis(dom.gen_elem(i), p))
                        .iter()
                        .zip(&images)
                        .fold(0u64, |acc, (&c, &im)| cod.add(acc, cod.smul(c, im)));
                    lhs == cod.act_basis(images[i], p)
                })
        });
        if ok {
            out.push(Hom { images: images.clone() });
        }
        for i in 0..tm {
            images[i] += 1;
            if images[i] < cod.order() {
                continue 'outer;
            }
            images[i] = 0;
        }
        break;
    }
    out
}

/// A finite presentation `R^{n1} -> R^{n0} -> M -> 0`. The free cover sends
/// the `i`-th summand's unit to the `i`-th additive generator of `M`;
/// `relations` generate the kernel, each row a digit vector of `R^{n0}`.
pub struct Presentation {
    pub n0: usize,
    pub relations: Mat,
}

impl Presentation {
    /// The `(row, i)` relation component as a ring element.
    pub fn component(&self, ring: &FiniteRing, row: usize, i: usize) -> u64 {
        let k = ring.rank();
        ring.encode_i128(&self.relations.row(row)[i * k..(i + 1) * k])
    }
}

pub fn present(m: &FiniteModule) -> Presentation {
    let t = m.rank();
    let k = m.ring().rank();
    if t == 0 {
        return Presentation { n0: 0, relations: Mat::zeros(0, 0) };
    }
    // The cover map on free digit coordinates: basis (i, p) goes to g_i e_p.
    let mut phi = Mat::zeros(t * k, t);
    for i in 0..t {
        for p in 0..k {
            let row = m.decode_i128(m.act_basis(m.gen_elem(i), p));
            for j in 0..t {
                phi[(i * k + p, j)] = row[j];
            }
        }
    }
    let moduli: Vec<i128> = m.moduli().iter().map(|&x| x as i128).collect();
    let relations = kernel_mod(&phi, &moduli);
    // The abelian kernel generates the kernel submodule, so the presented
    // cokernel has exactly |M| elements; check the index as a sanity gate.
    #[cfg(debug_assertions)]
    {
        let ambient: Vec<u64> =
            (0..t).flat_map(|_| m.ring().moduli().to_vec()).collect();
        let sg = SubgroupBasis::new(&ambient, &relations);
        let free: u128 = ambient.iter().map(|&x| x as u128).product();
        debug_assert_eq!(sg.order() * m.order() as u128, free);
    }
    Presentation { n0: t, relations }
}

/// `M (x)_R C` for a right module `M` and a left module `C` (given as a
/// right module over the opposite ring), computed as the cokernel of the
/// tensored relation map inside `C^{n0}`.
pub struct TensorGroup {
    pub orders: Vec<u64>,
    qg: QuotientGroup,
    n0: usize,
    c_rank: usize,
}

impl TensorGroup {
    pub fn order(&self) -> u128 {
        self.qg.order()
    }

    /// Image of the pure tensor `m (x) c` in quotient coordinates. The digit
    /// expansion of `m` lifts it through the free cover.
    pub fn pure(&self, m: &FiniteModule, mx: u64, c: &FiniteModule, cx: u64) -> Vec<u64> {
        let md = m.decode_i128(mx);
        let cd = c.decode_i128(cx);
        let mut row = vec![0i128; self.n0 * self.c_rank];
        for i in 0..self.n0 {
            for (q, &cq) in cd.iter().enumerate() {
                row[i * self.c_rank + q] = md[i] * cq;
            }
        }
        self.qg.project(&row)
    }
}

pub fn tensor(m: &FiniteModule, c: &FiniteModule) -> Result<TensorGroup, Error> {
    if !c.ring().is_opposite_of(m.ring()) {
        return Err(Error::Precondition(
            "tensor needs a right module and a left module over the same ring".into(),
        ));
    }
    let pres = present(m);
    let tc = c.rank();
    let n0 = pres.n0;
    let ambient: Vec<u64> = (0..n0).flat_map(|_| c.moduli().to_vec()).collect();
    let mut rows: Vec<Vec<i128>> = Vec::new();
    for l in 0..pres.relations.rows() {
        for q in 0..tc {
            let mut row = vec![0i128; n0 * tc];
            for i in 0..n0 {
                // rho . c in left terms is c . rho over the opposite ring;
                // ring and opposite share the element encoding.
                let rho = pres.component(m.ring(), l, i);
                let img = c.decode_i128(c.act(c.gen_elem(q), rho));
                row[i * tc..(i + 1) * tc].copy_from_slice(&img);
            }
            rows.push(row);
        }
    }
    let rel = if rows.is_empty() {
        Mat::zeros(0, ambient.len())
    } else {
        Mat::from_rows(rows)
    };
    let qg = QuotientGroup::new(&ambient, &rel);
    Ok(TensorGroup { orders: qg.orders.clone(), qg, n0, c_rank: tc })
}

/// Does the free cover of `M` split? Solves for a right inverse of the cover
/// map among R-linear maps `M -> R^{n0}` as one congruence system.
pub fn is_projective(m: &FiniteModule) -> bool {
    let t = m.rank();
    if t == 0 {
        return true;
    }
    let ring = m.ring();
    let k = ring.rank();
    let l = t * k; // digits of R^{n0} with n0 = t
    let reg = FiniteModule::regular(ring);
    let unknowns = t * l;
    let cols = t * l + t * k * l + t * t;
    let mut w = Mat::zeros(unknowns, cols);
    let mut moduli = vec![0i128; cols];
    let mut rhs = vec![0i128; cols];
    let dmod = |bp: usize| ring.moduli()[bp % k] as i128;
    // Well-definedness: m_i h(g_i) = 0 in R^{n0}.
    for i in 0..t {
        for bp in 0..l {
            let col = i * l + bp;
            w[(i * l + bp, col)] = m.moduli()[i] as i128;
            moduli[col] = dmod(bp);
        }
    }
    // Linearity: h(g_i . e_p) = h(g_i) . e_p blockwise.
    let base1 = t * l;
    for i in 0..t {
        for p in 0..k {
            let am = m.action_matrix(p);
            let ar = reg.action_matrix(p);
            for b in 0..t {
                for pp in 0..k {
                    let col = base1 + (i * k + p) * l + b * k + pp;
                    moduli[col] = ring.moduli()[pp] as i128;
                    for j in 0..t {
                        let u = j * l + b * k + pp;
                        w[(u, col)] = w[(u, col)] + am[(i, j)];
                    }
                    for p2 in 0..k {
                        let u = i * l + b * k + p2;
                        w[(u, col)] = w[(u, col)] - ar[(p2, pp)];
                    }
                }
            }
        }
    }
    // Splitting: the cover map sends h(g_i) back to g_i.
    let base2 = base1 + t * k * l;
    for i in 0..t {
        for j in 0..t {
            let col = base2 + i * t + j;
            moduli[col] = m.moduli()[j] as i128;
            rhs[col] = i128::from(i == j);
            for b in 0..t {
                for p in 0..k {
                    let u = i * l + b * k + p;
                    w[(u, col)] = w[(u, col)] + m.action_matrix(p)[(b, j)];
                }
            }
        }
    }
    solve_congruence(&w, &rhs, &moduli).is_some()
}

#[cfg(test)]
mod test {
    use super::*;
    use crate::construct;
    use crate::ring::subring_generated;

    #[test]
    fn regular_module_matches_ring_multiplication() {
        for ring in [
            construct::cyclic(6).unwrap(),
            construct::triangular_ring(&construct::prime_field(2).unwrap(), 2).unwrap(),
        ] {
            let m = FiniteModule::regular(&ring);
            for x in ring.elements() {
                for r in ring.elements() {
                    assert_eq!(m.act(x, r), ring.mul(x, r));
                }
            }
        }
    }

    #[test]
    fn submodules_of_regular_are_right_ideals() {
        let f2 = construct::prime_field(2).unwrap();
        let t2 = construct::triangular_ring(&f2, 2).unwrap();
        let m = FiniteModule::regular(&t2);
        // Basis order: E11, E12, E22.
        let e12 = t2.basis_elem(1);
        let i = submodule_generated(&m, &[e12]);
        assert_eq!(i.order(), 2);
        let all = enumerate_submodules(&m, 1000).unwrap();
        assert_eq!(all.len(), 7);
        assert!(all.iter().all(|s| is_submodule_set(&m, &s.elements)));
        let z4 = construct::cyclic(4).unwrap();
        assert_eq!(enumerate_submodules(&FiniteModule::regular(&z4), 100).unwrap().len(), 3);
        let z6 = construct::cyclic(6).unwrap();
        assert_eq!(enumerate_submodules(&FiniteModule::regular(&z6), 100).unwrap().len(), 4);
    }

    #[test]
    fn realize_and_quotient_round_trip() {
        let z4 = construct::cyclic(4).unwrap();
        let m = FiniteModule::regular(&z4);
        let sub = submodule_generated(&m, &[2]);
        assert_eq!(sub.elements, vec![0, 2]);
        let rz = realize_submodule(&m, &sub).unwrap();
        assert_eq!(rz.module.order(), 2);
        assert_eq!(rz.module.moduli(), &[2]);
        // The standalone action: x . 1 = x, x . 2 = 0 (2 acts as zero on 2Z/4).
        assert_eq!(rz.module.act(1, 1), 1);
        assert_eq!(rz.module.act(1, 2), 0);
        assert_eq!(rz.from_carrier(&m, 2), Some(1));
        assert_eq!(rz.from_carrier(&m, 1), None);
        let q = quotient_module(&m, &sub).unwrap();
        assert_eq!(q.module.order(), 2);
        assert_eq!(q.project(&m, 1), q.project(&m, 3));
        assert_ne!(q.project(&m, 1), 0);
        assert_eq!(q.project(&m, 2), 0);
        // Quotient by the whole module collapses to zero.
        let qw = quotient_module(&m, &Submodule { elements: (0..4).collect(), gens: vec![1] })
            .unwrap();
        assert_eq!(qw.module.order(), 1);
        assert_eq!(qw.module.rank(), 0);
    }

    #[test]
    fn hom_groups_agree_with_exhaustive_scan() {
        let z4 = construct::cyclic(4).unwrap();
        let reg4 = FiniteModule::regular(&z4);
        let half = realize_submodule(&reg4, &submodule_generated(&reg4, &[2])).unwrap();
        let f2 = construct::prime_field(2).unwrap();
        let t2 = construct::triangular_ring(&f2, 2).unwrap();
        let regt = FiniteModule::regular(&t2);
        let e12 = realize_submodule(&regt, &submodule_generated(&regt, &[t2.basis_elem(1)]))
            .unwrap();
        let cases: Vec<(&FiniteModule, &FiniteModule)> = vec![
            (&half.module, &reg4),
            (&reg4, &half.module),
            (&regt, &regt),
            (&e12.module, &regt),
            (&regt, &e12.module),
        ];
        for (dom, cod) in cases {
            let hg = hom_group(dom, cod);
            let oracle = hom_group_exhaustive(dom, cod);
            assert_eq!(hg.order(), oracle.len() as u128);
            for h in &oracle {
                let c = hg.coords_of(h).expect("oracle hom must be in the group");
                assert_eq!(&hg.hom_from_coords(cod, &c), h);
            }
            // Generated homs are genuinely R-linear.
            for h in &hg.gens {
                assert!(oracle.contains(h));
            }
        }
        // Hom(R, R) is R additively.
        let hg = hom_group(&regt, &regt);
        assert_eq!(hg.order(), 8);
    }

    #[test]
    fn presentations_and_tensors() {
        let z4 = construct::cyclic(4).unwrap();
        let reg4 = FiniteModule::regular(&z4);
        let half = realize_submodule(&reg4, &submodule_generated(&reg4, &[2])).unwrap();
        let p = present(&half.module);
        assert_eq!(p.n0, 1);
        // R tensor anything is that thing: Z/4 (x) Z/2 over Z/4.
        let op = z4.opposite();
        let rego = FiniteModule::regular(&op);
        let half_left =
            realize_submodule(&rego, &submodule_generated(&rego, &[2])).unwrap();
        let t = tensor(&reg4, &half_left.module).unwrap();
        assert_eq!(t.order(), 2);
        // Z/2 (x)_{Z/4} Z/2 is Z/2, not zero.
        let t2 = tensor(&half.module, &half_left.module).unwrap();
        assert_eq!(t2.order(), 2);
        assert_eq!(t2.orders, vec![2]);
        // The pure tensor 1 (x) 1 generates it.
        assert_eq!(t2.pure(&half.module, 1, &half_left.module, 1), vec![1]);
        assert_eq!(t2.pure(&half.module, 0, &half_left.module, 1), vec![0]);
    }

    #[test]
    fn tensor_detects_flat_and_nonflat_directions() {
        // Over F2 x F2, the ideal F2 x 0 is projective, so tensoring with it
        // preserves the order product; over Z/4 the ideal 2Z/4 is not flat.
        let f2 = construct::prime_field(2).unwrap();
        let p = construct::product(&f2, &f2).unwrap();
        let regp = FiniteModule::regular(&p);
        let left = realize_submodule(&regp, &submodule_generated(&regp, &[p.basis_elem(0)]))
            .unwrap();
        assert!(is_projective(&left.module));
        let z4 = construct::cyclic(4).unwrap();
        let reg4 = FiniteModule::regular(&z4);
        let half = realize_submodule(&reg4, &submodule_generated(&reg4, &[2])).unwrap();
        assert!(!is_projective(&half.module));
        assert!(is_projective(&reg4));
        assert!(is_projective(&regp));
    }

    #[test]
    fn restriction_of_scalars_along_embeddings() {
        let f2 = construct::prime_field(2).unwrap();
        let m2 = construct::matrix_ring(&f2, 2).unwrap();
        let t2 = subring_generated(&m2, &[m2.basis_elem(0), m2.basis_elem(1), m2.basis_elem(3)]);
        let rz = crate::ring::realize_subring(
            &crate::ring::Extension::new(&f2, &m2, vec![m2.unit()]).unwrap(),
            &t2,
        )
        .unwrap();
        // M2(F2) as a right and left module over T2.
        let incl = crate::ring::Extension::new(
            &rz.ring,
            &m2,
            (0..rz.ring.rank()).map(|i| rz.to_carrier[rz.ring.basis_elem(i) as usize]).collect(),
        )
        .unwrap();
        let right = extension_as_right_module(&incl);
        assert_eq!(right.order(), 16);
        for x in m2.elements() {
            for r in rz.ring.elements() {
                assert_eq!(right.act(x, r), m2.mul(x, incl.apply(r)));
            }
        }
        let left = extension_as_left_module(&incl);
        assert_eq!(left.order(), 16);
        for x in m2.elements() {
            for r in rz.ring.elements() {
                assert_eq!(left.act(x, r), m2.mul(incl.apply(r), x));
            }
        }
    }
}
