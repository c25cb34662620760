//! Finite associative unital rings presented by structure constants.
//!
//! A ring of additive shape `Z_{d_1} x ... x Z_{d_k}` is described by the
//! products of basis elements, `e_i * e_j = sum c[i][j][l] e_l`, together
//! with the coordinates of the unit. Ring elements are mixed-radix indices
//! into the product of the cyclic factors, so element sets are plain sorted
//! `Vec<u64>` and membership scans are table lookups.
//!
//! Validation checks everything the presentation must satisfy: consistent
//! dimensions, bilinear compatibility with the moduli, associativity on all
//! basis triples and the two-sided unit law. Multiplication tables are
//! derived caches, not part of the definition.

use std::sync::Arc;

use crate::bits::BitSet;
use crate::error::Error;
use crate::mat::Mat;

/// Hard ceiling on ring order; inputs beyond this are refused up front so
/// derived tables and scans stay tractable.
pub const MAX_ORDER: u128 = 1 << 16;

/// Orders up to this get a full multiplication table (`order^2` entries).
const TABLE_LIMIT: u64 = 2048;

/// Raw ring definition, as read from a file or produced by a constructor.
#[derive(Clone, Debug, serde::Serialize, serde::Deserialize)]
pub struct RingDef {
    pub name: String,
    /// Additive orders `d_i` of the basis elements.
    pub moduli: Vec<u64>,
    /// Coordinates of the multiplicative unit.
    pub unit: Vec<i64>,
    /// `mul[i][j]` = coordinates of `e_i * e_j`.
    pub mul: Vec<Vec<Vec<i64>>>,
}

/// Validated finite ring. Immutable after construction; share via `Arc`.
pub struct FiniteRing {
    name: String,
    moduli: Vec<u64>,
    strides: Vec<u64>,
    order: u64,
    /// `tensor[i][j]` = reduced coordinates of `e_i * e_j`.
    tensor: Vec<Vec<Vec<u64>>>,
    unit: u64,
    neg_table: Vec<u32>,
    mul_table: Option<Vec<u32>>,
}

impl FiniteRing {
    pub fn new(def: &RingDef) -> Result<Arc<FiniteRing>, Error> {
        let k = def.moduli.len();
        if k == 0 {
            return Err(Error::BadDefinition("empty basis".into()));
        }
        if def.moduli.iter().any(|&d| d == 0) {
            return Err(Error::BadDefinition("moduli must be positive".into()));
        }
        if def.unit.len() != k {
            return Err(Error::BadDefinition(format!(
                "unit has {} coordinates, expected {k}",
                def.unit.len()
            )));
        }
        if def.mul.len() != k || def.mul.iter().any(|r| r.len() != k) {
            return Err(Error::BadDefinition("mul tensor is not k x k".into()));
        }
        for row in &def.mul {
            for c in row {
                if c.len() != k {
                    return Err(Error::BadDefinition(
                        "mul tensor entry has wrong coordinate count".into(),
                    ));
                }
            }
        }
        let order128 = def.moduli.iter().fold(1u128, |a, &d| a * d as u128);
        if order128 > MAX_ORDER {
            return Err(Error::BadDefinition(format!(
                "order {order128} exceeds the supported maximum {MAX_ORDER}"
            )));
        }
        let order = order128 as u64;
        let reduce = |c: &[i64]| -> Vec<u64> {
            c.iter()
                .zip(&def.moduli)
                .map(|(&x, &d)| (x as i128).rem_euclid(d as i128) as u64)
                .collect()
        };
        let tensor: Vec<Vec<Vec<u64>>> = def
            .mul
            .iter()
            .map(|row| row.iter().map(|c| reduce(c)).collect())
            .collect();
        let unit_coords = reduce(&def.unit);

        // Bilinear compatibility: d_i (e_i e_j) = 0 and d_j (e_i e_j) = 0
        // must already hold coordinatewise, otherwise multiplication is not
        // well defined on the presented additive group.
        for i in 0..k {
            for j in 0..k {
                for l in 0..k {
                    let c = tensor[i][j][l] as u128;
                    let dl = def.moduli[l] as u128;
                    if (def.moduli[i] as u128 * c) % dl != 0 {
                        return Err(Error::Compatibility {
                            i,
                            j,
                            detail: format!("d_{i} * (e_{i} e_{j}) has nonzero coordinate {l}"),
                        });
                    }
                    if (def.moduli[j] as u128 * c) % dl != 0 {
                        return Err(Error::Compatibility {
                            i,
                            j,
                            detail: format!("d_{j} * (e_{i} e_{j}) has nonzero coordinate {l}"),
                        });
                    }
                }
            }
        }

        let mut strides = vec![1u64; k];
        for i in 1..k {
            strides[i] = strides[i - 1] * def.moduli[i - 1];
        }
        let mut ring = FiniteRing {
            name: def.name.clone(),
            moduli: def.moduli.clone(),
            strides,
            order,
            tensor,
            unit: 0,
            neg_table: Vec::new(),
            mul_table: None,
        };
        ring.unit = ring.encode(&unit_coords);
        ring.neg_table = (0..order).map(|e| ring.neg_raw(e) as u32).collect();
        if order <= TABLE_LIMIT {
            let mut table = vec![0u32; (order * order) as usize];
            for a in 0..order {
                for b in 0..order {
                    table[(a * order + b) as usize] = ring.mul_raw(a, b) as u32;
                }
            }
            ring.mul_table = Some(table);
        }

        // Associativity on basis triples; bilinearity extends it everywhere.
        for i in 0..k {
            let ei = ring.basis_elem(i);
            for j in 0..k {
                let ej = ring.basis_elem(j);
                let ij = ring.mul(ei, ej);
                for l in 0..k {
                    let el = ring.basis_elem(l);
                    if ring.mul(ij, el) != ring.mul(ei, ring.mul(ej, el)) {
                        return Err(Error::Associativity { i, j, l });
                    }
                }
            }
        }
        // Two-sided unit law on the basis.
        for i in 0..k {
            let ei = ring.basis_elem(i);
            if ring.mul(ring.unit, ei) != ei || ring.mul(ei, ring.unit) != ei {
                return Err(Error::Unit { i });
            }
        }
        Ok(Arc::new(ring))
    }

    pub fn name(&self) -> &str {
        &self.name
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

    pub fn unit(&self) -> u64 {
        self.unit
    }

    pub fn zero(&self) -> u64 {
        0
    }

    pub fn elements(&self) -> impl Iterator<Item = u64> {
        0..self.order
    }

    pub fn basis_elem(&self, i: usize) -> u64 {
        self.strides[i]
    }

    pub fn decode(&self, e: u64) -> Vec<u64> {
        debug_assert!(e < self.order);
        self.moduli
            .iter()
            .zip(&self.strides)
            .map(|(&d, &s)| (e / s) % d)
            .collect()
    }

    pub fn decode_i128(&self, e: u64) -> Vec<i128> {
        self.decode(e).into_iter().map(|x| x as i128).collect()
    }

    pub fn encode(&self, coords: &[u64]) -> u64 {
        debug_assert_eq!(coords.len(), self.rank());
        coords
            .iter()
            .zip(self.moduli.iter().zip(&self.strides))
            .map(|(&c, (&d, &s))| (c % d) * s)
            .sum()
    }

    /// Encode a digit vector that may carry unreduced or negative entries.
    pub fn encode_i128(&self, coords: &[i128]) -> u64 {
        let reduced: Vec<u64> = coords
            .iter()
            .zip(&self.moduli)
            .map(|(&c, &d)| c.rem_euclid(d as i128) as u64)
            .collect();
        self.encode(&reduced)
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        let mut out = 0;
        for (&d, &s) in self.moduli.iter().zip(&self.strides) {
            let x = (a / s) % d;
            let y = (b / s) % d;
            out += ((x + y) % d) * s;
        }
        out
    }

    fn neg_raw(&self, a: u64) -> u64 {
        let mut out = 0;
        for (&d, &s) in self.moduli.iter().zip(&self.strides) {
            let x = (a / s) % d;
            out += ((d - x) % d) * s;
        }
        out
    }

    pub fn neg(&self, a: u64) -> u64 {
        self.neg_table[a as usize] as u64
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    /// Integer multiple `n * a` in the additive group.
    pub fn smul(&self, n: u64, a: u64) -> u64 {
        let mut out = 0;
        for (&d, &s) in self.moduli.iter().zip(&self.strides) {
            let x = (a / s) % d;
            out += ((x as u128 * n as u128) % d as u128) as u64 * s;
        }
        out
    }

    fn mul_raw(&self, a: u64, b: u64) -> u64 {
        let k = self.rank();
        let mut acc = vec![0u128; k];
        for i in 0..k {
            let ai = (a / self.strides[i]) % self.moduli[i];
            if ai == 0 {
                continue;
            }
            for j in 0..k {
                let bj = (b / self.strides[j]) % self.moduli[j];
                if bj == 0 {
                    continue;
                }
                let coef = ai as u128 * bj as u128;
                for (l, &c) in self.tensor[i][j].iter().enumerate() {
                    if c != 0 {
                        acc[l] = (acc[l] + coef * c as u128) % self.moduli[l] as u128;
                    }
                }
            }
        }
        let coords: Vec<u64> = acc.into_iter().map(|x| x as u64).collect();
        self.encode(&coords)
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        match &self.mul_table {
            Some(t) => t[(a * self.order + b) as usize] as u64,
            None => self.mul_raw(a, b),
        }
    }

    /// Additive order of an element: lcm over coordinates of d / gcd(d, x).
    pub fn additive_order(&self, a: u64) -> u64 {
        self.moduli
            .iter()
            .zip(&self.strides)
            .fold(1u64, |acc, (&d, &s)| {
                let x = (a / s) % d;
                let o = if x == 0 { 1 } else { d / gcd(d, x) };
                lcm(acc, o)
            })
    }

    pub fn is_commutative(&self) -> bool {
        let k = self.rank();
        (0..k).all(|i| {
            (0..k).all(|j| {
                self.mul(self.basis_elem(i), self.basis_elem(j))
                    == self.mul(self.basis_elem(j), self.basis_elem(i))
            })
        })
    }

    /// Ring with the same additive group and reversed multiplication.
    pub fn opposite(&self) -> Arc<FiniteRing> {
        let k = self.rank();
        let def = RingDef {
            name: format!("{}^op", self.name),
            moduli: self.moduli.clone(),
            unit: self.decode(self.unit).into_iter().map(|x| x as i64).collect(),
            mul: (0..k)
                .map(|i| {
                    (0..k)
                        .map(|j| self.tensor[j][i].iter().map(|&x| x as i64).collect())
                        .collect()
                })
                .collect(),
        };
        FiniteRing::new(&def).expect("opposite of a valid ring is valid")
    }

    /// Human-readable rendering of an element in basis coordinates.
    pub fn fmt_elem(&self, e: u64) -> String {
        let coords = self.decode(e);
        let terms: Vec<String> = coords
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| if c == 1 { format!("e{}", i + 1) } else { format!("{c}·e{}", i + 1) })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }

    /// Does this ring have the reversed multiplication of `other`?
    /// Structural equality: same additive group, same unit, same products of
    /// basis elements. Bilinearity extends agreement on the basis everywhere.
    pub fn same_structure(&self, other: &FiniteRing) -> bool {
        self.moduli == other.moduli
            && self.unit() == other.unit()
            && (0..self.rank()).all(|i| {
                (0..self.rank()).all(|j| {
                    let a = self.basis_elem(i);
                    let b = self.basis_elem(j);
                    self.mul(a, b) == other.mul(a, b)
                })
            })
    }

    pub fn is_opposite_of(&self, other: &FiniteRing) -> bool {
        self.moduli == other.moduli
            && self.unit == other.unit
            && (0..self.rank()).all(|i| {
                (0..self.rank()).all(|j| self.tensor[i][j] == other.tensor[j][i])
            })
    }
}

impl std::fmt::Debug for FiniteRing {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FiniteRing({}, order {}, moduli {:?})", self.name, self.order, self.moduli)
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// Subring of an ambient ring, stored as its sorted element set.
#[derive(Clone)]
pub struct Subring {
    pub ring: Arc<FiniteRing>,
    pub elements: Vec<u64>,
    pub gens: Vec<u64>,
}

impl Subring {
    pub fn whole(ring: &Arc<FiniteRing>) -> Subring {
        Subring {
            ring: ring.clone(),
            elements: ring.elements().collect(),
            gens: (0..ring.rank()).map(|i| ring.basis_elem(i)).collect(),
        }
    }

    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }

    pub fn contains(&self, e: u64) -> bool {
        self.elements.binary_search(&e).is_ok()
    }

    pub fn set_eq(&self, other: &Subring) -> bool {
        self.elements == other.elements
    }
}

/// Smallest subring of `ring` containing the seeds and the unit: close the
/// seed set under addition and multiplication (additive inverses follow in a
/// finite group).
pub fn subring_generated(ring: &Arc<FiniteRing>, seeds: &[u64]) -> Subring {
    let mut set = BitSet::new(ring.order() as usize);
    let mut list: Vec<u64> = Vec::new();
    let push = |set: &mut BitSet, list: &mut Vec<u64>, e: u64| {
        if set.insert(e) {
            list.push(e);
        }
    };
    push(&mut set, &mut list, ring.zero());
    push(&mut set, &mut list, ring.unit());
    for &s in seeds {
        push(&mut set, &mut list, s);
    }
    let mut next = 0;
    while next < list.len() {
        let x = list[next];
        next += 1;
        // Every pair is covered when its later member is processed.
        for idx in 0..next {
            let y = list[idx];
            for z in [ring.add(x, y), ring.mul(x, y), ring.mul(y, x)] {
                push(&mut set, &mut list, z);
            }
        }
    }
    let mut elements = set.to_vec();
    elements.sort_unstable();
    let mut gens = seeds.to_vec();
    gens.sort_unstable();
    gens.dedup();
    Subring { ring: ring.clone(), elements, gens }
}

/// Extend a subring by one element (same closure, seeded by the union).
pub fn subring_extend(base: &Subring, extra: u64) -> Subring {
    let ring = &base.ring;
    let mut set = BitSet::new(ring.order() as usize);
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
    let mut next = 0;
    while next < list.len() {
        let x = list[next];
        next += 1;
        // Base elements need no processing of their own: pairs inside the
        // closed base produce nothing new, and any pair (base, fresh) is
        // covered when the fresh element, which sits later in the list, is
        // processed against everything before it.
        if next <= base_len {
            continue;
        }
        for idx in 0..next {
            let y = list[idx];
            for z in [ring.add(x, y), ring.mul(x, y), ring.mul(y, x)] {
                if set.insert(z) {
                    list.push(z);
                }
            }
        }
    }
    let mut elements = set.to_vec();
    elements.sort_unstable();
    let mut gens = base.gens.clone();
    gens.push(extra);
    gens.sort_unstable();
    gens.dedup();
    Subring { ring: ring.clone(), elements, gens }
}

/// Is the sorted element set closed as a subring (unit, sums, products)?
pub fn is_subring_set(ring: &FiniteRing, elements: &[u64]) -> Result<(), Error> {
    let contains = |e: u64| elements.binary_search(&e).is_ok();
    if !contains(ring.unit()) || !contains(ring.zero()) {
        return Err(Error::NotASubring { a: ring.unit(), b: ring.unit() });
    }
    for &a in elements {
        for &b in elements {
            if !contains(ring.add(a, b)) || !contains(ring.mul(a, b)) {
                return Err(Error::NotASubring { a, b });
            }
        }
    }
    Ok(())
}

/// All subrings `T` with `lower ⊆ T ⊆ upper`, by breadth-first one-element
/// extensions with memoized closures. Results are sorted by (order, element
/// set) so the enumeration order is canonical.
pub fn enumerate_intermediate_subrings(
    lower: &Subring,
    upper: &Subring,
    cap: usize,
) -> Result<Vec<Subring>, Error> {
    use std::collections::HashMap;
    debug_assert!(lower.elements.iter().all(|&e| upper.contains(e)));
    let mut found: HashMap<Vec<u64>, Subring> = HashMap::new();
    let mut queue: Vec<Subring> = vec![lower.clone()];
    found.insert(lower.elements.clone(), lower.clone());
    let mut next = 0;
    while next < queue.len() {
        let cur = queue[next].clone();
        next += 1;
        let candidates: Vec<u64> = upper
            .elements
            .iter()
            .copied()
            .filter(|&e| !cur.contains(e))
            .collect();
        let extensions =
            crate::par::map_slice(&candidates, |&e| subring_extend(&cur, e).elements);
        for (i, elems) in extensions.into_iter().enumerate() {
            // Closure of a subset of the closed set `upper` stays inside it.
            debug_assert!(elems.iter().all(|e| upper.contains(*e)));
            if !found.contains_key(&elems) {
                if found.len() >= cap {
                    return Err(Error::CapExceeded { cap, what: "intermediate subrings" });
                }
                let mut gens = cur.gens.clone();
                gens.push(candidates[i]);
                gens.sort_unstable();
                gens.dedup();
                let sub = Subring { ring: cur.ring.clone(), elements: elems.clone(), gens };
                found.insert(elems, sub.clone());
                queue.push(sub);
            }
        }
    }
    let mut out: Vec<Subring> = found.into_values().collect();
    out.sort_by(|a, b| {
        (a.elements.len(), &a.elements).cmp(&(b.elements.len(), &b.elements))
    });
    Ok(out)
}

/// Additive closure of a set of elements; a subgroup, since the group is
/// finite.
pub fn additive_span(ring: &FiniteRing, gens: &[u64]) -> Vec<u64> {
    let mut set = BitSet::new(ring.order() as usize);
    let mut list: Vec<u64> = Vec::new();
    set.insert(0);
    list.push(0);
    for &g in gens {
        if set.insert(g) {
            list.push(g);
        }
    }
    let mut next = 0;
    while next < list.len() {
        let x = list[next];
        next += 1;
        for idx in 0..next {
            let z = ring.add(x, list[idx]);
            if set.insert(z) {
                list.push(z);
            }
        }
    }
    let mut v = set.to_vec();
    v.sort_unstable();
    v
}

/// Von Neumann regularity: every `a` has some `x` with `a x a = a`.
pub fn is_von_neumann_regular(ring: &FiniteRing) -> bool {
    ring.elements()
        .all(|a| ring.elements().any(|x| ring.mul(ring.mul(a, x), a) == a))
}

/// Two-sided non-zero-divisors, plus whether each one is a unit.
pub struct RegularElements {
    pub elements: Vec<u64>,
    pub all_units: bool,
}

pub fn regular_elements(ring: &FiniteRing) -> RegularElements {
    let mut elements = Vec::new();
    for a in ring.elements() {
        let ok = ring
            .elements()
            .filter(|&b| b != 0)
            .all(|b| ring.mul(a, b) != 0 && ring.mul(b, a) != 0);
        if ok {
            elements.push(a);
        }
    }
    let all_units = elements.iter().all(|&a| {
        ring.elements()
            .any(|x| ring.mul(a, x) == ring.unit() && ring.mul(x, a) == ring.unit())
    });
    RegularElements { elements, all_units }
}

/// Unital ring embedding `base -> target`, stored as the images of the base
/// basis elements plus a full element-to-element table.
pub struct Extension {
    pub base: Arc<FiniteRing>,
    pub target: Arc<FiniteRing>,
    pub images: Vec<u64>,
    map: Vec<u32>,
    /// Sorted image set, i.e. the copy of `base` inside `target`.
    pub image_set: Vec<u64>,
}

impl Extension {
    pub fn new(
        base: &Arc<FiniteRing>,
        target: &Arc<FiniteRing>,
        images: Vec<u64>,
    ) -> Result<Extension, Error> {
        if images.len() != base.rank() {
            return Err(Error::BadEmbedding("one image per basis element required".into()));
        }
        // Additive well-definedness: the image of e_i must die under d_i.
        for (i, &im) in images.iter().enumerate() {
            if target.smul(base.moduli()[i], im) != 0 {
                return Err(Error::BadEmbedding(format!(
                    "additive order of the image of e_{i} does not divide {}",
                    base.moduli()[i]
                )));
            }
        }
        let apply = |e: u64| -> u64 {
            let digits = base.decode(e);
            digits
                .iter()
                .zip(&images)
                .fold(0u64, |acc, (&c, &im)| target.add(acc, target.smul(c, im)))
        };
        // Multiplicative on basis pairs, unit to unit.
        for i in 0..base.rank() {
            for j in 0..base.rank() {
                let lhs = apply(base.mul(base.basis_elem(i), base.basis_elem(j)));
                let rhs = target.mul(images[i], images[j]);
                if lhs != rhs {
                    return Err(Error::BadEmbedding(format!(
                        "product of basis elements {i} and {j} is not preserved"
                    )));
                }
            }
        }
        if apply(base.unit()) != target.unit() {
            return Err(Error::BadEmbedding("unit is not preserved".into()));
        }
        let map: Vec<u32> = base.elements().map(|e| apply(e) as u32).collect();
        let mut image_set: Vec<u64> = map.iter().map(|&x| x as u64).collect();
        image_set.sort_unstable();
        image_set.dedup();
        if image_set.len() != base.order() as usize {
            return Err(Error::BadEmbedding("map is not injective".into()));
        }
        Ok(Extension { base: base.clone(), target: target.clone(), images, map, image_set })
    }

    pub fn identity(ring: &Arc<FiniteRing>) -> Extension {
        let images = (0..ring.rank()).map(|i| ring.basis_elem(i)).collect();
        Extension::new(ring, ring, images).expect("identity embedding is valid")
    }

    pub fn apply(&self, e: u64) -> u64 {
        self.map[e as usize] as u64
    }

    pub fn image_contains(&self, t: u64) -> bool {
        self.image_set.binary_search(&t).is_ok()
    }

    /// Preimage of a target element, when it lies in the image.
    pub fn preimage(&self, t: u64) -> Option<u64> {
        // The map table is small; a linear scan keeps no extra state.
        self.map.iter().position(|&x| x as u64 == t).map(|i| i as u64)
    }

    /// The same embedding read as `base^op -> target^op`.
    pub fn opposite(&self) -> Extension {
        Extension::new(&self.base.opposite(), &self.target.opposite(), self.images.clone())
            .expect("opposite of an embedding is an embedding")
    }
}

/// A subring of a carrier realized as a standalone ring: an invariant-factor
/// basis of its additive group, structure constants read off inside the
/// carrier, and the translation table back into the carrier.
pub struct RealizedSubring {
    pub ring: Arc<FiniteRing>,
    /// Element of the carrier for each standalone element index.
    pub to_carrier: Vec<u64>,
    /// Extension `base -> standalone ring` induced by `lambda`.
    pub ext: Extension,
}

/// Realize `sub` (a subring of `lambda.target` containing the image of
/// `lambda`) as a standalone extension of `lambda.base`.
pub fn realize_subring(lambda: &Extension, sub: &Subring) -> Result<RealizedSubring, Error> {
    let carrier = &lambda.target;
    debug_assert!(std::ptr::eq(carrier.as_ref(), sub.ring.as_ref()));
    for i in 0..lambda.base.rank() {
        let im = lambda.apply(lambda.base.basis_elem(i));
        if !sub.contains(im) {
            return Err(Error::Internal(
                "extension image is not contained in the subring being realized".into(),
            ));
        }
    }
    let rows: Vec<Vec<i128>> = sub.elements.iter().map(|&e| carrier.decode_i128(e)).collect();
    let gens_mat = if rows.is_empty() {
        Mat::zeros(0, carrier.rank())
    } else {
        Mat::from_rows(rows)
    };
    let basis = crate::mat::SubgroupBasis::new(carrier.moduli(), &gens_mat);
    if basis.order() != sub.elements.len() as u128 {
        return Err(Error::Internal(format!(
            "subgroup basis order {} does not match subring order {}",
            basis.order(),
            sub.elements.len()
        )));
    }
    let s = basis.orders.len();
    let gen_elems: Vec<u64> = (0..s)
        .map(|g| carrier.encode_i128(basis.gens.row(g)))
        .collect();
    let coords_of = |e: u64| -> Result<Vec<i64>, Error> {
        basis
            .coords_of(&carrier.decode_i128(e))
            .map(|v| v.into_iter().map(|x| x as i64).collect())
            .ok_or_else(|| Error::Internal("element escaped its own subgroup".into()))
    };
    let mut mul = vec![vec![Vec::new(); s]; s];
    for i in 0..s {
        for j in 0..s {
            mul[i][j] = coords_of(carrier.mul(gen_elems[i], gen_elems[j]))?;
        }
    }
    let def = RingDef {
        name: format!("{}[sub {}]", carrier.name(), sub.elements.len()),
        moduli: basis.orders.clone(),
        unit: coords_of(carrier.unit())?,
        mul,
    };
    let ring = FiniteRing::new(&def)
        .map_err(|e| Error::Internal(format!("realized subring failed validation: {e}")))?;
    let to_carrier: Vec<u64> = ring
        .elements()
        .map(|e| {
            let digits = ring.decode(e);
            digits
                .iter()
                .zip(&gen_elems)
                .fold(0u64, |acc, (&c, &g)| carrier.add(acc, carrier.smul(c, g)))
        })
        .collect();
    {
        let mut sorted = to_carrier.clone();
        sorted.sort_unstable();
        if sorted != sub.elements {
            return Err(Error::Internal("realized subring does not cover the subring".into()));
        }
    }
    let images: Vec<u64> = (0..lambda.base.rank())
        .map(|i| {
            let im = lambda.apply(lambda.base.basis_elem(i));
            let c = coords_of(im)?;
            let digits: Vec<u64> = c
                .iter()
                .zip(ring.moduli())
                .map(|(&x, &d)| (x as i128).rem_euclid(d as i128) as u64)
                .collect();
            Ok(ring.encode(&digits))
        })
        .collect::<Result<_, Error>>()?;
    let ext = Extension::new(&lambda.base, &ring, images)
        .map_err(|e| Error::Internal(format!("induced embedding failed validation: {e}")))?;
    Ok(RealizedSubring { ring, to_carrier, ext })
}

/// Are two finite rings isomorphic? Backtracking over images of the additive
/// basis with order, independence and partial-multiplicativity pruning.
pub fn are_isomorphic(a: &Arc<FiniteRing>, b: &Arc<FiniteRing>) -> bool {
    if a.order() != b.order() {
        return false;
    }
    // Additive invariant: multiset of invariant factors must agree.
    let inv = |r: &FiniteRing| {
        let rows: Vec<Vec<i128>> = (0..r.rank())
            .map(|i| r.decode_i128(r.basis_elem(i)))
            .collect();
        let mut s = crate::mat::SubgroupBasis::new(r.moduli(), &Mat::from_rows(rows)).orders;
        s.sort_unstable();
        s
    };
    if inv(a) != inv(b) {
        return false;
    }
    let k = a.rank();
    let mut images = vec![0u64; k];
    // Track the subgroup of b generated by images chosen so far.
    fn place(
        a: &FiniteRing,
        b: &FiniteRing,
        images: &mut Vec<u64>,
        i: usize,
        span: &BitSet,
    ) -> bool {
        let k = a.rank();
        if i == k {
            // Full additive map; verify it is a unital ring isomorphism.
            let apply = |e: u64| -> u64 {
                a.decode(e)
                    .iter()
                    .zip(images.iter())
                    .fold(0u64, |acc, (&c, &im)| b.add(acc, b.smul(c, im)))
            };
            let mut seen = BitSet::new(b.order() as usize);
            for e in a.elements() {
                if !seen.insert(apply(e)) {
                    return false;
                }
            }
            if apply(a.unit()) != b.unit() {
                return false;
            }
            for p in 0..k {
                for q in 0..k {
                    let lhs = apply(a.mul(a.basis_elem(p), a.basis_elem(q)));
                    let rhs = b.mul(images[p], images[q]);
                    if lhs != rhs {
                        return false;
                    }
                }
            }
            return true;
        }
        let d = a.moduli()[i];
        for x in b.elements() {
            if b.smul(d, x) != 0 {
                continue;
            }
            // Injectivity pruning: the span so far must grow by a factor of
            // exactly d when x joins, since the source subgroup generated by
            // e_1..e_i has order d_1 * ... * d_i.
            let mut span2 = span.clone();
            let mut list: Vec<u64> = span.to_vec();
            let before = list.len();
            if span2.insert(x) {
                list.push(x);
            }
            let mut idx = 0;
            while idx < list.len() {
                let u = list[idx];
                idx += 1;
                for jdx in 0..idx {
                    let s = b.add(u, list[jdx]);
                    if span2.insert(s) {
                        list.push(s);
                    }
                }
            }
            if span2.count() != before * d as usize {
                continue;
            }
            images[i] = x;
            // Partial multiplicativity: products of placed basis elements
            // whose coordinates only involve placed basis elements.
            let mut ok = true;
            'pairs: for p in 0..=i {
                for q in 0..=i {
                    let prod = a.mul(a.basis_elem(p), a.basis_elem(q));
                    let digits = a.decode(prod);
                    if digits.iter().skip(i + 1).any(|&c| c != 0) {
                        continue;
                    }
                    let lhs = digits
                        .iter()
                        .take(i + 1)
                        .zip(images.iter())
                        .fold(0u64, |acc, (&c, &im)| b.add(acc, b.smul(c, im)));
                    if lhs != b.mul(images[p], images[q]) {
                        ok = false;
                        break 'pairs;
                    }
                }
            }
            if ok && place(a, b, images, i + 1, &span2) {
                return true;
            }
        }
        false
    }
    let mut span0 = BitSet::new(b.order() as usize);
    span0.insert(0);
    place(a, b, &mut images, 0, &span0)
}

#[cfg(test)]
mod test {
    use super::*;
    use crate::construct;

    pub(crate) fn group_ring_c2() -> Arc<FiniteRing> {
        // F2[C2]: basis {1, g} with g^2 = 1.
        FiniteRing::new(&RingDef {
            name: "F2[C2]".into(),
            moduli: vec![2, 2],
            unit: vec![1, 0],
            mul: vec![
                vec![vec![1, 0], vec![0, 1]],
                vec![vec![0, 1], vec![1, 0]],
            ],
        })
        .unwrap()
    }

    #[test]
    fn validation_accepts_good_rings() {
        assert_eq!(construct::cyclic(4).unwrap().order(), 4);
        let f2 = construct::prime_field(2).unwrap();
        let p = construct::product(&f2, &f2).unwrap();
        assert_eq!(p.order(), 4);
        assert_eq!(construct::matrix_ring(&f2, 2).unwrap().order(), 16);
        assert_eq!(construct::triangular_ring(&f2, 2).unwrap().order(), 8);
        assert_eq!(construct::truncated_polynomial(&f2, 2).unwrap().order(), 4);
    }

    #[test]
    fn validation_rejects_bad_unit() {
        // Rank 1, d = 2, e*e = 0 but unit = e: the unit law must fail.
        let def = RingDef {
            name: "bad".into(),
            moduli: vec![2],
            unit: vec![1],
            mul: vec![vec![vec![0]]],
        };
        match FiniteRing::new(&def) {
            Err(Error::Unit { i: 0 }) => {}
            other => panic!("expected unit violation, got {other:?}"),
        }
    }

    #[test]
    fn validation_rejects_incompatible_tensor() {
        // e1 has additive order 2 but e1*e2 has a coordinate of order 4 that
        // does not die under multiplication by 2.
        let def = RingDef {
            name: "bad".into(),
            moduli: vec![2, 4],
            unit: vec![1, 0],
            mul: vec![
                vec![vec![1, 0], vec![0, 1]],
                vec![vec![0, 1], vec![0, 1]],
            ],
        };
        assert!(matches!(FiniteRing::new(&def), Err(Error::Compatibility { .. })));
    }

    #[test]
    fn arithmetic_round_trips() {
        let r = construct::cyclic(6).unwrap();
        for a in r.elements() {
            assert_eq!(r.add(a, r.neg(a)), 0);
            assert_eq!(r.mul(a, r.unit()), a);
            assert_eq!(r.mul(r.unit(), a), a);
        }
        let t2 = construct::triangular_ring(&construct::prime_field(2).unwrap(), 2).unwrap();
        for a in t2.elements() {
            for b in t2.elements() {
                for c in t2.elements() {
                    assert_eq!(t2.mul(t2.mul(a, b), c), t2.mul(a, t2.mul(b, c)));
                }
            }
        }
    }

    #[test]
    fn unit_multiplication_is_identity_permutation() {
        for ring in [
            construct::cyclic(4).unwrap(),
            construct::matrix_ring(&construct::prime_field(2).unwrap(), 2).unwrap(),
            group_ring_c2(),
        ] {
            for e in ring.elements() {
                assert_eq!(ring.mul(ring.unit(), e), e);
                assert_eq!(ring.mul(e, ring.unit()), e);
            }
        }
    }

    #[test]
    fn generated_subrings_match_expected_orders() {
        let f2 = construct::prime_field(2).unwrap();
        let m2 = construct::matrix_ring(&f2, 2).unwrap();
        // Empty seeds give the prime subring {0, 1}.
        assert_eq!(subring_generated(&m2, &[]).order(), 2);
        // The upper triangular matrix units generate T2(F2) of order 8.
        // Basis layout: E11, E12, E21, E22 at slots 0..4.
        let seeds = [m2.basis_elem(0), m2.basis_elem(1), m2.basis_elem(3)];
        assert_eq!(subring_generated(&m2, &seeds).order(), 8);
        // (1, 0) plus the unit generates all of F2 x F2.
        let p = construct::product(&f2, &f2).unwrap();
        assert_eq!(subring_generated(&p, &[p.basis_elem(0)]).order(), 4);
        // Idempotence: closing a closed set changes nothing.
        let s = subring_generated(&m2, &seeds);
        let again = subring_generated(&m2, &s.elements);
        assert!(s.set_eq(&again));
    }

    #[test]
    fn intermediate_subrings_of_small_extensions() {
        let f2 = construct::prime_field(2).unwrap();
        // R = S: exactly one intermediate subring.
        let whole = Subring::whole(&f2);
        let all = enumerate_intermediate_subrings(&whole, &whole, 100).unwrap();
        assert_eq!(all.len(), 1);
        // Diagonal F2 inside F2 x F2: the diagonal and the whole ring.
        let p = construct::product(&f2, &f2).unwrap();
        let diag = subring_generated(&p, &[]);
        assert_eq!(diag.order(), 2);
        let all = enumerate_intermediate_subrings(&diag, &Subring::whole(&p), 100).unwrap();
        assert_eq!(all.len(), 2);
        // A tight cap is reported, not silently ignored.
        assert!(matches!(
            enumerate_intermediate_subrings(&diag, &Subring::whole(&p), 1),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn intermediate_subrings_are_intersection_closed() {
        let f2 = construct::prime_field(2).unwrap();
        let m2 = construct::matrix_ring(&f2, 2).unwrap();
        let t2 = subring_generated(&m2, &[m2.basis_elem(0), m2.basis_elem(1), m2.basis_elem(3)]);
        let subs = enumerate_intermediate_subrings(&t2, &Subring::whole(&m2), 1000).unwrap();
        assert!(subs.iter().any(|s| s.set_eq(&t2)));
        assert!(subs.iter().any(|s| s.order() == m2.order()));
        for x in &subs {
            for y in &subs {
                let inter: Vec<u64> = x
                    .elements
                    .iter()
                    .copied()
                    .filter(|e| y.contains(*e))
                    .collect();
                assert!(
                    subs.iter().any(|s| s.elements == inter),
                    "intersection of two intermediate subrings is missing"
                );
            }
        }
    }

    #[test]
    fn von_neumann_regularity_verdicts() {
        let f2 = construct::prime_field(2).unwrap();
        assert!(is_von_neumann_regular(&construct::matrix_ring(&f2, 2).unwrap()));
        assert!(!is_von_neumann_regular(&construct::cyclic(4).unwrap()));
        assert!(!is_von_neumann_regular(&construct::triangular_ring(&f2, 2).unwrap()));
    }

    #[test]
    fn regular_elements_are_units() {
        let z6 = construct::cyclic(6).unwrap();
        let reg = regular_elements(&z6);
        assert_eq!(reg.elements, vec![1, 5]);
        assert!(reg.all_units);
        let f2 = construct::prime_field(2).unwrap();
        let tp = construct::truncated_polynomial(&f2, 2).unwrap();
        let reg = regular_elements(&tp);
        // 1 and 1 + x.
        assert_eq!(reg.elements.len(), 2);
        assert!(reg.all_units);
        let t2 = construct::triangular_ring(&f2, 2).unwrap();
        let reg = regular_elements(&t2);
        assert_eq!(reg.elements.len(), 2);
        assert!(reg.all_units);
    }

    #[test]
    fn opposite_of_triangular_is_not_itself_but_product_is() {
        let f2 = construct::prime_field(2).unwrap();
        let t2 = construct::triangular_ring(&f2, 2).unwrap();
        let op = t2.opposite();
        assert!(op.is_opposite_of(&t2));
        assert!(!t2.is_commutative());
        let z6 = construct::cyclic(6).unwrap();
        assert!(z6.is_commutative());
        assert!(z6.opposite().is_opposite_of(&z6));
    }

    #[test]
    fn embeddings_validate_and_apply() {
        let f2 = construct::prime_field(2).unwrap();
        let p = construct::product(&f2, &f2).unwrap();
        // Diagonal embedding F2 -> F2 x F2.
        let diag = Extension::new(&f2, &p, vec![p.unit()]).unwrap();
        assert_eq!(diag.apply(f2.unit()), p.unit());
        assert_eq!(diag.image_set.len(), 2);
        // (1, 0) is not a unital image for the basis of F2.
        assert!(Extension::new(&f2, &p, vec![p.basis_elem(0)]).is_err());
    }

    #[test]
    fn realize_subring_round_trips() {
        let f2 = construct::prime_field(2).unwrap();
        let m2 = construct::matrix_ring(&f2, 2).unwrap();
        // Unit embedding F2 -> M2(F2); its image {0, I} sits inside T2.
        let lambda = Extension::new(&f2, &m2, vec![m2.unit()]).unwrap();
        let t2 = subring_generated(&m2, &[m2.basis_elem(0), m2.basis_elem(1), m2.basis_elem(3)]);
        let rz = realize_subring(&lambda, &t2).unwrap();
        assert_eq!(rz.ring.order(), 8);
        assert_eq!(rz.ext.apply(f2.unit()), rz.ring.unit());
        // Realizing a subring that misses the image is rejected.
        assert!(realize_subring(&Extension::identity(&m2), &t2).is_err());
        // Translation respects multiplication.
        for a in rz.ring.elements() {
            for b in rz.ring.elements() {
                let lhs = rz.to_carrier[rz.ring.mul(a, b) as usize];
                let rhs = m2.mul(rz.to_carrier[a as usize], rz.to_carrier[b as usize]);
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn isomorphism_search_distinguishes_and_identifies() {
        let f2 = construct::prime_field(2).unwrap();
        let z4 = construct::cyclic(4).unwrap();
        let tp = construct::truncated_polynomial(&f2, 2).unwrap();
        let gr = group_ring_c2();
        // Z/4 and F2[x]/(x^2) have the same order, different additive groups.
        assert!(!are_isomorphic(&z4, &tp));
        // F2[C2] and F2[x]/(x^2) are isomorphic via g -> 1 + x.
        assert!(are_isomorphic(&gr, &tp));
        assert!(are_isomorphic(&z4, &construct::cyclic(4).unwrap()));
        // The path algebra of the A2 quiver is T2.
        let a2 = construct::path_algebra(&construct::QuiverDef {
            field: 2,
            vertices: 2,
            arrows: vec![(0, 1)],
            zero_relations: vec![],
        })
        .unwrap();
        let t2 = construct::triangular_ring(&f2, 2).unwrap();
        assert!(are_isomorphic(&a2, &t2));
        assert!(!are_isomorphic(&a2, &construct::product(&f2, &construct::product(&f2, &f2).unwrap()).unwrap()));
    }
}
