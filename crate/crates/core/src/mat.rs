//! Exact integer matrices and the Smith normal form.
//!
//! Everything downstream (hom groups, tensors, quotient groups, subgroup
//! bases) reduces to integer lattice computations, and every lattice
//! computation here reduces to one primitive: the Smith normal form with
//! all four transform matrices. Row-vector convention throughout: vectors
//! are rows, maps act on the right, the kernel of `a` is `{x : x a = 0}`.
//!
//! Entries are `i128` with checked arithmetic. Inputs come from rings of
//! order at most 2^16, so overflow would indicate a bug rather than a
//! legitimately large computation; we panic loudly instead of wrapping.

/// Dense row-major integer matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    a: Vec<i128>,
}

fn cadd(x: i128, y: i128) -> i128 {
    x.checked_add(y).expect("integer overflow in exact arithmetic")
}

fn cmul(x: i128, y: i128) -> i128 {
    x.checked_mul(y).expect("integer overflow in exact arithmetic")
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, a: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<i128>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut a = Vec::with_capacity(r * c);
        for row in &rows {
            assert_eq!(row.len(), c, "ragged rows");
            a.extend_from_slice(row);
        }
        Mat { rows: r, cols: c, a }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[i128] {
        &self.a[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<i128>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// self * other with checked arithmetic.
    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "dimension mismatch in mul");
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let s = self[(i, k)];
                if s == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] = cadd(out[(i, j)], cmul(s, other[(k, j)]));
                }
            }
        }
        out
    }

    /// Stack `other` below `self`; column counts must agree.
    pub fn vstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.cols, "dimension mismatch in vstack");
        let mut a = self.a.clone();
        a.extend_from_slice(&other.a);
        Mat { rows: self.rows + other.rows, cols: self.cols, a }
    }

    pub fn is_zero(&self) -> bool {
        self.a.iter().all(|&x| x == 0)
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = i128;
    fn index(&self, (i, j): (usize, usize)) -> &i128 {
        &self.a[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i128 {
        &mut self.a[i * self.cols + j]
    }
}

impl std::fmt::Debug for Mat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

/// Smith normal form `u * a * v = d` with `u`, `v` unimodular and `d`
/// diagonal with nonnegative entries satisfying the divisibility chain.
pub struct Smith {
    pub u: Mat,
    pub uinv: Mat,
    pub v: Mat,
    pub vinv: Mat,
    pub d: Mat,
}

impl Smith {
    /// Diagonal entry, zero past the stored diagonal.
    pub fn diag(&self, i: usize) -> i128 {
        if i < self.d.rows.min(self.d.cols) {
            self.d[(i, i)]
        } else {
            0
        }
    }

    pub fn rank(&self) -> usize {
        let n = self.d.rows.min(self.d.cols);
        (0..n).filter(|&i| self.d[(i, i)] != 0).count()
    }
}

struct Worker {
    d: Mat,
    u: Mat,
    uinv: Mat,
    v: Mat,
    vinv: Mat,
}

impl Worker {
    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.d.cols {
            let t = self.d[(a, j)];
            self.d[(a, j)] = self.d[(b, j)];
            self.d[(b, j)] = t;
        }
        for j in 0..self.u.cols {
            let t = self.u[(a, j)];
            self.u[(a, j)] = self.u[(b, j)];
            self.u[(b, j)] = t;
        }
        // (E U)^-1 = U^-1 E^-1: swapping rows a,b of u swaps columns a,b of uinv.
        for i in 0..self.uinv.rows {
            let t = self.uinv[(i, a)];
            self.uinv[(i, a)] = self.uinv[(i, b)];
            self.uinv[(i, b)] = t;
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.d.rows {
            let t = self.d[(i, a)];
            self.d[(i, a)] = self.d[(i, b)];
            self.d[(i, b)] = t;
        }
        for i in 0..self.v.rows {
            let t = self.v[(i, a)];
            self.v[(i, a)] = self.v[(i, b)];
            self.v[(i, b)] = t;
        }
        for j in 0..self.vinv.cols {
            let t = self.vinv[(a, j)];
            self.vinv[(a, j)] = self.vinv[(b, j)];
            self.vinv[(b, j)] = t;
        }
    }

    /// row[dst] += c * row[src]
    fn addmul_row(&mut self, src: usize, dst: usize, c: i128) {
        if c == 0 {
            return;
        }
        for j in 0..self.d.cols {
            self.d[(dst, j)] = cadd(self.d[(dst, j)], cmul(c, self.d[(src, j)]));
        }
        for j in 0..self.u.cols {
            self.u[(dst, j)] = cadd(self.u[(dst, j)], cmul(c, self.u[(src, j)]));
        }
        // uinv gains the inverse op on columns: col[src] -= c * col[dst].
        for i in 0..self.uinv.rows {
            self.uinv[(i, src)] = cadd(self.uinv[(i, src)], cmul(-c, self.uinv[(i, dst)]));
        }
    }

    /// col[dst] += c * col[src]
    fn addmul_col(&mut self, src: usize, dst: usize, c: i128) {
        if c == 0 {
            return;
        }
        for i in 0..self.d.rows {
            self.d[(i, dst)] = cadd(self.d[(i, dst)], cmul(c, self.d[(i, src)]));
        }
        for i in 0..self.v.rows {
            self.v[(i, dst)] = cadd(self.v[(i, dst)], cmul(c, self.v[(i, src)]));
        }
        for j in 0..self.vinv.cols {
            self.vinv[(src, j)] = cadd(self.vinv[(src, j)], cmul(-c, self.vinv[(dst, j)]));
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.d.cols {
            self.d[(i, j)] = -self.d[(i, j)];
        }
        for j in 0..self.u.cols {
            self.u[(i, j)] = -self.u[(i, j)];
        }
        for r in 0..self.uinv.rows {
            self.uinv[(r, i)] = -self.uinv[(r, i)];
        }
    }
}

/// Compute the Smith normal form of `a`.
pub fn smith(a: &Mat) -> Smith {
    let (m, n) = (a.rows, a.cols);
    let mut w = Worker {
        d: a.clone(),
        u: Mat::identity(m),
        uinv: Mat::identity(m),
        v: Mat::identity(n),
        vinv: Mat::identity(n),
    };
    let lim = m.min(n);
    for t in 0..lim {
        'position: loop {
            // Pivot: smallest nonzero entry of the remaining block.
            let mut pivot: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    let x = w.d[(i, j)].unsigned_abs();
                    if x != 0 && pivot.map_or(true, |p| x < w.d[p].unsigned_abs()) {
                        pivot = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = pivot else { break 'position };
            w.swap_rows(t, pi);
            w.swap_cols(t, pj);
            // Clear row and column t; a nonzero remainder is strictly smaller
            // than the pivot, so swapping it up and retrying terminates.
            loop {
                let mut dirty = false;
                for i in t + 1..m {
                    let q = w.d[(i, t)].div_euclid(w.d[(t, t)]);
                    w.addmul_row(t, i, -q);
                    if w.d[(i, t)] != 0 {
                        w.swap_rows(t, i);
                        dirty = true;
                    }
                }
                if dirty {
                    continue;
                }
                for j in t + 1..n {
                    let q = w.d[(t, j)].div_euclid(w.d[(t, t)]);
                    w.addmul_col(t, j, -q);
                    if w.d[(t, j)] != 0 {
                        w.swap_cols(t, j);
                        dirty = true;
                    }
                }
                if !dirty {
                    break;
                }
            }
            if w.d[(t, t)] < 0 {
                w.negate_row(t);
            }
            // Enforce d_t | (every remaining entry): fold an offending row
            // into row t and redo this position with a strictly smaller gcd.
            for i in t + 1..m {
                for j in t + 1..n {
                    if w.d[(i, j)] % w.d[(t, t)] != 0 {
                        w.addmul_row(i, t, 1);
                        continue 'position;
                    }
                }
            }
            break 'position;
        }
        if w.d[(t, t)] == 0 {
            break;
        }
    }
    Smith { u: w.u, uinv: w.uinv, v: w.v, vinv: w.vinv, d: w.d }
}

/// Basis (as rows) of the kernel lattice `{x : x a = 0}`.
pub fn kernel(a: &Mat) -> Mat {
    let s = smith(a);
    let mut rows = Vec::new();
    for i in 0..a.rows {
        if s.diag(i) == 0 {
            rows.push(s.u.row(i).to_vec());
        }
    }
    if rows.is_empty() {
        Mat::zeros(0, a.rows)
    } else {
        Mat::from_rows(rows)
    }
}

/// One solution of `x a = b`, if any.
pub fn solve_left(a: &Mat, b: &[i128]) -> Option<Vec<i128>> {
    assert_eq!(b.len(), a.cols);
    let s = smith(a);
    // y d = b v with x = y u.
    let bv: Vec<i128> = (0..a.cols)
        .map(|j| (0..a.cols).fold(0i128, |acc, i| cadd(acc, cmul(b[i], s.v[(i, j)]))))
        .collect();
    let mut y = vec![0i128; a.rows];
    for j in 0..a.cols {
        let d = s.diag(j);
        if d == 0 {
            if bv[j] != 0 {
                return None;
            }
        } else {
            if bv[j] % d != 0 {
                return None;
            }
            if j < a.rows {
                y[j] = bv[j] / d;
            } else if bv[j] != 0 {
                return None;
            }
        }
    }
    let x: Vec<i128> = (0..a.rows)
        .map(|j| (0..a.rows).fold(0i128, |acc, i| cadd(acc, cmul(y[i], s.u[(i, j)]))))
        .collect();
    Some(x)
}

/// Basis (as rows) of the lattice spanned by the rows of `g`.
pub fn lattice_basis(g: &Mat) -> Mat {
    if g.rows == 0 {
        return Mat::zeros(0, g.cols);
    }
    let s = smith(g);
    // row span of g = row span of u g = row span of d v^-1.
    let mut rows = Vec::new();
    for i in 0..g.rows.min(g.cols) {
        let d = s.diag(i);
        if d != 0 {
            rows.push(s.vinv.row(i).iter().map(|&x| cmul(d, x)).collect());
        }
    }
    if rows.is_empty() {
        Mat::zeros(0, g.cols)
    } else {
        Mat::from_rows(rows)
    }
}

/// `w` with every positive-modulus column reduced into `[0, m)`; congruence
/// solutions only depend on these residues, and small entries keep the
/// elimination in `smith` far away from overflow.
fn reduce_cols(w: &Mat, moduli: &[i128]) -> Mat {
    let mut r = w.clone();
    for j in 0..w.cols {
        let m = moduli[j].unsigned_abs() as i128;
        if m != 0 {
            for i in 0..w.rows {
                r[(i, j)] = r[(i, j)].rem_euclid(m);
            }
        }
    }
    r
}

/// Solve `x w ≡ b (mod moduli)` for integer `x`, where congruence is taken
/// entrywise: entry `j` of `x w - b` must be divisible by `moduli[j]`.
/// A modulus of 0 means exact equality in that entry.
pub fn solve_congruence(w: &Mat, b: &[i128], moduli: &[i128]) -> Option<Vec<i128>> {
    assert_eq!(b.len(), w.cols);
    assert_eq!(moduli.len(), w.cols);
    // Augment with modulus rows: [x y] [w; diag(moduli)] = b.
    let mut diag = Mat::zeros(w.cols, w.cols);
    for j in 0..w.cols {
        diag[(j, j)] = moduli[j];
    }
    let b: Vec<i128> = (0..w.cols)
        .map(|j| {
            let m = moduli[j].unsigned_abs() as i128;
            if m == 0 { b[j] } else { b[j].rem_euclid(m) }
        })
        .collect();
    let stacked = reduce_cols(w, moduli).vstack(&diag);
    solve_left(&stacked, &b).map(|mut x| {
        x.truncate(w.rows);
        x
    })
}

/// Generators of `{x : x w ≡ 0 (mod moduli)}`, entrywise as above.
pub fn kernel_mod(w: &Mat, moduli: &[i128]) -> Mat {
    assert_eq!(moduli.len(), w.cols);
    let mut diag = Mat::zeros(w.cols, w.cols);
    for j in 0..w.cols {
        diag[(j, j)] = moduli[j];
    }
    let stacked = reduce_cols(w, moduli).vstack(&diag);
    let k = kernel(&stacked);
    let rows: Vec<Vec<i128>> = (0..k.rows()).map(|i| k.row(i)[..w.rows].to_vec()).collect();
    if rows.is_empty() {
        Mat::zeros(0, w.rows)
    } else {
        Mat::from_rows(rows)
    }
}

/// A finite abelian group `Z_{m_1} x ... x Z_{m_t} / <relations>` presented
/// in coordinates adapted to the quotient: `orders` lists the cyclic orders
/// (every entry > 1), `project` maps an ambient digit vector to quotient
/// coordinates and `lift` maps a quotient basis vector back to the ambient.
pub struct QuotientGroup {
    pub orders: Vec<u64>,
    ambient_moduli: Vec<u64>,
    v: Mat,
    vinv: Mat,
    /// Indices on the adapted diagonal with order > 1.
    kept: Vec<(usize, u64)>,
}

impl QuotientGroup {
    /// Quotient of the group with the given moduli by the subgroup generated
    /// by `gens` (rows of ambient digit vectors).
    pub fn new(moduli: &[u64], gens: &Mat) -> QuotientGroup {
        let t = moduli.len();
        assert!(gens.rows() == 0 || gens.cols() == t);
        let mut rows: Vec<Vec<i128>> = gens.row_vecs();
        for (j, &m) in moduli.iter().enumerate() {
            let mut r = vec![0i128; t];
            r[j] = m as i128;
            rows.push(r);
        }
        let rel = Mat::from_rows(rows);
        let s = smith(&rel);
        let mut kept = Vec::new();
        let mut orders = Vec::new();
        for i in 0..t {
            let d = s.diag(i);
            assert!(d > 0, "quotient of a finite group must be finite");
            if d > 1 {
                kept.push((i, d as u64));
                orders.push(d as u64);
            }
        }
        QuotientGroup { orders, ambient_moduli: moduli.to_vec(), v: s.v, vinv: s.vinv, kept }
    }

    pub fn order(&self) -> u128 {
        self.orders.iter().fold(1u128, |a, &m| {
            a.checked_mul(m as u128).expect("group order overflow")
        })
    }

    /// Quotient coordinates of an ambient digit vector.
    pub fn project(&self, digits: &[i128]) -> Vec<u64> {
        assert_eq!(digits.len(), self.ambient_moduli.len());
        self.kept
            .iter()
            .map(|&(i, m)| {
                let y = (0..digits.len())
                    .fold(0i128, |acc, r| cadd(acc, cmul(digits[r], self.v[(r, i)])));
                y.rem_euclid(m as i128) as u64
            })
            .collect()
    }

    /// An ambient digit vector representing the `g`-th quotient generator.
    pub fn lift_gen(&self, g: usize) -> Vec<i128> {
        let (i, _) = self.kept[g];
        let t = self.ambient_moduli.len();
        (0..t)
            .map(|j| {
                let x = self.vinv[(i, j)];
                x.rem_euclid(self.ambient_moduli[j] as i128)
            })
            .collect()
    }
}

/// A subgroup `H` of `Z_{m_1} x ... x Z_{m_t}` in invariant-factor form:
/// independent generators `gens` (rows of digit vectors) of cyclic orders
/// `orders` with `H` their direct sum.
pub struct SubgroupBasis {
    pub orders: Vec<u64>,
    pub gens: Mat,
    ambient_moduli: Vec<u64>,
    basis: Mat,
    vc: Mat,
    kept: Vec<(usize, u64)>,
}

impl SubgroupBasis {
    /// Structure of the subgroup generated by `gens` (rows of digit vectors)
    /// inside the group with the given moduli.
    pub fn new(moduli: &[u64], gens: &Mat) -> SubgroupBasis {
        let t = moduli.len();
        // Preimage lattice L_H in Z^t: generators plus the modulus lattice.
        let mut rows: Vec<Vec<i128>> = gens.row_vecs();
        for (j, &m) in moduli.iter().enumerate() {
            let mut r = vec![0i128; t];
            r[j] = m as i128;
            rows.push(r);
        }
        let basis = lattice_basis(&Mat::from_rows(rows));
        assert_eq!(basis.rows(), t, "preimage lattice must have full rank");
        // Express the modulus lattice in the basis of L_H: c * basis = diag(m).
        let mut c_rows = Vec::with_capacity(t);
        for (j, &m) in moduli.iter().enumerate() {
            let mut target = vec![0i128; t];
            target[j] = m as i128;
            let x = solve_left(&basis, &target)
                .expect("modulus lattice lies inside the preimage lattice");
            c_rows.push(x);
        }
        let c = Mat::from_rows(c_rows);
        let s = smith(&c);
        let mut kept = Vec::new();
        let mut orders = Vec::new();
        let mut gen_rows = Vec::new();
        for i in 0..t {
            let d = s.diag(i);
            assert!(d > 0, "subgroup of a finite group must be finite");
            if d > 1 {
                kept.push((i, d as u64));
                orders.push(d as u64);
                // Generator in ambient digits: (row i of vinv) * basis, reduced.
                let mut row = vec![0i128; t];
                for (r, item) in row.iter_mut().enumerate() {
                    let x = (0..t)
                        .fold(0i128, |acc, k| cadd(acc, cmul(s.vinv[(i, k)], basis[(k, r)])));
                    *item = x.rem_euclid(moduli[r] as i128);
                }
                gen_rows.push(row);
            }
        }
        let gens_mat = if gen_rows.is_empty() {
            Mat::zeros(0, t)
        } else {
            Mat::from_rows(gen_rows)
        };
        SubgroupBasis {
            orders,
            gens: gens_mat,
            ambient_moduli: moduli.to_vec(),
            basis,
            vc: s.v,
            kept,
        }
    }

    pub fn order(&self) -> u128 {
        self.orders.iter().fold(1u128, |a, &m| {
            a.checked_mul(m as u128).expect("group order overflow")
        })
    }

    /// Coordinates of `digits` with respect to the invariant-factor
    /// generators, or None if the element is not in the subgroup.
    pub fn coords_of(&self, digits: &[i128]) -> Option<Vec<u64>> {
        let x = solve_left(&self.basis, digits)?;
        Some(
            self.kept
                .iter()
                .map(|&(i, m)| {
                    let y = (0..x.len())
                        .fold(0i128, |acc, r| cadd(acc, cmul(x[r], self.vc[(r, i)])));
                    y.rem_euclid(m as i128) as u64
                })
                .collect(),
        )
    }

    pub fn ambient_moduli(&self) -> &[u64] {
        &self.ambient_moduli
    }
}

#[cfg(test)]
mod test {
    use super::*;

    fn check_smith(a: &Mat) {
        let s = smith(a);
        assert_eq!(s.u.mul(a).mul(&s.v), s.d, "u a v != d");
        assert_eq!(s.u.mul(&s.uinv), Mat::identity(a.rows()), "u uinv != I");
        assert_eq!(s.uinv.mul(&s.u), Mat::identity(a.rows()), "uinv u != I");
        assert_eq!(s.v.mul(&s.vinv), Mat::identity(a.cols()), "v vinv != I");
        let lim = a.rows().min(a.cols());
        for i in 0..lim {
            assert!(s.diag(i) >= 0);
            for j in 0..lim {
                if i != j {
                    assert_eq!(s.d[(i, j)], 0, "off-diagonal entry");
                }
            }
        }
        for i in 1..lim {
            let (p, q) = (s.diag(i - 1), s.diag(i));
            if p == 0 {
                assert_eq!(q, 0, "zero must come last in the chain");
            } else {
                assert_eq!(q % p, 0, "divisibility chain broken");
            }
        }
    }

    #[test]
    fn smith_small_cases() {
        check_smith(&Mat::from_rows(vec![vec![2, 4], vec![6, 8]]));
        check_smith(&Mat::from_rows(vec![vec![0, 0], vec![0, 0]]));
        check_smith(&Mat::from_rows(vec![vec![1]]));
        check_smith(&Mat::from_rows(vec![vec![2, 3, 5], vec![7, 11, 13]]));
        check_smith(&Mat::from_rows(vec![vec![4], vec![6], vec![10]]));
        check_smith(&Mat::from_rows(vec![
            vec![2, 0, 0],
            vec![0, 3, 0],
            vec![0, 0, 4],
        ]));
    }

    #[test]
    fn smith_known_invariants() {
        // diag(2,3) has invariant factors 1, 6.
        let s = smith(&Mat::from_rows(vec![vec![2, 0], vec![0, 3]]));
        assert_eq!((s.diag(0), s.diag(1)), (1, 6));
    }

    #[test]
    fn kernel_of_projection() {
        // Rows (1,0), (0,1), (1,1): kernel is spanned by (1,1,-1).
        let a = Mat::from_rows(vec![vec![1, 0], vec![0, 1], vec![1, 1]]);
        let k = kernel(&a);
        assert_eq!(k.rows(), 1);
        let r = k.row(0);
        assert_eq!(r[0], r[1]);
        assert_eq!(r[0], -r[2]);
        assert_eq!(r[0].abs(), 1);
        assert!(k.mul(&a).is_zero());
    }

    #[test]
    fn solve_left_works() {
        let a = Mat::from_rows(vec![vec![2, 0], vec![0, 3]]);
        let x = solve_left(&a, &[4, 9]).unwrap();
        assert_eq!(x, vec![2, 3]);
        assert!(solve_left(&a, &[1, 0]).is_none());
    }

    #[test]
    fn solve_congruence_works() {
        // x * [2] ≡ [3] mod 5 has solution x = 4 (8 ≡ 3).
        let w = Mat::from_rows(vec![vec![2]]);
        let x = solve_congruence(&w, &[3], &[5]).unwrap();
        assert_eq!((x[0] * 2 - 3).rem_euclid(5), 0);
        // x * [2] ≡ [1] mod 4 has no solution.
        assert!(solve_congruence(&w, &[1], &[4]).is_none());
    }

    #[test]
    fn quotient_group_structure() {
        // (Z/4 x Z/4) / <(2,2)> has order 8.
        let q = QuotientGroup::new(&[4, 4], &Mat::from_rows(vec![vec![2, 2]]));
        assert_eq!(q.order(), 8);
        assert!(q.project(&[2, 2]).iter().all(|&c| c == 0));
        assert!(q.project(&[1, 0]).iter().any(|&c| c != 0));
        // Projection of a lifted generator is that generator's coordinate.
        for g in 0..q.orders.len() {
            let lifted = q.lift_gen(g);
            let back = q.project(&lifted);
            for (i, &c) in back.iter().enumerate() {
                assert_eq!(c, if i == g { 1 } else { 0 });
            }
        }
    }

    #[test]
    fn subgroup_basis_structure() {
        // <(2,0),(0,2)> in Z/4 x Z/4 is Z/2 x Z/2.
        let h = SubgroupBasis::new(&[4, 4], &Mat::from_rows(vec![vec![2, 0], vec![0, 2]]));
        assert_eq!(h.order(), 4);
        assert_eq!(h.orders, vec![2, 2]);
        assert!(h.coords_of(&[2, 2]).is_some());
        assert!(h.coords_of(&[1, 0]).is_none());
        // Coordinates reconstruct the element.
        let c = h.coords_of(&[2, 0]).unwrap();
        let mut rebuilt = vec![0i128; 2];
        for (g, &coef) in c.iter().enumerate() {
            for j in 0..2 {
                rebuilt[j] = (rebuilt[j] + coef as i128 * h.gens[(g, j)]).rem_euclid(4);
            }
        }
        assert_eq!(rebuilt, vec![2, 0]);
    }

    #[test]
    fn subgroup_of_nonuniform_moduli() {
        // <3> in Z/12: order 4 cyclic.
        let h = SubgroupBasis::new(&[12], &Mat::from_rows(vec![vec![3]]));
        assert_eq!(h.order(), 4);
        assert_eq!(h.orders, vec![4]);
        // Whole group as a subgroup of Z/2 x Z/6.
        let whole = SubgroupBasis::new(&[2, 6], &Mat::from_rows(vec![vec![1, 0], vec![0, 1]]));
        assert_eq!(whole.order(), 12);
        // Trivial subgroup.
        let triv = SubgroupBasis::new(&[2, 6], &Mat::zeros(0, 2));
        assert_eq!(triv.order(), 1);
        assert!(triv.coords_of(&[0, 0]).is_some());
        assert!(triv.coords_of(&[1, 0]).is_none());
    }
}
