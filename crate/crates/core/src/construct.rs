//! Standard ring constructors: cyclic rings, prime fields, products, full
//! and upper-triangular matrix rings, truncated polynomial rings and path
//! algebras of acyclic quivers with zero relations.
//!
//! Each constructor emits a `RingDef`; validation happens in
//! `FiniteRing::new` like for any hand-written definition.

use std::sync::Arc;

use crate::error::Error;
use crate::ring::{FiniteRing, RingDef};

/// Z/n with basis {1}.
pub fn cyclic(n: u64) -> Result<Arc<FiniteRing>, Error> {
    if n == 0 {
        return Err(Error::BadDefinition("Z/0 is not finite".into()));
    }
    let def = RingDef {
        name: format!("Z/{n}"),
        moduli: vec![n],
        unit: vec![1],
        mul: vec![vec![vec![1]]],
    };
    FiniteRing::new(&def)
}

/// The prime field F_p (rejects composite p).
pub fn prime_field(p: u64) -> Result<Arc<FiniteRing>, Error> {
    if p < 2 || (2..p).take_while(|d| d * d <= p).any(|d| p % d == 0) {
        return Err(Error::BadDefinition(format!("{p} is not prime")));
    }
    FiniteRing::new(&RingDef {
        name: format!("F{p}"),
        moduli: vec![p],
        unit: vec![1],
        mul: vec![vec![vec![1]]],
    })
}

/// Direct product with componentwise operations.
pub fn product(a: &FiniteRing, b: &FiniteRing) -> Result<Arc<FiniteRing>, Error> {
    let (ka, kb) = (a.rank(), b.rank());
    let k = ka + kb;
    let mut moduli = a.moduli().to_vec();
    moduli.extend_from_slice(b.moduli());
    let mut unit: Vec<i64> = a.decode(a.unit()).into_iter().map(|x| x as i64).collect();
    unit.extend(b.decode(b.unit()).into_iter().map(|x| x as i64));
    let mut mul = vec![vec![vec![0i64; k]; k]; k];
    for i in 0..ka {
        for j in 0..ka {
            let c = a.decode(a.mul(a.basis_elem(i), a.basis_elem(j)));
            for (l, &x) in c.iter().enumerate() {
                mul[i][j][l] = x as i64;
            }
        }
    }
    for i in 0..kb {
        for j in 0..kb {
            let c = b.decode(b.mul(b.basis_elem(i), b.basis_elem(j)));
            for (l, &x) in c.iter().enumerate() {
                mul[ka + i][ka + j][ka + l] = x as i64;
            }
        }
    }
    let def = RingDef {
        name: format!("{} x {}", a.name(), b.name()),
        moduli,
        unit,
        mul,
    };
    FiniteRing::new(&def)
}

/// Basis layout for n x n matrix units over a base ring of rank r: index
/// (i, j, l) -> (i * n + j) * r + l, where E_{ij} carries base basis l.
fn matrix_like(
    base: &FiniteRing,
    n: usize,
    keep: impl Fn(usize, usize) -> bool,
    name: String,
) -> Result<Arc<FiniteRing>, Error> {
    if n == 0 {
        return Err(Error::BadDefinition("matrix size must be positive".into()));
    }
    let r = base.rank();
    // Positions (i, j) kept, in row-major order.
    let pos: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| keep(i, j))
        .collect();
    let k = pos.len() * r;
    let slot = |p: usize, l: usize| p * r + l;
    let mut moduli = Vec::with_capacity(k);
    for _ in &pos {
        moduli.extend_from_slice(base.moduli());
    }
    let mut mul = vec![vec![vec![0i64; k]; k]; k];
    for (p, &(i, j)) in pos.iter().enumerate() {
        for (q, &(j2, m)) in pos.iter().enumerate() {
            if j != j2 {
                continue;
            }
            // E_{ij} a * E_{jm} b = E_{im} (a b); E_{im} must be kept, which
            // holds for full and upper-triangular shapes.
            let t = pos
                .iter()
                .position(|&(x, y)| (x, y) == (i, m))
                .ok_or_else(|| Error::BadDefinition("shape is not closed under products".into()))?;
            for la in 0..r {
                for lb in 0..r {
                    let c = base.decode(base.mul(base.basis_elem(la), base.basis_elem(lb)));
                    for (lc, &x) in c.iter().enumerate() {
                        mul[slot(p, la)][slot(q, lb)][slot(t, lc)] += x as i64;
                    }
                }
            }
        }
    }
    let mut unit = vec![0i64; k];
    let unit_coords = base.decode(base.unit());
    for (p, &(i, j)) in pos.iter().enumerate() {
        if i == j {
            for (l, &x) in unit_coords.iter().enumerate() {
                unit[slot(p, l)] = x as i64;
            }
        }
    }
    FiniteRing::new(&RingDef { name, moduli, unit, mul })
}

/// Full matrix ring M_n(base).
pub fn matrix_ring(base: &FiniteRing, n: usize) -> Result<Arc<FiniteRing>, Error> {
    matrix_like(base, n, |_, _| true, format!("M{}({})", n, base.name()))
}

/// Upper triangular matrix ring T_n(base).
pub fn triangular_ring(base: &FiniteRing, n: usize) -> Result<Arc<FiniteRing>, Error> {
    matrix_like(base, n, |i, j| i <= j, format!("T{}({})", n, base.name()))
}

/// Truncated polynomial ring base[x]/(x^m), basis x^0..x^{m-1} per base slot.
pub fn truncated_polynomial(base: &FiniteRing, m: usize) -> Result<Arc<FiniteRing>, Error> {
    if m == 0 {
        return Err(Error::BadDefinition("truncation degree must be positive".into()));
    }
    let r = base.rank();
    let k = m * r;
    let slot = |deg: usize, l: usize| deg * r + l;
    let mut moduli = Vec::with_capacity(k);
    for _ in 0..m {
        moduli.extend_from_slice(base.moduli());
    }
    let mut mul = vec![vec![vec![0i64; k]; k]; k];
    for da in 0..m {
        for db in 0..m {
            if da + db >= m {
                continue;
            }
            for la in 0..r {
                for lb in 0..r {
                    let c = base.decode(base.mul(base.basis_elem(la), base.basis_elem(lb)));
                    for (lc, &x) in c.iter().enumerate() {
                        mul[slot(da, la)][slot(db, lb)][slot(da + db, lc)] += x as i64;
                    }
                }
            }
        }
    }
    let mut unit = vec![0i64; k];
    for (l, &x) in base.decode(base.unit()).iter().enumerate() {
        unit[slot(0, l)] = x as i64;
    }
    FiniteRing::new(&RingDef {
        name: format!("{}[x]/(x^{})", base.name(), m),
        moduli,
        unit,
        mul,
    })
}

/// An acyclic quiver with optional zero relations on composite paths.
#[derive(Clone, Debug, serde::Serialize, serde::Deserialize)]
pub struct QuiverDef {
    /// Field characteristic (must be prime).
    pub field: u64,
    pub vertices: usize,
    /// Arrows as (source, target) vertex indices, 0-based.
    pub arrows: Vec<(usize, usize)>,
    /// Paths forced to zero, each given as a sequence of arrow indices that
    /// must be composable in order.
    pub zero_relations: Vec<Vec<usize>>,
}

/// Path algebra of an acyclic quiver over F_p with the listed zero
/// relations. Basis: all paths (including the trivial path at each vertex)
/// not containing a zero relation as a factor; the product of paths p, q is
/// their concatenation "p then q" when the end of p is the start of q, and
/// zero otherwise or when the result contains a forced-zero path.
pub fn path_algebra(def: &QuiverDef) -> Result<Arc<FiniteRing>, Error> {
    let p = def.field;
    if p < 2 || (2..p).take_while(|d| d * d <= p).any(|d| p % d == 0) {
        return Err(Error::BadDefinition(format!("{p} is not prime")));
    }
    let n = def.vertices;
    for &(s, t) in &def.arrows {
        if s >= n || t >= n {
            return Err(Error::BadDefinition("arrow endpoint out of range".into()));
        }
    }
    // Acyclicity: no directed cycle among arrows.
    {
        let mut indeg = vec![0usize; n];
        for &(_, t) in &def.arrows {
            indeg[t] += 1;
        }
        let mut stack: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut seen = 0;
        while let Some(v) = stack.pop() {
            seen += 1;
            for &(s, t) in &def.arrows {
                if s == v {
                    indeg[t] -= 1;
                    if indeg[t] == 0 {
                        stack.push(t);
                    }
                }
            }
        }
        if seen != n {
            return Err(Error::BadDefinition("quiver has a directed cycle".into()));
        }
    }
    // Enumerate paths as arrow-index sequences; trivial paths are empty
    // sequences tagged by their vertex.
    #[derive(Clone, PartialEq, Eq)]
    struct Path {
        start: usize,
        end: usize,
        arrows: Vec<usize>,
    }
    let is_zero = |arrows: &[usize]| -> bool {
        def.zero_relations.iter().any(|rel| {
            !rel.is_empty()
                && arrows.windows(rel.len()).any(|w| w == rel.as_slice())
        })
    };
    let mut paths: Vec<Path> = (0..n).map(|v| Path { start: v, end: v, arrows: vec![] }).collect();
    let mut frontier: Vec<Path> = paths.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for path in &frontier {
            for (ai, &(s, t)) in def.arrows.iter().enumerate() {
                if s != path.end {
                    continue;
                }
                let mut arrows = path.arrows.clone();
                arrows.push(ai);
                if is_zero(&arrows) {
                    continue;
                }
                let ext = Path { start: path.start, end: t, arrows };
                next.push(ext);
            }
        }
        paths.extend(next.iter().cloned());
        frontier = next;
        if paths.len() > 1 << 12 {
            return Err(Error::BadDefinition("path basis is too large".into()));
        }
    }
    let k = paths.len();
    let idx_of = |pth: &Path| paths.iter().position(|q| q == pth);
    let mut mul = vec![vec![vec![0i64; k]; k]; k];
    for (i, a) in paths.iter().enumerate() {
        for (j, b) in paths.iter().enumerate() {
            if a.end != b.start {
                continue;
            }
            let mut arrows = a.arrows.clone();
            arrows.extend_from_slice(&b.arrows);
            if is_zero(&arrows) {
                continue;
            }
            let prod = Path { start: a.start, end: b.end, arrows };
            // Every relation-free walk was enumerated, so the product is in
            // the basis whenever it was not skipped as zero.
            let t = idx_of(&prod).expect("relation-free concatenation is a basis path");
            mul[i][j][t] = 1;
        }
    }
    let mut unit = vec![0i64; k];
    for (i, path) in paths.iter().enumerate() {
        if path.arrows.is_empty() {
            unit[i] = 1;
        }
    }
    let arrows_desc: Vec<String> = def
        .arrows
        .iter()
        .map(|&(s, t)| format!("{}->{}", s + 1, t + 1))
        .collect();
    FiniteRing::new(&RingDef {
        name: format!("F{}Q[{}; {} rel]", p, arrows_desc.join(","), def.zero_relations.len()),
        moduli: vec![p; k],
        unit,
        mul,
    })
}
