//! Independent oracles and samplers shared by the integration tests.
//!
//! Everything here deliberately avoids the library's production code paths:
//! ranks and kernels come from naive dense elimination, divisibility from
//! synthetic division and random-point evaluation, and graph cohomology from
//! a quotient-variable formulation instead of hyperplane restriction.

#![allow(dead_code)]

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use torusfix::poly::{monomial_basis, Expo, Poly};
use torusfix::scalar::{q0, q1, Q};
use torusfix::tgraph::{TEdge, TGraph};

// ---------------------------------------------------------------------------
// dense linear algebra
// ---------------------------------------------------------------------------

/// Row-reduce a dense matrix in place; returns the rank.
pub fn dense_eliminate(m: &mut Vec<Vec<Q>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let inv = m[rank][c].clone();
        for x in m[rank].iter_mut() {
            *x = &*x / &inv;
        }
        for r in 0..rows {
            if r != rank && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                for c2 in 0..cols {
                    let delta = &f * &m[rank][c2];
                    m[r][c2] = &m[r][c2] - &delta;
                }
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

pub fn dense_rank(mut m: Vec<Vec<Q>>) -> usize {
    dense_eliminate(&mut m)
}

/// Kernel basis of a dense matrix (free-column parameterization).
pub fn dense_kernel(mut m: Vec<Vec<Q>>, cols: usize) -> Vec<Vec<Q>> {
    if m.is_empty() {
        m.push(vec![q0(); cols]);
    }
    let rank = dense_eliminate(&mut m);
    let mut pivot_of_col = vec![None; cols];
    for r in 0..rank {
        if let Some(c) = (0..cols).find(|&c| !m[r][c].is_zero()) {
            pivot_of_col[c] = Some(r);
        }
    }
    let mut basis = Vec::new();
    for f in 0..cols {
        if pivot_of_col[f].is_some() {
            continue;
        }
        let mut v = vec![q0(); cols];
        v[f] = q1();
        for c in 0..cols {
            if let Some(r) = pivot_of_col[c] {
                v[c] = -m[r][f].clone();
            }
        }
        basis.push(v);
    }
    basis
}

/// Dense membership test: is `target` in the row span of `basis`?
pub fn dense_in_span(basis: &[Vec<Q>], target: &[Q]) -> bool {
    let mut m: Vec<Vec<Q>> = basis.to_vec();
    let r0 = dense_rank(m.clone());
    m.push(target.to_vec());
    dense_rank(m) == r0
}

// ---------------------------------------------------------------------------
// divisibility oracles
// ---------------------------------------------------------------------------

/// Exact synthetic division of a homogeneous polynomial by a linear form.
/// Pivots on the *first* nonzero coefficient (the production path uses the
/// last) and works directly on exponent maps. Returns the quotient iff the
/// division is exact.
pub fn divide_by_linear(p: &Poly, alpha: &[Q]) -> Option<Poly> {
    let n = p.nvars();
    assert_eq!(alpha.len(), n);
    let j = alpha.iter().position(|c| !c.is_zero())?;
    let c = alpha[j].clone();
    let mut rem: BTreeMap<Expo, Q> = p.terms().clone();
    let mut quo: BTreeMap<Expo, Q> = BTreeMap::new();
    loop {
        // highest x_j-power term still present
        let Some((expo, coeff)) = rem
            .iter()
            .filter(|(e, _)| e[j] > 0)
            .max_by(|(a, _), (b, _)| a[j].cmp(&b[j]).then(a.cmp(b)))
            .map(|(e, q)| (e.clone(), q.clone()))
        else {
            break;
        };
        let mut qe = expo.clone();
        qe[j] -= 1;
        let qc = &coeff / &c;
        *quo.entry(qe.clone()).or_insert_with(q0) += &qc;
        // subtract alpha * (qc · x^qe) from the remainder
        for (k, ak) in alpha.iter().enumerate() {
            if ak.is_zero() {
                continue;
            }
            let mut te = qe.clone();
            te[k] += 1;
            let delta = &qc * ak;
            let entry = rem.entry(te.clone()).or_insert_with(q0);
            *entry = &*entry - &delta;
            if entry.is_zero() {
                rem.remove(&te);
            }
        }
    }
    if rem.is_empty() {
        Some(Poly::from_terms(n, quo).expect("quotient of homogeneous input is homogeneous"))
    } else {
        None
    }
}

/// Does `p` vanish at `count` pseudorandom rational points of the hyperplane
/// `alpha · v = 0`? (Sound refutations; vanishing everywhere sampled is
/// overwhelming evidence of divisibility.)
pub fn vanishes_on_hyperplane<R: Rng>(p: &Poly, alpha: &[Q], count: usize, rng: &mut R) -> bool {
    let n = p.nvars();
    let j = alpha
        .iter()
        .position(|c| !c.is_zero())
        .expect("hyperplane form must be nonzero");
    for _ in 0..count {
        let mut v: Vec<Q> = (0..n)
            .map(|_| Q::from_integer(BigInt::from(rng.gen_range(-50i64..=50))))
            .collect();
        let mut dot = q0();
        for (k, x) in v.iter().enumerate() {
            if k != j {
                dot += &alpha[k] * x;
            }
        }
        v[j] = -dot / &alpha[j];
        if !p.eval(&v).is_zero() {
            return false;
        }
    }
    true
}

// ---------------------------------------------------------------------------
// brute-force graph cohomology
// ---------------------------------------------------------------------------

/// Degree-`2d` cohomology of a labelled graph via the quotient-variable
/// system: unknowns are vertex coefficient vectors plus one degree-`d-1`
/// quotient per edge, constrained by `(f_u - f_v) - alpha·g = 0`
/// coefficientwise. Returns vertex-coefficient basis vectors.
pub fn brute_cohomology_basis(g: &TGraph, d: u32) -> Vec<Vec<Q>> {
    let n = g.n();
    let nv = g.vertices().len();
    let out_basis = monomial_basis(n, d);
    let m = out_basis.len();
    let quo_basis = if d == 0 { Vec::new() } else { monomial_basis(n, d - 1) };
    let qm = quo_basis.len();
    let cols = nv * m + g.edges().len() * qm;
    let mut rows: Vec<Vec<Q>> = Vec::new();
    for (ei, e) in g.edges().iter().enumerate() {
        for (t, out_e) in out_basis.iter().enumerate() {
            let mut row = vec![q0(); cols];
            row[e.u * m + t] = q1();
            row[e.v * m + t] = -q1();
            for (k, qe) in quo_basis.iter().enumerate() {
                // coefficient of out_e in alpha · x^qe
                for (jv, aj) in e.label.iter().enumerate() {
                    if aj.is_zero() {
                        continue;
                    }
                    let mut te = qe.clone();
                    te[jv] += 1;
                    if &te == out_e {
                        let col = nv * m + ei * qm + k;
                        row[col] = &row[col] - &Q::from_integer(aj.clone());
                    }
                }
            }
            rows.push(row);
        }
    }
    // kernel projects injectively onto the vertex block (alpha·g = 0 forces
    // g = 0), so dropping quotient coordinates yields a basis
    dense_kernel(rows, cols)
        .into_iter()
        .map(|v| v[..nv * m].to_vec())
        .collect()
}

pub fn brute_cohomology_dim(g: &TGraph, d: u32) -> usize {
    brute_cohomology_basis(g, d).len()
}

// ---------------------------------------------------------------------------
// random samplers
// ---------------------------------------------------------------------------

pub fn random_nonzero_label<R: Rng>(rng: &mut R, n: usize, max_abs: i64) -> Vec<BigInt> {
    loop {
        let v: Vec<BigInt> = (0..n)
            .map(|_| BigInt::from(rng.gen_range(-max_abs..=max_abs)))
            .collect();
        if v.iter().any(|x| !x.is_zero()) {
            return v;
        }
    }
}

/// Arbitrary loop-free labelled graph (labels may be parallel).
pub fn random_graph<R: Rng>(
    rng: &mut R,
    n: usize,
    max_vertices: usize,
    max_edges: usize,
    max_abs: i64,
) -> TGraph {
    let nv = rng.gen_range(2..=max_vertices.max(2));
    let ne = rng.gen_range(0..=max_edges);
    let vertices: Vec<String> = (0..nv).map(|i| format!("v{i}")).collect();
    let mut edges = Vec::new();
    for _ in 0..ne {
        let u = rng.gen_range(0..nv);
        let mut v = rng.gen_range(0..nv);
        while v == u {
            v = rng.gen_range(0..nv);
        }
        edges.push(TEdge { u, v, label: random_nonzero_label(rng, n, max_abs) });
    }
    TGraph::new(n, vertices, edges).expect("sampler avoids loops and zero labels")
}

fn primitive_sign_normalized(mut v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() {
        for x in v.iter_mut() {
            *x = &*x / &g;
        }
    }
    if v.iter().find(|x| !x.is_zero()).map(|x| x.is_negative()) == Some(true) {
        for x in v.iter_mut() {
            *x = -x.clone();
        }
    }
    v
}

/// Graph satisfying the pairwise-independence axiom by construction: every
/// parallel class is a partial matching, so no vertex sees two dependent
/// labels and every class is a forest.
pub fn random_gkm_graph<R: Rng>(rng: &mut R, n: usize, max_vertices: usize) -> TGraph {
    let nv = rng.gen_range(2..=max_vertices.max(2));
    let vertices: Vec<String> = (0..nv).map(|i| format!("v{i}")).collect();
    // rank 1 admits a single primitive direction, so cap the request there
    let n_dirs = if n == 1 { 1 } else { rng.gen_range(1..=4) };
    let mut dirs: Vec<Vec<BigInt>> = Vec::new();
    let mut attempts = 0;
    while dirs.len() < n_dirs && attempts < 200 {
        attempts += 1;
        let d = primitive_sign_normalized(random_nonzero_label(rng, n, 3));
        if !dirs.contains(&d) {
            dirs.push(d);
        }
    }
    let mut edges = Vec::new();
    for dir in &dirs {
        // random partial matching on a shuffled vertex list
        let mut order: Vec<usize> = (0..nv).collect();
        for i in (1..nv).rev() {
            order.swap(i, rng.gen_range(0..=i));
        }
        let mut i = 0;
        while i + 1 < nv {
            if rng.gen_bool(0.6) {
                let scale = BigInt::from(*[1i64, 1, 2, 3].get(rng.gen_range(0..4)).unwrap());
                let label: Vec<BigInt> = dir.iter().map(|x| x * &scale).collect();
                edges.push(TEdge { u: order[i], v: order[i + 1], label });
            }
            i += 2;
        }
    }
    if edges.is_empty() {
        edges.push(TEdge { u: 0, v: 1, label: dirs[0].clone() });
    }
    TGraph::new(n, vertices, edges).expect("matching construction is loop-free")
}

// ---------------------------------------------------------------------------
// unimodular transforms
// ---------------------------------------------------------------------------

/// Random product of elementary integer row operations (determinant ±1).
pub fn random_unimodular<R: Rng>(rng: &mut R, n: usize) -> Vec<Vec<BigInt>> {
    let mut m: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    for _ in 0..12 {
        match rng.gen_range(0..3) {
            0 if n >= 2 => {
                // shear: row_i += k · row_j
                let i = rng.gen_range(0..n);
                let mut j = rng.gen_range(0..n);
                while j == i {
                    j = rng.gen_range(0..n);
                }
                let k = BigInt::from(rng.gen_range(-2i64..=2));
                for c in 0..n {
                    let delta = &k * &m[j][c];
                    m[i][c] += delta;
                }
            }
            1 if n >= 2 => {
                let i = rng.gen_range(0..n);
                let j = rng.gen_range(0..n);
                m.swap(i, j);
            }
            _ => {
                let i = rng.gen_range(0..n);
                for c in 0..n {
                    m[i][c] = -m[i][c].clone();
                }
            }
        }
    }
    m
}

/// Apply an integer matrix to every edge label.
pub fn transform_labels(g: &TGraph, m: &[Vec<BigInt>]) -> TGraph {
    let n = g.n();
    let edges: Vec<TEdge> = g
        .edges()
        .iter()
        .map(|e| {
            let label: Vec<BigInt> = (0..n)
                .map(|r| {
                    (0..n)
                        .map(|c| &m[r][c] * &e.label[c])
                        .fold(BigInt::zero(), |a, b| a + b)
                })
                .collect();
            TEdge { u: e.u, v: e.v, label }
        })
        .collect();
    TGraph::new(n, g.vertices().to_vec(), edges).expect("unimodular images stay nonzero")
}

/// Flip the sign of each label independently at random.
pub fn random_sign_flip<R: Rng>(rng: &mut R, g: &TGraph) -> TGraph {
    let edges: Vec<TEdge> = g
        .edges()
        .iter()
        .map(|e| {
            let label = if rng.gen_bool(0.5) {
                e.label.iter().map(|x| -x.clone()).collect()
            } else {
                e.label.clone()
            };
            TEdge { u: e.u, v: e.v, label }
        })
        .collect();
    TGraph::new(g.n(), g.vertices().to_vec(), edges).expect("sign flips preserve validity")
}
