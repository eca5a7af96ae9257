//! Integer lattices and closed subgroups of a standard torus.
//!
//! A closed subgroup `H ⊆ T = (S¹)ⁿ` is encoded by the sublattice
//! `L(H) ⊆ ℤⁿ` of characters vanishing on it, stored as the rows of a
//! canonical Hermite normal form (positive pivots, entries above each pivot
//! reduced into `[0, pivot)`). All subgroup operations — containment,
//! intersection, identity component, the stable pair poset — reduce to
//! integer lattice arithmetic on these rows; nothing is ever rounded.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{invalid, TfResult};
use crate::scalar::Q;

/// Dense integer vector.
pub type ZVec = Vec<BigInt>;

fn zvec_from(v: &[i64]) -> ZVec {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// Row-style Hermite normal form of the span of `rows` inside ℤⁿ: nonzero
/// echelon rows with positive pivots, entries above each pivot reduced into
/// `[0, pivot)`. The result is the canonical basis of the generated
/// sublattice.
pub fn hnf(rows: &[ZVec], n: usize) -> Vec<ZVec> {
    hnf_with_transform(rows, n).0
}

/// Hermite normal form together with a unimodular transform: returns
/// `(H, U)` with `U · M = [H; 0]`, where `M` stacks the input rows and `U`
/// is square unimodular of size `rows.len()`. The rows of `U` aligned with
/// the zero block form a saturated basis of the left kernel of `M`.
pub fn hnf_with_transform(rows: &[ZVec], n: usize) -> (Vec<ZVec>, Vec<ZVec>) {
    let m = rows.len();
    let mut a: Vec<ZVec> = rows.to_vec();
    let mut u: Vec<ZVec> = (0..m)
        .map(|i| {
            let mut r = vec![BigInt::zero(); m];
            r[i] = BigInt::one();
            r
        })
        .collect();
    let mut pivot_row = 0usize;
    for col in 0..n {
        // euclidean reduction in this column on rows >= pivot_row
        loop {
            let mut best: Option<usize> = None;
            for r in pivot_row..m {
                if !a[r][col].is_zero() {
                    let better = match best {
                        None => true,
                        Some(b) => a[r][col].abs() < a[b][col].abs(),
                    };
                    if better {
                        best = Some(r);
                    }
                }
            }
            let Some(b) = best else { break };
            a.swap(pivot_row, b);
            u.swap(pivot_row, b);
            let mut finished = true;
            for r in (pivot_row + 1)..m {
                if a[r][col].is_zero() {
                    continue;
                }
                let q = a[r][col].div_floor(&a[pivot_row][col]);
                row_submul(&mut a, r, pivot_row, &q);
                row_submul(&mut u, r, pivot_row, &q);
                if !a[r][col].is_zero() {
                    finished = false;
                }
            }
            if finished {
                break;
            }
        }
        if pivot_row < m && !a[pivot_row][col].is_zero() {
            // make the pivot positive
            if a[pivot_row][col].is_negative() {
                row_negate(&mut a, pivot_row);
                row_negate(&mut u, pivot_row);
            }
            // reduce entries above the pivot into [0, pivot)
            for r in 0..pivot_row {
                let q = a[r][col].div_floor(&a[pivot_row][col]);
                if !q.is_zero() {
                    row_submul(&mut a, r, pivot_row, &q);
                    row_submul(&mut u, r, pivot_row, &q);
                }
            }
            pivot_row += 1;
        }
    }
    a.truncate(pivot_row.max(0));
    let h = a;
    (h, u)
}

fn row_submul(rows: &mut [ZVec], dst: usize, src: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    let src_row = rows[src].clone();
    for (d, s) in rows[dst].iter_mut().zip(&src_row) {
        *d -= q * s;
    }
}

fn row_negate(rows: &mut [ZVec], r: usize) {
    for v in rows[r].iter_mut() {
        *v = -v.clone();
    }
}

/// Basis of the left kernel `{v : v · M = 0}` of the matrix stacking
/// `rows`; the basis is saturated (a direct summand) because it comes from
/// a unimodular transform.
pub fn left_kernel(rows: &[ZVec], n: usize) -> Vec<ZVec> {
    let (h, u) = hnf_with_transform(rows, n);
    u[h.len()..].to_vec()
}

/// Basis of the right integer kernel `{x ∈ ℤⁿ : M x = 0}`, saturated.
pub fn right_kernel(rows: &[ZVec], n: usize) -> Vec<ZVec> {
    // left kernel of the transpose
    let m = rows.len();
    let t: Vec<ZVec> = (0..n)
        .map(|j| (0..m).map(|i| rows[i][j].clone()).collect())
        .collect();
    left_kernel(&t, m)
}

/// Saturation of the sublattice spanned by `rows`: the intersection of its
/// rational span with ℤⁿ, via a double integer kernel.
pub fn saturate(rows: &[ZVec], n: usize) -> Vec<ZVec> {
    let k = right_kernel(rows, n);
    let sat = right_kernel(&k, n);
    hnf(&sat, n)
}

/// Membership of `v` in the ℤ-span of canonical HNF rows: peel pivots left
/// to right, requiring exact divisibility at each one.
pub fn lattice_contains(hnf_rows: &[ZVec], v: &ZVec) -> bool {
    let mut w = v.clone();
    for row in hnf_rows {
        let p = row
            .iter()
            .position(|x| !x.is_zero())
            .expect("HNF rows are nonzero");
        if w[p].is_zero() {
            continue;
        }
        let (q, r) = w[p].div_rem(&row[p]);
        if !r.is_zero() {
            return false;
        }
        for (wi, ri) in w.iter_mut().zip(row) {
            *wi -= &q * ri;
        }
    }
    w.iter().all(|x| x.is_zero())
}

/// A closed subgroup of `T = (S¹)ⁿ`, held as the canonical HNF basis of its
/// character annihilator lattice. The full torus stores no rows; the
/// trivial subgroup stores the identity matrix.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subgroup {
    n: usize,
    ann: Vec<ZVec>,
}

impl Subgroup {
    /// Canonicalize generating rows of the annihilator lattice.
    pub fn canonicalize(rows: &[ZVec], n: usize) -> TfResult<Subgroup> {
        for r in rows {
            if r.len() != n {
                return Err(invalid(format!(
                    "annihilator row has length {}, expected {}",
                    r.len(),
                    n
                )));
            }
        }
        Ok(Subgroup { n, ann: hnf(rows, n) })
    }

    /// Convenience constructor from machine integers.
    pub fn from_rows_i64(rows: &[&[i64]], n: usize) -> Subgroup {
        let rows: Vec<ZVec> = rows.iter().map(|r| zvec_from(r)).collect();
        Subgroup::canonicalize(&rows, n).expect("well-shaped rows")
    }

    /// The full torus `T` (empty annihilator).
    pub fn full(n: usize) -> Subgroup {
        Subgroup { n, ann: Vec::new() }
    }

    /// The trivial subgroup `{1}` (annihilator ℤⁿ).
    pub fn trivial(n: usize) -> Subgroup {
        let ann = (0..n)
            .map(|i| {
                let mut r = vec![BigInt::zero(); n];
                r[i] = BigInt::one();
                r
            })
            .collect();
        Subgroup { n, ann }
    }

    /// Ambient torus rank.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Canonical annihilator rows.
    pub fn ann_rows(&self) -> &[ZVec] {
        &self.ann
    }

    /// Rank of the annihilator lattice (codimension of the subgroup's
    /// identity component).
    pub fn ann_rank(&self) -> usize {
        self.ann.len()
    }

    /// Is this the full torus?
    pub fn is_full(&self) -> bool {
        self.ann.is_empty()
    }

    /// Is this the trivial subgroup?
    pub fn is_trivial(&self) -> bool {
        self.ann.len() == self.n
            && self
                .ann
                .iter()
                .enumerate()
                .all(|(i, r)| r.iter().enumerate().all(|(j, v)| {
                    if i == j { v.is_one() } else { v.is_zero() }
                }))
    }

    /// Group containment `self ⊇ other`, i.e. `L(self) ⊆ L(other)` as
    /// integer lattices.
    pub fn contains(&self, other: &Subgroup) -> bool {
        debug_assert_eq!(self.n, other.n);
        self.ann.iter().all(|row| lattice_contains(&other.ann, row))
    }

    /// Intersection of subgroups: annihilators add.
    pub fn intersect(&self, other: &Subgroup) -> Subgroup {
        debug_assert_eq!(self.n, other.n);
        let mut rows = self.ann.clone();
        rows.extend(other.ann.iter().cloned());
        Subgroup { n: self.n, ann: hnf(&rows, self.n) }
    }

    /// Identity component: saturate the annihilator.
    pub fn identity_component(&self) -> Subgroup {
        Subgroup { n: self.n, ann: saturate(&self.ann, self.n) }
    }

    /// Is the subgroup connected (a subtorus)?
    pub fn is_subtorus(&self) -> bool {
        self.ann == saturate(&self.ann, self.n)
    }

    /// Rational character basis of the quotient `T/U` pulled back to `T`:
    /// the canonical echelon basis of `L(U) ⊗ ℚ`. Defined for subtori only.
    pub fn quotient_char_space(&self) -> TfResult<Vec<Vec<Q>>> {
        if !self.is_subtorus() {
            return Err(invalid(
                "quotient character space requires a subtorus (connected subgroup)"
                    .to_string(),
            ));
        }
        Ok(self
            .ann
            .iter()
            .map(|row| row.iter().map(|v| Q::from_integer(v.clone())).collect())
            .collect())
    }

    /// Compact canonical text key, used for JSON object keys and sorting:
    /// `T` for the full torus, `trivial` for the trivial subgroup, otherwise
    /// the HNF rows like `[[1,-1]]`.
    pub fn key(&self) -> String {
        if self.is_full() {
            return "T".to_string();
        }
        if self.is_trivial() {
            return "trivial".to_string();
        }
        let rows: Vec<String> = self
            .ann
            .iter()
            .map(|r| {
                let xs: Vec<String> = r.iter().map(|v| v.to_string()).collect();
                format!("[{}]", xs.join(","))
            })
            .collect();
        format!("[{}]", rows.join(","))
    }
}

/// A poset element: a connected subtorus `U` sitting inside a closed
/// subgroup `H`. The order is `(U,H) ≤ (U',H')` iff `U ⊇ U'` and `H ⊆ H'`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PosetPair {
    pub u: Subgroup,
    pub h: Subgroup,
}

impl PosetPair {
    /// Construct with validation: `U` must be a subtorus contained in `H`.
    pub fn new(u: Subgroup, h: Subgroup) -> TfResult<PosetPair> {
        if !u.is_subtorus() {
            return Err(invalid(format!(
                "pair component U = {} is not a subtorus",
                u.key()
            )));
        }
        if !h.contains(&u) {
            return Err(invalid(format!(
                "pair ({}, {}) violates U ⊆ H",
                u.key(),
                h.key()
            )));
        }
        Ok(PosetPair { u, h })
    }

    /// Partial order test.
    pub fn leq(&self, other: &PosetPair) -> bool {
        self.u.contains(&other.u) && other.h.contains(&self.h)
    }

    /// Canonical text key `U|H`.
    pub fn key(&self) -> String {
        format!("{}|{}", self.u.key(), self.h.key())
    }
}

/// The stable pair poset generated by a finite family of closed subgroups:
/// right members are the intersection closure of the family together with
/// the trivial subgroup and the full torus; left members are their identity
/// components; pairs combine every left member with every right member
/// containing it. Elements are stored in a deterministic linear extension
/// of the partial order (comparable pairs appear smaller-first).
#[derive(Clone, Debug)]
pub struct PairPoset {
    n: usize,
    pairs: Vec<PosetPair>,
    d_r: Vec<Subgroup>,
    d_l: Vec<Subgroup>,
}

impl PairPoset {
    /// Build the stable closure of the family `c`.
    pub fn generate_stable(c: &[Subgroup], n: usize) -> TfResult<PairPoset> {
        for g in c {
            if g.n() != n {
                return Err(invalid(format!(
                    "subgroup {} lives in rank {}, expected {}",
                    g.key(),
                    g.n(),
                    n
                )));
            }
        }
        let mut d_r: Vec<Subgroup> = vec![Subgroup::trivial(n), Subgroup::full(n)];
        for g in c {
            if !d_r.contains(g) {
                d_r.push(g.clone());
            }
        }
        // close under pairwise intersection
        loop {
            let mut added = false;
            let snapshot = d_r.clone();
            for a in &snapshot {
                for b in &snapshot {
                    let i = a.intersect(b);
                    if !d_r.contains(&i) {
                        d_r.push(i);
                        added = true;
                    }
                }
            }
            if !added {
                break;
            }
        }
        d_r.sort();
        let mut d_l: Vec<Subgroup> = d_r.iter().map(|g| g.identity_component()).collect();
        d_l.sort();
        d_l.dedup();
        let mut pairs = Vec::new();
        for u in &d_l {
            for h in &d_r {
                if h.contains(u) {
                    pairs.push(PosetPair { u: u.clone(), h: h.clone() });
                }
            }
        }
        Ok(PairPoset::assemble(n, pairs, d_r, d_l))
    }

    /// Rebuild a poset from explicitly listed pairs, validating that they
    /// form a stable closure (this is the shape every diagram checker
    /// assumes).
    pub fn from_pairs(pairs: Vec<PosetPair>, n: usize) -> TfResult<PairPoset> {
        if pairs.is_empty() {
            return Err(invalid("poset has no pairs".to_string()));
        }
        for p in &pairs {
            if p.u.n() != n || p.h.n() != n {
                return Err(invalid(format!(
                    "pair {} lives in the wrong torus rank",
                    p.key()
                )));
            }
            if !p.u.is_subtorus() {
                return Err(invalid(format!(
                    "pair {}: left member is not a subtorus",
                    p.key()
                )));
            }
            if !p.h.contains(&p.u) {
                return Err(invalid(format!("pair {} violates U ⊆ H", p.key())));
            }
        }
        let mut d_r: Vec<Subgroup> = pairs.iter().map(|p| p.h.clone()).collect();
        d_r.sort();
        d_r.dedup();
        let mut d_l: Vec<Subgroup> = pairs.iter().map(|p| p.u.clone()).collect();
        d_l.sort();
        d_l.dedup();
        if !d_r.contains(&Subgroup::full(n)) {
            return Err(invalid(
                "poset right members must include the full torus".to_string(),
            ));
        }
        if !d_r.contains(&Subgroup::trivial(n)) {
            return Err(invalid(
                "poset right members must include the trivial subgroup".to_string(),
            ));
        }
        for a in &d_r {
            for b in &d_r {
                let i = a.intersect(b);
                if !d_r.contains(&i) {
                    return Err(invalid(format!(
                        "poset right members are not intersection-closed: {} ∩ {} = {} is missing",
                        a.key(),
                        b.key(),
                        i.key()
                    )));
                }
            }
        }
        let mut expect_l: Vec<Subgroup> = d_r.iter().map(|g| g.identity_component()).collect();
        expect_l.sort();
        expect_l.dedup();
        if d_l != expect_l {
            return Err(invalid(
                "poset left members differ from the identity components of the right members"
                    .to_string(),
            ));
        }
        let mut expect_pairs = Vec::new();
        for u in &d_l {
            for h in &d_r {
                if h.contains(u) {
                    expect_pairs.push(PosetPair { u: u.clone(), h: h.clone() });
                }
            }
        }
        let mut sorted_given = pairs.clone();
        sorted_given.sort();
        sorted_given.dedup();
        expect_pairs.sort();
        if sorted_given != expect_pairs {
            return Err(invalid(
                "poset pairs must list exactly every compatible (U, H) combination"
                    .to_string(),
            ));
        }
        Ok(PairPoset::assemble(n, expect_pairs, d_r, d_l))
    }

    /// Deterministic linear extension via Kahn's algorithm; ready elements
    /// are popped in a fixed key order (annihilator rank of `U` ascending,
    /// annihilator rank of `H` descending, then canonical bytes), which is
    /// compatible with the partial order.
    fn assemble(
        n: usize,
        mut pairs: Vec<PosetPair>,
        d_r: Vec<Subgroup>,
        d_l: Vec<Subgroup>,
    ) -> PairPoset {
        pairs.sort();
        pairs.dedup();
        let count = pairs.len();
        let mut indegree = vec![0usize; count];
        let mut succs: Vec<Vec<usize>> = vec![Vec::new(); count];
        for i in 0..count {
            for j in 0..count {
                if i != j && pairs[i].leq(&pairs[j]) {
                    succs[i].push(j);
                    indegree[j] += 1;
                }
            }
        }
        let sort_key = |p: &PosetPair| {
            (p.u.ann_rank(), n - p.h.ann_rank(), p.u.clone(), p.h.clone())
        };
        let mut ready: Vec<usize> = (0..count).filter(|&i| indegree[i] == 0).collect();
        let mut order = Vec::with_capacity(count);
        while !ready.is_empty() {
            ready.sort_by_key(|&i| sort_key(&pairs[i]));
            let next = ready.remove(0);
            order.push(next);
            for &s in &succs[next] {
                indegree[s] -= 1;
                if indegree[s] == 0 {
                    ready.push(s);
                }
            }
        }
        debug_assert_eq!(order.len(), count, "pair order is a partial order");
        let sorted: Vec<PosetPair> = order.into_iter().map(|i| pairs[i].clone()).collect();
        PairPoset { n, pairs: sorted, d_r, d_l }
    }

    /// Ambient torus rank.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Elements in linear-extension order.
    pub fn pairs(&self) -> &[PosetPair] {
        &self.pairs
    }

    /// Right members (the intersection-closed subgroup family).
    pub fn d_r(&self) -> &[Subgroup] {
        &self.d_r
    }

    /// Left members (identity components of the right members).
    pub fn d_l(&self) -> &[Subgroup] {
        &self.d_l
    }

    /// Index lookup.
    pub fn index_of(&self, p: &PosetPair) -> Option<usize> {
        self.pairs.iter().position(|q| q == p)
    }

    /// Order test by index.
    pub fn leq_idx(&self, i: usize, j: usize) -> bool {
        self.pairs[i].leq(&self.pairs[j])
    }

    /// Smallest right member containing `h`: the intersection of all right
    /// members above it (their annihilators add). Always defined because the
    /// full torus is a right member.
    pub fn m_d(&self, h: &Subgroup) -> Subgroup {
        let mut rows: Vec<ZVec> = Vec::new();
        for g in &self.d_r {
            if g.contains(h) {
                rows.extend(g.ann_rows().iter().cloned());
            }
        }
        Subgroup::canonicalize(&rows, self.n).expect("rows are well-shaped")
    }
}
