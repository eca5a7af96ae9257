//! Finite diagrams of cochain algebras over a subgroup-pair poset:
//! structural validation, induced maps on cohomology, and the base-change,
//! localization, and surjectivity checkers, with a consolidated
//! realization-hypothesis report.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::cdga::{
    elem_to_json, parse_elem, CdgaElem, CdgaMorphism, CdgaPresentation, CohomologyCalc,
    FactorElem,
};
use crate::circle::{render_combo, render_minpoly, FiniteCommAlgebra, SplitVerdict};
use crate::error::{internal, invalid, TfResult};
use crate::jsonutil::{as_object, require, value_to_subgroup, value_to_zvec, zvec_to_value};
use crate::lattice::{lattice_contains, PairPoset, PosetPair, Subgroup, ZVec};
use crate::linalg::{complement_indices, express_in_span, SpanTracker, SparseMat};
use crate::poly::monomial_basis;
use crate::scalar::{q0, q1, Q};

/// One structure entry at a node: an integral character vanishing on the
/// node's torus component, together with a degree-2 cocycle representing
/// its image.
#[derive(Clone, Debug)]
pub struct RClass {
    pub character: ZVec,
    pub class: CdgaElem,
}

/// Outcome of one degree-bounded condition check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConditionVerdict {
    VerifiedUpTo(u32),
    Fails { degree: u32, defect: usize },
    Inconclusive { survivors: Vec<String> },
}

impl ConditionVerdict {
    pub fn is_verified(&self) -> bool {
        matches!(self, ConditionVerdict::VerifiedUpTo(_))
    }

    pub fn to_json(&self) -> Value {
        match self {
            ConditionVerdict::VerifiedUpTo(d) => json!({"status": "verified", "up_to": d}),
            ConditionVerdict::Fails { degree, defect } => {
                json!({"status": "fails", "degree": degree, "defect": defect})
            }
            ConditionVerdict::Inconclusive { survivors } => {
                json!({"status": "inconclusive", "survivors": survivors})
            }
        }
    }

    pub fn to_text(&self) -> String {
        match self {
            ConditionVerdict::VerifiedUpTo(d) => format!("verified up to degree {d}"),
            ConditionVerdict::Fails { degree, defect } => {
                format!("fails at degree {degree} (defect {defect})")
            }
            ConditionVerdict::Inconclusive { survivors } => {
                format!("inconclusive; unresolved classes: {}", survivors.join(", "))
            }
        }
    }
}

/// Annihilator search policy for the localization check: how many factors a
/// searched product may have (default twice the degree bound) and the seed
/// for the random sample of extra linear forms.
#[derive(Clone, Debug)]
pub struct LcPolicy {
    pub power_bound: Option<u32>,
    pub seed: u64,
}

impl Default for LcPolicy {
    fn default() -> Self {
        LcPolicy { power_bound: None, seed: 0 }
    }
}

/// Fixed note attached to localization reports describing which tori are
/// examined.
pub const LC_TORUS_NOTE: &str = "localization is checked against the connected members of the \
stable family, plus any tori listed under \"lc_tori\"; a torus applies to a node when it \
contains the node's subgroup and its minimal enclosing family member indexes a poset node";

/// A functor from the pair poset to cochain algebras, with generating
/// morphisms on covering relations and a degree-2 structure basis per node.
pub struct DiagramSystem {
    n: usize,
    poset: PairPoset,
    algebras: Vec<CdgaPresentation>,
    covers: BTreeMap<(usize, usize), CdgaMorphism>,
    induced: BTreeMap<(usize, usize), CdgaMorphism>,
    rstructure: Vec<Vec<RClass>>,
    lc_tori: Vec<Subgroup>,
    calcs: Vec<CohomologyCalc>,
}

fn unit_elem(alg: &CdgaPresentation) -> CdgaElem {
    alg.factors
        .iter()
        .map(|f| {
            let mut e = FactorElem::new();
            e.insert(vec![0; f.gens.len()], q1());
            e
        })
        .collect()
}

fn elem_is_zero(e: &CdgaElem) -> bool {
    e.iter().all(|f| f.is_empty())
}

fn zvec_to_qvec(v: &[num_bigint::BigInt]) -> Vec<Q> {
    v.iter().map(|z| Q::from_integer(z.clone())).collect()
}

/// Scale a nonzero state vector so its first nonzero coordinate is one;
/// annihilation is scale-invariant, so this collapses proportional states.
/// Linear forms in the span of `amb` but outside the span of `vspan`,
/// produced deterministically plus a seeded random sample: the greedy
/// complement basis, the `amb` rows outside the span, pairwise sums and
/// differences over the pooled rows, and eight random integer combinations.
pub(crate) fn forms_outside_span(
    amb: &[Vec<Q>],
    vspan: &[Vec<Q>],
    n: usize,
    seed: u64,
) -> Vec<Vec<Q>> {
    let mut vtr = SpanTracker::new(n);
    for row in vspan {
        vtr.insert(row);
    }
    let mut cands: Vec<Vec<Q>> = Vec::new();
    let keep = complement_indices(vspan, amb, n);
    for &i in &keep {
        if !cands.contains(&amb[i]) {
            cands.push(amb[i].clone());
        }
    }
    for row in amb {
        if !vtr.contains(row) && !cands.contains(row) {
            cands.push(row.clone());
        }
    }
    let mut pool: Vec<Vec<Q>> = cands.clone();
    pool.extend(vspan.iter().cloned());
    for i in 0..pool.len() {
        for j in i + 1..pool.len() {
            for sign in [1i64, -1] {
                let x: Vec<Q> = pool[i]
                    .iter()
                    .zip(&pool[j])
                    .map(|(a, b)| a + &(Q::from_integer(sign.into()) * b))
                    .collect();
                if x.iter().any(|c| !c.is_zero())
                    && !vtr.contains(&x)
                    && !cands.contains(&x)
                {
                    cands.push(x);
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut added = 0;
    let mut attempts = 0;
    while added < 8 && attempts < 200 && !amb.is_empty() {
        attempts += 1;
        let mut x = vec![q0(); n];
        for row in amb {
            let c: i64 = rng.gen_range(-3..=3);
            if c != 0 {
                for (xi, ri) in x.iter_mut().zip(row) {
                    *xi += Q::from_integer(c.into()) * ri;
                }
            }
        }
        if x.iter().any(|c| !c.is_zero()) && !vtr.contains(&x) && !cands.contains(&x) {
            cands.push(x);
            added += 1;
        }
    }
    cands
}

pub(crate) fn normalize_state(v: &[Q]) -> Vec<Q> {
    match v.iter().find(|c| !c.is_zero()) {
        None => v.to_vec(),
        Some(c) => {
            let inv = q1() / c.clone();
            v.iter().map(|x| x * &inv).collect()
        }
    }
}

impl DiagramSystem {
    pub fn new(
        poset: PairPoset,
        algebras: Vec<CdgaPresentation>,
        covers: Vec<((usize, usize), CdgaMorphism)>,
        rstructure: Vec<Vec<RClass>>,
        lc_tori: Vec<Subgroup>,
    ) -> TfResult<DiagramSystem> {
        let nn = poset.pairs().len();
        if algebras.len() != nn {
            return Err(invalid(format!(
                "poset has {nn} nodes but {} algebras were given",
                algebras.len()
            )));
        }
        if rstructure.len() != nn {
            return Err(invalid(format!(
                "poset has {nn} nodes but {} structure entries were given",
                rstructure.len()
            )));
        }
        let mut cmap: BTreeMap<(usize, usize), CdgaMorphism> = BTreeMap::new();
        for ((a, b), m) in covers {
            if a >= nn || b >= nn {
                return Err(invalid("cover map endpoint out of range".to_string()));
            }
            if a == b || !poset.leq_idx(a, b) {
                return Err(invalid(format!(
                    "cover map {} -> {} does not respect the order",
                    poset.pairs()[a].key(),
                    poset.pairs()[b].key()
                )));
            }
            m.validate_shape(&algebras[a], &algebras[b])?;
            if cmap.insert((a, b), m).is_some() {
                return Err(invalid(format!(
                    "duplicate cover map {} -> {}",
                    poset.pairs()[a].key(),
                    poset.pairs()[b].key()
                )));
            }
        }
        for (i, rs) in rstructure.iter().enumerate() {
            for rc in rs {
                if rc.character.len() != poset.n() {
                    return Err(invalid(format!(
                        "structure character at node {} has wrong length",
                        poset.pairs()[i].key()
                    )));
                }
                if rc.class.len() != algebras[i].factors.len() {
                    return Err(invalid(format!(
                        "structure class at node {} has wrong factor count",
                        poset.pairs()[i].key()
                    )));
                }
                for (f, fe) in algebras[i].factors.iter().zip(&rc.class) {
                    for e in fe.keys() {
                        if e.len() != f.gens.len() {
                            return Err(invalid(format!(
                                "structure class at node {} has a malformed monomial",
                                poset.pairs()[i].key()
                            )));
                        }
                    }
                }
            }
        }
        for k in &lc_tori {
            if k.n() != poset.n() {
                return Err(invalid("localization torus has wrong rank".to_string()));
            }
            if !k.is_subtorus() {
                return Err(invalid(format!(
                    "localization entry {} is not a connected subgroup",
                    k.key()
                )));
            }
        }
        let calcs = algebras.iter().cloned().map(CohomologyCalc::new).collect();
        let mut sys = DiagramSystem {
            n: poset.n(),
            poset,
            algebras,
            covers: cmap,
            induced: BTreeMap::new(),
            rstructure,
            lc_tori,
            calcs,
        };
        sys.build_induced()?;
        Ok(sys)
    }

    /// Fill in one canonical composite for every comparable pair, routing
    /// through the smallest usable intermediate node. Fails when some
    /// comparable pair has no chain of cover maps at all.
    fn build_induced(&mut self) -> TfResult<()> {
        let nn = self.poset.pairs().len();
        for b in 0..nn {
            for a in 0..b {
                if !self.poset.leq_idx(a, b) {
                    continue;
                }
                let mut found = None;
                for m in a..b {
                    if !self.poset.leq_idx(a, m) || !self.covers.contains_key(&(m, b)) {
                        continue;
                    }
                    if m == a {
                        found = Some(self.covers[&(a, b)].clone());
                        break;
                    }
                    if let Some(head) = self.induced.get(&(a, m)) {
                        let tail = &self.covers[&(m, b)];
                        found = Some(tail.compose(
                            head,
                            &self.algebras[a],
                            &self.algebras[m],
                            &self.algebras[b],
                        ));
                        break;
                    }
                }
                match found {
                    Some(m) => {
                        self.induced.insert((a, b), m);
                    }
                    None => {
                        return Err(invalid(format!(
                            "no chain of cover maps from {} to {}",
                            self.poset.pairs()[a].key(),
                            self.poset.pairs()[b].key()
                        )))
                    }
                }
            }
        }
        Ok(())
    }

    pub fn poset(&self) -> &PairPoset {
        &self.poset
    }

    pub fn algebras(&self) -> &[CdgaPresentation] {
        &self.algebras
    }

    pub fn node_key(&self, i: usize) -> String {
        self.poset.pairs()[i].key()
    }

    /// The canonical composite morphism for a comparable pair.
    pub fn morphism(&self, a: usize, b: usize) -> Option<&CdgaMorphism> {
        self.induced.get(&(a, b))
    }

    /// Cohomology dimensions of one node in degrees `0..=up_to`.
    pub fn hilbert(&mut self, node: usize, up_to: u32) -> Vec<usize> {
        self.calcs[node].hilbert(up_to)
    }

    pub fn h_dim(&mut self, node: usize, k: u32) -> usize {
        self.calcs[node].h_dim(k)
    }

    /// Image of a rational character under the node's structure map,
    /// extended linearly from the given basis entries.
    pub fn rho(&self, node: usize, chi: &[Q]) -> TfResult<CdgaElem> {
        let rs = &self.rstructure[node];
        let basis: Vec<Vec<Q>> = rs.iter().map(|rc| zvec_to_qvec(&rc.character)).collect();
        let coeffs = express_in_span(&basis, chi).ok_or_else(|| {
            invalid(format!(
                "character outside the structure span at node {}",
                self.poset.pairs()[node].key()
            ))
        })?;
        let alg = &self.algebras[node];
        let mut out = alg.zero_elem();
        for (c, rc) in coeffs.iter().zip(rs) {
            if !c.is_zero() {
                out = alg.elem_add(&out, &alg.elem_scale(&rc.class, c));
            }
        }
        Ok(out)
    }

    /// Do two morphisms act identically? Compared on factor units and
    /// generators, which determine an algebra map together with the routing.
    fn morphisms_agree(
        &self,
        f: &CdgaMorphism,
        g: &CdgaMorphism,
        a: usize,
        b: usize,
    ) -> bool {
        let src = &self.algebras[a];
        let tgt = &self.algebras[b];
        let mut probes: Vec<CdgaElem> = Vec::new();
        for (fi, factor) in src.factors.iter().enumerate() {
            let mut unit = src.zero_elem();
            unit[fi].insert(vec![0; factor.gens.len()], q1());
            probes.push(unit);
            for gi in 0..factor.gens.len() {
                let mut e = src.zero_elem();
                let mut expo = vec![0; factor.gens.len()];
                expo[gi] = 1;
                e[fi].insert(expo, q1());
                probes.push(e);
            }
        }
        probes
            .iter()
            .all(|p| f.apply(src, tgt, p) == g.apply(src, tgt, p))
    }

    /// Collect every structural violation: differentials squaring to zero,
    /// cover maps commuting with the differentials and preserving degrees,
    /// functoriality of all composable triples, and well-formedness plus
    /// naturality of the degree-2 structure classes.
    pub fn validate(&mut self) -> Vec<String> {
        let mut out = Vec::new();
        let nn = self.poset.pairs().len();
        for i in 0..nn {
            let alg = &self.algebras[i];
            for (fi, f) in alg.factors.iter().enumerate() {
                for (gi, g) in f.gens.iter().enumerate() {
                    let mut dg = alg.zero_elem();
                    dg[fi] = f.diff[gi].clone();
                    let dd = alg.d(&dg);
                    if !elem_is_zero(&dd) {
                        out.push(format!(
                            "node {}: d² ≠ 0 on generator '{}'",
                            self.poset.pairs()[i].key(),
                            g.name
                        ));
                    }
                }
            }
        }
        for ((a, b), m) in &self.covers {
            if let Err(e) = m.validate(&self.algebras[*a], &self.algebras[*b]) {
                out.push(format!(
                    "map {} -> {}: {}",
                    self.poset.pairs()[*a].key(),
                    self.poset.pairs()[*b].key(),
                    e
                ));
            }
        }
        for a in 0..nn {
            for m in a + 1..nn {
                if !self.poset.leq_idx(a, m) {
                    continue;
                }
                for b in m + 1..nn {
                    if !self.poset.leq_idx(m, b) || !self.poset.leq_idx(a, b) {
                        continue;
                    }
                    let (head, tail, direct) = match (
                        self.induced.get(&(a, m)),
                        self.induced.get(&(m, b)),
                        self.induced.get(&(a, b)),
                    ) {
                        (Some(h), Some(t), Some(d)) => (h, t, d),
                        _ => continue,
                    };
                    let chained = tail.compose(
                        head,
                        &self.algebras[a],
                        &self.algebras[m],
                        &self.algebras[b],
                    );
                    if !self.morphisms_agree(&chained, direct, a, b) {
                        out.push(format!(
                            "maps {} -> {} -> {} disagree with the direct map",
                            self.poset.pairs()[a].key(),
                            self.poset.pairs()[m].key(),
                            self.poset.pairs()[b].key()
                        ));
                    }
                }
            }
        }
        for i in 0..nn {
            let key = self.poset.pairs()[i].key();
            let u = &self.poset.pairs()[i].u;
            let expected = u.ann_rank();
            let rs = &self.rstructure[i];
            if rs.len() != expected {
                out.push(format!(
                    "node {key}: structure basis has {} entries, expected {expected}",
                    rs.len()
                ));
            }
            let mut tr = SpanTracker::new(self.n);
            for rc in rs {
                if !lattice_contains(u.ann_rows(), &rc.character) {
                    out.push(format!(
                        "node {key}: structure character {:?} does not vanish on the node's torus",
                        rc.character.iter().map(|z| z.to_string()).collect::<Vec<_>>()
                    ));
                }
                tr.insert(&zvec_to_qvec(&rc.character));
            }
            if rs.len() == expected && tr.rank() != expected {
                out.push(format!("node {key}: structure characters are dependent"));
            }
            for rc in rs {
                match self.algebras[i].elem_degree(&rc.class) {
                    Ok(None) | Ok(Some(2)) => {}
                    _ => {
                        out.push(format!(
                            "node {key}: a structure class is not homogeneous of degree 2"
                        ));
                        continue;
                    }
                }
                if !elem_is_zero(&self.algebras[i].d(&rc.class)) {
                    out.push(format!("node {key}: a structure class is not a cocycle"));
                }
            }
        }
        // naturality up to exactness along the given covers; functoriality
        // extends it to all composites
        let cover_keys: Vec<(usize, usize)> = self.covers.keys().cloned().collect();
        for (a, b) in cover_keys {
            let entries = self.rstructure[a].clone();
            for rc in entries {
                let chi = zvec_to_qvec(&rc.character);
                let target_class = match self.rho(b, &chi) {
                    Ok(e) => e,
                    Err(e) => {
                        out.push(format!(
                            "structure naturality {} -> {}: {}",
                            self.poset.pairs()[a].key(),
                            self.poset.pairs()[b].key(),
                            e
                        ));
                        continue;
                    }
                };
                let phi = &self.covers[&(a, b)];
                let img = phi.apply(&self.algebras[a], &self.algebras[b], &rc.class);
                let diff = {
                    let alg_b = &self.algebras[b];
                    alg_b.elem_add(&img, &alg_b.elem_scale(&target_class, &-q1()))
                };
                if elem_is_zero(&diff) {
                    continue;
                }
                let ok = match self.calcs[b].elem_to_coeffs(2, &diff) {
                    Ok(coeffs) => self.calcs[b].is_coboundary(2, &coeffs),
                    Err(_) => false,
                };
                if !ok {
                    out.push(format!(
                        "structure naturality fails along {} -> {} on character {:?}",
                        self.poset.pairs()[a].key(),
                        self.poset.pairs()[b].key(),
                        rc.character.iter().map(|z| z.to_string()).collect::<Vec<_>>()
                    ));
                }
            }
        }
        out
    }

    // -----------------------------------------------------------------
    // base-change (triviality) condition
    // -----------------------------------------------------------------

    /// Pairs subject to the base-change test: same closed subgroup, with a
    /// strictly smaller torus component on the target side.
    pub fn tc_pairs(&self) -> Vec<(usize, usize)> {
        let ps = self.poset.pairs();
        let mut out = Vec::new();
        for a in 0..ps.len() {
            for b in 0..ps.len() {
                if a != b
                    && ps[a].h == ps[b].h
                    && ps[a].u.contains(&ps[b].u)
                    && ps[a].u != ps[b].u
                {
                    out.push((a, b));
                }
            }
        }
        out.sort_unstable();
        out
    }

    pub fn check_tc(&mut self, dmax: u32) -> TfResult<Vec<((usize, usize), ConditionVerdict)>> {
        let mut out = Vec::new();
        for (a, b) in self.tc_pairs() {
            let v = self.tc_pair_verdict(a, b, dmax)?;
            out.push(((a, b), v));
        }
        Ok(out)
    }

    /// Degreewise comparison of the polynomial extension of `H(node a)` by
    /// a complement of characters against `H(node b)`, via the structure
    /// classes of `b`.
    fn tc_pair_verdict(&mut self, a: usize, b: usize, dmax: u32) -> TfResult<ConditionVerdict> {
        let ua = self.poset.pairs()[a].u.clone();
        let ub = self.poset.pairs()[b].u.clone();
        let sub = ua.quotient_char_space()?;
        let amb = ub.quotient_char_space()?;
        let keep = complement_indices(&sub, &amb, self.n);
        let w: Vec<Vec<Q>> = keep.iter().map(|&i| amb[i].clone()).collect();
        if sub.len() + w.len() != amb.len() {
            return Err(internal(
                "complement of character spaces has unexpected dimension".to_string(),
            ));
        }
        let wclasses: Vec<CdgaElem> =
            w.iter().map(|chi| self.rho(b, chi)).collect::<TfResult<_>>()?;
        let phi = self
            .induced
            .get(&(a, b))
            .cloned()
            .ok_or_else(|| internal("missing composite for a comparable pair".to_string()))?;
        for k in 0..=dmax {
            let mut cols: Vec<Vec<Q>> = Vec::new();
            for j in 0..=(k / 2) {
                let hdeg = k - 2 * j;
                let hb = self.calcs[a].h_basis(hdeg);
                if hb.is_empty() {
                    continue;
                }
                for mono in monomial_basis(w.len(), j) {
                    let wterm = {
                        let alg_b = &self.algebras[b];
                        let mut acc = unit_elem(alg_b);
                        for (t, &e) in mono.iter().enumerate() {
                            for _ in 0..e {
                                acc = alg_b.elem_mul(&acc, &wclasses[t]);
                            }
                        }
                        acc
                    };
                    for hv in &hb {
                        let lift = self.calcs[a].coeffs_to_elem(hdeg, hv);
                        let img = phi.apply(&self.algebras[a], &self.algebras[b], &lift);
                        let full = self.algebras[b].elem_mul(&wterm, &img);
                        let coeffs = self.calcs[b].elem_to_coeffs(k, &full)?;
                        cols.push(self.calcs[b].reduce_to_h(k, &coeffs)?);
                    }
                }
            }
            let lhs_dim = cols.len();
            let rhs_dim = self.calcs[b].h_dim(k);
            if lhs_dim != rhs_dim {
                return Ok(ConditionVerdict::Fails {
                    degree: k,
                    defect: lhs_dim.abs_diff(rhs_dim),
                });
            }
            let mut m = SparseMat::new(rhs_dim);
            for c in &cols {
                m.push_dense_row(c);
            }
            let rank = m.rank();
            if rank < rhs_dim {
                return Ok(ConditionVerdict::Fails { degree: k, defect: rhs_dim - rank });
            }
        }
        Ok(ConditionVerdict::VerifiedUpTo(dmax))
    }

    // -----------------------------------------------------------------
    // surjectivity condition
    // -----------------------------------------------------------------

    /// For each node, the degreewise limit over its strict upper set is the
    /// compatible-tuple subspace of the product of cochain spaces; the node
    /// must surject onto it in every degree up to the bound.
    pub fn check_sc(&mut self, dmax: u32) -> TfResult<Vec<(usize, ConditionVerdict)>> {
        let nn = self.poset.pairs().len();
        let mut out = Vec::new();
        for i in 0..nn {
            let upper: Vec<usize> =
                (0..nn).filter(|&j| j != i && self.poset.leq_idx(i, j)).collect();
            if upper.is_empty() {
                out.push((i, ConditionVerdict::VerifiedUpTo(dmax)));
                continue;
            }
            let mut verdict = ConditionVerdict::VerifiedUpTo(dmax);
            'degrees: for k in 0..=dmax {
                let dims: Vec<usize> =
                    upper.iter().map(|&j| self.calcs[j].chain_dim(k)).collect();
                let mut off = vec![0usize; upper.len()];
                for p in 1..upper.len() {
                    off[p] = off[p - 1] + dims[p - 1];
                }
                let total: usize = dims.iter().sum();
                let mut constraints = SparseMat::new(total);
                for (p1, &j1) in upper.iter().enumerate() {
                    for (p2, &j2) in upper.iter().enumerate() {
                        if j1 == j2 || !self.poset.leq_idx(j1, j2) {
                            continue;
                        }
                        let phi = self.induced[&(j1, j2)].clone();
                        let mut colv: Vec<Vec<Q>> = Vec::new();
                        for t in 0..dims[p1] {
                            let mut e = vec![q0(); dims[p1]];
                            e[t] = q1();
                            let elem = self.calcs[j1].coeffs_to_elem(k, &e);
                            let img =
                                phi.apply(&self.algebras[j1], &self.algebras[j2], &elem);
                            colv.push(self.calcs[j2].elem_to_coeffs(k, &img)?);
                        }
                        for r in 0..dims[p2] {
                            let mut row = vec![q0(); total];
                            row[off[p2] + r] = q1();
                            for t in 0..dims[p1] {
                                if !colv[t][r].is_zero() {
                                    row[off[p1] + t] = -colv[t][r].clone();
                                }
                            }
                            constraints.push_dense_row(&row);
                        }
                    }
                }
                let limit = constraints.kernel_basis();
                let mut tracker = SpanTracker::new(total);
                for s in 0..self.calcs[i].chain_dim(k) {
                    let mut e = vec![q0(); self.calcs[i].chain_dim(k)];
                    e[s] = q1();
                    let elem = self.calcs[i].coeffs_to_elem(k, &e);
                    let mut tuple = vec![q0(); total];
                    for (p, &j) in upper.iter().enumerate() {
                        let img = self.induced[&(i, j)].apply(
                            &self.algebras[i],
                            &self.algebras[j],
                            &elem,
                        );
                        let coeffs = self.calcs[j].elem_to_coeffs(k, &img)?;
                        tuple[off[p]..off[p] + dims[p]].clone_from_slice(&coeffs);
                    }
                    tracker.insert(&tuple);
                }
                let mut defect = 0usize;
                for v in &limit {
                    if tracker.insert(v) {
                        defect += 1;
                    }
                }
                if defect > 0 {
                    verdict = ConditionVerdict::Fails { degree: k, defect };
                    break 'degrees;
                }
            }
            out.push((i, verdict));
        }
        Ok(out)
    }

    // -----------------------------------------------------------------
    // localization condition
    // -----------------------------------------------------------------

    /// Applicable (node, torus) pairs, in node order then torus order.
    pub fn lc_pairs(&self) -> Vec<(usize, Subgroup)> {
        let ps = self.poset.pairs();
        let mut tori: Vec<Subgroup> = self.poset.d_l().to_vec();
        for k in &self.lc_tori {
            if !tori.contains(k) {
                tori.push(k.clone());
            }
        }
        let mut out = Vec::new();
        for i in 0..ps.len() {
            for kk in &tori {
                if !kk.contains(&ps[i].h) {
                    continue;
                }
                let target = match PosetPair::new(ps[i].u.clone(), self.poset.m_d(kk)) {
                    Ok(p) => p,
                    Err(_) => continue,
                };
                if self.poset.index_of(&target).is_some() {
                    out.push((i, kk.clone()));
                }
            }
        }
        out
    }

    /// Deterministic linear forms outside the given torus's character
    /// space, plus a seeded random sample.
    fn lc_candidates(
        &self,
        u: &Subgroup,
        kk: &Subgroup,
        seed: u64,
    ) -> TfResult<Vec<Vec<Q>>> {
        let amb = u.quotient_char_space()?;
        let vspan = kk.quotient_char_space()?;
        Ok(forms_outside_span(&amb, &vspan, self.n, seed))
    }

    pub fn check_lc(
        &mut self,
        dmax: u32,
        policy: &LcPolicy,
    ) -> TfResult<Vec<((usize, Subgroup), ConditionVerdict)>> {
        let mut out = Vec::new();
        for (i, kk) in self.lc_pairs() {
            let v = self.lc_pair_verdict(i, &kk, dmax, policy)?;
            out.push(((i, kk), v));
        }
        Ok(out)
    }

    /// Matrix columns of the induced cohomology map in one degree, as
    /// reduced coordinate vectors in the target's cohomology basis.
    fn induced_h_cols(
        &mut self,
        a: usize,
        b: usize,
        phi: &CdgaMorphism,
        k: u32,
    ) -> TfResult<Vec<Vec<Q>>> {
        let hb = self.calcs[a].h_basis(k);
        let mut cols = Vec::new();
        for hv in &hb {
            let lift = self.calcs[a].coeffs_to_elem(k, hv);
            let img = phi.apply(&self.algebras[a], &self.algebras[b], &lift);
            let coeffs = self.calcs[b].elem_to_coeffs(k, &img)?;
            cols.push(self.calcs[b].reduce_to_h(k, &coeffs)?);
        }
        Ok(cols)
    }

    fn lc_pair_verdict(
        &mut self,
        a: usize,
        kk: &Subgroup,
        dmax: u32,
        policy: &LcPolicy,
    ) -> TfResult<ConditionVerdict> {
        let pa = self.poset.pairs()[a].clone();
        let target = PosetPair::new(pa.u.clone(), self.poset.m_d(kk))?;
        let b = self
            .poset
            .index_of(&target)
            .ok_or_else(|| internal("localization target left the poset".to_string()))?;
        if b == a {
            // the structure map is the identity; nothing to annihilate
            return Ok(ConditionVerdict::VerifiedUpTo(dmax));
        }
        let bound = policy.power_bound.unwrap_or(2 * dmax).max(1);
        let cands = self.lc_candidates(&pa.u, kk, policy.seed)?;
        let rho_a: Vec<CdgaElem> =
            cands.iter().map(|c| self.rho(a, c)).collect::<TfResult<_>>()?;
        let rho_b: Vec<CdgaElem> =
            cands.iter().map(|c| self.rho(b, c)).collect::<TfResult<_>>()?;
        let phi = self
            .induced
            .get(&(a, b))
            .cloned()
            .ok_or_else(|| internal("missing composite for a comparable pair".to_string()))?;
        let mut im_cache: BTreeMap<u32, SpanTracker> = BTreeMap::new();
        let mut survivors = Vec::new();
        for k in 0..=dmax {
            let cols = self.induced_h_cols(a, b, &phi, k)?;
            let ha = cols.len();
            let hb = self.calcs[b].h_dim(k);
            // kernel side: classes of the source dying in the target
            let mut m = SparseMat::new(ha);
            for r in 0..hb {
                let mut row = vec![q0(); ha];
                for (t, c) in cols.iter().enumerate() {
                    row[t] = c[r].clone();
                }
                m.push_dense_row(&row);
            }
            for kv in m.kernel_basis() {
                if !self.annihilates_kernel_class(a, k, &kv, &rho_a, bound)? {
                    let elem = self.h_combo_elem(a, k, &kv);
                    survivors.push(self.algebras[a].render_elem(&elem));
                }
            }
            // cokernel side: target classes outside the image
            let eye: Vec<Vec<Q>> = (0..hb)
                .map(|r| {
                    let mut e = vec![q0(); hb];
                    e[r] = q1();
                    e
                })
                .collect();
            for r in complement_indices(&cols, &eye, hb) {
                if !self.annihilates_coker_class(
                    a,
                    b,
                    &phi,
                    k,
                    &eye[r],
                    &rho_b,
                    bound,
                    &mut im_cache,
                )? {
                    let elem = self.h_combo_elem(b, k, &eye[r]);
                    survivors.push(self.algebras[b].render_elem(&elem));
                }
            }
        }
        if survivors.is_empty() {
            Ok(ConditionVerdict::VerifiedUpTo(dmax))
        } else {
            Ok(ConditionVerdict::Inconclusive { survivors })
        }
    }

    /// Lift reduced cohomology coordinates at one node back to a cochain
    /// representative.
    fn h_combo_elem(&mut self, node: usize, k: u32, coords: &[Q]) -> CdgaElem {
        let hb = self.calcs[node].h_basis(k);
        let cdim = self.calcs[node].chain_dim(k);
        let mut chain = vec![q0(); cdim];
        for (c, hv) in coords.iter().zip(&hb) {
            if c.is_zero() {
                continue;
            }
            for (slot, x) in chain.iter_mut().zip(hv) {
                *slot += c * x;
            }
        }
        self.calcs[node].coeffs_to_elem(k, &chain)
    }

    /// Breadth-first search for a product of candidate forms annihilating a
    /// cohomology class of the source node.
    fn annihilates_kernel_class(
        &mut self,
        a: usize,
        k: u32,
        coords: &[Q],
        rho: &[CdgaElem],
        bound: u32,
    ) -> TfResult<bool> {
        if coords.iter().all(|c| c.is_zero()) {
            return Ok(true);
        }
        let mut seen: BTreeSet<(u32, Vec<Q>)> = BTreeSet::new();
        let mut frontier = vec![(k, normalize_state(coords))];
        for _ in 0..bound {
            let mut next: Vec<(u32, Vec<Q>)> = Vec::new();
            for (deg, state) in &frontier {
                let elem = self.h_combo_elem(a, *deg, state);
                for re in rho {
                    let prod = self.algebras[a].elem_mul(re, &elem);
                    let coeffs = self.calcs[a].elem_to_coeffs(deg + 2, &prod)?;
                    let red = self.calcs[a].reduce_to_h(deg + 2, &coeffs)?;
                    if red.iter().all(|c| c.is_zero()) {
                        return Ok(true);
                    }
                    let nrm = normalize_state(&red);
                    if seen.insert((deg + 2, nrm.clone())) && next.len() < 64 {
                        next.push((deg + 2, nrm));
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            frontier = next;
        }
        Ok(false)
    }

    /// Search for a product of candidate forms pushing a target class into
    /// the image of the induced map.
    #[allow(clippy::too_many_arguments)]
    fn annihilates_coker_class(
        &mut self,
        a: usize,
        b: usize,
        phi: &CdgaMorphism,
        k: u32,
        coords: &[Q],
        rho: &[CdgaElem],
        bound: u32,
        im_cache: &mut BTreeMap<u32, SpanTracker>,
    ) -> TfResult<bool> {
        let reduce = |sys: &mut DiagramSystem,
                      cache: &mut BTreeMap<u32, SpanTracker>,
                      deg: u32,
                      v: &[Q]|
         -> TfResult<Vec<Q>> {
            if !cache.contains_key(&deg) {
                let cols = sys.induced_h_cols(a, b, phi, deg)?;
                let mut tr = SpanTracker::new(sys.calcs[b].h_dim(deg));
                for c in &cols {
                    tr.insert(c);
                }
                cache.insert(deg, tr);
            }
            Ok(cache[&deg].reduce(v))
        };
        let start = reduce(self, im_cache, k, coords)?;
        if start.iter().all(|c| c.is_zero()) {
            return Ok(true);
        }
        let mut seen: BTreeSet<(u32, Vec<Q>)> = BTreeSet::new();
        let mut frontier = vec![(k, normalize_state(&start))];
        for _ in 0..bound {
            let mut next: Vec<(u32, Vec<Q>)> = Vec::new();
            for (deg, state) in frontier.clone() {
                let elem = self.h_combo_elem(b, deg, &state);
                for re in rho {
                    let prod = self.algebras[b].elem_mul(re, &elem);
                    let coeffs = self.calcs[b].elem_to_coeffs(deg + 2, &prod)?;
                    let red = self.calcs[b].reduce_to_h(deg + 2, &coeffs)?;
                    let res = reduce(self, im_cache, deg + 2, &red)?;
                    if res.iter().all(|c| c.is_zero()) {
                        return Ok(true);
                    }
                    let nrm = normalize_state(&res);
                    if seen.insert((deg + 2, nrm.clone())) && next.len() < 64 {
                        next.push((deg + 2, nrm));
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            frontier = next;
        }
        Ok(false)
    }

    // -----------------------------------------------------------------
    // hypothesis report
    // -----------------------------------------------------------------

    /// Is the degree-0 cohomology a finite product of copies of ℚ?
    fn spacelike_check(&mut self, i: usize) -> TfResult<(bool, Option<String>)> {
        let dim = self.calcs[i].h_dim(0);
        if dim == 0 {
            return Ok((true, None));
        }
        let hb = self.calcs[i].h_basis(0);
        let mut mult = vec![vec![vec![q0(); dim]; dim]; dim];
        for s in 0..dim {
            for t in 0..dim {
                let es = self.calcs[i].coeffs_to_elem(0, &hb[s]);
                let et = self.calcs[i].coeffs_to_elem(0, &hb[t]);
                let prod = self.algebras[i].elem_mul(&es, &et);
                let pc = self.calcs[i].elem_to_coeffs(0, &prod)?;
                mult[s][t] = self.calcs[i].reduce_to_h(0, &pc)?;
            }
        }
        let uc = {
            let unit = unit_elem(&self.algebras[i]);
            self.calcs[i].elem_to_coeffs(0, &unit)?
        };
        let unit = self.calcs[i].reduce_to_h(0, &uc)?;
        let names: Vec<String> = (0..dim).map(|t| format!("h{t}")).collect();
        let alg = FiniteCommAlgebra::new(names, mult, unit)?;
        match alg.split_semisimple_test()? {
            SplitVerdict::Split { .. } => Ok((true, None)),
            SplitVerdict::Nilpotents { witness } => Ok((
                false,
                Some(format!(
                    "degree-0 cohomology has a nilpotent element {}",
                    render_combo(&witness, alg.names())
                )),
            )),
            SplitVerdict::FieldExtension { minpoly } => Ok((
                false,
                Some(format!(
                    "degree-0 cohomology contains a field extension with minimal polynomial {}",
                    render_minpoly(&minpoly)
                )),
            )),
        }
    }

    /// Does the structure action pair degree-0 classes injectively into
    /// degree 2?
    fn injectivity_check(&mut self, i: usize) -> TfResult<bool> {
        let rs = self.rstructure[i].clone();
        let h0 = self.calcs[i].h_dim(0);
        if rs.is_empty() || h0 == 0 {
            return Ok(true);
        }
        let hb = self.calcs[i].h_basis(0);
        let h2 = self.calcs[i].h_dim(2);
        let mut m = SparseMat::new(h2);
        let mut count = 0usize;
        for rc in &rs {
            for hv in &hb {
                let h = self.calcs[i].coeffs_to_elem(0, hv);
                let prod = self.algebras[i].elem_mul(&rc.class, &h);
                let pc = self.calcs[i].elem_to_coeffs(2, &prod)?;
                m.push_dense_row(&self.calcs[i].reduce_to_h(2, &pc)?);
                count += 1;
            }
        }
        Ok(m.rank() == count)
    }

    /// Greedy minimal-generator probe over the structure image: degrees of
    /// new generators, and whether none appear in the top third of the
    /// examined range. Heuristic only.
    fn fingen_probe(&mut self, i: usize, dmax: u32) -> TfResult<FingenProbe> {
        let rho: Vec<CdgaElem> =
            self.rstructure[i].iter().map(|rc| rc.class.clone()).collect();
        let mut generator_degrees = Vec::new();
        for k in 0..=dmax {
            let hk = self.calcs[i].h_dim(k);
            if hk == 0 {
                continue;
            }
            let mut tr = SpanTracker::new(hk);
            if k >= 2 {
                let hb = self.calcs[i].h_basis(k - 2);
                for re in &rho {
                    for hv in &hb {
                        let h = self.calcs[i].coeffs_to_elem(k - 2, hv);
                        let prod = self.algebras[i].elem_mul(re, &h);
                        let pc = self.calcs[i].elem_to_coeffs(k, &prod)?;
                        tr.insert(&self.calcs[i].reduce_to_h(k, &pc)?);
                    }
                }
            }
            for _ in 0..hk.saturating_sub(tr.rank()) {
                generator_degrees.push(k);
            }
        }
        let cutoff = 2 * dmax / 3;
        let stable = generator_degrees.iter().all(|&d| d <= cutoff);
        Ok(FingenProbe { generator_degrees, stable })
    }

    /// Consolidate the per-node checks with precomputed base-change and
    /// localization verdicts.
    fn hypotheses_from(
        &mut self,
        dmax: u32,
        tc: &[((usize, usize), ConditionVerdict)],
        lc: &[((usize, Subgroup), ConditionVerdict)],
    ) -> TfResult<HypothesesReport> {
        let nn = self.poset.pairs().len();
        let mut nodes = Vec::new();
        let mut infinite = Vec::new();
        let mut finite = Vec::new();
        let cutoff = 2 * dmax / 3;
        for i in 0..nn {
            let key = self.node_key(i);
            let (spacelike, detail) = self.spacelike_check(i)?;
            let h1_zero = self.calcs[i].h_dim(1) == 0;
            let injective = self.injectivity_check(i)?;
            let fingen = self.fingen_probe(i, dmax)?;
            if !spacelike {
                infinite.push(format!(
                    "node {key}: {}",
                    detail.clone().unwrap_or_else(|| "degree-0 cohomology is not split".into())
                ));
            }
            if !h1_zero {
                infinite.push(format!("node {key}: degree-1 cohomology is nonzero"));
            }
            if !injective {
                finite.push(format!(
                    "node {key}: structure action on degree-0 classes is not injective"
                ));
            }
            if !fingen.stable {
                finite.push(format!(
                    "node {key}: generator probe found new generators past degree {cutoff} (heuristic)"
                ));
            }
            nodes.push(NodeHypotheses {
                node: key,
                spacelike,
                spacelike_detail: detail,
                h1_zero,
                injective,
                fingen,
            });
        }
        for ((a, b), v) in tc {
            if !v.is_verified() {
                infinite.push(format!(
                    "base-change {} -> {}: {}",
                    self.node_key(*a),
                    self.node_key(*b),
                    v.to_text()
                ));
            }
        }
        for ((i, kk), v) in lc {
            if !v.is_verified() {
                finite.push(format!(
                    "localization at {} with torus {}: {}",
                    self.node_key(*i),
                    kk.key(),
                    v.to_text()
                ));
            }
        }
        let finite_failures: Vec<String> =
            infinite.iter().cloned().chain(finite.into_iter()).collect();
        Ok(HypothesesReport {
            degree_bound: dmax,
            nodes,
            infinite_failures: infinite,
            finite_failures,
        })
    }

    /// Run the per-node checks together with the base-change and
    /// localization conditions, and consolidate both hypothesis lists.
    pub fn realization_hypotheses(
        &mut self,
        dmax: u32,
        policy: &LcPolicy,
    ) -> TfResult<HypothesesReport> {
        let tc = self.check_tc(dmax)?;
        let lc = self.check_lc(dmax, policy)?;
        self.hypotheses_from(dmax, &tc, &lc)
    }

    /// Validation plus every checker, in one deterministic report. When
    /// validation fails, only the violation list is populated.
    pub fn full_report(&mut self, dmax: u32, policy: &LcPolicy) -> TfResult<SystemReport> {
        let violations = self.validate();
        if !violations.is_empty() {
            return Ok(SystemReport {
                degree_bound: dmax,
                violations,
                hilbert: Vec::new(),
                tc: Vec::new(),
                sc: Vec::new(),
                lc: Vec::new(),
                hypotheses: None,
            });
        }
        let nn = self.poset.pairs().len();
        let mut hilbert = Vec::new();
        for i in 0..nn {
            let h = self.calcs[i].hilbert(dmax);
            hilbert.push((self.node_key(i), h));
        }
        let tc = self.check_tc(dmax)?;
        let sc = self.check_sc(dmax)?;
        let lc = self.check_lc(dmax, policy)?;
        let hypotheses = self.hypotheses_from(dmax, &tc, &lc)?;
        Ok(SystemReport {
            degree_bound: dmax,
            violations: Vec::new(),
            hilbert,
            tc: tc
                .into_iter()
                .map(|((a, b), v)| (format!("{} -> {}", self.node_key(a), self.node_key(b)), v))
                .collect(),
            sc: sc.into_iter().map(|(i, v)| (self.node_key(i), v)).collect(),
            lc: lc
                .into_iter()
                .map(|((i, kk), v)| (format!("{} @ K={}", self.node_key(i), kk.key()), v))
                .collect(),
            hypotheses: Some(hypotheses),
        })
    }

    // -----------------------------------------------------------------
    // serialization
    // -----------------------------------------------------------------

    /// Parse `{"n", "poset", "algebras", "maps", "rstructure", "lc_tori"}`.
    pub fn from_json(v: &Value) -> TfResult<DiagramSystem> {
        let obj = as_object(v)?;
        if let Some(s) = obj.get("schema") {
            if s.as_str() != Some(crate::SCHEMA) {
                return Err(invalid(format!("unsupported schema {s}")));
            }
        }
        let n = require(obj, "n")?
            .as_u64()
            .ok_or_else(|| invalid("\"n\" must be a positive integer".to_string()))?
            as usize;
        if n == 0 {
            return Err(invalid("torus rank must be at least 1".to_string()));
        }
        let pairs_v = require(obj, "poset")?
            .as_array()
            .ok_or_else(|| invalid("\"poset\" must be an array".to_string()))?;
        let mut pairs = Vec::new();
        for pv in pairs_v {
            let pobj = as_object(pv)?;
            let u = value_to_subgroup(require(pobj, "u")?, n)?;
            let h = value_to_subgroup(require(pobj, "h")?, n)?;
            pairs.push(PosetPair::new(u, h)?);
        }
        let poset = PairPoset::from_pairs(pairs, n)?;
        let mut key_index: BTreeMap<String, usize> = BTreeMap::new();
        for (i, p) in poset.pairs().iter().enumerate() {
            key_index.insert(p.key(), i);
        }
        let algebras_v = as_object(require(obj, "algebras")?)?;
        let mut algebras = Vec::with_capacity(poset.pairs().len());
        for p in poset.pairs() {
            let av = algebras_v
                .get(&p.key())
                .ok_or_else(|| invalid(format!("missing algebra for node {}", p.key())))?;
            algebras.push(CdgaPresentation::from_json(av)?);
        }
        for k in algebras_v.keys() {
            if !key_index.contains_key(k) {
                return Err(invalid(format!("algebra listed for unknown node {k}")));
            }
        }
        let mut covers = Vec::new();
        if let Some(mv) = obj.get("maps") {
            for (ekey, emap) in as_object(mv)? {
                let (src, dst) = ekey
                    .split_once("->")
                    .ok_or_else(|| invalid(format!("malformed edge key {ekey}")))?;
                let a = *key_index
                    .get(src.trim())
                    .ok_or_else(|| invalid(format!("edge source {src} is not a node")))?;
                let b = *key_index
                    .get(dst.trim())
                    .ok_or_else(|| invalid(format!("edge target {dst} is not a node")))?;
                let m = CdgaMorphism::from_json(emap, &algebras[a], &algebras[b])?;
                covers.push(((a, b), m));
            }
        }
        let mut rstructure = vec![Vec::new(); poset.pairs().len()];
        if let Some(rv) = obj.get("rstructure") {
            for (key, entries) in as_object(rv)? {
                let i = *key_index
                    .get(key.as_str())
                    .ok_or_else(|| invalid(format!("structure listed for unknown node {key}")))?;
                let arr = entries
                    .as_array()
                    .ok_or_else(|| invalid("structure entries must be an array".to_string()))?;
                for ev in arr {
                    let eobj = as_object(ev)?;
                    let character = value_to_zvec(require(eobj, "char")?)?;
                    let class = parse_elem(require(eobj, "class")?, &algebras[i])?;
                    rstructure[i].push(RClass { character, class });
                }
            }
        }
        let mut lc_tori = Vec::new();
        if let Some(tv) = obj.get("lc_tori") {
            let arr = tv
                .as_array()
                .ok_or_else(|| invalid("\"lc_tori\" must be an array".to_string()))?;
            for t in arr {
                lc_tori.push(value_to_subgroup(t, n)?);
            }
        }
        DiagramSystem::new(poset, algebras, covers, rstructure, lc_tori)
    }

    pub fn to_json(&self) -> Value {
        let mut algebras = serde_json::Map::new();
        for (p, alg) in self.poset.pairs().iter().zip(&self.algebras) {
            algebras.insert(p.key(), alg.to_json());
        }
        let mut maps = serde_json::Map::new();
        for ((a, b), m) in &self.covers {
            maps.insert(
                format!("{}->{}", self.node_key(*a), self.node_key(*b)),
                m.to_json(&self.algebras[*a]),
            );
        }
        let mut rstructure = serde_json::Map::new();
        for (i, rs) in self.rstructure.iter().enumerate() {
            if rs.is_empty() {
                continue;
            }
            let entries: Vec<Value> = rs
                .iter()
                .map(|rc| {
                    json!({
                        "char": zvec_to_value(&rc.character),
                        "class": elem_to_json(&rc.class),
                    })
                })
                .collect();
            rstructure.insert(self.node_key(i), Value::Array(entries));
        }
        let poset: Vec<Value> = self
            .poset
            .pairs()
            .iter()
            .map(|p| {
                json!({
                    "u": crate::jsonutil::subgroup_to_value(&p.u),
                    "h": crate::jsonutil::subgroup_to_value(&p.h),
                })
            })
            .collect();
        let mut out = json!({
            "schema": crate::SCHEMA,
            "n": self.n,
            "poset": poset,
            "algebras": Value::Object(algebras),
            "maps": Value::Object(maps),
            "rstructure": Value::Object(rstructure),
        });
        if !self.lc_tori.is_empty() {
            out["lc_tori"] = Value::Array(
                self.lc_tori
                    .iter()
                    .map(crate::jsonutil::subgroup_to_value)
                    .collect(),
            );
        }
        out
    }
}

/// Heuristic finite-generation probe outcome for one node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FingenProbe {
    pub generator_degrees: Vec<u32>,
    pub stable: bool,
}

/// Per-node hypothesis summary.
#[derive(Clone, Debug)]
pub struct NodeHypotheses {
    pub node: String,
    pub spacelike: bool,
    pub spacelike_detail: Option<String>,
    pub h1_zero: bool,
    pub injective: bool,
    pub fingen: FingenProbe,
}

/// Consolidated hypothesis lists: the infinite-complex list needs the
/// product splitting, vanishing degree-1 cohomology and the base-change
/// condition; the finite-complex list adds injectivity, localization and
/// the finite-generation probe.
#[derive(Clone, Debug)]
pub struct HypothesesReport {
    pub degree_bound: u32,
    pub nodes: Vec<NodeHypotheses>,
    pub infinite_failures: Vec<String>,
    pub finite_failures: Vec<String>,
}

impl HypothesesReport {
    pub fn passes_infinite(&self) -> bool {
        self.infinite_failures.is_empty()
    }

    pub fn passes_finite(&self) -> bool {
        self.finite_failures.is_empty()
    }

    pub fn to_json(&self) -> Value {
        let nodes: Vec<Value> = self
            .nodes
            .iter()
            .map(|nh| {
                let mut v = json!({
                    "node": nh.node,
                    "spacelike": nh.spacelike,
                    "h1_zero": nh.h1_zero,
                    "injective": nh.injective,
                    "fingen_probe": {
                        "label": "heuristic",
                        "stable": nh.fingen.stable,
                        "generator_degrees": nh.fingen.generator_degrees,
                    },
                });
                if let Some(d) = &nh.spacelike_detail {
                    v["spacelike_detail"] = json!(d);
                }
                v
            })
            .collect();
        json!({
            "degree_bound": self.degree_bound,
            "nodes": nodes,
            "infinite_complex": {
                "passes": self.passes_infinite(),
                "failures": self.infinite_failures,
            },
            "finite_complex": {
                "passes": self.passes_finite(),
                "failures": self.finite_failures,
            },
        })
    }
}

/// Everything the system checker computes, in poset order.
#[derive(Clone, Debug)]
pub struct SystemReport {
    pub degree_bound: u32,
    pub violations: Vec<String>,
    pub hilbert: Vec<(String, Vec<usize>)>,
    pub tc: Vec<(String, ConditionVerdict)>,
    pub sc: Vec<(String, ConditionVerdict)>,
    pub lc: Vec<(String, ConditionVerdict)>,
    pub hypotheses: Option<HypothesesReport>,
}

impl SystemReport {
    pub fn valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn to_json(&self) -> Value {
        let section = |list: &[(String, ConditionVerdict)], tag: &str| -> Value {
            Value::Array(
                list.iter()
                    .map(|(k, v)| json!({tag: k, "verdict": v.to_json()}))
                    .collect(),
            )
        };
        let lc = json!({"k_restriction": LC_TORUS_NOTE, "pairs": section(&self.lc, "pair")});
        let hypotheses = match &self.hypotheses {
            Some(h) => h.to_json(),
            None => Value::Null,
        };
        json!({
            "schema": crate::SCHEMA,
            "kind": "system-check",
            "degree_bound": self.degree_bound,
            "valid": self.valid(),
            "violations": self.violations,
            "nodes": Value::Array(
                self.hilbert
                    .iter()
                    .map(|(k, h)| json!({"node": k, "hilbert": h}))
                    .collect(),
            ),
            "tc": section(&self.tc, "pair"),
            "sc": section(&self.sc, "node"),
            "lc": lc,
            "hypotheses": hypotheses,
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("valid: {}\n", self.valid()));
        for v in &self.violations {
            out.push_str(&format!("violation: {v}\n"));
        }
        for (k, h) in &self.hilbert {
            let xs: Vec<String> = h.iter().map(|d| d.to_string()).collect();
            out.push_str(&format!("node {k}: hilbert ({})\n", xs.join(",")));
        }
        for (k, v) in &self.tc {
            out.push_str(&format!("tc {k}: {}\n", v.to_text()));
        }
        for (k, v) in &self.sc {
            out.push_str(&format!("sc {k}: {}\n", v.to_text()));
        }
        for (k, v) in &self.lc {
            out.push_str(&format!("lc {k}: {}\n", v.to_text()));
        }
        if let Some(h) = &self.hypotheses {
            for nh in &h.nodes {
                out.push_str(&format!(
                    "hypotheses {}: spacelike {}; h1 zero {}; injective {}; fingen {} (heuristic)\n",
                    nh.node,
                    yes_no(nh.spacelike),
                    yes_no(nh.h1_zero),
                    yes_no(nh.injective),
                    if nh.fingen.stable { "stable" } else { "unstable" },
                ));
            }
            out.push_str(&format!(
                "infinite-complex hypotheses: {}\n",
                pass_fail(h.passes_infinite())
            ));
            out.push_str(&format!(
                "finite-complex hypotheses: {}\n",
                pass_fail(h.passes_finite())
            ));
        }
        out
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn pass_fail(b: bool) -> &'static str {
    if b {
        "pass"
    } else {
        "fail"
    }
}
