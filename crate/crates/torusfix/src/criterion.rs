//! Subspace-indexed families of graded module-algebras and the associated
//! realizability criterion: sum-closure of the subspace family, pointwise
//! algebra hypotheses, compatibility of the connecting maps on generators,
//! and a bounded annihilator search certifying that the base map becomes
//! invertible after inverting the forms outside a test subspace.
//!
//! The data is a finite list of subspaces of ℚⁿ whose first entry is the
//! full space and which contains the zero subspace, one graded
//! module-algebra presented over the polynomial ring on each subspace
//! (basis vectors sit in cohomological degree 2), and for every strict
//! nesting V_j ⊂ V_i a degree-preserving map A_i → ℚ[V_i] ⊗_{ℚ[V_j]} A_j
//! given on generators. Degreewise bases are computed as presentation
//! cokernels by exact elimination.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;
use serde_json::{json, Value};

use crate::circle::{render_combo, render_minpoly, FiniteCommAlgebra, SplitVerdict};
use crate::error::{internal, invalid, TfResult};
use crate::jsonutil::{
    as_object, poly_terms_to_value, require, value_to_poly_terms, value_to_qvec,
};
use crate::linalg::{complement_indices, express_in_span, SpanTracker, SparseMat};
use crate::poly::{monomial_basis, Expo, Poly};
use crate::scalar::{format_q, q0, q1, Q};
use crate::system::{forms_outside_span, normalize_state, ConditionVerdict, LcPolicy};

/// Element of a module-algebra: one polynomial coefficient per generator.
pub type ModElem = Vec<Poly>;

/// Total degree of a homogeneous polynomial, `None` for zero; mixed-degree
/// polynomials are rejected.
fn homog_degree(p: &Poly) -> TfResult<Option<u32>> {
    let mut degs = p.terms().keys().map(|e| e.iter().sum::<u32>());
    match degs.next() {
        None => Ok(None),
        Some(d) => {
            if degs.all(|x| x == d) {
                Ok(Some(d))
            } else {
                Err(invalid("polynomial coefficient is not homogeneous".to_string()))
            }
        }
    }
}

/// A graded algebra presented as a module over a polynomial ring: named
/// generators with degrees, homogeneous relations, multiplication structure
/// constants, and a distinguished degree-0 unit. Coefficient variables sit
/// in degree 2; a generator of degree d with a polynomial coefficient of
/// degree q contributes in degree d + 2q.
#[derive(Clone, Debug)]
pub struct ModuleAlgebra {
    vars: Vec<String>,
    gens: Vec<(String, u32)>,
    relations: Vec<ModElem>,
    rel_degrees: Vec<u32>,
    mult: BTreeMap<(usize, usize), ModElem>,
    unit: ModElem,
}

impl ModuleAlgebra {
    pub fn new(
        vars: Vec<String>,
        gens: Vec<(String, u32)>,
        relations: Vec<ModElem>,
        mult: BTreeMap<(usize, usize), ModElem>,
        unit: ModElem,
    ) -> TfResult<Self> {
        let mut seen = BTreeSet::new();
        for (name, _) in &gens {
            if name.is_empty() {
                return Err(invalid("generator names must be nonempty".to_string()));
            }
            if !seen.insert(name.clone()) {
                return Err(invalid(format!("duplicate generator name '{name}'")));
            }
        }
        let mut alg = ModuleAlgebra {
            vars,
            gens,
            relations,
            rel_degrees: Vec::new(),
            mult,
            unit,
        };
        let mut rel_degrees = Vec::new();
        for (ri, rel) in alg.relations.iter().enumerate() {
            let deg = alg
                .elem_degree(rel)
                .map_err(|e| invalid(format!("relation {ri}: {e}")))?;
            match deg {
                None => return Err(invalid(format!("relation {ri} is zero"))),
                Some(d) => rel_degrees.push(d),
            }
        }
        alg.rel_degrees = rel_degrees;
        for (&(a, b), val) in &alg.mult {
            if a >= alg.gens.len() || b >= alg.gens.len() {
                return Err(invalid("multiplication table mentions an unknown generator".to_string()));
            }
            let (da, db) = (alg.gens[a].1, alg.gens[b].1);
            let name = format!("{}·{}", alg.gens[a].0, alg.gens[b].0);
            let deg = alg
                .elem_degree(val)
                .map_err(|e| invalid(format!("product {name}: {e}")))?;
            if let Some(d) = deg {
                if d != da + db {
                    return Err(invalid(format!(
                        "product {name} has degree {d}, expected {}",
                        da + db
                    )));
                }
            }
            if a == b && da % 2 == 1 && deg.is_some() {
                return Err(invalid(format!(
                    "odd-degree generator '{}' must square to zero",
                    alg.gens[a].0
                )));
            }
            if a != b {
                if let Some(flip) = alg.mult.get(&(b, a)) {
                    let sign = if da % 2 == 1 && db % 2 == 1 { -q1() } else { q1() };
                    let expect: ModElem = val.iter().map(|p| p.scale(&sign)).collect();
                    if !elems_equal(flip, &expect) {
                        return Err(invalid(format!(
                            "multiplication table is not graded-commutative at {name}"
                        )));
                    }
                }
            }
        }
        if alg.unit.len() != alg.gens.len() {
            return Err(invalid("unit has the wrong number of components".to_string()));
        }
        let udeg = alg
            .elem_degree(&alg.unit)
            .map_err(|e| invalid(format!("unit: {e}")))?;
        if udeg.map_or(false, |d| d != 0) {
            return Err(invalid("unit must live in degree 0".to_string()));
        }
        Ok(alg)
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn gens(&self) -> &[(String, u32)] {
        &self.gens
    }

    pub fn unit(&self) -> &ModElem {
        &self.unit
    }

    fn gen_index(&self, name: &str) -> TfResult<usize> {
        self.gens
            .iter()
            .position(|(g, _)| g == name)
            .ok_or_else(|| invalid(format!("unknown generator '{name}'")))
    }

    pub fn zero_elem(&self) -> ModElem {
        vec![Poly::zero(self.nvars()); self.gens.len()]
    }

    /// Common degree of a homogeneous element, `None` for zero. Components
    /// must have consistent parity-correct degrees.
    fn elem_degree(&self, elem: &ModElem) -> TfResult<Option<u32>> {
        if elem.len() != self.gens.len() {
            return Err(invalid(format!(
                "element has {} components, expected {}",
                elem.len(),
                self.gens.len()
            )));
        }
        let mut total: Option<u32> = None;
        for (r, p) in elem.iter().enumerate() {
            if let Some(q) = homog_degree(p)? {
                let d = self.gens[r].1 + 2 * q;
                match total {
                    None => total = Some(d),
                    Some(t) if t == d => {}
                    Some(t) => {
                        return Err(invalid(format!(
                            "element mixes degrees {t} and {d}"
                        )))
                    }
                }
            }
        }
        Ok(total)
    }

    /// Shape and homogeneity check against an expected degree.
    fn check_degree(&self, k: u32, elem: &ModElem) -> TfResult<()> {
        match self.elem_degree(elem)? {
            None => Ok(()),
            Some(d) if d == k => Ok(()),
            Some(d) => Err(invalid(format!(
                "element has degree {d}, expected {k}"
            ))),
        }
    }

    /// Module action of a polynomial coefficient.
    pub fn scale_elem(&self, p: &Poly, elem: &ModElem) -> ModElem {
        elem.iter().map(|c| c.mul(p)).collect()
    }

    /// Product via the structure constants; absent table entries denote a
    /// zero product (the transposed entry is consulted with the graded
    /// commutativity sign first).
    pub fn product(&self, x: &ModElem, y: &ModElem) -> ModElem {
        let mut out = self.zero_elem();
        for (r, p) in x.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            for (s, q) in y.iter().enumerate() {
                if q.is_zero() {
                    continue;
                }
                let (table, sign) = match self.mult.get(&(r, s)) {
                    Some(t) => (Some(t), q1()),
                    None => {
                        let sign = if self.gens[r].1 % 2 == 1 && self.gens[s].1 % 2 == 1 {
                            -q1()
                        } else {
                            q1()
                        };
                        (self.mult.get(&(s, r)), sign)
                    }
                };
                let Some(table) = table else { continue };
                let coeff = p.mul(q).scale(&sign);
                for (t, w) in table.iter().enumerate() {
                    if !w.is_zero() {
                        out[t] = out[t].add(&coeff.mul(w));
                    }
                }
            }
        }
        out
    }

    /// Human-readable rendering, e.g. `x^2·one + 2·a`.
    pub fn render_elem(&self, elem: &ModElem) -> String {
        let mut parts = Vec::new();
        for (r, p) in elem.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            let ps = p.render(&self.vars);
            let name = &self.gens[r].0;
            if ps == "1" {
                parts.push(name.clone());
            } else if p.terms().len() == 1 && !ps.contains(" - ") {
                parts.push(format!("{ps}·{name}"));
            } else {
                parts.push(format!("({ps})·{name}"));
            }
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }
}

fn elems_equal(a: &ModElem, b: &ModElem) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(p, q)| p.sub(q).is_zero())
}

/// Degreewise bases of a module-algebra, computed as presentation
/// cokernels by elimination: in each degree the free slots are
/// (generator, monomial) pairs and the relation multiples are eliminated.
pub struct ModuleCalc {
    alg: ModuleAlgebra,
    layers: BTreeMap<u32, Layer>,
}

struct Layer {
    slots: Vec<(usize, Expo)>,
    index: BTreeMap<(usize, Expo), usize>,
    rel: SpanTracker,
    basis_cols: Vec<usize>,
}

impl ModuleCalc {
    pub fn new(alg: &ModuleAlgebra) -> Self {
        ModuleCalc {
            alg: alg.clone(),
            layers: BTreeMap::new(),
        }
    }

    pub fn algebra(&self) -> &ModuleAlgebra {
        &self.alg
    }

    fn layer(&mut self, k: u32) -> &Layer {
        if !self.layers.contains_key(&k) {
            let nv = self.alg.nvars();
            let mut slots = Vec::new();
            for (r, (_, d)) in self.alg.gens.iter().enumerate() {
                if k >= *d && (k - *d) % 2 == 0 {
                    for e in monomial_basis(nv, (k - *d) / 2) {
                        slots.push((r, e));
                    }
                }
            }
            let index: BTreeMap<(usize, Expo), usize> = slots
                .iter()
                .cloned()
                .enumerate()
                .map(|(i, s)| (s, i))
                .collect();
            let mut rel = SpanTracker::new(slots.len());
            for (ri, relation) in self.alg.relations.iter().enumerate() {
                let e_rel = self.alg.rel_degrees[ri];
                if k < e_rel || (k - e_rel) % 2 != 0 {
                    continue;
                }
                for m in monomial_basis(nv, (k - e_rel) / 2) {
                    let mut mono = Poly::zero(nv);
                    mono.add_term(&m, &q1());
                    let mut row = vec![q0(); slots.len()];
                    for (r, p) in relation.iter().enumerate() {
                        for (e, c) in mono.mul(p).terms() {
                            row[index[&(r, e.clone())]] += c;
                        }
                    }
                    rel.insert(&row);
                }
            }
            let pivots: BTreeSet<usize> = rel.pivot_columns().into_iter().collect();
            let basis_cols = (0..slots.len()).filter(|i| !pivots.contains(i)).collect();
            self.layers.insert(
                k,
                Layer {
                    slots,
                    index,
                    rel,
                    basis_cols,
                },
            );
        }
        &self.layers[&k]
    }

    pub fn dim(&mut self, k: u32) -> usize {
        self.layer(k).basis_cols.len()
    }

    /// Coordinates of a homogeneous element with respect to the degree-k
    /// quotient basis.
    pub fn coords(&mut self, k: u32, elem: &ModElem) -> TfResult<Vec<Q>> {
        self.alg.check_degree(k, elem)?;
        let layer = self.layer(k);
        let mut dense = vec![q0(); layer.slots.len()];
        for (r, p) in elem.iter().enumerate() {
            for (e, c) in p.terms() {
                let idx = layer
                    .index
                    .get(&(r, e.clone()))
                    .ok_or_else(|| internal("monomial slot missing".to_string()))?;
                dense[*idx] += c;
            }
        }
        let red = layer.rel.reduce(&dense);
        Ok(layer.basis_cols.iter().map(|&i| red[i].clone()).collect())
    }

    /// Representative element for quotient coordinates.
    pub fn rep(&mut self, k: u32, coords: &[Q]) -> ModElem {
        let ngens = self.alg.gens.len();
        let nv = self.alg.nvars();
        let layer = self.layer(k);
        let mut out = vec![Poly::zero(nv); ngens];
        for (c, &slot) in coords.iter().zip(&layer.basis_cols) {
            let (r, ref e) = layer.slots[slot];
            out[r].add_term(e, c);
        }
        out
    }
}

/// A degree-preserving map between module-algebras, given by the images of
/// the source generators; the images live over the source's coefficient
/// ring (the target module is base-changed to it).
#[derive(Clone, Debug)]
pub struct PolyMap {
    images: Vec<ModElem>,
    target_comps: usize,
    nvars: usize,
}

impl PolyMap {
    pub fn new(images: Vec<ModElem>, target_comps: usize, nvars: usize) -> Self {
        PolyMap {
            images,
            target_comps,
            nvars,
        }
    }

    pub fn images(&self) -> &[ModElem] {
        &self.images
    }

    /// Extend the generator images linearly over the coefficient ring.
    pub fn apply(&self, elem: &ModElem) -> ModElem {
        let mut out = vec![Poly::zero(self.nvars); self.target_comps];
        for (r, p) in elem.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            for (s, q) in self.images[r].iter().enumerate() {
                if !q.is_zero() {
                    out[s] = out[s].add(&p.mul(q));
                }
            }
        }
        out
    }
}

/// Substitute each variable of `p` by the corresponding linear form over a
/// target ring with `target_nv` variables.
fn subst_poly(p: &Poly, forms: &[Poly], target_nv: usize) -> Poly {
    let mut out = Poly::zero(target_nv);
    for (e, c) in p.terms() {
        let mut term = Poly::constant(target_nv, c.clone());
        for (v, &k) in e.iter().enumerate() {
            if k > 0 {
                term = term.mul(&forms[v].pow(k));
            }
        }
        out = out.add(&term);
    }
    out
}

/// Base-change a module-algebra along a coefficient-ring map sending each
/// variable to a linear form in the new variables.
fn base_change(alg: &ModuleAlgebra, forms: &[Poly], vars: &[String]) -> TfResult<ModuleAlgebra> {
    let nv = vars.len();
    let sub = |e: &ModElem| -> ModElem { e.iter().map(|p| subst_poly(p, forms, nv)).collect() };
    ModuleAlgebra::new(
        vars.to_vec(),
        alg.gens.clone(),
        alg.relations.iter().map(&sub).collect(),
        alg.mult.iter().map(|(k, v)| (*k, sub(v))).collect(),
        sub(&alg.unit),
    )
}

/// The full input to the criterion checker: subspaces of ℚⁿ, one
/// module-algebra per subspace, connecting maps for every strict nesting,
/// and the test subspaces for the localization search.
#[derive(Debug)]
pub struct CriterionData {
    n: usize,
    subspaces: Vec<Vec<Vec<Q>>>,
    algebras: Vec<ModuleAlgebra>,
    maps: BTreeMap<(usize, usize), PolyMap>,
    test_subspaces: Vec<Vec<Vec<Q>>>,
}

fn span_of(rows: &[Vec<Q>], n: usize) -> SpanTracker {
    let mut tr = SpanTracker::new(n);
    for r in rows {
        tr.insert(r);
    }
    tr
}

fn span_contains(big: &SpanTracker, rows: &[Vec<Q>]) -> bool {
    rows.iter().all(|r| big.contains(r))
}

fn subspace_label(rows: &[Vec<Q>]) -> String {
    if rows.is_empty() {
        return "0".to_string();
    }
    let body: Vec<String> = rows
        .iter()
        .map(|r| {
            let entries: Vec<String> = r.iter().map(format_q).collect();
            format!("[{}]", entries.join(","))
        })
        .collect();
    format!("[{}]", body.join(","))
}

impl CriterionData {
    pub fn new(
        n: usize,
        subspaces: Vec<Vec<Vec<Q>>>,
        algebras: Vec<ModuleAlgebra>,
        maps: BTreeMap<(usize, usize), PolyMap>,
        test_subspaces: Vec<Vec<Vec<Q>>>,
    ) -> TfResult<Self> {
        if subspaces.is_empty() {
            return Err(invalid("the subspace list is empty".to_string()));
        }
        if algebras.len() != subspaces.len() {
            return Err(invalid(format!(
                "{} algebras for {} subspaces",
                algebras.len(),
                subspaces.len()
            )));
        }
        let mut spans = Vec::new();
        for (i, rows) in subspaces.iter().enumerate() {
            for r in rows {
                if r.len() != n {
                    return Err(invalid(format!(
                        "subspace {i}: basis row has {} entries, expected {n}",
                        r.len()
                    )));
                }
            }
            let tr = span_of(rows, n.max(1));
            if tr.rank() != rows.len() {
                return Err(invalid(format!(
                    "subspace {i}: basis rows are dependent"
                )));
            }
            spans.push(tr);
        }
        if spans[0].rank() != n {
            return Err(invalid(
                "the first subspace must be the full space".to_string(),
            ));
        }
        if !subspaces.iter().any(|rows| rows.is_empty()) {
            return Err(invalid(
                "the subspace list must contain the zero subspace".to_string(),
            ));
        }
        for i in 0..subspaces.len() {
            for j in 0..subspaces.len() {
                if i == j {
                    continue;
                }
                if span_contains(&spans[i], &subspaces[j])
                    && span_contains(&spans[j], &subspaces[i])
                {
                    return Err(invalid(format!("subspaces {i} and {j} coincide")));
                }
            }
        }
        for (i, alg) in algebras.iter().enumerate() {
            if alg.nvars() != subspaces[i].len() {
                return Err(invalid(format!(
                    "algebra {i} has {} coefficient variables for a {}-dimensional subspace",
                    alg.nvars(),
                    subspaces[i].len()
                )));
            }
        }
        for i in 0..subspaces.len() {
            for j in 0..subspaces.len() {
                if i == j {
                    continue;
                }
                let nested = subspaces[j].len() < subspaces[i].len()
                    && span_contains(&spans[i], &subspaces[j]);
                if nested && !maps.contains_key(&(i, j)) {
                    return Err(invalid(format!(
                        "missing map {i}->{j} for nested subspaces"
                    )));
                }
                if !nested && maps.contains_key(&(i, j)) {
                    return Err(invalid(format!(
                        "map {i}->{j} does not correspond to strictly nested subspaces"
                    )));
                }
            }
        }
        for (&(i, j), fmap) in &maps {
            if fmap.images.len() != algebras[i].gens.len() {
                return Err(invalid(format!(
                    "map {i}->{j}: expected one image per source generator"
                )));
            }
            for (r, img) in fmap.images.iter().enumerate() {
                if img.len() != algebras[j].gens.len() {
                    return Err(invalid(format!(
                        "map {i}->{j}: image of '{}' has the wrong number of components",
                        algebras[i].gens[r].0
                    )));
                }
                let dr = algebras[i].gens[r].1;
                for (s, p) in img.iter().enumerate() {
                    if let Some(q) = homog_degree(p).map_err(|_| {
                        invalid(format!(
                            "map {i}->{j}: image of '{}' has a non-homogeneous coefficient",
                            algebras[i].gens[r].0
                        ))
                    })? {
                        if 2 * q + algebras[j].gens[s].1 != dr {
                            return Err(invalid(format!(
                                "map {i}->{j}: image of '{}' is not homogeneous of degree {dr}",
                                algebras[i].gens[r].0
                            )));
                        }
                    }
                }
            }
        }
        for rows in &test_subspaces {
            for r in rows {
                if r.len() != n {
                    return Err(invalid(format!(
                        "test subspace row has {} entries, expected {n}",
                        r.len()
                    )));
                }
            }
        }
        Ok(CriterionData {
            n,
            subspaces,
            algebras,
            maps,
            test_subspaces,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn algebras(&self) -> &[ModuleAlgebra] {
        &self.algebras
    }

    /// The inclusion V_j ⊆ V_i as linear forms: the image of each basis
    /// vector of V_j written in the coefficient variables of algebra i.
    fn inclusion_forms(&self, i: usize, j: usize) -> TfResult<Vec<Poly>> {
        let nv = self.subspaces[i].len();
        self.subspaces[j]
            .iter()
            .map(|row| {
                let coords = express_in_span(&self.subspaces[i], row).ok_or_else(|| {
                    internal("nested subspace left its ambient span".to_string())
                })?;
                debug_assert_eq!(coords.len(), nv);
                Ok(Poly::linear(&coords))
            })
            .collect()
    }

    fn base_changed(&self, i: usize, j: usize) -> TfResult<ModuleAlgebra> {
        let forms = self.inclusion_forms(i, j)?;
        base_change(&self.algebras[j], &forms, self.algebras[i].vars())
    }

    /// Run the three condition groups up to the degree bound.
    pub fn check(&self, dmax: u32, policy: &LcPolicy) -> TfResult<CriterionReport> {
        let spans: Vec<SpanTracker> = self
            .subspaces
            .iter()
            .map(|rows| span_of(rows, self.n.max(1)))
            .collect();
        let mut sum_closure = Vec::new();
        for i in 0..self.subspaces.len() {
            for j in i + 1..self.subspaces.len() {
                let mut sum = spans[i].clone();
                for r in &self.subspaces[j] {
                    sum.insert(r);
                }
                let hit = (0..self.subspaces.len()).any(|l| {
                    spans[l].rank() == sum.rank() && span_contains(&sum, &self.subspaces[l])
                });
                if !hit {
                    sum_closure.push(format!(
                        "subspaces {i} and {j}: sum is missing from the list"
                    ));
                }
            }
        }

        let mut algebra_checks = Vec::new();
        for alg in &self.algebras {
            let mut calc = ModuleCalc::new(alg);
            let (spacelike, detail) = degree_zero_split(&mut calc)?;
            let degree_one_zero = calc.dim(1) == 0;
            let action_injective = action_injectivity(&mut calc)?;
            algebra_checks.push(AlgebraCheck {
                spacelike,
                detail,
                degree_one_zero,
                action_injective,
            });
        }

        let mut cocycle = Vec::new();
        for (&(i, j), f_ij) in &self.maps {
            for (&(j2, l), f_jl) in &self.maps {
                if j2 != j {
                    continue;
                }
                let f_il = self
                    .maps
                    .get(&(i, l))
                    .ok_or_else(|| internal("missing composite map".to_string()))?;
                let forms_ji = self.inclusion_forms(i, j)?;
                let nv_i = self.algebras[i].nvars();
                let balg = self.base_changed(i, l)?;
                let mut bcalc = ModuleCalc::new(&balg);
                for (r, (gname, dr)) in self.algebras[i].gens.iter().enumerate() {
                    let mut composite = vec![Poly::zero(nv_i); self.algebras[l].gens.len()];
                    for (s, q) in f_ij.images[r].iter().enumerate() {
                        if q.is_zero() {
                            continue;
                        }
                        for (t, w) in f_jl.images[s].iter().enumerate() {
                            if !w.is_zero() {
                                composite[t] =
                                    composite[t].add(&q.mul(&subst_poly(w, &forms_ji, nv_i)));
                            }
                        }
                    }
                    let diff: ModElem = composite
                        .iter()
                        .zip(&f_il.images[r])
                        .map(|(a, b)| a.sub(b))
                        .collect();
                    let coords = bcalc.coords(*dr, &diff)?;
                    if coords.iter().any(|c| !c.is_zero()) {
                        cocycle.push(format!(
                            "maps {i}->{j}->{l}: image of '{gname}' disagrees with the direct map"
                        ));
                    }
                }
            }
        }

        let mut localization = Vec::new();
        for w_rows in &self.test_subspaces {
            let label = subspace_label(w_rows);
            let w_span = span_of(w_rows, self.n.max(1));
            let mut best: Option<usize> = None;
            for (j, rows) in self.subspaces.iter().enumerate() {
                if span_contains(&w_span, rows) {
                    let better = match best {
                        None => true,
                        Some(b) => rows.len() > self.subspaces[b].len(),
                    };
                    if better {
                        best = Some(j);
                    }
                }
            }
            let j = best.ok_or_else(|| {
                internal("no subspace inside the test subspace".to_string())
            })?;
            if j == 0 {
                localization.push((label, ConditionVerdict::VerifiedUpTo(dmax)));
                continue;
            }
            let fmap = self
                .maps
                .get(&(0, j))
                .ok_or_else(|| internal("missing base map".to_string()))?;
            let verdict = self.localize_verdict(fmap, j, w_rows, dmax, policy)?;
            localization.push((label, verdict));
        }

        Ok(CriterionReport {
            degree_bound: dmax,
            sum_closure,
            algebras: algebra_checks,
            cocycle,
            localization,
        })
    }

    /// Bounded annihilator search on the kernel and cokernel of the base
    /// map against products of forms outside the test subspace.
    fn localize_verdict(
        &self,
        fmap: &PolyMap,
        j: usize,
        w_rows: &[Vec<Q>],
        dmax: u32,
        policy: &LcPolicy,
    ) -> TfResult<ConditionVerdict> {
        let bound = policy.power_bound.unwrap_or(2 * dmax).max(1);
        let balg = self.base_changed(0, j)?;
        let mut calc_a = ModuleCalc::new(&self.algebras[0]);
        let mut calc_b = ModuleCalc::new(&balg);
        let cands: Vec<Poly> = forms_outside_span(&self.subspaces[0], w_rows, self.n, policy.seed)
            .iter()
            .map(|v| {
                let coords = express_in_span(&self.subspaces[0], v)
                    .ok_or_else(|| internal("candidate form left the ambient span".to_string()))?;
                Ok(Poly::linear(&coords))
            })
            .collect::<TfResult<_>>()?;
        let mut im_cache: BTreeMap<u32, SpanTracker> = BTreeMap::new();
        let mut survivors = Vec::new();
        for k in 0..=dmax {
            let cols = map_cols(&mut calc_a, &mut calc_b, fmap, k)?;
            let ha = cols.len();
            let hb = calc_b.dim(k);
            // kernel side: source classes dying in the target
            let mut m = SparseMat::new(ha);
            for r in 0..hb {
                let mut row = vec![q0(); ha];
                for (t, c) in cols.iter().enumerate() {
                    row[t] = c[r].clone();
                }
                m.push_dense_row(&row);
            }
            for kv in m.kernel_basis() {
                if !kernel_dies(&mut calc_a, &cands, k, &kv, bound)? {
                    let elem = calc_a.rep(k, &kv);
                    survivors.push(calc_a.algebra().render_elem(&elem));
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
                if !coker_dies(
                    &mut calc_a,
                    &mut calc_b,
                    fmap,
                    &cands,
                    k,
                    &eye[r],
                    bound,
                    &mut im_cache,
                )? {
                    let elem = calc_b.rep(k, &eye[r]);
                    survivors.push(calc_b.algebra().render_elem(&elem));
                }
            }
        }
        if survivors.is_empty() {
            Ok(ConditionVerdict::VerifiedUpTo(dmax))
        } else {
            Ok(ConditionVerdict::Inconclusive { survivors })
        }
    }

    pub fn from_json(v: &Value) -> TfResult<CriterionData> {
        let obj = as_object(v)?;
        if let Some(schema) = obj.get("schema") {
            if schema.as_str() != Some(crate::SCHEMA) {
                return Err(invalid(format!("unsupported schema {schema}")));
            }
        }
        let n = require(obj, "n")?
            .as_u64()
            .ok_or_else(|| invalid("\"n\" must be a nonnegative integer".to_string()))?
            as usize;
        let subspaces = parse_subspace_list(require(obj, "subspaces")?)?;
        let algebras_v = require(obj, "algebras")?
            .as_array()
            .ok_or_else(|| invalid("\"algebras\" must be an array".to_string()))?;
        let algebras: Vec<ModuleAlgebra> = algebras_v
            .iter()
            .enumerate()
            .map(|(i, av)| {
                algebra_from_json(av).map_err(|e| invalid(format!("algebra {i}: {e}")))
            })
            .collect::<TfResult<_>>()?;
        let mut maps = BTreeMap::new();
        if let Some(maps_v) = obj.get("maps") {
            let mobj = maps_v
                .as_object()
                .ok_or_else(|| invalid("\"maps\" must be an object".to_string()))?;
            for (key, mv) in mobj {
                let (si, sj) = key
                    .split_once("->")
                    .ok_or_else(|| invalid(format!("malformed map key '{key}'")))?;
                let i: usize = si
                    .trim()
                    .parse()
                    .map_err(|_| invalid(format!("malformed map key '{key}'")))?;
                let j: usize = sj
                    .trim()
                    .parse()
                    .map_err(|_| invalid(format!("malformed map key '{key}'")))?;
                if i >= algebras.len() || j >= algebras.len() {
                    return Err(invalid(format!("map key '{key}' is out of range")));
                }
                let fmap = map_from_json(mv, &algebras[i], &algebras[j])
                    .map_err(|e| invalid(format!("map {key}: {e}")))?;
                maps.insert((i, j), fmap);
            }
        }
        let test_subspaces = match obj.get("test_subspaces") {
            Some(tv) => parse_subspace_list(tv)?,
            None => Vec::new(),
        };
        CriterionData::new(n, subspaces, algebras, maps, test_subspaces)
    }

    pub fn to_json(&self) -> Value {
        let subspaces: Vec<Value> = self.subspaces.iter().map(|r| rows_to_value(r)).collect();
        let algebras: Vec<Value> = self.algebras.iter().map(algebra_to_json).collect();
        let mut maps = serde_json::Map::new();
        for (&(i, j), fmap) in &self.maps {
            maps.insert(
                format!("{i}->{j}"),
                map_to_json(fmap, &self.algebras[i], &self.algebras[j]),
            );
        }
        json!({
            "schema": crate::SCHEMA,
            "n": self.n,
            "subspaces": subspaces,
            "algebras": algebras,
            "maps": Value::Object(maps),
            "test_subspaces": self.test_subspaces.iter().map(|r| rows_to_value(r)).collect::<Vec<Value>>(),
        })
    }
}

/// Columns of the base map in one degree: images of the source basis in
/// target coordinates.
fn map_cols(
    calc_a: &mut ModuleCalc,
    calc_b: &mut ModuleCalc,
    fmap: &PolyMap,
    k: u32,
) -> TfResult<Vec<Vec<Q>>> {
    let da = calc_a.dim(k);
    let mut cols = Vec::with_capacity(da);
    for t in 0..da {
        let mut unit = vec![q0(); da];
        unit[t] = q1();
        let rep = calc_a.rep(k, &unit);
        cols.push(calc_b.coords(k, &fmap.apply(&rep))?);
    }
    Ok(cols)
}

/// Breadth-first search for a product of candidate forms annihilating a
/// kernel class of the source module.
fn kernel_dies(
    calc: &mut ModuleCalc,
    cands: &[Poly],
    k: u32,
    coords: &[Q],
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
            let elem = calc.rep(*deg, state);
            for f in cands {
                let prod = calc.algebra().scale_elem(f, &elem);
                let red = calc.coords(deg + 2, &prod)?;
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

fn image_residue(
    calc_a: &mut ModuleCalc,
    calc_b: &mut ModuleCalc,
    fmap: &PolyMap,
    im_cache: &mut BTreeMap<u32, SpanTracker>,
    deg: u32,
    v: &[Q],
) -> TfResult<Vec<Q>> {
    if !im_cache.contains_key(&deg) {
        let cols = map_cols(calc_a, calc_b, fmap, deg)?;
        let mut tr = SpanTracker::new(calc_b.dim(deg));
        for c in &cols {
            tr.insert(c);
        }
        im_cache.insert(deg, tr);
    }
    Ok(im_cache[&deg].reduce(v))
}

/// Breadth-first search for a product of candidate forms pushing a target
/// class into the image of the base map.
#[allow(clippy::too_many_arguments)]
fn coker_dies(
    calc_a: &mut ModuleCalc,
    calc_b: &mut ModuleCalc,
    fmap: &PolyMap,
    cands: &[Poly],
    k: u32,
    coords: &[Q],
    bound: u32,
    im_cache: &mut BTreeMap<u32, SpanTracker>,
) -> TfResult<bool> {
    let start = image_residue(calc_a, calc_b, fmap, im_cache, k, coords)?;
    if start.iter().all(|c| c.is_zero()) {
        return Ok(true);
    }
    let mut seen: BTreeSet<(u32, Vec<Q>)> = BTreeSet::new();
    let mut frontier = vec![(k, normalize_state(&start))];
    for _ in 0..bound {
        let mut next: Vec<(u32, Vec<Q>)> = Vec::new();
        for (deg, state) in frontier.clone() {
            let elem = calc_b.rep(deg, &state);
            for f in cands {
                let prod = calc_b.algebra().scale_elem(f, &elem);
                let red = calc_b.coords(deg + 2, &prod)?;
                let res = image_residue(calc_a, calc_b, fmap, im_cache, deg + 2, &red)?;
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

/// Split-semisimplicity of the degree-0 part as a finite commutative
/// algebra.
fn degree_zero_split(calc: &mut ModuleCalc) -> TfResult<(bool, Option<String>)> {
    let dim = calc.dim(0);
    if dim == 0 {
        return Ok((true, None));
    }
    let mut mult = vec![vec![vec![q0(); dim]; dim]; dim];
    for s in 0..dim {
        for t in 0..dim {
            let mut es = vec![q0(); dim];
            es[s] = q1();
            let mut et = vec![q0(); dim];
            et[t] = q1();
            let a = calc.rep(0, &es);
            let b = calc.rep(0, &et);
            let prod = calc.algebra().product(&a, &b);
            mult[s][t] = calc.coords(0, &prod)?;
        }
    }
    let unit_elem = calc.algebra().unit().clone();
    let unit = calc.coords(0, &unit_elem)?;
    let names: Vec<String> = (0..dim).map(|t| format!("h{t}")).collect();
    let alg = FiniteCommAlgebra::new(names, mult, unit)?;
    match alg.split_semisimple_test()? {
        SplitVerdict::Split { .. } => Ok((true, None)),
        SplitVerdict::Nilpotents { witness } => Ok((
            false,
            Some(format!(
                "degree-0 part has a nilpotent element {}",
                render_combo(&witness, alg.names())
            )),
        )),
        SplitVerdict::FieldExtension { minpoly } => Ok((
            false,
            Some(format!(
                "degree-0 part contains a field extension with minimal polynomial {}",
                render_minpoly(&minpoly)
            )),
        )),
    }
}

/// Does multiplication by the coefficient variables pair the degree-0
/// basis injectively into degree 2?
fn action_injectivity(calc: &mut ModuleCalc) -> TfResult<bool> {
    let nv = calc.algebra().nvars();
    let d0 = calc.dim(0);
    if nv == 0 || d0 == 0 {
        return Ok(true);
    }
    let d2 = calc.dim(2);
    let mut m = SparseMat::new(d2);
    let mut count = 0usize;
    for v in 0..nv {
        let var = Poly::var(nv, v);
        for t in 0..d0 {
            let mut e = vec![q0(); d0];
            e[t] = q1();
            let rep = calc.rep(0, &e);
            let prod = calc.algebra().scale_elem(&var, &rep);
            m.push_dense_row(&calc.coords(2, &prod)?);
            count += 1;
        }
    }
    Ok(m.rank() == count)
}

/// Pointwise verdict for one algebra in the family.
#[derive(Clone, Debug)]
pub struct AlgebraCheck {
    pub spacelike: bool,
    pub detail: Option<String>,
    pub degree_one_zero: bool,
    pub action_injective: bool,
}

impl AlgebraCheck {
    pub fn passes(&self) -> bool {
        self.spacelike && self.degree_one_zero && self.action_injective
    }
}

/// Consolidated criterion report: the three condition groups with named
/// failures and per-test-subspace localization verdicts.
pub struct CriterionReport {
    pub degree_bound: u32,
    pub sum_closure: Vec<String>,
    pub algebras: Vec<AlgebraCheck>,
    pub cocycle: Vec<String>,
    pub localization: Vec<(String, ConditionVerdict)>,
}

impl CriterionReport {
    /// Overall verdict: named failures dominate; otherwise an unresolved
    /// localization search leaves the report inconclusive.
    pub fn verdict(&self) -> &'static str {
        if !self.sum_closure.is_empty()
            || !self.cocycle.is_empty()
            || self.algebras.iter().any(|a| !a.passes())
        {
            "fails"
        } else if self.localization.iter().any(|(_, v)| !v.is_verified()) {
            "inconclusive"
        } else {
            "verified"
        }
    }

    pub fn to_json(&self) -> Value {
        let algebras: Vec<Value> = self
            .algebras
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let mut obj = serde_json::Map::new();
                obj.insert("index".to_string(), json!(i));
                obj.insert("spacelike".to_string(), json!(a.spacelike));
                obj.insert("degree_one_zero".to_string(), json!(a.degree_one_zero));
                obj.insert("action_injective".to_string(), json!(a.action_injective));
                obj.insert(
                    "finitely_generated".to_string(),
                    json!({"label": "structural", "value": true}),
                );
                if let Some(d) = &a.detail {
                    obj.insert("detail".to_string(), json!(d));
                }
                Value::Object(obj)
            })
            .collect();
        let sum_closure = if self.sum_closure.is_empty() {
            json!({"status": "verified"})
        } else {
            json!({"status": "fails", "failures": self.sum_closure})
        };
        let cocycle = if self.cocycle.is_empty() {
            json!({"status": "verified"})
        } else {
            json!({"status": "fails", "failures": self.cocycle})
        };
        let localization: Vec<Value> = self
            .localization
            .iter()
            .map(|(w, v)| json!({"subspace": w, "verdict": v.to_json()}))
            .collect();
        json!({
            "schema": crate::SCHEMA,
            "kind": "criterion-check",
            "degree_bound": self.degree_bound,
            "sum_closure": sum_closure,
            "algebras": algebras,
            "cocycle": cocycle,
            "localization": localization,
            "verdict": self.verdict(),
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = Vec::new();
        out.push(format!("degree bound: {}", self.degree_bound));
        if self.sum_closure.is_empty() {
            out.push("sum closure: verified".to_string());
        } else {
            for f in &self.sum_closure {
                out.push(format!("sum closure failure: {f}"));
            }
        }
        for (i, a) in self.algebras.iter().enumerate() {
            out.push(format!(
                "algebra {i}: spacelike {}, degree-one vanishing {}, action injective {}, finite generation structural",
                yes_no(a.spacelike),
                yes_no(a.degree_one_zero),
                yes_no(a.action_injective),
            ));
            if let Some(d) = &a.detail {
                out.push(format!("algebra {i}: {d}"));
            }
        }
        if self.cocycle.is_empty() {
            out.push("map compatibility: verified".to_string());
        } else {
            for f in &self.cocycle {
                out.push(format!("map compatibility failure: {f}"));
            }
        }
        for (w, v) in &self.localization {
            out.push(format!("localization at {w}: {}", v.to_text()));
        }
        out.push(format!("verdict: {}", self.verdict()));
        out.join("\n")
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

// ---------------------------------------------------------------------
// JSON helpers
// ---------------------------------------------------------------------

fn parse_subspace_list(v: &Value) -> TfResult<Vec<Vec<Vec<Q>>>> {
    let arr = v
        .as_array()
        .ok_or_else(|| invalid("expected an array of subspaces".to_string()))?;
    arr.iter()
        .map(|sv| {
            let rows = sv
                .as_array()
                .ok_or_else(|| invalid("each subspace must be an array of rows".to_string()))?;
            rows.iter().map(value_to_qvec).collect()
        })
        .collect()
}

fn rows_to_value(rows: &[Vec<Q>]) -> Value {
    Value::Array(
        rows.iter()
            .map(|r| {
                Value::Array(
                    r.iter()
                        .map(|c| Value::String(format_q(c)))
                        .collect(),
                )
            })
            .collect(),
    )
}

fn elem_from_json(v: &Value, alg: &ModuleAlgebra) -> TfResult<ModElem> {
    let obj = v
        .as_object()
        .ok_or_else(|| invalid(format!("expected an element object, found {v}")))?;
    let mut out = alg.zero_elem();
    for (name, pv) in obj {
        let r = alg.gen_index(name)?;
        let terms = value_to_poly_terms(pv, alg.nvars())?;
        out[r] = Poly::from_terms(alg.nvars(), terms)?;
    }
    Ok(out)
}

fn elem_to_json(elem: &ModElem, alg: &ModuleAlgebra) -> Value {
    let mut obj = serde_json::Map::new();
    for (r, p) in elem.iter().enumerate() {
        if !p.is_zero() {
            obj.insert(alg.gens[r].0.clone(), poly_terms_to_value(p.terms().iter()));
        }
    }
    Value::Object(obj)
}

fn algebra_from_json(v: &Value) -> TfResult<ModuleAlgebra> {
    let obj = as_object(v)?;
    let vars: Vec<String> = match obj.get("vars") {
        Some(vv) => vv
            .as_array()
            .ok_or_else(|| invalid("\"vars\" must be an array of names".to_string()))?
            .iter()
            .map(|x| {
                x.as_str()
                    .map(str::to_string)
                    .ok_or_else(|| invalid("variable names must be strings".to_string()))
            })
            .collect::<TfResult<_>>()?,
        None => Vec::new(),
    };
    let gens_v = require(obj, "gens")?
        .as_array()
        .ok_or_else(|| invalid("\"gens\" must be an array".to_string()))?;
    let mut gens = Vec::new();
    for gv in gens_v {
        let gobj = gv
            .as_object()
            .ok_or_else(|| invalid("each generator must be an object".to_string()))?;
        let name = require(gobj, "name")?
            .as_str()
            .ok_or_else(|| invalid("generator \"name\" must be a string".to_string()))?
            .to_string();
        let degree = require(gobj, "degree")?
            .as_u64()
            .ok_or_else(|| invalid("generator \"degree\" must be a nonnegative integer".to_string()))?
            as u32;
        gens.push((name, degree));
    }
    let shell = ModuleAlgebra {
        vars: vars.clone(),
        gens: gens.clone(),
        relations: Vec::new(),
        rel_degrees: Vec::new(),
        mult: BTreeMap::new(),
        unit: vec![Poly::zero(vars.len()); gens.len()],
    };
    let relations: Vec<ModElem> = match obj.get("relations") {
        Some(rv) => rv
            .as_array()
            .ok_or_else(|| invalid("\"relations\" must be an array".to_string()))?
            .iter()
            .map(|ev| elem_from_json(ev, &shell))
            .collect::<TfResult<_>>()?,
        None => Vec::new(),
    };
    let mut mult = BTreeMap::new();
    if let Some(mv) = obj.get("mult") {
        let mobj = mv
            .as_object()
            .ok_or_else(|| invalid("\"mult\" must be an object".to_string()))?;
        for (aname, row) in mobj {
            let a = shell.gen_index(aname)?;
            let robj = row
                .as_object()
                .ok_or_else(|| invalid("each \"mult\" row must be an object".to_string()))?;
            for (bname, ev) in robj {
                let b = shell.gen_index(bname)?;
                mult.insert((a, b), elem_from_json(ev, &shell)?);
            }
        }
    }
    let unit = elem_from_json(require(obj, "unit")?, &shell)?;
    ModuleAlgebra::new(vars, gens, relations, mult, unit)
}

fn algebra_to_json(alg: &ModuleAlgebra) -> Value {
    let gens: Vec<Value> = alg
        .gens
        .iter()
        .map(|(n, d)| json!({"name": n, "degree": d}))
        .collect();
    let relations: Vec<Value> = alg
        .relations
        .iter()
        .map(|r| elem_to_json(r, alg))
        .collect();
    let mut mult = serde_json::Map::new();
    for (&(a, b), val) in &alg.mult {
        let row = mult
            .entry(alg.gens[a].0.clone())
            .or_insert_with(|| Value::Object(serde_json::Map::new()));
        row.as_object_mut()
            .expect("mult rows are objects")
            .insert(alg.gens[b].0.clone(), elem_to_json(val, alg));
    }
    json!({
        "vars": alg.vars,
        "gens": gens,
        "relations": relations,
        "mult": Value::Object(mult),
        "unit": elem_to_json(&alg.unit, alg),
    })
}

fn map_from_json(
    v: &Value,
    source: &ModuleAlgebra,
    target: &ModuleAlgebra,
) -> TfResult<PolyMap> {
    let obj = v
        .as_object()
        .ok_or_else(|| invalid("expected a generator-image object".to_string()))?;
    // images live over the source's coefficient ring
    let shell = ModuleAlgebra {
        vars: source.vars.clone(),
        gens: target.gens.clone(),
        relations: Vec::new(),
        rel_degrees: Vec::new(),
        mult: BTreeMap::new(),
        unit: vec![Poly::zero(source.nvars()); target.gens.len()],
    };
    for (name, _) in &source.gens {
        if !obj.contains_key(name) {
            return Err(invalid(format!("missing image of '{name}'")));
        }
    }
    let mut images = vec![shell.zero_elem(); source.gens.len()];
    for (name, ev) in obj {
        let r = source.gen_index(name)?;
        images[r] = elem_from_json(ev, &shell)?;
    }
    Ok(PolyMap::new(images, target.gens.len(), source.nvars()))
}

fn map_to_json(fmap: &PolyMap, source: &ModuleAlgebra, target: &ModuleAlgebra) -> Value {
    let shell = ModuleAlgebra {
        vars: source.vars.clone(),
        gens: target.gens.clone(),
        relations: Vec::new(),
        rel_degrees: Vec::new(),
        mult: BTreeMap::new(),
        unit: vec![Poly::zero(source.nvars()); target.gens.len()],
    };
    let mut obj = serde_json::Map::new();
    for (r, img) in fmap.images.iter().enumerate() {
        obj.insert(source.gens[r].0.clone(), elem_to_json(img, &shell));
    }
    Value::Object(obj)
}

// ---------------------------------------------------------------------
// the two-level family attached to one circle algebra
// ---------------------------------------------------------------------

/// The two-subspace family encoding a circle algebra with a²  = c · x²:
/// the full line with the algebra itself, the zero subspace with its
/// degree-0 localization (a rank-2 algebra with u² = c), and the base map
/// one ↦ 1 ⊗ one, a ↦ x ⊗ u. The zero subspace is preloaded as the one
/// localization test.
pub fn ac_instance(c: &Q) -> TfResult<CriterionData> {
    let one1 = Poly::constant(1, q1());
    let zero1 = Poly::zero(1);
    let x = Poly::var(1, 0);
    let x2 = x.mul(&x);
    let a0 = ModuleAlgebra::new(
        vec!["x".to_string()],
        vec![("one".to_string(), 0), ("a".to_string(), 2)],
        Vec::new(),
        BTreeMap::from([
            ((0, 0), vec![one1.clone(), zero1.clone()]),
            ((0, 1), vec![zero1.clone(), one1.clone()]),
            ((1, 1), vec![x2.scale(c), zero1.clone()]),
        ]),
        vec![one1.clone(), zero1.clone()],
    )?;
    let one0 = Poly::constant(0, q1());
    let zero0 = Poly::zero(0);
    let a1 = ModuleAlgebra::new(
        Vec::new(),
        vec![("one".to_string(), 0), ("u".to_string(), 0)],
        Vec::new(),
        BTreeMap::from([
            ((0, 0), vec![one0.clone(), zero0.clone()]),
            ((0, 1), vec![zero0.clone(), one0.clone()]),
            ((1, 1), vec![one0.scale(c), zero0.clone()]),
        ]),
        vec![one0, zero0.clone()],
    )?;
    let f01 = PolyMap::new(
        vec![
            vec![one1, Poly::zero(1)],
            vec![Poly::zero(1), x],
        ],
        2,
        1,
    );
    CriterionData::new(
        1,
        vec![vec![vec![q1()]], Vec::new()],
        vec![a0, a1],
        BTreeMap::from([((0, 1), f01)]),
        vec![Vec::new()],
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64) -> Q {
        Q::from_integer(a.into())
    }

    #[test]
    fn rank_two_family_verifies_everything() {
        let data = ac_instance(&q(1)).unwrap();
        let report = data.check(8, &LcPolicy::default()).unwrap();
        assert!(report.sum_closure.is_empty());
        assert!(report.algebras.iter().all(|a| a.passes()));
        assert!(report.cocycle.is_empty());
        assert_eq!(report.localization.len(), 1);
        assert_eq!(report.localization[0].0, "0");
        assert!(report.localization[0].1.is_verified());
        assert_eq!(report.verdict(), "verified");
    }

    #[test]
    fn irrational_square_fails_the_split_test() {
        let data = ac_instance(&q(2)).unwrap();
        let report = data.check(8, &LcPolicy::default()).unwrap();
        assert!(report.algebras[0].passes());
        assert!(!report.algebras[1].spacelike);
        let detail = report.algebras[1].detail.as_deref().unwrap();
        assert!(detail.contains("field extension"), "detail: {detail}");
        assert_eq!(report.verdict(), "fails");
    }

    #[test]
    fn zero_multiplier_surfaces_a_nilpotent() {
        let data = ac_instance(&q(0)).unwrap();
        let report = data.check(6, &LcPolicy::default()).unwrap();
        assert!(!report.algebras[1].spacelike);
        let detail = report.algebras[1].detail.as_deref().unwrap();
        assert!(detail.contains("nilpotent"), "detail: {detail}");
    }

    #[test]
    fn degenerate_point_family_is_verified() {
        let alg = ModuleAlgebra::new(
            Vec::new(),
            vec![("one".to_string(), 0)],
            Vec::new(),
            BTreeMap::from([((0, 0), vec![Poly::constant(0, q1())])]),
            vec![Poly::constant(0, q1())],
        )
        .unwrap();
        let data = CriterionData::new(0, vec![Vec::new()], vec![alg], BTreeMap::new(), vec![Vec::new()])
            .unwrap();
        let report = data.check(4, &LcPolicy::default()).unwrap();
        assert_eq!(report.verdict(), "verified");
        // the zero subspace is the whole family; the base map is trivial
        assert!(report.localization[0].1.is_verified());
    }

    #[test]
    fn missing_sum_is_a_named_failure() {
        // two distinct lines in the plane without the plane... the full
        // space is required, so take three entries whose pairwise sum of
        // the two lines is present but a plane/line pair is not closed.
        let e1 = vec![q(1), q(0), q(0)];
        let e2 = vec![q(0), q(1), q(0)];
        let e3 = vec![q(0), q(0), q(1)];
        let full = vec![e1.clone(), e2.clone(), e3.clone()];
        let line1 = vec![e1.clone()];
        let line2 = vec![e2.clone()];
        let point_alg = |nv: usize| {
            ModuleAlgebra::new(
                (0..nv).map(|i| format!("t{i}")).collect(),
                vec![("one".to_string(), 0)],
                Vec::new(),
                BTreeMap::from([((0, 0), vec![Poly::constant(nv, q1())])]),
                vec![Poly::constant(nv, q1())],
            )
            .unwrap()
        };
        let unit_map = |src_nv: usize| {
            PolyMap::new(vec![vec![Poly::constant(src_nv, q1())]], 1, src_nv)
        };
        let mut maps = BTreeMap::new();
        for (i, j) in [(0usize, 1usize), (0, 2), (0, 3), (1, 3), (2, 3)] {
            let nv = if i == 0 { 3 } else { 1 };
            maps.insert((i, j), unit_map(nv));
        }
        let data = CriterionData::new(
            3,
            vec![full, line1, line2, Vec::new()],
            vec![point_alg(3), point_alg(1), point_alg(1), point_alg(0)],
            maps,
            Vec::new(),
        )
        .unwrap();
        let report = data.check(4, &LcPolicy::default()).unwrap();
        assert_eq!(report.sum_closure.len(), 1);
        assert!(report.sum_closure[0].contains("subspaces 1 and 2"));
        assert_eq!(report.verdict(), "fails");
    }

    #[test]
    fn cocycle_defect_is_named() {
        // chain of three subspaces where the composite disagrees with the
        // direct map on the degree-2 generator
        let e1 = vec![q(1), q(0)];
        let e2 = vec![q(0), q(1)];
        let line = vec![e1.clone()];
        let full = vec![e1.clone(), e2.clone()];
        let free_alg = |nv: usize| {
            ModuleAlgebra::new(
                (0..nv).map(|i| format!("t{i}")).collect(),
                vec![("one".to_string(), 0)],
                Vec::new(),
                BTreeMap::from([((0, 0), vec![Poly::constant(nv, q1())])]),
                vec![Poly::constant(nv, q1())],
            )
            .unwrap()
        };
        let id_map = |nv: usize| PolyMap::new(vec![vec![Poly::constant(nv, q1())]], 1, nv);
        let bad_map = PolyMap::new(vec![vec![Poly::constant(2, q(2))]], 1, 2);
        let maps = BTreeMap::from([
            ((0usize, 1usize), id_map(2)),
            ((1, 2), id_map(1)),
            ((0, 2), bad_map),
        ]);
        let data = CriterionData::new(
            2,
            vec![full, line, Vec::new()],
            vec![free_alg(2), free_alg(1), free_alg(0)],
            maps,
            Vec::new(),
        )
        .unwrap();
        let report = data.check(4, &LcPolicy::default()).unwrap();
        assert_eq!(report.cocycle.len(), 1);
        assert!(report.cocycle[0].contains("0->1->2"));
        assert_eq!(report.verdict(), "fails");
    }

    #[test]
    fn relations_cut_the_degreewise_basis() {
        // ℚ[x]/(x²) as a module over ℚ[x]: one generator, one relation
        let x2 = Poly::var(1, 0).pow(2);
        let alg = ModuleAlgebra::new(
            vec!["x".to_string()],
            vec![("one".to_string(), 0)],
            vec![vec![x2]],
            BTreeMap::from([((0, 0), vec![Poly::constant(1, q1())])]),
            vec![Poly::constant(1, q1())],
        )
        .unwrap();
        let mut calc = ModuleCalc::new(&alg);
        assert_eq!(calc.dim(0), 1);
        assert_eq!(calc.dim(2), 1);
        assert_eq!(calc.dim(4), 0);
        assert_eq!(calc.dim(6), 0);
        let x3 = vec![Poly::var(1, 0).pow(3)];
        assert!(calc.coords(6, &x3).unwrap().is_empty());
    }

    #[test]
    fn unresolved_kernel_class_is_reported() {
        // the target is the zero module (its one generator is a relation),
        // so every source class is in the kernel and the unit survives
        let target = ModuleAlgebra::new(
            Vec::new(),
            vec![("one".to_string(), 0)],
            vec![vec![Poly::constant(0, q1())]],
            BTreeMap::new(),
            vec![Poly::zero(0)],
        )
        .unwrap();
        let source = ModuleAlgebra::new(
            vec!["x".to_string()],
            vec![("one".to_string(), 0)],
            Vec::new(),
            BTreeMap::from([((0, 0), vec![Poly::constant(1, q1())])]),
            vec![Poly::constant(1, q1())],
        )
        .unwrap();
        let f = PolyMap::new(vec![vec![Poly::zero(1)]], 1, 1);
        let data = CriterionData::new(
            1,
            vec![vec![vec![q1()]], Vec::new()],
            vec![source, target],
            BTreeMap::from([((0usize, 1usize), f)]),
            vec![Vec::new()],
        )
        .unwrap();
        let report = data.check(4, &LcPolicy::default()).unwrap();
        let (_, verdict) = &report.localization[0];
        match verdict {
            ConditionVerdict::Inconclusive { survivors } => {
                assert!(survivors.contains(&"one".to_string()), "{survivors:?}");
            }
            other => panic!("expected an inconclusive search, got {other:?}"),
        }
        assert_eq!(report.verdict(), "inconclusive");
    }

    #[test]
    fn parse_rejects_malformed_family_shapes() {
        let good = ac_instance(&q(1)).unwrap().to_json();
        assert!(CriterionData::from_json(&good).is_ok());
        let mut no_zero = good.clone();
        no_zero["subspaces"] = serde_json::json!([[["1"]]]);
        no_zero["algebras"].as_array_mut().unwrap().pop();
        no_zero.as_object_mut().unwrap().remove("maps");
        no_zero["test_subspaces"] = serde_json::json!([]);
        let err = CriterionData::from_json(&no_zero).unwrap_err();
        assert!(err.to_string().contains("zero subspace"), "{err}");
        let mut not_full = good.clone();
        not_full["subspaces"] = serde_json::json!([[], [["1"]]]);
        assert!(CriterionData::from_json(&not_full).is_err());
        let mut missing_map = good.clone();
        missing_map.as_object_mut().unwrap().remove("maps");
        let err = CriterionData::from_json(&missing_map).unwrap_err();
        assert!(err.to_string().contains("missing map 0->1"), "{err}");
    }

    #[test]
    fn family_round_trips_through_json() {
        let data = ac_instance(&Q::new(9.into(), 4.into())).unwrap();
        let v = data.to_json();
        let back = CriterionData::from_json(&v).unwrap();
        assert_eq!(back.to_json(), v);
        let r1 = data.check(6, &LcPolicy::default()).unwrap();
        let r2 = back.check(6, &LcPolicy::default()).unwrap();
        assert_eq!(r1.to_json(), r2.to_json());
        assert_eq!(r1.verdict(), "verified");
    }

    #[test]
    fn graded_commutativity_of_the_table_is_enforced() {
        let one = Poly::constant(0, q1());
        let bad = ModuleAlgebra::new(
            Vec::new(),
            vec![("a".to_string(), 0), ("b".to_string(), 0)],
            Vec::new(),
            BTreeMap::from([
                ((0usize, 1usize), vec![one.clone(), Poly::zero(0)]),
                ((1, 0), vec![one.scale(&q(2)), Poly::zero(0)]),
            ]),
            vec![one.clone(), Poly::zero(0)],
        );
        assert!(bad.is_err());
        let odd_square = ModuleAlgebra::new(
            Vec::new(),
            vec![("v".to_string(), 3), ("w".to_string(), 6)],
            Vec::new(),
            BTreeMap::from([((0usize, 0usize), vec![Poly::zero(0), one.clone()])]),
            vec![Poly::zero(0), Poly::zero(0)],
        );
        let err = odd_square.unwrap_err();
        assert!(err.to_string().contains("square to zero"), "{err}");
    }
}
