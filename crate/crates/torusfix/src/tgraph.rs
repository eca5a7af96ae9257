//! Labelled moment graphs and their graded cohomology.
//!
//! A graph carries nonzero integer character labels on its edges (loops are
//! rejected, parallel edges are fine). Its degree-`2d` cohomology consists
//! of tuples of degree-`d` polynomials, one per vertex, whose differences
//! across each edge are divisible by the edge label; divisibility is decided
//! exactly by hyperplane restriction. On top of the graded pieces the module
//! provides parallel-class analysis with cycle witnesses, the pairwise
//! independence axiom check, minimal generator extraction over the ambient
//! polynomial ring, and a degreewise freeness probe with conclusive
//! negative certificates.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use crate::error::{internal, invalid, TfResult};
use crate::jsonutil::{value_to_zvec, zvec_to_value};
use crate::lattice::{Subgroup, ZVec};
use crate::linalg::{SparseMat, SparseRow, SpanTracker};
use crate::poly::{monomial_basis, monomial_count, Expo, Poly};
use crate::scalar::{format_q, Q};
use crate::SCHEMA;

/// An edge with endpoints into the vertex list and an integer label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TEdge {
    pub u: usize,
    pub v: usize,
    pub label: ZVec,
}

/// A finite labelled graph over a rank-`n` character lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TGraph {
    n: usize,
    vertices: Vec<String>,
    edges: Vec<TEdge>,
}

/// One parallel class: a primitive direction (first nonzero entry positive)
/// and the edges whose labels are rational multiples of it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParallelClass {
    pub direction: ZVec,
    pub edges: Vec<usize>,
}

/// Forest/cycle status of one parallel class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassStatus {
    pub class: ParallelClass,
    /// Edge indices of the first cycle in edge-list order, if any.
    pub cycle: Option<Vec<usize>>,
}

/// Violation of the pairwise-independence axiom at a vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GkmViolation {
    pub vertex: usize,
    pub e1: usize,
    pub e2: usize,
}

/// A minimal module generator: cohomological degree and representing tuple.
#[derive(Clone, Debug)]
pub struct Generator {
    pub degree: u32,
    pub tuple: Vec<Poly>,
}

/// Conclusive negative freeness evidence.
#[derive(Clone, Debug)]
pub enum FreenessCertificate {
    /// A nonzero polynomial relation among the minimal generators:
    /// `Σ coeff · monomial · gen = 0` in the stated cohomological degree.
    Syzygy {
        degree: u32,
        combo: Vec<(usize, Expo, Q)>,
    },
    /// More minimal generators than the generic rank allows.
    RankExcess {
        generators: usize,
        vertex_count: usize,
        degree: u32,
    },
}

/// Outcome of the degreewise freeness probe.
#[derive(Clone, Debug)]
pub enum FreenessVerdict {
    /// Dimensions match a free module on the found generators through the
    /// stated cohomological degree (no claim beyond it).
    FreeUpTo(u32),
    NotFree(FreenessCertificate),
}

/// Full freeness probe output.
#[derive(Clone, Debug)]
pub struct FreenessReport {
    /// Cohomological degree bound covered by the probe (`2 · d_max`).
    pub bound: u32,
    /// Cohomological degrees of minimal generators found so far.
    pub generator_degrees: Vec<u32>,
    pub generators: Vec<Generator>,
    pub verdict: FreenessVerdict,
}

impl TGraph {
    /// Validated constructor.
    pub fn new(n: usize, vertices: Vec<String>, edges: Vec<TEdge>) -> TfResult<TGraph> {
        if n == 0 {
            return Err(invalid("torus rank must be at least 1".to_string()));
        }
        let mut seen = std::collections::BTreeSet::new();
        for v in &vertices {
            if v.is_empty() {
                return Err(invalid("vertex names must be nonempty".to_string()));
            }
            if !seen.insert(v.clone()) {
                return Err(invalid(format!("duplicate vertex name '{v}'")));
            }
        }
        for (i, e) in edges.iter().enumerate() {
            if e.u >= vertices.len() || e.v >= vertices.len() {
                return Err(invalid(format!("edge {i} references a missing vertex")));
            }
            if e.u == e.v {
                return Err(invalid(format!(
                    "edge {i} is a loop at vertex '{}'",
                    vertices[e.u]
                )));
            }
            if e.label.len() != n {
                return Err(invalid(format!(
                    "edge {i} label has length {}, expected {n}",
                    e.label.len()
                )));
            }
            if e.label.iter().all(|c| c.is_zero()) {
                return Err(invalid(format!("edge {i} carries the zero label")));
            }
        }
        Ok(TGraph { n, vertices, edges })
    }

    /// Parse the JSON input form
    /// `{"n": …, "vertices": […], "edges": [{"u","v","label"}…]}` with
    /// endpoints given by vertex name.
    pub fn from_json(v: &Value) -> TfResult<TGraph> {
        let obj = crate::jsonutil::as_object(v)?;
        let n = crate::jsonutil::require(obj, "n")?
            .as_u64()
            .ok_or_else(|| invalid("\"n\" must be a nonnegative integer".to_string()))?
            as usize;
        let vertices: Vec<String> = crate::jsonutil::require(obj, "vertices")?
            .as_array()
            .ok_or_else(|| invalid("\"vertices\" must be an array".to_string()))?
            .iter()
            .map(|x| {
                x.as_str()
                    .map(str::to_string)
                    .ok_or_else(|| invalid("vertex names must be strings".to_string()))
            })
            .collect::<TfResult<_>>()?;
        let index: BTreeMap<&str, usize> = vertices
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i))
            .collect();
        let edges_v = crate::jsonutil::require(obj, "edges")?
            .as_array()
            .ok_or_else(|| invalid("\"edges\" must be an array".to_string()))?;
        let mut edges = Vec::new();
        for (i, ev) in edges_v.iter().enumerate() {
            let eobj = ev
                .as_object()
                .ok_or_else(|| invalid(format!("edge {i} must be an object")))?;
            let name_of = |field: &str| -> TfResult<usize> {
                let nv = eobj
                    .get(field)
                    .ok_or_else(|| invalid(format!("edge {i} lacks \"{field}\"")))?;
                let s = nv
                    .as_str()
                    .ok_or_else(|| invalid(format!("edge {i} \"{field}\" must be a vertex name")))?;
                index
                    .get(s)
                    .copied()
                    .ok_or_else(|| invalid(format!("edge {i} references unknown vertex '{s}'")))
            };
            let u = name_of("u")?;
            let v2 = name_of("v")?;
            let label = value_to_zvec(
                eobj.get("label")
                    .ok_or_else(|| invalid(format!("edge {i} lacks \"label\"")))?,
            )?;
            edges.push(TEdge { u, v: v2, label });
        }
        TGraph::new(n, vertices, edges)
    }

    /// Serialize back to the JSON input form.
    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "vertices": self.vertices,
            "edges": self.edges.iter().map(|e| json!({
                "u": self.vertices[e.u],
                "v": self.vertices[e.v],
                "label": zvec_to_value(&e.label),
            })).collect::<Vec<_>>(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[TEdge] {
        &self.edges
    }

    /// Subgraph fixed by a subgroup: all vertices, plus the edges whose
    /// labels vanish rationally on it (equivalently, lie in the rational
    /// span of the annihilator of its identity component).
    pub fn fixed_subgraph(&self, h: &Subgroup) -> TfResult<TGraph> {
        if h.n() != self.n {
            return Err(invalid(format!(
                "subgroup rank {} does not match graph rank {}",
                h.n(),
                self.n
            )));
        }
        let mut span = SpanTracker::new(self.n);
        for row in h.ann_rows() {
            let qrow: Vec<Q> = row.iter().map(|x| Q::from_integer(x.clone())).collect();
            span.insert(&qrow);
        }
        let edges: Vec<TEdge> = self
            .edges
            .iter()
            .filter(|e| {
                let ql: Vec<Q> = e.label.iter().map(|x| Q::from_integer(x.clone())).collect();
                span.contains(&ql)
            })
            .cloned()
            .collect();
        Ok(TGraph { n: self.n, vertices: self.vertices.clone(), edges })
    }

    /// Primitive sign-normalized direction of a label.
    fn primitive_direction(label: &ZVec) -> ZVec {
        let gcd = label
            .iter()
            .fold(BigInt::zero(), |acc, x| acc.gcd(x));
        let mut dir: ZVec = label.iter().map(|x| x / &gcd).collect();
        if let Some(first) = dir.iter().find(|x| !x.is_zero()) {
            if first.is_negative() {
                for x in dir.iter_mut() {
                    *x = -x.clone();
                }
            }
        }
        dir
    }

    /// Parallel classes sorted by direction.
    pub fn parallel_classes(&self) -> Vec<ParallelClass> {
        let mut map: BTreeMap<ZVec, Vec<usize>> = BTreeMap::new();
        for (i, e) in self.edges.iter().enumerate() {
            map.entry(Self::primitive_direction(&e.label)).or_default().push(i);
        }
        map.into_iter()
            .map(|(direction, edges)| ParallelClass { direction, edges })
            .collect()
    }

    /// Forest test per parallel class. A class that closes a cycle produces
    /// the first cycle in edge-list order as its witness; the graph is
    /// realizable exactly when every class is a forest.
    pub fn realizability(&self) -> (bool, Vec<ClassStatus>) {
        let mut statuses = Vec::new();
        let mut all_forests = true;
        for class in self.parallel_classes() {
            let mut uf = UnionFind::new(self.vertices.len());
            let mut added: Vec<usize> = Vec::new();
            let mut cycle = None;
            for &ei in &class.edges {
                let e = &self.edges[ei];
                if !uf.union(e.u, e.v) {
                    // closing edge: recover the unique path between its
                    // endpoints through the already-added class edges
                    let path = self.path_through(&added, e.u, e.v).unwrap_or_default();
                    let mut witness = path;
                    witness.push(ei);
                    cycle = Some(witness);
                    break;
                }
                added.push(ei);
            }
            if cycle.is_some() {
                all_forests = false;
            }
            statuses.push(ClassStatus { class, cycle });
        }
        (all_forests, statuses)
    }

    /// Breadth-first path (as edge indices) between two vertices using only
    /// the given edges.
    fn path_through(&self, edge_ids: &[usize], from: usize, to: usize) -> Option<Vec<usize>> {
        let mut prev: Vec<Option<(usize, usize)>> = vec![None; self.vertices.len()];
        let mut visited = vec![false; self.vertices.len()];
        let mut queue = std::collections::VecDeque::new();
        visited[from] = true;
        queue.push_back(from);
        while let Some(x) = queue.pop_front() {
            if x == to {
                break;
            }
            for &ei in edge_ids {
                let e = &self.edges[ei];
                let other = if e.u == x {
                    e.v
                } else if e.v == x {
                    e.u
                } else {
                    continue;
                };
                if !visited[other] {
                    visited[other] = true;
                    prev[other] = Some((x, ei));
                    queue.push_back(other);
                }
            }
        }
        if !visited[to] {
            return None;
        }
        let mut path = Vec::new();
        let mut cur = to;
        while cur != from {
            let (p, ei) = prev[cur]?;
            path.push(ei);
            cur = p;
        }
        path.reverse();
        Some(path)
    }

    /// Pairwise rational independence of the labels at each vertex; returns
    /// the first violation if any.
    pub fn gkm_axiom_check(&self) -> Option<GkmViolation> {
        for v in 0..self.vertices.len() {
            let incident: Vec<usize> = self
                .edges
                .iter()
                .enumerate()
                .filter(|(_, e)| e.u == v || e.v == v)
                .map(|(i, _)| i)
                .collect();
            for a in 0..incident.len() {
                for b in (a + 1)..incident.len() {
                    let (e1, e2) = (incident[a], incident[b]);
                    if Self::primitive_direction(&self.edges[e1].label)
                        == Self::primitive_direction(&self.edges[e2].label)
                    {
                        return Some(GkmViolation { vertex: v, e1, e2 });
                    }
                }
            }
        }
        None
    }

    /// Coefficient-space dimension of one vertex slot in degree `d`.
    fn slot_dim(&self, d: u32) -> usize {
        monomial_count(self.n, d)
    }

    /// Constraint matrix whose kernel is the degree-`2d` cohomology: one
    /// block of unknowns per vertex (degree-`d` coefficient vectors), one
    /// row per edge and restricted monomial demanding that the endpoint
    /// difference restricts to zero on the label hyperplane.
    fn constraint_matrix(&self, d: u32) -> SparseMat {
        let m = self.slot_dim(d);
        let cols = m * self.vertices.len();
        let mut mat = SparseMat::new(cols);
        let basis = monomial_basis(self.n, d);
        // cache restriction coefficient vectors per primitive direction
        let mut cache: BTreeMap<ZVec, Vec<Vec<Q>>> = BTreeMap::new();
        let out_dim = monomial_count(self.n.saturating_sub(1), d);
        for e in &self.edges {
            let dir = Self::primitive_direction(&e.label);
            let rows = cache.entry(dir.clone()).or_insert_with(|| {
                let alpha: Vec<Q> = dir.iter().map(|x| Q::from_integer(x.clone())).collect();
                basis
                    .iter()
                    .map(|expo| {
                        let mono = Poly::from_coeff_vector(
                            self.n,
                            d,
                            &unit_vector(basis.iter().position(|x| x == expo).unwrap(), m),
                        );
                        mono.restrict_to_hyperplane(&alpha)
                            .expect("labels are nonzero")
                            .coeff_vector(d)
                            .expect("restriction preserves degree")
                    })
                    .collect()
            });
            for t in 0..out_dim {
                let mut row = SparseRow::new();
                for (k, rvec) in rows.iter().enumerate() {
                    let c = &rvec[t];
                    if !c.is_zero() {
                        row.insert(e.u * m + k, c.clone());
                        let entry = row.entry(e.v * m + k).or_insert_with(Q::zero);
                        *entry -= c;
                        if entry.is_zero() {
                            row.remove(&(e.v * m + k));
                        }
                    }
                }
                if !row.is_empty() {
                    mat.push_row(row);
                }
            }
        }
        mat
    }

    /// Basis of the degree-`2d` cohomology as vertex tuples of degree-`d`
    /// polynomials (odd cohomological degrees vanish identically).
    pub fn cohomology_basis(&self, d: u32) -> Vec<Vec<Poly>> {
        self.cohomology_coeff_basis(d)
            .into_iter()
            .map(|v| self.coeffs_to_tuple(d, &v))
            .collect()
    }

    fn cohomology_coeff_basis(&self, d: u32) -> Vec<Vec<Q>> {
        self.constraint_matrix(d).kernel_basis()
    }

    fn coeffs_to_tuple(&self, d: u32, coeffs: &[Q]) -> Vec<Poly> {
        let m = self.slot_dim(d);
        (0..self.vertices.len())
            .map(|v| Poly::from_coeff_vector(self.n, d, &coeffs[v * m..(v + 1) * m]))
            .collect()
    }

    fn tuple_to_coeffs(&self, d: u32, tuple: &[Poly]) -> TfResult<Vec<Q>> {
        let mut out = Vec::new();
        for p in tuple {
            out.extend(p.coeff_vector(d)?);
        }
        Ok(out)
    }

    /// Dimensions of the even graded pieces `H^{2d}` for `d = 0..=d_max`.
    pub fn hilbert_function(&self, d_max: u32) -> Vec<usize> {
        (0..=d_max)
            .map(|d| {
                let m = self.constraint_matrix(d);
                m.ncols() - m.rank()
            })
            .collect()
    }

    /// Vertexwise product of two classes, with the edge-divisibility
    /// invariant re-checked (a failure is an internal error, since products
    /// of valid classes stay valid).
    pub fn multiply_classes(&self, a: &[Poly], b: &[Poly]) -> TfResult<Vec<Poly>> {
        if a.len() != self.vertices.len() || b.len() != self.vertices.len() {
            return Err(invalid("class tuples must have one entry per vertex".to_string()));
        }
        let prod: Vec<Poly> = a.iter().zip(b).map(|(x, y)| x.mul(y)).collect();
        for e in &self.edges {
            let alpha: Vec<Q> = e.label.iter().map(|x| Q::from_integer(x.clone())).collect();
            let diff = prod[e.u].sub(&prod[e.v]);
            if !diff.divisible_by_linear(&alpha)? {
                return Err(internal(
                    "product of cohomology classes violates edge divisibility".to_string(),
                ));
            }
        }
        Ok(prod)
    }

    /// Minimal generators and the freeness probe through cohomological
    /// degree `2 · d_max`, in one pass.
    pub fn freeness_probe(&self, d_max: u32) -> TfResult<FreenessReport> {
        let nv = self.vertices.len();
        let mut generators: Vec<Generator> = Vec::new();
        let mut bases: Vec<Vec<Vec<Q>>> = Vec::new();
        for d in 0..=d_max {
            let basis = self.cohomology_coeff_basis(d);
            bases.push(basis);
            let basis = bases.last().expect("just pushed");
            let m = self.slot_dim(d);
            let cols = m * nv;
            // span of decomposables: x_i times every class one degree down
            let mut span = SpanTracker::new(cols);
            if d > 0 {
                let prev = &bases[(d - 1) as usize];
                for i in 0..self.n {
                    let xi = Poly::var(self.n, i);
                    for hv in prev {
                        let tuple = self.coeffs_to_tuple(d - 1, hv);
                        let scaled: Vec<Poly> = tuple.iter().map(|p| p.mul(&xi)).collect();
                        let coeffs = self.tuple_to_coeffs(d, &scaled)?;
                        span.insert(&coeffs);
                    }
                }
            }
            for hv in basis {
                if span.insert(hv) {
                    generators.push(Generator {
                        degree: 2 * d,
                        tuple: self.coeffs_to_tuple(d, hv),
                    });
                }
            }
            if generators.len() > nv {
                return Ok(self.report_with(
                    d_max,
                    generators.clone(),
                    FreenessVerdict::NotFree(FreenessCertificate::RankExcess {
                        generators: generators.len(),
                        vertex_count: nv,
                        degree: 2 * d,
                    }),
                ));
            }
            // free-module comparison: columns are monomial·generator images
            let free_dim: usize = generators
                .iter()
                .map(|g| monomial_count(self.n, d - g.degree / 2))
                .sum();
            let h_dim = basis.len();
            if free_dim > h_dim {
                let cert = self.extract_syzygy(d, &generators)?;
                return Ok(self.report_with(
                    d_max,
                    generators.clone(),
                    FreenessVerdict::NotFree(cert),
                ));
            }
            if free_dim < h_dim {
                return Err(internal(
                    "free module on minimal generators fails to cover cohomology".to_string(),
                ));
            }
        }
        Ok(self.report_with(d_max, generators, FreenessVerdict::FreeUpTo(2 * d_max)))
    }

    fn report_with(
        &self,
        d_max: u32,
        generators: Vec<Generator>,
        verdict: FreenessVerdict,
    ) -> FreenessReport {
        FreenessReport {
            bound: 2 * d_max,
            generator_degrees: generators.iter().map(|g| g.degree).collect(),
            generators,
            verdict,
        }
    }

    /// Explicit kernel vector of the evaluation map from the free module on
    /// the generators into degree-`2d` cohomology.
    fn extract_syzygy(&self, d: u32, generators: &[Generator]) -> TfResult<FreenessCertificate> {
        let m = self.slot_dim(d);
        let cols = m * self.vertices.len();
        // column layout: for each generator, the monomials of complementary degree
        let mut layout: Vec<(usize, Expo)> = Vec::new();
        for (gi, g) in generators.iter().enumerate() {
            for mono in monomial_basis(self.n, d - g.degree / 2) {
                layout.push((gi, mono));
            }
        }
        let mut images: Vec<Vec<Q>> = Vec::new();
        for (gi, mono) in &layout {
            let mono_poly = Poly::from_terms(
                self.n,
                [(mono.clone(), crate::scalar::q1())],
            )?;
            let scaled: Vec<Poly> = generators[*gi]
                .tuple
                .iter()
                .map(|p| p.mul(&mono_poly))
                .collect();
            images.push(self.tuple_to_coeffs(d, &scaled)?);
        }
        // kernel of the column matrix
        let mut mat = SparseMat::new(layout.len());
        for r in 0..cols {
            let row: SparseRow = images
                .iter()
                .enumerate()
                .filter(|(_, img)| !img[r].is_zero())
                .map(|(c, img)| (c, img[r].clone()))
                .collect();
            mat.push_row(row);
        }
        let kernel = mat.kernel_basis();
        let v = kernel
            .first()
            .ok_or_else(|| internal("dimension excess without a syzygy".to_string()))?;
        let combo: Vec<(usize, Expo, Q)> = layout
            .iter()
            .zip(v)
            .filter(|(_, c)| !c.is_zero())
            .map(|((gi, mono), c)| (*gi, mono.clone(), c.clone()))
            .collect();
        Ok(FreenessCertificate::Syzygy { degree: 2 * d, combo })
    }

    /// Full report for the command-line front end: Hilbert function,
    /// realizability with witnesses, axiom check, and the freeness probe.
    pub fn analyze(&self, d_max: u32) -> TfResult<GraphReport> {
        let hilbert = self.hilbert_function(d_max);
        let (realizable, statuses) = self.realizability();
        let gkm = self.gkm_axiom_check();
        let freeness = self.freeness_probe(d_max)?;
        Ok(GraphReport {
            degree_bound: d_max,
            hilbert,
            realizable,
            statuses,
            gkm,
            freeness,
        })
    }
}

fn unit_vector(i: usize, len: usize) -> Vec<Q> {
    let mut v = vec![Q::zero(); len];
    v[i] = crate::scalar::q1();
    v
}

/// Union-find with path compression and union by size.
struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect(), size: vec![1; n] }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns `false` when both endpoints already share a component.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (big, small) = if self.size[ra] >= self.size[rb] {
            (ra, rb)
        } else {
            (rb, ra)
        };
        self.parent[small] = big;
        self.size[big] += self.size[small];
        true
    }
}

/// Aggregated graph report (see `docs/graph-report.schema.json`).
#[derive(Clone, Debug)]
pub struct GraphReport {
    pub degree_bound: u32,
    pub hilbert: Vec<usize>,
    pub realizable: bool,
    pub statuses: Vec<ClassStatus>,
    pub gkm: Option<GkmViolation>,
    pub freeness: FreenessReport,
}

impl GraphReport {
    /// JSON form (deterministic: object keys serialize sorted).
    pub fn to_json(&self, graph: &TGraph) -> Value {
        let classes: Vec<Value> = self
            .statuses
            .iter()
            .map(|s| {
                json!({
                    "direction": zvec_to_value(&s.class.direction),
                    "edges": s.class.edges,
                    "status": if s.cycle.is_some() { "cycle" } else { "forest" },
                    "cycle": s.cycle,
                })
            })
            .collect();
        let gkm = match &self.gkm {
            None => json!({"holds": true}),
            Some(v) => json!({
                "holds": false,
                "vertex": graph.vertices()[v.vertex],
                "edges": [v.e1, v.e2],
            }),
        };
        let freeness = freeness_to_json(&self.freeness);
        json!({
            "schema": SCHEMA,
            "degree_bound": self.degree_bound,
            "hilbert": self.hilbert,
            "odd_degrees": "zero",
            "realizable": self.realizable,
            "classes": classes,
            "gkm": gkm,
            "freeness": freeness,
        })
    }

    /// Text form.
    pub fn to_text(&self, graph: &TGraph) -> String {
        let mut out = String::new();
        let dims: Vec<String> = self.hilbert.iter().map(|d| d.to_string()).collect();
        out.push_str(&format!(
            "hilbert (even degrees 0..{}): ({})\n",
            2 * self.degree_bound,
            dims.join(", ")
        ));
        out.push_str("odd degrees: identically zero\n");
        out.push_str(&format!("realizable: {}\n", self.realizable));
        for s in &self.statuses {
            let dir: Vec<String> = s.class.direction.iter().map(|x| x.to_string()).collect();
            match &s.cycle {
                None => out.push_str(&format!(
                    "class ({}): forest on {} edge(s)\n",
                    dir.join(","),
                    s.class.edges.len()
                )),
                Some(c) => {
                    let ids: Vec<String> = c.iter().map(|x| x.to_string()).collect();
                    out.push_str(&format!(
                        "class ({}): cycle through edges [{}]\n",
                        dir.join(","),
                        ids.join(", ")
                    ));
                }
            }
        }
        match &self.gkm {
            None => out.push_str("independence axiom: holds\n"),
            Some(v) => out.push_str(&format!(
                "independence axiom: fails at vertex '{}' (edges {} and {})\n",
                graph.vertices()[v.vertex],
                v.e1,
                v.e2
            )),
        }
        match &self.freeness.verdict {
            FreenessVerdict::FreeUpTo(b) => {
                let gens: Vec<String> = self
                    .freeness
                    .generator_degrees
                    .iter()
                    .map(|d| d.to_string())
                    .collect();
                out.push_str(&format!(
                    "freeness: free up to degree {} with generators in degrees {{{}}}\n",
                    b,
                    gens.join(", ")
                ));
            }
            FreenessVerdict::NotFree(cert) => match cert {
                FreenessCertificate::RankExcess { generators, vertex_count, degree } => {
                    out.push_str(&format!(
                        "freeness: not free — {generators} generators by degree {degree} exceed the generic rank {vertex_count}\n"
                    ));
                }
                FreenessCertificate::Syzygy { degree, .. } => {
                    out.push_str(&format!(
                        "freeness: not free — explicit relation among minimal generators in degree {degree}\n"
                    ));
                }
            },
        }
        out
    }
}

fn freeness_to_json(f: &FreenessReport) -> Value {
    let verdict = match &f.verdict {
        FreenessVerdict::FreeUpTo(b) => json!({"status": "free-up-to", "bound": b}),
        FreenessVerdict::NotFree(cert) => match cert {
            FreenessCertificate::RankExcess { generators, vertex_count, degree } => json!({
                "status": "not-free",
                "certificate": {
                    "kind": "rank-excess",
                    "generators": generators,
                    "rank": vertex_count,
                    "degree": degree,
                }
            }),
            FreenessCertificate::Syzygy { degree, combo } => {
                let terms: Vec<Value> = combo
                    .iter()
                    .map(|(gi, mono, c)| {
                        let mono_str: Vec<String> = mono.iter().map(|e| e.to_string()).collect();
                        json!({
                            "generator": gi,
                            "monomial": mono_str.join(","),
                            "coeff": format_q(c),
                        })
                    })
                    .collect();
                json!({
                    "status": "not-free",
                    "certificate": {"kind": "syzygy", "degree": degree, "relation": terms}
                })
            }
        },
    };
    json!({
        "bound": f.bound,
        "generator_degrees": f.generator_degrees,
        "verdict": verdict,
    })
}
