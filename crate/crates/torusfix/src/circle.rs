//! Circle-equivariant algebra models and their realizability classification.
//!
//! Input algebras are finitely generated graded modules over a polynomial
//! ring on one degree-2 variable `x`, with generators either free or
//! `x`-power torsion and products given by finite sums of `coeff · x^m ·
//! generator` terms. The classifier validates the presentation, checks the
//! structural hypotheses (degree-0 part split semisimple, nothing in degree
//! 1, multiplication by `x` injective from degree 0 to degree 2), passes to
//! the degree-0 part of the localization at `x`, and decides whether that
//! finite commutative algebra splits as a product of copies of the
//! rationals. Splitting succeeds with an explicit system of orthogonal
//! idempotents; failure produces either a nilpotent witness or a minimal
//! polynomial without rational roots.

use std::collections::{BTreeMap, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{internal, invalid, TfResult};
use crate::jsonutil::{as_object, require, value_to_q};
use crate::linalg::{express_in_span, SparseMat, SpanTracker};
use crate::scalar::{format_q, q0, q1, Q};
use crate::SCHEMA;

// ---------------------------------------------------------------------------
// input presentation
// ---------------------------------------------------------------------------

/// One module generator: free unless a torsion exponent `k` (meaning
/// `x^k · g = 0`) is present.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CircleGen {
    pub name: String,
    pub degree: u32,
    pub torsion: Option<u32>,
}

/// One structure-constant term `coeff · x^xpow · gen`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductTerm {
    pub coeff: Q,
    pub xpow: u32,
    pub gen: usize,
}

/// A graded algebra over the one-variable polynomial ring, presented by
/// module generators and pairwise products.
#[derive(Clone, Debug)]
pub struct CircleAlgebra {
    gens: Vec<CircleGen>,
    unit: Option<usize>,
    /// products[i][j] = terms of g_i · g_j, always filled for i ≤ j
    products: BTreeMap<(usize, usize), Vec<ProductTerm>>,
}

/// Module element: coefficients on the basis `x^m · g_i`.
type Elem = BTreeMap<(usize, u32), Q>;

impl CircleAlgebra {
    /// Build and validate a presentation. `products` may specify each
    /// unordered pair in either order; missing pairs multiply to zero and
    /// unit products are implied.
    pub fn new(
        gens: Vec<CircleGen>,
        unit_name: Option<&str>,
        raw_products: Vec<((String, String), Vec<(Q, u32, String)>)>,
    ) -> TfResult<CircleAlgebra> {
        let mut seen = std::collections::BTreeSet::new();
        for g in &gens {
            if g.name.is_empty() || g.name == "x" {
                return Err(invalid(format!("illegal generator name '{}'", g.name)));
            }
            if !seen.insert(g.name.clone()) {
                return Err(invalid(format!("duplicate generator name '{}'", g.name)));
            }
            if g.torsion == Some(0) {
                return Err(invalid(format!(
                    "generator '{}' has torsion exponent 0, which would make it zero",
                    g.name
                )));
            }
        }
        let index: BTreeMap<&str, usize> =
            gens.iter().enumerate().map(|(i, g)| (g.name.as_str(), i)).collect();
        let unit = match (gens.is_empty(), unit_name) {
            (true, _) => None,
            (false, None) => {
                return Err(invalid("a nonempty algebra needs a unit generator".to_string()))
            }
            (false, Some(u)) => {
                let i = *index
                    .get(u)
                    .ok_or_else(|| invalid(format!("unit '{u}' is not a generator")))?;
                if gens[i].degree != 0 {
                    return Err(invalid(format!("unit '{u}' must have degree 0")));
                }
                Some(i)
            }
        };
        let mut products: BTreeMap<(usize, usize), Vec<ProductTerm>> = BTreeMap::new();
        let mut specified: BTreeMap<(usize, usize), Vec<ProductTerm>> = BTreeMap::new();
        for ((a, b), terms) in raw_products {
            let i = *index
                .get(a.as_str())
                .ok_or_else(|| invalid(format!("product references unknown generator '{a}'")))?;
            let j = *index
                .get(b.as_str())
                .ok_or_else(|| invalid(format!("product references unknown generator '{b}'")))?;
            let terms: Vec<ProductTerm> = terms
                .into_iter()
                .map(|(coeff, xpow, g)| {
                    let gi = *index.get(g.as_str()).ok_or_else(|| {
                        invalid(format!("product term references unknown generator '{g}'"))
                    })?;
                    Ok(ProductTerm { coeff, xpow, gen: gi })
                })
                .collect::<TfResult<_>>()?;
            if specified.insert((i, j), terms).is_some() {
                return Err(invalid(format!("product of '{a}' and '{b}' given twice")));
            }
        }
        // normalize to i ≤ j, reconciling both orders by graded commutativity
        let keys: Vec<(usize, usize)> = specified.keys().copied().collect();
        for (i, j) in keys {
            let (lo, hi) = (i.min(j), i.max(j));
            let terms = specified.get(&(i, j)).cloned().unwrap_or_default();
            let canon = if i <= j {
                terms
            } else {
                sign_adjust(&gens, i, j, terms)
            };
            match products.get(&(lo, hi)) {
                None => {
                    products.insert((lo, hi), canon);
                }
                Some(existing) => {
                    if normalize_terms(existing) != normalize_terms(&canon) {
                        return Err(invalid(format!(
                            "products of '{}' and '{}' violate graded commutativity",
                            gens[lo].name, gens[hi].name
                        )));
                    }
                }
            }
        }
        let alg = CircleAlgebra { gens, unit, products };
        alg.validate()?;
        Ok(alg)
    }

    pub fn gens(&self) -> &[CircleGen] {
        &self.gens
    }

    fn torsion_of(&self, g: usize) -> Option<u32> {
        self.gens[g].torsion
    }

    /// Structure terms of g_i · g_j, applying the implied unit products and
    /// the graded sign when the stored order is swapped.
    fn product_terms(&self, i: usize, j: usize) -> Vec<ProductTerm> {
        if Some(i) == self.unit {
            return vec![ProductTerm { coeff: q1(), xpow: 0, gen: j }];
        }
        if Some(j) == self.unit {
            return vec![ProductTerm { coeff: q1(), xpow: 0, gen: i }];
        }
        let (lo, hi) = (i.min(j), i.max(j));
        let stored = self.products.get(&(lo, hi)).cloned().unwrap_or_default();
        if i <= j {
            stored
        } else {
            sign_adjust(&self.gens, i, j, stored)
        }
    }

    fn add_to_elem(&self, elem: &mut Elem, gen: usize, xpow: u32, c: &Q) {
        if c.is_zero() {
            return;
        }
        if let Some(k) = self.torsion_of(gen) {
            if xpow >= k {
                return;
            }
        }
        let entry = elem.entry((gen, xpow)).or_insert_with(q0);
        *entry += c;
        if entry.is_zero() {
            elem.remove(&(gen, xpow));
        }
    }

    fn gen_elem(&self, g: usize) -> Elem {
        let mut e = Elem::new();
        self.add_to_elem(&mut e, g, 0, &q1());
        e
    }

    /// Product of two module elements via the structure constants.
    fn mul_elems(&self, a: &Elem, b: &Elem) -> Elem {
        let mut out = Elem::new();
        for ((gi, mi), ci) in a {
            for ((gj, mj), cj) in b {
                let c = ci * cj;
                for t in self.product_terms(*gi, *gj) {
                    let coeff = &c * &t.coeff;
                    self.add_to_elem(&mut out, t.gen, mi + mj + t.xpow, &coeff);
                }
            }
        }
        out
    }

    fn mul_by_x(&self, a: &Elem, power: u32) -> Elem {
        let mut out = Elem::new();
        for ((g, m), c) in a {
            self.add_to_elem(&mut out, *g, m + power, c);
        }
        out
    }

    /// Full structural validation: homogeneity, odd squares, torsion
    /// closure, unit behaviour and associativity on generator triples.
    pub fn validate(&self) -> TfResult<()> {
        for ((i, j), terms) in &self.products {
            let (di, dj) = (self.gens[*i].degree, self.gens[*j].degree);
            for t in terms {
                let dl = self.gens[t.gen].degree;
                if 2 * t.xpow + dl != di + dj {
                    return Err(invalid(format!(
                        "product of '{}' and '{}' contains a term of degree {} instead of {}",
                        self.gens[*i].name,
                        self.gens[*j].name,
                        2 * t.xpow + dl,
                        di + dj
                    )));
                }
            }
            if let Some(u) = self.unit {
                if *i == u || *j == u {
                    let other = if *i == u { *j } else { *i };
                    let expect = normalize_terms(&[ProductTerm {
                        coeff: q1(),
                        xpow: 0,
                        gen: other,
                    }]);
                    if normalize_terms(terms) != expect {
                        return Err(invalid(format!(
                            "unit product with '{}' must reproduce it",
                            self.gens[other].name
                        )));
                    }
                }
            }
        }
        // odd generators square to zero in a graded-commutative algebra
        for (i, g) in self.gens.iter().enumerate() {
            if g.degree % 2 == 1 {
                let sq = self.mul_elems(&self.gen_elem(i), &self.gen_elem(i));
                if !sq.is_empty() {
                    return Err(invalid(format!(
                        "odd generator '{}' has a nonzero square",
                        g.name
                    )));
                }
            }
        }
        // torsion closure: x^k annihilates every product with a torsion gen
        for (i, g) in self.gens.iter().enumerate() {
            let Some(k) = g.torsion else { continue };
            for j in 0..self.gens.len() {
                let prod = self.mul_elems(&self.gen_elem(i), &self.gen_elem(j));
                let killed = self.mul_by_x(&prod, k);
                if !killed.is_empty() {
                    return Err(invalid(format!(
                        "product of torsion generator '{}' with '{}' survives x^{}",
                        g.name, self.gens[j].name, k
                    )));
                }
            }
        }
        // if the unit is torsion, x is nilpotent, so everything must be
        if let Some(u) = self.unit {
            if let Some(k) = self.gens[u].torsion {
                for g in &self.gens {
                    match g.torsion {
                        Some(_) => {}
                        None => {
                            return Err(invalid(format!(
                                "unit is annihilated by x^{k} but generator '{}' is free",
                                g.name
                            )))
                        }
                    }
                }
            }
        }
        // associativity on generator triples
        for i in 0..self.gens.len() {
            for j in 0..self.gens.len() {
                for k in 0..self.gens.len() {
                    let left = self.mul_elems(
                        &self.mul_elems(&self.gen_elem(i), &self.gen_elem(j)),
                        &self.gen_elem(k),
                    );
                    let right = self.mul_elems(
                        &self.gen_elem(i),
                        &self.mul_elems(&self.gen_elem(j), &self.gen_elem(k)),
                    );
                    if left != right {
                        return Err(invalid(format!(
                            "associativity fails on ('{}', '{}', '{}')",
                            self.gens[i].name, self.gens[j].name, self.gens[k].name
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Parse `{"generators": [{"name","degree","torsion"?}…], "unit": …,
    /// "products": {"g*h": [{"coeff","xpow","gen"}…]}}`.
    pub fn from_json(v: &Value) -> TfResult<CircleAlgebra> {
        let obj = as_object(v)?;
        let gens_v = require(obj, "generators")?
            .as_array()
            .ok_or_else(|| invalid("\"generators\" must be an array".to_string()))?;
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
            let torsion = match gobj.get("torsion") {
                None | Some(Value::Null) => None,
                Some(t) => Some(t.as_u64().ok_or_else(|| {
                    invalid("\"torsion\" must be a positive integer".to_string())
                })? as u32),
            };
            gens.push(CircleGen { name, degree, torsion });
        }
        let unit = match obj.get("unit") {
            None | Some(Value::Null) => None,
            Some(u) => Some(
                u.as_str()
                    .ok_or_else(|| invalid("\"unit\" must be a generator name".to_string()))?,
            ),
        };
        let mut raw_products = Vec::new();
        if let Some(pv) = obj.get("products") {
            let pobj = pv
                .as_object()
                .ok_or_else(|| invalid("\"products\" must be an object".to_string()))?;
            for (key, terms_v) in pobj {
                let (a, b) = key.split_once('*').ok_or_else(|| {
                    invalid(format!("product key '{key}' is not of the form 'g*h'"))
                })?;
                let terms_arr = terms_v
                    .as_array()
                    .ok_or_else(|| invalid(format!("product '{key}' must map to an array")))?;
                let mut terms = Vec::new();
                for tv in terms_arr {
                    let tobj = tv
                        .as_object()
                        .ok_or_else(|| invalid("each product term must be an object".to_string()))?;
                    let coeff = value_to_q(require(tobj, "coeff")?)?;
                    let xpow = require(tobj, "xpow")?
                        .as_u64()
                        .ok_or_else(|| invalid("\"xpow\" must be a nonnegative integer".to_string()))?
                        as u32;
                    let gen = require(tobj, "gen")?
                        .as_str()
                        .ok_or_else(|| invalid("term \"gen\" must be a generator name".to_string()))?
                        .to_string();
                    terms.push((coeff, xpow, gen));
                }
                raw_products.push(((a.to_string(), b.to_string()), terms));
            }
        }
        CircleAlgebra::new(gens, unit, raw_products)
    }

    /// Serialize back to the input form (products stored with i ≤ j).
    pub fn to_json(&self) -> Value {
        let gens: Vec<Value> = self
            .gens
            .iter()
            .map(|g| match g.torsion {
                None => json!({"name": g.name, "degree": g.degree}),
                Some(k) => json!({"name": g.name, "degree": g.degree, "torsion": k}),
            })
            .collect();
        let mut products = serde_json::Map::new();
        for ((i, j), terms) in &self.products {
            let key = format!("{}*{}", self.gens[*i].name, self.gens[*j].name);
            let terms_v: Vec<Value> = terms
                .iter()
                .map(|t| {
                    json!({
                        "coeff": format_q(&t.coeff),
                        "xpow": t.xpow,
                        "gen": self.gens[t.gen].name,
                    })
                })
                .collect();
            products.insert(key, Value::Array(terms_v));
        }
        let mut out = serde_json::Map::new();
        out.insert("generators".to_string(), Value::Array(gens));
        if let Some(u) = self.unit {
            out.insert("unit".to_string(), Value::String(self.gens[u].name.clone()));
        }
        out.insert("products".to_string(), Value::Object(products));
        Value::Object(out)
    }

    // -- graded pieces ------------------------------------------------------

    fn degree_zero_gens(&self) -> Vec<usize> {
        (0..self.gens.len()).filter(|&i| self.gens[i].degree == 0).collect()
    }

    /// The degree-0 part as a finite commutative algebra over the rationals.
    fn degree_zero_algebra(&self) -> TfResult<FiniteCommAlgebra> {
        let basis = self.degree_zero_gens();
        let names: Vec<String> = basis.iter().map(|&i| self.gens[i].name.clone()).collect();
        let pos: BTreeMap<usize, usize> =
            basis.iter().enumerate().map(|(k, &i)| (i, k)).collect();
        let dim = basis.len();
        let mut mult = vec![vec![vec![q0(); dim]; dim]; dim];
        for (a, &i) in basis.iter().enumerate() {
            for (b, &j) in basis.iter().enumerate() {
                for t in self.product_terms(i, j) {
                    if t.xpow == 0 {
                        if let Some(&k) = pos.get(&t.gen) {
                            mult[a][b][k] = &mult[a][b][k] + &t.coeff;
                        }
                    }
                }
            }
        }
        let mut unit = vec![q0(); dim];
        if let Some(u) = self.unit {
            let k = *pos
                .get(&u)
                .ok_or_else(|| internal("unit escaped the degree-0 part".to_string()))?;
            unit[k] = q1();
        }
        FiniteCommAlgebra::new(names, mult, unit)
    }

    /// Basis of the degree-`d` graded piece as `(gen, xpow)` pairs.
    fn degree_basis(&self, d: u32) -> Vec<(usize, u32)> {
        let mut out = Vec::new();
        for (i, g) in self.gens.iter().enumerate() {
            if g.degree > d || (d - g.degree) % 2 != 0 {
                continue;
            }
            let m = (d - g.degree) / 2;
            if self.torsion_of(i).map_or(true, |k| m < k) {
                out.push((i, m));
            }
        }
        out
    }

    // -- classification pipeline -------------------------------------------

    /// Full classification: hypothesis checks, localization, splitting.
    pub fn classify(&self) -> TfResult<CircleReport> {
        self.validate()?;
        if self.gens.is_empty() {
            return Ok(CircleReport {
                verdict: CircleVerdict::Realizable { rank: 0, idempotents: Vec::new() },
                localized_basis: Vec::new(),
            });
        }
        // degree-0 part must split as a product of rationals
        let a0 = self.degree_zero_algebra()?;
        match a0.split_semisimple_test()? {
            SplitVerdict::Split { .. } => {}
            SplitVerdict::Nilpotents { witness } => {
                return Ok(CircleReport {
                    verdict: CircleVerdict::HypothesisViolated {
                        violation: Violation::NotSpacelike {
                            detail: format!(
                                "nilpotent element {}",
                                render_combo(&witness, a0.names())
                            ),
                        },
                    },
                    localized_basis: Vec::new(),
                });
            }
            SplitVerdict::FieldExtension { minpoly } => {
                return Ok(CircleReport {
                    verdict: CircleVerdict::HypothesisViolated {
                        violation: Violation::NotSpacelike {
                            detail: format!("field extension {}", render_minpoly(&minpoly)),
                        },
                    },
                    localized_basis: Vec::new(),
                });
            }
        }
        // nothing may live in degree 1
        if let Some((g, _)) = self.degree_basis(1).first() {
            return Ok(CircleReport {
                verdict: CircleVerdict::HypothesisViolated {
                    violation: Violation::A1Nonzero {
                        witness: self.gens[*g].name.clone(),
                    },
                },
                localized_basis: Vec::new(),
            });
        }
        // multiplication by x must embed degree 0 into degree 2
        let d0 = self.degree_zero_gens();
        let d2 = self.degree_basis(2);
        let pos2: BTreeMap<(usize, u32), usize> =
            d2.iter().enumerate().map(|(k, &p)| (p, k)).collect();
        let mut rows = SparseMat::new(d0.len());
        for r in 0..d2.len() {
            let mut row = crate::linalg::SparseRow::new();
            for (c, &g) in d0.iter().enumerate() {
                let img = self.mul_by_x(&self.gen_elem(g), 1);
                for ((gi, mi), coeff) in &img {
                    if pos2.get(&(*gi, *mi)) == Some(&r) {
                        row.insert(c, coeff.clone());
                    }
                }
            }
            rows.push_row(row);
        }
        if let Some(v) = rows.kernel_basis().first() {
            let names: Vec<String> =
                d0.iter().map(|&g| self.gens[g].name.clone()).collect();
            return Ok(CircleReport {
                verdict: CircleVerdict::HypothesisViolated {
                    violation: Violation::A0A2NotInjective {
                        witness: render_combo(v, &names),
                    },
                },
                localized_basis: Vec::new(),
            });
        }
        // localize: torsion dies; odd free generators become nilpotent
        let mut free_even = Vec::new();
        for (i, g) in self.gens.iter().enumerate() {
            if g.torsion.is_some() {
                continue;
            }
            if g.degree % 2 == 1 {
                return Ok(CircleReport {
                    verdict: CircleVerdict::HypothesisViolated {
                        violation: Violation::NilpotentsInLocalization {
                            witness: g.name.clone(),
                        },
                    },
                    localized_basis: Vec::new(),
                });
            }
            free_even.push(i);
        }
        let names: Vec<String> = free_even
            .iter()
            .map(|&i| localized_name(&self.gens[i].name, self.gens[i].degree / 2))
            .collect();
        let pos: BTreeMap<usize, usize> =
            free_even.iter().enumerate().map(|(k, &i)| (i, k)).collect();
        let dim = free_even.len();
        let mut mult = vec![vec![vec![q0(); dim]; dim]; dim];
        for (a, &i) in free_even.iter().enumerate() {
            for (b, &j) in free_even.iter().enumerate() {
                for t in self.product_terms(i, j) {
                    if let Some(&k) = pos.get(&t.gen) {
                        mult[a][b][k] = &mult[a][b][k] + &t.coeff;
                    }
                }
            }
        }
        let mut unit = vec![q0(); dim];
        if let Some(u) = self.unit {
            match pos.get(&u) {
                Some(&k) => unit[k] = q1(),
                None => {
                    // torsion unit: the localization is the zero ring
                    return Ok(CircleReport {
                        verdict: CircleVerdict::Realizable { rank: 0, idempotents: Vec::new() },
                        localized_basis: Vec::new(),
                    });
                }
            }
        }
        if dim == 0 {
            return Ok(CircleReport {
                verdict: CircleVerdict::Realizable { rank: 0, idempotents: Vec::new() },
                localized_basis: Vec::new(),
            });
        }
        let b = FiniteCommAlgebra::new(names.clone(), mult, unit)?;
        let verdict = match b.split_semisimple_test()? {
            SplitVerdict::Split { rank, idempotents } => {
                let mut rendered: Vec<String> =
                    idempotents.iter().map(|v| render_combo(v, &names)).collect();
                rendered.sort();
                CircleVerdict::Realizable { rank, idempotents: rendered }
            }
            SplitVerdict::Nilpotents { witness } => CircleVerdict::HypothesisViolated {
                violation: Violation::NilpotentsInLocalization {
                    witness: render_combo(&witness, &names),
                },
            },
            SplitVerdict::FieldExtension { minpoly } => {
                CircleVerdict::NotRealizable { minpoly: render_minpoly(&minpoly) }
            }
        };
        Ok(CircleReport { verdict, localized_basis: names })
    }
}

fn sign_adjust(gens: &[CircleGen], i: usize, j: usize, terms: Vec<ProductTerm>) -> Vec<ProductTerm> {
    let sign_flip = gens[i].degree % 2 == 1 && gens[j].degree % 2 == 1;
    if !sign_flip {
        return terms;
    }
    terms
        .into_iter()
        .map(|t| ProductTerm { coeff: -t.coeff, ..t })
        .collect()
}

fn normalize_terms(terms: &[ProductTerm]) -> BTreeMap<(usize, u32), Q> {
    let mut out: BTreeMap<(usize, u32), Q> = BTreeMap::new();
    for t in terms {
        let entry = out.entry((t.gen, t.xpow)).or_insert_with(q0);
        *entry += &t.coeff;
        if entry.is_zero() {
            out.remove(&(t.gen, t.xpow));
        }
    }
    out
}

fn localized_name(name: &str, halfdeg: u32) -> String {
    match halfdeg {
        0 => name.to_string(),
        1 => format!("{name}/x"),
        k => format!("{name}/x^{k}"),
    }
}

/// The family of two-generator algebras with `a · a = c · x² · unit`.
pub fn mk_ac(c: &Q) -> CircleAlgebra {
    CircleAlgebra::new(
        vec![
            CircleGen { name: "one".to_string(), degree: 0, torsion: None },
            CircleGen { name: "a".to_string(), degree: 2, torsion: None },
        ],
        Some("one"),
        vec![(
            ("a".to_string(), "a".to_string()),
            vec![(c.clone(), 2, "one".to_string())],
        )],
    )
    .expect("family presentation is valid")
}

// ---------------------------------------------------------------------------
// finite commutative algebras and the splitting test
// ---------------------------------------------------------------------------

/// A finite-dimensional commutative unital algebra over the rationals,
/// given by a basis with names, a multiplication table and unit coordinates.
#[derive(Clone, Debug)]
pub struct FiniteCommAlgebra {
    names: Vec<String>,
    /// mult[i][j] = coordinates of basis_i · basis_j
    mult: Vec<Vec<Vec<Q>>>,
    unit: Vec<Q>,
}

/// Outcome of the product-of-rationals splitting test.
#[derive(Clone, Debug)]
pub enum SplitVerdict {
    /// Product of `rank` copies of the rationals, with the primitive
    /// orthogonal idempotents in basis coordinates.
    Split { rank: usize, idempotents: Vec<Vec<Q>> },
    /// Radical element (trace-form kernel vector) in basis coordinates.
    Nilpotents { witness: Vec<Q> },
    /// Minimal polynomial (monic, ascending coefficients) of an element
    /// with no rational eigenvalue.
    FieldExtension { minpoly: Vec<Q> },
}

struct Block {
    basis: Vec<Vec<Q>>,
    unit: Vec<Q>,
}

impl FiniteCommAlgebra {
    pub fn new(names: Vec<String>, mult: Vec<Vec<Vec<Q>>>, unit: Vec<Q>) -> TfResult<FiniteCommAlgebra> {
        let dim = names.len();
        if mult.len() != dim
            || mult.iter().any(|r| r.len() != dim || r.iter().any(|v| v.len() != dim))
            || unit.len() != dim
        {
            return Err(invalid("multiplication table shape mismatch".to_string()));
        }
        Ok(FiniteCommAlgebra { names, mult, unit })
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn unit(&self) -> &[Q] {
        &self.unit
    }

    /// Product of two coordinate vectors.
    pub fn mul(&self, a: &[Q], b: &[Q]) -> Vec<Q> {
        let dim = self.dim();
        let mut out = vec![q0(); dim];
        for i in 0..dim {
            if a[i].is_zero() {
                continue;
            }
            for j in 0..dim {
                if b[j].is_zero() {
                    continue;
                }
                let c = &a[i] * &b[j];
                for (k, m) in self.mult[i][j].iter().enumerate() {
                    if !m.is_zero() {
                        out[k] = &out[k] + &(&c * m);
                    }
                }
            }
        }
        out
    }

    /// Matrix (rows) of left multiplication by `v` on the whole algebra.
    fn mult_matrix(&self, v: &[Q]) -> Vec<Vec<Q>> {
        let dim = self.dim();
        let mut cols = Vec::with_capacity(dim);
        for j in 0..dim {
            let mut ej = vec![q0(); dim];
            ej[j] = q1();
            cols.push(self.mul(v, &ej));
        }
        // transpose columns into rows
        (0..dim)
            .map(|r| (0..dim).map(|c| cols[c][r].clone()).collect())
            .collect()
    }

    /// Decide whether the algebra is a finite product of copies of the
    /// rationals, assuming commutativity and unitality.
    pub fn split_semisimple_test(&self) -> TfResult<SplitVerdict> {
        let dim = self.dim();
        if dim == 0 {
            return Ok(SplitVerdict::Split { rank: 0, idempotents: Vec::new() });
        }
        // radical = kernel of the trace form in characteristic zero
        let mats: Vec<Vec<Vec<Q>>> = (0..dim)
            .map(|i| {
                let mut ei = vec![q0(); dim];
                ei[i] = q1();
                self.mult_matrix(&ei)
            })
            .collect();
        let mut gram = SparseMat::new(dim);
        for i in 0..dim {
            let mut row = crate::linalg::SparseRow::new();
            for j in 0..dim {
                let mut tr = q0();
                for a in 0..dim {
                    for b in 0..dim {
                        if !mats[i][a][b].is_zero() && !mats[j][b][a].is_zero() {
                            tr += &mats[i][a][b] * &mats[j][b][a];
                        }
                    }
                }
                if !tr.is_zero() {
                    row.insert(j, tr);
                }
            }
            gram.push_row(row);
        }
        if let Some(v) = gram.kernel_basis().first() {
            return Ok(SplitVerdict::Nilpotents { witness: v.clone() });
        }
        // repeated block splitting along rational eigenvalues
        let mut queue: VecDeque<Block> = VecDeque::new();
        let eye: Vec<Vec<Q>> = (0..dim)
            .map(|i| {
                let mut v = vec![q0(); dim];
                v[i] = q1();
                v
            })
            .collect();
        queue.push_back(Block { basis: eye, unit: self.unit.clone() });
        let mut idempotents: Vec<Vec<Q>> = Vec::new();
        while let Some(block) = queue.pop_front() {
            let bdim = block.basis.len();
            if bdim == 1 {
                let u = block.unit.clone();
                let sq = self.mul(&u, &u);
                if sq != u {
                    return Err(internal("block unit fails to be idempotent".to_string()));
                }
                idempotents.push(u);
                continue;
            }
            let mut stuck: Option<Vec<Q>> = None;
            let mut split = None;
            for v in &block.basis {
                let f = self.min_poly(&block, v)?;
                if f.len() <= 2 {
                    continue;
                }
                match first_rational_root(&f) {
                    Some(lambda) => {
                        split = Some((v.clone(), f, lambda));
                        break;
                    }
                    None => {
                        if stuck.is_none() {
                            stuck = Some(f);
                        }
                    }
                }
            }
            let Some((v, f, lambda)) = split else {
                match stuck {
                    Some(f) => return Ok(SplitVerdict::FieldExtension { minpoly: f }),
                    None => {
                        return Err(internal(
                            "multi-dimensional block with only scalar elements".to_string(),
                        ))
                    }
                }
            };
            let (mult_count, quotient) = peel_root(&f, &lambda);
            // operator of v in block coordinates
            let op = self.block_operator(&block, &v)?;
            let mut shifted = op.clone();
            for (i, row) in shifted.iter_mut().enumerate() {
                row[i] = &row[i] - &lambda;
            }
            let part1 = mat_power(&shifted, mult_count);
            let part2 = mat_poly(&quotient, &op);
            let k1 = mat_kernel(&part1);
            let k2 = mat_kernel(&part2);
            if k1.len() + k2.len() != bdim || k1.is_empty() || k2.is_empty() {
                return Err(internal("eigenvalue splitting lost dimensions".to_string()));
            }
            let to_ambient = |coords: &[Q]| -> Vec<Q> {
                let mut out = vec![q0(); dim];
                for (c, b) in coords.iter().zip(&block.basis) {
                    for (k, x) in b.iter().enumerate() {
                        out[k] = &out[k] + &(c * x);
                    }
                }
                out
            };
            let amb1: Vec<Vec<Q>> = k1.iter().map(|c| to_ambient(c)).collect();
            let amb2: Vec<Vec<Q>> = k2.iter().map(|c| to_ambient(c)).collect();
            let mut joint = amb1.clone();
            joint.extend(amb2.iter().cloned());
            let rep = express_in_span(&joint, &block.unit)
                .ok_or_else(|| internal("block unit escaped its split".to_string()))?;
            let mut u1 = vec![q0(); dim];
            let mut u2 = vec![q0(); dim];
            for (i, c) in rep.iter().enumerate() {
                let target = if i < amb1.len() { &mut u1 } else { &mut u2 };
                let basis_vec = &joint[i];
                for (k, x) in basis_vec.iter().enumerate() {
                    target[k] = &target[k] + &(c * x);
                }
            }
            queue.push_back(Block { basis: amb1, unit: u1 });
            queue.push_back(Block { basis: amb2, unit: u2 });
        }
        // internal coherence: idempotents are orthogonal and sum to the unit
        let mut total = vec![q0(); dim];
        for e in &idempotents {
            for (k, x) in e.iter().enumerate() {
                total[k] = &total[k] + x;
            }
        }
        if total != self.unit {
            return Err(internal("idempotents fail to resolve the unit".to_string()));
        }
        for i in 0..idempotents.len() {
            for j in (i + 1)..idempotents.len() {
                if self.mul(&idempotents[i], &idempotents[j]).iter().any(|x| !x.is_zero()) {
                    return Err(internal("idempotents fail orthogonality".to_string()));
                }
            }
        }
        idempotents.sort();
        Ok(SplitVerdict::Split { rank: idempotents.len(), idempotents })
    }

    /// Minimal polynomial of `v` acting on a block, monic with ascending
    /// coefficients, via the Krylov sequence of its powers.
    fn min_poly(&self, block: &Block, v: &[Q]) -> TfResult<Vec<Q>> {
        let bdim = block.basis.len();
        let mut tracker = SpanTracker::new(bdim);
        let mut powers: Vec<Vec<Q>> = Vec::new();
        let mut cur = block.unit.clone();
        loop {
            let coords = express_in_span(&block.basis, &cur)
                .ok_or_else(|| internal("power escaped its block".to_string()))?;
            if !tracker.insert(&coords) {
                let rep = express_in_span(&powers, &coords)
                    .ok_or_else(|| internal("dependent power without representation".to_string()))?;
                let mut f: Vec<Q> = rep.iter().map(|c| -c.clone()).collect();
                f.push(q1());
                return Ok(f);
            }
            powers.push(coords);
            if powers.len() > bdim {
                return Err(internal("Krylov sequence exceeded block dimension".to_string()));
            }
            cur = self.mul(&cur, v);
        }
    }

    /// Matrix (rows) of multiplication by `v` in block coordinates.
    fn block_operator(&self, block: &Block, v: &[Q]) -> TfResult<Vec<Vec<Q>>> {
        let bdim = block.basis.len();
        let mut cols = Vec::with_capacity(bdim);
        for b in &block.basis {
            let img = self.mul(v, b);
            let coords = express_in_span(&block.basis, &img)
                .ok_or_else(|| internal("block not closed under multiplication".to_string()))?;
            cols.push(coords);
        }
        Ok((0..bdim)
            .map(|r| (0..bdim).map(|c| cols[c][r].clone()).collect())
            .collect())
    }
}

// dense matrix helpers for the splitting step ------------------------------

fn mat_mul(a: &[Vec<Q>], b: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let n = a.len();
    let mut out = vec![vec![q0(); n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                if !b[k][j].is_zero() {
                    out[i][j] = &out[i][j] + &(&a[i][k] * &b[k][j]);
                }
            }
        }
    }
    out
}

fn mat_identity(n: usize) -> Vec<Vec<Q>> {
    (0..n)
        .map(|i| {
            let mut row = vec![q0(); n];
            row[i] = q1();
            row
        })
        .collect()
}

fn mat_power(m: &[Vec<Q>], e: u32) -> Vec<Vec<Q>> {
    let mut out = mat_identity(m.len());
    for _ in 0..e {
        out = mat_mul(&out, m);
    }
    out
}

/// Evaluate a polynomial (ascending coefficients) on a matrix.
fn mat_poly(f: &[Q], m: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let n = m.len();
    let mut out = vec![vec![q0(); n]; n];
    let mut pw = mat_identity(n);
    for (k, c) in f.iter().enumerate() {
        if !c.is_zero() {
            for i in 0..n {
                for j in 0..n {
                    out[i][j] = &out[i][j] + &(c * &pw[i][j]);
                }
            }
        }
        if k + 1 < f.len() {
            pw = mat_mul(&pw, m);
        }
    }
    out
}

fn mat_kernel(m: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let n = m.len();
    let mut sm = SparseMat::new(n);
    for row in m {
        sm.push_dense_row(row);
    }
    sm.kernel_basis()
}

/// Factor out `(t - lambda)` from `f` as often as it divides exactly;
/// returns the multiplicity and the cofactor.
fn peel_root(f: &[Q], lambda: &Q) -> (u32, Vec<Q>) {
    let mut cur = f.to_vec();
    let mut mult = 0;
    loop {
        // synthetic division by (t - lambda): ascending coefficients
        let n = cur.len();
        if n < 2 {
            break;
        }
        let mut quo = vec![q0(); n - 1];
        let mut carry = q0();
        for k in (0..n - 1).rev() {
            let c = &cur[k + 1] + &(&carry * lambda);
            quo[k] = c.clone();
            carry = c;
        }
        let rem = &cur[0] + &(&carry * lambda);
        if !rem.is_zero() {
            break;
        }
        cur = quo;
        mult += 1;
    }
    (mult, cur)
}

/// First rational root of a monic rational polynomial (ascending
/// coefficients), in a deterministic candidate order.
pub fn first_rational_root(f: &[Q]) -> Option<Q> {
    if f.len() < 2 {
        return None;
    }
    if f[0].is_zero() {
        return Some(q0());
    }
    // clear denominators to an integer polynomial
    let mut lcm = BigInt::one();
    for c in f {
        lcm = lcm.lcm(c.denom());
    }
    let int_coeffs: Vec<BigInt> = f.iter().map(|c| (c * Q::from_integer(lcm.clone())).to_integer()).collect();
    let lead = int_coeffs.last().unwrap().abs();
    let cons = int_coeffs[0].abs();
    let ps = divisors(&cons);
    let qs = divisors(&lead);
    let mut candidates: Vec<Q> = Vec::new();
    for q in &qs {
        for p in &ps {
            let r = Q::new(p.clone(), q.clone());
            if !candidates.contains(&r) {
                candidates.push(r.clone());
                candidates.push(-r);
            }
        }
    }
    candidates.sort_by(|a, b| {
        (a.denom().clone(), a.numer().abs(), a.numer().is_negative())
            .cmp(&(b.denom().clone(), b.numer().abs(), b.numer().is_negative()))
    });
    candidates.dedup();
    for cand in candidates {
        // Horner evaluation
        let mut acc = q0();
        for c in f.iter().rev() {
            acc = &(&acc * &cand) + c;
        }
        if acc.is_zero() {
            return Some(cand);
        }
    }
    None
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    if n.is_zero() {
        return vec![BigInt::one()];
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            small.push(d.clone());
            let q = &n / &d;
            if q != d {
                large.push(q);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

// ---------------------------------------------------------------------------
// rendering
// ---------------------------------------------------------------------------

/// Render a coordinate vector as a signed combination of named basis
/// elements, e.g. `1/2·one + 1/2·a/x`.
pub fn render_combo(coeffs: &[Q], names: &[String]) -> String {
    let mut out = String::new();
    for (c, name) in coeffs.iter().zip(names) {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let mag = c.abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if mag.is_one() {
            out.push_str(name);
        } else {
            out.push_str(&format!("{}·{}", format_q(&mag), name));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Render a monic polynomial in `t` (ascending coefficients) compactly,
/// e.g. `t^2-2`; non-constant rational coefficients are parenthesized.
pub fn render_minpoly(f: &[Q]) -> String {
    let deg = f.len().saturating_sub(1);
    let mut out = String::new();
    for k in (0..=deg).rev() {
        let c = &f[k];
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let mag = c.abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push(if neg { '-' } else { '+' });
        }
        let var = match k {
            0 => String::new(),
            1 => "t".to_string(),
            _ => format!("t^{k}"),
        };
        if k == 0 {
            out.push_str(&format_q(&mag));
        } else if mag.is_one() {
            out.push_str(&var);
        } else if mag.denom().is_one() {
            out.push_str(&format!("{}{}", format_q(&mag), var));
        } else {
            out.push_str(&format!("({}){}", format_q(&mag), var));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

// ---------------------------------------------------------------------------
// report
// ---------------------------------------------------------------------------

/// Structural hypothesis the classification relies on, with a witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NotSpacelike { detail: String },
    A1Nonzero { witness: String },
    A0A2NotInjective { witness: String },
    NilpotentsInLocalization { witness: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CircleVerdict {
    Realizable { rank: usize, idempotents: Vec<String> },
    NotRealizable { minpoly: String },
    HypothesisViolated { violation: Violation },
}

#[derive(Clone, Debug)]
pub struct CircleReport {
    pub verdict: CircleVerdict,
    /// Basis names of the degree-0 localized algebra when it was formed.
    pub localized_basis: Vec<String>,
}

impl CircleReport {
    pub fn to_json(&self) -> Value {
        let verdict = match &self.verdict {
            CircleVerdict::Realizable { rank, idempotents } => json!({
                "status": "realizable",
                "rank": rank,
                "idempotents": idempotents,
            }),
            CircleVerdict::NotRealizable { minpoly } => json!({
                "status": "not-realizable",
                "minpoly": minpoly,
            }),
            CircleVerdict::HypothesisViolated { violation } => {
                let v = match violation {
                    Violation::NotSpacelike { detail } => {
                        json!({"kind": "not-spacelike", "detail": detail})
                    }
                    Violation::A1Nonzero { witness } => {
                        json!({"kind": "degree-one-nonzero", "witness": witness})
                    }
                    Violation::A0A2NotInjective { witness } => {
                        json!({"kind": "degree-zero-to-two-not-injective", "witness": witness})
                    }
                    Violation::NilpotentsInLocalization { witness } => {
                        json!({"kind": "nilpotents-in-localization", "witness": witness})
                    }
                };
                json!({"status": "hypothesis-violated", "violation": v})
            }
        };
        json!({
            "schema": SCHEMA,
            "verdict": verdict,
            "localized_basis": self.localized_basis,
        })
    }

    pub fn to_text(&self) -> String {
        match &self.verdict {
            CircleVerdict::Realizable { rank, idempotents } => {
                let mut out = format!("realizable: true\nrank: {rank}\n");
                for e in idempotents {
                    out.push_str(&format!("idempotent: {e}\n"));
                }
                out
            }
            CircleVerdict::NotRealizable { minpoly } => {
                format!("realizable: false\nnot realizable: field extension {minpoly}\n")
            }
            CircleVerdict::HypothesisViolated { violation } => match violation {
                Violation::NotSpacelike { detail } => {
                    format!("hypothesis violated: degree-0 part not split ({detail})\n")
                }
                Violation::A1Nonzero { witness } => {
                    format!("hypothesis violated: degree-1 part nonzero (witness: {witness})\n")
                }
                Violation::A0A2NotInjective { witness } => format!(
                    "hypothesis violated: x-multiplication not injective in degree 0 (witness: {witness})\n"
                ),
                Violation::NilpotentsInLocalization { witness } => format!(
                    "hypothesis violated: nilpotents in localization (witness: {witness})\n"
                ),
            },
        }
    }
}
