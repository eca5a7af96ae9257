//! Finite products of free graded-commutative differential algebras.
//!
//! An algebra is a finite product of factors, each free on named generators
//! of degree at least 1 (odd generators square to zero, even ones
//! polynomial). Elements are tuples of signed monomial sums, products use
//! the Koszul sign rule, and differentials are degree `+1` derivations given
//! on generators and extended by the graded Leibniz rule. Morphisms route
//! each target factor through exactly one source factor and substitute
//! generator images. Cohomology is computed degreewise with cached bases
//! and canonical reduction onto chosen representative lifts.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{internal, invalid, TfResult};
use crate::jsonutil::{as_object, require, value_to_q};
use crate::linalg::{express_in_span, SparseMat, SparseRow, SpanTracker};
use crate::scalar::{format_q, q0, q1, Q};

/// One generator of a free factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CdgaGen {
    pub name: String,
    pub degree: u32,
}

/// Exponent vector over the generators of one factor.
pub type FExpo = Vec<u32>;

/// Signed monomial sum inside one factor.
pub type FactorElem = BTreeMap<FExpo, Q>;

/// Element of the product algebra: one component per factor.
pub type CdgaElem = Vec<FactorElem>;

/// A free graded-commutative factor with its differential.
#[derive(Clone, Debug)]
pub struct Factor {
    pub gens: Vec<CdgaGen>,
    /// differential of each generator (an element of this factor)
    pub diff: Vec<FactorElem>,
}

/// A finite product of free factors; the empty product is the zero algebra.
#[derive(Clone, Debug)]
pub struct CdgaPresentation {
    pub factors: Vec<Factor>,
}

impl Factor {
    fn mono_degree(&self, e: &FExpo) -> u32 {
        e.iter().zip(&self.gens).map(|(x, g)| x * g.degree).sum()
    }

    fn elem_degree(&self, elem: &FactorElem) -> TfResult<Option<u32>> {
        let mut deg = None;
        for e in elem.keys() {
            let d = self.mono_degree(e);
            match deg {
                None => deg = Some(d),
                Some(d0) if d0 != d => {
                    return Err(invalid("inhomogeneous factor element".to_string()))
                }
                _ => {}
            }
        }
        Ok(deg)
    }

    /// Product of two monomials with the Koszul sign; `None` when an odd
    /// generator would appear squared.
    fn mono_mul(&self, a: &FExpo, b: &FExpo) -> Option<(FExpo, i32)> {
        let mut out = Vec::with_capacity(a.len());
        let mut sign = 1i32;
        // count sign: each odd b_i moves past the odd a_j with j > i
        let odd: Vec<bool> = self.gens.iter().map(|g| g.degree % 2 == 1).collect();
        for i in 0..a.len() {
            let s = a[i] + b[i];
            if odd[i] && s > 1 {
                return None;
            }
            out.push(s);
        }
        for i in 0..a.len() {
            if !odd[i] || b[i] == 0 {
                continue;
            }
            let crossings: u32 = (i + 1..a.len())
                .filter(|&j| odd[j])
                .map(|j| a[j])
                .sum();
            if crossings % 2 == 1 {
                sign = -sign;
            }
        }
        Some((out, sign))
    }

    fn elem_mul(&self, a: &FactorElem, b: &FactorElem) -> FactorElem {
        let mut out = FactorElem::new();
        for (ea, ca) in a {
            for (eb, cb) in b {
                if let Some((e, sign)) = self.mono_mul(ea, eb) {
                    let mut c = ca * cb;
                    if sign < 0 {
                        c = -c;
                    }
                    let entry = out.entry(e.clone()).or_insert_with(q0);
                    *entry += &c;
                    if entry.is_zero() {
                        out.remove(&e);
                    }
                }
            }
        }
        out
    }

    fn elem_pow(&self, a: &FactorElem, e: u32) -> FactorElem {
        let mut out = FactorElem::new();
        out.insert(vec![0; self.gens.len()], q1());
        for _ in 0..e {
            out = self.elem_mul(&out, a);
        }
        out
    }

    /// Differential of a monomial by the graded Leibniz rule.
    fn d_mono(&self, expo: &FExpo) -> FactorElem {
        let Some(i) = expo.iter().position(|&e| e > 0) else {
            return FactorElem::new();
        };
        let e = expo[i];
        let mut rest = expo.clone();
        rest[i] = 0;
        // e · g^{e-1} · dg · rest
        let mut gpow = vec![0; self.gens.len()];
        gpow[i] = e - 1;
        let mut gpow_elem = FactorElem::new();
        gpow_elem.insert(gpow, Q::from_integer(e.into()));
        let mut term1 = self.elem_mul(&gpow_elem, &self.diff[i]);
        let mut rest_elem = FactorElem::new();
        rest_elem.insert(rest.clone(), q1());
        term1 = self.elem_mul(&term1, &rest_elem);
        // (−1)^{e·|g|} · g^e · d(rest)
        let mut head = FactorElem::new();
        let mut head_expo = vec![0; self.gens.len()];
        head_expo[i] = e;
        let sign = if (e * self.gens[i].degree) % 2 == 1 { -q1() } else { q1() };
        head.insert(head_expo, sign);
        let term2 = self.elem_mul(&head, &self.d_elem(&self.d_source(&rest)));
        add_into(&mut term1, &term2);
        term1
    }

    fn d_source(&self, expo: &FExpo) -> FactorElem {
        let mut e = FactorElem::new();
        e.insert(expo.clone(), q1());
        e
    }

    fn d_elem(&self, elem: &FactorElem) -> FactorElem {
        let mut out = FactorElem::new();
        for (e, c) in elem {
            let de = self.d_mono(e);
            for (m, x) in de {
                let entry = out.entry(m.clone()).or_insert_with(q0);
                *entry += c * &x;
                if entry.is_zero() {
                    out.remove(&m);
                }
            }
        }
        out
    }

    /// Exponent vectors of all degree-`k` monomials, in lexicographic order.
    fn monomials(&self, k: u32) -> Vec<FExpo> {
        let mut out = Vec::new();
        let mut cur = vec![0u32; self.gens.len()];
        self.enumerate(0, k, &mut cur, &mut out);
        out
    }

    fn enumerate(&self, i: usize, remaining: u32, cur: &mut FExpo, out: &mut Vec<FExpo>) {
        if i == self.gens.len() {
            if remaining == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let g = &self.gens[i];
        let max = if g.degree % 2 == 1 { 1 } else { remaining / g.degree };
        for e in 0..=max {
            if e * g.degree > remaining {
                break;
            }
            cur[i] = e;
            self.enumerate(i + 1, remaining - e * g.degree, cur, out);
        }
        cur[i] = 0;
    }

    fn render_mono(&self, e: &FExpo) -> String {
        let mut parts = Vec::new();
        for (x, g) in e.iter().zip(&self.gens) {
            match x {
                0 => {}
                1 => parts.push(g.name.clone()),
                _ => parts.push(format!("{}^{}", g.name, x)),
            }
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("·")
        }
    }

    fn render_elem(&self, elem: &FactorElem) -> String {
        if elem.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (e, c) in elem.iter().rev() {
            let neg = c.is_negative();
            let mag = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = self.render_mono(e);
            if mag.is_one() {
                out.push_str(&mono);
            } else if mono == "1" {
                out.push_str(&format_q(&mag));
            } else {
                out.push_str(&format!("{}·{}", format_q(&mag), mono));
            }
        }
        out
    }
}

fn add_into(target: &mut FactorElem, other: &FactorElem) {
    for (e, c) in other {
        let entry = target.entry(e.clone()).or_insert_with(q0);
        *entry += c;
        if entry.is_zero() {
            target.remove(e);
        }
    }
}

impl CdgaPresentation {
    /// Validated constructor: generator degrees at least 1, names unique
    /// within each factor, homogeneous differentials of degree `+1` with
    /// `d² = 0` on generators.
    pub fn new(factors: Vec<Factor>) -> TfResult<CdgaPresentation> {
        for (fi, f) in factors.iter().enumerate() {
            let mut seen = std::collections::BTreeSet::new();
            for g in &f.gens {
                if g.name.is_empty() {
                    return Err(invalid(format!("factor {fi} has an unnamed generator")));
                }
                if g.degree == 0 {
                    return Err(invalid(format!(
                        "generator '{}' has degree 0; factors are connected",
                        g.name
                    )));
                }
                if !seen.insert(g.name.clone()) {
                    return Err(invalid(format!(
                        "factor {fi} repeats generator name '{}'",
                        g.name
                    )));
                }
            }
            if f.diff.len() != f.gens.len() {
                return Err(invalid(format!(
                    "factor {fi} needs one differential per generator"
                )));
            }
            for (g, dg) in f.gens.iter().zip(&f.diff) {
                for e in dg.keys() {
                    if e.len() != f.gens.len() {
                        return Err(invalid(format!(
                            "differential of '{}' has a malformed monomial",
                            g.name
                        )));
                    }
                }
                if let Some(dd) = f.elem_degree(dg)? {
                    if dd != g.degree + 1 {
                        return Err(invalid(format!(
                            "differential of '{}' has degree {dd}, expected {}",
                            g.name,
                            g.degree + 1
                        )));
                    }
                }
            }
            for (g, dg) in f.gens.iter().zip(&f.diff) {
                if !f.d_elem(dg).is_empty() {
                    return Err(invalid(format!(
                        "differential squared is nonzero on generator '{}'",
                        g.name
                    )));
                }
            }
        }
        Ok(CdgaPresentation { factors })
    }

    /// The rational numbers as a one-factor algebra with no generators.
    pub fn rationals() -> CdgaPresentation {
        CdgaPresentation {
            factors: vec![Factor { gens: Vec::new(), diff: Vec::new() }],
        }
    }

    /// The zero algebra (empty product).
    pub fn zero() -> CdgaPresentation {
        CdgaPresentation { factors: Vec::new() }
    }

    pub fn zero_elem(&self) -> CdgaElem {
        vec![FactorElem::new(); self.factors.len()]
    }

    pub fn elem_add(&self, a: &CdgaElem, b: &CdgaElem) -> CdgaElem {
        let mut out = a.clone();
        for (t, o) in out.iter_mut().zip(b) {
            add_into(t, o);
        }
        out
    }

    pub fn elem_scale(&self, a: &CdgaElem, c: &Q) -> CdgaElem {
        a.iter()
            .map(|f| {
                f.iter()
                    .filter_map(|(e, x)| {
                        let y = x * c;
                        if y.is_zero() {
                            None
                        } else {
                            Some((e.clone(), y))
                        }
                    })
                    .collect()
            })
            .collect()
    }

    pub fn elem_mul(&self, a: &CdgaElem, b: &CdgaElem) -> CdgaElem {
        self.factors
            .iter()
            .zip(a.iter().zip(b))
            .map(|(f, (x, y))| f.elem_mul(x, y))
            .collect()
    }

    pub fn d(&self, a: &CdgaElem) -> CdgaElem {
        self.factors
            .iter()
            .zip(a)
            .map(|(f, x)| f.d_elem(x))
            .collect()
    }

    /// Homogeneous degree of an element (`None` for zero).
    pub fn elem_degree(&self, a: &CdgaElem) -> TfResult<Option<u32>> {
        let mut deg = None;
        for (f, x) in self.factors.iter().zip(a) {
            if let Some(d) = f.elem_degree(x)? {
                match deg {
                    None => deg = Some(d),
                    Some(d0) if d0 != d => {
                        return Err(invalid("inhomogeneous element".to_string()))
                    }
                    _ => {}
                }
            }
        }
        Ok(deg)
    }

    /// Render an element; multi-factor tuples are parenthesized.
    pub fn render_elem(&self, a: &CdgaElem) -> String {
        match self.factors.len() {
            0 => "0".to_string(),
            1 => self.factors[0].render_elem(&a[0]),
            _ => {
                let parts: Vec<String> = self
                    .factors
                    .iter()
                    .zip(a)
                    .map(|(f, x)| f.render_elem(x))
                    .collect();
                format!("({})", parts.join(", "))
            }
        }
    }

    /// Parse `{"factors": [{"gens": [{"name","degree"}…],
    /// "diff": {"name": {expo: coeff, …}, …}}…]}`.
    pub fn from_json(v: &Value) -> TfResult<CdgaPresentation> {
        let obj = as_object(v)?;
        let factors_v = require(obj, "factors")?
            .as_array()
            .ok_or_else(|| invalid("\"factors\" must be an array".to_string()))?;
        let mut factors = Vec::new();
        for fv in factors_v {
            let fobj = fv
                .as_object()
                .ok_or_else(|| invalid("each factor must be an object".to_string()))?;
            let gens_v = require(fobj, "gens")?
                .as_array()
                .ok_or_else(|| invalid("\"gens\" must be an array".to_string()))?;
            let mut gens = Vec::new();
            for gv in gens_v {
                let gobj = gv
                    .as_object()
                    .ok_or_else(|| invalid("each generator must be an object".to_string()))?;
                let name = require(gobj, "name")?
                    .as_str()
                    .ok_or_else(|| invalid("generator name must be a string".to_string()))?
                    .to_string();
                let degree = require(gobj, "degree")?
                    .as_u64()
                    .ok_or_else(|| invalid("generator degree must be an integer".to_string()))?
                    as u32;
                gens.push(CdgaGen { name, degree });
            }
            let mut diff = vec![FactorElem::new(); gens.len()];
            if let Some(dv) = fobj.get("diff") {
                let dobj = dv
                    .as_object()
                    .ok_or_else(|| invalid("\"diff\" must be an object".to_string()))?;
                for (name, ev) in dobj {
                    let gi = gens
                        .iter()
                        .position(|g| &g.name == name)
                        .ok_or_else(|| invalid(format!("diff names unknown generator '{name}'")))?;
                    diff[gi] = parse_factor_elem(ev, gens.len())?;
                }
            }
            factors.push(Factor { gens, diff });
        }
        CdgaPresentation::new(factors)
    }

    pub fn to_json(&self) -> Value {
        let factors: Vec<Value> = self
            .factors
            .iter()
            .map(|f| {
                let gens: Vec<Value> = f
                    .gens
                    .iter()
                    .map(|g| json!({"name": g.name, "degree": g.degree}))
                    .collect();
                let mut diff = serde_json::Map::new();
                for (g, dg) in f.gens.iter().zip(&f.diff) {
                    if !dg.is_empty() {
                        diff.insert(g.name.clone(), factor_elem_to_json(dg));
                    }
                }
                json!({"gens": gens, "diff": Value::Object(diff)})
            })
            .collect();
        json!({"factors": factors})
    }
}

/// Parse a one-factor element `{"e1,e2,…": "coeff", …}`.
pub fn parse_factor_elem(v: &Value, ngens: usize) -> TfResult<FactorElem> {
    let obj = v
        .as_object()
        .ok_or_else(|| invalid("factor element must be an object".to_string()))?;
    let mut out = FactorElem::new();
    for (key, cv) in obj {
        let expo: FExpo = if key.is_empty() {
            Vec::new()
        } else {
            key.split(',')
                .map(|s| {
                    s.trim()
                        .parse::<u32>()
                        .map_err(|_| invalid(format!("bad exponent '{s}' in '{key}'")))
                })
                .collect::<TfResult<_>>()?
        };
        if expo.len() != ngens {
            return Err(invalid(format!(
                "monomial '{key}' has {} exponents, expected {ngens}",
                expo.len()
            )));
        }
        let c = value_to_q(cv)?;
        if !c.is_zero() {
            out.insert(expo, c);
        }
    }
    Ok(out)
}

pub fn factor_elem_to_json(e: &FactorElem) -> Value {
    let mut obj = serde_json::Map::new();
    for (expo, c) in e {
        let key: Vec<String> = expo.iter().map(|x| x.to_string()).collect();
        obj.insert(key.join(","), Value::String(format_q(c)));
    }
    Value::Object(obj)
}

/// Parse a full element: array with one object per factor, or a single
/// object for one-factor algebras.
pub fn parse_elem(v: &Value, alg: &CdgaPresentation) -> TfResult<CdgaElem> {
    match v {
        Value::Array(parts) => {
            if parts.len() != alg.factors.len() {
                return Err(invalid(format!(
                    "element has {} components, expected {}",
                    parts.len(),
                    alg.factors.len()
                )));
            }
            parts
                .iter()
                .zip(&alg.factors)
                .map(|(p, f)| parse_factor_elem(p, f.gens.len()))
                .collect()
        }
        Value::Object(_) if alg.factors.len() == 1 => {
            Ok(vec![parse_factor_elem(v, alg.factors[0].gens.len())?])
        }
        _ => Err(invalid("element must be an array of factor components".to_string())),
    }
}

pub fn elem_to_json(e: &CdgaElem) -> Value {
    Value::Array(e.iter().map(factor_elem_to_json).collect())
}

// ---------------------------------------------------------------------------
// morphisms
// ---------------------------------------------------------------------------

/// Map into one target factor: the source factor it pulls from and the
/// image of each of that factor's generators.
#[derive(Clone, Debug)]
pub struct FactorMap {
    pub source_factor: usize,
    pub images: Vec<FactorElem>,
}

/// Algebra morphism between products: one routed factor map per target
/// factor (an empty list is the map into the zero algebra).
#[derive(Clone, Debug)]
pub struct CdgaMorphism {
    pub maps: Vec<FactorMap>,
}

impl CdgaMorphism {
    pub fn identity(alg: &CdgaPresentation) -> CdgaMorphism {
        let maps = alg
            .factors
            .iter()
            .enumerate()
            .map(|(i, f)| FactorMap {
                source_factor: i,
                images: (0..f.gens.len())
                    .map(|g| {
                        let mut e = FactorElem::new();
                        let mut expo = vec![0; f.gens.len()];
                        expo[g] = 1;
                        e.insert(expo, q1());
                        e
                    })
                    .collect(),
            })
            .collect();
        CdgaMorphism { maps }
    }

    /// Shape-only validation: routing in range, one image per source
    /// generator, and well-formed image monomials. Enough to make `apply`
    /// and `compose` safe; says nothing about degrees or differentials.
    pub fn validate_shape(
        &self,
        source: &CdgaPresentation,
        target: &CdgaPresentation,
    ) -> TfResult<()> {
        if self.maps.len() != target.factors.len() {
            return Err(invalid(format!(
                "morphism has {} factor maps, target has {} factors",
                self.maps.len(),
                target.factors.len()
            )));
        }
        for (j, fm) in self.maps.iter().enumerate() {
            let sf = source
                .factors
                .get(fm.source_factor)
                .ok_or_else(|| invalid(format!("factor map {j} routes from a missing factor")))?;
            let tf = &target.factors[j];
            if fm.images.len() != sf.gens.len() {
                return Err(invalid(format!(
                    "factor map {j} needs {} generator images",
                    sf.gens.len()
                )));
            }
            for (g, img) in sf.gens.iter().zip(&fm.images) {
                for e in img.keys() {
                    if e.len() != tf.gens.len() {
                        return Err(invalid(format!(
                            "image of '{}' has a malformed monomial",
                            g.name
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Full validation: shape, images homogeneous of the right degree, and
    /// commutation with the differentials on generators.
    pub fn validate(
        &self,
        source: &CdgaPresentation,
        target: &CdgaPresentation,
    ) -> TfResult<()> {
        self.validate_shape(source, target)?;
        for (j, fm) in self.maps.iter().enumerate() {
            let sf = &source.factors[fm.source_factor];
            let tf = &target.factors[j];
            for (g, img) in sf.gens.iter().zip(&fm.images) {
                if let Some(d) = tf.elem_degree(img)? {
                    if d != g.degree {
                        return Err(invalid(format!(
                            "image of '{}' has degree {d}, expected {}",
                            g.name, g.degree
                        )));
                    }
                }
            }
            // d-commutation on generators: φ(dg) = d(φ(g))
            for (gi, g) in sf.gens.iter().enumerate() {
                let img_d = self.apply_factor(tf, fm, &sf.diff[gi]);
                let d_img = tf.d_elem(&fm.images[gi]);
                if img_d != d_img {
                    return Err(invalid(format!(
                        "map fails to commute with the differential on '{}'",
                        g.name
                    )));
                }
            }
        }
        Ok(())
    }

    /// Substitute generator images into a one-factor element.
    fn apply_factor(
        &self,
        target_factor: &Factor,
        fm: &FactorMap,
        elem: &FactorElem,
    ) -> FactorElem {
        let mut out = FactorElem::new();
        for (expo, c) in elem {
            // ordered product of image powers
            let mut acc = FactorElem::new();
            acc.insert(vec![0; target_factor.gens.len()], c.clone());
            for (gi, &e) in expo.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let p = target_factor.elem_pow(&fm.images[gi], e);
                acc = target_factor.elem_mul(&acc, &p);
            }
            add_into(&mut out, &acc);
        }
        out
    }

    /// Apply the morphism to a full element.
    pub fn apply(
        &self,
        source: &CdgaPresentation,
        target: &CdgaPresentation,
        elem: &CdgaElem,
    ) -> CdgaElem {
        debug_assert_eq!(elem.len(), source.factors.len());
        self.maps
            .iter()
            .enumerate()
            .map(|(j, fm)| self.apply_factor(&target.factors[j], fm, &elem[fm.source_factor]))
            .collect()
    }

    /// Composite `self ∘ first` (apply `first`, then `self`).
    pub fn compose(
        &self,
        first: &CdgaMorphism,
        source: &CdgaPresentation,
        middle: &CdgaPresentation,
        target: &CdgaPresentation,
    ) -> CdgaMorphism {
        debug_assert!(first
            .maps
            .iter()
            .all(|fm| fm.source_factor < source.factors.len()));
        debug_assert_eq!(first.maps.len(), middle.factors.len());
        let maps = self
            .maps
            .iter()
            .enumerate()
            .map(|(k, outer)| {
                let j = outer.source_factor;
                let inner = &first.maps[j];
                let i = inner.source_factor;
                let images = inner
                    .images
                    .iter()
                    .map(|img| self.apply_factor(&target.factors[k], outer, img))
                    .collect();
                FactorMap { source_factor: i, images }
            })
            .collect();
        CdgaMorphism { maps }
    }

    /// Parse `[{"from": i, "images": {"g": {expo: coeff}}}…]`, one entry per
    /// target factor.
    pub fn from_json(
        v: &Value,
        source: &CdgaPresentation,
        target: &CdgaPresentation,
    ) -> TfResult<CdgaMorphism> {
        let arr = v
            .as_array()
            .ok_or_else(|| invalid("morphism must be an array of factor maps".to_string()))?;
        let mut maps = Vec::new();
        for (j, mv) in arr.iter().enumerate() {
            let mobj = mv
                .as_object()
                .ok_or_else(|| invalid(format!("factor map {j} must be an object")))?;
            let from = require(mobj, "from")?
                .as_u64()
                .ok_or_else(|| invalid("\"from\" must be a factor index".to_string()))?
                as usize;
            let sf = source
                .factors
                .get(from)
                .ok_or_else(|| invalid(format!("factor map {j} routes from missing factor {from}")))?;
            let tf = target
                .factors
                .get(j)
                .ok_or_else(|| invalid(format!("factor map {j} exceeds the target")))?;
            let mut images = vec![FactorElem::new(); sf.gens.len()];
            if let Some(iv) = mobj.get("images") {
                let iobj = iv
                    .as_object()
                    .ok_or_else(|| invalid("\"images\" must be an object".to_string()))?;
                for (name, ev) in iobj {
                    let gi = sf
                        .gens
                        .iter()
                        .position(|g| &g.name == name)
                        .ok_or_else(|| {
                            invalid(format!("image names unknown generator '{name}'"))
                        })?;
                    images[gi] = parse_factor_elem(ev, tf.gens.len())?;
                }
            }
            maps.push(FactorMap { source_factor: from, images });
        }
        let m = CdgaMorphism { maps };
        m.validate_shape(source, target)?;
        Ok(m)
    }

    pub fn to_json(&self, source: &CdgaPresentation) -> Value {
        let maps: Vec<Value> = self
            .maps
            .iter()
            .map(|fm| {
                let sf = &source.factors[fm.source_factor];
                let mut images = serde_json::Map::new();
                for (g, img) in sf.gens.iter().zip(&fm.images) {
                    if !img.is_empty() {
                        images.insert(g.name.clone(), factor_elem_to_json(img));
                    }
                }
                json!({"from": fm.source_factor, "images": Value::Object(images)})
            })
            .collect();
        Value::Array(maps)
    }
}

// ---------------------------------------------------------------------------
// cohomology
// ---------------------------------------------------------------------------

/// Basis index for one degree: tagged factor monomials.
#[derive(Clone, Debug)]
pub struct DegreeData {
    /// (factor, exponent vector) for each basis slot
    pub basis: Vec<(usize, FExpo)>,
    /// chosen cohomology representatives as coefficient vectors
    pub h_basis: Vec<Vec<Q>>,
    /// coefficient vectors spanning the coboundaries
    boundaries: Vec<Vec<Q>>,
    /// cocycle coefficient vectors
    cocycles: Vec<Vec<Q>>,
}

/// Degreewise cohomology of a presentation with cached bases.
#[derive(Clone, Debug)]
pub struct CohomologyCalc {
    alg: CdgaPresentation,
    cache: BTreeMap<u32, DegreeData>,
}

impl CohomologyCalc {
    pub fn new(alg: CdgaPresentation) -> CohomologyCalc {
        CohomologyCalc { alg, cache: BTreeMap::new() }
    }

    pub fn alg(&self) -> &CdgaPresentation {
        &self.alg
    }

    /// Tagged monomial basis of the degree-`k` cochains.
    pub fn chain_basis(&mut self, k: u32) -> Vec<(usize, FExpo)> {
        self.degree_data(k).basis.clone()
    }

    pub fn chain_dim(&mut self, k: u32) -> usize {
        self.degree_data(k).basis.len()
    }

    pub fn h_dim(&mut self, k: u32) -> usize {
        self.degree_data(k).h_basis.len()
    }

    pub fn h_basis(&mut self, k: u32) -> Vec<Vec<Q>> {
        self.degree_data(k).h_basis.clone()
    }

    pub fn hilbert(&mut self, up_to: u32) -> Vec<usize> {
        (0..=up_to).map(|k| self.h_dim(k)).collect()
    }

    fn raw_basis(alg: &CdgaPresentation, k: u32) -> Vec<(usize, FExpo)> {
        let mut out = Vec::new();
        for (fi, f) in alg.factors.iter().enumerate() {
            for e in f.monomials(k) {
                out.push((fi, e));
            }
        }
        out
    }

    fn degree_data(&mut self, k: u32) -> &DegreeData {
        if !self.cache.contains_key(&k) {
            let data = self.compute_degree(k);
            self.cache.insert(k, data);
        }
        self.cache.get(&k).expect("just inserted")
    }

    fn compute_degree(&mut self, k: u32) -> DegreeData {
        let alg = self.alg.clone();
        let basis = Self::raw_basis(&alg, k);
        let up_basis = Self::raw_basis(&alg, k + 1);
        let up_index: BTreeMap<(usize, FExpo), usize> = up_basis
            .iter()
            .enumerate()
            .map(|(i, b)| (b.clone(), i))
            .collect();
        // differential matrix: rows are coordinates of d(basis element)
        let mut d_rows: Vec<SparseRow> = Vec::with_capacity(basis.len());
        for (fi, e) in &basis {
            let de = alg.factors[*fi].d_mono(e);
            let mut row = SparseRow::new();
            for (m, c) in de {
                let idx = up_index[&(*fi, m)];
                row.insert(idx, c);
            }
            d_rows.push(row);
        }
        // cocycles: kernel of d as a map out of degree k
        let mut mat = SparseMat::new(basis.len());
        for r in 0..up_basis.len() {
            let mut row = SparseRow::new();
            for (c, drow) in d_rows.iter().enumerate() {
                if let Some(x) = drow.get(&r) {
                    row.insert(c, x.clone());
                }
            }
            mat.push_row(row);
        }
        let cocycles = mat.kernel_basis();
        // boundaries: images of the degree-(k−1) basis under d
        let mut boundaries: Vec<Vec<Q>> = Vec::new();
        let mut btracker = SpanTracker::new(basis.len());
        if k > 0 {
            let down_basis = Self::raw_basis(&alg, k - 1);
            let index: BTreeMap<(usize, FExpo), usize> = basis
                .iter()
                .enumerate()
                .map(|(i, b)| (b.clone(), i))
                .collect();
            for (fi, e) in &down_basis {
                let de = alg.factors[*fi].d_mono(e);
                let mut v = vec![q0(); basis.len()];
                for (m, c) in de {
                    v[index[&(*fi, m)]] = c;
                }
                if btracker.insert(&v) {
                    boundaries.push(v);
                }
            }
        }
        // representatives: greedy complement of the boundaries in the cocycles
        let mut h_basis = Vec::new();
        for z in &cocycles {
            if btracker.insert(z) {
                h_basis.push(z.clone());
            }
        }
        DegreeData { basis, h_basis, boundaries, cocycles }
    }

    /// Coefficient vector of an element in the degree-`k` chain basis.
    pub fn elem_to_coeffs(&mut self, k: u32, elem: &CdgaElem) -> TfResult<Vec<Q>> {
        let data = self.degree_data(k);
        let index: BTreeMap<(usize, FExpo), usize> = data
            .basis
            .iter()
            .enumerate()
            .map(|(i, b)| (b.clone(), i))
            .collect();
        let mut v = vec![q0(); data.basis.len()];
        for (fi, f) in elem.iter().enumerate() {
            for (e, c) in f {
                let key = (fi, e.clone());
                let idx = index.get(&key).ok_or_else(|| {
                    invalid(format!("element contains a monomial outside degree {k}"))
                })?;
                v[*idx] = c.clone();
            }
        }
        Ok(v)
    }

    pub fn coeffs_to_elem(&mut self, k: u32, v: &[Q]) -> CdgaElem {
        let nfactors = self.alg.factors.len();
        let data = self.degree_data(k);
        let mut elem = vec![FactorElem::new(); nfactors];
        for ((fi, e), c) in data.basis.iter().zip(v) {
            if !c.is_zero() {
                elem[*fi].insert(e.clone(), c.clone());
            }
        }
        elem
    }

    /// Coordinates of a cocycle's class in the chosen representative basis.
    pub fn reduce_to_h(&mut self, k: u32, coeffs: &[Q]) -> TfResult<Vec<Q>> {
        let data = self.degree_data(k).clone();
        let mut span: Vec<Vec<Q>> = data.boundaries.clone();
        span.extend(data.h_basis.iter().cloned());
        let rep = express_in_span(&span, coeffs)
            .ok_or_else(|| internal("attempted to reduce a non-cocycle".to_string()))?;
        Ok(rep[data.boundaries.len()..].to_vec())
    }

    /// Is the coefficient vector a cocycle in degree `k`?
    pub fn is_cocycle(&mut self, k: u32, coeffs: &[Q]) -> bool {
        let data = self.degree_data(k).clone();
        if data.cocycles.is_empty() {
            return coeffs.iter().all(Q::is_zero);
        }
        express_in_span(&data.cocycles, coeffs).is_some()
    }

    /// Is the coefficient vector a coboundary in degree `k`?
    pub fn is_coboundary(&mut self, k: u32, coeffs: &[Q]) -> bool {
        let data = self.degree_data(k).clone();
        if coeffs.iter().all(Q::is_zero) {
            return true;
        }
        if data.boundaries.is_empty() {
            return false;
        }
        express_in_span(&data.boundaries, coeffs).is_some()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::qi;

    fn felem(pairs: &[(&[u32], i64)]) -> FactorElem {
        pairs
            .iter()
            .map(|(e, c)| (e.to_vec(), qi(*c)))
            .collect()
    }

    fn polynomial_on_x() -> CdgaPresentation {
        CdgaPresentation::new(vec![Factor {
            gens: vec![CdgaGen { name: "x".to_string(), degree: 2 }],
            diff: vec![FactorElem::new()],
        }])
        .unwrap()
    }

    #[test]
    fn polynomial_algebra_has_one_class_per_even_degree() {
        let mut h = CohomologyCalc::new(polynomial_on_x());
        assert_eq!(h.hilbert(6), vec![1, 0, 1, 0, 1, 0, 1]);
    }

    #[test]
    fn odd_generator_squares_to_zero() {
        let f = Factor {
            gens: vec![
                CdgaGen { name: "v".to_string(), degree: 1 },
                CdgaGen { name: "w".to_string(), degree: 1 },
            ],
            diff: vec![FactorElem::new(), FactorElem::new()],
        };
        // v·v = 0, v·w = −w·v
        assert_eq!(f.mono_mul(&vec![1, 0], &vec![1, 0]), None);
        let (e, s) = f.mono_mul(&vec![0, 1], &vec![1, 0]).unwrap();
        assert_eq!(e, vec![1, 1]);
        assert_eq!(s, -1);
        let (e2, s2) = f.mono_mul(&vec![1, 0], &vec![0, 1]).unwrap();
        assert_eq!(e2, vec![1, 1]);
        assert_eq!(s2, 1);
    }

    fn three_x_and_v() -> CdgaPresentation {
        // generators x1,x2,x3 of degree 2 and v of degree 1; dv = x1−x2−x3
        CdgaPresentation::new(vec![Factor {
            gens: vec![
                CdgaGen { name: "x1".to_string(), degree: 2 },
                CdgaGen { name: "x2".to_string(), degree: 2 },
                CdgaGen { name: "x3".to_string(), degree: 2 },
                CdgaGen { name: "v".to_string(), degree: 1 },
            ],
            diff: vec![
                FactorElem::new(),
                FactorElem::new(),
                FactorElem::new(),
                felem(&[(&[1, 0, 0, 0], 1), (&[0, 1, 0, 0], -1), (&[0, 0, 1, 0], -1)]),
            ],
        }])
        .unwrap()
    }

    #[test]
    fn linear_differential_cuts_one_polynomial_variable() {
        let mut h = CohomologyCalc::new(three_x_and_v());
        // quotient by one linear relation leaves two polynomial variables
        assert_eq!(h.hilbert(6), vec![1, 0, 2, 0, 3, 0, 4]);
    }

    #[test]
    fn truncation_pattern_from_an_odd_relation() {
        // x, a of degree 2 and t of degree 3 with dt = a² − x·a
        let alg = CdgaPresentation::new(vec![Factor {
            gens: vec![
                CdgaGen { name: "x".to_string(), degree: 2 },
                CdgaGen { name: "a".to_string(), degree: 2 },
                CdgaGen { name: "t".to_string(), degree: 3 },
            ],
            diff: vec![
                FactorElem::new(),
                FactorElem::new(),
                felem(&[(&[0, 2, 0], 1), (&[1, 1, 0], -1)]),
            ],
        }])
        .unwrap();
        let mut h = CohomologyCalc::new(alg);
        assert_eq!(h.hilbert(8), vec![1, 0, 2, 0, 2, 0, 2, 0, 2]);
    }

    #[test]
    fn product_of_empty_factors_counts_components() {
        let alg = CdgaPresentation::new(vec![
            Factor { gens: Vec::new(), diff: Vec::new() },
            Factor { gens: Vec::new(), diff: Vec::new() },
        ])
        .unwrap();
        let mut h = CohomologyCalc::new(alg);
        assert_eq!(h.hilbert(3), vec![2, 0, 0, 0]);
        let mut hz = CohomologyCalc::new(CdgaPresentation::zero());
        assert_eq!(hz.hilbert(2), vec![0, 0, 0]);
    }

    #[test]
    fn differential_squares_to_zero_is_enforced() {
        // dv = x with dx forced nonzero would break d² — construct d(w) = v
        // with d(v) = x so d²(w) = x ≠ 0
        let bad = CdgaPresentation::new(vec![Factor {
            gens: vec![
                CdgaGen { name: "x".to_string(), degree: 3 },
                CdgaGen { name: "v".to_string(), degree: 2 },
                CdgaGen { name: "w".to_string(), degree: 1 },
            ],
            diff: vec![
                FactorElem::new(),
                felem(&[(&[1, 0, 0], 1)]),
                felem(&[(&[0, 1, 0], 1)]),
            ],
        }]);
        assert!(bad.is_err());
    }

    #[test]
    fn leibniz_differential_on_products() {
        let alg = three_x_and_v();
        let f = &alg.factors[0];
        // d(v·x1) = (x1−x2−x3)·x1
        let vm = felem(&[(&[1, 0, 0, 1], 1)]);
        let d = f.d_elem(&vm);
        let expect = felem(&[(&[2, 0, 0, 0], 1), (&[1, 1, 0, 0], -1), (&[1, 0, 1, 0], -1)]);
        assert_eq!(d, expect);
    }

    #[test]
    fn morphism_routing_and_application() {
        // diagonal embedding of the polynomial line into two copies
        let src = polynomial_on_x();
        let tgt = CdgaPresentation::new(vec![
            Factor {
                gens: vec![CdgaGen { name: "x".to_string(), degree: 2 }],
                diff: vec![FactorElem::new()],
            },
            Factor {
                gens: vec![CdgaGen { name: "x".to_string(), degree: 2 }],
                diff: vec![FactorElem::new()],
            },
        ])
        .unwrap();
        let m = CdgaMorphism {
            maps: vec![
                FactorMap { source_factor: 0, images: vec![felem(&[(&[1], 1)])] },
                FactorMap { source_factor: 0, images: vec![felem(&[(&[1], 1)])] },
            ],
        };
        m.validate(&src, &tgt).unwrap();
        let x2 = vec![felem(&[(&[2], 3)])];
        let img = m.apply(&src, &tgt, &x2);
        assert_eq!(img, vec![felem(&[(&[2], 3)]), felem(&[(&[2], 3)])]);
    }

    #[test]
    fn morphism_must_commute_with_differentials() {
        let src = three_x_and_v();
        let tgt = polynomial_on_x();
        // sending v to 0 but x1 to x, x2, x3 to 0 breaks commutation:
        // φ(dv) = x ≠ 0 = dφ(v)
        let m = CdgaMorphism {
            maps: vec![FactorMap {
                source_factor: 0,
                images: vec![
                    felem(&[(&[1], 1)]),
                    FactorElem::new(),
                    FactorElem::new(),
                    FactorElem::new(),
                ],
            }],
        };
        assert!(m.validate(&src, &tgt).is_err());
    }

    #[test]
    fn composition_matches_sequential_application() {
        let a = polynomial_on_x();
        let b = three_x_and_v();
        // x ↦ x1 + 2·x2
        let f = CdgaMorphism {
            maps: vec![FactorMap {
                source_factor: 0,
                images: vec![felem(&[(&[1, 0, 0, 0], 1), (&[0, 1, 0, 0], 2)])],
            }],
        };
        // x1,x2,x3 ↦ x, x, 0 and v ↦ 0 — commutes since φ(dv) = x−x = 0
        let g = CdgaMorphism {
            maps: vec![FactorMap {
                source_factor: 0,
                images: vec![
                    felem(&[(&[1], 1)]),
                    felem(&[(&[1], 1)]),
                    FactorElem::new(),
                    FactorElem::new(),
                ],
            }],
        };
        f.validate(&a, &b).unwrap();
        g.validate(&b, &a).unwrap();
        let gf = g.compose(&f, &a, &b, &a);
        let x1 = vec![felem(&[(&[1], 1)])];
        assert_eq!(
            gf.apply(&a, &a, &x1),
            g.apply(&b, &a, &f.apply(&a, &b, &x1))
        );
    }

    #[test]
    fn reduction_onto_representatives_kills_coboundaries() {
        let mut h = CohomologyCalc::new(three_x_and_v());
        // x1 − x2 − x3 is a coboundary in degree 2
        let alg = h.alg().clone();
        let db = alg.d(&vec![felem(&[(&[0, 0, 0, 1], 1)])]);
        let coeffs = h.elem_to_coeffs(2, &db).unwrap();
        assert!(h.is_coboundary(2, &coeffs));
        let red = h.reduce_to_h(2, &coeffs).unwrap();
        assert!(red.iter().all(Q::is_zero));
        // x1 is not a coboundary
        let x1 = h.elem_to_coeffs(2, &vec![felem(&[(&[1, 0, 0, 0], 1)])]).unwrap();
        let red1 = h.reduce_to_h(2, &x1).unwrap();
        assert!(red1.iter().any(|c| !c.is_zero()));
    }

    #[test]
    fn element_rendering_uses_names_and_tuples() {
        let alg = three_x_and_v();
        let e = vec![felem(&[(&[2, 0, 0, 0], 1), (&[0, 1, 0, 1], -3)])];
        assert_eq!(alg.render_elem(&e), "x1^2 - 3·x2·v");
        let two = CdgaPresentation::new(vec![
            Factor { gens: Vec::new(), diff: Vec::new() },
            Factor { gens: Vec::new(), diff: Vec::new() },
        ])
        .unwrap();
        let u = vec![felem(&[(&[], 1)]), felem(&[(&[], 2)])];
        assert_eq!(two.render_elem(&u), "(1, 2)");
    }

    #[test]
    fn json_round_trip_for_algebras_and_morphisms() {
        let alg = three_x_and_v();
        let j = alg.to_json();
        let back = CdgaPresentation::from_json(&j).unwrap();
        assert_eq!(back.to_json(), j);
        let m = CdgaMorphism::identity(&alg);
        let mj = m.to_json(&alg);
        let back_m = CdgaMorphism::from_json(&mj, &alg, &alg).unwrap();
        assert_eq!(back_m.to_json(&alg), mj);
    }
}
