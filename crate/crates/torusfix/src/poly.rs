//! Homogeneous multivariate polynomials over ℚ.
//!
//! Variables all have weight one here; graded pieces are enumerated in a
//! fixed graded-lexicographic order (within each total degree, exponent
//! vectors descend lexicographically, so `x1^d` comes first). Coefficient
//! vectors taken with respect to [`monomial_basis`] are the bridge between
//! polynomial conditions and the sparse linear algebra in [`crate::linalg`].

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{invalid, TfResult};
use crate::scalar::{format_q, q1, Q};

/// Exponent vector of a monomial.
pub type Expo = Vec<u32>;

/// All exponent vectors of total degree `deg` in `n` variables, in
/// descending lexicographic order. For `n = 0` the list is empty unless
/// `deg = 0`, which contributes the empty monomial.
pub fn monomial_basis(n: usize, deg: u32) -> Vec<Expo> {
    if n == 0 {
        return if deg == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for e in (0..=deg).rev() {
        for mut tail in monomial_basis(n - 1, deg - e) {
            let mut m = Vec::with_capacity(n);
            m.push(e);
            m.append(&mut tail);
            out.push(m);
        }
    }
    out
}

/// Dimension of the degree-`deg` piece in `n` variables (binomial
/// C(n-1+deg, deg), computed exactly without enumerating).
pub fn monomial_count(n: usize, deg: u32) -> usize {
    if n == 0 {
        return usize::from(deg == 0);
    }
    // C(n-1+deg, deg) with small intermediate values
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for k in 0..(n as u128 - 1) {
        num *= u128::from(deg) + 1 + k;
        den *= k + 1;
    }
    usize::try_from(num / den).expect("monomial count fits usize")
}

/// Sparse homogeneous polynomial in `n` commuting weight-one variables.
/// Invariant: all stored terms share one total degree and have nonzero
/// coefficients; the zero polynomial stores no terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    n: usize,
    terms: BTreeMap<Expo, Q>,
}

impl Poly {
    /// The zero polynomial.
    pub fn zero(n: usize) -> Self {
        Poly { n, terms: BTreeMap::new() }
    }

    /// The constant polynomial `c` (degree 0).
    pub fn constant(n: usize, c: Q) -> Self {
        let mut p = Poly::zero(n);
        if !c.is_zero() {
            p.terms.insert(vec![0; n], c);
        }
        p
    }

    /// The variable `x_i` (0-based).
    pub fn var(n: usize, i: usize) -> Self {
        debug_assert!(i < n);
        let mut e = vec![0u32; n];
        e[i] = 1;
        let mut p = Poly::zero(n);
        p.terms.insert(e, q1());
        p
    }

    /// The linear form `Σ c_i x_i`.
    pub fn linear(coeffs: &[Q]) -> Self {
        let n = coeffs.len();
        let mut p = Poly::zero(n);
        for (i, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                let mut e = vec![0u32; n];
                e[i] = 1;
                p.terms.insert(e, c.clone());
            }
        }
        p
    }

    /// Build from explicit terms, merging duplicates and checking
    /// homogeneity.
    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (Expo, Q)>) -> TfResult<Self> {
        let mut p = Poly::zero(n);
        for (e, c) in terms {
            if e.len() != n {
                return Err(invalid(format!(
                    "monomial exponent list has length {}, expected {}",
                    e.len(),
                    n
                )));
            }
            p.add_term(&e, &c);
        }
        if let Some(d) = p.check_homogeneous() {
            let _ = d;
            Ok(p)
        } else {
            Err(invalid("polynomial is not homogeneous".to_string()))
        }
    }

    fn check_homogeneous(&self) -> Option<u32> {
        let mut deg = None;
        for e in self.terms.keys() {
            let d: u32 = e.iter().sum();
            match deg {
                None => deg = Some(d),
                Some(prev) if prev == d => {}
                Some(_) => return None,
            }
        }
        Some(deg.unwrap_or(0))
    }

    /// Number of variables.
    pub fn nvars(&self) -> usize {
        self.n
    }

    /// Stored terms.
    pub fn terms(&self) -> &BTreeMap<Expo, Q> {
        &self.terms
    }

    /// True for the zero polynomial.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next().map(|e| e.iter().sum())
    }

    /// Add `c · x^e` in place.
    pub fn add_term(&mut self, e: &Expo, c: &Q) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e.clone()).or_insert_with(Q::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(e);
        }
    }

    /// Sum.
    pub fn add(&self, other: &Poly) -> Poly {
        debug_assert_eq!(self.n, other.n);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e, c);
        }
        out
    }

    /// Difference.
    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(&-q1()))
    }

    /// Scalar multiple.
    pub fn scale(&self, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.n);
        }
        let mut out = Poly::zero(self.n);
        for (e, w) in &self.terms {
            out.terms.insert(e.clone(), w * c);
        }
        out
    }

    /// Product.
    pub fn mul(&self, other: &Poly) -> Poly {
        debug_assert_eq!(self.n, other.n);
        let mut out = Poly::zero(self.n);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Expo = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(&e, &(ca * cb));
            }
        }
        out
    }

    /// Power by repeated multiplication.
    pub fn pow(&self, k: u32) -> Poly {
        let mut out = Poly::constant(self.n, q1());
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Exact evaluation at a rational point.
    pub fn eval(&self, point: &[Q]) -> Q {
        debug_assert_eq!(point.len(), self.n);
        let mut acc = Q::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (i, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    term *= &point[i];
                }
            }
            acc += term;
        }
        acc
    }

    /// Coefficient vector with respect to `monomial_basis(n, deg)`; errors
    /// if the polynomial is nonzero of a different degree.
    pub fn coeff_vector(&self, deg: u32) -> TfResult<Vec<Q>> {
        if let Some(d) = self.degree() {
            if d != deg {
                return Err(invalid(format!(
                    "expected a polynomial of degree {deg}, found degree {d}"
                )));
            }
        }
        let basis = monomial_basis(self.n, deg);
        Ok(basis
            .iter()
            .map(|e| self.terms.get(e).cloned().unwrap_or_else(Q::zero))
            .collect())
    }

    /// Inverse of [`coeff_vector`].
    pub fn from_coeff_vector(n: usize, deg: u32, coords: &[Q]) -> Poly {
        let basis = monomial_basis(n, deg);
        debug_assert_eq!(coords.len(), basis.len());
        let mut p = Poly::zero(n);
        for (e, c) in basis.iter().zip(coords) {
            p.add_term(e, c);
        }
        p
    }

    /// Substitute away the hyperplane `α · x = 0`: solve for the variable
    /// carrying the last nonzero coefficient of `α` and substitute, yielding
    /// a polynomial in the remaining `n - 1` variables (original order
    /// preserved). The result is zero exactly when `α` divides the input.
    pub fn restrict_to_hyperplane(&self, alpha: &[Q]) -> TfResult<Poly> {
        if alpha.len() != self.n {
            return Err(invalid(format!(
                "hyperplane form has {} coefficients, expected {}",
                alpha.len(),
                self.n
            )));
        }
        let j = alpha
            .iter()
            .rposition(|c| !c.is_zero())
            .ok_or_else(|| invalid("hyperplane form is zero".to_string()))?;
        // x_j = -(Σ_{i≠j} α_i x_i) / α_j as a linear polynomial in the
        // remaining variables
        let m = self.n - 1;
        let mut sub_coeffs = Vec::with_capacity(m);
        for (i, c) in alpha.iter().enumerate() {
            if i == j {
                continue;
            }
            sub_coeffs.push(-(c / &alpha[j]));
        }
        let sub = Poly::linear(&sub_coeffs);
        // powers of the substitution, computed on demand
        let mut powers: Vec<Poly> = vec![Poly::constant(m, q1())];
        let mut out = Poly::zero(m);
        for (e, c) in &self.terms {
            while powers.len() <= e[j] as usize {
                let next = powers.last().expect("nonempty").mul(&sub);
                powers.push(next);
            }
            let mut reduced: Expo = Vec::with_capacity(m);
            for (i, &k) in e.iter().enumerate() {
                if i != j {
                    reduced.push(k);
                }
            }
            let mut mono = Poly::zero(m);
            mono.terms.insert(reduced, c.clone());
            out = out.add(&mono.mul(&powers[e[j] as usize]));
        }
        Ok(out)
    }

    /// Divisibility by a nonzero linear form, decided exactly via
    /// [`restrict_to_hyperplane`].
    pub fn divisible_by_linear(&self, alpha: &[Q]) -> TfResult<bool> {
        Ok(self.restrict_to_hyperplane(alpha)?.is_zero())
    }

    /// Render with `var_names`, e.g. `3/2·x1^2·x2 - x2^3`.
    pub fn render(&self, var_names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        // iterate descending-lex so x1-dominant terms lead
        for (e, c) in self.terms.iter().rev() {
            let mut factors = Vec::new();
            for (i, &k) in e.iter().enumerate() {
                if k == 1 {
                    factors.push(var_names[i].clone());
                } else if k > 1 {
                    factors.push(format!("{}^{}", var_names[i], k));
                }
            }
            let coeff = format_q(c);
            let body = if factors.is_empty() {
                coeff
            } else if coeff == "1" {
                factors.join("·")
            } else if coeff == "-1" {
                format!("-{}", factors.join("·"))
            } else {
                format!("{}·{}", coeff, factors.join("·"))
            };
            parts.push(body);
        }
        let mut out = String::new();
        for (i, p) in parts.iter().enumerate() {
            if i == 0 {
                out.push_str(p);
            } else if let Some(stripped) = p.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(stripped);
            } else {
                out.push_str(" + ");
                out.push_str(p);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::qi;

    #[test]
    fn monomial_basis_counts_and_order() {
        assert_eq!(monomial_basis(2, 2), vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
        assert_eq!(monomial_basis(0, 0), vec![Vec::<u32>::new()]);
        assert!(monomial_basis(0, 3).is_empty());
        for n in 1..5usize {
            for d in 0..7u32 {
                assert_eq!(monomial_basis(n, d).len(), monomial_count(n, d));
            }
        }
    }

    #[test]
    fn restriction_detects_divisibility() {
        let n = 2;
        let x1 = Poly::var(n, 0);
        let x2 = Poly::var(n, 1);
        let alpha_x1 = [qi(1), qi(0)];
        // x1·x2 is divisible by x1
        assert!(x1.mul(&x2).divisible_by_linear(&alpha_x1).unwrap());
        // x2^2 is not
        assert!(!x2.mul(&x2).divisible_by_linear(&alpha_x1).unwrap());
        // x1^2 - x2^2 is divisible by x1 - x2 (and by x1 + x2, but not by
        // x1 + 2·x2)
        let p = x1.mul(&x1).sub(&x2.mul(&x2));
        assert!(p.divisible_by_linear(&[qi(1), qi(-1)]).unwrap());
        assert!(p.divisible_by_linear(&[qi(1), qi(1)]).unwrap());
        assert!(!p.divisible_by_linear(&[qi(1), qi(2)]).unwrap());
    }

    #[test]
    fn restriction_in_one_variable() {
        let p = Poly::var(1, 0).pow(3);
        let r = p.restrict_to_hyperplane(&[qi(2)]).unwrap();
        assert!(r.is_zero());
        let c = Poly::constant(1, qi(5));
        let rc = c.restrict_to_hyperplane(&[qi(2)]).unwrap();
        assert_eq!(rc, Poly::constant(0, qi(5)));
    }

    #[test]
    fn ring_laws_on_samples() {
        let n = 3;
        let a = Poly::var(n, 0).add(&Poly::var(n, 1).scale(&qi(2)));
        let b = Poly::var(n, 1).sub(&Poly::var(n, 2));
        let c = Poly::var(n, 0).add(&Poly::var(n, 2));
        assert_eq!(a.mul(&b), b.mul(&a));
        assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
    }

    #[test]
    fn coeff_vectors_round_trip() {
        let n = 2;
        let p = Poly::var(n, 0).pow(2).sub(&Poly::var(n, 1).pow(2).scale(&qi(3)));
        let v = p.coeff_vector(2).unwrap();
        assert_eq!(Poly::from_coeff_vector(n, 2, &v), p);
    }

    #[test]
    fn rendering_is_reduced_and_signed() {
        let n = 2;
        let names = vec!["x1".to_string(), "x2".to_string()];
        let p = Poly::var(n, 0).pow(2).sub(&Poly::var(n, 1).pow(2));
        assert_eq!(p.render(&names), "x1^2 - x2^2");
        assert_eq!(Poly::zero(n).render(&names), "0");
    }
}
