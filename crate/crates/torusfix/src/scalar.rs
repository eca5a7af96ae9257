//! Exact rational scalars and their text representation.
//!
//! All arithmetic in this crate runs over arbitrary-precision rationals;
//! this module fixes the scalar type and the `p/q` string form used in
//! every JSON format.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{invalid, TfResult};

/// The scalar type of the crate: arbitrary-precision rationals.
pub type Q = BigRational;

/// The zero rational.
pub fn q0() -> Q {
    Q::zero()
}

/// The unit rational.
pub fn q1() -> Q {
    Q::one()
}

/// Rational from a machine integer.
pub fn qi(v: i64) -> Q {
    Q::from_integer(BigInt::from(v))
}

/// Rational from an integer pair `p/q`.
pub fn qr(p: i64, q: i64) -> Q {
    Q::new(BigInt::from(p), BigInt::from(q))
}

/// Parse a rational from its text form: `p` or `p/q` with optional sign,
/// arbitrary precision. Rejects zero denominators and garbage.
pub fn parse_q(s: &str) -> TfResult<Q> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), Some(b.trim())),
        None => (s, None),
    };
    let n: BigInt = num
        .parse()
        .map_err(|_| invalid(format!("malformed rational '{s}'")))?;
    let d: BigInt = match den {
        Some(b) => b
            .parse()
            .map_err(|_| invalid(format!("malformed rational '{s}'")))?,
        None => BigInt::one(),
    };
    if d.is_zero() {
        return Err(invalid(format!("zero denominator in rational '{s}'")));
    }
    Ok(Q::new(n, d))
}

/// Canonical text form of a rational: `p` when integral, else `p/q` in
/// lowest terms with the sign on the numerator.
pub fn format_q(v: &Q) -> String {
    if v.denom().is_one() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

/// Parse an arbitrary-precision integer from text.
pub fn parse_z(s: &str) -> TfResult<BigInt> {
    s.trim()
        .parse()
        .map_err(|_| invalid(format!("malformed integer '{s}'")))
}

/// True when the rational is a negative number (used for sign-aware
/// rendering in text reports).
pub fn q_is_negative(v: &Q) -> bool {
    v.is_negative()
}
