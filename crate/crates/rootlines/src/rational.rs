//! Exact rational scalars and their `"p/q"` text form.
//!
//! Every scalar quantity in this crate (inner products of coweights,
//! Cartan eigenvalues, linear-algebra entries) is an exact rational.
//! Root coordinates themselves stay in `i64`; rationals only appear where
//! division is genuinely needed, so nothing here ever touches floating point.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

use crate::error::Error;

/// Arbitrary-precision rational, always stored in lowest terms with a
/// positive denominator (guaranteed by `num`).
pub type Rational = BigRational;

/// Rational from a machine-integer numerator/denominator pair.
pub fn rat(numer: i64, denom: i64) -> Rational {
    assert!(denom != 0, "zero denominator");
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Rational from an integer.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Renders `p/q`, or just `p` when the denominator is one.
pub fn rational_to_string(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses the `"p/q"` form produced by [`rational_to_string`].
pub fn rational_from_str(s: &str) -> Result<Rational, Error> {
    let parse_int = |t: &str| {
        t.trim()
            .parse::<BigInt>()
            .map_err(|_| Error::Parse(format!("invalid rational `{s}`")))
    };
    match s.split_once('/') {
        None => Ok(Rational::from_integer(parse_int(s)?)),
        Some((p, q)) => {
            let denom = parse_int(q)?;
            if denom.is_zero() {
                return Err(Error::Parse(format!("zero denominator in `{s}`")));
            }
            Ok(Rational::new(parse_int(p)?, denom))
        }
    }
}

/// True when the rational is an integer.
pub fn is_integer(q: &Rational) -> bool {
    q.denom().is_one()
}

/// The integer value, if the rational is one.
pub fn to_integer(q: &Rational) -> Option<i64> {
    use num::ToPrimitive;
    if is_integer(q) {
        q.numer().to_i64()
    } else {
        None
    }
}

/// Exact integer square-root floor of a non-negative rational, i.e. the
/// largest `m >= 0` with `m^2 <= q`.
pub fn isqrt_floor(q: &Rational) -> i64 {
    assert!(!q.is_negative(), "isqrt of negative rational");
    let mut m: i64 = 0;
    loop {
        let next = rat_int(m + 1);
        if &next * &next > *q {
            return m;
        }
        m += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats_integers_without_denominator() {
        assert_eq!(rational_to_string(&rat(4, 2)), "2");
        assert_eq!(rational_to_string(&rat(-6, 4)), "-3/2");
    }

    #[test]
    fn parse_round_trips() {
        for s in ["5/3", "-7", "0", "2/3", "-5/6"] {
            let q = rational_from_str(s).unwrap();
            assert_eq!(rational_to_string(&q), s);
        }
        assert!(rational_from_str("1/0").is_err());
        assert!(rational_from_str("x").is_err());
    }

    #[test]
    fn isqrt_floor_small_values() {
        assert_eq!(isqrt_floor(&rat_int(0)), 0);
        assert_eq!(isqrt_floor(&rat_int(8)), 2);
        assert_eq!(isqrt_floor(&rat(9, 1)), 3);
        assert_eq!(isqrt_floor(&rat(17, 2)), 2);
    }
}
