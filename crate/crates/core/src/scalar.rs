//! Exact scalars: big rationals and Gaussian rationals `Q(i)`.

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Gaussian rational `re + i·im` with exact big-rational parts.
pub type Qi = Complex<BigRational>;

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(re: i64, im: i64) -> Qi {
    Complex::new(rat(re), rat(im))
}

pub fn qi_real(re: BigRational) -> Qi {
    Complex::new(re, BigRational::zero())
}

pub fn qi_from_int(n: &BigInt) -> Qi {
    qi_real(BigRational::from_integer(n.clone()))
}

pub fn qi_is_zero(z: &Qi) -> bool {
    z.re.is_zero() && z.im.is_zero()
}

pub fn qi_one() -> Qi {
    Complex::new(BigRational::one(), BigRational::zero())
}

/// Parses `"p"`, `"-p"` or `"p/q"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let t = s.trim();
    let parsed = match t.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad_rational(s))?;
            let d: BigInt = d.trim().parse().map_err(|_| bad_rational(s))?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            BigRational::new(n, d)
        }
        None => BigRational::from_integer(t.parse().map_err(|_| bad_rational(s))?),
    };
    Ok(parsed)
}

fn bad_rational(s: &str) -> Error {
    Error::Parse(format!("not a rational number: {s:?}"))
}

/// Canonical text form: `"p"` for integers, `"p/q"` otherwise.
pub fn format_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn format_qi(z: &Qi) -> String {
    match (z.re.is_zero(), z.im.is_zero()) {
        (_, true) => format_rational(&z.re),
        (true, false) => format!("{}i", format_rational(&z.im)),
        (false, false) => format!("({} + {}i)", format_rational(&z.re), format_rational(&z.im)),
    }
}

pub fn rational_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

pub fn qi_to_c64(z: &Qi) -> Complex64 {
    Complex64::new(rational_to_f64(&z.re), rational_to_f64(&z.im))
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("3/6").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational(" -4 ").unwrap(), rat(-4));
        assert_eq!(format_rational(&ratio(-2, 4)), "-1/2");
        assert_eq!(format_rational(&rat(7)), "7");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2), BigInt::from(6));
        assert_eq!(binomial(3, 5), BigInt::zero());
        assert_eq!(factorial(5), BigInt::from(120));
    }
}
