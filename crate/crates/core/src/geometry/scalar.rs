//! Exact rational scalars and the small amount of number formatting the rest
//! of the crate needs.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational. Always stored reduced with a positive denominator.
pub type Scalar = BigRational;

/// A point or direction in ℚ^d.
pub type Vector = Vec<Scalar>;

pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Scalar {
    Scalar::new(BigInt::from(n), BigInt::from(d))
}

pub fn zeros(d: usize) -> Vector {
    vec![Scalar::zero(); d]
}

pub fn unit(d: usize, i: usize) -> Vector {
    let mut v = zeros(d);
    v[i] = Scalar::one();
    v
}

pub fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .fold(Scalar::zero(), |acc, (x, y)| acc + x * y)
}

pub fn add(a: &[Scalar], b: &[Scalar]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[Scalar], b: &[Scalar]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(a: &[Scalar], s: &Scalar) -> Vector {
    a.iter().map(|x| x * s).collect()
}

pub fn neg(a: &[Scalar]) -> Vector {
    a.iter().map(|x| -x).collect()
}

pub fn to_f64(q: &Scalar) -> f64 {
    match (q.numer().to_f64(), q.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        // huge numerator/denominator: shift both down before dividing
        _ => {
            let bits = q.numer().bits().max(q.denom().bits()) as i64 - 900;
            let shift = bits.max(0) as usize;
            let n = (q.numer() >> shift).to_f64().unwrap_or(0.0);
            let d = (q.denom() >> shift).to_f64().unwrap_or(f64::INFINITY);
            n / d
        }
    }
}

/// Rounds a real number to `digits` significant decimal digits and returns the
/// rounded value as an exact rational.
pub fn round_significant(x: f64, digits: usize) -> Scalar {
    assert!(x.is_finite(), "cannot rationalize a non-finite value");
    if x == 0.0 {
        return Scalar::zero();
    }
    let s = format!("{:.*e}", digits.max(1) - 1, x);
    parse_scalar(&s).expect("scientific rendering parses")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseScalarError(pub String);

impl fmt::Display for ParseScalarError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid rational literal {:?}", self.0)
    }
}

impl std::error::Error for ParseScalarError {}

/// Parses `p/q`, integers, decimals and scientific notation (`1.25e-3`) exactly.
pub fn parse_scalar(s: &str) -> Result<Scalar, ParseScalarError> {
    let err = || ParseScalarError(s.to_string());
    let t = s.trim();
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| err())?;
        let d: BigInt = d.trim().parse().map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(Scalar::new(n, d));
    }
    let (mantissa, exponent) = match t.find(['e', 'E']) {
        Some(pos) => {
            let e: i64 = t[pos + 1..].parse().map_err(|_| err())?;
            (&t[..pos], e)
        }
        None => (t, 0),
    };
    let (negative, body) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(err());
    }
    let digits = format!("{int_part}{frac_part}");
    let mut numer: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().map_err(|_| err())? };
    if negative {
        numer = -numer;
    }
    let exp10 = exponent - frac_part.len() as i64;
    let pow = BigInt::from(10).pow(exp10.unsigned_abs() as u32);
    Ok(if exp10 >= 0 {
        Scalar::from_integer(numer * pow)
    } else {
        Scalar::new(numer, pow)
    })
}

/// Exact rendering: `p` for integers, `p/q` otherwise.
pub fn format_exact(q: &Scalar) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Decimal rendering with `digits` places, rounding half to even.
pub fn format_decimal(q: &Scalar, digits: usize) -> String {
    let pow = BigInt::from(10).pow(digits as u32);
    let scaled = q * Scalar::from_integer(pow);
    let floor = scaled.floor();
    let frac = &scaled - &floor;
    let half = ratio(1, 2);
    let mut n = floor.to_integer();
    match frac.cmp(&half) {
        Ordering::Greater => n += 1,
        Ordering::Equal if n.is_odd() => n += 1,
        _ => {}
    }
    let negative = n.is_negative();
    let s = n.abs().to_string();
    let body = if digits == 0 {
        s
    } else {
        let padded = format!("{:0>width$}", s, width = digits + 1);
        let (i, f) = padded.split_at(padded.len() - digits);
        format!("{i}.{f}")
    };
    if negative {
        format!("-{body}")
    } else {
        body
    }
}

/// Extended-real value used for support functions and LP optima.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Extended {
    NegInf,
    Finite(Scalar),
    PosInf,
}

impl Extended {
    pub fn finite(&self) -> Option<&Scalar> {
        match self {
            Extended::Finite(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_pos_inf(&self) -> bool {
        matches!(self, Extended::PosInf)
    }
}

impl fmt::Display for Extended {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::NegInf => write!(f, "-inf"),
            Extended::Finite(v) => write!(f, "{}", format_exact(v)),
            Extended::PosInf => write!(f, "+inf"),
        }
    }
}

/// Multiplies a rational vector by the lcm of its denominators and divides out
/// the gcd of the result. Direction is preserved.
pub(crate) fn primitive_integer(v: &[Scalar]) -> Vec<BigInt> {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let mut out: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    make_primitive(&mut out);
    out
}

/// Divides an integer vector by the gcd of its entries (no-op on zero vectors).
pub(crate) fn make_primitive(v: &mut [BigInt]) {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in v.iter_mut() {
            *x = &*x / &g;
        }
    }
}

pub(crate) fn to_rational(v: &[BigInt]) -> Vector {
    v.iter().map(|x| Scalar::from_integer(x.clone())).collect()
}
