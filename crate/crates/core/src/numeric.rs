//! Exact rationals and certified enclosures.
//!
//! Heights, capacities and the ratios inside length bounds are exact
//! [`BigRational`]s. Irrational quantities (`e`, natural logarithms) only
//! appear at the presentation layer or in three-valued comparisons, and are
//! always handled as rational intervals that provably contain the true value.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub type Rational = BigRational;

/// Shorthand for small literal rationals.
pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseRationalError {
    #[error("empty rational literal")]
    Empty,
    #[error("malformed rational literal {0:?} (expected \"p/q\" or an integer)")]
    Malformed(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
}

/// Parses `"p/q"`, `"-p/q"` or a bare integer.
pub fn parse_rational(text: &str) -> Result<Rational, ParseRationalError> {
    let s = text.trim();
    if s.is_empty() {
        return Err(ParseRationalError::Empty);
    }
    let parse_int = |part: &str| -> Result<BigInt, ParseRationalError> {
        let part = part.trim();
        let digits = part.strip_prefix(['-', '+']).unwrap_or(part);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(ParseRationalError::Malformed(text.to_string()));
        }
        part.parse::<BigInt>()
            .map_err(|_| ParseRationalError::Malformed(text.to_string()))
    };
    match s.split_once('/') {
        None => Ok(Rational::from_integer(parse_int(s)?)),
        Some((n, d)) => {
            let n = parse_int(n)?;
            let d = parse_int(d)?;
            if d.is_zero() {
                return Err(ParseRationalError::ZeroDenominator(text.to_string()));
            }
            Ok(Rational::new(n, d))
        }
    }
}

/// Canonical `"p/q"` form; the denominator is always printed, even when it is 1.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// A closed interval `[lo, hi]` with exact rational endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        debug_assert!(lo <= hi, "inverted interval");
        Interval { lo, hi }
    }

    pub fn point(x: Rational) -> Self {
        Interval {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn add(&self, other: &Interval) -> Interval {
        Interval::new(&self.lo + &other.lo, &self.hi + &other.hi)
    }

    pub fn neg(&self) -> Interval {
        Interval::new(-&self.hi, -&self.lo)
    }

    pub fn sub(&self, other: &Interval) -> Interval {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &Rational) -> Interval {
        let a = &self.lo * k;
        let b = &self.hi * k;
        if a <= b {
            Interval::new(a, b)
        } else {
            Interval::new(b, a)
        }
    }

    pub fn mul(&self, other: &Interval) -> Interval {
        let products = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = products.iter().min().cloned().unwrap();
        let hi = products.iter().max().cloned().unwrap();
        Interval::new(lo, hi)
    }

    /// Reciprocal; `None` when the interval contains zero.
    pub fn recip(&self) -> Option<Interval> {
        if self.contains(&Rational::zero()) {
            return None;
        }
        Some(Interval::new(self.hi.recip(), self.lo.recip()))
    }

    /// Three-valued `self <= x` over every point of the interval.
    pub fn le_rational(&self, x: &Rational) -> Certified {
        if &self.hi <= x {
            Certified::True
        } else if &self.lo > x {
            Certified::False
        } else {
            Certified::Unknown
        }
    }

    /// Three-valued `x <= self` over every point of the interval.
    pub fn ge_rational(&self, x: &Rational) -> Certified {
        if &self.lo >= x {
            Certified::True
        } else if &self.hi < x {
            Certified::False
        } else {
            Certified::Unknown
        }
    }
}

/// Outcome of a comparison that involves an irrational quantity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Certified {
    True,
    False,
    Unknown,
}

impl Certified {
    pub fn and(self, other: Certified) -> Certified {
        match (self, other) {
            (Certified::False, _) | (_, Certified::False) => Certified::False,
            (Certified::True, Certified::True) => Certified::True,
            _ => Certified::Unknown,
        }
    }
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Enclosure of `e` from the Taylor partial sum through `1/n!`.
///
/// The tail `sum_{k>n} 1/k!` is bounded by `1/(n! * n)`.
pub fn e_interval(n: u32) -> Interval {
    let n = n.max(1);
    let fact = factorial(n);
    // sum_{k=0}^{n} n!/k! over n!
    let mut numer = BigInt::zero();
    let mut falling = BigInt::one();
    for k in (0..=n).rev() {
        numer += &falling;
        falling *= BigInt::from(k.max(1));
    }
    let lo = Rational::new(numer, fact.clone());
    let tail = Rational::new(BigInt::one(), fact * BigInt::from(n));
    let hi = &lo + tail;
    Interval::new(lo, hi)
}

/// Enclosure of `e` whose width is below `10^-(digits + 4)`.
pub fn e_enclosure(digits: u32) -> Interval {
    let target = Rational::new(BigInt::one(), BigInt::from(10).pow(digits + 4));
    let mut n = 4;
    loop {
        let iv = e_interval(n);
        if iv.width() < target {
            return iv;
        }
        n += 4;
    }
}

/// Fixed-point `atanh(t)` at scale `2^bits`, for `|t| <= 1/3`.
///
/// Returns the scaled value and an upper bound on its absolute error in ulps.
fn atanh_fixed(t: &Rational, bits: u32) -> (BigInt, BigInt) {
    debug_assert!(t.abs() <= rat(1, 3));
    let scale = BigInt::one() << bits;
    let t_fp = (t.numer() * &scale).div_floor(t.denom());
    let t2 = (&t_fp * &t_fp) >> bits;
    let mut sum = t_fp.clone();
    let mut pow = t_fp;
    let mut terms: u64 = 1;
    let mut n: u64 = 1;
    let two = BigInt::from(2);
    loop {
        pow = (&pow * &t2) >> bits;
        if pow.abs() <= two {
            break;
        }
        sum += &pow / BigInt::from(2 * n + 1);
        terms += 1;
        n += 1;
    }
    // 2 ulps per term, the initial truncation and a bounded tail.
    let err = BigInt::from(4 * terms + 32);
    (sum, err)
}

/// Enclosure of `ln(x)` for a positive rational, accurate to roughly `bits` bits.
pub fn ln_enclosure(x: &Rational, bits: u32) -> Interval {
    assert!(x.is_positive(), "ln of a non-positive rational");
    if x.is_one() {
        return Interval::point(Rational::zero());
    }
    let mut k = x.numer().bits() as i64 - x.denom().bits() as i64;
    let pow2 = |e: i64| -> Rational {
        if e >= 0 {
            Rational::from_integer(BigInt::one() << e as u64)
        } else {
            Rational::new(BigInt::one(), BigInt::one() << (-e) as u64)
        }
    };
    let mut y = x * pow2(-k);
    if y > rat(4, 3) {
        y /= int(2);
        k += 1;
    }
    if y < rat(2, 3) {
        y *= int(2);
        k -= 1;
    }
    let t = (&y - int(1)) / (&y + int(1));
    let (ln_y, err_y) = atanh_fixed(&t, bits);
    let (ln_2, err_2) = atanh_fixed(&rat(1, 3), bits);
    let k_big = BigInt::from(k);
    let value = (&ln_y + &k_big * &ln_2) * BigInt::from(2);
    let err = (&err_y + k_big.abs() * &err_2) * BigInt::from(2) + BigInt::one();
    let denom = BigInt::one() << bits;
    Interval::new(
        Rational::new(&value - &err, denom.clone()),
        Rational::new(&value + &err, denom),
    )
}

/// Rounds `x` to `digits` fractional digits, half away from zero.
pub fn round_to_decimal(x: &Rational, digits: u32) -> String {
    let scale = BigInt::from(10).pow(digits);
    let scaled = x.abs() * Rational::from_integer(scale.clone());
    let rounded = (scaled + rat(1, 2)).floor().to_integer();
    let (int_part, frac_part) = rounded.div_rem(&scale);
    let sign = if x.is_negative() && !rounded.is_zero() {
        "-"
    } else {
        ""
    };
    if digits == 0 {
        return format!("{sign}{int_part}");
    }
    format!(
        "{sign}{int_part}.{:0>width$}",
        frac_part.to_string(),
        width = digits as usize
    )
}

/// Correctly rounded decimal of a quantity given by a family of shrinking
/// enclosures. `enclose(bits)` must contain the true value for every `bits`.
///
/// Refines until both endpoints round to the same string. Gives up after a
/// fixed number of refinements and returns the rounding of the midpoint
/// together with `false`.
pub fn certified_decimal<F>(digits: u32, enclose: F) -> (String, bool)
where
    F: Fn(u32) -> Interval,
{
    let mut bits = digits * 4 + 64;
    for _ in 0..12 {
        let iv = enclose(bits);
        let lo = round_to_decimal(&iv.lo, digits);
        let hi = round_to_decimal(&iv.hi, digits);
        if lo == hi {
            return (lo, true);
        }
        bits *= 2;
    }
    let iv = enclose(bits);
    let mid = (&iv.lo + &iv.hi) / int(2);
    (round_to_decimal(&mid, digits), false)
}

/// Certified comparison `ln(r) < 1`, i.e. `r < e`.
pub fn ln_below_one(r: &Rational) -> Certified {
    if !r.is_positive() {
        return Certified::True;
    }
    for digits in [20u32, 60, 200] {
        let e = e_enclosure(digits);
        if r < &e.lo {
            return Certified::True;
        }
        if r > &e.hi {
            return Certified::False;
        }
    }
    Certified::Unknown
}

/// Compares `a^p` and `b^q` for positive rationals and natural exponents.
pub fn compare_powers(a: &Rational, p: u32, b: &Rational, q: u32) -> Ordering {
    let lhs = Rational::new(a.numer().pow(p), a.denom().pow(p));
    let rhs = Rational::new(b.numer().pow(q), b.denom().pow(q));
    lhs.cmp(&rhs)
}

/// Display adapter printing a rational as `p/q`.
pub struct PQ<'a>(pub &'a Rational);

impl fmt::Display for PQ<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("1/2").unwrap(), rat(1, 2));
        assert_eq!(parse_rational(" -3/6 ").unwrap(), rat(-1, 2));
        assert_eq!(parse_rational("7").unwrap(), int(7));
        assert_eq!(format_rational(&int(4)), "4/1");
        assert!(matches!(
            parse_rational("1/0"),
            Err(ParseRationalError::ZeroDenominator(_))
        ));
        assert!(parse_rational("0.5").is_err());
        assert!(parse_rational("a/b").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn e_interval_contains_e() {
        // 2.718281828459045235360287471352662497757...
        let e_lo =
            parse_rational("2718281828459045235360287471352/1000000000000000000000000000000")
                .unwrap();
        let e_hi =
            parse_rational("2718281828459045235360287471353/1000000000000000000000000000000")
                .unwrap();
        let iv = e_enclosure(25);
        assert!(iv.lo < e_hi && e_lo < iv.hi);
        assert!(iv.width() < rat(1, 1_000_000_000_000_000));
    }

    #[test]
    fn ln_enclosures_agree_with_f64() {
        for (x, expect) in [
            (int(4), 4f64.ln()),
            (rat(5, 4), 1.25f64.ln()),
            (rat(1, 10), 0.1f64.ln()),
            (rat(6, 5), 1.2f64.ln()),
            (int(1000), 1000f64.ln()),
        ] {
            let iv = ln_enclosure(&x, 96);
            let lo: f64 = num_traits::ToPrimitive::to_f64(&iv.lo).unwrap();
            let hi: f64 = num_traits::ToPrimitive::to_f64(&iv.hi).unwrap();
            assert!(
                lo <= expect + 1e-15 && expect - 1e-15 <= hi,
                "{x}: [{lo}, {hi}] vs {expect}"
            );
            assert!(iv.width() < rat(1, 1 << 40));
        }
    }

    #[test]
    fn ln2_decimal_is_correctly_rounded() {
        // ln 2 = 0.693147180559945309417232121458...
        let (s, ok) = certified_decimal(20, |bits| ln_enclosure(&int(2), bits));
        assert!(ok);
        assert_eq!(s, "0.69314718055994530942");
        let (s, _) = certified_decimal(12, |bits| ln_enclosure(&int(4), bits));
        assert_eq!(s, "1.386294361120");
    }

    #[test]
    fn rounding_half_away_from_zero() {
        assert_eq!(round_to_decimal(&rat(1, 8), 2), "0.13");
        assert_eq!(round_to_decimal(&rat(-1, 8), 2), "-0.13");
        assert_eq!(round_to_decimal(&rat(1, 3), 0), "0");
        assert_eq!(round_to_decimal(&rat(-1, 1000), 2), "0.00");
    }

    #[test]
    fn ln_below_one_is_e_comparison() {
        assert_eq!(ln_below_one(&rat(5, 2)), Certified::True);
        assert_eq!(ln_below_one(&int(5)), Certified::False);
        assert_eq!(ln_below_one(&rat(2718281, 1000000)), Certified::True);
        assert_eq!(ln_below_one(&rat(2718282, 1000000)), Certified::False);
    }

    #[test]
    fn powers_compare_exactly() {
        assert_eq!(compare_powers(&int(4), 1, &int(2), 2), Ordering::Equal);
        assert_eq!(compare_powers(&rat(3, 2), 2, &int(2), 1), Ordering::Greater);
    }
}
