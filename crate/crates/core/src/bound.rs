//! Exact length bounds `k·ln(p/q)`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};

use crate::numeric::{
    certified_decimal, compare_powers, format_rational, int, ln_enclosure, Rational,
};

/// The rule that produced a bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    Capacity,
    ChordDiff,
    ChainAction,
    SplitCylinder,
    Product,
    Profile,
}

impl Rule {
    pub fn as_str(self) -> &'static str {
        match self {
            Rule::Capacity => "capacity",
            Rule::ChordDiff => "chord-diff",
            Rule::ChainAction => "chain-action",
            Rule::SplitCylinder => "split-cylinder",
            Rule::Product => "product",
            Rule::Profile => "profile",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// `coefficient · ln(ratio)`, clamped below at 0. The unclamped ratio is
/// kept in `raw_ratio`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LengthBound {
    pub coefficient: Rational,
    pub ratio: Rational,
    pub raw_ratio: Rational,
    pub rule: Rule,
    /// An infimum that is not attained.
    pub open: bool,
    pub provenance: Vec<String>,
}

impl LengthBound {
    pub fn zero(rule: Rule) -> Self {
        Self::ln(rule, int(1))
    }

    /// `max(0, ln(ratio))`.
    pub fn ln(rule: Rule, ratio: Rational) -> Self {
        Self::scaled_ln(rule, int(1), ratio)
    }

    /// `max(0, coefficient · ln(ratio))` for a positive coefficient.
    pub fn scaled_ln(rule: Rule, coefficient: Rational, ratio: Rational) -> Self {
        assert!(coefficient.is_positive() && ratio.is_positive());
        let clamped = if ratio < int(1) {
            int(1)
        } else {
            ratio.clone()
        };
        LengthBound {
            coefficient,
            ratio: clamped,
            raw_ratio: ratio,
            rule,
            open: false,
            provenance: Vec::new(),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.provenance.push(note.into());
        self
    }

    pub fn is_zero(&self) -> bool {
        self.ratio.is_one()
    }

    /// Compares values exactly: `c₁ ln r₁` against `c₂ ln r₂` by comparing
    /// `r₁^(a₁b₂)` with `r₂^(a₂b₁)` where `cᵢ = aᵢ/bᵢ`.
    pub fn cmp_value(&self, other: &LengthBound) -> Ordering {
        match (self.is_zero(), other.is_zero()) {
            (true, true) => return Ordering::Equal,
            (true, false) => return Ordering::Less,
            (false, true) => return Ordering::Greater,
            _ => {}
        }
        let exp = |a: &BigInt, b: &BigInt| (a * b).to_u32().expect("coefficient too large");
        let p = exp(self.coefficient.numer(), other.coefficient.denom());
        let q = exp(other.coefficient.numer(), self.coefficient.denom());
        compare_powers(&self.ratio, p, &other.ratio, q)
    }

    pub fn same_value(&self, other: &LengthBound) -> bool {
        self.cmp_value(other) == Ordering::Equal
    }

    /// `"0"`, `"ln(p/q)"` or `"(a/b)*ln(p/q)"`.
    pub fn exact(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let ln = format!("ln({})", format_rational(&self.ratio));
        if self.coefficient.is_one() {
            ln
        } else {
            format!("({})*{ln}", format_rational(&self.coefficient))
        }
    }

    /// Correctly rounded decimal with `digits` fractional digits.
    pub fn decimal(&self, digits: u32) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let (s, certified) = certified_decimal(digits, |bits| {
            ln_enclosure(&self.ratio, bits).scale(&self.coefficient)
        });
        debug_assert!(certified);
        s
    }

    pub fn to_f64(&self) -> f64 {
        self.coefficient.to_f64().unwrap_or(f64::NAN) * self.ratio.to_f64().unwrap_or(f64::NAN).ln()
    }

    /// `"> ln(p/q)"` for open bounds.
    pub fn display_exact(&self) -> String {
        if self.open {
            format!("> {}", self.exact())
        } else {
            self.exact()
        }
    }
}

impl fmt::Display for LengthBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}]", self.display_exact(), self.rule)
    }
}

/// The larger of two bounds; ties keep the first.
pub fn max_bound(a: LengthBound, b: LengthBound) -> LengthBound {
    if b.cmp_value(&a) == Ordering::Greater {
        b
    } else {
        a
    }
}

impl Default for LengthBound {
    fn default() -> Self {
        LengthBound::zero(Rule::Capacity)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rat;

    #[test]
    fn clamping_and_rendering() {
        let b = LengthBound::ln(Rule::Capacity, rat(1, 2));
        assert!(b.is_zero());
        assert_eq!(b.exact(), "0");
        assert_eq!(b.decimal(12), "0");
        assert_eq!(b.raw_ratio, rat(1, 2));
        let b = LengthBound::ln(Rule::Capacity, int(4));
        assert_eq!(b.exact(), "ln(4/1)");
        assert_eq!(b.decimal(12), "1.386294361120");
    }

    #[test]
    fn exact_comparison() {
        let ln4 = LengthBound::ln(Rule::Capacity, int(4));
        let two_ln2 = LengthBound::scaled_ln(Rule::Profile, int(2), int(2));
        assert!(ln4.same_value(&two_ln2));
        let ln5_4 = LengthBound::ln(Rule::ChainAction, rat(5, 4));
        assert_eq!(ln5_4.cmp_value(&ln4), Ordering::Less);
        let half_ln5 = LengthBound::scaled_ln(Rule::Profile, rat(1, 2), int(5));
        assert_eq!(
            half_ln5.cmp_value(&LengthBound::ln(Rule::Profile, int(2))),
            Ordering::Greater
        );
        assert_eq!(half_ln5.exact(), "(1/2)*ln(5/1)");
    }
}
