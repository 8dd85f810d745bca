//! Upper bounds on cobordism length from profile functions.
//!
//! A profile `ρ` equals `u` for `s ≤ 0` and `v` for `s ≥ A`. A derivative
//! constraint `(λ, c)` forbids `ρ′(s) = λ(ρ(s) + c)` anywhere, and a pointwise
//! constraint `(α, β)` forbids `αρ(s) + β = 0`. Since `ρ′` vanishes outside
//! `[0, A]`, the sign of `ρ′ − λ(ρ + c)` is fixed by its value at the ends,
//! so `e^{−λs}(ρ + c)` must be strictly monotone in the forced direction.
//! That pins down the infimum of admissible `A` in closed form.

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::bound::{max_bound, LengthBound, Rule};
use crate::numeric::{
    certified_decimal, e_enclosure, format_rational, int, ln_below_one, Certified, Interval,
    Rational,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProfileConstraint {
    /// Forbids `ρ′ = λ(ρ + c)`.
    Derivative { lambda: Rational, c: Rational },
    /// Forbids `αρ + β = 0`.
    Pointwise { alpha: Rational, beta: Rational },
}

impl ProfileConstraint {
    pub fn derivative(lambda: Rational, c: Rational) -> Self {
        ProfileConstraint::Derivative { lambda, c }
    }

    pub fn pointwise(alpha: Rational, beta: Rational) -> Self {
        ProfileConstraint::Pointwise { alpha, beta }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProfileProblem {
    pub u: Rational,
    pub v: Rational,
    pub constraints: Vec<ProfileConstraint>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("derivative constraints use different values of lambda ({0} and {1})")]
    MixedLambda(String, String),
    #[error("malformed constraint: {0}")]
    MalformedConstraint(String),
    #[error("malformed input: {0}")]
    MalformedInput(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FeasibilityResult {
    /// Feasible for every length above `inf_length`, which is not attained.
    Feasible {
        inf_length: LengthBound,
    },
    Infeasible {
        reason: String,
    },
}

impl FeasibilityResult {
    pub fn inf_length(&self) -> Option<&LengthBound> {
        match self {
            FeasibilityResult::Feasible { inf_length } => Some(inf_length),
            FeasibilityResult::Infeasible { .. } => None,
        }
    }
}

fn same_strict_sign(a: &Rational, b: &Rational) -> bool {
    !a.is_zero() && !b.is_zero() && a.is_positive() == b.is_positive()
}

/// The infimum of profile lengths satisfying every constraint.
pub fn profile_min_length(p: &ProfileProblem) -> Result<FeasibilityResult, ConstructionError> {
    let mut lambda: Option<&Rational> = None;
    for k in &p.constraints {
        match k {
            ProfileConstraint::Derivative { lambda: l, .. } => {
                if l.is_zero() {
                    return Err(ConstructionError::MalformedConstraint("lambda = 0".into()));
                }
                if let Some(prev) = lambda {
                    if prev != l {
                        return Err(ConstructionError::MixedLambda(
                            format_rational(prev),
                            format_rational(l),
                        ));
                    }
                }
                lambda = Some(l);
            }
            ProfileConstraint::Pointwise { alpha, beta } => {
                if alpha.is_zero() && beta.is_zero() {
                    return Err(ConstructionError::MalformedConstraint(
                        "alpha = beta = 0 forbids every value".into(),
                    ));
                }
            }
        }
    }

    let mut best = LengthBound::zero(Rule::Profile);
    for k in &p.constraints {
        match k {
            ProfileConstraint::Derivative { lambda, c } => {
                let (a, b) = (&p.u + c, &p.v + c);
                if !same_strict_sign(&a, &b) {
                    return Ok(FeasibilityResult::Infeasible {
                        reason: format!(
                            "derivative constraint (lambda={}, c={}): u+c = {} and v+c = {} are not both nonzero with the same sign",
                            format_rational(lambda),
                            format_rational(c),
                            format_rational(&a),
                            format_rational(&b)
                        ),
                    });
                }
                // (−1/λ)·ln(a/b) = (1/|λ|)·ln((a/b)^{−sign λ})
                let ratio = if lambda.is_negative() {
                    &a / &b
                } else {
                    &b / &a
                };
                let t = LengthBound::scaled_ln(Rule::Profile, lambda.abs().recip(), ratio)
                    .with_note(format!(
                        "derivative constraint (lambda={}, c={})",
                        format_rational(lambda),
                        format_rational(c)
                    ));
                best = max_bound(best, t);
            }
            ProfileConstraint::Pointwise { alpha, beta } => {
                let (a, b) = (alpha * &p.u + beta, alpha * &p.v + beta);
                if !same_strict_sign(&a, &b) {
                    return Ok(FeasibilityResult::Infeasible {
                        reason: format!(
                            "pointwise constraint (alpha={}, beta={}) separates u from v",
                            format_rational(alpha),
                            format_rational(beta)
                        ),
                    });
                }
            }
        }
    }
    best.open = true;
    Ok(FeasibilityResult::Feasible { inf_length: best })
}

/// The Hopf-link constraint set: `c = 0` twice, `c = −1` and `c = +1`, all
/// with `λ = −1`.
pub fn hopf_profile(u: &Rational, v: &Rational) -> ProfileProblem {
    let d = |c: i64| ProfileConstraint::derivative(int(-1), int(c));
    ProfileProblem {
        u: u.clone(),
        v: v.clone(),
        constraints: vec![d(0), d(0), d(-1), d(1)],
    }
}

/// The vertical-dilation problem for one chord: `u = 1`, `v = σ`, `c = 0`.
pub fn dilation_profile(sigma: &Rational) -> ProfileProblem {
    ProfileProblem {
        u: int(1),
        v: sigma.clone(),
        constraints: vec![ProfileConstraint::derivative(int(-1), int(0))],
    }
}

/// One packing inequality `lower ≤ vᵢ − vⱼ ≤ upper`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PackingCheck {
    pub i: usize,
    pub j: usize,
    pub difference: Rational,
    /// `(i−j)/((k+1)e)`.
    pub lower: Interval,
    /// `1 − ((k+1)−(i−j))/((k+1)e)`.
    pub upper: Interval,
    pub verdict: Certified,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PackingVerdict {
    Feasible,
    Infeasible,
    Boundary,
}

impl PackingVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            PackingVerdict::Feasible => "feasible",
            PackingVerdict::Infeasible => "infeasible",
            PackingVerdict::Boundary => "boundary",
        }
    }

    fn from_certified(c: Certified) -> Self {
        match c {
            Certified::True => PackingVerdict::Feasible,
            Certified::False => PackingVerdict::Infeasible,
            Certified::Unknown => PackingVerdict::Boundary,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PackingReport {
    pub checks: Vec<PackingCheck>,
    pub verdict: PackingVerdict,
}

fn check_shifts(k: usize, v: &[Rational]) -> Result<(), ConstructionError> {
    if k == 0 || v.len() != k {
        return Err(ConstructionError::MalformedInput(format!(
            "expected {k} shifts, got {}",
            v.len()
        )));
    }
    let mut prev = int(0);
    for x in v {
        if x <= &prev {
            return Err(ConstructionError::MalformedInput(
                "shifts must satisfy 0 < v1 < ... < vk < 1".into(),
            ));
        }
        prev = x.clone();
    }
    if prev >= int(1) {
        return Err(ConstructionError::MalformedInput(
            "shifts must satisfy 0 < v1 < ... < vk < 1".into(),
        ));
    }
    Ok(())
}

fn shift(v: &[Rational], i: usize) -> Rational {
    if i == 0 {
        int(0)
    } else {
        v[i - 1].clone()
    }
}

/// Enclosures of the lower and upper thresholds for a gap `d = i − j`.
fn thresholds(k: usize, d: usize, e: &Interval) -> (Interval, Interval) {
    let n = Rational::from_integer(((k + 1) as i64).into());
    let inv_e = e.recip().expect("e > 0");
    let lower = inv_e.scale(&(Rational::from_integer((d as i64).into()) / &n));
    let rest = Rational::from_integer(((k + 1 - d) as i64).into()) / &n;
    let upper = Interval::point(int(1)).sub(&inv_e.scale(&rest));
    (lower, upper)
}

/// Checks `(i−j)/((k+1)e) ≤ vᵢ − vⱼ ≤ 1 − ((k+1)−(i−j))/((k+1)e)` for all
/// `i > j` (with `v₀ = 0`), with `e` enclosed to `digits` decimal digits.
pub fn packing_feasible(
    k: usize,
    v: &[Rational],
    digits: u32,
) -> Result<PackingReport, ConstructionError> {
    check_shifts(k, v)?;
    let e = e_enclosure(digits);
    let mut checks = Vec::new();
    let mut overall = Certified::True;
    for i in 1..=k {
        for j in 0..i {
            let diff = shift(v, i) - shift(v, j);
            let (lower, upper) = thresholds(k, i - j, &e);
            let verdict = lower.le_rational(&diff).and(upper.ge_rational(&diff));
            overall = overall.and(verdict);
            checks.push(PackingCheck {
                i,
                j,
                difference: diff,
                lower,
                upper,
                verdict,
            });
        }
    }
    Ok(PackingReport {
        checks,
        verdict: PackingVerdict::from_certified(overall),
    })
}

/// Correctly rounded decimals of the lower and upper thresholds for each gap
/// `d = 1, …, k`.
pub fn packing_thresholds(k: usize, digits: u32) -> Vec<(usize, String, String)> {
    (1..=k)
        .map(|d| {
            let lo = certified_decimal(digits, |bits| {
                thresholds(k, d, &e_enclosure(bits / 3 + 4)).0
            })
            .0;
            let hi = certified_decimal(digits, |bits| {
                thresholds(k, d, &e_enclosure(bits / 3 + 4)).1
            })
            .0;
            (d, lo, hi)
        })
        .collect()
}

/// One profile problem per pair `i > j`: `u = (i−j)/(k+1)`, `v = vᵢ − vⱼ`,
/// constraints `c ∈ {0, −1, +1}` with `λ = −1`.
pub fn packing_constraints_to_profile(
    k: usize,
    v: &[Rational],
) -> Result<Vec<ProfileProblem>, ConstructionError> {
    check_shifts(k, v)?;
    let n = Rational::from_integer(((k + 1) as i64).into());
    let d = |c: i64| ProfileConstraint::derivative(int(-1), int(c));
    let mut out = Vec::new();
    for i in 1..=k {
        for j in 0..i {
            out.push(ProfileProblem {
                u: Rational::from_integer(((i - j) as i64).into()) / &n,
                v: shift(v, i) - shift(v, j),
                constraints: vec![d(0), d(-1), d(1)],
            });
        }
    }
    Ok(out)
}

/// The packing verdict via profiles: every pair must be feasible with an
/// infimum below 1.
pub fn packing_via_profiles(k: usize, v: &[Rational]) -> Result<PackingVerdict, ConstructionError> {
    let mut overall = Certified::True;
    for p in packing_constraints_to_profile(k, v)? {
        let verdict = match profile_min_length(&p)? {
            FeasibilityResult::Infeasible { .. } => Certified::False,
            FeasibilityResult::Feasible { inf_length } => {
                // coefficient is 1 for λ = −1
                ln_below_one(&inf_length.ratio)
            }
        };
        overall = overall.and(verdict);
    }
    Ok(PackingVerdict::from_certified(overall))
}
