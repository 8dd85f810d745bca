//! Cobordism maps between DGAs and the length lower bounds they imply.
//!
//! A [`ChainMap`] goes from the DGA of the upper end `Λ₊` to the DGA of the
//! lower end `Λ₋`. Linearizing at an augmentation `ε₋` of the lower end gives
//! maps `ψ_k` from the lower end's dual complex to the upper end's, and the
//! length of the cobordism is at least `ln c₋(θ) − ln c₊(Ψθ)`.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::algebra::{monomial_height, AlgebraError, Dga, GenId, Monomial, Poly};
use crate::augment::{
    check_augmentation, enumerate_augmentations, eta, twist, AugmentError, Augmentation,
    EnumerateOptions, TwistedDga,
};
use crate::bound::{LengthBound, Rule};
use crate::cohomology::{
    capacity, cohomology, split_by_components, Capacity, CochainComplex, CohomologyClass,
    CohomologyError,
};
use crate::f2::{self, Vector};
use crate::numeric::{format_rational, Rational};
use crate::par::Exec;
use crate::report::ValidationReport;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CobordismError {
    #[error("assignments do not cover degree-0 generator {0}")]
    InsufficientAssignments(String),
    #[error(transparent)]
    Augment(#[from] AugmentError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
    #[error("constant part of the linearized map is nonzero on {0}")]
    ConstantPartNonzero(String),
    #[error("undetermined: {0}")]
    Undetermined(String),
    #[error("image {0} is not a cocycle")]
    ImageNotCocycle(String),
    #[error("image class is zero")]
    ImageClassZero,
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("dimension mismatch in block {block:?}: {detail}")]
    DimensionMismatch {
        block: (usize, usize),
        detail: String,
    },
}

/// A DGA map from the upper end to the lower end, possibly defined only on
/// some generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMap {
    pub source: Dga,
    pub target: Dga,
    pub assignments: BTreeMap<GenId, Poly>,
    pub partial: bool,
}

impl ChainMap {
    /// Builds a map from images given as words of target generator names.
    pub fn from_words<S: AsRef<str>>(
        source: Dga,
        target: Dga,
        assignments: &[(&str, Vec<Vec<S>>)],
        partial: bool,
    ) -> Result<ChainMap, AlgebraError> {
        let mut map = BTreeMap::new();
        for (name, words) in assignments {
            let g = source.id(name)?;
            map.insert(g, target.poly_from_words(words)?);
        }
        Ok(ChainMap {
            source,
            target,
            assignments: map,
            partial,
        })
    }

    /// The identity of a DGA.
    pub fn identity(dga: &Dga) -> ChainMap {
        ChainMap {
            source: dga.clone(),
            target: dga.clone(),
            assignments: dga.ids().map(|g| (g, Poly::generator(g))).collect(),
            partial: false,
        }
    }

    pub fn is_assigned(&self, g: GenId) -> bool {
        self.assignments.contains_key(&g)
    }

    /// `φ(p)`, or `None` when a letter of `p` is unassigned.
    pub fn apply(&self, p: &Poly) -> Option<Poly> {
        if p.letters().iter().any(|g| !self.is_assigned(*g)) {
            return None;
        }
        Some(p.substitute(|g| self.assignments[&g].clone()))
    }
}

/// Degree preservation, and `φ∂₊ = ∂₋φ` on every assigned generator whose
/// differential only involves assigned generators.
pub fn validate_chain_map(m: &ChainMap) -> ValidationReport {
    let mut r = ValidationReport::new();
    let (src, tgt) = (&m.source, &m.target);
    for (&a, img) in &m.assignments {
        let name = src.name(a);
        if let Err(e) = tgt.check_ids(img) {
            r.violation("unknown-generator", name, e.to_string());
            continue;
        }
        for w in img.terms() {
            let deg = tgt.word_degree(w);
            if !tgt.degrees_agree(deg, src.degree(a)) {
                r.violation(
                    "degree",
                    format!("φ({name}) ∋ {}", tgt.format_monomial(w)),
                    format!("word has degree {deg}, expected {}", src.degree(a)),
                );
            }
        }
        let lhs = m.apply(src.differential(a));
        let rhs = crate::algebra::differential_extend(tgt, img).expect("ids checked");
        match lhs {
            Some(lhs) if lhs != rhs => r.violation(
                "chain-map",
                name,
                format!(
                    "φ(∂{name}) = {} but ∂φ({name}) = {}",
                    tgt.format_poly(&lhs),
                    tgt.format_poly(&rhs)
                ),
            ),
            Some(_) => {}
            None => r.warning(
                "undetermined",
                name,
                format!("∂{name} involves unassigned generators"),
            ),
        }
    }
    for g in src.ids().filter(|g| !m.is_assigned(*g)) {
        if m.partial {
            r.warning("undetermined", src.name(g), "no assignment");
        } else {
            r.violation("unassigned", src.name(g), "total map without an assignment");
        }
    }
    r
}

/// `ε₊ = ε₋ ∘ φ`.
pub fn push_augmentation(
    m: &ChainMap,
    eps_minus: &Augmentation,
) -> Result<Augmentation, CobordismError> {
    check_augmentation(&m.target, eps_minus)?;
    let mut ones = BTreeSet::new();
    for g in m.source.ids() {
        if m.source.reduce_degree(m.source.degree(g)) != 0 {
            continue;
        }
        let img = m
            .assignments
            .get(&g)
            .ok_or_else(|| CobordismError::InsufficientAssignments(m.source.name(g).into()))?;
        if eps_minus.eval(img) {
            ones.insert(g);
        }
    }
    let eps_plus = Augmentation { ones };
    check_augmentation(&m.source, &eps_plus)?;
    Ok(eps_plus)
}

/// Sparse multilinear maps `ψ_k`, adjoint to the word-length-`k` parts of
/// `φ_ε = η^{ε₋} ∘ φ ∘ η^{ε₊}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearizedCobordismMap {
    pub plus: TwistedDga,
    pub minus: TwistedDga,
    /// `φ_ε` on assigned source generators.
    pub images: BTreeMap<GenId, Poly>,
    /// `psi[k]`: word of `k` lower-end chords → upper-end chords.
    pub psi: Vec<BTreeMap<Vec<GenId>, BTreeSet<GenId>>>,
}

impl LinearizedCobordismMap {
    /// `ψ_k(c₁*, …, c_k*)` is determined when every upper-end generator of
    /// the matching degree is assigned.
    pub fn is_determined(&self, inputs: &[GenId]) -> bool {
        let tgt = &self.minus.base;
        let src = &self.plus.base;
        let deg: i64 = inputs.iter().map(|&c| tgt.degree(c)).sum();
        src.ids()
            .filter(|&a| src.degrees_agree(src.degree(a), deg))
            .all(|a| self.images.contains_key(&a))
    }

    pub fn psi_k(&self, inputs: &[GenId]) -> Result<Vector, CobordismError> {
        if !self.is_determined(inputs) {
            let names: Vec<&str> = inputs.iter().map(|&c| self.minus.base.name(c)).collect();
            return Err(CobordismError::Undetermined(format!(
                "ψ_{}({}) needs unassigned generators",
                inputs.len(),
                names.join(", ")
            )));
        }
        Ok(self
            .psi
            .get(inputs.len())
            .and_then(|t| t.get(inputs))
            .cloned()
            .unwrap_or_default())
    }

    /// `ψ₁` on a vector of lower-end chords.
    pub fn psi1(&self, x: &Vector) -> Result<Vector, CobordismError> {
        let mut out = Vector::new();
        for &c in x {
            f2::add_into(&mut out, &self.psi_k(&[c])?);
        }
        Ok(out)
    }

    /// `ψ_k(θ₁, …, θ_k)` on vectors, expanded multilinearly.
    pub fn psi_multi(&self, thetas: &[Vector]) -> Result<Vector, CobordismError> {
        let mut out = Vector::new();
        let mut stack: Vec<Vec<GenId>> = vec![Vec::new()];
        for theta in thetas {
            stack = stack
                .into_iter()
                .flat_map(|w| {
                    theta.iter().map(move |&c| {
                        let mut w = w.clone();
                        w.push(c);
                        w
                    })
                })
                .collect();
        }
        for w in stack {
            f2::add_into(&mut out, &self.psi_k(&w)?);
        }
        Ok(out)
    }
}

/// Twists both ends and takes adjoints of the word-length parts of `φ_ε`.
pub fn linearize_map(
    m: &ChainMap,
    eps_minus: &Augmentation,
) -> Result<LinearizedCobordismMap, CobordismError> {
    let eps_plus = push_augmentation(m, eps_minus)?;
    let plus = twist(&m.source, &eps_plus)?;
    let minus = twist(&m.target, eps_minus)?;
    let mut images = BTreeMap::new();
    let mut psi: Vec<BTreeMap<Vec<GenId>, BTreeSet<GenId>>> = vec![BTreeMap::new()];
    for (&a, img) in &m.assignments {
        let mut shifted = img.clone();
        if eps_plus.value(a) {
            shifted.toggle(Monomial::unit());
        }
        let phi_eps = eta(eps_minus, &shifted);
        if phi_eps.has_constant_term() {
            return Err(CobordismError::ConstantPartNonzero(m.source.name(a).into()));
        }
        for w in phi_eps.terms() {
            let k = w.len();
            if psi.len() <= k {
                psi.resize(k + 1, BTreeMap::new());
            }
            psi[k].entry(w.letters().to_vec()).or_default().insert(a);
        }
        images.insert(a, phi_eps);
    }
    Ok(LinearizedCobordismMap {
        plus,
        minus,
        images,
        psi,
    })
}

/// The A∞-map relation in dual form, `φ_ε ∂₊^ε = ∂₋^ε φ_ε`, compared on
/// words of length at most `n_max`, for assigned generators whose twisted
/// differential only involves assigned generators.
pub fn check_a_infinity_map(lin: &LinearizedCobordismMap, n_max: usize) -> ValidationReport {
    let mut r = ValidationReport::new();
    let src = &lin.plus.twisted;
    let tgt = &lin.minus.twisted;
    let truncate = |p: &Poly| Poly::from_monomials(p.terms().filter(|w| w.len() <= n_max).cloned());
    for (&a, img) in &lin.images {
        let da = src.differential(a);
        if da.letters().iter().any(|g| !lin.images.contains_key(g)) {
            continue;
        }
        let lhs = da.substitute(|g| lin.images[&g].clone());
        let rhs = crate::algebra::differential_extend(tgt, img).expect("ids are internal");
        let (lhs, rhs) = (truncate(&lhs), truncate(&rhs));
        if lhs != rhs {
            r.violation(
                "a-infinity-map",
                src.name(a),
                format!(
                    "words of length ≤ {n_max}: {} ≠ {}",
                    tgt.format_poly(&lhs),
                    tgt.format_poly(&rhs)
                ),
            );
        }
    }
    r
}

/// The induced map on cohomology in the given bases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InducedMap {
    pub minus_classes: Vec<CohomologyClass>,
    pub plus_classes: Vec<CohomologyClass>,
    /// Column `j` gives the coordinates of `Ψ₁` of minus class `j`, or the
    /// reason it is undetermined.
    pub columns: Vec<Result<Vec<bool>, String>>,
}

/// `Ψ₁[x] = [ψ₁x]`, checking that the image is a cocycle.
pub fn induced_class(
    lin: &LinearizedCobordismMap,
    c_plus: &CochainComplex,
    x: &Vector,
) -> Result<Vector, CobordismError> {
    let y = lin.psi1(x)?;
    if !c_plus.apply(&y).is_empty() {
        return Err(CobordismError::ImageNotCocycle(c_plus.format_vector(&y)));
    }
    Ok(y)
}

pub fn induced_cohomology_map(
    lin: &LinearizedCobordismMap,
    c_minus: &CochainComplex,
    c_plus: &CochainComplex,
) -> InducedMap {
    let minus_classes = cohomology(c_minus);
    let plus_classes = cohomology(c_plus);
    let columns = minus_classes
        .iter()
        .map(|k| {
            induced_class(lin, c_plus, &k.representative)
                .map(|y| {
                    crate::cohomology::class_coordinates(c_plus, &plus_classes, &y)
                        .expect("a cocycle has coordinates in a cohomology basis")
                })
                .map_err(|e| e.to_string())
        })
        .collect();
    InducedMap {
        minus_classes,
        plus_classes,
        columns,
    }
}

/// `max(0, ln(c₋/c₊))`.
pub fn capacity_lower_bound(
    c_minus: &Capacity,
    c_plus: &Capacity,
) -> Result<LengthBound, CobordismError> {
    let cm = c_minus
        .finite()
        .ok_or_else(|| CobordismError::PreconditionFailed("the lower-end class is zero".into()))?;
    let cp = c_plus.finite().ok_or(CobordismError::ImageClassZero)?;
    Ok(LengthBound::ln(Rule::Capacity, cm / cp))
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BestBoundOptions {
    /// A lower-end cocycle trusted to map to a nonzero class. When its image
    /// is undetermined, its image capacity is bounded by the largest chord
    /// height of the upper end.
    pub assume_fundamental: Option<Vector>,
    pub exec: Exec,
}

/// The best capacity bound with its warnings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BestBound {
    pub bound: LengthBound,
    pub theta: Option<Vector>,
    pub warnings: Vec<String>,
}

const EXHAUSTIVE_LIMIT: usize = 20;

/// Maximizes the capacity bound over nonzero lower-end classes with a
/// determined, nonzero image.
pub fn best_capacity_bound(
    m: &ChainMap,
    eps_minus: &Augmentation,
    opts: &BestBoundOptions,
) -> Result<BestBound, CobordismError> {
    let lin = linearize_map(m, eps_minus)?;
    let c_minus = crate::cohomology::linearized_complex(&lin.minus);
    let c_plus = crate::cohomology::linearized_complex(&lin.plus);
    let classes = cohomology(&c_minus);
    let mut warnings = Vec::new();

    let mut candidates: Vec<Vector> = Vec::new();
    let degrees: BTreeSet<i64> = classes.iter().map(|k| k.degree).collect();
    for d in degrees {
        let basis: Vec<&Vector> = classes
            .iter()
            .filter(|k| k.degree == d)
            .map(|k| &k.representative)
            .collect();
        if basis.len() <= EXHAUSTIVE_LIMIT {
            for mask in 1u32..(1u32 << basis.len()) {
                let mut v = Vector::new();
                for (i, b) in basis.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        f2::add_into(&mut v, b);
                    }
                }
                candidates.push(v);
            }
        } else {
            warnings.push(format!(
                "degree {d} has {} classes; searching basis classes only",
                basis.len()
            ));
            candidates.extend(basis.into_iter().cloned());
        }
    }
    if let Some(f) = &opts.assume_fundamental {
        if !candidates.contains(f) {
            candidates.push(f.clone());
        }
    }

    let max_plus = m.source.max_height().cloned();
    let evaluated = opts.exec.map(candidates, |theta| {
        let c_m = capacity(&c_minus, &theta)?;
        let assumed = opts.assume_fundamental.as_ref() == Some(&theta);
        match induced_class(&lin, &c_plus, &theta) {
            Ok(y) => {
                let c_p = capacity(&c_plus, &y)?;
                if c_p == Capacity::Infinite {
                    return Ok(None);
                }
                let b = capacity_lower_bound(&c_m, &c_p)?;
                Ok(Some((theta, y, c_m, c_p, b, false)))
            }
            Err(CobordismError::Undetermined(_)) if assumed => {
                let Some(h) = max_plus.clone() else {
                    return Ok(None);
                };
                let c_p = Capacity::Finite(h);
                let b = capacity_lower_bound(&c_m, &c_p)?;
                Ok(Some((theta.clone(), Vector::new(), c_m, c_p, b, true)))
            }
            Err(CobordismError::Undetermined(_)) => Ok(None),
            Err(e) => Err(e),
        }
    });

    let mut best: Option<BestBound> = None;
    for item in evaluated {
        let Some((theta, y, c_m, c_p, b, assumed)) = item? else {
            continue;
        };
        let better = match &best {
            None => true,
            Some(cur) => b.cmp_value(&cur.bound) == std::cmp::Ordering::Greater,
        };
        if better {
            let mut b = b
                .with_note(format!("theta = [{}]", c_minus.format_vector(&theta)))
                .with_note(format!("c-(theta) = {c_m}"));
            if assumed {
                b = b.with_note(format!(
                    "assume-fundamental: image undetermined, c+ bounded by the largest upper-end chord height {c_p}"
                ));
            } else {
                b = b
                    .with_note(format!("Psi1(theta) = [{}]", c_plus.format_vector(&y)))
                    .with_note(format!("c+(Psi1 theta) = {c_p}"));
            }
            best = Some(BestBound {
                bound: b,
                theta: Some(theta),
                warnings: Vec::new(),
            });
        }
    }
    let mut best = best.unwrap_or(BestBound {
        bound: LengthBound::zero(Rule::Capacity)
            .with_note("no class with a determined nonzero image"),
        theta: None,
        warnings: Vec::new(),
    });
    best.warnings = warnings;
    Ok(best)
}

/// `max(0, ln(u/v))` for the smallest lower-end chord height `u` and the
/// largest upper-end chord height `v`.
pub fn chord_diff_bound(
    min_height_minus: &Rational,
    max_height_plus: &Rational,
    minus_connected: bool,
    minus_augmentable: bool,
    plus_connected: bool,
) -> Result<LengthBound, CobordismError> {
    for (ok, what) in [
        (minus_connected, "the lower end is not connected"),
        (minus_augmentable, "the lower end has no augmentation"),
        (plus_connected, "the upper end is not connected"),
    ] {
        if !ok {
            return Err(CobordismError::PreconditionFailed(what.into()));
        }
    }
    Ok(
        LengthBound::ln(Rule::ChordDiff, min_height_minus / max_height_plus)
            .with_note(format!("u = {}", format_rational(min_height_minus)))
            .with_note(format!("v = {}", format_rational(max_height_plus))),
    )
}

/// [`chord_diff_bound`] with its hypotheses read off two DGAs.
pub fn chord_diff_bound_for(minus: &Dga, plus: &Dga) -> Result<LengthBound, CobordismError> {
    let augmentable = !enumerate_augmentations(minus, EnumerateOptions::default())?.is_empty();
    let (Some(u), Some(v)) = (minus.min_height(), plus.max_height()) else {
        return Err(CobordismError::PreconditionFailed(
            "an end has no Reeb chords".into(),
        ));
    };
    chord_diff_bound(
        u,
        v,
        minus.num_components == 1,
        augmentable,
        plus.num_components == 1,
    )
}

/// The smallest `s₊ − s₋` making every term of every assigned `φ(a)` satisfy
/// `e^{s₊} h(a) ≥ e^{s₋} Σ h(bᵢ)`.
pub fn chain_action_bound(m: &ChainMap) -> LengthBound {
    let mut best = LengthBound::zero(Rule::ChainAction);
    for (&a, img) in &m.assignments {
        let ha = m.source.height(a);
        for w in img.terms().filter(|w| !w.is_empty()) {
            let hw = monomial_height(&m.target, w).expect("ids are internal");
            let b = LengthBound::ln(Rule::ChainAction, &hw / ha);
            if best.provenance.is_empty() || b.cmp_value(&best) == std::cmp::Ordering::Greater {
                best = b
                    .with_note(format!(
                        "term {} of phi({})",
                        m.target.format_monomial(w),
                        m.source.name(a)
                    ))
                    .with_note(format!(
                        "ratio {} / {}",
                        format_rational(&hw),
                        format_rational(ha)
                    ));
            }
        }
    }
    best
}

/// `max(0, Σ ln c₋(θᵢ) − ln c₊([ψ_k(θ₁, …, θ_k)]))`, evaluated at chain level.
pub fn product_bound(
    lin: &LinearizedCobordismMap,
    thetas: &[Vector],
) -> Result<LengthBound, CobordismError> {
    let c_minus = crate::cohomology::linearized_complex(&lin.minus);
    let c_plus = crate::cohomology::linearized_complex(&lin.plus);
    let mut product = Rational::from_integer(1.into());
    let mut notes = Vec::new();
    for theta in thetas {
        let c = capacity(&c_minus, theta)?;
        let h = c.finite().ok_or_else(|| {
            CobordismError::PreconditionFailed(format!(
                "[{}] is zero",
                c_minus.format_vector(theta)
            ))
        })?;
        product *= h;
        notes.push(format!("c-([{}]) = {c}", c_minus.format_vector(theta)));
    }
    let y = lin.psi_multi(thetas)?;
    if !c_plus.apply(&y).is_empty() {
        return Err(CobordismError::ImageNotCocycle(c_plus.format_vector(&y)));
    }
    let cp = capacity(&c_plus, &y)?;
    let cp = cp.finite().ok_or(CobordismError::ImageClassZero)?.clone();
    let mut b = LengthBound::ln(Rule::Product, product / &cp);
    b.provenance = notes;
    b.provenance.push(format!(
        "psi_{}(...) = [{}], c+ = {}",
        thetas.len(),
        c_plus.format_vector(&y),
        format_rational(&cp)
    ));
    Ok(b)
}

/// Bound for a cobordism assumed to be a union of cylinders, one per
/// component, matching lower component `i` with upper component
/// `pairing[i]`. Classes are matched through the forced isomorphism in
/// blocks whose cohomology is at most one-dimensional in each degree.
pub fn split_cylinder_bound(
    minus: &Dga,
    plus: &Dga,
    eps_minus: &Augmentation,
    eps_plus: &Augmentation,
    pairing: &[usize],
) -> Result<BestBound, CobordismError> {
    if pairing.len() != minus.num_components || plus.num_components != minus.num_components {
        return Err(CobordismError::PreconditionFailed(
            "pairing must match components one to one".into(),
        ));
    }
    let cm = crate::cohomology::linearized_complex(&twist(minus, eps_minus)?);
    let cp = crate::cohomology::linearized_complex(&twist(plus, eps_plus)?);
    let bm = split_by_components(&cm)?;
    let bp = split_by_components(&cp)?;
    let mut warnings = Vec::new();
    let mut best = LengthBound::zero(Rule::SplitCylinder);
    let mut theta = None;
    for (&(l, u), block_m) in &bm {
        let key = (pairing[l], pairing[u]);
        let km = cohomology(block_m);
        let kp = bp.get(&key).map(cohomology).unwrap_or_default();
        let dims = |ks: &[CohomologyClass]| {
            let mut m: BTreeMap<i64, usize> = BTreeMap::new();
            for k in ks {
                *m.entry(k.degree).or_default() += 1;
            }
            m
        };
        let (dm, dp) = (dims(&km), dims(&kp));
        if dm != dp {
            return Err(CobordismError::DimensionMismatch {
                block: (l, u),
                detail: format!("lower end {dm:?}, upper end {dp:?}"),
            });
        }
        if dm.values().any(|&n| n > 1) {
            warnings.push(format!("block {:?}: ambiguous matching, skipped", (l, u)));
            continue;
        }
        for k in &km {
            let matched = kp
                .iter()
                .find(|p| p.degree == k.degree)
                .expect("same dimensions");
            let c_m = capacity(block_m, &k.representative)?;
            let c_p = capacity(&bp[&key], &matched.representative)?;
            let b = capacity_lower_bound(&c_m, &c_p)?;
            if theta.is_none() || b.cmp_value(&best) == std::cmp::Ordering::Greater {
                best = b.with_note(format!(
                    "block {:?}: [{}] (c = {c_m}) -> [{}] (c = {c_p})",
                    (l, u),
                    cm.format_vector(&k.representative),
                    cp.format_vector(&matched.representative)
                ));
                best.rule = Rule::SplitCylinder;
                theta = Some(k.representative.clone());
            }
        }
    }
    Ok(BestBound {
        bound: best,
        theta,
        warnings,
    })
}
