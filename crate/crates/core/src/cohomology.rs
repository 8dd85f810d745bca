//! Linearized cochain complexes, their cohomology, and capacities with
//! respect to the height filtration.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::algebra::{Dga, GenId};
use crate::augment::TwistedDga;
use crate::f2::{self, Echelon, Vector};
use crate::numeric::{format_rational, Rational};
use crate::report::ValidationReport;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CohomologyError {
    #[error("not a cocycle: d({rep}) = {image}")]
    NotACocycle { rep: String, image: String },
    #[error("splitting not preserved: d({chord}) reaches block {to:?} from block {from:?}")]
    SplittingNotPreserved {
        chord: String,
        from: (usize, usize),
        to: (usize, usize),
    },
}

/// The dual chord complex with codifferential `d^ε`, the adjoint of the
/// linear part of `∂^ε`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CochainComplex {
    /// Generator table (names, degrees, heights, components).
    pub dga: Dga,
    /// Chords spanning this complex, in name order.
    pub basis: Vec<GenId>,
    d: BTreeMap<GenId, Vector>,
}

/// `d^ε c = Σ_a ⟨∂^ε a, c⟩ a` over the linear part.
pub fn linearized_complex(t: &TwistedDga) -> CochainComplex {
    let dga = &t.twisted;
    let mut d: BTreeMap<GenId, Vector> = dga.ids().map(|c| (c, Vector::new())).collect();
    for a in dga.ids() {
        for m in t.differential(a).word_length_part(1).terms() {
            d.get_mut(&m.letters()[0]).unwrap().insert(a);
        }
    }
    CochainComplex {
        dga: t.base.clone(),
        basis: dga.ids().collect(),
        d,
    }
}

impl CochainComplex {
    pub fn d_of(&self, c: GenId) -> &Vector {
        &self.d[&c]
    }

    pub fn apply(&self, x: &Vector) -> Vector {
        let mut out = Vector::new();
        for c in x {
            f2::add_into(&mut out, &self.d[c]);
        }
        out
    }

    pub fn degree(&self, c: GenId) -> i64 {
        self.dga.reduce_degree(self.dga.degree(c))
    }

    pub fn height(&self, c: GenId) -> &Rational {
        self.dga.height(c)
    }

    /// Reduced degrees present, ascending.
    pub fn degrees(&self) -> BTreeSet<i64> {
        self.basis.iter().map(|&c| self.degree(c)).collect()
    }

    pub fn chords_in_degree(&self, k: i64) -> Vec<GenId> {
        self.basis
            .iter()
            .copied()
            .filter(|&c| self.degree(c) == k)
            .collect()
    }

    /// Matrix of `d^ε` from degree `k` to degree `k + 1`: rows indexed by
    /// target chords, columns by source chords.
    pub fn matrix(&self, k: i64) -> (Vec<GenId>, Vec<GenId>, Vec<Vec<bool>>) {
        let cols = self.chords_in_degree(k);
        let rows = self.chords_in_degree(self.dga.reduce_degree(k + 1));
        let m = rows
            .iter()
            .map(|r| cols.iter().map(|c| self.d[c].contains(r)).collect())
            .collect();
        (rows, cols, m)
    }

    pub fn format_vector(&self, x: &Vector) -> String {
        if x.is_empty() {
            return "0".into();
        }
        x.iter()
            .map(|&c| self.dga.name(c))
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// `d∘d = 0`, degree `+1`, and `d(F^w) ⊆ F^w` at every chord height.
    pub fn check(&self) -> ValidationReport {
        let mut r = ValidationReport::new();
        for &c in &self.basis {
            let dc = &self.d[&c];
            let ddc = self.apply(dc);
            if !ddc.is_empty() {
                r.violation(
                    "d-squared",
                    self.dga.name(c),
                    format!("d(d({})) = {}", self.dga.name(c), self.format_vector(&ddc)),
                );
            }
            for &a in dc {
                if !self
                    .dga
                    .degrees_agree(self.dga.degree(a), self.dga.degree(c) + 1)
                {
                    r.violation(
                        "degree",
                        self.dga.name(c),
                        format!("d reaches {} in the wrong degree", self.dga.name(a)),
                    );
                }
                if self.height(a) < self.height(c) {
                    r.violation(
                        "filtration",
                        self.dga.name(c),
                        format!(
                            "d leaves F^{}: reaches {} of height {}",
                            format_rational(self.height(c)),
                            self.dga.name(a),
                            format_rational(self.height(a))
                        ),
                    );
                }
            }
        }
        r
    }

    /// Distinct chord heights, descending.
    pub fn levels(&self) -> Vec<Rational> {
        let hs: BTreeSet<Rational> = self.basis.iter().map(|&c| self.height(c).clone()).collect();
        hs.into_iter().rev().collect()
    }

    fn image(&self) -> Echelon {
        Echelon::from_vectors(self.basis.iter().map(|c| &self.d[c]))
    }

    fn require_cocycle(&self, x: &Vector) -> Result<(), CohomologyError> {
        let dx = self.apply(x);
        if dx.is_empty() {
            Ok(())
        } else {
            Err(CohomologyError::NotACocycle {
                rep: self.format_vector(x),
                image: self.format_vector(&dx),
            })
        }
    }

    pub fn is_exact(&self, x: &Vector) -> bool {
        self.image().contains(x)
    }

    pub fn same_class(&self, x: &Vector, y: &Vector) -> bool {
        self.is_exact(&f2::sum(x, y))
    }
}

/// A cohomology class with a chosen cocycle representative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyClass {
    pub degree: i64,
    pub representative: Vector,
    pub designated_fundamental: bool,
}

/// A basis of `ker d / im d` in each degree, with representatives reduced
/// against the image and against each other (pivots on the first chord by
/// name).
pub fn cohomology(c: &CochainComplex) -> Vec<CohomologyClass> {
    let image = c.image();
    let mut out = Vec::new();
    for k in c.degrees() {
        let chords = c.chords_in_degree(k);
        let kernel = f2::kernel(&chords, |x| c.d[&x].clone());
        let mut reps = image.clone();
        let base_rank = reps.rank();
        let mut fresh = Echelon::new();
        for v in kernel {
            let r = image.reduce(&v);
            if reps.insert(r.clone()) {
                fresh.insert(r);
            }
        }
        debug_assert_eq!(reps.rank() - base_rank, fresh.rank());
        for v in fresh.rows() {
            out.push(CohomologyClass {
                degree: k,
                representative: image.reduce(v),
                designated_fundamental: false,
            });
        }
    }
    out
}

/// Coordinates of the class of the cocycle `y` in the basis `classes`, or
/// `None` when `y` is not in the span of the classes and the coboundaries.
pub fn class_coordinates(
    c: &CochainComplex,
    classes: &[CohomologyClass],
    y: &Vector,
) -> Option<Vec<bool>> {
    let mut rows: BTreeMap<GenId, (Vector, Vector)> = BTreeMap::new();
    let reduce = |rows: &BTreeMap<GenId, (Vector, Vector)>, mut v: Vector, mut tag: Vector| {
        while let Some(&p) = v.iter().next() {
            let Some((rv, rt)) = rows.get(&p) else { break };
            f2::add_into(&mut v, rv);
            f2::add_into(&mut tag, rt);
        }
        (v, tag)
    };
    let tagged = c
        .basis
        .iter()
        .map(|g| (c.d[g].clone(), Vector::new()))
        .chain(
            classes
                .iter()
                .enumerate()
                .map(|(i, k)| (k.representative.clone(), [i as GenId].into())),
        );
    for (v, tag) in tagged {
        let (v, tag) = reduce(&rows, v, tag);
        if let Some(&p) = v.iter().next() {
            rows.insert(p, (v, tag));
        }
    }
    let (rest, tag) = reduce(&rows, y.clone(), Vector::new());
    rest.is_empty().then(|| {
        (0..classes.len())
            .map(|i| tag.contains(&(i as GenId)))
            .collect()
    })
}

/// A filtered capacity: a chord height, or infinity for the zero class.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Capacity {
    Finite(Rational),
    Infinite,
}

impl Capacity {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Capacity::Finite(r) => Some(r),
            Capacity::Infinite => None,
        }
    }
}

impl fmt::Display for Capacity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Capacity::Finite(r) => f.write_str(&format_rational(r)),
            Capacity::Infinite => f.write_str("inf"),
        }
    }
}

/// The largest chord height `w` with `x ∈ F^w + im d`, where `F^w` is spanned
/// by the chords of height at least `w`.
pub fn capacity(c: &CochainComplex, x: &Vector) -> Result<Capacity, CohomologyError> {
    c.require_cocycle(x)?;
    let image = c.image();
    if image.contains(x) {
        return Ok(Capacity::Infinite);
    }
    // Descending scan: add the chords of each level to the span in turn.
    let mut span = image;
    let mut by_level: BTreeMap<&Rational, Vec<GenId>> = BTreeMap::new();
    for &g in &c.basis {
        by_level.entry(c.height(g)).or_default().push(g);
    }
    for (h, chords) in by_level.into_iter().rev() {
        for g in chords {
            span.insert([g].into());
        }
        if span.contains(x) {
            return Ok(Capacity::Finite(h.clone()));
        }
    }
    unreachable!("the full basis spans every vector supported on it")
}

/// Splits the complex by `(lower, upper)` component pair.
pub fn split_by_components(
    c: &CochainComplex,
) -> Result<BTreeMap<(usize, usize), CochainComplex>, CohomologyError> {
    let block = |g: GenId| {
        let gen = c.dga.generator(g);
        (gen.lower, gen.upper)
    };
    let mut blocks: BTreeMap<(usize, usize), Vec<GenId>> = BTreeMap::new();
    for &g in &c.basis {
        blocks.entry(block(g)).or_default().push(g);
        for &a in &c.d[&g] {
            if block(a) != block(g) {
                return Err(CohomologyError::SplittingNotPreserved {
                    chord: c.dga.name(g).to_string(),
                    from: block(g),
                    to: block(a),
                });
            }
        }
    }
    Ok(blocks
        .into_iter()
        .map(|(key, basis)| {
            let d = basis.iter().map(|&g| (g, c.d[&g].clone())).collect();
            (
                key,
                CochainComplex {
                    dga: c.dga.clone(),
                    basis,
                    d,
                },
            )
        })
        .collect())
}
