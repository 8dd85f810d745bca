//! Free unital noncommutative algebra over F2 on Reeb chords.
//!
//! A [`Dga`] stores its generators sorted by name, so a [`GenId`] is also the
//! position of the name in lexicographic order. Polynomials are sets of words:
//! adding a word that is already present cancels it.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::numeric::{format_rational, Rational};
use crate::report::ValidationReport;

pub type GenId = u32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),
    #[error("duplicate generator {0:?}")]
    DuplicateGenerator(String),
    #[error("generator {name:?}: component index {index} outside 0..{count}")]
    ComponentOutOfRange {
        name: String,
        index: usize,
        count: usize,
    },
    #[error("a DGA needs at least one component")]
    NoComponents,
}

/// A word in the generators; the empty word is the unit.
///
/// Ordered by length first, then lexicographically.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<GenId>);

impl Monomial {
    pub fn unit() -> Self {
        Monomial(Vec::new())
    }

    pub fn new(letters: Vec<GenId>) -> Self {
        Monomial(letters)
    }

    pub fn letter(g: GenId) -> Self {
        Monomial(vec![g])
    }

    pub fn letters(&self) -> &[GenId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Monomial) -> Monomial {
        let mut v = Vec::with_capacity(self.0.len() + other.0.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Monomial(v)
    }

    pub fn reversed(&self) -> Monomial {
        Monomial(self.0.iter().rev().copied().collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// An F2-linear combination of words.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    terms: BTreeSet<Monomial>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::from_monomial(Monomial::unit())
    }

    pub fn generator(g: GenId) -> Self {
        Poly::from_monomial(Monomial::letter(g))
    }

    pub fn from_monomial(m: Monomial) -> Self {
        let mut terms = BTreeSet::new();
        terms.insert(m);
        Poly { terms }
    }

    pub fn from_monomials<I: IntoIterator<Item = Monomial>>(it: I) -> Self {
        let mut p = Poly::zero();
        for m in it {
            p.toggle(m);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.iter()
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.terms.contains(m)
    }

    /// Adds one copy of `m` over F2.
    pub fn toggle(&mut self, m: Monomial) {
        if !self.terms.remove(&m) {
            self.terms.insert(m);
        }
    }

    pub fn add_assign(&mut self, other: &Poly) {
        for m in &other.terms {
            self.toggle(m.clone());
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for a in &self.terms {
            for b in &other.terms {
                out.toggle(a.concat(b));
            }
        }
        out
    }

    /// The part of word length exactly `k`.
    pub fn word_length_part(&self, k: usize) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .filter(|m| m.len() == k)
                .cloned()
                .collect(),
        }
    }

    pub fn has_constant_term(&self) -> bool {
        self.terms.contains(&Monomial::unit())
    }

    pub fn max_word_len(&self) -> usize {
        self.terms.iter().map(Monomial::len).max().unwrap_or(0)
    }

    /// Generators occurring anywhere in the polynomial.
    pub fn letters(&self) -> BTreeSet<GenId> {
        self.terms
            .iter()
            .flat_map(|m| m.letters().iter().copied())
            .collect()
    }

    pub fn reversed(&self) -> Poly {
        Poly::from_monomials(self.terms.iter().map(Monomial::reversed))
    }

    /// Substitutes a polynomial for every letter and expands.
    pub fn substitute<F>(&self, mut image: F) -> Poly
    where
        F: FnMut(GenId) -> Poly,
    {
        let mut out = Poly::zero();
        for m in &self.terms {
            let mut acc = Poly::one();
            for &g in m.letters() {
                acc = acc.mul(&image(g));
                if acc.is_zero() {
                    break;
                }
            }
            out.add_assign(&acc);
        }
        out
    }
}

impl FromIterator<Monomial> for Poly {
    fn from_iter<I: IntoIterator<Item = Monomial>>(iter: I) -> Self {
        Poly::from_monomials(iter)
    }
}

/// A Reeb chord.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub degree: i64,
    pub height: Rational,
    pub lower: usize,
    pub upper: usize,
}

impl Generator {
    pub fn new(name: &str, degree: i64, height: Rational) -> Self {
        Generator {
            name: name.to_string(),
            degree,
            height,
            lower: 0,
            upper: 0,
        }
    }

    pub fn with_components(mut self, lower: usize, upper: usize) -> Self {
        self.lower = lower;
        self.upper = upper;
        self
    }
}

/// The Chekanov-Eliashberg algebra of a Legendrian, with its differential.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dga {
    pub name: String,
    /// 0 means a Z grading.
    pub grading_modulus: u32,
    pub num_components: usize,
    generators: Vec<Generator>,
    index: BTreeMap<String, GenId>,
    differential: Vec<Poly>,
}

impl Dga {
    /// A DGA with zero differential on the given generators.
    pub fn new(
        name: &str,
        grading_modulus: u32,
        num_components: usize,
        mut generators: Vec<Generator>,
    ) -> Result<Dga, AlgebraError> {
        if num_components == 0 {
            return Err(AlgebraError::NoComponents);
        }
        generators.sort_by(|a, b| a.name.cmp(&b.name));
        let mut index = BTreeMap::new();
        for (i, g) in generators.iter().enumerate() {
            if index.insert(g.name.clone(), i as GenId).is_some() {
                return Err(AlgebraError::DuplicateGenerator(g.name.clone()));
            }
            for c in [g.lower, g.upper] {
                if c >= num_components {
                    return Err(AlgebraError::ComponentOutOfRange {
                        name: g.name.clone(),
                        index: c,
                        count: num_components,
                    });
                }
            }
        }
        let differential = vec![Poly::zero(); generators.len()];
        Ok(Dga {
            name: name.to_string(),
            grading_modulus,
            num_components,
            generators,
            index,
            differential,
        })
    }

    /// Sets `∂gen` from a list of words given by generator names.
    pub fn with_differential<S: AsRef<str>>(
        mut self,
        gen: &str,
        words: &[Vec<S>],
    ) -> Result<Dga, AlgebraError> {
        let id = self.id(gen)?;
        let p = self.poly_from_words(words)?;
        self.differential[id as usize] = p;
        Ok(self)
    }

    pub fn set_differential(&mut self, g: GenId, p: Poly) {
        self.differential[g as usize] = p;
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn generator(&self, g: GenId) -> &Generator {
        &self.generators[g as usize]
    }

    pub fn ids(&self) -> impl Iterator<Item = GenId> {
        0..self.generators.len() as GenId
    }

    pub fn id(&self, name: &str) -> Result<GenId, AlgebraError> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| AlgebraError::UnknownGenerator(name.to_string()))
    }

    pub fn name(&self, g: GenId) -> &str {
        &self.generators[g as usize].name
    }

    pub fn height(&self, g: GenId) -> &Rational {
        &self.generators[g as usize].height
    }

    pub fn degree(&self, g: GenId) -> i64 {
        self.generators[g as usize].degree
    }

    /// `∂g` on a generator.
    pub fn differential(&self, g: GenId) -> &Poly {
        &self.differential[g as usize]
    }

    pub fn monomial_from_names<S: AsRef<str>>(&self, word: &[S]) -> Result<Monomial, AlgebraError> {
        word.iter()
            .map(|s| self.id(s.as_ref()))
            .collect::<Result<Vec<_>, _>>()
            .map(Monomial::new)
    }

    pub fn poly_from_words<S: AsRef<str>>(&self, words: &[Vec<S>]) -> Result<Poly, AlgebraError> {
        let mut p = Poly::zero();
        for w in words {
            p.toggle(self.monomial_from_names(w)?);
        }
        Ok(p)
    }

    pub fn monomial_names(&self, m: &Monomial) -> Vec<String> {
        m.letters()
            .iter()
            .map(|&g| self.name(g).to_string())
            .collect()
    }

    pub fn format_monomial(&self, m: &Monomial) -> String {
        if m.is_unit() {
            "1".to_string()
        } else {
            self.monomial_names(m).join("*")
        }
    }

    /// `1 + b1 + b1*b2*b3` style rendering; `0` for the zero polynomial.
    pub fn format_poly(&self, p: &Poly) -> String {
        if p.is_zero() {
            return "0".to_string();
        }
        p.terms()
            .map(|m| self.format_monomial(m))
            .collect::<Vec<_>>()
            .join(" + ")
    }

    pub fn check_ids(&self, p: &Poly) -> Result<(), AlgebraError> {
        let n = self.generators.len() as GenId;
        match p.letters().into_iter().find(|&g| g >= n) {
            Some(g) => Err(AlgebraError::UnknownGenerator(format!("#{g}"))),
            None => Ok(()),
        }
    }

    pub fn word_degree(&self, m: &Monomial) -> i64 {
        m.letters().iter().map(|&g| self.degree(g)).sum()
    }

    pub fn degrees_agree(&self, a: i64, b: i64) -> bool {
        if self.grading_modulus == 0 {
            a == b
        } else {
            (a - b).rem_euclid(self.grading_modulus as i64) == 0
        }
    }

    /// Reduces a degree to its canonical representative.
    pub fn reduce_degree(&self, d: i64) -> i64 {
        if self.grading_modulus == 0 {
            d
        } else {
            d.rem_euclid(self.grading_modulus as i64)
        }
    }

    /// Every height multiplied by `t > 0`.
    pub fn rescaled(&self, t: &Rational) -> Dga {
        let mut out = self.clone();
        for g in &mut out.generators {
            g.height = &g.height * t;
        }
        out
    }

    /// Largest word length in any `∂a`.
    pub fn max_word_len(&self) -> usize {
        self.differential
            .iter()
            .map(Poly::max_word_len)
            .max()
            .unwrap_or(0)
    }

    pub fn min_height(&self) -> Option<&Rational> {
        self.generators.iter().map(|g| &g.height).min()
    }

    pub fn max_height(&self) -> Option<&Rational> {
        self.generators.iter().map(|g| &g.height).max()
    }
}

/// `∂x`, extended linearly and by the Leibniz rule; `∂1 = 0`.
pub fn differential_extend(dga: &Dga, x: &Poly) -> Result<Poly, AlgebraError> {
    dga.check_ids(x)?;
    let mut out = Poly::zero();
    for m in x.terms() {
        let letters = m.letters();
        for (i, &g) in letters.iter().enumerate() {
            let d = dga.differential(g);
            if d.is_zero() {
                continue;
            }
            let left = Monomial::new(letters[..i].to_vec());
            let right = Monomial::new(letters[i + 1..].to_vec());
            for w in d.terms() {
                out.toggle(left.concat(w).concat(&right));
            }
        }
    }
    Ok(out)
}

/// Sum of the heights of the letters; 0 for the unit.
pub fn monomial_height(dga: &Dga, m: &Monomial) -> Result<Rational, AlgebraError> {
    let n = dga.len() as GenId;
    let mut total = Rational::zero();
    for &g in m.letters() {
        if g >= n {
            return Err(AlgebraError::UnknownGenerator(format!("#{g}")));
        }
        total += dga.height(g);
    }
    Ok(total)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ValidationOptions {
    /// Report zero-energy terms as warnings instead of violations.
    pub allow_weak_energy: bool,
}

/// Checks heights, components, `∂² = 0`, degree drop and strict energy.
pub fn validate_dga(dga: &Dga, opts: ValidationOptions) -> ValidationReport {
    let mut report = ValidationReport::new();
    for g in dga.generators() {
        if !g.height.is_positive() {
            report.violation(
                "height",
                &g.name,
                format!("height {} is not positive", format_rational(&g.height)),
            );
        }
    }
    for a in dga.ids() {
        let gen = dga.generator(a);
        let da = dga.differential(a);
        for m in da.terms() {
            let loc = format!("∂{} ∋ {}", gen.name, dga.format_monomial(m));
            let deg = dga.word_degree(m);
            if !dga.degrees_agree(deg, gen.degree - 1) {
                report.violation(
                    "degree",
                    &loc,
                    format!("word has degree {deg}, expected {}", gen.degree - 1),
                );
            }
            let h = monomial_height(dga, m).expect("ids are internal");
            let energy = &gen.height - &h;
            if energy.is_negative() {
                report.violation(
                    "strict-energy",
                    &loc,
                    format!(
                        "negative energy: h({}) = {} < {}",
                        gen.name,
                        format_rational(&gen.height),
                        format_rational(&h)
                    ),
                );
            } else if energy.is_zero() {
                let detail = format!("zero energy: h({}) = {}", gen.name, format_rational(&h));
                if opts.allow_weak_energy {
                    report.warning("strict-energy", &loc, detail);
                } else {
                    report.violation("strict-energy", &loc, detail);
                }
            }
            if let Some(detail) = composability(dga, a, m) {
                report.violation("components", &loc, detail);
            }
        }
        let dda = differential_extend(dga, da).expect("ids are internal");
        if !dda.is_zero() {
            report.violation(
                "d-squared",
                &gen.name,
                format!("∂∂{} = {}", gen.name, dga.format_poly(&dda)),
            );
        }
    }
    report
}

/// A word in `∂a` must read as a path of chord endpoints: it starts on the
/// upper component of `a`, each chord's lower end meets the next chord's
/// upper end, and it finishes on the lower component of `a`.
fn composability(dga: &Dga, a: GenId, m: &Monomial) -> Option<String> {
    let ga = dga.generator(a);
    let mut at = ga.upper;
    for &b in m.letters() {
        let gb = dga.generator(b);
        if gb.upper != at {
            return Some(format!(
                "{} has upper component {}, expected {}",
                gb.name, gb.upper, at
            ));
        }
        at = gb.lower;
    }
    if at != ga.lower {
        return Some(format!(
            "word ends on component {at}, but {} has lower component {}",
            ga.name, ga.lower
        ));
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::numeric::{int, rat};

    fn w(s: &str) -> Vec<&str> {
        s.split_whitespace().collect()
    }

    #[test]
    fn trefoil_b_generators_are_closed() {
        let t = fixtures::trefoil_dga(&int(2), &rat(1, 2));
        let b1 = Poly::generator(t.id("b1").unwrap());
        assert!(differential_extend(&t, &b1).unwrap().is_zero());
    }

    #[test]
    fn unit_is_closed() {
        let t = fixtures::trefoil_dga(&int(2), &rat(1, 2));
        assert!(differential_extend(&t, &Poly::one()).unwrap().is_zero());
    }

    #[test]
    fn leibniz_on_a1_b2() {
        let t = fixtures::trefoil_dga(&int(2), &rat(1, 2));
        let x = t.poly_from_words(&[w("a1 b2")]).unwrap();
        let got = differential_extend(&t, &x).unwrap();
        // (1 + b1 + b3 + b1 b2 b3) b2
        let expect = t
            .poly_from_words(&[w("b2"), w("b1 b2"), w("b3 b2"), w("b1 b2 b3 b2")])
            .unwrap();
        assert_eq!(got, expect);
    }

    #[test]
    fn unknown_generator_is_an_error() {
        let t = fixtures::trefoil_dga(&int(2), &rat(1, 2));
        assert_eq!(
            t.poly_from_words(&[w("zz")]),
            Err(AlgebraError::UnknownGenerator("zz".into()))
        );
        let bogus = Poly::generator(99);
        assert!(matches!(
            differential_extend(&t, &bogus),
            Err(AlgebraError::UnknownGenerator(_))
        ));
    }

    #[test]
    fn heights_of_words() {
        let t = fixtures::trefoil_dga(&int(2), &rat(1, 2));
        let m = t.monomial_from_names(&w("b1 b2 b3")).unwrap();
        assert_eq!(monomial_height(&t, &m).unwrap(), rat(9, 2));
        assert_eq!(monomial_height(&t, &Monomial::unit()).unwrap(), int(0));
        let m = t.monomial_from_names(&w("b2")).unwrap();
        assert_eq!(monomial_height(&t, &m).unwrap(), rat(1, 2));
    }

    #[test]
    fn trefoil_validates() {
        let t = fixtures::trefoil_dga(&int(2), &rat(1, 2));
        let r = validate_dga(&t, ValidationOptions::default());
        assert!(r.ok(), "{:?}", r.violations);
    }

    #[test]
    fn empty_dga_validates() {
        let d = Dga::new("empty", 0, 1, vec![]).unwrap();
        assert!(validate_dga(&d, ValidationOptions::default()).ok());
    }

    #[test]
    fn energy_violation_is_reported() {
        let d = Dga::new(
            "bad",
            0,
            1,
            vec![
                Generator::new("a", 1, int(1)),
                Generator::new("b", 0, int(2)),
            ],
        )
        .unwrap()
        .with_differential("a", &[w("b")])
        .unwrap();
        let r = validate_dga(&d, ValidationOptions::default());
        assert!(r.has_rule("strict-energy"));
        assert!(!r.ok());
    }

    #[test]
    fn weak_energy_override_downgrades_zero_energy_only() {
        let d = Dga::new(
            "weak",
            0,
            1,
            vec![
                Generator::new("a", 1, int(2)),
                Generator::new("b", 0, int(2)),
            ],
        )
        .unwrap()
        .with_differential("a", &[w("b")])
        .unwrap();
        assert!(!validate_dga(&d, ValidationOptions::default()).ok());
        let r = validate_dga(
            &d,
            ValidationOptions {
                allow_weak_energy: true,
            },
        );
        assert!(r.ok());
        assert_eq!(r.warnings.len(), 1);
    }

    #[test]
    fn d_squared_and_degree_violations() {
        // ∂a = b, ∂b = c: ∂∂a = c ≠ 0.
        let d = Dga::new(
            "dd",
            0,
            1,
            vec![
                Generator::new("a", 2, int(9)),
                Generator::new("b", 1, int(5)),
                Generator::new("c", 0, int(1)),
            ],
        )
        .unwrap()
        .with_differential("a", &[w("b")])
        .unwrap()
        .with_differential("b", &[w("c")])
        .unwrap();
        let r = validate_dga(&d, ValidationOptions::default());
        assert!(r.has_rule("d-squared"));
        assert!(!r.has_rule("degree"));

        let d = Dga::new(
            "deg",
            0,
            1,
            vec![
                Generator::new("a", 1, int(9)),
                Generator::new("b", 1, int(5)),
            ],
        )
        .unwrap()
        .with_differential("a", &[w("b")])
        .unwrap();
        assert!(validate_dga(&d, ValidationOptions::default()).has_rule("degree"));
        // Modulo 1 every degree agrees.
        let mut d2 = d.clone();
        d2.grading_modulus = 1;
        assert!(!validate_dga(&d2, ValidationOptions::default()).has_rule("degree"));
    }

    #[test]
    fn component_paths_are_checked() {
        let d = Dga::new(
            "link",
            0,
            2,
            vec![
                Generator::new("a", 1, int(5)).with_components(0, 1),
                Generator::new("x", 0, int(1)).with_components(0, 1),
                Generator::new("y", 0, int(1)).with_components(1, 0),
            ],
        )
        .unwrap();
        let good = d.clone().with_differential("a", &[w("x")]).unwrap();
        assert!(validate_dga(&good, ValidationOptions::default()).ok());
        let bad = d.clone().with_differential("a", &[w("y")]).unwrap();
        assert!(validate_dga(&bad, ValidationOptions::default()).has_rule("components"));
        let constant = d.with_differential("a", &[Vec::<&str>::new()]).unwrap();
        assert!(validate_dga(&constant, ValidationOptions::default()).has_rule("components"));
    }

    #[test]
    fn monomial_order_is_length_then_lex() {
        let a = Monomial::new(vec![5]);
        let b = Monomial::new(vec![0, 0]);
        assert!(Monomial::unit() < a && a < b);
    }
}
