//! Augmentations, twisted differentials and the A∞ operations they carry.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::algebra::{AlgebraError, Dga, GenId, Monomial, Poly};
use crate::par::Exec;
use crate::report::ValidationReport;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AugmentError {
    #[error("augmentation search over {generators} degree-0 generators exceeds the budget of {cap} assignments")]
    BudgetExceeded { generators: usize, cap: u64 },
    #[error("not an augmentation: {0}")]
    NotAnAugmentation(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// A unital algebra map to F₂, given by the generators it sends to 1.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Augmentation {
    pub ones: BTreeSet<GenId>,
}

impl Augmentation {
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn from_names<S: AsRef<str>>(dga: &Dga, names: &[S]) -> Result<Self, AlgebraError> {
        let ones = names
            .iter()
            .map(|n| dga.id(n.as_ref()))
            .collect::<Result<_, _>>()?;
        Ok(Augmentation { ones })
    }

    pub fn names(&self, dga: &Dga) -> Vec<String> {
        self.ones.iter().map(|&g| dga.name(g).to_string()).collect()
    }

    pub fn value(&self, g: GenId) -> bool {
        self.ones.contains(&g)
    }

    pub fn eval_monomial(&self, m: &Monomial) -> bool {
        m.letters().iter().all(|g| self.ones.contains(g))
    }

    pub fn eval(&self, p: &Poly) -> bool {
        p.terms().filter(|m| self.eval_monomial(m)).count() % 2 == 1
    }
}

/// Degree and `ε∘∂ = 0` checks.
pub fn check_augmentation(dga: &Dga, eps: &Augmentation) -> Result<(), AugmentError> {
    for &g in &eps.ones {
        if (g as usize) >= dga.len() {
            return Err(AlgebraError::UnknownGenerator(format!("#{g}")).into());
        }
        if dga.reduce_degree(dga.degree(g)) != 0 {
            return Err(AugmentError::NotAnAugmentation(format!(
                "{} has degree {}, not 0",
                dga.name(g),
                dga.degree(g)
            )));
        }
    }
    for a in dga.ids() {
        if eps.eval(dga.differential(a)) {
            return Err(AugmentError::NotAnAugmentation(format!(
                "ε(∂{}) = 1",
                dga.name(a)
            )));
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerateOptions {
    pub cap: u64,
    pub exec: Exec,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        EnumerateOptions {
            cap: 1 << 24,
            exec: Exec::default(),
        }
    }
}

/// Every augmentation, by exhaustive search over assignments to the degree-0
/// generators. Sorted by size, then lexicographically by generator name.
pub fn enumerate_augmentations(
    dga: &Dga,
    opts: EnumerateOptions,
) -> Result<Vec<Augmentation>, AugmentError> {
    let free: Vec<GenId> = dga
        .ids()
        .filter(|&g| dga.reduce_degree(dga.degree(g)) == 0)
        .collect();
    let total = 1u128 << free.len().min(127);
    if free.len() >= 64 || total > opts.cap as u128 {
        return Err(AugmentError::BudgetExceeded {
            generators: free.len(),
            cap: opts.cap,
        });
    }
    // Only differentials that can evaluate to 1 matter: those containing a
    // word made entirely of degree-0 letters.
    let relevant: Vec<Vec<u64>> = dga
        .ids()
        .map(|a| {
            dga.differential(a)
                .terms()
                .filter_map(|m| {
                    let mut mask = 0u64;
                    for g in m.letters() {
                        let i = free.iter().position(|f| f == g)?;
                        mask |= 1 << i;
                    }
                    Some(mask)
                })
                .collect()
        })
        .filter(|masks: &Vec<u64>| !masks.is_empty())
        .collect();
    let mut found = opts.exec.filter_map_range(total as u64, |bits| {
        let ok = relevant
            .iter()
            .all(|masks| masks.iter().filter(|&&m| m & bits == m).count() % 2 == 0);
        ok.then(|| Augmentation {
            ones: (0..free.len())
                .filter(|i| bits >> i & 1 == 1)
                .map(|i| free[i])
                .collect(),
        })
    });
    found.sort_by(|a, b| {
        a.ones
            .len()
            .cmp(&b.ones.len())
            .then_with(|| a.names(dga).cmp(&b.names(dga)))
    });
    Ok(found)
}

/// The change of coordinates `g ↦ g + ε(g)`. It is its own inverse.
pub fn eta(eps: &Augmentation, p: &Poly) -> Poly {
    p.substitute(|g| {
        let mut img = Poly::generator(g);
        if eps.value(g) {
            img.toggle(Monomial::unit());
        }
        img
    })
}

/// A DGA together with the differential conjugated by an augmentation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedDga {
    pub base: Dga,
    pub augmentation: Augmentation,
    /// Same generators as `base`, with differential `∂^ε`.
    pub twisted: Dga,
}

impl TwistedDga {
    pub fn differential(&self, a: GenId) -> &Poly {
        self.twisted.differential(a)
    }

    pub fn max_word_len(&self) -> usize {
        self.twisted.max_word_len()
    }
}

/// `∂^ε a = η^ε(∂a)`.
pub fn twist(dga: &Dga, eps: &Augmentation) -> Result<TwistedDga, AugmentError> {
    check_augmentation(dga, eps)?;
    let mut twisted = dga.clone();
    for a in dga.ids() {
        let t = eta(eps, dga.differential(a));
        if t.has_constant_term() {
            return Err(AugmentError::NotAnAugmentation(format!(
                "constant term in ∂^ε{}",
                dga.name(a)
            )));
        }
        twisted.set_differential(a, t);
    }
    Ok(TwistedDga {
        base: dga.clone(),
        augmentation: eps.clone(),
        twisted,
    })
}

/// Sparse multilinear operations on the dual chord basis:
/// `m_k(c₁*, …, c_k*) = Σ_a ⟨∂^ε a, c₁⋯c_k⟩ a*`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AInfinityOps {
    pub k_max: usize,
    /// `ops[k]` maps an input word of length `k` to the output chords.
    pub ops: Vec<BTreeMap<Vec<GenId>, BTreeSet<GenId>>>,
}

impl AInfinityOps {
    pub fn m(&self, inputs: &[GenId]) -> BTreeSet<GenId> {
        self.ops
            .get(inputs.len())
            .and_then(|t| t.get(inputs))
            .cloned()
            .unwrap_or_default()
    }

    /// Flips one coefficient of `m_k`.
    pub fn toggle(&mut self, inputs: &[GenId], output: GenId) {
        let k = inputs.len();
        if self.ops.len() <= k {
            self.ops.resize(k + 1, BTreeMap::new());
            self.k_max = self.k_max.max(k);
        }
        let entry = self.ops[k].entry(inputs.to_vec()).or_default();
        if !entry.remove(&output) {
            entry.insert(output);
        }
        if entry.is_empty() {
            self.ops[k].remove(inputs);
        }
    }
}

/// Adjoints of the word-length parts of `∂^ε`, up to `k_max` (`None` means
/// the longest word present).
pub fn a_infinity_ops(t: &TwistedDga, k_max: Option<usize>) -> AInfinityOps {
    let k_max = k_max.unwrap_or_else(|| t.max_word_len());
    let mut ops = vec![BTreeMap::new(); k_max + 1];
    for a in t.twisted.ids() {
        for m in t.differential(a).terms() {
            let k = m.len();
            if k == 0 || k > k_max {
                continue;
            }
            let entry: &mut BTreeSet<GenId> = ops[k].entry(m.letters().to_vec()).or_default();
            entry.insert(a);
        }
    }
    AInfinityOps { k_max, ops }
}

/// Composite `Σ m_{i+1+k}(1^{⊗i} ⊗ m_j ⊗ 1^{⊗k})` as a sparse map from input
/// words of length `n ≤ n_max` to outputs.
fn relation_terms(ops: &AInfinityOps, n_max: usize) -> BTreeMap<Vec<GenId>, BTreeSet<GenId>> {
    // Inner operations indexed by their output chord.
    let mut by_output: BTreeMap<GenId, Vec<&Vec<GenId>>> = BTreeMap::new();
    for table in ops.ops.iter().skip(1) {
        for (word, outs) in table {
            for &o in outs {
                by_output.entry(o).or_default().push(word);
            }
        }
    }
    let mut acc: BTreeMap<Vec<GenId>, BTreeSet<GenId>> = BTreeMap::new();
    for table in ops.ops.iter().skip(1) {
        for (outer, outs) in table {
            for (r, y) in outer.iter().enumerate() {
                let Some(inners) = by_output.get(y) else {
                    continue;
                };
                for inner in inners {
                    let n = outer.len() - 1 + inner.len();
                    if n > n_max {
                        continue;
                    }
                    let mut input = outer[..r].to_vec();
                    input.extend_from_slice(inner);
                    input.extend_from_slice(&outer[r + 1..]);
                    let entry = acc.entry(input).or_default();
                    for &o in outs {
                        if !entry.remove(&o) {
                            entry.insert(o);
                        }
                    }
                }
            }
        }
    }
    acc.retain(|_, v| !v.is_empty());
    acc
}

/// Checks the A∞ relations for all inputs of length at most `n_max`.
pub fn check_a_infinity(ops: &AInfinityOps, dga: &Dga, n_max: usize) -> ValidationReport {
    let mut report = ValidationReport::new();
    for (input, outs) in relation_terms(ops, n_max) {
        let names: Vec<&str> = input.iter().map(|&g| dga.name(g)).collect();
        let outs: Vec<&str> = outs.iter().map(|&g| dga.name(g)).collect();
        report.violation(
            "a-infinity",
            format!("n={} ({})", input.len(), names.join(", ")),
            format!("relation evaluates to {}", outs.join(" + ")),
        );
    }
    report
}
