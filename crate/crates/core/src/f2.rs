//! Sparse vectors and echelon forms over F₂, indexed by generator id.
//!
//! Pivots are always the smallest index of a row; since generators are
//! sorted by name, that is the lexicographically first chord.

use std::collections::{BTreeMap, BTreeSet};

use crate::algebra::GenId;

/// A vector over F₂: the set of basis chords with coefficient 1.
pub type Vector = BTreeSet<GenId>;

pub fn add_into(acc: &mut Vector, v: &Vector) {
    for &i in v {
        if !acc.remove(&i) {
            acc.insert(i);
        }
    }
}

pub fn sum(a: &Vector, b: &Vector) -> Vector {
    a.symmetric_difference(b).copied().collect()
}

/// Rows in reduced echelon form keyed by pivot.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Echelon {
    rows: BTreeMap<GenId, Vector>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_vectors<'a, I: IntoIterator<Item = &'a Vector>>(vs: I) -> Self {
        let mut e = Self::new();
        for v in vs {
            e.insert(v.clone());
        }
        e
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> impl Iterator<Item = &Vector> {
        self.rows.values()
    }

    /// Eliminates every pivot of `self` from `v`.
    pub fn reduce(&self, v: &Vector) -> Vector {
        let mut out = v.clone();
        for (p, row) in &self.rows {
            if out.contains(p) {
                add_into(&mut out, row);
            }
        }
        out
    }

    pub fn contains(&self, v: &Vector) -> bool {
        self.reduce(v).is_empty()
    }

    /// Adds `v` to the span, keeping the rows fully reduced. Returns whether
    /// the rank grew.
    pub fn insert(&mut self, v: Vector) -> bool {
        let r = self.reduce(&v);
        let Some(&p) = r.iter().next() else {
            return false;
        };
        for row in self.rows.values_mut() {
            if row.contains(&p) {
                add_into(row, &r);
            }
        }
        self.rows.insert(p, r);
        true
    }
}

/// A basis of the kernel of `f` restricted to `domain`, one vector per free
/// column. Each basis vector is its free column plus the pivot columns it
/// forces.
pub fn kernel<F>(domain: &[GenId], f: F) -> Vec<Vector>
where
    F: Fn(GenId) -> Vector,
{
    // Column-reduce: track, for each image row, the combination of domain
    // elements producing it.
    let mut pivots: BTreeMap<GenId, (Vector, Vector)> = BTreeMap::new();
    let mut out = Vec::new();
    for &c in domain {
        let mut img = f(c);
        let mut comb: Vector = [c].into();
        loop {
            let Some(&p) = img.iter().next() else { break };
            match pivots.get(&p) {
                Some((pi, pc)) => {
                    add_into(&mut img, pi);
                    add_into(&mut comb, pc);
                }
                None => break,
            }
        }
        match img.iter().next() {
            Some(&p) => {
                pivots.insert(p, (img, comb));
            }
            None => out.push(comb),
        }
    }
    // Reduce the kernel basis so that representatives are canonical.
    let mut e = Echelon::new();
    let mut canon: Vec<Vector> = Vec::new();
    for v in out {
        e.insert(v);
    }
    canon.extend(e.rows().cloned());
    canon
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[GenId]) -> Vector {
        xs.iter().copied().collect()
    }

    #[test]
    fn echelon_rank_and_membership() {
        let mut e = Echelon::new();
        assert!(e.insert(v(&[0, 1])));
        assert!(e.insert(v(&[1, 2])));
        assert!(!e.insert(v(&[0, 2])));
        assert_eq!(e.rank(), 2);
        assert!(e.contains(&v(&[0, 2])));
        assert!(!e.contains(&v(&[2])));
    }

    #[test]
    fn kernel_of_sum_map() {
        // f(0) = {5}, f(1) = {}, f(2) = {5}
        let k = kernel(&[0, 1, 2], |c| if c == 1 { v(&[]) } else { v(&[5]) });
        assert_eq!(k, vec![v(&[0, 2]), v(&[1])]);
    }
}
