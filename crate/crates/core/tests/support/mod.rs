//! Random instances and independent oracles shared by the property tests
//! and the acceptance suite.

#![allow(dead_code)]

use std::collections::BTreeSet;

use lch_core::algebra::{Dga, GenId, Generator, Monomial, Poly};
use lch_core::augment::{
    a_infinity_ops, check_a_infinity, enumerate_augmentations, eta, twist, Augmentation,
    EnumerateOptions,
};
use lch_core::cohomology::{capacity, cohomology, linearized_complex, Capacity, CochainComplex};
use lch_core::construction::{ProfileConstraint, ProfileProblem};
use lch_core::f2::{Echelon, Vector};
use lch_core::fixtures;
use lch_core::numeric::{int, rat, Rational};
use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn f(x: &Rational) -> f64 {
    x.to_f64().unwrap()
}

/// Every fixture DGA, with trefoil and Hopf heights drawn from `rng`.
pub fn fixture_dgas(rng: &mut ChaCha8Rng) -> Vec<Dga> {
    let h1 = rat(rng.gen_range(1..=12), rng.gen_range(1..=4));
    let h2 = rat(rng.gen_range(1..=12), rng.gen_range(1..=4));
    let u = rat(rng.gen_range(1..=7), 8);
    vec![
        fixtures::unknot_dga(&rat(rng.gen_range(1..=9), 3)),
        fixtures::trefoil_dga(&h1, &h2),
        fixtures::trefoil_dga(&int(2), &rat(1, 2)),
        fixtures::hopf_dga(&u),
        fixtures::synthetic_product_pair(&rat(6, 5)).0.target,
        fixtures::synthetic_product_pair(&rat(6, 5)).0.source,
    ]
}

/// A random single-component DGA with degrees in {0, 1, 2}. Differentials
/// drop degree by one and satisfy strict energy by construction; `∂² = 0`
/// is not guaranteed once degree-2 generators appear.
pub fn random_dga(rng: &mut ChaCha8Rng) -> Dga {
    let n = rng.gen_range(3..=7);
    let gens: Vec<(i64, Rational)> = (0..n)
        .map(|_| {
            let degree = match rng.gen_range(0..20) {
                0..=9 => 0,
                10..=16 => 1,
                _ => 2,
            };
            (degree, rat(rng.gen_range(1..=24), rng.gen_range(1..=4)))
        })
        .collect();
    let mut dga = Dga::new(
        "fuzz",
        0,
        1,
        gens.iter()
            .enumerate()
            .map(|(i, (d, h))| Generator::new(&format!("g{i}"), *d, h.clone()))
            .collect(),
    )
    .unwrap();
    for a in 0..n {
        let (deg, h) = &gens[a];
        if *deg == 0 {
            continue;
        }
        let mut words = BTreeSet::new();
        let want = rng.gen_range(0..=4);
        for _ in 0..40 {
            if words.len() >= want {
                break;
            }
            let len = rng.gen_range(0..=3);
            let w: Vec<usize> = (0..len).map(|_| rng.gen_range(0..n)).collect();
            let d: i64 = w.iter().map(|&i| gens[i].0).sum();
            let wh: Rational = w.iter().map(|&i| gens[i].1.clone()).sum();
            if d == deg - 1 && &wh < h {
                words.insert(w);
            }
        }
        let p = Poly::from_monomials(
            words
                .into_iter()
                .map(|w| Monomial::new(w.into_iter().map(|i| i as GenId).collect())),
        );
        dga.set_differential(a as GenId, p);
    }
    dga
}

/// A random polynomial with up to four words of length at most three.
pub fn random_poly(rng: &mut ChaCha8Rng, n: usize) -> Poly {
    let mut p = Poly::zero();
    for _ in 0..rng.gen_range(0..=4) {
        let len = rng.gen_range(0..=3);
        p.toggle(Monomial::new(
            (0..len).map(|_| rng.gen_range(0..n) as GenId).collect(),
        ));
    }
    p
}

type Words = BTreeSet<Vec<GenId>>;

fn toggle(s: &mut Words, w: Vec<GenId>) {
    if !s.remove(&w) {
        s.insert(w);
    }
}

/// `∂` on words by the Leibniz rule, written directly over word sets.
pub fn naive_d(dga: &Dga, words: &Words) -> Words {
    let mut out = Words::new();
    for w in words {
        for i in 0..w.len() {
            for t in dga.differential(w[i]).terms() {
                let mut v = w[..i].to_vec();
                v.extend_from_slice(t.letters());
                v.extend_from_slice(&w[i + 1..]);
                toggle(&mut out, v);
            }
        }
    }
    out
}

pub fn words_of(p: &Poly) -> Words {
    p.terms().map(|m| m.letters().to_vec()).collect()
}

/// Whether `∂∂a = 0` for every generator, computed without the library.
pub fn naive_d_squared_vanishes(dga: &Dga) -> bool {
    dga.ids()
        .all(|a| naive_d(dga, &words_of(dga.differential(a))).is_empty())
}

/// Whether every word of every `∂a` is strictly lower than `a`.
pub fn naive_strict_energy(dga: &Dga) -> bool {
    dga.ids().all(|a| {
        dga.differential(a).terms().all(|m| {
            let h: Rational = m.letters().iter().map(|&b| dga.height(b).clone()).sum();
            &h < dga.height(a)
        })
    })
}

/// A random common-λ profile problem with `|c| ≤ 2` and `u, v ∈ (0, 2]`.
pub fn random_profile(rng: &mut ChaCha8Rng) -> ProfileProblem {
    let lambda = [
        rat(-2, 1),
        rat(-1, 1),
        rat(-1, 2),
        rat(1, 2),
        rat(1, 1),
        rat(2, 1),
    ]
    .choose(rng)
    .unwrap()
    .clone();
    let u = rat(rng.gen_range(1..=16), 8);
    let mut v = rat(rng.gen_range(1..=16), 8);
    if v == u {
        v = u.clone() / int(2);
    }
    let mut constraints: Vec<ProfileConstraint> = (0..rng.gen_range(1..=3))
        .map(|_| ProfileConstraint::derivative(lambda.clone(), rat(rng.gen_range(-8..=8), 4)))
        .collect();
    if rng.gen_bool(0.3) {
        let alpha = int(*[-1, 1, 2].choose(rng).unwrap());
        constraints.push(ProfileConstraint::pointwise(
            alpha,
            rat(rng.gen_range(-8..=8), 4),
        ));
    }
    ProfileProblem { u, v, constraints }
}

fn sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Half-plane `a·x + b·y + c ≥ 0` in the plane of consecutive samples.
type HalfPlane = (f64, f64, f64);

fn clip(poly: &[(f64, f64)], (a, b, c): HalfPlane) -> Vec<(f64, f64)> {
    let val = |p: &(f64, f64)| a * p.0 + b * p.1 + c;
    let mut out = Vec::new();
    for i in 0..poly.len() {
        let (p, q) = (poly[i], poly[(i + 1) % poly.len()]);
        let (vp, vq) = (val(&p), val(&q));
        if vp >= 0.0 {
            out.push(p);
        }
        if (vp >= 0.0) != (vq >= 0.0) {
            let t = vp / (vp - vq);
            out.push((p.0 + t * (q.0 - p.0), p.1 + t * (q.1 - p.1)));
        }
    }
    out
}

/// Searches for a piecewise-linear profile on `n` equal steps over `[0, len]`
/// that satisfies every constraint with a small margin on every segment.
/// Reachable values after each step form an interval, obtained by clipping
/// a box by the linear segment constraints and projecting.
pub fn profile_oracle(p: &ProfileProblem, len: f64, n: usize) -> bool {
    const MARGIN: f64 = 1e-9;
    const BOX: f64 = 50.0;
    let (u, v) = (f(&p.u), f(&p.v));
    let dt = len / n as f64;
    let mut planes: Vec<HalfPlane> = Vec::new();
    for k in &p.constraints {
        match k {
            ProfileConstraint::Derivative { lambda, c } => {
                let (l, c) = (f(lambda), f(c));
                // ρ′ = 0 at both ends fixes the sign of ρ′ − λ(ρ + c)
                let s = sign(-l * (u + c));
                if s == 0.0 || s * (-l * (v + c)) <= 0.0 {
                    return false;
                }
                planes.push((s * (-1.0 / dt - l), s / dt, -s * l * c - MARGIN));
                planes.push((-s / dt, s * (1.0 / dt - l), -s * l * c - MARGIN));
            }
            ProfileConstraint::Pointwise { alpha, beta } => {
                let (a, b) = (f(alpha), f(beta));
                let s = sign(a * u + b);
                if s == 0.0 || s * (a * v + b) <= 0.0 {
                    return false;
                }
                planes.push((0.0, s * a, s * b - MARGIN));
            }
        }
    }
    let (mut lo, mut hi) = (u, u);
    for _ in 0..n {
        let mut poly = vec![(lo, -BOX), (hi, -BOX), (hi, BOX), (lo, BOX)];
        for &h in &planes {
            poly = clip(&poly, h);
            if poly.is_empty() {
                return false;
            }
        }
        lo = poly.iter().map(|q| q.1).fold(f64::INFINITY, f64::min);
        hi = poly.iter().map(|q| q.1).fold(f64::NEG_INFINITY, f64::max);
    }
    lo - 1e-9 <= v && v <= hi + 1e-9
}

/// Random shifts `0 < v₁ < … < v_k < 1`.
pub fn random_shifts(rng: &mut ChaCha8Rng, k: usize) -> Vec<Rational> {
    let den = rng.gen_range(k as i64 + 2..=60);
    let mut nums: BTreeSet<i64> = BTreeSet::new();
    while nums.len() < k {
        nums.insert(rng.gen_range(1..den));
    }
    nums.into_iter().map(|a| rat(a, den)).collect()
}

/// The packing inequalities in floating point; `None` within `1e-9` of a
/// threshold.
pub fn packing_f64(k: usize, v: &[Rational]) -> Option<bool> {
    let e = std::f64::consts::E;
    let n = (k + 1) as f64;
    let shift = |i: usize| if i == 0 { 0.0 } else { f(&v[i - 1]) };
    let mut ok = true;
    for i in 1..=k {
        for j in 0..i {
            let d = (i - j) as f64;
            let x = shift(i) - shift(j);
            let lower = d / (n * e);
            let upper = 1.0 - (n - d) / (n * e);
            if (x - lower).abs() < 1e-9 || (x - upper).abs() < 1e-9 {
                return None;
            }
            ok &= lower <= x && x <= upper;
        }
    }
    Some(ok)
}

/// `x ∈ span{chords of height ≥ w} + im d`, by direct elimination.
pub fn in_level(c: &CochainComplex, x: &Vector, w: &Rational) -> bool {
    let mut e = Echelon::new();
    for &g in &c.basis {
        e.insert(c.d_of(g).clone());
        if c.height(g) >= w {
            e.insert([g].into_iter().collect());
        }
    }
    e.contains(x)
}

/// Checks a complex against its definitions and every class's capacity
/// against an independent level scan. Returns the finite capacities.
pub fn check_complex(c: &CochainComplex) -> Vec<Rational> {
    let heights: BTreeSet<Rational> = c.basis.iter().map(|&g| c.height(g).clone()).collect();
    for &g in &c.basis {
        assert!(
            c.apply(c.d_of(g)).is_empty(),
            "d∘d ≠ 0 on {}",
            c.dga.name(g)
        );
        for &t in c.d_of(g) {
            assert!(
                c.height(t) >= c.height(g),
                "filtration broken at {}",
                c.dga.name(g)
            );
            assert_eq!(c.degree(t), c.dga.reduce_degree(c.degree(g) + 1));
        }
    }
    assert!(c.check().ok());
    let mut out = Vec::new();
    for k in cohomology(c) {
        let x = &k.representative;
        assert!(c.apply(x).is_empty());
        let levels: Vec<bool> = heights.iter().map(|w| in_level(c, x, w)).collect();
        // down-closed: once false, false for every larger level
        for i in 1..levels.len() {
            assert!(!levels[i] || levels[i - 1]);
        }
        let expected = heights
            .iter()
            .zip(&levels)
            .filter(|p| *p.1)
            .map(|p| p.0.clone())
            .last();
        match capacity(c, x).unwrap() {
            Capacity::Infinite => panic!("nonzero class with infinite capacity"),
            Capacity::Finite(h) => {
                assert_eq!(Some(&h), expected.as_ref());
                assert!(heights.contains(&h));
                out.push(h);
            }
        }
    }
    out
}

pub fn augmentations(d: &Dga) -> Vec<Augmentation> {
    enumerate_augmentations(d, EnumerateOptions::default()).unwrap()
}

pub fn check_twists(d: &Dga) {
    for eps in augmentations(d) {
        let t = twist(d, &eps).unwrap();
        for a in d.ids() {
            assert!(!t.differential(a).has_constant_term());
            assert_eq!(&eta(&eps, t.differential(a)), d.differential(a));
        }
        let ops = a_infinity_ops(&t, None);
        let r = check_a_infinity(&ops, &t.twisted, 4);
        assert!(r.ok(), "{:?}", r.violations);
        check_complex(&linearized_complex(&t));
    }
    if augmentations(d).contains(&Augmentation::trivial()) {
        assert_eq!(&twist(d, &Augmentation::trivial()).unwrap().twisted, d);
    }
}
