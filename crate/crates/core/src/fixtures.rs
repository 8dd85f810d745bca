//! Standard inputs: the unknot, the trefoil and the Hopf link.

use crate::algebra::{Dga, Generator};
use crate::augment::Augmentation;
use crate::cobordism::ChainMap;
use crate::diagram::{CrossingData, End, LagrangianDiagram, Passage, Strand};
use crate::numeric::{int, Rational};

/// The one-chord unknot `U(v)`.
pub fn unknot_dga(v: &Rational) -> Dga {
    Dga::new("unknot", 0, 1, vec![Generator::new("gamma", 1, v.clone())]).unwrap()
}

/// The figure-eight projection of the unknot with chord height `v`.
pub fn unknot_diagram(v: &Rational) -> LagrangianDiagram {
    LagrangianDiagram {
        name: "unknot".into(),
        grading_modulus: 0,
        components: vec![vec![
            Passage::new("gamma", Strand::Over),
            Passage::new("gamma", Strand::Under),
        ]],
        rotation: [(
            "gamma".to_string(),
            [End::OverIn, End::UnderOut, End::OverOut, End::UnderIn],
        )]
        .into(),
        crossings: [(
            "gamma".to_string(),
            CrossingData {
                height: v.clone(),
                degree: 1,
                lower: 0,
                upper: 0,
            },
        )]
        .into(),
        outer: None,
    }
}

/// Chord heights of the trefoil: `b₁` and `b₃` at `h1`, `b₂` at `h2`, and
/// the two degree-one chords high enough for strict energy.
pub fn trefoil_heights(h1: &Rational, h2: &Rational) -> [(&'static str, Rational); 5] {
    let a1 = h1 * int(2) + h2 + Rational::new(1.into(), 2.into());
    let a2 = &a1 * int(2) - h1 * int(2) + int(1);
    [
        ("a1", a1),
        ("a2", a2),
        ("b1", h1.clone()),
        ("b2", h2.clone()),
        ("b3", h1.clone()),
    ]
}

/// The right-handed trefoil DGA with the differential
/// `∂a₁ = 1 + b₁ + b₃ + b₁b₂b₃`, `∂a₂ = b₂ + b₂b₃ + b₁b₂ + b₂b₃b₁b₂`.
fn w(s: &str) -> Vec<&str> {
    s.split_whitespace().collect()
}

pub fn trefoil_dga(h1: &Rational, h2: &Rational) -> Dga {
    let gens = trefoil_heights(h1, h2)
        .into_iter()
        .map(|(name, h)| Generator::new(name, if name.starts_with('a') { 1 } else { 0 }, h))
        .collect();
    Dga::new("trefoil", 0, 1, gens)
        .and_then(|d| d.with_differential("a1", &[w(""), w("b1"), w("b3"), w("b1 b2 b3")]))
        .and_then(|d| {
            d.with_differential("a2", &[w("b2"), w("b2 b3"), w("b1 b2"), w("b2 b3 b1 b2")])
        })
        .unwrap()
}

/// Kálmán's Lagrangian trefoil: a three-crossing twist region `b₁b₂b₃`
/// closed up through two curls `a₁` and `a₂`.
pub fn trefoil_diagram(h1: &Rational, h2: &Rational) -> LagrangianDiagram {
    use End::*;
    use Strand::{Over as O, Under as U};
    let l = [UnderIn, OverIn, UnderOut, OverOut];
    let r = [OverIn, UnderIn, OverOut, UnderOut];
    let word = [
        ("b1", U),
        ("b2", O),
        ("b3", U),
        ("a1", U),
        ("a1", O),
        ("b1", O),
        ("b2", U),
        ("b3", O),
        ("a2", U),
        ("a2", O),
    ];
    let crossings = trefoil_heights(h1, h2)
        .into_iter()
        .map(|(name, h)| (name, h, if name.starts_with('a') { 1 } else { 0 }, 0, 0))
        .collect();
    diagram(
        "trefoil",
        &[&word],
        &[("a1", l), ("a2", l), ("b1", r), ("b2", r), ("b3", r)],
        crossings,
    )
}

/// Kálmán's loop map on the trefoil, defined on the degree-0 chords only:
/// `b₁ ↦ 1 + b₂b₃`, `b₂ ↦ b₁`, `b₃ ↦ b₂`.
pub fn kalman_map(h1: &Rational, h2: &Rational) -> ChainMap {
    let t = trefoil_dga(h1, h2);
    ChainMap::from_words(
        t.clone(),
        t,
        &[
            ("b1", vec![w(""), w("b2 b3")]),
            ("b2", vec![w("b1")]),
            ("b3", vec![w("b2")]),
        ],
        true,
    )
    .unwrap()
}

/// Lower end: degree-0 chords `y1` (height 2) and `y2` (height 3); upper
/// end: one degree-0 chord `x` of height `hx`; `φ(x) = y1·y2`. Returns the
/// map and the trivial augmentation of the lower end.
pub fn synthetic_product_pair(hx: &Rational) -> (ChainMap, Augmentation) {
    let minus = Dga::new(
        "product-minus",
        0,
        1,
        vec![
            Generator::new("y1", 0, int(2)),
            Generator::new("y2", 0, int(3)),
        ],
    )
    .unwrap();
    let plus = Dga::new(
        "product-plus",
        0,
        1,
        vec![Generator::new("x", 0, hx.clone())],
    )
    .unwrap();
    let m = ChainMap::from_words(plus, minus, &[("x", vec![w("y1 y2")])], false).unwrap();
    (m, Augmentation::trivial())
}

type Cross<'a> = (&'a str, Rational, i64, usize, usize);

fn diagram(
    name: &str,
    components: &[&[(&str, Strand)]],
    rotation: &[(&str, [End; 4])],
    crossings: Vec<Cross<'_>>,
) -> LagrangianDiagram {
    LagrangianDiagram {
        name: name.into(),
        grading_modulus: 0,
        components: components
            .iter()
            .map(|c| c.iter().map(|(x, s)| Passage::new(x, *s)).collect())
            .collect(),
        rotation: rotation.iter().map(|(x, r)| (x.to_string(), *r)).collect(),
        crossings: crossings
            .into_iter()
            .map(|(x, height, degree, lower, upper)| {
                (
                    x.to_string(),
                    CrossingData {
                        height,
                        degree,
                        lower,
                        upper,
                    },
                )
            })
            .collect(),
        outer: None,
    }
}

/// A two-component Hopf link `H(u)` for `0 < u < 1`: the figure-eight unknot
/// and a pushoff raised by `u`. Near the double point the four branches cross
/// in a grid (`oa`, `ob`, `p3`, `p4`); `p1` and `p2` sit on the lobes.
pub fn hopf_diagram(u: &Rational) -> LagrangianDiagram {
    use End::*;
    use Strand::{Over as O, Under as U};
    let l = [UnderIn, OverIn, UnderOut, OverOut];
    let r = [OverIn, UnderIn, OverOut, UnderOut];
    diagram(
        "hopf",
        &[
            &[
                ("oa", O),
                ("p3", O),
                ("p1", U),
                ("oa", U),
                ("p4", U),
                ("p2", U),
            ],
            &[
                ("p4", O),
                ("ob", O),
                ("p1", O),
                ("p3", U),
                ("ob", U),
                ("p2", O),
            ],
        ],
        &[
            ("oa", l),
            ("ob", l),
            ("p1", l),
            ("p2", r),
            ("p3", l),
            ("p4", l),
        ],
        vec![
            ("oa", int(1), 1, 0, 0),
            ("ob", int(1), 1, 1, 1),
            ("p1", u.clone(), 0, 0, 1),
            ("p2", u.clone(), 0, 0, 1),
            ("p3", int(1) - u, 0, 1, 0),
            ("p4", int(1) + u, 1, 0, 1),
        ],
    )
}

/// The DGA of [`hopf_diagram`]: `∂p₄ = p₂` and every other differential zero.
pub fn hopf_dga(u: &Rational) -> Dga {
    let g = |name: &str, degree, h: Rational, lower, upper| {
        Generator::new(name, degree, h).with_components(lower, upper)
    };
    let gens = vec![
        g("oa", 1, int(1), 0, 0),
        g("ob", 1, int(1), 1, 1),
        g("p1", 0, u.clone(), 0, 1),
        g("p2", 0, u.clone(), 0, 1),
        g("p3", 0, int(1) - u, 1, 0),
        g("p4", 1, int(1) + u, 0, 1),
    ];
    Dga::new("hopf", 0, 2, gens)
        .and_then(|d| d.with_differential("p4", &[w("p2")]))
        .unwrap()
}
