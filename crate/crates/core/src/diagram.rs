//! Lagrangian-projection diagrams of Legendrian knots and links in R³ and
//! their compilation into a Chekanov-Eliashberg DGA by counting immersed
//! polygons.
//!
//! # Encoding
//!
//! Each component is a cyclic list of passages `(crossing, over|under)`. At
//! every crossing the four strand ends (`over_in`, `over_out`, `under_in`,
//! `under_out`) are listed in counterclockwise order. Arcs run from the `*_out`
//! end of one passage to the `*_in` end of the next.
//!
//! Quadrant `q` of a crossing is the sector between ends `q` and `q + 1` in
//! counterclockwise order. It carries a positive Reeb sign when end `q` is on
//! the over strand: a disk boundary traversed counterclockwise climbs from the
//! under strand to the over strand at such a corner.
//!
//! # Disk search
//!
//! From each positive quadrant of a chord `a`, a depth-first walk follows the
//! diagram with the disk on its left. At every crossing it either goes
//! straight or turns left into a negative quadrant, which adds that chord to
//! the word. The walk closes when it comes back into the starting quadrant.
//! A closed walk is accepted when the winding numbers of the faces describe an
//! immersed disk: they are nonnegative, every crossing has a consistent local
//! model, and the Euler characteristic of the glued surface is 1.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::algebra::{validate_dga, Dga, Generator, Monomial, Poly, ValidationOptions};
use crate::numeric::{format_rational, Rational};
use crate::par::Exec;
use crate::report::ValidationReport;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Strand {
    Over,
    Under,
}

impl Strand {
    pub fn other(self) -> Strand {
        match self {
            Strand::Over => Strand::Under,
            Strand::Under => Strand::Over,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum End {
    OverIn,
    OverOut,
    UnderIn,
    UnderOut,
}

impl End {
    pub const ALL: [End; 4] = [End::OverIn, End::OverOut, End::UnderIn, End::UnderOut];

    pub fn strand(self) -> Strand {
        match self {
            End::OverIn | End::OverOut => Strand::Over,
            End::UnderIn | End::UnderOut => Strand::Under,
        }
    }

    pub fn is_in(self) -> bool {
        matches!(self, End::OverIn | End::UnderIn)
    }

    pub fn opposite(self) -> End {
        match self {
            End::OverIn => End::OverOut,
            End::OverOut => End::OverIn,
            End::UnderIn => End::UnderOut,
            End::UnderOut => End::UnderIn,
        }
    }

    pub fn swap_strand(self) -> End {
        match self {
            End::OverIn => End::UnderIn,
            End::OverOut => End::UnderOut,
            End::UnderIn => End::OverIn,
            End::UnderOut => End::OverOut,
        }
    }

    pub fn of(strand: Strand, incoming: bool) -> End {
        match (strand, incoming) {
            (Strand::Over, true) => End::OverIn,
            (Strand::Over, false) => End::OverOut,
            (Strand::Under, true) => End::UnderIn,
            (Strand::Under, false) => End::UnderOut,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            End::OverIn => "over_in",
            End::OverOut => "over_out",
            End::UnderIn => "under_in",
            End::UnderOut => "under_out",
        }
    }

    pub fn parse(s: &str) -> Option<End> {
        End::ALL.into_iter().find(|e| e.as_str() == s)
    }

    fn index(self) -> usize {
        self as usize
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Passage {
    pub crossing: String,
    pub strand: Strand,
}

impl Passage {
    pub fn new(crossing: &str, strand: Strand) -> Self {
        Passage {
            crossing: crossing.to_string(),
            strand,
        }
    }
}

/// Chord data attached to a crossing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossingData {
    pub height: Rational,
    pub degree: i64,
    pub lower: usize,
    pub upper: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LagrangianDiagram {
    pub name: String,
    pub grading_modulus: u32,
    pub components: Vec<Vec<Passage>>,
    /// Counterclockwise order of the four ends at each crossing.
    pub rotation: BTreeMap<String, [End; 4]>,
    pub crossings: BTreeMap<String, CrossingData>,
    /// The unbounded face, named by a crossing end it touches: the face to the
    /// left of the walk that leaves the crossing through that end. When absent
    /// each piece uses its face of least signed corner-height sum.
    pub outer: Option<(String, End)>,
}

impl LagrangianDiagram {
    /// The mirror image in the plane, with over and under exchanged. Disk
    /// words come out reversed.
    pub fn mirrored(&self) -> LagrangianDiagram {
        let mut out = self.clone();
        for comp in &mut out.components {
            for p in comp.iter_mut() {
                p.strand = p.strand.other();
            }
        }
        for ends in out.rotation.values_mut() {
            let mut r = ends.map(End::swap_strand);
            r.reverse();
            *ends = r;
        }
        for data in out.crossings.values_mut() {
            std::mem::swap(&mut data.lower, &mut data.upper);
        }
        // The old outer face lay left of the walk leaving through `end`; in
        // the mirror it lies to the right, which is the left of the walk
        // through the counterclockwise neighbour.
        if let Some((x, end)) = &self.outer {
            let ends = self.rotation[x];
            let pos = ends.iter().position(|e| e == end).unwrap();
            let neighbour = ends[(pos + 1) % 4];
            out.outer = Some((x.clone(), neighbour.swap_strand()));
        }
        out
    }

    pub fn with_heights(&self, heights: &[(&str, Rational)]) -> LagrangianDiagram {
        let mut out = self.clone();
        for (x, h) in heights {
            if let Some(d) = out.crossings.get_mut(*x) {
                d.height = h.clone();
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("diagram is invalid: {0}")]
    Invalid(String),
    #[error("degree inconsistency: disk {word} at {positive} drops degree from {from} to {to}")]
    DegreeInconsistency {
        positive: String,
        word: String,
        from: i64,
        to: i64,
    },
    #[error("compiled DGA fails validation: {0}")]
    InvalidDga(String),
}

/// A corner of an immersed polygon.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Corner {
    pub crossing: String,
    pub quadrant: usize,
    pub positive: bool,
}

/// An admissible immersed polygon with one positive corner.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiskCandidate {
    pub positive: Corner,
    /// Negative corners in counterclockwise order after the positive one.
    pub negative: Vec<Corner>,
    /// Arcs traversed, as `(arc, forward)` pairs.
    pub boundary: Vec<(usize, bool)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CompileOptions {
    pub allow_weak_energy: bool,
    /// How often the boundary may run along the same arc in the same
    /// direction.
    pub max_arc_uses: u8,
    pub exec: Exec,
}

impl Default for CompileOptions {
    fn default() -> Self {
        CompileOptions {
            allow_weak_energy: false,
            max_arc_uses: 2,
            exec: Exec::default(),
        }
    }
}

/// The planar map underlying a validated diagram.
#[derive(Clone, Debug)]
struct PlanarMap {
    names: Vec<String>,
    /// `ends_at[x][pos]`: the end in counterclockwise position `pos`.
    ends_at: Vec<[End; 4]>,
    /// `pos_of[x][end]`.
    pos_of: Vec<[usize; 4]>,
    /// `arc_at[x][end]`: the arc attached to that end.
    arc_at: Vec<[usize; 4]>,
    /// `(tail crossing, tail end, head crossing, head end)`.
    arcs: Vec<(usize, End, usize, End)>,
    /// Left face of the forward and of the backward dart of every arc.
    left_face: Vec<[usize; 2]>,
    /// `quadrant_face[x][q]`.
    quadrant_face: Vec<[usize; 4]>,
    face_quadrants: Vec<Vec<(usize, usize)>>,
    outer_faces: BTreeSet<usize>,
}

impl PlanarMap {
    fn positive_quadrant(&self, x: usize, q: usize) -> bool {
        self.ends_at[x][q].strand() == Strand::Over
    }

    /// The dart leaving crossing `x` through position `pos`: `(arc, forward)`.
    fn dart_from(&self, x: usize, pos: usize) -> (usize, bool) {
        let end = self.ends_at[x][pos];
        let arc = self.arc_at[x][end.index()];
        (arc, !end.is_in())
    }

    /// Where a dart arrives: `(crossing, position)`.
    fn arrival(&self, arc: usize, forward: bool) -> (usize, usize) {
        let (tx, te, hx, he) = self.arcs[arc];
        if forward {
            (hx, self.pos_of[hx][he.index()])
        } else {
            (tx, self.pos_of[tx][te.index()])
        }
    }
}

fn build_map(d: &LagrangianDiagram, report: &mut ValidationReport) -> Option<PlanarMap> {
    let names: Vec<String> = d.crossings.keys().cloned().collect();
    let idx: BTreeMap<&str, usize> = names
        .iter()
        .enumerate()
        .map(|(i, n)| (n.as_str(), i))
        .collect();
    let n = names.len();

    // Visits.
    let mut visits: Vec<Vec<Strand>> = vec![Vec::new(); n];
    let mut broken = false;
    for (ci, comp) in d.components.iter().enumerate() {
        for (pi, p) in comp.iter().enumerate() {
            match idx.get(p.crossing.as_str()) {
                Some(&x) => visits[x].push(p.strand),
                None => {
                    report.violation(
                        "unknown-crossing",
                        format!("component {ci}, passage {pi}"),
                        format!("crossing {:?} has no data", p.crossing),
                    );
                    broken = true;
                }
            }
        }
    }
    for (x, v) in visits.iter().enumerate() {
        let over = v.iter().filter(|s| **s == Strand::Over).count();
        let under = v.len() - over;
        if over != 1 || under != 1 {
            report.violation(
                "two-visit",
                &names[x],
                format!("visited {over} time(s) as over and {under} time(s) as under"),
            );
            broken = true;
        }
    }

    // Rotation system.
    let mut ends_at = vec![[End::OverIn; 4]; n];
    let mut pos_of = vec![[0usize; 4]; n];
    for (x, name) in names.iter().enumerate() {
        let Some(rot) = d.rotation.get(name) else {
            report.violation("rotation", name, "no rotation given");
            broken = true;
            continue;
        };
        let distinct: BTreeSet<End> = rot.iter().copied().collect();
        if distinct.len() != 4 {
            report.violation(
                "rotation",
                name,
                "rotation must list each of the four ends once",
            );
            broken = true;
            continue;
        }
        let transverse = (0..4).all(|i| {
            rot[i].strand() != rot[(i + 1) % 4].strand() && rot[(i + 2) % 4] == rot[i].opposite()
        });
        if !transverse {
            report.violation(
                "rotation",
                name,
                "ends must alternate over/under with in and out of each strand opposite",
            );
            broken = true;
            continue;
        }
        ends_at[x] = *rot;
        for (p, e) in rot.iter().enumerate() {
            pos_of[x][e.index()] = p;
        }
    }
    for extra in d.rotation.keys().filter(|k| !idx.contains_key(k.as_str())) {
        report.violation("rotation", extra, "rotation given for an unknown crossing");
        broken = true;
    }

    for (name, data) in &d.crossings {
        if !data.height.is_positive() {
            report.violation(
                "height",
                name,
                format!("height {} is not positive", format_rational(&data.height)),
            );
        }
    }
    if broken {
        return None;
    }

    // Arcs.
    let mut arcs = Vec::new();
    let mut arc_at = vec![[usize::MAX; 4]; n];
    let mut strand_component = vec![[usize::MAX; 2]; n];
    for (ci, comp) in d.components.iter().enumerate() {
        let len = comp.len();
        for i in 0..len {
            let p = &comp[i];
            let q = &comp[(i + 1) % len];
            let tx = idx[p.crossing.as_str()];
            let hx = idx[q.crossing.as_str()];
            let te = End::of(p.strand, false);
            let he = End::of(q.strand, true);
            let a = arcs.len();
            arcs.push((tx, te, hx, he));
            arc_at[tx][te.index()] = a;
            arc_at[hx][he.index()] = a;
            strand_component[tx][(p.strand == Strand::Under) as usize] = ci;
        }
    }

    for (name, data) in &d.crossings {
        let x = idx[name.as_str()];
        let [over_c, under_c] = strand_component[x];
        if data.lower != under_c || data.upper != over_c {
            report.violation(
                "components",
                name,
                format!(
                    "declared lower/upper components {}/{} but the under/over strands lie on {}/{}",
                    data.lower, data.upper, under_c, over_c
                ),
            );
        }
    }

    // Faces: orbits of darts, leaving through the clockwise neighbour of the
    // arrival end.
    let mut left_face = vec![[usize::MAX; 2]; arcs.len()];
    let mut quadrant_face = vec![[usize::MAX; 4]; n];
    let mut face_quadrants: Vec<Vec<(usize, usize)>> = Vec::new();
    let mut face_darts: Vec<Vec<(usize, bool)>> = Vec::new();
    for a0 in 0..arcs.len() {
        for fwd0 in [true, false] {
            if left_face[a0][(!fwd0) as usize] != usize::MAX {
                continue;
            }
            let f = face_quadrants.len();
            let mut quads = Vec::new();
            let mut darts = Vec::new();
            let (mut a, mut fwd) = (a0, fwd0);
            loop {
                left_face[a][(!fwd) as usize] = f;
                darts.push((a, fwd));
                let (tx, te, hx, he) = arcs[a];
                let (x, e) = if fwd { (hx, he) } else { (tx, te) };
                let pos = pos_of[x][e.index()];
                let q = (pos + 3) % 4;
                quadrant_face[x][q] = f;
                quads.push((x, q));
                let out_end = ends_at[x][q];
                let na = arc_at[x][out_end.index()];
                let nfwd = !out_end.is_in();
                if na == a0 && nfwd == fwd0 {
                    break;
                }
                a = na;
                fwd = nfwd;
            }
            face_quadrants.push(quads);
            face_darts.push(darts);
        }
    }

    // Connected pieces of the graph, for the Euler check.
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut Vec<usize>, x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut c = x;
        while p[c] != r {
            let next = p[c];
            p[c] = r;
            c = next;
        }
        r
    }
    for &(tx, _, hx, _) in &arcs {
        let (a, b) = (find(&mut parent, tx), find(&mut parent, hx));
        if a != b {
            parent[a] = b;
        }
    }
    let mut roots: BTreeMap<usize, usize> = BTreeMap::new();
    for x in 0..n {
        let r = find(&mut parent, x);
        let next = roots.len();
        roots.entry(r).or_insert(next);
    }
    let piece_of = |x: usize, parent: &mut Vec<usize>| roots[&find(parent, x)];
    let piece_count = roots.len();
    let mut v = vec![0i64; piece_count];
    let mut e = vec![0i64; piece_count];
    let mut f = vec![0i64; piece_count];
    for x in 0..n {
        v[piece_of(x, &mut parent)] += 1;
    }
    for &(tx, ..) in &arcs {
        e[piece_of(tx, &mut parent)] += 1;
    }
    let face_piece: Vec<usize> = face_darts
        .iter()
        .map(|darts| {
            let (a, _) = darts[0];
            piece_of(arcs[a].0, &mut parent)
        })
        .collect();
    for &p in &face_piece {
        f[p] += 1;
    }
    let mut planar = true;
    for p in 0..piece_count {
        let chi = v[p] - e[p] + f[p];
        if chi != 2 {
            report.violation(
                "planarity",
                format!("piece {p}"),
                format!(
                    "V - E + F = {} - {} + {} = {chi}, expected 2",
                    v[p], e[p], f[p]
                ),
            );
            planar = false;
        }
    }
    if !planar {
        return None;
    }

    // Outer faces: the designated one, and for every other piece the face of
    // least signed corner height, then most corners.
    let mut outer_faces = BTreeSet::new();
    let mut designated_piece = None;
    if let Some((xname, end)) = &d.outer {
        match idx.get(xname.as_str()) {
            Some(&x) => {
                let a = arc_at[x][end.index()];
                let fwd = !end.is_in();
                let face = left_face[a][(!fwd) as usize];
                outer_faces.insert(face);
                designated_piece = Some(face_piece[face]);
            }
            None => {
                report.violation("outer", xname, "outer face names an unknown crossing");
                return None;
            }
        }
    }
    for p in 0..piece_count {
        if Some(p) == designated_piece {
            continue;
        }
        let area = |fc: usize| -> Rational {
            face_quadrants[fc]
                .iter()
                .map(|&(x, q)| {
                    let h = &d.crossings[&names[x]].height;
                    if ends_at[x][q].strand() == Strand::Over {
                        h.clone()
                    } else {
                        -h
                    }
                })
                .sum()
        };
        let best = (0..face_quadrants.len())
            .filter(|&fc| face_piece[fc] == p)
            .min_by(|&a, &b| {
                area(a)
                    .cmp(&area(b))
                    .then(face_quadrants[b].len().cmp(&face_quadrants[a].len()))
                    .then(a.cmp(&b))
            });
        if let Some(fc) = best {
            outer_faces.insert(fc);
        }
    }

    Some(PlanarMap {
        names,
        ends_at,
        pos_of,
        arc_at,
        arcs,
        left_face,
        quadrant_face,
        face_quadrants,
        outer_faces,
    })
}

/// Signed corner heights of a face: the area a Lagrangian projection would
/// need to assign to it.
fn face_area(map: &PlanarMap, d: &LagrangianDiagram, face: usize) -> Rational {
    let mut area = Rational::zero();
    for &(x, q) in &map.face_quadrants[face] {
        let h = &d.crossings[&map.names[x]].height;
        if map.positive_quadrant(x, q) {
            area += h;
        } else {
            area -= h;
        }
    }
    area
}

/// Two-visit, rotation, planarity, height and component checks.
///
/// Bounded faces whose signed corner heights are not positive are reported as
/// warnings: such heights cannot come from an actual Lagrangian projection,
/// but they are still usable for the combinatorial count.
pub fn validate_diagram(d: &LagrangianDiagram) -> ValidationReport {
    let mut report = ValidationReport::new();
    if let Some(map) = build_map(d, &mut report) {
        for face in 0..map.face_quadrants.len() {
            if map.outer_faces.contains(&face) {
                continue;
            }
            let area = face_area(&map, d, face);
            if !area.is_positive() {
                let corners: Vec<String> = map.face_quadrants[face]
                    .iter()
                    .map(|&(x, q)| {
                        format!(
                            "{}{}",
                            if map.positive_quadrant(x, q) {
                                "+"
                            } else {
                                "-"
                            },
                            map.names[x]
                        )
                    })
                    .collect();
                report.warning(
                    "face-area",
                    format!("face [{}]", corners.join(" ")),
                    format!("signed corner heights sum to {}", format_rational(&area)),
                );
            }
        }
    }
    report
}

struct Search<'a> {
    map: &'a PlanarMap,
    heights: Vec<Rational>,
    start_x: usize,
    start_q: usize,
    budget: Rational,
    weak: bool,
    max_uses: u8,
    uses: Vec<[u8; 2]>,
    boundary: Vec<(usize, bool)>,
    /// `(crossing, quadrant, positive)` in walk order; the positive corner
    /// is appended on closing.
    corners: Vec<(usize, usize, bool)>,
    /// Straight passes: `(crossing, arrival position)`.
    passes: Vec<(usize, usize)>,
    found: Vec<DiskCandidate>,
}

impl Search<'_> {
    fn run(mut self) -> Vec<DiskCandidate> {
        let (arc, fwd) = self.map.dart_from(self.start_x, self.start_q);
        let used = Rational::zero();
        self.walk(arc, fwd, used);
        self.found
    }

    fn walk(&mut self, arc: usize, fwd: bool, used: Rational) {
        let slot = (!fwd) as usize;
        if self.uses[arc][slot] >= self.max_uses {
            return;
        }
        self.uses[arc][slot] += 1;
        self.boundary.push((arc, fwd));
        let (x, i) = self.map.arrival(arc, fwd);

        // Close at the starting corner.
        if x == self.start_x && i == (self.start_q + 1) % 4 {
            self.corners.push((x, self.start_q, true));
            if let Some(disk) = self.accept() {
                self.found.push(disk);
            }
            self.corners.pop();
        }

        // Straight on.
        self.passes.push((x, i));
        let (na, nf) = self.map.dart_from(x, (i + 2) % 4);
        self.walk(na, nf, used.clone());
        self.passes.pop();

        // Left turn into a negative quadrant.
        let q = (i + 3) % 4;
        if !self.map.positive_quadrant(x, q) {
            let total = &used + &self.heights[x];
            let within = if self.weak {
                total <= self.budget
            } else {
                total < self.budget
            };
            if within {
                self.corners.push((x, q, false));
                let (na, nf) = self.map.dart_from(x, q);
                self.walk(na, nf, total);
                self.corners.pop();
            }
        }

        self.boundary.pop();
        self.uses[arc][slot] -= 1;
    }

    /// Winding numbers, local models at crossings and the Euler characteristic.
    fn accept(&self) -> Option<DiskCandidate> {
        let map = self.map;
        let nfaces = map.face_quadrants.len();
        let narcs = map.arcs.len();
        let mut fwd_count = vec![0i64; narcs];
        let mut back_count = vec![0i64; narcs];
        for &(a, f) in &self.boundary {
            if f {
                fwd_count[a] += 1;
            } else {
                back_count[a] += 1;
            }
        }
        // w(left of forward dart) - w(left of backward dart) = fwd - back.
        let mut adj: Vec<Vec<(usize, i64)>> = vec![Vec::new(); nfaces];
        for a in 0..narcs {
            let l = map.left_face[a][0];
            let r = map.left_face[a][1];
            let t = fwd_count[a] - back_count[a];
            adj[r].push((l, t));
            adj[l].push((r, -t));
        }
        let mut w: Vec<Option<i64>> = vec![None; nfaces];
        let mut stack = Vec::new();
        for &o in &map.outer_faces {
            w[o] = Some(0);
            stack.push(o);
        }
        while let Some(f) = stack.pop() {
            let wf = w[f].unwrap();
            for &(g, t) in &adj[f] {
                match w[g] {
                    None => {
                        w[g] = Some(wf + t);
                        stack.push(g);
                    }
                    Some(wg) if wg != wf + t => return None,
                    Some(_) => {}
                }
            }
        }
        let w: Vec<i64> = w.into_iter().map(|x| x.unwrap_or(0)).collect();
        if w.iter().any(|&x| x < 0) {
            return None;
        }

        let n = map.names.len();
        let mut corner_count = vec![[0i64; 4]; n];
        let mut pass_cover = vec![[0i64; 4]; n];
        let mut boundary_points = vec![0i64; n];
        for &(x, q, _) in &self.corners {
            corner_count[x][q] += 1;
            boundary_points[x] += 1;
        }
        for &(x, i) in &self.passes {
            pass_cover[x][(i + 3) % 4] += 1;
            pass_cover[x][(i + 2) % 4] += 1;
            boundary_points[x] += 1;
        }
        let mut vertices = 0i64;
        for x in 0..n {
            let mut interior = None;
            for q in 0..4 {
                let m = w[map.quadrant_face[x][q]];
                let rest = m - corner_count[x][q] - pass_cover[x][q];
                if rest < 0 {
                    return None;
                }
                match interior {
                    None => interior = Some(rest),
                    Some(r) if r != rest => return None,
                    Some(_) => {}
                }
            }
            vertices += interior.unwrap() + boundary_points[x];
        }
        let mut edges = 0i64;
        for a in 0..narcs {
            let interior = w[map.left_face[a][0]] - fwd_count[a];
            if interior < 0 || w[map.left_face[a][1]] - back_count[a] != interior {
                return None;
            }
            edges += interior + fwd_count[a] + back_count[a];
        }
        let faces: i64 = (0..nfaces)
            .filter(|f| !map.outer_faces.contains(f))
            .map(|f| w[f])
            .sum();
        if vertices - edges + faces != 1 {
            return None;
        }

        let corner = |&(x, q, positive): &(usize, usize, bool)| Corner {
            crossing: map.names[x].clone(),
            quadrant: q,
            positive,
        };
        let positive = corner(self.corners.last().unwrap());
        let negative = self.corners[..self.corners.len() - 1]
            .iter()
            .map(corner)
            .collect();
        Some(DiskCandidate {
            positive,
            negative,
            boundary: self.boundary.clone(),
        })
    }
}

fn enumerate_with_map(
    d: &LagrangianDiagram,
    map: &PlanarMap,
    opts: CompileOptions,
) -> Vec<DiskCandidate> {
    let heights: Vec<Rational> = map
        .names
        .iter()
        .map(|x| d.crossings[x].height.clone())
        .collect();
    let mut starts = Vec::new();
    for x in 0..map.names.len() {
        for q in 0..4 {
            if map.positive_quadrant(x, q) {
                starts.push((x, q));
            }
        }
    }
    let narcs = map.arcs.len();
    let found = opts.exec.map(starts, |(x, q)| {
        Search {
            map,
            heights: heights.clone(),
            start_x: x,
            start_q: q,
            budget: heights[x].clone(),
            weak: opts.allow_weak_energy,
            max_uses: opts.max_arc_uses,
            uses: vec![[0, 0]; narcs],
            boundary: Vec::new(),
            corners: Vec::new(),
            passes: Vec::new(),
            found: Vec::new(),
        }
        .run()
    });
    found.into_iter().flatten().collect()
}

/// All admissible immersed polygons, grouped by positive corner in crossing
/// order. Fails when the diagram does not validate.
pub fn enumerate_disks(
    d: &LagrangianDiagram,
    opts: CompileOptions,
) -> Result<Vec<DiskCandidate>, DiagramError> {
    let mut report = ValidationReport::new();
    let map = build_map(d, &mut report).filter(|_| report.ok());
    let Some(map) = map else {
        return Err(DiagramError::Invalid(summary(&report)));
    };
    Ok(enumerate_with_map(d, &map, opts))
}

fn summary(report: &ValidationReport) -> String {
    report
        .violations
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

/// Compiles a diagram into its DGA: one generator per crossing, and `∂a` the
/// mod-2 count of admissible polygons with positive corner at `a`.
pub fn compile(d: &LagrangianDiagram, opts: CompileOptions) -> Result<Dga, DiagramError> {
    let report = validate_diagram(d);
    if !report.ok() {
        return Err(DiagramError::Invalid(summary(&report)));
    }
    let disks = enumerate_disks(d, opts)?;
    let num_components = d.components.len().max(1);
    let generators: Vec<Generator> = d
        .crossings
        .iter()
        .map(|(name, c)| Generator {
            name: name.clone(),
            degree: c.degree,
            height: c.height.clone(),
            lower: c.lower,
            upper: c.upper,
        })
        .collect();
    let mut dga = Dga::new(&d.name, d.grading_modulus, num_components, generators)
        .map_err(|e| DiagramError::Invalid(e.to_string()))?;
    let mut diffs: BTreeMap<u32, Poly> = BTreeMap::new();
    for disk in &disks {
        let a = dga
            .id(&disk.positive.crossing)
            .expect("crossing names are generators");
        let word = Monomial::new(
            disk.negative
                .iter()
                .map(|c| dga.id(&c.crossing).expect("crossing names are generators"))
                .collect(),
        );
        let from = dga.degree(a);
        let to = dga.word_degree(&word);
        if !dga.degrees_agree(to, from - 1) {
            return Err(DiagramError::DegreeInconsistency {
                positive: disk.positive.crossing.clone(),
                word: dga.format_monomial(&word),
                from,
                to,
            });
        }
        diffs.entry(a).or_default().toggle(word);
    }
    for (a, p) in diffs {
        dga.set_differential(a, p);
    }
    let check = validate_dga(
        &dga,
        ValidationOptions {
            allow_weak_energy: opts.allow_weak_energy,
        },
    );
    if !check.ok() {
        return Err(DiagramError::InvalidDga(summary(&check)));
    }
    Ok(dga)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::numeric::{int, rat};

    fn diff(dga: &Dga, g: &str) -> String {
        dga.format_poly(dga.differential(dga.id(g).unwrap()))
    }

    #[test]
    fn unknot_figure_eight() {
        let d = fixtures::unknot_diagram(&int(1));
        assert!(validate_diagram(&d).ok());
        let dga = compile(&d, CompileOptions::default()).unwrap();
        assert_eq!(dga.len(), 1);
        assert_eq!(diff(&dga, "gamma"), "0");
        // Both lobes are monogons at the positive quadrants; they cancel.
        let disks = enumerate_disks(&d, CompileOptions::default()).unwrap();
        assert_eq!(disks.len(), 2);
        assert!(disks.iter().all(|k| k.negative.is_empty()));
    }

    #[test]
    fn trefoil_differential() {
        let d = fixtures::trefoil_diagram(&int(2), &rat(1, 2));
        let r = validate_diagram(&d);
        assert!(r.ok(), "{:?}", r.violations);
        assert!(r.warnings.is_empty(), "{:?}", r.warnings);
        let dga = compile(&d, CompileOptions::default()).unwrap();
        assert_eq!(dga, fixtures::trefoil_dga(&int(2), &rat(1, 2)));
    }

    #[test]
    fn hopf_differential() {
        for u in [rat(1, 3), rat(1, 2), rat(3, 4)] {
            let d = fixtures::hopf_diagram(&u);
            assert!(validate_diagram(&d).ok());
            let dga = compile(&d, CompileOptions::default()).unwrap();
            assert_eq!(dga, fixtures::hopf_dga(&u));
        }
    }

    #[test]
    fn double_over_visit_is_reported() {
        let mut d = fixtures::unknot_diagram(&int(1));
        for p in d.components[0].iter_mut() {
            p.strand = Strand::Over;
        }
        let r = validate_diagram(&d);
        assert!(r.has_rule("two-visit"));
    }

    #[test]
    fn non_transverse_rotation_is_reported() {
        let mut d = fixtures::unknot_diagram(&int(1));
        d.rotation.insert(
            "g".into(),
            [End::OverIn, End::OverOut, End::UnderIn, End::UnderOut],
        );
        assert!(validate_diagram(&d).has_rule("rotation"));
    }

    #[test]
    fn non_planar_rotation_is_reported() {
        // Flipping one crossing of the trefoil breaks planarity.
        let mut d = fixtures::trefoil_diagram(&int(2), &rat(1, 2));
        let rot = d.rotation.get_mut("b2").unwrap();
        rot.swap(1, 3);
        let r = validate_diagram(&d);
        assert!(r.has_rule("planarity"), "{:?}", r.violations);
    }

    #[test]
    fn nonpositive_height_is_reported() {
        let d = fixtures::unknot_diagram(&int(0));
        assert!(validate_diagram(&d).has_rule("height"));
    }

    #[test]
    fn wrong_degrees_are_detected() {
        let mut d = fixtures::trefoil_diagram(&int(2), &rat(1, 2));
        d.crossings.get_mut("a1").unwrap().degree = 3;
        assert!(matches!(
            compile(&d, CompileOptions::default()),
            Err(DiagramError::DegreeInconsistency { .. })
        ));
    }

    #[test]
    fn mirror_reverses_words() {
        for d in [
            fixtures::trefoil_diagram(&int(2), &rat(1, 2)),
            fixtures::hopf_diagram(&rat(1, 3)),
        ] {
            let a = compile(&d, CompileOptions::default()).unwrap();
            let b = compile(&d.mirrored(), CompileOptions::default()).unwrap();
            for g in a.ids() {
                let name = a.name(g);
                let bg = b.id(name).unwrap();
                assert_eq!(&a.differential(g).reversed(), b.differential(bg), "∂{name}");
            }
        }
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let d = fixtures::trefoil_diagram(&int(2), &rat(1, 2));
        let seq = enumerate_disks(
            &d,
            CompileOptions {
                exec: Exec::Sequential,
                ..Default::default()
            },
        )
        .unwrap();
        let par = enumerate_disks(
            &d,
            CompileOptions {
                exec: Exec::Parallel,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(seq, par);
    }
}
