//! Icosahedral geometry over `Z[φ]`: the three golden rectangles, the
//! icosahedron they span, its 60 rotations and the five inscribed octahedra.
//!
//! Coordinates use short side 2, so vertices are the cyclic permutations of
//! `(±φ, ±1, 0)`. Edge midpoints and rotation matrices can have entries in
//! `½Z[φ]`, so both are stored doubled.
//!
//! Octahedron 1 is the one through the short-edge midpoints of the
//! rectangles, `{(±φ,0,0), (0,±φ,0), (0,0,±φ)}`. Octahedra 2..5 are its images
//! under repeated 1/5 right-hand turns about the vertex axis from
//! `(0,-φ,-1)` to `(0,φ,1)`, so that turn acts as `(12345)`.

mod golden;

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

pub use golden::{GoldenNumber, GoldenVector};

use crate::perm::{Permutation, PermutationGroup};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IcosaError {
    #[error("matrix is not a rotational symmetry of the icosahedron")]
    NotASymmetry,
}

const fn g(a: i64, b: i64) -> GoldenNumber {
    GoldenNumber::new(a, b)
}

const fn v(x: GoldenNumber, y: GoldenNumber, z: GoldenNumber) -> GoldenVector {
    GoldenVector::new(x, y, z)
}

const O: GoldenNumber = g(0, 0);
const I: GoldenNumber = g(1, 0);
const M: GoldenNumber = g(-1, 0);
const P: GoldenNumber = g(0, 1);
const N: GoldenNumber = g(0, -1);

/// Corners of the three golden rectangles, each listed around its boundary
/// starting with a short side.
pub fn three_rectangles() -> [[GoldenVector; 4]; 3] {
    [
        [v(P, I, O), v(P, M, O), v(N, M, O), v(N, I, O)],
        [v(O, P, I), v(O, P, M), v(O, N, M), v(O, N, I)],
        [v(I, O, P), v(M, O, P), v(M, O, N), v(I, O, N)],
    ]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Polyhedron {
    pub vertices: Vec<GoldenVector>,
    pub edges: Vec<(usize, usize)>,
    pub faces: Vec<[usize; 3]>,
}

impl Polyhedron {
    pub fn counts(&self) -> (usize, usize, usize) {
        (self.vertices.len(), self.edges.len(), self.faces.len())
    }

    pub fn vertex_index(&self, p: GoldenVector) -> Option<usize> {
        self.vertices.iter().position(|&q| q == p)
    }

    /// Twice the midpoint of each edge.
    pub fn doubled_edge_midpoints(&self) -> Vec<GoldenVector> {
        self.edges
            .iter()
            .map(|&(i, j)| self.vertices[i] + self.vertices[j])
            .collect()
    }

    /// Three times the centroid of each face.
    pub fn tripled_face_centroids(&self) -> Vec<GoldenVector> {
        self.faces
            .iter()
            .map(|f| self.vertices[f[0]] + self.vertices[f[1]] + self.vertices[f[2]])
            .collect()
    }

    /// Number of edges at each vertex.
    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.vertices.len()];
        for &(i, j) in &self.edges {
            d[i] += 1;
            d[j] += 1;
        }
        d
    }

    /// OFF text with 12 significant digits. Faces are wound counterclockwise
    /// seen from outside.
    pub fn to_off(&self) -> String {
        let mut s = format!(
            "OFF\n{} {} {}\n",
            self.vertices.len(),
            self.faces.len(),
            self.edges.len()
        );
        for p in &self.vertices {
            let c: Vec<String> = p.to_f64().iter().map(|&x| sig12(x)).collect();
            s.push_str(&c.join(" "));
            s.push('\n');
        }
        for f in &self.faces {
            s.push_str(&format!("3 {} {} {}\n", f[0], f[1], f[2]));
        }
        s
    }
}

fn sig12(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let digits = 11 - x.abs().log10().floor() as i32;
    let s = format!("{:.*}", digits.max(0) as usize, x);
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// The 12 rectangle corners with edges at squared distance 4 and the
/// triangles they bound.
pub fn icosahedron() -> Polyhedron {
    let vertices: Vec<GoldenVector> = three_rectangles().into_iter().flatten().collect();
    let four = GoldenNumber::int(4);
    let n = vertices.len();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if (vertices[i] - vertices[j]).norm2() == four {
                edges.push((i, j));
            }
        }
    }
    let adjacent = |i: usize, j: usize| edges.contains(&(i.min(j), i.max(j)));
    let mut faces = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if adjacent(i, j) && adjacent(j, k) && adjacent(i, k) {
                    let (a, b, c) = (vertices[i], vertices[j], vertices[k]);
                    let outward = (b - a).cross(c - a).dot(a + b + c).is_positive();
                    faces.push(if outward { [i, j, k] } else { [i, k, j] });
                }
            }
        }
    }
    Polyhedron {
        vertices,
        edges,
        faces,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AxisType {
    Identity,
    Vertex,
    Face,
    Edge,
}

/// A rotation matrix `M`, stored as `2M` since entries lie in `½Z[φ]`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
pub struct GoldenRotation {
    doubled: [[GoldenNumber; 3]; 3],
}

impl GoldenRotation {
    pub fn identity() -> Self {
        let two = GoldenNumber::int(2);
        let mut d = [[O; 3]; 3];
        for (i, row) in d.iter_mut().enumerate() {
            row[i] = two;
        }
        GoldenRotation { doubled: d }
    }

    /// From the doubled matrix `2M`. Checks `MᵀM = I` and `det M = 1`.
    pub fn from_doubled(doubled: [[GoldenNumber; 3]; 3]) -> Option<Self> {
        let r = GoldenRotation { doubled };
        let four = GoldenNumber::int(4);
        for i in 0..3 {
            for j in 0..3 {
                let dot = (0..3).fold(O, |acc, k| acc + doubled[k][i] * doubled[k][j]);
                if dot != if i == j { four } else { O } {
                    return None;
                }
            }
        }
        (det3(&doubled) == GoldenNumber::int(8)).then_some(r)
    }

    pub fn doubled(&self) -> &[[GoldenNumber; 3]; 3] {
        &self.doubled
    }

    /// `M v`, when it lies in `Z[φ]³`.
    pub fn apply(&self, p: GoldenVector) -> Option<GoldenVector> {
        let c = p.coords();
        let row = |i: usize| (0..3).fold(O, |acc, k| acc + self.doubled[i][k] * c[k]);
        GoldenVector::new(row(0), row(1), row(2)).halve()
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &GoldenRotation) -> GoldenRotation {
        let mut d = [[O; 3]; 3];
        for (i, row) in d.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                let s = (0..3).fold(O, |acc, k| acc + self.doubled[i][k] * other.doubled[k][j]);
                *entry = s.halve().expect("product of rotations stays in ½Z[φ]");
            }
        }
        GoldenRotation { doubled: d }
    }

    pub fn inverse(&self) -> GoldenRotation {
        let mut d = [[O; 3]; 3];
        for (i, row) in d.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                *entry = self.doubled[j][i];
            }
        }
        GoldenRotation { doubled: d }
    }

    pub fn is_identity(&self) -> bool {
        *self == GoldenRotation::identity()
    }

    /// Twice the trace; the trace is `1 + 2cos θ`.
    pub fn doubled_trace(&self) -> GoldenNumber {
        self.doubled[0][0] + self.doubled[1][1] + self.doubled[2][2]
    }

    /// Twice `(M32 - M23, M13 - M31, M21 - M12)`, which is `2 sin θ` times the
    /// unit axis, scaled by 2.
    pub fn doubled_axial(&self) -> GoldenVector {
        let m = &self.doubled;
        GoldenVector::new(m[2][1] - m[1][2], m[0][2] - m[2][0], m[1][0] - m[0][1])
    }

    /// True when the rotation turns counterclockwise looking down `axis`
    /// from its tip (right-hand rule), and `axis` is fixed.
    pub fn is_right_handed_about(&self, axis: GoldenVector) -> bool {
        self.apply(axis) == Some(axis) && self.doubled_axial().dot(axis).is_positive()
    }

    pub fn order(&self) -> usize {
        let mut x = *self;
        let mut k = 1;
        while !x.is_identity() {
            x = x.compose(self);
            k += 1;
        }
        k
    }

    pub fn to_f64(&self) -> [[f64; 3]; 3] {
        let mut m = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] = self.doubled[i][j].to_f64() / 2.0;
            }
        }
        m
    }
}

fn det3(m: &[[GoldenNumber; 3]; 3]) -> GoldenNumber {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// The rotation taking the frame `(v1, v2, v1×v2)` to `(w1, w2, w1×w2)`,
/// when it exists with entries in `½Z[φ]`.
fn frame_rotation(
    v1: GoldenVector,
    v2: GoldenVector,
    w1: GoldenVector,
    w2: GoldenVector,
) -> Option<GoldenRotation> {
    let cols_v = [v1, v2, v1.cross(v2)].map(GoldenVector::coords);
    let cols_w = [w1, w2, w1.cross(w2)].map(GoldenVector::coords);
    // V has the v's as columns.
    let mut vm = [[O; 3]; 3];
    let mut wm = [[O; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            vm[i][j] = cols_v[j][i];
            wm[i][j] = cols_w[j][i];
        }
    }
    let det = det3(&vm);
    // adjugate of V
    let mut adj = [[O; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let (r0, r1) = ((j + 1) % 3, (j + 2) % 3);
            let (c0, c1) = ((i + 1) % 3, (i + 2) % 3);
            adj[i][j] = vm[r0][c0] * vm[r1][c1] - vm[r0][c1] * vm[r1][c0];
        }
    }
    let mut doubled = [[O; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let s = (0..3).fold(O, |acc, k| acc + wm[i][k] * adj[k][j]);
            doubled[i][j] = (s + s).checked_div(det)?;
        }
    }
    GoldenRotation::from_doubled(doubled)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassifiedRotation {
    pub rotation: GoldenRotation,
    pub axis: AxisType,
    pub order: usize,
}

/// All 60 rotations, each determined by where it sends one edge (as an
/// ordered pair of vertices). Sorted by axis type, then by matrix.
pub fn rotation_group() -> Vec<ClassifiedRotation> {
    let ico = icosahedron();
    let (a, b) = ico.edges[0];
    let (v1, v2) = (ico.vertices[a], ico.vertices[b]);
    let mut out = Vec::new();
    for &(i, j) in &ico.edges {
        for (p, q) in [(i, j), (j, i)] {
            let r = frame_rotation(v1, v2, ico.vertices[p], ico.vertices[q])
                .expect("edge frames are related by a rotation");
            debug_assert!(permutes_vertices(&ico, &r));
            out.push(ClassifiedRotation {
                rotation: r,
                axis: classify(&ico, &r),
                order: r.order(),
            });
        }
    }
    out.sort_by(|x, y| {
        (x.axis, x.order, key(&x.rotation)).cmp(&(y.axis, y.order, key(&y.rotation)))
    });
    out
}

fn key(r: &GoldenRotation) -> Vec<(i64, i64)> {
    r.doubled.iter().flatten().map(|x| (x.a, x.b)).collect()
}

fn permutes_vertices(ico: &Polyhedron, r: &GoldenRotation) -> bool {
    let mut hit = vec![false; ico.vertices.len()];
    for &p in &ico.vertices {
        match r.apply(p).and_then(|q| ico.vertex_index(q)) {
            Some(k) if !hit[k] => hit[k] = true,
            _ => return false,
        }
    }
    true
}

/// Axis type by which feature the rotation fixes: a vertex, a face centre or
/// an edge midpoint.
fn classify(ico: &Polyhedron, r: &GoldenRotation) -> AxisType {
    if r.is_identity() {
        AxisType::Identity
    } else if ico.vertices.iter().any(|&p| r.apply(p) == Some(p)) {
        AxisType::Vertex
    } else if ico
        .tripled_face_centroids()
        .iter()
        .any(|&p| r.apply(p) == Some(p))
    {
        AxisType::Face
    } else if ico
        .doubled_edge_midpoints()
        .iter()
        .any(|&p| r.apply(p) == Some(p))
    {
        AxisType::Edge
    } else {
        unreachable!("every rotation fixes a vertex, face or edge")
    }
}

/// The top vertex `(0,φ,1)`.
pub fn top_vertex() -> GoldenVector {
    v(O, P, I)
}

/// The 1/5 right-hand turn about the vertex axis `(0,-φ,-1) -> (0,φ,1)`.
pub fn vertex_axis_rotation() -> GoldenRotation {
    let axis = top_vertex();
    rotation_group()
        .into_iter()
        .map(|c| c.rotation)
        .find(|r| r.doubled_trace() == g(0, 2) && r.is_right_handed_about(axis))
        .expect("a 72 degree turn about the vertex axis exists")
}

/// The 30 doubled edge midpoints split into the five octahedra, each set
/// listed as three antipodal pairs.
pub fn five_octahedra() -> [[GoldenVector; 6]; 5] {
    let two_phi = g(0, 2);
    let first = [
        v(two_phi, O, O),
        v(-two_phi, O, O),
        v(O, two_phi, O),
        v(O, -two_phi, O),
        v(O, O, two_phi),
        v(O, O, -two_phi),
    ];
    let r = vertex_axis_rotation();
    let mut out = [first; 5];
    for k in 1..5 {
        out[k] = out[k - 1].map(|p| r.apply(p).expect("midpoints map to midpoints"));
    }
    out
}

/// Where `r` sends the five octahedra, as a permutation of `1..5`.
pub fn action_on_octahedra(r: &GoldenRotation) -> Result<Permutation, IcosaError> {
    let ico = icosahedron();
    if !permutes_vertices(&ico, r) {
        return Err(IcosaError::NotASymmetry);
    }
    let octa = five_octahedra();
    let mut images = Vec::with_capacity(5);
    for set in &octa {
        let moved: Vec<GoldenVector> = set
            .iter()
            .map(|&p| r.apply(p).ok_or(IcosaError::NotASymmetry))
            .collect::<Result<_, _>>()?;
        let target = octa
            .iter()
            .position(|other| moved.iter().all(|p| other.contains(p)))
            .ok_or(IcosaError::NotASymmetry)?;
        images.push(target + 1);
    }
    Permutation::from_images(&images).map_err(|_| IcosaError::NotASymmetry)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Correspondence {
    pub axis: AxisType,
    pub order: usize,
    pub matrix: GoldenRotation,
    pub permutation: Permutation,
}

/// Checked facts about the map from rotations to permutations of octahedra.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct A5Certificate {
    pub group_order: usize,
    pub image_order: usize,
    pub kernel_trivial: bool,
    pub image_is_alternating: bool,
    pub homomorphism_pairs_checked: usize,
    pub vertex_axis: Permutation,
    pub face_axis: Permutation,
    pub edge_axis: Permutation,
    /// Three times the centroid of the face whose axis carries `(123)`.
    pub face_axis_direction: GoldenVector,
    /// Twice the midpoint on the half-turn axis carrying `(23)(45)`.
    pub edge_axis_direction: GoldenVector,
    pub table: Vec<Correspondence>,
}

impl A5Certificate {
    pub fn holds(&self) -> bool {
        self.group_order == 60
            && self.image_order == 60
            && self.kernel_trivial
            && self.image_is_alternating
            && self.homomorphism_pairs_checked == 3600
    }
}

/// Builds the rotation-to-permutation table and checks that it is an
/// isomorphism onto A5. Also locates the face and edge axes whose turns act
/// as `(123)` and `(23)(45)`.
pub fn certify_a5_isomorphism() -> A5Certificate {
    let ico = icosahedron();
    let rotations = rotation_group();
    let perms: Vec<Permutation> = rotations
        .iter()
        .map(|c| action_on_octahedra(&c.rotation).expect("group elements are symmetries"))
        .collect();

    let index: BTreeMap<GoldenRotation, usize> = rotations
        .iter()
        .enumerate()
        .map(|(i, c)| (c.rotation, i))
        .collect();
    let mut pairs = 0;
    for (i, a) in rotations.iter().enumerate() {
        for (j, b) in rotations.iter().enumerate() {
            let ab = a.rotation.compose(&b.rotation);
            let k = index[&ab];
            if perms[k] == perms[i].compose(&perms[j]).expect("degree 5") {
                pairs += 1;
            }
        }
    }

    let image = PermutationGroup::closure(5, &perms).expect("degree 5");
    let distinct: std::collections::BTreeSet<&Permutation> = perms.iter().collect();
    let kernel: Vec<usize> = (0..perms.len())
        .filter(|&i| perms[i].is_identity())
        .collect();
    let a5 = PermutationGroup::alternating(5);

    let find = |text: &str| {
        let p = Permutation::parse_cycles(text, 5).expect("valid cycle");
        let i = perms
            .iter()
            .position(|q| *q == p)
            .expect("every even permutation occurs");
        (i, p)
    };
    let vertex_axis = action_on_octahedra(&vertex_axis_rotation()).expect("symmetry");
    let (fi, face_axis) = find("(123)");
    let (ei, edge_axis) = find("(23)(45)");
    let face_rot = rotations[fi].rotation;
    let face_axis_direction = ico
        .tripled_face_centroids()
        .into_iter()
        .find(|&c| face_rot.is_right_handed_about(c))
        .expect("face turn fixes a face centre");
    let edge_rot = rotations[ei].rotation;
    let edge_axis_direction = ico
        .doubled_edge_midpoints()
        .into_iter()
        .filter(|&m| edge_rot.apply(m) == Some(m))
        .max_by_key(|m| (m.x, m.y, m.z))
        .expect("half turn fixes an edge midpoint");

    A5Certificate {
        group_order: rotations.len(),
        image_order: image.order(),
        kernel_trivial: kernel.len() == 1 && distinct.len() == perms.len(),
        image_is_alternating: image.elements() == a5.elements(),
        homomorphism_pairs_checked: pairs,
        vertex_axis,
        face_axis,
        edge_axis,
        face_axis_direction,
        edge_axis_direction,
        table: rotations
            .iter()
            .zip(&perms)
            .map(|(c, p)| Correspondence {
                axis: c.axis,
                order: c.order,
                matrix: c.rotation,
                permutation: p.clone(),
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rectangles() {
        let four = GoldenNumber::int(4);
        for rect in three_rectangles() {
            let short = (rect[0] - rect[1]).norm2();
            let long = (rect[1] - rect[2]).norm2();
            assert_eq!(short, four);
            // (long/short)^2 = φ^2 = 1 + φ
            assert_eq!(long, four * g(1, 1));
        }
    }

    #[test]
    fn icosahedron_counts() {
        let ico = icosahedron();
        assert_eq!(ico.counts(), (12, 30, 20));
        assert!(ico.degrees().iter().all(|&d| d == 5));
        for &(i, j) in &ico.edges {
            assert_eq!(
                (ico.vertices[i] - ico.vertices[j]).norm2(),
                GoldenNumber::int(4)
            );
        }
    }

    #[test]
    fn rotation_census() {
        let rots = rotation_group();
        assert_eq!(rots.len(), 60);
        let count = |t| rots.iter().filter(|c| c.axis == t).count();
        assert_eq!(count(AxisType::Vertex), 24);
        assert_eq!(count(AxisType::Face), 20);
        assert_eq!(count(AxisType::Edge), 15);
        assert_eq!(count(AxisType::Identity), 1);
        for c in &rots {
            let expected = match c.axis {
                AxisType::Identity => 1,
                AxisType::Vertex => 5,
                AxisType::Face => 3,
                AxisType::Edge => 2,
            };
            assert_eq!(c.order, expected);
        }
    }

    #[test]
    fn octahedra_partition() {
        let octa = five_octahedra();
        let mut all: Vec<GoldenVector> = octa.iter().flatten().copied().collect();
        all.sort_by_key(|p| p.coords().map(|x| (x.a, x.b)));
        let mut mids = icosahedron().doubled_edge_midpoints();
        mids.sort_by_key(|p| p.coords().map(|x| (x.a, x.b)));
        assert_eq!(all, mids);
        for set in &octa {
            for k in 0..3 {
                assert_eq!(set[2 * k], -set[2 * k + 1]);
                for l in k + 1..3 {
                    assert!(set[2 * k].dot(set[2 * l]).is_zero());
                }
                assert_eq!(set[2 * k].norm2(), set[0].norm2());
            }
        }
    }

    #[test]
    fn designated_axes() {
        let five = action_on_octahedra(&vertex_axis_rotation()).unwrap();
        assert_eq!(five.to_string(), "(12345)");
        assert_eq!(
            action_on_octahedra(&GoldenRotation::identity())
                .unwrap()
                .to_string(),
            "(1)"
        );
        let cert = certify_a5_isomorphism();
        assert!(cert.holds());
        assert_eq!(cert.face_axis.to_string(), "(123)");
        assert_eq!(cert.edge_axis.to_string(), "(23)(45)");
        let axis_of = |p: &Permutation| {
            let c = cert.table.iter().find(|c| c.permutation == *p).unwrap();
            (c.axis, c.order)
        };
        assert_eq!(axis_of(&cert.vertex_axis), (AxisType::Vertex, 5));
        assert_eq!(axis_of(&cert.face_axis), (AxisType::Face, 3));
        assert_eq!(axis_of(&cert.edge_axis), (AxisType::Edge, 2));
        // the (23)(45) half-turn is about a vertex diagonal of octahedron 1
        let d = cert.edge_axis_direction.coords();
        assert_eq!(d.iter().filter(|x| x.is_zero()).count(), 2);
    }

    #[test]
    fn not_a_symmetry() {
        let two = GoldenNumber::int(2);
        // quarter turn about z: orthogonal but not an icosahedral symmetry
        let q = GoldenRotation::from_doubled([[O, -two, O], [two, O, O], [O, O, two]]).unwrap();
        assert_eq!(action_on_octahedra(&q), Err(IcosaError::NotASymmetry));
    }

    #[test]
    fn off_export() {
        let off = icosahedron().to_off();
        let lines: Vec<&str> = off.lines().collect();
        assert_eq!(lines[0], "OFF");
        assert_eq!(lines[1], "12 20 30");
        assert_eq!(lines[2], "1.61803398875 1 0");
        assert_eq!(lines.len(), 2 + 12 + 20);
    }
}
