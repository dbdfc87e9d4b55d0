//! Points, lines, planes and quadrics of P³ over GF(p), seeded sampling of
//! general configurations, and the Segre parametrization of the standard
//! quadric `x0·x3 − x1·x2`.

use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Matrix, PrimeField};

/// Resample budget for every "general position" draw.
pub const MAX_RETRIES: usize = 100;

pub type Vec4 = [u64; 4];

/// Rank of a handful of vectors in GF(p)⁴.
pub fn span_rank(field: PrimeField, vecs: &[Vec4]) -> usize {
    Matrix::from_rows(field, 4, vecs).rank()
}

fn normalize<const N: usize>(field: PrimeField, mut v: [u64; N]) -> Result<[u64; N]> {
    for x in v.iter_mut() {
        *x = field.reduce(*x);
    }
    let Some(&lead) = v.iter().find(|&&x| x != 0) else {
        return Err(Error::ZeroVector);
    };
    let inv = field.inv(lead);
    for x in v.iter_mut() {
        *x = field.mul(*x, inv);
    }
    Ok(v)
}

/// A point of P³, stored with first nonzero coordinate equal to 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ProjPoint {
    coords: Vec4,
}

impl ProjPoint {
    pub fn new(field: PrimeField, coords: Vec4) -> Result<Self> {
        Ok(ProjPoint {
            coords: normalize(field, coords)?,
        })
    }

    pub fn from_i64(field: PrimeField, coords: [i64; 4]) -> Result<Self> {
        ProjPoint::new(field, coords.map(|x| field.from_i64(x)))
    }

    pub fn coords(&self) -> Vec4 {
        self.coords
    }

    pub fn basis(i: usize) -> Self {
        let mut coords = [0; 4];
        coords[i] = 1;
        ProjPoint { coords }
    }
}

/// A line of P³ spanned by two distinct points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Line {
    a: ProjPoint,
    b: ProjPoint,
}

impl Line {
    pub fn new(field: PrimeField, a: ProjPoint, b: ProjPoint) -> Result<Self> {
        if span_rank(field, &[a.coords, b.coords]) != 2 {
            return Err(Error::DegenerateComponent("a line needs two distinct points".into()));
        }
        Ok(Line { a, b })
    }

    pub fn through(field: PrimeField, a: Vec4, b: Vec4) -> Result<Self> {
        Line::new(field, ProjPoint::new(field, a)?, ProjPoint::new(field, b)?)
    }

    pub fn a(&self) -> ProjPoint {
        self.a
    }

    pub fn b(&self) -> ProjPoint {
        self.b
    }

    pub fn span(&self) -> [Vec4; 2] {
        [self.a.coords, self.b.coords]
    }

    /// `s·A + t·B` (not normalized; `(s, t) ≠ (0, 0)`).
    pub fn point_at(&self, field: PrimeField, s: u64, t: u64) -> Vec4 {
        let (a, b) = (self.a.coords, self.b.coords);
        std::array::from_fn(|i| field.add(field.mul(s, a[i]), field.mul(t, b[i])))
    }

    pub fn contains(&self, field: PrimeField, p: &ProjPoint) -> bool {
        span_rank(field, &[self.a.coords, self.b.coords, p.coords]) == 2
    }

    /// True when the two lines have no common point.
    pub fn is_skew(&self, field: PrimeField, other: &Line) -> bool {
        let [a, b] = self.span();
        let [c, d] = other.span();
        span_rank(field, &[a, b, c, d]) == 4
    }

    pub fn same_as(&self, field: PrimeField, other: &Line) -> bool {
        let [a, b] = self.span();
        let [c, d] = other.span();
        span_rank(field, &[a, b, c, d]) == 2
    }
}

/// A plane, given by the coefficients of its linear form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Plane {
    normal: Vec4,
}

impl Plane {
    pub fn new(field: PrimeField, normal: Vec4) -> Result<Self> {
        Ok(Plane {
            normal: normalize(field, normal)?,
        })
    }

    pub fn normal(&self) -> Vec4 {
        self.normal
    }

    pub fn contains(&self, field: PrimeField, p: &ProjPoint) -> bool {
        dot(field, &self.normal, &p.coords) == 0
    }

    /// Two vectors completing a point of the plane to a basis of it.
    pub fn directions_at(&self, field: PrimeField, p: &ProjPoint) -> [Vec4; 2] {
        // Kernel of the linear form is 3-dimensional; pick the two kernel
        // vectors that together with p still span it.
        let m = Matrix::from_rows(field, 4, &[self.normal]);
        let kernel = m.nullspace_basis();
        let mut chosen: Vec<Vec4> = vec![p.coords];
        for v in kernel {
            let v: Vec4 = [v[0], v[1], v[2], v[3]];
            let mut trial = chosen.clone();
            trial.push(v);
            if span_rank(field, &trial) == trial.len() {
                chosen = trial;
            }
            if chosen.len() == 3 {
                break;
            }
        }
        [chosen[1], chosen[2]]
    }
}

pub(crate) fn dot(field: PrimeField, x: &Vec4, y: &Vec4) -> u64 {
    (0..4).fold(0, |acc, i| field.add(acc, field.mul(x[i], y[i])))
}

/// Pairs `(i, j)`, `i ≤ j`, indexing the ten quadratic monomials `x_i x_j`.
const QUADRATIC_MONOMIALS: [(usize, usize); 10] = [
    (0, 0),
    (0, 1),
    (0, 2),
    (0, 3),
    (1, 1),
    (1, 2),
    (1, 3),
    (2, 2),
    (2, 3),
    (3, 3),
];

/// A quadric surface `Σ c_ij x_i x_j`, up to scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Quadric {
    /// Coefficients on `QUADRATIC_MONOMIALS`, first nonzero equal to 1.
    coefficients: [u64; 10],
}

impl Quadric {
    pub fn from_coefficients(field: PrimeField, coefficients: [u64; 10]) -> Result<Self> {
        Ok(Quadric {
            coefficients: normalize(field, coefficients)?,
        })
    }

    /// The standard quadric `x0·x3 − x1·x2`.
    pub fn standard(field: PrimeField) -> Self {
        let mut c = [0; 10];
        c[3] = 1;
        c[5] = field.neg(1);
        Quadric { coefficients: c }
    }

    pub fn coefficients(&self) -> [u64; 10] {
        self.coefficients
    }

    pub fn is_standard(&self, field: PrimeField) -> bool {
        *self == Quadric::standard(field)
    }

    /// Symmetric matrix `G` with `q(x) = xᵀ G x`.
    pub fn gram(&self, field: PrimeField) -> [[u64; 4]; 4] {
        let half = field.inv(2);
        let mut g = [[0; 4]; 4];
        for (k, &(i, j)) in QUADRATIC_MONOMIALS.iter().enumerate() {
            let c = self.coefficients[k];
            if i == j {
                g[i][i] = c;
            } else {
                g[i][j] = field.mul(c, half);
                g[j][i] = g[i][j];
            }
        }
        g
    }

    pub fn eval(&self, field: PrimeField, x: &Vec4) -> u64 {
        QUADRATIC_MONOMIALS.iter().enumerate().fold(0, |acc, (k, &(i, j))| {
            field.add(acc, field.mul(self.coefficients[k], field.mul(x[i], x[j])))
        })
    }

    pub fn contains(&self, field: PrimeField, p: &ProjPoint) -> bool {
        self.eval(field, &p.coords) == 0
    }

    pub fn is_smooth(&self, field: PrimeField) -> bool {
        let g = self.gram(field);
        span_rank(field, &g) == 4
    }

    /// True when every point of the line lies on the quadric.
    pub fn contains_line(&self, field: PrimeField, line: &Line) -> bool {
        let [a, b] = line.span();
        let ab = std::array::from_fn(|i| field.add(a[i], b[i]));
        self.eval(field, &a) == 0 && self.eval(field, &b) == 0 && self.eval(field, &ab) == 0
    }
}

/// Evaluation row of the ten quadratic monomials at `x`.
fn quadric_row(field: PrimeField, x: &Vec4) -> Vec<u64> {
    QUADRATIC_MONOMIALS
        .iter()
        .map(|&(i, j)| field.mul(x[i], x[j]))
        .collect()
}

/// The unique quadric containing three lines.
///
/// Built as the kernel of the 9×10 evaluation matrix at `A`, `B`, `A + B`
/// of each line; fails with [`Error::NotUnique`] when the kernel is not a
/// single line.
pub fn quadric_through_lines(field: PrimeField, l1: &Line, l2: &Line, l3: &Line) -> Result<Quadric> {
    let mut m = Matrix::with_cols(field, 10);
    for l in [l1, l2, l3] {
        let [a, b] = l.span();
        let ab: Vec4 = std::array::from_fn(|i| field.add(a[i], b[i]));
        for x in [a, b, ab] {
            m.push_row(&quadric_row(field, &x));
        }
    }
    let kernel = m.nullspace_basis();
    if kernel.len() != 1 {
        return Err(Error::NotUnique(kernel.len()));
    }
    let c: [u64; 10] = kernel[0].clone().try_into().expect("ten coefficients");
    Quadric::from_coefficients(field, c)
}

/// Tangent plane of `q` at a point of `q`: the plane with normal `G·p`.
pub fn tangent_plane(field: PrimeField, q: &Quadric, p: &ProjPoint) -> Result<Plane> {
    if !q.contains(field, p) {
        return Err(Error::NotOnQuadric);
    }
    let g = q.gram(field);
    let normal: Vec4 = std::array::from_fn(|i| dot(field, &g[i], &p.coords));
    Plane::new(field, normal).map_err(|_| Error::SingularPoint)
}

// ---------------------------------------------------------------------------
// The standard quadric Q0 = {x0 x3 = x1 x2} ≅ P¹ × P¹.

/// `x0·x3 − x1·x2`.
#[inline]
pub fn standard_form(field: PrimeField, x: &Vec4) -> u64 {
    field.sub(field.mul(x[0], x[3]), field.mul(x[1], x[2]))
}

/// Polarization of [`standard_form`]: `f(sx + ty) = s²f(x) + st·polar(x, y) + t²f(y)`.
#[inline]
pub fn standard_polar(field: PrimeField, x: &Vec4, y: &Vec4) -> u64 {
    let plus = field.add(field.mul(x[0], y[3]), field.mul(x[3], y[0]));
    let minus = field.add(field.mul(x[1], y[2]), field.mul(x[2], y[1]));
    field.sub(plus, minus)
}

pub fn on_standard_quadric(field: PrimeField, p: &ProjPoint) -> bool {
    standard_form(field, &p.coords) == 0
}

/// One of the two rulings of Q0.
///
/// `First` lines are `{(s:t) fixed} × P¹`, the divisor class (1,0);
/// `Second` lines are `P¹ × {(u:v) fixed}`, class (0,1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Ruling {
    #[serde(rename = "1")]
    First,
    #[serde(rename = "2")]
    Second,
}

/// A point of P¹ × P¹, both factors normalized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadricPoint {
    pub st: [u64; 2],
    pub uv: [u64; 2],
}

impl QuadricPoint {
    pub fn new(field: PrimeField, st: [u64; 2], uv: [u64; 2]) -> Result<Self> {
        Ok(QuadricPoint {
            st: normalize(field, st)?,
            uv: normalize(field, uv)?,
        })
    }

    /// Image under `((s,t),(u,v)) ↦ (su, sv, tu, tv)`.
    pub fn to_p3(&self, field: PrimeField) -> ProjPoint {
        let [s, t] = self.st;
        let [u, v] = self.uv;
        ProjPoint::new(
            field,
            [field.mul(s, u), field.mul(s, v), field.mul(t, u), field.mul(t, v)],
        )
        .expect("Segre image of a point is nonzero")
    }

    /// Inverse Segre map; fails off Q0.
    pub fn from_p3(field: PrimeField, p: &ProjPoint) -> Result<Self> {
        if !on_standard_quadric(field, p) {
            return Err(Error::NotOnQuadric);
        }
        let x = p.coords;
        let st = if x[0] != 0 || x[2] != 0 {
            [x[0], x[2]]
        } else {
            [x[1], x[3]]
        };
        let uv = if x[0] != 0 || x[1] != 0 {
            [x[0], x[1]]
        } else {
            [x[2], x[3]]
        };
        QuadricPoint::new(field, st, uv)
    }

    pub fn on_ruling_line(&self, ruling: Ruling, param: [u64; 2]) -> bool {
        match ruling {
            Ruling::First => self.st == param,
            Ruling::Second => self.uv == param,
        }
    }
}

/// The line of the given ruling with parameter `param` (normalized here).
pub fn ruling_line(field: PrimeField, ruling: Ruling, param: [u64; 2]) -> Result<Line> {
    let [x, y] = normalize(field, param)?;
    match ruling {
        Ruling::First => Line::through(field, [x, 0, y, 0], [0, x, 0, y]),
        Ruling::Second => Line::through(field, [x, y, 0, 0], [0, 0, x, y]),
    }
}

/// Ruling and normalized parameter of a line contained in Q0.
pub fn standard_ruling_of(field: PrimeField, line: &Line) -> Option<(Ruling, [u64; 2])> {
    if !Quadric::standard(field).contains_line(field, line) {
        return None;
    }
    let pa = QuadricPoint::from_p3(field, &line.a).ok()?;
    let pb = QuadricPoint::from_p3(field, &line.b).ok()?;
    if pa.st == pb.st {
        Some((Ruling::First, pa.st))
    } else {
        Some((Ruling::Second, pa.uv))
    }
}

/// Intersection of a line not contained in Q0 with Q0.
///
/// Returns the two intersection points; fails when the line is tangent or
/// the points are not defined over GF(p).
pub fn meet_standard_quadric(field: PrimeField, line: &Line) -> Result<[ProjPoint; 2]> {
    let [a, b] = line.span();
    let qa = standard_form(field, &a);
    let qab = standard_polar(field, &a, &b);
    let qb = standard_form(field, &b);
    if qa == 0 && qab == 0 && qb == 0 {
        return Err(Error::UnsupportedIncidence("line lies on the quadric".into()));
    }
    // qa s² + qab s t + qb t² = 0
    let disc = field.sub(field.mul(qab, qab), field.mul(4, field.mul(qa, qb)));
    if disc == 0 {
        return Err(Error::UnsupportedIncidence("line is tangent to the quadric".into()));
    }
    let root = field
        .sqrt(disc)
        .ok_or_else(|| Error::UnsupportedIncidence("intersection points are not rational".into()))?;
    let params: [(u64, u64); 2] = if qa != 0 {
        let inv = field.inv(field.mul(2, qa));
        let r1 = field.mul(field.add(field.neg(qab), root), inv);
        let r2 = field.mul(field.sub(field.neg(qab), root), inv);
        [(r1, 1), (r2, 1)]
    } else {
        // t (qab s + qb t) = 0 with qab ≠ 0
        [(1, 0), (field.neg(qb), qab)]
    };
    let pts = params.map(|(s, t)| ProjPoint::new(field, line.point_at(field, s, t)));
    let [p0, p1] = pts;
    Ok([p0?, p1?])
}

/// Second intersection point with Q0 of a line through a point `node` of Q0.
pub fn second_meet_standard_quadric(field: PrimeField, node: &ProjPoint, other: &ProjPoint) -> Result<ProjPoint> {
    let n = node.coords;
    let o = other.coords;
    debug_assert_eq!(standard_form(field, &n), 0);
    let polar = standard_polar(field, &n, &o);
    let qo = standard_form(field, &o);
    if polar == 0 {
        let why = if qo == 0 {
            "line lies on the quadric"
        } else {
            "line is tangent to the quadric"
        };
        return Err(Error::UnsupportedIncidence(why.into()));
    }
    // f(s n + t o) = t (s polar + t qo); second root (s, t) = (qo, -polar).
    let x: Vec4 = std::array::from_fn(|i| field.sub(field.mul(qo, n[i]), field.mul(polar, o[i])));
    ProjPoint::new(field, x)
}

// ---------------------------------------------------------------------------
// Seeded randomness.

/// splitmix64 finalizer.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of the `index`-th child task of `seed`.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    mix(mix(seed) ^ index.wrapping_mul(0xD6E8_FEB8_6659_FD93))
}

/// Deterministic random source; identical seeds replay identical draws.
#[derive(Debug, Clone)]
pub struct SeededRng {
    seed: u64,
    inner: ChaCha8Rng,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        SeededRng {
            seed,
            inner: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Independent stream for a sub-task.
    pub fn child(&self, index: u64) -> SeededRng {
        SeededRng::new(derive_seed(self.seed, index))
    }

    pub fn element(&mut self, field: PrimeField) -> u64 {
        self.inner.gen_range(0..field.modulus())
    }

    pub fn vector(&mut self, field: PrimeField) -> Vec4 {
        std::array::from_fn(|_| self.element(field))
    }

    /// Uniform point of P³.
    pub fn point(&mut self, field: PrimeField) -> ProjPoint {
        loop {
            if let Ok(p) = ProjPoint::new(field, self.vector(field)) {
                return p;
            }
        }
    }

    /// Uniform point of P¹.
    pub fn p1_point(&mut self, field: PrimeField) -> [u64; 2] {
        loop {
            if let Ok(x) = normalize(field, [self.element(field), self.element(field)]) {
                return x;
            }
        }
    }

    /// Uniform point of Q0 in Segre coordinates.
    pub fn quadric_point(&mut self, field: PrimeField) -> QuadricPoint {
        let st = self.p1_point(field);
        let uv = self.p1_point(field);
        QuadricPoint { st, uv }
    }
}

/// A uniformly random line skew to every line in `existing`.
pub fn sample_line(field: PrimeField, rng: &mut SeededRng, existing: &[Line]) -> Result<Line> {
    for _ in 0..MAX_RETRIES {
        let (a, b) = (rng.point(field), rng.point(field));
        let Ok(line) = Line::new(field, a, b) else { continue };
        if existing.iter().all(|l| l.is_skew(field, &line)) {
            return Ok(line);
        }
    }
    Err(Error::RetriesExhausted(MAX_RETRIES))
}

/// A random line of the given ruling of the standard quadric.
pub fn sample_line_on_quadric(field: PrimeField, q: &Quadric, ruling: Ruling, rng: &mut SeededRng) -> Result<Line> {
    if !q.is_standard(field) {
        return Err(Error::InvalidInput(
            "ruling lines are only available on the standard quadric".into(),
        ));
    }
    ruling_line(field, ruling, rng.p1_point(field))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f() -> PrimeField {
        PrimeField::default_field()
    }

    #[test]
    fn ruling_lines_of_the_origin() {
        let f = f();
        let l1 = ruling_line(f, Ruling::First, [1, 0]).unwrap();
        assert_eq!(l1.span(), [[1, 0, 0, 0], [0, 1, 0, 0]]);
        let l2 = ruling_line(f, Ruling::Second, [1, 0]).unwrap();
        assert_eq!(l2.span(), [[1, 0, 0, 0], [0, 0, 1, 0]]);
    }

    #[test]
    fn quadric_through_three_standard_lines() {
        let f = f();
        let l1 = Line::through(f, [1, 0, 0, 0], [0, 1, 0, 0]).unwrap();
        let l2 = Line::through(f, [0, 0, 1, 0], [0, 0, 0, 1]).unwrap();
        let l3 = Line::through(f, [1, 0, 1, 0], [0, 1, 0, 1]).unwrap();
        let q = quadric_through_lines(f, &l1, &l2, &l3).unwrap();
        assert_eq!(q, Quadric::standard(f));
        assert!(q.is_smooth(f));
    }

    #[test]
    fn repeated_line_is_not_unique() {
        let f = f();
        let mut rng = SeededRng::new(3);
        let l1 = sample_line(f, &mut rng, &[]).unwrap();
        let l3 = sample_line(f, &mut rng, &[l1]).unwrap();
        assert!(matches!(
            quadric_through_lines(f, &l1, &l1, &l3),
            Err(Error::NotUnique(_))
        ));
    }

    #[test]
    fn tangent_planes_of_standard_quadric() {
        let f = f();
        let q = Quadric::standard(f);
        let t0 = tangent_plane(f, &q, &ProjPoint::basis(0)).unwrap();
        assert_eq!(t0.normal(), [0, 0, 0, 1]);
        let t3 = tangent_plane(f, &q, &ProjPoint::basis(3)).unwrap();
        assert_eq!(t3.normal(), [1, 0, 0, 0]);
        let off = ProjPoint::from_i64(f, [1, 0, 0, 1]).unwrap();
        assert_eq!(tangent_plane(f, &q, &off), Err(Error::NotOnQuadric));
    }

    #[test]
    fn tangent_plane_contains_both_rulings() {
        let f = f();
        let q = Quadric::standard(f);
        let mut rng = SeededRng::new(11);
        for _ in 0..20 {
            let qp = rng.quadric_point(f);
            let p = qp.to_p3(f);
            let plane = tangent_plane(f, &q, &p).unwrap();
            for (ruling, param) in [(Ruling::First, qp.st), (Ruling::Second, qp.uv)] {
                let l = ruling_line(f, ruling, param).unwrap();
                assert!(plane.contains(f, &l.a()) && plane.contains(f, &l.b()));
            }
        }
    }

    #[test]
    fn segre_round_trip() {
        let f = f();
        let mut rng = SeededRng::new(5);
        for _ in 0..50 {
            let qp = rng.quadric_point(f);
            let p = qp.to_p3(f);
            assert!(on_standard_quadric(f, &p));
            assert_eq!(QuadricPoint::from_p3(f, &p).unwrap(), qp);
        }
    }

    #[test]
    fn ruling_recognition() {
        let f = f();
        let mut rng = SeededRng::new(8);
        for ruling in [Ruling::First, Ruling::Second] {
            let param = rng.p1_point(f);
            let l = ruling_line(f, ruling, param).unwrap();
            assert_eq!(standard_ruling_of(f, &l), Some((ruling, param)));
        }
        let l = sample_line(f, &mut rng, &[]).unwrap();
        assert_eq!(standard_ruling_of(f, &l), None);
    }

    #[test]
    fn join_of_quadric_points_meets_quadric_there() {
        let f = f();
        let mut rng = SeededRng::new(21);
        for _ in 0..20 {
            let p = rng.quadric_point(f).to_p3(f);
            let q = rng.quadric_point(f).to_p3(f);
            let l = Line::new(f, p, q).unwrap();
            let mut got = meet_standard_quadric(f, &l).unwrap().to_vec();
            let mut want = vec![p, q];
            got.sort_by_key(|x| x.coords());
            want.sort_by_key(|x| x.coords());
            assert_eq!(got, want);
        }
    }

    #[test]
    fn second_meet_agrees_with_full_intersection() {
        let f = f();
        let mut rng = SeededRng::new(33);
        for _ in 0..20 {
            let node = rng.quadric_point(f).to_p3(f);
            let other = rng.point(f);
            let second = second_meet_standard_quadric(f, &node, &other).unwrap();
            let l = Line::new(f, node, other).unwrap();
            let both = meet_standard_quadric(f, &l).unwrap();
            assert!(both.contains(&node) && both.contains(&second));
        }
    }

    #[test]
    fn seeded_draws_replay() {
        let f = f();
        let mut r1 = SeededRng::new(42);
        let mut r2 = SeededRng::new(42);
        let a = sample_line(f, &mut r1, &[]).unwrap();
        let b = sample_line(f, &mut r2, &[]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.a().coords(), [1, 27002, 30694, 2299]);
        assert_eq!(a.b().coords(), [1, 30503, 30909, 19714]);
        assert_ne!(derive_seed(1, 0), derive_seed(1, 1));
    }
}
