//! Residual and trace with respect to the standard quadric Q0.
//!
//! For a configuration `X` and `d ≥ 2` the residual sequence
//!
//! ```text
//! 0 → I_Res(d−2) → I_X(d) → I_{X∩Q0, Q0}(d, d) → 0
//! ```
//!
//! gives `h⁰(Res, d−2) ≤ h⁰(X, d) ≤ h⁰(Res, d−2) + h⁰(trace, (d, d))`, and,
//! when the trace is the full scheme-theoretic intersection, also
//! `h⁰(X, d) ≥ h⁰(Res) + h⁰(trace) − h¹(Res)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::combinatorics::{forms_dim, split_bc, split_uv};
use crate::engine::{
    general_hilbert, hilbert_report, sample_configuration, FamilySpec, HilbertReport, Placement, Template,
    TrialCertificate, TrialPlan, Verdict,
};
use crate::error::{Error, Result};
use crate::forms::BiformSpace;
use crate::geometry::{
    meet_standard_quadric, on_standard_quadric, second_meet_standard_quadric, standard_polar, standard_ruling_of,
    tangent_plane, Line, ProjPoint, Quadric, QuadricPoint, Ruling, SeededRng,
};
use crate::linalg::PrimeField;
use crate::schemes::{trace_condition_matrix, Component, ComponentKind, Configuration, TraceComponent};

/// `Res_Q0(X)` in P³ and `X ∩ Q0` on P¹ × P¹.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HoraceDecomposition {
    pub residual: Configuration,
    pub trace: Vec<TraceComponent>,
    /// False when some trace piece is a proper subscheme of the true
    /// intersection; upper bounds stay valid, the refined lower bound does
    /// not.
    pub trace_exact: bool,
}

fn unsupported(what: &str) -> Error {
    Error::UnsupportedIncidence(what.into())
}

fn q_point(field: PrimeField, p: &ProjPoint) -> Result<TraceComponent> {
    TraceComponent::point_of(field, p)
}

/// Trace points of a line through a point of Q0 other than the node.
fn far_point(field: PrimeField, node: &ProjPoint, line: &Line) -> Result<ProjPoint> {
    let other = if line.a() == *node { line.b() } else { line.a() };
    second_meet_standard_quadric(field, node, &other)
}

fn conic_meets(field: PrimeField, node: &ProjPoint, first: &Line, second: &Line) -> Result<Vec<TraceComponent>> {
    let mut out = Vec::new();
    if on_standard_quadric(field, node) {
        for l in [first, second] {
            out.push(q_point(field, &far_point(field, node, l)?)?);
        }
    } else {
        for l in [first, second] {
            for p in meet_standard_quadric(field, l)? {
                out.push(q_point(field, &p)?);
            }
        }
    }
    Ok(out)
}

/// Splits every component of `cfg` into its residual and trace parts.
pub fn decompose(cfg: &Configuration) -> Result<HoraceDecomposition> {
    let field = cfg.field();
    match cfg.reference_quadric() {
        Some(q) if q.is_standard(field) => {}
        _ => return Err(Error::InvalidInput("configuration has no reference quadric Q0".into())),
    }
    let mut residual = Configuration::empty(field).with_reference_quadric();
    let mut trace = Vec::new();
    let mut exact = true;
    for c in cfg.components() {
        match *c {
            Component::Point { point } => {
                if on_standard_quadric(field, &point) {
                    trace.push(q_point(field, &point)?);
                } else {
                    residual.push(*c)?;
                }
            }
            Component::SpaceDoublePoint { point } => {
                if on_standard_quadric(field, &point) {
                    residual.push(Component::Point { point })?;
                    trace.push(TraceComponent::double_point_of(field, &point)?);
                } else {
                    residual.push(*c)?;
                }
            }
            Component::PlanarDoublePoint { point, plane } => {
                if !on_standard_quadric(field, &point) {
                    residual.push(*c)?;
                } else if tangent_plane(field, &Quadric::standard(field), &point)? == plane {
                    trace.push(TraceComponent::double_point_of(field, &point)?);
                } else {
                    return Err(unsupported("planar double point on Q0 outside its tangent plane"));
                }
            }
            Component::Arrow { point, direction } => {
                if !on_standard_quadric(field, &point) {
                    residual.push(*c)?;
                } else if standard_polar(field, &point.coords(), &direction.coords()) != 0 {
                    residual.push(Component::Point { point })?;
                    trace.push(q_point(field, &point)?);
                } else {
                    return Err(unsupported("arrow tangent to Q0"));
                }
            }
            Component::Line { line } => match standard_ruling_of(field, &line) {
                Some((ruling, param)) => trace.push(TraceComponent::RulingLine { ruling, param }),
                None => {
                    residual.push(*c)?;
                    for p in meet_standard_quadric(field, &line)? {
                        trace.push(q_point(field, &p)?);
                    }
                }
            },
            Component::DoubleLine { line } => match standard_ruling_of(field, &line) {
                Some((ruling, param)) => {
                    residual.push(Component::Line { line })?;
                    trace.push(TraceComponent::DoubleRulingLine { ruling, param });
                }
                None => {
                    residual.push(*c)?;
                    for p in meet_standard_quadric(field, &line)? {
                        trace.push(TraceComponent::double_point_of(field, &p)?);
                    }
                }
            },
            Component::NodalConic { first, second, node } => {
                let meets = conic_meets(field, &node, &first, &second)?;
                residual.push(*c)?;
                if on_standard_quadric(field, &node) {
                    // The true trace at the node has length 2; a point is kept.
                    trace.push(q_point(field, &node)?);
                    exact = false;
                }
                trace.extend(meets);
            }
            Component::Sundial { first, second, node } => {
                let meets = conic_meets(field, &node, &first, &second)?;
                let conic = Component::NodalConic { first, second, node };
                if on_standard_quadric(field, &node) {
                    residual.push(conic)?;
                    trace.push(TraceComponent::double_point_of(field, &node)?);
                } else {
                    residual.push(*c)?;
                }
                trace.extend(meets);
            }
        }
    }
    Ok(HoraceDecomposition {
        residual,
        trace,
        trace_exact: exact,
    })
}

/// `h⁰(Q0, I_T(α, β))`.
pub fn trace_h0(field: PrimeField, trace: &[TraceComponent], alpha: usize, beta: usize) -> Result<usize> {
    let m = trace_condition_matrix(field, trace, alpha, beta)?;
    Ok(m.cols() - m.rank())
}

/// [`trace_h0`] computed the other way: every ruling line in the trace is
/// divided out, twisting the bidegree down, and the zero-dimensional part
/// is replaced by its residual with respect to the removed lines.
pub fn trace_h0_stripped(field: PrimeField, trace: &[TraceComponent], alpha: usize, beta: usize) -> Result<usize> {
    let mut lines: Vec<(Ruling, [u64; 2], usize)> = Vec::new();
    for t in trace {
        match *t {
            TraceComponent::RulingLine { ruling, param } => lines.push((ruling, param, 1)),
            TraceComponent::DoubleRulingLine { ruling, param } => lines.push((ruling, param, 2)),
            _ => {}
        }
    }
    let k = |r: Ruling| lines.iter().filter(|l| l.0 == r).map(|l| l.2).sum::<usize>();
    let (k1, k2) = (k(Ruling::First), k(Ruling::Second));
    if k1 > alpha || k2 > beta {
        return Ok(0);
    }
    let through = |p: &QuadricPoint| -> usize {
        lines
            .iter()
            .filter(|(r, param, _)| p.on_ruling_line(*r, *param))
            .map(|l| l.2)
            .sum()
    };
    let mut rest = Vec::new();
    for t in trace {
        match *t {
            TraceComponent::QPoint { point } if through(&point) == 0 => rest.push(*t),
            TraceComponent::QDoublePoint { point } => match through(&point) {
                0 => rest.push(*t),
                1 => rest.push(TraceComponent::QPoint { point }),
                _ => {}
            },
            _ => {}
        }
    }
    let space = BiformSpace::new(alpha - k1, beta - k2);
    if rest.is_empty() {
        return Ok(space.dim());
    }
    trace_h0(field, &rest, alpha - k1, beta - k2)
}

/// The two sides of the residual sequence in degree `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HoraceBounds {
    pub d: usize,
    /// `h⁰(I_Res(d−2))`.
    pub lower: usize,
    /// `lower + trace_h0`.
    pub upper: usize,
    pub trace_h0: usize,
    pub residual_h0: usize,
    pub residual_h1: usize,
    /// Conditions emitted by the trace on bidegree-(d, d) forms.
    pub trace_rows: usize,
    /// `residual_h0 + trace_h0 − residual_h1`, when the trace is exact.
    pub refined_lower: Option<usize>,
}

impl HoraceBounds {
    /// The strongest available lower bound.
    pub fn best_lower(&self) -> usize {
        self.refined_lower.map_or(self.lower, |r| r.max(self.lower))
    }

    pub fn is_exact(&self) -> bool {
        self.best_lower() == self.upper
    }
}

/// Bounds on `h⁰(I_X(d))` from [`decompose`].
pub fn horace_bounds(cfg: &Configuration, d: usize) -> Result<HoraceBounds> {
    if d < 2 {
        return Err(Error::InvalidInput(format!("residual bounds need d >= 2, got {d}")));
    }
    let field = cfg.field();
    let dec = decompose(cfg)?;
    let res = hilbert_report(&dec.residual, d - 2)?;
    let tm = trace_condition_matrix(field, &dec.trace, d, d)?;
    let t_h0 = tm.cols() - tm.rank();
    let refined = dec.trace_exact.then(|| (res.h0 + t_h0).saturating_sub(res.h1));
    Ok(HoraceBounds {
        d,
        lower: res.h0,
        upper: res.h0 + t_h0,
        trace_h0: t_h0,
        residual_h0: res.h0,
        residual_h1: res.h1,
        trace_rows: tm.rows(),
        refined_lower: refined,
    })
}

/// A statement about a prescribed family in one degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Assertion {
    /// `W(a, u−2v, v)` with `e` lines on Q0 has `h⁰ = h¹ = 0` in degree `d`,
    /// where `(u, v)` is the `(u, v)` split of `(a, d)`.
    C { a: usize, d: usize, e: usize },
    /// `Z(a, b_{a,d})` has `h¹ = 0` in degree `d`.
    E { a: usize, d: usize },
    /// `Z(a, b_{a,d−1} + 1)` has `h⁰ = 0` in degree `d − 1`.
    F { a: usize, d: usize },
}

impl fmt::Display for Assertion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Assertion::C { a, d, e } => write!(f, "C_{e}({a},{d})"),
            Assertion::E { a, d } => write!(f, "E({a},{d})"),
            Assertion::F { a, d } => write!(f, "F({a},{d})"),
        }
    }
}

/// Family, degree and verdict behind an assertion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssertionOutcome {
    pub assertion: Assertion,
    pub family: FamilySpec,
    pub degree: usize,
    pub holds: bool,
    pub certificate: TrialCertificate,
}

fn side(cond: bool, what: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::SideConditionFailed(what()))
    }
}

/// The family and degree an assertion speaks about, after its numeric side
/// conditions.
pub fn assertion_family(kind: Assertion) -> Result<(FamilySpec, usize)> {
    match kind {
        Assertion::C { a, d, e } => {
            let s = split_uv(a as u64, d as u64).map_err(|err| Error::SideConditionFailed(err.to_string()))?;
            let (u, v) = (s.u as usize, s.v as usize);
            side(u >= 2 * v + e, || format!("{kind}: u = {u} < 2v + e = {}", 2 * v + e))?;
            Ok((FamilySpec::W { a, u: u - 2 * v, v, e }, d))
        }
        Assertion::E { a, d } => {
            let s = split_bc(a as u64, d as u64).map_err(|err| Error::SideConditionFailed(err.to_string()))?;
            Ok((FamilySpec::Z { a, b: s.b as usize }, d))
        }
        Assertion::F { a, d } => {
            side(d >= 3, || format!("{kind}: needs d >= 3"))?;
            let room = forms_dim(d as u64 - 1)?;
            let used = (a * (3 * d - 2)) as u64;
            side(used <= room, || format!("{kind}: a(3d-2) = {used} > C(d+2,3) = {room}"))?;
            let s = split_bc(a as u64, d as u64 - 1)?;
            Ok((FamilySpec::Z { a, b: s.b as usize + 1 }, d - 1))
        }
    }
}

/// Certifies an assertion by sampling its family; `holds` is true only on
/// a certifying trial.
pub fn check_assertion(kind: Assertion, plan: &TrialPlan) -> Result<AssertionOutcome> {
    let (family, degree) = assertion_family(kind)?;
    let cert = general_hilbert(&family, degree, plan)?;
    let target = match kind {
        Assertion::C { .. } => cert.expected_h0 == 0 && cert.expected_h1 == 0,
        Assertion::E { .. } => cert.expected_h1 == 0,
        Assertion::F { .. } => cert.expected_h0 == 0,
    };
    Ok(AssertionOutcome {
        assertion: kind,
        family,
        degree,
        holds: target && cert.verdict == Verdict::MaximalRankCertified,
        certificate: cert,
    })
}

/// The defective and borderline cases with a closed-form certificate.
#[allow(non_camel_case_types)]
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ExceptionalCase {
    X22_d4,
    X30_d4,
    X31_d5,
    X40_d6,
    X41_d6,
}

impl ExceptionalCase {
    pub const ALL: [ExceptionalCase; 5] = [
        ExceptionalCase::X22_d4,
        ExceptionalCase::X30_d4,
        ExceptionalCase::X31_d5,
        ExceptionalCase::X40_d6,
        ExceptionalCase::X41_d6,
    ];

    /// `(a, b, d)`.
    pub fn params(self) -> (usize, usize, usize) {
        match self {
            ExceptionalCase::X22_d4 => (2, 2, 4),
            ExceptionalCase::X30_d4 => (3, 0, 4),
            ExceptionalCase::X31_d5 => (3, 1, 5),
            ExceptionalCase::X40_d6 => (4, 0, 6),
            ExceptionalCase::X41_d6 => (4, 1, 6),
        }
    }

    /// `(h⁰, h¹)` of the general member, where known exactly.
    pub fn known_values(self) -> Option<(usize, usize)> {
        match self {
            ExceptionalCase::X22_d4 => Some((1, 2)),
            ExceptionalCase::X30_d4 => Some((1, 5)),
            ExceptionalCase::X31_d5 => Some((4, 2)),
            ExceptionalCase::X40_d6 => Some((10, 2)),
            ExceptionalCase::X41_d6 => None,
        }
    }

    /// Three of the components on Q0, the rest transversal to it. Any three
    /// disjoint lines lie on a smooth quadric, so this is still a general
    /// member of `Z(a, b)`.
    pub fn construction(self) -> Vec<Template> {
        use ComponentKind::{DoubleLine, Line};
        use Placement::{OffQuadric, OnQuadric};
        let t = Template::new;
        match self {
            ExceptionalCase::X22_d4 => vec![
                t(DoubleLine, OnQuadric),
                t(DoubleLine, OnQuadric),
                t(Line, OnQuadric),
                t(Line, OffQuadric),
            ],
            ExceptionalCase::X30_d4 => vec![t(DoubleLine, OnQuadric); 3],
            ExceptionalCase::X31_d5 => vec![
                t(DoubleLine, OnQuadric),
                t(DoubleLine, OnQuadric),
                t(DoubleLine, OnQuadric),
                t(Line, OffQuadric),
            ],
            ExceptionalCase::X40_d6 => vec![
                t(DoubleLine, OnQuadric),
                t(DoubleLine, OnQuadric),
                t(DoubleLine, OnQuadric),
                t(DoubleLine, OffQuadric),
            ],
            ExceptionalCase::X41_d6 => vec![
                t(DoubleLine, OnQuadric),
                t(DoubleLine, OnQuadric),
                t(DoubleLine, OnQuadric),
                t(DoubleLine, OffQuadric),
                t(Line, OffQuadric),
            ],
        }
    }
}

impl fmt::Display for ExceptionalCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FromStr for ExceptionalCase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ExceptionalCase::ALL
            .into_iter()
            .find(|c| c.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidInput(format!("unknown case {s:?}")))
    }
}

/// Matching lower and upper bounds for an exceptional case.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExceptionalCertificate {
    pub case: ExceptionalCase,
    pub d: usize,
    /// Residual bounds on the adapted configuration.
    pub bounds: HoraceBounds,
    /// The adapted configuration itself.
    pub adapted: HilbertReport,
    /// Free sampling of `Z(a, b)`.
    pub sampled: TrialCertificate,
    pub h0: usize,
    pub h1: usize,
}

/// Builds the adapted configuration, bounds `h⁰` from below by the residual
/// sequence and from above by free sampling, and checks that the two meet
/// at the known values. For `X41_d6` only positivity of `h⁰` and `h¹` is
/// checked.
pub fn exceptional_certificate(case: ExceptionalCase, plan: &TrialPlan) -> Result<ExceptionalCertificate> {
    let (a, b, d) = case.params();
    let field = *plan
        .primes
        .first()
        .ok_or_else(|| Error::InvalidInput("need at least one prime".into()))?;
    let spec = FamilySpec::Custom {
        components: case.construction(),
    };
    let cfg = sample_configuration(field, &spec, &mut SeededRng::new(plan.trial_seed(field, 0)))?;
    let bounds = horace_bounds(&cfg, d)?;
    let adapted = hilbert_report(&cfg, d)?;
    let sampled = general_hilbert(&FamilySpec::Z { a, b }, d, plan)?;
    let mismatch = |what: String| Error::CertificateMismatch(format!("{case}: {what}"));
    let lower = bounds.best_lower();
    if !(lower <= adapted.h0 && adapted.h0 <= bounds.upper) {
        return Err(mismatch(format!(
            "adapted h0 = {} outside residual bounds [{lower}, {}]",
            adapted.h0, bounds.upper
        )));
    }
    let upper = sampled.min_h0;
    let shift = sampled.n as i64 - sampled.sheaf_dim as i64;
    match case.known_values() {
        Some((h0, h1)) => {
            if lower != upper || upper != h0 {
                return Err(mismatch(format!(
                    "lower bound {lower} and sampled h0 {upper} do not meet at {h0}"
                )));
            }
            if h0 as i64 - shift != h1 as i64 {
                return Err(mismatch(format!("h1 = {} instead of {h1}", h0 as i64 - shift)));
            }
            Ok(ExceptionalCertificate {
                case,
                d,
                bounds,
                adapted,
                sampled,
                h0,
                h1,
            })
        }
        None => {
            let h1_lower = lower as i64 - shift;
            if lower == 0 || h1_lower <= 0 {
                return Err(mismatch(format!(
                    "lower bounds h0 >= {lower}, h1 >= {h1_lower} do not force both positive"
                )));
            }
            let h1 = (upper as i64 - shift) as usize;
            Ok(ExceptionalCertificate {
                case,
                d,
                bounds,
                adapted,
                sampled,
                h0: upper,
                h1,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ruling_line;

    fn f() -> PrimeField {
        PrimeField::default_field()
    }

    fn sample(templates: Vec<Template>, seed: u64) -> Configuration {
        let spec = FamilySpec::Custom { components: templates };
        sample_configuration(f(), &spec, &mut SeededRng::new(seed)).unwrap()
    }

    #[test]
    fn double_ruling_line_leaves_its_support() {
        let f = f();
        let line = ruling_line(f, Ruling::First, [2, 7]).unwrap();
        let cfg = Configuration::new(f, vec![Component::DoubleLine { line }])
            .unwrap()
            .with_reference_quadric();
        let dec = decompose(&cfg).unwrap();
        assert_eq!(dec.residual.components(), &[Component::Line { line }]);
        assert_eq!(
            dec.trace,
            vec![TraceComponent::DoubleRulingLine {
                ruling: Ruling::First,
                param: [1, 16005]
            }]
        );
    }

    #[test]
    fn double_point_on_quadric_leaves_a_point() {
        let f = f();
        let point = QuadricPoint::new(f, [1, 3], [1, 5]).unwrap().to_p3(f);
        let cfg = Configuration::new(f, vec![Component::SpaceDoublePoint { point }])
            .unwrap()
            .with_reference_quadric();
        let dec = decompose(&cfg).unwrap();
        assert_eq!(dec.residual.components(), &[Component::Point { point }]);
        assert!(matches!(dec.trace[..], [TraceComponent::QDoublePoint { .. }]));
    }

    #[test]
    fn four_double_lines_three_on_quadric() {
        let cfg = sample(ExceptionalCase::X40_d6.construction(), 1);
        let dec = decompose(&cfg).unwrap();
        let kinds: Vec<_> = dec.residual.components().iter().map(|c| c.kind()).collect();
        use ComponentKind::*;
        assert_eq!(kinds, vec![Line, Line, Line, DoubleLine]);
        let b = horace_bounds(&cfg, 6).unwrap();
        assert_eq!((b.lower, b.upper, b.trace_h0), (7, 10, 3));
        assert_eq!(b.trace_rows, 48);
        assert_eq!(b.best_lower(), 10);
    }

    #[test]
    fn tangent_line_is_unsupported() {
        let f = f();
        // Tangent plane of Q0 at e0 is x3 = 0; the line e0 + t(1,1,1,0) touches Q0 there.
        let line = Line::through(f, [1, 0, 0, 0], [1, 1, 1, 0]).unwrap();
        let cfg = Configuration::new(f, vec![Component::Line { line }])
            .unwrap()
            .with_reference_quadric();
        assert!(matches!(decompose(&cfg), Err(Error::UnsupportedIncidence(_))));
    }

    #[test]
    fn decompose_needs_the_quadric() {
        let f = f();
        let line = Line::through(f, [1, 0, 0, 0], [0, 1, 0, 0]).unwrap();
        let cfg = Configuration::new(f, vec![Component::Line { line }]).unwrap();
        assert!(matches!(decompose(&cfg), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn stripping_matches_direct_trace() {
        use ComponentKind::*;
        let cfg = sample(
            vec![
                Template::new(DoubleLine, Placement::OnQuadric),
                Template::new(Line, Placement::OnQuadric),
                Template::new(DoubleLine, Placement::OffQuadric),
                Template::new(SpaceDoublePoint, Placement::OnQuadric),
                Template::new(Point, Placement::OnQuadric),
                Template::new(Sundial, Placement::OnQuadric),
            ],
            4,
        );
        let dec = decompose(&cfg).unwrap();
        for (a, b) in [(3, 3), (4, 2), (5, 5), (6, 4), (2, 7)] {
            assert_eq!(
                trace_h0(f(), &dec.trace, a, b).unwrap(),
                trace_h0_stripped(f(), &dec.trace, a, b).unwrap(),
                "bidegree ({a}, {b})"
            );
        }
    }

    #[test]
    fn assertion_side_conditions() {
        assert!(matches!(
            assertion_family(Assertion::F { a: 2, d: 2 }),
            Err(Error::SideConditionFailed(_))
        ));
        assert!(matches!(
            assertion_family(Assertion::C { a: 0, d: 5, e: 10 }),
            Err(Error::SideConditionFailed(_))
        ));
        assert_eq!(
            assertion_family(Assertion::F { a: 2, d: 5 }).unwrap(),
            (FamilySpec::Z { a: 2, b: 2 }, 4)
        );
    }

    #[test]
    fn assertions() {
        let plan = TrialPlan::default();
        assert!(check_assertion(Assertion::C { a: 0, d: 5, e: 0 }, &plan).unwrap().holds);
        assert!(check_assertion(Assertion::E { a: 2, d: 4 }, &plan).unwrap().holds);
        assert!(!check_assertion(Assertion::F { a: 2, d: 5 }, &plan).unwrap().holds);
    }

    #[test]
    fn case_names_round_trip() {
        for c in ExceptionalCase::ALL {
            assert_eq!(c.to_string().parse::<ExceptionalCase>().unwrap(), c);
        }
        assert!("X99_d1".parse::<ExceptionalCase>().is_err());
    }

    #[test]
    fn exceptional_cases_are_certified() {
        let plan = TrialPlan::default();
        for case in ExceptionalCase::ALL {
            let cert = exceptional_certificate(case, &plan).unwrap();
            match case.known_values() {
                Some(v) => assert_eq!((cert.h0, cert.h1), v, "{case}"),
                None => assert!(cert.h0 > 0 && cert.h1 > 0),
            }
        }
    }
}
