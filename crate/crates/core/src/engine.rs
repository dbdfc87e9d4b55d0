//! Hilbert functions of whole configurations, seeded trials over families
//! of general configurations, and maximal-rank verdicts.
//!
//! A single sample can only *over*estimate the generic `h⁰` (specializing
//! never decreases it), so one sample that hits the expected values is a
//! proof for the general member. Persistent excess across primes and seeds
//! is reported as an observed defect, never as a proof.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{expected_from_dims, forms_dim, load};
use crate::error::{Error, Result};
use crate::geometry::{
    derive_seed, on_standard_quadric, ruling_line, standard_polar, tangent_plane, Line, Plane, ProjPoint, Quadric,
    Ruling, SeededRng, MAX_RETRIES,
};
use crate::linalg::{Matrix, PrimeField, DEFAULT_PRIME, SECONDARY_PRIME};
use crate::schemes::{Component, ComponentKind, Configuration};

/// Default base seed of every trial plan.
pub const DEFAULT_SEED: u64 = 0xB10C_5EED;

/// Exact cohomology of one configuration in one degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertReport {
    pub d: usize,
    pub n: usize,
    pub sheaf_dim: usize,
    pub rows_emitted: usize,
    pub rank: usize,
    pub h0: usize,
    pub h1: usize,
    pub expected_h0: usize,
    pub expected_h1: usize,
    pub maximal_rank_at_d: bool,
}

/// Stacks the condition rows of `cfg` in degree `d` and reads off
/// `h⁰ = n − rank` and `h¹ = h⁰(O_X(d)) − rank`.
pub fn hilbert_report(cfg: &Configuration, d: usize) -> Result<HilbertReport> {
    let m = cfg.condition_matrix(d)?;
    let n = m.cols();
    let sheaf_dim = cfg.sheaf_dim(d);
    let rank = m.rank();
    if rank > sheaf_dim {
        return Err(Error::CertificateMismatch(format!(
            "rank {rank} exceeds h0(O_X({d})) = {sheaf_dim}"
        )));
    }
    let (h0, h1) = (n - rank, sheaf_dim - rank);
    assert_eq!(
        h0 as i64 - h1 as i64,
        n as i64 - sheaf_dim as i64,
        "Euler characteristic"
    );
    let (e0, e1) = expected_from_dims(n as u64, sheaf_dim as u64);
    Ok(HilbertReport {
        d,
        n,
        sheaf_dim,
        rows_emitted: m.rows(),
        rank,
        h0,
        h1,
        expected_h0: e0 as usize,
        expected_h1: e1 as usize,
        maximal_rank_at_d: h0 == e0 as usize,
    })
}

/// Where a sampled component sits relative to Q0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Placement {
    /// Uniform, with no reference to Q0.
    #[default]
    Free,
    /// Lines are lines of the first ruling; points, nodes lie on Q0.
    OnQuadric,
    /// Lines meet Q0 transversally in two rational points; points and
    /// nodes lie off Q0.
    OffQuadric,
}

/// One component to be sampled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Template {
    pub kind: ComponentKind,
    #[serde(default)]
    pub placement: Placement,
}

impl Template {
    pub fn new(kind: ComponentKind, placement: Placement) -> Self {
        Template { kind, placement }
    }
}

/// A family of configurations whose general member is studied.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FamilySpec {
    /// `a` double lines and `b` lines, all uniform and pairwise disjoint.
    Z {
        a: usize,
        b: usize,
    },
    /// `a` double lines, `u` lines (`e` of them on Q0) and `v` nodal conics
    /// with nodes on Q0.
    W {
        a: usize,
        u: usize,
        v: usize,
        e: usize,
    },
    /// `e` uniform arrows.
    Arrows {
        e: usize,
    },
    Custom {
        components: Vec<Template>,
    },
}

impl FamilySpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            FamilySpec::W { u, e, .. } if e > u => Err(Error::InvalidInput(format!(
                "W family needs e <= u, got e = {e}, u = {u}"
            ))),
            _ => Ok(()),
        }
    }

    /// Component templates in sampling order.
    pub fn templates(&self) -> Vec<Template> {
        use ComponentKind as K;
        use Placement as P;
        let rep = |n: usize, k, p| std::iter::repeat_n(Template::new(k, p), n);
        match *self {
            FamilySpec::Z { a, b } => rep(a, K::DoubleLine, P::Free).chain(rep(b, K::Line, P::Free)).collect(),
            FamilySpec::W { a, u, v, e } => rep(a, K::DoubleLine, P::OffQuadric)
                .chain(rep(e, K::Line, P::OnQuadric))
                .chain(rep(u.saturating_sub(e), K::Line, P::OffQuadric))
                .chain(rep(v, K::NodalConic, P::OnQuadric))
                .collect(),
            FamilySpec::Arrows { e } => rep(e, K::Arrow, P::Free).collect(),
            FamilySpec::Custom { ref components } => components.clone(),
        }
    }

    /// True when sampling refers to Q0.
    pub fn uses_quadric(&self) -> bool {
        self.templates().iter().any(|t| t.placement != Placement::Free)
    }

    /// `h⁰(O_X(d))` of any member.
    pub fn sheaf_dim(&self, d: usize) -> usize {
        match *self {
            FamilySpec::Z { a, b } => load(a as u64, b as u64, d as u64).expect("load fits") as usize,
            _ => self.templates().iter().map(|t| t.kind.sheaf_dim(d)).sum(),
        }
    }
}

fn random_plane_through(field: PrimeField, rng: &mut SeededRng, p: &ProjPoint) -> Plane {
    let kernel = Matrix::from_rows(field, 4, &[p.coords()]).nullspace_basis();
    loop {
        let c: Vec<u64> = (0..3).map(|_| rng.element(field)).collect();
        let normal = std::array::from_fn(|i| (0..3).fold(0, |acc, k| field.add(acc, field.mul(c[k], kernel[k][i]))));
        if let Ok(plane) = Plane::new(field, normal) {
            return plane;
        }
    }
}

fn point_off_quadric(field: PrimeField, rng: &mut SeededRng) -> ProjPoint {
    loop {
        let p = rng.point(field);
        if !on_standard_quadric(field, &p) {
            return p;
        }
    }
}

fn point_with(field: PrimeField, rng: &mut SeededRng, placement: Placement) -> ProjPoint {
    match placement {
        Placement::Free => rng.point(field),
        Placement::OnQuadric => rng.quadric_point(field).to_p3(field),
        Placement::OffQuadric => point_off_quadric(field, rng),
    }
}

/// Join of two points of Q0 not on a common ruling line.
fn secant_line(field: PrimeField, rng: &mut SeededRng) -> Option<Line> {
    let (p, q) = (rng.quadric_point(field), rng.quadric_point(field));
    if p.st == q.st || p.uv == q.uv {
        return None;
    }
    Line::new(field, p.to_p3(field), q.to_p3(field)).ok()
}

fn line_with(field: PrimeField, rng: &mut SeededRng, placement: Placement) -> Option<Line> {
    match placement {
        Placement::Free => Line::new(field, rng.point(field), rng.point(field)).ok(),
        Placement::OnQuadric => ruling_line(field, Ruling::First, rng.p1_point(field)).ok(),
        Placement::OffQuadric => secant_line(field, rng),
    }
}

/// Node and the two far points of a conic's lines. With the node on Q0 the
/// lines are transversal to Q0; with the node off Q0 each line passes
/// through a point of Q0 and is not tangent there.
fn conic_points(field: PrimeField, rng: &mut SeededRng, placement: Placement) -> Option<[ProjPoint; 3]> {
    match placement {
        Placement::Free => Some([rng.point(field), rng.point(field), rng.point(field)]),
        Placement::OnQuadric => {
            let node = rng.quadric_point(field).to_p3(field);
            let a = rng.point(field);
            let b = rng.point(field);
            let transversal = |x: &ProjPoint| standard_polar(field, &node.coords(), &x.coords()) != 0;
            (transversal(&a) && transversal(&b)).then_some([node, a, b])
        }
        Placement::OffQuadric => {
            let node = point_off_quadric(field, rng);
            let a = rng.quadric_point(field).to_p3(field);
            let b = rng.quadric_point(field).to_p3(field);
            let transversal = |x: &ProjPoint| standard_polar(field, &node.coords(), &x.coords()) != 0;
            (transversal(&a) && transversal(&b)).then_some([node, a, b])
        }
    }
}

fn sample_component(field: PrimeField, rng: &mut SeededRng, t: Template) -> Option<Component> {
    let p = t.placement;
    Some(match t.kind {
        ComponentKind::Point => Component::Point {
            point: point_with(field, rng, p),
        },
        ComponentKind::SpaceDoublePoint => Component::SpaceDoublePoint {
            point: point_with(field, rng, p),
        },
        ComponentKind::PlanarDoublePoint => {
            let point = point_with(field, rng, p);
            let plane = if p == Placement::OnQuadric {
                tangent_plane(field, &Quadric::standard(field), &point).ok()?
            } else {
                random_plane_through(field, rng, &point)
            };
            Component::PlanarDoublePoint { point, plane }
        }
        ComponentKind::Arrow => Component::Arrow {
            point: point_with(field, rng, p),
            direction: rng.point(field),
        },
        ComponentKind::Line => Component::Line {
            line: line_with(field, rng, p)?,
        },
        ComponentKind::DoubleLine => Component::DoubleLine {
            line: line_with(field, rng, p)?,
        },
        ComponentKind::NodalConic => {
            let [node, a, b] = conic_points(field, rng, p)?;
            Component::nodal_conic(field, node, a, b).ok()?
        }
        ComponentKind::Sundial => {
            let [node, a, b] = conic_points(field, rng, p)?;
            Component::sundial(field, node, a, b).ok()?
        }
    })
}

/// Draws one member of `spec`, resampling each component up to
/// [`MAX_RETRIES`] times until it is disjoint from the ones before it.
pub fn sample_configuration(field: PrimeField, spec: &FamilySpec, rng: &mut SeededRng) -> Result<Configuration> {
    spec.validate()?;
    let mut cfg = Configuration::empty(field);
    if spec.uses_quadric() {
        cfg = cfg.with_reference_quadric();
    }
    for t in spec.templates() {
        let c = (0..MAX_RETRIES)
            .find_map(|_| sample_component(field, rng, t).filter(|c| cfg.accepts(c)))
            .ok_or(Error::RetriesExhausted(MAX_RETRIES))?;
        cfg.push(c)?;
    }
    Ok(cfg)
}

/// How many samples to draw, over which primes, from which base seed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialPlan {
    pub trials: usize,
    pub primes: Vec<PrimeField>,
    pub seed: u64,
}

impl Default for TrialPlan {
    fn default() -> Self {
        TrialPlan {
            trials: 3,
            primes: vec![
                PrimeField::new(DEFAULT_PRIME).expect("prime"),
                PrimeField::new(SECONDARY_PRIME).expect("prime"),
            ],
            seed: DEFAULT_SEED,
        }
    }
}

impl TrialPlan {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_trials(mut self, trials: usize) -> Self {
        self.trials = trials;
        self
    }

    pub fn with_primes(mut self, primes: Vec<PrimeField>) -> Self {
        self.primes = primes;
        self
    }

    /// Seed of trial `t` over `field`.
    pub fn trial_seed(&self, field: PrimeField, t: usize) -> u64 {
        derive_seed(derive_seed(self.seed, field.modulus()), t as u64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Verdict {
    MaximalRankCertified,
    DefectObserved { h0: usize, h1: usize },
    Inconclusive,
}

impl Verdict {
    pub fn is_certified(&self) -> bool {
        matches!(self, Verdict::MaximalRankCertified)
    }

    pub fn label(&self) -> &'static str {
        match self {
            Verdict::MaximalRankCertified => "MaximalRankCertified",
            Verdict::DefectObserved { .. } => "DefectObserved",
            Verdict::Inconclusive => "Inconclusive",
        }
    }
}

/// One sampled configuration and its cohomology.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub prime: u64,
    pub seed: u64,
    pub rank: usize,
    pub h0: usize,
    pub h1: usize,
}

/// Outcome of sampling a family in one degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialCertificate {
    pub spec: FamilySpec,
    pub d: usize,
    pub n: usize,
    pub sheaf_dim: usize,
    pub expected_h0: usize,
    pub expected_h1: usize,
    pub primes: Vec<u64>,
    pub seeds: Vec<u64>,
    /// Trials in the order they ran.
    pub trials: Vec<TrialRecord>,
    pub min_h0: usize,
    pub min_h1: usize,
    pub verdict: Verdict,
}

impl TrialCertificate {
    /// The certifying trial if there is one, else the first trial with the
    /// smallest `h⁰`.
    pub fn witness(&self) -> &TrialRecord {
        self.trials
            .iter()
            .find(|t| t.h0 == self.expected_h0 && t.h1 == self.expected_h1)
            .or_else(|| self.trials.iter().min_by_key(|t| t.h0))
            .expect("at least one trial")
    }
}

/// Samples `spec` in degree `d` per `plan` and renders a verdict.
///
/// Sampling stops at the first trial reaching the expected values, since
/// later trials cannot change a certified verdict.
pub fn general_hilbert(spec: &FamilySpec, d: usize, plan: &TrialPlan) -> Result<TrialCertificate> {
    if plan.trials == 0 || plan.primes.is_empty() {
        return Err(Error::InvalidInput("need at least one trial and one prime".into()));
    }
    spec.validate()?;
    let n = forms_dim(d as u64)? as usize;
    let sheaf_dim = spec.sheaf_dim(d);
    let (e0, e1) = expected_from_dims(n as u64, sheaf_dim as u64);
    let (e0, e1) = (e0 as usize, e1 as usize);
    let mut trials = Vec::new();
    let mut certified = false;
    'primes: for &field in &plan.primes {
        field.check_degree(d)?;
        for t in 0..plan.trials {
            let seed = plan.trial_seed(field, t);
            let cfg = sample_configuration(field, spec, &mut SeededRng::new(seed))?;
            let r = hilbert_report(&cfg, d)?;
            trials.push(TrialRecord {
                prime: field.modulus(),
                seed,
                rank: r.rank,
                h0: r.h0,
                h1: r.h1,
            });
            if (r.h0, r.h1) == (e0, e1) {
                certified = true;
                break 'primes;
            }
        }
    }
    let min_h0 = trials.iter().map(|t| t.h0).min().expect("nonempty");
    let min_h1 = trials.iter().map(|t| t.h1).min().expect("nonempty");
    let verdict = if certified {
        Verdict::MaximalRankCertified
    } else {
        let first = (trials[0].h0, trials[0].h1);
        let agree = trials.iter().all(|t| (t.h0, t.h1) == first);
        if agree && plan.primes.len() >= 2 {
            Verdict::DefectObserved {
                h0: first.0,
                h1: first.1,
            }
        } else {
            Verdict::Inconclusive
        }
    };
    let mut primes: Vec<u64> = trials.iter().map(|t| t.prime).collect();
    primes.dedup();
    Ok(TrialCertificate {
        spec: spec.clone(),
        d,
        n,
        sheaf_dim,
        expected_h0: e0,
        expected_h1: e1,
        primes,
        seeds: trials.iter().map(|t| t.seed).collect(),
        trials,
        min_h0,
        min_h1,
        verdict,
    })
}

/// Runs independent cells in parallel; results come back in input order.
pub fn general_hilbert_cells(cells: &[(FamilySpec, usize)], plan: &TrialPlan) -> Vec<Result<TrialCertificate>> {
    cells
        .par_iter()
        .map(|(spec, d)| general_hilbert(spec, *d, plan))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum SweepVerdict {
    MaximalRank,
    /// Degrees at which the two-point criterion failed.
    Flagged {
        degrees: Vec<usize>,
    },
}

/// Per-degree certificates for `Z(a, b)` and the verdict of the two-point
/// criterion at the critical value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepReport {
    pub a: usize,
    pub b: usize,
    pub critical_value: usize,
    /// One certificate per degree `1..=d_max`.
    pub cells: Vec<TrialCertificate>,
    /// `h⁰ = 0` at `d* − 1` certified.
    pub h0_vanishes_below: bool,
    /// `h¹ = 0` at `d*` certified.
    pub h1_vanishes_at: bool,
    pub verdict: SweepVerdict,
}

impl SweepReport {
    /// Degrees in the table whose cell is not certified.
    pub fn flagged_cells(&self) -> Vec<usize> {
        self.cells
            .iter()
            .filter(|c| !c.verdict.is_certified())
            .map(|c| c.d)
            .collect()
    }
}

/// Tabulates `Z(a, b)` for `1 ≤ d ≤ d_max` and decides maximal rank from
/// the vanishing of `h⁰` at `d* − 1` and of `h¹` at `d*`.
pub fn maximal_rank_sweep(a: usize, b: usize, d_max: usize, plan: &TrialPlan) -> Result<SweepReport> {
    let critical = crate::combinatorics::critical_value(a as u64, b as u64)? as usize;
    let spec = FamilySpec::Z { a, b };
    let top = d_max.max(critical);
    let cells: Vec<(FamilySpec, usize)> = (1..=top).map(|d| (spec.clone(), d)).collect();
    let mut all = general_hilbert_cells(&cells, plan)
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let below = if critical >= 2 {
        let c = &all[critical - 2];
        c.verdict.is_certified() && c.expected_h0 == 0
    } else {
        // d* = 1: the check at degree 0 is a single evaluation.
        general_hilbert(&spec, 0, plan)?.min_h0 == 0
    };
    let at = {
        let c = &all[critical - 1];
        c.verdict.is_certified() && c.expected_h1 == 0
    };
    let mut flagged = Vec::new();
    if !below {
        flagged.push(critical - 1);
    }
    if !at {
        flagged.push(critical);
    }
    all.truncate(d_max);
    Ok(SweepReport {
        a,
        b,
        critical_value: critical,
        cells: all,
        h0_vanishes_below: below,
        h1_vanishes_at: at,
        verdict: if flagged.is_empty() {
            SweepVerdict::MaximalRank
        } else {
            SweepVerdict::Flagged { degrees: flagged }
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f() -> PrimeField {
        PrimeField::default_field()
    }

    fn single(c: Component) -> Configuration {
        Configuration::new(f(), vec![c]).unwrap()
    }

    #[test]
    fn one_line_in_degree_one() {
        let line = Line::through(f(), [1, 0, 0, 0], [0, 1, 0, 0]).unwrap();
        let r = hilbert_report(&single(Component::Line { line }), 1).unwrap();
        assert_eq!((r.h0, r.h1), (2, 0));
        assert!(r.maximal_rank_at_d);
    }

    #[test]
    fn one_double_line_in_degree_two() {
        let line = Line::through(f(), [1, 0, 0, 0], [0, 1, 0, 0]).unwrap();
        let r = hilbert_report(&single(Component::DoubleLine { line }), 2).unwrap();
        assert_eq!((r.n, r.sheaf_dim, r.h0, r.h1), (10, 7, 3, 0));
    }

    #[test]
    fn two_double_lines_on_a_quadric_in_degree_three() {
        let spec = FamilySpec::Custom {
            components: vec![Template::new(ComponentKind::DoubleLine, Placement::OnQuadric); 2],
        };
        let cfg = sample_configuration(f(), &spec, &mut SeededRng::new(3)).unwrap();
        assert_eq!(hilbert_report(&cfg, 3).unwrap().h0, 0);
    }

    #[test]
    fn nodal_conic_rank_is_its_sheaf_dim() {
        let f = f();
        let mut rng = SeededRng::new(5);
        for placement in [Placement::Free, Placement::OnQuadric, Placement::OffQuadric] {
            let spec = FamilySpec::Custom {
                components: vec![Template::new(ComponentKind::NodalConic, placement)],
            };
            let cfg = sample_configuration(f, &spec, &mut rng).unwrap();
            for d in 1..=5 {
                let r = hilbert_report(&cfg, d).unwrap();
                assert_eq!(r.rows_emitted, 2 * d + 2);
                assert_eq!(r.rank, 2 * d + 1);
            }
        }
    }

    #[test]
    fn sampling_is_reproducible() {
        let spec = FamilySpec::W { a: 1, u: 3, v: 1, e: 1 };
        let x = sample_configuration(f(), &spec, &mut SeededRng::new(11)).unwrap();
        let y = sample_configuration(f(), &spec, &mut SeededRng::new(11)).unwrap();
        assert_eq!(x, y);
        assert_eq!(x.len(), 5);
    }

    #[test]
    fn w_needs_e_at_most_u() {
        let spec = FamilySpec::W { a: 0, u: 1, v: 0, e: 2 };
        assert!(matches!(
            general_hilbert(&spec, 3, &TrialPlan::default()),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn small_field_is_rejected() {
        let plan = TrialPlan::default().with_primes(vec![PrimeField::new(5).unwrap()]);
        assert_eq!(
            general_hilbert(&FamilySpec::Z { a: 0, b: 1 }, 6, &plan),
            Err(Error::FieldTooSmall { p: 5, d: 6 })
        );
    }

    #[test]
    fn general_lines_are_certified() {
        let c = general_hilbert(&FamilySpec::Z { a: 0, b: 3 }, 2, &TrialPlan::default()).unwrap();
        assert_eq!(c.verdict, Verdict::MaximalRankCertified);
        assert_eq!((c.expected_h0, c.expected_h1), (1, 0));
        assert_eq!(c.trials.len(), 1);
    }

    #[test]
    fn z22_defect_in_degree_four() {
        let c = general_hilbert(&FamilySpec::Z { a: 2, b: 2 }, 4, &TrialPlan::default()).unwrap();
        assert_eq!(c.verdict, Verdict::DefectObserved { h0: 1, h1: 2 });
        assert_eq!(c.trials.len(), 6);
    }

    #[test]
    fn single_prime_defect_is_inconclusive() {
        let plan = TrialPlan::default().with_primes(vec![PrimeField::default_field()]);
        let c = general_hilbert(&FamilySpec::Z { a: 3, b: 0 }, 4, &plan).unwrap();
        assert_eq!(c.verdict, Verdict::Inconclusive);
        assert_eq!((c.min_h0, c.min_h1), (1, 5));
    }

    #[test]
    fn sweep_flags_the_exception() {
        let r = maximal_rank_sweep(2, 2, 6, &TrialPlan::default()).unwrap();
        assert_eq!(r.critical_value, 5);
        assert_eq!(r.flagged_cells(), vec![4]);
        assert_eq!(r.verdict, SweepVerdict::Flagged { degrees: vec![4] });
        let r = maximal_rank_sweep(2, 3, 6, &TrialPlan::default()).unwrap();
        assert_eq!(r.verdict, SweepVerdict::MaximalRank);
    }
}
