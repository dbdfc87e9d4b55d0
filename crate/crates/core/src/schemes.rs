//! The subschemes conditions are attached to, and the linear conditions they
//! impose on degree-`d` forms of P³ and on bidegree-(α, β) forms of Q0.
//!
//! A component never produces ideal generators; it produces rows, one
//! linear functional each, whose common kernel is `H⁰(I_c(d))`. The rank of
//! the stacked rows of a configuration is the rank of the restriction map
//! `H⁰(O(d)) → H⁰(O_X(d))`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::{transverse, BiformSpace, FormSpace};
use crate::geometry::{span_rank, Line, Plane, ProjPoint, Quadric, QuadricPoint, Ruling, Vec4};
use crate::linalg::{Matrix, PrimeField};

/// One connected piece of a configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Component {
    Point {
        point: ProjPoint,
    },
    /// The full first-order neighbourhood `2p` (degree 4).
    SpaceDoublePoint {
        point: ProjPoint,
    },
    /// `(2p, M)` with `M` a plane (degree 3).
    PlanarDoublePoint {
        point: ProjPoint,
        plane: Plane,
    },
    /// `(2p, M)` with `M` the line through `point` and `direction` (degree 2).
    Arrow {
        point: ProjPoint,
        direction: ProjPoint,
    },
    Line {
        line: Line,
    },
    /// The scheme cut out by the square of the ideal of the line.
    DoubleLine {
        line: Line,
    },
    /// Two lines meeting exactly at `node`.
    NodalConic {
        first: Line,
        second: Line,
        node: ProjPoint,
    },
    /// A nodal conic together with the full double point at its node; a
    /// flat limit of two skew lines.
    Sundial {
        first: Line,
        second: Line,
        node: ProjPoint,
    },
}

/// Variant names, used for templates and reporting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComponentKind {
    Point,
    SpaceDoublePoint,
    PlanarDoublePoint,
    Arrow,
    Line,
    DoubleLine,
    NodalConic,
    Sundial,
}

impl ComponentKind {
    /// `h⁰(O_c(d))`.
    pub fn sheaf_dim(self, d: usize) -> usize {
        match self {
            ComponentKind::Point => 1,
            ComponentKind::SpaceDoublePoint => 4,
            ComponentKind::PlanarDoublePoint => 3,
            ComponentKind::Arrow => 2,
            ComponentKind::Line => d + 1,
            ComponentKind::DoubleLine => 3 * d + 1,
            ComponentKind::NodalConic => 2 * d + 1,
            ComponentKind::Sundial => 2 * d + 2,
        }
    }

    pub const ALL: [ComponentKind; 8] = [
        ComponentKind::Point,
        ComponentKind::SpaceDoublePoint,
        ComponentKind::PlanarDoublePoint,
        ComponentKind::Arrow,
        ComponentKind::Line,
        ComponentKind::DoubleLine,
        ComponentKind::NodalConic,
        ComponentKind::Sundial,
    ];
}

/// `h⁰(O_c(d))` of a single component.
pub fn component_sheaf_dim(c: &Component, d: usize) -> usize {
    c.kind().sheaf_dim(d)
}

fn validate_conic(field: PrimeField, first: &Line, second: &Line, node: &ProjPoint) -> Result<()> {
    if first.same_as(field, second) {
        return Err(Error::DegenerateComponent("conic lines coincide".into()));
    }
    if !first.contains(field, node) || !second.contains(field, node) {
        return Err(Error::DegenerateComponent("node is not on both lines".into()));
    }
    Ok(())
}

/// Two vectors completing the span of `line` to a basis of GF(p)⁴, chosen
/// greedily among the coordinate vectors.
pub fn completion(field: PrimeField, line: &Line) -> [Vec4; 2] {
    let mut basis: Vec<Vec4> = line.span().to_vec();
    for i in 0..4 {
        let mut e = [0; 4];
        e[i] = 1;
        basis.push(e);
        if span_rank(field, &basis) < basis.len() {
            basis.pop();
        }
    }
    [basis[2], basis[3]]
}

/// Rows of the full double point `2p`: the value and the partials in the
/// affine chart where the leading coordinate of `p` is 1.
fn space_double_point_rows(field: PrimeField, space: &FormSpace, p: &ProjPoint) -> Vec<Vec<u64>> {
    let x = p.coords();
    let chart = x.iter().position(|&c| c != 0).expect("projective point");
    let mut rows = vec![space.eval_row(field, &x)];
    for i in (0..4).filter(|&i| i != chart) {
        let mut e = [0; 4];
        e[i] = 1;
        rows.push(space.derivative_row(field, &x, &e));
    }
    rows
}

impl Component {
    pub fn kind(&self) -> ComponentKind {
        match self {
            Component::Point { .. } => ComponentKind::Point,
            Component::SpaceDoublePoint { .. } => ComponentKind::SpaceDoublePoint,
            Component::PlanarDoublePoint { .. } => ComponentKind::PlanarDoublePoint,
            Component::Arrow { .. } => ComponentKind::Arrow,
            Component::Line { .. } => ComponentKind::Line,
            Component::DoubleLine { .. } => ComponentKind::DoubleLine,
            Component::NodalConic { .. } => ComponentKind::NodalConic,
            Component::Sundial { .. } => ComponentKind::Sundial,
        }
    }

    /// Nodal conic through `node` with the lines `node·a` and `node·b`.
    pub fn nodal_conic(field: PrimeField, node: ProjPoint, a: ProjPoint, b: ProjPoint) -> Result<Self> {
        let c = Component::NodalConic {
            first: Line::new(field, node, a)?,
            second: Line::new(field, node, b)?,
            node,
        };
        c.validate(field)?;
        Ok(c)
    }

    pub fn sundial(field: PrimeField, node: ProjPoint, a: ProjPoint, b: ProjPoint) -> Result<Self> {
        let c = Component::Sundial {
            first: Line::new(field, node, a)?,
            second: Line::new(field, node, b)?,
            node,
        };
        c.validate(field)?;
        Ok(c)
    }

    /// Checks the variant's incidence invariants.
    pub fn validate(&self, field: PrimeField) -> Result<()> {
        match self {
            Component::PlanarDoublePoint { point, plane } => {
                if !plane.contains(field, point) {
                    return Err(Error::DegenerateComponent("point is not on its plane".into()));
                }
            }
            Component::Arrow { point, direction } => {
                if point == direction {
                    return Err(Error::DegenerateComponent("arrow direction equals its point".into()));
                }
            }
            Component::NodalConic { first, second, node } | Component::Sundial { first, second, node } => {
                validate_conic(field, first, second, node)?
            }
            _ => {}
        }
        Ok(())
    }

    /// Linear subspaces making up the reduced support.
    pub fn support(&self) -> Vec<Vec<Vec4>> {
        match self {
            Component::Point { point }
            | Component::SpaceDoublePoint { point }
            | Component::PlanarDoublePoint { point, .. }
            | Component::Arrow { point, .. } => vec![vec![point.coords()]],
            Component::Line { line } | Component::DoubleLine { line } => vec![line.span().to_vec()],
            Component::NodalConic { first, second, .. } | Component::Sundial { first, second, .. } => {
                vec![first.span().to_vec(), second.span().to_vec()]
            }
        }
    }

    /// True when the reduced supports of the two components do not meet.
    pub fn disjoint_from(&self, field: PrimeField, other: &Component) -> bool {
        for u in self.support() {
            for v in other.support() {
                let mut all = u.clone();
                all.extend_from_slice(&v);
                if span_rank(field, &all) < u.len() + v.len() {
                    return false;
                }
            }
        }
        true
    }

    /// Condition rows on the forms of `space`.
    pub fn rows(&self, field: PrimeField, space: &FormSpace) -> Result<Vec<Vec<u64>>> {
        self.validate(field)?;
        let rows = match self {
            Component::Point { point } => vec![space.eval_row(field, &point.coords())],
            Component::SpaceDoublePoint { point } => space_double_point_rows(field, space, point),
            Component::PlanarDoublePoint { point, plane } => {
                let x = point.coords();
                let [w1, w2] = plane.directions_at(field, point);
                vec![
                    space.eval_row(field, &x),
                    space.derivative_row(field, &x, &w1),
                    space.derivative_row(field, &x, &w2),
                ]
            }
            Component::Arrow { point, direction } => {
                let x = point.coords();
                vec![
                    space.eval_row(field, &x),
                    space.derivative_row(field, &x, &direction.coords()),
                ]
            }
            Component::Line { line } => {
                let [a, b] = line.span();
                space.line_rows(field, &a, &b)
            }
            Component::DoubleLine { line } => {
                let [a, b] = line.span();
                space.line_and_derivative_rows(field, &a, &b, &completion(field, line))
            }
            Component::NodalConic { first, second, .. } => {
                let mut rows = Vec::new();
                for l in [first, second] {
                    let [a, b] = l.span();
                    rows.extend(space.line_rows(field, &a, &b));
                }
                rows
            }
            Component::Sundial { first, second, node } => {
                let mut rows = Vec::new();
                for l in [first, second] {
                    let [a, b] = l.span();
                    rows.extend(space.line_rows(field, &a, &b));
                }
                rows.extend(space_double_point_rows(field, space, node));
                rows
            }
        };
        Ok(rows)
    }
}

/// Condition matrix of one component on degree-`d` forms; columns are the
/// `C(d + 3, 3)` monomials.
pub fn p3_condition_rows(field: PrimeField, c: &Component, d: usize) -> Result<Matrix> {
    field.check_degree(d)?;
    let space = FormSpace::new(d);
    Ok(Matrix::from_rows(field, space.dim(), &c.rows(field, &space)?))
}

/// A finite union of components, optionally placed relative to the
/// standard quadric Q0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Configuration {
    field: PrimeField,
    components: Vec<Component>,
    reference_quadric: Option<Quadric>,
}

impl Configuration {
    /// Validates every component and pairwise disjointness.
    pub fn new(field: PrimeField, components: Vec<Component>) -> Result<Self> {
        let mut cfg = Configuration::empty(field);
        for c in components {
            cfg.push(c)?;
        }
        Ok(cfg)
    }

    pub fn empty(field: PrimeField) -> Self {
        Configuration {
            field,
            components: Vec::new(),
            reference_quadric: None,
        }
    }

    /// Marks Q0 as the reference quadric.
    pub fn with_reference_quadric(mut self) -> Self {
        self.reference_quadric = Some(Quadric::standard(self.field));
        self
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn reference_quadric(&self) -> Option<&Quadric> {
        self.reference_quadric.as_ref()
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Adds a component after checking it against everything present.
    pub fn push(&mut self, c: Component) -> Result<()> {
        c.validate(self.field)?;
        if let Some(i) = self
            .components
            .iter()
            .position(|other| !other.disjoint_from(self.field, &c))
        {
            return Err(Error::NotDisjoint(i, self.components.len()));
        }
        self.components.push(c);
        Ok(())
    }

    /// True when `c` could be added without breaking disjointness.
    pub fn accepts(&self, c: &Component) -> bool {
        c.validate(self.field).is_ok() && self.components.iter().all(|o| o.disjoint_from(self.field, c))
    }

    /// `h⁰(O_X(d))`, summed over components.
    pub fn sheaf_dim(&self, d: usize) -> usize {
        self.components.iter().map(|c| component_sheaf_dim(c, d)).sum()
    }

    /// The stacked condition matrix in degree `d`.
    pub fn condition_matrix(&self, d: usize) -> Result<Matrix> {
        self.field.check_degree(d)?;
        let space = FormSpace::new(d);
        let mut m = Matrix::with_cols(self.field, space.dim());
        for c in &self.components {
            for row in c.rows(self.field, &space)? {
                m.push_row(&row);
            }
        }
        Ok(m)
    }
}

/// A piece of the trace of a configuration on Q0 ≅ P¹ × P¹.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum TraceComponent {
    QPoint {
        point: QuadricPoint,
    },
    /// `(2o, Q)`: the first-order neighbourhood of `o` inside Q0 (degree 3).
    QDoublePoint {
        point: QuadricPoint,
    },
    RulingLine {
        ruling: Ruling,
        param: [u64; 2],
    },
    /// The divisor `2L` for a ruling line `L`.
    DoubleRulingLine {
        ruling: Ruling,
        param: [u64; 2],
    },
}

impl TraceComponent {
    /// A point of Q0 given in P³ coordinates.
    pub fn point_of(field: PrimeField, p: &ProjPoint) -> Result<Self> {
        Ok(TraceComponent::QPoint {
            point: QuadricPoint::from_p3(field, p)?,
        })
    }

    pub fn double_point_of(field: PrimeField, p: &ProjPoint) -> Result<Self> {
        Ok(TraceComponent::QDoublePoint {
            point: QuadricPoint::from_p3(field, p)?,
        })
    }

    /// Condition rows on the biforms of `space`.
    pub fn rows(&self, field: PrimeField, space: &BiformSpace) -> Vec<Vec<u64>> {
        match *self {
            TraceComponent::QPoint { point } => vec![space.eval_row(field, point.st, point.uv)],
            TraceComponent::QDoublePoint { point } => vec![
                space.eval_row(field, point.st, point.uv),
                space.st_derivative_row(field, point.st, point.uv, transverse(point.st)),
                space.uv_derivative_row(field, point.st, point.uv, transverse(point.uv)),
            ],
            TraceComponent::RulingLine { ruling, param } => match ruling {
                Ruling::First => space.first_ruling_line_rows(field, param),
                Ruling::Second => space.second_ruling_line_rows(field, param),
            },
            TraceComponent::DoubleRulingLine { ruling, param } => match ruling {
                Ruling::First => {
                    let mut rows = space.first_ruling_line_rows(field, param);
                    rows.extend(space.first_ruling_normal_rows(field, param));
                    rows
                }
                Ruling::Second => {
                    let mut rows = space.second_ruling_line_rows(field, param);
                    rows.extend(space.second_ruling_normal_rows(field, param));
                    rows
                }
            },
        }
    }
}

/// Condition matrix of one trace component on bidegree-(α, β) forms.
pub fn q_condition_rows(field: PrimeField, t: &TraceComponent, alpha: usize, beta: usize) -> Result<Matrix> {
    field.check_degree(alpha.max(beta))?;
    let space = BiformSpace::new(alpha, beta);
    Ok(Matrix::from_rows(field, space.dim(), &t.rows(field, &space)))
}

/// Stacked condition matrix of a whole trace.
pub fn trace_condition_matrix(
    field: PrimeField,
    trace: &[TraceComponent],
    alpha: usize,
    beta: usize,
) -> Result<Matrix> {
    field.check_degree(alpha.max(beta))?;
    let space = BiformSpace::new(alpha, beta);
    let mut m = Matrix::with_cols(field, space.dim());
    for t in trace {
        for row in t.rows(field, &space) {
            m.push_row(&row);
        }
    }
    Ok(m)
}
