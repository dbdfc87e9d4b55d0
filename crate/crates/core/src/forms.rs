//! Monomial bases and the linear functionals evaluated on them.
//!
//! [`FormSpace`] is the space of degree-`d` forms on P³; [`BiformSpace`] is
//! the space of bidegree-(α, β) forms on P¹ × P¹ ≅ Q0. Every condition a
//! scheme imposes is written as a row of values of some functional on the
//! monomial basis.

use std::collections::HashMap;

use crate::geometry::Vec4;
use crate::linalg::PrimeField;

type Exponent = [u8; 4];

const NONE: u32 = u32::MAX;

/// Degree-`d` forms in `x0..x3`, with the monomials of every lower degree
/// kept around for derivatives and dynamic-programming evaluation.
#[derive(Debug, Clone)]
pub struct FormSpace {
    degree: usize,
    monomials: Vec<Exponent>,
    /// `offsets[k]..offsets[k + 1]` are the monomials of degree `k`.
    offsets: Vec<usize>,
    /// Index of `e / x_var` and `var`, for every monomial of positive degree.
    parent: Vec<(u32, u8)>,
    /// `down[m][i]` is the index of `e - δ_i`, or `NONE`.
    down: Vec<[u32; 4]>,
}

/// Number of degree-`d` monomials in four variables, `C(d + 3, 3)`.
pub fn monomial_count(d: usize) -> usize {
    (d + 1) * (d + 2) * (d + 3) / 6
}

impl FormSpace {
    pub fn new(degree: usize) -> Self {
        let mut monomials = Vec::new();
        let mut offsets = vec![0];
        for k in 0..=degree {
            for e0 in (0..=k).rev() {
                for e1 in (0..=k - e0).rev() {
                    for e2 in (0..=k - e0 - e1).rev() {
                        let e3 = k - e0 - e1 - e2;
                        monomials.push([e0 as u8, e1 as u8, e2 as u8, e3 as u8]);
                    }
                }
            }
            offsets.push(monomials.len());
        }
        let index: HashMap<Exponent, u32> = monomials.iter().enumerate().map(|(i, &e)| (e, i as u32)).collect();
        let mut parent = Vec::with_capacity(monomials.len());
        let mut down = Vec::with_capacity(monomials.len());
        for e in &monomials {
            let mut d = [NONE; 4];
            for i in 0..4 {
                if e[i] > 0 {
                    let mut f = *e;
                    f[i] -= 1;
                    d[i] = index[&f];
                }
            }
            down.push(d);
            parent.push(match (0..4).find(|&i| e[i] > 0) {
                Some(i) => (d[i], i as u8),
                None => (NONE, 0),
            });
        }
        FormSpace {
            degree,
            monomials,
            offsets,
            parent,
            down,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Dimension of the space of degree-`d` forms.
    pub fn dim(&self) -> usize {
        self.offsets[self.degree + 1] - self.offsets[self.degree]
    }

    fn top(&self) -> std::ops::Range<usize> {
        self.offsets[self.degree]..self.offsets[self.degree + 1]
    }

    /// Exponent vectors of the columns, in column order.
    pub fn columns(&self) -> &[Exponent] {
        &self.monomials[self.top()]
    }

    /// Values at `x` of every monomial of degree `≤ d`.
    fn all_values(&self, field: PrimeField, x: &Vec4) -> Vec<u64> {
        let mut vals = vec![0u64; self.monomials.len()];
        vals[0] = 1;
        for m in 1..self.monomials.len() {
            let (p, var) = self.parent[m];
            vals[m] = field.mul(vals[p as usize], x[var as usize]);
        }
        vals
    }

    /// Row of the functional `F ↦ F(x)`.
    pub fn eval_row(&self, field: PrimeField, x: &Vec4) -> Vec<u64> {
        let vals = self.all_values(field, x);
        vals[self.top()].to_vec()
    }

    /// Row of the functional `F ↦ Σ v_i ∂F/∂x_i (x)`.
    pub fn derivative_row(&self, field: PrimeField, x: &Vec4, v: &Vec4) -> Vec<u64> {
        let vals = self.all_values(field, x);
        self.top()
            .map(|m| {
                let e = self.monomials[m];
                (0..4).fold(0, |acc, i| {
                    if e[i] == 0 || v[i] == 0 {
                        return acc;
                    }
                    let term = field.mul(field.from_usize(e[i] as usize), vals[self.down[m][i] as usize]);
                    field.add(acc, field.mul(v[i], term))
                })
            })
            .collect()
    }

    /// Coefficients of `e(sA + tB)` for every monomial `e` of degree `≤ d`,
    /// as binary forms `[coef of s^k, coef of s^(k-1) t, …, coef of t^k]`.
    fn restrictions(&self, field: PrimeField, a: &Vec4, b: &Vec4) -> Vec<Vec<u64>> {
        let mut res: Vec<Vec<u64>> = Vec::with_capacity(self.monomials.len());
        res.push(vec![1]);
        for m in 1..self.monomials.len() {
            let (p, var) = self.parent[m];
            let g = &res[p as usize];
            let (alpha, beta) = (a[var as usize], b[var as usize]);
            let mut h = vec![0u64; g.len() + 1];
            for (j, &c) in g.iter().enumerate() {
                h[j] = field.add(h[j], field.mul(alpha, c));
                h[j + 1] = field.add(h[j + 1], field.mul(beta, c));
            }
            res.push(h);
        }
        res
    }

    /// `d + 1` rows: the coefficients of `F(sA + tB)`.
    pub fn line_rows(&self, field: PrimeField, a: &Vec4, b: &Vec4) -> Vec<Vec<u64>> {
        self.line_and_derivative_rows(field, a, b, &[])
    }

    /// `d` rows: the coefficients of `(Σ w_i ∂F/∂x_i)(sA + tB)`.
    pub fn line_derivative_rows(&self, field: PrimeField, a: &Vec4, b: &Vec4, w: &Vec4) -> Vec<Vec<u64>> {
        let res = self.restrictions(field, a, b);
        self.derivative_rows_from(field, &res, w)
    }

    /// The `d + 1` restriction rows followed by `d` derivative rows for each
    /// direction in `dirs`. With two directions completing `A, B` to a basis
    /// these cut out the double line.
    pub fn line_and_derivative_rows(&self, field: PrimeField, a: &Vec4, b: &Vec4, dirs: &[Vec4]) -> Vec<Vec<u64>> {
        let res = self.restrictions(field, a, b);
        let top = self.top();
        let mut rows: Vec<Vec<u64>> = (0..=self.degree)
            .map(|j| top.clone().map(|m| res[m][j]).collect())
            .collect();
        for w in dirs {
            rows.extend(self.derivative_rows_from(field, &res, w));
        }
        rows
    }

    fn derivative_rows_from(&self, field: PrimeField, res: &[Vec<u64>], w: &Vec4) -> Vec<Vec<u64>> {
        let top = self.top();
        (0..self.degree)
            .map(|j| {
                top.clone()
                    .map(|m| {
                        let e = self.monomials[m];
                        (0..4).fold(0, |acc, i| {
                            if e[i] == 0 || w[i] == 0 {
                                return acc;
                            }
                            let c = res[self.down[m][i] as usize][j];
                            let term = field.mul(field.from_usize(e[i] as usize), c);
                            field.add(acc, field.mul(w[i], term))
                        })
                    })
                    .collect()
            })
            .collect()
    }
}

/// Bidegree-(α, β) forms `Σ c_ij s^i t^(α-i) u^j v^(β-j)` on P¹ × P¹.
///
/// Column of `(i, j)` is `i·(β + 1) + j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BiformSpace {
    pub alpha: usize,
    pub beta: usize,
}

fn binary_values(field: PrimeField, x: [u64; 2], n: usize) -> Vec<u64> {
    // x0^i x1^(n-i), i = 0..=n
    let mut p0 = vec![1u64; n + 1];
    let mut p1 = vec![1u64; n + 1];
    for k in 1..=n {
        p0[k] = field.mul(p0[k - 1], x[0]);
        p1[k] = field.mul(p1[k - 1], x[1]);
    }
    (0..=n).map(|i| field.mul(p0[i], p1[n - i])).collect()
}

/// Directional derivative along `w` of every `x0^i x1^(n-i)` at `x`.
fn binary_derivatives(field: PrimeField, x: [u64; 2], w: [u64; 2], n: usize) -> Vec<u64> {
    if n == 0 {
        return vec![0];
    }
    let lower = binary_values(field, x, n - 1);
    (0..=n)
        .map(|i| {
            let mut acc = 0;
            if i > 0 {
                acc = field.mul(field.mul(w[0], field.from_usize(i)), lower[i - 1]);
            }
            if i < n {
                let t = field.mul(field.mul(w[1], field.from_usize(n - i)), lower[i]);
                acc = field.add(acc, t);
            }
            acc
        })
        .collect()
}

/// A direction in P¹ independent of `x`.
pub(crate) fn transverse(x: [u64; 2]) -> [u64; 2] {
    if x[1] != 0 {
        [1, 0]
    } else {
        [0, 1]
    }
}

impl BiformSpace {
    pub fn new(alpha: usize, beta: usize) -> Self {
        BiformSpace { alpha, beta }
    }

    pub fn dim(&self) -> usize {
        (self.alpha + 1) * (self.beta + 1)
    }

    fn outer(&self, left: &[u64], right: &[u64], field: PrimeField) -> Vec<u64> {
        let mut row = Vec::with_capacity(self.dim());
        for &l in left {
            for &r in right {
                row.push(field.mul(l, r));
            }
        }
        row
    }

    pub fn eval_row(&self, field: PrimeField, st: [u64; 2], uv: [u64; 2]) -> Vec<u64> {
        let l = binary_values(field, st, self.alpha);
        let r = binary_values(field, uv, self.beta);
        self.outer(&l, &r, field)
    }

    /// Derivative in the (s:t) factor along `w`.
    pub fn st_derivative_row(&self, field: PrimeField, st: [u64; 2], uv: [u64; 2], w: [u64; 2]) -> Vec<u64> {
        let l = binary_derivatives(field, st, w, self.alpha);
        let r = binary_values(field, uv, self.beta);
        self.outer(&l, &r, field)
    }

    /// Derivative in the (u:v) factor along `w`.
    pub fn uv_derivative_row(&self, field: PrimeField, st: [u64; 2], uv: [u64; 2], w: [u64; 2]) -> Vec<u64> {
        let l = binary_values(field, st, self.alpha);
        let r = binary_derivatives(field, uv, w, self.beta);
        self.outer(&l, &r, field)
    }

    /// Rows expressing that the restriction to `{(s:t) = st} × P¹` vanishes,
    /// one per `u^j v^(β-j)` coefficient. `weights[i]` is the value of the
    /// `i`-th (s,t)-monomial functional on the line.
    fn first_ruling_rows(&self, weights: &[u64]) -> Vec<Vec<u64>> {
        (0..=self.beta)
            .map(|j| {
                let mut row = vec![0u64; self.dim()];
                for (i, &w) in weights.iter().enumerate() {
                    row[i * (self.beta + 1) + j] = w;
                }
                row
            })
            .collect()
    }

    fn second_ruling_rows(&self, weights: &[u64]) -> Vec<Vec<u64>> {
        (0..=self.alpha)
            .map(|i| {
                let mut row = vec![0u64; self.dim()];
                for (j, &w) in weights.iter().enumerate() {
                    row[i * (self.beta + 1) + j] = w;
                }
                row
            })
            .collect()
    }

    /// Coefficients of the restriction to the line `{(s:t) = st} × P¹`.
    pub fn first_ruling_line_rows(&self, field: PrimeField, st: [u64; 2]) -> Vec<Vec<u64>> {
        self.first_ruling_rows(&binary_values(field, st, self.alpha))
    }

    /// Coefficients of the transverse derivative restricted to `{(s:t) = st} × P¹`.
    pub fn first_ruling_normal_rows(&self, field: PrimeField, st: [u64; 2]) -> Vec<Vec<u64>> {
        let w = transverse(st);
        self.first_ruling_rows(&binary_derivatives(field, st, w, self.alpha))
    }

    pub fn second_ruling_line_rows(&self, field: PrimeField, uv: [u64; 2]) -> Vec<Vec<u64>> {
        self.second_ruling_rows(&binary_values(field, uv, self.beta))
    }

    pub fn second_ruling_normal_rows(&self, field: PrimeField, uv: [u64; 2]) -> Vec<Vec<u64>> {
        let w = transverse(uv);
        self.second_ruling_rows(&binary_derivatives(field, uv, w, self.beta))
    }
}
