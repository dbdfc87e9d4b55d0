//! Integer bookkeeping for unions of `a` double lines and `b` lines: form
//! counts, the Euclidean splits of `C(d+3,3)` by line loads, critical
//! values and expected Hilbert values.
//!
//! Everything is checked arithmetic; a value that would not fit in a `u64`
//! is reported as [`Error::Overflow`] rather than wrapped.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Parameters of `Z(a, b)` in degree `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PostulationParams {
    pub a: u64,
    pub b: u64,
    pub d: u64,
}

/// `a(3d+1) + (d+1)b + c = C(d+3,3)` with `0 ≤ c ≤ d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SplitBC {
    pub b: u64,
    pub c: u64,
}

/// `a(3d+1) + (d+1)u − v = C(d+3,3)` with `0 ≤ v ≤ d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SplitUV {
    pub u: u64,
    pub v: u64,
}

/// `C(n, k)`, computed multiplicatively with exact intermediate division.
pub fn binomial(n: u64, k: u64) -> Result<u64> {
    if k > n {
        return Ok(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul(u128::from(n - i)).ok_or(Error::Overflow("binomial"))? / u128::from(i + 1);
    }
    u64::try_from(acc).map_err(|_| Error::Overflow("binomial"))
}

/// `C(d+3, 3)`, the number of degree-`d` monomials in four variables.
pub fn forms_dim(d: u64) -> Result<u64> {
    binomial(d.checked_add(3).ok_or(Error::Overflow("forms_dim"))?, 3)
}

fn mul_add(x: u64, y: u64, acc: u64, what: &'static str) -> Result<u64> {
    x.checked_mul(y)
        .and_then(|p| p.checked_add(acc))
        .ok_or(Error::Overflow(what))
}

/// `h⁰(O_X(d)) = a(3d+1) + b(d+1)` for `X ∈ Z(a, b)`.
pub fn load(a: u64, b: u64, d: u64) -> Result<u64> {
    let dl = mul_add(3, d, 1, "load")?;
    let l = d.checked_add(1).ok_or(Error::Overflow("load"))?;
    mul_add(b, l, mul_add(a, dl, 0, "load")?, "load")
}

fn double_line_room(a: u64, d: u64) -> Result<(u64, u64)> {
    Ok((load(a, 0, d)?, forms_dim(d)?))
}

/// The Euclidean split of the room left by `a` double lines into line loads.
pub fn split_bc(a: u64, d: u64) -> Result<SplitBC> {
    let (used, forms) = double_line_room(a, d)?;
    if used > forms {
        return Err(Error::Infeasible {
            a,
            d,
            load: used,
            forms,
        });
    }
    let rem = forms - used;
    Ok(SplitBC {
        b: rem / (d + 1),
        c: rem % (d + 1),
    })
}

/// The split rounding the number of lines up instead of down.
pub fn split_uv(a: u64, d: u64) -> Result<SplitUV> {
    let (used, forms) = double_line_room(a, d)?;
    if used > forms + d {
        return Err(Error::Infeasible {
            a,
            d,
            load: used,
            forms,
        });
    }
    let rem = i128::from(forms) - i128::from(used);
    let step = i128::from(d) + 1;
    let u = if rem <= 0 { 0 } else { (rem + step - 1) / step };
    let v = u * step - rem;
    Ok(SplitUV {
        u: u as u64,
        v: v as u64,
    })
}

fn in_critical_domain(a: u64, b: u64) -> bool {
    a >= 2 || (a == 1 && b > 0) || b >= 3 || (a, b) == (1, 0) || (a, b) == (0, 2)
}

/// The least `d ≥ 2` with `a(3d+1) + b(d+1) ≤ C(d+3,3)`; by convention 1 for
/// `(1, 0)` and `(0, 2)`. Pairs outside that definition are rejected.
pub fn critical_value(a: u64, b: u64) -> Result<u64> {
    if !in_critical_domain(a, b) {
        return Err(Error::Undefined(a, b));
    }
    if (a, b) == (1, 0) || (a, b) == (0, 2) {
        return Ok(1);
    }
    let mut d = 2;
    while load(a, b, d)? > forms_dim(d)? {
        d += 1;
    }
    Ok(d)
}

/// `(max(0, n − s), max(0, s − n))`.
pub fn expected_from_dims(n: u64, sheaf_dim: u64) -> (u64, u64) {
    (n.saturating_sub(sheaf_dim), sheaf_dim.saturating_sub(n))
}

/// Expected `(h⁰, h¹)` of `I_X(d)` for `X ∈ Z(a, b)` of maximal rank.
pub fn expected_values(a: u64, b: u64, d: u64) -> Result<(u64, u64)> {
    if a == 0 && b == 0 {
        return Err(Error::EmptyConfiguration);
    }
    Ok(expected_from_dims(forms_dim(d)?, load(a, b, d)?))
}

/// `b_{a,d} ≥ u_{0,d−2} − a`, false when `b_{a,d}` is undefined.
pub fn n3lu1_check(a: u64, d: u64) -> bool {
    if d < 2 {
        return false;
    }
    match (split_bc(a, d), split_uv(0, d - 2)) {
        (Ok(bc), Ok(uv)) => i128::from(bc.b) >= i128::from(uv.u) - i128::from(a),
        _ => false,
    }
}

/// `⌈(C(3a+4,3) − 27a − 12) / (3a+2)⌉ + 3 − a`.
pub fn i4_bound(a: u64) -> Result<u64> {
    if a < 4 {
        return Err(Error::InvalidInput(format!("the bound needs a >= 4, got {a}")));
    }
    let top = i128::from(binomial(3 * a + 4, 3)?) - 27 * i128::from(a) - 12;
    let den = 3 * i128::from(a) + 2;
    let ceil = (top + den - 1).div_euclid(den);
    u64::try_from(ceil + 3 - i128::from(a)).map_err(|_| Error::Overflow("i4_bound"))
}

/// Checks `a(3d+1) + 2u + (d+1)(b − u) + c + v = (d+1)²` with `(b, c)` from
/// [`split_bc`]`(a, d)` and `(u, v)` from [`split_uv`]`(0, d − 2)`.
pub fn eq4_identity_check(a: u64, d: u64) -> bool {
    if d < 2 {
        return false;
    }
    let (Ok(bc), Ok(uv)) = (split_bc(a, d), split_uv(0, d - 2)) else {
        return false;
    };
    let (a, d) = (i128::from(a), i128::from(d));
    let (b, c, u, v) = (i128::from(bc.b), i128::from(bc.c), i128::from(uv.u), i128::from(uv.v));
    a * (3 * d + 1) + 2 * u + (d + 1) * (b - u) + c + v == (d + 1) * (d + 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn forms_dims() {
        assert_eq!(forms_dim(6), Ok(84));
        assert_eq!(forms_dim(0), Ok(1));
        assert_eq!(forms_dim(8), Ok(165));
        assert_eq!(binomial(16, 3), Ok(560));
        assert_eq!(binomial(2, 3), Ok(0));
    }

    #[test]
    fn binomial_overflow_is_reported() {
        assert_eq!(binomial(u64::MAX, 3), Err(Error::Overflow("binomial")));
    }

    #[test]
    fn bc_splits() {
        assert_eq!(split_bc(2, 10), Ok(SplitBC { b: 20, c: 4 }));
        assert_eq!(split_bc(3, 13), Ok(SplitBC { b: 31, c: 6 }));
        assert_eq!(split_bc(0, 8), Ok(SplitBC { b: 18, c: 3 }));
        assert!(matches!(split_bc(4, 4), Err(Error::Infeasible { .. })));
    }

    #[test]
    fn uv_splits() {
        assert_eq!(split_uv(0, 6), Ok(SplitUV { u: 12, v: 0 }));
        assert_eq!(split_uv(0, 5), Ok(SplitUV { u: 10, v: 4 }));
        assert_eq!(split_uv(1, 5), Ok(SplitUV { u: 7, v: 2 }));
    }

    #[test]
    fn critical_values() {
        assert_eq!(critical_value(1, 0), Ok(1));
        assert_eq!(critical_value(0, 2), Ok(1));
        assert_eq!(critical_value(2, 2), Ok(5));
        assert_eq!(critical_value(3, 0), Ok(5));
        assert_eq!(critical_value(0, 1), Err(Error::Undefined(0, 1)));
        assert_eq!(critical_value(0, 0), Err(Error::Undefined(0, 0)));
    }

    #[test]
    fn expected() {
        assert_eq!(expected_values(2, 1, 4), Ok((4, 0)));
        assert_eq!(expected_values(2, 2, 4), Ok((0, 1)));
        assert_eq!(expected_values(0, 0, 3), Err(Error::EmptyConfiguration));
    }

    #[test]
    fn line_count_exceeds_conic_split_past_three_a() {
        assert!(n3lu1_check(1, 4));
        assert!(n3lu1_check(2, 5));
        for a in 1..=30 {
            assert!(n3lu1_check(a, 3 * a + 1), "a = {a}");
        }
    }

    #[test]
    fn degree_bound_for_four_or_more_double_lines() {
        assert_eq!(i4_bound(4), Ok(31));
        assert_eq!(i4_bound(5), Ok(47));
        assert!(i4_bound(3).is_err());
    }

    #[test]
    fn split_identity_holds() {
        assert!(eq4_identity_check(2, 10));
        assert!(eq4_identity_check(3, 6));
        for d in 2..=30 {
            assert!(eq4_identity_check(0, d), "d = {d}");
        }
    }

    #[test]
    fn closed_forms_for_lines() {
        for k in 1..=13u64 {
            assert_eq!(split_uv(0, 3 * k + 1).unwrap().v, 0);
            assert_eq!(split_uv(0, 3 * k).unwrap().v, 0);
            assert_eq!(split_uv(0, 3 * k - 1).unwrap().v, 2 * k);
            assert_eq!(split_uv(0, 3 * k - 1).unwrap().u, (3 * k * k + 3 * k + 2) / 2);
            assert_eq!(split_uv(0, 3 * k + 1).unwrap().u, (3 * k + 4) * (k + 1) / 2);
            assert_eq!(split_uv(0, 3 * k).unwrap().u, (k + 1) * (3 * k + 2) / 2);
        }
    }

    proptest! {
        #[test]
        fn splits_satisfy_their_equations(a in 0u64..=30, d in 2u64..=40) {
            let forms = forms_dim(d).unwrap();
            if let Ok(s) = split_bc(a, d) {
                prop_assert!(s.c <= d);
                prop_assert_eq!(load(a, s.b, d).unwrap() + s.c, forms);
                prop_assert!(eq4_identity_check(a, d));
            }
            if let Ok(s) = split_uv(a, d) {
                prop_assert!(s.v <= d);
                prop_assert_eq!(load(a, s.u, d).unwrap(), forms + s.v);
            }
        }

        #[test]
        fn critical_value_is_monotone(a in 0u64..=12, b in 0u64..=40) {
            if let Ok(c) = critical_value(a, b) {
                if let Ok(ca) = critical_value(a + 1, b) {
                    prop_assert!(ca >= c);
                }
                if let Ok(cb) = critical_value(a, b + 1) {
                    prop_assert!(cb >= c);
                }
            }
        }
    }
}
