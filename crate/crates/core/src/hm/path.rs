//! The path `t ↦ f_t` from the constant identity to a step function.
//!
//! On each interval `[a_k, a_{k+1})` of `f`'s partition, `f_t` keeps the
//! value of `f` on `[a_k, b_{k,t})` with `b_{k,t} = a_k + t·(a_{k+1} - a_k)`
//! and is the identity on `[b_{k,t}, a_{k+1})`. All pieces stay half-open, so
//! `f_t` is again a step function; `f_0` is the constant identity and
//! `f_1 = f` hold exactly.

use crate::error::{GyroError, Result};
use crate::hm::step::{canonical, refine, StepFunction};
use crate::model::GyroModel;
use crate::rational::Rational;

/// The point `f_t` on the path, for `t ∈ [0, 1]`.
pub fn path_point(model: &dyn GyroModel, f: &StepFunction, t: Rational) -> Result<StepFunction> {
    if t < Rational::ZERO || t > Rational::ONE {
        return Err(GyroError::usage(format!("path parameter {t} outside [0, 1]")));
    }
    let e = model.identity();
    let mut breakpoints = vec![Rational::ZERO];
    let mut values = Vec::new();
    for (lo, hi, value) in f.intervals() {
        let cut = lo.add(&t.mul(&hi.sub(lo)?)?)?;
        breakpoints.push(cut);
        values.push(value.clone());
        breakpoints.push(*hi);
        values.push(e.clone());
    }
    canonical(model, breakpoints, values)
}

/// Exact measure of `{r : f(r) ≠ g(r)}`.
pub fn disagreement_measure(
    model: &dyn GyroModel,
    f: &StepFunction,
    g: &StepFunction,
) -> Result<Rational> {
    let (breaks, fv, gv) = refine(model, f, g)?;
    let mut acc = Rational::ZERO;
    for (k, (x, y)) in fv.iter().zip(&gv).enumerate() {
        if !model.equal(x, y)? {
            acc = acc.add(&breaks[k + 1].sub(&breaks[k])?)?;
        }
    }
    Ok(acc)
}

/// Exact measure of `{r : f_s(r) ≠ f_t(r)}`; at most `|s - t|`.
pub fn path_disagreement(
    model: &dyn GyroModel,
    f: &StepFunction,
    s: Rational,
    t: Rational,
) -> Result<Rational> {
    let fs = path_point(model, f, s)?;
    let ft = path_point(model, f, t)?;
    disagreement_measure(model, &fs, &ft)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::element::{Element, ElementValue};
    use crate::models::CayleyGyrogroup;

    fn z4() -> CayleyGyrogroup {
        CayleyGyrogroup::zn(4).unwrap()
    }

    fn elem(m: &CayleyGyrogroup, i: usize) -> Element {
        Element::new(m.id().clone(), ElementValue::Index(i))
    }

    fn q(p: i64, d: i64) -> Rational {
        Rational::new(p, d).unwrap()
    }

    #[test]
    fn endpoints_are_identity_and_f() {
        let m = z4();
        let f = StepFunction::new(
            &m,
            vec![Rational::ZERO, q(1, 3), Rational::ONE],
            vec![elem(&m, 1), elem(&m, 3)],
        )
        .unwrap();
        let f0 = path_point(&m, &f, Rational::ZERO).unwrap();
        assert!(f0.is_constant());
        assert_eq!(f0.values()[0].index(), Some(0));
        let f1 = path_point(&m, &f, Rational::ONE).unwrap();
        assert!(f1.raw_eq(&f));
    }

    #[test]
    fn constant_function_halfway() {
        let m = z4();
        let f = StepFunction::constant(&m, &elem(&m, 2)).unwrap();
        let half = path_point(&m, &f, q(1, 2)).unwrap();
        assert_eq!(half.breakpoints(), &[Rational::ZERO, q(1, 2), Rational::ONE]);
        assert_eq!(half.values()[0].index(), Some(2));
        assert_eq!(half.values()[1].index(), Some(0));
    }

    #[test]
    fn constant_disagreement_is_gap_width() {
        let m = z4();
        let f = StepFunction::constant(&m, &elem(&m, 1)).unwrap();
        let d = path_disagreement(&m, &f, q(1, 4), q(3, 4)).unwrap();
        assert_eq!(d, q(1, 2));
        assert_eq!(path_disagreement(&m, &f, q(1, 3), q(1, 3)).unwrap(), Rational::ZERO);
    }

    #[test]
    fn disagreement_is_lipschitz_in_t() {
        let m = z4();
        let f = StepFunction::new(
            &m,
            vec![Rational::ZERO, q(1, 5), q(1, 2), Rational::ONE],
            vec![elem(&m, 1), elem(&m, 0), elem(&m, 3)],
        )
        .unwrap();
        for num_s in 0..=8 {
            for num_t in 0..=8 {
                let (s, t) = (q(num_s, 8), q(num_t, 8));
                let d = path_disagreement(&m, &f, s, t).unwrap();
                assert!(d <= s.sub(&t).unwrap().abs());
            }
        }
    }

    #[test]
    fn out_of_range_parameter_is_an_error() {
        let m = z4();
        let f = StepFunction::constant(&m, &elem(&m, 1)).unwrap();
        assert!(path_point(&m, &f, q(3, 2)).is_err());
        assert!(path_point(&m, &f, q(-1, 2)).is_err());
    }
}
