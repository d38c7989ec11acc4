//! Pointwise gyro-operations on step functions.
//!
//! Every operation refines the operands to a common partition, applies the
//! base-model operation interval by interval, and re-canonicalizes.

use crate::element::Element;
use crate::error::Result;
use crate::hm::step::{canonical, refine_many, StepFunction};
use crate::model::GyroModel;

fn pointwise_unary(
    model: &dyn GyroModel,
    f: &StepFunction,
    op: impl Fn(&Element) -> Result<Element>,
) -> Result<StepFunction> {
    let r = refine_many(model, &[f])?;
    let values = r.columns[0].iter().map(&op).collect::<Result<Vec<_>>>()?;
    canonical(model, r.breakpoints, values)
}

fn pointwise_binary(
    model: &dyn GyroModel,
    f: &StepFunction,
    g: &StepFunction,
    op: impl Fn(&Element, &Element) -> Result<Element>,
) -> Result<StepFunction> {
    let r = refine_many(model, &[f, g])?;
    let values = r.columns[0]
        .iter()
        .zip(&r.columns[1])
        .map(|(a, b)| op(a, b))
        .collect::<Result<Vec<_>>>()?;
    canonical(model, r.breakpoints, values)
}

/// `(f ⊕ g)(r) = f(r) ⊕ g(r)`.
pub fn hm_oplus(model: &dyn GyroModel, f: &StepFunction, g: &StepFunction) -> Result<StepFunction> {
    pointwise_binary(model, f, g, |a, b| model.oplus(a, b))
}

/// `(⊖f)(r) = ⊖(f(r))`.
pub fn hm_ominus(model: &dyn GyroModel, f: &StepFunction) -> Result<StepFunction> {
    pointwise_unary(model, f, |a| model.ominus(a))
}

/// Pointwise gyration `gyr[f, g]h`.
pub fn hm_gyr(
    model: &dyn GyroModel,
    f: &StepFunction,
    g: &StepFunction,
    h: &StepFunction,
) -> Result<StepFunction> {
    let r = refine_many(model, &[f, g, h])?;
    let values = (0..r.columns[0].len())
        .map(|k| model.gyr(&r.columns[0][k], &r.columns[1][k], &r.columns[2][k]))
        .collect::<Result<Vec<_>>>()?;
    canonical(model, r.breakpoints, values)
}

/// Pointwise coaddition `f ⊞ g`.
pub fn hm_coplus(model: &dyn GyroModel, f: &StepFunction, g: &StepFunction) -> Result<StepFunction> {
    pointwise_binary(model, f, g, |a, b| model.coplus(a, b))
}

/// Pointwise cosubtraction `f ⊟ g`.
pub fn hm_cominus(model: &dyn GyroModel, f: &StepFunction, g: &StepFunction) -> Result<StepFunction> {
    pointwise_binary(model, f, g, |a, b| model.cominus(a, b))
}

/// The embedding of the base carrier: `x ↦ x^•`.
pub fn embed(model: &dyn GyroModel, x: &Element) -> Result<StepFunction> {
    StepFunction::constant(model, x)
}
