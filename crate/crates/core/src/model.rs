//! The gyrogroup model abstraction.
//!
//! A model supplies the carrier, the identity, `⊕`, `⊖`, an equality
//! discipline, and a sampler. Gyrations are not stored: `gyr[a,b]c` is derived
//! from the gyrator identity `⊖(a⊕b) ⊕ (a ⊕ (b⊕c))`, so a model author only
//! writes the primitive operations. A model may additionally expose a closed
//! form for the gyration, which the identity suite uses as an independent
//! cross-check of the derivation.

use std::sync::Arc;

use rand::RngCore;

use crate::element::{Element, ModelId};
use crate::error::{GyroError, Result};

/// Shape of a model's carrier.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Carrier {
    /// Exactly `n` elements, enumerable and exhaustively checkable.
    Finite(usize),
    /// Not finitely enumerable; checks sample.
    Continuous,
}

pub trait GyroModel: Send + Sync {
    fn id(&self) -> &ModelId;

    fn carrier(&self) -> Carrier;

    /// Human-readable carrier description for reports.
    fn describe(&self) -> String;

    fn identity(&self) -> Element;

    fn oplus(&self, a: &Element, b: &Element) -> Result<Element>;

    fn ominus(&self, a: &Element) -> Result<Element>;

    /// Model equality: exact on finite carriers, tolerance-based otherwise.
    fn equal(&self, a: &Element, b: &Element) -> Result<bool>;

    /// Distance used for report residuals. Zero iff `equal` holds on exact
    /// models; a metric-like gap on continuous ones.
    fn distance(&self, a: &Element, b: &Element) -> Result<f64>;

    /// Whether `equal` is an exact decision.
    fn is_exact(&self) -> bool;

    /// Optional closed form for the gyration, used as a cross-check oracle.
    fn gyr_closed_form(&self, _a: &Element, _b: &Element, _c: &Element) -> Option<Result<Element>> {
        None
    }

    /// Deterministic sampler driven by the caller's seeded generator.
    fn sample(&self, rng: &mut dyn RngCore) -> Element;

    /// Full carrier enumeration for finite models.
    fn elements(&self) -> Option<Vec<Element>> {
        None
    }

    /// Distance from the identity under the model's reference metric,
    /// used by metric-ball neighborhoods. Discrete by default.
    fn ref_norm(&self, a: &Element) -> Result<f64> {
        Ok(if self.equal(a, &self.identity())? { 0.0 } else { 1.0 })
    }

    /// Uniform draw from `{x : ref_norm(x) < radius}`, or `None` when the
    /// model cannot sample that region. The default enumerates finite
    /// carriers.
    fn sample_in_ball(&self, rng: &mut dyn RngCore, radius: f64) -> Option<Element> {
        let elems = self.elements()?;
        let hits: Vec<Element> =
            elems.into_iter().filter(|e| self.ref_norm(e).map_or(false, |d| d < radius)).collect();
        pick_uniform(rng, hits)
    }

    /// Uniform draw from `{x : ref_norm(x) >= radius}`, or `None` when that
    /// region is empty or not sampleable.
    fn sample_outside_ball(&self, rng: &mut dyn RngCore, radius: f64) -> Option<Element> {
        let elems = self.elements()?;
        let hits: Vec<Element> =
            elems.into_iter().filter(|e| self.ref_norm(e).map_or(false, |d| d >= radius)).collect();
        pick_uniform(rng, hits)
    }

    /// Verifies that `e` belongs to this model.
    fn guard(&self, e: &Element) -> Result<()> {
        if e.model() != self.id() {
            return Err(GyroError::CrossModel {
                expected: self.id().clone(),
                found: e.model().clone(),
            });
        }
        Ok(())
    }

    /// `a ⊖ b = a ⊕ (⊖b)`.
    fn osub(&self, a: &Element, b: &Element) -> Result<Element> {
        self.oplus(a, &self.ominus(b)?)
    }

    /// Gyration derived from the gyrator identity:
    /// `gyr[a,b]c = ⊖(a⊕b) ⊕ (a ⊕ (b⊕c))`.
    fn gyr(&self, a: &Element, b: &Element, c: &Element) -> Result<Element> {
        let ab = self.oplus(a, b)?;
        let bc = self.oplus(b, c)?;
        self.oplus(&self.ominus(&ab)?, &self.oplus(a, &bc)?)
    }

    /// Coaddition `a ⊞ b = a ⊕ gyr[a, ⊖b]b`.
    fn coplus(&self, a: &Element, b: &Element) -> Result<Element> {
        let g = self.gyr(a, &self.ominus(b)?, b)?;
        self.oplus(a, &g)
    }

    /// Cosubtraction `a ⊟ b = a ⊖ gyr[a, b]b`, equal to `a ⊞ (⊖b)`.
    fn cominus(&self, a: &Element, b: &Element) -> Result<Element> {
        let g = self.gyr(a, b, b)?;
        self.osub(a, &g)
    }
}

pub type DynModel = Arc<dyn GyroModel>;

fn pick_uniform(rng: &mut dyn RngCore, pool: Vec<Element>) -> Option<Element> {
    use rand::Rng;
    if pool.is_empty() {
        return None;
    }
    let i = rng.gen_range(0..pool.len());
    pool.into_iter().nth(i)
}

/// Equality at a residual tolerance: model equality on exact models, a
/// distance comparison otherwise.
pub fn equal_within(model: &dyn GyroModel, a: &Element, b: &Element, tol: f64) -> Result<bool> {
    if model.is_exact() {
        model.equal(a, b)
    } else {
        Ok(model.distance(a, b)? <= tol)
    }
}
