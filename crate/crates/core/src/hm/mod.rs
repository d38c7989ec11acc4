//! The step-function extension of a gyrogroup.
//!
//! `HmModel` wraps any base model as the gyrogroup of step functions
//! `[0,1) → G` under pointwise operations, so the whole axiom and identity
//! engine runs over step functions unchanged.

mod lift;
mod neighborhood;
mod ops;
mod path;
mod step;

pub use lift::{
    hm_pseudometric, lift_function, lift_hom, validate_hom, BoundedFunction, BoundedPseudometric,
    GyroHom,
};
pub use neighborhood::{
    sample_step_in, violation_measure, HmNeighborhood, Neighborhood, NeighborhoodKind,
};
pub use ops::{embed, hm_cominus, hm_coplus, hm_gyr, hm_ominus, hm_oplus};
pub use path::{disagreement_measure, path_disagreement, path_point};
pub use step::{refine, refine_many, Refinement, StepFunction};

use rand::Rng;

use crate::element::{Element, ElementValue, ModelId};
use crate::error::{GyroError, Result};
use crate::model::{Carrier, DynModel, GyroModel};
use crate::rational::Rational;
use crate::rng::dyadic_interior;

/// Log2 of the denominator used for sampled breakpoints. Dyadic breakpoints
/// keep every derived measure inside 64-bit rationals.
pub const SAMPLE_BREAK_DENOM_LOG2: u32 = 12;

#[derive(Clone)]
pub struct HmModel {
    id: ModelId,
    base: DynModel,
    /// Most interior breakpoints per sampled step function.
    pub max_interior: usize,
}

impl HmModel {
    pub fn new(base: DynModel) -> HmModel {
        HmModel { id: ModelId::new(format!("hm:{}", base.id())), base, max_interior: 6 }
    }

    pub fn with_max_interior(base: DynModel, max_interior: usize) -> HmModel {
        HmModel { max_interior, ..HmModel::new(base) }
    }

    pub fn base(&self) -> &DynModel {
        &self.base
    }

    pub fn wrap(&self, f: StepFunction) -> Element {
        Element::new(self.id.clone(), ElementValue::Step(Box::new(f)))
    }

    pub fn unwrap<'e>(&self, e: &'e Element) -> Result<&'e StepFunction> {
        self.guard(e)?;
        match e.step() {
            Some(f) if f.model() == self.base.id() => Ok(f),
            _ => Err(GyroError::WrongPayload { model: self.id.clone() }),
        }
    }

    /// Random step function: dyadic interior breakpoints, values drawn from
    /// the base sampler, then canonical merge.
    pub fn sample_step(&self, rng: &mut dyn rand::RngCore) -> StepFunction {
        let interior = rng.gen_range(0..=self.max_interior);
        let mut breakpoints = vec![Rational::ZERO];
        breakpoints.extend(dyadic_interior(rng, interior, SAMPLE_BREAK_DENOM_LOG2));
        breakpoints.push(Rational::ONE);
        let values: Vec<Element> =
            (0..breakpoints.len() - 1).map(|_| self.base.sample(rng)).collect();
        step::canonical(self.base.as_ref(), breakpoints, values)
            .expect("sampled step function is valid")
    }
}

impl GyroModel for HmModel {
    fn id(&self) -> &ModelId {
        &self.id
    }

    fn carrier(&self) -> Carrier {
        Carrier::Continuous
    }

    fn describe(&self) -> String {
        format!("step functions [0,1) -> {}", self.base.describe())
    }

    fn identity(&self) -> Element {
        let e = StepFunction::constant(self.base.as_ref(), &self.base.identity())
            .expect("identity embeds");
        self.wrap(e)
    }

    fn oplus(&self, a: &Element, b: &Element) -> Result<Element> {
        let sum = hm_oplus(self.base.as_ref(), self.unwrap(a)?, self.unwrap(b)?)?;
        Ok(self.wrap(sum))
    }

    fn ominus(&self, a: &Element) -> Result<Element> {
        Ok(self.wrap(hm_ominus(self.base.as_ref(), self.unwrap(a)?)?))
    }

    fn equal(&self, a: &Element, b: &Element) -> Result<bool> {
        let (f, g) = (self.unwrap(a)?, self.unwrap(b)?);
        let (_, fv, gv) = refine(self.base.as_ref(), f, g)?;
        for (x, y) in fv.iter().zip(&gv) {
            if !self.base.equal(x, y)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn distance(&self, a: &Element, b: &Element) -> Result<f64> {
        // Length-weighted base distance over the common refinement.
        let (f, g) = (self.unwrap(a)?, self.unwrap(b)?);
        let (breaks, fv, gv) = refine(self.base.as_ref(), f, g)?;
        let mut acc = 0.0;
        for (k, (x, y)) in fv.iter().zip(&gv).enumerate() {
            let len = breaks[k + 1].sub(&breaks[k])?;
            acc += len.to_f64() * self.base.distance(x, y)?;
        }
        Ok(acc)
    }

    fn is_exact(&self) -> bool {
        self.base.is_exact()
    }

    fn gyr_closed_form(&self, a: &Element, b: &Element, c: &Element) -> Option<Result<Element>> {
        // Pointwise lift of the base closed form, when one exists.
        let probe = self.base.gyr_closed_form(
            &self.base.identity(),
            &self.base.identity(),
            &self.base.identity(),
        )?;
        if probe.is_err() {
            return Some(Err(probe.unwrap_err()));
        }
        let go = || -> Result<Element> {
            let (f, g, h) = (self.unwrap(a)?, self.unwrap(b)?, self.unwrap(c)?);
            let r = refine_many(self.base.as_ref(), &[f, g, h])?;
            let values = (0..r.columns[0].len())
                .map(|k| {
                    self.base
                        .gyr_closed_form(&r.columns[0][k], &r.columns[1][k], &r.columns[2][k])
                        .expect("base closed form probed above")
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(self.wrap(step::canonical(self.base.as_ref(), r.breakpoints, values)?))
        };
        Some(go())
    }

    fn sample(&self, rng: &mut dyn rand::RngCore) -> Element {
        let f = self.sample_step(rng);
        self.wrap(f)
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::models::CayleyGyrogroup;
    use crate::rng::seeded;

    fn z4() -> DynModel {
        Arc::new(CayleyGyrogroup::zn(4).unwrap())
    }

    #[test]
    fn extension_identity_is_constant_e() {
        let hm = HmModel::new(z4());
        let e = hm.identity();
        let f = hm.unwrap(&e).unwrap();
        assert!(f.is_constant());
        assert_eq!(f.values()[0].index(), Some(0));
    }

    #[test]
    fn sampled_step_functions_are_canonical() {
        let hm = HmModel::new(z4());
        let mut rng = seeded(2);
        for _ in 0..200 {
            let f = hm.sample_step(&mut rng);
            assert_eq!(*f.breakpoints().first().unwrap(), Rational::ZERO);
            assert_eq!(*f.breakpoints().last().unwrap(), Rational::ONE);
            for w in f.breakpoints().windows(2) {
                assert!(w[0] < w[1]);
            }
            for w in f.values().windows(2) {
                assert!(!hm.base().equal(&w[0], &w[1]).unwrap());
            }
        }
    }

    #[test]
    fn pointwise_table_example() {
        let base = z4();
        let hm = HmModel::new(base.clone());
        let half = Rational::new(1, 2).unwrap();
        let f = StepFunction::new(
            base.as_ref(),
            vec![Rational::ZERO, half, Rational::ONE],
            vec![
                Element::new(base.id().clone(), ElementValue::Index(1)),
                Element::new(base.id().clone(), ElementValue::Index(2)),
            ],
        )
        .unwrap();
        let g = StepFunction::constant(
            base.as_ref(),
            &Element::new(base.id().clone(), ElementValue::Index(3)),
        )
        .unwrap();
        let sum = hm_oplus(base.as_ref(), &f, &g).unwrap();
        assert_eq!(sum.breakpoints(), &[Rational::ZERO, half, Rational::ONE]);
        let idx: Vec<usize> = sum.values().iter().map(|v| v.index().unwrap()).collect();
        assert_eq!(idx, vec![0, 1]);
        let _ = hm;
    }

    #[test]
    fn inverse_law_collapses_to_identity() {
        let hm = HmModel::new(z4());
        let mut rng = seeded(3);
        for _ in 0..50 {
            let f = hm.sample(&mut rng);
            let sum = hm.oplus(&f, &hm.ominus(&f).unwrap()).unwrap();
            assert!(hm.equal(&sum, &hm.identity()).unwrap());
            let inner = hm.unwrap(&sum).unwrap();
            assert!(inner.is_constant());
        }
    }

    #[test]
    fn embedding_is_a_homomorphism() {
        let base = z4();
        let elems = base.elements().unwrap();
        for x in &elems {
            for y in &elems {
                let lhs = embed(base.as_ref(), &base.oplus(x, y).unwrap()).unwrap();
                let fx = embed(base.as_ref(), x).unwrap();
                let fy = embed(base.as_ref(), y).unwrap();
                let rhs = hm_oplus(base.as_ref(), &fx, &fy).unwrap();
                assert!(lhs.raw_eq(&rhs));
            }
        }
    }

    #[test]
    fn step_function_json_round_trip() {
        let base = z4();
        let half = Rational::new(1, 2).unwrap();
        let f = StepFunction::new(
            base.as_ref(),
            vec![Rational::ZERO, half, Rational::ONE],
            vec![
                Element::new(base.id().clone(), ElementValue::Index(1)),
                Element::new(base.id().clone(), ElementValue::Index(2)),
            ],
        )
        .unwrap();
        let json = f.to_json();
        assert!(json.contains("\"model-id\":\"zn:4\""), "{json}");
        assert!(json.contains("\"breakpoints\":[\"0\",\"1/2\",\"1\"]"), "{json}");
        let back = StepFunction::from_json(&json).unwrap();
        assert!(back.raw_eq(&f));
    }

    #[test]
    fn non_canonical_json_is_rejected() {
        let text = r#"{"model-id":"zn:4","breakpoints":["0","1/2","1"],"values":[1,1]}"#;
        assert!(StepFunction::from_json(text).is_err());
        let text = r#"{"model-id":"zn:4","breakpoints":["0","1"],"values":[1,2]}"#;
        assert!(StepFunction::from_json(text).is_err());
        let text = r#"{"model-id":"zn:4","breakpoints":["0","2/3","1/3","1"],"values":[1,2,3]}"#;
        assert!(StepFunction::from_json(text).is_err());
    }
}
