//! Liftings from a base carrier to its step-function extension: a
//! homomorphism `φ` lifts to `φ ∘ f`, a bounded pseudometric `d` to the
//! length-weighted sum `Σ (a_{k+1}-a_k)·d(f_k, g_k)` over the common
//! refinement, and a bounded real function `F` to the length-weighted mean.

use std::sync::Arc;

use crate::element::Element;
use crate::error::{GyroError, Result};
use crate::hm::step::{canonical, refine, refine_many, StepFunction};
use crate::model::{DynModel, GyroModel};
use crate::report::{Failure, IdentityReport};
use crate::rng::substream;

type HomFn = Arc<dyn Fn(&Element) -> Result<Element> + Send + Sync>;

/// A groupoid homomorphism between two models.
#[derive(Clone)]
pub struct GyroHom {
    pub name: String,
    source: DynModel,
    target: DynModel,
    map: HomFn,
}

impl GyroHom {
    pub fn new(
        name: impl Into<String>,
        source: DynModel,
        target: DynModel,
        map: impl Fn(&Element) -> Result<Element> + Send + Sync + 'static,
    ) -> GyroHom {
        GyroHom { name: name.into(), source, target, map: Arc::new(map) }
    }

    /// Builds the homomorphism and validates `φ(a⊕b) = φ(a)⊕φ(b)` before
    /// handing it out, exhaustively on finite carriers and on `samples`
    /// seeded pairs otherwise.
    pub fn checked(
        name: impl Into<String>,
        source: DynModel,
        target: DynModel,
        map: impl Fn(&Element) -> Result<Element> + Send + Sync + 'static,
        samples: u64,
        seed: u64,
    ) -> Result<GyroHom> {
        let hom = GyroHom::new(name, source, target, map);
        let report = validate_hom(&hom, samples, seed)?;
        if !report.passed() {
            return Err(GyroError::usage(format!(
                "`{}` is not a homomorphism: {} of {} sampled pairs failed",
                hom.name, report.failure_count, report.samples
            )));
        }
        Ok(hom)
    }

    pub fn identity(model: DynModel) -> GyroHom {
        GyroHom::new("identity", model.clone(), model, |x| Ok(x.clone()))
    }

    pub fn source(&self) -> &DynModel {
        &self.source
    }

    pub fn target(&self) -> &DynModel {
        &self.target
    }

    pub fn apply(&self, x: &Element) -> Result<Element> {
        self.source.guard(x)?;
        let out = (self.map)(x)?;
        self.target.guard(&out)?;
        Ok(out)
    }
}

/// Checks the homomorphism property and reports every violating pair.
pub fn validate_hom(hom: &GyroHom, samples: u64, seed: u64) -> Result<IdentityReport> {
    let mut report = IdentityReport::new(format!("homomorphism:{}", hom.name));
    let mut check = |a: &Element, b: &Element| -> Result<()> {
        report.samples += 1;
        let lhs = hom.apply(&hom.source.oplus(a, b)?)?;
        let rhs = hom.target.oplus(&hom.apply(a)?, &hom.apply(b)?)?;
        if !hom.target.equal(&lhs, &rhs)? {
            report.record_failure(Failure {
                inputs: vec![a.clone(), b.clone()],
                residual: hom.target.distance(&lhs, &rhs)?,
                lhs,
                rhs,
            });
        }
        Ok(())
    };
    match hom.source.elements() {
        Some(elems) => {
            for a in &elems {
                for b in &elems {
                    check(a, b)?;
                }
            }
        }
        None => {
            let mut rng = substream(seed, &format!("hom:{}", hom.name));
            for _ in 0..samples {
                let a = hom.source.sample(&mut rng);
                let b = hom.source.sample(&mut rng);
                check(&a, &b)?;
            }
        }
    }
    Ok(report)
}

/// `φ^•(f) = φ ∘ f`: same breakpoints, mapped values, re-canonicalized in the
/// target model.
pub fn lift_hom(hom: &GyroHom, f: &StepFunction) -> Result<StepFunction> {
    let r = refine_many(hom.source.as_ref(), &[f])?;
    let values = r.columns[0].iter().map(|v| hom.apply(v)).collect::<Result<Vec<_>>>()?;
    canonical(hom.target.as_ref(), r.breakpoints, values)
}

type MetricFn = Arc<dyn Fn(&Element, &Element) -> Result<f64> + Send + Sync>;

/// A bounded pseudometric on a carrier, with an explicit bound.
#[derive(Clone)]
pub struct BoundedPseudometric {
    pub name: String,
    pub bound: f64,
    pub is_metric: bool,
    eval: MetricFn,
}

impl BoundedPseudometric {
    pub fn from_fn(
        name: impl Into<String>,
        bound: f64,
        is_metric: bool,
        eval: impl Fn(&Element, &Element) -> Result<f64> + Send + Sync + 'static,
    ) -> BoundedPseudometric {
        BoundedPseudometric { name: name.into(), bound, is_metric, eval: Arc::new(eval) }
    }

    /// The discrete metric: 1 on unequal pairs, under the model's equality.
    pub fn discrete(model: DynModel) -> BoundedPseudometric {
        let is_metric = model.is_exact();
        BoundedPseudometric::from_fn("discrete", 1.0, is_metric, move |a, b| {
            Ok(if model.equal(a, b)? { 0.0 } else { 1.0 })
        })
    }

    pub fn eval(&self, a: &Element, b: &Element) -> Result<f64> {
        let d = (self.eval)(a, b)?;
        if !d.is_finite() || d < 0.0 {
            return Err(GyroError::Numeric {
                context: "pseudometric evaluation",
                detail: format!("d = {d}"),
            });
        }
        Ok(d)
    }

    /// Rescales an unbounded (or loosely bounded) input into `[0, 1)` via
    /// `d ↦ d / (1 + d)`.
    pub fn normalized(self) -> BoundedPseudometric {
        let inner = self.eval.clone();
        BoundedPseudometric {
            name: format!("{}/(1+{})", self.name, self.name),
            bound: 1.0,
            is_metric: self.is_metric,
            eval: Arc::new(move |a, b| {
                let d = inner(a, b)?;
                Ok(d / (1.0 + d))
            }),
        }
    }
}

/// `d^•(f, g) = Σ (a_{k+1} - a_k) · d(f_k, g_k)` over the common refinement.
pub fn hm_pseudometric(
    model: &dyn GyroModel,
    d: &BoundedPseudometric,
    f: &StepFunction,
    g: &StepFunction,
) -> Result<f64> {
    let (breaks, fv, gv) = refine(model, f, g)?;
    let mut acc = 0.0;
    for (k, (x, y)) in fv.iter().zip(&gv).enumerate() {
        let len = breaks[k + 1].sub(&breaks[k])?;
        acc += len.to_f64() * d.eval(x, y)?;
    }
    Ok(acc)
}

type RealFn = Arc<dyn Fn(&Element) -> Result<f64> + Send + Sync>;

/// A bounded real-valued function on a carrier.
#[derive(Clone)]
pub struct BoundedFunction {
    pub name: String,
    pub bound: f64,
    eval: RealFn,
}

impl BoundedFunction {
    pub fn from_fn(
        name: impl Into<String>,
        bound: f64,
        eval: impl Fn(&Element) -> Result<f64> + Send + Sync + 'static,
    ) -> BoundedFunction {
        BoundedFunction { name: name.into(), bound, eval: Arc::new(eval) }
    }

    pub fn eval(&self, x: &Element) -> Result<f64> {
        (self.eval)(x)
    }
}

/// `F^•(g) = Σ (a_{k+1} - a_k) · F(g_k)` over `g`'s canonical partition.
pub fn lift_function(
    model: &dyn GyroModel,
    func: &BoundedFunction,
    g: &StepFunction,
) -> Result<f64> {
    if g.model() != model.id() {
        return Err(GyroError::CrossModel {
            expected: model.id().clone(),
            found: g.model().clone(),
        });
    }
    let mut acc = 0.0;
    for (lo, hi, value) in g.intervals() {
        acc += hi.sub(lo)?.to_f64() * func.eval(value)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::element::{Element, ElementValue};
    use crate::hm::ops::{embed, hm_oplus};
    use crate::models::{CayleyGyrogroup, MobiusDiskModel};
    use crate::rational::Rational;

    fn q(p: i64, d: i64) -> Rational {
        Rational::new(p, d).unwrap()
    }

    fn zn(n: usize) -> DynModel {
        Arc::new(CayleyGyrogroup::zn(n).unwrap())
    }

    fn mod_hom(n: usize, m: usize) -> GyroHom {
        GyroHom::checked(
            format!("mod {m}"),
            zn(n),
            zn(m),
            move |x| {
                let i = x.index().expect("finite element");
                Ok(Element::new(
                    crate::element::ModelId::new(format!("zn:{m}")),
                    ElementValue::Index(i % m),
                ))
            },
            0,
            0,
        )
        .unwrap()
    }

    #[test]
    fn mod_two_lift_merges_parity() {
        let hom = mod_hom(4, 2);
        let z4 = hom.source().clone();
        let half = q(1, 2);
        let f = StepFunction::new(
            z4.as_ref(),
            vec![Rational::ZERO, half, Rational::ONE],
            vec![
                Element::new(z4.id().clone(), ElementValue::Index(1)),
                Element::new(z4.id().clone(), ElementValue::Index(3)),
            ],
        )
        .unwrap();
        let lifted = lift_hom(&hom, &f).unwrap();
        assert!(lifted.is_constant());
        assert_eq!(lifted.values()[0].index(), Some(1));
        assert_eq!(lifted.model().as_str(), "zn:2");
    }

    #[test]
    fn non_homomorphism_is_rejected() {
        let err = GyroHom::checked(
            "broken",
            zn(4),
            zn(2),
            |x| {
                let i = x.index().unwrap();
                // not a homomorphism: collapses 0,1,2 to 0 and 3 to 1
                Ok(Element::new(
                    crate::element::ModelId::new("zn:2"),
                    ElementValue::Index(usize::from(i == 3)),
                ))
            },
            0,
            0,
        );
        assert!(err.is_err());
    }

    #[test]
    fn lift_distributes_over_oplus() {
        let hom = mod_hom(4, 2);
        let z4 = hom.source().clone();
        let z2 = hom.target().clone();
        let mut rng = crate::rng::seeded(8);
        let hm = crate::hm::HmModel::new(z4.clone());
        for _ in 0..100 {
            let f = hm.sample_step(&mut rng);
            let g = hm.sample_step(&mut rng);
            let lhs = lift_hom(&hom, &hm_oplus(z4.as_ref(), &f, &g).unwrap()).unwrap();
            let rhs = hm_oplus(
                z2.as_ref(),
                &lift_hom(&hom, &f).unwrap(),
                &lift_hom(&hom, &g).unwrap(),
            )
            .unwrap();
            assert!(lhs.raw_eq(&rhs));
        }
    }

    #[test]
    fn pseudometric_restricts_to_base_on_constants() {
        let z5 = zn(5);
        let d = BoundedPseudometric::discrete(z5.clone());
        let elems = z5.elements().unwrap();
        for x in &elems {
            for y in &elems {
                let fx = embed(z5.as_ref(), x).unwrap();
                let fy = embed(z5.as_ref(), y).unwrap();
                let lifted = hm_pseudometric(z5.as_ref(), &d, &fx, &fy).unwrap();
                assert_eq!(lifted, d.eval(x, y).unwrap());
            }
        }
    }

    #[test]
    fn single_difference_is_its_length() {
        let z4 = zn(4);
        let d = BoundedPseudometric::discrete(z4.clone());
        let breaks = vec![Rational::ZERO, q(1, 4), q(1, 2), Rational::ONE];
        let f = StepFunction::new(
            z4.as_ref(),
            breaks.clone(),
            vec![
                Element::new(z4.id().clone(), ElementValue::Index(1)),
                Element::new(z4.id().clone(), ElementValue::Index(2)),
                Element::new(z4.id().clone(), ElementValue::Index(3)),
            ],
        )
        .unwrap();
        let g = StepFunction::new(
            z4.as_ref(),
            breaks,
            vec![
                Element::new(z4.id().clone(), ElementValue::Index(1)),
                Element::new(z4.id().clone(), ElementValue::Index(0)),
                Element::new(z4.id().clone(), ElementValue::Index(3)),
            ],
        )
        .unwrap();
        assert_eq!(hm_pseudometric(z4.as_ref(), &d, &f, &g).unwrap(), 0.25);
    }

    #[test]
    fn function_lift_weights_by_length() {
        let m = Arc::new(MobiusDiskModel::default());
        let modulus = BoundedFunction::from_fn("modulus", 1.0, |x| {
            Ok(x.point().expect("disk element").norm())
        });
        let a = m.element(num_complex::Complex64::new(0.5, 0.0)).unwrap();
        let e = m.identity();
        let f = StepFunction::new(
            m.as_ref(),
            vec![Rational::ZERO, q(1, 2), Rational::ONE],
            vec![a, e],
        )
        .unwrap();
        let lifted = lift_function(m.as_ref(), &modulus, &f).unwrap();
        assert!((lifted - 0.25).abs() < 1e-15);
        // constant functions evaluate to the constant
        let c = BoundedFunction::from_fn("c", 7.0, |_| Ok(7.0));
        assert_eq!(lift_function(m.as_ref(), &c, &f).unwrap(), 7.0);
    }

    #[test]
    fn normalizer_stays_below_one() {
        let m: DynModel = Arc::new(MobiusDiskModel::default());
        let raw =
            BoundedPseudometric::from_fn("euclidean", 2.0, true, |a: &Element, b: &Element| {
                Ok((a.point().unwrap() - b.point().unwrap()).norm())
            });
        let d = raw.normalized();
        let mut rng = crate::rng::seeded(6);
        for _ in 0..200 {
            let a = m.sample(&mut rng);
            let b = m.sample(&mut rng);
            let v = d.eval(&a, &b).unwrap();
            assert!((0.0..1.0).contains(&v));
        }
    }
}
