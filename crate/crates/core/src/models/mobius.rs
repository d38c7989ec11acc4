//! The Möbius gyrogroup on the open complex unit disk.
//!
//! `a ⊕ b = (a + b) / (1 + conj(a)·b)`, `⊖a = -a`, identity `0`. The gyration
//! has the closed form `gyr[a,b]c = ((1 + a·conj(b)) / (1 + conj(a)·b)) · c`,
//! which the identity suite compares against the derived gyration.

use num_complex::Complex64;
use rand::Rng;

use crate::element::{Element, ElementValue, ModelId};
use crate::error::{GyroError, Result};
use crate::model::{Carrier, GyroModel};

/// Denominators below this modulus are treated as a float pathology; they
/// cannot occur for genuine disk elements.
const MIN_DENOM: f64 = 1e-15;

/// Slack allowed on `|a ⊕ b| < 1` before the result is declared non-numeric.
const DISK_GUARD: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct MobiusDiskModel {
    id: ModelId,
    /// Equality tolerance for this carrier.
    pub tau_eq: f64,
    /// Radius cap for sampled elements.
    pub rho_max: f64,
}

impl Default for MobiusDiskModel {
    fn default() -> Self {
        MobiusDiskModel::new(1e-9, 0.999)
    }
}

impl MobiusDiskModel {
    pub fn new(tau_eq: f64, rho_max: f64) -> MobiusDiskModel {
        assert!(tau_eq >= 0.0, "tolerance must be nonnegative");
        assert!(rho_max > 0.0 && rho_max < 1.0, "radius cap must lie in (0, 1)");
        MobiusDiskModel { id: ModelId::new("mobius"), tau_eq, rho_max }
    }

    pub fn element(&self, z: Complex64) -> Result<Element> {
        if !z.re.is_finite() || !z.im.is_finite() || z.norm() >= 1.0 {
            return Err(GyroError::OutsideDisk { modulus: z.norm() });
        }
        Ok(Element::new(self.id.clone(), ElementValue::Point(z)))
    }

    fn point_of(&self, e: &Element) -> Result<Complex64> {
        self.guard(e)?;
        match e.point() {
            Some(z) if z.norm() < 1.0 => Ok(z),
            Some(z) => Err(GyroError::OutsideDisk { modulus: z.norm() }),
            None => Err(GyroError::WrongPayload { model: self.id.clone() }),
        }
    }

    /// Sample a point with modulus at most `cap`, area-uniform.
    pub fn sample_in_radius(&self, rng: &mut dyn rand::RngCore, cap: f64) -> Element {
        let cap = cap.min(self.rho_max);
        let u: f64 = rng.gen();
        let theta: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let r = cap * u.sqrt();
        Element::new(self.id.clone(), ElementValue::Point(Complex64::from_polar(r, theta)))
    }

    /// Sample a point with modulus in `[lo, hi)`, area-uniform on the annulus.
    pub fn sample_in_annulus(&self, rng: &mut dyn rand::RngCore, lo: f64, hi: f64) -> Option<Element> {
        let hi = hi.min(self.rho_max);
        if lo >= hi {
            return None;
        }
        let u: f64 = rng.gen();
        let r = (lo * lo + u * (hi * hi - lo * lo)).sqrt();
        let theta: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        Some(Element::new(self.id.clone(), ElementValue::Point(Complex64::from_polar(r, theta))))
    }
}

/// Möbius addition on raw disk points.
pub fn mobius_oplus(a: Complex64, b: Complex64) -> Result<Complex64> {
    let denom = Complex64::new(1.0, 0.0) + a.conj() * b;
    if denom.norm() < MIN_DENOM {
        return Err(GyroError::Numeric {
            context: "mobius addition",
            detail: format!("denominator modulus {:e} below {MIN_DENOM:e}", denom.norm()),
        });
    }
    let out = (a + b) / denom;
    if !out.re.is_finite() || !out.im.is_finite() || out.norm() >= 1.0 + DISK_GUARD {
        return Err(GyroError::Numeric {
            context: "mobius addition",
            detail: format!("result left the disk: |z| = {}", out.norm()),
        });
    }
    Ok(out)
}

impl GyroModel for MobiusDiskModel {
    fn id(&self) -> &ModelId {
        &self.id
    }

    fn carrier(&self) -> Carrier {
        Carrier::Continuous
    }

    fn describe(&self) -> String {
        format!("open complex unit disk (tau_eq = {:e}, rho_max = {})", self.tau_eq, self.rho_max)
    }

    fn identity(&self) -> Element {
        Element::new(self.id.clone(), ElementValue::Point(Complex64::new(0.0, 0.0)))
    }

    fn oplus(&self, a: &Element, b: &Element) -> Result<Element> {
        let z = mobius_oplus(self.point_of(a)?, self.point_of(b)?)?;
        Ok(Element::new(self.id.clone(), ElementValue::Point(z)))
    }

    fn ominus(&self, a: &Element) -> Result<Element> {
        let z = self.point_of(a)?;
        Ok(Element::new(self.id.clone(), ElementValue::Point(-z)))
    }

    fn equal(&self, a: &Element, b: &Element) -> Result<bool> {
        Ok(self.distance(a, b)? <= self.tau_eq)
    }

    fn distance(&self, a: &Element, b: &Element) -> Result<f64> {
        Ok((self.point_of(a)? - self.point_of(b)?).norm())
    }

    fn is_exact(&self) -> bool {
        false
    }

    fn gyr_closed_form(&self, a: &Element, b: &Element, c: &Element) -> Option<Result<Element>> {
        let go = || -> Result<Element> {
            let (a, b, c) = (self.point_of(a)?, self.point_of(b)?, self.point_of(c)?);
            let denom = Complex64::new(1.0, 0.0) + a.conj() * b;
            if denom.norm() < MIN_DENOM {
                return Err(GyroError::Numeric {
                    context: "mobius gyration",
                    detail: format!("denominator modulus {:e} below {MIN_DENOM:e}", denom.norm()),
                });
            }
            let rotation = (Complex64::new(1.0, 0.0) + a * b.conj()) / denom;
            Ok(Element::new(self.id.clone(), ElementValue::Point(rotation * c)))
        };
        Some(go())
    }

    fn sample(&self, rng: &mut dyn rand::RngCore) -> Element {
        self.sample_in_radius(rng, self.rho_max)
    }

    fn ref_norm(&self, a: &Element) -> Result<f64> {
        Ok(self.point_of(a)?.norm())
    }

    fn sample_in_ball(&self, rng: &mut dyn rand::RngCore, radius: f64) -> Option<Element> {
        if radius <= 0.0 {
            return None;
        }
        Some(self.sample_in_radius(rng, radius))
    }

    fn sample_outside_ball(&self, rng: &mut dyn rand::RngCore, radius: f64) -> Option<Element> {
        self.sample_in_annulus(rng, radius, self.rho_max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    fn z(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_and_inverse_cases() {
        let m = MobiusDiskModel::default();
        let a = m.element(z(0.3, -0.2)).unwrap();
        let sum = m.oplus(&m.identity(), &a).unwrap();
        assert!(m.equal(&sum, &a).unwrap());
        let cancel = m.oplus(&a, &m.ominus(&a).unwrap()).unwrap();
        assert!(m.equal(&cancel, &m.identity()).unwrap());
    }

    #[test]
    fn real_half_plus_half_is_point_eight() {
        let got = mobius_oplus(z(0.5, 0.0), z(0.5, 0.0)).unwrap();
        assert!((got - z(0.8, 0.0)).norm() < 1e-15);
        let zero = mobius_oplus(z(0.5, 0.0), z(-0.5, 0.0)).unwrap();
        assert!(zero.norm() < 1e-15);
    }

    #[test]
    fn boundary_points_are_rejected() {
        let m = MobiusDiskModel::default();
        assert!(matches!(m.element(z(1.0, 0.0)), Err(GyroError::OutsideDisk { .. })));
        assert!(matches!(m.element(z(0.9, 0.9)), Err(GyroError::OutsideDisk { .. })));
    }

    #[test]
    fn closed_form_matches_derived_gyration() {
        let m = MobiusDiskModel::default();
        let a = m.element(z(0.5, 0.0)).unwrap();
        let b = m.element(z(0.0, 0.3)).unwrap();
        let c = m.element(z(0.2, 0.0)).unwrap();
        let derived = m.gyr(&a, &b, &c).unwrap();
        let closed = m.gyr_closed_form(&a, &b, &c).unwrap().unwrap();
        assert!(m.distance(&derived, &closed).unwrap() < 1e-12);
    }

    #[test]
    fn mobius_norm_inequality_on_samples() {
        let m = MobiusDiskModel::default();
        let mut rng = seeded(11);
        for _ in 0..2000 {
            let a = m.sample(&mut rng);
            let b = m.sample(&mut rng);
            let (pa, pb) = (a.point().unwrap(), b.point().unwrap());
            let sum = m.oplus(&a, &b).unwrap().point().unwrap();
            let bound = (pa.norm() + pb.norm()) / (1.0 + pa.norm() * pb.norm());
            assert!(sum.norm() <= bound + 1e-12);
        }
    }

    #[test]
    fn samples_respect_radius_cap() {
        let m = MobiusDiskModel::new(1e-9, 0.5);
        let mut rng = seeded(5);
        for _ in 0..500 {
            assert!(m.sample(&mut rng).point().unwrap().norm() <= 0.5);
        }
    }
}
