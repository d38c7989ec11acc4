//! Identity neighborhoods and the basic neighborhoods `O(U, ε)` of the
//! step-function extension.
//!
//! A neighborhood is a finitely decidable membership predicate: an explicit
//! subset of a finite carrier, or a metric ball around the identity. The
//! basic extension neighborhood `O(U, ε)` holds the step functions whose
//! values violate `U` on a set of measure strictly less than `ε`; with
//! rational breakpoints that measure is an exact rational, so membership is
//! an exact decision.

use rand::Rng;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::element::{Element, ModelId};
use crate::error::{GyroError, Result};
use crate::hm::step::{canonical, StepFunction};
use crate::model::GyroModel;
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq)]
pub enum NeighborhoodKind {
    /// Explicit subset of a finite carrier, by element index. Sorted.
    Subset { members: Vec<usize> },
    /// Open ball `{x : ref_norm(x) < radius}` around the identity.
    Ball { radius: Rational },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Neighborhood {
    model: ModelId,
    kind: NeighborhoodKind,
}

impl Neighborhood {
    pub fn subset(model: &dyn GyroModel, mut members: Vec<usize>) -> Result<Neighborhood> {
        members.sort_unstable();
        members.dedup();
        let order = match model.elements() {
            Some(elems) => elems.len(),
            None => {
                return Err(GyroError::usage(format!(
                    "subset neighborhoods need a finite carrier; `{}` is not finite",
                    model.id()
                )))
            }
        };
        if members.binary_search(&0).is_err() {
            return Err(GyroError::usage("a neighborhood must contain the identity (index 0)"));
        }
        if let Some(&bad) = members.iter().find(|&&i| i >= order) {
            return Err(GyroError::usage(format!(
                "subset member {bad} out of range for order {order}"
            )));
        }
        Ok(Neighborhood { model: model.id().clone(), kind: NeighborhoodKind::Subset { members } })
    }

    pub fn ball(model: &dyn GyroModel, radius: Rational) -> Result<Neighborhood> {
        if radius <= Rational::ZERO {
            return Err(GyroError::usage("ball radius must be positive"));
        }
        Ok(Neighborhood { model: model.id().clone(), kind: NeighborhoodKind::Ball { radius } })
    }

    /// The whole carrier as a neighborhood.
    pub fn whole(model: &dyn GyroModel) -> Neighborhood {
        let kind = match model.elements() {
            Some(elems) => NeighborhoodKind::Subset { members: (0..elems.len()).collect() },
            None => NeighborhoodKind::Ball { radius: Rational::ONE },
        };
        Neighborhood { model: model.id().clone(), kind }
    }

    pub fn model(&self) -> &ModelId {
        &self.model
    }

    pub fn kind(&self) -> &NeighborhoodKind {
        &self.kind
    }

    pub fn members(&self) -> Option<&[usize]> {
        match &self.kind {
            NeighborhoodKind::Subset { members } => Some(members),
            NeighborhoodKind::Ball { .. } => None,
        }
    }

    /// Total, deterministic membership test.
    pub fn contains(&self, model: &dyn GyroModel, x: &Element) -> Result<bool> {
        if self.model != *model.id() {
            return Err(GyroError::CrossModel {
                expected: self.model.clone(),
                found: model.id().clone(),
            });
        }
        model.guard(x)?;
        match &self.kind {
            NeighborhoodKind::Subset { members } => {
                let i = x
                    .index()
                    .ok_or_else(|| GyroError::WrongPayload { model: self.model.clone() })?;
                Ok(members.binary_search(&i).is_ok())
            }
            NeighborhoodKind::Ball { radius } => Ok(model.ref_norm(x)? < radius.to_f64()),
        }
    }

    /// Draws a member. Falls back to the identity when the region cannot be
    /// sampled any other way.
    pub fn sample_member(&self, model: &dyn GyroModel, rng: &mut dyn rand::RngCore) -> Element {
        match &self.kind {
            NeighborhoodKind::Subset { members } => {
                let elems = model.elements().expect("subset neighborhoods have finite carriers");
                let i = rng.gen_range(0..members.len());
                elems[members[i]].clone()
            }
            NeighborhoodKind::Ball { radius } => model
                .sample_in_ball(rng, radius.to_f64())
                .unwrap_or_else(|| model.identity()),
        }
    }

    /// Draws an element outside the neighborhood, when the complement is
    /// nonempty and sampleable.
    pub fn sample_non_member(
        &self,
        model: &dyn GyroModel,
        rng: &mut dyn rand::RngCore,
    ) -> Option<Element> {
        match &self.kind {
            NeighborhoodKind::Subset { members } => {
                let elems = model.elements().expect("subset neighborhoods have finite carriers");
                let complement: Vec<usize> =
                    (0..elems.len()).filter(|i| members.binary_search(i).is_err()).collect();
                if complement.is_empty() {
                    return None;
                }
                let i = rng.gen_range(0..complement.len());
                Some(elems[complement[i]].clone())
            }
            NeighborhoodKind::Ball { radius } => model.sample_outside_ball(rng, radius.to_f64()),
        }
    }

    pub fn describe(&self) -> String {
        match &self.kind {
            NeighborhoodKind::Subset { members } => {
                let items: Vec<String> = members.iter().map(|i| i.to_string()).collect();
                format!("{{{}}}", items.join(","))
            }
            NeighborhoodKind::Ball { radius } => format!("ball({radius})"),
        }
    }
}

impl Serialize for Neighborhood {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match &self.kind {
            NeighborhoodKind::Subset { members } => {
                let mut s = serializer.serialize_struct("Neighborhood", 2)?;
                s.serialize_field("kind", "subset")?;
                s.serialize_field("members", members)?;
                s.end()
            }
            NeighborhoodKind::Ball { radius } => {
                let mut s = serializer.serialize_struct("Neighborhood", 2)?;
                s.serialize_field("kind", "ball")?;
                s.serialize_field("radius", radius)?;
                s.end()
            }
        }
    }
}

/// Basic neighborhood `O(U, ε)` of the identity in the extension.
#[derive(Debug, Clone, Serialize)]
pub struct HmNeighborhood {
    pub base: Neighborhood,
    pub epsilon: Rational,
}

impl HmNeighborhood {
    pub fn new(base: Neighborhood, epsilon: Rational) -> Result<HmNeighborhood> {
        if epsilon <= Rational::ZERO {
            return Err(GyroError::usage("epsilon must be positive"));
        }
        Ok(HmNeighborhood { base, epsilon })
    }

    /// Exact membership: violation measure strictly below epsilon.
    pub fn contains(&self, model: &dyn GyroModel, f: &StepFunction) -> Result<bool> {
        Ok(violation_measure(model, f, &self.base)? < self.epsilon)
    }

    pub fn describe(&self) -> String {
        format!("O({}, {})", self.base.describe(), self.epsilon)
    }
}

/// Exact measure of `{r : f(r) ∉ U}`: the sum of the lengths of the intervals
/// whose value fails the membership test.
pub fn violation_measure(
    model: &dyn GyroModel,
    f: &StepFunction,
    hood: &Neighborhood,
) -> Result<Rational> {
    if f.model() != model.id() {
        return Err(GyroError::CrossModel {
            expected: model.id().clone(),
            found: f.model().clone(),
        });
    }
    let mut acc = Rational::ZERO;
    for (lo, hi, value) in f.intervals() {
        if !hood.contains(model, value)? {
            acc = acc.add(&hi.sub(lo)?)?;
        }
    }
    Ok(acc)
}

/// Constructs a random member of `O(U, ε)`: a step function whose violating
/// set has exact measure strictly below `ε`. Violating intervals carry values
/// drawn from the complement of `U` when that is sampleable; otherwise the
/// function simply takes all its values inside `U`.
pub fn sample_step_in(
    model: &dyn GyroModel,
    hood: &HmNeighborhood,
    rng: &mut dyn rand::RngCore,
) -> Result<StepFunction> {
    const GRID: i64 = 1 << 10;
    let cap = hood.epsilon.min(Rational::ONE);
    let violator = hood.base.sample_non_member(model, rng);
    let length = match &violator {
        Some(_) => {
            let j = rng.gen_range(0..GRID);
            cap.mul(&Rational::new(j, GRID)?)?
        }
        None => Rational::ZERO,
    };
    // Offset of the violating block, dyadic within the remaining room.
    let room = Rational::ONE.sub(&length)?;
    let offset = room.mul(&Rational::new(rng.gen_range(0..=GRID), GRID)?)?;
    let end = offset.add(&length)?;
    let mut breakpoints = vec![Rational::ZERO];
    let mut values = Vec::new();
    let two = Rational::TWO;
    // leading member region, split once for texture
    let mid = offset.div(&two)?;
    for cut in [mid, offset] {
        breakpoints.push(cut);
        values.push(hood.base.sample_member(model, rng));
    }
    // violating block
    breakpoints.push(end);
    match &violator {
        Some(v) => values.push(v.clone()),
        None => values.push(hood.base.sample_member(model, rng)),
    }
    // trailing member region, split once
    let tail_mid = end.add(&Rational::ONE.sub(&end)?.div(&two)?)?;
    for cut in [tail_mid, Rational::ONE] {
        breakpoints.push(cut);
        values.push(hood.base.sample_member(model, rng));
    }
    let f = canonical(model, breakpoints, values)?;
    debug_assert!(hood.contains(model, &f)?);
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::element::ElementValue;
    use crate::models::CayleyGyrogroup;
    use crate::rng::seeded;

    fn z4() -> CayleyGyrogroup {
        CayleyGyrogroup::zn(4).unwrap()
    }

    fn step(model: &CayleyGyrogroup, cuts: &[(i64, i64)], vals: &[usize]) -> StepFunction {
        let mut breakpoints = vec![Rational::ZERO];
        breakpoints.extend(cuts.iter().map(|&(p, q)| Rational::new(p, q).unwrap()));
        breakpoints.push(Rational::ONE);
        let values = vals
            .iter()
            .map(|&i| Element::new(model.id().clone(), ElementValue::Index(i)))
            .collect();
        StepFunction::new(model, breakpoints, values).unwrap()
    }

    #[test]
    fn whole_carrier_never_violates() {
        let m = z4();
        let f = step(&m, &[(1, 2)], &[1, 2]);
        let u = Neighborhood::whole(&m);
        assert_eq!(violation_measure(&m, &f, &u).unwrap(), Rational::ZERO);
    }

    #[test]
    fn violation_is_the_sum_of_failing_interval_lengths() {
        let m = z4();
        let f = step(&m, &[(1, 2)], &[1, 2]);
        // U contains value 1 but not value 2.
        let u = Neighborhood::subset(&m, vec![0, 1]).unwrap();
        assert_eq!(violation_measure(&m, &f, &u).unwrap(), Rational::new(1, 2).unwrap());
        // constant function with value outside U violates everywhere
        let c = step(&m, &[], &[2]);
        assert_eq!(violation_measure(&m, &c, &u).unwrap(), Rational::ONE);
    }

    #[test]
    fn membership_is_a_strict_inequality() {
        let m = z4();
        let u = Neighborhood::subset(&m, vec![0, 1]).unwrap();
        let c = step(&m, &[], &[2]); // violation 1
        let whole = HmNeighborhood::new(u.clone(), Rational::TWO).unwrap();
        assert!(whole.contains(&m, &c).unwrap());
        let exact = HmNeighborhood::new(u.clone(), Rational::ONE).unwrap();
        assert!(!exact.contains(&m, &c).unwrap());
        let f = step(&m, &[(1, 2)], &[1, 2]); // violation 1/2
        let tight = HmNeighborhood::new(u, Rational::new(1, 2).unwrap()).unwrap();
        assert!(!tight.contains(&m, &f).unwrap());
    }

    #[test]
    fn neighborhood_must_contain_identity() {
        let m = z4();
        assert!(Neighborhood::subset(&m, vec![1, 2]).is_err());
        assert!(Neighborhood::subset(&m, vec![0, 9]).is_err());
    }

    #[test]
    fn sampled_members_of_o_belong_to_o() {
        let m = z4();
        let mut rng = seeded(4);
        let u = Neighborhood::subset(&m, vec![0, 3]).unwrap();
        for eps in [Rational::new(1, 4).unwrap(), Rational::new(1, 2).unwrap(), Rational::TWO] {
            let hood = HmNeighborhood::new(u.clone(), eps).unwrap();
            for _ in 0..200 {
                let f = sample_step_in(&m, &hood, &mut rng).unwrap();
                assert!(hood.contains(&m, &f).unwrap());
            }
        }
    }

    #[test]
    fn serialization_shape() {
        let m = z4();
        let u = Neighborhood::subset(&m, vec![0, 2]).unwrap();
        assert_eq!(serde_json::to_string(&u).unwrap(), r#"{"kind":"subset","members":[0,2]}"#);
        let b = Neighborhood::ball(&m, Rational::new(1, 4).unwrap()).unwrap();
        assert_eq!(serde_json::to_string(&b).unwrap(), r#"{"kind":"ball","radius":"1/4"}"#);
    }
}
