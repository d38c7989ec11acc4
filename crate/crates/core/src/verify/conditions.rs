//! The nine neighborhood-base conditions for a (model, family) pair.
//!
//! Each condition quantifies universally over family members and carrier
//! elements and existentially over a witness member. Witnesses are searched
//! largest-first down the enumeration; the first verified candidate is
//! reported. Finite carriers and subset families are checked exhaustively;
//! balls are verified on seeded samples and reported as sampled passes.
//! On a complete family a search that refutes every candidate is a definitive
//! failure; on a truncated family it is budget exhaustion, never failure.
//!
//! The conditions, for an enumeration `𝒰` of identity neighborhoods:
//!
//!  1. ∀U ∃V: V⊕V ⊆ U
//!  2. ∀U ∀x∈U ∃V: x⊕V ⊆ U
//!  3. ∀U ∀x ∃V: ⊖x⊕(V⊕x) ⊆ U
//!  4. ∀U,V ∃W: W ⊆ U∩V
//!  5. ∀U ∀a,b ∃V: gyr[a,b]V ⊆ U
//!  6. ∀U ∀b ∃V: ⋃_{v∈V} gyr[v,b]V ⊆ U
//!  7. ∀x≠e ∃U: x ∉ U⊟U, checked as (x⊕U) ∩ U = ∅
//!  8. ∀U ∀x ∃V: V⊞x ⊆ x⊕U and x⊕V ⊆ x⊞U
//!  9. ∀U ∃V: ⊖V ⊆ U

use serde_json::{json, Value};

use crate::element::Element;
use crate::error::{GyroError, Result};
use crate::hm::{Neighborhood, NeighborhoodKind};
use crate::model::GyroModel;
use crate::rng::{substream, SeededRng};
use crate::verify::family::BaseFamily;
use crate::verify::report::{
    CheckMode, Counterexample, ConditionReport, ConditionStatus,
};

/// Sampled draws per universally-quantified carrier element on non-finite
/// models.
pub const OUTER_SAMPLES: usize = 16;

/// Radius cap for sampled outer carrier elements on metric models; keeps the
/// required witness radii within the family's truncation depth.
const OUTER_ELEMENT_RADIUS: f64 = 0.9;

/// Shrink factor for sampled "x ∈ U" outer draws on ball neighborhoods, so a
/// witness for the sampled point exists within the truncated family.
const OUTER_MEMBER_SHRINK: f64 = 0.875;

pub(crate) enum Find {
    /// `members[index]` verified.
    Hit { index: usize },
    /// Every candidate produced a counterexample; definitive on a complete
    /// family. Holds the last (smallest) candidate's violation.
    Refuted { index: usize, violating: Value },
    /// Truncated enumeration ran out without a verified candidate.
    Exhausted,
}

pub(crate) struct Searcher<'a> {
    pub model: &'a dyn GyroModel,
    pub members: &'a [Neighborhood],
    pub complete: bool,
    pub budget: u64,
    pub checks: u64,
    pub sampled: bool,
}

impl<'a> Searcher<'a> {
    pub fn new(
        model: &'a dyn GyroModel,
        members: &'a [Neighborhood],
        complete: bool,
        budget: u64,
    ) -> Searcher<'a> {
        Searcher { model, members, complete, budget, checks: 0, sampled: false }
    }

    /// Verifies `pred` for every member of `v`: exhaustively on subsets,
    /// on `budget` samples for balls. Returns the violation, if any.
    fn all_members(
        &mut self,
        rng: &mut SeededRng,
        v: &Neighborhood,
        mut pred: impl FnMut(&dyn GyroModel, &Element) -> Result<Option<Value>>,
    ) -> Result<Option<Value>> {
        match v.kind() {
            NeighborhoodKind::Subset { members } => {
                let elems = self.model.elements().expect("subset implies finite carrier");
                for &i in members {
                    self.checks += 1;
                    if let Some(violation) = pred(self.model, &elems[i])? {
                        return Ok(Some(violation));
                    }
                }
                Ok(None)
            }
            NeighborhoodKind::Ball { .. } => {
                self.sampled = true;
                for _ in 0..self.budget {
                    let x = v.sample_member(self.model, rng);
                    self.checks += 1;
                    if let Some(violation) = pred(self.model, &x)? {
                        return Ok(Some(violation));
                    }
                }
                Ok(None)
            }
        }
    }

    /// Pairwise variant of `all_members`.
    fn all_pairs(
        &mut self,
        rng: &mut SeededRng,
        v: &Neighborhood,
        mut pred: impl FnMut(&dyn GyroModel, &Element, &Element) -> Result<Option<Value>>,
    ) -> Result<Option<Value>> {
        match v.kind() {
            NeighborhoodKind::Subset { members } => {
                let elems = self.model.elements().expect("subset implies finite carrier");
                for &i in members {
                    for &j in members {
                        self.checks += 1;
                        if let Some(violation) = pred(self.model, &elems[i], &elems[j])? {
                            return Ok(Some(violation));
                        }
                    }
                }
                Ok(None)
            }
            NeighborhoodKind::Ball { .. } => {
                self.sampled = true;
                for _ in 0..self.budget {
                    let x = v.sample_member(self.model, rng);
                    let y = v.sample_member(self.model, rng);
                    self.checks += 1;
                    if let Some(violation) = pred(self.model, &x, &y)? {
                        return Ok(Some(violation));
                    }
                }
                Ok(None)
            }
        }
    }

    /// Largest-first witness scan.
    fn scan(
        &mut self,
        rng: &mut SeededRng,
        mut verify: impl FnMut(&mut Self, &mut SeededRng, &Neighborhood) -> Result<Option<Value>>,
    ) -> Result<Find> {
        let mut last: Option<(usize, Value)> = None;
        for index in 0..self.members.len() {
            let candidate = self.members[index].clone();
            match verify(self, rng, &candidate)? {
                None => return Ok(Find::Hit { index }),
                Some(violating) => last = Some((index, violating)),
            }
        }
        match last {
            Some((index, violating)) if self.complete => Ok(Find::Refuted { index, violating }),
            _ => Ok(Find::Exhausted),
        }
    }

    /// Condition 1 witness: `V ⊕ V ⊆ U`.
    pub fn oplus_closure(&mut self, rng: &mut SeededRng, u: &Neighborhood) -> Result<Find> {
        self.scan(rng, |s, rng, v| {
            s.all_pairs(rng, v, |m, x, y| {
                let sum = m.oplus(x, y)?;
                Ok(if u.contains(m, &sum)? {
                    None
                } else {
                    Some(json!({"v1": x, "v2": y, "sum": sum}))
                })
            })
        })
    }

    /// Condition 2 witness, conjoined over `xs ⊆ U`: `x ⊕ V ⊆ U`.
    pub fn translate(
        &mut self,
        rng: &mut SeededRng,
        xs: &[Element],
        u: &Neighborhood,
    ) -> Result<Find> {
        self.scan(rng, |s, rng, v| {
            s.all_members(rng, v, |m, el| {
                for x in xs {
                    let shifted = m.oplus(x, el)?;
                    if !u.contains(m, &shifted)? {
                        return Ok(Some(json!({"x": x, "v": el, "x_oplus_v": shifted})));
                    }
                }
                Ok(None)
            })
        })
    }

    /// Condition 3 witness, conjoined over `xs`: `⊖x ⊕ (V ⊕ x) ⊆ U`.
    pub fn conjugate(
        &mut self,
        rng: &mut SeededRng,
        xs: &[Element],
        u: &Neighborhood,
    ) -> Result<Find> {
        self.scan(rng, |s, rng, v| {
            s.all_members(rng, v, |m, el| {
                for x in xs {
                    let moved = m.oplus(&m.ominus(x)?, &m.oplus(el, x)?)?;
                    if !u.contains(m, &moved)? {
                        return Ok(Some(json!({"x": x, "v": el, "conjugated": moved})));
                    }
                }
                Ok(None)
            })
        })
    }

    /// Condition 4 witness: `W ⊆ U ∩ V`.
    pub fn intersect(
        &mut self,
        rng: &mut SeededRng,
        u: &Neighborhood,
        v0: &Neighborhood,
    ) -> Result<Find> {
        self.scan(rng, |s, rng, w| {
            s.all_members(rng, w, |m, el| {
                Ok(if u.contains(m, el)? && v0.contains(m, el)? {
                    None
                } else {
                    Some(json!({"w": el}))
                })
            })
        })
    }

    /// Condition 5 witness, conjoined over pairs: `gyr[a,b]V ⊆ U`.
    pub fn gyration(
        &mut self,
        rng: &mut SeededRng,
        pairs: &[(Element, Element)],
        u: &Neighborhood,
    ) -> Result<Find> {
        self.scan(rng, |s, rng, v| {
            s.all_members(rng, v, |m, el| {
                for (a, b) in pairs {
                    let g = m.gyr(a, b, el)?;
                    if !u.contains(m, &g)? {
                        return Ok(Some(json!({"a": a, "b": b, "v": el, "gyr": g})));
                    }
                }
                Ok(None)
            })
        })
    }

    /// Condition 6 witness, conjoined over `bs`: `⋃_{v∈V} gyr[v,b]V ⊆ U`.
    pub fn gyration_union(
        &mut self,
        rng: &mut SeededRng,
        bs: &[Element],
        u: &Neighborhood,
    ) -> Result<Find> {
        self.scan(rng, |s, rng, v| {
            s.all_pairs(rng, v, |m, x, y| {
                for b in bs {
                    let g = m.gyr(x, b, y)?;
                    if !u.contains(m, &g)? {
                        return Ok(Some(json!({"v": x, "b": b, "v2": y, "gyr": g})));
                    }
                }
                Ok(None)
            })
        })
    }

    /// Condition 7 witness: `(x ⊕ U) ∩ U = ∅`, equivalent to `x ∉ U ⊟ U`.
    pub fn separating(&mut self, rng: &mut SeededRng, x: &Element) -> Result<Find> {
        self.scan(rng, |s, rng, u| {
            s.all_members(rng, u, |m, el| {
                let shifted = m.oplus(x, el)?;
                Ok(if u.contains(m, &shifted)? {
                    Some(json!({"u": el, "x_oplus_u": shifted}))
                } else {
                    None
                })
            })
        })
    }

    /// Condition 7's dual closure for the extension: `V ⊟ V ⊆ U`.
    pub fn cominus_closure(&mut self, rng: &mut SeededRng, u: &Neighborhood) -> Result<Find> {
        self.scan(rng, |s, rng, v| {
            s.all_pairs(rng, v, |m, x, y| {
                let d = m.cominus(x, y)?;
                Ok(if u.contains(m, &d)? {
                    None
                } else {
                    Some(json!({"v1": x, "v2": y, "cominus": d}))
                })
            })
        })
    }

    /// Condition 8 witness, conjoined over `xs`: `V ⊞ x ⊆ x ⊕ U` and
    /// `x ⊕ V ⊆ x ⊞ U`. Memberships translate through the cancellation laws:
    /// `y ∈ x⊕U ⟺ ⊖x⊕y ∈ U` and `y ∈ x⊞U ⟺ ⊖(⊖y⊕x) ∈ U`.
    pub fn coplus_translate(
        &mut self,
        rng: &mut SeededRng,
        xs: &[Element],
        u: &Neighborhood,
    ) -> Result<Find> {
        self.scan(rng, |s, rng, v| {
            s.all_members(rng, v, |m, el| {
                for x in xs {
                    let left = m.coplus(el, x)?;
                    let left_in = m.oplus(&m.ominus(x)?, &left)?;
                    if !u.contains(m, &left_in)? {
                        return Ok(Some(json!({
                            "x": x, "v": el, "side": "coplus-left", "value": left
                        })));
                    }
                    let right = m.oplus(x, el)?;
                    let right_in = m.ominus(&m.oplus(&m.ominus(&right)?, x)?)?;
                    if !u.contains(m, &right_in)? {
                        return Ok(Some(json!({
                            "x": x, "v": el, "side": "oplus-right", "value": right
                        })));
                    }
                }
                Ok(None)
            })
        })
    }

    /// Condition 9 witness: `⊖V ⊆ U`.
    pub fn ominus_closure(&mut self, rng: &mut SeededRng, u: &Neighborhood) -> Result<Find> {
        self.scan(rng, |s, rng, v| {
            s.all_members(rng, v, |m, el| {
                let neg = m.ominus(el)?;
                Ok(if u.contains(m, &neg)? {
                    None
                } else {
                    Some(json!({"v": el, "ominus": neg}))
                })
            })
        })
    }
}

/// Outer universal neighborhoods: the whole family when complete, the larger
/// half when truncated (the smaller half stays available as witnesses).
pub(crate) fn outer_neighborhoods(members: &[Neighborhood], complete: bool) -> &[Neighborhood] {
    if complete {
        members
    } else {
        &members[..members.len().div_ceil(2)]
    }
}

/// Outer universal carrier elements: the whole finite carrier, or seeded
/// draws capped to a moderate radius on metric models.
pub(crate) fn outer_elements(
    model: &dyn GyroModel,
    rng: &mut SeededRng,
    sampled_flag: &mut bool,
) -> Vec<Element> {
    match model.elements() {
        Some(elems) => elems,
        None => {
            *sampled_flag = true;
            (0..OUTER_SAMPLES)
                .map(|_| {
                    model
                        .sample_in_ball(rng, OUTER_ELEMENT_RADIUS)
                        .unwrap_or_else(|| model.sample(rng))
                })
                .collect()
        }
    }
}

/// Outer draws of points belonging to `u`.
fn outer_members_of(
    model: &dyn GyroModel,
    u: &Neighborhood,
    rng: &mut SeededRng,
    sampled_flag: &mut bool,
) -> Result<Vec<Element>> {
    match u.kind() {
        NeighborhoodKind::Subset { members } => {
            let elems = model.elements().expect("subset implies finite carrier");
            Ok(members.iter().map(|&i| elems[i].clone()).collect())
        }
        NeighborhoodKind::Ball { radius } => {
            *sampled_flag = true;
            let r = radius.to_f64() * OUTER_MEMBER_SHRINK;
            Ok((0..OUTER_SAMPLES)
                .map(|_| model.sample_in_ball(rng, r).unwrap_or_else(|| model.identity()))
                .collect())
        }
    }
}

struct Driver<'a> {
    searcher: Searcher<'a>,
    report: ConditionReport,
    done: bool,
}

impl<'a> Driver<'a> {
    fn new(
        model: &'a dyn GyroModel,
        members: &'a [Neighborhood],
        complete: bool,
        budget: u64,
        condition: u8,
    ) -> Driver<'a> {
        Driver {
            searcher: Searcher::new(model, members, complete, budget),
            report: ConditionReport {
                condition,
                status: ConditionStatus::Pass,
                mode: CheckMode::Exact,
                witness_count: 0,
                witnesses: Vec::new(),
                counterexample: None,
                checks_performed: 0,
            },
            done: false,
        }
    }

    /// Folds one outer instance's search outcome into the report. Stops the
    /// drive at the first non-pass verdict.
    fn absorb(&mut self, outer: Value, find: Find) {
        if self.done {
            return;
        }
        match find {
            Find::Hit { index } => {
                let witness = serde_json::to_value(&self.searcher.members[index])
                    .expect("neighborhood serializes");
                self.report.record_witness(outer, witness);
            }
            Find::Refuted { index, violating } => {
                let candidate = serde_json::to_value(&self.searcher.members[index])
                    .expect("neighborhood serializes");
                self.report.status = ConditionStatus::Fail;
                self.report.counterexample = Some(Counterexample {
                    inputs: json!({"outer": outer, "candidate": candidate}),
                    violating,
                });
                self.done = true;
            }
            Find::Exhausted => {
                self.report.status = ConditionStatus::ExhaustedBudget;
                self.done = true;
            }
        }
    }

    fn finish(mut self) -> ConditionReport {
        self.report.checks_performed = self.searcher.checks;
        self.report.mode =
            if self.searcher.sampled { CheckMode::Sampled } else { CheckMode::Exact };
        self.report
    }
}

fn outer_json(u: &Neighborhood) -> Value {
    serde_json::to_value(u).expect("neighborhood serializes")
}

/// Checks one of the nine conditions for `(model, family)`.
pub fn check_condition(
    model: &dyn GyroModel,
    family: &BaseFamily,
    id: u8,
    budget: u64,
    seed: u64,
) -> Result<ConditionReport> {
    if !(1..=9).contains(&id) {
        return Err(GyroError::usage(format!("condition id must lie in 1..=9, got {id}")));
    }
    if budget == 0 {
        return Err(GyroError::usage("budget must be at least 1"));
    }
    let members = family.members(model)?;
    let complete = family.is_complete();
    let mut rng = substream(seed, &format!("condition-{id}"));
    let mut drv = Driver::new(model, &members, complete, budget, id);
    let outer = outer_neighborhoods(&members, complete).to_vec();
    if !complete {
        drv.searcher.sampled = true;
    }

    match id {
        1 => {
            for u in &outer {
                let find = drv.searcher.oplus_closure(&mut rng, u)?;
                drv.absorb(outer_json(u), find);
                if drv.done {
                    break;
                }
            }
        }
        2 => {
            'outer2: for u in &outer {
                let xs =
                    outer_members_of(model, u, &mut rng, &mut drv.searcher.sampled)?;
                for x in &xs {
                    let find = drv.searcher.translate(&mut rng, std::slice::from_ref(x), u)?;
                    drv.absorb(json!({"u": outer_json(u), "x": x}), find);
                    if drv.done {
                        break 'outer2;
                    }
                }
            }
        }
        3 => {
            let xs = outer_elements(model, &mut rng, &mut drv.searcher.sampled);
            'outer3: for u in &outer {
                for x in &xs {
                    let find = drv.searcher.conjugate(&mut rng, std::slice::from_ref(x), u)?;
                    drv.absorb(json!({"u": outer_json(u), "x": x}), find);
                    if drv.done {
                        break 'outer3;
                    }
                }
            }
        }
        4 => {
            'outer4: for u in &outer {
                for v0 in &outer {
                    let find = drv.searcher.intersect(&mut rng, u, v0)?;
                    drv.absorb(json!({"u": outer_json(u), "v": outer_json(v0)}), find);
                    if drv.done {
                        break 'outer4;
                    }
                }
            }
        }
        5 => {
            let xs = outer_elements(model, &mut rng, &mut drv.searcher.sampled);
            'outer5: for u in &outer {
                for a in &xs {
                    for b in &xs {
                        let pair = [(a.clone(), b.clone())];
                        let find = drv.searcher.gyration(&mut rng, &pair, u)?;
                        drv.absorb(json!({"u": outer_json(u), "a": a, "b": b}), find);
                        if drv.done {
                            break 'outer5;
                        }
                    }
                }
            }
        }
        6 => {
            let xs = outer_elements(model, &mut rng, &mut drv.searcher.sampled);
            'outer6: for u in &outer {
                for b in &xs {
                    let find =
                        drv.searcher.gyration_union(&mut rng, std::slice::from_ref(b), u)?;
                    drv.absorb(json!({"u": outer_json(u), "b": b}), find);
                    if drv.done {
                        break 'outer6;
                    }
                }
            }
        }
        7 => {
            let e = model.identity();
            for x in outer_elements(model, &mut rng, &mut drv.searcher.sampled) {
                if model.equal(&x, &e)? {
                    continue;
                }
                let find = drv.searcher.separating(&mut rng, &x)?;
                drv.absorb(json!({"x": x}), find);
                if drv.done {
                    break;
                }
            }
        }
        8 => {
            let xs = outer_elements(model, &mut rng, &mut drv.searcher.sampled);
            'outer8: for u in &outer {
                for x in &xs {
                    let find =
                        drv.searcher.coplus_translate(&mut rng, std::slice::from_ref(x), u)?;
                    drv.absorb(json!({"u": outer_json(u), "x": x}), find);
                    if drv.done {
                        break 'outer8;
                    }
                }
            }
        }
        9 => {
            for u in &outer {
                let find = drv.searcher.ominus_closure(&mut rng, u)?;
                drv.absorb(outer_json(u), find);
                if drv.done {
                    break;
                }
            }
        }
        _ => unreachable!("validated above"),
    }
    Ok(drv.finish())
}

/// All nine conditions, in order.
pub fn check_all_conditions(
    model: &dyn GyroModel,
    family: &BaseFamily,
    budget: u64,
    seed: u64,
) -> Result<Vec<ConditionReport>> {
    (1..=9).map(|id| check_condition(model, family, id, budget, seed)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{CayleyGyrogroup, MobiusDiskModel};
    use crate::verify::report::all_conditions_passed;

    #[test]
    fn singleton_family_passes_everything_exactly() {
        let m = CayleyGyrogroup::zn(5).unwrap();
        let reports = check_all_conditions(&m, &BaseFamily::Singleton, 100, 0).unwrap();
        assert_eq!(reports.len(), 9);
        assert!(all_conditions_passed(&reports), "{reports:#?}");
        for r in &reports {
            assert_eq!(r.mode, CheckMode::Exact);
            assert!(r.witness_count > 0);
            assert_eq!(r.witnesses[0].witness, serde_json::json!({"kind":"subset","members":[0]}));
        }
    }

    #[test]
    fn full_lattice_passes_on_z4() {
        let m = CayleyGyrogroup::zn(4).unwrap();
        let reports = check_all_conditions(&m, &BaseFamily::FiniteLattice, 100, 0).unwrap();
        assert!(all_conditions_passed(&reports), "{reports:#?}");
    }

    #[test]
    fn broken_explicit_family_fails_not_exhausts() {
        let m = CayleyGyrogroup::zn(4).unwrap();
        // One set {0,1}: 1⊕1 = 2 escapes it, and no smaller member exists.
        let family = BaseFamily::Explicit { sets: vec![vec![0, 1]] };
        let r = check_condition(&m, &family, 1, 100, 0).unwrap();
        assert_eq!(r.status, ConditionStatus::Fail);
        assert!(r.counterexample.is_some());
        let ce = r.counterexample.unwrap();
        assert_eq!(ce.violating["sum"], serde_json::json!(2));
    }

    #[test]
    fn mobius_dyadic_balls_pass_sampled() {
        let m = MobiusDiskModel::default();
        let family = BaseFamily::dyadic_default();
        let reports = check_all_conditions(&m, &family, 200, 0).unwrap();
        assert!(all_conditions_passed(&reports), "{reports:#?}");
        for r in &reports {
            assert_eq!(r.mode, CheckMode::Sampled);
        }
    }

    #[test]
    fn condition_reports_serialize_with_kebab_status() {
        let m = CayleyGyrogroup::zn(3).unwrap();
        let r = check_condition(&m, &BaseFamily::Singleton, 1, 10, 0).unwrap();
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains("\"status\":\"pass\""), "{json}");
        assert!(json.contains("\"checks-performed\""), "{json}");
    }
}
