//! The axiom and identity verification engine.
//!
//! Finite carriers are checked exhaustively regardless of the sample budget;
//! everything else draws seeded samples. Equality of the two sides of an
//! identity is the model's own equality on exact carriers and a residual
//! comparison against the configured tolerance otherwise.

use crate::element::Element;
use crate::error::Result;
use crate::model::{equal_within, GyroModel};
use crate::report::{Failure, IdentityReport};
use crate::rng::substream;

#[derive(Debug, Clone)]
pub struct CheckConfig {
    /// Sampled tuples per checked equation on non-finite carriers.
    pub samples: u64,
    pub seed: u64,
    /// Residual tolerance for non-exact models.
    pub tolerance: f64,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig { samples: 10_000, seed: 0, tolerance: 1e-9 }
    }
}

/// One claim about a tuple: the two sides must (or must not) coincide.
struct Assertion {
    lhs: Element,
    rhs: Element,
    expect_equal: bool,
}

fn eq(lhs: Element, rhs: Element) -> Assertion {
    Assertion { lhs, rhs, expect_equal: true }
}

type EvalFn = fn(&dyn GyroModel, &[Element]) -> Result<Vec<Assertion>>;

struct SubCheck {
    arity: usize,
    eval: EvalFn,
}

struct CheckDef {
    name: &'static str,
    subs: &'static [SubCheck],
}

// --- axioms -----------------------------------------------------------------

fn g1_identity(m: &dyn GyroModel, t: &[Element]) -> Result<Vec<Assertion>> {
    let x = &t[0];
    let e = m.identity();
    Ok(vec![eq(m.oplus(&e, x)?, x.clone()), eq(m.oplus(x, &e)?, x.clone())])
}

fn g2_inverses(m: &dyn GyroModel, t: &[Element]) -> Result<Vec<Assertion>> {
    let x = &t[0];
    let e = m.identity();
    let neg = m.ominus(x)?;
    Ok(vec![eq(m.oplus(&neg, x)?, e.clone()), eq(m.oplus(x, &neg)?, e)])
}

fn g3_gyroassociativity(m: &dyn GyroModel, t: &[Element]) -> Result<Vec<Assertion>> {
    let (a, b, c) = (&t[0], &t[1], &t[2]);
    let lhs = m.oplus(a, &m.oplus(b, c)?)?;
    let rhs = m.oplus(&m.oplus(a, b)?, &m.gyr(a, b, c)?)?;
    Ok(vec![eq(lhs, rhs)])
}

fn g3_automorphism(m: &dyn GyroModel, t: &[Element]) -> Result<Vec<Assertion>> {
    let (a, b, x, y) = (&t[0], &t[1], &t[2], &t[3]);
    let lhs = m.gyr(a, b, &m.oplus(x, y)?)?;
    let rhs = m.oplus(&m.gyr(a, b, x)?, &m.gyr(a, b, y)?)?;
    Ok(vec![eq(lhs, rhs)])
}

fn g3_injectivity(m: &dyn GyroModel, t: &[Element]) -> Result<Vec<Assertion>> {
    let (a, b, c1, c2) = (&t[0], &t[1], &t[2], &t[3]);
    if m.equal(c1, c2)? {
        return Ok(vec![]);
    }
    Ok(vec![Assertion { lhs: m.gyr(a, b, c1)?, rhs: m.gyr(a, b, c2)?, expect_equal: false }])
}

fn g4_left_loop(m: &dyn GyroModel, t: &[Element]) -> Result<Vec<Assertion>> {
    let (a, b, z) = (&t[0], &t[1], &t[2]);
    let lhs = m.gyr(&m.oplus(a, b)?, b, z)?;
    Ok(vec![eq(lhs, m.gyr(a, b, z)?)])
}

const AXIOMS: &[CheckDef] = &[
    CheckDef { name: "G1-identity", subs: &[SubCheck { arity: 1, eval: g1_identity }] },
    CheckDef { name: "G2-inverses", subs: &[SubCheck { arity: 1, eval: g2_inverses }] },
    CheckDef {
        name: "G3-gyroautomorphism",
        subs: &[
            SubCheck { arity: 3, eval: g3_gyroassociativity },
            SubCheck { arity: 4, eval: g3_automorphism },
            SubCheck { arity: 4, eval: g3_injectivity },
        ],
    },
    CheckDef { name: "G4-left-loop", subs: &[SubCheck { arity: 3, eval: g4_left_loop }] },
];

// --- identities -------------------------------------------------------------

fn inversion_involution(m: &dyn GyroModel, t: &[Element]) -> Result<Vec<Assertion>> {
    let a = &t[0];
    Ok(vec![eq(m.ominus(&m.ominus(a)?)?, a.clone())])
}

fn left_cancellation(m: &dyn GyroModel, t: &[Element]) -> Result<Vec<Assertion>> {
    let (a, b) = (&t[0], &t[1]);
    Ok(vec![eq(m.oplus(&m.ominus(a)?, &m.oplus(a, b)?)?, b.clone())])
}

fn gyrator_identity(m: &dyn GyroModel, t: &[Element]) -> Result<Vec<Assertion>> {
    let (a, b, c) = (&t[0], &t[1], &t[2]);
    let derived = m.gyr(a, b, c)?;
    let mut asserts = vec![eq(
        m.oplus(&m.oplus(a, b)?, &derived)?,
        m.oplus(a, &m.oplus(b, c)?)?,
    )];
    if let Some(closed) = m.gyr_closed_form(a, b, c) {
        asserts.push(eq(derived, closed?));
    }
    Ok(asserts)
}

fn inverse_sum_gyration(m: &dyn GyroModel, t: &[Element]) -> Result<Vec<Assertion>> {
    let (a, b) = (&t[0], &t[1]);
    let lhs = m.ominus(&m.oplus(a, b)?)?;
    let rhs = m.gyr(a, b, &m.osub(&m.ominus(b)?, a)?)?;
    Ok(vec![eq(lhs, rhs)])
}

fn mixed_cancellation(m: &dyn GyroModel, t: &[Element]) -> Result<Vec<Assertion>> {
    let (a, b, c) = (&t[0], &t[1], &t[2]);
    let na = m.ominus(a)?;
    let lhs = m.oplus(
        &m.oplus(&na, b)?,
        &m.gyr(&na, b, &m.oplus(&m.ominus(b)?, c)?)?,
    )?;
    Ok(vec![eq(lhs, m.oplus(&na, c)?)])
}

// Even property: negating both arguments preserves the gyration. (Swapping
// them as well would force every gyration to be an involution, which already
// fails on the Möbius disk.)
fn gyration_even_property(m: &dyn GyroModel, t: &[Element]) -> Result<Vec<Assertion>> {
    let (a, b, c) = (&t[0], &t[1], &t[2]);
    Ok(vec![eq(m.gyr(a, b, c)?, m.gyr(&m.ominus(a)?, &m.ominus(b)?, c)?)])
}

fn gyration_inversive_symmetry(m: &dyn GyroModel, t: &[Element]) -> Result<Vec<Assertion>> {
    let (a, b, c) = (&t[0], &t[1], &t[2]);
    Ok(vec![eq(m.gyr(a, b, &m.gyr(b, a, c)?)?, c.clone())])
}

fn left_cancellation_dual(m: &dyn GyroModel, t: &[Element]) -> Result<Vec<Assertion>> {
    let (a, b) = (&t[0], &t[1]);
    Ok(vec![eq(m.oplus(a, &m.oplus(&m.ominus(a)?, b)?)?, b.clone())])
}

fn right_cancellation_coplus(m: &dyn GyroModel, t: &[Element]) -> Result<Vec<Assertion>> {
    let (a, b) = (&t[0], &t[1]);
    Ok(vec![eq(m.coplus(&m.osub(b, a)?, a)?, b.clone())])
}

fn right_cancellation_cominus(m: &dyn GyroModel, t: &[Element]) -> Result<Vec<Assertion>> {
    let (a, b) = (&t[0], &t[1]);
    Ok(vec![eq(m.oplus(&m.cominus(b, a)?, a)?, b.clone())])
}

fn cogyro_inverse_property(m: &dyn GyroModel, t: &[Element]) -> Result<Vec<Assertion>> {
    let (a, b) = (&t[0], &t[1]);
    let lhs = m.ominus(&m.coplus(a, b)?)?;
    let rhs = m.coplus(&m.ominus(b)?, &m.ominus(a)?)?;
    Ok(vec![eq(lhs, rhs)])
}

fn coaddition_decomposition(m: &dyn GyroModel, t: &[Element]) -> Result<Vec<Assertion>> {
    let (x, y) = (&t[0], &t[1]);
    let inner = m.oplus(&m.ominus(&m.osub(x, y)?)?, x)?;
    Ok(vec![eq(m.coplus(x, y)?, m.oplus(x, &inner)?)])
}

const IDENTITIES: &[CheckDef] = &[
    CheckDef { name: "inversion-involution", subs: &[SubCheck { arity: 1, eval: inversion_involution }] },
    CheckDef { name: "left-cancellation", subs: &[SubCheck { arity: 2, eval: left_cancellation }] },
    CheckDef { name: "gyrator-identity", subs: &[SubCheck { arity: 3, eval: gyrator_identity }] },
    CheckDef { name: "inverse-sum-gyration", subs: &[SubCheck { arity: 2, eval: inverse_sum_gyration }] },
    CheckDef { name: "mixed-cancellation", subs: &[SubCheck { arity: 3, eval: mixed_cancellation }] },
    CheckDef { name: "gyration-even-property", subs: &[SubCheck { arity: 3, eval: gyration_even_property }] },
    CheckDef {
        name: "gyration-inversive-symmetry",
        subs: &[SubCheck { arity: 3, eval: gyration_inversive_symmetry }],
    },
    CheckDef { name: "left-cancellation-dual", subs: &[SubCheck { arity: 2, eval: left_cancellation_dual }] },
    CheckDef {
        name: "right-cancellation-coplus",
        subs: &[SubCheck { arity: 2, eval: right_cancellation_coplus }],
    },
    CheckDef {
        name: "right-cancellation-cominus",
        subs: &[SubCheck { arity: 2, eval: right_cancellation_cominus }],
    },
    CheckDef { name: "cogyro-inverse-property", subs: &[SubCheck { arity: 2, eval: cogyro_inverse_property }] },
    CheckDef {
        name: "coaddition-decomposition",
        subs: &[SubCheck { arity: 2, eval: coaddition_decomposition }],
    },
];

// --- engine -----------------------------------------------------------------

/// Checks (G1)-(G4). One report per axiom.
pub fn check_axioms(model: &dyn GyroModel, cfg: &CheckConfig) -> Result<Vec<IdentityReport>> {
    AXIOMS.iter().map(|def| run_check(model, def, cfg)).collect()
}

/// Checks the derived identity suite: cancellation laws, gyration symmetry
/// properties, the right cancellation laws for the cooperation, the
/// cogyroautomorphic inverse property, and the coaddition decomposition.
pub fn check_identities(model: &dyn GyroModel, cfg: &CheckConfig) -> Result<Vec<IdentityReport>> {
    IDENTITIES.iter().map(|def| run_check(model, def, cfg)).collect()
}

fn run_check(model: &dyn GyroModel, def: &CheckDef, cfg: &CheckConfig) -> Result<IdentityReport> {
    let mut report = IdentityReport::new(def.name);
    match model.elements() {
        Some(elems) => {
            for sub in def.subs {
                for tuple in Tuples::new(&elems, sub.arity) {
                    evaluate(model, sub, &tuple, cfg, &mut report)?;
                }
            }
        }
        None => {
            let mut rng = substream(cfg.seed, def.name);
            for sub in def.subs {
                for _ in 0..cfg.samples {
                    let tuple: Vec<Element> =
                        (0..sub.arity).map(|_| model.sample(&mut rng)).collect();
                    evaluate(model, sub, &tuple, cfg, &mut report)?;
                }
            }
        }
    }
    Ok(report)
}

fn evaluate(
    model: &dyn GyroModel,
    sub: &SubCheck,
    tuple: &[Element],
    cfg: &CheckConfig,
    report: &mut IdentityReport,
) -> Result<()> {
    report.samples += 1;
    for assertion in (sub.eval)(model, tuple)? {
        let same = equal_within(model, &assertion.lhs, &assertion.rhs, cfg.tolerance)?;
        if same != assertion.expect_equal {
            report.record_failure(Failure {
                inputs: tuple.to_vec(),
                residual: model.distance(&assertion.lhs, &assertion.rhs)?,
                lhs: assertion.lhs,
                rhs: assertion.rhs,
            });
        }
    }
    Ok(())
}

/// Odometer over all `arity`-tuples of a finite carrier.
struct Tuples<'a> {
    elems: &'a [Element],
    idx: Vec<usize>,
    done: bool,
}

impl<'a> Tuples<'a> {
    fn new(elems: &'a [Element], arity: usize) -> Tuples<'a> {
        Tuples { elems, idx: vec![0; arity], done: elems.is_empty() }
    }
}

impl Iterator for Tuples<'_> {
    type Item = Vec<Element>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let tuple = self.idx.iter().map(|&i| self.elems[i].clone()).collect();
        let mut pos = self.idx.len();
        loop {
            if pos == 0 {
                self.done = true;
                break;
            }
            pos -= 1;
            self.idx[pos] += 1;
            if self.idx[pos] < self.elems.len() {
                break;
            }
            self.idx[pos] = 0;
        }
        Some(tuple)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{CayleyGyrogroup, MobiusDiskModel};
    use crate::report::all_passed;

    #[test]
    fn cyclic_groups_satisfy_all_axioms() {
        let z5 = CayleyGyrogroup::zn(5).unwrap();
        let reports = check_axioms(&z5, &CheckConfig::default()).unwrap();
        assert_eq!(reports.len(), 4);
        assert!(all_passed(&reports), "{reports:?}");
    }

    #[test]
    fn cyclic_groups_satisfy_all_identities() {
        let z6 = CayleyGyrogroup::zn(6).unwrap();
        let reports = check_identities(&z6, &CheckConfig::default()).unwrap();
        assert_eq!(reports.len(), 12);
        assert!(all_passed(&reports));
    }

    #[test]
    fn mutated_table_fails_with_witness() {
        // z4 with row 1 entries at columns 1 and 2 swapped; still passes the
        // structural loader but is not a gyrogroup.
        let rows = vec![
            vec![0, 1, 2, 3],
            vec![1, 3, 2, 0],
            vec![2, 3, 0, 1],
            vec![3, 0, 1, 2],
        ];
        let broken = CayleyGyrogroup::from_rows("z4-mutated", &rows).unwrap();
        let reports = check_axioms(&broken, &CheckConfig::default()).unwrap();
        assert!(!all_passed(&reports));
        let failing = reports.iter().find(|r| !r.passed()).unwrap();
        assert!(!failing.failures.is_empty());
        assert!(!failing.failures[0].inputs.is_empty());
    }

    #[test]
    fn mobius_sampled_axioms_pass() {
        let m = MobiusDiskModel::default();
        let cfg = CheckConfig { samples: 500, seed: 0, tolerance: 1e-9 };
        let reports = check_axioms(&m, &cfg).unwrap();
        assert!(all_passed(&reports), "{reports:?}");
    }

    #[test]
    fn mobius_sampled_identities_pass() {
        let m = MobiusDiskModel::default();
        let cfg = CheckConfig { samples: 500, seed: 1, tolerance: 1e-9 };
        let reports = check_identities(&m, &cfg).unwrap();
        assert!(all_passed(&reports), "{reports:?}");
    }

    #[test]
    fn reports_are_reproducible_for_a_seed() {
        let m = MobiusDiskModel::default();
        let cfg = CheckConfig { samples: 64, seed: 9, tolerance: 1e-9 };
        let a = serde_json::to_string(&check_axioms(&m, &cfg).unwrap()).unwrap();
        let b = serde_json::to_string(&check_axioms(&m, &cfg).unwrap()).unwrap();
        assert_eq!(a, b);
    }
}
