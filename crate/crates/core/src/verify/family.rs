//! Candidate families of identity neighborhoods.
//!
//! A family enumerates its members in decreasing size, deterministically for
//! a fixed configuration. Complete families (every member is materialized)
//! support definitive failure verdicts; truncated families (dyadic balls cut
//! off at a smallest radius) only support witnesses and inconclusive
//! exhaustion.

use serde::{Deserialize, Serialize};

use crate::error::{GyroError, Result};
use crate::hm::Neighborhood;
use crate::model::GyroModel;
use crate::rational::Rational;

/// Largest finite order for which the full subset lattice is enumerable.
pub const MAX_LATTICE_ORDER: usize = 12;

pub const DEFAULT_BALL_DEPTH: u32 = 12;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum BaseFamily {
    /// Just `{e}`; finite models only.
    Singleton,
    /// Every subset containing the identity; finite models of order at most
    /// `MAX_LATTICE_ORDER`.
    FiniteLattice,
    /// Balls of radius `2^-k` for `k = 1..=k_max` under the reference metric.
    DyadicBalls {
        #[serde(rename = "k-max")]
        k_max: u32,
    },
    /// An explicit list of subsets, each containing the identity; finite
    /// models only. Used for negative controls and custom bases.
    Explicit { sets: Vec<Vec<usize>> },
}

impl BaseFamily {
    pub fn dyadic_default() -> BaseFamily {
        BaseFamily::DyadicBalls { k_max: DEFAULT_BALL_DEPTH }
    }

    /// Whether the enumeration materializes the whole family. On a complete
    /// family an exhausted witness search is a refutation; on a truncated one
    /// it is inconclusive.
    pub fn is_complete(&self) -> bool {
        !matches!(self, BaseFamily::DyadicBalls { .. })
    }

    pub fn describe(&self) -> String {
        match self {
            BaseFamily::Singleton => "singleton".into(),
            BaseFamily::FiniteLattice => "finite-lattice".into(),
            BaseFamily::DyadicBalls { k_max } => format!("dyadic-balls(k<={k_max})"),
            BaseFamily::Explicit { sets } => format!("explicit({} sets)", sets.len()),
        }
    }

    /// Members in decreasing size.
    pub fn members(&self, model: &dyn GyroModel) -> Result<Vec<Neighborhood>> {
        match self {
            BaseFamily::Singleton => {
                require_finite(model, "singleton")?;
                Ok(vec![Neighborhood::subset(model, vec![0])?])
            }
            BaseFamily::FiniteLattice => {
                let order = require_finite(model, "finite-lattice")?;
                if order > MAX_LATTICE_ORDER {
                    return Err(GyroError::usage(format!(
                        "finite-lattice family supports order <= {MAX_LATTICE_ORDER}, got {order}"
                    )));
                }
                let mut masks: Vec<u32> = (0..(1u32 << (order - 1))).map(|m| (m << 1) | 1).collect();
                masks.sort_by_key(|m| (std::cmp::Reverse(m.count_ones()), *m));
                masks
                    .into_iter()
                    .map(|mask| {
                        let members =
                            (0..order).filter(|i| mask & (1 << i) != 0).collect::<Vec<_>>();
                        Neighborhood::subset(model, members)
                    })
                    .collect()
            }
            BaseFamily::DyadicBalls { k_max } => {
                if *k_max == 0 || *k_max > 40 {
                    return Err(GyroError::usage("dyadic ball depth must lie in 1..=40"));
                }
                (1..=*k_max).map(|k| Neighborhood::ball(model, Rational::dyadic(k)?)).collect()
            }
            BaseFamily::Explicit { sets } => {
                require_finite(model, "explicit")?;
                if sets.is_empty() {
                    return Err(GyroError::usage("explicit family needs at least one set"));
                }
                let mut ordered = sets.clone();
                ordered.sort_by_key(|s| (std::cmp::Reverse(s.len()), s.clone()));
                ordered.into_iter().map(|s| Neighborhood::subset(model, s)).collect()
            }
        }
    }
}

fn require_finite(model: &dyn GyroModel, kind: &str) -> Result<usize> {
    match model.elements() {
        Some(elems) => Ok(elems.len()),
        None => Err(GyroError::usage(format!(
            "{kind} family needs a finite carrier; `{}` is not finite",
            model.id()
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{CayleyGyrogroup, MobiusDiskModel};

    #[test]
    fn lattice_enumerates_decreasing_and_contains_identity() {
        let m = CayleyGyrogroup::zn(4).unwrap();
        let members = BaseFamily::FiniteLattice.members(&m).unwrap();
        assert_eq!(members.len(), 8);
        let sizes: Vec<usize> = members.iter().map(|v| v.members().unwrap().len()).collect();
        for w in sizes.windows(2) {
            assert!(w[0] >= w[1]);
        }
        assert_eq!(members[0].members().unwrap(), &[0, 1, 2, 3]);
        assert_eq!(members[7].members().unwrap(), &[0]);
    }

    #[test]
    fn dyadic_balls_shrink() {
        let m = MobiusDiskModel::default();
        let members = BaseFamily::DyadicBalls { k_max: 4 }.members(&m).unwrap();
        assert_eq!(members.len(), 4);
        assert_eq!(members[0].describe(), "ball(1/2)");
        assert_eq!(members[3].describe(), "ball(1/16)");
    }

    #[test]
    fn family_config_round_trips_as_json() {
        for (family, json) in [
            (BaseFamily::Singleton, r#"{"kind":"singleton"}"#),
            (BaseFamily::FiniteLattice, r#"{"kind":"finite-lattice"}"#),
            (BaseFamily::DyadicBalls { k_max: 10 }, r#"{"kind":"dyadic-balls","k-max":10}"#),
            (
                BaseFamily::Explicit { sets: vec![vec![0, 1]] },
                r#"{"kind":"explicit","sets":[[0,1]]}"#,
            ),
        ] {
            assert_eq!(serde_json::to_string(&family).unwrap(), json);
            let back: BaseFamily = serde_json::from_str(json).unwrap();
            assert_eq!(back, family);
        }
    }

    #[test]
    fn mismatched_family_and_model_error() {
        let mob = MobiusDiskModel::default();
        assert!(BaseFamily::Singleton.members(&mob).is_err());
        assert!(BaseFamily::FiniteLattice.members(&mob).is_err());
    }
}
