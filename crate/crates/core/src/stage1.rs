//! Stage 1: first-match rule grading over the (a, m) space.

use crate::error::ValidationError;
use crate::level::InterventionLevel;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Identifier of the rule that fired. The six rules are exhaustive under
/// first-match: every (a, m) in [1, 5]^2 lands on exactly one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RuleId {
    R1,
    R2,
    R3,
    R4,
    R5,
    R6,
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// Boundary values of the rule table. The defaults were tuned heuristically
/// during rollout, so they are configuration rather than constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RuleThresholds {
    /// R1: both dimensions at or below this trigger hard.
    pub low_hard: f64,
    /// R2: both dimensions at or above this trigger soft.
    pub high_soft: f64,
    /// R3: dynamism at or above this (with low affect) triggers soft.
    pub high_m: f64,
    /// R3/R4/R5: "low" cutoff for either dimension.
    pub low_soft: f64,
}

impl Default for RuleThresholds {
    fn default() -> Self {
        RuleThresholds {
            low_hard: 1.0,
            high_soft: 4.5,
            high_m: 4.0,
            low_soft: 2.0,
        }
    }
}

impl RuleThresholds {
    pub fn validate(&self) -> Result<(), ValidationError> {
        let ordered = self.low_hard < self.low_soft
            && self.low_soft < self.high_m
            && self.high_m < self.high_soft
            && self.high_soft <= 5.0;
        if ordered {
            Ok(())
        } else {
            Err(ValidationError::Thresholds)
        }
    }
}

/// Classify one entry's (a, m) pair. Rules are tried R1 through R6 and the
/// first hit wins; all comparisons are inclusive, so boundary values fire
/// the stricter rule.
pub fn classify(
    a: f64,
    m: f64,
    thresholds: &RuleThresholds,
) -> Result<(RuleId, InterventionLevel), ValidationError> {
    for (field, value) in [("a", a), ("m", m)] {
        if !(1.0..=5.0).contains(&value) {
            return Err(ValidationError::OutOfRange {
                field,
                value,
                min: 1.0,
                max: 5.0,
            });
        }
    }
    let t = thresholds;
    let hit = if a <= t.low_hard && m <= t.low_hard {
        (RuleId::R1, InterventionLevel::Hard)
    } else if a >= t.high_soft && m >= t.high_soft {
        (RuleId::R2, InterventionLevel::Soft)
    } else if m >= t.high_m && a <= t.low_soft {
        (RuleId::R3, InterventionLevel::Soft)
    } else if a <= t.low_soft && m <= t.low_soft {
        (RuleId::R4, InterventionLevel::Soft)
    } else if a <= t.low_soft || m <= t.low_soft {
        (RuleId::R5, InterventionLevel::Soft)
    } else {
        (RuleId::R6, InterventionLevel::None)
    };
    Ok(hit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use InterventionLevel::*;

    fn run(a: f64, m: f64) -> (RuleId, InterventionLevel) {
        classify(a, m, &RuleThresholds::default()).unwrap()
    }

    #[test]
    fn rule_table_examples() {
        assert_eq!(run(4.6, 4.7), (RuleId::R2, Soft));
        assert_eq!(run(1.0, 1.0), (RuleId::R1, Hard)); // boundary inclusive
        assert_eq!(run(3.0, 3.0), (RuleId::R6, None));
        assert_eq!(run(1.8, 4.3), (RuleId::R3, Soft));
        assert_eq!(run(2.0, 2.0), (RuleId::R4, Soft)); // R4 fires before R5
        assert_eq!(run(2.0, 4.8), (RuleId::R3, Soft)); // R3 precedes R5
    }

    #[test]
    fn out_of_range_rejected() {
        let t = RuleThresholds::default();
        assert!(classify(0.99, 3.0, &t).is_err());
        assert!(classify(3.0, 5.01, &t).is_err());
        assert!(classify(f64::NAN, 3.0, &t).is_err());
    }

    #[test]
    fn threshold_ordering_validated() {
        assert!(RuleThresholds::default().validate().is_ok());
        let bad = RuleThresholds {
            low_hard: 2.5,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }

    fn dim() -> impl Strategy<Value = f64> {
        1.0f64..=5.0
    }

    proptest! {
        // Exhaustiveness is implied by classify returning a value for every
        // in-range pair; the interesting properties are which rule wins.
        #[test]
        fn first_match_prefers_r4_over_r5(a in 1.0f64..=2.0, m in 1.0f64..=2.0) {
            let (rule, level) = run(a, m);
            prop_assert!(rule == RuleId::R4 || rule == RuleId::R1);
            if rule == RuleId::R4 {
                prop_assert_eq!(level, Soft);
            }
        }

        #[test]
        fn no_none_while_either_dimension_low(a in dim(), m in dim()) {
            prop_assume!(a <= 2.0 || m <= 2.0);
            let (rule, level) = run(a, m);
            prop_assert_ne!(rule, RuleId::R6);
            prop_assert_ne!(rule, RuleId::R2);
            prop_assert!(level >= Soft);
        }

        #[test]
        fn r2_never_yields_hard(a in dim(), m in dim()) {
            let (rule, level) = run(a, m);
            if rule == RuleId::R2 {
                prop_assert_eq!(level, Soft);
            }
        }
    }
}
