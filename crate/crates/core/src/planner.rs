//! Weight-reduction chains: lower one weight at a time from `p` down to
//! `(1, .., 1)`, one expansion of abelian categories per step.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::expansion::{ExpansionContext, ExpansionError};
use crate::extquiver::{contract_at, quiver_of, QuiverError, ValuedQuiver};
use crate::gradedmod::WeightedLineData;
use crate::lgroup::{LGroupError, WeightSequence};
use crate::tubecat::PointDescriptor;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PlanError {
    #[error("step {step}: point {j} has weight 1 and cannot be reduced")]
    WeightOne { step: usize, j: usize },
    #[error("step {step}: {source}")]
    Index { step: usize, source: LGroupError },
    #[error("plan stops at {0}, not at (1,..,1)")]
    Incomplete(String),
    #[error(transparent)]
    Expansion(#[from] ExpansionError),
    #[error(transparent)]
    Quiver(#[from] QuiverError),
}

/// How to pick the point reduced at each step.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(try_from = "RawStrategy", into = "RawStrategy")]
pub enum Strategy {
    /// Largest current weight, lowest index on ties.
    #[default]
    LargestFirst,
    /// Cycle through the points, skipping those already at weight 1.
    RoundRobin,
    /// One-based point indices, in order.
    Explicit(Vec<usize>),
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RawStrategy {
    Name(String),
    List(Vec<usize>),
}

impl TryFrom<RawStrategy> for Strategy {
    type Error = String;
    fn try_from(raw: RawStrategy) -> Result<Self, String> {
        match raw {
            RawStrategy::Name(s) => Strategy::parse(&s)
                .ok_or_else(|| format!("unknown strategy {s:?} (largest_first, round_robin or a list)")),
            RawStrategy::List(l) => Ok(Strategy::Explicit(l)),
        }
    }
}

impl From<Strategy> for RawStrategy {
    fn from(s: Strategy) -> Self {
        match s {
            Strategy::Explicit(l) => RawStrategy::List(l),
            other => RawStrategy::Name(other.name().to_string()),
        }
    }
}

impl Strategy {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "largest_first" => Some(Strategy::LargestFirst),
            "round_robin" => Some(Strategy::RoundRobin),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Strategy::LargestFirst => "largest_first",
            Strategy::RoundRobin => "round_robin",
            Strategy::Explicit(_) => "explicit",
        }
    }
}

/// The exceptional points of a weight sequence, point `i` carrying a tube of
/// rank `p_i`.
pub fn exceptional_points(weights: &WeightSequence) -> Vec<PointDescriptor> {
    weights
        .as_slice()
        .iter()
        .enumerate()
        .map(|(i, &p)| PointDescriptor::exceptional(i + 1, p as usize))
        .collect()
}

/// Lowers `p_j` by one and returns the expansion relating the two tubes at
/// point `j`.
pub fn apply_step(
    state: &WeightedLineData,
    j: usize,
) -> Result<(WeightedLineData, ExpansionContext), PlanError> {
    let p = state.weights.weight(j).map_err(|source| PlanError::Index { step: 1, source })?;
    if p < 2 {
        return Err(PlanError::WeightOne { step: 1, j });
    }
    let ctx = ExpansionContext::new(&PointDescriptor::exceptional(j, p as usize))?;
    let lowered = state.weights.reduced_at(j).map_err(|source| PlanError::Index { step: 1, source })?;
    Ok((state.with_weights(lowered), ctx))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionPlan {
    pub start: WeightedLineData,
    pub steps: Vec<usize>,
    /// `chain[0]` is the start, `chain[k]` the weights after `k` steps.
    pub chain: Vec<WeightSequence>,
}

pub fn reduction_plan(data: &WeightedLineData, strategy: &Strategy) -> Result<ReductionPlan, PlanError> {
    let mut current = data.weights.clone();
    let mut chain = vec![current.clone()];
    let mut steps = Vec::new();
    let mut next_rr = 0usize;
    let n = current.len();
    let total = data.reduction_length() as usize;
    let explicit_len = match strategy {
        Strategy::Explicit(list) => list.len(),
        _ => total,
    };
    for step in 1..=explicit_len {
        let w = current.as_slice();
        let j = match strategy {
            Strategy::LargestFirst => {
                let max = *w.iter().max().expect("non-trivial plan has a point");
                w.iter().position(|&p| p == max).expect("max exists") + 1
            }
            Strategy::RoundRobin => {
                let k = (0..n)
                    .map(|o| (next_rr + o) % n)
                    .find(|&i| w[i] >= 2)
                    .expect("some weight above 1 remains");
                next_rr = k + 1;
                k + 1
            }
            Strategy::Explicit(list) => list[step - 1],
        };
        let p = current.weight(j).map_err(|source| PlanError::Index { step, source })?;
        if p < 2 {
            return Err(PlanError::WeightOne { step, j });
        }
        current = current.reduced_at(j).map_err(|source| PlanError::Index { step, source })?;
        steps.push(j);
        chain.push(current.clone());
    }
    if current.as_slice().iter().any(|&p| p != 1) {
        return Err(PlanError::Incomplete(current.to_string()));
    }
    Ok(ReductionPlan { start: data.clone(), steps, chain })
}

impl ReductionPlan {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// The expansion undone at each step.
    pub fn contexts(&self) -> Vec<ExpansionContext> {
        self.steps
            .iter()
            .zip(&self.chain)
            .map(|(&j, w)| {
                let p = w.as_slice()[j - 1] as usize;
                ExpansionContext::new(&PointDescriptor::exceptional(j, p)).expect("plan steps have p_j >= 2")
            })
            .collect()
    }

    /// The Ext-quiver of the exceptional simples before the first step and
    /// after each step, obtained by successive contractions.
    pub fn quiver_trace(&self) -> Result<Vec<ValuedQuiver>, PlanError> {
        let mut q = quiver_of(&exceptional_points(&self.start.weights));
        let mut out = vec![q.clone()];
        for ctx in self.contexts() {
            q = contract_at(&q, &ctx)?;
            out.push(q.clone());
        }
        Ok(out)
    }

    /// Total number of simples in the exceptional tubes along the chain.
    pub fn simple_counts(&self) -> Vec<i64> {
        self.chain.iter().map(|w| w.as_slice().iter().sum()).collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "start": self.start,
            "steps": self.steps,
            "chain": self.chain,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use proptest::prelude::{any, prop, prop_assert, prop_assert_eq, proptest};
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn data(w: &[i64]) -> WeightedLineData {
        WeightedLineData::standard(w.to_vec(), FieldSpec::Prime(101)).unwrap()
    }

    #[test]
    fn largest_first_on_2_3_5() {
        let plan = reduction_plan(&data(&[2, 3, 5]), &Strategy::LargestFirst).unwrap();
        assert_eq!(plan.len(), 7);
        assert_eq!(plan.steps, vec![3, 3, 2, 3, 1, 2, 3]);
        assert_eq!(plan.chain.last().unwrap().as_slice(), &[1, 1, 1]);
    }

    #[test]
    fn trivial_and_explicit_plans() {
        assert!(reduction_plan(&data(&[1, 1]), &Strategy::LargestFirst).unwrap().is_empty());
        let plan = reduction_plan(&data(&[2]), &Strategy::Explicit(vec![1])).unwrap();
        assert_eq!(plan.steps, vec![1]);
        assert_eq!(
            reduction_plan(&data(&[2, 2]), &Strategy::Explicit(vec![1, 1])),
            Err(PlanError::WeightOne { step: 2, j: 1 })
        );
        assert!(matches!(
            reduction_plan(&data(&[2, 2]), &Strategy::Explicit(vec![1])),
            Err(PlanError::Incomplete(_))
        ));
        assert!(matches!(
            reduction_plan(&data(&[2, 2]), &Strategy::Explicit(vec![3, 1])),
            Err(PlanError::Index { step: 1, .. })
        ));
    }

    #[test]
    fn single_steps() {
        let (d, ctx) = apply_step(&data(&[2, 3]), 2).unwrap();
        assert_eq!(d.weights.as_slice(), &[2, 2]);
        assert_eq!(ctx.big_rank(), 3);
        let (d, _) = apply_step(&data(&[2, 3]), 1).unwrap();
        assert_eq!(d.weights.as_slice(), &[1, 3]);
        assert!(matches!(apply_step(&data(&[1, 3]), 1), Err(PlanError::WeightOne { j: 1, .. })));
    }

    #[test]
    fn round_robin_order() {
        let plan = reduction_plan(&data(&[2, 3, 5]), &Strategy::RoundRobin).unwrap();
        assert_eq!(plan.steps, vec![1, 2, 3, 2, 3, 3, 3]);
    }

    #[test]
    fn quiver_chain_ends_in_loops() {
        let plan = reduction_plan(&data(&[2, 3, 4]), &Strategy::LargestFirst).unwrap();
        let trace = plan.quiver_trace().unwrap();
        let last = trace.last().unwrap();
        assert_eq!(last.vertex_count(), 3);
        for (v, _) in last.vertices() {
            assert!(!last.valuation(v, v).is_none(), "{v} has a loop");
        }
        assert_eq!(last.arrow_count(), 3);
        let counts: Vec<usize> = trace.iter().map(|q| q.vertex_count()).collect();
        assert!(counts.windows(2).all(|w| w[0] == w[1] + 1));
    }

    #[test]
    fn strategy_json() {
        let s: Strategy = serde_json::from_str("\"round_robin\"").unwrap();
        assert_eq!(s, Strategy::RoundRobin);
        let s: Strategy = serde_json::from_str("[2,1]").unwrap();
        assert_eq!(s, Strategy::Explicit(vec![2, 1]));
        assert_eq!(serde_json::to_string(&Strategy::LargestFirst).unwrap(), "\"largest_first\"");
        assert!(serde_json::from_str::<Strategy>("\"smallest\"").is_err());
    }

    #[test]
    fn plan_json_shape() {
        let plan = reduction_plan(&data(&[2]), &Strategy::LargestFirst).unwrap();
        assert_eq!(
            plan.to_json(),
            json!({"start": {"weights": [2], "points": [[1, 0]], "field": "F_101"}, "steps": [1], "chain": [[2], [1]]})
        );
    }

    proptest! {
        #[test]
        fn every_strategy_has_the_same_length(w in prop::collection::vec(1i64..6, 0..4), seed in any::<u64>()) {
            let d = data(&w);
            let total = d.reduction_length() as usize;
            let a = reduction_plan(&d, &Strategy::LargestFirst).unwrap();
            let b = reduction_plan(&d, &Strategy::RoundRobin).unwrap();
            let mut list: Vec<usize> = a.steps.clone();
            list.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
            let c = reduction_plan(&d, &Strategy::Explicit(list)).unwrap();
            prop_assert_eq!(a.len(), total);
            prop_assert_eq!(b.len(), total);
            prop_assert_eq!(c.len(), total);
            for plan in [&a, &b, &c] {
                for pair in plan.chain.windows(2) {
                    prop_assert!(pair[1].as_slice().iter().zip(pair[0].as_slice()).all(|(x, y)| x <= y));
                }
            }
        }
    }
}
