//! Undominated gain pairs reachable by distributing only the indivisible
//! items.
//!
//! With `t_i = 1` meaning B receives item `i`, B's best gain for every total
//! `k` of A's values handed to B is an equality-constrained knapsack. One
//! dynamic-programming pass covers all `k`; a right-to-left sweep then drops
//! every pair whose B-gain does not beat everything to its right.

use crate::boolean_opt::equality_family;
use crate::model::{Owner, Problem};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParetoPoint {
    /// Gain of A.
    pub x: i64,
    /// Gain of B.
    pub y: i64,
    /// Owner of every indivisible item, in problem order.
    pub owners: Vec<Owner>,
}

/// Undominated indivisible gain pairs, sorted by increasing `x` (and so
/// decreasing `y`).
pub fn undominated_points(p: &Problem) -> Vec<ParetoPoint> {
    undominated_points_of(&p.indivisible_values())
}

pub fn undominated_points_of(items: &[(i64, i64)]) -> Vec<ParetoPoint> {
    let weights: Vec<u64> = items.iter().map(|&(a, _)| a as u64).collect();
    let values: Vec<i64> = items.iter().map(|&(_, b)| b).collect();
    let total_a: i64 = items.iter().map(|&(a, _)| a).sum();
    let family = equality_family(&weights, &values, total_a as usize)
        .expect("indivisible totals are bounded by the validated problem total");

    // k = A's value handed to B; A keeps total_a - k.
    let mut points: Vec<ParetoPoint> = family
        .feasible_targets()
        .map(|k| {
            let to_b = family.witness(k).expect("feasible target has a witness");
            ParetoPoint {
                x: total_a - k as i64,
                y: family.value(k).expect("feasible target has a value"),
                owners: to_b.into_iter().map(|b| Owner::from_bool(!b)).collect(),
            }
        })
        .collect();
    points.sort_by_key(|pt| pt.x);

    let mut kept: Vec<ParetoPoint> = Vec::new();
    for pt in points.into_iter().rev() {
        if kept.last().is_none_or(|best| pt.y > best.y) {
            kept.push(pt);
        }
    }
    kept.reverse();
    kept
}
