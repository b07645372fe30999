//! Existence of proportional and equitable divisions.
//!
//! Every owner vector `s` of the indivisible items fixes a polygon of gain
//! pairs spanned by the divisible items. A proportional division exists iff
//! one such polygon reaches the square `[H/2, H] x [H/2, H]`, which happens
//! through its left vertex (A gets no divisible item), its right vertex (A
//! gets all of them) or through the diagonal. Each case is a knapsack:
//!
//! * right vertex: `sum(a_i (1 - s_i)) <= H/2` and `sum(b_i (1 - s_i)) >= H/2`;
//! * left vertex: `sum(b_i s_i) <= H/2` and `sum(a_i s_i) >= H/2`;
//! * diagonal: `H - (S1 + S2) <= sum(c_i s_i) <= H` with `c_i = a_i + b_i`
//!   and `S1`, `S2` the divisible totals of A and B.
//!
//! The diagonal case is also exactly the existence test for an equitable
//! division.

use crate::boolean_opt::knapsack_max;
use crate::model::Problem;

/// Which of the three knapsack tests succeeded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SystemChecks {
    pub left_vertex: bool,
    pub right_vertex: bool,
    pub diagonal: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ExistenceFlags {
    pub proportional: bool,
    pub equitable: bool,
    pub systems: SystemChecks,
}

fn half_test(weights: &[u64], values: &[u64], total: i64) -> bool {
    let cap = (total / 2) as usize;
    let best = knapsack_max(weights, values, cap).expect("capacity bounded by total");
    2 * best.value >= total
}

pub fn system_checks(p: &Problem) -> SystemChecks {
    let ind = p.indivisible_values();
    let total = p.total();
    let a: Vec<u64> = ind.iter().map(|&(a, _)| a as u64).collect();
    let b: Vec<u64> = ind.iter().map(|&(_, b)| b as u64).collect();
    SystemChecks {
        // Items handed to B: their A-values are what A gives up.
        right_vertex: half_test(&a, &b, total),
        left_vertex: half_test(&b, &a, total),
        diagonal: diagonal_test(p),
    }
}

fn diagonal_test(p: &Problem) -> bool {
    let c: Vec<u64> = p
        .indivisible_values()
        .iter()
        .map(|&(a, b)| (a + b) as u64)
        .collect();
    let (s1, s2) = p
        .divisible_values()
        .iter()
        .fold((0, 0), |(s1, s2), &(a, b)| (s1 + a, s2 + b));
    let best = knapsack_max(&c, &c, p.total() as usize).expect("capacity bounded by total");
    best.value >= p.total() - (s1 + s2)
}

pub fn existence(p: &Problem) -> ExistenceFlags {
    let systems = system_checks(p);
    ExistenceFlags {
        proportional: systems.left_vertex || systems.right_vertex || systems.diagonal,
        equitable: systems.diagonal,
        systems,
    }
}

pub fn proportional_exists(p: &Problem) -> bool {
    existence(p).proportional
}

pub fn equitable_exists(p: &Problem) -> bool {
    diagonal_test(p)
}
