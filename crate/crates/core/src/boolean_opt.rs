//! 0/1 dynamic programs with witness reconstruction.
//!
//! [`equality_family`] solves, for every target `k` up to a capacity at once,
//!
//! ```text
//! maximize  sum(values[i] * t[i])   subject to  sum(weights[i] * t[i]) = k,  t[i] in {0, 1}
//! ```
//!
//! with the recursion `F(k, p) = max(F(k, p - 1), F(k - w_p, p - 1) + v_p)`.
//! Unreachable targets carry no value at all rather than a large negative
//! number, so no arithmetic ever touches them. [`knapsack_max`] is the usual
//! `<=` knapsack built on the same table layout.
//!
//! Both keep one decision bit per (item, target) cell and backtrack from the
//! last item. On ties the item is left out, which makes witnesses
//! deterministic.

use bitvec::vec::BitVec;
use thiserror::Error;

/// Largest capacity accepted by the solvers.
pub const MAX_CAPACITY: usize = 4_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DpError {
    #[error("capacity {0} exceeds the supported maximum {MAX_CAPACITY}")]
    CapacityTooLarge(usize),
    #[error("{weights} weights but {values} values")]
    LengthMismatch { weights: usize, values: usize },
}

/// One decision bit per (item, target) cell.
#[derive(Debug, Clone)]
struct DecisionTable {
    width: usize,
    bits: BitVec,
}

impl DecisionTable {
    fn new(items: usize, width: usize) -> Self {
        DecisionTable {
            width,
            bits: BitVec::repeat(false, items * width),
        }
    }

    fn set(&mut self, item: usize, k: usize) {
        self.bits.set(item * self.width + k, true);
    }

    fn taken(&self, item: usize, k: usize) -> bool {
        self.bits[item * self.width + k]
    }

    fn backtrack(&self, weights: &[u64], mut k: usize) -> Vec<bool> {
        let mut picked = vec![false; weights.len()];
        for p in (0..weights.len()).rev() {
            if self.taken(p, k) {
                picked[p] = true;
                k -= weights[p] as usize;
            }
        }
        picked
    }
}

fn check_inputs(weights: usize, values: usize, cap: usize) -> Result<(), DpError> {
    if weights != values {
        return Err(DpError::LengthMismatch { weights, values });
    }
    if cap > MAX_CAPACITY {
        return Err(DpError::CapacityTooLarge(cap));
    }
    Ok(())
}

/// Optimal values and witnesses for every equality target `0..=cap`.
#[derive(Debug, Clone)]
pub struct EqualityFamily {
    weights: Vec<u64>,
    best: Vec<Option<i64>>,
    decisions: DecisionTable,
}

impl EqualityFamily {
    pub fn capacity(&self) -> usize {
        self.best.len() - 1
    }

    /// Optimal value for target `k`, or `None` when no selection weighs
    /// exactly `k`.
    pub fn value(&self, k: usize) -> Option<i64> {
        self.best.get(k).copied().flatten()
    }

    pub fn is_feasible(&self, k: usize) -> bool {
        self.value(k).is_some()
    }

    /// Selection vector attaining [`value`](Self::value) for target `k`.
    pub fn witness(&self, k: usize) -> Option<Vec<bool>> {
        self.value(k)?;
        Some(self.decisions.backtrack(&self.weights, k))
    }

    /// Feasible targets in increasing order.
    pub fn feasible_targets(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.best.len()).filter(move |&k| self.best[k].is_some())
    }
}

pub fn equality_family(
    weights: &[u64],
    values: &[i64],
    cap: usize,
) -> Result<EqualityFamily, DpError> {
    check_inputs(weights.len(), values.len(), cap)?;
    let width = cap + 1;
    let mut best: Vec<Option<i64>> = vec![None; width];
    best[0] = Some(0);
    let mut decisions = DecisionTable::new(weights.len(), width);
    for (p, (&w, &v)) in weights.iter().zip(values).enumerate() {
        let w = w as usize;
        if w > cap {
            continue;
        }
        // Descending k so best[k - w] still refers to the previous item row.
        for k in (w..width).rev() {
            let Some(prev) = best[k - w] else { continue };
            let candidate = prev + v;
            if best[k].is_none_or(|cur| candidate > cur) {
                best[k] = Some(candidate);
                decisions.set(p, k);
            }
        }
    }
    Ok(EqualityFamily {
        weights: weights.to_vec(),
        best,
        decisions,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnapsackResult {
    pub value: i64,
    pub witness: Vec<bool>,
}

/// Maximizes `sum(values * s)` subject to `sum(weights * s) <= capacity`.
pub fn knapsack_max(
    weights: &[u64],
    values: &[u64],
    capacity: usize,
) -> Result<KnapsackResult, DpError> {
    check_inputs(weights.len(), values.len(), capacity)?;
    let width = capacity + 1;
    let mut best = vec![0i64; width];
    let mut decisions = DecisionTable::new(weights.len(), width);
    for (p, (&w, &v)) in weights.iter().zip(values).enumerate() {
        let w = w as usize;
        if w > capacity {
            continue;
        }
        for k in (w..width).rev() {
            let candidate = best[k - w] + v as i64;
            if candidate > best[k] {
                best[k] = candidate;
                decisions.set(p, k);
            }
        }
    }
    Ok(KnapsackResult {
        value: best[capacity],
        witness: decisions.backtrack(weights, capacity),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dot<T: Copy + Into<i64>>(xs: &[T], pick: &[bool]) -> i64 {
        xs.iter()
            .zip(pick)
            .filter(|(_, &s)| s)
            .map(|(&x, _)| x.into())
            .sum()
    }

    #[test]
    fn example3_point_with_weight_15() {
        let f = equality_family(&[35, 30, 15], &[18, 20, 12], 80).unwrap();
        assert_eq!(f.value(15), Some(12));
        assert_eq!(f.witness(15).unwrap(), vec![false, false, true]);
        assert_eq!(f.capacity(), 80);
    }

    #[test]
    fn tiny_family_by_enumeration() {
        let f = equality_family(&[2, 3], &[5, 7], 5).unwrap();
        assert_eq!(f.value(5), Some(12));
        assert_eq!(f.witness(5).unwrap(), vec![true, true]);
        assert_eq!(f.value(1), None);
        assert_eq!(f.witness(1), None);
        assert_eq!(f.feasible_targets().collect::<Vec<_>>(), vec![0, 2, 3, 5]);
    }

    #[test]
    fn zero_target_is_empty_selection() {
        let f = equality_family(&[4, 1, 0], &[-3, -8, -1], 5).unwrap();
        assert_eq!(f.value(0), Some(0));
        assert_eq!(f.witness(0).unwrap(), vec![false, false, false]);
    }

    #[test]
    fn zero_weight_item_with_positive_value_is_taken() {
        let f = equality_family(&[0, 2], &[4, 1], 2).unwrap();
        assert_eq!(f.value(0), Some(4));
        assert_eq!(f.witness(2).unwrap(), vec![true, true]);
    }

    #[test]
    fn ties_leave_the_later_item_out() {
        let f = equality_family(&[1, 1], &[3, 3], 1).unwrap();
        assert_eq!(f.witness(1).unwrap(), vec![true, false]);
    }

    #[test]
    fn guards() {
        assert_eq!(
            equality_family(&[1], &[1], MAX_CAPACITY + 1).unwrap_err(),
            DpError::CapacityTooLarge(MAX_CAPACITY + 1)
        );
        assert!(matches!(
            knapsack_max(&[1, 2], &[1], 3),
            Err(DpError::LengthMismatch { .. })
        ));
    }

    #[test]
    fn knapsack_example4_and_example5() {
        let r = knapsack_max(&[45, 30, 15, 9], &[30, 25, 22, 22], 50).unwrap();
        assert_eq!(r.value, 47);
        assert!(dot(&[45u64, 30, 15, 9].map(|x| x as i64), &r.witness) <= 50);
        assert_eq!(dot(&[30i64, 25, 22, 22], &r.witness), 47);

        let w = [62u64, 50, 42, 40];
        let r = knapsack_max(&w, &w, 100).unwrap();
        assert_eq!(r.value, 92);
        assert_eq!(r.witness, vec![false, true, true, false]);

        assert_eq!(knapsack_max(&w, &w, 0).unwrap().value, 0);
    }
}
