//! Equitable divisions with the largest common gain.
//!
//! A maximal equitable division splits at most one item, so it is enough to
//! try every divisible item as the only splittable one and treat the others
//! as whole items. With item 0 the split item and Boolean owners `s_i`
//! (1 = A) for the rest, equitability pins the share to
//!
//! ```text
//! x = (b0 - z) / (a0 + b0),   z = sum(a_i s_i) - sum(b_i (1 - s_i))
//! ```
//!
//! which lies in `[0, 1]` exactly when `H - (a0 + b0) <= sum(c_i s_i) <= H`
//! with `c_i = a_i + b_i`. The common gain is
//! `(sum(d_i s_i) + H a0) / (a0 + b0)` with `d_i = b0 a_i - a0 b_i`, so the
//! best owners come from an equality-constrained knapsack over that window.

use num_traits::{One, Zero};

use crate::boolean_opt::equality_family;
use crate::model::{Division, Owner, Problem, Rational};

/// Solution of the one-splittable-item problem.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SingleSplit {
    /// Owners of the whole items.
    pub owners: Vec<Owner>,
    /// Share of the splittable item given to A.
    pub share: Rational,
    pub gain: Rational,
}

/// Maximal equitable division when only item `(a0, b0)` may be split.
///
/// Requires `a0 + sum(a_i) = b0 + sum(b_i) = total`. Returns `None` when no
/// equitable division exists. An item worth nothing to both sides gets share
/// 0.
pub fn solve_single_divisible(
    a0: i64,
    b0: i64,
    items: &[(i64, i64)],
    total: i64,
) -> Option<SingleSplit> {
    let weights: Vec<u64> = items.iter().map(|&(a, b)| (a + b) as u64).collect();
    let pivot = a0 + b0;
    let h = total as usize;

    if pivot == 0 {
        // Nothing to split: the owners alone must balance, sum(c_i s_i) = H.
        let values: Vec<i64> = items.iter().map(|&(a, _)| a).collect();
        let family = equality_family(&weights, &values, h).expect("capacity bounded by total");
        let gain = family.value(h)?;
        let owners = family
            .witness(h)?
            .into_iter()
            .map(Owner::from_bool)
            .collect();
        return Some(SingleSplit {
            owners,
            share: Rational::zero(),
            gain: Rational::from(gain as i128),
        });
    }

    let values: Vec<i64> = items.iter().map(|&(a, b)| b0 * a - a0 * b).collect();
    let family = equality_family(&weights, &values, h).expect("capacity bounded by total");
    let low = (total - pivot).max(0) as usize;
    // Smallest target wins ties.
    let (k, best) = (low..=h)
        .filter_map(|k| family.value(k).map(|v| (k, v)))
        .fold(None, |acc: Option<(usize, i64)>, (k, v)| match acc {
            Some((_, bv)) if bv >= v => acc,
            _ => Some((k, v)),
        })?;
    let picked = family.witness(k).expect("feasible target has a witness");

    let z: i64 = items
        .iter()
        .zip(&picked)
        .map(|(&(a, b), &s)| if s { a } else { -b })
        .sum();
    let den = Rational::from(pivot as i128);
    let share = Rational::from((b0 - z) as i128) / den;
    let gain = Rational::from(best as i128 + total as i128 * a0 as i128) / den;
    debug_assert!(share >= Rational::zero() && share <= Rational::one());
    Some(SingleSplit {
        owners: picked.into_iter().map(Owner::from_bool).collect(),
        share,
        gain,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquitableSolution {
    /// Common gain of both participants.
    pub gain: Rational,
    pub division: Division,
    /// Position among the divisible items of the split item; `None` when the
    /// problem has no divisible items.
    pub source_divisible: Option<usize>,
}

/// Equitable division with the largest common gain, or `None` if the problem
/// has no equitable division.
pub fn max_equitable(p: &Problem) -> Option<EquitableSolution> {
    let div = p.divisible_values();
    let ind = p.indivisible_values();
    let total = p.total();

    if div.is_empty() {
        let weights: Vec<u64> = ind.iter().map(|&(a, b)| (a + b) as u64).collect();
        let values: Vec<i64> = ind.iter().map(|&(a, _)| a).collect();
        let h = total as usize;
        let family = equality_family(&weights, &values, h).expect("capacity bounded by total");
        let gain = family.value(h)?;
        let owners = family
            .witness(h)?
            .into_iter()
            .map(Owner::from_bool)
            .collect();
        return Some(EquitableSolution {
            gain: Rational::from(gain as i128),
            division: Division::new(Vec::new(), owners),
            source_divisible: None,
        });
    }

    let mut best: Option<EquitableSolution> = None;
    for (k, &(a0, b0)) in div.iter().enumerate() {
        // The other divisible items become whole items, listed first.
        let mut whole: Vec<(i64, i64)> = div
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != k)
            .map(|(_, &v)| v)
            .collect();
        whole.extend_from_slice(&ind);
        let Some(sol) = solve_single_divisible(a0, b0, &whole, total) else {
            continue;
        };
        if best.as_ref().is_some_and(|b| b.gain >= sol.gain) {
            continue;
        }
        let mut shares = Vec::with_capacity(div.len());
        let mut rest = sol.owners.iter();
        for j in 0..div.len() {
            if j == k {
                shares.push(sol.share);
            } else {
                let owner = rest.next().expect("one owner per whole item");
                shares.push(if owner.is_a() {
                    Rational::one()
                } else {
                    Rational::zero()
                });
            }
        }
        let owners: Vec<Owner> = rest.copied().collect();
        best = Some(EquitableSolution {
            gain: sol.gain,
            division: Division::new(shares, owners),
            source_divisible: Some(k),
        });
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{gains, is_equitable};

    fn r(n: i128, d: i128) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn example7_single_item() {
        let sol =
            solve_single_divisible(17, 17, &[(42, 45), (37, 34), (2, 2), (2, 2)], 100).unwrap();
        assert_eq!(sol.gain, r(103, 2));
        assert_eq!(sol.share, r(29, 34));
        assert_eq!(sol.owners, vec![Owner::B, Owner::A, Owner::B, Owner::B]);
    }

    #[test]
    fn example5_has_no_equitable_division() {
        let sol = solve_single_divisible(3, 3, &[(45, 17), (30, 20), (20, 22), (2, 38)], 100);
        assert_eq!(sol, None);
    }

    #[test]
    fn symmetric_half_split() {
        let sol = solve_single_divisible(50, 50, &[(50, 50)], 100).unwrap();
        assert_eq!(sol.gain, r(50, 1));
        assert_eq!(sol.share, r(1, 1));
        assert_eq!(sol.owners, vec![Owner::B]);
    }

    #[test]
    fn worthless_split_item() {
        let sol = solve_single_divisible(0, 0, &[(3, 1), (1, 3)], 4).unwrap();
        assert_eq!(sol.gain, r(3, 1));
        assert_eq!(sol.share, r(0, 1));
        assert_eq!(sol.owners, vec![Owner::A, Owner::B]);
        assert_eq!(
            solve_single_divisible(0, 0, &[(3, 1), (1, 3), (0, 0)], 4)
                .unwrap()
                .gain,
            r(3, 1)
        );
        assert_eq!(solve_single_divisible(0, 0, &[(4, 1), (0, 3)], 4), None);
    }

    #[test]
    fn example3_picks_the_second_divisible_item() {
        let p = Problem::new(vec![
            ("item1", true, 10, 30),
            ("item2", true, 10, 20),
            ("item3", false, 35, 18),
            ("item4", false, 30, 20),
            ("item5", false, 15, 12),
        ])
        .unwrap();
        let sol = max_equitable(&p).unwrap();
        assert_eq!(sol.gain, r(170, 3));
        assert_eq!(sol.source_divisible, Some(1));
        let g = gains(&p, &sol.division).unwrap();
        assert!(is_equitable(&g));
        assert_eq!(g.a, r(170, 3));
        assert!(sol.division.split_count() <= 1);

        // Splitting item 1 alone reaches only 55.
        let whole = [(10, 20), (35, 18), (30, 20), (15, 12)];
        assert_eq!(
            solve_single_divisible(10, 30, &whole, 100).unwrap().gain,
            r(55, 1)
        );
    }

    #[test]
    fn no_divisible_items_needs_exact_balance() {
        let p = Problem::new(vec![
            ("x", false, 51, 40),
            ("y", false, 45, 50),
            ("z", false, 4, 10),
        ])
        .unwrap();
        assert_eq!(max_equitable(&p), None);
        let p = Problem::new(vec![("x", false, 3, 1), ("y", false, 1, 3)]).unwrap();
        let sol = max_equitable(&p).unwrap();
        assert_eq!(sol.gain, r(3, 1));
        assert_eq!(sol.division.owners, vec![Owner::A, Owner::B]);
    }
}
