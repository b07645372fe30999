//! End-to-end solver producing a [`FairnessReport`].
//!
//! Both modes start from the maximal equitable division `(e, e)`. If no
//! achievable gain pair dominates it, that division is fair and answers all
//! three questions at once. Otherwise the efficient gain pairs are searched
//! on the shifted Pareto lines.
//!
//! [`Mode::Exact`] works on the exact undominated envelope: the best
//! `min(gA, gB)` over all divisions is found polygon by polygon, and both
//! the profitably and the uniformly fair division are chosen among attained
//! envelope points (closed piece ends and diagonal crossings).
//!
//! [`Mode::Paper`] follows the original step-by-step procedure literally.
//! Polygons crossing the diagonal contribute no candidate there, so it may
//! miss efficient points near the diagonal.

use std::cmp::Ordering;

use num_traits::Signed;

use crate::equitable::max_equitable;
use crate::existence::{existence, ExistenceFlags};
use crate::geometry::{envelope, is_dominated, pareto_line, shifted_lines, Point, ShiftedLine};
use crate::model::{
    dominates, gains, is_proportional, Division, GainPair, Problem, Rational, Signature,
};
use crate::pareto_indivisible::undominated_points;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    #[default]
    Exact,
    Paper,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::Paper => "paper",
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Mode, String> {
        match s {
            "exact" => Ok(Mode::Exact),
            "paper" => Ok(Mode::Paper),
            other => Err(format!("unknown mode `{other}` (expected exact or paper)")),
        }
    }
}

/// A division together with its gains.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Allocation {
    pub gains: GainPair,
    pub division: Division,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FairnessReport {
    pub signature: Signature,
    pub exists: ExistenceFlags,
    pub equitably_fair: Option<Allocation>,
    pub profitably_fair: Option<Allocation>,
    pub uniformly_fair: Option<Allocation>,
    pub fair: Option<Allocation>,
    pub mode: Mode,
}

/// A report plus the optimal values behind it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub report: FairnessReport,
    /// Largest `min(gA, gB)` over all divisions. The paper mode only knows
    /// the value of its own profitably fair division.
    pub max_min: Option<Rational>,
    /// Smallest `|gA - gB|` over attained efficient proportional divisions.
    pub min_gap: Option<Rational>,
}

pub fn solve(p: &Problem, mode: Mode) -> FairnessReport {
    solve_detailed(p, mode).report
}

pub fn solve_detailed(p: &Problem, mode: Mode) -> Solution {
    let equitable = max_equitable(p).map(|sol| {
        let g = gains(p, &sol.division).expect("solver divisions match the problem");
        debug_assert_eq!(g.a, sol.gain);
        debug_assert!(is_proportional(p, &g));
        Allocation {
            gains: g,
            division: sol.division,
        }
    });

    let lines = shifted_lines(&pareto_line(&p.divisible_values()), &undominated_points(p));

    let mut report = FairnessReport {
        signature: p.signature(),
        exists: existence(p),
        equitably_fair: equitable.clone(),
        profitably_fair: None,
        uniformly_fair: None,
        fair: None,
        mode,
    };

    if let Some(eq) = &equitable {
        let e = Point::new(eq.gains.a, eq.gains.b);
        if !is_dominated(&e, &lines) {
            report.profitably_fair = Some(eq.clone());
            report.uniformly_fair = Some(eq.clone());
            report.fair = Some(eq.clone());
            return Solution {
                report,
                max_min: Some(eq.gains.a),
                min_gap: Some(Rational::from(0)),
            };
        }
    }

    match mode {
        Mode::Exact => exact_search(p, &lines, report),
        Mode::Paper => paper_search(p, &lines, report),
    }
}

/// Ordering used to pick among equally good allocations: larger `gA`
/// first, then the smaller division key.
fn tie_order(u: &Allocation, v: &Allocation) -> Ordering {
    v.gains
        .a
        .cmp(&u.gains.a)
        .then_with(|| u.division.tie_key().cmp(&v.division.tie_key()))
}

fn best_by<K: Ord>(items: &[Allocation], key: impl Fn(&Allocation) -> K) -> Option<Allocation> {
    items
        .iter()
        .min_by(|u, v| key(u).cmp(&key(v)).then_with(|| tie_order(u, v)))
        .cloned()
}

/// Largest `min(gA, gB)` over the polygon under one shifted line.
fn polygon_max_min(line: &ShiftedLine) -> Rational {
    let left = line.line.left();
    let right = line.line.right();
    if left.lean().is_positive() {
        left.y
    } else if right.lean().is_negative() {
        right.x
    } else {
        diagonal_crossing(line)
            .expect("the line straddles the diagonal")
            .x
    }
}

fn diagonal_crossing(line: &ShiftedLine) -> Option<Point> {
    line.line.segments().into_iter().find_map(|(p, q)| {
        let (f1, f2) = (p.lean(), q.lean());
        if f1.is_positive() || f2.is_negative() {
            return None;
        }
        if f1 == f2 {
            return Some(p);
        }
        Some(p.lerp(&q, -f1 / (f2 - f1)))
    })
}

fn exact_search(p: &Problem, lines: &[ShiftedLine], mut report: FairnessReport) -> Solution {
    let v_star = lines
        .iter()
        .map(polygon_max_min)
        .max()
        .expect("there is at least one undominated indivisible point");

    let mut candidates: Vec<Allocation> = Vec::new();
    for piece in envelope(lines) {
        let line = &lines[piece.source];
        for pt in piece.attained_points() {
            let g = pt.gains();
            if !is_proportional(p, &g) {
                continue;
            }
            candidates.push(Allocation {
                gains: g,
                division: line.division_at(piece.segment, &pt),
            });
        }
    }

    let maximizers: Vec<Allocation> = candidates
        .iter()
        .filter(|c| c.gains.min() == v_star)
        .cloned()
        .collect();
    report.profitably_fair = best_by(&maximizers, |_| ());
    report.uniformly_fair = best_by(&candidates, |c| c.gains.gap());
    let min_gap = report.uniformly_fair.as_ref().map(|c| c.gains.gap());
    Solution {
        report,
        max_min: Some(v_star),
        min_gap,
    }
}

fn paper_search(p: &Problem, lines: &[ShiftedLine], mut report: FairnessReport) -> Solution {
    // One vertex per polygon lying wholly on one side of x = y.
    let mut q: Vec<Allocation> = Vec::new();
    for line in lines {
        let last = line.line.vertices.len() - 1;
        let k = if !line.line.left().lean().is_negative() {
            0
        } else if !line.line.right().lean().is_positive() {
            last
        } else {
            continue;
        };
        let division = line.vertex_division(k);
        let g = gains(p, &division).expect("solver divisions match the problem");
        q.push(Allocation { gains: g, division });
    }

    // Keep the proportional ones.
    q.retain(|c| is_proportional(p, &c.gains));

    // Pareto filter within the candidates, then against every division.
    let pareto: Vec<Allocation> = q
        .iter()
        .filter(|c| !q.iter().any(|o| dominates(&o.gains, &c.gains)))
        .filter(|c| !is_dominated(&Point::new(c.gains.a, c.gains.b), lines))
        .cloned()
        .collect();

    // Best minimum and smallest gap.
    report.profitably_fair = best_by(&pareto, |c| std::cmp::Reverse(c.gains.min()));
    report.uniformly_fair = best_by(&pareto, |c| c.gains.gap());
    Solution {
        max_min: report.profitably_fair.as_ref().map(|c| c.gains.min()),
        min_gap: report.uniformly_fair.as_ref().map(|c| c.gains.gap()),
        report,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Owner;

    fn r(n: i128, d: i128) -> Rational {
        Rational::new(n, d)
    }

    fn problem(rows: &[(bool, i64, i64)]) -> Problem {
        Problem::new(
            rows.iter()
                .enumerate()
                .map(|(i, &(d, a, b))| (format!("item{}", i + 1), d, a, b)),
        )
        .unwrap()
    }

    fn example3() -> Problem {
        problem(&[
            (true, 10, 30),
            (true, 10, 20),
            (false, 35, 18),
            (false, 30, 20),
            (false, 15, 12),
        ])
    }

    #[test]
    fn example3_equitable_point_is_dominated() {
        for mode in [Mode::Exact, Mode::Paper] {
            let sol = solve_detailed(&example3(), mode);
            let rep = &sol.report;
            assert_eq!(rep.equitably_fair.as_ref().unwrap().gains.a, r(170, 3));
            assert!(rep.fair.is_none());
            let pf = rep.profitably_fair.as_ref().unwrap();
            let uf = rep.uniformly_fair.as_ref().unwrap();
            assert_eq!(pf.gains, GainPair::from_ints(65, 62));
            assert_eq!(uf.gains, GainPair::from_ints(65, 62));
            assert_eq!(pf.division.owners, vec![Owner::A, Owner::A, Owner::B]);
            assert_eq!(sol.min_gap, Some(r(3, 1)));
        }
    }

    #[test]
    fn example7_is_fair() {
        let p = problem(&[
            (true, 17, 17),
            (false, 42, 45),
            (false, 37, 34),
            (false, 2, 2),
            (false, 2, 2),
        ]);
        let rep = solve(&p, Mode::Exact);
        let fair = rep.fair.unwrap();
        assert_eq!(fair.gains, GainPair::new(r(103, 2), r(103, 2)));
        assert_eq!(fair.division.shares, vec![r(29, 34)]);
        assert_eq!(rep.profitably_fair.unwrap().gains, fair.gains);
    }

    #[test]
    fn example8_profitable_and_uniform_differ() {
        let p = problem(&[(false, 51, 40), (false, 45, 50), (false, 4, 10)]);
        for mode in [Mode::Exact, Mode::Paper] {
            let rep = solve(&p, mode);
            assert!(rep.equitably_fair.is_none());
            assert_eq!(
                rep.profitably_fair.unwrap().gains,
                GainPair::from_ints(51, 60)
            );
            assert_eq!(
                rep.uniformly_fair.unwrap().gains,
                GainPair::from_ints(55, 50)
            );
            assert!(rep.fair.is_none());
        }
    }

    #[test]
    fn example4_has_nothing() {
        let p = problem(&[
            (true, 1, 1),
            (false, 45, 30),
            (false, 30, 25),
            (false, 15, 22),
            (false, 9, 22),
        ]);
        for mode in [Mode::Exact, Mode::Paper] {
            let sol = solve_detailed(&p, mode);
            assert!(!sol.report.exists.proportional);
            assert!(sol.report.equitably_fair.is_none());
            assert!(sol.report.profitably_fair.is_none());
            assert!(sol.report.uniformly_fair.is_none());
        }
        assert!(solve_detailed(&p, Mode::Exact).max_min.unwrap() < r(50, 1));
    }

    #[test]
    fn mode_parsing() {
        assert_eq!("paper".parse::<Mode>().unwrap(), Mode::Paper);
        assert!("fast".parse::<Mode>().is_err());
        assert_eq!(Mode::default().as_str(), "exact");
    }
}
