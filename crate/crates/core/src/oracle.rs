//! Brute-force reference solver for small instances.
//!
//! Nothing here reuses the dynamic programs or the envelope of the main
//! solver. Every owner vector of the indivisible items is enumerated; the
//! border of the divisible polygon is rebuilt as the upper hull of all `2^L`
//! whole-item distributions; dominance is decided by clipping each segment
//! against the quadrant above a point. The results serve as ground truth for
//! the property tests.

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::engine::{Allocation, FairnessReport, Mode};
use crate::existence::{ExistenceFlags, SystemChecks};
use crate::model::{Division, GainPair, Owner, Problem, Rational};

pub const MAX_INDIVISIBLE: usize = 20;
pub const MAX_DIVISIBLE: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error(
        "instance too large for the oracle: {divisible} divisible and {indivisible} indivisible \
         items (limits {MAX_DIVISIBLE} and {MAX_INDIVISIBLE})"
    )]
    InstanceTooLarge {
        divisible: usize,
        indivisible: usize,
    },
}

/// Candidate summary of the polygon fixed by one owner vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolygonRow {
    pub owners: Vec<Owner>,
    /// Gains from the indivisible items alone.
    pub base: GainPair,
    /// Pareto border of the polygon, left to right.
    pub vertices: Vec<GainPair>,
    /// Point of the border with equal gains, if any.
    pub crossing: Option<GainPair>,
    /// Largest `min(gA, gB)` over the polygon.
    pub best_min: Rational,
    /// Smallest `|gA - gB|` over the border.
    pub best_gap: Rational,
}

/// Knapsack-system quantities of one owner vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemRow {
    pub owners: Vec<Owner>,
    /// A's values of the items owned by A.
    pub v1: i64,
    /// B's values of the items owned by A.
    pub v2: i64,
    /// B's values of the items owned by B.
    pub b_gain: i64,
    /// `v1 + v2`.
    pub v3: i64,
    pub right_vertex: bool,
    pub left_vertex: bool,
    pub diagonal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleReport {
    pub report: FairnessReport,
    /// One row per owner vector, in counting order of the bits (first item
    /// most significant).
    pub polygons: Vec<PolygonRow>,
    pub max_min: Rational,
    pub min_gap: Option<Rational>,
    pub max_equitable_gain: Option<Rational>,
}

fn check_size(p: &Problem) -> Result<(), OracleError> {
    let (l, m) = (p.divisible().len(), p.indivisible().len());
    if l > MAX_DIVISIBLE || m > MAX_INDIVISIBLE {
        return Err(OracleError::InstanceTooLarge {
            divisible: l,
            indivisible: m,
        });
    }
    Ok(())
}

/// Owner vectors in table order: 00..0, 00..1, ..., 11..1.
fn owner_vectors(m: usize) -> impl Iterator<Item = Vec<Owner>> {
    (0u64..1 << m).map(move |mask| {
        (0..m)
            .map(|i| Owner::from_bool(mask >> (m - 1 - i) & 1 == 1))
            .collect()
    })
}

fn int(v: i64) -> Rational {
    Rational::from(v as i128)
}

/// Edge of the divisible border: items `moving` pass from B to A in index
/// order while the point travels from `from` to `to`.
#[derive(Debug, Clone)]
struct Edge {
    from: GainPair,
    to: GainPair,
    start: Vec<bool>,
    moving: Vec<usize>,
}

#[derive(Debug, Clone)]
struct Chain {
    vertices: Vec<(GainPair, Vec<bool>)>,
    edges: Vec<Edge>,
}

fn cross(o: &GainPair, a: &GainPair, b: &GainPair) -> Rational {
    (a.a - o.a) * (b.b - o.b) - (a.b - o.b) * (b.a - o.a)
}

/// Upper hull of all whole-item distributions of the divisible items.
fn divisible_chain(items: &[(i64, i64)]) -> Chain {
    let l = items.len();
    let s1: i64 = items.iter().map(|v| v.0).sum();
    // Best B-gain for every A-gain, with the smallest assignment on ties.
    let mut best: std::collections::BTreeMap<i64, (i64, Vec<bool>)> = Default::default();
    for mask in 0u64..1 << l {
        let assign: Vec<bool> = (0..l).map(|i| mask >> i & 1 == 1).collect();
        let x: i64 = (0..l).filter(|&i| assign[i]).map(|i| items[i].0).sum();
        let y: i64 = (0..l).filter(|&i| !assign[i]).map(|i| items[i].1).sum();
        let better = match best.get(&x) {
            None => true,
            Some((by, ba)) => y > *by || (y == *by && assign < *ba),
        };
        if better {
            best.insert(x, (y, assign));
        }
    }

    let mut hull: Vec<(GainPair, Vec<bool>)> = Vec::new();
    for (x, (y, assign)) in best {
        let pt = GainPair::from_ints(x, y);
        while hull.len() >= 2 {
            let n = hull.len();
            if cross(&hull[n - 2].0, &hull[n - 1].0, &pt) >= Rational::zero() {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push((pt, assign));
    }
    let last = hull.last().expect("at least the empty distribution").0;
    if last.b.is_positive() {
        let all: Vec<bool> = items.iter().map(|&v| v != (0, 0)).collect();
        hull.push((GainPair::from_ints(s1, 0), all));
    }

    let edges = hull
        .windows(2)
        .map(|w| {
            let (from, start) = (&w[0].0, &w[0].1);
            let (to, end) = (&w[1].0, &w[1].1);
            debug_assert!(start.iter().zip(end).all(|(s, e)| !s || *e));
            Edge {
                from: *from,
                to: *to,
                start: start.clone(),
                moving: (0..l).filter(|&i| end[i] && !start[i]).collect(),
            }
        })
        .collect();
    Chain {
        vertices: hull,
        edges,
    }
}

impl Edge {
    /// Shares when the point sits at parameter `t` of the edge.
    fn shares_at(&self, items: &[(i64, i64)], t: Rational) -> Vec<Rational> {
        let mut shares: Vec<Rational> = self
            .start
            .iter()
            .map(|&s| if s { Rational::one() } else { Rational::zero() })
            .collect();
        let weight: i64 = self.moving.iter().map(|&i| items[i].0 + items[i].1).sum();
        let mut left = t * int(weight);
        for &i in &self.moving {
            let w = int(items[i].0 + items[i].1);
            if left >= w {
                shares[i] = Rational::one();
                left -= w;
            } else {
                shares[i] = left / w;
                left = Rational::zero();
            }
        }
        shares
    }
}

fn lerp(p: &GainPair, q: &GainPair, t: Rational) -> GainPair {
    GainPair::new(p.a + (q.a - p.a) * t, p.b + (q.b - p.b) * t)
}

fn shift(g: &GainPair, base: &GainPair) -> GainPair {
    GainPair::new(g.a + base.a, g.b + base.b)
}

/// Parameter on `[p, q]` where `x = y`, if there is one.
fn diagonal_param(p: &GainPair, q: &GainPair) -> Option<Rational> {
    let f1 = p.a - p.b;
    let f2 = q.a - q.b;
    if f1.is_positive() || f2.is_negative() {
        return None;
    }
    if f1 == f2 {
        return Some(Rational::zero());
    }
    Some(-f1 / (f2 - f1))
}

/// Interval of `t` in `[0, 1]` with `c + d t >= 0`.
fn half_interval(c: Rational, d: Rational, lo: &mut Rational, hi: &mut Rational) {
    if d.is_zero() {
        if c.is_negative() {
            *lo = Rational::one();
            *hi = Rational::zero();
        }
    } else if d.is_positive() {
        *lo = (*lo).max(-c / d);
    } else {
        *hi = (*hi).min(-c / d);
    }
}

/// Some point of `[p, q]` is at least `g` in both gains and differs from it.
fn clip_dominates(p: &GainPair, q: &GainPair, g: &GainPair) -> bool {
    if p == q {
        return p.a >= g.a && p.b >= g.b && p != g;
    }
    let (mut lo, mut hi) = (Rational::zero(), Rational::one());
    half_interval(p.a - g.a, q.a - p.a, &mut lo, &mut hi);
    half_interval(p.b - g.b, q.b - p.b, &mut lo, &mut hi);
    if lo > hi {
        return false;
    }
    lo < hi || lerp(p, q, lo) != *g
}

struct Line {
    owners: Vec<Owner>,
    base: GainPair,
}

struct Candidate {
    gains: GainPair,
    division: Division,
}

pub fn oracle_report(p: &Problem) -> Result<OracleReport, OracleError> {
    check_size(p)?;
    let div = p.divisible_values();
    let ind = p.indivisible_values();
    let total = p.total();
    let chain = divisible_chain(&div);

    let base_of = |owners: &[Owner]| {
        let mut ga = 0;
        let mut gb = 0;
        for (&(a, b), o) in ind.iter().zip(owners) {
            if o.is_a() {
                ga += a;
            } else {
                gb += b;
            }
        }
        GainPair::from_ints(ga, gb)
    };
    let crossing_of = |base: &GainPair| -> Option<(GainPair, Vec<Rational>)> {
        if chain.edges.is_empty() {
            let (v, assign) = &chain.vertices[0];
            let pt = shift(v, base);
            return (pt.a == pt.b).then(|| (pt, shares_of(assign)));
        }
        chain.edges.iter().find_map(|e| {
            let from = shift(&e.from, base);
            let to = shift(&e.to, base);
            diagonal_param(&from, &to).map(|t| (lerp(&from, &to, t), e.shares_at(&div, t)))
        })
    };

    let mut polygons = Vec::new();
    let mut equitable: Option<Candidate> = None;
    for owners in owner_vectors(ind.len()) {
        let base = base_of(&owners);
        let vertices: Vec<GainPair> = chain
            .vertices
            .iter()
            .map(|(v, _)| shift(v, &base))
            .collect();
        let crossing = crossing_of(&base);
        let mut best_min = vertices.iter().map(|v| v.min()).max().expect("nonempty");
        let mut best_gap = vertices.iter().map(|v| v.gap()).min().expect("nonempty");
        if let Some((c, shares)) = &crossing {
            best_min = best_min.max(c.a);
            best_gap = Rational::zero();
            let cand = Candidate {
                gains: *c,
                division: Division::new(shares.clone(), owners.clone()),
            };
            if better(&cand, equitable.as_ref(), |g| g.a) {
                equitable = Some(cand);
            }
        }
        polygons.push(PolygonRow {
            owners,
            base,
            vertices,
            crossing: crossing.map(|c| c.0),
            best_min,
            best_gap,
        });
    }

    let two = Rational::from(2);
    let h = int(total);
    let proportional = |g: &GainPair| g.a * two >= h && g.b * two >= h;
    let max_min = polygons.iter().map(|r| r.best_min).max().expect("nonempty");
    let rows = system_rows_unchecked(p);
    let systems = SystemChecks {
        left_vertex: rows.iter().any(|r| r.left_vertex),
        right_vertex: rows.iter().any(|r| r.right_vertex),
        diagonal: rows.iter().any(|r| r.diagonal),
    };
    let exists = ExistenceFlags {
        proportional: max_min * two >= h,
        equitable: equitable.is_some(),
        systems,
    };

    // Lines through undominated indivisible gain pairs.
    let mut bases: Vec<(GainPair, Vec<Owner>)> = polygons
        .iter()
        .map(|r| (r.base, r.owners.clone()))
        .collect();
    bases.sort_by(|u, v| {
        v.0.a
            .cmp(&u.0.a)
            .then(v.0.b.cmp(&u.0.b))
            .then(u.1.cmp(&v.1))
    });
    let mut lines: Vec<Line> = Vec::new();
    for (base, owners) in bases {
        if lines.last().is_none_or(|l| base.b > l.base.b) {
            lines.push(Line { owners, base });
        }
    }

    let segments: Vec<(usize, Option<usize>, GainPair, GainPair)> = lines
        .iter()
        .enumerate()
        .flat_map(|(li, line)| {
            let segs: Vec<_> = if chain.edges.is_empty() {
                let v = shift(&chain.vertices[0].0, &line.base);
                vec![(li, None, v, v)]
            } else {
                chain
                    .edges
                    .iter()
                    .enumerate()
                    .map(|(ei, e)| {
                        (
                            li,
                            Some(ei),
                            shift(&e.from, &line.base),
                            shift(&e.to, &line.base),
                        )
                    })
                    .collect()
            };
            segs
        })
        .collect();
    let dominated = |g: &GainPair| segments.iter().any(|(_, _, p, q)| clip_dominates(p, q, g));

    let division_at = |li: usize, ei: Option<usize>, t: Rational| -> Division {
        let shares = match ei {
            Some(ei) => chain.edges[ei].shares_at(&div, t),
            None => shares_of(&chain.vertices[0].1),
        };
        Division::new(shares, lines[li].owners.clone())
    };

    // Vertices, diagonal crossings and pairwise intersections.
    let mut candidates: Vec<Candidate> = Vec::new();
    let mut push = |li: usize, ei: Option<usize>, t: Rational, g: GainPair| {
        if proportional(&g) {
            candidates.push(Candidate {
                gains: g,
                division: division_at(li, ei, t),
            });
        }
    };
    for &(li, ei, pa, pb) in &segments {
        push(li, ei, Rational::zero(), pa);
        push(li, ei, Rational::one(), pb);
        if let Some(t) = diagonal_param(&pa, &pb) {
            push(li, ei, t, lerp(&pa, &pb, t));
        }
        for &(lj, _, qa, qb) in &segments {
            if lj == li || pa == pb {
                continue;
            }
            for t in intersections(&pa, &pb, &qa, &qb) {
                push(li, ei, t, lerp(&pa, &pb, t));
            }
        }
    }
    candidates.retain(|c| !dominated(&c.gains));

    let mut report = FairnessReport {
        signature: p.signature(),
        exists,
        equitably_fair: equitable.as_ref().map(to_allocation),
        profitably_fair: None,
        uniformly_fair: None,
        fair: None,
        mode: Mode::Exact,
    };
    let max_equitable_gain = equitable.as_ref().map(|c| c.gains.a);
    let min_gap;
    if let Some(eq) = equitable.as_ref().filter(|e| !dominated(&e.gains)) {
        let alloc = to_allocation(eq);
        report.fair = Some(alloc.clone());
        report.profitably_fair = Some(alloc.clone());
        report.uniformly_fair = Some(alloc);
        min_gap = Some(Rational::zero());
    } else {
        let mut profitable: Option<&Candidate> = None;
        let mut uniform: Option<&Candidate> = None;
        for c in &candidates {
            if c.gains.min() == max_min && better(c, profitable, |_| Rational::zero()) {
                profitable = Some(c);
            }
            if better(c, uniform, |g| -g.gap()) {
                uniform = Some(c);
            }
        }
        report.profitably_fair = profitable.map(to_allocation);
        report.uniformly_fair = uniform.map(to_allocation);
        min_gap = uniform.map(|c| c.gains.gap());
    }

    Ok(OracleReport {
        report,
        polygons,
        max_min,
        min_gap,
        max_equitable_gain,
    })
}

fn shares_of(assign: &[bool]) -> Vec<Rational> {
    assign
        .iter()
        .map(|&s| if s { Rational::one() } else { Rational::zero() })
        .collect()
}

fn to_allocation(c: &Candidate) -> Allocation {
    Allocation {
        gains: c.gains,
        division: c.division.clone(),
    }
}

/// `c` beats `incumbent`: larger score, then larger gA, then smaller
/// division key.
fn better(
    c: &Candidate,
    incumbent: Option<&Candidate>,
    score: impl Fn(&GainPair) -> Rational,
) -> bool {
    let Some(inc) = incumbent else { return true };
    let (sc, si) = (score(&c.gains), score(&inc.gains));
    if sc != si {
        return sc > si;
    }
    if c.gains.a != inc.gains.a {
        return c.gains.a > inc.gains.a;
    }
    c.division.tie_key() < inc.division.tie_key()
}

/// Parameters on `[pa, pb]` where it meets `[qa, qb]`: the crossing point,
/// or the ends of a collinear overlap.
fn intersections(pa: &GainPair, pb: &GainPair, qa: &GainPair, qb: &GainPair) -> Vec<Rational> {
    let d = GainPair::new(pb.a - pa.a, pb.b - pa.b);
    let e = GainPair::new(qb.a - qa.a, qb.b - qa.b);
    let w = GainPair::new(qa.a - pa.a, qa.b - pa.b);
    let cr = |u: &GainPair, v: &GainPair| u.a * v.b - u.b * v.a;
    let den = cr(&d, &e);
    let unit = |t: &Rational| !t.is_negative() && *t <= Rational::one();
    if !den.is_zero() {
        let t = cr(&w, &e) / den;
        let u = cr(&w, &d) / den;
        return if unit(&t) && unit(&u) {
            vec![t]
        } else {
            Vec::new()
        };
    }
    if !cr(&w, &d).is_zero() {
        return Vec::new();
    }
    let dd = d.a * d.a + d.b * d.b;
    [qa, qb]
        .iter()
        .map(|q| ((q.a - pa.a) * d.a + (q.b - pa.b) * d.b) / dd)
        .filter(unit)
        .collect()
}

fn system_rows_unchecked(p: &Problem) -> Vec<SystemRow> {
    let ind = p.indivisible_values();
    let total = p.total();
    let (s1, s2) = p
        .divisible_values()
        .iter()
        .fold((0, 0), |(s1, s2), &(a, b)| (s1 + a, s2 + b));
    owner_vectors(ind.len())
        .map(|owners| {
            let mut v1 = 0;
            let mut v2 = 0;
            let mut b_gain = 0;
            for (&(a, b), o) in ind.iter().zip(&owners) {
                if o.is_a() {
                    v1 += a;
                    v2 += b;
                } else {
                    b_gain += b;
                }
            }
            let v3 = v1 + v2;
            SystemRow {
                owners,
                v1,
                v2,
                b_gain,
                v3,
                right_vertex: 2 * v1 <= total && 2 * v2 >= total,
                left_vertex: 2 * v1 >= total && 2 * v2 <= total,
                diagonal: total - (s1 + s2) <= v3 && v3 <= total,
            }
        })
        .collect()
}

/// Every owner vector with the three knapsack-system tests evaluated.
pub fn system_rows(p: &Problem) -> Result<Vec<SystemRow>, OracleError> {
    check_size(p)?;
    Ok(system_rows_unchecked(p))
}

#[cfg(test)]
mod tests {
    use super::*;

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

    #[test]
    fn chain_of_example3_divisibles() {
        let chain = divisible_chain(&[(10, 30), (10, 20)]);
        let pts: Vec<GainPair> = chain.vertices.iter().map(|v| v.0).collect();
        assert_eq!(
            pts,
            vec![
                GainPair::from_ints(0, 50),
                GainPair::from_ints(10, 30),
                GainPair::from_ints(20, 0)
            ]
        );
        assert_eq!(chain.edges[0].moving, vec![1]);
    }

    #[test]
    fn chain_with_vertical_and_horizontal_ends() {
        let chain = divisible_chain(&[(0, 4), (3, 0), (0, 0), (2, 2)]);
        let pts: Vec<GainPair> = chain.vertices.iter().map(|v| v.0).collect();
        assert_eq!(
            pts,
            vec![
                GainPair::from_ints(0, 6),
                GainPair::from_ints(3, 6),
                GainPair::from_ints(5, 4),
                GainPair::from_ints(5, 0)
            ]
        );
        let e = &chain.edges[2];
        assert_eq!(
            e.shares_at(&[(0, 4), (3, 0), (0, 0), (2, 2)], r(1, 2))[0],
            r(1, 2)
        );
    }

    #[test]
    fn collinear_items_fill_in_index_order() {
        let items = [(1, 1), (2, 2)];
        let chain = divisible_chain(&items);
        assert_eq!(chain.edges.len(), 1);
        let shares = chain.edges[0].shares_at(&items, r(1, 2));
        assert_eq!(shares, vec![r(1, 1), r(1, 4)]);
    }

    #[test]
    fn clipping() {
        let p = GainPair::from_ints(0, 10);
        let q = GainPair::from_ints(10, 0);
        assert!(clip_dominates(&p, &q, &GainPair::from_ints(4, 4)));
        assert!(!clip_dominates(&p, &q, &GainPair::from_ints(5, 5)));
        assert!(!clip_dominates(&p, &q, &GainPair::from_ints(6, 5)));
        assert!(clip_dominates(&p, &p, &GainPair::from_ints(0, 9)));
        assert!(!clip_dominates(&p, &p, &p));
    }

    #[test]
    fn example8_polygon_rows() {
        let p = problem(&[(false, 51, 40), (false, 45, 50), (false, 4, 10)]);
        let o = oracle_report(&p).unwrap();
        let rows: Vec<(i64, i64, i64, i64)> = o
            .polygons
            .iter()
            .map(|r| {
                let v = r.vertices[0];
                let n = |x: Rational| *x.numer() as i64;
                (n(v.a), n(v.b), n(r.best_min), n(r.best_gap))
            })
            .collect();
        assert_eq!(
            rows,
            vec![
                (0, 100, 0, 100),
                (4, 90, 4, 86),
                (45, 50, 45, 5),
                (49, 40, 40, 9),
                (51, 60, 51, 9),
                (55, 50, 50, 5),
                (96, 10, 10, 86),
                (100, 0, 0, 100),
            ]
        );
        assert_eq!(
            o.report.profitably_fair.unwrap().gains,
            GainPair::from_ints(51, 60)
        );
        assert_eq!(
            o.report.uniformly_fair.unwrap().gains,
            GainPair::from_ints(55, 50)
        );
        assert!(o.report.equitably_fair.is_none());
    }

    #[test]
    fn example4_system_rows() {
        let p = problem(&[
            (true, 1, 1),
            (false, 45, 30),
            (false, 30, 25),
            (false, 15, 22),
            (false, 9, 22),
        ]);
        let rows = system_rows(&p).unwrap();
        assert_eq!(rows.len(), 16);
        assert_eq!((rows[6].v1, rows[6].v2, rows[6].v3), (45, 47, 92));
        assert_eq!((rows[15].v1, rows[15].v2, rows[15].v3), (99, 99, 198));
        assert!(rows
            .iter()
            .all(|r| !r.left_vertex && !r.right_vertex && !r.diagonal));
        let o = oracle_report(&p).unwrap();
        assert!(!o.report.exists.proportional);
    }

    #[test]
    fn example3_and_example6() {
        let p = problem(&[
            (true, 10, 30),
            (true, 10, 20),
            (false, 35, 18),
            (false, 30, 20),
            (false, 15, 12),
        ]);
        let o = oracle_report(&p).unwrap();
        assert_eq!(o.max_equitable_gain, Some(r(170, 3)));
        assert!(o.report.fair.is_none());
        assert_eq!(
            o.report.profitably_fair.unwrap().gains,
            GainPair::from_ints(65, 62)
        );

        let p = problem(&[
            (true, 5, 5),
            (false, 40, 49),
            (false, 10, 1),
            (false, 20, 25),
            (false, 25, 20),
        ]);
        let o = oracle_report(&p).unwrap();
        assert_eq!(o.max_equitable_gain, Some(r(50, 1)));
        assert_eq!(
            o.report.profitably_fair.unwrap().gains,
            GainPair::from_ints(55, 54)
        );
        assert_eq!(
            o.report.uniformly_fair.unwrap().gains,
            GainPair::from_ints(55, 54)
        );
    }

    #[test]
    fn guard() {
        let rows: Vec<(bool, i64, i64)> = (0..21).map(|_| (false, 1, 1)).collect();
        assert!(matches!(
            oracle_report(&problem(&rows)),
            Err(OracleError::InstanceTooLarge { .. })
        ));
    }
}
