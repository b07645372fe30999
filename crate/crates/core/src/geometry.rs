//! Plane geometry of gain pairs.
//!
//! Distributing only the divisible items yields a convex polygon of gain
//! pairs. Its upper-right border is a concave [`BrokenLine`] obtained by
//! handing items to A in decreasing order of `a / b`. Adding an undominated
//! gain pair of the indivisible items translates that line into a
//! [`ShiftedLine`]; the efficient gain pairs of the whole problem all lie on
//! these translated lines, and [`envelope`] extracts exactly the undominated
//! part of their union.

use std::cmp::Ordering;

use num_traits::{One, Signed, Zero};

use crate::model::{Division, GainPair, Owner, Rational};
use crate::pareto_indivisible::ParetoPoint;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Point {
    pub x: Rational,
    pub y: Rational,
}

impl Point {
    pub fn new(x: Rational, y: Rational) -> Point {
        Point { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Point {
        Point::new(Rational::from(x as i128), Rational::from(y as i128))
    }

    /// `x - y`; positive below the diagonal, negative above it.
    pub fn lean(&self) -> Rational {
        self.x - self.y
    }

    pub fn lerp(&self, other: &Point, t: Rational) -> Point {
        Point::new(
            self.x + (other.x - self.x) * t,
            self.y + (other.y - self.y) * t,
        )
    }

    pub fn gains(&self) -> GainPair {
        GainPair::new(self.x, self.y)
    }
}

fn cross(ax: Rational, ay: Rational, bx: Rational, by: Rational) -> Rational {
    ax * by - ay * bx
}

/// Permutation sorting `(a, b)` pairs by `a / b`, largest first.
///
/// Ratios are compared by cross-multiplication, so `b = 0` with `a > 0`
/// counts as infinite. Items worth nothing to both sort last. The sort is
/// stable.
pub fn ratio_order(items: &[(i64, i64)]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..items.len()).collect();
    order.sort_by(|&i, &j| {
        let (ai, bi) = items[i];
        let (aj, bj) = items[j];
        let zi = ai == 0 && bi == 0;
        let zj = aj == 0 && bj == 0;
        match (zi, zj) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Greater,
            (false, true) => Ordering::Less,
            (false, false) => {
                let lhs = ai as i128 * bj as i128;
                let rhs = aj as i128 * bi as i128;
                rhs.cmp(&lhs)
            }
        }
    });
    order
}

/// Upper-right border of the gains polygon of a set of divisible items.
///
/// Vertex `k` gives the first `k` items of the ratio order wholly to A and
/// the rest to B. Segment `j` runs from vertex `j` to vertex `j + 1` while
/// the share of item `order[j]` goes from 0 to 1. Items worth nothing to
/// either participant contribute no segment and always stay with B.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BrokenLine {
    pub vertices: Vec<Point>,
    /// Item slot (position among the divisible items) of every segment.
    pub order: Vec<usize>,
    /// Number of divisible item slots, including worthless ones.
    pub slots: usize,
}

impl BrokenLine {
    pub fn segment_count(&self) -> usize {
        self.order.len()
    }

    pub fn left(&self) -> &Point {
        &self.vertices[0]
    }

    pub fn right(&self) -> &Point {
        self.vertices
            .last()
            .expect("a broken line has at least one vertex")
    }

    /// Segments as endpoint pairs; a single-vertex line yields one
    /// zero-length segment.
    pub fn segments(&self) -> Vec<(Point, Point)> {
        if self.vertices.len() == 1 {
            return vec![(self.vertices[0], self.vertices[0])];
        }
        self.vertices.windows(2).map(|w| (w[0], w[1])).collect()
    }

    /// Shares of the divisible items at parameter `t` of segment `seg`.
    pub fn shares_at(&self, seg: usize, t: Rational) -> Vec<Rational> {
        let mut shares = self.vertex_shares(seg);
        if seg < self.order.len() {
            shares[self.order[seg]] = t;
        }
        shares
    }

    /// Shares of the divisible items at vertex `k`.
    pub fn vertex_shares(&self, k: usize) -> Vec<Rational> {
        let mut shares = vec![Rational::zero(); self.slots];
        for &slot in self.order.iter().take(k) {
            shares[slot] = Rational::one();
        }
        shares
    }

    /// Parameter of `pt` along segment `seg`. `pt` must lie on it.
    pub fn locate(&self, seg: usize, pt: &Point) -> Rational {
        if seg >= self.order.len() {
            return Rational::zero();
        }
        let p = &self.vertices[seg];
        let q = &self.vertices[seg + 1];
        if q.x != p.x {
            (pt.x - p.x) / (q.x - p.x)
        } else if q.y != p.y {
            (pt.y - p.y) / (q.y - p.y)
        } else {
            Rational::zero()
        }
    }

    fn translated(&self, dx: Rational, dy: Rational) -> BrokenLine {
        BrokenLine {
            vertices: self
                .vertices
                .iter()
                .map(|v| Point::new(v.x + dx, v.y + dy))
                .collect(),
            order: self.order.clone(),
            slots: self.slots,
        }
    }
}

/// Pareto border of the divisible-items polygon.
pub fn pareto_line(divisible: &[(i64, i64)]) -> BrokenLine {
    let order: Vec<usize> = ratio_order(divisible)
        .into_iter()
        .filter(|&i| divisible[i] != (0, 0))
        .collect();
    let mut x: i64 = 0;
    let mut y: i64 = order.iter().map(|&i| divisible[i].1).sum();
    let mut vertices = vec![Point::from_ints(x, y)];
    for &i in &order {
        x += divisible[i].0;
        y -= divisible[i].1;
        vertices.push(Point::from_ints(x, y));
    }
    BrokenLine {
        vertices,
        order,
        slots: divisible.len(),
    }
}

/// Which step of the adjusted-winner procedure produced the division.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AwStep {
    /// The first item alone outweighs everything B could get otherwise.
    FirstItemSplit,
    /// The last item is split.
    LastItemSplit,
    /// Balance reached exactly at an item boundary; nothing is split.
    Boundary,
    /// Item `r` is split.
    PivotSplit,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AwOutcome {
    /// Items in decreasing `a / b` order.
    pub order: Vec<usize>,
    /// 1-based position of the pivot item in `order`.
    pub rank: usize,
    /// Input index of the pivot item.
    pub pivot: usize,
    /// Share of the pivot item given to A.
    pub share: Rational,
    pub step: AwStep,
    /// Shares of every input item, in input order; `owners` is empty.
    pub division: Division,
    pub gains: GainPair,
}

/// Adjusted-winner division treating every item as divisible.
///
/// `values` must satisfy `sum(a) = sum(b) = total`. The result is equitable,
/// proportional and efficient, and splits at most one item.
pub fn adjusted_winner(values: &[(i64, i64)], total: i64) -> AwOutcome {
    assert!(
        !values.is_empty(),
        "adjusted winner needs at least one item"
    );
    let order = ratio_order(values);
    let n = order.len();
    let a: Vec<i64> = order.iter().map(|&i| values[i].0).collect();
    let b: Vec<i64> = order.iter().map(|&i| values[i].1).collect();
    let h = Rational::from(total as i128);
    let frac = |num: Rational, den: i64| num / Rational::from(den as i128);
    // prefix_a[r] = a_1 + ... + a_r, suffix_b[r] = b_{r+1} + ... + b_n (0-based r)
    let prefix_a: Vec<i64> = std::iter::once(0)
        .chain(a.iter().scan(0, |s, &v| {
            *s += v;
            Some(*s)
        }))
        .collect();
    let mut suffix_b = vec![0i64; n + 1];
    for r in (0..n).rev() {
        suffix_b[r] = suffix_b[r + 1] + b[r];
    }

    let (rank, share, step) = if a[0] > suffix_b[1] {
        (1, frac(h, a[0] + b[0]), AwStep::FirstItemSplit)
    } else if prefix_a[n - 1] <= b[n - 1] {
        (
            n,
            Rational::one() - frac(h, a[n - 1] + b[n - 1]),
            AwStep::LastItemSplit,
        )
    } else {
        // Smallest r with sum_{i<r} a_i <= sum_{i>=r} b_i and
        // sum_{i<=r} a_i > sum_{i>r} b_i.
        let r = (1..=n)
            .find(|&r| prefix_a[r - 1] <= suffix_b[r - 1] && prefix_a[r] > suffix_b[r])
            .expect("the balance condition changes sign between the first and last item");
        if prefix_a[r - 1] == suffix_b[r - 1] {
            (r, Rational::zero(), AwStep::Boundary)
        } else {
            let num = Rational::from((suffix_b[r - 1] - prefix_a[r - 1]) as i128);
            (r, frac(num, a[r - 1] + b[r - 1]), AwStep::PivotSplit)
        }
    };

    let mut shares = vec![Rational::zero(); n];
    for &i in &order[..rank - 1] {
        shares[i] = Rational::one();
    }
    let pivot = order[rank - 1];
    shares[pivot] = share;
    let mut ga = Rational::zero();
    let mut gb = Rational::zero();
    for (i, &(va, vb)) in values.iter().enumerate() {
        ga += shares[i] * Rational::from(va as i128);
        gb += (Rational::one() - shares[i]) * Rational::from(vb as i128);
    }
    AwOutcome {
        order,
        rank,
        pivot,
        share,
        step,
        division: Division::new(shares, Vec::new()),
        gains: GainPair::new(ga, gb),
    }
}

/// Divisible Pareto line translated by an undominated indivisible gain pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftedLine {
    pub base: Point,
    pub line: BrokenLine,
    pub owners: Vec<Owner>,
}

impl ShiftedLine {
    pub fn vertex_division(&self, k: usize) -> Division {
        Division::new(self.line.vertex_shares(k), self.owners.clone())
    }

    /// Division realizing `pt`, which must lie on segment `seg`.
    pub fn division_at(&self, seg: usize, pt: &Point) -> Division {
        let t = self.line.locate(seg, pt);
        Division::new(self.line.shares_at(seg, t), self.owners.clone())
    }
}

pub fn shifted_lines(line: &BrokenLine, points: &[ParetoPoint]) -> Vec<ShiftedLine> {
    points
        .iter()
        .map(|w| {
            let base = Point::from_ints(w.x, w.y);
            ShiftedLine {
                line: line.translated(base.x, base.y),
                base,
                owners: w.owners.clone(),
            }
        })
        .collect()
}

/// Whether some point of segment `[p, q]` (x non-decreasing, y
/// non-increasing) dominates `pt`.
fn segment_dominates(p: &Point, q: &Point, pt: &Point) -> bool {
    if q.x < pt.x {
        return false;
    }
    // Highest point of the segment at or to the right of pt.x.
    let x0 = if pt.x > p.x { pt.x } else { p.x };
    let y0 = if x0 == p.x {
        p.y
    } else {
        p.y + (x0 - p.x) * (q.y - p.y) / (q.x - p.x)
    };
    if y0 > pt.y || (y0 == pt.y && x0 > pt.x) {
        return true;
    }
    // Only a horizontal continuation to the right can still dominate.
    q.x >= pt.x && q.y >= pt.y && q != pt
}

/// True iff some point on some line is at least as good as `q` for both
/// participants and strictly better for one.
pub fn is_dominated(q: &Point, lines: &[ShiftedLine]) -> bool {
    lines.iter().any(|l| {
        l.line
            .segments()
            .iter()
            .any(|(p, e)| segment_dominates(p, e, q))
    })
}

/// Maximal undominated piece of one segment of one shifted line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnvelopeSegment {
    pub p1: Point,
    pub p2: Point,
    pub closed1: bool,
    pub closed2: bool,
    /// Index of the originating shifted line.
    pub source: usize,
    /// Segment of the source line the piece lies on.
    pub segment: usize,
}

impl EnvelopeSegment {
    pub fn is_point(&self) -> bool {
        self.p1 == self.p2
    }

    /// Point of the piece where `x = y`, if the piece contains one.
    pub fn diagonal_point(&self) -> Option<Point> {
        let f1 = self.p1.lean();
        let f2 = self.p2.lean();
        if f1.is_positive() || f2.is_negative() {
            return None;
        }
        if f1 == f2 {
            return self.closed1.then_some(self.p1);
        }
        let t = -f1 / (f2 - f1);
        let inside = (t.is_positive() && t < Rational::one())
            || (t.is_zero() && self.closed1)
            || (t.is_one() && self.closed2);
        inside.then(|| self.p1.lerp(&self.p2, t))
    }

    /// Points of the piece that can be reported: closed endpoints and the
    /// diagonal crossing.
    pub fn attained_points(&self) -> Vec<Point> {
        let mut pts = Vec::new();
        if self.closed1 {
            pts.push(self.p1);
        }
        if self.closed2 && !self.is_point() {
            pts.push(self.p2);
        }
        if let Some(d) = self.diagonal_point() {
            if !pts.contains(&d) {
                pts.push(d);
            }
        }
        pts
    }
}

struct FlatSegment {
    p: Point,
    q: Point,
    source: usize,
    segment: usize,
}

/// Parameters on `[p, p + d]` where the segment meets a line that bounds
/// the region dominated by `[tp, tq]`.
fn critical_params(p: &Point, d: &Point, tp: &Point, tq: &Point, out: &mut Vec<Rational>) {
    for c in [tp.x, tq.x] {
        if !d.x.is_zero() {
            out.push((c - p.x) / d.x);
        }
    }
    for c in [tp.y, tq.y] {
        if !d.y.is_zero() {
            out.push((c - p.y) / d.y);
        }
    }
    let (tx, ty) = (tq.x - tp.x, tq.y - tp.y);
    let den = cross(tx, ty, d.x, d.y);
    if !den.is_zero() {
        out.push(cross(tx, ty, tp.x - p.x, tp.y - p.y) / den);
    }
}

/// Undominated part of the union of the shifted lines.
///
/// Each segment is cut at every parameter where it can enter or leave the
/// region dominated by another segment; between consecutive cuts the
/// dominance status is constant, so testing the cuts and the midpoints
/// decides it exactly. Overlaps between collinear pieces of different lines
/// are reported once. The result is sorted by `x`.
pub fn envelope(lines: &[ShiftedLine]) -> Vec<EnvelopeSegment> {
    let flat: Vec<FlatSegment> = lines
        .iter()
        .enumerate()
        .flat_map(|(source, l)| {
            l.line
                .segments()
                .into_iter()
                .enumerate()
                .map(move |(segment, (p, q))| FlatSegment {
                    p,
                    q,
                    source,
                    segment,
                })
        })
        .collect();

    let mut pieces = Vec::new();
    for s in &flat {
        // Segments that could dominate some point of s.
        let rivals: Vec<&FlatSegment> = flat
            .iter()
            .filter(|t| t.q.x >= s.p.x && t.p.y >= s.q.y)
            .collect();
        let dominated = |pt: &Point| rivals.iter().any(|t| segment_dominates(&t.p, &t.q, pt));

        if s.p == s.q {
            if !dominated(&s.p) {
                pieces.push(EnvelopeSegment {
                    p1: s.p,
                    p2: s.p,
                    closed1: true,
                    closed2: true,
                    source: s.source,
                    segment: s.segment,
                });
            }
            continue;
        }

        let d = Point::new(s.q.x - s.p.x, s.q.y - s.p.y);
        let mut ts = vec![Rational::zero(), Rational::one()];
        for t in &rivals {
            critical_params(&s.p, &d, &t.p, &t.q, &mut ts);
        }
        ts.retain(|t| !t.is_negative() && *t <= Rational::one());
        ts.sort();
        ts.dedup();

        // Alternating status: point ts[0], gap, point ts[1], ..., point ts[n].
        let two = Rational::from(2);
        let mut status = Vec::with_capacity(2 * ts.len() - 1);
        for (i, t) in ts.iter().enumerate() {
            status.push(!dominated(&s.p.lerp(&s.q, *t)));
            if i + 1 < ts.len() {
                let mid = (t + ts[i + 1]) / two;
                status.push(!dominated(&s.p.lerp(&s.q, mid)));
            }
        }

        let param = |e: usize| ts[e / 2 + (e % 2)];
        let mut e = 0;
        while e < status.len() {
            if !status[e] {
                e += 1;
                continue;
            }
            let start = e;
            while e + 1 < status.len() && status[e + 1] {
                e += 1;
            }
            let end = e;
            // Gap elements sit between ts[i] and ts[i + 1]; an interval that
            // starts on a gap starts open at ts[i].
            let t1 = ts[start / 2];
            let t2 = param(end);
            pieces.push(EnvelopeSegment {
                p1: s.p.lerp(&s.q, t1),
                p2: s.p.lerp(&s.q, t2),
                closed1: start % 2 == 0,
                closed2: end % 2 == 0,
                source: s.source,
                segment: s.segment,
            });
            e += 1;
        }
    }

    pieces.sort_by(|u, v| {
        u.p1.x
            .cmp(&v.p1.x)
            .then(v.closed1.cmp(&u.closed1))
            .then(v.p2.x.cmp(&u.p2.x))
            .then(u.source.cmp(&v.source))
    });

    // Each x carries at most one undominated point, so overlapping pieces
    // coincide where they overlap; keep what is not yet covered.
    let mut out: Vec<EnvelopeSegment> = Vec::new();
    let mut covered: Option<(Rational, bool)> = None;
    for mut piece in pieces {
        if let Some((cx, cc)) = covered {
            if piece.p2.x < cx || (piece.p2.x == cx && (cc || !piece.closed2)) {
                continue;
            }
            if piece.p1.x < cx {
                let t = (cx - piece.p1.x) / (piece.p2.x - piece.p1.x);
                piece.p1 = piece.p1.lerp(&piece.p2, t);
                piece.closed1 = !cc;
            }
        }
        covered = Some((piece.p2.x, piece.closed2));
        out.push(piece);
    }
    out
}
