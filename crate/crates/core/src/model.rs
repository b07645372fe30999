//! Problems, divisions and the gains they produce.
//!
//! A [`Problem`] holds every item with both participants' integer valuations.
//! Divisible items are split by a share `x` in `[0, 1]` going to participant
//! A; indivisible items are owned wholly by one participant. Gains are exact
//! [`Rational`]s measured in each participant's own units.

use std::collections::HashSet;
use std::fmt;

use num_rational::Ratio;
use num_traits::{One, Zero};
use thiserror::Error;

/// Exact rational number used for every gain, share and coordinate.
pub type Rational = Ratio<i128>;

/// Largest accepted common total. Keeps every intermediate product of the
/// exact arithmetic inside 128 bits.
pub const MAX_TOTAL: i64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("problem has no items")]
    Empty,
    #[error("totals differ: participant A sums to {a}, participant B sums to {b}")]
    TotalsMismatch { a: i64, b: i64 },
    #[error("total value is zero")]
    ZeroTotal,
    #[error("total value {0} exceeds the supported maximum {MAX_TOTAL}")]
    TotalTooLarge(i64),
    #[error("duplicate item name `{0}`")]
    DuplicateName(String),
    #[error("invalid item name `{0}`: names must be non-empty and contain no comma")]
    InvalidName(String),
    #[error("item `{0}` has a negative value")]
    NegativeValue(String),
    #[error("division does not match the problem: {0}")]
    ShapeMismatch(String),
}

impl ModelError {
    /// Guard violations are distinguished from ordinary validation failures.
    pub fn is_guard(&self) -> bool {
        matches!(self, ModelError::TotalTooLarge(_))
    }
}

/// Who receives an indivisible item.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Owner {
    // B sorts first so that owner vectors compare like Boolean vectors with
    // A = 1.
    B,
    A,
}

impl Owner {
    pub fn from_bool(to_a: bool) -> Owner {
        if to_a {
            Owner::A
        } else {
            Owner::B
        }
    }

    pub fn is_a(self) -> bool {
        self == Owner::A
    }

    pub fn flip(self) -> Owner {
        match self {
            Owner::A => Owner::B,
            Owner::B => Owner::A,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Item {
    pub name: String,
    pub value_a: i64,
    pub value_b: i64,
    pub divisible: bool,
}

/// Counts of divisible and indivisible items plus the common total.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Signature {
    pub divisible: usize,
    pub indivisible: usize,
    pub total: i64,
}

/// A validated division problem.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Problem {
    items: Vec<Item>,
    total: i64,
    divisible: Vec<usize>,
    indivisible: Vec<usize>,
}

impl Problem {
    /// Builds a problem from `(name, divisible, value_a, value_b)` rows,
    /// keeping their order.
    pub fn new<I, S>(rows: I) -> Result<Problem, ModelError>
    where
        I: IntoIterator<Item = (S, bool, i64, i64)>,
        S: Into<String>,
    {
        let mut items = Vec::new();
        let mut seen = HashSet::new();
        for (name, divisible, value_a, value_b) in rows {
            let name = name.into();
            if name.trim().is_empty() || name.contains(',') {
                return Err(ModelError::InvalidName(name));
            }
            if value_a < 0 || value_b < 0 {
                return Err(ModelError::NegativeValue(name));
            }
            if !seen.insert(name.clone()) {
                return Err(ModelError::DuplicateName(name));
            }
            items.push(Item {
                name,
                value_a,
                value_b,
                divisible,
            });
        }
        Problem::from_items(items)
    }

    pub fn from_items(items: Vec<Item>) -> Result<Problem, ModelError> {
        if items.is_empty() {
            return Err(ModelError::Empty);
        }
        let mut sum_a: i64 = 0;
        let mut sum_b: i64 = 0;
        for item in &items {
            if item.value_a < 0 || item.value_b < 0 {
                return Err(ModelError::NegativeValue(item.name.clone()));
            }
            sum_a = sum_a.saturating_add(item.value_a);
            sum_b = sum_b.saturating_add(item.value_b);
        }
        if sum_a != sum_b {
            return Err(ModelError::TotalsMismatch { a: sum_a, b: sum_b });
        }
        if sum_a == 0 {
            return Err(ModelError::ZeroTotal);
        }
        if sum_a > MAX_TOTAL {
            return Err(ModelError::TotalTooLarge(sum_a));
        }
        let divisible = (0..items.len()).filter(|&i| items[i].divisible).collect();
        let indivisible = (0..items.len()).filter(|&i| !items[i].divisible).collect();
        Ok(Problem {
            items,
            total: sum_a,
            divisible,
            indivisible,
        })
    }

    pub fn items(&self) -> &[Item] {
        &self.items
    }

    /// The common total `H`.
    pub fn total(&self) -> i64 {
        self.total
    }

    /// Item indices of the divisible items, in problem order.
    pub fn divisible(&self) -> &[usize] {
        &self.divisible
    }

    /// Item indices of the indivisible items, in problem order.
    pub fn indivisible(&self) -> &[usize] {
        &self.indivisible
    }

    pub fn signature(&self) -> Signature {
        Signature {
            divisible: self.divisible.len(),
            indivisible: self.indivisible.len(),
            total: self.total,
        }
    }

    /// `(value_a, value_b)` of the divisible items.
    pub fn divisible_values(&self) -> Vec<(i64, i64)> {
        self.divisible
            .iter()
            .map(|&i| (self.items[i].value_a, self.items[i].value_b))
            .collect()
    }

    /// `(value_a, value_b)` of the indivisible items.
    pub fn indivisible_values(&self) -> Vec<(i64, i64)> {
        self.indivisible
            .iter()
            .map(|&i| (self.items[i].value_a, self.items[i].value_b))
            .collect()
    }

    /// Same items with every valuation multiplied by `factor`.
    pub fn scaled(&self, factor: i64) -> Result<Problem, ModelError> {
        let items = self
            .items
            .iter()
            .map(|it| Item {
                value_a: it.value_a * factor,
                value_b: it.value_b * factor,
                ..it.clone()
            })
            .collect();
        Problem::from_items(items)
    }

    pub fn item_index(&self, name: &str) -> Option<usize> {
        self.items.iter().position(|it| it.name == name)
    }
}

/// A division `<x, sigma>`: shares of the divisible items going to A and
/// owners of the indivisible items, both in problem order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Division {
    pub shares: Vec<Rational>,
    pub owners: Vec<Owner>,
}

impl Division {
    pub fn new(shares: Vec<Rational>, owners: Vec<Owner>) -> Division {
        Division { shares, owners }
    }

    pub fn all_to(p: &Problem, owner: Owner) -> Division {
        let share = if owner.is_a() {
            Rational::one()
        } else {
            Rational::zero()
        };
        Division {
            shares: vec![share; p.divisible().len()],
            owners: vec![owner; p.indivisible().len()],
        }
    }

    /// Flips every share and every owner.
    pub fn complement(&self) -> Division {
        Division {
            shares: self.shares.iter().map(|x| Rational::one() - x).collect(),
            owners: self.owners.iter().map(|o| o.flip()).collect(),
        }
    }

    /// Number of divisible items that are actually split.
    pub fn split_count(&self) -> usize {
        self.shares
            .iter()
            .filter(|x| !x.is_zero() && !x.is_one())
            .count()
    }

    /// Ordering key: owners as a Boolean vector (A = 1), then shares.
    pub fn tie_key(&self) -> (Vec<Owner>, Vec<Rational>) {
        (self.owners.clone(), self.shares.clone())
    }

    pub fn check_shape(&self, p: &Problem) -> Result<(), ModelError> {
        if self.shares.len() != p.divisible().len() {
            return Err(ModelError::ShapeMismatch(format!(
                "{} shares for {} divisible items",
                self.shares.len(),
                p.divisible().len()
            )));
        }
        if self.owners.len() != p.indivisible().len() {
            return Err(ModelError::ShapeMismatch(format!(
                "{} owners for {} indivisible items",
                self.owners.len(),
                p.indivisible().len()
            )));
        }
        if let Some(x) = self
            .shares
            .iter()
            .find(|x| **x < Rational::zero() || **x > Rational::one())
        {
            return Err(ModelError::ShapeMismatch(format!(
                "share {x} outside [0, 1]"
            )));
        }
        Ok(())
    }
}

/// Gains `(G_A, G_B)` of a division, each in its owner's units.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GainPair {
    pub a: Rational,
    pub b: Rational,
}

impl GainPair {
    pub fn new(a: Rational, b: Rational) -> GainPair {
        GainPair { a, b }
    }

    pub fn from_ints(a: i64, b: i64) -> GainPair {
        GainPair::new(Rational::from(a as i128), Rational::from(b as i128))
    }

    pub fn min(&self) -> Rational {
        self.a.min(self.b)
    }

    pub fn gap(&self) -> Rational {
        if self.a >= self.b {
            self.a - self.b
        } else {
            self.b - self.a
        }
    }
}

impl fmt::Display for GainPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a, self.b)
    }
}

/// Exact gains of `d` in `p`.
pub fn gains(p: &Problem, d: &Division) -> Result<GainPair, ModelError> {
    d.check_shape(p)?;
    let mut ga = Rational::zero();
    let mut gb = Rational::zero();
    for (&idx, x) in p.divisible().iter().zip(&d.shares) {
        let item = &p.items()[idx];
        ga += x * Rational::from(item.value_a as i128);
        gb += (Rational::one() - x) * Rational::from(item.value_b as i128);
    }
    for (&idx, owner) in p.indivisible().iter().zip(&d.owners) {
        let item = &p.items()[idx];
        match owner {
            Owner::A => ga += Rational::from(item.value_a as i128),
            Owner::B => gb += Rational::from(item.value_b as i128),
        }
    }
    Ok(GainPair { a: ga, b: gb })
}

pub fn complement(d: &Division) -> Division {
    d.complement()
}

/// `g` is at least as good as `h` for both participants and strictly better
/// for one.
pub fn dominates(g: &GainPair, h: &GainPair) -> bool {
    g.a >= h.a && g.b >= h.b && (g.a > h.a || g.b > h.b)
}

/// Both gains reach half of the total. Compared as `2 * gain >= H`.
pub fn is_proportional(p: &Problem, g: &GainPair) -> bool {
    is_proportional_for_total(p.total(), g)
}

pub fn is_proportional_for_total(total: i64, g: &GainPair) -> bool {
    let two = Rational::from(2);
    let h = Rational::from(total as i128);
    g.a * two >= h && g.b * two >= h
}

pub fn is_equitable(g: &GainPair) -> bool {
    g.a == g.b
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i128, d: i128) -> Rational {
        Rational::new(n, d)
    }

    fn example3() -> Problem {
        Problem::new(vec![
            ("item1", true, 10, 30),
            ("item2", true, 10, 20),
            ("item3", false, 35, 18),
            ("item4", false, 30, 20),
            ("item5", false, 15, 12),
        ])
        .unwrap()
    }

    #[test]
    fn example3_signature() {
        let p = example3();
        assert_eq!(
            p.signature(),
            Signature {
                divisible: 2,
                indivisible: 3,
                total: 100
            }
        );
        assert_eq!(p.items()[0].name, "item1");
    }

    #[test]
    fn validation_errors() {
        assert_eq!(
            Problem::new(vec![("only", false, 10, 20)]).unwrap_err(),
            ModelError::TotalsMismatch { a: 10, b: 20 }
        );
        assert_eq!(
            Problem::new(vec![("only", true, 0, 0)]).unwrap_err(),
            ModelError::ZeroTotal
        );
        assert_eq!(
            Problem::new(vec![("x", true, 1, 1), ("x", true, 1, 1)]).unwrap_err(),
            ModelError::DuplicateName("x".into())
        );
        assert_eq!(
            Problem::new(vec![("x", true, -1, 1)]).unwrap_err(),
            ModelError::NegativeValue("x".into())
        );
        assert!(matches!(
            Problem::new(vec![("a,b", true, 1, 1)]).unwrap_err(),
            ModelError::InvalidName(_)
        ));
        assert_eq!(
            Problem::new(Vec::<(String, bool, i64, i64)>::new()).unwrap_err(),
            ModelError::Empty
        );
        let err = Problem::new(vec![("big", true, MAX_TOTAL + 1, MAX_TOTAL + 1)]).unwrap_err();
        assert!(err.is_guard());
    }

    #[test]
    fn gains_of_the_two_example3_divisions() {
        let p = example3();
        // A: items 3 and 5 plus 2/3 of item 2; B: item 4, item 1, 1/3 of item 2.
        let d = Division::new(vec![r(0, 1), r(2, 3)], vec![Owner::A, Owner::B, Owner::A]);
        assert_eq!(gains(&p, &d).unwrap(), GainPair::new(r(170, 3), r(170, 3)));
        let d = Division::new(vec![r(0, 1), r(0, 1)], vec![Owner::A, Owner::A, Owner::B]);
        assert_eq!(gains(&p, &d).unwrap(), GainPair::from_ints(65, 62));
        let all_a = Division::all_to(&p, Owner::A);
        assert_eq!(gains(&p, &all_a).unwrap(), GainPair::from_ints(100, 0));
    }

    #[test]
    fn shape_mismatch() {
        let p = example3();
        let d = Division::new(vec![r(0, 1)], vec![Owner::A; 3]);
        assert!(matches!(gains(&p, &d), Err(ModelError::ShapeMismatch(_))));
        let d = Division::new(vec![r(3, 2), r(0, 1)], vec![Owner::A; 3]);
        assert!(matches!(gains(&p, &d), Err(ModelError::ShapeMismatch(_))));
    }

    #[test]
    fn complement_of_example6_equitable_division() {
        let p = Problem::new(vec![
            ("item1", true, 5, 5),
            ("item2", false, 40, 49),
            ("item3", false, 10, 1),
            ("item4", false, 20, 25),
            ("item5", false, 25, 20),
        ])
        .unwrap();
        let d = Division::new(vec![r(0, 1)], vec![Owner::A, Owner::A, Owner::B, Owner::B]);
        assert_eq!(gains(&p, &d).unwrap(), GainPair::from_ints(50, 50));
        let c = complement(&d);
        assert_eq!(c.owners, vec![Owner::B, Owner::B, Owner::A, Owner::A]);
        assert_eq!(c.shares, vec![r(1, 1)]);
        assert_eq!(gains(&p, &c).unwrap(), GainPair::from_ints(50, 50));
        assert_eq!(complement(&c), d);
        assert_eq!(
            Division::all_to(&p, Owner::A).complement(),
            Division::all_to(&p, Owner::B)
        );
    }

    #[test]
    fn predicates() {
        let h = GainPair::new(r(170, 3), r(170, 3));
        assert!(dominates(&GainPair::from_ints(65, 62), &h));
        let x = GainPair::from_ints(55, 50);
        let y = GainPair::from_ints(51, 60);
        assert!(!dominates(&x, &y) && !dominates(&y, &x));
        assert!(!dominates(&x, &x));

        let p = example3();
        assert!(is_proportional(&p, &GainPair::from_ints(51, 60)));
        assert!(!is_proportional(&p, &GainPair::from_ints(49, 40)));
        assert!(is_proportional(&p, &GainPair::from_ints(50, 50)));
        // Odd total: half is 3/2.
        assert!(is_proportional_for_total(
            3,
            &GainPair::new(r(3, 2), r(2, 1))
        ));
        assert!(!is_proportional_for_total(3, &GainPair::from_ints(1, 2)));

        assert!(is_equitable(&h));
        assert!(!is_equitable(&GainPair::from_ints(55, 54)));
        assert!(is_equitable(&GainPair::from_ints(0, 0)));
    }

    #[test]
    fn zero_valued_items_do_not_change_gains() {
        let p = Problem::new(vec![("a", true, 4, 4), ("z", false, 0, 0)]).unwrap();
        let d1 = Division::new(vec![r(1, 2)], vec![Owner::A]);
        let d2 = Division::new(vec![r(1, 2)], vec![Owner::B]);
        assert_eq!(gains(&p, &d1).unwrap(), gains(&p, &d2).unwrap());
    }
}
