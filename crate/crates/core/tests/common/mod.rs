#![allow(dead_code)]

use std::path::PathBuf;

use fairdiv::cli::parse_problem_file;
use fairdiv::Problem;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Splits `total` into `parts` values of at most `cap` each.
fn composition(rng: &mut impl Rng, total: i64, parts: usize, cap: i64) -> Vec<i64> {
    let mut v = vec![0; parts];
    for _ in 0..total {
        loop {
            let i = rng.gen_range(0..parts);
            if v[i] < cap {
                v[i] += 1;
                break;
            }
        }
    }
    v
}

/// Random problem with at most `max_l` divisible and `max_m` indivisible
/// items, values at most `max_value` and total at most `max_total`.
pub fn random_problem(
    rng: &mut impl Rng,
    max_l: usize,
    max_m: usize,
    max_value: i64,
    max_total: i64,
) -> Problem {
    let l = rng.gen_range(if max_m == 0 { 1 } else { 0 }..=max_l);
    let m = rng.gen_range(if l == 0 { 1 } else { 0 }..=max_m);
    let n = l + m;
    let h = rng.gen_range(1..=max_total.min(max_value * n as i64));
    let a = composition(rng, h, n, max_value);
    let b = composition(rng, h, n, max_value);
    Problem::new((0..n).map(|i| (format!("item{}", i + 1), i < l, a[i], b[i])))
        .expect("generated problems are valid")
}

/// The instance family used by the equivalence suites.
pub fn small_problem(rng: &mut impl Rng) -> Problem {
    random_problem(rng, 3, 10, 30, 60)
}

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(format!("{name}.csv"))
}

pub fn fixture(name: &str) -> Problem {
    let text = std::fs::read_to_string(fixture_path(name)).expect("fixture exists");
    parse_problem_file(&text).expect("fixture parses")
}
