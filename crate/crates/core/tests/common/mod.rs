//! Test-only oracles and seeded generators, independent of the library's
//! solver and constructions.

#![allow(dead_code)]

use itertools::Itertools;
use num_traits::{Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use smdc_core::rational::{int, ratio, zero};
use smdc_core::region::{EntropyProfile, WeightVector};
use smdc_core::Rational;

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `p/q` with `p ∈ 0..=max_num`, `q ∈ 1..=max_den`; roughly one in eight
/// entries is forced to zero.
pub fn random_rational(rng: &mut ChaCha8Rng, max_num: i64, max_den: i64) -> Rational {
    if rng.gen_ratio(1, 8) {
        return zero();
    }
    ratio(rng.gen_range(0..=max_num), rng.gen_range(1..=max_den))
}

pub fn random_lambda(rng: &mut ChaCha8Rng, l: usize) -> WeightVector {
    WeightVector::new((0..l).map(|_| random_rational(rng, 20, 6)).collect()).unwrap()
}

/// Entropies with `H_1 > 0`.
pub fn random_entropies(rng: &mut ChaCha8Rng, len: usize) -> EntropyProfile {
    let mut h: Vec<Rational> = (0..len).map(|_| random_rational(rng, 12, 4)).collect();
    if h[0].is_zero() {
        h[0] = int(1);
    }
    EntropyProfile::new(h).unwrap()
}

/// `f_α(λ)` in closed form: with `λ` sorted nonincreasingly,
/// `min_{0≤j<α} (Σ_{i>j} λ_(i)) / (α−j)`.
pub fn closed_form_f(lambda: &[Rational], alpha: usize) -> Rational {
    let mut sorted = lambda.to_vec();
    sorted.sort_by(|a, b| b.cmp(a));
    (0..alpha).map(|j| sorted[j..].iter().sum::<Rational>() / int((alpha - j) as i64)).min().expect("α ≥ 1")
}

/// Solves `M x = b` exactly; `None` when `M` is singular.
fn solve(mut m: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        b.swap(col, pivot);
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let factor = &m[r][col] / &m[col][col];
                let pivot_row = m[col].clone();
                for (x, p) in m[r].iter_mut().zip(&pivot_row).skip(col) {
                    *x -= &factor * p;
                }
                let delta = &factor * &b[col];
                b[r] -= delta;
            }
        }
    }
    Some((0..n).map(|i| &b[i] / &m[i][i]).collect())
}

/// `max Σ x` over `{x ≥ 0, A x ≤ cap}` by enumerating every basic solution.
pub fn brute_force_packing_max(a: &[Vec<Rational>], cap: &[Rational]) -> Rational {
    let n = a[0].len();
    let mut rows: Vec<(Vec<Rational>, Rational)> = a.iter().cloned().zip(cap.iter().cloned()).collect();
    for j in 0..n {
        let mut e = vec![zero(); n];
        e[j] = int(-1);
        rows.push((e, zero()));
    }
    let mut best: Option<Rational> = None;
    for tight in (0..rows.len()).combinations(n) {
        let m = tight.iter().map(|&i| rows[i].0.clone()).collect();
        let b = tight.iter().map(|&i| rows[i].1.clone()).collect();
        let Some(x) = solve(m, b) else { continue };
        let feasible = rows.iter().all(|(row, rhs)| row.iter().zip(&x).map(|(p, q)| p * q).sum::<Rational>() <= *rhs);
        if feasible {
            let value: Rational = x.iter().sum();
            if best.as_ref().is_none_or(|v| value > *v) {
                best = Some(value);
            }
        }
    }
    best.expect("the origin is a vertex")
}

/// Packing optimum over `α`-subsets of `{1..L}` by vertex enumeration.
pub fn brute_force_f(lambda: &[Rational], alpha: usize) -> Rational {
    let l = lambda.len();
    let sets: Vec<Vec<usize>> = (1..=l).combinations(alpha).collect();
    let a: Vec<Vec<Rational>> =
        (1..=l).map(|enc| sets.iter().map(|u| if u.contains(&enc) { int(1) } else { zero() }).collect()).collect();
    brute_force_packing_max(&a, lambda)
}

/// Exact check that `levels[α−1][l−1]` (plus an optional all-access column)
/// meets every reconstruction row and every capacity.
pub fn allocation_is_feasible(
    levels: &[Vec<Rational>],
    has_all_access: bool,
    rates: &[Rational],
    r0: Option<&Rational>,
    entropies: &[Rational],
) -> bool {
    let l = rates.len();
    let offset = usize::from(has_all_access);
    if levels.iter().flatten().any(|x| x.is_negative()) {
        return false;
    }
    for (alpha, h) in (1..=entropies.len()).zip(entropies) {
        let row = &levels[alpha - 1];
        for u in (1..=l).combinations(alpha) {
            let mut s: Rational = u.iter().map(|&enc| &row[enc - 1 + offset]).sum();
            if has_all_access {
                s += &row[0];
            }
            if s < *h {
                return false;
            }
        }
    }
    let caps_ok =
        (1..=l).all(|enc| levels.iter().map(|row| &row[enc - 1 + offset]).sum::<Rational>() <= rates[enc - 1]);
    let r0_ok = match (has_all_access, r0) {
        (true, Some(r0)) => levels.iter().map(|row| &row[0]).sum::<Rational>() <= *r0,
        (false, None) => true,
        _ => false,
    };
    caps_ok && r0_ok
}
