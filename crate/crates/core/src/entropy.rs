//! Brute-force entropies of small joint distributions and numeric checks of
//! the subset entropy inequalities.
//!
//! Marginals are summed exactly in rationals; only the final `−p log2 p` terms
//! are floating point. An inequality holds when `lhs − rhs ≥ −TOLERANCE`.

use std::collections::HashMap;
use std::fmt::Write as _;

use itertools::Itertools;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::combinatorics::{subsets_of_size, window, EncoderSet};
use crate::cover::{check_cover, CoefficientChain, ConditionalAssignment, FractionalCover};
use crate::error::{invalid, Error, Result};
use crate::rational::{self, binomial, factorial, int, one, zero, Rational};

pub const TOLERANCE: f64 = 1e-9;
pub const MAX_STATES: usize = 10_000_000;
/// Denominator of the random-pmf grid.
pub const GRID: i64 = 256;

/// Dense joint distribution of `L` discrete variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JointPMF {
    alphabet_sizes: Vec<usize>,
    probabilities: Vec<Rational>,
}

impl JointPMF {
    /// Cells are listed in row-major order, variable 1 slowest.
    pub fn new(alphabet_sizes: Vec<usize>, probabilities: Vec<Rational>) -> Result<Self> {
        let states = state_count(&alphabet_sizes)?;
        if probabilities.len() != states {
            return Err(Error::Dimension(format!("{} probabilities for {states} states", probabilities.len())));
        }
        if probabilities.iter().any(|p| p.is_negative()) {
            return invalid("negative probability");
        }
        let total: Rational = probabilities.iter().sum();
        if total != one() {
            return invalid(format!("probabilities sum to {total}, not 1"));
        }
        Ok(Self { alphabet_sizes, probabilities })
    }

    /// Sparse construction; omitted cells are zero.
    pub fn from_cells(
        alphabet_sizes: Vec<usize>,
        cells: impl IntoIterator<Item = (Vec<usize>, Rational)>,
    ) -> Result<Self> {
        let states = state_count(&alphabet_sizes)?;
        let mut probabilities = vec![zero(); states];
        for (symbols, p) in cells {
            let idx = flat_index(&alphabet_sizes, &symbols)?;
            probabilities[idx] += p;
        }
        Self::new(alphabet_sizes, probabilities)
    }

    pub fn uniform(alphabet_sizes: Vec<usize>) -> Result<Self> {
        let states = state_count(&alphabet_sizes)?;
        let p = Rational::new(1.into(), (states as i64).into());
        Self::new(alphabet_sizes, vec![p; states])
    }

    /// `L` copies of one uniform variable on `size` symbols.
    pub fn copies(variables: usize, size: usize) -> Result<Self> {
        let p = Rational::new(1.into(), (size as i64).into());
        Self::from_cells(vec![size; variables], (0..size).map(|s| (vec![s; variables], p.clone())))
    }

    /// Product of the given marginals.
    pub fn product(marginals: &[Vec<Rational>]) -> Result<Self> {
        let sizes: Vec<usize> = marginals.iter().map(Vec::len).collect();
        state_count(&sizes)?;
        let probabilities = marginals
            .iter()
            .map(|m| m.iter())
            .multi_cartesian_product()
            .map(|cell| cell.into_iter().product())
            .collect();
        if marginals.is_empty() {
            return invalid("no variables");
        }
        Self::new(sizes, probabilities)
    }

    pub fn variable_count(&self) -> usize {
        self.alphabet_sizes.len()
    }

    pub fn alphabet_sizes(&self) -> &[usize] {
        &self.alphabet_sizes
    }

    pub fn probabilities(&self) -> &[Rational] {
        &self.probabilities
    }

    /// Relabels variables: variable `i` of the result is variable `perm[i]`
    /// of `self` (both 0-based).
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let l = self.variable_count();
        if perm.len() != l || !perm.iter().copied().sorted().eq(0..l) {
            return invalid("not a permutation of the variables");
        }
        let sizes: Vec<usize> = perm.iter().map(|&i| self.alphabet_sizes[i]).collect();
        let mut probabilities = vec![zero(); self.probabilities.len()];
        for (idx, p) in self.nonzero_cells() {
            let symbols = self.symbols_of(idx);
            let moved: Vec<usize> = perm.iter().map(|&i| symbols[i]).collect();
            probabilities[flat_index(&sizes, &moved)?] = p.clone();
        }
        Ok(Self { alphabet_sizes: sizes, probabilities })
    }

    fn nonzero_cells(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.probabilities.iter().enumerate().filter(|(_, p)| !p.is_zero())
    }

    fn symbols_of(&self, mut idx: usize) -> Vec<usize> {
        let mut symbols = vec![0; self.variable_count()];
        for (slot, &k) in symbols.iter_mut().zip(&self.alphabet_sizes).rev() {
            *slot = idx % k;
            idx /= k;
        }
        symbols
    }

    /// Exact marginal on the given 1-based variables, keyed by the projected
    /// symbols.
    pub fn marginal(&self, set: &EncoderSet) -> Result<HashMap<Vec<usize>, Rational>> {
        self.check_set(set)?;
        let mut out: HashMap<Vec<usize>, Rational> = HashMap::new();
        for (idx, p) in self.nonzero_cells() {
            let symbols = self.symbols_of(idx);
            let key = set.members().iter().map(|&m| symbols[m - 1]).collect();
            *out.entry(key).or_insert_with(zero) += p;
        }
        Ok(out)
    }

    fn check_set(&self, set: &EncoderSet) -> Result<()> {
        if set.ground_size() != self.variable_count() {
            return Err(Error::Dimension(format!(
                "set over {} variables, pmf has {}",
                set.ground_size(),
                self.variable_count()
            )));
        }
        Ok(())
    }

    /// Text form: header `L k_1 … k_L`, then one `i_1 … i_L p/q` line per
    /// nonzero cell.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.variable_count(), self.alphabet_sizes.iter().join(" "));
        for (idx, p) in self.nonzero_cells() {
            let _ = writeln!(out, "{} {}", self.symbols_of(idx).iter().join(" "), rational::fmt(p));
        }
        out
    }

    pub fn parse_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|s| !s.is_empty() && !s.starts_with('#'));
        let header = lines.next().ok_or_else(|| Error::Format("empty pmf text".into()))?;
        let numbers: Vec<usize> = header
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::Format(format!("bad pmf header {header:?}"))))
            .collect::<Result<_>>()?;
        let (&l, sizes) = numbers.split_first().ok_or_else(|| Error::Format("bad pmf header".into()))?;
        if l == 0 || sizes.len() != l {
            return Err(Error::Format(format!("header declares L = {l} with {} alphabet sizes", sizes.len())));
        }
        let mut cells = Vec::new();
        for line in lines {
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != l + 1 {
                return Err(Error::Format(format!("pmf line {line:?} needs {l} symbols and a probability")));
            }
            let symbols = parts[..l]
                .iter()
                .map(|t| t.parse().map_err(|_| Error::Format(format!("bad symbol in {line:?}"))))
                .collect::<Result<Vec<usize>>>()?;
            cells.push((symbols, rational::parse(parts[l])?));
        }
        Self::from_cells(sizes.to_vec(), cells).map_err(|e| match e {
            Error::InvalidArgument(m) | Error::Dimension(m) => Error::Format(m),
            other => other,
        })
    }
}

fn state_count(sizes: &[usize]) -> Result<usize> {
    if sizes.is_empty() || sizes.contains(&0) {
        return invalid("alphabet sizes must be positive and nonempty");
    }
    let mut states: usize = 1;
    for &k in sizes {
        states = states
            .checked_mul(k)
            .filter(|&s| s <= MAX_STATES)
            .ok_or_else(|| Error::InvalidArgument(format!("product alphabet exceeds {MAX_STATES} states")))?;
    }
    Ok(states)
}

fn flat_index(sizes: &[usize], symbols: &[usize]) -> Result<usize> {
    if symbols.len() != sizes.len() {
        return Err(Error::Dimension(format!("{} symbols for {} variables", symbols.len(), sizes.len())));
    }
    let mut idx = 0;
    for (&s, &k) in symbols.iter().zip(sizes) {
        if s >= k {
            return invalid(format!("symbol {s} outside alphabet of size {k}"));
        }
        idx = idx * k + s;
    }
    Ok(idx)
}

fn shannon(probabilities: impl IntoIterator<Item = Rational>) -> f64 {
    probabilities
        .into_iter()
        .filter(|p| !p.is_zero())
        .map(|p| {
            let x = rational::to_f64(&p);
            -x * x.log2()
        })
        .sum()
}

/// `H(X_U)` in bits; `H(X_∅) = 0`.
pub fn subset_entropy(pmf: &JointPMF, set: &EncoderSet) -> Result<f64> {
    if set.is_empty() {
        pmf.check_set(set)?;
        return Ok(0.0);
    }
    Ok(shannon(pmf.marginal(set)?.into_values()))
}

/// `H(X_U | X_A) = H(X_{U∪A}) − H(X_A)`.
pub fn conditional_subset_entropy(pmf: &JointPMF, set: &EncoderSet, given: &EncoderSet) -> Result<f64> {
    if set.is_empty() {
        return invalid("U must be nonempty");
    }
    Ok(subset_entropy(pmf, &set.union(given))? - subset_entropy(pmf, given)?)
}

/// `H(X_U)` for every `U ⊆ Ω_L`, indexed by bitmask (bit `l−1` for encoder `l`).
#[derive(Clone, Debug)]
pub struct EntropyTable {
    ground: usize,
    values: Vec<f64>,
}

/// Largest `L` for which [`EntropyTable`] enumerates all subsets.
pub const MAX_TABLE_VARIABLES: usize = 16;

impl EntropyTable {
    pub fn new(pmf: &JointPMF) -> Result<Self> {
        let ground = pmf.variable_count();
        if ground > MAX_TABLE_VARIABLES {
            return invalid(format!("entropy table limited to {MAX_TABLE_VARIABLES} variables"));
        }
        let values = crate::sweep::try_map_range(1usize << ground, |mask| {
            let set = EncoderSet::new((1..=ground).filter(|l| mask >> (l - 1) & 1 == 1), ground)?;
            subset_entropy(pmf, &set)
        })?;
        Ok(Self { ground, values })
    }

    pub fn ground_size(&self) -> usize {
        self.ground
    }

    pub fn get(&self, set: &EncoderSet) -> f64 {
        self.values[set.small_mask() as usize]
    }

    pub fn conditional(&self, set: &EncoderSet, given: &EncoderSet) -> f64 {
        self.get(&set.union(given)) - self.get(given)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct InequalityReport {
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub holds: bool,
    /// Named contributions, in evaluation order.
    pub details: Vec<(String, f64)>,
}

impl InequalityReport {
    fn new(lhs: f64, rhs: f64, details: Vec<(String, f64)>) -> Self {
        let slack = lhs - rhs;
        Self { lhs, rhs, slack, holds: slack >= -TOLERANCE, details }
    }
}

fn check_level(alpha: usize, ground: usize) -> Result<()> {
    if alpha < 2 || alpha > ground {
        return invalid(format!("α = {alpha} outside 2..={ground}"));
    }
    Ok(())
}

/// `(1/C(L,α)) Σ_{|U|=α} H(X_U)/α`.
pub fn han_average(table: &EntropyTable, alpha: usize) -> Result<f64> {
    let l = table.ground_size();
    let sum: f64 = subsets_of_size(l, alpha)?.iter().map(|u| table.get(u)).sum();
    Ok(sum / alpha as f64 / rational::to_f64(&binomial(l, alpha)))
}

pub fn check_han(pmf: &JointPMF, alpha: usize) -> Result<InequalityReport> {
    check_han_table(&EntropyTable::new(pmf)?, alpha)
}

pub fn check_han_table(table: &EntropyTable, alpha: usize) -> Result<InequalityReport> {
    check_level(alpha, table.ground_size())?;
    let lhs = han_average(table, alpha - 1)?;
    let rhs = han_average(table, alpha)?;
    Ok(InequalityReport::new(lhs, rhs, vec![(format!("level {}", alpha - 1), lhs), (format!("level {alpha}"), rhs)]))
}

/// `Σ_l H(X_{W_l^(m)})/m` together with the per-window terms.
fn window_sum(table: &EntropyTable, m: usize) -> Result<(f64, Vec<(String, f64)>)> {
    let l = table.ground_size();
    let mut total = 0.0;
    let mut terms = Vec::with_capacity(l);
    for start in 1..=l {
        let w = window(start, m, l)?;
        let h = table.get(&w) / m as f64;
        total += h;
        terms.push((format!("H{w}/{m}"), h));
    }
    Ok((total, terms))
}

pub fn check_sliding_window(pmf: &JointPMF, alpha: usize) -> Result<InequalityReport> {
    check_sliding_window_table(&EntropyTable::new(pmf)?, alpha)
}

pub fn check_sliding_window_table(table: &EntropyTable, alpha: usize) -> Result<InequalityReport> {
    check_level(alpha, table.ground_size())?;
    let (lhs, mut details) = window_sum(table, alpha - 1)?;
    let (rhs, upper) = window_sum(table, alpha)?;
    details.extend(upper);
    Ok(InequalityReport::new(lhs, rhs, details))
}

/// `Σ_V g(V) H(X_V) ≥ H(X_U)`.
pub fn check_mt(pmf: &JointPMF, cover: &FractionalCover) -> Result<InequalityReport> {
    if let Err(v) = check_cover(cover) {
        return invalid(format!("not a fractional cover of {}: {v}", cover.parent));
    }
    pmf.check_set(&cover.parent)?;
    let mut details = Vec::new();
    let mut lhs = 0.0;
    for (v, g) in &cover.weights {
        let term = rational::to_f64(g) * subset_entropy(pmf, v)?;
        lhs += term;
        details.push((format!("g{v}·H"), term));
    }
    let rhs = subset_entropy(pmf, &cover.parent)?;
    details.push((format!("H{}", cover.parent), rhs));
    Ok(InequalityReport::new(lhs, rhs, details))
}

/// `Σ_V c^(α−1)(V) H(X_V) ≥ Σ_U c^(α)(U) H(X_U)`.
pub fn check_yz(pmf: &JointPMF, chain: &CoefficientChain, alpha: usize) -> Result<InequalityReport> {
    check_level(alpha, chain.ground_size())?;
    check_yz_table(&EntropyTable::new(pmf)?, chain, alpha)
}

/// [`check_yz`] against precomputed entropies.
pub fn check_yz_table(table: &EntropyTable, chain: &CoefficientChain, alpha: usize) -> Result<InequalityReport> {
    check_level(alpha, chain.ground_size())?;
    if table.ground_size() != chain.ground_size() {
        return Err(Error::Dimension("chain and pmf have different L".into()));
    }
    let weighted = |level: usize| -> f64 {
        chain.level(level).assignment.iter().map(|(u, c)| rational::to_f64(c) * table.get(u)).sum()
    };
    let lhs = weighted(alpha - 1);
    let rhs = weighted(alpha);
    Ok(InequalityReport::new(lhs, rhs, vec![(format!("level {}", alpha - 1), lhs), (format!("level {alpha}"), rhs)]))
}

/// `Σ_V Σ_A s(V,A) H(X_V|X_A) ≥ Σ_U Σ_A s(U,A) H(X_U|X_A)`.
pub fn check_conditional_yz(
    pmf: &JointPMF,
    assignment: &ConditionalAssignment,
    alpha: usize,
) -> Result<InequalityReport> {
    check_level(alpha, assignment.top_level())?;
    check_conditional_yz_table(&EntropyTable::new(pmf)?, assignment, alpha)
}

/// [`check_conditional_yz`] against precomputed entropies.
pub fn check_conditional_yz_table(
    table: &EntropyTable,
    assignment: &ConditionalAssignment,
    alpha: usize,
) -> Result<InequalityReport> {
    check_level(alpha, assignment.top_level())?;
    if table.ground_size() != assignment.lambda.len() {
        return Err(Error::Dimension("assignment and pmf have different L".into()));
    }
    let weighted = |level: usize| -> f64 {
        assignment
            .level(level)
            .iter()
            .flat_map(|(u, fam)| fam.iter().map(move |(a, s)| (u, a, s)))
            .map(|(u, a, s)| rational::to_f64(s) * table.conditional(u, a))
            .sum()
    };
    let lhs = weighted(alpha - 1);
    let rhs = weighted(alpha);
    Ok(InequalityReport::new(lhs, rhs, vec![(format!("level {}", alpha - 1), lhs), (format!("level {alpha}"), rhs)]))
}

/// Largest `L` accepted by [`permutation_counts`].
pub const MAX_PERMUTATION_VARIABLES: usize = 7;

/// Over all permutations `π` of `Ω_L` and window starts `l`, how often each
/// `α`-subset arises as `π(W_l^(α))`.
pub fn permutation_counts(ground: usize, alpha: usize) -> Result<HashMap<EncoderSet, u64>> {
    if ground > MAX_PERMUTATION_VARIABLES {
        return invalid(format!("permutation enumeration limited to L ≤ {MAX_PERMUTATION_VARIABLES}"));
    }
    let mut counts: HashMap<EncoderSet, u64> = subsets_of_size(ground, alpha)?.into_iter().map(|u| (u, 0)).collect();
    let windows: Vec<EncoderSet> = (1..=ground).map(|l| window(l, alpha, ground)).collect::<Result<_>>()?;
    for perm in (1..=ground).permutations(ground) {
        for w in &windows {
            let image = EncoderSet::new(w.members().iter().map(|&i| perm[i - 1]), ground)?;
            *counts.get_mut(&image).expect("image has size α") += 1;
        }
    }
    Ok(counts)
}

/// `L·α!·(L−α)!`.
pub fn permutation_multiplicity(ground: usize, alpha: usize) -> Rational {
    Rational::from(factorial(alpha) * factorial(ground - alpha)) * int(ground as i64)
}

/// Every `α`-subset is hit exactly `L·α!·(L−α)!` times.
pub fn permutation_identity(ground: usize, alpha: usize) -> Result<bool> {
    let expected = permutation_multiplicity(ground, alpha);
    Ok(permutation_counts(ground, alpha)?.values().all(|&c| int(c as i64) == expected))
}

/// Average over all coordinate permutations of the window sum at level `m`.
pub fn permuted_window_average(pmf: &JointPMF, m: usize) -> Result<f64> {
    let l = pmf.variable_count();
    if l > MAX_PERMUTATION_VARIABLES {
        return invalid(format!("permutation enumeration limited to L ≤ {MAX_PERMUTATION_VARIABLES}"));
    }
    let table = EntropyTable::new(pmf)?;
    let mut total = 0.0;
    let mut count = 0usize;
    for perm in (1..=l).permutations(l) {
        for start in 1..=l {
            let w = window(start, m, l)?;
            let image = EncoderSet::new(w.members().iter().map(|&i| perm[i - 1]), l)?;
            total += table.get(&image) / m as f64;
        }
        count += 1;
    }
    Ok(total / count as f64)
}

/// Weights on the `1/GRID` lattice summing to one, by largest remainder.
fn grid_weights(rng: &mut ChaCha8Rng, count: usize) -> Vec<Rational> {
    let raw: Vec<f64> = (0..count).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    let sum: f64 = raw.iter().sum();
    let scaled: Vec<f64> = raw.iter().map(|x| x / sum * GRID as f64).collect();
    let mut units: Vec<i64> = scaled.iter().map(|x| x.floor() as i64).collect();
    let missing = GRID - units.iter().sum::<i64>();
    let order: Vec<usize> = (0..count)
        .sorted_by(|&a, &b| (scaled[b] - scaled[b].floor()).total_cmp(&(scaled[a] - scaled[a].floor())).then(a.cmp(&b)))
        .collect();
    for &i in order.iter().cycle().take(missing.max(0) as usize) {
        units[i] += 1;
    }
    units.into_iter().map(|u| Rational::new(u.into(), GRID.into())).collect()
}

/// Dirichlet(1)-like pmf on the `1/256` grid, reproducible from `seed`.
pub fn random_pmf(alphabet_sizes: &[usize], seed: u64) -> Result<JointPMF> {
    let states = state_count(alphabet_sizes)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    JointPMF::new(alphabet_sizes.to_vec(), grid_weights(&mut rng, states))
}

/// Product of independent grid marginals, reproducible from `seed`.
pub fn random_product_pmf(alphabet_sizes: &[usize], seed: u64) -> Result<JointPMF> {
    state_count(alphabet_sizes)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let marginals: Vec<Vec<Rational>> = alphabet_sizes.iter().map(|&k| grid_weights(&mut rng, k)).collect();
    JointPMF::product(&marginals)
}
