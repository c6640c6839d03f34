//! Reed–Solomon erasure coding and ramp secret sharing over a [`Field`].
//!
//! Encoder positions are 1-based throughout.

use std::collections::{BTreeMap, BTreeSet};

use super::gf::Field;
use crate::error::{invalid, Error, Result};

type Matrix<F> = Vec<Vec<F>>;

/// Evaluation layout of one code.
///
/// MDS mode: `k` data symbols are polynomial coefficients and encoder `l`
/// evaluates at element `l`. Ramp mode: `k = α` message values sit at
/// elements `0..α`, `N` keys at `α..α+N`, and encoder `l` evaluates at
/// `α+N+l−1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodeSpec<F: Field> {
    pub n: usize,
    pub k: usize,
    pub eval_points: Vec<F>,
    pub message_points: Vec<F>,
    pub key_points: Vec<F>,
}

fn points<F: Field>(range: std::ops::Range<usize>) -> Result<Vec<F>> {
    range.map(F::from_index).collect()
}

impl<F: Field> CodeSpec<F> {
    pub fn mds(n: usize, k: usize) -> Result<Self> {
        if k == 0 || k > n {
            return invalid(format!("need 1 ≤ k ≤ n, got k = {k}, n = {n}"));
        }
        if n >= F::ORDER {
            return invalid(format!("n = {n} exceeds the {} nonzero field elements", F::ORDER - 1));
        }
        let spec = Self { n, k, eval_points: points(1..n + 1)?, message_points: vec![], key_points: vec![] };
        spec.validate()?;
        Ok(spec)
    }

    pub fn ramp(shares: usize, keys: usize, alpha: usize) -> Result<Self> {
        if alpha == 0 || keys + alpha > shares {
            return invalid(format!("need 1 ≤ α and N + α ≤ L, got α = {alpha}, N = {keys}, L = {shares}"));
        }
        if alpha + keys + shares > F::ORDER {
            return invalid(format!("L + N + α = {} exceeds the field order {}", alpha + keys + shares, F::ORDER));
        }
        let spec = Self {
            n: shares,
            k: alpha,
            message_points: points(0..alpha)?,
            key_points: points(alpha..alpha + keys)?,
            eval_points: points(alpha + keys..alpha + keys + shares)?,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn is_ramp(&self) -> bool {
        !self.message_points.is_empty()
    }

    /// Shares needed to decode.
    pub fn threshold(&self) -> usize {
        self.k + self.key_points.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.eval_points.len() != self.n {
            return Err(Error::Dimension(format!("{} evaluation points for n = {}", self.eval_points.len(), self.n)));
        }
        if self.is_ramp() && self.message_points.len() != self.k {
            return Err(Error::Dimension("ramp mode needs one message point per data symbol".into()));
        }
        if !self.is_ramp() && !self.key_points.is_empty() {
            return invalid("key points require ramp mode");
        }
        let all: Vec<F> =
            self.eval_points.iter().chain(&self.message_points).chain(&self.key_points).copied().collect();
        if all.iter().collect::<BTreeSet<_>>().len() != all.len() {
            return invalid("evaluation, message and key points must be distinct");
        }
        if self.threshold() > self.n || self.k == 0 {
            return invalid("threshold exceeds the number of shares");
        }
        Ok(())
    }

    fn point_of(&self, position: usize) -> F {
        self.eval_points[position - 1]
    }

    fn check_positions(&self, positions: &[usize], count: usize) -> Result<()> {
        if positions.len() != count {
            return invalid(format!("need exactly {count} shares, got {}", positions.len()));
        }
        if positions.iter().any(|&p| p == 0 || p > self.n) {
            return invalid(format!("share positions must lie in 1..={}", self.n));
        }
        if positions.iter().collect::<BTreeSet<_>>().len() != positions.len() {
            return invalid("repeated share position");
        }
        Ok(())
    }
}

fn horner<F: Field>(coeffs: &[F], x: F) -> F {
    coeffs.iter().rev().fold(F::zero(), |acc, &c| acc.mul(x).add(c))
}

fn invert<F: Field>(mut m: Matrix<F>) -> Result<Matrix<F>> {
    let n = m.len();
    let mut inv: Matrix<F> =
        (0..n).map(|i| (0..n).map(|j| if i == j { F::one() } else { F::zero() }).collect()).collect();
    for col in 0..n {
        let pivot =
            (col..n).find(|&r| !m[r][col].is_zero()).ok_or_else(|| Error::Internal("singular matrix".into()))?;
        m.swap(col, pivot);
        inv.swap(col, pivot);
        let scale = m[col][col].inv()?;
        for j in 0..n {
            m[col][j] = m[col][j].mul(scale);
            inv[col][j] = inv[col][j].mul(scale);
        }
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col];
            for j in 0..n {
                m[r][j] = m[r][j].sub(factor.mul(m[col][j]));
                inv[r][j] = inv[r][j].sub(factor.mul(inv[col][j]));
            }
        }
    }
    Ok(inv)
}

/// `M[t][f] = ℓ_f(to_t)`, the Lagrange basis over `from` evaluated at `to`.
fn lagrange_matrix<F: Field>(from: &[F], to: &[F]) -> Result<Matrix<F>> {
    to.iter()
        .map(|&x| {
            (0..from.len())
                .map(|f| {
                    let mut num = F::one();
                    let mut den = F::one();
                    for (g, &xg) in from.iter().enumerate() {
                        if g != f {
                            num = num.mul(x.sub(xg));
                            den = den.mul(from[f].sub(xg));
                        }
                    }
                    num.div(den)
                })
                .collect()
        })
        .collect()
}

fn apply<F: Field>(m: &Matrix<F>, v: &[F]) -> Vec<F> {
    m.iter().map(|row| row.iter().zip(v).fold(F::zero(), |acc, (&a, &b)| acc.add(a.mul(b)))).collect()
}

/// `share_i = p(eval_points[i])` with `data` the coefficients of `p`.
pub fn rs_encode<F: Field>(data: &[F], spec: &CodeSpec<F>) -> Result<Vec<F>> {
    spec.validate()?;
    if spec.is_ramp() {
        return invalid("rs_encode needs an MDS spec");
    }
    if data.len() != spec.k {
        return Err(Error::Dimension(format!("{} data symbols for k = {}", data.len(), spec.k)));
    }
    Ok(spec.eval_points.iter().map(|&x| horner(data, x)).collect())
}

/// Recovers the coefficients from exactly `k` shares given as
/// `(position, value)`.
pub fn rs_decode<F: Field>(shares: &[(usize, F)], spec: &CodeSpec<F>) -> Result<Vec<F>> {
    let positions: Vec<usize> = shares.iter().map(|s| s.0).collect();
    let decoder = MdsCode::new(spec.clone())?.decoder(&positions)?;
    Ok(decoder.decode_word(&shares.iter().map(|s| s.1).collect::<Vec<_>>()))
}

/// MDS code with its encoding matrix precomputed.
#[derive(Clone, Debug)]
pub struct MdsCode<F: Field> {
    spec: CodeSpec<F>,
    encoder: Matrix<F>,
}

/// Reusable linear map from a fixed set of shares to the decoded word.
#[derive(Clone, Debug)]
pub struct WordDecoder<F: Field> {
    positions: Vec<usize>,
    matrix: Matrix<F>,
}

impl<F: Field> WordDecoder<F> {
    pub fn positions(&self) -> &[usize] {
        &self.positions
    }

    /// `shares` are listed in the order of [`Self::positions`].
    pub fn decode_word(&self, shares: &[F]) -> Vec<F> {
        apply(&self.matrix, shares)
    }
}

impl<F: Field> MdsCode<F> {
    pub fn new(spec: CodeSpec<F>) -> Result<Self> {
        spec.validate()?;
        if spec.is_ramp() {
            return invalid("MdsCode needs an MDS spec");
        }
        let encoder = spec
            .eval_points
            .iter()
            .map(|&x| {
                let mut row = Vec::with_capacity(spec.k);
                let mut p = F::one();
                for _ in 0..spec.k {
                    row.push(p);
                    p = p.mul(x);
                }
                row
            })
            .collect();
        Ok(Self { spec, encoder })
    }

    pub fn spec(&self) -> &CodeSpec<F> {
        &self.spec
    }

    pub fn encode_word(&self, data: &[F]) -> Vec<F> {
        apply(&self.encoder, data)
    }

    /// Decoder from exactly `k` distinct positions.
    pub fn decoder(&self, positions: &[usize]) -> Result<WordDecoder<F>> {
        self.spec.check_positions(positions, self.spec.k)?;
        let rows = positions.iter().map(|&p| self.encoder[p - 1].clone()).collect();
        Ok(WordDecoder { positions: positions.to_vec(), matrix: invert(rows)? })
    }
}

/// Ramp scheme with its interpolation matrix precomputed.
#[derive(Clone, Debug)]
pub struct RampCode<F: Field> {
    spec: CodeSpec<F>,
    encoder: Matrix<F>,
}

impl<F: Field> RampCode<F> {
    pub fn new(spec: CodeSpec<F>) -> Result<Self> {
        spec.validate()?;
        if !spec.is_ramp() {
            return invalid("RampCode needs a ramp spec");
        }
        let anchors: Vec<F> = spec.message_points.iter().chain(&spec.key_points).copied().collect();
        let encoder = lagrange_matrix(&anchors, &spec.eval_points)?;
        Ok(Self { spec, encoder })
    }

    pub fn spec(&self) -> &CodeSpec<F> {
        &self.spec
    }

    /// `message` has `α` symbols, `keys` has `N`.
    pub fn encode_word(&self, message: &[F], keys: &[F]) -> Vec<F> {
        let anchors: Vec<F> = message.iter().chain(keys).copied().collect();
        apply(&self.encoder, &anchors)
    }

    /// Decoder from exactly `N + α` distinct positions.
    pub fn decoder(&self, positions: &[usize]) -> Result<WordDecoder<F>> {
        self.spec.check_positions(positions, self.spec.threshold())?;
        let from: Vec<F> = positions.iter().map(|&p| self.spec.point_of(p)).collect();
        Ok(WordDecoder { positions: positions.to_vec(), matrix: lagrange_matrix(&from, &self.spec.message_points)? })
    }
}

pub fn ramp_encode<F: Field>(message: &[F], keys: &[F], spec: &CodeSpec<F>) -> Result<Vec<F>> {
    if message.len() != spec.k || keys.len() != spec.key_points.len() {
        return Err(Error::Dimension(format!(
            "{} message and {} key symbols for α = {}, N = {}",
            message.len(),
            keys.len(),
            spec.k,
            spec.key_points.len()
        )));
    }
    Ok(RampCode::new(spec.clone())?.encode_word(message, keys))
}

/// Recovers the message from exactly `N + α` shares.
pub fn ramp_decode<F: Field>(shares: &[(usize, F)], spec: &CodeSpec<F>) -> Result<Vec<F>> {
    let positions: Vec<usize> = shares.iter().map(|s| s.0).collect();
    let decoder = RampCode::new(spec.clone())?.decoder(&positions)?;
    Ok(decoder.decode_word(&shares.iter().map(|s| s.1).collect::<Vec<_>>()))
}

/// Largest key or message space enumerated exhaustively.
pub const MAX_ENUMERATED: usize = 1 << 20;

fn all_words<F: Field>(len: usize) -> Result<Vec<Vec<F>>> {
    let count = F::ORDER
        .checked_pow(len as u32)
        .filter(|&c| c <= MAX_ENUMERATED)
        .ok_or_else(|| Error::InvalidArgument(format!("{}^{len} words is too many to enumerate", F::ORDER)))?;
    (0..count)
        .map(|mut i| {
            (0..len)
                .map(|_| {
                    let s = F::from_index(i % F::ORDER);
                    i /= F::ORDER;
                    s
                })
                .collect()
        })
        .collect()
}

/// Distribution of the shares at `positions` over all key vectors, for a
/// fixed message.
pub fn share_distribution<F: Field>(
    spec: &CodeSpec<F>,
    message: &[F],
    positions: &[usize],
) -> Result<BTreeMap<Vec<F>, u64>> {
    let code = RampCode::new(spec.clone())?;
    if positions.iter().any(|&p| p == 0 || p > spec.n) {
        return invalid(format!("share positions must lie in 1..={}", spec.n));
    }
    let mut counts = BTreeMap::new();
    for keys in all_words::<F>(spec.key_points.len())? {
        let shares = code.encode_word(message, &keys);
        *counts.entry(positions.iter().map(|&p| shares[p - 1]).collect()).or_insert(0) += 1;
    }
    Ok(counts)
}

/// True when the share distribution at `positions` is identical for every
/// message.
pub fn is_perfectly_secret<F: Field>(spec: &CodeSpec<F>, positions: &[usize]) -> Result<bool> {
    let messages = all_words::<F>(spec.k)?;
    let reference = share_distribution(spec, &messages[0], positions)?;
    for m in &messages[1..] {
        if share_distribution(spec, m, positions)? != reference {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::erasure::gf::{Gf16, Gf256};
    use itertools::Itertools;

    fn g(v: u8) -> Gf256 {
        Gf256::from(v)
    }

    #[test]
    fn rs_encode_examples() {
        let spec = CodeSpec::<Gf256>::mds(4, 1).unwrap();
        assert_eq!(rs_encode(&[g(7)], &spec).unwrap(), vec![g(7); 4]);
        let spec = CodeSpec::<Gf256>::mds(3, 2).unwrap();
        assert_eq!(rs_encode(&[g(1), g(1)], &spec).unwrap(), vec![g(1 ^ 1), g(1 ^ 2), g(1 ^ 3)]);
        assert!(rs_encode(&[g(1)], &spec).is_err());
    }

    #[test]
    fn rs_decode_examples_and_errors() {
        let spec = CodeSpec::<Gf256>::mds(5, 3).unwrap();
        let data = [g(9), g(200), g(33)];
        let shares = rs_encode(&data, &spec).unwrap();
        for subset in (1..=5).combinations(3) {
            let picked: Vec<(usize, Gf256)> = subset.iter().map(|&p| (p, shares[p - 1])).collect();
            assert_eq!(rs_decode(&picked, &spec).unwrap(), data);
        }
        assert!(rs_decode(&[(1, shares[0]), (1, shares[0]), (2, shares[1])], &spec).is_err());
        assert!(rs_decode(&[(1, shares[0])], &spec).is_err());
        assert!(rs_decode(&[(1, shares[0]), (2, shares[1]), (6, shares[1])], &spec).is_err());
    }

    #[test]
    fn spec_validation() {
        assert!(CodeSpec::<Gf256>::mds(3, 4).is_err());
        assert!(CodeSpec::<Gf256>::mds(256, 1).is_err());
        assert!(CodeSpec::<Gf16>::ramp(10, 3, 4).is_err());
        assert!(CodeSpec::<Gf256>::ramp(3, 2, 2).is_err());
        let s = CodeSpec::<Gf256>::ramp(5, 2, 2).unwrap();
        assert_eq!(s.threshold(), 4);
        let mut bad = s.clone();
        bad.key_points[0] = bad.eval_points[0];
        assert!(bad.validate().is_err());
    }

    #[test]
    fn shamir_two_of_three() {
        let spec = CodeSpec::<Gf256>::ramp(3, 1, 1).unwrap();
        let shares = ramp_encode(&[g(42)], &[g(99)], &spec).unwrap();
        for pair in (1..=3).combinations(2) {
            let picked: Vec<(usize, Gf256)> = pair.iter().map(|&p| (p, shares[p - 1])).collect();
            assert_eq!(ramp_decode(&picked, &spec).unwrap(), vec![g(42)]);
        }
        assert!(ramp_decode(&[(1, shares[0])], &spec).is_err());
    }

    #[test]
    fn gf16_single_share_is_uniform() {
        let spec = CodeSpec::<Gf16>::ramp(3, 1, 1).unwrap();
        for m in 0..16 {
            let msg = [Gf16::from_index(m).unwrap()];
            for p in 1..=3 {
                let dist = share_distribution(&spec, &msg, &[p]).unwrap();
                assert_eq!(dist.len(), 16);
                assert!(dist.values().all(|&c| c == 1));
            }
        }
    }
}
