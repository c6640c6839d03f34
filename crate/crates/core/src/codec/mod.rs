//! Byte-stream codecs for the three schemes.
//!
//! Every source `W_α` is coded on its own: it is zero-padded to a multiple
//! of `α` bytes, cut into `α`-byte words, and each word becomes one byte per
//! encoder. SMDC uses an `(L, α)` MDS code, SMDC-A first stores a greedy
//! prefix uncoded at encoder 0, and S-SMDC uses an `(L, N, α)` ramp scheme
//! keyed by a caller-supplied key stream.

mod bundle;

pub use bundle::{bundle_file_name, Scheme, ShareBundle, MAGIC, VERSION};

use std::collections::BTreeSet;

use crate::erasure::{CodeSpec, Gf256, MdsCode, RampCode};
use crate::error::{invalid, Error, Result};
use crate::rational::int;
use crate::region::{greedy_allocation, EntropyProfile};
use crate::sweep;

/// Largest `L` accepted by the MDS layers.
pub const MAX_ENCODERS: usize = 200;

/// Source payloads `W_1, W_2, …` in priority order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SourceMessages {
    pub payloads: Vec<Vec<u8>>,
}

impl SourceMessages {
    pub fn new(payloads: Vec<Vec<u8>>) -> Self {
        Self { payloads }
    }

    pub fn len(&self) -> usize {
        self.payloads.len()
    }

    pub fn is_empty(&self) -> bool {
        self.payloads.is_empty()
    }

    pub fn lengths(&self) -> Vec<u64> {
        self.payloads.iter().map(|p| p.len() as u64).collect()
    }

    pub fn total_bytes(&self) -> u64 {
        self.lengths().iter().sum()
    }
}

/// Coded bytes per encoder for layer `α` (1-based) of a source of `len` bytes.
pub fn layer_symbols(len: u64, alpha: usize) -> u64 {
    len.div_ceil(alpha as u64)
}

/// `Σ_α ⌈|W_α|/α⌉`, the per-encoder payload at the symmetric point.
pub fn symmetric_payload_len(lengths: &[u64]) -> u64 {
    lengths.iter().enumerate().map(|(i, &len)| layer_symbols(len, i + 1)).sum()
}

/// Key bytes an S-SMDC encode consumes: `Σ_α N·⌈|W_α|/α⌉`.
pub fn key_bytes_needed(lengths: &[u64], n: usize) -> u64 {
    n as u64 * symmetric_payload_len(lengths)
}

fn words(payload: &[u8], alpha: usize) -> impl Iterator<Item = Vec<Gf256>> + '_ {
    payload.chunks(alpha).map(move |chunk| {
        let mut w: Vec<Gf256> = chunk.iter().map(|&b| Gf256::from(b)).collect();
        w.resize(alpha, Gf256::from(0));
        w
    })
}

/// Encoded layer: one byte column per encoder.
type Layer = Vec<Vec<u8>>;

fn mds_layer(payload: &[u8], l: usize, alpha: usize) -> Result<Layer> {
    let code = MdsCode::new(CodeSpec::<Gf256>::mds(l, alpha)?)?;
    let count = layer_symbols(payload.len() as u64, alpha) as usize;
    let mut columns = vec![Vec::with_capacity(count); l];
    for word in words(payload, alpha) {
        for (col, s) in columns.iter_mut().zip(code.encode_word(&word)) {
            col.push(s.into());
        }
    }
    Ok(columns)
}

fn ramp_layer(payload: &[u8], l: usize, n: usize, alpha: usize, keys: &[u8]) -> Result<Layer> {
    let code = RampCode::new(CodeSpec::<Gf256>::ramp(l, n, alpha)?)?;
    let count = layer_symbols(payload.len() as u64, alpha) as usize;
    let mut columns = vec![Vec::with_capacity(count); l];
    for (word, key) in words(payload, alpha).zip(keys.chunks(n)) {
        let key: Vec<Gf256> = key.iter().map(|&b| Gf256::from(b)).collect();
        for (col, s) in columns.iter_mut().zip(code.encode_word(&word, &key)) {
            col.push(s.into());
        }
    }
    Ok(columns)
}

fn assemble(scheme: Scheme, l: usize, n: usize, lengths: &[u64], layers: Vec<Layer>) -> Vec<ShareBundle> {
    let counts: Vec<u64> = lengths.iter().enumerate().map(|(i, &len)| layer_symbols(len, i + 1)).collect();
    (1..=l)
        .map(|enc| ShareBundle {
            scheme,
            encoders: l,
            n,
            encoder_index: enc,
            source_lengths: lengths.to_vec(),
            symbol_counts: counts.clone(),
            payload: layers.iter().flat_map(|layer| layer[enc - 1].iter().copied()).collect(),
        })
        .collect()
}

fn check_encoders(l: usize) -> Result<()> {
    if l == 0 || l > MAX_ENCODERS {
        return invalid(format!("L = {l} outside 1..={MAX_ENCODERS}"));
    }
    Ok(())
}

fn smdc_layers(payloads: &[Vec<u8>], l: usize) -> Result<Vec<Layer>> {
    sweep::try_map_range(payloads.len(), |i| mds_layer(&payloads[i], l, i + 1))
}

/// Superposition encode of `L` sources into `L` bundles.
pub fn smdc_encode(sources: &SourceMessages) -> Result<Vec<ShareBundle>> {
    let l = sources.len();
    check_encoders(l)?;
    let layers = smdc_layers(&sources.payloads, l)?;
    Ok(assemble(Scheme::Smdc, l, 0, &sources.lengths(), layers))
}

/// Bundles sorted by encoder index, checked for a shared header and
/// distinct indices.
fn consistent(bundles: &[ShareBundle], scheme: Scheme) -> Result<Vec<&ShareBundle>> {
    let first = bundles.first().ok_or_else(|| Error::InvalidArgument("no share bundles supplied".into()))?;
    let mut sorted: Vec<&ShareBundle> = bundles.iter().collect();
    sorted.sort_by_key(|b| b.encoder_index);
    let mut seen = BTreeSet::new();
    for b in &sorted {
        if b.scheme != scheme {
            return Err(Error::Format(format!(
                "bundle for encoder {} uses scheme {}, expected {}",
                b.encoder_index,
                b.scheme.name(),
                scheme.name()
            )));
        }
        if !b.same_code_as(first) {
            return Err(Error::Format(format!(
                "bundle for encoder {} disagrees with the other headers",
                b.encoder_index
            )));
        }
        if b.encoder_index == 0 {
            return Err(Error::Format("encoder 0 bundle among the coded bundles".into()));
        }
        if !seen.insert(b.encoder_index) {
            return Err(Error::Format(format!("encoder {} supplied twice", b.encoder_index)));
        }
    }
    Ok(sorted)
}

/// Decodes layers `1..=levels` from the sorted bundles; `decoder` builds the
/// word decoder for a layer from the chosen positions.
fn decode_layers<D>(
    sorted: &[&ShareBundle],
    levels: usize,
    need: impl Fn(usize) -> usize + Sync,
    decoder: D,
) -> Result<Vec<Vec<u8>>>
where
    D: Fn(usize, &[usize]) -> Result<crate::erasure::WordDecoder<Gf256>> + Sync,
{
    let head = sorted[0];
    sweep::try_map_range(levels, |i| {
        let alpha = i + 1;
        let take = need(alpha);
        let chosen = &sorted[..take];
        let positions: Vec<usize> = chosen.iter().map(|b| b.encoder_index).collect();
        let dec = decoder(alpha, &positions)?;
        let offset = head.layer_offset(i) as usize;
        let count = head.symbol_counts[i] as usize;
        let mut out = Vec::with_capacity(count * alpha);
        let mut shares = vec![Gf256::from(0); take];
        for w in 0..count {
            for (s, b) in shares.iter_mut().zip(chosen) {
                *s = Gf256::from(b.payload[offset + w]);
            }
            out.extend(dec.decode_word(&shares).into_iter().map(u8::from));
        }
        out.truncate(head.source_lengths[i] as usize);
        Ok(out)
    })
}

/// Recovers `W_1..W_{|U|}` from the bundles of the encoders in `U`.
pub fn smdc_decode(bundles: &[ShareBundle]) -> Result<Vec<Vec<u8>>> {
    let sorted = consistent(bundles, Scheme::Smdc)?;
    let l = sorted[0].encoders;
    let codes: Vec<MdsCode<Gf256>> =
        (1..=sorted.len()).map(|a| MdsCode::new(CodeSpec::mds(l, a)?)).collect::<Result<_>>()?;
    decode_layers(&sorted, sorted.len(), |a| a, |a, pos| codes[a - 1].decoder(pos))
}

/// Output of [`smdca_encode`]: the always-available bundle and the `L`
/// coded bundles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AllAccessBundles {
    pub bundle0: ShareBundle,
    pub bundles: Vec<ShareBundle>,
}

/// Stores the greedy prefix of the sources (up to `r0_bytes`) uncoded at
/// encoder 0 and superposition-codes the residual suffixes.
pub fn smdca_encode(sources: &SourceMessages, r0_bytes: u64) -> Result<AllAccessBundles> {
    let l = sources.len();
    check_encoders(l)?;
    let profile = EntropyProfile::new(sources.lengths().iter().map(|&b| int(b as i64)).collect())?;
    let split = greedy_allocation(&int(r0_bytes.min(i64::MAX as u64) as i64), &profile)?;
    let stored: Vec<usize> = split
        .stored_at_zero
        .iter()
        .map(|s| s.to_integer().try_into().map_err(|_| Error::Internal("stored length out of range".into())))
        .collect::<Result<_>>()?;
    let residual: Vec<Vec<u8>> = sources.payloads.iter().zip(&stored).map(|(p, &s)| p[s..].to_vec()).collect();
    let residual_lengths: Vec<u64> = residual.iter().map(|r| r.len() as u64).collect();
    let layers = smdc_layers(&residual, l)?;
    let bundle0 = ShareBundle {
        scheme: Scheme::SmdcA,
        encoders: l,
        n: 0,
        encoder_index: 0,
        source_lengths: sources.lengths(),
        symbol_counts: stored.iter().map(|&s| s as u64).collect(),
        payload: sources.payloads.iter().zip(&stored).flat_map(|(p, &s)| p[..s].iter().copied()).collect(),
    };
    Ok(AllAccessBundles { bundle0, bundles: assemble(Scheme::SmdcA, l, 0, &residual_lengths, layers) })
}

/// Splices the uncoded prefixes from `bundle0` with the residuals decoded
/// from the bundles of `U`, recovering `W_1..W_{|U|}`.
pub fn smdca_decode(bundle0: &ShareBundle, bundles: &[ShareBundle]) -> Result<Vec<Vec<u8>>> {
    if bundle0.scheme != Scheme::SmdcA || bundle0.encoder_index != 0 {
        return invalid("the encoder 0 bundle of an SMDC-A encode is required");
    }
    let sorted = consistent(bundles, Scheme::SmdcA)?;
    let l = bundle0.encoders;
    let head = sorted[0];
    if head.encoders != l || head.source_lengths.len() != bundle0.source_lengths.len() {
        return Err(Error::Format("encoder 0 bundle does not match the coded bundles".into()));
    }
    for i in 0..l {
        if bundle0.symbol_counts[i].checked_add(head.source_lengths[i]) != Some(bundle0.source_lengths[i]) {
            return Err(Error::Format(format!(
                "source {} lengths disagree between encoder 0 and the coded bundles",
                i + 1
            )));
        }
    }
    let codes: Vec<MdsCode<Gf256>> =
        (1..=sorted.len()).map(|a| MdsCode::new(CodeSpec::mds(l, a)?)).collect::<Result<_>>()?;
    let residuals = decode_layers(&sorted, sorted.len(), |a| a, |a, pos| codes[a - 1].decoder(pos))?;
    Ok(residuals
        .into_iter()
        .enumerate()
        .map(|(i, r)| {
            let start = bundle0.layer_offset(i) as usize;
            let mut full = bundle0.payload[start..start + bundle0.symbol_counts[i] as usize].to_vec();
            full.extend(r);
            full
        })
        .collect())
}

/// Encodes `L − N` sources into `L` bundles so that any `N` reveal nothing
/// and any `N + α` recover `W_1..W_α`. `keys` must hold at least
/// [`key_bytes_needed`] uniform bytes; with `N = 0` the layers are plain MDS.
pub fn ssmdc_encode(sources: &SourceMessages, n: usize, keys: &[u8]) -> Result<Vec<ShareBundle>> {
    if sources.is_empty() {
        return invalid("S-SMDC needs at least one source");
    }
    let l = sources.len() + n;
    check_encoders(l)?;
    let lengths = sources.lengths();
    let needed = key_bytes_needed(&lengths, n);
    if (keys.len() as u64) < needed {
        return invalid(format!("key stream has {} bytes, {needed} needed", keys.len()));
    }
    let layers = if n == 0 {
        smdc_layers(&sources.payloads, l)?
    } else {
        let mut starts = Vec::with_capacity(lengths.len());
        let mut acc = 0usize;
        for (i, &len) in lengths.iter().enumerate() {
            starts.push(acc);
            acc += n * layer_symbols(len, i + 1) as usize;
        }
        sweep::try_map_range(sources.len(), |i| {
            let span = n * layer_symbols(lengths[i], i + 1) as usize;
            ramp_layer(&sources.payloads[i], l, n, i + 1, &keys[starts[i]..starts[i] + span])
        })?
    };
    Ok(assemble(Scheme::Ssmdc, l, n, &lengths, layers))
}

/// Recovers `W_1..W_{|U|−N}` from the bundles of the encoders in `U`.
pub fn ssmdc_decode(bundles: &[ShareBundle]) -> Result<Vec<Vec<u8>>> {
    let sorted = consistent(bundles, Scheme::Ssmdc)?;
    let (l, n) = (sorted[0].encoders, sorted[0].n);
    if sorted.len() <= n {
        return Err(Error::InsufficientShares { needed: n + 1, got: sorted.len() });
    }
    let levels = (sorted.len() - n).min(sorted[0].source_lengths.len());
    if n == 0 {
        let codes: Vec<MdsCode<Gf256>> =
            (1..=levels).map(|a| MdsCode::new(CodeSpec::mds(l, a)?)).collect::<Result<_>>()?;
        return decode_layers(&sorted, levels, |a| a, |a, pos| codes[a - 1].decoder(pos));
    }
    let codes: Vec<RampCode<Gf256>> =
        (1..=levels).map(|a| RampCode::new(CodeSpec::ramp(l, n, a)?)).collect::<Result<_>>()?;
    decode_layers(&sorted, levels, |a| a + n, |a, pos| codes[a - 1].decoder(pos))
}

#[cfg(test)]
mod tests {
    use super::*;
    use itertools::Itertools;

    fn sources(lengths: &[usize]) -> SourceMessages {
        SourceMessages::new(
            lengths.iter().enumerate().map(|(i, &n)| (0..n).map(|j| (j * 31 + i * 7 + 1) as u8).collect()).collect(),
        )
    }

    fn pick(bundles: &[ShareBundle], u: &[usize]) -> Vec<ShareBundle> {
        u.iter().map(|&l| bundles[l - 1].clone()).collect()
    }

    #[test]
    fn smdc_payload_sizes() {
        let src = sources(&[12, 12, 12]);
        let bundles = smdc_encode(&src).unwrap();
        assert!(bundles.iter().all(|b| b.payload.len() == 22));
        assert_eq!(symmetric_payload_len(&src.lengths()), 22);
    }

    #[test]
    fn smdc_replication_when_only_first_source() {
        let src = sources(&[5, 0, 0]);
        let bundles = smdc_encode(&src).unwrap();
        assert!(bundles.iter().all(|b| b.payload == src.payloads[0]));
    }

    #[test]
    fn smdc_partial_access() {
        let src = sources(&[7, 9, 11]);
        let bundles = smdc_encode(&src).unwrap();
        let got = smdc_decode(&pick(&bundles, &[2, 3])).unwrap();
        assert_eq!(got, src.payloads[..2].to_vec());
        assert_eq!(smdc_decode(&bundles).unwrap(), src.payloads);
        assert!(smdc_decode(&[]).is_err());
    }

    #[test]
    fn smdc_rejects_mixed_headers() {
        let a = smdc_encode(&sources(&[4, 4, 4])).unwrap();
        let b = smdc_encode(&sources(&[4, 5, 4])).unwrap();
        let mixed = vec![a[0].clone(), b[1].clone()];
        assert!(matches!(smdc_decode(&mixed), Err(Error::Format(_))));
        assert!(matches!(smdc_decode(&[a[0].clone(), a[0].clone()]), Err(Error::Format(_))));
    }

    #[test]
    fn smdca_examples() {
        let src = sources(&[8, 8]);
        let out = smdca_encode(&src, 4).unwrap();
        assert_eq!(out.bundle0.payload, src.payloads[0][..4].to_vec());
        assert_eq!(out.bundles[0].source_lengths, vec![4, 8]);
        assert_eq!(out.bundles[0].payload.len(), 4 + 4);
        for u in [vec![1], vec![2], vec![1, 2]] {
            let got = smdca_decode(&out.bundle0, &pick(&out.bundles, &u)).unwrap();
            assert_eq!(got, src.payloads[..u.len()].to_vec());
        }

        let zero = smdca_encode(&src, 0).unwrap();
        assert!(zero.bundle0.payload.is_empty());
        let plain = smdc_encode(&src).unwrap();
        assert!(zero.bundles.iter().zip(&plain).all(|(a, b)| a.payload == b.payload));

        let all = smdca_encode(&src, 100).unwrap();
        assert!(all.bundles.iter().all(|b| b.payload.is_empty()));
        assert_eq!(all.bundle0.payload.len(), 16);
        assert_eq!(smdca_decode(&all.bundle0, &pick(&all.bundles, &[2])).unwrap(), vec![src.payloads[0].clone()]);
        assert!(smdca_decode(&all.bundles[0], &pick(&all.bundles, &[2])).is_err());
    }

    #[test]
    fn ssmdc_examples() {
        let src = sources(&[4, 4]);
        let keys: Vec<u8> = (0..key_bytes_needed(&src.lengths(), 1)).map(|i| (i * 97 + 13) as u8).collect();
        assert_eq!(keys.len(), 6);
        let bundles = ssmdc_encode(&src, 1, &keys).unwrap();
        assert!(bundles.iter().all(|b| b.payload.len() == 6));
        assert_eq!(ssmdc_decode(&pick(&bundles, &[1, 3])).unwrap(), vec![src.payloads[0].clone()]);
        assert_eq!(ssmdc_decode(&bundles).unwrap(), src.payloads);
        assert!(matches!(ssmdc_decode(&pick(&bundles, &[2])), Err(Error::InsufficientShares { needed: 2, got: 1 })));
        assert!(ssmdc_encode(&src, 1, &keys[..5]).is_err());
    }

    #[test]
    fn ssmdc_without_keys_matches_smdc() {
        let src = sources(&[6, 3, 9]);
        let a = ssmdc_encode(&src, 0, &[]).unwrap();
        let b = smdc_encode(&src).unwrap();
        for (x, y) in a.iter().zip(&b) {
            let (mut xs, ys) = (x.to_bytes(), y.to_bytes());
            assert_eq!(xs[5], Scheme::Ssmdc as u8);
            xs[5] = Scheme::Smdc as u8;
            assert_eq!(xs, ys);
        }
    }

    #[test]
    fn shamir_layer_any_two_of_three() {
        let src = sources(&[5]);
        let keys = vec![0xA5; 10];
        let bundles = ssmdc_encode(&SourceMessages::new(vec![src.payloads[0].clone(), vec![]]), 1, &keys).unwrap();
        for pair in (1..=3).combinations(2) {
            assert_eq!(ssmdc_decode(&pick(&bundles, &pair)).unwrap()[0], src.payloads[0]);
        }
    }
}
