use std::fs;
use std::path::PathBuf;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use smdc_core::codec::{
    key_bytes_needed, smdc_decode, smdc_encode, smdca_decode, smdca_encode, ssmdc_decode, ssmdc_encode, Scheme,
    ShareBundle, SourceMessages,
};
use smdc_core::{Error, Result};

use crate::report::Report;
use crate::{CodecCmd, Context, SchemeArg};

/// Key bytes for S-SMDC: the key file, else a ChaCha8 stream from the seed,
/// else the OS generator.
fn key_stream(needed: usize, key_file: &Option<PathBuf>, ctx: &Context) -> Result<Vec<u8>> {
    if let Some(path) = key_file {
        let bytes = fs::read(path)?;
        if bytes.len() < needed {
            return Err(Error::Format(format!("key file has {} bytes, {needed} needed", bytes.len())));
        }
        return Ok(bytes[..needed].to_vec());
    }
    let mut keys = vec![0u8; needed];
    match ctx.seed {
        Some(seed) => ChaCha8Rng::seed_from_u64(seed).fill_bytes(&mut keys),
        None => rand::rngs::OsRng.fill_bytes(&mut keys),
    }
    Ok(keys)
}

fn scheme_of(arg: SchemeArg) -> Scheme {
    match arg {
        SchemeArg::Smdc => Scheme::Smdc,
        SchemeArg::SmdcA => Scheme::SmdcA,
        SchemeArg::Ssmdc => Scheme::Ssmdc,
    }
}

fn path_list(paths: &[PathBuf]) -> Value {
    paths.iter().map(|p| p.display().to_string()).collect::<Vec<_>>().into()
}

pub fn run(cmd: CodecCmd, ctx: &Context) -> Result<Report> {
    match cmd {
        CodecCmd::Encode { scheme, inputs, out_dir, stem, r0_bytes, n, key_file } => {
            let mut r = Report::new("codec encode");
            let scheme = scheme_of(scheme);
            if scheme != Scheme::Ssmdc && (n != 0 || key_file.is_some()) {
                return Err(Error::InvalidArgument("--n and --key-file apply to s-smdc only".into()));
            }
            if scheme != Scheme::SmdcA && r0_bytes != 0 {
                return Err(Error::InvalidArgument("--r0-bytes applies to smdc-a only".into()));
            }
            let payloads = inputs.iter().map(fs::read).collect::<std::io::Result<Vec<_>>>()?;
            let sources = SourceMessages::new(payloads);
            r.input("scheme", scheme.name()).input("inputs", path_list(&inputs));
            r.input("out_dir", out_dir.display().to_string()).input("stem", stem.clone());
            let bundles = match scheme {
                Scheme::Smdc => smdc_encode(&sources)?,
                Scheme::SmdcA => {
                    r.input("r0_bytes", r0_bytes);
                    let out = smdca_encode(&sources, r0_bytes)?;
                    std::iter::once(out.bundle0).chain(out.bundles).collect()
                }
                Scheme::Ssmdc => {
                    r.input("n", n);
                    let needed = key_bytes_needed(&sources.lengths(), n);
                    let needed =
                        usize::try_from(needed).map_err(|_| Error::InvalidArgument("sources too large".into()))?;
                    let keys = key_stream(needed, &key_file, ctx)?;
                    r.result("key_bytes", needed);
                    ssmdc_encode(&sources, n, &keys)?
                }
            };
            fs::create_dir_all(&out_dir)?;
            let mut written = Vec::new();
            for b in &bundles {
                let path = b.write_to(&out_dir, &stem)?;
                r.line(format!("encoder {}: {} ({} payload bytes)", b.encoder_index, path.display(), b.payload.len()));
                written.push(path);
            }
            r.result("bundles", path_list(&written));
            Ok(r)
        }
        CodecCmd::Decode { bundles, out_dir, outputs } => {
            let mut r = Report::new("codec decode");
            let read = bundles.iter().map(|p| ShareBundle::read_from(p)).collect::<Result<Vec<_>>>()?;
            r.input("bundles", path_list(&bundles)).input("out_dir", out_dir.display().to_string());
            let scheme =
                read.first().map(|b| b.scheme).ok_or_else(|| Error::InvalidArgument("no bundles given".into()))?;
            let recovered = match scheme {
                Scheme::Smdc => smdc_decode(&read)?,
                Scheme::Ssmdc => ssmdc_decode(&read)?,
                Scheme::SmdcA => {
                    let (zero, coded): (Vec<_>, Vec<_>) = read.into_iter().partition(|b| b.encoder_index == 0);
                    let bundle0 = zero
                        .into_iter()
                        .next()
                        .ok_or_else(|| Error::InvalidArgument("smdc-a decoding needs the encoder 0 bundle".into()))?;
                    smdca_decode(&bundle0, &coded)?
                }
            };
            let names: Vec<PathBuf> = match outputs {
                Some(names) if names.len() < recovered.len() => {
                    return Err(Error::InvalidArgument(format!(
                        "{} sources recovered but only {} output names given",
                        recovered.len(),
                        names.len()
                    )))
                }
                Some(names) => names,
                None => (1..=recovered.len()).map(|a| PathBuf::from(format!("source{a}.bin"))).collect(),
            };
            fs::create_dir_all(&out_dir)?;
            let mut written = Vec::new();
            for (i, (data, name)) in recovered.iter().zip(&names).enumerate() {
                let path = out_dir.join(name);
                fs::write(&path, data)?;
                r.line(format!("W_{}: {} ({} bytes)", i + 1, path.display(), data.len()));
                written.push(path);
            }
            r.input("scheme", scheme.name());
            r.result("recovered", recovered.len()).result("outputs", path_list(&written));
            Ok(r)
        }
    }
}
