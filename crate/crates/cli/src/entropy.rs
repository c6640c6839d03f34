use std::fs;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use smdc_core::combinatorics::{subsets_of_size, EncoderSet};
use smdc_core::cover::{chain_from_text, conditional_chain, yz_chain, FractionalCover};
use smdc_core::entropy::{
    check_conditional_yz_table, check_han_table, check_mt, check_sliding_window_table, check_yz_table,
    permutation_identity, permutation_multiplicity, random_pmf, EntropyTable, InequalityReport, JointPMF,
};
use smdc_core::region::WeightVector;
use smdc_core::{Error, Result};

use crate::report::{float, q, sig12, Report, Status};
use crate::{Context, EntropyCmd, PmfSource, Rationals, Which};

/// A seed from `--seed`/`SMDC_SEED`, else from the OS.
pub fn base_seed(ctx: &Context) -> u64 {
    ctx.seed.unwrap_or_else(|| rand::rngs::OsRng.next_u64())
}

/// The pmfs to examine, each labelled for the report.
fn load(source: &PmfSource, trials: usize, ctx: &Context, r: &mut Report) -> Result<Vec<(String, JointPMF)>> {
    if let Some(path) = &source.pmf {
        if trials != 1 {
            return Err(Error::InvalidArgument("--trials needs --random".into()));
        }
        r.input("pmf", path.display().to_string());
        return Ok(vec![(path.display().to_string(), JointPMF::parse_text(&fs::read_to_string(path)?)?)]);
    }
    let sizes = source.random.clone().unwrap_or_default();
    if trials == 0 {
        return Err(Error::InvalidArgument("--trials must be positive".into()));
    }
    let seed = base_seed(ctx);
    r.input("random", sizes.clone()).input("seed", seed).input("trials", trials);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..trials)
        .map(|i| {
            let s: u64 = rng.gen();
            Ok((format!("trial {} (pmf seed {s})", i + 1), random_pmf(&sizes, s)?))
        })
        .collect()
}

fn parse_set(text: &str, ground: usize) -> Result<EncoderSet> {
    EncoderSet::parse_text(text, ground).map_err(|e| Error::InvalidArgument(e.to_string()))
}

fn lambda_or_ones(lambda: &Option<Rationals>, ground: usize) -> Result<WeightVector> {
    match lambda {
        Some(l) if l.0.len() != ground => {
            Err(Error::Dimension(format!("λ has {} entries but the pmf has {ground} variables", l.0.len())))
        }
        Some(l) => WeightVector::new(l.0.clone()),
        None => Ok(WeightVector::ones(ground)),
    }
}

fn levels(alpha: Option<usize>, top: usize) -> Vec<usize> {
    match alpha {
        Some(a) => vec![a],
        None => (2..=top).collect(),
    }
}

struct CheckArgs<'a> {
    which: Which,
    alpha: Option<usize>,
    lambda: &'a Option<Rationals>,
    chain_file: &'a Option<std::path::PathBuf>,
    n: usize,
    set: &'a Option<String>,
}

fn check_one(pmf: &JointPMF, args: &CheckArgs) -> Result<Vec<(String, InequalityReport)>> {
    let l = pmf.variable_count();
    let table = || EntropyTable::new(pmf);
    let mut out = Vec::new();
    match args.which {
        Which::Han | Which::Window => {
            let t = table()?;
            for a in levels(args.alpha, l) {
                let report =
                    if args.which == Which::Han { check_han_table(&t, a)? } else { check_sliding_window_table(&t, a)? };
                out.push((format!("α = {a}"), report));
            }
        }
        Which::Mt => {
            let parent = match args.set {
                Some(s) => parse_set(s, l)?,
                None => EncoderSet::full(l),
            };
            let cover = FractionalCover::uniform(&parent)?;
            out.push((format!("U = {parent}"), check_mt(pmf, &cover)?));
        }
        Which::Yz => {
            let chain = match args.chain_file {
                Some(path) => chain_from_text(&fs::read_to_string(path)?)?,
                None => yz_chain(&lambda_or_ones(args.lambda, l)?)?,
            };
            if chain.ground_size() != l {
                return Err(Error::Dimension(format!("chain is over {} encoders, pmf over {l}", chain.ground_size())));
            }
            let t = table()?;
            for a in levels(args.alpha, l) {
                out.push((format!("α = {a}"), check_yz_table(&t, &chain, a)?));
            }
        }
        Which::Cyz => {
            let assignment = conditional_chain(&lambda_or_ones(args.lambda, l)?, args.n)?;
            let t = table()?;
            for a in levels(args.alpha, assignment.top_level()) {
                out.push((format!("α = {a}"), check_conditional_yz_table(&t, &assignment, a)?));
            }
        }
    }
    Ok(out)
}

fn which_name(w: Which) -> &'static str {
    match w {
        Which::Han => "han",
        Which::Window => "window",
        Which::Mt => "mt",
        Which::Yz => "yz",
        Which::Cyz => "cyz",
    }
}

pub fn run(cmd: EntropyCmd, ctx: &Context) -> Result<Report> {
    match cmd {
        EntropyCmd::H { source, set } => {
            let mut r = Report::new("entropy h");
            let pmfs = load(&source, 1, ctx, &mut r)?;
            let pmf = &pmfs[0].1;
            let l = pmf.variable_count();
            let sets = match &set {
                Some(s) => vec![parse_set(s, l)?],
                None => (1..=l).map(|k| subsets_of_size(l, k)).collect::<Result<Vec<_>>>()?.concat(),
            };
            let table = EntropyTable::new(pmf)?;
            let mut values = Vec::new();
            for u in &sets {
                let h = table.get(u);
                r.line(format!("H{u} = {}", sig12(h)));
                values.push(json!({"set": u.members(), "entropy": float(h)}));
            }
            r.result("entropies", values);
            Ok(r)
        }
        EntropyCmd::Check { which, source, alpha, lambda, chain_file, n, set, trials } => {
            let mut r = Report::new("entropy check");
            r.input("which", which_name(which));
            let pmfs = load(&source, trials, ctx, &mut r)?;
            let args = CheckArgs { which, alpha, lambda: &lambda, chain_file: &chain_file, n, set: &set };
            let mut all_hold = true;
            let mut min_slack = f64::INFINITY;
            let mut checks = Vec::new();
            for (label, pmf) in &pmfs {
                for (what, report) in check_one(pmf, &args)? {
                    all_hold &= report.holds;
                    min_slack = min_slack.min(report.slack);
                    r.line(format!(
                        "{label} {what}: lhs {} rhs {} slack {} {}",
                        sig12(report.lhs),
                        sig12(report.rhs),
                        sig12(report.slack),
                        if report.holds { "holds" } else { "VIOLATED" }
                    ));
                    checks.push(json!({
                        "pmf": label, "check": what, "lhs": float(report.lhs), "rhs": float(report.rhs),
                        "slack": float(report.slack), "holds": report.holds,
                    }));
                }
            }
            r.result("holds", all_hold).result("min_slack", float(min_slack)).result("checks", checks);
            r.line(format!("{}: min slack {}", if all_hold { "holds" } else { "violated" }, sig12(min_slack)));
            r.status = Status::from_holds(all_hold);
            Ok(r)
        }
        EntropyCmd::PermIdentity { encoders, alpha } => {
            let mut r = Report::new("entropy perm-identity");
            r.input("encoders", encoders);
            let alphas = match alpha {
                Some(a) => vec![a],
                None => (1..=encoders).collect(),
            };
            let mut rows: Vec<Value> = Vec::new();
            let mut ok = true;
            for a in alphas {
                if a == 0 || a > encoders {
                    return Err(Error::InvalidArgument(format!("α = {a} outside 1..={encoders}")));
                }
                let holds = permutation_identity(encoders, a)?;
                let mult = permutation_multiplicity(encoders, a);
                ok &= holds;
                r.line(format!("α = {a}: every subset hit {mult} times: {holds}"));
                rows.push(json!({"alpha": a, "multiplicity": q(&mult), "holds": holds}));
            }
            r.result("levels", rows).result("holds", ok);
            r.status = Status::from_holds(ok);
            Ok(r)
        }
    }
}
