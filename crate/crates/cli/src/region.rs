use serde_json::{json, Value};
use smdc_core::rational::fmt_list;
use smdc_core::region::{
    f_alpha, f_profile, g_m, greedy_allocation, greedy_matches_region, min_sum_rate, smdc_member, smdca_general_rhs,
    smdca_hyperplane, smdca_member, ssmdc_member, Certificate, EntropyProfile, GreedyLevel, MembershipVerdict,
    RateTuple, WeightVector,
};
use smdc_core::Result;

use crate::report::{q, q_list, Report, Status};
use crate::{Rationals, RegionCmd};

fn weights(r: &Rationals) -> Result<WeightVector> {
    WeightVector::new(r.0.clone())
}

fn entropies(r: &Rationals) -> Result<EntropyProfile> {
    EntropyProfile::new(r.0.clone())
}

pub fn run(cmd: RegionCmd) -> Result<Report> {
    match cmd {
        RegionCmd::F { lambda, alpha } => {
            let mut r = Report::new("region f");
            let c = f_alpha(&weights(&lambda)?, alpha)?;
            r.input("lambda", q_list(&lambda.0)).input("alpha", alpha);
            r.result("f", q(&c.total));
            r.result("assignment", assignment_json(&c.assignment));
            r.line(format!("f_{alpha} = {}", c.total));
            for (u, v) in c.assignment.iter().filter(|(_, v)| !num_traits::Zero::is_zero(*v)) {
                r.line(format!("  c({}) = {v}", u.to_text()));
            }
            Ok(r)
        }
        RegionCmd::Profile { lambda } => {
            let mut r = Report::new("region profile");
            let p = f_profile(&weights(&lambda)?)?;
            r.input("lambda", q_list(&lambda.0)).result("profile", q_list(&p));
            for (i, f) in p.iter().enumerate() {
                r.line(format!("f_{} = {f}", i + 1));
            }
            Ok(r)
        }
        RegionCmd::MinSum { entropies: h } => {
            let mut r = Report::new("region min-sum");
            let m = min_sum_rate(&entropies(&h)?);
            r.input("entropies", q_list(&h.0)).result("min_sum", q(&m)).line(m.to_string());
            Ok(r)
        }
        RegionCmd::Member { rates, entropies: h } => {
            let mut r = Report::new("region member");
            r.input("rates", q_list(&rates.0)).input("entropies", q_list(&h.0));
            let v = smdc_member(&RateTuple::new(rates.0)?, &entropies(&h)?)?;
            membership(&mut r, v);
            Ok(r)
        }
        RegionCmd::MemberA { r0, rates, entropies: h } => {
            let mut r = Report::new("region member-a");
            r.input("r0", q(&r0)).input("rates", q_list(&rates.0)).input("entropies", q_list(&h.0));
            let v = smdca_member(&RateTuple::with_all_access(r0, rates.0)?, &entropies(&h)?)?;
            membership(&mut r, v);
            Ok(r)
        }
        RegionCmd::MemberS { rates, entropies: h, n } => {
            let mut r = Report::new("region member-s");
            r.input("rates", q_list(&rates.0)).input("entropies", q_list(&h.0)).input("n", n);
            let v = ssmdc_member(&RateTuple::new(rates.0)?, &entropies(&h)?, n)?;
            membership(&mut r, v);
            Ok(r)
        }
        RegionCmd::Greedy { r0, entropies: h, lambda } => {
            let mut r = Report::new("region greedy");
            let profile = entropies(&h)?;
            let g = greedy_allocation(&r0, &profile)?;
            r.input("r0", q(&r0)).input("entropies", q_list(&h.0));
            let level = match g.q {
                GreedyLevel::Level(q) => Value::from(q),
                GreedyLevel::All => Value::from("all"),
            };
            r.result("stored_at_zero", q_list(&g.stored_at_zero)).result("residual", q_list(&g.residual));
            r.result("q", level.clone());
            r.line(format!("greedy level: {}", level.as_u64().map_or("all".to_string(), |v| v.to_string())));
            r.line(format!("stored at encoder 0: {}", fmt_list(&g.stored_at_zero)));
            r.line(format!("residual: {}", fmt_list(&g.residual)));
            if let Some(lambda) = lambda {
                let w = weights(&lambda)?;
                let matches = greedy_matches_region(&w, &profile, &r0)?;
                let values = (1..=w.len()).map(|m| g_m(m, &w, &profile, &r0)).collect::<Result<Vec<_>>>()?;
                r.input("lambda", q_list(&lambda.0));
                r.result("g", q_list(&values)).result("greedy_matches_region", matches);
                r.line(format!("g_m: {}", fmt_list(&values)));
                r.line(format!("max g_m attained at the greedy level: {matches}"));
                r.status = Status::from_holds(matches);
            }
            Ok(r)
        }
        RegionCmd::HyperplaneA { lambda, entropies: h, m, lambda0 } => {
            let mut r = Report::new("region hyperplane-a");
            let w = weights(&lambda)?;
            let profile = entropies(&h)?;
            r.input("lambda", q_list(&lambda.0)).input("entropies", q_list(&h.0));
            let ms: Vec<usize> = match m {
                Some(m) => vec![m],
                None => (1..=w.len()).collect(),
            };
            let mut rows = Vec::new();
            for m in ms {
                let rhs = smdca_hyperplane(m, &w, &profile)?;
                r.line(format!("m = {m}: f_{m}(λ) R_0 + Σ λ_l R_l ≥ {rhs}"));
                rows.push(json!({"m": m, "rhs": q(&rhs)}));
            }
            r.result("hyperplanes", rows);
            if let Some(l0) = lambda0 {
                let p = f_profile(&w)?;
                if p.len() != profile.len() {
                    return Err(smdc_core::Error::Dimension("λ and entropies differ in length".into()));
                }
                let rhs = smdca_general_rhs(&l0, &p, &profile);
                r.input("lambda0", q(&l0)).result("general_rhs", q(&rhs));
                r.line(format!("λ_0 = {l0}: λ_0 R_0 + Σ λ_l R_l ≥ {rhs}"));
            }
            Ok(r)
        }
    }
}

fn assignment_json<'a>(
    a: impl IntoIterator<Item = (&'a smdc_core::combinatorics::EncoderSet, &'a smdc_core::Rational)>,
) -> Value {
    Value::Array(a.into_iter().map(|(u, v)| json!({"set": u.members(), "value": q(v)})).collect())
}

fn certificate_json(c: &Certificate) -> Value {
    let mut v = json!({"lambda": q_list(c.lambda.as_slice()), "lhs": q(&c.lhs), "rhs": q(&c.rhs)});
    if let Some(l0) = &c.lambda0 {
        v["lambda0"] = q(l0);
    }
    if let Some(m) = c.m {
        v["m"] = m.into();
    }
    v
}

fn membership(r: &mut Report, v: MembershipVerdict) {
    r.result("member", v.member);
    if let Some(w) = &v.witness {
        let rows: Vec<Value> = w.levels.iter().map(|row| q_list(row)).collect();
        r.result("witness", json!({"levels": rows, "has_all_access": w.has_all_access}));
        r.line("member");
        r.line(if w.has_all_access { "witness r^(α) (encoder 0 first):" } else { "witness r^(α):" });
        for (alpha, row) in w.levels.iter().enumerate() {
            r.line(format!("  α = {}: {}", alpha + 1, fmt_list(row)));
        }
    }
    if let Some(c) = &v.certificate {
        r.status = Status::Violated;
        r.certificate = Some(certificate_json(c));
        r.line("non-member");
        r.line(format!("certificate: λ = ({})", fmt_list(c.lambda.as_slice())));
        if let Some(l0) = &c.lambda0 {
            r.line(format!("  λ_0 = {l0}"));
        }
        if let Some(m) = c.m {
            r.line(format!("  breakpoint m = {m}"));
        }
        r.line(format!("  lhs {} < rhs {}", c.lhs, c.rhs));
    }
}
