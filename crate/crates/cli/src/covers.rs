use std::fs;

use serde_json::{json, Value};
use smdc_core::cover::{
    chain_from_text, chain_to_text, conditional_chain, han_chain, verify_chain, verify_conditional, yz_chain,
    CoefficientChain,
};
use smdc_core::region::WeightVector;
use smdc_core::Result;

use crate::report::{q, q_list, Report, Status};
use crate::CoversCmd;

fn summary(r: &mut Report, chain: &CoefficientChain) {
    let totals: Vec<_> = (1..=chain.ground_size()).map(|a| chain.level(a).total.clone()).collect();
    let cases: Vec<Value> =
        (2..=chain.ground_size()).map(|a| Value::from(chain.step(a).case.map_or("fresh", |c| c.name()))).collect();
    r.result("totals", q_list(&totals)).result("descents", cases).result("text", chain_to_text(chain));
}

pub fn run(cmd: CoversCmd) -> Result<Report> {
    match cmd {
        CoversCmd::Han { encoders } => {
            let mut r = Report::new("covers han");
            let chain = han_chain(encoders)?;
            r.input("encoders", encoders);
            summary(&mut r, &chain);
            r.line(chain_to_text(&chain).trim_end());
            Ok(r)
        }
        CoversCmd::Chain { lambda, out } => {
            let mut r = Report::new("covers chain");
            let chain = yz_chain(&WeightVector::new(lambda.0.clone())?)?;
            r.input("lambda", q_list(&lambda.0));
            summary(&mut r, &chain);
            let text = chain_to_text(&chain);
            match out {
                Some(path) => {
                    fs::write(&path, &text)?;
                    r.input("out", path.display().to_string());
                    r.line(format!("chain over {} encoders written to {}", chain.ground_size(), path.display()));
                }
                None => {
                    r.line(text.trim_end());
                }
            }
            Ok(r)
        }
        CoversCmd::Conditional { lambda, n } => {
            let mut r = Report::new("covers conditional");
            let a = conditional_chain(&WeightVector::new(lambda.0.clone())?, n)?;
            let report = verify_conditional(&a)?;
            r.input("lambda", q_list(&lambda.0)).input("n", n);
            let mut levels = Vec::new();
            for alpha in (1..=a.top_level()).rev() {
                r.line(format!("level {alpha}"));
                let mut families = Vec::new();
                for (u, family) in a.level(alpha) {
                    for (cond, s) in family {
                        r.line(format!("  {} | {} {s}", u.to_text(), cond.to_text()));
                        families.push(json!({"set": u.members(), "given": cond.members(), "weight": q(s)}));
                    }
                }
                levels.push(json!({"alpha": alpha, "families": families}));
            }
            r.result("levels", levels).result("verified", report.passed());
            r.line(format!("verified: {}", report.passed()));
            for f in &report.failures {
                r.line(format!("  {f}"));
            }
            r.status = Status::from_holds(report.passed());
            Ok(r)
        }
        CoversCmd::Verify { chain_file } => {
            let mut r = Report::new("covers verify");
            let chain = chain_from_text(&fs::read_to_string(&chain_file)?)?;
            let report = verify_chain(&chain)?;
            r.input("chain_file", chain_file.display().to_string());
            r.result("passed", report.passed()).result("failures", report.failures.clone());
            r.line(if report.passed() { "chain verified" } else { "chain invalid" });
            for f in &report.failures {
                r.line(format!("  {f}"));
            }
            r.status = Status::from_holds(report.passed());
            Ok(r)
        }
    }
}
