//! Superposition rate regions of SMDC, SMDC-A and S-SMDC.
//!
//! `f_α(λ)` is the optimum of the packing program
//!
//! ```text
//! max Σ_U c(U)   s.t.  Σ_{U ∋ l} c(U) ≤ λ_l  (l = 1..L),  c ≥ 0,
//! ```
//!
//! over the `α`-subsets `U` of `{1..L}`. Every region is the intersection of
//! the half-spaces `Σ λ_l R_l ≥ Σ_α f_α(λ) H_α` (with the appropriate
//! modifications for the all-access encoder and for secrecy). Membership is
//! decided exactly on the primal side by an allocation feasibility program;
//! non-members get a separating hyperplane read off the Farkas certificate.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};

use crate::combinatorics::{subsets_of_size, EncoderSet};
use crate::error::{invalid, Error, Result};
use crate::lp::{self, Feasibility, LinearProgram, LpStatus, Sense};
use crate::rational::{int, one, zero, Rational};

/// Largest number of encoders accepted by the membership programs.
pub const MAX_MEMBERSHIP_ENCODERS: usize = 12;

/// Hyperplane weights `λ ∈ (ℝ⁺)^L`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightVector(Vec<Rational>);

impl WeightVector {
    pub fn new(weights: Vec<Rational>) -> Result<Self> {
        if weights.is_empty() {
            return invalid("weight vector must be nonempty");
        }
        if weights.iter().any(|w| w.is_negative()) {
            return invalid("weights must be nonnegative");
        }
        Ok(Self(weights))
    }

    pub fn ones(len: usize) -> Self {
        Self(vec![one(); len])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.0
    }

    /// Weight of encoder `l` (1-based).
    pub fn weight(&self, l: usize) -> &Rational {
        &self.0[l - 1]
    }

    pub fn scaled(&self, factor: &Rational) -> WeightVector {
        WeightVector(self.0.iter().map(|w| w * factor).collect())
    }

    pub fn total(&self) -> Rational {
        self.0.iter().sum()
    }
}

/// Source entropies `(H(S_1), …)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EntropyProfile(Vec<Rational>);

impl EntropyProfile {
    pub fn new(entropies: Vec<Rational>) -> Result<Self> {
        if entropies.is_empty() {
            return invalid("entropy profile must be nonempty");
        }
        if entropies.iter().any(|h| h.is_negative()) {
            return invalid("entropies must be nonnegative");
        }
        Ok(Self(entropies))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.0
    }

    pub fn total(&self) -> Rational {
        self.0.iter().sum()
    }

    /// `Σ_{α ≤ m} H_α`.
    pub fn prefix_sum(&self, m: usize) -> Rational {
        self.0.iter().take(m).sum()
    }
}

/// Encoder rates `(R_1, …, R_L)` and, for SMDC-A, the all-access rate `R_0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RateTuple {
    pub rates: Vec<Rational>,
    pub r0: Option<Rational>,
}

impl RateTuple {
    pub fn new(rates: Vec<Rational>) -> Result<Self> {
        Self::check(&rates, None)?;
        Ok(Self { rates, r0: None })
    }

    pub fn with_all_access(r0: Rational, rates: Vec<Rational>) -> Result<Self> {
        Self::check(&rates, Some(&r0))?;
        Ok(Self { rates, r0: Some(r0) })
    }

    fn check(rates: &[Rational], r0: Option<&Rational>) -> Result<()> {
        if rates.is_empty() {
            return invalid("rate tuple must be nonempty");
        }
        if rates.iter().chain(r0).any(|r| r.is_negative()) {
            return invalid("rates must be nonnegative");
        }
        Ok(())
    }
}

/// An optimal solution `c^(α)` of the packing program and its value `f_α(λ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsetCoefficients {
    pub level: usize,
    pub assignment: BTreeMap<EncoderSet, Rational>,
    pub total: Rational,
}

impl SubsetCoefficients {
    pub fn from_assignment(level: usize, assignment: BTreeMap<EncoderSet, Rational>) -> Self {
        let total = assignment.values().sum();
        Self { level, assignment, total }
    }

    pub fn get(&self, set: &EncoderSet) -> Rational {
        self.assignment.get(set).cloned().unwrap_or_else(zero)
    }

    /// `Σ_{U ∋ l} c(U)` for `l = 1..ground`.
    pub fn loads(&self, ground: usize) -> Vec<Rational> {
        let mut loads = vec![zero(); ground];
        for (set, value) in &self.assignment {
            if value.is_zero() {
                continue;
            }
            for &m in set.members() {
                loads[m - 1] += value;
            }
        }
        loads
    }

    /// Exact check that the assignment is feasible for capacities `λ` and
    /// attains `optimum`.
    pub fn is_optimal_for(&self, lambda: &WeightVector, optimum: &Rational) -> bool {
        self.assignment.keys().all(|u| u.len() == self.level)
            && self.assignment.values().all(|v| !v.is_negative())
            && self.loads(lambda.len()).iter().zip(lambda.as_slice()).all(|(load, cap)| load <= cap)
            && &self.total == optimum
    }
}

/// Per-level, per-encoder allocation `r_l^(α)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Allocation {
    /// `levels[α−1][l]`; index 0 is encoder 0 when the all-access encoder is
    /// present, otherwise encoder `l+1`.
    pub levels: Vec<Vec<Rational>>,
    pub has_all_access: bool,
}

/// A separating hyperplane proving non-membership.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    /// `λ`, normalized so its largest component is 1.
    pub lambda: WeightVector,
    /// Weight of `R_0` in the Farkas hyperplane (SMDC-A only).
    pub lambda0: Option<Rational>,
    /// Index of the violated inequality `f_m(λ)R_0 + Σ λ_l R_l ≥ …` (SMDC-A only).
    pub m: Option<usize>,
    /// Left side of the violated inequality at the rate tuple.
    pub lhs: Rational,
    /// Right side; always strictly larger than `lhs`.
    pub rhs: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MembershipVerdict {
    pub member: bool,
    pub witness: Option<Allocation>,
    pub certificate: Option<Certificate>,
}

fn check_level(l: usize, alpha: usize) -> Result<()> {
    if alpha == 0 || alpha > l {
        return invalid(format!("α = {alpha} outside 1..={l}"));
    }
    Ok(())
}

/// The packing program for level `α` and the column order of its variables.
pub fn packing_program(lambda: &WeightVector, alpha: usize) -> Result<(LinearProgram, Vec<EncoderSet>)> {
    let l = lambda.len();
    check_level(l, alpha)?;
    let sets = subsets_of_size(l, alpha)?;
    let mut lp = LinearProgram::with_objective(vec![one(); sets.len()]);
    for enc in 1..=l {
        let support: Vec<usize> = sets.iter().enumerate().filter(|(_, u)| u.contains(enc)).map(|(j, _)| j).collect();
        lp.add_sparse(&support, Sense::Le, lambda.weight(enc).clone())?;
    }
    Ok((lp, sets))
}

/// Solves the level-`α` packing program: an optimal `c^(α)` and `f_α(λ)`.
pub fn f_alpha(lambda: &WeightVector, alpha: usize) -> Result<SubsetCoefficients> {
    let (lp, sets) = packing_program(lambda, alpha)?;
    let sol = lp::solve_max(&lp)?;
    if sol.status != LpStatus::Optimal {
        return Err(Error::Internal(format!("packing program not optimal: {:?}", sol.status)));
    }
    let assignment = sets.into_iter().zip(sol.primal).collect();
    Ok(SubsetCoefficients { level: alpha, assignment, total: sol.value })
}

/// `(f_1(λ), …, f_L(λ))`.
pub fn f_profile(lambda: &WeightVector) -> Result<Vec<Rational>> {
    (1..=lambda.len()).map(|a| f_alpha(lambda, a).map(|c| c.total)).collect()
}

/// `Σ_α (L/α) H_α`: the smallest sum rate reachable by superposition coding.
pub fn min_sum_rate(entropies: &EntropyProfile) -> Rational {
    let l = entropies.len() as i64;
    entropies.as_slice().iter().enumerate().map(|(i, h)| h * Rational::new(l.into(), (i as i64 + 1).into())).sum()
}

/// `Σ_α f_α(λ) H_α` for a precomputed profile (α beyond `H` ignored).
pub fn hyperplane_rhs(profile: &[Rational], entropies: &EntropyProfile) -> Rational {
    profile.iter().zip(entropies.as_slice()).map(|(f, h)| f * h).sum()
}

fn weighted_rates(lambda: &WeightVector, rates: &[Rational]) -> Rational {
    lambda.as_slice().iter().zip(rates).map(|(w, r)| w * r).sum()
}

/// Membership program shared by the three schemes: `levels` sources, `L`
/// encoders, optional all-access encoder.
fn allocation_feasibility(
    rates: &[Rational],
    r0: Option<&Rational>,
    entropies: &[Rational],
) -> Result<(LinearProgram, Feasibility)> {
    let l = rates.len();
    if l == 0 || l > MAX_MEMBERSHIP_ENCODERS {
        return invalid(format!("membership supports 1..={MAX_MEMBERSHIP_ENCODERS} encoders, got {l}"));
    }
    let offset = usize::from(r0.is_some());
    let width = l + offset;
    let levels = entropies.len();
    let var = |alpha: usize, enc: usize| (alpha - 1) * width + enc - 1 + offset;
    let mut lp = LinearProgram::new(levels * width);
    for (alpha, h) in (1..=levels).zip(entropies) {
        for u in subsets_of_size(l, alpha)? {
            let mut support: Vec<usize> = u.members().iter().map(|&enc| var(alpha, enc)).collect();
            if offset == 1 {
                support.push((alpha - 1) * width);
            }
            lp.add_sparse(&support, Sense::Ge, h.clone())?;
        }
    }
    if let Some(r0) = r0 {
        let support: Vec<usize> = (1..=levels).map(|a| (a - 1) * width).collect();
        lp.add_sparse(&support, Sense::Le, r0.clone())?;
    }
    for (enc, rate) in (1..=l).zip(rates) {
        let support: Vec<usize> = (1..=levels).map(|a| var(a, enc)).collect();
        lp.add_sparse(&support, Sense::Le, rate.clone())?;
    }
    let verdict = lp::feasible(&lp)?;
    Ok((lp, verdict))
}

fn witness_from(point: &[Rational], levels: usize, width: usize, has_all_access: bool) -> Allocation {
    Allocation { levels: point.chunks(width).take(levels).map(|c| c.to_vec()).collect(), has_all_access }
}

/// Extracts `(λ_0?, λ)` from the capacity rows of a Farkas certificate and
/// normalizes so that `max λ_l = 1`.
fn certificate_weights(cert: &[Rational], l: usize, has_all_access: bool) -> Result<(Option<Rational>, WeightVector)> {
    let caps = &cert[cert.len() - l - usize::from(has_all_access)..];
    let (lambda0, lambda) = if has_all_access { (Some(-&caps[0]), &caps[1..]) } else { (None, caps) };
    let lambda: Vec<Rational> = lambda.iter().map(|y| -y).collect();
    let max = lambda.iter().max().cloned().unwrap_or_else(zero);
    if !max.is_positive() {
        return Err(Error::Internal("certificate has no positive encoder weight".into()));
    }
    let lambda = WeightVector::new(lambda.iter().map(|w| w / &max).collect())?;
    Ok((lambda0.map(|w| w / &max), lambda))
}

fn check_lengths(rates: usize, entropies: usize, what: &str) -> Result<()> {
    if rates != entropies {
        return Err(Error::Dimension(format!("{what}: {rates} rates but {entropies} entropies")));
    }
    Ok(())
}

/// Exact membership in the SMDC superposition region.
pub fn smdc_member(rates: &RateTuple, entropies: &EntropyProfile) -> Result<MembershipVerdict> {
    if rates.r0.is_some() {
        return invalid("SMDC rate tuple must not carry R_0");
    }
    check_lengths(rates.rates.len(), entropies.len(), "SMDC")?;
    secure_member_unchecked(rates, entropies)
}

/// Exact membership in the S-SMDC superposition region with `n` wiretapped
/// encoders: entropies cover sources `1..L−n`.
pub fn ssmdc_member(rates: &RateTuple, entropies: &EntropyProfile, n: usize) -> Result<MembershipVerdict> {
    if rates.r0.is_some() {
        return invalid("S-SMDC rate tuple must not carry R_0");
    }
    let l = rates.rates.len();
    if n >= l {
        return invalid(format!("N = {n} must be below L = {l}"));
    }
    check_lengths(l - n, entropies.len(), "S-SMDC (L−N sources)")?;
    secure_member_unchecked(rates, entropies)
}

fn secure_member_unchecked(rates: &RateTuple, entropies: &EntropyProfile) -> Result<MembershipVerdict> {
    let l = rates.rates.len();
    let (_, verdict) = allocation_feasibility(&rates.rates, None, entropies.as_slice())?;
    match verdict {
        Feasibility::Feasible(x) => Ok(MembershipVerdict {
            member: true,
            witness: Some(witness_from(&x, entropies.len(), l, false)),
            certificate: None,
        }),
        Feasibility::Infeasible(cert) => {
            let (_, lambda) = certificate_weights(&cert, l, false)?;
            let profile: Vec<Rational> =
                (1..=entropies.len()).map(|a| f_alpha(&lambda, a).map(|c| c.total)).collect::<Result<_>>()?;
            let lhs = weighted_rates(&lambda, &rates.rates);
            let rhs = hyperplane_rhs(&profile, entropies);
            if lhs >= rhs {
                return Err(Error::Internal("Farkas hyperplane does not separate the rate tuple".into()));
            }
            Ok(MembershipVerdict {
                member: false,
                witness: None,
                certificate: Some(Certificate { lambda, lambda0: None, m: None, lhs, rhs }),
            })
        }
    }
}

/// `f_α(λ_0, λ) = min(f_α(λ), λ_0)`.
pub fn smdca_f(lambda0: &Rational, lambda: &WeightVector, alpha: usize) -> Result<Rational> {
    if lambda0.is_negative() {
        return invalid("λ_0 must be nonnegative");
    }
    let f = f_alpha(lambda, alpha)?.total;
    Ok(f.min(lambda0.clone()))
}

/// `f_α(λ_0, λ)` computed directly from the packing program with the extra
/// total-mass row `Σ_U c(U) ≤ λ_0`.
pub fn smdca_f_program(lambda0: &Rational, lambda: &WeightVector, alpha: usize) -> Result<Rational> {
    let (mut lp, sets) = packing_program(lambda, alpha)?;
    lp.add_constraint(vec![one(); sets.len()], Sense::Le, lambda0.clone())?;
    let sol = lp::solve_max(&lp)?;
    match sol.status {
        LpStatus::Optimal => Ok(sol.value),
        other => Err(Error::Internal(format!("SMDC-A packing program: {other:?}"))),
    }
}

/// Right side of the `m`-th all-access inequality:
/// `f_m(λ) Σ_{α≤m} H_α + Σ_{α>m} f_α(λ) H_α`.
pub fn smdca_hyperplane(m: usize, lambda: &WeightVector, entropies: &EntropyProfile) -> Result<Rational> {
    check_lengths(lambda.len(), entropies.len(), "SMDC-A hyperplane")?;
    let profile = f_profile(lambda)?;
    smdca_hyperplane_from_profile(m, &profile, entropies)
}

pub fn smdca_hyperplane_from_profile(m: usize, profile: &[Rational], entropies: &EntropyProfile) -> Result<Rational> {
    check_level(profile.len(), m)?;
    let head = &profile[m - 1] * entropies.prefix_sum(m);
    let tail: Rational = profile.iter().zip(entropies.as_slice()).skip(m).map(|(f, h)| f * h).sum();
    Ok(head + tail)
}

/// Right side `Σ_α min(f_α(λ), λ_0) H_α` of the general all-access hyperplane.
pub fn smdca_general_rhs(lambda0: &Rational, profile: &[Rational], entropies: &EntropyProfile) -> Rational {
    profile.iter().zip(entropies.as_slice()).map(|(f, h)| f.clone().min(lambda0.clone()) * h).sum()
}

/// Exact membership in the SMDC-A superposition region.
pub fn smdca_member(rates: &RateTuple, entropies: &EntropyProfile) -> Result<MembershipVerdict> {
    let Some(r0) = rates.r0.as_ref() else {
        return invalid("SMDC-A rate tuple needs R_0");
    };
    let l = rates.rates.len();
    check_lengths(l, entropies.len(), "SMDC-A")?;
    let (_, verdict) = allocation_feasibility(&rates.rates, Some(r0), entropies.as_slice())?;
    match verdict {
        Feasibility::Feasible(x) => {
            Ok(MembershipVerdict { member: true, witness: Some(witness_from(&x, l, l + 1, true)), certificate: None })
        }
        Feasibility::Infeasible(cert) => {
            let (lambda0, lambda) = certificate_weights(&cert, l, true)?;
            let lambda0 = lambda0.unwrap_or_else(zero);
            let profile = f_profile(&lambda)?;
            let general_lhs = &lambda0 * r0 + weighted_rates(&lambda, &rates.rates);
            if general_lhs >= smdca_general_rhs(&lambda0, &profile, entropies) {
                return Err(Error::Internal("Farkas hyperplane does not separate the rate tuple".into()));
            }
            // Some breakpoint λ_0 = f_m(λ) is violated whenever the general
            // hyperplane is.
            let base = weighted_rates(&lambda, &rates.rates);
            for m in 1..=l {
                let lhs = &profile[m - 1] * r0 + &base;
                let rhs = smdca_hyperplane_from_profile(m, &profile, entropies)?;
                if lhs < rhs {
                    return Ok(MembershipVerdict {
                        member: false,
                        witness: None,
                        certificate: Some(Certificate { lambda, lambda0: Some(lambda0), m: Some(m), lhs, rhs }),
                    });
                }
            }
            Err(Error::Internal("no breakpoint inequality is violated".into()))
        }
    }
}

/// Level at which the greedy all-access allocation stops.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GreedyLevel {
    /// `Σ_{α<q} H_α ≤ R_0 < Σ_{α≤q} H_α`.
    Level(usize),
    /// `R_0 ≥ Σ_α H_α`: everything fits at encoder 0.
    All,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GreedyAllocation {
    pub stored_at_zero: Vec<Rational>,
    pub residual: Vec<Rational>,
    pub q: GreedyLevel,
}

/// Greedy split of the all-access budget `r0`: fill sources in order of
/// decreasing reconstruction requirement.
pub fn greedy_allocation(r0: &Rational, entropies: &EntropyProfile) -> Result<GreedyAllocation> {
    if r0.is_negative() {
        return invalid("R_0 must be nonnegative");
    }
    let h = entropies.as_slice();
    let mut stored = vec![zero(); h.len()];
    let mut residual = h.to_vec();
    let mut prefix = zero();
    for (i, hi) in h.iter().enumerate() {
        let next = &prefix + hi;
        if *r0 < next {
            stored[..i].clone_from_slice(&h[..i]);
            stored[i] = r0 - &prefix;
            for r in residual.iter_mut().take(i) {
                *r = zero();
            }
            residual[i] = next - r0;
            return Ok(GreedyAllocation { stored_at_zero: stored, residual, q: GreedyLevel::Level(i + 1) });
        }
        prefix = next;
    }
    Ok(GreedyAllocation { stored_at_zero: h.to_vec(), residual: vec![zero(); h.len()], q: GreedyLevel::All })
}

/// `g_m(λ) = f_m(λ)(Σ_{α≤m} H_α − R_0) + Σ_{α>m} f_α(λ) H_α` from a profile.
pub fn g_from_profile(m: usize, profile: &[Rational], entropies: &EntropyProfile, r0: &Rational) -> Result<Rational> {
    Ok(smdca_hyperplane_from_profile(m, profile, entropies)? - &profile[m - 1] * r0)
}

pub fn g_m(m: usize, lambda: &WeightVector, entropies: &EntropyProfile, r0: &Rational) -> Result<Rational> {
    check_lengths(lambda.len(), entropies.len(), "g_m")?;
    g_from_profile(m, &f_profile(lambda)?, entropies, r0)
}

/// Whether `max_m g_m(λ)` is attained at the greedy level `q` (or at `L`
/// when everything fits at encoder 0).
pub fn greedy_matches_region(lambda: &WeightVector, entropies: &EntropyProfile, r0: &Rational) -> Result<bool> {
    check_lengths(lambda.len(), entropies.len(), "greedy")?;
    let profile = f_profile(lambda)?;
    greedy_matches_profile(&profile, entropies, r0)
}

pub fn greedy_matches_profile(profile: &[Rational], entropies: &EntropyProfile, r0: &Rational) -> Result<bool> {
    let l = profile.len();
    let q = match greedy_allocation(r0, entropies)?.q {
        GreedyLevel::Level(q) => q,
        GreedyLevel::All => l,
    };
    let g: Vec<Rational> = (1..=l).map(|m| g_from_profile(m, profile, entropies, r0)).collect::<Result<_>>()?;
    let max = g.iter().max().cloned().unwrap_or_else(zero);
    Ok(g[q - 1] == max)
}

/// Symmetric allocation `r_l^(α) = H_α / α`; its per-encoder total is the
/// symmetric rate point.
pub fn symmetric_rate(entropies: &EntropyProfile) -> Rational {
    entropies.as_slice().iter().enumerate().map(|(i, h)| h / int(i as i64 + 1)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, parse_list, ratio};

    fn w(text: &str) -> WeightVector {
        WeightVector::new(parse_list(text).unwrap()).unwrap()
    }

    fn h(text: &str) -> EntropyProfile {
        EntropyProfile::new(parse_list(text).unwrap()).unwrap()
    }

    fn rates(text: &str) -> RateTuple {
        RateTuple::new(parse_list(text).unwrap()).unwrap()
    }

    #[test]
    fn f_alpha_examples() {
        let c = f_alpha(&w("1,1,1"), 2).unwrap();
        assert_eq!(c.total, ratio(3, 2));
        assert!(c.assignment.values().all(|v| *v == ratio(1, 2)));
        assert_eq!(f_alpha(&w("2,1,1"), 2).unwrap().total, int(2));
        assert_eq!(f_alpha(&w("1,0,0"), 2).unwrap().total, int(0));
        assert!(f_alpha(&w("1,1"), 3).is_err());
    }

    #[test]
    fn level_one_is_lambda() {
        let lambda = w("3,1/2,0,2");
        let c = f_alpha(&lambda, 1).unwrap();
        let got: Vec<Rational> = c.assignment.values().cloned().collect();
        assert_eq!(got, lambda.as_slice().to_vec());
    }

    #[test]
    fn profiles() {
        assert_eq!(f_profile(&w("1,1,1,1")).unwrap(), vec![int(4), int(2), ratio(4, 3), int(1)]);
        assert_eq!(f_profile(&w("2,1,1")).unwrap(), vec![int(4), int(2), int(1)]);
        assert_eq!(f_profile(&w("0,0,0")).unwrap(), vec![int(0); 3]);
    }

    #[test]
    fn min_sum_rates() {
        assert_eq!(min_sum_rate(&h("1,1,1")), ratio(11, 2));
        assert_eq!(min_sum_rate(&h("0,0,0,0")), int(0));
        assert_eq!(min_sum_rate(&h("1,0,0,0")), int(4));
    }

    #[test]
    fn smdc_membership_examples() {
        let v = smdc_member(&rates("2,1"), &h("1,1")).unwrap();
        assert!(v.member && v.witness.is_some());
        let v = smdc_member(&rates("1.4,1.4"), &h("1,1")).unwrap();
        assert!(!v.member);
        let cert = v.certificate.unwrap();
        assert_eq!(cert.lambda, w("1,1"));
        assert_eq!(cert.lhs, ratio(14, 5));
        assert_eq!(cert.rhs, int(3));
        let sym = symmetric_rate(&h("1,2,3"));
        let v = smdc_member(&RateTuple::new(vec![sym; 3]).unwrap(), &h("1,2,3")).unwrap();
        assert!(v.member);
    }

    #[test]
    fn smdc_length_mismatch() {
        assert!(matches!(smdc_member(&rates("1,1,1"), &h("1,1")), Err(Error::Dimension(_))));
    }

    #[test]
    fn smdca_f_examples() {
        let lambda = w("1,1,1");
        assert_eq!(smdca_f(&int(0), &lambda, 2).unwrap(), int(0));
        assert_eq!(smdca_f(&int(10), &lambda, 2).unwrap(), ratio(3, 2));
        assert_eq!(smdca_f(&ratio(5, 4), &lambda, 2).unwrap(), ratio(5, 4));
        assert_eq!(smdca_f_program(&ratio(5, 4), &lambda, 2).unwrap(), ratio(5, 4));
    }

    #[test]
    fn smdca_membership_examples() {
        let entropies = h("1,1");
        let t = RateTuple::with_all_access(ratio(1, 2), vec![int(1), int(1)]).unwrap();
        assert!(smdca_member(&t, &entropies).unwrap().member);
        let t = RateTuple::with_all_access(int(2), vec![int(0), int(0)]).unwrap();
        assert!(smdca_member(&t, &entropies).unwrap().member);
        let t = RateTuple::with_all_access(ratio(1, 2), vec![ratio(9, 10), ratio(9, 10)]).unwrap();
        let v = smdca_member(&t, &entropies).unwrap();
        assert!(!v.member);
        let c = v.certificate.unwrap();
        assert!(c.lhs < c.rhs && c.m.is_some());
        assert!(smdca_member(&rates("1,1"), &entropies).is_err());
    }

    #[test]
    fn smdca_hyperplanes() {
        let entropies = h("1,1");
        assert_eq!(smdca_hyperplane(1, &w("1,1"), &entropies).unwrap(), int(3));
        assert_eq!(smdca_hyperplane(1, &w("1,1"), &entropies).unwrap(), min_sum_rate(&entropies));
        let lambda = w("2,1,1");
        let e3 = h("1,2,3");
        assert_eq!(smdca_hyperplane(3, &lambda, &e3).unwrap(), f_alpha(&lambda, 3).unwrap().total * int(6));
    }

    #[test]
    fn greedy_examples() {
        let e = h("1,1");
        let g = greedy_allocation(&ratio(1, 2), &e).unwrap();
        assert_eq!(g.q, GreedyLevel::Level(1));
        assert_eq!(g.residual, vec![ratio(1, 2), int(1)]);
        assert_eq!(g.stored_at_zero, vec![ratio(1, 2), int(0)]);
        let g = greedy_allocation(&ratio(3, 2), &e).unwrap();
        assert_eq!(g.q, GreedyLevel::Level(2));
        assert_eq!(g.residual, vec![int(0), ratio(1, 2)]);
        let g = greedy_allocation(&int(5), &e).unwrap();
        assert_eq!(g.q, GreedyLevel::All);
        assert_eq!(g.residual, vec![int(0), int(0)]);
        assert_eq!(greedy_allocation(&int(0), &e).unwrap().q, GreedyLevel::Level(1));
    }

    #[test]
    fn g_values() {
        let e = h("1,1");
        let lambda = w("1,1");
        assert_eq!(g_m(1, &lambda, &e, &ratio(1, 2)).unwrap(), int(2));
        assert_eq!(g_m(2, &lambda, &e, &ratio(1, 2)).unwrap(), ratio(3, 2));
        assert!(greedy_matches_region(&lambda, &e, &ratio(1, 2)).unwrap());
        assert_eq!(g_m(2, &lambda, &e, &int(2)).unwrap(), int(0));
        assert!(greedy_matches_region(&lambda, &e, &int(2)).unwrap());
        assert!(greedy_matches_region(&w("3,2,1"), &h("1,2,1"), &int(0)).unwrap());
    }

    #[test]
    fn ssmdc_examples() {
        let v = ssmdc_member(&rates("3/2,3/2,3/2"), &h("1,1"), 1).unwrap();
        assert!(v.member);
        let v = ssmdc_member(&rates("1,1,0.9"), &h("1"), 2).unwrap();
        assert!(!v.member);
        let c = v.certificate.unwrap();
        assert!(c.lhs < c.rhs);
        for r in ["2,1", "1.4,1.4", "1,1", "3,0"] {
            let a = smdc_member(&rates(r), &h("1,1")).unwrap();
            let b = ssmdc_member(&rates(r), &h("1,1"), 0).unwrap();
            assert_eq!(a, b);
        }
        assert!(ssmdc_member(&rates("1,1"), &h("1"), 2).is_err());
    }
}
