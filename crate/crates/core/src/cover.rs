//! Coefficient chains linked by fractional covers.
//!
//! A chain holds one optimal packing solution `c^(α)` per level. Between
//! adjacent levels every parent `U` carries a fractional cover `g_U` of its
//! children, and the lower level is the push-down
//!
//! ```text
//! c(V) = Σ_{U ⊃ V} g_U(V) c(U).
//! ```
//!
//! The covers are built per level by one of three constructions depending on
//! how the largest weight compares with the rest (weights sorted
//! nonincreasingly, ties by encoder index):
//!
//! * uniform (`λ_1 ≤ Σ_{l≥2} λ_l / (α−1)`): `g_U ≡ 1/(α−1)`;
//! * concentrated (`λ_1 > Σ_{l≥2} λ_l / (α−2)`, `α ≥ 3`): every set with mass
//!   contains the heaviest encoder, and covers are lifted from the same
//!   problem on the remaining encoders one level down;
//! * balanced (otherwise): uniform covers tilted by the slacks
//!   `b_l = λ_l − Σ_{U∋l} c(U)`.
//!
//! Every constructed level is checked against an independent solve of the
//! packing program and every cover against the cover inequality; failures are
//! reported as [`Error::Construction`].

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};

use crate::combinatorics::{self, children, combinations_of, parents, subsets_of_size, EncoderSet};
use crate::error::{invalid, Error, Result};
use crate::lp::{self, LinearProgram, LpStatus, Sense};
use crate::rational::{self, binomial, int, one, zero, Rational};
use crate::region::{f_alpha, SubsetCoefficients, WeightVector};

/// Child weights `g_U(V)` for one parent `U`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FractionalCover {
    pub parent: EncoderSet,
    pub weights: BTreeMap<EncoderSet, Rational>,
}

impl FractionalCover {
    pub fn uniform(parent: &EncoderSet) -> Result<Self> {
        let kids = children(parent)?;
        let w = Rational::new(1.into(), (parent.len() as i64 - 1).into());
        Ok(Self { parent: parent.clone(), weights: kids.into_iter().map(|v| (v, w.clone())).collect() })
    }

    pub fn weight(&self, child: &EncoderSet) -> Rational {
        self.weights.get(child).cloned().unwrap_or_else(zero)
    }

    /// `Σ_{V ∋ i} g(V)`.
    pub fn coverage(&self, element: usize) -> Rational {
        self.weights.iter().filter(|(v, _)| v.contains(element)).map(|(_, w)| w).sum()
    }

    /// First element of the parent covered with total weight below one, if any.
    pub fn uncovered_element(&self) -> Option<(usize, Rational)> {
        self.parent.members().iter().map(|&i| (i, self.coverage(i))).find(|(_, c)| *c < one())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoverViolation {
    NotAChild(EncoderSet),
    NegativeWeight(EncoderSet),
    Uncovered { element: usize, coverage: Rational },
}

impl fmt::Display for CoverViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoverViolation::NotAChild(v) => write!(f, "{v} is not a child"),
            CoverViolation::NegativeWeight(v) => write!(f, "negative weight on {v}"),
            CoverViolation::Uncovered { element, coverage } => {
                write!(f, "element {element} covered with weight {coverage} < 1")
            }
        }
    }
}

/// Exact check of the cover inequality `Σ_{V∋i} g(V) ≥ 1` for all `i ∈ U`,
/// with every `V` a child of `U` and every weight nonnegative.
pub fn check_cover(cover: &FractionalCover) -> std::result::Result<(), CoverViolation> {
    for (v, w) in &cover.weights {
        if v.len() + 1 != cover.parent.len() || !v.is_subset_of(&cover.parent) {
            return Err(CoverViolation::NotAChild(v.clone()));
        }
        if w.is_negative() {
            return Err(CoverViolation::NegativeWeight(v.clone()));
        }
    }
    match cover.uncovered_element() {
        Some((element, coverage)) => Err(CoverViolation::Uncovered { element, coverage }),
        None => Ok(()),
    }
}

pub fn verify_cover(cover: &FractionalCover) -> bool {
    check_cover(cover).is_ok()
}

/// Which construction produced a level's covers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CoverCase {
    /// Two encoders, closed form `g({l}) = λ_l / λ_min`.
    Base,
    Uniform,
    Concentrated,
    Balanced,
}

impl CoverCase {
    pub fn name(self) -> &'static str {
        match self {
            CoverCase::Base => "base",
            CoverCase::Uniform => "case1",
            CoverCase::Concentrated => "case2",
            CoverCase::Balanced => "case3",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        [CoverCase::Base, CoverCase::Uniform, CoverCase::Concentrated, CoverCase::Balanced]
            .into_iter()
            .find(|c| c.name() == name)
    }
}

/// The covers linking level `alpha` to level `alpha − 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DescentStep {
    pub alpha: usize,
    /// `None` when `f_α(λ) = 0` and the lower level was solved afresh.
    pub case: Option<CoverCase>,
    pub covers: Option<BTreeMap<EncoderSet, FractionalCover>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientChain {
    pub lambda: WeightVector,
    /// `levels[α−1]` holds `c^(α)`.
    pub levels: Vec<SubsetCoefficients>,
    /// `steps[α−2]` links level `α` to `α−1`.
    pub steps: Vec<DescentStep>,
}

impl CoefficientChain {
    pub fn ground_size(&self) -> usize {
        self.lambda.len()
    }

    pub fn level(&self, alpha: usize) -> &SubsetCoefficients {
        &self.levels[alpha - 1]
    }

    pub fn step(&self, alpha: usize) -> &DescentStep {
        &self.steps[alpha - 2]
    }

    /// Number of descents built by each construction.
    pub fn case_counts(&self) -> BTreeMap<CoverCase, usize> {
        let mut counts = BTreeMap::new();
        for case in self.steps.iter().filter_map(|s| s.case) {
            *counts.entry(case).or_insert(0) += 1;
        }
        counts
    }
}

/// Weights sorted nonincreasingly (ties by index) over a ground subset.
struct SortedGround<'a> {
    lambda: &'a WeightVector,
    order: Vec<usize>,
}

impl<'a> SortedGround<'a> {
    fn new(lambda: &'a WeightVector, labels: impl IntoIterator<Item = usize>) -> Self {
        let mut order: Vec<usize> = labels.into_iter().collect();
        order.sort_by(|a, b| lambda.weight(*b).cmp(lambda.weight(*a)).then(a.cmp(b)));
        Self { lambda, order }
    }

    fn full(lambda: &'a WeightVector) -> Self {
        Self::new(lambda, 1..=lambda.len())
    }

    fn weight_at(&self, position: usize) -> &Rational {
        self.lambda.weight(self.order[position - 1])
    }

    fn rest_sum(&self) -> Rational {
        self.order[1..].iter().map(|&l| self.lambda.weight(l)).sum()
    }

    fn family(&self, size: usize) -> Vec<EncoderSet> {
        combinations_of(&self.order, size, self.lambda.len())
    }

    fn dispatch(&self, alpha: usize) -> CoverCase {
        let top = self.weight_at(1);
        let rest = self.rest_sum();
        if top * int(alpha as i64 - 1) <= rest {
            CoverCase::Uniform
        } else if alpha >= 3 && top * int(alpha as i64 - 2) > rest {
            CoverCase::Concentrated
        } else {
            CoverCase::Balanced
        }
    }
}

type Covers = BTreeMap<EncoderSet, FractionalCover>;

fn uniform_covers(ground: &SortedGround, alpha: usize) -> Result<Covers> {
    ground.family(alpha).into_iter().map(|u| FractionalCover::uniform(&u).map(|g| (u, g))).collect()
}

fn base_covers(ground: &SortedGround) -> Result<Covers> {
    let small = ground.weight_at(2);
    if !small.is_positive() {
        return Err(Error::Construction("two-encoder base case needs λ_min > 0".into()));
    }
    let parent = EncoderSet::from_sorted(
        {
            let mut m = ground.order.clone();
            m.sort_unstable();
            m
        },
        ground.lambda.len(),
    );
    let weights = parent
        .members()
        .iter()
        .map(|&l| (EncoderSet::from_sorted(vec![l], parent.ground_size()), ground.lambda.weight(l) / small))
        .collect();
    Ok(BTreeMap::from([(parent.clone(), FractionalCover { parent, weights })]))
}

fn concentrated_covers(
    ground: &SortedGround,
    alpha: usize,
    coeffs: &BTreeMap<EncoderSet, Rational>,
    f: &Rational,
) -> Result<Covers> {
    let top = ground.order[0];
    if let Some((u, _)) = coeffs.iter().find(|(u, v)| v.is_positive() && !u.contains(top)) {
        return Err(Error::Construction(format!(
            "concentrated case: {u} carries mass but misses heaviest encoder {top}"
        )));
    }
    let reduced = SortedGround::new(ground.lambda, ground.order[1..].iter().copied());
    let reduced_coeffs: BTreeMap<EncoderSet, Rational> =
        coeffs.iter().filter(|(u, _)| u.contains(top)).map(|(u, v)| (u.without(top), v.clone())).collect();
    let reduced_total: Rational = reduced_coeffs.values().sum();
    if &reduced_total != f {
        return Err(Error::Construction("concentrated case: reduced total differs from f_α".into()));
    }
    let reduced_covers = if reduced.order.len() == 2 && alpha == 3 {
        base_covers(&reduced)?
    } else {
        build_covers(&reduced, alpha - 1, &reduced_coeffs, f)?.1
    };
    let mut covers = Covers::new();
    for u in ground.family(alpha) {
        let cover = if u.contains(top) {
            let inner = reduced_covers
                .get(&u.without(top))
                .ok_or_else(|| Error::Construction(format!("no reduced cover for {}", u.without(top))))?;
            let mut weights: BTreeMap<EncoderSet, Rational> =
                inner.weights.iter().map(|(v, w)| (v.with(top), w.clone())).collect();
            weights.insert(u.without(top), zero());
            FractionalCover { parent: u.clone(), weights }
        } else {
            FractionalCover::uniform(&u)?
        };
        covers.insert(u, cover);
    }
    Ok(covers)
}

fn balanced_covers(
    ground: &SortedGround,
    alpha: usize,
    coeffs: &BTreeMap<EncoderSet, Rational>,
    f: &Rational,
) -> Result<Covers> {
    if !f.is_positive() {
        return Err(Error::Construction("balanced case needs f_α > 0".into()));
    }
    let n = ground.order.len();
    let position: BTreeMap<usize, usize> = ground.order.iter().enumerate().map(|(i, &l)| (l, i + 1)).collect();
    // b_m for sorted positions m = 1..n.
    let mut load = vec![zero(); n + 1];
    for (u, v) in coeffs {
        if v.is_zero() {
            continue;
        }
        for m in u.members() {
            load[position[m]] += v;
        }
    }
    let b: Vec<Rational> = (0..=n).map(|m| if m == 0 { zero() } else { ground.weight_at(m) - &load[m] }).collect();
    let beta: Rational = (2..alpha).map(|m| &b[1] - &b[m]).sum();
    let base = (one() - &beta / f) / int(alpha as i64 - 1);

    let mut covers = Covers::new();
    for u in ground.family(alpha) {
        let mut ranked: Vec<usize> = u.members().to_vec();
        ranked.sort_by_key(|m| position[m]);
        let mut weights: BTreeMap<EncoderSet, Rational> =
            children(&u)?.into_iter().map(|v| (v, base.clone())).collect();
        // ξ_{U,m,τ} puts (b_{m−1} − b_m)/f on W_τ(U) = U minus its τ-th ranked element.
        for m in 2..=alpha {
            let step = (&b[m - 1] - &b[m]) / f;
            if step.is_zero() {
                continue;
            }
            for tau in m..=alpha {
                let w_tau = u.without(ranked[tau - 1]);
                *weights.get_mut(&w_tau).expect("W_τ(U) is a child") += &step;
            }
        }
        covers.insert(u.clone(), FractionalCover { parent: u, weights });
    }
    Ok(covers)
}

/// Dispatches on the weight profile and builds covers for every parent of
/// level `alpha` over the given ground.
fn build_covers(
    ground: &SortedGround,
    alpha: usize,
    coeffs: &BTreeMap<EncoderSet, Rational>,
    f: &Rational,
) -> Result<(CoverCase, Covers)> {
    let case = ground.dispatch(alpha);
    let covers = match case {
        CoverCase::Base => base_covers(ground)?,
        CoverCase::Uniform => uniform_covers(ground, alpha)?,
        CoverCase::Concentrated => concentrated_covers(ground, alpha, coeffs, f)?,
        CoverCase::Balanced => balanced_covers(ground, alpha, coeffs, f)?,
    };
    for cover in covers.values() {
        if let Err(v) = check_cover(cover) {
            return Err(Error::Construction(format!(
                "{} construction at α={alpha}: cover of {}: {v}",
                case.name(),
                cover.parent
            )));
        }
    }
    Ok((case, covers))
}

fn check_level_coefficients(lambda: &WeightVector, level: &SubsetCoefficients) -> Result<()> {
    if level.level < 2 || level.level > lambda.len() {
        return invalid(format!("level {} has no covers to build", level.level));
    }
    if level.assignment.keys().any(|u| u.len() != level.level || u.ground_size() != lambda.len()) {
        return invalid("coefficient keys do not match the level");
    }
    Ok(())
}

/// Uniform covers; requires `λ_1 ≤ Σ_{l≥2} λ_l / (α−1)` on the sorted weights.
pub fn build_cover_case1(lambda: &WeightVector, level: &SubsetCoefficients) -> Result<Covers> {
    check_level_coefficients(lambda, level)?;
    let ground = SortedGround::full(lambda);
    if ground.dispatch(level.level) != CoverCase::Uniform {
        return Err(Error::Construction("uniform-cover precondition does not hold".into()));
    }
    uniform_covers(&ground, level.level)
}

/// Concentrated construction; requires `α ≥ 3` and
/// `λ_1 > Σ_{l≥2} λ_l / (α−2)` on the sorted weights.
pub fn build_cover_case2(lambda: &WeightVector, level: &SubsetCoefficients) -> Result<Covers> {
    check_level_coefficients(lambda, level)?;
    let ground = SortedGround::full(lambda);
    if ground.dispatch(level.level) != CoverCase::Concentrated {
        return Err(Error::Construction("concentrated-cover precondition does not hold".into()));
    }
    concentrated_covers(&ground, level.level, &level.assignment, &level.total)
}

/// Balanced construction; requires
/// `Σ_{l≥2} λ_l/(α−1) < λ_1 ≤ Σ_{l≥2} λ_l/(α−2)` (the upper bound read as
/// `+∞` at `α = 2`) and `f_α(λ) > 0`.
pub fn build_cover_case3(lambda: &WeightVector, level: &SubsetCoefficients) -> Result<Covers> {
    check_level_coefficients(lambda, level)?;
    let ground = SortedGround::full(lambda);
    if ground.dispatch(level.level) != CoverCase::Balanced {
        return Err(Error::Construction("balanced-cover precondition does not hold".into()));
    }
    balanced_covers(&ground, level.level, &level.assignment, &level.total)
}

/// Covers for level `level.level` chosen by weight-profile dispatch.
pub fn build_covers_for(lambda: &WeightVector, level: &SubsetCoefficients) -> Result<(CoverCase, Covers)> {
    check_level_coefficients(lambda, level)?;
    build_covers(&SortedGround::full(lambda), level.level, &level.assignment, &level.total)
}

/// `c(V) = Σ_{U ⊃ V} g_U(V) c(U)` over all `V` of size `alpha − 1`.
pub fn push_down(
    ground: usize,
    alpha: usize,
    upper: &SubsetCoefficients,
    covers: &Covers,
) -> Result<SubsetCoefficients> {
    let mut assignment: BTreeMap<EncoderSet, Rational> =
        subsets_of_size(ground, alpha - 1)?.into_iter().map(|v| (v, zero())).collect();
    for (u, c) in &upper.assignment {
        if c.is_zero() {
            continue;
        }
        let cover = covers.get(u).ok_or_else(|| Error::Construction(format!("no cover for {u}")))?;
        for (v, g) in &cover.weights {
            if !g.is_zero() {
                *assignment.get_mut(v).expect("child of a level set") += g * c;
            }
        }
    }
    Ok(SubsetCoefficients::from_assignment(alpha - 1, assignment))
}

/// Uniform chain with `c(U) = 1/(α·C(L,α))` and `g_U ≡ 1/(α−1)`; it is the
/// chain for `λ = (1/L, …, 1/L)`.
pub fn han_chain(ground: usize) -> Result<CoefficientChain> {
    if ground == 0 {
        return invalid("L must be positive");
    }
    let lambda = WeightVector::new(vec![Rational::new(1.into(), (ground as i64).into()); ground])?;
    let mut levels = Vec::with_capacity(ground);
    for alpha in 1..=ground {
        let value = one() / (int(alpha as i64) * binomial(ground, alpha));
        let assignment = subsets_of_size(ground, alpha)?.into_iter().map(|u| (u, value.clone())).collect();
        levels.push(SubsetCoefficients::from_assignment(alpha, assignment));
    }
    let mut steps = Vec::new();
    for alpha in 2..=ground {
        let covers = subsets_of_size(ground, alpha)?
            .into_iter()
            .map(|u| FractionalCover::uniform(&u).map(|g| (u, g)))
            .collect::<Result<Covers>>()?;
        steps.push(DescentStep { alpha, case: Some(CoverCase::Uniform), covers: Some(covers) });
    }
    Ok(CoefficientChain { lambda, levels, steps })
}

/// Builds the chain top-down from `c(Ω_L) = min_l λ_l`, using the cover
/// constructions whenever `f_α(λ) > 0` and a fresh packing solve otherwise.
/// Each level is checked against an independent solve.
pub fn yz_chain(lambda: &WeightVector) -> Result<CoefficientChain> {
    let l = lambda.len();
    if l > combinatorics::MAX_ENUMERATION {
        return invalid(format!("L = {l} too large for chain construction"));
    }
    let min = lambda.as_slice().iter().min().cloned().unwrap_or_else(zero);
    let top = SubsetCoefficients::from_assignment(l, BTreeMap::from([(EncoderSet::full(l), min)]));
    let mut descending = vec![top];
    let mut steps = Vec::new();
    for alpha in (2..=l).rev() {
        let upper = descending.last().expect("nonempty");
        let (step, lower) = if upper.total.is_positive() {
            let (case, covers) = build_covers_for(lambda, upper)?;
            let lower = push_down(l, alpha, upper, &covers)?;
            (DescentStep { alpha, case: Some(case), covers: Some(covers) }, lower)
        } else {
            (DescentStep { alpha, case: None, covers: None }, f_alpha(lambda, alpha - 1)?)
        };
        let optimum = f_alpha(lambda, alpha - 1)?.total;
        if !lower.is_optimal_for(lambda, &optimum) {
            return Err(Error::Construction(format!(
                "{} descent from α={alpha}: level total {} or loads not optimal (f = {optimum})",
                step.case.map_or("fresh", CoverCase::name),
                lower.total
            )));
        }
        descending.push(lower);
        steps.push(step);
    }
    descending.reverse();
    steps.reverse();
    Ok(CoefficientChain { lambda: lambda.clone(), levels: descending, steps })
}

/// Structured result of [`verify_chain`] / [`verify_conditional`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ChainReport {
    pub failures: Vec<String>,
}

impl ChainReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Exact checks: every level optimal for its packing program, every stored
/// cover valid, and every push-down identity exact.
pub fn verify_chain(chain: &CoefficientChain) -> Result<ChainReport> {
    let l = chain.ground_size();
    let mut report = ChainReport::default();
    if chain.levels.len() != l || chain.steps.len() + 1 != l.max(1) {
        report.failures.push(format!(
            "chain shape: {} levels, {} steps for L = {l}",
            chain.levels.len(),
            chain.steps.len()
        ));
        return Ok(report);
    }
    for (idx, level) in chain.levels.iter().enumerate() {
        let alpha = idx + 1;
        if level.level != alpha {
            report.failures.push(format!("level index {alpha} holds α = {}", level.level));
            continue;
        }
        let optimum = f_alpha(&chain.lambda, alpha)?.total;
        if !level.is_optimal_for(&chain.lambda, &optimum) {
            report.failures.push(format!("α={alpha}: total {} is not the packing optimum {optimum}", level.total));
        }
    }
    for step in &chain.steps {
        let alpha = step.alpha;
        let Some(covers) = &step.covers else {
            if chain.level(alpha).total.is_positive() {
                report.failures.push(format!("α={alpha}: covers missing although f_α > 0"));
            }
            continue;
        };
        for u in subsets_of_size(l, alpha)? {
            match covers.get(&u) {
                None => report.failures.push(format!("α={alpha}: no cover for {u}")),
                Some(g) => {
                    if let Err(v) = check_cover(g) {
                        report.failures.push(format!("α={alpha}: cover of {u}: {v}"));
                    }
                }
            }
        }
        let upper = chain.level(alpha);
        for v in subsets_of_size(l, alpha - 1)? {
            let pushed: Rational = parents(&v)?
                .iter()
                .map(|u| covers.get(u).map(|g| g.weight(&v) * upper.get(u)).unwrap_or_else(zero))
                .sum();
            let have = chain.level(alpha - 1).get(&v);
            if pushed != have {
                report.failures.push(format!("α={}: c({v}) = {have} but push-down gives {pushed}", alpha - 1));
            }
        }
    }
    Ok(report)
}

/// Families `𝒜_U` with weights `s(U, A)` for every `U` of one level.
pub type ConditionalFamilies = BTreeMap<EncoderSet, BTreeMap<EncoderSet, Rational>>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionalAssignment {
    pub lambda: WeightVector,
    pub n: usize,
    /// `levels[α−1]` for `α = 1..L−N`.
    pub levels: Vec<ConditionalFamilies>,
    /// The chain whose covers drive the descent.
    pub chain: CoefficientChain,
}

impl ConditionalAssignment {
    pub fn top_level(&self) -> usize {
        self.levels.len()
    }

    pub fn level(&self, alpha: usize) -> &ConditionalFamilies {
        &self.levels[alpha - 1]
    }

    /// `c(U) = Σ_{A∈𝒜_U} s(U, A)` for one level.
    pub fn marginals(&self, alpha: usize) -> SubsetCoefficients {
        let assignment = self.level(alpha).iter().map(|(u, fam)| (u.clone(), fam.values().sum())).collect();
        SubsetCoefficients::from_assignment(alpha, assignment)
    }
}

/// Conditional assignment for `N` conditioning encoders: level `L−N` puts
/// `c(U)` on the single set `Ω_L \ U`; lower levels inherit the union of the
/// parents' families and push weights down through the chain's covers.
pub fn conditional_chain(lambda: &WeightVector, n: usize) -> Result<ConditionalAssignment> {
    let l = lambda.len();
    if n >= l {
        return invalid(format!("N = {n} must be below L = {l}"));
    }
    let chain = yz_chain(lambda)?;
    let top = l - n;
    let mut descending: Vec<ConditionalFamilies> = Vec::with_capacity(top);
    let first: ConditionalFamilies = chain
        .level(top)
        .assignment
        .iter()
        .map(|(u, c)| (u.clone(), BTreeMap::from([(u.complement(), c.clone())])))
        .collect();
    descending.push(first);
    for alpha in (2..=top).rev() {
        let upper = descending.last().expect("nonempty");
        let step = chain.step(alpha);
        let mut lower = ConditionalFamilies::new();
        for v in subsets_of_size(l, alpha - 1)? {
            let mut family: BTreeMap<EncoderSet, Rational> = BTreeMap::new();
            for u in parents(&v)? {
                for (a, s) in &upper[&u] {
                    let contribution = match &step.covers {
                        Some(covers) => covers[&u].weight(&v) * s,
                        None => zero(),
                    };
                    *family.entry(a.clone()).or_insert_with(zero) += contribution;
                }
            }
            if step.covers.is_none() {
                // Fresh level: any split of c(V) over 𝒜_V works; use the first set.
                if let Some(first) = family.values_mut().next() {
                    *first = chain.level(alpha - 1).get(&v);
                }
            }
            lower.insert(v, family);
        }
        descending.push(lower);
    }
    descending.reverse();
    Ok(ConditionalAssignment { lambda: lambda.clone(), n, levels: descending, chain })
}

/// Exact checks of the conditional assignment: `|A| = N`, `A ∩ U = ∅`,
/// marginals equal to an optimal packing solution, and the conditional
/// push-down identity wherever covers exist.
pub fn verify_conditional(assignment: &ConditionalAssignment) -> Result<ChainReport> {
    let l = assignment.lambda.len();
    let n = assignment.n;
    let mut report = ChainReport::default();
    if assignment.top_level() + n != l {
        report.failures.push(format!("{} levels for L = {l}, N = {n}", assignment.top_level()));
        return Ok(report);
    }
    for alpha in 1..=assignment.top_level() {
        for (u, family) in assignment.level(alpha) {
            if family.is_empty() {
                report.failures.push(format!("α={alpha}: empty family for {u}"));
            }
            for a in family.keys() {
                if a.len() != n || !a.is_disjoint(u) {
                    report.failures.push(format!("α={alpha}: conditioning set {a} invalid for {u}"));
                }
            }
            if family.values().any(|s| s.is_negative()) {
                report.failures.push(format!("α={alpha}: negative weight in family of {u}"));
            }
        }
        let marginals = assignment.marginals(alpha);
        let optimum = f_alpha(&assignment.lambda, alpha)?.total;
        if !marginals.is_optimal_for(&assignment.lambda, &optimum) {
            report
                .failures
                .push(format!("α={alpha}: marginals not optimal (total {}, f = {optimum})", marginals.total));
        }
    }
    for alpha in 2..=assignment.top_level() {
        let Some(covers) = &assignment.chain.step(alpha).covers else { continue };
        let upper = assignment.level(alpha);
        for (v, family) in assignment.level(alpha - 1) {
            for (a, s) in family {
                let pushed: Rational = parents(v)?
                    .iter()
                    .filter_map(|u| upper.get(u).and_then(|fam| fam.get(a)).map(|su| covers[u].weight(v) * su))
                    .sum();
                if &pushed != s {
                    report.failures.push(format!("α={}: s({v}, {a}) = {s} but push-down gives {pushed}", alpha - 1));
                }
            }
        }
    }
    Ok(report)
}

/// Smallest weight a fractional cover of window `W_start^(α)` by its two
/// window children can put on each child, by linear programming.
pub fn window_cover_minimums(start: usize, alpha: usize, ground: usize) -> Result<(Rational, Rational)> {
    if alpha < 2 || alpha >= ground {
        return invalid("window covers need 2 ≤ α < L");
    }
    let parent = combinatorics::window(start, alpha, ground)?;
    let kids = [
        combinatorics::window(start, alpha - 1, ground)?,
        combinatorics::window(combinatorics::wrap(start + 1, ground), alpha - 1, ground)?,
    ];
    let mut mins = Vec::new();
    for target in 0..2 {
        let mut objective = vec![zero(), zero()];
        objective[target] = -one();
        let mut lp = LinearProgram::with_objective(objective);
        for &i in parent.members() {
            let support: Vec<usize> = (0..2).filter(|&k| kids[k].contains(i)).collect();
            lp.add_sparse(&support, Sense::Ge, one())?;
        }
        let sol = lp::solve_max(&lp)?;
        if sol.status != LpStatus::Optimal {
            return Err(Error::Internal("window cover program not optimal".into()));
        }
        mins.push(-sol.value);
    }
    Ok((mins[0].clone(), mins[1].clone()))
}

/// Line-oriented text form of a chain.
///
/// ```text
/// chain <L>
/// lambda <λ_1> … <λ_L>
/// level <α> <total>
/// <comma-joined set> <p/q>
/// covers <α> <case|fresh>
/// <parent> > <child> <p/q>
/// ```
pub fn chain_to_text(chain: &CoefficientChain) -> String {
    let mut out = String::new();
    out.push_str(&format!("chain {}\n", chain.ground_size()));
    out.push_str(&format!(
        "lambda {}\n",
        chain.lambda.as_slice().iter().map(rational::fmt).collect::<Vec<_>>().join(" ")
    ));
    for level in chain.levels.iter().rev() {
        out.push_str(&format!("level {} {}\n", level.level, rational::fmt(&level.total)));
        for (u, c) in &level.assignment {
            out.push_str(&format!("{} {}\n", u.to_text(), rational::fmt(c)));
        }
        if level.level >= 2 {
            let step = chain.step(level.level);
            out.push_str(&format!("covers {} {}\n", step.alpha, step.case.map_or("fresh", CoverCase::name)));
            if let Some(covers) = &step.covers {
                for (u, g) in covers {
                    for (v, w) in &g.weights {
                        out.push_str(&format!("{} > {} {}\n", u.to_text(), v.to_text(), rational::fmt(w)));
                    }
                }
            }
        }
    }
    out
}

/// Parses [`chain_to_text`] output.
pub fn chain_from_text(text: &str) -> Result<CoefficientChain> {
    let bad = |line: &str| Error::Format(format!("malformed chain line: {line:?}"));
    let mut lines = text.lines().map(str::trim).filter(|s| !s.is_empty() && !s.starts_with('#'));
    let header = lines.next().ok_or_else(|| Error::Format("empty chain text".into()))?;
    let ground: usize = header
        .strip_prefix("chain ")
        .and_then(|s| s.trim().parse().ok())
        .filter(|&l| l > 0)
        .ok_or_else(|| bad(header))?;
    let lambda_line = lines.next().ok_or_else(|| Error::Format("missing lambda line".into()))?;
    let lambda_text = lambda_line.strip_prefix("lambda").ok_or_else(|| bad(lambda_line))?;
    let lambda = WeightVector::new(lambda_text.split_whitespace().map(rational::parse).collect::<Result<_>>()?)?;
    if lambda.len() != ground {
        return Err(Error::Format(format!("lambda has {} entries, chain is over {ground}", lambda.len())));
    }
    let mut levels: BTreeMap<usize, BTreeMap<EncoderSet, Rational>> = BTreeMap::new();
    let mut steps: BTreeMap<usize, DescentStep> = BTreeMap::new();
    enum Section {
        None,
        Level(usize),
        Covers(usize),
    }
    let mut section = Section::None;
    for line in lines {
        let parts: Vec<&str> = line.split_whitespace().collect();
        match parts.as_slice() {
            ["level", a, _total] => {
                let a: usize = a.parse().map_err(|_| bad(line))?;
                levels.entry(a).or_default();
                section = Section::Level(a);
            }
            ["covers", a, case] => {
                let a: usize = a.parse().map_err(|_| bad(line))?;
                let case =
                    if *case == "fresh" { None } else { Some(CoverCase::from_name(case).ok_or_else(|| bad(line))?) };
                steps.insert(a, DescentStep { alpha: a, case, covers: case.map(|_| Covers::new()) });
                section = Section::Covers(a);
            }
            [u, ">", v, w] => {
                let Section::Covers(a) = section else { return Err(bad(line)) };
                let u = EncoderSet::parse_text(u, ground)?;
                let v = EncoderSet::parse_text(v, ground)?;
                let w = rational::parse(w)?;
                let covers = steps.get_mut(&a).and_then(|s| s.covers.as_mut()).ok_or_else(|| bad(line))?;
                covers
                    .entry(u.clone())
                    .or_insert_with(|| FractionalCover { parent: u, weights: BTreeMap::new() })
                    .weights
                    .insert(v, w);
            }
            [u, c] => {
                let Section::Level(a) = section else { return Err(bad(line)) };
                let set = EncoderSet::parse_text(u, ground)?;
                let c = rational::parse(c)?;
                levels.get_mut(&a).expect("section exists").insert(set, c);
            }
            _ => return Err(bad(line)),
        }
    }
    if levels.keys().copied().ne(1..=ground) || steps.keys().copied().ne(2..=ground) {
        return Err(Error::Format("chain text is missing levels or cover sections".into()));
    }
    Ok(CoefficientChain {
        lambda,
        levels: levels.into_iter().map(|(a, m)| SubsetCoefficients::from_assignment(a, m)).collect(),
        steps: steps.into_values().collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{parse_list, ratio};

    fn w(text: &str) -> WeightVector {
        WeightVector::new(parse_list(text).unwrap()).unwrap()
    }

    fn set(m: &[usize], l: usize) -> EncoderSet {
        EncoderSet::new(m.iter().copied(), l).unwrap()
    }

    #[test]
    fn han_chain_values() {
        let chain = han_chain(3).unwrap();
        assert!(chain.level(2).assignment.values().all(|c| *c == ratio(1, 6)));
        assert!(chain.level(1).assignment.values().all(|c| *c == ratio(1, 3)));
        let chain = han_chain(2).unwrap();
        assert_eq!(chain.level(1).get(&set(&[1], 2)), ratio(1, 2));
        assert_eq!(chain.level(2).get(&set(&[1, 2], 2)), ratio(1, 2));
        for l in 1..=6 {
            let chain = han_chain(l).unwrap();
            assert_eq!(chain.level(l).get(&EncoderSet::full(l)), ratio(1, l as i64));
            assert!(verify_chain(&chain).unwrap().passed(), "L={l}");
        }
    }

    #[test]
    fn uniform_weights_chain() {
        let chain = yz_chain(&w("1,1,1")).unwrap();
        let totals: Vec<Rational> = chain.levels.iter().map(|c| c.total.clone()).collect();
        assert_eq!(totals, vec![int(3), ratio(3, 2), int(1)]);
        assert_eq!(chain.step(2).case, Some(CoverCase::Uniform));
        assert!(verify_chain(&chain).unwrap().passed());
    }

    #[test]
    fn single_heavy_encoder_chain() {
        let chain = yz_chain(&w("1,0,0,0")).unwrap();
        for alpha in 2..=4 {
            assert_eq!(chain.level(alpha).total, int(0));
        }
        assert_eq!(chain.level(1).get(&set(&[1], 4)), int(1));
        assert_eq!(chain.level(1).total, int(1));
        assert!(chain.steps.iter().all(|s| s.covers.is_none()));
        assert!(verify_chain(&chain).unwrap().passed());
    }

    #[test]
    fn skewed_weights_chain() {
        let chain = yz_chain(&w("2,1,1")).unwrap();
        let totals: Vec<Rational> = chain.levels.iter().map(|c| c.total.clone()).collect();
        assert_eq!(totals, vec![int(4), int(2), int(1)]);
        assert!(verify_chain(&chain).unwrap().passed());
    }

    #[test]
    fn concentrated_case_descends_through_reduction() {
        let lambda = w("5,1,1");
        let chain = yz_chain(&lambda).unwrap();
        assert_eq!(chain.step(3).case, Some(CoverCase::Concentrated));
        let covers = chain.step(3).covers.as_ref().unwrap();
        let g = &covers[&set(&[1, 2, 3], 3)];
        assert!(g.coverage(1) >= one());
        assert_eq!(g.weight(&set(&[2, 3], 3)), int(0));
        assert!(verify_chain(&chain).unwrap().passed());
    }

    #[test]
    fn two_encoder_descent_matches_base_form() {
        let chain = yz_chain(&w("3,1")).unwrap();
        assert_eq!(chain.step(2).case, Some(CoverCase::Balanced));
        let g = &chain.step(2).covers.as_ref().unwrap()[&set(&[1, 2], 2)];
        assert_eq!(g.weight(&set(&[1], 2)), int(3));
        assert_eq!(g.weight(&set(&[2], 2)), int(1));
    }

    #[test]
    fn balanced_case_at_level_two() {
        let lambda = w("3,1,1");
        let level = f_alpha(&lambda, 2).unwrap();
        let covers = build_cover_case3(&lambda, &level).unwrap();
        let lower = push_down(3, 2, &level, &covers).unwrap();
        let got: Vec<Rational> = lower.assignment.values().cloned().collect();
        assert_eq!(got, lambda.as_slice().to_vec());
        assert!(build_cover_case1(&lambda, &level).is_err());
        assert!(build_cover_case2(&lambda, &level).is_err());
    }

    #[test]
    fn case_one_on_uniform_weights() {
        let lambda = w("1,1,1");
        let level = f_alpha(&lambda, 2).unwrap();
        let covers = build_cover_case1(&lambda, &level).unwrap();
        assert!(covers.values().all(|g| g.weights.values().all(|x| *x == int(1))));
        let lower = push_down(3, 2, &level, &covers).unwrap();
        assert!(lower.assignment.values().all(|c| *c == int(1)));
    }

    #[test]
    fn cover_verification() {
        let parent = set(&[1, 2, 3], 3);
        let g = FractionalCover::uniform(&parent).unwrap();
        assert!(verify_cover(&g));
        let zero_cover = FractionalCover {
            parent: parent.clone(),
            weights: g.weights.keys().map(|v| (v.clone(), zero())).collect(),
        };
        assert_eq!(check_cover(&zero_cover), Err(CoverViolation::Uncovered { element: 1, coverage: zero() }));
    }

    #[test]
    fn conditional_examples() {
        let a = conditional_chain(&w("1,1,1"), 1).unwrap();
        assert_eq!(a.top_level(), 2);
        let fam = &a.level(2)[&set(&[1, 2], 3)];
        assert_eq!(fam.len(), 1);
        assert_eq!(fam[&set(&[3], 3)], ratio(1, 2));
        let fam = &a.level(1)[&set(&[1], 3)];
        assert_eq!(fam[&set(&[2], 3)], ratio(1, 2));
        assert_eq!(fam[&set(&[3], 3)], ratio(1, 2));
        assert!(verify_conditional(&a).unwrap().passed());

        let a = conditional_chain(&w("2,1,1"), 0).unwrap();
        for alpha in 1..=3 {
            for (u, fam) in a.level(alpha) {
                assert_eq!(fam.len(), 1);
                assert!(fam.keys().next().unwrap().is_empty());
                assert_eq!(fam.values().next().unwrap(), &a.chain.level(alpha).get(u));
            }
        }

        let lambda = w("2,3,1");
        let a = conditional_chain(&lambda, 2).unwrap();
        assert_eq!(a.top_level(), 1);
        for l in 1..=3 {
            let u = set(&[l], 3);
            let fam = &a.level(1)[&u];
            assert_eq!(fam.len(), 1);
            assert_eq!(fam[&u.complement()], lambda.weight(l).clone());
        }
        assert!(conditional_chain(&lambda, 3).is_err());
    }

    #[test]
    fn random_weights_hit_every_case() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mut counts = BTreeMap::new();
        for _ in 0..150 {
            let l = rng.gen_range(2..=6);
            let lambda =
                WeightVector::new((0..l).map(|_| ratio(rng.gen_range(0..40), rng.gen_range(1..7))).collect()).unwrap();
            let chain = yz_chain(&lambda).unwrap_or_else(|e| panic!("{lambda:?}: {e}"));
            for (k, v) in chain.case_counts() {
                *counts.entry(k).or_insert(0) += v;
            }
        }
        assert_eq!(counts.len(), 3, "{counts:?}");
    }

    #[test]
    fn window_obstruction() {
        for l in 4..=8 {
            for alpha in 3..l {
                let (a, b) = window_cover_minimums(1, alpha, l).unwrap();
                assert_eq!((a.clone(), b.clone()), (int(1), int(1)));
                let parents_bound = (a + b) / int(alpha as i64);
                assert!(parents_bound > one() / int(alpha as i64 - 1));
            }
        }
    }

    #[test]
    fn text_round_trip() {
        for lambda in ["2,1,1", "5,1,1", "1,0,0,0", "3,2,2,1"] {
            let chain = yz_chain(&w(lambda)).unwrap();
            let text = chain_to_text(&chain);
            assert_eq!(chain_from_text(&text).unwrap(), chain, "{text}");
        }
        assert!(chain_from_text("chain 2\nlambda 1\n").is_err());
        assert!(chain_from_text("nonsense").is_err());
    }
}
