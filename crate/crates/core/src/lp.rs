//! Exact rational linear programming.
//!
//! Dense two-phase tableau simplex with Bland's rule: the entering column is
//! the lowest-index improving column and ratio-test ties go to the lowest
//! basic variable index. The method never cycles and the returned vertex is a
//! deterministic function of the input.
//!
//! Problems have the form `max cᵀx` subject to rows `aᵢ·x {≤,≥,=} bᵢ` and
//! `x ≥ 0`. Optimal solutions carry a dual vector checked for exact strong
//! duality; infeasible systems carry a Farkas certificate checked exactly.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{one, zero, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

impl Sense {
    fn flipped(self) -> Sense {
        match self {
            Sense::Le => Sense::Ge,
            Sense::Ge => Sense::Le,
            Sense::Eq => Sense::Eq,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub sense: Sense,
    pub rhs: Rational,
}

#[derive(Clone, Debug)]
pub struct LinearProgram {
    num_vars: usize,
    objective: Vec<Rational>,
    constraints: Vec<Constraint>,
}

impl LinearProgram {
    /// A program over `num_vars` nonnegative variables with zero objective.
    pub fn new(num_vars: usize) -> Self {
        Self { num_vars, objective: vec![zero(); num_vars], constraints: Vec::new() }
    }

    pub fn with_objective(objective: Vec<Rational>) -> Self {
        Self { num_vars: objective.len(), objective, constraints: Vec::new() }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn objective(&self) -> &[Rational] {
        &self.objective
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn add_constraint(&mut self, coeffs: Vec<Rational>, sense: Sense, rhs: Rational) -> Result<()> {
        if coeffs.len() != self.num_vars {
            return Err(Error::Dimension(format!(
                "constraint has {} coefficients, program has {} variables",
                coeffs.len(),
                self.num_vars
            )));
        }
        self.constraints.push(Constraint { coeffs, sense, rhs });
        Ok(())
    }

    /// Adds `Σ_{j∈support} x_j {sense} rhs`.
    pub fn add_sparse(&mut self, support: &[usize], sense: Sense, rhs: Rational) -> Result<()> {
        let mut coeffs = vec![zero(); self.num_vars];
        for &j in support {
            if j >= self.num_vars {
                return Err(Error::Dimension(format!("variable {j} out of range")));
            }
            coeffs[j] += one();
        }
        self.add_constraint(coeffs, sense, rhs)
    }

    /// Checks `x ≥ 0` and every row exactly.
    pub fn is_feasible_point(&self, x: &[Rational]) -> bool {
        if x.len() != self.num_vars || x.iter().any(|v| v.is_negative()) {
            return false;
        }
        self.constraints.iter().all(|row| {
            let lhs = dot(&row.coeffs, x);
            match row.sense {
                Sense::Le => lhs <= row.rhs,
                Sense::Ge => lhs >= row.rhs,
                Sense::Eq => lhs == row.rhs,
            }
        })
    }

    /// Checks a Farkas certificate: `yᵢ ≥ 0` on `≥` rows, `yᵢ ≤ 0` on `≤`
    /// rows, `yᵀA ≤ 0` componentwise and `yᵀb > 0`. Such a `y` proves that no
    /// `x ≥ 0` satisfies the rows.
    pub fn is_farkas_certificate(&self, y: &[Rational]) -> bool {
        if y.len() != self.constraints.len() {
            return false;
        }
        let signs_ok = self.constraints.iter().zip(y).all(|(row, yi)| match row.sense {
            Sense::Ge => !yi.is_negative(),
            Sense::Le => !yi.is_positive(),
            Sense::Eq => true,
        });
        if !signs_ok {
            return false;
        }
        let columns_ok = (0..self.num_vars).all(|j| {
            let mut acc = zero();
            for (row, yi) in self.constraints.iter().zip(y) {
                if !row.coeffs[j].is_zero() && !yi.is_zero() {
                    acc += yi * &row.coeffs[j];
                }
            }
            !acc.is_positive()
        });
        let rhs: Rational = self.constraints.iter().zip(y).map(|(row, yi)| yi * &row.rhs).sum();
        columns_ok && rhs.is_positive()
    }

    /// Checks that `y` is dual feasible (sign conventions for a max problem
    /// and `yᵀA ≥ c`) and that `yᵀb = cᵀx`.
    pub fn is_optimality_certificate(&self, x: &[Rational], y: &[Rational]) -> bool {
        if !self.is_feasible_point(x) || y.len() != self.constraints.len() {
            return false;
        }
        let signs_ok = self.constraints.iter().zip(y).all(|(row, yi)| match row.sense {
            Sense::Le => !yi.is_negative(),
            Sense::Ge => !yi.is_positive(),
            Sense::Eq => true,
        });
        let columns_ok = (0..self.num_vars).all(|j| {
            let mut acc = zero();
            for (row, yi) in self.constraints.iter().zip(y) {
                if !row.coeffs[j].is_zero() && !yi.is_zero() {
                    acc += yi * &row.coeffs[j];
                }
            }
            acc >= self.objective[j]
        });
        let dual_value: Rational = self.constraints.iter().zip(y).map(|(row, yi)| yi * &row.rhs).sum();
        signs_ok && columns_ok && dual_value == dot(&self.objective, x)
    }
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    let mut acc = zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += x * y;
        }
    }
    acc
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Optimal objective value (zero unless `Optimal`).
    pub value: Rational,
    /// Optimal vertex (empty unless `Optimal`).
    pub primal: Vec<Rational>,
    /// Row duals when `Optimal`; the Farkas certificate when `Infeasible`.
    pub dual: Vec<Rational>,
}

/// Result of a pure feasibility query.
#[derive(Clone, Debug)]
pub enum Feasibility {
    Feasible(Vec<Rational>),
    Infeasible(Vec<Rational>),
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible(_))
    }
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    /// Column holding the initial identity entry of each row.
    unit_col: Vec<usize>,
    num_structural: usize,
    first_artificial: usize,
    num_cols: usize,
}

enum Pivoting {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> (Tableau, Vec<bool>) {
        let m = lp.constraints.len();
        let n = lp.num_vars;
        let mut flipped = vec![false; m];
        let mut senses = Vec::with_capacity(m);
        for (i, row) in lp.constraints.iter().enumerate() {
            if row.rhs.is_negative() {
                flipped[i] = true;
                senses.push(row.sense.flipped());
            } else {
                senses.push(row.sense);
            }
        }
        let num_slack = senses.iter().filter(|s| **s != Sense::Eq).count();
        let num_art = senses.iter().filter(|s| **s != Sense::Le).count();
        let first_artificial = n + num_slack;
        let num_cols = first_artificial + num_art;

        let mut rows = Vec::with_capacity(m);
        let mut rhs = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let mut unit_col = Vec::with_capacity(m);
        let mut next_slack = n;
        let mut next_art = first_artificial;
        for (i, row) in lp.constraints.iter().enumerate() {
            let mut r = vec![zero(); num_cols];
            for (j, a) in row.coeffs.iter().enumerate() {
                r[j] = if flipped[i] { -a } else { a.clone() };
            }
            rhs.push(if flipped[i] { -&row.rhs } else { row.rhs.clone() });
            match senses[i] {
                Sense::Le => {
                    r[next_slack] = one();
                    basis.push(next_slack);
                    unit_col.push(next_slack);
                    next_slack += 1;
                }
                Sense::Ge => {
                    r[next_slack] = -one();
                    next_slack += 1;
                    r[next_art] = one();
                    basis.push(next_art);
                    unit_col.push(next_art);
                    next_art += 1;
                }
                Sense::Eq => {
                    r[next_art] = one();
                    basis.push(next_art);
                    unit_col.push(next_art);
                    next_art += 1;
                }
            }
            rows.push(r);
        }
        let t = Tableau { rows, rhs, basis, unit_col, num_structural: n, first_artificial, num_cols };
        (t, flipped)
    }

    fn reduced_costs(&self, costs: &[Rational]) -> Vec<Rational> {
        let mut d = costs.to_vec();
        for (i, row) in self.rows.iter().enumerate() {
            let cb = &costs[self.basis[i]];
            if cb.is_zero() {
                continue;
            }
            for (dj, a) in d.iter_mut().zip(row) {
                if !a.is_zero() {
                    *dj -= cb * a;
                }
            }
        }
        d
    }

    fn pivot(&mut self, pr: usize, pc: usize, d: &mut [Rational]) {
        let p = self.rows[pr][pc].clone();
        if p != one() {
            for a in self.rows[pr].iter_mut() {
                if !a.is_zero() {
                    *a /= &p;
                }
            }
            self.rhs[pr] /= &p;
        }
        let pivot_row = self.rows[pr].clone();
        let pivot_rhs = self.rhs[pr].clone();
        let nz: Vec<usize> = (0..self.num_cols).filter(|&j| !pivot_row[j].is_zero()).collect();
        for i in 0..self.rows.len() {
            if i == pr {
                continue;
            }
            let factor = self.rows[i][pc].clone();
            if factor.is_zero() {
                continue;
            }
            for &j in &nz {
                let delta = &factor * &pivot_row[j];
                self.rows[i][j] -= delta;
            }
            if !pivot_rhs.is_zero() {
                self.rhs[i] -= &factor * &pivot_rhs;
            }
        }
        let factor = d[pc].clone();
        if !factor.is_zero() {
            for &j in &nz {
                d[j] -= &factor * &pivot_row[j];
            }
        }
        self.basis[pr] = pc;
    }

    /// Runs Bland's rule on reduced costs `d` over columns `0..allowed`.
    fn optimize(&mut self, d: &mut [Rational], allowed: usize) -> Pivoting {
        loop {
            let Some(pc) = (0..allowed).find(|&j| d[j].is_positive()) else {
                return Pivoting::Optimal;
            };
            let mut best: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][pc];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / a;
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                None => return Pivoting::Unbounded,
                Some((pr, _)) => self.pivot(pr, pc, d),
            }
        }
    }

    /// `y = c_B B⁻¹`, read from the columns that started as the identity.
    fn duals(&self, costs: &[Rational]) -> Vec<Rational> {
        self.unit_col
            .iter()
            .map(|&uc| {
                let mut acc = zero();
                for (k, row) in self.rows.iter().enumerate() {
                    let cb = &costs[self.basis[k]];
                    if !cb.is_zero() && !row[uc].is_zero() {
                        acc += cb * &row[uc];
                    }
                }
                acc
            })
            .collect()
    }

    fn objective_value(&self, costs: &[Rational]) -> Rational {
        let mut acc = zero();
        for (i, &b) in self.basis.iter().enumerate() {
            if !costs[b].is_zero() {
                acc += &costs[b] * &self.rhs[i];
            }
        }
        acc
    }
}

/// A feasible starting tableau with its row-flip flags, or a Farkas vector.
type PhaseOne = std::result::Result<(Tableau, Vec<bool>), Vec<Rational>>;

/// Phase 1. Returns the tableau at a basic feasible solution, or the exact
/// Farkas certificate (in original-row orientation) when none exists.
fn phase_one(lp: &LinearProgram) -> Result<PhaseOne> {
    let (mut t, flipped) = Tableau::build(lp);
    let mut costs = vec![zero(); t.num_cols];
    for c in costs.iter_mut().skip(t.first_artificial) {
        *c = -one();
    }
    let mut d = t.reduced_costs(&costs);
    let num_cols = t.num_cols;
    if let Pivoting::Unbounded = t.optimize(&mut d, num_cols) {
        return Err(Error::Internal("phase-one objective is bounded above by zero".into()));
    }
    let value = t.objective_value(&costs);
    if value.is_negative() {
        // Phase-one duals y satisfy yᵀA ≥ 0 and yᵀb < 0 on the normalized
        // rows; w = −y is a certificate, flipped back per row.
        let y = t.duals(&costs);
        let cert: Vec<Rational> = y.into_iter().zip(&flipped).map(|(yi, &f)| if f { yi } else { -yi }).collect();
        if !lp.is_farkas_certificate(&cert) {
            return Err(Error::Internal("Farkas certificate failed exact verification".into()));
        }
        return Ok(Err(cert));
    }
    // Drive zero-valued artificials out of the basis where possible; rows
    // where that fails are redundant and stay inert.
    let mut dummy = vec![zero(); t.num_cols];
    for i in 0..t.rows.len() {
        if t.basis[i] >= t.first_artificial {
            if let Some(j) = (0..t.first_artificial).find(|&j| !t.rows[i][j].is_zero()) {
                t.pivot(i, j, &mut dummy);
            }
        }
    }
    Ok(Ok((t, flipped)))
}

/// Maximizes `cᵀx` over the program's feasible set.
pub fn solve_max(lp: &LinearProgram) -> Result<LpSolution> {
    let (mut t, flipped) = match phase_one(lp)? {
        Ok(found) => found,
        Err(cert) => {
            return Ok(LpSolution { status: LpStatus::Infeasible, value: zero(), primal: Vec::new(), dual: cert })
        }
    };
    let mut costs = vec![zero(); t.num_cols];
    costs[..lp.num_vars].clone_from_slice(&lp.objective);
    let mut d = t.reduced_costs(&costs);
    let allowed = t.first_artificial;
    if let Pivoting::Unbounded = t.optimize(&mut d, allowed) {
        return Ok(LpSolution { status: LpStatus::Unbounded, value: zero(), primal: Vec::new(), dual: Vec::new() });
    }
    let primal = basic_solution(&t);
    let y = t.duals(&costs);
    let dual: Vec<Rational> = y.into_iter().zip(&flipped).map(|(yi, &f)| if f { -yi } else { yi }).collect();
    let value = dot(&lp.objective, &primal);
    if !lp.is_optimality_certificate(&primal, &dual) {
        return Err(Error::Internal("strong duality check failed".into()));
    }
    Ok(LpSolution { status: LpStatus::Optimal, value, primal, dual })
}

fn basic_solution(t: &Tableau) -> Vec<Rational> {
    let mut x = vec![zero(); t.num_structural];
    for (i, &b) in t.basis.iter().enumerate() {
        if b < t.num_structural {
            x[b] = t.rhs[i].clone();
        }
    }
    x
}

/// Decides feasibility of the rows (objective ignored).
pub fn feasible(lp: &LinearProgram) -> Result<Feasibility> {
    match phase_one(lp)? {
        Ok((t, _)) => {
            let x = basic_solution(&t);
            if !lp.is_feasible_point(&x) {
                return Err(Error::Internal("phase-one point violates a constraint".into()));
            }
            Ok(Feasibility::Feasible(x))
        }
        Err(cert) => Ok(Feasibility::Infeasible(cert)),
    }
}
