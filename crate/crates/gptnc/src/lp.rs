//! Two-phase dense simplex over an arbitrary [`Scalar`] backend.
//!
//! Problems are in standard form `min c·x  s.t.  A x = b, x >= 0`.
//! Pivoting uses Bland's rule, so the method is deterministic and never
//! cycles. In exact mode every verdict is certified: an infeasible system
//! yields a Farkas vector `y` with `yᵀA <= 0` componentwise and `yᵀb > 0`,
//! checked by rational arithmetic before it is returned.

use crate::linalg::{Matrix, Vector};
use crate::scalar::{is_zero_tol, Scalar};

/// Outcome of an LP solve.
#[derive(Clone, Debug)]
pub enum LpOutcome<T> {
    /// Optimal basic solution (support at most the number of rows).
    Optimal { x: Vector<T>, objective: T },
    /// No feasible point; carries a Farkas certificate.
    Infeasible { farkas: Vector<T> },
    Unbounded,
}

/// Finds a basic feasible point of `A x = b, x >= 0`, or a Farkas
/// certificate of infeasibility.
pub fn feasible_point<T: Scalar>(
    a: &Matrix<T>,
    b: &Vector<T>,
    tol: &T,
) -> Result<Vector<T>, Vector<T>> {
    let mut s = Simplex::new(a, b, tol.clone());
    match s.phase1() {
        Phase1::Feasible => Ok(s.solution()),
        Phase1::Infeasible(y) => Err(y),
    }
}

/// Minimizes `c·x` over `A x = b, x >= 0`.
pub fn minimize<T: Scalar>(
    c: &Vector<T>,
    a: &Matrix<T>,
    b: &Vector<T>,
    tol: &T,
) -> LpOutcome<T> {
    assert_eq!(c.dim(), a.ncols(), "cost dimension mismatch");
    let mut s = Simplex::new(a, b, tol.clone());
    match s.phase1() {
        Phase1::Infeasible(y) => LpOutcome::Infeasible { farkas: y },
        Phase1::Feasible => match s.phase2(c) {
            true => {
                let x = s.solution();
                let objective = c.dot(&x);
                LpOutcome::Optimal { x, objective }
            }
            false => LpOutcome::Unbounded,
        },
    }
}

/// Membership of `p` in the convex hull of `points`.
pub fn in_convex_hull<T: Scalar>(p: &Vector<T>, points: &[Vector<T>], tol: &T) -> bool {
    if points.is_empty() {
        return false;
    }
    let dim = p.dim();
    let a = Matrix::from_fn(dim + 1, points.len(), |i, j| {
        if i < dim {
            points[j][i].clone()
        } else {
            T::one()
        }
    });
    let mut b = p.0.clone();
    b.push(T::one());
    feasible_point(&a, &Vector(b), tol).is_ok()
}

/// Membership of `r` in the conic hull of `rays`.
pub fn in_conic_hull<T: Scalar>(r: &Vector<T>, rays: &[Vector<T>], tol: &T) -> bool {
    if rays.is_empty() {
        return r.is_zero(tol);
    }
    let a = Matrix::from_cols(rays);
    feasible_point(&a, r, tol).is_ok()
}

enum Phase1<T> {
    Feasible,
    Infeasible(Vector<T>),
}

/// Dense tableau in `B⁻¹[A I | b]` form with a maintained reduced-cost
/// row. Columns `0..n` are the original variables, `n..n+m` the
/// artificials.
struct Simplex<T> {
    n: usize,
    ncols: usize,
    rows: Vec<Vec<T>>,
    rhs: Vec<T>,
    basis: Vec<usize>,
    in_basis: Vec<bool>,
    cost_row: Vec<T>,
    row_sign: Vec<bool>, // true when the original row was negated
    orig_a: Matrix<T>,
    orig_b: Vector<T>,
    tol: T,
    in_phase2: bool,
}

impl<T: Scalar> Simplex<T> {
    fn new(a: &Matrix<T>, b: &Vector<T>, tol: T) -> Self {
        assert_eq!(a.nrows(), b.dim(), "rhs dimension mismatch");
        // Pivoting must be exact on the rational backend no matter what
        // comparison tolerance the caller works with.
        let tol = if T::EXACT { T::zero() } else { tol };
        let m = a.nrows();
        let n = a.ncols();
        let mut rows = Vec::with_capacity(m);
        let mut rhs = Vec::with_capacity(m);
        let mut row_sign = vec![false; m];
        for i in 0..m {
            let flip = b[i] < T::zero();
            row_sign[i] = flip;
            let mut row: Vec<T> = (0..n + m).map(|_| T::zero()).collect();
            for j in 0..n {
                let v = a.get(i, j).clone();
                row[j] = if flip { -v } else { v };
            }
            row[n + i] = T::one();
            rows.push(row);
            rhs.push(if flip { -b[i].clone() } else { b[i].clone() });
        }
        let ncols = n + m;
        let mut in_basis = vec![false; ncols];
        for i in 0..m {
            in_basis[n + i] = true;
        }
        Simplex {
            n,
            ncols,
            rows,
            rhs,
            basis: (0..m).map(|i| n + i).collect(),
            in_basis,
            cost_row: vec![T::zero(); ncols],
            row_sign,
            orig_a: a.clone(),
            orig_b: b.clone(),
            tol,
            in_phase2: false,
        }
    }

    fn m(&self) -> usize {
        self.rows.len()
    }

    /// Initializes the reduced-cost row `c_j - c_B B⁻¹ A_j` for `costs`.
    fn load_costs(&mut self, costs: &[T]) {
        self.cost_row = costs[..self.ncols].to_vec();
        for i in 0..self.m() {
            let cb = costs[self.basis[i]].clone();
            if cb.is_zero() {
                continue;
            }
            for j in 0..self.ncols {
                let v = self.cost_row[j].clone() - cb.clone() * self.rows[i][j].clone();
                self.cost_row[j] = v;
            }
        }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = T::one() / self.rows[r][c].clone();
        for v in self.rows[r].iter_mut() {
            *v = v.clone() * inv.clone();
        }
        self.rhs[r] = self.rhs[r].clone() * inv.clone();
        self.rows[r][c] = T::one();
        for i in 0..self.m() {
            if i == r {
                continue;
            }
            let factor = self.rows[i][c].clone();
            if is_zero_tol(&factor, &self.tol) {
                self.rows[i][c] = T::zero();
                continue;
            }
            for j in 0..self.rows[i].len() {
                let v = self.rows[i][j].clone() - factor.clone() * self.rows[r][j].clone();
                self.rows[i][j] = v;
            }
            self.rows[i][c] = T::zero();
            let v = self.rhs[i].clone() - factor.clone() * self.rhs[r].clone();
            self.rhs[i] = v;
        }
        let factor = self.cost_row[c].clone();
        if !is_zero_tol(&factor, &self.tol) {
            for j in 0..self.cost_row.len() {
                let v = self.cost_row[j].clone() - factor.clone() * self.rows[r][j].clone();
                self.cost_row[j] = v;
            }
        }
        self.cost_row[c] = T::zero();
        self.in_basis[self.basis[r]] = false;
        self.in_basis[c] = true;
        self.basis[r] = c;
    }

    /// Bland ratio test: leaving row for entering column `c`, smallest
    /// ratio with ties broken by smallest basis index.
    fn leaving_row(&self, c: usize) -> Option<usize> {
        let mut best: Option<(usize, T)> = None;
        for i in 0..self.m() {
            if self.rows[i][c] > self.tol {
                let ratio = self.rhs[i].clone() / self.rows[i][c].clone();
                match &best {
                    None => best = Some((i, ratio)),
                    Some((bi, br)) => {
                        if ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]) {
                            best = Some((i, ratio));
                        }
                    }
                }
            }
        }
        best.map(|(i, _)| i)
    }

    /// Runs simplex iterations for `costs`; returns false on unboundedness.
    ///
    /// Float mode tolerates columns whose reduced cost dips below `-tol`
    /// while every entry sits inside the pivot tolerance: such columns are
    /// numerical noise, not unbounded directions, and get skipped until
    /// the next successful pivot.
    fn iterate(&mut self, allow_artificial: bool) -> bool {
        let limit = if allow_artificial { self.ncols } else { self.n };
        let mut blocked = vec![false; limit];
        let mut pivots = 0usize;
        loop {
            // Bland entering rule: smallest index with negative reduced cost.
            let mut entering = None;
            for c in 0..limit {
                if blocked[c] || self.in_basis[c] {
                    continue;
                }
                if self.cost_row[c] < -self.tol.clone() {
                    entering = Some(c);
                    break;
                }
            }
            let Some(c) = entering else { return true };
            match self.leaving_row(c) {
                Some(r) => {
                    self.pivot(r, c);
                    pivots += 1;
                    if !T::EXACT {
                        blocked.fill(false);
                        if pivots > 20_000 {
                            return true;
                        }
                    }
                }
                None => {
                    if T::EXACT {
                        return false;
                    }
                    blocked[c] = true;
                }
            }
        }
    }

    fn phase1(&mut self) -> Phase1<T> {
        let m = self.m();
        let mut costs: Vec<T> = vec![T::zero(); self.ncols];
        for j in self.n..self.ncols {
            costs[j] = T::one();
        }
        self.load_costs(&costs);
        let bounded = self.iterate(true);
        debug_assert!(bounded, "phase 1 objective is bounded below by zero");
        let objective: T = (0..m)
            .map(|i| {
                if self.basis[i] >= self.n {
                    self.rhs[i].clone()
                } else {
                    T::zero()
                }
            })
            .fold(T::zero(), |acc, v| acc + v);
        if objective > self.tol {
            // Dual multipliers: y'_i = cBᵀ B⁻¹ e_i read off the artificial
            // columns; undo the row sign flips for the original system.
            let mut y = Vector::zeros(m);
            for i in 0..m {
                let mut acc = T::zero();
                for (r, &b) in self.basis.iter().enumerate() {
                    if b >= self.n {
                        acc += self.rows[r][self.n + i].clone();
                    }
                }
                y[i] = if self.row_sign[i] { -acc } else { acc };
            }
            if T::EXACT {
                self.check_farkas(&y);
            }
            return Phase1::Infeasible(y);
        }
        self.drive_out_artificials();
        Phase1::Feasible
    }

    /// At zero phase-1 objective, pivots basic artificials onto original
    /// columns; rows that cannot pivot are redundant and get dropped.
    fn drive_out_artificials(&mut self) {
        let mut r = 0;
        while r < self.m() {
            if self.basis[r] >= self.n {
                let col = (0..self.n).find(|&j| !is_zero_tol(&self.rows[r][j], &self.tol));
                match col {
                    Some(c) => self.pivot(r, c),
                    None => {
                        self.in_basis[self.basis[r]] = false;
                        self.rows.remove(r);
                        self.rhs.remove(r);
                        self.basis.remove(r);
                        continue;
                    }
                }
            }
            r += 1;
        }
    }

    fn phase2(&mut self, c: &Vector<T>) -> bool {
        self.in_phase2 = true;
        let mut costs: Vec<T> = c.0.clone();
        costs.resize(self.ncols, T::zero());
        self.load_costs(&costs);
        self.iterate(false)
    }

    fn solution(&self) -> Vector<T> {
        let mut x = Vector::zeros(self.n);
        for (i, &b) in self.basis.iter().enumerate() {
            if b < self.n {
                x[b] = self.rhs[i].clone();
            }
        }
        if T::EXACT && !self.in_phase2 {
            debug_assert_eq!(self.orig_a.mul_vec(&x), self.orig_b);
        }
        x
    }

    fn check_farkas(&self, y: &Vector<T>) {
        for j in 0..self.n {
            let yaj = self.orig_a.col(j).dot(y);
            assert!(
                yaj <= T::zero(),
                "internal: Farkas certificate fails on column {j}"
            );
        }
        assert!(
            y.dot(&self.orig_b) > T::zero(),
            "internal: Farkas certificate has nonpositive value on b"
        );
    }
}

/// Checks a Farkas certificate against `A x = b, x >= 0`:
/// `yᵀA <= 0` componentwise and `yᵀb > 0`.
pub fn verify_farkas<T: Scalar>(a: &Matrix<T>, b: &Vector<T>, y: &Vector<T>, tol: &T) -> bool {
    if y.dim() != a.nrows() {
        return false;
    }
    for j in 0..a.ncols() {
        if a.col(j).dot(y) > tol.clone() {
            return false;
        }
    }
    y.dot(b) > tol.clone()
}
