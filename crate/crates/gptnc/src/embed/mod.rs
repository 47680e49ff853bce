//! The decision core: simplex-embeddability of a GPT.
//!
//! A GPT embeds into a `d`-vertex simplex and its dual hypercube iff it
//! admits an ontological model over `d` ontic states. Existence reduces to
//! one exact LP: any model has `mu(s)(l) = <h_l, s>` with `h_l` in the
//! dual cone of the state cone, and `xi(e)(l) = <e, v_l>` with `v_l` in
//! `K_E = {v : <e, v> in [0,1] for all e in E, <u, v> = 1}`; reproducing
//! all probabilities on spanning bodies forces `sum_l v_l h_l^T = Id`.
//! Decomposing the `h_l` over the extremal rays `H_j` of the dual cone and
//! the `v_l` over the vertices `V_i` of `K_E` turns existence into
//! feasibility of `alpha >= 0` with `sum_ij alpha_ij V_i H_j^T = Id`, and
//! any such `alpha` yields a model with one ontic state per pair `(i, j)`.
//! Basic solutions have support at most `dim^2`, matching the known bound
//! on the embedding dimension.
//!
//! Feasible instances return a witness and model that are re-verified
//! before they leave this module; infeasible ones return a rational Farkas
//! certificate, also re-verified.

pub mod search;

use crate::error::{Error, Result};
use crate::geometry::{dual_cone_rays, ConvexBody, Facet};
use crate::gpt::Gpt;
use crate::linalg::{independent_subset, Matrix, Vector};
use crate::lp::{feasible_point, verify_farkas};
use crate::scalar::{approx_eq, in_unit_interval, le_tol, Scalar};

/// Linear maps `iota, kappa : V -> R^d` embedding states into the standard
/// simplex and effects into the unit hypercube while preserving all
/// probabilities; `kappa(u)` is the all-ones vector.
#[derive(Clone, Debug, PartialEq)]
pub struct EmbeddingWitness<T> {
    pub d: usize,
    pub iota: Matrix<T>,
    pub kappa: Matrix<T>,
}

/// A finite ontological model: `mu_map` sends states to distributions over
/// the ontic set, `xi_map` sends effects to `[0,1]`-valued response
/// functions, and together they reproduce every probability.
#[derive(Clone, Debug, PartialEq)]
pub struct OntologicalModel<T> {
    pub d: usize,
    pub mu_map: Matrix<T>,
    pub xi_map: Matrix<T>,
}

/// The two structures carry identical data: ontic states are the simplex
/// vertices, distributions are simplex points, response functions are
/// hypercube points.
pub fn witness_to_model<T: Clone>(w: &EmbeddingWitness<T>) -> OntologicalModel<T> {
    OntologicalModel {
        d: w.d,
        mu_map: w.iota.clone(),
        xi_map: w.kappa.clone(),
    }
}

pub fn model_to_witness<T: Clone>(m: &OntologicalModel<T>) -> EmbeddingWitness<T> {
    EmbeddingWitness {
        d: m.d,
        iota: m.mu_map.clone(),
        kappa: m.xi_map.clone(),
    }
}

/// Coordinates on the state span: `basis` columns span it, `restrict`
/// maps ambient states to reduced coordinates, effects reduce through
/// `basis^T`. When states span the ambient space both maps are the
/// identity and every output stays in the original coordinates.
#[derive(Clone, Debug)]
pub struct Reduction<T> {
    pub n: usize,
    pub k: usize,
    basis: Matrix<T>,
    restrict: Matrix<T>,
}

impl<T: Scalar> Reduction<T> {
    fn identity(n: usize) -> Self {
        Reduction {
            n,
            k: n,
            basis: Matrix::identity(n),
            restrict: Matrix::identity(n),
        }
    }

    pub(crate) fn from_states(states: &ConvexBody<T>, tol: &T) -> Self {
        let n = states.dim();
        let verts = states.vertices();
        let idx = independent_subset(verts, tol);
        let k = idx.len();
        if k == n {
            return Self::identity(n);
        }
        let cols: Vec<Vector<T>> = idx.iter().map(|&i| verts[i].clone()).collect();
        let basis = Matrix::from_cols(&cols);
        let bt = basis.transpose();
        let gram_inv = bt
            .mat_mul(&basis)
            .inverse(tol)
            .expect("basis columns are independent");
        let restrict = gram_inv.mat_mul(&bt);
        Reduction {
            n,
            k,
            basis,
            restrict,
        }
    }

    pub fn reduce_state(&self, s: &Vector<T>) -> Vector<T> {
        self.restrict.mul_vec(s)
    }

    pub fn reduce_effect(&self, e: &Vector<T>) -> Vector<T> {
        self.basis.transpose().mul_vec(e)
    }

    /// Lifts reduced model maps back to ambient coordinates.
    pub(crate) fn lift(&self, mu_red: &Matrix<T>, xi_red: &Matrix<T>) -> (Matrix<T>, Matrix<T>) {
        (
            mu_red.mat_mul(&self.restrict),
            xi_red.mat_mul(&self.basis.transpose()),
        )
    }
}

/// The identity decomposition found by the LP: `state-like` vertices of
/// `K_E`, extremal rays of the dual of the state cone (both in reduced
/// coordinates), and nonnegative coefficients with
/// `sum_ij alpha_ij V_i H_j^T = Id` on the state span.
#[derive(Clone, Debug)]
pub struct PairDecomposition<T> {
    pub v_list: Vec<Vector<T>>,
    pub h_list: Vec<Vector<T>>,
    pub alpha: Matrix<T>,
    pub reduction: Reduction<T>,
}

impl<T: Scalar> PairDecomposition<T> {
    /// Exact check of the defining identity.
    pub fn is_identity(&self, tol: &T) -> bool {
        let k = self.reduction.k;
        let mut acc: Matrix<T> = Matrix::zeros(k, k);
        for (i, v) in self.v_list.iter().enumerate() {
            for (j, h) in self.h_list.iter().enumerate() {
                let a = self.alpha.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for r in 0..k {
                    for c in 0..k {
                        let add = a.clone() * v[r].clone() * h[c].clone();
                        *acc.get_mut(r, c) = acc.get(r, c).clone() + add;
                    }
                }
            }
        }
        let id = Matrix::identity(k);
        (0..k).all(|r| (0..k).all(|c| approx_eq(acc.get(r, c), id.get(r, c), tol)))
    }

    pub fn support(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.alpha.nrows() {
            for j in 0..self.alpha.ncols() {
                if !self.alpha.get(i, j).is_zero() {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Builds the ontological model with one ontic state per support pair:
    /// `h_l = alpha_ij H_j`, `v_l = V_i`.
    pub fn to_model(&self) -> OntologicalModel<T> {
        let support = self.support();
        let k = self.reduction.k;
        let d = support.len();
        let mut mu_red = Matrix::zeros(d, k);
        let mut xi_red = Matrix::zeros(d, k);
        for (row, &(i, j)) in support.iter().enumerate() {
            let a = self.alpha.get(i, j).clone();
            for c in 0..k {
                *mu_red.get_mut(row, c) = a.clone() * self.h_list[j][c].clone();
                *xi_red.get_mut(row, c) = self.v_list[i][c].clone();
            }
        }
        let (mu_map, xi_map) = self.reduction.lift(&mu_red, &xi_red);
        OntologicalModel { d, mu_map, xi_map }
    }
}

/// Rational infeasibility certificate for the embedding LP: `y` pairs
/// nonpositively with every column `vec(V_i H_j^T)` and positively with
/// `vec(Id)`.
#[derive(Clone, Debug)]
pub struct FarkasCertificate<T> {
    pub k: usize,
    pub y: Vector<T>,
}

/// Decision outcome. The embeddable branch carries a witness that passed
/// `verify_witness` and a model that passed its invariants; the
/// non-embeddable branch carries a certificate that re-verified.
#[derive(Clone, Debug)]
pub enum Verdict<T> {
    Embeddable {
        witness: EmbeddingWitness<T>,
        model: OntologicalModel<T>,
        decomposition: PairDecomposition<T>,
        warnings: Vec<String>,
    },
    NotEmbeddable {
        certificate: FarkasCertificate<T>,
        warnings: Vec<String>,
    },
}

impl<T> Verdict<T> {
    pub fn is_embeddable(&self) -> bool {
        matches!(self, Verdict::Embeddable { .. })
    }

    pub fn warnings(&self) -> &[String] {
        match self {
            Verdict::Embeddable { warnings, .. } => warnings,
            Verdict::NotEmbeddable { warnings, .. } => warnings,
        }
    }
}

/// Reduced-coordinate data of the embedding LP.
struct LpInstance<T> {
    reduction: Reduction<T>,
    v_list: Vec<Vector<T>>,
    h_list: Vec<Vector<T>>,
    a: Matrix<T>,
    b: Vector<T>,
    warnings: Vec<String>,
}

fn build_instance<T: Scalar>(g: &Gpt<T>, tol: &T) -> Result<LpInstance<T>> {
    let state_rank = g.states.linear_span_rank(tol);
    let effect_rank = g.effects.linear_span_rank(tol);
    if state_rank != effect_rank {
        return Err(Error::SpanMismatch(format!(
            "states span dimension {state_rank}, effects span dimension {effect_rank}"
        )));
    }
    let reduction = Reduction::from_states(&g.states, tol);
    let k = reduction.k;
    let mut warnings = Vec::new();
    if k < g.dim {
        warnings.push(format!(
            "states span a {k}-dimensional subspace of the {}-dimensional ambient space; \
             the decision applies to the accessible subspace",
            g.dim
        ));
    }
    let red_states: Vec<Vector<T>> = g
        .states
        .vertices()
        .iter()
        .map(|s| reduction.reduce_state(s))
        .collect();
    let red_effects: Vec<Vector<T>> = g
        .effects
        .vertices()
        .iter()
        .map(|e| reduction.reduce_effect(e))
        .collect();
    let red_unit = reduction.reduce_effect(&g.unit);
    if Matrix::from_rows(&red_effects).rank(tol) != k {
        return Err(Error::SpanMismatch(
            "effects do not span the state span; tomography fails on the accessible subspace"
                .into(),
        ));
    }

    // K_E = {v : <e, v> in [0,1] for all effects, <u, v> = 1}.
    let mut facets = Vec::new();
    for e in &red_effects {
        facets.push(Facet {
            normal: e.neg(),
            offset: T::zero(),
        });
        facets.push(Facet {
            normal: e.clone(),
            offset: T::one(),
        });
    }
    facets.push(Facet {
        normal: red_unit.clone(),
        offset: T::one(),
    });
    facets.push(Facet {
        normal: red_unit.neg(),
        offset: -T::one(),
    });
    let k_e = ConvexBody::from_facets(k, facets, tol).map_err(|e| match e {
        Error::UnboundedBody(m) => Error::SpanMismatch(format!("K_E unbounded: {m}")),
        other => other,
    })?;
    let v_list = k_e.vertices().to_vec();

    // Extremal rays of the dual cone of the state cone.
    let h_list = dual_cone_rays(k, &red_states, tol)?;

    // Columns vec(V_i H_j^T), right-hand side vec(Id_k), row-major.
    let ncols = v_list.len() * h_list.len();
    let a = Matrix::from_fn(k * k, ncols, |row, col| {
        let (r, c) = (row / k, row % k);
        let (i, j) = (col / h_list.len(), col % h_list.len());
        v_list[i][r].clone() * h_list[j][c].clone()
    });
    let b = Matrix::identity(k).vec();
    Ok(LpInstance {
        reduction,
        v_list,
        h_list,
        a,
        b,
        warnings,
    })
}

/// Decides simplex-embeddability. Exact on the rational backend: the
/// embeddable branch is re-verified against the witness conditions and
/// model invariants, the non-embeddable branch against the Farkas
/// inequalities, before returning.
pub fn decide<T: Scalar>(g: &Gpt<T>) -> Result<Verdict<T>> {
    let tol = T::default_tol();
    let inst = build_instance(g, &tol)?;
    match feasible_point(&inst.a, &inst.b, &tol) {
        Ok(x) => {
            let nh = inst.h_list.len();
            let alpha = Matrix::from_fn(inst.v_list.len(), nh, |i, j| x[i * nh + j].clone());
            let decomposition = PairDecomposition {
                v_list: inst.v_list,
                h_list: inst.h_list,
                alpha,
                reduction: inst.reduction,
            };
            let model = decomposition.to_model();
            let witness = model_to_witness(&model);
            if T::EXACT {
                assert!(
                    decomposition.is_identity(&tol),
                    "internal: LP solution violates the identity decomposition"
                );
                assert!(
                    verify_witness(g, &witness, &tol)?,
                    "internal: produced witness fails Definition 1"
                );
                assert!(
                    verify_model(g, &model, &tol),
                    "internal: produced model violates its invariants"
                );
            }
            Ok(Verdict::Embeddable {
                witness,
                model,
                decomposition,
                warnings: inst.warnings,
            })
        }
        Err(y) => {
            if T::EXACT {
                assert!(
                    verify_farkas(&inst.a, &inst.b, &y, &tol),
                    "internal: Farkas certificate fails re-verification"
                );
            }
            Ok(Verdict::NotEmbeddable {
                certificate: FarkasCertificate {
                    k: inst.reduction.k,
                    y,
                },
                warnings: inst.warnings,
            })
        }
    }
}

/// Re-derives the LP for `g` and checks the certificate against it.
pub fn verify_certificate<T: Scalar>(
    g: &Gpt<T>,
    cert: &FarkasCertificate<T>,
    tol: &T,
) -> Result<bool> {
    let inst = build_instance(g, tol)?;
    if cert.k != inst.reduction.k {
        return Ok(false);
    }
    Ok(verify_farkas(&inst.a, &inst.b, &cert.y, tol))
}

/// Checks the three defining conditions of an embedding witness on all
/// vertices and vertex pairs: states map into the standard simplex,
/// effects into the unit hypercube, and inner products are preserved.
pub fn verify_witness<T: Scalar>(
    g: &Gpt<T>,
    w: &EmbeddingWitness<T>,
    tol: &T,
) -> Result<bool> {
    if w.iota.ncols() != g.dim || w.kappa.ncols() != g.dim {
        return Err(Error::DimensionMismatch {
            expected: g.dim,
            got: w.iota.ncols().max(w.kappa.ncols()),
        });
    }
    if w.iota.nrows() != w.d || w.kappa.nrows() != w.d {
        return Err(Error::DimensionMismatch {
            expected: w.d,
            got: w.iota.nrows().max(w.kappa.nrows()),
        });
    }
    for s in g.states.vertices() {
        let img = w.iota.mul_vec(s);
        let mut total = T::zero();
        for c in img.iter() {
            if !le_tol(&T::zero(), c, tol) {
                return Ok(false);
            }
            total += c.clone();
        }
        if !approx_eq(&total, &T::one(), tol) {
            return Ok(false);
        }
    }
    for e in g.effects.vertices() {
        let img = w.kappa.mul_vec(e);
        if !img.iter().all(|c| in_unit_interval(c, tol)) {
            return Ok(false);
        }
    }
    for e in g.effects.vertices() {
        for s in g.states.vertices() {
            let lhs = w.kappa.mul_vec(e).dot(&w.iota.mul_vec(s));
            if !approx_eq(&lhs, &e.dot(s), tol) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Checks the ontological-model invariants: distributions on state
/// vertices, `[0,1]` responses on effect vertices, `xi(u)` all-ones, and
/// exact probability reproduction.
pub fn verify_model<T: Scalar>(g: &Gpt<T>, m: &OntologicalModel<T>, tol: &T) -> bool {
    if m.mu_map.ncols() != g.dim || m.xi_map.ncols() != g.dim {
        return false;
    }
    let xi_u = m.xi_map.mul_vec(&g.unit);
    if !xi_u.iter().all(|c| approx_eq(c, &T::one(), tol)) {
        return false;
    }
    verify_witness(g, &model_to_witness(m), tol).unwrap_or(false)
}

/// Largest set of state vertices that pairwise admit a distinguishing
/// vanishing effect: for each ordered pair `(s, s')` in the set some
/// effect gives probability zero on `s` and strictly positive on `s'`.
/// Any simplex embedding must place such states on pairwise disjoint
/// proper faces, so it needs at least this many vertices.
pub fn min_d_lower_bound<T: Scalar>(g: &Gpt<T>, tol: &T) -> usize {
    let states = g.states.vertices();
    let effects = g.effects.vertices();
    let n = states.len();
    // ok[i][j]: some effect mixture vanishes on s_i but not on s_j. By
    // convexity it suffices that some effect vertex in the vanishing set
    // of s_i is positive on s_j.
    let mut ok = vec![vec![false; n]; n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            ok[i][j] = effects.iter().any(|e| {
                approx_eq(&e.dot(&states[i]), &T::zero(), tol)
                    && e.dot(&states[j]) > tol.clone()
            });
        }
    }
    let adjacent = |i: usize, j: usize| ok[i][j] && ok[j][i];
    max_clique(n, &adjacent).max(usize::from(n > 0))
}

/// Bron-Kerbosch maximum clique (desk-scale vertex counts).
fn max_clique(n: usize, adjacent: &dyn Fn(usize, usize) -> bool) -> usize {
    fn extend(
        r: &mut Vec<usize>,
        p: Vec<usize>,
        x: Vec<usize>,
        adjacent: &dyn Fn(usize, usize) -> bool,
        best: &mut usize,
    ) {
        if p.is_empty() && x.is_empty() {
            *best = (*best).max(r.len());
            return;
        }
        if r.len() + p.len() <= *best {
            return;
        }
        let candidates = p.clone();
        let mut p = p;
        let mut x = x;
        for v in candidates {
            let np: Vec<usize> = p.iter().copied().filter(|&u| adjacent(u, v)).collect();
            let nx: Vec<usize> = x.iter().copied().filter(|&u| adjacent(u, v)).collect();
            r.push(v);
            extend(r, np, nx, adjacent, best);
            r.pop();
            p.retain(|&u| u != v);
            x.push(v);
        }
    }
    let mut best = 0;
    extend(
        &mut Vec::new(),
        (0..n).collect(),
        Vec::new(),
        adjacent,
        &mut best,
    );
    best
}

/// Greedy support minimization: repeatedly tries to drop the support pair
/// with the largest coefficient (ties by index) and re-solves the LP on
/// the remaining support. The output support is never larger than the
/// input and the identity invariant is preserved.
pub fn minimize_support<T: Scalar>(pd: &PairDecomposition<T>) -> PairDecomposition<T> {
    let tol = T::default_tol();
    let k = pd.reduction.k;
    let nh = pd.h_list.len();
    let b = Matrix::identity(k).vec();
    let column = |i: usize, j: usize| -> Vector<T> {
        let mut col = Vec::with_capacity(k * k);
        for r in 0..k {
            for c in 0..k {
                col.push(pd.v_list[i][r].clone() * pd.h_list[j][c].clone());
            }
        }
        Vector(col)
    };
    let solve_on = |support: &[(usize, usize)]| -> Option<Matrix<T>> {
        let cols: Vec<Vector<T>> = support.iter().map(|&(i, j)| column(i, j)).collect();
        let a = Matrix::from_cols(&cols);
        match feasible_point(&a, &b, &tol) {
            Ok(x) => {
                let mut alpha = Matrix::zeros(pd.v_list.len(), nh);
                for (idx, &(i, j)) in support.iter().enumerate() {
                    *alpha.get_mut(i, j) = x[idx].clone();
                }
                Some(alpha)
            }
            Err(_) => None,
        }
    };
    let mut current = pd.clone();
    loop {
        let mut support = current.support();
        // Decreasing coefficient order, deterministic tie-break by index.
        support.sort_by(|a, b| {
            current
                .alpha
                .get(b.0, b.1)
                .partial_cmp(current.alpha.get(a.0, a.1))
                .expect("scalar ordering")
                .then(a.cmp(b))
        });
        let mut improved = false;
        for drop in 0..support.len() {
            let trial: Vec<(usize, usize)> = support
                .iter()
                .enumerate()
                .filter(|(idx, _)| *idx != drop)
                .map(|(_, &p)| p)
                .collect();
            if let Some(alpha) = solve_on(&trial) {
                current = PairDecomposition {
                    v_list: pd.v_list.clone(),
                    h_list: pd.h_list.clone(),
                    alpha,
                    reduction: pd.reduction.clone(),
                };
                improved = true;
                break;
            }
        }
        if !improved {
            return current;
        }
    }
}
