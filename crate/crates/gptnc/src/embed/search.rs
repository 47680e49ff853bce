//! Fixed-cardinality model search by alternating linear programs.
//!
//! Complements the exact decision: given a target ontic-state count `d`,
//! alternately fixes the state map and solves an LP for the effect map
//! (and vice versa), minimizing the total violation of probability
//! reproduction subject to the hard shape constraints. Absence of a model
//! after the restart budget proves nothing; callers combine the outcome
//! with [`super::min_d_lower_bound`].

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Dirichlet, Distribution};

use crate::embed::{verify_model, OntologicalModel, Reduction};
use crate::gpt::Gpt;
use crate::linalg::{Matrix, Vector};
use crate::lp::{minimize, LpOutcome};
use crate::scalar::Scalar;

/// Searches for a `d`-state ontological model of `g` in float arithmetic.
/// Deterministic under `seed`; restarts draw the initial state map columns
/// from a symmetric Dirichlet(1).
pub fn bilinear_search<T: Scalar>(
    g: &Gpt<T>,
    d: usize,
    restarts: usize,
    seed: u64,
) -> Option<OntologicalModel<f64>> {
    if d == 0 {
        return None;
    }
    let gf = to_f64_gpt(g);
    let tol = 1e-9f64;
    let reduction = Reduction::from_states(&gf.states, &tol);
    let k = reduction.k;
    let states: Vec<Vector<f64>> = gf
        .states
        .vertices()
        .iter()
        .map(|s| reduction.reduce_state(s))
        .collect();
    let effects: Vec<Vector<f64>> = gf
        .effects
        .vertices()
        .iter()
        .map(|e| reduction.reduce_effect(e))
        .collect();
    let unit = reduction.reduce_effect(&gf.unit);
    let target = Matrix::from_fn(effects.len(), states.len(), |i, j| effects[i].dot(&states[j]));

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dirichlet = Dirichlet::new(&vec![1.0f64; d]).expect("d >= 1");
    for _ in 0..restarts {
        let mut mu = Matrix::zeros(d, k);
        for c in 0..k {
            let col = dirichlet.sample(&mut rng);
            for r in 0..d {
                *mu.get_mut(r, c) = col[r];
            }
        }
        let mut last = f64::INFINITY;
        for _ in 0..8 {
            let Some((xi, slack_xi)) = xi_step(&mu, &states, &effects, &unit, &target, d, k)
            else {
                break;
            };
            let Some((next_mu, slack_mu)) = mu_step(&xi, &states, &effects, &target, d, k)
            else {
                break;
            };
            mu = next_mu;
            let slack = slack_mu.min(slack_xi);
            if slack <= 1e-10 {
                let (mu_map, xi_map) = reduction.lift(&mu, &xi);
                let model = OntologicalModel { d, mu_map, xi_map };
                if verify_model(&gf, &model, &tol) {
                    return Some(model);
                }
            }
            if last - slack < 1e-12 {
                break;
            }
            last = slack;
        }
    }
    None
}

/// Negativity-minimizing variant of the alternating search: probability
/// reproduction is driven by a heavy penalty while negative representation
/// values carry a unit penalty. Returns the best representation that
/// reproduces probabilities to within 1e-9, with its total negativity.
/// Heuristic only; it certifies nothing.
pub(crate) fn negativity_search<T: Scalar>(
    g: &Gpt<T>,
    d: usize,
    restarts: usize,
    seed: u64,
) -> Option<(crate::quasiprob::QuasiRep<f64>, f64)> {
    if d == 0 {
        return None;
    }
    let gf = to_f64_gpt(g);
    let tol = 1e-9f64;
    let reduction = Reduction::from_states(&gf.states, &tol);
    let k = reduction.k;
    let states: Vec<Vector<f64>> = gf
        .states
        .vertices()
        .iter()
        .map(|s| reduction.reduce_state(s))
        .collect();
    let effects: Vec<Vector<f64>> = gf
        .effects
        .vertices()
        .iter()
        .map(|e| reduction.reduce_effect(e))
        .collect();
    let unit = reduction.reduce_effect(&gf.unit);
    let target = Matrix::from_fn(effects.len(), states.len(), |i, j| effects[i].dot(&states[j]));

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dirichlet = Dirichlet::new(&vec![1.0f64; d]).expect("d >= 1");
    let mut best: Option<(crate::quasiprob::QuasiRep<f64>, f64)> = None;
    for _ in 0..restarts {
        let mut mu = Matrix::zeros(d, k);
        for c in 0..k {
            let col = dirichlet.sample(&mut rng);
            for r in 0..d {
                *mu.get_mut(r, c) = col[r];
            }
        }
        for _ in 0..6 {
            let Some(xi) = signed_xi_step(&mu, &states, &effects, &unit, &target, d, k) else {
                break;
            };
            let Some(next_mu) = signed_mu_step(&xi, &states, &effects, &target, d, k) else {
                break;
            };
            mu = next_mu;
            let (mu_map, xi_map) = reduction.lift(&mu, &xi);
            let rep = crate::quasiprob::QuasiRep {
                d,
                mu_hat: mu_map,
                xi_hat: xi_map,
                gpt: gf.clone(),
            };
            if !rep.reproduces_probabilities(&tol) {
                continue;
            }
            let neg = crate::quasiprob::negativity(&rep).total();
            if best.as_ref().is_none_or(|(_, b)| neg < *b) {
                best = Some((rep, neg));
            }
        }
        if matches!(&best, Some((_, n)) if *n <= 1e-12) {
            break;
        }
    }
    best
}

/// Large weight that makes reproduction slack dominate sign penalties.
const REPRODUCTION_WEIGHT: f64 = 1e4;

fn signed_xi_step(
    mu: &Matrix<f64>,
    states: &[Vector<f64>],
    effects: &[Vector<f64>],
    unit: &Vector<f64>,
    target: &Matrix<f64>,
    d: usize,
    k: usize,
) -> Option<Matrix<f64>> {
    let p = effects.len();
    let m = states.len();
    let mu_vals: Vec<Vector<f64>> = states.iter().map(|s| mu.mul_vec(s)).collect();
    // Columns: pos(dk) | neg(dk) | vpos(pd) | vneg(pd) | s+(pm) | s-(pm)
    let dk = d * k;
    let c_vp = 2 * dk;
    let c_vn = c_vp + p * d;
    let c_sp = c_vn + p * d;
    let c_sm = c_sp + p * m;
    let ncols = c_sm + p * m;
    // Rows: value defs (pd) | unit (d) | reproduction (pm)
    let r_unit = p * d;
    let r_rep = r_unit + d;
    let nrows = r_rep + p * m;
    let mut a = Matrix::<f64>::zeros(nrows, ncols);
    let mut b = Vector::<f64>::zeros(nrows);
    for i in 0..p {
        for l in 0..d {
            let row = i * d + l;
            for c in 0..k {
                *a.get_mut(row, l * k + c) = effects[i][c];
                *a.get_mut(row, dk + l * k + c) = -effects[i][c];
            }
            *a.get_mut(row, c_vp + i * d + l) = -1.0;
            *a.get_mut(row, c_vn + i * d + l) = 1.0;
        }
    }
    for l in 0..d {
        for c in 0..k {
            *a.get_mut(r_unit + l, l * k + c) = unit[c];
            *a.get_mut(r_unit + l, dk + l * k + c) = -unit[c];
        }
        b[r_unit + l] = 1.0;
    }
    for i in 0..p {
        for j in 0..m {
            let row = r_rep + i * m + j;
            for l in 0..d {
                *a.get_mut(row, c_vp + i * d + l) = mu_vals[j][l];
                *a.get_mut(row, c_vn + i * d + l) = -mu_vals[j][l];
            }
            *a.get_mut(row, c_sp + i * m + j) = 1.0;
            *a.get_mut(row, c_sm + i * m + j) = -1.0;
            b[row] = *target.get(i, j);
        }
    }
    let mut cost = Vector::<f64>::zeros(ncols);
    for idx in c_vn..c_sp {
        cost[idx] = 1.0;
    }
    for idx in c_sp..ncols {
        cost[idx] = REPRODUCTION_WEIGHT;
    }
    match minimize(&cost, &a, &b, &1e-11) {
        LpOutcome::Optimal { x, .. } => {
            Some(Matrix::from_fn(d, k, |l, c| x[l * k + c] - x[dk + l * k + c]))
        }
        _ => None,
    }
}

fn signed_mu_step(
    xi: &Matrix<f64>,
    states: &[Vector<f64>],
    effects: &[Vector<f64>],
    target: &Matrix<f64>,
    d: usize,
    k: usize,
) -> Option<Matrix<f64>> {
    let p = effects.len();
    let m = states.len();
    let xi_vals: Vec<Vector<f64>> = effects.iter().map(|e| xi.mul_vec(e)).collect();
    // Columns: pos(dk) | neg(dk) | vpos(md) | vneg(md) | s+(pm) | s-(pm)
    let dk = d * k;
    let c_vp = 2 * dk;
    let c_vn = c_vp + m * d;
    let c_sp = c_vn + m * d;
    let c_sm = c_sp + p * m;
    let ncols = c_sm + p * m;
    // Rows: value defs (md) | normalization (m) | reproduction (pm)
    let r_norm = m * d;
    let r_rep = r_norm + m;
    let nrows = r_rep + p * m;
    let mut a = Matrix::<f64>::zeros(nrows, ncols);
    let mut b = Vector::<f64>::zeros(nrows);
    for j in 0..m {
        for l in 0..d {
            let row = j * d + l;
            for c in 0..k {
                *a.get_mut(row, l * k + c) = states[j][c];
                *a.get_mut(row, dk + l * k + c) = -states[j][c];
            }
            *a.get_mut(row, c_vp + j * d + l) = -1.0;
            *a.get_mut(row, c_vn + j * d + l) = 1.0;
        }
        for l in 0..d {
            *a.get_mut(r_norm + j, c_vp + j * d + l) = 1.0;
            *a.get_mut(r_norm + j, c_vn + j * d + l) = -1.0;
        }
        b[r_norm + j] = 1.0;
    }
    for i in 0..p {
        for j in 0..m {
            let row = r_rep + i * m + j;
            for l in 0..d {
                *a.get_mut(row, c_vp + j * d + l) = xi_vals[i][l];
                *a.get_mut(row, c_vn + j * d + l) = -xi_vals[i][l];
            }
            *a.get_mut(row, c_sp + i * m + j) = 1.0;
            *a.get_mut(row, c_sm + i * m + j) = -1.0;
            b[row] = *target.get(i, j);
        }
    }
    let mut cost = Vector::<f64>::zeros(ncols);
    for idx in c_vn..c_sp {
        cost[idx] = 1.0;
    }
    for idx in c_sp..ncols {
        cost[idx] = REPRODUCTION_WEIGHT;
    }
    match minimize(&cost, &a, &b, &1e-11) {
        LpOutcome::Optimal { x, .. } => {
            Some(Matrix::from_fn(d, k, |l, c| x[l * k + c] - x[dk + l * k + c]))
        }
        _ => None,
    }
}

fn to_f64_gpt<T: Scalar>(g: &Gpt<T>) -> Gpt<f64> {
    use crate::geometry::ConvexBody;
    let tol = 1e-9f64;
    let conv = |b: &ConvexBody<T>| {
        ConvexBody::from_vertices(
            b.dim(),
            b.vertices().iter().map(|v| Vector(v.to_f64())).collect(),
            &tol,
        )
        .expect("float conversion of a nonempty body")
    };
    Gpt::new(
        g.dim,
        conv(&g.states),
        conv(&g.effects),
        Vector(g.unit.to_f64()),
    )
}

/// With `mu` fixed, finds the effect map minimizing reproduction slack
/// subject to responses in `[0,1]` and `xi(u) = 1`.
fn xi_step(
    mu: &Matrix<f64>,
    states: &[Vector<f64>],
    effects: &[Vector<f64>],
    unit: &Vector<f64>,
    target: &Matrix<f64>,
    d: usize,
    k: usize,
) -> Option<(Matrix<f64>, f64)> {
    let p = effects.len();
    let m = states.len();
    let mu_vals: Vec<Vector<f64>> = states.iter().map(|s| mu.mul_vec(s)).collect();

    // Columns: pos(dk) | neg(dk) | value(pd) | upper(pd) | s+(pm) | s-(pm)
    let dk = d * k;
    let c_val = 2 * dk;
    let c_up = c_val + p * d;
    let c_sp = c_up + p * d;
    let c_sm = c_sp + p * m;
    let ncols = c_sm + p * m;
    // Rows: value defs (pd) | upper bounds (pd) | unit (d) | reproduction (pm)
    let r_up = p * d;
    let r_unit = 2 * p * d;
    let r_rep = r_unit + d;
    let nrows = r_rep + p * m;

    let mut a = Matrix::<f64>::zeros(nrows, ncols);
    let mut b = Vector::<f64>::zeros(nrows);
    for i in 0..p {
        for l in 0..d {
            let row = i * d + l;
            for c in 0..k {
                *a.get_mut(row, l * k + c) = effects[i][c];
                *a.get_mut(row, dk + l * k + c) = -effects[i][c];
            }
            *a.get_mut(row, c_val + i * d + l) = -1.0;
            // value + upper = 1
            *a.get_mut(r_up + row, c_val + i * d + l) = 1.0;
            *a.get_mut(r_up + row, c_up + i * d + l) = 1.0;
            b[r_up + row] = 1.0;
        }
    }
    for l in 0..d {
        for c in 0..k {
            *a.get_mut(r_unit + l, l * k + c) = unit[c];
            *a.get_mut(r_unit + l, dk + l * k + c) = -unit[c];
        }
        b[r_unit + l] = 1.0;
    }
    for i in 0..p {
        for j in 0..m {
            let row = r_rep + i * m + j;
            for l in 0..d {
                *a.get_mut(row, c_val + i * d + l) = mu_vals[j][l];
            }
            *a.get_mut(row, c_sp + i * m + j) = 1.0;
            *a.get_mut(row, c_sm + i * m + j) = -1.0;
            b[row] = *target.get(i, j);
        }
    }
    let mut cost = Vector::<f64>::zeros(ncols);
    for idx in c_sp..ncols {
        cost[idx] = 1.0;
    }
    match minimize(&cost, &a, &b, &1e-11) {
        LpOutcome::Optimal { x, objective } => {
            let xi = Matrix::from_fn(d, k, |l, c| x[l * k + c] - x[dk + l * k + c]);
            Some((xi, objective))
        }
        _ => None,
    }
}

/// With `xi` fixed, finds the state map minimizing reproduction slack
/// subject to distributions on all state vertices.
fn mu_step(
    xi: &Matrix<f64>,
    states: &[Vector<f64>],
    effects: &[Vector<f64>],
    target: &Matrix<f64>,
    d: usize,
    k: usize,
) -> Option<(Matrix<f64>, f64)> {
    let p = effects.len();
    let m = states.len();
    let xi_vals: Vec<Vector<f64>> = effects.iter().map(|e| xi.mul_vec(e)).collect();

    // Columns: pos(dk) | neg(dk) | value(md) | s+(pm) | s-(pm)
    let dk = d * k;
    let c_val = 2 * dk;
    let c_sp = c_val + m * d;
    let c_sm = c_sp + p * m;
    let ncols = c_sm + p * m;
    // Rows: value defs (md) | normalization (m) | reproduction (pm)
    let r_norm = m * d;
    let r_rep = r_norm + m;
    let nrows = r_rep + p * m;

    let mut a = Matrix::<f64>::zeros(nrows, ncols);
    let mut b = Vector::<f64>::zeros(nrows);
    for j in 0..m {
        for l in 0..d {
            let row = j * d + l;
            for c in 0..k {
                *a.get_mut(row, l * k + c) = states[j][c];
                *a.get_mut(row, dk + l * k + c) = -states[j][c];
            }
            *a.get_mut(row, c_val + j * d + l) = -1.0;
        }
        for l in 0..d {
            *a.get_mut(r_norm + j, c_val + j * d + l) = 1.0;
        }
        b[r_norm + j] = 1.0;
    }
    for i in 0..p {
        for j in 0..m {
            let row = r_rep + i * m + j;
            for l in 0..d {
                *a.get_mut(row, c_val + j * d + l) = xi_vals[i][l];
            }
            *a.get_mut(row, c_sp + i * m + j) = 1.0;
            *a.get_mut(row, c_sm + i * m + j) = -1.0;
            b[row] = *target.get(i, j);
        }
    }
    let mut cost = Vector::<f64>::zeros(ncols);
    for idx in c_sp..ncols {
        cost[idx] = 1.0;
    }
    match minimize(&cost, &a, &b, &1e-11) {
        LpOutcome::Optimal { x, objective } => {
            let mu = Matrix::from_fn(d, k, |l, c| x[l * k + c] - x[dk + l * k + c]);
            Some((mu, objective))
        }
        _ => None,
    }
}
