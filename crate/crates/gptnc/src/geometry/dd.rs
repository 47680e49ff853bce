//! Double description: extremal rays of `{z : <a_i, z> >= 0 for all i}`.
//!
//! Motzkin's incremental insertion with explicit lineality handling and
//! the combinatorial adjacency test on tight sets. Tight sets of freshly
//! combined rays are recomputed against all processed constraints rather
//! than inherited, so degenerate positions cannot corrupt later adjacency
//! decisions. Intended for desk-scale cones (dimension <= ~10, up to a
//! few hundred constraints).

use crate::linalg::{Matrix, Vector};
use crate::scalar::{is_zero_tol, Scalar};

/// Output cone `span(lineality) + cone(rays)`.
#[derive(Clone, Debug)]
pub struct DdCone<T> {
    pub dim: usize,
    pub lineality: Vec<Vector<T>>,
    pub rays: Vec<Vector<T>>,
}

impl<T: Scalar> DdCone<T> {
    pub fn is_pointed(&self) -> bool {
        self.lineality.is_empty()
    }
}

#[derive(Clone)]
struct Ray<T> {
    v: Vector<T>,
    tight: Vec<u64>,
}

fn bits_new(n: usize) -> Vec<u64> {
    vec![0u64; n.div_ceil(64)]
}

fn bits_set(b: &mut [u64], i: usize) {
    b[i / 64] |= 1u64 << (i % 64);
}

fn bits_and(a: &[u64], b: &[u64]) -> Vec<u64> {
    a.iter().zip(b.iter()).map(|(x, y)| x & y).collect()
}

fn bits_superset(sup: &[u64], sub: &[u64]) -> bool {
    sup.iter().zip(sub.iter()).all(|(s, t)| s & t == *t)
}

/// Positive rescaling to a canonical representative: exact mode divides by
/// the absolute value of the first nonzero coordinate, float mode by the
/// largest absolute coordinate.
pub fn canonical_ray<T: Scalar>(v: &Vector<T>, tol: &T) -> Vector<T> {
    let scale = if T::EXACT {
        v.iter().find(|c| !c.is_zero()).map(|c| c.abs())
    } else {
        let m = v.max_abs();
        if is_zero_tol(&m, tol) {
            None
        } else {
            Some(m)
        }
    };
    match scale {
        Some(s) => v.scale(&(T::one() / s)),
        None => Vector::zeros(v.dim()),
    }
}

/// Extremal rays and lineality space of `{z : <a, z> >= 0 for all a in ineqs}`.
pub fn cone_from_inequalities<T: Scalar>(
    dim: usize,
    ineqs: &[Vector<T>],
    tol: &T,
) -> DdCone<T> {
    // Sign classification must be exact on the rational backend.
    let exact_zero = T::zero();
    let tol = if T::EXACT { &exact_zero } else { tol };
    let n = ineqs.len();
    let mut lineality: Vec<Vector<T>> = (0..dim).map(|i| Vector::basis(dim, i)).collect();
    let mut rays: Vec<Ray<T>> = Vec::new();

    for (idx, a) in ineqs.iter().enumerate() {
        assert_eq!(a.dim(), dim, "constraint dimension mismatch");
        let vals: Vec<T> = lineality.iter().map(|l| a.dot(l)).collect();
        let hit = pick_lineality_pivot(&vals, tol);
        if let Some(p) = hit {
            // The constraint cuts the lineality space: extract one basis
            // vector as a new extreme ray, make the rest orthogonal to `a`.
            let lstar = lineality.remove(p);
            let denom = vals[p].clone();
            for l in lineality.iter_mut() {
                let c = a.dot(l) / denom.clone();
                *l = l.sub(&lstar.scale(&c));
            }
            for ray in rays.iter_mut() {
                let c = a.dot(&ray.v) / denom.clone();
                ray.v = ray.v.sub(&lstar.scale(&c));
                bits_set(&mut ray.tight, idx);
            }
            let v = if denom > T::zero() {
                lstar
            } else {
                lstar.neg()
            };
            let v = canonical_ray(&v, tol);
            let tight = recompute_tight(&v, &ineqs[..=idx], n, tol);
            rays.push(Ray { v, tight });
            continue;
        }

        // Standard double-description step within the quotient by lineality.
        let mut plus = Vec::new();
        let mut zero = Vec::new();
        let mut minus = Vec::new();
        for (i, ray) in rays.iter().enumerate() {
            let val = a.dot(&ray.v);
            if is_zero_tol(&val, tol) {
                zero.push(i);
            } else if val > T::zero() {
                plus.push(i);
            } else {
                minus.push(i);
            }
        }
        if minus.is_empty() {
            for &i in &zero {
                bits_set(&mut rays[i].tight, idx);
            }
            continue;
        }
        let mut next: Vec<Ray<T>> = Vec::new();
        for &i in plus.iter().chain(zero.iter()) {
            let mut r = rays[i].clone();
            if zero.contains(&i) {
                bits_set(&mut r.tight, idx);
            }
            next.push(r);
        }
        for &ip in &plus {
            for &im in &minus {
                if !adjacent(&rays, ip, im) {
                    continue;
                }
                let cp = a.dot(&rays[ip].v);
                let cm = a.dot(&rays[im].v);
                // w = cp * r- - cm * r+ lies on the hyperplane and in the cone.
                let w = rays[im].v.scale(&cp).sub(&rays[ip].v.scale(&cm));
                let w = canonical_ray(&w, tol);
                if w.is_zero(tol) {
                    continue;
                }
                if next.iter().any(|r| r.v == w) {
                    continue;
                }
                let tight = recompute_tight(&w, &ineqs[..=idx], n, tol);
                next.push(Ray { v: w, tight });
            }
        }
        rays = next;
    }

    finalize(dim, lineality, rays, tol)
}

fn pick_lineality_pivot<T: Scalar>(vals: &[T], tol: &T) -> Option<usize> {
    if T::EXACT {
        vals.iter().position(|v| !v.is_zero())
    } else {
        let mut best: Option<usize> = None;
        for (i, v) in vals.iter().enumerate() {
            if !is_zero_tol(v, tol) && best.is_none_or(|b| v.abs() > vals[b].abs()) {
                best = Some(i);
            }
        }
        best
    }
}

fn recompute_tight<T: Scalar>(
    v: &Vector<T>,
    processed: &[Vector<T>],
    total: usize,
    tol: &T,
) -> Vec<u64> {
    let mut tight = bits_new(total.max(1));
    for (i, a) in processed.iter().enumerate() {
        if is_zero_tol(&a.dot(v), tol) {
            bits_set(&mut tight, i);
        }
    }
    tight
}

/// Rays `i` and `j` are adjacent iff no third ray is tight everywhere both
/// are tight.
fn adjacent<T: Scalar>(rays: &[Ray<T>], i: usize, j: usize) -> bool {
    let common = bits_and(&rays[i].tight, &rays[j].tight);
    for (k, r) in rays.iter().enumerate() {
        if k != i && k != j && bits_superset(&r.tight, &common) {
            return false;
        }
    }
    true
}

fn finalize<T: Scalar>(
    dim: usize,
    lineality: Vec<Vector<T>>,
    rays: Vec<Ray<T>>,
    tol: &T,
) -> DdCone<T> {
    // Canonical lineality basis via row reduction.
    let lineality: Vec<Vector<T>> = if lineality.is_empty() {
        Vec::new()
    } else {
        let (red, pivots) = Matrix::from_rows(&lineality).rref(tol);
        (0..pivots.len()).map(|i| red.row(i)).collect()
    };
    let mut out: Vec<Vector<T>> = rays.into_iter().map(|r| r.v).collect();
    if !lineality.is_empty() && !out.is_empty() {
        // Reduce rays modulo the lineality space so equal cosets collide.
        let l = Matrix::from_rows(&lineality);
        let gram = l.mat_mul(&l.transpose());
        let ginv = gram
            .inverse(tol)
            .expect("lineality basis has full row rank");
        let proj = l.transpose().mat_mul(&ginv).mat_mul(&l);
        out = out
            .into_iter()
            .map(|r| canonical_ray(&r.sub(&proj.mul_vec(&r)), tol))
            .filter(|r| !r.is_zero(tol))
            .collect();
    } else {
        out = out
            .into_iter()
            .map(|r| canonical_ray(&r, tol))
            .filter(|r| !r.is_zero(tol))
            .collect();
    }
    out.sort_by(|a, b| a.partial_cmp(b).expect("scalar ordering"));
    out.dedup();
    DdCone {
        dim,
        lineality,
        rays: out,
    }
}
