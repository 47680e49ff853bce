//! Exact and floating-point convex geometry: bodies, cones, dual bodies,
//! representation conversion, and shape recognition.
//!
//! A [`ConvexBody`] is a bounded polytope given by its vertices, optionally
//! carrying a facet description. Conversion between the two representations
//! goes through the double-description engine in [`dd`]; all predicates take
//! a tolerance that is zero in exact mode.

pub mod dd;

use crate::error::{Error, Result};
use crate::linalg::{span_rank, Matrix, Vector};
use crate::lp::{feasible_point, in_conic_hull, in_convex_hull, minimize, LpOutcome};
use crate::scalar::{approx_eq, is_zero_tol, le_tol, Scalar};

use dd::{canonical_ray, cone_from_inequalities};

/// One inequality `<normal, x> <= offset`.
#[derive(Clone, Debug, PartialEq)]
pub struct Facet<T> {
    pub normal: Vector<T>,
    pub offset: T,
}

/// A compact convex polytope in generator representation, with an optional
/// facet description covering the same set.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvexBody<T> {
    dim: usize,
    vertices: Vec<Vector<T>>,
    facets: Option<Vec<Facet<T>>>,
}

/// Facets split into proper inequalities and affine-hull equalities.
#[derive(Clone, Debug)]
pub struct FacetDescription<T> {
    pub proper: Vec<Facet<T>>,
    /// Equalities `<normal, x> = offset` holding on the whole body.
    pub equalities: Vec<Facet<T>>,
}

impl<T> FacetDescription<T> {
    /// All constraints as inequalities (each equality contributes a pair).
    pub fn inequalities(&self) -> Vec<Facet<T>>
    where
        T: Scalar,
    {
        let mut out = self.proper.clone();
        for eq in &self.equalities {
            out.push(eq.clone());
            out.push(Facet {
                normal: eq.normal.neg(),
                offset: -eq.offset.clone(),
            });
        }
        out
    }
}

impl<T: Scalar> ConvexBody<T> {
    /// Canonicalizes: deduplicate, drop convexly dependent points, sort.
    pub fn from_vertices(dim: usize, vertices: Vec<Vector<T>>, tol: &T) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::DegenerateBody("no vertices".into()));
        }
        for v in &vertices {
            if v.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: v.dim(),
                });
            }
        }
        let vertices = canonical_vertices(vertices, tol);
        Ok(ConvexBody {
            dim,
            vertices,
            facets: None,
        })
    }

    /// Vertex enumeration from a facet description.
    pub fn from_facets(dim: usize, facets: Vec<Facet<T>>, tol: &T) -> Result<Self> {
        // Homogenize <n, x> <= o as <(o, -n), (t, x)> >= 0.
        let ineqs: Vec<Vector<T>> = facets
            .iter()
            .map(|f| {
                let mut c = Vec::with_capacity(dim + 1);
                c.push(f.offset.clone());
                c.extend(f.normal.iter().map(|v| -v.clone()));
                Vector(c)
            })
            .collect();
        let cone = cone_from_inequalities(dim + 1, &ineqs, tol);
        if !cone.lineality.is_empty() {
            return Err(Error::UnboundedBody(
                "facet system admits a line".into(),
            ));
        }
        let mut vertices = Vec::new();
        for r in &cone.rays {
            if le_tol(&r[0], &T::zero(), tol) {
                return Err(Error::UnboundedBody(
                    "facet system admits a recession direction".into(),
                ));
            }
            let inv = T::one() / r[0].clone();
            vertices.push(Vector(r.iter().skip(1).map(|c| c.clone() * inv.clone()).collect()));
        }
        let mut body = Self::from_vertices(dim, vertices, tol)?;
        body.facets = Some(facets);
        Ok(body)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vector<T>] {
        &self.vertices
    }

    pub fn facets(&self) -> Option<&[Facet<T>]> {
        self.facets.as_deref()
    }

    pub fn barycenter(&self) -> Vector<T> {
        let mut acc = Vector::zeros(self.dim);
        for v in &self.vertices {
            acc = acc.add(v);
        }
        acc.scale(&(T::one() / T::from_int(self.vertices.len() as i64)))
    }

    /// Dimension of the affine hull.
    pub fn intrinsic_dim(&self, tol: &T) -> usize {
        let v0 = &self.vertices[0];
        let diffs: Vec<Vector<T>> = self.vertices[1..].iter().map(|v| v.sub(v0)).collect();
        span_rank(&diffs, tol)
    }

    /// Dimension of the linear span of the vertices.
    pub fn linear_span_rank(&self, tol: &T) -> usize {
        span_rank(&self.vertices, tol)
    }

    pub fn contains(&self, point: &Vector<T>, tol: &T) -> bool {
        in_convex_hull(point, &self.vertices, tol)
    }

    pub fn contains_body(&self, other: &Self, tol: &T) -> bool {
        other.vertices.iter().all(|v| self.contains(v, tol))
    }

    /// Facet enumeration via the polar of the homogenization cone.
    pub fn facet_description(&self, tol: &T) -> FacetDescription<T> {
        let lifted: Vec<Vector<T>> = self
            .vertices
            .iter()
            .map(|v| {
                let mut c = Vec::with_capacity(self.dim + 1);
                c.push(T::one());
                c.extend(v.iter().cloned());
                Vector(c)
            })
            .collect();
        let polar = cone_from_inequalities(self.dim + 1, &lifted, tol);
        let proper = polar
            .rays
            .iter()
            .map(|r| Facet {
                normal: Vector(r.iter().skip(1).map(|c| -c.clone()).collect()),
                offset: r[0].clone(),
            })
            .collect();
        let equalities = polar
            .lineality
            .iter()
            .map(|l| Facet {
                normal: Vector(l.iter().skip(1).cloned().collect()),
                offset: -l[0].clone(),
            })
            .collect();
        FacetDescription { proper, equalities }
    }

    /// Returns the same body with the facet representation filled in.
    pub fn with_facets(mut self, tol: &T) -> Self {
        if self.facets.is_none() {
            self.facets = Some(self.facet_description(tol).inequalities());
        }
        self
    }

    /// Exact mode: canonical vertex sets are equal. Float mode: two-sided
    /// L-infinity Hausdorff distance at most `tol`.
    pub fn equal_as_set(&self, other: &Self, tol: &T) -> bool {
        if self.dim != other.dim {
            return false;
        }
        if T::EXACT {
            self.vertices == other.vertices
        } else {
            hausdorff_linf(self, other).max(hausdorff_linf(other, self)) <= tol.to_f64()
        }
    }
}

fn canonical_vertices<T: Scalar>(mut vertices: Vec<Vector<T>>, tol: &T) -> Vec<Vector<T>> {
    // Deduplicate (componentwise within tol).
    let mut unique: Vec<Vector<T>> = Vec::new();
    for v in vertices.drain(..) {
        if !unique
            .iter()
            .any(|u| u.sub(&v).iter().all(|c| is_zero_tol(c, tol)))
        {
            unique.push(v);
        }
    }
    // Drop convexly dependent points.
    let mut keep = vec![true; unique.len()];
    for i in 0..unique.len() {
        let others: Vec<Vector<T>> = unique
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i && keep[*j])
            .map(|(_, v)| v.clone())
            .collect();
        if !others.is_empty() && in_convex_hull(&unique[i], &others, tol) {
            keep[i] = false;
        }
    }
    let mut out: Vec<Vector<T>> = unique
        .into_iter()
        .zip(keep)
        .filter(|(_, k)| *k)
        .map(|(v, _)| v)
        .collect();
    out.sort_by(|a, b| a.partial_cmp(b).expect("scalar ordering"));
    out
}

/// Directed L-infinity Hausdorff distance from `a`'s vertices to `b`.
fn hausdorff_linf<T: Scalar>(a: &ConvexBody<T>, b: &ConvexBody<T>) -> f64 {
    let mut worst = 0.0f64;
    for v in a.vertices() {
        worst = worst.max(dist_linf_to_hull(v, b.vertices()));
    }
    worst
}

/// `min_{p in conv(points)} ||p - v||_inf` via a small LP in f64.
fn dist_linf_to_hull<T: Scalar>(v: &Vector<T>, points: &[Vector<T>]) -> f64 {
    let dim = v.dim();
    let m = points.len();
    // Variables: lambda_1..m, t, slack_a[dim], slack_b[dim].
    // sum lambda = 1; for each coordinate i:
    //   sum_j lambda_j p_j[i] - t + slack_a_i = v_i   (p . lambda - v <= t)
    //   sum_j lambda_j p_j[i] + t - slack_b_i = v_i   (v - p . lambda <= t)
    let ncols = m + 1 + 2 * dim;
    let nrows = 1 + 2 * dim;
    let mut a = Matrix::<f64>::zeros(nrows, ncols);
    let mut b = Vector::<f64>::zeros(nrows);
    for j in 0..m {
        *a.get_mut(0, j) = 1.0;
    }
    b[0] = 1.0;
    for i in 0..dim {
        for j in 0..m {
            *a.get_mut(1 + 2 * i, j) = points[j][i].to_f64();
            *a.get_mut(2 + 2 * i, j) = points[j][i].to_f64();
        }
        *a.get_mut(1 + 2 * i, m) = -1.0;
        *a.get_mut(1 + 2 * i, m + 1 + i) = 1.0;
        *a.get_mut(2 + 2 * i, m) = 1.0;
        *a.get_mut(2 + 2 * i, m + 1 + dim + i) = -1.0;
        b[1 + 2 * i] = v[i].to_f64();
        b[2 + 2 * i] = v[i].to_f64();
    }
    let mut c = Vector::<f64>::zeros(ncols);
    c[m] = 1.0;
    match minimize(&c, &a, &b, &1e-12) {
        LpOutcome::Optimal { objective, .. } => objective.max(0.0),
        _ => f64::INFINITY,
    }
}

/// The dual set `{x : <x, v> in [0, 1] for all v in body}`, computed without
/// any normalization requirement on the input.
pub fn dual_set<T: Scalar>(body: &ConvexBody<T>, tol: &T) -> Result<ConvexBody<T>> {
    let mut facets = Vec::with_capacity(2 * body.vertices().len());
    for v in body.vertices() {
        facets.push(Facet {
            normal: v.neg(),
            offset: T::zero(),
        });
        facets.push(Facet {
            normal: v.clone(),
            offset: T::one(),
        });
    }
    let dual = ConvexBody::from_facets(body.dim(), facets, tol)?;
    Ok(dual.with_facets(tol))
}

/// The dual body of a normalized body: `{x : <x, s> in [0, 1] for all s}`,
/// returned with both representations. Errors with [`Error::UnnormalizedBody`]
/// if some vertex violates `<unit, s> = 1` beyond `tol`.
pub fn dual_body<T: Scalar>(
    body: &ConvexBody<T>,
    unit: &Vector<T>,
    tol: &T,
) -> Result<ConvexBody<T>> {
    if unit.dim() != body.dim() {
        return Err(Error::DimensionMismatch {
            expected: body.dim(),
            got: unit.dim(),
        });
    }
    for (index, v) in body.vertices().iter().enumerate() {
        let val = unit.dot(v);
        if !approx_eq(&val, &T::one(), tol) {
            return Err(Error::UnnormalizedBody {
                index,
                value: val.repr(),
            });
        }
    }
    dual_set(body, tol)
}

/// A polyhedral cone given by generators and/or facet normals.
#[derive(Clone, Debug)]
pub struct Cone<T> {
    pub dim: usize,
    pub rays: Vec<Vector<T>>,
    pub facet_normals: Option<Vec<Vector<T>>>,
}

impl<T: Scalar> Cone<T> {
    /// Scale-canonicalizes and drops redundant generators; errors if the
    /// generators contain a line.
    pub fn from_rays(dim: usize, rays: Vec<Vector<T>>, tol: &T) -> Result<Self> {
        let rays = minimal_generators(rays, tol)?;
        Ok(Cone {
            dim,
            rays,
            facet_normals: None,
        })
    }

    pub fn from_facet_normals(dim: usize, normals: Vec<Vector<T>>) -> Self {
        Cone {
            dim,
            rays: Vec::new(),
            facet_normals: Some(normals),
        }
    }

    /// Cone over a body: generators are the vertices themselves.
    pub fn over_body(body: &ConvexBody<T>, tol: &T) -> Result<Self> {
        Self::from_rays(body.dim(), body.vertices().to_vec(), tol)
    }
}

fn minimal_generators<T: Scalar>(rays: Vec<Vector<T>>, tol: &T) -> Result<Vec<Vector<T>>> {
    let mut canon: Vec<Vector<T>> = rays
        .iter()
        .map(|r| canonical_ray(r, tol))
        .filter(|r| !r.is_zero(tol))
        .collect();
    canon.sort_by(|a, b| a.partial_cmp(b).expect("scalar ordering"));
    canon.dedup();
    // Pointedness: a nontrivial nonnegative combination summing to zero
    // exhibits a line.
    if !canon.is_empty() {
        let dim = canon[0].dim();
        let a = Matrix::from_fn(dim + 1, canon.len(), |i, j| {
            if i < dim {
                canon[j][i].clone()
            } else {
                T::one()
            }
        });
        let mut b = vec![T::zero(); dim];
        b.push(T::one());
        if feasible_point(&a, &Vector(b), tol).is_ok() {
            return Err(Error::NotPointed);
        }
    }
    let mut keep = vec![true; canon.len()];
    for i in 0..canon.len() {
        let others: Vec<Vector<T>> = canon
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i && keep[*j])
            .map(|(_, v)| v.clone())
            .collect();
        if in_conic_hull(&canon[i], &others, tol) {
            keep[i] = false;
        }
    }
    Ok(canon
        .into_iter()
        .zip(keep)
        .filter(|(_, k)| *k)
        .map(|(v, _)| v)
        .collect())
}

/// Minimal generating set of a cone from either representation. A cone in
/// facet form that contains a line is reported as [`Error::NotPointed`].
pub fn extremal_rays<T: Scalar>(cone: &Cone<T>, tol: &T) -> Result<Vec<Vector<T>>> {
    if let Some(normals) = &cone.facet_normals {
        let dd = cone_from_inequalities(cone.dim, normals, tol);
        if !dd.lineality.is_empty() {
            return Err(Error::NotPointed);
        }
        return Ok(dd.rays);
    }
    minimal_generators(cone.rays.clone(), tol)
}

/// Extremal rays of the dual cone `{h : <h, r> >= 0 for all generators r}`.
/// Pointed whenever the generators span the ambient space.
pub fn dual_cone_rays<T: Scalar>(
    dim: usize,
    generators: &[Vector<T>],
    tol: &T,
) -> Result<Vec<Vector<T>>> {
    let dd = cone_from_inequalities(dim, generators, tol);
    if !dd.lineality.is_empty() {
        return Err(Error::NotPointed);
    }
    Ok(dd.rays)
}

/// True iff the vertex count is one more than the intrinsic dimension.
pub fn is_simplex<T: Scalar>(body: &ConvexBody<T>, tol: &T) -> Result<bool> {
    if body.vertices().is_empty() {
        return Err(Error::DegenerateBody("no vertices".into()));
    }
    Ok(body.vertices().len() == body.intrinsic_dim(tol) + 1)
}

/// True iff the body is affinely isomorphic to `[0,1]^k` for its intrinsic
/// dimension `k`. Checks vertex count `2^k` and facet count `2k`, then
/// builds the candidate affine map from one vertex and its edge-adjacent
/// neighbours and verifies it is a bijection onto the 0/1 cube.
pub fn is_hypercube<T: Scalar>(body: &ConvexBody<T>, tol: &T) -> Result<bool> {
    if body.vertices().is_empty() {
        return Err(Error::DegenerateBody("no vertices".into()));
    }
    let k = body.intrinsic_dim(tol);
    let m = body.vertices().len();
    if k == 0 {
        return Ok(m == 1);
    }
    if k >= usize::BITS as usize || m != 1usize << k {
        return Ok(false);
    }
    let fd = body.facet_description(tol);
    if fd.proper.len() != 2 * k {
        return Ok(false);
    }
    // Tight proper facets per vertex; a k-cube has exactly k per vertex.
    let tight: Vec<Vec<usize>> = body
        .vertices()
        .iter()
        .map(|v| {
            fd.proper
                .iter()
                .enumerate()
                .filter(|(_, f)| approx_eq(&f.normal.dot(v), &f.offset, tol))
                .map(|(i, _)| i)
                .collect()
        })
        .collect();
    if tight.iter().any(|t| t.len() != k) {
        return Ok(false);
    }
    let v0 = &body.vertices()[0];
    let shared = |a: &[usize], b: &[usize]| a.iter().filter(|i| b.contains(i)).count();
    let neighbours: Vec<usize> = (1..m)
        .filter(|&i| shared(&tight[0], &tight[i]) == k - 1)
        .collect();
    if neighbours.len() != k {
        return Ok(false);
    }
    // Candidate affine map: v0 -> 0, each neighbour -> a basis vector.
    let edges: Vec<Vector<T>> = neighbours
        .iter()
        .map(|&i| body.vertices()[i].sub(v0))
        .collect();
    let a = Matrix::from_cols(&edges);
    if a.rank(tol) != k {
        return Ok(false);
    }
    let mut seen = vec![false; m];
    for v in body.vertices() {
        let Some(coords) = a.solve_vec(&v.sub(v0), tol) else {
            return Ok(false);
        };
        let mut index = 0usize;
        for c in coords.iter() {
            if approx_eq(c, &T::zero(), tol) {
                index <<= 1;
            } else if approx_eq(c, &T::one(), tol) {
                index = (index << 1) | 1;
            } else {
                return Ok(false);
            }
        }
        if seen[index] {
            return Ok(false);
        }
        seen[index] = true;
    }
    Ok(seen.into_iter().all(|s| s))
}

/// Moves every vertex a fraction `r` of the way toward `center`.
pub fn shrink_toward<T: Scalar>(
    body: &ConvexBody<T>,
    center: &Vector<T>,
    r: &T,
    tol: &T,
) -> Result<ConvexBody<T>> {
    if *r < T::zero() || *r > T::one() {
        return Err(Error::InvalidShrink(r.repr()));
    }
    if !body.contains(center, tol) {
        return Err(Error::CenterOutsideBody);
    }
    let one_minus = T::one() - r.clone();
    let vertices = body
        .vertices()
        .iter()
        .map(|v| v.scale(&one_minus).add(&center.scale(r)))
        .collect();
    ConvexBody::from_vertices(body.dim(), vertices, tol)
}

/// Moves every vertex outward from `center` by factor `1 + r`.
pub fn expand_from<T: Scalar>(
    body: &ConvexBody<T>,
    center: &Vector<T>,
    r: &T,
    tol: &T,
) -> Result<ConvexBody<T>> {
    if *r < T::zero() {
        return Err(Error::InvalidShrink(r.repr()));
    }
    let factor = T::one() + r.clone();
    let vertices = body
        .vertices()
        .iter()
        .map(|v| v.scale(&factor).sub(&center.scale(r)))
        .collect();
    ConvexBody::from_vertices(body.dim(), vertices, tol)
}
