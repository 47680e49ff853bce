//! The GPT data model: the quadruple `(V, <.,.>, Omega, E)` with the unit
//! effect, validity checks, canonical simplicial theories, equivalence
//! verification, and weak-nonclassicality diagnostics.
//!
//! The inner product is always the standard dot product on the chosen
//! coordinates. States satisfy `<u, s> = 1`; effects live in the dual body
//! of the state body and contain the zero vector and `u`.

pub mod catalog;

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::geometry::{dual_body, is_hypercube, is_simplex, ConvexBody};
use crate::linalg::{Matrix, Vector};
use crate::scalar::{approx_eq, in_unit_interval, Rat, Scalar};

/// A prepare-measure GPT: ambient dimension, state body, effect body, unit.
#[derive(Clone, Debug, PartialEq)]
pub struct Gpt<T> {
    pub dim: usize,
    pub states: ConvexBody<T>,
    pub effects: ConvexBody<T>,
    pub unit: Vector<T>,
    pub meta: BTreeMap<String, String>,
}

impl<T: Scalar> Gpt<T> {
    pub fn new(
        dim: usize,
        states: ConvexBody<T>,
        effects: ConvexBody<T>,
        unit: Vector<T>,
    ) -> Self {
        Gpt {
            dim,
            states,
            effects,
            unit,
            meta: BTreeMap::new(),
        }
    }

    pub fn with_meta(mut self, key: &str, value: &str) -> Self {
        self.meta.insert(key.into(), value.into());
        self
    }

    /// Probability table `<e_i, s_j>` over effect and state vertices.
    pub fn vertex_table(&self) -> Matrix<T> {
        Matrix::from_fn(
            self.effects.vertices().len(),
            self.states.vertices().len(),
            |i, j| self.effects.vertices()[i].dot(&self.states.vertices()[j]),
        )
    }
}

impl Gpt<f64> {
    /// Lossless lift to the exact backend (floats are rationals).
    pub fn to_exact(&self) -> Result<Gpt<Rat>> {
        let lift = |v: &Vector<f64>| -> Result<Vector<Rat>> {
            v.iter()
                .map(|c| {
                    Rat::from_f64_lossless(*c)
                        .ok_or_else(|| Error::MalformedInput(format!("non-finite value {c}")))
                })
                .collect::<Result<Vec<_>>>()
                .map(Vector)
        };
        let zero = Rat::from_int(0);
        let states = ConvexBody::from_vertices(
            self.dim,
            self.states
                .vertices()
                .iter()
                .map(&lift)
                .collect::<Result<Vec<_>>>()?,
            &zero,
        )?;
        let effects = ConvexBody::from_vertices(
            self.dim,
            self.effects
                .vertices()
                .iter()
                .map(&lift)
                .collect::<Result<Vec<_>>>()?,
            &zero,
        )?;
        let mut g = Gpt::new(self.dim, states, effects, lift(&self.unit)?);
        g.meta = self.meta.clone();
        Ok(g)
    }
}

/// One named validity constraint with its outcome.
#[derive(Clone, Debug)]
pub struct ValidityCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Pass/fail report per GPT constraint; failures are carried, not thrown.
#[derive(Clone, Debug)]
pub struct ValidityReport {
    pub checks: Vec<ValidityCheck>,
}

impl ValidityReport {
    pub fn is_valid(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&ValidityCheck> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }
}

/// Checks normalization, dual containment, presence of 0 and u, tomography
/// ranks, and boundedness.
pub fn validate<T: Scalar>(g: &Gpt<T>, tol: &T) -> ValidityReport {
    let mut checks = Vec::new();

    let mut norm_detail = String::new();
    let mut norm_ok = true;
    for (i, s) in g.states.vertices().iter().enumerate() {
        let val = g.unit.dot(s);
        if !approx_eq(&val, &T::one(), tol) {
            norm_ok = false;
            norm_detail = format!("state vertex {i} has <u, s> = {}", val.repr());
            break;
        }
    }
    checks.push(ValidityCheck {
        name: "state_normalization",
        passed: norm_ok,
        detail: norm_detail,
    });

    let mut dual_ok = true;
    let mut dual_detail = String::new();
    'outer: for (i, e) in g.effects.vertices().iter().enumerate() {
        for (j, s) in g.states.vertices().iter().enumerate() {
            let p = e.dot(s);
            if !in_unit_interval(&p, tol) {
                dual_ok = false;
                dual_detail = format!("<e_{i}, s_{j}> = {} outside [0, 1]", p.repr());
                break 'outer;
            }
        }
    }
    checks.push(ValidityCheck {
        name: "effects_in_dual",
        passed: dual_ok,
        detail: dual_detail,
    });

    let zero_in = g.effects.contains(&Vector::zeros(g.dim), tol);
    checks.push(ValidityCheck {
        name: "contains_zero",
        passed: zero_in,
        detail: if zero_in {
            String::new()
        } else {
            "0 not in E".into()
        },
    });
    let unit_in = g.effects.contains(&g.unit, tol);
    checks.push(ValidityCheck {
        name: "contains_unit",
        passed: unit_in,
        detail: if unit_in {
            String::new()
        } else {
            "u not in E".into()
        },
    });

    // Tomography: the Gram matrix between effect and state vertices has
    // rank equal to the dimension of each span.
    let gram = g.vertex_table();
    let gram_rank = gram.rank(tol);
    let state_rank = g.states.linear_span_rank(tol);
    let effect_rank = g.effects.linear_span_rank(tol);
    let tomo_ok = gram_rank == state_rank && gram_rank == effect_rank;
    checks.push(ValidityCheck {
        name: "tomography",
        passed: tomo_ok,
        detail: format!(
            "gram rank {gram_rank}, state span {state_rank}, effect span {effect_rank}"
        ),
    });

    checks.push(ValidityCheck {
        name: "bounded",
        passed: true,
        detail: "vertex representation is bounded by construction".into(),
    });

    ValidityReport { checks }
}

/// A simplicial GPT in canonical form: states are the unit simplex on the
/// standard basis, effects its dual hypercube, unit the all-ones vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialGpt {
    pub d: usize,
}

impl SimplicialGpt {
    pub fn to_gpt<T: Scalar>(&self) -> Gpt<T> {
        let d = self.d;
        let tol = T::default_tol();
        let states: Vec<Vector<T>> = (0..d).map(|i| Vector::basis(d, i)).collect();
        // Effect vertices are the subset sums of basis vectors: 2^d of
        // them, including 0 (empty set) and u (full set).
        let mut effects = Vec::with_capacity(1 << d);
        for mask in 0..(1u64 << d) {
            let mut v = Vector::zeros(d);
            for i in 0..d {
                if mask & (1 << i) != 0 {
                    v[i] = T::one();
                }
            }
            effects.push(v);
        }
        let states = ConvexBody::from_vertices(d, states, &tol).expect("simplex vertices");
        let effects = ConvexBody::from_vertices(d, effects, &tol).expect("hypercube vertices");
        Gpt::new(d, states, effects, Vector::ones(d)).with_meta("name", &format!("classical({d})"))
    }
}

/// The canonical simplicial GPT of dimension `d`.
pub fn canonical_simplicial(d: usize) -> Result<SimplicialGpt> {
    if d < 1 {
        return Err(Error::InvalidDimension(d));
    }
    Ok(SimplicialGpt { d })
}

/// True iff the state body is a simplex and the effect body equals its
/// full dual as a set.
pub fn is_simplicial<T: Scalar>(g: &Gpt<T>, tol: &T) -> bool {
    match is_simplex(&g.states, tol) {
        Ok(true) => satisfies_no_restriction(g, tol),
        _ => false,
    }
}

/// True iff the effect body equals the full dual of the state body.
pub fn satisfies_no_restriction<T: Scalar>(g: &Gpt<T>, tol: &T) -> bool {
    match dual_body(&g.states, &g.unit, tol) {
        Ok(dual) => g.effects.equal_as_set(&dual, tol),
        Err(_) => false,
    }
}

/// Weak-nonclassicality flags: measurement incompatibility holds iff the
/// effect body is not a hypercube, ambiguity of mixtures iff the state
/// body is not a simplex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WeakNonclassicality {
    pub incompatibility: bool,
    pub mixture_ambiguity: bool,
}

pub fn weak_nonclassicality<T: Scalar>(g: &Gpt<T>, tol: &T) -> WeakNonclassicality {
    WeakNonclassicality {
        incompatibility: !is_hypercube(&g.effects, tol).unwrap_or(false),
        mixture_ambiguity: !is_simplex(&g.states, tol).unwrap_or(false),
    }
}

/// Candidate linear isomorphisms exhibiting GPT equivalence.
#[derive(Clone, Debug)]
pub struct GptEquivalenceMaps<T> {
    /// State map `omega : V_g -> V_h`.
    pub omega: Matrix<T>,
    /// Effect map `epsilon : V_g -> V_h`.
    pub epsilon: Matrix<T>,
}

/// Verifies that the maps witness equivalence: both invertible,
/// `omega(Omega_g) = Omega_h` and `epsilon(E_g) = E_h` as vertex sets, and
/// all vertex-pair inner products preserved.
pub fn verify_equivalence<T: Scalar>(
    g: &Gpt<T>,
    h: &Gpt<T>,
    maps: &GptEquivalenceMaps<T>,
    tol: &T,
) -> Result<bool> {
    if maps.omega.ncols() != g.dim || maps.epsilon.ncols() != g.dim {
        return Err(Error::DimensionMismatch {
            expected: g.dim,
            got: maps.omega.ncols().max(maps.epsilon.ncols()),
        });
    }
    if maps.omega.nrows() != h.dim || maps.epsilon.nrows() != h.dim {
        return Err(Error::DimensionMismatch {
            expected: h.dim,
            got: maps.omega.nrows().max(maps.epsilon.nrows()),
        });
    }
    // Linear isomorphisms require equal dimensions.
    if g.dim != h.dim {
        return Ok(false);
    }
    if maps.omega.inverse(tol).is_none() || maps.epsilon.inverse(tol).is_none() {
        return Ok(false);
    }
    let mapped_states = ConvexBody::from_vertices(
        h.dim,
        g.states
            .vertices()
            .iter()
            .map(|s| maps.omega.mul_vec(s))
            .collect(),
        tol,
    )?;
    if !mapped_states.equal_as_set(&h.states, tol) {
        return Ok(false);
    }
    let mapped_effects = ConvexBody::from_vertices(
        h.dim,
        g.effects
            .vertices()
            .iter()
            .map(|e| maps.epsilon.mul_vec(e))
            .collect(),
        tol,
    )?;
    if !mapped_effects.equal_as_set(&h.effects, tol) {
        return Ok(false);
    }
    for e in g.effects.vertices() {
        for s in g.states.vertices() {
            let lhs = e.dot(s);
            let rhs = maps.epsilon.mul_vec(e).dot(&maps.omega.mul_vec(s));
            if !approx_eq(&lhs, &rhs, tol) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rat;
    use num_traits::Zero;

    fn zero() -> Rat {
        Rat::zero()
    }

    #[test]
    fn canonical_simplicial_shapes() {
        let g2: Gpt<Rat> = canonical_simplicial(2).unwrap().to_gpt();
        assert_eq!(g2.states.vertices().len(), 2);
        assert_eq!(g2.effects.vertices().len(), 4);
        let g1: Gpt<Rat> = canonical_simplicial(1).unwrap().to_gpt();
        assert_eq!(g1.states.vertices().len(), 1);
        assert_eq!(g1.effects.vertices().len(), 2);
        let g3: Gpt<Rat> = canonical_simplicial(3).unwrap().to_gpt();
        assert_eq!(g3.effects.vertices().len(), 8);
        assert!(is_hypercube(&g3.effects, &zero()).unwrap());
        assert!(matches!(canonical_simplicial(0), Err(Error::InvalidDimension(0))));
    }

    #[test]
    fn simplicial_gpts_are_valid_and_simplicial() {
        for d in 1..=4 {
            let g: Gpt<Rat> = canonical_simplicial(d).unwrap().to_gpt();
            assert!(validate(&g, &zero()).is_valid(), "classical({d}) valid");
            assert!(is_simplicial(&g, &zero()));
            assert!(satisfies_no_restriction(&g, &zero()));
            let flags = weak_nonclassicality(&g, &zero());
            assert!(!flags.incompatibility);
            assert!(!flags.mixture_ambiguity);
        }
    }

    #[test]
    fn simplex_hypercube_duality_across_dims() {
        for d in 2..=6 {
            let g: Gpt<Rat> = canonical_simplicial(d).unwrap().to_gpt();
            assert!(is_simplex(&g.states, &zero()).unwrap());
            let dual = dual_body(&g.states, &g.unit, &zero()).unwrap();
            assert!(is_hypercube(&dual, &zero()).unwrap(), "dual of simplex d={d}");
        }
    }

    #[test]
    fn identity_maps_witness_self_equivalence() {
        let g: Gpt<Rat> = canonical_simplicial(3).unwrap().to_gpt();
        let maps = GptEquivalenceMaps {
            omega: Matrix::identity(3),
            epsilon: Matrix::identity(3),
        };
        assert!(verify_equivalence(&g, &g, &maps, &zero()).unwrap());
    }
}
