//! Quasiprobability representations of a GPT.
//!
//! A quasiprobability representation assigns to every state a real-valued
//! function over the ontic set summing to one, and to every effect a
//! real-valued quasiresponse function, such that the classical-looking sum
//! `sum_l xi(e)(l) mu(s)(l)` reproduces every probability. Positive
//! representations (all values in `[0,1]` on the state and effect bodies)
//! carry exactly the same data as ontological models; negativity measures
//! the failure of positivity.

use crate::embed::OntologicalModel;
use crate::error::{Error, Result};
use crate::gpt::Gpt;
use crate::linalg::{Matrix, Vector};
use crate::scalar::{approx_eq, in_unit_interval, Scalar};

/// A quasiprobability representation, carrying its GPT so that positivity
/// and negativity can be evaluated on the state and effect vertices.
#[derive(Clone, Debug)]
pub struct QuasiRep<T> {
    pub d: usize,
    pub mu_hat: Matrix<T>,
    pub xi_hat: Matrix<T>,
    pub gpt: Gpt<T>,
}

/// Builds the representation induced by an identity decomposition: pairs
/// `(v_l, h_l)` with `sum_l v_l h_l^T` acting as the identity between the
/// effect and state spans and `<u, v_l> = 1`. Then
/// `mu_hat(s)(l) = <h_l, s>` and `xi_hat(e)(l) = <e, v_l>`.
pub fn from_decomposition<T: Scalar>(
    g: &Gpt<T>,
    pairs: &[(Vector<T>, Vector<T>)],
    tol: &T,
) -> Result<QuasiRep<T>> {
    if pairs.is_empty() {
        return Err(Error::NotIdentityDecomposition);
    }
    for (v, _) in pairs {
        if !approx_eq(&g.unit.dot(v), &T::one(), tol) {
            return Err(Error::NotIdentityDecomposition);
        }
    }
    // The operational content of "identity on span(Omega)": the pairing of
    // every effect vertex with every state vertex is reproduced.
    for e in g.effects.vertices() {
        for s in g.states.vertices() {
            let mut acc = T::zero();
            for (v, h) in pairs {
                acc += e.dot(v) * h.dot(s);
            }
            if !approx_eq(&acc, &e.dot(s), tol) {
                return Err(Error::NotIdentityDecomposition);
            }
        }
    }
    let mu_hat = Matrix::from_rows(&pairs.iter().map(|(_, h)| h.clone()).collect::<Vec<_>>());
    let xi_hat = Matrix::from_rows(&pairs.iter().map(|(v, _)| v.clone()).collect::<Vec<_>>());
    let rep = QuasiRep {
        d: pairs.len(),
        mu_hat,
        xi_hat,
        gpt: g.clone(),
    };
    debug_assert!(rep.distributions_normalized(tol));
    Ok(rep)
}

impl<T: Scalar> QuasiRep<T> {
    pub fn mu_values(&self, s: &Vector<T>) -> Vector<T> {
        self.mu_hat.mul_vec(s)
    }

    pub fn xi_values(&self, e: &Vector<T>) -> Vector<T> {
        self.xi_hat.mul_vec(e)
    }

    /// `sum_l mu_hat(s)(l) = 1` on every state vertex.
    pub fn distributions_normalized(&self, tol: &T) -> bool {
        self.gpt.states.vertices().iter().all(|s| {
            let total = self
                .mu_values(s)
                .iter()
                .fold(T::zero(), |acc, v| acc + v.clone());
            approx_eq(&total, &T::one(), tol)
        })
    }

    /// Pointwise `sum_{e in chi} xi_hat(e)(l) = 1` for a measurement
    /// `chi` whose effects sum to the unit.
    pub fn measurement_normalized(&self, chi: &[Vector<T>], tol: &T) -> bool {
        let mut total = Vector::zeros(self.d);
        for e in chi {
            total = total.add(&self.xi_values(e));
        }
        total.iter().all(|v| approx_eq(v, &T::one(), tol))
    }

    /// Probability reproduction on all vertex pairs.
    pub fn reproduces_probabilities(&self, tol: &T) -> bool {
        self.gpt.effects.vertices().iter().all(|e| {
            self.gpt.states.vertices().iter().all(|s| {
                approx_eq(&self.xi_values(e).dot(&self.mu_values(s)), &e.dot(s), tol)
            })
        })
    }
}

/// True iff all values on state vertices and effect vertices lie in
/// `[0, 1]` within `tol`.
pub fn is_positive<T: Scalar>(q: &QuasiRep<T>, tol: &T) -> bool {
    q.gpt
        .states
        .vertices()
        .iter()
        .all(|s| q.mu_values(s).iter().all(|v| in_unit_interval(v, tol)))
        && q.gpt
            .effects
            .vertices()
            .iter()
            .all(|e| q.xi_values(e).iter().all(|v| in_unit_interval(v, tol)))
}

/// Sum-of-negative-parts negativity, maximized over vertices and reported
/// separately for states and effects. Zero exactly on positive
/// representations.
#[derive(Clone, Debug, PartialEq)]
pub struct Negativity<T> {
    pub states: T,
    pub effects: T,
}

impl<T: Scalar> Negativity<T> {
    pub fn total(&self) -> T {
        self.states.clone() + self.effects.clone()
    }
}

pub fn negativity<T: Scalar>(q: &QuasiRep<T>) -> Negativity<T> {
    let neg_sum = |vals: Vector<T>| -> T {
        vals.iter().fold(T::zero(), |acc, v| {
            if *v < T::zero() {
                acc - v.clone()
            } else {
                acc
            }
        })
    };
    let max_over = |sums: Vec<T>| -> T {
        sums.into_iter()
            .fold(T::zero(), |best, v| if v > best { v } else { best })
    };
    Negativity {
        states: max_over(
            q.gpt
                .states
                .vertices()
                .iter()
                .map(|s| neg_sum(q.mu_values(s)))
                .collect(),
        ),
        effects: max_over(
            q.gpt
                .effects
                .vertices()
                .iter()
                .map(|e| neg_sum(q.xi_values(e)))
                .collect(),
        ),
    }
}

/// An ontological model is a positive quasiprobability representation:
/// the conversion is the identity on the underlying data.
pub fn from_model<T: Scalar>(m: &OntologicalModel<T>, g: &Gpt<T>) -> QuasiRep<T> {
    QuasiRep {
        d: m.d,
        mu_hat: m.mu_map.clone(),
        xi_hat: m.xi_map.clone(),
        gpt: g.clone(),
    }
}

/// The reverse identification; requires positivity.
pub fn to_model<T: Scalar>(q: &QuasiRep<T>, tol: &T) -> Result<OntologicalModel<T>> {
    if !is_positive(q, tol) {
        return Err(Error::NotPositive);
    }
    Ok(OntologicalModel {
        d: q.d,
        mu_map: q.mu_hat.clone(),
        xi_map: q.xi_hat.clone(),
    })
}

/// Float heuristic for pushing negativity down at fixed ontic-state count
/// `d`: alternating linear programs with hard probability reproduction
/// and sign penalties on the representation values. Non-certifying — the
/// certifying question of whether a positive representation exists at all
/// is answered by the embedding decision.
pub fn minimize_negativity<T: Scalar>(
    g: &Gpt<T>,
    d: usize,
    restarts: usize,
    seed: u64,
) -> Option<(QuasiRep<f64>, f64)> {
    crate::embed::search::negativity_search(g, d, restarts, seed)
}

/// A signed identity decomposition over the state vertices and their
/// scaled duals (a frame), available for any GPT whose states span. Used
/// to exhibit negativity where no positive representation exists.
pub fn frame_decomposition<T: Scalar>(g: &Gpt<T>, tol: &T) -> Result<Vec<(Vector<T>, Vector<T>)>> {
    let verts = g.states.vertices();
    let s_mat = Matrix::from_cols(verts);
    // h rows solve S H = Id on the span: H = S^+ = S^T (S S^T)^{-1}.
    let gram = s_mat.mat_mul(&s_mat.transpose());
    let inv = gram.inverse(tol).ok_or_else(|| {
        Error::SpanMismatch("states do not span the ambient space".into())
    })?;
    let h_mat = s_mat.transpose().mat_mul(&inv);
    Ok((0..verts.len())
        .map(|i| (verts[i].clone(), h_mat.row(i)))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gpt::catalog;
    use crate::scalar::Rat;
    use num_traits::Zero;

    fn zero() -> Rat {
        Rat::zero()
    }

    #[test]
    fn rebit_toy_pairs_give_the_positive_toy_representation() {
        let entry = catalog::rebit::<Rat>().unwrap();
        let model = entry.reference_model.as_ref().unwrap();
        // The toy model is the decomposition with v_l the xi rows and
        // h_l the mu rows.
        let pairs: Vec<(Vector<Rat>, Vector<Rat>)> = (0..4)
            .map(|l| (model.xi_map.row(l), model.mu_map.row(l)))
            .collect();
        let q = from_decomposition(&entry.gpt, &pairs, &zero()).unwrap();
        assert!(is_positive(&q, &zero()));
        assert_eq!(negativity(&q).total(), Rat::zero());
        assert!(q.reproduces_probabilities(&zero()));
        let mu0 = q.mu_values(&entry.state_labels[0].1);
        assert_eq!(
            mu0,
            Vector(vec![
                Rat::from_ratio(1, 2),
                Rat::from_ratio(1, 2),
                Rat::zero(),
                Rat::zero()
            ])
        );
    }

    #[test]
    fn gbit_frame_decomposition_is_signed() {
        let entry = catalog::gbit::<Rat>().unwrap();
        let pairs = frame_decomposition(&entry.gpt, &zero()).unwrap();
        let q = from_decomposition(&entry.gpt, &pairs, &zero()).unwrap();
        assert!(!is_positive(&q, &zero()));
        let neg = negativity(&q);
        assert!(neg.states > Rat::zero());
        assert!(q.reproduces_probabilities(&zero()));
        assert!(q.distributions_normalized(&zero()));
        assert!(matches!(to_model(&q, &zero()), Err(Error::NotPositive)));
    }

    #[test]
    fn trivial_gpt_pair() {
        let entry = catalog::classical::<Rat>(1).unwrap();
        let u = entry.gpt.unit.clone();
        let q = from_decomposition(&entry.gpt, &[(u.clone(), u)], &zero()).unwrap();
        assert!(is_positive(&q, &zero()));
        assert_eq!(q.mu_values(&Vector::from_ints(&[1])), Vector::from_ints(&[1]));
    }

    #[test]
    fn model_round_trip_is_bitwise() {
        let entry = catalog::rebit::<Rat>().unwrap();
        let model = entry.reference_model.clone().unwrap();
        let q = from_model(&model, &entry.gpt);
        assert!(is_positive(&q, &zero()));
        let back = to_model(&q, &zero()).unwrap();
        assert_eq!(back, model);
    }

    #[test]
    fn bad_decompositions_are_rejected() {
        let entry = catalog::rebit::<Rat>().unwrap();
        let u = entry.gpt.unit.clone();
        // Sums to u u^T, not the identity.
        assert!(matches!(
            from_decomposition(&entry.gpt, &[(u.clone(), u.clone())], &zero()),
            Err(Error::NotIdentityDecomposition)
        ));
        // Normalization <u, v> = 1 violated.
        let pairs = vec![(u.scale(&Rat::from_int(2)), u)];
        assert!(matches!(
            from_decomposition(&entry.gpt, &pairs, &zero()),
            Err(Error::NotIdentityDecomposition)
        ));
    }

    #[test]
    fn measurement_normalization_holds_for_complement_pairs() {
        let entry = catalog::rebit::<Rat>().unwrap();
        let model = entry.reference_model.as_ref().unwrap();
        let q = from_model(model, &entry.gpt);
        let u = entry.gpt.unit.clone();
        let e0 = entry.effect_labels[2].1.clone();
        let complement = u.sub(&e0);
        assert!(q.measurement_normalized(&[e0, complement], &zero()));
        assert!(q.measurement_normalized(&[u], &zero()));
        let negativity_row = negativity(&q);
        assert_eq!(negativity_row.total(), Rat::zero());
    }

    #[test]
    fn negativity_measures_negative_parts() {
        // A hand-made representation with one negative entry of size 1/10.
        let entry = catalog::classical::<Rat>(2).unwrap();
        let g = entry.gpt.clone();
        let d = 2;
        let mu_hat = Matrix::from_rows(&[
            Vector(vec![Rat::from_ratio(11, 10), Rat::from_ratio(-1, 10)]),
            Vector(vec![Rat::from_ratio(-1, 10), Rat::from_ratio(11, 10)]),
        ]);
        let xi_hat = Matrix::identity(2);
        let q = QuasiRep {
            d,
            mu_hat,
            xi_hat,
            gpt: g,
        };
        let neg = negativity(&q);
        assert_eq!(neg.states, Rat::from_ratio(1, 10));
        assert!(!is_positive(&q, &zero()));
    }
}
