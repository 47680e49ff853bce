//! Cross-module integration: quotient idempotence, equivalence-map
//! properties, and the model transfer between theory and GPT levels.

use gptnc::embed::{decide, Verdict};
use gptnc::gpt::{catalog, validate, verify_equivalence, Gpt, GptEquivalenceMaps};
use gptnc::linalg::{Matrix, Vector};
use gptnc::quotient::{
    lift_model, quotient_to_gpt, theory_from_gpt, verify_quotient,
};
use gptnc::scalar::{Rat, Scalar};
use num_traits::Zero;

fn zero() -> Rat {
    Rat::zero()
}

/// Equivalence maps from a labeled vertex correspondence: solve omega on
/// an independent subset of source states, take epsilon as the inverse
/// transpose.
fn maps_from_states(
    src: &[Vector<Rat>],
    dst: &[Vector<Rat>],
) -> GptEquivalenceMaps<Rat> {
    let idx = gptnc::linalg::independent_subset(src, &zero());
    let s = Matrix::from_cols(&idx.iter().map(|&i| src[i].clone()).collect::<Vec<_>>());
    let d = Matrix::from_cols(&idx.iter().map(|&i| dst[i].clone()).collect::<Vec<_>>());
    let omega = d.mat_mul(&s.inverse(&zero()).unwrap());
    let epsilon = omega.inverse(&zero()).unwrap().transpose();
    GptEquivalenceMaps { omega, epsilon }
}

/// Effects extended by their complements `u - e`: the body the table
/// re-ingestion reconstructs. Equals the original body whenever it is
/// complement-closed (every full dual is).
fn complement_closure(g: &Gpt<Rat>) -> Gpt<Rat> {
    let mut verts = g.effects.vertices().to_vec();
    for e in g.effects.vertices() {
        verts.push(g.unit.sub(e));
    }
    let effects =
        gptnc::geometry::ConvexBody::from_vertices(g.dim, verts, &zero()).unwrap();
    Gpt::new(g.dim, g.states.clone(), effects, g.unit.clone())
}

#[test]
fn quotient_is_idempotent_up_to_equivalence() {
    // Re-ingesting a GPT's own vertex pairing table returns a GPT
    // equivalent to the complement closure of the original (the table
    // format completes each effect into a binary measurement), with the
    // correspondence given by the preparation labels.
    for (name, entry) in catalog::standard_entries::<Rat>() {
        let theory = theory_from_gpt(&entry.gpt);
        let (g2, maps) = quotient_to_gpt(&theory, &zero()).unwrap();
        assert!(verify_quotient(&theory, &g2, &maps, &zero()), "{name}");
        assert_eq!(g2.dim, entry.gpt.dim, "{name}: rank mismatch");
        let closed = complement_closure(&entry.gpt);
        let src: Vec<Vector<Rat>> = theory
            .preps
            .iter()
            .map(|p| maps.state(p).unwrap().clone())
            .collect();
        let dst: Vec<Vector<Rat>> = closed.states.vertices().to_vec();
        let eq_maps = maps_from_states(&src, &dst);
        assert!(
            verify_equivalence(&g2, &closed, &eq_maps, &zero()).unwrap(),
            "{name}: quotient of own table is not equivalent"
        );
    }
}

#[test]
fn equivalence_is_symmetric_under_inverted_maps() {
    let entry = catalog::rebit::<Rat>().unwrap();
    let theory = theory_from_gpt(&entry.gpt);
    let (g2, maps) = quotient_to_gpt(&theory, &zero()).unwrap();
    let src: Vec<Vector<Rat>> = theory
        .preps
        .iter()
        .map(|p| maps.state(p).unwrap().clone())
        .collect();
    let eq = maps_from_states(&src, entry.gpt.states.vertices());
    assert!(verify_equivalence(&g2, &entry.gpt, &eq, &zero()).unwrap());
    let inverted = GptEquivalenceMaps {
        omega: eq.omega.inverse(&zero()).unwrap(),
        epsilon: eq.epsilon.inverse(&zero()).unwrap(),
    };
    assert!(verify_equivalence(&entry.gpt, &g2, &inverted, &zero()).unwrap());
}

#[test]
fn rotated_copy_is_equivalent_via_rotation_and_inverse_transpose() {
    // Rational rotation by the 3-4-5 angle in the (x, z) plane fixes the
    // unit functional and preserves dot products by adjointness.
    let entry = catalog::rebit::<Rat>().unwrap();
    let g = &entry.gpt;
    let c = Rat::from_ratio(3, 5);
    let s = Rat::from_ratio(4, 5);
    let rot = Matrix::from_rows(&[
        Vector(vec![Rat::from_int(1), Rat::zero(), Rat::zero()]),
        Vector(vec![Rat::zero(), c.clone(), -s.clone()]),
        Vector(vec![Rat::zero(), s, c]),
    ]);
    let rotate_body = |b: &gptnc::geometry::ConvexBody<Rat>| {
        gptnc::geometry::ConvexBody::from_vertices(
            3,
            b.vertices().iter().map(|v| rot.mul_vec(v)).collect(),
            &zero(),
        )
        .unwrap()
    };
    // Rotations are orthogonal, so the inverse transpose is the rotation
    // itself and both bodies transform by the same map.
    let h = Gpt::new(
        3,
        rotate_body(&g.states),
        rotate_body(&g.effects),
        rot.mul_vec(&g.unit),
    );
    assert!(validate(&h, &zero()).is_valid());
    let maps = GptEquivalenceMaps {
        omega: rot.clone(),
        epsilon: rot.inverse(&zero()).unwrap().transpose(),
    };
    assert!(verify_equivalence(g, &h, &maps, &zero()).unwrap());
}

#[test]
fn vertex_count_mismatch_is_never_equivalent() {
    let rebit = catalog::rebit::<Rat>().unwrap();
    let classical: Gpt<Rat> = gptnc::gpt::canonical_simplicial(3).unwrap().to_gpt();
    let maps = GptEquivalenceMaps {
        omega: Matrix::identity(3),
        epsilon: Matrix::identity(3),
    };
    assert!(!verify_equivalence(&rebit.gpt, &classical, &maps, &zero()).unwrap());
}

#[test]
fn lifted_models_assign_equal_rows_to_equivalent_procedures() {
    let entry = catalog::rebit::<Rat>().unwrap();
    let mut theory = gptnc::quotient::rebit_theory::<Rat>();
    // Duplicate a preparation column: P0b is operationally equivalent to P0.
    theory.preps.push("P0b".into());
    let old = theory.table.clone();
    theory.table = Matrix::from_fn(old.nrows(), old.ncols() + 1, |i, j| {
        if j < old.ncols() {
            old.get(i, j).clone()
        } else {
            old.get(i, 0).clone()
        }
    });
    theory.validate(&zero()).unwrap();

    let (g, maps) = quotient_to_gpt(&theory, &zero()).unwrap();
    let Verdict::Embeddable { model, .. } = decide(&g).unwrap() else {
        panic!("quotient of the rebit table embeds");
    };
    let lifted = lift_model(&model, &maps, &theory, &zero()).unwrap();
    assert!(lifted.is_valid_for(&theory, &zero()));
    assert_eq!(lifted.mu_of("P0"), lifted.mu_of("P0b"));
    assert_eq!(lifted.xi_of("0|Z"), lifted.xi_of("0|Z2"));
    let _ = entry;
}

#[test]
fn proposition_2_consistency_across_the_catalog() {
    // A positive representation exists exactly when the decision is
    // embeddable: embeddable entries yield positive representations from
    // their models; non-embeddable entries admit only signed frames.
    use gptnc::quasiprob::{frame_decomposition, from_decomposition, from_model, is_positive};
    for (name, entry) in catalog::standard_entries::<Rat>() {
        match decide(&entry.gpt).unwrap() {
            Verdict::Embeddable { model, .. } => {
                let q = from_model(&model, &entry.gpt);
                assert!(is_positive(&q, &zero()), "{name}");
            }
            Verdict::NotEmbeddable { .. } => {
                let pairs = frame_decomposition(&entry.gpt, &zero()).unwrap();
                let q = from_decomposition(&entry.gpt, &pairs, &zero()).unwrap();
                assert!(!is_positive(&q, &zero()), "{name}");
            }
        }
    }
}
