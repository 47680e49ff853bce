//! Ingestion and noise-robust verdict behaviour.

use gptnc::app::{depolarize, ingest, lift_theory, robustness_radius, verdict, RobustVerdict};
use gptnc::gpt::{canonical_simplicial, catalog, validate, verify_equivalence, Gpt, GptEquivalenceMaps};
use gptnc::io::theory_to_csv;
use gptnc::linalg::{Matrix, Vector};
use gptnc::quotient::{quotient_to_gpt, theory_from_gpt, rebit_theory};
use gptnc::scalar::{Rat, Scalar};
use num_traits::Zero;

fn zero() -> Rat {
    Rat::zero()
}

#[test]
fn exact_rebit_csv_round_trips_to_an_equivalent_gpt() {
    let theory = rebit_theory::<f64>();
    let csv = theory_to_csv(&theory);
    let (parsed, _) = ingest(&csv, None, 0.0).unwrap();
    let exact = lift_theory(&parsed).unwrap();
    let (g, maps) = quotient_to_gpt(&exact, &zero()).unwrap();
    assert!(validate(&g, &zero()).is_valid());

    let cat = catalog::rebit::<Rat>().unwrap();
    let src: Vec<Vector<Rat>> = ["P0", "P1", "P+"]
        .iter()
        .map(|p| maps.state(p).unwrap().clone())
        .collect();
    let dst: Vec<Vector<Rat>> = cat.state_labels[..3].iter().map(|(_, s)| s.clone()).collect();
    let omega = Matrix::from_cols(&dst).mat_mul(&Matrix::from_cols(&src).inverse(&zero()).unwrap());
    let epsilon = omega.inverse(&zero()).unwrap().transpose();
    let eq = GptEquivalenceMaps { omega, epsilon };
    assert!(verify_equivalence(&g, &cat.gpt, &eq, &zero()).unwrap());
}

#[test]
fn perturbed_rebit_ingests_with_rank_three_at_loose_tolerance() {
    let mut theory = rebit_theory::<f64>();
    // Deterministic perturbation up to 1e-3, preserving measurement sums:
    // shift probability between the two outcomes of each measurement.
    let cols = theory.table.ncols();
    for m in 0..4 {
        for j in 0..cols {
            let delta = 7.3e-4 * (((m * cols + j) % 5) as f64 - 2.0) / 2.0;
            let hi = *theory.table.get(2 * m, j);
            let lo = *theory.table.get(2 * m + 1, j);
            let delta = delta.clamp(-(hi.min(1.0 - lo)), lo.min(1.0 - hi));
            *theory.table.get_mut(2 * m, j) = hi + delta;
            *theory.table.get_mut(2 * m + 1, j) = lo - delta;
        }
    }
    let csv = theory_to_csv(&theory);
    let (parsed, _) = ingest(&csv, None, 2e-3).unwrap();
    let (g, _) = quotient_to_gpt(&parsed, &1e-2).unwrap();
    assert_eq!(g.meta.get("quotient_rank").map(String::as_str), Some("3"));
    assert_eq!(g.dim, 3);
}

#[test]
fn normalization_violations_are_rejected() {
    let csv = "prep,h|M,t|M\nP0,1.0,0.5\nP1,0,1\n";
    assert!(matches!(
        ingest(csv, None, 0.0),
        Err(gptnc::Error::NormalizationViolation(_))
    ));
    // The same table is accepted once epsilon allows the deviation.
    assert!(ingest(csv, None, 0.3).is_ok());
}

#[test]
fn robustness_radius_is_zero_for_embeddable_theories() {
    let rebit = catalog::rebit::<Rat>().unwrap();
    assert_eq!(robustness_radius(&rebit.gpt).unwrap(), zero());
    for d in 1..=3 {
        let g: Gpt<Rat> = canonical_simplicial(d).unwrap().to_gpt();
        assert_eq!(robustness_radius(&g).unwrap(), zero());
    }
}

#[test]
fn depolarized_gpts_stay_valid_and_nested() {
    let gbit = catalog::gbit::<Rat>().unwrap();
    let quarter = Rat::from_ratio(1, 4);
    let half = Rat::from_ratio(1, 2);
    let g1 = depolarize(&gbit.gpt, &quarter).unwrap();
    let g2 = depolarize(&gbit.gpt, &half).unwrap();
    assert!(validate(&g1, &zero()).is_valid());
    assert!(validate(&g2, &zero()).is_valid());
    assert!(g1.states.contains_body(&g2.states, &zero()));
    assert!(g1.effects.contains_body(&g2.effects, &zero()));
    // 0 and u stay fixed.
    assert!(g2.effects.vertices().contains(&Vector::zeros(3)));
    assert!(g2.effects.vertices().contains(&gbit.gpt.unit));
}

#[test]
fn exact_tables_get_decisive_verdicts() {
    let gbit = catalog::gbit::<f64>().unwrap();
    let csv = theory_to_csv(&theory_from_gpt(&gbit.gpt));
    let (_, nt) = ingest(&csv, None, 0.0).unwrap();
    assert!(matches!(
        verdict(&nt, 1e-9).unwrap(),
        RobustVerdict::Nonclassical { .. }
    ));

    let classical = catalog::classical::<f64>(3).unwrap();
    let csv = theory_to_csv(&theory_from_gpt(&classical.gpt));
    let (_, nt) = ingest(&csv, None, 0.0).unwrap();
    assert!(matches!(
        verdict(&nt, 1e-9).unwrap(),
        RobustVerdict::Classical { .. }
    ));
}

#[test]
fn large_uncertainty_never_claims_nonclassicality() {
    // Entrywise uncertainty beyond the gbit's robustness radius: the
    // verdict may be classical or inconclusive, never nonclassical.
    let gbit = catalog::gbit::<f64>().unwrap();
    let csv = theory_to_csv(&theory_from_gpt(&gbit.gpt));
    for epsilon in [0.05, 0.2, 0.35] {
        let (_, nt) = ingest(&csv, None, epsilon).unwrap();
        let v = verdict(&nt, 1e-6).unwrap();
        assert!(
            !matches!(v, RobustVerdict::Nonclassical { .. }),
            "epsilon {epsilon} produced a nonclassical verdict"
        );
    }
}

#[test]
fn small_uncertainty_keeps_the_gbit_nonclassical() {
    // With a tiny epsilon the inner approximation still fails to embed.
    let gbit = catalog::gbit::<f64>().unwrap();
    let csv = theory_to_csv(&theory_from_gpt(&gbit.gpt));
    let (_, nt) = ingest(&csv, None, 1e-4).unwrap();
    match verdict(&nt, 1e-6).unwrap() {
        RobustVerdict::Nonclassical { margin, .. } => {
            assert!(margin > zero());
        }
        other => panic!("expected nonclassical, got {other:?}"),
    }
}

#[test]
fn growing_epsilon_passes_through_inconclusive() {
    // Verdicts along an epsilon sweep never flip between decisive
    // branches without an inconclusive region in between.
    let gbit = catalog::gbit::<f64>().unwrap();
    let csv = theory_to_csv(&theory_from_gpt(&gbit.gpt));
    let mut labels = Vec::new();
    for epsilon in [0.0, 1e-4, 1e-3, 0.05, 0.2, 0.4] {
        let (_, nt) = ingest(&csv, None, epsilon).unwrap();
        let label = match verdict(&nt, 1e-6).unwrap() {
            RobustVerdict::Nonclassical { .. } => "N",
            RobustVerdict::Classical { .. } => "C",
            RobustVerdict::Inconclusive { .. } => "I",
        };
        labels.push(label);
    }
    for pair in labels.windows(2) {
        assert!(
            !(pair[0] == "N" && pair[1] == "C") && !(pair[0] == "C" && pair[1] == "N"),
            "decisive flip without inconclusive: {labels:?}"
        );
    }
    assert_eq!(labels[0], "N");
}

#[test]
fn robustness_radius_is_monotone_under_supersets() {
    // Fewer effects can only make embedding easier, so the radius of a
    // restriction is bounded by the radius of the full theory.
    let gbit = catalog::gbit::<Rat>().unwrap();
    let restricted = catalog::restricted_square::<Rat>(&[0, 2]).unwrap();
    let r_full = robustness_radius(&gbit.gpt).unwrap();
    let r_sub = robustness_radius(&restricted.gpt).unwrap();
    assert!(r_sub <= r_full);

    let polygon4 = catalog::polygon::<Rat>(4, None).unwrap();
    let rebit = catalog::rebit::<Rat>().unwrap();
    let r_poly = robustness_radius(&polygon4.gpt).unwrap();
    let r_rebit = robustness_radius(&rebit.gpt).unwrap();
    assert!(r_rebit <= r_poly);
    assert_eq!(r_rebit, zero());
    assert!(r_poly > zero());
}
