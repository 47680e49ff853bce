//! Acceptance suite: one test per criterion, each printing a pass/fail
//! line. Everything runs at the stated tolerance — exact rational
//! arithmetic unless a criterion says otherwise.

use std::sync::OnceLock;
use std::time::Instant;

use gptnc::app::{depolarize, robustness_radius};
use gptnc::embed::search::bilinear_search;
use gptnc::embed::{decide, min_d_lower_bound, verify_certificate, Verdict};
use gptnc::geometry::{dual_body, ConvexBody};
use gptnc::gpt::{canonical_simplicial, catalog, is_simplicial, weak_nonclassicality, Gpt};
use gptnc::linalg::{Matrix, Vector};
use gptnc::quasiprob::{frame_decomposition, from_decomposition, from_model, is_positive, to_model};
use gptnc::quotient::{lift_model, project_model, quotient_to_gpt, rebit_theory, OtOntologicalModel};
use gptnc::scalar::{Rat, Scalar};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn zero() -> Rat {
    Rat::zero()
}

fn rq(n: i64, d: i64) -> Rat {
    Rat::from_ratio(n, d)
}

fn pass(criterion: usize, detail: &str) {
    println!("criterion {criterion}: PASS - {detail}");
}

/// Criterion 1: the rebit is embeddable and the produced model reproduces
/// all 24 effect-vertex x state-vertex probabilities exactly, in under
/// five seconds.
#[test]
fn criterion_1_rebit_embeddability() {
    let start = Instant::now();
    let entry = catalog::rebit::<Rat>().unwrap();
    let Verdict::Embeddable { model, .. } = decide(&entry.gpt).unwrap() else {
        panic!("criterion 1: FAIL - rebit reported non-embeddable");
    };
    let mut pairs = 0;
    for e in entry.gpt.effects.vertices() {
        for s in entry.gpt.states.vertices() {
            assert_eq!(
                model.xi_map.mul_vec(e).dot(&model.mu_map.mul_vec(s)),
                e.dot(s),
                "criterion 1: FAIL - model misses a probability"
            );
            pairs += 1;
        }
    }
    assert_eq!(pairs, 24);
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "criterion 1: FAIL - too slow");
    pass(1, &format!("embeddable, 24/24 probabilities exact, {elapsed:.2?}"));
}

/// Criterion 2: the face-counting bound gives exactly 4 and the
/// alternating search finds no 3-state model in 1000 restarts, together
/// certifying the dimension gap, in under a minute.
#[test]
fn criterion_2_rebit_dimension_gap() {
    let start = Instant::now();
    let entry = catalog::rebit::<Rat>().unwrap();
    let bound = min_d_lower_bound(&entry.gpt, &zero());
    assert_eq!(bound, 4, "criterion 2: FAIL - lower bound is {bound}");
    let found = bilinear_search(&entry.gpt, 3, 1000, 0x5eed);
    assert!(
        found.is_none(),
        "criterion 2: FAIL - a 3-state model appeared"
    );
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "criterion 2: FAIL - too slow");
    pass(
        2,
        &format!("lower bound 4, no 3-state model in 1000 restarts, {elapsed:.2?}"),
    );
}

/// Criterion 3: the catalog's reference model carries the published toy
/// values and reproduces the (t, x, z) dot products exactly.
#[test]
fn criterion_3_toy_model_golden_values() {
    let entry = catalog::rebit::<Rat>().unwrap();
    let toy = entry.reference_model.as_ref().unwrap();
    let state = |l: &str| entry.state_labels.iter().find(|(n, _)| n == l).unwrap().1.clone();
    let effect = |l: &str| entry.effect_labels.iter().find(|(n, _)| n == l).unwrap().1.clone();
    let golden_mu = [
        ("|0><0|", [rq(1, 2), rq(1, 2), zero(), zero()]),
        ("|1><1|", [zero(), zero(), rq(1, 2), rq(1, 2)]),
        ("|+><+|", [rq(1, 2), zero(), rq(1, 2), zero()]),
        ("|-><-|", [zero(), rq(1, 2), zero(), rq(1, 2)]),
    ];
    for (label, expected) in golden_mu {
        assert_eq!(
            toy.mu_map.mul_vec(&state(label)),
            Vector(expected.to_vec()),
            "criterion 3: FAIL - mu({label})"
        );
    }
    let golden_xi = [
        ("|0><0|", [1i64, 1, 0, 0]),
        ("|1><1|", [0, 0, 1, 1]),
        ("|+><+|", [1, 0, 1, 0]),
        ("|-><-|", [0, 1, 0, 1]),
    ];
    for (label, expected) in golden_xi {
        assert_eq!(
            toy.xi_map.mul_vec(&effect(label)),
            Vector::from_ints(&expected),
            "criterion 3: FAIL - xi({label})"
        );
    }
    for (_, e) in &entry.effect_labels {
        for (_, s) in &entry.state_labels {
            assert_eq!(
                toy.xi_map.mul_vec(e).dot(&toy.mu_map.mul_vec(s)),
                e.dot(s),
                "criterion 3: FAIL - probability rule"
            );
        }
    }
    pass(3, "toy-model values and all pairwise probabilities exact");
}

struct SuiteInstance {
    dim: usize,
    embeddable: bool,
    simplicial: bool,
    support: usize,
}

/// 200 random no-restriction theories in ambient dimensions 2 to 4,
/// shared between criteria 4 and 7.
fn random_suite() -> &'static Vec<SuiteInstance> {
    static SUITE: OnceLock<Vec<SuiteInstance>> = OnceLock::new();
    SUITE.get_or_init(|| {
        let mut rng = ChaCha8Rng::seed_from_u64(424242);
        let mut out = Vec::with_capacity(200);
        while out.len() < 200 {
            let dim = 2 + out.len() % 3;
            let nverts = rng.gen_range(dim..=dim + 2);
            let verts: Vec<Vector<Rat>> = (0..nverts)
                .map(|_| {
                    let mut coords = vec![Rat::from_int(1)];
                    for _ in 1..dim {
                        coords.push(rq(rng.gen_range(-4i64..=4), rng.gen_range(1i64..=3)));
                    }
                    Vector(coords)
                })
                .collect();
            let Ok(states) = ConvexBody::from_vertices(dim, verts, &zero()) else {
                continue;
            };
            if states.linear_span_rank(&zero()) != dim {
                continue;
            }
            let unit = Vector::basis(dim, 0);
            let Ok(effects) = dual_body(&states, &unit, &zero()) else {
                continue;
            };
            let g = Gpt::new(dim, states, effects, unit);
            let simplicial = is_simplicial(&g, &zero());
            let (embeddable, support) = match decide(&g).unwrap() {
                Verdict::Embeddable { decomposition, .. } => {
                    (true, decomposition.support().len())
                }
                Verdict::NotEmbeddable { .. } => (false, 0),
            };
            out.push(SuiteInstance {
                dim,
                embeddable,
                simplicial,
                support,
            });
        }
        out
    })
}

/// Criterion 4: on 200 random no-restriction GPTs, embeddability and
/// simpliciality agree with zero exceptions; the gbit yields a rational
/// Farkas certificate that re-verifies.
#[test]
fn criterion_4_no_restriction_equivalence() {
    let start = Instant::now();
    let suite = random_suite();
    assert_eq!(suite.len(), 200);
    for (i, inst) in suite.iter().enumerate() {
        assert_eq!(
            inst.embeddable, inst.simplicial,
            "criterion 4: FAIL - instance {i} (dim {}) disagrees",
            inst.dim
        );
    }
    let gbit = catalog::gbit::<Rat>().unwrap();
    let Verdict::NotEmbeddable { certificate, .. } = decide(&gbit.gpt).unwrap() else {
        panic!("criterion 4: FAIL - gbit reported embeddable");
    };
    assert!(
        verify_certificate(&gbit.gpt, &certificate, &zero()).unwrap(),
        "criterion 4: FAIL - gbit certificate does not re-verify"
    );
    pass(
        4,
        &format!(
            "200/200 instances agree, gbit certificate re-verified, {:.2?}",
            start.elapsed()
        ),
    );
}

/// Criterion 5: quotient the rebit's exact table (with a duplicated
/// preparation), decide, lift; the lifted model reproduces the table
/// exactly and is constant on equivalence classes. Projecting a
/// deliberately contextual model fails.
#[test]
fn criterion_5_proposition_1_round_trip() {
    let mut theory = rebit_theory::<Rat>();
    theory.preps.push("P0dup".into());
    let old = theory.table.clone();
    theory.table = Matrix::from_fn(old.nrows(), old.ncols() + 1, |i, j| {
        if j < old.ncols() {
            old.get(i, j).clone()
        } else {
            old.get(i, 0).clone()
        }
    });
    let (g, maps) = quotient_to_gpt(&theory, &zero()).unwrap();
    let Verdict::Embeddable { model, .. } = decide(&g).unwrap() else {
        panic!("criterion 5: FAIL - quotiented rebit not embeddable");
    };
    let lifted = lift_model(&model, &maps, &theory, &zero()).unwrap();
    assert!(
        lifted.is_valid_for(&theory, &zero()),
        "criterion 5: FAIL - lifted model invalid"
    );
    assert_eq!(
        lifted.mu_of("P0"),
        lifted.mu_of("P0dup"),
        "criterion 5: FAIL - equivalent preparations differ"
    );
    assert_eq!(
        lifted.xi_of("0|Z"),
        lifted.xi_of("0|Z2"),
        "criterion 5: FAIL - equivalent effects differ"
    );

    // A contextual model: equivalent preparations with distinct
    // distributions that still reproduce the statistics.
    let half = rq(1, 2);
    let contextual_theory = gptnc::quotient::OperationalTheory::<Rat> {
        preps: vec!["A".into(), "B".into()],
        measurements: vec![gptnc::quotient::Measurement {
            label: "M".into(),
            outcomes: vec!["0".into(), "1".into()],
        }],
        table: Matrix::from_rows(&[
            Vector(vec![half.clone(), half.clone()]),
            Vector(vec![half.clone(), half.clone()]),
        ]),
        relations: gptnc::quotient::Relations::none(),
    };
    let (_, cmaps) = quotient_to_gpt(&contextual_theory, &zero()).unwrap();
    let contextual = OtOntologicalModel {
        lambda: 2,
        mu: vec![
            ("A".into(), Vector::from_ints(&[1, 0])),
            ("B".into(), Vector::from_ints(&[0, 1])),
        ],
        xi: vec![
            ("0|M".into(), Vector(vec![half.clone(), half.clone()])),
            ("1|M".into(), Vector(vec![half.clone(), half])),
        ],
    };
    assert!(
        matches!(
            project_model(&contextual, &cmaps, &zero()),
            Err(gptnc::Error::NotWellDefined(_))
        ),
        "criterion 5: FAIL - contextual model projected"
    );
    pass(5, "table reproduced exactly, duplicates collapse, contextual input rejected");
}

/// Criterion 6: across the catalog, a positive quasiprobability
/// representation exists iff the decision is embeddable, and the
/// model/representation round trips are bitwise exact.
#[test]
fn criterion_6_proposition_2() {
    let mut embeddable_count = 0;
    let mut strong_count = 0;
    for (name, entry) in catalog::standard_entries::<Rat>() {
        match decide(&entry.gpt).unwrap() {
            Verdict::Embeddable { model, .. } => {
                embeddable_count += 1;
                let q = from_model(&model, &entry.gpt);
                assert!(is_positive(&q, &zero()), "criterion 6: FAIL - {name}");
                let back = to_model(&q, &zero()).unwrap();
                assert_eq!(back, model, "criterion 6: FAIL - {name} round trip");
            }
            Verdict::NotEmbeddable { .. } => {
                strong_count += 1;
                // The exact decision certifies no positive representation
                // exists; the generic signed frame exhibits the negativity.
                let pairs = frame_decomposition(&entry.gpt, &zero()).unwrap();
                let q = from_decomposition(&entry.gpt, &pairs, &zero()).unwrap();
                assert!(
                    !is_positive(&q, &zero()),
                    "criterion 6: FAIL - {name} frame unexpectedly positive"
                );
                assert!(
                    matches!(to_model(&q, &zero()), Err(gptnc::Error::NotPositive)),
                    "criterion 6: FAIL - {name}"
                );
            }
        }
    }
    pass(
        6,
        &format!("{embeddable_count} positive, {strong_count} certified negative, round trips bitwise"),
    );
}

/// Criterion 7: every basic LP solution's support is at most dim(V)^2
/// across the random suite.
#[test]
fn criterion_7_dimension_bound() {
    let suite = random_suite();
    for (i, inst) in suite.iter().enumerate() {
        if inst.embeddable {
            assert!(
                inst.support <= inst.dim * inst.dim,
                "criterion 7: FAIL - instance {i} has support {} > {}",
                inst.support,
                inst.dim * inst.dim
            );
        }
    }
    let max_support = suite.iter().map(|i| i.support).max().unwrap();
    pass(
        7,
        &format!("basic-solution support <= dim^2 on 200 instances (max seen {max_support})"),
    );
}

/// Criterion 8: the gbit's bisected depolarizing threshold is
/// reproducible and brackets the verdict flip at 1e-3. The numeric value
/// is a frozen regression constant from the first computation.
#[test]
fn criterion_8_robustness_monotonicity() {
    let gbit = catalog::gbit::<Rat>().unwrap();
    let r1 = robustness_radius(&gbit.gpt).unwrap();
    let r2 = robustness_radius(&gbit.gpt).unwrap();
    assert_eq!(r1, r2, "criterion 8: FAIL - not reproducible");
    // Regression constant: midpoint of the 2^-11 bracket around the
    // threshold (the exact threshold is 1 - 1/sqrt(2) ~ 0.29289).
    assert_eq!(r1, rq(1199, 4096), "criterion 8: FAIL - regression value moved");
    let shift = rq(1, 1000);
    let above = depolarize(&gbit.gpt, &(r1.clone() + shift.clone())).unwrap();
    let below = depolarize(&gbit.gpt, &(r1.clone() - shift)).unwrap();
    assert!(
        decide(&above).unwrap().is_embeddable(),
        "criterion 8: FAIL - r* + 1e-3 not embeddable"
    );
    assert!(
        !decide(&below).unwrap().is_embeddable(),
        "criterion 8: FAIL - r* - 1e-3 embeddable"
    );
    pass(8, &format!("r* = {} ~ {:.6}, flip bracketed at 1e-3", r1.repr(), r1.to_f64()));
}

/// Criterion 9: weak-nonclassicality flags match the hypercube/simplex
/// characterizations.
#[test]
fn criterion_9_weak_nonclassicality_flags() {
    for d in 1..=4 {
        let g: Gpt<Rat> = canonical_simplicial(d).unwrap().to_gpt();
        let flags = weak_nonclassicality(&g, &zero());
        assert!(
            !flags.incompatibility && !flags.mixture_ambiguity,
            "criterion 9: FAIL - classical({d}) flagged"
        );
    }
    for name in ["rebit", "gbit"] {
        let entry = match name {
            "rebit" => catalog::rebit::<Rat>().unwrap(),
            _ => catalog::gbit::<Rat>().unwrap(),
        };
        let flags = weak_nonclassicality(&entry.gpt, &zero());
        assert!(
            flags.incompatibility && flags.mixture_ambiguity,
            "criterion 9: FAIL - {name} not flagged"
        );
    }
    pass(9, "simplicial theories unflagged; rebit and gbit doubly flagged");
}
