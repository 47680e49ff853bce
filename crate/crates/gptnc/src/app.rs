//! End-user pipeline: data ingestion, depolarizing robustness radii, and
//! noise-robust classicality verdicts via inner/outer approximations.
//!
//! Entrywise table uncertainty propagates to a conservative vertex
//! displacement bound through the operator norms of the factor
//! pseudoinverses, then to barycentric shrink/expand radii through a
//! rational lower bound on the facet depth. The inner approximation is
//! contained in every GPT compatible with the data, so a non-embeddable
//! inner body certifies nonclassicality; the outer pair contains every
//! compatible GPT, so an embeddable outer pair certifies classicality.

use nalgebra::DMatrix;
use num_traits::{One, Signed, Zero};

use crate::embed::{decide, EmbeddingWitness, FarkasCertificate, Verdict};
use crate::error::{Error, Result};
use crate::geometry::{expand_from, shrink_toward, ConvexBody};
use crate::gpt::{Gpt, validate};
use crate::io;
use crate::linalg::{Matrix, Vector};
use crate::quotient::{quotient_to_gpt, OperationalTheory, Relations};
use crate::scalar::{Rat, Scalar};

/// Point estimates plus an entrywise absolute uncertainty radius.
#[derive(Clone, Debug)]
pub struct NoisyTable {
    pub theory: OperationalTheory<f64>,
    pub epsilon: f64,
}

/// Noise-robust classicality verdict. Decisive branches carry the
/// re-verified artifact that justifies them; the margin is the
/// shrink/expand radius at which the decision was made.
#[derive(Clone, Debug)]
pub enum RobustVerdict {
    Nonclassical {
        margin: Rat,
        certificate: FarkasCertificate<Rat>,
    },
    Classical {
        margin: Rat,
        witness: EmbeddingWitness<Rat>,
    },
    Inconclusive {
        gap: Rat,
    },
}

/// Parses and validates a CSV table with optional relations sidecar.
/// Row sums may deviate from one by at most the uncertainty the epsilon
/// radius allows; larger violations are rejected.
pub fn ingest(
    csv_text: &str,
    relations_json: Option<&str>,
    epsilon: f64,
) -> Result<(OperationalTheory<f64>, NoisyTable)> {
    if epsilon < 0.0 {
        return Err(Error::MalformedInput("epsilon must be nonnegative".into()));
    }
    let mut theory: OperationalTheory<f64> = io::parse_theory_csv(csv_text)?;
    if let Some(rel) = relations_json {
        theory.relations = io::parse_relations(rel)?;
    }
    let slack = 1e-9;
    for i in 0..theory.table.nrows() {
        for j in 0..theory.table.ncols() {
            let v = *theory.table.get(i, j);
            if v < -epsilon - slack || v > 1.0 + epsilon + slack {
                return Err(Error::NormalizationViolation(format!(
                    "entry ({i}, {j}) = {v} outside [0, 1] beyond epsilon"
                )));
            }
        }
    }
    let mut row = 0;
    for m in &theory.measurements {
        let allowance = m.outcomes.len() as f64 * epsilon + slack;
        for p in 0..theory.preps.len() {
            let total: f64 = (0..m.outcomes.len())
                .map(|k| *theory.table.get(row + k, p))
                .sum();
            if (total - 1.0).abs() > allowance {
                return Err(Error::NormalizationViolation(format!(
                    "measurement `{}` sums to {total} on `{}`",
                    m.label, theory.preps[p]
                )));
            }
        }
        row += m.outcomes.len();
    }
    // Point estimates are probabilities: clamp the epsilon-sized overshoot
    // back into [0, 1].
    for i in 0..theory.table.nrows() {
        for j in 0..theory.table.ncols() {
            let v = theory.table.get(i, j).clamp(0.0, 1.0);
            *theory.table.get_mut(i, j) = v;
        }
    }
    // Relations must hold within the epsilon allowance.
    let rel_tol = 4.0 * epsilon + slack;
    theory.validate(&rel_tol)?;
    let nt = NoisyTable {
        theory: theory.clone(),
        epsilon,
    };
    Ok((theory, nt))
}

/// Depolarized GPT `g_r`: states shrink toward their barycenter `m`,
/// effects map through `e -> (1 - r) e + r <e, m> u`, which fixes the zero
/// effect and the unit and keeps the pair a valid GPT.
pub fn depolarize<T: Scalar>(g: &Gpt<T>, r: &T) -> Result<Gpt<T>> {
    let tol = T::default_tol();
    if *r < T::zero() || *r > T::one() {
        return Err(Error::InvalidShrink(r.repr()));
    }
    let m = g.states.barycenter();
    let states = shrink_toward(&g.states, &m, r, &tol)?;
    let one_minus = T::one() - r.clone();
    let effects: Vec<Vector<T>> = g
        .effects
        .vertices()
        .iter()
        .map(|e| {
            let toward_unit = g.unit.scale(&(r.clone() * e.dot(&m)));
            e.scale(&one_minus).add(&toward_unit)
        })
        .collect();
    let effects = ConvexBody::from_vertices(g.dim, effects, &tol)?;
    Ok(Gpt::new(g.dim, states, effects, g.unit.clone()))
}

/// The depolarizing-noise threshold: the least `r` (to within `2^-11`)
/// at which `g_r` becomes simplex-embeddable. Embeddability is monotone
/// in `r` (the depolarized bodies are nested), so bisection brackets the
/// threshold; returns zero when `g` is already embeddable.
pub fn robustness_radius<T: Scalar>(g: &Gpt<T>) -> Result<T> {
    if decide(g)?.is_embeddable() {
        return Ok(T::zero());
    }
    let full = depolarize(g, &T::one())?;
    if !decide(&full)?.is_embeddable() {
        return Err(Error::SpanMismatch(
            "fully depolarized theory fails to embed; states may not contain their barycenter"
                .into(),
        ));
    }
    let mut lo = T::zero();
    let mut hi = T::one();
    let half = T::from_ratio(1, 2);
    for _ in 0..11 {
        let mid = (lo.clone() + hi.clone()) * half.clone();
        if decide(&depolarize(g, &mid)?)?.is_embeddable() {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok((lo + hi) * half)
}

/// Conservative vertex-displacement bound from entrywise uncertainty:
/// spectral norm of the pseudoinverse of the opposite factor, times
/// `epsilon` times the column/row norm inflation, with a safety factor
/// of two.
fn displacement_bounds(maps_effects: &Matrix<f64>, maps_states: &Matrix<f64>, epsilon: f64) -> (f64, f64) {
    let pinv_norm = |m: &Matrix<f64>| -> f64 {
        let dm = DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| *m.get(i, j));
        let svd = dm.svd(false, false);
        let min_sv = svd
            .singular_values
            .iter()
            .cloned()
            .filter(|s| *s > 1e-12)
            .fold(f64::INFINITY, f64::min);
        if min_sv.is_finite() {
            1.0 / min_sv
        } else {
            f64::INFINITY
        }
    };
    let m_rows = maps_effects.nrows() as f64;
    let p_cols = maps_states.ncols() as f64;
    let delta_states = 2.0 * pinv_norm(maps_effects) * epsilon * m_rows.sqrt();
    let delta_effects = 2.0 * pinv_norm(maps_states) * epsilon * p_cols.sqrt();
    (delta_states, delta_effects)
}

/// Rational lower bound on the distance from the barycenter to the
/// nearest proper facet (gap over the L1 norm of the facet normal).
fn facet_depth(body: &ConvexBody<Rat>) -> Rat {
    let zero = Rat::zero();
    let c = body.barycenter();
    let fd = body.facet_description(&zero);
    let mut best: Option<Rat> = None;
    for f in &fd.proper {
        let gap = f.offset.clone() - f.normal.dot(&c);
        let norm1 = f
            .normal
            .iter()
            .fold(Rat::zero(), |acc, v| acc + v.abs());
        if norm1.is_zero() {
            continue;
        }
        let depth = gap / norm1;
        if best.as_ref().is_none_or(|b| depth < *b) {
            best = Some(depth);
        }
    }
    best.unwrap_or_else(Rat::zero)
}

fn rationalize_up(x: f64) -> Rat {
    Rat::from_f64_lossless(x * 1.0001 + 1e-12).expect("finite bound")
}

/// Noise-robust verdict. With zero epsilon the point-estimate GPT is
/// decided exactly; otherwise the inner approximation (bodies shrunk by
/// the propagated radius) tests nonclassicality and the outer pair
/// (bodies expanded by it) tests classicality.
pub fn verdict(nt: &NoisyTable, rank_tol: f64) -> Result<RobustVerdict> {
    let zero = Rat::zero();
    let (g_exact, maps) = if nt.epsilon == 0.0 {
        let exact_theory = lift_theory(&nt.theory)?;
        let (g, m) = quotient_to_gpt(&exact_theory, &zero)?;
        (g, exact_to_f64_maps(&m))
    } else {
        let (g_float, m) = quotient_to_gpt(&nt.theory, &rank_tol)?;
        // The float gauge normalizes states only to machine precision;
        // repair <u, s> = 1 exactly after the lossless lift. The repair
        // is far below the displacement bound.
        (repair_lifted(g_float.to_exact()?)?, float_maps(&m))
    };
    debug_assert!(validate(&g_exact, &Rat::from_f64_lossless(1e-9).expect("finite")).is_valid());

    if nt.epsilon == 0.0 {
        return match decide(&g_exact)? {
            Verdict::Embeddable { witness, .. } => Ok(RobustVerdict::Classical {
                margin: Rat::zero(),
                witness,
            }),
            Verdict::NotEmbeddable { certificate, .. } => Ok(RobustVerdict::Nonclassical {
                margin: Rat::zero(),
                certificate,
            }),
        };
    }

    let (effects_mat, states_mat) = maps;
    let (delta_s, delta_e) = displacement_bounds(&effects_mat, &states_mat, nt.epsilon);
    let depth_s = facet_depth(&g_exact.states);
    let depth_e = facet_depth(&g_exact.effects);
    if depth_s.is_zero() || depth_e.is_zero() {
        return Ok(RobustVerdict::Inconclusive { gap: Rat::one() });
    }
    let r_s = rationalize_up(delta_s) / depth_s;
    let r_e = rationalize_up(delta_e) / depth_e;
    if r_s >= Rat::one() || r_e >= Rat::one() {
        return Ok(RobustVerdict::Inconclusive { gap: Rat::one() });
    }

    // Inner approximation: contained in every data-compatible GPT.
    let c_s = g_exact.states.barycenter();
    let c_e = g_exact.effects.barycenter();
    let inner_states = shrink_toward(&g_exact.states, &c_s, &r_s, &zero)?;
    let mut inner_effect_vertices: Vec<Vector<Rat>> = g_exact
        .effects
        .vertices()
        .iter()
        .map(|e| e.scale(&(Rat::one() - r_e.clone())).add(&c_e.scale(&r_e)))
        .collect();
    inner_effect_vertices.push(Vector::zeros(g_exact.dim));
    inner_effect_vertices.push(g_exact.unit.clone());
    let inner_effects = ConvexBody::from_vertices(g_exact.dim, inner_effect_vertices, &zero)?;
    let inner = Gpt::new(g_exact.dim, inner_states, inner_effects, g_exact.unit.clone());
    if let Verdict::NotEmbeddable { certificate, .. } = decide(&inner)? {
        return Ok(RobustVerdict::Nonclassical {
            margin: r_s.clone(),
            certificate,
        });
    }

    // Outer pair: contains every data-compatible GPT. Embeddability of the
    // pair does not require dual containment, so no clipping is needed for
    // the decision itself.
    let outer_states = expand_from(&g_exact.states, &c_s, &r_s, &zero)?;
    let outer_effects = expand_from(&g_exact.effects, &c_e, &r_e, &zero)?;
    let outer = Gpt::new(g_exact.dim, outer_states, outer_effects, g_exact.unit.clone());
    match decide(&outer) {
        Ok(Verdict::Embeddable { witness, .. }) => Ok(RobustVerdict::Classical {
            margin: r_s,
            witness,
        }),
        Ok(Verdict::NotEmbeddable { .. }) | Err(_) => {
            Ok(RobustVerdict::Inconclusive { gap: r_s })
        }
    }
}

/// Repairs a losslessly lifted float GPT: rescales every state vertex
/// onto the `<u, s> = 1` hyperplane and reinstates the zero effect and
/// the unit, which float-tolerance canonicalization may have absorbed
/// into the hull.
fn repair_lifted(g: Gpt<Rat>) -> Result<Gpt<Rat>> {
    let zero = Rat::zero();
    let vertices = g
        .states
        .vertices()
        .iter()
        .map(|s| {
            let norm = g.unit.dot(s);
            if norm.is_zero() {
                return Err(Error::SpanMismatch(
                    "state vertex pairs to zero with the unit".into(),
                ));
            }
            Ok(s.scale(&(Rat::one() / norm)))
        })
        .collect::<Result<Vec<_>>>()?;
    let states = ConvexBody::from_vertices(g.dim, vertices, &zero)?;
    let mut effect_vertices = g.effects.vertices().to_vec();
    effect_vertices.push(Vector::zeros(g.dim));
    effect_vertices.push(g.unit.clone());
    let effects = ConvexBody::from_vertices(g.dim, effect_vertices, &zero)?;
    Ok(Gpt::new(g.dim, states, effects, g.unit.clone()))
}

/// Lossless lift of a float theory into exact arithmetic.
pub fn lift_theory(t: &OperationalTheory<f64>) -> Result<OperationalTheory<Rat>> {
    let table = Matrix::from_fn(t.table.nrows(), t.table.ncols(), |i, j| {
        Rat::from_f64_lossless(*t.table.get(i, j)).expect("finite table entry")
    });
    let relations = Relations {
        mixtures: t
            .relations
            .mixtures
            .iter()
            .map(|m| crate::quotient::MixtureRelation {
                target: m.target.clone(),
                left: m.left.clone(),
                right: m.right.clone(),
                weight: Rat::from_f64_lossless(m.weight).expect("finite weight"),
            })
            .collect(),
        coarse_grainings: t.relations.coarse_grainings.clone(),
    };
    Ok(OperationalTheory {
        preps: t.preps.clone(),
        measurements: t.measurements.clone(),
        table,
        relations,
    })
}

fn exact_to_f64_maps(m: &crate::quotient::QuotientMaps<Rat>) -> (Matrix<f64>, Matrix<f64>) {
    let effects = Matrix::from_rows(
        &m.effect_of
            .iter()
            .map(|(_, v)| Vector(v.to_f64()))
            .collect::<Vec<_>>(),
    );
    let states = Matrix::from_cols(
        &m.state_of
            .iter()
            .map(|(_, v)| Vector(v.to_f64()))
            .collect::<Vec<_>>(),
    );
    (effects, states)
}

fn float_maps(m: &crate::quotient::QuotientMaps<f64>) -> (Matrix<f64>, Matrix<f64>) {
    let effects = Matrix::from_rows(
        &m.effect_of
            .iter()
            .map(|(_, v)| v.clone())
            .collect::<Vec<_>>(),
    );
    let states = Matrix::from_cols(
        &m.state_of
            .iter()
            .map(|(_, v)| v.clone())
            .collect::<Vec<_>>(),
    );
    (effects, states)
}
