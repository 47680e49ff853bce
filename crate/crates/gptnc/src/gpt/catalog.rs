//! Catalog of example theories.
//!
//! The stabilizer rebit is the worked example throughout: four real-qubit
//! states and six effects in `(t, x, z)` coordinates, where the dot product
//! reproduces the Hilbert-space traces, together with its four-ontic-state
//! reference model. The rest of the catalog covers the square theory with
//! the full dual (`gbit`), classical simplicial theories, polygon theories,
//! and squares with restricted effect sets.

use crate::embed::OntologicalModel;
use crate::error::{Error, Result};
use crate::geometry::{dual_body, ConvexBody};
use crate::gpt::{canonical_simplicial, Gpt};
use crate::linalg::{span_rank, Matrix, Vector};
use crate::scalar::Scalar;

/// A catalog GPT with labeled extremal states and effects, and, when the
/// literature provides one, a reference ontological model.
#[derive(Clone, Debug)]
pub struct CatalogEntry<T> {
    pub gpt: Gpt<T>,
    pub state_labels: Vec<(String, Vector<T>)>,
    pub effect_labels: Vec<(String, Vector<T>)>,
    pub reference_model: Option<OntologicalModel<T>>,
}

/// Parsed catalog identifier.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CatalogId {
    Rebit,
    Gbit,
    Classical { d: usize },
    Polygon { n: usize, restrict: Option<Vec<usize>> },
    RestrictedSquare { effects: Vec<usize> },
}

impl CatalogId {
    /// Parses a name and `key=value` parameters, as supplied on the
    /// command line.
    pub fn parse(name: &str, params: &[(String, String)]) -> Result<Self> {
        let get = |key: &str| params.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str());
        let parse_usize = |key: &str| -> Result<usize> {
            get(key)
                .ok_or_else(|| Error::BadParams(format!("missing parameter `{key}`")))?
                .parse()
                .map_err(|_| Error::BadParams(format!("parameter `{key}` must be an integer")))
        };
        let parse_list = |raw: &str| -> Result<Vec<usize>> {
            raw.split(',')
                .map(|t| {
                    t.trim()
                        .parse()
                        .map_err(|_| Error::BadParams(format!("bad index `{t}`")))
                })
                .collect()
        };
        match name {
            "rebit" => Ok(CatalogId::Rebit),
            "gbit" => Ok(CatalogId::Gbit),
            "classical" => Ok(CatalogId::Classical {
                d: parse_usize("d")?,
            }),
            "polygon" => Ok(CatalogId::Polygon {
                n: parse_usize("n")?,
                restrict: match get("restrict") {
                    Some(raw) => Some(parse_list(raw)?),
                    None => None,
                },
            }),
            "restricted_square" => Ok(CatalogId::RestrictedSquare {
                effects: parse_list(get("effects").ok_or_else(|| {
                    Error::BadParams("missing parameter `effects` (comma-separated indices)".into())
                })?)?,
            }),
            other => Err(Error::UnknownName(other.into())),
        }
    }
}

/// Builds a validated catalog entry.
pub fn catalog<T: Scalar>(id: &CatalogId) -> Result<CatalogEntry<T>> {
    match id {
        CatalogId::Rebit => rebit(),
        CatalogId::Gbit => gbit(),
        CatalogId::Classical { d } => classical(*d),
        CatalogId::Polygon { n, restrict } => polygon(*n, restrict.as_deref()),
        CatalogId::RestrictedSquare { effects } => restricted_square(effects),
    }
}

fn half<T: Scalar>() -> T {
    T::from_ratio(1, 2)
}

fn quarter<T: Scalar>() -> T {
    T::from_ratio(1, 4)
}

/// The stabilizer rebit in `(t, x, z)` coordinates: states are the four
/// real stabilizer projectors, effects the zero effect, the unit, and the
/// four half-projectors. Its reference model is the four-state toy model
/// with `mu(|0><0|) = (1/2, 1/2, 0, 0)` and so on.
pub fn rebit<T: Scalar>() -> Result<CatalogEntry<T>> {
    let tol = T::default_tol();
    let v = |t: T, x: T, z: T| Vector(vec![t, x, z]);
    let one = T::one;
    let zero = T::zero;
    let s0 = v(one(), zero(), one());
    let s1 = v(one(), zero(), -one());
    let sp = v(one(), one(), zero());
    let sm = v(one(), -one(), zero());
    let u = v(one(), zero(), zero());
    let e0 = v(half::<T>(), zero(), half::<T>());
    let e1 = v(half::<T>(), zero(), -half::<T>());
    let ep = v(half::<T>(), half::<T>(), zero());
    let em = v(half::<T>(), -half::<T>(), zero());

    let state_labels = vec![
        ("|0><0|".to_string(), s0.clone()),
        ("|1><1|".to_string(), s1.clone()),
        ("|+><+|".to_string(), sp.clone()),
        ("|-><-|".to_string(), sm.clone()),
    ];
    let effect_labels = vec![
        ("0".to_string(), Vector::zeros(3)),
        ("u".to_string(), u.clone()),
        ("|0><0|".to_string(), e0.clone()),
        ("|1><1|".to_string(), e1.clone()),
        ("|+><+|".to_string(), ep.clone()),
        ("|-><-|".to_string(), em.clone()),
    ];
    let states = ConvexBody::from_vertices(3, vec![s0, s1, sp, sm], &tol)?;
    let effects = ConvexBody::from_vertices(
        3,
        vec![Vector::zeros(3), u.clone(), e0, e1, ep, em],
        &tol,
    )?;
    let gpt = Gpt::new(3, states, effects, u).with_meta("name", "rebit");

    // Toy-model maps over the ontic set {l_0+, l_0-, l_1+, l_1-}.
    let q = quarter::<T>();
    let mu_map = Matrix::from_rows(&[
        Vector(vec![q.clone(), q.clone(), q.clone()]),
        Vector(vec![q.clone(), -q.clone(), q.clone()]),
        Vector(vec![q.clone(), q.clone(), -q.clone()]),
        Vector(vec![q.clone(), -q.clone(), -q.clone()]),
    ]);
    let xi_map = Matrix::from_rows(&[
        Vector::from_ints(&[1, 1, 1]),
        Vector::from_ints(&[1, -1, 1]),
        Vector::from_ints(&[1, 1, -1]),
        Vector::from_ints(&[1, -1, -1]),
    ]);
    Ok(CatalogEntry {
        gpt,
        state_labels,
        effect_labels,
        reference_model: Some(OntologicalModel {
            d: 4,
            mu_map,
            xi_map,
        }),
    })
}

/// The square theory with the full dual effect body.
pub fn gbit<T: Scalar>() -> Result<CatalogEntry<T>> {
    let tol = T::default_tol();
    let one = T::one;
    let mut verts = Vec::new();
    let mut state_labels = Vec::new();
    for (x, y, label) in [
        (1i64, 1i64, "++"),
        (1, -1, "+-"),
        (-1, 1, "-+"),
        (-1, -1, "--"),
    ] {
        let v = Vector(vec![one(), T::from_int(x), T::from_int(y)]);
        state_labels.push((format!("s{label}"), v.clone()));
        verts.push(v);
    }
    let states = ConvexBody::from_vertices(3, verts, &tol)?;
    let u = Vector(vec![one(), T::zero(), T::zero()]);
    let effects = dual_body(&states, &u, &tol)?;
    let effect_labels = effects
        .vertices()
        .iter()
        .enumerate()
        .map(|(i, e)| (format!("f{i}"), e.clone()))
        .collect();
    let gpt = Gpt::new(3, states, effects, u).with_meta("name", "gbit");
    Ok(CatalogEntry {
        gpt,
        state_labels,
        effect_labels,
        reference_model: None,
    })
}

/// The canonical simplicial theory of dimension `d`.
pub fn classical<T: Scalar>(d: usize) -> Result<CatalogEntry<T>> {
    let gpt: Gpt<T> = canonical_simplicial(d)?.to_gpt();
    let state_labels = gpt
        .states
        .vertices()
        .iter()
        .enumerate()
        .map(|(i, s)| (format!("b{i}"), s.clone()))
        .collect();
    let effect_labels = gpt
        .effects
        .vertices()
        .iter()
        .enumerate()
        .map(|(i, e)| (format!("chi{i}"), e.clone()))
        .collect();
    Ok(CatalogEntry {
        gpt,
        state_labels,
        effect_labels,
        reference_model: None,
    })
}

/// Polygon theory: `n` states on the unit circle at height 1, effects the
/// full dual unless `restrict` selects a subset of its nontrivial
/// vertices (the zero effect and the unit are always kept).
///
/// In exact mode the vertices are rational points on the circle (via the
/// tangent half-angle parametrization, denominator 1024), approximately
/// evenly spaced; float mode uses exact cosines. Every property of
/// interest is invariant under this reshaping.
pub fn polygon<T: Scalar>(n: usize, restrict: Option<&[usize]>) -> Result<CatalogEntry<T>> {
    if n < 3 {
        return Err(Error::BadParams(format!(
            "polygon needs at least 3 vertices, got {n}"
        )));
    }
    if T::EXACT && n > 64 {
        return Err(Error::BadParams(
            "exact-mode polygons support up to 64 vertices".into(),
        ));
    }
    let tol = T::default_tol();
    let mut verts = Vec::with_capacity(n);
    for kk in 0..n {
        let theta = 2.0 * std::f64::consts::PI * kk as f64 / n as f64;
        let (x, y) = if T::EXACT {
            rational_circle_point::<T>(theta)
        } else {
            (
                T::from_f64_lossless(theta.cos()).expect("finite"),
                T::from_f64_lossless(theta.sin()).expect("finite"),
            )
        };
        verts.push(Vector(vec![T::one(), x, y]));
    }
    let state_labels = verts
        .iter()
        .enumerate()
        .map(|(i, v)| (format!("p{i}"), v.clone()))
        .collect();
    let states = ConvexBody::from_vertices(3, verts, &tol)?;
    if states.vertices().len() != n {
        return Err(Error::BadParams(format!(
            "polygon({n}) construction produced {} distinct extreme points",
            states.vertices().len()
        )));
    }
    let u = Vector(vec![T::one(), T::zero(), T::zero()]);
    let full_dual = dual_body(&states, &u, &tol)?;
    let effects = match restrict {
        None => full_dual,
        Some(selection) => {
            let nontrivial: Vec<Vector<T>> = full_dual
                .vertices()
                .iter()
                .filter(|v| !v.is_zero(&tol) && **v != u)
                .cloned()
                .collect();
            let mut chosen = vec![Vector::zeros(3), u.clone()];
            for &idx in selection {
                let v = nontrivial.get(idx).ok_or_else(|| {
                    Error::BadParams(format!(
                        "restriction index {idx} out of range (dual has {} nontrivial vertices)",
                        nontrivial.len()
                    ))
                })?;
                chosen.push(v.clone());
            }
            let body = ConvexBody::from_vertices(3, chosen, &tol)?;
            if span_rank(body.vertices(), &tol) != 3 {
                return Err(Error::BadParams(
                    "restricted effect set does not span; tomography fails".into(),
                ));
            }
            body
        }
    };
    let effect_labels = effects
        .vertices()
        .iter()
        .enumerate()
        .map(|(i, e)| (format!("f{i}"), e.clone()))
        .collect();
    let gpt = Gpt::new(3, states, effects, u).with_meta("name", &format!("polygon({n})"));
    Ok(CatalogEntry {
        gpt,
        state_labels,
        effect_labels,
        reference_model: None,
    })
}

/// Exact rational point on the unit circle near angle `theta`, via
/// `x = (1 - t^2)/(1 + t^2), y = 2t/(1 + t^2)` with `t` a rounded rational.
fn rational_circle_point<T: Scalar>(theta: f64) -> (T, T) {
    let half_angle = theta / 2.0;
    if (half_angle - std::f64::consts::FRAC_PI_2).abs() < 1e-12 {
        return (-T::one(), T::zero());
    }
    let t64 = half_angle.tan();
    let denom = 1024i64;
    let num = (t64 * denom as f64).round() as i64;
    let t = T::from_ratio(num, denom);
    let t2 = t.clone() * t.clone();
    let denom = T::one() + t2.clone();
    let x = (T::one() - t2) / denom.clone();
    let y = (T::from_int(2) * t) / denom;
    (x, y)
}

/// Square states with a chosen subset of the four nontrivial dual effect
/// vertices `(1/2, ±1/2, 0)` and `(1/2, 0, ±1/2)` (indices 0..3), plus 0
/// and the unit. The subset must make the effects span.
pub fn restricted_square<T: Scalar>(selection: &[usize]) -> Result<CatalogEntry<T>> {
    let tol = T::default_tol();
    let base = gbit::<T>()?;
    let u = base.gpt.unit.clone();
    let nontrivial = [
        Vector(vec![half::<T>(), half::<T>(), T::zero()]),
        Vector(vec![half::<T>(), -half::<T>(), T::zero()]),
        Vector(vec![half::<T>(), T::zero(), half::<T>()]),
        Vector(vec![half::<T>(), T::zero(), -half::<T>()]),
    ];
    let mut chosen = vec![Vector::zeros(3), u.clone()];
    let mut effect_labels = vec![
        ("0".to_string(), Vector::zeros(3)),
        ("u".to_string(), u.clone()),
    ];
    for &idx in selection {
        let v = nontrivial
            .get(idx)
            .ok_or_else(|| Error::BadParams(format!("effect index {idx} out of range 0..3")))?;
        chosen.push(v.clone());
        effect_labels.push((format!("f{idx}"), v.clone()));
    }
    if span_rank(&chosen, &tol) != 3 {
        return Err(Error::BadParams(
            "selected effects do not span; pick at least one x-type and one y-type effect".into(),
        ));
    }
    let effects = ConvexBody::from_vertices(3, chosen, &tol)?;
    let gpt = Gpt::new(3, base.gpt.states.clone(), effects, u)
        .with_meta("name", "restricted_square");
    Ok(CatalogEntry {
        gpt,
        state_labels: base.state_labels,
        effect_labels,
        reference_model: None,
    })
}

/// The standard entries exercised by the test suites.
pub fn standard_entries<T: Scalar>() -> Vec<(String, CatalogEntry<T>)> {
    let mut out = Vec::new();
    out.push(("rebit".to_string(), rebit().expect("rebit builds")));
    out.push(("gbit".to_string(), gbit().expect("gbit builds")));
    for d in 1..=3 {
        out.push((
            format!("classical({d})"),
            classical(d).expect("classical builds"),
        ));
    }
    for n in [3usize, 4, 5] {
        out.push((
            format!("polygon({n})"),
            polygon(n, None).expect("polygon builds"),
        ));
    }
    // Selecting all four dual vertices reproduces the gbit, so the
    // standard suite carries a strictly restricted square instead.
    out.push((
        "restricted_square(0,2)".to_string(),
        restricted_square(&[0, 2]).expect("restricted square builds"),
    ));
    out
}
