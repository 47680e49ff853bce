//! Operational theories and the quotienting map.
//!
//! An operational theory lists preparations, measurements with outcomes,
//! the probability table `Pr([k|M], P)`, and declared mixture and
//! coarse-graining relations. Quotienting identifies operationally
//! equivalent procedures (identical statistics against all counterparts)
//! and produces the associated GPT through a rank factorization of the
//! table, in a fixed gauge where the unit functional is the first
//! coordinate. Ontological models transfer both ways: a model of the GPT
//! lifts to a noncontextual model of the theory by composition, and a
//! noncontextual model of the theory projects onto a model of the GPT.

use nalgebra::DMatrix;

use crate::embed::OntologicalModel;
use crate::error::{Error, Result};
use crate::geometry::ConvexBody;
use crate::gpt::{catalog, Gpt};
use crate::linalg::{independent_subset, Matrix, Vector};
use crate::scalar::{approx_eq, in_unit_interval, le_tol, Scalar};

/// A measurement label with its outcome labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Measurement {
    pub label: String,
    pub outcomes: Vec<String>,
}

/// Declared mixture: `target = weight * left + (1 - weight) * right`.
#[derive(Clone, Debug)]
pub struct MixtureRelation<T> {
    pub target: String,
    pub left: String,
    pub right: String,
    pub weight: T,
}

/// Declared coarse-graining: the target operational effect is the sum of
/// the parts.
#[derive(Clone, Debug)]
pub struct CoarseGraining {
    pub target: String,
    pub parts: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct Relations<T> {
    pub mixtures: Vec<MixtureRelation<T>>,
    pub coarse_grainings: Vec<CoarseGraining>,
}

impl<T> Relations<T> {
    pub fn none() -> Self {
        Relations {
            mixtures: Vec::new(),
            coarse_grainings: Vec::new(),
        }
    }
}

impl<T> Default for Relations<T> {
    fn default() -> Self {
        Self::none()
    }
}

/// Prepare-measure statistics plus declared relations. Table rows are
/// operational effects in measurement order, columns are preparations.
#[derive(Clone, Debug)]
pub struct OperationalTheory<T> {
    pub preps: Vec<String>,
    pub measurements: Vec<Measurement>,
    pub table: Matrix<T>,
    pub relations: Relations<T>,
}

impl<T: Scalar> OperationalTheory<T> {
    /// Operational effect labels `k|M`, in table row order.
    pub fn effect_labels(&self) -> Vec<String> {
        self.measurements
            .iter()
            .flat_map(|m| m.outcomes.iter().map(move |k| format!("{k}|{}", m.label)))
            .collect()
    }

    pub fn prep_index(&self, label: &str) -> Option<usize> {
        self.preps.iter().position(|p| p == label)
    }

    pub fn effect_index(&self, label: &str) -> Option<usize> {
        self.effect_labels().iter().position(|e| e == label)
    }

    /// Entries in `[0,1]`, outcome rows of each measurement summing to one
    /// on every preparation, and declared relations holding numerically.
    pub fn validate(&self, tol: &T) -> Result<()> {
        let nrows: usize = self.measurements.iter().map(|m| m.outcomes.len()).sum();
        if self.table.nrows() != nrows || self.table.ncols() != self.preps.len() {
            return Err(Error::InconsistentTable(format!(
                "table is {}x{}, expected {}x{}",
                self.table.nrows(),
                self.table.ncols(),
                nrows,
                self.preps.len()
            )));
        }
        for i in 0..self.table.nrows() {
            for j in 0..self.table.ncols() {
                if !in_unit_interval(self.table.get(i, j), tol) {
                    return Err(Error::InconsistentTable(format!(
                        "entry ({i}, {j}) = {} outside [0, 1]",
                        self.table.get(i, j).repr()
                    )));
                }
            }
        }
        let mut row = 0;
        for m in &self.measurements {
            for p in 0..self.preps.len() {
                let mut total = T::zero();
                for k in 0..m.outcomes.len() {
                    total += self.table.get(row + k, p).clone();
                }
                if !approx_eq(&total, &T::one(), tol) {
                    return Err(Error::InconsistentTable(format!(
                        "measurement `{}` sums to {} on preparation `{}`",
                        m.label,
                        total.repr(),
                        self.preps[p]
                    )));
                }
            }
            row += m.outcomes.len();
        }
        for mix in &self.relations.mixtures {
            let t = self.prep_index(&mix.target).ok_or_else(|| {
                Error::InconsistentTable(format!("unknown preparation `{}`", mix.target))
            })?;
            let l = self.prep_index(&mix.left).ok_or_else(|| {
                Error::InconsistentTable(format!("unknown preparation `{}`", mix.left))
            })?;
            let r = self.prep_index(&mix.right).ok_or_else(|| {
                Error::InconsistentTable(format!("unknown preparation `{}`", mix.right))
            })?;
            for i in 0..self.table.nrows() {
                let mixed = mix.weight.clone() * self.table.get(i, l).clone()
                    + (T::one() - mix.weight.clone()) * self.table.get(i, r).clone();
                if !approx_eq(self.table.get(i, t), &mixed, tol) {
                    return Err(Error::InconsistentTable(format!(
                        "declared mixture `{}` fails on row {i}",
                        mix.target
                    )));
                }
            }
        }
        for cg in &self.relations.coarse_grainings {
            let t = self
                .effect_index(&cg.target)
                .ok_or_else(|| Error::InconsistentTable(format!("unknown effect `{}`", cg.target)))?;
            let parts: Vec<usize> = cg
                .parts
                .iter()
                .map(|p| {
                    self.effect_index(p)
                        .ok_or_else(|| Error::InconsistentTable(format!("unknown effect `{p}`")))
                })
                .collect::<Result<_>>()?;
            for j in 0..self.table.ncols() {
                let mut total = T::zero();
                for &p in &parts {
                    total += self.table.get(p, j).clone();
                }
                if !approx_eq(self.table.get(t, j), &total, tol) {
                    return Err(Error::InconsistentTable(format!(
                        "declared coarse-graining `{}` fails on column {j}",
                        cg.target
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Partitions of preparation indices and operational-effect indices into
/// operational equivalence classes (equal columns and equal rows).
pub fn equivalence_classes<T: Scalar>(
    t: &OperationalTheory<T>,
    tol: &T,
) -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
    let cols: Vec<Vector<T>> = (0..t.table.ncols()).map(|j| t.table.col(j)).collect();
    let rows: Vec<Vector<T>> = (0..t.table.nrows()).map(|i| t.table.row(i)).collect();
    (group_equal(&cols, tol), group_equal(&rows, tol))
}

fn group_equal<T: Scalar>(vectors: &[Vector<T>], tol: &T) -> Vec<Vec<usize>> {
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for (i, v) in vectors.iter().enumerate() {
        match classes
            .iter_mut()
            .find(|c| vectors[c[0]].sub(v).is_zero(tol))
        {
            Some(c) => c.push(i),
            None => classes.push(vec![i]),
        }
    }
    classes
}

/// The quotienting maps: operationally equivalent procedures share one
/// vector, and `Pr([k|M], P) = <e_[k|M], s_P>`.
#[derive(Clone, Debug)]
pub struct QuotientMaps<T> {
    pub state_of: Vec<(String, Vector<T>)>,
    pub effect_of: Vec<(String, Vector<T>)>,
}

impl<T: Scalar> QuotientMaps<T> {
    pub fn state(&self, label: &str) -> Option<&Vector<T>> {
        self.state_of
            .iter()
            .find(|(l, _)| l == label)
            .map(|(_, v)| v)
    }

    pub fn effect(&self, label: &str) -> Option<&Vector<T>> {
        self.effect_of
            .iter()
            .find(|(l, _)| l == label)
            .map(|(_, v)| v)
    }
}

/// Rank factorization of the table. Exact mode uses Gaussian elimination;
/// float mode uses singular-value thresholding at `tol` (relative to the
/// largest singular value) and reports the discarded values.
fn rank_factorize<T: Scalar>(
    table: &Matrix<T>,
    tol: &T,
) -> (Matrix<T>, Matrix<T>, usize, Vec<f64>) {
    if T::EXACT {
        let (rref, pivots) = table.rref(tol);
        let r = pivots.len();
        let c = Matrix::from_cols(&pivots.iter().map(|&j| table.col(j)).collect::<Vec<_>>());
        let f = Matrix::from_rows(&(0..r).map(|i| rref.row(i)).collect::<Vec<_>>());
        (c, f, r, Vec::new())
    } else {
        let m = table.nrows();
        let p = table.ncols();
        let dm = DMatrix::from_fn(m, p, |i, j| table.get(i, j).to_f64());
        let svd = dm.svd(true, true);
        let u = svd.u.as_ref().expect("svd with u");
        let vt = svd.v_t.as_ref().expect("svd with v_t");
        let smax = svd.singular_values.iter().cloned().fold(0.0f64, f64::max);
        let cutoff = tol.to_f64() * smax.max(1.0);
        let mut kept = Vec::new();
        let mut discarded = Vec::new();
        for (i, s) in svd.singular_values.iter().enumerate() {
            if *s > cutoff {
                kept.push(i);
            } else {
                discarded.push(*s);
            }
        }
        let r = kept.len();
        let c = Matrix::from_fn(m, r, |i, j| {
            T::from_f64_lossless(u[(i, kept[j])] * svd.singular_values[kept[j]]).expect("finite")
        });
        let f = Matrix::from_fn(r, p, |i, j| {
            T::from_f64_lossless(vt[(kept[i], j)]).expect("finite")
        });
        (c, f, r, discarded)
    }
}

/// Quotients an operational theory into its GPT. The table factors as
/// `effects^T . states` with inner dimension equal to its rank; a basis
/// change makes the unit functional the first coordinate, so every state
/// vector has first coordinate one. The returned maps reproduce the table
/// exactly in exact mode.
pub fn quotient_to_gpt<T: Scalar>(
    t: &OperationalTheory<T>,
    tol: &T,
) -> Result<(Gpt<T>, QuotientMaps<T>)> {
    t.validate(tol)?;
    let (c, f, rank, discarded) = rank_factorize(&t.table, tol);
    if rank == 0 {
        return Err(Error::RankDeficientNormalization(
            "table has rank zero".into(),
        ));
    }
    // The unit functional: <u_hat, s_P> = 1 for every preparation.
    let ones = Vector::ones(t.preps.len());
    let u_hat = f.transpose().solve_vec(&ones, tol).ok_or_else(|| {
        Error::RankDeficientNormalization(
            "no functional evaluates to one on every preparation".into(),
        )
    })?;

    // Gauge: first row of the basis change is the unit functional,
    // completed greedily by standard basis rows.
    let mut rows = vec![u_hat.clone()];
    for i in 0..rank {
        if rows.len() == rank {
            break;
        }
        rows.push(Vector::basis(rank, i));
        if Matrix::from_rows(&rows).rank(tol) != rows.len() {
            rows.pop();
        }
    }
    let g_mat = Matrix::from_rows(&rows);
    let g_inv_t = g_mat
        .inverse(tol)
        .expect("gauge matrix is invertible by construction")
        .transpose();

    let states: Vec<Vector<T>> = (0..f.ncols()).map(|j| g_mat.mul_vec(&f.col(j))).collect();
    let effects: Vec<Vector<T>> = (0..c.nrows()).map(|i| g_inv_t.mul_vec(&c.row(i))).collect();
    let unit = Vector::basis(rank, 0);

    let state_of: Vec<(String, Vector<T>)> =
        t.preps.iter().cloned().zip(states.iter().cloned()).collect();
    let effect_of: Vec<(String, Vector<T>)> = t
        .effect_labels()
        .into_iter()
        .zip(effects.iter().cloned())
        .collect();

    let state_body = ConvexBody::from_vertices(rank, states, tol)?;
    let mut effect_vertices = effects;
    effect_vertices.push(Vector::zeros(rank));
    effect_vertices.push(unit.clone());
    let effect_body = ConvexBody::from_vertices(rank, effect_vertices, tol)?;
    let mut gpt = Gpt::new(rank, state_body, effect_body, unit)
        .with_meta("quotient_rank", &rank.to_string());
    if !discarded.is_empty() {
        gpt = gpt.with_meta("discarded_singular_values", &format!("{discarded:?}"));
    }
    let maps = QuotientMaps {
        state_of,
        effect_of,
    };
    debug_assert!(verify_quotient(t, &gpt, &maps, tol) || !T::EXACT);
    Ok((gpt, maps))
}

/// True iff the maps reproduce every table entry and collapse operational
/// equivalence classes to equal vectors.
pub fn verify_quotient<T: Scalar>(
    t: &OperationalTheory<T>,
    _g: &Gpt<T>,
    maps: &QuotientMaps<T>,
    tol: &T,
) -> bool {
    let labels = t.effect_labels();
    for (i, el) in labels.iter().enumerate() {
        for (j, pl) in t.preps.iter().enumerate() {
            let (Some(e), Some(s)) = (maps.effect(el), maps.state(pl)) else {
                return false;
            };
            if !approx_eq(&e.dot(s), t.table.get(i, j), tol) {
                return false;
            }
        }
    }
    let (prep_classes, effect_classes) = equivalence_classes(t, tol);
    for class in prep_classes {
        let first = maps.state(&t.preps[class[0]]).expect("checked above");
        for &i in &class[1..] {
            let other = maps.state(&t.preps[i]).expect("checked above");
            if !first.sub(other).is_zero(tol) {
                return false;
            }
        }
    }
    for class in effect_classes {
        let first = maps.effect(&labels[class[0]]).expect("checked above");
        for &i in &class[1..] {
            let other = maps.effect(&labels[i]).expect("checked above");
            if !first.sub(other).is_zero(tol) {
                return false;
            }
        }
    }
    true
}

/// An ontological model of an operational theory: one distribution per
/// preparation, one response function per operational effect. Models
/// produced by [`lift_model`] are generalized-noncontextual by
/// construction.
#[derive(Clone, Debug)]
pub struct OtOntologicalModel<T> {
    pub lambda: usize,
    pub mu: Vec<(String, Vector<T>)>,
    pub xi: Vec<(String, Vector<T>)>,
}

impl<T: Scalar> OtOntologicalModel<T> {
    pub fn mu_of(&self, prep: &str) -> Option<&Vector<T>> {
        self.mu.iter().find(|(l, _)| l == prep).map(|(_, v)| v)
    }

    pub fn xi_of(&self, effect: &str) -> Option<&Vector<T>> {
        self.xi.iter().find(|(l, _)| l == effect).map(|(_, v)| v)
    }

    /// Distributions normalized, responses in `[0,1]`, declared relations
    /// preserved, table reproduced.
    pub fn is_valid_for(&self, t: &OperationalTheory<T>, tol: &T) -> bool {
        let labels = t.effect_labels();
        for (_, d) in &self.mu {
            let mut total = T::zero();
            for c in d.iter() {
                if !le_tol(&T::zero(), c, tol) {
                    return false;
                }
                total += c.clone();
            }
            if !approx_eq(&total, &T::one(), tol) {
                return false;
            }
        }
        for (_, r) in &self.xi {
            if !r.iter().all(|c| in_unit_interval(c, tol)) {
                return false;
            }
        }
        for (i, el) in labels.iter().enumerate() {
            for (j, pl) in t.preps.iter().enumerate() {
                let (Some(xi), Some(mu)) = (self.xi_of(el), self.mu_of(pl)) else {
                    return false;
                };
                if !approx_eq(&xi.dot(mu), t.table.get(i, j), tol) {
                    return false;
                }
            }
        }
        for mix in &t.relations.mixtures {
            let (Some(dt), Some(dl), Some(dr)) = (
                self.mu_of(&mix.target),
                self.mu_of(&mix.left),
                self.mu_of(&mix.right),
            ) else {
                return false;
            };
            let mixed = dl
                .scale(&mix.weight)
                .add(&dr.scale(&(T::one() - mix.weight.clone())));
            if !dt.sub(&mixed).is_zero(tol) {
                return false;
            }
        }
        for cg in &t.relations.coarse_grainings {
            let Some(rt) = self.xi_of(&cg.target) else {
                return false;
            };
            let mut total = Vector::zeros(self.lambda);
            for p in &cg.parts {
                let Some(rp) = self.xi_of(p) else {
                    return false;
                };
                total = total.add(rp);
            }
            if !rt.sub(&total).is_zero(tol) {
                return false;
            }
        }
        true
    }
}

/// Composes the quotienting map with a GPT model: `mu_P = mu(s_P)` and
/// `xi_[k|M] = xi(e_[k|M])`. The result reproduces the table and is
/// noncontextual by construction, since equivalent procedures share their
/// quotient vectors.
pub fn lift_model<T: Scalar>(
    gm: &OntologicalModel<T>,
    maps: &QuotientMaps<T>,
    t: &OperationalTheory<T>,
    tol: &T,
) -> Result<OtOntologicalModel<T>> {
    let labels = t.effect_labels();
    for (i, el) in labels.iter().enumerate() {
        for (j, pl) in t.preps.iter().enumerate() {
            let e = maps
                .effect(el)
                .ok_or_else(|| Error::ModelMismatch(format!("no vector for `{el}`")))?;
            let s = maps
                .state(pl)
                .ok_or_else(|| Error::ModelMismatch(format!("no vector for `{pl}`")))?;
            let prob = gm.xi_map.mul_vec(e).dot(&gm.mu_map.mul_vec(s));
            if !approx_eq(&prob, t.table.get(i, j), tol) {
                return Err(Error::ModelMismatch(format!(
                    "model gives {} for ({el}, {pl}), table has {}",
                    prob.repr(),
                    t.table.get(i, j).repr()
                )));
            }
        }
    }
    let mu = t
        .preps
        .iter()
        .map(|p| {
            let s = maps.state(p).expect("checked above");
            (p.clone(), gm.mu_map.mul_vec(s))
        })
        .collect();
    let xi = labels
        .iter()
        .map(|l| {
            let e = maps.effect(l).expect("checked above");
            (l.clone(), gm.xi_map.mul_vec(e))
        })
        .collect();
    Ok(OtOntologicalModel {
        lambda: gm.d,
        mu,
        xi,
    })
}

/// The reverse direction: projects a noncontextual operational model onto
/// the GPT by setting `mu(s_P) = mu_P` on representatives and extending
/// linearly. Errors with [`Error::NotWellDefined`] when two operationally
/// equivalent procedures carry different representations (a contextual
/// input) or when the assignments are not linearly consistent.
pub fn project_model<T: Scalar>(
    otm: &OtOntologicalModel<T>,
    maps: &QuotientMaps<T>,
    tol: &T,
) -> Result<OntologicalModel<T>> {
    for (la, va) in &maps.state_of {
        for (lb, vb) in &maps.state_of {
            if va.sub(vb).is_zero(tol) {
                let (Some(da), Some(db)) = (otm.mu_of(la), otm.mu_of(lb)) else {
                    return Err(Error::NotWellDefined(format!(
                        "missing distribution for `{la}` or `{lb}`"
                    )));
                };
                if !da.sub(db).is_zero(tol) {
                    return Err(Error::NotWellDefined(format!(
                        "equivalent preparations `{la}` and `{lb}` have different distributions"
                    )));
                }
            }
        }
    }
    for (la, va) in &maps.effect_of {
        for (lb, vb) in &maps.effect_of {
            if va.sub(vb).is_zero(tol) {
                let (Some(ra), Some(rb)) = (otm.xi_of(la), otm.xi_of(lb)) else {
                    return Err(Error::NotWellDefined(format!(
                        "missing response for `{la}` or `{lb}`"
                    )));
                };
                if !ra.sub(rb).is_zero(tol) {
                    return Err(Error::NotWellDefined(format!(
                        "equivalent effects `{la}` and `{lb}` have different responses"
                    )));
                }
            }
        }
    }
    let d = otm.lambda;
    let mu_map = solve_linear_extension(
        &maps.state_of,
        &otm.mu,
        d,
        tol,
        "preparation distributions are not linear in the quotient vectors",
    )?;
    let xi_map = solve_linear_extension(
        &maps.effect_of,
        &otm.xi,
        d,
        tol,
        "effect responses are not linear in the quotient vectors",
    )?;
    Ok(OntologicalModel { d, mu_map, xi_map })
}

/// Solves `M . v_label = value_label` for a single matrix `M`, verifying
/// consistency on the full family.
fn solve_linear_extension<T: Scalar>(
    vectors: &[(String, Vector<T>)],
    values: &[(String, Vector<T>)],
    d: usize,
    tol: &T,
    msg: &str,
) -> Result<Matrix<T>> {
    let vecs: Vec<Vector<T>> = vectors.iter().map(|(_, v)| v.clone()).collect();
    let idx = independent_subset(&vecs, tol);
    let basis = Matrix::from_cols(&idx.iter().map(|&i| vecs[i].clone()).collect::<Vec<_>>());
    let value_of = |label: &str| -> Result<Vector<T>> {
        values
            .iter()
            .find(|(l, _)| l == label)
            .map(|(_, v)| v.clone())
            .ok_or_else(|| Error::NotWellDefined(format!("missing representation for `{label}`")))
    };
    let targets = Matrix::from_cols(
        &idx.iter()
            .map(|&i| value_of(&vectors[i].0))
            .collect::<Result<Vec<_>>>()?,
    );
    // M basis = targets  =>  basis^T M^T = targets^T.
    let m_t = basis
        .transpose()
        .solve_matrix(&targets.transpose(), tol)
        .ok_or_else(|| Error::NotWellDefined(msg.into()))?;
    let m = m_t.transpose();
    if m.nrows() != d {
        return Err(Error::NotWellDefined(msg.into()));
    }
    for (label, v) in vectors {
        let predicted = m.mul_vec(v);
        if !predicted.sub(&value_of(label)?).is_zero(tol) {
            return Err(Error::NotWellDefined(msg.into()));
        }
    }
    Ok(m)
}

/// The exact operational theory of the stabilizer rebit: four
/// preparations against the Z and X measurements, a duplicate of Z, and
/// the trivial measurement `{u, 0}` — eight operational effects in all.
pub fn rebit_theory<T: Scalar>() -> OperationalTheory<T> {
    let entry = catalog::rebit::<T>().expect("rebit builds");
    let states: Vec<Vector<T>> = entry.state_labels.iter().map(|(_, s)| s.clone()).collect();
    let effect = |label: &str| -> Vector<T> {
        entry
            .effect_labels
            .iter()
            .find(|(l, _)| l == label)
            .map(|(_, v)| v.clone())
            .expect("labeled effect")
    };
    let e0 = effect("|0><0|");
    let e1 = effect("|1><1|");
    let ep = effect("|+><+|");
    let em = effect("|-><-|");
    let u = effect("u");
    let zero = Vector::zeros(3);
    let rows: Vec<Vector<T>> = [&e0, &e1, &ep, &em, &e0, &e1, &u, &zero]
        .iter()
        .map(|e| Vector(states.iter().map(|s| e.dot(s)).collect()))
        .collect();
    OperationalTheory {
        preps: vec!["P0".into(), "P1".into(), "P+".into(), "P-".into()],
        measurements: vec![
            Measurement {
                label: "Z".into(),
                outcomes: vec!["0".into(), "1".into()],
            },
            Measurement {
                label: "X".into(),
                outcomes: vec!["+".into(), "-".into()],
            },
            Measurement {
                label: "Z2".into(),
                outcomes: vec!["0".into(), "1".into()],
            },
            Measurement {
                label: "triv".into(),
                outcomes: vec!["yes".into(), "no".into()],
            },
        ],
        table: Matrix::from_rows(&rows),
        relations: Relations::none(),
    }
}

/// A fair-coin theory: two deterministic preparations, one binary
/// measurement.
pub fn coin_theory<T: Scalar>() -> OperationalTheory<T> {
    OperationalTheory {
        preps: vec!["heads".into(), "tails".into()],
        measurements: vec![Measurement {
            label: "flip".into(),
            outcomes: vec!["h".into(), "t".into()],
        }],
        table: Matrix::from_rows(&[Vector::from_ints(&[1, 0]), Vector::from_ints(&[0, 1])]),
        relations: Relations::none(),
    }
}

/// Re-ingests a GPT's vertex pairing table as an operational theory: one
/// binary measurement `{e, u - e}` per effect vertex, one preparation per
/// state vertex.
///
/// The complements are needed to complete each effect into a measurement,
/// so quotienting the result reconstructs the complement closure of the
/// effect body. For effect bodies closed under `e -> u - e` (every full
/// dual is) the closure is the body itself.
pub fn theory_from_gpt<T: Scalar>(g: &Gpt<T>) -> OperationalTheory<T> {
    let mut measurements = Vec::new();
    let mut rows = Vec::new();
    for (i, e) in g.effects.vertices().iter().enumerate() {
        measurements.push(Measurement {
            label: format!("M{i}"),
            outcomes: vec!["1".into(), "0".into()],
        });
        let hit = Vector(g.states.vertices().iter().map(|s| e.dot(s)).collect());
        let miss = Vector(hit.iter().map(|p| T::one() - p.clone()).collect());
        rows.push(hit);
        rows.push(miss);
    }
    OperationalTheory {
        preps: (0..g.states.vertices().len())
            .map(|j| format!("P{j}"))
            .collect(),
        measurements,
        table: Matrix::from_rows(&rows),
        relations: Relations::none(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gpt::{validate, GptEquivalenceMaps};
    use crate::scalar::Rat;
    use num_traits::Zero;

    fn zero() -> Rat {
        Rat::zero()
    }

    #[test]
    fn rebit_theory_validates_and_has_rank_three() {
        let t = rebit_theory::<Rat>();
        assert_eq!(t.preps.len(), 4);
        assert_eq!(t.effect_labels().len(), 8);
        t.validate(&zero()).unwrap();
        assert_eq!(t.table.rank(&zero()), 3);
    }

    #[test]
    fn equivalence_classes_group_duplicates() {
        let t = rebit_theory::<Rat>();
        let (prep_classes, effect_classes) = equivalence_classes(&t, &zero());
        // All four preparations are statistically distinct.
        assert_eq!(prep_classes.len(), 4);
        // Z and Z2 rows coincide pairwise: 8 rows, 6 classes.
        assert_eq!(effect_classes.len(), 6);
        let labels = t.effect_labels();
        let z0 = labels.iter().position(|l| l == "0|Z").unwrap();
        let z20 = labels.iter().position(|l| l == "0|Z2").unwrap();
        assert!(effect_classes.iter().any(|c| c.contains(&z0) && c.contains(&z20)));
    }

    #[test]
    fn prep_equal_to_mixture_keeps_own_class() {
        // A column equal to the half-half mixture of two others but distinct
        // from both stays its own class: equivalence is equality of
        // statistics, not decomposability.
        let half = Rat::from_ratio(1, 2);
        let t = OperationalTheory::<Rat> {
            preps: vec!["A".into(), "B".into(), "mix".into()],
            measurements: vec![Measurement {
                label: "M".into(),
                outcomes: vec!["0".into(), "1".into()],
            }],
            table: Matrix::from_rows(&[
                Vector(vec![Rat::from_int(1), Rat::from_int(0), half.clone()]),
                Vector(vec![Rat::from_int(0), Rat::from_int(1), half.clone()]),
            ]),
            relations: Relations {
                mixtures: vec![MixtureRelation {
                    target: "mix".into(),
                    left: "A".into(),
                    right: "B".into(),
                    weight: half,
                }],
                coarse_grainings: Vec::new(),
            },
        };
        t.validate(&zero()).unwrap();
        let (prep_classes, _) = equivalence_classes(&t, &zero());
        assert_eq!(prep_classes.len(), 3);
    }

    #[test]
    fn quotient_of_rebit_table_matches_catalog_up_to_equivalence() {
        let t = rebit_theory::<Rat>();
        let (g, maps) = quotient_to_gpt(&t, &zero()).unwrap();
        assert_eq!(g.dim, 3);
        assert!(validate(&g, &zero()).is_valid());
        assert!(verify_quotient(&t, &g, &maps, &zero()));

        // Explicit equivalence maps onto the catalog rebit: omega maps the
        // quotient state of each labeled preparation to the catalog state.
        let cat = catalog::rebit::<Rat>().unwrap();
        let src: Vec<Vector<Rat>> = ["P0", "P1", "P+"]
            .iter()
            .map(|p| maps.state(p).unwrap().clone())
            .collect();
        let dst: Vec<Vector<Rat>> = cat.state_labels[..3]
            .iter()
            .map(|(_, s)| s.clone())
            .collect();
        let omega = Matrix::from_cols(&dst)
            .mat_mul(&Matrix::from_cols(&src).inverse(&zero()).unwrap());
        let epsilon = omega.inverse(&zero()).unwrap().transpose();
        let maps_eq = GptEquivalenceMaps { omega, epsilon };
        assert!(crate::gpt::verify_equivalence(&g, &cat.gpt, &maps_eq, &zero()).unwrap());
    }

    #[test]
    fn coin_quotient_is_classical_bit() {
        let t = coin_theory::<Rat>();
        let (g, maps) = quotient_to_gpt(&t, &zero()).unwrap();
        assert_eq!(g.dim, 2);
        let classical: crate::gpt::Gpt<Rat> =
            crate::gpt::canonical_simplicial(2).unwrap().to_gpt();
        // Hand-built maps: the gauge sends the two deterministic states to
        // the standard basis up to an invertible change.
        let src = Matrix::from_cols(&[
            maps.state("heads").unwrap().clone(),
            maps.state("tails").unwrap().clone(),
        ]);
        let dst = Matrix::from_cols(&[Vector::basis(2, 0), Vector::basis(2, 1)]);
        let omega = dst.mat_mul(&src.inverse(&zero()).unwrap());
        let epsilon = omega.inverse(&zero()).unwrap().transpose();
        let maps_eq = GptEquivalenceMaps { omega, epsilon };
        assert!(crate::gpt::verify_equivalence(&g, &classical, &maps_eq, &zero()).unwrap());
    }

    #[test]
    fn duplicated_preps_share_a_state_vector() {
        let mut t = coin_theory::<Rat>();
        t.preps.push("heads2".into());
        t.table = Matrix::from_rows(&[
            Vector::from_ints(&[1, 0, 1]),
            Vector::from_ints(&[0, 1, 0]),
        ]);
        let (_, maps) = quotient_to_gpt(&t, &zero()).unwrap();
        assert_eq!(maps.state("heads"), maps.state("heads2"));
    }

    #[test]
    fn declared_relations_survive_quotienting() {
        let half = Rat::from_ratio(1, 2);
        let t = OperationalTheory::<Rat> {
            preps: vec!["A".into(), "B".into(), "mix".into()],
            measurements: vec![
                Measurement {
                    label: "M".into(),
                    outcomes: vec!["0".into(), "1".into()],
                },
                Measurement {
                    label: "C".into(),
                    outcomes: vec!["any".into()],
                },
            ],
            table: Matrix::from_rows(&[
                Vector(vec![Rat::from_int(1), Rat::from_int(0), half.clone()]),
                Vector(vec![Rat::from_int(0), Rat::from_int(1), half.clone()]),
                Vector::from_ints(&[1, 1, 1]),
            ]),
            relations: Relations {
                mixtures: vec![MixtureRelation {
                    target: "mix".into(),
                    left: "A".into(),
                    right: "B".into(),
                    weight: half.clone(),
                }],
                coarse_grainings: vec![CoarseGraining {
                    target: "any|C".into(),
                    parts: vec!["0|M".into(), "1|M".into()],
                }],
            },
        };
        let (_, maps) = quotient_to_gpt(&t, &zero()).unwrap();
        let mixed = maps
            .state("A")
            .unwrap()
            .scale(&half)
            .add(&maps.state("B").unwrap().scale(&half));
        assert_eq!(maps.state("mix").unwrap(), &mixed);
        let total = maps
            .effect("0|M")
            .unwrap()
            .add(maps.effect("1|M").unwrap());
        assert_eq!(maps.effect("any|C").unwrap(), &total);
    }

    #[test]
    fn inconsistent_table_is_rejected() {
        let mut t = coin_theory::<Rat>();
        *t.table.get_mut(0, 0) = Rat::from_ratio(3, 4);
        assert!(matches!(
            t.validate(&zero()),
            Err(Error::InconsistentTable(_))
        ));
    }

    #[test]
    fn verify_quotient_rejects_perturbed_maps() {
        let t = coin_theory::<Rat>();
        let (g, mut maps) = quotient_to_gpt(&t, &zero()).unwrap();
        maps.state_of[0].1[0] += Rat::from_ratio(1, 1000);
        assert!(!verify_quotient(&t, &g, &maps, &zero()));
    }

    #[test]
    fn projecting_a_contextual_model_fails() {
        // Two operationally equivalent preparations carrying different
        // distributions: the ontic expansion of a fair coin.
        let half = Rat::from_ratio(1, 2);
        let t = OperationalTheory::<Rat> {
            preps: vec!["P1".into(), "P2".into()],
            measurements: vec![Measurement {
                label: "M".into(),
                outcomes: vec!["h".into(), "t".into()],
            }],
            table: Matrix::from_rows(&[
                Vector(vec![half.clone(), half.clone()]),
                Vector(vec![half.clone(), half.clone()]),
            ]),
            relations: Relations::none(),
        };
        let (_, maps) = quotient_to_gpt(&t, &zero()).unwrap();
        let otm = OtOntologicalModel {
            lambda: 2,
            mu: vec![
                ("P1".into(), Vector::from_ints(&[1, 0])),
                ("P2".into(), Vector::from_ints(&[0, 1])),
            ],
            xi: vec![
                ("h|M".into(), Vector(vec![half.clone(), half.clone()])),
                ("t|M".into(), Vector(vec![half.clone(), half])),
            ],
        };
        assert!(otm.is_valid_for(&t, &zero()));
        assert!(matches!(
            project_model(&otm, &maps, &zero()),
            Err(Error::NotWellDefined(_))
        ));
    }

    #[test]
    fn project_then_lift_round_trips_on_the_coin() {
        let t = coin_theory::<Rat>();
        let (_, maps) = quotient_to_gpt(&t, &zero()).unwrap();
        let otm = OtOntologicalModel {
            lambda: 2,
            mu: vec![
                ("heads".into(), Vector::from_ints(&[1, 0])),
                ("tails".into(), Vector::from_ints(&[0, 1])),
            ],
            xi: vec![
                ("h|flip".into(), Vector::from_ints(&[1, 0])),
                ("t|flip".into(), Vector::from_ints(&[0, 1])),
            ],
        };
        let gm = project_model(&otm, &maps, &zero()).unwrap();
        let lifted = lift_model(&gm, &maps, &t, &zero()).unwrap();
        assert!(lifted.is_valid_for(&t, &zero()));
        assert_eq!(lifted.mu_of("heads"), otm.mu_of("heads"));
        assert_eq!(lifted.xi_of("t|flip"), otm.xi_of("t|flip"));
    }
}
