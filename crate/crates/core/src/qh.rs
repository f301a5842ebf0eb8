//! Standard, costandard and tilting modules and the quasi-hereditary check.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::algebra::GradedAlgebra;
use crate::category::GradedCategory;
use crate::linalg::{rat, Matrix, Rational, Subspace};
use crate::module::{endomorphism_radical, graded_hom_dims, hom_basis, hom_window, is_iso, GradedMap, GradedModule, Submodule};
use crate::par;
use crate::projective::projective_cover;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QhError {
    #[error("tilting construction for {0} did not stabilise")]
    TiltingDiverged(String),
    #[error("{0} is not filtered by standard modules")]
    NotDeltaFiltered(String),
}

/// `Δ(x)`: `A^x` modulo the trace of the projectives at strictly higher vertices.
pub fn standard(alg: &GradedAlgebra, x: usize) -> GradedModule {
    let p = Arc::new(GradedModule::projective(alg, x));
    let q = alg.presentation();
    let h = q.ht(x);
    let sub = p.generated_at(|y| q.ht(y) > h);
    Arc::unwrap_or_clone(p.quotient(&sub).0)
}

/// `∇(x) = D Δ^op(x)`. Takes the opposite algebra.
pub fn costandard(op: &GradedAlgebra, x: usize) -> GradedModule {
    standard(op, x).dual()
}

/// Subquotients `Δ(y)⟨s⟩` as `(y, s)`, listed from the top quotient down to
/// the bottom submodule.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeltaFiltration {
    pub layers: Vec<(usize, i64)>,
}

/// A Δ-filtration of `m`, if it has one.
///
/// Peels off the submodule generated by the components at the highest
/// vertices present. That submodule is a quotient of `⊕ Δ(y)⟨-d⟩` over its
/// top generators `(y, d)`, and the filtration exists at this step exactly when
/// the dimensions agree.
pub fn delta_filtration(alg: &GradedAlgebra, m: &Arc<GradedModule>) -> Option<DeltaFiltration> {
    let q = alg.presentation();
    let mut layers = Vec::new();
    let mut cur = Arc::clone(m);
    let mut cache: BTreeMap<usize, usize> = BTreeMap::new();
    while !cur.is_zero() {
        let h = cur.dims().keys().map(|&(y, _)| q.ht(y)).max().expect("nonzero module");
        let sub = cur.generated_at(|y| q.ht(y) == h);
        let (p, _) = projective_cover(alg, &cur, &sub);
        let expected: usize = p
            .generators()
            .iter()
            .map(|&(y, _)| *cache.entry(y).or_insert_with(|| standard(alg, y).total_dim()))
            .sum();
        if expected != crate::module::sub_dim(&sub) {
            return None;
        }
        let mut bottom: Vec<(usize, i64)> = p.generators().iter().map(|&(y, d)| (y, -d)).collect();
        bottom.extend(layers);
        layers = bottom;
        cur = cur.quotient(&sub).0;
    }
    Some(DeltaFiltration { layers })
}

/// A ∇-filtration of `m`, via `DM` over the opposite algebra; layers are
/// `∇(y)⟨s⟩` as `(y, s)`, from the top quotient down.
pub fn nabla_filtration(op: &GradedAlgebra, m: &Arc<GradedModule>) -> Option<DeltaFiltration> {
    let f = delta_filtration(op, &Arc::new(m.dual()))?;
    // D(Δ(y)⟨s⟩) = ∇(y)⟨-s⟩, and duality reverses the order of layers
    Some(DeltaFiltration { layers: f.layers.into_iter().rev().map(|(y, s)| (y, -s)).collect() })
}

/// Per-vertex outcome of the three defining clauses.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QhReport {
    pub pass: bool,
    /// `dim End(Δ(x))` over all shifts.
    pub endomorphisms: Vec<usize>,
    pub radical_ok: Vec<bool>,
    pub projective_filtrations: Vec<Option<DeltaFiltration>>,
    pub witnesses: Vec<String>,
}

/// The algebra with its standard and costandard modules.
#[derive(Clone, Debug)]
pub struct HighestWeight {
    pub alg: GradedAlgebra,
    pub op: GradedAlgebra,
    pub standards: Vec<Arc<GradedModule>>,
    pub op_standards: Vec<Arc<GradedModule>>,
    pub costandards: Vec<Arc<GradedModule>>,
}

impl HighestWeight {
    pub fn new(alg: GradedAlgebra) -> Self {
        let op = alg.opposite();
        let n = alg.vertex_count();
        let xs: Vec<usize> = (0..n).collect();
        let standards = par::map(&xs, |&x| Arc::new(standard(&alg, x)));
        let op_standards = par::map(&xs, |&x| Arc::new(standard(&op, x)));
        let costandards = op_standards.iter().map(|d| Arc::new(d.dual())).collect();
        HighestWeight { alg, op, standards, op_standards, costandards }
    }

    pub fn vertex_count(&self) -> usize {
        self.alg.vertex_count()
    }

    pub fn name(&self, x: usize) -> &str {
        self.alg.presentation().vid(x)
    }

    pub fn ht(&self, x: usize) -> i64 {
        self.alg.presentation().ht(x)
    }

    pub fn simple(&self, x: usize) -> Arc<GradedModule> {
        Arc::new(GradedModule::simple(self.alg.presentation_arc(), x))
    }

    pub fn projective(&self, x: usize) -> Arc<GradedModule> {
        Arc::new(GradedModule::projective(&self.alg, x))
    }

    pub fn injective(&self, x: usize) -> Arc<GradedModule> {
        Arc::new(GradedModule::injective(&self.op, x))
    }

    /// `End(Δ(x)) = k`, radical factors strictly lower, and `A^x ∈ F(Δ)`.
    pub fn check_qh(&self) -> QhReport {
        let n = self.vertex_count();
        let xs: Vec<usize> = (0..n).collect();
        let rows = par::map(&xs, |&x| {
            let d = &self.standards[x];
            let ends: usize = graded_hom_dims(d, d).values().sum();
            let mut wits = Vec::new();
            if ends != 1 {
                wits.push(format!("End Δ({}) has dimension {ends}", self.name(x)));
            }
            let mut radical_ok = true;
            for (&(y, e), s) in &d.radical() {
                if s.dim() > 0 && self.ht(y) >= self.ht(x) {
                    radical_ok = false;
                    wits.push(format!("S({}) occurs in Rad Δ({}) in degree {e}", self.name(y), self.name(x)));
                }
            }
            let filt = delta_filtration(&self.alg, &self.projective(x));
            if filt.is_none() {
                wits.push(format!("A^{} has no Δ-filtration", self.name(x)));
            }
            (ends, radical_ok, filt, wits)
        });
        let mut report = QhReport {
            pass: true,
            endomorphisms: Vec::new(),
            radical_ok: Vec::new(),
            projective_filtrations: Vec::new(),
            witnesses: Vec::new(),
        };
        for (ends, ok, filt, wits) in rows {
            report.endomorphisms.push(ends);
            report.radical_ok.push(ok);
            report.projective_filtrations.push(filt);
            report.witnesses.extend(wits);
        }
        report.pass = report.witnesses.is_empty();
        report
    }

    /// Every graded composition multiplicity of every standard is at most 1.
    pub fn multiplicity_free(&self) -> bool {
        self.standards.iter().all(|d| d.dims().values().all(|&k| k <= 1))
    }

    pub fn tiltings(&self) -> Result<Vec<Arc<GradedModule>>, QhError> {
        let xs: Vec<usize> = (0..self.vertex_count()).collect();
        par::map(&xs, |&x| tilting(&self.alg, &self.standards, x).map(Arc::new)).into_iter().collect()
    }

    pub fn op_tiltings(&self) -> Result<Vec<Arc<GradedModule>>, QhError> {
        let xs: Vec<usize> = (0..self.vertex_count()).collect();
        par::map(&xs, |&x| tilting(&self.op, &self.op_standards, x).map(Arc::new)).into_iter().collect()
    }
}

/// `A^y` with the kernel `K` of `A^y ↠ Δ(y)` and its inclusion.
fn standard_kernel(alg: &GradedAlgebra, y: usize) -> (Arc<GradedModule>, Arc<GradedModule>, GradedMap) {
    let q = alg.presentation();
    let p = Arc::new(GradedModule::projective(alg, y));
    let trace = p.generated_at(|z| q.ht(z) > q.ht(y));
    let (k, incl) = p.submodule(&trace);
    (p, k, incl)
}

/// Classes in `Ext¹(Δ(y)⟨s⟩, X)` as homomorphisms `K⟨s⟩ → X`, taken modulo
/// the restrictions of maps `A^y⟨s⟩ → X`. Returns the shifted `K`, `A^y` and
/// inclusion alongside.
fn ext1_classes(
    (p, k, incl): &(Arc<GradedModule>, Arc<GradedModule>, GradedMap),
    s: i64,
    x: &Arc<GradedModule>,
) -> (Arc<GradedModule>, Arc<GradedModule>, GradedMap, Vec<GradedMap>) {
    let ks = Arc::new(k.shift(s));
    let ps = Arc::new(p.shift(s));
    let incl_s = incl.shift(s).retarget(Arc::clone(&ks), Arc::clone(&ps));
    let homs = hom_basis(&ks, x);
    if homs.is_empty() {
        return (ks, ps, incl_s, Vec::new());
    }
    let restrictions: Vec<Vec<Rational>> =
        hom_basis(&ps, x).iter().map(|g| incl_s.then(g).flatten()).collect();
    let width = homs[0].flatten().len();
    let mut span = Subspace::from_vectors(width, restrictions);
    let mut classes = Vec::new();
    for h in homs {
        let v = h.flatten();
        if span.contains(&v) {
            continue;
        }
        span = span.sum(&Subspace::from_vectors(width, vec![v])).expect("same ambient");
        classes.push(h);
    }
    (ks, ps, incl_s, classes)
}

/// `T(x)` by Ringel's universal extensions, starting from `Δ(x)⟨0⟩` and
/// processing vertices by decreasing height, ties by id.
pub fn tilting(alg: &GradedAlgebra, standards: &[Arc<GradedModule>], x: usize) -> Result<GradedModule, QhError> {
    let q = alg.presentation();
    let mut order: Vec<usize> = (0..alg.vertex_count()).collect();
    order.sort_by(|&a, &b| q.ht(b).cmp(&q.ht(a)).then_with(|| q.vid(a).cmp(q.vid(b))));
    let kernels: Vec<_> = (0..alg.vertex_count()).map(|y| standard_kernel(alg, y)).collect();
    let mut cur = Arc::clone(&standards[x]);
    for _pass in 0..=alg.vertex_count() {
        let mut changed = false;
        for &y in &order {
            loop {
                let Some(w) = hom_window(&kernels[y].1, &cur) else { break };
                let mut extended = false;
                // Hom(K⟨s⟩, X) = Hom(K, X⟨-s⟩)
                for s in (-*w.end())..=(-*w.start()) {
                    let (_, ps, incl, classes) = ext1_classes(&kernels[y], s, &cur);
                    if classes.is_empty() {
                        continue;
                    }
                    cur = universal_extension(&cur, &ps, &incl, &classes);
                    extended = true;
                    changed = true;
                }
                if !extended {
                    break;
                }
            }
        }
        if !changed {
            return Ok(Arc::unwrap_or_clone(cur));
        }
    }
    Err(QhError::TiltingDiverged(q.vid(x).to_string()))
}

/// Pushout of `X ← K^r → (A^y)^r` along the classes `φ_i: K → X`.
fn universal_extension(
    x: &Arc<GradedModule>,
    p: &Arc<GradedModule>,
    incl: &GradedMap,
    classes: &[GradedMap],
) -> Arc<GradedModule> {
    let quiver = Arc::clone(x.quiver());
    let mut parts = vec![Arc::clone(x)];
    parts.extend(classes.iter().map(|_| Arc::clone(p)));
    let (big, inj) = GradedModule::direct_sum(quiver, &parts);
    let mut spans: BTreeMap<(usize, i64), Vec<Vec<Rational>>> = BTreeMap::new();
    for (i, phi) in classes.iter().enumerate() {
        let f = phi.then(&inj[0]).add(&incl.then(&inj[i + 1]).scale(&rat(-1)));
        for (key, s) in f.image() {
            spans.entry(key).or_default().extend(s.basis_vectors());
        }
    }
    let sub: Submodule =
        spans.into_iter().map(|(key, vs)| (key, Subspace::from_vectors(big.dim(key), vs))).collect();
    big.quotient(&sub).0
}

/// Graded hom category of the tiltings: component `(x, y, k)` is
/// `Hom(T(x), T(y)⟨k⟩)`, composing in path order.
pub fn ringel_dual(tilts: &[Arc<GradedModule>], names: Vec<String>) -> GradedCategory<i64> {
    let n = tilts.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).collect();
    let bases: Vec<Vec<(i64, Vec<GradedMap>)>> = par::map(&pairs, |&(x, y)| {
        let Some(w) = hom_window(&tilts[x], &tilts[y]) else { return Vec::new() };
        w.filter_map(|k| {
            let b = hom_basis(&tilts[x], &Arc::new(tilts[y].shift(k)));
            (!b.is_empty()).then_some((k, b))
        })
        .collect()
    });
    let mut comps: BTreeMap<(usize, usize, i64), Vec<GradedMap>> = BTreeMap::new();
    for (&(x, y), list) in pairs.iter().zip(bases) {
        for (k, b) in list {
            comps.insert((x, y, k), b);
        }
    }
    let dims = comps.iter().map(|(&k, b)| (k, b.len())).collect();
    let units = (0..n)
        .map(|x| {
            let b = comps.get(&(x, x, 0)).map(Vec::as_slice).unwrap_or(&[]);
            coordinates(b, &GradedMap::identity(Arc::clone(&tilts[x]))).unwrap_or_default()
        })
        .collect();
    let mut cat = GradedCategory::new(names, dims, units);
    for (&(x, y, k1), f) in &comps {
        for (&(y2, z, k2), g) in &comps {
            if y2 != y {
                continue;
            }
            let target = comps.get(&(x, z, k1 + k2)).map(Vec::as_slice).unwrap_or(&[]);
            let table = f
                .iter()
                .map(|fi| {
                    g.iter()
                        .map(|gj| {
                            let comp = fi.then(&gj.shift(k1));
                            coordinates(target, &comp).expect("composite lies in the hom space")
                        })
                        .collect()
                })
                .collect();
            cat.set_products((x, y, k1), (y, z, k2), table);
        }
    }
    cat
}

/// Coordinates of `f` in `basis` (all with the same source and target data).
fn coordinates(basis: &[GradedMap], f: &GradedMap) -> Option<Vec<Rational>> {
    if basis.is_empty() {
        return f.is_zero().then(Vec::new);
    }
    let cols: Vec<Vec<Rational>> = basis.iter().map(GradedMap::flatten).collect();
    let m = Matrix::from_columns(cols[0].len(), &cols);
    m.solve(&f.retarget(Arc::clone(basis[0].source()), Arc::clone(basis[0].target())).flatten())
}

/// Dual tilting `D T^op(y)` is a shift `T(y)⟨c⟩`; returns `c`.
pub fn dual_tilting_shift(tilt: &Arc<GradedModule>, op_tilt: &GradedModule) -> Option<i64> {
    let d = Arc::new(op_tilt.dual());
    let (lo, hi) = (d.min_degree()?, tilt.min_degree()?);
    let c = hi - lo;
    let shifted = Arc::new(tilt.shift(c));
    (is_iso(&shifted, &d).is_some()).then_some(c)
}

/// Endomorphisms of `m` in degree 0 modulo their radical, as the radical's
/// basis maps.
pub fn radical_endomorphisms(m: &Arc<GradedModule>) -> Vec<GradedMap> {
    let (basis, rad) = endomorphism_radical(m);
    rad.basis_vectors()
        .iter()
        .map(|c| {
            let mut acc = GradedMap::zero(Arc::clone(m), Arc::clone(m));
            for (ci, f) in c.iter().zip(&basis) {
                acc = acc.add(&f.scale(ci));
            }
            acc
        })
        .collect()
}
