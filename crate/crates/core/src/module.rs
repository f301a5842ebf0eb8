//! Finite-dimensional graded modules given by explicit bases and arrow
//! action matrices.
//!
//! A module assigns a vector space to each `(vertex, degree)` and, to each
//! arrow `α: x → y`, a matrix from `(x, d)` to `(y, d + 1)`. The shift is
//! `M⟨τ⟩_n = M_{n+τ}`, so shifting by `τ` moves every component to degree
//! `d - τ`.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::RangeInclusive;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::GradedAlgebra;
use crate::linalg::{is_zero_vec, rat, unit_vec, zero_vec, Matrix, Rational, Subspace};
use crate::presentation::QuiverPresentation;

/// `(vertex, degree)`.
pub type Key = (usize, i64);

/// A submodule, as one subspace per component; absent keys are zero.
pub type Submodule = BTreeMap<Key, Subspace>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedModule {
    quiver: Arc<QuiverPresentation>,
    dims: BTreeMap<Key, usize>,
    /// Keyed by `(arrow, source degree)`; present only between nonzero components.
    actions: BTreeMap<(usize, i64), Matrix>,
}

impl GradedModule {
    /// Drops zero components and zero-sized actions; panics on shape errors.
    pub fn from_parts(
        quiver: Arc<QuiverPresentation>,
        dims: BTreeMap<Key, usize>,
        actions: BTreeMap<(usize, i64), Matrix>,
    ) -> Self {
        let dims: BTreeMap<Key, usize> = dims.into_iter().filter(|&(_, d)| d > 0).collect();
        let mut kept = BTreeMap::new();
        for ((a, d), m) in actions {
            let arrow = &quiver.arrows[a];
            let (s, t) = (dims.get(&(arrow.from, d)), dims.get(&(arrow.to, d + 1)));
            if let (Some(&s), Some(&t)) = (s, t) {
                assert_eq!((m.rows(), m.cols()), (t, s), "action shape for arrow {a} at degree {d}");
                if !m.is_zero() {
                    kept.insert((a, d), m);
                }
            }
        }
        GradedModule { quiver, dims, actions: kept }
    }

    pub fn zero(quiver: Arc<QuiverPresentation>) -> Self {
        GradedModule { quiver, dims: BTreeMap::new(), actions: BTreeMap::new() }
    }

    pub fn simple(quiver: Arc<QuiverPresentation>, x: usize) -> Self {
        Self::from_parts(quiver, BTreeMap::from([((x, 0), 1)]), BTreeMap::new())
    }

    /// `A^x = A(x, -)`, with top in degree 0.
    pub fn projective(alg: &GradedAlgebra, x: usize) -> Self {
        let q = alg.presentation_arc();
        let mut dims = BTreeMap::new();
        for y in 0..alg.vertex_count() {
            for n in 0..=alg.top_degree() {
                dims.insert((y, n as i64), alg.dim(x, y, n));
            }
        }
        let mut actions = BTreeMap::new();
        for a in 0..q.arrows.len() {
            for n in 0..alg.top_degree() {
                actions.insert((a, n as i64), alg.right_mul_matrix(x, n, a));
            }
        }
        Self::from_parts(q, dims, actions)
    }

    /// `I^x = D(A^op_x)`, with socle in degree 0. Takes the opposite algebra.
    pub fn injective(op: &GradedAlgebra, x: usize) -> Self {
        Self::projective(op, x).dual()
    }

    pub fn quiver(&self) -> &Arc<QuiverPresentation> {
        &self.quiver
    }

    pub fn dim(&self, key: Key) -> usize {
        self.dims.get(&key).copied().unwrap_or(0)
    }

    pub fn dims(&self) -> &BTreeMap<Key, usize> {
        &self.dims
    }

    pub fn total_dim(&self) -> usize {
        self.dims.values().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.dims.keys().map(|k| k.1).min()
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.dims.keys().map(|k| k.1).max()
    }

    pub fn action(&self, a: usize, d: i64) -> Option<&Matrix> {
        self.actions.get(&(a, d))
    }

    /// Action matrix of `a` at degree `d`, zero-filled when absent.
    pub fn action_matrix(&self, a: usize, d: i64) -> Matrix {
        let arrow = &self.quiver.arrows[a];
        self.actions
            .get(&(a, d))
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.dim((arrow.to, d + 1)), self.dim((arrow.from, d))))
    }

    pub fn apply(&self, a: usize, d: i64, v: &[Rational]) -> Vec<Rational> {
        match self.actions.get(&(a, d)) {
            Some(m) => m.mul_vec(v),
            None => zero_vec(self.dim((self.quiver.arrows[a].to, d + 1))),
        }
    }

    pub fn apply_path(&self, path: &[usize], d: i64, v: &[Rational]) -> Vec<Rational> {
        let mut cur = v.to_vec();
        for (i, &a) in path.iter().enumerate() {
            cur = self.apply(a, d + i as i64, &cur);
        }
        cur
    }

    /// Matrix of the path `path` starting in degree `d`.
    pub fn path_matrix(&self, path: &[usize], d: i64) -> Matrix {
        let x = self.quiver.path_source(path);
        let y = self.quiver.path_target(path);
        let cols = self.dim((x, d));
        let columns: Vec<Vec<Rational>> =
            (0..cols).map(|i| self.apply_path(path, d, &unit_vec(cols, i))).collect();
        Matrix::from_columns(self.dim((y, d + path.len() as i64)), &columns)
    }

    /// Every relation acts as zero on every component.
    pub fn satisfies_relations(&self) -> bool {
        let Some((lo, hi)) = self.min_degree().zip(self.max_degree()) else {
            return true;
        };
        self.quiver.relations.iter().all(|rel| {
            let x = self.quiver.path_source(&rel.terms[0].1);
            (lo..=hi).filter(|&d| self.dim((x, d)) > 0).all(|d| {
                let mut acc: Option<Matrix> = None;
                for (c, path) in &rel.terms {
                    let m = self.path_matrix(path, d).scale(c);
                    acc = Some(match acc {
                        Some(a) => a.add(&m),
                        None => m,
                    });
                }
                acc.is_none_or(|m| m.is_zero())
            })
        })
    }

    /// Offsets of each component in the concatenated coordinate vector.
    pub fn offsets(&self) -> BTreeMap<Key, usize> {
        let mut off = 0;
        self.dims
            .iter()
            .map(|(&k, &d)| {
                let o = off;
                off += d;
                (k, o)
            })
            .collect()
    }

    pub fn shift(&self, tau: i64) -> GradedModule {
        GradedModule {
            quiver: Arc::clone(&self.quiver),
            dims: self.dims.iter().map(|(&(x, d), &n)| ((x, d - tau), n)).collect(),
            actions: self.actions.iter().map(|(&(a, d), m)| ((a, d - tau), m.clone())).collect(),
        }
    }

    /// `DM(x)_n = D(M(x)_{-n})`, over the opposite quiver.
    pub fn dual(&self) -> GradedModule {
        GradedModule {
            quiver: Arc::new(self.quiver.opposite()),
            dims: self.dims.iter().map(|(&(x, d), &n)| ((x, -d), n)).collect(),
            actions: self.actions.iter().map(|(&(a, d), m)| ((a, -d - 1), m.transpose())).collect(),
        }
    }

    /// Direct sum with its canonical injections.
    pub fn direct_sum(quiver: Arc<QuiverPresentation>, parts: &[Arc<GradedModule>]) -> (Arc<GradedModule>, Vec<GradedMap>) {
        let mut dims: BTreeMap<Key, usize> = BTreeMap::new();
        let mut part_off: Vec<BTreeMap<Key, usize>> = Vec::new();
        for p in parts {
            let mut offs = BTreeMap::new();
            for (&k, &d) in &p.dims {
                let e = dims.entry(k).or_insert(0);
                offs.insert(k, *e);
                *e += d;
            }
            part_off.push(offs);
        }
        let mut actions: BTreeMap<(usize, i64), Matrix> = BTreeMap::new();
        for (p, offs) in parts.iter().zip(&part_off) {
            for (&(a, d), m) in &p.actions {
                let arrow = &quiver.arrows[a];
                let (s, t) = ((arrow.from, d), (arrow.to, d + 1));
                let block = actions.entry((a, d)).or_insert_with(|| Matrix::zeros(dims[&t], dims[&s]));
                block.put_block(offs[&t], offs[&s], m);
            }
        }
        let sum = Arc::new(GradedModule::from_parts(Arc::clone(&quiver), dims, actions));
        let injections = parts
            .iter()
            .zip(&part_off)
            .map(|(p, offs)| {
                let blocks = p
                    .dims
                    .iter()
                    .map(|(&k, &d)| {
                        let mut b = Matrix::zeros(sum.dim(k), d);
                        b.put_block(offs[&k], 0, &Matrix::identity(d));
                        (k, b)
                    })
                    .collect();
                GradedMap::new(Arc::clone(p), Arc::clone(&sum), blocks)
            })
            .collect();
        (sum, injections)
    }

    /// Smallest submodule containing the given elements.
    pub fn generated(&self, gens: &[(Key, Vec<Rational>)]) -> Submodule {
        let mut spans: BTreeMap<Key, Vec<Vec<Rational>>> = BTreeMap::new();
        for (k, v) in gens {
            if !is_zero_vec(v) {
                spans.entry(*k).or_default().push(v.clone());
            }
        }
        let mut out = Submodule::new();
        let degrees: BTreeSet<i64> = self.dims.keys().map(|k| k.1).collect();
        for d in degrees {
            for x in 0..self.quiver.vertex_count() {
                let Some(vs) = spans.remove(&(x, d)) else { continue };
                let s = Subspace::from_vectors(self.dim((x, d)), vs);
                if s.is_zero() {
                    continue;
                }
                for a in self.quiver.arrows_from(x) {
                    let t = (self.quiver.arrows[a].to, d + 1);
                    if self.dim(t) == 0 {
                        continue;
                    }
                    for b in s.basis_vectors() {
                        let img = self.apply(a, d, &b);
                        if !is_zero_vec(&img) {
                            spans.entry(t).or_default().push(img);
                        }
                    }
                }
                out.insert((x, d), s);
            }
        }
        out
    }

    /// Submodule generated by every component at vertices satisfying `pred`;
    /// this is the trace of the projectives at those vertices.
    pub fn generated_at(&self, pred: impl Fn(usize) -> bool) -> Submodule {
        let gens: Vec<(Key, Vec<Rational>)> = self
            .dims
            .iter()
            .filter(|((x, _), _)| pred(*x))
            .flat_map(|(&k, &d)| (0..d).map(move |i| (k, unit_vec(d, i))))
            .collect();
        self.generated(&gens)
    }

    /// Sum of the images of all arrow actions.
    pub fn radical(&self) -> Submodule {
        let mut spans: BTreeMap<Key, Vec<Vec<Rational>>> = BTreeMap::new();
        for (&(a, d), m) in &self.actions {
            let t = (self.quiver.arrows[a].to, d + 1);
            spans.entry(t).or_default().extend(m.transpose().row_vectors());
        }
        spans
            .into_iter()
            .map(|(k, vs)| (k, Subspace::from_vectors(self.dim(k), vs)))
            .filter(|(_, s)| !s.is_zero())
            .collect()
    }

    /// Joint kernel of all arrow actions.
    pub fn socle(&self) -> Submodule {
        let mut out = Submodule::new();
        for (&(x, d), &n) in &self.dims {
            let mats: Vec<Matrix> = self.quiver.arrows_from(x).filter_map(|a| self.actions.get(&(a, d)).cloned()).collect();
            let stacked = Matrix::vstack(n, &mats.iter().collect::<Vec<_>>());
            let k = stacked.kernel();
            if !k.is_zero() {
                out.insert((x, d), k);
            }
        }
        out
    }

    pub fn is_submodule(&self, sub: &Submodule) -> bool {
        sub.iter().all(|(&(x, d), s)| {
            self.quiver.arrows_from(x).all(|a| {
                let t = (self.quiver.arrows[a].to, d + 1);
                s.basis_vectors().iter().all(|b| {
                    let img = self.apply(a, d, b);
                    is_zero_vec(&img) || sub.get(&t).is_some_and(|ts| ts.contains(&img))
                })
            })
        })
    }

    /// The submodule as a module, with its inclusion.
    pub fn submodule(self: &Arc<Self>, sub: &Submodule) -> (Arc<GradedModule>, GradedMap) {
        let dims = sub.iter().map(|(&k, s)| (k, s.dim())).collect();
        let mut actions = BTreeMap::new();
        for (&(x, d), s) in sub {
            for a in self.quiver.arrows_from(x) {
                let t = (self.quiver.arrows[a].to, d + 1);
                let Some(ts) = sub.get(&t) else { continue };
                let columns: Vec<Vec<Rational>> = s
                    .basis_vectors()
                    .iter()
                    .map(|b| ts.coordinates(&self.apply(a, d, b)).expect("submodule is arrow-stable"))
                    .collect();
                actions.insert((a, d), Matrix::from_columns(ts.dim(), &columns));
            }
        }
        let m = Arc::new(GradedModule::from_parts(Arc::clone(&self.quiver), dims, actions));
        let blocks = sub.iter().map(|(&k, s)| (k, s.basis().transpose())).collect();
        (Arc::clone(&m), GradedMap::new(m, Arc::clone(self), blocks))
    }

    /// The quotient by a submodule, with its projection. The quotient basis at
    /// each component is the set of free columns of the submodule's echelon
    /// basis.
    pub fn quotient(self: &Arc<Self>, sub: &Submodule) -> (Arc<GradedModule>, GradedMap) {
        let zero = |k: Key| Subspace::zero(self.dim(k));
        let space = |k: Key| sub.get(&k).cloned().unwrap_or_else(|| zero(k));
        let dims: BTreeMap<Key, usize> = self.dims.iter().map(|(&k, &n)| (k, n - space(k).dim())).collect();
        let mut actions = BTreeMap::new();
        for (&(a, d), m) in &self.actions {
            let arrow = &self.quiver.arrows[a];
            let (s, t) = (space((arrow.from, d)), space((arrow.to, d + 1)));
            let columns: Vec<Vec<Rational>> =
                s.free_columns().into_iter().map(|f| t.quotient_coordinates(&m.column(f))).collect();
            actions.insert((a, d), Matrix::from_columns(t.free_columns().len(), &columns));
        }
        let q = Arc::new(GradedModule::from_parts(Arc::clone(&self.quiver), dims, actions));
        let blocks = self
            .dims
            .iter()
            .map(|(&k, &n)| {
                let s = space(k);
                let columns: Vec<Vec<Rational>> = (0..n).map(|j| s.quotient_coordinates(&unit_vec(n, j))).collect();
                (k, Matrix::from_columns(n - s.dim(), &columns))
            })
            .collect();
        (Arc::clone(&q), GradedMap::new(Arc::clone(self), q, blocks))
    }

    pub fn top(self: &Arc<Self>) -> Arc<GradedModule> {
        self.quotient(&self.radical()).0
    }
}

/// Total dimension of a submodule.
pub fn sub_dim(sub: &Submodule) -> usize {
    sub.values().map(Subspace::dim).sum()
}

/// Degree-preserving module homomorphism. Blocks are `dim target × dim source`
/// and absent blocks are zero.
#[derive(Clone, Debug)]
pub struct GradedMap {
    source: Arc<GradedModule>,
    target: Arc<GradedModule>,
    blocks: BTreeMap<Key, Matrix>,
}

impl GradedMap {
    pub fn new(source: Arc<GradedModule>, target: Arc<GradedModule>, blocks: BTreeMap<Key, Matrix>) -> Self {
        let blocks = blocks
            .into_iter()
            .filter(|(k, m)| {
                assert_eq!((m.rows(), m.cols()), (target.dim(*k), source.dim(*k)), "block shape at {k:?}");
                !m.is_zero()
            })
            .collect();
        GradedMap { source, target, blocks }
    }

    pub fn zero(source: Arc<GradedModule>, target: Arc<GradedModule>) -> Self {
        GradedMap { source, target, blocks: BTreeMap::new() }
    }

    pub fn identity(m: Arc<GradedModule>) -> Self {
        let blocks = m.dims.iter().map(|(&k, &d)| (k, Matrix::identity(d))).collect();
        GradedMap { source: Arc::clone(&m), target: m, blocks }
    }

    pub fn source(&self) -> &Arc<GradedModule> {
        &self.source
    }

    pub fn target(&self) -> &Arc<GradedModule> {
        &self.target
    }

    pub fn block(&self, k: Key) -> Matrix {
        self.blocks.get(&k).cloned().unwrap_or_else(|| Matrix::zeros(self.target.dim(k), self.source.dim(k)))
    }

    pub fn blocks(&self) -> &BTreeMap<Key, Matrix> {
        &self.blocks
    }

    pub fn apply(&self, k: Key, v: &[Rational]) -> Vec<Rational> {
        match self.blocks.get(&k) {
            Some(m) => m.mul_vec(v),
            None => zero_vec(self.target.dim(k)),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.is_empty()
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &GradedMap) -> GradedMap {
        let blocks = self
            .blocks
            .iter()
            .filter_map(|(k, m)| next.blocks.get(k).map(|n| (*k, n.mul(m))))
            .collect();
        GradedMap::new(Arc::clone(&self.source), Arc::clone(&next.target), blocks)
    }

    pub fn add(&self, other: &GradedMap) -> GradedMap {
        let keys: BTreeSet<Key> = self.blocks.keys().chain(other.blocks.keys()).copied().collect();
        let blocks = keys.into_iter().map(|k| (k, self.block(k).add(&other.block(k)))).collect();
        GradedMap::new(Arc::clone(&self.source), Arc::clone(&self.target), blocks)
    }

    pub fn scale(&self, c: &Rational) -> GradedMap {
        let blocks = self.blocks.iter().map(|(&k, m)| (k, m.scale(c))).collect();
        GradedMap::new(Arc::clone(&self.source), Arc::clone(&self.target), blocks)
    }

    /// Commutes with every arrow action.
    pub fn is_homomorphism(&self) -> bool {
        let q = Arc::clone(self.source.quiver());
        self.source.dims.keys().all(|&(x, d)| {
            q.arrows_from(x).all(|a| {
                let y = q.arrows[a].to;
                let lhs = self.target.action_matrix(a, d).mul(&self.block((x, d)));
                let rhs = self.block((y, d + 1)).mul(&self.source.action_matrix(a, d));
                lhs == rhs
            })
        })
    }

    pub fn kernel(&self) -> Submodule {
        self.source
            .dims
            .keys()
            .map(|&k| (k, self.block(k).kernel()))
            .filter(|(_, s)| !s.is_zero())
            .collect()
    }

    pub fn image(&self) -> Submodule {
        self.blocks
            .iter()
            .map(|(&k, m)| (k, m.column_space()))
            .filter(|(_, s)| !s.is_zero())
            .collect()
    }

    pub fn cokernel(&self) -> (Arc<GradedModule>, GradedMap) {
        self.target.quotient(&self.image())
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().is_empty()
    }

    pub fn is_surjective(&self) -> bool {
        sub_dim(&self.image()) == self.target.total_dim()
    }

    pub fn is_iso(&self) -> bool {
        self.source.dims == self.target.dims
            && self.source.dims.iter().all(|(&k, _)| self.block(k).is_invertible())
    }

    pub fn shift(&self, tau: i64) -> GradedMap {
        GradedMap {
            source: Arc::new(self.source.shift(tau)),
            target: Arc::new(self.target.shift(tau)),
            blocks: self.blocks.iter().map(|(&(x, d), m)| ((x, d - tau), m.clone())).collect(),
        }
    }

    /// `Df: DN → DM`.
    pub fn dual(&self) -> GradedMap {
        GradedMap {
            source: Arc::new(self.target.dual()),
            target: Arc::new(self.source.dual()),
            blocks: self.blocks.iter().map(|(&(x, d), m)| ((x, -d), m.transpose())).collect(),
        }
    }

    /// Same blocks, reattached to isomorphic-as-data source and target.
    pub fn retarget(&self, source: Arc<GradedModule>, target: Arc<GradedModule>) -> GradedMap {
        GradedMap::new(source, target, self.blocks.clone())
    }

    /// Concatenated block entries over the common components of source and
    /// target, in key order; the layout used by [`hom_basis`].
    pub fn flatten(&self) -> Vec<Rational> {
        let mut out = Vec::new();
        for (&k, &s) in &self.source.dims {
            let t = self.target.dim(k);
            if t == 0 {
                continue;
            }
            match self.blocks.get(&k) {
                Some(m) => out.extend(m.entries().iter().cloned()),
                None => out.extend(zero_vec(s * t)),
            }
        }
        out
    }

    pub fn trace(&self) -> Rational {
        self.blocks.values().map(Matrix::trace).sum()
    }
}

/// Basis of degree-0 homomorphisms `M → N`, from the kernel of the
/// commutation system.
pub fn hom_basis(m: &Arc<GradedModule>, n: &Arc<GradedModule>) -> Vec<GradedMap> {
    let q = Arc::clone(m.quiver());
    let mut layout: BTreeMap<Key, usize> = BTreeMap::new();
    let mut unknowns = 0;
    for (&k, &s) in &m.dims {
        let t = n.dim(k);
        if t > 0 {
            layout.insert(k, unknowns);
            unknowns += s * t;
        }
    }
    if unknowns == 0 {
        return Vec::new();
    }
    let mut rows = Vec::new();
    for (&(x, d), &s) in &m.dims {
        for a in q.arrows_from(x) {
            let y = q.arrows[a].to;
            let t = n.dim((y, d + 1));
            if t == 0 {
                continue;
            }
            let na = n.action_matrix(a, d);
            let ma = m.action_matrix(a, d);
            let (nx, my) = (n.dim((x, d)), m.dim((y, d + 1)));
            // (N_a · f_x - f_y · M_a)[r][c] = 0
            for r in 0..t {
                for c in 0..s {
                    let mut row = zero_vec(unknowns);
                    if let Some(&o) = layout.get(&(x, d)) {
                        for k in 0..nx {
                            row[o + k * s + c] += na.get(r, k);
                        }
                    }
                    if let Some(&o) = layout.get(&(y, d + 1)) {
                        for k in 0..my {
                            row[o + r * my + k] -= ma.get(k, c);
                        }
                    }
                    if !is_zero_vec(&row) {
                        rows.push(row);
                    }
                }
            }
        }
    }
    let kernel = Matrix::from_rows(unknowns, rows).kernel();
    kernel
        .basis_vectors()
        .into_iter()
        .map(|v| {
            let blocks = layout
                .iter()
                .map(|(&k, &o)| {
                    let (s, t) = (m.dim(k), n.dim(k));
                    (k, Matrix::from_rows(s, (0..t).map(|r| v[o + r * s..o + (r + 1) * s].to_vec()).collect()))
                })
                .collect();
            GradedMap::new(Arc::clone(m), Arc::clone(n), blocks)
        })
        .collect()
}

/// Shifts `s` for which `Hom(M, N⟨s⟩)` can be nonzero.
pub fn hom_window(m: &GradedModule, n: &GradedModule) -> Option<RangeInclusive<i64>> {
    let (mlo, mhi) = m.min_degree().zip(m.max_degree())?;
    let (nlo, nhi) = n.min_degree().zip(n.max_degree())?;
    Some(nlo - mhi..=nhi - mlo)
}

/// `s ↦ dim Hom(M, N⟨s⟩)`, nonzero entries only.
pub fn graded_hom_dims(m: &Arc<GradedModule>, n: &Arc<GradedModule>) -> BTreeMap<i64, usize> {
    let Some(w) = hom_window(m, n) else { return BTreeMap::new() };
    w.filter_map(|s| {
        let d = hom_basis(m, &Arc::new(n.shift(s))).len();
        (d > 0).then_some((s, d))
    })
    .collect()
}

/// An invertible homomorphism `M → N`, if one is found. Tries each basis
/// map, then deterministic pseudo-random combinations with small integer
/// coefficients.
pub fn is_iso(m: &Arc<GradedModule>, n: &Arc<GradedModule>) -> Option<GradedMap> {
    if m.dims != n.dims {
        return None;
    }
    if m.is_zero() {
        return Some(GradedMap::zero(Arc::clone(m), Arc::clone(n)));
    }
    let basis = hom_basis(m, n);
    if let Some(f) = basis.iter().find(|f| f.is_iso()) {
        return Some(f.clone());
    }
    if basis.len() < 2 {
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x51_50);
    for _ in 0..64 {
        let mut acc = GradedMap::zero(Arc::clone(m), Arc::clone(n));
        for f in &basis {
            let c: i64 = rng.gen_range(-3..=3);
            acc = acc.add(&f.scale(&rat(c)));
        }
        if acc.is_iso() {
            return Some(acc);
        }
    }
    None
}

/// Degree-0 endomorphism basis together with the dimension of its radical,
/// computed as the kernel of the trace form `(f, g) ↦ tr(f g)`.
pub fn endomorphism_radical(m: &Arc<GradedModule>) -> (Vec<GradedMap>, Subspace) {
    let basis = hom_basis(m, m);
    let k = basis.len();
    let mut gram = Matrix::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            gram.set(i, j, basis[j].then(&basis[i]).trace());
        }
    }
    let rad = gram.kernel();
    (basis, rad)
}

/// The degree-0 endomorphism algebra is local: its radical has codimension 1.
pub fn is_indecomposable(m: &Arc<GradedModule>) -> bool {
    if m.is_zero() {
        return false;
    }
    let (basis, rad) = endomorphism_radical(m);
    basis.len() == rad.dim() + 1
}

/// Sum of the images of all homomorphisms, in all shifts, from members of
/// `family` into `m`.
pub fn trace(family: &[Arc<GradedModule>], m: &Arc<GradedModule>) -> Submodule {
    let mut spans: BTreeMap<Key, Vec<Vec<Rational>>> = BTreeMap::new();
    for f in family {
        let Some(w) = hom_window(f, m) else { continue };
        for s in w {
            // maps F⟨-s⟩ → M are the maps F → M⟨s⟩
            let fs = Arc::new(f.shift(-s));
            for h in hom_basis(&fs, m) {
                for (k, sub) in h.image() {
                    spans.entry(k).or_default().extend(sub.basis_vectors());
                }
            }
        }
    }
    spans
        .into_iter()
        .map(|(k, vs)| (k, Subspace::from_vectors(m.dim(k), vs)))
        .filter(|(_, s)| !s.is_zero())
        .collect()
}
