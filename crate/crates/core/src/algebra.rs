//! Degree-by-degree normal forms for a path algebra modulo homogeneous
//! relations.
//!
//! The component `A(x, y)_n` is built from `A(x, z)_{n-1} ⊗ (arrows z → y)`
//! modulo the span of `p · r` for basis paths `p` and relations `r` ending at
//! `y`. Row reduction keeps the non-pivot candidates as basis, so every basis
//! element is a monomial path and products are computed by right
//! multiplication with arrows one at a time.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_traits::Zero;
use thiserror::Error;

use crate::linalg::{add_scaled, zero_vec, Matrix, Rational, Subspace};
use crate::presentation::QuiverPresentation;

pub const DEFAULT_DEGREE_CAP: usize = 32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("not finite-dimensional within cap {0}")]
    NotFiniteDimensional(usize),
    #[error("degree cap must be at least 2, got {0}")]
    CapTooSmall(usize),
}

#[derive(Clone, Debug)]
struct Component {
    paths: Vec<Vec<usize>>,
    /// Candidate `(i, α)`: basis element `i` of the previous degree followed by `α`.
    cand_index: HashMap<(usize, usize), usize>,
    candidates: usize,
    relations: Subspace,
    free: Vec<usize>,
}

impl Component {
    fn unit() -> Self {
        Component {
            paths: vec![Vec::new()],
            cand_index: HashMap::new(),
            candidates: 0,
            relations: Subspace::zero(0),
            free: Vec::new(),
        }
    }

    fn project(&self, cand: &[Rational]) -> Vec<Rational> {
        let r = self.relations.reduce(cand);
        self.free.iter().map(|&j| r[j].clone()).collect()
    }
}

#[derive(Clone, Debug)]
pub struct GradedAlgebra {
    pres: Arc<QuiverPresentation>,
    comps: BTreeMap<(usize, usize, usize), Component>,
    top_degree: usize,
}

pub fn build_algebra(p: &QuiverPresentation, degree_cap: usize) -> Result<GradedAlgebra, AlgebraError> {
    if degree_cap < 2 {
        return Err(AlgebraError::CapTooSmall(degree_cap));
    }
    let nv = p.vertex_count();
    let mut alg = GradedAlgebra { pres: Arc::new(p.clone()), comps: BTreeMap::new(), top_degree: 0 };
    for x in 0..nv {
        alg.comps.insert((x, x, 0), Component::unit());
    }
    for n in 1..=degree_cap + 1 {
        let mut any = false;
        for x in 0..nv {
            for y in 0..nv {
                if let Some(c) = alg.build_component(x, y, n) {
                    if !c.paths.is_empty() {
                        any = true;
                        alg.comps.insert((x, y, n), c);
                    }
                }
            }
        }
        if !any {
            alg.top_degree = n - 1;
            return Ok(alg);
        }
    }
    Err(AlgebraError::NotFiniteDimensional(degree_cap))
}

impl GradedAlgebra {
    fn build_component(&self, x: usize, y: usize, n: usize) -> Option<Component> {
        let p = &self.pres;
        let mut cand_index = HashMap::new();
        let mut cand_list = Vec::new();
        for a in p.arrows_into(y) {
            for i in 0..self.dim(x, p.arrows[a].from, n - 1) {
                cand_index.insert((i, a), cand_list.len());
                cand_list.push((i, a));
            }
        }
        if cand_list.is_empty() {
            return None;
        }
        let nc = cand_list.len();
        let mut rows = Vec::new();
        for rel in &p.relations {
            let k = rel.len();
            let (src, tgt) = (p.path_source(&rel.terms[0].1), p.path_target(&rel.terms[0].1));
            if tgt != y || k > n {
                continue;
            }
            for j in 0..self.dim(x, src, n - k) {
                let mut row = zero_vec(nc);
                for (c, path) in &rel.terms {
                    let start = crate::linalg::unit_vec(self.dim(x, src, n - k), j);
                    let (last, prefix) = path.split_last().expect("relation path");
                    let w = self.right_mul_path(x, src, n - k, &start, prefix);
                    for (i, wi) in w.iter().enumerate() {
                        if !wi.is_zero() {
                            row[cand_index[&(i, *last)]] += c * wi;
                        }
                    }
                }
                rows.push(row);
            }
        }
        let relations = Subspace::from_vectors(nc, rows);
        let free = relations.free_columns();
        let paths = free
            .iter()
            .map(|&f| {
                let (i, a) = cand_list[f];
                let mut path = self.comps[&(x, p.arrows[a].from, n - 1)].paths[i].clone();
                path.push(a);
                path
            })
            .collect();
        Some(Component { paths, cand_index, candidates: nc, relations, free })
    }

    pub fn presentation(&self) -> &QuiverPresentation {
        &self.pres
    }

    pub fn presentation_arc(&self) -> Arc<QuiverPresentation> {
        Arc::clone(&self.pres)
    }

    pub fn vertex_count(&self) -> usize {
        self.pres.vertex_count()
    }

    pub fn top_degree(&self) -> usize {
        self.top_degree
    }

    pub fn dim(&self, x: usize, y: usize, n: usize) -> usize {
        self.comps.get(&(x, y, n)).map_or(0, |c| c.paths.len())
    }

    /// Monomial paths forming the basis of `A(x, y)_n`.
    pub fn basis_paths(&self, x: usize, y: usize, n: usize) -> &[Vec<usize>] {
        self.comps.get(&(x, y, n)).map_or(&[], |c| &c.paths)
    }

    /// Nonzero components `(x, y, n) ↦ dim`.
    pub fn dims(&self) -> BTreeMap<(usize, usize, usize), usize> {
        self.comps.iter().map(|(&k, c)| (k, c.paths.len())).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.comps.values().map(|c| c.paths.len()).sum()
    }

    /// Total dimension per degree.
    pub fn hilbert(&self) -> BTreeMap<usize, usize> {
        let mut h = BTreeMap::new();
        for (&(_, _, n), c) in &self.comps {
            *h.entry(n).or_insert(0) += c.paths.len();
        }
        h
    }

    /// `v ∈ A(x, z)_n` followed by the arrow `a`, in `A(x, tgt a)_{n+1}`.
    pub fn right_mul_arrow(&self, x: usize, z: usize, n: usize, v: &[Rational], a: usize) -> Vec<Rational> {
        debug_assert_eq!(self.pres.arrows[a].from, z);
        let y = self.pres.arrows[a].to;
        let Some(c) = self.comps.get(&(x, y, n + 1)) else {
            return Vec::new();
        };
        let mut cand = zero_vec(c.candidates);
        for (i, vi) in v.iter().enumerate() {
            if !vi.is_zero() {
                cand[c.cand_index[&(i, a)]] += vi;
            }
        }
        c.project(&cand)
    }

    pub fn right_mul_path(&self, x: usize, z: usize, n: usize, v: &[Rational], path: &[usize]) -> Vec<Rational> {
        let mut cur = v.to_vec();
        let (mut z, mut n) = (z, n);
        for &a in path {
            cur = self.right_mul_arrow(x, z, n, &cur, a);
            z = self.pres.arrows[a].to;
            n += 1;
        }
        if cur.is_empty() {
            return zero_vec(self.dim(x, z, n));
        }
        cur
    }

    /// Matrix of right multiplication by `a` from `A(x, src a)_n` to `A(x, tgt a)_{n+1}`.
    pub fn right_mul_matrix(&self, x: usize, n: usize, a: usize) -> Matrix {
        let arrow = &self.pres.arrows[a];
        let (rows, cols) = (self.dim(x, arrow.to, n + 1), self.dim(x, arrow.from, n));
        let columns: Vec<Vec<Rational>> = (0..cols)
            .map(|i| {
                let e = crate::linalg::unit_vec(cols, i);
                let r = self.right_mul_arrow(x, arrow.from, n, &e, a);
                if r.is_empty() { zero_vec(rows) } else { r }
            })
            .collect();
        Matrix::from_columns(rows, &columns)
    }

    /// Normal form of a path starting at `x`: `(target, length, coordinates)`.
    pub fn reduce_path(&self, x: usize, path: &[usize]) -> (usize, usize, Vec<Rational>) {
        let y = if path.is_empty() { x } else { self.pres.path_target(path) };
        (y, path.len(), self.right_mul_path(x, x, 0, &[Rational::from_integer(1.into())], path))
    }

    /// Product of `u ∈ A(x, y)_n` followed by `w ∈ A(y, z)_m`.
    pub fn mul(&self, x: usize, y: usize, n: usize, u: &[Rational], z: usize, m: usize, w: &[Rational]) -> Vec<Rational> {
        let mut out = zero_vec(self.dim(x, z, n + m));
        for (j, wj) in w.iter().enumerate() {
            if wj.is_zero() {
                continue;
            }
            let path = &self.comps[&(y, z, m)].paths[j];
            let r = self.right_mul_path(x, y, n, u, path);
            add_scaled(&mut out, wj, &r);
        }
        out
    }

    /// Dimensions of `A_+ / A_+^2`, per `(x, y, n)`, nonzero entries only.
    pub fn species(&self) -> BTreeMap<(usize, usize, usize), usize> {
        let nv = self.vertex_count();
        let mut out = BTreeMap::new();
        for (&(x, y, n), c) in &self.comps {
            if n == 0 {
                continue;
            }
            let mut products = Vec::new();
            for a in 1..n {
                for z in 0..nv {
                    for i in 0..self.dim(x, z, a) {
                        let u = crate::linalg::unit_vec(self.dim(x, z, a), i);
                        for j in 0..self.dim(z, y, n - a) {
                            let w = crate::linalg::unit_vec(self.dim(z, y, n - a), j);
                            products.push(self.mul(x, z, a, &u, y, n - a, &w));
                        }
                    }
                }
            }
            let sq = Subspace::from_vectors(c.paths.len(), products).dim();
            if c.paths.len() > sq {
                out.insert((x, y, n), c.paths.len() - sq);
            }
        }
        out
    }

    pub fn opposite(&self) -> GradedAlgebra {
        build_algebra(&self.pres.opposite(), self.top_degree.max(1) + 1)
            .expect("opposite of a finite-dimensional algebra is finite-dimensional")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::linalg::unit_vec;
    use crate::presentation::parse_algebra;

    fn alg(text: &str) -> GradedAlgebra {
        build_algebra(&parse_algebra(text).unwrap(), DEFAULT_DEGREE_CAP).unwrap()
    }

    #[test]
    fn hilbert_tables() {
        let h = |t| alg(t).hilbert().into_iter().collect::<Vec<_>>();
        assert_eq!(h(fixtures::SL2_REGULAR), vec![(0, 2), (1, 2), (2, 1)]);
        assert_eq!(h(fixtures::SEMISIMPLE1), vec![(0, 1)]);
        assert_eq!(h(fixtures::DIGON_S1), vec![(0, 4), (1, 4)]);
        assert_eq!(alg(fixtures::SL2_REGULAR).total_dim(), 5);
    }

    #[test]
    fn sl2_basis_paths() {
        let a = alg(fixtures::SL2_REGULAR);
        // b then a survives at v; a then b dies at u
        assert_eq!(a.basis_paths(1, 1, 2), &[vec![1, 0]]);
        assert_eq!(a.dim(0, 0, 2), 0);
        let (y, n, c) = a.reduce_path(0, &[0, 1]);
        assert_eq!((y, n), (0, 2));
        assert!(c.iter().all(Zero::is_zero));
    }

    #[test]
    fn cap_is_enforced() {
        let loop_doc = r#"{"name":"loop","vertices":[{"id":"x","ht":0}],"arrows":[{"id":"a","from":"x","to":"x"}]}"#;
        let p = parse_algebra(loop_doc).unwrap();
        let err = build_algebra(&p, 5).unwrap_err();
        assert_eq!(err.to_string(), "not finite-dimensional within cap 5");
        assert_eq!(build_algebra(&p, 1).unwrap_err(), AlgebraError::CapTooSmall(1));
    }

    #[test]
    fn species_matches_arrows() {
        let a = alg(fixtures::SL2_REGULAR);
        let s = a.species();
        assert_eq!(s.len(), 2);
        assert_eq!(s[&(0, 1, 1)], 1);
        assert_eq!(s[&(1, 0, 1)], 1);
        assert!(alg(fixtures::SEMISIMPLE1).species().is_empty());
        let d = alg(fixtures::DIGON_S1);
        assert_eq!(d.species().len(), 4);
        for (&(x, y, n), &k) in &d.species() {
            assert_eq!(n, 1);
            assert_eq!(k, d.presentation().arrow_counts()[&(x, y)]);
        }
    }

    #[test]
    fn opposite_swaps_components() {
        for (_, text) in fixtures::ALL {
            let a = alg(text);
            let op = a.opposite();
            for (&(x, y, n), &d) in &a.dims() {
                assert_eq!(op.dim(y, x, n), d);
            }
            assert_eq!(op.total_dim(), a.total_dim());
            assert_eq!(op.opposite().dims(), a.dims());
        }
    }

    #[test]
    fn structure_constants_are_associative() {
        for (_, text) in fixtures::ALL {
            let a = alg(text);
            let dims = a.dims();
            for (&(x, y, n), &d1) in &dims {
                for (&(y2, z, m), &d2) in dims.range((y, 0, 0)..(y + 1, 0, 0)) {
                    assert_eq!(y2, y);
                    for (&(_, w, k), &d3) in dims.range((z, 0, 0)..(z + 1, 0, 0)) {
                        for i in 0..d1 {
                            for j in 0..d2 {
                                for l in 0..d3 {
                                    let (u, v, t) = (unit_vec(d1, i), unit_vec(d2, j), unit_vec(d3, l));
                                    let left = a.mul(x, z, n + m, &a.mul(x, y, n, &u, z, m, &v), w, k, &t);
                                    let right = a.mul(x, y, n, &u, w, m + k, &a.mul(y, z, m, &v, w, k, &t));
                                    assert_eq!(left, right);
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn degree_one_equals_arrow_count() {
        for (_, text) in fixtures::ALL {
            let a = alg(text);
            let counts = a.presentation().arrow_counts();
            for x in 0..a.vertex_count() {
                for y in 0..a.vertex_count() {
                    assert_eq!(a.dim(x, y, 1), counts.get(&(x, y)).copied().unwrap_or(0));
                    assert_eq!(a.dim(x, y, 0), usize::from(x == y));
                }
            }
        }
    }
}
