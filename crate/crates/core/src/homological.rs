//! Injective and tilting (co)resolutions, bigraded Ext, Yoneda products and
//! Ext-categories.
//!
//! Ext classes are cocycles out of the minimal projective resolution: a class
//! in `Ext^n(M, N⟨m⟩)` is a list of images in `N⟨m⟩` of the generators of `P_n`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::algebra::GradedAlgebra;
use crate::category::{Bideg, GradedCategory};
use crate::linalg::{zero_vec, Matrix, Rational, Subspace};
use crate::module::{hom_basis, hom_window, sub_dim, GradedMap, GradedModule, Key};
use crate::par;
use crate::projective::{min_proj_resolution, ProjectiveResolution, ProjectiveSum};
use crate::qh::radical_endomorphisms;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomologicalError {
    #[error("left approximation of a cokernel is not injective at step {0}")]
    NotInjective(usize),
}

/// `(n, m) ↦ dim Ext^n(M, N⟨m⟩)`, nonzero entries only.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ExtTable {
    pub dims: BTreeMap<(usize, i64), usize>,
    /// Some term beyond the bound is nonzero, so higher Ext may be missing.
    pub truncated: bool,
}

/// Generator images of a map out of `term`, cut from a flat coordinate vector.
fn split_images(term: &ProjectiveSum, target: &GradedModule, coords: &[Rational]) -> Vec<Vec<Rational>> {
    let mut off = 0;
    term.generators()
        .iter()
        .map(|&k| {
            let d = target.dim(k);
            let v = coords[off..off + d].to_vec();
            off += d;
            v
        })
        .collect()
}

/// `Hom(P_i, N) → Hom(P_{i+1}, N)`, `φ ↦ φ ∘ d_{i+1}`, on flat coordinates.
fn cochain_matrix(res: &ProjectiveResolution, i: usize, target: &GradedModule) -> Matrix {
    let cols = res.terms[i].hom_dim(target);
    let Some(next) = res.terms.get(i + 1) else { return Matrix::zeros(0, cols) };
    let rows = next.hom_dim(target);
    let columns: Vec<Vec<Rational>> = (0..cols)
        .map(|c| {
            let mut e = zero_vec(cols);
            e[c] = num_traits::One::one();
            let images = split_images(&res.terms[i], target, &e);
            next.generators()
                .iter()
                .zip(&res.images[i + 1])
                .flat_map(|(&k, w)| res.terms[i].evaluate(target, &images, k, w))
                .collect()
        })
        .collect();
    Matrix::from_columns(rows, &columns)
}

/// `Ext^n(M, N⟨m⟩)` with a chosen basis of cocycle representatives.
#[derive(Clone, Debug)]
pub struct ExtSpace {
    pub n: usize,
    pub m: i64,
    target: Arc<GradedModule>,
    /// Flat cocycle coordinates, one per basis class.
    basis: Vec<Vec<Rational>>,
    /// Columns: the basis, then a basis of coboundaries.
    solver: Matrix,
    hom_dim: usize,
}

impl ExtSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// `N⟨m⟩`.
    pub fn target(&self) -> &Arc<GradedModule> {
        &self.target
    }

    pub fn class(&self, res: &ProjectiveResolution, i: usize) -> ExtClass {
        ExtClass { n: self.n, m: self.m, images: split_images(&res.terms[self.n], &self.target, &self.basis[i]) }
    }

    /// A basis of the coboundaries in this bidegree.
    pub fn coboundaries(&self, res: &ProjectiveResolution) -> Vec<ExtClass> {
        (self.basis.len()..self.solver.cols())
            .map(|j| ExtClass { n: self.n, m: self.m, images: split_images(&res.terms[self.n], &self.target, &self.solver.column(j)) })
            .collect()
    }

    /// Coordinates of a cocycle modulo coboundaries; `None` if it is not in
    /// the span of cocycles considered.
    pub fn reduce(&self, res: &ProjectiveResolution, class: &ExtClass) -> Option<Vec<Rational>> {
        let flat: Vec<Rational> = if class.images.is_empty() {
            zero_vec(self.hom_dim)
        } else {
            debug_assert_eq!(class.images.len(), res.terms[self.n].generators().len());
            class.images.concat()
        };
        let sol = self.solver.solve(&flat)?;
        Some(sol[..self.basis.len()].to_vec())
    }
}

/// A class in `Ext^n(M, N⟨m⟩)`: images in `N⟨m⟩` of the generators of `P_n(M)`.
/// Empty images stand for zero when `P_n(M)` is zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtClass {
    pub n: usize,
    pub m: i64,
    pub images: Vec<Vec<Rational>>,
}

impl ExtClass {
    /// The augmentation `P_0(M) → M`, as a class in `Ext^0(M, M)`.
    pub fn identity(res: &ProjectiveResolution) -> ExtClass {
        ExtClass { n: 0, m: 0, images: res.images.first().cloned().unwrap_or_default() }
    }
}

/// Shifts `m` for which `Hom(P_i, N⟨m⟩)` can be nonzero for some `i ≤ n_bound`.
fn shift_window(res: &ProjectiveResolution, n: &GradedModule, n_bound: usize) -> Vec<i64> {
    let (Some(lo), Some(hi)) = (n.min_degree(), n.max_degree()) else { return Vec::new() };
    let mut out: Vec<i64> = res
        .terms
        .iter()
        .take(n_bound + 1)
        .flat_map(|t| t.generators().iter().flat_map(move |&(_, d)| (lo - d)..=(hi - d)))
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// All `Ext^i(M, N⟨m⟩)` for `i ≤ n_bound` from a resolution of `M` that
/// reaches term `n_bound + 1`; spaces with nonzero cochains are kept even
/// when the cohomology vanishes, so that products can be reduced there.
pub fn ext_spaces(res: &ProjectiveResolution, n: &GradedModule, n_bound: usize) -> BTreeMap<(usize, i64), ExtSpace> {
    let shifts = shift_window(res, n, n_bound);
    let per_shift = par::map(&shifts, |&m| {
        let target = Arc::new(n.shift(m));
        let top = n_bound.min(res.len().saturating_sub(1));
        let deltas: Vec<Matrix> = (0..=top).map(|i| cochain_matrix(res, i, &target)).collect();
        let mut out = Vec::new();
        for i in 0..=top {
            let hom_dim = res.terms[i].hom_dim(&target);
            if hom_dim == 0 {
                continue;
            }
            let z = deltas[i].kernel();
            let b = if i == 0 { Subspace::zero(hom_dim) } else { deltas[i - 1].column_space() };
            let basis = z.complement_of(&b).expect("same ambient");
            let mut cols = basis.clone();
            cols.extend(b.basis_vectors());
            let solver = Matrix::from_columns(hom_dim, &cols);
            out.push(((i, m), ExtSpace { n: i, m, target: Arc::clone(&target), basis, solver, hom_dim }));
        }
        out
    });
    per_shift.into_iter().flatten().collect()
}

/// `Ext` through a minimal projective resolution of `M`.
pub fn ext_dims(alg: &GradedAlgebra, m: &Arc<GradedModule>, n: &GradedModule, n_bound: usize) -> ExtTable {
    let res = min_proj_resolution(alg, m, n_bound + 1);
    let dims = ext_spaces(&res, n, n_bound)
        .into_iter()
        .filter(|(_, s)| s.dim() > 0)
        .map(|(k, s)| (k, s.dim()))
        .collect();
    ExtTable { dims, truncated: res.len() > n_bound + 1 }
}

/// `0 → M → I^0 → I^1 → …`, the dual of a minimal projective resolution of
/// `DM` over the opposite algebra.
#[derive(Clone, Debug)]
pub struct InjectiveCoresolution {
    pub module: Arc<GradedModule>,
    pub terms: Vec<Arc<GradedModule>>,
    /// `(y, d)` for each summand `I^y⟨d⟩` of each term.
    pub cogenerators: Vec<Vec<Key>>,
    /// `maps[0]: M → I^0`, then `maps[i]: I^{i-1} → I^i`.
    pub maps: Vec<GradedMap>,
    pub truncated: bool,
}

pub fn min_inj_coresolution(op: &GradedAlgebra, m: &Arc<GradedModule>, length_bound: usize) -> InjectiveCoresolution {
    let dm = Arc::new(m.dual());
    let res = min_proj_resolution(op, &dm, length_bound);
    let terms: Vec<Arc<GradedModule>> = res.terms.iter().map(|t| Arc::new(t.module().dual())).collect();
    let maps = (0..res.len())
        .map(|i| {
            let src = if i == 0 { Arc::clone(m) } else { Arc::clone(&terms[i - 1]) };
            res.differential(i).dual().retarget(src, Arc::clone(&terms[i]))
        })
        .collect();
    InjectiveCoresolution {
        module: Arc::clone(m),
        cogenerators: res.terms.iter().map(|t| t.generators().to_vec()).collect(),
        terms,
        maps,
        truncated: res.truncated,
    }
}

/// `Ext` through a minimal injective coresolution of `N`; an independent
/// route to [`ext_dims`].
pub fn ext_dims_injective(op: &GradedAlgebra, m: &Arc<GradedModule>, n: &Arc<GradedModule>, n_bound: usize) -> ExtTable {
    let cores = min_inj_coresolution(op, n, n_bound + 1);
    let top = n_bound.min(cores.terms.len().saturating_sub(1));
    let mut shifts: Vec<i64> = cores
        .terms
        .iter()
        .take(top + 1)
        .filter_map(|t| hom_window(m, t))
        .flat_map(|w| w.collect::<Vec<_>>())
        .collect();
    shifts.sort_unstable();
    shifts.dedup();
    let rows = par::map(&shifts, |&s| {
        let shifted: Vec<Arc<GradedModule>> = cores.terms.iter().map(|t| Arc::new(t.shift(s))).collect();
        let homs: Vec<Vec<GradedMap>> = (0..=top).map(|i| hom_basis(m, &shifted[i])).collect();
        let rank = |i: usize| -> usize {
            if i + 1 >= shifted.len() || homs[i].is_empty() {
                return 0;
            }
            let d = cores.maps[i + 1].shift(s).retarget(Arc::clone(&shifted[i]), Arc::clone(&shifted[i + 1]));
            let rows: Vec<Vec<Rational>> = homs[i].iter().map(|f| f.then(&d).flatten()).collect();
            let width = rows[0].len();
            Matrix::from_rows(width, rows).rank()
        };
        let ranks: Vec<usize> = (0..=top).map(rank).collect();
        (0..=top)
            .filter_map(|i| {
                let dim = homs[i].len() - ranks[i] - if i == 0 { 0 } else { ranks[i - 1] };
                (dim > 0).then_some(((i, s), dim))
            })
            .collect::<Vec<_>>()
    });
    ExtTable { dims: rows.into_iter().flatten().collect(), truncated: cores.terms.len() > n_bound + 1 || cores.truncated }
}

/// Chain-map lift of a cocycle `φ: P_n(M) → N⟨m⟩` through `steps` levels:
/// entry `i` holds images in `P_i(N)⟨m⟩` of the generators of `P_{n+i}(M)`.
fn lift(res_m: &ProjectiveResolution, res_n: &ProjectiveResolution, f: &ExtClass, steps: usize) -> Vec<Vec<Vec<Rational>>> {
    let mut out: Vec<Vec<Vec<Rational>>> = Vec::new();
    for i in 0..=steps {
        let Some(src) = res_m.terms.get(f.n + i) else { break };
        let Some(tgt) = res_n.terms.get(i) else { break };
        let down = if i == 0 { Arc::clone(&res_n.module) } else { Arc::clone(res_n.terms[i - 1].module()) };
        let diff = res_n.differential(i);
        let prev_target = Arc::new(down.shift(f.m));
        let images = src
            .generators()
            .iter()
            .enumerate()
            .map(|(j, &(y, d))| {
                let want = if i == 0 {
                    f.images[j].clone()
                } else {
                    let w = &res_m.images[f.n + i][j];
                    res_m.terms[f.n + i - 1].evaluate(&prev_target, &out[i - 1], (y, d), w)
                };
                let key = (y, d + f.m);
                if tgt.module().dim(key) == 0 {
                    return Vec::new();
                }
                diff.block(key).solve(&want).expect("cocycle lifts through an exact resolution")
            })
            .collect();
        out.push(images);
    }
    out
}

/// `g ∘ f` for `f ∈ Ext^n(M, N⟨m⟩)` and `g ∈ Ext^p(N, L⟨q⟩)`, a cocycle in
/// `Ext^{n+p}(M, L⟨m+q⟩)`; empty if `P_{n+p}(M)` is zero.
pub fn yoneda(res_m: &ProjectiveResolution, res_n: &ProjectiveResolution, f: &ExtClass, l: &GradedModule, g: &ExtClass) -> ExtClass {
    let n = f.n + g.n;
    let out = ExtClass { n, m: f.m + g.m, images: Vec::new() };
    let Some(src) = res_m.terms.get(n) else { return out };
    let lifted = lift(res_m, res_n, f, g.n);
    let Some(phi) = lifted.get(g.n) else {
        return ExtClass { images: src.generators().iter().map(|&k| zero_vec(l.dim((k.0, k.1 + out.m)))).collect(), ..out };
    };
    let l_shift = l.shift(g.m);
    let images = src
        .generators()
        .iter()
        .zip(phi)
        .map(|(&(y, d), v)| {
            let key = (y, d + f.m);
            if v.is_empty() {
                return zero_vec(l_shift.dim(key));
            }
            res_n.terms[g.n].evaluate(&l_shift, &g.images, key, v)
        })
        .collect();
    ExtClass { images, ..out }
}

/// Bigraded Yoneda category of a family, with the resolutions and chosen
/// bases it was built from.
#[derive(Clone, Debug)]
pub struct ExtCategory {
    pub category: GradedCategory<Bideg>,
    pub truncated: bool,
    pub resolutions: Vec<ProjectiveResolution>,
    pub spaces: BTreeMap<(usize, usize), BTreeMap<(usize, i64), ExtSpace>>,
}

impl ExtCategory {
    pub fn basis_class(&self, x: usize, y: usize, d: Bideg, i: usize) -> ExtClass {
        self.spaces[&(x, y)][&(d.n, d.m)].class(&self.resolutions[x], i)
    }
}

/// `E_gr` of a family of modules: components `(x, y, (n, m)) = Ext^n(X, Y⟨m⟩)`
/// for `n ≤ n_bound`, composing by Yoneda product in path order.
pub fn ext_category(alg: &GradedAlgebra, family: &[Arc<GradedModule>], names: Vec<String>, n_bound: usize) -> ExtCategory {
    let k = family.len();
    let resolutions: Vec<ProjectiveResolution> = par::map(family, |m| min_proj_resolution(alg, m, n_bound + 1));
    let truncated = resolutions.iter().any(|r| r.len() > n_bound + 1);
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|x| (0..k).map(move |y| (x, y))).collect();
    let spaces: BTreeMap<(usize, usize), BTreeMap<(usize, i64), ExtSpace>> = pairs
        .iter()
        .zip(par::map(&pairs, |&(x, y)| ext_spaces(&resolutions[x], &family[y], n_bound)))
        .map(|(&p, s)| (p, s))
        .collect();
    let dims = spaces
        .iter()
        .flat_map(|(&(x, y), s)| s.iter().filter(|(_, sp)| sp.dim() > 0).map(move |(&(n, m), sp)| ((x, y, Bideg::new(n, m)), sp.dim())))
        .collect();
    let units = (0..k)
        .map(|x| match spaces[&(x, x)].get(&(0, 0)) {
            Some(sp) => sp.reduce(&resolutions[x], &ExtClass::identity(&resolutions[x])).expect("identity is a cocycle"),
            None => Vec::new(),
        })
        .collect();
    let mut category = GradedCategory::new(names, dims, units);
    let nonzero: Vec<((usize, usize), (usize, i64))> = spaces
        .iter()
        .flat_map(|(&p, s)| s.iter().filter(|(_, sp)| sp.dim() > 0).map(move |(&d, _)| (p, d)))
        .collect();
    let jobs: Vec<(((usize, usize), (usize, i64)), ((usize, usize), (usize, i64)))> = nonzero
        .iter()
        .flat_map(|a| nonzero.iter().filter(move |b| b.0 .0 == a.0 .1 && a.1 .0 + b.1 .0 <= n_bound).map(move |b| (*a, *b)))
        .collect();
    let tables = par::map(&jobs, |&(((x, y), (n1, m1)), ((_, z), (n2, m2)))| {
        let first = &spaces[&(x, y)][&(n1, m1)];
        let second = &spaces[&(y, z)][&(n2, m2)];
        let target = spaces[&(x, z)].get(&(n1 + n2, m1 + m2));
        (0..first.dim())
            .map(|i| {
                let f = first.class(&resolutions[x], i);
                (0..second.dim())
                    .map(|j| {
                        let g = second.class(&resolutions[y], j);
                        let h = yoneda(&resolutions[x], &resolutions[y], &f, &family[z], &g);
                        match target {
                            Some(t) => t.reduce(&resolutions[x], &h).expect("Yoneda product is a cocycle"),
                            None => {
                                assert!(h.images.iter().all(|v| v.iter().all(num_traits::Zero::is_zero)));
                                Vec::new()
                            }
                        }
                    })
                    .collect::<Vec<_>>()
            })
            .collect::<Vec<_>>()
    });
    for ((((x, y), (n1, m1)), ((_, z), (n2, m2))), table) in jobs.into_iter().zip(tables) {
        category.set_products((x, y, Bideg::new(n1, m1)), (y, z, Bideg::new(n2, m2)), table);
    }
    ExtCategory { category, truncated, resolutions, spaces }
}

/// A complex of tilting modules with its labels: `(y, s)` for each summand
/// `T(y)⟨s⟩` of each term.
#[derive(Clone, Debug)]
pub struct TiltingComplex {
    pub module: Arc<GradedModule>,
    pub terms: Vec<Arc<GradedModule>>,
    pub labels: Vec<Vec<(usize, i64)>>,
    /// Coresolution: `maps[0]: M → T^0`, then `T^{i-1} → T^i`.
    /// Resolution: `maps[0]: T_0 → M`, then `T_i → T_{i-1}`.
    pub maps: Vec<GradedMap>,
    pub truncated: bool,
}

/// `0 → M → T^0 → T^1 → …` by minimal left approximations.
///
/// The multiplicity of `T(y)⟨s⟩` is the dimension of `Hom(M, T(y)⟨s⟩)`
/// modulo maps that factor through a radical map between tiltings.
pub fn min_tilt_coresolution(tilts: &[Arc<GradedModule>], m: &Arc<GradedModule>, length_bound: usize) -> Result<TiltingComplex, HomologicalError> {
    let mut out = TiltingComplex { module: Arc::clone(m), terms: Vec::new(), labels: Vec::new(), maps: Vec::new(), truncated: false };
    let mut cur = Arc::clone(m);
    let mut to_cur: Option<GradedMap> = None;
    let mut shifted: BTreeMap<(usize, i64), Arc<GradedModule>> = BTreeMap::new();
    let mut step = 0;
    while !cur.is_zero() {
        if step > length_bound {
            out.truncated = true;
            break;
        }
        let mut cands: Vec<(usize, i64)> = Vec::new();
        for (y, t) in tilts.iter().enumerate() {
            if let Some(w) = hom_window(&cur, t) {
                cands.extend(w.map(|s| (y, s)));
            }
        }
        for &(y, s) in &cands {
            shifted.entry((y, s)).or_insert_with(|| Arc::new(tilts[y].shift(s)));
        }
        let homs: BTreeMap<(usize, i64), Vec<GradedMap>> =
            cands.iter().zip(par::map(&cands, |c| hom_basis(&cur, &shifted[c]))).map(|(&c, h)| (c, h)).collect();
        let live: Vec<(usize, i64)> = cands.iter().copied().filter(|c| !homs[c].is_empty()).collect();
        let chosen = par::map(&live, |&(y, s)| {
            let target = &shifted[&(y, s)];
            let own = &homs[&(y, s)];
            let mut rad = Vec::new();
            for &(z, r) in &live {
                let mid = &shifted[&(z, r)];
                let hs = if (z, r) == (y, s) { radical_endomorphisms(mid) } else { hom_basis(mid, target) };
                for f in &homs[&(z, r)] {
                    for h in &hs {
                        rad.push(f.then(h).retarget(Arc::clone(&cur), Arc::clone(target)).flatten());
                    }
                }
            }
            let width = own[0].flatten().len();
            let mut span = Subspace::from_vectors(width, rad);
            let mut picked = Vec::new();
            for f in own {
                let v = f.flatten();
                if !span.contains(&v) {
                    span = span.sum(&Subspace::from_vectors(width, vec![v])).expect("same ambient");
                    picked.push(f.clone());
                }
            }
            picked
        });
        let mut labels = Vec::new();
        let mut parts = Vec::new();
        let mut maps = Vec::new();
        for (&(y, s), picked) in live.iter().zip(chosen) {
            for f in picked {
                labels.push((y, s));
                parts.push(Arc::clone(&shifted[&(y, s)]));
                maps.push(f);
            }
        }
        let (term, inj) = GradedModule::direct_sum(Arc::clone(cur.quiver()), &parts);
        let mut approx = GradedMap::zero(Arc::clone(&cur), Arc::clone(&term));
        for (f, i) in maps.iter().zip(&inj) {
            approx = approx.add(&f.then(i));
        }
        if !approx.is_injective() {
            return Err(HomologicalError::NotInjective(step));
        }
        let full = match &to_cur {
            Some(p) => p.then(&approx),
            None => approx.clone(),
        };
        let (coker, proj) = approx.cokernel();
        out.maps.push(full.retarget(Arc::clone(out.terms.last().unwrap_or(m)), Arc::clone(&term)));
        out.terms.push(term);
        out.labels.push(labels);
        cur = coker;
        to_cur = Some(proj);
        step += 1;
    }
    Ok(out)
}

/// `… → T_1 → T_0 → M → 0`, as the dual of the tilting coresolution of `DM`
/// over the opposite algebra. `dual_shift[y]` is `c` with `D T^op(y) ≅ T(y)⟨c⟩`.
pub fn min_tilt_resolution(
    op_tilts: &[Arc<GradedModule>],
    dual_shift: &[i64],
    m: &Arc<GradedModule>,
    length_bound: usize,
) -> Result<TiltingComplex, HomologicalError> {
    let co = min_tilt_coresolution(op_tilts, &Arc::new(m.dual()), length_bound)?;
    let terms: Vec<Arc<GradedModule>> = co.terms.iter().map(|t| Arc::new(t.dual())).collect();
    let maps = co
        .maps
        .iter()
        .enumerate()
        .map(|(i, f)| {
            let tgt = if i == 0 { Arc::clone(m) } else { Arc::clone(&terms[i - 1]) };
            f.dual().retarget(Arc::clone(&terms[i]), tgt)
        })
        .collect();
    let labels = co.labels.iter().map(|l| l.iter().map(|&(y, s)| (y, dual_shift[y] - s)).collect()).collect();
    Ok(TiltingComplex { module: Arc::clone(m), terms, labels, maps, truncated: co.truncated })
}

/// Exactness of a coresolution `0 → M → T^0 → …` (or of a resolution read
/// backwards): consecutive maps compose to zero and kernels equal images.
pub fn is_exact(maps: &[GradedMap]) -> bool {
    if let Some(first) = maps.first() {
        if !first.is_injective() {
            return false;
        }
    }
    maps.windows(2).all(|w| {
        let (f, g) = (&w[0], &w[1]);
        f.then(g).is_zero() && sub_dim(&g.kernel()) == sub_dim(&f.image())
    })
}

/// `d_i ∘ d_{i+1} = 0` throughout, the augmentation included.
pub fn squares_to_zero(res: &ProjectiveResolution) -> bool {
    (1..res.len()).all(|i| res.differential(i).then(&res.differential(i - 1)).is_zero())
}

/// Every differential after the augmentation lands in the radical of its
/// target.
pub fn is_minimal_projective(res: &ProjectiveResolution) -> bool {
    (1..res.len()).all(|i| {
        let rad = res.terms[i - 1].module().radical();
        res.differential(i).image().iter().all(|(k, s)| s.is_zero() || rad.get(k).is_some_and(|r| r.contains_subspace(s)))
    })
}

fn projection(inj: &GradedMap) -> GradedMap {
    let blocks = inj.blocks().iter().map(|(&k, b)| (k, b.transpose())).collect();
    GradedMap::new(Arc::clone(inj.target()), Arc::clone(inj.source()), blocks)
}

/// No summand `T(y)⟨s⟩` of a term maps isomorphically onto an equally
/// labelled summand of the next term.
pub fn is_minimal_tilting_coresolution(tilts: &[Arc<GradedModule>], c: &TiltingComplex) -> bool {
    let split = |i: usize| -> Vec<GradedMap> {
        let parts: Vec<Arc<GradedModule>> = c.labels[i].iter().map(|&(y, s)| Arc::new(tilts[y].shift(s))).collect();
        GradedModule::direct_sum(Arc::clone(c.module.quiver()), &parts).1
    };
    (1..c.terms.len()).all(|i| {
        let (ins, outs) = (split(i - 1), split(i));
        let map = c.maps[i].retarget(Arc::clone(ins[0].target()), Arc::clone(outs[0].target()));
        ins.iter().zip(&c.labels[i - 1]).all(|(a, la)| {
            outs.iter().zip(&c.labels[i]).all(|(b, lb)| la != lb || !a.then(&map).then(&projection(b)).is_iso())
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{build_algebra, DEFAULT_DEGREE_CAP};
    use crate::fixtures;
    use crate::presentation::parse_algebra;
    use crate::qh::{dual_tilting_shift, HighestWeight};

    fn hw(text: &str) -> HighestWeight {
        HighestWeight::new(build_algebra(&parse_algebra(text).unwrap(), DEFAULT_DEGREE_CAP).unwrap())
    }

    const U: usize = 0;
    const V: usize = 1;

    #[test]
    fn sl2_ext_between_standards() {
        let h = hw(fixtures::SL2_REGULAR);
        let t = ext_dims(&h.alg, &h.standards[V], &h.standards[U], 5);
        assert_eq!(t.dims, BTreeMap::from([((0, 1), 1), ((1, -1), 1)]));
        assert!(!t.truncated);
        let p = ext_dims(&h.alg, &h.projective(V), &h.simple(U), 5);
        assert!(p.dims.keys().all(|k| k.0 == 0));
    }

    #[test]
    fn resolutions_are_minimal_complexes() {
        let h = hw(fixtures::SL2_REGULAR);
        for x in [U, V] {
            for m in [h.simple(x), Arc::clone(&h.standards[x]), Arc::clone(&h.costandards[x])] {
                let r = min_proj_resolution(&h.alg, &m, 6);
                assert!(squares_to_zero(&r) && is_minimal_projective(&r));
                let maps: Vec<GradedMap> = (0..r.len()).rev().map(|i| r.differential(i)).collect();
                assert!(maps.iter().all(GradedMap::is_homomorphism));
            }
        }
        // projectives resolve by themselves
        let p = h.projective(U);
        let r = min_proj_resolution(&h.alg, &p, 3);
        assert_eq!(r.len(), 1);
    }

    #[test]
    fn sl2_orthogonality() {
        let h = hw(fixtures::SL2_REGULAR);
        for x in [U, V] {
            for y in [U, V] {
                let t = ext_dims(&h.alg, &h.standards[x], &h.costandards[y], 5);
                let want = if x == y { BTreeMap::from([((0, 0), 1)]) } else { BTreeMap::new() };
                assert_eq!(t.dims, want, "{x} {y}");
            }
        }
    }

    #[test]
    fn sl2_injective_coresolution() {
        let h = hw(fixtures::SL2_REGULAR);
        let c = min_inj_coresolution(&h.op, &h.simple(V), 5);
        assert_eq!(c.cogenerators, vec![vec![(V, 0)], vec![(U, 1)]]);
        assert!(is_exact(&c.maps));
        assert!(c.maps.iter().all(GradedMap::is_homomorphism));
        assert_eq!(c.terms[0].as_ref(), h.injective(V).as_ref());
    }

    #[test]
    fn routes_agree_on_sl2() {
        let h = hw(fixtures::SL2_REGULAR);
        let mods: Vec<Arc<GradedModule>> = [U, V]
            .into_iter()
            .flat_map(|x| [Arc::clone(&h.standards[x]), Arc::clone(&h.costandards[x]), h.simple(x)])
            .collect();
        for m in &mods {
            for n in &mods {
                let a = ext_dims(&h.alg, m, n, 4);
                let b = ext_dims_injective(&h.op, m, n, 4);
                assert_eq!(a.dims, b.dims);
            }
        }
    }

    #[test]
    fn sl2_ext_category() {
        let h = hw(fixtures::SL2_REGULAR);
        let e = ext_category(&h.alg, &h.standards, vec!["u".into(), "v".into()], 5);
        let dims: Vec<_> = e.category.dims().iter().map(|(&(x, y, d), &n)| (x, y, d.n, d.m, n)).collect();
        assert_eq!(dims, vec![(U, U, 0, 0, 1), (V, U, 0, 1, 1), (V, U, 1, -1, 1), (V, V, 0, 0, 1)]);
        e.category.check_units().unwrap();
        e.category.check_associativity().unwrap();
        assert!(!e.truncated);
    }

    #[test]
    fn simples_compose_nontrivially() {
        // over sl2, Ext^1(S(u), S(v)) · Ext^1(S(v), S(u)) = Ext^2(S(u), S(u)) ≠ 0
        let h = hw(fixtures::SL2_REGULAR);
        let simples = vec![h.simple(U), h.simple(V)];
        let e = ext_category(&h.alg, &simples, vec!["u".into(), "v".into()], 4);
        let c = &e.category;
        assert_eq!(c.dim(U, U, Bideg::new(2, -2)), 1);
        let p = c.basis_product(U, V, U, Bideg::new(1, -1), 0, Bideg::new(1, -1), 0);
        assert!(p.iter().any(|x| !num_traits::Zero::is_zero(x)));
        let q = c.basis_product(V, U, V, Bideg::new(1, -1), 0, Bideg::new(1, -1), 0);
        assert!(q.is_empty());
        c.check_associativity().unwrap();
    }

    #[test]
    fn sl2_tilting_complexes() {
        let h = hw(fixtures::SL2_REGULAR);
        let t = h.tiltings().unwrap();
        let co = min_tilt_coresolution(&t, &h.standards[U], 5).unwrap();
        assert_eq!(co.labels, vec![vec![(U, 0)], vec![(V, 1)]]);
        assert!(is_exact(&co.maps));
        assert!(is_minimal_tilting_coresolution(&t, &co));
        let co_v = min_tilt_coresolution(&t, &h.standards[V], 5).unwrap();
        assert_eq!(co_v.labels, vec![vec![(V, 0)]]);
        let to = h.op_tiltings().unwrap();
        let shifts: Vec<i64> = (0..2).map(|x| dual_tilting_shift(&t[x], &to[x]).unwrap()).collect();
        let res = min_tilt_resolution(&to, &shifts, &h.costandards[U], 5).unwrap();
        assert_eq!(res.labels, vec![vec![(U, 0)], vec![(V, -1)]]);
        assert!(res.maps.iter().all(GradedMap::is_homomorphism));
    }
}
