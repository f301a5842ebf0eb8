//! Direct sums of shifted projectives and minimal projective resolutions.
//!
//! A map out of `⊕ A^{y_j}⟨-d_j⟩` is determined by the images of its
//! generators, which is how every differential here is stored.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::algebra::GradedAlgebra;
use crate::linalg::{add_scaled, unit_vec, zero_vec, Matrix, Rational, Subspace};
use crate::module::{GradedMap, GradedModule, Key, Submodule};

/// `⊕_j A^{y_j}⟨-d_j⟩`; generator `j` is the top of summand `j`, sitting at
/// `(y_j, d_j)`.
#[derive(Clone, Debug)]
pub struct ProjectiveSum {
    gens: Vec<Key>,
    module: Arc<GradedModule>,
    /// Per generator and component: basis paths of the summand and their
    /// offset inside the component of the sum.
    layout: Vec<BTreeMap<Key, (usize, Vec<Vec<usize>>)>>,
}

impl ProjectiveSum {
    pub fn new(alg: &GradedAlgebra, gens: Vec<Key>) -> Self {
        let q = alg.presentation_arc();
        let mut cache: BTreeMap<usize, Arc<GradedModule>> = BTreeMap::new();
        let parts: Vec<Arc<GradedModule>> = gens
            .iter()
            .map(|&(y, d)| {
                let p = cache.entry(y).or_insert_with(|| Arc::new(GradedModule::projective(alg, y)));
                Arc::new(p.shift(-d))
            })
            .collect();
        let (module, _) = GradedModule::direct_sum(Arc::clone(&q), &parts);
        let mut used: BTreeMap<Key, usize> = BTreeMap::new();
        let layout = gens
            .iter()
            .map(|&(y, d)| {
                let mut per = BTreeMap::new();
                for z in 0..alg.vertex_count() {
                    for n in 0..=alg.top_degree() {
                        let paths = alg.basis_paths(y, z, n);
                        if paths.is_empty() {
                            continue;
                        }
                        let key = (z, d + n as i64);
                        let off = used.entry(key).or_insert(0);
                        per.insert(key, (*off, paths.to_vec()));
                        *off += paths.len();
                    }
                }
                per
            })
            .collect();
        ProjectiveSum { gens, module, layout }
    }

    pub fn generators(&self) -> &[Key] {
        &self.gens
    }

    pub fn module(&self) -> &Arc<GradedModule> {
        &self.module
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    /// Generator `j` as an element of its component.
    pub fn generator(&self, j: usize) -> Vec<Rational> {
        let k = self.gens[j];
        unit_vec(self.module.dim(k), self.layout[j][&k].0)
    }

    /// Value at `v ∈ P(key)` of the map sending generator `j` to `images[j]`.
    pub fn evaluate(&self, target: &GradedModule, images: &[Vec<Rational>], key: Key, v: &[Rational]) -> Vec<Rational> {
        let mut out = zero_vec(target.dim(key));
        for (j, (&(_, d), img)) in self.gens.iter().zip(images).enumerate() {
            let Some((off, paths)) = self.layout[j].get(&key) else { continue };
            for (i, p) in paths.iter().enumerate() {
                let c = &v[off + i];
                if !num_traits::Zero::is_zero(c) {
                    add_scaled(&mut out, c, &target.apply_path(p, d, img));
                }
            }
        }
        out
    }

    /// The homomorphism sending generator `j` to `images[j] ∈ target(y_j, d_j)`.
    pub fn map_to(&self, target: &Arc<GradedModule>, images: &[Vec<Rational>]) -> GradedMap {
        let mut blocks = BTreeMap::new();
        for (&key, &n) in self.module.dims() {
            if target.dim(key) == 0 {
                continue;
            }
            let mut m = Matrix::zeros(target.dim(key), n);
            for (j, &(_, d)) in self.gens.iter().enumerate() {
                let Some((off, paths)) = self.layout[j].get(&key) else { continue };
                for (i, p) in paths.iter().enumerate() {
                    let col = target.apply_path(p, d, &images[j]);
                    for (r, x) in col.into_iter().enumerate() {
                        m.set(r, off + i, x);
                    }
                }
            }
            blocks.insert(key, m);
        }
        GradedMap::new(Arc::clone(&self.module), Arc::clone(target), blocks)
    }

    /// Basis of `Hom(P, N) = ⊕_j N(y_j, d_j)` as lists of generator images.
    pub fn hom_basis(&self, n: &GradedModule) -> Vec<Vec<Vec<Rational>>> {
        let zeros: Vec<Vec<Rational>> = self.gens.iter().map(|&k| zero_vec(n.dim(k))).collect();
        let mut out = Vec::new();
        for (j, &k) in self.gens.iter().enumerate() {
            for i in 0..n.dim(k) {
                let mut imgs = zeros.clone();
                imgs[j] = unit_vec(n.dim(k), i);
                out.push(imgs);
            }
        }
        out
    }

    pub fn hom_dim(&self, n: &GradedModule) -> usize {
        self.gens.iter().map(|&k| n.dim(k)).sum()
    }
}

/// Generators of a submodule modulo its radical, by ascending `(degree, vertex)`.
fn top_generators(m: &GradedModule, sub: &Submodule) -> Vec<(Key, Vec<Rational>)> {
    let mut rad: BTreeMap<Key, Vec<Vec<Rational>>> = BTreeMap::new();
    let q = m.quiver();
    for (&(x, d), s) in sub {
        for a in q.arrows_from(x) {
            let t = (q.arrows[a].to, d + 1);
            for b in s.basis_vectors() {
                rad.entry(t).or_default().push(m.apply(a, d, &b));
            }
        }
    }
    let mut keys: Vec<Key> = sub.keys().copied().collect();
    keys.sort_by_key(|&(x, d)| (d, x));
    let mut out = Vec::new();
    for k in keys {
        let r = Subspace::from_vectors(m.dim(k), rad.remove(&k).unwrap_or_default());
        for v in sub[&k].complement_of(&r).expect("radical lies in the submodule") {
            out.push((k, v));
        }
    }
    out
}

/// Projective cover of the submodule `sub ⊆ m`, mapping into `m`.
pub fn projective_cover(alg: &GradedAlgebra, m: &Arc<GradedModule>, sub: &Submodule) -> (ProjectiveSum, Vec<Vec<Rational>>) {
    let tops = top_generators(m, sub);
    let p = ProjectiveSum::new(alg, tops.iter().map(|(k, _)| *k).collect());
    (p, tops.into_iter().map(|(_, v)| v).collect())
}

/// Minimal graded projective resolution `… → P_1 → P_0 → M`.
#[derive(Clone, Debug)]
pub struct ProjectiveResolution {
    pub module: Arc<GradedModule>,
    pub terms: Vec<ProjectiveSum>,
    /// `images[0]` are generator images in `M`; `images[i]` those of `P_i` in `P_{i-1}`.
    pub images: Vec<Vec<Vec<Rational>>>,
    /// The kernel after the last computed term is nonzero.
    pub truncated: bool,
}

impl ProjectiveResolution {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `d_i: P_i → P_{i-1}`, with `d_0` the augmentation.
    pub fn differential(&self, i: usize) -> GradedMap {
        let target = if i == 0 { Arc::clone(&self.module) } else { Arc::clone(self.terms[i - 1].module()) };
        self.terms[i].map_to(&target, &self.images[i])
    }

    /// Generators of every term are in the degree of their index.
    pub fn is_linear(&self) -> bool {
        self.terms.iter().enumerate().all(|(i, t)| t.generators().iter().all(|&(_, d)| d == i as i64))
    }

    /// First generator out of linear position, as `(index, vertex, degree)`.
    pub fn first_nonlinear(&self) -> Option<(usize, usize, i64)> {
        self.terms.iter().enumerate().find_map(|(i, t)| {
            t.generators().iter().find(|&&(_, d)| d != i as i64).map(|&(y, d)| (i, y, d))
        })
    }
}

/// Resolves `m` through term `length_bound`; flags truncation if the kernel
/// after that term is nonzero.
pub fn min_proj_resolution(alg: &GradedAlgebra, m: &Arc<GradedModule>, length_bound: usize) -> ProjectiveResolution {
    let mut terms = Vec::new();
    let mut images = Vec::new();
    let full: Submodule = m.dims().iter().map(|(&k, &d)| (k, Subspace::full(d))).collect();
    let (mut target, mut sub) = (Arc::clone(m), full);
    let mut truncated = false;
    for i in 0.. {
        if sub.is_empty() {
            break;
        }
        if i > length_bound {
            truncated = true;
            break;
        }
        let (p, imgs) = projective_cover(alg, &target, &sub);
        let d = p.map_to(&target, &imgs);
        sub = d.kernel();
        target = Arc::clone(p.module());
        terms.push(p);
        images.push(imgs);
    }
    ProjectiveResolution { module: Arc::clone(m), terms, images, truncated }
}
