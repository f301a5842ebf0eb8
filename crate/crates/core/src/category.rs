//! Finite graded linear categories given by structure constants.
//!
//! Hom components are keyed by `(x, y, d)` and composition is written in path
//! order: a morphism in `(x, y)` followed by one in `(y, z)` lands in `(x, z)`.
//! The same type carries algebras viewed as categories, Ext-categories
//! (bigraded) and their total-degree collapses.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Debug;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::algebra::{build_algebra, GradedAlgebra};
use crate::linalg::{add_scaled, is_zero_vec, rat, unit_vec, zero_vec, Matrix, Rational, Subspace};
use crate::presentation::{Arrow, QuiverPresentation, Relation, Vertex};

pub trait Grade: Copy + Ord + Debug + Send + Sync {
    fn zero() -> Self;
    fn plus(self, other: Self) -> Self;
}

impl Grade for i64 {
    fn zero() -> Self {
        0
    }

    fn plus(self, other: Self) -> Self {
        self + other
    }
}

/// Homological degree `n` and grade shift `m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Bideg {
    pub n: usize,
    pub m: i64,
}

impl Bideg {
    pub fn new(n: usize, m: i64) -> Self {
        Bideg { n, m }
    }
}

impl Grade for Bideg {
    fn zero() -> Self {
        Bideg { n: 0, m: 0 }
    }

    fn plus(self, other: Self) -> Self {
        Bideg { n: self.n + other.n, m: self.m + other.m }
    }
}

pub type Component<D> = (usize, usize, D);

/// Key of a product table: `(x, y, d1)` followed by `(y, z, d2)`, stored as
/// `(x, y, z, d1, d2)`.
type ProductKey<D> = (usize, usize, usize, D, D);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedCategory<D: Grade> {
    objects: Vec<String>,
    dims: BTreeMap<Component<D>, usize>,
    /// `products[k][i][j]`: basis `i` of the first component followed by
    /// basis `j` of the second, in coordinates of the target component.
    /// Absent tables are zero.
    products: BTreeMap<ProductKey<D>, Vec<Vec<Vec<Rational>>>>,
    units: Vec<Vec<Rational>>,
}

impl<D: Grade> GradedCategory<D> {
    /// Zero-dimensional components are dropped. `units[x]` are coordinates of
    /// the identity in `(x, x, 0)`.
    pub fn new(objects: Vec<String>, dims: BTreeMap<Component<D>, usize>, units: Vec<Vec<Rational>>) -> Self {
        let dims = dims.into_iter().filter(|&(_, d)| d > 0).collect();
        GradedCategory { objects, dims, products: BTreeMap::new(), units }
    }

    pub fn set_products(&mut self, first: Component<D>, second: Component<D>, table: Vec<Vec<Vec<Rational>>>) {
        assert_eq!(first.1, second.0, "components are not composable");
        let nonzero = table.iter().flatten().any(|v| !is_zero_vec(v));
        if nonzero {
            self.products.insert((first.0, first.1, second.1, first.2, second.2), table);
        }
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn dims(&self) -> &BTreeMap<Component<D>, usize> {
        &self.dims
    }

    pub fn dim(&self, x: usize, y: usize, d: D) -> usize {
        self.dims.get(&(x, y, d)).copied().unwrap_or(0)
    }

    pub fn total_dim(&self) -> usize {
        self.dims.values().sum()
    }

    pub fn unit(&self, x: usize) -> &[Rational] {
        &self.units[x]
    }

    /// Basis `i` of `(x, y, d1)` followed by basis `j` of `(y, z, d2)`.
    pub fn basis_product(&self, x: usize, y: usize, z: usize, d1: D, i: usize, d2: D, j: usize) -> Vec<Rational> {
        match self.products.get(&(x, y, z, d1, d2)) {
            Some(t) => t[i][j].clone(),
            None => zero_vec(self.dim(x, z, d1.plus(d2))),
        }
    }

    /// Bilinear extension of [`Self::basis_product`].
    pub fn multiply(&self, x: usize, y: usize, z: usize, d1: D, u: &[Rational], d2: D, w: &[Rational]) -> Vec<Rational> {
        let mut out = zero_vec(self.dim(x, z, d1.plus(d2)));
        let Some(t) = self.products.get(&(x, y, z, d1, d2)) else { return out };
        for (i, ui) in u.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            for (j, wj) in w.iter().enumerate() {
                if !wj.is_zero() {
                    add_scaled(&mut out, &(ui * wj), &t[i][j]);
                }
            }
        }
        out
    }

    /// Every basis triple, both bracketings; the first failure is returned.
    pub fn check_associativity(&self) -> Result<(), String> {
        let comps: Vec<(Component<D>, usize)> = self.dims.iter().map(|(&k, &d)| (k, d)).collect();
        for &((x, y, d1), n1) in &comps {
            for &((y2, z, d2), n2) in &comps {
                if y2 != y {
                    continue;
                }
                for &((z2, w, d3), n3) in &comps {
                    if z2 != z {
                        continue;
                    }
                    for i in 0..n1 {
                        for j in 0..n2 {
                            let ab = self.basis_product(x, y, z, d1, i, d2, j);
                            for k in 0..n3 {
                                let bc = self.basis_product(y, z, w, d2, j, d3, k);
                                let left = self.multiply(x, z, w, d1.plus(d2), &ab, d3, &unit_vec(n3, k));
                                let right = self.multiply(x, y, w, d1, &unit_vec(n1, i), d2.plus(d3), &bc);
                                if left != right {
                                    return Err(format!(
                                        "({x},{y},{d1:?})#{i} · ({y},{z},{d2:?})#{j} · ({z},{w},{d3:?})#{k}"
                                    ));
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Identities act as two-sided units on every basis element.
    pub fn check_units(&self) -> Result<(), String> {
        for (&(x, y, d), &n) in &self.dims {
            for i in 0..n {
                let e = unit_vec(n, i);
                let l = self.multiply(x, x, y, D::zero(), &self.units[x], d, &e);
                let r = self.multiply(x, y, y, d, &e, D::zero(), &self.units[y]);
                if l != e || r != e {
                    return Err(format!("unit fails on ({x},{y},{d:?})#{i}"));
                }
            }
        }
        Ok(())
    }

    /// Same morphisms with composition reversed.
    pub fn opposite(&self) -> GradedCategory<D> {
        let dims = self.dims.iter().map(|(&(x, y, d), &n)| ((y, x, d), n)).collect();
        let mut products = BTreeMap::new();
        for (&(x, y, z, d1, d2), t) in &self.products {
            // in the opposite, (z, y, d2) is followed by (y, x, d1)
            let n2 = self.dim(y, z, d2);
            let n1 = self.dim(x, y, d1);
            let flipped: Vec<Vec<Vec<Rational>>> = (0..n2).map(|j| (0..n1).map(|i| t[i][j].clone()).collect()).collect();
            products.insert((z, y, x, d2, d1), flipped);
        }
        GradedCategory { objects: self.objects.clone(), dims, products, units: self.units.clone() }
    }

    /// Collapses the grading along an additive map `f`. Each new component
    /// lists the old bases in ascending old degree.
    pub fn regrade<E: Grade>(&self, f: impl Fn(usize, usize, D) -> E) -> GradedCategory<E> {
        let mut dims: BTreeMap<Component<E>, usize> = BTreeMap::new();
        let mut offset: BTreeMap<Component<D>, usize> = BTreeMap::new();
        for (&(x, y, d), &n) in &self.dims {
            let e = dims.entry((x, y, f(x, y, d))).or_insert(0);
            offset.insert((x, y, d), *e);
            *e += n;
        }
        let embed = |x: usize, y: usize, d: D, v: &[Rational]| -> Vec<Rational> {
            let mut out = zero_vec(dims[&(x, y, f(x, y, d))]);
            let o = offset[&(x, y, d)];
            out[o..o + v.len()].clone_from_slice(v);
            out
        };
        let units = (0..self.objects.len())
            .map(|x| if self.dim(x, x, D::zero()) > 0 { embed(x, x, D::zero(), &self.units[x]) } else { Vec::new() })
            .collect();
        let mut out = GradedCategory { objects: self.objects.clone(), dims: dims.clone(), products: BTreeMap::new(), units };
        for (&(x, y, z, d1, d2), t) in &self.products {
            let (e1, e2) = (f(x, y, d1), f(y, z, d2));
            let (o1, o2) = (offset[&(x, y, d1)], offset[&(y, z, d2)]);
            let table = out
                .products
                .entry((x, y, z, e1, e2))
                .or_insert_with(|| vec![vec![zero_vec(dims[&(x, z, e1.plus(e2))]); dims[&(y, z, e2)]]; dims[&(x, y, e1)]]);
            for (i, row) in t.iter().enumerate() {
                for (j, v) in row.iter().enumerate() {
                    let img = embed(x, z, d1.plus(d2), v);
                    add_scaled(&mut table[o1 + i][o2 + j], &Rational::one(), &img);
                }
            }
        }
        out
    }

    /// Dimension table with object names.
    pub fn named_dims(&self) -> BTreeMap<(String, String, D), usize> {
        self.dims.iter().map(|(&(x, y, d), &n)| ((self.objects[x].clone(), self.objects[y].clone(), d), n)).collect()
    }

    /// Rank of each nonzero composition table, flattened to a matrix from
    /// pairs of basis elements into the target component.
    pub fn composition_ranks(&self) -> BTreeMap<(Component<D>, Component<D>), usize> {
        self.products
            .iter()
            .map(|(&(x, y, z, d1, d2), t)| {
                let n = self.dim(x, z, d1.plus(d2));
                let rows: Vec<Vec<Rational>> = t.iter().flatten().cloned().collect();
                (((x, y, d1), (y, z, d2)), Matrix::from_rows(n, rows).rank())
            })
            .collect()
    }
}

impl GradedCategory<i64> {
    /// Nonnegative degrees only, and degree 0 spanned by identities.
    pub fn positivity_witness(&self) -> Option<String> {
        for (&(x, y, d), &n) in &self.dims {
            if d < 0 {
                return Some(format!("{} → {} has dimension {n} in degree {d}", self.objects[x], self.objects[y]));
            }
            if d == 0 && (x != y || n != 1) {
                return Some(format!("{} → {} has dimension {n} in degree 0", self.objects[x], self.objects[y]));
            }
        }
        (0..self.objects.len())
            .find(|&x| self.dim(x, x, 0) != 1)
            .map(|x| format!("{} has no one-dimensional degree-0 endomorphisms", self.objects[x]))
    }

    pub fn max_degree(&self) -> i64 {
        self.dims.keys().map(|k| k.2).max().unwrap_or(0)
    }

    pub fn hilbert(&self) -> BTreeMap<i64, usize> {
        let mut h = BTreeMap::new();
        for (&(_, _, d), &n) in &self.dims {
            *h.entry(d).or_insert(0) += n;
        }
        h
    }

    /// Degree-1 generators and the degree-2 relations among them, with a
    /// generation check through `bound`.
    pub fn quadratic_presentation(&self, bound: usize) -> QuadraticPresentation {
        let n_obj = self.objects.len();
        let mut generators = Vec::new();
        for (&(x, y, d), &n) in &self.dims {
            if d == 1 {
                generators.extend((0..n).map(|i| (x, y, i)));
            }
        }
        let mut failure = self.positivity_witness();
        let mut relations = Vec::new();
        for x in 0..n_obj {
            for z in 0..n_obj {
                let pairs: Vec<(usize, usize)> = generators
                    .iter()
                    .enumerate()
                    .flat_map(|(gi, &(a, b, _))| {
                        generators.iter().enumerate().filter_map(move |(gj, &(c, d, _))| {
                            (a == x && b == c && d == z).then_some((gi, gj))
                        })
                    })
                    .collect();
                if pairs.is_empty() {
                    continue;
                }
                let target = self.dim(x, z, 2);
                let columns: Vec<Vec<Rational>> = pairs
                    .iter()
                    .map(|&(gi, gj)| {
                        let (a, b, i) = generators[gi];
                        let (_, c, j) = generators[gj];
                        let v = self.basis_product(a, b, c, 1, i, 1, j);
                        if target == 0 { Vec::new() } else { v }
                    })
                    .collect();
                let kernel = if target == 0 {
                    Subspace::full(pairs.len())
                } else {
                    Matrix::from_columns(target, &columns).kernel()
                };
                for v in kernel.basis_vectors() {
                    relations.push(
                        v.iter()
                            .zip(&pairs)
                            .filter(|(c, _)| !c.is_zero())
                            .map(|(c, &(gi, gj))| (c.clone(), gi, gj))
                            .collect(),
                    );
                }
            }
        }
        let top = self.max_degree().max(0) as usize;
        let checked = bound.min(top);
        if failure.is_none() {
            'gen: for n in 2..=checked as i64 {
                for x in 0..n_obj {
                    for z in 0..n_obj {
                        let dim = self.dim(x, z, n);
                        if dim == 0 {
                            continue;
                        }
                        let mut products = Vec::new();
                        for y in 0..n_obj {
                            for i in 0..self.dim(x, y, n - 1) {
                                for j in 0..self.dim(y, z, 1) {
                                    products.push(self.basis_product(x, y, z, n - 1, i, 1, j));
                                }
                            }
                        }
                        if Subspace::from_vectors(dim, products).dim() < dim {
                            failure = Some(format!(
                                "{} → {} in degree {n} is not generated in degree 1",
                                self.objects[x], self.objects[z]
                            ));
                            break 'gen;
                        }
                    }
                }
            }
        }
        QuadraticPresentation {
            objects: self.objects.clone(),
            generators,
            relations,
            generated_up_to: checked,
            failure,
        }
    }
}

/// Output of [`GradedCategory::quadratic_presentation`]. Generator `k` is
/// basis element `i` of component `(x, y, 1)`; a relation is a list of
/// `(coefficient, first generator, second generator)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticPresentation {
    pub objects: Vec<String>,
    pub generators: Vec<(usize, usize, usize)>,
    pub relations: Vec<Vec<(Rational, usize, usize)>>,
    pub generated_up_to: usize,
    /// First violation of positivity or degree-1 generation.
    pub failure: Option<String>,
}

impl QuadraticPresentation {
    /// As a quiver with relations; every height is 0 and generator `k` is
    /// the arrow `g{k}`.
    pub fn to_quiver(&self, name: &str) -> QuiverPresentation {
        QuiverPresentation {
            name: name.to_string(),
            vertices: self.objects.iter().map(|id| Vertex { id: id.clone(), ht: 0 }).collect(),
            arrows: self
                .generators
                .iter()
                .enumerate()
                .map(|(k, &(x, y, _))| Arrow { id: format!("g{k}"), from: x, to: y })
                .collect(),
            relations: self
                .relations
                .iter()
                .map(|r| Relation { terms: r.iter().map(|(c, i, j)| (c.clone(), vec![*i, *j])).collect() })
                .collect(),
        }
    }
}

/// The algebra as a category on its vertices, composing in path order.
pub fn category_from_algebra(alg: &GradedAlgebra) -> GradedCategory<i64> {
    let p = alg.presentation();
    let objects = (0..alg.vertex_count()).map(|v| p.vid(v).to_string()).collect();
    let dims: BTreeMap<Component<i64>, usize> =
        alg.dims().into_iter().map(|((x, y, n), d)| ((x, y, n as i64), d)).collect();
    let units = (0..alg.vertex_count()).map(|_| vec![rat(1)]).collect();
    let mut cat = GradedCategory::new(objects, dims.clone(), units);
    for (&(x, y, n), &d1) in &dims {
        for (&(y2, z, m), &d2) in &dims {
            if y2 != y {
                continue;
            }
            let table = (0..d1)
                .map(|i| {
                    (0..d2)
                        .map(|j| {
                            alg.mul(x, y, n as usize, &unit_vec(d1, i), z, m as usize, &unit_vec(d2, j))
                        })
                        .collect()
                })
                .collect();
            cat.set_products((x, y, n), (y, z, m), table);
        }
    }
    cat
}

/// The quadratic dual of a quadratic presentation: same quiver, relations
/// the orthogonal complement of the given ones under the pairing in which
/// length-2 paths are orthonormal. `None` if a relation has another length.
pub fn quadratic_dual(p: &QuiverPresentation) -> Option<QuiverPresentation> {
    if p.relations.iter().any(|r| r.len() != 2) {
        return None;
    }
    let mut relations = Vec::new();
    let n = p.vertex_count();
    for x in 0..n {
        for z in 0..n {
            let paths: Vec<Vec<usize>> = (0..p.arrows.len())
                .filter(|&a| p.arrows[a].from == x)
                .flat_map(|a| p.arrows_from(p.arrows[a].to).map(move |b| vec![a, b]))
                .filter(|path| p.arrows[path[1]].to == z)
                .collect();
            if paths.is_empty() {
                continue;
            }
            let rows: Vec<Vec<Rational>> = p
                .relations
                .iter()
                .filter(|r| p.path_source(&r.terms[0].1) == x && p.path_target(&r.terms[0].1) == z)
                .map(|r| {
                    let mut v = zero_vec(paths.len());
                    for (c, path) in &r.terms {
                        let k = paths.iter().position(|q| q == path).expect("relation path is composable");
                        v[k] += c;
                    }
                    v
                })
                .collect();
            let perp = Matrix::from_rows(paths.len(), rows).kernel();
            for v in perp.basis_vectors() {
                relations.push(Relation {
                    terms: v.iter().zip(&paths).filter(|(c, _)| !c.is_zero()).map(|(c, q)| (c.clone(), q.clone())).collect(),
                });
            }
        }
    }
    Some(QuiverPresentation { name: format!("{}-dual", p.name), vertices: p.vertices.clone(), arrows: p.arrows.clone(), relations })
}

/// Outcome of [`find_isomorphism`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IsoSearch {
    /// Degree-1 blocks `(x, y) ↦ matrix` of an isomorphism.
    Found(BTreeMap<(usize, usize), Matrix>),
    /// A structural obstruction rules out any isomorphism.
    Impossible(String),
    /// The search space or budget was exhausted without a certificate.
    NotFound,
}

/// Structure-constant isomorphism `a → b` of positively graded categories
/// generated in degree 1, fixing objects.
///
/// `a` must equal the quadratic algebra of its own presentation, which is
/// checked by rebuilding it. Candidates are degree-1 blocks with entries in
/// `{-1, 0, 1}`, identity first; a candidate is accepted when it maps every
/// relation of `a` to zero in `b`. Together with equal dimensions and degree-1
/// generation of `b`, that makes the induced map an isomorphism.
pub fn find_isomorphism(a: &GradedCategory<i64>, b: &GradedCategory<i64>, budget: usize) -> IsoSearch {
    if a.objects != b.objects {
        return IsoSearch::Impossible("object sets differ".into());
    }
    if a.dims != b.dims {
        return IsoSearch::Impossible("dimension tables differ".into());
    }
    let bound = a.max_degree().max(2) as usize;
    let qa = a.quadratic_presentation(bound);
    if let Some(f) = qa.failure {
        return IsoSearch::Impossible(format!("source: {f}"));
    }
    if let Some(f) = b.quadratic_presentation(bound).failure {
        return IsoSearch::Impossible(format!("target: {f}"));
    }
    let rebuilt = match build_algebra(&qa.to_quiver("rebuilt"), bound + 1) {
        Ok(r) => r,
        Err(e) => return IsoSearch::Impossible(format!("source is not quadratic: {e}")),
    };
    let rebuilt_dims: BTreeMap<Component<i64>, usize> =
        rebuilt.dims().into_iter().map(|((x, y, n), d)| ((x, y, n as i64), d)).collect();
    if rebuilt_dims != a.dims {
        return IsoSearch::Impossible("source is not quadratic".into());
    }
    let blocks: Vec<(usize, usize, usize)> =
        a.dims.iter().filter(|(k, _)| k.2 == 1).map(|(&(x, y, _), &n)| (x, y, n)).collect();
    let candidates: Vec<Vec<Matrix>> = blocks.iter().map(|&(_, _, n)| invertible_sign_matrices(n)).collect();
    let mut chosen: Vec<Matrix> = Vec::new();
    let mut steps = 0usize;
    if search(b, &qa, &blocks, &candidates, &mut chosen, &mut steps, budget) {
        IsoSearch::Found(blocks.iter().zip(chosen).map(|(&(x, y, _), m)| ((x, y), m)).collect())
    } else {
        IsoSearch::NotFound
    }
}

/// Invertible `n × n` matrices with entries in `{-1, 0, 1}`, identity first.
/// Capped at `n ≤ 3`; larger blocks offer only the identity.
fn invertible_sign_matrices(n: usize) -> Vec<Matrix> {
    let mut out = vec![Matrix::identity(n)];
    if n > 3 {
        return out;
    }
    let cells = n * n;
    let total = 3usize.pow(cells as u32);
    for code in 0..total {
        let mut c = code;
        let mut m = Matrix::zeros(n, n);
        for k in 0..cells {
            m.set(k / n, k % n, rat((c % 3) as i64 - 1));
            c /= 3;
        }
        if m.is_invertible() && m != out[0] {
            out.push(m);
        }
    }
    out
}

fn search(
    b: &GradedCategory<i64>,
    qa: &QuadraticPresentation,
    blocks: &[(usize, usize, usize)],
    candidates: &[Vec<Matrix>],
    chosen: &mut Vec<Matrix>,
    steps: &mut usize,
    budget: usize,
) -> bool {
    let k = chosen.len();
    if k == blocks.len() {
        return true;
    }
    for m in &candidates[k] {
        *steps += 1;
        if *steps > budget {
            return false;
        }
        chosen.push(m.clone());
        if relations_hold(b, qa, blocks, chosen) && search(b, qa, blocks, candidates, chosen, steps, budget) {
            return true;
        }
        chosen.pop();
    }
    false
}

/// Relations whose generators lie in already-chosen blocks map to zero.
fn relations_hold(b: &GradedCategory<i64>, qa: &QuadraticPresentation, blocks: &[(usize, usize, usize)], chosen: &[Matrix]) -> bool {
    let block_of = |x: usize, y: usize| blocks.iter().position(|&(bx, by, _)| (bx, by) == (x, y));
    let image = |g: usize| -> Option<(usize, usize, Vec<Rational>)> {
        let (x, y, i) = qa.generators[g];
        let k = block_of(x, y)?;
        let m = chosen.get(k)?;
        Some((x, y, m.column(i)))
    };
    'rel: for rel in &qa.relations {
        let mut acc: Option<Vec<Rational>> = None;
        for (c, gi, gj) in rel {
            let (Some((x, y, u)), Some((_, z, w))) = (image(*gi), image(*gj)) else { continue 'rel };
            let p = b.multiply(x, y, z, 1, &u, 1, &w);
            match &mut acc {
                Some(v) => add_scaled(v, c, &p),
                None => {
                    let mut v = zero_vec(p.len());
                    add_scaled(&mut v, c, &p);
                    acc = Some(v);
                }
            }
        }
        if acc.is_some_and(|v| !is_zero_vec(&v)) {
            return false;
        }
    }
    true
}

/// Objects with a nonzero morphism in some degree, as a set of pairs.
pub fn support<D: Grade>(c: &GradedCategory<D>) -> BTreeSet<(usize, usize)> {
    c.dims.keys().map(|&(x, y, _)| (x, y)).collect()
}
