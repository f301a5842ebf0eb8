//! Koszulity, the four resolution conditions on standards and costandards,
//! the Ext-categories of standards and costandards with their total
//! gradings, and the check that the two are Koszul dual to each other.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{build_algebra, GradedAlgebra, DEFAULT_DEGREE_CAP};
use crate::category::{find_isomorphism, quadratic_dual, Bideg, GradedCategory, IsoSearch, QuadraticPresentation};
use crate::homological::{
    ext_category, ext_dims, is_exact, is_minimal_projective, is_minimal_tilting_coresolution, min_inj_coresolution,
    min_tilt_coresolution, min_tilt_resolution, squares_to_zero, ExtCategory, HomologicalError,
};
use crate::linalg::format_rational;
use crate::module::{graded_hom_dims, is_iso, GradedModule};
use crate::par;
use crate::presentation::QuiverPresentation;
use crate::projective::min_proj_resolution;
use crate::qh::{dual_tilting_shift, HighestWeight, QhError, QhReport};

/// Candidates tried by the explicit isomorphism search.
pub const ISO_BUDGET: usize = 1 << 16;
pub const DEFAULT_ISO_CAP: usize = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KoszulError {
    #[error(transparent)]
    Qh(#[from] QhError),
    #[error(transparent)]
    Homological(#[from] HomologicalError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Delta,
    Nabla,
}

impl Side {
    pub fn name(self) -> &'static str {
        match self {
            Side::Delta => "delta",
            Side::Nabla => "nabla",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Truncated,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
            Verdict::Truncated => 3,
        }
    }

    /// Failure dominates truncation, which dominates a pass.
    pub fn and(self, other: Verdict) -> Verdict {
        match (self, other) {
            (Verdict::Fail, _) | (_, Verdict::Fail) => Verdict::Fail,
            (Verdict::Truncated, _) | (_, Verdict::Truncated) => Verdict::Truncated,
            _ => Verdict::Pass,
        }
    }

    fn of(pass: bool, truncated: bool) -> Verdict {
        match (pass, truncated) {
            (false, _) => Verdict::Fail,
            (true, true) => Verdict::Truncated,
            (true, false) => Verdict::Pass,
        }
    }
}

pub fn kappa(ht: i64, l: i64) -> i64 {
    (ht - l).div_euclid(2)
}

pub fn kappa_tilde(ht: i64, l: i64) -> i64 {
    (-ht - l).div_euclid(2)
}

/// 0 when `ht ≡ l (mod 2)`, else 1.
pub fn delta_parity(ht: i64, l: i64) -> u8 {
    (ht - l).rem_euclid(2) as u8
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SimpleResolution {
    pub vertex: String,
    /// `(y, d)` per generator `A^y⟨-d⟩`, per term.
    pub generators: Vec<Vec<(String, i64)>>,
    pub linear: bool,
    pub truncated: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KoszulReport {
    pub verdict: Verdict,
    pub generated_in_degree_one: bool,
    /// Resolutions were computed through this term.
    pub linear_up_to: usize,
    pub simples: Vec<SimpleResolution>,
    pub witness: Option<String>,
}

/// Degree-1 generation plus linearity of the minimal resolutions of all
/// simples through term `bound`.
pub fn check_koszul(alg: &GradedAlgebra, bound: usize) -> KoszulReport {
    let p = alg.presentation();
    let mut witness = alg
        .species()
        .iter()
        .find(|(k, _)| k.2 != 1)
        .map(|(&(x, y, n), &d)| format!("{d} generator(s) {} → {} in degree {n}", p.vid(x), p.vid(y)));
    let generated = witness.is_none();
    let xs: Vec<usize> = (0..alg.vertex_count()).collect();
    let rows = par::map(&xs, |&x| {
        let s = Arc::new(GradedModule::simple(alg.presentation_arc(), x));
        let res = min_proj_resolution(alg, &s, bound);
        let generators = res
            .terms
            .iter()
            .map(|t| t.generators().iter().map(|&(y, d)| (p.vid(y).to_string(), d)).collect())
            .collect();
        let row = SimpleResolution { vertex: p.vid(x).to_string(), generators, linear: res.is_linear(), truncated: res.truncated };
        (res.first_nonlinear(), row)
    });
    for (x, (bad, _)) in rows.iter().enumerate() {
        if let (None, Some((i, y, d))) = (&witness, bad) {
            witness = Some(format!("term {i} of the resolution of S({}) has a generator at {} in degree {d}", p.vid(x), p.vid(*y)));
        }
    }
    let simples: Vec<SimpleResolution> = rows.into_iter().map(|r| r.1).collect();
    let truncated = simples.iter().any(|s| s.truncated);
    KoszulReport {
        verdict: Verdict::of(witness.is_none(), truncated),
        generated_in_degree_one: generated,
        linear_up_to: bound,
        simples,
        witness,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionWitness {
    pub vertex: String,
    pub index: i64,
    pub term: String,
    pub shift: i64,
    pub height: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionCheck {
    pub pass: bool,
    pub truncated: bool,
    pub witness: Option<ConditionWitness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionReport {
    pub verdict: Verdict,
    /// Keyed `I`, `II`, `III`, `IV`.
    pub conditions: BTreeMap<String, ConditionCheck>,
}

impl ConditionReport {
    pub fn flags(&self) -> [bool; 4] {
        ["I", "II", "III", "IV"].map(|k| self.conditions[k].pass)
    }
}

/// Labels of one resolution: `(position k, summands (y, s))`, where the
/// required summands are `T(y)⟨s⟩` (or `A^y⟨-s⟩`, `I^y⟨s⟩`) with `s = k`
/// and `ht(y) = ht(x) + sign·k`.
struct Labelled {
    positions: Vec<(i64, Vec<(usize, i64)>)>,
    sign: i64,
    truncated: bool,
}

impl Labelled {
    fn witness(&self, hw: &HighestWeight, x: usize) -> Option<ConditionWitness> {
        for (k, term) in &self.positions {
            for &(y, s) in term {
                if s != *k || hw.ht(y) != hw.ht(x) + self.sign * k {
                    return Some(ConditionWitness {
                        vertex: hw.name(x).to_string(),
                        index: *k,
                        term: hw.name(y).to_string(),
                        shift: s,
                        height: hw.ht(y),
                    });
                }
            }
        }
        None
    }
}

/// `D T^op(x) ≅ T(x)⟨c_x⟩`, per vertex.
pub fn dual_tilting_shifts(tilts: &[Arc<GradedModule>], op_tilts: &[Arc<GradedModule>]) -> Vec<i64> {
    tilts
        .iter()
        .zip(op_tilts)
        .map(|(t, o)| dual_tilting_shift(t, o).expect("the dual of an opposite tilting module is a shifted tilting module"))
        .collect()
}

/// Tests the four resolutions term by term against the required shifts and
/// heights:
/// (I) tilting coresolution of `Δ(x)`, term `k` in add of `T(y)⟨k⟩`, `ht(y) = ht(x) - k`;
/// (II) tilting resolution of `∇(x)`, position `k = -i`, `T(y)⟨k⟩`, `ht(y) = ht(x) + k`;
/// (III) projective resolution of `Δ(x)`, term `i` in add of `A^y⟨-i⟩`, `ht(y) = ht(x) + i`;
/// (IV) injective coresolution of `∇(x)`, term `i` in add of `I^y⟨i⟩`, `ht(y) = ht(x) + i`.
pub fn check_conditions(hw: &HighestWeight, bound: usize) -> Result<ConditionReport, KoszulError> {
    let tilts = hw.tiltings()?;
    let op_tilts = hw.op_tiltings()?;
    let shifts = dual_tilting_shifts(&tilts, &op_tilts);
    let xs: Vec<usize> = (0..hw.vertex_count()).collect();
    let per_vertex = par::map(&xs, |&x| -> Result<[Labelled; 4], KoszulError> {
        let co = min_tilt_coresolution(&tilts, &hw.standards[x], bound)?;
        let res = min_tilt_resolution(&op_tilts, &shifts, &hw.costandards[x], bound)?;
        let proj = min_proj_resolution(&hw.alg, &hw.standards[x], bound);
        let inj = min_inj_coresolution(&hw.op, &hw.costandards[x], bound);
        let enumerate = |terms: Vec<Vec<(usize, i64)>>, step: i64| -> Vec<(i64, Vec<(usize, i64)>)> {
            terms.into_iter().enumerate().map(|(i, t)| (step * i as i64, t)).collect()
        };
        Ok([
            Labelled { positions: enumerate(co.labels, 1), sign: -1, truncated: co.truncated },
            Labelled { positions: enumerate(res.labels, -1), sign: 1, truncated: res.truncated },
            Labelled {
                positions: enumerate(proj.terms.iter().map(|t| t.generators().to_vec()).collect(), 1),
                sign: 1,
                truncated: proj.truncated,
            },
            Labelled { positions: enumerate(inj.cogenerators, 1), sign: 1, truncated: inj.truncated },
        ])
    });
    let per_vertex: Vec<[Labelled; 4]> = per_vertex.into_iter().collect::<Result<_, _>>()?;
    let mut conditions = BTreeMap::new();
    let mut verdict = Verdict::Pass;
    for (c, name) in ["I", "II", "III", "IV"].into_iter().enumerate() {
        let witness = xs.iter().find_map(|&x| per_vertex[x][c].witness(hw, x));
        let truncated = per_vertex.iter().any(|l| l[c].truncated);
        verdict = verdict.and(Verdict::of(witness.is_none(), truncated));
        conditions.insert(name.to_string(), ConditionCheck { pass: witness.is_none(), truncated, witness });
    }
    Ok(ConditionReport { verdict, conditions })
}

fn names(hw: &HighestWeight) -> Vec<String> {
    (0..hw.vertex_count()).map(|x| hw.name(x).to_string()).collect()
}

/// Ext-category of the standards, `(x, y, (n, m)) = Ext^n(Δ(x), Δ(y)⟨m⟩)`.
pub fn build_e_delta(hw: &HighestWeight, n_bound: usize) -> ExtCategory {
    ext_category(&hw.alg, &hw.standards, names(hw), n_bound)
}

/// Ext-category of the costandards.
pub fn build_e_nabla(hw: &HighestWeight, n_bound: usize) -> ExtCategory {
    ext_category(&hw.alg, &hw.costandards, names(hw), n_bound)
}

/// Outcome of one property check; witnesses name offending components.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PatternReport {
    pub pass: bool,
    pub skipped: bool,
    pub checked: usize,
    pub truncated: bool,
    pub witnesses: Vec<String>,
}

impl PatternReport {
    fn start() -> Self {
        PatternReport { pass: true, ..Default::default() }
    }

    fn skipped() -> Self {
        PatternReport { pass: true, skipped: true, ..Default::default() }
    }

    fn check(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.pass = false;
            self.witnesses.push(witness());
        }
    }
}

fn component(c: &GradedCategory<Bideg>, x: usize, y: usize, d: Bideg) -> String {
    format!("({},{},{},{})", c.objects()[x], c.objects()[y], d.n, d.m)
}

/// Every nonzero component satisfies `ht(x) = ht(y) - 2n - m` (standards)
/// or `ht(x) = ht(y) + 2n + m` (costandards).
pub fn verify_hom_pattern(hw: &HighestWeight, side: Side, cat: &GradedCategory<Bideg>) -> PatternReport {
    let mut r = PatternReport::start();
    for &(x, y, d) in cat.dims().keys() {
        let t = 2 * d.n as i64 + d.m;
        let want = match side {
            Side::Delta => hw.ht(y) - t,
            Side::Nabla => hw.ht(y) + t,
        };
        r.check(hw.ht(x) == want, || format!("{} has ht(x) = {} but expected {want}", component(cat, x, y, d), hw.ht(x)));
    }
    r
}

/// `ht(x) ≡ ht(y) + m (mod 2)` on every nonzero component.
pub fn verify_even_odd(hw: &HighestWeight, cat: &GradedCategory<Bideg>) -> PatternReport {
    let mut r = PatternReport::start();
    for &(x, y, d) in cat.dims().keys() {
        r.check((hw.ht(x) - hw.ht(y) - d.m).rem_euclid(2) == 0, || format!("{} breaks the parity split", component(cat, x, y, d)));
    }
    r
}

/// `Ext(Δ(x), ∇(y))` is one-dimensional in bidegree (0,0) when `x = y` and
/// zero otherwise; `Ext(Δ(x), T(y))` lives in `n = 0` with the hom dimensions
/// of `Hom(Δ(x), Δ(y))`; dually `Hom(T(x), ∇(y))` has those of `Hom(∇(x), ∇(y))`.
pub fn verify_orthogonality_and_tilting_patterns(hw: &HighestWeight, n_bound: usize) -> Result<PatternReport, KoszulError> {
    let tilts = hw.tiltings()?;
    let pairs: Vec<(usize, usize)> = (0..hw.vertex_count()).flat_map(|x| (0..hw.vertex_count()).map(move |y| (x, y))).collect();
    let rows = par::map(&pairs, |&(x, y)| {
        let orth = ext_dims(&hw.alg, &hw.standards[x], &hw.costandards[y], n_bound);
        let to_t = ext_dims(&hw.alg, &hw.standards[x], &tilts[y], n_bound);
        let hom_dd = graded_hom_dims(&hw.standards[x], &hw.standards[y]);
        let hom_nn = graded_hom_dims(&hw.costandards[x], &hw.costandards[y]);
        let hom_tn = graded_hom_dims(&tilts[x], &hw.costandards[y]);
        (orth, to_t, hom_dd, hom_nn, hom_tn)
    });
    let mut r = PatternReport::start();
    for (&(x, y), (orth, to_t, hom_dd, hom_nn, hom_tn)) in pairs.iter().zip(rows) {
        let (nx, ny) = (hw.name(x), hw.name(y));
        r.truncated |= orth.truncated || to_t.truncated;
        let want: BTreeMap<(usize, i64), usize> = if x == y { BTreeMap::from([((0, 0), 1)]) } else { BTreeMap::new() };
        r.check(orth.dims == want, || format!("Ext(Δ({nx}), ∇({ny})) = {:?}", orth.dims));
        let zero_part: BTreeMap<i64, usize> = to_t.dims.iter().filter(|(k, _)| k.0 == 0).map(|(k, &d)| (k.1, d)).collect();
        r.check(to_t.dims.keys().all(|k| k.0 == 0), || format!("Ext(Δ({nx}), T({ny})) has positive degrees: {:?}", to_t.dims));
        r.check(zero_part == hom_dd, || format!("Hom(Δ({nx}), T({ny})) = {zero_part:?} but Hom(Δ({nx}), Δ({ny})) = {hom_dd:?}"));
        r.check(hom_tn == hom_nn, || format!("Hom(T({nx}), ∇({ny})) = {hom_tn:?} but Hom(∇({nx}), ∇({ny})) = {hom_nn:?}"));
    }
    Ok(r)
}

/// A category on the vertices graded by total degree, with its quadratic
/// presentation.
#[derive(Clone, Debug)]
pub struct TotalGradedPresentation {
    pub side: Side,
    pub category: GradedCategory<i64>,
    pub hilbert: BTreeMap<i64, usize>,
    pub presentation: QuadraticPresentation,
    /// A component whose total degree disagrees with the height difference.
    pub height_mismatch: Option<String>,
}

impl TotalGradedPresentation {
    pub fn pass(&self) -> bool {
        self.height_mismatch.is_none() && self.presentation.failure.is_none()
    }
}

/// `2n + m` on both sides; it equals `ht(y) - ht(x)` for standards and
/// `ht(x) - ht(y)` for costandards.
pub fn total_degree(d: Bideg) -> i64 {
    2 * d.n as i64 + d.m
}

pub fn total_grading(hw: &HighestWeight, side: Side, cat: &GradedCategory<Bideg>, bound: usize) -> TotalGradedPresentation {
    let height_mismatch = cat.dims().keys().find_map(|&(x, y, d)| {
        let want = match side {
            Side::Delta => hw.ht(y) - hw.ht(x),
            Side::Nabla => hw.ht(x) - hw.ht(y),
        };
        (total_degree(d) != want).then(|| format!("{} has total degree {} but height difference {want}", component(cat, x, y, d), total_degree(d)))
    });
    let category = cat.regrade(|_, _, d| total_degree(d));
    let presentation = category.quadratic_presentation(bound);
    TotalGradedPresentation { side, hilbert: category.hilbert(), category, presentation, height_mismatch }
}

/// Serializable view of a quadratic presentation; coefficients as `p/q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PresentationSummary {
    pub objects: Vec<String>,
    /// `(source, target)` per degree-1 generator.
    pub generators: Vec<(String, String)>,
    /// Terms `(coefficient, first generator, second generator)`.
    pub relations: Vec<Vec<(String, usize, usize)>>,
    pub generated_up_to: usize,
    pub failure: Option<String>,
}

impl PresentationSummary {
    pub fn new(p: &QuadraticPresentation) -> Self {
        PresentationSummary {
            objects: p.objects.clone(),
            generators: p.generators.iter().map(|&(x, y, _)| (p.objects[x].clone(), p.objects[y].clone())).collect(),
            relations: p.relations.iter().map(|r| r.iter().map(|(c, i, j)| (format_rational(c), *i, *j)).collect()).collect(),
            generated_up_to: p.generated_up_to,
            failure: p.failure.clone(),
        }
    }
}

/// One direction of the duality: the Yoneda category of the simples over
/// the algebra presented by one side, against the other side.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualDirection {
    pub from: Side,
    pub rebuilt: Option<KoszulReport>,
    /// `dim Ext^n` between simples of the rebuilt algebra, transposed.
    pub yoneda_dims: BTreeMap<String, usize>,
    pub dims_match: bool,
    pub presentation_match: bool,
    /// `explicit isomorphism`, `not searched`, `not found`, or the obstruction.
    pub isomorphism: String,
    pub failure: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualityReport {
    pub delta: NestedDims,
    pub nabla: NestedDims,
    pub delta_presentation: PresentationSummary,
    pub nabla_presentation: PresentationSummary,
    pub directions: Vec<DualDirection>,
    /// `explicit isomorphism`, `presentation match`, `dimension match` or `mismatch`.
    pub verdict: String,
    pub pass: bool,
}

fn flat_dims<D: crate::category::Grade>(cat: &GradedCategory<D>, fmt: impl Fn(D) -> String) -> BTreeMap<String, usize> {
    cat.dims().iter().map(|(&(x, y, d), &n)| (format!("{},{},{}", cat.objects()[x], cat.objects()[y], fmt(d)), n)).collect()
}

/// `"x,y,n,m" ↦ dim`.
pub fn bideg_dims(cat: &GradedCategory<Bideg>) -> BTreeMap<String, usize> {
    flat_dims(cat, |d| format!("{},{}", d.n, d.m))
}

/// `x ↦ y ↦ n ↦ m ↦ dim`.
pub type NestedDims = BTreeMap<String, BTreeMap<String, BTreeMap<usize, BTreeMap<i64, usize>>>>;

pub fn nested_dims(cat: &GradedCategory<Bideg>) -> NestedDims {
    let mut out = NestedDims::new();
    for (&(x, y, d), &n) in cat.dims() {
        let o = cat.objects();
        out.entry(o[x].clone()).or_default().entry(o[y].clone()).or_default().entry(d.n).or_default().insert(d.m, n);
    }
    out
}

fn arrow_profile(p: &QuiverPresentation) -> (BTreeMap<(usize, usize), usize>, BTreeMap<(usize, usize), usize>) {
    let mut arrows = BTreeMap::new();
    for a in &p.arrows {
        *arrows.entry((a.from, a.to)).or_insert(0) += 1;
    }
    let mut rels = BTreeMap::new();
    for r in &p.relations {
        if let Some((_, path)) = r.terms.first() {
            let ends = (p.arrows[path[0]].from, p.arrows[*path.last().unwrap()].to);
            *rels.entry(ends).or_insert(0) += 1;
        }
    }
    (arrows, rels)
}

/// The algebra presented by one side, its simples' Yoneda category graded
/// by `n` and transposed, compared with the other side.
fn dual_direction(from: &TotalGradedPresentation, to: &TotalGradedPresentation, koszul_bound: usize, iso_cap: usize) -> DualDirection {
    let mut out = DualDirection {
        from: from.side,
        rebuilt: None,
        yoneda_dims: BTreeMap::new(),
        dims_match: false,
        presentation_match: false,
        isomorphism: "not searched".into(),
        failure: None,
    };
    if let Some(f) = &from.presentation.failure {
        out.failure = Some(format!("no quadratic presentation: {f}"));
        return out;
    }
    let quiver = from.presentation.to_quiver(&format!("{}-quadratic", from.side.name()));
    let r = match build_algebra(&quiver, DEFAULT_DEGREE_CAP) {
        Ok(r) => r,
        Err(e) => {
            out.failure = Some(format!("rebuilt algebra: {e}"));
            return out;
        }
    };
    let n_bound = (to.category.max_degree().max(1) + 1) as usize;
    out.rebuilt = Some(check_koszul(&r, koszul_bound.max(n_bound)));
    let simples: Vec<Arc<GradedModule>> =
        (0..r.vertex_count()).map(|x| Arc::new(GradedModule::simple(r.presentation_arc(), x))).collect();
    let e = ext_category(&r, &simples, from.presentation.objects.clone(), n_bound);
    let e_op = e.category.opposite().regrade(|_, _, d| d.n as i64);
    out.yoneda_dims = flat_dims(&e_op, |d| d.to_string());
    out.dims_match = e_op.dims() == to.category.dims();
    out.presentation_match = match quadratic_dual(&quiver) {
        Some(d) => arrow_profile(&d.opposite()) == arrow_profile(&to.presentation.to_quiver("other")),
        None => false,
    };
    if out.dims_match {
        out.isomorphism = if to.category.total_dim() > iso_cap {
            "not searched".into()
        } else {
            match find_isomorphism(&e_op, &to.category, ISO_BUDGET) {
                IsoSearch::Found(_) => "explicit isomorphism".into(),
                IsoSearch::NotFound => "not found".into(),
                IsoSearch::Impossible(why) => why,
            }
        };
    }
    out
}

/// Both directions of the duality between the total-graded Ext-categories of
/// standards and costandards.
pub fn verify_koszul_dual_pair(
    delta: &TotalGradedPresentation,
    nabla: &TotalGradedPresentation,
    e_delta: &GradedCategory<Bideg>,
    e_nabla: &GradedCategory<Bideg>,
    koszul_bound: usize,
    iso_cap: usize,
) -> DualityReport {
    let sides = [(delta, nabla), (nabla, delta)];
    let directions = par::map(&sides, |&(a, b)| dual_direction(a, b, koszul_bound, iso_cap));
    let all = |f: &dyn Fn(&DualDirection) -> bool| directions.iter().all(f);
    let dims = all(&|d| d.dims_match);
    let koszul_ok = all(&|d| d.rebuilt.as_ref().is_some_and(|k| k.verdict != Verdict::Fail));
    let verdict = if !dims {
        "mismatch"
    } else if all(&|d| d.isomorphism == "explicit isomorphism") {
        "explicit isomorphism"
    } else if all(&|d| d.presentation_match) {
        "presentation match"
    } else {
        "dimension match"
    };
    DualityReport {
        delta: nested_dims(e_delta),
        nabla: nested_dims(e_nabla),
        delta_presentation: PresentationSummary::new(&delta.presentation),
        nabla_presentation: PresentationSummary::new(&nabla.presentation),
        directions,
        verdict: verdict.into(),
        pass: dims && koszul_ok,
    }
}

/// Checks that need conditions (I)–(IV) are skipped when they fail.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropertySuite {
    pub checks: BTreeMap<String, PatternReport>,
}

impl PropertySuite {
    pub fn pass(&self) -> bool {
        self.checks.values().all(|c| c.pass)
    }

    pub fn failures(&self) -> Vec<String> {
        self.checks.iter().filter(|(_, c)| !c.pass).map(|(k, c)| format!("{k}: {}", c.witnesses.join("; "))).collect()
    }
}

/// Invariants expected of an algebra passing the quasi-hereditary check.
pub fn property_suite(hw: &HighestWeight, n_bound: usize) -> Result<PropertySuite, KoszulError> {
    let mut checks = BTreeMap::new();
    let conditions_hold = check_conditions(hw, n_bound)?.flags().iter().all(|&b| b);
    let koszul_holds = check_koszul(&hw.alg, n_bound).verdict == Verdict::Pass;
    let e_delta = build_e_delta(hw, n_bound);
    let e_nabla = build_e_nabla(hw, n_bound);
    let n = hw.vertex_count();

    checks.insert("orthogonality_and_tilting".into(), verify_orthogonality_and_tilting_patterns(hw, n_bound)?);

    for (side, e) in [(Side::Delta, &e_delta), (Side::Nabla, &e_nabla)] {
        let name = format!("height_identity_{}", side.name());
        checks.insert(name, if conditions_hold { verify_hom_pattern(hw, side, &e.category) } else { PatternReport::skipped() });
        let mut assoc = PatternReport::start();
        assoc.truncated = e.truncated;
        let a = e.category.check_associativity().and(e.category.check_units());
        assoc.check(a.is_ok(), || a.clone().unwrap_err());
        checks.insert(format!("yoneda_associativity_{}", side.name()), assoc);
    }

    let simples: Vec<Arc<GradedModule>> = (0..n).map(|x| hw.simple(x)).collect();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).collect();
    let simple_ext = par::map(&pairs, |&(x, y)| ext_dims(&hw.alg, &simples[x], &simples[y], n_bound));
    let mut ext1 = PatternReport::start();
    let mut line = PatternReport::start();
    for (&(x, y), t) in pairs.iter().zip(&simple_ext) {
        for &(i, m) in t.dims.keys() {
            if i == 1 {
                ext1.check(m == -1 && (hw.ht(x) - hw.ht(y)).abs() == 1, || {
                    format!("Ext^1(S({}), S({})⟨{m}⟩) ≠ 0", hw.name(x), hw.name(y))
                });
            }
            line.check(i as i64 == -m, || format!("Ext^{i}(S({}), S({})⟨{m}⟩) ≠ 0", hw.name(x), hw.name(y)));
        }
    }
    checks.insert("simple_ext1_shift".into(), if conditions_hold { ext1 } else { PatternReport::skipped() });
    checks.insert("koszul_line".into(), if koszul_holds { line } else { PatternReport::skipped() });

    let tilts = hw.tiltings()?;
    let mut incl = PatternReport::start();
    let mut mult = PatternReport::start();
    for &(x, y) in &pairs {
        let dd = graded_hom_dims(&hw.standards[y], &hw.standards[x]);
        let dt = graded_hom_dims(&hw.standards[y], &tilts[x]);
        incl.check(dd == dt, || format!("Hom(Δ({0}), Δ({1})) = {dd:?} but Hom(Δ({0}), T({1})) = {dt:?}", hw.name(y), hw.name(x)));
        // [Δ(x)_l : S(y)] = dim Hom(Δ(y), Δ(x)⟨l⟩), and Δ(x) is directed by height
        for (&(z, l), &d) in hw.standards[x].dims() {
            if z != y || l == 0 {
                continue;
            }
            mult.check(dd.get(&l).copied().unwrap_or(0) == d, || {
                format!("[Δ({})_{l} : S({})] = {d} but the hom space has dimension {:?}", hw.name(x), hw.name(y), dd.get(&l))
            });
            mult.check(l < 0 || hw.ht(y) == hw.ht(x) - l, || format!("Δ({}) has S({}) in degree {l}", hw.name(x), hw.name(y)));
        }
    }
    checks.insert("standard_tilting_inclusion".into(), if conditions_hold { incl } else { PatternReport::skipped() });
    checks.insert("multiplicities_are_homs".into(), if conditions_hold { mult } else { PatternReport::skipped() });

    let xs: Vec<usize> = (0..n).collect();
    let minimal = par::map(&xs, |&x| -> Result<Vec<(String, bool)>, KoszulError> {
        let mut out = Vec::new();
        for (what, m) in [("S", &simples[x]), ("Δ", &hw.standards[x]), ("∇", &hw.costandards[x])] {
            let r = min_proj_resolution(&hw.alg, m, n_bound);
            out.push((format!("projective resolution of {what}({})", hw.name(x)), squares_to_zero(&r) && is_minimal_projective(&r)));
            let c = min_inj_coresolution(&hw.op, m, n_bound);
            out.push((format!("injective coresolution of {what}({})", hw.name(x)), is_exact(&c.maps)));
        }
        let co = min_tilt_coresolution(&tilts, &hw.standards[x], n_bound)?;
        out.push((
            format!("tilting coresolution of Δ({})", hw.name(x)),
            is_exact(&co.maps) && is_minimal_tilting_coresolution(&tilts, &co),
        ));
        Ok(out)
    });
    let mut res = PatternReport::start();
    for rows in minimal {
        for (what, ok) in rows? {
            res.check(ok, || format!("{what} is not a minimal exact complex"));
        }
    }
    checks.insert("resolutions_minimal".into(), res);

    let mut dd = PatternReport::start();
    let mods: Vec<Arc<GradedModule>> =
        hw.standards.iter().chain(&hw.costandards).chain(&tilts).chain(&simples).cloned().collect();
    for m in &mods {
        let back = Arc::new(m.dual().dual());
        dd.check(back.as_ref() == m.as_ref() && is_iso(m, &back).is_some(), || "D(DM) differs from M".into());
    }
    checks.insert("double_dual".into(), dd);

    let mut arith = PatternReport::start();
    for x in 0..n {
        let h = hw.ht(x);
        for l in -10..=10 {
            arith.check(kappa(h, l) - kappa_tilde(h, l) == h, || format!("κ - κ̃ ≠ ht at ({}, {l})", hw.name(x)));
            arith.check(kappa(h, l + 2) == kappa(h, l) - 1 && delta_parity(h, l) == delta_parity(h, l + 2), || {
                format!("κ or δ not 2-periodic at ({}, {l})", hw.name(x))
            });
        }
    }
    checks.insert("kappa_arithmetic".into(), arith);
    Ok(PropertySuite { checks })
}

#[derive(Clone, Copy, Debug)]
pub struct MainOptions {
    /// Resolution length and Ext bound; defaults to the algebra's dimension.
    pub max_degree: Option<usize>,
    pub iso_cap: usize,
}

impl Default for MainOptions {
    fn default() -> Self {
        MainOptions { max_degree: None, iso_cap: DEFAULT_ISO_CAP }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TotalSummary {
    pub hilbert: BTreeMap<i64, usize>,
    pub height_mismatch: Option<String>,
    pub presentation: PresentationSummary,
}

/// Stage-by-stage record of the full verification; stages after a failing
/// gate are absent.
#[derive(Clone, Debug, Serialize)]
pub struct MainTheoremReport {
    pub algebra: String,
    pub bound: usize,
    pub verdict: Verdict,
    pub stopped_at: Option<String>,
    pub reason: Option<String>,
    pub qh: QhReport,
    pub koszul: Option<KoszulReport>,
    pub conditions: Option<ConditionReport>,
    pub e_delta: Option<NestedDims>,
    pub e_nabla: Option<NestedDims>,
    pub truncated: bool,
    pub patterns: Option<BTreeMap<String, PatternReport>>,
    pub total: Option<BTreeMap<String, TotalSummary>>,
    pub duality: Option<DualityReport>,
    pub timings_ms: BTreeMap<String, f64>,
    #[serde(skip)]
    pub categories: Option<(ExtCategory, ExtCategory)>,
    #[serde(skip)]
    pub total_categories: Option<(TotalGradedPresentation, TotalGradedPresentation)>,
}

struct Clock(BTreeMap<String, f64>);

impl Clock {
    fn time<T>(&mut self, stage: &str, f: impl FnOnce() -> T) -> T {
        let t = Instant::now();
        let out = f();
        self.0.insert(stage.to_string(), t.elapsed().as_secs_f64() * 1e3);
        out
    }
}

/// Quasi-heredity, Koszulity, the four conditions, both Ext-categories, the
/// pattern checks, total gradings and the duality, stopping at the first
/// failing stage.
pub fn verify_main_theorem(alg: GradedAlgebra, opts: MainOptions) -> MainTheoremReport {
    let bound = opts.max_degree.unwrap_or_else(|| alg.total_dim().max(1));
    let mut clock = Clock(BTreeMap::new());
    let hw = clock.time("qh", || HighestWeight::new(alg));
    let qh = clock.time("qh", || hw.check_qh());
    let mut report = MainTheoremReport {
        algebra: hw.alg.presentation().name.clone(),
        bound,
        verdict: Verdict::Pass,
        stopped_at: None,
        reason: None,
        qh,
        koszul: None,
        conditions: None,
        e_delta: None,
        e_nabla: None,
        truncated: false,
        patterns: None,
        total: None,
        duality: None,
        timings_ms: BTreeMap::new(),
        categories: None,
        total_categories: None,
    };
    let stop = |r: &mut MainTheoremReport, stage: &str, reason: String, clock: Clock| {
        r.verdict = Verdict::Fail;
        r.stopped_at = Some(stage.into());
        r.reason = Some(reason);
        r.timings_ms = clock.0;
    };
    if !report.qh.pass {
        let reason = report.qh.witnesses.join("; ");
        stop(&mut report, "qh", reason, clock);
        return report;
    }
    let koszul = clock.time("koszul", || check_koszul(&hw.alg, bound));
    report.verdict = report.verdict.and(koszul.verdict);
    let kw = koszul.witness.clone();
    report.koszul = Some(koszul);
    if let Some(w) = kw {
        stop(&mut report, "koszul", w, clock);
        return report;
    }
    match clock.time("conditions", || check_conditions(&hw, bound)) {
        Err(e) => {
            stop(&mut report, "conditions", e.to_string(), clock);
            return report;
        }
        Ok(c) => {
            report.verdict = report.verdict.and(c.verdict);
            let failed: Vec<String> = c
                .conditions
                .iter()
                .filter_map(|(k, v)| v.witness.as_ref().map(|w| format!("({k}) fails at {} index {}: T/P/I of {} with shift {} and height {}", w.vertex, w.index, w.term, w.shift, w.height)))
                .collect();
            report.conditions = Some(c);
            if !failed.is_empty() {
                stop(&mut report, "conditions", failed.join("; "), clock);
                return report;
            }
        }
    }
    let (e_delta, e_nabla) = clock.time("ext", || (build_e_delta(&hw, bound), build_e_nabla(&hw, bound)));
    report.truncated = e_delta.truncated || e_nabla.truncated;
    if report.truncated {
        report.verdict = report.verdict.and(Verdict::Truncated);
    }
    report.e_delta = Some(nested_dims(&e_delta.category));
    report.e_nabla = Some(nested_dims(&e_nabla.category));
    for (side, e) in [("delta", &e_delta), ("nabla", &e_nabla)] {
        if let Err(w) = e.category.check_associativity().and(e.category.check_units()) {
            stop(&mut report, "ext", format!("{side}: {w}"), clock);
            return report;
        }
    }
    let patterns = clock.time("patterns", || -> Result<BTreeMap<String, PatternReport>, KoszulError> {
        let mut p = BTreeMap::new();
        p.insert("height_identity_delta".to_string(), verify_hom_pattern(&hw, Side::Delta, &e_delta.category));
        p.insert("height_identity_nabla".to_string(), verify_hom_pattern(&hw, Side::Nabla, &e_nabla.category));
        p.insert("even_odd_delta".to_string(), verify_even_odd(&hw, &e_delta.category));
        p.insert("orthogonality_and_tilting".to_string(), verify_orthogonality_and_tilting_patterns(&hw, bound)?);
        Ok(p)
    });
    match patterns {
        Err(e) => {
            stop(&mut report, "patterns", e.to_string(), clock);
            return report;
        }
        Ok(p) => {
            let failed: Vec<String> = p.iter().filter(|(_, r)| !r.pass).map(|(k, r)| format!("{k}: {}", r.witnesses.join("; "))).collect();
            report.patterns = Some(p);
            if !failed.is_empty() {
                stop(&mut report, "patterns", failed.join("; "), clock);
                return report;
            }
        }
    }
    let (td, tn) = clock.time("total", || {
        (total_grading(&hw, Side::Delta, &e_delta.category, bound), total_grading(&hw, Side::Nabla, &e_nabla.category, bound))
    });
    report.total = Some(
        [&td, &tn]
            .iter()
            .map(|t| {
                (t.side.name().to_string(), TotalSummary {
                    hilbert: t.hilbert.clone(),
                    height_mismatch: t.height_mismatch.clone(),
                    presentation: PresentationSummary::new(&t.presentation),
                })
            })
            .collect(),
    );
    for t in [&td, &tn] {
        if !t.pass() {
            let why = t.height_mismatch.clone().or(t.presentation.failure.clone()).unwrap_or_default();
            stop(&mut report, "total", format!("{}: {why}", t.side.name()), clock);
            report.categories = Some((e_delta, e_nabla));
            return report;
        }
    }
    let duality = clock.time("duality", || verify_koszul_dual_pair(&td, &tn, &e_delta.category, &e_nabla.category, bound, opts.iso_cap));
    let ok = duality.pass;
    let verdict = duality.verdict.clone();
    report.duality = Some(duality);
    report.categories = Some((e_delta, e_nabla));
    report.total_categories = Some((td, tn));
    if !ok {
        stop(&mut report, "duality", format!("verdict {verdict}"), clock);
        return report;
    }
    report.timings_ms = clock.0;
    report
}
