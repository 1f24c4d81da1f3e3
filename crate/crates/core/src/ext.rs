//! Minimal free resolutions over the Steenrod algebra, Ext charts, maps
//! induced on Ext, inverse limits over towers, and A-linear hom spaces.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use rayon::prelude::*;

use crate::amodule::{AModule, AModuleMap, ActionValue};
use crate::error::{Error, Result};
use crate::gf::{complement_in, GradedLinearMap, Lin, Matrix, Prime};
use crate::singer::{rplus_truncation, SingerTruncation};
use crate::steenrod::{algebra, Gen, Monomial, SteenrodAlgebra};

/// An element of a free module: generator index and admissible monomial.
pub type FreeElement = Lin<(usize, Monomial)>;

/// A free A-module on generators listed in nondecreasing degree.
#[derive(Debug, Clone)]
pub struct FreeModule {
    prime: Prime,
    gens: Vec<i64>,
}

impl FreeModule {
    pub fn new(prime: Prime) -> FreeModule {
        FreeModule { prime, gens: Vec::new() }
    }

    pub fn generator_degrees(&self) -> &[i64] {
        &self.gens
    }

    fn alg(&self) -> Arc<SteenrodAlgebra> {
        algebra(self.prime)
    }

    /// Offset of each generator's block in degree `t` (generators above `t` omitted).
    fn offsets(&self, t: i64) -> Vec<usize> {
        let alg = self.alg();
        let mut out = Vec::new();
        let mut acc = 0;
        for &d in self.gens.iter().take_while(|&&d| d <= t) {
            out.push(acc);
            acc += alg.dimension(t - d);
        }
        out
    }

    pub fn dim_in_degree(&self, t: i64) -> usize {
        let alg = self.alg();
        self.gens.iter().take_while(|&&d| d <= t).map(|&d| alg.dimension(t - d)).sum()
    }

    /// Basis of degree `t`: generator-major, monomials in algebra order.
    pub fn basis(&self, t: i64) -> Vec<(usize, Monomial)> {
        let alg = self.alg();
        let mut out = Vec::new();
        for (g, &d) in self.gens.iter().enumerate().take_while(|(_, &d)| d <= t) {
            out.extend(alg.admissible_basis(t - d).iter().map(|m| (g, m.clone())));
        }
        out
    }

    pub fn coordinates(&self, t: i64, x: &FreeElement) -> Vec<u32> {
        let alg = self.alg();
        let offsets = self.offsets(t);
        let mut v = vec![0; self.dim_in_degree(t)];
        for ((g, m), c) in x.iter() {
            let idx = alg.basis_index(t - self.gens[*g]);
            v[offsets[*g] + idx[m]] = c;
        }
        v
    }

    pub fn element(&self, t: i64, v: &[u32]) -> FreeElement {
        let basis = self.basis(t);
        v.iter().zip(basis).filter(|(c, _)| **c != 0).map(|(c, b)| (b, *c)).collect()
    }

    /// `theta · x`.
    pub fn act(&self, theta: &Monomial, x: &FreeElement) -> FreeElement {
        let p = self.prime;
        let alg = self.alg();
        let mut out = Lin::zero();
        for ((g, m), c) in x.iter() {
            for (prod, d) in alg.multiply_monomials(theta, m).iter() {
                out.add_term((*g, prod.clone()), p.mul(c, d), p);
            }
        }
        out
    }
}

/// `F_s -> ... -> F_0 -> M`, computed through internal degree `t_max`.
#[derive(Debug, Clone)]
pub struct MinimalResolution {
    module: AModule,
    s_max: usize,
    t_max: i64,
    free: Vec<FreeModule>,
    d0: Vec<Lin<usize>>,
    /// `d[s][g]` for `s >= 1`; `d[0]` is empty.
    d: Vec<Vec<FreeElement>>,
}

impl MinimalResolution {
    pub fn module(&self) -> &AModule {
        &self.module
    }
    pub fn s_max(&self) -> usize {
        self.s_max
    }
    pub fn t_max(&self) -> i64 {
        self.t_max
    }
    pub fn free_module(&self, s: usize) -> &FreeModule {
        &self.free[s]
    }
    pub fn prime(&self) -> Prime {
        self.module.prime()
    }

    /// Indices of the stage-`s` generators in degree `t`.
    pub fn generators_in(&self, s: usize, t: i64) -> std::ops::Range<usize> {
        let gens = &self.free[s].gens;
        let a = gens.partition_point(|&d| d < t);
        let b = gens.partition_point(|&d| d <= t);
        a..b
    }

    /// `d(g)` for the stage-0 generator `g`, an element of `M`.
    pub fn augmentation(&self, g: usize) -> &Lin<usize> {
        &self.d0[g]
    }

    /// `d(g)` for the stage-`s` generator `g`, `s >= 1`.
    pub fn differential(&self, s: usize, g: usize) -> &FreeElement {
        &self.d[s][g]
    }

    /// Coordinates of `d` applied to every basis element of `F_s` in degree `t`,
    /// in the basis of `F_{s-1}` (or `M` when `s = 0`).
    pub fn differential_columns(&self, s: usize, t: i64) -> Vec<Vec<u32>> {
        differential_columns(&self.module, &self.free, &self.d0, &self.d, s, t)
    }

    pub fn differential_matrix(&self, s: usize, t: i64) -> Matrix {
        let rows = target_dim(&self.module, &self.free, s, t);
        Matrix::from_columns(self.prime(), rows, &self.differential_columns(s, t))
    }

    pub fn chart(&self) -> ExtChart {
        let mut cells = BTreeMap::new();
        for (s, f) in self.free.iter().enumerate() {
            for &d in &f.gens {
                *cells.entry((s, d)).or_insert(0) += 1;
            }
        }
        ExtChart { prime: self.prime(), s_max: self.s_max, t_max: self.t_max, cells }
    }
}

fn target_dim(module: &AModule, free: &[FreeModule], s: usize, t: i64) -> usize {
    if s == 0 {
        module.space().dim_in_degree(t)
    } else {
        free[s - 1].dim_in_degree(t)
    }
}

fn differential_columns(
    module: &AModule,
    free: &[FreeModule],
    d0: &[Lin<usize>],
    d: &[Vec<FreeElement>],
    s: usize,
    t: i64,
) -> Vec<Vec<u32>> {
    let basis = free[s].basis(t);
    if s == 0 {
        let range = module.space().indices_in_degree(t);
        basis
            .par_iter()
            .map(|(g, m)| {
                let img = module.apply_monomial(m, &d0[*g]).expect("inside the resolved range");
                let mut v = vec![0; range.len()];
                for (i, c) in img.iter() {
                    v[i - range.start] = c;
                }
                v
            })
            .collect()
    } else {
        let tgt = &free[s - 1];
        basis.par_iter().map(|(g, m)| tgt.coordinates(t, &tgt.act(m, &d[s][*g]))).collect()
    }
}

/// Resolves `m` through homological degree `s_max` and internal degree `t_max`.
///
/// A truncated module only determines Ext up to its horizon; asking for more
/// is an error rather than a silently wrong chart.
pub fn minimal_resolution(m: &AModule, s_max: usize, t_max: i64) -> Result<MinimalResolution> {
    let p = m.prime();
    if let Some(h) = m.horizon() {
        if t_max > h {
            return Err(Error::InsufficientWindow { horizon: h, requested: t_max });
        }
    }
    let mut free: Vec<FreeModule> = (0..=s_max).map(|_| FreeModule::new(p)).collect();
    let mut d0: Vec<Lin<usize>> = Vec::new();
    let mut d: Vec<Vec<FreeElement>> = vec![Vec::new(); s_max + 1];
    let Some(bottom) = m.bottom() else {
        return Ok(MinimalResolution { module: m.clone(), s_max, t_max, free, d0, d });
    };
    for t in bottom..=t_max {
        // columns of d_{s-1} in degree t, complete with this degree's generators
        let mut prev: Option<Matrix> = None;
        for s in 0..=s_max {
            let rows = target_dim(m, &free, s, t);
            let kernel: Vec<Vec<u32>> = match &prev {
                None => (0..rows).map(|i| unit(rows, i)).collect(),
                Some(mat) => mat.kernel(),
            };
            let mut cols = differential_columns(m, &free, &d0, &d, s, t);
            let new = complement_in(p, rows, &cols, &kernel);
            for v in &new {
                free[s].gens.push(t);
                if s == 0 {
                    let range = m.space().indices_in_degree(t);
                    d0.push(v.iter().enumerate().filter(|(_, c)| **c != 0).map(|(i, c)| (range.start + i, *c)).collect());
                } else {
                    d[s].push(free[s - 1].element(t, v));
                }
                cols.push(v.clone());
            }
            prev = Some(Matrix::from_columns(p, rows, &cols));
        }
    }
    Ok(MinimalResolution { module: m.clone(), s_max, t_max, free, d0, d })
}

fn unit(n: usize, i: usize) -> Vec<u32> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

/// Dimensions of `Ext^{s,t}(M, F_p)`; cells absent from the map are zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtChart {
    pub prime: Prime,
    pub s_max: usize,
    pub t_max: i64,
    pub cells: BTreeMap<(usize, i64), usize>,
}

pub const CHART_HEADER: &str = "#singerlab-chart v1";

impl ExtChart {
    pub fn dim(&self, s: usize, t: i64) -> usize {
        self.cells.get(&(s, t)).copied().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn restrict(&self, s_max: usize, t_max: i64) -> ExtChart {
        let cells = self.cells.iter().filter(|((s, t), _)| *s <= s_max && *t <= t_max).map(|(k, v)| (*k, *v)).collect();
        ExtChart { prime: self.prime, s_max, t_max, cells }
    }

    /// Cells with `s <= s_max` and stem `t - s` in `stems`.
    pub fn restrict_stems(&self, s_max: usize, stems: (i64, i64)) -> ExtChart {
        let cells = self
            .cells
            .iter()
            .filter(|((s, t), _)| *s <= s_max && (stems.0..=stems.1).contains(&(t - *s as i64)))
            .map(|(k, v)| (*k, *v))
            .collect();
        ExtChart { prime: self.prime, s_max, t_max: stems.1 + s_max as i64, cells }
    }

    pub fn labels(&self, s: usize, t: i64) -> Vec<String> {
        (0..self.dim(s, t)).map(|k| format!("x{s}_{t}_{k}")).collect()
    }

    /// Tab-separated rows `s t dim labels`, sorted by `(s, t)`.
    pub fn to_tsv(&self) -> String {
        let mut out = format!("{CHART_HEADER}\n");
        for (&(s, t), &dim) in &self.cells {
            if dim > 0 {
                let _ = writeln!(out, "{s}\t{t}\t{dim}\t{}", self.labels(s, t).join(","));
            }
        }
        out
    }
}

pub fn ext_chart(m: &AModule, s_max: usize, t_max: i64) -> Result<ExtChart> {
    Ok(minimal_resolution(m, s_max, t_max)?.chart())
}

/// A map `Ext(M) -> Ext(L)` induced by `f: L -> M`. In each cell the matrix
/// has one row per generator of `L`'s resolution and one column per
/// generator of `M`'s.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtMap {
    pub cells: BTreeMap<(usize, i64), Matrix>,
}

impl ExtMap {
    pub fn rank(&self, s: usize, t: i64) -> usize {
        self.cells.get(&(s, t)).map_or(0, |m| m.rank())
    }

    /// Is the map bijective in cell `(s, t)`?
    pub fn is_iso(&self, s: usize, t: i64) -> bool {
        match self.cells.get(&(s, t)) {
            None => true,
            Some(m) => m.rows() == m.cols() && m.rank() == m.rows(),
        }
    }

    /// `self ∘ other` cellwise, for `other: Ext(N) -> Ext(M)` and `self: Ext(M) -> Ext(L)`.
    pub fn compose(&self, other: &ExtMap) -> ExtMap {
        let mut cells = BTreeMap::new();
        for (k, a) in &self.cells {
            if let Some(b) = other.cells.get(k) {
                cells.insert(*k, a.mul(b));
            }
        }
        ExtMap { cells }
    }
}

/// Lifts `f: L -> M` to a chain map between the resolutions and reads off
/// the induced map on Ext, in the common range of both resolutions.
pub fn induced_ext_map(f: &AModuleMap, source: &MinimalResolution, target: &MinimalResolution) -> Result<ExtMap> {
    if f.degree_shift() != 0 {
        return Err(Error::Domain("induced maps are computed for degree-preserving maps".into()));
    }
    if f.source.space() != source.module().space() || f.target.space() != target.module().space() {
        return Err(Error::Dimension("resolutions do not match the map".into()));
    }
    let p = f.source.prime();
    let s_max = source.s_max.min(target.s_max);
    let t_max = source.t_max.min(target.t_max);
    // chain[s][h] = f_s(h) in F_s of the target resolution
    let mut chain: Vec<Vec<FreeElement>> = Vec::new();
    let mut cells = BTreeMap::new();
    for s in 0..=s_max {
        let gens = &source.free[s].gens;
        let mut images = Vec::with_capacity(gens.len());
        let mut by_degree: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        for (h, &t) in gens.iter().enumerate() {
            if t <= t_max {
                by_degree.entry(t).or_default().push(h);
            }
        }
        for (&t, hs) in &by_degree {
            let solver = target.differential_matrix(s, t).solver();
            for &h in hs {
                let rhs: Vec<u32> = if s == 0 {
                    let y = f.image(&source.d0[h]);
                    let range = target.module().space().indices_in_degree(t);
                    let mut v = vec![0; range.len()];
                    for (i, c) in y.iter() {
                        v[i - range.start] = c;
                    }
                    v
                } else {
                    let tf = &target.free[s - 1];
                    let mut y = Lin::zero();
                    for ((h2, m), c) in source.d[s][h].iter() {
                        y.add_scaled(&tf.act(m, &chain[s - 1][*h2]), c, p);
                    }
                    tf.coordinates(t, &y)
                };
                let x = solver.solve(&rhs).ok_or_else(|| Error::Domain(format!("cannot lift at (s, t) = ({s}, {t})")))?;
                debug_assert_eq!(images.len(), h);
                images.push(target.free[s].element(t, &x));
            }
            let src = source.generators_in(s, t);
            let tgt = target.generators_in(s, t);
            let mut mat = Matrix::zeros(p, src.len(), tgt.len());
            for (i, h) in src.clone().enumerate() {
                for (j, g) in tgt.clone().enumerate() {
                    mat.set(i, j, images[h].coeff(&(g, Monomial::one())));
                }
            }
            cells.insert((s, t), mat);
        }
        chain.push(images);
    }
    // cells where only the target has generators
    for s in 0..=s_max {
        for &t in &target.free[s].gens {
            if t <= t_max {
                cells.entry((s, t)).or_insert_with(|| Matrix::zeros(p, 0, target.generators_in(s, t).len()));
            }
        }
    }
    Ok(ExtMap { cells })
}

/// Stabilization state of one chart cell along a tower.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CellStatus {
    /// From stage `since` to stage `until`, the images of the deepest group
    /// agree in dimension and no longer shrink.
    Stable { since: i64, until: i64, dim: usize },
    NotYetStable { images: Vec<usize> },
}

#[derive(Debug, Clone)]
pub struct TowerReport {
    pub labels: Vec<i64>,
    pub charts: Vec<ExtChart>,
    /// `maps[i]: Ext(stage i+1) -> Ext(stage i)`.
    pub maps: Vec<ExtMap>,
    pub cells: BTreeMap<(usize, i64), CellStatus>,
    pub resolutions: Vec<MinimalResolution>,
}

impl TowerReport {
    pub fn all_stable(&self) -> bool {
        self.cells.values().all(|c| matches!(c, CellStatus::Stable { .. }))
    }

    /// The limit chart over the stable cells.
    pub fn limit(&self) -> ExtChart {
        let last = self.charts.last().expect("nonempty tower");
        let cells = self
            .cells
            .iter()
            .filter_map(|(k, c)| match c {
                CellStatus::Stable { dim, .. } if *dim > 0 => Some((*k, *dim)),
                _ => None,
            })
            .collect();
        ExtChart { prime: last.prime, s_max: last.s_max, t_max: last.t_max, cells }
    }

    /// Index of the stage with the given label.
    pub fn stage(&self, label: i64) -> Option<usize> {
        self.labels.iter().position(|&l| l == label)
    }

    /// Composite `Ext(stage j) -> Ext(stage i)` in one cell, `i <= j`.
    pub fn composite(&self, s: usize, t: i64, i: usize, j: usize) -> Matrix {
        let p = self.charts[0].prime;
        let mut m = Matrix::identity(p, self.charts[j].dim(s, t));
        for k in (i..j).rev() {
            m = self.cell_map(s, t, k).mul(&m);
        }
        m
    }

    fn cell_map(&self, s: usize, t: i64, k: usize) -> Matrix {
        self.maps[k].cells.get(&(s, t)).cloned().unwrap_or_else(|| {
            Matrix::zeros(self.charts[0].prime, self.charts[k].dim(s, t), self.charts[k + 1].dim(s, t))
        })
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (&(s, t), c) in &self.cells {
            match c {
                CellStatus::Stable { since, until, dim } => {
                    let _ = writeln!(out, "# stable s={s} t={t} dim={dim} stages {since}..{until}");
                }
                CellStatus::NotYetStable { images } => {
                    let d: Vec<String> = images.iter().map(|x| x.to_string()).collect();
                    let _ = writeln!(out, "# not-yet-stable s={s} t={t} images={}", d.join(","));
                }
            }
        }
        out
    }
}

/// Ext of each stage of `A^0 -> A^1 -> ...` (stage `i` maps into stage `i+1`),
/// the induced maps, and the inverse limit in each cell of the window.
///
/// Single stages need not settle; the limit is carried by the stable images
/// `im(Ext(j) -> Ext(i))`, `j` large. Writing `r(i, j)` for that rank, stage
/// `i` is settled when `r(i, j)` has stopped changing for at least as many
/// stages as it took to get there, and `i` lies in the shallower half of the
/// tower. A cell is stable from stage `i` when `i`, `i+1`, ... up to the
/// deepest settled stage are all settled with the same image dimension, and
/// there are at least two of them; then the maps between the images are
/// isomorphisms and their common dimension is the limit.
///
/// `stems` bounds `t - s`; `labels` names the stages in the report.
pub fn inverse_limit_ext(
    stages: &[AModule],
    maps: &[AModuleMap],
    labels: &[i64],
    s_max: usize,
    stems: (i64, i64),
) -> Result<TowerReport> {
    if stages.is_empty() || maps.len() + 1 != stages.len() || labels.len() != stages.len() {
        return Err(Error::Dimension("a tower needs one map between consecutive stages".into()));
    }
    let t_max = stems.1 + s_max as i64;
    let resolutions: Vec<MinimalResolution> =
        stages.par_iter().map(|m| minimal_resolution(m, s_max, t_max)).collect::<Result<_>>()?;
    let charts: Vec<ExtChart> = resolutions.iter().map(|r| r.chart().restrict_stems(s_max, stems)).collect();
    let ext_maps: Vec<ExtMap> = maps
        .par_iter()
        .enumerate()
        .map(|(i, f)| induced_ext_map(f, &resolutions[i], &resolutions[i + 1]))
        .collect::<Result<_>>()?;
    let mut report =
        TowerReport { labels: labels.to_vec(), charts, maps: ext_maps, cells: BTreeMap::new(), resolutions };
    let mut keys: Vec<(usize, i64)> = report.charts.iter().flat_map(|c| c.cells.keys().copied()).collect();
    keys.sort();
    keys.dedup();
    let statuses: Vec<CellStatus> = keys.par_iter().map(|&(s, t)| report.cell_status(s, t)).collect();
    report.cells = keys.into_iter().zip(statuses).collect();
    Ok(report)
}

impl TowerReport {
    /// `r(i, j)` for `j = i..=last`.
    pub fn image_ranks(&self, s: usize, t: i64, i: usize) -> Vec<usize> {
        let p = self.charts[0].prime;
        let mut m = Matrix::identity(p, self.charts[i].dim(s, t));
        let mut out = vec![m.rank()];
        for k in i..self.labels.len() - 1 {
            m = m.mul(&self.cell_map(s, t, k));
            out.push(m.rank());
        }
        out
    }

    fn cell_status(&self, s: usize, t: i64) -> CellStatus {
        let n = self.labels.len();
        let last = n - 1;
        let mut images = Vec::with_capacity(n);
        let mut settled = Vec::with_capacity(n);
        for i in 0..n {
            let r = self.image_ranks(s, t, i);
            let fin = *r.last().expect("nonempty");
            let j0 = i + r.iter().position(|&x| x == fin).expect("present");
            let tail = last - j0;
            settled.push(2 * (last - i) >= last && tail >= 1 && tail >= j0 - i);
            images.push(fin);
        }
        let Some(k) = (1..n).rev().find(|&k| settled[k] && settled[k - 1] && images[k] == images[k - 1]) else {
            return CellStatus::NotYetStable { images };
        };
        let mut i = k - 1;
        while i > 0 && settled[i - 1] && images[i - 1] == images[k] {
            i -= 1;
        }
        CellStatus::Stable { since: self.labels[i], until: self.labels[k], dim: images[k] }
    }
}

/// The stages `F^n R_+(M)` for `n = n0, n0-1, ..., n1` in degrees up to `top`,
/// with their inclusions.
pub fn singer_tower(m: &AModule, n0: i64, n1: i64, top: i64) -> Result<(Vec<SingerTruncation>, Vec<AModuleMap>)> {
    if n1 > n0 {
        return Err(Error::Domain(format!("tower runs downward, got {n0}:{n1}")));
    }
    let p = m.prime().value() as i64;
    let bottom = m.bottom().unwrap_or(0);
    let lo = n1 + p * bottom.min(0) - 1;
    let lo = lo.min(top);
    let stages: Vec<SingerTruncation> =
        (n1..=n0).rev().map(|n| rplus_truncation(m, n, (lo, top))).collect::<Result<_>>()?;
    let maps = stages.windows(2).map(|w| w[0].inclusion_into(&w[1])).collect::<Result<_>>()?;
    Ok((stages, maps))
}

/// The tower `F^n R_+(M)`, `n = 0, -1, ..., depth`, its limit, and the map
/// induced by `ε`, set against an independent chart of `M`.
#[derive(Debug, Clone)]
pub struct EpsilonComparison {
    pub report: TowerReport,
    pub oracle: ExtChart,
    /// Rank of `ε^*: Ext(M) -> Ext(F^n R_+(M))` at the deepest settled stage of each stable cell.
    pub epsilon_ranks: BTreeMap<(usize, i64), usize>,
}

impl EpsilonComparison {
    /// Cells where the limit, the oracle, or the rank of `ε^*` disagree.
    pub fn mismatches(&self) -> Vec<String> {
        let mut out = Vec::new();
        let mut keys: Vec<(usize, i64)> = self.report.cells.keys().chain(self.oracle.cells.keys()).copied().collect();
        keys.sort();
        keys.dedup();
        for (s, t) in keys {
            let want = self.oracle.dim(s, t);
            match self.report.cells.get(&(s, t)) {
                Some(CellStatus::Stable { dim, .. }) => {
                    if *dim != want {
                        out.push(format!("({s},{t}): limit {dim}, chart {want}"));
                    }
                    let r = self.epsilon_ranks.get(&(s, t)).copied().unwrap_or(0);
                    if r != want {
                        out.push(format!("({s},{t}): epsilon rank {r}, chart {want}"));
                    }
                }
                Some(CellStatus::NotYetStable { .. }) => out.push(format!("({s},{t}): not yet stable")),
                None if want > 0 => out.push(format!("({s},{t}): absent from tower, chart {want}")),
                None => {}
            }
        }
        out
    }
}

pub fn epsilon_tower_comparison(m: &AModule, depth: i64, s_max: usize, stems: (i64, i64)) -> Result<EpsilonComparison> {
    tower_comparison(m, (0, depth), s_max, stems)
}

/// As [`epsilon_tower_comparison`] for the stages `n0, n0-1, ..., n1`.
pub fn tower_comparison(m: &AModule, (n0, n1): (i64, i64), s_max: usize, stems: (i64, i64)) -> Result<EpsilonComparison> {
    let t_max = stems.1 + s_max as i64;
    let (stages, maps) = singer_tower(m, n0, n1, t_max)?;
    let modules: Vec<AModule> = stages.iter().map(|s| s.module().clone()).collect();
    let labels: Vec<i64> = stages.iter().map(|s| s.n()).collect();
    let report = inverse_limit_ext(&modules, &maps, &labels, s_max, stems)?;
    let target = minimal_resolution(m, s_max, t_max)?;
    let oracle = target.chart().restrict_stems(s_max, stems);
    let mut wanted: BTreeMap<usize, Vec<(usize, i64)>> = BTreeMap::new();
    for (&(s, t), c) in &report.cells {
        if let CellStatus::Stable { until, .. } = c {
            wanted.entry(report.stage(*until).expect("label")).or_default().push((s, t));
        }
    }
    let mut epsilon_ranks = BTreeMap::new();
    for (idx, cells) in wanted {
        let eps = stages[idx].epsilon_map()?;
        let induced = induced_ext_map(&eps, &report.resolutions[idx], &target)?;
        for (s, t) in cells {
            epsilon_ranks.insert((s, t), induced.rank(s, t));
        }
    }
    Ok(EpsilonComparison { report, oracle, epsilon_ranks })
}

/// Basis of the degree-`shift` maps `M -> N` commuting with every generator
/// wherever both sides are known inside the windows.
pub fn alinear_hom_space(m: &AModule, n: &AModule, shift: i64) -> Result<Vec<GradedLinearMap>> {
    let p = m.prime();
    if n.prime() != p {
        return Err(Error::PrimeMismatch(p.value(), n.prime().value()));
    }
    // unknowns f_{j,i} for deg j = deg i + shift
    let mut unknowns: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for i in 0..m.dim() {
        for j in n.space().indices_in_degree(m.degree_of(i) + shift) {
            let k = unknowns.len();
            unknowns.insert((i, j), k);
        }
    }
    let nvars = unknowns.len();
    let span = m.window().1.max(n.window().1 - shift) - m.window().0;
    let gens = Gen::all_up_to(p, span.max(0));
    let mut rows: Vec<Vec<u32>> = Vec::new();
    for i in 0..m.dim() {
        for &g in &gens {
            let e = m.degree_of(i) + g.degree(p);
            let targets = n.space().indices_in_degree(e + shift);
            if targets.is_empty() {
                continue;
            }
            let gi = match m.act(g, i) {
                ActionValue::BeyondWindow => continue,
                ActionValue::Zero => Lin::zero(),
                ActionValue::Nonzero(v) => v,
            };
            let sources = n.space().indices_in_degree(m.degree_of(i) + shift);
            let mut gj = Vec::new();
            let mut known = true;
            for j in sources.clone() {
                match n.act(g, j) {
                    ActionValue::BeyondWindow => known = false,
                    ActionValue::Zero => gj.push((j, Lin::zero())),
                    ActionValue::Nonzero(v) => gj.push((j, v)),
                }
            }
            if !known {
                continue;
            }
            // f(g i) - g f(i) = 0, one equation per target basis element
            for k in targets {
                let mut row = vec![0u32; nvars];
                for (a, c) in gi.iter() {
                    if let Some(&x) = unknowns.get(&(*a, k)) {
                        row[x] = p.add(row[x], c);
                    }
                }
                for (j, v) in &gj {
                    let c = v.coeff(&k);
                    if c != 0 {
                        let x = unknowns[&(i, *j)];
                        row[x] = p.sub(row[x], c);
                    }
                }
                if row.iter().any(|&c| c != 0) {
                    rows.push(row);
                }
            }
        }
    }
    let kernel = if rows.is_empty() {
        (0..nvars).map(|k| unit(nvars, k)).collect()
    } else {
        Matrix::from_rows(p, nvars, &rows).kernel()
    };
    kernel
        .into_iter()
        .map(|v| {
            let mut cols = vec![Vec::new(); m.dim()];
            for (&(i, j), &x) in &unknowns {
                if v[x] != 0 {
                    cols[i].push((j, v[x]));
                }
            }
            GradedLinearMap::new(m.space().clone(), n.space().clone(), shift, cols)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::amodule::ModuleBuilder;

    fn f(p: u32) -> Prime {
        Prime::new(p).unwrap()
    }

    #[test]
    fn zero_module_has_empty_chart() {
        let c = ext_chart(&AModule::zero(f(2)), 3, 10).unwrap();
        assert!(c.is_empty());
    }

    #[test]
    fn sphere_low_chart() {
        let c = ext_chart(&AModule::trivial(f(2), "a", 0), 3, 8).unwrap();
        assert_eq!(c.dim(0, 0), 1);
        let h: Vec<i64> = (1..=8).filter(|&t| c.dim(1, t) > 0).collect();
        assert_eq!(h, vec![1, 2, 4, 8]);
        assert_eq!(c.dim(1, 3), 0);
        assert_eq!(c.dim(2, 2), 1);
        // h0 h2 and h1^2
        assert_eq!(c.dim(2, 5), 1);
        assert_eq!(c.dim(2, 4), 1);
        assert_eq!(c.dim(3, 3), 1);
    }

    #[test]
    fn odd_sphere_low_chart() {
        let c = ext_chart(&AModule::trivial(f(3), "a", 0), 2, 12).unwrap();
        assert_eq!(c.dim(1, 1), 1); // a0
        assert_eq!(c.dim(1, 4), 1); // h0
        assert_eq!(c.dim(1, 12), 1); // h1
        assert_eq!(c.dim(2, 2), 1);
        assert_eq!(c.dim(1, 2), 0);
    }

    #[test]
    fn truncated_module_reports_horizon() {
        let m = AModule::free_truncated(f(2), &[0], 6);
        assert_eq!(
            minimal_resolution(&m, 2, 7).unwrap_err(),
            Error::InsufficientWindow { horizon: 6, requested: 7 }
        );
        let c = ext_chart(&m, 3, 6).unwrap();
        assert_eq!(c.cells, BTreeMap::from([((0, 0), 1)]));
    }

    #[test]
    fn differentials_square_to_zero() {
        let m = AModule::trivial(f(3), "a", 0);
        let r = minimal_resolution(&m, 3, 14).unwrap();
        for s in 1..=3 {
            for t in 0..=14 {
                let a = r.differential_matrix(s - 1, t);
                let b = r.differential_matrix(s, t);
                if a.cols() > 0 && b.cols() > 0 && a.rows() > 0 {
                    assert!(a.mul(&b).is_zero(), "d^2 at s={s} t={t}");
                }
            }
        }
    }

    #[test]
    fn hom_spaces() {
        let p = f(2);
        let a = AModule::trivial(p, "a", 0);
        assert_eq!(alinear_hom_space(&a, &a, 0).unwrap().len(), 1);
        let b = AModule::trivial(p, "b", 1);
        assert_eq!(alinear_hom_space(&a, &b, 0).unwrap().len(), 0);
        let moore = ModuleBuilder::new(p).element("a", 0).element("b", 1).action(Gen::Sq(1), "a", &[("b", 1)]).build().unwrap();
        // the top cell includes, the bottom cell projects
        assert_eq!(alinear_hom_space(&b, &moore, 0).unwrap().len(), 1);
        assert_eq!(alinear_hom_space(&moore, &a, 0).unwrap().len(), 1);
        assert_eq!(alinear_hom_space(&a, &moore, 0).unwrap().len(), 0);
    }
}
