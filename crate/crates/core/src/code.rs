//! The code C_{d,σ} whose parity-check matrix has the embedded points as
//! columns: exact parameters, general position, minimum-weight supports.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::ff::{Elem, FieldInfo};
use crate::linalg::Matrix;
use crate::pg::{is_collinear, lines, on_common_subline, sublines_in_line, ProjPoint};
use crate::search::{all_dependent, first_dependent, Columns, Outcome};
use crate::veronese::{binomial, VarietyMatrix};

/// Default per-search cap on examined subsets.
pub const DEFAULT_BUDGET: u64 = 2_000_000_000;
/// Hard cap on the total number of subsets the brute-force oracle may visit.
pub const ORACLE_CAP: u64 = 20_000_000;

#[derive(Clone, Debug)]
pub struct Code {
    variety: VarietyMatrix,
    h: Matrix,
    nu: usize,
    kappa: usize,
}

pub fn build_code(variety: VarietyMatrix) -> Result<Code> {
    let expected = variety.basis().effective_n();
    if variety.rank() != expected {
        return Err(Error::RankDeficient { rank: variety.rank(), expected });
    }
    let h = variety.table().transpose();
    let nu = h.cols();
    Ok(Code { nu, kappa: nu - expected, h, variety })
}

impl Code {
    pub fn variety(&self) -> &VarietyMatrix {
        &self.variety
    }
    /// effective_N × ν.
    pub fn parity_check(&self) -> &Matrix {
        &self.h
    }
    pub fn nu(&self) -> usize {
        self.nu
    }
    pub fn kappa(&self) -> usize {
        self.kappa
    }
    pub fn redundancy(&self) -> usize {
        self.nu - self.kappa
    }
    pub fn singleton_bound(&self) -> usize {
        self.nu - self.kappa + 1
    }
    pub fn d(&self) -> usize {
        self.variety.sigma().d()
    }

    /// Columns of H, each stored contiguously.
    pub fn columns(&self) -> Columns<'_> {
        let t = self.variety.table();
        Columns::new(self.variety.ctx(), t.cols(), t.data())
    }

    fn all_columns(&self) -> Vec<usize> {
        (0..self.nu).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    #[serde(rename = "MDS")]
    Mds,
    #[serde(rename = "almost-MDS")]
    AlmostMds,
    #[serde(rename = "other")]
    Other,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Mds => "MDS",
            Status::AlmostMds => "almost-MDS",
            Status::Other => "other",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchPlan {
    /// Largest subset size to try; `None` means effective_N + 1.
    pub w_max: Option<usize>,
    /// Most subsets examined by any single search.
    pub budget: u64,
    /// Worker threads; 0 uses all cores. Results do not depend on it.
    pub workers: usize,
}

impl Default for SearchPlan {
    fn default() -> Self {
        SearchPlan { w_max: None, budget: DEFAULT_BUDGET, workers: 0 }
    }
}

impl SearchPlan {
    fn cap(&self, code: &Code) -> Result<usize> {
        let top = code.redundancy() + 1;
        match self.w_max {
            Some(w) if w > top => Err(Error::Budget(format!("w_max {w} exceeds effective_N + 1 = {top}"))),
            Some(w) => Ok(w),
            None => Ok(top),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageEntry {
    pub stage: String,
    pub subset_size: usize,
    /// Subsets in scope for this search.
    pub candidates: u64,
    /// Subsets examined, counted in lexicographic order.
    pub examined: u64,
    pub outcome: String,
}

/// Classification of one minimum-weight support.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Support {
    pub columns: Vec<usize>,
    pub points: Vec<Vec<u32>>,
    /// Codeword entries on the support (kernel vector, first entry 1).
    pub codeword: Vec<u32>,
    pub kernel_dim: usize,
    pub collinear: bool,
    pub q_sub: u64,
    /// First three pre-images; they determine the subline.
    pub subline_frame: Vec<Vec<u32>>,
    pub on_subline: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub total: u64,
    pub collinear: u64,
    pub on_subline: u64,
    pub violations: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CodeReport {
    pub field: FieldInfo,
    pub n: usize,
    pub sigma_exponents: Vec<u32>,
    pub d: usize,
    pub q_sub: u64,
    pub expected_n: u64,
    pub effective_n: usize,
    pub nu: usize,
    pub kappa: usize,
    pub delta: Option<usize>,
    /// Proven lower bound; equals `delta` when exact.
    pub delta_lower_bound: usize,
    pub delta_exact: bool,
    pub singleton_bound: usize,
    pub status: Option<Status>,
    pub witness: Option<Vec<usize>>,
    pub min_weight_support_count: Option<u64>,
    pub classification: Option<Classification>,
    pub supports: Vec<Support>,
    pub stage_log: Vec<StageEntry>,
    /// Wall-clock seconds per stage; excluded from the canonical hash.
    pub timings: BTreeMap<String, f64>,
    pub canonical_hash: String,
}

impl CodeReport {
    fn new(code: &Code) -> Self {
        let v = code.variety();
        CodeReport {
            field: v.ctx().info(),
            n: v.n(),
            sigma_exponents: v.sigma().exponents().to_vec(),
            d: code.d(),
            q_sub: v.sigma().q_sub(),
            expected_n: v.basis().expected_n(),
            effective_n: v.basis().effective_n(),
            nu: code.nu,
            kappa: code.kappa,
            delta: None,
            delta_lower_bound: 1,
            delta_exact: false,
            singleton_bound: code.singleton_bound(),
            status: None,
            witness: None,
            min_weight_support_count: None,
            classification: None,
            supports: Vec::new(),
            stage_log: Vec::new(),
            timings: BTreeMap::new(),
            canonical_hash: String::new(),
        }
    }

    /// JSON with timings and the hash itself blanked.
    pub fn canonical_json(&self) -> String {
        let mut c = self.clone();
        c.timings.clear();
        c.canonical_hash.clear();
        serde_json::to_string(&c).expect("report serializes")
    }

    pub fn seal(&mut self) {
        self.canonical_hash = hex::encode(Sha256::digest(self.canonical_json().as_bytes()));
    }

    fn log(&mut self, stage: &str, k: usize, candidates: u64, outcome: &Outcome) {
        let text = match outcome {
            Outcome::Found { subset, .. } => format!("dependent {subset:?}"),
            Outcome::Exhausted { .. } => "all independent".to_string(),
            Outcome::BudgetHit { .. } => "budget exhausted".to_string(),
        };
        self.stage_log.push(StageEntry {
            stage: stage.to_string(),
            subset_size: k,
            candidates,
            examined: outcome.examined(),
            outcome: text,
        });
    }

    fn note(&mut self, stage: &str, k: usize, text: String) {
        self.stage_log.push(StageEntry { stage: stage.into(), subset_size: k, candidates: 0, examined: 0, outcome: text });
    }

    fn resolve(&mut self, w: usize, witness: Vec<usize>) {
        self.delta = Some(w);
        self.delta_lower_bound = w;
        self.delta_exact = true;
        self.witness = Some(witness);
        self.status = mds_status(self).ok();
    }
}

struct Stopwatch {
    #[cfg(not(target_arch = "wasm32"))]
    start: std::time::Instant,
}

impl Stopwatch {
    fn start() -> Self {
        Stopwatch {
            #[cfg(not(target_arch = "wasm32"))]
            start: std::time::Instant::now(),
        }
    }
    fn secs(&self) -> f64 {
        #[cfg(not(target_arch = "wasm32"))]
        {
            self.start.elapsed().as_secs_f64()
        }
        #[cfg(target_arch = "wasm32")]
        {
            0.0
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneralPosition {
    pub k: usize,
    pub holds: bool,
    /// Lexicographically first dependent k-subset.
    pub counterexample: Option<Vec<usize>>,
    pub checked: u64,
}

/// Checks every k-subset of columns for independence.
pub fn verify_general_position(code: &Code, k: usize, budget: u64, workers: usize) -> Result<GeneralPosition> {
    if k > code.redundancy() {
        return Err(Error::BadSubset(format!("k = {k} exceeds effective_N = {}", code.redundancy())));
    }
    let total = binomial(code.nu as u64, k as u64);
    if total > budget {
        return Err(Error::Budget(format!("C({}, {k}) = {total} subsets exceeds budget {budget}", code.nu)));
    }
    match first_dependent(code.columns(), &code.all_columns(), k, budget, workers) {
        Outcome::Found { subset, rank } => {
            Ok(GeneralPosition { k, holds: false, counterexample: Some(subset), checked: rank + 1 })
        }
        Outcome::Exhausted { examined } => Ok(GeneralPosition { k, holds: true, counterexample: None, checked: examined }),
        Outcome::BudgetHit { .. } => unreachable!("total checked against budget"),
    }
}

/// Column groups of collinear points: the lines of PG(n-1, q^t).
fn line_groups(code: &Code) -> Vec<Vec<usize>> {
    let v = code.variety();
    if v.n() == 2 {
        vec![code.all_columns()]
    } else {
        lines(v.ctx(), v.points())
    }
}

/// Searches groups in order; the first group holding a dependent k-subset wins.
fn search_groups(code: &Code, groups: &[Vec<usize>], k: usize, plan: &SearchPlan) -> (Outcome, u64) {
    let candidates: u64 = groups.iter().map(|g| binomial(g.len() as u64, k as u64)).sum();
    let mut spent = 0u64;
    for g in groups {
        let left = plan.budget.saturating_sub(spent);
        match first_dependent(code.columns(), g, k, left, plan.workers) {
            Outcome::Found { subset, rank } => return (Outcome::Found { subset, rank: spent + rank }, candidates),
            Outcome::Exhausted { examined } => spent += examined,
            Outcome::BudgetHit { examined } => {
                return (Outcome::BudgetHit { examined: spent + examined }, candidates);
            }
        }
    }
    (Outcome::Exhausted { examined: spent }, candidates)
}

/// Exact minimum distance by staged search.
///
/// 1. All (d+1)-subsets independent gives δ ≥ d+2.
/// 2. Dependent (d+2)-subsets consist of collinear points, so only subsets of
///    lines are searched; when q' > d the q'-sublines are tried first.
/// 3. Otherwise sizes d+3, d+4, .. are searched over all columns in
///    lexicographic order, stopping at the first dependent set.
pub fn min_distance(code: &Code, plan: &SearchPlan) -> Result<CodeReport> {
    let mut report = CodeReport::new(code);
    let cap = plan.cap(code)?;
    let d = code.d();
    let top = code.redundancy() + 1;
    let all = code.all_columns();
    // Distinct projective points: no column is zero and no two are proportional.
    let mut lower = 3.min(top);

    let clock = Stopwatch::start();
    if d + 1 >= lower && d + 1 < top && d < cap {
        let k = d + 1;
        let out = first_dependent(code.columns(), &all, k, plan.budget, plan.workers);
        report.log("general-position", k, binomial(code.nu as u64, k as u64), &out);
        match out {
            Outcome::Exhausted { .. } => lower = k + 1,
            Outcome::BudgetHit { .. } => {}
            Outcome::Found { .. } => {
                report.note("general-position", k, "violated; falling back to exhaustive search".into());
                report.timings.insert("stage1".into(), clock.secs());
                return finish_exhaustive(code, plan, report, lower, cap);
            }
        }
    }
    report.timings.insert("stage1".into(), clock.secs());
    report.delta_lower_bound = lower;
    if lower < d + 2 {
        if matches!(report.stage_log.last(), Some(e) if e.outcome == "budget exhausted") {
            return Ok(report);
        }
        return finish_exhaustive(code, plan, report, lower, cap);
    }

    let clock = Stopwatch::start();
    let k = d + 2;
    if lower == k && k < top && k <= cap {
        let ctx = code.variety().ctx();
        let q_sub = code.variety().sigma().q_sub();
        let lines = line_groups(code);
        if q_sub > d as u64 && q_sub < ctx.order() as u64 {
            let points = code.variety().points();
            let mut subs = Vec::new();
            for l in &lines {
                subs.extend(sublines_in_line(ctx, points, l, q_sub)?);
            }
            let (out, cands) = search_groups(code, &subs, k, plan);
            report.log("sublines", k, cands, &out);
            if let Outcome::Found { subset, .. } = out {
                report.resolve(k, subset);
                report.timings.insert("stage2".into(), clock.secs());
                return Ok(report);
            }
        }
        let (out, cands) = search_groups(code, &lines, k, plan);
        report.log("collinear", k, cands, &out);
        report.timings.insert("stage2".into(), clock.secs());
        match out {
            Outcome::Found { subset, .. } => {
                report.resolve(k, subset);
                return Ok(report);
            }
            Outcome::Exhausted { .. } => lower = k + 1,
            Outcome::BudgetHit { .. } => {
                report.delta_lower_bound = lower;
                return Ok(report);
            }
        }
    }
    report.delta_lower_bound = lower;
    finish_exhaustive(code, plan, report, lower, cap)
}

/// Sizes `lower..=cap` over all columns; the first dependent set is minimal.
fn finish_exhaustive(code: &Code, plan: &SearchPlan, mut report: CodeReport, lower: usize, cap: usize) -> Result<CodeReport> {
    let clock = Stopwatch::start();
    let all = code.all_columns();
    let mut lower = lower;
    while lower <= cap {
        let out = first_dependent(code.columns(), &all, lower, plan.budget, plan.workers);
        report.log("exhaustive", lower, binomial(code.nu as u64, lower as u64), &out);
        match out {
            Outcome::Found { subset, .. } => {
                report.resolve(lower, subset);
                break;
            }
            Outcome::Exhausted { .. } => lower += 1,
            Outcome::BudgetHit { .. } => break,
        }
    }
    if !report.delta_exact {
        report.delta_lower_bound = lower;
    }
    report.timings.insert("stage3".into(), clock.secs());
    Ok(report)
}

/// Finds every dependent (d+2)-subset, which are exactly the supports of the
/// minimum-weight codewords up to scalars, and checks each against the
/// line and subline characterization.
pub fn classify_min_words(code: &Code, report: &mut CodeReport, budget: u64, workers: usize) -> Result<()> {
    let d = code.d();
    if report.delta != Some(d + 2) {
        return Err(Error::NotMinimumD2 { delta: report.delta, target: d + 2 });
    }
    let v = code.variety();
    let ctx = v.ctx();
    let q_sub = v.sigma().q_sub();
    let found = all_dependent(code.columns(), &code.all_columns(), d + 2, budget, workers).ok_or_else(|| {
        Error::Budget(format!("C({}, {}) subsets exceeds budget {budget}", code.nu, d + 2))
    })?;
    let mut summary = Classification::default();
    let mut supports = Vec::with_capacity(found.len());
    for cols in found {
        let pts: Vec<ProjPoint> = cols.iter().map(|&c| v.points()[c].clone()).collect();
        let kernel = code.h.select_columns(&cols).kernel_basis(ctx);
        let collinear = is_collinear(ctx, &pts)?;
        let on_subline = collinear && on_common_subline(ctx, &pts, q_sub)?;
        let codeword: Vec<u32> = kernel.first().map(|k| normalize(ctx, k)).unwrap_or_default();
        summary.total += 1;
        summary.collinear += collinear as u64;
        summary.on_subline += on_subline as u64;
        if !collinear {
            summary.violations.push(format!("{cols:?}: pre-images not collinear"));
        }
        if collinear && !on_subline {
            summary.violations.push(format!("{cols:?}: pre-images not on a common {q_sub}-subline"));
        }
        if kernel.len() != 1 {
            summary.violations.push(format!("{cols:?}: kernel dimension {}", kernel.len()));
        }
        if codeword.contains(&0) {
            summary.violations.push(format!("{cols:?}: codeword has a zero on its support"));
        }
        supports.push(Support {
            subline_frame: pts[..3].iter().map(ProjPoint::encoded).collect(),
            points: pts.iter().map(ProjPoint::encoded).collect(),
            columns: cols,
            codeword,
            kernel_dim: kernel.len(),
            collinear,
            q_sub,
            on_subline,
        });
    }
    report.min_weight_support_count = Some(summary.total);
    report.classification = Some(summary);
    report.supports = supports;
    Ok(())
}

fn normalize(ctx: &crate::ff::FieldCtx, v: &[Elem]) -> Vec<u32> {
    let lead = v.iter().copied().find(|x| !x.is_zero()).unwrap_or(Elem::ONE);
    let inv = ctx.inv(lead).expect("nonzero");
    v.iter().map(|&x| ctx.mul(x, inv).0).collect()
}

pub fn mds_status(report: &CodeReport) -> Result<Status> {
    let delta = report.delta.filter(|_| report.delta_exact).ok_or(Error::Unresolved(report.delta_lower_bound))?;
    let singleton = report.nu - report.kappa + 1;
    Ok(if delta == singleton {
        Status::Mds
    } else if delta + 1 == singleton {
        Status::AlmostMds
    } else {
        Status::Other
    })
}

/// Result of the unrestricted brute-force search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleResult {
    pub delta: Option<usize>,
    pub lower_bound: usize,
    pub witness: Option<Vec<usize>>,
}

/// Minimum distance by plain enumeration of column subsets of size
/// 1, 2, .., w_max with a fresh rank computation for each. Shares nothing
/// with the staged search beyond the parity-check matrix.
pub fn oracle_min_distance(code: &Code, w_max: usize) -> Result<OracleResult> {
    let total: u64 = (1..=w_max).map(|w| binomial(code.nu as u64, w as u64)).sum();
    if total > ORACLE_CAP {
        return Err(Error::Budget(format!("oracle would visit {total} subsets (cap {ORACLE_CAP})")));
    }
    let ctx = code.variety().ctx();
    let nu = code.nu;
    for w in 1..=w_max.min(nu) {
        let mut idx: Vec<usize> = (0..w).collect();
        loop {
            if code.h.select_columns(&idx).rank(ctx) < w {
                return Ok(OracleResult { delta: Some(w), lower_bound: w, witness: Some(idx) });
            }
            let Some(i) = (0..w).rev().find(|&i| idx[i] < nu - w + i) else { break };
            idx[i] += 1;
            for j in i + 1..w {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    Ok(OracleResult { delta: None, lower_bound: w_max + 1, witness: None })
}

/// Staged search, minimum-weight classification when δ = d+2, status, hash.
pub fn analyze(code: &Code, plan: &SearchPlan, classify: bool) -> Result<CodeReport> {
    let mut report = min_distance(code, plan)?;
    if classify && report.delta == Some(code.d() + 2) {
        let clock = Stopwatch::start();
        classify_min_words(code, &mut report, plan.budget, plan.workers)?;
        report.timings.insert("classify".into(), clock.secs());
    }
    report.seal();
    Ok(report)
}
