//! The (d,σ)-Veronese embedding
//! `⟨v⟩ ↦ ⟨v^{σ_0} ⊗ v^{σ_1} ⊗ .. ⊗ v^{σ_{d-1}}⟩`
//! coordinatized by its distinct twisted monomials.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ff::{gcd, Elem, FieldCtx, FieldInfo};
use crate::linalg::Matrix;
use crate::pg::{enum_points, point_count, ProjPoint};

/// Largest variety table (points × coordinates) that will be built.
pub const MAX_TABLE_ENTRIES: u64 = 1 << 26;

/// The automorphism tuple σ, each entry stored as the exponent s of
/// `x ↦ x^{p^s}`, sorted with `s_0 = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SigmaVector {
    exponents: Vec<u32>,
    distinct: Vec<u32>,
    multiplicities: Vec<usize>,
    norm: u64,
    q_sub: u64,
    p: u32,
    m: u32,
}

impl SigmaVector {
    /// From powers of p. Entries may be given in any order.
    pub fn new(ctx: &FieldCtx, exponents: &[u32]) -> Result<Self> {
        if exponents.is_empty() {
            return Err(Error::BadSigma("sigma needs at least one entry (d >= 1)".into()));
        }
        let m = ctx.m();
        if let Some(&s) = exponents.iter().find(|&&s| s >= m) {
            return Err(Error::BadSigma(format!("exponent {s} out of range 0..{m} for GF({})", ctx.order())));
        }
        let mut exps = exponents.to_vec();
        exps.sort_unstable();
        if exps[0] != 0 {
            return Err(Error::BadSigma(
                "the first automorphism must be the identity (some exponent must be 0)".into(),
            ));
        }
        let p = ctx.p() as u64;
        let norm: u64 = exps.iter().map(|&s| p.pow(s)).sum();
        let order = ctx.order() as u64;
        if norm >= order {
            return Err(Error::NormTooLarge { norm, order });
        }
        let mut distinct = Vec::new();
        let mut multiplicities = Vec::new();
        for &s in &exps {
            if distinct.last() == Some(&s) {
                *multiplicities.last_mut().unwrap() += 1;
            } else {
                distinct.push(s);
                multiplicities.push(1);
            }
        }
        let g = exps.iter().filter(|&&s| s != 0).fold(m as u64, |g, &s| gcd(g, s as u64));
        let q_sub = p.pow(g as u32);
        Ok(SigmaVector { exponents: exps, distinct, multiplicities, norm, q_sub, p: ctx.p(), m })
    }

    /// From powers of q = p^e: `x ↦ x^{q^h}` becomes `s = e·h`.
    pub fn from_q_powers(ctx: &FieldCtx, h: &[u32]) -> Result<Self> {
        if let Some(&bad) = h.iter().find(|&&h| h >= ctx.t()) {
            return Err(Error::BadSigma(format!("q-exponent {bad} out of range 0..{}", ctx.t())));
        }
        let s: Vec<u32> = h.iter().map(|&h| h * ctx.e()).collect();
        Self::new(ctx, &s)
    }

    pub fn d(&self) -> usize {
        self.exponents.len()
    }
    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }
    /// Distinct exponents, ascending.
    pub fn distinct(&self) -> &[u32] {
        &self.distinct
    }
    /// How often each distinct exponent occurs (d_σ).
    pub fn multiplicities(&self) -> &[usize] {
        &self.multiplicities
    }
    /// |σ| = Σ p^{s_i}.
    pub fn norm(&self) -> u64 {
        self.norm
    }
    /// Order of the largest subfield fixed by every entry.
    pub fn q_sub(&self) -> u64 {
        self.q_sub
    }

    fn matches(&self, ctx: &FieldCtx) -> bool {
        self.p == ctx.p() && self.m == ctx.m()
    }
}

/// Exponent vectors of degree `deg` in `n` variables, lexicographically descending.
pub fn exponent_vectors(n: usize, deg: u32) -> Vec<Vec<u32>> {
    fn rec(n: usize, deg: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() + 1 == n {
            prefix.push(deg);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for k in (0..=deg).rev() {
            prefix.push(k);
            rec(n, deg - k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        rec(n, deg, &mut Vec::with_capacity(n), &mut out);
    }
    out
}

pub fn binomial(n: u64, k: u64) -> u64 {
    let k = k.min(n.saturating_sub(k));
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// The distinct twisted monomials `Π_j X_{I_j}^{σ_j}` and where each
/// multi-index `(I_0, .., I_m)` lands.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialBasis {
    n: usize,
    /// Total exponent vectors, lexicographically descending.
    monomials: Vec<Vec<u32>>,
    /// For each distinct automorphism, its degree-d_j exponent vectors.
    factors: Vec<Vec<Vec<u32>>>,
    /// Monomial index of each multi-index, mixed radix with the last factor fastest.
    origin_map: Vec<usize>,
    expected_n: u64,
}

impl MonomialBasis {
    pub fn new(n: usize, sigma: &SigmaVector) -> Result<Self> {
        if n < 2 {
            return Err(Error::Dimension(format!("n = {n}; the embedding needs n >= 2")));
        }
        let p = sigma.p as u64;
        let factors: Vec<Vec<Vec<u32>>> =
            sigma.multiplicities.iter().map(|&dj| exponent_vectors(n, dj as u32)).collect();
        let weights: Vec<u32> = sigma.distinct.iter().map(|&s| p.pow(s) as u32).collect();
        let expected_n: u64 = factors.iter().map(|f| f.len() as u64).product();

        let mut totals = Vec::with_capacity(expected_n as usize);
        let mut digits = vec![0usize; factors.len()];
        'tuples: loop {
            let mut e = vec![0u32; n];
            for ((f, &d), &w) in factors.iter().zip(&digits).zip(&weights) {
                for (ek, &fk) in e.iter_mut().zip(&f[d]) {
                    *ek += fk * w;
                }
            }
            totals.push(e);
            // mixed-radix increment, last factor fastest
            let mut j = factors.len();
            loop {
                if j == 0 {
                    break 'tuples;
                }
                j -= 1;
                digits[j] += 1;
                if digits[j] < factors[j].len() {
                    break;
                }
                digits[j] = 0;
            }
        }

        let distinct: BTreeSet<Vec<u32>> = totals.iter().cloned().collect();
        let monomials: Vec<Vec<u32>> = distinct.into_iter().rev().collect();
        let index: HashMap<&Vec<u32>, usize> = monomials.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let origin_map = totals.iter().map(|t| index[t]).collect();
        Ok(MonomialBasis { n, monomials, factors, origin_map, expected_n })
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn monomials(&self) -> &[Vec<u32>] {
        &self.monomials
    }
    /// Degree-d_j exponent vectors of each distinct automorphism.
    pub fn factors(&self) -> &[Vec<Vec<u32>>] {
        &self.factors
    }
    pub fn origin_map(&self) -> &[usize] {
        &self.origin_map
    }
    /// `Π_j binom(n + d_j - 1, d_j)`.
    pub fn expected_n(&self) -> u64 {
        self.expected_n
    }
    pub fn effective_n(&self) -> usize {
        self.monomials.len()
    }
    pub fn collapsed(&self) -> bool {
        (self.effective_n() as u64) < self.expected_n
    }

    pub fn index_of(&self, exponents: &[u32]) -> Option<usize> {
        // descending order, so compare reversed
        self.monomials.binary_search_by(|m| exponents.cmp(m.as_slice())).ok()
    }
}

/// Evaluates every basis monomial at the point's canonical coordinates (0^0 = 1).
pub fn embed_point(ctx: &FieldCtx, point: &ProjPoint, basis: &MonomialBasis) -> Vec<Elem> {
    let x = point.coords();
    basis
        .monomials
        .iter()
        .map(|e| e.iter().zip(x).fold(Elem::ONE, |acc, (&k, &xi)| ctx.mul(acc, ctx.pow(xi, k as u64))))
        .collect()
}

/// The embedded points of PG(n-1, q^t), one row per point in canonical order.
#[derive(Clone, Debug)]
pub struct VarietyMatrix {
    ctx: Arc<FieldCtx>,
    n: usize,
    sigma: SigmaVector,
    basis: MonomialBasis,
    points: Vec<ProjPoint>,
    table: Matrix,
    rank: usize,
}

pub fn build_variety(n: usize, sigma: &SigmaVector, ctx: Arc<FieldCtx>) -> Result<VarietyMatrix> {
    if !sigma.matches(&ctx) {
        return Err(Error::BadSigma("sigma was built for a different field".into()));
    }
    let basis = MonomialBasis::new(n, sigma)?;
    let count = point_count(ctx.order() as u64, n);
    let entries = count.saturating_mul(basis.effective_n() as u64);
    if entries > MAX_TABLE_ENTRIES {
        return Err(Error::TooLarge(format!(
            "{count} points x {} coordinates exceeds {MAX_TABLE_ENTRIES} entries",
            basis.effective_n()
        )));
    }
    let points = enum_points(n, &ctx);
    let rows = embed_all(&ctx, &points, &basis);
    let table = Matrix::from_rows(&rows)?;

    let mut seen = HashSet::with_capacity(rows.len());
    for (i, row) in rows.into_iter().enumerate() {
        let canon = ProjPoint::new(&ctx, row)
            .map_err(|_| Error::Invariant(format!("point {i} embeds to the zero vector")))?;
        if !seen.insert(canon) {
            return Err(Error::Invariant(format!("embedding is not injective at point {i}")));
        }
    }
    let rank = table.rank(&ctx);
    Ok(VarietyMatrix { ctx, n, sigma: sigma.clone(), basis, points, table, rank })
}

#[cfg(feature = "parallel")]
fn embed_all(ctx: &FieldCtx, points: &[ProjPoint], basis: &MonomialBasis) -> Vec<Vec<Elem>> {
    use rayon::prelude::*;
    points.par_iter().map(|p| embed_point(ctx, p, basis)).collect()
}

#[cfg(not(feature = "parallel"))]
fn embed_all(ctx: &FieldCtx, points: &[ProjPoint], basis: &MonomialBasis) -> Vec<Vec<Elem>> {
    points.iter().map(|p| embed_point(ctx, p, basis)).collect()
}

impl VarietyMatrix {
    pub fn ctx(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn sigma(&self) -> &SigmaVector {
        &self.sigma
    }
    pub fn basis(&self) -> &MonomialBasis {
        &self.basis
    }
    pub fn points(&self) -> &[ProjPoint] {
        &self.points
    }
    /// Points × coordinates; its transpose is the parity-check matrix.
    pub fn table(&self) -> &Matrix {
        &self.table
    }
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn to_json(&self) -> VarietyJson {
        VarietyJson {
            field: self.ctx.info(),
            n: self.n,
            sigma_exponents: self.sigma.exponents.clone(),
            expected_n: self.basis.expected_n,
            effective_n: self.basis.effective_n(),
            basis: self.basis.monomials.clone(),
            points: self.points.iter().map(ProjPoint::encoded).collect(),
            coords: (0..self.table.rows()).map(|r| self.table.row(r).iter().map(|x| x.0).collect()).collect(),
        }
    }
}

/// Interchange form of a variety. Loading rebuilds the variety from the
/// header and rejects files whose tables disagree with it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VarietyJson {
    pub field: FieldInfo,
    pub n: usize,
    pub sigma_exponents: Vec<u32>,
    pub expected_n: u64,
    pub effective_n: usize,
    pub basis: Vec<Vec<u32>>,
    pub points: Vec<Vec<u32>>,
    pub coords: Vec<Vec<u32>>,
}

impl VarietyJson {
    pub fn load(&self) -> Result<VarietyMatrix> {
        let FieldInfo { p, e, t, .. } = self.field;
        let ctx = Arc::new(FieldCtx::from_tower(p, e, t)?);
        if ctx.modulus() != self.field.modulus.as_slice() {
            return Err(Error::Parse(format!(
                "modulus {:?} differs from the canonical one {:?}",
                self.field.modulus,
                ctx.modulus()
            )));
        }
        let sigma = SigmaVector::new(&ctx, &self.sigma_exponents)?;
        let v = build_variety(self.n, &sigma, ctx)?;
        if v.to_json() != *self {
            return Err(Error::Parse("variety file does not match its own header".into()));
        }
        Ok(v)
    }
}

/// Block layout of V(nd) carrying the normal rational scroll: block i holds
/// the image of V(n) under the i-th power of the index shift `e_k ↦ e_{k+n}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScrollFrame {
    n: usize,
    exponents: Vec<u32>,
}

impl ScrollFrame {
    pub fn new(n: usize, sigma: &SigmaVector) -> Self {
        ScrollFrame { n, exponents: sigma.exponents.clone() }
    }

    pub fn d(&self) -> usize {
        self.exponents.len()
    }

    pub fn dim(&self) -> usize {
        self.n * self.d()
    }

    pub fn block(&self, i: usize) -> std::ops::Range<usize> {
        i * self.n..(i + 1) * self.n
    }

    /// `e_k ↦ e_{k+n}` on indices, modulo nd.
    pub fn shift(&self, k: usize) -> usize {
        (k + self.n) % self.dim()
    }

    /// The vectors `P^{σ_0}, P^{φσ_1}, .., P^{φ^{d-1}σ_{d-1}}` spanning the
    /// scroll's (d-1)-space through P.
    pub fn scroll_vectors(&self, ctx: &FieldCtx, point: &ProjPoint) -> Vec<Vec<Elem>> {
        self.exponents
            .iter()
            .enumerate()
            .map(|(i, &s)| {
                let mut v = vec![Elem::ZERO; self.dim()];
                for (k, &x) in point.coords().iter().enumerate() {
                    let mut idx = k;
                    for _ in 0..i {
                        idx = self.shift(idx);
                    }
                    v[idx] = ctx.frob(x, s);
                }
                v
            })
            .collect()
    }
}

/// Plücker coordinates of the scroll space through P: every d-subset of the
/// nd basis indices (lexicographic) with its d×d minor.
pub fn plucker_coordinates(ctx: &FieldCtx, point: &ProjPoint, frame: &ScrollFrame) -> Vec<(Vec<usize>, Elem)> {
    let vs = scroll_vectors_matrix(ctx, point, frame);
    let d = frame.d();
    let mut out = Vec::new();
    let mut subset: Vec<usize> = (0..d).collect();
    let nd = frame.dim();
    loop {
        let minor = vs.select_columns(&subset).determinant(ctx).expect("square");
        out.push((subset.clone(), minor));
        // next d-subset of 0..nd in lex order
        let Some(i) = (0..d).rev().find(|&i| subset[i] < nd - d + i) else {
            break;
        };
        subset[i] += 1;
        for j in i + 1..d {
            subset[j] = subset[j - 1] + 1;
        }
    }
    out
}

fn scroll_vectors_matrix(ctx: &FieldCtx, point: &ProjPoint, frame: &ScrollFrame) -> Matrix {
    Matrix::from_rows(&frame.scroll_vectors(ctx, point)).expect("equal widths")
}

/// Checks that the wedge of the scroll vectors vanishes off transversal index
/// sets (one index per block) and agrees with the tensor coordinates of the
/// embedding on them. With blocks taken in order the sign is +1.
pub fn scroll_plucker_check(ctx: &FieldCtx, point: &ProjPoint, frame: &ScrollFrame, basis: &MonomialBasis) -> bool {
    if point.dim() != frame.n || basis.n() != frame.n {
        return false;
    }
    let embedded = embed_point(ctx, point, basis);
    let p = ctx.p() as u64;
    plucker_coordinates(ctx, point, frame).into_iter().all(|(subset, minor)| {
        let transversal = subset.iter().enumerate().all(|(i, &k)| frame.block(i).contains(&k));
        if !transversal {
            return minor.is_zero();
        }
        let mut exps = vec![0u32; frame.n];
        for (i, &k) in subset.iter().enumerate() {
            exps[k - i * frame.n] += p.pow(frame.exponents[i]) as u32;
        }
        match basis.index_of(&exps) {
            Some(idx) => embedded[idx] == minor,
            None => false,
        }
    })
}
