//! Dense exact linear algebra over a [`FieldCtx`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ff::{Elem, FieldCtx};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Elem>, // row-major
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Elem>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Elem::ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Elem::ONE);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Elem>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Ok(Matrix { rows: rows.len(), cols, data: rows.concat() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn data(&self) -> &[Elem] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Elem {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, x: Elem) {
        self.data[r * self.cols + c] = x;
    }

    pub fn row(&self, r: usize) -> &[Elem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Elem> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(self.rows, cols.len());
        for r in 0..self.rows {
            for (j, &c) in cols.iter().enumerate() {
                out.set(r, j, self.get(r, c));
            }
        }
        out
    }

    pub fn mul_vec(&self, ctx: &FieldCtx, v: &[Elem]) -> Result<Vec<Elem>> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!("vector of length {} vs {} columns", v.len(), self.cols)));
        }
        Ok((0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(Elem::ZERO, |acc, (&a, &b)| ctx.add(acc, ctx.mul(a, b)))
            })
            .collect())
    }

    /// Reduced row echelon form and the pivot columns, scanning for the first
    /// nonzero entry in each column.
    pub fn rref(&self, ctx: &FieldCtx) -> (Matrix, Vec<usize>) {
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..a.cols {
            if r == a.rows {
                break;
            }
            let Some(pr) = (r..a.rows).find(|&i| !a.get(i, c).is_zero()) else {
                continue;
            };
            a.swap_rows(r, pr);
            let inv = ctx.inv(a.get(r, c)).expect("pivot is nonzero");
            for k in 0..a.cols {
                let x = a.get(r, k);
                a.set(r, k, ctx.mul(x, inv));
            }
            let pivot_row = a.row(r).to_vec();
            for i in 0..a.rows {
                if i != r {
                    let f = a.get(i, c);
                    let cols = a.cols;
                    ctx.sub_scaled(&mut a.data[i * cols..(i + 1) * cols], f, &pivot_row);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (a, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self, ctx: &FieldCtx) -> usize {
        self.rref(ctx).1.len()
    }

    /// Basis of `{v : M v = 0}`: one vector per free column (ascending), with
    /// a 1 in that column and the negated reduced entries in the pivot columns.
    pub fn kernel_basis(&self, ctx: &FieldCtx) -> Vec<Vec<Elem>> {
        let (r, pivots) = self.rref(ctx);
        let free = (0..self.cols).filter(|c| !pivots.contains(c));
        free.map(|f| {
            let mut v = vec![Elem::ZERO; self.cols];
            v[f] = Elem::ONE;
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = ctx.neg(r.get(i, f));
            }
            v
        })
        .collect()
    }

    pub fn determinant(&self, ctx: &FieldCtx) -> Result<Elem> {
        if self.rows != self.cols {
            return Err(Error::Dimension(format!("determinant of a {}x{} matrix", self.rows, self.cols)));
        }
        let mut a = self.clone();
        let mut det = Elem::ONE;
        for c in 0..a.cols {
            let Some(pr) = (c..a.rows).find(|&i| !a.get(i, c).is_zero()) else {
                return Ok(Elem::ZERO);
            };
            if pr != c {
                a.swap_rows(c, pr);
                det = ctx.neg(det);
            }
            let pivot = a.get(c, c);
            det = ctx.mul(det, pivot);
            let inv = ctx.inv(pivot).expect("pivot is nonzero");
            let pivot_row: Vec<Elem> = a.row(c).iter().map(|&x| ctx.mul(x, inv)).collect();
            for i in c + 1..a.rows {
                let f = a.get(i, c);
                let cols = a.cols;
                ctx.sub_scaled(&mut a.data[i * cols..(i + 1) * cols], f, &pivot_row);
            }
        }
        Ok(det)
    }

    /// True iff the chosen columns are linearly independent.
    pub fn is_independent(&self, ctx: &FieldCtx, columns: &[usize]) -> Result<bool> {
        check_subset(columns, self.cols)?;
        let mut elim = Eliminator::new(self.rows);
        Ok(columns.iter().all(|&c| {
            elim.push_with(ctx, |slot| {
                for (r, x) in slot.iter_mut().enumerate() {
                    *x = self.get(r, c);
                }
            })
        }))
    }

    /// Rows as lines of comma-separated integer encodings.
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for r in 0..self.rows {
            let line: Vec<String> = self.row(r).iter().map(|x| x.0.to_string()).collect();
            s.push_str(&line.join(","));
            s.push('\n');
        }
        s
    }

    pub fn from_csv(ctx: &FieldCtx, text: &str) -> Result<Matrix> {
        let rows = text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(|l| l.split(',').map(|f| parse_entry(ctx, f.trim())).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Matrix::from_rows(&rows)
    }

    pub fn to_json(&self, ctx: &FieldCtx) -> MatrixJson {
        MatrixJson {
            p: ctx.p(),
            e: ctx.e(),
            t: ctx.t(),
            rows: self.rows,
            cols: self.cols,
            data: (0..self.rows).map(|r| self.row(r).iter().map(|x| x.0).collect()).collect(),
        }
    }

    pub fn from_json(ctx: &FieldCtx, json: &MatrixJson) -> Result<Matrix> {
        if (json.p, json.e, json.t) != (ctx.p(), ctx.e(), ctx.t()) {
            return Err(Error::Parse(format!(
                "matrix over p={} e={} t={} loaded into GF({})",
                json.p,
                json.e,
                json.t,
                ctx.order()
            )));
        }
        if json.data.len() != json.rows {
            return Err(Error::Dimension(format!("{} data rows, header says {}", json.data.len(), json.rows)));
        }
        let mut data = Vec::with_capacity(json.rows * json.cols);
        for row in &json.data {
            if row.len() != json.cols {
                return Err(Error::Dimension("ragged rows".into()));
            }
            for &x in row {
                let x = Elem(x);
                if !ctx.contains(x) {
                    return Err(Error::Parse(format!("entry {} outside GF({})", x.0, ctx.order())));
                }
                data.push(x);
            }
        }
        Matrix::new(json.rows, json.cols, data)
    }
}

fn parse_entry(ctx: &FieldCtx, s: &str) -> Result<Elem> {
    let v: u32 = s.parse().map_err(|_| Error::Parse(format!("bad matrix entry {s:?}")))?;
    if !ctx.contains(Elem(v)) {
        return Err(Error::Parse(format!("entry {v} outside GF({})", ctx.order())));
    }
    Ok(Elem(v))
}

/// JSON form of a matrix; entries are canonical integer encodings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub p: u32,
    pub e: u32,
    pub t: u32,
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Vec<u32>>,
}

pub(crate) fn check_subset(columns: &[usize], len: usize) -> Result<()> {
    let mut seen = vec![false; len];
    for &c in columns {
        if c >= len {
            return Err(Error::BadSubset(format!("index {c} out of range 0..{len}")));
        }
        if std::mem::replace(&mut seen[c], true) {
            return Err(Error::BadSubset(format!("index {c} repeated")));
        }
    }
    Ok(())
}

/// Incremental forward elimination over vectors of a fixed width.
///
/// Stored rows are normalized (pivot 1) and reduced against all earlier rows,
/// so a pushed vector is reduced in one pass. Storage is reused across
/// `truncate`/`push` cycles; the subset searches keep one per worker.
#[derive(Clone, Debug)]
pub struct Eliminator {
    width: usize,
    rows: Vec<Elem>,
    pivots: Vec<usize>,
}

impl Eliminator {
    pub fn new(width: usize) -> Self {
        Eliminator { width, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn with_capacity(width: usize, depth: usize) -> Self {
        Eliminator { width, rows: Vec::with_capacity(width * depth), pivots: Vec::with_capacity(depth) }
    }

    /// Number of stored (independent) vectors.
    pub fn len(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pivots.is_empty()
    }

    pub fn truncate(&mut self, len: usize) {
        self.pivots.truncate(len);
    }

    pub fn clear(&mut self) {
        self.pivots.clear();
    }

    /// Pushes `v`; returns false (and stores nothing) if it lies in the span.
    pub fn push(&mut self, ctx: &FieldCtx, v: &[Elem]) -> bool {
        self.push_with(ctx, |slot| slot.copy_from_slice(v))
    }

    pub fn push_with(&mut self, ctx: &FieldCtx, fill: impl FnOnce(&mut [Elem])) -> bool {
        let w = self.width;
        let level = self.pivots.len();
        if self.rows.len() < (level + 1) * w {
            self.rows.resize((level + 1) * w, Elem::ZERO);
        }
        let (done, rest) = self.rows.split_at_mut(level * w);
        let slot = &mut rest[..w];
        fill(slot);
        for (i, &pc) in self.pivots.iter().enumerate() {
            let c = slot[pc];
            if !c.is_zero() {
                ctx.sub_scaled(&mut slot[pc..], c, &done[i * w + pc..(i + 1) * w]);
            }
        }
        let Some(pc) = slot.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = ctx.inv(slot[pc]).expect("nonzero");
        for x in &mut slot[pc..] {
            *x = ctx.mul(*x, inv);
        }
        self.pivots.push(pc);
        true
    }
}
