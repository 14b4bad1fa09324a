//! Points, lines and sublines of PG(n-1, q^t).

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ff::{Elem, FieldCtx};
use crate::linalg::Matrix;

/// A projective point stored by its canonical representative: the first
/// nonzero coordinate is 1. Ordering is lexicographic on the encodings.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ProjPoint {
    coords: Vec<Elem>,
}

impl ProjPoint {
    /// Normalizes any nonzero vector.
    pub fn new(ctx: &FieldCtx, coords: Vec<Elem>) -> Result<Self> {
        if coords.iter().any(|&x| !ctx.contains(x)) {
            return Err(Error::BadPoint(format!("{coords:?} has entries outside GF({})", ctx.order())));
        }
        let lead = coords
            .iter()
            .copied()
            .find(|x| !x.is_zero())
            .ok_or_else(|| Error::BadPoint("zero vector".into()))?;
        let inv = ctx.inv(lead).expect("nonzero");
        Ok(ProjPoint { coords: coords.into_iter().map(|x| ctx.mul(x, inv)).collect() })
    }

    pub fn coords(&self) -> &[Elem] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn encoded(&self) -> Vec<u32> {
        self.coords.iter().map(|x| x.0).collect()
    }
}

/// `|PG(n-1, q)| = (q^n - 1)/(q - 1)`.
pub fn point_count(q: u64, n: usize) -> u64 {
    (0..n as u32).map(|i| q.pow(i)).sum()
}

/// All points of PG(n-1, ctx) in lexicographic order of their canonical
/// coordinates. This order fixes the column order of every parity-check
/// matrix built from the points.
pub fn enum_points(n: usize, ctx: &FieldCtx) -> Vec<ProjPoint> {
    let q = ctx.order() as u64;
    let mut out = Vec::with_capacity(point_count(q, n) as usize);
    // Points whose leading 1 sits further right come first.
    for lead in (0..n).rev() {
        let tail = n - lead - 1;
        let count = q.pow(tail as u32);
        for k in 0..count {
            let mut coords = vec![Elem::ZERO; n];
            coords[lead] = Elem::ONE;
            let mut r = k;
            for pos in (lead + 1..n).rev() {
                coords[pos] = Elem((r % q) as u32);
                r /= q;
            }
            out.push(ProjPoint { coords });
        }
    }
    out
}

fn coordinate_matrix(points: &[&ProjPoint]) -> Result<Matrix> {
    let rows: Vec<Vec<Elem>> = points.iter().map(|p| p.coords.clone()).collect();
    Matrix::from_rows(&rows)
}

pub fn is_collinear(ctx: &FieldCtx, points: &[ProjPoint]) -> Result<bool> {
    if points.len() < 2 {
        return Err(Error::BadPoint("collinearity needs at least 2 points".into()));
    }
    let refs: Vec<&ProjPoint> = points.iter().collect();
    Ok(coordinate_matrix(&refs)?.rank(ctx) <= 2)
}

/// The q^t + 1 points of the line through two distinct points, sorted.
pub fn line_through(ctx: &FieldCtx, a: &ProjPoint, b: &ProjPoint) -> Result<Vec<ProjPoint>> {
    if a == b || a.dim() != b.dim() {
        return Err(Error::BadPoint("a line needs two distinct points of the same space".into()));
    }
    let mut pts = vec![a.clone()];
    for lambda in ctx.elements() {
        let v = b.coords.iter().zip(&a.coords).map(|(&y, &x)| ctx.add(y, ctx.mul(lambda, x))).collect();
        pts.push(ProjPoint::new(ctx, v)?);
    }
    pts.sort();
    Ok(pts)
}

/// Three distinct collinear points and a subfield order: determines a unique
/// subline isomorphic to PG(1, q').
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SublineSpec {
    pub q_sub: u64,
    pub frame: [ProjPoint; 3],
}

impl SublineSpec {
    pub fn new(ctx: &FieldCtx, frame: [ProjPoint; 3], q_sub: u64) -> Result<Self> {
        if !ctx.subfield_orders().contains(&q_sub) {
            return Err(Error::NotSubfield(q_sub, ctx.order() as u64));
        }
        let [a, b, c] = &frame;
        if a == b || b == c || a == c {
            return Err(Error::BadFrame("frame points are not distinct".into()));
        }
        if a.dim() != b.dim() || a.dim() != c.dim() {
            return Err(Error::BadFrame("frame points live in different spaces".into()));
        }
        if !is_collinear(ctx, &frame)? {
            return Err(Error::BadFrame("frame points are not collinear".into()));
        }
        Ok(SublineSpec { q_sub, frame })
    }

    /// Points of the subline, sorted. The line is parametrized so that the
    /// frame gets parameters ∞, 0, 1; the subline is F_{q'} ∪ {∞}.
    pub fn points(&self, ctx: &FieldCtx) -> Vec<ProjPoint> {
        let [u0, u1, u2] = [&self.frame[0].coords, &self.frame[1].coords, &self.frame[2].coords];
        let n = u0.len();
        // Solve u2 = alpha*u0 + beta*u1 on two coordinates where u0, u1 are independent.
        let (i, j, det) = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .map(|(i, j)| (i, j, ctx.sub(ctx.mul(u0[i], u1[j]), ctx.mul(u1[i], u0[j]))))
            .find(|(_, _, d)| !d.is_zero())
            .expect("frame points are distinct");
        let dinv = ctx.inv(det).expect("nonzero");
        let alpha = ctx.mul(ctx.sub(ctx.mul(u2[i], u1[j]), ctx.mul(u1[i], u2[j])), dinv);
        let beta = ctx.mul(ctx.sub(ctx.mul(u0[i], u2[j]), ctx.mul(u2[i], u0[j])), dinv);
        let w0: Vec<Elem> = u0.iter().map(|&x| ctx.mul(alpha, x)).collect();
        let w1: Vec<Elem> = u1.iter().map(|&x| ctx.mul(beta, x)).collect();
        let params = ctx.subfield_elements(self.q_sub).expect("validated subfield");
        let mut pts: Vec<ProjPoint> = params
            .into_iter()
            .map(|lambda| {
                let v = w1.iter().zip(&w0).map(|(&b, &a)| ctx.add(b, ctx.mul(lambda, a))).collect();
                ProjPoint::new(ctx, v).expect("w0, w1 independent")
            })
            .collect();
        pts.push(self.frame[0].clone());
        pts.sort();
        pts
    }
}

pub fn subline_through(
    ctx: &FieldCtx,
    p0: &ProjPoint,
    p1: &ProjPoint,
    p2: &ProjPoint,
    q_sub: u64,
) -> Result<Vec<ProjPoint>> {
    Ok(SublineSpec::new(ctx, [p0.clone(), p1.clone(), p2.clone()], q_sub)?.points(ctx))
}

/// True iff all points lie on the q'-subline through the first three.
pub fn on_common_subline(ctx: &FieldCtx, points: &[ProjPoint], q_sub: u64) -> Result<bool> {
    if points.len() < 3 {
        return Err(Error::BadFrame("a subline test needs at least 3 points".into()));
    }
    let distinct: BTreeSet<&ProjPoint> = points.iter().collect();
    if distinct.len() != points.len() {
        return Err(Error::BadFrame("points are not distinct".into()));
    }
    if !is_collinear(ctx, points)? {
        return Ok(false);
    }
    let sub = subline_through(ctx, &points[0], &points[1], &points[2], q_sub)?;
    Ok(points[3..].iter().all(|p| sub.binary_search(p).is_ok()))
}

/// Lookup from canonical coordinates to position in an ordered point list.
#[derive(Clone, Debug)]
pub struct PointIndex {
    map: HashMap<Vec<Elem>, usize>,
}

impl PointIndex {
    pub fn new(points: &[ProjPoint]) -> Self {
        PointIndex { map: points.iter().enumerate().map(|(i, p)| (p.coords.clone(), i)).collect() }
    }

    pub fn get(&self, p: &ProjPoint) -> Option<usize> {
        self.map.get(&p.coords).copied()
    }
}

/// Every line of the space as a sorted list of point indices; lines are
/// ordered by their two smallest indices.
pub fn lines(ctx: &FieldCtx, points: &[ProjPoint]) -> Vec<Vec<usize>> {
    let index = PointIndex::new(points);
    let mut out = Vec::new();
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let line: Vec<usize> = {
                let mut v: Vec<usize> = line_through(ctx, &points[i], &points[j])
                    .expect("distinct points")
                    .iter()
                    .map(|p| index.get(p).expect("point of the space"))
                    .collect();
                v.sort_unstable();
                v
            };
            if line[0] == i && line[1] == j {
                out.push(line);
            }
        }
    }
    out
}

/// All q'-sublines contained in the given line, each a sorted index list,
/// found by running over every frame and deduplicating.
pub fn sublines_in_line(ctx: &FieldCtx, points: &[ProjPoint], line: &[usize], q_sub: u64) -> Result<Vec<Vec<usize>>> {
    if !ctx.subfield_orders().contains(&q_sub) {
        return Err(Error::NotSubfield(q_sub, ctx.order() as u64));
    }
    if q_sub == ctx.order() as u64 {
        return Ok(vec![line.to_vec()]);
    }
    let index = PointIndex::new(points);
    let mut found = BTreeSet::new();
    for (a, &i) in line.iter().enumerate() {
        for (b, &j) in line.iter().enumerate().skip(a + 1) {
            for &k in &line[b + 1..] {
                let spec = SublineSpec { q_sub, frame: [points[i].clone(), points[j].clone(), points[k].clone()] };
                let mut sub: Vec<usize> =
                    spec.points(ctx).iter().map(|p| index.get(p).expect("point of the space")).collect();
                sub.sort_unstable();
                found.insert(sub);
            }
        }
    }
    Ok(found.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(ctx: &FieldCtx, c: &[u32]) -> ProjPoint {
        ProjPoint::new(ctx, c.iter().map(|&x| Elem(x)).collect()).unwrap()
    }

    #[test]
    fn point_counts() {
        let f27 = FieldCtx::new(3, 3).unwrap();
        let f4 = FieldCtx::new(2, 2).unwrap();
        assert_eq!(enum_points(2, &f27).len(), 28);
        assert_eq!(enum_points(3, &f4).len(), 21);
        assert_eq!(enum_points(1, &f4).len(), 1);
        let pts = enum_points(3, &f4);
        assert!(pts.windows(2).all(|w| w[0] < w[1]));
        assert!(pts.iter().all(|p| p.coords.iter().find(|x| !x.is_zero()) == Some(&Elem::ONE)));
    }

    #[test]
    fn normalization() {
        let f = FieldCtx::new(5, 1).unwrap();
        assert_eq!(pt(&f, &[0, 3, 1]).coords(), &[Elem(0), Elem(1), Elem(2)]);
        assert!(ProjPoint::new(&f, vec![Elem(0), Elem(0)]).is_err());
        assert!(ProjPoint::new(&f, vec![Elem(7)]).is_err());
    }

    #[test]
    fn collinearity() {
        let f = FieldCtx::new(2, 2).unwrap();
        assert!(is_collinear(&f, &[pt(&f, &[1, 0, 0]), pt(&f, &[0, 1, 3])]).unwrap());
        assert!(!is_collinear(&f, &[pt(&f, &[1, 0, 0]), pt(&f, &[0, 1, 0]), pt(&f, &[0, 0, 1])]).unwrap());
        let on_line: Vec<ProjPoint> =
            enum_points(2, &f).iter().map(|p| pt(&f, &[p.coords[0].0, p.coords[1].0, 0])).collect();
        assert!(is_collinear(&f, &on_line).unwrap());
        assert!(is_collinear(&f, &on_line[..1]).is_err());
    }

    #[test]
    fn canonical_sublines() {
        let f16 = FieldCtx::new(2, 4).unwrap();
        let (inf, zero, one) = (pt(&f16, &[1, 0]), pt(&f16, &[0, 1]), pt(&f16, &[1, 1]));
        assert_eq!(subline_through(&f16, &inf, &zero, &one, 2).unwrap(), vec![zero.clone(), inf.clone(), one.clone()]);
        let mut expect: Vec<ProjPoint> = f16.subfield_elements(4).unwrap().iter().map(|z| pt(&f16, &[1, z.0])).collect();
        expect.push(zero.clone());
        expect.sort();
        assert_eq!(subline_through(&f16, &inf, &zero, &one, 4).unwrap(), expect);
    }

    #[test]
    fn subline_errors() {
        let f16 = FieldCtx::new(2, 4).unwrap();
        let (a, b) = (pt(&f16, &[1, 0]), pt(&f16, &[0, 1]));
        assert!(matches!(subline_through(&f16, &a, &b, &a, 4), Err(Error::BadFrame(_))));
        assert!(matches!(subline_through(&f16, &a, &b, &pt(&f16, &[1, 1]), 8), Err(Error::NotSubfield(..))));
        let f4 = FieldCtx::new(2, 2).unwrap();
        let frame = [pt(&f4, &[1, 0, 0]), pt(&f4, &[0, 1, 0]), pt(&f4, &[0, 0, 1])];
        assert!(matches!(SublineSpec::new(&f4, frame, 2), Err(Error::BadFrame(_))));
    }

    #[test]
    fn common_subline() {
        let f16 = FieldCtx::new(2, 4).unwrap();
        let g = f16.generator();
        assert!(f16.pow(g, 4) != g);
        let pts = [pt(&f16, &[1, 0]), pt(&f16, &[0, 1]), pt(&f16, &[1, 1]), pt(&f16, &[1, g.0])];
        assert!(on_common_subline(&f16, &pts[..3], 4).unwrap());
        assert!(!on_common_subline(&f16, &pts, 4).unwrap());
        assert!(on_common_subline(&f16, &pts, 16).unwrap());
        assert!(on_common_subline(&f16, &pts[..2], 4).is_err());
    }

    #[test]
    fn lines_of_small_planes() {
        let f2 = FieldCtx::new(2, 1).unwrap();
        let pts = enum_points(3, &f2);
        let ls = lines(&f2, &pts);
        assert_eq!(ls.len(), 7);
        assert!(ls.iter().all(|l| l.len() == 3));
        let f4 = FieldCtx::new(2, 2).unwrap();
        let pts = enum_points(3, &f4);
        assert_eq!(lines(&f4, &pts).len(), 21);
        assert_eq!(lines(&f4, &enum_points(2, &f4)).len(), 1);
    }
}
