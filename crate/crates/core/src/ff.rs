//! Arithmetic in GF(p^m).
//!
//! Elements are stored by their canonical integer encoding: the coefficient
//! vector `(c_0, .., c_{m-1})` of the residue modulo the defining polynomial
//! maps to `c_0 + c_1 p + .. + c_{m-1} p^{m-1}`. Zero encodes as 0 and one as 1.
//!
//! Two arithmetic back ends share that encoding. Polynomial mode works on the
//! coefficient vectors directly; table mode uses log/antilog tables over a
//! fixed primitive element plus a Zech logarithm table for addition.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest field order accepted at all.
pub const MAX_FIELD_ORDER: u64 = 1 << 24;
/// Largest field order for which log tables are built.
pub const TABLE_THRESHOLD: u64 = 1 << 20;

const NO_LOG: u32 = u32::MAX;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Elem(pub u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Tables when the order is at most [`TABLE_THRESHOLD`].
    Auto,
    Polynomial,
    Table,
}

#[derive(Clone, Debug)]
struct Tables {
    /// `exp[k] = g^k` for `0 <= k < 2(q-1)`, doubled so sums of two logs need no reduction.
    exp: Vec<u32>,
    log: Vec<u32>,
    /// `zech[k] = log(1 + g^k)`, or `NO_LOG` when `1 + g^k = 0`.
    zech: Vec<u32>,
    /// `log(-1)`.
    neg_log: u32,
}

/// The field GF(p^m), viewed as F_{q^t} with q = p^e and m = e·t.
#[derive(Clone, Debug)]
pub struct FieldCtx {
    p: u32,
    e: u32,
    t: u32,
    m: u32,
    order: u32,
    /// Monic defining polynomial, ascending coefficients, length m+1.
    modulus: Vec<u32>,
    generator: Elem,
    tables: Option<Tables>,
}

/// Field parameters as they appear in exported reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldInfo {
    pub p: u32,
    pub e: u32,
    pub t: u32,
    pub modulus: Vec<u32>,
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub(crate) fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Dense polynomials over F_p with ascending coefficients; used only for the
/// modulus search.
mod fp_poly {
    pub fn trim(a: &mut Vec<u32>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    fn inv_mod(a: u32, p: u32) -> u32 {
        let mut r = 1u64;
        let mut b = a as u64;
        let mut k = p - 2;
        while k > 0 {
            if k & 1 == 1 {
                r = r * b % p as u64;
            }
            b = b * b % p as u64;
            k >>= 1;
        }
        r as u32
    }

    pub fn rem(a: &[u32], f: &[u32], p: u32) -> Vec<u32> {
        let mut r = a.to_vec();
        trim(&mut r);
        let df = f.len() - 1;
        let lead_inv = inv_mod(f[df], p) as u64;
        while r.len() > df {
            let top = r.len() - 1;
            let c = r[top] as u64 * lead_inv % p as u64;
            let shift = top - df;
            for (i, &fi) in f.iter().enumerate() {
                let sub = c * fi as u64 % p as u64;
                r[shift + i] = ((r[shift + i] as u64 + p as u64 - sub) % p as u64) as u32;
            }
            trim(&mut r);
        }
        r
    }

    pub fn mulmod(a: &[u32], b: &[u32], f: &[u32], p: u32) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut prod = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p as u64;
            }
        }
        let prod: Vec<u32> = prod.into_iter().map(|c| c as u32).collect();
        rem(&prod, f, p)
    }

    pub fn powmod(base: &[u32], mut k: u64, f: &[u32], p: u32) -> Vec<u32> {
        let mut r = rem(&[1], f, p);
        let mut b = rem(base, f, p);
        while k > 0 {
            if k & 1 == 1 {
                r = mulmod(&r, &b, f, p);
            }
            b = mulmod(&b, &b, f, p);
            k >>= 1;
        }
        r
    }

    pub fn gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let mut x = a.to_vec();
        let mut y = b.to_vec();
        trim(&mut x);
        trim(&mut y);
        while !y.is_empty() {
            let r = rem(&x, &y, p);
            x = y;
            y = r;
        }
        x
    }

    /// Ben-Or test for a monic polynomial of degree >= 1.
    pub fn is_irreducible(f: &[u32], p: u32) -> bool {
        let deg = f.len() - 1;
        let mut h = vec![0, 1];
        for _ in 1..=deg / 2 {
            h = powmod(&h, p as u64, f, p);
            let mut diff = h.clone();
            diff.resize(diff.len().max(2), 0);
            diff[1] = (diff[1] + p - 1) % p;
            trim(&mut diff);
            let g = gcd(f, &diff, p);
            if g.len() > 1 {
                return false;
            }
        }
        true
    }
}

/// Lexicographically smallest monic irreducible polynomial of degree `m` over
/// F_p, ordering coefficient tuples `(a_{m-1}, .., a_0)` ascending.
pub fn smallest_irreducible(p: u32, m: u32) -> Vec<u32> {
    let count = (p as u64).pow(m);
    for k in 0..count {
        let mut f = Vec::with_capacity(m as usize + 1);
        let mut r = k;
        for _ in 0..m {
            f.push((r % p as u64) as u32);
            r /= p as u64;
        }
        f.push(1);
        if fp_poly::is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("an irreducible polynomial of every degree exists")
}

impl FieldCtx {
    /// GF(p^m) with e = 1, t = m.
    pub fn new(p: u32, m: u32) -> Result<Self> {
        Self::build(p, 1, m, Mode::Auto)
    }

    /// F_{q^t} with q = p^e.
    pub fn from_tower(p: u32, e: u32, t: u32) -> Result<Self> {
        Self::build(p, e, t, Mode::Auto)
    }

    pub fn with_mode(p: u32, m: u32, mode: Mode) -> Result<Self> {
        Self::build(p, 1, m, mode)
    }

    pub fn build(p: u32, e: u32, t: u32, mode: Mode) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if e == 0 || t == 0 {
            return Err(Error::ZeroDegree);
        }
        let m = e.checked_mul(t).ok_or(Error::FieldTooLarge { p, m: u32::MAX, bound: MAX_FIELD_ORDER })?;
        let order = (p as u64).checked_pow(m).filter(|&o| o <= MAX_FIELD_ORDER);
        let order = order.ok_or(Error::FieldTooLarge { p, m, bound: MAX_FIELD_ORDER })?;
        let use_tables = match mode {
            Mode::Auto => order <= TABLE_THRESHOLD,
            Mode::Polynomial => false,
            Mode::Table => {
                if order > TABLE_THRESHOLD {
                    return Err(Error::FieldTooLarge { p, m, bound: TABLE_THRESHOLD });
                }
                true
            }
        };
        let modulus = smallest_irreducible(p, m);
        let mut ctx = FieldCtx {
            p,
            e,
            t,
            m,
            order: order as u32,
            modulus,
            generator: Elem::ONE,
            tables: None,
        };
        ctx.generator = ctx.find_generator();
        if use_tables {
            ctx.tables = Some(ctx.build_tables());
        }
        Ok(ctx)
    }

    fn find_generator(&self) -> Elem {
        let group = self.order as u64 - 1;
        if group == 1 {
            return Elem::ONE;
        }
        let factors = prime_factors(group);
        (2..self.order)
            .map(Elem)
            .find(|&g| factors.iter().all(|&r| self.poly_pow(g, group / r) != Elem::ONE))
            .expect("multiplicative group is cyclic")
    }

    fn build_tables(&self) -> Tables {
        let q1 = self.order as usize - 1;
        let mut exp = vec![0u32; 2 * q1];
        let mut log = vec![NO_LOG; self.order as usize];
        let mut x = Elem::ONE;
        for k in 0..q1 {
            exp[k] = x.0;
            exp[k + q1] = x.0;
            log[x.0 as usize] = k as u32;
            x = self.poly_mul(x, self.generator);
        }
        let mut zech = vec![NO_LOG; q1];
        for (k, z) in zech.iter_mut().enumerate() {
            let s = self.poly_add(Elem(exp[k]), Elem::ONE);
            if !s.is_zero() {
                *z = log[s.0 as usize];
            }
        }
        let neg_log = if self.p == 2 { 0 } else { (q1 / 2) as u32 };
        Tables { exp, log, zech, neg_log }
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn e(&self) -> u32 {
        self.e
    }
    pub fn t(&self) -> u32 {
        self.t
    }
    /// Total degree over the prime field.
    pub fn m(&self) -> u32 {
        self.m
    }
    /// Number of elements, p^m.
    pub fn order(&self) -> u32 {
        self.order
    }
    /// q = p^e.
    pub fn q(&self) -> u64 {
        (self.p as u64).pow(self.e)
    }
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }
    pub fn generator(&self) -> Elem {
        self.generator
    }
    pub fn has_tables(&self) -> bool {
        self.tables.is_some()
    }

    pub fn info(&self) -> FieldInfo {
        FieldInfo { p: self.p, e: self.e, t: self.t, modulus: self.modulus.clone() }
    }

    /// Defining polynomial in the usual notation, e.g. `x^3 + 2x + 1`.
    pub fn modulus_string(&self) -> String {
        let mut terms = Vec::new();
        for (i, &c) in self.modulus.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let coef = if c == 1 && i > 0 { String::new() } else { c.to_string() };
            terms.push(match i {
                0 => coef,
                1 => format!("{coef}x"),
                _ => format!("{coef}x^{i}"),
            });
        }
        terms.join(" + ")
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.order).map(Elem)
    }

    pub fn contains(&self, x: Elem) -> bool {
        x.0 < self.order
    }

    /// Coefficient vector of length m, ascending.
    pub fn coefficients(&self, x: Elem) -> Vec<u32> {
        let mut r = x.0;
        (0..self.m)
            .map(|_| {
                let c = r % self.p;
                r /= self.p;
                c
            })
            .collect()
    }

    pub fn from_coefficients(&self, coeffs: &[u32]) -> Elem {
        let mut v = 0u32;
        for &c in coeffs.iter().rev() {
            v = v * self.p + c % self.p;
        }
        Elem(v)
    }

    /// Image of an integer in the prime field.
    pub fn from_int(&self, k: i64) -> Elem {
        Elem(k.rem_euclid(self.p as i64) as u32)
    }

    // ---- polynomial mode ----

    fn poly_add(&self, a: Elem, b: Elem) -> Elem {
        if self.p == 2 {
            return Elem(a.0 ^ b.0);
        }
        let (mut x, mut y, mut out, mut place) = (a.0, b.0, 0u32, 1u32);
        while x > 0 || y > 0 {
            out += ((x % self.p + y % self.p) % self.p) * place;
            x /= self.p;
            y /= self.p;
            place = place.wrapping_mul(self.p);
        }
        Elem(out)
    }

    fn poly_neg(&self, a: Elem) -> Elem {
        if self.p == 2 {
            return a;
        }
        let (mut x, mut out, mut place) = (a.0, 0u32, 1u32);
        while x > 0 {
            out += ((self.p - x % self.p) % self.p) * place;
            x /= self.p;
            place = place.wrapping_mul(self.p);
        }
        Elem(out)
    }

    fn poly_mul(&self, a: Elem, b: Elem) -> Elem {
        if a.is_zero() || b.is_zero() {
            return Elem::ZERO;
        }
        let m = self.m as usize;
        let p = self.p as u64;
        let ca = self.coefficients(a);
        let cb = self.coefficients(b);
        let mut prod = vec![0u64; 2 * m - 1];
        for (i, &x) in ca.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in cb.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        // modulus is monic: x^m = -(a_{m-1} x^{m-1} + .. + a_0)
        for top in (m..prod.len()).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            prod[top] = 0;
            for (i, &fi) in self.modulus[..m].iter().enumerate() {
                let idx = top - m + i;
                prod[idx] = (prod[idx] + p * p - c * fi as u64) % p;
            }
        }
        let coeffs: Vec<u32> = prod[..m].iter().map(|&c| c as u32).collect();
        self.from_coefficients(&coeffs)
    }

    fn poly_pow(&self, a: Elem, mut k: u64) -> Elem {
        let mut r = Elem::ONE;
        let mut b = a;
        while k > 0 {
            if k & 1 == 1 {
                r = self.poly_mul(r, b);
            }
            b = self.poly_mul(b, b);
            k >>= 1;
        }
        r
    }

    // ---- public arithmetic ----

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if self.p == 2 {
            return Elem(a.0 ^ b.0);
        }
        match &self.tables {
            Some(t) => {
                if a.is_zero() {
                    return b;
                }
                if b.is_zero() {
                    return a;
                }
                let la = t.log[a.0 as usize];
                let lb = t.log[b.0 as usize];
                self.add_logs(t, la, lb)
            }
            None => self.poly_add(a, b),
        }
    }

    /// `g^la + g^lb` with both logs in `0..q-1`.
    #[inline]
    fn add_logs(&self, t: &Tables, la: u32, lb: u32) -> Elem {
        let q1 = self.order - 1;
        let diff = if lb >= la { lb - la } else { lb + q1 - la };
        let z = t.zech[diff as usize];
        if z == NO_LOG {
            Elem::ZERO
        } else {
            Elem(t.exp[(la + z) as usize])
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        if self.p == 2 || a.is_zero() {
            return a;
        }
        match &self.tables {
            Some(t) => Elem(t.exp[(t.log[a.0 as usize] + t.neg_log) as usize]),
            None => self.poly_neg(a),
        }
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.is_zero() || b.is_zero() {
            return Elem::ZERO;
        }
        match &self.tables {
            Some(t) => Elem(t.exp[(t.log[a.0 as usize] + t.log[b.0 as usize]) as usize]),
            None => self.poly_mul(a, b),
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: Elem) -> Option<Elem> {
        if a.is_zero() {
            return None;
        }
        Some(match &self.tables {
            Some(t) => {
                let q1 = self.order - 1;
                Elem(t.exp[((q1 - t.log[a.0 as usize]) % q1) as usize])
            }
            None => self.poly_pow(a, self.order as u64 - 2),
        })
    }

    /// `a^k` with the convention `0^0 = 1`.
    pub fn pow(&self, a: Elem, k: u64) -> Elem {
        if k == 0 {
            return Elem::ONE;
        }
        if a.is_zero() {
            return Elem::ZERO;
        }
        match &self.tables {
            Some(t) => {
                let q1 = (self.order - 1) as u64;
                let l = t.log[a.0 as usize] as u64 * (k % q1) % q1;
                Elem(t.exp[l as usize])
            }
            None => self.poly_pow(a, k),
        }
    }

    /// `x ↦ x^{p^s}`, for `0 <= s < m`.
    pub fn frobenius(&self, x: Elem, s: u32) -> Result<Elem> {
        if s >= self.m {
            return Err(Error::FrobeniusRange { s, m: self.m });
        }
        Ok(self.frob(x, s))
    }

    #[inline]
    pub(crate) fn frob(&self, x: Elem, s: u32) -> Elem {
        if s == 0 {
            x
        } else {
            self.pow(x, (self.p as u64).pow(s))
        }
    }

    /// `v[k] -= c * row[k]` for every k. Hot path of the elimination workspace.
    #[inline]
    pub fn sub_scaled(&self, v: &mut [Elem], c: Elem, row: &[Elem]) {
        if c.is_zero() {
            return;
        }
        match &self.tables {
            Some(t) => {
                let q1 = self.order - 1;
                // -(c * r) = g^{log c + log(-1) + log r}
                let mut lc = t.log[c.0 as usize] + t.neg_log;
                if lc >= q1 {
                    lc -= q1;
                }
                for (x, &r) in v.iter_mut().zip(row) {
                    if r.is_zero() {
                        continue;
                    }
                    let mut l = lc + t.log[r.0 as usize];
                    if l >= q1 {
                        l -= q1;
                    }
                    if self.p == 2 {
                        x.0 ^= t.exp[l as usize];
                    } else if x.is_zero() {
                        *x = Elem(t.exp[l as usize]);
                    } else {
                        *x = self.add_logs(t, t.log[x.0 as usize], l);
                    }
                }
            }
            None => {
                for (x, &r) in v.iter_mut().zip(row) {
                    *x = self.sub(*x, self.mul(c, r));
                }
            }
        }
    }

    /// Orders `p^s` of all subfields, `s | m`, ascending.
    pub fn subfield_orders(&self) -> Vec<u64> {
        (1..=self.m).filter(|s| self.m.is_multiple_of(*s)).map(|s| (self.p as u64).pow(s)).collect()
    }

    /// The `q'` elements satisfying `x^{q'} = x`.
    pub fn subfield_elements(&self, q_sub: u64) -> Result<Vec<Elem>> {
        if !self.subfield_orders().contains(&q_sub) {
            return Err(Error::NotSubfield(q_sub, self.order as u64));
        }
        Ok(self.elements().filter(|&x| self.pow(x, q_sub) == x).collect())
    }
}
