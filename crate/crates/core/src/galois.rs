//! Prime and extension fields of order at most 2^20.
//!
//! Elements are plain `u32` values whose base-p digits are the polynomial
//! coefficients (little-endian), so `3` in F_8 is x + 1. Multiplication goes
//! through log/antilog tables.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::linalg::Mat;

/// A field element in its integer encoding.
pub type Fe = u32;

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 20;
/// Largest order for which moduli are Conway polynomials.
pub const CONWAY_LIMIT: u64 = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldId {
    pub p: u32,
    pub s: u32,
}

impl FieldId {
    pub fn order(&self) -> u64 {
        (self.p as u64).pow(self.s)
    }
}

impl fmt::Display for FieldId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.s == 1 {
            write!(f, "F_{}", self.p)
        } else {
            write!(f, "F_{}^{}", self.p, self.s)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FieldError {
    NotPrime(u32),
    TooLarge { p: u32, s: u32 },
    Mismatch { left: FieldId, right: FieldId },
    ZeroInverse,
    NotSubfield { small: FieldId, big: FieldId },
    NotInSubfield,
    OutOfRange(u64),
}

impl fmt::Display for FieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldError::NotPrime(p) => write!(f, "{p} is not prime"),
            FieldError::TooLarge { p, s } => write!(f, "field {p}^{s} exceeds 2^20 elements"),
            FieldError::Mismatch { left, right } => write!(f, "field mismatch: {left} vs {right}"),
            FieldError::ZeroInverse => write!(f, "zero has no inverse"),
            FieldError::NotSubfield { small, big } => write!(f, "{small} is not a subfield of {big}"),
            FieldError::NotInSubfield => write!(f, "element does not lie in the subfield"),
            FieldError::OutOfRange(v) => write!(f, "value {v} is not a field element"),
        }
    }
}

/// An element tagged with its field, for the checked API.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldElem {
    pub field: FieldId,
    pub value: Fe,
}

impl FieldElem {
    /// Little-endian coefficients over F_p, length s.
    pub fn coeffs(&self) -> Vec<u32> {
        digits(self.value, self.field.p, self.field.s)
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

fn digits(mut v: u32, p: u32, s: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(s as usize);
    for _ in 0..s {
        out.push(v % p);
        v /= p;
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
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

// ---- polynomials over F_p, coefficient vectors low to high ----

fn trim(a: &mut Vec<u32>) {
    while a.len() > 1 && *a.last().unwrap() == 0 {
        a.pop();
    }
}

fn poly_mulmod(a: &[u32], b: &[u32], f: &[u32], p: u32) -> Vec<u32> {
    let n = f.len() - 1;
    let mut prod = vec![0u64; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    let mut r: Vec<u32> = prod.iter().map(|&v| v as u32).collect();
    // f is monic
    for deg in (n..r.len()).rev() {
        let c = r[deg];
        if c == 0 {
            continue;
        }
        for i in 0..=n {
            let idx = deg - n + i;
            r[idx] = ((r[idx] as u64 + (p - c) as u64 * f[i] as u64) % p as u64) as u32;
        }
    }
    r.truncate(n);
    r.resize(n, 0);
    r
}

fn poly_powmod(base: &[u32], mut e: u64, f: &[u32], p: u32) -> Vec<u32> {
    let n = f.len() - 1;
    let mut result = vec![0u32; n];
    result[0] = 1;
    let mut b = base.to_vec();
    b.resize(n.max(b.len()), 0);
    let mut b = poly_mulmod(&b, &[1], f, p);
    while e > 0 {
        if e & 1 == 1 {
            result = poly_mulmod(&result, &b, f, p);
        }
        b = poly_mulmod(&b, &b, f, p);
        e >>= 1;
    }
    result
}

fn is_one(a: &[u32]) -> bool {
    a[0] == 1 && a[1..].iter().all(|&c| c == 0)
}

fn x_poly(n: usize) -> Vec<u32> {
    let mut x = vec![0u32; n.max(2)];
    x[1] = 1;
    x
}

/// Whether x has multiplicative order p^n - 1 modulo the monic f.
fn is_primitive_poly(f: &[u32], p: u32) -> bool {
    let n = f.len() - 1;
    if f[0] == 0 {
        return false;
    }
    let order = (p as u64).pow(n as u32) - 1;
    let x = if n == 1 { vec![(p - f[0]) % p] } else { x_poly(n) };
    if !is_one(&pad1(poly_powmod(&x, order, f, p))) {
        return false;
    }
    for r in prime_factors(order) {
        if is_one(&pad1(poly_powmod(&x, order / r, f, p))) {
            return false;
        }
    }
    true
}

fn pad1(mut v: Vec<u32>) -> Vec<u32> {
    if v.len() < 2 {
        v.resize(2, 0);
    }
    v
}

fn poly_sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let n = a.len().max(b.len());
    let mut r = vec![0u32; n];
    for i in 0..n {
        let x = *a.get(i).unwrap_or(&0);
        let y = *b.get(i).unwrap_or(&0);
        r[i] = (x + p - y) % p;
    }
    trim(&mut r);
    r
}

fn inv_mod_p(a: u32, p: u32) -> u32 {
    let mut r = 1u64;
    let mut b = a as u64 % p as u64;
    let mut e = p as u64 - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p as u64;
        }
        b = b * b % p as u64;
        e >>= 1;
    }
    r as u32
}

fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    trim(&mut r);
    let mut b = b.to_vec();
    trim(&mut b);
    let db = b.len() - 1;
    if db == 0 {
        return vec![0];
    }
    let lead_inv = inv_mod_p(b[db], p);
    while r.len() > db {
        let dr = r.len() - 1;
        let c = (r[dr] as u64 * lead_inv as u64 % p as u64) as u32;
        for i in 0..=db {
            let idx = dr - db + i;
            r[idx] = ((r[idx] as u64 + (p - c) as u64 * b[i] as u64) % p as u64) as u32;
        }
        trim(&mut r);
    }
    r
}

fn poly_gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut x = a.to_vec();
    trim(&mut x);
    let mut y = b.to_vec();
    trim(&mut y);
    while !(y.len() == 1 && y[0] == 0) {
        let r = poly_rem(&x, &y, p);
        x = y;
        y = r;
    }
    x
}

/// Rabin irreducibility test for a monic f over F_p.
fn is_irreducible_poly(f: &[u32], p: u32) -> bool {
    let n = f.len() - 1;
    if n == 1 {
        return true;
    }
    if f[0] == 0 {
        return false;
    }
    let x = x_poly(n);
    let frob = |k: u32| poly_powmod(&x, (p as u64).pow(k), f, p);
    if poly_sub(&frob(n as u32), &x, p) != [0] {
        return false;
    }
    for r in prime_factors(n as u64) {
        let h = poly_sub(&frob((n as u64 / r) as u32), &x, p);
        let g = poly_gcd(f, &h, p);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

/// Monic polynomial from the Conway-order counter: coefficient of x^i is
/// (-1)^(n-i) a_i, where a_{n-1} is the most significant digit of `c`.
fn conway_candidate(c: u64, p: u32, n: usize) -> Vec<u32> {
    let mut f = vec![0u32; n + 1];
    f[n] = 1;
    let mut v = c;
    for i in 0..n {
        let a = (v % p as u64) as u32;
        v /= p as u64;
        f[i] = if (n - i) % 2 == 0 { a } else { (p - a) % p };
    }
    f
}

fn eval_poly_at(poly: &[u32], g: &[u32], f: &[u32], p: u32) -> Vec<u32> {
    let n = f.len() - 1;
    let mut acc = vec![0u32; n];
    for &c in poly.iter().rev() {
        acc = poly_mulmod(&acc, g, f, p);
        acc[0] = (acc[0] + c) % p;
    }
    acc
}

/// Conway polynomial C_{p,n}, computed by search.
pub fn conway_polynomial(p: u32, n: u32) -> Vec<u32> {
    let n = n as usize;
    let subs: Vec<(u32, Vec<u32>)> = (1..n as u32)
        .filter(|m| n as u32 % m == 0)
        .map(|m| (m, conway_polynomial(p, m)))
        .collect();
    let total = (p as u64).pow(n as u32);
    let qn = total - 1;
    for c in 0..total {
        let f = conway_candidate(c, p, n);
        if !is_primitive_poly(&f, p) {
            continue;
        }
        let compatible = subs.iter().all(|(m, cm)| {
            let e = qn / ((p as u64).pow(*m) - 1);
            let g = poly_powmod(&x_poly(n), e, &f, p);
            eval_poly_at(cm, &g, &f, p).iter().all(|&v| v == 0)
        });
        if compatible {
            return f;
        }
    }
    unreachable!("Conway polynomials exist for every p and n")
}

fn least_irreducible(p: u32, n: u32) -> Vec<u32> {
    let total = (p as u64).pow(n);
    for c in 0..total {
        let f = conway_candidate(c, p, n as usize);
        if is_irreducible_poly(&f, p) {
            return f;
        }
    }
    unreachable!()
}

/// The canonical modulus for F_{p^s}.
pub fn canonical_modulus(p: u32, s: u32) -> Vec<u32> {
    if (p as u64).pow(s) <= CONWAY_LIMIT {
        conway_polynomial(p, s)
    } else {
        least_irreducible(p, s)
    }
}

/// Arithmetic context for one finite field.
pub struct FieldCtx {
    p: u32,
    s: u32,
    q: u32,
    modulus: Vec<u32>,
    gamma: Fe,
    exp: Vec<Fe>,
    log: Vec<u32>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldCtx({}, modulus {:?})", self.id(), self.modulus)
    }
}

pub type Field = Arc<FieldCtx>;

impl FieldCtx {
    pub fn new(p: u32, s: u32) -> Result<FieldCtx, FieldError> {
        if !is_prime(p as u64) {
            return Err(FieldError::NotPrime(p));
        }
        if s == 0 || (p as u64).checked_pow(s).map_or(true, |q| q > MAX_ORDER) {
            return Err(FieldError::TooLarge { p, s });
        }
        let modulus = canonical_modulus(p, s);
        Ok(Self::with_modulus(p, s, modulus))
    }

    /// Builds F_q for a prime power q.
    pub fn of_order(q: u64) -> Result<FieldCtx, FieldError> {
        let fs = prime_factors(q);
        if fs.len() != 1 {
            return Err(FieldError::OutOfRange(q));
        }
        let p = fs[0];
        let mut s = 0;
        let mut v = q;
        while v > 1 {
            v /= p;
            s += 1;
        }
        FieldCtx::new(p as u32, s)
    }

    pub fn shared(p: u32, s: u32) -> Result<Field, FieldError> {
        Ok(Arc::new(FieldCtx::new(p, s)?))
    }

    fn with_modulus(p: u32, s: u32, modulus: Vec<u32>) -> FieldCtx {
        let q = p.pow(s);
        let mut ctx = FieldCtx { p, s, q, modulus, gamma: 0, exp: Vec::new(), log: Vec::new() };
        let gamma = ctx.find_primitive();
        ctx.gamma = gamma;
        let n = (q - 1) as usize;
        let mut exp = vec![0u32; 2 * n.max(1)];
        let mut log = vec![0u32; q as usize];
        let g = ctx.to_poly(gamma);
        let mut cur = vec![0u32; s as usize];
        cur[0] = 1;
        for i in 0..n {
            let v = ctx.from_poly(&cur);
            exp[i] = v;
            exp[i + n] = v;
            log[v as usize] = i as u32;
            cur = ctx.slow_mul(&cur, &g);
        }
        if n == 0 {
            exp[0] = 1;
        }
        ctx.exp = exp;
        ctx.log = log;
        ctx
    }

    fn to_poly(&self, a: Fe) -> Vec<u32> {
        digits(a, self.p, self.s)
    }

    fn from_poly(&self, c: &[u32]) -> Fe {
        c.iter().rev().fold(0u32, |acc, &d| acc * self.p + d)
    }

    fn slow_mul(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        if self.s == 1 {
            return vec![(a[0] as u64 * b[0] as u64 % self.p as u64) as u32];
        }
        poly_mulmod(a, b, &self.modulus, self.p)
    }

    fn slow_order_is_full(&self, a: Fe) -> bool {
        if a == 0 {
            return false;
        }
        let n = (self.q - 1) as u64;
        let pa = self.to_poly(a);
        let pow = |e: u64| {
            let mut r = vec![0u32; self.s as usize];
            r[0] = 1;
            let mut b = pa.clone();
            let mut e = e;
            while e > 0 {
                if e & 1 == 1 {
                    r = self.slow_mul(&r, &b);
                }
                b = self.slow_mul(&b, &b);
                e >>= 1;
            }
            r
        };
        prime_factors(n).into_iter().all(|r| self.from_poly(&pow(n / r)) != 1)
    }

    fn find_primitive(&self) -> Fe {
        if self.q == 2 {
            return 1;
        }
        (1..self.q).find(|&a| self.slow_order_is_full(a)).expect("multiplicative group is cyclic")
    }

    pub fn id(&self) -> FieldId {
        FieldId { p: self.p, s: self.s }
    }
    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn s(&self) -> u32 {
        self.s
    }
    pub fn order(&self) -> u32 {
        self.q
    }
    /// Bits needed to write one element, ceil(log2 q).
    pub fn bits(&self) -> u32 {
        32 - (self.q - 1).leading_zeros()
    }
    pub fn log2_order(&self) -> f64 {
        libm::log2(self.q as f64)
    }
    /// Monic modulus, coefficients low to high.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }
    pub fn gamma(&self) -> Fe {
        self.gamma
    }

    pub fn elem(&self, v: Fe) -> Result<FieldElem, FieldError> {
        if v >= self.q {
            return Err(FieldError::OutOfRange(v as u64));
        }
        Ok(FieldElem { field: self.id(), value: v })
    }

    pub fn from_coeffs(&self, c: &[u32]) -> Result<FieldElem, FieldError> {
        if c.len() != self.s as usize || c.iter().any(|&d| d >= self.p) {
            return Err(FieldError::OutOfRange(c.len() as u64));
        }
        self.elem(self.from_poly(c))
    }

    /// Maps an integer into the prime subfield.
    pub fn from_int(&self, v: i64) -> Fe {
        v.rem_euclid(self.p as i64) as Fe
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        if self.p == 2 {
            return a ^ b;
        }
        if self.s == 1 {
            let r = a + b;
            return if r >= self.p { r - self.p } else { r };
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0u32;
        let mut scale = 1u32;
        for _ in 0..self.s {
            let d = (a % self.p + b % self.p) % self.p;
            out += d * scale;
            scale *= self.p;
            a /= self.p;
            b /= self.p;
        }
        out
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        if self.p == 2 {
            return a;
        }
        if self.s == 1 {
            return if a == 0 { 0 } else { self.p - a };
        }
        let mut a = a;
        let mut out = 0u32;
        let mut scale = 1u32;
        for _ in 0..self.s {
            let d = (self.p - a % self.p) % self.p;
            out += d * scale;
            scale *= self.p;
            a /= self.p;
        }
        out
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a == 0 || b == 0 {
            return 0;
        }
        self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
    }

    pub fn inv(&self, a: Fe) -> Option<Fe> {
        if a == 0 {
            return None;
        }
        let n = self.q - 1;
        Some(self.exp[((n - self.log[a as usize]) % n) as usize])
    }

    pub fn div(&self, a: Fe, b: Fe) -> Option<Fe> {
        Some(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Fe, e: u64) -> Fe {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let n = (self.q - 1) as u64;
        self.exp[((self.log[a as usize] as u64 * (e % n)) % n) as usize]
    }

    /// gamma^i for any integer i.
    pub fn gamma_pow(&self, i: i64) -> Fe {
        let n = (self.q - 1) as i64;
        self.exp[i.rem_euclid(n) as usize]
    }

    /// Discrete log base gamma; None for zero.
    pub fn log(&self, a: Fe) -> Option<u32> {
        if a == 0 {
            None
        } else {
            Some(self.log[a as usize])
        }
    }

    /// Multiplicative order of a nonzero element.
    pub fn mult_order(&self, a: Fe) -> Option<u64> {
        let l = self.log(a)? as u64;
        let n = (self.q - 1) as u64;
        Some(n / num_integer::gcd(n, l))
    }

    pub fn sum(&self, it: impl IntoIterator<Item = Fe>) -> Fe {
        it.into_iter().fold(0, |acc, v| self.add(acc, v))
    }

    pub fn dot(&self, a: &[Fe], b: &[Fe]) -> Fe {
        a.iter().zip(b).fold(0, |acc, (&x, &y)| self.add(acc, self.mul(x, y)))
    }

    fn check(&self, a: &FieldElem) -> Result<(), FieldError> {
        if a.field != self.id() {
            return Err(FieldError::Mismatch { left: self.id(), right: a.field });
        }
        if a.value >= self.q {
            return Err(FieldError::OutOfRange(a.value as u64));
        }
        Ok(())
    }

    pub fn ff_add(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem, FieldError> {
        self.check(&a)?;
        self.check(&b)?;
        Ok(FieldElem { field: self.id(), value: self.add(a.value, b.value) })
    }

    pub fn ff_mul(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem, FieldError> {
        self.check(&a)?;
        self.check(&b)?;
        Ok(FieldElem { field: self.id(), value: self.mul(a.value, b.value) })
    }

    pub fn ff_inv(&self, a: FieldElem) -> Result<FieldElem, FieldError> {
        self.check(&a)?;
        let v = self.inv(a.value).ok_or(FieldError::ZeroInverse)?;
        Ok(FieldElem { field: self.id(), value: v })
    }
}

/// A field F embedded in an extension E of degree `degree`.
#[derive(Clone)]
pub struct Extension {
    pub base: Field,
    pub ext: Field,
    degree: u32,
    step: u64,
    root_log: u64,
    root_exp_inv: u64,
}

impl fmt::Debug for Extension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Extension({} over {})", self.ext.id(), self.base.id())
    }
}

impl Extension {
    pub fn new(base: Field, ext: Field) -> Result<Extension, FieldError> {
        let (fb, fe) = (base.id(), ext.id());
        if fb.p != fe.p || fe.s % fb.s != 0 {
            return Err(FieldError::NotSubfield { small: fb, big: fe });
        }
        let degree = fe.s / fb.s;
        let nb = base.order() as u64 - 1;
        let ne = ext.order() as u64 - 1;
        let step = ne / nb;
        // image of base.gamma must be a root of the base modulus
        let is_root = |lg: u64| {
            let beta = ext.gamma_pow(lg as i64);
            let m = base.modulus();
            let mut acc = 0;
            for &c in m.iter().rev() {
                acc = ext.add(ext.mul(acc, beta), c);
            }
            acc == 0
        };
        let mut i = 1u64;
        loop {
            if num_integer::gcd(i, nb.max(1)) == 1 && is_root(step * i % ne.max(1)) {
                break;
            }
            i += 1;
            if i > nb.max(1) {
                return Err(FieldError::NotSubfield { small: fb, big: fe });
            }
        }
        let root_exp_inv = if nb <= 1 { 0 } else { mod_inverse(i, nb) };
        Ok(Extension { base, ext, degree, step, root_log: step * i % ne.max(1), root_exp_inv })
    }

    pub fn of(base: &Field, degree: u32) -> Result<Extension, FieldError> {
        let ext = FieldCtx::shared(base.p(), base.s() * degree)?;
        Extension::new(base.clone(), ext)
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Canonical image of a base element in the extension.
    pub fn embed(&self, x: Fe) -> Fe {
        if x == 0 {
            return 0;
        }
        let lx = self.base.log(x).unwrap() as u64;
        let ne = self.ext.order() as u64 - 1;
        self.ext.gamma_pow(((self.root_log as u128 * lx as u128) % ne as u128) as i64)
    }

    /// Inverse of `embed` on the image.
    pub fn pull_back(&self, y: Fe) -> Result<Fe, FieldError> {
        if y == 0 {
            return Ok(0);
        }
        let l = self.ext.log(y).unwrap() as u64;
        if l % self.step != 0 {
            return Err(FieldError::NotInSubfield);
        }
        let nb = self.base.order() as u64 - 1;
        if nb <= 1 {
            return Ok(1);
        }
        let k = (l / self.step) % nb * self.root_exp_inv % nb;
        Ok(self.base.gamma_pow(k as i64))
    }

    pub fn in_base(&self, y: Fe) -> bool {
        y == 0 || self.ext.log(y).unwrap() as u64 % self.step == 0
    }

    /// Trace of E over F, returned as a base-field element.
    pub fn trace(&self, x: Fe) -> Fe {
        let y = self.trace_in_ext(x);
        self.pull_back(y).expect("trace lands in the base field")
    }

    fn trace_in_ext(&self, x: Fe) -> Fe {
        if x == 0 {
            return 0;
        }
        let ne = self.ext.order() as u64 - 1;
        let qb = self.base.order() as u64;
        let l = self.ext.log(x).unwrap() as u64;
        let mut acc = 0;
        let mut e = 1u64;
        for _ in 0..self.degree {
            acc = self.ext.add(acc, self.ext.gamma_pow(((l as u128 * e as u128) % ne as u128) as i64));
            e = e * qb % ne.max(1);
        }
        acc
    }

    /// Checked form of `embed`.
    pub fn embed_elem(&self, x: FieldElem) -> Result<FieldElem, FieldError> {
        self.base.check(&x)?;
        Ok(FieldElem { field: self.ext.id(), value: self.embed(x.value) })
    }

    /// Checked form of `trace`.
    pub fn trace_elem(&self, x: FieldElem) -> Result<FieldElem, FieldError> {
        self.ext.check(&x)?;
        Ok(FieldElem { field: self.base.id(), value: self.trace(x.value) })
    }

    /// Base-field multiple of an extension element.
    pub fn scale(&self, c: Fe, y: Fe) -> Fe {
        self.ext.mul(self.embed(c), y)
    }

    /// Trace-dual basis: returns d with tr(basis_i d_j) = [i == j].
    pub fn dual_basis(&self, basis: &[Fe]) -> Option<Vec<Fe>> {
        let n = self.degree as usize;
        if basis.len() != n {
            return None;
        }
        let f = &self.base;
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, self.trace(self.ext.mul(basis[i], basis[j])));
            }
        }
        let minv = m.inverse(f)?;
        let mut out = vec![0; n];
        for j in 0..n {
            let mut acc = 0;
            for k in 0..n {
                acc = self.ext.add(acc, self.scale(minv.get(j, k), basis[k]));
            }
            out[j] = acc;
        }
        Some(out)
    }

    /// Coordinates of y in `basis` given its dual basis.
    pub fn coords(&self, y: Fe, dual: &[Fe]) -> Vec<Fe> {
        dual.iter().map(|&d| self.trace(self.ext.mul(y, d))).collect()
    }

    /// Powers gamma^lo .. gamma^(lo+degree-1) of the extension's primitive element.
    pub fn power_basis(&self, lo: i64) -> Vec<Fe> {
        (0..self.degree as i64).map(|i| self.ext.gamma_pow(lo + i)).collect()
    }
}

fn mod_inverse(a: u64, m: u64) -> u64 {
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    old_s.rem_euclid(m as i128) as u64
}
