//! Schemes whose output shares are compressed below the linear bound: the
//! greedy monomial CNF scheme, exact output-share distributions, per-subset
//! entropy requirements with a tiny-block hash codec, the sparse-vector code
//! for Shamir product shares, and the symmetric-privacy audit.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::combi::subsets;
use crate::error::{invalid, Error, Result};
use crate::galois::{Fe, Field};
use crate::lmsss::{cnf_pieces, cnf_sets, lagrange_at};

/// Enumeration cap on randomness states per secret.
pub const STATE_BUDGET: u64 = 1 << 24;
/// Cap on |Z|^ℓ for the exhaustive decoder.
pub const DECODE_BUDGET: u64 = 1 << 26;

/// A k-server scheme for the product of m inputs where every server outputs
/// one field symbol.
pub trait OutputShareHss {
    fn k(&self) -> usize;
    fn m(&self) -> usize;
    fn field(&self) -> &Field;
    /// Uniform field symbols consumed by one sharing of all m inputs.
    fn rand_len(&self) -> usize;
    fn outputs(&self, x: &[Fe], r: &[Fe]) -> Vec<Fe>;
    fn rec(&self, z: &[Fe]) -> Fe;

    fn f(&self, x: &[Fe]) -> Fe {
        let f = self.field();
        x.iter().fold(1, |acc, &v| f.mul(acc, v))
    }
}

/// One monomial Π X_{i,p} placed at a server; factors are (input, CNF piece).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub server: usize,
    pub factors: Vec<(usize, usize)>,
}

/// CNF-shared inputs, each server outputs a sum of monomials in the pieces
/// it holds.
#[derive(Clone, Debug)]
pub struct MonomialHss {
    pub t: usize,
    pub k: usize,
    pub d: usize,
    pub field: Field,
    /// Piece p of every input is indexed by the t-set `sets[p]`.
    pub sets: Vec<Vec<usize>>,
    pub terms: Vec<Term>,
}

pub type GreedyCnfHss = MonomialHss;

impl MonomialHss {
    pub fn new(t: usize, k: usize, d: usize, field: Field, terms: Vec<Term>) -> Result<MonomialHss> {
        if t == 0 || t >= k || d == 0 {
            return Err(invalid!("monomial scheme needs 0 < t < k and d ≥ 1"));
        }
        let sets = cnf_sets(k, t);
        for term in &terms {
            if term.server >= k {
                return Err(invalid!("term placed at server {} of {k}", term.server));
            }
            for &(i, p) in &term.factors {
                if i >= d || p >= sets.len() {
                    return Err(invalid!("factor ({i},{p}) out of range"));
                }
                if sets[p].contains(&term.server) {
                    return Err(invalid!("server {} does not hold piece {:?}", term.server, sets[p]));
                }
            }
        }
        Ok(MonomialHss { t, k, d, field, sets, terms })
    }

    pub fn terms_of(&self, j: usize) -> Vec<&Term> {
        self.terms.iter().filter(|t| t.server == j).collect()
    }

    /// Checks Σ_j Eval_j = Π_i Σ_p X_{i,p} as polynomials over the prime field.
    pub fn verify_symbolic(&self) -> bool {
        let p = self.field.p() as u64;
        let mut coeff: BTreeMap<Vec<(usize, usize)>, u64> = BTreeMap::new();
        for term in &self.terms {
            let mut key = term.factors.clone();
            key.sort_unstable();
            *coeff.entry(key).or_insert(0) += 1;
        }
        let n = self.sets.len();
        let mut want: BTreeMap<Vec<(usize, usize)>, u64> = BTreeMap::new();
        for idx in 0..n.pow(self.d as u32) {
            let key = tuple_of(idx, n, self.d).into_iter().enumerate().collect();
            want.insert(key, 1);
        }
        let reduce = |m: BTreeMap<Vec<(usize, usize)>, u64>| -> BTreeMap<_, _> {
            m.into_iter().map(|(k, c)| (k, c % p)).filter(|(_, c)| *c != 0).collect()
        };
        reduce(coeff) == reduce(want)
    }
}

fn tuple_of(mut idx: usize, n: usize, d: usize) -> Vec<usize> {
    let mut v = vec![0; d];
    for slot in v.iter_mut().rev() {
        *slot = idx % n;
        idx /= n;
    }
    v
}

impl OutputShareHss for MonomialHss {
    fn k(&self) -> usize {
        self.k
    }
    fn m(&self) -> usize {
        self.d
    }
    fn field(&self) -> &Field {
        &self.field
    }
    fn rand_len(&self) -> usize {
        self.d * (self.sets.len() - 1)
    }
    fn outputs(&self, x: &[Fe], r: &[Fe]) -> Vec<Fe> {
        let f = &self.field;
        let w = self.sets.len() - 1;
        let pieces: Vec<Vec<Fe>> = (0..self.d)
            .map(|i| cnf_pieces(f, x[i], self.k, self.t, &r[i * w..(i + 1) * w]).expect("validated sizes"))
            .collect();
        let mut y = vec![0; self.k];
        for term in &self.terms {
            let v = term.factors.iter().fold(1, |acc, &(i, p)| f.mul(acc, pieces[i][p]));
            y[term.server] = f.add(y[term.server], v);
        }
        y
    }
    fn rec(&self, z: &[Fe]) -> Fe {
        self.field.sum(z.iter().copied())
    }
}

/// Each monomial of Π_i Σ_S X_{i,S} goes to the first server holding all of
/// its pieces.
pub fn greedy_hss(t: usize, k: usize, d: usize, field: Field) -> Result<GreedyCnfHss> {
    if d == 0 || t == 0 || k <= d * t {
        return Err(invalid!("greedy scheme needs k > dt, got t={t}, k={k}, d={d}"));
    }
    let sets = cnf_sets(k, t);
    let n = sets.len();
    let mut terms = Vec::new();
    for idx in 0..n.pow(d as u32) {
        let tuple = tuple_of(idx, n, d);
        let server = (0..k).find(|j| tuple.iter().all(|&p| !sets[p].contains(j))).expect("k > dt");
        terms.push(Term { server, factors: tuple.into_iter().enumerate().collect() });
    }
    let h = MonomialHss::new(t, k, d, field, terms)?;
    if !h.verify_symbolic() {
        return Err(Error::Invariant("greedy assignment does not sum to the product".into()));
    }
    Ok(h)
}

/// 1-private Shamir sharing of d inputs with product of the share polynomials
/// as output. The secret sits at 0 when |F| > k; when |F| = k = d+1 it is the
/// leading coefficient and the servers use every field element.
#[derive(Clone, Debug)]
pub struct ShamirProductHss {
    pub k: usize,
    pub d: usize,
    pub field: Field,
    pub alphas: Vec<Fe>,
    pub secret_at_zero: bool,
}

impl ShamirProductHss {
    pub fn new(k: usize, d: usize, field: Field) -> Result<ShamirProductHss> {
        if d == 0 || k <= d {
            return Err(invalid!("Shamir product needs k > d, got k={k}, d={d}"));
        }
        let q = field.order() as usize;
        if q > k {
            Ok(ShamirProductHss { k, d, field, alphas: (1..=k as u32).collect(), secret_at_zero: true })
        } else if q == k && k == d + 1 {
            Ok(ShamirProductHss { k, d, field, alphas: (0..k as u32).collect(), secret_at_zero: false })
        } else {
            Err(invalid!("Shamir product over F_{q} cannot serve {k} servers for degree {d}"))
        }
    }
}

impl OutputShareHss for ShamirProductHss {
    fn k(&self) -> usize {
        self.k
    }
    fn m(&self) -> usize {
        self.d
    }
    fn field(&self) -> &Field {
        &self.field
    }
    fn rand_len(&self) -> usize {
        self.d
    }
    fn outputs(&self, x: &[Fe], r: &[Fe]) -> Vec<Fe> {
        let f = &self.field;
        self.alphas
            .iter()
            .map(|&a| {
                (0..self.d).fold(1, |acc, i| {
                    let v = if self.secret_at_zero {
                        f.add(x[i], f.mul(r[i], a))
                    } else {
                        f.add(r[i], f.mul(x[i], a))
                    };
                    f.mul(acc, v)
                })
            })
            .collect()
    }
    fn rec(&self, z: &[Fe]) -> Fe {
        let f = &self.field;
        if self.secret_at_zero {
            f.dot(&lagrange_at(f, &self.alphas, 0), z)
        } else {
            // leading coefficient of the degree-(k-1) interpolant
            let mut acc = 0;
            for (j, &aj) in self.alphas.iter().enumerate() {
                let den = self
                    .alphas
                    .iter()
                    .enumerate()
                    .filter(|&(l, _)| l != j)
                    .fold(1, |acc, (_, &al)| f.mul(acc, f.sub(aj, al)));
                acc = f.add(acc, f.div(z[j], den).expect("distinct points"));
            }
            acc
        }
    }
}

/// Joint output distribution for one secret, as counts over `total` states.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistClass {
    pub secret: Vec<Fe>,
    pub value: Fe,
    pub counts: BTreeMap<Vec<Fe>, u64>,
}

#[derive(Clone, Debug)]
pub struct DistTable {
    pub k: usize,
    /// |Z_j| per server.
    pub alphabet: Vec<u32>,
    /// Randomness states enumerated per secret; every class sums to this.
    pub total: u64,
    pub classes: Vec<DistClass>,
}

impl DistTable {
    pub fn z_size(&self) -> usize {
        self.alphabet.iter().map(|&a| a as usize).product()
    }

    pub fn z_index(&self, z: &[Fe]) -> usize {
        z.iter().zip(&self.alphabet).fold(0, |acc, (&v, &a)| acc * a as usize + v as usize)
    }

    pub fn z_of(&self, mut idx: usize) -> Vec<Fe> {
        let mut z = vec![0; self.k];
        for j in (0..self.k).rev() {
            let a = self.alphabet[j] as usize;
            z[j] = (idx % a) as Fe;
            idx /= a;
        }
        z
    }

    pub fn prob(&self, class: usize, z: &[Fe]) -> Ratio<u64> {
        let c = self.classes[class].counts.get(z).copied().unwrap_or(0);
        Ratio::new(c, self.total)
    }

    pub fn class_of(&self, secret: &[Fe]) -> Option<usize> {
        self.classes.iter().position(|c| c.secret == secret)
    }

    /// Σ_z Pr[z] = 1, checked in exact arithmetic.
    pub fn sums_to_one(&self, class: usize) -> bool {
        let s = self.classes[class].counts.values().fold(Ratio::zero(), |acc: Ratio<u64>, &c| acc + Ratio::new(c, self.total));
        s.is_one()
    }

    /// The distinct distributions, in order of first appearance.
    pub fn distinct(&self) -> Vec<&BTreeMap<Vec<Fe>, u64>> {
        let mut out: Vec<&BTreeMap<Vec<Fe>, u64>> = Vec::new();
        for c in &self.classes {
            if !out.iter().any(|d| **d == c.counts) {
                out.push(&c.counts);
            }
        }
        out
    }

    pub fn dense(&self, counts: &BTreeMap<Vec<Fe>, u64>) -> Vec<f64> {
        let mut v = vec![0.0; self.z_size()];
        for (z, &c) in counts {
            v[self.z_index(z)] = c as f64 / self.total as f64;
        }
        v
    }

    pub fn marginal(&self, class: usize, j: usize) -> Vec<u64> {
        let mut m = vec![0; self.alphabet[j] as usize];
        for (z, &c) in &self.classes[class].counts {
            m[z[j] as usize] += c;
        }
        m
    }
}

/// All of F^m in lexicographic order, first coordinate most significant.
pub fn all_secrets(field: &Field, m: usize) -> Vec<Vec<Fe>> {
    let q = field.order() as usize;
    (0..q.pow(m as u32)).map(|i| tuple_of(i, q, m).into_iter().map(|v| v as Fe).collect()).collect()
}

/// Exact output distributions of `hss` for each listed secret.
pub fn exact_distributions<H: OutputShareHss + ?Sized>(hss: &H, secrets: &[Vec<Fe>]) -> Result<DistTable> {
    let f = hss.field();
    let q = f.order() as u64;
    let n = hss.rand_len();
    let total = q
        .checked_pow(n as u32)
        .filter(|&s| s <= STATE_BUDGET)
        .ok_or_else(|| Error::Budget(alloc::format!("|F|^{n} randomness states with |F|={q}")))?;
    let mut classes = Vec::with_capacity(secrets.len());
    let mut r = vec![0 as Fe; n];
    for x in secrets {
        if x.len() != hss.m() || x.iter().any(|&v| v as u64 >= q) {
            return Err(invalid!("secret {x:?} is not in F^{}", hss.m()));
        }
        let mut counts = BTreeMap::new();
        r.iter_mut().for_each(|v| *v = 0);
        for _ in 0..total {
            *counts.entry(hss.outputs(x, &r)).or_insert(0u64) += 1;
            for v in r.iter_mut() {
                *v += 1;
                if (*v as u64) < q {
                    break;
                }
                *v = 0;
            }
        }
        classes.push(DistClass { secret: x.clone(), value: hss.f(x), counts });
    }
    Ok(DistTable { k: hss.k(), alphabet: vec![f.order(); hss.k()], total, classes })
}

pub fn entropy(p: &[f64]) -> f64 {
    p.iter().filter(|&&v| v > 0.0).map(|&v| -v * libm::log2(v)).sum()
}

fn project(table: &DistTable, sigma: &[f64], keep: &[usize]) -> Vec<f64> {
    let size: usize = keep.iter().map(|&j| table.alphabet[j] as usize).product();
    let mut out = vec![0.0; size];
    for (idx, &p) in sigma.iter().enumerate() {
        if p == 0.0 {
            continue;
        }
        let z = table.z_of(idx);
        let i = keep.iter().fold(0, |acc, &j| acc * table.alphabet[j] as usize + z[j] as usize);
        out[i] += p;
    }
    out
}

/// H(z_S | z_{S^c}) under the mixture Σ π_D D.
pub fn mixture_cond_entropy(table: &DistTable, dists: &[Vec<f64>], set: &[usize], pi: &[f64]) -> f64 {
    let mut sigma = vec![0.0; table.z_size()];
    for (d, &w) in dists.iter().zip(pi) {
        for (s, &v) in sigma.iter_mut().zip(d) {
            *s += w * v;
        }
    }
    let rest: Vec<usize> = (0..table.k).filter(|j| !set.contains(j)).collect();
    entropy(&sigma) - entropy(&project(table, &sigma, &rest))
}

fn golden_max(lo: f64, hi: f64, mut g: impl FnMut(f64) -> f64) -> (f64, f64) {
    let r = (libm::sqrt(5.0) - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut gc, mut gd) = (g(c), g(d));
    for _ in 0..90 {
        if gc >= gd {
            b = d;
            d = c;
            gd = gc;
            c = b - r * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + r * (b - a);
            gd = g(d);
        }
    }
    let mut best = if gc >= gd { (c, gc) } else { (d, gd) };
    for x in [lo, hi] {
        let v = g(x);
        if v > best.1 {
            best = (x, v);
        }
    }
    best
}

fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// max over the simplex of a concave g; grid start then pairwise line search.
fn simplex_max(n: usize, g: impl Fn(&[f64]) -> f64) -> (f64, Vec<f64>) {
    if n == 1 {
        return (g(&[1.0]), vec![1.0]);
    }
    if n == 2 {
        let (lam, v) = golden_max(0.0, 1.0, |l| g(&[1.0 - l, l]));
        return (v, vec![1.0 - lam, lam]);
    }
    let grid = if n <= 3 { 20 } else { 8 };
    let mut best = (f64::NEG_INFINITY, vec![]);
    for c in compositions(grid, n) {
        let pi: Vec<f64> = c.iter().map(|&v| v as f64 / grid as f64).collect();
        let v = g(&pi);
        if v > best.0 {
            best = (v, pi);
        }
    }
    let (mut val, mut pi) = best;
    for _ in 0..200 {
        let before = val;
        for a in 0..n {
            for b in a + 1..n {
                let s = pi[a] + pi[b];
                if s <= 0.0 {
                    continue;
                }
                let mut trial = pi.clone();
                let (th, v) = golden_max(0.0, s, |th| {
                    trial[a] = th;
                    trial[b] = s - th;
                    g(&trial)
                });
                if v > val {
                    val = v;
                    pi[a] = th;
                    pi[b] = s - th;
                }
            }
        }
        if val - before < 1e-13 {
            break;
        }
    }
    (val, pi)
}

#[derive(Clone, Debug)]
pub struct SubsetBound {
    pub set: Vec<usize>,
    /// max_π H(z_S | z_{S^c}) in bits per instance.
    pub bits: f64,
    pub pi: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct SwRequirements {
    pub k: usize,
    pub dists: Vec<Vec<f64>>,
    /// Nonempty subsets by size, then lexicographically.
    pub bounds: Vec<SubsetBound>,
    pub allocation: Vec<f64>,
    pub total: f64,
}

impl SwRequirements {
    pub fn bound_for(&self, set: &[usize]) -> Option<f64> {
        self.bounds.iter().find(|b| b.set == set).map(|b| b.bits)
    }

    /// log2|Y| over the minimal download per instance.
    pub fn rate(&self, log2_y: f64) -> f64 {
        log2_y / self.total
    }
}

pub const MAX_DISTS: usize = 8;

pub fn sw_requirements(table: &DistTable) -> Result<SwRequirements> {
    let distinct = table.distinct();
    if distinct.len() > MAX_DISTS {
        return Err(Error::Budget(alloc::format!("{} distinct distributions, at most {MAX_DISTS}", distinct.len())));
    }
    if table.k > 5 {
        return Err(invalid!("allocation search supports at most 5 servers"));
    }
    let dists: Vec<Vec<f64>> = distinct.iter().map(|c| table.dense(c)).collect();
    let mut bounds = Vec::new();
    for size in 1..=table.k {
        for set in subsets(table.k, size) {
            let (bits, pi) = simplex_max(dists.len(), |pi| mixture_cond_entropy(table, &dists, &set, pi));
            bounds.push(SubsetBound { set, bits, pi });
        }
    }
    let (allocation, total) = min_sum_allocation(table.k, &bounds)?;
    Ok(SwRequirements { k: table.k, dists, bounds, allocation, total })
}

fn solve_square(a: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let n = b.len();
    let mut m: Vec<Vec<f64>> = a.iter().zip(b).map(|(r, &v)| {
        let mut r = r.clone();
        r.push(v);
        r
    }).collect();
    for c in 0..n {
        let piv = (c..n).max_by(|&i, &j| libm::fabs(m[i][c]).partial_cmp(&libm::fabs(m[j][c])).unwrap())?;
        if libm::fabs(m[piv][c]) < 1e-10 {
            return None;
        }
        m.swap(c, piv);
        for i in 0..n {
            if i != c {
                let fct = m[i][c] / m[c][c];
                for j in c..=n {
                    m[i][j] -= fct * m[c][j];
                }
            }
        }
    }
    Some((0..n).map(|i| m[i][n] / m[i][i]).collect())
}

/// min c·x subject to rows·x ≥ rhs, by vertex enumeration; returns the optimum
/// and every optimal vertex.
fn lp_min(c: &[f64], rows: &[(Vec<f64>, f64)]) -> Option<(f64, Vec<Vec<f64>>)> {
    let n = c.len();
    let mut best: Option<(f64, Vec<Vec<f64>>)> = None;
    for pick in subsets(rows.len(), n) {
        let a: Vec<Vec<f64>> = pick.iter().map(|&i| rows[i].0.clone()).collect();
        let b: Vec<f64> = pick.iter().map(|&i| rows[i].1).collect();
        let Some(x) = solve_square(&a, &b) else { continue };
        let feasible = rows.iter().all(|(r, v)| r.iter().zip(&x).map(|(a, b)| a * b).sum::<f64>() >= v - 1e-9);
        if !feasible {
            continue;
        }
        let val: f64 = c.iter().zip(&x).map(|(a, b)| a * b).sum();
        match &mut best {
            Some((bv, verts)) if libm::fabs(val - *bv) <= 1e-9 => {
                if !verts.iter().any(|v| v.iter().zip(&x).all(|(a, b)| libm::fabs(a - b) < 1e-9)) {
                    verts.push(x);
                }
            }
            Some((bv, _)) if val > *bv => {}
            _ => best = Some((val, vec![x])),
        }
    }
    best
}

/// Minimises Σ b_i under Σ_{i∈S} b_i ≥ bound(S); ties go to the smallest
/// maximum b_i, then to the centroid of the remaining optimal vertices.
pub fn min_sum_allocation(k: usize, bounds: &[SubsetBound]) -> Result<(Vec<f64>, f64)> {
    let mut rows: Vec<(Vec<f64>, f64)> = bounds
        .iter()
        .map(|b| ((0..k).map(|i| if b.set.contains(&i) { 1.0 } else { 0.0 }).collect(), b.bits))
        .collect();
    for i in 0..k {
        rows.push(((0..k).map(|j| if j == i { 1.0 } else { 0.0 }).collect(), 0.0));
    }
    let (total, _) = lp_min(&vec![1.0; k], &rows).ok_or_else(|| Error::Invariant("allocation LP infeasible".into()))?;
    let mut rows2: Vec<(Vec<f64>, f64)> = rows
        .into_iter()
        .map(|(mut r, v)| {
            r.push(0.0);
            (r, v)
        })
        .collect();
    let mut cap = vec![-1.0; k];
    cap.push(0.0);
    rows2.push((cap, -total - 1e-9));
    for i in 0..k {
        let mut r = vec![0.0; k + 1];
        r[i] = -1.0;
        r[k] = 1.0;
        rows2.push((r, 0.0));
    }
    let mut c = vec![0.0; k];
    c.push(1.0);
    let (_, verts) = lp_min(&c, &rows2).ok_or_else(|| Error::Invariant("allocation LP infeasible".into()))?;
    let mut alloc = vec![0.0; k];
    for v in &verts {
        for i in 0..k {
            alloc[i] += v[i] / verts.len() as f64;
        }
    }
    Ok((alloc, total))
}

/// log2|Y| / Σ_j H(y^j), compressing each server's output on its own.
pub fn naive_rate(table: &DistTable) -> Result<f64> {
    if table.classes.is_empty() {
        return Err(invalid!("empty table"));
    }
    let mut sum = 0.0;
    for j in 0..table.k {
        let m0 = table.marginal(0, j);
        if (1..table.classes.len()).any(|c| table.marginal(c, j) != m0) {
            return Err(invalid!("server {j} marginal depends on the secret"));
        }
        let p: Vec<f64> = m0.iter().map(|&c| c as f64 / table.total as f64).collect();
        sum += entropy(&p);
    }
    Ok(libm::log2(table.alphabet[0] as f64) / sum)
}

/// One placement of the degree-2 and linear monomials for t=1, k=3, d=2 over F_2.
#[derive(Clone, Debug)]
pub struct AssignmentResult {
    /// Server holding the monomial X_{0,p}X_{1,p}, for p = 0,1,2.
    pub diag_owner: [usize; 3],
    /// Bit 3i+p set: X_{i,p} is added at both of its holders.
    pub linear_mask: u8,
    /// max_π H(z) in bits per instance.
    pub total: f64,
}

#[derive(Clone, Debug)]
pub struct AssignmentReport {
    pub results: Vec<AssignmentResult>,
    /// Distinct totals (to 1e-4) with how many assignments reach each.
    pub classes: Vec<(f64, usize)>,
    pub greedy_total: f64,
    pub symmetric_total: f64,
    pub min_total: f64,
}

pub const GREEDY_DIAG: [usize; 3] = [1, 0, 0];
pub const SYMMETRIC_DIAG: [usize; 3] = [1, 2, 0];

pub fn assignment_hss(field: &Field, diag_owner: [usize; 3], linear_mask: u8) -> Result<MonomialHss> {
    let mut terms = Vec::new();
    for a in 0..3 {
        for b in 0..3 {
            let server = if a == b { diag_owner[a] } else { 3 - a - b };
            terms.push(Term { server, factors: vec![(0, a), (1, b)] });
        }
    }
    for i in 0..2 {
        for p in 0..3 {
            if linear_mask >> (3 * i + p) & 1 == 1 {
                for s in (0..3).filter(|&s| s != p) {
                    terms.push(Term { server: s, factors: vec![(i, p)] });
                }
            }
        }
    }
    MonomialHss::new(1, 3, 2, field.clone(), terms)
}

/// Every valid F_2 assignment for the 3-server AND: 8 placements of the
/// diagonal monomials times 64 even linear-term placements.
pub fn enumerate_assignments(field: &Field) -> Result<AssignmentReport> {
    if field.order() != 2 {
        return Err(invalid!("assignment enumeration is defined over F_2"));
    }
    let secrets = all_secrets(field, 2);
    let mut results = Vec::new();
    for placement in 0..8u32 {
        let diag_owner: [usize; 3] = core::array::from_fn(|p| {
            let holders: Vec<usize> = (0..3).filter(|&s| s != p).collect();
            holders[(placement >> p & 1) as usize]
        });
        for mask in 0..64u8 {
            let h = assignment_hss(field, diag_owner, mask)?;
            if !h.verify_symbolic() {
                return Err(Error::Invariant("assignment does not sum to the product".into()));
            }
            let table = exact_distributions(&h, &secrets)?;
            let dists: Vec<Vec<f64>> = table.distinct().iter().map(|c| table.dense(c)).collect();
            let (total, _) = simplex_max(dists.len(), |pi| mixture_cond_entropy(&table, &dists, &[0, 1, 2], pi));
            results.push(AssignmentResult { diag_owner, linear_mask: mask, total });
        }
    }
    let mut classes: Vec<(f64, usize)> = Vec::new();
    for r in &results {
        match classes.iter_mut().find(|(v, _)| libm::fabs(v - r.total) < 1e-4) {
            Some(c) => c.1 += 1,
            None => classes.push((r.total, 1)),
        }
    }
    classes.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let pick = |diag: [usize; 3]| results.iter().find(|r| r.diag_owner == diag && r.linear_mask == 0).map(|r| r.total).unwrap();
    let greedy_total = pick(GREEDY_DIAG);
    let symmetric_total = pick(SYMMETRIC_DIAG);
    let min_total = results.iter().map(|r| r.total).fold(f64::INFINITY, f64::min);
    Ok(AssignmentReport { results, classes, greedy_total, symmetric_total, min_total })
}

/// Per-server output lengths and hash seeds for blocks of ℓ instances.
#[derive(Clone, Debug, PartialEq)]
pub struct SwCode {
    pub ell: usize,
    pub b: Vec<usize>,
    pub seeds: Vec<u64>,
    pub eps: f64,
    /// Bits per output symbol in the packed row.
    pub sym_bits: usize,
}

impl SwCode {
    pub fn new(ell: usize, b: Vec<usize>, seed: u64, eps: f64, q: u32) -> Result<SwCode> {
        let sym_bits = (32 - (q - 1).leading_zeros()) as usize;
        if ell == 0 || ell * sym_bits > 64 {
            return Err(invalid!("rows of {ell} symbols do not fit a 64-bit word"));
        }
        if b.iter().any(|&v| v == 0 || v > 64) {
            return Err(invalid!("digest lengths must lie in 1..=64"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let seeds = b.iter().map(|_| rng.next_u64()).collect();
        Ok(SwCode { ell, b, seeds, eps, sym_bits })
    }

    /// b_j = ⌈(1+slack)·ℓ·allocation_j⌉.
    pub fn from_requirements(req: &SwRequirements, ell: usize, slack: f64, seed: u64, eps: f64, q: u32) -> Result<SwCode> {
        let b = req.allocation.iter().map(|&a| libm::ceil((1.0 + slack) * ell as f64 * a - 1e-9).max(1.0) as usize).collect();
        SwCode::new(ell, b, seed, eps, q)
    }

    /// Rows of a uniformly random full-rank GF(2) matrix hashing server j's
    /// packed row. For x ≠ y the collision probability is at most 2^-b_j.
    fn matrix(&self, j: usize) -> Vec<u64> {
        let width = self.ell * self.sym_bits;
        let mask = if width == 64 { u64::MAX } else { (1u64 << width) - 1 };
        let mut rng = ChaCha8Rng::seed_from_u64(self.seeds[j]);
        loop {
            let m: Vec<u64> = (0..self.b[j]).map(|_| rng.next_u64() & mask).collect();
            if gf2_rank(&m) == self.b[j].min(width) {
                return m;
            }
        }
    }

    pub fn download_bits(&self) -> usize {
        self.b.iter().sum()
    }
}

fn gf2_rank(rows: &[u64]) -> usize {
    let mut basis: Vec<u64> = Vec::new();
    for &r in rows {
        let v = basis.iter().fold(r, |v, &b| v.min(v ^ b));
        if v != 0 {
            basis.push(v);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis.len()
}

fn pack_row(row: &[Fe], sym_bits: usize) -> u64 {
    row.iter().enumerate().fold(0, |acc, (i, &v)| acc | (v as u64) << (i * sym_bits))
}

fn hash_packed(m: &[u64], v: u64) -> u64 {
    m.iter().enumerate().fold(0, |acc, (i, &r)| acc | (((r & v).count_ones() & 1) as u64) << i)
}

/// h_j(row): a b_j-bit GF(2)-linear digest of server j's ℓ output symbols.
pub fn sw_encode(row: &[Fe], code: &SwCode, j: usize) -> u64 {
    hash_packed(&code.matrix(j), pack_row(row, code.sym_bits))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecodeOutcome {
    Decoded(Vec<Fe>),
    /// No unique typical preimage; carries the number of typical candidates.
    Ambiguous(usize),
}

/// |f_Z(z)/ℓ − σ(z)| ≤ ε/|Z| everywhere, and no z outside the support of σ.
pub fn is_typical(counts: &[usize], ell: usize, sigma: &[f64], eps: f64) -> bool {
    let tol = eps / sigma.len() as f64;
    counts.iter().zip(sigma).all(|(&c, &s)| {
        if s == 0.0 {
            c == 0
        } else {
            libm::fabs(c as f64 / ell as f64 - s) <= tol + 1e-12
        }
    })
}

/// Mixtures Σ π_D D with π of denominator ℓ.
pub fn type_mixtures(dists: &[Vec<f64>], ell: usize) -> Vec<Vec<f64>> {
    compositions(ell, dists.len())
        .into_iter()
        .map(|c| {
            let mut s = vec![0.0; dists[0].len()];
            for (d, &w) in dists.iter().zip(&c) {
                for (a, &v) in s.iter_mut().zip(d) {
                    *a += w as f64 / ell as f64 * v;
                }
            }
            s
        })
        .collect()
}

/// Searches the digests' preimages for a unique sequence in the union of
/// typical sets and applies `rec` column by column.
pub fn sw_decode(digests: &[u64], code: &SwCode, table: &DistTable, rec: impl Fn(&[Fe]) -> Fe) -> Result<DecodeOutcome> {
    let k = table.k;
    let ell = code.ell;
    let zs = table.z_size() as u64;
    if digests.len() != k || code.b.len() != k {
        return Err(invalid!("expected {k} digests"));
    }
    zs.checked_pow(ell as u32)
        .filter(|&v| v <= DECODE_BUDGET)
        .ok_or_else(|| Error::Budget(alloc::format!("|Z|^ℓ = {zs}^{ell}")))?;
    let mut cands: Vec<Vec<Vec<Fe>>> = Vec::with_capacity(k);
    for j in 0..k {
        let m = code.matrix(j);
        let a = table.alphabet[j] as usize;
        let rows: Vec<Vec<Fe>> = (0..a.pow(ell as u32))
            .map(|i| tuple_of(i, a, ell).into_iter().map(|v| v as Fe).collect::<Vec<Fe>>())
            .filter(|row| hash_packed(&m, pack_row(row, code.sym_bits)) == digests[j])
            .collect();
        cands.push(rows);
    }
    let dists: Vec<Vec<f64>> = table.distinct().iter().map(|c| table.dense(c)).collect();
    let mixtures = type_mixtures(&dists, ell);
    let mut found: Option<Vec<Vec<Fe>>> = None;
    let mut hits = 0usize;
    let mut pick = vec![0usize; k];
    if cands.iter().any(|c| c.is_empty()) {
        return Ok(DecodeOutcome::Ambiguous(0));
    }
    loop {
        let cols: Vec<Vec<Fe>> = (0..ell).map(|c| (0..k).map(|j| cands[j][pick[j]][c]).collect()).collect();
        let mut counts = vec![0usize; table.z_size()];
        for col in &cols {
            counts[table.z_index(col)] += 1;
        }
        if mixtures.iter().any(|s| is_typical(&counts, ell, s, code.eps)) {
            hits += 1;
            found = Some(cols);
        }
        let mut j = 0;
        loop {
            if j == k {
                return Ok(match (hits, found) {
                    (1, Some(cols)) => DecodeOutcome::Decoded(cols.iter().map(|c| rec(c)).collect()),
                    _ => DecodeOutcome::Ambiguous(hits),
                });
            }
            pick[j] += 1;
            if pick[j] < cands[j].len() {
                break;
            }
            pick[j] = 0;
            j += 1;
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SwStats {
    pub trials: usize,
    pub decoded: usize,
    pub correct: usize,
    pub ambiguous: usize,
}

impl SwStats {
    pub fn success_rate(&self) -> f64 {
        self.correct as f64 / self.trials as f64
    }
}

/// Runs `trials` blocks of ℓ uniformly random instances through encode/decode.
pub fn sw_experiment<H: OutputShareHss + ?Sized>(
    hss: &H,
    table: &DistTable,
    code: &SwCode,
    trials: usize,
    rng: &mut impl Rng,
) -> Result<SwStats> {
    let q = hss.field().order();
    let mut stats = SwStats { trials, ..SwStats::default() };
    for _ in 0..trials {
        let mut cols = Vec::with_capacity(code.ell);
        let mut want = Vec::with_capacity(code.ell);
        for _ in 0..code.ell {
            let x: Vec<Fe> = (0..hss.m()).map(|_| rng.gen_range(0..q)).collect();
            let r: Vec<Fe> = (0..hss.rand_len()).map(|_| rng.gen_range(0..q)).collect();
            want.push(hss.f(&x));
            cols.push(hss.outputs(&x, &r));
        }
        let digests: Vec<u64> = (0..hss.k())
            .map(|j| {
                let row: Vec<Fe> = cols.iter().map(|c| c[j]).collect();
                sw_encode(&row, code, j)
            })
            .collect();
        match sw_decode(&digests, code, table, |z| hss.rec(z))? {
            DecodeOutcome::Decoded(out) => {
                stats.decoded += 1;
                if out == want {
                    stats.correct += 1;
                }
            }
            DecodeOutcome::Ambiguous(_) => stats.ambiguous += 1,
        }
    }
    Ok(stats)
}

fn binom_big(n: usize, r: usize) -> BigUint {
    if r > n {
        return BigUint::zero();
    }
    let r = r.min(n - r);
    let mut acc = BigUint::one();
    for i in 0..r {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

fn bit_len(v: &BigUint) -> usize {
    v.bits() as usize
}

fn push_bits(out: &mut Vec<bool>, v: &BigUint, width: usize) {
    for i in (0..width).rev() {
        out.push(v.bit(i as u64));
    }
}

fn read_bits(bits: &[bool], pos: &mut usize, width: usize) -> Result<BigUint> {
    if *pos + width > bits.len() {
        return Err(invalid!("encoding truncated"));
    }
    let mut v = BigUint::zero();
    for &b in &bits[*pos..*pos + width] {
        v <<= 1u32;
        if b {
            v += 1u32;
        }
    }
    *pos += width;
    Ok(v)
}

/// Sparse-vector code: the count of nonzeros, the colex rank of their
/// positions, then their values as one base-q numeral.
pub fn warmup_compress(y: &[Fe], q: u32) -> Vec<bool> {
    let ell = y.len();
    let pos: Vec<usize> = (0..ell).filter(|&i| y[i] != 0).collect();
    let c = pos.len();
    let mut out = Vec::new();
    push_bits(&mut out, &BigUint::from(c), bit_len(&BigUint::from(ell)));
    let rank = pos.iter().enumerate().fold(BigUint::zero(), |acc, (i, &p)| acc + binom_big(p, i + 1));
    push_bits(&mut out, &rank, bit_len(&(binom_big(ell, c) - 1u32)));
    let qb = BigUint::from(q);
    let vals = pos.iter().fold(BigUint::zero(), |acc, &p| acc * &qb + BigUint::from(y[p]));
    push_bits(&mut out, &vals, bit_len(&(qb.pow(c as u32) - 1u32)));
    out
}

pub fn warmup_decompress(bits: &[bool], q: u32, ell: usize) -> Result<Vec<Fe>> {
    let mut at = 0;
    let c = read_bits(bits, &mut at, bit_len(&BigUint::from(ell)))?.to_usize().unwrap_or(usize::MAX);
    if c > ell {
        return Err(invalid!("nonzero count {c} exceeds length {ell}"));
    }
    let total = binom_big(ell, c);
    let mut rank = read_bits(bits, &mut at, bit_len(&(&total - 1u32)))?;
    if rank >= total {
        return Err(invalid!("position rank out of range"));
    }
    let mut pos = vec![0usize; c];
    if c > 0 {
        let (mut n, mut r) = (ell - 1, c);
        let mut bn = binom_big(n, r);
        loop {
            while bn > rank {
                // C(n-1, r) = C(n, r)(n-r)/n
                bn = bn * BigUint::from(n - r) / BigUint::from(n);
                n -= 1;
            }
            pos[r - 1] = n;
            rank -= &bn;
            if r == 1 {
                break;
            }
            // C(n-1, r-1) = C(n, r) r / n
            bn = if bn.is_zero() { binom_big(n - 1, r - 1) } else { bn * BigUint::from(r) / BigUint::from(n) };
            n -= 1;
            r -= 1;
        }
    }
    let qb = BigUint::from(q);
    let mut vals = read_bits(bits, &mut at, bit_len(&(qb.pow(c as u32) - 1u32)))?;
    if at != bits.len() {
        return Err(invalid!("trailing bits after encoding"));
    }
    let mut y = vec![0; ell];
    for &p in pos.iter().rev() {
        let v = (&vals % &qb).to_u32().unwrap();
        if v == 0 {
            return Err(invalid!("zero value at a nonzero position"));
        }
        y[p] = v;
        vals /= &qb;
    }
    if !vals.is_zero() {
        return Err(invalid!("value numeral out of range"));
    }
    Ok(y)
}

/// ℓ(H(p0) + (1-p0)log2 q) where 1-p0 = (1-1/q)^d is the chance that a
/// product of d uniform symbols is nonzero.
pub fn warmup_expected_bits(ell: usize, q: u32, d: usize) -> f64 {
    let p_nz = libm::pow(1.0 - 1.0 / q as f64, d as f64);
    ell as f64 * (entropy(&[p_nz, 1.0 - p_nz]) + p_nz * libm::log2(q as f64))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShssWitness {
    pub x: Vec<Fe>,
    pub x2: Vec<Fe>,
    pub value: Fe,
    pub z: Vec<Fe>,
    pub p: Ratio<u64>,
    pub p2: Ratio<u64>,
}

#[derive(Clone, Debug)]
pub struct ShssVerdict {
    pub pass: bool,
    pub secrets: usize,
    /// Randomness states per secret, the unreduced denominator.
    pub states: u64,
    pub witness: Option<ShssWitness>,
}

/// PASS iff the joint output distribution depends on x only through f(x).
pub fn shss_audit<H: OutputShareHss + ?Sized>(hss: &H) -> Result<(ShssVerdict, DistTable)> {
    let secrets = all_secrets(hss.field(), hss.m());
    let table = exact_distributions(hss, &secrets)?;
    let mut reference: BTreeMap<Fe, usize> = BTreeMap::new();
    let mut witness = None;
    for (ci, c) in table.classes.iter().enumerate() {
        let &mut r = reference.entry(c.value).or_insert(ci);
        if r == ci || table.classes[r].counts == c.counts {
            continue;
        }
        let keys: alloc::collections::BTreeSet<&Vec<Fe>> = table.classes[r].counts.keys().chain(c.counts.keys()).collect();
        let z = keys.into_iter().find(|z| table.classes[r].counts.get(*z) != c.counts.get(*z)).unwrap().clone();
        witness = Some(ShssWitness {
            x: table.classes[r].secret.clone(),
            x2: c.secret.clone(),
            value: c.value,
            p: table.prob(r, &z),
            p2: table.prob(ci, &z),
            z,
        });
        break;
    }
    let verdict = ShssVerdict { pass: witness.is_none(), secrets: secrets.len(), states: table.total, witness };
    Ok((verdict, table))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois::FieldCtx;

    fn fld(q: u64) -> Field {
        alloc::sync::Arc::new(FieldCtx::of_order(q).unwrap())
    }

    fn server_terms(h: &MonomialHss, j: usize) -> Vec<Vec<(usize, usize)>> {
        let mut v: Vec<_> = h.terms_of(j).iter().map(|t| t.factors.clone()).collect();
        v.sort();
        v
    }

    #[test]
    fn greedy_three_server_and_formulas() {
        let h = greedy_hss(1, 3, 2, fld(2)).unwrap();
        // pieces 0,1,2 are a1,a2,a3 (input 0) and b1,b2,b3 (input 1)
        assert_eq!(server_terms(&h, 0), vec![vec![(0, 1), (1, 1)], vec![(0, 1), (1, 2)], vec![(0, 2), (1, 1)], vec![(0, 2), (1, 2)]]);
        assert_eq!(server_terms(&h, 1), vec![vec![(0, 0), (1, 0)], vec![(0, 0), (1, 2)], vec![(0, 2), (1, 0)]]);
        assert_eq!(server_terms(&h, 2), vec![vec![(0, 0), (1, 1)], vec![(0, 1), (1, 0)]]);
    }

    #[test]
    fn greedy_reconstructs_exhaustively() {
        for q in [2u64, 3] {
            let h = greedy_hss(1, 3, 2, fld(q)).unwrap();
            let f = h.field.clone();
            for x in all_secrets(&f, 2) {
                for ri in 0..(q as usize).pow(4) {
                    let r: Vec<Fe> = tuple_of(ri, q as usize, 4).into_iter().map(|v| v as Fe).collect();
                    assert_eq!(h.rec(&h.outputs(&x, &r)), f.mul(x[0], x[1]));
                }
            }
        }
    }

    #[test]
    fn greedy_single_input_leaves_last_server_idle() {
        // server 0 lacks only its own piece, which server 1 picks up
        let h = greedy_hss(1, 3, 1, fld(2)).unwrap();
        assert_eq!(server_terms(&h, 0), vec![vec![(0, 1)], vec![(0, 2)]]);
        assert_eq!(server_terms(&h, 1), vec![vec![(0, 0)]]);
        assert!(h.terms_of(2).is_empty());
        assert!(greedy_hss(1, 2, 2, fld(2)).is_err());
    }

    #[test]
    fn shamir_product_reconstructs() {
        let h = ShamirProductHss::new(3, 2, fld(5)).unwrap();
        let w = ShamirProductHss::new(5, 4, fld(5)).unwrap();
        assert!(!w.secret_at_zero);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for hs in [&h as &dyn OutputShareHss, &w] {
            for _ in 0..200 {
                let x: Vec<Fe> = (0..hs.m()).map(|_| rng.gen_range(0..5)).collect();
                let r: Vec<Fe> = (0..hs.rand_len()).map(|_| rng.gen_range(0..5)).collect();
                assert_eq!(hs.rec(&hs.outputs(&x, &r)), hs.f(&x));
            }
        }
    }

    #[test]
    fn tables_sum_to_one() {
        let h = greedy_hss(1, 3, 2, fld(2)).unwrap();
        let t = exact_distributions(&h, &all_secrets(&h.field, 2)).unwrap();
        assert_eq!(t.total, 16);
        for c in 0..t.classes.len() {
            assert!(t.sums_to_one(c));
        }
        assert!(t.distinct().len() <= 4);
    }

    #[test]
    fn and_distributions() {
        let h = greedy_hss(1, 3, 2, fld(2)).unwrap();
        let t = exact_distributions(&h, &all_secrets(&h.field, 2)).unwrap();
        let r = |n, d| Ratio::new(n, d);
        let c0 = t.class_of(&[0, 0]).unwrap();
        let c1 = t.class_of(&[1, 1]).unwrap();
        assert_eq!(t.prob(c0, &[0, 0, 0]), r(1, 2));
        assert_eq!(t.prob(c0, &[0, 1, 1]), r(1, 4));
        assert_eq!(t.prob(c0, &[1, 1, 0]), r(1, 8));
        assert_eq!(t.prob(c0, &[1, 0, 1]), r(1, 8));
        assert_eq!(t.prob(c1, &[0, 0, 1]), r(3, 8));
        assert_eq!(t.prob(c1, &[0, 1, 0]), r(3, 8));
        assert_eq!(t.prob(c1, &[1, 0, 0]), r(1, 4));
    }

    #[test]
    fn and_requirements() {
        let h = greedy_hss(1, 3, 2, fld(2)).unwrap();
        let t = exact_distributions(&h, &all_secrets(&h.field, 2)).unwrap();
        let req = sw_requirements(&t).unwrap();
        let want = [0.75089, 0.90690, 0.90690, 1.70429, 1.70429, 1.84745, 2.65873];
        for (b, w) in req.bounds.iter().zip(want) {
            assert!((b.bits - w).abs() < 1e-4, "{:?}: {} vs {w}", b.set, b.bits);
        }
        assert!((req.total - 2.65873).abs() < 1e-4);
        assert!((req.rate(1.0) - 0.37612).abs() < 1e-4);
        let want_b = [0.81128, 0.92372, 0.92372];
        for (a, w) in req.allocation.iter().zip(want_b) {
            assert!((a - w).abs() < 1e-4, "{:?}", req.allocation);
        }
        assert!(req.rate(1.0) > 1.0 / 3.0);
    }

    #[test]
    fn maxima_are_local() {
        let h = greedy_hss(1, 3, 2, fld(2)).unwrap();
        let t = exact_distributions(&h, &all_secrets(&h.field, 2)).unwrap();
        let req = sw_requirements(&t).unwrap();
        for b in &req.bounds {
            for delta in [-1e-3, 1e-3] {
                let l = (b.pi[1] + delta).clamp(0.0, 1.0);
                let v = mixture_cond_entropy(&t, &req.dists, &b.set, &[1.0 - l, l]);
                assert!(v <= b.bits + 1e-6);
            }
        }
    }

    #[test]
    fn single_distribution_bound_is_entropy() {
        let h = greedy_hss(1, 3, 2, fld(2)).unwrap();
        let t = exact_distributions(&h, &[vec![0, 0]]).unwrap();
        let req = sw_requirements(&t).unwrap();
        let d = t.dense(&t.classes[0].counts);
        assert_eq!(req.bound_for(&[0, 1, 2]).unwrap(), entropy(&d));
    }

    #[test]
    fn naive_and_rate() {
        let h = greedy_hss(1, 3, 2, fld(2)).unwrap();
        let t = exact_distributions(&h, &all_secrets(&h.field, 2)).unwrap();
        let r = naive_rate(&t).unwrap();
        assert!((r - 0.367).abs() < 1e-3, "{r}");
        assert!(r <= sw_requirements(&t).unwrap().rate(1.0));
    }

    #[test]
    fn shss_verdicts() {
        for q in [2u64, 3] {
            let (v, _) = shss_audit(&greedy_hss(1, 3, 2, fld(q)).unwrap()).unwrap();
            assert!(v.pass);
        }
        let (v, _) = shss_audit(&ShamirProductHss::new(3, 2, fld(5)).unwrap()).unwrap();
        assert!(!v.pass);
        let w = v.witness.unwrap();
        assert_eq!((w.x, w.x2), (vec![0, 0], vec![0, 1]));
        assert_ne!(w.p, w.p2);
    }

    #[test]
    fn greedy_four_server_witness() {
        let (v, t) = shss_audit(&greedy_hss(1, 4, 3, fld(3)).unwrap()).unwrap();
        assert!(!v.pass);
        assert_eq!(v.states, 19683);
        let a = t.class_of(&[0, 0, 1]).unwrap();
        let b = t.class_of(&[0, 0, 0]).unwrap();
        assert_eq!(t.prob(a, &[0, 0, 0, 0]), Ratio::new(431, 2187));
        assert_eq!(t.prob(b, &[0, 0, 0, 0]), Ratio::new(17, 81));
    }

    #[test]
    fn hash_is_deterministic_and_sized() {
        let code = SwCode::new(8, vec![5, 9, 12], 3, 1.0, 2).unwrap();
        let row = [1, 0, 1, 1, 0, 0, 1, 0];
        for j in 0..3 {
            let h = sw_encode(&row, &code, j);
            assert_eq!(h, sw_encode(&row, &code, j));
            assert!(h < 1 << code.b[j]);
        }
    }

    #[test]
    fn hash_collisions_match_universality() {
        let a = [1, 0, 1, 1, 0, 0, 1, 0];
        let mut b = a;
        b[3] = 0;
        let trials = 10_000;
        let hits = (0..trials)
            .filter(|&s| {
                let code = SwCode::new(8, vec![4], s, 1.0, 2).unwrap();
                sw_encode(&a, &code, 0) == sw_encode(&b, &code, 0)
            })
            .count();
        // expected 625, sd ≈ 24
        assert!((hits as i64 - 625).abs() < 100, "{hits}");
    }

    #[test]
    fn degenerate_decode() {
        let h = greedy_hss(1, 3, 2, fld(2)).unwrap();
        let t = exact_distributions(&h, &all_secrets(&h.field, 2)).unwrap();
        let code = SwCode::new(1, vec![1, 1, 1], 5, 100.0, 2).unwrap();
        let z = h.outputs(&[1, 1], &[0, 1, 1, 0]);
        let digests: Vec<u64> = (0..3).map(|j| sw_encode(&[z[j]], &code, j)).collect();
        match sw_decode(&digests, &code, &t, |c| h.rec(c)).unwrap() {
            DecodeOutcome::Decoded(v) => assert_eq!(v, vec![1]),
            DecodeOutcome::Ambiguous(n) => assert!(n > 1),
        }
    }

    #[test]
    fn warmup_roundtrip_small() {
        assert_eq!(warmup_compress(&[0; 10], 2).len(), 4);
        for v in 0..1u32 << 12 {
            let y: Vec<Fe> = (0..12).map(|i| v >> i & 1).collect();
            assert_eq!(warmup_decompress(&warmup_compress(&y, 2), 2, 12).unwrap(), y);
        }
    }

    #[test]
    fn warmup_rejects_garbage() {
        let bits = warmup_compress(&[0, 3, 0, 1], 5);
        assert!(warmup_decompress(&bits[..bits.len() - 1], 5, 4).is_err());
    }
}
