//! Linear HSS for vectors of low-degree polynomials: the CNF-based scheme
//! (CNF product, then conversion into a code-based scheme) and the
//! Shamir-based scheme (Shamir product, then trace bundling), plus rate
//! bounds and exact correctness/privacy checkers.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use num_rational::Ratio;

use crate::combi::{binom, subsets};
use crate::convert::{CnfProduct, CnfToTarget, TraceConcat};
use crate::enumerate::{check_packable, for_each_combination, low_weight_points, pack, prime_basis, state_count, view_multiset};
use crate::error::{invalid, Error, Result};
use crate::galois::{Extension, Fe, Field, FieldCtx};
use crate::lmsss::{cnf_share, cnf_sets, code_to_lmsss, shamir_share_ext, LinearCode};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monomial {
    pub coeff: Fe,
    /// Variable indices with multiplicity, 0-based.
    pub vars: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Poly {
    pub terms: Vec<Monomial>,
}

impl Poly {
    pub fn degree(&self) -> usize {
        self.terms.iter().map(|t| t.vars.len()).max().unwrap_or(0)
    }

    pub fn eval(&self, f: &FieldCtx, x: &[Fe]) -> Fe {
        self.terms.iter().fold(0, |acc, t| {
            let v = t.vars.iter().fold(t.coeff, |a, &i| f.mul(a, x[i]));
            f.add(acc, v)
        })
    }

    pub fn monomial(coeff: Fe, vars: &[usize]) -> Poly {
        Poly { terms: vec![Monomial { coeff, vars: vars.to_vec() }] }
    }
}

/// ℓ polynomials in m variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyFamily {
    pub m: usize,
    pub polys: Vec<Poly>,
}

impl PolyFamily {
    pub fn degree(&self) -> usize {
        self.polys.iter().map(|p| p.degree()).max().unwrap_or(0)
    }

    /// Parses `;`-separated polynomials in the grammar
    /// `f := term ('+' term)*`, `term := coeff ('*' var ('^' exp)?)*`,
    /// with variables `x1..xm` and coefficients as decimal element encodings.
    /// A term may omit its coefficient.
    pub fn parse(src: &str, f: &FieldCtx, m: usize) -> Result<PolyFamily> {
        let mut polys = Vec::new();
        for part in src.split(';') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let mut terms = Vec::new();
            for term in part.split('+') {
                let mut coeff = 1;
                let mut vars = Vec::new();
                for (i, factor) in term.split('*').enumerate() {
                    let factor = factor.trim();
                    if let Some(rest) = factor.strip_prefix('x') {
                        let (name, exp) = match rest.split_once('^') {
                            Some((n, e)) => (n, e.trim().parse::<usize>().map_err(|_| invalid!("bad exponent in {factor}"))?),
                            None => (rest, 1),
                        };
                        let v: usize = name.trim().parse().map_err(|_| invalid!("bad variable {factor}"))?;
                        if v == 0 || v > m {
                            return Err(invalid!("variable {factor} outside x1..x{m}"));
                        }
                        vars.extend(core::iter::repeat(v - 1).take(exp));
                    } else if i == 0 {
                        let c: u64 = factor.parse().map_err(|_| invalid!("bad coefficient {factor}"))?;
                        if c >= f.order() as u64 {
                            return Err(invalid!("coefficient {c} is not in {}", f.id()));
                        }
                        coeff = c as Fe;
                    } else {
                        return Err(invalid!("unexpected factor {factor}"));
                    }
                }
                vars.sort_unstable();
                terms.push(Monomial { coeff, vars });
            }
            polys.push(Poly { terms });
        }
        if polys.is_empty() {
            return Err(invalid!("empty polynomial family"));
        }
        Ok(PolyFamily { m, polys })
    }

    /// Renders in the same grammar.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (pi, p) in self.polys.iter().enumerate() {
            if pi > 0 {
                out.push_str("; ");
            }
            for (ti, t) in p.terms.iter().enumerate() {
                if ti > 0 {
                    out.push_str(" + ");
                }
                out.push_str(&t.coeff.to_string());
                for v in &t.vars {
                    out.push_str(&format!("*x{}", v + 1));
                }
            }
        }
        out
    }

    /// f_s = x_{1}·x_{2}···x_{d} (cycling through the m variables) for every slot.
    pub fn products(ell: usize, m: usize, d: usize) -> PolyFamily {
        let polys = (0..ell).map(|_| Poly::monomial(1, &(0..d).map(|i| i % m).collect::<Vec<_>>())).collect();
        PolyFamily { m, polys }
    }
}

/// Shared interface of the linear HSS constructions.
///
/// Inputs are scalar field elements laid out as `slot * m + var` (one
/// m-vector per output slot) or just `var` when all slots read one shared
/// m-vector. Each scalar is shared independently.
pub trait LinearHss {
    fn k(&self) -> usize;
    fn t(&self) -> usize;
    fn d(&self) -> usize;
    fn m(&self) -> usize;
    fn ell(&self) -> usize;
    fn field(&self) -> &Field;
    fn share_field(&self) -> &Field;
    fn shared_inputs(&self) -> bool;
    /// Share-field symbols of randomness per scalar input.
    fn rand_per_input(&self) -> usize;
    /// Share-field symbols each server receives per scalar input.
    fn share_width(&self) -> usize;
    /// Per-server symbols for one scalar input.
    fn share_input(&self, x: Fe, r: &[Fe]) -> Vec<Vec<Fe>>;
    /// Server j's output from its shares (`shares[i]` belongs to scalar input i).
    fn eval(&self, fam: &PolyFamily, j: usize, shares: &[Vec<Fe>]) -> Vec<Fe>;
    fn rec(&self, outs: &[Vec<Fe>]) -> Vec<Fe>;
    /// Base-field symbols per server output.
    fn out_width(&self) -> usize;
    fn name(&self) -> String;

    fn n_inputs(&self) -> usize {
        if self.shared_inputs() {
            self.m()
        } else {
            self.ell() * self.m()
        }
    }

    fn input_index(&self, slot: usize, var: usize) -> usize {
        if self.shared_inputs() {
            var
        } else {
            slot * self.m() + var
        }
    }

    fn rand_len(&self) -> usize {
        self.n_inputs() * self.rand_per_input()
    }

    /// Input shares: result[j][i] is server j's symbols for scalar input i.
    fn share(&self, inputs: &[Fe], rand: &[Fe]) -> Vec<Vec<Vec<Fe>>> {
        let rp = self.rand_per_input();
        let mut out = vec![Vec::with_capacity(inputs.len()); self.k()];
        for (i, &x) in inputs.iter().enumerate() {
            let s = self.share_input(x, &rand[i * rp..(i + 1) * rp]);
            for (j, v) in s.into_iter().enumerate() {
                out[j].push(v);
            }
        }
        out
    }

    /// Evaluates f_s on the slot's input vector.
    fn expected(&self, fam: &PolyFamily, inputs: &[Fe]) -> Vec<Fe> {
        let f = self.field();
        fam.polys
            .iter()
            .enumerate()
            .map(|(s, p)| {
                let x: Vec<Fe> = (0..self.m()).map(|v| inputs[self.input_index(s, v)]).collect();
                p.eval(f, &x)
            })
            .collect()
    }

    fn run(&self, fam: &PolyFamily, inputs: &[Fe], rand: &[Fe]) -> HssTranscript {
        let shares = self.share(inputs, rand);
        let outputs: Vec<Vec<Fe>> = (0..self.k()).map(|j| self.eval(fam, j, &shares[j])).collect();
        let reconstructed = self.rec(&outputs);
        HssTranscript {
            input_shares: shares,
            outputs,
            reconstructed,
            upload_bits: self.upload_bits(),
            download_bits: self.download_bits(),
        }
    }

    fn upload_bits(&self) -> f64 {
        (self.k() * self.n_inputs() * self.share_width()) as f64 * self.share_field().log2_order()
    }

    fn download_bits(&self) -> f64 {
        (self.k() * self.out_width()) as f64 * self.field().log2_order()
    }

    /// ℓ log|F| over the download, as an exact ratio of symbol counts.
    fn rate(&self) -> Ratio<u64> {
        Ratio::new(self.ell() as u64, (self.k() * self.out_width()) as u64)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HssTranscript {
    pub input_shares: Vec<Vec<Vec<Fe>>>,
    pub outputs: Vec<Vec<Fe>>,
    pub reconstructed: Vec<Fe>,
    pub upload_bits: f64,
    pub download_bits: f64,
}

fn check_family<H: LinearHss + ?Sized>(h: &H, fam: &PolyFamily) -> Result<()> {
    if fam.polys.len() != h.ell() || fam.m != h.m() {
        return Err(invalid!("family has {} polynomials in {} variables, scheme expects {} in {}", fam.polys.len(), fam.m, h.ell(), h.m()));
    }
    if fam.degree() > h.d() {
        return Err(invalid!("family degree {} exceeds d = {}", fam.degree(), h.d()));
    }
    let q = h.field().order();
    if fam.polys.iter().flat_map(|p| &p.terms).any(|t| t.coeff >= q) {
        return Err(invalid!("coefficient outside the field"));
    }
    Ok(())
}

/// The CNF-based scheme: t-CNF inputs, the CNF product per monomial, and a
/// conversion into the dt-private scheme of a linear code.
pub struct CnfHss {
    pub t: usize,
    pub k: usize,
    pub d: usize,
    pub m: usize,
    pub field: Field,
    pub code: LinearCode,
    pub shared: bool,
    product: CnfProduct,
    to_target: CnfToTarget,
    one_pieces: Vec<Fe>,
}

impl CnfHss {
    pub fn new(t: usize, k: usize, d: usize, m: usize, ell: usize, code: LinearCode) -> Result<CnfHss> {
        if t == 0 || d == 0 || k <= d * t {
            return Err(invalid!("CNF HSS needs t ≥ 1, d ≥ 1 and k > dt (t={t}, d={d}, k={k})"));
        }
        if code.n != k {
            return Err(invalid!("code length {} differs from k = {k}", code.n));
        }
        let target = code_to_lmsss(&code, ell)?;
        if target.t < d * t {
            return Err(invalid!("code gives only {}-privacy, need {}", target.t, d * t));
        }
        let field = code.field.clone();
        let product = CnfProduct::with_default(k, t, d)?;
        let to_target = CnfToTarget::new(k, d * t, target)?;
        let n = binom(k as u64, t as u64) as usize;
        let mut one_pieces = vec![0; n];
        one_pieces[0] = 1;
        Ok(CnfHss { t, k, d, m, field, code, shared: false, product, to_target, one_pieces })
    }

    /// The constant 1 shared with its whole value on the first t-set.
    fn one_share(&self, j: usize) -> Vec<Fe> {
        cnf_sets(self.k, self.t)
            .iter()
            .zip(&self.one_pieces)
            .filter(|(s, _)| !s.contains(&j))
            .map(|(_, &v)| v)
            .collect()
    }
}

impl LinearHss for CnfHss {
    fn k(&self) -> usize {
        self.k
    }
    fn t(&self) -> usize {
        self.t
    }
    fn d(&self) -> usize {
        self.d
    }
    fn m(&self) -> usize {
        self.m
    }
    fn ell(&self) -> usize {
        self.to_target.target.ell
    }
    fn field(&self) -> &Field {
        &self.field
    }
    fn share_field(&self) -> &Field {
        &self.field
    }
    fn shared_inputs(&self) -> bool {
        self.shared
    }
    fn rand_per_input(&self) -> usize {
        binom(self.k as u64, self.t as u64) as usize - 1
    }
    fn share_width(&self) -> usize {
        binom(self.k as u64 - 1, self.t as u64) as usize
    }
    fn share_input(&self, x: Fe, r: &[Fe]) -> Vec<Vec<Fe>> {
        cnf_share(&self.field, x, self.t, self.k, r).expect("parameters checked at construction").shares
    }
    fn eval(&self, fam: &PolyFamily, j: usize, shares: &[Vec<Fe>]) -> Vec<Fe> {
        let f = &self.field;
        let one = self.one_share(j);
        let width = self.product.out_width();
        let mut slots = Vec::with_capacity(fam.polys.len());
        for (s, p) in fam.polys.iter().enumerate() {
            let mut acc = vec![0; width];
            for term in &p.terms {
                let mut factors: Vec<Vec<Fe>> =
                    term.vars.iter().map(|&v| shares[self.input_index(s, v)].clone()).collect();
                while factors.len() < self.d {
                    factors.push(one.clone());
                }
                let z = self.product.convert_party(f, j, &factors);
                for (a, &v) in acc.iter_mut().zip(&z) {
                    *a = f.add(*a, f.mul(term.coeff, v));
                }
            }
            slots.push(acc);
        }
        self.to_target.convert_party(j, &slots)
    }
    fn rec(&self, outs: &[Vec<Fe>]) -> Vec<Fe> {
        let flat: Vec<Fe> = outs.concat();
        self.to_target.target.rec_full().mul_vec(&flat, &self.field)
    }
    fn out_width(&self) -> usize {
        self.code.b
    }
    fn name(&self) -> String {
        format!("cnf(t={},k={},d={},m={},ell={},{})", self.t, self.k, self.d, self.m, self.ell(), self.field.id())
    }
}

/// The Shamir-based scheme. Inputs are shared over E, a degree-(k-dt)
/// extension of F̃ = F^b; b parallel instances are bundled into one F̃ symbol
/// per server with powers of F̃'s primitive element. With `copies > 1` the
/// whole construction is repeated.
pub struct ShamirHss {
    pub t: usize,
    pub k: usize,
    pub d: usize,
    pub m: usize,
    pub b: usize,
    pub copies: usize,
    pub field: Field,
    pub shared: bool,
    /// F̃ over F.
    pub ft: Extension,
    pub tc: TraceConcat,
    out_dual: Vec<Fe>,
    out_basis: Vec<Fe>,
    unbundle_dual: Vec<Fe>,
}

impl ShamirHss {
    pub fn new(t: usize, k: usize, d: usize, m: usize, field: Field, b: usize) -> Result<ShamirHss> {
        ShamirHss::repeated(t, k, d, m, field, b, 1)
    }

    /// `copies` independent runs of the scheme with bundling exponent `b`.
    pub fn repeated(t: usize, k: usize, d: usize, m: usize, field: Field, b: usize, copies: usize) -> Result<ShamirHss> {
        if t == 0 || d == 0 || k <= d * t || b == 0 || copies == 0 {
            return Err(invalid!("Shamir HSS needs t, d, b ≥ 1 and k > dt (t={t}, d={d}, k={k}, b={b})"));
        }
        if (field.order() as u64).pow(b as u32) < k as u64 {
            return Err(invalid!("|F|^b = {}^{b} is below k = {k}", field.order()));
        }
        let ft = Extension::of(&field, b as u32)?;
        let lt = k - d * t;
        let te = Extension::of(&ft.ext, lt as u32)?;
        let tc = TraceConcat::new(te, k, d * t)?;
        let out_basis = ft.power_basis(0);
        let out_dual = ft.dual_basis(&out_basis).ok_or_else(|| Error::Invariant("power basis".into()))?;
        let unbundle_dual = ft.dual_basis(&ft.power_basis(1)).ok_or_else(|| Error::Invariant("power basis".into()))?;
        Ok(ShamirHss { t, k, d, m, b, copies, field, shared: false, ft, tc, out_dual, out_basis, unbundle_dual })
    }

    /// ℓ̃ = k - dt secrets per bundled instance.
    pub fn ell_inner(&self) -> usize {
        self.k - self.d * self.t
    }

    pub fn ext_field(&self) -> &Field {
        &self.tc.ext.ext
    }

    /// F → E through F̃.
    pub fn embed(&self, x: Fe) -> Fe {
        self.tc.ext.embed(self.ft.embed(x))
    }

    /// Evaluation points α_0..α_k in E.
    pub fn points(&self) -> &[Fe] {
        &self.tc.points
    }
}

impl LinearHss for ShamirHss {
    fn k(&self) -> usize {
        self.k
    }
    fn t(&self) -> usize {
        self.t
    }
    fn d(&self) -> usize {
        self.d
    }
    fn m(&self) -> usize {
        self.m
    }
    fn ell(&self) -> usize {
        self.copies * self.b * self.ell_inner()
    }
    fn field(&self) -> &Field {
        &self.field
    }
    fn share_field(&self) -> &Field {
        self.ext_field()
    }
    fn shared_inputs(&self) -> bool {
        self.shared
    }
    fn rand_per_input(&self) -> usize {
        self.t
    }
    fn share_width(&self) -> usize {
        1
    }
    fn share_input(&self, x: Fe, r: &[Fe]) -> Vec<Vec<Fe>> {
        shamir_share_ext(self.ext_field(), self.embed(x), self.t, &self.tc.points, r).expect("checked points").shares
    }
    fn eval(&self, fam: &PolyFamily, j: usize, shares: &[Vec<Fe>]) -> Vec<Fe> {
        let e = self.ext_field();
        let ftf = &self.ft.ext;
        let lt = self.ell_inner();
        let mut out = Vec::with_capacity(self.out_width());
        for c in 0..self.copies {
            let mut z = 0;
            for i in 0..self.b {
                let vals: Vec<Fe> = (0..lt)
                    .map(|r| {
                        let s = (c * self.b + i) * lt + r;
                        fam.polys[s].terms.iter().fold(0, |acc, term| {
                            let v = term.vars.iter().fold(self.embed(term.coeff), |a, &var| {
                                e.mul(a, shares[self.input_index(s, var)][0])
                            });
                            e.add(acc, v)
                        })
                    })
                    .collect();
                let w = self.tc.eval(j, &vals);
                z = ftf.add(z, ftf.mul(w, ftf.gamma_pow(i as i64 + 1)));
            }
            out.extend(self.ft.coords(z, &self.out_dual));
        }
        out
    }
    fn rec(&self, outs: &[Vec<Fe>]) -> Vec<Fe> {
        let ftf = &self.ft.ext;
        let mut res = vec![0; self.ell()];
        let lt = self.ell_inner();
        for c in 0..self.copies {
            let z: Vec<Fe> = outs
                .iter()
                .map(|o| {
                    (0..self.b).fold(0, |acc, i| ftf.add(acc, self.ft.scale(o[c * self.b + i], self.out_basis[i])))
                })
                .collect();
            let inner = self.tc.rec(&z);
            for (r, &v) in inner.iter().enumerate() {
                let parts = self.ft.coords(v, &self.unbundle_dual);
                for (i, &x) in parts.iter().enumerate() {
                    res[(c * self.b + i) * lt + r] = x;
                }
            }
        }
        res
    }
    fn out_width(&self) -> usize {
        self.copies * self.b
    }
    fn name(&self) -> String {
        format!(
            "shamir(t={},k={},d={},m={},b={},copies={},{})",
            self.t, self.k, self.d, self.m, self.b, self.copies, self.field.id()
        )
    }
}

/// 1 - dt/k, the best rate of any linear scheme.
pub fn rate_bound_linear(t: usize, k: usize, d: usize) -> Result<Ratio<u64>> {
    if d * t >= k {
        return Err(invalid!("no linear HSS exists with dt = {} ≥ k = {k}", d * t));
    }
    Ok(Ratio::new((k - d * t) as u64, k as u64))
}

/// k log2|Y| / (k - t) bits: the download lower bound for any HSS of a
/// surjective function onto Y.
pub fn rate_bound_general(t: usize, k: usize, y_size: u64) -> Result<f64> {
    if t >= k {
        return Err(invalid!("t = {t} must be below k = {k}"));
    }
    Ok(k as f64 * libm::log2(y_size as f64) / (k - t) as f64)
}

/// Scalar inputs and randomness from a point of F_p^N.
struct Layout {
    p: u32,
    in_digits: usize,
    n_in: usize,
    r_digits: usize,
    n_r: usize,
}

impl Layout {
    fn of<H: LinearHss + ?Sized>(h: &H) -> Layout {
        Layout {
            p: h.field().p(),
            in_digits: h.field().s() as usize,
            n_in: h.n_inputs(),
            r_digits: h.share_field().s() as usize,
            n_r: h.rand_len(),
        }
    }

    fn coords(&self) -> usize {
        self.in_digits * self.n_in + self.r_digits * self.n_r
    }

    fn decode_sparse(&self, pts: &[(usize, u32)]) -> (Vec<Fe>, Vec<Fe>) {
        let mut x = vec![0; self.n_in];
        let mut r = vec![0; self.n_r];
        let split = self.in_digits * self.n_in;
        for &(i, v) in pts {
            if i < split {
                x[i / self.in_digits] += v * self.p.pow((i % self.in_digits) as u32);
            } else {
                let i = i - split;
                r[i / self.r_digits] += v * self.p.pow((i % self.r_digits) as u32);
            }
        }
        (x, r)
    }

    fn decode_index(&self, mut code: u64) -> (Vec<Fe>, Vec<Fe>) {
        let mut pts = Vec::new();
        for i in 0..self.coords() {
            let v = (code % self.p as u64) as u32;
            code /= self.p as u64;
            if v != 0 {
                pts.push((i, v));
            }
        }
        self.decode_sparse(&pts)
    }
}

/// A failed correctness check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub inputs: Vec<Fe>,
    pub rand: Vec<Fe>,
    pub expected: Vec<Fe>,
    pub got: Vec<Fe>,
}

pub fn check_point<H: LinearHss + ?Sized>(h: &H, fam: &PolyFamily, inputs: &[Fe], rand: &[Fe]) -> Option<Counterexample> {
    let tr = h.run(fam, inputs, rand);
    let want = h.expected(fam, inputs);
    if tr.reconstructed == want {
        None
    } else {
        Some(Counterexample { inputs: inputs.to_vec(), rand: rand.to_vec(), expected: want, got: tr.reconstructed })
    }
}

/// Number of (input, randomness) states of the scheme if at most `limit`.
pub fn total_states<H: LinearHss + ?Sized>(h: &H, limit: u64) -> Option<u64> {
    let l = Layout::of(h);
    state_count(l.p, l.coords(), limit)
}

/// Checks the states with indices in `range` (a slice of the full enumeration).
pub fn check_state_range<H: LinearHss + ?Sized>(h: &H, fam: &PolyFamily, range: Range<u64>) -> Result<Option<Counterexample>> {
    check_family(h, fam)?;
    let l = Layout::of(h);
    for code in range {
        let (x, r) = l.decode_index(code);
        if let Some(c) = check_point(h, fam, &x, &r) {
            return Ok(Some(c));
        }
    }
    Ok(None)
}

/// Report from the degree certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateReport {
    pub coordinates: usize,
    pub points: u64,
    pub counterexample: Option<Counterexample>,
}

/// Exhaustive correctness through a degree bound.
///
/// The map (inputs, randomness) ↦ Rec(Eval(Share)) - f is a polynomial of
/// total degree ≤ d in the prime-field coordinates (sharing is linear, each
/// monomial multiplies at most d shares, everything after is linear). It is
/// therefore zero everywhere iff it is zero at every point with at most d
/// nonzero coordinates, which is what this checks.
pub fn degree_certificate<H: LinearHss + ?Sized>(h: &H, fam: &PolyFamily) -> Result<CertificateReport> {
    check_family(h, fam)?;
    let l = Layout::of(h);
    let n = l.coords();
    let mut points = 0u64;
    let mut bad = None;
    low_weight_points(l.p, n, h.d(), |pts| {
        if bad.is_some() {
            return;
        }
        points += 1;
        let (x, r) = l.decode_sparse(pts);
        bad = check_point(h, fam, &x, &r);
    });
    Ok(CertificateReport { coordinates: n, points, counterexample: bad })
}

/// Outcome of an HSS privacy audit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HssPrivacyReport {
    pub pass: bool,
    /// True when the joint view of all inputs was enumerated; false when each
    /// independently shared input was checked on its own.
    pub joint: bool,
    pub states: u64,
    pub failing_set: Option<Vec<usize>>,
}

/// Exact t-privacy: the view of every coalition of size ≤ t has the same
/// distribution for every input vector. Enumerates the joint view when the
/// state space is at most `joint_limit`, otherwise each scalar input's
/// sharing separately (inputs are shared with independent randomness).
pub fn privacy_audit<H: LinearHss + ?Sized>(h: &H, t: usize, joint_limit: u64) -> Result<HssPrivacyReport> {
    let l = Layout::of(h);
    let joint = state_count(l.p, l.coords(), joint_limit).is_some();
    let groups: Vec<Vec<usize>> = if joint { vec![(0..h.n_inputs()).collect()] } else { (0..h.n_inputs()).map(|i| vec![i]).collect() };
    let sf = h.share_field();
    let w = h.share_width();
    let rp = h.rand_per_input();
    let mut states = 0;
    for size in 1..=t.min(h.k()) {
        for set in subsets(h.k(), size) {
            for g in &groups {
                let view_len = set.len() * w * g.len();
                check_packable(sf, view_len)?;
                let view_of = |inputs: &[Fe], rand: &[Fe]| -> Vec<Fe> {
                    let mut v = Vec::with_capacity(view_len);
                    for (gi, _) in g.iter().enumerate() {
                        let s = h.share_input(inputs[gi], &rand[gi * rp..(gi + 1) * rp]);
                        for &j in &set {
                            v.extend_from_slice(&s[j]);
                        }
                    }
                    v
                };
                let zero_in = vec![0; g.len()];
                let zero_r = vec![0; g.len() * rp];
                // sharing is linear over the prime field: build generators from unit inputs
                let mut rgens = Vec::new();
                let sbasis = prime_basis(sf);
                for pos in 0..g.len() * rp {
                    for &bv in &sbasis {
                        let mut r = zero_r.clone();
                        r[pos] = bv;
                        rgens.push(view_of(&zero_in, &r));
                    }
                }
                let mut igens = Vec::new();
                for pos in 0..g.len() {
                    for &bv in &prime_basis(h.field()) {
                        let mut x = zero_in.clone();
                        x[pos] = bv;
                        igens.push(view_of(&x, &zero_r));
                    }
                }
                let reference = view_multiset(sf, &vec![0; view_len], &rgens);
                let mut same = true;
                for_each_combination(sf, &vec![0; view_len], &igens, |base| {
                    if !same {
                        return;
                    }
                    let mut ms = Vec::with_capacity(reference.len());
                    for_each_combination(sf, base, &rgens, |v| ms.push(pack(sf, v)));
                    ms.sort_unstable();
                    states += ms.len() as u64;
                    if ms != reference {
                        same = false;
                    }
                });
                if !same {
                    return Ok(HssPrivacyReport { pass: false, joint, states, failing_set: Some(set) });
                }
            }
        }
    }
    Ok(HssPrivacyReport { pass: true, joint, states, failing_set: None })
}

/// Builds the scheme named by a family tag with the default codes:
/// parity, repetition or Hamming codes over F_2 and Reed-Solomon codes otherwise.
pub fn default_cnf_code(field: &Field, t: usize, k: usize, d: usize, ell: usize) -> Result<LinearCode> {
    let need = d * t + 1;
    if field.order() == 2 {
        if need == 2 && ell <= k - 1 {
            return LinearCode::parity(field.clone(), k);
        }
        if need == k && ell == 1 {
            return LinearCode::repetition(field.clone(), k);
        }
        if need == 3 && k == 7 && ell <= 4 {
            return LinearCode::hamming(field.clone(), 3);
        }
    }
    if (field.order() as usize) < k || ell > k + 1 - need {
        return Err(invalid!("no built-in code over {} with length {k}, dimension {ell} and distance {need}", field.id()));
    }
    let ext = Extension::new(field.clone(), field.clone())?;
    LinearCode::reed_solomon(&ext, k, k + 1 - need)
}

pub fn boxed_cnf(t: usize, k: usize, d: usize, m: usize, ell: usize, field: Field) -> Result<Box<dyn LinearHss>> {
    let code = default_cnf_code(&field, t, k, d, ell)?;
    Ok(Box::new(CnfHss::new(t, k, d, m, ell, code)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galois::FieldCtx;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn fld(p: u32, s: u32) -> Field {
        FieldCtx::shared(p, s).unwrap()
    }

    fn random_run<H: LinearHss + ?Sized>(h: &H, fam: &PolyFamily, trials: usize, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..trials {
            let x: Vec<Fe> = (0..h.n_inputs()).map(|_| rng.gen_range(0..h.field().order())).collect();
            let r: Vec<Fe> = (0..h.rand_len()).map(|_| rng.gen_range(0..h.share_field().order())).collect();
            assert_eq!(check_point(h, fam, &x, &r), None);
        }
    }

    #[test]
    fn parse_and_print() {
        let f = fld(5, 1);
        let fam = PolyFamily::parse("3*x1*x2^2 + x3; 2", &f, 3).unwrap();
        assert_eq!(fam.polys.len(), 2);
        assert_eq!(fam.polys[0].terms[0], Monomial { coeff: 3, vars: vec![0, 1, 1] });
        assert_eq!(fam.polys[0].terms[1], Monomial { coeff: 1, vars: vec![2] });
        assert_eq!(fam.degree(), 3);
        assert_eq!(fam.polys[0].eval(&f, &[1, 2, 4]), (3 * 4 + 4) % 5);
        let again = PolyFamily::parse(&fam.to_text(), &f, 3).unwrap();
        assert_eq!(again, fam);
        assert!(PolyFamily::parse("x4", &f, 3).is_err());
        assert!(PolyFamily::parse("7*x1", &f, 3).is_err());
    }

    #[test]
    fn cnf_and_of_two_bits_exhaustive() {
        let f = fld(2, 1);
        let h = CnfHss::new(1, 3, 2, 2, 1, LinearCode::repetition(f.clone(), 3).unwrap()).unwrap();
        let fam = PolyFamily::products(1, 2, 2);
        assert_eq!(h.rate(), Ratio::new(1, 3));
        let n = total_states(&h, 1 << 22).unwrap();
        assert_eq!(n, 64);
        assert_eq!(check_state_range(&h, &fam, 0..n).unwrap(), None);
    }

    #[test]
    fn cnf_hamming_concat() {
        let f = fld(2, 1);
        let h = CnfHss::new(2, 7, 1, 1, 4, LinearCode::hamming(f.clone(), 3).unwrap()).unwrap();
        assert_eq!(h.rate(), Ratio::new(4, 7));
        let fam = PolyFamily::products(4, 1, 1);
        let rep = degree_certificate(&h, &fam).unwrap();
        assert_eq!(rep.counterexample, None);
        assert_eq!(rep.coordinates, 4 + 4 * 20);
        assert_eq!(h.upload_bits(), (7 * 4 * 1 * 15) as f64);
    }

    #[test]
    fn cnf_rs_degree_two() {
        let f = fld(2, 3);
        let h = boxed_cnf(1, 5, 2, 2, 3, f).unwrap();
        assert_eq!(h.rate(), Ratio::new(3, 5));
        let fam = PolyFamily { m: 2, polys: vec![
            Poly { terms: vec![Monomial { coeff: 3, vars: vec![0, 1] }, Monomial { coeff: 1, vars: vec![] }] },
            Poly { terms: vec![Monomial { coeff: 5, vars: vec![1, 1] }] },
            Poly { terms: vec![Monomial { coeff: 7, vars: vec![0] }] },
        ] };
        assert_eq!(degree_certificate(h.as_ref(), &fam).unwrap().counterexample, None);
        random_run(h.as_ref(), &fam, 300, 3);
    }

    #[test]
    fn certificate_catches_a_wrong_scheme() {
        // correct scheme checked against the wrong family must fail
        let f = fld(2, 1);
        let h = CnfHss::new(1, 3, 2, 2, 1, LinearCode::repetition(f, 3).unwrap()).unwrap();
        let fam = PolyFamily::products(1, 2, 2);
        struct Wrong<'a>(&'a CnfHss);
        impl LinearHss for Wrong<'_> {
            fn k(&self) -> usize { self.0.k() }
            fn t(&self) -> usize { self.0.t() }
            fn d(&self) -> usize { self.0.d() }
            fn m(&self) -> usize { self.0.m() }
            fn ell(&self) -> usize { self.0.ell() }
            fn field(&self) -> &Field { self.0.field() }
            fn share_field(&self) -> &Field { self.0.share_field() }
            fn shared_inputs(&self) -> bool { false }
            fn rand_per_input(&self) -> usize { self.0.rand_per_input() }
            fn share_width(&self) -> usize { self.0.share_width() }
            fn share_input(&self, x: Fe, r: &[Fe]) -> Vec<Vec<Fe>> { self.0.share_input(x, r) }
            fn eval(&self, fam: &PolyFamily, j: usize, s: &[Vec<Fe>]) -> Vec<Fe> {
                // drop the first piece of server 0
                let mut s = s.to_vec();
                if j == 0 { s[0][0] = 0; }
                self.0.eval(fam, j, &s)
            }
            fn rec(&self, o: &[Vec<Fe>]) -> Vec<Fe> { self.0.rec(o) }
            fn out_width(&self) -> usize { 1 }
            fn name(&self) -> String { "wrong".into() }
        }
        assert!(degree_certificate(&Wrong(&h), &fam).unwrap().counterexample.is_some());
    }

    #[test]
    fn shamir_concat_f4() {
        let h = ShamirHss::new(1, 3, 1, 1, fld(2, 2), 1).unwrap();
        assert_eq!(h.ell(), 2);
        assert_eq!(h.rate(), Ratio::new(2, 3));
        assert_eq!(h.ext_field().order(), 16);
        let fam = PolyFamily::products(2, 1, 1);
        let n = total_states(&h, 1 << 22).unwrap();
        assert_eq!(n, 16 * 256);
        assert_eq!(check_state_range(&h, &fam, 0..n).unwrap(), None);
        assert_eq!(h.download_bits(), 3.0 * 2.0);
        assert_eq!(h.upload_bits(), (3 * 1 * 1 * 4) as f64 * 2.0);
        let p = privacy_audit(&h, 1, 1 << 22).unwrap();
        assert!(p.pass && p.joint);
    }

    #[test]
    fn shamir_products_f5() {
        let h = ShamirHss::new(1, 4, 2, 2, fld(5, 1), 1).unwrap();
        assert_eq!(h.ell(), 2);
        let fam = PolyFamily::products(2, 2, 2);
        random_run(&h, &fam, 500, 7);
        assert_eq!(degree_certificate(&h, &fam).unwrap().counterexample, None);
    }

    #[test]
    fn shamir_bundled_over_f2() {
        // |F| = 2 < k = 3 needs b = 2; ℓ = b(k - dt) = 4
        let h = ShamirHss::new(1, 3, 1, 1, fld(2, 1), 2).unwrap();
        assert_eq!(h.ell(), 4);
        assert_eq!(h.out_width(), 2);
        assert_eq!(h.rate(), Ratio::new(2, 3));
        let fam = PolyFamily::products(4, 1, 1);
        let n = total_states(&h, 1 << 22).unwrap();
        assert_eq!(check_state_range(&h, &fam, 0..n).unwrap(), None);
        // upload k m b² (k-dt)² log|F|
        assert_eq!(h.upload_bits(), (3 * 1 * 4 * 4) as f64);
        assert!(ShamirHss::new(1, 3, 1, 1, fld(2, 1), 1).is_err());
    }

    #[test]
    fn shamir_repeated_copies() {
        let h = ShamirHss::repeated(1, 3, 1, 1, fld(2, 1), 2, 2).unwrap();
        assert_eq!(h.ell(), 8);
        assert_eq!(h.download_bits(), 3.0 * 4.0);
        // k m b ⌈log_|F| k⌉ (k-dt)² log|F| with b = 4
        assert_eq!(h.upload_bits(), (3 * 1 * 4 * 2 * 4) as f64);
        let fam = PolyFamily::products(8, 1, 1);
        assert_eq!(degree_certificate(&h, &fam).unwrap().counterexample, None);
    }

    #[test]
    fn lower_degree_families_work() {
        let f = fld(2, 1);
        let h = CnfHss::new(1, 3, 2, 2, 1, LinearCode::repetition(f, 3).unwrap()).unwrap();
        let fam = PolyFamily::parse("x1 + 1", h.field(), 2).unwrap();
        assert_eq!(check_state_range(&h, &fam, 0..64).unwrap(), None);
        let s = ShamirHss::new(1, 4, 2, 1, fld(5, 1), 1).unwrap();
        let fam = PolyFamily::parse("2*x1 + 3; 4", s.field(), 1).unwrap();
        assert_eq!(degree_certificate(&s, &fam).unwrap().counterexample, None);
    }

    #[test]
    fn bounds() {
        assert_eq!(rate_bound_linear(1, 2, 1).unwrap(), Ratio::new(1, 2));
        assert_eq!(rate_bound_linear(2, 7, 2).unwrap(), Ratio::new(3, 7));
        assert!(rate_bound_linear(2, 4, 2).is_err());
        assert_eq!(rate_bound_general(0, 3, 2).unwrap(), 1.0);
        assert_eq!(rate_bound_general(1, 2, 2).unwrap(), 2.0);
    }

    #[test]
    fn cnf_privacy_exact() {
        let f = fld(2, 1);
        let h = CnfHss::new(1, 3, 1, 1, 2, LinearCode::parity(f, 3).unwrap()).unwrap();
        let p = privacy_audit(&h, 1, 1 << 22).unwrap();
        assert!(p.pass && p.joint);
        assert!(!privacy_audit(&h, 2, 1 << 22).unwrap().pass);
    }
}
