//! Black-box rate amplification: replicate the output shares of an additive
//! k0-server HSS across k servers and convert them locally into shares of
//! a higher-rate linear scheme.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_rational::Ratio;

use crate::combi::{binom, subsets};
use crate::convert::CnfToTarget;
use crate::enumerate::{prime_basis, state_count};
use crate::error::{invalid, Error, Result};
use crate::galois::{Fe, Field};
use crate::hss_poly::HssTranscript;
use crate::linalg::Mat;
use crate::lmsss::{cnf_sets, code_to_lmsss, LinearCode, Lmsss};

/// Replication maps ψ_i, linear conversion maps φ_j and the target scheme.
#[derive(Clone, Debug)]
pub struct BlackBoxTransform {
    pub name: String,
    pub t: usize,
    pub k: usize,
    pub k0: usize,
    pub ell: usize,
    pub field: Field,
    /// psi[i][v]: servers receiving share v of secret i (0-based).
    pub psi: Vec<Vec<Vec<usize>>>,
    /// phi[j]: b_j × c_j matrix applied to server j's view in `view(j)` order.
    pub phi: Vec<Mat>,
    pub target: Lmsss,
}

impl BlackBoxTransform {
    pub fn new(
        name: String,
        t: usize,
        k0: usize,
        psi: Vec<Vec<Vec<usize>>>,
        phi: Vec<Mat>,
        target: Lmsss,
    ) -> Result<BlackBoxTransform> {
        let k = target.k;
        let ell = psi.len();
        if target.ell != ell {
            return Err(invalid!("target shares {} secrets, ψ covers {ell}", target.ell));
        }
        if psi.iter().any(|p| p.len() != k0 || p.iter().flatten().any(|&j| j >= k)) {
            return Err(invalid!("each ψ_i must map [{k0}] into subsets of [{k}]"));
        }
        if phi.len() != k {
            return Err(invalid!("need one conversion map per server"));
        }
        let t0 = BlackBoxTransform { name, t, k, k0, ell, field: target.field.clone(), psi, phi, target };
        for j in 0..k {
            let m = &t0.phi[j];
            if m.cols != t0.view(j).len() || m.rows != t0.target.widths[j] {
                return Err(invalid!("φ_{j} is {}×{}, expected {}×{}", m.rows, m.cols, t0.target.widths[j], t0.view(j).len()));
            }
        }
        Ok(t0)
    }

    /// Server j's view Y(j): the (i, v) with j ∈ ψ_i(v), in lexicographic order.
    pub fn view(&self, j: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (i, p) in self.psi.iter().enumerate() {
            for (v, s) in p.iter().enumerate() {
                if s.contains(&j) {
                    out.push((i, v));
                }
            }
        }
        out
    }

    /// c_j = |Y(j)|.
    pub fn c(&self, j: usize) -> usize {
        self.view(j).len()
    }

    pub fn rate(&self) -> Ratio<u64> {
        let (a, b) = self.target.rate();
        Ratio::new(a as u64, b as u64)
    }

    /// Output shares z_j = φ_j(Y(j)) for y[i][v] = y_i^(v).
    pub fn apply(&self, y: &[Vec<Fe>]) -> Vec<Vec<Fe>> {
        (0..self.k)
            .map(|j| {
                let vals: Vec<Fe> = self.view(j).iter().map(|&(i, v)| y[i][v]).collect();
                self.phi[j].mul_vec(&vals, &self.field)
            })
            .collect()
    }

    /// Whether each server holds at most one share of every secret.
    pub fn one_share_per_secret(&self) -> bool {
        (0..self.k).all(|j| self.psi.iter().all(|p| p.iter().filter(|s| s.contains(&j)).count() <= 1))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BbFailure {
    /// Coalition `set` collects every share of secret `secret`.
    Security { set: Vec<usize>, secret: usize },
    /// The output shares for this tuple y[i][v] are not a sharing of the sums.
    Correctness { y: Vec<Vec<Fe>> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BbVerdict {
    pub pass: bool,
    /// Every share tuple was enumerated (otherwise correctness was checked on
    /// a basis, which suffices because all maps are linear).
    pub exhaustive: bool,
    pub tuples_checked: u64,
    pub sets_checked: u64,
    pub failure: Option<BbFailure>,
}

/// Checks the security union bound for all coalitions of size ≤ t, then
/// correctness: φ(Y) - G·(Σ_v y_i^(v)) must lie in the column space of Hᵀ.
/// Enumerates all |F|^(ℓ k0) tuples when that is at most `budget`.
pub fn bb_validate(tr: &BlackBoxTransform, budget: u64, allow_fallback: bool) -> Result<BbVerdict> {
    let mut sets_checked = 0;
    for size in 1..=tr.t.min(tr.k) {
        for set in subsets(tr.k, size) {
            sets_checked += 1;
            for (i, p) in tr.psi.iter().enumerate() {
                let seen = p.iter().filter(|s| s.iter().any(|j| set.contains(j))).count();
                if seen > tr.k0 - 1 {
                    return Ok(BbVerdict {
                        pass: false,
                        exhaustive: false,
                        tuples_checked: 0,
                        sets_checked,
                        failure: Some(BbFailure::Security { set, secret: i }),
                    });
                }
            }
        }
    }

    let f = &tr.field;
    // rows p with p·Hᵀ = 0 cut out the column space of Hᵀ
    let check = Mat::from_rows(&tr.target.ht.transpose().nullspace(f));
    let check_rows = if tr.target.ht.cols == 0 { Mat::identity(tr.target.total_width()) } else { check };
    let residual = |y: &[Vec<Fe>]| -> Vec<Fe> {
        let z: Vec<Fe> = tr.apply(y).concat();
        let sums: Vec<Fe> = y.iter().map(|row| f.sum(row.iter().copied())).collect();
        let gs = tr.target.g.mul_vec(&sums, f);
        let d: Vec<Fe> = z.iter().zip(&gs).map(|(&a, &b)| f.sub(a, b)).collect();
        if check_rows.rows == 0 {
            Vec::new()
        } else {
            check_rows.mul_vec(&d, f)
        }
    };
    let mut basis_checked = 0u64;
    for i in 0..tr.ell {
        for v in 0..tr.k0 {
            for &b in &prime_basis(f) {
                let mut y = vec![vec![0; tr.k0]; tr.ell];
                y[i][v] = b;
                let r = residual(&y);
                if r.iter().any(|&x| x != 0) {
                    return Ok(BbVerdict {
                        pass: false,
                        exhaustive: false,
                        tuples_checked: basis_checked + 1,
                        sets_checked,
                        failure: Some(BbFailure::Correctness { y }),
                    });
                }
                basis_checked += 1;
            }
        }
    }
    let digits = tr.ell * tr.k0 * f.s() as usize;
    match state_count(f.p(), digits, budget) {
        Some(n) => {
            // direct evaluation of every tuple, independent of the linearity shortcut above
            let p = f.p() as u64;
            let mut y = vec![vec![0; tr.k0]; tr.ell];
            for code in 0..n {
                let mut c = code;
                for i in 0..tr.ell {
                    for v in 0..tr.k0 {
                        let mut val = 0;
                        let mut scale = 1;
                        for _ in 0..f.s() {
                            val += (c % p) as u32 * scale;
                            scale *= f.p();
                            c /= p;
                        }
                        y[i][v] = val;
                    }
                }
                if residual(&y).iter().any(|&x| x != 0) {
                    return Ok(BbVerdict {
                        pass: false,
                        exhaustive: true,
                        tuples_checked: code + 1,
                        sets_checked,
                        failure: Some(BbFailure::Correctness { y }),
                    });
                }
            }
            Ok(BbVerdict { pass: true, exhaustive: true, tuples_checked: n, sets_checked, failure: None })
        }
        None if allow_fallback => {
            Ok(BbVerdict { pass: true, exhaustive: false, tuples_checked: basis_checked, sets_checked, failure: None })
        }
        None => Err(Error::Budget(format!("|F|^(ℓ k0) exceeds the budget of {budget} tuples"))),
    }
}

/// k0 = C(k,t): ψ_i(v) = [k] ∖ η(v) with η the t-set enumeration, so every
/// y_i ends up t-CNF shared; φ converts CNF into the code's scheme.
pub fn bb_cnf(k: usize, t: usize, code: &LinearCode, ell: usize) -> Result<BlackBoxTransform> {
    if t == 0 || t >= k {
        return Err(invalid!("need 0 < t < k"));
    }
    let target = code_to_lmsss(code, ell)?;
    if target.t < t {
        return Err(invalid!("code scheme is only {}-private, need {t}", target.t));
    }
    let conv = CnfToTarget::new(k, t, target.clone())?;
    let sets = cnf_sets(k, t);
    let k0 = sets.len();
    let psi: Vec<Vec<Vec<usize>>> =
        (0..ell).map(|_| sets.iter().map(|s| (0..k).filter(|j| !s.contains(j)).collect()).collect()).collect();
    let per = binom(k as u64 - 1, t as u64) as usize;
    let mut phi = Vec::with_capacity(k);
    for j in 0..k {
        let c = ell * per;
        let mut m = Mat::zeros(target.widths[j], c);
        for col in 0..c {
            let mut cnf = vec![vec![0; per]; ell];
            cnf[col / per][col % per] = 1;
            for (r, v) in conv.convert_party(j, &cnf).into_iter().enumerate() {
                m.set(r, col, v);
            }
        }
        phi.push(m);
    }
    BlackBoxTransform::new(format!("cnf(k={k},t={t},ell={ell})"), t, k0, psi, phi, target)
}

/// The 1-private k-server transform from a 2-server scheme: ψ_i(1) = [k]∖{i},
/// ψ_i(2) = {i}. Target: z_j = x_j + r (j < k), z_k = -r, so y_j = z_j + z_k.
pub fn bb_two_server(k: usize, field: Field) -> Result<BlackBoxTransform> {
    if k < 2 {
        return Err(invalid!("need k ≥ 2"));
    }
    let ell = k - 1;
    let f = &field;
    let psi: Vec<Vec<Vec<usize>>> =
        (0..ell).map(|i| vec![(0..k).filter(|&j| j != i).collect(), vec![i]]).collect();
    let mut g = Mat::zeros(k, ell);
    let mut ht = Mat::zeros(k, 1);
    for j in 0..ell {
        g.set(j, j, 1);
        ht.set(j, 0, 1);
    }
    ht.set(k - 1, 0, f.neg(1));
    let target = Lmsss::new(field.clone(), vec![1; k], g, ht, 1)?;
    let mut phi = Vec::with_capacity(k);
    let probe = BlackBoxTransform {
        name: String::new(),
        t: 1,
        k,
        k0: 2,
        ell,
        field: field.clone(),
        psi: psi.clone(),
        phi: Vec::new(),
        target: target.clone(),
    };
    for j in 0..k {
        let view = probe.view(j);
        let mut m = Mat::zeros(1, view.len());
        for (c, &(i, v)) in view.iter().enumerate() {
            let coeff = if j == k - 1 || (i == j && v == 1) { 1 } else { f.neg(1) };
            m.set(0, c, coeff);
        }
        phi.push(m);
    }
    BlackBoxTransform::new(format!("two-server(k={k})"), 1, 2, psi, phi, target)
}

/// Blocks of size k0 - 1 in [q], pairwise meeting in at most one point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PackingFamily {
    pub q: usize,
    pub block: usize,
    pub blocks: Vec<Vec<usize>>,
}

impl PackingFamily {
    pub fn new(q: usize, block: usize, mut blocks: Vec<Vec<usize>>) -> Result<PackingFamily> {
        for b in blocks.iter_mut() {
            b.sort_unstable();
            b.dedup();
        }
        let fam = PackingFamily { q, block, blocks };
        fam.validate()?;
        Ok(fam)
    }

    pub fn validate(&self) -> Result<()> {
        for b in &self.blocks {
            if b.len() != self.block || b.iter().any(|&x| x >= self.q) {
                return Err(invalid!("block {:?} is not a {}-subset of [{}]", b, self.block, self.q));
            }
        }
        for (a, x) in self.blocks.iter().enumerate() {
            for y in &self.blocks[a + 1..] {
                if x.iter().filter(|e| y.contains(e)).count() > 1 {
                    return Err(invalid!("blocks {:?} and {:?} share more than one point", x, y));
                }
            }
        }
        Ok(())
    }
}

/// Greedy lexicographic packing of (k0-1)-subsets of [q].
pub fn packing_family(q: usize, k0: usize) -> Result<PackingFamily> {
    if k0 < 2 || k0 - 1 > q {
        return Err(invalid!("need 2 ≤ k0 and k0 - 1 ≤ q"));
    }
    let block = k0 - 1;
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for cand in subsets(q, block) {
        if blocks.iter().all(|b| b.iter().filter(|e| cand.contains(e)).count() <= 1) {
            blocks.push(cand);
        }
    }
    PackingFamily::new(q, block, blocks)
}

fn packing_psi(fam: &PackingFamily, k0: usize, literal: bool) -> Vec<Vec<Vec<usize>>> {
    let ell = fam.blocks.len();
    let mut psi = vec![vec![Vec::new(); k0]; ell];
    for i in 0..ell {
        psi[i][k0 - 1].push(i);
        for (r, &e) in fam.blocks[i].iter().enumerate() {
            psi[i][r].push(ell + e);
        }
    }
    for i in 0..ell {
        for i2 in 0..ell {
            if i2 == i {
                continue;
            }
            for r in 0..k0 - 1 {
                // server i takes what its element servers saw of other secrets
                if literal || fam.blocks[i].contains(&fam.blocks[i2][r]) {
                    psi[i2][r].push(i);
                }
            }
        }
    }
    psi
}

fn packing_transform(fam: &PackingFamily, field: Field, literal: bool) -> Result<BlackBoxTransform> {
    fam.validate()?;
    let k0 = fam.block + 1;
    if k0 > fam.q {
        return Err(invalid!("need k0 < q"));
    }
    let ell = fam.blocks.len();
    let k = ell + fam.q;
    let f = &field;
    let psi = packing_psi(fam, k0, literal);
    let mut g = Mat::zeros(k, ell);
    let mut ht = Mat::zeros(k, fam.q);
    for i in 0..ell {
        g.set(i, i, 1);
        for &e in &fam.blocks[i] {
            ht.set(i, e, f.neg(1));
        }
    }
    for e in 0..fam.q {
        ht.set(ell + e, e, 1);
    }
    let target = Lmsss::new(field.clone(), vec![1; k], g, ht, fam.block)?;
    let probe = BlackBoxTransform {
        name: String::new(),
        t: fam.block,
        k,
        k0,
        ell,
        field: field.clone(),
        psi: psi.clone(),
        phi: Vec::new(),
        target: target.clone(),
    };
    let mut phi = Vec::with_capacity(k);
    for j in 0..k {
        let view = probe.view(j);
        let mut m = Mat::zeros(1, view.len());
        for (c, &(i, v)) in view.iter().enumerate() {
            let coeff = if j >= ell || (i == j && v == k0 - 1) { 1 } else { f.neg(1) };
            m.set(0, c, coeff);
        }
        phi.push(m);
    }
    BlackBoxTransform::new(format!("packing(q={},k0={k0},|S|={ell})", fam.q), fam.block, k0, psi, phi, target)
}

/// The packing transform: servers 0..ℓ-1 stand for blocks, ℓ..ℓ+q-1 for points.
pub fn bb_packing(fam: &PackingFamily, field: Field) -> Result<BlackBoxTransform> {
    packing_transform(fam, field, false)
}

/// The q = 3, k0 = 3 example with blocks {1,2} and {1,3}.
pub fn packing_example() -> PackingFamily {
    PackingFamily { q: 3, block: 2, blocks: vec![vec![0, 1], vec![0, 2]] }
}

/// Additive k0-server HSS for F-linear functions x ↦ c·x on F^m.
#[derive(Clone, Debug)]
pub struct MockAdditiveHss {
    pub k0: usize,
    pub m: usize,
    pub field: Field,
}

impl MockAdditiveHss {
    pub fn rand_len(&self) -> usize {
        self.m * (self.k0 - 1)
    }

    /// Per-server input share vectors.
    pub fn share(&self, x: &[Fe], r: &[Fe]) -> Vec<Vec<Fe>> {
        let f = &self.field;
        let mut out = vec![vec![0; self.m]; self.k0];
        for c in 0..self.m {
            let mut last = x[c];
            for v in 0..self.k0 - 1 {
                let rv = r[c * (self.k0 - 1) + v];
                out[v][c] = rv;
                last = f.sub(last, rv);
            }
            out[self.k0 - 1][c] = last;
        }
        out
    }

    pub fn eval(&self, coeffs: &[Fe], share: &[Fe]) -> Fe {
        self.field.dot(coeffs, share)
    }

    /// Bits per server share.
    pub fn upload_bits(&self) -> f64 {
        self.m as f64 * self.field.log2_order()
    }
}

/// Share with Π0, replicate by ψ, evaluate, convert by φ, reconstruct with the
/// target scheme. `funcs[i]` is the coefficient vector of f_i.
pub fn apply_blackbox(
    tr: &BlackBoxTransform,
    pi0: &MockAdditiveHss,
    funcs: &[Vec<Fe>],
    inputs: &[Vec<Fe>],
    rand: &[Fe],
) -> Result<HssTranscript> {
    if pi0.k0 != tr.k0 || pi0.field.id() != tr.field.id() {
        return Err(invalid!("Π0 has k0 = {} over {}, transform needs k0 = {} over {}", pi0.k0, pi0.field.id(), tr.k0, tr.field.id()));
    }
    if funcs.len() != tr.ell || inputs.len() != tr.ell || rand.len() != tr.ell * pi0.rand_len() {
        return Err(invalid!("need {} functions, inputs and {} random symbols", tr.ell, tr.ell * pi0.rand_len()));
    }
    let rl = pi0.rand_len();
    let shares: Vec<Vec<Vec<Fe>>> =
        (0..tr.ell).map(|i| pi0.share(&inputs[i], &rand[i * rl..(i + 1) * rl])).collect();
    let mut input_shares = vec![Vec::new(); tr.k];
    let mut outputs = Vec::with_capacity(tr.k);
    for j in 0..tr.k {
        let view = tr.view(j);
        let mut ys = Vec::with_capacity(view.len());
        for &(i, v) in &view {
            input_shares[j].push(shares[i][v].clone());
            ys.push(pi0.eval(&funcs[i], &shares[i][v]));
        }
        outputs.push(tr.phi[j].mul_vec(&ys, &tr.field));
    }
    let reconstructed = tr.target.rec_full().mul_vec(&outputs.concat(), &tr.field);
    let upload: usize = (0..tr.k).map(|j| tr.c(j)).sum();
    Ok(HssTranscript {
        input_shares,
        outputs,
        reconstructed,
        upload_bits: upload as f64 * pi0.upload_bits(),
        download_bits: tr.target.total_width() as f64 * tr.field.log2_order(),
    })
}

/// Σ_{(i,v): j ∈ ψ_i(v)} L_v for each server.
pub fn individual_upload_bits(tr: &BlackBoxTransform, pi0: &MockAdditiveHss) -> Vec<f64> {
    (0..tr.k).map(|j| tr.c(j) as f64 * pi0.upload_bits()).collect()
}
