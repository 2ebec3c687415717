//! Linear multi-secret sharing: additive, CNF and Shamir sharing, the
//! generic matrix form `chop(Gx + Hᵀr)`, linear codes over F^b and the
//! translation from a code to a scheme with access structure [k].

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::combi::subsets;
use crate::enumerate::{check_packable, expand_generators, state_count, view_multiset};
use crate::error::{invalid, Error, Result};
use crate::galois::{Extension, Fe, Field, FieldCtx, FieldId};
use crate::linalg::Mat;

/// Per-party share vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShareBundle {
    pub field: FieldId,
    pub shares: Vec<Vec<Fe>>,
}

impl ShareBundle {
    pub fn widths(&self) -> Vec<usize> {
        self.shares.iter().map(|s| s.len()).collect()
    }

    pub fn flat(&self) -> Vec<Fe> {
        self.shares.concat()
    }
}

/// (r_1, ..., r_{k-1}, x - Σ r).
pub fn additive_share(f: &FieldCtx, x: Fe, k: usize, r: &[Fe]) -> Result<ShareBundle> {
    if k == 0 || r.len() != k - 1 {
        return Err(invalid!("additive sharing over {k} parties needs {} random symbols", k.saturating_sub(1)));
    }
    let mut shares: Vec<Vec<Fe>> = r.iter().map(|&v| vec![v]).collect();
    shares.push(vec![f.sub(x, f.sum(r.iter().copied()))]);
    Ok(ShareBundle { field: f.id(), shares })
}

/// t-subsets of [k] in lexicographic order; CNF pieces are indexed by these.
pub fn cnf_sets(k: usize, t: usize) -> Vec<Vec<usize>> {
    subsets(k, t)
}

/// Additive pieces x_T for every t-set T: the first C(k,t)-1 come from `r`.
pub fn cnf_pieces(f: &FieldCtx, x: Fe, k: usize, t: usize, r: &[Fe]) -> Result<Vec<Fe>> {
    if t == 0 || t >= k {
        return Err(invalid!("CNF sharing needs 0 < t < k, got t={t}, k={k}"));
    }
    let n = crate::combi::binom(k as u64, t as u64) as usize;
    if r.len() != n - 1 {
        return Err(invalid!("CNF sharing needs {} random symbols, got {}", n - 1, r.len()));
    }
    let mut pieces = r.to_vec();
    pieces.push(f.sub(x, f.sum(r.iter().copied())));
    Ok(pieces)
}

/// Party j holds x_T for every t-set T not containing j, in set order.
pub fn cnf_from_pieces(f: &FieldCtx, k: usize, t: usize, pieces: &[Fe]) -> ShareBundle {
    let sets = cnf_sets(k, t);
    let shares = (0..k)
        .map(|j| sets.iter().zip(pieces).filter(|(s, _)| !s.contains(&j)).map(|(_, &v)| v).collect())
        .collect();
    ShareBundle { field: f.id(), shares }
}

pub fn cnf_share(f: &FieldCtx, x: Fe, t: usize, k: usize, r: &[Fe]) -> Result<ShareBundle> {
    let pieces = cnf_pieces(f, x, k, t, r)?;
    Ok(cnf_from_pieces(f, k, t, &pieces))
}

/// Recovers the additive pieces from any t+1 parties' CNF shares.
pub fn cnf_collect_pieces(k: usize, t: usize, bundle: &ShareBundle, parties: &[usize]) -> Option<Vec<Fe>> {
    let sets = cnf_sets(k, t);
    let mut out = vec![None; sets.len()];
    for &j in parties {
        let mut it = bundle.shares[j].iter();
        for (i, s) in sets.iter().enumerate() {
            if !s.contains(&j) {
                out[i] = it.next().copied();
            }
        }
    }
    out.into_iter().collect()
}

pub fn cnf_reconstruct(f: &FieldCtx, k: usize, t: usize, bundle: &ShareBundle, parties: &[usize]) -> Option<Fe> {
    Some(f.sum(cnf_collect_pieces(k, t, bundle, parties)?))
}

fn check_points(e: &FieldCtx, alphas: &[Fe]) -> Result<()> {
    let k = alphas.len().saturating_sub(1);
    if (e.order() as usize) <= k {
        return Err(invalid!("Shamir sharing over {} needs more than {k} field elements", e.id()));
    }
    for i in 0..alphas.len() {
        if alphas[i] >= e.order() {
            return Err(invalid!("evaluation point {} is not in {}", alphas[i], e.id()));
        }
        if alphas[..i].contains(&alphas[i]) {
            return Err(invalid!("repeated evaluation point {}", alphas[i]));
        }
    }
    Ok(())
}

/// Shares p(α_1..α_k) of p(X) = x + Σ_i r_i (X - α_0)^i, all over E.
pub fn shamir_share_ext(e: &FieldCtx, x: Fe, t: usize, alphas: &[Fe], r: &[Fe]) -> Result<ShareBundle> {
    check_points(e, alphas)?;
    if r.len() != t {
        return Err(invalid!("degree-{t} Shamir sharing needs {t} random coefficients"));
    }
    let shares = alphas[1..]
        .iter()
        .map(|&a| {
            let d = e.sub(a, alphas[0]);
            let mut acc = x;
            let mut pw = 1;
            for &ri in r {
                pw = e.mul(pw, d);
                acc = e.add(acc, e.mul(ri, pw));
            }
            vec![acc]
        })
        .collect();
    Ok(ShareBundle { field: e.id(), shares })
}

/// Shamir sharing of a base-field secret with points and randomness in the extension.
pub fn shamir_share(ext: &Extension, x: Fe, t: usize, alphas: &[Fe], r: &[Fe]) -> Result<ShareBundle> {
    if x >= ext.base.order() {
        return Err(invalid!("secret {x} is not in {}", ext.base.id()));
    }
    shamir_share_ext(&ext.ext, ext.embed(x), t, alphas, r)
}

/// Lagrange coefficients for evaluating at `at` from values at `points`.
pub fn lagrange_at(e: &FieldCtx, points: &[Fe], at: Fe) -> Vec<Fe> {
    (0..points.len())
        .map(|j| {
            let mut num = 1;
            let mut den = 1;
            for (m, &am) in points.iter().enumerate() {
                if m != j {
                    num = e.mul(num, e.sub(at, am));
                    den = e.mul(den, e.sub(points[j], am));
                }
            }
            e.div(num, den).expect("distinct points")
        })
        .collect()
}

/// Interpolates p(α_0) from the shares of `parties` (0-based).
pub fn shamir_reconstruct(e: &FieldCtx, alphas: &[Fe], bundle: &ShareBundle, parties: &[usize]) -> Fe {
    let pts: Vec<Fe> = parties.iter().map(|&j| alphas[j + 1]).collect();
    let lam = lagrange_at(e, &pts, alphas[0]);
    parties.iter().zip(&lam).fold(0, |acc, (&j, &l)| e.add(acc, e.mul(l, bundle.shares[j][0])))
}

/// Default evaluation points: α_0 = γ when requested, else encodings 0..k.
pub fn default_points(e: &FieldCtx, k: usize, alpha0: Option<Fe>) -> Vec<Fe> {
    match alpha0 {
        None => (0..=k as u32).collect(),
        Some(a0) => {
            let mut v = vec![a0];
            v.extend((0..e.order()).filter(|&a| a != a0).take(k));
            v
        }
    }
}

/// A k-party ℓ-secret linear scheme Share(x, r) = chop(Gx + Hᵀr).
#[derive(Clone, Debug)]
pub struct Lmsss {
    pub field: Field,
    pub k: usize,
    pub ell: usize,
    pub e: usize,
    pub widths: Vec<usize>,
    pub g: Mat,
    pub ht: Mat,
    pub t: usize,
    rec_full: Mat,
}

/// Outcome of a privacy audit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrivacyVerdict {
    pub pass: bool,
    pub exhaustive: bool,
    pub sets_checked: usize,
    /// A coalition whose view depends on the secret.
    pub failing_set: Option<Vec<usize>>,
}

impl Lmsss {
    pub fn new(field: Field, widths: Vec<usize>, g: Mat, ht: Mat, t: usize) -> Result<Lmsss> {
        let n: usize = widths.iter().sum();
        if g.rows != n || ht.rows != n {
            return Err(invalid!("sharing matrices need {n} rows"));
        }
        let rec_full = rec_matrix(&field, &g, &ht)
            .ok_or_else(|| invalid!("[G | Hᵀ] does not determine the secrets from all shares"))?;
        Ok(Lmsss { k: widths.len(), ell: g.cols, e: ht.cols, widths, g, ht, t, field, rec_full })
    }

    pub fn total_width(&self) -> usize {
        self.widths.iter().sum()
    }

    /// Row indices held by a set of parties.
    pub fn rows_of(&self, parties: &[usize]) -> Vec<usize> {
        let mut starts = vec![0; self.k + 1];
        for j in 0..self.k {
            starts[j + 1] = starts[j] + self.widths[j];
        }
        let mut out = Vec::new();
        for &j in parties {
            out.extend(starts[j]..starts[j + 1]);
        }
        out
    }

    pub fn chop(&self, v: &[Fe]) -> Vec<Vec<Fe>> {
        let mut out = Vec::with_capacity(self.k);
        let mut pos = 0;
        for &w in &self.widths {
            out.push(v[pos..pos + w].to_vec());
            pos += w;
        }
        out
    }

    pub fn share(&self, x: &[Fe], r: &[Fe]) -> Result<ShareBundle> {
        if x.len() != self.ell || r.len() != self.e {
            return Err(invalid!("expected {} secrets and {} random symbols", self.ell, self.e));
        }
        let f = &self.field;
        let gx = self.g.mul_vec(x, f);
        let hr = self.ht.mul_vec(r, f);
        let v: Vec<Fe> = gx.iter().zip(&hr).map(|(&a, &b)| f.add(a, b)).collect();
        Ok(ShareBundle { field: f.id(), shares: self.chop(&v) })
    }

    /// Rec_[k]: ℓ × (Σ b_j) matrix with R[G | Hᵀ] = [I | 0].
    pub fn rec_full(&self) -> &Mat {
        &self.rec_full
    }

    /// Reconstruction matrix for a qualified set, if the set is qualified.
    pub fn rec_for(&self, parties: &[usize]) -> Option<Mat> {
        let rows = self.rows_of(parties);
        rec_matrix(&self.field, &self.g.select_rows(&rows), &self.ht.select_rows(&rows))
    }

    pub fn reconstruct(&self, bundle: &ShareBundle) -> Vec<Fe> {
        self.rec_full.mul_vec(&bundle.flat(), &self.field)
    }

    /// Rank criterion: the coalition's view is secret-independent iff
    /// colspan(G_T) ⊆ colspan(Hᵀ_T).
    pub fn is_private_set(&self, parties: &[usize]) -> bool {
        let rows = self.rows_of(parties);
        let h = self.ht.select_rows(&rows);
        let gh = h.hstack(&self.g.select_rows(&rows));
        h.rank(&self.field) == gh.rank(&self.field)
    }

    /// Largest t with every coalition of size ≤ t private.
    pub fn privacy_threshold(&self) -> usize {
        for t in 1..=self.k {
            if !subsets(self.k, t).iter().all(|s| self.is_private_set(s)) {
                return t - 1;
            }
        }
        self.k
    }

    /// Checks every coalition of size ≤ t. Uses exact multiset comparison
    /// of the coalition's view over all randomness when |F|^(ℓ+e) ≤ 2^24,
    /// otherwise the rank criterion.
    pub fn privacy_audit(&self, t: usize) -> Result<PrivacyVerdict> {
        let f = &self.field;
        let total_digits = (self.ell + self.e) * f.s() as usize;
        let exhaustive = state_count(f.p(), total_digits, 1 << 24).is_some();
        let mut checked = 0;
        for size in 1..=t.min(self.k) {
            for set in subsets(self.k, size) {
                checked += 1;
                let ok = if exhaustive { self.view_independent(&set)? } else { self.is_private_set(&set) };
                if !ok {
                    return Ok(PrivacyVerdict { pass: false, exhaustive, sets_checked: checked, failing_set: Some(set) });
                }
            }
        }
        Ok(PrivacyVerdict { pass: true, exhaustive, sets_checked: checked, failing_set: None })
    }

    /// Exact comparison of the coalition's view distribution across all secrets.
    pub fn view_independent(&self, parties: &[usize]) -> Result<bool> {
        let f = &self.field;
        let rows = self.rows_of(parties);
        check_packable(f, rows.len())?;
        let h = self.ht.select_rows(&rows);
        let g = self.g.select_rows(&rows);
        let rgens = expand_generators(f, &(0..self.e).map(|i| h.col(i)).collect::<Vec<_>>());
        let reference = view_multiset(f, &vec![0; rows.len()], &rgens);
        let sgens = expand_generators(f, &(0..self.ell).map(|i| g.col(i)).collect::<Vec<_>>());
        let mut same = true;
        crate::enumerate::for_each_combination(f, &vec![0; rows.len()], &sgens, |base| {
            if same && view_multiset(f, base, &rgens) != reference {
                same = false;
            }
        });
        Ok(same)
    }

    /// The code C_H with H the row-reduced transpose of Hᵀ (the "if" direction
    /// of the code correspondence). Requires equal share widths.
    pub fn to_code(&self) -> Result<LinearCode> {
        let b = self.widths[0];
        if self.widths.iter().any(|&w| w != b) {
            return Err(invalid!("code extraction needs equal share widths"));
        }
        LinearCode::from_parity_check(self.field.clone(), b, self.ht.transpose())
    }

    /// Information rate ℓ / Σ b_j.
    pub fn rate(&self) -> (usize, usize) {
        (self.ell, self.total_width())
    }
}

fn rec_matrix(f: &FieldCtx, g: &Mat, ht: &Mat) -> Option<Mat> {
    let m = g.hstack(ht).transpose();
    let ell = g.cols;
    let mut target = Mat::zeros(ell + ht.cols, ell);
    for i in 0..ell {
        target.set(i, i, 1);
    }
    Some(m.solve_mat(&target, f)?.transpose())
}

pub fn additive_lmsss(f: Field, k: usize) -> Result<Lmsss> {
    if k == 0 {
        return Err(invalid!("need at least one party"));
    }
    let mut g = Mat::zeros(k, 1);
    g.set(k - 1, 0, 1);
    let mut ht = Mat::zeros(k, k - 1);
    for i in 0..k - 1 {
        ht.set(i, i, 1);
        ht.set(k - 1, i, f.neg(1));
    }
    Lmsss::new(f, vec![1; k], g, ht, k - 1)
}

pub fn cnf_lmsss(f: Field, k: usize, t: usize) -> Result<Lmsss> {
    if t == 0 || t >= k {
        return Err(invalid!("CNF sharing needs 0 < t < k"));
    }
    let sets = cnf_sets(k, t);
    let n = sets.len();
    // pieces = P (x, r): first n-1 pieces are r, last is x - Σ r
    let mut g = Vec::new();
    let mut ht = Vec::new();
    let mut widths = Vec::new();
    for j in 0..k {
        let mut w = 0;
        for (i, s) in sets.iter().enumerate() {
            if s.contains(&j) {
                continue;
            }
            w += 1;
            if i + 1 < n {
                g.push(vec![0]);
                let mut row = vec![0; n - 1];
                row[i] = 1;
                ht.push(row);
            } else {
                g.push(vec![1]);
                ht.push(vec![f.neg(1); n - 1]);
            }
        }
        widths.push(w);
    }
    Lmsss::new(f, widths, Mat::from_rows(&g), Mat::from_rows(&ht), t)
}

/// Shamir over E as a one-secret scheme over E.
pub fn shamir_lmsss(e: Field, t: usize, alphas: &[Fe]) -> Result<Lmsss> {
    check_points(&e, alphas)?;
    let k = alphas.len() - 1;
    if t >= k {
        return Err(invalid!("Shamir threshold {t} needs more than {t} parties"));
    }
    let g = Mat::from_rows(&vec![vec![1]; k]);
    let rows: Vec<Vec<Fe>> = alphas[1..]
        .iter()
        .map(|&a| (1..=t as u64).map(|i| e.pow(e.sub(a, alphas[0]), i)).collect())
        .collect();
    let ht = if t == 0 { Mat::zeros(k, 0) } else { Mat::from_rows(&rows) };
    Lmsss::new(e, vec![1; k], g, ht, t)
}

/// An F-linear code with alphabet F^b and block length n, given by a full-rank
/// parity-check matrix.
#[derive(Clone, Debug)]
pub struct LinearCode {
    pub field: Field,
    pub b: usize,
    pub n: usize,
    pub h: Mat,
    pub dim: usize,
}

impl LinearCode {
    pub fn from_parity_check(field: Field, b: usize, h: Mat) -> Result<LinearCode> {
        if b == 0 || h.cols % b != 0 {
            return Err(invalid!("parity-check width {} is not a multiple of b={b}", h.cols));
        }
        let (r, piv) = h.rref(&field);
        let rows: Vec<usize> = (0..piv.len()).collect();
        let h = if piv.is_empty() { Mat::zeros(0, h.cols) } else { r.select_rows(&rows) };
        let n = h.cols / b;
        let dim = h.cols - piv.len();
        Ok(LinearCode { field, b, n, h, dim })
    }

    pub fn from_generator(field: Field, b: usize, gen: &Mat) -> Result<LinearCode> {
        let ns = gen.nullspace(&field);
        let h = if ns.is_empty() { Mat::zeros(0, gen.cols) } else { Mat::from_rows(&ns) };
        LinearCode::from_parity_check(field, b, h)
    }

    /// Basis of the code as rows (length bn).
    pub fn generator(&self) -> Mat {
        let ns = self.h.nullspace(&self.field);
        if ns.is_empty() {
            Mat::zeros(0, self.b * self.n)
        } else {
            Mat::from_rows(&ns)
        }
    }

    pub fn rate(&self) -> (usize, usize) {
        (self.dim, self.b * self.n)
    }

    pub fn is_codeword(&self, c: &[Fe]) -> bool {
        self.h.mul_vec(c, &self.field).iter().all(|&v| v == 0)
    }

    /// Exact minimum chunk weight over all nonzero codewords.
    pub fn min_distance(&self) -> Result<usize> {
        let f = &self.field;
        let digits = self.dim * f.s() as usize;
        if digits as f64 * libm::log2(f.p() as f64) > 24.0 + 1e-9 {
            return Err(Error::Budget(format!("{} codewords", f.order() as f64 * self.dim as f64)));
        }
        let gen = self.generator();
        let gens = expand_generators(f, &gen.to_rows());
        let mut best = usize::MAX;
        let mut first = true;
        let b = self.b;
        crate::enumerate::for_each_combination(f, &vec![0; self.b * self.n], &gens, |c| {
            if first {
                first = false;
                return;
            }
            let w = c.chunks(b).filter(|ch| ch.iter().any(|&v| v != 0)).count();
            best = best.min(w);
        });
        Ok(if best == usize::MAX { self.n + 1 } else { best })
    }

    /// [n, n-1, 2] single parity check over F.
    pub fn parity(field: Field, n: usize) -> Result<LinearCode> {
        let h = Mat::from_rows(&[vec![1; n]]);
        LinearCode::from_parity_check(field, 1, h)
    }

    /// [n, 1, n] repetition code over F.
    pub fn repetition(field: Field, n: usize) -> Result<LinearCode> {
        let gen = Mat::from_rows(&[vec![1; n]]);
        LinearCode::from_generator(field, 1, &gen)
    }

    /// Binary Hamming code of length 2^r - 1: column i of H is i+1 in binary.
    pub fn hamming(field: Field, r: usize) -> Result<LinearCode> {
        if field.order() != 2 {
            return Err(invalid!("Hamming codes here are binary"));
        }
        let n = (1 << r) - 1;
        let mut h = Mat::zeros(r, n);
        for c in 0..n {
            for i in 0..r {
                h.set(i, c, ((c + 1) >> i & 1) as Fe);
            }
        }
        LinearCode::from_parity_check(field, 1, h)
    }

    /// Reed-Solomon code over the degree-b extension E of F, evaluated at the
    /// elements encoded 0..n-1, viewed as an F-linear code with alphabet F^b
    /// through the power basis 1, γ, ..., γ^(b-1) of E.
    pub fn reed_solomon(ext: &Extension, n: usize, dim: usize) -> Result<LinearCode> {
        let e = &ext.ext;
        if n > e.order() as usize || dim > n {
            return Err(invalid!("RS length {n} dimension {dim} over {}", e.id()));
        }
        let b = ext.degree() as usize;
        let basis = ext.power_basis(0);
        let dual = ext.dual_basis(&basis).ok_or_else(|| Error::Invariant("power basis is not a basis".into()))?;
        let mut rows = Vec::new();
        for i in 0..dim {
            for &beta in &basis {
                let mut row = Vec::with_capacity(n * b);
                for a in 0..n as Fe {
                    let sym = e.mul(beta, e.pow(a, i as u64));
                    row.extend(ext.coords(sym, &dual));
                }
                rows.push(row);
            }
        }
        LinearCode::from_generator(ext.base.clone(), b, &Mat::from_rows(&rows))
    }
}

/// The scheme chop(Gx + Hᵀr) for a code C_H, with G completed greedily from
/// standard basis vectors in index order. The declared threshold is the
/// largest t passing the rank criterion.
pub fn code_to_lmsss(code: &LinearCode, ell: usize) -> Result<Lmsss> {
    let f = &code.field;
    let n = code.b * code.n;
    if ell > code.dim {
        return Err(invalid!("code dimension {} is below ℓ = {ell}", code.dim));
    }
    let ht = code.h.transpose();
    let mut cur = ht.clone();
    let mut rank = cur.rank(f);
    let mut g_cols: Vec<usize> = Vec::new();
    for i in 0..n {
        if g_cols.len() == ell {
            break;
        }
        let mut unit = Mat::zeros(n, 1);
        unit.set(i, 0, 1);
        let cand = cur.hstack(&unit);
        let r = cand.rank(f);
        if r > rank {
            rank = r;
            cur = cand;
            g_cols.push(i);
        }
    }
    let mut g = Mat::zeros(n, ell);
    for (c, &i) in g_cols.iter().enumerate() {
        g.set(i, c, 1);
    }
    let mut l = Lmsss::new(f.clone(), vec![code.b; code.n], g, ht, 0)?;
    l.t = l.privacy_threshold();
    Ok(l)
}
