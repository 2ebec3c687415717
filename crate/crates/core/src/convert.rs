//! Local share conversions. Every per-party map here takes only that party's
//! own symbols, so locality holds by construction.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::combi::{binom, mask_of, set_of, subsets};
use crate::error::{invalid, Error, Result};
use crate::galois::{Extension, Fe, FieldCtx};
use crate::linalg::Mat;
use crate::lmsss::{cnf_sets, lagrange_at, Lmsss};

/// CNF to an arbitrary t-private target scheme.
///
/// For each t-set T a matrix U_T with Hᵀ_T U_T = -G_T exists by t-privacy,
/// so Share_L(v, U_T v) vanishes on the parties in T. The parties outside T
/// all know the piece vector x_T and output their part of that sharing; the
/// sum over T is Share_L(x, Σ U_T x_T).
#[derive(Clone, Debug)]
pub struct CnfToTarget {
    pub k: usize,
    pub t: usize,
    pub target: Lmsss,
    sets: Vec<Vec<usize>>,
    /// Per t-set: rows of G + Hᵀ U_T restricted to each party (Σ b_j × ℓ).
    maps: Vec<Mat>,
}

impl CnfToTarget {
    pub fn new(k: usize, t: usize, target: Lmsss) -> Result<CnfToTarget> {
        if target.k != k {
            return Err(invalid!("target has {} parties, CNF has {k}", target.k));
        }
        if t == 0 || t >= k {
            return Err(invalid!("CNF needs 0 < t < k"));
        }
        let f = target.field.clone();
        let sets = cnf_sets(k, t);
        let mut maps = Vec::with_capacity(sets.len());
        for s in &sets {
            let rows = target.rows_of(s);
            let h = target.ht.select_rows(&rows);
            let g = target.g.select_rows(&rows);
            let mut neg_g = g.clone();
            for v in neg_g.data.iter_mut() {
                *v = f.neg(*v);
            }
            let u = if h.cols == 0 {
                if g.data.iter().any(|&v| v != 0) {
                    None
                } else {
                    Some(Mat::zeros(0, target.ell))
                }
            } else {
                h.solve_mat(&neg_g, &f)
            };
            let u = u.ok_or_else(|| invalid!("target is not private for the set {:?}", s))?;
            let full = if u.rows == 0 { target.g.clone() } else { add(&f, &target.g, &target.ht.mul(&u, &f)) };
            maps.push(full);
        }
        Ok(CnfToTarget { k, t, target, sets, maps })
    }

    /// Party j's target share from its CNF shares of the ℓ secrets
    /// (`cnf[i]` lists x_{i,T} for the t-sets T not containing j, in set order).
    pub fn convert_party(&self, j: usize, cnf: &[Vec<Fe>]) -> Vec<Fe> {
        let f = &self.target.field;
        let rows = self.target.rows_of(&[j]);
        let mut out = vec![0; rows.len()];
        let mut pos = 0;
        for (ti, s) in self.sets.iter().enumerate() {
            if s.contains(&j) {
                continue;
            }
            let xt: Vec<Fe> = cnf.iter().map(|v| v[pos]).collect();
            pos += 1;
            let m = &self.maps[ti];
            for (o, &r) in out.iter_mut().zip(&rows) {
                *o = f.add(*o, f.dot(m.row(r), &xt));
            }
        }
        out
    }
}

fn add(f: &FieldCtx, a: &Mat, b: &Mat) -> Mat {
    let data = a.data.iter().zip(&b.data).map(|(&x, &y)| f.add(x, y)).collect();
    Mat { rows: a.rows, cols: a.cols, data }
}

/// W ↦ T(W) for every W ⊆ [k] with |W| ≤ dt, keyed by bitmask.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialAssignment {
    pub k: usize,
    pub size: usize,
    pub map: BTreeMap<u64, u64>,
}

impl MonomialAssignment {
    /// W padded with the smallest indices outside W.
    pub fn padded(k: usize, size: usize) -> MonomialAssignment {
        let mut map = BTreeMap::new();
        for w in 0..=size {
            for s in subsets(k, w) {
                let mut t = mask_of(&s);
                let mut i = 0;
                while (t.count_ones() as usize) < size {
                    t |= 1 << i;
                    i += 1;
                }
                map.insert(mask_of(&s), t);
            }
        }
        MonomialAssignment { k, size, map }
    }

    pub fn validate(&self) -> Result<()> {
        for w in 0..=self.size {
            for s in subsets(self.k, w) {
                let wm = mask_of(&s);
                let t = *self.map.get(&wm).ok_or_else(|| invalid!("no target for {:?}", s))?;
                if t & wm != wm || t.count_ones() as usize != self.size || t >> self.k != 0 {
                    return Err(invalid!("T({:?}) = {:?} is not a {}-superset", s, set_of(t), self.size));
                }
            }
        }
        Ok(())
    }
}

/// t-CNF sharings of d secrets to a dt-CNF sharing of their product.
#[derive(Clone, Debug)]
pub struct CnfProduct {
    pub k: usize,
    pub t: usize,
    pub d: usize,
    pub assignment: MonomialAssignment,
    src_sets: Vec<u64>,
    dst_sets: Vec<u64>,
}

impl CnfProduct {
    pub fn new(k: usize, t: usize, d: usize, assignment: MonomialAssignment) -> Result<CnfProduct> {
        if d == 0 || k <= d * t {
            return Err(invalid!("product of {d} {t}-CNF sharings needs k > dt, got k={k}"));
        }
        if assignment.k != k || assignment.size != d * t {
            return Err(invalid!("assignment does not match k={k}, dt={}", d * t));
        }
        assignment.validate()?;
        let src_sets = subsets(k, t).iter().map(|s| mask_of(s)).collect();
        let dst_sets = subsets(k, d * t).iter().map(|s| mask_of(s)).collect();
        Ok(CnfProduct { k, t, d, assignment, src_sets, dst_sets })
    }

    pub fn with_default(k: usize, t: usize, d: usize) -> Result<CnfProduct> {
        CnfProduct::new(k, t, d, MonomialAssignment::padded(k, d * t))
    }

    /// Number of output pieces per party, C(k-1, dt).
    pub fn out_width(&self) -> usize {
        binom(self.k as u64 - 1, (self.d * self.t) as u64) as usize
    }

    /// Party j's dt-CNF pieces z_T (T ∌ j, in set order) from its t-CNF
    /// shares of the d factors.
    pub fn convert_party(&self, f: &FieldCtx, j: usize, factors: &[Vec<Fe>]) -> Vec<Fe> {
        assert_eq!(factors.len(), self.d);
        let bit = 1u64 << j;
        // index of each held source set inside the party's share vector
        let mut held: BTreeMap<u64, usize> = BTreeMap::new();
        for &s in &self.src_sets {
            if s & bit == 0 {
                let idx = held.len();
                held.insert(s, idx);
            }
        }
        let mut out = Vec::new();
        for &tm in &self.dst_sets {
            if tm & bit != 0 {
                continue;
            }
            let inside: Vec<u64> = self.src_sets.iter().copied().filter(|&s| s & !tm == 0).collect();
            let mut z = 0;
            let mut idx = vec![0usize; self.d];
            'tuples: loop {
                let w = idx.iter().fold(0u64, |acc, &i| acc | inside[i]);
                if self.assignment.map[&w] == tm {
                    let mut prod = 1;
                    for (fi, &i) in idx.iter().enumerate() {
                        prod = f.mul(prod, factors[fi][held[&inside[i]]]);
                    }
                    z = f.add(z, prod);
                }
                let mut p = 0;
                loop {
                    if p == self.d {
                        break 'tuples;
                    }
                    idx[p] += 1;
                    if idx[p] < inside.len() {
                        break;
                    }
                    idx[p] = 0;
                    p += 1;
                }
            }
            out.push(z);
        }
        out
    }
}

/// Party j's product share Π_i p_i(α_j).
pub fn shamir_multiply_party(e: &FieldCtx, shares: &[Fe]) -> Fe {
    shares.iter().fold(1, |acc, &s| e.mul(acc, s))
}

/// Bundles ℓ Shamir sharings over E (secrets in F) into one F-symbol per
/// party via the field trace, and recovers the ℓ secrets F-linearly.
///
/// Points: α_0 = γ_E and α_1..α_k distinct elements of F. Valid for
/// polynomials of degree ≤ deg with ℓ = k - deg.
#[derive(Clone, Debug)]
pub struct TraceConcat {
    pub ext: Extension,
    pub k: usize,
    pub deg: usize,
    /// α_1..α_k as base-field elements.
    pub alphas: Vec<Fe>,
    /// α_0..α_k embedded in E.
    pub points: Vec<Fe>,
    pub lambdas: Vec<Fe>,
    dual_low: Vec<Fe>,
    dual_high: Vec<Fe>,
}

impl TraceConcat {
    pub fn new(ext: Extension, k: usize, deg: usize) -> Result<TraceConcat> {
        let ell = ext.degree() as usize;
        if deg >= k || ell != k - deg {
            return Err(invalid!("tower degree {ell} must equal k - deg = {}", k as i64 - deg as i64));
        }
        let gamma = ext.ext.gamma();
        let alphas: Vec<Fe> = (0..ext.base.order()).filter(|&a| ext.embed(a) != gamma).take(k).collect();
        if alphas.len() < k {
            return Err(invalid!("{} has fewer than {k} usable evaluation points", ext.base.id()));
        }
        TraceConcat::with_points(ext, k, deg, alphas)
    }

    pub fn with_points(ext: Extension, k: usize, deg: usize, alphas: Vec<Fe>) -> Result<TraceConcat> {
        let ell = ext.degree() as usize;
        if deg >= k || ell != k - deg || alphas.len() != k {
            return Err(invalid!("tower degree {ell}, k={k}, deg={deg} are inconsistent"));
        }
        let e = &ext.ext;
        let gamma = e.gamma();
        let mut points = vec![gamma];
        points.extend(alphas.iter().map(|&a| ext.embed(a)));
        for i in 0..points.len() {
            if points[..i].contains(&points[i]) {
                return Err(invalid!("evaluation points are not distinct"));
            }
        }
        let lambdas = lagrange_at(e, &points[1..], gamma);
        let low = ext.power_basis(0);
        let high = ext.power_basis(1);
        let dual_low = ext.dual_basis(&low).ok_or_else(|| Error::Invariant("γ powers are not a basis".into()))?;
        let dual_high = ext.dual_basis(&high).ok_or_else(|| Error::Invariant("γ powers are not a basis".into()))?;
        Ok(TraceConcat { ext, k, deg, alphas, points, lambdas, dual_low, dual_high })
    }

    pub fn ell(&self) -> usize {
        self.k - self.deg
    }

    /// f(α_j) = Σ_i p_i(α_j) γ^i from the ℓ shares held by party j.
    pub fn bundle(&self, shares: &[Fe]) -> Fe {
        let e = &self.ext.ext;
        shares.iter().enumerate().fold(0, |acc, (i, &s)| e.add(acc, e.mul(s, e.gamma_pow(i as i64 + 1))))
    }

    /// w_j = tr(λ_j f(α_j)).
    pub fn eval(&self, j: usize, shares: &[Fe]) -> Fe {
        assert_eq!(shares.len(), self.ell());
        self.eval_bundled(j, self.bundle(shares))
    }

    pub fn eval_bundled(&self, j: usize, fa: Fe) -> Fe {
        self.ext.trace(self.ext.ext.mul(self.lambdas[j], fa))
    }

    /// Power sums → tr(γ^(r-1) y) → y → coefficients of y in γ^1..γ^ℓ.
    pub fn rec(&self, w: &[Fe]) -> Vec<Fe> {
        let f = &self.ext.base;
        let e = &self.ext.ext;
        let ell = self.ell();
        let mut y = 0;
        for r in 0..ell {
            let tau = (0..self.k).fold(0, |acc, j| f.add(acc, f.mul(f.pow(self.alphas[j], r as u64), w[j])));
            y = e.add(y, self.ext.scale(tau, self.dual_low[r]));
        }
        self.ext.coords(y, &self.dual_high)
    }
}
