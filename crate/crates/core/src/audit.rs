//! Executable negative results: the exhaustive search showing no F_2-linear
//! Shamir-over-F_8 scheme for four concatenated bits downloads one bit per
//! server, the explicit CNF scheme that does, code searches confirming strict
//! rate bounds for small non-MDS alphabets, and a rate-bound grid.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use num_rational::Ratio;

use crate::combi::subsets;
use crate::convert::CnfToTarget;
use crate::error::{invalid, Error, Result};
use crate::galois::{Fe, Field, FieldCtx};
use crate::hss_poly::{boxed_cnf, rate_bound_linear, LinearHss, ShamirHss};
use crate::linalg::Mat;
use crate::lmsss::{cnf_pieces, cnf_sets, Lmsss};

/// Servers, secrets and extension degree of the fixed search instance.
pub const SERVERS: usize = 5;
pub const SECRETS: usize = 4;
const DEG: usize = 3;

/// F_2-coordinates of F_8 in a chosen basis, with multiplication matrices.
#[derive(Clone, Debug)]
pub struct F8Coords {
    pub field: Field,
    pub basis: [Fe; DEG],
    /// coords[a] = Vec(a) as a 3-bit mask (bit c = coefficient of basis[c]).
    coords: [u8; 8],
}

impl F8Coords {
    pub fn new(basis: [Fe; DEG]) -> Result<F8Coords> {
        let field = Arc::new(FieldCtx::of_order(8)?);
        let mut coords = [0xffu8; 8];
        for mask in 0..8u8 {
            let v = (0..DEG).filter(|&c| mask >> c & 1 == 1).fold(0, |acc, c| field.add(acc, basis[c]));
            if coords[v as usize] != 0xff {
                return Err(invalid!("{basis:?} is not a basis of F_8 over F_2"));
            }
            coords[v as usize] = mask;
        }
        Ok(F8Coords { field, basis, coords })
    }

    /// The polynomial basis 1, γ, γ² of the canonical modulus.
    pub fn standard() -> F8Coords {
        F8Coords::new([1, 2, 4]).expect("polynomial basis")
    }

    pub fn vec_of(&self, a: Fe) -> u8 {
        self.coords[a as usize]
    }

    /// Mat(α) as rows of column masks: entry (r, c) is bit r of Vec(α·basis[c]).
    pub fn mat(&self, a: Fe) -> [u8; DEG] {
        let cols: Vec<u8> = (0..DEG).map(|c| self.vec_of(self.field.mul(a, self.basis[c]))).collect();
        core::array::from_fn(|r| (0..DEG).fold(0, |acc, c| acc | ((cols[c] >> r & 1) << c)))
    }
}

fn parity(v: u32) -> u32 {
    v.count_ones() & 1
}

/// Row vector times a 3×3 GF(2) matrix given by rows.
fn row_times(y: u8, m: &[u8; DEG]) -> u8 {
    (0..DEG).filter(|&r| y >> r & 1 == 1).fold(0, |acc, r| acc ^ m[r])
}

/// The server functionals w_i ∈ F_2^16 implied by a common y ∈ F_2^12.
/// Block j occupies bits 4j..4j+4: the secret coordinate, then Vec(ρ_j).
pub fn derived_functionals(fc: &F8Coords, alphas: &[Fe], y: u16) -> Vec<u32> {
    let v = fc.vec_of(1);
    alphas
        .iter()
        .map(|&a| {
            let inv = fc.mat(fc.field.inv(a).expect("nonzero point"));
            (0..SECRETS).fold(0u32, |acc, j| {
                let yj = (y >> (DEG * j) & 0b111) as u8;
                // c = y Mat(α)^-1 and the secret coefficient is ⟨c, Vec(1)⟩
                let c = row_times(yj, &inv);
                let first = parity((c & v) as u32);
                acc | (first | (yj as u32) << 1) << (4 * j)
            })
        })
        .collect()
}

/// Whether every secret coordinate's unit vector lies in the span of `ws`.
pub fn secrets_in_span(ws: &[u32], secret_coords: &[usize]) -> bool {
    let mut basis: Vec<u32> = Vec::new();
    for &w in ws {
        let v = basis.iter().fold(w, |v, &b| v.min(v ^ b));
        if v != 0 {
            basis.push(v);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    secret_coords.iter().all(|&c| basis.iter().fold(1u32 << c, |v, &b| v.min(v ^ b)) == 0)
}

pub fn secret_coords() -> Vec<usize> {
    (0..SECRETS).map(|j| 4 * j).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchWitness {
    pub alphas: Vec<Fe>,
    pub y: u16,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchReport {
    pub servers: usize,
    pub secrets: usize,
    pub share_field: u32,
    pub basis: [Fe; DEG],
    pub candidates: u64,
    pub witnesses: Vec<SearchWitness>,
}

/// The 5-subsets of F_8^*, lexicographic.
pub fn point_sets() -> Vec<Vec<Fe>> {
    subsets(7, SERVERS).into_iter().map(|s| s.into_iter().map(|v| v as Fe + 1).collect()).collect()
}

/// All y ∈ F_2^12 for one point set; returns (candidates, witnesses).
pub fn search_point_set(fc: &F8Coords, alphas: &[Fe]) -> (u64, Vec<SearchWitness>) {
    let coords = secret_coords();
    let mut found = Vec::new();
    for y in 0..1u16 << (DEG * SECRETS) {
        if secrets_in_span(&derived_functionals(fc, alphas, y), &coords) {
            found.push(SearchWitness { alphas: alphas.to_vec(), y });
        }
    }
    (1 << (DEG * SECRETS), found)
}

/// Visits the point sets in the given order (a permutation of 0..21).
pub fn shamir_impossibility_search_ordered(fc: &F8Coords, order: &[usize]) -> Result<SearchReport> {
    let sets = point_sets();
    let mut sorted = order.to_vec();
    sorted.sort_unstable();
    if sorted != (0..sets.len()).collect::<Vec<_>>() {
        return Err(invalid!("order must permute the {} point sets", sets.len()));
    }
    let mut candidates = 0;
    let mut witnesses = Vec::new();
    for &i in order {
        let (c, w) = search_point_set(fc, &sets[i]);
        candidates += c;
        witnesses.extend(w);
    }
    witnesses.sort_by(|a, b| (&a.alphas, a.y).cmp(&(&b.alphas, b.y)));
    Ok(SearchReport { servers: SERVERS, secrets: SECRETS, share_field: 8, basis: fc.basis, candidates, witnesses })
}

pub fn shamir_impossibility_search() -> SearchReport {
    let order: Vec<usize> = (0..point_sets().len()).collect();
    shamir_impossibility_search_ordered(&F8Coords::standard(), &order).expect("identity order")
}

/// Validity of one candidate by direct evaluation: each server applies the
/// functional u_i^(j) with ⟨u, Vec(ρα_i)⟩ = ⟨y_j, Vec(ρ)⟩ to its F_8 share of
/// block j, and some F_2-combination of the five bits must equal each secret
/// on every input. Only the secrets listed in `targets` are required.
pub fn candidate_valid_bruteforce(fc: &F8Coords, alphas: &[Fe], y: u16, targets: &[usize]) -> bool {
    let f = &fc.field;
    // u_i^(j) found by search over the 8 functionals
    let mut u = [[0u8; SECRETS]; SERVERS];
    for (i, &a) in alphas.iter().enumerate() {
        for j in 0..SECRETS {
            let yj = (y >> (DEG * j) & 0b111) as u8;
            u[i][j] = (0..8u8)
                .find(|&cand| {
                    (0..8).all(|rho: Fe| {
                        parity((cand & fc.vec_of(f.mul(rho, a))) as u32) == parity((yj & fc.vec_of(rho)) as u32)
                    })
                })
                .expect("Mat(α) is invertible");
        }
    }
    // output bit of each server over all 2^4 · 8^4 inputs, as bitsets
    let n_inputs = 1usize << 16;
    let mut z = vec![vec![0u64; n_inputs / 64]; SERVERS];
    let mut secret_bits = vec![vec![0u64; n_inputs / 64]; SECRETS];
    for idx in 0..n_inputs {
        let x: [Fe; SECRETS] = core::array::from_fn(|j| (idx >> j & 1) as Fe);
        let rho: [Fe; SECRETS] = core::array::from_fn(|j| (idx >> (4 + 3 * j) & 0b111) as Fe);
        for (i, &a) in alphas.iter().enumerate() {
            let bit = (0..SECRETS).fold(0, |acc, j| {
                let share = f.add(x[j], f.mul(rho[j], a));
                acc ^ parity((u[i][j] & fc.vec_of(share)) as u32)
            });
            z[i][idx / 64] |= (bit as u64) << (idx % 64);
        }
        for j in 0..SECRETS {
            secret_bits[j][idx / 64] |= (x[j] as u64) << (idx % 64);
        }
    }
    targets.iter().all(|&j| {
        (0..1u32 << SERVERS).any(|a| {
            (0..n_inputs / 64).all(|w| {
                let comb = (0..SERVERS).filter(|&i| a >> i & 1 == 1).fold(0u64, |acc, i| acc ^ z[i][w]);
                comb == secret_bits[j][w]
            })
        })
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnfWitnessReport {
    /// Rec recovers every secret under every r.
    pub correct: bool,
    /// Each single share is uniform and independent of the secrets.
    pub private: bool,
    /// The CNF-based concatenation scheme passes the search's span predicate.
    pub hss_valid: bool,
    pub download_bits: usize,
    pub rate: Ratio<u64>,
}

/// Share(x, r) = (r, x1+r, x2+r, x3+r, x4+r) over F_2.
pub fn one_bit_lmsss() -> Result<Lmsss> {
    let f = Arc::new(FieldCtx::of_order(2)?);
    let mut g = Mat::zeros(SERVERS, SECRETS);
    for j in 0..SECRETS {
        g.set(j + 1, j, 1);
    }
    let ht = Mat::from_rows(&vec![vec![1]; SERVERS]);
    Lmsss::new(f, vec![1; SERVERS], g, ht, 1)
}

pub fn cnf_witness_check() -> Result<CnfWitnessReport> {
    let l = one_bit_lmsss()?;
    let f = l.field.clone();
    let mut correct = true;
    let mut hist = vec![[[0u32; 2]; 16]; SERVERS];
    for xs in 0..16u32 {
        let x: Vec<Fe> = (0..SECRETS).map(|j| xs >> j & 1).collect();
        for r in 0..2 {
            let sh = l.share(&x, &[r])?;
            let y: Vec<Fe> = sh.flat();
            let rec: Vec<Fe> = (1..SERVERS).map(|i| f.add(y[0], y[i])).collect();
            correct &= rec == x;
            for i in 0..SERVERS {
                hist[i][xs as usize][y[i] as usize] += 1;
            }
        }
    }
    let private = hist.iter().all(|h| h.iter().all(|c| *c == [1, 1]));
    // the concatenation scheme: CNF-share each bit, convert to the LMSSS
    let conv = CnfToTarget::new(SERVERS, 1, l.clone())?;
    let sets = cnf_sets(SERVERS, 1);
    let width = sets.len();
    let mut ws = vec![0u32; SERVERS];
    for coord in 0..SECRETS * width {
        // input coordinates per block: the secret, then the first 4 pieces
        let mut x = [0 as Fe; SECRETS];
        let mut r = vec![vec![0 as Fe; width - 1]; SECRETS];
        let (blk, pos) = (coord / width, coord % width);
        if pos == 0 {
            x[blk] = 1;
        } else {
            r[blk][pos - 1] = 1;
        }
        let pieces: Vec<Vec<Fe>> = (0..SECRETS).map(|j| cnf_pieces(&f, x[j], SERVERS, 1, &r[j])).collect::<Result<_>>()?;
        for (i, w) in ws.iter_mut().enumerate() {
            let held: Vec<Vec<Fe>> = pieces
                .iter()
                .map(|p| sets.iter().zip(p).filter(|(s, _)| !s.contains(&i)).map(|(_, &v)| v).collect())
                .collect();
            let out = conv.convert_party(i, &held);
            *w |= out[0] << coord;
        }
    }
    let coords: Vec<usize> = (0..SECRETS).map(|j| j * width).collect();
    let hss_valid = secrets_in_span(&ws, &coords);
    Ok(CnfWitnessReport { correct, private, hss_valid, download_bits: SERVERS, rate: Ratio::new(SECRETS as u64, SERVERS as u64) })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonMdsPoint {
    pub k: usize,
    pub b: usize,
    pub ell: usize,
    pub t: usize,
    /// 2^b < k/2 and ℓ < kb - 1.
    pub applicable: bool,
    /// Some F_2-linear code of length k over F_2^b with dimension ℓ and
    /// distance ≥ t+1 meets ℓ = b(k-t).
    pub singleton_attained: bool,
    pub codes_checked: u64,
}

impl NonMdsPoint {
    /// The rate bound 1 - t/k is strict at this point.
    pub fn strict(&self) -> bool {
        !self.singleton_attained
    }
}

pub const CODE_BUDGET: u64 = 1 << 26;

/// A code meeting ℓ = b(k-t) with distance t+1 is systematic on any k-t
/// symbols, so it is the graph of an F_2-linear map F_2^{b(k-t)} → F_2^{bt};
/// every such map is tried.
pub fn corollary_nonmds_check(grid: &[(usize, usize, usize, usize)]) -> Result<Vec<NonMdsPoint>> {
    let mut out = Vec::new();
    for &(k, b, ell, t) in grid {
        if b == 0 || t == 0 || t >= k || k * b > 14 {
            return Err(invalid!("grid point (k={k}, b={b}, t={t}) outside the searchable range"));
        }
        let applicable = (1usize << b) * 2 < k && ell + 1 < k * b;
        if ell != b * (k - t) {
            out.push(NonMdsPoint { k, b, ell, t, applicable, singleton_attained: false, codes_checked: 0 });
            continue;
        }
        let (info, red) = (b * (k - t), b * t);
        let maps = 1u64
            .checked_shl((info * red) as u32)
            .filter(|&m| m <= CODE_BUDGET)
            .ok_or_else(|| Error::Budget(alloc::format!("2^{} parity maps", info * red)))?;
        let mut attained = false;
        let mut checked = 0;
        for a in 0..maps {
            checked += 1;
            // column c of A: bits c*red..(c+1)*red
            let col = |c: usize| ((a >> (c * red)) & ((1 << red) - 1)) as u32;
            let ok = (1u32..1 << info).all(|u| {
                let par = (0..info).filter(|&c| u >> c & 1 == 1).fold(0, |acc, c| acc ^ col(c));
                let sym = |v: u32, n: usize| (0..n).filter(|&s| (v >> (s * b)) & ((1 << b) - 1) != 0).count();
                sym(u, k - t) + sym(par, t) > t
            });
            if ok {
                attained = true;
                break;
            }
        }
        out.push(NonMdsPoint { k, b, ell, t, applicable, singleton_attained: attained, codes_checked: checked });
    }
    Ok(out)
}

/// Whether 2^k · Σ_{i≤e} C(n,i) ≤ 2^n for e = ⌊(d-1)/2⌋.
pub fn hamming_bound_allows(n: usize, k: usize, d: usize) -> bool {
    let e = (d - 1) / 2;
    let ball: u64 = (0..=e).map(|i| crate::combi::binom(n as u64, i as u64)).sum();
    (ball << k) <= 1u64 << n
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RateBoundRow {
    pub family: String,
    pub t: usize,
    pub k: usize,
    pub d: usize,
    pub field: u32,
    pub measured: Ratio<u64>,
    pub bound: Ratio<u64>,
}

impl RateBoundRow {
    pub fn ok(&self) -> bool {
        self.measured <= self.bound
    }
}

/// Builds CNF and Shamir schemes across small (t, k, d, F) until `points`
/// rows exist, recording measured rate against 1 - dt/k.
pub fn rate_bound_grid(points: usize) -> Result<Vec<RateBoundRow>> {
    let mut rows = Vec::new();
    for k in 2..=8usize {
        for t in 1..k {
            for d in 1..=3usize {
                if d * t >= k {
                    continue;
                }
                let bound = rate_bound_linear(t, k, d)?;
                for q in [2u64, 3, 4, 5, 7, 8] {
                    let field: Field = Arc::new(FieldCtx::of_order(q)?);
                    if let Ok(h) = boxed_cnf(t, k, d, d, 1, field.clone()) {
                        rows.push(RateBoundRow { family: "cnf".into(), t, k, d, field: q as u32, measured: h.rate(), bound });
                    }
                    if let Ok(h) = ShamirHss::new(t, k, d, d, field, 1) {
                        rows.push(RateBoundRow { family: "shamir".into(), t, k, d, field: q as u32, measured: h.rate(), bound });
                    }
                    if rows.len() >= points {
                        return Ok(rows);
                    }
                }
            }
        }
    }
    Ok(rows)
}
