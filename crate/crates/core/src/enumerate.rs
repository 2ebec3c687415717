//! Exhaustive enumeration of F_p-linear images, used by every exact audit.
//!
//! A linear sharing (or any map linear over the prime field) is described by
//! an offset vector plus generator vectors, one per prime-field coordinate of
//! its input. Walking a base-p counter and adding one generator per digit
//! step visits every image with O(1) amortised vector additions.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::galois::{Fe, FieldCtx};

/// Calls `visit` on `base + Σ d_i gens[i]` for every d in F_p^n, in counter order.
pub fn for_each_combination(f: &FieldCtx, base: &[Fe], gens: &[Vec<Fe>], mut visit: impl FnMut(&[Fe])) {
    let p = f.p();
    let mut cur = base.to_vec();
    let mut digits = vec![0u32; gens.len()];
    loop {
        visit(&cur);
        let mut i = 0;
        loop {
            if i == gens.len() {
                return;
            }
            add_into(f, &mut cur, &gens[i]);
            digits[i] += 1;
            if digits[i] < p {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

#[inline]
pub fn add_into(f: &FieldCtx, acc: &mut [Fe], v: &[Fe]) {
    for (a, &b) in acc.iter_mut().zip(v) {
        *a = f.add(*a, b);
    }
}

/// Prime-field basis of F_q as field elements: 1, x, x^2, ... (encodings p^j).
pub fn prime_basis(f: &FieldCtx) -> Vec<Fe> {
    (0..f.s()).map(|j| f.p().pow(j)).collect()
}

/// Generators for a vector variable v ∈ F_q^n entering linearly through `cols`
/// (column i is the image of the unit vector e_i): one generator per prime-field
/// coordinate of each entry.
pub fn expand_generators(f: &FieldCtx, cols: &[Vec<Fe>]) -> Vec<Vec<Fe>> {
    let basis = prime_basis(f);
    let mut out = Vec::with_capacity(cols.len() * basis.len());
    for c in cols {
        for &b in &basis {
            out.push(c.iter().map(|&v| f.mul(v, b)).collect());
        }
    }
    out
}

/// Packs a short vector of field elements into one integer key.
pub fn pack(f: &FieldCtx, v: &[Fe]) -> u128 {
    let bits = f.bits().max(1);
    v.iter().fold(0u128, |acc, &x| (acc << bits) | x as u128)
}

pub fn check_packable(f: &FieldCtx, len: usize) -> Result<()> {
    if len as u32 * f.bits().max(1) > 128 {
        return Err(Error::Budget(alloc::format!("view of {len} symbols does not fit a 128-bit key")));
    }
    Ok(())
}

/// Sorted multiset of packed views over all randomness.
pub fn view_multiset(f: &FieldCtx, base: &[Fe], gens: &[Vec<Fe>]) -> Vec<u128> {
    let mut out = Vec::with_capacity((f.p() as usize).pow(gens.len() as u32));
    for_each_combination(f, base, gens, |v| out.push(pack(f, v)));
    out.sort_unstable();
    out
}

/// Number of states p^n, or None if above `limit`.
pub fn state_count(p: u32, n: usize, limit: u64) -> Option<u64> {
    let mut c: u64 = 1;
    for _ in 0..n {
        c = c.checked_mul(p as u64)?;
        if c > limit {
            return None;
        }
    }
    Some(c)
}

/// All points of F_p^n with at most `w` nonzero coordinates, as sparse
/// (index, value) lists. Values range over 1..p.
///
/// A reduced polynomial of total degree ≤ w over F_p is zero everywhere iff it
/// vanishes on these points, which turns a degree bound into an exhaustive
/// correctness certificate.
pub fn low_weight_points(p: u32, n: usize, w: usize, mut visit: impl FnMut(&[(usize, u32)])) {
    let mut support: Vec<(usize, u32)> = Vec::new();
    fn rec(p: u32, n: usize, w: usize, start: usize, support: &mut Vec<(usize, u32)>, visit: &mut dyn FnMut(&[(usize, u32)])) {
        visit(support);
        if support.len() == w {
            return;
        }
        for i in start..n {
            for v in 1..p {
                support.push((i, v));
                rec(p, n, w, i + 1, support, visit);
                support.pop();
            }
        }
    }
    rec(p, n, w, 0, &mut support, &mut visit);
}
