//! Subsets, binomials and mixed-radix counters.

use alloc::vec;
use alloc::vec::Vec;

pub fn binom(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
    }
    r as u64
}

/// All k-subsets of 0..n in lexicographic order, as sorted index vectors.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < n - k + i {
                break;
            }
            if i == 0 && cur[0] >= n - k {
                return out;
            }
        }
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

pub fn mask_of(set: &[usize]) -> u64 {
    set.iter().fold(0, |m, &i| m | 1 << i)
}

pub fn set_of(mask: u64) -> Vec<usize> {
    (0..64).filter(|i| mask >> i & 1 == 1).collect()
}

/// The `index`-th weight-d subset of 0..m in colexicographic order.
pub fn colex_unrank(mut index: u64, d: usize) -> Vec<usize> {
    let mut out = vec![0; d];
    for pos in (0..d).rev() {
        let k = pos as u64 + 1;
        let mut c = pos as u64;
        while binom(c + 1, k) <= index {
            c += 1;
        }
        out[pos] = c as usize;
        index -= binom(c, k);
    }
    out
}

pub fn colex_rank(set: &[usize]) -> u64 {
    set.iter().enumerate().map(|(i, &c)| binom(c as u64, i as u64 + 1)).sum()
}

/// Digits of a mixed-radix counter, least significant first.
pub fn mixed_digits(mut v: u64, radices: &[u64]) -> Vec<u64> {
    radices
        .iter()
        .map(|&r| {
            let d = v % r;
            v /= r;
            d
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binom(5, 2), 10);
        assert_eq!(binom(8, 2), 28);
        assert_eq!(binom(3, 5), 0);
        assert_eq!(binom(29, 2), 406);
    }

    #[test]
    fn subset_enumeration() {
        for n in 0..8 {
            for k in 0..=n {
                let s = subsets(n, k);
                assert_eq!(s.len() as u64, binom(n as u64, k as u64));
                let mut seen = alloc::collections::BTreeSet::new();
                for v in &s {
                    assert!(v.windows(2).all(|w| w[0] < w[1]));
                    assert!(seen.insert(mask_of(v)));
                }
            }
        }
        assert_eq!(subsets(3, 2), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
    }

    #[test]
    fn colex_roundtrip() {
        for d in 1..4 {
            for i in 0..200u64 {
                let s = colex_unrank(i, d);
                assert_eq!(s.len(), d);
                assert!(s.windows(2).all(|w| w[0] < w[1]));
                assert_eq!(colex_rank(&s), i);
            }
        }
        assert_eq!(colex_unrank(0, 2), vec![0, 1]);
        assert_eq!(colex_unrank(1, 2), vec![0, 2]);
        assert_eq!(colex_unrank(2, 2), vec![1, 2]);
        assert_eq!(colex_unrank(3, 2), vec![0, 3]);
    }
}
