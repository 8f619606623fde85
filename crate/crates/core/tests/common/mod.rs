//! Reference implementations for the integration tests. They use the plain
//! convergent recurrence and naive scans, sharing no code with the library.
#![allow(dead_code)]

use std::collections::{BTreeMap, HashSet};

/// `(p', p, q', q)` from `p_k = a_k p_{k-1} + p_{k-2}`.
pub fn convergents(d: &[u64]) -> (u128, u128, u128, u128) {
    // p_{-1} = 1, p_0 = 0; q_{-1} = 0, q_0 = 1
    let (mut p2, mut p1) = (1u128, 0u128);
    let (mut q2, mut q1) = (0u128, 1u128);
    for &a in d {
        let a = a as u128;
        let p = a * p1 + p2;
        let q = a * q1 + q2;
        p2 = p1;
        p1 = p;
        q2 = q1;
        q1 = q;
    }
    (p2, p1, q2, q1)
}

pub fn chi(d: &[u64]) -> u128 {
    let (_, p, qp, q) = convergents(d);
    (p + q) * (qp + q)
}

/// Distinct characteristic numbers over all `n!` orderings of `set`.
pub fn nu(set: &[u64]) -> usize {
    let mut seen = HashSet::new();
    permutations(set, &mut |perm| {
        seen.insert(chi(perm));
    });
    seen.len()
}

pub fn half_factorial(n: usize) -> usize {
    (1..=n).product::<usize>() / 2
}

/// Heap's algorithm.
pub fn permutations(set: &[u64], f: &mut impl FnMut(&[u64])) {
    let mut a = set.to_vec();
    let n = a.len();
    let mut c = vec![0usize; n];
    f(&a);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            f(&a);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

pub fn subsets(n: usize, big_n: u64, f: &mut impl FnMut(&[u64])) {
    fn rec(start: u64, big_n: u64, left: usize, cur: &mut Vec<u64>, f: &mut impl FnMut(&[u64])) {
        if left == 0 {
            f(cur);
            return;
        }
        for x in start..=big_n {
            cur.push(x);
            rec(x + 1, big_n, left - 1, cur, f);
            cur.pop();
        }
    }
    rec(1, big_n, n, &mut Vec::new(), f);
}

/// `f(N, n)` for every `N <= big_n` by full scan.
pub fn naive_census(n: usize, big_n: u64) -> BTreeMap<u64, u64> {
    let mut by_max = BTreeMap::new();
    subsets(n, big_n, &mut |s| {
        if nu(s) < half_factorial(n) {
            *by_max.entry(*s.last().unwrap()).or_insert(0u64) += 1;
        }
    });
    let mut acc = 0;
    (n as u64..=big_n)
        .map(|m| {
            acc += by_max.get(&m).copied().unwrap_or(0);
            (m, acc)
        })
        .collect()
}

pub fn binomial(n: u64, k: u64) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}
