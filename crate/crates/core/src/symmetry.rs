//! Permutation symmetries of digit strings.
//!
//! Every permutation of a string has the same length, hence the same parity,
//! so two of them have equal frequency exactly when their characteristic
//! numbers agree. All scans below therefore compare `chi` keys.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::cf::DigitString;
use crate::error::{Error, Result};
use crate::fast::ChiKey;
use crate::measure::chi;

/// Longest string scanned by default; the work grows like `n!`.
pub const DEFAULT_MAX_LEN: usize = 10;

/// Rearranges `v` into the next lexicographically greater permutation.
/// Returns `false` (leaving `v` sorted ascending) after the last one.
/// Repeated elements are handled, so each distinct arrangement of a multiset
/// is visited once.
pub fn next_permutation<T: Ord>(v: &mut [T]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        v.reverse();
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Machine-word digits when they fit, big ones otherwise.
enum Digits {
    Small(Vec<u64>),
    Big(Vec<BigUint>),
}

impl Digits {
    fn of(a: &DigitString) -> Digits {
        match a.to_u64s() {
            Some(v) => Digits::Small(v),
            None => Digits::Big(a.digits().to_vec()),
        }
    }
}

fn chi_key_big(d: &[BigUint]) -> ChiKey {
    let s = DigitString::new(d.to_vec()).expect("permutation of a valid string");
    let v = chi(&s).value;
    match v.to_u128() {
        Some(x) => ChiKey::Small(x),
        None => ChiKey::Big(v),
    }
}

fn check_len(n: usize, max_len: usize) -> Result<()> {
    if n > max_len {
        return Err(Error::SizeLimit {
            what: "string length",
            got: n.to_string(),
            limit: max_len.to_string(),
        });
    }
    Ok(())
}

/// Visits every distinct arrangement of the multiset `sorted` whose first
/// element is `sorted[first]`, in lexicographic order.
fn for_each_with_first<T: Ord + Clone>(sorted: &[T], first: usize, mut f: impl FnMut(&[T])) {
    let mut buf: Vec<T> = Vec::with_capacity(sorted.len());
    buf.push(sorted[first].clone());
    buf.extend(sorted[..first].iter().cloned());
    buf.extend(sorted[first + 1..].iter().cloned());
    loop {
        f(&buf);
        if !next_permutation(&mut buf[1..]) {
            break;
        }
    }
}

/// Indices of the distinct values of a sorted slice.
fn distinct_heads<T: PartialEq>(sorted: &[T]) -> Vec<usize> {
    (0..sorted.len()).filter(|&i| i == 0 || sorted[i] != sorted[i - 1]).collect()
}

/// All distinct permutations `b` of `a` with the same frequency as `a`,
/// `b != a` and `b != reverse(a)`, in lexicographic order.
pub fn nontrivial_symmetries(a: &DigitString, max_len: usize) -> Result<Vec<DigitString>> {
    check_len(a.len(), max_len)?;
    let rev = a.reversed();
    let out: Vec<DigitString> = match Digits::of(a) {
        Digits::Small(d) => {
            let target = ChiKey::of(&d);
            let mut sorted = d.clone();
            sorted.sort_unstable();
            let rev_d = rev.to_u64s().expect("same digits");
            let heads = distinct_heads(&sorted);
            let chunks: Vec<Vec<Vec<u64>>> = heads
                .par_iter()
                .map(|&h| {
                    let mut found = Vec::new();
                    for_each_with_first(&sorted, h, |perm| {
                        if perm != d.as_slice() && perm != rev_d.as_slice() && ChiKey::of(perm) == target {
                            found.push(perm.to_vec());
                        }
                    });
                    found
                })
                .collect();
            chunks
                .into_iter()
                .flatten()
                .map(|p| DigitString::from_u64s(&p).expect("positive digits"))
                .collect()
        }
        Digits::Big(d) => {
            let target = chi_key_big(&d);
            let mut sorted = d.clone();
            sorted.sort_unstable();
            let mut found = Vec::new();
            for h in distinct_heads(&sorted) {
                for_each_with_first(&sorted, h, |perm| {
                    if perm != d.as_slice() && perm != rev.digits() && chi_key_big(perm) == target {
                        found.push(DigitString::new(perm.to_vec()).expect("positive digits"));
                    }
                });
            }
            found
        }
    };
    Ok(out)
}

fn distinct_sorted(set: &DigitString, max_len: usize) -> Result<Vec<BigUint>> {
    let n = set.len();
    if n < 2 {
        return Err(Error::InvalidArgument("a digit set needs at least 2 elements".into()));
    }
    check_len(n, max_len)?;
    let mut sorted = set.digits().to_vec();
    sorted.sort();
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::RepeatedDigit { digit: w[0].to_string() });
    }
    Ok(sorted)
}

/// Characteristic numbers of the reversal-class representatives of a set of
/// distinct digits (orderings whose first digit is below the last), tagged
/// with the representative, grouped by key.
fn representative_classes(sorted: &[BigUint]) -> BTreeMap<ChiKey, Vec<Vec<BigUint>>> {
    let small: Option<Vec<u64>> = sorted.iter().map(ToPrimitive::to_u64).collect();
    let heads: Vec<usize> = (0..sorted.len()).collect();
    let groups: Vec<Vec<(ChiKey, Vec<BigUint>)>> = heads
        .par_iter()
        .map(|&h| {
            let mut local = Vec::new();
            match &small {
                Some(s) => for_each_with_first(s, h, |perm| {
                    if perm[0] < perm[perm.len() - 1] {
                        let key = ChiKey::of(perm);
                        local.push((key, perm.iter().map(|&x| BigUint::from(x)).collect()));
                    }
                }),
                None => for_each_with_first(sorted, h, |perm| {
                    if perm[0] < perm[perm.len() - 1] {
                        local.push((chi_key_big(perm), perm.to_vec()));
                    }
                }),
            }
            local
        })
        .collect();
    let mut map: BTreeMap<ChiKey, Vec<Vec<BigUint>>> = BTreeMap::new();
    for (k, v) in groups.into_iter().flatten() {
        map.entry(k).or_default().push(v);
    }
    map
}

/// Distinct characteristic numbers over the representatives, without
/// materialising the orderings.
fn distinct_keys(sorted: &[BigUint]) -> usize {
    let small: Option<Vec<u64>> = sorted.iter().map(ToPrimitive::to_u64).collect();
    let Some(s) = small else {
        return representative_classes(sorted).len();
    };
    let mut keys: Vec<ChiKey> = (0..s.len())
        .into_par_iter()
        .map(|h| {
            let mut local = Vec::new();
            for_each_with_first(&s, h, |perm| {
                if perm[0] < perm[perm.len() - 1] {
                    local.push(ChiKey::of(perm));
                }
            });
            local
        })
        .flatten()
        .collect();
    keys.par_sort_unstable();
    keys.dedup();
    keys.len()
}

fn half_factorial(n: usize) -> u64 {
    (3..=n as u64).product::<u64>().max(1)
}

/// Number of distinct frequencies over all orderings of a set of distinct
/// digits. Depends only on the set, not on the order it is given in.
pub fn nu(set: &DigitString, max_len: usize) -> Result<u64> {
    let sorted = distinct_sorted(set, max_len)?;
    Ok(distinct_keys(&sorted) as u64)
}

/// `n!/2`, the largest possible value of [`nu`] for `n` distinct digits.
pub fn half_factorial_bound(n: usize) -> u64 {
    half_factorial(n)
}

/// Whether some ordering of the set has a nontrivial symmetry.
pub fn is_exceptional_set(set: &DigitString, max_len: usize) -> Result<bool> {
    let n = set.len();
    Ok(nu(set, max_len)? < half_factorial(n))
}

/// `1 - nu/(n!/2)`.
pub fn epsilon_defect(set: &DigitString, max_len: usize) -> Result<BigRational> {
    let n = set.len();
    let v = nu(set, max_len)?;
    let h = half_factorial(n);
    Ok(BigRational::new((h - v).into(), h.into()))
}

/// Pairs of distinct reversal-class representatives that share a
/// characteristic number, in lexicographic order. Empty iff the set is not
/// exceptional.
pub fn colliding_pairs(set: &DigitString, max_len: usize) -> Result<Vec<(DigitString, DigitString)>> {
    let sorted = distinct_sorted(set, max_len)?;
    let mut pairs = Vec::new();
    for group in representative_classes(&sorted).into_values() {
        let mut group = group;
        group.sort();
        for i in 0..group.len() {
            for j in i + 1..group.len() {
                let a = DigitString::new(group[i].clone()).expect("positive");
                let b = DigitString::new(group[j].clone()).expect("positive");
                pairs.push((a, b));
            }
        }
    }
    pairs.sort();
    Ok(pairs)
}

/// Everything known about the permutation symmetries of one string.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetryReport {
    pub subject: DigitString,
    pub nontrivial_partners: Vec<DigitString>,
    /// Only for strings of distinct digits.
    pub nu: Option<u64>,
    pub half_factorial_bound: Option<u64>,
    pub is_exceptional: bool,
}

pub fn report(a: &DigitString, max_len: usize) -> Result<SymmetryReport> {
    let partners = nontrivial_symmetries(a, max_len)?;
    let mut sorted = a.digits().to_vec();
    sorted.sort();
    let distinct = a.len() >= 2 && sorted.windows(2).all(|w| w[0] != w[1]);
    let (nu_v, bound) = if distinct {
        (Some(nu(a, max_len)?), Some(half_factorial(a.len())))
    } else {
        (None, None)
    };
    Ok(SymmetryReport {
        subject: a.clone(),
        is_exceptional: !partners.is_empty(),
        nontrivial_partners: partners,
        nu: nu_v,
        half_factorial_bound: bound,
    })
}

/// Exhaustive scan of the length-3 strings with digits in `1..=max_digit`;
/// returns those with a nontrivial symmetry.
pub fn scan_length3(max_digit: u64) -> Vec<DigitString> {
    (1..=max_digit)
        .into_par_iter()
        .flat_map_iter(|a| {
            let mut bad = Vec::new();
            for b in 1..=max_digit {
                for c in 1..=max_digit {
                    let s = [a, b, c];
                    let target = crate::fast::chi_u128(&s).expect("small");
                    let mut perm = s;
                    perm.sort_unstable();
                    loop {
                        if perm != s
                            && perm != [c, b, a]
                            && crate::fast::chi_u128(&perm).expect("small") == target
                        {
                            bad.push(DigitString::from_u64s(&s).expect("positive"));
                            break;
                        }
                        if !next_permutation(&mut perm) {
                            break;
                        }
                    }
                }
            }
            bad
        })
        .collect()
}
