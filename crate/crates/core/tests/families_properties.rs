mod common;

use std::collections::{BTreeSet, HashSet};

use cfsym::families::{
    a_plus, concluding_family, for_each_tuple, is_s_stable, is_stable, stable_family, stable_step, FamilySpec,
};
use cfsym::{BigUint, DigitString};

fn ds(d: &[u64]) -> DigitString {
    DigitString::from_u64s(d).unwrap()
}

fn u(a: &DigitString) -> Vec<u64> {
    a.to_u64s().unwrap()
}

/// The closed forms for lengths 2 to 7, written out by hand.
fn closed_form(n: usize, t: &[u64]) -> Vec<u64> {
    match n {
        2 => vec![t[0], 2 * t[0]],
        3 => vec![t[0], 1, 2 * t[0] + 1],
        4 => vec![t[1], 2 * t[0], t[0], 2 * t[1]],
        5 => vec![t[1], 2 * t[0] + 1, 1, t[0], 2 * t[1]],
        6 => vec![t[2], 2 * t[1], t[0], 2 * t[0], t[1], 2 * t[2]],
        7 => vec![t[2], 2 * t[1], t[0], 1, 2 * t[0] + 1, t[1], 2 * t[2]],
        _ => unreachable!(),
    }
}

fn oracle_stable(d: &[u64]) -> bool {
    let (_, p, qp, _) = common::convergents(d);
    p == 2 * qp
}

#[test]
fn generated_strings_match_closed_forms() {
    for n in 2..=7 {
        let max = if n >= 6 { 12 } else { 30 };
        for_each_tuple(n / 2, max, |t| {
            let a = stable_family(&FamilySpec::stable(n, t)).unwrap();
            let expect = closed_form(n, t);
            assert_eq!(u(&a), expect, "n={n} t={t:?}");
            assert!(oracle_stable(&expect));
        });
    }
}

#[test]
fn stability_is_closed_under_the_step() {
    let k = BigUint::from(2u32);
    let seeds: Vec<DigitString> = (1..=6)
        .flat_map(|t| [ds(&[t, 2 * t]), ds(&[t, 1, 2 * t + 1])])
        .chain([ds(&[2, 2, 1, 4]), ds(&[1, 3, 1, 1, 2])])
        .collect();
    for a in seeds {
        assert!(is_stable(&a));
        for t in 1..=100 {
            let b = stable_step(&a, t, &k);
            assert!(oracle_stable(&u(&b)), "{b}");
            assert!(is_stable(&b));
        }
    }
}

#[test]
fn s_stable_seeds_and_step() {
    for s in 1..=10u64 {
        let k = s * s + s;
        for t in 1..=50 {
            for seed in [vec![t, k * t], vec![t, k - 1, k * t + 1]] {
                let (_, p, qp, _) = common::convergents(&seed);
                assert_eq!(p, k as u128 * qp, "s={s} seed={seed:?}");
                let a = ds(&seed);
                assert!(is_s_stable(&a, s));
                for t2 in [1, 7, t] {
                    let b = stable_step(&a, t2, &BigUint::from(k));
                    assert!(is_s_stable(&b, s), "s={s} {b}");
                }
            }
        }
    }
}

#[test]
fn a_plus_pairs_are_nontrivial() {
    let mut seen = HashSet::new();
    for n in 2..=5 {
        for_each_tuple(n / 2, 20, |t| {
            let a = stable_family(&FamilySpec::stable(n, t)).unwrap();
            let (p, s) = a_plus(&a).unwrap();
            let (pd, sd) = (u(&p), u(&s));
            assert_eq!(common::chi(&pd), common::chi(&sd));
            let mut x = pd.clone();
            let mut y = sd.clone();
            x.sort();
            y.sort();
            assert_eq!(x, y);
            assert_ne!(pd, sd);
            assert_ne!(pd.iter().rev().copied().collect::<Vec<_>>(), sd);
            assert!(seen.insert(pd), "a -> a+ must be injective");
        });
    }
}

#[test]
fn distinct_digit_recipe() {
    let pool: Vec<u64> = (0..8).map(|i| 5 + 4 * i).collect();
    for n in [2usize, 4, 6] {
        let m = n / 2;
        for_each_tuple(m, pool.len() as u64, |idx| {
            let t: Vec<u64> = idx.iter().map(|&i| pool[i as usize - 1]).collect();
            if t.iter().collect::<BTreeSet<_>>().len() != m {
                return;
            }
            let a = stable_family(&FamilySpec::stable(n, &t)).unwrap();
            let (p, _) = a_plus(&a).unwrap();
            let d = u(&p);
            let distinct: BTreeSet<_> = d.iter().collect();
            assert_eq!(distinct.len(), d.len(), "{p}");
        });
    }
}

#[test]
fn concluding_family_up_to_100() {
    for t in 1..=100u64 {
        let (a, b) = concluding_family(t).unwrap();
        assert_eq!(u(&a), vec![t + 1, 1, t + 3, t + 2]);
        assert_eq!(u(&b), vec![t + 2, 1, t + 1, t + 3]);
        assert_eq!(common::chi(&u(&a)), common::chi(&u(&b)));
    }
}
