//! Constructive families of strings with nontrivial symmetries.
//!
//! A string is *stable* when its convergent matrix has `p = 2q'`, and
//! *s-stable* when `p = (s^2 + s) q'`. Stable strings of every length come
//! from two seeds and the step `a -> (t, reverse(a), 2t)`; each stable `a`
//! yields `a+ = (2, 1, a1, ..., a_{n-1}, a_n + 1)`, whose tail reversal
//! `(2, a_n + 1, a_{n-1}, ..., a1, 1)` shares its frequency.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;

use crate::cf::{convergent_matrix, DigitString};
use crate::error::{Error, Result};
use crate::measure::{chi, measure_equal};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyKind {
    Stable,
    SStable,
    APlus,
    Concluding,
}

impl FromStr for FamilyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "stable" => Ok(FamilyKind::Stable),
            "s_stable" | "s-stable" => Ok(FamilyKind::SStable),
            "a_plus" | "a-plus" | "aplus" => Ok(FamilyKind::APlus),
            "concluding" => Ok(FamilyKind::Concluding),
            other => Err(Error::InvalidArgument(format!("unknown family kind `{other}`"))),
        }
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FamilyKind::Stable => "stable",
            FamilyKind::SStable => "s_stable",
            FamilyKind::APlus => "a_plus",
            FamilyKind::Concluding => "concluding",
        })
    }
}

/// A member of one of the families, named by its parameters.
///
/// `params` are `t1, t2, ...`; stable and s-stable strings of length `n`
/// take `n/2` of them (rounded down), `a+` strings of length `n` take
/// `(n-2)/2`, and the concluding family takes exactly one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilySpec {
    pub kind: FamilyKind,
    pub n: usize,
    pub params: Vec<u64>,
    pub s: u64,
}

impl FamilySpec {
    pub fn stable(n: usize, params: &[u64]) -> Self {
        FamilySpec { kind: FamilyKind::Stable, n, params: params.to_vec(), s: 1 }
    }

    pub fn s_stable(n: usize, params: &[u64], s: u64) -> Self {
        FamilySpec { kind: FamilyKind::SStable, n, params: params.to_vec(), s }
    }

    pub fn expected_params(&self) -> usize {
        match self.kind {
            FamilyKind::Stable | FamilyKind::SStable => self.n / 2,
            FamilyKind::APlus => self.n.saturating_sub(2) / 2,
            FamilyKind::Concluding => 1,
        }
    }

    fn validate(&self) -> Result<()> {
        let min_len = match self.kind {
            FamilyKind::Stable | FamilyKind::SStable => 2,
            FamilyKind::APlus | FamilyKind::Concluding => 4,
        };
        if self.n < min_len {
            return Err(Error::InvalidArgument(format!(
                "{} strings need length at least {min_len}, got {}",
                self.kind, self.n
            )));
        }
        if self.kind == FamilyKind::Concluding && self.n != 4 {
            return Err(Error::InvalidArgument("the concluding family has length 4".into()));
        }
        if self.params.len() != self.expected_params() {
            return Err(Error::InvalidArgument(format!(
                "{} strings of length {} take {} parameter(s), got {}",
                self.kind,
                self.n,
                self.expected_params(),
                self.params.len()
            )));
        }
        if self.params.iter().any(|&t| t == 0) || self.s == 0 {
            return Err(Error::InvalidArgument("family parameters must be positive".into()));
        }
        Ok(())
    }

    /// The family member, paired with its nontrivial symmetry for the
    /// `a_plus` and `concluding` kinds.
    pub fn build(&self) -> Result<(DigitString, Option<DigitString>)> {
        self.validate()?;
        match self.kind {
            FamilyKind::Stable | FamilyKind::SStable => Ok((stable_family(self)?, None)),
            FamilyKind::APlus => {
                let base = FamilySpec::stable(self.n - 2, &self.params);
                let (plus, sigma) = a_plus(&stable_family(&base)?)?;
                Ok((plus, Some(sigma)))
            }
            FamilyKind::Concluding => {
                let (a, b) = concluding_family(self.params[0])?;
                Ok((a, Some(b)))
            }
        }
    }
}

fn big(x: u64) -> BigUint {
    BigUint::from(x)
}

pub fn is_stable(a: &DigitString) -> bool {
    let c = convergent_matrix(a);
    c.p == &c.q_prev * 2u32
}

/// `p = (s^2 + s) q'`; `s = 1` is plain stability.
pub fn is_s_stable(a: &DigitString, s: u64) -> bool {
    let c = convergent_matrix(a);
    let k = big(s) * big(s) + big(s);
    c.p == k * &c.q_prev
}

/// One inductive step: `(t, reverse(a), k t)`.
pub fn stable_step(a: &DigitString, t: u64, k: &BigUint) -> DigitString {
    let mut d = Vec::with_capacity(a.len() + 2);
    d.push(big(t));
    d.extend(a.digits().iter().rev().cloned());
    d.push(k * t);
    DigitString::new(d).expect("positive digits")
}

/// Stable (or s-stable) string of length `n` from parameters `t1, t2, ...`:
/// the seed `(t1, k t1)` or `(t1, k - 1, k t1 + 1)` with `k = s^2 + s`,
/// followed by one step per further parameter. Every result is checked
/// against the defining identity before it is returned.
pub fn stable_family(spec: &FamilySpec) -> Result<DigitString> {
    let s = match spec.kind {
        FamilyKind::Stable => 1,
        FamilyKind::SStable => spec.s,
        other => {
            return Err(Error::InvalidArgument(format!("stable_family does not build `{other}` strings")));
        }
    };
    spec.validate()?;
    let k = big(s) * big(s) + big(s);
    let t1 = spec.params[0];
    let mut a = if spec.n % 2 == 0 {
        DigitString::new(vec![big(t1), &k * t1]).expect("positive")
    } else {
        DigitString::new(vec![big(t1), &k - 1u32, &k * t1 + 1u32]).expect("positive")
    };
    for &t in &spec.params[1..] {
        a = stable_step(&a, t, &k);
    }
    debug_assert_eq!(a.len(), spec.n);
    if !is_s_stable(&a, s) {
        let c = convergent_matrix(&a);
        return Err(Error::VerificationFailed(format!(
            "{a} is not {s}-stable: p = {}, q' = {}",
            c.p, c.q_prev
        )));
    }
    Ok(a)
}

/// `a+` and its nontrivial symmetry for a stable string `a`.
pub fn a_plus(a: &DigitString) -> Result<(DigitString, DigitString)> {
    if !is_stable(a) {
        let c = convergent_matrix(a);
        return Err(Error::NotStable { p: c.p.to_string(), twice_q_prev: (&c.q_prev * 2u32).to_string() });
    }
    let d = a.digits();
    let n = d.len();
    let mut last = d[n - 1].clone();
    last += 1u32;

    let mut plus = vec![big(2), BigUint::one()];
    plus.extend(d[..n - 1].iter().cloned());
    plus.push(last.clone());

    let mut sigma = vec![big(2), last];
    sigma.extend(d[..n - 1].iter().rev().cloned());
    sigma.push(BigUint::one());

    let plus = DigitString::new(plus).expect("positive");
    let sigma = DigitString::new(sigma).expect("positive");
    check_nontrivial_pair(&plus, &sigma)?;
    Ok((plus, sigma))
}

/// `(t+1, 1, t+3, t+2)` and its symmetry `(t+2, 1, t+1, t+3)`.
pub fn concluding_family(t: u64) -> Result<(DigitString, DigitString)> {
    if t == 0 {
        return Err(Error::InvalidArgument("t must be positive".into()));
    }
    let t = big(t);
    let one = BigUint::one();
    let a = DigitString::new(vec![&t + 1u32, one.clone(), &t + 3u32, &t + 2u32]).expect("positive");
    let b = DigitString::new(vec![&t + 2u32, one, &t + 1u32, &t + 3u32]).expect("positive");
    check_nontrivial_pair(&a, &b)?;
    Ok((a, b))
}

/// First nontrivial symmetry of `candidate` found by enumerating its
/// permutations. For constructions with no closed-form partner, such as
/// `a+`-style strings built from s-stable strings.
pub fn search_symmetry(candidate: &DigitString, max_len: usize) -> Result<Option<DigitString>> {
    Ok(crate::symmetry::nontrivial_symmetries(candidate, max_len)?.into_iter().next())
}

/// Bounds for [`verify_families`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyBounds {
    /// Stable lengths checked are `2..=max_len`.
    pub max_len: usize,
    pub max_param: u64,
    pub max_concluding_t: u64,
    pub max_s: u64,
    pub max_s_param: u64,
}

impl Default for VerifyBounds {
    fn default() -> Self {
        VerifyBounds { max_len: 7, max_param: 50, max_concluding_t: 100, max_s: 10, max_s_param: 50 }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FamilyVerification {
    pub stable_checked: u64,
    pub a_plus_checked: u64,
    pub concluding_checked: u64,
    pub s_stable_checked: u64,
    pub failures: Vec<String>,
}

impl FamilyVerification {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Calls `f` on every tuple in `{1..=max}^k`, in lexicographic order.
pub fn for_each_tuple(k: usize, max: u64, mut f: impl FnMut(&[u64])) {
    if max == 0 {
        return;
    }
    let mut t = vec![1u64; k];
    loop {
        f(&t);
        let Some(i) = t.iter().rposition(|&x| x < max) else { return };
        t[i] += 1;
        t[i + 1..].iter_mut().for_each(|x| *x = 1);
    }
}

/// Builds every stable family member, its `a+` pair, the concluding family
/// and the s-stable seeds plus one inductive step within `bounds`, and
/// checks each construction.
pub fn verify_families(bounds: &VerifyBounds) -> FamilyVerification {
    let mut v = FamilyVerification::default();
    for n in 2..=bounds.max_len {
        for_each_tuple(n / 2, bounds.max_param, |params| {
            v.stable_checked += 1;
            match stable_family(&FamilySpec::stable(n, params)) {
                Ok(a) => {
                    v.a_plus_checked += 1;
                    if let Err(e) = a_plus(&a) {
                        v.failures.push(format!("a+ of {a}: {e}"));
                    }
                }
                Err(e) => v.failures.push(format!("stable n={n} {params:?}: {e}")),
            }
        });
    }
    for t in 1..=bounds.max_concluding_t {
        v.concluding_checked += 1;
        if let Err(e) = concluding_family(t) {
            v.failures.push(format!("concluding t={t}: {e}"));
        }
    }
    for s in 1..=bounds.max_s {
        for n in [2usize, 3, 4, 5] {
            for_each_tuple(n / 2, bounds.max_s_param, |params| {
                v.s_stable_checked += 1;
                if let Err(e) = stable_family(&FamilySpec::s_stable(n, params, s)) {
                    v.failures.push(format!("{s}-stable n={n} {params:?}: {e}"));
                }
            });
        }
    }
    v
}

fn check_nontrivial_pair(a: &DigitString, b: &DigitString) -> Result<()> {
    let mut da = a.digits().to_vec();
    let mut db = b.digits().to_vec();
    da.sort();
    db.sort();
    if da != db || b == a || *b == a.reversed() || !measure_equal(a, b) {
        return Err(Error::VerificationFailed(format!(
            "{b} is not a nontrivial symmetry of {a} (chi {} vs {})",
            chi(a).value,
            chi(b).value
        )));
    }
    Ok(())
}
