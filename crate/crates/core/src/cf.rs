//! Continued-fraction fundamentals.
//!
//! A [`DigitString`] `(a1, ..., an)` stands for the finite continued fraction
//! `[0; a1, ..., an] = 1/(a1 + 1/(a2 + ... + 1/an))`. Its [`ConvergentMatrix`]
//! is the product of the factors `(0 1; 1 ai)` taken left to right, which
//! carries the last two convergents `p'/q'` and `p/q` in its columns.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A nonempty string of positive continued-fraction digits.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DigitString(Vec<BigUint>);

impl DigitString {
    pub fn new(digits: Vec<BigUint>) -> Result<Self> {
        if digits.is_empty() {
            return Err(Error::EmptyString);
        }
        if let Some(position) = digits.iter().position(Zero::is_zero) {
            return Err(Error::ZeroDigit { position });
        }
        Ok(DigitString(digits))
    }

    pub fn from_u64s(digits: &[u64]) -> Result<Self> {
        Self::new(digits.iter().map(|&d| BigUint::from(d)).collect())
    }

    pub fn digits(&self) -> &[BigUint] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Always false; kept for clippy's `len_without_is_empty`.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Length parity: `true` when the string has odd length.
    pub fn is_odd(&self) -> bool {
        self.0.len() % 2 == 1
    }

    pub fn reversed(&self) -> Self {
        let mut d = self.0.clone();
        d.reverse();
        DigitString(d)
    }

    /// Digits as machine words, or `None` if any digit exceeds `u64`.
    pub fn to_u64s(&self) -> Option<Vec<u64>> {
        self.0.iter().map(ToPrimitive::to_u64).collect()
    }

    /// The canonical form of the rational this string represents: a trailing
    /// digit 1 is merged into its predecessor, `[..., a, 1] = [..., a + 1]`.
    /// The one-digit string `(1)` is already canonical.
    pub fn canonicalize(&self) -> Self {
        let n = self.0.len();
        if n >= 2 && self.0[n - 1].is_one() {
            let mut d = self.0[..n - 1].to_vec();
            d[n - 2] += 1u32;
            DigitString(d)
        } else {
            self.clone()
        }
    }

    pub fn into_digits(self) -> Vec<BigUint> {
        self.0
    }
}

impl fmt::Display for DigitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, d) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for DigitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Parses comma-separated positive integers, e.g. `3,1,4`. Surrounding
/// parentheses and whitespace are tolerated.
impl FromStr for DigitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let body = s.trim().trim_start_matches('(').trim_end_matches(')');
        if body.trim().is_empty() {
            return Err(Error::EmptyString);
        }
        let digits = body
            .split(',')
            .map(|tok| {
                let tok = tok.trim();
                tok.parse::<BigUint>()
                    .map_err(|_| Error::InvalidArgument(format!("`{tok}` is not a positive integer")))
            })
            .collect::<Result<Vec<_>>>()?;
        DigitString::new(digits)
    }
}

/// How [`ConvergentMatrix::extend`] grows the underlying string.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Extension {
    /// `(a1, ..., an, t)`
    Append,
    /// `(t, a1, ..., an)`
    Prepend,
    /// `(t, an, ..., a1)`
    PrependToReverse,
}

/// The matrix `(p' p; q' q)` of the last two convergents of a digit string,
/// together with the length of that string (which fixes the determinant sign).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ConvergentMatrix {
    pub p_prev: BigUint,
    pub p: BigUint,
    pub q_prev: BigUint,
    pub q: BigUint,
    len: usize,
}

impl ConvergentMatrix {
    /// The factor `(0 1; 1 a)` of a single digit.
    pub fn of_digit(a: &BigUint) -> Self {
        ConvergentMatrix {
            p_prev: BigUint::zero(),
            p: BigUint::one(),
            q_prev: BigUint::one(),
            q: a.clone(),
            len: 1,
        }
    }

    /// Length of the generating string.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// `p q' - q p'`, which equals `(-1)^(n-1)`.
    pub fn determinant(&self) -> BigInt {
        BigInt::from(&self.p * &self.q_prev) - BigInt::from(&self.q * &self.p_prev)
    }

    /// Matrix of the reversed string: `p` and `q'` trade places.
    pub fn transpose(&self) -> Self {
        ConvergentMatrix {
            p_prev: self.p_prev.clone(),
            p: self.q_prev.clone(),
            q_prev: self.p.clone(),
            q: self.q.clone(),
            len: self.len,
        }
    }

    pub fn extend(&self, t: &BigUint, mode: Extension) -> Self {
        let (pp, p, qp, q) = (&self.p_prev, &self.p, &self.q_prev, &self.q);
        let (p_prev, p_new, q_prev, q_new) = match mode {
            Extension::Append => (p.clone(), pp + t * p, q.clone(), qp + t * q),
            Extension::Prepend => (qp.clone(), q.clone(), pp + t * qp, p + t * q),
            Extension::PrependToReverse => (p.clone(), q.clone(), pp + t * p, qp + t * q),
        };
        ConvergentMatrix { p_prev, p: p_new, q_prev, q: q_new, len: self.len + 1 }
    }

    /// The value `p/q` of the generating string.
    pub fn value(&self) -> BigRational {
        BigRational::new(BigInt::from(self.p.clone()), BigInt::from(self.q.clone()))
    }

    /// Whether the entries satisfy the determinant, coprimality and ordering
    /// constraints of a genuine convergent matrix.
    pub fn is_consistent(&self) -> bool {
        let sign = if self.len % 2 == 1 { BigInt::one() } else { -BigInt::one() };
        self.len >= 1
            && self.determinant() == sign
            && self.p.gcd(&self.q).is_one()
            && self.p_prev.gcd(&self.q_prev).is_one()
            && self.q >= self.q_prev
            && !self.q_prev.is_zero()
    }
}

/// Left-to-right product of the digit factors of `a`.
pub fn convergent_matrix(a: &DigitString) -> ConvergentMatrix {
    let mut digits = a.digits().iter();
    let first = digits.next().expect("DigitString is nonempty");
    digits.fold(ConvergentMatrix::of_digit(first), |m, t| m.extend(t, Extension::Append))
}

/// The rational `[0; a1, ..., an]` in lowest terms.
pub fn evaluate(a: &DigitString) -> BigRational {
    convergent_matrix(a).value()
}

pub fn extend_matrix(c: &ConvergentMatrix, t: &BigUint, mode: Extension) -> ConvergentMatrix {
    c.extend(t, mode)
}

/// The half-open interval of reals whose expansion starts with a given string.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FundamentalInterval {
    pub included: BigRational,
    pub excluded: BigRational,
    /// `+1` if the included endpoint is the left one, `-1` otherwise.
    pub orientation: i8,
}

impl FundamentalInterval {
    pub fn lo(&self) -> &BigRational {
        if self.orientation > 0 {
            &self.included
        } else {
            &self.excluded
        }
    }

    pub fn hi(&self) -> &BigRational {
        if self.orientation > 0 {
            &self.excluded
        } else {
            &self.included
        }
    }

    pub fn width(&self) -> BigRational {
        (&self.excluded - &self.included).abs()
    }

    /// Membership respecting which endpoint is closed.
    pub fn contains(&self, x: &BigRational) -> bool {
        if self.orientation > 0 {
            &self.included <= x && x < &self.excluded
        } else {
            &self.excluded < x && x <= &self.included
        }
    }
}

impl fmt::Display for FundamentalInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.orientation > 0 {
            write!(f, "[{}, {})", self.included, self.excluded)
        } else {
            write!(f, "({}, {}]", self.excluded, self.included)
        }
    }
}

pub fn fundamental_interval_of(c: &ConvergentMatrix) -> FundamentalInterval {
    let included = c.value();
    let excluded = BigRational::new(
        BigInt::from(&c.p_prev + &c.p),
        BigInt::from(&c.q_prev + &c.q),
    );
    let orientation = if included < excluded { 1 } else { -1 };
    FundamentalInterval { included, excluded, orientation }
}

pub fn fundamental_interval(a: &DigitString) -> FundamentalInterval {
    fundamental_interval_of(&convergent_matrix(a))
}

/// Canonical digit string of a rational in `(0, 1)`, by the Euclidean
/// algorithm. The last digit is always greater than 1.
pub fn digits_of_rational(x: &BigRational) -> Result<DigitString> {
    if !x.is_positive() || *x >= BigRational::one() {
        return Err(Error::OutOfUnitInterval { value: x.to_string() });
    }
    // x = num/den with 0 < num < den; Euclid on (den, num).
    let mut a = x.denom().magnitude().clone();
    let mut b = x.numer().magnitude().clone();
    let mut digits = Vec::new();
    while !b.is_zero() {
        let (quot, rem) = a.div_rem(&b);
        digits.push(quot);
        a = b;
        b = rem;
    }
    DigitString::new(digits)
}

/// Stop threshold for the floating-point Gauss map.
pub const REAL_PRECISION_FLOOR: f64 = 1.0 / (1u64 << 45) as f64;

/// Default digit budget for double-precision input.
pub const DEFAULT_MAX_REAL_DIGITS: usize = 25;

/// First digits of a double in `(0, 1)` by iterating the Gauss map
/// `x -> 1/x - floor(1/x)`. Iteration stops after `max_digits` digits or
/// once the remainder falls below [`REAL_PRECISION_FLOOR`].
pub fn digits_of_real(x: f64, max_digits: usize) -> Result<DigitString> {
    let mut out = Vec::with_capacity(max_digits);
    gauss_digits_f64(x, max_digits, &mut out)?;
    DigitString::new(out.into_iter().map(BigUint::from).collect())
}

/// Machine-word variant of [`digits_of_real`] that writes into a reusable
/// buffer; the hot loop of the Monte Carlo sampler.
pub fn gauss_digits_f64(mut x: f64, max_digits: usize, out: &mut Vec<u64>) -> Result<()> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::OutOfUnitInterval { value: x.to_string() });
    }
    if max_digits == 0 {
        return Err(Error::InvalidArgument("max_digits must be at least 1".into()));
    }
    out.clear();
    while out.len() < max_digits && x >= REAL_PRECISION_FLOOR {
        let y = 1.0 / x;
        let a = y.floor();
        if a >= u64::MAX as f64 {
            break;
        }
        out.push(a as u64);
        x = y - a;
    }
    Ok(())
}

/// First `max_digits` digits of an exact rational in `(0, 1)`. Unlike
/// [`digits_of_rational`] the output is a raw prefix of the Gauss-map orbit
/// and is not canonicalized.
pub fn digits_of_real_exact(x: &BigRational, max_digits: usize) -> Result<DigitString> {
    if !x.is_positive() || *x >= BigRational::one() {
        return Err(Error::OutOfUnitInterval { value: x.to_string() });
    }
    if max_digits == 0 {
        return Err(Error::InvalidArgument("max_digits must be at least 1".into()));
    }
    let mut a = x.denom().magnitude().clone();
    let mut b = x.numer().magnitude().clone();
    let mut digits = Vec::new();
    while !b.is_zero() && digits.len() < max_digits {
        let (quot, rem) = a.div_rem(&b);
        digits.push(quot);
        a = b;
        b = rem;
    }
    DigitString::new(digits)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ds(d: &[u64]) -> DigitString {
        DigitString::from_u64s(d).unwrap()
    }

    fn mat(m: &ConvergentMatrix) -> [u64; 4] {
        [&m.p_prev, &m.p, &m.q_prev, &m.q].map(|x| x.to_u64().unwrap())
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    // Naive 2x2 product, independent of `extend`.
    fn brute_product(d: &[u64]) -> [u64; 4] {
        let mut m = [1u64, 0, 0, 1]; // row-major (a b; c e)
        for &t in d {
            let f = [0u64, 1, 1, t];
            m = [
                m[0] * f[0] + m[1] * f[2],
                m[0] * f[1] + m[1] * f[3],
                m[2] * f[0] + m[3] * f[2],
                m[2] * f[1] + m[3] * f[3],
            ];
        }
        // (p' p; q' q) in row-major order
        m
    }

    #[test]
    fn matrices_of_worked_examples() {
        assert_eq!(mat(&convergent_matrix(&ds(&[2]))), [0, 1, 1, 2]);
        assert_eq!(mat(&convergent_matrix(&ds(&[3, 1, 4]))), [1, 5, 4, 19]);
        assert_eq!(brute_product(&[2, 1, 1, 3]), [2, 7, 5, 18]);
        assert_eq!(mat(&convergent_matrix(&ds(&[2, 1, 1, 3]))), [2, 7, 5, 18]);
    }

    #[test]
    fn evaluate_examples() {
        assert_eq!(evaluate(&ds(&[3, 1, 4])), rat(5, 19));
        assert_eq!(evaluate(&ds(&[3, 1, 5])), rat(6, 23));
        for a in 1..50 {
            assert_eq!(evaluate(&ds(&[a])), rat(1, a as i64));
        }
    }

    #[test]
    fn intervals() {
        let i = fundamental_interval(&ds(&[3, 1, 4]));
        assert_eq!(i.included, rat(5, 19));
        assert_eq!(i.excluded, rat(6, 23));
        assert_eq!(i.orientation, -1);
        assert_eq!(i.to_string(), "(6/23, 5/19]");

        let i = fundamental_interval(&ds(&[1, 3, 4]));
        assert_eq!(i.to_string(), "(16/21, 13/17]");

        let i = fundamental_interval(&ds(&[7]));
        assert_eq!((i.lo().clone(), i.hi().clone()), (rat(1, 8), rat(1, 7)));
        assert!(i.contains(&rat(1, 7)));
        assert!(!i.contains(&rat(1, 8)));
    }

    #[test]
    fn extension_modes() {
        let c31 = convergent_matrix(&ds(&[3, 1]));
        assert_eq!(mat(&c31), [1, 1, 3, 4]);
        let four = BigUint::from(4u32);
        assert_eq!(extend_matrix(&c31, &four, Extension::Append), convergent_matrix(&ds(&[3, 1, 4])));

        let c14 = convergent_matrix(&ds(&[1, 4]));
        let three = BigUint::from(3u32);
        assert_eq!(c14.extend(&three, Extension::Prepend), convergent_matrix(&ds(&[3, 1, 4])));

        for a in 1..20u64 {
            let c = convergent_matrix(&ds(&[a]));
            let one = BigUint::one();
            assert_eq!(c.extend(&one, Extension::PrependToReverse), convergent_matrix(&ds(&[1, a])));
        }
        let c = convergent_matrix(&ds(&[2, 5, 3]));
        let t = BigUint::from(6u32);
        assert_eq!(c.extend(&t, Extension::PrependToReverse), convergent_matrix(&ds(&[6, 3, 5, 2])));
    }

    #[test]
    fn rational_digits() {
        assert_eq!(digits_of_rational(&rat(5, 19)).unwrap(), ds(&[3, 1, 4]));
        assert_eq!(digits_of_rational(&rat(1, 2)).unwrap(), ds(&[2]));
        assert_eq!(digits_of_rational(&rat(2, 3)).unwrap(), ds(&[1, 2]));
        assert!(digits_of_rational(&rat(0, 1)).is_err());
        assert!(digits_of_rational(&rat(1, 1)).is_err());
        assert!(digits_of_rational(&rat(3, 2)).is_err());
        assert!(digits_of_rational(&rat(-1, 2)).is_err());
    }

    #[test]
    fn canonical_form() {
        assert_eq!(ds(&[1, 1, 1]).canonicalize(), ds(&[1, 2]));
        assert_eq!(ds(&[1]).canonicalize(), ds(&[1]));
        assert_eq!(ds(&[3, 1, 4]).canonicalize(), ds(&[3, 1, 4]));
    }

    #[test]
    fn real_digits() {
        // 5/19 is the closed right end of I(3,1,4) = (6/23, 5/19]; a point just
        // below it starts with (3,1,4), a point just above it does not.
        let tiny = BigRational::new(BigInt::one(), BigInt::from(10u32).pow(30));
        let below = rat(5, 19) - &tiny;
        assert_eq!(digits_of_real_exact(&below, 3).unwrap(), ds(&[3, 1, 4]));
        let above = rat(5, 19) + &tiny;
        assert_eq!(digits_of_real_exact(&above, 4).unwrap(), ds(&[3, 1, 3, 1]));
        assert_eq!(digits_of_real((5.0 / 19.0) - 1e-12, 3).unwrap(), ds(&[3, 1, 4]));

        assert_eq!(digits_of_real(0.5, 5).unwrap(), ds(&[2]));
        let golden = (5f64.sqrt() - 1.0) / 2.0;
        assert_eq!(digits_of_real(golden, 6).unwrap(), ds(&[1; 6]));
        assert_eq!(digits_of_real(golden, DEFAULT_MAX_REAL_DIGITS).unwrap().len(), 25);
        assert!(digits_of_real(0.0, 5).is_err());
        assert!(digits_of_real(1.0, 5).is_err());
        assert!(digits_of_real(f64::NAN, 5).is_err());
    }

    #[test]
    fn parse_and_reject() {
        assert_eq!("3,1,4".parse::<DigitString>().unwrap(), ds(&[3, 1, 4]));
        assert_eq!("(3, 1, 4)".parse::<DigitString>().unwrap(), ds(&[3, 1, 4]));
        assert_eq!("".parse::<DigitString>(), Err(Error::EmptyString));
        assert_eq!("3,0".parse::<DigitString>(), Err(Error::ZeroDigit { position: 1 }));
        assert!("3,-1".parse::<DigitString>().is_err());
        assert!(DigitString::new(vec![]).is_err());
    }

    #[test]
    fn consecutive_children_tile_the_parent() {
        // Children I(a,t), t = 1, 2, ... are adjacent: the first starts at the
        // parent's excluded endpoint, each child's excluded endpoint is the next
        // child's included one, and they accumulate towards p/q.
        for a in [ds(&[3, 1, 4]), ds(&[2]), ds(&[1, 1]), ds(&[5, 2, 7, 1])] {
            let parent = fundamental_interval(&a);
            let mut total = BigRational::zero();
            let mut prev: Option<FundamentalInterval> = None;
            for t in 1..=40u64 {
                let mut d = a.to_u64s().unwrap();
                d.push(t);
                let child = fundamental_interval(&ds(&d));
                assert_eq!(child.orientation, -parent.orientation);
                match &prev {
                    None => assert_eq!(child.included, parent.excluded),
                    Some(p) => assert_eq!(child.included, p.excluded),
                }
                assert!(parent.contains(&child.excluded));
                total += child.width();
                prev = Some(child);
            }
            assert!(total < parent.width());
            let residual = (prev.unwrap().excluded - parent.included.clone()).abs();
            assert_eq!(total + residual, parent.width());
        }
    }
}
