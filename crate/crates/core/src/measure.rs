//! Exact Gauss–Kuzmin measure of digit strings.
//!
//! The frequency of a string is `log2` of a rational number determined by its
//! characteristic number `chi = (p + q)(q' + q)` and its length parity, so it
//! is stored exactly as a [`LogRatio`] and compared without rounding.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Mul;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::cf::{convergent_matrix, fundamental_interval, DigitString};
use crate::error::{Error, Result};

/// `chi(a) = (p + q)(q' + q)` together with the length parity of `a`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CharacteristicNumber {
    pub value: BigUint,
    pub odd_length: bool,
}

pub fn chi(a: &DigitString) -> CharacteristicNumber {
    let c = convergent_matrix(a);
    CharacteristicNumber { value: (&c.p + &c.q) * (&c.q_prev + &c.q), odd_length: a.is_odd() }
}

/// The number `log2(num/den)` with `num >= den >= 1` coprime.
///
/// Products of `LogRatio`s add the logarithms, which keeps sums of measures
/// exact. A string frequency always has `num > den`; an empty interval has
/// measure `log2(1/1) = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LogRatio {
    num: BigUint,
    den: BigUint,
}

impl LogRatio {
    pub fn new(num: BigUint, den: BigUint) -> Result<Self> {
        if den.is_zero() || num < den {
            return Err(Error::InvalidArgument(format!(
                "log2({num}/{den}) is not a nonnegative log of a rational"
            )));
        }
        let g = num.gcd(&den);
        Ok(LogRatio { num: num / &g, den: den / g })
    }

    pub fn one() -> Self {
        LogRatio { num: BigUint::from(2u32), den: BigUint::one() }
    }

    pub fn zero() -> Self {
        LogRatio { num: BigUint::one(), den: BigUint::one() }
    }

    pub fn num(&self) -> &BigUint {
        &self.num
    }

    pub fn den(&self) -> &BigUint {
        &self.den
    }

    /// The rational `num/den` whose logarithm this is.
    pub fn argument(&self) -> BigRational {
        BigRational::new(BigInt::from(self.num.clone()), BigInt::from(self.den.clone()))
    }

    /// Correctly rounded `f64` with `bits` significant bits (1..=53), round
    /// half to even.
    pub fn to_f64(&self, bits: u32) -> Result<f64> {
        if !(1..=53).contains(&bits) {
            return Err(Error::InvalidArgument(format!("precision_bits must be in 1..=53, got {bits}")));
        }
        if let Some(exact) = self.exact_value() {
            return Ok(round_to_bits(&exact, bits).1);
        }
        let mut guard = 32u64;
        loop {
            let (lo, hi) = self.enclose(bits as u64 + guard);
            let (ml, fl) = round_to_bits(&lo, bits);
            let (mh, _) = round_to_bits(&hi, bits);
            if ml == mh {
                return Ok(fl);
            }
            guard *= 2;
        }
    }

    /// Decimal rendering rounded to `sig` significant digits.
    pub fn to_decimal(&self, sig: usize) -> String {
        let sig = sig.max(1);
        if let Some(exact) = self.exact_value() {
            return round_to_decimal(&exact, sig);
        }
        let mut guard = 32u64;
        loop {
            // log2(10) < 4 bits per decimal digit
            let (lo, hi) = self.enclose(4 * sig as u64 + guard);
            let a = round_to_decimal(&lo, sig);
            if a == round_to_decimal(&hi, sig) {
                return a;
            }
            guard *= 2;
        }
    }

    /// Value when it is rational: only `0` and `1` occur for `num/den` in `[1, 2]`.
    fn exact_value(&self) -> Option<BigRational> {
        if self.num == self.den {
            Some(BigRational::zero())
        } else if self.den.is_one() && self.num == BigUint::from(2u32) {
            Some(BigRational::one())
        } else if self.den.is_one() && self.num.count_ones() == 1 {
            Some(BigRational::from_integer(BigInt::from(self.num.bits() - 1)))
        } else {
            None
        }
    }

    /// Rational bounds `lo <= log2(num/den) <= hi` with relative gap about
    /// `2^-rel_bits`.
    fn enclose(&self, rel_bits: u64) -> (BigRational, BigRational) {
        // Reduce x = num/den into [1, 2): log2 x = k + log2(x / 2^k).
        let mut k = self.num.bits() as i64 - self.den.bits() as i64;
        let (mut n, mut d) = (self.num.clone(), self.den.clone());
        if k > 0 {
            d <<= k as usize;
        } else if k < 0 {
            n <<= (-k) as usize;
        }
        if n < d {
            n <<= 1;
            k -= 1;
        }
        // log2(n/d) = atanh(z) / atanh(1/3), z = (n - d)/(n + d) in [0, 1/3).
        let za = &n - &d;
        let zb = &n + &d;
        if za.is_zero() {
            let v = BigRational::from_integer(BigInt::from(k));
            return (v.clone(), v);
        }
        // Enough fractional bits that atanh(z) * 2^w carries rel_bits of precision.
        let w = rel_bits + zb.bits().saturating_sub(za.bits()) + 16;
        let (s_z, e_z) = atanh_fixed(&za, &zb, w);
        let (s_3, e_3) = atanh_fixed(&BigUint::one(), &BigUint::from(3u32), w);
        let r = |a: &BigUint| BigRational::from_integer(BigInt::from(a.clone()));
        let lo_frac = r(&(&s_z - (&e_z).min(&s_z))) / r(&(&s_3 + &e_3));
        let hi_frac = r(&(&s_z + &e_z)) / r(&(&s_3 - &e_3));
        let kk = BigRational::from_integer(BigInt::from(k));
        (kk.clone() + lo_frac, kk + hi_frac)
    }
}

/// Fixed-point `atanh(a/b) * 2^w` for `0 <= a/b <= 1/3`, truncated, with an
/// upper bound on the absolute error in units of `2^-w`.
fn atanh_fixed(a: &BigUint, b: &BigUint, w: u64) -> (BigUint, BigUint) {
    let a2 = a * a;
    let b2 = b * b;
    let mut term = (a << w as usize) / b;
    let mut sum = BigUint::zero();
    let mut j = 0u64;
    while !term.is_zero() {
        sum += &term / (2 * j + 1);
        term = term * &a2 / &b2;
        j += 1;
    }
    // Each term is off by less than 2 units (truncated power, truncated
    // quotient); the tail after the last nonzero term is below 2 units.
    (sum, BigUint::from(2 * j + 4))
}

/// Round a positive rational to `bits` significant bits, half to even.
/// Returns the mantissa-exponent pair's value as an exact rational key and
/// the `f64` it denotes.
fn round_to_bits(x: &BigRational, bits: u32) -> (BigRational, f64) {
    if x.is_zero() {
        return (BigRational::zero(), 0.0);
    }
    let n = x.numer().magnitude();
    let d = x.denom().magnitude();
    // e such that 2^(bits-1) <= x * 2^e < 2^bits
    let mut e = bits as i64 - 1 - (n.bits() as i64 - d.bits() as i64);
    let scaled = |e: i64| -> (BigUint, BigUint) {
        if e >= 0 {
            (n << e as usize, d.clone())
        } else {
            (n.clone(), d << (-e) as usize)
        }
    };
    let lower = BigUint::one() << (bits - 1) as usize;
    let upper = BigUint::one() << bits as usize;
    let (mut sn, mut sd) = scaled(e);
    loop {
        let q = &sn / &sd;
        if q < lower {
            e += 1;
        } else if q >= upper {
            e -= 1;
        } else {
            break;
        }
        (sn, sd) = scaled(e);
    }
    let (q, r) = sn.div_rem(&sd);
    let twice: BigUint = &r << 1u32;
    let mut m = match twice.cmp(&sd) {
        Ordering::Less => q,
        Ordering::Greater => q + 1u32,
        Ordering::Equal => {
            if q.is_odd() {
                q + 1u32
            } else {
                q
            }
        }
    };
    if m == upper {
        m >>= 1;
        e -= 1;
    }
    let key = if e >= 0 {
        BigRational::new(BigInt::from(m.clone()), BigInt::one() << e as usize)
    } else {
        BigRational::from_integer(BigInt::from(m.clone()) << (-e) as usize)
    };
    let mf = m.to_f64().expect("mantissa fits");
    let f = scale_pow2(mf, -e);
    (key, f)
}

fn scale_pow2(mut v: f64, mut e: i64) -> f64 {
    while e > 1000 {
        v *= 2f64.powi(1000);
        e -= 1000;
    }
    while e < -1000 {
        v *= 2f64.powi(-1000);
        e += 1000;
    }
    v * 2f64.powi(e as i32)
}

/// Round a nonnegative rational to `sig` significant decimal digits, half to
/// even, and render it in positional notation.
fn round_to_decimal(x: &BigRational, sig: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let ten = BigInt::from(10u32);
    // k = floor(log10 x), estimated then corrected.
    let approx = x.to_f64().unwrap_or(0.0);
    let mut k = if approx > 0.0 && approx.is_finite() { approx.log10().floor() as i64 } else { 0 };
    let pow10 = |e: i64| -> BigRational {
        if e >= 0 {
            BigRational::from_integer(num_traits::pow(ten.clone(), e as usize))
        } else {
            BigRational::new(BigInt::one(), num_traits::pow(ten.clone(), (-e) as usize))
        }
    };
    while x < &pow10(k) {
        k -= 1;
    }
    while x >= &pow10(k + 1) {
        k += 1;
    }
    let shift = sig as i64 - 1 - k;
    let scaled = x * pow10(shift);
    let q = scaled.numer() / scaled.denom();
    let r = scaled.numer() - &q * scaled.denom();
    let twice: BigInt = r * 2;
    let mut m = match twice.cmp(scaled.denom()) {
        Ordering::Less => q,
        Ordering::Greater => q + 1,
        Ordering::Equal => {
            if q.is_odd() {
                q + 1
            } else {
                q
            }
        }
    };
    let mut shift = shift;
    if m == num_traits::pow(ten.clone(), sig) {
        m /= &ten;
        shift -= 1;
    }
    let digits = m.to_string();
    if shift <= 0 {
        let zeros = "0".repeat((-shift) as usize);
        format!("{digits}{zeros}")
    } else {
        let shift = shift as usize;
        if digits.len() > shift {
            let (int, frac) = digits.split_at(digits.len() - shift);
            format!("{int}.{frac}")
        } else {
            format!("0.{}{}", "0".repeat(shift - digits.len()), digits)
        }
    }
}

impl Mul for &LogRatio {
    type Output = LogRatio;

    fn mul(self, rhs: &LogRatio) -> LogRatio {
        let num = &self.num * &rhs.num;
        let den = &self.den * &rhs.den;
        let g = num.gcd(&den);
        LogRatio { num: num / &g, den: den / g }
    }
}

impl Mul for LogRatio {
    type Output = LogRatio;

    fn mul(self, rhs: LogRatio) -> LogRatio {
        &self * &rhs
    }
}

impl std::iter::Product for LogRatio {
    fn product<I: Iterator<Item = LogRatio>>(iter: I) -> LogRatio {
        iter.fold(LogRatio::zero(), |acc, x| acc * x)
    }
}

/// Orders by the value of the logarithm, i.e. by the argument `num/den`.
impl PartialOrd for LogRatio {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for LogRatio {
    fn cmp(&self, other: &Self) -> Ordering {
        (&self.num * &other.den).cmp(&(&other.num * &self.den))
    }
}

impl fmt::Display for LogRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "log2({}/{})", self.num, self.den)
    }
}

/// Exact Gauss–Kuzmin frequency: `log2((chi+1)/chi)` for even length,
/// `log2(chi/(chi-1))` for odd length.
pub fn pgk_exact(a: &DigitString) -> LogRatio {
    pgk_from_chi(&chi(a))
}

pub fn pgk_from_chi(c: &CharacteristicNumber) -> LogRatio {
    // Consecutive integers are coprime, no reduction needed.
    if c.odd_length {
        LogRatio { num: c.value.clone(), den: &c.value - 1u32 }
    } else {
        LogRatio { num: &c.value + 1u32, den: c.value.clone() }
    }
}

/// Default rendering precision.
pub const DEFAULT_PRECISION_BITS: u32 = 53;

pub fn pgk_float(a: &DigitString, precision_bits: u32) -> Result<f64> {
    pgk_exact(a).to_f64(precision_bits)
}

/// `mu_GK([lo, hi]) = log2((1 + hi)/(1 + lo))`.
pub fn gk_measure_of_interval(lo: &BigRational, hi: &BigRational) -> Result<LogRatio> {
    let zero = BigRational::zero();
    let one = BigRational::one();
    if lo < &zero || hi > &one || lo > hi {
        return Err(Error::BadInterval { lo: lo.to_string(), hi: hi.to_string() });
    }
    let ratio = (&one + hi) / (&one + lo);
    LogRatio::new(ratio.numer().magnitude().clone(), ratio.denom().magnitude().clone())
}

pub fn measure_of_string_interval(a: &DigitString) -> LogRatio {
    let i = fundamental_interval(a);
    gk_measure_of_interval(i.lo(), i.hi()).expect("fundamental intervals lie in [0,1]")
}

/// Same parity compares `chi`; otherwise the exact frequencies are compared.
pub fn measure_equal(a: &DigitString, b: &DigitString) -> bool {
    let (ca, cb) = (chi(a), chi(b));
    if ca.odd_length == cb.odd_length {
        ca.value == cb.value
    } else {
        pgk_from_chi(&ca) == pgk_from_chi(&cb)
    }
}
