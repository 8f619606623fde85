//! Checked 128-bit convergent arithmetic for the hot loops.
//!
//! Census strings are short and their digits small, so characteristic numbers
//! fit comfortably in `u128`. Every operation is checked; `None` means the
//! caller must redo the work with big integers.

use num_bigint::BigUint;

/// `(p', p, q', q)` in machine words.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SmallMatrix {
    pub p_prev: u128,
    pub p: u128,
    pub q_prev: u128,
    pub q: u128,
}

impl SmallMatrix {
    /// Neutral starting point: appending `a` to it yields `(0 1; 1 a)`.
    pub const IDENTITY: SmallMatrix = SmallMatrix { p_prev: 1, p: 0, q_prev: 0, q: 1 };

    #[inline]
    pub fn append(self, t: u64) -> Option<SmallMatrix> {
        let t = t as u128;
        Some(SmallMatrix {
            p_prev: self.p,
            p: t.checked_mul(self.p)?.checked_add(self.p_prev)?,
            q_prev: self.q,
            q: t.checked_mul(self.q)?.checked_add(self.q_prev)?,
        })
    }

    /// `(p + q)(q' + q)`.
    #[inline]
    pub fn chi(self) -> Option<u128> {
        let a = self.p.checked_add(self.q)?;
        let b = self.q_prev.checked_add(self.q)?;
        a.checked_mul(b)
    }
}

#[inline]
pub fn matrix_u128(digits: &[u64]) -> Option<SmallMatrix> {
    digits.iter().try_fold(SmallMatrix::IDENTITY, |m, &t| m.append(t))
}

#[inline]
pub fn chi_u128(digits: &[u64]) -> Option<u128> {
    matrix_u128(digits)?.chi()
}

/// Characteristic number with big integers; the fallback for [`chi_u128`].
pub fn chi_big(digits: &[u64]) -> BigUint {
    let (mut pp, mut p, mut qp, mut q) =
        (BigUint::from(1u32), BigUint::from(0u32), BigUint::from(0u32), BigUint::from(1u32));
    for &t in digits {
        let np = &p * t + &pp;
        let nq = &q * t + &qp;
        pp = std::mem::replace(&mut p, np);
        qp = std::mem::replace(&mut q, nq);
    }
    (&p + &q) * (&qp + &q)
}

/// Characteristic number as an exact key: `u128` when it fits, big otherwise.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ChiKey {
    Small(u128),
    Big(BigUint),
}

impl ChiKey {
    pub fn of(digits: &[u64]) -> ChiKey {
        match chi_u128(digits) {
            Some(v) => ChiKey::Small(v),
            None => ChiKey::Big(chi_big(digits)),
        }
    }

    pub fn to_biguint(&self) -> BigUint {
        match self {
            ChiKey::Small(v) => BigUint::from(*v),
            ChiKey::Big(b) => b.clone(),
        }
    }
}
