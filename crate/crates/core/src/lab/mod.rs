//! Numerical measure experiments.
//!
//! Densities on `[0, 1]`, their measures on fundamental intervals, the
//! perturbed density that agrees with Gauss–Kuzmin on every string up to a
//! given length yet differs from it, the interval-width ratios that pin the
//! Gauss–Kuzmin density down, and a seeded Monte Carlo check of digit-string
//! frequencies.

pub mod montecarlo;
pub mod quadrature;

use std::f64::consts::{LN_2, PI};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::cf::{convergent_matrix, fundamental_interval, DigitString, Extension, FundamentalInterval};
use crate::error::{Error, Result};
use crate::measure::gk_measure_of_interval;

pub use montecarlo::{montecarlo_frequency, MonteCarloConfig, MonteCarloResult, Sampling};
pub use quadrature::DEFAULT_TOLERANCE;

/// `1/((log 2)(1 + x))`.
pub fn gauss_kuzmin_density(x: f64) -> f64 {
    1.0 / (LN_2 * (1.0 + x))
}

/// The Gauss–Kuzmin density with a full sine period added on `I(a0)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Perturbed {
    pub a0: DigitString,
    pub epsilon: f64,
    pub alpha: f64,
    pub beta: f64,
    pub alpha_exact: BigRational,
    pub beta_exact: BigRational,
}

impl Perturbed {
    /// Largest admissible amplitude: half the minimum of the Gauss–Kuzmin
    /// density on `I(a0)`.
    pub fn epsilon_max(beta: f64) -> f64 {
        0.5 * gauss_kuzmin_density(beta)
    }

    fn bump(&self, x: f64) -> f64 {
        if x > self.alpha && x < self.beta {
            self.epsilon * (2.0 * PI * (x - self.alpha) / (self.beta - self.alpha)).sin()
        } else {
            0.0
        }
    }
}

/// Piecewise-linear density through sample points.
#[derive(Debug, Clone, PartialEq)]
pub struct Tabulated {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl Tabulated {
    /// Samples must cover `[0, 1]` with strictly increasing abscissae and
    /// nonnegative values.
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() != ys.len() || xs.len() < 2 {
            return Err(Error::InvalidArgument("tabulated density needs matching grids of at least 2 points".into()));
        }
        if xs[0] != 0.0 || *xs.last().unwrap() != 1.0 || xs.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument("tabulated grid must increase strictly from 0 to 1".into()));
        }
        if ys.iter().any(|&y| !(y >= 0.0)) {
            return Err(Error::InvalidArgument("tabulated density must be nonnegative".into()));
        }
        Ok(Tabulated { xs, ys })
    }

    /// Samples `f` on a uniform grid of `points` nodes.
    pub fn sample(f: impl Fn(f64) -> f64, points: usize) -> Result<Self> {
        let points = points.max(2);
        let xs: Vec<f64> = (0..points).map(|i| i as f64 / (points - 1) as f64).collect();
        let ys = xs.iter().map(|&x| f(x)).collect();
        Tabulated::new(xs, ys)
    }

    fn eval(&self, x: f64) -> f64 {
        let i = self.xs.partition_point(|&g| g <= x).clamp(1, self.xs.len() - 1);
        let (x0, x1) = (self.xs[i - 1], self.xs[i]);
        let (y0, y1) = (self.ys[i - 1], self.ys[i]);
        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Density {
    GaussKuzmin,
    Perturbed(Perturbed),
    Tabulated(Tabulated),
}

impl Density {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Density::GaussKuzmin => gauss_kuzmin_density(x),
            Density::Perturbed(p) => gauss_kuzmin_density(x) + p.bump(x),
            Density::Tabulated(t) => t.eval(x),
        }
    }

    /// Points where the density is not smooth.
    fn breakpoints(&self) -> Vec<BigRational> {
        match self {
            Density::GaussKuzmin => Vec::new(),
            Density::Perturbed(p) => vec![p.alpha_exact.clone(), p.beta_exact.clone()],
            Density::Tabulated(t) => t.xs.iter().filter_map(|&x| BigRational::from_float(x)).collect(),
        }
    }
}

fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().expect("endpoint in [0,1]")
}

/// Perturbed density `f_GK + epsilon * sin(2 pi (x - alpha)/(beta - alpha))`
/// on `I(a0) = (alpha, beta)`, Gauss–Kuzmin elsewhere.
pub fn perturbed_density(a0: &DigitString, epsilon: f64) -> Result<Density> {
    let i = fundamental_interval(a0);
    let (alpha, beta) = (to_f64(i.lo()), to_f64(i.hi()));
    let max = Perturbed::epsilon_max(beta);
    if !(epsilon > 0.0 && epsilon <= max) {
        return Err(Error::InvalidArgument(format!("epsilon must lie in (0, {max}], got {epsilon}")));
    }
    Ok(Density::Perturbed(Perturbed {
        a0: a0.clone(),
        epsilon,
        alpha,
        beta,
        alpha_exact: i.lo().clone(),
        beta_exact: i.hi().clone(),
    }))
}

/// Integral of `density` over `[lo, hi]`, split at the density's breakpoints.
///
/// The integral runs in the local coordinate `x = lo + (hi - lo) s`, with the
/// width taken from the exact endpoints, so narrow intervals keep their full
/// relative accuracy.
pub fn integrate_density(density: &Density, lo: &BigRational, hi: &BigRational, tol: f64) -> Result<f64> {
    if lo > hi || lo.is_negative() || *hi > BigRational::one() {
        return Err(Error::BadInterval { lo: lo.to_string(), hi: hi.to_string() });
    }
    let width = hi - lo;
    if width.is_zero() {
        return Ok(0.0);
    }
    let (x0, w) = (to_f64(lo), to_f64(&width));
    let mut cuts = vec![0.0];
    cuts.extend(
        density
            .breakpoints()
            .into_iter()
            .filter(|b| b > lo && b < hi)
            .map(|b| to_f64(&((b - lo) / &width))),
    );
    cuts.push(1.0);
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let g = |s: f64| density.eval(x0 + w * s) * w;
    cuts.windows(2).map(|c| quadrature::integrate(&g, c[0], c[1], tol)).sum()
}

/// `mu(I)`. The Gauss–Kuzmin density takes the exact logarithmic path.
pub fn measure_of(density: &Density, interval: &FundamentalInterval, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    match density {
        Density::GaussKuzmin => gk_measure_of_interval(interval.lo(), interval.hi())?.to_f64(53),
        _ => integrate_density(density, interval.lo(), interval.hi(), tol),
    }
}

/// `mu(I(a)) - mu(I(reverse(a)))`, both by quadrature.
pub fn symmetry_defect(density: &Density, a: &DigitString, tol: f64) -> Result<f64> {
    let i = fundamental_interval(a);
    let j = fundamental_interval(&a.reversed());
    let mi = integrate_density(density, i.lo(), i.hi(), tol)?;
    let mj = integrate_density(density, j.lo(), j.hi(), tol)?;
    Ok(mi - mj)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lemma5Sample {
    pub t: u64,
    /// Width of `I(a, t)`.
    pub delta: BigRational,
    /// Width of `I(t, reverse(a))`.
    pub epsilon: BigRational,
    pub ratio: BigRational,
}

/// Interval widths of `I(a, t)` and `I(t, reverse(a))` and their ratio,
/// which tends to `1/(1 + r)` with `r = [a]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatioTrace {
    pub base: DigitString,
    pub r: BigRational,
    pub samples: Vec<Lemma5Sample>,
    pub limit: BigRational,
}

fn int(x: &num_bigint::BigUint) -> BigInt {
    BigInt::from(x.clone())
}

pub fn lemma5_trace(a: &DigitString, t_values: &[u64]) -> Result<RatioTrace> {
    if t_values.iter().any(|&t| t == 0) {
        return Err(Error::InvalidArgument("t must be positive".into()));
    }
    let c = convergent_matrix(a);
    let (pp, p, qp, q) = (int(&c.p_prev), int(&c.p), int(&c.q_prev), int(&c.q));
    let samples = t_values
        .iter()
        .map(|&t| {
            let t = BigInt::from(t);
            let base = &qp + &t * &q;
            let next = &qp + (&t + 1) * &q;
            let cross = &pp + &qp + &t * (&p + &q);
            Lemma5Sample {
                t: t.to_u64().expect("fits"),
                delta: BigRational::new(BigInt::from(1), &base * &next),
                epsilon: BigRational::new(BigInt::from(1), &base * &cross),
                ratio: BigRational::new(next, cross),
            }
        })
        .collect();
    Ok(RatioTrace {
        base: a.clone(),
        r: c.value(),
        samples,
        limit: BigRational::new(q.clone(), &p + &q),
    })
}

/// Width of the interval of `a` extended by `t`, straight from the matrix;
/// used to cross-check the closed forms above.
pub fn extended_width(a: &DigitString, t: u64, mode: Extension) -> BigRational {
    let c = convergent_matrix(a).extend(&t.into(), mode);
    crate::cf::fundamental_interval_of(&c).width()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ds(d: &[u64]) -> DigitString {
        DigitString::from_u64s(d).unwrap()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn whole() -> FundamentalInterval {
        FundamentalInterval { included: rat(0, 1), excluded: rat(1, 1), orientation: 1 }
    }

    #[test]
    fn gauss_kuzmin_examples() {
        assert_eq!(measure_of(&Density::GaussKuzmin, &whole(), 1e-10).unwrap(), 1.0);
        let exact = (552f64 / 551.0).log2();
        let i = fundamental_interval(&ds(&[3, 1, 4]));
        let q = integrate_density(&Density::GaussKuzmin, i.lo(), i.hi(), 1e-10).unwrap();
        assert!(((q - exact) / exact).abs() < 1e-9);
        assert!(((measure_of(&Density::GaussKuzmin, &i, 1e-10).unwrap() - exact) / exact).abs() < 1e-12);
    }

    #[test]
    fn perturbed_properties() {
        let a0 = ds(&[1, 1]);
        let d = perturbed_density(&a0, 0.05).unwrap();
        let Density::Perturbed(p) = &d else { unreachable!() };
        assert_eq!((p.alpha, p.beta), (0.5, 2.0 / 3.0));
        // endpoints match, quarter point differs by the full amplitude
        assert_eq!(d.eval(p.alpha), gauss_kuzmin_density(p.alpha));
        assert_eq!(d.eval(p.beta), gauss_kuzmin_density(p.beta));
        let quarter = p.alpha + 0.25 * (p.beta - p.alpha);
        assert!((d.eval(quarter) - gauss_kuzmin_density(quarter) - 0.05).abs() < 1e-15);
        // same mass on I(a0)
        let i = fundamental_interval(&a0);
        let m = measure_of(&d, &i, 1e-12).unwrap();
        let g = measure_of(&Density::GaussKuzmin, &i, 1e-12).unwrap();
        assert!((m - g).abs() < 1e-12);
        // total mass one
        assert!((measure_of(&d, &whole(), 1e-12).unwrap() - 1.0).abs() < 1e-12);

        assert!(perturbed_density(&a0, 0.0).is_err());
        assert!(perturbed_density(&a0, 1.0).is_err());
        assert!(perturbed_density(&a0, Perturbed::epsilon_max(2.0 / 3.0)).is_ok());
    }

    #[test]
    fn defects() {
        let gk = Density::GaussKuzmin;
        for a in [ds(&[3, 1, 4]), ds(&[1, 2]), ds(&[5, 1, 1, 2])] {
            assert!(symmetry_defect(&gk, &a, 1e-10).unwrap().abs() < 1e-10);
        }
        let d = perturbed_density(&ds(&[1, 1]), 0.05).unwrap();
        assert!(symmetry_defect(&d, &ds(&[1, 2]), 1e-10).unwrap().abs() < 1e-9);
        assert!(symmetry_defect(&d, &ds(&[1, 1, 2]), 1e-10).unwrap().abs() > 1e-8);
    }

    #[test]
    fn lemma5_examples() {
        let tr = lemma5_trace(&ds(&[1]), &[1]).unwrap();
        assert_eq!(tr.samples[0].delta, rat(1, 6));
        assert_eq!(tr.samples[0].delta, extended_width(&ds(&[1]), 1, Extension::Append));

        let a = ds(&[3, 1, 4]);
        let tr = lemma5_trace(&a, &[1, 10, 100, 1000]).unwrap();
        assert_eq!(tr.limit, rat(19, 24));
        assert_eq!(tr.r, rat(5, 19));
        for s in &tr.samples {
            assert_eq!(s.delta, extended_width(&a, s.t, Extension::Append));
            assert_eq!(s.epsilon, extended_width(&a, s.t, Extension::PrependToReverse));
            assert_eq!(s.ratio, &s.epsilon / &s.delta);
        }
        let gaps: Vec<BigRational> = tr.samples.iter().map(|s| num_traits::Signed::abs(&(&s.ratio - &tr.limit))).collect();
        assert!(gaps.windows(2).all(|w| w[1] < w[0]));
        assert!(lemma5_trace(&a, &[0]).is_err());
    }

    #[test]
    fn tabulated_density() {
        let t = Tabulated::sample(gauss_kuzmin_density, 2001).unwrap();
        let d = Density::Tabulated(t);
        let v = measure_of(&d, &whole(), 1e-10).unwrap();
        assert!((v - 1.0).abs() < 1e-6);
        assert!(Tabulated::new(vec![0.0, 0.5], vec![1.0, 1.0]).is_err());
        assert!(Tabulated::new(vec![0.0, 1.0], vec![-1.0, 1.0]).is_err());
    }
}
