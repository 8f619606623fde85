use cfsym::lab::{
    lemma5_trace, measure_of, montecarlo_frequency, perturbed_density, symmetry_defect, Density, MonteCarloConfig,
    Sampling,
};
use cfsym::{convergent_matrix, fundamental_interval, BigInt, BigRational, DigitString, Extension};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-10;

fn ds(d: &[u64]) -> DigitString {
    DigitString::from_u64s(d).unwrap()
}

fn random_string(rng: &mut ChaCha8Rng, max_len: usize, max_digit: u64) -> DigitString {
    let len = rng.gen_range(1..=max_len);
    let d: Vec<u64> = (0..len).map(|_| rng.gen_range(1..=max_digit)).collect();
    ds(&d)
}

#[test]
fn quadrature_agrees_with_exact_measure() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    // A perturbation far away from every tested interval keeps the
    // quadrature path while leaving the Gauss-Kuzmin values intact.
    let d = perturbed_density(&ds(&[1000, 1000]), 1e-6).unwrap();
    for _ in 0..100 {
        let a = random_string(&mut rng, 5, 40);
        let i = fundamental_interval(&a);
        let exact = measure_of(&Density::GaussKuzmin, &i, TOL).unwrap();
        let quad = measure_of(&d, &i, TOL).unwrap();
        assert!(((quad - exact) / exact).abs() < TOL, "{a}: {quad} vs {exact}");
    }
}

#[test]
fn perturbation_preserves_short_symmetry() {
    for a0 in [ds(&[2]), ds(&[1, 1]), ds(&[3, 2])] {
        let n0 = a0.len();
        let d = perturbed_density(&a0, 0.05).unwrap();
        for len in 1..=n0 {
            let mut idx = vec![1u64; len];
            loop {
                let defect = symmetry_defect(&d, &ds(&idx), TOL).unwrap();
                assert!(defect.abs() < 10.0 * TOL, "a0={a0} a={idx:?}: {defect}");
                let Some(i) = idx.iter().rposition(|&x| x < 8) else { break };
                idx[i] += 1;
                idx[i + 1..].iter_mut().for_each(|x| *x = 1);
            }
        }
    }
}

#[test]
fn perturbation_breaks_longer_symmetry() {
    let d = perturbed_density(&ds(&[1, 1]), 0.05).unwrap();
    let defect = symmetry_defect(&d, &ds(&[1, 1, 2]), TOL).unwrap();
    // Direct integral of the bump over I(1,1,2) = [4/7, 3/5]; I(2,1,1) lies
    // outside I(1,1), so only the bump contributes.
    let (alpha, beta) = (0.5f64, 2.0 / 3.0);
    let w = beta - alpha;
    let two_pi = 2.0 * std::f64::consts::PI;
    let bump = |x: f64| -0.05 * w / two_pi * (two_pi * (x - alpha) / w).cos();
    let expect = bump(3.0 / 5.0) - bump(4.0 / 7.0);
    assert!((defect - expect).abs() < 1e-12, "{defect} vs {expect}");
    assert!(defect.abs() > 100.0 * TOL);
}

#[test]
fn ratio_trace_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..20 {
        let a = random_string(&mut rng, 6, 20);
        let tr = lemma5_trace(&a, &[1, 10, 100, 1000]).unwrap();
        let c = convergent_matrix(&a);
        let big = |x: &cfsym::BigUint| BigInt::from(x.clone());
        let (pp, p, qp, q) = (big(&c.p_prev), big(&c.p), big(&c.q_prev), big(&c.q));
        let r = BigRational::new(p.clone(), q.clone());
        let one = BigRational::from_integer(1.into());
        assert_eq!(tr.limit, &one / (&one + &r));
        for s in &tr.samples {
            let t = BigInt::from(s.t);
            let expect = BigRational::new(&qp + (&t + 1) * &q, &pp + &qp + &t * (&p + &q));
            assert_eq!(s.ratio, expect);
            let c1 = convergent_matrix(&a).extend(&s.t.into(), Extension::Append);
            assert_eq!(s.delta, cfsym::cf::fundamental_interval_of(&c1).width());
            let mut rev: Vec<u64> = vec![s.t];
            rev.extend(a.reversed().to_u64s().unwrap());
            assert_eq!(s.epsilon, fundamental_interval(&ds(&rev)).width());
        }
        let gap = |i: usize| num_traits::Signed::abs(&(&tr.samples[i].ratio - &tr.limit));
        assert!(gap(3) < gap(1) && gap(2) < gap(1));
    }
}

#[test]
fn invariant_sampling_within_three_sigma() {
    for (target, seed) in [(vec![1u64], 1u64), (vec![2], 2), (vec![1, 2], 3), (vec![3, 1, 4], 4)] {
        let mut cfg = MonteCarloConfig::new(200_000, 20, seed);
        cfg.sampling = Sampling::Invariant;
        let r = montecarlo_frequency(&ds(&target), &cfg).unwrap();
        let p = r.expected;
        let sigma = (p * (1.0 - p) / r.windows as f64).sqrt();
        assert!(r.abs_error() < 3.0 * sigma, "{target:?}: {} vs {p} (sigma {sigma})", r.frequency);
    }
}

#[test]
fn sampling_is_reproducible() {
    let mut cfg = MonteCarloConfig::new(20_000, 20, 42);
    cfg.workers = 1;
    let a = montecarlo_frequency(&ds(&[2]), &cfg).unwrap();
    cfg.workers = 4;
    assert_eq!(montecarlo_frequency(&ds(&[2]), &cfg).unwrap(), a);
}
