use gazekit::stats::{bartlett, chi_square_sf, kruskal_wallis};
use gazekit::Error;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

fn gamma_half(k: u32) -> f64 {
    // Γ(k/2) from Γ(1) = 1 and Γ(1/2) = √π
    let (mut g, mut a) = if k % 2 == 0 { (1.0, 1.0) } else { (std::f64::consts::PI.sqrt(), 0.5) };
    while a < k as f64 / 2.0 {
        g *= a;
        a += 1.0;
    }
    g
}

fn pdf(x: f64, k: u32) -> f64 {
    let h = k as f64 / 2.0;
    x.powf(h - 1.0) * (-x / 2.0).exp() / (2f64.powf(h) * gamma_half(k))
}

/// Composite Simpson over [x, x + 200].
fn tail_by_quadrature(x: f64, k: u32) -> f64 {
    let n = 200_000;
    let step = 200.0 / n as f64;
    let mut s = pdf(x, k) + pdf(x + 200.0, k);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * pdf(x + i as f64 * step, k);
    }
    s * step / 3.0
}

#[test]
fn chi_square_tail_matches_quadrature() {
    for k in 1..=10 {
        for x in [0.5, 1.0, 2.5, 5.0, 9.0, 15.0, 25.0, 40.0, 50.0] {
            let got = chi_square_sf(x, k);
            let want = tail_by_quadrature(x, k);
            assert!((got - want).abs() < 1e-6, "df {k} x {x}: {got} vs {want}");
        }
    }
}

#[test]
fn bartlett_three_groups_reference() {
    // reference values computed with scipy.stats.bartlett
    let a = [2.9, 3.0, 2.5, 2.6, 3.2];
    let b = [3.8, 2.7, 4.0, 2.4];
    let c = [2.8, 3.4, 3.7, 2.2, 2.0];
    let r = bartlett(&[&a, &b, &c]).unwrap();
    assert!((r.statistic - 3.2794144046012064).abs() < 1e-10);
    assert!((r.p_value - 0.1940368475168175).abs() < 1e-10);
    assert_eq!(r.df, 2);
}

#[test]
fn bartlett_hand_formula() {
    // two groups: variances 1 and 4, n = 3 each, pooled 2.5
    let r = bartlett(&[&[0.0, 1.0, 2.0], &[0.0, 2.0, 4.0]]).unwrap();
    let num = 4.0 * 2.5f64.ln() - 2.0 * 4f64.ln();
    let corr = 1.0 + (0.5 + 0.5 - 0.25) / 3.0;
    assert!((r.statistic - num / corr).abs() < 1e-12);
}

#[test]
fn bartlett_one_flat_group_is_infinite() {
    let r = bartlett(&[&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]]).unwrap();
    assert!(r.statistic.is_infinite());
    assert_eq!(r.p_value, 0.0);
    assert!(matches!(bartlett(&[&[2.0, 2.0], &[5.0, 5.0, 5.0]]), Err(Error::ZeroVariancePooled)));
}

#[test]
fn bartlett_equal_variance_monte_carlo() {
    let normal = Normal::new(0.0, 1.0).unwrap();
    let mut below = 0;
    for seed in 0..100 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g1: Vec<f64> = (0..1000).map(|_| normal.sample(&mut rng)).collect();
        let g2: Vec<f64> = (0..1000).map(|_| 3.0 + normal.sample(&mut rng)).collect();
        if bartlett(&[&g1, &g2]).unwrap().statistic < 6.63 {
            below += 1;
        }
    }
    assert!(below >= 98, "{below}/100 below 6.63");
}

#[test]
fn kruskal_reference_with_ties() {
    // reference values computed with scipy.stats.kruskal
    let x = [1.0, 2.0, 2.0, 3.0, 5.0, 5.0];
    let y = [2.0, 4.0, 5.0, 6.0, 7.0];
    let z = [1.0, 1.0, 3.0, 8.0];
    let r = kruskal_wallis(&[&x, &y, &z]).unwrap();
    assert!((r.statistic - 2.2217854966483865).abs() < 1e-10);
    assert!((r.p_value - 0.329264879155069).abs() < 1e-10);
}

#[test]
fn kruskal_interleaved_groups_against_permutations() {
    // identical interleaved distributions: H is small and typical of the
    // permutation distribution of H
    let a: Vec<f64> = (0..30).map(|i| (3 * i) as f64).collect();
    let b: Vec<f64> = (0..30).map(|i| (3 * i + 1) as f64).collect();
    let c: Vec<f64> = (0..30).map(|i| (3 * i + 2) as f64).collect();
    let observed = kruskal_wallis(&[&a, &b, &c]).unwrap();
    assert!(observed.p_value > 0.05);

    let mut pooled: Vec<f64> = a.iter().chain(&b).chain(&c).copied().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut at_least = 0;
    for _ in 0..500 {
        rand::seq::SliceRandom::shuffle(pooled.as_mut_slice(), &mut rng);
        let h = kruskal_wallis(&[&pooled[..30], &pooled[30..60], &pooled[60..]]).unwrap();
        if h.statistic >= observed.statistic {
            at_least += 1;
        }
    }
    assert!(at_least as f64 / 500.0 > 0.05);
}
