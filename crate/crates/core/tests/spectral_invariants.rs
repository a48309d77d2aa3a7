use linfreg_core::perconv::{adversarial_perturbation, singular_kernel, svd_of_convolution, AdversarialParams};
use linfreg_core::regularizers::{
    apply_filter, linf_bound_constant, picard_terms, source_set_data, uniform_terms, weight_schedule, FilterScheme,
    SvdOperator, WeightSchedule,
};
use linfreg_core::series::diagnose;
use linfreg_core::{norm, Complex64, FourierSignal, NormKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const RHO: f64 = 1.0 / 3.0;

fn setup(n: usize) -> (linfreg_core::perconv::PeriodicKernel, SvdOperator) {
    let k = singular_kernel(RHO, n).unwrap();
    let op = svd_of_convolution(&k).unwrap();
    (k, op)
}

fn sup(s: &FourierSignal) -> f64 {
    norm(s, NormKind::SupGrid).unwrap()
}

fn l2(s: &FourierSignal) -> f64 {
    norm(s, NormKind::L2Torus).unwrap()
}

fn artifact_sups(alpha: f64) -> Vec<(f64, f64, f64)> {
    [32usize, 64, 128, 256, 512]
        .iter()
        .map(|&n| {
            let (k, op) = setup(n);
            let r = adversarial_perturbation(&AdversarialParams::new(RHO, n).unwrap(), &k).unwrap();
            let tik = apply_filter(&op, &FilterScheme::tikhonov(alpha).unwrap(), &r).unwrap().signal;
            let w = weight_schedule(&op, 4.0, 1.0, 1.0).unwrap();
            let wt = apply_filter(&op, &FilterScheme::weighted(alpha, w).unwrap(), &r).unwrap().signal;
            (l2(&r), sup(&tik), sup(&wt))
        })
        .collect()
}

#[test]
fn adversarial_sequence_certificate() {
    let rows = artifact_sups(0.01);
    let bound: f64 = (-100_000i64..=100_000).map(|n| ((n.abs() + 1) as f64).powf(-4.0 / 3.0)).sum::<f64>().sqrt();
    for w in rows.windows(2) {
        assert!(w[1].0 <= bound);
        assert!(w[1].1 > w[0].1, "Tikhonov sup must grow: {:?}", rows);
    }
}

/// The weighted reconstruction of r_N is bounded uniformly in N by C′‖r_N‖/α,
/// and its growth across doublings decays. (Near-flatness on N ≤ 512 does not
/// hold at α = 0.01; see the acceptance report.)
#[test]
fn weighted_reconstruction_of_adversarial_sequence_is_uniformly_bounded() {
    let alpha = 0.01;
    let rows = artifact_sups(alpha);
    let (_, big_op) = setup(1 << 14);
    let w = weight_schedule(&big_op, 4.0, 1.0, 1.0).unwrap();
    let c_prime = linf_bound_constant(&big_op, &w, 4.0).unwrap().constant;
    for &(r_norm, tik, weighted) in &rows {
        assert!(weighted <= c_prime * r_norm / alpha);
        assert!(weighted < tik);
    }
    // Increments peak near N = 128 and then start to shrink.
    let increments: Vec<f64> = rows.windows(2).map(|w| w[1].2 - w[0].2).collect();
    assert!(increments[3] < increments[2], "{increments:?}");
    let tik_growth = rows[4].1 / rows[2].1;
    let weighted_growth = rows[4].2 / rows[2].2;
    assert!(weighted_growth < tik_growth);
}

/// ŷ[n] = (|n|+1)^{−p} on |n| ≤ N.
fn power_data(n: usize, p: f64) -> FourierSignal {
    FourierSignal::real_from_half(n, |k| Complex64::new(((k + 1) as f64).powf(-p), 0.0))
}

#[test]
fn sobolev_data_lies_in_uniform_set() {
    let (_, op) = setup(4096);
    // In H^s with s = 1/2 + ρ + 0.05: Σ n^{2s}|ŷ|² needs decay exponent above s + 1/2.
    let s = 0.5 + RHO + 0.05;
    let y = power_data(4096, s + 0.5 + 0.2);
    assert!(diagnose(&uniform_terms(&op, &y).unwrap()).converging);
    // Decay exponent 1/2 + ρ + 0.2 leaves U-sum terms ~ n^{−0.7}.
    let literal = power_data(4096, 0.5 + RHO + 0.2);
    assert!(!diagnose(&uniform_terms(&op, &literal).unwrap()).converging);
}

#[test]
fn sobolev_data_lies_in_source_sets() {
    let (_, op) = setup(4096);
    for eta in [1.0, 2.0, 4.0] {
        let s = RHO + eta * RHO / 2.0 + 0.05;
        let y = power_data(4096, s + 0.5 + 0.2);
        assert!(diagnose(&picard_terms(&op, &y, eta).unwrap()).converging, "eta={eta}");
    }
}

#[test]
fn source_sets_embed_in_uniform_set() {
    let (_, op) = setup(2048);
    let w = weight_schedule(&op, 4.0, 1.0, 1.0).unwrap();
    // Σ σ^η ‖v‖² converges for η = 4 (ρη = 4/3 > 1).
    assert!(!linf_bound_constant(&op, &w, 4.0).unwrap().flagged());
    let y = source_set_data(&op, 4.0);
    assert!(diagnose(&picard_terms(&op, &y, 4.0).unwrap()).converging);
    assert!(diagnose(&uniform_terms(&op, &y).unwrap()).converging);
}

#[test]
fn linf_constant_bounds_random_probes() {
    let (_, op) = setup(256);
    let w = weight_schedule(&op, 4.0, 1.0, 1.0).unwrap();
    let c_prime = linf_bound_constant(&op, &w, 4.0).unwrap().constant;
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for alpha in [1e-3, 1e-2, 1e-1] {
        let scheme = FilterScheme::weighted(alpha, w.clone()).unwrap();
        for _ in 0..200 {
            let y = FourierSignal::real_from_half(256, |_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
            let y = &y * (1.0 / l2(&y));
            let x = apply_filter(&op, &scheme, &y).unwrap().signal;
            assert!(alpha * sup(&x) <= c_prime);
        }
    }
}

#[test]
fn linf_constant_converges_slowly_under_doubling() {
    let constant = |n| {
        let (_, op) = setup(n);
        let w = weight_schedule(&op, 4.0, 1.0, 1.0).unwrap();
        linf_bound_constant(&op, &w, 4.0).unwrap().constant
    };
    let c: Vec<f64> = [128, 256, 512, 1024].iter().map(|&n| constant(n)).collect();
    assert!((c[2] - c[1]) / c[1] < 0.02);
    assert!(c[3] - c[2] < c[2] - c[1] && c[2] - c[1] < c[1] - c[0]);
}

#[test]
fn uniform_sum_bounds_pseudoinverse_sup() {
    let (_, op) = setup(128);
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for _ in 0..20 {
        let y = FourierSignal::real_from_half(128, |k| {
            let decay = ((k + 1) as f64).powf(-2.0);
            Complex64::new(rng.random_range(-1.0..1.0) * decay, rng.random_range(-1.0..1.0) * decay)
        });
        let x = apply_filter(&op, &FilterScheme::pseudoinverse(), &y).unwrap();
        assert!(!x.flagged());
        let u: f64 = uniform_terms(&op, &y).unwrap().iter().sum();
        assert!(sup(&x.signal) <= u * 1.02);
    }
}

#[test]
fn l2_error_decreases_along_dyadic_alphas() {
    let (k, op) = setup(512);
    let x = linfreg_core::perconv::test_signal(&linfreg_core::perconv::TestSignalKind::piecewise_linear(), 512).unwrap();
    let y = linfreg_core::perconv::forward_convolve(&k, &x).unwrap();
    let w = weight_schedule(&op, 4.0, 1.0, 1.0).unwrap();
    let mut last = f64::INFINITY;
    for kk in 2..=12 {
        let alpha = 2f64.powi(-kk);
        let rec = apply_filter(&op, &FilterScheme::weighted(alpha, w.clone()).unwrap(), &y).unwrap().signal;
        let err = l2(&(&rec - &x));
        assert!(err <= last);
        last = err;
    }
    assert!(last < 0.01 * l2(&x));
}

fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

#[test]
fn convergence_rates_match_theory() {
    let n = 512;
    let beta = 1.0;
    let (k, op) = setup(n);
    let c: Vec<f64> = op.sigmas().iter().map(|s| 1.0 / s).collect();
    let w = WeightSchedule::new(c, 1.0, beta, 1.0, op.sigmas()).unwrap();
    let adversarial = adversarial_perturbation(&AdversarialParams::new(RHO, n).unwrap(), &k).unwrap();
    let direction = &adversarial * (1.0 / l2(&adversarial));
    let alphas: Vec<f64> = (4..=14).map(|kk| 2f64.powi(-kk)).collect();
    let log_a: Vec<f64> = alphas.iter().map(|a| a.ln()).collect();
    for eta in [1.0, 2.0, 4.0] {
        let target = f64::min(1.0, eta / 4.0);
        let rec = |y: &FourierSignal, a: f64| apply_filter(&op, &FilterScheme::weighted(a, w.clone()).unwrap(), y).unwrap().signal;
        let pinv = |y: &FourierSignal| apply_filter(&op, &FilterScheme::pseudoinverse(), y).unwrap().signal;

        let y2 = source_set_data(&op, eta + 2.0 * beta);
        let x2 = pinv(&y2);
        let e2: Vec<f64> = alphas.iter().map(|&a| l2(&(&rec(&y2, a) - &x2)).ln()).collect();
        assert!(slope(&log_a, &e2) >= target - 0.1, "eta={eta} L2");

        let yi = source_set_data(&op, 2.0 * eta + 2.0 * beta);
        let xi = pinv(&yi);
        let ei: Vec<f64> = alphas.iter().map(|&a| sup(&(&rec(&yi, a) - &xi)).ln()).collect();
        assert!(slope(&log_a, &ei) >= target - 0.15, "eta={eta} Linf");

        let deltas: Vec<f64> = (0..9).map(|i| 10f64.powf(-6.0 + 0.5 * i as f64)).collect();
        let en: Vec<f64> = deltas
            .iter()
            .map(|&d| {
                let noisy = &yi + &(&direction * d);
                sup(&(&rec(&noisy, d.sqrt()) - &xi)).ln()
            })
            .collect();
        let log_d: Vec<f64> = deltas.iter().map(|d| d.ln()).collect();
        assert!(slope(&log_d, &en) >= f64::min(0.5, eta / 8.0) - 0.1, "eta={eta} noise");
    }
}
