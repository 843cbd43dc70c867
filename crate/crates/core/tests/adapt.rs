use hfvrp::adapt::{AcceptState, HeuristicStats};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Realized distance proportional to the degree, with optional noise.
fn drive(start: f64, slope: f64, noise: f64, adjustments: usize, seed: u64) -> f64 {
    let (d_beta, gamma, n) = (15.0, 20, 100);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s = HeuristicStats::new(start);
    let mut done = 0;
    while done < adjustments {
        let jitter = if noise > 0.0 { rng.gen_range(-noise..noise) } else { 0.0 };
        let d = slope * s.omega_real() * (1.0 + jitter);
        if s.record_and_adjust(d, d_beta, gamma, n) {
            done += 1;
        }
    }
    s.omega_real()
}

#[test]
fn degree_settles_at_the_fixed_point() {
    for &(start, slope) in &[(1.0, 0.8), (15.0, 1.7), (90.0, 2.5), (4.0, 3.0)] {
        let target = 15.0 / slope;
        let exact = drive(start, slope, 0.0, 50, 0);
        assert!((exact - target).abs() <= 0.05 * target, "start {start} slope {slope}: {exact}");
        for seed in 0..10 {
            let noisy = drive(start, slope, 0.1, 50, seed);
            assert!((noisy - target).abs() <= 0.05 * target, "start {start} slope {slope} seed {seed}: {noisy}");
        }
    }
}

#[test]
fn degree_stays_clamped() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let n = 60;
    let mut s = HeuristicStats::new(15.0);
    for _ in 0..1_000_000 {
        let d = match rng.gen_range(0..4) {
            0 => 0.0,
            1 => rng.gen_range(0.0..1e-3),
            2 => rng.gen_range(0.0..400.0),
            _ => 1e6,
        };
        let gamma = rng.gen_range(1..5);
        s.record_and_adjust(d, 15.0, gamma, n);
        assert!((1.0..=n as f64).contains(&s.omega_real()));
        assert!((1..=n).contains(&s.omega()));
    }
}

/// Running mean up to `lambda`, then the exponential recurrence, written
/// out as a weighted sum.
fn closed_form(values: &[f64], lambda: usize) -> f64 {
    let t = values.len();
    if t <= lambda {
        return values.iter().sum::<f64>() / t as f64;
    }
    let w = 1.0 / lambda as f64;
    let head = values[..lambda].iter().sum::<f64>() / lambda as f64;
    let mut out = head * (1.0 - w).powi((t - lambda) as i32);
    for (k, f) in values[lambda..].iter().enumerate() {
        out += w * f * (1.0 - w).powi((t - lambda - 1 - k) as i32);
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn average_matches_closed_form(values in prop::collection::vec(0.0f64..1000.0, 1..150), lambda in 1usize..40) {
        let mut st = AcceptState::new(0.5, lambda);
        for (i, &f) in values.iter().enumerate() {
            st.update_average(f);
            prop_assert_eq!(st.iterations(), i + 1);
            let expected = closed_form(&values[..=i], lambda);
            prop_assert!((st.average() - expected).abs() <= 1e-9, "{} vs {}", st.average(), expected);
            let lo = values[(i + 1).saturating_sub(lambda)..=i].iter().copied().fold(f64::INFINITY, f64::min);
            prop_assert_eq!(st.window_min(), lo);
        }
    }

    #[test]
    fn threshold_endpoints_are_exact(values in prop::collection::vec(-1e6f64..1e6, 1..80), lambda in 1usize..30) {
        let mut low = AcceptState::new(0.0, lambda);
        let mut high = AcceptState::new(1.0, lambda);
        for &f in &values {
            low.update_average(f);
            high.update_average(f);
            prop_assert_eq!(low.threshold(), low.window_min());
            prop_assert_eq!(high.threshold(), high.average());
        }
    }

    #[test]
    fn threshold_is_monotone(values in prop::collection::vec(0.0f64..1000.0, 1..60), lambda in 1usize..30, e1 in 0.0f64..=1.0, e2 in 0.0f64..=1.0) {
        let (lo, hi) = if e1 <= e2 { (e1, e2) } else { (e2, e1) };
        let mut a = AcceptState::new(lo, lambda);
        let mut b = AcceptState::new(hi, lambda);
        for &f in &values {
            a.update_average(f);
            b.update_average(f);
        }
        let (ta, tb) = (a.threshold(), b.threshold());
        if a.average() >= a.window_min() {
            prop_assert!(ta <= tb);
        } else {
            prop_assert!(ta >= tb);
        }
        // Acceptance is a lower set.
        for x in [ta - 1.0, ta, ta + 1e-9, ta + 1.0] {
            if a.accept(x) {
                prop_assert!(a.accept(x - 0.5));
            }
        }
        prop_assert!(a.accept(ta));
    }
}
