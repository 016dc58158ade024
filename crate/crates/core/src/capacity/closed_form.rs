//! Closed forms for the unbounded cascade and the time-sharing baseline.

/// Capacity of the cascade with an unbounded number of relays,
/// `log2((1 + sqrt(4q + 1)) / 2)`.
pub fn capacity_infinite(q: u32) -> f64 {
    ((1.0 + root4q1(q)) / 2.0).log2()
}

/// Listen fraction that every relay uses in the unbounded cascade.
pub fn infinite_listen_fraction(q: u32) -> f64 {
    0.5 * (1.0 + 1.0 / root4q1(q))
}

/// Percentage of time each relay transmits in the unbounded cascade.
pub fn duty_cycle_infinite(q: u32) -> f64 {
    50.0 * (1.0 - 1.0 / root4q1(q))
}

/// Best rate with an a-priori transmit/listen schedule, `log2 sqrt(q + 1)`.
pub fn time_sharing_rate(q: u32) -> f64 {
    0.5 * f64::from(q + 1).log2()
}

/// Interior hop entropy when every relay uses the same listen fraction `p`,
/// `-(1-p) log2((1-p)/(q p)) - (2p-1) log2((2p-1)/p)` for `p ∈ [1/2, 1]`.
pub fn uniform_hop_entropy(p: f64, q: u32) -> f64 {
    let t = 1.0 - p;
    let term = |num: f64, den: f64| if num <= 0.0 { 0.0 } else { -num * (num / den).log2() };
    term(t, f64::from(q) * p) + term(2.0 * p - 1.0, p)
}

fn root4q1(q: u32) -> f64 {
    (4.0 * f64::from(q) + 1.0).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_ratio_and_unit() {
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((capacity_infinite(1) - phi.log2()).abs() < 1e-15);
        assert!((capacity_infinite(1) - 0.6942).abs() < 1e-4);
        assert!((capacity_infinite(2) - 1.0).abs() < 1e-12);
        assert!((capacity_infinite(6) - 3f64.log2()).abs() < 1e-15);
    }

    #[test]
    fn duty_cycle() {
        assert!((duty_cycle_infinite(2) - 100.0 / 3.0).abs() < 1e-12);
        assert!((duty_cycle_infinite(1) - 27.64).abs() < 5e-3);
        assert!((duty_cycle_infinite(1) - 100.0 * (1.0 - infinite_listen_fraction(1))).abs() < 1e-12);
        assert!(duty_cycle_infinite(1_000_000) > 49.9);
        assert!(duty_cycle_infinite(1_000_000) < 50.0);
    }

    #[test]
    fn time_sharing() {
        assert!((time_sharing_rate(1) - 0.5).abs() < 1e-15);
        assert!((time_sharing_rate(2) - 0.7925).abs() < 1e-4);
        assert!((time_sharing_rate(3) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn uniform_hop_maximum_sits_at_listen_fraction() {
        // brute-force scan of the interior hop entropy
        for q in [1u32, 2, 5, 17] {
            let (mut best_p, mut best) = (0.5, f64::NEG_INFINITY);
            for k in 0..=200_000 {
                let p = 0.5 + 0.5 * f64::from(k) / 200_000.0;
                let v = uniform_hop_entropy(p, q);
                if v > best {
                    best = v;
                    best_p = p;
                }
            }
            assert!((best - capacity_infinite(q)).abs() < 1e-9, "q = {q}");
            assert!((best_p - infinite_listen_fraction(q)).abs() < 1e-4, "q = {q}");
        }
    }
}
