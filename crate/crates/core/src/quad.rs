//! Composite Gauss–Legendre rules for the few smooth pieces that have no
//! convenient antiderivative.

const NODES: [f64; 4] = [
    0.183_434_642_495_649_8,
    0.525_532_409_916_329,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_3,
];
const WEIGHTS: [f64; 4] = [
    0.362_683_783_378_362,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_5,
    0.101_228_536_290_376_3,
];

/// Eight-point Gauss–Legendre nodes and weights mapped to `[a, b]`.
pub(crate) fn gl8_points(a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    NODES.into_iter().zip(WEIGHTS).flat_map(move |(x, w)| {
        [(mid - half * x, half * w), (mid + half * x, half * w)]
    })
}

/// `∫_a^b f` with `panels` equal panels of the eight-point rule.
pub(crate) fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
    if b <= a {
        return 0.0;
    }
    let h = (b - a) / panels as f64;
    (0..panels)
        .map(|i| {
            let lo = a + i as f64 * h;
            let hi = if i + 1 == panels { b } else { lo + h };
            gl8_points(lo, hi).map(|(x, w)| w * f(x)).sum::<f64>()
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_for_degree_fifteen() {
        let v = integrate(|x| x.powi(15) + 3.0 * x.powi(4), 0.0, 2.0, 1);
        let exact = 2f64.powi(16) / 16.0 + 3.0 * 32.0 / 5.0;
        assert!((v - exact).abs() < 1e-10 * exact);
    }

    #[test]
    fn smooth_exponential() {
        let v = integrate(|x| (-5.0 * x).exp(), 0.0, 3.0, 6);
        let exact = (1.0 - (-15.0f64).exp()) / 5.0;
        assert!((v - exact).abs() < 1e-13);
    }
}
