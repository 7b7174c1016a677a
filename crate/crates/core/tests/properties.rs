use proptest::prelude::*;

use aniso_rearrange::geometry::{build_gauge, loomis_whitney_check, minimal_projection_chain, CellSet, GaugeGrid};
use aniso_rearrange::moduli::{modulus_axioms_check, ModulusCurve};
use aniso_rearrange::norms::{derive_params, lorentz_norm};
use aniso_rearrange::rearrange::{decreasing_rearrangement, distribution, dyadic_decrement, iterated_rearrangement};
use aniso_rearrange::report::{read_reports_csv, write_reports_csv};
use aniso_rearrange::verify::*;
use aniso_rearrange::{GridFunction, InequalityReport, Permutation, Verdict};

/// Small grids on the unit cube with quantized values (ties and zeros).
fn grid(max_dims: usize, max_len: usize) -> impl Strategy<Value = GridFunction> {
    prop::collection::vec(1..=max_len, 1..=max_dims).prop_flat_map(|shape| {
        let len: usize = shape.iter().product();
        prop::collection::vec(0u8..=8, len).prop_map(move |q| {
            let c: Vec<f64> = shape.iter().map(|&l| 1.0 / l as f64).collect();
            let vals = q.iter().map(|&v| f64::from(v) / 4.0).collect();
            GridFunction::new(shape.clone(), c, vec![0.0; shape.len()], vals).unwrap()
        })
    })
}

fn mdec(g: &GridFunction) -> GridFunction {
    let r = iterated_rearrangement(g, &Permutation::identity(g.dims())).unwrap();
    GridFunction::on_positive_orthant(r.shape().to_vec(), r.cell_sizes().to_vec(), r.values().to_vec()).unwrap()
}

fn ratio_close(a: &InequalityReport, b: &InequalityReport) -> bool {
    if a.verdict == Verdict::Degenerate || b.verdict == Verdict::Degenerate {
        return a.verdict == b.verdict;
    }
    if !a.ratio.is_finite() || !b.ratio.is_finite() {
        return a.ratio == b.ratio;
    }
    (a.ratio - b.ratio).abs() <= 1e-9 * a.ratio.abs().max(1e-300)
}

fn all_close(a: &[InequalityReport], b: &[InequalityReport]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| ratio_close(x, y))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rearrangement_is_equimeasurable(f in grid(3, 5)) {
        let sf = decreasing_rearrangement(&f);
        prop_assert!(sf.is_nonincreasing());
        let mut levels: Vec<f64> = f.values().to_vec();
        levels.push(0.0);
        for &y in &levels {
            let lf = distribution(&f, y).unwrap();
            let ls: f64 = sf.pieces().filter(|p| p.2 > y).map(|(a, b, _)| b - a).sum();
            prop_assert!((lf - ls).abs() <= 1e-12 * lf.max(1.0));
        }
        for sigma in Permutation::all(f.dims()) {
            let g = iterated_rearrangement(&f, &sigma).unwrap();
            prop_assert!(g.is_nonincreasing());
            let mut a = f.values().to_vec();
            let mut b = g.values().to_vec();
            a.sort_by(f64::total_cmp);
            b.sort_by(f64::total_cmp);
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn lorentz_diagonal_is_lp(f in grid(2, 6), p in 1.0f64..4.0) {
        let sf = decreasing_rearrangement(&f);
        let a = lorentz_norm(&sf, p, p).unwrap();
        let b = f.lp_norm(p).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * b.max(1e-300));
    }

    #[test]
    fn dyadic_decrement_is_nonnegative_and_telescopes(f in grid(2, 5)) {
        let sf = decreasing_rearrangement(&f);
        let phi = dyadic_decrement(&sf).unwrap();
        for (_, _, v) in phi.pieces() {
            prop_assert!(v >= 0.0);
        }
        for k in 1..12 {
            let t = k as f64 / 8.0;
            let sum: f64 = (0..40).map(|j| phi.eval(t * 2f64.powi(j))).sum();
            prop_assert!((sum - sf.eval(t)).abs() <= 1e-12);
        }
    }

    #[test]
    fn modulus_curves_are_moduli(f in grid(2, 6), p in prop::sample::select(vec![1.0, 1.5, 2.0, 3.0])) {
        for k in 0..f.dims() {
            let curve = ModulusCurve::new(&f, k, p).unwrap();
            let rep = modulus_axioms_check(|d| curve.omega(d), f.cell_sizes()[k] / 4.0, 10, 1e-9);
            prop_assert!(rep.line("monotone").unwrap().pass);
            prop_assert!(rep.line("subadditive").unwrap().pass);
            prop_assert!(rep.line("zero_at_origin").unwrap().pass);
            let bound = 2f64.powf(1.0 / p) * f.lp_norm(p).unwrap();
            prop_assert!(curve.omega(1e6) <= bound * (1.0 + 1e-12));
        }
    }

    #[test]
    fn explicit_constants_hold(f in grid(2, 5), p in prop::sample::select(vec![1.0, 2.0])) {
        let deltas: Vec<f64> = (1..=8).map(|k| k as f64 / 16.0).collect();
        let sigmas = Permutation::all(f.dims());
        for r in verify_rearrangement_modulus(&f, "f", p, &deltas, &sigmas).unwrap() {
            prop_assert!(r.verdict != Verdict::Fail, "{:?}", r);
        }
        for r in verify_modulus_lemmas(&f, "f", p, &deltas).unwrap() {
            prop_assert!(r.verdict != Verdict::Fail, "{:?}", r);
        }
        let phi = mdec(&f);
        for r in verify_appendix_ops(&phi, "f", &[1, 2], &[-0.5, 0.0, 1.5], &[1.5, 3.0], &[0.2, 0.5], p).unwrap() {
            prop_assert!(r.verdict != Verdict::Fail, "{:?}", r);
        }
    }

    #[test]
    fn loomis_whitney_on_random_masks(shape in prop::collection::vec(1usize..=6, 2..=3), bits in prop::collection::vec(any::<bool>(), 216)) {
        let len: usize = shape.iter().product();
        let cells: Vec<usize> = (0..len).filter(|&i| bits[i]).collect();
        let sizes = vec![0.5; shape.len()];
        let e = CellSet::new(shape, sizes, cells, None).unwrap();
        let r = loomis_whitney_check(&e, "mask").unwrap();
        prop_assert!(r.verdict != Verdict::Fail);
        if !e.is_empty() {
            let chain = minimal_projection_chain(&e).unwrap();
            for w in chain.windows(2) {
                prop_assert!(w[1].is_subset_of(&w[0]));
            }
        }
    }

    #[test]
    fn gauge_product_bound(f in grid(2, 6).prop_filter("2-D", |f| f.dims() == 2)) {
        for sigma in Permutation::all(2) {
            let g = build_gauge(&f, &sigma, &GaugeGrid::AllEven).unwrap();
            for pt in g.points() {
                prop_assert!(pt.product_bound_holds && pt.loomis_whitney_holds && pt.band_holds);
            }
        }
    }

    #[test]
    fn report_csv_round_trips(lhs in 0.0f64..10.0, rhs in 0.0f64..10.0, budget in 0.5f64..4.0) {
        let r = InequalityReport::evaluate("x", "f", serde_json::json!({"p": 1.5, "sigma": "(2,1)"}), lhs, rhs, budget);
        let mut buf = Vec::new();
        write_reports_csv(std::slice::from_ref(&r), &mut buf).unwrap();
        let back = read_reports_csv(buf.as_slice()).unwrap();
        prop_assert_eq!(back, vec![r]);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    /// Every verifier is homogeneous: `f ↦ 3f` leaves each ratio unchanged.
    #[test]
    fn ratios_are_scale_invariant(f in grid(2, 6).prop_filter("2-D", |f| f.dims() == 2)) {
        let g = f.scaled(3.0).unwrap();
        let inf = f64::INFINITY;
        let deltas = [0.125, 0.25, 0.5];
        let sig = Permutation::all(2);
        let each = |h: &GridFunction| -> Vec<InequalityReport> {
            let mut v = Vec::new();
            for &d in &deltas {
                v.push(verify_isotropic_estimate(h, "f", 1.5, d, inf).unwrap());
            }
            let gauge = build_gauge(h, &sig[0], &GaugeGrid::AllEven).unwrap();
            v.extend(verify_anisotropic_estimate(h, "f", 1.0, &gauge, &[0.125, 0.5], (inf, inf)).unwrap());
            let bp = derive_params(1.0, &[0.5, 0.75], &[1.0, 2.0]).unwrap();
            v.extend(verify_embedding(h, "f", &bp, &NormFlavor::Lorentz, inf, false).unwrap());
            v.extend(verify_embedding(h, "f", &bp, &NormFlavor::Mixed(sig[1].clone()), inf, false).unwrap());
            v.extend(limiting_sweep(h, "f", 1.0, &[0.5, 0.5], &[2.0, 2.0], &[0, 1], 3, &NormFlavor::Lorentz, inf).unwrap().reports);
            v.push(verify_lipschitz_corollary(h, "f", 1.0, &[0.5, 0.75], inf).unwrap());
            v.extend(verify_bourgain(h, "f", 1.0, 0.5, (inf, inf)).unwrap());
            v.extend(verify_rearrangement_modulus(h, "f", 2.0, &deltas, &sig).unwrap());
            v.extend(verify_modulus_lemmas(h, "f", 1.0, &deltas).unwrap());
            v.extend(verify_appendix_ops(&mdec(h), "f", &[1, 2], &[0.5], &[2.0], &[0.25], 1.0).unwrap());
            v.push(verify_lorentz_comparison(h, "f", 2.0, 1.0, &sig[0], inf).unwrap());
            v
        };
        let (a, b) = (each(&f), each(&g));
        prop_assert!(all_close(&a, &b));
        let ta = verify_limit_relations(&f, "f", 0, 1.0, 2.0, 4);
        let tb = verify_limit_relations(&g, "f", 0, 1.0, 2.0, 4);
        if let (Ok(ta), Ok(tb)) = (ta, tb) {
            for (x, y) in ta.points.iter().zip(&tb.points) {
                prop_assert!((x.relative_gap() - y.relative_gap()).abs() <= 1e-9);
            }
        }
    }
}

#[test]
fn degenerate_inputs_never_fail() {
    let z = GridFunction::new(vec![4, 4], vec![0.25, 0.25], vec![0.0, 0.0], vec![0.0; 16]).unwrap();
    let mut reps = vec![verify_isotropic_estimate(&z, "z", 1.0, 0.25, 1.0).unwrap()];
    let bp = derive_params(1.0, &[0.5, 0.5], &[1.0, 1.0]).unwrap();
    reps.extend(verify_embedding(&z, "z", &bp, &NormFlavor::Lorentz, 1.0, false).unwrap());
    reps.extend(verify_bourgain(&z, "z", 1.0, 0.5, (1.0, 1.0)).unwrap());
    reps.extend(verify_modulus_lemmas(&z, "z", 1.0, &[0.25]).unwrap());
    reps.extend(verify_rearrangement_modulus(&z, "z", 1.0, &[0.25], &Permutation::all(2)).unwrap());
    let g = build_gauge(&z, &Permutation::identity(2), &GaugeGrid::AllEven).unwrap();
    reps.extend(verify_anisotropic_estimate(&z, "z", 1.0, &g, &[0.25], (1.0, 1.0)).unwrap());
    reps.extend(gauge_reports(&g, "z"));
    assert!(!reps.is_empty());
    for r in reps {
        assert_eq!(r.verdict, Verdict::Degenerate, "{r:?}");
    }
}
