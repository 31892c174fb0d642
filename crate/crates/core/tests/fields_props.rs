use num_complex::Complex64;
use proptest::prelude::*;

use clifwave::fourier::{cft, icft};
use clifwave::grid::{read_field_csv, write_field_csv, CliffordField, Domain, GridSpec};
use clifwave::sum::pairwise_sum;

fn field(n: usize, points: usize) -> impl Strategy<Value = CliffordField> {
    let grid = GridSpec::centered(n, 4.0, points).unwrap();
    let len = (1 << n) * grid.node_count();
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), len).prop_map(move |c| {
        let data = c.into_iter().map(|(re, im)| Complex64::new(re, im)).collect();
        CliffordField::from_components(grid, Domain::Space, data).unwrap()
    })
}

fn small_field() -> impl Strategy<Value = CliffordField> {
    prop_oneof![field(1, 16), field(2, 8), field(3, 4)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cauchy_schwarz(f in field(2, 8), g in field(2, 8)) {
        let ip = f.inner_product(&g).unwrap();
        prop_assert!(ip.module() <= f.l2_norm() * g.l2_norm() * (1.0 + 1e-12));
    }

    #[test]
    fn inner_product_is_hermitian(f in small_field()) {
        let g = f.scale(Complex64::new(0.3, -1.2)).combine(Complex64::new(1.0, 0.0), &f.dagger(), Complex64::new(0.5, 0.0)).unwrap();
        let fg = f.inner_product(&g).unwrap();
        let gf = g.inner_product(&f).unwrap();
        prop_assert!(fg.dagger().max_abs_diff(&gf) <= 1e-12 * (1.0 + fg.module()));
    }

    #[test]
    fn fourier_round_trip_and_parseval(f in small_field()) {
        let spectrum = cft(&f);
        prop_assert!(icft(&spectrum).relative_l2_error(&f).unwrap() <= 1e-12);
        prop_assert!((spectrum.l2_norm_sqr() / f.l2_norm_sqr() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn fourier_is_linear(f in field(2, 8), g in field(2, 8), a in -3.0f64..3.0, b in -3.0f64..3.0) {
        let (ca, cb) = (Complex64::new(a, 0.5), Complex64::new(b, -1.0));
        let lhs = cft(&f.combine(ca, &g, cb).unwrap());
        let rhs = cft(&f).combine(ca, &cft(&g), cb).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs).unwrap() <= 1e-12 * (1.0 + lhs.max_abs()));
    }

    #[test]
    fn csv_round_trip_is_bit_exact(f in small_field()) {
        let mut buf = Vec::new();
        write_field_csv(&f, &mut buf).unwrap();
        let g = read_field_csv(buf.as_slice()).unwrap();
        prop_assert_eq!(g.data(), f.data());
        prop_assert_eq!(g.grid(), f.grid());
    }

    #[test]
    fn pad_then_crop_is_identity(f in small_field()) {
        let back = f.pad(2).crop(*f.grid()).unwrap();
        prop_assert_eq!(back.data(), f.data());
        // same terms plus zeros, summed along a different tree
        prop_assert!((f.pad(2).l2_norm_sqr() / f.l2_norm_sqr() - 1.0).abs() <= 1e-13);
    }

    #[test]
    fn pairwise_sum_matches_naive_sum(xs in prop::collection::vec(-1e3f64..1e3, 0..500)) {
        let naive: f64 = xs.iter().sum();
        let scale: f64 = xs.iter().map(|x| x.abs()).sum();
        prop_assert!((pairwise_sum(&xs) - naive).abs() <= 1e-12 * (1.0 + scale));
    }
}
