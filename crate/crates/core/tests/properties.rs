use approx::assert_relative_eq;
use proptest::prelude::*;

use nematic_walls::crosstie::{l_over_h_from_ttilde, remark_crosstie_map, solve_Ttilde};
use nematic_walls::disc::hedgehog_field;
use nematic_walls::field::Field2D;
use nematic_walls::grid::Grid2D;
use nematic_walls::rect1d::{min_energy_1d, minimizer_profile, solve_M, wall_height_energy};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn wall_height_is_a_global_minimum(k in 0.05f64..4.0, a in 0.0f64..0.95) {
        let m = solve_M(k, 1.0, a).unwrap();
        prop_assert!(m >= a - 1e-15 && m <= 1.0);
        let best = wall_height_energy(k, a, m);
        for i in 0..=400 {
            let t = -1.0 + 2.0 * i as f64 / 400.0;
            prop_assert!(best <= wall_height_energy(k, a, t) + 1e-12);
        }
    }

    #[test]
    fn one_d_energy_closed_form(k in 0.01f64..1.99) {
        assert_relative_eq!(min_energy_1d(k, 0.0).unwrap(), k - k.powi(3) / 12.0, epsilon = 1e-12);
    }

    #[test]
    fn energy_depends_only_on_ratio(k in 0.1f64..3.0, h in 0.2f64..5.0, a in 0.0f64..0.9) {
        assert_relative_eq!(solve_M(k * h, h, a).unwrap(), solve_M(k, 1.0, a).unwrap(), epsilon = 1e-9);
    }

    #[test]
    fn profile_is_unit_and_meets_boundary_data(k in 0.1f64..3.0, a in 0.0f64..0.9, y in -1.0f64..1.0) {
        let p = minimizer_profile(k, 1.0, a).unwrap();
        let u = p.u_at(y);
        assert_relative_eq!(u[0].hypot(u[1]), 1.0, epsilon = 1e-12);
        assert_relative_eq!(p.u2_at(-1.0), a, epsilon = 1e-15);
        assert_relative_eq!(p.u2_at(1.0), a, epsilon = 1e-15);
    }

    #[test]
    fn period_round_trip(k in 0.1f64..5.0) {
        let tt = solve_Ttilde(k).unwrap();
        prop_assert!(tt > (std::f64::consts::PI / 8.0).tan() && tt < 1.0);
        assert_relative_eq!(l_over_h_from_ttilde(tt), k, max_relative = 1e-10);
    }

    #[test]
    fn explicit_maps_are_unit(x in -3.0f64..3.0, y in -3.0f64..3.0) {
        prop_assume!(x.hypot(y) > 1e-9);
        let u = remark_crosstie_map(x, y);
        assert_relative_eq!(u[0].hypot(u[1]), 1.0, epsilon = 1e-12);
        let k = 1.0 / (1.0 + x.hypot(y));
        for sign in [1.0, -1.0] {
            let u = hedgehog_field(sign, k * x, k * y);
            assert_relative_eq!(u[0].hypot(u[1]), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn field_csv_round_trip(seed in 0u64..1000, nx in 4usize..12, ny in 4usize..12) {
        let g = Grid2D::rectangle(0.7, 1.3, nx, ny, seed % 2 == 0).unwrap();
        let f = nematic_walls::gradflow::random_field(&g, seed);
        let mut buf = Vec::new();
        f.write_csv(&mut buf).unwrap();
        let back = Field2D::read_csv(&g, buf.as_slice()).unwrap();
        prop_assert_eq!(back.values, f.values);
    }
}
