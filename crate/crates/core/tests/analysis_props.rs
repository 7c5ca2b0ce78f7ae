use drumhead::analysis::{compare_fields, relative_change, Region};
use drumhead::discretize::rasterize;
use drumhead::geometry::EllipseDomain;
use drumhead::{Domain, GridField, Point2};
use proptest::prelude::*;

proptest! {
    #[test]
    fn ratio_statistics_follow_scaling(c in 0.01f64..100.0, a in 0.3f64..1.0) {
        let d: Domain = EllipseDomain::new(Point2::ORIGIN, 1.0, a, 0.2).unwrap().into();
        let g = rasterize(&d, 1.0 / 16.0).unwrap();
        let f = GridField::from_fn(&g, |p| 2.0 - p.x * p.x - p.y * p.y);
        let scaled = GridField::from_fn(&g, |p| c * (2.0 - p.x * p.x - p.y * p.y));
        let same = compare_fields(&g, &f, &f, &Region::interior()).unwrap();
        prop_assert!((same.ratio_min - 1.0).abs() < 1e-14 && (same.spread() - 1.0).abs() < 1e-14);
        let r = compare_fields(&g, &scaled, &f, &Region::all()).unwrap();
        prop_assert!((r.ratio_min / c - 1.0).abs() < 1e-12);
        prop_assert!((r.spread() - 1.0).abs() < 1e-12);
        prop_assert!(r.quantiles[0] <= r.quantiles[1] && r.quantiles[1] <= r.quantiles[2]);
    }

    #[test]
    fn relative_change_is_scale_free(a in 0.1f64..10.0, b in 0.1f64..10.0, s in 0.1f64..10.0) {
        prop_assert!((relative_change(a, b) - relative_change(s * a, s * b)).abs() < 1e-12);
        prop_assert!(relative_change(a, a) == 0.0);
    }
}
