//! Synthesis checks: the closed-form inscribed circle against the dense
//! scan oracle, conditioning-index properties, and chart invariants.

mod common;

use approx::assert_relative_eq;
use common::mic_oracle;
use lizard_kinematics::fivebar::BranchSelector;
use lizard_kinematics::fivebar::FiveBarGeometry;
use lizard_kinematics::synthesis::{
    circle_inscribed, dimensionalize, lci, lci_chart, lci_chart_serial, mic, point_in_workspace,
    symmetric_geometry, validate_params, workspace_chart, GridSpec,
};
use lizard_kinematics::Point2;
use proptest::prelude::*;

fn head() -> FiveBarGeometry {
    FiveBarGeometry::new(20.0, 30.0, 30.0, 50.0, 50.0).unwrap()
}

#[test]
fn mic_closed_form_matches_scan_oracle() {
    for geom in [
        head(),
        FiveBarGeometry::new(30.0, 40.0, 40.0, 55.0, 55.0).unwrap(),
        FiveBarGeometry::new(10.0, 55.0, 55.0, 35.0, 35.0).unwrap(),
    ] {
        let closed = mic(&geom).unwrap();
        let (r_oracle, y_oracle) = mic_oracle(&geom);
        assert_relative_eq!(closed.r_mic, r_oracle, epsilon = 1e-6);
        assert_relative_eq!(closed.y_mic, y_oracle, epsilon = 1e-6);
        // The settled circle really fits, at sub-millimeter sampling.
        let rim_samples = (closed.r_mic * std::f64::consts::TAU / 0.5).ceil() as usize;
        assert!(circle_inscribed(
            &geom,
            Point2::new(0.0, closed.y_mic),
            closed.r_mic - 1e-9,
            rim_samples
        ));
        // Nothing meaningfully larger fits.
        assert!(!circle_inscribed(
            &geom,
            Point2::new(0.0, closed.y_mic),
            closed.r_mic + 0.5,
            rim_samples
        ));
    }
}

#[test]
fn nondimensional_reference_mic() {
    // The unit-scale symmetric design (0.3, 0.5, 0.1) has inscribed
    // radius exactly 0.3.
    let p = validate_params(0.3, 0.5, 0.1).unwrap();
    let geom = symmetric_geometry(&p, p.r3);
    let m = mic(&geom).unwrap();
    assert_relative_eq!(m.r_mic, 0.3, epsilon = 1e-12);
}

#[test]
fn lci_chart_values_all_in_unit_interval() {
    let geom = head();
    let spec = GridSpec { x_range: (-85.0, 85.0), y_range: (0.0, 85.0), nx: 60, ny: 40 };
    let chart = lci_chart(&geom, spec, &BranchSelector::default());
    assert!(chart.masked_count() > 500);
    for (v, m) in chart.values.iter().zip(chart.mask.iter()) {
        if *m {
            assert!((0.0..=1.0).contains(v), "lci {v} outside [0,1]");
        } else {
            assert_eq!(*v, 0.0);
        }
    }
    assert_eq!(chart, lci_chart_serial(&geom, spec, &BranchSelector::default()));
}

#[test]
fn median_lci_inside_the_inscribed_circle_is_high() {
    let geom = head();
    let m = mic(&geom).unwrap();
    let spec = GridSpec::default_for(&geom);
    let chart = lci_chart(&geom, spec, &BranchSelector::default());
    let mut inside: Vec<f64> = Vec::new();
    for j in 0..spec.ny {
        for i in 0..spec.nx {
            let p = Point2::new(spec.x_at(i), spec.y_at(j));
            let (v, mask) = chart.at(i, j);
            if mask && (p - Point2::new(0.0, m.y_mic)).norm() <= m.r_mic {
                inside.push(v);
            }
        }
    }
    assert!(inside.len() > 200, "disk sampling too sparse: {}", inside.len());
    inside.sort_by(|a, b| a.total_cmp(b));
    let median = inside[inside.len() / 2];
    assert!(median > 0.7, "median conditioning {median} over the inscribed disk");
}

#[test]
fn workspace_chart_counts_match_annulus_area() {
    let geom = head();
    let spec = GridSpec { x_range: (-90.0, 90.0), y_range: (-90.0, 90.0), nx: 121, ny: 121 };
    let chart = workspace_chart(&geom, spec);
    let frac = chart.masked_count() as f64 / (spec.nx * spec.ny) as f64;
    // Membership fraction approximates (workspace area) / (window area);
    // the union-of-annuli intersection here covers roughly half the
    // bounding square. Loose bound: it must be substantial and not full.
    assert!(frac > 0.3 && frac < 0.9, "membership fraction {frac}");
    // Bilateral symmetry of the membership mask.
    for j in 0..spec.ny {
        for i in 0..spec.nx {
            assert_eq!(chart.at(i, j).1, chart.at(spec.nx - 1 - i, j).1);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn lci_is_scale_invariant(
        scale in 0.5f64..20.0,
        x in -40.0f64..40.0,
        y in 20.0f64..70.0,
    ) {
        let geom = head();
        let scaled = FiveBarGeometry::new(
            geom.l0 * scale, geom.l1 * scale, geom.l4 * scale, geom.l2 * scale, geom.l3 * scale,
        ).unwrap();
        let p = Point2::new(x, y);
        let b = BranchSelector::default();
        match (lci(&geom, p, &b), lci(&scaled, scale * p, &b)) {
            (Ok(a), Ok(bb)) => prop_assert!((a - bb).abs() < 1e-9),
            (Err(_), Err(_)) => {}
            (a, bb) => prop_assert!(false, "scale changed feasibility: {:?} vs {:?}", a, bb),
        }
    }

    #[test]
    fn validated_tuples_dimensionalize_consistently(
        r3 in 0.02f64..0.44,
        frac in 0.05f64..0.95,
        scale in 1.0f64..50.0,
    ) {
        let rest = 0.9 - r3;
        let r1 = rest * frac;
        let p = validate_params(r1, rest - r1, r3).unwrap();
        let (f, l0, l1, l2) = dimensionalize(&p, scale);
        prop_assert!((l0 - 2.0 * scale).abs() < 1e-9);
        prop_assert!((l1 / f.d - p.r1).abs() < 1e-12);
        prop_assert!((l2 / f.d - p.r2).abs() < 1e-12);
    }

    #[test]
    fn workspace_membership_is_symmetric(x in -80.0f64..80.0, y in -80.0f64..80.0) {
        let geom = head();
        let p = Point2::new(x, y);
        let q = Point2::new(-x, y);
        prop_assert_eq!(point_in_workspace(&geom, p), point_in_workspace(&geom, q));
    }
}
