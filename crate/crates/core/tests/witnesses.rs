mod common;

use proptest::prelude::*;

use common::{config, extremal_average_oracle, rearranged, samples};
use riembed_core::criteria::{marcinkiewicz_norm, optimal_morrey_target};
use riembed_core::witnesses::{
    extremal_vf_centered_average, morrey_lower_witness, radial_morrey_norm, tail_pairing, RadialProfile,
};
use riembed_core::{Grid, RiSpace, StepFunction, Weight};

const MEASURES: [f64; 6] = [1e-1, 1e-2, 1e-3, 1e-4, 1e-6, 1e-8];

#[test]
fn lebesgue_two_dictionary_tracks_the_kernel() {
    let x = RiSpace::lebesgue(2.0).unwrap();
    for (n, m) in [(3, 1), (4, 1), (4, 2)] {
        let w = morrey_lower_witness(&x, n, m, &Weight::power(-0.5), &MEASURES).unwrap();
        assert!(w.min_tracking >= 0.125 && w.max_tracking <= 8.0, "n = {n}, m = {m}: {w:?}");
    }
}

#[test]
fn optimal_target_ratios_are_bounded_both_ways() {
    let x = RiSpace::lebesgue(2.0).unwrap();
    let grid = Grid::log_spaced(1e-14, 16).unwrap();
    for (n, m) in [(3, 1), (4, 2)] {
        let phi = optimal_morrey_target(&x, n, m, &grid).unwrap();
        let w = morrey_lower_witness(&x, n, m, &phi, &MEASURES).unwrap();
        for row in &w.rows {
            assert!(row.kernel_ratio > 0.5 && row.kernel_ratio < 2.0, "{row:?}");
            assert!(row.best_ratio >= 2f64.powi(-(m as i32)) * 0.9, "{row:?}");
            assert!(row.best_ratio <= 8.0, "{row:?}");
        }
    }
}

#[test]
fn uniform_profile_has_finite_ratio() {
    let x = RiSpace::zygmund(2.0, 1.0).unwrap();
    let w = morrey_lower_witness(&x, 3, 1, &Weight::power(-0.5), &MEASURES).unwrap();
    assert!(w.rows.iter().all(|r| r.best_ratio.is_finite() && r.best_ratio > 0.0));
}

#[test]
fn radial_zero_profile() {
    let z = StepFunction::new(Grid::from_breakpoints(&[0.5]).unwrap(), vec![0.0, 0.0]).unwrap();
    let v = radial_morrey_norm(&RadialProfile::new(z), &Weight::one(), 3, &[0.1, 0.5, 1.0]).unwrap();
    assert_eq!(v, 0.0);
}

proptest! {
    #![proptest_config(config(500))]

    #[test]
    fn extremal_lower_bound(f in rearranged(16), n in 2..6u32, m_frac in 0.0..1.0f64, r in -8.0..-0.302f64) {
        let m = 1 + ((n - 1) as f64 * m_frac) as u32;
        let m = m.min(n - 1);
        let r = 10f64.powf(r);
        let avg = extremal_vf_centered_average(&f, n, m, r).unwrap();
        let bound = 2f64.powi(-(m as i32)) * tail_pairing(&f, n, m, r);
        prop_assert!(avg >= bound, "n = {n}, m = {m}, r = {r}: {avg} < {bound}");
    }
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn extremal_matches_double_quadrature(f in rearranged(6), n in 2..5u32, m_frac in 0.0..1.0f64, r in -4.0..-0.302f64) {
        let m = (1 + ((n - 1) as f64 * m_frac) as u32).min(n - 1);
        let r = 10f64.powf(r);
        let got = extremal_vf_centered_average(&f, n, m, r).unwrap();
        let want = extremal_average_oracle(&f, n, m, r);
        prop_assert!((got - want).abs() <= 1e-6 * want.abs().max(1e-300), "{got} vs {want}");
    }

    #[test]
    fn radial_is_dominated_by_marcinkiewicz(s in samples(16), a in -0.8..0.0f64, n in 1..5u32) {
        let f = StepFunction::from_samples(&s).unwrap();
        let phi = Weight::power(a);
        let grid = Grid::log_spaced(1e-10, 16).unwrap();
        let ts: Vec<f64> = grid.interior().iter().copied().chain(std::iter::once(1.0)).collect();
        let radial = radial_morrey_norm(&RadialProfile::new(f.clone()), &phi, n, &ts).unwrap();
        let marc = marcinkiewicz_norm(&phi, n, &f.rearranged(), &grid).unwrap();
        prop_assert!(radial <= marc + 1e-12, "{radial} > {marc}");
    }

    #[test]
    fn radial_equals_marcinkiewicz_for_decreasing_profiles(f in rearranged(16), a in -0.8..0.0f64, n in 1..5u32) {
        let phi = Weight::power(a);
        let grid = Grid::log_spaced(1e-10, 16).unwrap();
        let ts: Vec<f64> = grid.interior().iter().copied().chain(std::iter::once(1.0)).collect();
        let radial = radial_morrey_norm(&RadialProfile::new(f.clone()), &phi, n, &ts).unwrap();
        let marc = marcinkiewicz_norm(&phi, n, &f, &grid).unwrap();
        prop_assert!((radial - marc).abs() <= 1e-9 * marc.max(1e-300), "{radial} vs {marc}");
    }
}
