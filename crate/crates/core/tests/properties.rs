use proptest::prelude::*;
use rsfr_core::recovery::{block_soft_threshold, soft_threshold};
use rsfr_core::spectral::{
    block_eigenvalues_closed_form, gram_block, inter_block_coherence_closed_form, inter_block_coherence_numeric,
    intra_block_coherence_closed_form, intra_block_coherence_numeric, spectral_norm_numeric,
};
use rsfr_core::{
    build_observation_matrix, complex_noise, draw_codes, scene_to_vector, synthesize_scene, Complex64, DopplerMode,
    RadarParams,
};

fn mode_strategy() -> impl Strategy<Value = DopplerMode> {
    prop_oneof![Just(DopplerMode::Exact), Just(DopplerMode::Simplified)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn columns_have_unit_norm(n in 1usize..24, m in 1usize..6, seed: u64, mode in mode_strategy()) {
        let p = RadarParams::x_band(n, m).unwrap();
        let psi = build_observation_matrix(&p, &draw_codes(&p, seed), mode).unwrap();
        for j in 0..psi.n_cols() {
            let norm = psi.column(j).iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
            prop_assert!((norm - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn generation_is_deterministic(n in 1usize..24, m in 1usize..6, seed: u64, mode in mode_strategy()) {
        let p = RadarParams::x_band(n, m).unwrap();
        let a = build_observation_matrix(&p, &draw_codes(&p, seed), mode).unwrap();
        let b = build_observation_matrix(&p, &draw_codes(&p, seed), mode).unwrap();
        prop_assert_eq!(a.codes(), b.codes());
        prop_assert_eq!(a.entries(), b.entries());
    }

    #[test]
    fn scene_block_support_matches_target_count(
        n in 1usize..40, m in 1usize..9, k_frac in 0.0f64..=1.0, p_frac in 0.0f64..=1.0, seed: u64,
    ) {
        let params = RadarParams::x_band(n, m).unwrap();
        let k = (k_frac * n as f64).round() as usize;
        let per = 1 + (p_frac * (m - 1) as f64).round() as usize;
        let scene = synthesize_scene(&params, k, per, seed).unwrap();
        let x = scene_to_vector(&scene, &params).unwrap();
        prop_assert_eq!(x.block_support().len(), k);
        prop_assert_eq!(x.support().len(), k * per);
    }

    #[test]
    fn simplified_norm_is_sqrt_m(n in 2usize..20, m in 1usize..5, seed: u64) {
        let p = RadarParams::x_band(n, m).unwrap();
        let psi = build_observation_matrix(&p, &draw_codes(&p, seed), DopplerMode::Simplified).unwrap();
        prop_assert!((spectral_norm_numeric(&psi) - (m as f64).sqrt()).abs() < 1e-9);
    }

    #[test]
    fn closed_form_coherence_matches_numeric(n in 2usize..20, m in 1usize..5, seed: u64) {
        let p = RadarParams::x_band(n, m).unwrap();
        let codes = draw_codes(&p, seed);
        let psi = build_observation_matrix(&p, &codes, DopplerMode::Simplified).unwrap();
        prop_assert!((intra_block_coherence_closed_form(&codes) - intra_block_coherence_numeric(&psi)).abs() < 1e-10);
        prop_assert!((inter_block_coherence_closed_form(&codes) - inter_block_coherence_numeric(&psi).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn gram_blocks_are_block_circulant(n in 2usize..12, m in 1usize..5, seed: u64, q1 in 0usize..12, q2 in 0usize..12) {
        let p = RadarParams::x_band(n, m).unwrap();
        let psi = build_observation_matrix(&p, &draw_codes(&p, seed), DopplerMode::Simplified).unwrap();
        let (q1, q2) = (q1 % n, q2 % n);
        let g = gram_block(&psi, q1, q2).unwrap();
        let shifted = gram_block(&psi, 0, (q2 + n - q1) % n).unwrap();
        prop_assert!(g.circulant_defect() < 1e-12);
        prop_assert!((&g.block - &shifted.block).iter().all(|d| d.norm() < 1e-12));
    }

    #[test]
    fn dft_of_first_row_is_the_closed_form(n in 2usize..16, m in 1usize..6, seed: u64, dq in -20i64..20) {
        let p = RadarParams::x_band(n, m).unwrap();
        let codes = draw_codes(&p, seed);
        let psi = build_observation_matrix(&p, &codes, DopplerMode::Simplified).unwrap();
        let lag = dq.rem_euclid(n as i64) as usize;
        let numeric = gram_block(&psi, 0, lag).unwrap().circulant_eigenvalues();
        let closed = block_eigenvalues_closed_form(&codes, dq).eigenvalues;
        for (a, b) in numeric.iter().zip(&closed) {
            prop_assert!((a - b).norm() < 1e-10);
        }
    }

    #[test]
    fn unit_group_prox_equals_entrywise(len in 1usize..64, tau in 0.0f64..3.0, seed: u64) {
        let z = complex_noise(len, 1.5, seed);
        prop_assert_eq!(block_soft_threshold(&z, 1, tau), soft_threshold(&z, tau));
    }

    #[test]
    fn prox_preserves_phase(seed: u64, tau in 0.0f64..1.0) {
        let z = complex_noise(16, 4.0, seed);
        for (a, b) in soft_threshold(&z, tau).iter().zip(&z) {
            if a.norm() > 0.0 {
                prop_assert!((a.arg() - b.arg()).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn lag_is_conjugate_symmetric() {
    let p = RadarParams::x_band(24, 4).unwrap();
    let codes = draw_codes(&p, 17);
    for dq in 0..24 {
        let a = block_eigenvalues_closed_form(&codes, dq);
        let b = block_eigenvalues_closed_form(&codes, -dq);
        for (x, y) in a.eigenvalues.iter().zip(&b.eigenvalues) {
            assert!((x - y.conj()).norm() < 1e-12);
        }
    }
    let zero = Complex64::new(0.0, 0.0);
    assert_eq!(soft_threshold(&[zero], 0.5), [zero]);
}
