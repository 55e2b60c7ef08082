//! End-to-end checks of the emission -> fan-out -> post-selection chain
//! against the closed-form reference states, and of the properties the
//! chain is supposed to guarantee (split independence, analyzer routing).

use num_complex::Complex64;
use singlet_filter::fock::{apply_mode_unitary, FockState, SpatialMode};
use singlet_filter::measurement::{outcome_probabilities, postselect, QubitRegisterState};
use singlet_filter::network::{build_network_unitary, AnalyzerSetting, NetworkConfig, SplitSpec};
use singlet_filter::pdc::{full_pdc_state, pdc_term, PdcConfig};
use singlet_filter::states::{fidelity, make_reference, StateLabel};

fn modes_for_order(order: u32) -> Vec<SpatialMode> {
    match order {
        1 => vec![SpatialMode::B, SpatialMode::D],
        2 => vec![
            SpatialMode::A,
            SpatialMode::B,
            SpatialMode::D,
            SpatialMode::E,
        ],
        _ => SpatialMode::OUTPUTS.to_vec(),
    }
}

fn reference_for_order(order: u32) -> QubitRegisterState {
    let label = match order {
        1 => StateLabel::Psi2,
        2 => StateLabel::Psi4,
        _ => StateLabel::Psi6,
    };
    make_reference(label).register
}

fn filtered_register(order: u32, cfg: &NetworkConfig) -> (f64, QubitRegisterState) {
    let network = build_network_unitary(cfg).unwrap();
    let out = apply_mode_unitary(&pdc_term(order).unwrap(), &network);
    let result = postselect(&out, &modes_for_order(order)).unwrap();
    (result.probability, result.register.expect("nonzero sector"))
}

#[test]
fn filtered_states_match_references() {
    let cfg = NetworkConfig::cascade_with_angles([0.0; 6]);
    for order in 1..=3u32 {
        let (_, register) = filtered_register(order, &cfg);
        let f = fidelity(&register, &reference_for_order(order)).unwrap();
        assert!(f >= 1.0 - 1e-10, "order {order}: fidelity {f}");
    }
}

#[test]
fn filtered_states_equal_references_elementwise_after_phase_fix() {
    // Both sides fix the global phase the same way, so amplitudes agree
    // exactly, not just up to phase.
    let cfg = NetworkConfig::cascade_with_angles([0.0; 6]);
    for order in 1..=3u32 {
        let (_, register) = filtered_register(order, &cfg);
        let reference = reference_for_order(order);
        for (a, b) in register.amplitudes().iter().zip(reference.amplitudes()) {
            assert!((a - b).norm() < 1e-12);
        }
    }
}

#[test]
fn conditional_state_is_independent_of_split_amplitudes() {
    let cascade = NetworkConfig::cascade_with_angles([0.0; 6]);
    let symmetric = NetworkConfig::with_splits(
        SplitSpec::symmetric(SpatialMode::A0).unwrap(),
        SplitSpec::symmetric(SpatialMode::B0).unwrap(),
        [0.0; 6],
    );
    for order in 1..=3u32 {
        let (p_cascade, reg_cascade) = filtered_register(order, &cascade);
        let (p_symmetric, reg_symmetric) = filtered_register(order, &symmetric);
        let f = fidelity(&reg_cascade, &reg_symmetric).unwrap();
        assert!(f >= 1.0 - 1e-10, "order {order}: fidelity {f}");
        assert!(
            (p_cascade - p_symmetric).abs() > 1e-6,
            "order {order}: success probabilities should differ"
        );
    }
}

#[test]
fn postselection_probability_factorizes_over_split_probabilities() {
    // prob = (order!)^2 times the product of the selected arms' split
    // probabilities, checked by brute-force expansion for orders 1 and 2.
    for split_pair in [
        (
            SplitSpec::cascade(SpatialMode::A0).unwrap(),
            SplitSpec::cascade(SpatialMode::B0).unwrap(),
        ),
        (
            SplitSpec::symmetric(SpatialMode::A0).unwrap(),
            SplitSpec::symmetric(SpatialMode::B0).unwrap(),
        ),
    ] {
        let cfg = NetworkConfig::with_splits(split_pair.0, split_pair.1, [0.0; 6]);
        for order in 1..=2u32 {
            let (prob, _) = filtered_register(order, &cfg);
            let modes = modes_for_order(order);
            let mut product = 1.0;
            for m in &modes {
                let (split, outputs) =
                    if matches!(m, SpatialMode::A | SpatialMode::B | SpatialMode::C) {
                        (&split_pair.0, &split_pair.0.outputs)
                    } else {
                        (&split_pair.1, &split_pair.1.outputs)
                    };
                let arm = outputs.iter().position(|o| o == m).unwrap();
                product *= split.probabilities()[arm];
            }
            let combinatorial = match order {
                1 => 1.0,
                2 => 4.0,
                _ => 36.0,
            };
            assert!(
                (prob - combinatorial * product).abs() < 1e-12,
                "order {order}: prob {prob} vs {combinatorial} * {product}"
            );
        }
    }
}

#[test]
fn analyzer_in_network_agrees_with_register_measurement() {
    // Route one: network at zero angles, then Born probabilities on the
    // register. Route two: analyzers inside the network, then reading the
    // port pattern directly. Both give the same coincidence probabilities.
    let thetas = [0.3, 1.1, 0.0, 2.7, 0.9, 5.5];
    for order in 1..=2u32 {
        let modes = modes_for_order(order);

        let plain = NetworkConfig::cascade_with_angles([0.0; 6]);
        let (p0, register) = filtered_register(order, &plain);
        let settings: Vec<AnalyzerSetting> = modes
            .iter()
            .map(|m| {
                let idx = SpatialMode::OUTPUTS.iter().position(|o| o == m).unwrap();
                AnalyzerSetting::new(*m, thetas[idx])
            })
            .collect();
        let born = outcome_probabilities(&register, &settings).unwrap();

        let analyzed = NetworkConfig::cascade_with_angles(thetas);
        let (p1, rotated) = filtered_register(order, &analyzed);
        assert!((p0 - p1).abs() < 1e-12, "analyzers preserve the sector");

        for (idx, p) in born.iter().enumerate() {
            let direct = rotated.amplitudes()[idx].norm_sqr();
            assert!(
                (p0 * p - p1 * direct).abs() < 1e-12,
                "order {order}, outcome {idx}"
            );
        }
    }
}

#[test]
fn full_emission_state_filters_to_the_singlet() {
    // Post-selecting double coincidences on the complete multiphoton state
    // (vacuum plus all orders) still lands on the two-photon singlet: the
    // higher orders cannot satisfy a two-mode pattern with empty side modes.
    let cfg = PdcConfig::new(Complex64::new(0.1, 0.0), 3).unwrap();
    let state = full_pdc_state(&cfg);
    let network = build_network_unitary(&NetworkConfig::cascade_with_angles([0.0; 6])).unwrap();
    let out = apply_mode_unitary(&state, &network);
    let result = postselect(&out, &[SpatialMode::B, SpatialMode::D]).unwrap();
    let register = result.register.unwrap();
    let f = fidelity(&register, &make_reference(StateLabel::Psi2).register).unwrap();
    assert!(f >= 1.0 - 1e-10);
    // and the six-fold pattern from the same state is the six-photon one
    let result6 = postselect(&out, &SpatialMode::OUTPUTS).unwrap();
    let register6 = result6.register.unwrap();
    let f6 = fidelity(&register6, &make_reference(StateLabel::Psi6).register).unwrap();
    assert!(f6 >= 1.0 - 1e-10);
}

#[test]
fn swapping_polarization_labels_commutes_with_fanout() {
    // The fan-out is polarization independent: relabeling H <-> V before or
    // after the (analyzer-free) network gives the same state.
    use singlet_filter::fock::{ModeId, OccupationVector, Polarization};

    let swap = |state: &FockState| -> FockState {
        FockState::from_terms(state.terms().map(|(occ, amp)| {
            let mut flipped = OccupationVector::vacuum();
            for s in SpatialMode::ALL {
                let h = ModeId::new(s, Polarization::H).index();
                let v = ModeId::new(s, Polarization::V).index();
                flipped.0[h] = occ.0[v];
                flipped.0[v] = occ.0[h];
            }
            (flipped, *amp)
        }))
    };

    let network = build_network_unitary(&NetworkConfig::cascade_with_angles([0.0; 6])).unwrap();
    let state = pdc_term(2).unwrap();
    let swapped_first = apply_mode_unitary(&swap(&state), &network);
    let swapped_last = swap(&apply_mode_unitary(&state, &network));
    for (occ, amp) in swapped_first.terms() {
        assert!((swapped_last.amplitude(occ) - amp).norm() < 1e-12);
    }
    for (occ, amp) in swapped_last.terms() {
        assert!((swapped_first.amplitude(occ) - amp).norm() < 1e-12);
    }
}
