mod common;

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spinlattice::geometry::{Cap, LatticeKind, UnitVector};
use spinlattice::ontology::{
    mechanism, mechanism_inverse, sample_k, sample_measurement_hv, sample_preparation_hv,
    AdmissibleSet, ExperimenterChoice, ModelParams,
};
use spinlattice::Error;

fn random_unit(rng: &mut impl Rng) -> UnitVector {
    let z: f64 = rng.gen_range(-1.0..1.0);
    let phi: f64 = rng.gen_range(0.0..TAU);
    let s = (1.0 - z * z).max(0.0).sqrt();
    UnitVector::new(s * phi.cos(), s * phi.sin(), z).unwrap()
}

// ---------------------------------------------------------------------------
// mechanism

#[test]
fn mechanism_is_identity_when_exact_rest_matches_selected() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let p = random_unit(&mut rng);
        let a = random_unit(&mut rng);
        let out = mechanism(&p, &p, &a).unwrap();
        assert!(out.chord_to(&a) < 1e-14);
    }
}

#[test]
fn mechanism_carries_dial_with_rest_when_they_coincide() {
    // Dialing the rest orientation itself: the exact setting is the exact
    // rest orientation.
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..200 {
        let p = random_unit(&mut rng);
        let cap = Cap::new(p, 0.2).unwrap();
        let p_exact = cap.sample_uniform(&mut rng);
        let out = mechanism(&p_exact, &p, &p).unwrap();
        assert!(out.chord_to(&p_exact) < 1e-12);
    }
}

#[test]
fn mechanism_contracts_displacement_over_many_draws() {
    // |exact setting − dialed setting| ≤ |exact rest − selected rest| for the
    // minimal rotation, with equality only when the dial lies in the plane
    // spanned by the rest pair. 100 000 random draws.
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..100_000 {
        let p = random_unit(&mut rng);
        let cap = Cap::new(p, 0.2).unwrap();
        let p_exact = cap.sample_uniform(&mut rng);
        let a = random_unit(&mut rng);
        let out = mechanism(&p_exact, &p, &a).unwrap();
        assert!(out.chord_to(&a) <= p_exact.chord_to(&p) + 1e-12);
    }
}

#[test]
fn mechanism_preserves_angle_to_exact_rest() {
    // The carrier is a rigid rotation taking the selected rest orientation to
    // the exact one, so the exact setting makes the same angle with the exact
    // rest orientation as the dialed setting makes with the selected one.
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..1000 {
        let p = random_unit(&mut rng);
        let cap = Cap::new(p, 0.2).unwrap();
        let p_exact = cap.sample_uniform(&mut rng);
        let a = random_unit(&mut rng);
        let out = mechanism(&p_exact, &p, &a).unwrap();
        assert!((out.angle_to(&p_exact) - a.angle_to(&p)).abs() < 1e-9);
    }
}

// ---------------------------------------------------------------------------
// mechanism_inverse

#[test]
fn inverse_returns_selected_rest_when_setting_is_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..200 {
        let m = random_unit(&mut rng);
        let b = random_unit(&mut rng);
        let out = mechanism_inverse(&b, &m, &b).unwrap();
        assert!(out.chord_to(&m) < 1e-14);
    }
}

#[test]
fn inverse_round_trips_through_mechanism() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let mut checked = 0u32;
    while checked < 20_000 {
        let m = random_unit(&mut rng);
        let b = random_unit(&mut rng);
        let target = Cap::new(b, 0.15).unwrap().sample_uniform(&mut rng);
        let Ok(m_exact) = mechanism_inverse(&target, &m, &b) else {
            continue; // degenerate dial/axis alignment; not under test here
        };
        let forward = mechanism(&m_exact, &m, &b).unwrap();
        assert!(
            forward.chord_to(&target) < 1e-10,
            "round trip residual {} for m={:?} b={:?}",
            forward.chord_to(&target),
            m,
            b
        );
        checked += 1;
    }
}

#[test]
fn inverse_never_shrinks_the_displacement() {
    // The rest orientation must move at least as far as the setting it
    // explains: the forward map contracts, so its inverse expands.
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..20_000 {
        let m = random_unit(&mut rng);
        let b = random_unit(&mut rng);
        let target = Cap::new(b, 0.15).unwrap().sample_uniform(&mut rng);
        if let Ok(m_exact) = mechanism_inverse(&target, &m, &b) {
            assert!(m_exact.chord_to(&m) >= target.chord_to(&b) - 1e-12);
        }
    }
}

#[test]
fn inverse_is_isometric_for_coplanar_configurations() {
    // Rest orientation, dial, and target all in the xz-plane: the connecting
    // rotation axis is ±ŷ, orthogonal to everything, and the rest orientation
    // moves by exactly the angle the setting moves.
    let m = UnitVector::from_xz_angle(0.4);
    let b = UnitVector::from_xz_angle(1.1);
    let target = UnitVector::from_xz_angle(1.1 + 0.013);
    let m_exact = mechanism_inverse(&target, &m, &b).unwrap();
    let moved = m_exact.chord_to(&m);
    let asked = target.chord_to(&b);
    assert!(
        (moved - asked).abs() < 1e-12,
        "coplanar displacement should be isometric: {moved} vs {asked}"
    );
}

#[test]
fn inverse_expands_out_of_plane_displacements() {
    // Dial at 60° from the rest orientation, target displaced orthogonally to
    // the rest/dial plane: the required rest displacement is the setting
    // displacement stretched by 1/cos 60° = 2.
    let m = UnitVector::z_axis();
    let b = UnitVector::from_xz_angle(std::f64::consts::FRAC_PI_3);
    let eps = 1e-4;
    let target = UnitVector::new(b.x(), eps, b.z()).unwrap();
    let m_exact = mechanism_inverse(&target, &m, &b).unwrap();
    let ratio = m_exact.chord_to(&m) / target.chord_to(&b);
    assert!(
        (ratio - 2.0).abs() < 1e-2,
        "out-of-plane anisotropy should approach 1/cos(rest,dial): got {ratio}"
    );
}

// ---------------------------------------------------------------------------
// admissible sets

#[test]
fn admissible_set_with_orthogonal_partner_is_populated_and_valid() {
    let params = ModelParams::new(1024, 0.02, 1024, 7).unwrap();
    let partner = UnitVector::z_axis();
    let dial = UnitVector::new(1.0, 0.0, 0.0).unwrap();
    let set = AdmissibleSet::build(&partner, &dial, &dial, &params, LatticeKind::Single).unwrap();

    assert!(set.len() >= 10, "expected a well-populated set, got {}", set.len());
    for pair in &set {
        // Exact setting within the resolution cap of the dial.
        assert!(pair.setting.chord_to(&dial) < params.delta());
        // Rest orientation within the resolution cap of the selected rest.
        assert!(pair.apparatus.chord_to(&dial) < params.delta());
        // The quoted lattice cosine is the actual partner cosine.
        assert!((partner.dot(&pair.setting) - pair.cosine.value()).abs() < 1e-12);
        // Rings an orthogonal partner can reach have cosine within ~Δ of 0.
        assert!(pair.cosine.value().abs() < params.delta() * 1.05);
        // The stored rest orientation really realizes the stored setting.
        let forward = mechanism(&pair.apparatus, &dial, &dial).unwrap();
        assert!(forward.chord_to(&pair.setting) < 1e-10);
        assert!(pair.azimuth_index < params.azimuth_steps());
    }
}

#[test]
fn admissible_set_is_deterministic() {
    let params = ModelParams::new(512, 0.05, 512, 99).unwrap();
    let partner = UnitVector::new(0.3, -0.4, 0.866).unwrap();
    let rest = UnitVector::new(0.9, 0.1, 0.42).unwrap();
    let dial = UnitVector::new(0.88, 0.12, 0.45).unwrap();
    let a = AdmissibleSet::build(&partner, &rest, &dial, &params, LatticeKind::Bell).unwrap();
    let b = AdmissibleSet::build(&partner, &rest, &dial, &params, LatticeKind::Bell).unwrap();
    assert_eq!(a.pairs(), b.pairs());
}

#[test]
fn admissible_set_near_pole_is_infeasible_at_coarse_lattice() {
    // Partner parallel to the dial: the nearest ring sits at chord 2/√N from
    // the dial, which a Δ = 0.02 cap cannot reach when N = 1024.
    let params = ModelParams::new(1024, 0.02, 1024, 7).unwrap();
    let z = UnitVector::z_axis();
    let err = AdmissibleSet::build(&z, &z, &z, &params, LatticeKind::Single).unwrap_err();
    match err {
        Error::Infeasible { lattice_size, delta, nearest_ring_chord, reachable_chord } => {
            assert_eq!(lattice_size, 1024);
            assert!((delta - 0.02).abs() < 1e-15);
            assert!((nearest_ring_chord - 0.0625).abs() < 1e-6, "got {nearest_ring_chord}");
            assert!(reachable_chord <= 0.02);
        }
        other => panic!("expected infeasibility, got {other:?}"),
    }
}

#[test]
fn admissible_set_near_pole_recovers_on_fine_lattice() {
    // N = 32768 moves the first ring to chord 2/√N ≈ 0.011 < Δ, so the same
    // polar geometry becomes feasible; with the rest orientation at 45° the
    // inverse-mechanism stretch is at most √2 and the whole first ring
    // survives the support filter.
    let params = ModelParams::new(32_768, 0.02, 256, 7).unwrap();
    let z = UnitVector::z_axis();
    let rest = UnitVector::from_xz_angle(FRAC_PI_4);
    let set = AdmissibleSet::build(&z, &rest, &z, &params, LatticeKind::Single).unwrap();
    assert!(set.len() >= 256, "first ring should survive whole, got {}", set.len());
    for pair in set.pairs() {
        assert!(pair.setting.chord_to(&z) < 0.02);
        assert!(pair.apparatus.chord_to(&rest) < 0.02);
    }
}

#[test]
fn admissible_set_contains_exact_antipode_for_bell_lattice() {
    // The Bell lattice includes cosine −1; when the dial is the partner's
    // antipode the degenerate ring contributes that single point.
    let params = ModelParams::new(1024, 0.02, 1024, 7).unwrap();
    let z = UnitVector::z_axis();
    let dial = -z;
    let set = AdmissibleSet::build(&z, &dial, &dial, &params, LatticeKind::Bell).unwrap();
    assert_eq!(set.len(), 1);
    let pair = set.get(0).unwrap();
    assert!(pair.setting.chord_to(&dial) < 1e-12);
    assert_eq!(pair.cosine.numerator(), -1024);
    assert!(pair.apparatus.chord_to(&dial) < 1e-12);
}

#[test]
fn admissible_support_filter_prunes_far_rest_orientations() {
    // Same partner and dial, two rest histories: one at the dial (benign),
    // one at 80° (inverse stretch 1/cos 80° ≈ 5.8). The far history must
    // admit strictly fewer exact settings — the anisotropic pullback pushes
    // out-of-plane candidates past the support boundary.
    let params = ModelParams::new(1024, 0.05, 1024, 3).unwrap();
    let partner = UnitVector::z_axis();
    let dial = UnitVector::new(1.0, 0.0, 0.0).unwrap();
    let near = AdmissibleSet::build(&partner, &dial, &dial, &params, LatticeKind::Single).unwrap();
    let far_rest = UnitVector::from_xz_angle(FRAC_PI_2 - 80f64.to_radians());
    let far = AdmissibleSet::build(&partner, &far_rest, &dial, &params, LatticeKind::Single);
    match far {
        Ok(set) => assert!(
            set.len() < near.len() / 2,
            "support filter too weak: {} vs {}",
            set.len(),
            near.len()
        ),
        Err(Error::Infeasible { .. }) => {} // fully pruned is acceptable too
        Err(other) => panic!("unexpected error {other:?}"),
    }
}

// ---------------------------------------------------------------------------
// sampling

#[test]
fn measurement_sampling_is_uniform_over_the_set() {
    let params = ModelParams::new(64, 0.2, 64, 5).unwrap();
    let partner = UnitVector::z_axis();
    let dial = UnitVector::new(1.0, 0.0, 0.0).unwrap();
    let set = AdmissibleSet::build(&partner, &dial, &dial, &params, LatticeKind::Single).unwrap();
    assert!(set.len() >= 8, "need a few cells for the test, got {}", set.len());

    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let draws = 1000 * set.len();
    let mut counts = vec![0u64; set.len()];
    for _ in 0..draws {
        let pair = sample_measurement_hv(&set, &mut rng);
        let idx = set
            .iter()
            .position(|p| p == &pair)
            .expect("sampled pair must come from the set");
        counts[idx] += 1;
    }
    let stat = common::chi_square_uniform(&counts);
    let crit = common::chi_square_critical(0.01, counts.len() - 1);
    assert!(stat < crit, "chi-square {stat} over critical {crit}");
}

#[test]
fn measurement_sampling_consumes_exactly_one_word() {
    let params = ModelParams::new(64, 0.2, 64, 5).unwrap();
    let partner = UnitVector::z_axis();
    let dial = UnitVector::new(1.0, 0.0, 0.0).unwrap();
    let set = AdmissibleSet::build(&partner, &dial, &dial, &params, LatticeKind::Single).unwrap();

    let mut a = ChaCha8Rng::seed_from_u64(77);
    let mut b = a.clone();
    let _ = sample_measurement_hv(&set, &mut a);
    let _ = b.gen::<u64>();
    assert_eq!(a.gen::<u64>(), b.gen::<u64>(), "sampler must consume exactly one word");
}

#[test]
fn trajectory_sampling_is_uniform_and_in_range() {
    let n = 16u32;
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let mut counts = vec![0u64; n as usize];
    for _ in 0..16_000 {
        let k = sample_k(n, &mut rng).unwrap();
        assert!(k.k() >= 1 && k.k() <= n);
        counts[(k.k() - 1) as usize] += 1;
    }
    let stat = common::chi_square_uniform(&counts);
    let crit = common::chi_square_critical(0.01, (n - 1) as usize);
    assert!(stat < crit, "chi-square {stat} over critical {crit}");
}

#[test]
fn preparation_sampling_respects_the_resolution_bound() {
    let params = ModelParams::new(1024, 0.02, 1024, 9).unwrap();
    let choice = ExperimenterChoice::new(
        UnitVector::z_axis(),
        UnitVector::from_xz_angle(1.0),
    );
    let mut rng = ChaCha8Rng::seed_from_u64(51);
    for _ in 0..10_000 {
        let draw = sample_preparation_hv(&choice, &params, &mut rng, None).unwrap();
        let rest_move = draw.prep_exact.chord_to(&choice.initial_selected);
        let setting_move = draw.setting_exact.chord_to(&choice.final_selected);
        assert!(rest_move < params.delta());
        assert!(setting_move <= rest_move + 1e-12);
    }
}

#[test]
fn biased_preparation_shifts_toward_the_dial() {
    let params = ModelParams::new(1024, 0.1, 1024, 9).unwrap();
    let choice = ExperimenterChoice::new(
        UnitVector::z_axis(),
        UnitVector::from_xz_angle(FRAC_PI_2),
    );
    let mut rng = ChaCha8Rng::seed_from_u64(52);
    let (mut plain, mut biased) = (0.0, 0.0);
    let runs = 4000;
    for _ in 0..runs {
        plain += sample_preparation_hv(&choice, &params, &mut rng, None)
            .unwrap()
            .prep_exact
            .dot(&choice.final_selected);
        biased += sample_preparation_hv(&choice, &params, &mut rng, Some(60.0))
            .unwrap()
            .prep_exact
            .dot(&choice.final_selected);
    }
    assert!(
        biased / f64::from(runs) > plain / f64::from(runs) + 1e-4,
        "bias hook should tilt the exact rest orientation toward the dial"
    );
}

// ---------------------------------------------------------------------------
// parameters

#[test]
fn params_reject_out_of_range_resolution() {
    let err = ModelParams::new(1024, 0.3, 1024, 0).unwrap_err();
    match err {
        Error::Parameter { name, .. } => assert_eq!(name, "delta"),
        other => panic!("expected a parameter error, got {other:?}"),
    }
    assert!(ModelParams::new(1024, 0.0, 1024, 0).is_err());
    assert!(ModelParams::new(1024, -0.1, 1024, 0).is_err());
    assert!(ModelParams::new(1024, f64::NAN, 1024, 0).is_err());
}

#[test]
fn params_reject_bad_lattice_sizes() {
    for bad in [0u32, 2, 7, 1023] {
        let err = ModelParams::new(bad, 0.02, 1024, 0).unwrap_err();
        match err {
            Error::Parameter { name, .. } => assert_eq!(name, "lattice_size"),
            other => panic!("expected a parameter error, got {other:?}"),
        }
    }
}

#[test]
fn params_feasibility_tracks_the_cap_to_spacing_ratio() {
    assert!(ModelParams::new(1024, 0.02, 1024, 0).unwrap().feasible());
    assert!(!ModelParams::new(64, 0.02, 64, 0).unwrap().feasible());
    assert!(ModelParams::new(64, 0.125, 64, 0).unwrap().feasible());
}

#[test]
fn params_serde_round_trip_revalidates() {
    let params = ModelParams::new(1024, 0.02, 512, 3).unwrap();
    let text = serde_json::to_string(&params).unwrap();
    let back: ModelParams = serde_json::from_str(&text).unwrap();
    assert_eq!(params, back);

    let bad = r#"{"lattice_size":1024,"delta":0.5,"azimuth_steps":512,"seed":3}"#;
    assert!(serde_json::from_str::<ModelParams>(bad).is_err());
    let odd = r#"{"lattice_size":15,"delta":0.1,"azimuth_steps":512,"seed":3}"#;
    assert!(serde_json::from_str::<ModelParams>(odd).is_err());
}
