use proptest::prelude::*;

use sgphonon::contrast::{gamma, gamma_three_sine, ln_contrast_spin, transfer_spin_sq};
use sgphonon::dynamics::{arm_deltas, arm_history};
use sgphonon::numerics::relative_error;
use sgphonon::{
    mode_force, Arm, ContrastOptions, CouplingChannel, DiaForm, GammaTreatment, MaterialModel,
    Origin, PhysicalConstants, SplitProtocol, Truncation,
};

fn fixed(modes: usize) -> ContrastOptions {
    ContrastOptions {
        truncation: Truncation::Fixed { modes },
        gamma: GammaTreatment::Exact,
        keep_modes: false,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn gamma_forms_agree_and_are_bounded(
        w in 1e-3f64..1e3,
        ta in 1e-3f64..10.0,
        r in 0.0f64..5.0,
    ) {
        let g = gamma(w, ta, r * ta);
        prop_assert!(g.abs() <= 4.0);
        let g3 = gamma_three_sine(w, ta, r * ta);
        prop_assert!((g - g3).abs() <= 1e-9 * (1.0 + g.abs()));
    }

    #[test]
    fn trajectories_close_and_mirror(
        mass in -18.0f64..-12.0,
        dx in -7.0f64..-3.0,
        dt in -4.0f64..1.0,
        ff in 0.0f64..0.9,
        s in -1.0f64..1.0,
    ) {
        let p = SplitProtocol::from_target(10f64.powf(mass), 10f64.powf(dx), 10f64.powf(dt), ff).unwrap();
        let half = 0.5 * p.delta_t();
        let t = s * half;
        let a = p.kinematics_at(Arm::Right, t);
        let b = p.kinematics_at(Arm::Right, -t);
        prop_assert!((a.position - b.position).abs() <= 1e-12 * p.delta_x_max());
        let l = p.kinematics_at(Arm::Left, t);
        prop_assert_eq!(l.position, -a.position);
        prop_assert!(p.separation_at(t) <= p.delta_x_max() * (1.0 + 1e-12));
        let peak = p.separation_at(0.0);
        prop_assert!(relative_error(peak, p.delta_x_max()) < 1e-12);
        let end = p.kinematics_at(Arm::Right, p.end());
        prop_assert!(end.position.abs() <= 1e-12 * p.delta_x_max());
    }

    #[test]
    fn spin_contrast_is_quadratic_in_separation(
        dx in -7.0f64..-3.0,
        dt in -3.0f64..0.0,
        temp in 0.0f64..300.0,
    ) {
        let (m, c) = (MaterialModel::diamond(), PhysicalConstants::default());
        let p1 = SplitProtocol::from_target(1e-14, 10f64.powf(dx), 10f64.powf(dt), 0.0).unwrap();
        let p2 = SplitProtocol::from_target(1e-14, 2.0 * 10f64.powf(dx), 10f64.powf(dt), 0.0).unwrap();
        let a = ln_contrast_spin(&p1, &m, &c, temp, &fixed(64)).unwrap();
        let b = ln_contrast_spin(&p2, &m, &c, temp, &fixed(64)).unwrap();
        prop_assert!(a.ln_contrast_total <= 0.0);
        prop_assert!(a.contrast > 0.0 && a.contrast <= 1.0);
        prop_assert!(relative_error(b.ln_contrast_total, 4.0 * a.ln_contrast_total) < 1e-12);
    }

    #[test]
    fn response_norm_matches_transfer(
        wta in 1e-2f64..1e6,
        r in 0.0f64..3.0,
    ) {
        let (m, c) = (MaterialModel::diamond(), PhysicalConstants::default());
        let w = m.fundamental_tone(1e-14).unwrap();
        let ta = wta / w;
        let p = SplitProtocol::new(ta, r * ta, 1e3, 0.0, 1e-14).unwrap();
        let f = mode_force(CouplingChannel::SpinMagnetic, &p, &m, &c).unwrap();
        let (du, dv) = arm_deltas(&f, w, p.delta_t()).unwrap();
        let norm = w * w * du * du + dv * dv;
        let exact = transfer_spin_sq(&p, w);
        // amplitude error measured against the |Γ| = 4 envelope
        let envelope = 4.0 * exact.sqrt() / gamma(w, ta, r * ta).abs();
        prop_assert!((norm.sqrt() - exact.sqrt()).abs() <= 1e-12 * envelope);
    }
}

#[test]
fn warmer_modes_lose_more_contrast() {
    let (m, c) = (MaterialModel::diamond(), PhysicalConstants::default());
    let p = SplitProtocol::from_target(1e-14, 1e-5, 0.1, 0.0).unwrap();
    let mut last = 0.0;
    for t in [0.0, 1.0, 4.0, 77.0, 300.0] {
        let r = ln_contrast_spin(&p, &m, &c, t, &fixed(32)).unwrap();
        assert!(r.neg_ln_contrast() > last, "T = {t}");
        last = r.neg_ln_contrast();
    }
}

#[test]
fn zero_separation_keeps_full_contrast() {
    let (m, c) = (MaterialModel::diamond(), PhysicalConstants::default());
    let p = SplitProtocol::from_target(1e-14, 0.0, 1.0, 0.0).unwrap();
    let r = ln_contrast_spin(&p, &m, &c, 300.0, &fixed(8)).unwrap();
    assert_eq!(r.contrast, 1.0);
}

#[test]
fn occupation_is_frozen_after_the_run() {
    let (m, c) = (MaterialModel::diamond(), PhysicalConstants::default());
    let p = SplitProtocol::from_target(1e-14, 1e-6, 1e-5, 0.2)
        .unwrap()
        .with_b0(0.5);
    let w = 2.0 * std::f64::consts::PI * 3e6;
    for ch in [
        CouplingChannel::SpinMagnetic,
        CouplingChannel::Diamagnetic(DiaForm::Literal),
    ] {
        let f = mode_force(ch, &p, &m, &c).unwrap();
        let h = arm_history(&f, w, 4.0, 2.0 * p.delta_t(), 400).unwrap();
        let after: Vec<_> = h.rows.iter().filter(|r| r.t >= p.delta_t()).collect();
        for r in &after {
            assert!(relative_error(r.n_left, after[0].n_left) < 1e-12);
            assert!(relative_error(r.n_right, after[0].n_right) < 1e-12);
        }
    }
}

#[test]
fn start_origin_knots_close() {
    let (m, c) = (MaterialModel::diamond(), PhysicalConstants::default());
    let p = SplitProtocol::new(0.3, 0.7, 40.0, 0.2, 1e-14).unwrap();
    for ch in [
        CouplingChannel::SpinMagnetic,
        CouplingChannel::Diamagnetic(DiaForm::Literal),
    ] {
        let f = mode_force(ch, &p, &m, &c).unwrap();
        let k = f.delta_knots(Origin::Start).unwrap();
        assert_eq!(k.value(p.delta_t() * 1.5), 0.0);
    }
}

#[test]
fn documents_round_trip() {
    let p = SplitProtocol::new(0.25, 0.1, 12.0, 0.5, 1e-15).unwrap();
    assert_eq!(SplitProtocol::from_json(&p.to_json()).unwrap(), p);
    let ch = CouplingChannel::InducedDipole {
        e0: 1e3,
        eta_e: 30.0,
    };
    let doc = serde_json::to_string(&ch.to_doc()).unwrap();
    assert_eq!(CouplingChannel::from_json(&doc).unwrap(), ch);
    let mat = MaterialModel::diamond();
    let s = serde_json::to_string(&mat).unwrap();
    assert_eq!(MaterialModel::from_json(&s).unwrap(), mat);
}

#[test]
fn malformed_documents_are_rejected() {
    assert!(SplitProtocol::from_json(r#"{"tau_a":1}"#).is_err());
    assert!(CouplingChannel::from_json(r#"{"kind":"spin","eta_e":3}"#).is_err());
    assert!(CouplingChannel::from_json(r#"{"kind":"induced_dipole"}"#).is_err());
    assert!(MaterialModel::from_json(
        r#"{"name":"x","density":-1,"sound_speed":1,"susceptibility":0,"dielectric":2}"#
    )
    .is_err());
    assert!(MaterialModel::from_json(
        r#"{"name":"x","density":1,"sound_speed":1,"susceptibility":0,"dielectric":2,"extra":1}"#
    )
    .is_err());
}
