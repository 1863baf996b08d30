mod common;

use common::{max_bound_gap, random_alphabets, random_instance, random_schedule, FlatJoint};
use hdmac::dmc::{evaluate_bounds, slot_information, Alphabets, DmcDocument, DmcError, DmcSpec, InputDistribution};
use hdmac::SlotSchedule;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn instance(seed: u64, max: usize) -> (DmcSpec, InputDistribution, SlotSchedule) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = random_alphabets(&mut rng, max);
    let (spec, dist) = random_instance(&mut rng, a);
    (spec, dist, random_schedule(&mut rng))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn structured_matches_flat_joint(seed in any::<u64>()) {
        let (spec, dist, slots) = instance(seed, 3);
        let fast = evaluate_bounds(&spec, &dist, slots).unwrap();
        let flat = FlatJoint::new(&spec, &dist).bounds(slots);
        prop_assert!(max_bound_gap(&fast, &flat) <= 1e-12, "{fast:?} vs {flat:?}");
    }

    #[test]
    fn data_processing_and_sandwich(seed in any::<u64>()) {
        let (spec, dist, slots) = instance(seed, 3);
        let b = evaluate_bounds(&spec, &dist, slots).unwrap();
        prop_assert!(b.check_invariants(1e-12).is_ok(), "{:?}", b.check_invariants(1e-12));
        for v in b.values().into_iter().flatten() {
            prop_assert!(v >= 0.0);
        }
    }

    #[test]
    fn bounds_scale_with_slot_durations(seed in any::<u64>(), a1 in 0.0..0.5f64, a2 in 0.0..0.5f64) {
        let (spec, dist, _) = instance(seed, 3);
        let info = slot_information(&spec, &dist).unwrap();
        let b = evaluate_bounds(&spec, &dist, SlotSchedule::new(a1, a2).unwrap()).unwrap();
        let a3 = 1.0 - a1 - a2;
        prop_assert!((b.i2 - a1 * info.x10_y12).abs() <= 1e-15);
        prop_assert!((b.i4 - a2 * info.x20_y21).abs() <= 1e-15);
        prop_assert!((b.i5 - a3 * info.x13_given_uvx23).abs() <= 1e-15);
        prop_assert!((b.i7 - a3 * info.pair_given_uv).abs() <= 1e-15);
    }
}

#[test]
fn i7_against_conditioned_flat_joint() {
    for seed in 0..20 {
        let (spec, dist, slots) = instance(1000 + seed, 2);
        let flat = FlatJoint::new(&spec, &dist);
        let expected = slots.alpha3() * flat.cmi(&[common::X13, common::X23], &[common::Y3], &[common::U, common::V]);
        let got = evaluate_bounds(&spec, &dist, slots).unwrap().i7;
        assert!((got - expected).abs() <= 1e-12, "seed {seed}: {got} vs {expected}");
    }
}

#[test]
fn alphabet_of_size_one_carries_nothing() {
    let (mut spec, mut dist, slots) = instance(5, 3);
    // collapse V: a single symbol
    let a = spec.alphabets;
    let pv_x20: Vec<f64> = (0..a.x20).map(|x| (0..a.v).map(|v| dist.p_v_x20[v * a.x20 + x]).sum()).collect();
    dist.p_v_x20 = pv_x20;
    dist.p_x13_given_uv = (0..a.u).flat_map(|u| dist.p_x13_given_uv[u * a.v * a.x13..u * a.v * a.x13 + a.x13].to_vec()).collect();
    dist.p_x23_given_uv = (0..a.u).flat_map(|u| dist.p_x23_given_uv[u * a.v * a.x23..u * a.v * a.x23 + a.x23].to_vec()).collect();
    spec.alphabets = Alphabets { v: 1, ..a };
    let b = evaluate_bounds(&spec, &dist, slots).unwrap();
    // with V constant, conditioning on V changes nothing
    let flat = FlatJoint::new(&spec, &dist);
    let i8_plain = slots.alpha1() * flat.cmi(&[common::X10], &[common::Y1], &[])
        + slots.alpha3() * flat.cmi(&[common::X13, common::X23], &[common::Y3], &[]);
    assert!((b.i8 - i8_plain).abs() <= 1e-12);
    assert!((b.i10 - b.i8 - slots.alpha2() * flat.cmi(&[common::X20], &[common::Y2], &[])).abs() <= 1e-12);
}

#[test]
fn shape_mismatch_is_reported() {
    let (spec, mut dist, slots) = instance(9, 3);
    dist.p_x13_given_uv.push(0.0);
    let err = evaluate_bounds(&spec, &dist, slots).unwrap_err();
    assert!(matches!(err, DmcError::Shape { what: "p_x13_given_uv", .. }), "{err}");
}

const BINARY_DOC: &str = r#"
[alphabets]
u = 1
v = 1
x10 = 2
x20 = 2
x13 = 2
x23 = 2
y = 2
y12 = 2
y21 = 2

[channels]
# [x10][y][y12]: destination and partner both see a clean copy
ch1 = [1.0, 0.0, 0.0, 0.0,  0.0, 0.0, 0.0, 1.0]
ch2 = [1.0, 0.0, 0.0, 0.0,  0.0, 0.0, 0.0, 1.0]
# [x13][x23][y]: modulo-2 sum
ch3 = [1.0, 0.0,  0.0, 1.0,  0.0, 1.0,  1.0, 0.0]

[input]
p_u_x10 = [0.5, 0.5]
p_v_x20 = [0.5, 0.5]
p_x13_given_uv = [0.5, 0.5]
p_x23_given_uv = [0.5, 0.5]
"#;

#[test]
fn document_round_trip() {
    let (spec, dist) = DmcDocument::from_toml(BINARY_DOC).unwrap();
    let b = evaluate_bounds(&spec, &dist, SlotSchedule::tdma()).unwrap();
    assert_eq!((b.i2, b.i4), (0.5, 0.5));
    assert_eq!(b.i1, Some(0.5));
    assert_eq!(b.i7, 0.0);
}

#[test]
fn document_errors_name_the_row() {
    let broken = BINARY_DOC.replace("ch3 = [1.0, 0.0,  0.0, 1.0,", "ch3 = [1.0, 0.0,  0.2, 1.0,");
    let err = DmcDocument::from_toml(&broken).unwrap_err();
    assert_eq!(err.to_string(), "invalid distribution: ch3 row x13=0, x23=1: sums to 1.2, expected 1");
    let missing = BINARY_DOC.replace("y21 = 2\n", "");
    assert!(DmcDocument::from_toml(&missing).unwrap_err().to_string().contains("y21"));
}
