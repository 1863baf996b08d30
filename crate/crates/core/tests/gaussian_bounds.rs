use hdmac::gaussian::{
    capacity_c, compute_bounds, consumption, power_feasible, quadrature_mi_check, CheckedBound, GaussianParams, PowerPolicy,
};
use hdmac::SlotSchedule;
use proptest::prelude::*;

fn c(x: f64) -> f64 {
    0.5 * (1.0 + x).log2()
}

fn params() -> impl Strategy<Value = GaussianParams> {
    (0.1..3.0f64, 0.1..3.0f64, 0.0..3.0f64, 0.0..3.0f64, 0.2..2.0f64, 0.2..2.0f64, 0.2..2.0f64).prop_map(
        |(k10, k20, k12, k21, n0, n1, n2)| GaussianParams { k10, k20, k12, k21, n0, n1, n2, p1: 2.0, p2: 2.0 },
    )
}

fn policy() -> impl Strategy<Value = PowerPolicy> {
    (prop::array::uniform6(0.0..3.0f64), prop::array::uniform4(0.0..1.0f64)).prop_map(|(p, f)| PowerPolicy {
        p10: p[0],
        p_u: p[1],
        p20: p[2],
        p_v: p[3],
        p13: p[4],
        p23: p[5],
        c2: f[0],
        c3: f[1],
        d2: f[2],
        d3: f[3],
    })
}

fn slots() -> impl Strategy<Value = SlotSchedule> {
    (0.0..1.0f64, 0.0..1.0f64).prop_map(|(a, b)| SlotSchedule::new(a, (1.0 - a) * b).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn bounds_are_ordered(p in params(), pol in policy(), s in slots()) {
        let b = compute_bounds(&p, &pol, s).unwrap();
        prop_assert!(b.i5.max(b.i6) <= b.i7 + 1e-12);
        prop_assert!(b.i7 <= b.i5 + b.i6 + 1e-12);
        prop_assert!(b.i7 <= b.i8.min(b.i9) + 1e-12);
        prop_assert!(b.i8.max(b.i9) <= b.i10 + 1e-12);
        prop_assert!(b.i10 <= b.i8 + b.i9 + 1e-12);
    }

    #[test]
    fn more_power_never_hurts(p in params(), pol in policy(), s in slots(), k in 1.0..4.0f64) {
        let lo = compute_bounds(&p, &pol, s).unwrap();
        let hi = compute_bounds(&p, &pol.scaled(k), s).unwrap();
        for (a, b) in lo.values().iter().zip(hi.values()) {
            if let (Some(a), Some(b)) = (a, b) {
                prop_assert!(b >= *a - 1e-12);
            }
        }
    }

    #[test]
    fn stronger_links_never_hurt(p in params(), pol in policy(), s in slots(), extra in 0.0..2.0f64) {
        let lo = compute_bounds(&p, &pol, s).unwrap();
        let hi = compute_bounds(&GaussianParams { k12: p.k12 + extra, k21: p.k21 + extra, ..p }, &pol, s).unwrap();
        prop_assert!(hi.i2 >= lo.i2 && hi.i4 >= lo.i4);
        prop_assert_eq!((hi.i5, hi.i7, hi.i10), (lo.i5, lo.i7, lo.i10));
    }

    #[test]
    fn silent_links_and_users(p in params(), pol in policy(), s in slots()) {
        let b = compute_bounds(&GaussianParams { k12: 0.0, ..p }, &pol, s).unwrap();
        prop_assert_eq!(b.i2, 0.0);
        let b = compute_bounds(&GaussianParams { k20: 0.0, ..p }, &pol, s).unwrap();
        prop_assert_eq!(b.i6, 0.0);
        prop_assert!((b.i7 - b.i5).abs() <= 1e-15);
    }

    /// `I10` computed from the cross-term expansion `(K10²c2 + K20²d3 + 2K10K20√(c2d3))PU`.
    #[test]
    fn coherent_terms_expand(p in params(), pol in policy(), s in slots()) {
        let b = compute_bounds(&p, &pol, s).unwrap();
        let (k10, k20) = (p.k10, p.k20);
        let cu = (k10 * k10 * pol.c2 + k20 * k20 * pol.d3 + 2.0 * k10 * k20 * (pol.c2 * pol.d3).sqrt()) * pol.p_u;
        let cv = (k10 * k10 * pol.c3 + k20 * k20 * pol.d2 + 2.0 * k10 * k20 * (pol.c3 * pol.d2).sqrt()) * pol.p_v;
        let private = k10 * k10 * pol.p13 + k20 * k20 * pol.p23;
        let d1 = s.alpha1() * c(k10 * k10 * (pol.p10 + pol.p_u) / p.n0);
        let d2 = s.alpha2() * c(k20 * k20 * (pol.p20 + pol.p_v) / p.n0);
        let i10 = d1 + d2 + s.alpha3() * c((private + cu + cv) / p.n0);
        let i8 = d1 + s.alpha3() * c((private + cu) / p.n0);
        prop_assert!((b.i10 - i10).abs() <= 1e-12 * (1.0 + i10));
        prop_assert!((b.i8 - i8).abs() <= 1e-12 * (1.0 + i8));
    }

    #[test]
    fn swapping_users_swaps_bounds(p in params(), pol in policy(), a1 in 0.0..0.5f64, a2 in 0.0..0.5f64) {
        let b = compute_bounds(&p, &pol, SlotSchedule::new(a1, a2).unwrap()).unwrap();
        let m = compute_bounds(&p.swapped(), &pol.swapped(), SlotSchedule::new(a2, a1).unwrap()).unwrap();
        for (x, y) in [(b.i2, m.i4), (b.i5, m.i6), (b.i7, m.i7), (b.i8, m.i9), (b.i10, m.i10)] {
            prop_assert!((x - y).abs() <= 1e-12, "{} vs {}", x, y);
        }
    }
}

#[test]
fn capacity_function() {
    assert_eq!(capacity_c(0.0).unwrap(), 0.0);
    assert!((capacity_c(3.0).unwrap() - 1.0).abs() < 1e-15);
    assert!((capacity_c(4.0).unwrap() - 0.5 * 5f64.log2()).abs() < 1e-15);
    assert!(capacity_c(-1e-9).is_err());
    assert!(capacity_c(f64::NAN).is_err());
}

#[test]
fn budget_accounting() {
    let p = GaussianParams::symmetric(1.0, 1.0, 2.0);
    let s = SlotSchedule::new(0.25, 0.25).unwrap();
    let pol = PowerPolicy { p10: 1.0, p_u: 1.0, p20: 1.0, p_v: 1.0, p13: 1.0, p23: 1.0, c2: 1.0, c3: 1.0, d2: 1.0, d3: 1.0 };
    assert_eq!(consumption(&pol, s), (2.0, 2.0));
    assert!(power_feasible(&pol, s, &p, 1e-9).feasible);
    let over = PowerPolicy { p13: 2.0, ..pol };
    let check = power_feasible(&over, s, &p, 1e-9);
    assert!(!check.feasible);
    assert_eq!((check.slack1, check.slack2), (-0.5, 0.0));
}

#[test]
fn quadrature_agrees_on_seeded_draws() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
    for _ in 0..12 {
        let p = GaussianParams {
            k10: rng.gen_range(0.2..2.0),
            k20: rng.gen_range(0.2..2.0),
            k12: rng.gen_range(0.2..2.0),
            k21: rng.gen_range(0.2..2.0),
            n0: rng.gen_range(0.5..2.0),
            n1: rng.gen_range(0.5..2.0),
            n2: rng.gen_range(0.5..2.0),
            p1: 2.0,
            p2: 2.0,
        };
        let mut u = || rng.gen_range(0.0..2.0);
        let pol = PowerPolicy { p10: u(), p_u: u(), p20: u(), p_v: u(), p13: u(), p23: u(), ..Default::default() };
        let s = SlotSchedule::new(0.3, 0.3).unwrap();
        for bound in [CheckedBound::I2, CheckedBound::I4, CheckedBound::I5, CheckedBound::I6, CheckedBound::I7] {
            let (closed, numeric) = quadrature_mi_check(&p, &pol, s, bound).unwrap();
            assert!((closed - numeric).abs() <= 1e-3, "{bound:?}: {closed} vs {numeric}");
        }
    }
}

#[test]
fn bound_names_parse() {
    assert_eq!("I7".parse::<CheckedBound>().unwrap(), CheckedBound::I7);
    assert_eq!("i2".parse::<CheckedBound>().unwrap(), CheckedBound::I2);
    assert!("i8".parse::<CheckedBound>().is_err());
}
