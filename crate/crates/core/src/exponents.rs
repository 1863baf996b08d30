//! Gallager-type bound for the destination error event in which all of user
//! 1's message parts and user 2's slot-3 private part are wrong while user 2's
//! other parts are right, and the rate constraint it recovers at `ρ = 0`.
//!
//! With `s = 1/(1+ρ)`:
//!
//! ```text
//! q1 = Σ_y [Σ_x p(x10) p(y|x10)^s]^(1+ρ)
//! q2 = Σ_{y,v} p(v) [Σ_{x13,x23} p(x13,x23|v) p(y|x13,x23)^s]^(1+ρ)
//! Ψ(ρ) = −(α1·log2 q1 + α3·log2 q2)
//! ```
//!
//! The finite-blocklength correction term is dropped, so `Ψ` is the
//! asymptotic exponent. `dΨ/dρ` at 0 equals `α1·I(X10;Y1) + α3·I(X13,X23;Y3|V)`,
//! which is `I8`.

use std::io::Write;

use serde::Serialize;

use crate::dmc::{mutual_information, DmcError, DmcSpec, InputDistribution};
use crate::format::sig12;
use crate::region::SlotSchedule;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ExponentError {
    #[error(transparent)]
    Dmc(#[from] DmcError),
    #[error("rho must lie in [0, 1], got {0}")]
    Rho(f64),
    #[error("step must lie in (0, 1e-3], got {0}")]
    Step(f64),
    #[error("writing sweep: {0}")]
    Io(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExponentInputs {
    pub spec: DmcSpec,
    pub dist: InputDistribution,
    pub slots: SlotSchedule,
    pub rho: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExponentResult {
    pub rho: f64,
    pub q1: f64,
    pub q2: f64,
    pub psi: f64,
    pub e0_slope_at_zero: f64,
}

impl ExponentInputs {
    pub fn with_rho(&self, rho: f64) -> Self {
        Self { rho, ..self.clone() }
    }

    fn validate(&self) -> Result<(), ExponentError> {
        if !(0.0..=1.0).contains(&self.rho) {
            return Err(ExponentError::Rho(self.rho));
        }
        self.spec.validate(usize::MAX)?;
        self.dist.validate(&self.spec.alphabets)?;
        Ok(())
    }
}

/// `(q1, q2)` by direct enumeration. Both are exactly 1 at `ρ = 0`.
pub fn q_values(inputs: &ExponentInputs) -> Result<(f64, f64), ExponentError> {
    inputs.validate()?;
    if inputs.rho == 0.0 {
        return Ok((1.0, 1.0));
    }
    let a = &inputs.spec.alphabets;
    let rho = inputs.rho;
    let s = 1.0 / (1.0 + rho);

    let ch1 = inputs.spec.slot1_destination();
    let px = inputs.dist.p_x10(a);
    let q1 = (0..a.y)
        .map(|y| (0..a.x10).map(|x| px[x] * ch1[x * a.y + y].powf(s)).sum::<f64>().powf(1.0 + rho))
        .sum();

    let pv = inputs.dist.p_v(a);
    let given_v = inputs.dist.slot3_inputs_given_v(a);
    let ch3 = &inputs.spec.ch3;
    let pairs = a.x13 * a.x23;
    let mut q2 = 0.0;
    for v in 0..a.v {
        let inner: f64 = (0..a.y)
            .map(|y| {
                (0..pairs)
                    .map(|k| given_v[v * pairs + k] * ch3[k * a.y + y].powf(s))
                    .sum::<f64>()
                    .powf(1.0 + rho)
            })
            .sum();
        q2 += pv[v] * inner;
    }
    Ok((q1, q2))
}

/// `Ψ(ρ)` in bits; exactly 0 at `ρ = 0`.
pub fn psi(inputs: &ExponentInputs) -> Result<f64, ExponentError> {
    let (q1, q2) = q_values(inputs)?;
    Ok(psi_from(inputs.slots, q1, q2))
}

fn psi_from(slots: SlotSchedule, q1: f64, q2: f64) -> f64 {
    let (a1, a3) = (slots.alpha1(), slots.alpha3());
    let mut total = 0.0;
    if a1 > 0.0 {
        total -= a1 * q1.log2();
    }
    if a3 > 0.0 {
        total -= a3 * q2.log2();
    }
    total
}

/// `α1·I(X10;Y1) + α3·I(X13,X23;Y3|V)`, built from explicit joints with
/// [`mutual_information`].
pub fn event16_rate_bound(inputs: &ExponentInputs) -> Result<f64, ExponentError> {
    inputs.validate()?;
    let a = &inputs.spec.alphabets;
    let ch1 = inputs.spec.slot1_destination();
    let px = inputs.dist.p_x10(a);
    let joint1: Vec<f64> = (0..a.x10).flat_map(|x| (0..a.y).map(move |y| (x, y))).map(|(x, y)| px[x] * ch1[x * a.y + y]).collect();
    let direct = mutual_information(&joint1, a.y)?;

    let pv = inputs.dist.p_v(a);
    let given_v = inputs.dist.slot3_inputs_given_v(a);
    let pairs = a.x13 * a.x23;
    let mut cooperative = 0.0;
    for v in 0..a.v {
        if pv[v] == 0.0 {
            continue;
        }
        let joint: Vec<f64> = (0..pairs)
            .flat_map(|k| (0..a.y).map(move |y| (k, y)))
            .map(|(k, y)| given_v[v * pairs + k] * inputs.spec.ch3[k * a.y + y])
            .collect();
        cooperative += pv[v] * mutual_information(&joint, a.y)?;
    }
    Ok(inputs.slots.alpha1() * direct + inputs.slots.alpha3() * cooperative)
}

pub fn evaluate(inputs: &ExponentInputs) -> Result<ExponentResult, ExponentError> {
    let (q1, q2) = q_values(inputs)?;
    Ok(ExponentResult {
        rho: inputs.rho,
        q1,
        q2,
        psi: psi_from(inputs.slots, q1, q2),
        e0_slope_at_zero: event16_rate_bound(inputs)?,
    })
}

/// `((Ψ(h) − Ψ(0))/h, dΨ/dρ at 0)`.
pub fn slope_check(inputs: &ExponentInputs, h: f64) -> Result<(f64, f64), ExponentError> {
    if !(h > 0.0 && h <= 1e-3) {
        return Err(ExponentError::Step(h));
    }
    let finite_diff = (psi(&inputs.with_rho(h))? - psi(&inputs.with_rho(0.0))?) / h;
    Ok((finite_diff, event16_rate_bound(inputs)?))
}

/// Results at each `ρ` in `rhos`.
pub fn rho_sweep(inputs: &ExponentInputs, rhos: &[f64]) -> Result<Vec<ExponentResult>, ExponentError> {
    rhos.iter().map(|&rho| evaluate(&inputs.with_rho(rho))).collect()
}

/// CSV with columns `rho,q1,q2,psi`.
pub fn write_sweep_csv<W: Write>(results: &[ExponentResult], out: W) -> Result<(), ExponentError> {
    let err = |e: csv::Error| ExponentError::Io(e.to_string());
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["rho", "q1", "q2", "psi"]).map_err(err)?;
    for r in results {
        w.write_record([r.rho, r.q1, r.q2, r.psi].map(sig12)).map_err(err)?;
    }
    w.flush().map_err(|e| ExponentError::Io(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dmc::Alphabets;

    fn binary(ch1_y: [f64; 4], ch3: Vec<f64>, slots: SlotSchedule) -> ExponentInputs {
        let alphabets = Alphabets { u: 1, v: 1, x10: 2, x20: 2, x13: 2, x23: 2, y: 2, y12: 1, y21: 1 };
        let spec = DmcSpec::new(alphabets, ch1_y.to_vec(), vec![0.5, 0.5, 0.5, 0.5], ch3).unwrap();
        let dist = InputDistribution {
            p_u_x10: vec![0.5, 0.5],
            p_v_x20: vec![0.5, 0.5],
            p_x13_given_uv: vec![0.5, 0.5],
            p_x23_given_uv: vec![0.5, 0.5],
        };
        ExponentInputs { spec, dist, slots, rho: 1.0 }
    }

    fn useless_ch3() -> Vec<f64> {
        vec![0.5; 8]
    }

    #[test]
    fn noiseless_bit() {
        let inputs = binary([1.0, 0.0, 0.0, 1.0], useless_ch3(), SlotSchedule::new(1.0, 0.0).unwrap());
        let (q1, q2) = q_values(&inputs).unwrap();
        assert!((q1 - 0.5).abs() < 1e-15);
        assert!((q2 - 1.0).abs() < 1e-15);
        assert!((psi(&inputs).unwrap() - 1.0).abs() < 1e-15);
        let (fd, analytic) = slope_check(&inputs, 1e-5).unwrap();
        assert_eq!(analytic, 1.0);
        assert!((fd - 1.0).abs() < 1e-3);
    }

    #[test]
    fn rho_zero_is_exact() {
        let inputs = binary([0.9, 0.1, 0.2, 0.8], vec![0.7, 0.3, 0.4, 0.6, 0.1, 0.9, 0.5, 0.5], SlotSchedule::new(0.3, 0.3).unwrap());
        assert_eq!(q_values(&inputs.with_rho(0.0)).unwrap(), (1.0, 1.0));
        assert_eq!(psi(&inputs.with_rho(0.0)).unwrap(), 0.0);
    }

    #[test]
    fn useless_channels() {
        let inputs = binary([0.5, 0.5, 0.5, 0.5], useless_ch3(), SlotSchedule::new(0.4, 0.2).unwrap());
        for rho in [0.1, 0.5, 1.0] {
            let (q1, q2) = q_values(&inputs.with_rho(rho)).unwrap();
            assert!((q1 - 1.0).abs() < 1e-15 && (q2 - 1.0).abs() < 1e-15);
        }
        let (fd, analytic) = slope_check(&inputs, 1e-4).unwrap();
        assert_eq!(analytic, 0.0);
        assert!(fd.abs() < 1e-9);
    }

    #[test]
    fn silent_slots_give_zero() {
        let inputs = binary([1.0, 0.0, 0.0, 1.0], vec![1.0, 0.0, 0.0, 1.0, 0.0, 1.0, 1.0, 0.0], SlotSchedule::new(0.0, 1.0).unwrap());
        assert_eq!(psi(&inputs).unwrap(), 0.0);
        assert_eq!(event16_rate_bound(&inputs).unwrap(), 0.0);
    }

    #[test]
    fn argument_checks() {
        let inputs = binary([1.0, 0.0, 0.0, 1.0], useless_ch3(), SlotSchedule::mac());
        assert_eq!(q_values(&inputs.with_rho(1.5)), Err(ExponentError::Rho(1.5)));
        assert_eq!(slope_check(&inputs, 0.0), Err(ExponentError::Step(0.0)));
        assert_eq!(slope_check(&inputs, 2e-3), Err(ExponentError::Step(2e-3)));
    }

    #[test]
    fn sweep_csv() {
        let inputs = binary([1.0, 0.0, 0.0, 1.0], useless_ch3(), SlotSchedule::new(1.0, 0.0).unwrap());
        let results = rho_sweep(&inputs, &[0.0, 1.0]).unwrap();
        let mut buf = Vec::new();
        write_sweep_csv(&results, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "rho,q1,q2,psi\n0,1,1,0\n1,0.5,1,1\n");
    }
}
