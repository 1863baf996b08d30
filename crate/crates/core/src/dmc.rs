//! Finite-alphabet model of the half-duplex cooperative MAC and exact
//! enumeration of its ten information bounds.
//!
//! Logarithms are base 2 throughout, so every quantity is in bits.
//!
//! Array layouts (row-major, last index fastest):
//!
//! | array            | shape                | meaning                     |
//! |------------------|----------------------|-----------------------------|
//! | `ch1`            | `[x10][y][y12]`      | `p(y, y12 \| x10)`, slot 1  |
//! | `ch2`            | `[x20][y][y21]`      | `p(y, y21 \| x20)`, slot 2  |
//! | `ch3`            | `[x13][x23][y]`      | `p(y \| x13, x23)`, slot 3  |
//! | `p_u_x10`        | `[u][x10]`           | `p(u, x10)`                 |
//! | `p_v_x20`        | `[v][x20]`           | `p(v, x20)`                 |
//! | `p_x13_given_uv` | `[u][v][x13]`        | `p(x13 \| u, v)`            |
//! | `p_x23_given_uv` | `[u][v][x23]`        | `p(x23 \| u, v)`            |

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::region::{IBounds, SlotSchedule};

/// Normalization tolerance for channel rows and input distributions.
pub const NORMALIZATION_TOL: f64 = 1e-12;
/// Mass tolerance accepted by [`mutual_information`].
pub const MASS_TOL: f64 = 1e-9;
pub const DEFAULT_ALPHABET_CAP: usize = 8;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DmcError {
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("{what}: expected {expected} entries, found {found}")]
    Shape { what: &'static str, expected: usize, found: usize },
    #[error("alphabet `{name}` has size {size}; allowed range is 1..={cap}")]
    AlphabetSize { name: &'static str, size: usize, cap: usize },
    #[error("{0}")]
    Document(String),
}

/// Alphabet sizes of every variable in the model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Alphabets {
    pub u: usize,
    pub v: usize,
    pub x10: usize,
    pub x20: usize,
    pub x13: usize,
    pub x23: usize,
    pub y: usize,
    pub y12: usize,
    pub y21: usize,
}

impl Alphabets {
    fn named(&self) -> [(&'static str, usize); 9] {
        [
            ("u", self.u),
            ("v", self.v),
            ("x10", self.x10),
            ("x20", self.x20),
            ("x13", self.x13),
            ("x23", self.x23),
            ("y", self.y),
            ("y12", self.y12),
            ("y21", self.y21),
        ]
    }

    fn check(&self, cap: usize) -> Result<(), DmcError> {
        for (name, size) in self.named() {
            if size == 0 || size > cap {
                return Err(DmcError::AlphabetSize { name, size, cap });
            }
        }
        Ok(())
    }
}

/// The three per-slot conditional channels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DmcSpec {
    pub alphabets: Alphabets,
    pub ch1: Vec<f64>,
    pub ch2: Vec<f64>,
    pub ch3: Vec<f64>,
}

/// Input distribution `p(x10,u) p(x20,v) p(x13|u,v) p(x23|u,v)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputDistribution {
    pub p_u_x10: Vec<f64>,
    pub p_v_x20: Vec<f64>,
    pub p_x13_given_uv: Vec<f64>,
    pub p_x23_given_uv: Vec<f64>,
}

fn check_len(what: &'static str, data: &[f64], expected: usize) -> Result<(), DmcError> {
    if data.len() != expected {
        return Err(DmcError::Shape { what, expected, found: data.len() });
    }
    Ok(())
}

/// Each consecutive block of `width` entries must be a distribution.
fn check_rows(what: &str, data: &[f64], width: usize, row_name: impl Fn(usize) -> String) -> Result<(), DmcError> {
    for (r, row) in data.chunks(width).enumerate() {
        if let Some(bad) = row.iter().find(|p| !p.is_finite() || **p < 0.0 || **p > 1.0) {
            return Err(DmcError::InvalidDistribution(format!("{what} row {}: entry {bad} outside [0, 1]", row_name(r))));
        }
        let total: f64 = row.iter().sum();
        if (total - 1.0).abs() > NORMALIZATION_TOL {
            return Err(DmcError::InvalidDistribution(format!("{what} row {}: sums to {total}, expected 1", row_name(r))));
        }
    }
    Ok(())
}

impl DmcSpec {
    pub fn new(alphabets: Alphabets, ch1: Vec<f64>, ch2: Vec<f64>, ch3: Vec<f64>) -> Result<Self, DmcError> {
        let spec = Self { alphabets, ch1, ch2, ch3 };
        spec.validate(DEFAULT_ALPHABET_CAP)?;
        Ok(spec)
    }

    pub fn validate(&self, cap: usize) -> Result<(), DmcError> {
        let a = &self.alphabets;
        a.check(cap)?;
        check_len("ch1", &self.ch1, a.x10 * a.y * a.y12)?;
        check_len("ch2", &self.ch2, a.x20 * a.y * a.y21)?;
        check_len("ch3", &self.ch3, a.x13 * a.x23 * a.y)?;
        check_rows("ch1", &self.ch1, a.y * a.y12, |r| format!("x10={r}"))?;
        check_rows("ch2", &self.ch2, a.y * a.y21, |r| format!("x20={r}"))?;
        check_rows("ch3", &self.ch3, a.y, |r| format!("x13={}, x23={}", r / a.x23, r % a.x23))?;
        Ok(())
    }

    /// `p(y1 | x10)`, marginalizing the partner's observation.
    pub fn slot1_destination(&self) -> Vec<f64> {
        let a = &self.alphabets;
        marginal_last(&self.ch1, a.x10 * a.y, a.y12)
    }

    /// `p(y2 | x20)`.
    pub fn slot2_destination(&self) -> Vec<f64> {
        let a = &self.alphabets;
        marginal_last(&self.ch2, a.x20 * a.y, a.y21)
    }
}

/// Sums out the last axis of a `[outer][last]` array.
fn marginal_last(data: &[f64], outer: usize, last: usize) -> Vec<f64> {
    (0..outer).map(|i| data[i * last..(i + 1) * last].iter().sum()).collect()
}

impl InputDistribution {
    pub fn validate(&self, a: &Alphabets) -> Result<(), DmcError> {
        check_len("p_u_x10", &self.p_u_x10, a.u * a.x10)?;
        check_len("p_v_x20", &self.p_v_x20, a.v * a.x20)?;
        check_len("p_x13_given_uv", &self.p_x13_given_uv, a.u * a.v * a.x13)?;
        check_len("p_x23_given_uv", &self.p_x23_given_uv, a.u * a.v * a.x23)?;
        check_rows("p_u_x10", &self.p_u_x10, self.p_u_x10.len(), |_| "joint".into())?;
        check_rows("p_v_x20", &self.p_v_x20, self.p_v_x20.len(), |_| "joint".into())?;
        check_rows("p_x13_given_uv", &self.p_x13_given_uv, a.x13, |r| format!("u={}, v={}", r / a.v, r % a.v))?;
        check_rows("p_x23_given_uv", &self.p_x23_given_uv, a.x23, |r| format!("u={}, v={}", r / a.v, r % a.v))?;
        Ok(())
    }

    pub fn p_u(&self, a: &Alphabets) -> Vec<f64> {
        marginal_last(&self.p_u_x10, a.u, a.x10)
    }

    pub fn p_v(&self, a: &Alphabets) -> Vec<f64> {
        marginal_last(&self.p_v_x20, a.v, a.x20)
    }

    pub fn p_x10(&self, a: &Alphabets) -> Vec<f64> {
        (0..a.x10).map(|x| (0..a.u).map(|u| self.p_u_x10[u * a.x10 + x]).sum()).collect()
    }

    pub fn p_x20(&self, a: &Alphabets) -> Vec<f64> {
        (0..a.x20).map(|x| (0..a.v).map(|v| self.p_v_x20[v * a.x20 + x]).sum()).collect()
    }

    /// `p(x13, x23 | v) = Σ_u p(u) p(x13|u,v) p(x23|u,v)`, shape `[v][x13][x23]`.
    pub fn slot3_inputs_given_v(&self, a: &Alphabets) -> Vec<f64> {
        let pu = self.p_u(a);
        let mut out = vec![0.0; a.v * a.x13 * a.x23];
        for u in 0..a.u {
            for v in 0..a.v {
                for x13 in 0..a.x13 {
                    for x23 in 0..a.x23 {
                        out[(v * a.x13 + x13) * a.x23 + x23] += pu[u]
                            * self.p_x13_given_uv[(u * a.v + v) * a.x13 + x13]
                            * self.p_x23_given_uv[(u * a.v + v) * a.x23 + x23];
                    }
                }
            }
        }
        out
    }
}

/// `I(A;B)` in bits of a 2-D joint given row-major with `cols` columns.
///
/// Zero cells contribute nothing; the result is clamped at 0.
pub fn mutual_information(joint: &[f64], cols: usize) -> Result<f64, DmcError> {
    if cols == 0 || !joint.len().is_multiple_of(cols) {
        return Err(DmcError::InvalidDistribution(format!("{} entries do not form rows of {cols}", joint.len())));
    }
    if let Some(bad) = joint.iter().find(|p| !p.is_finite() || **p < 0.0) {
        return Err(DmcError::InvalidDistribution(format!("entry {bad} is negative or not finite")));
    }
    let mass: f64 = joint.iter().sum();
    if (mass - 1.0).abs() > MASS_TOL {
        return Err(DmcError::InvalidDistribution(format!("total mass {mass}, expected 1")));
    }
    Ok(weighted_information(joint, cols).max(0.0))
}

/// `p(c)·I(A;B | C=c)` for an unnormalized block `p(a, b, c)` of mass `p(c)`.
fn weighted_information(block: &[f64], cols: usize) -> f64 {
    let rows = block.len() / cols;
    let mass: f64 = block.iter().sum();
    if mass <= 0.0 {
        return 0.0;
    }
    let row_sums: Vec<f64> = (0..rows).map(|r| block[r * cols..(r + 1) * cols].iter().sum()).collect();
    let col_sums: Vec<f64> = (0..cols).map(|c| (0..rows).map(|r| block[r * cols + c]).sum()).collect();
    let mut total = 0.0;
    for r in 0..rows {
        for c in 0..cols {
            let p = block[r * cols + c];
            if p > 0.0 {
                total += p * (p * mass / (row_sums[r] * col_sums[c])).log2();
            }
        }
    }
    total
}

/// `I(A;B|C) = Σ_c p(c)·I(A;B|C=c)` from blocks `p(a, b, c)`, one per `c`.
fn conditional_information(blocks: &[Vec<f64>], cols: usize) -> f64 {
    blocks.iter().map(|b| weighted_information(b, cols)).sum::<f64>().max(0.0)
}

/// Per-slot mutual informations before weighting by slot durations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SlotInformation {
    /// `I(X10;Y1|U)`
    pub x10_y1_given_u: f64,
    /// `I(X10;Y12|U)`
    pub x10_y12_given_u: f64,
    /// `I(X10;Y12)`
    pub x10_y12: f64,
    /// `I(X10;Y1)`
    pub x10_y1: f64,
    pub x20_y2_given_v: f64,
    pub x20_y21_given_v: f64,
    pub x20_y21: f64,
    pub x20_y2: f64,
    /// `I(X13;Y3|U,V,X23)`
    pub x13_given_uvx23: f64,
    /// `I(X23;Y3|U,V,X13)`
    pub x23_given_uvx13: f64,
    /// `I(X13,X23;Y3|U,V)`
    pub pair_given_uv: f64,
    /// `I(X13,X23;Y3|V)`
    pub pair_given_v: f64,
    /// `I(X13,X23;Y3|U)`
    pub pair_given_u: f64,
    /// `I(X13,X23;Y3)`
    pub pair: f64,
}

impl SlotInformation {
    pub fn weighted(&self, slots: SlotSchedule) -> IBounds {
        let (a1, a2, a3) = (slots.alpha1(), slots.alpha2(), slots.alpha3());
        IBounds {
            i1: Some(a1 * self.x10_y1_given_u.min(self.x10_y12_given_u)),
            i2: a1 * self.x10_y12,
            i3: Some(a2 * self.x20_y2_given_v.min(self.x20_y21_given_v)),
            i4: a2 * self.x20_y21,
            i5: a3 * self.x13_given_uvx23,
            i6: a3 * self.x23_given_uvx13,
            i7: a3 * self.pair_given_uv,
            i8: a1 * self.x10_y1 + a3 * self.pair_given_v,
            i9: a2 * self.x20_y2 + a3 * self.pair_given_u,
            i10: a1 * self.x10_y1 + a2 * self.x20_y2 + a3 * self.pair,
            slots,
        }
    }
}

/// Blocks of a user slot: `p(s, x, y_dest, y_partner)` from `p(s, x)` and
/// `p(y_dest, y_partner | x)`. Returns the four informations in the order
/// `(x;dest|s, x;partner|s, x;partner, x;dest)`.
fn user_slot(joint_sx: &[f64], s: usize, x: usize, channel: &[f64], ny: usize, np: usize) -> [f64; 4] {
    let mut dest_given_s = Vec::with_capacity(s);
    let mut partner_given_s = Vec::with_capacity(s);
    let mut dest = vec![0.0; x * ny];
    let mut partner = vec![0.0; x * np];
    for si in 0..s {
        let mut bd = vec![0.0; x * ny];
        let mut bp = vec![0.0; x * np];
        for xi in 0..x {
            let w = joint_sx[si * x + xi];
            for yi in 0..ny {
                for pi in 0..np {
                    let p = w * channel[(xi * ny + yi) * np + pi];
                    bd[xi * ny + yi] += p;
                    bp[xi * np + pi] += p;
                }
            }
        }
        for (acc, v) in dest.iter_mut().zip(&bd) {
            *acc += v;
        }
        for (acc, v) in partner.iter_mut().zip(&bp) {
            *acc += v;
        }
        dest_given_s.push(bd);
        partner_given_s.push(bp);
    }
    [
        conditional_information(&dest_given_s, ny),
        conditional_information(&partner_given_s, np),
        conditional_information(&[partner], np),
        conditional_information(&[dest], ny),
    ]
}

/// Slot-3 informations from `p(u) p(v) p(x13|u,v) p(x23|u,v) p(y|x13,x23)`.
fn cooperative_slot(spec: &DmcSpec, dist: &InputDistribution) -> [f64; 6] {
    let a = &spec.alphabets;
    let (nu, nv, n13, n23, ny) = (a.u, a.v, a.x13, a.x23, a.y);
    let pu = dist.p_u(a);
    let pv = dist.p_v(a);
    let p = |u: usize, v: usize, x13: usize, x23: usize, y: usize| {
        pu[u]
            * pv[v]
            * dist.p_x13_given_uv[(u * nv + v) * n13 + x13]
            * dist.p_x23_given_uv[(u * nv + v) * n23 + x23]
            * spec.ch3[(x13 * n23 + x23) * ny + y]
    };

    // I(X13;Y3|U,V,X23): blocks over (u, v, x23), rows x13
    let mut b13 = Vec::new();
    // I(X23;Y3|U,V,X13)
    let mut b23 = Vec::new();
    // I(X13,X23;Y3|U,V)
    let mut buv = Vec::new();
    for u in 0..nu {
        for v in 0..nv {
            for x23 in 0..n23 {
                b13.push((0..n13).flat_map(|x13| (0..ny).map(move |y| (x13, y))).map(|(x13, y)| p(u, v, x13, x23, y)).collect());
            }
            for x13 in 0..n13 {
                b23.push((0..n23).flat_map(|x23| (0..ny).map(move |y| (x23, y))).map(|(x23, y)| p(u, v, x13, x23, y)).collect());
            }
            buv.push(pair_block(n13, n23, ny, |x13, x23, y| p(u, v, x13, x23, y)));
        }
    }
    let bv: Vec<Vec<f64>> =
        (0..nv).map(|v| pair_block(n13, n23, ny, |x13, x23, y| (0..nu).map(|u| p(u, v, x13, x23, y)).sum())).collect();
    let bu: Vec<Vec<f64>> =
        (0..nu).map(|u| pair_block(n13, n23, ny, |x13, x23, y| (0..nv).map(|v| p(u, v, x13, x23, y)).sum())).collect();
    let whole = pair_block(n13, n23, ny, |x13, x23, y| {
        (0..nu).flat_map(|u| (0..nv).map(move |v| (u, v))).map(|(u, v)| p(u, v, x13, x23, y)).sum()
    });

    [
        conditional_information(&b13, ny),
        conditional_information(&b23, ny),
        conditional_information(&buv, ny),
        conditional_information(&bv, ny),
        conditional_information(&bu, ny),
        conditional_information(&[whole], ny),
    ]
}

/// Block with rows `(x13, x23)` and columns `y`.
fn pair_block(n13: usize, n23: usize, ny: usize, f: impl Fn(usize, usize, usize) -> f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n13 * n23 * ny);
    for x13 in 0..n13 {
        for x23 in 0..n23 {
            for y in 0..ny {
                out.push(f(x13, x23, y));
            }
        }
    }
    out
}

/// All per-slot informations by structured marginalization.
pub fn slot_information(spec: &DmcSpec, dist: &InputDistribution) -> Result<SlotInformation, DmcError> {
    spec.validate(usize::MAX)?;
    dist.validate(&spec.alphabets)?;
    let a = &spec.alphabets;
    let s1 = user_slot(&dist.p_u_x10, a.u, a.x10, &spec.ch1, a.y, a.y12);
    let s2 = user_slot(&dist.p_v_x20, a.v, a.x20, &spec.ch2, a.y, a.y21);
    let s3 = cooperative_slot(spec, dist);
    Ok(SlotInformation {
        x10_y1_given_u: s1[0],
        x10_y12_given_u: s1[1],
        x10_y12: s1[2],
        x10_y1: s1[3],
        x20_y2_given_v: s2[0],
        x20_y21_given_v: s2[1],
        x20_y21: s2[2],
        x20_y2: s2[3],
        x13_given_uvx23: s3[0],
        x23_given_uvx13: s3[1],
        pair_given_uv: s3[2],
        pair_given_v: s3[3],
        pair_given_u: s3[4],
        pair: s3[5],
    })
}

/// The ten bounds for a channel, input distribution and schedule.
pub fn evaluate_bounds(spec: &DmcSpec, dist: &InputDistribution, slots: SlotSchedule) -> Result<IBounds, DmcError> {
    Ok(slot_information(spec, dist)?.weighted(slots))
}

/// Channel plus input distribution as stored on disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DmcDocument {
    pub alphabets: Alphabets,
    pub channels: Channels,
    pub input: InputDistribution,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Channels {
    pub ch1: Vec<f64>,
    pub ch2: Vec<f64>,
    pub ch3: Vec<f64>,
}

impl DmcDocument {
    /// Parses and validates a TOML document.
    pub fn from_toml(text: &str) -> Result<(DmcSpec, InputDistribution), DmcError> {
        let doc: DmcDocument = toml::from_str(text).map_err(|e| DmcError::Document(e.to_string()))?;
        let spec = DmcSpec::new(doc.alphabets, doc.channels.ch1, doc.channels.ch2, doc.channels.ch3)?;
        doc.input.validate(&spec.alphabets)?;
        Ok((spec, doc.input))
    }

    pub fn load(path: &Path) -> Result<(DmcSpec, InputDistribution), DmcError> {
        let text = std::fs::read_to_string(path).map_err(|e| DmcError::Document(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }
}
