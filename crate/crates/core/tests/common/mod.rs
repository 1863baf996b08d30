//! Shared generators and a brute-force oracle: every bound recomputed from
//! entropies of the full joint over all eleven variables.

#![allow(dead_code)]

use hdmac::dmc::{Alphabets, DmcSpec, InputDistribution};
use hdmac::{IBounds, SlotSchedule};
use rand::Rng;

/// Random probability vector; about one draw in five has a zero entry.
pub fn simplex<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    let mut w: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..1.0f64)).collect();
    if n > 1 && rng.gen_bool(0.2) {
        let k = rng.gen_range(0..n);
        w[k] = 0.0;
    }
    if w.iter().sum::<f64>() == 0.0 {
        w[0] = 1.0;
    }
    let total: f64 = w.iter().sum();
    let mut p: Vec<f64> = w.iter().map(|x| x / total).collect();
    // put the rounding residue on the largest entry so rows sum to 1 within 1e-15
    let residue = 1.0 - p.iter().sum::<f64>();
    let imax = (0..n).max_by(|&a, &b| p[a].total_cmp(&p[b])).unwrap();
    p[imax] += residue;
    p
}

fn rows<R: Rng>(rng: &mut R, count: usize, width: usize) -> Vec<f64> {
    (0..count).flat_map(|_| simplex(rng, width)).collect()
}

pub fn random_alphabets<R: Rng>(rng: &mut R, max: usize) -> Alphabets {
    let mut s = || rng.gen_range(1..=max);
    Alphabets { u: s(), v: s(), x10: s(), x20: s(), x13: s(), x23: s(), y: s(), y12: s(), y21: s() }
}

pub fn random_instance<R: Rng>(rng: &mut R, a: Alphabets) -> (DmcSpec, InputDistribution) {
    let spec = DmcSpec::new(
        a,
        rows(rng, a.x10, a.y * a.y12),
        rows(rng, a.x20, a.y * a.y21),
        rows(rng, a.x13 * a.x23, a.y),
    )
    .expect("generated spec is valid");
    let dist = InputDistribution {
        p_u_x10: simplex(rng, a.u * a.x10),
        p_v_x20: simplex(rng, a.v * a.x20),
        p_x13_given_uv: rows(rng, a.u * a.v, a.x13),
        p_x23_given_uv: rows(rng, a.u * a.v, a.x23),
    };
    dist.validate(&a).expect("generated distribution is valid");
    (spec, dist)
}

pub fn random_schedule<R: Rng>(rng: &mut R) -> SlotSchedule {
    let a1 = rng.gen_range(0.0..1.0);
    let a2 = rng.gen_range(0.0..1.0 - a1);
    SlotSchedule::new(a1, a2).unwrap()
}

// variable positions in the flat joint
pub const U: usize = 0;
pub const V: usize = 1;
pub const X10: usize = 2;
pub const X20: usize = 3;
pub const X13: usize = 4;
pub const X23: usize = 5;
pub const Y1: usize = 6;
pub const Y12: usize = 7;
pub const Y2: usize = 8;
pub const Y21: usize = 9;
pub const Y3: usize = 10;

/// `p(u,v,x10,x20,x13,x23,y1,y12,y2,y21,y3)` as a dense array.
pub struct FlatJoint {
    dims: [usize; 11],
    p: Vec<f64>,
}

impl FlatJoint {
    pub fn new(spec: &DmcSpec, dist: &InputDistribution) -> Self {
        let a = spec.alphabets;
        let dims = [a.u, a.v, a.x10, a.x20, a.x13, a.x23, a.y, a.y12, a.y, a.y21, a.y];
        let total: usize = dims.iter().product();
        let mut p = vec![0.0; total];
        let mut idx = [0usize; 11];
        for cell in p.iter_mut() {
            let [u, v, x10, x20, x13, x23, y1, y12, y2, y21, y3] = idx;
            *cell = dist.p_u_x10[u * a.x10 + x10]
                * dist.p_v_x20[v * a.x20 + x20]
                * dist.p_x13_given_uv[(u * a.v + v) * a.x13 + x13]
                * dist.p_x23_given_uv[(u * a.v + v) * a.x23 + x23]
                * spec.ch1[(x10 * a.y + y1) * a.y12 + y12]
                * spec.ch2[(x20 * a.y + y2) * a.y21 + y21]
                * spec.ch3[(x13 * a.x23 + x23) * a.y + y3];
            for k in (0..11).rev() {
                idx[k] += 1;
                if idx[k] < dims[k] {
                    break;
                }
                idx[k] = 0;
            }
        }
        Self { dims, p }
    }

    /// `H(S)` in bits for the variables in `subset`.
    pub fn entropy(&self, subset: &[usize]) -> f64 {
        let mut stride = [0usize; 11];
        let mut size = 1;
        for &k in subset.iter().rev() {
            stride[k] = size;
            size *= self.dims[k];
        }
        let mut marginal = vec![0.0; size];
        let mut idx = [0usize; 11];
        for &p in &self.p {
            let pos: usize = (0..11).map(|k| idx[k] * stride[k]).sum();
            marginal[pos] += p;
            for k in (0..11).rev() {
                idx[k] += 1;
                if idx[k] < self.dims[k] {
                    break;
                }
                idx[k] = 0;
            }
        }
        marginal.iter().filter(|p| **p > 0.0).map(|p| -p * p.log2()).sum()
    }

    /// `I(A;B|C) = H(A,C) + H(B,C) − H(A,B,C) − H(C)`.
    pub fn cmi(&self, a: &[usize], b: &[usize], c: &[usize]) -> f64 {
        let join = |xs: &[&[usize]]| -> Vec<usize> {
            let mut v: Vec<usize> = xs.iter().flat_map(|x| x.iter().copied()).collect();
            v.sort_unstable();
            v.dedup();
            v
        };
        self.entropy(&join(&[a, c])) + self.entropy(&join(&[b, c])) - self.entropy(&join(&[a, b, c])) - self.entropy(c)
    }

    /// All ten bounds from entropies of the flat joint.
    pub fn bounds(&self, slots: SlotSchedule) -> IBounds {
        let (a1, a2, a3) = (slots.alpha1(), slots.alpha2(), slots.alpha3());
        let direct1 = self.cmi(&[X10], &[Y1], &[]);
        let direct2 = self.cmi(&[X20], &[Y2], &[]);
        IBounds {
            i1: Some(a1 * self.cmi(&[X10], &[Y1], &[U]).min(self.cmi(&[X10], &[Y12], &[U]))),
            i2: a1 * self.cmi(&[X10], &[Y12], &[]),
            i3: Some(a2 * self.cmi(&[X20], &[Y2], &[V]).min(self.cmi(&[X20], &[Y21], &[V]))),
            i4: a2 * self.cmi(&[X20], &[Y21], &[]),
            i5: a3 * self.cmi(&[X13], &[Y3], &[U, V, X23]),
            i6: a3 * self.cmi(&[X23], &[Y3], &[U, V, X13]),
            i7: a3 * self.cmi(&[X13, X23], &[Y3], &[U, V]),
            i8: a1 * direct1 + a3 * self.cmi(&[X13, X23], &[Y3], &[V]),
            i9: a2 * direct2 + a3 * self.cmi(&[X13, X23], &[Y3], &[U]),
            i10: a1 * direct1 + a2 * direct2 + a3 * self.cmi(&[X13, X23], &[Y3], &[]),
            slots,
        }
    }
}

/// Largest absolute difference over the ten bounds (absent entries must match).
pub fn max_bound_gap(a: &IBounds, b: &IBounds) -> f64 {
    a.values()
        .iter()
        .zip(b.values())
        .map(|(x, y)| match (x, y) {
            (Some(x), Some(y)) => (x - y).abs(),
            (None, None) => 0.0,
            _ => f64::INFINITY,
        })
        .fold(0.0, f64::max)
}
