use std::collections::BTreeSet;

use num_traits::Zero;

use super::Rational;

/// `a·r1 + b·r2 <= c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfPlane {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl HalfPlane {
    pub fn slack(&self, r1: f64, r2: f64) -> f64 {
        self.c - self.a * r1 - self.b * r2
    }
}

/// Numeric planar region given by half-planes.
#[derive(Debug, Clone, PartialEq)]
pub struct Polygon {
    pub planes: Vec<HalfPlane>,
}

const VERTEX_TOL: f64 = 1e-9;

impl Polygon {
    pub fn new(planes: Vec<HalfPlane>) -> Self {
        Self { planes }
    }

    pub fn contains(&self, r1: f64, r2: f64, tol: f64) -> bool {
        self.planes.iter().all(|p| p.slack(r1, r2) >= -tol)
    }

    /// Pairwise boundary intersections that satisfy every half-plane,
    /// deduplicated and sorted by `(r1, r2)`.
    pub fn vertices(&self) -> Vec<(f64, f64)> {
        let mut out: Vec<(f64, f64)> = Vec::new();
        for (i, p) in self.planes.iter().enumerate() {
            for q in &self.planes[i + 1..] {
                let det = p.a * q.b - p.b * q.a;
                if det.abs() < 1e-15 {
                    continue;
                }
                let r1 = (p.c * q.b - p.b * q.c) / det;
                let r2 = (p.a * q.c - p.c * q.a) / det;
                let scale = 1.0 + r1.abs().max(r2.abs());
                if self.contains(r1, r2, VERTEX_TOL * scale)
                    && !out.iter().any(|&(x, y)| (x - r1).abs() <= VERTEX_TOL * scale && (y - r2).abs() <= VERTEX_TOL * scale)
                {
                    out.push((r1, r2));
                }
            }
        }
        out.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.total_cmp(&y.1)));
        out
    }

    /// Maximizer of `w1·r1 + w2·r2` among the vertices (ties: first in vertex order).
    pub fn max_weighted(&self, w1: f64, w2: f64) -> Option<(f64, f64, f64)> {
        self.vertices()
            .into_iter()
            .map(|(x, y)| (w1 * x + w2 * y, x, y))
            .fold(None, |best, cand| match best {
                Some(b) if b.0 >= cand.0 => Some(b),
                _ => Some(cand),
            })
    }
}

/// Planar region with exact rational half-planes `(a, b, c)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactPolygon {
    pub planes: Vec<(Rational, Rational, Rational)>,
}

impl ExactPolygon {
    pub fn new(planes: Vec<(Rational, Rational, Rational)>) -> Self {
        Self { planes }
    }

    pub fn contains(&self, r1: &Rational, r2: &Rational) -> bool {
        self.planes.iter().all(|(a, b, c)| a * r1 + b * r2 <= *c)
    }

    /// True when no point satisfies every half-plane; decided exactly.
    pub fn is_empty(&self) -> bool {
        let (a, b): (Vec<_>, Vec<_>) =
            self.planes.iter().map(|(a, b, c)| (vec![a.clone(), b.clone()], c.clone())).unzip();
        super::lp::feasible_point(&a, &b, 2).is_none()
    }

    /// Exact vertex set.
    pub fn vertices(&self) -> BTreeSet<(Rational, Rational)> {
        let mut out = BTreeSet::new();
        for (i, (a1, b1, c1)) in self.planes.iter().enumerate() {
            for (a2, b2, c2) in &self.planes[i + 1..] {
                let det = a1 * b2 - b1 * a2;
                if det.is_zero() {
                    continue;
                }
                let r1 = (c1 * b2 - b1 * c2) / &det;
                let r2 = (a1 * c2 - c1 * a2) / &det;
                if self.contains(&r1, &r2) {
                    out.insert((r1, r2));
                }
            }
        }
        out
    }

    /// Every half-plane of `other` holds on `self` (checked by exact LP).
    pub fn is_subset_of(&self, other: &ExactPolygon) -> bool {
        let (a, b): (Vec<_>, Vec<_>) =
            self.planes.iter().map(|(a, b, c)| (vec![a.clone(), b.clone()], c.clone())).unzip();
        other.planes.iter().all(|(pa, pb, pc)| {
            !matches!(
                super::lp::implication(&a, &b, &[pa.clone(), pb.clone()], pc),
                super::lp::Implication::NotImplied
            )
        })
    }

    /// Identical feasible sets.
    pub fn same_region(&self, other: &ExactPolygon) -> bool {
        self.is_subset_of(other) && other.is_subset_of(self)
    }
}
