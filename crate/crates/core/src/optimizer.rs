//! Weighted-sum frontier search over slot durations and power policies for
//! the Gaussian model, plus the MAC and TDMA baselines.
//!
//! A candidate is the vector `θ = (α1, α2, e1, e2, p1, q1, p2, q2)`:
//!
//! * `e` is the share of a user's energy spent in its own slot; the rest goes
//!   to slot 3.
//! * Within slot 3 a user spends the share `p` on its private signal, `q` on
//!   its own public codeword and `1 − p − q` on the partner's.
//! * In its own slot a user splits power evenly between the private and the
//!   public component. The bounds depend on the split only through
//!   `μ = P10 + PU` and the products `c·PU`, so this loses nothing.
//!
//! Every candidate spends each user's full budget whenever a slot is
//! available to spend it in, so policies are feasible by construction.
//! Public energy that cannot be used (the public power is zero) moves to
//! the private signal.
//!
//! The search enumerates a grid and then runs a shrinking pattern search
//! around the incumbent of each weight. Grid evaluations are independent;
//! the argmax uses a total order (objective, then the smaller `θ`), so the
//! result does not depend on evaluation order.

use std::cmp::Ordering;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::exec::{self, Execution};
use crate::format::sig12;
use crate::gaussian::{bounds_unchecked, consumption, GaussianError, GaussianParams, PowerPolicy};
use crate::polytope::cooperative::RegionForm;
use crate::region::{rate_rows, IBounds, Pentagon, SlotSchedule};

/// Rows within this distance of their bound are reported as binding.
pub const BINDING_TOL: f64 = 1e-9;
/// Power budgets may be exceeded by at most this much.
pub const POWER_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OptimizerError {
    #[error(transparent)]
    Params(#[from] GaussianError),
    #[error("search config: {0}")]
    Config(String),
    #[error("frontier has no points")]
    EmptyFrontier,
    #[error("witness check failed at mu = {mu}: {reason}")]
    Witness { mu: f64, reason: String },
    #[error("frontier file: {0}")]
    Csv(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SearchConfig {
    /// Points per axis of the `(α1, α2)` triangle.
    pub alpha_grid_steps: usize,
    /// Points of the own-slot energy share `e`.
    pub power_fraction_steps: usize,
    /// Points per axis of the slot-3 simplex `(p, q, 1 − p − q)`.
    pub split_steps: usize,
    pub refine_rounds: usize,
    pub mu_samples: usize,
    /// Distance below which two frontier points are the same point.
    pub tolerance: f64,
    pub form: RegionForm,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            alpha_grid_steps: 21,
            power_fraction_steps: 11,
            split_steps: 5,
            refine_rounds: 2,
            mu_samples: 41,
            tolerance: 1e-9,
            form: RegionForm::default(),
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<(), OptimizerError> {
        for (name, v) in [
            ("alpha_grid_steps", self.alpha_grid_steps),
            ("power_fraction_steps", self.power_fraction_steps),
            ("split_steps", self.split_steps),
            ("mu_samples", self.mu_samples),
        ] {
            if v < 2 {
                return Err(OptimizerError::Config(format!("{name} must be at least 2, got {v}")));
            }
        }
        if !(self.tolerance.is_finite() && self.tolerance > 0.0) {
            return Err(OptimizerError::Config(format!("tolerance must be positive, got {}", self.tolerance)));
        }
        Ok(())
    }

    /// The sweep weights `k / (mu_samples − 1)`.
    pub fn mus(&self) -> Vec<f64> {
        grid(self.mu_samples)
    }
}

fn grid(steps: usize) -> Vec<f64> {
    (0..steps).map(|k| k as f64 / (steps - 1) as f64).collect()
}

/// Search coordinates, see the module docs.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Theta([f64; 8]);

impl Theta {
    fn cmp_lex(&self, other: &Self) -> Ordering {
        self.0.iter().zip(&other.0).map(|(a, b)| a.total_cmp(b)).find(|o| o.is_ne()).unwrap_or(Ordering::Equal)
    }

    fn in_domain(&self) -> bool {
        let [a1, a2, e1, e2, p1, q1, p2, q2] = self.0;
        const EPS: f64 = 1e-12;
        let unit = |x: f64| (-EPS..=1.0 + EPS).contains(&x);
        unit(a1) && unit(a2) && a1 + a2 <= 1.0 + EPS && unit(e1) && unit(e2) && unit(p1) && unit(q1) && unit(p2) && unit(q2)
            && p1 + q1 <= 1.0 + EPS
            && p2 + q2 <= 1.0 + EPS
    }

    fn clamped(mut self) -> Self {
        for v in &mut self.0 {
            *v = v.clamp(0.0, 1.0);
        }
        self
    }

    /// The schedule and policy this candidate stands for.
    fn realize(&self, params: &GaussianParams) -> (SlotSchedule, PowerPolicy) {
        let [a1, a2, e1, e2, p1, q1, p2, q2] = self.clamped().0;
        let a2 = a2.min(1.0 - a1);
        let slots = SlotSchedule::new(a1, a2).expect("clamped schedule");
        let a3 = slots.alpha3();
        let u1 = UserShare::new(params.p1, a1, a3, e1, p1, q1);
        let u2 = UserShare::new(params.p2, a2, a3, e2, p2, q2);
        // public powers PU, PV of the own-slot signals
        let pu = u1.own_slot / 2.0;
        let pv = u2.own_slot / 2.0;
        let mut policy = PowerPolicy {
            p10: u1.own_slot - pu,
            p_u: pu,
            p20: u2.own_slot - pv,
            p_v: pv,
            p13: u1.private,
            p23: u2.private,
            ..Default::default()
        };
        let route = |energy: f64, public: f64, private: &mut f64| {
            if public > 0.0 {
                energy / public
            } else {
                *private += energy;
                0.0
            }
        };
        policy.c2 = route(u1.own_public, pu, &mut policy.p13);
        policy.c3 = route(u1.partner_public, pv, &mut policy.p13);
        policy.d2 = route(u2.own_public, pv, &mut policy.p23);
        policy.d3 = route(u2.partner_public, pu, &mut policy.p23);
        (slots, policy)
    }
}

/// One user's per-slot powers implied by its shares.
struct UserShare {
    own_slot: f64,
    private: f64,
    own_public: f64,
    partner_public: f64,
}

impl UserShare {
    fn new(budget: f64, own: f64, a3: f64, e: f64, p: f64, q: f64) -> Self {
        // energy has to go where a slot exists
        let e = match (own > 0.0, a3 > 0.0) {
            (true, true) => e,
            (true, false) => 1.0,
            (false, _) => 0.0,
        };
        let own_slot = if own > 0.0 { e * budget / own } else { 0.0 };
        let slot3 = if a3 > 0.0 { (1.0 - e) * budget / a3 } else { 0.0 };
        let rest = (1.0 - p - q).max(0.0);
        Self { own_slot, private: p * slot3, own_public: q * slot3, partner_public: rest * slot3 }
    }
}

/// Per-weight incumbent.
#[derive(Debug, Clone, Copy)]
struct Best {
    objective: f64,
    theta: Theta,
}

impl Best {
    fn better_than(&self, other: &Best) -> bool {
        match self.objective.total_cmp(&other.objective) {
            Ordering::Greater => true,
            Ordering::Less => false,
            Ordering::Equal => self.theta.cmp_lex(&other.theta).is_lt(),
        }
    }
}

fn merge(into: &mut [Option<Best>], from: &[Option<Best>]) {
    for (slot, cand) in into.iter_mut().zip(from) {
        if let Some(c) = cand {
            if slot.is_none_or(|s| c.better_than(&s)) {
                *slot = Some(*c);
            }
        }
    }
}

fn evaluate(params: &GaussianParams, theta: &Theta, form: RegionForm) -> Pentagon {
    let (slots, policy) = theta.realize(params);
    Pentagon::from_bounds(&bounds_unchecked(params, &policy, slots), form)
}

/// Candidate `(e, p, q)` triples for one user. Shares that cannot change the
/// policy (no slot to spend in, nothing left for slot 3) are enumerated once.
fn user_options(own: f64, a3: f64, cfg: &SearchConfig) -> Vec<[f64; 3]> {
    let simplex: Vec<[f64; 2]> = {
        let g = grid(cfg.split_steps);
        let n = cfg.split_steps - 1;
        let mut out = Vec::new();
        for (i, p) in g.iter().enumerate() {
            for q in &g[..=n - i] {
                out.push([*p, *q]);
            }
        }
        out
    };
    let idle = [[1.0, 1.0, 0.0]];
    match (own > 0.0, a3 > 0.0) {
        (_, false) => idle.to_vec(),
        (false, true) => simplex.iter().map(|[p, q]| [0.0, *p, *q]).collect(),
        (true, true) => {
            let mut out = Vec::new();
            for e in grid(cfg.power_fraction_steps) {
                if e == 1.0 {
                    out.extend(idle);
                } else {
                    out.extend(simplex.iter().map(|[p, q]| [e, *p, *q]));
                }
            }
            out
        }
    }
}

fn schedule_grid(cfg: &SearchConfig, pinned: Option<SlotSchedule>) -> Vec<(f64, f64)> {
    if let Some(s) = pinned {
        return vec![(s.alpha1(), s.alpha2())];
    }
    let g = grid(cfg.alpha_grid_steps);
    let n = cfg.alpha_grid_steps - 1;
    let mut out = Vec::new();
    for (i, a1) in g.iter().enumerate() {
        for a2 in &g[..=n - i] {
            out.push((*a1, *a2));
        }
    }
    out
}

/// Grid stage: best candidate per weight over the whole grid.
fn grid_search(
    params: &GaussianParams,
    mus: &[f64],
    cfg: &SearchConfig,
    pinned: Option<SlotSchedule>,
    exec: Execution,
) -> Vec<Best> {
    let schedules = schedule_grid(cfg, pinned);
    let partial = exec::map(&schedules, exec, |&(a1, a2)| {
        let a3 = (1.0 - a1 - a2).max(0.0);
        let opts1 = user_options(a1, a3, cfg);
        let opts2 = user_options(a2, a3, cfg);
        let mut best: Vec<Option<Best>> = vec![None; mus.len()];
        for o1 in &opts1 {
            for o2 in &opts2 {
                let theta = Theta([a1, a2, o1[0], o2[0], o1[1], o1[2], o2[1], o2[2]]);
                let pent = evaluate(params, &theta, cfg.form);
                let high = pent.best(1.0);
                let low = pent.best(0.0);
                for (slot, &mu) in best.iter_mut().zip(mus) {
                    let (r1, r2) = if mu >= 0.5 { high } else { low };
                    let cand = Best { objective: mu * r1 + (1.0 - mu) * r2, theta };
                    if slot.is_none_or(|s| cand.better_than(&s)) {
                        *slot = Some(cand);
                    }
                }
            }
        }
        best
    });
    let mut best = vec![None; mus.len()];
    for p in &partial {
        merge(&mut best, p);
    }
    best.into_iter().map(|b| b.expect("grid is non-empty")).collect()
}

/// Pattern search on the `3^8` neighbourhood, halving the steps each round.
fn refine(params: &GaussianParams, mu: f64, start: Best, cfg: &SearchConfig, pin_alpha: bool) -> Best {
    const MOVES_PER_ROUND: usize = 4;
    let da = 1.0 / (cfg.alpha_grid_steps - 1) as f64;
    let de = 1.0 / (cfg.power_fraction_steps - 1) as f64;
    let ds = 1.0 / (cfg.split_steps - 1) as f64;
    let mut steps = [da, da, de, de, ds, ds, ds, ds];
    if pin_alpha {
        steps[0] = 0.0;
        steps[1] = 0.0;
    }
    let mut best = start;
    for _ in 0..cfg.refine_rounds {
        for s in &mut steps {
            *s /= 2.0;
        }
        for _ in 0..MOVES_PER_ROUND {
            let mut round_best = best;
            for code in 0..3usize.pow(8) {
                let mut theta = best.theta;
                let mut c = code;
                let mut moved = false;
                for (k, step) in steps.iter().enumerate() {
                    let d = (c % 3) as f64 - 1.0;
                    c /= 3;
                    if d != 0.0 && *step > 0.0 {
                        theta.0[k] += d * step;
                        moved = true;
                    }
                }
                if !moved || !theta.in_domain() {
                    continue;
                }
                let theta = theta.clamped();
                let cand = Best { objective: evaluate(params, &theta, cfg.form).weighted(mu), theta };
                if cand.better_than(&round_best) {
                    round_best = cand;
                }
            }
            if round_best.objective > best.objective {
                best = round_best;
            } else {
                break;
            }
        }
    }
    best
}

/// A frontier point with the schedule and policy that achieve it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatePoint {
    pub mu: f64,
    pub r1: f64,
    pub r2: f64,
    pub objective: f64,
    pub slots: SlotSchedule,
    pub policy: PowerPolicy,
    /// Region rows active at `(r1, r2)`.
    pub binding_rows: Vec<String>,
}

impl RatePoint {
    /// The corner of `theta`'s region that is best in `direction`, reported
    /// under the sweep weight `mu`.
    fn from_theta(params: &GaussianParams, mu: f64, direction: f64, theta: &Theta, form: RegionForm) -> Self {
        let (slots, policy) = theta.realize(params);
        let bounds = bounds_unchecked(params, &policy, slots);
        let (r1, r2) = Pentagon::from_bounds(&bounds, form).best(direction);
        let binding_rows = rate_rows(&bounds, form)
            .expect("search bounds are finite")
            .into_iter()
            .filter(|row| (row.bound - row.r1 * r1 - row.r2 * r2).abs() <= BINDING_TOL)
            .map(|row| row.label)
            .collect();
        Self { mu, r1, r2, objective: mu * r1 + (1.0 - mu) * r2, slots, policy, binding_rows }
    }

    pub fn bounds(&self, params: &GaussianParams) -> IBounds {
        bounds_unchecked(params, &self.policy, self.slots)
    }

    /// Re-checks the witness from scratch: power within budget and every
    /// region row satisfied at `(r1, r2)`.
    pub fn verify(&self, params: &GaussianParams, form: RegionForm) -> Result<(), OptimizerError> {
        let fail = |reason: String| Err(OptimizerError::Witness { mu: self.mu, reason });
        if let Err(e) = self.policy.validate() {
            return fail(e.to_string());
        }
        let (u1, u2) = consumption(&self.policy, self.slots);
        if u1 > params.p1 + POWER_TOL || u2 > params.p2 + POWER_TOL {
            return fail(format!("consumption ({u1}, {u2}) exceeds budgets ({}, {})", params.p1, params.p2));
        }
        if self.r1 < -BINDING_TOL || self.r2 < -BINDING_TOL {
            return fail(format!("negative rate ({}, {})", self.r1, self.r2));
        }
        let rows = rate_rows(&self.bounds(params), form).map_err(|e| OptimizerError::Witness {
            mu: self.mu,
            reason: e.to_string(),
        })?;
        for row in rows {
            if row.r1 * self.r1 + row.r2 * self.r2 > row.bound + BINDING_TOL {
                return fail(format!("row `{}` violated", row.label));
            }
        }
        Ok(())
    }
}

/// Best weighted-sum value found at one sweep weight.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepValue {
    pub mu: f64,
    pub objective: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Frontier {
    /// Distinct points sorted by `(r1, r2)`; each keeps the smallest weight
    /// that produced it.
    pub points: Vec<RatePoint>,
    /// Objective per sweep weight, in weight order.
    pub sweep: Vec<SweepValue>,
    pub params: GaussianParams,
    pub search: SearchConfig,
}

impl Frontier {
    pub fn rate_pairs(&self) -> Vec<(f64, f64)> {
        self.points.iter().map(|p| (p.r1, p.r2)).collect()
    }

    /// Rate pairs with the users exchanged.
    pub fn mirrored_pairs(&self) -> Vec<(f64, f64)> {
        self.points.iter().map(|p| (p.r2, p.r1)).collect()
    }

    pub fn verify(&self) -> Result<(), OptimizerError> {
        self.points.iter().try_for_each(|p| p.verify(&self.params, self.search.form))
    }

    /// CSV with one row per point.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), OptimizerError> {
        let mut w = csv::Writer::from_writer(out);
        let err = |e: csv::Error| OptimizerError::Csv(e.to_string());
        w.write_record(FRONTIER_COLUMNS).map_err(err)?;
        for p in &self.points {
            let q = &p.policy;
            let values = [
                p.mu,
                p.r1,
                p.r2,
                p.slots.alpha1(),
                p.slots.alpha2(),
                q.p10,
                q.p_u,
                q.p20,
                q.p_v,
                q.p13,
                q.p23,
                q.c2,
                q.c3,
                q.d2,
                q.d3,
                p.objective,
            ];
            w.write_record(values.iter().map(|v| sig12(*v))).map_err(err)?;
        }
        w.flush().map_err(|e| OptimizerError::Csv(e.to_string()))
    }
}

pub const FRONTIER_COLUMNS: [&str; 16] =
    ["mu", "r1", "r2", "alpha1", "alpha2", "p10", "pU", "p20", "pV", "p13", "p23", "c2", "c3", "d2", "d3", "objective"];

/// Reads `(r1, r2)` pairs from any CSV with `r1` and `r2` columns.
pub fn read_rate_pairs<R: Read>(input: R) -> Result<Vec<(f64, f64)>, OptimizerError> {
    let mut rdr = csv::Reader::from_reader(input);
    let headers = rdr.headers().map_err(|e| OptimizerError::Csv(e.to_string()))?.clone();
    let col = |name: &str| {
        headers.iter().position(|h| h.trim() == name).ok_or_else(|| OptimizerError::Csv(format!("missing `{name}` column")))
    };
    let (i1, i2) = (col("r1")?, col("r2")?);
    let mut out = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| OptimizerError::Csv(e.to_string()))?;
        let parse = |i: usize| -> Result<f64, OptimizerError> {
            let field = rec.get(i).unwrap_or("").trim();
            match field.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(v),
                _ => Err(OptimizerError::Csv(format!("row {}: bad number `{field}`", line + 2))),
            }
        };
        out.push((parse(i1)?, parse(i2)?));
    }
    Ok(out)
}

/// Grid stage and refinement for each weight; returns the distinct refined
/// candidates.
fn search(
    params: &GaussianParams,
    weights: &[f64],
    cfg: &SearchConfig,
    pinned: Option<SlotSchedule>,
    exec: Execution,
) -> Result<Vec<Theta>, OptimizerError> {
    params.validate()?;
    cfg.validate()?;
    let stage1 = grid_search(params, weights, cfg, pinned, exec);
    let jobs: Vec<(f64, Best)> = weights.iter().copied().zip(stage1).collect();
    let mut found = exec::map(&jobs, exec, |(mu, start)| refine(params, *mu, *start, cfg, pinned.is_some()).theta);
    found.sort_by(Theta::cmp_lex);
    found.dedup();
    Ok(found)
}

/// Best of `candidates` at weight `mu`, under the search's total order.
fn select(candidates: &[(Theta, Pentagon)], mu: f64) -> Best {
    candidates
        .iter()
        .map(|(theta, pent)| Best { objective: pent.weighted(mu), theta: *theta })
        .reduce(|a, b| if b.better_than(&a) { b } else { a })
        .expect("at least one candidate")
}

/// Offset of the two search directions around each sweep weight. The
/// maximizers at `μ ± TILT` are the two ends of the supporting edge at `μ`,
/// which a single maximizer would leave out when that edge has length.
pub const TILT: f64 = 1e-6;

/// Best point found for `μ·R1 + (1 − μ)·R2`.
pub fn max_weighted_sum(params: &GaussianParams, mu: f64, cfg: &SearchConfig) -> Result<RatePoint, OptimizerError> {
    max_weighted_sum_with(params, mu, cfg, None, Execution::default())
}

pub fn max_weighted_sum_with(
    params: &GaussianParams,
    mu: f64,
    cfg: &SearchConfig,
    pinned: Option<SlotSchedule>,
    exec: Execution,
) -> Result<RatePoint, OptimizerError> {
    if !(0.0..=1.0).contains(&mu) {
        return Err(OptimizerError::Config(format!("mu must lie in [0, 1], got {mu}")));
    }
    let found = search(params, &[mu], cfg, pinned, exec)?;
    let point = RatePoint::from_theta(params, mu, mu, &found[0], cfg.form);
    point.verify(params, cfg.form)?;
    Ok(point)
}

pub fn frontier(params: &GaussianParams, cfg: &SearchConfig) -> Result<Frontier, OptimizerError> {
    frontier_with(params, cfg, None, Execution::default())
}

/// Frontier with an optional fixed schedule.
pub fn frontier_with(
    params: &GaussianParams,
    cfg: &SearchConfig,
    pinned: Option<SlotSchedule>,
    exec: Execution,
) -> Result<Frontier, OptimizerError> {
    let mus = cfg.mus();
    let mut directions: Vec<(f64, f64)> = Vec::new();
    for &mu in &mus {
        for d in [mu - TILT, mu + TILT] {
            directions.push((mu, d.clamp(0.0, 1.0)));
        }
    }
    let weights: Vec<f64> = directions.iter().map(|d| d.1).collect();
    let found = search(params, &weights, cfg, pinned, exec)?;
    let candidates: Vec<(Theta, Pentagon)> = found.iter().map(|t| (*t, evaluate(params, t, cfg.form))).collect();

    let sweep = mus.iter().map(|&mu| SweepValue { mu, objective: select(&candidates, mu).objective }).collect();
    let mut points: Vec<RatePoint> = Vec::new();
    for &(mu, d) in &directions {
        let best = select(&candidates, d);
        let p = RatePoint::from_theta(params, mu, d, &best.theta, cfg.form);
        let dup = points.iter().any(|q| (q.r1 - p.r1).abs() <= cfg.tolerance && (q.r2 - p.r2).abs() <= cfg.tolerance);
        if !dup {
            p.verify(params, cfg.form)?;
            points.push(p);
        }
    }
    points.sort_by(|a, b| a.r1.total_cmp(&b.r1).then(a.r2.total_cmp(&b.r2)).then(a.mu.total_cmp(&b.mu)));
    Ok(Frontier { points, sweep, params: *params, search: *cfg })
}

/// Frontier with both users confined to their own slots, `α1 = α2 = 1/2`.
pub fn tdma_point(params: &GaussianParams, cfg: &SearchConfig) -> Result<Frontier, OptimizerError> {
    frontier_with(params, cfg, Some(SlotSchedule::tdma()), Execution::default())
}

/// The classical Gaussian MAC pentagon.
pub fn mac_baseline(params: &GaussianParams) -> Result<Pentagon, OptimizerError> {
    params.validate()?;
    let a = params.k10 * params.k10 * params.p1 / params.n0;
    let b = params.k20 * params.k20 * params.p2 / params.n0;
    Ok(Pentagon { r1_max: crate::gaussian::c(a), r2_max: crate::gaussian::c(b), sum_max: crate::gaussian::c(a + b) })
}

/// Whether every point of `inner` lies in the down-closed convex hull of
/// `outer`, after moving each point of `inner` by `tol` towards the origin.
pub fn contains(outer: &[(f64, f64)], inner: &[(f64, f64)], tol: f64) -> Result<bool, OptimizerError> {
    if outer.is_empty() || inner.is_empty() {
        return Err(OptimizerError::EmptyFrontier);
    }
    let hull = upper_hull(outer);
    Ok(inner.iter().all(|&(x, y)| below_hull(&hull, (x - tol).max(0.0), (y - tol).max(0.0))))
}

/// Upper concave hull of the down-closure, as vertices with increasing `r1`
/// starting at `(0, max r2)` and ending at `(max r1, 0)`.
fn upper_hull(points: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let max1 = points.iter().map(|p| p.0).fold(0.0, f64::max);
    let max2 = points.iter().map(|p| p.1).fold(0.0, f64::max);
    let mut pts: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.max(0.0), y.max(0.0))).collect();
    pts.push((0.0, max2));
    pts.push((max1, 0.0));
    pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(b.1.total_cmp(&a.1)));
    let mut hull: Vec<(f64, f64)> = Vec::new();
    for p in pts {
        while hull.len() >= 2 {
            let (o, a) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (a.0 - o.0) * (p.1 - o.1) - (a.1 - o.1) * (p.0 - o.0);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        if hull.last().is_none_or(|l| l.0 < p.0 || l.1 < p.1) {
            hull.push(p);
        }
    }
    hull
}

fn below_hull(hull: &[(f64, f64)], x: f64, y: f64) -> bool {
    let last = hull[hull.len() - 1];
    if x > last.0 {
        return false;
    }
    for w in hull.windows(2) {
        let ((x0, y0), (x1, y1)) = (w[0], w[1]);
        if x <= x1 {
            let h = if x1 > x0 { y0 + (y1 - y0) * (x - x0) / (x1 - x0) } else { y0.max(y1) };
            return y <= h;
        }
    }
    y <= hull[0].1
}
