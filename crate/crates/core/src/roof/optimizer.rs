//! Multi-start derivative-free minimization over pure-state decompositions.
//!
//! A decomposition with `n` members of a rank-`r` state is parametrized by an
//! `n × r` isometry `U` acting on the scaled eigenvectors `√p_j |ψ_j⟩`.
//! Local refinement is a Hooke–Jeeves style pattern search over
//! two-parameter Givens rotations `G(θ, φ)` applied to row pairs `(k, l)` of
//! `U`. A rotation only changes members `k` and `l`, so each trial costs two
//! member evaluations. Each pair is probed along four axis directions and at
//! the minimizer of the quadratic model through the probes; after a sweep the
//! net rotation of the sweep is repeated while it keeps improving.

use std::f64::consts::FRAC_PI_2;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::linalg::{CMat, C64};
use crate::quantum::sampling;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OptimizerConfig {
    /// Independent starts; start 0 is the spectral decomposition.
    pub restarts: usize,
    /// Objective evaluations allowed per start.
    pub max_evals: usize,
    /// Members beyond the rank: `n = rank + n_extra`.
    pub n_extra: usize,
    /// Explicit decomposition size, overriding `n_extra`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_members: Option<usize>,
    /// Relative improvement below which a sweep counts as stalled.
    pub tol: f64,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self { restarts: 32, max_evals: 10_000, n_extra: 2, n_members: None, tol: 1e-8, seed: 0 }
    }
}

impl OptimizerConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self { seed, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 || self.max_evals == 0 {
            return Err(Error::Argument("optimizer needs at least one restart and one evaluation".into()));
        }
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return Err(Error::Argument(format!("optimizer tolerance must lie in (0, 1), got {}", self.tol)));
        }
        Ok(())
    }

    /// Decomposition size for a rank-`r` state, clamped to `[r, r²]`.
    pub fn members_for_rank(&self, r: usize) -> usize {
        self.n_members.unwrap_or(r + self.n_extra).clamp(r, (r * r).max(r))
    }
}

#[derive(Debug, Clone)]
pub(crate) struct RestartOutcome {
    pub value: f64,
    pub u: CMat,
    pub evaluations: usize,
    pub sweeps: usize,
    pub converged: bool,
    /// Objective after the initial point and after every sweep.
    pub trace: Vec<f64>,
}

const INITIAL_STEP: f64 = 0.5;
const MAX_PATTERN_MOVES: usize = 16;
/// Objective value treated as the exact minimum of a non-negative cost.
const FLOOR: f64 = 1e-14;

fn rotate(a: &[C64], b: &[C64], c: f64, s: f64, phase: C64, out_a: &mut [C64], out_b: &mut [C64]) {
    let es = phase * s;
    let es_conj = phase.conj() * s;
    for i in 0..a.len() {
        out_a[i] = a[i] * c - b[i] * es;
        out_b[i] = a[i] * es_conj + b[i] * c;
    }
}

fn rotate_rows(u: &mut CMat, k: usize, l: usize, c: f64, s: f64, phase: C64) {
    let es = phase * s;
    let es_conj = phase.conj() * s;
    for j in 0..u.ncols() {
        let (a, b) = (u[(k, j)], u[(l, j)]);
        u[(k, j)] = a * c - b * es;
        u[(l, j)] = a * es_conj + b * c;
    }
}

const DIRECTIONS: [C64; 4] = [C64::new(1.0, 0.0), C64::new(0.0, 1.0), C64::new(-1.0, 0.0), C64::new(0.0, -1.0)];

/// Pattern search from one starting isometry. `cost(v)` is the member cost
/// of an unnormalized vector (`‖v‖² f(v/‖v‖)`).
pub(crate) fn refine<F>(basis: &CMat, mut u: CMat, cost: &F, cfg: &OptimizerConfig) -> RestartOutcome
where
    F: Fn(&[C64]) -> f64,
{
    let n = u.nrows();
    let dim = basis.nrows();
    let mut members: Vec<Vec<C64>> = (0..n)
        .map(|k| {
            let mut v = vec![C64::new(0.0, 0.0); dim];
            for j in 0..basis.ncols() {
                let coef = u[(k, j)];
                for (x, b) in v.iter_mut().zip(basis.column(j).iter()) {
                    *x += b * coef;
                }
            }
            v
        })
        .collect();
    let mut costs: Vec<f64> = members.iter().map(|m| cost(m)).collect();
    let mut value: f64 = costs.iter().sum();
    let mut evaluations = 1;
    let mut trace = vec![value];
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|k| (k + 1..n).map(move |l| (k, l))).collect();
    let min_step = cfg.tol.sqrt();
    let mut step = INITIAL_STEP;
    let mut sweeps = 0;
    let mut buf_a = vec![C64::new(0.0, 0.0); dim];
    let mut buf_b = vec![C64::new(0.0, 0.0); dim];
    let mut best_a = buf_a.clone();
    let mut best_b = buf_b.clone();

    let converged = loop {
        if value <= FLOOR || step < min_step || pairs.is_empty() {
            break true;
        }
        if evaluations >= cfg.max_evals {
            break false;
        }
        let before = value;
        let mut sweep = CMat::identity(n, n);
        for &(k, l) in &pairs {
            if evaluations >= cfg.max_evals {
                break;
            }
            let old = costs[k] + costs[l];
            // four axis probes, then a Newton step on the separable quadratic model
            let mut probes = [0.0; 4];
            let mut best: Option<(f64, f64, f64, f64, C64)> = None;
            let mut consider = |ca: f64, cb: f64, theta: f64, phase: C64, a: &[C64], b: &[C64], best_a: &mut [C64], best_b: &mut [C64]| {
                let new = ca + cb;
                if new < old - f64::EPSILON * old.abs() && best.is_none_or(|x| new < x.0 + x.1) {
                    best = Some((ca, cb, theta.cos(), theta.sin(), phase));
                    best_a.copy_from_slice(a);
                    best_b.copy_from_slice(b);
                }
            };
            let (c, s) = (step.cos(), step.sin());
            for (i, &phase) in DIRECTIONS.iter().enumerate() {
                rotate(&members[k], &members[l], c, s, phase, &mut buf_a, &mut buf_b);
                let (ca, cb) = (cost(&buf_a), cost(&buf_b));
                evaluations += 1;
                probes[i] = ca + cb;
                consider(ca, cb, step, phase, &buf_a, &buf_b, &mut best_a, &mut best_b);
            }
            let newton = |plus: f64, minus: f64| {
                let slope = (plus - minus) / (2.0 * step);
                let curvature = (plus + minus - 2.0 * old) / (step * step);
                if curvature > 0.0 {
                    (-slope / curvature).clamp(-2.0 * step, 2.0 * step)
                } else if plus < minus {
                    2.0 * step
                } else {
                    -2.0 * step
                }
            };
            let (x, y) = (newton(probes[0], probes[2]), newton(probes[1], probes[3]));
            let theta = x.hypot(y).min(FRAC_PI_2);
            if theta > 0.0 {
                let phase = C64::new(x, y) / x.hypot(y);
                rotate(&members[k], &members[l], theta.cos(), theta.sin(), phase, &mut buf_a, &mut buf_b);
                let (ca, cb) = (cost(&buf_a), cost(&buf_b));
                evaluations += 1;
                consider(ca, cb, theta, phase, &buf_a, &buf_b, &mut best_a, &mut best_b);
            }
            let Some((ca, cb, c, s, phase)) = best else { continue };
            members[k].copy_from_slice(&best_a);
            members[l].copy_from_slice(&best_b);
            value += ca + cb - old;
            costs[k] = ca;
            costs[l] = cb;
            rotate_rows(&mut u, k, l, c, s, phase);
            rotate_rows(&mut sweep, k, l, c, s, phase);
        }
        // pattern move: repeat the net rotation of the sweep while it pays
        if value < before {
            for _ in 0..MAX_PATTERN_MOVES {
                if evaluations >= cfg.max_evals {
                    break;
                }
                let trial: Vec<Vec<C64>> = (0..n)
                    .map(|k| {
                        let mut v = vec![C64::new(0.0, 0.0); dim];
                        for (i, m) in members.iter().enumerate() {
                            let w = sweep[(k, i)];
                            if w != C64::new(0.0, 0.0) {
                                v.iter_mut().zip(m).for_each(|(x, y)| *x += y * w);
                            }
                        }
                        v
                    })
                    .collect();
                let trial_costs: Vec<f64> = trial.iter().map(|m| cost(m)).collect();
                evaluations += 1;
                let trial_value: f64 = trial_costs.iter().sum();
                if trial_value < value - f64::EPSILON * value.abs() {
                    members = trial;
                    costs = trial_costs;
                    value = trial_value;
                    u = &sweep * &u;
                } else {
                    break;
                }
            }
        }
        sweeps += 1;
        debug_assert!(value <= before + 1e-12, "pattern search increased the objective");
        trace.push(value);
        if before - value <= cfg.tol * before.abs() {
            step *= 0.5;
        }
    };
    RestartOutcome { value, u, evaluations, sweeps, converged, trace }
}

/// Runs every restart (in parallel) and returns them in restart order.
pub(crate) fn multi_start<F>(basis: &CMat, n: usize, cost: &F, cfg: &OptimizerConfig) -> Vec<RestartOutcome>
where
    F: Fn(&[C64]) -> f64 + Sync,
{
    let r = basis.ncols();
    (0..cfg.restarts)
        .into_par_iter()
        .map(|restart| {
            let u0 = if restart == 0 {
                CMat::identity(n, r)
            } else {
                let mut rng = sampling::stream_rng(cfg.seed, restart as u64);
                sampling::random_isometry(n, r, &mut rng)
            };
            refine(basis, u0, cost, cfg)
        })
        .collect()
}

/// Index of the best outcome: lowest value, ties to the lowest restart index.
pub(crate) fn best_index(outcomes: &[RestartOutcome]) -> usize {
    let mut best = 0;
    for (i, o) in outcomes.iter().enumerate().skip(1) {
        if o.value < outcomes[best].value {
            best = i;
        }
    }
    best
}
