//! Variational minimization of `⟨ψ(θ)|H|ψ(θ)⟩`.
//!
//! The default optimizer is BFGS on parameter-shift gradients with an
//! Armijo backtracking line search. A Nelder–Mead simplex is available as a
//! gradient-free fallback. Each restart draws its starting point uniformly
//! from `[-π, π)` using its own generator seeded with `seed + restart`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::circuit::{energy, gradient, Ansatz, Observable, ParameterVector};
use crate::error::{Error, Result};

/// `‖∇E‖∞` below which a result is reported as converged.
pub const CONVERGED_GRADIENT: f64 = 1e-4;
/// `‖∇E‖∞` that stops the quasi-Newton loop early.
pub const STOP_GRADIENT: f64 = 1e-6;
/// Energy change counted as a stalled step.
pub const STALL_DELTA: f64 = 1e-9;
/// Consecutive stalled steps that stop the loop.
pub const STALL_STEPS: usize = 5;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum OptimizerKind {
    #[default]
    GradientQuasiNewton,
    NelderMeadLike,
}

impl fmt::Display for OptimizerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OptimizerKind::GradientQuasiNewton => "bfgs",
            OptimizerKind::NelderMeadLike => "nelder-mead",
        })
    }
}

impl FromStr for OptimizerKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "bfgs" | "quasi-newton" => Ok(OptimizerKind::GradientQuasiNewton),
            "nelder-mead" | "simplex" => Ok(OptimizerKind::NelderMeadLike),
            other => Err(format!(
                "unknown optimizer `{other}` (expected bfgs|nelder-mead)"
            )),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VqeConfig {
    pub optimizer: OptimizerKind,
    pub max_iterations: usize,
    pub restarts: usize,
    pub seed: u64,
}

impl Default for VqeConfig {
    fn default() -> Self {
        Self {
            optimizer: OptimizerKind::GradientQuasiNewton,
            max_iterations: 600,
            restarts: 5,
            seed: 1234,
        }
    }
}

/// Energy of every objective evaluation, in call order.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ConvergenceTrace {
    entries: Vec<(usize, f64)>,
}

impl ConvergenceTrace {
    fn push(&mut self, energy: f64) {
        let idx = self.entries.len();
        self.entries.push((idx, energy));
    }

    pub fn entries(&self) -> &[(usize, f64)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn last_energy(&self) -> Option<f64> {
        self.entries.last().map(|&(_, e)| e)
    }

    /// Running minimum over the trace.
    pub fn best_so_far(&self) -> Vec<f64> {
        let mut best = f64::INFINITY;
        self.entries
            .iter()
            .map(|&(_, e)| {
                best = best.min(e);
                best
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VqeResult {
    pub energy: f64,
    pub optimal_params: ParameterVector,
    /// Trace of the winning restart; its last entry re-evaluates
    /// `optimal_params`.
    pub trace: ConvergenceTrace,
    /// Circuit evaluations over all restarts, gradient shifts included.
    pub evaluations: usize,
    pub restarts_used: usize,
    /// Index of the winning restart.
    pub best_restart: usize,
    pub restart_energies: Vec<f64>,
    pub seed: u64,
    pub converged: bool,
    pub gradient_norm: f64,
}

/// Runs every restart and keeps the lowest final energy (ties go to the
/// lower restart index).
pub fn minimize<O: Observable + ?Sized>(
    h: &O,
    ansatz: &Ansatz,
    config: &VqeConfig,
) -> Result<VqeResult> {
    if h.dim() != ansatz.dim() {
        return Err(Error::DimensionMismatch {
            expected: ansatz.dim(),
            actual: h.dim(),
        });
    }
    let restarts = config.restarts.max(1);
    let mut best: Option<(usize, RunOutcome)> = None;
    let mut restart_energies = Vec::with_capacity(restarts);
    let mut evaluations = 0;

    for r in 0..restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(r as u64));
        let x0: Vec<f64> = (0..ansatz.param_count())
            .map(|_| rng.gen_range(-PI..PI))
            .collect();
        let mut objective = Objective::new(h, ansatz);
        let x = match config.optimizer {
            OptimizerKind::GradientQuasiNewton => bfgs(&mut objective, x0, config.max_iterations)?,
            OptimizerKind::NelderMeadLike => {
                nelder_mead(&mut objective, x0, config.max_iterations)?
            }
        };
        let final_energy = objective.value(&x)?;
        let grad = objective.gradient(&x)?;
        evaluations += objective.evaluations;
        restart_energies.push(final_energy);
        let outcome = RunOutcome {
            energy: final_energy,
            params: x,
            trace: objective.trace,
            gradient_norm: inf_norm(&grad),
        };
        match &best {
            Some((_, b)) if b.energy <= outcome.energy => {}
            _ => best = Some((r, outcome)),
        }
    }

    let (best_restart, run) = best.expect("at least one restart");
    Ok(VqeResult {
        energy: run.energy,
        optimal_params: ParameterVector::new(run.params),
        trace: run.trace,
        evaluations,
        restarts_used: restarts,
        best_restart,
        restart_energies,
        seed: config.seed,
        converged: run.gradient_norm < CONVERGED_GRADIENT,
        gradient_norm: run.gradient_norm,
    })
}

struct RunOutcome {
    energy: f64,
    params: Vec<f64>,
    trace: ConvergenceTrace,
    gradient_norm: f64,
}

/// Counts evaluations and records the trace of one restart.
struct Objective<'a, O: Observable + ?Sized> {
    h: &'a O,
    ansatz: &'a Ansatz,
    trace: ConvergenceTrace,
    evaluations: usize,
}

impl<'a, O: Observable + ?Sized> Objective<'a, O> {
    fn new(h: &'a O, ansatz: &'a Ansatz) -> Self {
        Self {
            h,
            ansatz,
            trace: ConvergenceTrace::default(),
            evaluations: 0,
        }
    }

    fn value(&mut self, x: &[f64]) -> Result<f64> {
        let e = energy(self.h, self.ansatz, x)?;
        self.evaluations += 1;
        self.trace.push(e);
        Ok(e)
    }

    fn gradient(&mut self, x: &[f64]) -> Result<Vec<f64>> {
        self.evaluations += 2 * x.len();
        gradient(self.h, self.ansatz, x)
    }
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn bfgs<O: Observable + ?Sized>(
    obj: &mut Objective<'_, O>,
    mut x: Vec<f64>,
    max_iterations: usize,
) -> Result<Vec<f64>> {
    let n = x.len();
    let mut f = obj.value(&x)?;
    let mut g = obj.gradient(&x)?;
    // inverse Hessian approximation, row-major
    let mut hinv = identity(n);
    let mut fresh = true;
    let mut stalled = 0;

    for _ in 0..max_iterations {
        if inf_norm(&g) < STOP_GRADIENT {
            break;
        }
        let mut d = mat_vec_neg(&hinv, &g);
        let mut slope = dot(&g, &d);
        if slope >= 0.0 {
            hinv = identity(n);
            fresh = true;
            d = g.iter().map(|v| -v).collect();
            slope = -dot(&g, &g);
        }

        let Some((x_new, f_new)) = backtrack(obj, &x, f, &d, slope)? else {
            if fresh {
                break;
            }
            hinv = identity(n);
            fresh = true;
            continue;
        };
        let g_new = obj.gradient(&x_new)?;
        let s: Vec<f64> = x_new.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = g_new.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > 1e-12 {
            if fresh {
                let scale = sy / dot(&y, &y);
                for i in 0..n {
                    hinv[i * n + i] = scale;
                }
            }
            bfgs_update(&mut hinv, &s, &y, sy);
            fresh = false;
        }

        stalled = if (f - f_new).abs() < STALL_DELTA {
            stalled + 1
        } else {
            0
        };
        x = x_new;
        f = f_new;
        g = g_new;
        if stalled >= STALL_STEPS {
            break;
        }
    }
    Ok(x)
}

fn identity(n: usize) -> Vec<f64> {
    let mut m = vec![0.0; n * n];
    for i in 0..n {
        m[i * n + i] = 1.0;
    }
    m
}

fn mat_vec_neg(m: &[f64], v: &[f64]) -> Vec<f64> {
    let n = v.len();
    (0..n).map(|i| -dot(&m[i * n..(i + 1) * n], v)).collect()
}

/// `H ← (I − ρ s yᵀ) H (I − ρ y sᵀ) + ρ s sᵀ`, `ρ = 1/(yᵀs)`
fn bfgs_update(h: &mut [f64], s: &[f64], y: &[f64], sy: f64) {
    let n = s.len();
    let rho = 1.0 / sy;
    let hy: Vec<f64> = (0..n).map(|i| dot(&h[i * n..(i + 1) * n], y)).collect();
    let yhy = dot(y, &hy);
    let coef = (1.0 + rho * yhy) * rho;
    for i in 0..n {
        for j in 0..n {
            h[i * n + j] += coef * s[i] * s[j] - rho * (hy[i] * s[j] + s[i] * hy[j]);
        }
    }
}

/// Armijo backtracking from unit step; `None` when no step decreases `f`.
fn backtrack<O: Observable + ?Sized>(
    obj: &mut Objective<'_, O>,
    x: &[f64],
    f: f64,
    d: &[f64],
    slope: f64,
) -> Result<Option<(Vec<f64>, f64)>> {
    const C1: f64 = 1e-4;
    let mut alpha = 1.0;
    for _ in 0..40 {
        let trial: Vec<f64> = x.iter().zip(d).map(|(a, b)| a + alpha * b).collect();
        let ft = obj.value(&trial)?;
        if ft <= f + C1 * alpha * slope {
            return Ok(Some((trial, ft)));
        }
        alpha *= 0.5;
    }
    Ok(None)
}

fn nelder_mead<O: Observable + ?Sized>(
    obj: &mut Objective<'_, O>,
    x0: Vec<f64>,
    max_iterations: usize,
) -> Result<Vec<f64>> {
    const STEP: f64 = 0.5;
    let n = x0.len();
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    let f0 = obj.value(&x0)?;
    simplex.push((x0.clone(), f0));
    for i in 0..n {
        let mut v = x0.clone();
        v[i] += STEP;
        let fv = obj.value(&v)?;
        simplex.push((v, fv));
    }

    let blend = |a: &[f64], b: &[f64], t: f64| -> Vec<f64> {
        a.iter().zip(b).map(|(p, q)| p + t * (q - p)).collect()
    };

    for _ in 0..max_iterations {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        if simplex[n].1 - simplex[0].1 < 1e-12 {
            break;
        }
        let mut centroid = vec![0.0; n];
        for (v, _) in &simplex[..n] {
            for (c, x) in centroid.iter_mut().zip(v) {
                *c += x / n as f64;
            }
        }
        let worst = simplex[n].0.clone();
        let reflected = blend(&centroid, &worst, -1.0);
        let fr = obj.value(&reflected)?;
        if fr < simplex[0].1 {
            let expanded = blend(&centroid, &worst, -2.0);
            let fe = obj.value(&expanded)?;
            simplex[n] = if fe < fr {
                (expanded, fe)
            } else {
                (reflected, fr)
            };
        } else if fr < simplex[n - 1].1 {
            simplex[n] = (reflected, fr);
        } else {
            let (toward, ft) = if fr < simplex[n].1 {
                (&reflected, fr)
            } else {
                (&worst, simplex[n].1)
            };
            let contracted = blend(&centroid, toward, 0.5);
            let fc = obj.value(&contracted)?;
            if fc < ft {
                simplex[n] = (contracted, fc);
            } else {
                let best = simplex[0].0.clone();
                for item in simplex.iter_mut().skip(1) {
                    let v = blend(&best, &item.0, 0.5);
                    let fv = obj.value(&v)?;
                    *item = (v, fv);
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    Ok(simplex.swap_remove(0).0)
}
