//! Quasi-Newton (BFGS) minimizer with a backtracking Armijo line search.
//!
//! Fully deterministic: no randomness, and evaluation order depends only on
//! the inputs.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BfgsConfig {
    pub max_iterations: usize,
    /// Stop as soon as the objective drops below this value.
    pub cost_tolerance: f64,
    /// Stop (unconverged) when the gradient's largest component is below this.
    pub gradient_tolerance: f64,
}

impl Default for BfgsConfig {
    fn default() -> Self {
        Self { max_iterations: 10_000, cost_tolerance: 1e-5, gradient_tolerance: 1e-12 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BfgsOutcome {
    pub x: Vec<f64>,
    /// Objective at the start point and after every iteration.
    pub cost_trace: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

const ARMIJO_C1: f64 = 1e-4;
const MAX_BACKTRACKS: usize = 60;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn mat_vec(h: &[f64], v: &[f64]) -> Vec<f64> {
    let n = v.len();
    (0..n).map(|i| dot(&h[i * n..(i + 1) * n], v)).collect()
}

fn identity(n: usize) -> Vec<f64> {
    let mut h = vec![0.0; n * n];
    for i in 0..n {
        h[i * n + i] = 1.0;
    }
    h
}

/// Backtracks from a unit step until the Armijo condition holds.
fn line_search<F: Fn(&[f64]) -> f64>(f: &F, x: &[f64], fx: f64, g: &[f64], p: &[f64]) -> Option<(Vec<f64>, f64)> {
    let slope = dot(g, p);
    if slope >= 0.0 {
        return None;
    }
    let mut t = 1.0;
    for _ in 0..MAX_BACKTRACKS {
        let trial: Vec<f64> = x.iter().zip(p).map(|(xi, pi)| xi + t * pi).collect();
        let ft = f(&trial);
        if ft.is_finite() && ft <= fx + ARMIJO_C1 * t * slope {
            return Some((trial, ft));
        }
        t *= 0.5;
    }
    None
}

pub fn minimize<F, G>(f: F, grad: G, x0: &[f64], config: &BfgsConfig) -> BfgsOutcome
where
    F: Fn(&[f64]) -> f64,
    G: Fn(&[f64]) -> Vec<f64>,
{
    let n = x0.len();
    let mut x = x0.to_vec();
    let mut fx = f(&x);
    let mut trace = vec![fx];
    let mut h = identity(n);
    let mut fresh = true;
    let mut iterations = 0;

    if n == 0 || fx < config.cost_tolerance {
        return BfgsOutcome { x, cost_trace: trace, iterations, converged: fx < config.cost_tolerance };
    }
    let mut g = grad(&x);

    while iterations < config.max_iterations {
        if g.iter().fold(0.0f64, |m, v| m.max(v.abs())) < config.gradient_tolerance {
            break;
        }
        let mut p: Vec<f64> = mat_vec(&h, &g).iter().map(|v| -v).collect();
        let step = match line_search(&f, &x, fx, &g, &p) {
            Some(s) => Some(s),
            None if !fresh => {
                h = identity(n);
                fresh = true;
                p = g.iter().map(|v| -v).collect();
                line_search(&f, &x, fx, &g, &p)
            }
            None => None,
        };
        let Some((x_new, f_new)) = step else { break };

        let g_new = grad(&x_new);
        let s: Vec<f64> = x_new.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = g_new.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > 1e-16 {
            if fresh {
                // rescale the initial inverse Hessian to the observed curvature
                let scale = sy / dot(&y, &y);
                h.iter_mut().for_each(|v| *v *= scale);
            }
            let rho = 1.0 / sy;
            let hy = mat_vec(&h, &y);
            let yhy = dot(&y, &hy);
            for i in 0..n {
                for j in 0..n {
                    h[i * n + j] += -rho * (hy[i] * s[j] + s[i] * hy[j]) + (rho * rho * yhy + rho) * s[i] * s[j];
                }
            }
            fresh = false;
        }

        x = x_new;
        fx = f_new;
        g = g_new;
        iterations += 1;
        trace.push(fx);
        if fx < config.cost_tolerance {
            return BfgsOutcome { x, cost_trace: trace, iterations, converged: true };
        }
    }
    BfgsOutcome { x, cost_trace: trace, iterations, converged: false }
}
