//! Quadrature rules for thermodynamic-limit momentum integrals.
//!
//! Two rules are provided:
//!
//! * [`GaussLegendre`] — a plain n-node rule mapped onto (0, pi).  The
//!   dispersion is analytic in k away from the critical circle, so this is
//!   spectrally accurate and 64 nodes already reach machine precision at
//!   generic field points.
//! * [`refined_rule`] — a fixed composite rule whose panels shrink
//!   geometrically toward k = 0, where second derivatives of the dispersion
//!   develop an integrable log singularity as the critical set is approached.
//!   The node layout is identical for every field point, so quadrature error
//!   varies smoothly under parameter differentiation.

use std::sync::{Mutex, OnceLock};

/// Nodes/weights of an n-point Gauss-Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Build the n-point rule by Newton iteration on the Legendre recurrence.
    pub fn new(n: usize) -> Self {
        assert!(n >= 2, "need at least 2 nodes");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = (n + 1) / 2;
        for i in 0..m {
            // Tricomi-style initial guess for the i-th root of P_n.
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (p, d) = legendre_pair(n, x);
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-15 {
                    break;
                }
            }
            // One polishing step.
            let (p, d) = legendre_pair(n, x);
            x -= p / d;
            let dp = legendre_pair(n, x).1;
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
            let dp = legendre_pair(n, 0.0).1;
            weights[n / 2] = 2.0 / (dp * dp);
        }
        GaussLegendre { nodes, weights }
    }

    /// Integrate f over (a, b) with this rule.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        let mut acc = NeumaierSum::new();
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc.add(w * f(mid + half * x));
        }
        half * acc.total()
    }
}

/// (P_n(x), P_n'(x)) via the three-term recurrence.
fn legendre_pair(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for j in 2..=n {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Cached rules keyed by node count; scans hit the same count repeatedly.
pub fn cached_rule(n: usize) -> std::sync::Arc<GaussLegendre> {
    static CACHE: OnceLock<Mutex<Vec<(usize, std::sync::Arc<GaussLegendre>)>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(Vec::new()));
    let mut guard = cache.lock().unwrap();
    if let Some((_, rule)) = guard.iter().find(|(m, _)| *m == n) {
        return rule.clone();
    }
    let rule = std::sync::Arc::new(GaussLegendre::new(n));
    guard.push((n, rule.clone()));
    rule
}

/// Number of geometric panels in the refined rule (breakpoints pi * 2^-i).
const REFINED_LEVELS: usize = 61;
/// Nodes per panel.
const REFINED_PANEL_NODES: usize = 24;

/// Fixed node/weight table on (0, pi) with panels shrinking geometrically
/// toward 0.  Built once; ~1.5k nodes.
pub fn refined_rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| {
        let gl = GaussLegendre::new(REFINED_PANEL_NODES);
        let mut breaks: Vec<f64> = (0..REFINED_LEVELS)
            .map(|i| std::f64::consts::PI * 0.5f64.powi(i as i32))
            .collect();
        breaks.push(0.0);
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        // Ascending k: iterate panels from the innermost outward.
        for pair in breaks.windows(2).rev() {
            let (hi, lo) = (pair[0], pair[1]);
            let mid = 0.5 * (hi + lo);
            let half = 0.5 * (hi - lo);
            for (x, w) in gl.nodes.iter().zip(&gl.weights) {
                nodes.push(mid + half * x);
                weights.push(half * w);
            }
        }
        (nodes, weights)
    })
}

/// Neumaier-compensated accumulator: running sum plus a correction term that
/// captures low-order bits lost when magnitudes differ.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn total(&self) -> f64 {
        self.sum + self.comp
    }
}
