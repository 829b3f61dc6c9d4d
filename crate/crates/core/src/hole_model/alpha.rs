//! Numeric search for the announcement-triangle base angle.
//!
//! With half-base `l`, base angle `alpha` and distance `h` from the base to
//! the far side of the hole, the triangle covers `l^2 tan(alpha)` and a
//! packet skirting it travels `(h - l tan(alpha)) + l / cos(alpha)`. The
//! objective is the area times the squared detour.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

/// The five depth multiples used to pick the canonical angle.
pub const STANDARD_H_MULTIPLES: [f64; 5] = [2.0, 2.5, 3.0, 3.5, 4.0];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlphaObjective {
    pub l: f64,
    pub h: f64,
}

impl AlphaObjective {
    pub fn new(l: f64, h: f64) -> Self {
        Self { l, h }
    }

    /// Area covered by the triangle with base angle `alpha`.
    pub fn area(&self, alpha: f64) -> f64 {
        0.5 * 2.0 * self.l * self.l * alpha.tan()
    }

    /// Length of the path running along the triangle's side then straight on.
    pub fn path_length(&self, alpha: f64) -> f64 {
        (self.h - self.l * alpha.tan()) + self.l / alpha.cos()
    }

    /// `g(alpha)` in factored form.
    pub fn g(&self, alpha: f64) -> f64 {
        let p = self.path_length(alpha);
        self.area(alpha) * p * p
    }

    /// `g(alpha)` term by term, as a cross-check on the factored form.
    pub fn g_expanded(&self, alpha: f64) -> f64 {
        let (l, h) = (self.l, self.h);
        let (t, c) = (alpha.tan(), alpha.cos());
        l * l * h * h * t + l.powi(4) * t.powi(3) - 2.0 * h * l.powi(3) * t * t
            + l.powi(4) * t / (c * c)
            + 2.0 * h * l.powi(3) * t / c
            - 2.0 * l.powi(4) * t * t / c
    }

    /// Central-difference derivative.
    pub fn derivative(&self, alpha: f64) -> f64 {
        let step = 1e-7_f64.max(alpha.abs() * 1e-7);
        (self.g(alpha + step) - self.g(alpha - step)) / (2.0 * step)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlphaMinimum {
    pub h_multiple: f64,
    pub alpha: f64,
    pub g: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlphaOptimization {
    pub minima: Vec<AlphaMinimum>,
    pub mean_alpha: f64,
    /// Angles where the sampled derivative changes sign, over all `h`.
    pub stationary_points: Vec<(f64, f64)>,
}

impl AlphaOptimization {
    pub fn tan_mean(&self) -> f64 {
        self.mean_alpha.tan()
    }

    pub fn has_stationary_point(&self) -> bool {
        !self.stationary_points.is_empty()
    }
}

/// Open-interval grid `step, 2 step, ...` strictly below `pi/2`.
fn grid(step: f64) -> impl Iterator<Item = f64> {
    (1..)
        .map(move |i| i as f64 * step)
        .take_while(|&a| a < FRAC_PI_2)
}

/// Grid minimum of `g` on `(0, pi/2)`, then golden-section refinement in the
/// bracket formed by the neighboring grid points.
pub fn minimize_on_grid(obj: &AlphaObjective, step: f64) -> (f64, f64) {
    let (best, _) = grid(step)
        .map(|a| (a, obj.g(a)))
        .min_by(|x, y| x.1.total_cmp(&y.1))
        .expect("grid step must be below pi/2");
    let lo = (best - step).max(step * 1e-3);
    let hi = (best + step).min(FRAC_PI_2 - step * 1e-3);
    let alpha = golden_section(|a| obj.g(a), lo, hi, 1e-12);
    let alpha = if obj.g(alpha) <= obj.g(best) { alpha } else { best };
    (alpha, obj.g(alpha))
}

fn golden_section(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = f(x2);
        }
    }
    0.5 * (lo + hi)
}

/// Minimizes `g` for each `h = multiple * l` and scans the derivative for
/// sign changes. The objective is scale-free, so `l = 1`.
pub fn optimize_alpha(h_multiples: &[f64], step: f64) -> AlphaOptimization {
    let mut minima = Vec::with_capacity(h_multiples.len());
    let mut stationary_points = Vec::new();
    for &m in h_multiples {
        let obj = AlphaObjective::new(1.0, m);
        let (alpha, g) = minimize_on_grid(&obj, step);
        minima.push(AlphaMinimum {
            h_multiple: m,
            alpha,
            g,
        });
        let mut prev: Option<(f64, f64)> = None;
        for a in grid(step) {
            let d = obj.derivative(a);
            if let Some((pa, pd)) = prev {
                if pd.signum() != d.signum() {
                    stationary_points.push((m, 0.5 * (pa + a)));
                }
            }
            prev = Some((a, d));
        }
    }
    let mean_alpha = minima.iter().map(|m| m.alpha).sum::<f64>() / minima.len().max(1) as f64;
    AlphaOptimization {
        minima,
        mean_alpha,
        stationary_points,
    }
}
