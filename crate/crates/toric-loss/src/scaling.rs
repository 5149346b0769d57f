//! Universal finite-size-scaling fits.
//!
//! Near the threshold the failure rate collapses onto a single curve of
//! `x = (p_com − p_t)·L^(1/ν₀)`, approximately linear for small `x`. For
//! one loss rate we fit `p_fail ≈ a + b·x` by weighted least squares: for
//! fixed `(p_t, ν₀)` the optimal `(a, b)` solve in closed form, and a
//! deterministic Nelder–Mead refinement seeded from a coarse grid searches
//! the outer two parameters. Thresholds from several loss rates then feed
//! an ordinary least-squares quadratic for the correctability boundary.

use alloc::vec::Vec;
use core::fmt;

use crate::math;
use crate::trial::{Accounting, GridResult};

/// Scaling-law parameters fitted at one loss rate.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct ScalingFit {
    pub p_loss: f64,
    pub p_t: f64,
    pub nu0: f64,
    pub a: f64,
    pub b: f64,
    pub residual_ss: f64,
    pub converged: bool,
}

/// Quadratic correctability boundary `p_t(p_loss)`.
#[derive(Clone, PartialEq, Debug)]
pub struct BoundaryCurve {
    /// `p_t = c[0] + c[1]·p_loss + c[2]·p_loss²`.
    pub coefficients: [f64; 3],
    /// Loss rates of the fits that entered the quadratic.
    pub included: Vec<f64>,
    /// Extrapolated loss rate where `p_t` reaches zero, if real.
    pub intercept: Option<f64>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FitError {
    /// Fewer than 2 lattice sizes or 3 flip rates at one loss rate.
    InsufficientData,
    /// The grid results passed to `fit_scaling` span several loss rates.
    MixedLossRates,
    /// Fewer than 3 converged fits with `p_loss ≤ 0.4`.
    InsufficientFits,
}

impl fmt::Display for FitError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FitError::InsufficientData => {
                "scaling fit needs at least 2 lattice sizes and 3 flip rates at one loss rate"
            }
            FitError::MixedLossRates => "scaling fit input mixes several loss rates",
            FitError::InsufficientFits => {
                "boundary fit needs at least 3 converged fits with p_loss <= 0.4"
            }
        };
        f.write_str(s)
    }
}

impl core::error::Error for FitError {}

/// Knobs for [`fit_scaling`]; the defaults mirror the simulation setup.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct FitOptions {
    /// Keep only points with `|p_fail − f(0)|` at most this, honouring the
    /// small-`x` linearity of the scaling function. `None` fits all points.
    pub window: Option<f64>,
    pub accounting: Accounting,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            window: Some(0.15),
            accounting: Accounting::default(),
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct FitPoint {
    l: f64,
    p_com: f64,
    p_fail: f64,
    weight: f64,
}

fn fit_points(results: &[GridResult], accounting: Accounting) -> Vec<FitPoint> {
    results
        .iter()
        .map(|r| {
            let n = r.trials() as f64;
            // Clamp away p ∈ {0, 1} so weights stay finite.
            let p = r.p_fail(accounting).clamp(0.5 / n, 1.0 - 0.5 / n);
            FitPoint {
                l: r.point.l as f64,
                p_com: r.point.p_com,
                p_fail: r.p_fail(accounting),
                weight: n / (p * (1.0 - p)),
            }
        })
        .collect()
}

/// Weighted linear least squares of `p_fail` on `x` for fixed `(p_t, ν₀)`;
/// returns `(a, b, residual_ss, degenerate)`.
fn linear_fit(points: &[FitPoint], p_t: f64, nu0: f64) -> (f64, f64, f64, bool) {
    let mut sw = 0.0;
    let mut sx = 0.0;
    let mut sxx = 0.0;
    let mut sy = 0.0;
    let mut sxy = 0.0;
    for pt in points {
        let x = (pt.p_com - p_t) * math::powf(pt.l, 1.0 / nu0);
        let w = pt.weight;
        sw += w;
        sx += w * x;
        sxx += w * x * x;
        sy += w * pt.p_fail;
        sxy += w * x * pt.p_fail;
    }
    let det = sw * sxx - sx * sx;
    if math::abs(det) <= 1e-12 * sw * sxx.max(1e-300) {
        return (sy / sw, 0.0, f64::INFINITY, true);
    }
    let b = (sw * sxy - sx * sy) / det;
    let a = (sy - b * sx) / sw;
    let mut ss = 0.0;
    for pt in points {
        let x = (pt.p_com - p_t) * math::powf(pt.l, 1.0 / nu0);
        let r = pt.p_fail - (a + b * x);
        ss += pt.weight * r * r;
    }
    (a, b, ss, false)
}

const NU_MIN: f64 = 0.05;
const NU_MAX: f64 = 20.0;

fn objective(points: &[FitPoint], p_t: f64, nu0: f64) -> f64 {
    if !(0.0..0.5).contains(&p_t) || !(NU_MIN..=NU_MAX).contains(&nu0) {
        return f64::INFINITY;
    }
    linear_fit(points, p_t, nu0).2
}

/// Deterministic Nelder–Mead on `(p_t, ν₀)`. Returns the best vertex, its
/// value, and whether the simplex collapsed before the iteration cap.
fn nelder_mead(
    points: &[FitPoint],
    start: (f64, f64),
    scale: (f64, f64),
    max_iter: usize,
) -> ((f64, f64), f64, bool) {
    let f = |v: (f64, f64)| objective(points, v.0, v.1);
    let mut simplex = [
        start,
        (start.0 + scale.0, start.1),
        (start.0, start.1 + scale.1),
    ];
    let mut values = [f(simplex[0]), f(simplex[1]), f(simplex[2])];

    let order = |s: &mut [(f64, f64); 3], v: &mut [f64; 3]| {
        // Insertion sort; ties keep earlier vertices first.
        for i in 1..3 {
            let mut j = i;
            while j > 0 && v[j] < v[j - 1] {
                v.swap(j, j - 1);
                s.swap(j, j - 1);
                j -= 1;
            }
        }
    };

    let mut converged = false;
    for _ in 0..max_iter {
        order(&mut simplex, &mut values);
        let spread = math::abs(values[2] - values[0]);
        let diam = math::abs(simplex[2].0 - simplex[0].0)
            + math::abs(simplex[2].1 - simplex[0].1)
            + math::abs(simplex[1].0 - simplex[0].0)
            + math::abs(simplex[1].1 - simplex[0].1);
        if spread <= 1e-14 * (1.0 + math::abs(values[0])) && diam <= 1e-10 {
            converged = true;
            break;
        }

        let centroid = (
            (simplex[0].0 + simplex[1].0) / 2.0,
            (simplex[0].1 + simplex[1].1) / 2.0,
        );
        let worst = simplex[2];
        let reflect = (
            centroid.0 + (centroid.0 - worst.0),
            centroid.1 + (centroid.1 - worst.1),
        );
        let fr = f(reflect);
        if fr < values[0] {
            let expand = (
                centroid.0 + 2.0 * (centroid.0 - worst.0),
                centroid.1 + 2.0 * (centroid.1 - worst.1),
            );
            let fe = f(expand);
            if fe < fr {
                simplex[2] = expand;
                values[2] = fe;
            } else {
                simplex[2] = reflect;
                values[2] = fr;
            }
        } else if fr < values[1] {
            simplex[2] = reflect;
            values[2] = fr;
        } else {
            let contract = (
                centroid.0 + 0.5 * (worst.0 - centroid.0),
                centroid.1 + 0.5 * (worst.1 - centroid.1),
            );
            let fc = f(contract);
            if fc < values[2] {
                simplex[2] = contract;
                values[2] = fc;
            } else {
                for i in 1..3 {
                    simplex[i] = (
                        simplex[0].0 + 0.5 * (simplex[i].0 - simplex[0].0),
                        simplex[0].1 + 0.5 * (simplex[i].1 - simplex[0].1),
                    );
                    values[i] = f(simplex[i]);
                }
            }
        }
    }
    order(&mut simplex, &mut values);
    (simplex[0], values[0], converged)
}

fn fit_core(points: &[FitPoint]) -> (f64, f64, f64, f64, f64, bool) {
    // Coarse grid seed: p_t across the sampled p_com range, ν₀ in a wide
    // physical band.
    let p_min = points.iter().map(|p| p.p_com).fold(f64::INFINITY, f64::min);
    let p_max = points
        .iter()
        .map(|p| p.p_com)
        .fold(f64::NEG_INFINITY, f64::max);
    let mut best = (f64::INFINITY, p_min.max(1e-4), 1.5);
    for i in 0..=40 {
        let p_t = p_min + (p_max - p_min) * i as f64 / 40.0;
        let p_t = p_t.clamp(1e-4, 0.499);
        for j in 0..=25 {
            let nu = 0.5 + 2.5 * j as f64 / 25.0;
            let ss = objective(points, p_t, nu);
            if ss < best.0 {
                best = (ss, p_t, nu);
            }
        }
    }

    let span = (p_max - p_min).max(1e-3);
    let ((mut p_t, mut nu0), mut ss, mut converged) =
        nelder_mead(points, (best.1, best.2), (span / 20.0, 0.1), 400);
    // One tight restart around the found optimum.
    let ((p2, n2), ss2, conv2) = nelder_mead(points, (p_t, nu0), (1e-4, 1e-3), 400);
    if ss2 <= ss {
        p_t = p2;
        nu0 = n2;
        ss = ss2;
        converged = conv2 || converged;
    }

    let (a, b, ss_lin, degenerate) = linear_fit(points, p_t, nu0);
    (p_t, nu0, a, b, ss_lin.min(ss), converged && !degenerate)
}

/// Fit the scaling law to grid results taken at a single loss rate.
pub fn fit_scaling(results: &[GridResult], opts: FitOptions) -> Result<ScalingFit, FitError> {
    if results.is_empty() {
        return Err(FitError::InsufficientData);
    }
    let p_loss = results[0].point.p_loss;
    if results.iter().any(|r| r.point.p_loss != p_loss) {
        return Err(FitError::MixedLossRates);
    }
    check_preconditions(results)?;

    let all_points = fit_points(results, opts.accounting);
    let first = fit_core(&all_points);

    // f(0) = a estimates the crossing value; refit on the points near it.
    // Fall back to the full fit if the window starves the preconditions.
    let (p_t, nu0, a, b, residual_ss, converged) = match opts.window {
        None => first,
        Some(window) => {
            let crossing = first.2;
            let kept: Vec<GridResult> = results
                .iter()
                .zip(&all_points)
                .filter(|(_, pt)| math::abs(pt.p_fail - crossing) <= window)
                .map(|(r, _)| *r)
                .collect();
            if kept.len() == results.len() || check_preconditions(&kept).is_err() {
                first
            } else {
                fit_core(&fit_points(&kept, opts.accounting))
            }
        }
    };

    Ok(ScalingFit {
        p_loss,
        p_t,
        nu0,
        a,
        b,
        residual_ss,
        converged,
    })
}

fn check_preconditions(results: &[GridResult]) -> Result<(), FitError> {
    let mut sizes: Vec<u32> = results.iter().map(|r| r.point.l).collect();
    sizes.sort();
    sizes.dedup();
    let mut rates: Vec<u64> = results.iter().map(|r| r.point.p_com.to_bits()).collect();
    rates.sort();
    rates.dedup();
    if sizes.len() < 2 || rates.len() < 3 {
        return Err(FitError::InsufficientData);
    }
    Ok(())
}

/// Ordinary least-squares quadratic through the thresholds of converged
/// fits with `p_loss ≤ 0.4`, with the extrapolated `p_t = 0` intercept.
pub fn fit_boundary(fits: &[ScalingFit]) -> Result<BoundaryCurve, FitError> {
    let eligible: Vec<&ScalingFit> = fits
        .iter()
        .filter(|f| f.p_loss <= 0.4 && f.converged)
        .collect();
    if eligible.len() < 3 {
        return Err(FitError::InsufficientFits);
    }

    // Normal equations for p_t = c0 + c1·x + c2·x².
    let mut m = [[0.0f64; 3]; 3];
    let mut rhs = [0.0f64; 3];
    for f in &eligible {
        let x = f.p_loss;
        let pow = [1.0, x, x * x];
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] += pow[i] * pow[j];
            }
            rhs[i] += pow[i] * f.p_t;
        }
    }
    let coefficients = solve3(m, rhs);

    let max_pl = eligible
        .iter()
        .map(|f| f.p_loss)
        .fold(f64::NEG_INFINITY, f64::max);
    let intercept = quadratic_root_at_or_beyond(coefficients, max_pl);

    Ok(BoundaryCurve {
        coefficients,
        included: eligible.iter().map(|f| f.p_loss).collect(),
        intercept,
    })
}

/// Gaussian elimination with partial pivoting for the 3×3 system.
fn solve3(mut m: [[f64; 3]; 3], mut rhs: [f64; 3]) -> [f64; 3] {
    for col in 0..3 {
        let pivot = (col..3)
            .max_by(|&a, &b| {
                math::abs(m[a][col])
                    .partial_cmp(&math::abs(m[b][col]))
                    .unwrap()
            })
            .unwrap();
        m.swap(col, pivot);
        rhs.swap(col, pivot);
        for row in (col + 1)..3 {
            let factor = m[row][col] / m[col][col];
            for k in col..3 {
                m[row][k] -= factor * m[col][k];
            }
            rhs[row] -= factor * rhs[col];
        }
    }
    let mut x = [0.0; 3];
    for row in (0..3).rev() {
        let mut acc = rhs[row];
        for k in (row + 1)..3 {
            acc -= m[row][k] * x[k];
        }
        x[row] = acc / m[row][row];
    }
    x
}

/// Smallest real root of `c0 + c1·x + c2·x² = 0` at or beyond `from`;
/// falls back to the largest real root, or `None` when complex.
fn quadratic_root_at_or_beyond(c: [f64; 3], from: f64) -> Option<f64> {
    let [c0, c1, c2] = c;
    if math::abs(c2) < 1e-12 {
        if math::abs(c1) < 1e-300 {
            return None;
        }
        let root = -c0 / c1;
        return Some(root);
    }
    let disc = c1 * c1 - 4.0 * c2 * c0;
    if disc < 0.0 {
        return None;
    }
    let sq = math::sqrt(disc);
    let r1 = (-c1 - sq) / (2.0 * c2);
    let r2 = (-c1 + sq) / (2.0 * c2);
    let (lo, hi) = if r1 <= r2 { (r1, r2) } else { (r2, r1) };
    if lo >= from {
        Some(lo)
    } else if hi >= from {
        Some(hi)
    } else {
        Some(hi)
    }
}

/// Evaluate the boundary at a loss rate.
pub fn boundary_value(curve: &BoundaryCurve, p_loss: f64) -> f64 {
    let [c0, c1, c2] = curve.coefficients;
    c0 + c1 * p_loss + c2 * p_loss * p_loss
}
