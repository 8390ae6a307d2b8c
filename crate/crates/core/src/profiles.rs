//! Ground states of the radial ODE
//!
//! ```text
//! u'' + (n-1)/t u' + u^(r-1) = u^(s-1)
//! ```
//!
//! solved by shooting on `u(0)`, and the dispatcher that assembles the sharp
//! isoperimetric constant `r_{a,n}` across all parameter regions.
//!
//! Two regimes share one solver.  For `alpha > 1` (exponents `r = 2`,
//! `s = 2/alpha`) the ground state has compact support: `u` decreases to a
//! simultaneous zero of `u` and `u'` at some radius `T`.  For `alpha < 1`
//! (`r = 2/alpha`, `s = 2`) it decays to zero at infinity.  In both cases
//! `u(0) = u0` is found by bisection: too small and the trajectory flattens
//! out with `u > 0` (undershoot), too large and it crosses zero with
//! negative slope (overshoot).

use crate::constants::{self, ConstantRecord, Route};
use crate::quadrature::sphere_area;
use crate::{tol, Error, Result};
use std::collections::HashMap;
use std::f64::consts::{E, PI};
use std::sync::{Arc, Mutex, OnceLock};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileCase {
    CompactSupport,
    InfiniteDecay,
}

/// A solved radial ground state on a uniform grid.
#[derive(Debug, Clone)]
pub struct ProfileSolution {
    pub n: usize,
    pub alpha: f64,
    pub case: ProfileCase,
    /// Shooting initial value `u(0)`.
    pub u0: f64,
    /// Support radius `T` (compact case) or truncation radius (decay case).
    pub t_end: f64,
    /// Uniform samples `(t, u, u')`, last sample exactly `(T, 0, 0)` in the
    /// compact case.
    pub samples: Vec<(f64, f64, f64)>,
    /// `M_s = int_{R^n} u^s(|x|) dx` with `s = 2/alpha` (compact) or `s = 2`
    /// (decay); this is the integral entering the sharp-constant formulas.
    pub ms: f64,
    /// `int_{R^n} u^(2/alpha)(|x|) dx`, the normalizer of the extremal
    /// density (equal to `ms` in the compact case).
    pub ms_density: f64,
}

impl ProfileSolution {
    fn step(&self) -> f64 {
        self.samples[1].0 - self.samples[0].0
    }

    /// Cubic Hermite interpolation of `u` at radius `r` (0 beyond support).
    pub fn u_at(&self, r: f64) -> f64 {
        if r < 0.0 || r >= self.t_end {
            return 0.0;
        }
        let h = self.step();
        let i = ((r / h) as usize).min(self.samples.len() - 2);
        let (t0, u0, v0) = self.samples[i];
        let (_, u1, v1) = self.samples[i + 1];
        let s = (r - t0) / h;
        let s2 = s * s;
        let s3 = s2 * s;
        let val = (2.0 * s3 - 3.0 * s2 + 1.0) * u0
            + (s3 - 2.0 * s2 + s) * h * v0
            + (-2.0 * s3 + 3.0 * s2) * u1
            + (s3 - s2) * h * v1;
        val.max(0.0)
    }

    /// Derivative of the interpolant at radius `r`.
    pub fn du_at(&self, r: f64) -> f64 {
        if r < 0.0 || r >= self.t_end {
            return 0.0;
        }
        let h = self.step();
        let i = ((r / h) as usize).min(self.samples.len() - 2);
        let (t0, u0, v0) = self.samples[i];
        let (_, u1, v1) = self.samples[i + 1];
        let s = (r - t0) / h;
        let s2 = s * s;
        ((6.0 * s2 - 6.0 * s) * u0
            + (3.0 * s2 - 4.0 * s + 1.0) * h * v0
            + (-6.0 * s2 + 6.0 * s) * u1
            + (3.0 * s2 - 2.0 * s) * h * v1)
            / h
    }

    /// Exponent `kappa` of the touchdown `u ~ (T-t)^kappa` (compact case).
    pub fn touchdown_exponent(&self) -> Option<f64> {
        match self.case {
            ProfileCase::CompactSupport => Some(self.alpha / (self.alpha - 1.0)),
            ProfileCase::InfiniteDecay => None,
        }
    }

    /// Largest residual of the ODE over interior samples, with `u''`
    /// reconstructed by five-point finite differences of the stored `u'`.
    pub fn max_ode_residual(&self) -> f64 {
        let h = self.step();
        let q = (2.0 - self.alpha) / self.alpha;
        let dir = direction(self.case);
        let mut worst: f64 = 0.0;
        for i in 2..self.samples.len().saturating_sub(6) {
            let (t, u, v) = self.samples[i];
            if u < 1e-3 * self.u0 {
                continue;
            }
            let upp = (-self.samples[i + 2].2 + 8.0 * self.samples[i + 1].2
                - 8.0 * self.samples[i - 1].2
                + self.samples[i - 2].2)
                / (12.0 * h);
            let rhs = -(self.n as f64 - 1.0) / t * v + dir * (u - pow_plus(u, q));
            worst = worst.max((upp - rhs).abs());
        }
        worst
    }
}

fn pow_plus(u: f64, q: f64) -> f64 {
    if u <= 0.0 {
        0.0
    } else if q == 0.0 {
        1.0
    } else {
        u.powf(q)
    }
}

fn direction(case: ProfileCase) -> f64 {
    match case {
        // compact: u'' = -(n-1)/t u' - u + u^q  =  -(n-1)/t u' - (u - u^q)
        ProfileCase::CompactSupport => -1.0,
        // decay:   u'' = -(n-1)/t u' + u - u^q
        ProfileCase::InfiniteDecay => 1.0,
    }
}

fn rhs(case: ProfileCase, n: usize, q: f64, t: f64, y: [f64; 2]) -> [f64; 2] {
    let friction = if n > 1 { -(n as f64 - 1.0) / t * y[1] } else { 0.0 };
    [y[1], friction + direction(case) * (y[0] - pow_plus(y[0], q))]
}

/// Series start around the coordinate singularity at `t = 0`:
/// `u(t) = u0 + (u0^(s-1) - u0^(r-1)) t^2 / (2n) + O(t^4)`.
fn series_start(case: ProfileCase, n: usize, q: f64, u0: f64, t: f64) -> [f64; 2] {
    let a = direction(case) * (u0 - pow_plus(u0, q)) / (2.0 * n as f64);
    [u0 + a * t * t, 2.0 * a * t]
}

// Dormand-Prince 5(4) pair.
#[allow(clippy::too_many_arguments)]
fn dopri_step(
    case: ProfileCase,
    n: usize,
    q: f64,
    t: f64,
    y: [f64; 2],
    h: f64,
) -> ([f64; 2], [f64; 2], f64) {
    let f = |t: f64, y: [f64; 2]| rhs(case, n, q, t, y);
    let k1 = f(t, y);
    let k2 = f(t + h / 5.0, add(y, scale(k1, h / 5.0)));
    let k3 = f(t + 0.3 * h, add(y, comb(&[(3.0 / 40.0, k1), (9.0 / 40.0, k2)], h)));
    let k4 = f(
        t + 0.8 * h,
        add(y, comb(&[(44.0 / 45.0, k1), (-56.0 / 15.0, k2), (32.0 / 9.0, k3)], h)),
    );
    let k5 = f(
        t + 8.0 / 9.0 * h,
        add(
            y,
            comb(
                &[
                    (19372.0 / 6561.0, k1),
                    (-25360.0 / 2187.0, k2),
                    (64448.0 / 6561.0, k3),
                    (-212.0 / 729.0, k4),
                ],
                h,
            ),
        ),
    );
    let k6 = f(
        t + h,
        add(
            y,
            comb(
                &[
                    (9017.0 / 3168.0, k1),
                    (-355.0 / 33.0, k2),
                    (46732.0 / 5247.0, k3),
                    (49.0 / 176.0, k4),
                    (-5103.0 / 18656.0, k5),
                ],
                h,
            ),
        ),
    );
    let y5 = add(
        y,
        comb(
            &[
                (35.0 / 384.0, k1),
                (500.0 / 1113.0, k3),
                (125.0 / 192.0, k4),
                (-2187.0 / 6784.0, k5),
                (11.0 / 84.0, k6),
            ],
            h,
        ),
    );
    let k7 = f(t + h, y5);
    let y4 = add(
        y,
        comb(
            &[
                (5179.0 / 57600.0, k1),
                (7571.0 / 16695.0, k3),
                (393.0 / 640.0, k4),
                (-92097.0 / 339200.0, k5),
                (187.0 / 2100.0, k6),
                (1.0 / 40.0, k7),
            ],
            h,
        ),
    );
    let err = ((y5[0] - y4[0]).powi(2) + (y5[1] - y4[1]).powi(2)).sqrt();
    (y5, k1, err)
}

fn add(a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
    [a[0] + b[0], a[1] + b[1]]
}
fn scale(a: [f64; 2], c: f64) -> [f64; 2] {
    [a[0] * c, a[1] * c]
}
fn comb(terms: &[(f64, [f64; 2])], h: f64) -> [f64; 2] {
    let mut out = [0.0, 0.0];
    for (c, k) in terms {
        out[0] += c * k[0];
        out[1] += c * k[1];
    }
    scale(out, h)
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Shot {
    /// `u` fell to the zero threshold with `u' < 0`.
    Overshoot,
    /// `u'` turned non-negative while `u > 0`.
    Undershoot,
}

/// Integrates a trial trajectory and classifies it, returning the event
/// time.  Trajectories are only followed while `u > 1e-12 u0`: the
/// nonlinear term is not smooth across `u = 0`, so the zero level itself is
/// the overshoot event.
fn shoot(case: ProfileCase, n: usize, q: f64, u0: f64, t_cap: f64) -> (Shot, f64) {
    let t0 = 1e-4;
    let mut t = t0;
    let mut y = series_start(case, n, q, u0, t0);
    let mut h: f64 = 1e-3;
    let rtol = 1e-11;
    let atol = 1e-13 * u0;
    let u_eps = 1e-12 * u0;
    let mut armed = false;
    for _ in 0..400_000 {
        // never step deep past the touchdown: the force is not smooth there
        if y[1] < 0.0 {
            h = h.min((0.25 * y[0] / (-y[1])).max(1e-9));
        }
        let (y_new, _k1, err) = dopri_step(case, n, q, t, y, h);
        let tol_step = atol + rtol * (y[0].abs() + y[1].abs());
        if err > tol_step && h > 1e-12 {
            h *= 0.9 * (tol_step / err).powf(0.2).clamp(0.1, 1.0);
            continue;
        }
        let t_new = t + h;
        if !armed && y_new[1] < -1e-10 * u0 {
            armed = true;
        }
        if y_new[0] <= u_eps {
            return (Shot::Overshoot, t_new);
        }
        if armed && y_new[1] >= 0.0 {
            return (Shot::Undershoot, t_new);
        }
        t = t_new;
        y = y_new;
        if t >= t_cap {
            return (Shot::Undershoot, t);
        }
        if err > 0.0 {
            h = (h * 0.9 * (tol_step / err).powf(0.2).clamp(0.5, 5.0)).min(t_cap / 50.0);
        } else {
            h = (h * 2.0).min(t_cap / 50.0);
        }
    }
    (Shot::Undershoot, t)
}

/// Fixed-step RK4 resample of the converged trajectory on a uniform grid.
/// Returns samples and the stop point `(t, u, v)` where `u` first fell
/// below `stop_level`.
fn resample(
    case: ProfileCase,
    n: usize,
    q: f64,
    u0: f64,
    t_hi: f64,
    n_samples: usize,
    stop_level: f64,
) -> (Vec<(f64, f64, f64)>, (f64, f64, f64)) {
    let dt = t_hi / n_samples as f64;
    let substeps = 6;
    let f = |t: f64, y: [f64; 2]| rhs(case, n, q, t, y);
    let rk4 = |t: f64, y: [f64; 2], h: f64| -> [f64; 2] {
        let k1 = f(t, y);
        let k2 = f(t + 0.5 * h, add(y, scale(k1, 0.5 * h)));
        let k3 = f(t + 0.5 * h, add(y, scale(k2, 0.5 * h)));
        let k4 = f(t + h, add(y, scale(k3, h)));
        add(y, scale(add(add(k1, scale(add(k2, k3), 2.0)), k4), h / 6.0))
    };

    let mut samples = vec![(0.0, u0, 0.0)];
    let t0 = (1e-4_f64).min(dt / 4.0);
    let mut t = t0;
    let mut y = series_start(case, n, q, u0, t0);
    let mut stop = (t_hi, 0.0, 0.0);
    'outer: for i in 1..=n_samples {
        let target = i as f64 * dt;
        let h = (target - t) / substeps as f64;
        for _ in 0..substeps {
            let y_new = rk4(t, y, h);
            if y_new[0] <= stop_level {
                // locate u = stop_level on the cubic Hermite of the substep
                let (u0s, v0s) = (y[0], y[1]);
                let (u1s, v1s) = (y_new[0], y_new[1]);
                let eval = |s: f64| -> (f64, f64) {
                    let (s2, s3) = (s * s, s * s * s);
                    let u = (2.0 * s3 - 3.0 * s2 + 1.0) * u0s
                        + (s3 - 2.0 * s2 + s) * h * v0s
                        + (-2.0 * s3 + 3.0 * s2) * u1s
                        + (s3 - s2) * h * v1s;
                    let v = ((6.0 * s2 - 6.0 * s) * u0s
                        + (3.0 * s2 - 4.0 * s + 1.0) * h * v0s
                        + (-6.0 * s2 + 6.0 * s) * u1s
                        + (3.0 * s2 - 2.0 * s) * h * v1s)
                        / h;
                    (u, v)
                };
                let mut lo = 0.0;
                let mut hi = 1.0;
                for _ in 0..60 {
                    let mid = 0.5 * (lo + hi);
                    if eval(mid).0 > stop_level {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                let s = 0.5 * (lo + hi);
                let (us, vs) = eval(s);
                stop = (t + s * h, us, vs);
                break 'outer;
            }
            t += h;
            y = y_new;
        }
        t = target;
        samples.push((t, y[0], y[1]));
    }
    (samples, stop)
}

const SAMPLES_COMPACT: usize = 2000;
const SAMPLES_DECAY: usize = 3000;

/// Solves the radial ground state for `(n, alpha)`.
pub fn solve_profile(n: usize, alpha: f64) -> Result<Arc<ProfileSolution>> {
    if n == 0 {
        return Err(Error::Domain("dimension must be >= 1".into()));
    }
    if let Some(sol) = cache_get(n, alpha) {
        return Ok(sol);
    }
    let case = shooting_case(n, alpha)?;
    let q = (2.0 - alpha) / alpha;
    let t_cap = match case {
        ProfileCase::CompactSupport => 600.0,
        ProfileCase::InfiniteDecay => 400.0,
    };

    // Bracket: u0 slightly above the equilibrium value 1 must undershoot,
    // doubling from there must eventually overshoot.
    let mut lo = 1.0 + 1e-9;
    if shoot(case, n, q, lo, t_cap).0 != Shot::Undershoot {
        return Err(Error::CrossCheck(format!(
            "shooting bracket invalid: u0={lo} does not undershoot for n={n}, alpha={alpha}"
        )));
    }
    let mut hi = 2.0;
    let mut t_event = t_cap;
    let mut found = false;
    for _ in 0..60 {
        match shoot(case, n, q, hi, t_cap) {
            (Shot::Overshoot, te) => {
                t_event = te;
                found = true;
                break;
            }
            (Shot::Undershoot, _) => {
                lo = hi;
                hi *= 2.0;
            }
        }
    }
    if !found {
        return Err(Error::Nonconvergence {
            what: format!("shooting bracket for n={n}, alpha={alpha}"),
            best: hi,
            error: f64::INFINITY,
        });
    }
    for _ in 0..200 {
        if hi - lo <= 5e-15 * hi {
            break;
        }
        let mid = 0.5 * (lo + hi);
        match shoot(case, n, q, mid, t_cap) {
            (Shot::Overshoot, te) => {
                hi = mid;
                t_event = te;
            }
            (Shot::Undershoot, _) => lo = mid,
        }
    }
    let u0 = 0.5 * (lo + hi);

    let sol = match case {
        ProfileCase::CompactSupport => {
            // Touchdown time from the asymptotics u ~ c (T - t)^kappa:
            // T ~ t + kappa u/|u'|, with an O(tau^2) bias from the friction
            // term that two stop levels (tau and tau/2) extrapolate away.
            let kappa = alpha / (alpha - 1.0);
            let t_est = |stop: (f64, f64, f64)| -> f64 {
                stop.0 + if stop.2 < 0.0 { kappa * stop.1 / (-stop.2) } else { 0.0 }
            };
            let level1 = 1e-6 * u0;
            let level2 = level1 * 0.5_f64.powf(kappa);
            let (_, stop1) = resample(case, n, q, u0, t_event * 1.05, 20_000, level1);
            let (_, stop2) = resample(case, n, q, u0, t_event * 1.05, 20_000, level2);
            let t_touch = (4.0 * t_est(stop2) - t_est(stop1)) / 3.0;
            let (mut samples, _) =
                resample(case, n, q, u0, t_touch, SAMPLES_COMPACT, 1e-9 * u0);
            // pad the last ~tau(1e-9) stretch with the exact zero state
            while samples.len() <= SAMPLES_COMPACT {
                let t = samples.len() as f64 * (t_touch / SAMPLES_COMPACT as f64);
                samples.push((t, 0.0, 0.0));
            }
            let last = samples.last_mut().unwrap();
            *last = (t_touch, 0.0, 0.0);
            let s_exp = 2.0 / alpha;
            let ms = radial_simpson(&samples, s_exp, n);
            ProfileSolution {
                n,
                alpha,
                case,
                u0,
                t_end: t_touch,
                samples,
                ms,
                ms_density: ms,
            }
        }
        ProfileCase::InfiniteDecay => {
            // Shooting in f64 tracks the ground state down to roughly
            // 1e-6 u0 before the growing mode contaminates it; below that
            // level the trajectory is continued by the decaying solution of
            // the linearization u'' + (n-1)/t u' = u, i.e.
            // u ~ A e^(-t) t^(-(n-1)/2) (exact for n = 1 and n = 3).  The
            // dropped nonlinear term is O(u^2) relative at the matching
            // point, far below the integral tolerances.
            let match_level = 1e-5 * u0;
            let (_, stop) = resample(case, n, q, u0, t_cap, 60_000, match_level);
            let (t_m, u_m, _) = stop;
            let dt = t_m / SAMPLES_DECAY as f64;
            let (mut samples, _) = resample(case, n, q, u0, t_m, SAMPLES_DECAY, 0.0);
            let decay_rate = |t: f64| 1.0 + (n as f64 - 1.0) / (2.0 * t);
            let tail_shape = |t: f64| (-t).exp() * t.powf(-(n as f64 - 1.0) / 2.0);
            let (t_last, u_last, _) = *samples.last().expect("nonempty samples");
            let scale = u_last.max(u_m * 0.5) / tail_shape(t_last);
            let mut t = t_last;
            while samples.last().expect("nonempty").1 > 1e-12 * u0 {
                t += dt;
                let u = scale * tail_shape(t);
                samples.push((t, u, -u * decay_rate(t)));
            }
            let t_max = samples.last().expect("nonempty").0;
            let ms = radial_simpson(&samples, 2.0, n);
            let ms_density = radial_simpson(&samples, 2.0 / alpha, n);
            ProfileSolution { n, alpha, case, u0, t_end: t_max, samples, ms, ms_density }
        }
    };
    let arc = Arc::new(sol);
    cache_put(n, alpha, arc.clone());
    Ok(arc)
}

/// `M_s = omega_{n-1} int u^s t^(n-1) dt` by composite Simpson over the
/// uniform samples.
pub fn compute_ms(sol: &ProfileSolution, s: f64) -> f64 {
    radial_simpson(&sol.samples, s, sol.n)
}

fn radial_simpson(samples: &[(f64, f64, f64)], s: f64, n: usize) -> f64 {
    let h = samples[1].0 - samples[0].0;
    let f = |i: usize| -> f64 {
        let (t, u, _) = samples[i];
        if u <= 0.0 {
            0.0
        } else {
            u.powf(s) * t.powi(n as i32 - 1)
        }
    };
    let m = samples.len() - 1;
    let mut total = 0.0;
    let even_end = if m % 2 == 0 { m } else { m - 3 };
    let mut i = 0;
    while i + 2 <= even_end {
        total += h / 3.0 * (f(i) + 4.0 * f(i + 1) + f(i + 2));
        i += 2;
    }
    if m % 2 != 0 {
        // 3/8 rule on the final three intervals
        total += 3.0 * h / 8.0 * (f(m - 3) + 3.0 * f(m - 2) + 3.0 * f(m - 1) + f(m));
    }
    sphere_area(n) * total
}

fn shooting_case(n: usize, alpha: f64) -> Result<ProfileCase> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::Domain(format!("alpha must be positive and finite, got {alpha}")));
    }
    let nf = n as f64;
    if alpha > 1.0 {
        let hi = 2.0;
        let lo = if n >= 6 { 2.0 * (nf - 2.0) / (nf + 2.0) } else { 1.0 };
        if alpha > lo && alpha <= hi {
            Ok(ProfileCase::CompactSupport)
        } else {
            Err(Error::UnsupportedRegion { n, alpha })
        }
    } else if alpha < 1.0 {
        let lo = if n <= 2 { 0.0 } else { (nf - 2.0) / nf };
        if n >= 6 {
            return Err(Error::UnsupportedRegion { n, alpha });
        }
        if alpha > lo {
            Ok(ProfileCase::InfiniteDecay)
        } else {
            Err(Error::UnsupportedRegion { n, alpha })
        }
    } else {
        Err(Error::UnsupportedRegion { n, alpha })
    }
}

/// Sharp constant via the ODE ground-state route (also valid at `n = 1`,
/// where it cross-validates the closed form).
pub fn ode_route_constant(n: usize, alpha: f64) -> Result<ConstantRecord> {
    let sol = solve_profile(n, alpha)?;
    let value = match sol.case {
        ProfileCase::CompactSupport => constants::r_from_profile_compact(n, alpha, sol.ms),
        ProfileCase::InfiniteDecay => constants::r_from_profile_decay(n, alpha, sol.ms),
    };
    Ok(ConstantRecord { alpha, n, value, route: Route::OdeProfile, limit_scaled: None })
}

/// Dispatcher for the sharp constant `r_{a,n}` over every region where a
/// value is known; regions without one yield `Error::UnsupportedRegion`.
pub fn optimal_constant(n: usize, alpha: f64) -> Result<ConstantRecord> {
    if n == 0 {
        return Err(Error::Domain("dimension must be >= 1".into()));
    }
    if n == 1 {
        return constants::r_closed_form_1d(alpha);
    }
    if !(alpha >= 0.0) {
        return Err(Error::Domain(format!("alpha must be >= 0, got {alpha}")));
    }
    if (alpha - 1.0).abs() < tol::ALPHA_ONE {
        return Ok(ConstantRecord {
            alpha,
            n,
            value: 2.0 * PI * E * n as f64,
            route: Route::Shannon,
            limit_scaled: None,
        });
    }
    let nf = n as f64;
    if n >= 3 {
        let sob = (nf - 2.0) / nf;
        if (alpha - sob).abs() < 1e-12 {
            return constants::r_sobolev(n);
        }
        if alpha > 0.0 && alpha < sob {
            return constants::r_zero_region(n, alpha);
        }
    }
    ode_route_constant(n, alpha)
}

fn cache() -> &'static Mutex<HashMap<(usize, u64), Arc<ProfileSolution>>> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, u64), Arc<ProfileSolution>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn cache_get(n: usize, alpha: f64) -> Option<Arc<ProfileSolution>> {
    cache().lock().ok()?.get(&(n, alpha.to_bits())).cloned()
}

fn cache_put(n: usize, alpha: f64, sol: Arc<ProfileSolution>) {
    if let Ok(mut map) = cache().lock() {
        map.insert((n, alpha.to_bits()), sol);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rel_gap;

    #[test]
    fn linear_case_n1_alpha2() {
        // u'' + u = 1, ground state u = 1 + cos t, T = pi, u0 = 2, M_1 = 2 pi
        let sol = solve_profile(1, 2.0).unwrap();
        assert!(matches!(sol.case, ProfileCase::CompactSupport));
        assert!((sol.u0 - 2.0).abs() < 1e-9, "u0 = {}", sol.u0);
        assert!((sol.t_end - PI).abs() < 1e-7, "T = {}", sol.t_end);
        assert!(rel_gap(sol.ms, 2.0 * PI) < 1e-9, "M = {}", sol.ms);
        // interpolant agrees with 1 + cos t
        for &r in &[0.3, 1.0, 2.0, 3.0] {
            assert!((sol.u_at(r) - (1.0 + r.cos())).abs() < 1e-8);
            assert!((sol.du_at(r) - (-r.sin())).abs() < 1e-6);
        }
    }

    #[test]
    fn ode_route_reproduces_closed_form_n1() {
        let rec = ode_route_constant(1, 2.0).unwrap();
        assert!(rel_gap(rec.value, 32.0 * PI * PI / 27.0) < 1e-10, "r = {}", rec.value);
        assert_eq!(rec.route, Route::OdeProfile);
    }

    #[test]
    fn samples_monotone_decreasing() {
        for (n, alpha) in [(1usize, 2.0), (2usize, 1.5)] {
            let sol = solve_profile(n, alpha).unwrap();
            for w in sol.samples.windows(2) {
                assert!(w[1].1 <= w[0].1 + 1e-12, "not decreasing at t={}", w[1].0);
            }
            assert!(sol.ms > 0.0);
        }
    }

    #[test]
    fn decay_case_n3() {
        let sol = solve_profile(3, 0.5).unwrap();
        assert!(matches!(sol.case, ProfileCase::InfiniteDecay));
        let last = sol.samples.last().unwrap();
        assert!(last.1 <= 1e-9 * sol.u0 && last.1 >= 0.0);
        for w in sol.samples.windows(2) {
            assert!(w[1].1 <= w[0].1 + 1e-12);
        }
    }

    #[test]
    fn ode_residual_small() {
        let sol = solve_profile(2, 2.0).unwrap();
        assert!(sol.max_ode_residual() < 1e-8 * sol.u0);
        let sol = solve_profile(2, 0.8).unwrap();
        assert!(sol.max_ode_residual() < 1e-8 * sol.u0);
    }

    #[test]
    fn dispatcher_regions() {
        assert_eq!(optimal_constant(3, 0.2).unwrap().route, Route::ZeroRegion);
        assert_eq!(optimal_constant(3, 1.0 / 3.0).unwrap().route, Route::Sobolev);
        assert_eq!(optimal_constant(4, 1.0).unwrap().route, Route::Shannon);
        assert!(matches!(
            optimal_constant(3, 2.5),
            Err(Error::UnsupportedRegion { n: 3, .. })
        ));
        assert!(matches!(
            optimal_constant(7, 1.05),
            Err(Error::UnsupportedRegion { n: 7, .. })
        ));
        assert!(matches!(
            optimal_constant(6, 0.9),
            Err(Error::UnsupportedRegion { n: 6, .. })
        ));
    }

    #[test]
    fn cache_returns_same_solution() {
        let a = solve_profile(1, 2.0).unwrap();
        let b = solve_profile(1, 2.0).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
    }
}
