//! Adaptive numerical integration: intervals, the full line, and radial
//! integrals over `R^n`.
//!
//! The core rule is the 15-point Gauss-Kronrod pair with global adaptive
//! bisection.  Integrable endpoint singularities are removed by a one-sided
//! variable-order substitution `t = a + u^k`, with `k` chosen from the
//! singularity exponent supplied by the caller (density families publish the
//! exponents of their support edges).  Full-line and half-line integrals
//! require a decay envelope; exponential and Gaussian tails are truncated at
//! a point where the envelope tail is below tolerance, while power tails are
//! mapped to a finite interval exactly.

use crate::{Error, Result};
use std::collections::BinaryHeap;
use std::f64::consts::PI;

/// Result of one integration with its error bookkeeping.
#[derive(Debug, Clone, Copy)]
pub struct IntegralResult {
    pub value: f64,
    /// Estimated absolute quadrature error.
    pub abs_error: f64,
    /// Number of Gauss-Kronrod panel evaluations.
    pub subdivisions: usize,
    /// Bound on the discarded tail mass (zero for exact tail transforms).
    pub truncation_bound: f64,
}

/// Decay envelope for the integrand beyond `from`:
/// `|f(x)| <= bound(|x|)` for `|x| >= from`.
#[derive(Debug, Clone, Copy)]
pub struct Envelope {
    pub from: f64,
    pub kind: EnvKind,
}

#[derive(Debug, Clone, Copy)]
pub enum EnvKind {
    /// `coeff * x^degree * exp(-rate x)`
    Exp { coeff: f64, rate: f64, degree: u32 },
    /// `coeff * x^degree * exp(-rate x^2)`
    Gauss { coeff: f64, rate: f64, degree: u32 },
    /// `coeff * x^(-exponent)`
    Power { coeff: f64, exponent: f64 },
}

impl Envelope {
    pub fn exp(coeff: f64, rate: f64, degree: u32, from: f64) -> Self {
        Envelope { from, kind: EnvKind::Exp { coeff, rate, degree } }
    }
    pub fn gauss(coeff: f64, rate: f64, degree: u32, from: f64) -> Self {
        Envelope { from, kind: EnvKind::Gauss { coeff, rate, degree } }
    }
    pub fn power(coeff: f64, exponent: f64, from: f64) -> Self {
        Envelope { from, kind: EnvKind::Power { coeff, exponent } }
    }

    /// Upper bound for `int_T^inf bound(x) dx`, when finite.
    fn tail_integral(&self, t: f64) -> Option<f64> {
        match self.kind {
            EnvKind::Exp { coeff, rate, degree } => {
                if rate <= 0.0 {
                    return None;
                }
                // int_T x^d e^{-rx} = e^{-rT} d!/r^{d+1} sum_{j<=d} (rT)^j/j!
                let d = degree as i32;
                let mut sum = 0.0;
                let mut term = 1.0; // (rT)^j / j!
                for j in 0..=d {
                    if j > 0 {
                        term *= rate * t / j as f64;
                    }
                    sum += term;
                }
                let mut fact = 1.0;
                for j in 1..=d {
                    fact *= j as f64;
                }
                Some(coeff * (-rate * t).exp() * fact / rate.powi(d + 1) * sum)
            }
            EnvKind::Gauss { coeff, rate, degree } => {
                if rate <= 0.0 {
                    return None;
                }
                let d = degree as f64;
                if 2.0 * rate * t * t <= d + 1.0 {
                    return Some(f64::INFINITY);
                }
                let geom = 1.0 / (1.0 - d / (2.0 * rate * t * t));
                Some(coeff * t.powi(degree as i32) * (-rate * t * t).exp() / (2.0 * rate * t) * geom)
            }
            EnvKind::Power { coeff, exponent } => {
                if exponent <= 1.0 {
                    None
                } else {
                    Some(coeff * t.powf(1.0 - exponent) / (exponent - 1.0))
                }
            }
        }
    }

    /// Smallest grid point `T >= from` with tail below `eps`.
    fn truncation_point(&self, eps: f64) -> Result<(f64, f64)> {
        let mut t = self.from.max(1.0);
        for _ in 0..200 {
            match self.tail_integral(t) {
                None => {
                    return Err(Error::Divergence(
                        "decay envelope has no integrable tail".into(),
                    ))
                }
                Some(tail) if tail <= eps => return Ok((t, tail)),
                Some(_) => t *= 1.5,
            }
            if t > 1e14 {
                break;
            }
        }
        Err(Error::Divergence(format!(
            "decay envelope too slow to meet tolerance {eps}"
        )))
    }
}

/// Radial support descriptor for [`integrate_radial`].
#[derive(Debug, Clone, Copy)]
pub enum RadialSupport {
    /// Integrand supported on `[0, r]`; `edge_exponent` is the power of
    /// `(r - t)` in the integrand near `t = r` when it is not smooth there.
    Bounded { r: f64, edge_exponent: Option<f64> },
    /// Integrand on `[0, inf)`; the envelope bounds `g(t) t^(n-1)`.
    Unbounded { envelope: Envelope },
}

// 15-point Kronrod abscissae (positive half) and weights, 7-point Gauss
// weights embedded.  Standard QUADPACK values.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_33,
    0.949_107_912_342_758_524_526_189_684_047_85,
    0.864_864_423_359_769_072_789_712_788_640_93,
    0.741_531_185_599_394_439_863_864_773_280_79,
    0.586_087_235_467_691_130_294_144_838_258_73,
    0.405_845_151_377_397_166_906_606_412_076_96,
    0.207_784_955_007_898_467_600_689_403_773_24,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_97,
    0.063_092_092_629_978_553_290_700_663_189_2,
    0.104_790_010_322_250_183_839_876_322_541_52,
    0.140_653_259_715_525_918_745_189_590_510_24,
    0.169_004_726_639_267_902_826_583_426_598_55,
    0.190_350_578_064_785_409_913_256_402_421_01,
    0.204_432_940_075_298_892_414_161_999_234_65,
    0.209_482_141_084_727_828_012_999_174_891_71,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_08,
    0.279_705_391_489_276_667_901_467_771_423_78,
    0.381_830_050_505_118_944_950_369_775_488_98,
    0.417_959_183_673_469_387_755_102_040_816_33,
];

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / res_asc).powf(1.5);
        scaled = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        scaled = scaled.max(50.0 * f64::EPSILON * res_abs);
    }
    scaled
}

/// One Gauss-Kronrod 15 panel: returns (value, error estimate).
fn qk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut fv1 = [0.0_f64; 7];
    let mut fv2 = [0.0_f64; 7];

    let mut res_gauss = fc * WG[3];
    let mut res_kronrod = fc * WGK[7];
    let mut res_abs = res_kronrod.abs();

    for j in 0..3 {
        let idx = 2 * j + 1;
        let x = half * XGK[idx];
        let f1 = f(center - x);
        let f2 = f(center + x);
        fv1[idx] = f1;
        fv2[idx] = f2;
        res_gauss += WG[j] * (f1 + f2);
        res_kronrod += WGK[idx] * (f1 + f2);
        res_abs += WGK[idx] * (f1.abs() + f2.abs());
    }
    for j in 0..4 {
        let idx = 2 * j;
        let x = half * XGK[idx];
        let f1 = f(center - x);
        let f2 = f(center + x);
        fv1[idx.min(6)] = f1;
        fv2[idx.min(6)] = f2;
        res_kronrod += WGK[idx] * (f1 + f2);
        res_abs += WGK[idx] * (f1.abs() + f2.abs());
    }

    let mean = res_kronrod * 0.5;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let err = ((res_kronrod - res_gauss) * half).abs();
    (res_kronrod * half, rescale_error(err, res_abs * half.abs(), res_asc * half.abs()))
}

const MAX_PANELS: usize = 8000;

#[derive(Debug)]
struct Segment {
    err: f64,
    a: f64,
    b: f64,
    val: f64,
    id: u64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // max-heap on error; id breaks ties deterministically
        self.err
            .partial_cmp(&other.err)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(self.id.cmp(&other.id).reverse())
    }
}

fn adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> Result<(f64, f64, usize)> {
    if a == b {
        return Ok((0.0, 0.0, 0));
    }
    let (v, e) = qk15(f, a, b);
    let mut heap = BinaryHeap::new();
    let mut next_id = 0_u64;
    heap.push(Segment { err: e, a, b, val: v, id: next_id });
    let mut total_err = e;
    let mut panels = 1_usize;
    let span = (b - a).abs();

    while total_err > tol && panels < MAX_PANELS {
        let worst = heap.pop().expect("heap never empty here");
        if (worst.b - worst.a).abs() < 1e-15 * span.max(1.0) {
            // cannot refine further; put it back and stop
            heap.push(worst);
            break;
        }
        let mid = 0.5 * (worst.a + worst.b);
        let (v1, e1) = qk15(f, worst.a, mid);
        let (v2, e2) = qk15(f, mid, worst.b);
        panels += 2;
        total_err += e1 + e2 - worst.err;
        next_id += 1;
        heap.push(Segment { err: e1, a: worst.a, b: mid, val: v1, id: next_id });
        next_id += 1;
        heap.push(Segment { err: e2, a: mid, b: worst.b, val: v2, id: next_id });
    }

    // recompute sums from the heap for a tight, drift-free result
    let mut val = 0.0;
    let mut err = 0.0;
    for s in heap.iter() {
        val += s.val;
        err += s.err;
    }
    if err > tol && err > 100.0 * tol.max(1e-300) {
        return Err(Error::Nonconvergence {
            what: "adaptive quadrature".into(),
            best: val,
            error: err,
        });
    }
    Ok((val, err, panels))
}

/// Integrates `f` over `[a, b]` with no singularity hints.
pub fn integrate_interval<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<IntegralResult> {
    integrate_interval_singular(f, a, b, tol, None, None)
}

fn substitution_order(exponent: f64) -> usize {
    // integrand ~ d^gamma near the endpoint; t = a + u^k turns it into
    // u^(k gamma + k - 1), smooth once k(1 + gamma) - 1 >= 2
    let k = (3.0 / (1.0 + exponent)).ceil() as isize;
    k.clamp(2, 8) as usize
}

/// Integrates `f` over `[a, b]`, removing integrable endpoint singularities.
/// `left`/`right` give the exponent `gamma` of `f ~ dist^gamma` at the
/// corresponding endpoint (`gamma > -1`).
pub fn integrate_interval_singular<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    tol: f64,
    left: Option<f64>,
    right: Option<f64>,
) -> Result<IntegralResult> {
    for g in [left, right].into_iter().flatten() {
        if g <= -1.0 {
            return Err(Error::Divergence(format!(
                "endpoint exponent {g} <= -1 is not integrable"
            )));
        }
    }
    let needs = |g: Option<f64>| matches!(g, Some(x) if x < 2.0);
    let mut pieces: Vec<(f64, f64, usize)> = Vec::new(); // value, err, panels placeholder
    let mut total = IntegralResult { value: 0.0, abs_error: 0.0, subdivisions: 0, truncation_bound: 0.0 };

    let nl = needs(left);
    let nr = needs(right);
    let mid = 0.5 * (a + b);
    let (lo_end, hi_start) = match (nl, nr) {
        (false, false) => {
            let (v, e, p) = adaptive(&f, a, b, tol)?;
            return Ok(IntegralResult { value: v, abs_error: e, subdivisions: p, truncation_bound: 0.0 });
        }
        (true, false) => (mid, mid),
        (false, true) => (mid, mid),
        (true, true) => (mid, mid),
    };

    let n_sub = 1 + nl as usize + nr as usize;
    let tol_piece = tol / n_sub as f64;

    if nl {
        let g = left.unwrap();
        let k = substitution_order(g);
        let width = lo_end - a;
        let upper = width.powf(1.0 / k as f64);
        let kk = k as f64;
        let sub = |u: f64| f(a + u.powi(k as i32)) * kk * u.powi(k as i32 - 1);
        let (v, e, p) = adaptive(&sub, 0.0, upper, tol_piece)?;
        pieces.push((v, e, p));
    }
    if nr {
        let g = right.unwrap();
        let k = substitution_order(g);
        let width = b - hi_start;
        let upper = width.powf(1.0 / k as f64);
        let kk = k as f64;
        let sub = |u: f64| f(b - u.powi(k as i32)) * kk * u.powi(k as i32 - 1);
        let (v, e, p) = adaptive(&sub, 0.0, upper, tol_piece)?;
        pieces.push((v, e, p));
    }
    // middle piece (or the full remaining half when only one side is singular)
    let (ma, mb) = match (nl, nr) {
        (true, true) => (mid, mid), // both halves consumed
        (true, false) => (mid, b),
        (false, true) => (a, mid),
        (false, false) => unreachable!(),
    };
    if mb > ma {
        let (v, e, p) = adaptive(&f, ma, mb, tol_piece)?;
        pieces.push((v, e, p));
    }
    for (v, e, p) in pieces {
        total.value += v;
        total.abs_error += e;
        total.subdivisions += p;
    }
    Ok(total)
}

/// Integrates `f` over the whole real line.  The envelope must bound `|f|`
/// on both tails.
pub fn integrate_line<F: Fn(f64) -> f64>(f: F, envelope: &Envelope, tol: f64) -> Result<IntegralResult> {
    match envelope.kind {
        EnvKind::Power { exponent, .. } => {
            let a = envelope.from.max(1.0);
            let core = adaptive(&f, -a, a, tol / 2.0)?;
            let right = power_tail(&f, a, exponent, tol / 4.0)?;
            let neg = |x: f64| f(-x);
            let left = power_tail(&neg, a, exponent, tol / 4.0)?;
            Ok(IntegralResult {
                value: core.0 + right.0 + left.0,
                abs_error: core.1 + right.1 + left.1,
                subdivisions: core.2 + right.2 + left.2,
                truncation_bound: 0.0,
            })
        }
        _ => {
            let (t, tail) = envelope.truncation_point(tol / 4.0)?;
            let (v, e, p) = adaptive(&f, -t, t, tol / 2.0)?;
            Ok(IntegralResult {
                value: v,
                abs_error: e,
                subdivisions: p,
                truncation_bound: 2.0 * tail,
            })
        }
    }
}

/// Exact transform of `int_A^inf f` via `t = A/s`, `s in (0, 1]`.
fn power_tail<F: Fn(f64) -> f64>(f: &F, a: f64, exponent: f64, tol: f64) -> Result<(f64, f64, usize)> {
    if exponent <= 1.0 {
        return Err(Error::Divergence(format!(
            "power tail exponent {exponent} <= 1 is not integrable"
        )));
    }
    let sub = |s: f64| f(a / s) * a / (s * s);
    // integrand ~ s^(exponent - 2) near s = 0
    let gamma = exponent - 2.0;
    let res = integrate_interval_singular(sub, 0.0, 1.0, tol, Some(gamma), None)?;
    Ok((res.value, res.abs_error, res.subdivisions))
}

/// Integrates `g(|x|)` over `R^n`:
/// `omega_{n-1} int g(t) t^(n-1) dt` with `omega_{n-1} = 2 pi^(n/2) / Gamma(n/2)`.
pub fn integrate_radial<F: Fn(f64) -> f64>(
    g: F,
    n: usize,
    support: RadialSupport,
    tol: f64,
) -> Result<IntegralResult> {
    if n == 0 {
        return Err(Error::Domain("dimension must be >= 1".into()));
    }
    let omega = sphere_area(n);
    let integrand = |t: f64| g(t) * t.powi(n as i32 - 1);
    let inner_tol = tol / omega;
    let mut res = match support {
        RadialSupport::Bounded { r, edge_exponent } => {
            integrate_interval_singular(integrand, 0.0, r, inner_tol, None, edge_exponent)?
        }
        RadialSupport::Unbounded { envelope } => match envelope.kind {
            EnvKind::Power { exponent, .. } => {
                let a = envelope.from.max(1.0);
                let core = adaptive(&integrand, 0.0, a, inner_tol / 2.0)?;
                let tail = power_tail(&integrand, a, exponent, inner_tol / 2.0)?;
                IntegralResult {
                    value: core.0 + tail.0,
                    abs_error: core.1 + tail.1,
                    subdivisions: core.2 + tail.2,
                    truncation_bound: 0.0,
                }
            }
            _ => {
                let (t, tail) = envelope.truncation_point(inner_tol / 2.0)?;
                let (v, e, p) = adaptive(&integrand, 0.0, t, inner_tol / 2.0)?;
                IntegralResult { value: v, abs_error: e, subdivisions: p, truncation_bound: tail }
            }
        },
    };
    res.value *= omega;
    res.abs_error *= omega;
    res.truncation_bound *= omega;
    Ok(res)
}

/// Surface area of the unit sphere in `R^n`.
pub fn sphere_area(n: usize) -> f64 {
    2.0 * PI.powf(n as f64 / 2.0)
        / crate::special::gamma(n as f64 / 2.0).expect("n/2 > 0")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_sin() {
        let r = integrate_interval(|x| x.sin(), 0.0, PI, 1e-12).unwrap();
        assert!((r.value - 2.0).abs() < 1e-12);
    }

    #[test]
    fn interval_sqrt_singularity() {
        let r =
            integrate_interval_singular(|x| x.powf(-0.5), 0.0, 1.0, 1e-10, Some(-0.5), None).unwrap();
        assert!((r.value - 2.0).abs() < 1e-10, "got {}", r.value);
    }

    #[test]
    fn interval_cos_power_normalization() {
        let r = integrate_interval(|x| 2.0 / PI * x.cos().powi(2), -PI / 2.0, PI / 2.0, 1e-12)
            .unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn line_gaussian_mass() {
        let f = |x: f64| (-0.5 * x * x).exp() / (2.0 * PI).sqrt();
        let env = Envelope::gauss(1.0, 0.5, 0, 1.0);
        let r = integrate_line(f, &env, 1e-12).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
        assert!(r.abs_error + r.truncation_bound <= 1e-12 * 4.0);
    }

    #[test]
    fn line_two_sided_exponential() {
        let f = |x: f64| 0.5 * (-x.abs()).exp();
        let env = Envelope::exp(0.5, 1.0, 0, 0.0);
        let r = integrate_line(f, &env, 1e-12).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn line_sech_is_pi() {
        // int 1/cosh = pi
        let f = |x: f64| 1.0 / x.cosh();
        let env = Envelope::exp(2.0, 1.0, 0, 1.0);
        let r = integrate_line(f, &env, 1e-10).unwrap();
        assert!((r.value - PI).abs() < 1e-10);
    }

    #[test]
    fn radial_unit_ball_volume() {
        let r = integrate_radial(|_| 1.0, 3, RadialSupport::Bounded { r: 1.0, edge_exponent: None }, 1e-12)
            .unwrap();
        assert!((r.value - 4.0 * PI / 3.0).abs() < 1e-12);
    }

    #[test]
    fn radial_gaussian_mass_2d() {
        let g = |t: f64| (-0.5 * t * t).exp() / (2.0 * PI);
        let env = Envelope::gauss(1.0, 0.5, 1, 1.0);
        let r = integrate_radial(g, 2, RadialSupport::Unbounded { envelope: env }, 1e-12).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn radial_power_tail_beta_integral() {
        // int_0^inf t^2 (1+t^2)^-3 dt = pi/16, so the 3-d radial integral of
        // (1+t^2)^-3 equals 4 pi * pi/16 = pi^2/4
        let g = |t: f64| (1.0 + t * t).powi(-3);
        let env = Envelope::power(1.0, 4.0, 2.0); // integrand t^2 (1+t^2)^-3 ~ t^-4
        let r = integrate_radial(g, 3, RadialSupport::Unbounded { envelope: env }, 1e-10).unwrap();
        assert!((r.value - PI * PI / 4.0).abs() < 1e-10, "got {}", r.value);
    }

    #[test]
    fn radial_matches_even_line_integral_at_n1() {
        let g = |t: f64| (-t).exp();
        let env = Envelope::exp(1.0, 1.0, 0, 0.0);
        let r = integrate_radial(g, 1, RadialSupport::Unbounded { envelope: env }, 1e-12).unwrap();
        // 2 int_0^inf e^-t = 2
        assert!((r.value - 2.0).abs() < 1e-12);
    }

    #[test]
    fn refinement_monotonicity() {
        let cases: Vec<(Box<dyn Fn(f64) -> f64>, f64, f64, f64)> = vec![
            (Box::new(|x: f64| x.sin()), 0.0, PI, 2.0),
            (Box::new(|x: f64| 2.0 / PI * x.cos().powi(2)), -PI / 2.0, PI / 2.0, 1.0),
            (Box::new(|x: f64| (x * 3.0).exp()), 0.0, 1.0, (3.0f64.exp() - 1.0) / 3.0),
        ];
        for (f, a, b, oracle) in cases {
            let mut tol = 1e-4;
            let mut prev = f64::INFINITY;
            while tol >= 1e-12 {
                let r = integrate_interval(&f, a, b, tol).unwrap();
                let err = (r.value - oracle).abs();
                assert!(err <= prev + 1e-15, "tol {tol}: err {err} > prev {prev}");
                prev = err;
                tol /= 2.0;
            }
        }
    }

    #[test]
    fn envelope_too_slow_rejected() {
        let f = |x: f64| 1.0 / (1.0 + x.abs());
        let env = Envelope::power(1.0, 1.0, 1.0);
        assert!(integrate_line(f, &env, 1e-10).is_err());
    }
}
