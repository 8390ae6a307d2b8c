//! Probability density families: every extremizer and comparison density
//! used by the verification suites, plus 1-D grid densities.
//!
//! All analytic families here are ellipsoidal: `p(x) = amp * g(r)` with
//! `r^2 = (x-c)^T S^{-1} (x-c)` for a positive definite scale matrix `S` and
//! a radial kernel `g`.  Mass, moments, and every Fisher-type integral then
//! reduce to one-dimensional radial quadratures:
//!
//! ```text
//! int p^b dx                  = amp^b |S|^(1/2) w int g^b r^(n-1) dr
//! int |grad p|^2 p^b dx       = amp^(b+2) |S|^(1/2) tr(S^-1)/n w int g'^2 g^b r^(n-1) dr
//! int grad p grad p^T p^b dx  = amp^(b+2) |S|^(1/2) (w/n) (int g'^2 g^b r^(n-1) dr) S^-1
//! cov                         = amp |S|^(1/2) (w/n) (int g r^(n+1) dr) S
//! ```
//!
//! with `w` the unit-sphere area.  Compact kernels publish the exponent of
//! their support edge and decaying kernels publish a tail envelope, so the
//! quadrature module can handle endpoint singularities and truncation.

use crate::linalg::SymMat;
use crate::profiles::{ProfileCase, ProfileSolution};
use crate::quadrature::{self, Envelope, RadialSupport};
use crate::special::{log_beta, log_gamma};
use crate::{tol, Error, Result};
use std::f64::consts::PI;
use std::sync::Arc;

const GRAD_EDGE_GUARD: f64 = 1e-8;

/// Radial kernel shapes.
#[derive(Debug, Clone)]
pub enum Shape {
    /// `cos(r)^m` on `[0, pi/2]`
    CosPow { m: f64 },
    /// `cosh(r)^(-m)`
    CoshPow { m: f64 },
    /// `exp(-r)`
    Exp,
    /// `1` on `[0, pi/2]`
    Slab,
    /// `exp(-r^2/2)`
    Gauss,
    /// `(1 - r^2)_+^m`
    CompactQuad { m: f64 },
    /// `(1 + r^2)^(-mu)`
    HeavyQuad { mu: f64 },
    /// interpolated ODE ground state `u(r)^pow`
    Profile { sol: Arc<ProfileSolution>, pow: f64 },
}

/// Decay class of an unbounded kernel, used to build quadrature envelopes.
#[derive(Debug, Clone, Copy)]
enum TailKind {
    /// `g(r) <= coeff exp(-rate r)` for `r >= 1`
    Exp { coeff: f64, rate: f64 },
    /// `g(r) = exp(-r^2/2)`
    Gauss,
    /// `g(r) <= r^(-exponent)` for `r >= 1`
    Power { exponent: f64 },
}

impl Shape {
    fn g(&self, r: f64) -> f64 {
        match self {
            Shape::CosPow { m } => {
                if r >= PI / 2.0 {
                    0.0
                } else {
                    r.cos().powf(*m)
                }
            }
            Shape::CoshPow { m } => r.cosh().powf(-m),
            Shape::Exp => (-r).exp(),
            Shape::Slab => {
                if r >= PI / 2.0 {
                    0.0
                } else {
                    1.0
                }
            }
            Shape::Gauss => (-0.5 * r * r).exp(),
            Shape::CompactQuad { m } => {
                if r >= 1.0 {
                    0.0
                } else {
                    (1.0 - r * r).powf(*m)
                }
            }
            Shape::HeavyQuad { mu } => (1.0 + r * r).powf(-mu),
            Shape::Profile { sol, pow } => {
                let u = sol.u_at(r);
                if u <= 0.0 {
                    0.0
                } else {
                    u.powf(*pow)
                }
            }
        }
    }

    fn dg(&self, r: f64) -> f64 {
        match self {
            Shape::CosPow { m } => {
                if r >= PI / 2.0 {
                    0.0
                } else {
                    let r = self.guard_edge(r, *m);
                    -m * r.cos().powf(m - 1.0) * r.sin()
                }
            }
            Shape::CoshPow { m } => -m * r.cosh().powf(-m - 1.0) * r.sinh(),
            Shape::Exp => -(-r).exp(),
            Shape::Slab => 0.0,
            Shape::Gauss => -r * (-0.5 * r * r).exp(),
            Shape::CompactQuad { m } => {
                if r >= 1.0 {
                    0.0
                } else {
                    let r = self.guard_edge(r, *m);
                    -2.0 * m * r * (1.0 - r * r).powf(m - 1.0)
                }
            }
            Shape::HeavyQuad { mu } => -2.0 * mu * r * (1.0 + r * r).powf(-mu - 1.0),
            Shape::Profile { sol, pow } => {
                let u = sol.u_at(r);
                if u <= 0.0 {
                    0.0
                } else {
                    pow * u.powf(pow - 1.0) * sol.du_at(r)
                }
            }
        }
    }

    // For edge exponents below one the gradient blows up at the support
    // boundary; queries within 1e-8 of it return the interior limit value.
    fn guard_edge(&self, r: f64, m: f64) -> f64 {
        if m >= 1.0 {
            return r;
        }
        match self.radius() {
            Some(radius) if r > radius - GRAD_EDGE_GUARD => radius - GRAD_EDGE_GUARD,
            _ => r,
        }
    }

    fn radius(&self) -> Option<f64> {
        match self {
            Shape::CosPow { .. } | Shape::Slab => Some(PI / 2.0),
            Shape::CompactQuad { .. } => Some(1.0),
            Shape::Profile { sol, .. } => Some(sol.t_end),
            _ => None,
        }
    }

    /// Exponent `nu` of `g ~ (R - r)^nu` at a compact support edge.
    fn edge_exponent(&self) -> Option<f64> {
        match self {
            Shape::CosPow { m } => Some(*m),
            Shape::Slab => Some(0.0),
            Shape::CompactQuad { m } => Some(*m),
            Shape::Profile { sol, pow } => match sol.case {
                ProfileCase::CompactSupport => sol.touchdown_exponent().map(|k| k * pow),
                // decay profiles are truncated where u is ~1e-10 u0; the
                // integrand is smooth and negligible at the cut
                ProfileCase::InfiniteDecay => None,
            },
            _ => None,
        }
    }

    fn tail(&self) -> Option<TailKind> {
        match self {
            Shape::CoshPow { m } => Some(TailKind::Exp { coeff: 2.0_f64.powf(*m), rate: *m }),
            Shape::Exp => Some(TailKind::Exp { coeff: 1.0, rate: 1.0 }),
            Shape::Gauss => Some(TailKind::Gauss),
            Shape::HeavyQuad { mu } => Some(TailKind::Power { exponent: 2.0 * mu }),
            _ => None,
        }
    }

    fn has_jump(&self) -> bool {
        matches!(self, Shape::Slab)
    }
}

/// Which constructor produced a density; drives the `equality_expected`
/// decisions in the verification suites.
#[derive(Debug, Clone, PartialEq)]
pub enum FamilyTag {
    CosPower { alpha: f64 },
    CoshPower { alpha: f64 },
    TwoSidedExp,
    UniformInterval,
    Gaussian,
    MaxRenyi { alpha: f64 },
    Barenblatt { alpha: f64 },
    SobolevExtremal,
    GOneDim { alpha: f64 },
    GMultiDim { alpha: f64 },
    GLambda { lambda: f64 },
    ProfileExtremal { alpha: f64 },
    Grid,
}

/// An ellipsoidal analytic density `p(x) = amp g(r)`.
#[derive(Debug, Clone)]
pub struct RadialDensity {
    dim: usize,
    center: Vec<f64>,
    scale: SymMat,
    scale_inv: SymMat,
    sqrt_det: f64,
    amp: f64,
    shape: Shape,
    tag: FamilyTag,
}

/// A 1-D density sampled on a uniform grid (cell centers).
#[derive(Debug, Clone)]
pub struct GridDensity {
    pub x0: f64,
    pub h: f64,
    pub p: Vec<f64>,
}

#[derive(Debug, Clone)]
pub enum Density {
    Radial(RadialDensity),
    Grid(GridDensity),
}

fn check_pd(s: &SymMat) -> Result<(SymMat, f64)> {
    let det = s.det();
    if !(det > 0.0) || s.eigenvalues()[0] <= 0.0 {
        return Err(Error::Domain("scale/covariance matrix must be positive definite".into()));
    }
    Ok((s.inverse()?, det.sqrt()))
}

impl RadialDensity {
    fn new(
        dim: usize,
        center: Vec<f64>,
        scale: SymMat,
        amp: f64,
        shape: Shape,
        tag: FamilyTag,
    ) -> Result<Self> {
        if center.len() != dim || scale.dim() != dim {
            return Err(Error::Domain("dimension mismatch in density construction".into()));
        }
        let (scale_inv, sqrt_det) = check_pd(&scale)?;
        Ok(RadialDensity { dim, center, scale, scale_inv, sqrt_det, amp, shape, tag })
    }

    fn radial_coord(&self, x: &[f64]) -> f64 {
        let v: Vec<f64> = x.iter().zip(&self.center).map(|(a, b)| a - b).collect();
        self.scale_inv.quad_form(&v).max(0.0).sqrt()
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        self.amp * self.shape.g(self.radial_coord(x))
    }

    pub fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let v: Vec<f64> = x.iter().zip(&self.center).map(|(a, b)| a - b).collect();
        let r = self.scale_inv.quad_form(&v).max(0.0).sqrt();
        if r < 1e-300 {
            return vec![0.0; self.dim];
        }
        let factor = self.amp * self.shape.dg(r) / r;
        self.scale_inv.mul_vec(&v).iter().map(|w| factor * w).collect()
    }

    fn radial_integral<F: Fn(f64) -> f64>(
        &self,
        f: F,
        edge_exponent: Option<f64>,
        envelope: Option<Envelope>,
        tol_q: f64,
    ) -> Result<f64> {
        let support = match self.shape.radius() {
            Some(r) => RadialSupport::Bounded { r, edge_exponent },
            None => RadialSupport::Unbounded {
                envelope: envelope.ok_or_else(|| {
                    Error::Divergence("unbounded kernel without a decay envelope".into())
                })?,
            },
        };
        Ok(quadrature::integrate_radial(f, self.dim, support, tol_q)?.value)
    }

    fn mass_envelope(&self, beta: f64, extra_degree: u32) -> Option<Envelope> {
        let deg = self.dim as u32 - 1 + extra_degree;
        match self.shape.tail()? {
            TailKind::Exp { coeff, rate } => {
                Some(Envelope::exp(coeff.powf(beta), rate * beta, deg, 1.0))
            }
            TailKind::Gauss => Some(Envelope::gauss(1.0, 0.5 * beta, deg, 1.0)),
            TailKind::Power { exponent } => {
                Some(Envelope::power(1.0, exponent * beta - deg as f64, 1.0))
            }
        }
    }

    fn fisher_envelope(&self, beta: f64) -> Option<Envelope> {
        let deg = self.dim as u32 - 1;
        match self.shape.tail()? {
            TailKind::Exp { coeff, rate } => Some(Envelope::exp(
                coeff.powf(beta + 2.0) * rate * rate,
                rate * (beta + 2.0),
                deg,
                1.0,
            )),
            TailKind::Gauss => Some(Envelope::gauss(1.0, 0.5 * (beta + 2.0), deg + 2, 1.0)),
            TailKind::Power { exponent } => {
                let e = 0.5 * exponent; // g ~ r^-2mu with mu = e
                Some(Envelope::power(
                    exponent * exponent,
                    2.0 * e * (beta + 2.0) + 2.0 - deg as f64,
                    1.0,
                ))
            }
        }
    }

    /// `int p^beta dx`.
    pub fn mass_power(&self, beta: f64, tol_q: f64) -> Result<f64> {
        if beta < 0.0 {
            return Err(Error::Divergence("negative density power is not integrable".into()));
        }
        let edge = self.shape.edge_exponent().map(|nu| nu * beta);
        let env = self.mass_envelope(beta, 0);
        let shape = self.shape.clone();
        let val = self.radial_integral(|r| shape.g(r).powf(beta), edge, env, tol_q)?;
        Ok(self.amp.powf(beta) * self.sqrt_det * val)
    }

    /// `-int p ln p dx`.
    pub fn shannon_integral(&self, tol_q: f64) -> Result<f64> {
        let edge = self.shape.edge_exponent().map(|nu| nu * 0.95);
        let env = self.mass_envelope(0.9, 2);
        let amp = self.amp;
        let shape = self.shape.clone();
        let val = self.radial_integral(
            |r| {
                let g = shape.g(r);
                if g <= 0.0 {
                    0.0
                } else {
                    let p = amp * g;
                    -p * p.ln()
                }
            },
            edge,
            env,
            tol_q,
        )?;
        Ok(self.sqrt_det * val)
    }

    /// `int |grad p|^2 p^beta dx` over the positivity set.
    pub fn fisher_integral(&self, beta: f64, tol_q: f64) -> Result<f64> {
        let base = self.fisher_radial_integral(beta, tol_q)?;
        Ok(self.amp.powf(beta + 2.0) * self.sqrt_det * self.scale_inv.trace() / self.dim as f64
            * base)
    }

    /// `int grad p (grad p)^T p^beta dx`.
    pub fn fisher_matrix_integral(&self, beta: f64, tol_q: f64) -> Result<SymMat> {
        let base = self.fisher_radial_integral(beta, tol_q)?;
        let c = self.amp.powf(beta + 2.0) * self.sqrt_det / self.dim as f64 * base;
        Ok(self.scale_inv.scale(c))
    }

    fn fisher_radial_integral(&self, beta: f64, tol_q: f64) -> Result<f64> {
        if self.shape.has_jump() {
            return Err(Error::Divergence(
                "density has a jump discontinuity; Fisher-type integrals diverge".into(),
            ));
        }
        let edge = match self.shape.edge_exponent() {
            Some(nu) => {
                let e = 2.0 * (nu - 1.0) + nu * beta;
                if e <= -1.0 {
                    return Err(Error::Divergence(format!(
                        "support-edge exponent {e:.3} not integrable for Fisher integrand"
                    )));
                }
                Some(e)
            }
            None => None,
        };
        let env = self.fisher_envelope(beta);
        let floor = 1e-300;
        let amp = self.amp;
        let shape = self.shape.clone();
        self.radial_integral(
            |r| {
                let g = shape.g(r);
                if amp * g <= floor {
                    return 0.0;
                }
                let d = shape.dg(r);
                if d == 0.0 {
                    return 0.0;
                }
                // log-space product: d^2 can underflow while g^beta
                // overflows (far tails with beta < -1)
                (2.0 * d.abs().ln() + beta * g.ln()).exp()
            },
            edge,
            env,
            tol_q,
        )
    }

    /// Radial moment `int g r^(n-1+k) dr` scaled into `int |x-c|-free form`;
    /// helper for moments.
    fn plain_radial_moment(&self, k: u32, tol_q: f64) -> Result<f64> {
        let edge = self.shape.edge_exponent();
        let env = self.mass_envelope(1.0, k);
        let shape = self.shape.clone();
        self.radial_integral(|r| shape.g(r) * r.powi(k as i32), edge, env, tol_q)
    }

    pub fn mean(&self) -> Vec<f64> {
        self.center.clone()
    }

    /// Second moment about the origin `int |x|^2 p dx`.
    pub fn second_moment(&self, tol_q: f64) -> Result<f64> {
        let central = self.amp
            * self.sqrt_det
            * self.scale.trace()
            / self.dim as f64
            * self.plain_radial_moment(2, tol_q)?;
        let offset: f64 = self.center.iter().map(|c| c * c).sum();
        Ok(central + offset)
    }

    pub fn covariance(&self, tol_q: f64) -> Result<SymMat> {
        let c = self.amp * self.sqrt_det / self.dim as f64 * self.plain_radial_moment(2, tol_q)?;
        Ok(self.scale.scale(c))
    }

    pub fn tag(&self) -> &FamilyTag {
        &self.tag
    }

    /// Window `(lo, hi, compact)` on the line outside which integrands
    /// comparable to `p^beta_min` stay below ~1e-17, in `x` units.
    pub fn pointwise_window(&self, beta_min: f64) -> (f64, f64, bool) {
        let sigma = self.scale.get(0, 0).sqrt();
        match self.shape.radius() {
            Some(r) => (
                self.center[0] - r * sigma,
                self.center[0] + r * sigma,
                true,
            ),
            None => {
                let threshold = 1e-17_f64.powf(1.0 / beta_min.max(0.05));
                let mut r = 1.0_f64;
                while r < 1e9 {
                    if self.amp * self.shape.g(r) < threshold {
                        break;
                    }
                    r *= 1.2;
                }
                let half = r * 1.2 * sigma;
                (self.center[0] - half, self.center[0] + half, false)
            }
        }
    }
}

impl GridDensity {
    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x0 + i as f64 * self.h
    }

    /// Composite Simpson weights (3/8 rule tail when the interval count is
    /// odd).
    pub fn quad_weights(n: usize, h: f64) -> Vec<f64> {
        assert!(n >= 4);
        let m = n - 1;
        let mut w = vec![0.0; n];
        let even_end = if m % 2 == 0 { m } else { m - 3 };
        let mut i = 0;
        while i + 2 <= even_end {
            w[i] += h / 3.0;
            w[i + 1] += 4.0 * h / 3.0;
            w[i + 2] += h / 3.0;
            i += 2;
        }
        if m % 2 != 0 {
            w[m - 3] += 3.0 * h / 8.0;
            w[m - 2] += 9.0 * h / 8.0;
            w[m - 1] += 9.0 * h / 8.0;
            w[m] += 3.0 * h / 8.0;
        }
        w
    }

    fn integrate_with<F: Fn(usize) -> f64>(&self, f: F) -> f64 {
        let w = Self::quad_weights(self.p.len(), self.h);
        w.iter().enumerate().map(|(i, wi)| wi * f(i)).sum()
    }

    pub fn mass(&self) -> f64 {
        self.integrate_with(|i| self.p[i])
    }

    /// 4th-order gradient: central stencils inside, one-sided at the edges.
    pub fn gradient_fd(&self) -> Vec<f64> {
        let n = self.p.len();
        let h = self.h;
        let p = &self.p;
        let mut g = vec![0.0; n];
        for i in 0..n {
            g[i] = if i >= 2 && i + 2 < n {
                (p[i - 2] - 8.0 * p[i - 1] + 8.0 * p[i + 1] - p[i + 2]) / (12.0 * h)
            } else if i + 4 < n && i < 2 {
                (-25.0 * p[i] + 48.0 * p[i + 1] - 36.0 * p[i + 2] + 16.0 * p[i + 3]
                    - 3.0 * p[i + 4])
                    / (12.0 * h)
            } else {
                (25.0 * p[i] - 48.0 * p[i - 1] + 36.0 * p[i - 2] - 16.0 * p[i - 3]
                    + 3.0 * p[i - 4])
                    / (12.0 * h)
            };
        }
        g
    }

    pub fn mass_power(&self, beta: f64) -> f64 {
        self.integrate_with(|i| if self.p[i] > 0.0 { self.p[i].powf(beta) } else { 0.0 })
    }

    pub fn shannon_integral(&self) -> f64 {
        self.integrate_with(|i| {
            let pi = self.p[i];
            if pi > 1e-300 {
                -pi * pi.ln()
            } else {
                0.0
            }
        })
    }

    pub fn fisher_integral(&self, beta: f64) -> f64 {
        let g = self.gradient_fd();
        self.integrate_with(|i| {
            let pi = self.p[i];
            if pi > 1e-300 {
                g[i] * g[i] * pi.powf(beta)
            } else {
                0.0
            }
        })
    }

    pub fn mean(&self) -> f64 {
        self.integrate_with(|i| self.x(i) * self.p[i])
    }

    pub fn second_moment(&self) -> f64 {
        self.integrate_with(|i| self.x(i) * self.x(i) * self.p[i])
    }

    pub fn variance(&self) -> f64 {
        let mu = self.mean();
        self.second_moment() - mu * mu
    }

    /// Linear interpolation of the cell values (0 outside the grid).
    pub fn value(&self, x: f64) -> f64 {
        let s = (x - self.x0) / self.h;
        if s < 0.0 || s > (self.p.len() - 1) as f64 {
            return 0.0;
        }
        let i = (s as usize).min(self.p.len() - 2);
        let frac = s - i as f64;
        self.p[i] * (1.0 - frac) + self.p[i + 1] * frac
    }
}

impl Density {
    pub fn dim(&self) -> usize {
        match self {
            Density::Radial(r) => r.dim,
            Density::Grid(_) => 1,
        }
    }

    pub fn tag(&self) -> FamilyTag {
        match self {
            Density::Radial(r) => r.tag.clone(),
            Density::Grid(_) => FamilyTag::Grid,
        }
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        match self {
            Density::Radial(r) => r.value(x),
            Density::Grid(g) => g.value(x[0]),
        }
    }

    pub fn gradient(&self, x: &[f64]) -> Vec<f64> {
        match self {
            Density::Radial(r) => r.gradient(x),
            Density::Grid(g) => {
                // derivative of the linear interpolant (midpoint convention)
                let eps = g.h * 0.5;
                vec![(g.value(x[0] + eps) - g.value(x[0] - eps)) / (2.0 * eps)]
            }
        }
    }

    pub fn as_grid(&self) -> Option<&GridDensity> {
        match self {
            Density::Grid(g) => Some(g),
            _ => None,
        }
    }

    pub fn as_radial(&self) -> Option<&RadialDensity> {
        match self {
            Density::Radial(r) => Some(r),
            _ => None,
        }
    }

    /// `int p^beta dx`.
    pub fn mass_power(&self, beta: f64, tol_q: f64) -> Result<f64> {
        match self {
            Density::Radial(r) => r.mass_power(beta, tol_q),
            Density::Grid(g) => Ok(g.mass_power(beta)),
        }
    }

    /// `-int p ln p dx`.
    pub fn shannon_integral(&self, tol_q: f64) -> Result<f64> {
        match self {
            Density::Radial(r) => r.shannon_integral(tol_q),
            Density::Grid(g) => Ok(g.shannon_integral()),
        }
    }

    /// `int |grad p|^2 p^beta dx`.
    pub fn fisher_integral(&self, beta: f64, tol_q: f64) -> Result<f64> {
        match self {
            Density::Radial(r) => r.fisher_integral(beta, tol_q),
            Density::Grid(g) => Ok(g.fisher_integral(beta)),
        }
    }

    /// `int grad p (grad p)^T p^beta dx`.
    pub fn fisher_matrix_integral(&self, beta: f64, tol_q: f64) -> Result<SymMat> {
        match self {
            Density::Radial(r) => r.fisher_matrix_integral(beta, tol_q),
            Density::Grid(g) => Ok(SymMat::scalar(g.fisher_integral(beta))),
        }
    }

    /// Second moment `int |x|^2 p dx`.
    pub fn second_moment(&self, tol_q: f64) -> Result<f64> {
        match self {
            Density::Radial(r) => r.second_moment(tol_q),
            Density::Grid(g) => Ok(g.second_moment()),
        }
    }

    pub fn covariance(&self, tol_q: f64) -> Result<SymMat> {
        match self {
            Density::Radial(r) => r.covariance(tol_q),
            Density::Grid(g) => Ok(SymMat::scalar(g.variance())),
        }
    }

    /// Rescaled density `x -> p(x/a) / a^n`.
    pub fn scaled(&self, a: f64) -> Result<Density> {
        if !(a > 0.0) {
            return Err(Error::Domain("scale factor must be positive".into()));
        }
        match self {
            Density::Radial(r) => {
                let mut out = r.clone();
                out.scale = r.scale.scale(a * a);
                out.scale_inv = r.scale_inv.scale(1.0 / (a * a));
                out.sqrt_det = r.sqrt_det * a.powi(r.dim as i32);
                out.amp = r.amp / a.powi(r.dim as i32);
                out.center = r.center.iter().map(|c| c * a).collect();
                Ok(Density::Radial(out))
            }
            Density::Grid(g) => Ok(Density::Grid(GridDensity {
                x0: g.x0 * a,
                h: g.h * a,
                p: g.p.iter().map(|v| v / a).collect(),
            })),
        }
    }

    pub fn translated(&self, shift: &[f64]) -> Result<Density> {
        match self {
            Density::Radial(r) => {
                let mut out = r.clone();
                for (c, s) in out.center.iter_mut().zip(shift) {
                    *c += s;
                }
                Ok(Density::Radial(out))
            }
            Density::Grid(g) => Ok(Density::Grid(GridDensity {
                x0: g.x0 + shift[0],
                h: g.h,
                p: g.p.clone(),
            })),
        }
    }

    /// Samples a 1-D density onto a uniform cell grid covering its mass.
    pub fn to_grid(&self, h: f64) -> Result<GridDensity> {
        if self.dim() != 1 {
            return Err(Error::Domain("grid sampling is 1-D only".into()));
        }
        let (lo, hi) = match self {
            Density::Radial(r) => {
                let (lo, hi, _) = r.pointwise_window(1.0);
                (lo, hi)
            }
            Density::Grid(g) => (g.x0, g.x(g.len() - 1)),
        };
        let n = ((hi - lo) / h).ceil() as usize + 1;
        if n > 4_000_000 {
            return Err(Error::Resolution(format!(
                "grid would need {n} cells; refuse (tail too heavy or h too small)"
            )));
        }
        let p: Vec<f64> = (0..n).map(|i| self.value(&[lo + i as f64 * h])).collect();
        Ok(GridDensity { x0: lo, h, p })
    }

    // ---- constructors -----------------------------------------------------

    /// `a cos(bx+c)^(2/(alpha-1))` on its period cell, the sharp-constant
    /// extremizer for `alpha > 1` in dimension one.
    pub fn cos_power(alpha: f64, b: f64, c: f64) -> Result<Density> {
        if !(alpha > 1.0) {
            return Err(Error::Region(format!("cos_power needs alpha > 1, got {alpha}")));
        }
        if !(b > 0.0) {
            return Err(Error::Domain("cos_power needs b > 0".into()));
        }
        let m = 2.0 / (alpha - 1.0);
        let amp = b / PI.sqrt()
            * (log_gamma(m / 2.0 + 1.0)? - log_gamma((m + 1.0) / 2.0)?).exp();
        Ok(Density::Radial(RadialDensity::new(
            1,
            vec![-c / b],
            SymMat::scalar(1.0 / (b * b)),
            amp,
            Shape::CosPow { m },
            FamilyTag::CosPower { alpha },
        )?))
    }

    /// `a cosh(bx+c)^(-2/(1-alpha))`, the extremizer for `0 < alpha < 1` in
    /// dimension one.  (The sharp-inequality substitution is
    /// `p = f^(2/alpha) / int f^(2/alpha)` with `f = cosh^(-alpha/(1-alpha))`
    /// up to affine maps, so the density carries the exponent `-2/(1-alpha)`;
    /// at `alpha = 1/2` this is `(3/4) sech^4`, whose product `N_a I_a`
    /// equals the sharp constant 24.)
    pub fn cosh_power(alpha: f64, b: f64, c: f64) -> Result<Density> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::Region(format!("cosh_power needs 0 < alpha < 1, got {alpha}")));
        }
        if !(b > 0.0) {
            return Err(Error::Domain("cosh_power needs b > 0".into()));
        }
        let m = 2.0 / (1.0 - alpha);
        let amp = b / PI.sqrt()
            * (log_gamma((m + 1.0) / 2.0)? - log_gamma(m / 2.0)?).exp();
        Ok(Density::Radial(RadialDensity::new(
            1,
            vec![-c / b],
            SymMat::scalar(1.0 / (b * b)),
            amp,
            Shape::CoshPow { m },
            FamilyTag::CoshPower { alpha },
        )?))
    }

    /// `(b/2) e^{-|bx+c|}`.
    pub fn two_sided_exp(b: f64, c: f64) -> Result<Density> {
        if !(b > 0.0) {
            return Err(Error::Domain("two_sided_exp needs b > 0".into()));
        }
        Ok(Density::Radial(RadialDensity::new(
            1,
            vec![-c / b],
            SymMat::scalar(1.0 / (b * b)),
            b / 2.0,
            Shape::Exp,
            FamilyTag::TwoSidedExp,
        )?))
    }

    /// `(b/pi) 1` on the interval `|bx+c| <= pi/2`.
    pub fn uniform_interval(b: f64, c: f64) -> Result<Density> {
        if !(b > 0.0) {
            return Err(Error::Domain("uniform_interval needs b > 0".into()));
        }
        Ok(Density::Radial(RadialDensity::new(
            1,
            vec![-c / b],
            SymMat::scalar(1.0 / (b * b)),
            b / PI,
            Shape::Slab,
            FamilyTag::UniformInterval,
        )?))
    }

    pub fn gaussian(n: usize, cov: SymMat) -> Result<Density> {
        if cov.dim() != n {
            return Err(Error::Domain("covariance dimension mismatch".into()));
        }
        let (_, sqrt_det) = check_pd(&cov)?;
        let amp = (2.0 * PI).powf(-(n as f64) / 2.0) / sqrt_det;
        Ok(Density::Radial(RadialDensity::new(
            n,
            vec![0.0; n],
            cov,
            amp,
            Shape::Gauss,
            FamilyTag::Gaussian,
        )?))
    }

    pub fn gaussian_1d(var: f64) -> Result<Density> {
        if !(var > 0.0) {
            return Err(Error::Domain("variance must be positive".into()));
        }
        Self::gaussian(1, SymMat::scalar(var))
    }

    /// The covariance-constrained Renyi-entropy maximizer with covariance
    /// `K`, for `alpha > n/(n+2)` (`alpha = 1` degenerates to the Gaussian).
    pub fn max_renyi(n: usize, alpha: f64, k: SymMat) -> Result<Density> {
        let nf = n as f64;
        if !(alpha > nf / (nf + 2.0)) {
            return Err(Error::Region(format!(
                "max_renyi needs alpha > n/(n+2) = {}, got {alpha}",
                nf / (nf + 2.0)
            )));
        }
        if (alpha - 1.0).abs() < tol::ALPHA_ONE {
            return Self::gaussian(n, k);
        }
        let (_, sqrt_det_k) = check_pd(&k)?;
        let tag = FamilyTag::MaxRenyi { alpha };
        if alpha > 1.0 {
            let e = 1.0 / (alpha - 1.0);
            let m = nf + 2.0 * e;
            let scale = k.scale(m + 2.0);
            let sqrt_det_c = sqrt_det_k * (m + 2.0).powf(nf / 2.0);
            let amp = (log_gamma(m / 2.0 + 1.0)? - log_gamma((m - nf) / 2.0 + 1.0)?).exp()
                / (PI.powf(nf / 2.0) * sqrt_det_c);
            Ok(Density::Radial(RadialDensity::new(
                n,
                vec![0.0; n],
                scale,
                amp,
                Shape::CompactQuad { m: e },
                tag,
            )?))
        } else {
            let m = 2.0 / (1.0 - alpha) - nf;
            let scale = k.scale(m - 2.0);
            let sqrt_det_c = sqrt_det_k * (m - 2.0).powf(nf / 2.0);
            let amp = (log_gamma((m + nf) / 2.0)? - log_gamma(m / 2.0)?).exp()
                / (PI.powf(nf / 2.0) * sqrt_det_c);
            let mu = 1.0 / (1.0 - alpha);
            Ok(Density::Radial(RadialDensity::new(
                n,
                vec![0.0; n],
                scale,
                amp,
                Shape::HeavyQuad { mu },
                tag,
            )?))
        }
    }

    /// Barenblatt profile `(C -+ |x|^2)^(1/(alpha-1))`, normalized to unit
    /// mass by bisection on `C` (`alpha = 1` degenerates to the standard
    /// Gaussian).
    pub fn barenblatt(n: usize, alpha: f64) -> Result<Density> {
        let nf = n as f64;
        if !(alpha > nf / (nf + 2.0)) {
            return Err(Error::Region(format!(
                "barenblatt needs alpha > n/(n+2) = {}, got {alpha}",
                nf / (nf + 2.0)
            )));
        }
        if (alpha - 1.0).abs() < tol::ALPHA_ONE {
            return Self::gaussian(n, SymMat::identity(n));
        }
        let c = barenblatt_normalizer(n, alpha)?;
        Self::barenblatt_with(n, alpha, c)
    }

    fn barenblatt_with(n: usize, alpha: f64, c: f64) -> Result<Density> {
        let tag = FamilyTag::Barenblatt { alpha };
        if alpha > 1.0 {
            let m = 1.0 / (alpha - 1.0);
            Ok(Density::Radial(RadialDensity::new(
                n,
                vec![0.0; n],
                SymMat::identity(n).scale(c),
                c.powf(m),
                Shape::CompactQuad { m },
                tag,
            )?))
        } else {
            let mu = 1.0 / (1.0 - alpha);
            Ok(Density::Radial(RadialDensity::new(
                n,
                vec![0.0; n],
                SymMat::identity(n).scale(c),
                c.powf(-mu),
                Shape::HeavyQuad { mu },
                tag,
            )?))
        }
    }

    /// Sobolev extremal `a / (1 + b |x - x0|^2)^n`, `n >= 3`.
    pub fn sobolev_extremal(n: usize, b: f64, x0: Vec<f64>) -> Result<Density> {
        if n < 3 {
            return Err(Error::Region(format!("sobolev_extremal needs n >= 3, got {n}")));
        }
        if !(b > 0.0) {
            return Err(Error::Domain("sobolev_extremal needs b > 0".into()));
        }
        if x0.len() != n {
            return Err(Error::Domain("center dimension mismatch".into()));
        }
        let nf = n as f64;
        let amp = b.powf(nf / 2.0)
            * (log_gamma(nf)? - log_gamma(nf / 2.0)?).exp()
            / PI.powf(nf / 2.0);
        Ok(Density::Radial(RadialDensity::new(
            n,
            x0,
            SymMat::identity(n).scale(1.0 / b),
            amp,
            Shape::HeavyQuad { mu: nf },
            FamilyTag::SobolevExtremal,
        )?))
    }

    /// One-dimensional generalized Gaussian `G` (Tsallis Cramer-Rao
    /// extremizer), any `alpha > 0`.
    pub fn g_1d(alpha: f64) -> Result<Density> {
        if !(alpha > 0.0) {
            return Err(Error::Region(format!("g_1d needs alpha > 0, got {alpha}")));
        }
        let tag = FamilyTag::GOneDim { alpha };
        if (alpha - 1.0).abs() < tol::ALPHA_ONE {
            // a e^{-x^2}: Gaussian with variance 1/2
            let mut d = Self::gaussian_1d(0.5)?;
            if let Density::Radial(r) = &mut d {
                r.tag = tag;
            }
            return Ok(d);
        }
        if alpha > 1.0 {
            let m = 2.0 / (alpha - 1.0);
            let scale = 2.0 / (alpha - 1.0);
            let amp = (1.0 / scale).sqrt() / log_beta(0.5, m + 1.0)?.exp();
            Ok(Density::Radial(RadialDensity::new(
                1,
                vec![0.0],
                SymMat::scalar(scale),
                amp,
                Shape::CompactQuad { m },
                tag,
            )?))
        } else {
            let mu = 2.0 / (1.0 - alpha);
            let scale = 2.0 / (1.0 - alpha);
            let amp = (1.0 / scale).sqrt() / log_beta(0.5, mu - 0.5)?.exp();
            Ok(Density::Radial(RadialDensity::new(
                1,
                vec![0.0],
                SymMat::scalar(scale),
                amp,
                Shape::HeavyQuad { mu },
                tag,
            )?))
        }
    }

    /// Multidimensional generalized Gaussian `G^n`, `n >= 2`,
    /// `alpha > (n-2)/(n+2)`.
    pub fn g_nd(n: usize, alpha: f64) -> Result<Density> {
        if n < 2 {
            return Err(Error::Region("g_nd needs n >= 2 (use g_1d for n = 1)".into()));
        }
        let nf = n as f64;
        if !(alpha > (nf - 2.0) / (nf + 2.0)) {
            return Err(Error::Region(format!(
                "g_nd needs alpha > (n-2)/(n+2) = {}, got {alpha}",
                (nf - 2.0) / (nf + 2.0)
            )));
        }
        let tag = FamilyTag::GMultiDim { alpha };
        if (alpha - 1.0).abs() < tol::ALPHA_ONE {
            let mut d = Self::gaussian(n, SymMat::identity(n))?;
            if let Density::Radial(r) = &mut d {
                r.tag = tag;
            }
            return Ok(d);
        }
        let dcoef = (nf + 2.0) * alpha - nf + 2.0; // (n+2)(alpha+1) - 2n
        if alpha > 1.0 {
            let m = 2.0 / (alpha - 1.0);
            let r2 = dcoef / (alpha - 1.0);
            let amp = r2.powf(-nf / 2.0)
                * (log_gamma(m + nf / 2.0 + 1.0)? - log_gamma(m + 1.0)?).exp()
                / PI.powf(nf / 2.0);
            Ok(Density::Radial(RadialDensity::new(
                n,
                vec![0.0; n],
                SymMat::identity(n).scale(r2),
                amp,
                Shape::CompactQuad { m },
                tag,
            )?))
        } else {
            let mu = 2.0 / (1.0 - alpha);
            let r2 = dcoef / (1.0 - alpha);
            let amp = r2.powf(-nf / 2.0)
                * (log_gamma(mu)? - log_gamma(mu - nf / 2.0)?).exp()
                / PI.powf(nf / 2.0);
            Ok(Density::Radial(RadialDensity::new(
                n,
                vec![0.0; n],
                SymMat::identity(n).scale(r2),
                amp,
                Shape::HeavyQuad { mu },
                tag,
            )?))
        }
    }

    /// Generalized Gaussian `g_{lambda,K}` with covariance `K`, for
    /// `lambda > n/(n+2)` (`lambda = 1` degenerates to the Gaussian).
    pub fn g_lambda(n: usize, lambda: f64, k: SymMat) -> Result<Density> {
        let nf = n as f64;
        if !(lambda > nf / (nf + 2.0)) {
            return Err(Error::Region(format!(
                "g_lambda needs lambda > n/(n+2) = {}, got {lambda}",
                nf / (nf + 2.0)
            )));
        }
        if (lambda - 1.0).abs() < tol::ALPHA_ONE {
            return Self::gaussian(n, k);
        }
        let (_, sqrt_det_k) = check_pd(&k)?;
        let beta = 1.0 / ((nf + 2.0) * lambda - nf);
        let tag = FamilyTag::GLambda { lambda };
        if lambda > 1.0 {
            let c = (lambda - 1.0) * beta;
            let m = 1.0 / (lambda - 1.0);
            let amp = (log_gamma(lambda / (lambda - 1.0) + nf / 2.0)?
                - log_gamma(lambda / (lambda - 1.0))?)
            .exp()
                * c.powf(nf / 2.0)
                / (PI.powf(nf / 2.0) * sqrt_det_k);
            Ok(Density::Radial(RadialDensity::new(
                n,
                vec![0.0; n],
                k.scale(1.0 / c),
                amp,
                Shape::CompactQuad { m },
                tag,
            )?))
        } else {
            let c = (1.0 - lambda) * beta;
            let mu = 1.0 / (1.0 - lambda);
            let amp = (log_gamma(mu)? - log_gamma(mu - nf / 2.0)?).exp()
                * c.powf(nf / 2.0)
                / (PI.powf(nf / 2.0) * sqrt_det_k);
            Ok(Density::Radial(RadialDensity::new(
                n,
                vec![0.0; n],
                k.scale(1.0 / c),
                amp,
                Shape::HeavyQuad { mu },
                tag,
            )?))
        }
    }

    /// Extremal density built from an ODE ground state:
    /// `p = (b^n / M) u^(2/alpha)(|b x + c|)`.
    pub fn profile_density(sol: Arc<ProfileSolution>, b: f64, c: Vec<f64>) -> Result<Density> {
        if !(b > 0.0) {
            return Err(Error::Domain("profile_density needs b > 0".into()));
        }
        let n = sol.n;
        if c.len() != n {
            return Err(Error::Domain("center dimension mismatch".into()));
        }
        let alpha = sol.alpha;
        let pow = 2.0 / alpha;
        let amp = b.powi(n as i32) / sol.ms_density;
        let center: Vec<f64> = c.iter().map(|ci| -ci / b).collect();
        Ok(Density::Radial(RadialDensity::new(
            n,
            center,
            SymMat::identity(n).scale(1.0 / (b * b)),
            amp,
            Shape::Profile { sol, pow },
            FamilyTag::ProfileExtremal { alpha },
        )?))
    }

    /// 1-D grid density from uniform samples; renormalizes mass drift up to
    /// 1e-3 and rejects anything worse.
    pub fn grid_1d(x0: f64, h: f64, values: Vec<f64>) -> Result<Density> {
        if !(h > 0.0) {
            return Err(Error::Domain("grid spacing must be positive".into()));
        }
        if values.len() < 8 {
            return Err(Error::Domain("grid needs at least 8 samples".into()));
        }
        if values.iter().any(|v| *v < 0.0 || !v.is_finite()) {
            return Err(Error::Domain("grid values must be finite and nonnegative".into()));
        }
        let mut g = GridDensity { x0, h, p: values };
        let mass = g.mass();
        if (mass - 1.0).abs() > 1e-3 {
            return Err(Error::Domain(format!(
                "grid mass {mass} deviates from 1 by more than 1e-3"
            )));
        }
        for v in &mut g.p {
            *v /= mass;
        }
        Ok(Density::Grid(g))
    }
}

/// Solves for the Barenblatt normalizer `C` by bisection on the mass, with
/// quadrature inside (tolerance 1e-10 on `int p - 1`).
pub fn barenblatt_normalizer(n: usize, alpha: f64) -> Result<f64> {
    let mass = |c: f64| -> Result<f64> {
        let d = Density::barenblatt_with(n, alpha, c)?;
        d.mass_power(1.0, tol::QUAD_NORM)
    };
    let mut lo = 1e-6;
    let mut hi = 1e6;
    let increasing = mass(1e-3)? < mass(1.0)?;
    let f_lo = mass(lo)? - 1.0;
    let f_hi = mass(hi)? - 1.0;
    if (f_lo > 0.0) == (f_hi > 0.0) {
        return Err(Error::Nonconvergence {
            what: format!("Barenblatt normalizer bracket for n={n}, alpha={alpha}"),
            best: 1.0,
            error: f64::INFINITY,
        });
    }
    for _ in 0..200 {
        let mid = (lo * hi).sqrt();
        let f_mid = mass(mid)? - 1.0;
        if f_mid.abs() <= 1e-10 {
            return Ok(mid);
        }
        let go_up = if increasing { f_mid < 0.0 } else { f_mid > 0.0 };
        if go_up {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo * hi).sqrt())
}

/// Closed-form second moment of the unit-mass Barenblatt profile, used as a
/// cross-check oracle against quadrature.
pub fn barenblatt_second_moment(n: usize, alpha: f64) -> Result<f64> {
    let nf = n as f64;
    let c = barenblatt_normalizer(n, alpha)?;
    if alpha > 1.0 {
        let m = 1.0 / (alpha - 1.0);
        Ok(c * (nf / 2.0) / (m + nf / 2.0 + 1.0))
    } else {
        let mu = 1.0 / (1.0 - alpha);
        Ok(c * (nf / 2.0) / (mu - nf / 2.0 - 1.0))
    }
}

// ---- density spec mini-language -------------------------------------------

/// Parses `family:name(key=value,...)` or `grid:path.csv`.
pub fn parse_density_spec(spec: &str) -> Result<Density> {
    if let Some(path) = spec.strip_prefix("grid:") {
        return grid_from_csv(path);
    }
    let body = spec
        .strip_prefix("family:")
        .ok_or_else(|| Error::Parse(format!("density spec must start with 'family:' or 'grid:', got '{spec}'")))?;
    let open = body
        .find('(')
        .ok_or_else(|| Error::Parse("missing '(' in family spec".into()))?;
    if !body.ends_with(')') {
        return Err(Error::Parse("missing ')' in family spec".into()));
    }
    let name = &body[..open];
    let args = &body[open + 1..body.len() - 1];
    let mut kv = std::collections::BTreeMap::new();
    for part in args.split(',').filter(|s| !s.trim().is_empty()) {
        let mut it = part.splitn(2, '=');
        let key = it.next().unwrap().trim().to_string();
        let val: f64 = it
            .next()
            .ok_or_else(|| Error::Parse(format!("expected key=value, got '{part}'")))?
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad number in '{part}'")))?;
        kv.insert(key, val);
    }
    let get = |k: &str, default: f64| kv.get(k).copied().unwrap_or(default);
    let need = |k: &str| -> Result<f64> {
        kv.get(k)
            .copied()
            .ok_or_else(|| Error::Parse(format!("family '{name}' requires parameter '{k}'")))
    };
    let dim = get("dim", 1.0) as usize;
    match name {
        "cos_power" => Density::cos_power(need("alpha")?, get("b", 1.0), get("c", 0.0)),
        "cosh_power" => Density::cosh_power(need("alpha")?, get("b", 1.0), get("c", 0.0)),
        "two_sided_exp" => Density::two_sided_exp(get("b", 1.0), get("c", 0.0)),
        "uniform_interval" => Density::uniform_interval(get("b", 1.0), get("c", 0.0)),
        "gaussian" => {
            let var = get("var", 1.0);
            Density::gaussian(dim, SymMat::identity(dim).scale(var))
        }
        "max_renyi" => {
            let k = SymMat::identity(dim).scale(get("k", 1.0));
            Density::max_renyi(dim, need("alpha")?, k)
        }
        "barenblatt" => Density::barenblatt(dim, need("alpha")?),
        "sobolev_extremal" => {
            Density::sobolev_extremal(dim, get("b", 1.0), vec![0.0; dim])
        }
        "g" => {
            if dim == 1 {
                Density::g_1d(need("alpha")?)
            } else {
                Density::g_nd(dim, need("alpha")?)
            }
        }
        "g_lambda" => {
            let k = SymMat::identity(dim).scale(get("k", 1.0));
            Density::g_lambda(dim, need("lambda")?, k)
        }
        "profile" => {
            let sol = crate::profiles::solve_profile(dim, need("alpha")?)?;
            Density::profile_density(sol, get("b", 1.0), vec![get("c", 0.0); dim])
        }
        other => Err(Error::Parse(format!("unknown density family '{other}'"))),
    }
}

/// Loads a two-column `x,p` CSV with uniform x spacing.
pub fn grid_from_csv(path: &str) -> Result<Density> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read '{path}': {e}")))?;
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or_else(|| Error::Parse("empty grid CSV".into()))?;
    if header.trim().to_lowercase().replace(' ', "") != "x,p" {
        return Err(Error::Parse(format!("grid CSV must have header 'x,p', got '{header}'")));
    }
    let mut xs = Vec::new();
    let mut ps = Vec::new();
    for (ln, line) in lines.enumerate() {
        let mut it = line.split(',');
        let x: f64 = it
            .next()
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| Error::Parse(format!("bad x at data row {}", ln + 1)))?;
        let p: f64 = it
            .next()
            .and_then(|s| s.trim().parse().ok())
            .ok_or_else(|| Error::Parse(format!("bad p at data row {}", ln + 1)))?;
        xs.push(x);
        ps.push(p);
    }
    if xs.len() < 8 {
        return Err(Error::Parse("grid CSV needs at least 8 rows".into()));
    }
    let h = xs[1] - xs[0];
    for w in xs.windows(2) {
        if ((w[1] - w[0]) - h).abs() > 1e-9 * h.abs().max(1.0) {
            return Err(Error::Parse("grid CSV x spacing is not uniform".into()));
        }
    }
    Density::grid_1d(xs[0], h, ps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rel_gap;

    fn mass(d: &Density) -> f64 {
        d.mass_power(1.0, tol::QUAD_NORM).unwrap()
    }

    #[test]
    fn all_families_normalized() {
        let k2 = SymMat::from_rows(2, vec![1.0, 0.2, 0.2, 2.0]).unwrap();
        let densities = vec![
            Density::cos_power(2.0, 1.0, 0.0).unwrap(),
            Density::cos_power(3.0, 2.0, 0.5).unwrap(),
            Density::cosh_power(0.5, 1.0, 0.0).unwrap(),
            Density::two_sided_exp(1.0, 0.0).unwrap(),
            Density::uniform_interval(1.0, 0.3).unwrap(),
            Density::gaussian_1d(1.0).unwrap(),
            Density::gaussian(2, k2.clone()).unwrap(),
            Density::max_renyi(1, 2.0, SymMat::scalar(1.0)).unwrap(),
            Density::max_renyi(1, 0.8, SymMat::scalar(2.0)).unwrap(),
            Density::max_renyi(2, 1.5, k2.clone()).unwrap(),
            Density::barenblatt(1, 2.0).unwrap(),
            Density::barenblatt(1, 0.8).unwrap(),
            Density::barenblatt(2, 1.5).unwrap(),
            Density::sobolev_extremal(3, 1.0, vec![0.0; 3]).unwrap(),
            Density::g_1d(2.0).unwrap(),
            Density::g_1d(0.5).unwrap(),
            Density::g_nd(2, 1.5).unwrap(),
            Density::g_nd(3, 2.0).unwrap(),
            Density::g_lambda(1, 1.5, SymMat::scalar(1.0)).unwrap(),
            Density::g_lambda(2, 1.5, SymMat::diag(&[1.0, 2.0])).unwrap(),
        ];
        for d in &densities {
            let m = mass(d);
            assert!(
                (m - 1.0).abs() < 1e-8,
                "mass {m} for {:?}",
                d.tag()
            );
        }
    }

    #[test]
    fn cosh_power_half_is_quartic_sech() {
        // alpha = 1/2: exponent -2/(1-a) = -4 and normalizer 3/4
        let d = Density::cosh_power(0.5, 1.0, 0.0).unwrap();
        for &x in &[0.0, 0.7, -1.9] {
            assert!(rel_gap(d.value(&[x]), 0.75 / x.cosh().powi(4)) < 1e-14);
        }
    }

    #[test]
    fn barenblatt_normalizer_closed_form_1d() {
        // alpha = 2, n = 1: int (C - x^2)_+ dx = 4/3 C^(3/2) = 1
        let c = barenblatt_normalizer(1, 2.0).unwrap();
        assert!(rel_gap(c, (0.75_f64).powf(2.0 / 3.0)) < 1e-9, "C = {c}");
    }

    #[test]
    fn barenblatt_second_moment_quadrature_matches_closed_form() {
        for (n, alpha) in [(1usize, 2.0), (1usize, 0.8), (2usize, 1.5)] {
            let d = Density::barenblatt(n, alpha).unwrap();
            let s2 = d.second_moment(tol::QUAD_NORM).unwrap();
            let cf = barenblatt_second_moment(n, alpha).unwrap();
            assert!(rel_gap(s2, cf) < 1e-8, "n={n} alpha={alpha}: {s2} vs {cf}");
        }
    }

    #[test]
    fn max_renyi_covariance_is_k() {
        let cases: Vec<(usize, f64, SymMat)> = vec![
            (1, 0.8, SymMat::scalar(1.0)),
            (1, 2.0, SymMat::scalar(1.0)),
            (2, 1.5, SymMat::from_rows(2, vec![1.5, 0.3, 0.3, 0.8]).unwrap()),
        ];
        for (n, alpha, k) in cases {
            let d = Density::max_renyi(n, alpha, k.clone()).unwrap();
            let cov = d.covariance(tol::QUAD_NORM).unwrap();
            for i in 0..n {
                for j in 0..n {
                    assert!(
                        (cov.get(i, j) - k.get(i, j)).abs() < 1e-6,
                        "n={n} alpha={alpha} ({i},{j}): {} vs {}",
                        cov.get(i, j),
                        k.get(i, j)
                    );
                }
            }
        }
    }

    #[test]
    fn g_lambda_and_max_renyi_same_family() {
        // with lambda = alpha and matching covariance the two constructions
        // coincide pointwise
        let k = SymMat::scalar(1.0);
        let a = Density::max_renyi(1, 2.0, k.clone()).unwrap();
        let b = Density::g_lambda(1, 2.0, k).unwrap();
        for &x in &[0.0, 0.3, 0.9, 1.7, 2.2] {
            assert!(
                (a.value(&[x]) - b.value(&[x])).abs() < 1e-12,
                "x={x}: {} vs {}",
                a.value(&[x]),
                b.value(&[x])
            );
        }
        let k = SymMat::from_rows(2, vec![1.0, 0.1, 0.1, 2.0]).unwrap();
        let a = Density::max_renyi(2, 1.5, k.clone()).unwrap();
        let b = Density::g_lambda(2, 1.5, k).unwrap();
        for &x in &[[0.0, 0.0], [0.4, -0.6], [1.2, 0.8]] {
            assert!((a.value(&x) - b.value(&x)).abs() < 1e-12);
        }
    }

    #[test]
    fn gradients_match_finite_differences() {
        let densities = vec![
            Density::cos_power(2.0, 1.0, 0.3).unwrap(),
            Density::cosh_power(0.6, 1.5, -0.2).unwrap(),
            Density::gaussian_1d(2.0).unwrap(),
            Density::barenblatt(1, 1.7).unwrap(),
            Density::g_1d(0.5).unwrap(),
            Density::sobolev_extremal(3, 1.0, vec![0.1, 0.0, -0.2]).unwrap(),
        ];
        for d in &densities {
            let n = d.dim();
            let r = d.as_radial().unwrap();
            for k in 0..100 {
                // probe points well inside the support
                let t = -0.9 + 1.8 * (k as f64 + 0.5) / 100.0;
                let x: Vec<f64> = (0..n)
                    .map(|i| r.center[i] + t * r.scale.get(i, i).sqrt() * 0.8 / (i + 1) as f64)
                    .collect();
                if d.value(&x) < 1e-8 {
                    continue;
                }
                let grad = d.gradient(&x);
                for i in 0..n {
                    let h = 1e-5 * (1.0 + x[i].abs());
                    let mut xp = x.clone();
                    let mut xm = x.clone();
                    xp[i] += h;
                    xm[i] -= h;
                    let fd = (d.value(&xp) - d.value(&xm)) / (2.0 * h);
                    let denom = grad[i].abs().max(1e-4);
                    assert!(
                        (grad[i] - fd).abs() / denom < 1e-5,
                        "{:?} at {:?}: {} vs {}",
                        d.tag(),
                        x,
                        grad[i],
                        fd
                    );
                }
            }
        }
    }

    #[test]
    fn scaling_law_second_moment() {
        for d in [
            Density::gaussian_1d(1.0).unwrap(),
            Density::two_sided_exp(1.0, 0.0).unwrap(),
            Density::cos_power(2.0, 1.0, 0.0).unwrap(),
        ] {
            let s0 = d.second_moment(tol::QUAD_NORM).unwrap();
            for &a in &[0.5, 2.0] {
                let da = d.scaled(a).unwrap();
                let sa = da.second_moment(tol::QUAD_NORM).unwrap();
                assert!(rel_gap(sa, a * a * s0) < 1e-8, "a={a}: {sa} vs {}", a * a * s0);
            }
        }
    }

    #[test]
    fn uniform_and_gaussian_moments() {
        // uniform on [-pi/2, pi/2]: sigma2 = pi^2/12
        let d = Density::uniform_interval(1.0, 0.0).unwrap();
        assert!(rel_gap(d.second_moment(tol::QUAD_NORM).unwrap(), PI * PI / 12.0) < 1e-9);
        let d = Density::gaussian(2, SymMat::identity(2)).unwrap();
        assert!(rel_gap(d.second_moment(tol::QUAD_NORM).unwrap(), 2.0) < 1e-9);
        let cov = d.covariance(tol::QUAD_NORM).unwrap();
        assert!((cov.get(0, 0) - 1.0).abs() < 1e-9 && cov.get(0, 1).abs() < 1e-12);
    }

    #[test]
    fn grid_roundtrip_and_moments() {
        let d = Density::gaussian_1d(1.0).unwrap();
        let g = d.to_grid(0.01).unwrap();
        assert!((g.mass() - 1.0).abs() < 1e-9);
        assert!((g.variance() - 1.0).abs() < 1e-8);
        let s = g.shannon_integral();
        assert!(rel_gap(s, 0.5 * (2.0 * PI * std::f64::consts::E).ln()) < 1e-8);
    }

    #[test]
    fn parser_accepts_and_rejects() {
        assert!(parse_density_spec("family:cos_power(alpha=2,b=1,c=0)").is_ok());
        assert!(parse_density_spec("family:gaussian(var=2)").is_ok());
        assert!(parse_density_spec("family:barenblatt(alpha=1.5,dim=2)").is_ok());
        assert!(parse_density_spec("family:nope(x=1)").is_err());
        assert!(parse_density_spec("cos_power(alpha=2)").is_err());
        assert!(parse_density_spec("family:cos_power(alpha=0.5)").is_err());
        // region errors name the constraint
        let err = Density::max_renyi(3, 0.5, SymMat::identity(3)).unwrap_err();
        assert!(err.to_string().contains("n/(n+2)"));
    }

    #[test]
    fn uniform_fisher_diverges() {
        let d = Density::uniform_interval(1.0, 0.0).unwrap();
        assert!(matches!(
            d.fisher_integral(0.0, tol::QUAD_FUNCTIONAL),
            Err(Error::Divergence(_))
        ));
    }
}
