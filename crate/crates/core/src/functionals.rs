//! Information functionals of a density, all evaluated by quadrature.
//!
//! `alpha = 1` is a dedicated branch wherever `1/(1-alpha)` appears
//! (Shannon entropy, Tsallis entropy); the Fisher-type integrals need no
//! branch because their formulas are already regular there.  Fisher
//! integrands are restricted to the positivity set `{p > 1e-300}` and rely
//! on the singularity exponents and tail envelopes published by the density
//! families.

use crate::density::Density;
use crate::linalg::SymMat;
use crate::{rel_gap, tol, Error, Result};

/// Renyi entropy `h_a = log(int p^a) / (1-a)`; Shannon entropy at `a = 1`.
pub fn renyi_entropy(d: &Density, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0) {
        return Err(Error::Domain(format!("Renyi order must be positive, got {alpha}")));
    }
    if (alpha - 1.0).abs() < tol::ALPHA_ONE {
        return d.shannon_integral(tol::QUAD_FUNCTIONAL);
    }
    let m = d.mass_power(alpha, tol::QUAD_FUNCTIONAL)?;
    if !(m > 0.0) || !m.is_finite() {
        return Err(Error::Divergence(format!("int p^{alpha} evaluated to {m}")));
    }
    Ok(m.ln() / (1.0 - alpha))
}

/// Renyi entropy power `N_a = exp(2 h_a / n)`.
pub fn renyi_entropy_power(d: &Density, alpha: f64) -> Result<f64> {
    Ok((2.0 / d.dim() as f64 * renyi_entropy(d, alpha)?).exp())
}

/// Savare-Toscani entropy power `~N_a = exp((2/n + a - 1) h_a)`,
/// related to `N_a` by `N_a = ~N_a^(2/(n(a-1)+2))`.
pub fn savare_toscani_entropy_power(d: &Density, alpha: f64) -> Result<f64> {
    let n = d.dim() as f64;
    Ok(((2.0 / n + alpha - 1.0) * renyi_entropy(d, alpha)?).exp())
}

/// Renyi-Fisher information `I_a = a int |grad p|^2 p^(a-2) / int p^a`.
pub fn renyi_fisher(d: &Density, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0) {
        return Err(Error::Domain(format!("Renyi order must be positive, got {alpha}")));
    }
    let num = d.fisher_integral(alpha - 2.0, tol::QUAD_FUNCTIONAL)?;
    if (alpha - 1.0).abs() < tol::ALPHA_ONE {
        return Ok(num); // int p = 1
    }
    Ok(alpha * num / d.mass_power(alpha, tol::QUAD_FUNCTIONAL)?)
}

/// Tsallis-Fisher information `^I_a = a int |grad p|^2 p^(a-2)`.
pub fn tsallis_fisher(d: &Density, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0) {
        return Err(Error::Domain(format!("order must be positive, got {alpha}")));
    }
    Ok(alpha * d.fisher_integral(alpha - 2.0, tol::QUAD_FUNCTIONAL)?)
}

/// Matrix Tsallis-Fisher information `a int grad p (grad p)^T p^(a-2)`.
pub fn tsallis_fisher_matrix(d: &Density, alpha: f64) -> Result<SymMat> {
    if !(alpha > 0.0) {
        return Err(Error::Domain(format!("order must be positive, got {alpha}")));
    }
    Ok(d.fisher_matrix_integral(alpha - 2.0, tol::QUAD_FUNCTIONAL)?.scale(alpha))
}

/// `lambda`-Fisher information matrix
/// `^J_l = int grad p (grad p)^T p^(2l-3) / int p^l`.
pub fn lambda_fisher_matrix(d: &Density, lambda: f64) -> Result<SymMat> {
    if !(lambda > 0.0) {
        return Err(Error::Domain(format!("order must be positive, got {lambda}")));
    }
    let m = d.mass_power(lambda, tol::QUAD_FUNCTIONAL)?;
    Ok(d.fisher_matrix_integral(2.0 * lambda - 3.0, tol::QUAD_FUNCTIONAL)?.scale(1.0 / m))
}

/// Weighted Renyi-Fisher information
/// `~I_a = int |grad p^a|^2 p^-1 / int p^a = a^2 int |grad p|^2 p^(2a-3) / int p^a`;
/// classic Fisher information at `a = 1`.
pub fn weighted_fisher(d: &Density, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0) {
        return Err(Error::Domain(format!("order must be positive, got {alpha}")));
    }
    if (alpha - 1.0).abs() < tol::ALPHA_ONE {
        return renyi_fisher(d, 1.0);
    }
    let num = d.fisher_integral(2.0 * alpha - 3.0, tol::QUAD_FUNCTIONAL)?;
    Ok(alpha * alpha * num / d.mass_power(alpha, tol::QUAD_FUNCTIONAL)?)
}

/// Tsallis entropy `^h_a = (int p^a - 1) / (1-a)`; Shannon at `a = 1`.
pub fn tsallis_entropy(d: &Density, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0) {
        return Err(Error::Domain(format!("order must be positive, got {alpha}")));
    }
    if (alpha - 1.0).abs() < tol::ALPHA_ONE {
        return d.shannon_integral(tol::QUAD_FUNCTIONAL);
    }
    Ok((d.mass_power(alpha, tol::QUAD_FUNCTIONAL)? - 1.0) / (1.0 - alpha))
}

/// Fisher information of the logarithmic order-2 Tsallis entropy:
/// `script_I2 = ^I_2 / ^h_2`, defined under the standing assumption
/// `int p^2 < 1`.
pub fn log_tsallis_fisher2(d: &Density) -> Result<f64> {
    let m2 = d.mass_power(2.0, tol::QUAD_FUNCTIONAL)?;
    if m2 >= 1.0 {
        return Err(Error::Condition(format!(
            "int p^2 = {m2} >= 1; logarithmic Tsallis functionals undefined"
        )));
    }
    let hat_i2 = tsallis_fisher(d, 2.0)?;
    Ok(hat_i2 / (1.0 - m2))
}

/// The generalized Fisher pair at `p = q = 2`:
/// `Phi_{2,l} = int |p^(l-2) grad p|^2 p dx` and `phi_{2,l} = Phi^(1/(2l))`.
/// At `l = (a+1)/2` these satisfy `Phi = ^I_a / a` and
/// `phi = (^I_a / a)^(1/(a+1))`.
pub fn phi_functionals(d: &Density, lambda: f64) -> Result<(f64, f64)> {
    if !(lambda > 1.0 / 3.0) {
        return Err(Error::Region(format!("phi functionals need lambda > 1/3, got {lambda}")));
    }
    let big_phi = d.fisher_integral(2.0 * lambda - 3.0, tol::QUAD_FUNCTIONAL)?;
    Ok((big_phi.powf(1.0 / (2.0 * lambda)), big_phi))
}

/// Residual of the substitution identity
/// `I_a(p) = (4/a) int |f'|^2 / int f^2` with `f = p^(a/2)`, dimension one.
/// The right side is integrated pointwise (values and gradients queried at
/// line positions), independently of the radial reduction used by `I_a`.
pub fn substitution_identity_residual(d: &Density, alpha: f64) -> Result<f64> {
    if d.dim() != 1 {
        return Err(Error::Domain("substitution identity check is 1-D only".into()));
    }
    let route1 = renyi_fisher(d, alpha)?;
    let route2 = match d {
        Density::Radial(_) => {
            let num = pointwise_line_integral(d, alpha, |p, dp| {
                (alpha / 2.0).powi(2) * p.powf(alpha - 2.0) * dp * dp
            })?;
            let den = pointwise_line_integral(d, alpha, |p, _| p.powf(alpha))?;
            4.0 / alpha * num / den
        }
        Density::Grid(g) => {
            // discretize f = p^(a/2) and differentiate it on the grid
            let f: Vec<f64> = g.p.iter().map(|p| p.powf(alpha / 2.0)).collect();
            let fg = crate::density::GridDensity { x0: g.x0, h: g.h, p: f };
            let num = fg.fisher_integral(0.0);
            let den = fg.mass_power(2.0);
            4.0 / alpha * num / den
        }
    };
    Ok((route1 - route2).abs())
}

/// Integrates `w(p(x), p'(x))` over the line for a 1-D analytic density,
/// choosing the window so that integrands comparable to `p^min(alpha,1)`
/// are below tolerance outside it.
fn pointwise_line_integral<W>(d: &Density, alpha: f64, w: W) -> Result<f64>
where
    W: Fn(f64, f64) -> f64,
{
    let r = d.as_radial().expect("pointwise integral needs an analytic density");
    let (lo, hi, compact) = r.pointwise_window(alpha.min(1.0));
    let integrand = |x: f64| {
        let p = d.value(&[x]);
        if p <= 1e-300 {
            return 0.0;
        }
        let dp = d.gradient(&[x])[0];
        w(p, dp)
    };
    let hint = if compact {
        // generic conservative hint; the true exponent depends on w
        Some(0.5)
    } else {
        None
    };
    Ok(crate::quadrature::integrate_interval_singular(
        integrand,
        lo,
        hi,
        tol::QUAD_FUNCTIONAL,
        hint,
        hint,
    )?
    .value)
}

/// One row of the functional table exposed through the CLI.
#[derive(Debug, Clone)]
pub struct FunctionalValue {
    pub kind: &'static str,
    pub value: f64,
}

/// Evaluates the full scalar functional table at one order.
pub fn functional_table(d: &Density, alpha: f64) -> Result<Vec<FunctionalValue>> {
    let h = renyi_entropy(d, alpha)?;
    let n_pow = renyi_entropy_power(d, alpha)?;
    let nt = savare_toscani_entropy_power(d, alpha)?;
    let hh = tsallis_entropy(d, alpha)?;
    let mut rows = vec![
        FunctionalValue { kind: "h_alpha", value: h },
        FunctionalValue { kind: "N_alpha", value: n_pow },
        FunctionalValue { kind: "N_tilde_alpha", value: nt },
        FunctionalValue { kind: "h_hat_alpha", value: hh },
    ];
    match renyi_fisher(d, alpha) {
        Ok(i) => {
            rows.push(FunctionalValue { kind: "I_alpha", value: i });
            rows.push(FunctionalValue { kind: "N_times_I", value: n_pow * i });
        }
        Err(Error::Divergence(_)) => {
            rows.push(FunctionalValue { kind: "I_alpha", value: f64::INFINITY });
        }
        Err(e) => return Err(e),
    }
    if let Ok(hat) = tsallis_fisher(d, alpha) {
        rows.push(FunctionalValue { kind: "I_hat_alpha", value: hat });
    }
    if let Ok(wt) = weighted_fisher(d, alpha) {
        rows.push(FunctionalValue { kind: "I_tilde_alpha", value: wt });
    }
    if let Ok(s2) = d.second_moment(tol::QUAD_FUNCTIONAL) {
        rows.push(FunctionalValue { kind: "sigma2", value: s2 });
    }
    Ok(rows)
}

/// Consistency gate: two quantities that must agree to the closed-form rung.
pub fn cross_check(label: &str, a: f64, b: f64) -> Result<()> {
    if rel_gap(a, b) > tol::CLOSED_VS_QUAD {
        return Err(Error::CrossCheck(format!("{label}: {a} vs {b}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::Density;
    use crate::linalg::SymMat;
    use std::f64::consts::{E, PI};

    #[test]
    fn uniform_unit_interval_entropies() {
        // uniform on [0,1]: h_a = 0 for every order, ^h_a = 0
        let d = Density::uniform_interval(PI, -PI / 2.0).unwrap();
        for &a in &[0.5, 1.0, 2.0, 5.0] {
            assert!(renyi_entropy(&d, a).unwrap().abs() < 1e-9);
        }
        assert!(tsallis_entropy(&d, 2.0).unwrap().abs() < 1e-9);
        assert!((renyi_entropy_power(&d, 2.0).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn gaussian_entropy_anchors() {
        let d = Density::gaussian_1d(1.0).unwrap();
        // h_2 = ln(2 sqrt(pi)) from int p^2 = 1/(2 sqrt(pi))
        assert!(crate::rel_gap(renyi_entropy(&d, 2.0).unwrap(), (2.0 * PI.sqrt()).ln()) < 1e-9);
        // Shannon branch
        assert!(
            crate::rel_gap(renyi_entropy(&d, 1.0).unwrap(), 0.5 * (2.0 * PI * E).ln()) < 1e-9
        );
        // N_a = 2 pi s^2 a^(1/(a-1))
        for &(var, a) in &[(1.0, 2.0), (2.0, 0.5), (0.5, 3.0)] {
            let d = Density::gaussian_1d(var).unwrap();
            let expect = 2.0 * PI * var * (a_f(a)).exp();
            assert!(crate::rel_gap(renyi_entropy_power(&d, a).unwrap(), expect) < 1e-9);
        }
        fn a_f(a: f64) -> f64 {
            a.ln() / (a - 1.0)
        }
    }

    #[test]
    fn gaussian_fisher_alpha_independent() {
        for &var in &[0.5, 1.0, 4.0] {
            let d = Density::gaussian_1d(var).unwrap();
            for &a in &[0.5, 1.0, 2.0, 5.0] {
                let i = renyi_fisher(&d, a).unwrap();
                assert!(
                    (i - 1.0 / var).abs() * var < 1e-8,
                    "var={var} alpha={a}: {i}"
                );
            }
        }
    }

    #[test]
    fn tsallis_definitional_identities() {
        let d = Density::gaussian_1d(1.0).unwrap();
        for &a in &[0.5, 2.0, 3.0] {
            let hat = tsallis_fisher(&d, a).unwrap();
            let i = renyi_fisher(&d, a).unwrap();
            let m = d.mass_power(a, 1e-10).unwrap();
            assert!(crate::rel_gap(hat, i * m) < 1e-8);
            // trace of the matrix version equals the scalar
            let mat = tsallis_fisher_matrix(&d, a).unwrap();
            assert!(crate::rel_gap(mat.trace(), hat) < 1e-8);
        }
        // ^I_2(N(0,1)) = I_2 * int p^2 = 1/(2 sqrt(pi))
        let hat2 = tsallis_fisher(&d, 2.0).unwrap();
        assert!(crate::rel_gap(hat2, 1.0 / (2.0 * PI.sqrt())) < 1e-8);
    }

    #[test]
    fn weighted_fisher_barenblatt_closed_form() {
        // ~I_a(B_a) = 2 a n / |a-1|
        for (n, alpha) in [(1usize, 2.0), (1usize, 0.8), (2usize, 1.5)] {
            let d = Density::barenblatt(n, alpha).unwrap();
            let w = weighted_fisher(&d, alpha).unwrap();
            let expect = 2.0 * alpha * n as f64 / (alpha - 1.0).abs();
            assert!(
                crate::rel_gap(w, expect) < 1e-7,
                "n={n} alpha={alpha}: {w} vs {expect}"
            );
        }
        // a = 1 reduces to classic Fisher information
        let d = Density::gaussian_1d(2.0).unwrap();
        assert!(crate::rel_gap(weighted_fisher(&d, 1.0).unwrap(), 0.5) < 1e-8);
    }

    #[test]
    fn log_tsallis_identities() {
        // I_2 = ^I_2 / (1 - ^h_2) and script_I2 = ^I_2 / ^h_2
        let d = Density::gaussian_1d(4.0).unwrap();
        let m2 = d.mass_power(2.0, 1e-10).unwrap();
        assert!(m2 < 1.0);
        let hat_h = tsallis_entropy(&d, 2.0).unwrap();
        assert!(crate::rel_gap(hat_h, 1.0 - m2) < 1e-9);
        let i2 = renyi_fisher(&d, 2.0).unwrap();
        let hat_i2 = tsallis_fisher(&d, 2.0).unwrap();
        assert!(crate::rel_gap(i2, hat_i2 / (1.0 - hat_h)) < 1e-8);
        let script = log_tsallis_fisher2(&d).unwrap();
        assert!(crate::rel_gap(script, hat_i2 / hat_h) < 1e-8);
        // condition guard: a sharply peaked density has int p^2 >= 1
        let peaked = Density::gaussian_1d(0.05).unwrap();
        assert!(matches!(log_tsallis_fisher2(&peaked), Err(Error::Condition(_))));
    }

    #[test]
    fn phi_identity_chain() {
        // ^I_a = a Phi_{2,(a+1)/2} = a phi^(a+1)
        for d in [
            Density::gaussian_1d(1.0).unwrap(),
            Density::cos_power(2.0, 1.0, 0.0).unwrap(),
            Density::cosh_power(0.5, 1.0, 0.0).unwrap(),
        ] {
            for &a in &[0.8, 2.0] {
                let lambda = (a + 1.0) / 2.0;
                let (phi, big) = phi_functionals(&d, lambda).unwrap();
                let hat = tsallis_fisher(&d, a).unwrap();
                assert!(crate::rel_gap(hat, a * big) < 1e-8);
                assert!(crate::rel_gap(hat, a * phi.powf(a + 1.0)) < 1e-8);
            }
        }
        // lambda = 1: Phi = classic Fisher information
        let d = Density::gaussian_1d(1.0).unwrap();
        let (_, big) = phi_functionals(&d, 1.0).unwrap();
        assert!(crate::rel_gap(big, 1.0) < 1e-8);
        assert!(phi_functionals(&d, 0.2).is_err());
    }

    #[test]
    fn substitution_identity_examples() {
        for (d, a) in [
            (Density::gaussian_1d(1.0).unwrap(), 2.0),
            (Density::cos_power(3.0, 1.0, 0.0).unwrap(), 3.0),
            (Density::cosh_power(0.5, 1.0, 0.0).unwrap(), 0.5),
        ] {
            let resid = substitution_identity_residual(&d, a).unwrap();
            assert!(resid <= 1e-8, "alpha={a}: residual {resid}");
        }
    }

    #[test]
    fn entropy_power_relation() {
        // N_a = ~N_a^(2/(n(a-1)+2)) on several densities and orders
        for (d, n) in [
            (Density::gaussian_1d(1.0).unwrap(), 1.0),
            (Density::barenblatt(2, 1.5).unwrap(), 2.0),
            (Density::g_nd(3, 2.0).unwrap(), 3.0),
        ] {
            for &a in &[0.9, 1.5, 2.0] {
                if a <= n / (n + 2.0) {
                    continue;
                }
                let np = renyi_entropy_power(&d, a).unwrap();
                let nt = savare_toscani_entropy_power(&d, a).unwrap();
                let expect = nt.powf(2.0 / (n * (a - 1.0) + 2.0));
                assert!(crate::rel_gap(np, expect) < 1e-10, "n={n} a={a}");
            }
        }
    }

    #[test]
    fn entropy_monotone_in_alpha() {
        let d = Density::gaussian_1d(1.0).unwrap();
        let grid = [0.3, 0.6, 0.9, 1.0, 1.4, 2.0, 3.5, 6.0];
        let hs: Vec<f64> = grid.iter().map(|&a| renyi_entropy(&d, a).unwrap()).collect();
        for w in hs.windows(2) {
            assert!(w[1] < w[0] + 1e-10, "h_a must be nonincreasing in a: {w:?}");
        }
    }

    #[test]
    fn scale_covariance_and_translation() {
        let d = Density::cosh_power(0.5, 1.0, 0.0).unwrap();
        let alpha = 0.5;
        let h0 = renyi_entropy(&d, alpha).unwrap();
        let n0 = renyi_entropy_power(&d, alpha).unwrap();
        let i0 = renyi_fisher(&d, alpha).unwrap();
        for &a in &[0.5, 2.0, 5.0] {
            let da = d.scaled(a).unwrap();
            assert!((renyi_entropy(&da, alpha).unwrap() - (h0 + a.ln())).abs() < 1e-8);
            assert!(crate::rel_gap(renyi_entropy_power(&da, alpha).unwrap(), a * a * n0) < 1e-8);
            assert!(crate::rel_gap(renyi_fisher(&da, alpha).unwrap(), i0 / (a * a)) < 1e-8);
            let p0 = n0 * i0;
            let pa = renyi_entropy_power(&da, alpha).unwrap() * renyi_fisher(&da, alpha).unwrap();
            assert!(crate::rel_gap(pa, p0) < 1e-8);
        }
        let dt = d.translated(&[1.3]).unwrap();
        assert!((renyi_entropy(&dt, alpha).unwrap() - h0).abs() < 1e-9);
        assert!(crate::rel_gap(renyi_fisher(&dt, alpha).unwrap(), i0) < 1e-9);
    }

    #[test]
    fn matrix_fisher_psd_on_anisotropic_gaussian() {
        let cov = SymMat::from_rows(2, vec![1.0, 0.4, 0.4, 2.0]).unwrap();
        let d = Density::gaussian(2, cov).unwrap();
        let m = tsallis_fisher_matrix(&d, 2.0).unwrap();
        let ev = m.eigenvalues();
        assert!(ev[0] >= -1e-10 * m.trace());
    }

    #[test]
    fn two_sided_exp_small_alpha_product() {
        // alpha N_a I_a = 4 a^(-2a/(1-a)) for the two-sided exponential
        let d = Density::two_sided_exp(1.0, 0.0).unwrap();
        let a = 0.05;
        let prod = a * renyi_entropy_power(&d, a).unwrap() * renyi_fisher(&d, a).unwrap();
        let expect = 4.0 * (-2.0 * a / (1.0 - a) * a.ln()).exp();
        assert!(crate::rel_gap(prod, expect) < 1e-7, "{prod} vs {expect}");
    }
}
