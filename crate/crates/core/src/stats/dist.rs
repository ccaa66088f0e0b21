//! Student-t distribution from the regularized incomplete beta function.

/// Continued-fraction iteration cap.
pub const MAX_ITERATIONS: usize = 300;
/// Relative convergence tolerance of the continued fraction.
pub const TOLERANCE: f64 = 1e-14;

const TINY: f64 = 1e-300;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Natural log of the gamma function for `x > 0` (Lanczos, g = 7, n = 9).
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        // reflection
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut a = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    let t = x + LANCZOS_G + 0.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + a.ln()
}

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
#[error("incomplete beta continued fraction did not converge for a={a}, b={b}, x={x}")]
pub struct NoConvergence {
    pub a: f64,
    pub b: f64,
    pub x: f64,
}

/// Modified Lentz evaluation of the incomplete beta continued fraction.
fn beta_continued_fraction(a: f64, b: f64, x: f64) -> Result<f64, NoConvergence> {
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let clamp = |v: f64| if v.abs() < TINY { TINY } else { v };
    let mut c = 1.0;
    let mut d = 1.0 / clamp(1.0 - qab * x / qap);
    let mut h = d;
    for m in 1..=MAX_ITERATIONS {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 / clamp(1.0 + aa * d);
        c = clamp(1.0 + aa / c);
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 / clamp(1.0 + aa * d);
        c = clamp(1.0 + aa / c);
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < TOLERANCE {
            return Ok(h);
        }
    }
    Err(NoConvergence { a, b, x })
}

/// Regularized incomplete beta I_x(a, b) for `a, b > 0`, `x` in [0, 1].
pub fn regularized_incomplete_beta(a: f64, b: f64, x: f64) -> Result<f64, NoConvergence> {
    if x <= 0.0 {
        return Ok(0.0);
    }
    if x >= 1.0 {
        return Ok(1.0);
    }
    let ln_front = ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b) + a * x.ln() + b * (1.0 - x).ln();
    let front = ln_front.exp();
    if x < (a + 1.0) / (a + b + 2.0) {
        Ok(front * beta_continued_fraction(a, b, x)? / a)
    } else {
        Ok(1.0 - front * beta_continued_fraction(b, a, 1.0 - x)? / b)
    }
}

/// Lower-tail probability of Student's t with `df` degrees of freedom.
pub fn t_cdf(t: f64, df: u64) -> f64 {
    assert!(df >= 1, "degrees of freedom must be positive");
    if t == 0.0 {
        return 0.5;
    }
    if t.is_infinite() {
        return if t > 0.0 { 1.0 } else { 0.0 };
    }
    let nu = df as f64;
    let x = nu / (nu + t * t);
    let ib = regularized_incomplete_beta(nu / 2.0, 0.5, x).unwrap_or_else(|e| {
        log::warn!("{e}");
        f64::NAN
    });
    let tail = 0.5 * ib;
    if t > 0.0 {
        1.0 - tail
    } else {
        tail
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_values() {
        assert!((ln_gamma(1.0)).abs() < 1e-14);
        assert!((ln_gamma(0.5) - std::f64::consts::PI.sqrt().ln()).abs() < 1e-14);
        // 10! = 3628800
        assert!((ln_gamma(11.0) - 3_628_800f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn df1_is_cauchy() {
        for t in [-50.0, -5.0, -1.0, -0.3, 0.0, 0.7, 1.0, 2.5, 50.0] {
            let exact = 0.5 + f64::atan(t) / std::f64::consts::PI;
            assert!((t_cdf(t, 1) - exact).abs() < 1e-12, "t={t}");
        }
    }

    #[test]
    fn df2_closed_form() {
        for t in [-5.0f64, -1.0, 0.5, 3.0] {
            let exact = 0.5 + t / (2.0 * (2.0 + t * t).sqrt());
            assert!((t_cdf(t, 2) - exact).abs() < 1e-12, "t={t}");
        }
    }

    #[test]
    fn beta_endpoints_and_symmetry() {
        assert_eq!(regularized_incomplete_beta(2.0, 3.0, 0.0).unwrap(), 0.0);
        assert_eq!(regularized_incomplete_beta(2.0, 3.0, 1.0).unwrap(), 1.0);
        let a = regularized_incomplete_beta(2.5, 4.0, 0.3).unwrap();
        let b = regularized_incomplete_beta(4.0, 2.5, 0.7).unwrap();
        assert!((a + b - 1.0).abs() < 1e-14);
        // I_x(1, 1) = x
        assert!((regularized_incomplete_beta(1.0, 1.0, 0.42).unwrap() - 0.42).abs() < 1e-14);
    }
}
