//! Chi-square upper tail via the regularized incomplete gamma function.

use super::GlmError;

const MAX_ITER: usize = 300;
const EPS: f64 = 1e-16;
/// Near the smallest normal positive double; keeps the Lentz recurrence away
/// from zero denominators.
const TINY: f64 = 1e-300;

/// Upper-tail probability of the chi-square distribution:
/// `P(X > x)` for `X ~ chi2(df)`, i.e. `Q(df/2, x/2)`.
///
/// Absolute error is below 1e-10 across the usable range; at `df = 2` this
/// reduces to `exp(-x/2)` exactly.
pub fn chi_square_sf(x: f64, df: u32) -> Result<f64, GlmError> {
    if df == 0 {
        return Err(GlmError::InvalidDegreesOfFreedom(df));
    }
    if !x.is_finite() {
        if x.is_nan() {
            return Err(GlmError::NonFiniteInput("chi_square_sf statistic"));
        }
        return Ok(if x > 0.0 { 0.0 } else { 1.0 });
    }
    if x <= 0.0 {
        return Ok(1.0);
    }
    Ok(reg_gamma_q(f64::from(df) / 2.0, x / 2.0))
}

/// Regularized upper incomplete gamma Q(a, s) = Γ(a, s) / Γ(a).
///
/// Series expansion of P(a, s) when s < a + 1, continued fraction for Q(a, s)
/// otherwise; both converge rapidly in their regime.
fn reg_gamma_q(a: f64, s: f64) -> f64 {
    if s <= 0.0 {
        return 1.0;
    }
    if s < a + 1.0 {
        1.0 - lower_series(a, s)
    } else {
        upper_continued_fraction(a, s)
    }
}

/// P(a, s) by the power series s^a e^-s / Γ(a+1) · Σ s^n / ((a+1)…(a+n)).
fn lower_series(a: f64, s: f64) -> f64 {
    let mut ap = a;
    let mut term = 1.0 / a;
    let mut sum = term;
    for _ in 0..MAX_ITER {
        ap += 1.0;
        term *= s / ap;
        sum += term;
        if term.abs() < sum.abs() * EPS {
            break;
        }
    }
    sum * (a * s.ln() - s - ln_gamma(a)).exp()
}

/// Q(a, s) by the modified Lentz continued fraction.
fn upper_continued_fraction(a: f64, s: f64) -> f64 {
    let mut b = s + 1.0 - a;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..=MAX_ITER {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < EPS {
            break;
        }
    }
    h * (a * s.ln() - s - ln_gamma(a)).exp()
}

/// Natural log of the gamma function (Lanczos, g = 7, 9 coefficients).
pub fn ln_gamma(x: f64) -> f64 {
    const COEFFS: [f64; 8] = [
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_1,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        // Reflection: Γ(x)Γ(1-x) = π / sin(πx)
        let pi = std::f64::consts::PI;
        return pi.ln() - (pi * x).sin().ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = 0.999_999_999_999_809_9;
    for (i, &c) in COEFFS.iter().enumerate() {
        acc += c / (x + i as f64 + 1.0);
    }
    let t = x + 7.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}
