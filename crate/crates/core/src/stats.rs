//! Two-sample tests and summaries for comparing training methods.

use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};

/// Smallest reportable `log10 p`; anything below is reported as `p < 1e-170`.
pub const LOG10_P_FLOOR: f64 = -170.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StatTestResult {
    pub t_stat: f64,
    pub dof: f64,
    /// Two-sided `log10 p`.
    pub log10_p: f64,
    pub p_floor_applied: bool,
    pub cohens_d: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CohensD {
    /// `±∞` when the pooled deviation is zero and the means differ.
    pub d: f64,
    pub zero_spread: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub n: usize,
    pub mean: f64,
    /// Sample standard deviation (n − 1 weights); 0 for a single value.
    pub std: f64,
    pub std_err: f64,
    pub min: f64,
    pub max: f64,
}

pub fn summarize(xs: &[f64]) -> Result<Summary> {
    if xs.is_empty() {
        return Err(Error::domain("cannot summarize an empty sample"));
    }
    let n = xs.len();
    let (mean, var) = mean_var(xs);
    let std = var.sqrt();
    Ok(Summary {
        n,
        mean,
        std,
        std_err: std / (n as f64).sqrt(),
        min: xs.iter().copied().fold(f64::INFINITY, f64::min),
        max: xs.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    })
}

fn mean_var(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var)
}

fn check_samples(a: &[f64], b: &[f64]) -> Result<()> {
    if a.len() < 2 || b.len() < 2 {
        return Err(Error::domain(format!(
            "each sample needs at least 2 entries, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    if a.iter().chain(b).any(|x| !x.is_finite()) {
        return Err(Error::numeric("non-finite sample value"));
    }
    Ok(())
}

/// `(mean a − mean b) / s_pooled` with `s_pooled² = ((n_a−1)s_a² + (n_b−1)s_b²) / (n_a+n_b−2)`.
pub fn cohens_d(a: &[f64], b: &[f64]) -> Result<CohensD> {
    check_samples(a, b)?;
    let (ma, va) = mean_var(a);
    let (mb, vb) = mean_var(b);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let pooled = (((na - 1.0) * va + (nb - 1.0) * vb) / (na + nb - 2.0)).sqrt();
    let diff = ma - mb;
    if pooled == 0.0 {
        let d = if diff == 0.0 { 0.0 } else { diff.signum() * f64::INFINITY };
        return Ok(CohensD { d, zero_spread: true });
    }
    Ok(CohensD { d: diff / pooled, zero_spread: false })
}

/// Welch's unequal-variance t-test with Satterthwaite degrees of freedom.
pub fn welch_test(a: &[f64], b: &[f64]) -> Result<StatTestResult> {
    check_samples(a, b)?;
    let (ma, va) = mean_var(a);
    let (mb, vb) = mean_var(b);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let d = cohens_d(a, b)?.d;
    let (sa, sb) = (va / na, vb / nb);
    let se2 = sa + sb;
    if se2 == 0.0 {
        let dof = na + nb - 2.0;
        if ma == mb {
            return Ok(StatTestResult { t_stat: 0.0, dof, log10_p: 0.0, p_floor_applied: false, cohens_d: d });
        }
        return Ok(StatTestResult {
            t_stat: (ma - mb).signum() * f64::INFINITY,
            dof,
            log10_p: LOG10_P_FLOOR,
            p_floor_applied: true,
            cohens_d: d,
        });
    }
    let t = (ma - mb) / se2.sqrt();
    let dof = se2 * se2 / (sa * sa / (na - 1.0) + sb * sb / (nb - 1.0));
    let raw = log10_two_sided_t(t, dof);
    let (log10_p, p_floor_applied) = if raw < LOG10_P_FLOOR { (LOG10_P_FLOOR, true) } else { (raw, false) };
    Ok(StatTestResult { t_stat: t, dof, log10_p, p_floor_applied, cohens_d: d })
}

/// `log10 P(|T| > |t|)` for Student's t with `nu` degrees of freedom,
/// i.e. `log10 I_x(ν/2, 1/2)` at `x = ν/(ν+t²)`.
pub fn log10_two_sided_t(t: f64, nu: f64) -> f64 {
    if t == 0.0 {
        return 0.0;
    }
    if t.is_infinite() {
        return f64::NEG_INFINITY;
    }
    let t2 = t * t;
    let x = nu / (nu + t2);
    let one_minus_x = t2 / (nu + t2);
    ln_reg_inc_beta(nu / 2.0, 0.5, x, one_minus_x).min(0.0) / std::f64::consts::LN_10
}

/// `ln I_x(a, b)`, taking `1 − x` separately so it stays exact when `x` is tiny.
fn ln_reg_inc_beta(a: f64, b: f64, x: f64, one_minus_x: f64) -> f64 {
    if x <= 0.0 {
        return f64::NEG_INFINITY;
    }
    if one_minus_x <= 0.0 {
        return 0.0;
    }
    let ln_front = a * x.ln() + b * one_minus_x.ln() + ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b);
    if x < (a + 1.0) / (a + b + 2.0) {
        ln_front + beta_cf(a, b, x).ln() - a.ln()
    } else {
        let rest = (ln_front + beta_cf(b, a, one_minus_x).ln() - b.ln()).exp();
        (-rest).ln_1p()
    }
}

/// Continued fraction for the incomplete beta function (modified Lentz).
fn beta_cf(a: f64, b: f64, x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    const EPS: f64 = 1e-16;
    let (qab, qap, qam) = (a + b, a + 1.0, a - 1.0);
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..10_000 {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    h
}
