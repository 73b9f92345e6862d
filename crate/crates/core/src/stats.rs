//! Small statistical toolkit for the validation suites.

use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF, StudentsT};

use crate::error::{Error, Result};

/// Least-squares line `y = intercept + slope x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub slope_stderr: f64,
    pub points: usize,
}

impl LinearFit {
    /// Two-sided p-value for `slope == 0`.
    pub fn p_value_two_sided(&self) -> f64 {
        let t = self.slope / self.slope_stderr;
        let df = (self.points - 2) as f64;
        if !t.is_finite() {
            return if self.slope == 0.0 { 1.0 } else { 0.0 };
        }
        let dist = StudentsT::new(0.0, 1.0, df).expect("df > 0");
        2.0 * dist.cdf(-t.abs())
    }

    /// One-sided p-value for `slope <= 0` against `slope > 0`.
    pub fn p_value_positive(&self) -> f64 {
        let t = self.slope / self.slope_stderr;
        if !t.is_finite() {
            return if self.slope > 0.0 { 0.0 } else { 1.0 };
        }
        let dist = StudentsT::new(0.0, 1.0, (self.points - 2) as f64).expect("df > 0");
        1.0 - dist.cdf(t)
    }
}

pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Result<LinearFit> {
    let n = xs.len();
    if n != ys.len() {
        return Err(Error::param("x and y differ in length"));
    }
    if n < 3 {
        return Err(Error::Insufficient(format!("{n} points; a line fit needs at least 3")));
    }
    let nf = n as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if !(sxx > 0.0) {
        return Err(Error::Insufficient("all x values coincide".into()));
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| {
            let e = y - intercept - slope * x;
            e * e
        })
        .sum();
    let slope_stderr = (rss / (nf - 2.0) / sxx).sqrt();
    Ok(LinearFit {
        slope,
        intercept,
        slope_stderr,
        points: n,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TestOutcome {
    pub statistic: f64,
    pub dof: f64,
    pub p_value: f64,
}

/// Chi-square test that two count histograms come from the same distribution.
///
/// Adjacent bins are merged from the left until every merged bin has an
/// expected count of at least 5 in both samples.
pub fn chi_square_homogeneity(a: &[u64], b: &[u64]) -> Result<TestOutcome> {
    let len = a.len().max(b.len());
    let at = |h: &[u64], i: usize| h.get(i).copied().unwrap_or(0) as f64;
    let na: f64 = a.iter().sum::<u64>() as f64;
    let nb: f64 = b.iter().sum::<u64>() as f64;
    if na == 0.0 || nb == 0.0 {
        return Err(Error::Insufficient("empty histogram".into()));
    }
    let total = na + nb;
    let mut merged: Vec<(f64, f64)> = Vec::new();
    let mut cur = (0.0, 0.0);
    for i in 0..len {
        cur.0 += at(a, i);
        cur.1 += at(b, i);
        let col = cur.0 + cur.1;
        if col * na.min(nb) / total >= 5.0 {
            merged.push(cur);
            cur = (0.0, 0.0);
        }
    }
    if cur.0 + cur.1 > 0.0 {
        match merged.last_mut() {
            Some(last) => {
                last.0 += cur.0;
                last.1 += cur.1;
            }
            None => merged.push(cur),
        }
    }
    if merged.len() < 2 {
        return Err(Error::Insufficient("fewer than two bins after merging".into()));
    }
    let mut stat = 0.0;
    for &(x, y) in &merged {
        let col = x + y;
        let ea = col * na / total;
        let eb = col * nb / total;
        stat += (x - ea).powi(2) / ea + (y - eb).powi(2) / eb;
    }
    let dof = (merged.len() - 1) as f64;
    let p = 1.0 - ChiSquared::new(dof).expect("dof > 0").cdf(stat);
    Ok(TestOutcome {
        statistic: stat,
        dof,
        p_value: p,
    })
}

/// Two-sided paired t-test of `mean(a - b) == 0`.
pub fn paired_t_test(a: &[f64], b: &[f64]) -> Result<TestOutcome> {
    if a.len() != b.len() {
        return Err(Error::param("paired samples differ in length"));
    }
    let n = a.len();
    if n < 2 {
        return Err(Error::Insufficient("a paired t-test needs two pairs".into()));
    }
    let diffs: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    let (mean, sd) = mean_sd(&diffs);
    let dof = (n - 1) as f64;
    let se = sd / (n as f64).sqrt();
    let (t, p) = if se == 0.0 {
        if mean == 0.0 {
            (0.0, 1.0)
        } else {
            (f64::INFINITY.copysign(mean), 0.0)
        }
    } else {
        let t = mean / se;
        let dist = StudentsT::new(0.0, 1.0, dof).expect("dof > 0");
        (t, 2.0 * dist.cdf(-t.abs()))
    };
    Ok(TestOutcome {
        statistic: t,
        dof,
        p_value: p,
    })
}

/// Sample mean and standard deviation (`n - 1` denominator; 0 for one value).
pub fn mean_sd(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() == 1 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}
