use serde::Serialize;

use super::{generate, Instance, Model, ModelParams};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CalibrationOptions {
    pub max_iters: usize,
    /// Accepted relative error of the realized average degree.
    pub tolerance: f64,
    pub initial_scale: f64,
    pub workers: usize,
}

impl Default for CalibrationOptions {
    fn default() -> Self {
        Self {
            max_iters: 8,
            tolerance: 0.05,
            initial_scale: 1.0,
            workers: 0,
        }
    }
}

/// Outcome of [`calibrate_avg_degree`]: the last scale tried and its instance.
#[derive(Debug, Clone)]
pub struct Calibration {
    pub scale: f64,
    pub realized_avg: f64,
    pub iterations: usize,
    pub converged: bool,
    pub instance: Instance,
}

/// Fits the kernel scale `c` so that the realized average degree hits
/// `params.target_avg_degree`.
///
/// Every probe generates a full instance from the same seed. The first probe
/// uses `initial_scale`; its proportional correction and a factor 4 on the far
/// side form the bracket, which is widened until it straddles the target and
/// then narrowed by interpolation in log-log space (bisection when that stalls).
/// The search stops at `max_iters` probes or once within `tolerance`, and
/// returns the last probe.
///
/// RGGs have no scale: their radius follows from the target in closed form.
pub fn calibrate_avg_degree(params: &ModelParams, opts: &CalibrationOptions) -> Result<Calibration> {
    params.validate()?;
    if params.model == Model::Rgg {
        let instance = generate(params, 1.0, opts.workers)?;
        return Ok(Calibration {
            scale: 1.0,
            realized_avg: instance.graph.average_degree(),
            iterations: 1,
            converged: true,
            instance,
        });
    }
    let target = params
        .target_avg_degree
        .ok_or_else(|| Error::param("calibration needs a target average degree"))?;
    if params.n < 2 || target >= (params.n - 1) as f64 {
        return Err(Error::param(format!(
            "target average degree {target} is unattainable with n = {}",
            params.n
        )));
    }
    if !(opts.initial_scale > 0.0) || opts.max_iters == 0 {
        return Err(Error::param(
            "calibration needs a positive initial scale and max_iters >= 1",
        ));
    }

    let mut iterations = 0;
    let probe = |c: f64, iterations: &mut usize| -> Result<(f64, Instance)> {
        *iterations += 1;
        let inst = generate(params, c, opts.workers)?;
        Ok((inst.graph.average_degree(), inst))
    };
    let close = |avg: f64| (avg - target).abs() <= opts.tolerance * target;
    let done = |c: f64, avg: f64, inst: Instance, iterations: usize| Calibration {
        scale: c,
        realized_avg: avg,
        iterations,
        converged: close(avg),
        instance: inst,
    };

    let mut c = opts.initial_scale;
    let (mut avg, mut inst) = probe(c, &mut iterations)?;
    if close(avg) || opts.max_iters == 1 {
        return Ok(done(c, avg, inst, 1));
    }

    // (scale, avg) with avg below / above target
    let mut lo: Option<(f64, f64)> = None;
    let mut hi: Option<(f64, f64)> = None;
    let record = |c: f64, avg: f64, lo: &mut Option<(f64, f64)>, hi: &mut Option<(f64, f64)>| {
        if avg < target {
            *lo = Some((c, avg));
        } else {
            *hi = Some((c, avg));
        }
    };
    record(c, avg, &mut lo, &mut hi);
    let mut next = if avg > 0.0 { c * target / avg } else { c * 4.0 };

    while iterations < opts.max_iters {
        c = next;
        (avg, inst) = probe(c, &mut iterations)?;
        if close(avg) {
            break;
        }
        record(c, avg, &mut lo, &mut hi);
        next = match (lo, hi) {
            (Some((cl, al)), Some((ch, ah))) => {
                let mid = (cl * ch).sqrt();
                if al > 0.0 && ah > al {
                    let t = (target.ln() - al.ln()) / (ah.ln() - al.ln());
                    let guess = (cl.ln() + t * (ch.ln() - cl.ln())).exp();
                    // keep strictly inside the bracket, away from its ends
                    let (a, b) = (
                        (cl.ln() * 0.9 + ch.ln() * 0.1).exp(),
                        (cl.ln() * 0.1 + ch.ln() * 0.9).exp(),
                    );
                    if guess.is_finite() && guess > a && guess < b {
                        guess
                    } else {
                        mid
                    }
                } else {
                    mid
                }
            }
            (Some((cl, _)), None) => cl * 4.0,
            (None, Some((ch, _))) => ch / 4.0,
            (None, None) => unreachable!("every probe lands on one side"),
        };
    }
    Ok(done(c, avg, inst, iterations))
}

#[cfg(test)]
mod tests {
    use super::super::Alpha;
    use super::*;

    #[test]
    fn exact_prior_scale_is_accepted_at_once() {
        let p = ModelParams::new(Model::ChungLu, 5000).avg_degree(10.0).seed(3);
        let first = calibrate_avg_degree(&p, &CalibrationOptions::default()).unwrap();
        assert!(first.converged);
        let p2 = p.clone().avg_degree(first.realized_avg);
        let opts = CalibrationOptions {
            initial_scale: first.scale,
            ..Default::default()
        };
        let again = calibrate_avg_degree(&p2, &opts).unwrap();
        assert_eq!(again.iterations, 1);
        assert_eq!(again.scale, first.scale);
    }

    #[test]
    fn hits_target_for_tunable_geometric_model() {
        let p = ModelParams::new(Model::Tgirg, 20_000)
            .sigma(1.6)
            .alpha(Alpha::Finite(1.43))
            .avg_degree(15.0)
            .seed(5);
        let cal = calibrate_avg_degree(&p, &CalibrationOptions::default()).unwrap();
        assert!((13.5..=16.5).contains(&cal.realized_avg), "{}", cal.realized_avg);
    }

    #[test]
    fn unattainable_target_is_an_error() {
        let p = ModelParams::new(Model::ChungLu, 10).avg_degree(9.0);
        assert!(calibrate_avg_degree(&p, &CalibrationOptions::default()).is_err());
    }

    #[test]
    fn rgg_needs_no_search() {
        let p = ModelParams::new(Model::Rgg, 4000).dim(1).avg_degree(10.0);
        let cal = calibrate_avg_degree(&p, &CalibrationOptions::default()).unwrap();
        assert_eq!(cal.iterations, 1);
        assert!((cal.realized_avg - 10.0).abs() < 1.0);
    }
}
