//! Adaptive Dormand–Prince 5(4) integration of autonomous systems `y' = f(y)`.

use thiserror::Error;

use crate::scalar::{fmax, fmin, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct OdeOptions<S> {
    pub atol: S,
    pub rtol: S,
    pub max_steps: usize,
    /// Initial step; chosen from the first derivative when `None`.
    pub h_init: Option<S>,
    /// Keep every accepted state, not only the endpoint.
    pub record: bool,
}

impl<S: Scalar> Default for OdeOptions<S> {
    fn default() -> Self {
        Self {
            atol: S::lit(1e-8),
            rtol: S::zero(),
            max_steps: 100_000,
            h_init: None,
            record: true,
        }
    }
}

/// Accepted states `(t_i, y_i)`; always contains the initial and last state.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<S> {
    pub t: Vec<S>,
    pub y: Vec<Vec<S>>,
    pub rhs_evals: usize,
}

impl<S: Scalar> Trajectory<S> {
    pub fn last(&self) -> &[S] {
        self.y.last().expect("trajectory is never empty")
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OdeError<S: std::fmt::Debug, E: std::fmt::Debug> {
    #[error("step size collapsed at t = {t:?}")]
    StepSizeCollapse { t: S, partial: Trajectory<S> },
    #[error("maximum number of steps reached at t = {t:?}")]
    MaxSteps { t: S, partial: Trajectory<S> },
    /// The right-hand side stopped the integration (an event).
    #[error("right-hand side signalled at t = {t:?}: {signal:?}")]
    Stopped {
        t: S,
        signal: E,
        partial: Trajectory<S>,
    },
}

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// fifth-order weights minus embedded fourth-order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

fn combo<S: Scalar>(y: &[S], h: S, terms: &[(f64, &[S])]) -> Vec<S> {
    let mut out = y.to_vec();
    for &(c, k) in terms {
        if c == 0.0 {
            continue;
        }
        let hc = h * S::lit(c);
        for (o, &ki) in out.iter_mut().zip(k) {
            *o += hc * ki;
        }
    }
    out
}

/// Integrates `y' = f(y)` from `t = 0` to `t_end`.
///
/// `f` may return `Err` to stop the integration; the error is reported as
/// [`OdeError::Stopped`] together with the trajectory up to the last accepted
/// state.
pub fn dopri5<S, E, F>(
    mut f: F,
    y0: &[S],
    t_end: S,
    opts: &OdeOptions<S>,
) -> Result<Trajectory<S>, OdeError<S, E>>
where
    S: Scalar,
    E: std::fmt::Debug,
    F: FnMut(&[S]) -> Result<Vec<S>, E>,
{
    let mut traj = Trajectory {
        t: vec![S::zero()],
        y: vec![y0.to_vec()],
        rhs_evals: 0,
    };
    if t_end <= S::zero() {
        return Ok(traj);
    }
    let mut t = S::zero();
    let mut y = y0.to_vec();
    let mut evals = 0usize;
    macro_rules! eval {
        ($x:expr) => {{
            evals += 1;
            match f($x) {
                Ok(v) => v,
                Err(signal) => {
                    traj.rhs_evals = evals;
                    if !opts.record {
                        traj.t = vec![t];
                        traj.y = vec![y.clone()];
                    }
                    return Err(OdeError::Stopped {
                        t,
                        signal,
                        partial: traj,
                    });
                }
            }
        }};
    }
    let mut k1 = eval!(&y);
    let err_norm = |e: &[S], a: &[S], b: &[S]| -> S {
        let mut m = S::zero();
        for ((&ei, &ai), &bi) in e.iter().zip(a).zip(b) {
            let sc = opts.atol + opts.rtol * fmax(ai.abs(), bi.abs());
            m = fmax(m, (ei / sc).abs());
        }
        m
    };
    let mut h = match opts.h_init {
        Some(h) => h,
        None => {
            let d0 = y.iter().fold(S::zero(), |m, v| fmax(m, v.abs()));
            let d1 = k1.iter().fold(S::zero(), |m, v| fmax(m, v.abs()));
            if d1 <= S::lit(1e-300) {
                t_end
            } else {
                let guess = S::lit(0.01) * fmax(d0, S::one()) / d1;
                fmin(guess, t_end)
            }
        }
    };
    let h_min = t_end * S::lit(1e-14);
    let mut steps = 0usize;
    while t < t_end {
        if steps >= opts.max_steps {
            traj.rhs_evals = evals;
            return Err(OdeError::MaxSteps { t, partial: traj });
        }
        steps += 1;
        if t + h > t_end {
            h = t_end - t;
        }
        let y2 = combo(&y, h, &[(A21, &k1)]);
        let k2 = eval!(&y2);
        let y3 = combo(&y, h, &[(A31, &k1), (A32, &k2)]);
        let k3 = eval!(&y3);
        let y4 = combo(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]);
        let k4 = eval!(&y4);
        let y5 = combo(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]);
        let k5 = eval!(&y5);
        let y6 = combo(
            &y,
            h,
            &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
        );
        let k6 = eval!(&y6);
        let ynew = combo(
            &y,
            h,
            &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)],
        );
        let k7 = eval!(&ynew);
        let zero = vec![S::zero(); y.len()];
        let errv = combo(
            &zero,
            h,
            &[
                (E1, &k1),
                (E3, &k3),
                (E4, &k4),
                (E5, &k5),
                (E6, &k6),
                (E7, &k7),
            ],
        );
        let err = err_norm(&errv, &y, &ynew);
        if err <= S::one() {
            t = if t + h >= t_end { t_end } else { t + h };
            y = ynew;
            k1 = k7;
            if opts.record {
                traj.t.push(t);
                traj.y.push(y.clone());
            }
        }
        let factor = if err == S::zero() {
            S::lit(5.0)
        } else {
            fmin(
                S::lit(5.0),
                fmax(S::lit(0.2), S::lit(0.9) * err.powf(S::lit(-0.2))),
            )
        };
        h = h * factor;
        if h < h_min && t < t_end {
            traj.rhs_evals = evals;
            if !opts.record {
                traj.t = vec![t];
                traj.y = vec![y];
            }
            return Err(OdeError::StepSizeCollapse { t, partial: traj });
        }
    }
    if !opts.record {
        traj.t.push(t);
        traj.y.push(y);
    }
    traj.rhs_evals = evals;
    Ok(traj)
}
