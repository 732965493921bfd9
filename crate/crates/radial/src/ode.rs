use crate::RadialError;

/// Step control for the embedded Dormand-Prince 5(4) pair.
#[derive(Clone, Copy, Debug)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self { rtol: 1e-10, atol: 1e-12, max_steps: 1_000_000 }
    }
}

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Integrates `y' = f(t, y)` from `t0` and returns the state at each of the
/// increasing output times `t_out` (all `>= t0`); steps land exactly on outputs.
pub fn integrate<F>(f: F, t0: f64, y0: &[f64], t_out: &[f64], opts: OdeOptions) -> Result<Vec<Vec<f64>>, RadialError>
where
    F: Fn(f64, &[f64], &mut [f64]),
{
    let dim = y0.len();
    let mut y = y0.to_vec();
    let mut t = t0;
    let mut k = vec![vec![0.0; dim]; 7];
    let mut tmp = vec![0.0; dim];
    let mut y5 = vec![0.0; dim];
    let mut out = Vec::with_capacity(t_out.len());
    let span = t_out.last().map_or(0.0, |&te| te - t0).abs().max(1e-300);
    let mut h = span * 1e-3;
    let mut steps = 0usize;
    f(t, &y, &mut k[0]);
    for &target in t_out {
        if target < t {
            return Err(RadialError::Integration(format!("output time {target} precedes current time {t}")));
        }
        while t < target {
            steps += 1;
            if steps > opts.max_steps {
                return Err(RadialError::Integration(format!("step budget exhausted at t = {t}")));
            }
            let last = t + h >= target;
            let hs = if last { target - t } else { h };
            for s in 1..7 {
                for i in 0..dim {
                    let mut acc = y[i];
                    for (j, kj) in k.iter().enumerate().take(s) {
                        acc += hs * A[s][j] * kj[i];
                    }
                    tmp[i] = acc;
                }
                let (done, rest) = k.split_at_mut(s);
                let _ = done;
                f(t + C[s] * hs, &tmp, &mut rest[0]);
            }
            let mut err = 0.0f64;
            for i in 0..dim {
                let mut hi = y[i];
                let mut lo = y[i];
                for s in 0..7 {
                    hi += hs * B5[s] * k[s][i];
                    lo += hs * B4[s] * k[s][i];
                }
                y5[i] = hi;
                let sc = opts.atol + opts.rtol * y[i].abs().max(hi.abs());
                err = err.max(((hi - lo) / sc).abs());
            }
            if !err.is_finite() || y5.iter().any(|v| !v.is_finite()) {
                if hs < span * 1e-14 {
                    return Err(RadialError::Integration(format!("non-finite state near t = {t}")));
                }
                h = hs * 0.1;
                continue;
            }
            if err <= 1.0 {
                t = if last { target } else { t + hs };
                y.copy_from_slice(&y5);
                // FSAL: the last stage is the derivative at the new point.
                let (first, rest) = k.split_at_mut(6);
                first[0].copy_from_slice(&rest[0]);
            }
            let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            if !(last && err <= 1.0) {
                h = hs * fac;
            }
            if h < span * 1e-14 {
                return Err(RadialError::Integration(format!("step size underflow at t = {t}")));
            }
        }
        out.push(y.clone());
    }
    Ok(out)
}
