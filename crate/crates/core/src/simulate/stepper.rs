use super::{IntegratorConfig, Method, DIVERGENCE_THRESHOLD};

pub(super) struct Run {
    pub times: Vec<f64>,
    pub states: Vec<[f64; 3]>,
    pub diverged: bool,
}

/// State with a per-component running compensation, so that long runs of
/// small increments do not lose low-order bits.
#[derive(Clone, Copy)]
struct Compensated {
    value: [f64; 3],
    carry: [f64; 3],
}

impl Compensated {
    fn add(&mut self, delta: [f64; 3]) {
        for ((v, c), d) in self.value.iter_mut().zip(&mut self.carry).zip(delta) {
            let y = d - *c;
            let t = *v + y;
            *c = (t - *v) - y;
            *v = t;
        }
    }
}

fn axpy(x: &[f64; 3], a: f64, k: &[f64; 3]) -> [f64; 3] {
    [x[0] + a * k[0], x[1] + a * k[1], x[2] + a * k[2]]
}

fn escaped(x: &[f64; 3]) -> bool {
    let norm = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
    // NaN counts as escaped.
    norm.is_nan() || norm > DIVERGENCE_THRESHOLD
}

pub(super) fn run(f: impl Fn(&[f64; 3]) -> [f64; 3], x0: [f64; 3], cfg: &IntegratorConfig) -> Run {
    match cfg.method {
        Method::Rk4 => rk4(f, x0, cfg),
        Method::Rk45 => dopri(f, x0, cfg),
    }
}

fn rk4(f: impl Fn(&[f64; 3]) -> [f64; 3], x0: [f64; 3], cfg: &IntegratorConfig) -> Run {
    let span = cfg.t_end - cfg.t_start;
    let full = (span / cfg.step * (1.0 + 1e-12)).floor() as usize;
    let remainder = span - full as f64 * cfg.step;
    let steps = if remainder > 1e-12 * span { full + 1 } else { full };
    let mut run = Run { times: vec![cfg.t_start], states: vec![x0], diverged: false };
    let mut x = Compensated { value: x0, carry: [0.0; 3] };
    for i in 1..=steps {
        let t = if i == steps { cfg.t_end } else { cfg.t_start + i as f64 * cfg.step };
        let h = t - run.times[i - 1];
        let xv = x.value;
        let k1 = f(&xv);
        let k2 = f(&axpy(&xv, h / 2.0, &k1));
        let k3 = f(&axpy(&xv, h / 2.0, &k2));
        let k4 = f(&axpy(&xv, h, &k3));
        let delta = std::array::from_fn(|j| h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]));
        x.add(delta);
        if escaped(&x.value) {
            run.diverged = true;
            break;
        }
        run.times.push(t);
        run.states.push(x.value);
    }
    run
}

const A: [[f64; 6]; 6] = [
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

/// Dormand-Prince 5(4) with a standard step-size controller.
fn dopri(f: impl Fn(&[f64; 3]) -> [f64; 3], x0: [f64; 3], cfg: &IntegratorConfig) -> Run {
    let mut run = Run { times: vec![cfg.t_start], states: vec![x0], diverged: false };
    let mut t = cfg.t_start;
    let mut x = x0;
    let mut h = cfg.step.min(cfg.t_end - cfg.t_start);
    let min_step = 1e-14 * (cfg.t_end - cfg.t_start).max(cfg.t_start.abs());
    while t < cfg.t_end {
        let last = t + h >= cfg.t_end;
        if last {
            h = cfg.t_end - t;
        }
        let mut k = [[0.0; 3]; 7];
        k[0] = f(&x);
        for s in 1..7 {
            let xs = std::array::from_fn(|j| x[j] + h * (0..s).map(|r| A[s - 1][r] * k[r][j]).sum::<f64>());
            k[s] = f(&xs);
        }
        let x5: [f64; 3] = std::array::from_fn(|j| x[j] + h * (0..7).map(|r| B5[r] * k[r][j]).sum::<f64>());
        let x4: [f64; 3] = std::array::from_fn(|j| x[j] + h * (0..7).map(|r| B4[r] * k[r][j]).sum::<f64>());
        let err = ((0..3)
            .map(|j| {
                let scale = cfg.abs_tol + cfg.rel_tol * x[j].abs().max(x5[j].abs());
                ((x5[j] - x4[j]) / scale).powi(2)
            })
            .sum::<f64>()
            / 3.0)
            .sqrt();
        if !err.is_finite() {
            run.diverged = true;
            break;
        }
        if err <= 1.0 {
            t = if last { cfg.t_end } else { t + h };
            x = x5;
            if escaped(&x) {
                run.diverged = true;
                break;
            }
            run.times.push(t);
            run.states.push(x);
        }
        let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        h *= factor;
        if h < min_step {
            run.diverged = true;
            break;
        }
    }
    run
}
