//! Nelder–Mead simplex search for unconstrained minimization.

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NelderMeadOptions {
    pub max_iters: usize,
    /// Converged once the simplex values span less than this...
    pub f_tol: f64,
    /// ...and its vertices lie within this distance of the best one.
    pub x_tol: f64,
    pub initial_step: f64,
    /// Fresh simplices built around the incumbent after convergence.
    pub polish_rounds: usize,
}

impl Default for NelderMeadOptions {
    fn default() -> Self {
        Self {
            max_iters: 2000,
            f_tol: 1e-12,
            x_tol: 1e-9,
            initial_step: 0.25,
            polish_rounds: 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
}

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

pub fn nelder_mead<F>(mut f: F, x0: &[f64], opts: &NelderMeadOptions) -> Minimum
where
    F: FnMut(&[f64]) -> f64,
{
    let mut eval = |x: &[f64]| {
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    let mut best = Minimum {
        x: x0.to_vec(),
        value: eval(x0),
        iterations: 0,
        evaluations: 1,
        converged: false,
    };
    if x0.is_empty() {
        best.converged = true;
        return best;
    }
    let mut step = opts.initial_step;
    for round in 0..=opts.polish_rounds {
        let budget = opts.max_iters.saturating_sub(best.iterations);
        if budget == 0 {
            break;
        }
        let run = simplex_run(&mut eval, &best.x, best.value, step, budget, opts);
        let improved = run.value < best.value - opts.f_tol;
        best.iterations += run.iterations;
        best.evaluations += run.evaluations;
        if run.value <= best.value {
            best.x = run.x;
            best.value = run.value;
        }
        best.converged = run.converged;
        if !run.converged || (round > 0 && !improved) {
            break;
        }
        step = (step * 0.1).max(opts.x_tol * 10.0);
    }
    best
}

fn simplex_run<F>(
    f: &mut F,
    x0: &[f64],
    f0: f64,
    step: f64,
    max_iters: usize,
    opts: &NelderMeadOptions,
) -> Minimum
where
    F: FnMut(&[f64]) -> f64,
{
    let n = x0.len();
    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    let mut values: Vec<f64> = Vec::with_capacity(n + 1);
    simplex.push(x0.to_vec());
    values.push(f0);
    for i in 0..n {
        let mut v = x0.to_vec();
        v[i] += step;
        values.push(f(&v));
        simplex.push(v);
    }
    let mut evaluations = n;
    let mut converged = false;
    let mut iterations = 0;

    while iterations < max_iters {
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();

        let spread = values[n] - values[0];
        let diameter = simplex[1..]
            .iter()
            .map(|v| distance(v, &simplex[0]))
            .fold(0.0, f64::max);
        if spread <= opts.f_tol && diameter <= opts.x_tol {
            converged = true;
            break;
        }
        iterations += 1;

        let mut centroid = vec![0.0; n];
        for v in &simplex[..n] {
            for (c, x) in centroid.iter_mut().zip(v) {
                *c += x / n as f64;
            }
        }
        let toward = |coef: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&simplex[n])
                .map(|(c, w)| c + coef * (c - w))
                .collect()
        };

        let reflected = toward(REFLECT);
        let f_r = f(&reflected);
        evaluations += 1;
        if f_r < values[0] {
            let expanded = toward(EXPAND);
            let f_e = f(&expanded);
            evaluations += 1;
            if f_e < f_r {
                simplex[n] = expanded;
                values[n] = f_e;
            } else {
                simplex[n] = reflected;
                values[n] = f_r;
            }
            continue;
        }
        if f_r < values[n - 1] {
            simplex[n] = reflected;
            values[n] = f_r;
            continue;
        }
        let (candidate, f_c) = if f_r < values[n] {
            let outside = toward(REFLECT * CONTRACT);
            let f_o = f(&outside);
            (outside, f_o)
        } else {
            let inside = toward(-CONTRACT);
            let f_i = f(&inside);
            (inside, f_i)
        };
        evaluations += 1;
        if f_c < values[n].min(f_r) {
            simplex[n] = candidate;
            values[n] = f_c;
            continue;
        }
        let best = simplex[0].clone();
        for i in 1..=n {
            for (x, b) in simplex[i].iter_mut().zip(&best) {
                *x = b + SHRINK * (*x - b);
            }
            values[i] = f(&simplex[i]);
        }
        evaluations += n;
    }

    let best = (0..=n)
        .min_by(|&a, &b| values[a].total_cmp(&values[b]))
        .expect("non-empty simplex");
    Minimum {
        x: simplex[best].clone(),
        value: values[best],
        iterations,
        evaluations,
        converged,
    }
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}
