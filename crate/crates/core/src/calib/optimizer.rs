//! Small dense optimizers on the unit box `[0, 1]^N`.

#[derive(Debug, Clone, PartialEq)]
pub struct NmOutcome<const N: usize> {
    pub point: [f64; N],
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

fn project<const N: usize>(u: [f64; N]) -> [f64; N] {
    u.map(|x| x.clamp(0.0, 1.0))
}

fn combine<const N: usize>(a: &[f64; N], b: &[f64; N], t: f64) -> [f64; N] {
    // a + t (b − a)
    project(std::array::from_fn(|i| a[i] + t * (b[i] - a[i])))
}

/// Nelder-Mead with every trial vertex projected onto the box. Stops when
/// the spread of values over the simplex is at most `f_tol` or the simplex
/// has collapsed below `1e-12` in every coordinate.
pub fn nelder_mead<const N: usize>(
    f: &mut impl FnMut(&[f64; N]) -> f64,
    start: [f64; N],
    step: f64,
    max_iter: usize,
    f_tol: f64,
) -> NmOutcome<N> {
    let start = project(start);
    let mut simplex: Vec<([f64; N], f64)> = Vec::with_capacity(N + 1);
    simplex.push((start, f(&start)));
    for i in 0..N {
        let mut v = start;
        v[i] = if v[i] + step <= 1.0 { v[i] + step } else { v[i] - step };
        let v = project(v);
        simplex.push((v, f(&v)));
    }
    let mut iterations = 0;
    let mut converged = false;
    while iterations < max_iter {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let (best, worst) = (simplex[0].1, simplex[N].1);
        let diameter = (0..N)
            .map(|i| simplex.iter().map(|v| (v.0[i] - simplex[0].0[i]).abs()).fold(0.0, f64::max))
            .fold(0.0, f64::max);
        if (worst - best).abs() <= f_tol || diameter <= 1e-12 {
            converged = true;
            break;
        }
        iterations += 1;
        let centroid: [f64; N] = std::array::from_fn(|i| simplex[..N].iter().map(|v| v.0[i]).sum::<f64>() / N as f64);
        let (xw, fw) = simplex[N];
        let xr = combine(&centroid, &xw, -1.0);
        let fr = f(&xr);
        if fr < best {
            let xe = combine(&centroid, &xw, -2.0);
            let fe = f(&xe);
            simplex[N] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < simplex[N - 1].1 {
            simplex[N] = (xr, fr);
            continue;
        }
        let (xc, fc) = if fr < fw {
            let xc = combine(&centroid, &xr, 0.5);
            (xc, f(&xc))
        } else {
            let xc = combine(&centroid, &xw, 0.5);
            (xc, f(&xc))
        };
        if fc < fw.min(fr) {
            simplex[N] = (xc, fc);
            continue;
        }
        let x0 = simplex[0].0;
        for v in simplex.iter_mut().skip(1) {
            let x = combine(&x0, &v.0, 0.5);
            *v = (x, f(&x));
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    NmOutcome { point: simplex[0].0, value: simplex[0].1, iterations, converged }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LmOutcome<const N: usize> {
    pub point: [f64; N],
    /// `Σ r²` at `point`.
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
    /// `2 Jᵀ r` at `point`, Jacobian by finite differences.
    pub gradient: [f64; N],
    /// `Σ r²` after every accepted step.
    pub trace: Vec<f64>,
}

/// Finite-difference Jacobian of `r`, central inside the box and one-sided
/// within `h` of a face.
fn jacobian<const N: usize>(
    r: &mut impl FnMut(&[f64; N]) -> Option<Vec<f64>>,
    u: &[f64; N],
    r0: &[f64],
    h: f64,
) -> Option<Vec<[f64; N]>> {
    let m = r0.len();
    let mut jac = vec![[0.0; N]; m];
    for k in 0..N {
        let (up, dn) = (u[k] + h <= 1.0, u[k] - h >= 0.0);
        let mut shifted = |d: f64| {
            let mut v = *u;
            v[k] += d;
            r(&v)
        };
        let col: Vec<f64> = match (up, dn) {
            (true, true) => {
                let (p, q) = (shifted(h)?, shifted(-h)?);
                p.iter().zip(&q).map(|(a, b)| (a - b) / (2.0 * h)).collect()
            }
            (true, false) => shifted(h)?.iter().zip(r0).map(|(a, b)| (a - b) / h).collect(),
            (false, true) => r0.iter().zip(&shifted(-h)?).map(|(a, b)| (a - b) / h).collect(),
            (false, false) => vec![0.0; m],
        };
        for (row, c) in jac.iter_mut().zip(col) {
            row[k] = c;
        }
    }
    Some(jac)
}

fn gradient<const N: usize>(jac: &[[f64; N]], r: &[f64]) -> [f64; N] {
    std::array::from_fn(|k| 2.0 * jac.iter().zip(r).map(|(row, ri)| row[k] * ri).sum::<f64>())
}

/// Solves `A x = b` for the rows/columns marked free; fixed entries of `x` are 0.
fn solve_masked<const N: usize>(a: &[[f64; N]; N], b: &[f64; N], free: &[bool; N]) -> Option<[f64; N]> {
    let idx: Vec<usize> = (0..N).filter(|&i| free[i]).collect();
    let n = idx.len();
    let mut m: Vec<Vec<f64>> = idx.iter().map(|&i| idx.iter().map(|&j| a[i][j]).chain([b[i]]).collect()).collect();
    for col in 0..n {
        let piv = (col..n).max_by(|&x, &y| m[x][col].abs().total_cmp(&m[y][col].abs()))?;
        if m[piv][col] == 0.0 || !m[piv][col].is_finite() {
            return None;
        }
        m.swap(col, piv);
        for row in col + 1..n {
            let factor = m[row][col] / m[col][col];
            for c in col..=n {
                m[row][c] -= factor * m[col][c];
            }
        }
    }
    let mut sol = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|c| m[row][c] * sol[c]).sum();
        sol[row] = (m[row][n] - s) / m[row][row];
    }
    let mut x = [0.0; N];
    for (k, &i) in idx.iter().enumerate() {
        x[i] = sol[k];
    }
    Some(x)
}

/// Bounded Levenberg-Marquardt on `Σ r(u)²`.
///
/// Coordinates sitting on a face with the gradient pushing outward are held
/// fixed for the step; trial points are projected onto the box. Returns
/// `None` when `r` fails at the start point.
pub fn levenberg_marquardt<const N: usize>(
    r: &mut impl FnMut(&[f64; N]) -> Option<Vec<f64>>,
    start: [f64; N],
    max_iter: usize,
    x_tol: f64,
    f_tol: f64,
    h: f64,
) -> Option<LmOutcome<N>> {
    let mut u = project(start);
    let mut res = r(&u)?;
    let mut value: f64 = res.iter().map(|x| x * x).sum();
    let mut lambda = 1e-3;
    let mut trace = Vec::new();
    let mut iterations = 0;
    let mut converged = value == 0.0;
    while !converged && iterations < max_iter {
        iterations += 1;
        let jac = jacobian(r, &u, &res, h)?;
        let g = gradient(&jac, &res);
        let free: [bool; N] = std::array::from_fn(|i| !((u[i] <= 0.0 && g[i] > 0.0) || (u[i] >= 1.0 && g[i] < 0.0)));
        if !free.iter().any(|&f| f) {
            converged = true;
            break;
        }
        let mut jtj = [[0.0; N]; N];
        for row in &jac {
            for i in 0..N {
                for j in 0..N {
                    jtj[i][j] += row[i] * row[j];
                }
            }
        }
        let rhs: [f64; N] = std::array::from_fn(|i| -0.5 * g[i]);
        let mut accepted = false;
        while lambda < 1e20 {
            let mut damped = jtj;
            for i in 0..N {
                damped[i][i] += lambda * jtj[i][i].max(1e-300);
            }
            let Some(step) = solve_masked(&damped, &rhs, &free) else {
                lambda *= 4.0;
                continue;
            };
            let trial = project(std::array::from_fn(|i| u[i] + step[i]));
            let trial_res = r(&trial)?;
            let trial_value: f64 = trial_res.iter().map(|x| x * x).sum();
            if trial_value < value {
                let moved = (0..N).map(|i| (trial[i] - u[i]).abs()).fold(0.0, f64::max);
                let scale = u.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
                let decrease = (value - trial_value) / value;
                u = trial;
                res = trial_res;
                value = trial_value;
                trace.push(value);
                lambda = (lambda / 3.0).max(1e-12);
                accepted = true;
                if moved <= x_tol * (scale + x_tol) || decrease <= f_tol || value == 0.0 {
                    converged = true;
                }
                break;
            }
            lambda *= 4.0;
        }
        if !accepted {
            // No descent left along any damped direction: stationary to
            // finite-difference precision.
            converged = true;
        }
    }
    let jac = jacobian(r, &u, &res, h)?;
    let g = gradient(&jac, &res);
    Some(LmOutcome { point: u, value, iterations, converged, gradient: g, trace })
}
