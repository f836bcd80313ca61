//! Gauss rules from three-term recurrences.
//!
//! Nodes are eigenvalues of the Jacobi matrix (implicit QL). Weights come
//! from the Christoffel function evaluated with a rescaled recurrence, which
//! keeps full relative accuracy for the tiny weights at the outer nodes and
//! lets callers fold `1/w(x)` into the weight without overflow.

use std::f64::consts::PI;

fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    (p1, n as f64 * (x * p1 - p0) / (x * x - 1.0))
}

/// Gauss–Legendre nodes (ascending) and weights on `[-1, 1]`, `n >= 1`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_and_derivative(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre_and_derivative(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Recurrence `x p_k = b_{k+1} p_{k+1} + a_k p_k + b_k p_{k-1}` for
/// orthonormal polynomials of a measure with total mass `mu0`.
#[derive(Clone, Debug)]
pub struct Recurrence {
    pub a: Vec<f64>,
    /// `b[0]` is unused; `b[k]` couples degrees `k-1` and `k`.
    pub b: Vec<f64>,
    pub mu0: f64,
}

/// Stieltjes procedure on a discrete measure (`points`, `masses`).
pub fn discrete_stieltjes(points: &[f64], masses: &[f64], n: usize) -> Recurrence {
    let mu0: f64 = masses.iter().sum();
    let mut a = vec![0.0; n];
    let mut b = vec![0.0; n];
    let mut prev = vec![0.0; points.len()];
    let mut cur: Vec<f64> = masses.iter().map(|m| (m / mu0).sqrt()).collect();
    for k in 0..n {
        a[k] = points.iter().zip(&cur).map(|(x, q)| x * q * q).sum();
        let mut next: Vec<f64> = points
            .iter()
            .zip(cur.iter().zip(&prev))
            .map(|(x, (q, p))| (x - a[k]) * q - b[k] * p)
            .collect();
        if k + 1 < n {
            let norm = next.iter().map(|v| v * v).sum::<f64>().sqrt();
            b[k + 1] = norm;
            next.iter_mut().for_each(|v| *v /= norm);
        }
        prev = std::mem::replace(&mut cur, next);
    }
    Recurrence { a, b, mu0 }
}

/// Eigenvalues of the symmetric tridiagonal matrix with diagonal `d` and
/// off-diagonal `e[1..]`, ascending.
pub fn tridiagonal_eigenvalues(diag: &[f64], off: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut d = diag.to_vec();
    // e[i] couples i and i+1
    let mut e: Vec<f64> = (0..n)
        .map(|i| if i + 1 < n { off[i + 1] } else { 0.0 })
        .collect();
    for l in 0..n {
        let mut iterations = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iterations += 1;
            assert!(iterations < 200, "tridiagonal QL failed to converge");
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    d.sort_by(|x, y| x.partial_cmp(y).expect("finite eigenvalues"));
    d
}

/// Gauss rule for a recurrence. Returns nodes and *scaled* weights
/// `w_i / ρ(x_i)`, where `ln ρ` is the measure's log density.
pub fn gauss_rule_scaled(
    rec: &Recurrence,
    ln_density: impl Fn(f64) -> f64,
) -> (Vec<f64>, Vec<f64>) {
    let n = rec.a.len();
    let nodes = tridiagonal_eigenvalues(&rec.a, &rec.b);
    let weights = nodes
        .iter()
        .map(|&x| {
            // ψ_k = p_k √ρ; Σψ_k² = ρ / w, so w/ρ = 1 / Σψ_k².
            // Run with unit start and carry the log scale separately.
            let mut ln_scale = 0.5 * ln_density(x) - 0.5 * rec.mu0.ln();
            let (mut prev, mut cur) = (0.0f64, 1.0f64);
            let mut sum = 1.0f64;
            for k in 0..n.saturating_sub(1) {
                let next = ((x - rec.a[k]) * cur - rec.b[k] * prev) / rec.b[k + 1];
                prev = cur;
                cur = next;
                sum += cur * cur;
                if cur.abs() > 1e100 {
                    prev *= 1e-100;
                    cur *= 1e-100;
                    sum *= 1e-200;
                    ln_scale += 100.0 * std::f64::consts::LN_10;
                }
            }
            (-sum.ln() - 2.0 * ln_scale).exp()
        })
        .collect();
    (nodes, weights)
}

/// Half-range Hermite rule: nodes `r_i > 0` and scaled weights `w_i e^{r_i²}`
/// for `∫_0^∞ e^{-r²} g(r) dr ≈ Σ w_i g(r_i)`, exact for polynomials of
/// degree below `2n`.
pub fn half_range_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    let rec = half_range_hermite_recurrence(n);
    gauss_rule_scaled(&rec, |x| -x * x)
}

const DISCRETE_PANEL_WIDTH: f64 = 0.25;
const DISCRETE_PANEL_POINTS: usize = 24;

fn half_range_hermite_recurrence(n: usize) -> Recurrence {
    // The weight has no classical recurrence; discretize it with composite
    // Gauss–Legendre on [0, R] far beyond the largest node (≈ 2√n).
    let extent = (4.0 * n as f64).sqrt() + 12.0;
    let panels = (extent / DISCRETE_PANEL_WIDTH).ceil() as usize;
    let (gl_x, gl_w) = gauss_legendre(DISCRETE_PANEL_POINTS);
    let mut points = Vec::with_capacity(panels * DISCRETE_PANEL_POINTS);
    let mut masses = Vec::with_capacity(panels * DISCRETE_PANEL_POINTS);
    for p in 0..panels {
        let left = p as f64 * DISCRETE_PANEL_WIDTH;
        for (x, w) in gl_x.iter().zip(&gl_w) {
            let r = left + 0.5 * (x + 1.0) * DISCRETE_PANEL_WIDTH;
            points.push(r);
            masses.push(0.5 * DISCRETE_PANEL_WIDTH * w * (-r * r).exp());
        }
    }
    discrete_stieltjes(&points, &masses, n)
}

/// Gauss–Laguerre rule: nodes `u_i` and scaled weights `w_i e^{u_i}`.
pub fn gauss_laguerre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let rec = Recurrence {
        a: (0..n).map(|k| (2 * k + 1) as f64).collect(),
        b: (0..n).map(|k| k as f64).collect(),
        mu0: 1.0,
    };
    gauss_rule_scaled(&rec, |u| -u)
}
