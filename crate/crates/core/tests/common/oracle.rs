//! Independent quadrature oracle used only by tests.
//!
//! Everything here works on raw monomial coefficient vectors and plain
//! closures and shares no code with the library's moment/projection path:
//! classical polynomials are expanded with their own recurrences, integrals
//! are composite Gauss-Legendre (in θ for the Chebyshev weight, x = cos θ).

use std::f64::consts::PI;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleWeight {
    Unit,
    InverseSqrt,
}

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut xs = vec![0.0; n];
    let mut ws = vec![0.0; n];
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 1..n {
                let p2 = ((2 * k + 1) as f64 * x * p1 - k as f64 * p0) / (k + 1) as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        xs[i] = x;
        ws[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (xs, ws)
}

/// Composite Gauss-Legendre on [a, b].
pub fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    const PIECES: usize = 24;
    let (xs, ws) = gauss_legendre(24);
    let h = (b - a) / PIECES as f64;
    let mut total = 0.0;
    for p in 0..PIECES {
        let lo = a + p as f64 * h;
        let mid = lo + 0.5 * h;
        for (x, w) in xs.iter().zip(&ws) {
            total += w * f(mid + 0.5 * h * x) * 0.5 * h;
        }
    }
    total
}

/// ∫_a^b f(x) w(x) dx over one smooth piece.
pub fn weighted_integral(f: &dyn Fn(f64) -> f64, a: f64, b: f64, weight: OracleWeight) -> f64 {
    match weight {
        OracleWeight::Unit => integrate(f, a, b),
        OracleWeight::InverseSqrt => {
            let (t0, t1) = (b.clamp(-1.0, 1.0).acos(), a.clamp(-1.0, 1.0).acos());
            integrate(&|t: f64| f(t.cos()), t0, t1)
        }
    }
}

/// Sum of weighted integrals of `f` over each interval between consecutive breakpoints.
pub fn piecewise_integral(f: &dyn Fn(f64) -> f64, breaks: &[f64], weight: OracleWeight) -> f64 {
    breaks
        .windows(2)
        .map(|w| weighted_integral(f, w[0], w[1], weight))
        .sum()
}

pub fn horner(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &ci| acc * x + ci)
}

pub fn mono_deriv(c: &[f64]) -> Vec<f64> {
    c.iter().enumerate().skip(1).map(|(k, &ck)| k as f64 * ck).collect()
}

fn add_scaled(acc: &mut Vec<f64>, v: &[f64], s: f64) {
    if acc.len() < v.len() {
        acc.resize(v.len(), 0.0);
    }
    for (a, b) in acc.iter_mut().zip(v) {
        *a += s * b;
    }
}

/// Monomial expansions of T_0..T_n.
pub fn chebyshev_monomials(n: usize) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = vec![vec![1.0]];
    if n >= 1 {
        out.push(vec![0.0, 1.0]);
    }
    for k in 1..n {
        let mut next = vec![0.0];
        next.extend(out[k].iter().map(|c| 2.0 * c));
        add_scaled(&mut next, &out[k - 1].clone(), -1.0);
        out.push(next);
    }
    out
}

/// Monomial expansions of P_0..P_n.
pub fn legendre_monomials(n: usize) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = vec![vec![1.0]];
    if n >= 1 {
        out.push(vec![0.0, 1.0]);
    }
    for k in 1..n {
        let kf = k as f64;
        let mut next = vec![0.0];
        next.extend(out[k].iter().map(|c| (2.0 * kf + 1.0) * c / (kf + 1.0)));
        add_scaled(&mut next, &out[k - 1].clone(), -kf / (kf + 1.0));
        out.push(next);
    }
    out
}

/// Classical coefficients (Chebyshev when `chebyshev`, else Legendre) to monomial.
pub fn classical_to_mono(c: &[f64], chebyshev: bool) -> Vec<f64> {
    let n = c.len().saturating_sub(1);
    let table = if chebyshev {
        chebyshev_monomials(n)
    } else {
        legendre_monomials(n)
    };
    let mut out = vec![0.0; c.len().max(1)];
    for (ck, row) in c.iter().zip(&table) {
        add_scaled(&mut out, row, *ck);
    }
    out
}

/// ⟨f, g⟩ + λ⟨f', g'⟩ on [-1, 1] for monomial-coefficient polynomials.
pub fn sobolev_inner(f: &[f64], g: &[f64], weight: OracleWeight, lambda: f64) -> f64 {
    let base = weighted_integral(&|x| horner(f, x) * horner(g, x), -1.0, 1.0, weight);
    if lambda == 0.0 {
        return base;
    }
    let (df, dg) = (mono_deriv(f), mono_deriv(g));
    base + lambda * weighted_integral(&|x| horner(&df, x) * horner(&dg, x), -1.0, 1.0, weight)
}

/// Classical Gram-Schmidt on the monomials {1, x, ..., x^d}; rows are monomial
/// coefficients scaled so that the leading coefficient matches T_i (Chebyshev
/// weight) or P_i (unit weight).
pub fn gram_schmidt_monomials(d: usize, weight: OracleWeight, lambda: f64) -> Vec<Vec<f64>> {
    let cheb = weight == OracleWeight::InverseSqrt;
    let classical = if cheb {
        chebyshev_monomials(d)
    } else {
        legendre_monomials(d)
    };
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for i in 0..=d {
        let mut v = vec![0.0; i + 1];
        v[i] = 1.0;
        let seed = v.clone();
        for r in &rows {
            let c = sobolev_inner(&seed, r, weight, lambda) / sobolev_inner(r, r, weight, lambda);
            add_scaled(&mut v, r, -c);
        }
        let lead = classical[i][i];
        for x in v.iter_mut() {
            *x *= lead;
        }
        rows.push(v);
    }
    rows
}

/// Squared point-matching distance between two point sequences: minimum over
/// non-decreasing correspondences φ from the longer onto the shorter sequence
/// with fixed endpoints.
pub fn dp_point_match(a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let d2 = |p: (f64, f64), q: (f64, f64)| (p.0 - q.0).powi(2) + (p.1 - q.1).powi(2);
    let m = long.len();
    let n = short.len();
    // best[i][j]: min cost for long[0..=i] with φ(i) = j
    let mut best = vec![vec![f64::INFINITY; n]; m];
    best[0][0] = d2(long[0], short[0]);
    for i in 1..m {
        let mut running = f64::INFINITY;
        for j in 0..n {
            running = running.min(best[i - 1][j]);
            best[i][j] = running + d2(long[i], short[j]);
        }
    }
    best[m - 1][n - 1]
}

/// Brute-force check of `dp_point_match` over all non-decreasing maps (tiny inputs only).
pub fn brute_point_match(a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let d2 = |p: (f64, f64), q: (f64, f64)| (p.0 - q.0).powi(2) + (p.1 - q.1).powi(2);
    fn rec(
        i: usize,
        prev: usize,
        long: &[(f64, f64)],
        short: &[(f64, f64)],
        d2: &dyn Fn((f64, f64), (f64, f64)) -> f64,
    ) -> f64 {
        if i == long.len() - 1 {
            return d2(long[i], short[short.len() - 1]);
        }
        let lo = if i == 0 { 0 } else { prev };
        let hi = if i == 0 { 0 } else { short.len() - 1 };
        (lo..=hi)
            .map(|j| d2(long[i], short[j]) + rec(i + 1, j, long, short, d2))
            .fold(f64::INFINITY, f64::min)
    }
    rec(0, 0, long, short, &d2)
}

fn ranks(v: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&i, &j| v[i].total_cmp(&v[j]));
    let mut r = vec![0.0; v.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && v[idx[j + 1]] == v[idx[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            r[k] = avg;
        }
        i = j + 1;
    }
    r
}

/// Spearman rank correlation (Pearson on average ranks).
pub fn spearman(a: &[f64], b: &[f64]) -> f64 {
    let (ra, rb) = (ranks(a), ranks(b));
    let n = ra.len() as f64;
    let (ma, mb) = (ra.iter().sum::<f64>() / n, rb.iter().sum::<f64>() / n);
    let cov: f64 = ra.iter().zip(&rb).map(|(x, y)| (x - ma) * (y - mb)).sum();
    let va: f64 = ra.iter().map(|x| (x - ma).powi(2)).sum();
    let vb: f64 = rb.iter().map(|y| (y - mb).powi(2)).sum();
    cov / (va * vb).sqrt()
}
