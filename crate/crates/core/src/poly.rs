//! Polynomials in the monomial, Legendre and Chebyshev bases.
//!
//! Everything the projections need is done by formula: evaluation by
//! backward recurrences, exact differentiation in each basis, basis
//! conversion through nested multiplication, and weighted moments
//! `∫ x^k w(x) dx` over subintervals of `[-1, 1]` in closed form.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest degree accepted by [`convert`].
pub const MAX_CONVERT_DEGREE: usize = 64;

/// A classical polynomial basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Classical {
    Monomial,
    Legendre,
    Chebyshev,
}

/// Weight function of an inner product on `[-1, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Weight {
    /// `w(x) = 1` (Legendre type).
    Unit,
    /// `w(x) = 1 / sqrt(1 - x^2)` (Chebyshev type).
    InverseSqrt,
}

impl Weight {
    /// The classical basis orthogonal under this weight.
    pub fn classical(self) -> Classical {
        match self {
            Weight::Unit => Classical::Legendre,
            Weight::InverseSqrt => Classical::Chebyshev,
        }
    }
}

/// A polynomial stored as coefficients in a classical basis; `coeffs[i]`
/// multiplies the basis element of degree `i`.
#[derive(Clone, Debug, PartialEq)]
pub struct DensePoly {
    basis: Classical,
    coeffs: Vec<f64>,
}

impl DensePoly {
    pub fn new(basis: Classical, coeffs: Vec<f64>) -> Self {
        Self { basis, coeffs }
    }

    pub fn zero(basis: Classical) -> Self {
        Self::new(basis, Vec::new())
    }

    /// The single basis element of degree `n`.
    pub fn basis_element(basis: Classical, n: usize) -> Self {
        let mut coeffs = vec![0.0; n + 1];
        coeffs[n] = 1.0;
        Self::new(basis, coeffs)
    }

    pub fn basis(&self) -> Classical {
        self.basis
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<f64> {
        self.coeffs
    }

    /// Index of the last stored coefficient (0 for an empty vector).
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0.0)
    }

    /// Canonical form: trailing zero coefficients removed.
    pub fn trimmed(mut self) -> Self {
        while self.coeffs.last() == Some(&0.0) {
            self.coeffs.pop();
        }
        self
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self.basis {
            Classical::Monomial => horner(&self.coeffs, x),
            Classical::Legendre => eval_legendre(&self.coeffs, x),
            Classical::Chebyshev => eval_clenshaw(&self.coeffs, x),
        }
    }

    pub fn derivative(&self) -> DensePoly {
        derivative(self)
    }

    /// Coefficient-wise `a * self + b * other`; both must share a basis.
    pub fn lin_comb(&self, a: f64, other: &DensePoly, b: f64) -> Result<DensePoly> {
        if self.basis != other.basis {
            return Err(Error::BasisMismatch(format!(
                "{:?} vs {:?}",
                self.basis, other.basis
            )));
        }
        let n = self.coeffs.len().max(other.coeffs.len());
        let get = |v: &[f64], i: usize| v.get(i).copied().unwrap_or(0.0);
        let coeffs = (0..n)
            .map(|i| a * get(&self.coeffs, i) + b * get(&other.coeffs, i))
            .collect();
        Ok(DensePoly::new(self.basis, coeffs))
    }
}

fn horner(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &ci| acc * x + ci)
}

/// `Σ c_k T_k(x)` by the backward Clenshaw recurrence.
pub fn eval_clenshaw(coeffs: &[f64], x: f64) -> f64 {
    debug_assert!(
        (-1.0 - 1e-12..=1.0 + 1e-12).contains(&x),
        "Chebyshev series evaluated outside [-1, 1]: {x}"
    );
    let n = coeffs.len();
    if n == 0 {
        return 0.0;
    }
    let two_x = 2.0 * x;
    let (mut b1, mut b2) = (0.0, 0.0);
    for &c in coeffs[1..].iter().rev() {
        let b0 = two_x * b1 - b2 + c;
        b2 = b1;
        b1 = b0;
    }
    x * b1 - b2 + coeffs[0]
}

/// `Σ c_k P_k(x)` with P_k from Bonnet's recurrence
/// `(k+1) P_{k+1} = (2k+1) x P_k - k P_{k-1}`.
pub fn eval_legendre(coeffs: &[f64], x: f64) -> f64 {
    let mut sum = 0.0;
    let (mut p_prev, mut p) = (0.0, 1.0);
    for (k, &c) in coeffs.iter().enumerate() {
        sum += c * p;
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0) * x * p - kf * p_prev) / (kf + 1.0);
        p_prev = p;
        p = next;
    }
    sum
}

/// Exact derivative, expressed in the same basis as the input.
pub fn derivative(p: &DensePoly) -> DensePoly {
    let c = &p.coeffs;
    let n = c.len();
    if n <= 1 {
        return DensePoly::zero(p.basis);
    }
    let out = match p.basis {
        Classical::Monomial => c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &ck)| k as f64 * ck)
            .collect(),
        Classical::Chebyshev => {
            // d_{k-1} = d_{k+1} + 2k c_k, then halve d_0.
            let mut d = vec![0.0; n + 1];
            for k in (1..n).rev() {
                d[k - 1] = d[k + 1] + 2.0 * k as f64 * c[k];
            }
            d[0] *= 0.5;
            d.truncate(n - 1);
            d
        }
        Classical::Legendre => {
            // P'_m = Σ (2k+1) P_k over k = m-1, m-3, ...
            let mut tail = vec![0.0; n + 1];
            for k in (0..n - 1).rev() {
                tail[k] = c[k + 1] + tail[k + 2];
            }
            (0..n - 1)
                .map(|k| (2 * k + 1) as f64 * tail[k])
                .collect()
        }
    };
    DensePoly::new(p.basis, out)
}

/// Multiply by `x` in place (result one degree higher).
fn mul_x(c: &[f64], basis: Classical) -> Vec<f64> {
    let mut out = vec![0.0; c.len() + 1];
    match basis {
        Classical::Monomial => out[1..].copy_from_slice(c),
        Classical::Chebyshev => {
            for (k, &ck) in c.iter().enumerate() {
                if k == 0 {
                    out[1] += ck;
                } else {
                    out[k + 1] += 0.5 * ck;
                    out[k - 1] += 0.5 * ck;
                }
            }
        }
        Classical::Legendre => {
            // x P_k = ((k+1) P_{k+1} + k P_{k-1}) / (2k+1)
            for (k, &ck) in c.iter().enumerate() {
                let kf = k as f64;
                out[k + 1] += ck * (kf + 1.0) / (2.0 * kf + 1.0);
                if k > 0 {
                    out[k - 1] += ck * kf / (2.0 * kf + 1.0);
                }
            }
        }
    }
    out
}

fn to_monomial(p: &DensePoly) -> Vec<f64> {
    let c = &p.coeffs;
    if p.basis == Classical::Monomial || c.is_empty() {
        return c.clone();
    }
    let mut out = vec![0.0; c.len()];
    // Running monomial expansions of the two previous basis elements.
    let mut prev: Vec<f64> = Vec::new();
    let mut cur: Vec<f64> = vec![1.0];
    for (k, &ck) in c.iter().enumerate() {
        for (o, v) in out.iter_mut().zip(&cur) {
            *o += ck * v;
        }
        let kf = k as f64;
        let mut next = vec![0.0; cur.len() + 1];
        let (a, b) = match p.basis {
            Classical::Chebyshev if k == 0 => (1.0, 0.0),
            Classical::Chebyshev => (2.0, 1.0),
            _ => ((2.0 * kf + 1.0) / (kf + 1.0), kf / (kf + 1.0)),
        };
        for (i, v) in cur.iter().enumerate() {
            next[i + 1] += a * v;
        }
        for (i, v) in prev.iter().enumerate() {
            next[i] -= b * v;
        }
        prev = std::mem::replace(&mut cur, next);
    }
    out
}

fn from_monomial(c: &[f64], target: Classical) -> Vec<f64> {
    // Nested multiplication: p = c_0 + x (c_1 + x (c_2 + ...)).
    let mut acc: Vec<f64> = Vec::new();
    for &ck in c.iter().rev() {
        acc = if acc.is_empty() {
            vec![0.0]
        } else {
            mul_x(&acc, target)
        };
        acc[0] += ck;
    }
    acc.truncate(c.len());
    acc
}

/// The same polynomial expressed in `target`.
pub fn convert(p: &DensePoly, target: Classical) -> Result<DensePoly> {
    let degree = p.degree();
    if degree > MAX_CONVERT_DEGREE {
        return Err(Error::DegreeTooLarge {
            degree,
            max: MAX_CONVERT_DEGREE,
        });
    }
    if p.basis == target {
        return Ok(p.clone());
    }
    let mono = to_monomial(p);
    let coeffs = match target {
        Classical::Monomial => mono,
        _ => from_monomial(&mono, target),
    };
    Ok(DensePoly::new(target, coeffs))
}

fn check_interval(a: f64, b: f64) -> Result<()> {
    if !(-1.0..=1.0).contains(&a) || !(-1.0..=1.0).contains(&b) || a > b {
        return Err(Error::Domain(format!(
            "interval [{a}, {b}] is not inside [-1, 1]"
        )));
    }
    Ok(())
}

/// `√(1 - x²)` without cancellation near ±1.
fn sqrt_one_minus_sq(x: f64) -> f64 {
    ((1.0 - x) * (1.0 + x)).max(0.0).sqrt()
}

/// All moments `∫_a^b x^k w(x) dx` for `k = 0..=max_k`.
pub fn weighted_moments(max_k: usize, a: f64, b: f64, weight: Weight) -> Result<Vec<f64>> {
    check_interval(a, b)?;
    let mut m = Vec::with_capacity(max_k + 1);
    match weight {
        Weight::Unit => {
            let (mut pa, mut pb) = (a, b);
            for k in 0..=max_k {
                m.push((pb - pa) / (k + 1) as f64);
                pa *= a;
                pb *= b;
            }
        }
        Weight::InverseSqrt => {
            let (ra, rb) = (sqrt_one_minus_sq(a), sqrt_one_minus_sq(b));
            m.push(b.asin() - a.asin());
            if max_k >= 1 {
                m.push(ra - rb);
            }
            // I_k = [(k-1) I_{k-2} - x^{k-1} √(1-x²) |_a^b] / k
            let (mut pa, mut pb) = (a, b);
            for k in 2..=max_k {
                let boundary = pb * rb - pa * ra;
                m.push(((k - 1) as f64 * m[k - 2] - boundary) / k as f64);
                pa *= a;
                pb *= b;
            }
        }
    }
    Ok(m)
}

/// `∫_a^b x^k w(x) dx` in closed form.
pub fn weighted_moment(k: usize, a: f64, b: f64, weight: Weight) -> Result<f64> {
    Ok(weighted_moments(k, a, b, weight)?[k])
}

/// A continuous piecewise polynomial of degree ≤ 3. Each segment is stored in
/// monomial form in the global parameter (not shifted to its left end).
#[derive(Clone, Debug, PartialEq)]
pub struct PiecewisePoly {
    breakpoints: Vec<f64>,
    segments: Vec<DensePoly>,
}

impl PiecewisePoly {
    pub const MAX_SEGMENT_DEGREE: usize = 3;

    pub fn new(breakpoints: Vec<f64>, segments: Vec<DensePoly>) -> Result<Self> {
        if breakpoints.len() < 2 || segments.len() + 1 != breakpoints.len() {
            return Err(Error::LengthMismatch {
                expected: breakpoints.len().saturating_sub(1).max(1),
                found: segments.len(),
            });
        }
        if breakpoints.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::Domain(
                "breakpoints must be strictly increasing".into(),
            ));
        }
        for seg in &segments {
            if seg.basis() != Classical::Monomial {
                return Err(Error::BasisMismatch(
                    "spline segments must be in the monomial basis".into(),
                ));
            }
            if seg.degree() > Self::MAX_SEGMENT_DEGREE {
                return Err(Error::DegreeTooLarge {
                    degree: seg.degree(),
                    max: Self::MAX_SEGMENT_DEGREE,
                });
            }
        }
        for (i, pair) in segments.windows(2).enumerate() {
            let x = breakpoints[i + 1];
            let (l, r) = (pair[0].eval(x), pair[1].eval(x));
            let scale: f64 = 1.0
                + pair[0].coeffs().iter().map(|c| c.abs()).sum::<f64>()
                + pair[1].coeffs().iter().map(|c| c.abs()).sum::<f64>();
            if (l - r).abs() > 1e-12 * scale {
                return Err(Error::Domain(format!(
                    "discontinuity at breakpoint {x}: {l} vs {r}"
                )));
            }
        }
        Ok(Self {
            breakpoints,
            segments,
        })
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn segments(&self) -> &[DensePoly] {
        &self.segments
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.breakpoints[0], *self.breakpoints.last().unwrap())
    }

    fn segment_index(&self, x: f64) -> usize {
        let i = self.breakpoints.partition_point(|&b| b <= x);
        i.saturating_sub(1).min(self.segments.len() - 1)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.segments[self.segment_index(x)].eval(x)
    }

    /// Derivative of the segment containing `x` (right-continuous at breakpoints).
    pub fn eval_derivative(&self, x: f64) -> f64 {
        self.segments[self.segment_index(x)].derivative().eval(x)
    }

    /// Adds a constant to every segment.
    pub fn shifted(&self, delta: f64) -> PiecewisePoly {
        let segments = self
            .segments
            .iter()
            .map(|s| {
                let mut c = s.coeffs().to_vec();
                if c.is_empty() {
                    c.push(0.0);
                }
                c[0] += delta;
                DensePoly::new(Classical::Monomial, c)
            })
            .collect();
        PiecewisePoly {
            breakpoints: self.breakpoints.clone(),
            segments,
        }
    }
}

/// `M_j = Σ_segments ∫ f^(r)(x) x^j w(x) dx` for `j = 0..=max_degree`.
///
/// Any polynomial `g` with monomial coefficients `g_j` then has
/// `∫ f^(r) g w = Σ_j g_j M_j`, so one moment vector serves every basis row.
pub fn moment_vector(
    f: &PiecewisePoly,
    weight: Weight,
    deriv_order: usize,
    max_degree: usize,
) -> Result<Vec<f64>> {
    let mut out = vec![0.0; max_degree + 1];
    for (seg, w) in f.segments.iter().zip(f.breakpoints.windows(2)) {
        let mut s = seg.clone();
        for _ in 0..deriv_order {
            s = derivative(&s);
        }
        if s.is_zero() {
            // bounds are still checked
            check_interval(w[0], w[1])?;
            continue;
        }
        let m = weighted_moments(max_degree + s.degree(), w[0], w[1], weight)?;
        for (j, o) in out.iter_mut().enumerate() {
            *o += s
                .coeffs()
                .iter()
                .enumerate()
                .map(|(i, c)| c * m[i + j])
                .sum::<f64>();
        }
    }
    Ok(out)
}

/// `∫ f^(r) g^(r) w` over the domain of `f`, with `r = deriv_order` applied to both.
pub fn inner_piecewise(
    f: &PiecewisePoly,
    g: &DensePoly,
    weight: Weight,
    deriv_order: usize,
) -> Result<f64> {
    let mut gm = convert(g, Classical::Monomial)?;
    for _ in 0..deriv_order {
        gm = derivative(&gm);
    }
    if gm.coeffs().is_empty() {
        moment_vector(f, weight, deriv_order, 0)?;
        return Ok(0.0);
    }
    let m = moment_vector(f, weight, deriv_order, gm.degree())?;
    Ok(gm.coeffs().iter().zip(&m).map(|(a, b)| a * b).sum())
}
