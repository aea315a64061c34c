//! Inner products and the orthogonal families built from them.
//!
//! Four families are supported, all degree-graded and normalized so that the
//! leading coefficient in the matching classical basis is 1:
//!
//! | kind                | weight          | λ   | family            |
//! |---------------------|-----------------|-----|-------------------|
//! | `legendre`          | 1               | 0   | P_i               |
//! | `chebyshev`         | 1/√(1-x²)       | 0   | T_i               |
//! | `legendre-sobolev`  | 1               | > 0 | Althammer         |
//! | `chebyshev-sobolev` | 1/√(1-x²)       | > 0 | S_{λ,i}           |
//!
//! A first-order Sobolev inner product is `⟨f,g⟩_w + λ ⟨f',g'⟩_w`. For
//! polynomials given in the classical basis orthogonal under `w` both terms
//! are diagonal sums, so the Gram-Schmidt construction never integrates.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{self, Classical, DensePoly, PiecewisePoly, Weight};

/// Largest degree [`build_basis`] accepts.
pub const MAX_BASIS_DEGREE: usize = 64;

/// A Sobolev inner product `Σ_{r ≤ order} λ^[r>0] ∫ f^(r) g^(r) w`.
///
/// Only orders 0 and 1 can be evaluated; `lambda == 0` means the plain
/// weighted inner product whatever the order.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InnerProductSpec {
    pub weight: Weight,
    pub lambda: f64,
    pub order: u32,
}

impl InnerProductSpec {
    pub fn new(weight: Weight, lambda: f64, order: u32) -> Result<Self> {
        if !(lambda.is_finite() && lambda >= 0.0) {
            return Err(Error::Invalid(format!("lambda must be >= 0, got {lambda}")));
        }
        Ok(Self {
            weight,
            lambda,
            order,
        })
    }

    pub fn plain(weight: Weight) -> Self {
        Self {
            weight,
            lambda: 0.0,
            order: 0,
        }
    }

    pub fn sobolev(weight: Weight, lambda: f64) -> Result<Self> {
        Self::new(weight, lambda, 1)
    }

    pub fn classical(&self) -> Classical {
        self.weight.classical()
    }

    /// Whether the derivative term contributes.
    pub fn has_derivative_term(&self) -> bool {
        self.order >= 1 && self.lambda > 0.0
    }

    fn check_order(&self) -> Result<()> {
        if self.order > 1 && self.lambda > 0.0 {
            return Err(Error::Unsupported(format!(
                "Sobolev order {} (only 0 and 1 are implemented)",
                self.order
            )));
        }
        Ok(())
    }

    /// Short name of the family this inner product generates.
    pub fn family_name(&self) -> &'static str {
        match (self.weight, self.has_derivative_term()) {
            (Weight::Unit, false) => "legendre",
            (Weight::InverseSqrt, false) => "chebyshev",
            (Weight::Unit, true) => "legendre-sobolev",
            (Weight::InverseSqrt, true) => "chebyshev-sobolev",
        }
    }
}

/// The four basis families, as named on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BasisKind {
    Legendre,
    Chebyshev,
    LegendreSobolev,
    ChebyshevSobolev,
}

impl BasisKind {
    pub const ALL: [BasisKind; 4] = [
        BasisKind::Legendre,
        BasisKind::Chebyshev,
        BasisKind::LegendreSobolev,
        BasisKind::ChebyshevSobolev,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            BasisKind::Legendre => "legendre",
            BasisKind::Chebyshev => "chebyshev",
            BasisKind::LegendreSobolev => "legendre-sobolev",
            BasisKind::ChebyshevSobolev => "chebyshev-sobolev",
        }
    }

    pub fn weight(self) -> Weight {
        match self {
            BasisKind::Legendre | BasisKind::LegendreSobolev => Weight::Unit,
            BasisKind::Chebyshev | BasisKind::ChebyshevSobolev => Weight::InverseSqrt,
        }
    }

    /// Inner product for this kind; `lambda` is ignored by the plain kinds.
    pub fn spec(self, lambda: f64) -> Result<InnerProductSpec> {
        match self {
            BasisKind::Legendre | BasisKind::Chebyshev => Ok(InnerProductSpec::plain(self.weight())),
            _ => InnerProductSpec::sobolev(self.weight(), lambda),
        }
    }
}

impl fmt::Display for BasisKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BasisKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BasisKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown basis kind '{s}'")))
    }
}

/// `⟨B_i, B_i⟩_w` for the classical basis orthogonal under `w`.
pub fn classical_sq_norm(weight: Weight, i: usize) -> f64 {
    match weight {
        Weight::InverseSqrt if i == 0 => PI,
        Weight::InverseSqrt => PI / 2.0,
        Weight::Unit => 2.0 / (2 * i + 1) as f64,
    }
}

fn diagonal_inner(f: &[f64], g: &[f64], weight: Weight) -> f64 {
    f.iter()
        .zip(g)
        .enumerate()
        .map(|(i, (a, b))| a * b * classical_sq_norm(weight, i))
        .sum()
}

/// The inner product of two polynomials given in the classical basis that
/// matches `spec.weight`, evaluated from their coefficients alone.
pub fn inner_closed_form(f: &DensePoly, g: &DensePoly, spec: &InnerProductSpec) -> Result<f64> {
    let want = spec.classical();
    if f.basis() != want || g.basis() != want {
        return Err(Error::BasisMismatch(format!(
            "{:?} weight needs {:?} coefficients, got {:?} and {:?}",
            spec.weight,
            want,
            f.basis(),
            g.basis()
        )));
    }
    spec.check_order()?;
    let mut total = diagonal_inner(f.coeffs(), g.coeffs(), spec.weight);
    if spec.has_derivative_term() {
        let (df, dg) = (f.derivative(), g.derivative());
        total += spec.lambda * diagonal_inner(df.coeffs(), dg.coeffs(), spec.weight);
    }
    Ok(total)
}

/// A degree-graded orthogonal family `S_0..S_d`.
///
/// Row `i` of the expansion holds the coefficients of `S_i` in the classical
/// basis matching the weight; the matrix is lower triangular with unit
/// diagonal.
#[derive(Clone, Debug)]
pub struct OrthoBasis {
    spec: InnerProductSpec,
    expansion: Vec<Vec<f64>>,
    sq_norms: Vec<f64>,
    // monomial forms of S_i and S_i', used by projection
    rows_mono: Vec<Vec<f64>>,
    drows_mono: Vec<Vec<f64>>,
}

impl PartialEq for OrthoBasis {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec
            && self.expansion == other.expansion
            && self.sq_norms == other.sq_norms
    }
}

impl OrthoBasis {
    fn from_parts(spec: InnerProductSpec, expansion: Vec<Vec<f64>>, sq_norms: Vec<f64>) -> Result<Self> {
        let classical = spec.classical();
        let mut rows_mono = Vec::with_capacity(expansion.len());
        let mut drows_mono = Vec::with_capacity(expansion.len());
        for row in &expansion {
            let p = DensePoly::new(classical, row.clone());
            let m = poly::convert(&p, Classical::Monomial)?;
            drows_mono.push(m.derivative().into_coeffs());
            rows_mono.push(m.into_coeffs());
        }
        Ok(Self {
            spec,
            expansion,
            sq_norms,
            rows_mono,
            drows_mono,
        })
    }

    pub fn spec(&self) -> &InnerProductSpec {
        &self.spec
    }

    pub fn degree(&self) -> usize {
        self.expansion.len() - 1
    }

    pub fn expansion(&self) -> &[Vec<f64>] {
        &self.expansion
    }

    pub fn sq_norms(&self) -> &[f64] {
        &self.sq_norms
    }

    /// `S_i` as a classical-basis polynomial.
    pub fn element(&self, i: usize) -> DensePoly {
        DensePoly::new(self.spec.classical(), self.expansion[i].clone())
    }

    /// Identifier stored alongside coefficient vectors, e.g.
    /// `chebyshev-sobolev/lambda=0.125/d=10`.
    pub fn id(&self) -> String {
        if self.spec.has_derivative_term() {
            format!(
                "{}/lambda={}/d={}",
                self.spec.family_name(),
                self.spec.lambda,
                self.degree()
            )
        } else {
            format!("{}/d={}", self.spec.family_name(), self.degree())
        }
    }

    /// The first `d + 1` elements. Gram-Schmidt on a graded sequence does not
    /// depend on how far the sequence is continued, so this equals
    /// `build_basis(spec, d)`.
    pub fn truncated(&self, d: usize) -> Result<OrthoBasis> {
        if d > self.degree() {
            return Err(Error::Invalid(format!(
                "cannot truncate degree {} basis to {d}",
                self.degree()
            )));
        }
        let expansion = self.expansion[..=d].iter().map(|r| r[..=d].to_vec()).collect();
        OrthoBasis::from_parts(self.spec, expansion, self.sq_norms[..=d].to_vec())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&BasisFile::from(self))?)
    }

    pub fn from_json(text: &str) -> Result<OrthoBasis> {
        let file: BasisFile = serde_json::from_str(text)?;
        file.try_into()
    }
}

/// On-disk form of an [`OrthoBasis`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BasisFile {
    pub spec: InnerProductSpec,
    pub degree: usize,
    /// Always `"leading-classical-coefficient-one"`.
    pub normalization: String,
    /// Row-major `(degree+1)²` expansion matrix.
    pub expansion: Vec<f64>,
    pub sq_norms: Vec<f64>,
}

const NORMALIZATION: &str = "leading-classical-coefficient-one";

impl From<&OrthoBasis> for BasisFile {
    fn from(b: &OrthoBasis) -> Self {
        BasisFile {
            spec: b.spec,
            degree: b.degree(),
            normalization: NORMALIZATION.to_string(),
            expansion: b.expansion.iter().flatten().copied().collect(),
            sq_norms: b.sq_norms.clone(),
        }
    }
}

impl TryFrom<BasisFile> for OrthoBasis {
    type Error = Error;

    fn try_from(f: BasisFile) -> Result<Self> {
        let n = f.degree + 1;
        if f.expansion.len() != n * n {
            return Err(Error::LengthMismatch {
                expected: n * n,
                found: f.expansion.len(),
            });
        }
        if f.sq_norms.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                found: f.sq_norms.len(),
            });
        }
        if f.normalization != NORMALIZATION {
            return Err(Error::Unsupported(format!(
                "basis normalization '{}'",
                f.normalization
            )));
        }
        let expansion = f.expansion.chunks(n).map(<[f64]>::to_vec).collect();
        OrthoBasis::from_parts(f.spec, expansion, f.sq_norms)
    }
}

/// Builds `S_0..S_d` by modified Gram-Schmidt (with one re-orthogonalization
/// pass) over the classical basis elements, which span the same graded
/// spaces as the monomials.
pub fn build_basis(spec: InnerProductSpec, d: usize) -> Result<OrthoBasis> {
    spec.check_order()?;
    if d > MAX_BASIS_DEGREE {
        return Err(Error::DegreeTooLarge {
            degree: d,
            max: MAX_BASIS_DEGREE,
        });
    }
    let n = d + 1;
    if !spec.has_derivative_term() {
        let expansion = (0..n)
            .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        let sq_norms = (0..n).map(|i| classical_sq_norm(spec.weight, i)).collect();
        return OrthoBasis::from_parts(spec, expansion, sq_norms);
    }

    let classical = spec.classical();
    let elements: Vec<DensePoly> = (0..n).map(|i| DensePoly::basis_element(classical, i)).collect();
    let mut gram = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let g = inner_closed_form(&elements[i], &elements[j], &spec)?;
            gram[i][j] = g;
            gram[j][i] = g;
        }
    }
    let inner = |a: &[f64], b: &[f64]| -> f64 {
        let mut s = 0.0;
        for (i, ai) in a.iter().enumerate() {
            if *ai != 0.0 {
                s += ai * b.iter().zip(&gram[i]).map(|(x, y)| x * y).sum::<f64>();
            }
        }
        s
    };

    let mut expansion: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut sq_norms = Vec::with_capacity(n);
    for i in 0..n {
        let mut v = vec![0.0; n];
        v[i] = 1.0;
        for _pass in 0..2 {
            for (row, h) in expansion.iter().zip(&sq_norms) {
                let c = inner(&v, row) / h;
                if c != 0.0 {
                    for (vk, rk) in v.iter_mut().zip(row) {
                        *vk -= c * rk;
                    }
                }
            }
        }
        // earlier rows have lower degree, so v[i] is still exactly 1
        debug_assert_eq!(v[i], 1.0);
        sq_norms.push(inner(&v, &v));
        expansion.push(v);
    }
    OrthoBasis::from_parts(spec, expansion, sq_norms)
}

/// Coefficients `c_i = ⟨f, S_i⟩ / ⟨S_i, S_i⟩` of the projection of a spline
/// curve onto the span of the basis.
pub fn project(f: &PiecewisePoly, basis: &OrthoBasis) -> Result<Vec<f64>> {
    let (lo, hi) = f.domain();
    if lo < -1.0 || hi > 1.0 {
        return Err(Error::Domain(format!(
            "spline domain [{lo}, {hi}] exceeds [-1, 1]"
        )));
    }
    let d = basis.degree();
    let spec = basis.spec;
    let m0 = poly::moment_vector(f, spec.weight, 0, d)?;
    let m1 = if spec.has_derivative_term() {
        Some(poly::moment_vector(f, spec.weight, 1, d)?)
    } else {
        None
    };
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    Ok((0..=d)
        .map(|i| {
            let mut ip = dot(&basis.rows_mono[i], &m0);
            if let Some(m1) = &m1 {
                ip += spec.lambda * dot(&basis.drows_mono[i], m1);
            }
            ip / basis.sq_norms[i]
        })
        .collect())
}

/// `Σ c_i S_i` as a classical-basis polynomial.
pub fn synthesize(coeffs: &[f64], basis: &OrthoBasis) -> Result<DensePoly> {
    let n = basis.degree() + 1;
    if coeffs.len() > n {
        return Err(Error::LengthMismatch {
            expected: n,
            found: coeffs.len(),
        });
    }
    let mut out = vec![0.0; coeffs.len()];
    for (c, row) in coeffs.iter().zip(&basis.expansion) {
        for (o, e) in out.iter_mut().zip(row) {
            *o += c * e;
        }
    }
    Ok(DensePoly::new(basis.spec.classical(), out))
}
