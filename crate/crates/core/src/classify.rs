//! Distances between coefficient vectors, and everything built on them:
//! representation error, nearest-model matching and kNN evaluation.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::basis::{build_basis, synthesize, BasisKind, OrthoBasis};
use crate::error::{Error, Result};
use crate::ink::{arc_length_normalize, to_coeffs, InkTrace, NormalizedTrace, SplineOrder, SymbolCoeffs};

fn check_compatible(c: &SymbolCoeffs, basis: &OrthoBasis) -> Result<()> {
    let id = basis.id();
    if c.basis_id != id {
        return Err(Error::BasisMismatch(format!(
            "coefficients for '{}' used with basis '{id}'",
            c.basis_id
        )));
    }
    let d = basis.degree();
    if c.xs.len() != d || c.ys.len() != d {
        return Err(Error::LengthMismatch {
            expected: d,
            found: c.xs.len().min(c.ys.len()),
        });
    }
    Ok(())
}

/// Squared curve distance `‖x-u‖² + ‖y-v‖²` under the basis inner product,
/// i.e. `Σ_i ((x_i-u_i)² + (y_i-v_i)²) ⟨S_i, S_i⟩` over the kept indices.
pub fn coeff_distance_sq(a: &SymbolCoeffs, b: &SymbolCoeffs, basis: &OrthoBasis) -> Result<f64> {
    check_compatible(a, basis)?;
    check_compatible(b, basis)?;
    let h = &basis.sq_norms()[1..];
    Ok(h.iter()
        .enumerate()
        .map(|(i, hi)| ((a.xs[i] - b.xs[i]).powi(2) + (a.ys[i] - b.ys[i]).powi(2)) * hi)
        .sum())
}

/// Summed Euclidean distance between the input samples and the truncated
/// series evaluated at the same arc-length parameters, in input units.
pub fn representation_error(
    trace: &InkTrace,
    normalized: &NormalizedTrace,
    coeffs: &SymbolCoeffs,
    basis: &OrthoBasis,
) -> Result<f64> {
    check_compatible(coeffs, basis)?;
    let points = trace.points();
    if normalized.knots.len() != points.len() {
        return Err(Error::LengthMismatch {
            expected: points.len(),
            found: normalized.knots.len(),
        });
    }
    let frame = coeffs
        .frame
        .ok_or_else(|| Error::Invalid("coefficients carry no frame".into()))?;
    let with_constant = |v: &[f64]| {
        let mut out = Vec::with_capacity(v.len() + 1);
        out.push(0.0);
        out.extend_from_slice(v);
        out
    };
    let px = synthesize(&with_constant(&coeffs.xs), basis)?;
    let py = synthesize(&with_constant(&coeffs.ys), basis)?;
    let half = 0.5 * frame.length;
    Ok(normalized
        .knots
        .iter()
        .zip(points)
        .map(|(&s, p)| {
            let x = frame.x0 + half * px.eval(s);
            let y = frame.y0 + half * py.eval(s);
            (x - p.x).hypot(y - p.y)
        })
        .sum())
}

/// Result of [`match_symbol`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Match {
    pub model_index: usize,
    pub distance_sq: f64,
}

/// The closest model by [`coeff_distance_sq`]; the lowest index wins ties.
pub fn match_symbol(sample: &SymbolCoeffs, models: &[SymbolCoeffs], basis: &OrthoBasis) -> Result<Match> {
    let mut best: Option<Match> = None;
    for (i, m) in models.iter().enumerate() {
        let d = coeff_distance_sq(sample, m, basis)?;
        if best.is_none_or(|b| d < b.distance_sq) {
            best = Some(Match {
                model_index: i,
                distance_sq: d,
            });
        }
    }
    best.ok_or(Error::EmptyModelSet)
}

/// Training vectors pre-scaled by `√h_i`, so the weighted distance becomes a
/// plain squared Euclidean one.
pub struct KnnIndex {
    basis_id: String,
    dim: usize,
    scale: Vec<f64>,
    vectors: Vec<f64>,
    labels: Vec<String>,
}

impl KnnIndex {
    pub fn new<'a>(train: impl IntoIterator<Item = &'a SymbolCoeffs>, basis: &OrthoBasis) -> Result<Self> {
        let scale: Vec<f64> = basis.sq_norms()[1..].iter().map(|h| h.sqrt()).collect();
        let d = scale.len();
        let mut vectors = Vec::new();
        let mut labels = Vec::new();
        for item in train {
            check_compatible(item, basis)?;
            let label = item
                .label
                .clone()
                .ok_or_else(|| Error::Invalid("training item without a label".into()))?;
            labels.push(label);
            vectors.extend(item.xs.iter().zip(&scale).map(|(v, s)| v * s));
            vectors.extend(item.ys.iter().zip(&scale).map(|(v, s)| v * s));
        }
        if labels.is_empty() {
            return Err(Error::EmptyTrainingSet);
        }
        Ok(Self {
            basis_id: basis.id(),
            dim: 2 * d,
            scale,
            vectors,
            labels,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    fn scaled(&self, query: &SymbolCoeffs) -> Result<Vec<f64>> {
        if query.basis_id != self.basis_id {
            return Err(Error::BasisMismatch(format!(
                "query for '{}' against index for '{}'",
                query.basis_id, self.basis_id
            )));
        }
        let d = self.scale.len();
        if query.xs.len() != d || query.ys.len() != d {
            return Err(Error::LengthMismatch {
                expected: d,
                found: query.xs.len().min(query.ys.len()),
            });
        }
        Ok(query
            .xs
            .iter()
            .chain(&query.ys)
            .zip(self.scale.iter().chain(&self.scale))
            .map(|(v, s)| v * s)
            .collect())
    }

    /// The `k` nearest training items as `(distance², index)`, nearest first;
    /// equal distances keep training order.
    pub fn neighbors(&self, query: &SymbolCoeffs, k: usize) -> Result<Vec<(f64, usize)>> {
        if k == 0 || k > self.len() {
            return Err(Error::Invalid(format!(
                "k = {k} must be in 1..={}",
                self.len()
            )));
        }
        let q = self.scaled(query)?;
        let mut best: Vec<(f64, usize)> = Vec::with_capacity(k + 1);
        for (i, v) in self.vectors.chunks_exact(self.dim).enumerate() {
            let d: f64 = v.iter().zip(&q).map(|(a, b)| (a - b) * (a - b)).sum();
            if best.len() == k && d >= best[k - 1].0 {
                continue;
            }
            let pos = best.partition_point(|&(bd, _)| bd <= d);
            best.insert(pos, (d, i));
            best.truncate(k);
        }
        Ok(best)
    }

    /// Majority label among the first `k` neighbours. Vote ties go to the
    /// smaller summed distance, then to the lexicographically smaller label.
    pub fn vote(&self, neighbors: &[(f64, usize)], k: usize) -> &str {
        let mut tally: HashMap<&str, (usize, f64)> = HashMap::new();
        for &(d, i) in &neighbors[..k.min(neighbors.len())] {
            let e = tally.entry(self.labels[i].as_str()).or_insert((0, 0.0));
            e.0 += 1;
            e.1 += d;
        }
        tally
            .into_iter()
            .min_by(|a, b| {
                b.1 .0
                    .cmp(&a.1 .0)
                    .then(a.1 .1.total_cmp(&b.1 .1))
                    .then(a.0.cmp(b.0))
            })
            .map(|(label, _)| label)
            .expect("at least one neighbour")
    }

    pub fn classify(&self, query: &SymbolCoeffs, k: usize) -> Result<String> {
        let n = self.neighbors(query, k)?;
        Ok(self.vote(&n, k).to_string())
    }
}

/// kNN label of `query` among `train`.
pub fn knn_classify(train: &[SymbolCoeffs], query: &SymbolCoeffs, k: usize, basis: &OrthoBasis) -> Result<String> {
    if train.is_empty() {
        return Err(Error::EmptyTrainingSet);
    }
    KnnIndex::new(train, basis)?.classify(query, k)
}

/// Labeled coefficient vectors sharing one basis, with a deterministic
/// train/test split: a seeded shuffle whose prefix is the training set.
#[derive(Clone, Debug)]
pub struct LabeledDataset {
    items: Vec<SymbolCoeffs>,
    split_seed: u64,
    split_ratio: f64,
    order: Vec<usize>,
    n_train: usize,
}

impl LabeledDataset {
    pub fn new(items: Vec<SymbolCoeffs>, split_seed: u64, split_ratio: f64) -> Result<Self> {
        if !(split_ratio > 0.0 && split_ratio < 1.0) {
            return Err(Error::Invalid(format!(
                "split ratio must be in (0, 1), got {split_ratio}"
            )));
        }
        if let Some(first) = items.first() {
            if let Some(other) = items.iter().find(|c| c.basis_id != first.basis_id) {
                return Err(Error::BasisMismatch(format!(
                    "dataset mixes '{}' and '{}'",
                    first.basis_id, other.basis_id
                )));
            }
        }
        if items.iter().any(|c| c.label.is_none()) {
            return Err(Error::Invalid("every dataset item needs a label".into()));
        }
        let order = split_order(items.len(), split_seed);
        let n_train = (split_ratio * items.len() as f64).round() as usize;
        Ok(Self {
            items,
            split_seed,
            split_ratio,
            order,
            n_train,
        })
    }

    pub fn items(&self) -> &[SymbolCoeffs] {
        &self.items
    }

    pub fn split_seed(&self) -> u64 {
        self.split_seed
    }

    pub fn split_ratio(&self) -> f64 {
        self.split_ratio
    }

    pub fn train_indices(&self) -> &[usize] {
        &self.order[..self.n_train]
    }

    pub fn test_indices(&self) -> &[usize] {
        &self.order[self.n_train..]
    }

    pub fn train(&self) -> impl Iterator<Item = &SymbolCoeffs> {
        self.train_indices().iter().map(|&i| &self.items[i])
    }

    pub fn test(&self) -> impl Iterator<Item = &SymbolCoeffs> {
        self.test_indices().iter().map(|&i| &self.items[i])
    }
}

fn split_order(n: usize, seed: u64) -> Vec<usize> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    order
}

#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub kinds: Vec<BasisKind>,
    pub degree: usize,
    pub lambda: f64,
    pub spline: SplineOrder,
    pub k_min: usize,
    pub k_max: usize,
    pub seed: u64,
    pub ratio: f64,
    /// Use every sample both as training item and as query.
    pub resubstitution: bool,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            kinds: BasisKind::ALL.to_vec(),
            degree: crate::DEFAULT_DEGREE,
            lambda: crate::DEFAULT_LAMBDA,
            spline: SplineOrder::Linear,
            k_min: 1,
            k_max: 10,
            seed: 0,
            ratio: 2.0 / 3.0,
            resubstitution: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub basis: BasisKind,
    pub k: usize,
    pub accuracy: f64,
    pub error_rate: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
    pub n_train: usize,
    pub n_test: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct BestAtK {
    pub k: usize,
    pub basis: BasisKind,
    pub accuracy: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepSummary {
    pub n_train: usize,
    pub n_test: usize,
    pub best_per_k: Vec<BestAtK>,
    /// Whether Chebyshev-Sobolev has the top accuracy (ties included) at every k.
    pub chebyshev_sobolev_best_for_all_k: Option<bool>,
}

impl SweepTable {
    pub fn accuracy(&self, basis: BasisKind, k: usize) -> Option<f64> {
        self.rows
            .iter()
            .find(|r| r.basis == basis && r.k == k)
            .map(|r| r.accuracy)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("basis,k,accuracy,error_rate\n");
        for r in &self.rows {
            out.push_str(&format!("{},{},{},{}\n", r.basis, r.k, r.accuracy, r.error_rate));
        }
        out
    }

    pub fn summary(&self) -> SweepSummary {
        let mut ks: Vec<usize> = self.rows.iter().map(|r| r.k).collect();
        ks.sort_unstable();
        ks.dedup();
        let mut best_per_k = Vec::new();
        let mut cs_always = true;
        for k in ks {
            let at_k: Vec<&SweepRow> = self.rows.iter().filter(|r| r.k == k).collect();
            // first listed kind wins exact ties
            let best = at_k
                .iter()
                .fold(None::<&SweepRow>, |acc, r| match acc {
                    Some(b) if b.accuracy >= r.accuracy => Some(b),
                    _ => Some(r),
                })
                .expect("non-empty");
            let top = best.accuracy;
            cs_always &= at_k
                .iter()
                .any(|r| r.basis == BasisKind::ChebyshevSobolev && r.accuracy >= top);
            best_per_k.push(BestAtK {
                k,
                basis: best.basis,
                accuracy: top,
            });
        }
        let has_cs = self.rows.iter().any(|r| r.basis == BasisKind::ChebyshevSobolev);
        SweepSummary {
            n_train: self.n_train,
            n_test: self.n_test,
            best_per_k,
            chebyshev_sobolev_best_for_all_k: has_cs.then_some(cs_always),
        }
    }
}

/// Normalizes every trace in parallel, keeping input order.
pub fn normalize_all(traces: &[InkTrace], spline: SplineOrder) -> Result<Vec<NormalizedTrace>> {
    traces
        .par_iter()
        .map(|t| arc_length_normalize(t, spline))
        .collect()
}

/// Test-set kNN accuracy for every basis kind and every `k` in the range.
///
/// Traces are normalized once; the same split is used for every kind.
pub fn accuracy_sweep(traces: &[InkTrace], config: &SweepConfig) -> Result<SweepTable> {
    if traces.is_empty() {
        return Err(Error::EmptyTrainingSet);
    }
    if config.k_min == 0 || config.k_min > config.k_max {
        return Err(Error::Invalid(format!(
            "invalid k range {}..={}",
            config.k_min, config.k_max
        )));
    }
    let normalized = normalize_all(traces, config.spline)?;
    let mut rows = Vec::new();
    let (mut n_train, mut n_test) = (0, 0);
    for &kind in &config.kinds {
        let basis = build_basis(kind.spec(config.lambda)?, config.degree)?;
        let items: Vec<SymbolCoeffs> = normalized
            .par_iter()
            .map(|n| to_coeffs(n, &basis))
            .collect::<Result<_>>()?;
        let split;
        let (train, test): (Vec<&SymbolCoeffs>, Vec<&SymbolCoeffs>) = if config.resubstitution {
            (items.iter().collect(), items.iter().collect())
        } else {
            split = LabeledDataset::new(items, config.seed, config.ratio)?;
            (split.train().collect(), split.test().collect())
        };
        let index = KnnIndex::new(train.iter().copied(), &basis)?;
        if config.k_max > index.len() {
            return Err(Error::Invalid(format!(
                "k_max = {} exceeds the training set size {}",
                config.k_max,
                index.len()
            )));
        }
        let ks: Vec<usize> = (config.k_min..=config.k_max).collect();
        let hits: Vec<Vec<bool>> = test
            .par_iter()
            .map(|q| {
                let nb = index.neighbors(q, config.k_max)?;
                let truth = q.label.as_deref().unwrap_or_default();
                Ok(ks.iter().map(|&k| index.vote(&nb, k) == truth).collect())
            })
            .collect::<Result<_>>()?;
        for (j, &k) in ks.iter().enumerate() {
            let correct = hits.iter().filter(|h| h[j]).count();
            let accuracy = if test.is_empty() {
                0.0
            } else {
                correct as f64 / test.len() as f64
            };
            rows.push(SweepRow {
                basis: kind,
                k,
                accuracy,
                error_rate: 1.0 - accuracy,
            });
        }
        n_train = index.len();
        n_test = test.len();
    }
    Ok(SweepTable {
        rows,
        n_train,
        n_test,
    })
}
