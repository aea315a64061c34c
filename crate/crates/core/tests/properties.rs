mod common;

use std::io::Cursor;

use common::oracle::{self, OracleWeight};
use inkbasis::basis::{build_basis, project, synthesize, BasisKind, OrthoBasis};
use inkbasis::classify::{coeff_distance_sq, knn_classify, match_symbol, KnnIndex};
use inkbasis::ink::{
    arc_length_normalize, read_coeffs_jsonl, to_coeffs, write_coeffs_jsonl, InkTrace, Point, SplineOrder,
    SymbolCoeffs,
};
use inkbasis::poly::Weight;
use proptest::prelude::*;

fn ow(w: Weight) -> OracleWeight {
    match w {
        Weight::Unit => OracleWeight::Unit,
        Weight::InverseSqrt => OracleWeight::InverseSqrt,
    }
}

fn basis(kind: BasisKind, d: usize) -> OrthoBasis {
    build_basis(kind.spec(0.125).unwrap(), d).unwrap()
}

fn lambda_of(b: &OrthoBasis) -> f64 {
    if b.spec().has_derivative_term() {
        b.spec().lambda
    } else {
        0.0
    }
}

/// Monomial coefficients of `Σ c_i S_i`, built from the expansion matrix by the oracle.
fn oracle_series(c: &[f64], b: &OrthoBasis) -> Vec<f64> {
    let cheb = b.spec().weight == Weight::InverseSqrt;
    let mut out = vec![0.0; c.len()];
    for (ci, row) in c.iter().zip(b.expansion()) {
        for (o, m) in out.iter_mut().zip(oracle::classical_to_mono(row, cheb)) {
            *o += ci * m;
        }
    }
    out
}

fn kind_strategy() -> impl Strategy<Value = BasisKind> {
    prop::sample::select(BasisKind::ALL.to_vec())
}

fn trace_strategy() -> impl Strategy<Value = InkTrace> {
    prop::collection::vec((0.0f64..100.0, 0.0f64..100.0), 3..12)
        .prop_filter_map("degenerate", |p| {
            let t = InkTrace::new(p, None).ok()?;
            arc_length_normalize(&t, SplineOrder::Linear).ok()?;
            Some(t)
        })
}

fn coeffs_for(t: &InkTrace, b: &OrthoBasis) -> SymbolCoeffs {
    to_coeffs(&arc_length_normalize(t, SplineOrder::Linear).unwrap(), b).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn truncation_residual_never_grows(t in trace_strategy(), kind in kind_strategy()) {
        let n = arc_length_normalize(&t, SplineOrder::Linear).unwrap();
        let full = basis(kind, 14);
        let lambda = lambda_of(&full);
        let w = ow(full.spec().weight);
        let mut last = f64::INFINITY;
        for d in [0usize, 2, 4, 7, 10, 14] {
            let b = full.truncated(d).unwrap();
            let p = oracle_series(&project(&n.cx, &b).unwrap(), &b);
            let dp = oracle::mono_deriv(&p);
            let f = |s: f64| (n.cx.eval(s) - oracle::horner(&p, s)).powi(2)
                + lambda * (n.cx.eval_derivative(s) - oracle::horner(&dp, s)).powi(2);
            let r = oracle::piecewise_integral(&f, n.cx.breakpoints(), w);
            prop_assert!(r <= last + 1e-9, "d={d}: {r} > {last}");
            last = r;
        }
    }

    #[test]
    fn parseval(c in prop::collection::vec(-1.0f64..1.0, 1..13), kind in kind_strategy()) {
        let b = basis(kind, c.len() - 1);
        let p = oracle_series(&c, &b);
        let want = oracle::sobolev_inner(&p, &p, ow(b.spec().weight), lambda_of(&b));
        let got: f64 = c.iter().zip(b.sq_norms()).map(|(ci, h)| ci * ci * h).sum();
        prop_assert!((got - want).abs() <= 1e-9 * want.max(1.0));
        // synthesize agrees with the oracle series
        let s = synthesize(&c, &b).unwrap();
        for x in [-0.9, -0.3, 0.2, 0.8] {
            prop_assert!((s.eval(x) - oracle::horner(&p, x)).abs() <= 1e-10);
        }
    }

    #[test]
    fn coefficient_distance_is_curve_distance(a in trace_strategy(), c in trace_strategy(), kind in kind_strategy()) {
        let b = basis(kind, 8);
        let (ca, cc) = (coeffs_for(&a, &b), coeffs_for(&c, &b));
        let diff = |u: &[f64], v: &[f64]| {
            let mut out = vec![0.0];
            out.extend(u.iter().zip(v).map(|(p, q)| p - q));
            oracle_series(&out, &b)
        };
        let (dx, dy) = (diff(&ca.xs, &cc.xs), diff(&ca.ys, &cc.ys));
        let (w, l) = (ow(b.spec().weight), lambda_of(&b));
        let want = oracle::sobolev_inner(&dx, &dx, w, l) + oracle::sobolev_inner(&dy, &dy, w, l);
        let got = coeff_distance_sq(&ca, &cc, &b).unwrap();
        prop_assert!((got - want).abs() <= 1e-9 * want.max(1.0));
    }

    #[test]
    fn distance_is_a_metric(a in trace_strategy(), c in trace_strategy(), e in trace_strategy(), kind in kind_strategy()) {
        let b = basis(kind, 10);
        let (ca, cc, ce) = (coeffs_for(&a, &b), coeffs_for(&c, &b), coeffs_for(&e, &b));
        let d = |x: &SymbolCoeffs, y: &SymbolCoeffs| coeff_distance_sq(x, y, &b).unwrap().sqrt();
        prop_assert_eq!(d(&ca, &ca), 0.0);
        prop_assert_eq!(d(&ca, &cc), d(&cc, &ca));
        prop_assert!(d(&ca, &ce) <= d(&ca, &cc) + d(&cc, &ce) + 1e-12);
    }

    #[test]
    fn translation_and_scale_do_not_change_matches(
        models in prop::collection::vec(trace_strategy(), 2..6),
        sample in trace_strategy(),
        scale in 0.1f64..10.0,
        dx in -500.0f64..500.0,
    ) {
        let b = basis(BasisKind::ChebyshevSobolev, 10);
        let ms: Vec<SymbolCoeffs> = models.iter().map(|m| coeffs_for(m, &b)).collect();
        let plain = match_symbol(&coeffs_for(&sample, &b), &ms, &b).unwrap();
        let moved = match_symbol(&coeffs_for(&sample.transformed(scale, Point::new(dx, -dx)), &b), &ms, &b).unwrap();
        prop_assert_eq!(plain.model_index, moved.model_index);
    }

    #[test]
    fn jsonl_round_trip_is_bit_exact(
        items in prop::collection::vec(
            (
                prop::option::of("[a-z0-9]{1,4}"),
                prop::collection::vec(any::<f64>().prop_filter("finite", |v| v.is_finite()), 1..8),
                prop::option::of((-1e6f64..1e6, -1e6f64..1e6, 1e-6f64..1e6)),
            ),
            0..6,
        )
    ) {
        let items: Vec<SymbolCoeffs> = items
            .into_iter()
            .map(|(label, xs, frame)| SymbolCoeffs {
                label,
                basis_id: "legendre/d=7".into(),
                ys: xs.iter().rev().copied().collect(),
                xs,
                frame: frame.map(|(x0, y0, length)| inkbasis::ink::Frame { x0, y0, length }),
            })
            .collect();
        let mut buf = Vec::new();
        write_coeffs_jsonl(&mut buf, &items).unwrap();
        let back = read_coeffs_jsonl(Cursor::new(buf)).unwrap();
        prop_assert_eq!(back.len(), items.len());
        for (a, b) in back.iter().zip(&items) {
            prop_assert_eq!(&a.label, &b.label);
            prop_assert!(a.xs.iter().zip(&b.xs).all(|(u, v)| u.to_bits() == v.to_bits()));
            prop_assert!(a.ys.iter().zip(&b.ys).all(|(u, v)| u.to_bits() == v.to_bits()));
            prop_assert_eq!(a.frame, b.frame);
        }
    }
}

#[test]
fn match_argmin_agrees_with_quadrature() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    let mut random = |n: usize| {
        InkTrace::new(
            (0..n).map(|_| (rng.gen_range(0.0..50.0), rng.gen_range(0.0..50.0))).collect::<Vec<_>>(),
            None,
        )
        .unwrap()
    };
    for kind in BasisKind::ALL {
        let b = basis(kind, 10);
        let (w, l) = (ow(b.spec().weight), lambda_of(&b));
        for _ in 0..5 {
            let sample = random(7);
            let models: Vec<InkTrace> = (0..20).map(|_| random(7)).collect();
            let ms: Vec<SymbolCoeffs> = models.iter().map(|m| coeffs_for(m, &b)).collect();
            let cs = coeffs_for(&sample, &b);
            let got = match_symbol(&cs, &ms, &b).unwrap();
            // oracle: integrate the difference of the centred curves directly
            let ns = arc_length_normalize(&sample, SplineOrder::Linear).unwrap();
            let ps = project(&ns.cx, &b).unwrap();
            let qs = project(&ns.cy, &b).unwrap();
            let dists: Vec<f64> = models
                .iter()
                .map(|m| {
                    let nm = arc_length_normalize(m, SplineOrder::Linear).unwrap();
                    let (pm, qm) = (project(&nm.cx, &b).unwrap(), project(&nm.cy, &b).unwrap());
                    let mut total = 0.0;
                    for (u, v) in [(&ps, &pm), (&qs, &qm)] {
                        let mut diff: Vec<f64> = u.iter().zip(v.iter()).map(|(x, y)| x - y).collect();
                        diff[0] = 0.0;
                        let p = oracle_series(&diff, &b);
                        total += oracle::sobolev_inner(&p, &p, w, l);
                    }
                    total
                })
                .collect();
            let want = dists
                .iter()
                .enumerate()
                .min_by(|a, b| a.1.total_cmp(b.1))
                .map(|(i, _)| i)
                .unwrap();
            assert_eq!(got.model_index, want, "{kind}");
            assert!((got.distance_sq - dists[want]).abs() <= 1e-9 * dists[want].max(1.0));
        }
    }
}

#[test]
fn straight_line_coefficients() {
    let t = InkTrace::new([(0.0, 0.0), (2.0, 0.0)], None).unwrap();
    let b = build_basis(BasisKind::Chebyshev.spec(0.0).unwrap(), 3).unwrap();
    let c = coeffs_for(&t, &b);
    assert_eq!(c.basis_id, "chebyshev/d=3");
    for (got, want) in c.xs.iter().zip([1.0, 0.0, 0.0]) {
        assert!((got - want).abs() < 1e-12);
    }
    assert!(c.ys.iter().all(|v| v.abs() < 1e-12));
    let f = c.frame.unwrap();
    assert!((f.x0 - 1.0).abs() < 1e-12 && f.y0.abs() < 1e-12 && f.length == 2.0);
}

#[test]
fn one_nn_on_its_own_training_set_is_perfect() {
    let b = basis(BasisKind::LegendreSobolev, 10);
    let shapes: Vec<Vec<(f64, f64)>> = vec![
        vec![(0.0, 0.0), (1.0, 0.0), (1.0, 1.0)],
        vec![(0.0, 0.0), (0.0, 1.0), (1.0, 1.0)],
        vec![(0.0, 0.0), (1.0, 1.0), (2.0, 0.0), (3.0, 1.0)],
        vec![(0.0, 0.0), (2.0, 0.5), (0.0, 1.0)],
        vec![(0.0, 0.0), (1.0, 2.0), (2.0, 0.0)],
    ];
    let train: Vec<SymbolCoeffs> = shapes
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let t = InkTrace::new(p.clone(), Some(format!("c{}", i % 3))).unwrap();
            let mut c = coeffs_for(&t, &b);
            c.label = t.label.clone();
            c
        })
        .collect();
    let index = KnnIndex::new(&train, &b).unwrap();
    for q in &train {
        assert_eq!(index.classify(q, 1).unwrap(), q.label.as_deref().unwrap());
        assert_eq!(knn_classify(&train, q, 1, &b).unwrap(), q.label.as_deref().unwrap());
    }
}
