//! Cross-module invariants, each checked against an independent route:
//! brute-force enumeration, explicit index algebra, or a second contraction
//! strategy.

mod common;

use proptest::prelude::*;

use common::*;
use num_traits::ToPrimitive;
use tensortiles::constructions::{self, ClassicalTileset};
use tensortiles::oracle::{self, BoundarySpec};
use tensortiles::{Budget, C64, Shape, Tensor, TensorialDomino};

const EPS: f64 = 1e-9;

fn budget() -> Budget {
    Budget::default()
}

// ---------------------------------------------------------------------------
// tensor arithmetic
// ---------------------------------------------------------------------------

fn fixed_dim_tensor(dim: usize, arity: usize) -> impl Strategy<Value = Tensor> {
    let len = dim.pow(arity as u32);
    proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), len).prop_map(move |parts| {
        let coeffs = parts.into_iter().map(|(re, im)| C64::new(re, im)).collect();
        Tensor::new(dim, arity, coeffs).expect("sizes agree")
    })
}

fn matching_pair(max_dim: usize, arity: usize) -> impl Strategy<Value = (Tensor, Tensor)> {
    (1..=max_dim)
        .prop_flat_map(move |d| (fixed_dim_tensor(d, arity), fixed_dim_tensor(d, arity)))
}

proptest! {
    #[test]
    fn contracting_a_product_is_matrix_multiplication(
        (a, b) in matching_pair(4, 2)
    ) {
        let via_contraction = a.tensor_product(&b).unwrap().contract(1, 2).unwrap();
        let direct = a.matmul(&b).unwrap();
        for (x, y) in via_contraction.coeffs().iter().zip(direct.coeffs()) {
            prop_assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn permutation_round_trips_exactly(
        t in (1..=3usize).prop_flat_map(|d| fixed_dim_tensor(d, 4)),
        seed in any::<u64>(),
    ) {
        let mut r = rng(seed);
        let mut sigma: Vec<usize> = (0..4).collect();
        for i in (1..4).rev() {
            sigma.swap(i, rand::Rng::gen_range(&mut r, 0..=i));
        }
        let mut inverse = vec![0usize; 4];
        for (i, &s) in sigma.iter().enumerate() {
            inverse[s] = i;
        }
        let round = t.permute(&sigma).unwrap().permute(&inverse).unwrap();
        prop_assert_eq!(round, t);
    }

    #[test]
    fn norm_is_multiplicative_over_products(
        (a, b) in matching_pair(3, 2)
    ) {
        let p = a.tensor_product(&b).unwrap();
        let lhs = p.norm_sq();
        let rhs = a.norm_sq() * b.norm_sq();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(1.0));
    }
}

#[test]
fn direct_sum_and_kron_are_associative() {
    let mut r = rng(11);
    for arity in [2usize, 4] {
        for _ in 0..10 {
            let a = random_tensor(&mut r, 2, arity);
            let b = random_tensor(&mut r, 3, arity);
            let c = random_tensor(&mut r, 2, arity);
            let left = a.direct_sum(&b).unwrap().direct_sum(&c).unwrap();
            let right = a.direct_sum(&b.direct_sum(&c).unwrap()).unwrap();
            assert_eq!(left.dim(), right.dim());
            for (x, y) in left.coeffs().iter().zip(right.coeffs()) {
                assert!((x - y).norm() < 1e-12);
            }

            let left = a.kron_per_index(&b).unwrap().kron_per_index(&c).unwrap();
            let right = a.kron_per_index(&b.kron_per_index(&c).unwrap()).unwrap();
            assert_eq!(left.dim(), right.dim());
            for (x, y) in left.coeffs().iter().zip(right.coeffs()) {
                assert!((x - y).norm() < 1e-12);
            }
        }
    }
}

// ---------------------------------------------------------------------------
// dominoes
// ---------------------------------------------------------------------------

/// Quantum domino whose support is strictly upper triangular (an acyclic
/// domino graph): every power trace up to the dimension must vanish.
#[test]
fn acyclic_support_forces_vanishing_traces() {
    let mut r = rng(23);
    for _ in 0..40 {
        let dim = rand::Rng::gen_range(&mut r, 2..=5usize);
        let mut t = Tensor::zeros(dim, 2);
        for x in 0..dim {
            for y in (x + 1)..dim {
                if rand::Rng::gen_bool(&mut r, 0.7) {
                    t.set(&[x, y], gaussian(&mut r));
                }
            }
        }
        let norm = t.norm_sq().sqrt();
        if norm == 0.0 {
            continue;
        }
        let q = TensorialDomino::new(t.scaled(C64::new(1.0 / norm, 0.0))).unwrap();
        assert!(q.is_quantum(1e-12));
        for (k, (trace, scale)) in q.trace_sequence().iter().enumerate() {
            assert!(
                trace.norm() <= 1e-9 * scale.max(1.0),
                "tr(T^{}) = {trace} should vanish",
                k + 1
            );
        }
        assert!(q.trace_aperiodic(EPS));
    }
}

#[test]
fn boundary_amplitudes_equal_exhaustive_path_counts() {
    let mut r = rng(31);
    for colors in 1..=3usize {
        for _ in 0..8 {
            let mut pairs = Vec::new();
            let mut t = Tensor::zeros(colors, 2);
            for x in 0..colors {
                for y in 0..colors {
                    if rand::Rng::gen_bool(&mut r, 0.55) {
                        pairs.push((x, y));
                        t.set(&[x, y], C64::new(1.0, 0.0));
                    }
                }
            }
            let domino = TensorialDomino::new(t).unwrap();
            for n in 0..=8u32 {
                for a in 0..colors {
                    for b in 0..colors {
                        let count = oracle::count_paths(&pairs, colors, n, a, b).unwrap();
                        let amplitude = domino.boundary_amplitude(n, a, b).unwrap();
                        assert_eq!(amplitude.im, 0.0);
                        assert_eq!(amplitude.re, count.to_f64().unwrap(), "n={n} a={a} b={b}");
                    }
                }
            }
        }
    }
}

#[test]
fn trace_of_product_powers_is_multiplicative() {
    let mut r = rng(37);
    for _ in 0..20 {
        let da = rand::Rng::gen_range(&mut r, 1..=3usize);
        let a = random_domino(&mut r, da);
        let db = rand::Rng::gen_range(&mut r, 1..=3usize);
        let b = random_domino(&mut r, db);
        let p = a.product(&b);
        for n in 1..=5 {
            let lhs = p.periodic_amplitude(n);
            let rhs = a.periodic_amplitude(n) * b.periodic_amplitude(n);
            assert!((lhs - rhs).norm() <= 1e-9 * rhs.norm().max(1.0), "n = {n}");
        }
    }
}

#[test]
fn find_large_periodic_respects_the_tolerance() {
    let mut r = rng(41);
    for _ in 0..30 {
        let dim = rand::Rng::gen_range(&mut r, 2..=4usize);
        let d = random_domino(&mut r, dim);
        for n_min in [1u32, 3, 7] {
            if let Some(k) = d.find_large_periodic(n_min, EPS) {
                assert!(k >= n_min);
                assert!(d.periodic_amplitude(k).norm() > EPS);
            } else {
                assert!(d.trace_aperiodic(EPS));
            }
        }
    }
}

// ---------------------------------------------------------------------------
// tiles
// ---------------------------------------------------------------------------

/// Contracting a union splits into blocks: coefficients with all boundary
/// indices in the first block reproduce the first summand's contraction,
/// all-second-block ones the second's. On connected shapes the mixed blocks
/// vanish as well (on a disconnected shape each component picks its own
/// block, so mixed boundary coefficients survive). Exact on integer tiles.
#[test]
fn union_contraction_has_exact_block_structure() {
    let mut r = rng(43);
    for shape in all_subshapes(2, 2) {
        if shape.is_empty() {
            continue;
        }
        let a = random_integer_tile(&mut r, 2);
        let b = random_integer_tile(&mut r, 2);
        let u = a.union(&b);
        let ua = a.contract_shape(&shape, budget()).unwrap();
        let ub = b.contract_shape(&shape, budget()).unwrap();
        let uu = u.contract_shape(&shape, budget()).unwrap();
        let f = uu.free_bonds().len();
        let da = a.dim();
        let du = u.dim();
        let mut idx = vec![0usize; f];
        loop {
            let got = uu.get(&idx);
            if idx.iter().all(|&i| i < da) {
                assert_eq!(got, ua.get(&idx), "first block at {idx:?}");
            } else if idx.iter().all(|&i| i >= da) {
                let shifted: Vec<usize> = idx.iter().map(|&i| i - da).collect();
                assert_eq!(got, ub.get(&shifted), "second block at {idx:?}");
            } else if shape.is_connected() {
                assert_eq!(got, C64::new(0.0, 0.0), "mixed block at {idx:?}");
            }
            if !increment(&mut idx, du) {
                break;
            }
        }
    }
}

fn increment(idx: &mut [usize], dim: usize) -> bool {
    for k in (0..idx.len()).rev() {
        idx[k] += 1;
        if idx[k] < dim {
            return true;
        }
        idx[k] = 0;
    }
    false
}

/// A nonzero contraction stays nonzero on sub-shapes.
#[test]
fn subshape_monotonicity() {
    let mut r = rng(47);
    let shapes = all_subshapes(3, 3);
    for round in 0..50 {
        // alternate dense generic tiles and sparse possibilistic ones (the
        // sparse ones actually produce zero contractions)
        let tile = if round % 2 == 0 {
            random_tile(&mut r, 2)
        } else {
            random_tileset(&mut r, 2, 0.3).to_tile()
        };
        let big = &shapes[rand::Rng::gen_range(&mut r, 0..shapes.len())];
        let keep: Vec<(i64, i64)> = big
            .cells()
            .filter(|_| rand::Rng::gen_bool(&mut r, 0.6))
            .collect();
        let small = Shape::new(keep);
        if tile.shape_nonzero(big, EPS, budget()).unwrap() {
            assert!(
                tile.shape_nonzero(&small, EPS, budget()).unwrap(),
                "sub-shape of a nonzero shape went to zero"
            );
        }
    }
}

#[test]
fn transfer_traces_match_materialized_traces_on_random_tiles() {
    let mut r = rng(53);
    for _ in 0..10 {
        let tile = random_tile(&mut r, 2);
        for m in 1..=3u32 {
            for n in 1..=3u32 {
                let fast = tile.rect_trace(m, n, budget()).unwrap();
                let slow = tile
                    .contract_shape(&Shape::rect(m, n), budget())
                    .unwrap()
                    .trace_mod((m as i64, 0))
                    .unwrap()
                    .trace_mod((0, n as i64))
                    .unwrap()
                    .scalar_value()
                    .unwrap();
                assert!(
                    (fast - slow).norm() <= 1e-9 * slow.norm().max(1.0),
                    "({m},{n}): {fast} vs {slow}"
                );
            }
        }
    }
}

#[test]
fn contraction_coefficients_match_enumeration_on_sample_shapes() {
    let mut r = rng(59);
    let shapes =
        [Shape::rect(2, 2), Shape::new([(0, 0), (1, 0), (0, 1)]), five_cell_shape()];
    for colors in [2usize, 3] {
        let ts = random_tileset(&mut r, colors, 0.25);
        let lift = ts.to_tile();
        for shape in &shapes {
            assert_contraction_matches_counts(&ts, &lift, shape);
        }
    }
}

fn assert_contraction_matches_counts(
    ts: &ClassicalTileset,
    lift: &tensortiles::TensorialTile,
    shape: &Shape,
) {
    let boundary = lift.contract_shape(shape, budget()).unwrap();
    let buckets = oracle::count_tilings_by_boundary(ts, shape, 12).unwrap();
    let f = boundary.free_bonds().len();
    let mut idx = vec![0usize; f];
    let zero = num_bigint::BigUint::default();
    loop {
        let coefficient = boundary.get(&idx);
        let count = buckets.get(&idx).unwrap_or(&zero);
        assert_eq!(coefficient.im, 0.0);
        assert_eq!(coefficient.re, count.to_f64().unwrap(), "boundary {idx:?}");
        if !increment(&mut idx, lift.dim()) {
            break;
        }
    }
}

#[test]
fn toroidal_counts_match_rect_traces() {
    let mut r = rng(61);
    for colors in [2usize, 3] {
        let ts = random_tileset(&mut r, colors, 0.3);
        let lift = ts.to_tile();
        for m in 1..=3u32 {
            for n in 1..=3u32 {
                let count =
                    oracle::count_tilings(&ts, &Shape::rect(m, n), &BoundarySpec::toroidal())
                        .unwrap();
                let trace = lift.rect_trace(m, n, budget()).unwrap();
                assert_eq!(trace.im, 0.0);
                assert_eq!(trace.re, count.to_f64().unwrap(), "({m},{n})");
            }
        }
    }
}

// ---------------------------------------------------------------------------
// constructions
// ---------------------------------------------------------------------------

#[test]
fn factory_outputs_round_trip_through_tile_files() {
    let coins =
        [constructions::CoinOperator::hadamard(), constructions::CoinOperator::classical()];
    let tensors = vec![
        constructions::dimer().into_tensor(),
        constructions::weighted_dimer().into_tensor(),
        constructions::nilpotent_tile_default().into_tensor(),
        constructions::quantum_aperiodic(&constructions::dimer()).into_tensor(),
        constructions::walk_tile(&coins[0]).into_tensor(),
        constructions::walk_tile(&coins[1]).into_tensor(),
        constructions::fixture_aperiodic().to_tile().into_tensor(),
        constructions::cancelling_matrix(),
    ];
    for t in tensors {
        let json = tensortiles::io::tensor_to_json(&t);
        let back = tensortiles::io::tensor_from_json(&json).unwrap();
        assert_eq!(back.coeffs(), t.coeffs(), "bit-for-bit round trip");
        assert_eq!(back.dim(), t.dim());
    }
}

#[test]
fn cancelling_tile_vanishes_on_every_multi_cell_connected_shape() {
    let tile = constructions::nilpotent_tile_default();
    for shape in all_subshapes(3, 3) {
        if !shape.is_connected() || shape.is_empty() {
            continue;
        }
        let nonzero = tile.shape_nonzero(&shape, EPS, budget()).unwrap();
        assert_eq!(nonzero, shape.len() == 1, "shape of {} cells", shape.len());
    }
}

#[test]
fn walk_probability_is_conserved_across_step_counts() {
    for steps in 0..=5 {
        let d = tensortiles::walk::simulate_walk(
            &constructions::CoinOperator::hadamard(),
            steps,
            11,
            budget(),
        )
        .unwrap();
        assert!((d.renormalized().iter().map(|[l, r]| l + r).sum::<f64>() - 1.0).abs() < 1e-12);
        assert!((d.total() - 1.0).abs() < 1e-9, "unitary coin conserves raw probability");
    }
}
