#![allow(clippy::needless_range_loop)]

use proptest::prelude::*;

use graphcut::fields::{recovery_sequence, repair_mass};
use graphcut::functionals::{discrete_f, limit_j, QuadratureKernel};
use graphcut::graphon::{cut_norm, hom_density_graph, CutNormMode};
use graphcut::harness::io::format_g17;
use graphcut::solvers::{
    brute_bisection, local_search_partition, minimize_j_with, project_feasible, swap_descent, transport_lmo,
    vertex_enumeration_blocks, ContinuumMethod, MinimizeOptions,
};
use graphcut::{Graph, LabelModel, Motif, PartitionSpec, StepGraphon, ThetaField};

fn graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (2..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let pairs = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)));
            let edges = pairs.zip(bits).filter(|(_, b)| *b).map(|(p, _)| p);
            Graph::from_edges(n, edges).unwrap()
        })
    })
}

fn even_graph(max_half: usize) -> impl Strategy<Value = Graph> {
    graph(2 * max_half).prop_filter("even order", |g| g.n() % 2 == 0)
}

fn signed_step(max_m: usize) -> impl Strategy<Value = StepGraphon> {
    (1..=max_m).prop_flat_map(|m| {
        (proptest::collection::vec(0.1f64..1.0, m), proptest::collection::vec(-1.0f64..1.0, m * (m + 1) / 2))
            .prop_map(move |(raw, upper)| {
                let total: f64 = raw.iter().sum();
                let widths = raw.iter().map(|w| w / total).collect();
                let mut values = vec![vec![0.0; m]; m];
                let mut it = upper.into_iter();
                for i in 0..m {
                    for j in i..m {
                        let v = it.next().unwrap();
                        values[i][j] = v;
                        values[j][i] = v;
                    }
                }
                StepGraphon::new(widths, values).unwrap()
            })
    })
}

/// Masses `c_k / m` for integer counts drawn at random.
fn grid_masses() -> impl Strategy<Value = (usize, Vec<f64>)> {
    (2usize..=10, 2usize..=4).prop_flat_map(|(m, n)| {
        proptest::collection::vec(0..n, m).prop_map(move |cells| {
            let mut counts = vec![0usize; n];
            for k in cells {
                counts[k] += 1;
            }
            (m, counts.iter().map(|&c| c as f64 / m as f64).collect())
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn graph_graphon_is_symmetric_and_w0(g in graph(10)) {
        let w = StepGraphon::from_graph(&g);
        let m = w.block_count();
        for i in 0..m {
            prop_assert_eq!(w.value(i, i), 0.0);
            for j in 0..m {
                prop_assert_eq!(w.value(i, j), w.value(j, i));
                prop_assert!((0.0..=1.0).contains(&w.value(i, j)));
            }
        }
        let edge_density = 2.0 * g.edge_count() as f64 / (m * m) as f64;
        prop_assert!((w.integral() - edge_density).abs() < 1e-12);
    }

    #[test]
    fn heuristic_cut_norm_never_exceeds_exact(w in signed_step(7), seed in 0u64..100) {
        let exact = cut_norm(&w, CutNormMode::Exact).unwrap();
        let heur = cut_norm(&w, CutNormMode::Heuristic { restarts: 3, seed }).unwrap();
        prop_assert!(heur.value <= exact.value + 1e-12);
        prop_assert!(exact.value <= w.l1_norm() + 1e-12);
        prop_assert!((exact.witness_value(&w) - exact.value).abs() < 1e-12);
        prop_assert!((heur.witness_value(&w) - heur.value).abs() < 1e-12);
    }

    #[test]
    fn cut_norm_is_symmetric_under_negation(w in signed_step(6)) {
        let neg = StepGraphon::new(
            w.widths().to_vec(),
            w.values().iter().map(|r| r.iter().map(|v| -v).collect()).collect(),
        ).unwrap();
        let a = cut_norm(&w, CutNormMode::Exact).unwrap().value;
        let b = cut_norm(&neg, CutNormMode::Exact).unwrap().value;
        prop_assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn hom_density_is_a_probability(g in graph(7)) {
        for f in [Motif::edge(), Motif::path3(), Motif::triangle(), Motif::cycle4()] {
            let t = hom_density_graph(&f, &g).unwrap();
            prop_assert!(*t.numer() <= *t.denom());
        }
    }

    #[test]
    fn spin_functional_counts_cut_edges(g in graph(12), seed in any::<u64>()) {
        let n = g.n();
        let labels: Vec<usize> = (0..n).map(|i| ((seed >> (i % 64)) & 1) as usize).collect();
        let f = discrete_f(&g, &labels, &LabelModel::spin()).unwrap();
        let in_s: Vec<bool> = labels.iter().map(|&k| k == 0).collect();
        prop_assert_eq!(f, 8.0 * g.cut_size(&in_s) as f64 / (n * n) as f64);
        let theta = ThetaField::from_labels(&labels, 2).unwrap();
        let j = limit_j(&StepGraphon::from_graph(&g).into(), &theta, &LabelModel::spin()).unwrap();
        prop_assert!((f - j).abs() < 1e-12);
    }

    #[test]
    fn heuristics_are_dominated_by_brute_force(g in even_graph(6), seed in 0u64..50) {
        let exact = brute_bisection(&g).unwrap();
        let spec = PartitionSpec::bisection(g.n()).unwrap();
        let heur = local_search_partition(&g, &spec, &LabelModel::spin(), seed, 3).unwrap();
        prop_assert!(heur.value >= exact.value - 1e-9);
        let labels = heur.labels().unwrap();
        prop_assert_eq!(labels.iter().filter(|&&k| k == 0).count(), g.n() / 2);
        let again = local_search_partition(&g, &spec, &LabelModel::spin(), seed, 3).unwrap();
        prop_assert_eq!(heur, again);
    }

    #[test]
    fn swap_descent_keeps_counts_and_never_increases(g in graph(12), seed in any::<u64>()) {
        let model = LabelModel::potts(3).unwrap();
        let labels: Vec<usize> = (0..g.n()).map(|i| ((seed >> (2 * (i % 32))) % 3) as usize).collect();
        let before = discrete_f(&g, &labels, &model).unwrap();
        let (after, _) = swap_descent(&g, &labels, &model).unwrap();
        for k in 0..3 {
            let count = |l: &[usize]| l.iter().filter(|&&x| x == k).count();
            prop_assert_eq!(count(&labels), count(&after));
        }
        prop_assert!(discrete_f(&g, &after, &model).unwrap() <= before + 1e-12);
    }

    #[test]
    fn projection_is_feasible_and_idempotent(
        (m, masses) in grid_masses(),
        seed in any::<u64>(),
    ) {
        let n = masses.len();
        let point: Vec<f64> = (0..m * n)
            .map(|i| ((seed.rotate_left(i as u32 * 7) % 4001) as f64 / 1000.0) - 2.0)
            .collect();
        let p = project_feasible(&point, m, &masses).unwrap();
        for a in 0..m {
            let row = &p[a * n..(a + 1) * n];
            prop_assert!(row.iter().all(|&v| v >= 0.0));
            prop_assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
        for k in 0..n {
            let mass: f64 = (0..m).map(|a| p[a * n + k]).sum::<f64>() / m as f64;
            prop_assert!((mass - masses[k]).abs() < 1e-12);
        }
        let q = project_feasible(&p, m, &masses).unwrap();
        for (x, y) in p.iter().zip(&q) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn transport_vertex_beats_feasible_points(
        (m, masses) in grid_masses(),
        grad_seed in any::<u64>(),
    ) {
        let n = masses.len();
        let grad: Vec<f64> = (0..m * n)
            .map(|i| ((grad_seed.rotate_left(i as u32 * 5) % 2001) as f64 / 1000.0) - 1.0)
            .collect();
        let v = transport_lmo(&grad, m, &masses).unwrap();
        let dot = |x: &[f64]| x.iter().zip(&grad).map(|(a, b)| a * b).sum::<f64>();
        let uniform: Vec<f64> = (0..m).flat_map(|_| masses.iter().cloned()).collect();
        prop_assert!(dot(&v) <= dot(&uniform) + 1e-12);
        prop_assert!(v.iter().all(|&x| x == 0.0 || x == 1.0));
    }

    #[test]
    fn block_minimum_lower_bounds_the_solver(
        cuts in proptest::sample::subsequence((1u32..8).collect::<Vec<_>>(), 1..=3),
        seed in 0u64..20,
    ) {
        // block widths on an 8-cell grid so the kernel is grid aligned
        let bounds: Vec<u32> = std::iter::once(0).chain(cuts).chain(std::iter::once(8)).collect();
        let lambda: Vec<f64> = bounds.windows(2).map(|b| (b[1] - b[0]) as f64 / 8.0).collect();
        let w = StepGraphon::new(lambda.clone(), (0..lambda.len())
            .map(|i| (0..lambda.len()).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect()).unwrap();
        let exact = vertex_enumeration_blocks(&lambda, 0.5).unwrap().min_j;
        let kernel = QuadratureKernel::from_step(&w, 8).unwrap();
        for method in [ContinuumMethod::Pgd, ContinuumMethod::FrankWolfe] {
            let opts = MinimizeOptions { method, seed, restarts: 2, ..Default::default() };
            let r = minimize_j_with(&kernel, &LabelModel::spin(), &[0.5, 0.5], &opts).unwrap();
            prop_assert!(r.value >= exact - 1e-9, "{} < {}", r.value, exact);
            let again = minimize_j_with(&kernel, &LabelModel::spin(), &[0.5, 0.5], &opts).unwrap();
            prop_assert_eq!(&r, &again);
            let theta = r.theta().unwrap().unwrap();
            prop_assert!((theta.mass()[0] - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn recovery_sequence_preserves_mass(q in 1usize..=4, reps in 1usize..=3, seed in any::<u64>()) {
        let m = 3;
        let rows: Vec<Vec<f64>> = (0..m)
            .map(|a| {
                let p = ((seed >> (8 * a)) % (q as u64 + 1)) as f64;
                vec![p / q as f64, 1.0 - p / q as f64]
            })
            .collect();
        let theta = ThetaField::from_rows(rows).unwrap();
        let fine = recovery_sequence(&theta, m * q * reps).unwrap();
        prop_assert!(fine.is_spin_valued());
        prop_assert!((fine.mass()[0] - theta.mass()[0]).abs() < 1e-12);
    }

    #[test]
    fn repair_reaches_target_counts(labels in proptest::collection::vec(0usize..2, 2..=20)) {
        let n = labels.len();
        let theta = ThetaField::from_labels(&labels, 2).unwrap();
        let spec = PartitionSpec::new(vec![0.5, 0.5], vec![n / 2, n - n / 2]).unwrap();
        let fixed = repair_mass(&theta, &spec).unwrap();
        prop_assert_eq!(fixed.counts().unwrap(), vec![n / 2, n - n / 2]);
        let changed = (0..n).filter(|&a| fixed.row(a) != theta.row(a)).count();
        let surplus = theta.counts().unwrap()[0].abs_diff(n / 2);
        prop_assert_eq!(changed, surplus);
    }

    #[test]
    fn g17_round_trips(x in any::<f64>().prop_filter("finite", |x| x.is_finite())) {
        prop_assert_eq!(format_g17(x).parse::<f64>().unwrap(), x);
    }
}
