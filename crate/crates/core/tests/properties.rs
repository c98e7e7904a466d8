//! Property tests for the module invariants.

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use toric_mle::birch::{solve_birch, SolverOptions};
use toric_mle::closedform::{self, radicals, relative_residual, solve_closed_form};
use toric_mle::lattice::{
    boundary_lattice_points, catalog, polytope_to_matrix, singularity_profile, LatticePolygon,
};
use toric_mle::mldegree::aberth::{certificate, complex_roots};
use toric_mle::mldegree::{likelihood_equations, sylvester_resultant};
use toric_mle::model::{
    self, kernel_binomials, log_likelihood, parametrize, sufficient_statistic, variety_residual,
    DataVector, ToricModel,
};
use toric_mle::poly::{rat, MultivariatePolynomial, Rational, UnivariatePolynomial};

fn surfaces() -> Vec<ToricModel> {
    let mut v = vec![ToricModel::s3(), ToricModel::s4(), ToricModel::s4_a2(), ToricModel::s4_a3()];
    v.extend(catalog().iter().map(|e| e.model().unwrap()));
    v
}

fn any_model() -> impl Strategy<Value = ToricModel> {
    let all = surfaces();
    (0..all.len()).prop_map(move |i| all[i].clone())
}

fn closed_form_model() -> impl Strategy<Value = ToricModel> {
    prop::sample::select(closedform::MODELS.to_vec()).prop_map(|l| model::named(l).unwrap())
}

fn theta(d: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec((-3.0f64..3.0).prop_map(|e| 10f64.powf(e)), d)
}

fn data(m: usize) -> impl Strategy<Value = DataVector> {
    prop::collection::vec(1u64..=1000, m).prop_map(|u| DataVector::new(u).unwrap())
}

fn model_and_data(s: impl Strategy<Value = ToricModel>) -> impl Strategy<Value = (ToricModel, DataVector)> {
    s.prop_flat_map(|m| {
        let n = m.cols();
        (Just(m), data(n))
    })
}

/// Products of elementary matrices and sign flips.
fn unimodular() -> impl Strategy<Value = [[i64; 2]; 2]> {
    prop::collection::vec((0u8..4, -3i64..=3), 1..6).prop_map(|ops| {
        ops.into_iter().fold([[1, 0], [0, 1]], |m, (kind, k)| {
            let e = match kind {
                0 => [[1, k], [0, 1]],
                1 => [[1, 0], [k, 1]],
                2 => [[0, 1], [1, 0]],
                _ => [[-1, 0], [0, 1]],
            };
            [
                [e[0][0] * m[0][0] + e[0][1] * m[1][0], e[0][0] * m[0][1] + e[0][1] * m[1][1]],
                [e[1][0] * m[0][0] + e[1][1] * m[1][0], e[1][0] * m[0][1] + e[1][1] * m[1][1]],
            ]
        })
    })
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0f64, |acc, (x, y)| acc.max((x - y).abs()))
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Column permutations that preserve the kernel lattice of the model.
fn automorphisms(model: &ToricModel) -> Vec<Vec<usize>> {
    let kernel: Vec<Vec<i64>> = kernel_binomials(model).iter().map(|b| b.exponent_vector()).collect();
    permutations(model.cols())
        .into_iter()
        .filter(|perm| {
            kernel.iter().all(|k| {
                model.matrix().iter().all(|row| {
                    (0..model.cols()).map(|j| row[perm[j]] * k[j]).sum::<i64>() == 0
                })
            })
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn unimodular_maps_keep_profile_and_boundary(idx in 0usize..16, m in unimodular()) {
        let e = &catalog()[idx];
        let q = e.polygon.transformed(m).unwrap();
        prop_assert_eq!(singularity_profile(&q).unwrap(), singularity_profile(&e.polygon).unwrap());
        prop_assert_eq!(
            boundary_lattice_points(&q).unwrap().len(),
            boundary_lattice_points(&e.polygon).unwrap().len()
        );
    }

    #[test]
    fn lifted_matrices_are_homogeneous_and_nonnegative(idx in 0usize..16, m in unimodular()) {
        let q: LatticePolygon = catalog()[idx].polygon.transformed(m).unwrap();
        let a = polytope_to_matrix(&q).unwrap();
        let c = a.column_sum();
        for j in 0..a.cols() {
            prop_assert_eq!(a.column(j).iter().sum::<i64>(), c);
            prop_assert!(a.column(j).iter().all(|&x| x >= 0));
        }
    }

    #[test]
    fn parametrize_is_a_distribution_on_the_variety(
        (m, t) in any_model().prop_flat_map(|m| { let d = m.rows(); (Just(m), theta(d)) })
    ) {
        let p = parametrize(&m, &t).unwrap();
        prop_assert!((p.iter().sum::<f64>() - 1.0).abs() <= 1e-14);
        prop_assert!(variety_residual(&m, &p).unwrap() <= 1e-12);
    }

    #[test]
    fn moments_lie_in_the_relative_interior(
        (m, t) in any_model().prop_flat_map(|m| { let d = m.rows(); (Just(m), prop::collection::vec(0.1f64..10.0, d)) })
    ) {
        let p = parametrize(&m, &t).unwrap();
        for row in m.matrix() {
            let mean: f64 = row.iter().zip(p.iter()).map(|(&a, q)| a as f64 * q).sum();
            let lo = *row.iter().min().unwrap() as f64;
            let hi = *row.iter().max().unwrap() as f64;
            prop_assert!(lo < mean && mean < hi);
        }
    }

    #[test]
    fn parametrize_ignores_overall_scale(
        (m, t) in any_model().prop_flat_map(|m| { let d = m.rows(); (Just(m), theta(d)) }),
        s in -3.0f64..3.0,
    ) {
        let s = 10f64.powf(s);
        let scaled: Vec<f64> = t.iter().map(|x| x * s).collect();
        let p = parametrize(&m, &t).unwrap();
        let q = parametrize(&m, &scaled).unwrap();
        prop_assert!(max_abs_diff(&p, &q) <= 1e-14);
    }

    #[test]
    fn sufficient_statistic_sums_to_c_times_n((m, u) in model_and_data(any_model())) {
        let b = sufficient_statistic(&m, &u).unwrap();
        prop_assert_eq!(b.0.iter().sum::<i64>(), m.column_sum() * u.sample_size() as i64);
    }

    #[test]
    fn likelihood_equations_are_dependent((m, u) in model_and_data(any_model())) {
        let sys = likelihood_equations(&m, &u).unwrap();
        let total = sys.raw.iter().fold(MultivariatePolynomial::zero(m.rows()), |acc, g| &acc + g);
        prop_assert!(total.is_zero());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn birch_estimate_is_a_positive_local_maximum((m, u) in model_and_data(any_model()), seed in any::<u64>()) {
        let r = solve_birch(&m, &u, &SolverOptions::default()).unwrap();
        prop_assert!(r.p_hat.iter().all(|&p| p > 0.0));
        prop_assert!((r.p_hat.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
        let best = log_likelihood(&r.p_hat, &u).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..50 {
            let nudged: Vec<f64> = r.theta_hat.iter().map(|t| t * (1.0 + 1e-3 * rng.random_range(-1.0..1.0))).collect();
            let q = parametrize(&m, &nudged).unwrap();
            prop_assert!(log_likelihood(&q, &u).unwrap() <= best + 1e-9);
        }
    }

    #[test]
    fn birch_estimate_is_equivariant((m, u) in model_and_data(closed_form_model()), pick in any::<prop::sample::Index>()) {
        let autos = automorphisms(&m);
        prop_assert!(autos.len() > 1);
        let perm = &autos[pick.index(autos.len())];
        let opts = SolverOptions::default();
        let r = solve_birch(&m, &u, &opts).unwrap();
        let v = DataVector::new(perm.iter().map(|&j| u.counts()[j]).collect()).unwrap();
        let s = solve_birch(&m, &v, &opts).unwrap();
        let expected: Vec<f64> = perm.iter().map(|&j| r.p_hat[j]).collect();
        prop_assert!(max_abs_diff(&s.p_hat, &expected) <= 1e-9);
    }

    #[test]
    fn closed_form_polynomials_vanish_at_the_estimate((m, u) in model_and_data(closed_form_model())) {
        let b = solve_birch(&m, &u, &SolverOptions::default()).unwrap();
        let c = solve_closed_form(m.label(), &u).unwrap();
        prop_assert!(max_abs_diff(&b.p_hat, &c.result.p_hat) <= 1e-8);
        prop_assert!(max_abs_diff(&parametrize(&m, &c.result.theta_hat).unwrap(), &c.result.p_hat) <= 1e-10);
        for piv in &c.pivots {
            let k = piv.coordinate - 1;
            let poly = closedform::eliminate_to_univariate(&m, &u, k).unwrap();
            let deg = poly.degree().unwrap();
            if m.label() == "S3" {
                prop_assert_eq!(deg, 3);
            } else {
                prop_assert!(deg <= 4);
            }
            prop_assert!(relative_residual(&poly, b.p_hat[k]) <= 1e-8);
        }
    }
}

fn small_poly(coeffs: &[i64]) -> MultivariatePolynomial {
    // coefficients of 1, x, y, x y, y^2 in that order
    let exps = [[0, 0], [1, 0], [0, 1], [1, 1], [0, 2]];
    let mut p = MultivariatePolynomial::zero(2);
    for (e, &c) in exps.iter().zip(coeffs) {
        p.add_term(e.to_vec(), rat(c));
    }
    p
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn resultant_vanishes_at_common_roots(
        a in -4i64..=4,
        c in -4i64..=4,
        q in prop::collection::vec(-3i64..=3, 20),
    ) {
        let x = MultivariatePolynomial::var(2, 0);
        let y = MultivariatePolynomial::var(2, 1);
        let k = |v: i64| MultivariatePolynomial::constant(2, rat(v));
        let xc = &x - &k(c);
        let ya = &y - &k(a);
        let f = &(&xc * &small_poly(&q[0..5])) + &(&ya * &small_poly(&q[5..10]));
        let g = &(&xc * &small_poly(&q[10..15])) + &(&ya * &small_poly(&q[15..20]));
        prop_assume!(f.degree_in(1) > 0 && g.degree_in(1) > 0);
        let r = sylvester_resultant(&f, &g, 1).unwrap();
        prop_assert!(r.eval(&[rat(c), rat(0)]) == Rational::from_integer(0.into()));
    }

    #[test]
    fn aberth_roots_are_certified(c in prop::collection::vec(-50i64..=50, 3..14)) {
        let mut c = c;
        if *c.last().unwrap() == 0 {
            *c.last_mut().unwrap() = 1;
        }
        let p = UnivariatePolynomial::from_i64(&c);
        let roots = complex_roots(&p).unwrap();
        prop_assert_eq!(roots.len(), p.degree().unwrap());
        for r in roots {
            prop_assert!(r.residual <= 1e-8);
        }
    }

    #[test]
    fn radical_roots_are_certified(c in prop::collection::vec(-50i64..=50, 4..=5)) {
        let mut c = c;
        if *c.last().unwrap() == 0 {
            *c.last_mut().unwrap() = 1;
        }
        let p = UnivariatePolynomial::from_i64(&c);
        let z = radicals::roots_up_to_quartic(&p).unwrap();
        let cc: Vec<_> = p.to_f64_normalized().into_iter().map(|x| num_complex::Complex64::new(x, 0.0)).collect();
        for r in z {
            prop_assert!(certificate(&cc, r) <= 1e-8);
        }
    }
}
