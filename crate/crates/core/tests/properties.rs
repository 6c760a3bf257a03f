mod common;

use common::*;
use eventodist::poisson::poisson_pmf;
use eventodist::sampler::{BernoulliSampler, EmpiricalDistribution};
use eventodist::{
    accumulate, approximate_binomial_pmf, convergence_report, BinomialMv, ConstraintSystem,
    EventSet, EventologicalDistribution, PoissonIntensities, PoissonMv, RandomStream,
};
use num_rational::BigRational;
use proptest::prelude::*;

/// Integer weights per subset, at least one positive.
fn weights(n_events: usize, lo: u64) -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(lo..10u64, 1 << n_events)
        .prop_filter("total mass", |w| w.iter().any(|&v| v > 0))
}

fn exact_from(n_events: usize, w: &[u64]) -> EventologicalDistribution<BigRational> {
    let total: u64 = w.iter().sum();
    let p = w.iter().map(|&v| ratio(v as i64, total as i64)).collect();
    EventologicalDistribution::new(labels(n_events), p).unwrap()
}

fn float_from(n_events: usize, w: &[u64]) -> EventologicalDistribution<f64> {
    exact_from(n_events, w).to_f64()
}

fn dist(max_events: usize, lo: u64) -> impl Strategy<Value = EventologicalDistribution<f64>> {
    (1..=max_events).prop_flat_map(move |n| weights(n, lo).prop_map(move |w| float_from(n, &w)))
}

fn intensities_of(n_events: usize, max: f64) -> impl Strategy<Value = PoissonIntensities> {
    prop::collection::vec(0.0..max, (1 << n_events) - 1)
        .prop_map(move |l| PoissonIntensities::new(labels(n_events), l).unwrap())
}

fn intensities(max_events: usize, max: f64) -> impl Strategy<Value = PoissonIntensities> {
    (1..=max_events).prop_flat_map(move |n| intensities_of(n, max))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn binomial_table_sums_to_one(d in dist(3, 0), trials in 1u64..=6) {
        let b = BinomialMv::new(d, trials).unwrap();
        let total: f64 = b.table().unwrap().iter().map(|(_, p)| p).sum();
        prop_assert!((total - 1.0).abs() <= 1e-10, "{total}");
    }

    #[test]
    fn joint_probability_is_monotone(d in dist(4, 0), a in 0usize..16, b in 0usize..16) {
        let full = d.events().full_mask();
        let (small, large) = (a & b & full, (a | b) & full);
        prop_assert!(d.superset_sum(large) <= d.superset_sum(small) + 1e-15);
    }

    #[test]
    fn marginal_is_singleton_joint(d in dist(3, 0)) {
        for (i, x) in d.events().labels().iter().enumerate() {
            prop_assert_eq!(d.marginal_prob(x).unwrap(), d.joint_prob(&[x]).unwrap());
            let var = d.covariance_by_index(i, i);
            let p = d.marginal_by_index(i);
            prop_assert!((var - p * (1.0 - p)).abs() <= 1e-15);
        }
    }

    #[test]
    fn relabeling_permutes_the_pmf(w in weights(2, 0), trials in 1u64..=5, nx in 0u64..=5, ny in 0u64..=5) {
        // Swapping the roles of the two events swaps the coordinates.
        let d = exact_from(2, &w);
        let swapped = exact_from(2, &[w[0], w[2], w[1], w[3]]);
        let a = BinomialMv::new(d, trials).unwrap();
        let b = BinomialMv::new(swapped, trials).unwrap();
        prop_assert_eq!(a.pmf(&[nx, ny]).unwrap(), b.pmf(&[ny, nx]).unwrap());
    }

    #[test]
    fn relabeled_events_keep_their_terraces(w in weights(2, 0)) {
        // Declaring ["y","x"] sorts to the same canonical order.
        let events = EventSet::new(["y", "x"]).unwrap();
        prop_assert_eq!(events.labels(), ["x", "y"]);
        let d = exact_from(2, &w).to_f64();
        let terraces: [(&[&str], f64); 4] = [
            (&[], *d.p(0)),
            (&["x"], *d.p(1)),
            (&["y"], *d.p(2)),
            (&["y", "x"], *d.p(3)),
        ];
        let rebuilt = EventologicalDistribution::from_terraces(events, terraces).unwrap();
        prop_assert_eq!(rebuilt.probabilities(), d.probabilities());
    }

    #[test]
    fn fast_paths_match_the_lattice(d in dist(2, 0), trials in 1u64..=12, nx in 0u64..=12, ny in 0u64..=12) {
        let n = d.events().len();
        let b = BinomialMv::new(d, trials).unwrap();
        let at: Vec<u64> = [nx, ny][..n].to_vec();
        let reference = b.pmf_lattice(&at).unwrap();
        let fast = if n == 1 { b.pmf_univariate(&at) } else { b.pmf_bivariate(&at) }.unwrap();
        prop_assert!(rel_close(fast, reference, 1e-12), "{fast:e} vs {reference:e}");
        prop_assert!(rel_close(b.pmf(&at).unwrap(), reference, 1e-12));
    }

    #[test]
    fn partition_path_matches_the_lattice(w in prop::collection::vec(1u64..10, 3), at in prop::collection::vec(0u64..=6, 3)) {
        let mut p = vec![0.0; 8];
        let total: u64 = w.iter().sum();
        for (i, &v) in w.iter().enumerate() {
            p[1 << i] = v as f64 / total as f64;
        }
        let d = EventologicalDistribution::renormalized(labels(3), p).unwrap();
        let b = BinomialMv::new(d, 6).unwrap();
        let reference = b.pmf_lattice(&at).unwrap();
        let fast = b.pmf_partition(&at).unwrap();
        prop_assert!(rel_close(fast, reference, 1e-12), "{fast:e} vs {reference:e}");
    }

    #[test]
    fn log_pmf_matches_pmf(d in dist(3, 1), trials in 1u64..=6, at in prop::collection::vec(0u64..=6, 3)) {
        let n = d.events().len();
        let b = BinomialMv::new(d, trials).unwrap();
        let at = &at[..n];
        let p = b.pmf(at).unwrap();
        let lp = b.log_pmf(at).unwrap();
        if p == 0.0 {
            prop_assert_eq!(lp, f64::NEG_INFINITY);
        } else {
            prop_assert!(rel_close(lp.exp(), p, 1e-12), "{} vs {p:e}", lp.exp());
        }
    }

    #[test]
    fn marginalizing_an_event_gives_the_smaller_law(w in weights(3, 0), trials in 1u64..=5, nx in 0u64..=5, ny in 0u64..=5) {
        let d = exact_from(3, &w).to_f64();
        let b3 = BinomialMv::new(d.clone(), trials).unwrap();
        let folded: Vec<f64> = (0..4).map(|m| d.p(m) + d.p(m | 4)).collect();
        let d2 = EventologicalDistribution::renormalized(labels(2), folded).unwrap();
        let b2 = BinomialMv::new(d2, trials).unwrap();
        let summed: f64 = (0..=trials).map(|nz| b3.pmf(&[nx, ny, nz]).unwrap()).sum();
        let want = b2.pmf(&[nx, ny]).unwrap();
        prop_assert!((summed - want).abs() <= 1e-13, "{summed:e} vs {want:e}");
    }

    #[test]
    fn lattice_matches_brute_force(target in prop::collection::vec(0u64..=4, 1..=3), cap in prop::option::of(0u64..=8)) {
        let system = ConstraintSystem::new(&target, cap).unwrap();
        let got: std::collections::BTreeSet<Vec<u64>> = system.enumerate().map(|t| t.as_dense().to_vec()).collect();
        prop_assert_eq!(got, brute_lattice_solutions(&target, cap).unwrap());
    }

    #[test]
    fn lattice_order_is_deterministic(target in prop::collection::vec(0u64..=3, 1..=3), cap in 0u64..=6) {
        let system = ConstraintSystem::new(&target, Some(cap)).unwrap();
        let first: Vec<_> = system.enumerate().collect();
        let second: Vec<_> = system.enumerate().collect();
        prop_assert_eq!(first, second);
    }

    #[test]
    fn poisson_matches_convolution(li in intensities(3, 2.0), at in prop::collection::vec(0u64..=5, 3)) {
        let pm = PoissonMv::new(li);
        let at = &at[..pm.event_count()];
        let want = brute_poisson_pmf(&pm, at).unwrap();
        let got = pm.pmf(at).unwrap();
        prop_assert!(rel_close(got, want, 1e-13), "{got:e} vs {want:e}");
        prop_assert!(rel_close(pm.pmf_lattice(at).unwrap(), want, 1e-13));
    }

    #[test]
    fn poisson_coordinates_have_poisson_marginals(li in intensities_of(2, 1.5), k in 0u64..=6) {
        let pm = PoissonMv::new(li.clone());
        let bounds = pm.truncation_box(1e-14);
        for x in 0..2 {
            let other = bounds[1 - x];
            let summed: f64 = (0..=other)
                .map(|j| {
                    let at = if x == 0 { [k, j] } else { [j, k] };
                    pm.pmf(&at).unwrap()
                })
                .sum();
            let want = poisson_pmf(li.marginal_by_index(x), k);
            prop_assert!((summed - want).abs() <= 1e-12, "{summed:e} vs {want:e}");
        }
    }

    #[test]
    fn approximation_follows_the_poisson_law(w in weights(2, 0), trials in 20u64..=60, nx in 0u64..=4, ny in 0u64..=4) {
        // With n well above the marginals the cap never binds.
        let b = BinomialMv::new(float_from(2, &w), trials).unwrap();
        let n = trials as f64;
        let lambda: Vec<f64> = b.distribution().probabilities()[1..].iter().map(|p| n * p).collect();
        let pm = PoissonMv::new(PoissonIntensities::new(labels(2), lambda).unwrap());
        let approx = approximate_binomial_pmf(&b, &[nx, ny]).unwrap();
        prop_assert!(rel_close(approx, pm.pmf(&[nx, ny]).unwrap(), 1e-12));
    }

    #[test]
    fn convergence_improves_with_n(li in intensities_of(2, 1.0)) {
        let rows = convergence_report(&li, &[1000, 10], 5).unwrap();
        prop_assert_eq!(rows[0].trials, 10);
        prop_assert!(rows[1].sup_deviation <= rows[0].sup_deviation);
    }

    #[test]
    fn terrace_draws_fold_to_event_counts(d in dist(3, 0), trials in 1u64..=10, seed in any::<u64>()) {
        let b = BinomialMv::new(d, trials).unwrap();
        let counts = eventodist::sample_bernoulli_scheme(&b, seed);
        let terraces = eventodist::sample_terrace_counts(&b, seed);
        prop_assert_eq!(terraces.marginals(), counts);
        prop_assert_eq!(terraces.as_dense().iter().sum::<u64>(), trials);
    }

    #[test]
    fn equal_seeds_give_equal_draws(li in intensities(2, 20.0), seed in any::<u64>()) {
        let pm = PoissonMv::new(li);
        prop_assert_eq!(eventodist::sample_poisson(&pm, seed), eventodist::sample_poisson(&pm, seed));
    }

    #[test]
    fn merging_tables_adds_counts(a in prop::collection::vec(0u8..5, 0..40), b in prop::collection::vec(0u8..5, 0..40)) {
        let mut left: EmpiricalDistribution<u8> = accumulate(a.iter().copied());
        left.merge(accumulate(b.iter().copied()));
        let joint: EmpiricalDistribution<u8> = accumulate(a.iter().chain(&b).copied());
        prop_assert_eq!(left, joint);
    }
}

#[test]
fn bernoulli_sampler_hits_every_supported_cell() {
    let d = EventologicalDistribution::new(labels(2), vec![0.4, 0.2, 0.3, 0.1]).unwrap();
    let b = BinomialMv::new(d, 3).unwrap();
    let mut sampler = BernoulliSampler::new(&b, RandomStream::new(3));
    let seen: EmpiricalDistribution = (0..20_000).map(|_| sampler.sample_counts()).collect();
    for at in eventodist::binomial::box_cells(&[3, 3]) {
        assert!(seen.count(&at.clone().into()) > 0, "{at:?} never drawn");
    }
}

#[test]
fn poisson_variates_have_the_right_mean_on_both_sides_of_the_switch() {
    let mut stream = RandomStream::new(11);
    for lambda in [0.3, 9.5, 10.0, 35.0] {
        let reps = 200_000;
        let mean = (0..reps)
            .map(|_| stream.poisson(lambda) as f64)
            .sum::<f64>()
            / reps as f64;
        let se = (lambda / reps as f64).sqrt();
        assert!((mean - lambda).abs() <= 4.0 * se, "λ={lambda}: mean {mean}");
    }
}

#[test]
fn oracle_guards_fail_loudly() {
    let d = EventologicalDistribution::new(labels(3), vec![ratio(1, 8); 8]).unwrap();
    let b = BinomialMv::new(d, 9).unwrap();
    assert!(brute_binomial_pmf(&b, &[1, 1, 1]).is_err());
    assert!(brute_lattice_solutions(&[40, 40, 40], None).is_err());
    let pm = PoissonMv::new(PoissonIntensities::new(labels(1), vec![1.0]).unwrap());
    assert!(brute_poisson_pmf(&pm, &[9]).is_err());
}
