//! Seeded draws from both samplers against the analytic probabilities.

use eventodist::sampler::{BernoulliSampler, PoissonSampler};
use eventodist::{
    BinomialMv, CountVector, EmpiricalDistribution, EventSet, EventologicalDistribution,
    PoissonIntensities, PoissonMv, RandomStream,
};

fn main() -> eventodist::Result<()> {
    let reps = 200_000;
    let events = EventSet::new(["x", "y"])?;
    let law = BinomialMv::new(
        EventologicalDistribution::new(events.clone(), vec![0.4, 0.2, 0.3, 0.1])?,
        3,
    )?;
    let mut sampler = BernoulliSampler::new(&law, RandomStream::new(7));
    let seen: EmpiricalDistribution = (0..reps).map(|_| sampler.sample_counts()).collect();
    println!("bernoulli scheme, {reps} replications");
    for at in [[0, 0], [1, 1], [2, 1], [3, 3]] {
        let f = seen.frequency(&CountVector(at.to_vec()));
        println!("  {at:?} empirical {f:.5} exact {:.5}", law.pmf(&at)?);
    }

    let poisson = PoissonMv::new(PoissonIntensities::new(events, vec![1.0, 0.5, 0.25])?);
    // A second stream under the same seed is independent of the first.
    let mut sampler = PoissonSampler::new(&poisson, RandomStream::with_stream(7, 1));
    let seen: EmpiricalDistribution = (0..reps).map(|_| sampler.sample()).collect();
    println!("poisson, {reps} draws");
    for at in [[0, 0], [1, 0], [1, 1], [3, 2]] {
        let f = seen.frequency(&CountVector(at.to_vec()));
        println!("  {at:?} empirical {f:.5} exact {:.5}", poisson.pmf(&at)?);
    }
    Ok(())
}
