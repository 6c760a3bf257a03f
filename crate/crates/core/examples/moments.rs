//! Means and covariances of both laws, including the standardized matrix.

use eventodist::{BinomialMv, EventSet, EventologicalDistribution, PoissonIntensities, PoissonMv};

fn main() -> eventodist::Result<()> {
    let events = EventSet::new(["x", "y"])?;
    let dist = EventologicalDistribution::new(events.clone(), vec![0.4, 0.2, 0.3, 0.1])?;
    let law = BinomialMv::new(dist, 10)?;
    println!("binomial mean {:?}", law.mean_vector());
    println!("binomial covariance{}", law.covariance_matrix());
    println!("standardized{}", law.standardized_covariance_matrix()?);

    let intensities = PoissonIntensities::new(events, vec![1.0, 0.5, 0.25])?;
    let poisson = PoissonMv::new(intensities);
    println!("poisson mean {:?}", poisson.mean_vector());
    println!("poisson covariance{}", poisson.covariance_matrix());
    Ok(())
}
