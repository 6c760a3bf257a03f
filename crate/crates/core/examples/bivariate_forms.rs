//! The two-event law three ways: the lattice sum, the Fréchet-interval sum
//! and the multicovariation form.

use eventodist::{BinomialMv, EventSet, EventologicalDistribution};

fn main() -> eventodist::Result<()> {
    let events = EventSet::new(["rain", "wind"])?;
    let dist = EventologicalDistribution::new(events, vec![0.55, 0.15, 0.1, 0.2])?;
    println!("tau(rain) = {:.4}", dist.multicovariation(&["rain"])?);
    println!("tau(wind) = {:.4}", dist.multicovariation(&["wind"])?);
    println!(
        "tau(rain, wind) = {:.4}",
        dist.multicovariation(&["rain", "wind"])?
    );
    println!(
        "corr(rain, wind) = {:.4}",
        dist.indicator_correlation("rain", "wind")?
    );

    let law = BinomialMv::new(dist, 12)?;
    println!(
        "{:>8} {:>22} {:>22} {:>22}",
        "cell", "lattice", "frechet", "multicov"
    );
    for at in [[0, 0], [3, 2], [6, 6], [12, 1]] {
        println!(
            "{:>8} {:>22.15e} {:>22.15e} {:>22.15e}",
            format!("{at:?}"),
            law.pmf_lattice(&at)?,
            law.pmf_bivariate(&at)?,
            law.pmf_bivariate_multicov(&at)?,
        );
    }
    Ok(())
}
