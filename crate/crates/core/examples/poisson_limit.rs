//! Rare dependent events: the Poisson law with terrace intensities and how
//! fast the Binomial law with `p(X) = λ(X)/n` approaches it.

use eventodist::{convergence_report, EventSet, PoissonIntensities, PoissonMv};

fn main() -> eventodist::Result<()> {
    let events = EventSet::new(["x", "y"])?;
    let intensities = PoissonIntensities::new(events, vec![1.0, 0.5, 0.25])?;
    let law = PoissonMv::new(intensities.clone());
    println!(
        "P(0,0) = {:.12} = e^-{}",
        law.pmf(&[0, 0])?,
        intensities.total()
    );
    println!("P(2,1) = {:.12}", law.pmf(&[2, 1])?);
    println!("box holding all but 1e-12: {:?}", law.truncation_box(1e-12));

    println!("{:>6} {:>14}", "n", "sup deviation");
    for row in convergence_report(&intensities, &[10, 30, 100, 300, 1000], 6)? {
        println!("{:>6} {:>14.6e}", row.trials, row.sup_deviation);
    }
    Ok(())
}
