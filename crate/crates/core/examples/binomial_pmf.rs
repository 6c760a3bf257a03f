//! Two dependent events observed over three trials: single probabilities,
//! the full table and its marginal check.

use eventodist::{BinomialMv, EventSet, EventologicalDistribution};

fn main() -> eventodist::Result<()> {
    let events = EventSet::new(["x", "y"])?;
    let dist = EventologicalDistribution::from_terraces(
        events,
        [
            (&[][..], 0.4),
            (&["x"][..], 0.2),
            (&["y"][..], 0.3),
            (&["x", "y"][..], 0.1),
        ],
    )?;
    let law = BinomialMv::new(dist, 3)?;

    println!("P(x=1, y=1) = {:.6}", law.pmf(&[1, 1])?);
    println!("P(x=3, y=3) = {:.6}", law.pmf(&[3, 3])?);

    let table = law.table()?;
    let total: f64 = table.iter().map(|(_, p)| p).sum();
    println!("{} cells, total mass {total:.15}", table.len());
    for k in 0..=3 {
        let marginal: f64 = table
            .iter()
            .filter(|(c, _)| c[0] == k)
            .map(|(_, p)| p)
            .sum();
        println!("P(x={k}) = {marginal:.6}");
    }
    Ok(())
}
