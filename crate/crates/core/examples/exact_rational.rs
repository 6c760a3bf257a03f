//! Exact arithmetic: the same law over big rationals, with moments and a
//! table that sums to exactly one.

use eventodist::{BinomialMv, EventSet, EventologicalDistribution};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn main() -> eventodist::Result<()> {
    let events = EventSet::new(["a", "b", "c"])?;
    let p = vec![
        q(1, 4),
        q(1, 8),
        q(1, 8),
        q(1, 16),
        q(1, 8),
        q(1, 16),
        q(1, 16),
        q(3, 16),
    ];
    let law = BinomialMv::new(EventologicalDistribution::new(events, p)?, 4)?;

    println!("P(2,2,2) = {}", law.pmf(&[2, 2, 2])?);
    let total: BigRational = law.table()?.into_iter().map(|(_, p)| p).sum();
    assert!(total.is_one());
    println!("table total = {total}");
    let mean: Vec<String> = law.mean_vector().iter().map(ToString::to_string).collect();
    println!("mean = [{}]", mean.join(", "));
    let cov = law.covariance_matrix();
    for i in 0..3 {
        let row: Vec<String> = (0..3).map(|j| cov[(i, j)].to_string()).collect();
        println!("cov[{i}] = [{}]", row.join(", "));
    }
    Ok(())
}
