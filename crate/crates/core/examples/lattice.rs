//! Terrace-count vectors consistent with given event counts.

use eventodist::lattice::frechet_bounds;
use eventodist::{ConstraintSystem, EventSet};

fn main() -> eventodist::Result<()> {
    let events = EventSet::new(["x", "y", "z"])?;
    let system = ConstraintSystem::new(&[2, 1, 2], Some(4))?;
    println!("solutions for n = (2,1,2), at most 4 trials:");
    for solution in system.enumerate() {
        let parts: Vec<String> = solution
            .as_dense()
            .iter()
            .enumerate()
            .filter(|(_, &k)| k > 0)
            .map(|(mask, k)| format!("n({{{}}})={k}", events.subset_key(mask)))
            .collect();
        println!("  {}", parts.join(" "));
    }

    for (nx, ny, n) in [(2, 2, 3), (4, 1, 4), (5, 5, 6)] {
        let count = ConstraintSystem::new(&[nx, ny], Some(n))?.solution_count();
        println!(
            "n_x={nx} n_y={ny} n={n}: {count} solutions, n(xy) in {:?}",
            frechet_bounds(nx, ny, n)
        );
    }
    Ok(())
}
