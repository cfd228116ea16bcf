//! Evaluates Hölder, Clarkson and norm monotonicity on a small example and
//! tabulates the uniform-convexity modulus.

use probvar::lp::{clarkson_check, holder_check, norm_monotonicity_check, uniform_convexity_delta};
use probvar::{ProbabilitySpace, RandomVariable};

fn main() -> probvar::Result<()> {
    let space = ProbabilitySpace::uniform(4)?;
    let x = RandomVariable::new(vec![1.0, -0.5, 2.0, 0.0])?;
    let y = RandomVariable::new(vec![0.3, 1.0, -1.0, 1.5])?;

    for p in [1.25, 1.5, 2.0, 3.0, 4.0] {
        let reports = [
            holder_check(&space, &x, &y, p)?,
            clarkson_check(&space, &x, &y, p)?,
            norm_monotonicity_check(&space, &x, 1.0, p)?,
        ];
        for r in reports {
            println!(
                "p = {p:<4} {:<20} {:>12.8} ≤ {:>12.8}  slack {:+.3e}",
                format!("{:?}", r.name),
                r.lhs,
                r.rhs,
                r.slack
            );
        }
    }

    println!("\nδ_p(ε) = 1 − (1 − (ε/2)^p)^(1/p)");
    for p in [2.0, 3.0, 4.0] {
        let row: Vec<String> = [0.25, 0.5, 1.0, 1.5, 2.0]
            .iter()
            .map(|&eps| Ok(format!("{:.6}", uniform_convexity_delta(p, eps)?)))
            .collect::<probvar::Result<_>>()?;
        println!("p = {p}: {}", row.join("  "));
    }
    Ok(())
}
