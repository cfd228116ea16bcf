//! Enumerates the σ-algebra generated by a partition and tests membership
//! and measurability.

use probvar::{Partition, ProbabilitySpace, RandomVariable, SigmaAlgebra};

fn main() -> probvar::Result<()> {
    // outcome 4 is null, so it may sit in any block without changing anything
    let space = ProbabilitySpace::new(vec![0.2, 0.2, 0.3, 0.3, 0.0])?;
    let partition = Partition::from_indices(&space, &[vec![0, 1], vec![2], vec![3, 4]])?;
    let sigma = SigmaAlgebra::generate(partition);

    for (k, member) in sigma.members().unwrap().iter().enumerate() {
        println!("member {k}: {member}  P = {:.1}", space.prob(member)?);
    }

    for indices in [vec![0, 1, 2], vec![0, 2], vec![2, 3]] {
        let e = space.event(indices)?;
        println!("{e} ∈ σ(P): {}", sigma.contains(&e)?);
    }

    let constant_on_blocks = RandomVariable::new(vec![1.0, 1.0, -2.0, 5.0, 7.0])?;
    let mixed = RandomVariable::new(vec![1.0, 2.0, -2.0, 5.0, 5.0])?;
    println!(
        "measurable: {:?} -> {} (coefficients {:?}); {:?} -> {}",
        constant_on_blocks.values(),
        sigma.is_measurable(&constant_on_blocks)?,
        sigma.coefficients(&constant_on_blocks)?,
        mixed.values(),
        sigma.is_measurable(&mixed)?
    );
    Ok(())
}
