//! Splits P(A) over a partition of a fair die.

use probvar::conditional::{total_probability, total_probability_terms};
use probvar::{Partition, ProbabilitySpace};

fn main() -> probvar::Result<()> {
    let labels = (1..=6).map(|k| k.to_string()).collect();
    let die = ProbabilitySpace::with_labels(vec![1.0 / 6.0; 6], labels)?;
    let pairs = Partition::from_indices(&die, &[vec![0, 1], vec![2, 3], vec![4, 5]])?;
    let even = die.event([1, 3, 5])?;

    for (j, term) in total_probability_terms(&die, &even, &pairs)?
        .iter()
        .enumerate()
    {
        println!(
            "block {j} {}: P(B) = {:.4}, P(A | B) = {:.4}",
            pairs.block(j),
            term.p_block,
            term.cond_prob
        );
    }
    println!(
        "Σ P(A | B)·P(B) = {:.15}",
        total_probability(&die, &even, &pairs)?
    );
    println!("P(A)           = {:.15}", die.prob(&even)?);
    Ok(())
}
