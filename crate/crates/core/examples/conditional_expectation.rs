//! Computes E[X | G] for a coarse σ-algebra and audits it member by member.

use probvar::conditional::{cond_expectation, verify_properties};
use probvar::{Partition, ProbabilitySpace, RandomVariable, SigmaAlgebra};

fn main() -> probvar::Result<()> {
    let space = ProbabilitySpace::new(vec![0.5, 0.3, 0.2])?;
    let partition = Partition::from_indices(&space, &[vec![0], vec![1, 2]])?;
    let x = RandomVariable::new(vec![2.0, -1.0, 4.0])?;

    let xi = cond_expectation(&space, &x, &partition)?;
    println!("coefficients per block: {:?}", xi.coefficients);
    println!("as a variable on Ω:      {:?}", xi.as_variable.values());

    let sigma = SigmaAlgebra::generate(partition.clone());
    println!("σ(P) has {} members", sigma.member_count().unwrap());
    let report = verify_properties(&space, &x, &partition, &xi.as_variable)?;
    println!(
        "measurable: {}, integrable: {}, worst |∫_G ξ − ∫_G X| = {:.1e} over {} members",
        report.measurable,
        report.integrable,
        report.property_iii_max_violation,
        report.members_checked
    );

    // a variable that is off by a little on one block fails the audit
    let wrong = RandomVariable::new(vec![2.0, 1.1, 1.1])?;
    let bad = verify_properties(&space, &x, &partition, &wrong)?;
    println!(
        "perturbed candidate passes: {} (violation {:.4})",
        bad.passed(),
        bad.property_iii_max_violation
    );
    Ok(())
}
