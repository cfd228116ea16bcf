//! Compares the first variation of the energy with central differences and
//! shows the quadratic growth away from the minimizer.

use probvar::conditional::cond_expectation;
use probvar::random::{random_instance, random_variable, trial_rng, Shape};
use probvar::EnergyProblem;

fn main() -> probvar::Result<()> {
    let mut rng = trial_rng(11, 0);
    let inst = random_instance(&mut rng, Shape::default());
    let target = inst.space.indicator(&inst.event)?;
    let problem = EnergyProblem::new(inst.space.clone(), inst.partition.clone(), target)?;
    println!(
        "{} outcomes, {} blocks",
        inst.space.n(),
        inst.partition.len()
    );

    let y = random_variable(&mut rng, inst.space.n());
    for h in [1e-2, 1e-3, 1e-5, 1e-7] {
        let fd = problem.fd_check(&inst.variable, &y, h)?;
        println!(
            "h = {h:e}: analytic {:+.12}, central {:+.12}, relative error {:.2e}",
            fd.analytic, fd.numeric, fd.relative_error
        );
    }
    println!("J″(y, y) = E(y²) = {:.6}", problem.gateaux_second(&y, &y)?);

    let xi = cond_expectation(&inst.space, problem.target(), &inst.partition)?;
    let d = inst.space.indicator(inst.partition.block(0))?;
    for t in [0.5, 1.0, 2.0] {
        let bumped = xi.as_variable.axpy(t, &d)?;
        let gap = problem.energy(&bumped)? - problem.energy(&xi.as_variable)?;
        println!(
            "t = {t}: J(ξ + t·1_B0) − J(ξ) = {gap:.12}, ½t²P(B0) = {:.12}",
            0.5 * t * t * inst.partition.block_probs()[0]
        );
    }
    Ok(())
}
