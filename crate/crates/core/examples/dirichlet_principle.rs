//! Recovers P(A | Bⱼ) by minimizing J(X) = ½E(X²) − E(X·1_A) over
//! σ(P)-measurable X, with the closed form and with gradient descent.

use probvar::{EnergyProblem, Method, Partition, ProbabilitySpace, SolverConfig};

fn main() -> probvar::Result<()> {
    let space = ProbabilitySpace::new(vec![0.5, 0.3, 0.2])?;
    let partition = Partition::from_indices(&space, &[vec![0], vec![1, 2]])?;
    let a = space.event([0, 1])?;
    let problem = EnergyProblem::for_event(space.clone(), partition.clone(), &a)?;

    for config in [
        SolverConfig::exact(),
        SolverConfig::gradient_descent().with_trace(),
        SolverConfig::preconditioned(),
    ] {
        let r = problem.minimize(&config)?;
        println!(
            "{:<15} α = {:?}  J = {:.12}  iterations = {}  converged = {}",
            r.method.to_string(),
            r.coefficients,
            r.energy,
            r.iterations,
            r.converged
        );
        if config.method == Method::GradientDescent {
            let trace = r.trace.as_deref().unwrap_or_default();
            for (k, (energy, grad)) in trace.iter().take(4).enumerate() {
                println!("    step {k}: J = {energy:.10}, ‖g‖∞ = {grad:.3e}");
            }
        }
    }
    for b in partition.blocks() {
        println!("P(A | {b}) = {}", space.cond_prob(&a, b)?);
    }
    Ok(())
}
