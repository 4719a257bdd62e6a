use blindsim::mbqc::{correct_byproduct, linear_pattern, run_pattern, run_pattern_forced};
use std::f64::consts::PI;

fn main() -> blindsim::Result<()> {
    let angles = [PI / 4.0, -PI / 3.0, 0.7, 0.0];
    let (graph, pattern) = linear_pattern(&angles);
    println!("{} vertices, {} measurements", graph.vertex_count, pattern.steps.len());

    let reference = {
        let run = run_pattern_forced(&graph, &pattern, &[0; 4])?;
        correct_byproduct(&run.output_state, &run.frame)?
    };
    for seed in 0..4 {
        let run = run_pattern(&graph, &pattern, seed)?;
        let fixed = correct_byproduct(&run.output_state, &run.frame)?;
        println!(
            "seed {seed}: outcomes {:?}, byproduct x={:?} z={:?}, fidelity with all-zero branch {:.12}",
            run.outcomes,
            run.frame.x,
            run.frame.z,
            fixed.fidelity(&reference)
        );
    }
    Ok(())
}
