//! Run the reduction recipe on three instructive weight matrices and
//! print the traces: which case fired, what was emitted, and the minimal
//! data reached.
//!
//! ```bash
//! cargo run -p torq --example reduce
//! ```

use torq::mat::IntMatrix;
use torq::reduction::{is_orbifold, reduce, ReductionCase};

fn show(name: &str, rows: &[&[i64]]) -> torq::Result<()> {
    let a = IntMatrix::from_i64_rows(rows);
    let (data, trace) = reduce(&a)?;

    println!("== {name}");
    println!("input:\n{a}");
    if !trace.utcls_sign.is_identity() {
        println!("stabilizing signs: {:?}", trace.utcls_sign.signs());
    }
    for (i, step) in trace.steps.iter().enumerate() {
        match step.case {
            ReductionCase::CaseOne => println!(
                "step {i}: Case 1 on fixed columns {:?} — emits Z/{}",
                step.slice.certificate.fixed_columns,
                step.emitted_modulus.as_ref().unwrap()
            ),
            ReductionCase::CaseTwo => println!(
                "step {i}: Case 2 on fixed columns {:?} — scalar subgroup {:?} with weight {}",
                step.slice.certificate.fixed_columns,
                step.lambda_r.as_ref().unwrap(),
                step.common_value.as_ref().unwrap()
            ),
        }
        println!("         successor:\n{}", step.successor.matrix());
    }
    println!("cyclic moduli: {:?}", data.cyclic_moduli);
    match &data.torus_block {
        Some(block) => println!("torus block:\n{}", block.matrix()),
        None => println!("torus block: none"),
    }
    println!("orbifold: {}\n", is_orbifold(&data));
    Ok(())
}

fn main() -> torq::Result<()> {
    // Product of two hyperbolic pairs: two cyclic factors of order 2.
    show("product of hyperbolic pairs", &[&[-1, 1, 0, 0], &[0, 0, -1, 1]])?;
    // A rank-2 action that shrinks to the circle weight matrix (-2,9,9).
    show("case-2 shrink", &[&[-1, 0, 2, 2], &[0, -2, 5, 5]])?;
    // Same flavor, with disconnected slice isotropy along the way.
    show("disconnected slice isotropy", &[&[3, 0, -4, 6], &[1, -3, 0, 0]])?;
    Ok(())
}
