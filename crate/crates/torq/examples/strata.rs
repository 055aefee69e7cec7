//! Enumerate the isotropy classes of closed shell orbits with their
//! stratum codimensions, then cross-check against randomly sampled exact
//! shell points.
//!
//! ```bash
//! cargo run -p torq --example strata
//! ```

use torq::mat::IntMatrix;
use torq::module::TorusModule;
use torq::oracle::{empirical_isotropy_census, sample_shell_points};
use torq::strata::enumerate_isotropy_classes;

fn main() -> torq::Result<()> {
    let a = IntMatrix::from_i64_rows(&[&[-1, 1, 0, 0], &[0, 0, -1, 1]]);
    let module = TorusModule::new(a)?;

    println!("weight matrix:\n{}", module.matrix());
    println!("isotropy classes of closed orbits:");
    for record in enumerate_isotropy_classes(&module)? {
        println!(
            "  codim {}: isotropy rank {}, finite part {:?}, fixed columns {:?}",
            record.codim_in_quotient,
            record.isotropy_lattice.rank(),
            record.finite_part,
            record.fixed_columns
        );
    }

    // Every sampled point lies on the shell exactly (rational
    // arithmetic, no tolerance) and its closed-orbit isotropy must be one
    // of the enumerated classes.
    let samples = sample_shell_points(module.matrix(), 5, 42);
    for (i, s) in samples.iter().enumerate() {
        println!(
            "sample {i}: on shell = {}, point = {:?}",
            s.on_shell(),
            s.point.iter().map(ToString::to_string).collect::<Vec<_>>()
        );
    }
    let observed = empirical_isotropy_census(&module, 400, 42)?;
    println!("census observed {} of the enumerated classes", observed.len());
    Ok(())
}
