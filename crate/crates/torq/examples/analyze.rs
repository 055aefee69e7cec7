//! Analyze a torus weight matrix: faithfulness, modularity, stability,
//! type-O slices, and the singular-locus codimension.
//!
//! ```bash
//! cargo run -p torq --example analyze
//! ```

use torq::mat::IntMatrix;
use torq::module::TorusModule;
use torq::strata::{codim_n_sing, detect_type_o, is_minimal, slice_m_vector};

fn main() -> torq::Result<()> {
    // Rank-2 torus acting on C^4; columns are the characters.
    let a = IntMatrix::from_i64_rows(&[&[-1, 0, 2, 2], &[0, -2, 5, 5]]);
    let module = TorusModule::new(a)?;

    println!("weight matrix:\n{}", module.matrix());
    println!("torus rank l = {}, dimension n = {}", module.torus_rank(), module.dim());
    println!("modularity index: {}", module.modularity_index());
    println!("stable: {}", module.is_stable());

    let (dim_shell, dim_quotient) = module.dims();
    println!("dim shell = {dim_shell}, dim quotient = {dim_quotient}");

    // The change of Lagrangian subspace that makes the module stable
    // (identity here, the module is already stable).
    let eps = module.make_stable_utcls()?;
    let stabilized = module.apply_signs(&eps)?;

    println!("minimal: {}", is_minimal(&stabilized));
    println!("codim of singular locus in the shell: {:?}", codim_n_sing(&stabilized));

    for cert in detect_type_o(&stabilized) {
        let datum = slice_m_vector(&stabilized, &cert)?;
        println!(
            "type-O slice: r = {}, fixed columns {:?}, moving columns {:?}, \
             m-vector {:?}, m = {}, maximal = {}",
            cert.r, cert.fixed_columns, cert.moving_columns, datum.m_vec, datum.m, datum.maximal
        );
    }
    Ok(())
}
