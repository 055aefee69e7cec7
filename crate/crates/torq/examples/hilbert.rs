//! Truncated Hilbert series of invariant rings: the degree-by-degree
//! fingerprint that certifies a reduction did not change the quotient.
//!
//! ```bash
//! cargo run -p torq --example hilbert
//! ```

use torq::mat::IntMatrix;
use torq::oracle::{ambient_invariant_series, reduced_data_series, shell_invariant_series};
use torq::reduction::reduce;

fn main() -> torq::Result<()> {
    let degree = 12;
    for rows in [
        vec![vec![-1i64, 1]],
        vec![vec![-1, 1, 0, 0], vec![0, 0, -1, 1]],
        vec![vec![-1, 0, 2, 2], vec![0, -2, 5, 5]],
    ] {
        let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
        let a = IntMatrix::from_i64_rows(&refs);
        println!("weight matrix:\n{a}");

        let ambient = ambient_invariant_series(&a, degree)?;
        let shell = shell_invariant_series(&a, degree)?;
        println!("ambient invariants: {:?}", ambient.coefficients);
        println!("shell invariants:   {:?}", shell.coefficients);

        let (data, _) = reduce(&a)?;
        let reduced = reduced_data_series(&data, degree)?;
        println!("reduced data:       {:?}", reduced.coefficients);
        println!(
            "preserved through reduction: {}\n",
            shell.coefficients == reduced.coefficients
        );
    }
    Ok(())
}
