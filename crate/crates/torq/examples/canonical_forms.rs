//! Canonical forms are invariant under every presentation change that
//! preserves the quotient: unimodular row operations, column
//! permutations, and column sign flips. Scramble a matrix at random and
//! watch the canonical form stay put.
//!
//! ```bash
//! cargo run -p torq --example canonical_forms
//! ```

use rand::SeedableRng;
use torq::isoclass::canonical_form;
use torq::mat::IntMatrix;
use torq::oracle::corpus;
use torq::reduction::reduce;

fn main() -> torq::Result<()> {
    let a = IntMatrix::from_i64_rows(&[&[3, 0, -4, 6], &[1, -3, 0, 0]]);
    let (data, _) = reduce(&a)?;
    let base = canonical_form(&data);
    println!("input:\n{a}");
    println!(
        "canonical block: {:?}",
        base.canonical_matrix.as_ref().map(ToString::to_string)
    );
    println!("digest: {}", base.digest);

    let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(2024);
    for trial in 0..5 {
        let scrambled = corpus::scramble(&mut rng, &a);
        let (data2, _) = reduce(&scrambled)?;
        let form = canonical_form(&data2);
        println!(
            "scramble {trial}: same canonical form = {}, digest = {}",
            form == base,
            form.digest
        );
    }
    Ok(())
}
