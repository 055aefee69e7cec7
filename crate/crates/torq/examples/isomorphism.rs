//! Decide whether two torus representations have isomorphic symplectic
//! quotients, and verify the returned witness by hand.
//!
//! ```bash
//! cargo run -p torq --example isomorphism
//! ```

use torq::isoclass::{decide_iso, verify_witness, IsoVerdict};
use torq::mat::IntMatrix;
use torq::reduction::reduce;

fn main() -> torq::Result<()> {
    // A rank-2 action on C^4 ...
    let big = IntMatrix::from_i64_rows(&[&[-1, 0, 2, 2], &[0, -2, 5, 5]]);
    // ... and a circle action on C^3.
    let small = IntMatrix::from_i64_rows(&[&[-2, 9, 9]]);

    let (left, _) = reduce(&big)?;
    let (right, _) = reduce(&small)?;

    match decide_iso(&left, &right)? {
        IsoVerdict::Isomorphic { witness } => {
            println!("isomorphic quotients");
            println!("row transform:\n{}", witness.row_transform);
            println!("column permutation: {:?}", witness.column_permutation);
            println!("sign vector: {:?}", witness.sign_vector.signs());
            println!("witness verifies: {}", verify_witness(&left, &right, &witness));
        }
        IsoVerdict::NotIsomorphic { distinguisher } => {
            println!("not isomorphic: {distinguisher:?}");
        }
    }

    // A negative case: different weight multisets on the same torus.
    let other = IntMatrix::from_i64_rows(&[&[-2, 9, 7]]);
    let (right2, _) = reduce(&other)?;
    match decide_iso(&right, &right2)? {
        IsoVerdict::Isomorphic { .. } => println!("unexpectedly isomorphic"),
        IsoVerdict::NotIsomorphic { distinguisher } => {
            println!("(-2,9,9) vs (-2,9,7): not isomorphic, separated by {distinguisher:?}")
        }
    }
    Ok(())
}
