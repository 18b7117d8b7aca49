//! Minimal library walk-through: modular data at integer level, then the
//! closed-form/KZ cross-check at generic κ.

use kznorm_core::kzflow::norm_via_kz;
use kznorm_core::modular::modular_data;
use kznorm_core::norms::norm_closed_form;
use kznorm_core::{CoreError, HalfInt, LevelContext};

fn main() -> Result<(), CoreError> {
    let ctx = LevelContext::with_level(2, 8)?; // sl(2), level 8
    let data = modular_data(&ctx)?; // S, T, charge conjugation, qdims
    println!("{} weights, c = {}", data.labels.len(), data.central_charge);

    for twice in 1..=4 {
        let j = HalfInt::from_twice(twice);
        let closed = norm_closed_form(j, 1, 7.3)?.value; // Γ-product
        let numeric = norm_via_kz(j, 1, 7.3, 1e-10)?.norm.value;
        // numeric / closed is the same constant for every admissible j.
        println!("j = {j:>4}: ratio = {:.12}", numeric / closed);
    }
    Ok(())
}
