//! Serialising a windowed graded module, validating it, and reading it back.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use wplx::gradedmod::*;
use wplx::{FieldSpec, PrimeField};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let data = WeightedLineData::standard(vec![2, 3], FieldSpec::Prime(101))?;
    let ring = GradedRing::new(PrimeField::f101(), &data)?;
    let w = DegreeWindow::bounded(ring.weights(), 2);
    let m = random_module(&ring, &w, &RandomModuleConfig::default(), &mut ChaCha8Rng::seed_from_u64(4));

    let json = m.to_json();
    let text = serde_json::to_string(&json)?;
    println!("{} bytes of JSON for a module of total dimension {}", text.len(), m.total_dim());

    let back = WindowedModule::from_json(PrimeField::f101(), &serde_json::from_str(&text)?)?;
    println!("round trip equal: {}", back.compare(&m)?.is_equal());
    println!("relations hold: {}", back.validate().is_valid());

    let twisted = m.twist(&ring.group().x(1));
    println!("after twisting by x_1 the window has no bound N: {}", twisted.to_json()["N"].is_null());
    Ok(())
}
