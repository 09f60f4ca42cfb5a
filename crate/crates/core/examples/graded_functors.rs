//! The functors F, F_λ, F_ρ between graded modules over S(2,2) and S(2,3),
//! truncated to the degree window 0 <= c <= 6.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use wplx::gradedmod::*;
use wplx::{FieldSpec, PrimeField};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let j = 2;
    let data = WeightedLineData::standard(vec![2, 3], FieldSpec::Prime(101))?;
    let ring = GradedRing::new(PrimeField::f101(), &data)?;
    let small = ring.reduced_at(j)?;
    let (w, ws) = (DegreeWindow::bounded(ring.weights(), 6), DegreeWindow::bounded(small.weights(), 6));

    let o_small = structure_module(&small, &small.group().zero(), &ws);
    let fo = apply_f(&o_small, j)?;
    let o = structure_module(&ring, &ring.group().zero(), &w);
    println!("F O' = O on {} degrees: {}", w.len(), fo.compare(&o)?.is_equal());
    println!("O is in the image of F: {}", in_image_f(&o, j)?);

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let m = random_module(&small, &ws, &RandomModuleConfig::default(), &mut rng);
    let fm = apply_f(&m, j)?;
    println!("random module: total dimension {} -> {} after F", m.total_dim(), fm.total_dim());
    println!("F_λ F M = M: {}", apply_f_lambda(&fm, j)?.compare(&m)?.is_equal());
    println!("F_ρ F M = M: {}", apply_f_rho(&fm, j)?.compare(&m)?.is_equal());

    let pres = simple_lambda_module(&ring, j, &w)?;
    let s = &pres.quotient;
    println!("S_λ = O / x_{j} O has total dimension {}", s.total_dim());
    println!("F_λ S_λ = 0: {}", apply_f_lambda(s, j)?.is_zero());
    println!("S_λ in the image of F: {}", in_image_f(s, j)?);

    let hom = hom_dim_mod(&o_small, &structure_module(&small, &small.group().c(1), &ws))?;
    let fhom = hom_dim_mod(&fo, &apply_f(&structure_module(&small, &small.group().c(1), &ws), j)?)?;
    println!("Hom(O', O'(c)) = {hom}, Hom(F O', F O'(c)) = {fhom}");
    Ok(())
}
