//! Normal forms in the grading group L(p) and the copying map φ into the
//! group with one weight raised.

use wplx::{Phi, WeightSequence};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p = WeightSequence::new(vec![2, 3])?;
    let g = p.group();
    println!("L{p}: x_i has order p_i modulo c");

    // 3 x_2 = c, so (0, 4) normalises to x_2 + c
    let a = g.normalize(&[0, 4], 0)?;
    println!("4 x_2 = {a}");
    let b = g.add(&g.x(1), &g.x(1))?;
    println!("x_1 + x_1 = {b}");
    println!("x_1 + x_2 - c = {}", g.sub(&g.add(&g.x(1), &g.x(2))?, &g.c(1))?);

    // φ: L(2,2) -> L(2,3) copies coefficients in normal form
    let phi = Phi::new(&p, 2)?;
    for l in phi.source().elements_between(0, 1) {
        println!("φ({l}) = {}", phi.apply(&l)?);
    }
    let top = g.normalize(&[0, 2], 0)?;
    println!("2 x_2 in the image of φ: {}", phi.in_image(&top));
    Ok(())
}
