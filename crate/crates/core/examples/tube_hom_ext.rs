//! Hom and Ext¹ in a tube of rank 3, each computed two ways.

use wplx::tubecat::{ext1_dim, hom_dim, oracle, tau, to_nilprep, PointDescriptor, TubeObject};
use wplx::PrimeField;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let point = PointDescriptor::exceptional(1, 3);
    let u13 = TubeObject::indec(&point, 1, 3)?;
    let s2 = TubeObject::simple(&point, 2)?;
    let a = u13.direct_sum(&s2)?;

    let rep = to_nilprep(&PrimeField::f101(), &a);
    println!("{a} as a representation: dims {:?}", rep.dims());

    println!("simple Ext law (rank 3):");
    for j in 1..=3 {
        let row: Vec<usize> = (1..=3)
            .map(|k| ext1_dim(&TubeObject::simple(&point, j).unwrap(), &TubeObject::simple(&point, k).unwrap()).unwrap())
            .collect();
        println!("  Ext¹(S_{j}, S_k), k = 1..3: {row:?}");
    }

    let b = TubeObject::indec(&point, 3, 2)?;
    println!("hom({a}, {b}) = {} (overlap count {})", hom_dim(&a, &b)?, oracle::overlap_hom(&a, &b)?);
    println!(
        "ext1({a}, {b}) = {}; resolution {}, long exact sequence {}, hom(B, τA) = {}",
        ext1_dim(&a, &b)?,
        oracle::resolution_ext1(&a, &b)?,
        oracle::les_ext1(&a, &b)?,
        hom_dim(&b, &tau(&a))?
    );

    let x = PointDescriptor::ordinary("x", 2);
    let sx = TubeObject::simple(&x, 1)?;
    println!("ordinary point of degree 2: ext1(S_x, S_x) = {}", ext1_dim(&sx, &sx)?);
    Ok(())
}
