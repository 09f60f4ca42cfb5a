//! The expansion of a rank 3 tube from a rank 2 tube: i, its adjoints, the
//! connecting sequence and the local sequence of an object.

use wplx::expansion::{
    coexpand, connecting_sequence, contract, expand, in_image, local_sequence, perp_membership, ExpansionContext,
};
use wplx::tubecat::{objects_up_to, PointDescriptor, TubeObject};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let big = PointDescriptor::exceptional(1, 3);
    let ctx = ExpansionContext::new(&big)?;
    println!(
        "S_λ = S_{}, S_ρ = S_{}, S̄ = S'_{}",
        ctx.s_lambda(),
        ctx.s_rho(),
        ctx.s_bar()
    );

    let conn = connecting_sequence(&ctx);
    println!("0 -> {} -> {} -> {} -> 0 (does not split)", conn.sub, conn.middle, conn.quotient);

    for b in objects_up_to(ctx.small_point(), 2).into_iter().skip(1) {
        let ib = expand(&ctx, &b)?;
        println!("i({b}) = {ib}; i_λ i = {}, i_ρ i = {}", contract(&ctx, &ib)?, coexpand(&ctx, &ib)?);
    }

    let a = TubeObject::indec(&big, 2, 2)?.direct_sum(&TubeObject::simple(&big, 1)?)?;
    let seq = local_sequence(&ctx, &a)?;
    println!("local sequence of {a}: {}", seq.to_json());
    println!("holds: {}, {a} in the image of i: {}", seq.holds(&ctx), in_image(&ctx, &a)?);

    let u = TubeObject::indec(&big, 1, 3)?;
    let flags = perp_membership(&ctx, &u)?;
    println!("{u}: in S_λ^⊥ {}, in ^⊥S_ρ {}", flags.right_perp_lambda, flags.left_perp_rho);
    Ok(())
}
