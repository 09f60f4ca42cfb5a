//! Ext-quivers of simples and how an expansion rewrites them.

use wplx::expansion::ExpansionContext;
use wplx::extquiver::{contract_at, expand_at, quiver_of};
use wplx::tubecat::PointDescriptor;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let points = [
        PointDescriptor::exceptional(1, 2),
        PointDescriptor::exceptional(2, 4),
        PointDescriptor::ordinary("x", 2),
    ];
    let q = quiver_of(&points);
    print!("{}", q.to_dot());

    let ctx = ExpansionContext::new(&points[1])?;
    let contracted = contract_at(&q, &ctx)?;
    println!("after contracting at point 2: {} vertices, {} arrows", contracted.vertex_count(), contracted.arrow_count());
    for (from, to, v) in contracted.arrows() {
        println!("  {from} -> {to} ({},{})", v.s, v.t);
    }
    assert_eq!(expand_at(&contracted, &ctx)?, q);
    println!("expanding again restores the original quiver");
    Ok(())
}
