//! Reducing the weights (2,3,5) to (1,1,1) one expansion at a time.

use wplx::gradedmod::WeightedLineData;
use wplx::planner::{reduction_plan, Strategy};
use wplx::FieldSpec;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let data = WeightedLineData::standard(vec![2, 3, 5], FieldSpec::Prime(101))?;
    println!("r = {}", data.reduction_length());
    for strategy in [Strategy::LargestFirst, Strategy::RoundRobin, Strategy::Explicit(vec![1, 2, 2, 3, 3, 3, 3])] {
        let plan = reduction_plan(&data, &strategy)?;
        let chain: Vec<String> = plan.chain.iter().map(|w| w.to_string()).collect();
        println!("{:<14} steps {:?}: {}", strategy.name(), plan.steps, chain.join(" -> "));
    }

    let plan = reduction_plan(&data, &Strategy::LargestFirst)?;
    let counts: Vec<usize> = plan.quiver_trace()?.iter().map(|q| q.vertex_count()).collect();
    println!("Ext-quiver vertices along the chain: {counts:?}");
    Ok(())
}
