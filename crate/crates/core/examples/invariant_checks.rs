//! Running the invariant suites programmatically, as `wplx check` does.

use wplx::checks::{run_suite, CheckOptions, Suite};
use wplx::gradedmod::WeightedLineData;
use wplx::FieldSpec;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let data = WeightedLineData::standard(vec![2, 3], FieldSpec::Prime(101))?;
    let opts = CheckOptions { window: 4, samples: 5, ..CheckOptions::default() };
    for suite in [Suite::Ar, Suite::Adjunction, Suite::Quiver, Suite::Graded] {
        let report = run_suite(suite, &data, &opts)?;
        for case in &report.cases {
            println!("{case}");
        }
        println!("{}: {} passed, {} failed", suite.name(), report.passed(), report.failed());
    }
    Ok(())
}
