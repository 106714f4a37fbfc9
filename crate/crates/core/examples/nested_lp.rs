//! The nested-prefix program: greedy fill against vertex enumeration.

use varbound::domain::weight_by_name;
use varbound::nestedlp::{greedy_solution, greedy_vs_oracle, oracle_max, NestedLpInstance};
use varbound::onedim::KappaPartition;

fn main() {
    let f = weight_by_name("weight-log1").expect("corpus weight");
    let kp = KappaPartition::from_points(vec![0.25, 0.49, 0.81, 1.0]).expect("partition");
    let inst = NestedLpInstance::new(&kp, &f, 1.0).expect("instance");
    let g = greedy_solution(&inst);
    let o = oracle_max(&inst).expect("oracle");
    println!("caps   {:?}", inst.caps());
    println!("greedy y = {:?}  Y = {:.6}", g.y, g.objective);
    println!("oracle y = {:?}  Y = {:.6}", o.y, o.objective);

    let suite = greedy_vs_oracle(6, 200, 7, 1e-9).expect("suite");
    println!(
        "random instances: {}/{} agree, worst gap {:.2e}",
        suite.agreements(),
        suite.trials.len(),
        suite.worst_gap()
    );
}
