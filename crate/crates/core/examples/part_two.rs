//! Weighted profile integral against the kappa-partition upper sum, with the
//! prefix caps `c2 sqrt(kappa_{r+1})`.

use varbound::domain::{profile_by_name, weight_by_name};
use varbound::onedim::{profile_gamma_upper, KappaPartition};
use varbound::quad::segment_monotone;

fn main() {
    let profile = profile_by_name("sine").expect("corpus profile");
    let f = weight_by_name("weight-log1").expect("corpus weight");
    let seg = segment_monotone(&profile, 256).expect("segmentation");
    for k in [1, 2, 4, 8, 16, 64] {
        let kp = KappaPartition::uniform(0.1, k).expect("partition");
        let r = profile_gamma_upper(&profile, &f, &kp, &seg);
        let slack = r
            .prefix_caps
            .iter()
            .zip(&r.prefix_sums)
            .map(|(c, s)| c - s)
            .fold(f64::INFINITY, f64::min);
        println!(
            "k = {k:>3}  integral {:.6}  upper sum {:.6}  min prefix slack {:.4}  ok {}",
            r.gamma_profile,
            r.upper,
            slack,
            r.passed()
        );
    }
}
