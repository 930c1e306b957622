//! Decomposition size against the closed two-qubit roofs.

use monogamy::measures::MeasureSpec;
use monogamy::quantum::{random_density, Bipartition, DimSignature};
use monogamy::roof::{exact_two_qubit_roof, roof_value, OptimizerConfig};

fn worst_excess(spec: &MeasureSpec, rank: usize, extra: usize) -> f64 {
    let sig = DimSignature::new(vec![2, 2]).unwrap();
    let cut = Bipartition::first_vs_rest(&sig).unwrap();
    (0..20u64)
        .map(|i| {
            let rho = random_density(&sig, rank, 77 * rank as u64 + i).unwrap();
            let exact = exact_two_qubit_roof(&rho, spec).unwrap();
            let cfg = OptimizerConfig { n_extra: extra, restarts: 8, ..OptimizerConfig::with_seed(i) };
            roof_value(&rho, &cut, spec, &cfg).unwrap().value - exact
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

#[test]
fn rank_plus_one_members_suffice() {
    for spec in [MeasureSpec::eoe(), MeasureSpec::concurrence(), MeasureSpec::tangle()] {
        for rank in 2..=4 {
            for extra in 1..=2 {
                let e = worst_excess(&spec, rank, extra);
                println!("{} rank {rank} n = rank + {extra}: worst excess {e:.2e}", spec.name());
                assert!(e.abs() < 1e-4, "{} rank {rank} extra {extra}: {e}", spec.name());
            }
        }
    }
}

#[test]
fn rank_members_fall_short_at_rank_three() {
    for spec in [MeasureSpec::eoe(), MeasureSpec::concurrence(), MeasureSpec::tangle()] {
        let two = worst_excess(&spec, 2, 0);
        let three = worst_excess(&spec, 3, 0);
        println!("{} n = rank: worst excess {two:.2e} at rank 2, {three:.2e} at rank 3", spec.name());
        assert!(two.abs() < 1e-6);
        assert!(three > 1e-3);
    }
}
