//! Enumeration, brute-force oracles and agreement sweeps.

pub mod oracle;
pub mod sweep;

pub use oracle::{hilbert_oracle, isotropic_oracle, local_solvability_oracle, SAFE_PRECISION};
pub use sweep::{agreement_sweep, perf_agreement_sweep, Disagreement, SweepConfig, SweepReport, REPORT_SCHEMA_VERSION};

use crate::perfectclosure::{PerfElement, PerfectClosure};
use crate::places::GlobalField;

/// Every canonical element of height at most `bound`, each once, in the
/// field's enumeration order.
pub fn enumerate_elements<F: GlobalField>(k: &F, bound: u64) -> impl Iterator<Item = F::Elem> {
    k.enumerate(bound).into_iter()
}

/// Elements of exact level `0..=levels` whose representative has height at
/// most `bound`.
pub fn enumerate_perf_elements(k: &PerfectClosure, levels: u32, bound: u64) -> impl Iterator<Item = PerfElement> {
    k.enumerate(levels, bound).into_iter()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::places::{FunctionField, Rationals};
    use std::collections::HashSet;

    #[test]
    fn enumeration_examples() {
        let k = FunctionField::new(3).unwrap();
        assert_eq!(enumerate_elements(&k, 0).count(), 3);
        let q = Rationals;
        let got: HashSet<String> = enumerate_elements(&q, 2).map(|x| q.format_elem(&x)).collect();
        let want: HashSet<String> = ["0", "1", "-1", "2", "-2", "1/2", "-1/2"].iter().map(|s| s.to_string()).collect();
        assert_eq!(got, want);
        assert_eq!(enumerate_elements(&q, 2).count(), 7);
    }
}
