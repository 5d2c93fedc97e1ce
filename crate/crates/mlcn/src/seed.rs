//! Deterministic sub-seed derivation.
//!
//! Every random draw in a run is keyed by (master seed, replicate, step,
//! layer tag), so any single build or regeneration is reconstructible in
//! isolation without replaying the run.

fn splitmix(state: u64) -> u64 {
    let mut z = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn mix(acc: u64, value: u64) -> u64 {
    splitmix(acc ^ splitmix(value))
}

/// Child seed for one layer draw of one step of one replicate.
pub fn child_seed(master: u64, replicate: u64, step: u64, tag: u64) -> u64 {
    mix(mix(mix(splitmix(master), replicate), step), tag)
}

#[cfg(test)]
mod tests {
    use super::*;

    // Frozen values: the derivation is part of the reproducibility contract,
    // so accidental changes must fail a test.
    #[test]
    fn derivation_is_stable() {
        assert_eq!(child_seed(0, 0, 0, 0), 0xe220_a839_7b1d_cdaf);
        assert_eq!(child_seed(1, 2, 3, 4), 0x128b_9720_b85d_0de3);
    }

    #[test]
    fn arguments_are_position_sensitive() {
        let a = child_seed(7, 1, 2, 3);
        let b = child_seed(7, 2, 1, 3);
        let c = child_seed(7, 1, 3, 2);
        assert_ne!(a, b);
        assert_ne!(a, c);
        assert_ne!(b, c);
    }
}
