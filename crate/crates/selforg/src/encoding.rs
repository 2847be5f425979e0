//! Weak orders as trait vectors, one feature per pair of items.
//!
//! Pairs `(i, j)` with `i < j` are listed in lexicographic order. Trait 1
//! means `i` is preferred, 0 that `j` is, and 2 a tie. Strong orders thus
//! need two traits per feature and weak orders three.

use preflattice_core::{PolicySet, PreferenceOrder};

use crate::error::{Result, SelforgError};

pub const PREFERS_FIRST: u32 = 1;
pub const PREFERS_SECOND: u32 = 0;
pub const TIED: u32 = 2;

pub fn encode_order(order: &PreferenceOrder) -> Vec<u32> {
    let m = order.policies().len();
    let mut out = Vec::with_capacity(m * m.saturating_sub(1) / 2);
    for i in 0..m {
        for j in i + 1..m {
            out.push(if order.prefers(i, j) {
                PREFERS_FIRST
            } else if order.prefers(j, i) {
                PREFERS_SECOND
            } else {
                TIED
            });
        }
    }
    out
}

/// Traits needed per feature: 2 for strong orders, 3 otherwise.
pub fn traits_needed(order: &PreferenceOrder) -> u32 {
    if order.is_strong() {
        2
    } else {
        3
    }
}

/// Inverse of [`encode_order`]; rejects vectors that are not transitive.
pub fn decode_order(policies: &PolicySet, traits: &[u32]) -> Result<PreferenceOrder> {
    let m = policies.len();
    let features = m * m.saturating_sub(1) / 2;
    if traits.len() != features {
        return Err(SelforgError::NotAnOrder(format!("expected {features} features, got {}", traits.len())));
    }
    let mut beaten_by = vec![0usize; m];
    let mut k = 0;
    for i in 0..m {
        for j in i + 1..m {
            match traits[k] {
                PREFERS_FIRST => beaten_by[j] += 1,
                PREFERS_SECOND => beaten_by[i] += 1,
                TIED => {}
                t => return Err(SelforgError::NotAnOrder(format!("trait {t} at feature {k}"))),
            }
            k += 1;
        }
    }
    let mut levels: Vec<usize> = beaten_by.clone();
    levels.sort_unstable();
    levels.dedup();
    let groups: Vec<Vec<usize>> =
        levels.iter().map(|&l| (0..m).filter(|&i| beaten_by[i] == l).collect()).collect();
    let order = PreferenceOrder::from_indices(policies, groups)?;
    if encode_order(&order) != traits {
        return Err(SelforgError::NotAnOrder("pairwise relation is not a weak order".into()));
    }
    Ok(order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use preflattice_core::order::parse_order;

    #[test]
    fn chain_of_three() {
        let ps = PolicySet::new(["a", "b", "c"]).unwrap();
        let o = parse_order("a>b>c", Some(&ps)).unwrap();
        assert_eq!(encode_order(&o), [1, 1, 1]);
        assert_eq!(traits_needed(&o), 2);
        assert_eq!(decode_order(&ps, &[1, 1, 1]).unwrap(), o);
        let w = parse_order("b>a=c", Some(&ps)).unwrap();
        assert_eq!(encode_order(&w), [0, 2, 1]);
        assert_eq!(traits_needed(&w), 3);
        assert_eq!(decode_order(&ps, &[0, 2, 1]).unwrap(), w);
    }

    #[test]
    fn cycles_rejected() {
        let ps = PolicySet::new(["a", "b", "c"]).unwrap();
        // a>b, c>a, b>c
        assert!(matches!(decode_order(&ps, &[1, 0, 1]), Err(SelforgError::NotAnOrder(_))));
        assert!(decode_order(&ps, &[1, 1]).is_err());
        assert!(decode_order(&ps, &[1, 1, 7]).is_err());
    }
}
