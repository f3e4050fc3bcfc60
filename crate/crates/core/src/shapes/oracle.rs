use std::collections::HashMap;

use num_bigint::BigUint;

use super::{Filling, Poset};
use crate::error::{Error, Result};

/// Largest poset the downset DP accepts.
pub const MAX_ORACLE_ELEMENTS: usize = 26;

fn predecessor_masks(poset: &Poset) -> Vec<u32> {
    poset
        .predecessors()
        .into_iter()
        .map(|ps| ps.into_iter().fold(0u32, |m, p| m | (1 << p)))
        .collect()
}

/// Number of linear extensions, by dynamic programming over downsets.
///
/// Downsets are processed layer by layer (by size) so only two layers are
/// alive at once. The count of a downset is the number of ways to list its
/// elements in an order compatible with the poset.
pub fn count_linear_extensions(poset: &Poset) -> Result<BigUint> {
    let n = poset.len();
    if n > MAX_ORACLE_ELEMENTS {
        return Err(Error::capacity(format!(
            "{n} elements exceed the oracle limit of {MAX_ORACLE_ELEMENTS}; use the density method"
        )));
    }
    let pred = predecessor_masks(poset);
    let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };

    // 26! < 2^89, so u128 never overflows here.
    let mut layer: HashMap<u32, u128> = HashMap::from([(0u32, 1u128)]);
    for _ in 0..n {
        let mut next: HashMap<u32, u128> = HashMap::with_capacity(layer.len() * 2);
        for (&ideal, &count) in &layer {
            let mut free = full & !ideal;
            while free != 0 {
                let e = free.trailing_zeros();
                free &= free - 1;
                if pred[e as usize] & !ideal == 0 {
                    *next.entry(ideal | (1 << e)).or_insert(0) += count;
                }
            }
        }
        layer = next;
    }
    Ok(BigUint::from(layer.get(&full).copied().unwrap_or(0)))
}

/// All linear extensions in lexicographic order of the element sequence
/// (label 1 first, smallest element index first).
pub fn enumerate_fillings(poset: &Poset, limit: usize) -> Result<Vec<Filling>> {
    if poset.len() <= MAX_ORACLE_ELEMENTS {
        let count = count_linear_extensions(poset)?;
        if count > BigUint::from(limit) {
            return Err(Error::capacity(format!(
                "{count} fillings exceed the enumeration limit {limit}"
            )));
        }
    }
    let n = poset.len();
    let pred = poset.predecessors();
    let mut missing: Vec<usize> = pred.iter().map(Vec::len).collect();
    let mut succ = vec![Vec::new(); n];
    for &(a, b) in poset.relations() {
        succ[a].push(b);
    }
    let mut used = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut out = Vec::new();
    extend(&mut Dfs {
        succ: &succ,
        missing: &mut missing,
        used: &mut used,
        order: &mut order,
        out: &mut out,
        limit,
    })?;
    Ok(out)
}

struct Dfs<'a> {
    succ: &'a [Vec<usize>],
    missing: &'a mut [usize],
    used: &'a mut [bool],
    order: &'a mut Vec<usize>,
    out: &'a mut Vec<Filling>,
    limit: usize,
}

fn extend(s: &mut Dfs<'_>) -> Result<()> {
    let n = s.used.len();
    if s.order.len() == n {
        if s.out.len() == s.limit {
            return Err(Error::capacity(format!(
                "more than {} fillings",
                s.limit
            )));
        }
        s.out.push(Filling::from_order(s.order)?);
        return Ok(());
    }
    for e in 0..n {
        if s.used[e] || s.missing[e] != 0 {
            continue;
        }
        s.used[e] = true;
        s.order.push(e);
        for &b in s.succ[e].iter() {
            s.missing[b] -= 1;
        }
        let r = extend(s);
        for &b in s.succ[e].iter() {
            s.missing[b] += 1;
        }
        s.order.pop();
        s.used[e] = false;
        r?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::super::{build_poset, ShapeSpec, Wall};
    use super::*;
    use crate::formulas::factorial;
    use proptest::prelude::*;

    #[test]
    fn antichain_and_chain() {
        for n in 0..8 {
            assert_eq!(count_linear_extensions(&Poset::antichain(n)).unwrap(), factorial(n as u64));
            assert_eq!(count_linear_extensions(&Poset::chain(n)).unwrap(), BigUint::from(1u32));
        }
    }

    #[test]
    fn two_by_two_without_walls() {
        let p = build_poset(&ShapeSpec::rectangle(2, 2).unwrap());
        assert_eq!(count_linear_extensions(&p).unwrap(), BigUint::from(2u32));
    }

    #[test]
    fn capacity_guard() {
        let r = count_linear_extensions(&Poset::chain(27));
        assert!(matches!(r, Err(Error::Capacity(_))));
    }

    #[test]
    fn enumeration_order() {
        let f = enumerate_fillings(&Poset::chain(3), 10).unwrap();
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].labels(), &[1, 2, 3]);
        let g = enumerate_fillings(&Poset::antichain(2), 10).unwrap();
        let labels: Vec<_> = g.iter().map(|f| f.labels().to_vec()).collect();
        assert_eq!(labels, vec![vec![1, 2], vec![2, 1]]);
    }

    #[test]
    fn enumeration_limit() {
        assert!(matches!(
            enumerate_fillings(&Poset::antichain(4), 23),
            Err(Error::Capacity(_))
        ));
        assert_eq!(enumerate_fillings(&Poset::antichain(4), 24).unwrap().len(), 24);
    }

    fn random_shape() -> impl Strategy<Value = ShapeSpec> {
        (1usize..4, 1usize..4, prop::collection::vec(any::<bool>(), 18)).prop_map(|(r, c, bits)| {
            let mut walls = Vec::new();
            let mut k = 0;
            for row in 0..r as i32 {
                for col in 0..c as i32 {
                    if col + 1 < c as i32 && bits[k % bits.len()] {
                        walls.push(Wall::right(row, col));
                    }
                    k += 1;
                    if row + 1 < r as i32 && bits[k % bits.len()] {
                        walls.push(Wall::up(row, col));
                    }
                    k += 1;
                }
            }
            ShapeSpec::new(r, c, vec![], walls).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn count_matches_enumeration(shape in random_shape()) {
            let poset = build_poset(&shape);
            let all = enumerate_fillings(&poset, usize::MAX).unwrap();
            prop_assert_eq!(BigUint::from(all.len()), count_linear_extensions(&poset).unwrap());
            for f in &all {
                prop_assert!(crate::shapes::is_valid_filling(&shape, f).unwrap());
            }
        }

        #[test]
        fn adding_a_wall_never_decreases(shape in random_shape(), pick in 0usize..64) {
            let cons = shape.constraints();
            prop_assume!(!cons.is_empty());
            let (a, b) = cons[pick % cons.len()];
            let (ca, cb) = (shape.cells()[a], shape.cells()[b]);
            let wall = if ca.row == cb.row { Wall::right(ca.row, ca.col) } else { Wall::up(ca.row, ca.col) };
            let mut walls: Vec<Wall> = shape.walls().iter().copied().collect();
            walls.push(wall);
            let more = ShapeSpec::new(shape.rows(), shape.cols(), vec![], walls).unwrap();
            let before = count_linear_extensions(&build_poset(&shape)).unwrap();
            let after = count_linear_extensions(&build_poset(&more)).unwrap();
            prop_assert!(after >= before);
        }
    }
}
