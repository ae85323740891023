use std::collections::BTreeSet;

use proptest::prelude::*;
use zn_ap::format::{from_json, from_text, to_json, to_text};
use zn_ap::{
    block_from_set, check_condition, enumerate_ap_partitions, separate, separate_traced,
    starting_points, underlying_set, validate_partition, APBlock, APPartition, BlockOrder,
    CycleElement, EnumerationBudget, PartitionType,
};

/// A random m-AP-partition of a random mixed type of weight 3..=10.
fn mixed_partition() -> impl Strategy<Value = APPartition> {
    (3usize..=10, 1usize..=4, any::<prop::sample::Index>(), any::<prop::sample::Index>())
        .prop_filter_map("no partition of that type", |(n, m, ti, pi)| {
            let types: Vec<PartitionType> = PartitionType::all_of_weight(n)
                .into_iter()
                .filter(PartitionType::is_mixed)
                .collect();
            let t = ti.get(&types);
            let all = enumerate_ap_partitions(n, m, t, EnumerationBudget::unlimited()).ok()?;
            if all.is_empty() {
                return None;
            }
            Some(pi.get(&all.items).clone())
        })
}

/// Any valid partition, mixed or not.
fn any_partition() -> impl Strategy<Value = APPartition> {
    (1usize..=9, 1usize..=5, any::<prop::sample::Index>(), any::<prop::sample::Index>())
        .prop_filter_map("no partition of that type", |(n, m, ti, pi)| {
            let types = PartitionType::all_of_weight(n);
            let all = enumerate_ap_partitions(n, m, ti.get(&types), EnumerationBudget::unlimited())
                .ok()?;
            (!all.is_empty()).then(|| pi.get(&all.items).clone())
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn block_from_set_inverts_underlying_set(n in 1usize..=24, m in 1usize..=8, h in 1usize..=24, len in 1usize..=24) {
        prop_assume!(h <= n && len <= n);
        let block = APBlock::new(CycleElement::new(h, n).unwrap(), len);
        if let Ok(set) = underlying_set(block, n, m) {
            prop_assert_eq!(set.len(), len);
            let reps = block_from_set(&set, n, m);
            prop_assert!(reps.contains(&block));
            for r in reps {
                prop_assert_eq!(r.len, len);
                prop_assert_eq!(underlying_set(r, n, m).unwrap(), set.clone());
            }
        }
    }

    #[test]
    fn rotation_keeps_validity_and_type(p in any_partition(), c in 0usize..30) {
        let q = p.rotate(c);
        prop_assert!(validate_partition(&q).is_ok());
        prop_assert_eq!(q.type_of().unwrap(), p.type_of().unwrap());
        prop_assert_eq!(p.rotate(c).rotate(p.n() - c % p.n()), p);
    }

    #[test]
    fn text_and_json_round_trip(p in any_partition()) {
        prop_assert_eq!(from_text(&to_text(&p), BlockOrder::Strict).unwrap(), p.clone());
        prop_assert_eq!(from_json(&to_json(&p), BlockOrder::Strict).unwrap(), p);
    }

    #[test]
    fn separation_keeps_type_and_round_trips(p in mixed_partition(), m_prime in 1usize..=4) {
        let t = p.type_of().unwrap();
        prop_assume!(check_condition(&t, p.difference(), m_prime).unwrap());
        let starts = starting_points(&p).unwrap();
        prop_assert!(!starts.is_empty());
        for &s in &starts {
            prop_assert!(!p.block_with_head(s).unwrap().is_singleton());
        }

        let (q, trace) = separate_traced(&p, m_prime, starts[0]).unwrap();
        prop_assert!(validate_partition(&q).is_ok());
        prop_assert_eq!(q.difference(), m_prime);
        prop_assert_eq!(q.type_of().unwrap(), t);
        prop_assert_eq!(trace.steps.len(), p.blocks().len());

        // The image's starting points include the one used.
        prop_assert!(starting_points(&q).unwrap().contains(&starts[0]));
        prop_assert_eq!(separate(&q, p.difference()).unwrap(), p.clone());

        // Every maximal start yields the same image.
        for &s in &starts[1..] {
            prop_assert_eq!(&separate_traced(&p, m_prime, s).unwrap().0, &q);
        }
    }

    #[test]
    fn separation_is_injective_on_a_type(n in 5usize..=9, m in 1usize..=3, m_prime in 1usize..=3, ti in any::<prop::sample::Index>()) {
        let types: Vec<PartitionType> = PartitionType::all_of_weight(n)
            .into_iter()
            .filter(|t| t.is_mixed() && check_condition(t, m, m_prime).unwrap())
            .collect();
        prop_assume!(!types.is_empty());
        let t = ti.get(&types);
        let domain = enumerate_ap_partitions(n, m, t, EnumerationBudget::unlimited()).unwrap();
        let image: BTreeSet<APPartition> =
            domain.items.iter().map(|p| separate(p, m_prime).unwrap()).collect();
        prop_assert_eq!(image.len(), domain.len());
        let codomain: BTreeSet<APPartition> = enumerate_ap_partitions(n, m_prime, t, EnumerationBudget::unlimited())
            .unwrap()
            .items
            .into_iter()
            .collect();
        prop_assert_eq!(image, codomain);
    }
}
