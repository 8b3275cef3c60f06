use std::collections::BTreeMap;

use adelab::discr::dbs_enumerate;
use adelab::lattice::{build_root_system, RootKind};

fn main() {
    let rs = build_root_system(RootKind::E, 7).unwrap();
    let mut by_type: BTreeMap<String, Vec<(Vec<num_bigint::BigInt>, usize)>> = BTreeMap::new();
    for e in dbs_enumerate(&rs, 4).unwrap() {
        if e.type_decomposition.is_empty() {
            continue;
        }
        by_type
            .entry(e.type_string())
            .or_default()
            .push((e.cotorsion.invariant_factors.clone(), e.cotorsion.free_rank));
    }
    for (ty, insts) in &by_type {
        if ["2A3+A1", "5A1", "A3+3A1", "D4+2A1", "D6+A1", "6A1", "7A1", "D4+3A1"]
            .contains(&ty.as_str())
        {
            println!("{ty}: {insts:?}");
        }
    }
}
