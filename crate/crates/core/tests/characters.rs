use std::sync::Arc;

use shintani_core::characters::{
    clifford_nilpotent_chars, dixon_table, orbit_map, orbit_twist_offenders, verify_invariance, OrbitType, MAX_CLASSES,
};
use shintani_core::groups::{ClassTable, Family, GroupSpec, GroupTable, DEFAULT_MAX_ORDER};
use shintani_core::twist::n_f;

fn classes(family: Family, p: u32, r: usize) -> ClassTable {
    let spec = GroupSpec::new(family, 2, p, 1, r).unwrap();
    ClassTable::build(Arc::new(GroupTable::build(spec, DEFAULT_MAX_ORDER).unwrap()))
}

#[test]
fn sl2_dual_numbers_table() {
    let ct = classes(Family::SL, 3, 2);
    let tab = dixon_table(&ct, MAX_CLASSES).unwrap();
    assert_eq!(tab.len(), 25);
    assert!(tab.row_orthogonality());
    assert!(tab.column_orthogonality());
    assert_eq!(tab.degrees.iter().map(|d| d * d).sum::<u64>(), 648);
    assert!(tab.degrees.iter().all(|d| [1, 2, 3, 4, 6, 12].contains(d)));
    assert!(tab.rows[0].iter().all(|v| v.modimage == 1));
    // values at the identity are the degrees
    let id = ct.identity_class();
    for (row, &d) in tab.rows.iter().zip(&tab.degrees) {
        assert_eq!(row[id].mult[0] as u64, d);
        assert_eq!(row.iter().map(|v| v.mult.iter().sum::<u32>() as u64).max(), Some(d));
    }
}

#[test]
fn sl2_dual_numbers_orbits() {
    let ct = classes(Family::SL, 3, 2);
    let tab = dixon_table(&ct, MAX_CLASSES).unwrap();
    let (ctx, om) = orbit_map(&ct, &tab).unwrap();
    assert_eq!(om.orbits[om.rows[0].orbit].kind, OrbitType::Zero);
    assert!(!om.rows[0].primitive);
    for (i, ro) in om.rows.iter().enumerate() {
        let kind = om.orbits[ro.orbit].kind;
        match tab.degrees[i] {
            12 | 6 => assert_eq!(kind, OrbitType::RegularSemisimple),
            1..=3 => assert_eq!(kind, OrbitType::Zero),
            _ => {}
        }
        assert_eq!(ro.multiplicity * om.orbits[ro.orbit].size as u64, tab.degrees[i]);
    }
    let nil: Vec<_> = om.rows.iter().filter(|r| om.orbits[r.orbit].kind == OrbitType::RegularNilpotent).collect();
    assert_eq!(nil.len(), 12);
    let o1 = nil.iter().filter(|r| om.orbits[r.orbit].label.as_deref() == Some("o1")).count();
    assert_eq!(o1, 6);
    // orbit sizes partition sl_2(F_3)
    assert_eq!(om.orbits.iter().map(|o| o.size).sum::<usize>(), 27);
    let tp = n_f(&ct, 7).unwrap();
    assert!(orbit_twist_offenders(&ctx, &tab, &om, &tp).is_empty());
}

#[test]
fn clifford_sl2_f3() {
    let ct = classes(Family::SL, 3, 2);
    let tab = dixon_table(&ct, MAX_CLASSES).unwrap();
    let (ctx, _) = orbit_map(&ct, &tab).unwrap();
    let rep = clifford_nilpotent_chars(&ct, &tab, &ctx).unwrap();
    assert!(rep.all_pass(), "{:?}", rep.checks);
    assert_eq!(rep.z_order, 162);
    assert_eq!(rep.characters.len(), 12);
    assert!(rep.characters.iter().all(|c| c.degree == 4));
}

#[test]
fn gl2_orbit_map_on_dual_numbers() {
    let ct = classes(Family::GL, 3, 2);
    let tab = dixon_table(&ct, MAX_CLASSES).unwrap();
    assert_eq!(tab.degrees.iter().map(|d| d * d).sum::<u64>(), 3888);
    let (_, om) = orbit_map(&ct, &tab).unwrap();
    assert_eq!(om.orbits.iter().map(|o| o.size).sum::<usize>(), 81);
}

fn invariance(q: u32) {
    let ct = classes(Family::SL, q, 2);
    let tab = dixon_table(&ct, MAX_CLASSES).unwrap();
    let (ctx, om) = orbit_map(&ct, &tab).unwrap();
    let cl = clifford_nilpotent_chars(&ct, &tab, &ctx).unwrap();
    assert!(cl.all_pass(), "{:?}", cl.checks);
    let tp = n_f(&ct, 3).unwrap();
    let rep = verify_invariance(&ct, &tab, &om, &tp, &cl).unwrap();
    assert!(rep.all_pass(), "{:?}", rep.checks);
    assert_eq!(rep.witnesses.len() as u32, 4 * q);
}

#[test]
fn invariance_sl2_f3() {
    invariance(3);
}

#[test]
fn invariance_sl2_f5() {
    invariance(5);
}
