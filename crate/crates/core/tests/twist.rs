use std::sync::Arc;

use shintani_core::algebra::trunc::TruncMatrix;
use shintani_core::groups::{geometric_partition, ClassTable, Family, GroupSpec, GroupTable, DEFAULT_MAX_ORDER};
use shintani_core::twist::{lang_audit, n_f, sh_order, verify_twist};

fn classes(family: Family, p: u32, r: usize) -> ClassTable {
    let spec = GroupSpec::new(family, 2, p, 1, r).unwrap();
    ClassTable::build(Arc::new(GroupTable::build(spec, DEFAULT_MAX_ORDER).unwrap()))
}

fn x_prime(ct: &ClassTable, x: i64) -> usize {
    let gt = ct.group();
    let f = gt.field().clone();
    let m = TruncMatrix::from_layers(
        2,
        &[
            vec![f.from_int(-1), f.zero(), f.zero(), f.from_int(-1)],
            vec![f.zero(), f.from_int(x), f.zero(), f.zero()],
        ],
    );
    ct.class_of(gt.index_of(&m).unwrap())
}

#[test]
fn gl2_dual_numbers_twist_is_identity() {
    let ct = classes(Family::GL, 3, 2);
    assert_eq!(ct.group().order(), 3888);
    let tp = n_f(&ct, 11).unwrap();
    assert!(tp.moved().is_empty());
    assert_eq!(sh_order(&tp), 1);
    assert!(verify_twist(&ct, &tp, 11).all_pass());
    let gp = geometric_partition(&ct, 4).unwrap();
    assert!(gp.rational_counts().iter().all(|&c| c == 1));
}

#[test]
fn sl2_dual_numbers_twist() {
    let ct = classes(Family::SL, 3, 2);
    let tp = n_f(&ct, 11).unwrap();
    let rep = verify_twist(&ct, &tp, 11);
    assert!(rep.all_pass(), "{:?}", rep.checks);
    // X' goes to the non-square twist of X'
    assert_eq!(tp.image(x_prime(&ct, 1)), x_prime(&ct, 2));
    assert_eq!(tp.image(x_prime(&ct, 2)), x_prime(&ct, 1));
    for c in tp.moved() {
        assert_eq!(ct.jordan(c).s_order, 2);
    }
    // n_F stays inside geometric blocks
    let gp = geometric_partition(&ct, 6).unwrap();
    for c in 0..ct.len() {
        assert_eq!(gp.block_of[c], gp.block_of[tp.image(c)]);
    }
    assert_eq!(gp.block_of[x_prime(&ct, 1)], gp.block_of[x_prime(&ct, 2)]);
    assert_eq!(gp.blocks[gp.block_of[x_prime(&ct, 1)]].len(), 2);
}

#[test]
fn lang_solver_on_every_element() {
    let ct = classes(Family::SL, 3, 2);
    let audit = lang_audit(&ct, 3);
    assert!(audit.failures.is_empty(), "{:?}", &audit.failures[..audit.failures.len().min(5)]);
    assert_eq!(audit.kernel_dims, vec![8]);
    assert_eq!(audit.elements, 648);
}
