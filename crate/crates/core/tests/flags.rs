use std::time::Instant;

use shintani_core::flags::{cycle_report, CycleCase, CycleOptions, MAX_FLAGS};

fn opts(m_list: &[usize], xcheck: bool) -> CycleOptions {
    CycleOptions { m_list: m_list.to_vec(), xcheck, max_flags: MAX_FLAGS }
}

#[test]
fn gl2_dual_numbers_cycles() {
    let t = Instant::now();
    let rep = cycle_report(2, 2, 3, 1, 1, &opts(&[1, 2], true)).unwrap();
    assert_eq!(rep.case, CycleCase::Rational);
    assert!(rep.all_pass(), "{:?}", rep.checks);
    assert!(rep.witness.is_some());

    let rep = cycle_report(2, 2, 3, 1, 2, &opts(&[1, 2, 3], true)).unwrap();
    eprintln!("{:?}", rep.counts);
    assert_eq!(rep.case, CycleCase::Full);
    assert!(rep.all_pass(), "{:?}", rep.checks);
    assert_eq!(rep.counts[0].count, 0);

    for z in [3, 4] {
        let rep = cycle_report(2, 2, 3, 1, z, &opts(&[1, 2], true)).unwrap();
        assert_eq!(rep.case, CycleCase::Empty);
        assert!(rep.all_pass(), "{:?}", rep.checks);
    }
    eprintln!("elapsed {:?}", t.elapsed());
}

#[test]
fn gl3_over_f2_short_cycle() {
    let t = Instant::now();
    let rep = cycle_report(3, 2, 2, 1, 2, &opts(&[2, 3], false)).unwrap();
    eprintln!("{:?} N = {:?}", rep.counts, rep.n_comp);
    assert_eq!(rep.case, CycleCase::Short);
    assert!(rep.all_pass(), "{:?}", rep.checks);
    eprintln!("elapsed {:?}", t.elapsed());
}
