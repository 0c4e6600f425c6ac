use std::collections::HashSet;

use endotrace::generate::{case_rng, case_seed, Blueprint, Caps, LeftMode, Shape};
use endotrace_core::endo::make_ses;

#[test]
fn streams_are_independent_and_reproducible() {
    assert_eq!(case_seed(9, "additivity", 4), case_seed(9, "additivity", 4));
    let seeds: HashSet<u64> = ["additivity", "fnvn", "duality"]
        .iter()
        .flat_map(|s| (0..50).map(move |c| case_seed(9, s, c)))
        .chain((0..50).map(|c| case_seed(10, "additivity", c)))
        .collect();
    assert_eq!(seeds.len(), 200);
}

#[test]
fn caps_parse() {
    let c = Caps::parse("rank=4, k=2,len=3").unwrap();
    assert_eq!((c.rank, c.carrier, c.tuple, c.bound, c.frobenius), (4, 2, 3, 8, 8));
    assert_eq!(Caps::parse("").unwrap(), Caps::default());
    for bad in ["rank=0", "rank", "width=3", "bound=-1"] {
        assert!(Caps::parse(bad).is_err(), "{bad}");
    }
}

#[test]
fn draws_cover_noncommutative_rings_and_twists() {
    let caps = Caps::default();
    let (mut noncomm, mut twisted, mut prime, mut zero_free) = (0, 0, 0, 0);
    for case in 0..300 {
        let bp = Blueprint::draw(&mut case_rng(1, "coverage", case), &Shape::default(), &caps);
        assert!(bp.ring.rank() <= caps.rank);
        let inst = bp.build(None).unwrap();
        let ring = inst.ctx.right_ring();
        noncomm += usize::from(!ring.is_commutative());
        twisted += usize::from(bp.m != [0] || bp.n != [0]);
        prime += usize::from(bp.left == LeftMode::Prime);
        zero_free += usize::from(inst.carrier(0).unwrap().module().rank() > 0);
    }
    assert!(noncomm > 30 && twisted > 100 && prime > 50 && zero_free > 250, "{noncomm} {twisted} {prime} {zero_free}");
}

#[test]
fn shrinks_only_simplify() {
    let caps = Caps::default();
    let shape = Shape { carriers: (2, 3), ..Shape::default() };
    for case in 0..30 {
        let bp = Blueprint::draw(&mut case_rng(2, "shrink", case), &shape, &caps);
        for s in bp.shrinks(2) {
            assert!(s != bp);
            assert!(s.carriers.len() >= 2 && s.carriers.len() <= bp.carriers.len());
            assert!(s.ring.rank() <= bp.ring.rank());
            assert!(s.coeffs.iter().map(|c| c.abs()).sum::<i64>() <= bp.coeffs.iter().map(|c| c.abs()).sum::<i64>());
        }
    }
}

#[test]
fn generated_sequences_are_exact() {
    let caps = Caps::default();
    let shape = Shape { carriers: (2, 2), budget: 6, ..Shape::default() };
    for case in 0..25 {
        let mut inst = Blueprint::draw(&mut case_rng(3, "ses", case), &shape, &caps).build(None).unwrap();
        let (lo, hi) = (inst.presentations[0].clone(), inst.presentations[1].clone());
        let ses = make_ses(&inst.ctx, &lo, &hi, &mut || inst.coeffs.next()).unwrap();
        assert!(ses.is_exact().unwrap(), "case {case}");
    }
}
