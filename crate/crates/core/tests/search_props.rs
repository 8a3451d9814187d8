//! Search engine properties: prune admissibility (status never depends on
//! prunes), brute-force oracle agreement at enumerable scale, seeding, and
//! deterministic branch merging on a found instance.

use movoid_core::constructions::FieldReduction;
use movoid_core::gf::Field;
use movoid_core::ovoid::{self, PointSet};
use movoid_core::quadric::{Caps, Quadric};
use movoid_core::search::{
    BranchOutcome, SearchEngine, SearchProblem, SearchStatus, SearchWitness,
};

fn quadric(q: u64, r: usize) -> Quadric {
    Quadric::new(Field::new(q).unwrap(), r, &Caps::default()).unwrap()
}

fn run(q: &Quadric, p: SearchProblem) -> movoid_core::search::SearchOutcome {
    SearchEngine::new(q, p, Caps::default()).unwrap().run(&mut || false).unwrap()
}

#[test]
fn prunes_change_nodes_not_outcome() {
    let qd = quadric(2, 2);
    for m in [1i64, 2, 3] {
        let mut with = SearchProblem::m_ovoid(m);
        with.prune_tangent = true;
        with.prune_capacity = true;
        let mut without = SearchProblem::m_ovoid(m);
        without.prune_tangent = false;
        without.prune_capacity = false;
        let a = run(&qd, with);
        let b = run(&qd, without);
        assert_eq!(a.status, b.status, "m={m}");
        assert_eq!(a.witness, b.witness, "m={m}");
    }
}

#[test]
fn brute_force_oracle_rank_one_q3() {
    // all 2^10 subsets of Q^-(3,3): only the trivial ovoids exist
    let qd = quadric(3, 1);
    let caps = Caps::default();
    let n = qd.num_points();
    for m in [0i64, 1] {
        let mut witnesses = Vec::new();
        for mask in 0u32..(1 << n) {
            let members: Vec<u32> = (0..n as u32).filter(|&i| mask >> i & 1 == 1).collect();
            let s = PointSet::from_members(n, &members);
            if ovoid::is_m_ovoid(&qd, &s, &caps).unwrap() == Some(m) {
                witnesses.push(members);
            }
        }
        assert_eq!(witnesses.len(), 1);
        let out = run(&qd, SearchProblem::m_ovoid(m));
        assert_eq!(out.status, SearchStatus::Found);
        assert_eq!(out.witness, Some(SearchWitness::Points(witnesses[0].clone())));
    }
}

#[test]
fn seeded_search_respects_the_seeds() {
    let qd = quadric(3, 2);
    // seed with the first 10 points of a hemisystem found by an unseeded run
    let out = run(&qd, SearchProblem::m_ovoid(2));
    let SearchWitness::Points(found) = out.witness.unwrap() else { panic!() };
    let mut p = SearchProblem::m_ovoid(2);
    p.seed_points = found[..10].to_vec();
    let seeded = run(&qd, p);
    assert_eq!(seeded.status, SearchStatus::Found);
    let SearchWitness::Points(w) = seeded.witness.unwrap() else { panic!() };
    for s in &found[..10] {
        assert!(w.binary_search(s).is_ok());
    }
}

#[test]
fn one_system_completion_from_reduction() {
    let ext = Field::new(4).unwrap();
    let base = Field::new(2).unwrap();
    let source = Quadric::new(ext, 1, &Caps::default()).unwrap();
    let red = FieldReduction::new(&source, &base, &Caps::default()).unwrap();
    let s = red.reduce_set(&PointSet::full(source.num_points()));
    let mut spread =
        movoid_core::constructions::extract_line_spread(&red.target, &s, u64::MAX)
            .unwrap()
            .unwrap();
    spread.sort();
    let mut p = SearchProblem::one_system();
    p.seed_lines = spread[..16].to_vec();
    let engine = SearchEngine::new(&red.target, p, Caps::default()).unwrap();
    let out = engine.run(&mut || false).unwrap();
    assert_eq!(out.status, SearchStatus::Found);
    let SearchWitness::Lines(lines) = out.witness.unwrap() else { panic!() };
    assert_eq!(lines.len(), 17);
    assert_eq!(lines, spread, "the completion recovers the full spread");
}

#[test]
fn merge_replays_serial_on_a_found_instance() {
    let qd = quadric(3, 2);
    for limit in [None, Some(50_000u64), Some(500_000)] {
        let mut p = SearchProblem::m_ovoid(2);
        p.node_limit = limit;
        let engine = SearchEngine::new(&qd, p, Caps::default()).unwrap();
        let serial = engine.run(&mut || false).unwrap();
        let branches = engine.branch_count().unwrap();
        assert!(branches > 0);
        let outcomes: Vec<BranchOutcome> =
            (0..branches).map(|i| engine.run_branch(i, &mut || false).unwrap()).collect();
        let merged = engine.merge(&outcomes).unwrap();
        assert_eq!(serial.status, merged.status, "limit={limit:?}");
        assert_eq!(serial.nodes, merged.nodes, "limit={limit:?}");
        assert_eq!(serial.witness, merged.witness, "limit={limit:?}");
    }
}
