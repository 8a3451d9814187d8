//! Acceptance suite: one test per criterion, each printing a PASS line with
//! the checked values. Run with
//! `cargo test -p movoid-cli --test acceptance -- --nocapture`.
//!
//! Every check is exact integer arithmetic at its stated scale; the time
//! budgets from the criteria are asserted where they are part of the
//! contract.

use movoid_core::admissibility;
use movoid_core::constructions::{extract_line_spread, is_one_system, FieldReduction};
use movoid_core::gf::Field;
use movoid_core::ovoid::{self, PointSet};
use movoid_core::quadric::{elliptic_point_count, Caps, Quadric};
use movoid_core::search::{SearchEngine, SearchProblem, SearchStatus, SearchWitness};
use std::path::Path;
use std::process::Command;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

fn quadric(q: u64, r: usize) -> Quadric {
    Quadric::new(Field::new(q).unwrap(), r, &Caps::default()).unwrap()
}

struct Reduced {
    target: Quadric,
    set: PointSet,
    m: i64,
}

fn reduced(base_q: u64) -> &'static Reduced {
    static Q2: OnceLock<Reduced> = OnceLock::new();
    static Q3: OnceLock<Reduced> = OnceLock::new();
    let cell = match base_q {
        2 => &Q2,
        3 => &Q3,
        _ => unreachable!(),
    };
    cell.get_or_init(|| {
        let ext = Field::new(base_q * base_q).unwrap();
        let base = Field::new(base_q).unwrap();
        let source = Quadric::new(ext, 1, &Caps::default()).unwrap();
        let red = FieldReduction::new(&source, &base, &Caps::default()).unwrap();
        let set = red.reduce_set(&PointSet::full(source.num_points()));
        Reduced { target: red.target, set, m: base_q as i64 + 1 }
    })
}

#[test]
fn criterion_01_point_counts() {
    let started = Instant::now();
    for (q, r) in [(2u64, 1usize), (2, 2), (2, 3), (3, 1), (3, 2), (3, 3), (4, 2), (5, 2)] {
        let qd = quadric(q, r);
        assert_eq!(qd.num_points() as u128, elliptic_point_count(q, r), "q={q} r={r}");
    }
    let elapsed = started.elapsed();
    assert!(elapsed < Duration::from_secs(10), "took {elapsed:?}");
    println!("[PASS] criterion 1: quadric point counts match k_r on the full grid ({elapsed:?})");
}

#[test]
fn criterion_02_line_count_q73() {
    let qd = quadric(3, 3);
    // full enumeration at a sample of points
    for qi in [0u32, 260, 533, 799, 1065] {
        assert_eq!(qd.lines_through(qi).unwrap().len(), 112, "point {qi}");
    }
    // tangent degree argument at every point: |perp| - 1 = q * k_{r-1}
    for qi in 0..qd.num_points() as u32 {
        assert_eq!((qd.perp_of(qi).len() - 1) / 3, 112);
    }
    println!("[PASS] criterion 2: every point of Q^-(7,3) lies on exactly 112 lines");
}

#[test]
fn criterion_03_field_reduction() {
    let caps = Caps::default();
    let started = Instant::now();
    let r2 = reduced(2);
    assert_eq!(r2.set.len(), 51);
    assert_eq!(ovoid::is_m_ovoid(&r2.target, &r2.set, &caps).unwrap(), Some(3));
    let spread2 = extract_line_spread(&r2.target, &r2.set, u64::MAX).unwrap().unwrap();
    assert_eq!(spread2.len(), 17);
    assert!(is_one_system(&r2.target, &spread2).unwrap());
    let q2_elapsed = started.elapsed();
    assert!(q2_elapsed < Duration::from_secs(60), "q=2 took {q2_elapsed:?}");

    let started = Instant::now();
    let r3 = reduced(3);
    assert_eq!(r3.set.len(), 328);
    assert_eq!(ovoid::is_m_ovoid(&r3.target, &r3.set, &caps).unwrap(), Some(4));
    let spread3 = extract_line_spread(&r3.target, &r3.set, u64::MAX).unwrap().unwrap();
    assert_eq!(spread3.len(), 82);
    assert!(is_one_system(&r3.target, &spread3).unwrap());
    let q3_elapsed = started.elapsed();
    assert!(q3_elapsed < Duration::from_secs(60), "q=3 took {q3_elapsed:?}");
    println!(
        "[PASS] criterion 3: field reduction gives the 51-point 3-ovoid / 17-line 1-system \
         ({q2_elapsed:?}) and the 328-point 4-ovoid / 82-line 1-system ({q3_elapsed:?})"
    );
}

#[test]
fn criterion_04_tangent_profile_q72() {
    let r2 = reduced(2);
    let (q, s) = (&r2.target, &r2.set);
    assert_eq!(q.num_points(), 119);
    for qi in 0..q.num_points() as u32 {
        let count = q.perp_of(qi).iter().filter(|&&p| s.contains(p)).count();
        let expected = if s.contains(qi) { 19 } else { 27 };
        assert_eq!(count, expected, "point {qi}");
    }
    assert!(ovoid::tangent_profile(q, s, 3));
    println!("[PASS] criterion 4: tangent sections of the 3-ovoid are 19 (inner) / 27 (outer) at all 119 points");
}

#[test]
fn criterion_05_identity_family() {
    let started = Instant::now();
    for base_q in [2u64, 3] {
        let red = reduced(base_q);
        let q = &red.target;
        let full = PointSet::full(q.num_points());
        let trivial = admissibility::trivial_m(base_q, q.rank() as u32) as i64;
        let combo: Vec<i64> =
            red.set.weights().iter().zip(full.weights()).map(|(a, b)| 2 * a + 3 * b).collect();
        let family: Vec<(Vec<i64>, i64)> = vec![
            (full.weights(), trivial),
            (red.set.weights(), red.m),
            (red.set.complement().weights(), trivial - red.m),
            (combo, 2 * red.m + 3 * trivial),
        ];
        let qq = q.q() as i64;
        let qr = qq.pow(q.rank() as u32);
        let bases: Vec<u32> = (0..12).map(|i| (i * 97 % q.num_points()) as u32).collect();
        for (w, m) in &family {
            // the defining identity and the total weight
            assert_eq!(ovoid::weighted_ovoid_m(q, w).unwrap(), Some(*m));
            assert_eq!(ovoid::total_weight(w), m * (qq.pow(q.rank() as u32 + 1) + 1));
            // non-tangent hyperplane sums at >= 10 off-quadric points
            let mut checked = 0;
            for pg in 0..q.space().point_count() as u32 {
                if q.qidx_of(pg).is_none() {
                    let h = q.polar_of_point(pg);
                    assert_eq!(ovoid::weighted_sum_over(q, w, &h.point_ids), m * (qr + 1));
                    checked += 1;
                    if checked >= 10 {
                        break;
                    }
                }
            }
            // polar sum identity over subspaces of every singular dimension
            for pdim in 0..q.rank() {
                let mut seen = 0;
                q.for_each_singular_subspace(pdim, u64::MAX, |pts, vecs| {
                    if seen % 53 == 0 {
                        let sub = q.space().span(q.field(), vecs);
                        assert_eq!(sub.point_ids.len(), pts.len());
                        assert!(ovoid::polar_sum_identity_holds(q, w, *m, &sub));
                    }
                    seen += 1;
                    if seen > 530 {
                        std::ops::ControlFlow::Break(())
                    } else {
                        std::ops::ControlFlow::Continue(())
                    }
                })
                .unwrap();
            }
            // and over >= 10 non-singular lines
            let pg = q.space();
            let mut checked = 0;
            for a in 0..pg.point_count() as u32 {
                let b = (a + 11) % pg.point_count() as u32;
                let line = pg.span(q.field(), &[pg.coords(a).to_vec(), pg.coords(b).to_vec()]);
                if line.pdim() == 1 && line.point_ids.iter().any(|&p| q.qidx_of(p).is_none()) {
                    assert!(ovoid::polar_sum_identity_holds(q, w, *m, &line));
                    checked += 1;
                    if checked >= 10 {
                        break;
                    }
                }
            }
            // norm recursion at >= 10 base points, and the residue law
            for &b in &bases {
                assert!(ovoid::norm_recursion_holds(q, w, *m, b).unwrap());
            }
            assert!(ovoid::norm_congruence_holds(q, w, *m));
        }
        // quotient norm closed form and residue for the 0/1 members
        for s in [&full, &red.set, &red.set.complement()] {
            let m = ovoid::weighted_ovoid_m(q, &s.weights()).unwrap().unwrap();
            for &b in &bases {
                ovoid::chi_quotient_norm(q, s, m, b).unwrap();
            }
        }
    }
    let elapsed = started.elapsed();
    assert!(elapsed < Duration::from_secs(120), "took {elapsed:?}");
    println!("[PASS] criterion 5: weight-function identity family holds exactly on both reduced quadrics ({elapsed:?})");
}

#[test]
fn criterion_06_quotient_down_everywhere() {
    let r2 = reduced(2);
    let (q, s) = (&r2.target, &r2.set);
    let w = s.weights();
    for base in 0..q.num_points() as u32 {
        let quot = q.quotient(base).unwrap();
        assert_eq!(quot.quadric.rank(), 2);
        let down = ovoid::quotient_down(&quot, &w);
        let expected = 3 - s.contains(base) as i64;
        assert_eq!(
            ovoid::weighted_ovoid_m(&quot.quadric, &down).unwrap(),
            Some(expected),
            "base {base}"
        );
    }
    println!("[PASS] criterion 6: the pushed-down ovoid is a weighted (3-chi)-ovoid at all 119 base points");
}

#[test]
fn criterion_07_admissible_sets() {
    let cases = [
        (2u64, 3u32, vec![3u64, 4]),
        (3, 3, vec![4, 5, 8, 9]),
        (3, 2, vec![2]),
    ];
    for (q, r, expected) in cases {
        let rep = admissibility::admissible_report(q, r).unwrap();
        assert_eq!(rep.nontrivial(), expected, "q={q} r={r}");
    }
    println!("[PASS] criterion 7: nontrivial admissible sets are {{3,4}}, {{4,5,8,9}}, {{2}}");
}

#[test]
fn criterion_08_solution_counts() {
    for q in [2u64, 3, 4, 5, 7, 8, 9] {
        for r in [2u32, 3] {
            // errors internally when brute force disagrees with the closed form
            admissibility::residue_solutions(q, r).unwrap();
        }
    }
    for q in [2u64, 3, 4, 5] {
        for r in 2..=6u32 {
            admissibility::count_admissible(q, r).unwrap();
        }
    }
    println!("[PASS] criterion 8: congruence solution counts and admissible-value counts match brute force on the grids");
}

#[test]
fn criterion_09_lower_bounds() {
    assert_eq!(admissibility::lower_bound(3, 3).unwrap().0, 4);
    for q in [2u64, 3, 4, 5, 7, 8, 9] {
        for r in 2..=6u32 {
            let (new, old) = admissibility::lower_bound(q, r).unwrap();
            assert!(new >= old, "q={q} r={r}");
        }
    }
    println!("[PASS] criterion 9: lower_bound(3,3) = 4 and the new ceiling dominates the old one on the grid");
}

#[test]
fn criterion_10_line_statistics() {
    let r3 = reduced(3);
    for base in r3.set.members() {
        let stats = ovoid::line_stats(&r3.target, &r3.set, r3.m, base).unwrap();
        assert_eq!(stats.sum_t, 84, "base {base}");
        assert_eq!(stats.sum_t_t_minus_1, 6, "base {base}");
    }
    let r2 = reduced(2);
    for base in r2.set.members() {
        let stats = ovoid::line_stats(&r2.target, &r2.set, r2.m, base).unwrap();
        assert_eq!(stats.sum_t_t_minus_1, 2, "base {base}");
    }
    println!("[PASS] criterion 10: sum t = 84 and sum t(t-1) = 6 at all 328 inner points (q=3); sum t(t-1) = 2 at all 51 (q=2)");
}

#[test]
fn criterion_11_nonexistence_by_complete_search() {
    let started = Instant::now();
    let caps = Caps::default();
    // Q^-(5,2), m=1: prunes on and off agree
    let q52 = quadric(2, 2);
    for (pt, pc) in [(true, true), (false, false)] {
        let mut p = SearchProblem::m_ovoid(1);
        p.prune_tangent = pt;
        p.prune_capacity = pc;
        let out = SearchEngine::new(&q52, p, caps).unwrap().run(&mut || false).unwrap();
        assert_eq!(out.status, SearchStatus::ExhaustedNone, "prunes {pt}/{pc}");
    }
    // Q^-(5,3), m=1
    let q53 = quadric(3, 2);
    let out = SearchEngine::new(&q53, SearchProblem::m_ovoid(1), caps)
        .unwrap()
        .run(&mut || false)
        .unwrap();
    assert_eq!(out.status, SearchStatus::ExhaustedNone);
    let elapsed = started.elapsed();
    assert!(elapsed < Duration::from_secs(300), "took {elapsed:?}");
    println!("[PASS] criterion 11: no 1-ovoids of Q^-(5,2) (prunes on or off) or Q^-(5,3), by complete search ({elapsed:?})");
}

#[test]
fn criterion_12_hemisystem_search() {
    let caps = Caps::default();
    let q53 = quadric(3, 2);
    let deadline = Instant::now() + Duration::from_secs(600);
    let engine = SearchEngine::new(&q53, SearchProblem::m_ovoid(2), caps).unwrap();
    let out = engine.run(&mut || Instant::now() >= deadline).unwrap();

    let verify_hemisystem = |pts: &[u32]| {
        let s = PointSet::from_members(q53.num_points(), pts);
        assert_eq!(s.len(), 56);
        let mut lines = 0;
        q53.for_each_generator(&caps, |gen| {
            assert_eq!(gen.iter().filter(|&&p| s.contains(p)).count(), 2);
            lines += 1;
            std::ops::ControlFlow::Continue(())
        })
        .unwrap();
        assert_eq!(lines, 280, "every one of the 280 lines meets the witness in 2 points");
    };

    match out.status {
        SearchStatus::Found => {
            let Some(SearchWitness::Points(pts)) = out.witness else { panic!("point witness") };
            verify_hemisystem(&pts);
            println!(
                "[PASS] criterion 12: hemisystem of Q^-(5,3) found ({} nodes), all 280 lines meet it in exactly 2 points",
                out.nodes
            );
        }
        SearchStatus::BudgetExceeded => {
            // fallback: the bundled fixture verifies, and the search
            // completes when seeded with its first 20 points
            let text = std::fs::read_to_string(
                Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/hemisystem_q53.cert"),
            )
            .unwrap();
            let verified = movoid_cli::cert::load_certificate(&text, &caps).unwrap();
            let (set, m) = verified.kind_set().expect("m-ovoid certificate");
            assert_eq!(m, 2);
            let seeds: Vec<u32> = set.members().take(20).collect();
            let mut p = SearchProblem::m_ovoid(2);
            p.seed_points = seeds;
            let seeded = SearchEngine::new(&q53, p, caps).unwrap().run(&mut || false).unwrap();
            assert_eq!(seeded.status, SearchStatus::Found);
            let Some(SearchWitness::Points(pts)) = seeded.witness else { panic!() };
            verify_hemisystem(&pts);
            println!("[PASS] criterion 12: budget exceeded; fixture verified and seeded search reproduced a hemisystem");
        }
        SearchStatus::ExhaustedNone => panic!("hemisystems of Q^-(5,3) exist"),
    }
}

#[test]
fn criterion_13_json_determinism_across_threads() {
    let bin = env!("CARGO_BIN_EXE_movoid");
    let runs: Vec<Vec<&str>> = vec![
        vec!["reduce", "--q", "2", "--e", "2", "--r", "1", "--format", "json"],
        vec!["reduce", "--q", "3", "--e", "2", "--r", "1", "--format", "json"],
        vec!["search", "--q", "2", "--r", "2", "--m", "1", "--force", "--format", "json"],
        vec![
            "search", "--q", "2", "--r", "2", "--m", "1", "--force", "--no-prune-tangent",
            "--no-prune-capacity", "--format", "json",
        ],
        vec!["search", "--q", "3", "--r", "2", "--m", "1", "--force", "--format", "json"],
        vec!["search", "--q", "3", "--r", "2", "--m", "2", "--format", "json"],
    ];
    for args in &runs {
        let single = Command::new(bin).args(args).args(["--threads", "1"]).output().unwrap();
        let multi = Command::new(bin).args(args).args(["--threads", "4"]).output().unwrap();
        assert_eq!(single.status.code(), multi.status.code(), "{args:?}");
        assert_eq!(single.stdout, multi.stdout, "{args:?}");
        assert!(!single.stdout.is_empty());
    }
    println!("[PASS] criterion 13: reduce and search JSON outputs are byte-identical under 1 and 4 threads");
}
