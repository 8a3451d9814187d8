//! Cross-module identity checks on the desk-scale quadrics: the weighted
//! ovoid family built from the field-reduced ovoids, their complements,
//! trivial ovoids, and integer combinations, pushed through the quotient
//! machinery.

use movoid_core::constructions::FieldReduction;
use movoid_core::gf::Field;
use movoid_core::ovoid::{self, PointSet};
use movoid_core::quadric::{Caps, Quadric};

fn reduced_ovoid(base_q: u64) -> (Quadric, PointSet, i64) {
    let ext = Field::new(base_q * base_q).unwrap();
    let base = Field::new(base_q).unwrap();
    let source = Quadric::new(ext, 1, &Caps::default()).unwrap();
    let red = FieldReduction::new(&source, &base, &Caps::default()).unwrap();
    let s = red.reduce_set(&PointSet::full(source.num_points()));
    let m = base_q as i64 + 1;
    (red.target, s, m)
}

#[test]
fn complement_of_an_ovoid_is_an_ovoid() {
    let (q, s, m) = reduced_ovoid(2);
    let caps = Caps::default();
    assert_eq!(ovoid::is_m_ovoid(&q, &s, &caps).unwrap(), Some(m));
    let comp = s.complement();
    // complement parameter is (q^r - 1)/(q - 1) - m = 7 - 3
    assert_eq!(ovoid::is_m_ovoid(&q, &comp, &caps).unwrap(), Some(4));
    assert_eq!(comp.len() as i64, 4 * (2i64.pow(4) + 1));
}

#[test]
fn characteristic_functions_are_weighted_ovoids() {
    let (q, s, m) = reduced_ovoid(2);
    assert_eq!(ovoid::weighted_ovoid_m(&q, &s.weights()).unwrap(), Some(m));
    let full = PointSet::full(q.num_points());
    assert_eq!(ovoid::weighted_ovoid_m(&q, &full.weights()).unwrap(), Some(7));
    // 2 chi_1 + 3 chi_2 is a weighted (2 m_1 + 3 m_2)-ovoid
    let combo: Vec<i64> =
        s.weights().iter().zip(full.weights()).map(|(a, b)| 2 * a + 3 * b).collect();
    assert_eq!(ovoid::weighted_ovoid_m(&q, &combo).unwrap(), Some(2 * 3 + 3 * 7));
}

#[test]
fn quotient_down_drops_the_parameter_twice() {
    let (q, s, m) = reduced_ovoid(2);
    let w = s.weights();
    let quot = q.quotient(0).unwrap();
    let down = ovoid::quotient_down(&quot, &w);
    let m1 = m - w[0];
    assert_eq!(ovoid::weighted_ovoid_m(&quot.quadric, &down).unwrap(), Some(m1));
    // and once more, down to rank 1
    let quot2 = quot.quadric.quotient(3).unwrap();
    let down2 = ovoid::quotient_down(&quot2, &down);
    let m2 = m1 - down[3];
    assert_eq!(ovoid::weighted_ovoid_m(&quot2.quadric, &down2).unwrap(), Some(m2));
}

#[test]
fn norm_recursion_and_congruence_for_the_family() {
    let (q, s, _) = reduced_ovoid(2);
    let full = PointSet::full(q.num_points());
    let family: Vec<(Vec<i64>, i64)> = vec![
        (full.weights(), 7),
        (s.weights(), 3),
        (s.complement().weights(), 4),
        (s.weights().iter().zip(full.weights()).map(|(a, b)| 2 * a + 3 * b).collect(), 27),
    ];
    for (w, m) in &family {
        assert_eq!(ovoid::weighted_ovoid_m(&q, w).unwrap(), Some(*m));
        assert!(ovoid::norm_congruence_holds(&q, w, *m));
        for base in [0u32, 17, 50, 83, 118] {
            assert!(ovoid::norm_recursion_holds(&q, w, *m, base).unwrap(), "m={m} base={base}");
        }
    }
}

#[test]
fn quotient_norm_closed_form_inner_and_outer() {
    let (q, s, m) = reduced_ovoid(2);
    let inner = s.members().next().unwrap();
    let outer = (0..q.num_points() as u32).find(|&p| !s.contains(p)).unwrap();
    // closed forms evaluate to 20 (inner) and 39 (outer) for m=3, q=2, r=3
    assert_eq!(ovoid::chi_quotient_norm(&q, &s, m, inner).unwrap(), 20);
    assert_eq!(ovoid::chi_quotient_norm(&q, &s, m, outer).unwrap(), 39);
}

#[test]
fn polar_sum_identity_across_dimensions() {
    let (q, s, m) = reduced_ovoid(2);
    let w = s.weights();
    let f = q.field();
    let pg = q.space();
    // points (some on, some off the quadric)
    for pg_id in (0..pg.point_count() as u32).step_by(23) {
        let sub = pg.span(f, &[pg.coords(pg_id).to_vec()]);
        assert!(ovoid::polar_sum_identity_holds(&q, &w, m, &sub));
    }
    // totally singular lines
    for line in q.singular_lines(u64::MAX).unwrap().iter().step_by(101) {
        let sub = pg.span(
            f,
            &[
                q.point_coords(line[0]).to_vec(),
                q.point_coords(line[1]).to_vec(),
            ],
        );
        assert!(ovoid::polar_sum_identity_holds(&q, &w, m, &sub));
    }
    // non-singular lines and planes through mixed points
    for a in (0..pg.point_count() as u32).step_by(31) {
        let b = (a + 7) % pg.point_count() as u32;
        let line = pg.span(f, &[pg.coords(a).to_vec(), pg.coords(b).to_vec()]);
        if line.pdim() == 1 {
            assert!(ovoid::polar_sum_identity_holds(&q, &w, m, &line));
        }
        let c = (a + 100) % pg.point_count() as u32;
        let plane =
            pg.span(f, &[pg.coords(a).to_vec(), pg.coords(b).to_vec(), pg.coords(c).to_vec()]);
        if plane.pdim() == 2 {
            assert!(ovoid::polar_sum_identity_holds(&q, &w, m, &plane));
        }
    }
    // generators (maximal totally singular subspaces)
    for gen in q.generators(&Caps::default()).unwrap().iter().step_by(97) {
        assert!(ovoid::polar_sum_identity_holds(&q, &w, m, gen));
    }
}

#[test]
fn histogram_of_the_reduced_ovoid_shows_the_spread() {
    let (q, s, _) = reduced_ovoid(2);
    for base in s.members().take(8) {
        let hist = ovoid::intersection_histogram(&q, &s, base).unwrap();
        // exactly one line through each inner point lies inside the ovoid
        assert_eq!(hist.get(&3), Some(&1));
        let total: u64 = hist.values().sum();
        assert_eq!(total, 27); // k_{r-1} lines through a point
    }
}
