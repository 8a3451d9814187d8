//! m-ovoids and weighted m-ovoids of an elliptic quadric, the quotient-down
//! map on weight functions, and the exact identities they satisfy: tangent
//! intersection numbers, polar sum identities over subspaces, the squared
//! norm recursion through a quotient, its residue consequences, and the
//! per-point line statistics.
//!
//! Everything here is exact integer arithmetic; the verifier of record for
//! the m-ovoid property is the full generator scan, never the (faster,
//! necessary-only) tangent profile.

use crate::projgeom::{GeomError, Subspace};
use crate::quadric::{Caps, Quadric, Quotient};
use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::ControlFlow;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OvoidError {
    /// The probe value of the defining identity is not divisible by q^r + 1.
    NonIntegralM { value: i64, modulus: i64 },
    BasePointNotInSet { base: u32 },
    /// A closed-form prediction disagreed with the direct computation.
    NormMismatch { direct: i64, closed: i64 },
    ResidueMismatch { direct: i64, expected: i64, modulus: i64 },
    LineStatsMismatch { which: &'static str, enumerated: i64, closed: i64 },
    Geom(GeomError),
}

impl fmt::Display for OvoidError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OvoidError::NonIntegralM { value, modulus } => {
                write!(f, "probe value {value} is not divisible by {modulus}")
            }
            OvoidError::BasePointNotInSet { base } => {
                write!(f, "base point {base} is not in the point set")
            }
            OvoidError::NormMismatch { direct, closed } => {
                write!(f, "squared norm mismatch: direct {direct}, closed form {closed}")
            }
            OvoidError::ResidueMismatch { direct, expected, modulus } => {
                write!(f, "residue mismatch mod {modulus}: direct {direct}, expected {expected}")
            }
            OvoidError::LineStatsMismatch { which, enumerated, closed } => {
                write!(f, "line statistic {which}: enumerated {enumerated}, closed form {closed}")
            }
            OvoidError::Geom(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for OvoidError {}

impl From<GeomError> for OvoidError {
    fn from(e: GeomError) -> Self {
        OvoidError::Geom(e)
    }
}

/// A subset of the quadric points, stored as an indicator over quadric
/// indices. Immutable value object.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointSet {
    ind: Vec<bool>,
    size: usize,
}

impl PointSet {
    pub fn empty(n: usize) -> PointSet {
        PointSet { ind: vec![false; n], size: 0 }
    }

    pub fn full(n: usize) -> PointSet {
        PointSet { ind: vec![true; n], size: n }
    }

    pub fn from_members(n: usize, members: &[u32]) -> PointSet {
        let mut s = PointSet::empty(n);
        for &m in members {
            s.insert(m);
        }
        s
    }

    pub fn insert(&mut self, qi: u32) {
        if !self.ind[qi as usize] {
            self.ind[qi as usize] = true;
            self.size += 1;
        }
    }

    #[inline]
    pub fn contains(&self, qi: u32) -> bool {
        self.ind[qi as usize]
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn universe(&self) -> usize {
        self.ind.len()
    }

    pub fn members(&self) -> impl Iterator<Item = u32> + '_ {
        self.ind.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i as u32)
    }

    pub fn complement(&self) -> PointSet {
        PointSet { ind: self.ind.iter().map(|&b| !b).collect(), size: self.ind.len() - self.size }
    }

    /// The 0/1 weight vector of the set.
    pub fn weights(&self) -> Vec<i64> {
        self.ind.iter().map(|&b| b as i64).collect()
    }
}

fn qpow(q: &Quadric, e: u32) -> i64 {
    (q.q() as i64).pow(e)
}

/// Number of points an m-ovoid has in the tangent hyperplane at one of its
/// own points: (m-1)(q^r + 1) + 1.
pub fn tangent_inner_count(q: &Quadric, m: i64) -> i64 {
    (m - 1) * (qpow(q, q.rank() as u32) + 1) + 1
}

/// Number of points an m-ovoid has in the tangent hyperplane at a quadric
/// point outside it: m(q^r + 1).
pub fn tangent_outer_count(q: &Quadric, m: i64) -> i64 {
    m * (qpow(q, q.rank() as u32) + 1)
}

/// The m-ovoid test of record: a full scan over all generators. Returns m
/// when every generator meets the set in the same number of points.
pub fn is_m_ovoid(q: &Quadric, s: &PointSet, caps: &Caps) -> Result<Option<i64>, GeomError> {
    let mut m: Option<i64> = None;
    let mut uniform = true;
    q.for_each_generator(caps, |pts| {
        let c = pts.iter().filter(|&&p| s.contains(p)).count() as i64;
        match m {
            None => {
                m = Some(c);
                ControlFlow::Continue(())
            }
            Some(v) if v == c => ControlFlow::Continue(()),
            Some(_) => {
                uniform = false;
                ControlFlow::Break(())
            }
        }
    })?;
    Ok(if uniform { m } else { None })
}

/// Necessary-condition filter: every tangent hyperplane section has the
/// inner or outer count required of an m-ovoid. Used as a search pruner and
/// property test, never as the verifier of record.
pub fn tangent_profile(q: &Quadric, s: &PointSet, m: i64) -> bool {
    let inner = tangent_inner_count(q, m);
    let outer = tangent_outer_count(q, m);
    (0..q.num_points() as u32).all(|qi| {
        let c = q.perp_of(qi).iter().filter(|&&p| s.contains(p)).count() as i64;
        c == if s.contains(qi) { inner } else { outer }
    })
}

/// Sum of weights over the quadric points orthogonal to a point (the
/// tangent hyperplane section, self included).
pub fn perp_weight_sum(q: &Quadric, w: &[i64], qi: u32) -> i64 {
    q.perp_of(qi).iter().map(|&p| w[p as usize]).sum()
}

/// Recovers m of a weighted ovoid from the defining identity at the first
/// point in canonical order, then validates the identity globally. Weights
/// may be any integers, negative included.
pub fn weighted_ovoid_m(q: &Quadric, w: &[i64]) -> Result<Option<i64>, OvoidError> {
    debug_assert_eq!(w.len(), q.num_points());
    let qr = qpow(q, q.rank() as u32);
    let modulus = qr + 1;
    let probe = perp_weight_sum(q, w, 0) + qr * w[0];
    if probe.rem_euclid(modulus) != 0 {
        return Err(OvoidError::NonIntegralM { value: probe, modulus });
    }
    let m = probe.div_euclid(modulus);
    for qi in 1..q.num_points() as u32 {
        if perp_weight_sum(q, w, qi) + qr * w[qi as usize] != m * modulus {
            return Ok(None);
        }
    }
    Ok(Some(m))
}

/// Sum of weights over the quadric points among a list of projective ids.
pub fn weighted_sum_over(q: &Quadric, w: &[i64], pg_ids: &[u32]) -> i64 {
    pg_ids.iter().filter_map(|&id| q.qidx_of(id)).map(|qi| w[qi as usize]).sum()
}

/// Total weight over the whole quadric.
pub fn total_weight(w: &[i64]) -> i64 {
    w.iter().sum()
}

/// The polar pairing identity of a weighted m-ovoid over an arbitrary
/// subspace: w(S^perp) + q^{r-j} w(S) = m (q^{r-j} + 1) for a j-space S.
/// For j > r the equivalent form with the exponent on the other side is
/// checked, keeping all arithmetic integral.
pub fn polar_sum_identity_holds(q: &Quadric, w: &[i64], m: i64, sub: &Subspace) -> bool {
    let j = sub.pdim() as i64;
    let r = q.rank() as i64;
    let polar = q.polar(sub);
    let mu_sub = weighted_sum_over(q, w, &sub.point_ids);
    let mu_perp = weighted_sum_over(q, w, &polar.point_ids);
    if j <= r {
        let e = qpow(q, (r - j) as u32);
        mu_perp + e * mu_sub == m * (e + 1)
    } else {
        let e = qpow(q, (j - r) as u32);
        e * mu_perp + mu_sub == m * (e + 1)
    }
}

/// Pushes a weight function down a quotient: the image point of each line
/// through the base carries the weight sum of the line minus the base.
/// For a weighted m-ovoid the result is a weighted (m - w(base))-ovoid of
/// the quotient quadric.
pub fn quotient_down(quot: &Quotient, w: &[i64]) -> Vec<i64> {
    let mut out = vec![0i64; quot.quadric.num_points()];
    for (line, &img) in quot.lines.iter().zip(&quot.images) {
        out[img as usize] =
            line.iter().filter(|&&p| p != quot.base).map(|&p| w[p as usize]).sum();
    }
    out
}

/// Squared norm of a weight function.
pub fn norm_sq(w: &[i64]) -> i64 {
    w.iter().map(|&x| x * x).sum()
}

/// Exact recursion of the squared norm through the quotient at a base
/// point: ||w||^2 equals
/// w(b)^2 + (w(b) + m(q-1))^2 + (q+1) * sum_{P in b^perp \ b} w(P)^2
/// - ||w_down||^2.
pub fn norm_recursion_holds_on(q: &Quadric, quot: &Quotient, w: &[i64], m: i64) -> bool {
    let qq = q.q() as i64;
    let b = quot.base;
    let wb = w[b as usize];
    let perp_sq: i64 =
        q.perp_of(b).iter().filter(|&&p| p != b).map(|&p| w[p as usize] * w[p as usize]).sum();
    let down = quotient_down(quot, w);
    let rhs = wb * wb + (wb + m * (qq - 1)).pow(2) + (qq + 1) * perp_sq - norm_sq(&down);
    norm_sq(w) == rhs
}

/// Convenience wrapper building the quotient at the base point.
pub fn norm_recursion_holds(
    q: &Quadric,
    w: &[i64],
    m: i64,
    base: u32,
) -> Result<bool, OvoidError> {
    let quot = q.quotient(base)?;
    Ok(norm_recursion_holds_on(q, &quot, w, m))
}

/// Residue of the squared norm of a weighted m-ovoid mod 2(q+1):
/// (q^2+1) m^2 for odd rank, -2q m^2 + (q+1)(q^r+1) m for even rank.
pub fn norm_residue_expected(q: &Quadric, m: i64) -> i64 {
    let qq = q.q() as i64;
    let modulus = 2 * (qq + 1);
    let raw = if q.rank() % 2 == 1 {
        (qq * qq + 1) * m * m
    } else {
        -2 * qq * m * m + (qq + 1) * (qpow(q, q.rank() as u32) + 1) * m
    };
    raw.rem_euclid(modulus)
}

pub fn norm_congruence_holds(q: &Quadric, w: &[i64], m: i64) -> bool {
    let modulus = 2 * (q.q() as i64 + 1);
    norm_sq(w).rem_euclid(modulus) == norm_residue_expected(q, m)
}

/// Squared norm of the pushed-down characteristic function of an m-ovoid at
/// a base point, computed directly from the quotient and checked against
/// its closed form
/// chi(b) + (chi(b) + m(q-1))^2 - chi(b)(q+1)(q^r+1) + m(q^r+q)
/// and against its residue mod 2(q+1).
pub fn chi_quotient_norm(
    q: &Quadric,
    s: &PointSet,
    m: i64,
    base: u32,
) -> Result<i64, OvoidError> {
    let quot = q.quotient(base)?;
    let qq = q.q() as i64;
    let r = q.rank() as u32;
    let chi0 = s.contains(base) as i64;
    let down = quotient_down(&quot, &s.weights());
    let direct = norm_sq(&down);
    let closed = chi0 + (chi0 + m * (qq - 1)).pow(2) - chi0 * (qq + 1) * (qpow(q, r) + 1)
        + m * (qpow(q, r) + qq);
    if direct != closed {
        return Err(OvoidError::NormMismatch { direct, closed });
    }
    // residue of the norm of a weighted (m - chi(b))-ovoid of rank r-1
    let expected = norm_residue_expected(&quot.quadric, m - chi0);
    let modulus = 2 * (qq + 1);
    if direct.rem_euclid(modulus) != expected {
        return Err(OvoidError::ResidueMismatch { direct: direct.rem_euclid(modulus), expected, modulus });
    }
    Ok(direct)
}

/// Per-base-point line statistics of an m-ovoid: the multiset of
/// t_l = |l ∩ S| - 1 over the lines through a point of S, with its first
/// three power sums checked against their closed forms.
#[derive(Debug, Clone)]
pub struct LineStats {
    pub base: u32,
    pub t_values: Vec<i64>,
    pub sum_t: i64,
    pub sum_t_sq: i64,
    pub sum_t_t_minus_1: i64,
}

pub fn line_stats(
    q: &Quadric,
    s: &PointSet,
    m: i64,
    base: u32,
) -> Result<LineStats, OvoidError> {
    if !s.contains(base) {
        return Err(OvoidError::BasePointNotInSet { base });
    }
    let qq = q.q() as i64;
    let r = q.rank() as u32;
    let mut t_values = Vec::new();
    for line in q.lines_through(base)? {
        let c = line.point_ids.iter().filter_map(|&id| q.qidx_of(id)).filter(|&p| s.contains(p)).count()
            as i64;
        t_values.push(c - 1);
    }
    let sum_t: i64 = t_values.iter().sum();
    let sum_t_sq: i64 = t_values.iter().map(|&t| t * t).sum();
    let sum_t_t_minus_1 = sum_t_sq - sum_t;
    let qr = qpow(q, r);
    let closed_t = (m - 1) * (qr + 1);
    let closed_t_sq = 1 + (1 + m * (qq - 1)).pow(2) - (qq + 1) * (qr + 1) + m * (qr + qq);
    let closed_tt1 =
        m * m * (qq - 1) * (qq - 1) + 3 * m * (qq - 1) - qpow(q, r + 1) - qq + 2;
    if sum_t != closed_t {
        return Err(OvoidError::LineStatsMismatch { which: "sum_t", enumerated: sum_t, closed: closed_t });
    }
    if sum_t_sq != closed_t_sq {
        return Err(OvoidError::LineStatsMismatch {
            which: "sum_t_sq",
            enumerated: sum_t_sq,
            closed: closed_t_sq,
        });
    }
    if sum_t_t_minus_1 != closed_tt1 {
        return Err(OvoidError::LineStatsMismatch {
            which: "sum_t_t_minus_1",
            enumerated: sum_t_t_minus_1,
            closed: closed_tt1,
        });
    }
    Ok(LineStats { base, t_values, sum_t, sum_t_sq, sum_t_t_minus_1 })
}

/// For each intersection size c, the number of lines through the base
/// meeting the set in exactly c points. The counts total k_{r-1}.
pub fn intersection_histogram(
    q: &Quadric,
    s: &PointSet,
    base: u32,
) -> Result<BTreeMap<usize, u64>, OvoidError> {
    let mut hist = BTreeMap::new();
    for line in q.lines_through(base)? {
        let c = line
            .point_ids
            .iter()
            .filter_map(|&id| q.qidx_of(id))
            .filter(|&p| s.contains(p))
            .count();
        *hist.entry(c).or_insert(0u64) += 1;
    }
    Ok(hist)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::Field;

    fn quadric(q: u64, r: usize) -> Quadric {
        Quadric::new(Field::new(q).unwrap(), r, &Caps::default()).unwrap()
    }

    #[test]
    fn empty_and_full_are_ovoids() {
        let qd = quadric(2, 2);
        let caps = Caps::default();
        let empty = PointSet::empty(qd.num_points());
        assert_eq!(is_m_ovoid(&qd, &empty, &caps).unwrap(), Some(0));
        let full = PointSet::full(qd.num_points());
        assert_eq!(is_m_ovoid(&qd, &full, &caps).unwrap(), Some(3)); // (q^2-1)/(q-1)
    }

    #[test]
    fn rank_one_only_trivial_ovoids() {
        let qd = quadric(3, 1);
        let caps = Caps::default();
        for size in 1..qd.num_points() {
            let s = PointSet::from_members(qd.num_points(), &(0..size as u32).collect::<Vec<_>>());
            assert_eq!(is_m_ovoid(&qd, &s, &caps).unwrap(), None, "size {size}");
        }
        assert_eq!(is_m_ovoid(&qd, &PointSet::full(qd.num_points()), &caps).unwrap(), Some(1));
    }

    #[test]
    fn tangent_profile_of_trivial_sets() {
        let qd = quadric(2, 2);
        assert!(tangent_profile(&qd, &PointSet::empty(qd.num_points()), 0));
        assert!(tangent_profile(&qd, &PointSet::full(qd.num_points()), 3));
        assert!(!tangent_profile(&qd, &PointSet::from_members(qd.num_points(), &[0]), 1));
    }

    #[test]
    fn all_ones_is_weighted_trivial_ovoid() {
        for (q, r, m) in [(2u64, 2usize, 3i64), (3, 2, 4), (2, 3, 7)] {
            let qd = quadric(q, r);
            let w = vec![1i64; qd.num_points()];
            assert_eq!(weighted_ovoid_m(&qd, &w).unwrap(), Some(m));
        }
    }

    #[test]
    fn weighted_linear_combination() {
        let qd = quadric(2, 2);
        // 2 * chi(full) + 3 * chi(empty) = constant 2: a weighted 6-ovoid
        let w: Vec<i64> = vec![2; qd.num_points()];
        assert_eq!(weighted_ovoid_m(&qd, &w).unwrap(), Some(6));
        // negative combination: -1 * full
        let w: Vec<i64> = vec![-1; qd.num_points()];
        assert_eq!(weighted_ovoid_m(&qd, &w).unwrap(), Some(-3));
    }

    #[test]
    fn non_integral_probe_is_an_error() {
        let qd = quadric(2, 2);
        // weight 1 on the base point and on one other point of its perp:
        // probe = 2 + q^r * 1 = 6, not divisible by q^r + 1 = 5
        let other = qd.perp_of(0).iter().copied().find(|&p| p != 0).unwrap();
        let mut w = vec![0i64; qd.num_points()];
        w[0] = 1;
        w[other as usize] = 1;
        assert_eq!(
            weighted_ovoid_m(&qd, &w).unwrap_err(),
            OvoidError::NonIntegralM { value: 6, modulus: 5 }
        );
    }

    #[test]
    fn almost_weighted_ovoid_rejected() {
        let qd = quadric(2, 2);
        let mut w = vec![1i64; qd.num_points()];
        w[qd.num_points() - 1] = 2;
        assert_eq!(weighted_ovoid_m(&qd, &w).unwrap(), None);
    }

    #[test]
    fn weighted_sums_over_hyperplanes() {
        // total weight m(q^{r+1}+1); non-tangent hyperplane weight m(q^r+1)
        let qd = quadric(2, 2);
        let w = vec![1i64; qd.num_points()];
        let m = 3i64;
        assert_eq!(total_weight(&w), m * (8 + 1));
        for pg in 0..qd.space().point_count() as u32 {
            if qd.qidx_of(pg).is_none() {
                let h = qd.polar_of_point(pg);
                assert_eq!(weighted_sum_over(&qd, &w, &h.point_ids), m * (4 + 1));
            }
        }
    }

    #[test]
    fn polar_sum_identity_over_subspaces() {
        let qd = quadric(2, 2);
        let f = qd.field();
        let pg = qd.space();
        let w = vec![1i64; qd.num_points()];
        let m = 3;
        // all points, a sample of lines (singular or not), and planes
        for a in (0..pg.point_count() as u32).step_by(5) {
            let s = pg.span(f, &[pg.coords(a).to_vec()]);
            assert!(polar_sum_identity_holds(&qd, &w, m, &s));
            for b in (a + 1..pg.point_count() as u32).step_by(11) {
                let line = pg.span(f, &[pg.coords(a).to_vec(), pg.coords(b).to_vec()]);
                assert!(polar_sum_identity_holds(&qd, &w, m, &line));
            }
        }
    }

    #[test]
    fn quotient_down_uniform_weights() {
        let qd = quadric(2, 2);
        let quot = qd.quotient(0).unwrap();
        let w = vec![1i64; qd.num_points()];
        let down = quotient_down(&quot, &w);
        // every line carries q points besides the base
        assert!(down.iter().all(|&x| x == 2));
        assert_eq!(weighted_ovoid_m(&quot.quadric, &down).unwrap(), Some(2));
    }

    #[test]
    fn norm_recursion_on_uniform_weights() {
        for (q, r) in [(2u64, 2usize), (3, 2), (2, 3)] {
            let qd = quadric(q, r);
            let w = vec![1i64; qd.num_points()];
            let m = weighted_ovoid_m(&qd, &w).unwrap().unwrap();
            for base in [0u32, qd.num_points() as u32 - 1] {
                assert!(norm_recursion_holds(&qd, &w, m, base).unwrap());
            }
        }
    }

    #[test]
    fn norm_congruence_small_cases() {
        // rank 1: the norm equals m^2 (q^2 + 1) exactly
        let qd = quadric(3, 1);
        let w = vec![2i64; qd.num_points()];
        let m = weighted_ovoid_m(&qd, &w).unwrap().unwrap();
        assert_eq!(m, 2);
        assert_eq!(norm_sq(&w), m * m * (9 + 1));
        assert!(norm_congruence_holds(&qd, &w, m));
        // rank 2, all points
        let qd = quadric(3, 2);
        let w = vec![1i64; qd.num_points()];
        assert!(norm_congruence_holds(&qd, &w, 4));
    }

    #[test]
    fn chi_quotient_norm_full_set() {
        let qd = quadric(2, 2);
        let s = PointSet::full(qd.num_points());
        // chi0 = 1, m = 3: closed form 1 + 16 - 15 + 18 = 20
        assert_eq!(chi_quotient_norm(&qd, &s, 3, 0).unwrap(), 20);
    }

    #[test]
    fn line_stats_full_set() {
        let qd = quadric(2, 2);
        let s = PointSet::full(qd.num_points());
        let stats = line_stats(&qd, &s, 3, 7).unwrap();
        assert_eq!(stats.t_values.len(), 5);
        assert!(stats.t_values.iter().all(|&t| t == 2));
        assert_eq!(stats.sum_t, 10);
        assert_eq!(stats.sum_t_sq, 20);
        assert_eq!(stats.sum_t_t_minus_1, 10);
    }

    #[test]
    fn line_stats_requires_membership() {
        let qd = quadric(2, 2);
        let s = PointSet::empty(qd.num_points());
        assert_eq!(
            line_stats(&qd, &s, 0, 3).unwrap_err(),
            OvoidError::BasePointNotInSet { base: 3 }
        );
    }

    #[test]
    fn histogram_of_trivial_sets() {
        let qd = quadric(3, 2);
        let full = PointSet::full(qd.num_points());
        let hist = intersection_histogram(&qd, &full, 0).unwrap();
        assert_eq!(hist.get(&4), Some(&10)); // all k_1 lines have q+1 points in S
        assert_eq!(hist.len(), 1);
        let empty = PointSet::empty(qd.num_points());
        let hist = intersection_histogram(&qd, &empty, 0).unwrap();
        assert_eq!(hist.get(&0), Some(&10));
    }
}
