//! Constructions of m-ovoids: field reduction from a quadric over an
//! extension field, extraction of line spreads from ovoids of rank-3
//! quadrics, and verification of 1-systems.
//!
//! Field reduction composes the source form with the relative trace over
//! the polynomial basis 1, t, ..., t^{e-1}, checks the resulting form is
//! elliptic by point count, and re-expresses coordinates into the standard
//! form through a Witt decomposition, so the target is an ordinary quadric
//! sharing all downstream code paths.

use crate::gf::{Elt, Field, SubfieldMap};
use crate::ovoid::PointSet;
use crate::projgeom::GeomError;
use crate::quadric::{elliptic_point_count, Caps, QuadForm, Quadric, Standardizer};
use alloc::vec;
use alloc::vec::Vec;

/// A field reduction from Q^-(2r+1, q^e) to Q^-(2e(r+1)-1, q): the target
/// quadric in standard form together with the expansion of each source
/// point into an (e-1)-space of target points.
pub struct FieldReduction {
    pub target: Quadric,
    /// source quadric index -> sorted target quadric indices, each of size
    /// (q^e - 1)/(q - 1); expansions of distinct points are disjoint
    pub expansion: Vec<Vec<u32>>,
}

impl FieldReduction {
    /// Builds the reduction for a source quadric over GF(q^e) down to the
    /// given base field GF(q).
    pub fn new(source: &Quadric, base: &Field, caps: &Caps) -> Result<FieldReduction, GeomError> {
        let ext = source.field();
        let sub = SubfieldMap::new(base, ext)
            .map_err(|_| GeomError::Internal("base field does not embed into the source field"))?;
        let e = sub.extension_degree() as usize;
        let r = source.rank();
        let target_rank = e * (r + 1) - 1;
        let expected = elliptic_point_count(base.order() as u64, target_rank);
        if expected > caps.max_points {
            return Err(GeomError::ResourceLimit { needed: expected, cap: caps.max_points });
        }

        let src_dim = 2 * r + 2;
        let dim = e * src_dim;
        // powers of the extension generator t
        let tau = Elt(ext.p());
        let mut tau_pow = vec![Elt(1); e];
        for i in 1..e {
            tau_pow[i] = ext.mul(tau_pow[i - 1], tau);
        }
        // the trace of the source form as a quadratic form over the base
        // field; target coordinate j*e + i carries the t^i component of
        // source coordinate j
        let eval_trace = |y: &[Elt]| -> Elt {
            let mut x = vec![Elt(0); src_dim];
            for (j, xj) in x.iter_mut().enumerate() {
                for i in 0..e {
                    *xj = ext.add(*xj, ext.mul(sub.embed(y[j * e + i]), tau_pow[i]));
                }
            }
            sub.trace(ext, source.form().eval(ext, &x))
        };
        let unit = |i: usize| {
            let mut v = vec![Elt(0); dim];
            v[i] = Elt(1);
            v
        };
        let mut trace_form = QuadForm::zero(dim);
        let diag: Vec<Elt> = (0..dim).map(|i| eval_trace(&unit(i))).collect();
        for i in 0..dim {
            trace_form.set_coef(i, i, diag[i]);
            for j in i + 1..dim {
                let mut v = unit(i);
                v[j] = Elt(1);
                let cross = base.sub(base.sub(eval_trace(&v), diag[i]), diag[j]);
                trace_form.set_coef(i, j, cross);
            }
        }

        // the target quadric in standard coordinates
        let target = Quadric::new(base.clone(), target_rank, caps)?;

        // elliptic check: the trace form must vanish on exactly k points
        let found = target
            .space()
            .ids()
            .filter(|&id| trace_form.eval(base, target.space().coords(id)) == Elt(0))
            .count() as u128;
        if found != expected {
            return Err(GeomError::NotElliptic { expected, found });
        }

        let std_basis: Vec<Vec<Elt>> = (0..dim).map(unit).collect();
        let std = Standardizer::new(base, &trace_form, &std_basis, base.irreducible_quadratic())?;

        // expand each source point: the scalar multiples over GF(q^e) of a
        // representative vector form an (e-1)-space over GF(q)
        let per_point = (ext.order() as usize - 1) / (base.order() as usize - 1);
        let mut seen = vec![false; target.num_points()];
        let mut expansion = Vec::with_capacity(source.num_points());
        for sp in 0..source.num_points() as u32 {
            let xv = source.point_coords(sp);
            let mut pts = Vec::with_capacity(per_point);
            for lam in ext.elements().skip(1) {
                let mut y = vec![Elt(0); dim];
                for (j, &xj) in xv.iter().enumerate() {
                    let comps = sub.components(ext.mul(lam, xj));
                    for (i, &c) in comps.iter().enumerate() {
                        y[j * e + i] = c;
                    }
                }
                let mut z = std.map(base, &y).ok_or(GeomError::Internal("standardizer domain"))?;
                let id = target
                    .space()
                    .id_of_vector(base, &mut z)
                    .ok_or(GeomError::Internal("expansion hit the zero vector"))?;
                let qi = target
                    .qidx_of(id)
                    .ok_or(GeomError::Internal("expansion left the target quadric"))?;
                pts.push(qi);
            }
            pts.sort_unstable();
            pts.dedup();
            if pts.len() != per_point {
                return Err(GeomError::Internal("expansion has the wrong size"));
            }
            for &p in &pts {
                if seen[p as usize] {
                    return Err(GeomError::Internal("expansions overlap"));
                }
                seen[p as usize] = true;
            }
            expansion.push(pts);
        }
        Ok(FieldReduction { target, expansion })
    }

    /// The union of the expansions of a source point set. Carries an
    /// m-ovoid of the source to an m(q^e-1)/(q-1)-ovoid of the target.
    pub fn reduce_set(&self, source_set: &PointSet) -> PointSet {
        let mut out = PointSet::empty(self.target.num_points());
        for sp in source_set.members() {
            for &p in &self.expansion[sp as usize] {
                out.insert(p);
            }
        }
        out
    }
}

/// The totally singular lines fully contained in the set, returned iff they
/// partition the set exactly.
pub fn extract_line_spread(
    q: &Quadric,
    s: &PointSet,
    cap: u64,
) -> Result<Option<Vec<Vec<u32>>>, GeomError> {
    let mut lines = Vec::new();
    for line in q.singular_lines(cap)? {
        if line.iter().all(|&p| s.contains(p)) {
            lines.push(line);
        }
    }
    let mut covered = vec![false; q.num_points()];
    let mut total = 0usize;
    for line in &lines {
        for &p in line {
            if covered[p as usize] {
                return Ok(None); // two contained lines meet
            }
            covered[p as usize] = true;
            total += 1;
        }
    }
    Ok(if total == s.len() { Some(lines) } else { None })
}

/// Verifies the 1-system property on a rank-3 quadric: q^4 + 1 pairwise
/// disjoint totally singular lines such that every plane of the quadric on
/// one of them avoids all the others.
pub fn is_one_system(q: &Quadric, lines: &[Vec<u32>]) -> Result<bool, GeomError> {
    if q.rank() != 3 {
        return Err(GeomError::RankTooSmall { r: q.rank() });
    }
    let qq = q.q();
    for line in lines {
        if !is_singular_line(q, line) {
            return Err(GeomError::NotALine);
        }
    }
    if lines.len() as u64 != qq.pow(4) + 1 {
        return Ok(false);
    }
    let mut covered = vec![false; q.num_points()];
    for line in lines {
        for &p in line {
            if covered[p as usize] {
                return Ok(false); // not pairwise disjoint
            }
            covered[p as usize] = true;
        }
    }
    for line in lines {
        for plane in q.planes_through_line(line)? {
            for &p in &plane {
                if covered[p as usize] && line.binary_search(&p).is_err() {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Whether a sorted list of quadric indices is exactly the point set of a
/// totally singular line.
pub fn is_singular_line(q: &Quadric, line: &[u32]) -> bool {
    if line.len() != q.q() as usize + 1 || line.windows(2).any(|w| w[0] >= w[1]) {
        return false;
    }
    if line.iter().any(|&p| p as usize >= q.num_points()) {
        return false;
    }
    let span = q.space().span(
        q.field(),
        &[q.point_coords(line[0]).to_vec(), q.point_coords(line[1]).to_vec()],
    );
    match q.qpoints_of(&span) {
        Some(qpts) => qpts == line,
        None => false,
    }
}
