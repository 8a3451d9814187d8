//! The elliptic quadric Q^-(2r+1, q): form evaluation, polarity, point /
//! line / generator enumeration, and the quotient construction at a point.
//!
//! The standard form is x0*x1 + ... + x_{2r-2}*x_{2r-1} + g(x_{2r}, x_{2r+1})
//! with g the canonical irreducible binary quadratic of the field. All
//! enumerations are canonical: quadric points inherit the projective point
//! order, and totally singular subspaces are generated from their unique
//! increasing minimal spanning sequence, so output order never depends on
//! scheduling.

use crate::gf::{Elt, Field};
use crate::linalg;
use crate::projgeom::{GeomError, ProjSpace, Subspace};
use alloc::vec;
use alloc::vec::Vec;
use core::ops::ControlFlow;

enum DfsStop {
    Break,
    Limit(GeomError),
}

/// Resource caps for enumeration, overridable by the caller.
#[derive(Debug, Clone, Copy)]
pub struct Caps {
    pub max_points: u128,
    pub max_generators: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { max_points: 5_000, max_generators: 100_000 }
    }
}

impl Caps {
    pub fn unlimited() -> Self {
        Caps { max_points: u128::MAX, max_generators: u64::MAX }
    }
}

/// A quadratic form sum_{i<=j} c_ij x_i x_j on F_q^dim, coefficients stored
/// upper-triangular.
#[derive(Debug, Clone)]
pub struct QuadForm {
    dim: usize,
    coef: Vec<Elt>,
}

impl QuadForm {
    pub fn zero(dim: usize) -> QuadForm {
        QuadForm { dim, coef: vec![Elt(0); dim * (dim + 1) / 2] }
    }

    /// The standard elliptic form of rank r in dimension 2r+2 over the
    /// field, together with its irreducible tail coefficients.
    pub fn standard_elliptic(f: &Field, r: usize) -> (QuadForm, (Elt, Elt, Elt)) {
        let dim = 2 * r + 2;
        let mut form = QuadForm::zero(dim);
        for i in 0..r {
            form.set_coef(2 * i, 2 * i + 1, Elt(1));
        }
        let g = f.irreducible_quadratic();
        form.set_coef(dim - 2, dim - 2, g.0);
        form.set_coef(dim - 2, dim - 1, g.1);
        form.set_coef(dim - 1, dim - 1, g.2);
        (form, g)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        debug_assert!(i <= j && j < self.dim);
        i * self.dim + j - i * (i + 1) / 2
    }

    pub fn coef(&self, i: usize, j: usize) -> Elt {
        self.coef[self.idx(i, j)]
    }

    pub fn set_coef(&mut self, i: usize, j: usize, v: Elt) {
        let idx = self.idx(i, j);
        self.coef[idx] = v;
    }

    pub fn eval(&self, f: &Field, x: &[Elt]) -> Elt {
        debug_assert_eq!(x.len(), self.dim);
        let mut acc = Elt(0);
        let mut k = 0;
        for i in 0..self.dim {
            if x[i] == Elt(0) {
                k += self.dim - i;
                continue;
            }
            for j in i..self.dim {
                let c = self.coef[k];
                k += 1;
                if c != Elt(0) && x[j] != Elt(0) {
                    acc = f.add(acc, f.mul(c, f.mul(x[i], x[j])));
                }
            }
        }
        acc
    }

    /// The associated symmetric bilinear form f(x+y) - f(x) - f(y).
    pub fn polar(&self, f: &Field, x: &[Elt], y: &[Elt]) -> Elt {
        let sum: Vec<Elt> = x.iter().zip(y).map(|(a, b)| f.add(*a, *b)).collect();
        let fs = self.eval(f, &sum);
        f.sub(f.sub(fs, self.eval(f, x)), self.eval(f, y))
    }

    /// Gram matrix of the bilinear form: B(e_i, e_j).
    pub fn gram(&self, f: &Field) -> Vec<Vec<Elt>> {
        let d = self.dim;
        let mut g = vec![vec![Elt(0); d]; d];
        for i in 0..d {
            g[i][i] = f.add(self.coef(i, i), self.coef(i, i));
            for j in i + 1..d {
                g[i][j] = self.coef(i, j);
                g[j][i] = self.coef(i, j);
            }
        }
        g
    }
}

/// Expected number of points of Q^-(2r+1, q).
pub fn elliptic_point_count(q: u64, r: usize) -> u128 {
    let q = q as u128;
    (q.pow(r as u32) - 1) * (q.pow(r as u32 + 1) + 1) / (q - 1)
}

/// Q^-(2r+1, q) with its enumerated point set and incidence structure.
/// Immutable after construction; all reads are safe concurrently.
pub struct Quadric {
    field: Field,
    r: usize,
    g: (Elt, Elt, Elt),
    form: QuadForm,
    space: ProjSpace,
    /// projective ids of the quadric points, ascending
    points: Vec<u32>,
    /// projective id -> quadric index, or NOT_ON for points off the quadric
    qidx: Vec<u32>,
    /// quadric index -> sorted quadric indices of orthogonal quadric points
    perp: Vec<Vec<u32>>,
    gram: Vec<Vec<Elt>>,
}

const NOT_ON: u32 = u32::MAX;

impl Quadric {
    pub fn new(field: Field, r: usize, caps: &Caps) -> Result<Quadric, GeomError> {
        debug_assert!(r >= 1);
        let q = field.order() as u64;
        let expected = elliptic_point_count(q, r);
        if expected > caps.max_points {
            return Err(GeomError::ResourceLimit { needed: expected, cap: caps.max_points });
        }
        let n = 2 * r + 1;
        let space = ProjSpace::new(&field, n, u128::MAX)?;
        let (form, g) = QuadForm::standard_elliptic(&field, r);

        let mut points = Vec::new();
        let mut qidx = vec![NOT_ON; space.point_count()];
        for id in 0..space.point_count() as u32 {
            if form.eval(&field, space.coords(id)) == Elt(0) {
                qidx[id as usize] = points.len() as u32;
                points.push(id);
            }
        }
        assert_eq!(points.len() as u128, expected, "elliptic point count");

        let gram = form.gram(&field);
        // cache G*x per point, then B(x, y) is a dot product
        let gx: Vec<Vec<Elt>> = points
            .iter()
            .map(|&id| linalg::mat_vec(&field, &gram, space.coords(id)))
            .collect();
        let mut perp = vec![Vec::new(); points.len()];
        for i in 0..points.len() {
            let xi = space.coords(points[i]);
            for (j, gxj) in gx.iter().enumerate().skip(i) {
                let mut acc = Elt(0);
                for (a, b) in xi.iter().zip(gxj) {
                    acc = field.add(acc, field.mul(*a, *b));
                }
                if acc == Elt(0) {
                    perp[i].push(j as u32);
                    if i != j {
                        perp[j].push(i as u32);
                    }
                }
            }
        }
        // rows were pushed in ascending order for j >= i and ascending i for
        // the mirrored half, so each list is already sorted
        debug_assert!(perp.iter().all(|p| p.windows(2).all(|w| w[0] < w[1])));

        Ok(Quadric { field, r, g, form, space, points, qidx, perp, gram })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn q(&self) -> u64 {
        self.field.order() as u64
    }

    pub fn rank(&self) -> usize {
        self.r
    }

    pub fn tail(&self) -> (Elt, Elt, Elt) {
        self.g
    }

    pub fn form(&self) -> &QuadForm {
        &self.form
    }

    pub fn space(&self) -> &ProjSpace {
        &self.space
    }

    pub fn num_points(&self) -> usize {
        self.points.len()
    }

    /// Projective id of a quadric point.
    pub fn pg_id(&self, qi: u32) -> u32 {
        self.points[qi as usize]
    }

    /// Quadric index of a projective point, if it lies on the quadric.
    pub fn qidx_of(&self, pg: u32) -> Option<u32> {
        let v = self.qidx[pg as usize];
        (v != NOT_ON).then_some(v)
    }

    pub fn point_coords(&self, qi: u32) -> &[Elt] {
        self.space.coords(self.points[qi as usize])
    }

    pub fn form_eval(&self, x: &[Elt]) -> Elt {
        self.form.eval(&self.field, x)
    }

    pub fn bilinear(&self, x: &[Elt], y: &[Elt]) -> Elt {
        self.form.polar(&self.field, x, y)
    }

    /// Sorted quadric indices orthogonal to a quadric point (includes the
    /// point itself).
    pub fn perp_of(&self, qi: u32) -> &[u32] {
        &self.perp[qi as usize]
    }

    /// Polar subspace of an arbitrary subspace of the ambient space.
    pub fn polar(&self, s: &Subspace) -> Subspace {
        let rows: Vec<Vec<Elt>> = s
            .basis
            .iter()
            .map(|b| linalg::mat_vec(&self.field, &self.gram, b))
            .collect();
        self.space.subspace_from_nullspace(&self.field, &rows)
    }

    /// Polar hyperplane of a projective point (tangent iff the point is on
    /// the quadric).
    pub fn polar_of_point(&self, pg: u32) -> Subspace {
        let row = linalg::mat_vec(&self.field, &self.gram, self.space.coords(pg));
        self.space.subspace_from_nullspace(&self.field, &[row])
    }

    /// Quadric indices of the points of a subspace, if all of them lie on
    /// the quadric.
    pub fn qpoints_of(&self, s: &Subspace) -> Option<Vec<u32>> {
        s.point_ids.iter().map(|&id| self.qidx_of(id)).collect()
    }

    /// All totally singular lines through a quadric point, as subspaces,
    /// ordered by their smallest point other than the base.
    pub fn lines_through(&self, qi: u32) -> Result<Vec<Subspace>, GeomError> {
        if qi as usize >= self.points.len() {
            return Err(GeomError::PointNotOnQuadric { id: qi });
        }
        let f = &self.field;
        let pv = self.point_coords(qi).to_vec();
        let mut lines = Vec::new();
        for &rj in self.perp_of(qi) {
            if rj == qi {
                continue;
            }
            let rv = self.point_coords(rj);
            // the q-1 other points of the line besides the base and rj
            let mut min_other = rj;
            for lam in f.elements().skip(1) {
                let mut w: Vec<Elt> =
                    pv.iter().zip(rv).map(|(a, b)| f.add(*a, f.mul(lam, *b))).collect();
                let id = self
                    .space
                    .id_of_vector(f, &mut w)
                    .expect("line point is a projective point");
                let qj = self.qidx_of(id).expect("line through collinear points is singular");
                min_other = min_other.min(qj);
            }
            // emit each line once, at its smallest non-base point
            if min_other == rj {
                lines.push(self.space.span(f, &[pv.clone(), rv.to_vec()]));
            }
        }
        Ok(lines)
    }

    /// Streams all totally singular subspaces of the given projective
    /// dimension, in canonical order, as (sorted quadric indices, spanning
    /// sequence vectors). Returns the count of visited subspaces; the
    /// visitor may break off the enumeration early.
    pub fn for_each_singular_subspace(
        &self,
        pdim: usize,
        cap: u64,
        mut visit: impl FnMut(&[u32], &[Vec<Elt>]) -> ControlFlow<()>,
    ) -> Result<u64, GeomError> {
        let all: Vec<u32> = (0..self.points.len() as u32).collect();
        let mut count = 0u64;
        let mut seq: Vec<u32> = Vec::new();
        let mut vecs: Vec<Vec<Elt>> = Vec::new();
        match self.dfs_singular(pdim + 1, &all, &mut seq, &mut vecs, &[], cap, &mut count, &mut visit)
        {
            Ok(_) | Err(DfsStop::Break) => Ok(count),
            Err(DfsStop::Limit(e)) => Err(e),
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn dfs_singular(
        &self,
        target_len: usize,
        cands: &[u32],
        seq: &mut Vec<u32>,
        vecs: &mut Vec<Vec<Elt>>,
        pts: &[u32],
        cap: u64,
        count: &mut u64,
        visit: &mut impl FnMut(&[u32], &[Vec<Elt>]) -> ControlFlow<()>,
    ) -> Result<(), DfsStop> {
        if seq.len() == target_len {
            if *count == cap {
                return Err(DfsStop::Limit(GeomError::ResourceLimit {
                    needed: cap as u128 + 1,
                    cap: cap as u128,
                }));
            }
            *count += 1;
            if visit(pts, vecs).is_break() {
                return Err(DfsStop::Break);
            }
            return Ok(());
        }
        let last = seq.last().copied();
        for &c in cands {
            if let Some(l) = last {
                if c <= l {
                    continue;
                }
            }
            if pts.binary_search(&c).is_ok() {
                continue;
            }
            // extend the subspace and enforce that c is the minimum new point
            let Some(new_pts) = self.extend_points(pts, c) else {
                continue;
            };
            let next_cands: Vec<u32> =
                intersect_sorted(cands, self.perp_of(c), last.map(|l| l.max(c)).unwrap_or(c));
            seq.push(c);
            vecs.push(self.point_coords(c).to_vec());
            let res = self.dfs_singular(
                target_len,
                &next_cands,
                seq,
                vecs,
                &new_pts,
                cap,
                count,
                visit,
            );
            seq.pop();
            vecs.pop();
            res?;
        }
        Ok(())
    }

    /// Points of span(pts ∪ {c}); None when some new point has a smaller
    /// index than c (then this extension is not canonical).
    fn extend_points(&self, pts: &[u32], c: u32) -> Option<Vec<u32>> {
        let f = &self.field;
        let cv = self.point_coords(c);
        let mut new_pts = Vec::with_capacity(pts.len() * f.order() as usize + 1);
        new_pts.extend_from_slice(pts);
        new_pts.push(c);
        for &s in pts {
            let sv = self.point_coords(s);
            for lam in f.elements().skip(1) {
                let mut w: Vec<Elt> =
                    sv.iter().zip(cv).map(|(a, b)| f.add(*a, f.mul(lam, *b))).collect();
                let id = self.space.id_of_vector(f, &mut w).expect("nonzero combination");
                let qj = self.qidx_of(id).expect("span of orthogonal singular points");
                if qj < c {
                    return None;
                }
                new_pts.push(qj);
            }
        }
        new_pts.sort_unstable();
        new_pts.dedup();
        Some(new_pts)
    }

    /// All generators (maximal totally singular subspaces), sorted by
    /// canonical basis.
    pub fn generators(&self, caps: &Caps) -> Result<Vec<Subspace>, GeomError> {
        let mut out = Vec::new();
        self.for_each_singular_subspace(self.r - 1, caps.max_generators, |pts, vecs| {
            let basis = linalg::rref(&self.field, vecs.to_vec());
            let point_ids: Vec<u32> = pts.iter().map(|&qi| self.pg_id(qi)).collect();
            out.push(Subspace { basis, point_ids });
            ControlFlow::Continue(())
        })?;
        out.sort_by(|a, b| a.basis.cmp(&b.basis));
        Ok(out)
    }

    /// Streams the generators as sorted quadric index lists; returns the count.
    pub fn for_each_generator(
        &self,
        caps: &Caps,
        mut visit: impl FnMut(&[u32]) -> ControlFlow<()>,
    ) -> Result<u64, GeomError> {
        self.for_each_singular_subspace(self.r - 1, caps.max_generators, |pts, _| visit(pts))
    }

    /// All totally singular lines, as sorted quadric index lists in
    /// canonical order.
    pub fn singular_lines(&self, cap: u64) -> Result<Vec<Vec<u32>>, GeomError> {
        if self.r < 2 {
            return Ok(Vec::new());
        }
        let mut out = Vec::new();
        self.for_each_singular_subspace(1, cap, |pts, _| {
            out.push(pts.to_vec());
            ControlFlow::Continue(())
        })?;
        Ok(out)
    }

    /// The totally singular planes containing a given totally singular line,
    /// as sorted quadric index lists.
    pub fn planes_through_line(&self, line: &[u32]) -> Result<Vec<Vec<u32>>, GeomError> {
        if self.r < 3 {
            return Err(GeomError::RankTooSmall { r: self.r });
        }
        let mut cands: Vec<u32> = self.perp_of(line[0]).to_vec();
        for &p in &line[1..] {
            cands = intersect_sorted(&cands, self.perp_of(p), 0);
        }
        let mut planes = Vec::new();
        for &c in &cands {
            if line.binary_search(&c).is_ok() {
                continue;
            }
            // one plane per minimal extra point
            if let Some(pts) = self.extend_points(line, c) {
                let extra_min =
                    pts.iter().copied().find(|p| line.binary_search(p).is_err()).unwrap();
                if extra_min == c {
                    planes.push(pts);
                }
            }
        }
        Ok(planes)
    }

    /// The quotient polar space at a quadric point: a freshly built standard
    /// elliptic quadric of rank r-1 plus the collinearity-preserving
    /// bijection from the lines through the point onto its points.
    pub fn quotient(&self, base: u32) -> Result<Quotient, GeomError> {
        if self.r < 2 {
            return Err(GeomError::RankTooSmall { r: self.r });
        }
        if base as usize >= self.points.len() {
            return Err(GeomError::PointNotOnQuadric { id: base });
        }
        let f = &self.field;
        let v = self.point_coords(base).to_vec();

        // hyperbolic partner: the first quadric point not orthogonal to v,
        // rescaled so that B(v, w) = 1
        let w = (0..self.points.len() as u32)
            .find_map(|qj| {
                let b = self.bilinear(&v, self.point_coords(qj));
                (b != Elt(0)).then(|| {
                    let inv = f.inv(b).expect("nonzero");
                    self.point_coords(qj).iter().map(|&x| f.mul(inv, x)).collect::<Vec<Elt>>()
                })
            })
            .ok_or(GeomError::Internal("no hyperbolic partner"))?;

        // W = <v, w>^perp carries a nondegenerate elliptic form of rank r-1
        let rows = vec![
            linalg::mat_vec(f, &self.gram, &v),
            linalg::mat_vec(f, &self.gram, &w),
        ];
        let w_basis = linalg::nullspace(f, &rows, 2 * self.r + 2);
        debug_assert_eq!(w_basis.len(), 2 * self.r);

        let std = Standardizer::new(f, &self.form, &w_basis, f.irreducible_quadratic())?;
        let target = Quadric::new(f.clone(), self.r - 1, &Caps::unlimited())?;

        // each line through the base meets W in a unique point
        let lines = self.lines_through(base)?;
        let mut line_qpoints = Vec::with_capacity(lines.len());
        let mut images = Vec::with_capacity(lines.len());
        for line in &lines {
            let qpts = self.qpoints_of(line).ok_or(GeomError::Internal("line off quadric"))?;
            let &other = qpts.iter().find(|&&p| p != base).expect("line has q+1 points");
            let x = self.point_coords(other);
            // project into W along v: u = x - B(x, w) v
            let bxw = self.bilinear(x, &w);
            let u: Vec<Elt> =
                x.iter().zip(&v).map(|(a, b)| f.sub(*a, f.mul(bxw, *b))).collect();
            let mut z = std.map(f, &u).ok_or(GeomError::Internal("projection outside W"))?;
            let id = target
                .space
                .id_of_vector(f, &mut z)
                .ok_or(GeomError::Internal("image is the zero vector"))?;
            let img = target
                .qidx_of(id)
                .ok_or(GeomError::Internal("image off the quotient quadric"))?;
            images.push(img);
            line_qpoints.push(qpts);
        }
        let mut seen = images.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != images.len() || images.len() != target.num_points() {
            return Err(GeomError::Internal("quotient map is not a bijection"));
        }
        Ok(Quotient { quadric: target, base, lines: line_qpoints, images })
    }
}

/// The quotient of a quadric at a base point: the rank-(r-1) quadric, the
/// lines through the base (as sorted quadric index lists of the source), and
/// the image point of each line.
pub struct Quotient {
    pub quadric: Quadric,
    pub base: u32,
    pub lines: Vec<Vec<u32>>,
    pub images: Vec<u32>,
}

/// Sorted intersection of two ascending slices, keeping values >= from.
fn intersect_sorted(a: &[u32], b: &[u32], from: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            core::cmp::Ordering::Less => i += 1,
            core::cmp::Ordering::Greater => j += 1,
            core::cmp::Ordering::Equal => {
                if a[i] >= from {
                    out.push(a[i]);
                }
                i += 1;
                j += 1;
            }
        }
    }
    out
}

// -- Witt decomposition -------------------------------------------------------

/// Hyperbolic pairs plus the two-dimensional anisotropic remainder of a
/// nondegenerate quadratic form restricted to a subspace.
pub struct WittBasis {
    pub pairs: Vec<(Vec<Elt>, Vec<Elt>)>,
    pub aniso: (Vec<Elt>, Vec<Elt>),
}

/// Greedy hyperbolic-pair peeling. The subspace must carry a nondegenerate
/// form of elliptic type (even dimension, anisotropic plane left at the end);
/// NotElliptic is reported otherwise.
pub fn witt_decompose(
    f: &Field,
    form: &QuadForm,
    sub_basis: &[Vec<Elt>],
) -> Result<WittBasis, GeomError> {
    let mut basis: Vec<Vec<Elt>> = sub_basis.to_vec();
    let mut pairs = Vec::new();
    if basis.len() % 2 != 0 || basis.is_empty() {
        return Err(GeomError::Internal("odd-dimensional or empty subspace"));
    }
    while basis.len() > 2 {
        let e = find_in_span(f, &basis, |v| form.eval(f, v) == Elt(0))
            .ok_or(GeomError::Internal("no singular vector in dimension > 2"))?;
        let y = find_in_span(f, &basis, |v| form.polar(f, &e, v) != Elt(0))
            .ok_or(GeomError::Internal("degenerate restriction"))?;
        let scale = f.inv(form.polar(f, &e, &y)).expect("nonzero");
        let y: Vec<Elt> = y.iter().map(|&c| f.mul(scale, c)).collect();
        // make the partner singular: f(y + t e) = f(y) + t for B(e, y) = 1
        let t = f.neg(form.eval(f, &y));
        let y: Vec<Elt> = y.iter().zip(&e).map(|(a, b)| f.add(*a, f.mul(t, *b))).collect();
        debug_assert_eq!(form.eval(f, &y), Elt(0));
        debug_assert_eq!(form.polar(f, &e, &y), Elt(1));
        // restrict to the orthogonal complement of the pair within the span
        let rows = vec![
            basis.iter().map(|b| form.polar(f, b, &e)).collect::<Vec<Elt>>(),
            basis.iter().map(|b| form.polar(f, b, &y)).collect::<Vec<Elt>>(),
        ];
        let coeff_basis = linalg::nullspace(f, &rows, basis.len());
        if coeff_basis.len() != basis.len() - 2 {
            return Err(GeomError::Internal("complement has wrong dimension"));
        }
        let new_basis: Vec<Vec<Elt>> = coeff_basis
            .iter()
            .map(|c| {
                let mut v = vec![Elt(0); e.len()];
                for (ci, b) in c.iter().zip(&basis) {
                    for (vi, bi) in v.iter_mut().zip(b) {
                        *vi = f.add(*vi, f.mul(*ci, *bi));
                    }
                }
                v
            })
            .collect();
        pairs.push((e, y));
        basis = new_basis;
    }
    // the remaining plane must be anisotropic
    let (u1, u2) = (basis[0].clone(), basis[1].clone());
    for a in f.elements() {
        for b in f.elements() {
            if a == Elt(0) && b == Elt(0) {
                continue;
            }
            let v: Vec<Elt> =
                u1.iter().zip(&u2).map(|(x, y)| f.add(f.mul(a, *x), f.mul(b, *y))).collect();
            if form.eval(f, &v) == Elt(0) {
                return Err(GeomError::NotElliptic { expected: 0, found: 0 });
            }
        }
    }
    Ok(WittBasis { pairs, aniso: (u1, u2) })
}

/// First vector (in the deterministic coefficient enumeration) of the span
/// satisfying the predicate.
fn find_in_span(
    f: &Field,
    basis: &[Vec<Elt>],
    mut pred: impl FnMut(&[Elt]) -> bool,
) -> Option<Vec<Elt>> {
    let d = basis.len();
    let q = f.order() as u64;
    let total = (0..d).fold(1u64, |acc, _| acc * q);
    for n in 1..total {
        let mut v = vec![Elt(0); basis[0].len()];
        let mut m = n;
        for b in basis {
            let c = Elt((m % q) as u16);
            m /= q;
            if c != Elt(0) {
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi = f.add(*vi, f.mul(c, *bi));
                }
            }
        }
        if pred(&v) {
            return Some(v);
        }
    }
    None
}

/// A linear map from a 2s+2 dimensional subspace (carrying a nondegenerate
/// elliptic form) onto coordinates of the standard form, satisfying
/// f_std(map(x)) = scale * f(x).
pub struct Standardizer {
    witt_flat: Vec<Vec<Elt>>,
    lambda: Elt,
    a_mat: [[Elt; 2]; 2],
}

impl Standardizer {
    pub fn new(
        f: &Field,
        form: &QuadForm,
        sub_basis: &[Vec<Elt>],
        target_g: (Elt, Elt, Elt),
    ) -> Result<Standardizer, GeomError> {
        let witt = witt_decompose(f, form, sub_basis)?;
        let (u1, u2) = &witt.aniso;
        // residual binary form rho(x, y) = f(x u1 + y u2)
        let ra = form.eval(f, u1);
        let rb = form.polar(f, u1, u2);
        let rc = form.eval(f, u2);
        let (ga, gb, gc) = target_g;
        debug_assert_eq!(ga, Elt(1));
        let g_eval = |x: Elt, y: Elt| {
            f.add(
                f.add(f.mul(ga, f.mul(x, x)), f.mul(gb, f.mul(x, y))),
                f.mul(gc, f.mul(y, y)),
            )
        };
        // find A in GL(2, q) and lambda with g(A(x,y)) = lambda * rho(x,y);
        // any two anisotropic binary forms over a finite field are similar,
        // so the lexicographic scan always succeeds
        let ra_inv = f.inv(ra).expect("anisotropic value is nonzero");
        let mut found = None;
        'outer: for a11 in f.elements() {
            for a21 in f.elements() {
                let lam = f.mul(g_eval(a11, a21), ra_inv);
                if lam == Elt(0) {
                    continue;
                }
                for a12 in f.elements() {
                    for a22 in f.elements() {
                        let det = f.sub(f.mul(a11, a22), f.mul(a12, a21));
                        if det == Elt(0) {
                            continue;
                        }
                        if g_eval(a12, a22) != f.mul(lam, rc) {
                            continue;
                        }
                        // bilinear cross coefficient
                        let gx = f.sub(
                            f.sub(
                                g_eval(f.add(a11, a12), f.add(a21, a22)),
                                g_eval(a11, a21),
                            ),
                            g_eval(a12, a22),
                        );
                        if gx == f.mul(lam, rb) {
                            found = Some(([[a11, a12], [a21, a22]], lam));
                            break 'outer;
                        }
                    }
                }
            }
        }
        let (a_mat, lambda) =
            found.ok_or(GeomError::Internal("no similarity onto the standard tail"))?;
        let mut witt_flat = Vec::new();
        for (e, y) in &witt.pairs {
            witt_flat.push(e.clone());
            witt_flat.push(y.clone());
        }
        witt_flat.push(witt.aniso.0.clone());
        witt_flat.push(witt.aniso.1.clone());
        Ok(Standardizer { witt_flat, lambda, a_mat })
    }

    pub fn scale(&self) -> Elt {
        self.lambda
    }

    pub fn target_dim(&self) -> usize {
        self.witt_flat.len()
    }

    /// Standard-form coordinates of a vector of the subspace; None when the
    /// vector lies outside it.
    pub fn map(&self, f: &Field, x: &[Elt]) -> Option<Vec<Elt>> {
        let c = linalg::coords_in_basis(f, &self.witt_flat, x)?;
        let d = c.len();
        let mut z = vec![Elt(0); d];
        for i in 0..(d - 2) / 2 {
            z[2 * i] = f.mul(self.lambda, c[2 * i]);
            z[2 * i + 1] = c[2 * i + 1];
        }
        let (g1, g2) = (c[d - 2], c[d - 1]);
        z[d - 2] = f.add(f.mul(self.a_mat[0][0], g1), f.mul(self.a_mat[0][1], g2));
        z[d - 1] = f.add(f.mul(self.a_mat[1][0], g1), f.mul(self.a_mat[1][1], g2));
        Some(z)
    }
}
