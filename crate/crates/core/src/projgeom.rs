//! Points and subspaces of PG(n, q): canonical representatives, spans,
//! incidence and enumeration.
//!
//! A point is a nonzero coordinate vector normalized so that its first
//! nonzero coordinate is 1. Point ids are ranks in the global lexicographic
//! enumeration of normalized vectors (by element index, coordinate 0 most
//! significant); every deterministic guarantee downstream rests on this
//! order.

use crate::gf::{Elt, Field};
use crate::linalg;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GeomError {
    ResourceLimit { needed: u128, cap: u128 },
    PointNotOnQuadric { id: u32 },
    RankTooSmall { r: usize },
    NotALine,
    NotElliptic { expected: u128, found: u128 },
    Internal(&'static str),
}

impl fmt::Display for GeomError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeomError::ResourceLimit { needed, cap } => {
                write!(f, "resource limit exceeded: needed {needed}, cap {cap}")
            }
            GeomError::PointNotOnQuadric { id } => write!(f, "point {id} is not on the quadric"),
            GeomError::RankTooSmall { r } => write!(f, "rank {r} is too small for this operation"),
            GeomError::NotALine => write!(f, "input is not a totally singular line"),
            GeomError::NotElliptic { expected, found } => write!(
                f,
                "form is not elliptic of the expected rank: expected {expected} points, found {found}"
            ),
            GeomError::Internal(msg) => write!(f, "internal error: {msg}"),
        }
    }
}

impl core::error::Error for GeomError {}

/// Number of points of PG(n, q).
pub fn proj_point_count(q: u64, n: usize) -> u128 {
    let mut pow = 1u128;
    let mut sum = 0u128;
    for _ in 0..=n {
        sum += pow;
        pow *= q as u128;
    }
    sum
}

/// Scales a vector so its first nonzero coordinate is 1. Returns false for
/// the zero vector.
pub fn normalize(f: &Field, v: &mut [Elt]) -> bool {
    let Some(pos) = v.iter().position(|&x| x != Elt(0)) else {
        return false;
    };
    if v[pos] != Elt(1) {
        let inv = f.inv(v[pos]).expect("leading coordinate is nonzero");
        for x in v.iter_mut() {
            *x = f.mul(*x, inv);
        }
    }
    true
}

/// PG(n, q) with its full point enumeration. Immutable after construction.
pub struct ProjSpace {
    n: usize,
    pts: Vec<Vec<Elt>>,
}

impl ProjSpace {
    /// Enumerates all points of PG(n, q) in canonical order.
    pub fn new(f: &Field, n: usize, cap: u128) -> Result<ProjSpace, GeomError> {
        debug_assert!(n >= 1);
        let needed = proj_point_count(f.order() as u64, n);
        if needed > cap {
            return Err(GeomError::ResourceLimit { needed, cap });
        }
        let q = f.order();
        let mut pts = Vec::with_capacity(needed as usize);
        // lexicographically smallest points have the most leading zeros
        for lead in (0..=n).rev() {
            let free = n - lead;
            let mut idx = vec![0u16; free];
            loop {
                let mut v = vec![Elt(0); n + 1];
                v[lead] = Elt(1);
                for (i, &c) in idx.iter().enumerate() {
                    v[lead + 1 + i] = Elt(c);
                }
                pts.push(v);
                // odometer, last coordinate fastest
                let mut pos = free;
                loop {
                    if pos == 0 {
                        break;
                    }
                    pos -= 1;
                    idx[pos] += 1;
                    if idx[pos] < q {
                        break;
                    }
                    idx[pos] = 0;
                }
                if idx.iter().all(|&c| c == 0) {
                    break;
                }
            }
        }
        debug_assert_eq!(pts.len() as u128, needed);
        debug_assert!(pts.windows(2).all(|w| w[0] < w[1]));
        Ok(ProjSpace { n, pts })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn point_count(&self) -> usize {
        self.pts.len()
    }

    pub fn coords(&self, id: u32) -> &[Elt] {
        &self.pts[id as usize]
    }

    pub fn ids(&self) -> impl Iterator<Item = u32> {
        0..self.pts.len() as u32
    }

    /// Id of a normalized coordinate vector.
    pub fn id_of(&self, coords: &[Elt]) -> Option<u32> {
        self.pts.binary_search_by(|p| p.as_slice().cmp(coords)).ok().map(|i| i as u32)
    }

    /// Normalizes a vector in place and returns its id.
    pub fn id_of_vector(&self, f: &Field, v: &mut [Elt]) -> Option<u32> {
        if !normalize(f, v) {
            return None;
        }
        self.id_of(v)
    }

    /// Smallest subspace containing all the given vectors, with canonical
    /// (reduced echelon) basis and sorted point ids.
    pub fn span(&self, f: &Field, vectors: &[Vec<Elt>]) -> Subspace {
        debug_assert!(!vectors.is_empty());
        let basis = linalg::rref(f, vectors.to_vec());
        let point_ids = self.points_of_basis(f, &basis);
        Subspace { basis, point_ids }
    }

    /// Sorted ids of the points spanned by an independent basis.
    pub fn points_of_basis(&self, f: &Field, basis: &[Vec<Elt>]) -> Vec<u32> {
        let d = basis.len();
        let q = f.order();
        let mut ids = Vec::new();
        // one representative per projective point of the coefficient space
        for lead in 0..d {
            let free = d - lead - 1;
            let mut idx = vec![0u16; free];
            loop {
                let mut v = vec![Elt(0); self.n + 1];
                for c in 0..=self.n {
                    let mut acc = basis[lead][c];
                    for (i, &co) in idx.iter().enumerate() {
                        acc = f.add(acc, f.mul(Elt(co), basis[lead + 1 + i][c]));
                    }
                    v[c] = acc;
                }
                let id = self.id_of_vector(f, &mut v).expect("span point is in the space");
                ids.push(id);
                let mut pos = free;
                loop {
                    if pos == 0 {
                        break;
                    }
                    pos -= 1;
                    idx[pos] += 1;
                    if idx[pos] < q {
                        break;
                    }
                    idx[pos] = 0;
                }
                if idx.iter().all(|&c| c == 0) {
                    break;
                }
            }
        }
        ids.sort_unstable();
        ids.dedup();
        ids
    }

    /// Canonical basis for the solution space of the homogeneous system
    /// given by `rows`, as a subspace.
    pub(crate) fn subspace_from_nullspace(&self, f: &Field, rows: &[Vec<Elt>]) -> Subspace {
        let basis = linalg::nullspace(f, rows, self.n + 1);
        let point_ids = self.points_of_basis(f, &basis);
        Subspace { basis, point_ids }
    }
}

/// A projective subspace: reduced-echelon basis plus its full sorted point
/// id list. Projective dimension is `basis.len() - 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    pub basis: Vec<Vec<Elt>>,
    pub point_ids: Vec<u32>,
}

impl Subspace {
    pub fn pdim(&self) -> usize {
        self.basis.len() - 1
    }

    pub fn contains_id(&self, id: u32) -> bool {
        self.point_ids.binary_search(&id).is_ok()
    }
}
