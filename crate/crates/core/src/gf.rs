//! Arithmetic in GF(q) for prime powers q, the substrate for all coordinate
//! computation.
//!
//! Elements are canonical indices in `[0, q)`: index 0 is zero and the index
//! of a nonzero element is the base-p value of its polynomial residue, so
//! index 1 is the multiplicative identity and, for prime q, index arithmetic
//! is plain arithmetic mod p. Multiplication and inversion go through
//! discrete-log tables over a fixed primitive element; addition through a
//! precomputed table. Fields are immutable after construction.

use crate::admissibility::prime_power;
use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

/// Largest supported field order. Tables are O(q) / O(q^2); every desk-scale
/// target has q <= 9.
pub const MAX_ORDER: u64 = 1024;

/// A field element, encoded as its canonical index in `[0, q)`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Elt(pub u16);

impl fmt::Debug for Elt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GfError {
    NotAPrimePower { q: u64 },
    DivisionByZero,
    ResourceLimit { q: u64, max: u64 },
    /// The two fields passed to a subfield map are not a valid extension pair.
    NotAnExtension { base_q: u64, ext_q: u64 },
}

impl fmt::Display for GfError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GfError::NotAPrimePower { q } => write!(f, "{q} is not a prime power"),
            GfError::DivisionByZero => write!(f, "division by zero"),
            GfError::ResourceLimit { q, max } => {
                write!(f, "field order {q} exceeds the supported maximum {max}")
            }
            GfError::NotAnExtension { base_q, ext_q } => {
                write!(f, "GF({ext_q}) is not an extension of GF({base_q})")
            }
        }
    }
}

impl core::error::Error for GfError {}

// -- polynomial helpers over GF(p), coefficients low-degree first ------------

fn ptrim(v: &mut Vec<u16>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn pmul(a: &[u16], b: &[u16], p: u16) -> Vec<u16> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u32 * y as u32) % p as u32;
        }
    }
    let mut out: Vec<u16> = out.into_iter().map(|c| c as u16).collect();
    ptrim(&mut out);
    out
}

/// Remainder of `a` modulo the monic polynomial `m`.
fn prem(a: &[u16], m: &[u16], p: u16) -> Vec<u16> {
    let mut rem: Vec<u16> = a.to_vec();
    ptrim(&mut rem);
    let dm = m.len() - 1;
    while rem.len() > dm {
        let lead = rem[rem.len() - 1];
        let shift = rem.len() - 1 - dm;
        for (i, &c) in m.iter().enumerate() {
            let idx = i + shift;
            let sub = (lead as u32 * c as u32) % p as u32;
            rem[idx] = ((rem[idx] as u32 + p as u32 - sub) % p as u32) as u16;
        }
        ptrim(&mut rem);
    }
    rem
}

fn poly_is_irreducible(m: &[u16], p: u16) -> bool {
    let k = m.len() - 1;
    // a monic polynomial is irreducible iff no monic factor of degree <= k/2
    for d in 1..=k / 2 {
        let count = (p as u64).pow(d as u32);
        for n in 0..count {
            let mut g = vec![0u16; d + 1];
            let mut v = n;
            for c in g.iter_mut().take(d) {
                *c = (v % p as u64) as u16;
                v /= p as u64;
            }
            g[d] = 1;
            if prem(m, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// Lexicographically smallest monic irreducible polynomial of degree k over
/// GF(p), coefficients compared low-degree-first.
fn smallest_irreducible(p: u16, k: u32) -> Vec<u16> {
    let count = (p as u64).pow(k);
    for n in 0..count {
        let mut m = vec![0u16; k as usize + 1];
        // low-degree-first lexicographic order: c0 is the most significant digit
        let mut v = n;
        for i in (0..k as usize).rev() {
            m[i] = (v % p as u64) as u16;
            v /= p as u64;
        }
        m[k as usize] = 1;
        if poly_is_irreducible(&m, p) {
            return m;
        }
    }
    unreachable!("irreducible polynomials exist in every degree");
}

// -----------------------------------------------------------------------------

/// GF(q) with full arithmetic tables. Safe for unrestricted concurrent reads.
#[derive(Clone)]
pub struct Field {
    p: u16,
    k: u32,
    q: u16,
    modulus: Vec<u16>,
    exp: Vec<u16>,
    log: Vec<u16>,
    add_t: Vec<u16>,
    neg_t: Vec<u16>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.q)
    }
}

impl Field {
    /// Builds GF(q). The modulus is the lexicographically smallest monic
    /// irreducible polynomial of degree k over GF(p), where q = p^k.
    pub fn new(q: u64) -> Result<Field, GfError> {
        let (p, k) = prime_power(q).ok_or(GfError::NotAPrimePower { q })?;
        if q > MAX_ORDER {
            return Err(GfError::ResourceLimit { q, max: MAX_ORDER });
        }
        let p = p as u16;
        let q16 = q as u16;
        let modulus = smallest_irreducible(p, k);

        let digits = |idx: u16| -> Vec<u16> {
            let mut v = idx;
            let mut d = vec![0u16; k as usize];
            for c in d.iter_mut() {
                *c = v % p;
                v /= p;
            }
            d
        };
        let undigits = |d: &[u16]| -> u16 {
            let mut idx = 0u32;
            for &c in d.iter().rev() {
                idx = idx * p as u32 + c as u32;
            }
            idx as u16
        };
        let raw_mul = |a: u16, b: u16| -> u16 {
            let pa = {
                let mut v = digits(a);
                ptrim(&mut v);
                v
            };
            let pb = {
                let mut v = digits(b);
                ptrim(&mut v);
                v
            };
            let mut prod = prem(&pmul(&pa, &pb, p), &modulus, p);
            prod.resize(k as usize, 0);
            undigits(&prod)
        };

        // discrete-log tables over the smallest primitive element
        let mut exp = Vec::new();
        for cand in 1..q16 {
            exp.clear();
            let mut cur = 1u16;
            loop {
                exp.push(cur);
                cur = raw_mul(cur, cand);
                if cur == 1 {
                    break;
                }
            }
            if exp.len() == (q16 - 1) as usize {
                break;
            }
        }
        debug_assert_eq!(exp.len(), (q16 - 1) as usize);
        let mut log = vec![0u16; q16 as usize];
        for (i, &v) in exp.iter().enumerate() {
            log[v as usize] = i as u16;
        }

        let mut add_t = vec![0u16; q16 as usize * q16 as usize];
        let mut neg_t = vec![0u16; q16 as usize];
        for a in 0..q16 {
            let da = digits(a);
            let mut dn = vec![0u16; k as usize];
            for (i, &c) in da.iter().enumerate() {
                dn[i] = (p - c) % p;
            }
            neg_t[a as usize] = undigits(&dn);
            for b in 0..q16 {
                let db = digits(b);
                let mut ds = vec![0u16; k as usize];
                for i in 0..k as usize {
                    ds[i] = (da[i] + db[i]) % p;
                }
                add_t[a as usize * q16 as usize + b as usize] = undigits(&ds);
            }
        }

        Ok(Field { p, k, q: q16, modulus, exp, log, add_t, neg_t })
    }

    pub fn p(&self) -> u16 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn order(&self) -> u16 {
        self.q
    }

    /// Modulus coefficients, low-degree first, length k+1, monic.
    pub fn modulus(&self) -> &[u16] {
        &self.modulus
    }

    pub fn zero(&self) -> Elt {
        Elt(0)
    }

    pub fn one(&self) -> Elt {
        Elt(1)
    }

    pub fn elt(&self, idx: u16) -> Elt {
        debug_assert!(idx < self.q);
        Elt(idx)
    }

    pub fn elements(&self) -> impl Iterator<Item = Elt> {
        (0..self.q).map(Elt)
    }

    #[inline]
    pub fn add(&self, a: Elt, b: Elt) -> Elt {
        Elt(self.add_t[a.0 as usize * self.q as usize + b.0 as usize])
    }

    #[inline]
    pub fn neg(&self, a: Elt) -> Elt {
        Elt(self.neg_t[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: Elt, b: Elt) -> Elt {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elt, b: Elt) -> Elt {
        if a.0 == 0 || b.0 == 0 {
            return Elt(0);
        }
        let n = self.q as usize - 1;
        let i = self.log[a.0 as usize] as usize + self.log[b.0 as usize] as usize;
        Elt(self.exp[i % n])
    }

    pub fn inv(&self, a: Elt) -> Result<Elt, GfError> {
        if a.0 == 0 {
            return Err(GfError::DivisionByZero);
        }
        let n = self.q as usize - 1;
        Ok(Elt(self.exp[(n - self.log[a.0 as usize] as usize) % n]))
    }

    pub fn div(&self, a: Elt, b: Elt) -> Result<Elt, GfError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Elt, e: u64) -> Elt {
        if a.0 == 0 {
            return if e == 0 { Elt(1) } else { Elt(0) };
        }
        let n = (self.q - 1) as u64;
        let i = (self.log[a.0 as usize] as u64 * (e % n)) % n;
        Elt(self.exp[i as usize])
    }

    pub(crate) fn exp_table(&self) -> &[u16] {
        &self.exp
    }

    pub(crate) fn log_of(&self, a: Elt) -> u16 {
        self.log[a.0 as usize]
    }

    /// The lexicographically smallest (1, b, c) such that x^2 + bxy + cy^2
    /// has no nontrivial zero over the field; equivalently t^2 + bt + c has
    /// no root.
    pub fn irreducible_quadratic(&self) -> (Elt, Elt, Elt) {
        for b in 0..self.q {
            for c in 0..self.q {
                let (b, c) = (Elt(b), Elt(c));
                let has_root = self
                    .elements()
                    .any(|t| self.add(self.add(self.mul(t, t), self.mul(b, t)), c) == Elt(0));
                if !has_root {
                    return (Elt(1), b, c);
                }
            }
        }
        unreachable!("an anisotropic binary quadratic form exists over every finite field");
    }
}

// -----------------------------------------------------------------------------

/// Identification of GF(q) with the unique subfield of order q inside
/// GF(q^e), plus coordinates of GF(q^e) over that subfield with respect to
/// the power basis `1, t, ..., t^{e-1}` of the extension generator.
///
/// The two fields are built independently with their own moduli; the
/// identification maps the base generator to the smallest root of the base
/// modulus inside the extension.
pub struct SubfieldMap {
    e: u32,
    base_q: u16,
    embed_t: Vec<Elt>,
    lift_t: BTreeMap<u16, u16>,
    /// inverse of the GF(p)-matrix whose columns are digits(tau^i * rho^j)
    dec_inv: Vec<Vec<u16>>,
    p: u16,
    ext_k: u32,
}

impl SubfieldMap {
    pub fn new(base: &Field, ext: &Field) -> Result<SubfieldMap, GfError> {
        let mismatch = || GfError::NotAnExtension {
            base_q: base.order() as u64,
            ext_q: ext.order() as u64,
        };
        if ext.p() != base.p() || ext.degree() % base.degree() != 0 {
            return Err(mismatch());
        }
        let e = ext.degree() / base.degree();
        if e < 2 {
            return Err(mismatch());
        }
        let p = base.p();
        let k = base.degree();

        // smallest root of the base modulus inside the extension
        let rho = ext
            .elements()
            .find(|&x| {
                let mut acc = Elt(0);
                for &c in base.modulus().iter().rev() {
                    acc = ext.add(ext.mul(acc, x), Elt(c % p));
                }
                acc == Elt(0)
            })
            .ok_or_else(mismatch)?;

        // the image of a base element with base-p digits (c_0..c_{k-1}) is
        // sum c_j rho^j; this is a field embedding onto the order-q subfield
        let mut embed_t = Vec::with_capacity(base.order() as usize);
        let mut lift_t = BTreeMap::new();
        for a in 0..base.order() {
            let mut img = Elt(0);
            let mut v = a;
            let mut rp = Elt(1);
            for _ in 0..k {
                let c = v % p;
                v /= p;
                img = ext.add(img, ext.mul(Elt(c), rp));
                rp = ext.mul(rp, rho);
            }
            lift_t.insert(img.0, a);
            embed_t.push(img);
        }
        if lift_t.len() != base.order() as usize {
            return Err(mismatch());
        }

        // decomposition matrix: x = sum_{i,j} d_{ij} tau^i rho^j over GF(p)
        let ke = ext.degree() as usize;
        let tau = Elt(p); // the extension generator itself
        let mut cols: Vec<Vec<u16>> = Vec::with_capacity(ke);
        let mut tp = Elt(1);
        for _ in 0..e {
            let mut rp = Elt(1);
            for _ in 0..k {
                let v = ext.mul(tp, rp);
                cols.push(digits_of(v.0, p, ke));
                rp = ext.mul(rp, rho);
            }
            tp = ext.mul(tp, tau);
        }
        let dec_inv = invert_mod_p(&cols, p).ok_or_else(mismatch)?;

        Ok(SubfieldMap {
            e,
            base_q: base.order(),
            embed_t,
            lift_t,
            dec_inv,
            p,
            ext_k: ext.degree(),
        })
    }

    pub fn extension_degree(&self) -> u32 {
        self.e
    }

    /// Image of a base-field element inside the extension.
    pub fn embed(&self, a: Elt) -> Elt {
        self.embed_t[a.0 as usize]
    }

    /// Preimage of an extension element, if it lies in the subfield.
    pub fn lift(&self, a: Elt) -> Option<Elt> {
        self.lift_t.get(&a.0).map(|&v| Elt(v))
    }

    /// Coordinates of an extension element over GF(q) with respect to the
    /// power basis 1, t, ..., t^{e-1}.
    pub fn components(&self, x: Elt) -> Vec<Elt> {
        let ke = self.ext_k as usize;
        let v = digits_of(x.0, self.p, ke);
        let k = ke / self.e as usize;
        let mut out = Vec::with_capacity(self.e as usize);
        for i in 0..self.e as usize {
            let mut idx = 0u32;
            for j in (0..k).rev() {
                let col = i * k + j;
                let mut d = 0u32;
                for (row, digit) in v.iter().enumerate() {
                    d += self.dec_inv[col][row] as u32 * *digit as u32;
                }
                idx = idx * self.p as u32 + d % self.p as u32;
            }
            out.push(Elt(idx as u16));
        }
        out
    }

    /// Relative trace into GF(q): the sum of the q-power Frobenius images.
    pub fn trace(&self, ext: &Field, x: Elt) -> Elt {
        let mut acc = Elt(0);
        let mut pow = 1u64;
        for _ in 0..self.e {
            acc = ext.add(acc, ext.pow(x, pow));
            pow *= self.base_q as u64;
        }
        self.lift(acc).expect("trace lands in the subfield")
    }
}

fn digits_of(idx: u16, p: u16, len: usize) -> Vec<u16> {
    let mut v = idx;
    let mut d = vec![0u16; len];
    for c in d.iter_mut() {
        *c = v % p;
        v /= p;
    }
    d
}

/// Inverse of a square matrix over GF(p), columns given as digit vectors.
fn invert_mod_p(cols: &[Vec<u16>], p: u16) -> Option<Vec<Vec<u16>>> {
    let n = cols.len();
    let pinv = |a: u16| -> u16 {
        // p is prime; Fermat
        let mut acc = 1u32;
        let mut base = a as u32 % p as u32;
        let mut e = p as u32 - 2;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p as u32;
            }
            base = base * base % p as u32;
            e >>= 1;
        }
        acc as u16
    };
    // rows of the working matrix: m[row][col] = cols[col][row], augmented with I
    let mut m = vec![vec![0u16; 2 * n]; n];
    for (c, col) in cols.iter().enumerate() {
        for (r, &v) in col.iter().enumerate() {
            m[r][c] = v % p;
        }
    }
    for (r, row) in m.iter_mut().enumerate() {
        row[n + r] = 1;
    }
    for col in 0..n {
        let piv = (col..n).find(|&r| m[r][col] != 0)?;
        m.swap(col, piv);
        let inv = pinv(m[col][col]);
        for v in m[col].iter_mut() {
            *v = (*v as u32 * inv as u32 % p as u32) as u16;
        }
        for r in 0..n {
            if r != col && m[r][col] != 0 {
                let f = m[r][col] as u32;
                for c in 0..2 * n {
                    let sub = f * m[col][c] as u32 % p as u32;
                    m[r][c] = ((m[r][c] as u32 + p as u32 - sub) % p as u32) as u16;
                }
            }
        }
    }
    // row-major inverse: inv[r][c] = m[r][n+c]
    let mut inv = vec![vec![0u16; n]; n];
    for (r, row) in m.iter().enumerate() {
        for c in 0..n {
            inv[r][c] = row[n + c];
        }
    }
    Some(inv)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field() {
        let f = Field::new(3).unwrap();
        assert_eq!(f.order(), 3);
        assert_eq!(f.modulus(), &[0, 1]); // GF(3) = GF(3)[t]/(t)
        assert_eq!(f.add(Elt(1), Elt(2)), Elt(0));
        assert_eq!(f.inv(Elt(2)).unwrap(), Elt(2)); // 2*2 = 4 = 1 mod 3
    }

    #[test]
    fn non_prime_power_rejected() {
        assert_eq!(Field::new(6).unwrap_err(), GfError::NotAPrimePower { q: 6 });
        assert!(matches!(Field::new(2048).unwrap_err(), GfError::ResourceLimit { .. }));
    }

    #[test]
    fn gf4_modulus_and_mul() {
        let f = Field::new(4).unwrap();
        // t^2 + t + 1 is the lex-smallest irreducible quadratic over GF(2)
        assert_eq!(f.modulus(), &[1, 1, 1]);
        // t * t = t + 1, i.e. index 2 * index 2 = index 3
        assert_eq!(f.mul(Elt(2), Elt(2)), Elt(3));
        assert_eq!(f.mul(Elt(1), Elt(3)), Elt(3));
    }

    #[test]
    fn exp_log_roundtrip() {
        for q in [2u64, 3, 4, 5, 7, 8, 9] {
            let f = Field::new(q).unwrap();
            for a in 1..f.order() {
                let l = f.log_of(Elt(a));
                assert_eq!(f.exp_table()[l as usize], a);
            }
            let mut seen: Vec<u16> = f.exp_table().to_vec();
            seen.sort_unstable();
            seen.dedup();
            assert_eq!(seen.len(), (f.order() - 1) as usize);
        }
    }

    #[test]
    fn field_axioms_exhaustive_small() {
        for q in [2u64, 3, 4, 5, 7, 8, 9] {
            let f = Field::new(q).unwrap();
            for a in f.elements() {
                assert_eq!(f.add(a, f.neg(a)), Elt(0));
                assert_eq!(f.mul(Elt(1), a), a);
                if a != Elt(0) {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), Elt(1));
                }
                for b in f.elements() {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for c in f.elements() {
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(
                            f.mul(a, f.add(b, c)),
                            f.add(f.mul(a, b), f.mul(a, c))
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn inversion_of_zero_fails() {
        let f = Field::new(5).unwrap();
        assert_eq!(f.inv(Elt(0)).unwrap_err(), GfError::DivisionByZero);
    }

    #[test]
    fn irreducible_quadratic_examples() {
        let f2 = Field::new(2).unwrap();
        assert_eq!(f2.irreducible_quadratic(), (Elt(1), Elt(1), Elt(1)));
        let f3 = Field::new(3).unwrap();
        assert_eq!(f3.irreducible_quadratic(), (Elt(1), Elt(0), Elt(1)));
        let f4 = Field::new(4).unwrap();
        assert_eq!(f4.irreducible_quadratic(), (Elt(1), Elt(1), Elt(2)));
    }

    #[test]
    fn irreducible_quadratic_has_no_nontrivial_zero() {
        for q in [2u64, 3, 4, 5, 7, 8, 9] {
            let f = Field::new(q).unwrap();
            let (a, b, c) = f.irreducible_quadratic();
            for x in f.elements() {
                for y in f.elements() {
                    if x == Elt(0) && y == Elt(0) {
                        continue;
                    }
                    let v = f.add(
                        f.add(f.mul(a, f.mul(x, x)), f.mul(b, f.mul(x, y))),
                        f.mul(c, f.mul(y, y)),
                    );
                    assert_ne!(v, Elt(0), "GF({q}): zero at ({x:?},{y:?})");
                }
            }
        }
    }

    #[test]
    fn subfield_map_gf2_in_gf4() {
        let base = Field::new(2).unwrap();
        let ext = Field::new(4).unwrap();
        let m = SubfieldMap::new(&base, &ext).unwrap();
        assert_eq!(m.embed(Elt(0)), Elt(0));
        assert_eq!(m.embed(Elt(1)), Elt(1));
        // components reassemble: x = c0 + c1 * t
        for x in ext.elements() {
            let c = m.components(x);
            let mut acc = Elt(0);
            let mut tp = Elt(1);
            for ci in &c {
                acc = ext.add(acc, ext.mul(m.embed(*ci), tp));
                tp = ext.mul(tp, Elt(ext.p()));
            }
            assert_eq!(acc, x);
        }
    }

    #[test]
    fn subfield_map_gf3_in_gf9() {
        let base = Field::new(3).unwrap();
        let ext = Field::new(9).unwrap();
        let m = SubfieldMap::new(&base, &ext).unwrap();
        // the embedding is a field homomorphism
        for a in base.elements() {
            for b in base.elements() {
                assert_eq!(m.embed(base.add(a, b)), ext.add(m.embed(a), m.embed(b)));
                assert_eq!(m.embed(base.mul(a, b)), ext.mul(m.embed(a), m.embed(b)));
            }
        }
        // trace is additive, GF(3)-linear, and not identically zero
        let mut nonzero = false;
        for x in ext.elements() {
            for y in ext.elements() {
                assert_eq!(
                    m.trace(&ext, ext.add(x, y)),
                    base.add(m.trace(&ext, x), m.trace(&ext, y))
                );
            }
            if m.trace(&ext, x) != Elt(0) {
                nonzero = true;
            }
        }
        assert!(nonzero);
    }

    #[test]
    fn components_reassemble_gf2_in_gf8() {
        let base = Field::new(2).unwrap();
        let ext = Field::new(8).unwrap();
        let m = SubfieldMap::new(&base, &ext).unwrap();
        assert_eq!(m.extension_degree(), 3);
        for x in ext.elements() {
            let c = m.components(x);
            assert_eq!(c.len(), 3);
            let mut acc = Elt(0);
            let mut tp = Elt(1);
            for ci in &c {
                acc = ext.add(acc, ext.mul(m.embed(*ci), tp));
                tp = ext.mul(tp, Elt(2));
            }
            assert_eq!(acc, x);
        }
    }
}
