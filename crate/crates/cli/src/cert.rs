//! The certificate file format: a self-contained serialized witness of a
//! claimed structure (m-ovoid, weighted ovoid, or 1-system), re-verified
//! from scratch on load. Loading never trusts the claim.
//!
//! Layout (text):
//!   q=<q>;poly=<c0,c1,...,ck>;r=<r>;g=<a>,<b>,<c>
//!   claim=m-ovoid;m=<int>        (or claim=weighted;m=<int>, claim=one-system)
//!   <coordinate row per point: comma-separated element indices>
//! Weighted rows carry a `;w=<int>` suffix. 1-system certificates list
//! q^4+1 line blocks of q+1 consecutive rows each.

use movoid_core::constructions;
use movoid_core::gf::{Elt, Field};
use movoid_core::ovoid::{self, PointSet};
use movoid_core::quadric::{Caps, Quadric};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CertError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("verification failed: {0}")]
    Verification(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Claim {
    MOvoid { m: i64 },
    Weighted { m: i64 },
    OneSystem,
}

impl Claim {
    pub fn label(&self) -> &'static str {
        match self {
            Claim::MOvoid { .. } => "m-ovoid",
            Claim::Weighted { .. } => "weighted",
            Claim::OneSystem => "one-system",
        }
    }
}

/// A parsed (not yet verified) certificate.
#[derive(Debug, Clone)]
pub struct Certificate {
    pub q: u64,
    pub poly: Vec<u16>,
    pub r: usize,
    pub g: (u16, u16, u16),
    pub claim: Claim,
    /// coordinate rows with optional weights
    pub rows: Vec<(Vec<u16>, Option<i64>)>,
}

/// A certificate whose claim has been re-established from scratch.
pub struct Verified {
    pub quadric: Quadric,
    pub claim: Claim,
    pub kind: VerifiedKind,
    pub warnings: Vec<String>,
}

pub enum VerifiedKind {
    MOvoid { set: PointSet, m: i64 },
    Weighted { weights: Vec<i64>, m: i64 },
    OneSystem { lines: Vec<Vec<u32>> },
}

// -- serialization ------------------------------------------------------------

fn header_line(q: &Quadric) -> String {
    let poly: Vec<String> = q.field().modulus().iter().map(|c| c.to_string()).collect();
    let (a, b, c) = q.tail();
    format!(
        "q={};poly={};r={};g={},{},{}",
        q.q(),
        poly.join(","),
        q.rank(),
        a.0,
        b.0,
        c.0
    )
}

fn coord_row(q: &Quadric, qi: u32) -> String {
    let coords: Vec<String> = q.point_coords(qi).iter().map(|e| e.0.to_string()).collect();
    coords.join(",")
}

/// Certificate text for an m-ovoid (points in canonical order).
pub fn ovoid_certificate(q: &Quadric, s: &PointSet, m: i64) -> String {
    let mut out = String::new();
    out.push_str(&header_line(q));
    out.push('\n');
    out.push_str(&format!("claim=m-ovoid;m={m}\n"));
    for qi in s.members() {
        out.push_str(&coord_row(q, qi));
        out.push('\n');
    }
    out
}

/// Certificate text for a weighted ovoid; zero-weight points are omitted.
pub fn weighted_certificate(q: &Quadric, w: &[i64], m: i64) -> String {
    let mut out = String::new();
    out.push_str(&header_line(q));
    out.push('\n');
    out.push_str(&format!("claim=weighted;m={m}\n"));
    for (qi, &wi) in w.iter().enumerate() {
        if wi != 0 {
            out.push_str(&coord_row(q, qi as u32));
            out.push_str(&format!(";w={wi}\n"));
        }
    }
    out
}

/// Certificate text for a 1-system: one block of q+1 rows per line.
pub fn one_system_certificate(q: &Quadric, lines: &[Vec<u32>]) -> String {
    let mut sorted: Vec<&Vec<u32>> = lines.iter().collect();
    sorted.sort();
    let mut out = String::new();
    out.push_str(&header_line(q));
    out.push('\n');
    out.push_str("claim=one-system\n");
    for line in sorted {
        for &qi in line {
            out.push_str(&coord_row(q, qi));
            out.push('\n');
        }
    }
    out
}

// -- parsing ------------------------------------------------------------------

fn parse_kv<'a>(part: &'a str, key: &str) -> Result<&'a str, CertError> {
    part.strip_prefix(key)
        .and_then(|s| s.strip_prefix('='))
        .ok_or_else(|| CertError::Parse(format!("expected `{key}=...`, found `{part}`")))
}

fn parse_ints<T: core::str::FromStr>(s: &str) -> Result<Vec<T>, CertError> {
    s.split(',')
        .map(|x| x.trim().parse::<T>().map_err(|_| CertError::Parse(format!("bad integer `{x}`"))))
        .collect()
}

pub fn parse_certificate(text: &str) -> Result<Certificate, CertError> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or_else(|| CertError::Parse("empty certificate".into()))?;
    let mut parts = header.split(';');
    let q: u64 = parse_kv(parts.next().unwrap_or(""), "q")?
        .parse()
        .map_err(|_| CertError::Parse("bad q".into()))?;
    let poly: Vec<u16> =
        parse_ints(parse_kv(parts.next().ok_or_else(|| CertError::Parse("missing poly".into()))?, "poly")?)?;
    let r: usize = parse_kv(parts.next().ok_or_else(|| CertError::Parse("missing r".into()))?, "r")?
        .parse()
        .map_err(|_| CertError::Parse("bad r".into()))?;
    let g_vals: Vec<u16> =
        parse_ints(parse_kv(parts.next().ok_or_else(|| CertError::Parse("missing g".into()))?, "g")?)?;
    if g_vals.len() != 3 {
        return Err(CertError::Parse("g needs three coefficients".into()));
    }

    let claim_line = lines.next().ok_or_else(|| CertError::Parse("missing claim line".into()))?;
    let mut cparts = claim_line.split(';');
    let kind = parse_kv(cparts.next().unwrap_or(""), "claim")?;
    let claim = match kind {
        "m-ovoid" | "weighted" => {
            let m: i64 = parse_kv(
                cparts.next().ok_or_else(|| CertError::Parse("missing m".into()))?,
                "m",
            )?
            .parse()
            .map_err(|_| CertError::Parse("bad m".into()))?;
            if kind == "m-ovoid" {
                Claim::MOvoid { m }
            } else {
                Claim::Weighted { m }
            }
        }
        "one-system" => Claim::OneSystem,
        other => return Err(CertError::Parse(format!("unknown claim `{other}`"))),
    };

    let mut rows = Vec::new();
    for line in lines {
        let (coords_part, weight) = match line.split_once(";w=") {
            Some((c, w)) => (
                c,
                Some(w.trim().parse::<i64>().map_err(|_| CertError::Parse(format!("bad weight `{w}`")))?),
            ),
            None => (line, None),
        };
        if weight.is_some() != matches!(claim, Claim::Weighted { .. }) {
            return Err(CertError::Parse("weight suffix does not match the claim".into()));
        }
        rows.push((parse_ints::<u16>(coords_part)?, weight));
    }
    Ok(Certificate { q, poly, r, g: (g_vals[0], g_vals[1], g_vals[2]), claim, rows })
}

// -- verification -------------------------------------------------------------

/// Rebuilds the geometry from the header, re-normalizes all coordinate
/// rows, rejects duplicates, and re-runs the claimed verification from
/// scratch.
pub fn verify_certificate(cert: &Certificate, caps: &Caps) -> Result<Verified, CertError> {
    let field = Field::new(cert.q).map_err(|e| CertError::Parse(e.to_string()))?;
    if field.modulus() != cert.poly.as_slice() {
        return Err(CertError::Parse(format!(
            "field polynomial {:?} is not the canonical modulus {:?} of GF({})",
            cert.poly,
            field.modulus(),
            cert.q
        )));
    }
    if cert.r < 1 {
        return Err(CertError::Parse("rank must be at least 1".into()));
    }
    let quadric =
        Quadric::new(field, cert.r, caps).map_err(|e| CertError::Parse(e.to_string()))?;
    let tail = quadric.tail();
    if (tail.0 .0, tail.1 .0, tail.2 .0) != cert.g {
        return Err(CertError::Parse(format!(
            "tail coefficients {:?} are not the canonical irreducible quadratic {:?}",
            cert.g,
            (tail.0 .0, tail.1 .0, tail.2 .0)
        )));
    }

    let dim = 2 * cert.r + 2;
    let mut qidxs = Vec::with_capacity(cert.rows.len());
    for (i, (coords, _)) in cert.rows.iter().enumerate() {
        if coords.len() != dim {
            return Err(CertError::Parse(format!(
                "row {i} has {} coordinates, expected {dim}",
                coords.len()
            )));
        }
        if coords.iter().any(|&c| c as u64 >= cert.q) {
            return Err(CertError::Parse(format!("row {i} has an element index out of range")));
        }
        let mut v: Vec<Elt> = coords.iter().map(|&c| Elt(c)).collect();
        let id = quadric
            .space()
            .id_of_vector(quadric.field(), &mut v)
            .ok_or_else(|| CertError::Verification(format!("row {i} is the zero vector")))?;
        let qi = quadric.qidx_of(id).ok_or_else(|| {
            CertError::Verification(format!("row {i} is not a point of the quadric"))
        })?;
        qidxs.push(qi);
    }
    {
        let mut sorted = qidxs.clone();
        sorted.sort_unstable();
        let before = sorted.len();
        sorted.dedup();
        if sorted.len() != before {
            return Err(CertError::Verification("duplicate point after normalization".into()));
        }
    }

    let mut warnings = Vec::new();
    let kind = match cert.claim {
        Claim::MOvoid { m } => {
            let expected = m
                .checked_mul((quadric.q() as i64).pow(cert.r as u32 + 1) + 1)
                .ok_or_else(|| CertError::Verification("size law overflows".into()))?;
            if qidxs.len() as i64 != expected {
                return Err(CertError::Verification(format!(
                    "size law: an m={m} ovoid must have {expected} points, certificate lists {}",
                    qidxs.len()
                )));
            }
            let set = PointSet::from_members(quadric.num_points(), &qidxs);
            match ovoid::is_m_ovoid(&quadric, &set, caps)
                .map_err(|e| CertError::Verification(e.to_string()))?
            {
                Some(found) if found == m => VerifiedKind::MOvoid { set, m },
                Some(found) => {
                    return Err(CertError::Verification(format!(
                        "generator scan found a {found}-ovoid, certificate claims m={m}"
                    )))
                }
                None => {
                    return Err(CertError::Verification(
                        "generator intersections are not constant".into(),
                    ))
                }
            }
        }
        Claim::Weighted { m } => {
            let mut weights = vec![0i64; quadric.num_points()];
            for (qi, (_, w)) in qidxs.iter().zip(&cert.rows) {
                weights[*qi as usize] = w.unwrap_or(0);
            }
            match ovoid::weighted_ovoid_m(&quadric, &weights)
                .map_err(|e| CertError::Verification(e.to_string()))?
            {
                Some(found) if found == m => {
                    if m < 0 {
                        warnings.push(format!("weighted ovoid has negative parameter m={m}"));
                    }
                    VerifiedKind::Weighted { weights, m }
                }
                Some(found) => {
                    return Err(CertError::Verification(format!(
                        "weights form a weighted {found}-ovoid, certificate claims m={m}"
                    )))
                }
                None => {
                    return Err(CertError::Verification(
                        "weights do not satisfy the defining identity at every point".into(),
                    ))
                }
            }
        }
        Claim::OneSystem => {
            let block = quadric.q() as usize + 1;
            if qidxs.len() % block != 0 {
                return Err(CertError::Verification(format!(
                    "row count {} is not a multiple of the line size {block}",
                    qidxs.len()
                )));
            }
            let mut lines: Vec<Vec<u32>> = qidxs.chunks(block).map(|c| c.to_vec()).collect();
            for line in lines.iter_mut() {
                line.sort_unstable();
            }
            for (i, line) in lines.iter().enumerate() {
                if !constructions::is_singular_line(&quadric, line) {
                    return Err(CertError::Verification(format!(
                        "block {i} is not a totally singular line"
                    )));
                }
            }
            match constructions::is_one_system(&quadric, &lines) {
                Ok(true) => VerifiedKind::OneSystem { lines },
                Ok(false) => {
                    return Err(CertError::Verification(
                        "lines do not form a 1-system".into(),
                    ))
                }
                Err(e) => return Err(CertError::Verification(e.to_string())),
            }
        }
    };
    Ok(Verified { quadric, claim: cert.claim.clone(), kind, warnings })
}

/// Parses and verifies a certificate from its text.
pub fn load_certificate(text: &str, caps: &Caps) -> Result<Verified, CertError> {
    let cert = parse_certificate(text)?;
    verify_certificate(&cert, caps)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q52() -> Quadric {
        Quadric::new(Field::new(2).unwrap(), 2, &Caps::default()).unwrap()
    }

    fn expect_err(r: Result<Verified, CertError>) -> CertError {
        match r {
            Err(e) => e,
            Ok(_) => panic!("expected an error"),
        }
    }

    #[test]
    fn ovoid_roundtrip() {
        let q = q52();
        let s = PointSet::full(q.num_points());
        let text = ovoid_certificate(&q, &s, 3);
        let v = match load_certificate(&text, &Caps::default()) {
            Ok(v) => v,
            Err(e) => panic!("{e}"),
        };
        let (set, m) = v.kind_set().expect("m-ovoid kind");
        assert_eq!(m, 3);
        assert_eq!(*set, s);
        // canonical re-serialization reproduces the text
        assert_eq!(ovoid_certificate(&v.quadric, set, m), text);
    }

    #[test]
    fn size_law_violation_detected() {
        let q = q52();
        let s = PointSet::full(q.num_points());
        let text = ovoid_certificate(&q, &s, 3);
        // drop the last point row
        let truncated: Vec<&str> = text.trim_end().lines().collect();
        let tampered = truncated[..truncated.len() - 1].join("\n");
        let err = expect_err(load_certificate(&tampered, &Caps::default()));
        assert!(matches!(err, CertError::Verification(ref msg) if msg.contains("size law")), "{err}");
    }

    #[test]
    fn wrong_m_detected() {
        let q = q52();
        let s = PointSet::full(q.num_points());
        let text = ovoid_certificate(&q, &s, 3).replace("m=3", "m=2");
        let err = expect_err(load_certificate(&text, &Caps::default()));
        assert!(matches!(err, CertError::Verification(_)));
    }

    #[test]
    fn malformed_header_is_parse_error() {
        assert!(matches!(
            load_certificate("nonsense", &Caps::default()),
            Err(CertError::Parse(_))
        ));
        assert!(matches!(
            load_certificate("q=6;poly=0,1;r=2;g=1,1,1\nclaim=m-ovoid;m=0\n", &Caps::default()),
            Err(CertError::Parse(_))
        ));
    }

    #[test]
    fn duplicate_points_rejected() {
        let q = q52();
        let text = format!(
            "{}\nclaim=m-ovoid;m=0\n{}\n{}\n",
            super::header_line(&q),
            super::coord_row(&q, 0),
            super::coord_row(&q, 0)
        );
        let err = expect_err(load_certificate(&text, &Caps::default()));
        assert!(matches!(err, CertError::Verification(ref m) if m.contains("duplicate")));
    }

    #[test]
    fn unnormalized_rows_accepted() {
        let q = Quadric::new(Field::new(3).unwrap(), 1, &Caps::default()).unwrap();
        let s = PointSet::full(q.num_points());
        let text = ovoid_certificate(&q, &s, 1);
        // scale one row by 2 (still the same projective point)
        let mut lines: Vec<String> = text.trim_end().lines().map(|s| s.to_string()).collect();
        let scaled: Vec<String> = lines[2]
            .split(',')
            .map(|c| {
                let v: u16 = c.parse().unwrap();
                let f = Field::new(3).unwrap();
                f.mul(Elt(v), Elt(2)).0.to_string()
            })
            .collect();
        lines[2] = scaled.join(",");
        let v = match load_certificate(&(lines.join("\n") + "\n"), &Caps::default()) {
            Ok(v) => v,
            Err(e) => panic!("{e}"),
        };
        assert!(matches!(v.kind, VerifiedKind::MOvoid { m: 1, .. }));
    }

    #[test]
    fn weighted_roundtrip_and_negative_warning() {
        let q = q52();
        let w: Vec<i64> = vec![-1; q.num_points()];
        let text = weighted_certificate(&q, &w, -3);
        let v = match load_certificate(&text, &Caps::default()) {
            Ok(v) => v,
            Err(e) => panic!("{e}"),
        };
        assert!(!v.warnings.is_empty());
        match v.kind {
            VerifiedKind::Weighted { m, .. } => assert_eq!(m, -3),
            _ => panic!("wrong kind"),
        }
    }
}

impl Verified {
    /// The point set and parameter of an m-ovoid certificate.
    pub fn kind_set(&self) -> Option<(&PointSet, i64)> {
        match &self.kind {
            VerifiedKind::MOvoid { set, m } => Some((set, *m)),
            _ => None,
        }
    }
}
