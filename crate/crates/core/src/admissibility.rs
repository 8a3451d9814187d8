//! The number-theoretic side: the modular filter `F(m) ≡ 0 (mod q+1)` on
//! ovoid parameters, solution counts for the congruence, closed-form counts
//! of admissible values, and the exact integer lower bounds on m.
//!
//! All bound computations work on squared inequalities in exact integer
//! arithmetic, never through floating square roots, so every ceiling is
//! bit-exact.

use alloc::vec::Vec;
use core::fmt;

/// Errors for the admissibility computations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AdmError {
    NotAPrimePower { q: u64 },
    DegenerateField { q: u64 },
    /// Closed form and brute force disagreed; carries both counts.
    CountMismatch { closed: u64, brute: u64 },
}

impl fmt::Display for AdmError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AdmError::NotAPrimePower { q } => write!(f, "{q} is not a prime power"),
            AdmError::DegenerateField { q } => write!(f, "field order {q} is degenerate"),
            AdmError::CountMismatch { closed, brute } => {
                write!(f, "admissible-count mismatch: closed form {closed}, brute force {brute}")
            }
        }
    }
}

impl core::error::Error for AdmError {}

/// Trial-division factorization, smallest primes first.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            let mut k = 0;
            while n % d == 0 {
                n /= d;
                k += 1;
            }
            out.push((d, k));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Returns `(p, k)` with `q = p^k`, `p` prime, if `q` is a prime power `>= 2`.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let f = factorize(q);
    if f.len() == 1 {
        Some(f[0])
    } else {
        None
    }
}

/// The case split of the modular filter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FCase {
    ROdd,
    REvenQEven,
    REvenQOdd,
}

impl FCase {
    pub fn of(q: u64, r: u32) -> FCase {
        if r % 2 == 1 {
            FCase::ROdd
        } else if q % 2 == 0 {
            FCase::REvenQEven
        } else {
            FCase::REvenQOdd
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            FCase::ROdd => "r-odd",
            FCase::REvenQEven => "r-even-q-even",
            FCase::REvenQOdd => "r-even-q-odd",
        }
    }
}

/// The filter polynomial: `m^2 - m` for odd rank, `m^2` for even rank and
/// even q, `m^2 + ((q+1)/2) m` for even rank and odd q.
pub fn f_of_m(q: u64, r: u32, m: i64) -> i64 {
    match FCase::of(q, r) {
        FCase::ROdd => m * m - m,
        FCase::REvenQEven => m * m,
        FCase::REvenQOdd => m * m + ((q as i64 + 1) / 2) * m,
    }
}

/// `(q^r - 1)/(q - 1)`, the parameter of the trivial all-points ovoid.
pub fn trivial_m(q: u64, r: u32) -> u64 {
    let mut pow = 1u128;
    for _ in 0..r {
        pow *= q as u128;
    }
    ((pow - 1) / (q as u128 - 1)) as u64
}

/// All residues `m` in `[0, q]` with `F(m) ≡ 0 (mod q+1)`, by brute scan.
/// The length of the list is checked against the closed-form solution count.
pub fn residue_solutions(q: u64, r: u32) -> Result<Vec<u64>, AdmError> {
    prime_power(q).ok_or(AdmError::NotAPrimePower { q })?;
    let modulus = q as i64 + 1;
    let sols: Vec<u64> = (0..=q)
        .filter(|&m| f_of_m(q, r, m as i64).rem_euclid(modulus) == 0)
        .collect();
    let closed = residue_count_closed_form(q, r);
    if sols.len() as u64 != closed {
        return Err(AdmError::CountMismatch { closed, brute: sols.len() as u64 });
    }
    Ok(sols)
}

/// Closed-form number of solutions of `F(m) ≡ 0 (mod q+1)` in `[0, q]`,
/// read off the prime factorization `q+1 = p_1^{k_1} ... p_t^{k_t}`.
pub fn residue_count_closed_form(q: u64, r: u32) -> u64 {
    let fac = factorize(q + 1);
    match FCase::of(q, r) {
        FCase::ROdd => 1u64 << fac.len(),
        FCase::REvenQEven => fac.iter().map(|&(p, k)| p.pow(k / 2)).product(),
        FCase::REvenQOdd => {
            if (q + 1) % 4 == 0 {
                // q ≡ -1 (mod 4)
                fac.iter().map(|&(p, k)| p.pow(k / 2)).product()
            } else {
                // q ≡ 1 (mod 4): q+1 = 2 * odd, and the factor 2 contributes
                // two solutions instead of 2^{floor(1/2)} = 1.
                2 * fac.iter().skip(1).map(|&(p, k)| p.pow(k / 2)).product::<u64>()
            }
        }
    }
}

/// Brute-force count of m in the half-open interval `[0, (q^r-1)/(q-1))`
/// passing the filter.
pub fn count_admissible_brute(q: u64, r: u32) -> u64 {
    let modulus = q as i64 + 1;
    let top = trivial_m(q, r);
    (0..top).filter(|&m| f_of_m(q, r, m as i64).rem_euclid(modulus) == 0).count() as u64
}

/// Closed-form count of admissible m over the same half-open interval.
pub fn count_admissible_closed_form(q: u64, r: u32) -> u64 {
    // geometric tails q^{r-2} + q^{r-4} + ... ending at q (r odd) or 1 (r even)
    let mut tail = 0u64;
    let mut e = r as i64 - 2;
    while e >= 0 {
        tail += q.pow(e as u32);
        e -= 2;
    }
    match FCase::of(q, r) {
        FCase::ROdd => residue_count_closed_form(q, r) * tail + 1,
        _ => residue_count_closed_form(q, r) * tail,
    }
}

/// Number of admissible parameters, computed in closed form and reconciled
/// against the brute-force scan.
pub fn count_admissible(q: u64, r: u32) -> Result<u64, AdmError> {
    prime_power(q).ok_or(AdmError::NotAPrimePower { q })?;
    let closed = count_admissible_closed_form(q, r);
    let brute = count_admissible_brute(q, r);
    if closed != brute {
        return Err(AdmError::CountMismatch { closed, brute });
    }
    Ok(closed)
}

fn smallest_m_with(mut pred: impl FnMut(i128) -> bool, upper: i128) -> u64 {
    // predicates below are monotone in m for m >= 0
    let mut m = 0i128;
    while m <= upper {
        if pred(m) {
            return m as u64;
        }
        m += 1;
    }
    upper as u64 + 1
}

/// Smallest integers m satisfying the new and the previously known lower
/// bound, as exact ceilings of the quadratic inequalities
/// `m^2(q-1)^2 + 3m(q-1) + 2 - q^{r+1} - q >= 0` (new) and
/// `m^2(q-1)^2 + 3m(q-1) - q^{r+1} >= 0` (old).
pub fn lower_bound(q: u64, r: u32) -> Result<(u64, u64), AdmError> {
    if q < 2 {
        return Err(AdmError::DegenerateField { q });
    }
    prime_power(q).ok_or(AdmError::NotAPrimePower { q })?;
    let qi = q as i128;
    let d = qi - 1;
    let qr1 = qi.pow(r + 1);
    let upper = (qi.pow(r) - 1) / d + 1;
    let new = smallest_m_with(|m| m * m * d * d + 3 * m * d + 2 - qr1 - qi >= 0, upper);
    let old = smallest_m_with(|m| m * m * d * d + 3 * m * d - qr1 >= 0, upper);
    Ok((new, old))
}

/// One admissible value together with its triviality flag.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AdmissibleValue {
    pub m: u64,
    pub trivial: bool,
}

/// Full admissibility verdict for a pair (q, r).
#[derive(Debug, Clone)]
pub struct AdmissibilityReport {
    pub q: u64,
    pub r: u32,
    pub modulus: u64,
    pub factorization: Vec<(u64, u32)>,
    pub case: FCase,
    pub residues: Vec<u64>,
    pub lower_bound_new: u64,
    pub lower_bound_old: u64,
    /// Values of m in `[0, (q^r-1)/(q-1)]` passing the filter and not
    /// excluded by the lower bound (applied to m and to its complement).
    pub admissible: Vec<AdmissibleValue>,
}

impl AdmissibilityReport {
    pub fn nontrivial(&self) -> Vec<u64> {
        self.admissible.iter().filter(|v| !v.trivial).map(|v| v.m).collect()
    }
}

/// Scans `[0, (q^r-1)/(q-1)]` through the filter and the bound. The trivial
/// values 0 and `(q^r-1)/(q-1)` always stay, flagged trivial; a nontrivial m
/// is dropped when m or its complement falls below the new lower bound.
pub fn admissible_report(q: u64, r: u32) -> Result<AdmissibilityReport, AdmError> {
    let residues = residue_solutions(q, r)?;
    let (lb_new, lb_old) = lower_bound(q, r)?;
    let top = trivial_m(q, r);
    let modulus = q as i64 + 1;
    let mut admissible = Vec::new();
    for m in 0..=top {
        if f_of_m(q, r, m as i64).rem_euclid(modulus) != 0 {
            continue;
        }
        let trivial = m == 0 || m == top;
        if !trivial {
            let comp = top - m;
            if m < lb_new || comp < lb_new {
                continue;
            }
        }
        admissible.push(AdmissibleValue { m, trivial });
    }
    Ok(AdmissibilityReport {
        q,
        r,
        modulus: q + 1,
        factorization: factorize(q + 1),
        case: FCase::of(q, r),
        residues,
        lower_bound_new: lb_new,
        lower_bound_old: lb_old,
        admissible,
    })
}
