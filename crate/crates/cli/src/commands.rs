//! Implementations of the CLI subcommands. Each returns the stdout payload
//! (and an exit code where the contract needs one); human-oriented notes
//! like timings go to stderr.

use crate::cert::{self, Verified, VerifiedKind};
use crate::parallel;
use crate::report::{self, to_json};
use crate::{CliError, CliResult, Format};
use movoid_core::admissibility;
use movoid_core::constructions::{extract_line_spread, is_one_system, FieldReduction};
use movoid_core::gf::Field;
use movoid_core::ovoid::{self, PointSet};
use movoid_core::projgeom::GeomError;
use movoid_core::quadric::{Caps, Quadric};
use movoid_core::search::{SearchEngine, SearchMode, SearchProblem, SearchStatus, SearchWitness};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::ControlFlow;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

pub struct Ctx {
    pub format: Format,
    pub caps: Caps,
    pub threads: usize,
}

fn geom_err(e: GeomError) -> CliError {
    match e {
        GeomError::ResourceLimit { .. } => CliError::Usage(e.to_string()),
        other => CliError::Verification(other.to_string()),
    }
}

fn make_field(q: u64) -> CliResult<Field> {
    Field::new(q).map_err(|e| CliError::Usage(e.to_string()))
}

fn make_quadric(q: u64, r: usize, caps: &Caps) -> CliResult<Quadric> {
    if r < 1 {
        return Err(CliError::Usage("rank must be at least 1".into()));
    }
    Quadric::new(make_field(q)?, r, caps).map_err(geom_err)
}

/// Inclusive range specs: `3` or `2..5`.
fn parse_range(spec: &str) -> CliResult<(u64, u64)> {
    if let Some((a, b)) = spec.split_once("..") {
        let lo = a.trim().parse().map_err(|_| CliError::Usage(format!("bad range `{spec}`")))?;
        let hi = b.trim().parse().map_err(|_| CliError::Usage(format!("bad range `{spec}`")))?;
        if lo > hi {
            return Err(CliError::Usage(format!("empty range `{spec}`")));
        }
        Ok((lo, hi))
    } else {
        let v = spec.trim().parse().map_err(|_| CliError::Usage(format!("bad value `{spec}`")))?;
        Ok((v, v))
    }
}

// -- table ---------------------------------------------------------------------

pub fn cmd_table(ctx: &Ctx, q_spec: &str, r_spec: &str) -> CliResult<String> {
    let (q_lo, q_hi) = parse_range(q_spec)?;
    let (r_lo, r_hi) = parse_range(r_spec)?;
    let single_q = q_lo == q_hi;
    let mut rows = Vec::new();
    for q in q_lo..=q_hi {
        if admissibility::prime_power(q).is_none() {
            if single_q {
                return Err(CliError::Usage(format!("{q} is not a prime power")));
            }
            continue; // ranges skip non prime powers
        }
        for r in r_lo..=r_hi {
            let rep = admissibility::admissible_report(q, r as u32)
                .map_err(|e| CliError::Usage(e.to_string()))?;
            rows.push(report::TableRowJson::from_report(&rep));
        }
    }
    Ok(match ctx.format {
        Format::Json => to_json(&rows),
        Format::Csv => {
            let mut out = String::from(report::TableRowJson::CSV_HEADER);
            for row in &rows {
                out.push('\n');
                out.push_str(&row.csv_row());
            }
            out
        }
        Format::Text => {
            let mut out = String::new();
            for row in &rows {
                let _ = writeln!(
                    out,
                    "Q^-({}, {}): case {}, residues {:?} mod {}, lower bound {} (previous {}), admissible {:?} (nontrivial {:?})",
                    2 * row.r + 1,
                    row.q,
                    row.case,
                    row.residues,
                    row.q + 1,
                    row.lb_new,
                    row.lb_old,
                    row.admissible,
                    row.nontrivial,
                );
            }
            out.trim_end().to_string()
        }
    })
}

// -- build ---------------------------------------------------------------------

pub fn cmd_build(ctx: &Ctx, q: u64, r: usize, emit: Option<&Path>) -> CliResult<String> {
    let quadric = make_quadric(q, r, &ctx.caps)?;
    let lines = quadric.lines_through(0).map_err(geom_err)?.len();
    let generators = quadric
        .for_each_generator(&ctx.caps, |_| ControlFlow::Continue(()))
        .map_err(geom_err)?;
    if let Some(path) = emit {
        let full = PointSet::full(quadric.num_points());
        let m = admissibility::trivial_m(q, r as u32) as i64;
        std::fs::write(path, cert::ovoid_certificate(&quadric, &full, m))?;
    }
    let row = report::BuildJson {
        command: "build",
        q,
        r,
        points: quadric.num_points(),
        lines_through_point: lines,
        generators,
    };
    Ok(match ctx.format {
        Format::Json => to_json(&row),
        Format::Text => format!(
            "Q^-({}, {}): {} points, {} lines through each point, {} generators",
            2 * r + 1,
            q,
            row.points,
            row.lines_through_point,
            row.generators
        ),
        Format::Csv => return Err(CliError::Usage("csv output is only available for table".into())),
    })
}

// -- verify ---------------------------------------------------------------------

pub fn cmd_verify(ctx: &Ctx, path: &Path) -> CliResult<String> {
    let text = std::fs::read_to_string(path)?;
    let verified = cert::load_certificate(&text, &ctx.caps).map_err(|e| match e {
        cert::CertError::Parse(msg) => CliError::Usage(msg),
        cert::CertError::Verification(msg) => CliError::Verification(msg),
    })?;
    for w in &verified.warnings {
        eprintln!("warning: {w}");
    }
    let (m, rows) = match &verified.kind {
        VerifiedKind::MOvoid { set, m } => (Some(*m), set.len()),
        VerifiedKind::Weighted { weights, m } => {
            (Some(*m), weights.iter().filter(|&&w| w != 0).count())
        }
        VerifiedKind::OneSystem { lines } => (None, lines.len() * (verified.quadric.q() as usize + 1)),
    };
    let row = report::VerifyJson {
        command: "verify",
        valid: true,
        claim: verified.claim.label().to_string(),
        q: verified.quadric.q(),
        r: verified.quadric.rank(),
        rows,
        m,
        warnings: verified.warnings.clone(),
    };
    Ok(match ctx.format {
        Format::Json => to_json(&row),
        Format::Text => format!(
            "OK: verified {} certificate on Q^-({}, {}){}",
            row.claim,
            2 * row.r + 1,
            row.q,
            m.map(|m| format!(" with m={m}")).unwrap_or_default()
        ),
        Format::Csv => return Err(CliError::Usage("csv output is only available for table".into())),
    })
}

// -- reduce ---------------------------------------------------------------------

pub fn cmd_reduce(
    ctx: &Ctx,
    q: u64,
    e: u32,
    r: usize,
    source_path: Option<&Path>,
    out: Option<&Path>,
) -> CliResult<String> {
    if e < 2 {
        return Err(CliError::Usage("extension degree e must be at least 2".into()));
    }
    let base = make_field(q)?;
    let ext_order = q
        .checked_pow(e)
        .ok_or_else(|| CliError::Usage("q^e overflows".into()))?;
    let source_quadric = make_quadric(ext_order, r, &ctx.caps)?;

    let (source_set, source_m) = match source_path {
        None => {
            let m = admissibility::trivial_m(ext_order, r as u32) as i64;
            (PointSet::full(source_quadric.num_points()), m)
        }
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            let verified = cert::load_certificate(&text, &ctx.caps).map_err(|e| match e {
                cert::CertError::Parse(msg) => CliError::Usage(msg),
                cert::CertError::Verification(msg) => CliError::Verification(msg),
            })?;
            let (set, m) = verified
                .kind_set()
                .map(|(s, m)| (s.clone(), m))
                .ok_or_else(|| CliError::Usage("source certificate must claim an m-ovoid".into()))?;
            if verified.quadric.q() != ext_order || verified.quadric.rank() != r {
                return Err(CliError::Usage(format!(
                    "source certificate is for Q^-({}, {}), expected Q^-({}, {})",
                    2 * verified.quadric.rank() + 1,
                    verified.quadric.q(),
                    2 * r + 1,
                    ext_order
                )));
            }
            (set, m)
        }
    };

    let reduction = FieldReduction::new(&source_quadric, &base, &ctx.caps).map_err(geom_err)?;
    let target = &reduction.target;
    let reduced = reduction.reduce_set(&source_set);
    let expected_m = source_m * ((ext_order - 1) / (q - 1)) as i64;
    match ovoid::is_m_ovoid(target, &reduced, &ctx.caps).map_err(geom_err)? {
        Some(m) if m == expected_m => {}
        other => {
            return Err(CliError::Verification(format!(
                "reduced set failed verification: expected m={expected_m}, generator scan gave {other:?}"
            )))
        }
    }

    let (spread_lines, one_system) = if target.rank() == 3 {
        match extract_line_spread(target, &reduced, ctx.caps.max_generators).map_err(geom_err)? {
            Some(spread) => {
                let ok = is_one_system(target, &spread).map_err(geom_err)?;
                (Some(spread.len()), Some(ok))
            }
            None => (None, Some(false)),
        }
    } else {
        (None, None)
    };

    let cert_text = cert::ovoid_certificate(target, &reduced, expected_m);
    if let Some(path) = out {
        std::fs::write(path, &cert_text)?;
    }

    let row = report::ReduceJson {
        command: "reduce",
        base_q: q,
        e,
        source_r: r,
        source_m,
        target_r: target.rank(),
        m: expected_m,
        size: reduced.len(),
        spread_lines,
        one_system,
        points: reduced.members().map(|p| report::coord_string(target, p)).collect(),
    };
    Ok(match ctx.format {
        Format::Json => to_json(&row),
        Format::Text => {
            if out.is_some() {
                format!(
                    "verified {}-ovoid of Q^-({}, {}) with {} points{}",
                    expected_m,
                    2 * target.rank() + 1,
                    q,
                    reduced.len(),
                    match (spread_lines, one_system) {
                        (Some(n), Some(true)) => format!("; spread of {n} lines forms a 1-system"),
                        _ => String::new(),
                    }
                )
            } else {
                cert_text.trim_end().to_string()
            }
        }
        Format::Csv => return Err(CliError::Usage("csv output is only available for table".into())),
    })
}

// -- search ---------------------------------------------------------------------

pub struct SearchArgs {
    pub q: u64,
    pub r: usize,
    pub m: Option<i64>,
    pub one_system: bool,
    pub node_limit: Option<u64>,
    pub time_limit: Option<u64>,
    pub force: bool,
    pub emit: Option<PathBuf>,
    pub seed: Option<PathBuf>,
    pub seed_count: Option<usize>,
    pub prune_tangent: bool,
    pub prune_capacity: bool,
}

pub fn cmd_search(ctx: &Ctx, args: &SearchArgs) -> CliResult<(String, i32)> {
    let quadric = make_quadric(args.q, args.r, &ctx.caps)?;
    let mut problem = if args.one_system {
        SearchProblem::one_system()
    } else {
        let m = args.m.ok_or_else(|| CliError::Usage("--m is required for m-ovoid mode".into()))?;
        let report = admissibility::admissible_report(args.q, args.r as u32)
            .map_err(|e| CliError::Usage(e.to_string()))?;
        if !report.admissible.iter().any(|v| v.m as i64 == m) && !args.force {
            return Err(CliError::Usage(format!(
                "m={m} is excluded by the admissibility filter (admissible: {:?}); pass --force to search anyway",
                report.admissible.iter().map(|v| v.m).collect::<Vec<_>>()
            )));
        }
        SearchProblem::m_ovoid(m)
    };
    problem.node_limit = args.node_limit;
    problem.prune_tangent = args.prune_tangent;
    problem.prune_capacity = args.prune_capacity;

    if let Some(seed_path) = &args.seed {
        let text = std::fs::read_to_string(seed_path)?;
        let verified = cert::load_certificate(&text, &ctx.caps).map_err(|e| match e {
            cert::CertError::Parse(msg) => CliError::Usage(msg),
            cert::CertError::Verification(msg) => CliError::Verification(msg),
        })?;
        if verified.quadric.q() != args.q || verified.quadric.rank() != args.r {
            return Err(CliError::Usage("seed certificate is for a different quadric".into()));
        }
        match (&verified.kind, args.one_system) {
            (VerifiedKind::MOvoid { set, .. }, false) => {
                let mut pts: Vec<u32> = set.members().collect();
                if let Some(n) = args.seed_count {
                    pts.truncate(n);
                }
                problem.seed_points = pts;
            }
            (VerifiedKind::OneSystem { lines }, true) => {
                let mut ls = lines.clone();
                ls.sort();
                if let Some(n) = args.seed_count {
                    ls.truncate(n);
                }
                problem.seed_lines = ls;
            }
            _ => return Err(CliError::Usage("seed certificate kind does not match the mode".into())),
        }
    }

    let engine = SearchEngine::new(&quadric, problem, ctx.caps)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let deadline = args.time_limit.map(|secs| Instant::now() + Duration::from_secs(secs));
    let started = Instant::now();
    let outcome = parallel::run_search(&engine, ctx.threads, deadline)
        .map_err(|e| CliError::Verification(e.to_string()))?;
    eprintln!(
        "search finished in {:.3}s: {} after {} nodes",
        started.elapsed().as_secs_f64(),
        report::status_label(outcome.status),
        outcome.nodes
    );

    if let (Some(path), Some(witness)) = (&args.emit, &outcome.witness) {
        let text = match witness {
            SearchWitness::Points(pts) => {
                let s = PointSet::from_members(quadric.num_points(), pts);
                let SearchMode::MOvoid { m } = engine_mode(args) else { unreachable!() };
                cert::ovoid_certificate(&quadric, &s, m)
            }
            SearchWitness::Lines(lines) => cert::one_system_certificate(&quadric, lines),
        };
        std::fs::write(path, text)?;
    }

    let mode_label = if args.one_system { "one-system" } else { "m-ovoid" };
    let row = report::SearchJson::build(&quadric, mode_label, args.m, &outcome);
    let out = match ctx.format {
        Format::Json => to_json(&row),
        Format::Text => match outcome.status {
            SearchStatus::Found => format!(
                "found: {} after {} nodes",
                match &outcome.witness {
                    Some(SearchWitness::Points(p)) => format!("point set of size {}", p.len()),
                    Some(SearchWitness::Lines(l)) => format!("{} lines", l.len()),
                    None => "witness".into(),
                },
                outcome.nodes
            ),
            SearchStatus::ExhaustedNone => {
                format!("exhausted-none: complete search, no witness ({} nodes)", outcome.nodes)
            }
            SearchStatus::BudgetExceeded => {
                format!("budget-exceeded after {} nodes", outcome.nodes)
            }
        },
        Format::Csv => return Err(CliError::Usage("csv output is only available for table".into())),
    };
    let code = match outcome.status {
        SearchStatus::Found => 0,
        SearchStatus::ExhaustedNone => 1,
        SearchStatus::BudgetExceeded => 3,
    };
    Ok((out, code))
}

fn engine_mode(args: &SearchArgs) -> SearchMode {
    if args.one_system {
        SearchMode::OneSystem
    } else {
        SearchMode::MOvoid { m: args.m.expect("validated") }
    }
}

// -- stats ---------------------------------------------------------------------

pub fn cmd_stats(ctx: &Ctx, path: &Path, point: Option<u32>) -> CliResult<String> {
    let text = std::fs::read_to_string(path)?;
    let verified = cert::load_certificate(&text, &ctx.caps).map_err(|e| match e {
        cert::CertError::Parse(msg) => CliError::Usage(msg),
        cert::CertError::Verification(msg) => CliError::Verification(msg),
    })?;
    let Verified { quadric, kind, .. } = verified;
    let VerifiedKind::MOvoid { set, m } = kind else {
        return Err(CliError::Usage("stats requires an m-ovoid certificate".into()));
    };

    let bases: Vec<u32> = match point {
        Some(p) => {
            if p as usize >= quadric.num_points() || !set.contains(p) {
                return Err(CliError::Usage(format!(
                    "point {p} is not a point of the ovoid (required for line statistics)"
                )));
            }
            vec![p]
        }
        None => set.members().collect(),
    };
    if bases.is_empty() {
        return Err(CliError::Usage("the ovoid is empty; no base points".into()));
    }

    let mut sums: Option<(i64, i64, i64)> = None;
    let mut hist_groups: BTreeMap<Vec<(usize, u64)>, usize> = BTreeMap::new();
    for &b in &bases {
        let stats = ovoid::line_stats(&quadric, &set, m, b)
            .map_err(|e| CliError::Verification(e.to_string()))?;
        let triple = (stats.sum_t, stats.sum_t_sq, stats.sum_t_t_minus_1);
        match sums {
            None => sums = Some(triple),
            Some(prev) if prev == triple => {}
            Some(prev) => {
                return Err(CliError::Verification(format!(
                    "line statistics differ between base points: {prev:?} vs {triple:?}"
                )))
            }
        }
        let hist = ovoid::intersection_histogram(&quadric, &set, b)
            .map_err(|e| CliError::Verification(e.to_string()))?;
        let key: Vec<(usize, u64)> = hist.into_iter().collect();
        *hist_groups.entry(key).or_insert(0) += 1;
    }
    let (sum_t, sum_t_sq, sum_t_t_minus_1) = sums.expect("at least one base point");

    let row = report::StatsJson {
        command: "stats",
        q: quadric.q(),
        r: quadric.rank(),
        m,
        base_points: bases.len(),
        sum_t,
        sum_t_sq,
        sum_t_t_minus_1,
        histograms: hist_groups
            .iter()
            .map(|(key, &count)| report::HistogramJson {
                counts: key.iter().map(|&(size, n)| (size.to_string(), n)).collect(),
                base_points: count,
            })
            .collect(),
    };
    Ok(match ctx.format {
        Format::Json => to_json(&row),
        Format::Text => {
            let mut out = format!(
                "line statistics of the {}-ovoid on Q^-({}, {}) over {} base point(s):\n",
                m,
                2 * quadric.rank() + 1,
                quadric.q(),
                bases.len()
            );
            let _ = writeln!(out, "  sum t = {sum_t}");
            let _ = writeln!(out, "  sum t^2 = {sum_t_sq}");
            let _ = writeln!(out, "  sum t(t-1) = {sum_t_t_minus_1}");
            for h in &row.histograms {
                let _ = writeln!(out, "  histogram {:?} at {} base point(s)", h.counts, h.base_points);
            }
            out.trim_end().to_string()
        }
        Format::Csv => return Err(CliError::Usage("csv output is only available for table".into())),
    })
}
