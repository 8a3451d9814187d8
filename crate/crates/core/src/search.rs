//! Deterministic pruned backtracking for m-ovoids and 1-systems.
//!
//! The m-ovoid search branches on the lexicographically smallest generator
//! not yet holding m chosen points, enumerating its completions in
//! ascending point order; completing a generator forces all its other
//! undecided points out, so the branches partition the solution space and
//! an exhausted search is a proof of nonexistence. Prunes only cut branches
//! that cannot contain a solution; disabling them changes node counts,
//! never status.
//!
//! The engine is time-free: callers supply a stop callback (polled every
//! 1024 nodes) for wall-clock budgets. Top-level subtrees can be farmed to
//! workers and merged deterministically: the merged outcome (status,
//! witness, node count) is identical to the serial run's.

use crate::constructions;
use crate::ovoid::{self, PointSet};
use crate::projgeom::GeomError;
use crate::quadric::{Caps, Quadric};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchError {
    Geom(GeomError),
    InvalidSeed(&'static str),
    /// A found witness failed re-verification; indicates an engine bug.
    WitnessRejected,
}

impl fmt::Display for SearchError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SearchError::Geom(e) => write!(f, "{e}"),
            SearchError::InvalidSeed(msg) => write!(f, "invalid seed: {msg}"),
            SearchError::WitnessRejected => write!(f, "witness failed re-verification"),
        }
    }
}

impl core::error::Error for SearchError {}

impl From<GeomError> for SearchError {
    fn from(e: GeomError) -> Self {
        SearchError::Geom(e)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchMode {
    MOvoid { m: i64 },
    OneSystem,
}

/// A search instance: target, budget, prune switches and optional seeds.
/// Seeds are forced into the solution; an exhausted seeded search proves
/// nonexistence only relative to the seeds.
#[derive(Debug, Clone)]
pub struct SearchProblem {
    pub mode: SearchMode,
    pub node_limit: Option<u64>,
    pub prune_tangent: bool,
    pub prune_capacity: bool,
    pub seed_points: Vec<u32>,
    pub seed_lines: Vec<Vec<u32>>,
}

impl SearchProblem {
    pub fn m_ovoid(m: i64) -> SearchProblem {
        SearchProblem {
            mode: SearchMode::MOvoid { m },
            node_limit: None,
            prune_tangent: true,
            prune_capacity: true,
            seed_points: Vec::new(),
            seed_lines: Vec::new(),
        }
    }

    pub fn one_system() -> SearchProblem {
        SearchProblem {
            mode: SearchMode::OneSystem,
            node_limit: None,
            prune_tangent: true,
            prune_capacity: true,
            seed_points: Vec::new(),
            seed_lines: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchStatus {
    Found,
    ExhaustedNone,
    BudgetExceeded,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchWitness {
    /// Sorted quadric indices of the found point set.
    Points(Vec<u32>),
    /// The found lines, each a sorted quadric index list, sorted.
    Lines(Vec<Vec<u32>>),
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub status: SearchStatus,
    pub witness: Option<SearchWitness>,
    pub nodes: u64,
}

/// Result of exploring one top-level subtree in isolation.
#[derive(Debug, Clone)]
pub struct BranchOutcome {
    /// Nodes explored in the subtree (capped at the node limit).
    pub nodes: u64,
    /// Node count at the moment of the first witness, and the witness.
    pub found: Option<(u64, SearchWitness)>,
    /// The subtree run was cut off by the budget before completing.
    pub stopped: bool,
}

enum Flow {
    Continue,
    Found,
    Budget,
}

struct Counters {
    nodes: u64,
    witness: Option<SearchWitness>,
}

/// Precomputed immutable search context; per-run state lives on the stack.
pub struct SearchEngine<'q> {
    q: &'q Quadric,
    problem: SearchProblem,
    caps: Caps,
    // m-ovoid mode
    generators: Vec<Vec<u32>>,
    point_gens: Vec<Vec<u32>>,
    // one-system mode
    lines: Vec<Vec<u32>>,
    line_mask: Vec<Vec<u64>>,
    shadow_mask: Vec<Vec<u64>>,
    seed_line_idx: Vec<usize>,
    one_system_target: usize,
}

impl<'q> SearchEngine<'q> {
    pub fn new(q: &'q Quadric, problem: SearchProblem, caps: Caps) -> Result<Self, SearchError> {
        let mut engine = SearchEngine {
            q,
            problem,
            caps,
            generators: Vec::new(),
            point_gens: Vec::new(),
            lines: Vec::new(),
            line_mask: Vec::new(),
            shadow_mask: Vec::new(),
            seed_line_idx: Vec::new(),
            one_system_target: 0,
        };
        match engine.problem.mode {
            SearchMode::MOvoid { .. } => {
                let gens = q.generators(&engine.caps)?;
                engine.generators = gens
                    .iter()
                    .map(|g| q.qpoints_of(g).ok_or(GeomError::Internal("generator off quadric")))
                    .collect::<Result<_, _>>()?;
                engine.point_gens = vec![Vec::new(); q.num_points()];
                for (gi, g) in engine.generators.iter().enumerate() {
                    for &p in g {
                        engine.point_gens[p as usize].push(gi as u32);
                    }
                }
                for &s in &engine.problem.seed_points {
                    if s as usize >= q.num_points() {
                        return Err(SearchError::InvalidSeed("seed point off the quadric"));
                    }
                }
            }
            SearchMode::OneSystem => {
                if q.rank() != 3 {
                    return Err(SearchError::Geom(GeomError::RankTooSmall { r: q.rank() }));
                }
                engine.lines = q.singular_lines(engine.caps.max_generators)?;
                let words = q.num_points().div_ceil(64);
                for line in &engine.lines {
                    let mut pm = vec![0u64; words];
                    for &p in line {
                        pm[p as usize / 64] |= 1 << (p % 64);
                    }
                    let mut sm = pm.clone();
                    for plane in q.planes_through_line(line)? {
                        for &p in &plane {
                            sm[p as usize / 64] |= 1 << (p % 64);
                        }
                    }
                    engine.line_mask.push(pm);
                    engine.shadow_mask.push(sm);
                }
                engine.one_system_target = (q.q().pow(4) + 1) as usize;
                for seed in &engine.problem.seed_lines {
                    let idx = engine
                        .lines
                        .iter()
                        .position(|l| l == seed)
                        .ok_or(SearchError::InvalidSeed("seed is not a singular line"))?;
                    engine.seed_line_idx.push(idx);
                }
                engine.seed_line_idx.sort_unstable();
                engine.seed_line_idx.dedup();
            }
        }
        Ok(engine)
    }

    /// Number of top-level moves available for subtree farming; 0 when the
    /// root is already decided (use the serial run then).
    pub fn branch_count(&self) -> Result<usize, SearchError> {
        match self.problem.mode {
            SearchMode::MOvoid { m } => {
                let Some((mut st, feasible)) = self.movoid_root()? else {
                    return Ok(0);
                };
                if !feasible {
                    return Ok(0);
                }
                Ok(match self.movoid_moves(&mut st, m) {
                    Some(moves) => moves.len(),
                    None => 0,
                })
            }
            SearchMode::OneSystem => {
                let st = self.onesys_root()?;
                let Some(st) = st else { return Ok(0) };
                Ok(self.onesys_moves(&st).len())
            }
        }
    }

    /// Serial depth-first search over the whole tree.
    pub fn run(&self, stop: &mut dyn FnMut() -> bool) -> Result<SearchOutcome, SearchError> {
        let mut ctr = Counters { nodes: 0, witness: None };
        let flow = match self.problem.mode {
            SearchMode::MOvoid { m } => match self.movoid_root()? {
                None => Flow::Continue,
                Some((mut st, feasible)) => {
                    if self.enter_node(&mut ctr, stop) {
                        Flow::Budget
                    } else if !feasible {
                        Flow::Continue
                    } else {
                        self.dfs_movoid(&mut st, m, &mut ctr, stop)
                    }
                }
            },
            SearchMode::OneSystem => match self.onesys_root()? {
                None => Flow::Continue,
                Some(mut st) => {
                    if self.enter_node(&mut ctr, stop) {
                        Flow::Budget
                    } else {
                        self.dfs_onesys(&mut st, &mut ctr, stop)
                    }
                }
            },
        };
        self.finish(flow, ctr)
    }

    /// Explores the subtree under the idx-th top-level move in isolation.
    pub fn run_branch(
        &self,
        idx: usize,
        stop: &mut dyn FnMut() -> bool,
    ) -> Result<BranchOutcome, SearchError> {
        let mut ctr = Counters { nodes: 0, witness: None };
        let flow = match self.problem.mode {
            SearchMode::MOvoid { m } => {
                let Some((mut st, feasible)) = self.movoid_root()? else {
                    return Err(SearchError::InvalidSeed("no branches at the root"));
                };
                if !feasible {
                    return Err(SearchError::InvalidSeed("no branches at the root"));
                }
                let moves = self.movoid_moves(&mut st, m).unwrap_or_default();
                let (gi, ref subset) = moves[idx];
                let (undo, ok) = self.movoid_apply(&mut st, m, gi, subset);
                let flow = if ok {
                    if self.enter_node(&mut ctr, stop) {
                        Flow::Budget
                    } else {
                        self.dfs_movoid(&mut st, m, &mut ctr, stop)
                    }
                } else {
                    Flow::Continue
                };
                self.movoid_undo(&mut st, &undo);
                flow
            }
            SearchMode::OneSystem => {
                let Some(mut st) = self.onesys_root()? else {
                    return Err(SearchError::InvalidSeed("no branches at the root"));
                };
                let moves = self.onesys_moves(&st);
                let li = moves[idx];
                self.onesys_push(&mut st, li);
                let flow = if self.enter_node(&mut ctr, stop) {
                    Flow::Budget
                } else {
                    self.dfs_onesys(&mut st, &mut ctr, stop)
                };
                self.onesys_pop(&mut st, li);
                flow
            }
        };
        Ok(match flow {
            Flow::Found => BranchOutcome {
                nodes: ctr.nodes,
                found: Some((ctr.nodes, ctr.witness.expect("witness recorded"))),
                stopped: false,
            },
            Flow::Continue => BranchOutcome { nodes: ctr.nodes, found: None, stopped: false },
            Flow::Budget => BranchOutcome { nodes: ctr.nodes, found: None, stopped: true },
        })
    }

    /// Deterministic merge of per-branch outcomes: replays the serial order
    /// (root first, branches in index order) so the merged result is
    /// byte-identical to the serial run's, whatever the worker schedule was.
    pub fn merge(&self, outcomes: &[BranchOutcome]) -> Result<SearchOutcome, SearchError> {
        let limit = self.problem.node_limit;
        let mut cum: u64 = 1; // the root node
        for b in outcomes {
            let rem = limit.map(|l| l.saturating_sub(cum));
            if let Some((nw, wit)) = &b.found {
                if rem.map_or(true, |r| *nw <= r) {
                    return self.verified(SearchOutcome {
                        status: SearchStatus::Found,
                        witness: Some(wit.clone()),
                        nodes: cum + nw,
                    });
                }
                return Ok(SearchOutcome {
                    status: SearchStatus::BudgetExceeded,
                    witness: None,
                    nodes: limit.expect("found out of budget implies a limit"),
                });
            }
            if b.stopped {
                let nodes = limit.map(|l| l.min(cum.saturating_add(b.nodes))).unwrap_or(cum + b.nodes);
                return Ok(SearchOutcome {
                    status: SearchStatus::BudgetExceeded,
                    witness: None,
                    nodes,
                });
            }
            if let Some(r) = rem {
                if b.nodes > r {
                    return Ok(SearchOutcome {
                        status: SearchStatus::BudgetExceeded,
                        witness: None,
                        nodes: limit.expect("remainder implies a limit"),
                    });
                }
            }
            cum += b.nodes;
        }
        Ok(SearchOutcome { status: SearchStatus::ExhaustedNone, witness: None, nodes: cum })
    }

    fn finish(&self, flow: Flow, ctr: Counters) -> Result<SearchOutcome, SearchError> {
        match flow {
            Flow::Found => self.verified(SearchOutcome {
                status: SearchStatus::Found,
                witness: ctr.witness,
                nodes: ctr.nodes,
            }),
            Flow::Continue => Ok(SearchOutcome {
                status: SearchStatus::ExhaustedNone,
                witness: None,
                nodes: ctr.nodes,
            }),
            Flow::Budget => Ok(SearchOutcome {
                status: SearchStatus::BudgetExceeded,
                witness: None,
                nodes: ctr.nodes,
            }),
        }
    }

    /// Every found witness re-verifies through the verifier of record.
    fn verified(&self, outcome: SearchOutcome) -> Result<SearchOutcome, SearchError> {
        match (&outcome.witness, &self.problem.mode) {
            (Some(SearchWitness::Points(pts)), SearchMode::MOvoid { m }) => {
                let s = PointSet::from_members(self.q.num_points(), pts);
                if ovoid::is_m_ovoid(self.q, &s, &self.caps)? != Some(*m) {
                    return Err(SearchError::WitnessRejected);
                }
            }
            (Some(SearchWitness::Lines(lines)), SearchMode::OneSystem) => {
                if !constructions::is_one_system(self.q, lines)? {
                    return Err(SearchError::WitnessRejected);
                }
            }
            _ => return Err(SearchError::WitnessRejected),
        }
        Ok(outcome)
    }

    /// Counts a node entry; true when the budget is exhausted (the entry is
    /// then not counted).
    fn enter_node(&self, ctr: &mut Counters, stop: &mut dyn FnMut() -> bool) -> bool {
        if let Some(limit) = self.problem.node_limit {
            if ctr.nodes >= limit {
                return true;
            }
        }
        ctr.nodes += 1;
        ctr.nodes % 1024 == 0 && stop()
    }

    // -- m-ovoid search ------------------------------------------------------

    /// Root state with seeds applied; None when there are no generators
    /// (cannot happen on a real quadric). The flag reports seed feasibility.
    fn movoid_root(&self) -> Result<Option<(MState, bool)>, SearchError> {
        let SearchMode::MOvoid { m } = self.problem.mode else { unreachable!() };
        let n = self.q.num_points();
        let mut st = MState {
            cell: vec![Cell::Und; n],
            gen_in: vec![0; self.generators.len()],
            gen_und: self.generators.iter().map(|g| g.len() as i64).collect(),
            perp_in: vec![0; n],
            perp_und: (0..n).map(|i| self.q.perp_of(i as u32).len() as i64).collect(),
            n_in: 0,
            n_und: n as i64,
        };
        let mut feasible = true;
        let mut seeds = self.problem.seed_points.clone();
        seeds.sort_unstable();
        seeds.dedup();
        for &p in &seeds {
            feasible &= self.movoid_assign(&mut st, m, p, true);
        }
        Ok(Some((st, feasible)))
    }

    /// The completions of the smallest unfilled generator, in lexicographic
    /// order; None when every generator already holds exactly m points.
    fn movoid_moves(&self, st: &mut MState, m: i64) -> Option<Vec<(u32, Vec<u32>)>> {
        let gi = (0..self.generators.len()).find(|&g| st.gen_in[g] != m)?;
        let need = m - st.gen_in[gi];
        let cands: Vec<u32> = self.generators[gi]
            .iter()
            .copied()
            .filter(|&p| st.cell[p as usize] == Cell::Und)
            .collect();
        let mut moves = Vec::new();
        if need >= 0 && need <= cands.len() as i64 {
            for_each_combination(cands.len(), need as usize, |pick| {
                moves.push((gi as u32, pick.iter().map(|&i| cands[i]).collect()));
            });
        }
        Some(moves)
    }

    /// Applies one completion: chosen points in, all other undecided points
    /// of the generator out. Returns the undo log and the feasibility flag.
    fn movoid_apply(&self, st: &mut MState, m: i64, gi: u32, subset: &[u32]) -> (Vec<u32>, bool) {
        let mut undo = Vec::new();
        let mut ok = true;
        let members: Vec<u32> = self.generators[gi as usize]
            .iter()
            .copied()
            .filter(|&p| st.cell[p as usize] == Cell::Und)
            .collect();
        for p in members {
            let to_in = subset.binary_search(&p).is_ok();
            ok &= self.movoid_assign(st, m, p, to_in);
            undo.push(p);
        }
        (undo, ok)
    }

    fn movoid_undo(&self, st: &mut MState, undo: &[u32]) {
        for &p in undo.iter().rev() {
            let was_in = st.cell[p as usize] == Cell::In;
            st.cell[p as usize] = Cell::Und;
            st.n_und += 1;
            if was_in {
                st.n_in -= 1;
            }
            for &g in &self.point_gens[p as usize] {
                st.gen_und[g as usize] += 1;
                if was_in {
                    st.gen_in[g as usize] -= 1;
                }
            }
            for &r in self.q.perp_of(p) {
                st.perp_und[r as usize] += 1;
                if was_in {
                    st.perp_in[r as usize] -= 1;
                }
            }
        }
    }

    /// Settles one point. Always applies; the return value reports whether
    /// the enabled prunes still consider the state feasible.
    fn movoid_assign(&self, st: &mut MState, m: i64, p: u32, to_in: bool) -> bool {
        debug_assert_eq!(st.cell[p as usize], Cell::Und);
        st.cell[p as usize] = if to_in { Cell::In } else { Cell::Out };
        st.n_und -= 1;
        if to_in {
            st.n_in += 1;
        }
        let mut ok = true;
        for &g in &self.point_gens[p as usize] {
            st.gen_und[g as usize] -= 1;
            if to_in {
                st.gen_in[g as usize] += 1;
            }
            if self.problem.prune_capacity {
                ok &= st.gen_in[g as usize] <= m
                    && st.gen_in[g as usize] + st.gen_und[g as usize] >= m;
            }
        }
        for &r in self.q.perp_of(p) {
            st.perp_und[r as usize] -= 1;
            if to_in {
                st.perp_in[r as usize] += 1;
            }
            if self.problem.prune_tangent {
                ok &= self.tangent_feasible(st, m, r);
            }
        }
        if self.problem.prune_capacity {
            let target = m * ((self.q.q() as i64).pow(self.q.rank() as u32 + 1) + 1);
            ok &= st.n_in <= target && st.n_in + st.n_und >= target;
        }
        ok
    }

    /// Tangent-section window: the settled target (or the undecided
    /// interval) must stay between the chosen count and the maximum still
    /// achievable.
    fn tangent_feasible(&self, st: &MState, m: i64, p: u32) -> bool {
        let inner = ovoid::tangent_inner_count(self.q, m);
        let outer = ovoid::tangent_outer_count(self.q, m);
        let (lo, hi) = match st.cell[p as usize] {
            Cell::In => (inner, inner),
            Cell::Out => (outer, outer),
            Cell::Und => (inner, outer),
        };
        let cur = st.perp_in[p as usize];
        cur <= hi && cur + st.perp_und[p as usize] >= lo
    }

    fn dfs_movoid(
        &self,
        st: &mut MState,
        m: i64,
        ctr: &mut Counters,
        stop: &mut dyn FnMut() -> bool,
    ) -> Flow {
        let Some(moves) = self.movoid_moves(st, m) else {
            // every generator holds exactly m chosen points
            let members: Vec<u32> = (0..self.q.num_points() as u32)
                .filter(|&p| st.cell[p as usize] == Cell::In)
                .collect();
            ctr.witness = Some(SearchWitness::Points(members));
            return Flow::Found;
        };
        for (gi, subset) in &moves {
            let (undo, ok) = self.movoid_apply(st, m, *gi, subset);
            let flow = if ok {
                if self.enter_node(ctr, stop) {
                    Flow::Budget
                } else {
                    self.dfs_movoid(st, m, ctr, stop)
                }
            } else {
                Flow::Continue
            };
            self.movoid_undo(st, &undo);
            match flow {
                Flow::Continue => {}
                other => return other,
            }
        }
        Flow::Continue
    }

    // -- 1-system search -----------------------------------------------------

    /// Root state with seed lines chosen; None when the seeds conflict.
    fn onesys_root(&self) -> Result<Option<OState>, SearchError> {
        let words = self.q.num_points().div_ceil(64);
        let mut st = OState {
            chosen: Vec::new(),
            covered: vec![0u64; words],
            shadow: vec![0u64; words],
            last_free: None,
        };
        for &li in &self.seed_line_idx {
            if !self.onesys_compatible(&st, li) {
                return Ok(None);
            }
            self.onesys_push(&mut st, li);
        }
        Ok(Some(st))
    }

    fn onesys_compatible(&self, st: &OState, li: usize) -> bool {
        let pm = &self.line_mask[li];
        let sm = &self.shadow_mask[li];
        st.shadow.iter().zip(pm).all(|(a, b)| a & b == 0)
            && st.covered.iter().zip(sm).all(|(a, b)| a & b == 0)
    }

    fn onesys_push(&self, st: &mut OState, li: usize) {
        st.chosen.push(li);
        for (w, b) in st.covered.iter_mut().zip(&self.line_mask[li]) {
            *w |= b;
        }
        for (w, b) in st.shadow.iter_mut().zip(&self.shadow_mask[li]) {
            *w |= b;
        }
        if self.seed_line_idx.binary_search(&li).is_err() {
            st.last_free = Some(li);
        }
    }

    fn onesys_pop(&self, st: &mut OState, li: usize) {
        st.chosen.pop();
        // masks are unions; rebuild from the remaining chosen lines
        for w in st.covered.iter_mut() {
            *w = 0;
        }
        for w in st.shadow.iter_mut() {
            *w = 0;
        }
        st.last_free = None;
        let chosen = st.chosen.clone();
        for &c in &chosen {
            for (w, b) in st.covered.iter_mut().zip(&self.line_mask[c]) {
                *w |= b;
            }
            for (w, b) in st.shadow.iter_mut().zip(&self.shadow_mask[c]) {
                *w |= b;
            }
            if self.seed_line_idx.binary_search(&c).is_err() {
                st.last_free = Some(c);
            }
        }
        let _ = li;
    }

    /// Candidate next lines: ascending, past the last freely chosen line,
    /// skipping seeds and conflicts.
    fn onesys_moves(&self, st: &OState) -> Vec<usize> {
        let lo = st.last_free.map(|l| l + 1).unwrap_or(0);
        let needed = self.one_system_target - st.chosen.len();
        if needed == 0 {
            return Vec::new();
        }
        (lo..self.lines.len())
            .filter(|li| self.seed_line_idx.binary_search(li).is_err())
            .filter(|&li| self.onesys_compatible(st, li))
            .collect()
    }

    fn dfs_onesys(&self, st: &mut OState, ctr: &mut Counters, stop: &mut dyn FnMut() -> bool) -> Flow {
        if st.chosen.len() == self.one_system_target {
            let mut lines: Vec<Vec<u32>> =
                st.chosen.iter().map(|&li| self.lines[li].clone()).collect();
            lines.sort();
            ctr.witness = Some(SearchWitness::Lines(lines));
            return Flow::Found;
        }
        let moves = self.onesys_moves(st);
        let needed = self.one_system_target - st.chosen.len();
        if moves.len() < needed {
            return Flow::Continue;
        }
        for (i, &li) in moves.iter().enumerate() {
            if moves.len() - i < needed {
                break; // not enough candidates left in ascending order
            }
            self.onesys_push(st, li);
            let flow = if self.enter_node(ctr, stop) {
                Flow::Budget
            } else {
                self.dfs_onesys(st, ctr, stop)
            };
            self.onesys_pop(st, li);
            match flow {
                Flow::Continue => {}
                other => return other,
            }
        }
        Flow::Continue
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Cell {
    Und,
    In,
    Out,
}

struct MState {
    cell: Vec<Cell>,
    gen_in: Vec<i64>,
    gen_und: Vec<i64>,
    perp_in: Vec<i64>,
    perp_und: Vec<i64>,
    n_in: i64,
    n_und: i64,
}

struct OState {
    chosen: Vec<usize>,
    covered: Vec<u64>,
    shadow: Vec<u64>,
    /// index of the last freely (non-seed) chosen line
    last_free: Option<usize>,
}

/// Visits all k-subsets of 0..n in lexicographic order.
fn for_each_combination(n: usize, k: usize, mut visit: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    if k == 0 {
        visit(&[]);
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        visit(&idx);
        // advance the rightmost index that still has room
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - k {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}
