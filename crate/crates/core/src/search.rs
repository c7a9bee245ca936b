//! Exhaustive enumeration of small loops.
//!
//! Loops are enumerated as reduced Latin squares: row 0 and column 0 are
//! `0, 1, …, n-1`, so element 0 is the identity. Remaining cells are filled
//! row-major by backtracking with ascending candidates, which emits tables in
//! lexicographic row-major order without duplicates.
//!
//! Parallel runs split the work by the choice of row 1 and concatenate the
//! per-partition results in row-1 order, so reports do not depend on the
//! number of threads.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::carrier::InverseConvention;
use crate::cayley::LoopTable;
use crate::identity::{holds, Law};

/// Largest supported order. Order 7 (16 942 080 reduced squares) is
/// accepted only for count-only queries.
pub const MAX_ORDER: usize = 7;

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("order {0} is out of range (1..={MAX_ORDER})")]
    OrderOutOfRange(usize),
    #[error("order 7 is only supported with count-only")]
    CountOnlyRequired,
    #[error("writing tables to {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
}

const EMPTY: usize = usize::MAX;

/// Reduced Latin squares of one order, as row-major flat arrays.
#[derive(Debug, Clone)]
pub struct ReducedSquares {
    n: usize,
    grid: Vec<usize>,
    row_used: Vec<u32>,
    col_used: Vec<u32>,
    cells: Vec<(usize, usize)>,
    cursor: usize,
    started: bool,
    done: bool,
}

impl ReducedSquares {
    pub fn new(n: usize) -> Result<Self, SearchError> {
        check_order(n)?;
        Ok(Self::with_prefix(n, &[]))
    }

    /// Only the squares whose row 1 is `row1`.
    pub fn with_row1(n: usize, row1: &[usize]) -> Result<Self, SearchError> {
        check_order(n)?;
        Ok(Self::with_prefix(n, row1))
    }

    fn with_prefix(n: usize, row1: &[usize]) -> Self {
        let mut grid = vec![EMPTY; n * n];
        let mut row_used = vec![0u32; n];
        let mut col_used = vec![0u32; n];
        let mut place = |grid: &mut Vec<usize>, r: usize, c: usize, v: usize| {
            grid[r * n + c] = v;
            row_used[r] |= 1 << v;
            col_used[c] |= 1 << v;
        };
        for c in 0..n {
            place(&mut grid, 0, c, c);
        }
        for r in 1..n {
            place(&mut grid, r, 0, r);
        }
        let first_free_row = if row1.is_empty() { 1 } else { 2 };
        for (c, &v) in row1.iter().enumerate().skip(1) {
            place(&mut grid, 1, c, v);
        }
        let cells = (first_free_row..n).flat_map(|r| (1..n).map(move |c| (r, c))).collect();
        ReducedSquares { n, grid, row_used, col_used, cells, cursor: 0, started: false, done: false }
    }

    pub fn order(&self) -> usize {
        self.n
    }
}

impl Iterator for ReducedSquares {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            if self.cells.is_empty() {
                return Some(self.grid.clone());
            }
            self.cursor = 0;
        } else {
            if self.cells.is_empty() {
                self.done = true;
                return None;
            }
            self.cursor = self.cells.len() - 1;
        }
        let n = self.n;
        let full = (1u32 << n) - 1;
        loop {
            let (r, c) = self.cells[self.cursor];
            let idx = r * n + c;
            let current = self.grid[idx];
            let start = if current == EMPTY {
                0
            } else {
                self.row_used[r] &= !(1 << current);
                self.col_used[c] &= !(1 << current);
                current + 1
            };
            let avail = full & !(self.row_used[r] | self.col_used[c]) & !((1u32 << start) - 1);
            if avail != 0 {
                let v = avail.trailing_zeros() as usize;
                self.grid[idx] = v;
                self.row_used[r] |= 1 << v;
                self.col_used[c] |= 1 << v;
                self.cursor += 1;
                if self.cursor == self.cells.len() {
                    return Some(self.grid.clone());
                }
            } else {
                self.grid[idx] = EMPTY;
                if self.cursor == 0 {
                    self.done = true;
                    return None;
                }
                self.cursor -= 1;
            }
        }
    }
}

fn check_order(n: usize) -> Result<(), SearchError> {
    if (1..=MAX_ORDER).contains(&n) {
        Ok(())
    } else {
        Err(SearchError::OrderOutOfRange(n))
    }
}

/// Every loop of order `n` with identity 0 and rows/columns 0 in natural
/// order, in lexicographic row-major order.
pub fn enumerate_loops(n: usize) -> Result<impl Iterator<Item = LoopTable>, SearchError> {
    Ok(ReducedSquares::new(n)?.map(move |grid| LoopTable::from_flat(n, grid).expect("reduced Latin squares are loops")))
}

/// Valid second rows of a reduced square of order `n >= 2`, in lexicographic order.
pub fn second_rows(n: usize) -> Vec<Vec<usize>> {
    fn extend(n: usize, row: &mut Vec<usize>, used: u32, out: &mut Vec<Vec<usize>>) {
        let c = row.len();
        if c == n {
            out.push(row.clone());
            return;
        }
        for v in 0..n {
            if v != c && used & (1 << v) == 0 {
                row.push(v);
                extend(n, row, used | (1 << v), out);
                row.pop();
            }
        }
    }
    let mut out = Vec::new();
    if n >= 2 {
        extend(n, &mut vec![1], 1 << 1, &mut out);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FilterMode {
    /// The law holds on the loop.
    Holds,
    /// The law fails on the loop.
    Fails,
    /// The law holds on every principal isotope of the loop.
    Universal,
}

#[derive(Debug, Clone)]
pub enum Filter {
    Law {
        label: String,
        law: Law,
        mode: FilterMode,
    },
    /// The nucleus is `{e}`.
    TrivialNucleus,
}

impl Filter {
    pub fn law(label: impl Into<String>, law: Law, mode: FilterMode) -> Filter {
        Filter::Law { label: label.into(), law, mode }
    }

    pub fn describe(&self) -> String {
        match self {
            Filter::Law { label, mode, .. } => {
                let mode = match mode {
                    FilterMode::Holds => "holds",
                    FilterMode::Fails => "fails",
                    FilterMode::Universal => "universal",
                };
                format!("{label} {mode}")
            }
            Filter::TrivialNucleus => "trivial nucleus".to_string(),
        }
    }

    pub fn accepts(&self, table: &LoopTable, conv: InverseConvention) -> bool {
        match self {
            Filter::Law { law, mode, .. } => match mode {
                FilterMode::Holds => holds(table, law, conv).is_none(),
                FilterMode::Fails => holds(table, law, conv).is_some(),
                FilterMode::Universal => table.is_universal(law, conv).is_none(),
            },
            Filter::TrivialNucleus => table.nucleus() == [table.identity_element()],
        }
    }
}

#[derive(Debug, Clone)]
pub struct SearchQuery {
    pub order: usize,
    /// Conjunction, applied in order.
    pub filters: Vec<Filter>,
    pub count_only: bool,
    pub convention: InverseConvention,
}

impl SearchQuery {
    pub fn new(order: usize) -> Self {
        SearchQuery { order, filters: Vec::new(), count_only: false, convention: InverseConvention::default() }
    }

    pub fn filter(mut self, filter: Filter) -> Self {
        self.filters.push(filter);
        self
    }

    pub fn count_only(mut self, yes: bool) -> Self {
        self.count_only = yes;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FilterCount {
    pub filter: String,
    /// Loops surviving this filter and all earlier ones.
    pub passed: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchReport {
    pub order: usize,
    pub convention: InverseConvention,
    pub total_enumerated: u64,
    pub filter_counts: Vec<FilterCount>,
    pub matched: u64,
    /// Matching tables as rows; empty for count-only queries.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub matches: Vec<Vec<Vec<usize>>>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl PartialEq for SearchReport {
    /// Equality ignores the elapsed time.
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order
            && self.convention == other.convention
            && self.total_enumerated == other.total_enumerated
            && self.filter_counts == other.filter_counts
            && self.matched == other.matched
            && self.matches == other.matches
    }
}

impl SearchReport {
    pub fn tables(&self) -> Vec<LoopTable> {
        self.matches.iter().map(|rows| LoopTable::validate(rows).expect("matches are loops")).collect()
    }

    /// Writes each match as `loop_n{N}_{index}.txt` (index from 0) into `dir`.
    pub fn write_tables(&self, dir: &Path) -> Result<Vec<PathBuf>, SearchError> {
        let io_err = |path: &Path| {
            let path = path.to_path_buf();
            move |source| SearchError::Io { path, source }
        };
        fs::create_dir_all(dir).map_err(io_err(dir))?;
        let mut written = Vec::with_capacity(self.matches.len());
        for (idx, table) in self.tables().iter().enumerate() {
            let path = dir.join(format!("loop_n{}_{}.txt", self.order, idx));
            fs::write(&path, table.to_text()).map_err(io_err(&path))?;
            written.push(path);
        }
        Ok(written)
    }
}

#[derive(Default)]
struct Partial {
    total: u64,
    passed: Vec<u64>,
    matches: Vec<Vec<Vec<usize>>>,
}

fn scan(query: &SearchQuery, squares: ReducedSquares) -> Partial {
    let n = query.order;
    let mut part = Partial { passed: vec![0; query.filters.len()], ..Partial::default() };
    for grid in squares {
        part.total += 1;
        if query.filters.is_empty() && query.count_only {
            continue;
        }
        let table = LoopTable::from_flat(n, grid).expect("reduced Latin squares are loops");
        let mut ok = true;
        for (idx, filter) in query.filters.iter().enumerate() {
            if !filter.accepts(&table, query.convention) {
                ok = false;
                break;
            }
            part.passed[idx] += 1;
        }
        if ok && !query.count_only {
            part.matches.push(table.rows().map(<[usize]>::to_vec).collect());
        }
    }
    part
}

/// Runs a query on the current rayon pool.
pub fn run(query: &SearchQuery) -> Result<SearchReport, SearchError> {
    check_order(query.order)?;
    if query.order == MAX_ORDER && !query.count_only {
        return Err(SearchError::CountOnlyRequired);
    }
    let start = Instant::now();
    let n = query.order;
    let parts: Vec<Partial> = if n < 3 {
        vec![scan(query, ReducedSquares::new(n)?)]
    } else {
        second_rows(n).par_iter().map(|row1| scan(query, ReducedSquares::with_prefix(n, row1))).collect()
    };
    Ok(merge(query, parts, start.elapsed()))
}

/// Single-threaded reference run; produces the same report as [`run`].
pub fn run_sequential(query: &SearchQuery) -> Result<SearchReport, SearchError> {
    check_order(query.order)?;
    if query.order == MAX_ORDER && !query.count_only {
        return Err(SearchError::CountOnlyRequired);
    }
    let start = Instant::now();
    let part = scan(query, ReducedSquares::new(query.order)?);
    Ok(merge(query, vec![part], start.elapsed()))
}

fn merge(query: &SearchQuery, parts: Vec<Partial>, elapsed: Duration) -> SearchReport {
    let mut total = 0;
    let mut passed = vec![0u64; query.filters.len()];
    let mut matches = Vec::new();
    for part in parts {
        total += part.total;
        for (acc, p) in passed.iter_mut().zip(&part.passed) {
            *acc += p;
        }
        matches.extend(part.matches);
    }
    let matched = if query.filters.is_empty() { total } else { *passed.last().unwrap_or(&0) };
    SearchReport {
        order: query.order,
        convention: query.convention,
        total_enumerated: total,
        filter_counts: query
            .filters
            .iter()
            .zip(passed)
            .map(|(f, passed)| FilterCount { filter: f.describe(), passed })
            .collect(),
        matched,
        matches,
        elapsed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::identity::builtin;

    #[test]
    fn small_counts() {
        assert_eq!(enumerate_loops(1).unwrap().count(), 1);
        assert_eq!(enumerate_loops(2).unwrap().count(), 1);
        let three: Vec<_> = enumerate_loops(3).unwrap().collect();
        assert_eq!(three, vec![crate::cayley::fixtures::cyclic(3)]);
        assert_eq!(enumerate_loops(4).unwrap().count(), 4);
        assert_eq!(enumerate_loops(5).unwrap().count(), 56);
    }

    #[test]
    fn order_range() {
        assert!(matches!(enumerate_loops(0), Err(SearchError::OrderOutOfRange(0))));
        assert!(matches!(enumerate_loops(8), Err(SearchError::OrderOutOfRange(8))));
        assert!(matches!(run(&SearchQuery::new(7)), Err(SearchError::CountOnlyRequired)));
    }

    #[test]
    fn stream_is_sorted_and_reduced() {
        let grids: Vec<Vec<usize>> = ReducedSquares::new(5).unwrap().collect();
        assert!(grids.windows(2).all(|w| w[0] < w[1]));
        for g in &grids {
            let t = LoopTable::from_flat(5, g.clone()).unwrap();
            assert_eq!(t.identity_element(), 0);
        }
    }

    #[test]
    fn partitions_cover_the_stream() {
        for n in 3..=5 {
            let whole: Vec<_> = ReducedSquares::new(n).unwrap().collect();
            let split: Vec<_> =
                second_rows(n).iter().flat_map(|row1| ReducedSquares::with_row1(n, row1).unwrap()).collect();
            assert_eq!(whole, split);
        }
    }

    #[test]
    fn count_only_query() {
        let report = run(&SearchQuery::new(4).count_only(true)).unwrap();
        assert_eq!(report.total_enumerated, 4);
        assert_eq!(report.matched, 4);
        assert!(report.matches.is_empty());
    }

    #[test]
    fn associative_order5_is_z5() {
        let q =
            SearchQuery::new(5).filter(Filter::law("associative", builtin("associative").unwrap(), FilterMode::Holds));
        let report = run(&q).unwrap();
        assert_eq!(report.total_enumerated, 56);
        // Z5 under the 4!/|Aut(Z5)| = 6 labelings that fix the identity.
        assert_eq!(report.matched, 6);
        let tables = report.tables();
        assert!(tables.contains(&crate::cayley::fixtures::cyclic(5)));
        for t in &tables {
            let m = |x, y| t.product(x, y);
            for x in 0..5 {
                for y in 0..5 {
                    for z in 0..5 {
                        assert_eq!(m(x, m(y, z)), m(m(x, y), z));
                    }
                }
            }
            // Generated by 1, hence cyclic.
            let mut seen = vec![0];
            while seen.len() < 5 {
                seen.push(m(*seen.last().unwrap(), 1));
            }
            seen.sort_unstable();
            assert_eq!(seen, vec![0, 1, 2, 3, 4]);
        }
        let others = enumerate_loops(5).unwrap().filter(|t| !tables.contains(t));
        for t in others {
            assert!(holds(&t, &builtin("associative").unwrap(), InverseConvention::Right).is_some());
        }
    }

    #[test]
    fn parallel_matches_sequential() {
        let q = SearchQuery::new(5)
            .filter(Filter::law("commutative", builtin("commutative").unwrap(), FilterMode::Holds))
            .filter(Filter::TrivialNucleus);
        let a = run(&q).unwrap();
        let b = run_sequential(&q).unwrap();
        assert_eq!(a, b);
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }

    #[test]
    fn write_tables_round_trip() {
        let dir = std::env::temp_dir().join(format!("loopforge-search-{}", std::process::id()));
        let q = SearchQuery::new(4);
        let report = run(&q).unwrap();
        let paths = report.write_tables(&dir).unwrap();
        assert_eq!(paths.len(), 4);
        assert!(paths[0].ends_with("loop_n4_0.txt"));
        let back = LoopTable::from_text(&fs::read_to_string(&paths[3]).unwrap()).unwrap();
        assert_eq!(back, report.tables()[3]);
        fs::remove_dir_all(&dir).unwrap();
    }
}
