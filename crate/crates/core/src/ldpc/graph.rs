//! Base graphs, lifting-size selection and quasi-cyclic expansion.

use std::collections::HashMap;
use std::path::Path;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BaseGraphId {
    Bg1,
    Bg2,
}

impl BaseGraphId {
    pub fn from_index(i: u8) -> Option<Self> {
        match i {
            1 => Some(Self::Bg1),
            2 => Some(Self::Bg2),
            _ => None,
        }
    }

    pub fn index(self) -> u8 {
        match self {
            Self::Bg1 => 1,
            Self::Bg2 => 2,
        }
    }

    /// Base rows `M`.
    pub fn rows(self) -> usize {
        match self {
            Self::Bg1 => 46,
            Self::Bg2 => 42,
        }
    }

    /// Base columns `N`.
    pub fn cols(self) -> usize {
        match self {
            Self::Bg1 => 68,
            Self::Bg2 => 52,
        }
    }

    /// Systematic block-columns (22 or 10).
    pub fn kb_max(self) -> usize {
        match self {
            Self::Bg1 => 22,
            Self::Bg2 => 10,
        }
    }

    /// Maximum code-block size `K_cb`.
    pub fn max_block_size(self) -> usize {
        match self {
            Self::Bg1 => 8448,
            Self::Bg2 => 3840,
        }
    }

    /// Transmittable block-columns (`N_r / Zc`): all columns minus the two punctured ones.
    pub fn codeword_block_cols(self) -> usize {
        self.cols() - 2
    }
}

/// One non-null base-graph position with its shift for each of the eight lifting sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BaseEntry {
    pub row: usize,
    pub col: usize,
    pub shifts: [u16; 8],
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseGraph {
    pub id: BaseGraphId,
    /// Sorted by (row, col).
    entries: Vec<BaseEntry>,
}

impl BaseGraph {
    pub fn new(id: BaseGraphId, mut entries: Vec<BaseEntry>) -> Result<Self> {
        entries.sort_by_key(|e| (e.row, e.col));
        let bg = Self { id, entries };
        bg.validate()?;
        Ok(bg)
    }

    pub fn entries(&self) -> &[BaseEntry] {
        &self.entries
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn shift(&self, row: usize, col: usize, ils: usize) -> Option<u16> {
        self.entries
            .binary_search_by_key(&(row, col), |e| (e.row, e.col))
            .ok()
            .map(|i| self.entries[i].shifts[ils])
    }

    /// Checks the block layout shared by both graphs: double-diagonal core
    /// parity, zero block above the extension, identity extension diagonal.
    fn validate(&self) -> Result<()> {
        let (m, n, kb) = (self.id.rows(), self.id.cols(), self.id.kb_max());
        let fail = |msg: String| Err(Error::Structure(format!("{:?}: {msg}", self.id)));
        for e in &self.entries {
            if e.row >= m || e.col >= n {
                return fail(format!("entry ({}, {}) outside {m}x{n}", e.row, e.col));
            }
        }
        let has = |r: usize, c: usize| self.shift(r, c, 0).is_some();
        let zero_all = |r: usize, c: usize| {
            self.entries
                .iter()
                .find(|e| e.row == r && e.col == c)
                .is_some_and(|e| e.shifts.iter().all(|&s| s == 0))
        };

        // Core parity columns kb+1..kb+3: two identity entries on adjacent rows.
        for k in 1..4 {
            let col = kb + k;
            let rows: Vec<usize> = (0..4).filter(|&r| has(r, col)).collect();
            if rows.len() != 2 || rows[1] != rows[0] + 1 {
                return fail(format!("core column {col} is not double-diagonal"));
            }
            if !rows.iter().all(|&r| zero_all(r, col)) {
                return fail(format!("core column {col} has non-identity blocks"));
            }
        }
        let first_parity_rows = (0..4).filter(|&r| has(r, kb)).count();
        if first_parity_rows != 3 {
            return fail(format!(
                "core column {kb} has {first_parity_rows} entries, expected 3"
            ));
        }
        for e in &self.entries {
            if e.col >= kb + 4 {
                let expected_col = kb + e.row;
                if e.row < 4 || e.col != expected_col {
                    return fail(format!("unexpected extension entry ({}, {})", e.row, e.col));
                }
            }
        }
        for r in 4..m {
            if !zero_all(r, kb + r) {
                return fail(format!("extension row {r} lacks its identity block"));
            }
        }
        Ok(())
    }
}

/// Lifting sizes grouped by set index iLS.
pub const LIFTING_SETS: [&[usize]; 8] = [
    &[2, 4, 8, 16, 32, 64, 128, 256],
    &[3, 6, 12, 24, 48, 96, 192, 384],
    &[5, 10, 20, 40, 80, 160, 320],
    &[7, 14, 28, 56, 112, 224],
    &[9, 18, 36, 72, 144, 288],
    &[11, 22, 44, 88, 176, 352],
    &[13, 26, 52, 104, 208],
    &[15, 30, 60, 120, 240],
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LiftingConfig {
    pub zc: usize,
    pub ils: usize,
}

impl LiftingConfig {
    /// Looks up the set containing `zc`.
    pub fn for_zc(zc: usize) -> Option<Self> {
        LIFTING_SETS
            .iter()
            .position(|set| set.contains(&zc))
            .map(|ils| Self { zc, ils })
    }
}

/// Number of systematic block-columns used for lifting selection.
pub fn kb_for(bg: BaseGraphId, b: usize) -> usize {
    match bg {
        BaseGraphId::Bg1 => 22,
        BaseGraphId::Bg2 if b > 640 => 10,
        BaseGraphId::Bg2 if b > 560 => 9,
        BaseGraphId::Bg2 if b > 192 => 8,
        BaseGraphId::Bg2 => 6,
    }
}

/// Smallest lifting size over all sets with `kb * zc >= kr`.
pub fn select_lifting(kr: usize, kb: usize) -> Result<LiftingConfig> {
    LIFTING_SETS
        .iter()
        .enumerate()
        .flat_map(|(ils, set)| set.iter().map(move |&zc| LiftingConfig { zc, ils }))
        .filter(|l| kb * l.zc >= kr)
        .min_by_key(|l| l.zc)
        .ok_or(Error::PayloadExceedsLifting { kr, max: kb * 384 })
}

/// Base-graph choice from payload size and target rate.
pub fn select_base_graph(payload_len: usize, rate: f64) -> BaseGraphId {
    if payload_len <= 292 || (payload_len <= 3824 && rate <= 0.67) || rate <= 0.25 {
        BaseGraphId::Bg2
    } else {
        BaseGraphId::Bg1
    }
}

/// One circulant block of an expanded matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockEntry {
    pub row: usize,
    pub col: usize,
    /// Right cyclic shift of the identity, already reduced modulo Zc.
    pub shift: usize,
}

/// Quasi-cyclic parity-check matrix stored as circulant blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParityCheckMatrix {
    pub zc: usize,
    pub n_block_rows: usize,
    pub n_block_cols: usize,
    /// Sorted by (row, col); at most one entry per block position.
    entries: Vec<BlockEntry>,
}

impl ParityCheckMatrix {
    /// Builds a matrix from a base matrix where `-1` means a null block.
    pub fn from_base(base: &[Vec<i32>], zc: usize) -> Result<Self> {
        if zc == 0 {
            return Err(Error::InvalidParameter(
                "lifting size must be positive".into(),
            ));
        }
        let n_block_rows = base.len();
        let n_block_cols = base.first().map_or(0, Vec::len);
        let mut entries = Vec::new();
        for (r, row) in base.iter().enumerate() {
            if row.len() != n_block_cols {
                return Err(Error::DimensionMismatch {
                    what: "base matrix row length",
                    expected: n_block_cols,
                    got: row.len(),
                });
            }
            for (c, &v) in row.iter().enumerate() {
                if v < -1 {
                    return Err(Error::InvalidParameter(format!("shift {v} below -1")));
                }
                if v >= 0 {
                    entries.push(BlockEntry {
                        row: r,
                        col: c,
                        shift: v as usize % zc,
                    });
                }
            }
        }
        Ok(Self {
            zc,
            n_block_rows,
            n_block_cols,
            entries,
        })
    }

    /// A plain binary matrix viewed as a quasi-cyclic matrix with Zc = 1.
    pub fn from_dense(rows: &[Vec<u8>]) -> Result<Self> {
        let base: Vec<Vec<i32>> = rows
            .iter()
            .map(|r| r.iter().map(|&b| if b != 0 { 0 } else { -1 }).collect())
            .collect();
        Self::from_base(&base, 1)
    }

    pub fn entries(&self) -> &[BlockEntry] {
        &self.entries
    }

    pub fn rows(&self) -> usize {
        self.n_block_rows * self.zc
    }

    pub fn cols(&self) -> usize {
        self.n_block_cols * self.zc
    }

    /// Total number of ones.
    pub fn nnz(&self) -> usize {
        self.entries.len() * self.zc
    }

    /// Entries of one block-row.
    pub fn block_row(&self, r: usize) -> &[BlockEntry] {
        let lo = self.entries.partition_point(|e| e.row < r);
        let hi = self.entries.partition_point(|e| e.row <= r);
        &self.entries[lo..hi]
    }

    /// Calls `f(row, col)` for every one in the matrix, row-major.
    pub fn for_each_one(&self, mut f: impl FnMut(usize, usize)) {
        let z = self.zc;
        for br in 0..self.n_block_rows {
            let blocks = self.block_row(br);
            for r in 0..z {
                for e in blocks {
                    f(br * z + r, e.col * z + (r + e.shift) % z);
                }
            }
        }
    }

    /// Dense 0/1 materialization, test support only (Zc ≤ 16).
    pub fn to_dense(&self) -> Result<Vec<Vec<u8>>> {
        if self.zc > 16 {
            return Err(Error::TestSupportBound(format!(
                "dense materialization needs Zc <= 16, got {}",
                self.zc
            )));
        }
        let mut dense = vec![vec![0u8; self.cols()]; self.rows()];
        self.for_each_one(|r, c| dense[r][c] = 1);
        Ok(dense)
    }
}

/// Replaces each base entry by its circulant for the given lifting.
pub fn expand(bg: &BaseGraph, lifting: LiftingConfig) -> ParityCheckMatrix {
    let entries = bg
        .entries()
        .iter()
        .map(|e| BlockEntry {
            row: e.row,
            col: e.col,
            shift: e.shifts[lifting.ils] as usize % lifting.zc,
        })
        .collect();
    ParityCheckMatrix {
        zc: lifting.zc,
        n_block_rows: bg.id.rows(),
        n_block_cols: bg.id.cols(),
        entries,
    }
}

/// Bit-level Tanner-graph index sets in compressed form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Adjacency {
    row_ptr: Vec<usize>,
    row_cols: Vec<usize>,
    col_ptr: Vec<usize>,
    col_rows: Vec<usize>,
}

impl Adjacency {
    /// `BN(j)`: columns connected to check row `j`, ascending.
    pub fn bn(&self, j: usize) -> &[usize] {
        &self.row_cols[self.row_ptr[j]..self.row_ptr[j + 1]]
    }

    /// `CN(i)`: check rows connected to column `i`, ascending.
    pub fn cn(&self, i: usize) -> &[usize] {
        &self.col_rows[self.col_ptr[i]..self.col_ptr[i + 1]]
    }

    pub fn n_checks(&self) -> usize {
        self.row_ptr.len() - 1
    }

    pub fn n_bits(&self) -> usize {
        self.col_ptr.len() - 1
    }
}

pub fn adjacency(pcm: &ParityCheckMatrix) -> Adjacency {
    let (m, n) = (pcm.rows(), pcm.cols());
    let mut by_row: Vec<Vec<usize>> = vec![Vec::new(); m];
    let mut by_col: Vec<Vec<usize>> = vec![Vec::new(); n];
    pcm.for_each_one(|r, c| {
        by_row[r].push(c);
        by_col[c].push(r);
    });
    let flatten = |lists: Vec<Vec<usize>>| {
        let mut ptr = Vec::with_capacity(lists.len() + 1);
        let mut flat = Vec::new();
        ptr.push(0);
        for mut l in lists {
            l.sort_unstable();
            flat.extend(l);
            ptr.push(flat.len());
        }
        (ptr, flat)
    };
    let (row_ptr, row_cols) = flatten(by_row);
    let (col_ptr, col_rows) = flatten(by_col);
    Adjacency {
        row_ptr,
        row_cols,
        col_ptr,
        col_rows,
    }
}

/// Redundancy-version start offsets as fractions of the circular buffer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RvTable {
    fractions: HashMap<(BaseGraphId, usize), (usize, usize)>,
}

impl RvTable {
    pub fn new(fractions: HashMap<(BaseGraphId, usize), (usize, usize)>) -> Result<Self> {
        for bg in [BaseGraphId::Bg1, BaseGraphId::Bg2] {
            for rv in 0..4 {
                match fractions.get(&(bg, rv)) {
                    Some(&(_, 0)) => {
                        return Err(Error::InvalidAsset(format!(
                            "zero denominator for {bg:?} rv{rv}"
                        )))
                    }
                    Some(&(num, den)) if num >= den => {
                        return Err(Error::InvalidAsset(format!(
                            "offset fraction >= 1 for {bg:?} rv{rv}"
                        )))
                    }
                    Some(_) => {}
                    None => return Err(Error::InvalidAsset(format!("missing rv{rv} for {bg:?}"))),
                }
            }
        }
        Ok(Self { fractions })
    }

    /// Start offset `k0` for a buffer of `ncb` bits, rounded down to a multiple of Zc.
    pub fn k0(&self, bg: BaseGraphId, rv: usize, ncb: usize, zc: usize) -> usize {
        let (num, den) = self.fractions[&(bg, rv)];
        (num * ncb) / (den * zc) * zc
    }
}

impl Default for RvTable {
    fn default() -> Self {
        let mut fractions = HashMap::new();
        for (bg, nums, den) in [
            (BaseGraphId::Bg1, [0, 17, 33, 56], 66),
            (BaseGraphId::Bg2, [0, 13, 25, 43], 50),
        ] {
            for (rv, num) in nums.into_iter().enumerate() {
                fractions.insert((bg, rv), (num, den));
            }
        }
        Self { fractions }
    }
}

/// Contents of the LDPC asset file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LdpcTables {
    pub bg1: BaseGraph,
    pub bg2: BaseGraph,
    pub rv: RvTable,
}

impl LdpcTables {
    pub fn graph(&self, id: BaseGraphId) -> &BaseGraph {
        match id {
            BaseGraphId::Bg1 => &self.bg1,
            BaseGraphId::Bg2 => &self.bg2,
        }
    }
}

const BG_HEADER: &str = "bg,row,col,ils,shift";
const RV_HEADER: &str = "rv,bg,rv_index,numerator,denominator";

fn parse_fields<const N: usize>(line: &str, lineno: usize) -> Result<[i64; N]> {
    let mut out = [0i64; N];
    let mut n = 0;
    for field in line.split(',') {
        if n == N {
            return Err(Error::MalformedRow {
                line: lineno,
                reason: format!("expected {N} fields"),
            });
        }
        out[n] = field.trim().parse().map_err(|_| Error::MalformedRow {
            line: lineno,
            reason: format!("not an integer: {field:?}"),
        })?;
        n += 1;
    }
    if n != N {
        return Err(Error::MalformedRow {
            line: lineno,
            reason: format!("expected {N} fields, found {n}"),
        });
    }
    Ok(out)
}

/// Parses the base-graph asset text. The RV section is optional; the
/// conventional offsets are used when it is absent.
pub fn parse_ldpc_tables(text: &str) -> Result<LdpcTables> {
    #[derive(PartialEq)]
    enum Section {
        None,
        Graph,
        Rv,
    }
    let mut section = Section::None;
    let mut shifts: HashMap<(BaseGraphId, usize, usize), [Option<i64>; 8]> = HashMap::new();
    let mut rv = HashMap::new();

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if line == BG_HEADER {
            section = Section::Graph;
            continue;
        }
        if line == RV_HEADER {
            section = Section::Rv;
            continue;
        }
        match section {
            Section::None => {
                return Err(Error::MalformedRow {
                    line: lineno,
                    reason: "data before a section header".into(),
                })
            }
            Section::Graph => {
                let [bg, row, col, ils, shift] = parse_fields::<5>(line, lineno)?;
                let bg = u8::try_from(bg)
                    .ok()
                    .and_then(BaseGraphId::from_index)
                    .ok_or_else(|| Error::MalformedRow {
                        line: lineno,
                        reason: format!("unknown base graph {bg}"),
                    })?;
                if row < 0 || col < 0 || !(0..8).contains(&ils) {
                    return Err(Error::MalformedRow {
                        line: lineno,
                        reason: "negative index or set index outside 0..7".into(),
                    });
                }
                if !(-1..=383).contains(&shift) {
                    return Err(Error::ShiftOutOfRange {
                        line: lineno,
                        shift,
                    });
                }
                let slot =
                    &mut shifts.entry((bg, row as usize, col as usize)).or_default()[ils as usize];
                if slot.is_some() {
                    return Err(Error::DuplicateEntry {
                        line: lineno,
                        what: format!("bg{} ({row}, {col}) set {ils}", bg.index()),
                    });
                }
                *slot = Some(shift);
            }
            Section::Rv => {
                let rest = line
                    .strip_prefix("rv,")
                    .ok_or_else(|| Error::MalformedRow {
                        line: lineno,
                        reason: "rv rows must start with the `rv` tag".into(),
                    })?;
                let [bg, rv_index, num, den] = parse_fields::<4>(rest, lineno)?;
                let bg = u8::try_from(bg)
                    .ok()
                    .and_then(BaseGraphId::from_index)
                    .ok_or_else(|| Error::MalformedRow {
                        line: lineno,
                        reason: format!("unknown base graph {bg}"),
                    })?;
                if !(0..4).contains(&rv_index) || num < 0 || den <= 0 {
                    return Err(Error::MalformedRow {
                        line: lineno,
                        reason: "rv index outside 0..3 or bad fraction".into(),
                    });
                }
                if rv
                    .insert((bg, rv_index as usize), (num as usize, den as usize))
                    .is_some()
                {
                    return Err(Error::DuplicateEntry {
                        line: lineno,
                        what: format!("rv{rv_index} for bg{}", bg.index()),
                    });
                }
            }
        }
    }

    let mut per_graph: HashMap<BaseGraphId, Vec<BaseEntry>> = HashMap::new();
    for ((bg, row, col), sets) in shifts {
        let present = sets
            .iter()
            .filter(|s| matches!(s, Some(v) if *v >= 0))
            .count();
        if present == 0 {
            continue;
        }
        if present != 8 {
            return Err(Error::Structure(format!(
                "bg{} ({row}, {col}) is defined for only {present} of 8 lifting sets",
                bg.index()
            )));
        }
        let mut arr = [0u16; 8];
        for (dst, src) in arr.iter_mut().zip(sets) {
            *dst = src.unwrap_or_default() as u16;
        }
        per_graph.entry(bg).or_default().push(BaseEntry {
            row,
            col,
            shifts: arr,
        });
    }
    let bg1 = BaseGraph::new(
        BaseGraphId::Bg1,
        per_graph.remove(&BaseGraphId::Bg1).unwrap_or_default(),
    )?;
    let bg2 = BaseGraph::new(
        BaseGraphId::Bg2,
        per_graph.remove(&BaseGraphId::Bg2).unwrap_or_default(),
    )?;
    let rv = if rv.is_empty() {
        RvTable::default()
    } else {
        RvTable::new(rv)?
    };
    Ok(LdpcTables { bg1, bg2, rv })
}

/// Reads both base graphs from an asset file.
pub fn load_base_graphs(path: &Path) -> Result<(BaseGraph, BaseGraph)> {
    let text =
        std::fs::read_to_string(path).map_err(|_| Error::AssetMissing(path.to_path_buf()))?;
    let t = parse_ldpc_tables(&text)?;
    Ok((t.bg1, t.bg2))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kb_table() {
        assert_eq!(kb_for(BaseGraphId::Bg2, 600), 9);
        assert_eq!(kb_for(BaseGraphId::Bg2, 640), 9);
        assert_eq!(kb_for(BaseGraphId::Bg2, 641), 10);
        assert_eq!(kb_for(BaseGraphId::Bg2, 560), 8);
        assert_eq!(kb_for(BaseGraphId::Bg2, 193), 8);
        assert_eq!(kb_for(BaseGraphId::Bg2, 192), 6);
        assert_eq!(kb_for(BaseGraphId::Bg1, 5), 22);
    }

    #[test]
    fn lifting_selection() {
        assert_eq!(
            select_lifting(400, 10).unwrap(),
            LiftingConfig { zc: 40, ils: 2 }
        );
        assert_eq!(
            select_lifting(1, 22).unwrap(),
            LiftingConfig { zc: 2, ils: 0 }
        );
        assert_eq!(
            select_lifting(8448, 22).unwrap(),
            LiftingConfig { zc: 384, ils: 1 }
        );
        assert!(matches!(
            select_lifting(8449, 22),
            Err(Error::PayloadExceedsLifting { .. })
        ));
    }

    #[test]
    fn lifting_sets_cover_51_distinct_sizes() {
        let mut all: Vec<usize> = LIFTING_SETS
            .iter()
            .flat_map(|s| s.iter().copied())
            .collect();
        all.sort_unstable();
        all.dedup();
        assert_eq!(all.len(), 51);
        assert_eq!((all[0], all[50]), (2, 384));
    }

    #[test]
    fn base_graph_selection() {
        assert_eq!(select_base_graph(200, 0.5), BaseGraphId::Bg2);
        assert_eq!(select_base_graph(3000, 0.2), BaseGraphId::Bg2);
        assert_eq!(select_base_graph(8000, 0.8), BaseGraphId::Bg1);
        assert_eq!(select_base_graph(3000, 0.7), BaseGraphId::Bg1);
        assert_eq!(select_base_graph(3824, 0.67), BaseGraphId::Bg2);
    }

    #[test]
    fn paper_toy_expansion() {
        let base = vec![
            vec![2, -1, 1, 3, 0, -1],
            vec![1, 0, -1, 0, 0, 0],
            vec![-1, 3, 2, 1, -1, 0],
        ];
        let h = ParityCheckMatrix::from_base(&base, 4)
            .unwrap()
            .to_dense()
            .unwrap();
        assert_eq!((h.len(), h[0].len()), (12, 24));
        // Block (0,0) is I shifted right twice: row r has its one at column (r+2) mod 4.
        for r in 0..4 {
            let expected: Vec<u8> = (0..4).map(|c| u8::from(c == (r + 2) % 4)).collect();
            assert_eq!(&h[r][0..4], &expected[..]);
        }
        // Block (0,1) is null, block (1,1) is identity.
        assert!(h[0..4].iter().all(|row| row[4..8].iter().all(|&b| b == 0)));
        for r in 0..4 {
            assert_eq!(h[4 + r][4 + r], 1);
        }
        assert_eq!(h.iter().flatten().filter(|&&b| b == 1).count(), 13 * 4);
    }

    #[test]
    fn shift_wraps_modulo_zc() {
        let a = ParityCheckMatrix::from_base(&[vec![5]], 5)
            .unwrap()
            .to_dense()
            .unwrap();
        let b = ParityCheckMatrix::from_base(&[vec![0]], 5)
            .unwrap()
            .to_dense()
            .unwrap();
        assert_eq!(a, b);
        let c = ParityCheckMatrix::from_base(&[vec![7]], 5)
            .unwrap()
            .to_dense()
            .unwrap();
        for (r, row) in c.iter().enumerate() {
            for (col, &v) in row.iter().enumerate() {
                assert_eq!(v, u8::from(col == (r + 2) % 5));
            }
        }
    }

    #[test]
    fn adjacency_of_small_matrix() {
        let h = vec![
            vec![0, 1, 0, 1, 1, 0, 0, 1],
            vec![1, 1, 1, 0, 0, 1, 0, 0],
            vec![0, 0, 1, 0, 0, 1, 1, 1],
            vec![1, 0, 0, 1, 1, 0, 1, 0],
        ];
        let adj = adjacency(&ParityCheckMatrix::from_dense(&h).unwrap());
        assert_eq!(adj.bn(1), &[0, 1, 2, 5]);
        assert_eq!(adj.cn(0), &[1, 3]);
        assert_eq!(adj.cn(7), &[0, 2]);

        let empty = adjacency(&ParityCheckMatrix::from_dense(&vec![vec![0; 5]; 3]).unwrap());
        assert!((0..3).all(|j| empty.bn(j).is_empty()));
        assert!((0..5).all(|i| empty.cn(i).is_empty()));
    }

    #[test]
    fn dense_bound() {
        let pcm = ParityCheckMatrix::from_base(&[vec![0]], 17).unwrap();
        assert!(matches!(pcm.to_dense(), Err(Error::TestSupportBound(_))));
    }

    fn tiny_asset(extra: &str) -> String {
        format!("{BG_HEADER}\n{extra}")
    }

    #[test]
    fn parse_errors() {
        let shift_hi = tiny_asset("1,0,0,0,384\n");
        assert!(matches!(
            parse_ldpc_tables(&shift_hi),
            Err(Error::ShiftOutOfRange { shift: 384, .. })
        ));
        let dup = tiny_asset("1,0,0,0,5\n1,0,0,0,6\n");
        assert!(matches!(
            parse_ldpc_tables(&dup),
            Err(Error::DuplicateEntry { .. })
        ));
        let bad = tiny_asset("1,0,zero,0,6\n");
        assert!(matches!(
            parse_ldpc_tables(&bad),
            Err(Error::MalformedRow { .. })
        ));
        let short = tiny_asset("1,0,0,6\n");
        assert!(matches!(
            parse_ldpc_tables(&short),
            Err(Error::MalformedRow { .. })
        ));
        assert!(matches!(
            parse_ldpc_tables("1,0,0,0,1\n"),
            Err(Error::MalformedRow { .. })
        ));
        // Structurally empty graphs fail validation.
        assert!(matches!(
            parse_ldpc_tables(&tiny_asset("")),
            Err(Error::Structure(_))
        ));
        assert!(matches!(
            load_base_graphs(Path::new("/nonexistent/bg.csv")),
            Err(Error::AssetMissing(_))
        ));
    }

    #[test]
    fn rv_offsets_default() {
        let t = RvTable::default();
        let zc = 10;
        assert_eq!(t.k0(BaseGraphId::Bg1, 0, 66 * zc, zc), 0);
        assert_eq!(t.k0(BaseGraphId::Bg1, 1, 66 * zc, zc), 17 * zc);
        assert_eq!(t.k0(BaseGraphId::Bg2, 3, 50 * zc, zc), 43 * zc);
    }
}
