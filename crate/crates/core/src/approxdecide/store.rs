//! Sparse store of approximate reachability intervals and the provenance
//! needed to turn them back into a correspondence.

use std::collections::{BTreeSet, HashMap};

use crate::geometry::ParamRange;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Orientation {
    Vertical,
    Horizontal,
}

/// A cell side of the free space diagram.
///
/// `Vertical(i, j)` is `{i} x [j - 1, j]` (vertex `p_i` against edge
/// `Q[j - 1, j]`); `Horizontal(i, j)` is `[i - 1, i] x {j}` (edge `P[i - 1, i]`
/// against vertex `q_j`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntervalKey {
    pub orientation: Orientation,
    pub i: usize,
    pub j: usize,
}

impl IntervalKey {
    pub fn vertical(i: usize, j: usize) -> IntervalKey {
        IntervalKey { orientation: Orientation::Vertical, i, j }
    }

    pub fn horizontal(i: usize, j: usize) -> IntervalKey {
        IntervalKey { orientation: Orientation::Horizontal, i, j }
    }

    /// Parameter range of the side itself.
    pub fn side_domain(&self) -> ParamRange {
        match self.orientation {
            Orientation::Vertical => ParamRange::new((self.j - 1) as f64, self.j as f64),
            Orientation::Horizontal => ParamRange::new((self.i - 1) as f64, self.i as f64),
        }
    }

    /// The point of the parameter rectangle at position `x` along this side.
    pub fn point(&self, x: f64) -> (f64, f64) {
        match self.orientation {
            Orientation::Vertical => (self.i as f64, x),
            Orientation::Horizontal => (x, self.j as f64),
        }
    }

    /// Position of `pt` along this side.
    pub fn coordinate(&self, pt: (f64, f64)) -> f64 {
        match self.orientation {
            Orientation::Vertical => pt.1,
            Orientation::Horizontal => pt.0,
        }
    }

    /// The cell this side is the left or bottom side of, if any.
    pub fn processing_cell(&self, m: usize, n: usize) -> Option<(usize, usize)> {
        match self.orientation {
            Orientation::Vertical => (self.i < m).then_some((self.i + 1, self.j)),
            Orientation::Horizontal => (self.j < n).then_some((self.i, self.j + 1)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    P,
    Q,
}

/// A greedy mapping invocation: `GreedyMappingP(vertex, param)` for side `P`
/// and `GreedyMappingQ(vertex, param)` for side `Q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreedyCall {
    pub side: Side,
    pub vertex: usize,
    pub param: f64,
}

impl GreedyCall {
    pub fn start_point(&self) -> (f64, f64) {
        match self.side {
            Side::P => (self.vertex as f64, self.param),
            Side::Q => (self.param, self.vertex as f64),
        }
    }
}

/// How a record's canonical point is reached from its anchor.
#[derive(Debug, Clone, PartialEq)]
pub enum Source {
    /// The two initial intervals, reached along the diagram boundary from `(1, 1)`.
    Seed,
    /// Designated directly inside one cell; the anchor is the canonical point.
    Direct,
    /// Emission number `emission` of a greedy mapping run; the local path is
    /// regenerated by replaying the run.
    Greedy { call: GreedyCall, emission: usize },
}

/// Certificate that every point of `range` is approximately reachable: follow
/// the predecessor's certificate to `anchor`, then the local path to the
/// canonical point, then one straight in-cell segment.
#[derive(Debug, Clone, PartialEq)]
pub struct ProvenanceRecord {
    pub range: ParamRange,
    pub anchor: Option<(IntervalKey, (f64, f64))>,
    pub source: Source,
    pub seq: usize,
}

#[derive(Debug, Clone)]
pub struct ApproxInterval {
    pub key: IntervalKey,
    pub range: ParamRange,
    pub records: Vec<ProvenanceRecord>,
}

/// Counters for runtime checks of the procedure's structural claims.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StoreDiagnostics {
    /// Designations whose upper endpoint differed from the stored one.
    pub upper_endpoint_mismatches: usize,
    /// Unions that were not intervals and were replaced by their hull.
    pub hull_merges: usize,
    /// Designations targeting a side whose cell was already processed.
    pub order_violations: usize,
}

#[derive(Debug, Clone)]
pub struct IntervalStore {
    m: usize,
    n: usize,
    intervals: HashMap<IntervalKey, ApproxInterval>,
    terminal: Option<ProvenanceRecord>,
    pending: BTreeSet<(usize, usize)>,
    current: Option<(usize, usize)>,
    next_seq: usize,
    pub diagnostics: StoreDiagnostics,
}

impl IntervalStore {
    pub fn new(m: usize, n: usize) -> IntervalStore {
        IntervalStore {
            m,
            n,
            intervals: HashMap::new(),
            terminal: None,
            pending: BTreeSet::new(),
            current: None,
            next_seq: 0,
            diagnostics: StoreDiagnostics::default(),
        }
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty() && self.terminal.is_none()
    }

    pub fn get(&self, key: &IntervalKey) -> Option<&ApproxInterval> {
        self.intervals.get(key)
    }

    pub fn terminal(&self) -> Option<&ProvenanceRecord> {
        self.terminal.as_ref()
    }

    pub fn intervals(&self) -> impl Iterator<Item = &ApproxInterval> {
        self.intervals.values()
    }

    /// Next cell to process in lexicographic order.
    pub(crate) fn pop_cell(&mut self) -> Option<(usize, usize)> {
        let cell = self.pending.pop_first()?;
        self.current = Some(cell);
        Some(cell)
    }

    fn take_seq(&mut self) -> usize {
        self.next_seq += 1;
        self.next_seq - 1
    }

    pub(crate) fn record(&mut self, range: ParamRange, anchor: Option<(IntervalKey, (f64, f64))>, source: Source) -> ProvenanceRecord {
        let seq = self.take_seq();
        ProvenanceRecord { range, anchor, source, seq }
    }

    /// Unions `range` into the interval stored for `key`.
    ///
    /// Every range designated for one side ends at the side's free-interval
    /// maximum, so unions stay intervals; violations are counted and the hull
    /// is stored instead.
    pub fn designate(&mut self, key: IntervalKey, range: ParamRange, record: ProvenanceRecord) {
        debug_assert!(
            key.side_domain().lo <= range.lo && range.hi <= key.side_domain().hi,
            "range {range:?} outside side {key:?}"
        );
        let cell = key.processing_cell(self.m, self.n);
        if let (Some(cur), Some(cell)) = (self.current, cell) {
            if cell <= cur {
                self.diagnostics.order_violations += 1;
            }
        }
        match self.intervals.get_mut(&key) {
            Some(iv) => {
                if iv.range.hi != range.hi {
                    self.diagnostics.upper_endpoint_mismatches += 1;
                }
                if range.hi < iv.range.lo || iv.range.hi < range.lo {
                    self.diagnostics.hull_merges += 1;
                }
                iv.range = iv.range.hull(&range);
                iv.records.push(record);
            }
            None => {
                self.intervals.insert(
                    key,
                    ApproxInterval {
                        key,
                        range,
                        records: vec![record],
                    },
                );
            }
        }
        if let Some(cell) = cell {
            self.pending.insert(cell);
        }
    }

    /// Records that `(m, n)` itself was reached; the first record wins.
    pub(crate) fn designate_terminal(&mut self, record: ProvenanceRecord) {
        if self.terminal.is_none() {
            self.terminal = Some(record);
        }
    }

    /// A record of `key` whose range covers position `x`: smallest anchor
    /// first, then creation order.
    pub fn covering_record(&self, key: &IntervalKey, x: f64) -> Option<&ProvenanceRecord> {
        let iv = self.intervals.get(key)?;
        iv.records
            .iter()
            .filter(|r| r.range.contains(x))
            .min_by(|a, b| {
                let ka = a.anchor.map(|(_, p)| p);
                let kb = b.anchor.map(|(_, p)| p);
                let ord = match (ka, kb) {
                    (None, None) => std::cmp::Ordering::Equal,
                    (None, Some(_)) => std::cmp::Ordering::Less,
                    (Some(_), None) => std::cmp::Ordering::Greater,
                    (Some(x), Some(y)) => x.0.total_cmp(&y.0).then(x.1.total_cmp(&y.1)),
                };
                ord.then(a.seq.cmp(&b.seq))
            })
    }
}
