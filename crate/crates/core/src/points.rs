//! Point sets in objective space and the index-based views over them.
//!
//! A point's identity is its row index. Selectors return [`Subset`]s of
//! indices and clusterings return [`ClusterAssignment`]s of labels; neither
//! copies coordinates.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::path::Path;

use ordered_float::OrderedFloat;

use crate::error::{Error, Result};

/// An ordered collection of `n` points with `m` finite coordinates each,
/// stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    data: Vec<f64>,
    n: usize,
    m: usize,
}

impl PointSet {
    /// Builds a point set from a flat row-major buffer.
    pub fn from_flat(m: usize, data: Vec<f64>) -> Result<Self> {
        if m == 0 {
            return Err(Error::TooFewObjectives { required: 1, found: 0 });
        }
        if !data.len().is_multiple_of(m) {
            return Err(Error::DimensionMismatch {
                expected: m,
                found: data.len() % m,
            });
        }
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                row: pos / m,
                col: pos % m,
            });
        }
        let n = data.len() / m;
        Ok(Self { data, n, m })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let m = rows.first().map(|r| r.as_ref().len()).unwrap_or(0);
        let mut data = Vec::with_capacity(rows.len() * m);
        for row in rows {
            let row = row.as_ref();
            if row.len() != m {
                return Err(Error::DimensionMismatch {
                    expected: m,
                    found: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Self::from_flat(m, data)
    }

    /// An empty set of dimension `m`.
    pub fn empty(m: usize) -> Self {
        Self {
            data: Vec::new(),
            n: 0,
            m,
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Number of objectives.
    pub fn dim(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn point(&self, i: usize) -> &[f64] {
        &self.data[i * self.m..(i + 1) * self.m]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.data.chunks_exact(self.m.max(1)).take(self.n)
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.data
    }

    /// Copies the given rows, in the given order, into a new set.
    pub fn select(&self, indices: &[usize]) -> Result<Self> {
        let mut data = Vec::with_capacity(indices.len() * self.m);
        for &i in indices {
            if i >= self.n {
                return Err(Error::IndexOutOfRange { index: i, n: self.n });
            }
            data.extend_from_slice(self.point(i));
        }
        Ok(Self {
            data,
            n: indices.len(),
            m: self.m,
        })
    }

    /// Reads the `f1,...,fm` CSV format.
    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
        let m = rdr.headers()?.len();
        let mut data = Vec::new();
        for (row, record) in rdr.records().enumerate() {
            let record = record?;
            if record.len() != m {
                return Err(Error::DimensionMismatch {
                    expected: m,
                    found: record.len(),
                });
            }
            for (col, field) in record.iter().enumerate() {
                let v: f64 = field
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("row {}, column {}: `{}`", row + 1, col + 1, field)))?;
                data.push(v);
            }
        }
        Self::from_flat(m, data)
    }

    /// Writes the `f1,...,fm` CSV format with shortest round-trip floats.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut wtr = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(writer);
        wtr.write_record((1..=self.m).map(|j| format!("f{j}")))?;
        for row in self.rows() {
            wtr.write_record(row.iter().map(|v| format!("{v}")))?;
        }
        wtr.flush()?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::read_csv(std::fs::File::open(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        self.write_csv(std::io::BufWriter::new(std::fs::File::create(path)?))
    }
}

/// `k` distinct, ascending indices into a parent set of `n` points.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subset {
    indices: Vec<usize>,
    parent_len: usize,
}

impl Subset {
    pub fn new(mut indices: Vec<usize>, parent_len: usize) -> Result<Self> {
        if indices.is_empty() || indices.len() > parent_len {
            return Err(Error::InvalidK {
                k: indices.len(),
                n: parent_len,
            });
        }
        indices.sort_unstable();
        for w in indices.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateIndex(w[0]));
            }
        }
        if let Some(&last) = indices.last() {
            if last >= parent_len {
                return Err(Error::IndexOutOfRange {
                    index: last,
                    n: parent_len,
                });
            }
        }
        Ok(Self { indices, parent_len })
    }

    /// All indices of a parent set.
    pub fn full(parent_len: usize) -> Result<Self> {
        Self::new((0..parent_len).collect(), parent_len)
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn parent_len(&self) -> usize {
        self.parent_len
    }

    pub fn contains(&self, index: usize) -> bool {
        self.indices.binary_search(&index).is_ok()
    }

    /// Position of `index` within the ascending index list.
    pub fn position(&self, index: usize) -> Option<usize> {
        self.indices.binary_search(&index).ok()
    }
}

/// A labeling of `n` points with cluster ids in `[0, k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterAssignment {
    labels: Vec<usize>,
    k: usize,
}

impl ClusterAssignment {
    pub fn new(labels: Vec<usize>, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidK { k, n: labels.len() });
        }
        if let Some(&label) = labels.iter().find(|&&l| l >= k) {
            return Err(Error::LabelOutOfRange { label, k });
        }
        Ok(Self { labels, k })
    }

    /// Like [`ClusterAssignment::new`] but also rejects empty clusters.
    pub fn complete(labels: Vec<usize>, k: usize) -> Result<Self> {
        let assignment = Self::new(labels, k)?;
        if let Some(c) = assignment.sizes().iter().position(|&s| s == 0) {
            return Err(Error::EmptyCluster(c));
        }
        Ok(assignment)
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &l in &self.labels {
            sizes[l] += 1;
        }
        sizes
    }

    /// Member indices of every cluster, each list ascending.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut members = vec![Vec::new(); self.k];
        for (i, &l) in self.labels.iter().enumerate() {
            members[l].push(i);
        }
        members
    }

    /// Canonical form: clusters relabeled in order of their smallest member.
    pub fn canonical(&self) -> Self {
        let mut map = vec![usize::MAX; self.k];
        let mut next = 0;
        let labels = self
            .labels
            .iter()
            .map(|&l| {
                if map[l] == usize::MAX {
                    map[l] = next;
                    next += 1;
                }
                map[l]
            })
            .collect();
        Self { labels, k: self.k }
    }
}

/// True if `a` dominates `b` under minimization.
#[inline]
pub fn dominates(a: &[f64], b: &[f64]) -> bool {
    let mut strict = false;
    for (x, y) in a.iter().zip(b) {
        if x > y {
            return false;
        }
        if x < y {
            strict = true;
        }
    }
    strict
}

/// Keeps the points not dominated by any other point of the set, in their
/// original order. Duplicates of a nondominated point are all kept.
pub fn nondominated_filter(points: &PointSet) -> Result<PointSet> {
    let keep = nondominated_indices(points)?;
    points.select(&keep)
}

/// Indices (ascending) of the nondominated points.
pub fn nondominated_indices(points: &PointSet) -> Result<Vec<usize>> {
    if points.dim() < 2 {
        return Err(Error::TooFewObjectives {
            required: 2,
            found: points.dim(),
        });
    }
    let n = points.len();
    let mut order: Vec<usize> = (0..n).collect();
    // Any dominator precedes its victim in lexicographic order.
    order.sort_by(|&a, &b| lex_cmp(points.point(a), points.point(b)).then(a.cmp(&b)));

    let groups = duplicate_groups(points, &order);
    let mut keep = vec![false; n];
    match points.dim() {
        2 => sweep_2d(points, &groups, &mut keep),
        3 => staircase_3d(points, &groups, &mut keep),
        _ => archive_scan(points, &groups, &mut keep),
    }
    Ok((0..n).filter(|&i| keep[i]).collect())
}

fn lex_cmp(a: &[f64], b: &[f64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.partial_cmp(y).unwrap_or(Ordering::Equal) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    Ordering::Equal
}

/// Splits the sorted order into runs of identical points.
fn duplicate_groups<'a>(points: &PointSet, order: &'a [usize]) -> Vec<&'a [usize]> {
    let mut groups = Vec::new();
    let mut start = 0;
    for i in 1..=order.len() {
        if i == order.len() || points.point(order[i]) != points.point(order[start]) {
            groups.push(&order[start..i]);
            start = i;
        }
    }
    groups
}

fn sweep_2d(points: &PointSet, groups: &[&[usize]], keep: &mut [bool]) {
    let mut best_f2 = f64::INFINITY;
    for group in groups {
        let p = points.point(group[0]);
        if best_f2 > p[1] {
            for &i in group.iter() {
                keep[i] = true;
            }
            best_f2 = p[1];
        }
    }
}

/// Kung-style sweep over f1 with a 2-D staircase of (f2, f3) minima.
fn staircase_3d(points: &PointSet, groups: &[&[usize]], keep: &mut [bool]) {
    // f2 ascending, f3 strictly descending.
    let mut stairs: BTreeMap<OrderedFloat<f64>, f64> = BTreeMap::new();
    for group in groups {
        let p = points.point(group[0]);
        let (f2, f3) = (p[1] + 0.0, p[2] + 0.0);
        let dominated = stairs
            .range(..=OrderedFloat(f2))
            .next_back()
            .is_some_and(|(_, &g3)| g3 <= f3);
        if dominated {
            continue;
        }
        for &i in group.iter() {
            keep[i] = true;
        }
        let evicted: Vec<OrderedFloat<f64>> = stairs
            .range(OrderedFloat(f2)..)
            .take_while(|(_, &g3)| g3 >= f3)
            .map(|(&key, _)| key)
            .collect();
        for key in evicted {
            stairs.remove(&key);
        }
        stairs.insert(OrderedFloat(f2), f3);
    }
}

fn archive_scan(points: &PointSet, groups: &[&[usize]], keep: &mut [bool]) {
    let mut archive: Vec<usize> = Vec::new();
    for group in groups {
        let p = points.point(group[0]);
        if let Some(pos) = archive.iter().position(|&a| dominates(points.point(a), p)) {
            // Strong dominators tend to reject many later points; keep
            // them near the front of the scan.
            archive[..=pos].rotate_right(1);
            continue;
        }
        for &i in group.iter() {
            keep[i] = true;
        }
        archive.push(group[0]);
    }
}
