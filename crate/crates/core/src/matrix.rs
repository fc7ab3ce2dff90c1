//! Flattened rule storage and the three transition-matrix layouts.
//!
//! * [`SparseMatrix`]: dense `m × q`, one row per rule, one column per neuron.
//! * [`EllMatrix`]: `(max_out_degree + 1) × m`, one column per rule holding
//!   `(neuron, amount)` pairs with the consumption pair on row 0.
//! * [`SynapseMatrix`]: `max_out_degree × q`, one column per neuron holding its
//!   out-neighbours; consumption and production live in the [`RuleVector`].
//!
//! Destinations inside ELL and synapse columns are in ascending neuron order.

use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::model::{NeuronId, RegexKind, SnpSystem, Stats};

/// Column-per-field rule store, indexed by rule.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RuleVector {
    /// Threshold of the regular expression.
    pub en: Vec<i64>,
    /// `true` for exact expressions, `false` for at-least expressions.
    pub ei: Vec<bool>,
    pub c: Vec<i64>,
    /// Produced spikes; zero for forgetting rules. Only the compressed kernel reads it.
    pub p: Vec<i64>,
    pub d: Vec<u64>,
    pub nid: Vec<NeuronId>,
}

impl RuleVector {
    pub fn len(&self) -> usize {
        self.nid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nid.is_empty()
    }

    /// Applicability of rule `r` to a neuron holding `n` spikes, as a single
    /// boolean expression over the two regex fields.
    #[inline]
    pub fn applicable(&self, r: usize, n: i64) -> bool {
        let (en, exact) = (self.en[r], self.ei[r]);
        (!exact && n >= en) || (exact && en == n)
    }
}

/// Offsets of each neuron's rule range inside the [`RuleVector`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NeuronRuleMap {
    pub offsets: Vec<usize>,
}

impl NeuronRuleMap {
    pub fn neuron_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn rules(&self, neuron: NeuronId) -> Range<usize> {
        self.offsets[neuron]..self.offsets[neuron + 1]
    }
}

pub fn build_rule_vector(system: &SnpSystem) -> (RuleVector, NeuronRuleMap) {
    let m = system.rule_count();
    let mut rv = RuleVector {
        en: Vec::with_capacity(m),
        ei: Vec::with_capacity(m),
        c: Vec::with_capacity(m),
        p: Vec::with_capacity(m),
        d: Vec::with_capacity(m),
        nid: Vec::with_capacity(m),
    };
    let mut offsets = vec![0usize; system.neuron_count() + 1];
    for rule in system.rules() {
        rv.en.push(rule.regex.threshold as i64);
        rv.ei.push(rule.regex.kind == RegexKind::Exactly);
        rv.c.push(rule.consumed as i64);
        rv.p.push(rule.produced as i64);
        rv.d.push(rule.delay);
        rv.nid.push(rule.neuron);
        offsets[rule.neuron + 1] += 1;
    }
    for i in 1..offsets.len() {
        offsets[i] += offsets[i - 1];
    }
    (rv, NeuronRuleMap { offsets })
}

/// Uncompressed transition matrix, row-major `m × q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl SparseMatrix {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, rule: usize, neuron: NeuronId) -> i64 {
        self.data[rule * self.cols + neuron]
    }

    pub fn row(&self, rule: usize) -> &[i64] {
        &self.data[rule * self.cols..(rule + 1) * self.cols]
    }

    pub fn element_count(&self) -> usize {
        self.data.len()
    }
}

pub fn build_sparse(system: &SnpSystem) -> SparseMatrix {
    let (q, m) = (system.neuron_count(), system.rule_count());
    let mut data = vec![0i64; m * q];
    for (r, rule) in system.rules().iter().enumerate() {
        let row = &mut data[r * q..(r + 1) * q];
        row[rule.neuron] = -(rule.consumed as i64);
        for to in system.targets(rule.neuron) {
            row[to] = rule.produced as i64;
        }
    }
    SparseMatrix {
        rows: m,
        cols: q,
        data,
    }
}

/// One `(neuron, amount)` cell of an ELL column.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EllEntry {
    pub neuron: NeuronId,
    pub amount: i64,
}

/// Transposed ELL transition matrix, stored column by column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EllMatrix {
    rows: usize,
    cols: usize,
    cells: Vec<Option<EllEntry>>,
}

impl EllMatrix {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, rule: usize) -> Option<EllEntry> {
        self.cells[rule * self.rows + row]
    }

    pub fn column(&self, rule: usize) -> &[Option<EllEntry>] {
        &self.cells[rule * self.rows..(rule + 1) * self.rows]
    }

    /// Visits the non-null cells of column `rule` in row order, stopping at the
    /// first null. Returns the number of rows inspected.
    #[inline]
    pub fn walk_column(&self, rule: usize, mut f: impl FnMut(EllEntry)) -> usize {
        let mut visited = 0;
        for cell in self.column(rule) {
            visited += 1;
            match cell {
                Some(entry) => f(*entry),
                None => break,
            }
        }
        visited
    }
}

pub fn build_ell(system: &SnpSystem) -> EllMatrix {
    let rows = system.stats().z_ell;
    let cols = system.rule_count();
    let mut cells = vec![None; rows * cols];
    for (r, rule) in system.rules().iter().enumerate() {
        let column = &mut cells[r * rows..(r + 1) * rows];
        column[0] = Some(EllEntry {
            neuron: rule.neuron,
            amount: -(rule.consumed as i64),
        });
        if rule.is_forgetting() {
            continue;
        }
        for (slot, to) in column[1..].iter_mut().zip(system.targets(rule.neuron)) {
            *slot = Some(EllEntry {
                neuron: to,
                amount: rule.produced as i64,
            });
        }
    }
    EllMatrix { rows, cols, cells }
}

/// Synapse-only matrix used by the compressed format.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SynapseMatrix {
    rows: usize,
    cols: usize,
    cells: Vec<Option<NeuronId>>,
}

impl SynapseMatrix {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, neuron: NeuronId) -> Option<NeuronId> {
        self.cells[neuron * self.rows + row]
    }

    pub fn column(&self, neuron: NeuronId) -> &[Option<NeuronId>] {
        &self.cells[neuron * self.rows..(neuron + 1) * self.rows]
    }
}

pub fn build_compressed(system: &SnpSystem) -> SynapseMatrix {
    let rows = system.stats().z_compressed;
    let cols = system.neuron_count();
    let mut cells = vec![None; rows * cols];
    for i in 0..cols {
        for (slot, to) in cells[i * rows..(i + 1) * rows]
            .iter_mut()
            .zip(system.targets(i))
        {
            *slot = Some(to);
        }
    }
    SynapseMatrix { rows, cols, cells }
}

/// The three matrix layouts whose storage can be accounted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StorageFormat {
    Sparse,
    Ell,
    Compressed,
}

impl StorageFormat {
    pub const ALL: [StorageFormat; 3] = [
        StorageFormat::Sparse,
        StorageFormat::Ell,
        StorageFormat::Compressed,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StorageFormat::Sparse => "sparse",
            StorageFormat::Ell => "ell",
            StorageFormat::Compressed => "compressed",
        }
    }
}

impl fmt::Display for StorageFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StorageFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "sparse" => Ok(StorageFormat::Sparse),
            "ell" => Ok(StorageFormat::Ell),
            "compressed" => Ok(StorageFormat::Compressed),
            other => Err(format!(
                "unknown storage format `{other}` (expected sparse, ell or compressed)"
            )),
        }
    }
}

/// Element counts split into the transition-matrix part and everything else
/// (rule vector, configuration, delays and spiking vectors, neuron-rule map).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StorageCount {
    pub matrix: u128,
    pub vectors: u128,
}

impl StorageCount {
    pub fn total(&self) -> u128 {
        self.matrix + self.vectors
    }

    pub fn bytes(&self, widths: ElementWidths) -> u128 {
        self.matrix * widths.matrix as u128 + self.vectors * widths.vector as u128
    }
}

/// Declared byte widths used to turn element counts into a memory estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ElementWidths {
    pub matrix: u32,
    pub vector: u32,
}

impl Default for ElementWidths {
    fn default() -> Self {
        ElementWidths {
            matrix: 4,
            vector: 8,
        }
    }
}

/// Abstract element count of `format` for a system with the given stats.
///
/// * Sparse: `m·q + 3m + 2q + 1`
/// * ELL: `m·(2z + 5) + 2q + 1`, with `z` the maximum out-degree; the
///   `2m(z + 1)` pair slots are the matrix part.
/// * Compressed: `q·(z + 3) + 4m + 1`, with `z` the maximum out-degree.
pub fn storage_count(format: StorageFormat, stats: &Stats) -> StorageCount {
    let q = stats.q as u128;
    let m = stats.m as u128;
    let z = stats.max_out_degree as u128;
    match format {
        StorageFormat::Sparse => StorageCount {
            matrix: m * q,
            vectors: 3 * m + 2 * q + 1,
        },
        StorageFormat::Ell => StorageCount {
            matrix: 2 * m * (z + 1),
            vectors: 3 * m + 2 * q + 1,
        },
        StorageFormat::Compressed => StorageCount {
            matrix: q * z,
            vectors: 3 * q + 4 * m + 1,
        },
    }
}

pub fn storage_elements(format: StorageFormat, system: &SnpSystem) -> u128 {
    storage_count(format, &system.stats()).total()
}
