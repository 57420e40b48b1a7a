//! The search condition: a black-box predicate over basis indices, realized
//! as a marked-index set. Oracles come from explicit index lists, computed
//! predicates, or record tables (find the record matching a query), and
//! also power the classical linear-scan baseline that the quantum loop
//! is benchmarked against.

use std::collections::BTreeSet;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};

/// Where an oracle's target set came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleSource {
    ExplicitList,
    Predicate,
    RecordTable,
}

/// How record-table queries compare bytes.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum MatchMode {
    #[default]
    Exact,
    AsciiCaseInsensitive,
}

/// The condition `C`: a set of marked basis indices inside an `n`-qubit
/// register. Immutable after construction and freely shared across threads.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleSpec {
    qubits: usize,
    targets: BTreeSet<usize>,
    source: OracleSource,
}

impl OracleSpec {
    /// Oracle marking exactly the given indices. Duplicates collapse
    /// silently; any index `≥ 2^n` is rejected.
    pub fn from_targets<I>(qubits: usize, targets: I) -> Result<Self>
    where
        I: IntoIterator<Item = usize>,
    {
        Self::build(qubits, targets, OracleSource::ExplicitList)
    }

    /// Oracle marking every index the predicate accepts, found by sweeping
    /// all `2^n` indices once at construction time.
    pub fn from_predicate<F>(qubits: usize, predicate: F) -> Result<Self>
    where
        F: Fn(usize) -> bool,
    {
        check_qubits(qubits)?;
        let n = 1usize << qubits;
        let targets: BTreeSet<usize> = (0..n).filter(|&i| predicate(i)).collect();
        Ok(OracleSpec {
            qubits,
            targets,
            source: OracleSource::Predicate,
        })
    }

    /// Oracle marking every record equal to `query`. The register size is
    /// the smallest power of two holding the table; padding indices beyond
    /// the table length never match. A query matching nothing yields an
    /// empty (reportable) target set rather than an error.
    pub fn from_table(table: &RecordTable, query: &[u8]) -> Result<Self> {
        Self::from_table_with_mode(table, query, MatchMode::Exact)
    }

    pub fn from_table_with_mode(
        table: &RecordTable,
        query: &[u8],
        mode: MatchMode,
    ) -> Result<Self> {
        let qubits = table.qubit_count();
        let matches = |record: &[u8]| match mode {
            MatchMode::Exact => record == query,
            MatchMode::AsciiCaseInsensitive => record.eq_ignore_ascii_case(query),
        };
        let targets: BTreeSet<usize> = table
            .records()
            .iter()
            .enumerate()
            .filter(|(_, r)| matches(r))
            .map(|(i, _)| i)
            .collect();
        Ok(OracleSpec {
            qubits,
            targets,
            source: OracleSource::RecordTable,
        })
    }

    fn build<I>(qubits: usize, targets: I, source: OracleSource) -> Result<Self>
    where
        I: IntoIterator<Item = usize>,
    {
        check_qubits(qubits)?;
        let n = 1usize << qubits;
        let mut set = BTreeSet::new();
        for t in targets {
            if t >= n {
                return Err(Error::IndexOutOfRange {
                    index: t,
                    qubits,
                    states: n,
                });
            }
            set.insert(t);
        }
        Ok(OracleSpec {
            qubits,
            targets: set,
            source,
        })
    }

    pub fn qubit_count(&self) -> usize {
        self.qubits
    }

    /// `N = 2^n`.
    pub fn state_count(&self) -> usize {
        1usize << self.qubits
    }

    pub fn targets(&self) -> &BTreeSet<usize> {
        &self.targets
    }

    pub fn target_count(&self) -> usize {
        self.targets.len()
    }

    pub fn source(&self) -> OracleSource {
        self.source
    }

    pub fn is_target(&self, index: usize) -> bool {
        self.targets.contains(&index)
    }

    /// Evaluates the condition: true iff `index` is marked. Pure: the same
    /// oracle and index always produce the same bit.
    pub fn evaluate(&self, index: usize) -> Result<bool> {
        if index >= self.state_count() {
            return Err(Error::IndexOutOfRange {
                index,
                qubits: self.qubits,
                states: self.state_count(),
            });
        }
        Ok(self.targets.contains(&index))
    }

    /// The classical baseline: probes indices in a uniformly random
    /// permutation order, evaluating the condition until a marked index
    /// turns up, and returns the number of evaluations. Never probes the
    /// same index twice. For a single target the expected count is
    /// `(N+1)/2`; the asymptotic claim is `N/2`.
    pub fn classical_linear_search<R: Rng>(&self, rng: &mut R) -> Result<usize> {
        if self.targets.is_empty() {
            return Err(Error::EmptyTargets);
        }
        let mut order: Vec<usize> = (0..self.state_count()).collect();
        order.shuffle(rng);
        for (probes, idx) in order.iter().enumerate() {
            if self.evaluate(*idx)? {
                return Ok(probes + 1);
            }
        }
        unreachable!("non-empty target set must be hit by a full permutation scan");
    }
}

fn check_qubits(qubits: usize) -> Result<()> {
    if qubits == 0 || qubits > crate::statevec::ABSOLUTE_MAX_QUBITS {
        return Err(Error::QubitCount {
            requested: qubits,
            cap: crate::statevec::ABSOLUTE_MAX_QUBITS,
        });
    }
    Ok(())
}

/// An ordered list of opaque byte-string records, e.g. names in a directory.
/// Index = zero-based position in the list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecordTable {
    records: Vec<Vec<u8>>,
}

impl RecordTable {
    pub fn new(records: Vec<Vec<u8>>) -> Result<Self> {
        if records.is_empty() {
            return Err(Error::EmptyTable);
        }
        Ok(RecordTable { records })
    }

    /// Parses the table file format: UTF-8 text, one record per line,
    /// index = zero-based line number.
    pub fn from_text(text: &str) -> Result<Self> {
        let records: Vec<Vec<u8>> = text.lines().map(|l| l.as_bytes().to_vec()).collect();
        Self::new(records)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_text(&text)
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn records(&self) -> &[Vec<u8>] {
        &self.records
    }

    /// Smallest qubit count whose register holds every record:
    /// `max(1, ceil(log2(len)))`.
    pub fn qubit_count(&self) -> usize {
        let needed = self.records.len().next_power_of_two().trailing_zeros() as usize;
        needed.max(1)
    }
}
