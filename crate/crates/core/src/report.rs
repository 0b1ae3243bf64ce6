use std::cmp::Ordering;

use serde::Serialize;

use crate::fieldlin::{Scalar, Vector};

/// Default number of witnesses kept in a report.
pub const DEFAULT_WITNESS_CAP: usize = 10;

/// A basis tuple on which an identity fails, with the nonzero defect.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub axiom: &'static str,
    /// Basis indices (and, for loop-algebra checks, degrees) of the failing tuple.
    pub indices: Vec<i64>,
    pub defect: Vector,
}

impl Ord for Witness {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.axiom, &self.indices).cmp(&(other.axiom, &other.indices))
    }
}

impl PartialOrd for Witness {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Serialize for Witness {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let defect: Vec<String> = self.defect.iter().map(Scalar::to_string).collect();
        let mut st = s.serialize_struct("Witness", 3)?;
        st.serialize_field("axiom", self.axiom)?;
        st.serialize_field("indices", &self.indices)?;
        st.serialize_field("defect", &defect)?;
        st.end()
    }
}

/// Outcome of an identity check over basis tuples.
///
/// `passed` holds exactly when `witness_count == 0`. Witnesses are sorted
/// lexicographically by (axiom, indices) and truncated to the cap, so merging
/// partial reports from parallel chunks is order independent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub passed: bool,
    pub witness_count: usize,
    pub witnesses: Vec<Witness>,
}

impl CheckReport {
    pub fn pass() -> CheckReport {
        CheckReport {
            passed: true,
            witness_count: 0,
            witnesses: Vec::new(),
        }
    }

    /// Axiom tags that have at least one stored witness.
    pub fn failed_axioms(&self) -> Vec<&'static str> {
        let mut tags: Vec<&'static str> = self.witnesses.iter().map(|w| w.axiom).collect();
        tags.dedup();
        tags
    }

    /// Conjunction of several reports. Each part keeps its own capped witnesses,
    /// so every failing part stays visible.
    pub fn combine(reports: impl IntoIterator<Item = CheckReport>) -> CheckReport {
        let mut count = 0;
        let mut witnesses = Vec::new();
        for r in reports {
            count += r.witness_count;
            witnesses.extend(r.witnesses);
        }
        witnesses.sort();
        CheckReport {
            passed: count == 0,
            witness_count: count,
            witnesses,
        }
    }
}

/// Accumulates witnesses while a check runs.
#[derive(Clone, Debug)]
pub struct Collector {
    cap: usize,
    count: usize,
    witnesses: Vec<Witness>,
}

impl Collector {
    pub fn new(cap: usize) -> Collector {
        Collector {
            cap,
            count: 0,
            witnesses: Vec::new(),
        }
    }

    /// Records `defect` as a witness when it is nonzero.
    pub fn record(&mut self, axiom: &'static str, indices: Vec<i64>, defect: Vector) {
        if defect.iter().all(Scalar::is_zero) {
            return;
        }
        self.count += 1;
        self.witnesses.push(Witness { axiom, indices, defect });
        if self.witnesses.len() > 4 * self.cap.max(1) {
            self.trim();
        }
    }

    fn trim(&mut self) {
        self.witnesses.sort();
        self.witnesses.truncate(self.cap);
    }

    pub fn merge(mut self, other: Collector) -> Collector {
        self.count += other.count;
        self.witnesses.extend(other.witnesses);
        self.trim();
        self
    }

    pub fn finish(mut self) -> CheckReport {
        self.trim();
        CheckReport {
            passed: self.count == 0,
            witness_count: self.count,
            witnesses: self.witnesses,
        }
    }
}
