//! Which constructions a field of order q supports at given (n, k, d).
//!
//! | construction                 | bound            |
//! |------------------------------|------------------|
//! | repair-by-transfer (rbt)     | n ≤ q + 1        |
//! | complete-graph baseline      | C(n,2) ≤ q + 1   |
//! | product-matrix, PSRS         | n ≤ q            |
//! | product-matrix, Vandermonde  | n ≤ q            |
//! | product-matrix, Cauchy       | n ≤ q + k − d    |
//!
//! The Cauchy construction is only compared by its bound and never built.

use std::fmt;

use regen_core::mbr::{Backend, MbrCode};
use regen_core::rbt::RbtCode;
use regen_core::shah::ShahCode;
use regen_core::Field;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RangeEntry {
    pub construction: &'static str,
    pub bound: &'static str,
    /// Whether (n, k, d) satisfies the bound.
    pub within_bound: bool,
    /// Outcome of actually building the code: `None` if not attempted,
    /// otherwise the error kind on failure.
    pub built: Option<Result<(), &'static str>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RangeReport {
    pub field: Field,
    pub n: usize,
    pub k: usize,
    pub d: usize,
    pub entries: Vec<RangeEntry>,
}

impl RangeReport {
    pub fn entry(&self, construction: &str) -> Option<&RangeEntry> {
        self.entries.iter().find(|e| e.construction == construction)
    }
}

/// The repair-by-transfer rows use d = n − 1 regardless of `d`.
pub fn range_report(field: Field, n: usize, k: usize, d: usize) -> RangeReport {
    let q = field.order() as usize;
    let outcome = |r: regen_core::Result<()>| Some(r.map_err(|e| e.kind()));
    let entries = vec![
        RangeEntry {
            construction: "rbt",
            bound: "n <= q + 1",
            within_bound: n <= q + 1,
            built: outcome(RbtCode::new(field, n, k).map(drop)),
        },
        RangeEntry {
            construction: "shah",
            bound: "C(n,2) <= q + 1",
            within_bound: n * n.saturating_sub(1) / 2 <= q + 1,
            built: outcome(ShahCode::new(field, n, k).map(drop)),
        },
        RangeEntry {
            construction: "mbr-psrs",
            bound: "n <= q",
            within_bound: n <= q,
            built: outcome(MbrCode::new(field, n, k, d, Backend::Psrs).map(drop)),
        },
        RangeEntry {
            construction: "mbr-vdm",
            bound: "n <= q",
            within_bound: n <= q,
            built: outcome(MbrCode::new(field, n, k, d, Backend::Vandermonde).map(drop)),
        },
        RangeEntry {
            construction: "mbr-cauchy",
            bound: "n <= q + k - d",
            within_bound: n + d <= q + k,
            built: None,
        },
    ];
    RangeReport { field, n, k, d, entries }
}

impl fmt::Display for RangeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "q = {}, n = {}, k = {}, d = {}", self.field.order(), self.n, self.k, self.d)?;
        writeln!(f, "{:<12} {:<16} {:<8} built", "code", "bound", "holds")?;
        for e in &self.entries {
            let built = match e.built {
                None => "-".to_string(),
                Some(Ok(())) => "ok".to_string(),
                Some(Err(kind)) => kind.to_string(),
            };
            writeln!(
                f,
                "{:<12} {:<16} {:<8} {}",
                e.construction,
                e.bound,
                if e.within_bound { "yes" } else { "no" },
                built
            )?;
        }
        Ok(())
    }
}
