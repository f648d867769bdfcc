//! Fragments and download plans shared by the codecs.

use crate::error::{Error, Result};

/// One node's stored symbols.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fragment {
    /// Zero-based node index.
    pub node: usize,
    pub symbols: Vec<u32>,
}

impl Fragment {
    pub fn new(node: usize, symbols: Vec<u32>) -> Self {
        Fragment { node, symbols }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Scheme {
    /// Every connected node sends its whole fragment.
    Full,
    /// Repair-by-transfer balanced partial download.
    Balanced,
    /// Δ part plus the lower triangle of the Φ part, solved forward.
    Lower,
    /// Δ part plus the upper triangle of the Φ part, solved backward.
    Upper,
    /// Upper-triangle download on a non-systematic Vandermonde code,
    /// solved backward by substitution.
    Gong,
}

impl Scheme {
    pub fn name(&self) -> &'static str {
        match self {
            Scheme::Full => "full",
            Scheme::Balanced => "balanced",
            Scheme::Lower => "lower",
            Scheme::Upper => "upper",
            Scheme::Gong => "gong",
        }
    }
}

/// Which stored symbols each connected node sends to the data collector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DownloadPlan {
    pub scheme: Scheme,
    /// Node indices in slot order.
    pub connected: Vec<usize>,
    /// `order[slot]` is the row of the collector's matrix the slot's
    /// fragment occupies.
    pub order: Vec<usize>,
    /// Positions within each slot's stored fragment, in transmission order.
    pub positions: Vec<Vec<usize>>,
}

impl DownloadPlan {
    pub fn total_symbols(&self) -> usize {
        self.positions.iter().map(Vec::len).sum()
    }

    /// Symbols sent by each slot.
    pub fn per_node_counts(&self) -> Vec<usize> {
        self.positions.iter().map(Vec::len).collect()
    }

    /// Cuts the planned symbols out of the connected nodes' fragments.
    pub fn extract(&self, fragments: &[Fragment]) -> Result<Vec<Vec<u32>>> {
        self.connected
            .iter()
            .zip(&self.positions)
            .map(|(&node, pos)| {
                let frag = fragments
                    .iter()
                    .find(|f| f.node == node)
                    .ok_or_else(|| Error::PlanPayloadMismatch(format!("no fragment for node {node}")))?;
                pos.iter()
                    .map(|&p| {
                        frag.symbols.get(p).copied().ok_or_else(|| {
                            Error::PlanPayloadMismatch(format!("node {node} has no position {p}"))
                        })
                    })
                    .collect()
            })
            .collect()
    }

    pub(crate) fn check_payloads(&self, payloads: &[Vec<u32>]) -> Result<()> {
        if payloads.len() != self.positions.len() {
            return Err(Error::PlanPayloadMismatch(format!(
                "{} payloads for {} nodes",
                payloads.len(),
                self.positions.len()
            )));
        }
        for (slot, (p, pos)) in payloads.iter().zip(&self.positions).enumerate() {
            if p.len() != pos.len() {
                return Err(Error::PlanPayloadMismatch(format!(
                    "slot {slot} sent {} symbols, plan has {}",
                    p.len(),
                    pos.len()
                )));
            }
        }
        Ok(())
    }
}
