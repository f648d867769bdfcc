//! The complete-graph repair-by-transfer baseline.
//!
//! B message symbols are encoded with a systematic (C(n,2), B) doubly
//! extended Reed–Solomon code and packet p is stored on both endpoints of
//! the p-th edge of K_n (edges in lexicographic order). Node i stores the
//! packets of its n − 1 incident edges ordered by the other endpoint, so
//! repair copies one packet from every survivor. Any k nodes together hold
//! exactly B distinct packets.

use crate::counter::OpCounter;
use crate::error::{ensure_distinct, Error, Result};
use crate::gf::Field;
use crate::matrix::{extended_vandermonde, FieldMatrix};
use crate::params::CodeParams;
use crate::plan::Fragment;
use crate::rbt::{place_transfers, stored_position};

#[derive(Clone, Debug)]
pub struct ShahCode {
    field: Field,
    params: CodeParams,
    packets: usize,
    /// Systematic generator, C(n,2) × B, identity on top.
    generator: FieldMatrix,
}

/// Index of the edge {i, j} in lexicographic order.
pub fn edge_index(n: usize, i: usize, j: usize) -> usize {
    let (a, b) = if i < j { (i, j) } else { (j, i) };
    a * n - a * (a + 1) / 2 + (b - a - 1)
}

impl ShahCode {
    /// Needs C(n,2) ≤ q + 1.
    pub fn new(field: Field, n: usize, k: usize) -> Result<ShahCode> {
        let params = CodeParams::rbt(n, k)?;
        let packets = n * (n - 1) / 2;
        let scratch = OpCounter::new();
        let ev = extended_vandermonde(field, packets, params.b)?;
        let top: Vec<usize> = (0..params.b).collect();
        let generator = ev.mul(&ev.submatrix_rows(&top)?.inverse(&scratch)?, &scratch)?;
        Ok(ShahCode {
            field,
            params,
            packets,
            generator,
        })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn params(&self) -> CodeParams {
        self.params
    }

    pub fn packet_count(&self) -> usize {
        self.packets
    }

    /// Packet indices stored by `node`, in storage order.
    pub fn node_packets(&self, node: usize) -> Vec<usize> {
        let n = self.params.n;
        (0..n).filter(|&j| j != node).map(|j| edge_index(n, node, j)).collect()
    }

    /// Systematic encoding: the first B packets are the message; the
    /// C(n,2) − B parity packets cost B multiplications each.
    pub fn encode_packets(&self, u: &[u32], ops: &OpCounter) -> Result<Vec<u32>> {
        let b = self.params.b;
        if u.len() != b {
            return Err(Error::WrongMessageLength { expected: b, got: u.len() });
        }
        for &x in u {
            self.field.check(x as u64)?;
        }
        let parity = FieldMatrix::from_fn(self.field, self.packets - b, b, |r, c| self.generator.get(b + r, c));
        let mut out = u.to_vec();
        out.extend(parity.mul_vec(u, ops)?);
        Ok(out)
    }

    pub fn encode(&self, u: &[u32], ops: &OpCounter) -> Result<Vec<Fragment>> {
        let packets = self.encode_packets(u, ops)?;
        Ok((0..self.params.n)
            .map(|i| Fragment::new(i, self.node_packets(i).iter().map(|&p| packets[p]).collect()))
            .collect())
    }

    /// The packet a survivor forwards for `failed`: the one on their shared
    /// edge.
    pub fn helper_symbol(&self, fragment: &Fragment, failed: usize) -> Result<u32> {
        let n = self.params.n;
        if failed >= n {
            return Err(Error::IndexOutOfRange { index: failed, limit: n });
        }
        if fragment.node == failed {
            return Err(Error::ParamsInvalid(format!("node {failed} cannot help repair itself")));
        }
        fragment
            .symbols
            .get(stored_position(fragment.node, failed))
            .copied()
            .ok_or_else(|| Error::DimensionMismatch(format!("fragment of node {} is short", fragment.node)))
    }

    /// Places the n − 1 forwarded packets; no arithmetic.
    pub fn repair(&self, responses: &[(usize, u32)], failed: usize) -> Result<Fragment> {
        Ok(Fragment::new(failed, place_transfers(responses, failed, self.params.n)?))
    }

    /// Collects the B distinct packets held by k nodes and decodes them.
    pub fn reconstruct(&self, fragments: &[Fragment], ops: &OpCounter) -> Result<Vec<u32>> {
        let CodeParams { n, k, b, .. } = self.params;
        if fragments.len() < k {
            return Err(Error::InsufficientSymbols {
                needed: k,
                got: fragments.len(),
            });
        }
        if fragments.len() > k {
            return Err(Error::WrongFragmentCount {
                expected: k,
                got: fragments.len(),
            });
        }
        let nodes: Vec<usize> = fragments.iter().map(|f| f.node).collect();
        ensure_distinct(&nodes, n)?;
        let mut known: Vec<Option<u32>> = vec![None; self.packets];
        for frag in fragments {
            if frag.symbols.len() != n - 1 {
                return Err(Error::DimensionMismatch(format!(
                    "node {} holds {} packets, expected {}",
                    frag.node,
                    frag.symbols.len(),
                    n - 1
                )));
            }
            for (p, &v) in self.node_packets(frag.node).into_iter().zip(&frag.symbols) {
                known[p] = Some(self.field.check(v as u64)?);
            }
        }
        let present: Vec<usize> = (0..self.packets).filter(|&p| known[p].is_some()).collect();
        debug_assert_eq!(present.len(), b);
        let values: Vec<u32> = present.iter().map(|&p| known[p].unwrap()).collect();
        if present.iter().enumerate().all(|(i, &p)| i == p) {
            return Ok(values);
        }
        let sub = self.generator.submatrix_rows(&present)?;
        sub.inverse(ops)?.mul_vec(&values, ops)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::for_each_subset;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn edges_are_a_bijection() {
        for n in 2..12 {
            let mut seen = vec![0; n * (n - 1) / 2];
            for i in 0..n {
                for j in i + 1..n {
                    seen[edge_index(n, i, j)] += 1;
                }
            }
            assert!(seen.iter().all(|&c| c == 1));
        }
    }

    #[test]
    fn k5_layout() {
        let f = Field::binary(4).unwrap();
        let code = ShahCode::new(f, 5, 3).unwrap();
        assert_eq!(code.packet_count(), 10);
        let mut count = [0; 10];
        for i in 0..5 {
            let p = code.node_packets(i);
            assert_eq!(p.len(), 4);
            for x in p {
                count[x] += 1;
            }
        }
        assert!(count.iter().all(|&c| c == 2));
    }

    #[test]
    fn distinct_packets_per_subset() {
        let f = Field::prime(65537).unwrap();
        for n in 2..=8 {
            for k in 1..n {
                let code = ShahCode::new(f, n, k).unwrap();
                for_each_subset(n, k, |s| {
                    let mut all: Vec<usize> = s.iter().flat_map(|&i| code.node_packets(i)).collect();
                    all.sort_unstable();
                    all.dedup();
                    assert_eq!(all.len(), code.params().b);
                    true
                });
            }
        }
    }

    #[test]
    fn round_trips() {
        let f = Field::binary(6).unwrap();
        let code = ShahCode::new(f, 5, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let ops = OpCounter::new();
        for _ in 0..10 {
            let u: Vec<u32> = (0..9).map(|_| rng.gen_range(0..64)).collect();
            let frags = code.encode(&u, &ops).unwrap();
            for_each_subset(5, 3, |s| {
                let sel: Vec<_> = s.iter().map(|&i| frags[i].clone()).collect();
                assert_eq!(code.reconstruct(&sel, &ops).unwrap(), u);
                true
            });
            for failed in 0..5 {
                let responses: Vec<_> = frags
                    .iter()
                    .filter(|fr| fr.node != failed)
                    .map(|fr| (fr.node, code.helper_symbol(fr, failed).unwrap()))
                    .collect();
                assert_eq!(code.repair(&responses, failed).unwrap(), frags[failed]);
            }
        }
    }

    #[test]
    fn field_too_small() {
        let f = Field::binary(3).unwrap();
        assert!(matches!(ShahCode::new(f, 8, 4), Err(Error::FieldTooSmall { .. })));
        assert!(ShahCode::new(f, 4, 2).is_ok());
    }
}
