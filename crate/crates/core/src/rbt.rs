//! Repair-by-transfer codes with d = n − 1.
//!
//! The message fills a skew-symmetric n × n matrix M̂ = [[Ŝ, T̂], [−T̂ᵗ, 0]].
//! With the invertible encoding matrix Ψ̂ = [Φ̂ Δ̂], Δ̂ = [0; I], the
//! congruence Ĉ = Ψ̂M̂Ψ̂ᵗ is again skew-symmetric; negating its strict lower
//! triangle gives a symmetric Č with a zero diagonal. Node i stores row i of
//! Č without the diagonal zero, so every off-diagonal symbol lives on
//! exactly two nodes and a lost row is re-assembled from the matching column
//! held by the survivors, with no arithmetic at all.

use crate::counter::OpCounter;
use crate::error::{ensure_distinct, Error, Result};
use crate::gf::Field;
use crate::matrix::{all_row_subsets_invertible, congruence, extended_vandermonde, FieldMatrix, SkewSymmetric};
use crate::params::CodeParams;
use crate::plan::{DownloadPlan, Fragment, Scheme};

/// Largest n for which construction checks every k-row subset of Φ̂.
const EXHAUSTIVE_CHECK_LIMIT: usize = 10;

/// Position of column `col` within the stored row of `node`.
pub fn stored_position(node: usize, col: usize) -> usize {
    debug_assert_ne!(node, col);
    if col < node {
        col
    } else {
        col - 1
    }
}

/// Column of Č held at stored position `pos` of `node`.
pub fn column_of(node: usize, pos: usize) -> usize {
    if pos < node {
        pos
    } else {
        pos + 1
    }
}

/// Which of two connected slots (1-based) omits their shared symbol during
/// balanced partial download: the smaller slot when j + l is even, the
/// larger one otherwise.
pub fn decision(j: usize, l: usize) -> usize {
    let (lo, hi) = if j < l { (j, l) } else { (l, j) };
    if (lo + hi) % 2 == 0 {
        lo
    } else {
        hi
    }
}

/// Negates the strict lower triangle. Applying it twice is the identity;
/// in characteristic two it is the identity and costs nothing.
pub fn sign_fix(m: &FieldMatrix, ops: &OpCounter) -> FieldMatrix {
    let f = m.field();
    if f.is_char2() {
        return m.clone();
    }
    let mut out = m.clone();
    let mut count = 0u64;
    for r in 0..m.rows() {
        for c in 0..r.min(m.cols()) {
            out.set(r, c, f.neg(m.get(r, c)));
            count += 1;
        }
    }
    ops.adds(count);
    out
}

/// The encoded n × n matrix Č.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RbtCodeword {
    check: FieldMatrix,
}

impl RbtCodeword {
    pub fn matrix(&self) -> &FieldMatrix {
        &self.check
    }

    /// Row `node` of Č without its diagonal zero.
    pub fn fragment(&self, node: usize) -> Fragment {
        let row = self.check.row(node);
        let symbols = row
            .iter()
            .enumerate()
            .filter(|&(c, _)| c != node)
            .map(|(_, &v)| v)
            .collect();
        Fragment::new(node, symbols)
    }

    pub fn fragments(&self) -> Vec<Fragment> {
        (0..self.check.rows()).map(|i| self.fragment(i)).collect()
    }
}

#[derive(Clone, Debug)]
pub struct RbtCode {
    field: Field,
    params: CodeParams,
    systematic: bool,
    psi: FieldMatrix,
    psi_t_inv: FieldMatrix,
}

impl RbtCode {
    /// Φ̂ is the doubly extended Vandermonde matrix; n ≤ q + 1.
    pub fn new(field: Field, n: usize, k: usize) -> Result<RbtCode> {
        Self::build(field, n, k, false)
    }

    /// Φ̂ = [I_k; Φ̌] is the systematic form of the same code, so the first
    /// k nodes store the source symbols verbatim.
    pub fn systematic(field: Field, n: usize, k: usize) -> Result<RbtCode> {
        Self::build(field, n, k, true)
    }

    fn build(field: Field, n: usize, k: usize, systematic: bool) -> Result<RbtCode> {
        let params = CodeParams::rbt(n, k)?;
        let scratch = OpCounter::new();
        let ev = extended_vandermonde(field, n, k)?;
        let phi = if systematic {
            let top: Vec<usize> = (0..k).collect();
            ev.mul(&ev.submatrix_rows(&top)?.inverse(&scratch)?, &scratch)?
        } else {
            ev
        };
        if n <= EXHAUSTIVE_CHECK_LIMIT && !all_row_subsets_invertible(&phi, k) {
            return Err(Error::SingularMatrix);
        }
        let delta = FieldMatrix::from_fn(field, n, n - k, |r, c| u32::from(r == k + c));
        let psi = phi.hstack(&delta)?;
        let psi_t_inv = psi.transpose().inverse(&scratch)?;
        Ok(RbtCode {
            field,
            params,
            systematic,
            psi,
            psi_t_inv,
        })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn params(&self) -> CodeParams {
        self.params
    }

    pub fn is_systematic(&self) -> bool {
        self.systematic
    }

    /// Ψ̂ = [Φ̂ Δ̂].
    pub fn encoding_matrix(&self) -> &FieldMatrix {
        &self.psi
    }

    /// Φ̌: rows k..n of Φ̂.
    pub fn parity_block(&self) -> FieldMatrix {
        let (n, k) = (self.params.n, self.params.k);
        FieldMatrix::from_fn(self.field, n - k, k, |r, c| self.psi.get(k + r, c))
    }

    /// M̂ from B symbols, row by row over the strict upper triangle of the
    /// first k rows (Ŝ and T̂ interleaved per row).
    pub fn build_message(&self, u: &[u32]) -> Result<SkewSymmetric> {
        let CodeParams { n, k, b, .. } = self.params;
        if u.len() != b {
            return Err(Error::WrongMessageLength { expected: b, got: u.len() });
        }
        let f = self.field;
        let mut m = FieldMatrix::zeros(f, n, n);
        let mut it = u.iter();
        for i in 0..k {
            for j in i + 1..n {
                let v = f.check(*it.next().expect("length checked") as u64)?;
                m.set(i, j, v);
                m.set(j, i, f.neg(v));
            }
        }
        SkewSymmetric::try_from(m)
    }

    /// Č = signfix(Ψ̂ M̂ Ψ̂ᵗ).
    pub fn encode(&self, u: &[u32], ops: &OpCounter) -> Result<RbtCodeword> {
        let m = self.build_message(u)?;
        let c_hat = congruence(&self.psi, m.as_matrix(), ops)?;
        Ok(RbtCodeword {
            check: sign_fix(&c_hat, ops),
        })
    }

    /// Systematic encoding of B source symbols laid out over the strict
    /// upper triangle of the k × n source block U.
    pub fn encode_systematic(&self, source: &[u32], ops: &OpCounter) -> Result<RbtCodeword> {
        let u = self.source_block(source)?;
        self.encode_systematic_block(&u, ops)
    }

    fn source_block(&self, source: &[u32]) -> Result<FieldMatrix> {
        let CodeParams { n, k, b, .. } = self.params;
        if source.len() != b {
            return Err(Error::WrongMessageLength {
                expected: b,
                got: source.len(),
            });
        }
        let f = self.field;
        let mut u = FieldMatrix::zeros(f, k, n);
        let mut it = source.iter();
        for i in 0..k {
            for j in i + 1..n {
                let v = f.check(*it.next().expect("length checked") as u64)?;
                u.set(i, j, v);
                if j < k {
                    u.set(j, i, f.neg(v));
                }
            }
        }
        Ok(u)
    }

    /// Ĉ = [[U_L, U_R], [−U_Rᵗ, V]] with V = Φ̌U_R − U_RᵗΦ̌ᵗ − Φ̌U_LΦ̌ᵗ,
    /// computing only the strict upper triangle of the skew-symmetric V.
    pub fn encode_systematic_block(&self, u: &FieldMatrix, ops: &OpCounter) -> Result<RbtCodeword> {
        let CodeParams { n, k, .. } = self.params;
        if !self.systematic {
            return Err(Error::ParamsInvalid("systematic encoding needs a systematic code".into()));
        }
        if u.rows() != k || u.cols() != n {
            return Err(Error::DimensionMismatch(format!(
                "source block must be {k}x{n}, got {}x{}",
                u.rows(),
                u.cols()
            )));
        }
        let u_left = u.column_block(0, k);
        if !u_left.is_skew_symmetric() {
            return Err(Error::NotSkewSymmetric);
        }
        let u_right = u.column_block(k, n);
        let f = self.field;
        let parity = self.parity_block();
        let p = parity.mul(&u_right, ops)?;
        let q = parity.mul(&u_left, ops)?;
        let r = n - k;
        let mut c_hat = FieldMatrix::zeros(f, n, n);
        for i in 0..k {
            for j in 0..n {
                c_hat.set(i, j, u.get(i, j));
            }
            for j in 0..r {
                c_hat.set(k + j, i, f.neg(u_right.get(i, j)));
            }
        }
        ops.adds((k * r) as u64);
        for i in 0..r {
            for j in i + 1..r {
                let mut v = f.sub(p.get(i, j), p.get(j, i));
                for t in 0..k {
                    v = f.sub(v, f.mul(q.get(i, t), parity.get(j, t)));
                }
                c_hat.set(k + i, k + j, v);
                c_hat.set(k + j, k + i, f.neg(v));
            }
        }
        let pairs = (r * r.saturating_sub(1) / 2) as u64;
        ops.muls(pairs * k as u64);
        ops.adds(pairs * (k as u64 + 2));
        Ok(RbtCodeword {
            check: sign_fix(&c_hat, ops),
        })
    }

    /// What a helper sends to rebuild `failed`: its stored copy of the
    /// shared symbol.
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

    /// Places the n − 1 received (helper, symbol) pairs; no arithmetic.
    pub fn repair(&self, responses: &[(usize, u32)], failed: usize) -> Result<Fragment> {
        let n = self.params.n;
        let slots = place_transfers(responses, failed, n)?;
        Ok(Fragment::new(failed, slots))
    }

    /// Full download from k nodes. Returns the B symbols in the order
    /// accepted by [`Self::encode`], or the source symbols for a
    /// systematic code.
    pub fn reconstruct_full(&self, fragments: &[Fragment], ops: &OpCounter) -> Result<Vec<u32>> {
        self.check_fragments(fragments)?;
        if self.systematic && fragments.iter().all(|f| f.node < self.params.k) {
            return Ok(self.read_source(fragments));
        }
        self.reconstruct_by_solving(fragments, ops)
    }

    /// Like [`Self::reconstruct_full`] but never takes the systematic
    /// shortcut.
    pub fn reconstruct_by_solving(&self, fragments: &[Fragment], ops: &OpCounter) -> Result<Vec<u32>> {
        self.check_fragments(fragments)?;
        let (s, t) = self.solve(fragments, ops)?;
        let CodeParams { n, k, .. } = self.params;
        let upper = if self.systematic {
            // U_L = Ŝ, U_R = ŜΦ̌ᵗ + T̂
            let right = s.mul(&self.parity_block().transpose(), ops)?.add(&t, ops)?;
            s.hstack(&right)?
        } else {
            s.hstack(&t)?
        };
        let mut out = Vec::with_capacity(self.params.b);
        for i in 0..k {
            out.extend_from_slice(&upper.row(i)[i + 1..n]);
        }
        Ok(out)
    }

    fn read_source(&self, fragments: &[Fragment]) -> Vec<u32> {
        let CodeParams { n, k, b, .. } = self.params;
        let mut out = Vec::with_capacity(b);
        for i in 0..k {
            let frag = fragments.iter().find(|f| f.node == i).expect("all systematic nodes present");
            for j in i + 1..n {
                out.push(frag.symbols[stored_position(i, j)]);
            }
        }
        out
    }

    fn check_fragments(&self, fragments: &[Fragment]) -> Result<()> {
        let CodeParams { n, k, .. } = self.params;
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
        for f in fragments {
            if f.symbols.len() != n - 1 {
                return Err(Error::DimensionMismatch(format!(
                    "node {} holds {} symbols, expected {}",
                    f.node,
                    f.symbols.len(),
                    n - 1
                )));
            }
            for &v in &f.symbols {
                self.field.check(v as u64)?;
            }
        }
        Ok(())
    }

    /// Returns (Ŝ, T̂) from k full rows.
    fn solve(&self, fragments: &[Fragment], ops: &OpCounter) -> Result<(FieldMatrix, FieldMatrix)> {
        let CodeParams { n, k, .. } = self.params;
        let f = self.field;
        let mut c_dc = FieldMatrix::zeros(f, k, n);
        for (r, frag) in fragments.iter().enumerate() {
            for (p, &v) in frag.symbols.iter().enumerate() {
                c_dc.set(r, column_of(frag.node, p), v);
            }
        }
        // Undo the sign fix: entries left of the diagonal were negated.
        if !f.is_char2() {
            for (r, frag) in fragments.iter().enumerate() {
                for c in 0..frag.node {
                    c_dc.set(r, c, f.neg(c_dc.get(r, c)));
                }
                ops.adds(frag.node as u64);
            }
        }
        let d_dc = c_dc.mul(&self.psi_t_inv, ops)?;
        let nodes: Vec<usize> = fragments.iter().map(|f| f.node).collect();
        let psi_dc = self.psi.submatrix_rows(&nodes)?;
        let phi_inv = psi_dc.column_block(0, k).inverse(ops)?;
        let delta_dc = psi_dc.column_block(k, n);
        let t = phi_inv.mul(&d_dc.column_block(k, n), ops)?;
        let rhs = d_dc.column_block(0, k).add(&delta_dc.mul(&t.transpose(), ops)?, ops)?;
        let s = phi_inv.mul(&rhs, ops)?;
        Ok((s, t))
    }

    /// Balanced partial download from the k `connected` nodes (in slot
    /// order): of every pair of slots exactly one sends the shared symbol.
    pub fn partial_plan(&self, connected: &[usize]) -> Result<DownloadPlan> {
        let CodeParams { n, k, .. } = self.params;
        ensure_distinct(connected, n)?;
        if connected.len() < k {
            return Err(Error::InsufficientSymbols {
                needed: k,
                got: connected.len(),
            });
        }
        if connected.len() > k {
            return Err(Error::WrongFragmentCount {
                expected: k,
                got: connected.len(),
            });
        }
        let positions = connected
            .iter()
            .enumerate()
            .map(|(j, &node)| {
                (0..n)
                    .filter(|&c| c != node)
                    .filter(|&c| match connected.iter().position(|&x| x == c) {
                        Some(l) => decision(j + 1, l + 1) != j + 1,
                        None => true,
                    })
                    .map(|c| stored_position(node, c))
                    .collect()
            })
            .collect();
        Ok(DownloadPlan {
            scheme: Scheme::Balanced,
            connected: connected.to_vec(),
            order: (0..k).collect(),
            positions,
        })
    }

    /// Rebuilds the k full rows from a balanced download using the
    /// symmetry of Č, then reconstructs as from a full download.
    pub fn reconstruct_partial(&self, plan: &DownloadPlan, payloads: &[Vec<u32>], ops: &OpCounter) -> Result<Vec<u32>> {
        if plan.scheme != Scheme::Balanced {
            return Err(Error::PlanPayloadMismatch(format!(
                "{} plan given to the balanced decoder",
                plan.scheme.name()
            )));
        }
        plan.check_payloads(payloads)?;
        let n = self.params.n;
        ensure_distinct(&plan.connected, n)?;
        let mut rows: Vec<Vec<Option<u32>>> = vec![vec![None; n - 1]; plan.connected.len()];
        for (slot, (pos, data)) in plan.positions.iter().zip(payloads).enumerate() {
            for (&p, &v) in pos.iter().zip(data) {
                let cell = rows[slot]
                    .get_mut(p)
                    .ok_or_else(|| Error::PlanPayloadMismatch(format!("position {p} out of range")))?;
                *cell = Some(v);
            }
        }
        let snapshot = rows.clone();
        let mut fragments = Vec::with_capacity(rows.len());
        for (slot, row) in rows.into_iter().enumerate() {
            let node = plan.connected[slot];
            let symbols = row
                .into_iter()
                .enumerate()
                .map(|(p, v)| match v {
                    Some(v) => Ok(v),
                    None => {
                        let col = column_of(node, p);
                        plan.connected
                            .iter()
                            .position(|&x| x == col)
                            .and_then(|other| snapshot[other][stored_position(col, node)])
                            .ok_or_else(|| {
                                Error::PlanPayloadMismatch(format!("symbol ({node}, {col}) was not downloaded"))
                            })
                    }
                })
                .collect::<Result<Vec<u32>>>()?;
            fragments.push(Fragment::new(node, symbols));
        }
        self.reconstruct_full(&fragments, ops)
    }
}

/// Arranges transfer-only repair responses into the failed node's row.
pub(crate) fn place_transfers(responses: &[(usize, u32)], failed: usize, n: usize) -> Result<Vec<u32>> {
    if failed >= n {
        return Err(Error::IndexOutOfRange { index: failed, limit: n });
    }
    let mut slots: Vec<Option<u32>> = vec![None; n - 1];
    for &(helper, v) in responses {
        if helper >= n {
            return Err(Error::IndexOutOfRange { index: helper, limit: n });
        }
        if helper == failed {
            return Err(Error::ParamsInvalid(format!("node {failed} cannot help repair itself")));
        }
        let slot = &mut slots[stored_position(failed, helper)];
        if slot.is_some() {
            return Err(Error::DuplicateHelper(helper));
        }
        *slot = Some(v);
    }
    slots
        .into_iter()
        .enumerate()
        .map(|(p, v)| v.ok_or(Error::MissingHelper(column_of(failed, p))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::for_each_subset;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random(rng: &mut ChaCha8Rng, f: &Field, len: usize) -> Vec<u32> {
        (0..len).map(|_| rng.gen_range(0..f.order())).collect()
    }

    #[test]
    fn gf4_encoding_matrix() {
        let f = Field::binary(2).unwrap();
        let code = RbtCode::new(f, 5, 3).unwrap();
        // ω = 2, ω² = 3, ω⁴ = ω
        let expected = FieldMatrix::from_rows(
            f,
            &[
                [1, 0, 0, 0, 0],
                [1, 1, 1, 0, 0],
                [1, 2, 3, 0, 0],
                [1, 3, 2, 1, 0],
                [0, 0, 1, 0, 1],
            ],
        )
        .unwrap();
        assert_eq!(code.encoding_matrix(), &expected);
    }

    #[test]
    fn message_layout() {
        let f = Field::prime(11).unwrap();
        let code = RbtCode::new(f, 5, 3).unwrap();
        let u: Vec<u32> = (1..=9).collect();
        let m = code.build_message(&u).unwrap().into_inner();
        let neg = |x: u32| f.neg(x);
        let expected = FieldMatrix::from_rows(
            f,
            &[
                [0, 1, 2, 3, 4],
                [neg(1), 0, 5, 6, 7],
                [neg(2), neg(5), 0, 8, 9],
                [neg(3), neg(6), neg(8), 0, 0],
                [neg(4), neg(7), neg(9), 0, 0],
            ],
        )
        .unwrap();
        assert_eq!(m, expected);
        assert_eq!(
            code.build_message(&u[..8]),
            Err(Error::WrongMessageLength { expected: 9, got: 8 })
        );
    }

    #[test]
    fn sign_fix_is_an_involution() {
        let f = Field::prime(7).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let ops = OpCounter::new();
        let m = FieldMatrix::from_fn(f, 5, 5, |_, _| rng.gen_range(0..7));
        assert_eq!(sign_fix(&sign_fix(&m, &ops), &ops), m);
        let g = Field::binary(2).unwrap();
        let m = FieldMatrix::from_fn(g, 5, 5, |r, c| ((r + c) % 4) as u32);
        let (out, cost) = ops.measure(|| sign_fix(&m, &ops));
        assert_eq!(out, m);
        assert!(cost.is_zero());
    }

    #[test]
    fn codeword_is_symmetric() {
        let f = Field::prime(7).unwrap();
        let code = RbtCode::new(f, 6, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let ops = OpCounter::new();
        for _ in 0..50 {
            let u = random(&mut rng, &f, code.params().b);
            let m = code.encode(&u, &ops).unwrap().matrix().clone();
            assert!(m.is_symmetric());
            assert!((0..6).all(|i| m.get(i, i) == 0));
        }
        let zero = code.encode(&[0; 12], &ops).unwrap();
        assert!(zero.fragments().iter().all(|fr| fr.symbols.iter().all(|&x| x == 0)));
    }

    #[test]
    fn exhaustive_repair_and_reconstruction() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let ops = OpCounter::new();
        for f in [Field::prime(7).unwrap(), Field::binary(3).unwrap()] {
            for n in 2..=8 {
                for k in 1..n {
                    for code in [RbtCode::new(f, n, k).unwrap(), RbtCode::systematic(f, n, k).unwrap()] {
                        let u = random(&mut rng, &f, code.params().b);
                        let cw = if code.is_systematic() {
                            code.encode_systematic(&u, &ops).unwrap()
                        } else {
                            code.encode(&u, &ops).unwrap()
                        };
                        let frags = cw.fragments();
                        for failed in 0..n {
                            let responses: Vec<_> = frags
                                .iter()
                                .filter(|fr| fr.node != failed)
                                .map(|fr| (fr.node, code.helper_symbol(fr, failed).unwrap()))
                                .collect();
                            assert_eq!(code.repair(&responses, failed).unwrap(), frags[failed]);
                        }
                        for_each_subset(n, k, |s| {
                            let sel: Vec<_> = s.iter().map(|&i| frags[i].clone()).collect();
                            assert_eq!(code.reconstruct_full(&sel, &ops).unwrap(), u);
                            let plan = code.partial_plan(s).unwrap();
                            assert_eq!(plan.total_symbols(), code.params().b);
                            let payloads = plan.extract(&frags).unwrap();
                            assert_eq!(code.reconstruct_partial(&plan, &payloads, &ops).unwrap(), u);
                            true
                        });
                    }
                }
            }
        }
    }

    #[test]
    fn systematic_matches_remapped_message() {
        let f = Field::prime(7).unwrap();
        let (n, k) = (6, 3);
        let code = RbtCode::systematic(f, n, k).unwrap();
        let parity_t = code.parity_block().transpose();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let ops = OpCounter::new();
        for _ in 0..50 {
            let src = random(&mut rng, &f, code.params().b);
            let block = code.source_block(&src).unwrap();
            let s = block.column_block(0, k);
            let t = block.column_block(k, n).sub(&s.mul(&parity_t, &ops).unwrap(), &ops).unwrap();
            let mut remapped = Vec::new();
            for i in 0..k {
                remapped.extend_from_slice(&s.row(i)[i + 1..]);
                remapped.extend_from_slice(t.row(i));
            }
            let sys = code.encode_systematic(&src, &ops).unwrap();
            assert_eq!(sys, code.encode(&remapped, &ops).unwrap());
            let m = sys.matrix();
            let mut it = src.iter();
            for i in 0..k {
                for j in i + 1..n {
                    assert_eq!(m.get(i, j), *it.next().unwrap());
                }
            }
            let sel: Vec<_> = (0..k).map(|i| sys.fragment(i)).collect();
            assert_eq!(code.reconstruct_by_solving(&sel, &ops).unwrap(), src);
        }
    }

    #[test]
    fn malformed_source_block() {
        let f = Field::prime(7).unwrap();
        let code = RbtCode::systematic(f, 5, 2).unwrap();
        let mut u = FieldMatrix::zeros(f, 2, 5);
        u.set(0, 1, 3);
        assert_eq!(
            code.encode_systematic_block(&u, &OpCounter::new()),
            Err(Error::NotSkewSymmetric)
        );
    }

    #[test]
    fn decision_tables() {
        for (j, l, d) in [
            (1, 5, 1),
            (1, 4, 4),
            (2, 5, 5),
            (2, 4, 2),
            (3, 5, 3),
            (3, 4, 4),
            (4, 5, 5),
            (1, 3, 1),
            (2, 3, 3),
            (1, 2, 2),
            (1, 6, 6),
            (2, 6, 2),
            (3, 6, 6),
            (4, 6, 4),
            (5, 6, 6),
        ] {
            assert_eq!(decision(j, l), d);
            assert_eq!(decision(l, j), d);
        }
    }

    #[test]
    fn balanced_counts() {
        let f = Field::prime(11).unwrap();
        for n in 2..=10 {
            for k in 1..n {
                let code = RbtCode::new(f, n, k).unwrap();
                let plan = code.partial_plan(&(0..k).rev().collect::<Vec<_>>()).unwrap();
                assert_eq!(plan.total_symbols(), code.params().b);
                for (slot, &count) in plan.per_node_counts().iter().enumerate() {
                    let expected = if k % 2 == 1 {
                        (n - 1) - (k - 1) / 2
                    } else if (slot + 1) % 2 == 1 {
                        (n - 1) - (k / 2 - 1)
                    } else {
                        (n - 1) - k / 2
                    };
                    assert_eq!(count, expected, "n={n} k={k} slot={slot}");
                }
            }
        }
    }

    #[test]
    fn argument_errors() {
        let f = Field::prime(7).unwrap();
        let code = RbtCode::new(f, 5, 3).unwrap();
        let ops = OpCounter::new();
        let cw = code.encode(&[1; 9], &ops).unwrap();
        let frags = cw.fragments();
        assert_eq!(
            code.reconstruct_full(&frags[..2], &ops),
            Err(Error::InsufficientSymbols { needed: 3, got: 2 })
        );
        assert_eq!(
            code.reconstruct_full(&frags[..4], &ops),
            Err(Error::WrongFragmentCount { expected: 3, got: 4 })
        );
        let dup = vec![frags[0].clone(), frags[0].clone(), frags[1].clone()];
        assert_eq!(code.reconstruct_full(&dup, &ops), Err(Error::DuplicateIndex(0)));
        assert_eq!(code.partial_plan(&[0, 1, 1]), Err(Error::DuplicateIndex(1)));
        assert_eq!(code.repair(&[(1, 0), (2, 0), (3, 0)], 0), Err(Error::MissingHelper(4)));
        assert!(matches!(RbtCode::new(f, 9, 3), Err(Error::FieldTooSmall { .. })));
        assert!(RbtCode::new(f, 8, 3).is_ok());
    }
}
