//! Product-matrix minimum-bandwidth codes.
//!
//! The message fills a symmetric d × d matrix M = [[S, T], [Tᵗ, 0]] and node
//! i stores row i of C = ΨM. Any d rows of Ψ and any k rows of its first k
//! columns Φ must be linearly independent. Two families of Ψ are offered:
//! the systematic generator matrix of a partially systematic Reed–Solomon
//! code (the first k nodes then store [S T] verbatim), and a plain
//! Vandermonde matrix.

mod partial;

pub use partial::StageSystem;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::counter::OpCounter;
use crate::error::{ensure_distinct, Error, Result};
use crate::gf::{Field, FieldKind};
use crate::matrix::{for_each_subset, vandermonde, FieldMatrix};
use crate::params::CodeParams;
use crate::plan::Fragment;
use crate::psrs::{PsrsCode, PsrsMessage};

/// Largest n for which construction checks every row subset.
const EXHAUSTIVE_CHECK_LIMIT: usize = 10;
/// Random row subsets checked per condition above that limit.
const SAMPLED_CHECKS: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Backend {
    /// Systematic PSRS generator at the field's canonical points.
    Psrs,
    /// Systematic PSRS generator over GF(65537) at powers of a root of
    /// unity, so column encoding can use the NTT.
    PsrsRootsOfUnity,
    /// Non-systematic Vandermonde matrix at the canonical points.
    Vandermonde,
}

impl Backend {
    pub fn name(&self) -> &'static str {
        match self {
            Backend::Psrs => "psrs",
            Backend::PsrsRootsOfUnity => "psrs-roots-of-unity",
            Backend::Vandermonde => "vandermonde",
        }
    }

    pub fn is_systematic(&self) -> bool {
        !matches!(self, Backend::Vandermonde)
    }
}

/// How [`MbrCode::encode_columns`] evaluates each column polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ColumnPath {
    Naive,
    Ntt,
}

#[derive(Clone, Debug)]
pub struct MbrCode {
    field: Field,
    params: CodeParams,
    backend: Backend,
    psi: FieldMatrix,
    psrs: Option<PsrsCode>,
}

impl MbrCode {
    pub fn new(field: Field, n: usize, k: usize, d: usize, backend: Backend) -> Result<MbrCode> {
        let params = CodeParams::mbr(n, k, d)?;
        let (psi, psrs) = match backend {
            Backend::Psrs => {
                let code = PsrsCode::new(field, n, k, d)?;
                (code.generator_matrix(), Some(code))
            }
            Backend::PsrsRootsOfUnity => {
                if field.kind() != FieldKind::Fermat {
                    return Err(Error::WrongField);
                }
                let code = PsrsCode::roots_of_unity(n, k, d)?;
                (code.generator_matrix(), Some(code))
            }
            Backend::Vandermonde => (vandermonde(field, &field.enumerate(n)?, d)?, None),
        };
        validate(&psi, &params)?;
        Ok(MbrCode {
            field,
            params,
            backend,
            psi,
            psrs,
        })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn params(&self) -> CodeParams {
        self.params
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }

    /// Ψ = [Φ Δ], n × d.
    pub fn encoding_matrix(&self) -> &FieldMatrix {
        &self.psi
    }

    /// M from B symbols, row by row over the upper triangle of the first
    /// k rows (S and T interleaved per row).
    pub fn build_message(&self, u: &[u32]) -> Result<FieldMatrix> {
        let CodeParams { k, d, b, .. } = self.params;
        if u.len() != b {
            return Err(Error::WrongMessageLength { expected: b, got: u.len() });
        }
        let f = self.field;
        let mut m = FieldMatrix::zeros(f, d, d);
        let mut it = u.iter();
        for i in 0..k {
            for j in i..d {
                let v = f.check(*it.next().expect("length checked") as u64)?;
                m.set(i, j, v);
                m.set(j, i, v);
            }
        }
        Ok(m)
    }

    /// Inverse of [`Self::build_message`].
    fn flatten(&self, s: &FieldMatrix, t: &FieldMatrix) -> Vec<u32> {
        let k = self.params.k;
        let mut out = Vec::with_capacity(self.params.b);
        for i in 0..k {
            out.extend_from_slice(&s.row(i)[i..]);
            out.extend_from_slice(t.row(i));
        }
        out
    }

    /// Fragments are the rows of ΨM.
    pub fn encode(&self, u: &[u32], ops: &OpCounter) -> Result<Vec<Fragment>> {
        let m = self.build_message(u)?;
        let c = self.psi.mul(&m, ops)?;
        Ok(to_fragments(&c))
    }

    /// Encodes column by column as PSRS codewords, the columns of M being
    /// the messages. Only for the PSRS backends; the NTT path needs
    /// [`Backend::PsrsRootsOfUnity`].
    pub fn encode_columns(&self, u: &[u32], path: ColumnPath, ops: &OpCounter) -> Result<Vec<Fragment>> {
        let psrs = self
            .psrs
            .as_ref()
            .ok_or_else(|| Error::ParamsInvalid("column encoding needs a PSRS backend".into()))?;
        let CodeParams { n, k, d, .. } = self.params;
        let m = self.build_message(u)?;
        let mut c = FieldMatrix::zeros(self.field, n, d);
        for j in 0..d {
            let col = m.col(j);
            let msg = PsrsMessage::new(col[..k].to_vec(), col[k..].to_vec());
            let cw = match path {
                ColumnPath::Naive => psrs.encode_naive(&msg, ops)?,
                ColumnPath::Ntt => psrs.encode_ntt(&msg, ops)?,
            };
            for (i, v) in cw.into_iter().enumerate() {
                c.set(i, j, v);
            }
        }
        Ok(to_fragments(&c))
    }

    /// The scalar a helper sends for repairing `failed`: cᵗψ_f.
    pub fn helper_response(&self, fragment: &Fragment, failed: usize, ops: &OpCounter) -> Result<u32> {
        let n = self.params.n;
        if failed >= n {
            return Err(Error::IndexOutOfRange { index: failed, limit: n });
        }
        let f = self.field;
        let psi_f = self.psi.row(failed);
        if fragment.symbols.len() != psi_f.len() {
            return Err(Error::DimensionMismatch(format!(
                "fragment of {} symbols, encoding row of {}",
                fragment.symbols.len(),
                psi_f.len()
            )));
        }
        let v = fragment
            .symbols
            .iter()
            .zip(psi_f)
            .fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)));
        ops.muls(psi_f.len() as u64);
        ops.adds(psi_f.len() as u64 - 1);
        Ok(v)
    }

    /// Rebuilds `failed` from d helper responses: Ψ_repair⁻¹Υ = Mψ_f, which
    /// is the lost row since M is symmetric.
    pub fn repair(&self, responses: &[(usize, u32)], failed: usize, ops: &OpCounter) -> Result<Fragment> {
        let CodeParams { n, d, .. } = self.params;
        if failed >= n {
            return Err(Error::IndexOutOfRange { index: failed, limit: n });
        }
        let mut seen = vec![false; n];
        for &(h, v) in responses {
            if h >= n {
                return Err(Error::IndexOutOfRange { index: h, limit: n });
            }
            if h == failed {
                return Err(Error::ParamsInvalid(format!("node {failed} cannot help repair itself")));
            }
            if seen[h] {
                return Err(Error::DuplicateHelper(h));
            }
            seen[h] = true;
            self.field.check(v as u64)?;
        }
        if responses.len() != d {
            return Err(Error::WrongHelperCount {
                expected: d,
                got: responses.len(),
            });
        }
        let helpers: Vec<usize> = responses.iter().map(|&(h, _)| h).collect();
        let upsilon: Vec<u32> = responses.iter().map(|&(_, v)| v).collect();
        let inv = self.psi.submatrix_rows(&helpers)?.inverse(ops)?;
        Ok(Fragment::new(failed, inv.mul_vec(&upsilon, ops)?))
    }

    /// Full download from k nodes; returns the B message symbols. Reads
    /// [S T] directly when every node is systematic.
    pub fn reconstruct_full(&self, fragments: &[Fragment], ops: &OpCounter) -> Result<Vec<u32>> {
        self.check_fragments(fragments)?;
        let CodeParams { k, d, .. } = self.params;
        if self.backend.is_systematic() && fragments.iter().all(|f| f.node < k) {
            let mut s = FieldMatrix::zeros(self.field, k, k);
            let mut t = FieldMatrix::zeros(self.field, k, d - k);
            for frag in fragments {
                for (j, &v) in frag.symbols.iter().enumerate() {
                    if j < k {
                        s.set(frag.node, j, v);
                    } else {
                        t.set(frag.node, j - k, v);
                    }
                }
            }
            return Ok(self.flatten(&s, &t));
        }
        self.reconstruct_by_solving(fragments, ops)
    }

    /// T = Φ_DC⁻¹C_DC^Δ, then S = Φ_DC⁻¹(C_DC^Φ − Δ_DC Tᵗ).
    pub fn reconstruct_by_solving(&self, fragments: &[Fragment], ops: &OpCounter) -> Result<Vec<u32>> {
        self.check_fragments(fragments)?;
        let CodeParams { k, d, .. } = self.params;
        let rows: Vec<&[u32]> = fragments.iter().map(|f| f.symbols.as_slice()).collect();
        let c_dc = FieldMatrix::from_rows(self.field, &rows)?;
        let nodes: Vec<usize> = fragments.iter().map(|f| f.node).collect();
        let psi_dc = self.psi.submatrix_rows(&nodes)?;
        let phi_inv = psi_dc.column_block(0, k).inverse(ops)?;
        let t = phi_inv.mul(&c_dc.column_block(k, d), ops)?;
        let rhs = c_dc
            .column_block(0, k)
            .sub(&psi_dc.column_block(k, d).mul(&t.transpose(), ops)?, ops)?;
        let s = phi_inv.mul(&rhs, ops)?;
        Ok(self.flatten(&s, &t))
    }

    fn check_fragments(&self, fragments: &[Fragment]) -> Result<()> {
        let CodeParams { n, k, d, .. } = self.params;
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
            if f.symbols.len() != d {
                return Err(Error::DimensionMismatch(format!(
                    "node {} holds {} symbols, expected {d}",
                    f.node,
                    f.symbols.len()
                )));
            }
            for &v in &f.symbols {
                self.field.check(v as u64)?;
            }
        }
        Ok(())
    }
}

fn to_fragments(c: &FieldMatrix) -> Vec<Fragment> {
    (0..c.rows()).map(|i| Fragment::new(i, c.row(i).to_vec())).collect()
}

/// Checks that any d rows of Ψ and any k rows of Φ are independent:
/// exhaustively for small n, on random subsets otherwise.
fn validate(psi: &FieldMatrix, params: &CodeParams) -> Result<()> {
    let CodeParams { n, k, d, .. } = *params;
    let phi = psi.column_block(0, k);
    let check = |m: &FieldMatrix, rows: &[usize]| m.submatrix_rows(rows).map(|s| s.is_invertible()).unwrap_or(false);
    if n <= EXHAUSTIVE_CHECK_LIMIT {
        let mut ok = true;
        for_each_subset(n, d, |s| {
            ok = check(psi, s);
            ok
        });
        if ok {
            for_each_subset(n, k, |s| {
                ok = check(&phi, s);
                ok
            });
        }
        return if ok { Ok(()) } else { Err(Error::SingularMatrix) };
    }
    let mut rng = ChaCha8Rng::seed_from_u64((n * 1_000_003 + k * 1_009 + d) as u64);
    for _ in 0..SAMPLED_CHECKS {
        let rows = sample(&mut rng, n, d).into_vec();
        if !check(psi, &rows) {
            return Err(Error::SingularMatrix);
        }
        let rows = sample(&mut rng, n, k).into_vec();
        if !check(&phi, &rows) {
            return Err(Error::SingularMatrix);
        }
    }
    Ok(())
}
