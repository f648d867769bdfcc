//! Partial downloading: the collector fetches all of C_DC^Δ but only a
//! triangular half of C_DC^Φ, B symbols in total, and recovers S one
//! column per stage using its symmetry.
//!
//! Rows of C_DC are indexed by the order map: slot j's fragment sits at
//! row `order[j]`. Row r sends Φ-columns 0..=r (lower) or r..k (upper).
//!
//! * Lower: stage l solves column l of S from the rows r ≥ l, stacked under
//!   identity rows for the entries already known from columns 0..l.
//! * Upper: columns are solved backwards; stage for column c uses rows
//!   r ≤ c and identity rows for the entries known from columns c+1..k.
//! * Gong: upper download, but known entries are substituted into the
//!   right-hand side, leaving a (c+1) × (c+1) system in the unknowns.

use super::{Backend, MbrCode};
use crate::counter::OpCounter;
use crate::error::{ensure_distinct, Error, Result};
use crate::matrix::FieldMatrix;
use crate::params::CodeParams;
use crate::plan::{DownloadPlan, Scheme};

/// One stage's linear system: `matrix · x = rhs` for column `column` of S.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StageSystem {
    pub column: usize,
    pub matrix: FieldMatrix,
    pub rhs: Vec<u32>,
}

impl MbrCode {
    /// Systematic nodes claim their own row; the others fill the free rows
    /// in ascending order. This satisfies the lower, upper and time-sharing
    /// constraints at once. A non-systematic node whose Φ row is a multiple
    /// of e₁ (the Vandermonde row at the point 0) takes row 0: on any lower
    /// row it would zero a row of the stage matrix.
    pub fn default_order(&self, connected: &[usize]) -> Vec<usize> {
        let k = self.params.k;
        let systematic = self.backend.is_systematic();
        let mut taken = vec![false; k];
        let mut order = vec![usize::MAX; connected.len()];
        for (slot, &node) in connected.iter().enumerate() {
            if systematic && node < k {
                order[slot] = node;
                taken[node] = true;
            }
        }
        if !taken[0] {
            let leading_only = |node: usize| self.psi.row(node)[1..k].iter().all(|&v| v == 0);
            if let Some(slot) = (0..connected.len()).find(|&s| order[s] == usize::MAX && leading_only(connected[s])) {
                order[slot] = 0;
                taken[0] = true;
            }
        }
        let mut free = (0..k).filter(|&r| !taken[r]);
        for o in order.iter_mut().filter(|o| **o == usize::MAX) {
            *o = free.next().expect("k slots for k rows");
        }
        order
    }

    /// Plan for `scheme` with the default row order.
    pub fn partial_plan(&self, connected: &[usize], scheme: Scheme) -> Result<DownloadPlan> {
        self.check_connected(connected)?;
        let order = self.default_order(connected);
        self.partial_plan_with_order(connected, scheme, &order)
    }

    /// Plan for `scheme` with an explicit row order, rejected when a
    /// systematic fragment would make a stage singular.
    pub fn partial_plan_with_order(&self, connected: &[usize], scheme: Scheme, order: &[usize]) -> Result<DownloadPlan> {
        let CodeParams { k, d, .. } = self.params;
        self.check_connected(connected)?;
        self.check_scheme(scheme)?;
        if order.len() != k {
            return Err(Error::DimensionMismatch(format!("order of {} rows for k = {k}", order.len())));
        }
        ensure_distinct(order, k)?;
        if self.backend.is_systematic() {
            for (&node, &row) in connected.iter().zip(order) {
                if node >= k {
                    continue;
                }
                match scheme {
                    Scheme::Lower if row > node => return Err(Error::OrderingInfeasible("lower")),
                    Scheme::Upper if row < node => return Err(Error::OrderingInfeasible("upper")),
                    _ => {}
                }
            }
        }
        let positions = order
            .iter()
            .map(|&r| {
                let phi: Vec<usize> = match scheme {
                    Scheme::Lower => (0..=r).collect(),
                    _ => (r..k).collect(),
                };
                phi.into_iter().chain(k..d).collect()
            })
            .collect();
        Ok(DownloadPlan {
            scheme,
            connected: connected.to_vec(),
            order: order.to_vec(),
            positions,
        })
    }

    /// Alternating lower and upper plans with one fixed order in which
    /// every connected systematic node sits at its own row, so each node
    /// sends 2d − k + 1 symbols over any two consecutive rounds.
    pub fn timeshare_schedule(&self, connected: &[usize], rounds: usize) -> Result<Vec<DownloadPlan>> {
        self.check_connected(connected)?;
        let order = self.default_order(connected);
        if self.backend.is_systematic() && connected.iter().zip(&order).any(|(&n, &r)| n < self.params.k && n != r) {
            return Err(Error::OrderingInfeasible("timeshare"));
        }
        (0..rounds)
            .map(|round| {
                let scheme = if round % 2 == 0 { Scheme::Lower } else { Scheme::Upper };
                self.partial_plan_with_order(connected, scheme, &order)
            })
            .collect()
    }

    pub fn reconstruct_partial(&self, plan: &DownloadPlan, payloads: &[Vec<u32>], ops: &OpCounter) -> Result<Vec<u32>> {
        self.reconstruct_partial_traced(plan, payloads, ops).map(|(u, _)| u)
    }

    /// Partial reconstruction that also returns every stage's system.
    pub fn reconstruct_partial_traced(
        &self,
        plan: &DownloadPlan,
        payloads: &[Vec<u32>],
        ops: &OpCounter,
    ) -> Result<(Vec<u32>, Vec<StageSystem>)> {
        let CodeParams { k, d, .. } = self.params;
        if !matches!(plan.scheme, Scheme::Lower | Scheme::Upper | Scheme::Gong) {
            return Err(Error::PlanPayloadMismatch(format!(
                "{} plan given to the product-matrix partial decoder",
                plan.scheme.name()
            )));
        }
        let expected = self.partial_plan_with_order(&plan.connected, plan.scheme, &plan.order)?;
        if expected.positions != plan.positions {
            return Err(Error::PlanPayloadMismatch("positions differ from the scheme's layout".into()));
        }
        plan.check_payloads(payloads)?;
        let f = self.field;
        // Arrange rows of C_DC by the order map; None marks entries not sent.
        let mut c_dc: Vec<Vec<Option<u32>>> = vec![vec![None; d]; k];
        let mut nodes = vec![0usize; k];
        for (slot, (&row, data)) in plan.order.iter().zip(payloads).enumerate() {
            nodes[row] = plan.connected[slot];
            for (&p, &v) in plan.positions[slot].iter().zip(data) {
                c_dc[row][p] = Some(f.check(v as u64)?);
            }
        }
        let psi_dc = self.psi.submatrix_rows(&nodes)?;
        let phi_dc = psi_dc.column_block(0, k);
        let delta_dc = psi_dc.column_block(k, d);

        let c_delta = FieldMatrix::from_fn(f, k, d - k, |r, c| c_dc[r][k + c].expect("Δ part always sent"));
        let t = phi_dc.inverse(ops)?.mul(&c_delta, ops)?;

        // Accessible entries of D = C^Φ − Δ_DC Tᵗ.
        let mut dm: Vec<Vec<Option<u32>>> = vec![vec![None; k]; k];
        for r in 0..k {
            for c in 0..k {
                if let Some(v) = c_dc[r][c] {
                    let mut acc = v;
                    for j in 0..d - k {
                        acc = f.sub(acc, f.mul(delta_dc.get(r, j), t.get(c, j)));
                    }
                    ops.muls((d - k) as u64);
                    ops.adds((d - k) as u64);
                    dm[r][c] = Some(acc);
                }
            }
        }
        let known = |r: usize, c: usize| dm[r][c].expect("entry in the downloaded triangle");

        let mut s = FieldMatrix::zeros(f, k, k);
        let mut stages = Vec::with_capacity(k);
        let columns: Vec<usize> = match plan.scheme {
            Scheme::Lower => (0..k).collect(),
            _ => (0..k).rev().collect(),
        };
        for (stage, &col) in columns.iter().enumerate() {
            let system = match plan.scheme {
                Scheme::Lower => {
                    let mut rows = Vec::with_capacity(k);
                    let mut rhs = Vec::with_capacity(k);
                    for j in 0..col {
                        rows.push(unit(k, j));
                        rhs.push(s.get(col, j));
                    }
                    for r in col..k {
                        rows.push(phi_dc.row(r).to_vec());
                        rhs.push(known(r, col));
                    }
                    StageSystem {
                        column: col,
                        matrix: FieldMatrix::from_rows(f, &rows)?,
                        rhs,
                    }
                }
                Scheme::Upper => {
                    let mut rows = Vec::with_capacity(k);
                    let mut rhs = Vec::with_capacity(k);
                    for r in 0..=col {
                        rows.push(phi_dc.row(r).to_vec());
                        rhs.push(known(r, col));
                    }
                    for j in col + 1..k {
                        rows.push(unit(k, j));
                        rhs.push(s.get(col, j));
                    }
                    StageSystem {
                        column: col,
                        matrix: FieldMatrix::from_rows(f, &rows)?,
                        rhs,
                    }
                }
                _ => {
                    let m = FieldMatrix::from_fn(f, col + 1, col + 1, |r, c| phi_dc.get(r, c));
                    let rhs = (0..=col)
                        .map(|r| {
                            let mut acc = known(r, col);
                            for j in col + 1..k {
                                acc = f.sub(acc, f.mul(phi_dc.get(r, j), s.get(col, j)));
                            }
                            ops.muls((k - col - 1) as u64);
                            ops.adds((k - col - 1) as u64);
                            acc
                        })
                        .collect();
                    StageSystem {
                        column: col,
                        matrix: m,
                        rhs,
                    }
                }
            };
            let inv = system
                .matrix
                .inverse(ops)
                .map_err(|_| Error::SingularStageMatrix { stage, column: col })?;
            let x = inv.mul_vec(&system.rhs, ops)?;
            for (r, v) in x.into_iter().enumerate() {
                s.set(r, col, v);
                s.set(col, r, v);
            }
            stages.push(system);
        }
        Ok((self.flatten(&s, &t), stages))
    }

    fn check_connected(&self, connected: &[usize]) -> Result<()> {
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
        Ok(())
    }

    fn check_scheme(&self, scheme: Scheme) -> Result<()> {
        let ok = match scheme {
            Scheme::Lower | Scheme::Upper => true,
            Scheme::Gong => self.backend == Backend::Vandermonde,
            Scheme::Full | Scheme::Balanced => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::SchemeBackendMismatch {
                scheme: scheme.name(),
                backend: self.backend.name(),
            })
        }
    }
}

fn unit(k: usize, j: usize) -> Vec<u32> {
    let mut v = vec![0u32; k];
    v[j] = 1;
    v
}
