//! One interface over the repair-by-transfer, product-matrix and
//! complete-graph codes, so files, the simulator and the CLI can treat
//! them alike.

use std::fmt;
use std::str::FromStr;

use regen_core::mbr::{Backend, MbrCode};
use regen_core::rbt::RbtCode;
use regen_core::shah::ShahCode;
use regen_core::{CodeParams, DownloadPlan, Error, Field, FieldKind, Fragment, OpCounter, Scheme};

use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CodecKind {
    Rbt,
    RbtSys,
    MbrPsrs,
    MbrVdm,
    Shah,
}

impl CodecKind {
    pub const ALL: [CodecKind; 5] = [
        CodecKind::Rbt,
        CodecKind::RbtSys,
        CodecKind::MbrPsrs,
        CodecKind::MbrVdm,
        CodecKind::Shah,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            CodecKind::Rbt => "rbt",
            CodecKind::RbtSys => "rbt-sys",
            CodecKind::MbrPsrs => "mbr-psrs",
            CodecKind::MbrVdm => "mbr-vdm",
            CodecKind::Shah => "shah",
        }
    }

    /// Byte stored in fragment-file headers.
    pub fn tag(&self) -> u8 {
        match self {
            CodecKind::Rbt => 1,
            CodecKind::RbtSys => 2,
            CodecKind::MbrPsrs => 3,
            CodecKind::MbrVdm => 4,
            CodecKind::Shah => 5,
        }
    }

    pub fn from_tag(tag: u8) -> Option<CodecKind> {
        CodecKind::ALL.into_iter().find(|c| c.tag() == tag)
    }

    /// Whether helpers forward stored symbols verbatim (d = n − 1).
    pub fn repairs_by_transfer(&self) -> bool {
        matches!(self, CodecKind::Rbt | CodecKind::RbtSys | CodecKind::Shah)
    }
}

impl fmt::Display for CodecKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CodecKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        CodecKind::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown codec `{s}` (expected rbt, rbt-sys, mbr-psrs, mbr-vdm or shah)"))
    }
}

/// How a data collector downloads from its k nodes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Retrieval {
    /// Every connected node sends its whole fragment.
    Full,
    /// A fixed B-symbol plan.
    Partial(Scheme),
    /// Lower and upper plans alternating by round.
    Timeshare,
}

impl Retrieval {
    pub fn name(&self) -> &'static str {
        match self {
            Retrieval::Full => "full",
            Retrieval::Partial(s) => s.name(),
            Retrieval::Timeshare => "timeshare",
        }
    }
}

impl fmt::Display for Retrieval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Retrieval {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Ok(match s {
            "full" => Retrieval::Full,
            "balanced" => Retrieval::Partial(Scheme::Balanced),
            "lower" => Retrieval::Partial(Scheme::Lower),
            "upper" => Retrieval::Partial(Scheme::Upper),
            "gong" => Retrieval::Partial(Scheme::Gong),
            "timeshare" => Retrieval::Timeshare,
            _ => {
                return Err(format!(
                    "unknown scheme `{s}` (expected full, balanced, lower, upper, gong or timeshare)"
                ))
            }
        })
    }
}

/// Parses a field spec: a prime such as `7`, `2^m` for a binary field, or
/// `fermat` / `65537` for the Fermat field. A leading `gf` is ignored.
pub fn parse_field(spec: &str) -> std::result::Result<Field, String> {
    let s = spec.trim().to_ascii_lowercase();
    let s = s.strip_prefix("gf").unwrap_or(&s);
    let s = s.trim_start_matches('(').trim_end_matches(')');
    if s == "fermat" || s == "65537" {
        return Ok(Field::fermat());
    }
    let field = if let Some(m) = s.strip_prefix("2^") {
        let m: u32 = m.parse().map_err(|_| format!("bad extension degree in `{spec}`"))?;
        Field::binary(m)
    } else {
        let p: u32 = s.parse().map_err(|_| format!("bad field spec `{spec}`"))?;
        Field::prime(p)
    };
    field.map_err(|e| e.to_string())
}

/// Inverse of [`parse_field`].
pub fn field_spec(field: &Field) -> String {
    match field.kind() {
        FieldKind::Prime => format!("{}", field.order()),
        FieldKind::Binary => format!("2^{}", field.param()),
        FieldKind::Fermat => "fermat".into(),
    }
}

#[derive(Clone, Debug)]
enum Inner {
    Rbt(RbtCode),
    Mbr(Box<MbrCode>),
    Shah(ShahCode),
}

#[derive(Clone, Debug)]
pub struct Codec {
    kind: CodecKind,
    inner: Inner,
}

impl Codec {
    /// `d` is required for the product-matrix codecs and must be absent or
    /// n − 1 for the others.
    pub fn new(kind: CodecKind, field: Field, n: usize, k: usize, d: Option<usize>) -> Result<Codec> {
        if kind.repairs_by_transfer() {
            if let Some(d) = d.filter(|&d| d + 1 != n) {
                return Err(Error::ParamsInvalid(format!("{kind} codes have d = n − 1, got d = {d}")).into());
            }
        }
        let need_d = || d.ok_or_else(|| Error::ParamsInvalid(format!("{kind} codes need d")));
        let inner = match kind {
            CodecKind::Rbt => Inner::Rbt(RbtCode::new(field, n, k)?),
            CodecKind::RbtSys => Inner::Rbt(RbtCode::systematic(field, n, k)?),
            CodecKind::MbrPsrs => Inner::Mbr(Box::new(MbrCode::new(field, n, k, need_d()?, Backend::Psrs)?)),
            CodecKind::MbrVdm => Inner::Mbr(Box::new(MbrCode::new(field, n, k, need_d()?, Backend::Vandermonde)?)),
            CodecKind::Shah => Inner::Shah(ShahCode::new(field, n, k)?),
        };
        Ok(Codec { kind, inner })
    }

    pub fn kind(&self) -> CodecKind {
        self.kind
    }

    pub fn field(&self) -> Field {
        match &self.inner {
            Inner::Rbt(c) => c.field(),
            Inner::Mbr(c) => c.field(),
            Inner::Shah(c) => c.field(),
        }
    }

    pub fn params(&self) -> CodeParams {
        match &self.inner {
            Inner::Rbt(c) => c.params(),
            Inner::Mbr(c) => c.params(),
            Inner::Shah(c) => c.params(),
        }
    }

    pub fn encode(&self, u: &[u32], ops: &OpCounter) -> Result<Vec<Fragment>> {
        Ok(match &self.inner {
            Inner::Rbt(c) if c.is_systematic() => c.encode_systematic(u, ops)?.fragments(),
            Inner::Rbt(c) => c.encode(u, ops)?.fragments(),
            Inner::Mbr(c) => c.encode(u, ops)?,
            Inner::Shah(c) => c.encode(u, ops)?,
        })
    }

    /// The single symbol a helper sends towards repairing `failed`.
    pub fn helper_symbol(&self, fragment: &Fragment, failed: usize, ops: &OpCounter) -> Result<u32> {
        Ok(match &self.inner {
            Inner::Rbt(c) => c.helper_symbol(fragment, failed)?,
            Inner::Mbr(c) => c.helper_response(fragment, failed, ops)?,
            Inner::Shah(c) => c.helper_symbol(fragment, failed)?,
        })
    }

    pub fn repair(&self, responses: &[(usize, u32)], failed: usize, ops: &OpCounter) -> Result<Fragment> {
        Ok(match &self.inner {
            Inner::Rbt(c) => c.repair(responses, failed)?,
            Inner::Mbr(c) => c.repair(responses, failed, ops)?,
            Inner::Shah(c) => c.repair(responses, failed)?,
        })
    }

    /// Full-download reconstruction from k fragments.
    pub fn reconstruct(&self, fragments: &[Fragment], ops: &OpCounter) -> Result<Vec<u32>> {
        Ok(match &self.inner {
            Inner::Rbt(c) => c.reconstruct_full(fragments, ops)?,
            Inner::Mbr(c) => c.reconstruct_full(fragments, ops)?,
            Inner::Shah(c) => c.reconstruct(fragments, ops)?,
        })
    }

    /// The B-symbol download plan for `connected` (0-based node indices).
    /// `round` selects the lower or upper half of a time-sharing schedule.
    pub fn plan(&self, connected: &[usize], retrieval: Retrieval, round: usize) -> Result<DownloadPlan> {
        let mismatch = |scheme: &'static str| Error::SchemeBackendMismatch {
            scheme,
            backend: self.kind.name(),
        };
        Ok(match (&self.inner, retrieval) {
            (Inner::Rbt(c), Retrieval::Partial(Scheme::Balanced)) => c.partial_plan(connected)?,
            (Inner::Mbr(c), Retrieval::Partial(scheme)) => c.partial_plan(connected, scheme)?,
            (Inner::Mbr(c), Retrieval::Timeshare) => c
                .timeshare_schedule(connected, round + 1)?
                .pop()
                .expect("at least one round"),
            (_, r) => return Err(mismatch(r.name()).into()),
        })
    }

    pub fn reconstruct_partial(&self, plan: &DownloadPlan, payloads: &[Vec<u32>], ops: &OpCounter) -> Result<Vec<u32>> {
        Ok(match &self.inner {
            Inner::Rbt(c) => c.reconstruct_partial(plan, payloads, ops)?,
            Inner::Mbr(c) => c.reconstruct_partial(plan, payloads, ops)?,
            Inner::Shah(_) => {
                return Err(Error::SchemeBackendMismatch {
                    scheme: plan.scheme.name(),
                    backend: self.kind.name(),
                }
                .into())
            }
        })
    }

    /// Picks the helpers for repairing `failed` from the `alive` nodes:
    /// all of them for repair-by-transfer codes, the first d otherwise.
    pub fn default_helpers(&self, failed: usize, alive: &[usize]) -> Vec<usize> {
        let d = self.params().d;
        alive.iter().copied().filter(|&i| i != failed).take(d).collect()
    }
}
