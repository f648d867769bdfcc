//! Operation-count comparisons between encoders.
//!
//! * `rbt-vs-shah`: systematic encoding of the repair-by-transfer code
//!   against the complete-graph baseline at k = n/2; the baseline's
//!   multiplication count should grow faster, so the ratio rises with n.
//! * `mbr-naive-vs-ntt`: product-matrix encoding column by column, by
//!   direct evaluation or by NTT, at k = 3n/8 and d = n/2; the NTT path
//!   should overtake the naive one as n grows.
//!
//! Counts come from the arithmetic counters, not from timing.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use regen_core::mbr::{Backend, ColumnPath, MbrCode};
use regen_core::rbt::RbtCode;
use regen_core::shah::ShahCode;
use regen_core::{Field, FieldKind, OpCount, OpCounter};

use crate::error::{HarnessError, Result};

pub const CSV_HEADER: &str = "n,contender,multiplications,additions,symbols";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    RbtVsShah,
    MbrNaiveVsNtt,
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::RbtVsShah => "rbt-vs-shah",
            Family::MbrNaiveVsNtt => "mbr-naive-vs-ntt",
        }
    }

    pub fn contenders(&self) -> [&'static str; 2] {
        match self {
            Family::RbtVsShah => ["rbt", "shah"],
            Family::MbrNaiveVsNtt => ["naive", "ntt"],
        }
    }

    pub fn default_field(&self) -> Field {
        match self {
            Family::RbtVsShah => Field::binary(16).expect("degree 16 is supported"),
            Family::MbrNaiveVsNtt => Field::fermat(),
        }
    }

    pub fn default_sizes(&self) -> Vec<usize> {
        match self {
            Family::RbtVsShah => (8..=32).step_by(4).collect(),
            Family::MbrNaiveVsNtt => vec![32, 64, 128, 256, 512],
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "rbt-vs-shah" => Ok(Family::RbtVsShah),
            "mbr-naive-vs-ntt" => Ok(Family::MbrNaiveVsNtt),
            _ => Err(format!("unknown family `{s}` (expected rbt-vs-shah or mbr-naive-vs-ntt)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BenchRow {
    pub n: usize,
    pub contender: &'static str,
    pub ops: OpCount,
    /// Symbols stored across all nodes by the encoding.
    pub symbols: usize,
}

/// A contender that could not run at some size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Exclusion {
    pub n: usize,
    pub contender: &'static str,
    pub kind: &'static str,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trend {
    pub description: String,
    /// (n, second contender's multiplications / first's).
    pub ratios: Vec<(usize, f64)>,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchTable {
    pub family: Family,
    pub field: Field,
    pub rows: Vec<BenchRow>,
    pub excluded: Vec<Exclusion>,
    /// Absent when fewer than two sizes have both contenders.
    pub trend: Option<Trend>,
}

impl BenchTable {
    pub fn row(&self, n: usize, contender: &str) -> Option<&BenchRow> {
        self.rows.iter().find(|r| r.n == n && r.contender == contender)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            out.push_str(&format!("{},{},{},{},{}\n", r.n, r.contender, r.ops.muls, r.ops.adds, r.symbols));
        }
        out
    }

    /// Fails when a trend was evaluated and does not hold.
    pub fn check_trend(&self) -> Result<()> {
        match &self.trend {
            Some(t) if !t.holds => Err(HarnessError::TrendViolated(format!("{}: {}", self.family, t.description))),
            _ => Ok(()),
        }
    }
}

fn random_message(field: &Field, len: usize, seed: u64) -> Vec<u32> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..len).map(|_| rng.gen_range(0..field.order())).collect()
}

/// Runs `family` at every size in `sizes`; `field` defaults to GF(2^16)
/// for `rbt-vs-shah` and GF(65537) for `mbr-naive-vs-ntt`.
pub fn bench_compare(family: Family, sizes: &[usize], field: Option<Field>) -> BenchTable {
    let field = field.unwrap_or_else(|| family.default_field());
    let mut rows = Vec::new();
    let mut excluded = Vec::new();
    for &n in sizes {
        let results = match family {
            Family::RbtVsShah => rbt_vs_shah(field, n),
            Family::MbrNaiveVsNtt => naive_vs_ntt(field, n),
        };
        for (contender, result) in family.contenders().into_iter().zip(results) {
            match result {
                Ok((ops, symbols)) => rows.push(BenchRow {
                    n,
                    contender,
                    ops,
                    symbols,
                }),
                Err(e) => excluded.push(Exclusion {
                    n,
                    contender,
                    kind: e.kind(),
                    reason: e.to_string(),
                }),
            }
        }
    }
    let [first, second] = family.contenders();
    let ratios: Vec<(usize, f64)> = sizes
        .iter()
        .filter_map(|&n| {
            let a = rows.iter().find(|r| r.n == n && r.contender == first)?;
            let b = rows.iter().find(|r| r.n == n && r.contender == second)?;
            Some((n, b.ops.muls as f64 / a.ops.muls.max(1) as f64))
        })
        .collect();
    let trend = (ratios.len() >= 2).then(|| match family {
        Family::RbtVsShah => {
            let holds = ratios.windows(2).all(|w| w[1].1 > w[0].1);
            Trend {
                description: format!("shah/rbt multiplication ratio strictly increasing in n: {}", if holds { "yes" } else { "no" }),
                ratios,
                holds,
            }
        }
        Family::MbrNaiveVsNtt => {
            // The NTT must drop below naive at some size and stay below.
            let crossover = ratios.iter().position(|&(_, r)| r < 1.0);
            let holds = crossover.is_some_and(|c| ratios[c..].iter().all(|&(_, r)| r < 1.0));
            Trend {
                description: match crossover {
                    Some(c) if holds => format!("ntt below naive from n = {}", ratios[c].0),
                    _ => "ntt never stays below naive".into(),
                },
                ratios,
                holds,
            }
        }
    });
    BenchTable {
        family,
        field,
        rows,
        excluded,
        trend,
    }
}

type Measured = std::result::Result<(OpCount, usize), regen_core::Error>;

fn rbt_vs_shah(field: Field, n: usize) -> [Measured; 2] {
    let k = (n / 2).max(1);
    let seed = n as u64;
    let rbt = (|| {
        let code = RbtCode::systematic(field, n, k)?;
        let u = random_message(&field, code.params().b, seed);
        let ops = OpCounter::new();
        code.encode_systematic(&u, &ops)?;
        Ok((ops.count(), n * code.params().alpha))
    })();
    let shah = (|| {
        let code = ShahCode::new(field, n, k)?;
        let u = random_message(&field, code.params().b, seed);
        let ops = OpCounter::new();
        code.encode(&u, &ops)?;
        Ok((ops.count(), n * code.params().alpha))
    })();
    [rbt, shah]
}

fn naive_vs_ntt(field: Field, n: usize) -> [Measured; 2] {
    let k = (3 * n / 8).max(1);
    let d = (n / 2).max(k);
    let backend = if field.kind() == FieldKind::Fermat {
        Backend::PsrsRootsOfUnity
    } else {
        Backend::Psrs
    };
    let code = match MbrCode::new(field, n, k, d, backend) {
        Ok(c) => c,
        Err(e) => return [Err(e.clone()), Err(e)],
    };
    let u = random_message(&field, code.params().b, n as u64);
    let run = |path| {
        let ops = OpCounter::new();
        code.encode_columns(&u, path, &ops)?;
        Ok((ops.count(), n * code.params().alpha))
    };
    [run(ColumnPath::Naive), run(ColumnPath::Ntt)]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_size_has_no_trend() {
        let t = bench_compare(Family::RbtVsShah, &[8], None);
        assert_eq!(t.rows.len(), 2);
        assert!(t.trend.is_none());
        assert!(t.check_trend().is_ok());
        assert!(t.to_csv().starts_with(CSV_HEADER));
        assert_eq!(t.to_csv().lines().count(), 3);
    }

    #[test]
    fn exclusions_are_reported() {
        let t = bench_compare(Family::RbtVsShah, &[8], Some(Field::binary(3).unwrap()));
        assert_eq!(t.rows.len(), 1);
        assert_eq!(t.rows[0].contender, "rbt");
        assert_eq!(t.excluded[0].contender, "shah");
        assert_eq!(t.excluded[0].kind, "FieldTooSmall");
        let t = bench_compare(Family::MbrNaiveVsNtt, &[16], Some(Field::prime(17).unwrap()));
        assert_eq!(t.rows.len(), 1);
        assert_eq!(t.excluded[0].kind, "WrongField");
    }
}
