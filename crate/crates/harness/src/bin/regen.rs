//! Command-line front end: encode a message file into fragment files,
//! repair and reconstruct from them, run benchmarks, self-checks and
//! scenario scripts.
//!
//! Node indices on the command line are 1-based. Usage errors exit with
//! status 2, codec and data errors with status 1 after printing one line
//! of the form `error: <Kind>: <message>` to stderr.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use regen_core::{Field, OpCounter};
use regen_harness::bench::{bench_compare, Family};
use regen_harness::format::{fragment_path, read_message, write_message, FragmentFile};
use regen_harness::range::range_report;
use regen_harness::selftest::run_selftest;
use regen_harness::{parse_field, Codec, CodecKind, HarnessError, Result, Retrieval, Simulator};

#[derive(Parser)]
#[command(name = "regen", version, about = "Exact minimum-bandwidth regenerating codes")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Encode a message file into one fragment file per node.
    Encode {
        /// Raw little-endian symbols, B of them.
        message: PathBuf,
        /// rbt, rbt-sys, mbr-psrs, mbr-vdm or shah.
        #[arg(long)]
        codec: CodecKind,
        /// Number of nodes.
        #[arg(long)]
        n: usize,
        /// Number of nodes needed to reconstruct.
        #[arg(long)]
        k: usize,
        /// Repair degree; product-matrix codecs only.
        #[arg(long)]
        d: Option<usize>,
        /// `7`, `2^8`, `fermat`, ...
        #[arg(long, value_parser = parse_field)]
        field: Field,
        /// Directory that receives node-1.frag ... node-n.frag.
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Rebuild a lost node's fragment file from the surviving ones.
    Repair {
        /// Node to rebuild, numbered from 1.
        #[arg(long, value_parser = parse_node)]
        failed: usize,
        /// Directory holding the fragment files.
        #[arg(long)]
        frags: PathBuf,
        /// Helper nodes; defaults to the first d survivors.
        #[arg(long, value_delimiter = ',', value_parser = parse_node)]
        helpers: Option<Vec<usize>>,
    },
    /// Recover the message from k nodes' fragment files.
    Reconstruct {
        /// Comma-separated nodes to download from, numbered from 1.
        #[arg(long, value_delimiter = ',', value_parser = parse_node, required = true)]
        nodes: Vec<usize>,
        /// full, balanced, lower, upper, gong or timeshare.
        #[arg(long, default_value = "full")]
        scheme: Retrieval,
        /// Time-sharing round: even rounds download lower, odd upper.
        #[arg(long, default_value_t = 0)]
        round: usize,
        /// Directory holding the fragment files.
        #[arg(long)]
        frags: PathBuf,
        /// Where to write the recovered message.
        #[arg(long)]
        out: PathBuf,
    },
    /// Compare operation counts and write a CSV report.
    Bench {
        /// rbt-vs-shah or mbr-naive-vs-ntt.
        #[arg(long)]
        family: Family,
        /// Comma-separated values of n; defaults to the family's range.
        #[arg(long, value_delimiter = ',')]
        sizes: Option<Vec<usize>>,
        /// Defaults to GF(2^16) for rbt-vs-shah and GF(65537) for mbr-naive-vs-ntt.
        #[arg(long, value_parser = parse_field)]
        field: Option<Field>,
        /// CSV output path.
        #[arg(long)]
        report: PathBuf,
    },
    /// Field-size limits of each construction at (n, k, d).
    Range {
        /// `7`, `2^8`, `fermat`, ...
        #[arg(long, value_parser = parse_field)]
        field: Field,
        /// Number of nodes.
        #[arg(long)]
        n: usize,
        /// Number of nodes needed to reconstruct.
        #[arg(long)]
        k: usize,
        /// Repair degree.
        #[arg(long)]
        d: usize,
    },
    /// Run the exhaustive small-size invariant suites.
    Selftest,
    /// Run a scenario script and print its cost report.
    Simulate {
        /// Scenario script, one command per line.
        script: PathBuf,
    },
}

fn parse_node(s: &str) -> std::result::Result<usize, String> {
    match s.trim().parse::<usize>() {
        Ok(i) if i >= 1 => Ok(i - 1),
        _ => Err(format!("`{s}` is not a node index (nodes are numbered from 1)")),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}: {e}", e.kind());
            ExitCode::from(1)
        }
    }
}

fn run(cmd: Cmd) -> Result<ExitCode> {
    match cmd {
        Cmd::Encode {
            message,
            codec,
            n,
            k,
            d,
            field,
            out_dir,
        } => {
            let codec = Codec::new(codec, field, n, k, d)?;
            let u = read_message(&message, &field)?;
            let ops = OpCounter::new();
            let frags = codec.encode(&u, &ops)?;
            fs::create_dir_all(&out_dir)?;
            for frag in frags {
                let path = fragment_path(&out_dir, frag.node);
                FragmentFile::new(&codec, frag).write(&path)?;
            }
            let p = codec.params();
            let c = ops.count();
            println!(
                "encoded {} symbols into {} fragments of {} symbols ({} muls, {} adds)",
                p.b, p.n, p.alpha, c.muls, c.adds
            );
        }
        Cmd::Repair { failed, frags, helpers } => {
            let files = load_dir(&frags)?;
            let any = files.values().next().ok_or_else(|| HarnessError::NodeState("no fragment files found".into()))?;
            let codec = any.codec()?;
            let survivors: Vec<usize> = files.keys().copied().filter(|&i| i != failed).collect();
            let helpers = helpers.unwrap_or_else(|| codec.default_helpers(failed, &survivors));
            let ops = OpCounter::new();
            let mut responses = Vec::with_capacity(helpers.len());
            for &h in &helpers {
                let file = files
                    .get(&h)
                    .filter(|_| h != failed)
                    .ok_or_else(|| HarnessError::NodeState(format!("no fragment file for helper {}", h + 1)))?;
                responses.push((h, codec.helper_symbol(&file.fragment, failed, &ops)?));
            }
            let repaired = codec.repair(&responses, failed, &ops)?;
            FragmentFile::new(&codec, repaired).write(&fragment_path(&frags, failed))?;
            let c = ops.count();
            println!(
                "repaired node {} from {} helpers: {} symbols downloaded, {} muls, {} adds",
                failed + 1,
                responses.len(),
                responses.len(),
                c.muls,
                c.adds
            );
        }
        Cmd::Reconstruct {
            nodes,
            scheme,
            round,
            frags,
            out,
        } => {
            let files = nodes
                .iter()
                .map(|&i| FragmentFile::read(&fragment_path(&frags, i)))
                .collect::<Result<Vec<_>>>()?;
            check_same_code(&files)?;
            let codec = files[0].codec()?;
            let fragments: Vec<_> = files.into_iter().map(|f| f.fragment).collect();
            let ops = OpCounter::new();
            let (u, symbols) = match scheme {
                Retrieval::Full => {
                    let u = codec.reconstruct(&fragments, &ops)?;
                    (u, fragments.iter().map(|f| f.symbols.len()).sum::<usize>())
                }
                r => {
                    let plan = codec.plan(&nodes, r, round)?;
                    let payloads = plan.extract(&fragments)?;
                    (codec.reconstruct_partial(&plan, &payloads, &ops)?, plan.total_symbols())
                }
            };
            write_message(&out, &codec.field(), &u)?;
            let c = ops.count();
            println!(
                "reconstructed {} symbols ({scheme}): {symbols} symbols downloaded, {} muls, {} adds",
                u.len(),
                c.muls,
                c.adds
            );
        }
        Cmd::Bench {
            family,
            sizes,
            field,
            report,
        } => {
            let sizes = sizes.unwrap_or_else(|| family.default_sizes());
            let table = bench_compare(family, &sizes, field);
            fs::write(&report, table.to_csv())?;
            for x in &table.excluded {
                eprintln!("excluded: n={} {}: {}: {}", x.n, x.contender, x.kind, x.reason);
            }
            if let Some(t) = &table.trend {
                println!("{family}: {}", t.description);
            }
            println!("wrote {} rows to {}", table.rows.len(), report.display());
            table.check_trend()?;
        }
        Cmd::Range { field, n, k, d } => print!("{}", range_report(field, n, k, d)),
        Cmd::Selftest => {
            let mut ok = true;
            for outcome in run_selftest() {
                match &outcome.result {
                    Ok(()) => println!("PASS {}", outcome.name),
                    Err(e) => {
                        ok = false;
                        println!("FAIL {}: {e}", outcome.name);
                    }
                }
            }
            return Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) });
        }
        Cmd::Simulate { script } => {
            let text = fs::read_to_string(&script)?;
            let mut sim = Simulator::new();
            let outcome = sim.run_script(&text);
            println!("{}", sim.report);
            outcome?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

/// All `node-<i>.frag` files in `dir`, keyed by 0-based node index.
fn load_dir(dir: &Path) -> Result<BTreeMap<usize, FragmentFile>> {
    let mut out = BTreeMap::new();
    for entry in fs::read_dir(dir)? {
        let path = entry?.path();
        if path.extension().is_some_and(|e| e == "frag") {
            let file = FragmentFile::read(&path)?;
            out.insert(file.fragment.node, file);
        }
    }
    let files: Vec<FragmentFile> = out.values().cloned().collect();
    check_same_code(&files)?;
    Ok(out)
}

fn check_same_code(files: &[FragmentFile]) -> Result<()> {
    match files.iter().find(|f| !f.same_code(&files[0])) {
        Some(f) => Err(HarnessError::Format(format!(
            "node {} belongs to a different code than node {}",
            f.fragment.node + 1,
            files[0].fragment.node + 1
        ))),
        None => Ok(()),
    }
}
