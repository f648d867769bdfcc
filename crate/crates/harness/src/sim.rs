//! A single-process storage cluster driven by scenario scripts.
//!
//! A script has one command per line; `#` starts a comment. Node indices
//! are 1-based.
//!
//! ```text
//! codec rbt n=5 k=3 field=2^4     # must precede the other commands
//! encode seed=7                   # random message, default seed 0
//! fail 3
//! repair 3                        # helpers default to the first d survivors
//! repair 3 1,2,4,5                # or are listed explicitly
//! reconstruct 1,2,4 balanced      # scheme defaults to full
//! ```
//!
//! Every repair is compared with the fragment originally stored and every
//! reconstruction with the original message; a mismatch aborts the run.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use regen_core::{Field, Fragment, OpCount, OpCounter};

use crate::codec::{parse_field, Codec, CodecKind, Retrieval};
use crate::error::{HarnessError, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    Codec {
        kind: CodecKind,
        field: Field,
        n: usize,
        k: usize,
        d: Option<usize>,
    },
    Encode {
        seed: u64,
    },
    Fail(usize),
    Repair {
        node: usize,
        helpers: Option<Vec<usize>>,
    },
    Reconstruct {
        nodes: Vec<usize>,
        retrieval: Retrieval,
    },
}

/// A parsed command and its 1-based source line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScriptLine {
    pub line: usize,
    pub command: Command,
}

fn parse_nodes(s: &str) -> std::result::Result<Vec<usize>, String> {
    s.split(',')
        .map(|t| match t.trim().parse::<usize>() {
            Ok(0) | Err(_) => Err(format!("bad node index `{t}` (nodes are numbered from 1)")),
            Ok(i) => Ok(i - 1),
        })
        .collect()
}

fn parse_line(words: &[&str]) -> std::result::Result<Command, String> {
    let arity = |lo: usize, hi: usize| {
        if words.len() < lo + 1 || words.len() > hi + 1 {
            Err(format!("`{}` takes {lo}..={hi} arguments", words[0]))
        } else {
            Ok(())
        }
    };
    match words[0] {
        "codec" => {
            arity(4, 5)?;
            let kind = words[1].parse()?;
            let (mut field, mut n, mut k, mut d) = (None, None, None, None);
            for w in &words[2..] {
                let (key, value) = w.split_once('=').ok_or_else(|| format!("expected key=value, got `{w}`"))?;
                let num = || value.parse::<usize>().map_err(|_| format!("bad value in `{w}`"));
                match key {
                    "field" => field = Some(parse_field(value)?),
                    "n" => n = Some(num()?),
                    "k" => k = Some(num()?),
                    "d" => d = Some(num()?),
                    _ => return Err(format!("unknown key `{key}`")),
                }
            }
            Ok(Command::Codec {
                kind,
                field: field.ok_or("missing field=")?,
                n: n.ok_or("missing n=")?,
                k: k.ok_or("missing k=")?,
                d,
            })
        }
        "encode" => {
            arity(0, 1)?;
            let seed = match words.get(1) {
                None => 0,
                Some(w) => w
                    .strip_prefix("seed=")
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| format!("expected seed=<integer>, got `{w}`"))?,
            };
            Ok(Command::Encode { seed })
        }
        "fail" => {
            arity(1, 1)?;
            match parse_nodes(words[1])?.as_slice() {
                [i] => Ok(Command::Fail(*i)),
                _ => Err("`fail` takes a single node".into()),
            }
        }
        "repair" => {
            arity(1, 2)?;
            let node = match parse_nodes(words[1])?.as_slice() {
                [i] => *i,
                _ => return Err("`repair` takes a single node".into()),
            };
            let helpers = words.get(2).map(|w| parse_nodes(w)).transpose()?;
            Ok(Command::Repair { node, helpers })
        }
        "reconstruct" => {
            arity(1, 2)?;
            Ok(Command::Reconstruct {
                nodes: parse_nodes(words[1])?,
                retrieval: words.get(2).map_or(Ok(Retrieval::Full), |w| w.parse())?,
            })
        }
        other => Err(format!("unknown command `{other}`")),
    }
}

pub fn parse_script(text: &str) -> Result<Vec<ScriptLine>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("");
        let words: Vec<&str> = content.split_whitespace().collect();
        if words.is_empty() {
            continue;
        }
        let command = parse_line(&words).map_err(|msg| HarnessError::ScriptInvalid { line: i + 1, msg })?;
        out.push(ScriptLine { line: i + 1, command });
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EventKind {
    Encode,
    Fail,
    Repair,
    Reconstruct,
    PartialReconstruct,
}

impl EventKind {
    pub fn name(&self) -> &'static str {
        match self {
            EventKind::Encode => "encode",
            EventKind::Fail => "fail",
            EventKind::Repair => "repair",
            EventKind::Reconstruct => "reconstruct",
            EventKind::PartialReconstruct => "partial-reconstruct",
        }
    }
}

/// Costs of one event.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EventCost {
    pub index: usize,
    pub line: usize,
    pub kind: EventKind,
    /// Node the event targets (fail, repair), 0-based.
    pub target: Option<usize>,
    pub scheme: Option<Retrieval>,
    /// Symbols moved over the network: to the nodes for encode, from the
    /// helpers for repair, to the collector for reconstruct.
    pub symbols: usize,
    pub ops: OpCount,
    /// Symbols sent by each node during this event, indexed by node.
    pub sent: Vec<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CostReport {
    pub events: Vec<EventCost>,
}

impl CostReport {
    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    /// Total symbols each node has sent over the whole run.
    pub fn histogram(&self) -> Vec<usize> {
        let n = self.events.iter().map(|e| e.sent.len()).max().unwrap_or(0);
        let mut out = vec![0; n];
        for e in &self.events {
            for (acc, s) in out.iter_mut().zip(&e.sent) {
                *acc += s;
            }
        }
        out
    }

    pub fn total_symbols(&self) -> usize {
        self.events.iter().map(|e| e.symbols).sum()
    }

    pub fn total_ops(&self) -> OpCount {
        self.events.iter().fold(OpCount::default(), |acc, e| OpCount {
            muls: acc.muls + e.ops.muls,
            adds: acc.adds + e.ops.adds,
        })
    }
}

impl fmt::Display for CostReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:>3} {:>4} {:<20} {:>6} {:<9} {:>8} {:>10} {:>10}", "#", "line", "event", "node", "scheme", "symbols", "muls", "adds")?;
        for e in &self.events {
            writeln!(
                f,
                "{:>3} {:>4} {:<20} {:>6} {:<9} {:>8} {:>10} {:>10}",
                e.index,
                e.line,
                e.kind.name(),
                e.target.map_or("-".into(), |t| (t + 1).to_string()),
                e.scheme.map_or("-", |s| s.name()),
                e.symbols,
                e.ops.muls,
                e.ops.adds
            )?;
        }
        let hist = self.histogram();
        if !hist.is_empty() {
            let cells: Vec<String> = hist.iter().enumerate().map(|(i, s)| format!("{}:{s}", i + 1)).collect();
            writeln!(f, "sent per node: {}", cells.join(" "))?;
        }
        let ops = self.total_ops();
        write!(f, "total: {} symbols, {} muls, {} adds", self.total_symbols(), ops.muls, ops.adds)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeState {
    pub alive: bool,
    pub fragment: Option<Fragment>,
}

/// Codec, data and node table of a simulated cluster.
#[derive(Clone, Debug, Default)]
pub struct ClusterState {
    pub codec: Option<Codec>,
    /// The encoded message and the fragments as originally stored.
    pub message: Option<Vec<u32>>,
    pub original: Vec<Fragment>,
    pub nodes: Vec<NodeState>,
    /// Time-sharing reconstructions performed so far.
    pub timeshare_round: usize,
}

impl ClusterState {
    pub fn alive(&self) -> Vec<usize> {
        (0..self.nodes.len()).filter(|&i| self.nodes[i].alive).collect()
    }

    fn codec(&self) -> Result<&Codec> {
        self.codec
            .as_ref()
            .ok_or_else(|| HarnessError::NodeState("no codec selected".into()))
    }

    fn fragment(&self, node: usize) -> Result<&Fragment> {
        let state = self
            .nodes
            .get(node)
            .ok_or(regen_core::Error::IndexOutOfRange { index: node, limit: self.nodes.len() })?;
        match (&state.fragment, state.alive) {
            (Some(f), true) => Ok(f),
            _ => Err(HarnessError::NodeState(format!("node {} is not available", node + 1))),
        }
    }
}

/// Runs scripts against a [`ClusterState`], appending to a [`CostReport`].
#[derive(Debug, Default)]
pub struct Simulator {
    pub state: ClusterState,
    pub report: CostReport,
}

impl Simulator {
    pub fn new() -> Simulator {
        Simulator::default()
    }

    /// Starts with `codec` already selected.
    pub fn with_codec(codec: Codec) -> Simulator {
        let mut sim = Simulator::default();
        sim.state.codec = Some(codec);
        sim
    }

    pub fn run_script(&mut self, text: &str) -> Result<()> {
        for line in parse_script(text)? {
            self.execute(&line)?;
        }
        Ok(())
    }

    /// Executes one command; errors carry the event index and line.
    pub fn execute(&mut self, line: &ScriptLine) -> Result<()> {
        let index = self.report.events.len();
        let ops = OpCounter::new();
        match self.step(&line.command, &ops) {
            Ok(Some((kind, target, scheme, symbols, sent))) => {
                self.report.events.push(EventCost {
                    index,
                    line: line.line,
                    kind,
                    target,
                    scheme,
                    symbols,
                    ops: ops.count(),
                    sent,
                });
                Ok(())
            }
            Ok(None) => Ok(()),
            Err(e @ HarnessError::ScriptInvalid { .. }) => Err(e),
            Err(e) => Err(HarnessError::Event {
                index,
                line: line.line,
                source: Box::new(e),
            }),
        }
    }

    #[allow(clippy::type_complexity)]
    fn step(
        &mut self,
        command: &Command,
        ops: &OpCounter,
    ) -> Result<Option<(EventKind, Option<usize>, Option<Retrieval>, usize, Vec<usize>)>> {
        let st = &mut self.state;
        match command {
            Command::Codec { kind, field, n, k, d } => {
                *st = ClusterState {
                    codec: Some(Codec::new(*kind, *field, *n, *k, *d)?),
                    ..ClusterState::default()
                };
                Ok(None)
            }
            Command::Encode { seed } => {
                let codec = st.codec()?.clone();
                let p = codec.params();
                let q = codec.field().order();
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                let u: Vec<u32> = (0..p.b).map(|_| rng.gen_range(0..q)).collect();
                let frags = codec.encode(&u, ops)?;
                st.nodes = frags
                    .iter()
                    .map(|f| NodeState {
                        alive: true,
                        fragment: Some(f.clone()),
                    })
                    .collect();
                st.original = frags;
                st.message = Some(u);
                st.timeshare_round = 0;
                Ok(Some((EventKind::Encode, None, None, p.n * p.alpha, vec![0; p.n])))
            }
            Command::Fail(i) => {
                st.fragment(*i)?;
                st.nodes[*i] = NodeState {
                    alive: false,
                    fragment: None,
                };
                Ok(Some((EventKind::Fail, Some(*i), None, 0, vec![0; st.nodes.len()])))
            }
            Command::Repair { node, helpers } => {
                let codec = st.codec()?;
                let n = st.nodes.len();
                if *node >= n {
                    return Err(regen_core::Error::IndexOutOfRange { index: *node, limit: n }.into());
                }
                if st.nodes[*node].alive {
                    return Err(HarnessError::NodeState(format!("node {} has not failed", node + 1)));
                }
                let helpers = helpers.clone().unwrap_or_else(|| codec.default_helpers(*node, &st.alive()));
                let mut sent = vec![0; n];
                let mut responses = Vec::with_capacity(helpers.len());
                for &h in &helpers {
                    let frag = st.fragment(h)?;
                    responses.push((h, codec.helper_symbol(frag, *node, ops)?));
                    sent[h] += 1;
                }
                let repaired = codec.repair(&responses, *node, ops)?;
                if repaired != st.original[*node] {
                    return Err(HarnessError::Mismatch(format!("repaired node {}", node + 1)));
                }
                st.nodes[*node] = NodeState {
                    alive: true,
                    fragment: Some(repaired),
                };
                Ok(Some((EventKind::Repair, Some(*node), None, responses.len(), sent)))
            }
            Command::Reconstruct { nodes, retrieval } => {
                let codec = st.codec()?;
                let message = st
                    .message
                    .as_ref()
                    .ok_or_else(|| HarnessError::NodeState("nothing has been encoded".into()))?;
                let frags = nodes.iter().map(|&i| st.fragment(i).cloned()).collect::<Result<Vec<_>>>()?;
                let mut sent = vec![0; st.nodes.len()];
                let (out, kind) = match retrieval {
                    Retrieval::Full => {
                        for f in &frags {
                            sent[f.node] += f.symbols.len();
                        }
                        (codec.reconstruct(&frags, ops)?, EventKind::Reconstruct)
                    }
                    r => {
                        let plan = codec.plan(nodes, *r, st.timeshare_round)?;
                        let payloads = plan.extract(&frags)?;
                        for (&node, p) in plan.connected.iter().zip(&payloads) {
                            sent[node] += p.len();
                        }
                        let out = codec.reconstruct_partial(&plan, &payloads, ops)?;
                        if *r == Retrieval::Timeshare {
                            st.timeshare_round += 1;
                        }
                        (out, EventKind::PartialReconstruct)
                    }
                };
                if &out != message {
                    return Err(HarnessError::Mismatch("reconstructed message".into()));
                }
                let symbols = sent.iter().sum();
                Ok(Some((kind, None, Some(*retrieval), symbols, sent)))
            }
        }
    }
}

/// Runs `script` on a fresh cluster.
pub fn sim_run(script: &str) -> Result<(CostReport, ClusterState)> {
    let mut sim = Simulator::new();
    sim.run_script(script)?;
    Ok((sim.report, sim.state))
}
