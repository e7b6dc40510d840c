//! Config parsing and command execution behind the `profscope` binary.
//!
//! A run is described by a JSON config; command-line flags override its
//! fields. Every report embeds the tool version and the SHA-256 of the
//! effective config, so identical inputs give byte-identical output.

use serde::{Deserialize, Serialize};
use serde_json::json;
use sha2::{Digest, Sha256};

use crate::budget::Budget;
use crate::classify::{classify_space, perfectness, SpaceKind};
use crate::error::{Error, Result};
use crate::group::{direct_product, make_cyclic, make_dihedral, CayleyTable, FiniteGroup, DEFAULT_SEED};
use crate::subspace::SpaceChain;
use crate::tower::{Certificates, Tower};

pub const TOOL: &str = "profscope";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Info,
    Space,
    Isolated,
    Classify,
    Signature,
    Export,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Dot,
}

/// A finite group named in a config.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum GroupConfig {
    Cyclic(usize),
    /// Dihedral group of order `2n`.
    Dihedral(usize),
    DirectProduct(Vec<GroupConfig>),
    Table(CayleyTable),
}

/// A tower named in a config, tagged by `kind`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TowerConfig {
    Trivial,
    Padic { p: u64 },
    Product { factors: Vec<TowerConfig> },
    FiniteTimes { group: GroupConfig, tower: Box<TowerConfig> },
    Torsion { group: GroupConfig },
    Custom { levels: Vec<CayleyTable>, maps: Vec<Vec<u32>> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    tower: TowerConfig,
    #[serde(default)]
    command: Option<Command>,
    #[serde(default)]
    depth: Option<usize>,
    #[serde(default)]
    window: Option<usize>,
    #[serde(default)]
    normal: Option<bool>,
    #[serde(default)]
    format: Option<Format>,
    #[serde(default)]
    budget: Option<usize>,
    #[serde(default)]
    seed: Option<u64>,
}

pub const DEFAULT_DEPTH: usize = 6;
pub const DEFAULT_WINDOW: usize = 3;

/// Validated run description.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub tower_config: TowerConfig,
    pub tower: Tower,
    pub command: Option<Command>,
    pub depth: usize,
    pub window: usize,
    pub normal_only: bool,
    pub format: Format,
    pub budget: usize,
    pub seed: u64,
}

/// Command-line values that take precedence over the config file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub command: Option<Command>,
    pub depth: Option<usize>,
    pub window: Option<usize>,
    pub normal: bool,
    pub format: Option<Format>,
    pub budget: Option<usize>,
    pub seed: Option<u64>,
}

fn build_group(g: &GroupConfig, budget: &Budget, seed: u64) -> Result<FiniteGroup> {
    match g {
        GroupConfig::Cyclic(n) => {
            budget.check_order(*n as u128)?;
            make_cyclic(*n)
        }
        GroupConfig::Dihedral(n) => make_dihedral(*n, budget),
        GroupConfig::DirectProduct(parts) => {
            let mut acc = make_cyclic(1)?;
            for p in parts {
                acc = direct_product(&acc, &build_group(p, budget, seed)?, budget)?;
            }
            Ok(acc)
        }
        GroupConfig::Table(t) => t.clone().into_group(seed),
    }
}

pub fn build_tower(t: &TowerConfig, budget: &Budget, seed: u64) -> Result<Tower> {
    match t {
        TowerConfig::Trivial => Ok(Tower::trivial()),
        TowerConfig::Padic { p } => Tower::padic(*p),
        TowerConfig::Product { factors } => {
            let (first, rest) = factors
                .split_first()
                .ok_or_else(|| Error::invalid("product needs at least one factor"))?;
            let mut acc = build_tower(first, budget, seed)?;
            for f in rest {
                acc = Tower::product(&acc, &build_tower(f, budget, seed)?);
            }
            Ok(acc)
        }
        TowerConfig::FiniteTimes { group, tower } => Ok(Tower::finite_times(
            &build_group(group, budget, seed)?,
            &build_tower(tower, budget, seed)?,
        )),
        TowerConfig::Torsion { group } => Tower::torsion(&build_group(group, budget, seed)?),
        TowerConfig::Custom { levels, maps } => {
            let groups = levels
                .iter()
                .map(|l| l.clone().into_group(seed))
                .collect::<Result<Vec<_>>>()?;
            Tower::custom(groups, maps.clone())
        }
    }
}

/// Parse and validate a JSON config.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    parse_with(text, &Overrides::default())
}

/// Parse a config and apply command-line overrides.
pub fn parse_with(text: &str, o: &Overrides) -> Result<RunConfig> {
    let raw: RawConfig = serde_json::from_str(text).map_err(|e| Error::invalid(format!("config: {e}")))?;
    let depth = o.depth.or(raw.depth).unwrap_or(DEFAULT_DEPTH);
    let window = o.window.or(raw.window).unwrap_or(DEFAULT_WINDOW);
    if depth < 1 {
        return Err(Error::invalid("depth must be at least 1"));
    }
    if window < 1 {
        return Err(Error::invalid("window must be at least 1"));
    }
    let budget = o.budget.or(raw.budget).unwrap_or(crate::budget::DEFAULT_MAX_ORDER);
    let seed = o.seed.or(raw.seed).unwrap_or(DEFAULT_SEED);
    let tower = build_tower(&raw.tower, &Budget::with_max_order(budget), seed)?;
    Ok(RunConfig {
        tower_config: raw.tower,
        tower,
        command: o.command.or(raw.command),
        depth,
        window,
        normal_only: o.normal || raw.normal.unwrap_or(false),
        format: o.format.or(raw.format).unwrap_or_default(),
        budget,
        seed,
    })
}

impl RunConfig {
    /// SHA-256 of the effective config in canonical JSON.
    pub fn hash(&self) -> String {
        let raw = RawConfig {
            tower: self.tower_config.clone(),
            command: self.command,
            depth: Some(self.depth),
            window: Some(self.window),
            normal: Some(self.normal_only),
            format: Some(self.format),
            budget: Some(self.budget),
            seed: Some(self.seed),
        };
        let text = serde_json::to_string(&raw).expect("config serializes");
        hex::encode(Sha256::digest(text.as_bytes()))
    }

    fn budget(&self) -> Budget {
        Budget::for_levels(self.budget)
    }

    fn space(&self) -> SpaceKind {
        if self.normal_only {
            SpaceKind::N
        } else {
            SpaceKind::S
        }
    }
}

/// Result of one invocation: nothing is written to stdout unless `code` is 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn exit_code(e: &Error) -> i32 {
    if e.is_budget() {
        EXIT_BUDGET
    } else {
        EXIT_INVALID
    }
}

/// Parse, then run; errors map to exit codes.
pub fn run_text(text: &str, o: &Overrides) -> Outcome {
    match parse_with(text, o) {
        Ok(cfg) => run(&cfg),
        Err(e) => Outcome {
            code: exit_code(&e),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

pub fn run(cfg: &RunConfig) -> Outcome {
    match render(cfg) {
        Ok(stdout) => Outcome {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        },
        Err(e) => Outcome {
            code: exit_code(&e),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

fn certificates_json(c: Option<&Certificates>) -> serde_json::Value {
    match c {
        None => serde_json::Value::Null,
        Some(c) => json!({
            "abelian": c.abelian,
            "pro_p": c.pro_p,
            "supernatural": c.supernatural.to_string(),
            "fiber_stable": c.fiber_stable,
            "finitely_generated_bound": c.finitely_generated_bound,
            "virtually_pronilpotent": c.virtually_pronilpotent,
            "pronilpotent": c.pronilpotent,
            "eventually_central_kernels": c.eventually_central_kernels,
            "central_padic_core": c.central_padic_core,
        }),
    }
}

fn envelope(cfg: &RunConfig, command: Command, result: serde_json::Value) -> String {
    let report = json!({
        "tool": TOOL,
        "version": VERSION,
        "config_hash": cfg.hash(),
        "command": command,
        "result": result,
    });
    let mut s = serde_json::to_string_pretty(&report).expect("report serializes");
    s.push('\n');
    s
}

fn dot_header(cfg: &RunConfig, body: String) -> String {
    format!("// {TOOL} {VERSION} config {}\n{body}", cfg.hash())
}

fn render(cfg: &RunConfig) -> Result<String> {
    let command = cfg.command.ok_or_else(|| Error::invalid("no command given"))?;
    let budget = cfg.budget();
    let t = &cfg.tower;
    let d = cfg.depth;
    let dot = cfg.format == Format::Dot;
    let deepest = match command {
        Command::Isolated if !dot => d + cfg.window,
        Command::Isolated => d + 1,
        _ => d,
    };
    budget.check_order(t.level_order(deepest)?)?;
    match command {
        Command::Info => {
            let orders: Vec<String> = (0..=d).map(|n| t.level_order(n).map(|o| o.to_string())).collect::<Result<_>>()?;
            if dot {
                return Err(Error::invalid("info has no DOT rendering"));
            }
            Ok(envelope(
                cfg,
                command,
                json!({
                    "tower": t.label(),
                    "level_orders": orders,
                    "certificates": certificates_json(t.certificates()),
                }),
            ))
        }
        Command::Space | Command::Export if dot => {
            let mut chain = SpaceChain::new(t, cfg.normal_only, &budget);
            let name = format!("{}_{}", t.label(), d);
            let body = chain.level(d)?.points.to_dot(&name);
            Ok(dot_header(cfg, body))
        }
        Command::Space => {
            let mut chain = SpaceChain::new(t, cfg.normal_only, &budget);
            let growth = chain.growth_sequence(d)?;
            let level = chain.level(d)?;
            let orders: Vec<usize> = level.points.subgroups.iter().map(|h| h.order()).collect();
            Ok(envelope(
                cfg,
                command,
                json!({
                    "space": cfg.space().to_string(),
                    "depth": d,
                    "points": level.len(),
                    "orders": orders,
                    "down_map": level.down_map,
                    "covers": level.points.covers,
                    "growth_sequence": growth,
                }),
            ))
        }
        Command::Export => {
            let g = t.level(d, &budget)?;
            Ok(envelope(cfg, command, serde_json::to_value(g.to_json_table()).expect("table serializes")))
        }
        Command::Isolated => {
            let mut chain = SpaceChain::new(t, cfg.normal_only, &budget);
            if dot {
                let body = chain.fiber_dot(d)?;
                return Ok(dot_header(cfg, body));
            }
            let verdicts = chain.isolation_verdicts(d, cfg.window)?;
            Ok(envelope(
                cfg,
                command,
                json!({
                    "space": cfg.space().to_string(),
                    "depth": d,
                    "window": cfg.window,
                    "verdicts": verdicts,
                }),
            ))
        }
        Command::Classify => {
            if dot {
                return Err(Error::invalid("classify has no DOT rendering"));
            }
            let c = classify_space(t, cfg.space(), d, cfg.window, &budget)?;
            let p = perfectness(t, cfg.space(), d, cfg.window, &budget)?;
            let mut v = serde_json::to_value(&c).expect("classification serializes");
            v["perfect"] = serde_json::to_value(&p).expect("perfectness serializes");
            Ok(envelope(cfg, command, v))
        }
        Command::Signature => {
            if dot {
                return Err(Error::invalid("signature has no DOT rendering"));
            }
            let c = classify_space(t, cfg.space(), d, cfg.window, &budget)?;
            Ok(envelope(
                cfg,
                command,
                json!({
                    "space": cfg.space().to_string(),
                    "verdict": c.verdict.name(),
                    "signature": c.verdict.signature().map(|s| s.to_string()),
                    "certified": c.certified,
                }),
            ))
        }
    }
}
