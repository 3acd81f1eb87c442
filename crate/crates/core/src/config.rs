//! Flat `key = value` run manifests.
//!
//! Blank lines and `#` comments are ignored. Real values accept fractions
//! such as `1/16`. Lists are comma separated. Every key must be known and
//! must apply to the selected `kind`.

use std::collections::BTreeMap;
use std::path::PathBuf;

use crate::analysis::WindowConstant;
use crate::error::{check_alpha, domain, Error, Result};
use crate::grid::Grid;
use crate::operator::SpatialOrder;
use crate::problems::RandomInitial;
use crate::stepper::SolverConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentKind {
    Convergence,
    Simulate,
    Window,
    Amplification,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Convergence => "convergence",
            Self::Simulate => "simulate",
            Self::Window => "window",
            Self::Amplification => "amplification",
        }
    }

    fn parse(s: &str) -> Result<Self> {
        match s {
            "convergence" => Ok(Self::Convergence),
            "simulate" => Ok(Self::Simulate),
            "window" => Ok(Self::Window),
            "amplification" => Ok(Self::Amplification),
            other => Err(Error::Config(format!(
                "kind: unknown experiment `{other}` (convergence | simulate | window | amplification)"
            ))),
        }
    }

    fn allows(self, key: &str) -> bool {
        const COMMON: &[&str] = &["kind", "alpha", "eps", "dims", "sizes", "order", "out"];
        let extra: &[&str] = match self {
            Self::Convergence => &["dt", "t_end", "levels", "extrapolate"],
            Self::Simulate => &[
                "dt",
                "t_end",
                "extrapolate",
                "seed",
                "init_scale",
                "init_offset",
                "init_file",
                "snapshot_times",
                "window_constant",
            ],
            Self::Window => &["window_constant"],
            Self::Amplification => &["dt", "phases"],
        };
        COMMON.contains(&key) || extra.contains(&key)
    }
}

const KNOWN_KEYS: &[&str] = &[
    "kind",
    "alpha",
    "eps",
    "dims",
    "sizes",
    "order",
    "out",
    "dt",
    "t_end",
    "levels",
    "extrapolate",
    "seed",
    "init_scale",
    "init_offset",
    "init_file",
    "snapshot_times",
    "window_constant",
    "phases",
];

#[derive(Debug, Clone, PartialEq)]
pub enum InitialCondition {
    Random(RandomInitial),
    File(PathBuf),
}

#[derive(Debug, Clone)]
pub struct RunManifest {
    pub kind: ExperimentKind,
    /// For `window` the step fields are placeholders (`dt = 1`, `t_end = 0`);
    /// for `amplification`, `t_end = 0`.
    pub solver: SolverConfig,
    /// Number of 2× refinements of `Δt` and `h` together, starting from `solver`.
    pub levels: usize,
    pub snapshot_times: Vec<f64>,
    pub initial: InitialCondition,
    pub out_dir: Option<PathBuf>,
    pub window_constant: WindowConstant,
    /// Phase samples per axis for amplification sweeps.
    pub phases: usize,
}

impl RunManifest {
    /// Re-checks cross-field constraints, e.g. after command-line overrides.
    pub fn validate(&self) -> Result<()> {
        let s = &self.solver;
        check_alpha(s.alpha)?;
        if !(s.eps > 0.0 && s.eps.is_finite()) {
            return Err(domain("eps", s.eps, "eps > 0"));
        }
        match self.kind {
            ExperimentKind::Convergence => {
                if self.levels == 0 {
                    return Err(domain("levels", 0.0, "at least one level"));
                }
                // The extrapolated column always needs the 2Δt companion run.
                let probe = s.clone().with_extrapolation(true);
                probe.validate()?;
            }
            ExperimentKind::Simulate => {
                s.validate()?;
                if let Some(&t) = self.snapshot_times.iter().find(|&&t| !(t >= 0.0) || t > s.t_end * (1.0 + 1e-12)) {
                    return Err(domain("snapshot_times", t, "0 <= time <= t_end"));
                }
                if let InitialCondition::Random(r) = self.initial {
                    if r.offset.abs() > 1.0 || (r.offset + r.scale).abs() > 1.0 {
                        return Err(Error::Config(format!(
                            "init_scale/init_offset: range [{}, {}] leaves [-1, 1]",
                            r.offset,
                            r.offset + r.scale
                        )));
                    }
                }
            }
            ExperimentKind::Window => {}
            ExperimentKind::Amplification => {
                if !(s.dt > 0.0 && s.dt.is_finite()) {
                    return Err(domain("dt", s.dt, "dt > 0"));
                }
                if self.phases == 0 {
                    return Err(domain("phases", 0.0, "at least one phase sample"));
                }
            }
        }
        Ok(())
    }
}

struct Entries {
    map: BTreeMap<String, (usize, String)>,
}

impl Entries {
    fn raw(&self, key: &str) -> Option<&str> {
        self.map.get(key).map(|(_, v)| v.as_str())
    }

    fn require(&self, key: &'static str, kind: ExperimentKind) -> Result<&str> {
        self.raw(key).ok_or_else(|| {
            Error::Config(format!("missing required key `{key}` for kind {}", kind.name()))
        })
    }
}

fn parse_real(key: &str, text: &str) -> Result<f64> {
    let bad = || Error::Config(format!("{key}: `{text}` is not a number"));
    let value = match text.split_once('/') {
        Some((num, den)) => {
            let num: f64 = num.trim().parse().map_err(|_| bad())?;
            let den: f64 = den.trim().parse().map_err(|_| bad())?;
            num / den
        }
        None => text.parse().map_err(|_| bad())?,
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(bad())
    }
}

fn parse_uint(key: &str, text: &str) -> Result<u64> {
    text.parse()
        .map_err(|_| Error::Config(format!("{key}: `{text}` is not a non-negative integer")))
}

fn parse_list<T>(key: &str, text: &str, item: impl Fn(&str, &str) -> Result<T>) -> Result<Vec<T>> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',').map(|s| item(key, s.trim())).collect()
}

fn parse_bool(key: &str, text: &str) -> Result<bool> {
    match text {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(Error::Config(format!("{key}: `{text}` is not a boolean"))),
    }
}

fn tokenize(text: &str) -> Result<Entries> {
    let mut map = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| {
            Error::Config(format!("line {line_no}: expected key=value, got `{content}`"))
        })?;
        let key = key.trim();
        if !KNOWN_KEYS.contains(&key) {
            return Err(Error::Config(format!("line {line_no}: unknown key `{key}`")));
        }
        if let Some((first, _)) = map.insert(key.to_string(), (line_no, value.trim().to_string())) {
            return Err(Error::Config(format!(
                "line {line_no}: key `{key}` already set on line {first}"
            )));
        }
    }
    Ok(Entries { map })
}

/// Parses and validates a manifest.
pub fn parse_config(text: &str) -> Result<RunManifest> {
    let entries = tokenize(text)?;
    let kind = ExperimentKind::parse(entries.raw("kind").ok_or_else(|| {
        Error::Config("missing required key `kind`".into())
    })?)?;
    if let Some((key, (line, _))) = entries.map.iter().find(|(k, _)| !kind.allows(k)) {
        return Err(Error::Config(format!(
            "line {line}: key `{key}` does not apply to kind {}",
            kind.name()
        )));
    }

    let alpha = parse_real("alpha", entries.require("alpha", kind)?)?;
    check_alpha(alpha)?;
    let eps = parse_real("eps", entries.require("eps", kind)?)?;
    if !(eps > 0.0) {
        return Err(domain("eps", eps, "eps > 0"));
    }

    let mut sizes = parse_list("sizes", entries.require("sizes", kind)?, |k, s| {
        parse_uint(k, s).map(|v| v as usize)
    })?;
    match (entries.raw("dims"), sizes.len()) {
        (None, 1) => {
            return Err(Error::Config(
                "missing required key `dims` (sizes has a single entry)".into(),
            ))
        }
        (None, _) => {}
        (Some(d), n) => {
            let dims = parse_uint("dims", d)? as usize;
            if !(2..=3).contains(&dims) {
                return Err(domain("dims", dims as f64, "dims must be 2 or 3"));
            }
            if n == 1 {
                sizes = vec![sizes[0]; dims];
            } else if n != dims {
                return Err(Error::Config(format!(
                    "sizes: {n} entries but dims = {dims}"
                )));
            }
        }
    }
    let grid = Grid::unit(&sizes)?;

    let order = match entries.raw("order") {
        Some(v) => SpatialOrder::from_int(parse_uint("order", v)? as u32)
            .map_err(|_| Error::Config(format!("order: `{v}` must be 2 or 4")))?,
        None => SpatialOrder::Fourth,
    };
    let needs_steps = matches!(kind, ExperimentKind::Convergence | ExperimentKind::Simulate);
    let dt = match kind {
        ExperimentKind::Window => 1.0,
        _ => parse_real("dt", entries.require("dt", kind)?)?,
    };
    if !(dt > 0.0) {
        return Err(domain("dt", dt, "dt > 0"));
    }
    let t_end = if needs_steps {
        parse_real("t_end", entries.require("t_end", kind)?)?
    } else {
        0.0
    };
    let extrapolate = entries
        .raw("extrapolate")
        .map(|v| parse_bool("extrapolate", v))
        .transpose()?
        .unwrap_or(false);
    let seed = entries.raw("seed").map(|v| parse_uint("seed", v)).transpose()?.unwrap_or(0);

    let mut solver = SolverConfig::new(alpha, eps, dt, t_end, grid)
        .with_order(order)
        .with_extrapolation(extrapolate);
    solver.seed = seed;

    let levels = entries
        .raw("levels")
        .map(|v| parse_uint("levels", v))
        .transpose()?
        .unwrap_or(1) as usize;
    let snapshot_times = entries
        .raw("snapshot_times")
        .map(|v| parse_list("snapshot_times", v, parse_real))
        .transpose()?
        .unwrap_or_default();

    let initial = match (entries.raw("init_file"), kind) {
        (Some(path), _) => {
            if entries.raw("init_scale").is_some() || entries.raw("init_offset").is_some() {
                return Err(Error::Config(
                    "init_file excludes init_scale/init_offset".into(),
                ));
            }
            InitialCondition::File(PathBuf::from(path))
        }
        (None, ExperimentKind::Simulate) => InitialCondition::Random(RandomInitial {
            seed,
            scale: parse_real("init_scale", entries.require("init_scale", kind)?)?,
            offset: parse_real("init_offset", entries.require("init_offset", kind)?)?,
        }),
        (None, _) => InitialCondition::Random(RandomInitial {
            seed,
            scale: 0.0,
            offset: 0.0,
        }),
    };

    let window_constant = match entries.raw("window_constant") {
        None | Some("conservative") => WindowConstant::Conservative,
        Some("relaxed") => WindowConstant::Relaxed,
        Some(other) => {
            return Err(Error::Config(format!(
                "window_constant: `{other}` (conservative | relaxed)"
            )))
        }
    };
    let phases = entries
        .raw("phases")
        .map(|v| parse_uint("phases", v))
        .transpose()?
        .unwrap_or(64) as usize;

    let manifest = RunManifest {
        kind,
        solver,
        levels,
        snapshot_times,
        initial,
        out_dir: entries.raw("out").map(PathBuf::from),
        window_constant,
        phases,
    };
    manifest.validate()?;
    Ok(manifest)
}
