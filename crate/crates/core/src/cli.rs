// SPDX-License-Identifier: Apache-2.0

//! Command dispatch behind the `dnflat` binary.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::document::{BracketDocument, LoadedBracket, MapDocument};
use crate::error::{Error, Result};
use crate::bracket::CoordinateMap;
use crate::report::{Check, Report};
use crate::suite::{self, Family, SpectralOptions};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Validate,
    Jacobi,
    Connections,
    Curvature,
    Flatness,
    Transform,
    Lowdegree,
    Spectral,
    Report,
    Replay,
}

impl Command {
    pub const ALL: [Command; 10] = [
        Command::Validate,
        Command::Jacobi,
        Command::Connections,
        Command::Curvature,
        Command::Flatness,
        Command::Transform,
        Command::Lowdegree,
        Command::Spectral,
        Command::Report,
        Command::Replay,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Jacobi => "jacobi",
            Command::Connections => "connections",
            Command::Curvature => "curvature",
            Command::Flatness => "flatness",
            Command::Transform => "transform",
            Command::Lowdegree => "lowdegree",
            Command::Spectral => "spectral",
            Command::Report => "report",
            Command::Replay => "replay",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Schema(format!("unknown command `{s}`")))
    }
}

/// Flags shared by all commands.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Options {
    pub which: Family,
    pub s: u32,
    pub map: Option<PathBuf>,
    pub seed: u64,
    pub max_degu: u32,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            which: Family::Flat,
            s: 0,
            map: None,
            seed: 0,
            max_degu: 3,
        }
    }
}

fn family_name(f: Family) -> &'static str {
    match f {
        Family::Standard => "std",
        Family::Flat => "flat",
    }
}

pub fn parse_family(s: &str) -> Result<Family> {
    match s {
        "std" => Ok(Family::Standard),
        "flat" => Ok(Family::Flat),
        _ => Err(Error::Schema(format!("unknown connection family `{s}` (expected std or flat)"))),
    }
}

impl Options {
    /// The flags that influence `command`, as recorded in reports.
    pub fn recorded(&self, command: Command) -> Vec<(String, String)> {
        let mut out = Vec::new();
        let mut put = |k: &str, v: String| out.push((k.to_owned(), v));
        match command {
            Command::Curvature => {
                put("which", family_name(self.which).to_owned());
                put("s", self.s.to_string());
            }
            Command::Transform => {
                if let Some(m) = &self.map {
                    put("map", m.display().to_string());
                }
            }
            Command::Spectral => {
                put("seed", self.seed.to_string());
                put("max-degu", self.max_degu.to_string());
            }
            Command::Report => {
                if let Some(m) = &self.map {
                    put("map", m.display().to_string());
                }
                put("seed", self.seed.to_string());
                put("max-degu", self.max_degu.to_string());
            }
            _ => {}
        }
        out
    }

    fn from_recorded(items: &[(String, String)]) -> Result<Options> {
        let mut o = Options::default();
        let bad = |k: &str, v: &str| Error::Schema(format!("invalid recorded option {k} = {v}"));
        for (k, v) in items {
            match k.as_str() {
                "which" => o.which = parse_family(v)?,
                "s" => o.s = v.parse().map_err(|_| bad(k, v))?,
                "map" => o.map = Some(PathBuf::from(v)),
                "seed" => o.seed = v.parse().map_err(|_| bad(k, v))?,
                "max-degu" => o.max_degu = v.parse().map_err(|_| bad(k, v))?,
                _ => return Err(bad(k, v)),
            }
        }
        Ok(o)
    }
}

fn spectral_options(o: &Options) -> SpectralOptions {
    SpectralOptions {
        seed: o.seed,
        max_degu: o.max_degu,
        ..SpectralOptions::default()
    }
}

/// Run the checks of `command` on an already loaded bracket. `map` is the
/// coordinate change used by `transform` and optionally by `report`.
pub fn checks(command: Command, doc: &LoadedBracket, opts: &Options, map: Option<&CoordinateMap>) -> Result<Vec<Check>> {
    let b = &doc.bracket;
    match command {
        Command::Validate => Ok(suite::validate(b)),
        Command::Jacobi => Ok(suite::jacobi(b)),
        Command::Connections => suite::connections(b),
        Command::Curvature => suite::curvature(b, opts.which, opts.s),
        Command::Flatness => suite::flatness(b),
        Command::Transform => {
            let map = map.ok_or_else(|| Error::Precondition("transform requires a coordinate map".into()))?;
            suite::transform(b, map)
        }
        Command::Lowdegree => suite::lowdegree(b, doc.potemin.as_ref()),
        Command::Spectral => suite::spectral(b, &spectral_options(opts)),
        Command::Report => {
            let mut out = suite::flatness(b)?;
            if b.check_skew() {
                out.extend(suite::connections(b)?);
                out.extend(suite::lowdegree(b, doc.potemin.as_ref())?);
                out.extend(suite::spectral(b, &spectral_options(opts))?);
            }
            if let Some(map) = map {
                out.extend(suite::transform(b, map)?);
            }
            Ok(out)
        }
        Command::Replay => Err(Error::Precondition("replay takes a report, not a bracket".into())),
    }
}

/// Run `command` on the document at `input`. Errors are input or precondition
/// problems; check failures are recorded in the report.
pub fn run(command: Command, input: &Path, opts: &Options) -> Result<Report> {
    if command == Command::Replay {
        return replay(input);
    }
    let doc = BracketDocument::load(input)?;
    let mut report = Report::new(command.name(), input.display().to_string());
    report.options = opts.recorded(command);
    if command == Command::Transform && opts.map.is_none() {
        return Err(Error::Precondition("transform requires --map".into()));
    }
    let map = match command {
        Command::Transform | Command::Report => opts.map.as_deref().map(MapDocument::load).transpose()?,
        _ => None,
    };
    report.extend(checks(command, &doc, opts, map.as_ref())?);
    Ok(report)
}

/// `p` as given if it exists, otherwise relative to `base`.
fn resolve(p: &Path, base: Option<&Path>) -> PathBuf {
    match base {
        Some(dir) if p.is_relative() && !p.exists() => dir.join(p),
        _ => p.to_path_buf(),
    }
}

/// Re-run the command recorded in a JSON report and compare statuses.
pub fn replay(report_path: &Path) -> Result<Report> {
    let file = report_path.display().to_string();
    let text = std::fs::read_to_string(report_path).map_err(|e| Error::Input {
        file: file.clone(),
        line: None,
        message: e.to_string(),
    })?;
    let old = Report::from_json(&text).map_err(|e| Error::Input {
        file: file.clone(),
        line: None,
        message: e.to_string(),
    })?;
    let command: Command = old.command.parse()?;
    if command == Command::Replay {
        return Err(Error::Schema("cannot replay a replay report".into()));
    }
    let base = report_path.parent();
    let mut opts = Options::from_recorded(&old.options)?;
    opts.map = opts.map.map(|m| resolve(&m, base));
    let input = resolve(Path::new(&old.input), base);
    let new = run(command, &input, &opts)?;
    let mut out = Report::new("replay", file);
    out.options = vec![("command".into(), old.command.clone())];
    let (was, now) = (old.statuses(), new.statuses());
    let witness = if was.len() != now.len() {
        Some(format!("{} checks recorded, {} on rerun", was.len(), now.len()))
    } else {
        was.iter()
            .zip(&now)
            .find(|(a, b)| a != b)
            .map(|(a, b)| format!("{}: recorded {}, rerun {} {}", a.0, a.1, b.0, b.1))
    };
    out.push(Check::from_witness("statuses reproduced", witness).with_details(vec![format!("{} checks", was.len())]));
    Ok(out)
}

/// Process exit code for a finished run: 0 when every check passed, 1 otherwise.
pub fn exit_code(report: &Report) -> i32 {
    if report.all_passed() {
        0
    } else {
        1
    }
}

/// Exit code for a run that could not complete.
pub const INPUT_ERROR: i32 = 2;
