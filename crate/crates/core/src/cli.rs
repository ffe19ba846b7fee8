//! Command-line front end.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::bounds::{bound_conventional, bound_nc, class_label, recognize, Shape};
use crate::error::{Error, Result};
use crate::evaluate::{evaluate, Evaluation, Heuristic};
use crate::model::{load_instance, Instance};
use crate::power::PowerParams;
use crate::repro::{figure, parse_range, sig6, sweep, volume_sweep, Cell, Figure, Table};

const DEFAULT_VOLUME: f64 = 20.0;

#[derive(Debug, Parser)]
#[command(name = "xorprot", version, about = "1+1 protection with XOR network coding: power, bounds and sweeps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Route, code and evaluate one instance.
    Analyze(Options),
    /// Lower bounds and closed forms for one instance.
    Bounds(Options),
    /// Savings against network size for a generated topology.
    Sweep(Options),
    /// Regenerate figure data as CSV.
    Repro {
        /// fig3, fig4, fig5 or fig6.
        figure: String,
        #[command(flatten)]
        options: Options,
    },
}

#[derive(Debug, Args)]
struct Options {
    /// Generated topology: mesh:N or ring:N (sweep accepts a bare mesh or ring).
    #[arg(long = "gen", value_name = "SPEC", conflicts_with = "instance")]
    generator: Option<String>,
    /// Instance file.
    #[arg(long, value_name = "PATH")]
    instance: Option<PathBuf>,
    /// Uniform demand volume in Gbps; replaces the volumes of a loaded instance.
    #[arg(long, value_name = "GBPS")]
    volume: Option<f64>,
    /// start:stop:step, volumes for analyze and sizes for sweep.
    #[arg(long, value_name = "RANGE")]
    sweep: Option<String>,
    /// osh, ww, pp, wp, pw, oracle, conventional or analytic; comma list for sweep.
    #[arg(long, value_name = "NAME")]
    heuristic: Option<String>,
    /// Equal-cost disjoint pairs considered per demand.
    #[arg(long, default_value_t = 8, value_name = "K")]
    budget: usize,
    /// Power parameters p_port,p_transponder,B.
    #[arg(long, value_name = "PP,PT,B")]
    power: Option<String>,
    /// Write CSV output here instead of standard output.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Source {
    Generated { shape: Shape, n: Option<usize> },
    File(PathBuf),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Analyze,
    Bounds,
    Sweep,
    Repro(Figure),
}

/// Validated settings of one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: CommandKind,
    pub source: Option<Source>,
    pub volume: Option<f64>,
    pub sweep: Option<Vec<f64>>,
    pub heuristics: Vec<Heuristic>,
    pub budget: usize,
    pub params: PowerParams,
    pub out: Option<PathBuf>,
}

fn parse_generator(spec: &str) -> Result<Source> {
    let (name, size) = match spec.split_once(':') {
        Some((name, size)) => (name, Some(size)),
        None => (spec, None),
    };
    let shape = match name.to_ascii_lowercase().as_str() {
        "mesh" => Shape::FullMesh,
        "ring" => Shape::Ring,
        _ => return Err(Error::Usage(format!("unknown generator `{spec}` (expected mesh:N or ring:N)"))),
    };
    let n = size
        .map(|s| {
            s.parse::<usize>()
                .map_err(|_| Error::Usage(format!("`{s}` is not a node count")))
        })
        .transpose()?;
    Ok(Source::Generated { shape, n })
}

fn parse_power(spec: &str) -> Result<PowerParams> {
    let values: Vec<f64> = spec
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::Usage(format!("expected --power pp,pt,B, got `{spec}`")))?;
    let [pp, pt, b] = values[..] else {
        return Err(Error::Usage(format!("expected --power pp,pt,B, got `{spec}`")));
    };
    PowerParams::new(pp, pt, b).map_err(|e| Error::Usage(e.to_string()))
}

impl RunConfig {
    fn from_options(command: CommandKind, o: Options) -> Result<Self> {
        let source = match (o.generator, o.instance) {
            (Some(g), None) => Some(parse_generator(&g)?),
            (None, Some(p)) => Some(Source::File(p)),
            (None, None) => None,
            (Some(_), Some(_)) => {
                return Err(Error::Usage("give either --gen or --instance, not both".into()))
            }
        };
        if source.is_none() && !matches!(command, CommandKind::Repro(_)) {
            return Err(Error::Usage("an instance source is required: --gen or --instance".into()));
        }
        if let Some(v) = o.volume {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::Usage(format!("invalid volume {v}")));
            }
        }
        let heuristics = match &o.heuristic {
            Some(list) => list
                .split(',')
                .map(|h| h.trim().parse::<Heuristic>())
                .collect::<Result<Vec<_>>>()?,
            None => vec![Heuristic::Osh],
        };
        if heuristics.len() > 1 && command != CommandKind::Sweep {
            return Err(Error::Usage("a heuristic list is accepted by sweep only".into()));
        }
        if o.budget == 0 {
            return Err(Error::Usage("--budget must be at least 1".into()));
        }
        Ok(RunConfig {
            command,
            source,
            volume: o.volume,
            sweep: o.sweep.as_deref().map(parse_range).transpose()?,
            heuristics,
            budget: o.budget,
            params: o.power.as_deref().map(parse_power).transpose()?.unwrap_or_default(),
            out: o.out,
        })
    }

    pub fn parse_from<I, T>(args: I) -> std::result::Result<Self, clap::Error>
    where
        I: IntoIterator<Item = T>,
        T: Into<OsString> + Clone,
    {
        let cli = Cli::try_parse_from(args)?;
        let (kind, options) = match cli.command {
            Command::Analyze(o) => (CommandKind::Analyze, o),
            Command::Bounds(o) => (CommandKind::Bounds, o),
            Command::Sweep(o) => (CommandKind::Sweep, o),
            Command::Repro { figure, options } => {
                let fig = figure.parse().map_err(|e: Error| usage_to_clap(e))?;
                (CommandKind::Repro(fig), options)
            }
        };
        RunConfig::from_options(kind, options).map_err(usage_to_clap)
    }

    /// Loads or generates the instance with volume and power overrides applied.
    pub fn instance(&self) -> Result<Instance> {
        let volume = self.volume.unwrap_or(DEFAULT_VOLUME);
        let inst = match &self.source {
            Some(Source::Generated { shape, n }) => {
                let n = n.ok_or_else(|| Error::Usage("--gen needs a size here, e.g. ring:5".into()))?;
                crate::repro::generate(*shape, n, volume)?.with_params(self.params)
            }
            Some(Source::File(path)) => {
                let text = std::fs::read_to_string(path).map_err(|e| {
                    Error::Instance(format!("cannot read {}: {e}", path.display()))
                })?;
                let inst = load_instance(&text)?.with_all_pairs_if_empty(volume)?;
                let inst = match self.volume {
                    Some(v) => inst.with_uniform_volume(v)?,
                    None => inst,
                };
                if self.params == PowerParams::default() {
                    inst
                } else {
                    inst.with_params(self.params)
                }
            }
            None => return Err(Error::Usage("no instance source".into())),
        };
        Ok(inst)
    }
}

fn usage_to_clap(e: Error) -> clap::Error {
    clap::Error::raw(clap::error::ErrorKind::ValueValidation, format!("{e}\n"))
}

/// Runs the front end; returns the process exit code.
pub fn main_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match RunConfig::parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(stderr, "{rendered}")
            } else {
                write!(stdout, "{rendered}")
            };
            return code;
        }
    };
    match run(&config, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn run(config: &RunConfig, stdout: &mut dyn Write) -> Result<()> {
    match config.command {
        CommandKind::Analyze => analyze(config, stdout),
        CommandKind::Bounds => bounds(config, stdout),
        CommandKind::Sweep => {
            let table = size_sweep(config)?;
            emit_csv(config, &table, stdout)
        }
        CommandKind::Repro(fig) => {
            let table = figure(fig, config.budget, &config.params)?;
            emit_csv(config, &table, stdout)
        }
    }
}

fn io(e: std::io::Error) -> Error {
    Error::Usage(format!("write failed: {e}"))
}

fn emit_csv(config: &RunConfig, table: &Table, stdout: &mut dyn Write) -> Result<()> {
    let csv = table.to_csv();
    match &config.out {
        Some(path) => std::fs::write(path, csv)
            .map_err(|e| Error::Usage(format!("cannot write {}: {e}", path.display()))),
        None => stdout.write_all(csv.as_bytes()).map_err(io),
    }
}

fn size_sweep(config: &RunConfig) -> Result<Table> {
    let Some(Source::Generated { shape, n }) = &config.source else {
        return Err(Error::Usage("sweep needs --gen mesh or --gen ring".into()));
    };
    let sizes: Vec<usize> = match (&config.sweep, n) {
        (Some(range), _) => range
            .iter()
            .map(|&x| {
                if x.fract() == 0.0 && x >= 0.0 {
                    Ok(x as usize)
                } else {
                    Err(Error::Usage(format!("size {x} is not a whole number")))
                }
            })
            .collect::<Result<_>>()?,
        (None, Some(n)) => vec![*n],
        (None, None) => return Err(Error::Usage("sweep needs --sweep start:stop:step or a size".into())),
    };
    sweep(
        *shape,
        sizes,
        &config.heuristics,
        config.volume.unwrap_or(DEFAULT_VOLUME),
        config.budget,
        &config.params,
    )
}

fn heuristic(config: &RunConfig) -> Heuristic {
    config.heuristics[0]
}

fn describe(inst: &Instance) -> String {
    let topo = inst.topology();
    let shape = match recognize(inst) {
        Some((shape, _)) => format!(
            ", {shape} class {}",
            class_label(shape, topo.node_count()).unwrap_or_default()
        ),
        None => String::new(),
    };
    format!(
        "instance: {} nodes, {} edges, {} demands{shape}\n",
        topo.node_count(),
        topo.edge_count(),
        inst.demands().len()
    )
}

fn analyze(config: &RunConfig, stdout: &mut dyn Write) -> Result<()> {
    let inst = config.instance()?;
    let h = heuristic(config);
    if let Some(volumes) = &config.sweep {
        let table = volume_sweep(&inst, volumes, h, config.budget)?;
        return emit_csv(config, &table, stdout);
    }
    let e = evaluate(&inst, h, config.budget)?;
    let mut text = describe(&inst);
    let _ = writeln!(text, "heuristic: {h}");
    write_report(&mut text, &e);
    if h != Heuristic::Analytic {
        let b = bound_nc(&inst, &e.assignment)?;
        let _ = writeln!(text, "bound conventional: {} W", sig6(b.conventional_lower));
        let _ = writeln!(text, "bound coded (pairwise): {} W", sig6(b.nc_lower_pairwise));
        let _ = writeln!(text, "bound coded (characteristic): {} W", sig6(b.nc_lower_characteristic));
        let _ = writeln!(text, "coded pairs: {}", e.assignment.pairs().len());
        let demands = inst.demands();
        for p in e.assignment.pairs() {
            let _ = writeln!(
                text,
                "  {} + {} [{}] shared {} hops, saves {} W",
                demands[p.d1],
                demands[p.d2],
                p.combo,
                p.shared_hops(),
                sig6(p.benefit)
            );
        }
    }
    stdout.write_all(text.as_bytes()).map_err(io)?;
    if config.out.is_some() {
        let mut table = Table::new(["d1", "d2", "combo", "shared_hops", "benefit"]);
        let demands = inst.demands();
        for p in e.assignment.pairs() {
            table.rows.push(vec![
                Cell::Text(demands[p.d1].to_string()),
                Cell::Text(demands[p.d2].to_string()),
                Cell::Text(p.combo.to_string()),
                Cell::Num(p.shared_hops() as f64),
                Cell::Num(p.benefit),
            ]);
        }
        emit_csv(config, &table, stdout)?;
    }
    Ok(())
}

fn write_report(text: &mut String, e: &Evaluation) {
    let r = &e.report;
    let _ = writeln!(text, "total power: {} W", sig6(r.p_total));
    let _ = writeln!(text, "conventional power: {} W", sig6(r.p1_conventional));
    let _ = writeln!(text, "coding reduction: {} W", sig6(r.p2_reduction));
    let _ = writeln!(text, "savings: {}%", sig6(r.savings_percent()));
    if let Some((explored, exact)) = e.oracle {
        let _ = writeln!(text, "oracle: {explored} matchings explored, exact {exact}");
    }
}

fn bounds(config: &RunConfig, stdout: &mut dyn Write) -> Result<()> {
    let inst = config.instance()?;
    let mut text = describe(&inst);
    let _ = writeln!(text, "bound conventional: {} W", sig6(bound_conventional(&inst)?));
    let h = heuristic(config);
    if h != Heuristic::Analytic && h != Heuristic::Conventional {
        let e = evaluate(&inst, h, config.budget)?;
        let b = bound_nc(&inst, &e.assignment)?;
        let _ = writeln!(text, "assignment: {h}, {} pairs", e.assignment.pairs().len());
        let _ = writeln!(text, "bound coded (pairwise): {} W", sig6(b.nc_lower_pairwise));
        let _ = writeln!(text, "bound coded (characteristic): {} W", sig6(b.nc_lower_characteristic));
        let _ = writeln!(text, "mean characteristic hops: {}", sig6(b.tilde_h_avg));
        let _ = writeln!(text, "mean volume: {} Gbps", sig6(b.volume_avg));
        if !b.volumes_uniform {
            let _ = writeln!(text, "note: volumes differ, the characteristic bound is not guaranteed");
        }
        let _ = writeln!(text, "achieved: {} W", sig6(e.report.p_total));
    }
    if let Ok((shape, form)) = crate::bounds::closed_form(&inst) {
        let n = inst.topology().node_count();
        let _ = writeln!(
            text,
            "closed form ({shape}, {}): conventional {} W, coded {} W, savings {}%",
            class_label(shape, n)?,
            sig6(form.p_conventional),
            sig6(form.p_coded),
            sig6(form.savings_percent())
        );
        if shape == Shape::FullMesh {
            let _ = writeln!(text, "mesh fluctuation: {}", sig6(crate::bounds::mesh_fluctuation(n)?));
        }
    }
    stdout.write_all(text.as_bytes()).map_err(io)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = main_with(
            std::iter::once("xorprot").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn analyze_mesh() {
        let (code, out, _) = run_args(&["analyze", "--gen", "mesh:5", "--volume", "20", "--heuristic", "osh"]);
        assert_eq!(code, 0);
        assert!(out.contains("total power: 26825 W"), "{out}");
        assert!(out.contains("savings: 16.6667%"), "{out}");
    }

    #[test]
    fn analyze_conventional_ring() {
        let (code, out, _) = run_args(&["analyze", "--gen", "ring:5", "--volume", "20", "--heuristic", "conventional"]);
        assert_eq!(code, 0);
        assert!(out.contains("total power: 53650 W"), "{out}");
    }

    #[test]
    fn analyze_ww_triangle() {
        let (code, out, _) = run_args(&["analyze", "--gen", "ring:3", "--heuristic", "ww", "--volume", "20"]);
        assert_eq!(code, 0);
        assert!(out.contains("savings: 0%"), "{out}");
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run_args(&["analyze"]).0, 2);
        assert_eq!(run_args(&["analyze", "--gen", "star:4"]).0, 2);
        assert_eq!(run_args(&["analyze", "--gen", "ring:2"]).0, 3);
        assert_eq!(run_args(&["analyze", "--gen", "ring:9", "--heuristic", "oracle"]).0, 5);
        assert_eq!(run_args(&["frobnicate"]).0, 2);
        assert_eq!(run_args(&["--help"]).0, 0);
    }

    #[test]
    fn sweep_csv() {
        let (code, out, _) = run_args(&["sweep", "--gen", "ring", "--sweep", "3:5:1", "--heuristic", "pp,ww"]);
        assert_eq!(code, 0);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines[0], "n,class,analytic,pp,ww");
        assert_eq!(lines[3], "5,odd-2,30,30,10");
    }

    #[test]
    fn volume_sweep_csv() {
        let (code, out, _) = run_args(&["analyze", "--gen", "ring:5", "--sweep", "20:60:20"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().count(), 4);
        assert!(out.lines().nth(1).unwrap().starts_with("20,53650,37555"));
    }

    #[test]
    fn power_override() {
        let (code, out, _) = run_args(&["analyze", "--gen", "mesh:3", "--heuristic", "conventional", "--power", "10,10,20"]);
        assert_eq!(code, 0);
        // 18 Gbps·hops... at 20 Gbps each: 6 demands · 3 hops · 20 Gbps · 1 W/Gbps.
        assert!(out.contains("total power: 360 W"), "{out}");
        assert_eq!(run_args(&["analyze", "--gen", "mesh:3", "--power", "10,10"]).0, 2);
    }
}
