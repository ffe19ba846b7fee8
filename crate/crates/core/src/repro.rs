//! Tabular experiment output: figure data, size sweeps and volume sweeps.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::bounds::{class_label, mesh_power, ring_power, Shape};
use crate::coding::Combo;
use crate::error::{Error, Result};
use crate::evaluate::{evaluate, Heuristic};
use crate::model::{generate_full_mesh, generate_ring, Instance};
use crate::oracle::optimal_matching;
use crate::power::{eval_conventional, PowerParams};
use crate::routing::route_all;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
}

impl Cell {
    pub fn as_num(&self) -> Option<f64> {
        match self {
            Cell::Num(x) => Some(*x),
            Cell::Text(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Table {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    /// Comma-separated, header first, numbers at 6 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .map(|c| match c {
                    Cell::Num(x) => sig6(*x),
                    Cell::Text(t) => t.clone(),
                })
                .collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }
}

/// Plain decimal notation with 6 significant digits and no trailing zeros.
pub fn sig6(x: f64) -> String {
    sig_digits(x, 6)
}

fn sig_digits(x: f64, digits: i32) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x.is_finite() { "0".into() } else { x.to_string() };
    }
    let magnitude = x.abs().log10().floor() as i32;
    let text = if magnitude >= digits - 1 {
        let unit = 10f64.powi(magnitude - digits + 1);
        format!("{:.0}", (x / unit).round() * unit)
    } else {
        let decimals = (digits - 1 - magnitude) as usize;
        let s = format!("{x:.decimals$}");
        let s = s.trim_end_matches('0');
        s.trim_end_matches('.').to_string()
    };
    if text == "-0" {
        "0".into()
    } else {
        text
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    /// Five-node full mesh, power against demand volume.
    Fig3,
    /// Full-mesh savings against size.
    Fig4,
    /// Five-node ring, power against demand volume.
    Fig5,
    /// Ring savings against size.
    Fig6,
}

impl FromStr for Figure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "fig3" => Ok(Figure::Fig3),
            "fig4" => Ok(Figure::Fig4),
            "fig5" => Ok(Figure::Fig5),
            "fig6" => Ok(Figure::Fig6),
            _ => Err(Error::Usage(format!(
                "unknown figure `{s}` (expected fig3, fig4, fig5 or fig6)"
            ))),
        }
    }
}

pub const FIGURE_VOLUMES: [f64; 10] = [20.0, 40.0, 60.0, 80.0, 100.0, 120.0, 140.0, 160.0, 180.0, 200.0];
pub const FIGURE_SIZES: std::ops::RangeInclusive<usize> = 3..=15;

pub fn generate(shape: Shape, n: usize, volume: f64) -> Result<Instance> {
    match shape {
        Shape::FullMesh => generate_full_mesh(n, volume),
        Shape::Ring => generate_ring(n, volume),
    }
}

fn analytic(shape: Shape, n: usize, volume: f64, params: &PowerParams) -> Result<crate::bounds::ClosedForm> {
    match shape {
        Shape::FullMesh => mesh_power(n, volume, params),
        Shape::Ring => ring_power(n, volume, params),
    }
}

/// Power against volume on a five-node topology.
fn power_table(shape: Shape, budget: usize, params: &PowerParams) -> Result<Table> {
    let mut table = Table::new(["volume", "conventional", "nc_analytical", "nc_oracle", "osh"]);
    for v in FIGURE_VOLUMES {
        let inst = generate(shape, 5, v)?.with_params(*params);
        let routing = route_all(&inst)?;
        let oracle = optimal_matching(&inst, &routing, &Combo::ALL)?;
        let osh = evaluate(&inst, Heuristic::Osh, budget)?;
        table.rows.push(vec![
            Cell::Num(v),
            Cell::Num(eval_conventional(&inst, &routing)?),
            Cell::Num(analytic(shape, 5, v, params)?.p_coded),
            Cell::Num(oracle.best_power),
            Cell::Num(osh.report.p_total),
        ]);
    }
    Ok(table)
}

pub fn figure(fig: Figure, budget: usize, params: &PowerParams) -> Result<Table> {
    match fig {
        Figure::Fig3 => power_table(Shape::FullMesh, budget, params),
        Figure::Fig5 => power_table(Shape::Ring, budget, params),
        Figure::Fig4 => sweep(
            Shape::FullMesh,
            FIGURE_SIZES,
            &[Heuristic::Osh, Heuristic::Fixed(Combo::WW), Heuristic::Fixed(Combo::PP)],
            20.0,
            budget,
            params,
        ),
        Figure::Fig6 => sweep(
            Shape::Ring,
            FIGURE_SIZES,
            &[
                Heuristic::Osh,
                Heuristic::Fixed(Combo::WW),
                Heuristic::Fixed(Combo::WP),
                Heuristic::Fixed(Combo::PW),
                Heuristic::Fixed(Combo::PP),
            ],
            20.0,
            budget,
            params,
        ),
    }
}

/// Savings percentages per size: `n`, `class`, `analytic`, then one column per heuristic.
pub fn sweep(
    shape: Shape,
    sizes: impl IntoIterator<Item = usize>,
    heuristics: &[Heuristic],
    volume: f64,
    budget: usize,
    params: &PowerParams,
) -> Result<Table> {
    let mut header = vec!["n".to_string(), "class".to_string(), "analytic".to_string()];
    let heuristics: Vec<Heuristic> = heuristics
        .iter()
        .copied()
        .filter(|&h| h != Heuristic::Analytic)
        .collect();
    header.extend(heuristics.iter().map(|h| h.name()));
    let mut table = Table {
        header,
        rows: Vec::new(),
    };
    for n in sizes {
        let mut row = vec![
            Cell::Num(n as f64),
            Cell::Text(class_label(shape, n)?),
            Cell::Num(analytic(shape, n, volume, params)?.savings_percent()),
        ];
        if !heuristics.is_empty() {
            let inst = generate(shape, n, volume)?.with_params(*params);
            for &h in &heuristics {
                row.push(Cell::Num(evaluate(&inst, h, budget)?.report.savings_percent()));
            }
        }
        table.rows.push(row);
    }
    Ok(table)
}

/// Power of one strategy against volume on a fixed instance.
pub fn volume_sweep(
    instance: &Instance,
    volumes: &[f64],
    heuristic: Heuristic,
    budget: usize,
) -> Result<Table> {
    let mut table = Table::new(["volume", "conventional", "total", "reduction", "savings_percent"]);
    for &v in volumes {
        let inst = instance.with_uniform_volume(v)?;
        let e = evaluate(&inst, heuristic, budget)?;
        table.rows.push(vec![
            Cell::Num(v),
            Cell::Num(e.report.p1_conventional),
            Cell::Num(e.report.p_total),
            Cell::Num(e.report.p2_reduction),
            Cell::Num(e.report.savings_percent()),
        ]);
    }
    Ok(table)
}

/// Parses `start:stop:step` into the inclusive arithmetic sequence.
pub fn parse_range(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let bad = || Error::Usage(format!("expected start:stop:step, got `{spec}`"));
    let [a, b, c] = parts[..] else {
        return Err(bad());
    };
    let parse = |s: &str| s.trim().parse::<f64>().map_err(|_| bad());
    let (start, stop, step) = (parse(a)?, parse(b)?, parse(c)?);
    if step.is_nan() || step <= 0.0 || !start.is_finite() || !stop.is_finite() || stop < start {
        return Err(Error::Usage(format!(
            "sweep `{spec}` needs a positive step and start <= stop"
        )));
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| start + i as f64 * step).collect())
}
