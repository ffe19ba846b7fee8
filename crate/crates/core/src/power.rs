//! Linear power model: every traversed hop costs one router port and one
//! transponder per wavelength, so power is `k · Σ volume · hops` with
//! `k = (p_port + p_transponder) / B`.

use crate::coding::CodingAssignment;
use crate::error::{Error, Result};
use crate::model::Instance;
use crate::routing::PathPair;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerParams {
    pub p_port: f64,
    pub p_transponder: f64,
    /// Wavelength capacity in Gbps.
    pub wavelength_capacity: f64,
}

impl Default for PowerParams {
    fn default() -> Self {
        PowerParams {
            p_port: 1000.0,
            p_transponder: 73.0,
            wavelength_capacity: 40.0,
        }
    }
}

impl PowerParams {
    pub fn new(p_port: f64, p_transponder: f64, wavelength_capacity: f64) -> Result<Self> {
        for (name, value) in [
            ("port power", p_port),
            ("transponder power", p_transponder),
            ("wavelength capacity", wavelength_capacity),
        ] {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::Domain(format!(
                    "{name} must be a positive number (got {value})"
                )));
            }
        }
        Ok(PowerParams {
            p_port,
            p_transponder,
            wavelength_capacity,
        })
    }

    /// Watts per Gbps per hop.
    pub fn slope(&self) -> f64 {
        (self.p_port + self.p_transponder) / self.wavelength_capacity
    }

    /// Power of `gbps_hops` Gbps·hops of traffic.
    ///
    /// Multiplies before dividing so that round inputs give round outputs.
    pub fn watts(&self, gbps_hops: f64) -> f64 {
        (self.p_port + self.p_transponder) * gbps_hops / self.wavelength_capacity
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerReport {
    pub p_total: f64,
    pub p1_conventional: f64,
    pub p2_reduction: f64,
    pub savings_fraction: f64,
}

impl PowerReport {
    /// Report for conventional power `p1` and coding reduction `p2`.
    pub fn from_parts(p1: f64, p2: f64) -> Self {
        // An empty f64 sum is -0.0.
        let (p1, p2) = (p1 + 0.0, p2 + 0.0);
        PowerReport {
            p_total: p1 - p2,
            p1_conventional: p1,
            p2_reduction: p2,
            savings_fraction: if p1 > 0.0 { p2 / p1 } else { 0.0 },
        }
    }

    pub fn savings_percent(&self) -> f64 {
        100.0 * self.savings_fraction
    }
}

/// Checks that `routing[i]` serves `instance.demands()[i]` for every demand.
pub fn check_routing(instance: &Instance, routing: &[PathPair]) -> Result<()> {
    let demands = instance.demands();
    if routing.len() != demands.len() {
        return Err(Error::Contract(format!(
            "routing has {} path pairs for {} demands",
            routing.len(),
            demands.len()
        )));
    }
    for (i, (pair, d)) in routing.iter().zip(demands).enumerate() {
        if pair.demand.source != d.source || pair.demand.dest != d.dest {
            return Err(Error::Contract(format!(
                "routing entry {i} serves {} but demand {i} is {d}",
                pair.demand
            )));
        }
    }
    Ok(())
}

/// Gbps·hops carried by working and protection paths.
pub(crate) fn conventional_volume_hops(instance: &Instance, routing: &[PathPair]) -> f64 {
    instance
        .demands()
        .iter()
        .zip(routing)
        .map(|(d, pair)| d.volume * pair.total_hops() as f64)
        .sum()
}

pub fn eval_conventional(instance: &Instance, routing: &[PathPair]) -> Result<f64> {
    check_routing(instance, routing)?;
    Ok(instance
        .params()
        .watts(conventional_volume_hops(instance, routing)))
}

pub fn eval_with_coding(
    instance: &Instance,
    routing: &[PathPair],
    assignment: &CodingAssignment,
) -> Result<PowerReport> {
    check_routing(instance, routing)?;
    assignment.validate(instance, routing)?;
    let params = instance.params();
    let p1 = params.watts(conventional_volume_hops(instance, routing));
    let demands = instance.demands();
    let saved: f64 = assignment
        .pairs()
        .iter()
        .map(|p| {
            demands[p.d1].volume.min(demands[p.d2].volume) * p.shared_links.len() as f64
        })
        .sum();
    Ok(PowerReport::from_parts(p1, params.watts(saved)))
}
