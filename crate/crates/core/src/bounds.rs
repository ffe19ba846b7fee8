//! Analytic lower bounds and closed forms for full meshes and rings.

use std::fmt;

use crate::coding::CodingAssignment;
use crate::error::{Error, Result};
use crate::model::Instance;
use crate::power::PowerParams;
use crate::routing::shortest_path;

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    /// `2k · Σ V·h_min`.
    pub conventional_lower: f64,
    /// `k · (2 Σ V·h_min − Σ_pairs (V1+V2)/2 · shared)`.
    pub nc_lower_pairwise: f64,
    /// `2k · |D| · mean(V) · mean(h̃)`.
    pub nc_lower_characteristic: f64,
    pub h_min: Vec<usize>,
    /// Shared hops of each demand's coded pair.
    pub hat_h: Vec<usize>,
    /// Characteristic hop count `h_min − ĥ/4`.
    pub tilde_h: Vec<f64>,
    pub tilde_h_avg: f64,
    pub volume_avg: f64,
    /// The characteristic bound is only guaranteed when this holds.
    pub volumes_uniform: bool,
}

fn min_hops(instance: &Instance) -> Result<Vec<usize>> {
    instance
        .demands()
        .iter()
        .map(|d| Ok(shortest_path(instance.topology(), d.source, d.dest)?.hop_count()))
        .collect()
}

pub fn bound_conventional(instance: &Instance) -> Result<f64> {
    let h = min_hops(instance)?;
    let sum: f64 = instance
        .demands()
        .iter()
        .zip(&h)
        .map(|(d, &h)| 2.0 * d.volume * h as f64)
        .sum();
    Ok(instance.params().watts(sum))
}

pub fn bound_nc(instance: &Instance, assignment: &CodingAssignment) -> Result<BoundReport> {
    let demands = instance.demands();
    let params = instance.params();
    let h_min = min_hops(instance)?;
    let hat_h = assignment.shared_hops(demands.len());
    let conventional: f64 = demands
        .iter()
        .zip(&h_min)
        .map(|(d, &h)| 2.0 * d.volume * h as f64)
        .sum();
    let coded: f64 = assignment
        .pairs()
        .iter()
        .map(|p| (demands[p.d1].volume + demands[p.d2].volume) / 2.0 * p.shared_hops() as f64)
        .sum();

    let tilde_h: Vec<f64> = h_min
        .iter()
        .zip(&hat_h)
        .map(|(&h, &s)| h as f64 - s as f64 / 4.0)
        .collect();
    let count = demands.len() as f64;
    let (tilde_h_avg, volume_avg) = if demands.is_empty() {
        (0.0, 0.0)
    } else {
        (
            tilde_h.iter().sum::<f64>() / count,
            demands.iter().map(|d| d.volume).sum::<f64>() / count,
        )
    };
    let characteristic = 2.0 * count * volume_avg * tilde_h_avg;

    Ok(BoundReport {
        conventional_lower: params.watts(conventional),
        nc_lower_pairwise: params.watts(conventional - coded).max(0.0),
        nc_lower_characteristic: params.watts(characteristic).max(0.0),
        h_min,
        hat_h,
        tilde_h,
        tilde_h_avg,
        volume_avg,
        volumes_uniform: instance.uniform_volume().is_some(),
    })
}

/// Power figures of a closed-form topology at uniform volume.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedForm {
    pub p_conventional: f64,
    pub p_coded: f64,
    pub savings_fraction: f64,
    /// Working plus protection hops over all demands.
    pub conventional_hops: u128,
    pub shared_hops: u128,
}

impl ClosedForm {
    fn new(conventional_hops: u128, shared_hops: u128, volume: f64, params: &PowerParams) -> Self {
        ClosedForm {
            p_conventional: params.watts(volume * conventional_hops as f64),
            p_coded: params.watts(volume * (conventional_hops - shared_hops) as f64),
            savings_fraction: shared_hops as f64 / conventional_hops as f64,
            conventional_hops,
            shared_hops,
        }
    }

    pub fn savings_percent(&self) -> f64 {
        100.0 * self.savings_fraction
    }
}

fn check_size(n: usize) -> Result<u128> {
    if n < 3 {
        return Err(Error::Domain(format!(
            "closed forms need at least 3 nodes for 1+1 protection (got {n})"
        )));
    }
    Ok(n as u128)
}

fn check_volume(volume: f64) -> Result<()> {
    if !(volume.is_finite() && volume >= 0.0) {
        return Err(Error::Domain(format!("invalid volume {volume}")));
    }
    Ok(())
}

/// Shared hops of the optimal full-mesh coding: `N(N−1)/2` odd, `N(N−2)/2` even.
pub fn mesh_shared_hops(n: usize) -> Result<u128> {
    let n = check_size(n)?;
    Ok(if n % 2 == 1 {
        n * (n - 1) / 2
    } else {
        n * (n - 2) / 2
    })
}

/// Full mesh with all-pairs demands: direct working path, two-hop protection.
pub fn mesh_power(n: usize, volume: f64, params: &PowerParams) -> Result<ClosedForm> {
    check_volume(volume)?;
    let shared = mesh_shared_hops(n)?;
    let n = n as u128;
    Ok(ClosedForm::new(3 * n * (n - 1), shared, volume, params))
}

/// Gap between odd and even full-mesh savings, `1/(6(N−1))`.
pub fn mesh_fluctuation(n: usize) -> Result<f64> {
    let n = check_size(n)?;
    Ok(1.0 / (6.0 * (n - 1) as f64))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RingClass {
    Odd1,
    Odd2,
    Even1,
    Even2,
}

impl fmt::Display for RingClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RingClass::Odd1 => "odd-1",
            RingClass::Odd2 => "odd-2",
            RingClass::Even1 => "even-1",
            RingClass::Even2 => "even-2",
        })
    }
}

pub fn ring_classify(n: usize) -> Result<RingClass> {
    check_size(n)?;
    Ok(if n % 2 == 1 {
        if ((n - 1) / 2) % 2 == 1 {
            RingClass::Odd1
        } else {
            RingClass::Odd2
        }
    } else if ((n - 2) / 2) % 2 == 1 {
        RingClass::Even1
    } else {
        RingClass::Even2
    })
}

/// Shared hops of protection-protection coding on an `n`-ring.
pub fn ring_shared_hops(n: usize) -> Result<u128> {
    let class = ring_classify(n)?;
    let n = n as u128;
    Ok(match class {
        RingClass::Odd1 => n * (n - 3) * (3 * n - 1) / 8,
        RingClass::Odd2 => 3 * n * (n - 1) * (n - 1) / 8,
        RingClass::Even1 => n * n * (3 * n - 8) / 8,
        RingClass::Even2 => n * (n - 2) * (3 * n - 2) / 8,
    })
}

/// Ring with all-pairs demands; a demand at distance `j` uses `j` and `N−j` hops.
pub fn ring_power(n: usize, volume: f64, params: &PowerParams) -> Result<ClosedForm> {
    check_volume(volume)?;
    let shared = ring_shared_hops(n)?;
    let n = n as u128;
    Ok(ClosedForm::new(n * n * n - n * n, shared, volume, params))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    FullMesh,
    Ring,
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Shape::FullMesh => "mesh",
            Shape::Ring => "ring",
        })
    }
}

/// Size class label: ring class, or odd/even for a mesh.
pub fn class_label(shape: Shape, n: usize) -> Result<String> {
    match shape {
        Shape::Ring => Ok(ring_classify(n)?.to_string()),
        Shape::FullMesh => {
            check_size(n)?;
            Ok(if n % 2 == 1 { "odd" } else { "even" }.to_string())
        }
    }
}

/// Recognizes a full mesh or a ring carrying uniform all-pairs traffic.
pub fn recognize(instance: &Instance) -> Option<(Shape, f64)> {
    let volume = instance.uniform_volume()?;
    if !instance.is_all_pairs() {
        return None;
    }
    let topo = instance.topology();
    if topo.is_full_mesh() {
        Some((Shape::FullMesh, volume))
    } else if topo.is_ring() {
        Some((Shape::Ring, volume))
    } else {
        None
    }
}

/// Closed form for `instance`; a domain error unless it is a recognized shape.
pub fn closed_form(instance: &Instance) -> Result<(Shape, ClosedForm)> {
    let Some((shape, volume)) = recognize(instance) else {
        return Err(Error::Domain(
            "closed forms cover full meshes and rings with uniform all-pairs demands only".into(),
        ));
    };
    let n = instance.topology().node_count();
    let form = match shape {
        Shape::FullMesh => mesh_power(n, volume, instance.params())?,
        Shape::Ring => ring_power(n, volume, instance.params())?,
    };
    Ok((shape, form))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coding::select_pairs_osh;
    use crate::model::{generate_full_mesh, generate_ring};
    use crate::routing::route_all;

    const K: PowerParams = PowerParams {
        p_port: 1000.0,
        p_transponder: 73.0,
        wavelength_capacity: 40.0,
    };

    #[test]
    fn classification() {
        assert_eq!(ring_classify(11).unwrap(), RingClass::Odd1);
        assert_eq!(ring_classify(13).unwrap(), RingClass::Odd2);
        assert_eq!(ring_classify(12).unwrap(), RingClass::Even1);
        assert_eq!(ring_classify(14).unwrap(), RingClass::Even2);
        assert_eq!(ring_classify(3).unwrap(), RingClass::Odd1);
        assert_eq!(ring_classify(100).unwrap(), RingClass::Even1);
        assert!(ring_classify(2).is_err());
    }

    #[test]
    fn ring_shared_examples() {
        assert_eq!(ring_shared_hops(11).unwrap(), 352);
        assert_eq!(ring_shared_hops(5).unwrap(), 30);
        assert_eq!(ring_shared_hops(4).unwrap(), 8);
        assert_eq!(ring_shared_hops(15).unwrap(), 990);
    }

    #[test]
    fn ring_first_point() {
        let f = ring_power(5, 20.0, &K).unwrap();
        assert_eq!(f.p_conventional, 53650.0);
        assert_eq!(f.p_coded, 37555.0);
        assert_eq!(f.savings_fraction, 0.3);
    }

    #[test]
    fn mesh_examples() {
        let f = mesh_power(5, 20.0, &K).unwrap();
        assert_eq!((f.p_conventional, f.p_coded), (32190.0, 26825.0));
        assert!((mesh_power(4, 1.0, &K).unwrap().savings_percent() - 11.1111).abs() < 1e-4);
        assert!((mesh_power(14, 1.0, &K).unwrap().savings_percent() - 15.3846).abs() < 1e-4);
        assert!(mesh_power(2, 1.0, &K).is_err());
    }

    #[test]
    fn fluctuation() {
        assert_eq!(mesh_fluctuation(4).unwrap(), 1.0 / 18.0);
        assert!((mesh_fluctuation(14).unwrap() - 0.01282).abs() < 1e-5);
        assert!(mesh_fluctuation(1_000_000).unwrap() < 1e-6);
    }

    #[test]
    fn conventional_bound_examples() {
        let mesh = generate_full_mesh(5, 20.0).unwrap();
        assert_eq!(bound_conventional(&mesh).unwrap(), 21460.0);
        let ring = generate_ring(5, 20.0).unwrap();
        assert_eq!(bound_conventional(&ring).unwrap(), 32190.0);
    }

    #[test]
    fn characteristic_bound_on_mesh() {
        let mesh = generate_full_mesh(5, 20.0).unwrap();
        let routing = route_all(&mesh).unwrap();
        let osh = select_pairs_osh(&mesh, &routing, 8).unwrap();
        let b = bound_nc(&mesh, &osh.assignment).unwrap();
        assert!(b.hat_h.iter().all(|&h| h == 1));
        assert!(b.tilde_h.iter().all(|&h| h == 0.75));
        assert_eq!(b.nc_lower_characteristic, 16095.0);
        assert_eq!(b.nc_lower_pairwise, 16095.0);
    }

    #[test]
    fn empty_assignment_matches_conventional_bound() {
        let ring = generate_ring(7, 3.5).unwrap();
        let b = bound_nc(&ring, &CodingAssignment::default()).unwrap();
        assert_eq!(b.nc_lower_pairwise, bound_conventional(&ring).unwrap());
        assert_eq!(b.nc_lower_pairwise, b.conventional_lower);
    }

    #[test]
    fn recognition() {
        let ring = generate_ring(6, 2.0).unwrap();
        assert_eq!(closed_form(&ring).unwrap().0, Shape::Ring);
        let mesh = generate_full_mesh(4, 2.0).unwrap();
        assert_eq!(recognize(&mesh), Some((Shape::FullMesh, 2.0)));
        let triangle = generate_ring(3, 2.0).unwrap();
        assert_eq!(recognize(&triangle).map(|r| r.0), Some(Shape::FullMesh));
    }
}
