//! Greedy refinement of maximal nets between dyadic scales.

use thiserror::Error;

use crate::geometry::{DistanceMeter, Phase, PointCloud};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NetError {
    #[error("net is already complete (empty residual)")]
    AlreadyComplete,
    #[error("net is not maximal at the given separation: a residual point lies {distance} >= {eps} away")]
    NotMaximal { distance: f64, eps: f64 },
    #[error("separation must be positive, got {0}")]
    BadSeparation(f64),
    #[error("empty point cloud")]
    EmptyCloud,
}

/// `r0 * 2^-exponent`, exact for every exponent the solver produces.
pub fn dyadic_scale(r0: f64, exponent: u32) -> f64 {
    let mut s = r0;
    for _ in 0..exponent {
        s *= 0.5;
    }
    s
}

/// One rung of the ladder: a maximal `(2^-exponent r0)`-net and its complement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NetLevel {
    pub exponent: u32,
    /// Net members in insertion order.
    pub net: Vec<usize>,
    /// Remaining cloud indices, ascending.
    pub residual: Vec<usize>,
}

impl NetLevel {
    /// The first rung: `{v1}` at exponent 1.
    pub fn initial(cloud: &PointCloud) -> Result<Self, NetError> {
        if cloud.is_empty() {
            return Err(NetError::EmptyCloud);
        }
        Ok(NetLevel { exponent: 1, net: vec![0], residual: (1..cloud.len()).collect() })
    }

    pub fn scale(&self, r0: f64) -> f64 {
        dyadic_scale(r0, self.exponent)
    }

    pub fn is_complete(&self) -> bool {
        self.residual.is_empty()
    }

    /// Membership mask over the whole cloud.
    pub fn mask(&self, n: usize) -> Vec<bool> {
        let mut m = vec![false; n];
        for &i in &self.net {
            m[i] = true;
        }
        m
    }
}

/// Refines a maximal `eps`-net into a strictly larger maximal `(2^-k eps)`-net.
///
/// Returns the relative exponent `k`; the new level's exponent is
/// `x.exponent + k`, which is meaningful when `eps = 2^-x.exponent r0`.
/// Residual points are scanned in ascending cloud index.
pub fn refine_net(
    cloud: &PointCloud,
    x: &NetLevel,
    eps: f64,
    meter: &mut DistanceMeter,
) -> Result<(u32, NetLevel), NetError> {
    if x.residual.is_empty() {
        return Err(NetError::AlreadyComplete);
    }
    if !(eps > 0.0) {
        return Err(NetError::BadSeparation(eps));
    }
    meter.with_phase(Phase::NetRefinement, |meter| {
        let mut d = 0.0f64;
        for &u in &x.residual {
            let cu = cloud.coords(u);
            let mut best = f64::INFINITY;
            for &v in &x.net {
                best = best.min(meter.measure(cu, cloud.coords(v)));
            }
            d = d.max(best);
        }
        if d >= eps {
            return Err(NetError::NotMaximal { distance: d, eps });
        }

        let mut k = 1u32;
        let mut threshold = eps * 0.5;
        while threshold > d {
            k += 1;
            threshold *= 0.5;
        }

        let mut net = x.net.clone();
        let mut residual = Vec::with_capacity(x.residual.len());
        for &u in &x.residual {
            let cu = cloud.coords(u);
            let admitted = net.iter().all(|&v| meter.measure(cu, cloud.coords(v)) >= threshold);
            if admitted {
                net.push(u);
            } else {
                residual.push(u);
            }
        }
        debug_assert!(net.len() > x.net.len());
        Ok((k, NetLevel { exponent: x.exponent + k, net, residual }))
    })
}

/// The full sequence `V_1 ⊊ V_2 ⊊ ... ⊊ V_m = V`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NetLadder {
    pub levels: Vec<NetLevel>,
}

impl NetLadder {
    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn last(&self) -> &NetLevel {
        self.levels.last().expect("ladder has at least one level")
    }
}

pub fn build_ladder(cloud: &PointCloud, meter: &mut DistanceMeter) -> Result<NetLadder, NetError> {
    let mut level = NetLevel::initial(cloud)?;
    let mut levels = Vec::new();
    if cloud.r0() == 0.0 {
        levels.push(level);
        return Ok(NetLadder { levels });
    }
    while !level.is_complete() {
        let eps = level.scale(cloud.r0());
        let (_, next) = refine_net(cloud, &level, eps, meter)?;
        levels.push(std::mem::replace(&mut level, next));
    }
    levels.push(level);
    Ok(NetLadder { levels })
}
