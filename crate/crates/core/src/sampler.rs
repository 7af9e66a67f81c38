//! Uniform draws on unit spheres and inside spherical layers
//! `SL(c, a0, a1) = { z : a0 <= ||z - c|| <= a1 }`.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::types::{l2_distance, FeatureVector, SamplingMode};

/// Seeded, stream-addressable generator. The same `(seed, stream)` pair
/// reproduces the same draws on every platform.
#[derive(Clone, Debug)]
pub struct RandomSource {
    seed: u64,
    stream: u64,
    rng: ChaCha8Rng,
}

impl RandomSource {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self { seed, stream, rng }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    fn gaussian(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    /// Uniform on `[0, 1)`.
    fn unit(&mut self) -> f64 {
        self.rng.random::<f64>()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LayerSpec {
    center: FeatureVector,
    a0: f64,
    a1: f64,
}

impl LayerSpec {
    pub fn new(center: FeatureVector, a0: f64, a1: f64) -> Result<Self> {
        if !(a0.is_finite() && a1.is_finite() && 0.0 <= a0 && a0 <= a1) {
            return Err(Error::InvalidLayer { a0, a1 });
        }
        Ok(Self { center, a0, a1 })
    }

    pub fn center(&self) -> &FeatureVector {
        &self.center
    }

    pub fn bounds(&self) -> (f64, f64) {
        (self.a0, self.a1)
    }

    pub fn contains(&self, z: &FeatureVector) -> bool {
        let r = l2_distance(z.as_slice(), self.center.as_slice());
        self.a0 <= r && r <= self.a1
    }
}

fn unit_direction(d: usize, rng: &mut RandomSource, out: &mut Vec<f64>) {
    loop {
        out.clear();
        out.extend((0..d).map(|_| rng.gaussian()));
        let norm = out.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > 0.0 && norm.is_finite() {
            out.iter_mut().for_each(|v| *v /= norm);
            return;
        }
    }
}

/// `n` independent points uniform on the surface of the unit sphere in `d`
/// dimensions, obtained by normalizing standard Gaussian draws.
pub fn sample_unit_sphere(d: usize, n: usize, rng: &mut RandomSource) -> Result<Vec<FeatureVector>> {
    if d == 0 {
        return Err(Error::InvalidDimension);
    }
    let mut buf = Vec::with_capacity(d);
    Ok((0..n)
        .map(|_| {
            unit_direction(d, rng, &mut buf);
            FeatureVector::from_raw(buf.clone())
        })
        .collect())
}

fn draw_radius(a0: f64, a1: f64, d: usize, mode: SamplingMode, rng: &mut RandomSource) -> f64 {
    let u = rng.unit();
    match mode {
        SamplingMode::PaperRadiusUniform => a0 + u * (a1 - a0),
        SamplingMode::VolumeUniform => {
            if a1 == 0.0 {
                return 0.0;
            }
            // a1 * (u + (1-u)(a0/a1)^d)^(1/d), which is the inverse CDF
            // (u(a1^d - a0^d) + a0^d)^(1/d) without overflow for large d.
            let inv_d = 1.0 / d as f64;
            let lower = (a0 / a1).powi(d as i32);
            a1 * (u + (1.0 - u) * lower).powf(inv_d)
        }
    }
    .clamp(a0, a1)
}

/// Places `center + r * dir` and nudges `r` until rounding keeps the point's
/// measured distance inside `[a0, a1]`.
fn place(center: &[f64], dir: &[f64], r: f64, a0: f64, a1: f64) -> Vec<f64> {
    let build = |r: f64| -> Vec<f64> { center.iter().zip(dir).map(|(c, u)| c + r * u).collect() };
    let mut radius = r;
    let mut z = build(radius);
    for step in 1..=64 {
        let dist = l2_distance(&z, center);
        let nudge = f64::EPSILON * step as f64 * a1.max(1.0);
        if dist > a1 {
            radius = (radius - nudge).max(a0);
        } else if dist < a0 {
            radius = (radius + nudge).min(a1);
        } else {
            break;
        }
        z = build(radius);
    }
    z
}

/// `n` points in the layer. The direction is uniform on the unit sphere; the
/// radius follows `mode`.
pub fn sample_layer(
    layer: &LayerSpec,
    n: usize,
    mode: SamplingMode,
    rng: &mut RandomSource,
) -> Vec<FeatureVector> {
    let d = layer.center.len();
    let (a0, a1) = (layer.a0, layer.a1);
    let center = layer.center.as_slice();
    if a1 == 0.0 {
        return vec![layer.center.clone(); n];
    }
    let mut dir = Vec::with_capacity(d);
    (0..n)
        .map(|_| {
            unit_direction(d, rng, &mut dir);
            let r = draw_radius(a0, a1, d, mode, rng);
            FeatureVector::from_raw(place(center, &dir, r, a0, a1))
        })
        .collect()
}
