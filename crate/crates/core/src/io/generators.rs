//! Synthetic instances with known fairness behaviour.
//!
//! Every generator except `gaussian_blobs` is deterministic; `gaussian_blobs`
//! draws from a seeded generator.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::instance::{Instance, Metric, Point};

pub type GeneratorParams = BTreeMap<String, f64>;

pub const GENERATORS: [&str; 7] = [
    "two_mass",
    "hexagon",
    "three_circles",
    "prf2_counterexample",
    "two_blobs",
    "grid_uniform",
    "gaussian_blobs",
];

/// Parses `key=value,key=value`.
pub fn parse_params(s: &str) -> Result<GeneratorParams> {
    let mut out = GeneratorParams::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (key, value) = part.split_once('=').ok_or_else(|| Error::Unknown {
            kind: "parameter syntax",
            name: part.into(),
        })?;
        let value: f64 = value.trim().parse().map_err(|_| Error::Unknown {
            kind: "parameter value",
            name: part.into(),
        })?;
        out.insert(key.trim().to_string(), value);
    }
    Ok(out)
}

struct Params<'a> {
    name: &'a str,
    values: &'a GeneratorParams,
    allowed: &'static [&'static str],
}

impl Params<'_> {
    fn check(&self) -> Result<()> {
        for key in self.values.keys() {
            if key != "k" && !self.allowed.contains(&key.as_str()) {
                return Err(Error::Unknown {
                    kind: "parameter",
                    name: format!("{key} for generator {}", self.name),
                });
            }
        }
        Ok(())
    }

    fn float(&self, key: &str, default: f64) -> f64 {
        self.values.get(key).copied().unwrap_or(default)
    }

    fn count(&self, key: &str, default: usize) -> Result<usize> {
        match self.values.get(key) {
            None => Ok(default),
            Some(&v) if v >= 0.0 && v.fract() == 0.0 => Ok(v as usize),
            Some(&v) => Err(Error::InvalidInstance(format!(
                "{key} must be a nonnegative integer, got {v}"
            ))),
        }
    }
}

/// Builds a named instance. `k` may be overridden through `params["k"]`.
pub fn generate(name: &str, params: &GeneratorParams) -> Result<Instance> {
    let allowed: &'static [&'static str] = match name {
        "two_mass" => &["a", "b"],
        "hexagon" | "prf2_counterexample" => &[],
        "three_circles" => &["m", "far"],
        "two_blobs" => &["size", "gap"],
        "grid_uniform" => &["side", "spacing"],
        "gaussian_blobs" => &["n", "sigma", "seed"],
        other => {
            return Err(Error::Unknown {
                kind: "generator",
                name: other.into(),
            })
        }
    };
    let p = Params {
        name,
        values: params,
        allowed,
    };
    p.check()?;
    let e = Metric::Euclidean;
    match name {
        "two_mass" => {
            let (a, b) = (p.count("a", 100)?, p.count("b", 10)?);
            Instance::unconstrained(two_mass(a, b), p.count("k", 11)?, e)
        }
        "hexagon" => Instance::unconstrained(hexagon(), p.count("k", 3)?, e),
        "three_circles" => {
            let pts = three_circles(p.count("m", 12)?, p.float("far", 6.0));
            Instance::unconstrained(pts, p.count("k", 3)?, e)
        }
        "prf2_counterexample" => {
            let agents = [0.0, 0.0, 1.0, 1.0].map(Point::from).to_vec();
            let cands = [0.0, 0.5, 0.5, 1.0].map(Point::from).to_vec();
            Instance::discrete(agents, cands, p.count("k", 2)?, e)
        }
        "two_blobs" => {
            let size = p.count("size", 10)?;
            let gap = p.float("gap", 10.0);
            let mut pts = disc(size, 0.5, (0.0, 0.0));
            pts.extend(disc(size, 0.5, (gap, 0.0)));
            Instance::unconstrained(pts, p.count("k", 2)?, e)
        }
        "grid_uniform" => {
            let side = p.count("side", 5)?;
            let spacing = p.float("spacing", 1.0);
            let pts = (0..side * side)
                .map(|i| {
                    Point::new(vec![
                        (i / side) as f64 * spacing,
                        (i % side) as f64 * spacing,
                    ])
                })
                .collect();
            Instance::unconstrained(pts, p.count("k", 4)?, e)
        }
        "gaussian_blobs" => {
            let n = p.count("n", 300)?;
            let pts = gaussian_blobs(n, p.float("sigma", 1.0), p.count("seed", 0)? as u64);
            Instance::unconstrained(pts, p.count("k", 3)?, e)
        }
        _ => unreachable!(),
    }
}

fn two_mass(a: usize, b: usize) -> Vec<Point> {
    let mut pts = vec![Point::from(0.0); a];
    pts.extend(vec![Point::from(1.0); b]);
    pts
}

fn on_circle(center: (f64, f64), radius: f64, degrees: f64) -> Point {
    let t = degrees.to_radians();
    Point::new(vec![
        center.0 + radius * t.cos(),
        center.1 + radius * t.sin(),
    ])
}

/// Two equilateral triangles of circumradius 0.5 whose centers are 5 apart.
fn hexagon() -> Vec<Point> {
    let left = (0.0, 0.0);
    let right = (5.0, 0.0);
    vec![
        on_circle(left, 0.5, 120.0),
        on_circle(left, 0.5, 240.0),
        on_circle(left, 0.5, 360.0),
        on_circle(right, 0.5, 60.0),
        on_circle(right, 0.5, 300.0),
        on_circle(right, 0.5, 180.0),
    ]
}

/// `m` evenly spaced points on each of two radius-0.3 circles centred at
/// `(0, 0.5)` and `(0, -0.5)`, and on a radius-1 circle centred at `(far, 0)`.
fn three_circles(m: usize, far: f64) -> Vec<Point> {
    let ring = |center: (f64, f64), radius: f64| {
        (0..m).map(move |j| {
            let t = 2.0 * PI * j as f64 / m as f64;
            Point::new(vec![
                center.0 + radius * t.cos(),
                center.1 + radius * t.sin(),
            ])
        })
    };
    ring((0.0, 0.5), 0.3)
        .chain(ring((0.0, -0.5), 0.3))
        .chain(ring((far, 0.0), 1.0))
        .collect()
}

/// `size` points spread over a disc by a sunflower spiral.
fn disc(size: usize, radius: f64, center: (f64, f64)) -> Vec<Point> {
    let golden = PI * (3.0 - 5f64.sqrt());
    (0..size)
        .map(|j| {
            let r = radius * ((j as f64 + 0.5) / size as f64).sqrt();
            let t = j as f64 * golden;
            Point::new(vec![center.0 + r * t.cos(), center.1 + r * t.sin()])
        })
        .collect()
}

/// Three isotropic Gaussian blobs centred at `(0, 0)`, `(10, 0)` and `(5, 8)`
/// holding 1/2, 1/3 and 1/6 of the `n` points.
pub fn gaussian_blobs(n: usize, sigma: f64, seed: u64) -> Vec<Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise = Normal::new(0.0, sigma.max(0.0)).expect("finite sigma");
    let first = n / 2;
    let second = n / 3;
    let sizes = [first, second, n - first - second];
    let centers = [(0.0, 0.0), (10.0, 0.0), (5.0, 8.0)];
    let mut pts = Vec::with_capacity(n);
    for (size, (cx, cy)) in sizes.into_iter().zip(centers) {
        for _ in 0..size {
            pts.push(Point::new(vec![
                cx + noise.sample(&mut rng),
                cy + noise.sample(&mut rng),
            ]));
        }
    }
    pts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::Mode;

    #[test]
    fn two_mass_sizes() {
        let inst = generate("two_mass", &parse_params("a=100,b=10").unwrap()).unwrap();
        assert_eq!(inst.n(), 110);
        assert_eq!(inst.k(), 11);
    }

    #[test]
    fn prf2_counterexample_verbatim() {
        let inst = generate("prf2_counterexample", &GeneratorParams::new()).unwrap();
        assert_eq!(inst.mode(), Mode::Discrete);
        let xs = |pts: &[Point]| pts.iter().map(|p| p.coords()[0]).collect::<Vec<_>>();
        assert_eq!(xs(inst.agents()), vec![0.0, 0.0, 1.0, 1.0]);
        assert_eq!(xs(inst.candidates()), vec![0.0, 0.5, 0.5, 1.0]);
        assert_eq!(inst.k(), 2);
    }

    #[test]
    fn hexagon_side_length() {
        let inst = generate("hexagon", &GeneratorParams::new()).unwrap();
        assert_eq!(inst.n(), 6);
        let side = 3f64.sqrt() / 2.0;
        for (a, b) in [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)] {
            assert!((inst.dist(a, b) - side).abs() < 1e-12);
        }
        assert!(inst.dist(2, 5) > 3.0);
    }

    #[test]
    fn three_circles_shape() {
        let inst = generate("three_circles", &GeneratorParams::new()).unwrap();
        assert_eq!(inst.n(), 36);
        assert_eq!(inst.dim(), 2);
        // Opposite points on a small circle are one diameter apart.
        assert!((inst.dist(0, 6) - 0.6).abs() < 1e-12);
    }

    #[test]
    fn generators_are_deterministic() {
        for name in GENERATORS {
            let a = generate(name, &GeneratorParams::new()).unwrap();
            let b = generate(name, &GeneratorParams::new()).unwrap();
            assert_eq!(a.agents(), b.agents(), "{name}");
            assert!(a.agents().iter().all(|p| p.dim() == a.dim()));
        }
    }

    #[test]
    fn rejects_unknown_names_and_params() {
        assert!(generate("nope", &GeneratorParams::new()).is_err());
        assert!(generate("hexagon", &parse_params("z=1").unwrap()).is_err());
        assert!(parse_params("a").is_err());
        assert!(generate("two_mass", &parse_params("a=1.5").unwrap()).is_err());
    }
}
