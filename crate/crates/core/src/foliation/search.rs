//! Global search for foliation directions on the unit sphere of the algebra.
//!
//! The total residual `r(u) = ‖∇_u u‖² + conformal(u)²` is sampled on a
//! Fibonacci lattice, the lowest sample of each basin is refined by damped
//! Gauss-Newton steps on the sphere, and refined points with `r` below the
//! acceptance threshold are clustered modulo `u ↦ −u`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{horizontal_frame, residuals_in_frame, FoliationCandidate};
use crate::algebra::{MetricSpec, StructureConstants, Vec3, DEFAULT_TOL};
use crate::error::Result;
use crate::geometry::{connection, curvature, ConnectionCoefficients, CurvatureReport};
use crate::random::random_metric;

/// Tunables for [`search_directions`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SearchOptions {
    /// Number of Fibonacci lattice points on the sphere.
    pub lattice: usize,
    /// Seeds must satisfy `r / ‖Γ‖² < coarse`.
    pub coarse: f64,
    /// Refined points with `r < accept` are foliation directions.
    pub accept: f64,
    /// Angular radius (radians) for merging refined directions.
    pub cluster_radius: f64,
    pub max_iterations: usize,
    /// At most this many basins are refined.
    pub max_seeds: usize,
    /// Jacobi validity tolerance.
    pub tol: f64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            lattice: 20_000,
            coarse: 5e-2,
            accept: 1e-14,
            cluster_radius: 1e-4,
            max_iterations: 50,
            max_seeds: 16,
            tol: DEFAULT_TOL,
        }
    }
}

/// Output of [`search_directions`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FoliationReport {
    pub constant_curvature: bool,
    pub directions: Vec<FoliationCandidate>,
    pub admits: bool,
    /// Smallest sampled total residual; `None` when the lattice was not sampled.
    pub lattice_min_residual: Option<f64>,
}

/// Raw lattice search result, with no constant-curvature shortcut.
#[derive(Clone, Debug, PartialEq)]
pub struct DirectionSearch {
    pub directions: Vec<FoliationCandidate>,
    pub lattice_min_residual: f64,
}

/// Residual map `u ↦ F(u)` with `‖F(u)‖² = r(u)`, smooth in `u`.
struct Objective {
    gamma: ConnectionCoefficients,
}

impl Objective {
    /// Geodesic vector `∇_u u` followed by `√2 ·` the trace-free part of the
    /// symmetrised `⟨∇_· u, ·⟩` projected to `u^⊥`.
    fn vector(&self, u: &Vec3) -> [f64; 12] {
        let g = self.gamma.covariant(u, u);
        // s[a][b] = ⟨∇_{e_a} u, e_b⟩
        let mut s = [[0.0; 3]; 3];
        for (a, row) in s.iter_mut().enumerate() {
            for (b, entry) in row.iter_mut().enumerate() {
                *entry = (0..3).map(|k| u[k] * self.gamma.get(a, k, b)).sum();
            }
        }
        let uu = u.norm_squared();
        let proj = |i: usize, j: usize| (if i == j { 1.0 } else { 0.0 }) - u[i] * u[j] / uu;
        let mut sym = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                sym[i][j] = 0.5 * (s[i][j] + s[j][i]);
            }
        }
        // t = Π sym Π
        let mut t = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                let mut v = 0.0;
                for k in 0..3 {
                    for l in 0..3 {
                        v += proj(i, k) * sym[k][l] * proj(l, j);
                    }
                }
                t[i][j] = v;
            }
        }
        let half_trace = 0.5 * (t[0][0] + t[1][1] + t[2][2]);
        let mut out = [0.0; 12];
        out[..3].copy_from_slice(g.as_slice());
        for i in 0..3 {
            for j in 0..3 {
                out[3 + 3 * i + j] = std::f64::consts::SQRT_2 * (t[i][j] - half_trace * proj(i, j));
            }
        }
        out
    }

    fn value(&self, u: &Vec3) -> f64 {
        self.vector(u).iter().map(|v| v * v).sum()
    }

    /// Damped Gauss-Newton iteration in tangent coordinates.
    fn refine(&self, start: Vec3, max_iterations: usize) -> (Vec3, f64) {
        const FD_STEP: f64 = 1e-6;
        let mut u = start.normalize();
        let mut f = self.vector(&u);
        let mut r: f64 = f.iter().map(|v| v * v).sum();
        for _ in 0..max_iterations {
            if r == 0.0 {
                break;
            }
            let (h1, h2) = horizontal_frame(&u);
            let mut jac = [[0.0; 2]; 12];
            for (col, h) in [h1, h2].iter().enumerate() {
                let plus = self.vector(&(u + h * FD_STEP).normalize());
                let minus = self.vector(&(u - h * FD_STEP).normalize());
                for row in 0..12 {
                    jac[row][col] = (plus[row] - minus[row]) / (2.0 * FD_STEP);
                }
            }
            let mut jtj = [[0.0; 2]; 2];
            let mut jtf = [0.0; 2];
            for row in 0..12 {
                for p in 0..2 {
                    jtf[p] += jac[row][p] * f[row];
                    for q in 0..2 {
                        jtj[p][q] += jac[row][p] * jac[row][q];
                    }
                }
            }
            let mu = 1e-14 * (jtj[0][0] + jtj[1][1]) + f64::MIN_POSITIVE;
            jtj[0][0] += mu;
            jtj[1][1] += mu;
            let det = jtj[0][0] * jtj[1][1] - jtj[0][1] * jtj[1][0];
            if !(det.abs() > 0.0) {
                break;
            }
            let d0 = -(jtj[1][1] * jtf[0] - jtj[0][1] * jtf[1]) / det;
            let d1 = -(jtj[0][0] * jtf[1] - jtj[1][0] * jtf[0]) / det;
            let step = h1 * d0 + h2 * d1;

            let mut scale = 1.0;
            let mut improved = false;
            while scale > 1e-10 {
                let cand = (u + step * scale).normalize();
                let fc = self.vector(&cand);
                let rc: f64 = fc.iter().map(|v| v * v).sum();
                if rc < r {
                    u = cand;
                    f = fc;
                    r = rc;
                    improved = true;
                    break;
                }
                scale *= 0.5;
            }
            if !improved || step.norm() * scale < 1e-15 {
                break;
            }
        }
        (u, r)
    }
}

/// Deterministic Fibonacci lattice with `n` points on the unit sphere.
pub fn fibonacci_lattice(n: usize) -> Vec<Vec3> {
    let golden_angle = std::f64::consts::PI * (3.0 - 5.0_f64.sqrt());
    (0..n)
        .map(|i| {
            let z = 1.0 - (2.0 * i as f64 + 1.0) / n as f64;
            let rho = (1.0 - z * z).max(0.0).sqrt();
            let phi = golden_angle * i as f64;
            Vec3::new(rho * phi.cos(), rho * phi.sin(), z)
        })
        .collect()
}

/// Sign convention: largest-magnitude component positive, lowest index on ties.
fn canonical_sign(u: Vec3) -> Vec3 {
    let mut k = 0;
    for i in 1..3 {
        if u[i].abs() > u[k].abs() {
            k = i;
        }
    }
    if u[k] < 0.0 {
        -u
    } else {
        u
    }
}

/// Lattice sampling plus refinement, run on every input.
///
/// For flat or round metrics every direction may qualify; the result then
/// holds one direction per refined basin.
pub fn locate_directions(c: &StructureConstants, opts: &SearchOptions) -> Result<DirectionSearch> {
    c.check_jacobi(opts.tol)?;
    let gamma = connection(c);
    let objective = Objective { gamma };
    let scale = gamma.norm_squared();
    let points = fibonacci_lattice(opts.lattice.max(1));
    let values: Vec<f64> = points.par_iter().map(|u| objective.value(u)).collect();

    let lattice_min_residual = values.iter().copied().fold(f64::INFINITY, f64::min);
    if scale == 0.0 {
        // Flat with vanishing connection: every direction is exact.
        let u = canonical_sign(Vec3::z());
        return Ok(DirectionSearch {
            directions: vec![candidate(&gamma, u)],
            lattice_min_residual,
        });
    }

    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]).then(i.cmp(&j)));

    let spacing = (4.0 * std::f64::consts::PI / points.len() as f64).sqrt();
    let separation = (2.0 * spacing).min(0.5).cos();
    let mut seeds: Vec<Vec3> = Vec::new();
    for &i in &order {
        if values[i] / scale >= opts.coarse || seeds.len() >= opts.max_seeds {
            break;
        }
        let p = points[i];
        if seeds.iter().all(|s| s.dot(&p).abs() < separation) {
            seeds.push(p);
        }
    }

    let refined: Vec<(Vec3, f64)> = seeds
        .par_iter()
        .map(|s| objective.refine(*s, opts.max_iterations))
        .collect();

    let mut accepted: Vec<(Vec3, f64)> = refined
        .into_iter()
        .filter(|(_, r)| *r < opts.accept)
        .map(|(u, r)| (canonical_sign(u), r))
        .collect();
    accepted.sort_by(|x, y| x.1.total_cmp(&y.1));
    let merge = opts.cluster_radius.cos();
    let mut kept: Vec<Vec3> = Vec::new();
    for (u, _) in accepted {
        if kept.iter().all(|k| k.dot(&u).abs() < merge) {
            kept.push(u);
        }
    }
    kept.sort_by(|x, y| {
        x.iter()
            .zip(y.iter())
            .map(|(a, b)| a.total_cmp(b))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    Ok(DirectionSearch {
        directions: kept.into_iter().map(|u| candidate(&gamma, u)).collect(),
        lattice_min_residual,
    })
}

fn candidate(gamma: &ConnectionCoefficients, u: Vec3) -> FoliationCandidate {
    let (h1, h2) = horizontal_frame(&u);
    let (geodesic_residual, conformal_residual) = residuals_in_frame(gamma, &u, &h1, &h2);
    FoliationCandidate {
        direction: [u.x, u.y, u.z],
        geodesic_residual,
        conformal_residual,
    }
}

/// Foliation directions of an orthonormal-basis algebra.
///
/// Constant-curvature metrics are reported as admitting, without directions.
pub fn search_directions(c: &StructureConstants, opts: &SearchOptions) -> Result<FoliationReport> {
    c.check_jacobi(opts.tol)?;
    let report = curvature(c);
    search_with_curvature(c, &report, opts)
}

pub(crate) fn search_with_curvature(
    c: &StructureConstants,
    report: &CurvatureReport,
    opts: &SearchOptions,
) -> Result<FoliationReport> {
    if report.constant_curvature.is_some() {
        return Ok(FoliationReport {
            constant_curvature: true,
            directions: Vec::new(),
            admits: true,
            lattice_min_residual: None,
        });
    }
    let found = locate_directions(c, opts)?;
    Ok(FoliationReport {
        constant_curvature: false,
        admits: !found.directions.is_empty(),
        directions: found.directions,
        lattice_min_residual: Some(found.lattice_min_residual),
    })
}

/// Whether the given metric, or some sampled metric, carries a foliation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct AdmissionVerdict {
    pub admits_with_this_metric: bool,
    pub admits_with_some_sampled_metric: bool,
    /// Sampled metrics examined before stopping.
    pub metrics_examined: usize,
}

/// Runs the search for `metric` and then for up to `trials` random metrics
/// drawn from a generator seeded with `seed`, stopping at the first success.
/// A negative answer is sampling evidence only.
pub fn admits_harmonic_morphism(
    c: &StructureConstants,
    metric: &MetricSpec,
    trials: usize,
    seed: u64,
    opts: &SearchOptions,
) -> Result<AdmissionVerdict> {
    c.check_jacobi(opts.tol)?;
    let with_metric = search_directions(&c.orthonormalize(metric), opts)?.admits;
    let mut verdict = AdmissionVerdict {
        admits_with_this_metric: with_metric,
        admits_with_some_sampled_metric: with_metric,
        metrics_examined: 0,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let g = random_metric(&mut rng);
        verdict.metrics_examined += 1;
        if search_directions(&c.orthonormalize(&g), opts)?.admits {
            verdict.admits_with_some_sampled_metric = true;
            break;
        }
    }
    Ok(verdict)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::catalog;

    fn cons(name: &str, alpha: Option<f64>) -> StructureConstants {
        catalog(name, alpha).unwrap().constants
    }

    #[test]
    fn lattice_is_on_sphere() {
        let pts = fibonacci_lattice(1000);
        assert_eq!(pts.len(), 1000);
        assert!(pts.iter().all(|p| (p.norm() - 1.0).abs() < 1e-14));
    }

    #[test]
    fn objective_matches_frame_residuals() {
        let c = cons("G4", None);
        let objective = Objective {
            gamma: connection(&c),
        };
        for u in fibonacci_lattice(50) {
            let (g, k) = super::super::residuals(&c, &u).unwrap();
            assert!((objective.value(&u) - (g * g + k * k)).abs() < 1e-12);
        }
    }

    #[test]
    fn sol_has_no_directions() {
        let r = search_directions(&cons("Sol3", Some(1.0)), &SearchOptions::default()).unwrap();
        assert!(!r.constant_curvature);
        assert!(r.directions.is_empty());
        assert!(!r.admits);
        assert!(r.lattice_min_residual.unwrap() > 1e-2);
    }

    #[test]
    fn nil_has_one_vertical_direction() {
        let r = search_directions(&cons("Nil3", None), &SearchOptions::default()).unwrap();
        assert_eq!(r.directions.len(), 1);
        let d = r.directions[0];
        assert!((d.direction() - Vec3::z()).norm() < 1e-9);
        assert!(d.total_residual() < 1e-14);
    }

    #[test]
    fn sl2_vertical_direction() {
        let r = search_directions(&cons("SL2R~", None), &SearchOptions::default()).unwrap();
        assert_eq!(r.directions.len(), 1);
        assert!((r.directions[0].direction() - Vec3::z()).norm() < 1e-9);
    }

    #[test]
    fn g4_does_not_admit() {
        let r = search_directions(&cons("G4", None), &SearchOptions::default()).unwrap();
        assert!(!r.admits);
    }

    #[test]
    fn constant_curvature_shortcut() {
        let r = search_directions(&cons("SU2", None), &SearchOptions::default()).unwrap();
        assert!(r.constant_curvature && r.admits && r.directions.is_empty());
    }

    #[test]
    fn admission_examples() {
        let opts = SearchOptions {
            lattice: 4000,
            ..Default::default()
        };
        let id = MetricSpec::identity();
        let v = admits_harmonic_morphism(&cons("Nil3", None), &id, 5, 42, &opts).unwrap();
        assert!(v.admits_with_this_metric && v.admits_with_some_sampled_metric);
        let v = admits_harmonic_morphism(&StructureConstants::zero(), &id, 5, 42, &opts).unwrap();
        assert!(v.admits_with_this_metric && v.admits_with_some_sampled_metric);
        for alpha in [0.5, 1.0, 2.0] {
            let v =
                admits_harmonic_morphism(&cons("Sol3", Some(alpha)), &id, 10, 42, &opts).unwrap();
            assert!(!v.admits_with_this_metric && !v.admits_with_some_sampled_metric);
            assert_eq!(v.metrics_examined, 10);
        }
    }
}
