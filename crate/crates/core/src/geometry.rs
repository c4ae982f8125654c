//! Levi-Civita connection and curvature of a left-invariant metric.
//!
//! All routines take structure constants in an orthonormal basis of the
//! metric, so inner products are Euclidean in coordinates. The curvature
//! convention is `R(A,B)C = ∇_A∇_B C − ∇_B∇_A C − ∇_{[A,B]}C` and the
//! sectional curvature of an orthonormal pair is `⟨R(u,v)v, u⟩`.

use crate::algebra::{Mat3, StructureConstants, Vec3};
use crate::error::{Error, Result};

/// Absolute deviation allowed when testing for constant curvature.
pub const CONSTANT_CURVATURE_TOL: f64 = 1e-9;
/// Ricci eigenvalues closer than this are merged into one.
pub const RICCI_MERGE_TOL: f64 = 1e-7;
/// Smallest Gram determinant accepted for a plane.
pub const MIN_PLANE_GRAM: f64 = 1e-12;

pub type Riemann = [[[[f64; 3]; 3]; 3]; 3];

/// `Γ(i,j,k) = ⟨∇_{e_i} e_j, e_k⟩` in an orthonormal frame.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConnectionCoefficients {
    gamma: [[[f64; 3]; 3]; 3],
}

impl ConnectionCoefficients {
    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.gamma[i][j][k]
    }

    pub fn tensor(&self) -> [[[f64; 3]; 3]; 3] {
        self.gamma
    }

    /// `∇_u v` for left-invariant fields with coordinates `u`, `v`.
    pub fn covariant(&self, u: &Vec3, v: &Vec3) -> Vec3 {
        let mut out = Vec3::zeros();
        for i in 0..3 {
            for j in 0..3 {
                let w = u[i] * v[j];
                if w == 0.0 {
                    continue;
                }
                for k in 0..3 {
                    out[k] += w * self.gamma[i][j][k];
                }
            }
        }
        out
    }

    /// Squared Frobenius norm, used as a natural scale for residuals.
    pub fn norm_squared(&self) -> f64 {
        self.gamma.iter().flatten().flatten().map(|v| v * v).sum()
    }
}

/// Koszul formula in an orthonormal left-invariant frame:
/// `Γ(i,j,k) = ½ (c(i,j,k) − c(j,k,i) + c(k,i,j))`.
pub fn connection(c: &StructureConstants) -> ConnectionCoefficients {
    let mut gamma = [[[0.0; 3]; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                gamma[i][j][k] = 0.5 * (c.get(i, j, k) - c.get(j, k, i) + c.get(k, i, j));
            }
        }
    }
    ConnectionCoefficients { gamma }
}

/// Sorted Ricci eigenvalues and their grouping into distinct values.
#[derive(Clone, Debug, PartialEq)]
pub struct RicciSpectrum {
    pub eigenvalues: [f64; 3],
    /// `(value, multiplicity)` in ascending order; values within
    /// [`RICCI_MERGE_TOL`] of their neighbour are merged.
    pub distinct: Vec<(f64, usize)>,
}

impl RicciSpectrum {
    pub fn from_matrix(ricci: &Mat3) -> Self {
        let mut eig: Vec<f64> = ricci.symmetric_eigenvalues().iter().copied().collect();
        eig.sort_by(f64::total_cmp);
        // (sum, count, last) per group
        let mut groups: Vec<(f64, usize, f64)> = Vec::new();
        for &v in &eig {
            match groups.last_mut() {
                Some((sum, count, last)) if v - *last <= RICCI_MERGE_TOL => {
                    *sum += v;
                    *count += 1;
                    *last = v;
                }
                _ => groups.push((v, 1, v)),
            }
        }
        let distinct = groups
            .into_iter()
            .map(|(sum, count, _)| (sum / count as f64, count))
            .collect();
        Self {
            eigenvalues: [eig[0], eig[1], eig[2]],
            distinct,
        }
    }

    pub fn distinct_count(&self) -> usize {
        self.distinct.len()
    }
}

/// Curvature data of a left-invariant metric at the identity.
#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureReport {
    /// `R(i,j,k,l) = ⟨R(e_i,e_j)e_k, e_l⟩`.
    pub riemann: Riemann,
    pub ricci: Mat3,
    pub scalar: f64,
    /// `K(X,Y)`, `K(X,Z)`, `K(Y,Z)`.
    pub sectional_basis: [f64; 3],
    pub constant_curvature: Option<f64>,
    pub ricci_spectrum: RicciSpectrum,
}

impl CurvatureReport {
    /// Largest deviation of the Riemann tensor from `K (δ_il δ_jk − δ_ik δ_jl)`.
    pub fn constant_curvature_deviation(&self, k: f64) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..3 {
            for j in 0..3 {
                for m in 0..3 {
                    for l in 0..3 {
                        let model = k * (delta(i, l) * delta(j, m) - delta(i, m) * delta(j, l));
                        worst = worst.max((self.riemann[i][j][m][l] - model).abs());
                    }
                }
            }
        }
        worst
    }

    /// `⟨R(u,v)w, z⟩` by multilinear expansion.
    pub fn riemann_form(&self, u: &Vec3, v: &Vec3, w: &Vec3, z: &Vec3) -> f64 {
        let mut total = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                let uv = u[i] * v[j];
                if uv == 0.0 {
                    continue;
                }
                for k in 0..3 {
                    for l in 0..3 {
                        total += uv * w[k] * z[l] * self.riemann[i][j][k][l];
                    }
                }
            }
        }
        total
    }

    /// Sectional curvature of the plane spanned by `u` and `v`.
    pub fn sectional(&self, u: &Vec3, v: &Vec3) -> Result<f64> {
        let gram = u.norm_squared() * v.norm_squared() - u.dot(v).powi(2);
        if !(gram > MIN_PLANE_GRAM) {
            return Err(Error::DegeneratePlane(gram));
        }
        Ok(self.riemann_form(u, v, v, u) / gram)
    }
}

#[inline]
fn delta(i: usize, j: usize) -> f64 {
    if i == j {
        1.0
    } else {
        0.0
    }
}

pub fn riemann_tensor(c: &StructureConstants, gamma: &ConnectionCoefficients) -> Riemann {
    let mut r = [[[[0.0; 3]; 3]; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                for l in 0..3 {
                    let mut v = 0.0;
                    for m in 0..3 {
                        v += gamma.get(j, k, m) * gamma.get(i, m, l)
                            - gamma.get(i, k, m) * gamma.get(j, m, l)
                            - c.get(i, j, m) * gamma.get(m, k, l);
                    }
                    r[i][j][k][l] = v;
                }
            }
        }
    }
    r
}

pub fn curvature(c: &StructureConstants) -> CurvatureReport {
    let gamma = connection(c);
    let riemann = riemann_tensor(c, &gamma);
    let ricci = Mat3::from_fn(|i, j| (0..3).map(|k| riemann[k][i][j][k]).sum());
    let ricci = (ricci + ricci.transpose()) * 0.5;
    let scalar = ricci.trace();
    let sectional_basis = [
        riemann[0][1][1][0],
        riemann[0][2][2][0],
        riemann[1][2][2][1],
    ];
    let mut report = CurvatureReport {
        riemann,
        ricci,
        scalar,
        sectional_basis,
        constant_curvature: None,
        ricci_spectrum: RicciSpectrum::from_matrix(&ricci),
    };
    let k = scalar / 6.0;
    if report.constant_curvature_deviation(k) <= CONSTANT_CURVATURE_TOL {
        report.constant_curvature = Some(k);
    }
    report
}
