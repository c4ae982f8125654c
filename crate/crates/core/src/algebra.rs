//! Three-dimensional real Lie algebras given by structure constants.
//!
//! A basis `e_0, e_1, e_2` (written `X, Y, Z` in bracket tables) is fixed and
//! the bracket is stored as the full tensor `c(i, j, k)` with
//! `[e_i, e_j] = Σ_k c(i, j, k) e_k`. Left-invariant metrics are inner
//! products on the algebra; most geometric routines expect the constants to
//! be expressed in an orthonormal basis, see [`StructureConstants::orthonormalize`].

use std::fmt;

use nalgebra::{Cholesky, Matrix3, Vector3};

use crate::error::{Error, Result};

pub type Vec3 = Vector3<f64>;
pub type Mat3 = Matrix3<f64>;

/// Absolute tolerance for Jacobi and validity checks on numeric input.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Largest accepted condition number for a change of basis.
pub const MAX_BASIS_CONDITION: f64 = 1e8;

pub(crate) const BASIS_LETTERS: [char; 3] = ['X', 'Y', 'Z'];

/// Bracket tensor of a 3-dimensional Lie algebra in a fixed basis.
///
/// Antisymmetry in the first two indices holds by construction.
#[derive(Clone, Copy, PartialEq)]
pub struct StructureConstants {
    c: [[[f64; 3]; 3]; 3],
}

impl fmt::Debug for StructureConstants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("StructureConstants")
            .field("XY", &self.c[0][1])
            .field("YZ", &self.c[1][2])
            .field("ZX", &self.c[2][0])
            .finish()
    }
}

impl Default for StructureConstants {
    fn default() -> Self {
        Self::zero()
    }
}

impl StructureConstants {
    /// The abelian algebra.
    pub fn zero() -> Self {
        Self {
            c: [[[0.0; 3]; 3]; 3],
        }
    }

    /// Builds constants from an arbitrary tensor, keeping only its
    /// antisymmetric part in `(i, j)`.
    pub fn from_tensor(t: [[[f64; 3]; 3]; 3]) -> Self {
        let mut c = [[[0.0; 3]; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    c[i][j][k] = 0.5 * (t[i][j][k] - t[j][i][k]);
                }
            }
        }
        Self { c }
    }

    /// Builds constants from a list of brackets `[e_i, e_j] = v`.
    ///
    /// The mirrored entry `[e_j, e_i] = -v` is filled in; later entries for the
    /// same pair overwrite earlier ones. Pairs with `i == j` are ignored.
    pub fn from_brackets(brackets: &[(usize, usize, [f64; 3])]) -> Self {
        let mut c = [[[0.0; 3]; 3]; 3];
        for &(i, j, v) in brackets {
            if i == j {
                continue;
            }
            for k in 0..3 {
                c[i][j][k] = v[k];
                c[j][i][k] = -v[k];
            }
        }
        Self { c }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.c[i][j][k]
    }

    pub fn tensor(&self) -> [[[f64; 3]; 3]; 3] {
        self.c
    }

    /// `[e_i, e_j]` as a coordinate vector.
    pub fn basis_bracket(&self, i: usize, j: usize) -> Vec3 {
        Vec3::new(self.c[i][j][0], self.c[i][j][1], self.c[i][j][2])
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.c
            .iter()
            .flatten()
            .flatten()
            .fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// Multiplies every structure constant by `lambda`.
    pub fn scaled(&self, lambda: f64) -> Self {
        let mut c = self.c;
        c.iter_mut().flatten().flatten().for_each(|v| *v *= lambda);
        Self { c }
    }

    /// Bilinear extension of the bracket table.
    ///
    /// Summed over `i < j` with `u_i v_j − u_j v_i`, so swapping the arguments
    /// negates the result bit for bit.
    pub fn bracket(&self, u: &Vec3, v: &Vec3) -> Vec3 {
        let mut out = Vec3::zeros();
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            let w = u[i] * v[j] - u[j] * v[i];
            if w == 0.0 {
                continue;
            }
            for k in 0..3 {
                out[k] += w * self.c[i][j][k];
            }
        }
        out
    }

    /// Largest Euclidean norm of the cyclic sum
    /// `[e_i,[e_j,e_k]] + [e_j,[e_k,e_i]] + [e_k,[e_i,e_j]]` over basis triples.
    pub fn jacobi_residual(&self) -> f64 {
        let e = [Vec3::x(), Vec3::y(), Vec3::z()];
        let mut worst = 0.0_f64;
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    let s = self.bracket(&e[i], &self.basis_bracket(j, k))
                        + self.bracket(&e[j], &self.basis_bracket(k, i))
                        + self.bracket(&e[k], &self.basis_bracket(i, j));
                    worst = worst.max(s.norm());
                }
            }
        }
        worst
    }

    /// Errors unless the Jacobi residual is within `tol · max(1, |c|²)`.
    pub fn check_jacobi(&self, tol: f64) -> Result<()> {
        let scale = self.max_abs().max(1.0);
        let residual = self.jacobi_residual();
        if residual <= tol * scale * scale {
            Ok(())
        } else {
            Err(Error::NotALieAlgebra { residual, tol })
        }
    }

    /// Matrix of `v ↦ [u, v]`; column `j` holds `[u, e_j]`.
    pub fn ad_matrix(&self, u: &Vec3) -> Mat3 {
        let mut m = Mat3::zeros();
        for i in 0..3 {
            if u[i] == 0.0 {
                continue;
            }
            for j in 0..3 {
                for k in 0..3 {
                    m[(k, j)] += u[i] * self.c[i][j][k];
                }
            }
        }
        m
    }

    /// `τ(u) = trace(ad_u)`.
    pub fn trace_form(&self, u: &Vec3) -> f64 {
        self.ad_matrix(u).trace()
    }

    /// Killing form `K(e_i, e_j) = trace(ad_{e_i} ∘ ad_{e_j})`.
    pub fn killing_form(&self) -> Mat3 {
        let ads = [
            self.ad_matrix(&Vec3::x()),
            self.ad_matrix(&Vec3::y()),
            self.ad_matrix(&Vec3::z()),
        ];
        Mat3::from_fn(|i, j| (ads[i] * ads[j]).trace())
    }

    /// Structure constants in the basis `f_j = Σ_i p(i, j) e_i`.
    pub fn change_basis(&self, p: &Mat3) -> Result<Self> {
        let condition = condition_number(p);
        if !(condition <= MAX_BASIS_CONDITION) {
            return Err(Error::InvalidBasis { condition });
        }
        let p_inv = p.try_inverse().ok_or(Error::InvalidBasis {
            condition: f64::INFINITY,
        })?;
        Ok(self.change_basis_with_inverse(p, &p_inv))
    }

    pub(crate) fn change_basis_with_inverse(&self, p: &Mat3, p_inv: &Mat3) -> Self {
        // [f_a, f_b] = Σ p(i,a) p(j,b) c(i,j,k) e_k, and e_k = Σ_m p_inv(m,k) f_m.
        let mut out = [[[0.0; 3]; 3]; 3];
        for a in 0..3 {
            for b in 0..3 {
                if a == b {
                    continue;
                }
                let fa = p.column(a).into_owned();
                let fb = p.column(b).into_owned();
                let br = self.bracket(&fa, &fb);
                let coords = p_inv * br;
                for m in 0..3 {
                    out[a][b][m] = coords[m];
                }
            }
        }
        Self { c: out }
    }

    /// Re-expresses the constants in a `g`-orthonormal basis.
    ///
    /// The basis is `f_j = Σ_i P(i, j) e_i` with `P = L^{-T}` where `g = L Lᵀ`
    /// is the Cholesky factorization, see [`MetricSpec::orthonormal_frame`].
    pub fn orthonormalize(&self, g: &MetricSpec) -> Self {
        let (p, p_inv) = g.orthonormal_frame();
        self.change_basis_with_inverse(&p, &p_inv)
    }
}

/// Ratio of extreme singular values; infinite for singular input.
pub fn condition_number(p: &Mat3) -> f64 {
    let sv = p.singular_values();
    let max = sv.max();
    let min = sv.min();
    if min <= 0.0 || !min.is_finite() {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Symmetric positive-definite inner product on the algebra, `g(i, j) = ⟨e_i, e_j⟩`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MetricSpec {
    g: Mat3,
    lower: Mat3,
}

impl Default for MetricSpec {
    fn default() -> Self {
        Self::identity()
    }
}

impl MetricSpec {
    pub fn identity() -> Self {
        Self {
            g: Mat3::identity(),
            lower: Mat3::identity(),
        }
    }

    /// Validates symmetry (relative 1e-12) and positive definiteness.
    pub fn new(g: Mat3) -> Result<Self> {
        if g.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidMetric("non-finite entry".into()));
        }
        let scale = g.amax().max(f64::MIN_POSITIVE);
        let asym = (g - g.transpose()).amax();
        if asym > 1e-12 * scale {
            return Err(Error::InvalidMetric(format!(
                "not symmetric (max asymmetry {asym:.3e})"
            )));
        }
        let g = (g + g.transpose()) * 0.5;
        let minors = [
            g[(0, 0)],
            g.fixed_view::<2, 2>(0, 0).determinant(),
            g.determinant(),
        ];
        if let Some(idx) = minors.iter().position(|m| *m <= 0.0) {
            return Err(Error::InvalidMetric(format!(
                "not positive definite (leading minor {} is {:.3e})",
                idx + 1,
                minors[idx]
            )));
        }
        let lower = Cholesky::new(g)
            .ok_or_else(|| Error::InvalidMetric("Cholesky factorization failed".into()))?
            .l();
        Ok(Self { g, lower })
    }

    pub fn matrix(&self) -> &Mat3 {
        &self.g
    }

    /// Lower-triangular factor `L` with `g = L Lᵀ`.
    pub fn cholesky_factor(&self) -> &Mat3 {
        &self.lower
    }

    /// `(P, P⁻¹)` with `Pᵀ g P = I`, namely `P = L^{-T}` and `P⁻¹ = Lᵀ`.
    pub fn orthonormal_frame(&self) -> (Mat3, Mat3) {
        let l_inv = self
            .lower
            .try_inverse()
            .expect("Cholesky factor of an SPD matrix is invertible");
        (l_inv.transpose(), self.lower.transpose())
    }

    pub fn scaled(&self, lambda: f64) -> Result<Self> {
        Self::new(self.g * lambda)
    }
}

/// Names of the nine catalog groups.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Group {
    R3,
    Nil3,
    H2xR,
    G4,
    H3,
    Sol3,
    G7,
    Sl2r,
    Su2,
}

impl Group {
    pub const ALL: [Group; 9] = [
        Group::R3,
        Group::Nil3,
        Group::H2xR,
        Group::G4,
        Group::H3,
        Group::Sol3,
        Group::G7,
        Group::Sl2r,
        Group::Su2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Group::R3 => "R3",
            Group::Nil3 => "Nil3",
            Group::H2xR => "H2xR",
            Group::G4 => "G4",
            Group::H3 => "H3",
            Group::Sol3 => "Sol3",
            Group::G7 => "G7",
            Group::Sl2r => "SL2R~",
            Group::Su2 => "SU2",
        }
    }

    /// Case-insensitive lookup; accepts a few common spellings.
    pub fn parse(name: &str) -> Result<Self> {
        let key: String = name
            .chars()
            .filter(|c| !matches!(c, ' ' | '_' | '-' | '(' | ')' | '^'))
            .collect::<String>()
            .to_ascii_lowercase();
        let group = match key.as_str() {
            "r3" | "abelian" => Group::R3,
            "nil3" | "nil" | "heisenberg" => Group::Nil3,
            "h2xr" | "h2r" => Group::H2xR,
            "g4" => Group::G4,
            "h3" => Group::H3,
            "sol3" | "sol" => Group::Sol3,
            "g7" => Group::G7,
            "sl2r~" | "sl2r" | "sl2" => Group::Sl2r,
            "su2" => Group::Su2,
            _ => return Err(Error::UnknownGroup(name.to_string())),
        };
        Ok(group)
    }

    /// Human-readable parameter requirement, if the entry is a family.
    pub fn parameter_requirement(self) -> Option<&'static str> {
        match self {
            Group::Sol3 => Some("alpha > 0"),
            Group::G7 => Some("alpha real"),
            _ => None,
        }
    }

    pub fn bracket_table(self) -> &'static str {
        match self {
            Group::R3 => "all brackets zero",
            Group::Nil3 => "[X,Y]=Z",
            Group::H2xR => "[Y,X]=X",
            Group::G4 => "[Z,X]=X, [Z,Y]=X+Y",
            Group::H3 => "[Z,X]=X, [Z,Y]=Y",
            Group::Sol3 => "[Z,X]=alpha X, [Z,Y]=-Y",
            Group::G7 => "[Z,X]=alpha X-Y, [Z,Y]=X+alpha Y",
            Group::Sl2r => "[X,Y]=-2Z, [Z,X]=2Y, [Y,Z]=2X",
            Group::Su2 => "[X,Y]=2Z, [Y,Z]=2X, [Z,X]=2Y",
        }
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One of the nine standard metric Lie algebras, with the identity metric.
#[derive(Clone, Debug, PartialEq)]
pub struct CatalogEntry {
    pub group: Group,
    pub alpha: Option<f64>,
    pub constants: StructureConstants,
    pub metric: MetricSpec,
}

impl CatalogEntry {
    /// Display name, with the parameter for the two families, e.g. `Sol3(2)`.
    pub fn label(&self) -> String {
        match self.alpha {
            Some(a) => format!("{}({})", self.group, a),
            None => self.group.name().to_string(),
        }
    }
}

const X: usize = 0;
const Y: usize = 1;
const Z: usize = 2;

/// Looks up a catalog entry by name.
pub fn catalog(name: &str, alpha: Option<f64>) -> Result<CatalogEntry> {
    catalog_entry(Group::parse(name)?, alpha)
}

pub fn catalog_entry(group: Group, alpha: Option<f64>) -> Result<CatalogEntry> {
    let needs_alpha = matches!(group, Group::Sol3 | Group::G7);
    let alpha = match (needs_alpha, alpha) {
        (true, None) => {
            return Err(Error::InvalidParameter(format!(
                "{group} requires alpha ({})",
                group.parameter_requirement().unwrap_or("")
            )))
        }
        (true, Some(a)) if !a.is_finite() => {
            return Err(Error::InvalidParameter(format!(
                "alpha must be finite, got {a}"
            )))
        }
        (true, Some(a)) if group == Group::Sol3 && a <= 0.0 => {
            return Err(Error::InvalidParameter(format!(
                "Sol3 requires alpha > 0, got {a}"
            )))
        }
        (true, Some(a)) => Some(a),
        (false, Some(_)) => {
            return Err(Error::InvalidParameter(format!(
                "{group} takes no parameter"
            )))
        }
        (false, None) => None,
    };
    let a = alpha.unwrap_or(0.0);
    let constants = match group {
        Group::R3 => StructureConstants::zero(),
        Group::Nil3 => StructureConstants::from_brackets(&[(X, Y, [0.0, 0.0, 1.0])]),
        Group::H2xR => StructureConstants::from_brackets(&[(Y, X, [1.0, 0.0, 0.0])]),
        Group::G4 => {
            StructureConstants::from_brackets(&[(Z, X, [1.0, 0.0, 0.0]), (Z, Y, [1.0, 1.0, 0.0])])
        }
        Group::H3 => {
            StructureConstants::from_brackets(&[(Z, X, [1.0, 0.0, 0.0]), (Z, Y, [0.0, 1.0, 0.0])])
        }
        Group::Sol3 => {
            StructureConstants::from_brackets(&[(Z, X, [a, 0.0, 0.0]), (Z, Y, [0.0, -1.0, 0.0])])
        }
        Group::G7 => {
            StructureConstants::from_brackets(&[(Z, X, [a, -1.0, 0.0]), (Z, Y, [1.0, a, 0.0])])
        }
        Group::Sl2r => StructureConstants::from_brackets(&[
            (X, Y, [0.0, 0.0, -2.0]),
            (Z, X, [0.0, 2.0, 0.0]),
            (Y, Z, [2.0, 0.0, 0.0]),
        ]),
        // Cyclic su(2) brackets. Flipping the sign of [Y,Z] gives an
        // indefinite Killing form; that variant is `su2_as_printed`.
        Group::Su2 => StructureConstants::from_brackets(&[
            (X, Y, [0.0, 0.0, 2.0]),
            (Y, Z, [2.0, 0.0, 0.0]),
            (Z, X, [0.0, 2.0, 0.0]),
        ]),
    };
    Ok(CatalogEntry {
        group,
        alpha,
        constants,
        metric: MetricSpec::identity(),
    })
}

/// Type IX variant with `[Y,Z] = −2X`, a common sign slip in the table.
/// It is isomorphic to sl(2,R), not su(2).
pub fn su2_as_printed() -> CatalogEntry {
    CatalogEntry {
        group: Group::Su2,
        alpha: None,
        constants: StructureConstants::from_brackets(&[
            (X, Y, [0.0, 0.0, 2.0]),
            (Z, X, [0.0, 2.0, 0.0]),
            (Y, Z, [-2.0, 0.0, 0.0]),
        ]),
        metric: MetricSpec::identity(),
    }
}

/// Signature `(positive, negative, zero)` of a symmetric matrix, with
/// eigenvalues below `rel_tol · max|eigenvalue|` counted as zero.
pub fn signature(m: &Mat3, rel_tol: f64) -> (usize, usize, usize) {
    let eig = m.symmetric_eigenvalues();
    let scale = eig.amax();
    let cut = rel_tol * scale;
    let mut sig = (0, 0, 0);
    for v in eig.iter() {
        if scale == 0.0 || v.abs() <= cut {
            sig.2 += 1;
        } else if *v > 0.0 {
            sig.0 += 1;
        } else {
            sig.1 += 1;
        }
    }
    sig
}
