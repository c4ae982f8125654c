//! Left-invariant conformal foliations by geodesics.
//!
//! A unit vector `u` in the Lie algebra generates a 1-dimensional
//! left-invariant foliation. Its leaves are geodesics iff `∇_u u = 0`, and it
//! is horizontally conformal iff the symmetric part of `(h, h') ↦ ⟨∇_h u, h'⟩`
//! on `u^⊥` is a multiple of the metric. Such foliations are exactly the
//! fibres of local harmonic morphisms to surfaces, and on groups of
//! non-constant curvature every one of them is left-invariant, so searching
//! over unit vectors of the algebra is exhaustive.
//!
//! In a frame `(X, Y, Z = u)` adapted to such a foliation the brackets take
//! the form
//!
//! ```text
//! [X,Y] = xX + yY + zZ,   [Z,X] = aX + bY,   [Z,Y] = −bX + aY
//! ```
//!
//! and the Jacobi identity reduces to `az = 0`, `ax + by = 0`, `bx − ay = 0`.

mod search;

pub use search::{
    admits_harmonic_morphism, locate_directions, search_directions, AdmissionVerdict,
    DirectionSearch, FoliationReport, SearchOptions,
};

use serde::Serialize;

use crate::algebra::{Mat3, StructureConstants, Vec3};
use crate::bianchi::{BianchiTag, BianchiType};
use crate::error::{Error, Result};
use crate::geometry::{connection, ConnectionCoefficients};

/// Unit-norm tolerance for directions passed to [`residuals`].
pub const UNIT_TOL: f64 = 1e-10;
/// Residual bound required before reading off the adapted bracket form.
pub const ADAPT_TOL: f64 = 1e-7;

/// A unit direction with its geodesic and conformality residuals.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FoliationCandidate {
    pub direction: [f64; 3],
    pub geodesic_residual: f64,
    pub conformal_residual: f64,
}

impl FoliationCandidate {
    pub fn direction(&self) -> Vec3 {
        Vec3::from(self.direction)
    }

    /// `geodesic² + conformal²`.
    pub fn total_residual(&self) -> f64 {
        self.geodesic_residual.powi(2) + self.conformal_residual.powi(2)
    }
}

/// Completes a unit vector `u` to a right-handed orthonormal frame `(h₁, h₂, u)`.
///
/// `h₁` is the normalised cross product of the least-aligned standard basis
/// vector (lowest index on ties) with `u`, and `h₂ = u × h₁`.
pub fn horizontal_frame(u: &Vec3) -> (Vec3, Vec3) {
    let mut k = 0;
    for i in 1..3 {
        if u[i].abs() < u[k].abs() {
            k = i;
        }
    }
    let mut e = Vec3::zeros();
    e[k] = 1.0;
    let h1 = e.cross(u).normalize();
    let h2 = u.cross(&h1);
    (h1, h2)
}

fn residuals_in_frame(
    gamma: &ConnectionCoefficients,
    u: &Vec3,
    h1: &Vec3,
    h2: &Vec3,
) -> (f64, f64) {
    let geodesic = gamma.covariant(u, u).norm();
    let d1 = gamma.covariant(h1, u);
    let d2 = gamma.covariant(h2, u);
    let s11 = d1.dot(h1);
    let s22 = d2.dot(h2);
    let s12 = d1.dot(h2) + d2.dot(h1);
    (geodesic, ((s11 - s22).powi(2) + s12 * s12).sqrt())
}

/// `(‖∇_u u‖, conformality defect)` for the foliation generated by `u`.
///
/// `c` must be expressed in an orthonormal basis.
pub fn residuals(c: &StructureConstants, u: &Vec3) -> Result<(f64, f64)> {
    let norm = u.norm();
    if !((norm - 1.0).abs() <= UNIT_TOL) {
        return Err(Error::NonUnitDirection(norm));
    }
    let gamma = connection(c);
    let (h1, h2) = horizontal_frame(u);
    Ok(residuals_in_frame(&gamma, u, &h1, &h2))
}

/// Same as [`residuals`] with an explicitly supplied horizontal pair.
pub fn residuals_with_frame(c: &StructureConstants, u: &Vec3, h1: &Vec3, h2: &Vec3) -> (f64, f64) {
    residuals_in_frame(&connection(c), u, h1, h2)
}

/// The coefficients of the adapted bracket form.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AdaptedBracketParams {
    pub a: f64,
    pub b: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl AdaptedBracketParams {
    pub fn new(a: f64, b: f64, x: f64, y: f64, z: f64) -> Self {
        Self { a, b, x, y, z }
    }

    pub fn as_array(&self) -> [f64; 5] {
        [self.a, self.b, self.x, self.y, self.z]
    }

    pub fn get(&self, coefficient: Coefficient) -> f64 {
        match coefficient {
            Coefficient::A => self.a,
            Coefficient::B => self.b,
            Coefficient::X => self.x,
            Coefficient::Y => self.y,
            Coefficient::Z => self.z,
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.as_array().iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// Structure constants of the algebra with brackets in adapted form,
    /// in the basis `(X, Y, Z)`.
    pub fn structure_constants(&self) -> StructureConstants {
        let Self { a, b, x, y, z } = *self;
        StructureConstants::from_brackets(&[
            (0, 1, [x, y, z]),
            (2, 0, [a, b, 0.0]),
            (2, 1, [-b, a, 0.0]),
        ])
    }
}

/// `max(|az|, |ax + by|, |bx − ay|)`.
pub fn jacobi_constraints(p: &AdaptedBracketParams) -> f64 {
    let AdaptedBracketParams { a, b, x, y, z } = *p;
    (a * z)
        .abs()
        .max((a * x + b * y).abs())
        .max((b * x - a * y).abs())
}

/// Reads off the adapted bracket coefficients for the foliation generated by `u`.
pub fn adapt_basis(c: &StructureConstants, u: &Vec3) -> Result<AdaptedBracketParams> {
    let (geodesic, conformal) = residuals(c, u)?;
    let scale = c.max_abs().max(1.0);
    if geodesic > ADAPT_TOL * scale || conformal > ADAPT_TOL * scale {
        return Err(Error::FoliationConditionsViolated(format!(
            "residuals ({geodesic:.3e}, {conformal:.3e}) exceed {ADAPT_TOL:.0e}"
        )));
    }
    let (h1, h2) = horizontal_frame(u);
    let p = Mat3::from_columns(&[h1, h2, *u]);
    let adapted = c.change_basis_with_inverse(&p, &p.transpose());
    let k = |i, j, l| adapted.get(i, j, l);

    let mismatches = [
        ("Z-component of [Z,X]", k(2, 0, 2)),
        ("Z-component of [Z,Y]", k(2, 1, 2)),
        (
            "X-coefficient of [Z,X] minus Y-coefficient of [Z,Y]",
            k(2, 0, 0) - k(2, 1, 1),
        ),
        (
            "Y-coefficient of [Z,X] plus X-coefficient of [Z,Y]",
            k(2, 0, 1) + k(2, 1, 0),
        ),
    ];
    for (what, value) in mismatches {
        if value.abs() > ADAPT_TOL * scale {
            return Err(Error::FoliationConditionsViolated(format!(
                "{what} is {value:.3e}"
            )));
        }
    }
    let params = AdaptedBracketParams {
        a: 0.5 * (k(2, 0, 0) + k(2, 1, 1)),
        b: 0.5 * (k(2, 0, 1) - k(2, 1, 0)),
        x: k(0, 1, 0),
        y: k(0, 1, 1),
        z: k(0, 1, 2),
    };
    let defect = jacobi_constraints(&params);
    if defect > ADAPT_TOL * scale * scale {
        return Err(Error::FoliationConditionsViolated(format!(
            "Jacobi constraints violated by {defect:.3e}"
        )));
    }
    Ok(params)
}

/// Bianchi type of an adapted-form algebra by the three-family case analysis.
///
/// Coefficients with `|v| ≤ tol · max(1, max|param|)` count as zero.
pub fn classify_family(p: &AdaptedBracketParams, tol: f64) -> Result<BianchiType> {
    let scale = p.max_abs().max(1.0);
    let defect = jacobi_constraints(p);
    if defect > tol * scale * scale {
        return Err(Error::ConstraintViolation(defect));
    }
    let zero = |v: f64| v.abs() <= tol * scale;
    let AdaptedBracketParams { a, b, x, y, z } = *p;

    if zero(a) && zero(b) {
        // [X,Y] = xX + yY + zZ
        return Ok(if !zero(x) || !zero(y) {
            BianchiType::plain(BianchiTag::III)
        } else if !zero(z) {
            BianchiType::plain(BianchiTag::II)
        } else {
            BianchiType::plain(BianchiTag::I)
        });
    }
    if zero(x) && zero(y) && zero(z) {
        // ℝ² ⋊ ℝ with ad_Z = aI + bJ
        return Ok(if !zero(b) {
            BianchiType::vii(a / b)
        } else {
            BianchiType::plain(BianchiTag::V)
        });
    }
    if zero(x) && zero(y) && zero(a) {
        // [X,Y] = zZ, [Z,X] = bY, [Z,Y] = −bX
        let bz = b * z;
        return Ok(if zero(z) {
            BianchiType::vii(0.0)
        } else if zero(b) {
            BianchiType::plain(BianchiTag::II)
        } else if bz < 0.0 {
            BianchiType::plain(BianchiTag::VIII)
        } else {
            BianchiType::plain(BianchiTag::IX)
        });
    }
    Err(Error::ConstraintViolation(defect))
}

/// Index (1, 2 or 3) of the first family containing `p`, with the zero test of
/// [`classify_family`].
pub fn family_index(p: &AdaptedBracketParams, tol: f64) -> Option<usize> {
    let scale = p.max_abs().max(1.0);
    let zero = |v: f64| v.abs() <= tol * scale;
    enumerate_families()
        .into_iter()
        .find(|f| f.vanishing.iter().all(|c| zero(p.get(*c))))
        .map(|f| f.index)
}

/// One of the five adapted-form coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Coefficient {
    A,
    B,
    X,
    Y,
    Z,
}

impl Coefficient {
    pub const ALL: [Coefficient; 5] = [
        Coefficient::A,
        Coefficient::B,
        Coefficient::X,
        Coefficient::Y,
        Coefficient::Z,
    ];

    pub fn symbol(self) -> char {
        match self {
            Coefficient::A => 'a',
            Coefficient::B => 'b',
            Coefficient::X => 'x',
            Coefficient::Y => 'y',
            Coefficient::Z => 'z',
        }
    }
}

/// A family of solutions of the Jacobi constraints, given by the
/// coefficients it forces to vanish.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FamilyDescriptor {
    pub index: usize,
    pub vanishing: Vec<Coefficient>,
    pub attainable: Vec<BianchiTag>,
}

impl FamilyDescriptor {
    pub fn free(&self) -> Vec<Coefficient> {
        Coefficient::ALL
            .into_iter()
            .filter(|c| !self.vanishing.contains(c))
            .collect()
    }

    pub fn constraint_text(&self) -> String {
        let names: Vec<String> = self
            .vanishing
            .iter()
            .map(|c| c.symbol().to_string())
            .collect();
        format!("{}=0", names.join("="))
    }

    /// Draws a member of the family. Each free coefficient is zero with
    /// probability 1/4 and otherwise uniform in `[-3, 3)`.
    pub fn sample<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> AdaptedBracketParams {
        let mut v = [0.0; 5];
        for (slot, coefficient) in v.iter_mut().zip(Coefficient::ALL) {
            if self.vanishing.contains(&coefficient) || rng.random_bool(0.25) {
                continue;
            }
            *slot = rng.random_range(-3.0..3.0);
        }
        AdaptedBracketParams::new(v[0], v[1], v[2], v[3], v[4])
    }

    pub fn contains(&self, p: &AdaptedBracketParams) -> bool {
        self.vanishing.iter().all(|c| p.get(*c) == 0.0)
    }
}

/// The three families that together solve the Jacobi constraints.
pub fn enumerate_families() -> Vec<FamilyDescriptor> {
    use BianchiTag::*;
    use Coefficient as C;
    vec![
        FamilyDescriptor {
            index: 1,
            vanishing: vec![C::A, C::B],
            attainable: vec![I, II, III],
        },
        FamilyDescriptor {
            index: 2,
            vanishing: vec![C::X, C::Y, C::Z],
            attainable: vec![I, V, VII],
        },
        FamilyDescriptor {
            index: 3,
            vanishing: vec![C::X, C::Y, C::A],
            attainable: vec![I, II, VII, VIII, IX],
        },
    ]
}

/// Union of the attainable types over all families, sorted.
pub fn attainable_types() -> Vec<BianchiTag> {
    let mut all: Vec<BianchiTag> = enumerate_families()
        .into_iter()
        .flat_map(|f| f.attainable)
        .collect();
    all.sort();
    all.dedup();
    all
}
