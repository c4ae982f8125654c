//! Bianchi classification of 3-dimensional real Lie algebras.
//!
//! The constants are split as `c(i,j,k) = Σ_l ε(i,j,l) N(l,k) + a(i) δ(j,k) − a(j) δ(i,k)`
//! with `N` symmetric. Unimodular algebras (`a = 0`) are classified by the
//! signs of the eigenvalues of `N`; the others by the conjugacy class of
//! `ad_w` acting on the 2-dimensional ideal `ker τ`, normalised so that
//! `trace ad_w = 2`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::{Mat3, StructureConstants, Vec3};
use crate::error::Result;

/// Relative threshold below which an eigenvalue of `N` or of `ad_w` counts as zero.
pub const ZERO_EIGENVALUE_REL: f64 = 1e-8;
/// Relative threshold on the squared eigenvalue gap of `ad_w` for a double eigenvalue.
pub const DOUBLE_EIGENVALUE_REL: f64 = 1e-8;
/// Relative size of the nilpotent part above which a double eigenvalue means type IV.
pub const JORDAN_BLOCK_REL: f64 = 1e-6;
/// Relative size of `a` below which the algebra counts as unimodular.
pub const UNIMODULAR_REL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BianchiTag {
    I,
    II,
    III,
    IV,
    V,
    VI,
    VII,
    VIII,
    IX,
}

impl BianchiTag {
    pub const ALL: [BianchiTag; 9] = [
        BianchiTag::I,
        BianchiTag::II,
        BianchiTag::III,
        BianchiTag::IV,
        BianchiTag::V,
        BianchiTag::VI,
        BianchiTag::VII,
        BianchiTag::VIII,
        BianchiTag::IX,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            BianchiTag::I => "I",
            BianchiTag::II => "II",
            BianchiTag::III => "III",
            BianchiTag::IV => "IV",
            BianchiTag::V => "V",
            BianchiTag::VI => "VI",
            BianchiTag::VII => "VII",
            BianchiTag::VIII => "VIII",
            BianchiTag::IX => "IX",
        }
    }

    pub fn has_parameter(self) -> bool {
        matches!(self, BianchiTag::VI | BianchiTag::VII)
    }
}

impl fmt::Display for BianchiTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Bianchi type with its canonical parameter.
///
/// For VI the parameter is the representative of `{α, 1/α}` with `|α| ≥ 1`,
/// where `ad` has eigenvalue ratio `−α` (so `α > 0` is `Sol_α`). For VII it is `|α|`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BianchiType {
    pub tag: BianchiTag,
    pub param: Option<f64>,
}

impl BianchiType {
    pub fn plain(tag: BianchiTag) -> Self {
        debug_assert!(!tag.has_parameter());
        Self { tag, param: None }
    }

    /// Type VI from an eigenvalue ratio parameter `α` (`ad` eigenvalues `α, −1`).
    pub fn vi(alpha: f64) -> Self {
        let canonical = if alpha.abs() < 1.0 {
            1.0 / alpha
        } else {
            alpha
        };
        Self {
            tag: BianchiTag::VI,
            param: Some(canonical),
        }
    }

    pub fn vii(alpha: f64) -> Self {
        Self {
            tag: BianchiTag::VII,
            param: Some(alpha.abs()),
        }
    }

    /// Same tag and parameters within `rel_tol` relative (absolute near zero).
    pub fn approx_eq(&self, other: &BianchiType, rel_tol: f64) -> bool {
        if self.tag != other.tag {
            return false;
        }
        match (self.param, other.param) {
            (None, None) => true,
            (Some(p), Some(q)) => (p - q).abs() <= rel_tol * p.abs().max(q.abs()).max(1.0),
            _ => false,
        }
    }
}

impl fmt::Display for BianchiType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.param {
            Some(p) => write!(f, "{}, alpha={}", self.tag, crate::format::sig(p, 6)),
            None => write!(f, "{}", self.tag),
        }
    }
}

/// The pair `(N, a)` of the decomposition described in the module docs.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MilnorDecomposition {
    pub n: Mat3,
    pub a: Vec3,
}

impl MilnorDecomposition {
    /// Rebuilds the structure constants from `(N, a)`.
    pub fn reconstruct(&self) -> [[[f64; 3]; 3]; 3] {
        let mut t = [[[0.0; 3]; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    let mut v = 0.0;
                    for l in 0..3 {
                        v += levi_civita(i, j, l) * self.n[(l, k)];
                    }
                    if j == k {
                        v += self.a[i];
                    }
                    if i == k {
                        v -= self.a[j];
                    }
                    t[i][j][k] = v;
                }
            }
        }
        t
    }

    /// `‖N a‖`, zero exactly for Lie algebras.
    pub fn jacobi_defect(&self) -> f64 {
        (self.n * self.a).norm()
    }
}

pub fn levi_civita(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

/// Cyclic successor pairs: `(i, j)` with `ε(i, j, l) = 1` for `l = 0, 1, 2`.
const CYCLIC: [(usize, usize); 3] = [(1, 2), (2, 0), (0, 1)];

pub fn milnor_decompose(c: &StructureConstants) -> MilnorDecomposition {
    // Row l of m is [e_i, e_j] for the cyclic pair completing l.
    let m = Mat3::from_fn(|l, k| {
        let (i, j) = CYCLIC[l];
        c.get(i, j, k)
    });
    let n = (m + m.transpose()) * 0.5;
    let skew = (m - m.transpose()) * 0.5;
    let a = Vec3::new(skew[(2, 1)], skew[(0, 2)], skew[(1, 0)]);
    MilnorDecomposition { n, a }
}

/// Bianchi type of a Lie algebra; fails if the Jacobi check fails at `tol`.
pub fn classify(c: &StructureConstants, tol: f64) -> Result<BianchiType> {
    c.check_jacobi(tol)?;
    Ok(classify_unchecked(c))
}

pub(crate) fn classify_unchecked(c: &StructureConstants) -> BianchiType {
    let scale = c.max_abs();
    if scale == 0.0 {
        return BianchiType::plain(BianchiTag::I);
    }
    let dec = milnor_decompose(c);
    if dec.a.amax() <= UNIMODULAR_REL * scale {
        classify_unimodular(&dec.n)
    } else {
        classify_non_unimodular(c, &dec.a)
    }
}

fn classify_unimodular(n: &Mat3) -> BianchiType {
    let eig = n.symmetric_eigenvalues();
    let norm = eig.amax();
    let cut = ZERO_EIGENVALUE_REL * norm;
    let mut pos = 0;
    let mut neg = 0;
    for v in eig.iter() {
        if norm == 0.0 || v.abs() < cut {
            continue;
        }
        if *v > 0.0 {
            pos += 1;
        } else {
            neg += 1;
        }
    }
    if neg > pos {
        std::mem::swap(&mut pos, &mut neg);
    }
    match (pos, neg) {
        (0, 0) => BianchiType::plain(BianchiTag::I),
        (1, 0) => BianchiType::plain(BianchiTag::II),
        (2, 0) => BianchiType::vii(0.0),
        (1, 1) => BianchiType::vi(1.0),
        (2, 1) => BianchiType::plain(BianchiTag::VIII),
        (3, 0) => BianchiType::plain(BianchiTag::IX),
        _ => unreachable!("at most three eigenvalues"),
    }
}

/// `ad_w` on `ker τ` in a Euclidean-orthonormal coordinate basis of that
/// plane, with `τ(w) = 2`.
pub fn normalized_ad_on_kernel(c: &StructureConstants, a: &Vec3) -> nalgebra::Matrix2<f64> {
    // τ(u) = 2 a·u, so w = a/|a|² has τ(w) = 2 and ker τ = a^⊥.
    let w = a / a.norm_squared();
    let n = a.normalize();
    let pivot = if n.x.abs() <= n.y.abs() && n.x.abs() <= n.z.abs() {
        Vec3::x()
    } else if n.y.abs() <= n.z.abs() {
        Vec3::y()
    } else {
        Vec3::z()
    };
    let u1 = pivot.cross(&n).normalize();
    let u2 = n.cross(&u1);
    let basis = [u1, u2];
    nalgebra::Matrix2::from_fn(|r, s| basis[r].dot(&c.bracket(&w, &basis[s])))
}

fn classify_non_unimodular(c: &StructureConstants, a: &Vec3) -> BianchiType {
    let m = normalized_ad_on_kernel(c, a);
    let norm = m.norm();
    let tr = m.trace();
    let det = m.determinant();
    let disc = tr * tr - 4.0 * det;
    let identity_defect = (m - nalgebra::Matrix2::identity() * (tr / 2.0)).norm();

    if disc.abs() < DOUBLE_EIGENVALUE_REL * norm * norm {
        return if identity_defect > JORDAN_BLOCK_REL * norm {
            BianchiType::plain(BianchiTag::IV)
        } else {
            BianchiType::plain(BianchiTag::V)
        };
    }
    if disc > 0.0 {
        let root = disc.sqrt();
        let big = 0.5 * (tr + tr.signum() * root);
        let small = det / big;
        if small.abs() < ZERO_EIGENVALUE_REL * norm {
            return BianchiType::plain(BianchiTag::III);
        }
        return BianchiType::vi(-big / small);
    }
    let beta = 0.5 * (-disc).sqrt();
    let real = 0.5 * tr;
    BianchiType::vii(real / beta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{catalog, catalog_entry, su2_as_printed, Group, DEFAULT_TOL};
    use crate::error::Error;

    fn kind(name: &str, alpha: Option<f64>) -> BianchiType {
        classify(&catalog(name, alpha).unwrap().constants, DEFAULT_TOL).unwrap()
    }

    #[test]
    fn decomposition_examples() {
        let abelian = milnor_decompose(&StructureConstants::zero());
        assert_eq!(abelian.n, Mat3::zeros());
        assert_eq!(abelian.a, Vec3::zeros());

        let nil = milnor_decompose(&catalog("Nil3", None).unwrap().constants);
        assert_eq!(nil.n, Mat3::from_diagonal(&Vec3::new(0.0, 0.0, 1.0)));
        assert_eq!(nil.a, Vec3::zeros());

        let h3 = catalog("H3", None).unwrap().constants;
        let dec = milnor_decompose(&h3);
        assert_eq!(dec.n, Mat3::zeros());
        assert_eq!(dec.a, Vec3::new(0.0, 0.0, 1.0));
        assert_eq!(dec.reconstruct(), h3.tensor());
        // τ(u) = 2 a·u
        assert_eq!(h3.trace_form(&Vec3::z()), 2.0 * dec.a.z);
    }

    #[test]
    fn catalog_types() {
        assert_eq!(kind("R3", None).tag, BianchiTag::I);
        assert_eq!(kind("Nil3", None).tag, BianchiTag::II);
        assert_eq!(kind("H2xR", None).tag, BianchiTag::III);
        assert_eq!(kind("G4", None).tag, BianchiTag::IV);
        assert_eq!(kind("H3", None).tag, BianchiTag::V);
        assert_eq!(kind("SL2R~", None).tag, BianchiTag::VIII);
        assert_eq!(kind("SU2", None).tag, BianchiTag::IX);
    }

    #[test]
    fn sol_parameters_are_canonical() {
        for (alpha, expected) in [(0.5, 2.0), (1.0, 1.0), (2.0, 2.0), (4.0, 4.0), (0.25, 4.0)] {
            let t = kind("Sol3", Some(alpha));
            assert_eq!(t.tag, BianchiTag::VI);
            assert!((t.param.unwrap() - expected).abs() < 1e-12, "{alpha}: {t}");
        }
    }

    #[test]
    fn g7_parameters_are_canonical() {
        for (alpha, expected) in [(0.0, 0.0), (1.0, 1.0), (-2.0, 2.0), (3.0, 3.0)] {
            let t = kind("G7", Some(alpha));
            assert_eq!(t.tag, BianchiTag::VII);
            assert!((t.param.unwrap() - expected).abs() < 1e-12, "{alpha}: {t}");
        }
    }

    #[test]
    fn same_sign_real_eigenvalues_are_type_vi() {
        // ad_Z eigenvalues (2, 1): ratio −α = 2, so α = −2.
        let c =
            StructureConstants::from_brackets(&[(2, 0, [2.0, 0.0, 0.0]), (2, 1, [0.0, 1.0, 0.0])]);
        let t = classify(&c, DEFAULT_TOL).unwrap();
        assert_eq!(t.tag, BianchiTag::VI);
        assert!((t.param.unwrap() + 2.0).abs() < 1e-12);
    }

    #[test]
    fn printed_type_nine_classifies_as_viii() {
        assert_eq!(
            classify(&su2_as_printed().constants, DEFAULT_TOL)
                .unwrap()
                .tag,
            BianchiTag::VIII
        );
    }

    #[test]
    fn invalid_algebra_is_rejected() {
        let c =
            StructureConstants::from_brackets(&[(0, 1, [0.0, 0.0, 1.0]), (2, 0, [1.0, 0.0, 0.0])]);
        assert!(matches!(
            classify(&c, DEFAULT_TOL),
            Err(Error::NotALieAlgebra { .. })
        ));
    }

    #[test]
    fn scaling_preserves_type() {
        for group in Group::ALL {
            let alpha = match group {
                Group::Sol3 => Some(2.0),
                Group::G7 => Some(0.5),
                _ => None,
            };
            let c = catalog_entry(group, alpha).unwrap().constants;
            let base = classify(&c, DEFAULT_TOL).unwrap();
            for lambda in [0.5, 2.0, 10.0] {
                let t = classify(&c.scaled(lambda), DEFAULT_TOL).unwrap();
                assert!(t.approx_eq(&base, 1e-9), "{group} x{lambda}: {t} vs {base}");
            }
        }
    }

    #[test]
    fn display() {
        assert_eq!(BianchiType::vii(-3.0).to_string(), "VII, alpha=3");
        assert_eq!(BianchiType::plain(BianchiTag::IV).to_string(), "IV");
    }
}
