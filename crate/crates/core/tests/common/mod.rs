#![allow(dead_code)]

use lie3::algebra::{catalog_entry, CatalogEntry, Group, Mat3, StructureConstants, Vec3};
use lie3::random::{random_metric, random_rotation};
use rand::Rng;

/// Every catalog group, with representative parameters for the families.
pub fn catalog_entries() -> Vec<CatalogEntry> {
    let mut out = Vec::new();
    for group in Group::ALL {
        let alphas: Vec<Option<f64>> = match group {
            Group::Sol3 => vec![Some(0.5), Some(1.0), Some(2.0)],
            Group::G7 => vec![Some(0.0), Some(1.0), Some(2.0)],
            _ => vec![None],
        };
        for alpha in alphas {
            out.push(catalog_entry(group, alpha).unwrap());
        }
    }
    out
}

/// A random Lie algebra in a random orthonormal basis of a random metric.
pub fn random_orthonormal_algebra<R: Rng>(rng: &mut R) -> StructureConstants {
    let group = Group::ALL[rng.random_range(0..Group::ALL.len())];
    let alpha = match group {
        Group::Sol3 => Some(rng.random_range(0.1..4.0)),
        Group::G7 => Some(rng.random_range(-3.0..3.0)),
        _ => None,
    };
    let entry = catalog_entry(group, alpha).unwrap();
    let c = entry.constants.orthonormalize(&random_metric(rng));
    let q = random_rotation(rng);
    c.change_basis(&q)
        .unwrap()
        .scaled(rng.random_range(0.2..3.0))
}

const X: usize = 0;
const Y: usize = 1;
const Z: usize = 2;

pub type Table = [[[f64; 3]; 3]; 3];

/// `∇_{e_i} e_j` entered by hand from the Koszul formula.
fn fixture(entries: &[(usize, usize, [f64; 3])]) -> Table {
    let mut t = [[[0.0; 3]; 3]; 3];
    for &(i, j, v) in entries {
        t[i][j] = v;
    }
    t
}

pub fn sol1_connection() -> Table {
    fixture(&[
        (X, X, [0.0, 0.0, 1.0]),
        (Y, Y, [0.0, 0.0, -1.0]),
        (X, Z, [-1.0, 0.0, 0.0]),
        (Y, Z, [0.0, 1.0, 0.0]),
    ])
}

pub fn nil_connection() -> Table {
    fixture(&[
        (X, Y, [0.0, 0.0, 0.5]),
        (Y, X, [0.0, 0.0, -0.5]),
        (X, Z, [0.0, -0.5, 0.0]),
        (Z, X, [0.0, -0.5, 0.0]),
        (Y, Z, [0.5, 0.0, 0.0]),
        (Z, Y, [0.5, 0.0, 0.0]),
    ])
}

fn nabla(t: &Table, u: &Vec3, v: &Vec3) -> Vec3 {
    let mut out = Vec3::zeros();
    for i in 0..3 {
        for j in 0..3 {
            out += Vec3::from(t[i][j]) * (u[i] * v[j]);
        }
    }
    out
}

/// `Ric(v, w) = Σ_k ⟨∇_{e_k}∇_v w − ∇_v∇_{e_k} w − ∇_{[e_k,v]} w, e_k⟩`.
pub fn ricci_from(t: &Table, c: &StructureConstants) -> Mat3 {
    let e = [Vec3::x(), Vec3::y(), Vec3::z()];
    Mat3::from_fn(|i, j| {
        (0..3)
            .map(|k| {
                let r = nabla(t, &e[k], &nabla(t, &e[i], &e[j]))
                    - nabla(t, &e[i], &nabla(t, &e[k], &e[j]))
                    - nabla(t, &c.bracket(&e[k], &e[i]), &e[j]);
                r[k]
            })
            .sum()
    })
}
