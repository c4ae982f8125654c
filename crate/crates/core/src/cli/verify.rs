//! `verify-paper`: reproduces which Bianchi types admit left-invariant
//! conformal foliations by geodesics (equivalently harmonic morphisms to surfaces).

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::{h, num, type_json, vec_json};
use crate::algebra::{catalog_entry, su2_as_printed, CatalogEntry, Group};
use crate::bianchi::{classify, BianchiTag, BianchiType};
use crate::error::Result;
use crate::foliation::{
    adapt_basis, attainable_types, classify_family, enumerate_families, locate_directions,
    search_directions, SearchOptions, ADAPT_TOL,
};
use crate::random::random_metric;

/// Random draws per family when cross-checking the family case analysis.
const FAMILY_DRAWS: usize = 100;

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    pub samples: usize,
    pub seed: u64,
    pub search: SearchOptions,
    /// Use the type IX variant with `[Y,Z] = −2X`.
    pub printed_type_ix: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            samples: 100,
            seed: 42,
            search: SearchOptions::default(),
            printed_type_ix: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIPPED",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Check {
    pub label: String,
    pub ok: bool,
    pub detail: String,
    pub data: Value,
}

#[derive(Clone, Debug)]
pub struct Section {
    pub name: &'static str,
    pub status: Status,
    pub checks: Vec<Check>,
}

impl Section {
    fn from_checks(name: &'static str, checks: Vec<Check>) -> Self {
        let status = if checks.iter().all(|c| c.ok) {
            Status::Pass
        } else {
            Status::Fail
        };
        Self {
            name,
            status,
            checks,
        }
    }
}

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub sections: Vec<Section>,
    pub samples: usize,
    pub seed: u64,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.sections.iter().all(|s| s.status != Status::Fail)
    }

    pub fn section(&self, name: &str) -> Option<&Section> {
        self.sections.iter().find(|s| s.name == name)
    }

    pub fn render_text(&self) -> String {
        let mut text = format!(
            "verify-paper (samples={}, seed={})\n",
            self.samples, self.seed
        );
        for s in &self.sections {
            text.push_str(&format!("\n[{}] {}\n", s.status.as_str(), s.name));
            for c in &s.checks {
                text.push_str(&format!(
                    "  {:<4} {:<14} {}\n",
                    if c.ok { "ok" } else { "FAIL" },
                    c.label,
                    c.detail
                ));
            }
        }
        text.push_str("\nsummary:\n");
        for s in &self.sections {
            text.push_str(&format!("  {:<16} {}\n", s.name, s.status.as_str()));
        }
        text.push_str(&format!(
            "overall: {}\n",
            if self.passed() { "PASS" } else { "FAIL" }
        ));
        text
    }

    pub fn to_json(&self) -> Value {
        json!({
            "samples": self.samples,
            "seed": self.seed,
            "passed": self.passed(),
            "sections": self.sections.iter().map(|s| json!({
                "name": s.name,
                "status": s.status.as_str(),
                "checks": s.checks.iter().map(|c| json!({
                    "label": c.label,
                    "ok": c.ok,
                    "detail": c.detail,
                    "data": c.data,
                })).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })
    }
}

fn entry(group: Group, alpha: Option<f64>, opts: &VerifyOptions) -> CatalogEntry {
    if group == Group::Su2 && opts.printed_type_ix {
        su2_as_printed()
    } else {
        catalog_entry(group, alpha).expect("built-in catalog entries are valid")
    }
}

fn tags_text(tags: &[BianchiTag]) -> String {
    let names: Vec<&str> = tags.iter().map(|t| t.as_str()).collect();
    format!("{{{}}}", names.join(", "))
}

fn families_section(opts: &VerifyOptions) -> Section {
    let mut checks = Vec::new();
    let union = attainable_types();
    let expected = [
        BianchiTag::I,
        BianchiTag::II,
        BianchiTag::III,
        BianchiTag::V,
        BianchiTag::VII,
        BianchiTag::VIII,
        BianchiTag::IX,
    ];
    checks.push(Check {
        label: "union".into(),
        ok: union == expected,
        detail: format!(
            "attainable types {} ({} types; IV and VI excluded: {})",
            tags_text(&union),
            union.len(),
            !union.contains(&BianchiTag::IV) && !union.contains(&BianchiTag::VI)
        ),
        data: json!(union.iter().map(|t| t.as_str()).collect::<Vec<_>>()),
    });

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for family in enumerate_families() {
        let mut mismatches = 0;
        let mut seen: Vec<BianchiTag> = Vec::new();
        for _ in 0..FAMILY_DRAWS {
            let p = family.sample(&mut rng);
            let by_family = classify_family(&p, opts.search.tol);
            let by_algebra = classify(&p.structure_constants(), opts.search.tol);
            match (by_family, by_algebra) {
                (Ok(a), Ok(b)) if a.approx_eq(&b, 1e-6) && family.attainable.contains(&a.tag) => {
                    if !seen.contains(&a.tag) {
                        seen.push(a.tag);
                    }
                }
                _ => mismatches += 1,
            }
        }
        seen.sort();
        checks.push(Check {
            label: format!("family {}", family.index),
            ok: mismatches == 0,
            detail: format!(
                "{}: attainable {}, {} draws, observed {}, {} disagreements",
                family.constraint_text(),
                tags_text(&family.attainable),
                FAMILY_DRAWS,
                tags_text(&seen),
                mismatches
            ),
            data: json!({"mismatches": mismatches}),
        });
    }
    Section::from_checks("families", checks)
}

fn positives_section(opts: &VerifyOptions) -> Result<Section> {
    let cases = [
        (Group::R3, None),
        (Group::Nil3, None),
        (Group::H2xR, None),
        (Group::H3, None),
        (Group::G7, Some(0.0)),
        (Group::G7, Some(1.0)),
        (Group::G7, Some(2.0)),
        (Group::Sl2r, None),
        (Group::Su2, None),
    ];
    let mut checks = Vec::new();
    for (group, alpha) in cases {
        let e = entry(group, alpha, opts);
        let c = e.constants.orthonormalize(&e.metric);
        let kind = classify(&c, opts.search.tol)?;
        let found = locate_directions(&c, &opts.search)?;
        let best = found
            .directions
            .iter()
            .min_by(|a, b| a.total_residual().total_cmp(&b.total_residual()));
        let (ok, detail, data) = match best {
            None => (false, "no direction found".to_string(), Value::Null),
            Some(d) => {
                let residual = d.total_residual();
                let adapted = adapt_basis(&c, &d.direction());
                let family_type = adapted
                    .as_ref()
                    .ok()
                    .and_then(|p| classify_family(p, ADAPT_TOL).ok());
                let agrees = family_type
                    .map(|t| t.approx_eq(&kind, 1e-6))
                    .unwrap_or(false);
                let ok = residual < opts.search.accept && agrees;
                let detail = format!(
                    "type {kind}: {} direction(s), best {} residual {}, family type {}",
                    found.directions.len(),
                    super::vec_text(&d.direction()),
                    h(residual),
                    family_type
                        .map(|t| t.to_string())
                        .unwrap_or_else(|| "n/a".into())
                );
                let data = json!({
                    "directions": found.directions.len(),
                    "direction": vec_json(&d.direction()),
                    "residual": num(residual),
                    "type": type_json(&kind),
                    "family_type": family_type.map(|t| type_json(&t)),
                });
                (ok, detail, data)
            }
        };
        checks.push(Check {
            label: e.label(),
            ok,
            detail,
            data,
        });
    }
    Ok(Section::from_checks("positives", checks))
}

fn negatives_section(opts: &VerifyOptions) -> Result<Section> {
    let cases = [
        (Group::G4, None),
        (Group::Sol3, Some(0.5)),
        (Group::Sol3, Some(1.0)),
        (Group::Sol3, Some(2.0)),
    ];
    if opts.samples == 0 {
        return Ok(Section {
            name: "negatives",
            status: Status::Skipped,
            checks: Vec::new(),
        });
    }
    let mut checks = Vec::new();
    for (index, (group, alpha)) in cases.into_iter().enumerate() {
        let e = entry(group, alpha, opts);
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(index as u64));
        let mut with_directions = 0;
        let mut min_lattice = f64::INFINITY;
        for _ in 0..opts.samples {
            let g = random_metric(&mut rng);
            let report = search_directions(&e.constants.orthonormalize(&g), &opts.search)?;
            if report.admits {
                with_directions += 1;
            }
            if let Some(m) = report.lattice_min_residual {
                min_lattice = min_lattice.min(m);
            }
        }
        checks.push(Check {
            label: e.label(),
            ok: with_directions == 0,
            detail: format!(
                "{} random metrics, {} with a foliation, smallest lattice residual {}",
                opts.samples,
                with_directions,
                h(min_lattice)
            ),
            data: json!({
                "metrics": opts.samples,
                "admitting": with_directions,
                "min_lattice_residual": num(min_lattice),
            }),
        });
    }
    Ok(Section::from_checks("negatives", checks))
}

fn classification_section(opts: &VerifyOptions) -> Result<Section> {
    use BianchiTag::*;
    let cases: [(Group, Option<f64>, BianchiType); 13] = [
        (Group::R3, None, BianchiType::plain(I)),
        (Group::Nil3, None, BianchiType::plain(II)),
        (Group::H2xR, None, BianchiType::plain(III)),
        (Group::G4, None, BianchiType::plain(IV)),
        (Group::H3, None, BianchiType::plain(V)),
        (Group::Sol3, Some(0.5), BianchiType::vi(2.0)),
        (Group::Sol3, Some(1.0), BianchiType::vi(1.0)),
        (Group::Sol3, Some(2.0), BianchiType::vi(2.0)),
        (Group::G7, Some(0.0), BianchiType::vii(0.0)),
        (Group::G7, Some(1.0), BianchiType::vii(1.0)),
        (Group::G7, Some(2.0), BianchiType::vii(2.0)),
        (Group::Sl2r, None, BianchiType::plain(VIII)),
        (Group::Su2, None, BianchiType::plain(IX)),
    ];
    let mut checks = Vec::new();
    for (group, alpha, expected) in cases {
        let e = entry(group, alpha, opts);
        let got = classify(&e.constants, opts.search.tol)?;
        let ok = got.approx_eq(&expected, 1e-9);
        let mut detail = format!("expected {expected}, got {got}");
        if !ok && group == Group::Su2 {
            let sig = crate::algebra::signature(&e.constants.killing_form(), 1e-12);
            detail.push_str(&format!(
                " (Killing form signature +{} -{} 0:{})",
                sig.0, sig.1, sig.2
            ));
        }
        checks.push(Check {
            label: e.label(),
            ok,
            detail,
            data: json!({"expected": type_json(&expected), "got": type_json(&got)}),
        });
    }
    Ok(Section::from_checks("classification", checks))
}

/// Runs all four sections.
pub fn verify_paper(opts: &VerifyOptions) -> Result<VerifyReport> {
    Ok(VerifyReport {
        sections: vec![
            families_section(opts),
            positives_section(opts)?,
            negatives_section(opts)?,
            classification_section(opts)?,
        ],
        samples: opts.samples,
        seed: opts.seed,
    })
}
