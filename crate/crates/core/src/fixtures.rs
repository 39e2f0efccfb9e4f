//! Bundled classification lists and the comparison against search output.
//!
//! A fixture file has `#` comment lines, a `ring:` header, a `mode:` header
//! (`raw` or `rotation_classes`) and one tuple literal per line.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quiddity::{reversed, rotation_normal_form};
use crate::ring::{ring_from_str, Elem, Ring};
use crate::search::{applicable_bound, ell_search, expand_raw, SearchOptions, SearchReport};

pub const DATA_VERSION: &str = "v1";

const BUNDLED: [(&str, &str); 3] = [
    ("z4", include_str!("../data/v1/z4.txt")),
    ("z2xz2", include_str!("../data/v1/z2xz2.txt")),
    ("f4", include_str!("../data/v1/f4.txt")),
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FixtureMode {
    Raw,
    RotationClasses,
}

#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: String,
    pub ring: Arc<Ring>,
    pub mode: FixtureMode,
    /// In file order.
    pub tuples: Vec<Vec<Elem>>,
}

impl Fixture {
    pub fn parse(name: &str, text: &str) -> Result<Fixture> {
        let bad = |msg: String| Error::InvalidSpec(format!("fixture {name}: {msg}"));
        let mut ring = None;
        let mut mode = None;
        let mut tuples = Vec::new();
        for line in text.lines().map(str::trim) {
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(spec) = line.strip_prefix("ring:") {
                ring = Some(ring_from_str(spec)?);
            } else if let Some(m) = line.strip_prefix("mode:") {
                mode = Some(match m.trim() {
                    "raw" => FixtureMode::Raw,
                    "rotation_classes" => FixtureMode::RotationClasses,
                    other => return Err(bad(format!("unknown mode `{other}`"))),
                });
            } else {
                let r = ring.as_ref().ok_or_else(|| bad("tuple before the ring header".into()))?;
                tuples.push(r.parse_tuple(line)?);
            }
        }
        Ok(Fixture {
            name: name.to_string(),
            ring: ring.ok_or_else(|| bad("missing ring header".into()))?,
            mode: mode.ok_or_else(|| bad("missing mode header".into()))?,
            tuples,
        })
    }

    pub fn max_size(&self) -> usize {
        self.tuples.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// The fixture as a set in its own convention.
    fn expected(&self) -> BTreeSet<Vec<Elem>> {
        match self.mode {
            FixtureMode::Raw => self.tuples.iter().cloned().collect(),
            FixtureMode::RotationClasses => self.tuples.iter().map(|t| rotation_normal_form(t)).collect(),
        }
    }

    /// Dihedral normal forms converted to the fixture's convention.
    fn convert(&self, forms: &[Vec<Elem>]) -> BTreeSet<Vec<Elem>> {
        match self.mode {
            FixtureMode::Raw => expand_raw(forms).into_iter().collect(),
            FixtureMode::RotationClasses => forms
                .iter()
                .flat_map(|f| [rotation_normal_form(f), rotation_normal_form(&reversed(f))])
                .collect(),
        }
    }

    /// Compares against the dihedral normal forms of a search.
    pub fn compare(&self, forms: &[Vec<Elem>]) -> FixtureDiff {
        let want = self.expected();
        let got = self.convert(forms);
        let fmt = |s: &BTreeSet<Vec<Elem>>, other: &BTreeSet<Vec<Elem>>| {
            s.difference(other).map(|t| self.ring.format_tuple(t)).collect::<Vec<_>>()
        };
        let missing = fmt(&want, &got);
        let unexpected = fmt(&got, &want);
        FixtureDiff {
            name: self.name.clone(),
            ring: self.ring.spec().to_string(),
            mode: self.mode,
            expected: want.len(),
            found: got.len(),
            pass: missing.is_empty() && unexpected.is_empty(),
            missing,
            unexpected,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FixtureDiff {
    pub name: String,
    pub ring: String,
    pub mode: FixtureMode,
    pub expected: usize,
    pub found: usize,
    pub missing: Vec<String>,
    pub unexpected: Vec<String>,
    pub pass: bool,
}

pub fn bundled_names() -> Vec<&'static str> {
    BUNDLED.iter().map(|(n, _)| *n).collect()
}

pub fn load(name: &str) -> Result<Fixture> {
    let (_, text) = BUNDLED
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| Error::InvalidSpec(format!("no bundled fixture named `{name}`")))?;
    Fixture::parse(name, text)
}

/// The bundled fixture whose ring is `ring`, if any.
pub fn for_ring(ring: &Ring) -> Result<Option<Fixture>> {
    for name in bundled_names() {
        let f = load(name)?;
        if *f.ring == *ring {
            return Ok(Some(f));
        }
    }
    Ok(None)
}

/// Runs the certified search up to the applicable bound and diffs it
/// against the fixture.
pub fn classify(fixture: &Fixture, opts: &SearchOptions) -> Result<(SearchReport, FixtureDiff)> {
    let (bound, _) = applicable_bound(&fixture.ring, None)?;
    let report = ell_search(&fixture.ring, (bound as usize).max(4), None, opts)?;
    let forms: Vec<Vec<Elem>> = report.classes.values().flatten().cloned().collect();
    let diff = fixture.compare(&forms);
    Ok((report, diff))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_files_parse() {
        let sizes: Vec<(usize, usize)> = bundled_names()
            .into_iter()
            .map(|n| {
                let f = load(n).unwrap();
                (f.tuples.len(), f.max_size())
            })
            .collect();
        assert_eq!(sizes, vec![(6, 4), (7, 6), (10, 9)]);
        assert!(load("z5").is_err());
    }

    #[test]
    fn header_errors() {
        assert!(Fixture::parse("x", "mode: raw\n[0,0]").is_err());
        assert!(Fixture::parse("x", "ring: Z/4\n[0,0]").is_err());
        assert!(Fixture::parse("x", "ring: Z/4\nmode: sorted\n").is_err());
        assert!(Fixture::parse("x", "ring: Z/4\nmode: raw\n[0,5]").is_err());
    }

    #[test]
    fn rotation_class_comparison_sees_reversals() {
        let f = Fixture::parse("t", "ring: Z/5\nmode: rotation_classes\n[1,2,3]\n[3,2,1]").unwrap();
        let r = &f.ring;
        let nf = vec![r.from_int(1), r.from_int(2), r.from_int(3)];
        assert!(f.compare(&[nf.clone()]).pass);
        let d = f.compare(&[]);
        assert_eq!((d.pass, d.missing.len()), (false, 2));
        let g = Fixture::parse("t", "ring: Z/5\nmode: rotation_classes\n[1,2,3]").unwrap();
        assert_eq!(g.compare(&[nf]).unexpected, vec!["[1,3,2]".to_string()]);
    }

    #[test]
    fn classification_matches() {
        for name in bundled_names() {
            let f = load(name).unwrap();
            let (report, diff) = classify(&f, &SearchOptions::default()).unwrap();
            assert!(diff.pass, "{diff:?}");
            assert!(report.certified_complete);
            assert_eq!(report.max_irreducible_found, f.max_size());
        }
    }
}
