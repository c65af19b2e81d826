//! JSON file format for polynomial sections.
//!
//! Indices are 1-based in files. Coefficients are exact rationals written as
//! `"p/q"` strings.

use std::path::Path;

use anyhow::{bail, Context};
use kmono_core::index::FiberKey;
use kmono_core::poly::Exponent;
use kmono_core::{Cx, IndexProfile, Rational, Section, Tag};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SectionFile {
    pub k: usize,
    pub l: usize,
    pub tag: String,
    pub terms: Vec<TermEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermEntry {
    pub upper: Vec<u8>,
    pub lower: Vec<u8>,
    pub monomial: [u8; 6],
    pub re: String,
    pub im: String,
}

fn tag_name(tag: Tag) -> &'static str {
    match tag {
        Tag::V => "V",
        Tag::ScriptV => "scriptV",
    }
}

impl SectionFile {
    pub fn from_section(s: &Section) -> Self {
        let p = s.profile();
        let mut terms = Vec::new();
        for (key, poly) in s.components() {
            for (e, c) in poly.terms() {
                terms.push(TermEntry {
                    upper: key.upper().iter().map(|a| a + 1).collect(),
                    lower: key.lower().iter().map(|b| b + 1).collect(),
                    monomial: *e,
                    re: c.re.to_fraction_string(),
                    im: c.im.to_fraction_string(),
                });
            }
        }
        SectionFile { k: p.k(), l: p.l(), tag: tag_name(s.tag()).to_string(), terms }
    }

    /// Validates every field and rebuilds the section. A `scriptV` tag is
    /// checked against the contraction.
    pub fn to_section(&self) -> anyhow::Result<Section> {
        let profile = IndexProfile::level(self.k, self.l)
            .map_err(|_| anyhow::anyhow!("invalid level l = {} for k = {}", self.l, self.k))?;
        let tag = match self.tag.as_str() {
            "V" => Tag::V,
            "scriptV" => Tag::ScriptV,
            other => bail!("unknown tag {other:?}; expected \"V\" or \"scriptV\""),
        };
        let mut s = Section::zero(profile, Tag::V);
        let mut seen: std::collections::BTreeSet<(FiberKey, Exponent)> = Default::default();
        for (n, t) in self.terms.iter().enumerate() {
            let ctx = || format!("term {n}");
            if t.upper.len() != profile.alt || t.lower.len() != profile.sym {
                bail!("{}: expected {} upper and {} lower indices", ctx(), profile.alt, profile.sym);
            }
            if t.upper.iter().chain(&t.lower).any(|&i| !(1..=4).contains(&i)) {
                bail!("{}: indices must lie in 1..4", ctx());
            }
            if t.lower.windows(2).any(|w| w[0] > w[1]) {
                bail!("{}: lower indices must be nondecreasing", ctx());
            }
            if t.upper.windows(2).any(|w| w[0] >= w[1]) {
                bail!("{}: upper indices must be strictly increasing", ctx());
            }
            let lower: Vec<u8> = t.lower.iter().map(|b| b - 1).collect();
            let upper: Vec<u8> = t.upper.iter().map(|a| a - 1).collect();
            let (key, _) = FiberKey::from_lists(&lower, &upper).expect("distinct upper indices");
            if !seen.insert((key, t.monomial)) {
                bail!("{}: duplicate entry", ctx());
            }
            let re: Rational = t.re.parse().with_context(ctx)?;
            let im: Rational = t.im.parse().with_context(ctx)?;
            s.add_term(key, t.monomial, &Cx::new(re, im));
        }
        if tag == Tag::ScriptV && !s.is_contraction_free() {
            bail!("section is tagged scriptV but its contraction is nonzero");
        }
        Ok(s.with_tag(tag))
    }

    /// One term per line; the output is still plain JSON.
    pub fn to_json(&self) -> String {
        let tag = serde_json::to_string(&self.tag).expect("plain data");
        let mut out = format!("{{\n  \"k\": {},\n  \"l\": {},\n  \"tag\": {tag},\n  \"terms\": [", self.k, self.l);
        for (n, t) in self.terms.iter().enumerate() {
            out.push_str(if n == 0 { "\n    " } else { ",\n    " });
            out.push_str(&serde_json::to_string(t).expect("plain data"));
        }
        out.push_str(if self.terms.is_empty() { "]\n}\n" } else { "\n  ]\n}\n" });
        out
    }

    pub fn read(path: &Path) -> anyhow::Result<Section> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let file: SectionFile =
            serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        file.to_section().with_context(|| format!("validating {}", path.display()))
    }

    pub fn write(s: &Section, path: &Path) -> anyhow::Result<()> {
        std::fs::write(path, Self::from_section(s).to_json()).with_context(|| format!("writing {}", path.display()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use kmono_core::MonogenicComplex;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn round_trip() {
        let cx = MonogenicComplex::new(5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for l in 0..4 {
            let s = cx.random_section(l, 2, &mut rng).unwrap().scale(&Cx::ratio(1, 3));
            let file = SectionFile::from_section(&s);
            let text = file.to_json();
            let back: SectionFile = serde_json::from_str(&text).unwrap();
            assert_eq!(back, file);
            assert_eq!(back.to_section().unwrap(), s);
        }
    }

    #[test]
    fn rejects_malformed_terms() {
        let base = SectionFile {
            k: 4,
            l: 1,
            tag: "V".into(),
            terms: vec![TermEntry {
                upper: vec![1],
                lower: vec![2, 2, 3],
                monomial: [0; 6],
                re: "1/2".into(),
                im: "0/1".into(),
            }],
        };
        assert!(base.to_section().is_ok());
        let mut bad = base.clone();
        bad.terms[0].lower = vec![3, 2, 2];
        assert!(bad.to_section().is_err());
        let mut bad = base.clone();
        bad.terms[0].upper = vec![5];
        assert!(bad.to_section().is_err());
        let mut bad = base.clone();
        bad.terms[0].re = "1/0".into();
        assert!(bad.to_section().is_err());
        let mut bad = base.clone();
        bad.tag = "scriptV".into();
        // upper index repeated below, so the contraction is nonzero
        bad.terms[0].upper = vec![2];
        assert!(bad.to_section().is_err());
        let mut bad = base.clone();
        bad.terms.push(bad.terms[0].clone());
        assert!(bad.to_section().is_err());
        let mut bad = base;
        bad.l = 5;
        assert!(bad.to_section().is_err());
    }
}
