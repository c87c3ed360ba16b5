//! Manifold definition files.

use std::path::Path;

use anyhow::{bail, Context};
use serde::Deserialize;
use skewcurv::connection::{g45_algebra, ChartManifold, LieGroupManifold};
use skewcurv::manifold::SkewStructure;

/// An expression given either as text or as a bare number.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum ExprSrc {
    Text(String),
    Number(f64),
}

impl ExprSrc {
    pub fn source(&self) -> String {
        match self {
            ExprSrc::Text(s) => s.clone(),
            ExprSrc::Number(v) => format!("{v:?}"),
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ManifoldFile {
    Chart {
        #[serde(rename = "A")]
        a: ExprSrc,
        #[serde(rename = "B")]
        b: ExprSrc,
    },
    LieGroup {
        /// `[i, j, [c1, c2, c3, c4]]`: `[e_i, e_j] = sum c_k e_k`, 1-based.
        brackets: Vec<(usize, usize, [f64; 4])>,
        /// Rows are the coordinates of `S e_1 .. S e_4`.
        #[serde(default)]
        s_images: Option<[[i8; 4]; 4]>,
    },
    Preset {
        name: String,
        a: f64,
        b: f64,
    },
}

pub enum Manifold {
    Chart(ChartManifold),
    Lie { group: LieGroupManifold, label: String },
}

impl Manifold {
    pub fn structure(&self) -> SkewStructure {
        match self {
            Manifold::Chart(m) => m.s,
            Manifold::Lie { group, .. } => group.s,
        }
    }

    pub fn label(&self) -> String {
        match self {
            Manifold::Chart(m) => format!("chart A = {}, B = {}", m.a, m.b),
            Manifold::Lie { label, .. } => label.clone(),
        }
    }
}

pub fn parse_manifold(text: &str) -> anyhow::Result<Manifold> {
    let file: ManifoldFile = serde_json::from_str(text).context("invalid manifold file")?;
    build(file)
}

pub fn load(path: &Path) -> anyhow::Result<Manifold> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse_manifold(&text).with_context(|| format!("in {}", path.display()))
}

fn build(file: ManifoldFile) -> anyhow::Result<Manifold> {
    match file {
        ManifoldFile::Chart { a, b } => {
            let m = ChartManifold::parse(&a.source(), &b.source()).context("cannot parse metric functions")?;
            Ok(Manifold::Chart(m))
        }
        ManifoldFile::LieGroup { brackets, s_images } => {
            let mut c = [[[0.0; 4]; 4]; 4];
            let mut seen = [[false; 4]; 4];
            for (i, j, coeffs) in brackets {
                if !(1..=4).contains(&i) || !(1..=4).contains(&j) {
                    bail!("bracket indices must be in 1..4, got [{i}, {j}]");
                }
                let (i, j) = (i - 1, j - 1);
                if seen[i][j] || seen[j][i] {
                    bail!("bracket [e{}, e{}] given twice", i + 1, j + 1);
                }
                seen[i][j] = true;
                for k in 0..4 {
                    c[i][j][k] = coeffs[k];
                    c[j][i][k] = -coeffs[k];
                }
            }
            let s = match s_images {
                Some(rows) => SkewStructure::from_images(rows)?,
                None => SkewStructure::lie_example(),
            };
            let group = LieGroupManifold::new(c, s)?;
            Ok(Manifold::Lie { group, label: "Lie group from brackets".into() })
        }
        ManifoldFile::Preset { name, a, b } => match name.as_str() {
            "g45" => Ok(Manifold::Lie { group: g45_algebra(a, b)?, label: format!("g45({a}, {b})") }),
            other => bail!("unknown preset {other:?} (known: g45)"),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_kinds() {
        assert!(matches!(parse_manifold(r#"{"type":"chart","A":"2","B":0.5}"#).unwrap(), Manifold::Chart(_)));
        let lie = r#"{"type":"lie_group","brackets":[[1,4,[1,0,0,0]],[2,4,[0,1,0,0]],[3,4,[0,0,1,0]]]}"#;
        assert!(matches!(parse_manifold(lie).unwrap(), Manifold::Lie { .. }));
        assert!(parse_manifold(r#"{"type":"preset","name":"g45","a":1,"b":1}"#).is_ok());
    }

    #[test]
    fn rejects_bad_input() {
        for bad in [
            "{",
            r#"{"type":"sphere"}"#,
            r#"{"type":"chart","A":"2 +","B":"0"}"#,
            r#"{"type":"chart","A":"2"}"#,
            r#"{"type":"lie_group","brackets":[[0,4,[1,0,0,0]]]}"#,
            r#"{"type":"lie_group","brackets":[[1,2,[0,0,1,0]],[1,3,[1,0,0,0]]]}"#,
            r#"{"type":"preset","name":"g45","a":2,"b":1}"#,
            r#"{"type":"preset","name":"g46","a":1,"b":1}"#,
            r#"{"type":"chart","A":"2","B":"0","C":"1"}"#,
        ] {
            assert!(parse_manifold(bad).is_err(), "{bad}");
        }
    }
}
