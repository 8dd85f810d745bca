//! JSON file formats. Rationals are strings `"p/q"`, a word is a list of
//! generator names and the empty list is the unit.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use lch_core::algebra::{Dga, Generator, Poly};
use lch_core::cobordism::ChainMap;
use lch_core::construction::{ProfileConstraint, ProfileProblem};
use lch_core::diagram::{CrossingData, End, LagrangianDiagram, Passage, Strand};
use lch_core::numeric::{format_rational, parse_rational, Rational};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::CliError;

pub type Word = Vec<String>;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorJson {
    pub name: String,
    pub degree: i64,
    pub height: String,
    #[serde(default)]
    pub lower: usize,
    #[serde(default)]
    pub upper: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DgaJson {
    pub name: String,
    #[serde(default)]
    pub grading_modulus: u32,
    #[serde(default = "one")]
    pub num_components: usize,
    pub generators: Vec<GeneratorJson>,
    #[serde(default)]
    pub differential: BTreeMap<String, Vec<Word>>,
}

fn one() -> usize {
    1
}

#[derive(Deserialize)]
#[serde(untagged)]
pub enum DgaRef {
    Path(PathBuf),
    Inline(Box<DgaJson>),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapJson {
    pub source: DgaRef,
    pub target: DgaRef,
    #[serde(default)]
    pub partial: bool,
    pub assignments: BTreeMap<String, Vec<Word>>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ConstraintJson {
    Derivative { lambda: String, c: String },
    Pointwise { alpha: String, beta: String },
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileJson {
    pub u: String,
    pub v: String,
    pub constraints: Vec<ConstraintJson>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PassageJson {
    pub crossing: String,
    pub strand: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CrossingJson {
    pub height: String,
    pub degree: i64,
    #[serde(default)]
    pub lower: usize,
    #[serde(default)]
    pub upper: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OuterJson {
    pub crossing: String,
    pub end: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagramJson {
    #[serde(default = "diagram_name")]
    pub name: String,
    #[serde(default)]
    pub grading_modulus: u32,
    pub components: Vec<Vec<PassageJson>>,
    pub rotation: BTreeMap<String, Vec<String>>,
    pub crossings: BTreeMap<String, CrossingJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outer: Option<OuterJson>,
}

fn diagram_name() -> String {
    "diagram".into()
}

pub fn rational(field: &str, s: &str) -> Result<Rational, CliError> {
    parse_rational(s).map_err(|e| CliError::Malformed(format!("{field}: {e}")))
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Malformed(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Malformed(format!("{}: {e}", path.display())))
}

impl DgaJson {
    pub fn to_dga(&self) -> Result<Dga, CliError> {
        let gens = self
            .generators
            .iter()
            .map(|g| {
                Ok(
                    Generator::new(&g.name, g.degree, rational(&g.name, &g.height)?)
                        .with_components(g.lower, g.upper),
                )
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        let mut dga = Dga::new(&self.name, self.grading_modulus, self.num_components, gens)
            .map_err(|e| CliError::Malformed(e.to_string()))?;
        for (g, words) in &self.differential {
            dga = dga
                .with_differential(g, words)
                .map_err(|e| CliError::Malformed(e.to_string()))?;
        }
        Ok(dga)
    }

    pub fn from_dga(dga: &Dga) -> DgaJson {
        DgaJson {
            name: dga.name.clone(),
            grading_modulus: dga.grading_modulus,
            num_components: dga.num_components,
            generators: dga
                .generators()
                .iter()
                .map(|g| GeneratorJson {
                    name: g.name.clone(),
                    degree: g.degree,
                    height: format_rational(&g.height),
                    lower: g.lower,
                    upper: g.upper,
                })
                .collect(),
            differential: dga
                .ids()
                .filter(|&a| !dga.differential(a).is_zero())
                .map(|a| (dga.name(a).to_string(), words(dga, dga.differential(a))))
                .collect(),
        }
    }
}

/// Words of a polynomial, sorted by length and then by names.
pub fn words(dga: &Dga, p: &Poly) -> Vec<Word> {
    let mut out: Vec<Word> = p
        .terms()
        .map(|m| {
            m.letters()
                .iter()
                .map(|&g| dga.name(g).to_string())
                .collect()
        })
        .collect();
    out.sort_by(|a: &Word, b: &Word| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

pub fn load_dga(path: &Path) -> Result<Dga, CliError> {
    read_json::<DgaJson>(path)?.to_dga()
}

fn resolve(r: &DgaRef, base: &Path) -> Result<Dga, CliError> {
    match r {
        DgaRef::Path(p) => load_dga(&base.join(p)),
        DgaRef::Inline(d) => d.to_dga(),
    }
}

/// A chain map file; `source` and `target` are DGA files relative to the map
/// file, or inline DGA objects.
pub fn load_map(path: &Path) -> Result<ChainMap, CliError> {
    let m: MapJson = read_json(path)?;
    let base = path.parent().unwrap_or(Path::new("."));
    let source = resolve(&m.source, base)?;
    let target = resolve(&m.target, base)?;
    let assignments: Vec<(&str, Vec<Word>)> = m
        .assignments
        .iter()
        .map(|(k, v)| (k.as_str(), v.clone()))
        .collect();
    ChainMap::from_words(source, target, &assignments, m.partial)
        .map_err(|e| CliError::Malformed(e.to_string()))
}

pub fn load_profile(path: &Path) -> Result<ProfileProblem, CliError> {
    let p: ProfileJson = read_json(path)?;
    let constraints = p
        .constraints
        .iter()
        .map(|c| {
            Ok(match c {
                ConstraintJson::Derivative { lambda, c } => {
                    ProfileConstraint::derivative(rational("lambda", lambda)?, rational("c", c)?)
                }
                ConstraintJson::Pointwise { alpha, beta } => {
                    ProfileConstraint::pointwise(rational("alpha", alpha)?, rational("beta", beta)?)
                }
            })
        })
        .collect::<Result<_, CliError>>()?;
    Ok(ProfileProblem {
        u: rational("u", &p.u)?,
        v: rational("v", &p.v)?,
        constraints,
    })
}

fn end(s: &str) -> Result<End, CliError> {
    End::parse(s).ok_or_else(|| CliError::Malformed(format!("unknown end {s:?}")))
}

impl DiagramJson {
    pub fn to_diagram(&self) -> Result<LagrangianDiagram, CliError> {
        let components = self
            .components
            .iter()
            .map(|c| {
                c.iter()
                    .map(|p| {
                        let strand = match p.strand.as_str() {
                            "over" => Strand::Over,
                            "under" => Strand::Under,
                            s => return Err(CliError::Malformed(format!("unknown strand {s:?}"))),
                        };
                        Ok(Passage::new(&p.crossing, strand))
                    })
                    .collect()
            })
            .collect::<Result<_, CliError>>()?;
        let rotation = self
            .rotation
            .iter()
            .map(|(x, ends)| {
                let ends: Vec<End> = ends.iter().map(|e| end(e)).collect::<Result<_, _>>()?;
                let ends: [End; 4] = ends
                    .try_into()
                    .map_err(|_| CliError::Malformed(format!("rotation of {x} needs four ends")))?;
                Ok((x.clone(), ends))
            })
            .collect::<Result<_, CliError>>()?;
        let crossings = self
            .crossings
            .iter()
            .map(|(x, c)| {
                Ok((
                    x.clone(),
                    CrossingData {
                        height: rational(x, &c.height)?,
                        degree: c.degree,
                        lower: c.lower,
                        upper: c.upper,
                    },
                ))
            })
            .collect::<Result<_, CliError>>()?;
        let outer = match &self.outer {
            Some(o) => Some((o.crossing.clone(), end(&o.end)?)),
            None => None,
        };
        Ok(LagrangianDiagram {
            name: self.name.clone(),
            grading_modulus: self.grading_modulus,
            components,
            rotation,
            crossings,
            outer,
        })
    }
}

pub fn load_diagram(path: &Path) -> Result<LagrangianDiagram, CliError> {
    read_json::<DiagramJson>(path)?.to_diagram()
}

/// Pretty JSON with object keys sorted.
pub fn canonical<T: Serialize>(x: &T) -> String {
    let v: Value = serde_json::to_value(x).expect("serializable");
    let mut s = serde_json::to_string_pretty(&v).expect("serializable");
    s.push('\n');
    s
}

/// Which kind of file a JSON document is, judged by its keys.
pub enum Kind {
    Dga,
    Diagram,
    Map,
    Profile,
}

pub fn sniff(path: &Path) -> Result<Kind, CliError> {
    let v: Value = read_json(path)?;
    let has = |k: &str| v.get(k).is_some();
    if has("generators") {
        Ok(Kind::Dga)
    } else if has("components") {
        Ok(Kind::Diagram)
    } else if has("assignments") {
        Ok(Kind::Map)
    } else if has("constraints") {
        Ok(Kind::Profile)
    } else {
        Err(CliError::Malformed(format!(
            "{}: unrecognized document",
            path.display()
        )))
    }
}
