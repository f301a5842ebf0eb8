//! Quivers with heights and homogeneous relations, and their JSON format.
//!
//! Paths are read left to right: `[a, b]` is "a first, then b".

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{format_rational, parse_rational, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PresentationError {
    #[error("malformed document: {0}")]
    Syntax(String),
    #[error("duplicate id `{0}`")]
    DuplicateId(String),
    #[error("arrow `{arrow}` refers to unknown vertex `{vertex}`")]
    DanglingVertex { arrow: String, vertex: String },
    #[error("relation {relation} refers to unknown arrow `{arrow}`")]
    DanglingArrow { relation: usize, arrow: String },
    #[error("relation {relation}: path is not composable at `{arrow}`")]
    NonComposable { relation: usize, arrow: String },
    #[error("relation {0}: inhomogeneous relation")]
    Inhomogeneous(usize),
    #[error("relation {0}: relation paths must have length at least 2")]
    ShortRelation(usize),
    #[error("relation {0}: empty relation")]
    EmptyRelation(usize),
    #[error("relation {relation}: bad coefficient `{coeff}`")]
    BadCoefficient { relation: usize, coeff: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Vertex {
    pub id: String,
    pub ht: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Arrow {
    pub id: String,
    pub from: usize,
    pub to: usize,
}

/// A linear combination of parallel paths of equal length, each a sequence
/// of arrow indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Relation {
    pub terms: Vec<(Rational, Vec<usize>)>,
}

impl Relation {
    pub fn len(&self) -> usize {
        self.terms[0].1.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuiverPresentation {
    pub name: String,
    pub vertices: Vec<Vertex>,
    pub arrows: Vec<Arrow>,
    pub relations: Vec<Relation>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDoc {
    name: String,
    vertices: Vec<RawVertex>,
    #[serde(default)]
    arrows: Vec<RawArrow>,
    #[serde(default)]
    relations: Vec<Vec<RawTerm>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawVertex {
    id: String,
    ht: u32,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawArrow {
    id: String,
    from: String,
    to: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTerm {
    coeff: String,
    path: Vec<String>,
}

pub fn parse_algebra(document: &str) -> Result<QuiverPresentation, PresentationError> {
    let raw: RawDoc =
        serde_json::from_str(document).map_err(|e| PresentationError::Syntax(e.to_string()))?;
    let mut vindex = HashMap::new();
    for (i, v) in raw.vertices.iter().enumerate() {
        if vindex.insert(v.id.clone(), i).is_some() {
            return Err(PresentationError::DuplicateId(v.id.clone()));
        }
    }
    let mut aindex = HashMap::new();
    let mut arrows = Vec::new();
    for (i, a) in raw.arrows.iter().enumerate() {
        if vindex.contains_key(&a.id) || aindex.insert(a.id.clone(), i).is_some() {
            return Err(PresentationError::DuplicateId(a.id.clone()));
        }
        let lookup = |v: &String| {
            vindex.get(v).copied().ok_or_else(|| PresentationError::DanglingVertex {
                arrow: a.id.clone(),
                vertex: v.clone(),
            })
        };
        arrows.push(Arrow { id: a.id.clone(), from: lookup(&a.from)?, to: lookup(&a.to)? });
    }
    let mut relations = Vec::new();
    for (r, terms) in raw.relations.iter().enumerate() {
        let mut out = Vec::new();
        for t in terms {
            let coeff = parse_rational(&t.coeff).ok_or_else(|| PresentationError::BadCoefficient {
                relation: r,
                coeff: t.coeff.clone(),
            })?;
            let path = t
                .path
                .iter()
                .map(|id| {
                    aindex.get(id).copied().ok_or_else(|| PresentationError::DanglingArrow {
                        relation: r,
                        arrow: id.clone(),
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            out.push((coeff, path));
        }
        relations.push(Relation { terms: out });
    }
    let p = QuiverPresentation {
        name: raw.name,
        vertices: raw.vertices.into_iter().map(|v| Vertex { id: v.id, ht: v.ht }).collect(),
        arrows,
        relations,
    };
    p.validate()?;
    Ok(p)
}

impl QuiverPresentation {
    pub fn validate(&self) -> Result<(), PresentationError> {
        for (r, rel) in self.relations.iter().enumerate() {
            if rel.terms.is_empty() {
                return Err(PresentationError::EmptyRelation(r));
            }
            let mut shape = None;
            for (_, path) in &rel.terms {
                if path.len() < 2 {
                    return Err(PresentationError::ShortRelation(r));
                }
                for w in path.windows(2) {
                    if self.arrows[w[0]].to != self.arrows[w[1]].from {
                        return Err(PresentationError::NonComposable {
                            relation: r,
                            arrow: self.arrows[w[1]].id.clone(),
                        });
                    }
                }
                let s = (path.len(), self.path_source(path), self.path_target(path));
                if *shape.get_or_insert(s) != s {
                    return Err(PresentationError::Inhomogeneous(r));
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        let raw = RawDoc {
            name: self.name.clone(),
            vertices: self.vertices.iter().map(|v| RawVertex { id: v.id.clone(), ht: v.ht }).collect(),
            arrows: self
                .arrows
                .iter()
                .map(|a| RawArrow {
                    id: a.id.clone(),
                    from: self.vertices[a.from].id.clone(),
                    to: self.vertices[a.to].id.clone(),
                })
                .collect(),
            relations: self
                .relations
                .iter()
                .map(|r| {
                    r.terms
                        .iter()
                        .map(|(c, p)| RawTerm {
                            coeff: format_rational(c),
                            path: p.iter().map(|&a| self.arrows[a].id.clone()).collect(),
                        })
                        .collect()
                })
                .collect(),
        };
        let mut s = serde_json::to_string_pretty(&raw).expect("presentation serializes");
        s.push('\n');
        s
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v.id == id)
    }

    pub fn arrow_index(&self, id: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.id == id)
    }

    pub fn ht(&self, v: usize) -> i64 {
        i64::from(self.vertices[v].ht)
    }

    pub fn vid(&self, v: usize) -> &str {
        &self.vertices[v].id
    }

    pub fn path_source(&self, path: &[usize]) -> usize {
        self.arrows[path[0]].from
    }

    pub fn path_target(&self, path: &[usize]) -> usize {
        self.arrows[*path.last().expect("nonempty path")].to
    }

    pub fn arrows_from(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.arrows.len()).filter(move |&a| self.arrows[a].from == v)
    }

    pub fn arrows_into(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.arrows.len()).filter(move |&a| self.arrows[a].to == v)
    }

    /// Arrow-count table `(x, y) ↦ #{arrows x → y}`, nonzero entries only.
    pub fn arrow_counts(&self) -> BTreeMap<(usize, usize), usize> {
        let mut t = BTreeMap::new();
        for a in &self.arrows {
            *t.entry((a.from, a.to)).or_insert(0) += 1;
        }
        t
    }

    /// Reverses every arrow and every relation path; heights are kept.
    pub fn opposite(&self) -> QuiverPresentation {
        let name = match self.name.strip_suffix("-op") {
            Some(base) => base.to_string(),
            None => format!("{}-op", self.name),
        };
        QuiverPresentation {
            name,
            vertices: self.vertices.clone(),
            arrows: self
                .arrows
                .iter()
                .map(|a| Arrow { id: a.id.clone(), from: a.to, to: a.from })
                .collect(),
            relations: self
                .relations
                .iter()
                .map(|r| Relation {
                    terms: r
                        .terms
                        .iter()
                        .map(|(c, p)| (c.clone(), p.iter().rev().copied().collect()))
                        .collect(),
                })
                .collect(),
        }
    }

    /// Same quiver and relations with new heights, in vertex order.
    pub fn with_heights(&self, name: &str, heights: &[u32]) -> QuiverPresentation {
        assert_eq!(heights.len(), self.vertices.len());
        let mut p = self.clone();
        p.name = name.to_string();
        for (v, &h) in p.vertices.iter_mut().zip(heights) {
            v.ht = h;
        }
        p
    }

    /// Quiver and relations agree; names are ignored.
    pub fn same_quiver(&self, other: &QuiverPresentation) -> bool {
        self.vertices == other.vertices && self.arrows == other.arrows && self.relations == other.relations
    }
}
