//! The tower file format: a self-describing JSON shape for groups, homs,
//! actions, constant-tower specs, and explicit towers. Field names are
//! normative; parsing reports either a located JSON error or a wrapped
//! validation error naming the offending field path.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use prolim::algebra::{FiniteGroup, GSpace, GroupHom};
use prolim::systems::{ConstantTowerSpec, EquivariantTower, Family, GroupTower, SpaceTower};

#[derive(Debug)]
pub enum ParseError {
    /// Malformed JSON or unrecognized document shape.
    Syntax(String),
    /// Well-formed JSON that fails domain validation; the string names the
    /// field path.
    Validation(String),
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ParseError::Syntax(msg) => write!(f, "parse error: {msg}"),
            ParseError::Validation(msg) => write!(f, "validation error: {msg}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupDoc {
    pub order: usize,
    pub table: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomDoc {
    pub map: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GSpaceDoc {
    pub group: GroupDoc,
    pub carrier: usize,
    pub action: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelDoc {
    pub carrier: usize,
    pub group: GroupDoc,
    pub action: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum TowerDoc {
    #[serde(rename = "constant")]
    Constant {
        space: usize,
        f: Vec<usize>,
        group: GroupDoc,
        nu: HomDoc,
        action: Vec<Vec<usize>>,
    },
    /// Bond k maps level k+1 down to level k.
    #[serde(rename = "explicit")]
    Explicit {
        levels: Vec<LevelDoc>,
        space_bonds: Vec<Vec<usize>>,
        group_bonds: Vec<HomDoc>,
    },
}

/// Any document the CLI accepts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Document {
    Group(GroupDoc),
    GSpace(GSpaceDoc),
    Tower(TowerDoc),
}

pub fn parse_document(text: &str) -> Result<Document, ParseError> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| ParseError::Syntax(e.to_string()))?;
    let obj = value
        .as_object()
        .ok_or_else(|| ParseError::Syntax("top-level value is not an object".into()))?;
    if obj.contains_key("kind") {
        let doc = serde_json::from_value(value.clone())
            .map_err(|e| ParseError::Syntax(e.to_string()))?;
        Ok(Document::Tower(doc))
    } else if obj.contains_key("carrier") {
        let doc = serde_json::from_value(value.clone())
            .map_err(|e| ParseError::Syntax(e.to_string()))?;
        Ok(Document::GSpace(doc))
    } else if obj.contains_key("order") {
        let doc = serde_json::from_value(value.clone())
            .map_err(|e| ParseError::Syntax(e.to_string()))?;
        Ok(Document::Group(doc))
    } else {
        Err(ParseError::Syntax(
            "unrecognized document: expected a \"kind\", \"carrier\", or \"order\" field".into(),
        ))
    }
}

pub fn group_from_doc(doc: &GroupDoc, path: &str) -> Result<Arc<FiniteGroup>, ParseError> {
    if doc.table.len() != doc.order {
        return Err(ParseError::Validation(format!(
            "{path}.table: {} rows for declared order {}",
            doc.table.len(),
            doc.order
        )));
    }
    FiniteGroup::validate(doc.table.clone())
        .map(Arc::new)
        .map_err(|e| ParseError::Validation(format!("{path}.table: {e}")))
}

pub fn gspace_from_doc(doc: &GSpaceDoc, path: &str) -> Result<GSpace, ParseError> {
    let group = group_from_doc(&doc.group, &format!("{path}.group"))?;
    GSpace::validate(group, doc.carrier, doc.action.clone())
        .map_err(|e| ParseError::Validation(format!("{path}.action: {e}")))
}

/// A parsed and validated tower input, ready for the verification commands.
#[derive(Debug, Clone)]
pub enum TowerInput {
    Constant(ConstantTowerSpec),
    Explicit(EquivariantTower),
}

impl TowerInput {
    /// The tower at the requested depth: constant specs materialize,
    /// explicit towers are truncated (error when too shallow).
    pub fn at_depth(&self, depth: Option<usize>) -> Result<EquivariantTower, ParseError> {
        match self {
            TowerInput::Constant(spec) => Ok(spec.materialize(depth.unwrap_or(3))),
            TowerInput::Explicit(t) => {
                let d = depth.unwrap_or(t.depth());
                if d > t.depth() {
                    return Err(ParseError::Validation(format!(
                        "depth {d} exceeds the explicit tower depth {}",
                        t.depth()
                    )));
                }
                Ok(t.truncate(d))
            }
        }
    }
}

pub fn tower_from_doc(doc: &TowerDoc) -> Result<TowerInput, ParseError> {
    match doc {
        TowerDoc::Constant { space, f, group, nu, action } => {
            let group = group_from_doc(group, "group")?;
            let gspace = GSpace::validate(group.clone(), *space, action.clone())
                .map_err(|e| ParseError::Validation(format!("action: {e}")))?;
            let nu = GroupHom::validate(group.clone(), group, nu.map.clone())
                .map_err(|e| ParseError::Validation(format!("nu.map: {e}")))?;
            ConstantTowerSpec::validate(gspace, f.clone(), nu)
                .map(TowerInput::Constant)
                .map_err(|e| ParseError::Validation(format!("f: {e}")))
        }
        TowerDoc::Explicit { levels, space_bonds, group_bonds } => {
            let mut actions = Vec::with_capacity(levels.len());
            for (k, level) in levels.iter().enumerate() {
                let group = group_from_doc(&level.group, &format!("levels[{k}].group"))?;
                let space = GSpace::validate(group, level.carrier, level.action.clone())
                    .map_err(|e| ParseError::Validation(format!("levels[{k}].action: {e}")))?;
                actions.push(space);
            }
            let spaces = SpaceTower::validate(
                actions.iter().map(|a| a.carrier_size()).collect(),
                space_bonds.clone(),
            )
            .map_err(|e| ParseError::Validation(format!("space_bonds: {e}")))?;
            let groups = GroupTower::validate(
                actions.iter().map(|a| a.group().clone()).collect(),
                group_bonds.iter().map(|h| h.map.clone()).collect(),
            )
            .map_err(|e| ParseError::Validation(format!("group_bonds: {e}")))?;
            EquivariantTower::validate(spaces, groups, actions, Family::Explicit)
                .map(TowerInput::Explicit)
                .map_err(|e| ParseError::Validation(format!("tower: {e}")))
        }
    }
}

pub fn group_to_doc(group: &FiniteGroup) -> GroupDoc {
    GroupDoc { order: group.order(), table: group.table().to_vec() }
}

pub fn tower_to_doc(tower: &EquivariantTower) -> TowerDoc {
    TowerDoc::Explicit {
        levels: (0..=tower.depth())
            .map(|k| {
                let action = tower.action(k);
                LevelDoc {
                    carrier: action.carrier_size(),
                    group: group_to_doc(action.group()),
                    action: action.action().to_vec(),
                }
            })
            .collect(),
        space_bonds: tower.spaces().bonds().to_vec(),
        group_bonds: (0..tower.depth())
            .map(|k| HomDoc { map: tower.groups().bond(k).map().to_vec() })
            .collect(),
    }
}

pub fn spec_to_doc(spec: &ConstantTowerSpec) -> TowerDoc {
    TowerDoc::Constant {
        space: spec.action().carrier_size(),
        f: spec.self_map().to_vec(),
        group: group_to_doc(spec.action().group()),
        nu: HomDoc { map: spec.group_endo().map().to_vec() },
        action: spec.action().action().to_vec(),
    }
}
