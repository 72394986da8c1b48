//! JSON file formats for groups, endomorphisms, and generating sets, plus
//! the `"x1,...,xn;coset"` element literal used on the command line.
//!
//! The serializers are deterministic (struct field order, two-space
//! indentation, trailing newline), so files written by [`to_json_pretty`]
//! round-trip byte-identically through parse and re-serialize.

use crate::group::{Endomorphism, GroupDataError, GroupElement, VAGroupData};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SchemaError {
    #[error("json parse error: {0}")]
    Json(String),
    #[error("group data error: {0}")]
    Group(#[from] GroupDataError),
    #[error("bad element literal {literal:?}: {reason}")]
    BadElementLiteral { literal: String, reason: String },
}

/// On-disk form of a group: rank, coset labels, coset multiplication table,
/// cocycle, and the lattice action of each coset.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupFile {
    pub n: usize,
    pub cosets: Vec<String>,
    pub mult: Vec<Vec<usize>>,
    pub cocycle: Vec<Vec<Vec<i64>>>,
    pub action: Vec<Vec<Vec<i64>>>,
}

impl GroupFile {
    pub fn from_group(group: &VAGroupData) -> Self {
        let m = group.coset_count();
        GroupFile {
            n: group.lattice_rank(),
            cosets: group.coset_labels().to_vec(),
            mult: group.mult_table().to_vec(),
            cocycle: (0..m)
                .map(|a| (0..m).map(|b| group.cocycle(a, b).to_vec()).collect())
                .collect(),
            action: (0..m).map(|a| group.action(a).rows()).collect(),
        }
    }

    pub fn to_group(&self) -> Result<VAGroupData, GroupDataError> {
        VAGroupData::new(
            self.n,
            self.cosets.clone(),
            self.mult.clone(),
            self.cocycle.clone(),
            self.action.clone(),
        )
    }
}

/// On-disk form of an endomorphism: the lattice matrix and the image of each
/// coset representative.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EndoFile {
    pub matrix: Vec<Vec<i64>>,
    pub rep_image: Vec<GroupElement>,
}

impl EndoFile {
    pub fn from_endo(endo: &Endomorphism) -> Self {
        EndoFile { matrix: endo.matrix().rows(), rep_image: endo.rep_images().to_vec() }
    }

    pub fn to_endo(&self, group: &VAGroupData) -> Result<Endomorphism, GroupDataError> {
        Endomorphism::new(group, self.matrix.clone(), self.rep_image.clone())
    }
}

/// On-disk form of a generating set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenSetFile {
    pub elements: Vec<GroupElement>,
}

pub fn from_json<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T, SchemaError> {
    serde_json::from_str(text).map_err(|e| SchemaError::Json(e.to_string()))
}

pub fn to_json_pretty<T: Serialize>(value: &T) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("serialization cannot fail");
    out.push('\n');
    out
}

/// Parses `"x1,...,xn;coset"` where `coset` is a label from the group (or,
/// as a fallback, a coset index).
pub fn parse_element(group: &VAGroupData, literal: &str) -> Result<GroupElement, SchemaError> {
    let bad = |reason: &str| SchemaError::BadElementLiteral {
        literal: literal.to_string(),
        reason: reason.to_string(),
    };
    let (vec_part, coset_part) = literal
        .split_once(';')
        .ok_or_else(|| bad("expected \"x1,...,xn;coset\" with a single semicolon"))?;
    let vector: Vec<i64> = vec_part
        .split(',')
        .map(|s| s.trim().parse::<i64>())
        .collect::<Result<_, _>>()
        .map_err(|e| bad(&format!("bad coordinate: {e}")))?;
    if vector.len() != group.lattice_rank() {
        return Err(bad(&format!(
            "expected {} coordinates, got {}",
            group.lattice_rank(),
            vector.len()
        )));
    }
    let coset_part = coset_part.trim();
    let coset = match group.coset_labels().iter().position(|l| l == coset_part) {
        Some(c) => c,
        None => coset_part
            .parse::<usize>()
            .ok()
            .filter(|&c| c < group.coset_count())
            .ok_or_else(|| bad("coset is neither a known label nor a valid index"))?,
    };
    Ok(GroupElement::new(vector, coset))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z2_by_c2_file() -> GroupFile {
        GroupFile {
            n: 2,
            cosets: vec!["e".into(), "t".into()],
            mult: vec![vec![0, 1], vec![1, 0]],
            cocycle: vec![vec![vec![0, 0]; 2]; 2],
            action: vec![vec![vec![1, 0], vec![0, 1]], vec![vec![-1, 0], vec![0, -1]]],
        }
    }

    #[test]
    fn group_files_round_trip() {
        let file = z2_by_c2_file();
        let text = to_json_pretty(&file);
        let back: GroupFile = from_json(&text).unwrap();
        assert_eq!(back, file);
        assert_eq!(to_json_pretty(&back), text);
        let group = file.to_group().unwrap();
        assert!(group.validate().is_valid());
        assert_eq!(GroupFile::from_group(&group), file);
    }

    #[test]
    fn endo_files_round_trip() {
        let group = z2_by_c2_file().to_group().unwrap();
        let file = EndoFile {
            matrix: vec![vec![-1, 0], vec![0, -1]],
            rep_image: vec![group.identity(), group.coset_rep(1)],
        };
        let endo = file.to_endo(&group).unwrap();
        assert!(endo.validate(&group).is_valid());
        assert_eq!(EndoFile::from_endo(&endo), file);
        let back: EndoFile = from_json(&to_json_pretty(&file)).unwrap();
        assert_eq!(back, file);
    }

    #[test]
    fn parse_errors_name_the_missing_field() {
        let err = from_json::<GroupFile>("{\"n\": 2}").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("cosets"), "got: {msg}");
    }

    #[test]
    fn element_literals_parse_labels_and_indices() {
        let group = z2_by_c2_file().to_group().unwrap();
        let g = parse_element(&group, "1,-2;t").unwrap();
        assert_eq!(g, GroupElement::new(vec![1, -2], 1));
        assert_eq!(parse_element(&group, " 3 , 4 ; e ").unwrap().coset, 0);
        assert_eq!(parse_element(&group, "0,0;1").unwrap().coset, 1);
        assert_eq!(group.format_element(&g), "1,-2;t");

        for bad in ["1,2", "1;t", "1,2,3;t", "1,x;t", "1,2;q", "1,2;9"] {
            assert!(parse_element(&group, bad).is_err(), "literal {bad:?} should fail");
        }
    }
}
