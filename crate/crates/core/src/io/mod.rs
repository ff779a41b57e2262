//! JSON documents for complexes and the compact binary cell table.

mod binary;

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::complex::{CubeCell, CubicalComplex, Face, FaceLattice, Mark, SimplicialComplex};
use crate::error::{Error, Result};

pub use binary::{read_binary, read_binary_from, write_binary, write_binary_to, MAGIC};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceDoc {
    pub rank: usize,
    pub facet_set: Vec<usize>,
    #[serde(default)]
    pub mark: Mark,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CubicalDoc {
    pub ambient_rank: usize,
    /// `[support, signs]` bitmask pairs.
    pub cells: Vec<(u64, u64)>,
    /// Basis of the sign group the complex is a quotient by.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub quotient: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CuspDoc {
    pub id: usize,
    pub ideal_vertex: usize,
    pub cells: Vec<(u64, u64)>,
}

/// Every file the tools read or write.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Document {
    Simplicial {
        vertices: usize,
        facets: Vec<Vec<usize>>,
    },
    FaceLattice {
        rank: usize,
        facets: usize,
        faces: Vec<FaceDoc>,
        /// Facet sets of the cube faces inserted by a Dehn filling.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        filling: Option<Vec<Vec<usize>>>,
    },
    Cubical(CubicalDoc),
    CuspedManifold {
        core: CubicalDoc,
        cusps: Vec<CuspDoc>,
    },
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Simplicial { .. } => "simplicial",
            Document::FaceLattice { .. } => "face_lattice",
            Document::Cubical(_) => "cubical",
            Document::CuspedManifold { .. } => "cusped_manifold",
        }
    }

    fn wrong(&self, want: &str) -> Error {
        Error::Parse(format!("expected a {want} document, found {}", self.kind()))
    }

    pub fn into_simplicial(self) -> Result<SimplicialComplex> {
        match self {
            Document::Simplicial { vertices, facets } => SimplicialComplex::new(vertices, facets),
            other => Err(other.wrong("simplicial")),
        }
    }

    /// The lattice and, if present, the recorded filling faces.
    pub fn into_face_lattice(self) -> Result<(FaceLattice, Option<Vec<Vec<usize>>>)> {
        match self {
            Document::FaceLattice {
                rank,
                facets,
                faces,
                filling,
            } => {
                let faces = faces
                    .into_iter()
                    .map(|f| Face {
                        rank: f.rank,
                        facet_set: f.facet_set,
                        mark: f.mark,
                    })
                    .collect();
                Ok((FaceLattice::new(rank, facets, faces)?, filling))
            }
            other => Err(other.wrong("face_lattice")),
        }
    }

    pub fn into_cubical(self) -> Result<CubicalComplex> {
        match self {
            Document::Cubical(doc) => cubical_from_doc(doc),
            other => Err(other.wrong("cubical")),
        }
    }
}

pub fn cubical_from_doc(doc: CubicalDoc) -> Result<CubicalComplex> {
    CubicalComplex::with_quotient(
        doc.ambient_rank,
        doc.cells.into_iter().map(|(s, g)| CubeCell::new(s, g)),
        doc.quotient,
    )
}

pub fn cubical_doc(z: &CubicalComplex) -> CubicalDoc {
    CubicalDoc {
        ambient_rank: z.ambient_rank(),
        cells: z.all_cells().map(|c| (c.support, c.signs)).collect(),
        quotient: z.quotient().map(|q| q.basis().to_vec()).unwrap_or_default(),
    }
}

impl From<&SimplicialComplex> for Document {
    fn from(k: &SimplicialComplex) -> Self {
        Document::Simplicial {
            vertices: k.vertex_count(),
            facets: k.facets().to_vec(),
        }
    }
}

impl From<&FaceLattice> for Document {
    fn from(l: &FaceLattice) -> Self {
        Document::FaceLattice {
            rank: l.rank(),
            facets: l.facet_count(),
            faces: l
                .faces()
                .iter()
                .map(|f| FaceDoc {
                    rank: f.rank,
                    facet_set: f.facet_set.clone(),
                    mark: f.mark,
                })
                .collect(),
            filling: None,
        }
    }
}

impl From<&CubicalComplex> for Document {
    fn from(z: &CubicalComplex) -> Self {
        Document::Cubical(cubical_doc(z))
    }
}

pub fn read_document(path: &Path) -> Result<Document> {
    let file = File::open(path)?;
    Ok(serde_json::from_reader(BufReader::new(file))?)
}

pub fn parse_document(text: &str) -> Result<Document> {
    Ok(serde_json::from_str(text)?)
}

/// Compact JSON followed by a newline.
pub fn write_document(path: &Path, doc: &Document) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    serde_json::to_writer(&mut w, doc)?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}

pub fn read_face_lattice(path: &Path) -> Result<FaceLattice> {
    Ok(read_document(path)?.into_face_lattice()?.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simplicial_schema() {
        let doc = parse_document(r#"{"type":"simplicial","vertices":3,"facets":[[0,1],[0,2],[1,2]]}"#).unwrap();
        let k = doc.clone().into_simplicial().unwrap();
        assert_eq!(k.f_vector(), vec![3, 3]);
        assert_eq!(Document::from(&k), doc);
    }

    #[test]
    fn face_lattice_schema_and_default_mark() {
        let text = r#"{"type":"face_lattice","rank":2,"facets":3,"faces":[
            {"rank":0,"facet_set":[0,1],"mark":"ideal"},{"rank":0,"facet_set":[1,2]},{"rank":0,"facet_set":[0,2]},
            {"rank":1,"facet_set":[0]},{"rank":1,"facet_set":[1]},{"rank":1,"facet_set":[2]}]}"#;
        let (l, filling) = parse_document(text).unwrap().into_face_lattice().unwrap();
        assert!(filling.is_none());
        assert_eq!(l.vertices()[0].mark, Mark::Ideal);
        let back = serde_json::to_string(&Document::from(&l)).unwrap();
        assert!(back.contains(r#""mark":"ideal""#));
        assert!(!back.contains("filling"));
    }

    #[test]
    fn wrong_kind_is_a_parse_error() {
        let doc = parse_document(r#"{"type":"simplicial","vertices":1,"facets":[[0]]}"#).unwrap();
        assert!(matches!(doc.into_cubical(), Err(Error::Parse(_))));
        assert!(parse_document(r#"{"type":"nonsense"}"#).is_err());
    }
}
