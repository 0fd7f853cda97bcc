//! JSON wire formats for points, multisets, meshes, sample tables, and
//! covers, with conversions to and from the core types.

use mvq_core::mvf::{Mesh, MeshKind, SampledMvf};
use mvq_core::nagata::{Cover, Member};
use mvq_core::qspace::QPoint;
use mvq_core::spaces::{Norm, Space};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SpaceDoc {
    pub dim: usize,
    pub norm: String,
}

impl SpaceDoc {
    pub fn from_space(space: &Space) -> Self {
        Self {
            dim: space.dim(),
            norm: space.norm().name().to_string(),
        }
    }

    pub fn to_space(&self) -> Result<Space, CliError> {
        let norm = match self.norm.as_str() {
            "euclidean" => Norm::Euclidean,
            "sup" => Norm::Sup,
            "one" => Norm::One,
            other => return Err(CliError::input(format!("unknown norm {other:?}"))),
        };
        Space::new(self.dim, norm).map_err(CliError::from)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QPointDoc {
    #[serde(rename = "Q")]
    pub q: usize,
    pub points: Vec<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub space: Option<SpaceDoc>,
}

impl QPointDoc {
    pub fn from_qpoint(value: &QPoint) -> Self {
        Self {
            q: value.q(),
            points: value.points().to_vec(),
            space: None,
        }
    }

    pub fn to_qpoint(&self) -> Result<QPoint, CliError> {
        if self.points.len() != self.q {
            return Err(CliError::input(format!(
                "Q = {} does not match {} points",
                self.q,
                self.points.len()
            )));
        }
        QPoint::new(self.points.clone()).map_err(CliError::from)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatchingDoc {
    pub sigma: Vec<usize>,
    pub value: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MeshDoc {
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub m: Option<usize>,
    #[serde(default)]
    pub seed: u64,
    pub points: Vec<Vec<f64>>,
}

impl MeshDoc {
    pub fn from_mesh(mesh: &Mesh) -> Self {
        let (kind, m) = match mesh.kind() {
            MeshKind::Sphere { m } => ("sphere", Some(m)),
            MeshKind::Ball { m } => ("ball", Some(m)),
            MeshKind::Explicit => ("explicit", None),
        };
        Self {
            kind: kind.to_string(),
            m,
            seed: mesh.seed(),
            points: mesh.points().to_vec(),
        }
    }

    /// Loaded meshes become explicit point lists; the descriptor is kept
    /// only as provenance.
    pub fn to_mesh(&self) -> Result<Mesh, CliError> {
        if self.points.is_empty() {
            return Err(CliError::input("mesh has no points".to_string()));
        }
        Ok(Mesh::explicit(self.points.clone()))
    }
}

/// Sample table: a mesh and one multiset value per mesh point.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MvfTableDoc {
    pub domain: MeshDoc,
    pub values: Vec<QPointDoc>,
}

impl MvfTableDoc {
    pub fn to_mvf(&self) -> Result<SampledMvf, CliError> {
        let mesh = self.domain.to_mesh()?;
        let dim = self.domain.points[0].len();
        let values: Vec<QPoint> = self
            .values
            .iter()
            .map(|doc| doc.to_qpoint())
            .collect::<Result<_, _>>()?;
        if values.is_empty() {
            return Err(CliError::input("sample table has no values".to_string()));
        }
        let q = values[0].q();
        let target_dim = values[0].dim();
        let domain = Space::euclidean(dim);
        let target = Space::euclidean(target_dim);
        SampledMvf::from_table(domain, target, q, mesh, values).map_err(CliError::from)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ClusterDoc {
    pub base: Vec<f64>,
    pub members: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DecompositionDoc {
    pub d_budget: f64,
    pub clusters: Vec<ClusterDoc>,
}

impl DecompositionDoc {
    pub fn from_decomposition(
        decomposition: &mvq_core::ClusterDecomposition,
        d_budget: f64,
    ) -> Self {
        Self {
            d_budget,
            clusters: decomposition
                .clusters
                .iter()
                .map(|c| ClusterDoc {
                    base: c.base.clone(),
                    members: c.members.clone(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum MemberDoc {
    Interval { lo: f64, hi: f64 },
    Box { lo: Vec<f64>, hi: Vec<f64> },
    Ball { center: Vec<f64>, radius: f64 },
    Points { points: Vec<Vec<f64>> },
}

impl MemberDoc {
    pub fn from_member(member: &Member) -> Self {
        match member {
            Member::Interval { lo, hi } => MemberDoc::Interval { lo: *lo, hi: *hi },
            Member::Box { lo, hi } => MemberDoc::Box {
                lo: lo.clone(),
                hi: hi.clone(),
            },
            Member::Ball { center, radius } => MemberDoc::Ball {
                center: center.clone(),
                radius: *radius,
            },
            Member::Points(points) => MemberDoc::Points {
                points: points.clone(),
            },
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoverDoc {
    pub c: f64,
    pub s: f64,
    pub space: SpaceDoc,
    pub members: Vec<MemberDoc>,
}

impl CoverDoc {
    pub fn from_cover(cover: &Cover) -> Self {
        Self {
            c: cover.c,
            s: cover.scale,
            space: SpaceDoc::from_space(&cover.space),
            members: cover.members.iter().map(MemberDoc::from_member).collect(),
        }
    }
}
