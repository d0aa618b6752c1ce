use std::path::PathBuf;

use serde::Serialize;
use tait_core::triangulation::{generate, parse_rotation_system, Family, GenerateError, Triangulation};

use crate::{Failure, EXIT_INVALID_INPUT, EXIT_USAGE};

#[derive(Debug, Clone, clap::Args)]
pub struct GraphArgs {
    /// Rotation-system file to read
    #[arg(long, conflicts_with = "family")]
    pub graph: Option<PathBuf>,
    /// Generated family: triangle, k4, bipyramid, apollonian, octahedron, icosahedron
    #[arg(long)]
    pub family: Option<String>,
    /// Cycle length for bipyramid
    #[arg(long)]
    pub size: Option<usize>,
    /// Stacking depth for apollonian
    #[arg(long)]
    pub depth: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphDescriptor {
    pub source: String,
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
}

impl GraphDescriptor {
    pub fn of(source: String, g: &Triangulation) -> Self {
        GraphDescriptor {
            source,
            vertices: g.vertex_count(),
            edges: g.edge_count(),
            faces: g.face_count(),
        }
    }
}

pub fn parse_family(name: &str, size: Option<usize>, depth: Option<u32>) -> Result<Family, Failure> {
    let need = |what: &str| Failure::new(EXIT_USAGE, format!("family {name} needs --{what}"));
    Ok(match name {
        "triangle" => Family::Triangle,
        "k4" => Family::K4,
        "octahedron" => Family::Octahedron,
        "icosahedron" => Family::Icosahedron,
        "bipyramid" => Family::Bipyramid(size.ok_or_else(|| need("size"))?),
        "apollonian" => Family::Apollonian(depth.or(size.map(|s| s as u32)).ok_or_else(|| need("depth"))?),
        other => return Err(Failure::new(EXIT_USAGE, format!("unknown family {other:?}"))),
    })
}

pub fn build(family: Family) -> Result<Triangulation, Failure> {
    generate(family).map_err(|e| match e {
        GenerateError::ParameterOutOfRange { .. } => Failure::new(EXIT_USAGE, e.to_string()),
        GenerateError::Invalid(_) => Failure::new(EXIT_INVALID_INPUT, e.to_string()),
    })
}

impl GraphArgs {
    pub fn is_set(&self) -> bool {
        self.graph.is_some() || self.family.is_some()
    }

    pub fn load(&self) -> Result<(Triangulation, GraphDescriptor), Failure> {
        if let Some(path) = &self.graph {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure::new(EXIT_INVALID_INPUT, format!("{}: {e}", path.display())))?;
            let g = parse_rotation_system(&text)
                .map_err(|e| Failure::new(EXIT_INVALID_INPUT, format!("{}: {e}", path.display())))?;
            let desc = GraphDescriptor::of(path.display().to_string(), &g);
            return Ok((g, desc));
        }
        let Some(name) = &self.family else {
            return Err(Failure::new(EXIT_USAGE, "one of --graph or --family is required"));
        };
        let family = parse_family(name, self.size, self.depth)?;
        let g = build(family)?;
        let desc = GraphDescriptor::of(family.name(), &g);
        Ok((g, desc))
    }
}
