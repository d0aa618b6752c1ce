//! Maximal planar graphs carried with their combinatorial embedding.
//!
//! A [`Triangulation`] is built from a rotation system (the cyclic order of
//! neighbours around every vertex). Faces are recovered by face tracing: the
//! dart `u -> v` is followed by `v -> w`, where `w` is the successor of `u` in
//! the rotation at `v`. Every traced face must be a triangle and the Euler
//! counts `|E| = 3|V| - 6`, `|F| = 2|V| - 4` must hold, which pins the
//! embedding to the sphere.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use thiserror::Error;

/// Largest vertex count the generators will produce unless told otherwise.
pub const MAX_GENERATED_VERTICES: usize = 2048;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TriangulationError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("a triangulation needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("vertex {vertex} lists neighbour {neighbour}, which is out of range")]
    VertexOutOfRange { vertex: usize, neighbour: usize },
    #[error("loop at vertex {0}")]
    Loop(usize),
    #[error("parallel edge {0}-{1}: neighbour listed twice")]
    ParallelEdge(usize, usize),
    #[error("asymmetric adjacency: {0} lists {1} but {1} does not list {0}")]
    AsymmetricAdjacency(usize, usize),
    #[error("graph is disconnected: vertex {0} is unreachable from vertex 0")]
    Disconnected(usize),
    #[error("non-triangular face with boundary {0:?}")]
    NonTriangularFace(Vec<usize>),
    #[error("edge {0}-{1} borders the same face on both sides")]
    EdgeOnSingleFace(usize, usize),
    #[error("Euler mismatch: n={vertices}, |E|={edges}, |F|={faces} (want |E|=3n-6, |F|=2n-4)")]
    EulerMismatch {
        vertices: usize,
        edges: usize,
        faces: usize,
    },
    #[error("oriented faces around vertex {0} do not close into a single disk")]
    NotADisk(usize),
    #[error("dart {0}->{1} is used by more than one oriented face")]
    InconsistentOrientation(usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenerateError {
    #[error("{family}: parameter {value} out of range ({reason})")]
    ParameterOutOfRange {
        family: &'static str,
        value: u64,
        reason: String,
    },
    #[error("generated triangulation failed validation: {0}")]
    Invalid(#[from] TriangulationError),
}

/// An undirected edge `u < v` with the faces on either side.
///
/// `faces[0]` is the face traced along the dart `u -> v`, `faces[1]` the one
/// along `v -> u`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub faces: [usize; 2],
}

/// A triangular face. `vertices` is the traced cyclic order rotated to start
/// at the smallest vertex; `edges[i]` joins `vertices[i]` and `vertices[i + 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Face {
    pub vertices: [usize; 3],
    pub edges: [usize; 3],
}

/// Anything the Laplacian builder can read: a vertex count plus a list of
/// `(u, v, edge id)` triples, the edge id indexing into the weight vector.
pub trait WeightedGraph {
    fn vertex_count(&self) -> usize;
    fn weighted_edges(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_;
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triangulation {
    rotation: Vec<Vec<usize>>,
    edges: Vec<Edge>,
    faces: Vec<Face>,
    edge_ids: BTreeMap<(usize, usize), usize>,
}

impl Triangulation {
    /// Builds and validates a triangulation from per-vertex cyclic neighbour lists.
    pub fn from_rotation(rotation: Vec<Vec<usize>>) -> Result<Self, TriangulationError> {
        let n = rotation.len();
        if n < 3 {
            return Err(TriangulationError::TooFewVertices(n));
        }
        // position of each neighbour in the rotation at v
        let mut position: Vec<BTreeMap<usize, usize>> = Vec::with_capacity(n);
        for (v, nbrs) in rotation.iter().enumerate() {
            let mut pos = BTreeMap::new();
            for (i, &u) in nbrs.iter().enumerate() {
                if u >= n {
                    return Err(TriangulationError::VertexOutOfRange {
                        vertex: v,
                        neighbour: u,
                    });
                }
                if u == v {
                    return Err(TriangulationError::Loop(v));
                }
                if pos.insert(u, i).is_some() {
                    return Err(TriangulationError::ParallelEdge(v.min(u), v.max(u)));
                }
            }
            position.push(pos);
        }
        for (v, nbrs) in rotation.iter().enumerate() {
            for &u in nbrs {
                if !position[u].contains_key(&v) {
                    return Err(TriangulationError::AsymmetricAdjacency(v, u));
                }
            }
        }

        let mut edge_ids = BTreeMap::new();
        for (v, nbrs) in rotation.iter().enumerate() {
            for &u in nbrs {
                if v < u {
                    edge_ids.insert((v, u), 0);
                }
            }
        }
        for (id, slot) in edge_ids.values_mut().enumerate() {
            *slot = id;
        }

        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            for &u in &rotation[v] {
                if !seen[u] {
                    seen[u] = true;
                    queue.push_back(u);
                }
            }
        }
        if let Some(v) = seen.iter().position(|s| !s) {
            return Err(TriangulationError::Disconnected(v));
        }

        // face tracing over darts
        let mut dart_done: Vec<Vec<bool>> = rotation.iter().map(|r| vec![false; r.len()]).collect();
        let mut traced: Vec<Vec<usize>> = Vec::new();
        for start in 0..n {
            for i in 0..rotation[start].len() {
                if dart_done[start][i] {
                    continue;
                }
                let mut boundary = Vec::new();
                let (mut a, mut ai) = (start, i);
                while !dart_done[a][ai] {
                    dart_done[a][ai] = true;
                    boundary.push(a);
                    let b = rotation[a][ai];
                    let back = position[b][&a];
                    let next = (back + 1) % rotation[b].len();
                    a = b;
                    ai = next;
                }
                traced.push(boundary);
            }
        }
        for face in &traced {
            if face.len() != 3 || face[0] == face[1] || face[1] == face[2] || face[0] == face[2] {
                return Err(TriangulationError::NonTriangularFace(face.clone()));
            }
        }
        let (ne, nf) = (edge_ids.len(), traced.len());
        if ne + 6 != 3 * n || nf + 4 != 2 * n {
            return Err(TriangulationError::EulerMismatch {
                vertices: n,
                edges: ne,
                faces: nf,
            });
        }

        let mut cycles: Vec<[usize; 3]> = traced
            .into_iter()
            .map(|f| {
                let m = (0..3).min_by_key(|&i| f[i]).unwrap();
                [f[m], f[(m + 1) % 3], f[(m + 2) % 3]]
            })
            .collect();
        cycles.sort_by_key(|c| {
            let mut key = *c;
            key.sort_unstable();
            (key, *c)
        });

        let mut edges: Vec<Edge> = edge_ids
            .keys()
            .map(|&(u, v)| Edge {
                u,
                v,
                faces: [usize::MAX; 2],
            })
            .collect();
        let mut faces = Vec::with_capacity(nf);
        for (fid, cyc) in cycles.iter().enumerate() {
            let mut fe = [0; 3];
            for i in 0..3 {
                let (a, b) = (cyc[i], cyc[(i + 1) % 3]);
                let id = edge_ids[&(a.min(b), a.max(b))];
                fe[i] = id;
                let side = usize::from(a > b);
                edges[id].faces[side] = fid;
            }
            faces.push(Face {
                vertices: *cyc,
                edges: fe,
            });
        }
        for e in &edges {
            if e.faces[0] == e.faces[1] {
                return Err(TriangulationError::EdgeOnSingleFace(e.u, e.v));
            }
        }

        Ok(Triangulation {
            rotation,
            edges,
            faces,
            edge_ids,
        })
    }

    /// Builds a triangulation from consistently oriented triangles: every dart
    /// `a -> b` must occur in exactly one face.
    pub fn from_oriented_faces(n: usize, faces: &[[usize; 3]]) -> Result<Self, TriangulationError> {
        // successor[v][u] = w  means  w follows u in the rotation at v
        let mut successor: Vec<BTreeMap<usize, usize>> = vec![BTreeMap::new(); n];
        for f in faces {
            for i in 0..3 {
                let (a, b, c) = (f[i], f[(i + 1) % 3], f[(i + 2) % 3]);
                if a >= n || b >= n || c >= n {
                    return Err(TriangulationError::VertexOutOfRange {
                        vertex: a,
                        neighbour: a.max(b).max(c),
                    });
                }
                if successor[b].insert(a, c).is_some() {
                    return Err(TriangulationError::InconsistentOrientation(a, b));
                }
            }
        }
        let mut rotation = Vec::with_capacity(n);
        for (v, succ) in successor.iter().enumerate() {
            let Some((&first, _)) = succ.iter().next() else {
                return Err(TriangulationError::Disconnected(v));
            };
            let mut cycle = vec![first];
            let mut cur = first;
            loop {
                let Some(&next) = succ.get(&cur) else {
                    return Err(TriangulationError::NotADisk(v));
                };
                if next == first {
                    break;
                }
                if cycle.len() > succ.len() {
                    return Err(TriangulationError::NotADisk(v));
                }
                cycle.push(next);
                cur = next;
            }
            if cycle.len() != succ.len() {
                return Err(TriangulationError::NotADisk(v));
            }
            rotation.push(cycle);
        }
        Self::from_rotation(rotation)
    }

    pub fn vertex_count(&self) -> usize {
        self.rotation.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn rotation(&self, v: usize) -> &[usize] {
        &self.rotation[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rotation[v].len()
    }

    pub fn edge_id(&self, u: usize, v: usize) -> Option<usize> {
        self.edge_ids.get(&(u.min(v), u.max(v))).copied()
    }

    /// The two faces `F'_e`, `F''_e` bordering edge `e`.
    pub fn edge_faces(&self, e: usize) -> (usize, usize) {
        let [a, b] = self.edges[e].faces;
        (a, b)
    }

    /// Faces incident to each vertex, by id.
    pub fn vertex_faces(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.vertex_count()];
        for (fid, f) in self.faces.iter().enumerate() {
            for &v in &f.vertices {
                out[v].push(fid);
            }
        }
        out
    }

    /// Merges every vertex of `w` into one. Loops are dropped, parallel edges
    /// keep their original edge ids.
    pub fn contract(&self, w: &[usize]) -> ContractedMultigraph {
        let n = self.vertex_count();
        let mut in_w = vec![false; n];
        for &v in w {
            assert!(v < n, "vertex {v} out of range for contraction");
            in_w[v] = true;
        }
        let merged = in_w.iter().any(|&b| b);
        let mut vertex_map = vec![0; n];
        let mut next = 0;
        for v in 0..n {
            if !in_w[v] {
                vertex_map[v] = next;
                next += 1;
            }
        }
        let merged_vertex = merged.then_some(next);
        if let Some(m) = merged_vertex {
            for v in 0..n {
                if in_w[v] {
                    vertex_map[v] = m;
                }
            }
        }
        let vertex_count = next + usize::from(merged);
        let edges = self
            .edges
            .iter()
            .enumerate()
            .filter_map(|(id, e)| {
                let (a, b) = (vertex_map[e.u], vertex_map[e.v]);
                (a != b).then_some((a, b, id))
            })
            .collect();
        ContractedMultigraph {
            vertex_count,
            vertex_map,
            merged_vertex,
            edges,
        }
    }

    /// Serializes to the rotation-system text format.
    pub fn to_rotation_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Triangulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.vertex_count())?;
        for (v, nbrs) in self.rotation.iter().enumerate() {
            write!(f, "{v}:")?;
            for u in nbrs {
                write!(f, " {u}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

impl WeightedGraph for Triangulation {
    fn vertex_count(&self) -> usize {
        self.rotation.len()
    }

    fn weighted_edges(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.edges.iter().enumerate().map(|(id, e)| (e.u, e.v, id))
    }
}

/// Parses the rotation-system text format.
///
/// ```text
/// 4
/// 0: 1 3 2
/// 1: 2 3 0
/// 2: 0 3 1
/// 3: 0 1 2
/// ```
///
/// Blank lines and lines starting with `#` are ignored.
pub fn parse_rotation_system(text: &str) -> Result<Triangulation, TriangulationError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let syntax = |line, message: String| TriangulationError::Syntax { line, message };

    let (line, header) = lines
        .next()
        .ok_or_else(|| syntax(1, "empty input, expected vertex count".into()))?;
    let n: usize = header
        .parse()
        .map_err(|_| syntax(line, format!("expected vertex count, got {header:?}")))?;

    let mut rotation: Vec<Option<Vec<usize>>> = vec![None; n];
    for (line, text) in lines {
        let (id, rest) = text
            .split_once(':')
            .ok_or_else(|| syntax(line, "expected `vertex: neighbours`".into()))?;
        let v: usize = id
            .trim()
            .parse()
            .map_err(|_| syntax(line, format!("bad vertex id {:?}", id.trim())))?;
        if v >= n {
            return Err(syntax(line, format!("vertex {v} out of range for n={n}")));
        }
        if rotation[v].is_some() {
            return Err(syntax(line, format!("vertex {v} listed twice")));
        }
        let nbrs = rest
            .split_whitespace()
            .map(|tok| {
                tok.parse::<usize>()
                    .map_err(|_| syntax(line, format!("bad neighbour {tok:?}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        rotation[v] = Some(nbrs);
    }
    let rotation = rotation
        .into_iter()
        .enumerate()
        .map(|(v, r)| r.ok_or_else(|| syntax(0, format!("vertex {v} has no rotation line"))))
        .collect::<Result<Vec<_>, _>>()?;
    Triangulation::from_rotation(rotation)
}

/// `G/W`: the pseudograph left after merging a vertex set, loops removed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContractedMultigraph {
    vertex_count: usize,
    vertex_map: Vec<usize>,
    merged_vertex: Option<usize>,
    edges: Vec<(usize, usize, usize)>,
}

impl ContractedMultigraph {
    /// Image of an original vertex.
    pub fn image(&self, v: usize) -> usize {
        self.vertex_map[v]
    }

    pub fn merged_vertex(&self) -> Option<usize> {
        self.merged_vertex
    }

    /// `(u, v, original edge id)` for every surviving edge.
    pub fn edges(&self) -> &[(usize, usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }
}

impl WeightedGraph for ContractedMultigraph {
    fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    fn weighted_edges(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.edges.iter().copied()
    }
}

/// Generator families for the test corpus.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Triangle,
    K4,
    /// Cycle `C_k` plus two apexes.
    Bipyramid(usize),
    /// `K4` with a degree-3 vertex stacked into every face, `depth` times.
    Apollonian(u32),
    Octahedron,
    Icosahedron,
}

impl Family {
    /// Vertex count of the generated graph, `None` on overflow.
    pub fn vertex_count(&self) -> Option<usize> {
        match *self {
            Family::Triangle => Some(3),
            Family::K4 => Some(4),
            Family::Bipyramid(k) => k.checked_add(2),
            Family::Apollonian(d) => 3usize.checked_pow(d)?.checked_mul(2)?.checked_add(2),
            Family::Octahedron => Some(6),
            Family::Icosahedron => Some(12),
        }
    }

    pub fn name(&self) -> String {
        match self {
            Family::Triangle => "triangle".into(),
            Family::K4 => "k4".into(),
            Family::Bipyramid(k) => format!("bipyramid({k})"),
            Family::Apollonian(d) => format!("apollonian({d})"),
            Family::Octahedron => "octahedron".into(),
            Family::Icosahedron => "icosahedron".into(),
        }
    }
}

pub fn generate(family: Family) -> Result<Triangulation, GenerateError> {
    generate_with_limit(family, MAX_GENERATED_VERTICES)
}

pub fn generate_with_limit(family: Family, max_vertices: usize) -> Result<Triangulation, GenerateError> {
    let out_of_range = |family: &'static str, value: u64, reason: String| GenerateError::ParameterOutOfRange {
        family,
        value,
        reason,
    };
    if let Family::Bipyramid(k) = family {
        if k < 3 {
            return Err(out_of_range("bipyramid", k as u64, "cycle length must be at least 3".into()));
        }
    }
    match family.vertex_count() {
        Some(n) if n <= max_vertices => {}
        _ => {
            let (name, value) = match family {
                Family::Bipyramid(k) => ("bipyramid", k as u64),
                Family::Apollonian(d) => ("apollonian", d as u64),
                _ => ("fixed", 0),
            };
            return Err(out_of_range(name, value, format!("more than {max_vertices} vertices")));
        }
    }

    let (n, faces): (usize, Vec<[usize; 3]>) = match family {
        Family::Triangle => (3, vec![[0, 1, 2], [0, 2, 1]]),
        Family::K4 => (4, k4_faces()),
        Family::Bipyramid(k) => bipyramid_faces(k),
        Family::Octahedron => bipyramid_faces(4),
        Family::Apollonian(depth) => {
            let mut faces = k4_faces();
            let mut n = 4;
            for _ in 0..depth {
                let mut next = Vec::with_capacity(faces.len() * 3);
                for [a, b, c] in faces {
                    next.extend([[a, b, n], [b, c, n], [c, a, n]]);
                    n += 1;
                }
                faces = next;
            }
            (n, faces)
        }
        Family::Icosahedron => {
            // apex 0, upper ring 1..=5, lower ring 6..=10, apex 11
            let up = |i: usize| 1 + i % 5;
            let lo = |i: usize| 6 + i % 5;
            let mut faces = Vec::with_capacity(20);
            for i in 0..5 {
                faces.push([0, up(i), up(i + 1)]);
                faces.push([up(i), lo(i), up(i + 1)]);
                faces.push([up(i + 1), lo(i), lo(i + 1)]);
                faces.push([11, lo(i + 1), lo(i)]);
            }
            (12, faces)
        }
    };
    Ok(Triangulation::from_oriented_faces(n, &faces)?)
}

fn k4_faces() -> Vec<[usize; 3]> {
    vec![[0, 1, 3], [1, 2, 3], [2, 0, 3], [0, 2, 1]]
}

fn bipyramid_faces(k: usize) -> (usize, Vec<[usize; 3]>) {
    let (top, bottom) = (k, k + 1);
    let mut faces = Vec::with_capacity(2 * k);
    for i in 0..k {
        let j = (i + 1) % k;
        faces.push([i, j, top]);
        faces.push([j, i, bottom]);
    }
    (k + 2, faces)
}
