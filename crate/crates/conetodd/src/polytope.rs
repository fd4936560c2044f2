//! Lattice polytopes with exact face enumeration.
//!
//! A polytope is stored through the cone over its vertex set at height one:
//! faces, facet inequalities and vertex reduction all come from the cone
//! machinery in [`crate::cones`]. Polytopes may be lower-dimensional in
//! their ambient space.

use num_traits::{One, Signed};

use crate::cones::Cone;
use crate::ratlin::{ivec_to_qvec, qvec_sub, IVec, Int, QVec, Rat};
use crate::{Error, Result};

/// A facet inequality `<normal, x> + offset >= 0`, tight on the facet.
#[derive(Clone, Debug)]
pub struct FacetIneq {
    pub normal: IVec,
    pub offset: Int,
}

/// Convex hull of finitely many lattice points.
#[derive(Clone, Debug)]
pub struct LatticePolytope {
    dim: usize,
    vertices: Vec<IVec>,
    /// Cone over the vertices at height one; its face lattice mirrors the
    /// polytope's (nonempty faces shifted up by one dimension).
    cone: Cone,
    /// Vertex index sets of all nonempty faces, sorted by (cardinality,
    /// indices). The last entry is the polytope itself.
    faces: Vec<Vec<usize>>,
}

impl LatticePolytope {
    pub fn from_points(dim: usize, points: &[IVec]) -> Result<LatticePolytope> {
        if points.is_empty() {
            return Err(Error::InvalidPolytope("no points given".into()));
        }
        let mut homog: Vec<IVec> = Vec::new();
        for p in points {
            if p.len() != dim {
                return Err(Error::InvalidPolytope(format!(
                    "point has {} coordinates, expected {dim}",
                    p.len()
                )));
            }
            let mut h = p.clone();
            h.push(Int::one());
            homog.push(h);
        }
        let cone = Cone::from_int_rays(dim + 1, &homog)?;
        // Each extreme ray is some (v, 1), already primitive.
        let mut vertices: Vec<IVec> = Vec::new();
        for r in cone.rays() {
            debug_assert!(r[dim].is_one());
            vertices.push(r[..dim].to_vec());
        }
        let faces: Vec<Vec<usize>> = cone
            .face_index_sets()?
            .iter()
            .filter(|s| !s.is_empty())
            .cloned()
            .collect();
        Ok(LatticePolytope {
            dim,
            vertices,
            cone,
            faces,
        })
    }

    /// Ambient dimension.
    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    /// Dimension of the affine span.
    pub fn dim(&self) -> usize {
        self.cone.lin_dim() - 1
    }

    pub fn vertices(&self) -> &[IVec] {
        &self.vertices
    }

    /// The cone over the polytope placed at height one; its simplicial
    /// pieces at height one triangulate the polytope.
    pub fn homogenization(&self) -> &Cone {
        &self.cone
    }

    /// Facet inequalities of the polytope within its affine span.
    pub fn facet_ineqs(&self) -> Vec<FacetIneq> {
        self.cone
            .facets()
            .iter()
            .map(|f| FacetIneq {
                normal: f.normal[..self.dim].to_vec(),
                offset: f.normal[self.dim].clone(),
            })
            .collect()
    }

    /// Vertex index sets of all nonempty faces, sorted by (cardinality,
    /// indices); includes the vertices and the polytope itself.
    pub fn face_sets(&self) -> &[Vec<usize>] {
        &self.faces
    }

    pub fn face_vertices(&self, face: &[usize]) -> Vec<IVec> {
        face.iter().map(|&i| self.vertices[i].clone()).collect()
    }

    /// Dimension of a face given by vertex indices.
    pub fn face_dim(&self, face: &[usize]) -> usize {
        if face.len() <= 1 {
            return 0;
        }
        let base = ivec_to_qvec(&self.vertices[face[0]]);
        let dirs: Vec<QVec> = face[1..]
            .iter()
            .map(|&i| qvec_sub(&ivec_to_qvec(&self.vertices[i]), &base))
            .collect();
        crate::ratlin::QMat::from_rows(&dirs).rank()
    }

    /// The lexicographically smallest vertex of a face.
    pub fn base_vertex(&self, face: &[usize]) -> &IVec {
        face.iter()
            .map(|&i| &self.vertices[i])
            .min()
            .expect("faces are nonempty")
    }

    /// Exact membership test for rational points.
    pub fn contains(&self, x: &[Rat]) -> bool {
        let mut h: QVec = x.to_vec();
        h.push(Rat::one());
        self.cone.contains(&h)
    }

    pub fn contains_int(&self, x: &[Int]) -> bool {
        self.contains(&ivec_to_qvec(x))
    }

    /// Smallest and largest coordinate over all vertices, per axis.
    pub fn bounding_box(&self) -> (IVec, IVec) {
        let mut lo = self.vertices[0].clone();
        let mut hi = self.vertices[0].clone();
        for v in &self.vertices[1..] {
            for i in 0..self.dim {
                if v[i] < lo[i] {
                    lo[i] = v[i].clone();
                }
                if v[i] > hi[i] {
                    hi[i] = v[i].clone();
                }
            }
        }
        (lo, hi)
    }

    /// All lattice points of the polytope, by scanning the bounding box.
    pub fn lattice_points(&self) -> Vec<IVec> {
        let (lo, hi) = self.bounding_box();
        let mut out = Vec::new();
        let mut cursor = lo.clone();
        'scan: loop {
            if self.contains_int(&cursor) {
                out.push(cursor.clone());
            }
            for i in 0..self.dim {
                cursor[i] += 1;
                if cursor[i] <= hi[i] {
                    continue 'scan;
                }
                cursor[i] = lo[i].clone();
            }
            break;
        }
        out
    }

    /// The dilate `k * P`.
    pub fn dilate(&self, k: &Int) -> Result<LatticePolytope> {
        if k.is_negative() {
            return Err(Error::InvalidPolytope("negative dilation factor".into()));
        }
        let scaled: Vec<IVec> = self
            .vertices
            .iter()
            .map(|v| v.iter().map(|c| c * k).collect())
            .collect();
        LatticePolytope::from_points(self.dim, &scaled)
    }

    /// Directions from the lex-smallest vertex of the face to all vertices
    /// of the polytope; their projection mod the face span generates the
    /// transverse cone at the face.
    pub fn feasible_directions(&self, face: &[usize]) -> (IVec, Vec<IVec>) {
        let base = self.base_vertex(face).clone();
        let dirs: Vec<IVec> = self
            .vertices
            .iter()
            .map(|v| v.iter().zip(&base).map(|(a, b)| a - b).collect())
            .collect();
        (base, dirs)
    }

    /// Directions spanning the affine hull of a face from its lex-smallest
    /// vertex.
    pub fn face_span_dirs(&self, face: &[usize]) -> Vec<IVec> {
        let base = self.base_vertex(face).clone();
        face.iter()
            .map(|&i| {
                self.vertices[i]
                    .iter()
                    .zip(&base)
                    .map(|(a, b)| a - b)
                    .collect()
            })
            .collect()
    }
}
