//! Face lattice of a polyhedral unit ball.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{format_q, neg_vec, q, sub_vec, Field, Q};
use crate::linalg::rank;
use crate::norm::Polyhedral;

/// Largest ambient dimension accepted by [`face_lattice`].
pub const MAX_FACE_DIM: usize = 4;

#[derive(Clone, Debug, Serialize)]
pub struct Face {
    pub id: usize,
    /// Affine dimension.
    pub dim: usize,
    /// Dual indices equal to 1 on the whole face.
    pub active: Vec<usize>,
    /// Centroid of the face's vertices (a relative-interior point).
    #[serde(serialize_with = "ser_q_vec")]
    pub representative: Vec<Q>,
    pub vertex_ids: Vec<usize>,
    /// Proper subfaces.
    pub boundary_face_ids: Vec<usize>,
    pub antipode: usize,
}

/// A face together with its antipode: one vertex of the exact quotient graph.
#[derive(Clone, Debug, Serialize)]
pub struct FaceClass {
    pub id: usize,
    /// Face whose representative stands for the class.
    pub face: usize,
    pub antipode: usize,
    pub dim: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct FaceLattice {
    pub dim: usize,
    pub faces: Vec<Face>,
    pub classes: Vec<FaceClass>,
    #[serde(skip)]
    by_active: HashMap<Vec<usize>, usize>,
    #[serde(skip)]
    class_of_face: Vec<usize>,
}

fn ser_q_vec<S: serde::Serializer>(v: &[Q], s: S) -> std::result::Result<S::Ok, S::Error> {
    serde::Serialize::serialize(&v.iter().map(format_q).collect::<Vec<_>>(), s)
}

/// All boundary faces of the unit ball, with representatives and antipodes.
pub fn face_lattice(p: &Polyhedral) -> Result<FaceLattice> {
    if p.dim > MAX_FACE_DIM {
        return Err(Error::Unsupported(format!("face lattice above dimension {MAX_FACE_DIM}")));
    }
    let nv = p.vertices.len();
    let facets: Vec<Vec<usize>> = (0..p.duals.len())
        .map(|k| (0..nv).filter(|&v| p.vertex_active[v].contains(&k)).collect())
        .collect();
    let mut all: BTreeSet<Vec<usize>> = facets.iter().cloned().collect();
    let mut frontier: Vec<Vec<usize>> = all.iter().cloned().collect();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for a in &frontier {
            for f in &facets {
                let i: Vec<usize> = a.iter().copied().filter(|v| f.contains(v)).collect();
                if !i.is_empty() && all.insert(i.clone()) {
                    next.push(i);
                }
            }
        }
        frontier = next;
    }
    let mut raw: Vec<(usize, Vec<usize>)> = all
        .into_iter()
        .map(|vs| {
            let base = &p.vertices[vs[0]];
            let diffs: Vec<Vec<Q>> = vs.iter().skip(1).map(|&v| sub_vec(&p.vertices[v], base)).collect();
            (rank(&diffs, p.dim), vs)
        })
        .collect();
    raw.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| a.1.cmp(&b.1)));
    let index: HashMap<Vec<usize>, usize> = raw.iter().enumerate().map(|(i, (_, vs))| (vs.clone(), i)).collect();
    let vertex_index: HashMap<Vec<Q>, usize> = p.vertices.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();
    let mut faces = Vec::with_capacity(raw.len());
    for (id, (dim, vs)) in raw.iter().enumerate() {
        let active: Vec<usize> =
            (0..p.duals.len()).filter(|k| vs.iter().all(|&v| p.vertex_active[v].contains(k))).collect();
        let count = Q::from_i64(vs.len() as i64);
        let mut rep = vec![q(0); p.dim];
        for &v in vs {
            for (r, c) in rep.iter_mut().zip(&p.vertices[v]) {
                *r = r.clone() + c.clone();
            }
        }
        let rep: Vec<Q> = rep.into_iter().map(|c| c / count.clone()).collect();
        let mut anti: Vec<usize> = vs.iter().map(|&v| vertex_index[&neg_vec(&p.vertices[v])]).collect();
        anti.sort();
        let boundary_face_ids = raw
            .iter()
            .enumerate()
            .filter(|(_, (_, other))| other.len() < vs.len() && other.iter().all(|v| vs.contains(v)))
            .map(|(j, _)| j)
            .collect();
        faces.push(Face {
            id,
            dim: *dim,
            active,
            representative: rep,
            vertex_ids: vs.clone(),
            boundary_face_ids,
            antipode: index[&anti],
        });
    }
    let mut classes = Vec::new();
    let mut class_of_face = vec![usize::MAX; faces.len()];
    for f in &faces {
        if class_of_face[f.id] == usize::MAX {
            let cid = classes.len();
            class_of_face[f.id] = cid;
            class_of_face[f.antipode] = cid;
            classes.push(FaceClass { id: cid, face: f.id, antipode: f.antipode, dim: f.dim });
        }
    }
    let by_active = faces.iter().map(|f| (f.active.clone(), f.id)).collect();
    Ok(FaceLattice { dim: p.dim, faces, classes, by_active, class_of_face })
}

impl FaceLattice {
    /// Face whose relative interior contains the ray through `x ≠ 0`.
    pub fn face_of_point(&self, p: &Polyhedral, x: &[Q]) -> Option<usize> {
        self.by_active.get(&p.active(x)).copied()
    }

    pub fn class_of_face(&self, face: usize) -> usize {
        self.class_of_face[face]
    }

    pub fn class_of_point(&self, p: &Polyhedral, x: &[Q]) -> Option<usize> {
        self.face_of_point(p, x).map(|f| self.class_of_face[f])
    }

    pub fn class_representative(&self, class: usize) -> &[Q] {
        &self.faces[self.classes[class].face].representative
    }

    pub fn class_active(&self, class: usize) -> &[usize] {
        &self.faces[self.classes[class].face].active
    }

    /// Faces of dimension `dim − 1`.
    pub fn facets(&self) -> Vec<usize> {
        self.faces.iter().filter(|f| f.dim + 1 == self.dim).map(|f| f.id).collect()
    }

    /// Counts of faces by affine dimension, index = dimension.
    pub fn f_vector(&self) -> Vec<usize> {
        let mut out = vec![0; self.dim];
        for f in &self.faces {
            out[f.dim] += 1;
        }
        out
    }
}
