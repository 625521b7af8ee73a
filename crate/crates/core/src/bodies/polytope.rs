use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::hull::{bounding_scale, simplicial_hull, RawHull};
use crate::error::{Error, Result};
use crate::linalg::{self, dot, hyperplane, orthonormalize, simplex_volume, sub};
use crate::scalar::{to_f64_vec, Scalar};

pub const MAX_DIM: usize = 8;

/// Face numbers `(f_0, ..., f_{n-1})`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FVector(pub Vec<usize>);

impl FVector {
    pub fn euler_characteristic(&self) -> i64 {
        self.0.iter().enumerate().map(|(k, &f)| if k % 2 == 0 { f as i64 } else { -(f as i64) }).sum()
    }

    /// `1 + (-1)^(n-1)` for the boundary of an `n`-polytope.
    pub fn expected_euler(&self) -> i64 {
        let n = self.0.len();
        if n % 2 == 1 {
            2
        } else {
            0
        }
    }

    pub fn is_unimodal(&self) -> bool {
        let f = &self.0;
        let peak = (0..f.len()).max_by_key(|&i| (f[i], std::cmp::Reverse(i))).unwrap_or(0);
        f[..=peak].windows(2).all(|w| w[0] <= w[1]) && f[peak..].windows(2).all(|w| w[0] >= w[1])
    }
}

#[derive(Debug, Clone)]
pub struct Facet<T> {
    /// Outward unit normal.
    pub normal: Vec<T>,
    pub offset: T,
    /// Sorted indices into the polytope's vertex list.
    pub vertices: Vec<usize>,
    /// Simplicial pieces triangulating the facet.
    pub(crate) pieces: Vec<Vec<usize>>,
}

/// Full-dimensional convex polytope in `R^n`, `2 <= n <= 8`, carrying both its vertex and its
/// facet description. Vertices are kept in lexicographic order.
#[derive(Debug, Clone)]
pub struct Polytope<T> {
    dim: usize,
    vertices: Vec<Vec<T>>,
    facets: Vec<Facet<T>>,
    face_counts: FVector,
    interior_point: Vec<T>,
    simplicial: bool,
    /// Largest of the coordinate magnitudes and the diameter, for tolerances.
    scale: T,
}

/// Serialized form: `{"n", "vertices", "facets": [{"normal", "offset"}]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolytopeRecord {
    pub n: usize,
    pub vertices: Vec<Vec<f64>>,
    pub facets: Vec<FacetRecord>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FacetRecord {
    pub normal: Vec<f64>,
    pub offset: f64,
}

/// Convex hull of a finite point set in `R^n`.
pub fn convex_hull<T: Scalar>(points: &[Vec<T>]) -> Result<Polytope<T>> {
    let n = points.first().map_or(0, |p| p.len());
    if !(2..=MAX_DIM).contains(&n) {
        return Err(Error::UnsupportedDimension { dim: n, what: "convex hull" });
    }
    let mut points: Vec<Vec<T>> = points.to_vec();
    points.sort_by(|a, b| lex_cmp(a, b));
    points.dedup();
    let points = points.as_slice();
    let orig: Vec<Vec<f64>> = points.iter().map(|p| to_f64_vec(p)).collect();
    let raw = simplicial_hull(&orig)?;
    let tol = T::coplanar_tol().as_f64() * bounding_scale(&orig);
    let merged = merge_coplanar(&raw, &orig, tol);
    let extreme = extreme_vertices(&merged, n);
    let used: HashSet<usize> = merged.iter().flat_map(|g| g.vertices.iter().copied()).collect();
    if extreme.len() < used.len() {
        let subset: Vec<Vec<T>> = extreme.iter().map(|&i| points[i].clone()).collect();
        let orig_sub: Vec<Vec<f64>> = extreme.iter().map(|&i| orig[i].clone()).collect();
        let raw = simplicial_hull(&orig_sub)?;
        let merged = merge_coplanar(&raw, &orig_sub, tol);
        return Ok(assemble(&subset, &merged, n));
    }
    Ok(assemble(points, &merged, n))
}

struct Group {
    members: Vec<usize>,
    normal: Vec<f64>,
    vertices: Vec<usize>,
    pieces: Vec<Vec<usize>>,
}

fn oriented_plane(verts: &[usize], orig: &[Vec<f64>], outward: &[f64]) -> (Vec<f64>, f64) {
    let refs: Vec<&[f64]> = verts.iter().map(|&i| orig[i].as_slice()).collect();
    let normal = match hyperplane(&refs) {
        Some((mut nrm, _)) => {
            if dot(&nrm, outward) < 0.0 {
                nrm.iter_mut().for_each(|x| *x = -*x);
            }
            nrm
        }
        None => outward.to_vec(),
    };
    let offset = verts.iter().map(|&i| dot(&normal, &orig[i])).fold(f64::NEG_INFINITY, f64::max);
    (normal, offset)
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn merge_coplanar(raw: &RawHull, orig: &[Vec<f64>], tol: f64) -> Vec<Group> {
    // pieces whose original points are affinely dependent have no area and are dropped
    let flat: Vec<bool> = raw
        .facets
        .iter()
        .map(|f| {
            let refs: Vec<&[f64]> = f.iter().map(|&i| orig[i].as_slice()).collect();
            hyperplane(&refs).is_none()
        })
        .collect();
    let planes: Vec<(Vec<f64>, f64)> =
        raw.facets.iter().zip(&raw.normals).map(|(f, out)| oriented_plane(f, orig, out)).collect();
    let mut parent: Vec<usize> = (0..raw.facets.len()).collect();
    for (f, verts) in raw.facets.iter().enumerate() {
        for (i, &g) in raw.neighbors[f].iter().enumerate() {
            if g <= f || flat[f] || flat[g] {
                continue;
            }
            let mine = verts[i];
            let theirs = *raw.facets[g].iter().find(|v| !verts.contains(v)).unwrap();
            let (nf, bf) = &planes[f];
            let (ng, bg) = &planes[g];
            let coplanar = (dot(nf, &orig[theirs]) - bf).abs() <= tol
                && (dot(ng, &orig[mine]) - bg).abs() <= tol
                && dot(nf, ng) > 0.0;
            if coplanar {
                let (a, b) = (find(&mut parent, f), find(&mut parent, g));
                parent[a] = b;
            }
        }
    }
    let mut by_root: HashMap<usize, usize> = HashMap::new();
    let mut groups: Vec<Group> = Vec::new();
    for f in (0..raw.facets.len()).filter(|&f| !flat[f]) {
        let root = find(&mut parent, f);
        let slot = *by_root.entry(root).or_insert_with(|| {
            groups.push(Group { members: Vec::new(), normal: Vec::new(), vertices: Vec::new(), pieces: Vec::new() });
            groups.len() - 1
        });
        groups[slot].members.push(f);
        groups[slot].pieces.push(raw.facets[f].clone());
    }
    for g in &mut groups {
        let mut verts: Vec<usize> = g.pieces.iter().flatten().copied().collect();
        verts.sort_unstable();
        verts.dedup();
        g.vertices = verts;
        let widest = g
            .pieces
            .iter()
            .enumerate()
            .map(|(k, p)| {
                let refs: Vec<&[f64]> = p.iter().map(|&i| orig[i].as_slice()).collect();
                (k, simplex_volume(&refs))
            })
            .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
            .map(|(k, _)| k)
            .unwrap();
        let outward = g.members[widest];
        g.normal = oriented_plane(&g.pieces[widest], orig, &raw.normals[outward]).0;
    }
    groups
}

/// Points whose incident facet normals span `R^n`.
fn extreme_vertices(groups: &[Group], n: usize) -> Vec<usize> {
    let mut incident: HashMap<usize, Vec<usize>> = HashMap::new();
    for (k, g) in groups.iter().enumerate() {
        for &v in &g.vertices {
            incident.entry(v).or_default().push(k);
        }
    }
    let mut out: Vec<usize> = incident
        .into_iter()
        .filter(|(_, gs)| {
            let normals: Vec<Vec<f64>> = gs.iter().map(|&k| groups[k].normal.clone()).collect();
            orthonormalize(&normals, 1e-7).len() == n
        })
        .map(|(v, _)| v)
        .collect();
    out.sort_unstable();
    out
}

fn lex_cmp<T: Scalar>(a: &[T], b: &[T]) -> std::cmp::Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.partial_cmp(y).unwrap_or(std::cmp::Ordering::Equal))
        .find(|o| o.is_ne())
        .unwrap_or(std::cmp::Ordering::Equal)
}

fn assemble<T: Scalar>(points: &[Vec<T>], groups: &[Group], n: usize) -> Polytope<T> {
    let mut used: Vec<usize> = groups.iter().flat_map(|g| g.vertices.iter().copied()).collect();
    used.sort_unstable();
    used.dedup();
    used.sort_by(|&a, &b| lex_cmp(&points[a], &points[b]));
    let mut remap = HashMap::new();
    for (k, &i) in used.iter().enumerate() {
        remap.insert(i, k);
    }
    let vertices: Vec<Vec<T>> = used.iter().map(|&i| points[i].clone()).collect();
    let facets: Vec<Facet<T>> = groups
        .iter()
        .map(|g| {
            let normal: Vec<T> = g.normal.iter().map(|&x| T::lit(x)).collect();
            let mut idx: Vec<usize> = g.vertices.iter().map(|v| remap[v]).collect();
            idx.sort_unstable();
            let offset = idx.iter().map(|&i| dot(&normal, &vertices[i])).fold(T::neg_infinity(), T::max);
            let pieces = g.pieces.iter().map(|p| p.iter().map(|v| remap[v]).collect()).collect();
            Facet { normal, offset, vertices: idx, pieces }
        })
        .collect();
    let simplicial = facets.iter().all(|f| f.vertices.len() == n);
    let verts64: Vec<Vec<f64>> = vertices.iter().map(|v| to_f64_vec(v)).collect();
    let facet_sets: Vec<Vec<usize>> = facets.iter().map(|f| f.vertices.clone()).collect();
    let face_counts = count_faces(n, &verts64, &facet_sets, simplicial);
    let m = T::lit(vertices.len() as f64);
    let interior_point = (0..n).map(|k| vertices.iter().map(|v| v[k]).sum::<T>() / m).collect();
    let mut p = Polytope { dim: n, vertices, facets, face_counts, interior_point, simplicial, scale: T::zero() };
    p.scale = p.vertices.iter().flat_map(|v| v.iter()).fold(T::zero(), |m, &x| m.max(x.abs())).max(p.diameter());
    p
}

fn subsets(set: &[usize], k: usize, out: &mut HashSet<Vec<usize>>) {
    fn rec(set: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut HashSet<Vec<usize>>) {
        if cur.len() == k {
            out.insert(cur.clone());
            return;
        }
        for i in start..set.len() {
            cur.push(set[i]);
            rec(set, k, i + 1, cur, out);
            cur.pop();
        }
    }
    rec(set, k, 0, &mut Vec::with_capacity(k), out);
}

fn intersect_sorted(a: &[usize], b: &[usize]) -> Vec<usize> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Walks the face lattice downwards: the `d`-faces of a `(d+1)`-face `F` are exactly the
/// sets `F ∩ G` over facets `G` whose affine hull has dimension `d`.
fn count_faces(n: usize, verts: &[Vec<f64>], facets: &[Vec<usize>], simplicial: bool) -> FVector {
    let mut f = vec![0usize; n];
    f[0] = verts.len();
    f[n - 1] = facets.len();
    if simplicial {
        for (k, slot) in f.iter_mut().enumerate().take(n - 1).skip(1) {
            let mut faces = HashSet::new();
            for facet in facets {
                subsets(facet, k + 1, &mut faces);
            }
            *slot = faces.len();
        }
        return FVector(f);
    }
    let mut rank_cache: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut rank = |set: &Vec<usize>| -> usize {
        *rank_cache.entry(set.clone()).or_insert_with(|| {
            let refs: Vec<&[f64]> = set.iter().map(|&i| verts[i].as_slice()).collect();
            linalg::affine_rank(&refs, 1e-9)
        })
    };
    let mut level: HashSet<Vec<usize>> = facets.iter().cloned().collect();
    for d in (1..n - 1).rev() {
        let mut next = HashSet::new();
        for face in &level {
            for g in facets {
                let cut = intersect_sorted(face, g);
                if cut.len() > d && cut.len() < face.len() && !next.contains(&cut) && rank(&cut) == d {
                    next.insert(cut);
                }
            }
        }
        f[d] = next.len();
        level = next;
    }
    FVector(f)
}

impl<T: Scalar> Polytope<T> {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vec<T>] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Facet<T>] {
        &self.facets
    }

    pub fn face_counts(&self) -> &FVector {
        &self.face_counts
    }

    pub fn interior_point(&self) -> &[T] {
        &self.interior_point
    }

    pub fn is_simplicial(&self) -> bool {
        self.simplicial
    }

    pub fn scale_length(&self) -> T {
        self.scale
    }

    pub fn diameter(&self) -> T {
        let mut d = T::zero();
        for (i, a) in self.vertices.iter().enumerate() {
            for b in &self.vertices[i + 1..] {
                d = d.max(linalg::dist(a, b));
            }
        }
        d
    }

    pub fn support(&self, u: &[T]) -> T {
        self.vertices.iter().map(|v| dot(v, u)).fold(T::neg_infinity(), T::max)
    }

    pub fn support_point(&self, u: &[T]) -> &[T] {
        self.vertices.iter().max_by(|a, b| dot(a, u).partial_cmp(&dot(b, u)).unwrap()).unwrap()
    }

    /// Largest facet violation `max_i (a_i . x - b_i)`; nonpositive inside.
    pub fn violation(&self, x: &[T]) -> T {
        self.facets.iter().map(|f| dot(&f.normal, x) - f.offset).fold(T::neg_infinity(), T::max)
    }

    pub fn contains(&self, x: &[T]) -> bool {
        self.violation(x) <= T::contain_tol() * self.scale_length()
    }

    /// Radial function about the origin.
    pub fn radial(&self, u: &[T]) -> Result<T> {
        if self.violation(&vec![T::zero(); self.dim]) >= T::zero() {
            return Err(Error::OriginNotInterior);
        }
        Ok(self
            .facets
            .iter()
            .filter_map(|f| {
                let s = dot(&f.normal, u);
                (s > T::zero()).then(|| f.offset / s)
            })
            .fold(T::infinity(), T::min))
    }

    pub fn volume(&self) -> T {
        let c = &self.interior_point;
        let mut total = T::zero();
        for f in &self.facets {
            let h = f.offset - dot(&f.normal, c);
            total = total + h * self.facet_area_of(f) / T::lit(self.dim as f64);
        }
        total
    }

    fn facet_area_of(&self, f: &Facet<T>) -> T {
        f.pieces
            .iter()
            .map(|p| {
                let refs: Vec<&[T]> = p.iter().map(|&i| self.vertices[i].as_slice()).collect();
                simplex_volume(&refs)
            })
            .sum()
    }

    pub fn facet_area(&self, i: usize) -> T {
        self.facet_area_of(&self.facets[i])
    }

    pub fn surface_area(&self) -> T {
        self.facets.iter().map(|f| self.facet_area_of(f)).sum()
    }

    /// Edges as pairs of vertex indices together with the two facets meeting there.
    /// Only meaningful for `n = 3`.
    pub fn edges_with_facets(&self) -> Vec<((usize, usize), (usize, usize))> {
        let mut out = Vec::new();
        for i in 0..self.facets.len() {
            for j in i + 1..self.facets.len() {
                let cut = intersect_sorted(&self.facets[i].vertices, &self.facets[j].vertices);
                if cut.len() >= 2 {
                    // the two extreme points along the common line are the edge ends
                    let dir = sub(&self.vertices[cut[1]], &self.vertices[cut[0]]);
                    let ends = cut.iter().fold((cut[0], cut[0]), |(lo, hi), &v| {
                        let t = dot(&self.vertices[v], &dir);
                        let lo = if t < dot(&self.vertices[lo], &dir) { v } else { lo };
                        let hi = if t > dot(&self.vertices[hi], &dir) { v } else { hi };
                        (lo, hi)
                    });
                    out.push((ends, (i, j)));
                }
            }
        }
        out
    }

    pub fn map_vertices(&self, f: impl Fn(&[T]) -> Vec<T>) -> Result<Polytope<T>> {
        let pts: Vec<Vec<T>> = self.vertices.iter().map(|v| f(v)).collect();
        convex_hull(&pts)
    }

    pub fn scaled(&self, s: T) -> Result<Polytope<T>> {
        self.map_vertices(|v| linalg::scale(v, s))
    }

    pub fn translated(&self, t: &[T]) -> Result<Polytope<T>> {
        self.map_vertices(|v| linalg::add(v, t))
    }

    pub fn to_record(&self) -> PolytopeRecord {
        PolytopeRecord {
            n: self.dim,
            vertices: self.vertices.iter().map(|v| to_f64_vec(v)).collect(),
            facets: self
                .facets
                .iter()
                .map(|f| FacetRecord { normal: to_f64_vec(&f.normal), offset: f.offset.as_f64() })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_record()).expect("polytope record serializes")
    }

    /// Rebuilds from the vertex list; the stored facets are only checked for consistency.
    pub fn from_record(rec: &PolytopeRecord) -> Result<Polytope<T>> {
        let pts: Vec<Vec<T>> = rec.vertices.iter().map(|v| v.iter().map(|&x| T::lit(x)).collect()).collect();
        if pts.iter().any(|p| p.len() != rec.n) {
            return Err(Error::InvalidArgument("vertex length differs from n".into()));
        }
        let p = convex_hull(&pts)?;
        let tol = T::contain_tol() * p.scale_length();
        for f in &rec.facets {
            let normal: Vec<T> = f.normal.iter().map(|&x| T::lit(x)).collect();
            if normal.len() != rec.n || p.support(&normal) > T::lit(f.offset) + tol {
                return Err(Error::InvalidArgument("facet inequality cuts off a vertex".into()));
            }
        }
        Ok(p)
    }

    pub fn from_json(s: &str) -> Result<Polytope<T>> {
        let rec: PolytopeRecord =
            serde_json::from_str(s).map_err(|e| Error::InvalidArgument(format!("polytope json: {e}")))?;
        Self::from_record(&rec)
    }
}
