//! Incremental beneath-beyond hull on jittered `f64` copies of the input. The kernel only
//! decides the combinatorics; planes and measures are recomputed from the original
//! coordinates by the caller.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{axpy, dot, hyperplane_with_tol, norm, orthonormalize, sub};

const JITTER: f64 = 1e-10;
const VISIBLE: f64 = 1e-13;
const DEGENERATE: f64 = 1e-9;

/// Simplicial boundary of the hull of a point set.
#[derive(Debug, Clone)]
pub(crate) struct RawHull {
    /// Each entry lists `n` input indices.
    pub facets: Vec<Vec<usize>>,
    /// `neighbors[f][i]` is the facet across the ridge opposite `facets[f][i]`.
    pub neighbors: Vec<Vec<usize>>,
    /// Outward unit normals in the jittered frame; used when the original points of a
    /// facet are degenerate.
    pub normals: Vec<Vec<f64>>,
}

struct Facet {
    verts: Vec<usize>,
    nb: Vec<usize>,
    normal: Vec<f64>,
    offset: f64,
    outside: Vec<usize>,
    alive: bool,
}

impl Facet {
    fn height(&self, p: &[f64]) -> f64 {
        dot(&self.normal, p) - self.offset
    }
}

pub(crate) fn bounding_scale(points: &[Vec<f64>]) -> f64 {
    let n = points[0].len();
    (0..n)
        .map(|k| {
            let (lo, hi) =
                points.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(p[k]), hi.max(p[k])));
            hi - lo
        })
        .fold(0.0, f64::max)
        .max(points.iter().flat_map(|p| p.iter()).fold(0.0f64, |m, x| m.max(x.abs())))
}

/// Affinely independent subset of size `n + 1`, chosen greedily by distance to the span of
/// the points already picked.
fn initial_simplex(points: &[Vec<f64>], scale: f64) -> Result<Vec<usize>> {
    let n = points[0].len();
    let first = (0..points.len()).min_by(|&a, &b| points[a][0].partial_cmp(&points[b][0]).unwrap()).unwrap();
    let mut chosen = vec![first];
    let mut basis: Vec<Vec<f64>> = Vec::new();
    while chosen.len() < n + 1 {
        let origin = &points[first];
        let (best, resid) = (0..points.len())
            .map(|i| {
                let mut r = sub(&points[i], origin);
                for b in &basis {
                    let c = dot(&r, b);
                    r = axpy(&r, -c, b);
                }
                (i, r)
            })
            .max_by(|a, b| norm(&a.1).partial_cmp(&norm(&b.1)).unwrap())
            .unwrap();
        if norm(&resid) <= DEGENERATE * scale {
            return Err(Error::DegenerateInput(format!(
                "points span an affine subspace of dimension {} < {}",
                chosen.len() - 1,
                n
            )));
        }
        let mut fresh = orthonormalize(&[resid], 0.0);
        basis.append(&mut fresh);
        chosen.push(best);
    }
    Ok(chosen)
}

pub(crate) fn simplicial_hull(original: &[Vec<f64>]) -> Result<RawHull> {
    let n = original[0].len();
    if original.iter().any(|p| p.len() != n || p.iter().any(|x| !x.is_finite())) {
        return Err(Error::DegenerateInput("non-finite or ragged coordinates".into()));
    }
    if original.len() < n + 1 {
        return Err(Error::DegenerateInput(format!("{} points cannot span R^{}", original.len(), n)));
    }
    let scale = bounding_scale(original).max(f64::MIN_POSITIVE);
    let simplex = initial_simplex(original, scale)?;

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_4a11);
    let pts: Vec<Vec<f64>> = original
        .iter()
        .map(|p| p.iter().map(|&x| x + JITTER * scale * (2.0 * rng.random::<f64>() - 1.0)).collect())
        .collect();
    let tol = VISIBLE * scale;

    let interior: Vec<f64> = (0..n).map(|k| simplex.iter().map(|&i| pts[i][k]).sum::<f64>() / (n + 1) as f64).collect();

    let plane = |verts: &[usize]| -> Result<(Vec<f64>, f64)> {
        let refs: Vec<&[f64]> = verts.iter().map(|&i| pts[i].as_slice()).collect();
        let (mut normal, mut offset) = hyperplane_with_tol(&refs, 1e-14)
            .ok_or_else(|| Error::DegenerateInput("flat facet during hull construction".into()))?;
        if dot(&normal, &interior) > offset {
            normal.iter_mut().for_each(|x| *x = -*x);
            offset = -offset;
        }
        Ok((normal, offset))
    };

    let mut facets: Vec<Facet> = Vec::new();
    for k in 0..=n {
        let verts: Vec<usize> = simplex.iter().enumerate().filter(|&(m, _)| m != k).map(|(_, &i)| i).collect();
        let nb: Vec<usize> = (0..=n).filter(|&m| m != k).collect();
        let (normal, offset) = plane(&verts)?;
        facets.push(Facet { verts, nb, normal, offset, outside: Vec::new(), alive: true });
    }
    let mut in_simplex = vec![false; pts.len()];
    for &i in &simplex {
        in_simplex[i] = true;
    }
    for i in (0..pts.len()).filter(|&i| !in_simplex[i]) {
        if let Some(f) = facets.iter_mut().find(|f| f.height(&pts[i]) > tol) {
            f.outside.push(i);
        }
    }

    let mut pending: Vec<usize> = (0..facets.len()).collect();
    let mut stamp = vec![0usize; facets.len()];
    let mut round = 0usize;
    while let Some(start) = pending.pop() {
        if !facets[start].alive || facets[start].outside.is_empty() {
            continue;
        }
        round += 1;
        let apex = *facets[start]
            .outside
            .iter()
            .max_by(|&&a, &&b| facets[start].height(&pts[a]).partial_cmp(&facets[start].height(&pts[b])).unwrap())
            .unwrap();
        let p = &pts[apex];

        let mut visible = vec![start];
        stamp[start] = round;
        let mut head = 0;
        while head < visible.len() {
            let f = visible[head];
            head += 1;
            for &g in &facets[f].nb {
                if stamp[g] != round && facets[g].height(p) > tol {
                    stamp[g] = round;
                    visible.push(g);
                }
            }
        }

        let mut created = Vec::new();
        let mut ridges: HashMap<Vec<usize>, (usize, usize)> = HashMap::new();
        for &f in &visible {
            for i in 0..n {
                let across = facets[f].nb[i];
                if stamp[across] == round {
                    continue;
                }
                let mut verts = facets[f].verts.clone();
                verts[i] = apex;
                let (normal, offset) = plane(&verts)?;
                let id = facets.len();
                let mut nb = vec![usize::MAX; n];
                nb[i] = across;
                if let Some(slot) = facets[across].nb.iter_mut().find(|g| **g == f) {
                    *slot = id;
                }
                for k in (0..n).filter(|&k| k != i) {
                    let mut key: Vec<usize> =
                        verts.iter().enumerate().filter(|&(m, _)| m != k).map(|(_, &v)| v).collect();
                    key.sort_unstable();
                    match ridges.remove(&key) {
                        Some((other, slot)) => {
                            nb[k] = other;
                            facets[other].nb[slot] = id;
                        }
                        None => {
                            ridges.insert(key, (id, k));
                        }
                    }
                }
                facets.push(Facet { verts, nb, normal, offset, outside: Vec::new(), alive: true });
                stamp.push(0);
                created.push(id);
            }
        }
        if !ridges.is_empty() {
            return Err(Error::DegenerateInput("unmatched ridge while updating the hull".into()));
        }

        let mut orphans = Vec::new();
        for &f in &visible {
            facets[f].alive = false;
            orphans.append(&mut facets[f].outside);
        }
        for q in orphans.into_iter().filter(|&q| q != apex) {
            if let Some(&g) = created.iter().find(|&&g| facets[g].height(&pts[q]) > tol) {
                facets[g].outside.push(q);
            }
        }
        pending.extend(created.iter().copied().filter(|&g| !facets[g].outside.is_empty()));
    }

    let mut index = vec![usize::MAX; facets.len()];
    let mut next = 0;
    for (i, f) in facets.iter().enumerate() {
        if f.alive {
            index[i] = next;
            next += 1;
        }
    }
    let alive: Vec<&Facet> = facets.iter().filter(|f| f.alive).collect();
    Ok(RawHull {
        facets: alive.iter().map(|f| f.verts.clone()).collect(),
        neighbors: alive.iter().map(|f| f.nb.iter().map(|&g| index[g]).collect()).collect(),
        normals: alive.iter().map(|f| f.normal.clone()).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tetrahedron_with_interior_point() {
        let pts = vec![
            vec![0.0, 0.0, 0.0],
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
            vec![0.1, 0.1, 0.1],
        ];
        let h = simplicial_hull(&pts).unwrap();
        assert_eq!(h.facets.len(), 4);
        assert!(h.facets.iter().all(|f| !f.contains(&4)));
        for (f, nb) in h.neighbors.iter().enumerate() {
            for &g in nb {
                assert!(h.neighbors[g].contains(&f));
            }
        }
    }

    #[test]
    fn flat_input_is_degenerate() {
        let pts = vec![vec![0.0, 0.0, 0.0], vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![1.0, 1.0, 0.0]];
        assert!(matches!(simplicial_hull(&pts), Err(Error::DegenerateInput(_))));
    }
}
