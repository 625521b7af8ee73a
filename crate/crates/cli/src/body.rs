//! Parser for the compact `kind:params` body descriptors.

use std::f64::consts::PI;

use polyapprox::bodies::{
    circumscribed_polygon, convex_hull, inscribed_polygon, make_cap, make_cube, make_regular_polygon,
    make_regular_simplex, make_triangle, make_unit_cube,
};
use polyapprox::corpus::random_polytope;
use polyapprox::{Body, Polytope};

use crate::error::CliError;

pub const GRAMMAR: &str = "\
Body descriptors (`kind:params`, dimension from --dim unless the parameters fix it):
  ball[:R[:c1,c2,..]]           ball of radius R (default 1), centred at the origin or c
  ellipsoid:a1,a2,..[:c1,c2,..] axis-aligned ellipsoid with semi-axes a
  cube[:H]                      [-H, H]^n (default H = 1)
  unit-cube                     [0, 1]^n
  simplex                       regular simplex with vertices on the unit sphere
  regular-polygon:M[:S]         regular M-gon, S = inscribed (default), circumscribed or a circumradius
  triangle:H                    equilateral triangle with circumradius 1 + H
  cap:E[:+|-]                   D_n cut by x_n >= E (or its mirror image x_n <= -E)
  random:M[:SEED]               hull of M random points with radii in [0.5, 1.5)
  points:x,y,..;x,y,..;..       convex hull of the listed points
  file:PATH                     polytope saved as JSON (vertices and facets)";

fn bad(desc: &str, why: impl std::fmt::Display) -> CliError {
    CliError::Input(format!("body `{desc}`: {why}"))
}

fn floats(desc: &str, s: &str) -> Result<Vec<f64>, CliError> {
    s.split(',').map(|x| x.trim().parse::<f64>().map_err(|e| bad(desc, format!("`{x}`: {e}")))).collect()
}

fn float(desc: &str, s: &str) -> Result<f64, CliError> {
    s.trim().parse::<f64>().map_err(|e| bad(desc, format!("`{s}`: {e}")))
}

fn need_dim(desc: &str, dim: Option<usize>) -> Result<usize, CliError> {
    dim.ok_or_else(|| bad(desc, "needs --dim"))
}

pub fn parse_body(desc: &str, dim: Option<usize>) -> Result<Body, CliError> {
    let mut parts = desc.splitn(2, ':');
    let kind = parts.next().unwrap_or_default();
    let rest = parts.next();
    let params: Vec<&str> = rest.map(|r| r.split(':').collect()).unwrap_or_default();
    let body = match kind {
        "ball" => {
            let radius = params.first().map(|r| float(desc, r)).transpose()?.unwrap_or(1.0);
            let center = match params.get(1) {
                Some(c) => floats(desc, c)?,
                None => vec![0.0; need_dim(desc, dim)?],
            };
            if !(radius > 0.0) {
                return Err(bad(desc, "radius must be positive"));
            }
            Body::ball(center, radius)
        }
        "ellipsoid" => {
            let axes = floats(desc, params.first().ok_or_else(|| bad(desc, "needs semi-axes"))?)?;
            let center = match params.get(1) {
                Some(c) => floats(desc, c)?,
                None => vec![0.0; axes.len()],
            };
            if center.len() != axes.len() || axes.iter().any(|a| !(*a > 0.0)) {
                return Err(bad(desc, "needs positive semi-axes and a centre of the same length"));
            }
            Body::Ellipsoid { center, semi_axes: axes }
        }
        "cube" => {
            let half = params.first().map(|h| float(desc, h)).transpose()?.unwrap_or(1.0);
            Body::Polytope(make_cube(need_dim(desc, dim)?, half)?)
        }
        "unit-cube" => Body::Polytope(make_unit_cube(need_dim(desc, dim)?)?),
        "simplex" => Body::Polytope(make_regular_simplex(need_dim(desc, dim)?)?),
        "regular-polygon" => {
            let count: usize =
                params.first().ok_or_else(|| bad(desc, "needs a vertex count"))?.parse().map_err(|e| bad(desc, e))?;
            let p: Polytope = match params.get(1).copied().unwrap_or("inscribed") {
                "inscribed" => inscribed_polygon(count)?,
                "circumscribed" => circumscribed_polygon(count)?,
                r => make_regular_polygon(count, float(desc, r)?, PI / 2.0)?,
            };
            Body::Polytope(p)
        }
        "triangle" => Body::Polytope(make_triangle(float(desc, params.first().ok_or_else(|| bad(desc, "needs h"))?)?)?),
        "cap" => {
            let eps = float(desc, params.first().ok_or_else(|| bad(desc, "needs a height"))?)?;
            let sign = match params.get(1).copied().unwrap_or("+") {
                "+" | "1" | "+1" => 1,
                "-" | "-1" => -1,
                s => return Err(bad(desc, format!("sign `{s}` is not + or -"))),
            };
            make_cap(need_dim(desc, dim)?, eps, sign)?
        }
        "random" => {
            let count: usize =
                params.first().ok_or_else(|| bad(desc, "needs a point count"))?.parse().map_err(|e| bad(desc, e))?;
            let seed: u64 = params.get(1).map(|s| s.parse()).transpose().map_err(|e| bad(desc, e))?.unwrap_or(0);
            Body::Polytope(random_polytope(need_dim(desc, dim)?, count, seed)?)
        }
        "points" => {
            let pts: Vec<Vec<f64>> = rest
                .ok_or_else(|| bad(desc, "needs points"))?
                .split(';')
                .map(|p| floats(desc, p))
                .collect::<Result<_, _>>()?;
            Body::Polytope(convex_hull(&pts)?)
        }
        "file" => {
            let path = rest.ok_or_else(|| bad(desc, "needs a path"))?;
            let text = std::fs::read_to_string(path).map_err(|e| bad(desc, e))?;
            Body::Polytope(Polytope::from_json(&text)?)
        }
        _ => return Err(bad(desc, format!("unknown kind `{kind}`"))),
    };
    if let Some(n) = dim {
        if body.dim() != n {
            return Err(bad(desc, format!("has dimension {} but --dim is {n}", body.dim())));
        }
    }
    Ok(body)
}
