use super::halfspace::{halfspace_intersection, Halfspace};
use super::nearest::{dykstra, nearest_in_hull, Projection, DYKSTRA_MAX_ITER, DYKSTRA_TOL};
use super::polytope::Polytope;
use crate::error::{Error, Result};
use crate::linalg::{axpy, dist, dot, norm, scale, sub};
use crate::scalar::Scalar;

/// Ball `{x : |x - center| <= radius}` cut by `{x : (x - center) . axis >= height}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Cap<T> {
    pub center: Vec<T>,
    pub radius: T,
    /// Unit vector.
    pub axis: Vec<T>,
    pub height: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BodyKind {
    Ball,
    Ellipsoid,
    Cap,
    Polytope,
    Intersection,
}

impl BodyKind {
    pub fn as_str(self) -> &'static str {
        match self {
            BodyKind::Ball => "ball",
            BodyKind::Ellipsoid => "ellipsoid",
            BodyKind::Cap => "cap",
            BodyKind::Polytope => "polytope",
            BodyKind::Intersection => "intersection",
        }
    }
}

/// A convex body in `R^n` given through membership, support, radial and projection oracles.
#[derive(Debug, Clone)]
pub enum Body<T> {
    Ball {
        center: Vec<T>,
        radius: T,
    },
    /// Axis-aligned ellipsoid.
    Ellipsoid {
        center: Vec<T>,
        semi_axes: Vec<T>,
    },
    Cap(Cap<T>),
    Polytope(Polytope<T>),
    Intersection(Vec<Body<T>>),
}

/// Result of intersecting two bodies.
#[derive(Debug, Clone)]
pub enum Intersected<T> {
    Body(Body<T>),
    /// No interior points in common.
    Empty,
}

impl<T: Scalar> Cap<T> {
    fn rim_radius(&self) -> T {
        (self.radius * self.radius - self.height * self.height).max(T::zero()).sqrt()
    }

    fn halfspace(&self) -> Halfspace<T> {
        // (x - c) . e >= t  <=>  -e . x <= -(c . e) - t
        Halfspace::new(scale(&self.axis, -T::one()), -dot(&self.center, &self.axis) - self.height)
    }

    fn support(&self, u: &[T]) -> T {
        let top = axpy(&self.center, self.radius / norm(u).max(T::min_positive_value()), u);
        if dot(&sub(&top, &self.center), &self.axis) >= self.height {
            return dot(&self.center, u) + self.radius * norm(u);
        }
        let ua = dot(u, &self.axis);
        let perp = axpy(u, -ua, &self.axis);
        let disk_center = axpy(&self.center, self.height, &self.axis);
        dot(&disk_center, u) + self.rim_radius() * norm(&perp)
    }

    fn project(&self, x: &[T]) -> Vec<T> {
        let y = sub(x, &self.center);
        let r = norm(&y);
        let a = dot(&y, &self.axis);
        if r <= self.radius && a >= self.height {
            return x.to_vec();
        }
        if r > self.radius && a * self.radius >= self.height * r {
            return axpy(&self.center, self.radius / r, &y);
        }
        let w = axpy(&y, -a, &self.axis);
        let wn = norm(&w);
        let rho = self.rim_radius();
        let base = axpy(&self.center, self.height, &self.axis);
        if a <= self.height && wn <= rho {
            return crate::linalg::add(&base, &w);
        }
        let dir = if wn > T::zero() {
            scale(&w, T::one() / wn)
        } else {
            // any rim point is nearest when x lies on the axis
            let k = (0..self.axis.len())
                .min_by(|&i, &j| self.axis[i].abs().partial_cmp(&self.axis[j].abs()).unwrap())
                .unwrap();
            let e = crate::linalg::unit::<T>(self.axis.len(), k);
            let p = axpy(&e, -self.axis[k], &self.axis);
            scale(&p, T::one() / norm(&p))
        };
        axpy(&base, rho, &dir)
    }
}

fn ball_radial<T: Scalar>(center: &[T], radius: T, u: &[T]) -> T {
    let b = dot(u, center);
    let c = dot(center, center) - radius * radius;
    b + (b * b - c).max(T::zero()).sqrt()
}

fn ellipsoid_project<T: Scalar>(center: &[T], axes: &[T], x: &[T]) -> Vec<T> {
    let y = sub(x, center);
    let level: T = y.iter().zip(axes).map(|(&yi, &a)| yi * yi / (a * a)).sum();
    if level <= T::one() {
        return x.to_vec();
    }
    let f = |lam: T| -> T {
        y.iter()
            .zip(axes)
            .map(|(&yi, &a)| {
                let q = a * yi / (a * a + lam);
                q * q
            })
            .sum::<T>()
            - T::one()
    };
    let amax = axes.iter().copied().fold(T::zero(), T::max);
    let (mut lo, mut hi) = (T::zero(), amax * norm(&y));
    for _ in 0..200 {
        let mid = (lo + hi) / T::lit(2.0);
        if f(mid) > T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= T::epsilon() * hi {
            break;
        }
    }
    let lam = (lo + hi) / T::lit(2.0);
    center.iter().zip(&y).zip(axes).map(|((&c, &yi), &a)| c + a * a * yi / (a * a + lam)).collect()
}

impl<T: Scalar> Body<T> {
    pub fn ball(center: Vec<T>, radius: T) -> Self {
        Body::Ball { center, radius }
    }

    pub fn unit_ball(n: usize) -> Self {
        Body::Ball { center: vec![T::zero(); n], radius: T::one() }
    }

    pub fn dim(&self) -> usize {
        match self {
            Body::Ball { center, .. } | Body::Ellipsoid { center, .. } => center.len(),
            Body::Cap(c) => c.center.len(),
            Body::Polytope(p) => p.dim(),
            Body::Intersection(parts) => parts[0].dim(),
        }
    }

    pub fn kind(&self) -> BodyKind {
        match self {
            Body::Ball { .. } => BodyKind::Ball,
            Body::Ellipsoid { .. } => BodyKind::Ellipsoid,
            Body::Cap(_) => BodyKind::Cap,
            Body::Polytope(_) => BodyKind::Polytope,
            Body::Intersection(_) => BodyKind::Intersection,
        }
    }

    pub fn as_polytope(&self) -> Option<&Polytope<T>> {
        match self {
            Body::Polytope(p) => Some(p),
            _ => None,
        }
    }

    /// Axis-aligned box containing the body.
    pub fn bounding_box(&self) -> (Vec<T>, Vec<T>) {
        match self {
            Body::Ball { center, radius } => {
                (center.iter().map(|&c| c - *radius).collect(), center.iter().map(|&c| c + *radius).collect())
            }
            Body::Ellipsoid { center, semi_axes } => (
                center.iter().zip(semi_axes).map(|(&c, &a)| c - a).collect(),
                center.iter().zip(semi_axes).map(|(&c, &a)| c + a).collect(),
            ),
            Body::Cap(cap) => {
                let n = cap.center.len();
                let lo = (0..n)
                    .map(|k| -cap.support(&crate::linalg::scale(&crate::linalg::unit(n, k), -T::one())))
                    .collect();
                let hi = (0..n).map(|k| cap.support(&crate::linalg::unit(n, k))).collect();
                (lo, hi)
            }
            Body::Polytope(p) => {
                let n = p.dim();
                let lo = (0..n).map(|k| p.vertices().iter().map(|v| v[k]).fold(T::infinity(), T::min)).collect();
                let hi = (0..n).map(|k| p.vertices().iter().map(|v| v[k]).fold(T::neg_infinity(), T::max)).collect();
                (lo, hi)
            }
            Body::Intersection(parts) => {
                let boxes: Vec<_> = parts.iter().map(|b| b.bounding_box()).collect();
                let n = self.dim();
                let lo = (0..n).map(|k| boxes.iter().map(|b| b.0[k]).fold(T::neg_infinity(), T::max)).collect();
                let hi = (0..n).map(|k| boxes.iter().map(|b| b.1[k]).fold(T::infinity(), T::min)).collect();
                (lo, hi)
            }
        }
    }

    /// Length scale used for relative tolerances.
    pub fn scale_length(&self) -> T {
        let (lo, hi) = self.bounding_box();
        dist(&lo, &hi).max(norm(&lo)).max(norm(&hi)).max(T::min_positive_value())
    }

    pub fn diameter_bound(&self) -> T {
        let (lo, hi) = self.bounding_box();
        dist(&lo, &hi)
    }

    pub fn contains(&self, x: &[T]) -> bool {
        let tol = T::contain_tol();
        match self {
            Body::Ball { center, radius } => dist(x, center) <= *radius * (T::one() + tol),
            Body::Ellipsoid { center, semi_axes } => {
                let level: T =
                    x.iter().zip(center).zip(semi_axes).map(|((&xi, &c), &a)| (xi - c) * (xi - c) / (a * a)).sum();
                level <= T::one() + tol
            }
            Body::Cap(cap) => {
                let y = sub(x, &cap.center);
                norm(&y) <= cap.radius * (T::one() + tol) && dot(&y, &cap.axis) >= cap.height - tol * cap.radius
            }
            Body::Polytope(p) => p.contains(x),
            Body::Intersection(parts) => parts.iter().all(|b| b.contains(x)),
        }
    }

    pub fn contains_origin_interior(&self) -> bool {
        let n = self.dim();
        let o = vec![T::zero(); n];
        match self {
            Body::Ball { center, radius } => norm(center) < *radius,
            Body::Ellipsoid { center, semi_axes } => {
                center.iter().zip(semi_axes).map(|(&c, &a)| c * c / (a * a)).sum::<T>() < T::one()
            }
            Body::Cap(cap) => {
                norm(&cap.center) < cap.radius && dot(&scale(&cap.center, -T::one()), &cap.axis) > cap.height
            }
            Body::Polytope(p) => p.violation(&o) < T::zero(),
            Body::Intersection(parts) => parts.iter().all(|b| b.contains_origin_interior()),
        }
    }

    /// Support function `h(u) = max_{x in K} u . x`.
    pub fn support(&self, u: &[T]) -> Result<T> {
        match self {
            Body::Ball { center, radius } => Ok(dot(center, u) + *radius * norm(u)),
            Body::Ellipsoid { center, semi_axes } => {
                Ok(dot(center, u) + u.iter().zip(semi_axes).map(|(&ui, &a)| a * a * ui * ui).sum::<T>().sqrt())
            }
            Body::Cap(cap) => Ok(cap.support(u)),
            Body::Polytope(p) => Ok(p.support(u)),
            Body::Intersection(parts) => intersection_support(parts, u),
        }
    }

    /// Radial function about the origin.
    pub fn radial(&self, u: &[T]) -> Result<T> {
        if !self.contains_origin_interior() {
            return Err(Error::OriginNotInterior);
        }
        let un = norm(u);
        let u: Vec<T> = scale(u, T::one() / un);
        let r = match self {
            Body::Ball { center, radius } => ball_radial(center, *radius, &u),
            Body::Ellipsoid { center, semi_axes } => {
                let (mut a, mut b, mut c) = (T::zero(), T::zero(), -T::one());
                for ((&ui, &ci), &s) in u.iter().zip(center).zip(semi_axes) {
                    let w = T::one() / (s * s);
                    a = a + ui * ui * w;
                    b = b + ui * ci * w;
                    c = c + ci * ci * w;
                }
                (b + (b * b - a * c).max(T::zero()).sqrt()) / a
            }
            Body::Cap(cap) => {
                let ball = ball_radial(&cap.center, cap.radius, &u);
                let h = cap.halfspace();
                let s = dot(&h.normal, &u);
                if s > T::zero() {
                    ball.min(h.offset / s)
                } else {
                    ball
                }
            }
            Body::Polytope(p) => p.radial(&u)?,
            Body::Intersection(parts) => {
                let mut r = T::infinity();
                for b in parts {
                    r = r.min(b.radial(&u)?);
                }
                r
            }
        };
        Ok(r / un)
    }

    /// Nearest point of the body.
    pub fn project(&self, x: &[T]) -> Result<Vec<T>> {
        match self {
            Body::Ball { center, radius } => {
                let d = dist(x, center);
                if d <= *radius {
                    Ok(x.to_vec())
                } else {
                    Ok(axpy(center, *radius / d, &sub(x, center)))
                }
            }
            Body::Ellipsoid { center, semi_axes } => Ok(ellipsoid_project(center, semi_axes, x)),
            Body::Cap(cap) => Ok(cap.project(x)),
            Body::Polytope(p) => {
                if p.violation(x) <= T::zero() {
                    Ok(x.to_vec())
                } else {
                    nearest_in_hull(p.vertices(), x)
                }
            }
            Body::Intersection(parts) => {
                if parts.iter().all(|b| b.contains(x)) {
                    return Ok(x.to_vec());
                }
                let projs: Vec<Box<Projection<'_, T>>> =
                    parts.iter().map(|b| Box::new(move |y: &[T]| b.project(y)) as Box<Projection<'_, T>>).collect();
                let refs: Vec<&Projection<'_, T>> = projs.iter().map(|b| b.as_ref()).collect();
                dykstra(x, &refs, DYKSTRA_MAX_ITER, T::lit(DYKSTRA_TOL))
            }
        }
    }

    /// Euclidean distance to the body.
    pub fn dist(&self, x: &[T]) -> Result<T> {
        Ok(dist(x, &self.project(x)?))
    }

    /// Radial distance `max(0, |x| - rho(x / |x|))`.
    pub fn rdist(&self, x: &[T]) -> Result<T> {
        let r = norm(x);
        if r == T::zero() {
            return if self.contains_origin_interior() { Ok(T::zero()) } else { Err(Error::OriginNotInterior) };
        }
        Ok((r - self.radial(x)?).max(T::zero()))
    }

    /// Image under `x -> s x`.
    pub fn scaled(&self, s: T) -> Result<Body<T>> {
        Ok(match self {
            Body::Ball { center, radius } => Body::Ball { center: scale(center, s), radius: *radius * s },
            Body::Ellipsoid { center, semi_axes } => {
                Body::Ellipsoid { center: scale(center, s), semi_axes: scale(semi_axes, s) }
            }
            Body::Cap(c) => Body::Cap(Cap {
                center: scale(&c.center, s),
                radius: c.radius * s,
                axis: c.axis.clone(),
                height: c.height * s,
            }),
            Body::Polytope(p) => Body::Polytope(p.scaled(s)?),
            Body::Intersection(parts) => Body::Intersection(parts.iter().map(|b| b.scaled(s)).collect::<Result<_>>()?),
        })
    }

    /// Image under `x -> x + t`.
    pub fn translated(&self, t: &[T]) -> Result<Body<T>> {
        let add = crate::linalg::add;
        Ok(match self {
            Body::Ball { center, radius } => Body::Ball { center: add(center, t), radius: *radius },
            Body::Ellipsoid { center, semi_axes } => {
                Body::Ellipsoid { center: add(center, t), semi_axes: semi_axes.clone() }
            }
            Body::Cap(c) => Body::Cap(Cap { center: add(&c.center, t), ..c.clone() }),
            Body::Polytope(p) => Body::Polytope(p.translated(t)?),
            Body::Intersection(parts) => {
                Body::Intersection(parts.iter().map(|b| b.translated(t)).collect::<Result<_>>()?)
            }
        })
    }

    /// Vertex check for polytopes, closed-form checks for balls, and support dominance on
    /// a fixed direction set otherwise.
    pub fn is_subset_of(&self, other: &Body<T>) -> Result<bool> {
        let tol = T::contain_tol() * other.scale_length();
        if let Body::Polytope(p) = self {
            return Ok(p.vertices().iter().all(|v| other.contains(v)));
        }
        match (self, other) {
            (Body::Ball { center: c1, radius: r1 }, Body::Ball { center: c2, radius: r2 }) => {
                return Ok(dist(c1, c2) + *r1 <= *r2 + tol)
            }
            (Body::Cap(cap), Body::Ball { center, radius }) => {
                return Ok(dist(&cap.center, center) + cap.radius <= *radius + tol)
            }
            (Body::Ball { center, radius }, Body::Polytope(p)) => {
                return Ok(p.facets().iter().all(|f| dot(&f.normal, center) + *radius <= f.offset + tol))
            }
            _ => {}
        }
        let dirs = crate::rng::fixed_directions::<T>(self.dim(), 10_000);
        for u in &dirs {
            if self.support(u)? > other.support(u)? + tol {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn intersection_support<T: Scalar>(parts: &[Body<T>], u: &[T]) -> Result<T> {
    // a ball factor turns the problem into a one-parameter search along the proximal path
    let quad = parts.iter().position(|b| matches!(b, Body::Ball { .. } | Body::Cap(_)));
    if let Some(q) = quad {
        let (center, radius, extra) = match &parts[q] {
            Body::Ball { center, radius } => (center.clone(), *radius, None),
            Body::Cap(c) => (c.center.clone(), c.radius, Some(c.halfspace())),
            _ => unreachable!(),
        };
        let rest: Vec<&Body<T>> = parts.iter().enumerate().filter(|&(k, _)| k != q).map(|(_, b)| b).collect();
        let project_rest = |x: &[T]| -> Result<Vec<T>> {
            if rest.len() == 1 && extra.is_none() {
                return rest[0].project(x);
            }
            let mut projs: Vec<Box<Projection<'_, T>>> =
                rest.iter().map(|b| Box::new(move |y: &[T]| b.project(y)) as Box<Projection<'_, T>>).collect();
            if let Some(h) = &extra {
                projs.push(Box::new(move |y: &[T]| Ok(h.project(y))));
            }
            let refs: Vec<&Projection<'_, T>> = projs.iter().map(|b| b.as_ref()).collect();
            dykstra(x, &refs, DYKSTRA_MAX_ITER, T::lit(DYKSTRA_TOL))
        };
        return ball_constrained_support(&center, radius, u, project_rest);
    }
    let ell = parts.iter().position(|b| matches!(b, Body::Ellipsoid { .. }));
    if let (Some(e), true) = (ell, parts.len() == 2) {
        let other = &parts[1 - e];
        if let (Body::Ellipsoid { center, semi_axes }, Body::Polytope(p)) = (&parts[e], other) {
            // x = c + A y maps the unit ball onto the ellipsoid
            let pulled =
                p.map_vertices(|v| v.iter().zip(center).zip(semi_axes).map(|((&x, &c), &a)| (x - c) / a).collect())?;
            let au: Vec<T> = u.iter().zip(semi_axes).map(|(&x, &a)| x * a).collect();
            let n = u.len();
            let inner = Body::Intersection(vec![Body::unit_ball(n), Body::Polytope(pulled)]);
            return Ok(dot(center, u) + inner.support(&au)?);
        }
    }
    Err(Error::UnsupportedBodyKind { op: "support of intersection", kind: "ellipsoid" })
}

/// `max u . x` over `{|x - c| <= r} ∩ C`, where `C` is given by its projection. The path
/// `s -> proj_C(c + s u)` moves monotonically away from `c`, so bisection on `s` finds the
/// point where the ball constraint becomes active.
fn ball_constrained_support<T: Scalar>(
    center: &[T],
    radius: T,
    u: &[T],
    project: impl Fn(&[T]) -> Result<Vec<T>>,
) -> Result<T> {
    let un = norm(u);
    let dir = scale(u, T::one() / un);
    let at = |s: T| project(&axpy(center, s, &dir));
    let x0 = at(T::zero())?;
    if dist(&x0, center) > radius * (T::one() + T::contain_tol()) {
        return Err(Error::EmptyIntersection);
    }
    let mut hi = radius;
    let mut x_hi = at(hi)?;
    let far = radius * T::lit(1e9);
    while dist(&x_hi, center) < radius && hi < far {
        hi = hi * T::lit(4.0);
        x_hi = at(hi)?;
    }
    if dist(&x_hi, center) < radius {
        return Ok(dot(&x_hi, u));
    }
    let mut lo = T::zero();
    let mut x_lo = x0;
    for _ in 0..200 {
        let mid = (lo + hi) / T::lit(2.0);
        let x_mid = at(mid)?;
        if dist(&x_mid, center) <= radius {
            lo = mid;
            x_lo = x_mid;
        } else {
            hi = mid;
            x_hi = x_mid;
        }
        if hi - lo <= T::epsilon() * T::lit(4.0) * hi {
            break;
        }
    }
    // the two brackets differ by rounding; the inner one is feasible
    let _ = x_hi;
    Ok(dot(&x_lo, u))
}

/// Intersection of two bodies, simplified to a polytope or a single body where possible.
pub fn intersect<T: Scalar>(a: &Body<T>, b: &Body<T>) -> Result<Intersected<T>> {
    if a.dim() != b.dim() {
        return Err(Error::InvalidArgument("bodies live in different dimensions".into()));
    }
    if a.is_subset_of(b)? {
        return Ok(Intersected::Body(a.clone()));
    }
    if b.is_subset_of(a)? {
        return Ok(Intersected::Body(b.clone()));
    }
    match (a, b) {
        (Body::Polytope(p), Body::Polytope(q)) => {
            polytope_cut(p, q.facets().iter().map(|f| Halfspace::new(f.normal.clone(), f.offset)))
        }
        (Body::Cap(cap), Body::Polytope(p)) | (Body::Polytope(p), Body::Cap(cap)) => {
            match polytope_cut(p, std::iter::once(cap.halfspace()))? {
                Intersected::Empty => Ok(Intersected::Empty),
                Intersected::Body(cut) => {
                    intersect(&Body::Ball { center: cap.center.clone(), radius: cap.radius }, &cut)
                }
            }
        }
        (Body::Ball { center, radius }, Body::Polytope(p)) | (Body::Polytope(p), Body::Ball { center, radius }) => {
            if nearest_in_hull(p.vertices(), center).map(|x| dist(&x, center))?
                >= *radius * (T::one() - T::contain_tol())
            {
                return Ok(Intersected::Empty);
            }
            Ok(Intersected::Body(Body::Intersection(vec![
                Body::Ball { center: center.clone(), radius: *radius },
                Body::Polytope(p.clone()),
            ])))
        }
        (Body::Ball { center: c1, radius: r1 }, Body::Ball { center: c2, radius: r2 }) => {
            if dist(c1, c2) >= (*r1 + *r2) * (T::one() - T::contain_tol()) {
                Ok(Intersected::Empty)
            } else {
                Ok(Intersected::Body(Body::Intersection(vec![a.clone(), b.clone()])))
            }
        }
        _ => {
            // a common point found by alternating projections certifies nonemptiness
            let (lo, hi) = a.bounding_box();
            let start: Vec<T> = lo.iter().zip(&hi).map(|(&l, &h)| (l + h) / T::lit(2.0)).collect();
            let parts = vec![a.clone(), b.clone()];
            let pa = |y: &[T]| a.project(y);
            let pb = |y: &[T]| b.project(y);
            let common = match dykstra(&start, &[&pa, &pb], DYKSTRA_MAX_ITER, T::lit(DYKSTRA_TOL)) {
                Ok(x) => x,
                Err(Error::NonConvergence { .. }) => return Ok(Intersected::Empty),
                Err(e) => return Err(e),
            };
            let gap = dist(&a.project(&common)?, &b.project(&common)?);
            if gap > T::contain_tol() * a.scale_length() {
                return Ok(Intersected::Empty);
            }
            let body = Body::Intersection(parts);
            // require some width in every coordinate direction
            let n = a.dim();
            for k in 0..n {
                let e = crate::linalg::unit::<T>(n, k);
                let w = body.support(&e)? + body.support(&scale(&e, -T::one()))?;
                if w <= T::contain_tol() * a.scale_length() {
                    return Ok(Intersected::Empty);
                }
            }
            Ok(Intersected::Body(body))
        }
    }
}

fn polytope_cut<T: Scalar>(p: &Polytope<T>, extra: impl Iterator<Item = Halfspace<T>>) -> Result<Intersected<T>> {
    let mut hs: Vec<Halfspace<T>> = p.facets().iter().map(|f| Halfspace::new(f.normal.clone(), f.offset)).collect();
    hs.extend(extra);
    match halfspace_intersection(&hs, None) {
        Ok(q) => Ok(Intersected::Body(Body::Polytope(q))),
        Err(Error::EmptyIntersection) => Ok(Intersected::Empty),
        Err(e) => Err(e),
    }
}
