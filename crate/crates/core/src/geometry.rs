//! Exact planar geometry: points, circles, smallest enclosing circles,
//! collinearity frames and convex-hull predicates.
//!
//! Every predicate is decided by exact sign computations in Q(sqrt 3);
//! distances appear only in squared form so no square roots are needed.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::{rat, FieldScalar, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeometryError {
    #[error("operation requires at least one point")]
    Empty,
}

/// A point (or vector) with exact coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Point2 {
    pub x: FieldScalar,
    pub y: FieldScalar,
}

impl Point2 {
    pub fn new(x: FieldScalar, y: FieldScalar) -> Self {
        Point2 { x, y }
    }

    pub fn origin() -> Self {
        Point2::new(FieldScalar::zero(), FieldScalar::zero())
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Point2::new(FieldScalar::from_int(x), FieldScalar::from_int(y))
    }

    pub fn add(&self, other: &Point2) -> Point2 {
        Point2::new(&self.x + &other.x, &self.y + &other.y)
    }

    pub fn sub(&self, other: &Point2) -> Point2 {
        Point2::new(&self.x - &other.x, &self.y - &other.y)
    }

    pub fn scale(&self, s: &FieldScalar) -> Point2 {
        Point2::new(&self.x * s, &self.y * s)
    }

    pub fn scale_rat(&self, s: &Rational) -> Point2 {
        Point2::new(self.x.mul_rat(s), self.y.mul_rat(s))
    }

    pub fn is_origin(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    /// Squared Euclidean norm; stays inside the field.
    pub fn norm_sq(&self) -> FieldScalar {
        &(&self.x * &self.x) + &(&self.y * &self.y)
    }

    /// Lexicographic order by (x, y) with exact comparisons. This is the
    /// global deterministic order used for dedup and direction choices.
    pub fn lex_cmp(&self, other: &Point2) -> Ordering {
        self.x.cmp(&other.x).then_with(|| self.y.cmp(&other.y))
    }
}

impl std::fmt::Display for Point2 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Squared distance between two points.
pub fn dist_sq(a: &Point2, b: &Point2) -> FieldScalar {
    a.sub(b).norm_sq()
}

/// Cross product z-component of (b - a) x (c - a).
pub fn cross(a: &Point2, b: &Point2, c: &Point2) -> FieldScalar {
    let ab = b.sub(a);
    let ac = c.sub(a);
    &(&ab.x * &ac.y) - &(&ab.y * &ac.x)
}

fn dot(a: &Point2, b: &Point2) -> FieldScalar {
    &(&a.x * &b.x) + &(&a.y * &b.y)
}

/// A circle given by center and squared radius.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circle {
    pub center: Point2,
    pub radius_sq: FieldScalar,
}

impl Circle {
    pub fn contains(&self, p: &Point2) -> bool {
        dist_sq(p, &self.center) <= self.radius_sq
    }
}

fn sorted_dedup(points: &[Point2]) -> Vec<Point2> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.lex_cmp(b));
    pts.dedup();
    pts
}

fn diameter_circle(a: &Point2, b: &Point2) -> Circle {
    let half = rat(1) / rat(2);
    let center = a.add(b).scale_rat(&half);
    let radius_sq = dist_sq(a, &center);
    Circle { center, radius_sq }
}

/// Circumcircle of three non-collinear points, solved exactly.
fn circumcircle(a: &Point2, b: &Point2, c: &Point2) -> Option<Circle> {
    let bx = b.sub(a);
    let cx = c.sub(a);
    let d = (&(&bx.x * &cx.y) - &(&bx.y * &cx.x)).mul_rat(&rat(2));
    if d.is_zero() {
        return None;
    }
    let b2 = bx.norm_sq();
    let c2 = cx.norm_sq();
    let ux = &(&cx.y * &b2) - &(&bx.y * &c2);
    let uy = &(&bx.x * &c2) - &(&cx.x * &b2);
    let center = Point2::new(&a.x + &(&ux / &d), &a.y + &(&uy / &d));
    let radius_sq = dist_sq(&center, a);
    Some(Circle { center, radius_sq })
}

/// Exact smallest enclosing circle.
///
/// The minimum circle is determined by two points (as a diameter) or by
/// three points on its boundary, so searching all pairs and triples and
/// keeping the smallest valid circle is exact. Point counts here are
/// desk-scale, which keeps the combinatorial search affordable.
pub fn smallest_enclosing_circle(points: &[Point2]) -> Result<Circle, GeometryError> {
    let pts = sorted_dedup(points);
    match pts.len() {
        0 => Err(GeometryError::Empty),
        1 => Ok(Circle {
            center: pts[0].clone(),
            radius_sq: FieldScalar::zero(),
        }),
        _ => {
            let mut best: Option<Circle> = None;
            let mut consider = |c: Circle| {
                if pts.iter().all(|p| c.contains(p))
                    && best.as_ref().is_none_or(|b| c.radius_sq < b.radius_sq)
                {
                    best = Some(c);
                }
            };
            // The optimum is diametral on a pair or circumscribed on a
            // triple; the smallest valid candidate over both families is
            // exactly the smallest enclosing circle.
            for i in 0..pts.len() {
                for j in i + 1..pts.len() {
                    consider(diameter_circle(&pts[i], &pts[j]));
                }
            }
            for i in 0..pts.len() {
                for j in i + 1..pts.len() {
                    for k in j + 1..pts.len() {
                        if let Some(c) = circumcircle(&pts[i], &pts[j], &pts[k]) {
                            consider(c);
                        }
                    }
                }
            }
            best.ok_or(GeometryError::Empty)
        }
    }
}

/// Parametrization of a collinear point set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CollinearFrame {
    /// Lexicographically smallest point of the set.
    pub origin: Point2,
    /// Direction from the smallest to the largest point, normalized so its
    /// first nonzero coordinate is 1; lexicographically positive.
    pub direction: Point2,
    /// Sorted parameters t with point = origin + t * direction. Parameter
    /// differences give exact along-line distance ratios.
    pub params: Vec<FieldScalar>,
}

impl CollinearFrame {
    pub fn point_at(&self, t: &FieldScalar) -> Point2 {
        self.origin.add(&self.direction.scale(t))
    }
}

/// Returns the line parametrization if all points are collinear.
///
/// Input may contain duplicates; parameters are deduplicated and sorted.
/// A single point is trivially collinear with direction (1, 0).
pub fn collinear_frame(points: &[Point2]) -> Result<Option<CollinearFrame>, GeometryError> {
    let pts = sorted_dedup(points);
    if pts.is_empty() {
        return Err(GeometryError::Empty);
    }
    if pts.len() == 1 {
        return Ok(Some(CollinearFrame {
            origin: pts[0].clone(),
            direction: Point2::from_ints(1, 0),
            params: vec![FieldScalar::zero()],
        }));
    }
    let origin = pts[0].clone();
    let span = pts[pts.len() - 1].sub(&origin);
    for p in &pts[1..pts.len() - 1] {
        let v = p.sub(&origin);
        if !(&(&span.x * &v.y) - &(&span.y * &v.x)).is_zero() {
            return Ok(None);
        }
    }
    // Normalize by the first nonzero coordinate. The lexicographic sort
    // makes the span's first nonzero coordinate positive, so the
    // direction comes out lexicographically positive.
    let direction = if !span.x.is_zero() {
        Point2::new(FieldScalar::one(), &span.y / &span.x)
    } else {
        Point2::new(FieldScalar::zero(), FieldScalar::one())
    };
    let param_of = |p: &Point2| -> FieldScalar {
        let v = p.sub(&origin);
        if !span.x.is_zero() {
            v.x.clone()
        } else {
            v.y.clone()
        }
    };
    let mut params: Vec<FieldScalar> = pts.iter().map(param_of).collect();
    params.sort();
    Ok(Some(CollinearFrame {
        origin,
        direction,
        params,
    }))
}

/// Convex hull in counterclockwise order via monotone chain with exact
/// orientation tests. Collinear inputs return the two extreme points
/// (or one point). Interior and edge-collinear points are dropped.
pub fn convex_hull(points: &[Point2]) -> Vec<Point2> {
    let pts = sorted_dedup(points);
    if pts.len() <= 2 {
        return pts;
    }
    let build = |iter: &mut dyn Iterator<Item = &Point2>| {
        let mut chain: Vec<Point2> = Vec::new();
        for p in iter {
            while chain.len() >= 2
                && cross(&chain[chain.len() - 2], &chain[chain.len() - 1], p).sign() <= 0
            {
                chain.pop();
            }
            chain.push(p.clone());
        }
        chain
    };
    let mut lower = build(&mut pts.iter());
    let mut upper = build(&mut pts.iter().rev());
    lower.pop();
    upper.pop();
    lower.append(&mut upper);
    if lower.is_empty() {
        // Fully collinear set: keep the two extremes.
        vec![pts[0].clone(), pts[pts.len() - 1].clone()]
    } else {
        lower
    }
}

/// Exact point-in-convex-hull test (boundary counts as inside).
pub fn point_in_hull(p: &Point2, hull: &[Point2]) -> bool {
    match hull.len() {
        0 => false,
        1 => p == &hull[0],
        2 => {
            // On the segment: collinear and within the parameter range.
            let d = hull[1].sub(&hull[0]);
            let v = p.sub(&hull[0]);
            if !(&(&d.x * &v.y) - &(&d.y * &v.x)).is_zero() {
                return false;
            }
            let t = dot(&v, &d);
            !t.is_negative() && t <= d.norm_sq()
        }
        n => {
            for i in 0..n {
                let a = &hull[i];
                let b = &hull[(i + 1) % n];
                if cross(a, b, p).is_negative() {
                    return false;
                }
            }
            true
        }
    }
}
