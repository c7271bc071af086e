//! Parametric convex tiles with octagonal edge normals, the shape catalogue,
//! and interval-valid containment/disjointness predicates.
//!
//! A tile is an open convex polygon cut out by half-planes
//! u_m · (x, y) < b, where u_m = (cos mπ/4, sin mπ/4) and the octagonal
//! coordinate b is an affine polynomial in the parameter `s`. All predicates
//! are decided for a whole parameter interval at once by evaluating affine
//! functions at the interval endpoints.

use std::fmt;

use crate::algebra::{affine_nonneg_on_interval, AlgebraError, ParamInterval, QSqrt2, SPoly};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GeometryError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("duplicate edge normal {0}")]
    DuplicateNormal(u8),
    #[error("tile unbounded: angular gap of {0} steps between adjacent normals")]
    Unbounded(u8),
    #[error("tile needs at least 3 edges, got {0}")]
    TooFewEdges(usize),
    #[error("degenerate tile over the interval")]
    Degenerate,
    #[error("unknown catalogue shape {0:?}")]
    UnknownShape(String),
    #[error("catalogue shape {0:?} takes {1} parameters, got {2}")]
    WrongArity(String, usize, usize),
    #[error("degenerate parameters for catalogue shape {0:?}")]
    DegenerateParams(String),
}

/// An octagonal direction, stored as a doubled index mod 16 so half-integer
/// reflection axes stay integral. Integer directions (even doubled index)
/// serve as edge normals; odd ones occur only as reflection axes.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Direction {
    half: u8, // 2m mod 16
}

impl Direction {
    pub fn integer(m: i64) -> Self {
        Direction {
            half: (2 * m).rem_euclid(16) as u8,
        }
    }

    /// From a doubled index: `half(5)` is the axis at angle 5π/8.
    pub fn from_doubled(two_m: i64) -> Self {
        Direction {
            half: two_m.rem_euclid(16) as u8,
        }
    }

    pub fn is_integer(&self) -> bool {
        self.half % 2 == 0
    }

    pub fn doubled(&self) -> u8 {
        self.half
    }

    /// The integer index m for an integer direction. Panics on a
    /// half-integer axis.
    pub fn index(&self) -> u8 {
        assert!(self.is_integer(), "half-integer direction has no unit vector in Q(\u{221a}2)");
        (self.half / 2) % 8
    }

    /// The unit vector u_m, exact in Q(√2). Integer directions only.
    pub fn unit(&self) -> (QSqrt2, QSqrt2) {
        let m = self.index();
        (cos_m(m), sin_m(m))
    }
}

/// cos(mπ/4), exact.
pub fn cos_m(m: u8) -> QSqrt2 {
    let h = || &QSqrt2::alpha() * &QSqrt2::ratio(1, 2); // √2/2
    match m % 8 {
        0 => QSqrt2::one(),
        1 => h(),
        2 => QSqrt2::zero(),
        3 => -h(),
        4 => -QSqrt2::one(),
        5 => -h(),
        6 => QSqrt2::zero(),
        _ => h(),
    }
}

/// sin(mπ/4), exact.
pub fn sin_m(m: u8) -> QSqrt2 {
    cos_m((m + 6) % 8) // sin x = cos(x − π/2)
}

/// A point with coordinates affine in the parameter `s`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SPoint {
    pub x: SPoly,
    pub y: SPoly,
}

impl SPoint {
    pub fn new(x: SPoly, y: SPoly) -> Self {
        assert!(x.degree() <= 1 && y.degree() <= 1, "coordinates must be affine in s");
        SPoint { x, y }
    }

    pub fn origin() -> Self {
        SPoint::new(SPoly::zero(), SPoly::zero())
    }

    pub fn constant(x: QSqrt2, y: QSqrt2) -> Self {
        SPoint::new(SPoly::constant(x), SPoly::constant(y))
    }

    pub fn eval(&self, s: &QSqrt2) -> (QSqrt2, QSqrt2) {
        (self.x.eval(s), self.y.eval(s))
    }
}

impl std::ops::Add<&SPoint> for &SPoint {
    type Output = SPoint;
    fn add(self, rhs: &SPoint) -> SPoint {
        SPoint::new(&self.x + &rhs.x, &self.y + &rhs.y)
    }
}

impl std::ops::Sub<&SPoint> for &SPoint {
    type Output = SPoint;
    fn sub(self, rhs: &SPoint) -> SPoint {
        SPoint::new(&self.x - &rhs.x, &self.y - &rhs.y)
    }
}

impl fmt::Debug for SPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}, {:?})", self.x, self.y)
    }
}

/// An open convex polygon with octagonal edge normals, valid over a
/// parameter interval.
///
/// Edges are stored sorted by normal angle; the construction normalizes the
/// arbitrary edge order of the source tables. Vertices, in counterclockwise
/// order, are the intersections of angularly adjacent edge lines.
#[derive(Clone, PartialEq, Eq)]
pub struct Tile {
    edges: Vec<(u8, SPoly)>, // (normal index m, octagonal coordinate b), sorted by m
    validity: ParamInterval,
}

impl Tile {
    /// Builds a tile from bracket data `[(m₁..mₙ), (b₁..bₙ)]`.
    ///
    /// Checks that normals are distinct and that no angular gap between
    /// adjacent normals reaches π (which would leave the polygon unbounded).
    /// Geometric nondegeneracy over the interval is a separate, optional
    /// check ([`Tile::nondegenerate`]).
    pub fn new(edges: Vec<(u8, SPoly)>, validity: ParamInterval) -> Result<Self, GeometryError> {
        if edges.len() < 3 {
            return Err(GeometryError::TooFewEdges(edges.len()));
        }
        let mut edges: Vec<(u8, SPoly)> = edges
            .into_iter()
            .map(|(m, b)| (m % 8, b))
            .collect();
        edges.sort_by_key(|(m, _)| *m);
        for w in edges.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(GeometryError::DuplicateNormal(w[0].0));
            }
        }
        let n = edges.len();
        for i in 0..n {
            let gap = (edges[(i + 1) % n].0 + 8 - edges[i].0) % 8;
            if gap >= 4 {
                return Err(GeometryError::Unbounded(gap));
            }
        }
        Ok(Tile { edges, validity })
    }

    pub fn edges(&self) -> &[(u8, SPoly)] {
        &self.edges
    }

    pub fn validity(&self) -> &ParamInterval {
        &self.validity
    }

    pub fn with_validity(&self, validity: ParamInterval) -> Tile {
        Tile {
            edges: self.edges.clone(),
            validity,
        }
    }

    /// Counterclockwise vertex list; vertex k is the intersection of edge k
    /// and the angularly next edge.
    pub fn vertices(&self) -> Vec<SPoint> {
        let n = self.edges.len();
        (0..n)
            .map(|i| {
                let (m1, b1) = &self.edges[i];
                let (m2, b2) = &self.edges[(i + 1) % n];
                edge_intersection(*m1, b1, *m2, b2)
            })
            .collect()
    }

    /// Exact area as a polynomial in `s` (degree ≤ 2), by the shoelace
    /// formula over the vertices.
    pub fn area(&self) -> SPoly {
        let vs = self.vertices();
        let n = vs.len();
        let mut twice = SPoly::zero();
        for i in 0..n {
            let a = &vs[i];
            let b = &vs[(i + 1) % n];
            twice = &twice + &(&(&a.x * &b.y) - &(&b.x * &a.y));
        }
        twice.scale(&QSqrt2::ratio(1, 2))
    }

    /// True iff for all s in `j` every edge supports a positive-length
    /// boundary segment: every vertex strictly satisfies each half-plane it
    /// does not lie on.
    pub fn nondegenerate(&self, j: &ParamInterval) -> bool {
        let vs = self.vertices();
        let n = self.edges.len();
        for (vi, v) in vs.iter().enumerate() {
            for (ei, (m, b)) in self.edges.iter().enumerate() {
                // Vertex vi lies on edges vi and vi+1.
                if ei == vi || ei == (vi + 1) % n {
                    continue;
                }
                let (ux, uy) = Direction::integer(*m as i64).unit();
                let g = b - &self.x_dot(&ux, &uy, v);
                match affine_nonneg_on_interval(&g, j, true) {
                    Ok(true) => {}
                    _ => return false,
                }
            }
        }
        true
    }

    fn x_dot(&self, ux: &QSqrt2, uy: &QSqrt2, v: &SPoint) -> SPoly {
        &v.x.scale(ux) + &v.y.scale(uy)
    }

    /// True iff `self` lies inside `outer` (up to shared boundary) for every
    /// s in `j`.
    pub fn inside(&self, outer: &Tile, j: &ParamInterval) -> bool {
        let vs = self.vertices();
        for (m, b) in &outer.edges {
            let (ux, uy) = Direction::integer(*m as i64).unit();
            for v in &vs {
                let g = b - &(&v.x.scale(&ux) + &v.y.scale(&uy));
                match affine_nonneg_on_interval(&g, j, false) {
                    Ok(true) => {}
                    _ => return false,
                }
            }
        }
        true
    }

    /// True iff the open tiles are disjoint for every s in `j`, witnessed by
    /// a separating octagonal edge line drawn from either tile.
    ///
    /// This separating-axis test is complete for tiles whose normals all lie
    /// in the octagonal set, which the `Tile` type enforces.
    pub fn disjoint(&self, other: &Tile, j: &ParamInterval) -> bool {
        separating_edge(self, other, j) || separating_edge(other, self, j)
    }

    /// Half-plane membership at a fixed parameter value (boundary excluded).
    pub fn contains_point_at(&self, s: &QSqrt2, x: &QSqrt2, y: &QSqrt2) -> bool {
        self.edges.iter().all(|(m, b)| {
            let (ux, uy) = Direction::integer(*m as i64).unit();
            (&b.eval(s) - &(&(&ux * x) + &(&uy * y))).sign() > 0
        })
    }

    /// The centroid of the vertex polygon (a convenient interior point).
    pub fn centroid(&self) -> SPoint {
        let vs = self.vertices();
        let k = QSqrt2::ratio(1, vs.len() as i64);
        let mut x = SPoly::zero();
        let mut y = SPoly::zero();
        for v in &vs {
            x = &x + &v.x;
            y = &y + &v.y;
        }
        SPoint::new(x.scale(&k), y.scale(&k))
    }
}

/// Finds an edge of `a` whose outward side contains every vertex of `b` over
/// all of `j` (boundary contact allowed, since tiles are open).
fn separating_edge(a: &Tile, b: &Tile, j: &ParamInterval) -> bool {
    let vs = b.vertices();
    'edges: for (m, bb) in &a.edges {
        let (ux, uy) = Direction::integer(*m as i64).unit();
        for v in &vs {
            let g = &(&v.x.scale(&ux) + &v.y.scale(&uy)) - bb;
            match affine_nonneg_on_interval(&g, j, false) {
                Ok(true) => {}
                _ => continue 'edges,
            }
        }
        return true;
    }
    false
}

/// Intersection of the edge lines u_{m1}·p = b1 and u_{m2}·p = b2.
fn edge_intersection(m1: u8, b1: &SPoly, m2: u8, b2: &SPoly) -> SPoint {
    let (c1, s1) = (cos_m(m1), sin_m(m1));
    let (c2, s2) = (cos_m(m2), sin_m(m2));
    let det = &(&c1 * &s2) - &(&s1 * &c2);
    assert!(!det.is_zero(), "parallel edge normals {m1}, {m2}");
    let inv = det.recip().unwrap();
    // x = (b1 s2 − b2 s1)/det, y = (c1 b2 − c2 b1)/det.
    let x = (&b1.scale(&s2) - &b2.scale(&s1)).scale(&inv);
    let y = (&b2.scale(&c1) - &b1.scale(&c2)).scale(&inv);
    SPoint::new(x, y)
}

impl fmt::Debug for Tile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[(")?;
        for (i, (m, _)) in self.edges.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{m}")?;
        }
        write!(f, "),(")?;
        for (i, (_, b)) in self.edges.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{b:?}")?;
        }
        write!(f, ")]")
    }
}

/// A union of tiles (possibly non-convex, like the arrowhead span).
#[derive(Clone, Debug)]
pub struct Domain {
    pub tiles: Vec<Tile>,
}

impl Domain {
    pub fn new(tiles: Vec<Tile>) -> Self {
        Domain { tiles }
    }

    pub fn single(tile: Tile) -> Self {
        Domain { tiles: vec![tile] }
    }

    pub fn area(&self) -> SPoly {
        let mut a = SPoly::zero();
        for t in &self.tiles {
            a = &a + &t.area();
        }
        a
    }

    /// True iff `t` lies inside one member tile over all of `j` (sufficient
    /// for the convex destination sets used by the orbit engine).
    pub fn contains_tile(&self, t: &Tile, j: &ParamInterval) -> bool {
        self.tiles.iter().any(|outer| t.inside(outer, j))
    }
}

/// The polygonal shapes of the catalogue, plus the (non-convex) arrowhead.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ShapeKind {
    Q(u8), // 1..=15
    Arrowhead,
}

impl ShapeKind {
    pub fn arity(&self) -> usize {
        match self {
            ShapeKind::Q(n) => match n {
                1 | 2 | 3 | 5 | 7 => 1,
                4 | 6 | 8 | 9 | 10 | 12 | 13 | 14 | 15 => 2,
                11 => 3,
                _ => 0,
            },
            ShapeKind::Arrowhead => 1,
        }
    }

    pub fn parse(name: &str) -> Result<Self, GeometryError> {
        let name = name.trim();
        if let Some(num) = name.strip_prefix('Q') {
            let n: u8 = num
                .parse()
                .map_err(|_| GeometryError::UnknownShape(name.into()))?;
            if (1..=15).contains(&n) {
                return Ok(ShapeKind::Q(n));
            }
        }
        if name == "A" || name == "Ahat" {
            return Ok(ShapeKind::Arrowhead);
        }
        Err(GeometryError::UnknownShape(name.into()))
    }
}

impl fmt::Display for ShapeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ShapeKind::Q(n) => write!(f, "Q{n}"),
            ShapeKind::Arrowhead => write!(f, "A"),
        }
    }
}

/// Builds a catalogue shape in its own frame (anchor at the local origin).
/// Returns a list of tiles: one for the convex shapes, two for the
/// arrowhead.
pub fn catalogue(
    kind: ShapeKind,
    params: &[SPoly],
    validity: &ParamInterval,
) -> Result<Vec<Tile>, GeometryError> {
    let expect = kind.arity();
    if params.len() != expect {
        return Err(GeometryError::WrongArity(kind.to_string(), expect, params.len()));
    }
    let z = SPoly::zero;
    let p = |i: usize| params[i].clone();
    let data: Vec<(Vec<u8>, Vec<SPoly>)> = match kind {
        ShapeKind::Q(1) => vec![(vec![6, 1, 3], vec![p(0), z(), z()])],
        ShapeKind::Q(2) => vec![(vec![4, 6, 0, 2], vec![p(0), p(0), p(0), p(0)])],
        ShapeKind::Q(3) => vec![(vec![6, 7, 2, 3], vec![p(0), p(0), p(0), p(0)])],
        ShapeKind::Q(4) => vec![(vec![6, 1, 2, 3], vec![p(0), z(), -&p(1), z()])],
        ShapeKind::Q(5) => vec![(
            (0..8).collect(),
            (0..8).map(|_| p(0)).collect(),
        )],
        ShapeKind::Q(6) => vec![(
            vec![0, 2, 3, 5, 6],
            vec![p(1), p(1), p(0), p(0), p(1)],
        )],
        ShapeKind::Q(7) => vec![(vec![5, 7, 0, 2], vec![z(), p(0), p(0), z()])],
        ShapeKind::Q(8) => vec![(
            vec![4, 5, 7, 0, 1, 2],
            vec![z(), z(), p(0), p(1), p(1), p(0)],
        )],
        ShapeKind::Q(9) => vec![(
            vec![1, 2, 3, 5, 6, 7],
            vec![p(0), p(1), p(0), p(0), p(1), p(0)],
        )],
        ShapeKind::Q(10) => vec![(
            vec![4, 6, 0, 2],
            vec![p(1), p(0), p(1), p(0)],
        )],
        // The catalogue prints Q11 with the same bracket data as Q9 despite
        // its three parameters; we transcribe the row as printed and accept
        // the third parameter without using it.
        ShapeKind::Q(11) => vec![(
            vec![1, 2, 3, 5, 6, 7],
            vec![p(0), p(1), p(0), p(0), p(1), p(0)],
        )],
        ShapeKind::Q(12) => vec![(
            vec![6, 0, 2, 3],
            vec![z(), p(0), p(1), z()],
        )],
        ShapeKind::Q(13) => vec![(
            vec![5, 6, 0, 2],
            vec![z(), p(1), p(0), z()],
        )],
        ShapeKind::Q(14) => vec![(
            (0..8).collect(),
            vec![p(0), p(0), p(1), p(1), p(0), p(0), p(1), p(1)],
        )],
        ShapeKind::Q(15) => vec![(
            (0..8).collect(),
            vec![p(0), p(1), p(0), p(1), p(0), p(1), p(0), p(1)],
        )],
        ShapeKind::Arrowhead => vec![
            (vec![5, 0, 2], vec![p(0), p(0), z()]),
            (vec![5, 0, 3], vec![p(0), p(0), z()]),
        ],
        ShapeKind::Q(n) => return Err(GeometryError::UnknownShape(format!("Q{n}"))),
    };
    data.into_iter()
        .map(|(ms, bs)| Tile::new(ms.into_iter().zip(bs).collect(), validity.clone()))
        .collect()
}

/// Like [`catalogue`] but requires a single convex tile that is
/// nondegenerate over the whole interval.
pub fn catalogue_checked(
    kind: ShapeKind,
    params: &[SPoly],
    validity: &ParamInterval,
) -> Result<Tile, GeometryError> {
    let tiles = catalogue(kind, params, validity)?;
    if tiles.len() != 1 {
        return Err(GeometryError::DegenerateParams(kind.to_string()));
    }
    let t = tiles.into_iter().next().unwrap();
    if !t.nondegenerate(validity) {
        return Err(GeometryError::DegenerateParams(kind.to_string()));
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn whole() -> ParamInterval {
        ParamInterval::closed(QSqrt2::zero(), QSqrt2::alpha())
    }

    #[test]
    fn q2_square() {
        let t = catalogue_checked(ShapeKind::Q(2), &[SPoly::from_int(1)], &whole()).unwrap();
        let vs = t.vertices();
        assert_eq!(vs.len(), 4);
        // Axis-aligned square with apothem 1: vertices (±1, ±1), diagonals
        // along u₁ and u₃.
        let pts: Vec<(QSqrt2, QSqrt2)> = vs.iter().map(|v| v.eval(&QSqrt2::zero())).collect();
        let one = QSqrt2::one();
        for want in [
            (one.clone(), one.clone()),
            (-&one, one.clone()),
            (-&one, -&one),
            (one.clone(), -&one),
        ] {
            assert!(pts.contains(&want), "missing vertex {want:?}");
        }
        assert_eq!(t.area(), SPoly::from_int(4));
    }

    #[test]
    fn q1_triangle() {
        let l = SPoly::from_int(1);
        let t = catalogue_checked(ShapeKind::Q(1), &[l], &whole()).unwrap();
        assert_eq!(t.vertices().len(), 3);
    }

    #[test]
    fn degenerate_square_errors() {
        let err = catalogue_checked(ShapeKind::Q(2), &[SPoly::zero()], &whole());
        assert!(err.is_err());
    }

    #[test]
    fn rhombus_span_vertices() {
        // [(0,1,4,5),(ω,ω,ω,ω)]: rhombus of side 2αω.
        let om = SPoly::constant(QSqrt2::omega());
        let t = Tile::new(
            vec![(0, om.clone()), (1, om.clone()), (4, om.clone()), (5, om)],
            whole(),
        )
        .unwrap();
        let vs = t.vertices();
        assert_eq!(vs.len(), 4);
        // Side length 2αω: check one side.
        let a = vs[0].eval(&QSqrt2::zero());
        let b = vs[1].eval(&QSqrt2::zero());
        let dx = &a.0 - &b.0;
        let dy = &a.1 - &b.1;
        let side2 = &(&dx * &dx) + &(&dy * &dy);
        let want = (&QSqrt2::from_int(2) * &(&QSqrt2::alpha() * &QSqrt2::omega())).pow(2);
        assert_eq!(side2, want);
    }

    #[test]
    fn disjoint_and_inside() {
        let j = whole();
        let small = catalogue_checked(ShapeKind::Q(2), &[SPoly::from_int(1)], &j).unwrap();
        let big = catalogue_checked(ShapeKind::Q(2), &[SPoly::from_int(3)], &j).unwrap();
        assert!(small.inside(&big, &j));
        assert!(!big.inside(&small, &j));
        assert!(!small.disjoint(&small, &j));
        // A far translate: shift edges with normals 0 and 4.
        let shifted = Tile::new(
            vec![
                (4, SPoly::from_int(-9)),
                (6, SPoly::from_int(1)),
                (0, SPoly::from_int(11)),
                (2, SPoly::from_int(1)),
            ],
            j.clone(),
        )
        .unwrap();
        assert!(small.disjoint(&shifted, &j));
    }
}
