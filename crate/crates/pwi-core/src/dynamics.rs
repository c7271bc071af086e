//! Dressed domains and their dynamics: the parametric piecewise isometry on
//! the rhombus, the prototype constructors (base triangle, strip, pencil,
//! fringed triangles, double strip, arrowhead), interval-valid orbit
//! iteration, first-return induction, the arrowhead transfer map, and the
//! tiling-plan validator.
//!
//! All predicates hold over a whole parameter interval: a single symbolic
//! computation certifies the stated behaviour for every parameter value in
//! the interval.

use std::fmt;

use thiserror::Error;

use crate::algebra::{AlgebraError, ParamInterval, QSqrt2, SPoly};
use crate::geometry::{catalogue, Direction, Domain, GeometryError, ShapeKind, SPoint, Tile};
use crate::isometry::{place_tile, Isometry};
use crate::maybe_rayon::*;

#[derive(Debug, Error)]
pub enum DynamicsError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("tile straddles an atom boundary")]
    StraddlesAtoms,
    #[error("tile lies outside the domain span")]
    OutsideSpan,
    #[error("atom {0} is an exit atom with no assigned isometry")]
    ExitAtom(usize),
    #[error("orbit exceeded {0} steps")]
    MaxSteps(usize),
    #[error("orbit tile intersects a destination tile before the final step (step {0})")]
    PrematureDestination(usize),
    #[error("parameter outside the admissible range: {0}")]
    ParameterRange(String),
    #[error("parameter interval straddles a bifurcation value: {0}")]
    BifurcationStraddle(String),
    #[error("no unique reflection axis for atom {0}; an explicit assignment is required")]
    AmbiguousAxis(String),
    #[error("construction inconsistency: {0}")]
    Inconsistent(String),
    #[error("malformed tiling plan: {0}")]
    PlanParse(String),
}

fn con(v: QSqrt2) -> SPoly {
    SPoly::constant(v)
}

/// Fetches the single catalogue tile of kind `Q_k`.
fn q_tile(k: u8, params: &[SPoly], j: &ParamInterval) -> Result<Tile, DynamicsError> {
    let mut tiles = catalogue(ShapeKind::Q(k), params, j)?;
    Ok(tiles.remove(0))
}

/// Catalogue tile placed as `T_{(dx,dy)} R_rot Q_k(params)`.
pub fn put(
    k: u8,
    params: &[SPoly],
    rot: i64,
    dx: &SPoly,
    dy: &SPoly,
    j: &ParamInterval,
) -> Result<Tile, DynamicsError> {
    Ok(place_tile(&q_tile(k, params, j)?, rot, dx, dy)?)
}

/// True when the two tiles have identical defining edges.
pub fn same_tile(a: &Tile, b: &Tile) -> bool {
    a.edges() == b.edges()
}

/// Intersection of two convex tiles sharing the octagonal normal set: for
/// each normal present in either tile, keep the smaller offset. Errors when
/// two offsets are not comparable over the interval.
pub fn intersect_tiles(a: &Tile, b: &Tile, j: &ParamInterval) -> Result<Tile, DynamicsError> {
    let mut edges: Vec<(u8, SPoly)> = a.edges().to_vec();
    for (m, bb) in b.edges() {
        if let Some(slot) = edges.iter_mut().find(|(ma, _)| ma == m) {
            let diff = &slot.1 - bb;
            if crate::algebra::affine_nonneg_on_interval(&diff, j, false)? {
                slot.1 = bb.clone();
            } else if !crate::algebra::affine_nonneg_on_interval(&(-&diff), j, false)? {
                return Err(DynamicsError::Inconsistent(format!(
                    "edge offsets for normal {m} are not comparable over the interval"
                )));
            }
        } else {
            edges.push((*m, bb.clone()));
        }
    }
    Ok(Tile::new(edges, j.clone())?)
}

/// The reflection axes (through the centroid) that map the tile onto
/// itself, as doubled direction indices modulo 8.
pub fn symmetry_axes(t: &Tile) -> Vec<Direction> {
    let c = t.centroid();
    (0..8)
        .filter_map(|two_m| {
            let axis = Direction::from_doubled(two_m);
            let iso = Isometry::reflection_about(axis, &c);
            match iso.apply_tile(t) {
                Ok(img) if same_tile(&img, t) => Some(axis),
                _ => None,
            }
        })
        .collect()
}

/// Picks the reflection axis for an atom: an explicit assignment wins;
/// otherwise the unique detected axis; for rhombi (two axes, each through a
/// pair of opposite vertices) the short diagonal.
fn assign_axis(
    t: &Tile,
    j: &ParamInterval,
    preferred: Option<i64>,
    name: &str,
) -> Result<Direction, DynamicsError> {
    let axes = symmetry_axes(t);
    if let Some(d) = preferred {
        let dir = Direction::from_doubled(d);
        if axes.contains(&dir) {
            return Ok(dir);
        }
        return Err(DynamicsError::Inconsistent(format!(
            "assigned axis {d} is not a symmetry axis of {name}"
        )));
    }
    match axes.len() {
        1 => Ok(axes[0]),
        2 => {
            // Rhombus rule: each diagonal axis fixes two opposite vertices;
            // choose the shorter diagonal (constant choice on the cell, so a
            // midpoint sample decides it).
            let c = t.centroid();
            let s = j.sample();
            let verts = t.vertices();
            let mut best: Option<(f64, Direction)> = None;
            for axis in axes {
                let iso = Isometry::reflection_about(axis, &c);
                let fixed: Vec<&SPoint> = verts
                    .iter()
                    .filter(|v| iso.apply_point(v) == **v)
                    .collect();
                if fixed.len() != 2 {
                    return Err(DynamicsError::AmbiguousAxis(name.to_string()));
                }
                let (x0, y0) = fixed[0].eval(&s);
                let (x1, y1) = fixed[1].eval(&s);
                let d2 = (x0.to_f64() - x1.to_f64()).powi(2)
                    + (y0.to_f64() - y1.to_f64()).powi(2);
                if best.as_ref().map_or(true, |(b, _)| d2 < *b) {
                    best = Some((d2, axis));
                }
            }
            Ok(best.unwrap().1)
        }
        _ => Err(DynamicsError::AmbiguousAxis(name.to_string())),
    }
}

/// A domain together with its atoms and per-atom isometries. Exit atoms
/// (whose dynamics is supplied externally by induction) carry no map.
#[derive(Clone)]
pub struct DressedDomain {
    span: Domain,
    atoms: Vec<Tile>,
    maps: Vec<Option<Isometry>>,
    labels: Vec<String>,
    axes: Vec<Option<Direction>>,
    validity: ParamInterval,
}

impl DressedDomain {
    /// Builds and fully checks a dressed domain: atoms pairwise disjoint,
    /// atom areas summing to the span area, and every map orientation
    /// preserving with image inside the span.
    pub fn new(
        span: Domain,
        atoms: Vec<Tile>,
        maps: Vec<Option<Isometry>>,
        labels: Vec<String>,
        validity: ParamInterval,
    ) -> Result<Self, DynamicsError> {
        let n = atoms.len();
        Self::with_axes(span, atoms, maps, labels, vec![None; n], validity, None)
    }

    fn with_axes(
        span: Domain,
        atoms: Vec<Tile>,
        maps: Vec<Option<Isometry>>,
        labels: Vec<String>,
        axes: Vec<Option<Direction>>,
        validity: ParamInterval,
        span_area: Option<SPoly>,
    ) -> Result<Self, DynamicsError> {
        let n = atoms.len();
        if maps.len() != n || labels.len() != n || axes.len() != n {
            return Err(DynamicsError::Inconsistent(
                "atom, map, and label lists must have equal length".into(),
            ));
        }
        // Area completeness.
        let total = atoms
            .iter()
            .fold(SPoly::zero(), |acc, t| &acc + &t.area());
        let span_area = span_area.unwrap_or_else(|| span.area());
        if total != span_area {
            return Err(DynamicsError::Inconsistent(format!(
                "atom areas {total} do not sum to the span area {span_area}"
            )));
        }
        // Pairwise disjointness, parallel over the first index.
        let bad_pair = (0..n)
            .into_par_iter()
            .map(|i| {
                for k in i + 1..n {
                    if !atoms[i].disjoint(&atoms[k], &validity) {
                        return Some((i, k));
                    }
                }
                None
            })
            .reduce(|| None, Option::or);
        if let Some((i, k)) = bad_pair {
            return Err(DynamicsError::Inconsistent(format!(
                "atoms {} and {} are not disjoint",
                labels[i], labels[k]
            )));
        }
        // Orientation and range of each map.
        for (i, m) in maps.iter().enumerate() {
            if let Some(g) = m {
                if g.parity() != 1 {
                    return Err(DynamicsError::Inconsistent(format!(
                        "map of atom {} reverses orientation",
                        labels[i]
                    )));
                }
                // With a multi-tile span (the non-convex arrowhead) an image
                // may straddle the covering tiles; skip the check there.
                if span.tiles.len() == 1 {
                    let img = g.apply_tile(&atoms[i])?;
                    if !span.contains_tile(&img, &validity) {
                        return Err(DynamicsError::Inconsistent(format!(
                            "image of atom {} leaves the span",
                            labels[i]
                        )));
                    }
                }
            }
        }
        Ok(DressedDomain {
            span,
            atoms,
            maps,
            labels,
            axes,
            validity,
        })
    }

    pub fn span(&self) -> &Domain {
        &self.span
    }

    pub fn atoms(&self) -> &[Tile] {
        &self.atoms
    }

    pub fn maps(&self) -> &[Option<Isometry>] {
        &self.maps
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Assigned reflection axes, where the map is defined as a composition
    /// of involutions.
    pub fn axes(&self) -> &[Option<Direction>] {
        &self.axes
    }

    pub fn validity(&self) -> &ParamInterval {
        &self.validity
    }

    pub fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// The unique atom containing `t` over the whole interval `j`.
    pub fn find_atom(&self, t: &Tile, j: &ParamInterval) -> Result<usize, DynamicsError> {
        for (i, a) in self.atoms.iter().enumerate() {
            if t.inside(a, j) {
                return Ok(i);
            }
        }
        if self.span.contains_tile(t, j) {
            Err(DynamicsError::StraddlesAtoms)
        } else {
            Err(DynamicsError::OutsideSpan)
        }
    }

    /// One step of the dynamics on a tile: locate the atom containing it
    /// and apply that atom's isometry.
    pub fn step(&self, t: &Tile, j: &ParamInterval) -> Result<(usize, Tile), DynamicsError> {
        let i = self.find_atom(t, j)?;
        match &self.maps[i] {
            Some(g) => Ok((i, g.apply_tile(t)?)),
            None => Err(DynamicsError::ExitAtom(i)),
        }
    }

    fn orbit(
        &self,
        t: &Tile,
        targets: &Domain,
        j: &ParamInterval,
        max_steps: usize,
        min_steps: usize,
    ) -> Result<OrbitRecord, DynamicsError> {
        let mut path = Vec::new();
        let mut incidence = vec![0u64; self.atoms.len()];
        let mut net = Isometry::identity();
        let mut cur = t.clone();
        let mut steps = 0usize;
        loop {
            if steps >= min_steps && targets.contains_tile(&cur, j) {
                return Ok(OrbitRecord {
                    path,
                    net,
                    steps,
                    incidence,
                    final_tile: cur,
                });
            }
            if steps > 0 {
                // Disjointness discipline: before arrival the moving tile
                // must stay clear of every destination tile.
                for d in &targets.tiles {
                    if !cur.disjoint(d, j) {
                        return Err(DynamicsError::PrematureDestination(steps));
                    }
                }
            }
            if steps >= max_steps {
                return Err(DynamicsError::MaxSteps(max_steps));
            }
            let (i, img) = self.step(&cur, j)?;
            path.push(i);
            incidence[i] += 1;
            net = self.maps[i].as_ref().unwrap().compose(&net);
            cur = img;
            steps += 1;
        }
    }

    /// Iterates the dynamics on `t` until its image first lies inside
    /// `targets`, recording the visited atoms and the net isometry.
    pub fn return_orbit(
        &self,
        t: &Tile,
        targets: &Domain,
        j: &ParamInterval,
        max_steps: usize,
    ) -> Result<OrbitRecord, DynamicsError> {
        self.orbit(t, targets, j, max_steps, 0)
    }

    /// Iterates until the tile returns exactly onto itself (at least one
    /// step), certifying a periodic tile and its period.
    pub fn periodic_orbit(
        &self,
        t: &Tile,
        j: &ParamInterval,
        max_steps: usize,
    ) -> Result<OrbitRecord, DynamicsError> {
        let mut path = Vec::new();
        let mut incidence = vec![0u64; self.atoms.len()];
        let mut net = Isometry::identity();
        let mut cur = t.clone();
        let mut steps = 0usize;
        loop {
            if steps > 0 && same_tile(&cur, t) {
                return Ok(OrbitRecord {
                    path,
                    net,
                    steps,
                    incidence,
                    final_tile: cur,
                });
            }
            if steps >= max_steps {
                return Err(DynamicsError::MaxSteps(max_steps));
            }
            let (i, img) = self.step(&cur, j)?;
            path.push(i);
            incidence[i] += 1;
            net = self.maps[i].as_ref().unwrap().compose(&net);
            cur = img;
            steps += 1;
        }
    }

    /// Builds the dressed subdomain on `sub_atoms` whose maps are the
    /// first-return isometries induced by this domain's dynamics. Also
    /// returns the orbit records (paths, incidence columns).
    pub fn induce(
        &self,
        sub_atoms: &[Tile],
        labels: Vec<String>,
        j: &ParamInterval,
        max_steps: usize,
    ) -> Result<(DressedDomain, Vec<OrbitRecord>), DynamicsError> {
        let targets = Domain::new(sub_atoms.to_vec());
        let records: Vec<Result<OrbitRecord, DynamicsError>> = sub_atoms
            .par_iter()
            .map(|a| self.orbit(a, &targets, j, max_steps, 1))
            .collect();
        let records = records.into_iter().collect::<Result<Vec<_>, _>>()?;
        let maps = records.iter().map(|r| Some(r.net.clone())).collect();
        let dd = DressedDomain::with_axes(
            Domain::new(sub_atoms.to_vec()),
            sub_atoms.to_vec(),
            maps,
            labels,
            vec![None; sub_atoms.len()],
            j.clone(),
            None,
        )?;
        Ok((dd, records))
    }
}

/// The outcome of iterating a tile to its first return or destination.
#[derive(Clone)]
pub struct OrbitRecord {
    /// Atom indices visited, in order.
    pub path: Vec<usize>,
    /// Cumulative isometry: final tile = net(initial tile).
    pub net: Isometry,
    pub steps: usize,
    /// Visit count per atom of the parent domain.
    pub incidence: Vec<u64>,
    pub final_tile: Tile,
}

impl fmt::Debug for OrbitRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "OrbitRecord {{ steps: {}, path: {:?}, incidence: {:?} }}",
            self.steps, self.path, self.incidence
        )
    }
}

/// ⌈log_β(h/l)⌉ certified over the whole interval: the unique k with
/// β^k l ≤ h < β^{k-1} l throughout `j`. This is the strip level count:
/// the number of trapezoid generations before the cap closes the tiling.
pub fn ceil_log_beta(
    l: &SPoly,
    h: &SPoly,
    j: &ParamInterval,
) -> Result<i64, DynamicsError> {
    use crate::algebra::affine_nonneg_on_interval as nonneg;
    if !nonneg(h, j, true)? || !nonneg(l, j, true)? {
        return Err(DynamicsError::ParameterRange(
            "l and h must be positive".into(),
        ));
    }
    const MAX: i64 = 200;
    for k in 0..=MAX {
        let upper = &l.scale(&QSqrt2::beta_pow(k - 1)) - h;
        let lower = h - &l.scale(&QSqrt2::beta_pow(k));
        if nonneg(&upper, j, true)? && nonneg(&lower, j, false)? {
            return Ok(k);
        }
    }
    Err(DynamicsError::BifurcationStraddle(
        "h/l is not confined to a single interval [β^k, β^{k-1})".into(),
    ))
}

/// The prototype families of parametric dressed domains.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Prototype {
    BaseTriangle,
    /// The strip is a tiling only: its atoms carry reflection axes but no
    /// maps of their own.
    Strip,
    Pencil,
    FringedMinus,
    FringedPlus,
    DoubleStrip(i8),
    Arrowhead,
}

/// The parametric dressed rhombus: span of side 2αω and vertex angle π/4,
/// three atoms, each moved by a clockwise π/4 rotation followed by a
/// parameter-dependent vertical translation.
pub fn rhombus_map(j: &ParamInterval) -> Result<DressedDomain, DynamicsError> {
    let om = QSqrt2::omega();
    let al = QSqrt2::alpha();
    let be = QSqrt2::beta();
    let w = |v: i64| con(QSqrt2::from_int(v));
    let cw = con(om.clone());
    let span = Tile::new(
        vec![(0, cw.clone()), (1, cw.clone()), (4, cw.clone()), (5, cw.clone())],
        j.clone(),
    )?;
    // ±(1 + 2α) ∓ αβ s and ±1 ± αβ s edge offsets of the three atoms.
    let ab = &al * &be;
    let a1 = Tile::new(
        vec![
            (0, cw.clone()),
            (2, SPoly::affine(QSqrt2::from_int(-1) - &(&al + &al), ab.clone())),
            (5, cw.clone()),
        ],
        j.clone(),
    )?;
    let a2 = Tile::new(
        vec![
            (0, cw.clone()),
            (1, cw.clone()),
            (2, SPoly::affine(QSqrt2::one(), ab.clone())),
            (4, cw.clone()),
            (5, cw.clone()),
            (6, SPoly::affine(QSqrt2::one() + &(&al + &al), -&ab)),
        ],
        j.clone(),
    )?;
    let a3 = Tile::new(
        vec![
            (1, cw.clone()),
            (4, cw.clone()),
            (6, SPoly::affine(QSqrt2::from_int(-1), -&ab)),
        ],
        j.clone(),
    )?;
    let _ = w;
    let two_beta = &be + &be;
    let rho = |c0: QSqrt2, c1: QSqrt2| {
        Some(Isometry::canonical(
            false,
            7,
            SPoly::zero(),
            SPoly::affine(c0, c1),
        ))
    };
    let maps = vec![
        rho(QSqrt2::from_int(6) + &(&al + &al), -&two_beta),
        rho(QSqrt2::from_int(2), -&two_beta),
        rho(-&(&om + &om), -&two_beta),
    ];
    DressedDomain::new(
        Domain::single(span),
        vec![a1, a2, a3],
        maps,
        vec!["R1".into(), "R2".into(), "R3".into()],
        j.clone(),
    )
}

/// The strip tiles in strip coordinates (origin on the midline, at
/// distance h to the right of the vertical edge), in order along the
/// midline, left to right.
fn strip_rows(
    l: &SPoly,
    h: &SPoly,
    jn: i64,
    j: &ParamInterval,
) -> Result<Vec<Tile>, DynamicsError> {
    if jn < 2 {
        return Err(DynamicsError::ParameterRange(format!(
            "a strip needs at least four tiles (J >= 2, got J = {jn})"
        )));
    }
    let bp = QSqrt2::beta_pow;
    let al = QSqrt2::alpha();
    let om = QSqrt2::omega();
    let be = QSqrt2::beta();
    let mut tiles = Vec::new();
    let sign = |k: i64| if k % 2 == 0 { 1 } else { -1 };
    // Interior trapezoid/rhombus pairs.
    for jj in 1..=jn - 2 {
        let p1 = &l.scale(&bp(jj)) - &h.scale(&be);
        let p2 = &l.scale(&bp(jj)) - &h.scale(&om);
        let rot = if jj % 2 == 0 { 4 } else { 0 };
        let dy = (&l.scale(&bp(jj)) - &h.scale(&al)).scale(&QSqrt2::from_int(sign(jj - 1)));
        tiles.push(put(4, &[p1, p2], rot, &-&l.scale(&bp(jj - 1)), &dy, j)?);
        let rot = if jj % 2 == 0 { 0 } else { 7 };
        tiles.push(put(
            3,
            &[h.clone()],
            rot,
            &-&l.scale(&(&al * &bp(jj))),
            &SPoly::zero(),
            j,
        )?);
    }
    // The four cap tiles at the right end.
    let even = jn % 2 == 0;
    let p = &l.scale(&bp(jn - 1)) - &h.scale(&be);
    let dy = (&l.scale(&bp(jn - 1)) - &h.scale(&al)).scale(&QSqrt2::from_int(sign(jn)));
    tiles.push(put(
        1,
        &[p],
        if even { 0 } else { 4 },
        &-&l.scale(&bp(jn - 2)),
        &dy,
        j,
    )?);
    let p1 = &l.scale(&(&al * &bp(jn - 1))) - &h.scale(&(&al * &be));
    let p2 = h + h;
    let dx = -&(&l.scale(&(&al * &bp(jn - 1))) + &h.scale(&be));
    let dy = h.scale(&QSqrt2::from_int(sign(jn - 1)));
    tiles.push(put(8, &[p1, p2], if even { 1 } else { 6 }, &dx, &dy, j)?);
    let p = &l.scale(&bp(jn)) - &h.scale(&be);
    let dy = (&l.scale(&bp(jn)) - &h.scale(&al)).scale(&QSqrt2::from_int(sign(jn - 1)));
    tiles.push(put(
        1,
        &[p],
        if even { 4 } else { 0 },
        &-&l.scale(&bp(jn - 1)),
        &dy,
        j,
    )?);
    let p = &l.scale(&(&al * &bp(jn - 1))) - &h.scale(&al);
    let dy = (&l.scale(&(&al * &bp(jn - 1))) - &h.scale(&om))
        .scale(&QSqrt2::from_int(sign(jn - 1)));
    tiles.push(put(7, &[p], if even { 3 } else { 6 }, &-h, &dy, j)?);
    Ok(tiles)
}

/// The strip span in strip coordinates.
fn strip_span(l: &SPoly, h: &SPoly, j: &ParamInterval) -> Result<Tile, DynamicsError> {
    let al = QSqrt2::alpha();
    let be = QSqrt2::beta();
    put(
        12,
        &[(l - h).scale(&al), h + h],
        0,
        &(&h.scale(&be) - &l.scale(&al)),
        &-h,
        j,
    )
}

/// Constructs the prototype dressed domain of the given family with size
/// parameters l, h over the interval `j`.
pub fn prototype(
    kind: Prototype,
    l: &SPoly,
    h: &SPoly,
    j: &ParamInterval,
) -> Result<DressedDomain, DynamicsError> {
    match kind {
        Prototype::BaseTriangle => base_triangle(l, h, j),
        Prototype::Strip => strip(l, h, j),
        Prototype::Pencil => pencil(l, h, j),
        Prototype::FringedMinus => fringed_triangle(false, l, h, j),
        Prototype::FringedPlus => fringed_triangle(true, l, h, j),
        Prototype::DoubleStrip(nu) => double_strip(nu, l, h, j),
        Prototype::Arrowhead => arrowhead(l, h, j),
    }
}

fn base_triangle(
    l: &SPoly,
    h: &SPoly,
    j: &ParamInterval,
) -> Result<DressedDomain, DynamicsError> {
    use crate::algebra::affine_nonneg_on_interval as nonneg;
    let al = QSqrt2::alpha();
    let be = QSqrt2::beta();
    let ab = &al * &be;
    if !nonneg(l, j, true)? || !nonneg(h, j, false)? || !nonneg(&(&l.scale(&al) - h), j, false)? {
        return Err(DynamicsError::ParameterRange(
            "base triangle needs l > 0 and 0 <= h <= alpha l".into(),
        ));
    }
    let span = put(1, &[&l.scale(&al) + &h.scale(&be)], 7, &SPoly::zero(), &SPoly::zero(), j)?;
    let two_l = l + l;
    // (label, Q#, params, placement rot, translation, destination rot)
    let rows: Vec<(&str, u8, Vec<SPoly>, i64, (SPoly, SPoly), i64)> = vec![
        (
            "B1",
            1,
            vec![&l.scale(&ab) - &h.scale(&be)],
            2,
            (&h.scale(&be) - &l.scale(&ab), -&(&l.scale(&al) + h)),
            2,
        ),
        (
            "B2",
            7,
            vec![&two_l - &h.scale(&al)],
            0,
            (&h.scale(&al) - &two_l, -&(h + h)),
            3,
        ),
        (
            "B3",
            6,
            vec![&l.scale(&al) - h, h.clone()],
            0,
            (-h, -h),
            2,
        ),
        ("B4", 7, vec![h.scale(&al)], 5, (&h.scale(&al) - &two_l, SPoly::zero()), 1),
        ("B5", 1, vec![h.scale(&be)], 7, (-&two_l, SPoly::zero()), 0),
    ];
    let mut atoms = Vec::new();
    let mut maps = Vec::new();
    let mut labels = Vec::new();
    for (name, k, params, rot, (dx, dy), dest_rot) in rows {
        // Boundary parameter values delete zero-area rows.
        let degenerate = params.iter().any(|p| p.is_zero());
        let tile = match put(k, &params, rot, &dx, &dy, j) {
            Ok(t) => t,
            Err(e) => {
                if degenerate {
                    continue;
                }
                return Err(e);
            }
        };
        if tile.area().is_zero() {
            continue;
        }
        // The anchor lies on the atom's symmetry line, so the atom map is
        // T_{U1 d - R_n d} R_n with d the placement translation.
        let d = SPoint::new(dx, dy);
        let u1d = Isometry::reflection(Direction::integer(1)).apply_point(&d);
        let rnd = Isometry::rotation(dest_rot).apply_point(&d);
        let shift = &u1d - &rnd;
        let g = Isometry::canonical(false, dest_rot, shift.x, shift.y);
        atoms.push(tile);
        maps.push(Some(g));
        labels.push(name.to_string());
    }
    DressedDomain::new(
        Domain::single(span),
        atoms,
        maps,
        labels,
        j.clone(),
    )
}

fn strip(l: &SPoly, h: &SPoly, j: &ParamInterval) -> Result<DressedDomain, DynamicsError> {
    let jn = ceil_log_beta(l, h, j)?;
    let atoms = strip_rows(l, h, jn, j)?;
    let span = strip_span(l, h, j)?;
    let n = atoms.len();
    let labels = (1..=n).map(|k| format!("S{k}")).collect::<Vec<_>>();
    let mut axes = Vec::new();
    for (t, name) in atoms.iter().zip(&labels) {
        axes.push(Some(assign_axis(t, j, None, name)?));
    }
    DressedDomain::with_axes(
        Domain::single(span),
        atoms,
        vec![None; n],
        labels,
        axes,
        j.clone(),
        None,
    )
}

/// Builds maps rho_i = global ∘ H_i from assigned per-atom reflections.
fn involution_maps(
    atoms: &[Tile],
    axes: &[Direction],
    global: &Isometry,
) -> Vec<Option<Isometry>> {
    atoms
        .iter()
        .zip(axes)
        .map(|(t, axis)| Some(global.compose(&Isometry::reflection_about(*axis, &t.centroid()))))
        .collect()
}

fn pencil(l: &SPoly, h: &SPoly, j: &ParamInterval) -> Result<DressedDomain, DynamicsError> {
    let al = QSqrt2::alpha();
    let be = QSqrt2::beta();
    let om = QSqrt2::omega();
    let ab = &al * &be;
    // Strip with first parameter contracted by β.
    let sub_l = l.scale(&be);
    let jn = ceil_log_beta(&sub_l, h, j)?;
    let strip_tiles = strip_rows(&sub_l, h, jn, j)?;
    let span = put(6, &[l - h, h.clone()], 0, &SPoly::zero(), &SPoly::zero(), j)?;
    let mut atoms = vec![
        put(2, &[h.clone()], 0, &SPoly::zero(), &SPoly::zero(), j)?,
        put(
            9,
            &[&l.scale(&(&ab * &QSqrt2::ratio(1, 2))) - h, h.clone()],
            0,
            &-l,
            &SPoly::zero(),
            j,
        )?,
        put(
            7,
            &[h.scale(&al)],
            1,
            &-&(&l.scale(&ab) + &h.scale(&om)),
            &-h,
            j,
        )?,
        put(1, &[h.scale(&be)], 3, &-&(&l.scale(&ab) + h), &-h, j)?,
        put(3, &[h.clone()], 7, &-&l.scale(&ab), &SPoly::zero(), j)?,
    ];
    let u0 = Isometry::reflection(Direction::integer(0));
    for t in &strip_tiles {
        atoms.push(u0.apply_tile(t)?);
    }
    let n = atoms.len();
    let mut labels: Vec<String> = (0..5).map(|k| format!("P{k}")).collect();
    labels.extend((5..n).map(|k| format!("P{k}")));
    // Assigned axes: the square P0 along u7, the hexagon P1 along u2.
    let mut axes = Vec::new();
    for (i, (t, name)) in atoms.iter().zip(&labels).enumerate() {
        let pref = match i {
            0 => Some(6),
            1 => Some(4),
            _ => None,
        };
        axes.push(assign_axis(t, j, pref, name)?);
    }
    let maps = involution_maps(&atoms, &axes, &u0);
    DressedDomain::with_axes(
        Domain::single(span),
        atoms,
        maps,
        labels,
        axes.into_iter().map(Some).collect(),
        j.clone(),
        None,
    )
}

fn fringed_triangle(
    plus: bool,
    l: &SPoly,
    h: &SPoly,
    j: &ParamInterval,
) -> Result<DressedDomain, DynamicsError> {
    let al = QSqrt2::alpha();
    let be = QSqrt2::beta();
    let om = QSqrt2::omega();
    let jn = ceil_log_beta(l, h, j)?;
    let strip_tiles = strip_rows(l, h, jn, j)?;
    let (span, heads, strip_rot, axis_y, prefs): (
        Tile,
        Vec<Tile>,
        i64,
        SPoly,
        Vec<Option<i64>>,
    ) = if !plus {
        let span = put(
            1,
            &[l - &h.scale(&be)],
            2,
            &(&h.scale(&al) - l),
            &-&l.scale(&be),
            j,
        )?;
        let heads = vec![
            put(1, &[&l.scale(&be) + &h.scale(&be)], 5, h, &-h, j)?,
            put(
                7,
                &[&l.scale(&al) - &h.scale(&(&al * &om))],
                3,
                &-h,
                &(&h.scale(&om) - &l.scale(&al)),
                j,
            )?,
        ];
        (span, heads, 2, -&l.scale(&be), vec![None, None])
    } else {
        let threeal = QSqrt2::from_int(3) + &al;
        let om2 = &om * &om;
        let span = put(
            1,
            &[&l.scale(&om2) + &h.scale(&be)],
            2,
            &-&(l + h).scale(&al),
            &l.scale(&al),
            j,
        )?;
        let heads = vec![
            put(
                1,
                &[&l.scale(&om) - &h.scale(&be)],
                5,
                &(&l.scale(&threeal) - h),
                &(&l.scale(&(QSqrt2::one() + &(&al + &al))) + h),
                j,
            )?,
            put(
                7,
                &[&l.scale(&(&al * &om2)) - &h.scale(&al)],
                3,
                &(&l.scale(&threeal) - h),
                &(&h.scale(&om) - &l.scale(&threeal)),
                j,
            )?,
            put(2, &[h.clone()], 7, &-&l.scale(&al), &l.scale(&al), j)?,
            put(
                10,
                &[h.clone(), l - h],
                7,
                &-&l.scale(&(&al * &QSqrt2::ratio(1, 2))),
                &l.scale(&(&al * &QSqrt2::ratio(1, 2))),
                j,
            )?,
            put(2, &[h.clone()], 7, &SPoly::zero(), &SPoly::zero(), j)?,
            put(
                4,
                &[&l.scale(&om) - &h.scale(&be), &l.scale(&om) - &h.scale(&om)],
                7,
                &(&l.scale(&threeal) - h),
                &-&(l + h),
                j,
            )?,
            put(3, &[h.clone()], 7, l, &-l, j)?,
        ];
        (
            span,
            heads,
            3,
            l.scale(&al),
            vec![None, None, Some(4), Some(6), Some(4), None, None],
        )
    };
    let rot = Isometry::rotation(strip_rot);
    let mut atoms = heads;
    let mut all_prefs = prefs;
    for t in &strip_tiles {
        atoms.push(rot.apply_tile(t)?);
        all_prefs.push(None);
    }
    let n = atoms.len();
    let labels: Vec<String> = (1..=n).map(|k| format!("T{k}")).collect();
    let mut axes = Vec::new();
    for ((t, name), pref) in atoms.iter().zip(&labels).zip(&all_prefs) {
        axes.push(assign_axis(t, j, *pref, name)?);
    }
    let global = Isometry::reflection_about(
        Direction::integer(0),
        &SPoint::new(SPoly::zero(), axis_y),
    );
    let maps = involution_maps(&atoms, &axes, &global);
    DressedDomain::with_axes(
        Domain::single(span),
        atoms,
        maps,
        labels,
        axes.into_iter().map(Some).collect(),
        j.clone(),
        None,
    )
}

fn double_strip(
    nu: i8,
    l: &SPoly,
    h: &SPoly,
    j: &ParamInterval,
) -> Result<DressedDomain, DynamicsError> {
    if nu != 1 && nu != -1 {
        return Err(DynamicsError::ParameterRange("nu must be +1 or -1".into()));
    }
    let om = QSqrt2::omega();
    let kk = ceil_log_beta(l, h, j)? + 1;
    if kk < 3 {
        return Err(DynamicsError::ParameterRange(format!(
            "a double strip needs K >= 3 (got K = {kk})"
        )));
    }
    let left = strip_rows(&l.scale(&om), h, kk, j)?;
    let right = strip_rows(l, h, kk - 1, j)?;
    let u2 = Isometry::reflection(Direction::integer(2));
    let span = Tile::new(
        vec![
            (1, l - h),
            (2, h.clone()),
            (3, &l.scale(&om) - h),
            (6, h.clone()),
        ],
        j.clone(),
    )?;
    let mut atoms = Vec::new();
    let mut labels = Vec::new();
    let mut prefs: Vec<Option<i64>> = Vec::new();
    for (k, t) in left.iter().enumerate() {
        atoms.push(t.clone());
        labels.push(format!("D''{}", k + 1));
        prefs.push(None);
    }
    atoms.push(put(2, &[h.clone()], 0, &SPoly::zero(), &SPoly::zero(), j)?);
    labels.push("D0".into());
    prefs.push(Some(if nu == 1 { 2 } else { 6 }));
    for (k, t) in right.iter().enumerate().rev() {
        atoms.push(u2.apply_tile(t)?);
        labels.push(format!("D'{}", k + 1));
        prefs.push(None);
    }
    let mut axes = Vec::new();
    for ((t, name), pref) in atoms.iter().zip(&labels).zip(&prefs) {
        axes.push(assign_axis(t, j, *pref, name)?);
    }
    let global = Isometry::reflection_about(
        Direction::integer(2),
        &SPoint::new(-l, SPoly::zero()),
    );
    let maps = involution_maps(&atoms, &axes, &global);
    DressedDomain::with_axes(
        Domain::single(span),
        atoms,
        maps,
        labels,
        axes.into_iter().map(Some).collect(),
        j.clone(),
        None,
    )
}

fn arrowhead(l: &SPoly, h: &SPoly, j: &ParamInterval) -> Result<DressedDomain, DynamicsError> {
    use crate::algebra::affine_nonneg_on_interval as nonneg;
    let al = QSqrt2::alpha();
    let be = QSqrt2::beta();
    let om = QSqrt2::omega();
    if !nonneg(&(l - h), j, true)? || !nonneg(h, j, true)? {
        return Err(DynamicsError::ParameterRange(
            "arrowhead needs 0 < h < l".into(),
        ));
    }
    let lmh = l - h;
    let tri = put(
        1,
        &[lmh.scale(&om)],
        2,
        &-&lmh.scale(&al),
        &SPoly::zero(),
        j,
    )?;
    let wing = Isometry::reflection(Direction::from_doubled(5)).apply_tile(&tri)?;
    let overlap = intersect_tiles(&tri, &wing, j)?;
    let span_area = &(&tri.area() + &wing.area()) - &overlap.area();
    // Below the ratio β the exit tile shrinks to a pentagon and a third
    // atom appears.
    let narrow = nonneg(&(&l.scale(&QSqrt2::beta_pow(1)) - h), j, true)?;
    let (atoms, labels): (Vec<Tile>, Vec<&str>) = if narrow {
        (
            vec![
                put(1, &[lmh.scale(&om)], 2, &-&lmh.scale(&al), &SPoly::zero(), j)?,
                put(
                    13,
                    &[lmh.scale(&al), h + h],
                    5,
                    &-&lmh.scale(&be),
                    &lmh,
                    j,
                )?,
                put(
                    1,
                    &[l - &h.scale(&om)],
                    4,
                    &-&l.scale(&al),
                    &h.scale(&al),
                    j,
                )?,
            ],
            vec!["A1", "A2", "A3"],
        )
    } else {
        (
            vec![
                put(1, &[lmh.scale(&om)], 2, &-&lmh.scale(&al), &SPoly::zero(), j)?,
                put(1, &[lmh.clone()], 4, &-&lmh.scale(&al), &SPoly::zero(), j)?,
            ],
            vec!["A1", "A2"],
        )
    };
    let rho1 = Isometry::rotation(5);
    let rho3 = Isometry::canonical(false, 1, l + l, l + l);
    let maps = if narrow {
        vec![Some(rho1), None, Some(rho3)]
    } else {
        vec![Some(rho1), None]
    };
    let n = atoms.len();
    DressedDomain::with_axes(
        Domain::new(vec![tri, wing]),
        atoms,
        maps,
        labels.into_iter().map(String::from).collect(),
        vec![None; n],
        j.clone(),
        Some(span_area),
    )
}

/// Everything the arrowhead transfer map produces: the entrance partition,
/// the per-atom transfer isometries and (A1, A3) visit counts, and the
/// periodic octagons with their periods.
pub struct ArrowheadTransfer {
    pub entrance: Vec<Tile>,
    pub isometries: Vec<Isometry>,
    pub counts: Vec<[u64; 2]>,
    pub octagons: Vec<Tile>,
    pub octagon_periods: Vec<u64>,
}

/// Computes the transfer map of the arrowhead A(l, h) by direct iteration:
/// each entrance atom is carried through A1/A3 until it lands in the exit
/// tile. Also iterates the inscribed periodic octagons to their exact
/// periods.
pub fn arrowhead_transfer(
    l: &SPoly,
    h: &SPoly,
    j: &ParamInterval,
    max_steps: usize,
) -> Result<ArrowheadTransfer, DynamicsError> {
    use crate::algebra::affine_nonneg_on_interval as nonneg;
    let al = QSqrt2::alpha();
    let be = QSqrt2::beta();
    let om = QSqrt2::omega();
    let dd = arrowhead(l, h, j)?;
    let narrow = nonneg(&(&l.scale(&be) - h), j, true)?;
    let entrance: Vec<Tile> = if narrow {
        let count = ceil_log_beta(l, h, j)?;
        let shift = Isometry::canonical(false, 0, l.clone(), l.clone());
        strip_rows(l, h, count, j)?
            .iter()
            .map(|t| shift.apply_tile(t).map_err(DynamicsError::from))
            .collect::<Result<Vec<_>, _>>()?
    } else {
        let lmh = l - h;
        vec![
            put(1, &[lmh.scale(&be)], 0, &SPoly::zero(), &lmh.scale(&al), j)?,
            put(7, &[lmh.scale(&al)], 6, &lmh, &lmh.scale(&om), j)?,
        ]
    };
    let exit_index = dd.label_index("A2").unwrap();
    let exit = Domain::single(dd.atoms()[exit_index].clone());
    let recs: Vec<Result<OrbitRecord, DynamicsError>> = entrance
        .par_iter()
        .map(|e| dd.return_orbit(e, &exit, j, max_steps))
        .collect();
    let recs = recs.into_iter().collect::<Result<Vec<_>, _>>()?;
    let mut isometries = Vec::new();
    let mut counts = Vec::new();
    for r in &recs {
        isometries.push(r.net.clone());
        let a1 = r.incidence[0];
        let a3 = if r.incidence.len() > 2 { r.incidence[2] } else { 0 };
        counts.push([a1, a3]);
    }
    // Periodic octagons Π^(k) of size β^k l − h, nested along the
    // arrowhead's spine.
    let mut octagons = Vec::new();
    let mut octagon_periods = Vec::new();
    let mut k = 0i64;
    loop {
        let size = &l.scale(&QSqrt2::beta_pow(k)) - h;
        if !nonneg(&size, j, true)? {
            break;
        }
        let (gx, gy) = if k % 2 == 0 {
            (
                -&l.scale(&(&al * &(QSqrt2::one() - &QSqrt2::beta_pow(k)))),
                SPoly::zero(),
            )
        } else {
            (-&l.scale(&al), l.scale(&(&al * &QSqrt2::beta_pow(k))))
        };
        let oct = put(5, &[size], 0, &gx, &gy, j)?;
        let rec = dd.periodic_orbit(&oct, j, max_steps)?;
        octagons.push(oct);
        octagon_periods.push(rec.steps as u64);
        k += 1;
    }
    Ok(ArrowheadTransfer {
        entrance,
        isometries,
        counts,
        octagons,
        octagon_periods,
    })
}

/// The parent piecewise isometry a tiling plan iterates.
#[derive(Clone, Debug)]
pub enum PlanParent {
    Rhombus,
    Prototype { kind: Prototype, l: SPoly, h: SPoly },
}

/// A named region that source tiles return to, with the placement of its
/// span and the reflection axis used to locate destination tiles.
#[derive(Clone, Debug)]
pub struct PlanDomain {
    pub name: String,
    pub shape: ShapeKind,
    pub params: Vec<SPoly>,
    pub rot: i64,
    pub trans: (SPoly, SPoly),
}

/// Where a plan row's orbit is required to end.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PlanDest {
    /// Mirror image (about the domain's symmetry axis) of the named source
    /// tile when the source lies outside the domain, or of the row's own
    /// source when it lies inside (the usual first-return case; the name
    /// then records the atom label the arrival assumes in the child).
    Mirror { tile: String, domain: String },
    /// The whole span of the named domain, reached as a single tile.
    Whole { domain: String },
    /// The orbit must return to the source tile itself (a periodic tile).
    Periodic,
}

/// One row of a tiling plan: a source tile placement and its assigned
/// destination with the net rotation to verify.
#[derive(Clone, Debug)]
pub struct PlanRow {
    pub name: String,
    pub q_kind: u8,
    pub params: Vec<SPoly>,
    pub rot: i64,
    pub trans: (SPoly, SPoly),
    pub dest: PlanDest,
    pub dest_rot: i64,
}

/// A complete tiling plan: parent map, validity interval, return domains,
/// and the source rows whose orbits certify the induced tiling.
#[derive(Clone, Debug)]
pub struct TilingPlan {
    pub title: String,
    pub interval: ParamInterval,
    pub parent: PlanParent,
    pub domains: Vec<PlanDomain>,
    pub rows: Vec<PlanRow>,
}

/// Outcome of iterating one plan row.
#[derive(Clone, Debug)]
pub struct RowReport {
    pub name: String,
    pub ok: bool,
    pub message: String,
    pub steps: usize,
    pub incidence: Vec<u64>,
    pub path: Vec<usize>,
}

/// Outcome of validating a whole plan: per-row verdicts plus the area
/// accounting that certifies the orbits tile the parent span.
#[derive(Clone, Debug)]
pub struct PlanReport {
    pub title: String,
    pub rows: Vec<RowReport>,
    pub parent_labels: Vec<String>,
    pub parent_area: SPoly,
    pub covered_area: SPoly,
    pub complete: bool,
}

impl PlanReport {
    pub fn all_rows_ok(&self) -> bool {
        self.rows.iter().all(|r| r.ok)
    }

    pub fn ok(&self) -> bool {
        self.all_rows_ok() && self.complete
    }
}

fn plan_err(msg: impl Into<String>) -> DynamicsError {
    DynamicsError::PlanParse(msg.into())
}

/// Splits a plan line into tokens, keeping bracketed literals intact.
fn plan_tokens(line: &str) -> Result<Vec<String>, DynamicsError> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut depth = 0usize;
    for ch in line.chars() {
        match ch {
            '[' => {
                depth += 1;
                cur.push(ch);
            }
            ']' => {
                if depth == 0 {
                    return Err(plan_err(format!("unbalanced ']' in {line:?}")));
                }
                depth -= 1;
                cur.push(ch);
            }
            c if c.is_whitespace() && depth == 0 => {
                if !cur.is_empty() {
                    out.push(std::mem::take(&mut cur));
                }
            }
            c => cur.push(c),
        }
    }
    if depth != 0 {
        return Err(plan_err(format!("unbalanced '[' in {line:?}")));
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    Ok(out)
}

fn parse_spoly(tok: &str) -> Result<SPoly, DynamicsError> {
    tok.parse::<SPoly>()
        .map_err(|e| plan_err(format!("bad polynomial literal {tok:?}: {e}")))
}

fn parse_qsqrt2(tok: &str) -> Result<QSqrt2, DynamicsError> {
    let inner = tok
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| plan_err(format!("expected bracketed literal, got {tok:?}")))?;
    inner
        .parse::<QSqrt2>()
        .map_err(|e| plan_err(format!("bad field literal {tok:?}: {e}")))
}

fn parse_rot(tok: &str) -> Result<i64, DynamicsError> {
    tok.strip_prefix('R')
        .and_then(|r| r.parse::<i64>().ok())
        .ok_or_else(|| plan_err(format!("expected rotation R<n>, got {tok:?}")))
}

impl TilingPlan {
    /// Parses the structured-text plan format: one `title`, `interval`,
    /// and `parent` line, then `domain` and `row` lines. `#` starts a
    /// comment.
    pub fn parse(text: &str) -> Result<TilingPlan, DynamicsError> {
        let mut title = None;
        let mut interval = None;
        let mut parent = None;
        let mut domains = Vec::new();
        let mut rows = Vec::new();
        for raw in text.lines() {
            let line = match raw.split_once('#') {
                Some((before, _)) => before,
                None => raw,
            };
            if line.trim().is_empty() {
                continue;
            }
            let toks = plan_tokens(line)?;
            match toks[0].as_str() {
                "title" => {
                    title = Some(toks[1..].join(" "));
                }
                "interval" => {
                    if toks.len() != 4 {
                        return Err(plan_err("interval takes: kind [lo] [hi]"));
                    }
                    let lo = parse_qsqrt2(&toks[2])?;
                    let hi = parse_qsqrt2(&toks[3])?;
                    let (lc, hc) = match toks[1].as_str() {
                        "open" => (false, false),
                        "closed" => (true, true),
                        "openclosed" => (false, true),
                        "closedopen" => (true, false),
                        "point" => (true, true),
                        k => return Err(plan_err(format!("unknown interval kind {k:?}"))),
                    };
                    interval = Some(ParamInterval::new(lo, hi, lc, hc));
                }
                "parent" => {
                    let name = toks
                        .get(1)
                        .ok_or_else(|| plan_err("parent needs a family name"))?;
                    parent = Some(if name == "rhombus" {
                        PlanParent::Rhombus
                    } else {
                        let kind = match name.as_str() {
                            "base_triangle" => Prototype::BaseTriangle,
                            "pencil" => Prototype::Pencil,
                            "fringed_minus" => Prototype::FringedMinus,
                            "fringed_plus" => Prototype::FringedPlus,
                            "double_strip_minus" => Prototype::DoubleStrip(-1),
                            "double_strip_plus" => Prototype::DoubleStrip(1),
                            other => {
                                return Err(plan_err(format!("unknown parent family {other:?}")))
                            }
                        };
                        if toks.len() != 4 {
                            return Err(plan_err("parent family needs [l] [h]"));
                        }
                        PlanParent::Prototype {
                            kind,
                            l: parse_spoly(&toks[2])?,
                            h: parse_spoly(&toks[3])?,
                        }
                    });
                }
                "domain" => {
                    // domain <name> <shape> [p]... R<n> [dx] [dy]
                    if toks.len() < 6 {
                        return Err(plan_err(format!("short domain line {line:?}")));
                    }
                    let name = toks[1].clone();
                    let shape = match toks[2].as_str() {
                        "AH" => ShapeKind::Arrowhead,
                        q => ShapeKind::parse(q)
                            .map_err(|_| plan_err(format!("unknown shape {q:?}")))?,
                    };
                    let arity = shape.arity();
                    if toks.len() != 6 + arity {
                        return Err(plan_err(format!("domain {name}: wrong field count")));
                    }
                    let params = toks[3..3 + arity]
                        .iter()
                        .map(|t| parse_spoly(t))
                        .collect::<Result<Vec<_>, _>>()?;
                    let rot = parse_rot(&toks[3 + arity])?;
                    let dx = parse_spoly(&toks[4 + arity])?;
                    let dy = parse_spoly(&toks[5 + arity])?;
                    domains.push(PlanDomain {
                        name,
                        shape,
                        params,
                        rot,
                        trans: (dx, dy),
                    });
                }
                "row" => {
                    // row <name> Q<k> [p]... R<n> [dx] [dy] -> <dest> R<m>
                    let arrow = toks
                        .iter()
                        .position(|t| t == "->")
                        .ok_or_else(|| plan_err(format!("row without '->' in {line:?}")))?;
                    if toks.len() < arrow + 2 {
                        return Err(plan_err(format!("short row destination in {line:?}")));
                    }
                    let name = toks
                        .get(1)
                        .ok_or_else(|| plan_err("row needs a name"))?
                        .clone();
                    let q_kind = match ShapeKind::parse(&toks[2]) {
                        Ok(ShapeKind::Q(k)) => k,
                        _ => return Err(plan_err(format!("row {name}: bad shape {:?}", toks[2]))),
                    };
                    let arity = ShapeKind::Q(q_kind).arity();
                    if arrow != 6 + arity {
                        return Err(plan_err(format!("row {name}: wrong field count")));
                    }
                    let params = toks[3..3 + arity]
                        .iter()
                        .map(|t| parse_spoly(t))
                        .collect::<Result<Vec<_>, _>>()?;
                    let rot = parse_rot(&toks[3 + arity])?;
                    let dx = parse_spoly(&toks[4 + arity])?;
                    let dy = parse_spoly(&toks[5 + arity])?;
                    let dest_rot = parse_rot(toks.last().unwrap())?;
                    let dest_toks = &toks[arrow + 1..toks.len() - 1];
                    let dest = match dest_toks {
                        [s] if s == "self" => PlanDest::Periodic,
                        [at, dom] if at == "@" => PlanDest::Whole {
                            domain: dom.clone(),
                        },
                        [tile, at, dom] if at == "@" => PlanDest::Mirror {
                            tile: tile.clone(),
                            domain: dom.clone(),
                        },
                        _ => {
                            return Err(plan_err(format!(
                                "row {name}: bad destination {dest_toks:?}"
                            )))
                        }
                    };
                    rows.push(PlanRow {
                        name,
                        q_kind,
                        params,
                        rot,
                        trans: (dx, dy),
                        dest,
                        dest_rot,
                    });
                }
                other => return Err(plan_err(format!("unknown directive {other:?}"))),
            }
        }
        Ok(TilingPlan {
            title: title.ok_or_else(|| plan_err("missing title"))?,
            interval: interval.ok_or_else(|| plan_err("missing interval"))?,
            parent: parent.ok_or_else(|| plan_err("missing parent"))?,
            domains,
            rows,
        })
    }
}

impl std::str::FromStr for TilingPlan {
    type Err = DynamicsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TilingPlan::parse(s)
    }
}

/// Symmetry-axis direction (doubled index) of a shape in catalogue frame.
fn shape_axis(shape: ShapeKind) -> Result<i64, DynamicsError> {
    match shape {
        ShapeKind::Q(1) | ShapeKind::Q(2) | ShapeKind::Q(4) => Ok(4),
        ShapeKind::Q(6) => Ok(0),
        ShapeKind::Arrowhead => Ok(5),
        other => Err(plan_err(format!(
            "no symmetry axis on record for {other} domains"
        ))),
    }
}

struct PlacedDomain {
    name: String,
    span: Vec<Tile>,
    mirror: Option<Isometry>,
}

fn place_domain(d: &PlanDomain, j: &ParamInterval) -> Result<PlacedDomain, DynamicsError> {
    let tiles = catalogue(d.shape, &d.params, j)?;
    let span = tiles
        .iter()
        .map(|t| place_tile(t, d.rot, &d.trans.0, &d.trans.1))
        .collect::<Result<Vec<_>, _>>()?;
    let mirror = match shape_axis(d.shape) {
        Ok(base) => {
            let doubled = (base + 2 * d.rot).rem_euclid(16);
            let point = SPoint::new(d.trans.0.clone(), d.trans.1.clone());
            Some(Isometry::reflection_about(
                Direction::from_doubled(doubled),
                &point,
            ))
        }
        Err(_) => None,
    };
    Ok(PlacedDomain {
        name: d.name.clone(),
        span,
        mirror,
    })
}

/// Validates a tiling plan by direct iteration: every source tile must
/// reach its assigned destination tile with the stated net rotation while
/// keeping clear of all destination tiles on the way, periodic tiles must
/// return to themselves, and the swept areas must add up to the area of
/// the parent span.
pub fn validate_plan(plan: &TilingPlan) -> Result<PlanReport, DynamicsError> {
    let j = &plan.interval;
    let parent = match &plan.parent {
        PlanParent::Rhombus => rhombus_map(j)?,
        PlanParent::Prototype { kind, l, h } => prototype(*kind, l, h, j)?,
    };
    let domains = plan
        .domains
        .iter()
        .map(|d| place_domain(d, j))
        .collect::<Result<Vec<_>, _>>()?;
    let find_domain = |name: &str| -> Result<&PlacedDomain, DynamicsError> {
        domains
            .iter()
            .find(|d| d.name == name)
            .ok_or_else(|| plan_err(format!("unknown domain {name:?}")))
    };
    let sources = plan
        .rows
        .iter()
        .map(|r| put(r.q_kind, &r.params, r.rot, &r.trans.0, &r.trans.1, j))
        .collect::<Vec<Result<Tile, DynamicsError>>>();
    let find_source = |name: &str| -> Result<&Tile, DynamicsError> {
        plan.rows
            .iter()
            .zip(&sources)
            .find(|(r, _)| r.name == name)
            .and_then(|(_, t)| t.as_ref().ok())
            .ok_or_else(|| plan_err(format!("unknown source tile {name:?}")))
    };
    // Expected destination tiles, one per non-periodic row.
    let mut expected: Vec<Option<Vec<Tile>>> = Vec::with_capacity(plan.rows.len());
    for (row, src) in plan.rows.iter().zip(&sources) {
        let exp = match (&row.dest, src) {
            (PlanDest::Periodic, _) | (_, Err(_)) => None,
            (PlanDest::Whole { domain }, Ok(_)) => Some(find_domain(domain)?.span.clone()),
            (PlanDest::Mirror { tile, domain }, Ok(src)) => {
                let dom = find_domain(domain)?;
                let mirror = dom.mirror.as_ref().ok_or_else(|| {
                    plan_err(format!("domain {domain:?} has no symmetry axis"))
                })?;
                // Sources are either fully inside a domain span or meet it
                // only along edges, so overlap means containment here.
                let inside = dom.span.iter().any(|outer| !src.disjoint(outer, j));
                let base = if inside { src } else { find_source(tile)? };
                Some(vec![mirror.apply_tile(base)?])
            }
        };
        expected.push(exp);
    }
    let max_steps = 20000;

    let reports: Vec<(RowReport, usize)> = plan
        .rows
        .par_iter()
        .zip(sources.par_iter().zip(expected.par_iter()))
        .map(|(row, (src, exp))| {
            let fail = |msg: String| {
                (
                    RowReport {
                        name: row.name.clone(),
                        ok: false,
                        message: msg,
                        steps: 0,
                        incidence: Vec::new(),
                        path: Vec::new(),
                    },
                    0,
                )
            };
            let src = match src {
                Ok(t) => t,
                Err(e) => return fail(format!("source tile: {e}")),
            };
            if !parent.span().contains_tile(src, j) {
                return fail("source tile not inside the parent span".into());
            }
            match &row.dest {
                PlanDest::Periodic => {
                    match parent.periodic_orbit(src, j, max_steps) {
                        Ok(rec) => {
                            let mut ok = true;
                            let mut message = String::from("periodic");
                            if rec.net.is_reflecting()
                                || i64::from(rec.net.rot()) != row.dest_rot.rem_euclid(8)
                            {
                                ok = false;
                                message = format!(
                                    "net rotation R{} (reflecting: {}), plan says R{}",
                                    rec.net.rot(),
                                    rec.net.is_reflecting(),
                                    row.dest_rot
                                );
                            }
                            let steps = rec.steps;
                            (
                                RowReport {
                                    name: row.name.clone(),
                                    ok,
                                    message,
                                    steps,
                                    incidence: rec.incidence,
                                    path: rec.path,
                                },
                                steps,
                            )
                        }
                        Err(e) => fail(format!("periodic orbit: {e}")),
                    }
                }
                _ => {
                    // The orbit stops on reaching this row's own destination.
                    // Other rows' destinations are fair game in between: in
                    // the tower picture they are covered by the intermediate
                    // tiles of whichever orbit happens to pass through.
                    let exp = exp.as_ref().expect("destination rows have expectations");
                    let targets = Domain::new(exp.clone());
                    match parent.orbit(src, &targets, j, max_steps, 1) {
                        Ok(rec) => {
                            let mut problems = Vec::new();
                            if rec.net.is_reflecting()
                                || i64::from(rec.net.rot()) != row.dest_rot.rem_euclid(8)
                            {
                                problems.push(format!(
                                    "net rotation R{} (reflecting: {}), plan says R{}",
                                    rec.net.rot(),
                                    rec.net.is_reflecting(),
                                    row.dest_rot
                                ));
                            }
                            let arrived = match exp.len() {
                                1 => same_tile(&rec.final_tile, &exp[0]),
                                _ => exp.iter().any(|t| rec.final_tile.inside(t, j)),
                            };
                            if !arrived {
                                problems.push("final tile differs from the destination".into());
                            }
                            let ok = problems.is_empty();
                            let steps = rec.steps;
                            (
                                RowReport {
                                    name: row.name.clone(),
                                    ok,
                                    message: if ok {
                                        format!("reached destination in {steps} steps")
                                    } else {
                                        problems.join("; ")
                                    },
                                    steps,
                                    incidence: rec.incidence,
                                    path: rec.path,
                                },
                                steps,
                            )
                        }
                        Err(e) => fail(format!("orbit: {e}")),
                    }
                }
            }
        })
        .collect();

    let mut covered = SPoly::zero();
    for ((_row, src), (rep, steps)) in plan.rows.iter().zip(&sources).zip(&reports) {
        if rep.ok {
            if let Ok(t) = src {
                covered = &covered + &t.area().scale(&QSqrt2::from_int(*steps as i64));
            }
        }
    }
    let parent_area = parent.span().area();
    let deficit = &parent_area - &covered;
    // On a point interval the areas only have to agree at that parameter.
    let complete = if j.is_point() {
        deficit.eval(&j.lo).is_zero()
    } else {
        deficit.is_zero()
    };
    Ok(PlanReport {
        title: plan.title.clone(),
        rows: reports.into_iter().map(|(r, _)| r).collect(),
        parent_labels: parent.labels().to_vec(),
        parent_area,
        covered_area: covered,
        complete,
    })
}
