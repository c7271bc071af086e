//! The group of octagonal rotations and reflections combined with
//! translations whose components are affine in the parameter `s`, in the
//! canonical form T_d R_m U₀ⁿ.
//!
//! Products reduce via U_m U_n = R_{2(m−n)}, R_n T_d = T_{R_n d} R_n and
//! U_n T_d = T_{U_n d} U_n; the canonical form is unique, so equality of
//! group elements is structural equality.

use std::fmt;

use crate::algebra::{QSqrt2, SPoly};
use crate::geometry::{cos_m, sin_m, Direction, Domain, GeometryError, SPoint, Tile};

/// A group element T_d R_m U₀ⁿ with n ∈ {0,1}, m mod 8 and d a pair of
/// affine polynomials in `s`. Acts on points as p ↦ R_m(U₀ⁿ p) + d.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Isometry {
    reflect: bool,
    rot: u8, // mod 8
    dx: SPoly,
    dy: SPoly,
}

impl Isometry {
    pub fn identity() -> Self {
        Isometry {
            reflect: false,
            rot: 0,
            dx: SPoly::zero(),
            dy: SPoly::zero(),
        }
    }

    /// The rotation R_n by nπ/4 about the origin.
    pub fn rotation(n: i64) -> Self {
        Isometry {
            reflect: false,
            rot: n.rem_euclid(8) as u8,
            dx: SPoly::zero(),
            dy: SPoly::zero(),
        }
    }

    /// The reflection U_n about the line through the origin at angle nπ/4;
    /// `axis` may be half-integer. U_n = R_{2n} U₀.
    pub fn reflection(axis: Direction) -> Self {
        Isometry {
            reflect: true,
            rot: axis.doubled() % 8,
            dx: SPoly::zero(),
            dy: SPoly::zero(),
        }
    }

    /// The translation T_d.
    pub fn translation(dx: SPoly, dy: SPoly) -> Self {
        assert!(dx.degree() <= 1 && dy.degree() <= 1, "translation must be affine in s");
        Isometry {
            reflect: false,
            rot: 0,
            dx,
            dy,
        }
    }

    /// T_d R_m U₀ⁿ from its canonical data.
    pub fn canonical(reflect: bool, rot: i64, dx: SPoly, dy: SPoly) -> Self {
        assert!(dx.degree() <= 1 && dy.degree() <= 1, "translation must be affine in s");
        Isometry {
            reflect,
            rot: rot.rem_euclid(8) as u8,
            dx,
            dy,
        }
    }

    /// Reflection about the axis through the point `w` with direction
    /// `axis` (possibly half-integer): T_w U_n T_{−w} in canonical form.
    pub fn reflection_about(axis: Direction, w: &SPoint) -> Self {
        let u = Isometry::reflection(axis);
        u.conjugate_by_translation(w)
    }

    /// Rotation by nπ/4 about the point `w`: T_w R_n T_{−w}.
    pub fn rotation_about(n: i64, w: &SPoint) -> Self {
        let r = Isometry::rotation(n);
        r.conjugate_by_translation(w)
    }

    fn conjugate_by_translation(&self, w: &SPoint) -> Self {
        // T_w G T_{−w} has the same linear part and translation
        // d + w − L(w) with L the linear part of G.
        let lw = self.apply_linear(w);
        Isometry {
            reflect: self.reflect,
            rot: self.rot,
            dx: &(&self.dx + &w.x) - &lw.x,
            dy: &(&self.dy + &w.y) - &lw.y,
        }
    }

    pub fn is_reflecting(&self) -> bool {
        self.reflect
    }

    pub fn rot(&self) -> u8 {
        self.rot
    }

    pub fn translation_part(&self) -> SPoint {
        SPoint::new(self.dx.clone(), self.dy.clone())
    }

    /// Jacobian determinant: +1 for orientation-preserving elements,
    /// −1 for reflections.
    pub fn parity(&self) -> i32 {
        if self.reflect {
            -1
        } else {
            1
        }
    }

    /// The linear part applied to a point (translation ignored).
    pub fn apply_linear(&self, p: &SPoint) -> SPoint {
        let (x, y) = if self.reflect {
            (p.x.clone(), -&p.y)
        } else {
            (p.x.clone(), p.y.clone())
        };
        let c = cos_m(self.rot);
        let s = sin_m(self.rot);
        SPoint::new(
            &x.scale(&c) - &y.scale(&s),
            &x.scale(&s) + &y.scale(&c),
        )
    }

    pub fn apply_point(&self, p: &SPoint) -> SPoint {
        let lp = self.apply_linear(p);
        SPoint::new(&lp.x + &self.dx, &lp.y + &self.dy)
    }

    /// The image direction of an edge normal under the linear part.
    pub fn apply_direction(&self, m: u8) -> u8 {
        let m = m as i64;
        let img = if self.reflect { -m } else { m } + self.rot as i64;
        img.rem_euclid(8) as u8
    }

    /// Exact image tile. Each half-plane u_m·x < b maps to
    /// u_{m'}·x < b + u_{m'}·d with m' the image direction.
    pub fn apply_tile(&self, t: &Tile) -> Result<Tile, GeometryError> {
        let edges = t
            .edges()
            .iter()
            .map(|(m, b)| {
                let m2 = self.apply_direction(*m);
                let (ux, uy) = Direction::integer(m2 as i64).unit();
                let shift = &self.dx.scale(&ux) + &self.dy.scale(&uy);
                (m2, b + &shift)
            })
            .collect();
        Tile::new(edges, t.validity().clone())
    }

    pub fn apply_domain(&self, d: &Domain) -> Result<Domain, GeometryError> {
        Ok(Domain::new(
            d.tiles
                .iter()
                .map(|t| self.apply_tile(t))
                .collect::<Result<Vec<_>, _>>()?,
        ))
    }

    /// Canonical form of self ∘ rhs.
    pub fn compose(&self, rhs: &Isometry) -> Isometry {
        // (T_d L)(T_e K) = T_{d + L e} (L K), with the linear parts
        // combining as R_m U^n R_{m'} U^{n'} = R_{m ± m'} U^{n+n'}.
        let le = self.apply_linear(&SPoint::new(rhs.dx.clone(), rhs.dy.clone()));
        let rot = if self.reflect {
            self.rot as i64 - rhs.rot as i64
        } else {
            self.rot as i64 + rhs.rot as i64
        };
        Isometry {
            reflect: self.reflect ^ rhs.reflect,
            rot: rot.rem_euclid(8) as u8,
            dx: &le.x + &self.dx,
            dy: &le.y + &self.dy,
        }
    }

    pub fn inverse(&self) -> Isometry {
        // Inverse linear part: same reflect flag; rotation index negated
        // for pure rotations, unchanged for reflections (involutions).
        let rot = if self.reflect {
            self.rot as i64
        } else {
            (-(self.rot as i64)).rem_euclid(8)
        };
        let lin = Isometry {
            reflect: self.reflect,
            rot: rot as u8,
            dx: SPoly::zero(),
            dy: SPoly::zero(),
        };
        let ld = lin.apply_linear(&SPoint::new(self.dx.clone(), self.dy.clone()));
        Isometry {
            reflect: lin.reflect,
            rot: lin.rot,
            dx: -&ld.x,
            dy: -&ld.y,
        }
    }

    /// Conjugation by the homothety with ratio ω^k: the translation scales
    /// by ω^k, the rotation/reflection part is unchanged.
    pub fn scale_conjugate(&self, k: i64) -> Isometry {
        let w = QSqrt2::omega().pow(k);
        Isometry {
            reflect: self.reflect,
            rot: self.rot,
            dx: self.dx.scale(&w),
            dy: self.dy.scale(&w),
        }
    }

    /// Substitutes the parameter s ↦ c0 + c1·s inside the translation part,
    /// for reparametrized placements of isometries.
    pub fn reparametrize(&self, c0: &QSqrt2, c1: &QSqrt2) -> Isometry {
        Isometry {
            reflect: self.reflect,
            rot: self.rot,
            dx: self.dx.compose_affine(c0, c1).expect("affine reparametrization"),
            dy: self.dy.compose_affine(c0, c1).expect("affine reparametrization"),
        }
    }

    /// Serialization `{n, m, dx, dy}` with SPoly literals.
    pub fn to_text(&self) -> String {
        format!(
            "{{{}, {}, {}, {}}}",
            self.reflect as u8, self.rot, self.dx, self.dy
        )
    }
}

impl fmt::Debug for Isometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.dx.is_zero() && self.dy.is_zero() {
            if self.reflect {
                write!(f, "R{} U0", self.rot)
            } else if self.rot == 0 {
                write!(f, "Id")
            } else {
                write!(f, "R{}", self.rot)
            }
        } else {
            write!(f, "T({:?},{:?})", self.dx, self.dy)?;
            if self.reflect {
                write!(f, " R{} U0", self.rot)?;
            } else if self.rot != 0 {
                write!(f, " R{}", self.rot)?;
            }
            Ok(())
        }
    }
}

/// Convenience: tile placed as T_{(dx,dy)} R_n (shape), the layout used by
/// every table in the construction.
pub fn place_tile(
    shape: &Tile,
    rot: i64,
    dx: &SPoly,
    dy: &SPoly,
) -> Result<Tile, GeometryError> {
    let g = Isometry::canonical(false, rot, dx.clone(), dy.clone());
    g.apply_tile(shape)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ParamInterval;

    fn whole() -> ParamInterval {
        ParamInterval::closed(QSqrt2::zero(), QSqrt2::alpha())
    }

    #[test]
    fn r4_negates() {
        let g = Isometry::rotation(4);
        let p = SPoint::constant(QSqrt2::one(), QSqrt2::beta());
        let q = g.apply_point(&p);
        assert_eq!(q.x, SPoly::constant(-QSqrt2::one()));
        assert_eq!(q.y, SPoly::constant(-QSqrt2::beta()));
    }

    #[test]
    fn product_formula_u1_u0() {
        // U₁ U₀ = R₂.
        let u1 = Isometry::reflection(Direction::integer(1));
        let u0 = Isometry::reflection(Direction::integer(0));
        assert_eq!(u1.compose(&u0), Isometry::rotation(2));
    }

    #[test]
    fn half_integer_reflection_involution() {
        let u = Isometry::reflection(Direction::from_doubled(5));
        assert_eq!(u.compose(&u), Isometry::identity());
    }

    #[test]
    fn commutation_r3_t() {
        // R₃ T_{(1,0)} = T_{R₃(1,0)} R₃.
        let r3 = Isometry::rotation(3);
        let t = Isometry::translation(SPoly::from_int(1), SPoly::zero());
        let lhs = r3.compose(&t);
        let d = r3.apply_linear(&SPoint::constant(QSqrt2::one(), QSqrt2::zero()));
        let rhs = Isometry::translation(d.x, d.y).compose(&r3);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn inverse_round_trip() {
        let g = Isometry::canonical(true, 5, SPoly::s(), SPoly::from_int(-2));
        assert_eq!(g.compose(&g.inverse()), Isometry::identity());
        assert_eq!(g.inverse().compose(&g), Isometry::identity());
    }

    #[test]
    fn scale_conjugation() {
        let t = Isometry::translation(SPoly::from_int(1), SPoly::zero());
        let scaled = t.scale_conjugate(1);
        assert_eq!(
            scaled,
            Isometry::translation(SPoly::constant(QSqrt2::omega()), SPoly::zero())
        );
        let g = Isometry::canonical(false, 3, SPoly::s(), SPoly::from_int(7));
        assert_eq!(g.scale_conjugate(1).scale_conjugate(-1), g);
        assert_eq!(Isometry::rotation(3).scale_conjugate(5), Isometry::rotation(3));
    }

    #[test]
    fn tile_image_preserves_area() {
        let j = whole();
        let sq = crate::geometry::catalogue_checked(
            crate::geometry::ShapeKind::Q(2),
            &[SPoly::affine(QSqrt2::one(), QSqrt2::ratio(1, 3))],
            &j,
        )
        .unwrap();
        let g = Isometry::canonical(true, 3, SPoly::s(), SPoly::from_int(-1));
        let img = g.apply_tile(&sq).unwrap();
        assert_eq!(img.area(), sq.area());
    }
}
