//! Points, lines and tetrahedra of the projective space PG(3,2).
//!
//! Points are the fifteen nonzero vectors of GF(2)^4, stored as 4-bit
//! integers. Coordinate `x1` is the most significant bit, so `(1,0,0,0)`
//! is `0b1000`. A line is a triple of distinct points summing to zero.
//!
//! A [`Tetrahedron`] is the configuration of ten points and six lines
//! spanned by four points in general position. Relative to a tetrahedron
//! every vector has a weight (number of nonzero coefficients in the corner
//! basis) and every unordered pair of its points has one of seven
//! [`Shape`]s.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A vector of GF(2)^4. Nonzero values are the points of PG(3,2); the zero
/// vector only shows up as an intermediate sum.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Point4(u8);

impl Point4 {
    pub const ZERO: Point4 = Point4(0);

    /// Builds a vector from its low four bits. Returns `None` above 15.
    pub const fn new(bits: u8) -> Option<Point4> {
        if bits < 16 {
            Some(Point4(bits))
        } else {
            None
        }
    }

    pub const fn from_coords(c: [u8; 4]) -> Point4 {
        Point4(((c[0] & 1) << 3) | ((c[1] & 1) << 2) | ((c[2] & 1) << 1) | (c[3] & 1))
    }

    pub const fn bits(self) -> u8 {
        self.0
    }

    /// Coordinate `i` for `i` in `0..4` (coordinate `x_{i+1}`).
    pub const fn coord(self, i: usize) -> u8 {
        (self.0 >> (3 - i)) & 1
    }

    pub const fn coords(self) -> [u8; 4] {
        [self.coord(0), self.coord(1), self.coord(2), self.coord(3)]
    }

    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// The fifteen points of PG(3,2) in increasing order.
    pub fn all_points() -> impl Iterator<Item = Point4> {
        (1u8..16).map(Point4)
    }

    /// The unit vector with a one in coordinate `i`.
    pub const fn unit(i: usize) -> Point4 {
        Point4(1 << (3 - i))
    }
}

impl Add for Point4 {
    type Output = Point4;
    // Addition in GF(2)^4.
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn add(self, rhs: Point4) -> Point4 {
        Point4(self.0 ^ rhs.0)
    }
}

impl fmt::Display for Point4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.coords();
        write!(f, "{}{}{}{}", c[0], c[1], c[2], c[3])
    }
}

impl fmt::Debug for Point4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.coords();
        write!(f, "({},{},{},{})", c[0], c[1], c[2], c[3])
    }
}

impl FromStr for Point4 {
    type Err = Error;
    fn from_str(s: &str) -> Result<Point4> {
        let digits: Vec<u8> = s
            .chars()
            .filter(|c| !matches!(c, '(' | ')' | ',' | ' '))
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(Error::MalformedInput(format!("bad point {s:?}"))),
            })
            .collect::<Result<_>>()?;
        if digits.len() != 4 {
            return Err(Error::MalformedInput(format!("bad point {s:?}")));
        }
        Ok(Point4::from_coords([digits[0], digits[1], digits[2], digits[3]]))
    }
}

impl Serialize for Point4 {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Point4 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Point4, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Componentwise XOR.
pub fn add(x: Point4, y: Point4) -> Point4 {
    x + y
}

/// True iff `x`, `y`, `z` are pairwise distinct points with `x + y + z = 0`.
pub fn is_line(x: Point4, y: Point4, z: Point4) -> bool {
    !x.is_zero() && !y.is_zero() && !z.is_zero() && x != y && (x + y + z).is_zero()
}

/// A line of PG(3,2), stored as a sorted triple.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Line([Point4; 3]);

impl Line {
    pub fn new(x: Point4, y: Point4, z: Point4) -> Option<Line> {
        if !is_line(x, y, z) {
            return None;
        }
        let mut p = [x, y, z];
        p.sort();
        Some(Line(p))
    }

    pub fn points(&self) -> [Point4; 3] {
        self.0
    }

    pub fn contains(&self, p: Point4) -> bool {
        self.0.contains(&p)
    }
}

/// All 35 lines of PG(3,2).
pub fn all_lines() -> Vec<Line> {
    let mut lines = Vec::new();
    for x in 1u8..16 {
        for y in (x + 1)..16 {
            let z = x ^ y;
            if z > y {
                lines.push(Line([Point4(x), Point4(y), Point4(z)]));
            }
        }
    }
    lines
}

/// Shapes of unordered pairs of points of a tetrahedron. `Dpt` is the
/// merged double point, standing for both `Dc` and `Dm`.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Shape {
    Ls,
    Hl,
    Ang,
    Alt,
    Ax,
    Dpt,
    Dc,
    Dm,
}

impl Shape {
    /// The merged alphabet.
    pub const MERGED: [Shape; 6] = [Shape::Ls, Shape::Hl, Shape::Ang, Shape::Alt, Shape::Ax, Shape::Dpt];
    /// The seven unmerged shapes.
    pub const SPLIT: [Shape; 7] = [
        Shape::Ls,
        Shape::Hl,
        Shape::Ang,
        Shape::Alt,
        Shape::Ax,
        Shape::Dc,
        Shape::Dm,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Shape::Ls => "ls",
            Shape::Hl => "hl",
            Shape::Ang => "ang",
            Shape::Alt => "alt",
            Shape::Ax => "ax",
            Shape::Dpt => "dpt",
            Shape::Dc => "dc",
            Shape::Dm => "dm",
        }
    }

    /// Maps `Dc` and `Dm` to `Dpt`; other shapes are unchanged.
    pub fn merged(self) -> Shape {
        match self {
            Shape::Dc | Shape::Dm => Shape::Dpt,
            s => s,
        }
    }

    pub fn is_collinear(self) -> bool {
        matches!(self, Shape::Ls | Shape::Hl)
    }

    pub fn is_degenerate(self) -> bool {
        matches!(self, Shape::Dpt | Shape::Dc | Shape::Dm)
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Shape {
    type Err = Error;
    fn from_str(s: &str) -> Result<Shape> {
        Ok(match s {
            "ls" => Shape::Ls,
            "hl" => Shape::Hl,
            "ang" => Shape::Ang,
            "alt" => Shape::Alt,
            "ax" => Shape::Ax,
            "dpt" => Shape::Dpt,
            "dc" => Shape::Dc,
            "dm" => Shape::Dm,
            _ => return Err(Error::MalformedInput(format!("unknown shape {s:?}"))),
        })
    }
}

impl Serialize for Shape {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for Shape {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Shape, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Result of [`Tetrahedron::line_or_circle`].
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum Incidence {
    Line,
    Circle,
    Neither,
}

/// Coefficient table of a basis: `table[v]` is the bitmask of basis vectors
/// summing to `v`. `None` if the four vectors are dependent.
fn basis_coefficients(basis: &[Point4; 4]) -> Option<[u8; 16]> {
    let mut table = [0xffu8; 16];
    for mask in 0u8..16 {
        let v = (0..4)
            .filter(|i| mask & (1 << i) != 0)
            .fold(Point4::ZERO, |acc, i| acc + basis[i]);
        if table[v.0 as usize] != 0xff {
            return None;
        }
        table[v.0 as usize] = mask;
    }
    Some(table)
}

/// Unordered pairs of distinct corner indices, in the fixed midpoint order.
pub const CORNER_PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// The ten points and six lines spanned by four points in general position.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Tetrahedron {
    corners: [Point4; 4],
    coeff: [u8; 16],
    points: [Point4; 10],
}

impl fmt::Debug for Tetrahedron {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T{:?}", self.corners)
    }
}

impl Tetrahedron {
    pub fn new(corners: [Point4; 4]) -> Result<Tetrahedron> {
        let coeff = basis_coefficients(&corners).ok_or(Error::NotABasis)?;
        let mut points = [Point4::ZERO; 10];
        points[..4].copy_from_slice(&corners);
        for (k, &(i, j)) in CORNER_PAIRS.iter().enumerate() {
            points[4 + k] = corners[i] + corners[j];
        }
        Ok(Tetrahedron { corners, coeff, points })
    }

    /// The tetrahedron spanned by the unit vectors.
    pub fn t0() -> Tetrahedron {
        Tetrahedron::new([Point4::unit(0), Point4::unit(1), Point4::unit(2), Point4::unit(3)]).unwrap()
    }

    /// The tetrahedron spanned by the weight-3 vectors; its corner `i`
    /// represents the `i`-th perfect matching of a cover.
    pub fn t1() -> Tetrahedron {
        Tetrahedron::new([
            Point4::from_coords([0, 1, 1, 1]),
            Point4::from_coords([1, 0, 1, 1]),
            Point4::from_coords([1, 1, 0, 1]),
            Point4::from_coords([1, 1, 1, 0]),
        ])
        .unwrap()
    }

    pub fn corners(&self) -> [Point4; 4] {
        self.corners
    }

    /// Corners first, then the midpoints in [`CORNER_PAIRS`] order.
    pub fn points(&self) -> &[Point4; 10] {
        &self.points
    }

    /// Index of `p` in [`Tetrahedron::points`].
    pub fn point_index(&self, p: Point4) -> Option<usize> {
        let mask = self.coeff[p.0 as usize];
        match mask.count_ones() {
            1 => Some(mask.trailing_zeros() as usize),
            2 => {
                let i = mask.trailing_zeros() as usize;
                let j = 7 - (mask.leading_zeros() as usize);
                CORNER_PAIRS.iter().position(|&pair| pair == (i, j)).map(|k| 4 + k)
            }
            _ => None,
        }
    }

    pub fn contains(&self, p: Point4) -> bool {
        matches!(self.coeff[p.0 as usize].count_ones(), 1 | 2)
    }

    /// Bitmask of corners whose sum is `y`.
    pub fn coefficients(&self, y: Point4) -> u8 {
        self.coeff[y.0 as usize]
    }

    /// Number of nonzero coefficients of `y` in the corner basis.
    pub fn weight(&self, y: Point4) -> u8 {
        self.coeff[y.0 as usize].count_ones() as u8
    }

    /// The six lines `{c_i, c_i + c_j, c_j}`.
    pub fn lines(&self) -> [Line; 6] {
        CORNER_PAIRS.map(|(i, j)| {
            Line::new(self.corners[i], self.corners[i] + self.corners[j], self.corners[j]).unwrap()
        })
    }

    /// True iff `{x, y, z}` is one of the six lines of this tetrahedron.
    pub fn is_line_of(&self, x: Point4, y: Point4, z: Point4) -> bool {
        if !is_line(x, y, z) {
            return false;
        }
        let mut w = [self.weight(x), self.weight(y), self.weight(z)];
        w.sort_unstable();
        w == [1, 1, 2]
    }

    fn require(&self, p: Point4) -> Result<()> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(Error::PointNotInTetrahedron(p.to_string()))
        }
    }

    /// Shape of the unordered pair `{p, q}`, possibly degenerate.
    pub fn classify_pair(&self, p: Point4, q: Point4, merge_degenerate: bool) -> Result<Shape> {
        self.require(p)?;
        self.require(q)?;
        let (a, b) = (self.coefficients(p), self.coefficients(q));
        let shape = match (a.count_ones(), b.count_ones()) {
            _ if a == b => {
                if a.count_ones() == 1 {
                    Shape::Dc
                } else {
                    Shape::Dm
                }
            }
            (1, 1) => Shape::Ls,
            (1, 2) | (2, 1) => {
                let (corner, mid) = if a.count_ones() == 1 { (a, b) } else { (b, a) };
                if corner & mid != 0 {
                    Shape::Hl
                } else {
                    Shape::Alt
                }
            }
            _ => {
                if a & b != 0 {
                    Shape::Ang
                } else {
                    Shape::Ax
                }
            }
        };
        Ok(if merge_degenerate { shape.merged() } else { shape })
    }

    /// All 55 unordered pairs `(i, j)` of point indices with `i <= j`.
    pub fn pair_indices() -> impl Iterator<Item = (usize, usize)> {
        (0..10).flat_map(|i| (i..10).map(move |j| (i, j)))
    }

    /// Number of pairs of each unmerged shape.
    pub fn shape_census(&self) -> BTreeMap<Shape, usize> {
        let mut census = BTreeMap::new();
        for (i, j) in Tetrahedron::pair_indices() {
            let s = self.classify_pair(self.points[i], self.points[j], false).unwrap();
            *census.entry(s).or_insert(0) += 1;
        }
        census
    }

    /// Classifies a triple of points of the tetrahedron.
    pub fn line_or_circle(&self, x: Point4, y: Point4, z: Point4) -> Result<Incidence> {
        self.require(x)?;
        self.require(y)?;
        self.require(z)?;
        if !(x + y + z).is_zero() {
            return Ok(Incidence::Neither);
        }
        Ok(if self.is_line_of(x, y, z) { Incidence::Line } else { Incidence::Circle })
    }

    /// For a half-line `{c1, c1 + c2}`: its target corner `c2`.
    pub fn half_line_target(&self, p: Point4, q: Point4) -> Option<Point4> {
        match self.classify_pair(p, q, true).ok()? {
            Shape::Hl => {
                let (corner, mid) = if self.weight(p) == 1 { (p, q) } else { (q, p) };
                Some(corner + mid)
            }
            _ => None,
        }
    }

    /// The 24 collineations fixing this tetrahedron (all corner permutations).
    pub fn symmetries(&self) -> Vec<Collineation> {
        permutations4()
            .into_iter()
            .map(|perm| {
                let to = perm.map(|i| self.corners[i]);
                Collineation::from_bases(self.corners, to).unwrap()
            })
            .collect()
    }
}

/// All 24 permutations of `[0, 1, 2, 3]` in lexicographic order.
pub fn permutations4() -> Vec<[usize; 4]> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    let mut seen = [false; 4];
                    if p.iter().all(|&x| !std::mem::replace(&mut seen[x], true)) {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

/// A collineation of PG(3,2), i.e. an invertible 4x4 matrix over GF(2).
/// Stored by the images of the four unit vectors (the matrix columns).
#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug)]
pub struct Collineation {
    cols: [Point4; 4],
}

impl Collineation {
    pub fn identity() -> Collineation {
        Collineation { cols: [0, 1, 2, 3].map(Point4::unit) }
    }

    /// The unique linear map with `M * from[i] = to[i]`.
    pub fn from_bases(from: [Point4; 4], to: [Point4; 4]) -> Result<Collineation> {
        let table = basis_coefficients(&from).ok_or(Error::NotABasis)?;
        basis_coefficients(&to).ok_or(Error::NotABasis)?;
        let cols = [0, 1, 2, 3].map(|j| {
            let mask = table[Point4::unit(j).0 as usize];
            (0..4).filter(|i| mask & (1 << i) != 0).fold(Point4::ZERO, |acc, i| acc + to[i])
        });
        Ok(Collineation { cols })
    }

    /// Builds a collineation from a row-major matrix.
    pub fn from_matrix(m: [[u8; 4]; 4]) -> Result<Collineation> {
        let cols = [0, 1, 2, 3].map(|c| Point4::from_coords([m[0][c], m[1][c], m[2][c], m[3][c]]));
        basis_coefficients(&cols).ok_or(Error::NotABasis)?;
        Ok(Collineation { cols })
    }

    /// The involution swapping each unit vector with its antipode; it maps
    /// `T0` onto `T1` and fixes their common midpoints.
    pub fn lambda() -> Collineation {
        Collineation::from_bases(Tetrahedron::t0().corners(), Tetrahedron::t1().corners()).unwrap()
    }

    /// Row-major matrix.
    pub fn matrix(&self) -> [[u8; 4]; 4] {
        [0, 1, 2, 3].map(|r| [0, 1, 2, 3].map(|c| self.cols[c].coord(r)))
    }

    pub fn apply(&self, v: Point4) -> Point4 {
        (0..4).filter(|&i| v.coord(i) == 1).fold(Point4::ZERO, |acc, i| acc + self.cols[i])
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Collineation) -> Collineation {
        Collineation { cols: other.cols.map(|c| self.apply(c)) }
    }

    pub fn inverse(&self) -> Collineation {
        Collineation::from_bases(self.cols, [0, 1, 2, 3].map(Point4::unit)).unwrap()
    }

    pub fn map_tetrahedron(&self, t: &Tetrahedron) -> Tetrahedron {
        Tetrahedron::new(t.corners().map(|c| self.apply(c))).unwrap()
    }
}
