//! Finite ultrametric spaces stored as exact distance matrices.

mod hierarchy;
mod represent;
mod scan;

pub use hierarchy::{isometric, Hierarchy};
pub use represent::{representable, LabelMode, RepresentOpts, Representation};
pub use scan::{conjecture_scan, enumerate_spaces, enumerate_spaces_capped, scan_record, ScanRecord, ScanReport, ScanSummary};

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpaceError {
    Empty,
    DimensionMismatch { points: usize, rows: usize },
    DuplicatePoint(String),
    UnknownPoint(String),
    NonzeroDiagonal(String),
    NegativeEntry(String, String),
    AsymmetricEntry(String, String),
    StrongTriangleViolation(String, String, String),
    InvalidValues(String),
    SizeCapExceeded { size: usize, cap: usize },
}

impl fmt::Display for SpaceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceError::Empty => write!(f, "a space needs at least one point"),
            SpaceError::DimensionMismatch { points, rows } => {
                write!(f, "matrix shape does not match {points} points (found a row/column count of {rows})")
            }
            SpaceError::DuplicatePoint(p) => write!(f, "duplicate point {p:?}"),
            SpaceError::UnknownPoint(p) => write!(f, "unknown point {p:?}"),
            SpaceError::NonzeroDiagonal(p) => write!(f, "d({p}, {p}) is not zero"),
            SpaceError::NegativeEntry(x, y) => write!(f, "d({x}, {y}) is negative"),
            SpaceError::AsymmetricEntry(x, y) => write!(f, "d({x}, {y}) != d({y}, {x})"),
            SpaceError::StrongTriangleViolation(x, y, z) => {
                write!(f, "strong triangle inequality fails: d({x}, {y}) > max(d({x}, {z}), d({z}, {y}))")
            }
            SpaceError::InvalidValues(why) => write!(f, "invalid value set: {why}"),
            SpaceError::SizeCapExceeded { size, cap } => write!(f, "size {size} exceeds the cap {cap}"),
        }
    }
}

impl core::error::Error for SpaceError {}

/// Finite (pseudo)ultrametric space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UltraSpace {
    points: Vec<String>,
    dist: Vec<Rational>,
    proper: bool,
}

impl UltraSpace {
    /// Builds from a row-major matrix already known to be a pseudoultrametric.
    pub(crate) fn from_trusted(points: Vec<String>, dist: Vec<Rational>) -> Self {
        let n = points.len();
        debug_assert_eq!(dist.len(), n * n);
        let proper = (0..n).all(|i| (0..n).all(|j| i == j || dist[i * n + j].is_positive()));
        UltraSpace { points, dist, proper }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.dist[i * self.points.len() + j]
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        let n = self.points.len();
        &self.dist[i * n..(i + 1) * n]
    }

    pub fn index_of(&self, p: &str) -> Result<usize, SpaceError> {
        self.points.iter().position(|q| q == p).ok_or_else(|| SpaceError::UnknownPoint(p.to_string()))
    }

    pub fn distance(&self, x: &str, y: &str) -> Result<&Rational, SpaceError> {
        Ok(self.get(self.index_of(x)?, self.index_of(y)?))
    }

    /// `true` for an ultrametric, `false` for a pseudoultrametric.
    pub fn is_proper(&self) -> bool {
        self.proper
    }

    pub fn rows(&self) -> Vec<Vec<Rational>> {
        (0..self.len()).map(|i| self.row(i).to_vec()).collect()
    }

    /// Distinct off-diagonal values, ascending.
    pub fn distance_values(&self) -> Vec<Rational> {
        let n = self.len();
        let mut set = BTreeSet::new();
        for i in 0..n {
            for j in i + 1..n {
                set.insert(self.get(i, j).clone());
            }
        }
        set.into_iter().collect()
    }

    /// Same space with points renamed position by position.
    pub fn renamed(&self, points: Vec<String>) -> Result<UltraSpace, SpaceError> {
        validate_space(points, self.rows())
    }

    /// Largest off-diagonal distance (zero for one point).
    pub fn diameter(&self) -> Rational {
        self.dist.iter().max().cloned().unwrap_or_else(Rational::zero)
    }
}

/// Checks the (pseudo)ultrametric axioms and builds the space.
pub fn validate_space(points: Vec<String>, matrix: Vec<Vec<Rational>>) -> Result<UltraSpace, SpaceError> {
    let n = points.len();
    if n == 0 {
        return Err(SpaceError::Empty);
    }
    if matrix.len() != n {
        return Err(SpaceError::DimensionMismatch { points: n, rows: matrix.len() });
    }
    if let Some(row) = matrix.iter().find(|row| row.len() != n) {
        return Err(SpaceError::DimensionMismatch { points: n, rows: row.len() });
    }
    let mut seen = BTreeSet::new();
    for p in &points {
        if !seen.insert(p) {
            return Err(SpaceError::DuplicatePoint(p.clone()));
        }
    }
    for i in 0..n {
        if !matrix[i][i].is_zero() {
            return Err(SpaceError::NonzeroDiagonal(points[i].clone()));
        }
        for j in 0..n {
            if matrix[i][j].is_negative() {
                return Err(SpaceError::NegativeEntry(points[i].clone(), points[j].clone()));
            }
            if j > i && matrix[i][j] != matrix[j][i] {
                return Err(SpaceError::AsymmetricEntry(points[i].clone(), points[j].clone()));
            }
        }
    }

    // Compare small integer ranks instead of big rationals in the cubic loop.
    let values: BTreeMap<&Rational, u32> = {
        let set: BTreeSet<&Rational> = matrix.iter().flatten().collect();
        set.into_iter().enumerate().map(|(k, v)| (v, k as u32)).collect()
    };
    let rank: Vec<u32> = matrix.iter().flatten().map(|v| values[v]).collect();
    for x in 0..n {
        for y in x + 1..n {
            let dxy = rank[x * n + y];
            for z in 0..n {
                if dxy > rank[x * n + z].max(rank[z * n + y]) {
                    return Err(SpaceError::StrongTriangleViolation(
                        points[x].clone(),
                        points[y].clone(),
                        points[z].clone(),
                    ));
                }
            }
        }
    }
    let dist = matrix.into_iter().flatten().collect();
    Ok(UltraSpace::from_trusted(points, dist))
}

/// Open ball `{x : d(c, x) < r}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ball {
    pub center: String,
    pub radius: Rational,
    pub members: Vec<String>,
}

/// All distinct open balls, ordered by center then radius of first discovery.
pub fn balls(x: &UltraSpace) -> Vec<Ball> {
    let n = x.len();
    let mut radii = x.distance_values();
    radii.retain(|r| r.is_positive());
    radii.push(x.diameter() + Rational::one());
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut out = Vec::new();
    for c in 0..n {
        for r in &radii {
            let members: Vec<usize> = (0..n).filter(|&y| x.get(c, y) < r).collect();
            if seen.insert(members.clone()) {
                out.push(Ball {
                    center: x.points[c].clone(),
                    radius: r.clone(),
                    members: members.into_iter().map(|i| x.points[i].clone()).collect(),
                });
            }
        }
    }
    out
}

/// Outcome of checking that every ball is a sphere with its center added.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjectureCheck {
    pub holds: bool,
    pub failing_ball: Option<Ball>,
}

pub fn conjecture_predicate(x: &UltraSpace) -> ConjectureCheck {
    let n = x.len();
    // Every set of the form S(c, r) ∪ {c} with r > 0. Radii not attained from
    // c give the empty sphere, hence {c}.
    let mut shapes: BTreeSet<Vec<usize>> = BTreeSet::new();
    for c in 0..n {
        shapes.insert(vec![c]);
        let attained: BTreeSet<&Rational> = x.row(c).iter().filter(|r| r.is_positive()).collect();
        for r in attained {
            let set: Vec<usize> = (0..n).filter(|&y| y == c || x.get(c, y) == r).collect();
            shapes.insert(set);
        }
    }
    for ball in balls(x) {
        let idx: Vec<usize> = ball.members.iter().map(|m| x.index_of(m).unwrap()).collect();
        if !shapes.contains(&idx) {
            return ConjectureCheck { holds: false, failing_ball: Some(ball) };
        }
    }
    ConjectureCheck { holds: true, failing_ball: None }
}

/// Builds and validates a space from its strict upper triangle, row-major.
pub fn space_from_upper(points: &[&str], upper: &[Rational]) -> Result<UltraSpace, SpaceError> {
    let n = points.len();
    if upper.len() != n * n.saturating_sub(1) / 2 {
        return Err(SpaceError::DimensionMismatch { points: n, rows: upper.len() });
    }
    let mut m = vec![vec![Rational::zero(); n]; n];
    let pairs = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)));
    for ((i, j), d) in pairs.zip(upper) {
        m[i][j] = d.clone();
        m[j][i] = d.clone();
    }
    validate_space(points.iter().map(|p| p.to_string()).collect(), m)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn four_point() -> UltraSpace {
        let one = Rational::one();
        let two = Rational::from_integer(2);
        // v1v2, v1v3, v1v4, v2v3, v2v4, v3v4
        space_from_upper(
            &["v1", "v2", "v3", "v4"],
            &[one.clone(), two.clone(), two.clone(), two.clone(), two, one],
        )
        .unwrap()
    }

    #[test]
    fn validates_four_point_and_rejects_triangle() {
        let x = four_point();
        assert!(x.is_proper());
        assert_eq!(x.distance("v3", "v4").unwrap(), &Rational::one());

        let bad = space_from_upper(
            &["a", "b", "c"],
            &[Rational::one(), Rational::from_integer(2), Rational::from_integer(3)],
        );
        assert!(matches!(bad, Err(SpaceError::StrongTriangleViolation(..))));

        let single = validate_space(vec!["p".into()], vec![vec![Rational::zero()]]).unwrap();
        assert_eq!(single.len(), 1);
    }

    #[test]
    fn rejects_shape_and_axiom_errors() {
        let z = Rational::zero;
        let o = Rational::one;
        assert_eq!(
            validate_space(vec!["a".into(), "b".into()], vec![vec![z(), o()], vec![Rational::from_integer(2), z()]]),
            Err(SpaceError::AsymmetricEntry("a".into(), "b".into()))
        );
        assert_eq!(
            validate_space(vec!["a".into()], vec![vec![o()]]),
            Err(SpaceError::NonzeroDiagonal("a".into()))
        );
        assert!(matches!(
            validate_space(vec!["a".into(), "b".into()], vec![vec![z(), o()]]),
            Err(SpaceError::DimensionMismatch { .. })
        ));
        assert_eq!(
            validate_space(vec!["a".into(), "a".into()], vec![vec![z(), o()], vec![o(), z()]]),
            Err(SpaceError::DuplicatePoint("a".into()))
        );
    }

    #[test]
    fn balls_of_small_spaces() {
        let single = validate_space(vec!["p".into()], vec![vec![Rational::zero()]]).unwrap();
        let b = balls(&single);
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].members, ["p"]);

        let two = space_from_upper(&["a", "b"], &[Rational::one()]).unwrap();
        let sets: Vec<Vec<String>> = balls(&two).into_iter().map(|b| b.members).collect();
        assert_eq!(sets.len(), 3);
        assert!(sets.contains(&vec!["a".to_string()]));
        assert!(sets.contains(&vec!["b".to_string()]));
        assert!(sets.contains(&vec!["a".to_string(), "b".to_string()]));

        let sets: Vec<Vec<String>> = balls(&four_point()).into_iter().map(|b| b.members).collect();
        assert_eq!(sets.len(), 7);
        assert!(sets.contains(&vec!["v1".to_string(), "v2".to_string()]));
        assert!(sets.contains(&vec!["v3".to_string(), "v4".to_string()]));
    }

    #[test]
    fn conjecture_predicate_examples() {
        let two = space_from_upper(&["a", "b"], &[Rational::one()]).unwrap();
        assert!(conjecture_predicate(&two).holds);

        let five = space_from_upper(&["v0", "v1", "v2", "v3", "v4"], &vec![Rational::one(); 10]).unwrap();
        assert!(conjecture_predicate(&five).holds);

        let check = conjecture_predicate(&four_point());
        assert!(!check.holds);
        assert_eq!(check.failing_ball.unwrap().members.len(), 4);
    }
}
