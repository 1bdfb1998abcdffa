//! Shapes of the square lattice and the half-integer bond lattice.
//!
//! A cell `(x, y)` owns four bonds at half-integer offsets: up `(x, y+½)`,
//! right `(x+½, y)`, down `(x, y−½)` and left `(x−½, y)`. Bond coordinates
//! are stored doubled so everything stays in integers.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// One edge/boundary index position: exactly one coordinate is a half
/// integer. Stored as doubled coordinates, so exactly one of `x2`, `y2` is
/// odd. Ordering is lexicographic on `(x, y)` as rationals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BondPosition {
    x2: i64,
    y2: i64,
}

impl BondPosition {
    /// Build from doubled coordinates; exactly one must be odd.
    pub fn from_doubled(x2: i64, y2: i64) -> Option<Self> {
        if (x2 & 1 != 0) ^ (y2 & 1 != 0) {
            Some(BondPosition { x2, y2 })
        } else {
            None
        }
    }

    pub fn x2(&self) -> i64 {
        self.x2
    }

    pub fn y2(&self) -> i64 {
        self.y2
    }

    /// True for bonds between vertical neighbors (integer x, half-integer y).
    pub fn is_vertical(&self) -> bool {
        self.y2 & 1 != 0
    }

    pub fn translated(&self, dx: i64, dy: i64) -> BondPosition {
        BondPosition { x2: self.x2 + 2 * dx, y2: self.y2 + 2 * dy }
    }
}

impl fmt::Display for BondPosition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coord = |v: i64, f: &mut fmt::Formatter<'_>| -> fmt::Result {
            if v % 2 == 0 {
                write!(f, "{}", v / 2)
            } else {
                write!(f, "{v}/2")
            }
        };
        write!(f, "(")?;
        coord(self.x2, f)?;
        write!(f, ", ")?;
        coord(self.y2, f)?;
        write!(f, ")")
    }
}

/// The four bonds of cell `(x, y)` in tile index order (up, right, down, left).
pub fn cell_bonds(x: i64, y: i64) -> [BondPosition; 4] {
    [
        BondPosition { x2: 2 * x, y2: 2 * y + 1 },
        BondPosition { x2: 2 * x + 1, y2: 2 * y },
        BondPosition { x2: 2 * x, y2: 2 * y - 1 },
        BondPosition { x2: 2 * x - 1, y2: 2 * y },
    ]
}

/// Finite set of cells of the square lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Shape {
    cells: BTreeSet<(i64, i64)>,
}

impl Shape {
    pub fn new(cells: impl IntoIterator<Item = (i64, i64)>) -> Self {
        Shape { cells: cells.into_iter().collect() }
    }

    /// The rectangle `{1..m} × {1..n}`.
    pub fn rect(m: u32, n: u32) -> Self {
        let mut cells = BTreeSet::new();
        for x in 1..=m as i64 {
            for y in 1..=n as i64 {
                cells.insert((x, y));
            }
        }
        Shape { cells }
    }

    pub fn cells(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.cells.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn contains(&self, cell: (i64, i64)) -> bool {
        self.cells.contains(&cell)
    }

    pub fn translated(&self, dx: i64, dy: i64) -> Shape {
        Shape { cells: self.cells.iter().map(|&(x, y)| (x + dx, y + dy)).collect() }
    }

    /// When the shape is a full axis-aligned rectangle, its `(m, n)` size.
    pub fn rect_size(&self) -> Option<(u32, u32)> {
        if self.cells.is_empty() {
            return None;
        }
        let xs: Vec<i64> = self.cells.iter().map(|&(x, _)| x).collect();
        let ys: Vec<i64> = self.cells.iter().map(|&(_, y)| y).collect();
        let (x0, x1) = (*xs.iter().min().unwrap(), *xs.iter().max().unwrap());
        let (y0, y1) = (*ys.iter().min().unwrap(), *ys.iter().max().unwrap());
        let m = (x1 - x0 + 1) as usize;
        let n = (y1 - y0 + 1) as usize;
        if m * n == self.cells.len() {
            Some((m as u32, n as u32))
        } else {
            None
        }
    }

    pub fn min_cell(&self) -> Option<(i64, i64)> {
        let x = self.cells.iter().map(|&(x, _)| x).min()?;
        let y = self.cells.iter().map(|&(_, y)| y).min()?;
        Some((x, y))
    }

    /// Every bond together with the number of shape cells touching it
    /// (1 for a boundary bond, 2 for an interior bond).
    pub fn bond_multiplicities(&self) -> BTreeMap<BondPosition, usize> {
        let mut map = BTreeMap::new();
        for &(x, y) in &self.cells {
            for b in cell_bonds(x, y) {
                *map.entry(b).or_insert(0) += 1;
            }
        }
        map
    }

    /// Bonds adjacent to exactly one cell, in canonical (lexicographic) order.
    pub fn boundary_bonds(&self) -> Vec<BondPosition> {
        self.bond_multiplicities()
            .into_iter()
            .filter_map(|(b, c)| (c == 1).then_some(b))
            .collect()
    }

    /// Bonds shared by two cells.
    pub fn interior_bonds(&self) -> Vec<BondPosition> {
        self.bond_multiplicities()
            .into_iter()
            .filter_map(|(b, c)| (c == 2).then_some(b))
            .collect()
    }

    /// Connectivity under 4-neighbor adjacency.
    pub fn is_connected(&self) -> bool {
        let Some(&start) = self.cells.iter().next() else { return true };
        let mut seen = BTreeSet::new();
        let mut stack = vec![start];
        seen.insert(start);
        while let Some((x, y)) = stack.pop() {
            for next in [(x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)] {
                if self.cells.contains(&next) && seen.insert(next) {
                    stack.push(next);
                }
            }
        }
        seen.len() == self.cells.len()
    }
}

impl serde::Serialize for Shape {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let cells: Vec<[i64; 2]> = self.cells.iter().map(|&(x, y)| [x, y]).collect();
        cells.serialize(serializer)
    }
}

impl<'de> serde::Deserialize<'de> for Shape {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let cells: Vec<[i64; 2]> = Vec::deserialize(deserializer)?;
        Ok(Shape::new(cells.into_iter().map(|[x, y]| (x, y))))
    }
}
