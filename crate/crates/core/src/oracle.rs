//! Brute-force ground truth, kept deliberately separate from the contraction
//! engine: exhaustive tiling counters over explicit bond assignments, path
//! counting in the domino graph, and a state-vector walk simulator. Counts
//! use arbitrary-precision integers so they can be compared exactly.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::constructions::{ClassicalTileset, CoinOperator};
use crate::shape::{cell_bonds, BondPosition, Shape};
use crate::tensor::C64;
use crate::walk::WalkDistribution;

/// Exhaustive backtracking is kept to small shapes by default; the limit is
/// explicit in [`count_tilings_with_limit`] for callers that accept the cost.
pub const DEFAULT_CELL_LIMIT: usize = 12;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("shape has {cells} cells, over the exhaustive-search limit of {limit}")]
    ShapeTooLarge { cells: usize, limit: usize },
    #[error("periodic boundary flags require a full rectangle shape")]
    PeriodicNeedsRectangle,
    #[error("fixed color {color} out of range for alphabet size {dim}")]
    ColorOutOfRange { color: usize, dim: usize },
    #[error("fixed bond {0} is not a free boundary bond of the shape")]
    FixedBondNotFree(BondPosition),
    #[error("width {width} must be at least 2·steps+1 = {needed}")]
    WidthTooSmall { width: usize, needed: usize },
}

/// Boundary conditions for exhaustive counting: individual bonds pinned to a
/// color, with optional periodic identification of opposite rectangle sides.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BoundarySpec {
    fixed: BTreeMap<BondPosition, usize>,
    periodic_x: bool,
    periodic_y: bool,
}

impl BoundarySpec {
    /// All boundary bonds free.
    pub fn free() -> Self {
        Self::default()
    }

    /// Opposite sides identified in both directions.
    pub fn toroidal() -> Self {
        BoundarySpec { fixed: BTreeMap::new(), periodic_x: true, periodic_y: true }
    }

    pub fn periodic(x: bool, y: bool) -> Self {
        BoundarySpec { fixed: BTreeMap::new(), periodic_x: x, periodic_y: y }
    }

    pub fn fix(mut self, bond: BondPosition, color: usize) -> Self {
        self.fixed.insert(bond, color);
        self
    }

    pub fn fixed(&self) -> &BTreeMap<BondPosition, usize> {
        &self.fixed
    }

    pub fn is_periodic(&self) -> (bool, bool) {
        (self.periodic_x, self.periodic_y)
    }
}

/// Backtracking state with bonds interned into flat slots: cells are visited
/// row-major, each carrying the slot of its four (wrapped) bonds.
struct Search {
    tiles: Vec<[usize; 4]>,
    cell_slots: Vec<[usize; 4]>,
    fixed: Vec<Option<usize>>,
    bond_order: BTreeMap<BondPosition, usize>,
}

const UNSET: usize = usize::MAX;

impl Search {
    /// Row-major backtracking with forward checking against already-placed
    /// neighbors; `visit` runs once per complete valid assignment, receiving
    /// the color per bond slot.
    fn run(&self, visit: &mut dyn FnMut(&[usize])) {
        let mut colors = vec![UNSET; self.bond_order.len()];
        self.place(0, &mut colors, visit);
    }

    fn place(&self, i: usize, colors: &mut [usize], visit: &mut dyn FnMut(&[usize])) {
        if i == self.cell_slots.len() {
            visit(colors);
            return;
        }
        let slots = self.cell_slots[i];
        'tiles: for tile in &self.tiles {
            let mut placed = [UNSET; 4];
            let mut placed_len = 0;
            for (&slot, &color) in slots.iter().zip(tile) {
                if colors[slot] != UNSET {
                    if colors[slot] != color {
                        for &p in &placed[..placed_len] {
                            colors[p] = UNSET;
                        }
                        continue 'tiles;
                    }
                } else {
                    if let Some(want) = self.fixed[slot] {
                        if want != color {
                            for &p in &placed[..placed_len] {
                                colors[p] = UNSET;
                            }
                            continue 'tiles;
                        }
                    }
                    colors[slot] = color;
                    placed[placed_len] = slot;
                    placed_len += 1;
                }
            }
            self.place(i + 1, colors, visit);
            for &p in &placed[..placed_len] {
                colors[p] = UNSET;
            }
        }
    }

    fn slot_of(&self, bond: BondPosition) -> Option<usize> {
        self.bond_order.get(&bond).copied()
    }
}

fn build_search(
    ts: &ClassicalTileset,
    shape: &Shape,
    spec: &BoundarySpec,
    max_cells: usize,
) -> Result<Search, OracleError> {
    if shape.len() > max_cells {
        return Err(OracleError::ShapeTooLarge { cells: shape.len(), limit: max_cells });
    }
    let (px, py) = spec.is_periodic();
    let wrap: Box<dyn Fn(BondPosition) -> BondPosition> = if px || py {
        let Some((m, n)) = shape.rect_size() else {
            return Err(OracleError::PeriodicNeedsRectangle);
        };
        let (x0, y0) = shape.min_cell().expect("nonempty rectangle");
        Box::new(move |b: BondPosition| {
            let mut b = b;
            if px && !b.is_vertical() && b.x2() == 2 * (x0 + m as i64) - 1 {
                b = b.translated(-(m as i64), 0);
            }
            if py && b.is_vertical() && b.y2() == 2 * (y0 + n as i64) - 1 {
                b = b.translated(0, -(n as i64));
            }
            b
        })
    } else {
        Box::new(|b| b)
    };

    let mut cells: Vec<(i64, i64)> = shape.cells().collect();
    cells.sort_by_key(|&(x, y)| (y, x));
    let mut bond_order: BTreeMap<BondPosition, usize> = BTreeMap::new();
    for &(x, y) in &cells {
        for b in cell_bonds(x, y) {
            let next = bond_order.len();
            bond_order.entry(wrap(b)).or_insert(next);
        }
    }
    let cell_slots: Vec<[usize; 4]> = cells
        .iter()
        .map(|&(x, y)| {
            let bonds = cell_bonds(x, y);
            [
                bond_order[&wrap(bonds[0])],
                bond_order[&wrap(bonds[1])],
                bond_order[&wrap(bonds[2])],
                bond_order[&wrap(bonds[3])],
            ]
        })
        .collect();

    let mut fixed = vec![None; bond_order.len()];
    let boundary = shape.boundary_bonds();
    for (&bond, &color) in spec.fixed() {
        if color >= ts.colors() {
            return Err(OracleError::ColorOutOfRange { color, dim: ts.colors() });
        }
        match bond_order.get(&bond) {
            Some(&slot) if boundary.contains(&bond) && wrap(bond) == bond => {
                fixed[slot] = Some(color)
            }
            _ => return Err(OracleError::FixedBondNotFree(bond)),
        }
    }

    Ok(Search { tiles: ts.tiles().collect(), cell_slots, fixed, bond_order })
}

/// Exact number of valid tile assignments on the shape under the boundary
/// conditions. The empty shape counts one (the empty tiling).
pub fn count_tilings(
    ts: &ClassicalTileset,
    shape: &Shape,
    spec: &BoundarySpec,
) -> Result<BigUint, OracleError> {
    count_tilings_with_limit(ts, shape, spec, DEFAULT_CELL_LIMIT)
}

pub fn count_tilings_with_limit(
    ts: &ClassicalTileset,
    shape: &Shape,
    spec: &BoundarySpec,
    max_cells: usize,
) -> Result<BigUint, OracleError> {
    let search = build_search(ts, shape, spec, max_cells)?;
    let mut count = BigUint::zero();
    search.run(&mut |_| count += 1u32);
    Ok(count)
}

/// Counts of valid tilings bucketed by the boundary coloring, keyed in
/// canonical free-bond order. One exhaustive enumeration serves every
/// boundary condition at once.
pub fn count_tilings_by_boundary(
    ts: &ClassicalTileset,
    shape: &Shape,
    max_cells: usize,
) -> Result<BTreeMap<Vec<usize>, BigUint>, OracleError> {
    let spec = BoundarySpec::free();
    let search = build_search(ts, shape, &spec, max_cells)?;
    let boundary_slots: Vec<usize> = shape
        .boundary_bonds()
        .iter()
        .map(|&b| search.slot_of(b).expect("boundary bonds are interned"))
        .collect();
    let mut buckets: BTreeMap<Vec<usize>, BigUint> = BTreeMap::new();
    search.run(&mut |colors| {
        let key: Vec<usize> = boundary_slots.iter().map(|&s| colors[s]).collect();
        *buckets.entry(key).or_insert_with(BigUint::zero) += 1u32;
    });
    Ok(buckets)
}

/// Exact number of admissible length-`n` patterns from the domino set,
/// starting with color `a` and ending with color `b`. Small lengths are
/// enumerated exhaustively; longer ones go through big-integer matrix powers.
pub fn count_paths(
    dominoes: &[(usize, usize)],
    colors: usize,
    n: u32,
    a: usize,
    b: usize,
) -> Result<BigUint, OracleError> {
    for &(x, y) in dominoes {
        for color in [x, y] {
            if color >= colors {
                return Err(OracleError::ColorOutOfRange { color, dim: colors });
            }
        }
    }
    for color in [a, b] {
        if color >= colors {
            return Err(OracleError::ColorOutOfRange { color, dim: colors });
        }
    }
    if n == 0 {
        return Ok(if a == b { BigUint::one() } else { BigUint::zero() });
    }
    if n <= 12 {
        // depth-first enumeration of color sequences
        fn dfs(dominoes: &[(usize, usize)], current: usize, left: u32, target: usize) -> BigUint {
            if left == 0 {
                return if current == target { BigUint::one() } else { BigUint::zero() };
            }
            let mut total = BigUint::zero();
            for &(x, y) in dominoes {
                if x == current {
                    total += dfs(dominoes, y, left - 1, target);
                }
            }
            total
        }
        return Ok(dfs(dominoes, a, n, b));
    }
    // adjacency-matrix power in exact arithmetic
    let mut adj = vec![BigUint::zero(); colors * colors];
    for &(x, y) in dominoes {
        adj[x * colors + y] = BigUint::one();
    }
    let mut result: Vec<BigUint> = (0..colors * colors)
        .map(|i| if i / colors == i % colors { BigUint::one() } else { BigUint::zero() })
        .collect();
    let mut base = adj;
    let mut e = n;
    let mul = |p: &[BigUint], q: &[BigUint]| -> Vec<BigUint> {
        let mut out = vec![BigUint::zero(); colors * colors];
        for i in 0..colors {
            for k in 0..colors {
                if p[i * colors + k].is_zero() {
                    continue;
                }
                for j in 0..colors {
                    let term = &p[i * colors + k] * &q[k * colors + j];
                    out[i * colors + j] += term;
                }
            }
        }
        out
    };
    while e > 0 {
        if e & 1 == 1 {
            result = mul(&result, &base);
        }
        e >>= 1;
        if e > 0 {
            base = mul(&base, &base);
        }
    }
    Ok(result[a * colors + b].clone())
}

/// Direct state-vector evolution of the coined walk: the walker starts at
/// the center in a uniform superposition of directions, and each step applies
/// the coin and then the shift. Returns `|amplitude|²` per (position,
/// direction); the total is 1 for unitary coins.
pub fn walk_reference(
    coin: &CoinOperator,
    steps: usize,
    width: usize,
) -> Result<WalkDistribution, OracleError> {
    let needed = 2 * steps + 1;
    if width < needed {
        return Err(OracleError::WidthTooSmall { width, needed });
    }
    let mid = width / 2;
    let mut amp = vec![[C64::new(0.0, 0.0); 2]; width];
    let s = 1.0 / 2f64.sqrt();
    amp[mid] = [C64::new(s, 0.0), C64::new(s, 0.0)];
    for _ in 0..steps {
        let mut next = vec![[C64::new(0.0, 0.0); 2]; width];
        for (x, &[al, ar]) in amp.iter().enumerate() {
            if al.norm_sqr() == 0.0 && ar.norm_sqr() == 0.0 {
                continue;
            }
            let to_left = coin.a * al + coin.b * ar;
            let to_right = coin.c * al + coin.d * ar;
            debug_assert!(x > 0 && x + 1 < width, "width keeps the walker off the edges");
            next[x - 1][0] += to_left;
            next[x + 1][1] += to_right;
        }
        amp = next;
    }
    let p = amp.iter().map(|[l, r]| [l.norm_sqr(), r.norm_sqr()]).collect();
    Ok(WalkDistribution::new(p))
}
