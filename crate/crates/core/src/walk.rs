//! Quantum walks run as tile contractions.
//!
//! The walk tile's grid encodes the space-time diagram of a coined walk: the
//! bottom boundary carries the initial walker, empty side boundaries keep it
//! inside, and the top boundary's single-walker amplitudes are the walk's
//! outcome. The grid must be wide enough that the walker never reaches a
//! side (`width ≥ 2·steps + 1`) and of odd width so the start sits at the
//! exact center.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::constructions::{walk_tile, CoinOperator, WALK_EMPTY, WALK_LEFT, WALK_RIGHT};
use crate::network::Budget;
use crate::shape::{cell_bonds, Shape};
use crate::tensor::C64;
use crate::tile::TileError;

#[derive(Debug, Error)]
pub enum WalkError {
    #[error("width {width} must be at least 2·steps+1 = {needed}")]
    WidthTooSmall { width: usize, needed: usize },
    #[error("width {0} must be odd so the walker starts at the exact center")]
    WidthNotOdd(usize),
    #[error(transparent)]
    Tile(#[from] TileError),
}

/// `|amplitude|²` per position and direction, positions indexed left to
/// right. Values are raw; [`WalkDistribution::renormalized`] divides by the
/// total, which only matters for non-unitary coins.
#[derive(Clone, Debug, PartialEq)]
pub struct WalkDistribution {
    p: Vec<[f64; 2]>,
}

impl WalkDistribution {
    pub(crate) fn new(p: Vec<[f64; 2]>) -> Self {
        WalkDistribution { p }
    }

    pub fn width(&self) -> usize {
        self.p.len()
    }

    pub fn center(&self) -> usize {
        self.p.len() / 2
    }

    /// Raw `[p_left, p_right]` per position.
    pub fn raw(&self) -> &[[f64; 2]] {
        &self.p
    }

    pub fn total(&self) -> f64 {
        self.p.iter().map(|[l, r]| l + r).sum()
    }

    pub fn renormalized(&self) -> Vec<[f64; 2]> {
        let t = self.total();
        if t == 0.0 {
            return self.p.clone();
        }
        self.p.iter().map(|[l, r]| [l / t, r / t]).collect()
    }

    /// Position offset from the center.
    pub fn offset(&self, position: usize) -> i64 {
        position as i64 - self.center() as i64
    }
}

/// Contract a `width × steps` grid of walk tiles: bottom boundary in the
/// centered uniform superposition of directions, side boundaries empty, top
/// boundary read out.
pub fn simulate_walk(
    coin: &CoinOperator,
    steps: usize,
    width: usize,
    budget: Budget,
) -> Result<WalkDistribution, WalkError> {
    if width % 2 == 0 {
        return Err(WalkError::WidthNotOdd(width));
    }
    let needed = 2 * steps + 1;
    if width < needed {
        return Err(WalkError::WidthTooSmall { width, needed });
    }
    let mid = width / 2;
    if steps == 0 {
        let mut p = vec![[0.0, 0.0]; width];
        p[mid] = [0.5, 0.5];
        return Ok(WalkDistribution::new(p));
    }

    let tile = walk_tile(coin);
    let shape = Shape::rect(width as u32, steps as u32);
    let zero = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let empty = vec![one, zero, zero];
    let superposed = {
        let s = C64::new(1.0 / 2f64.sqrt(), 0.0);
        vec![zero, s, s]
    };

    let mut caps: BTreeMap<_, Vec<C64>> = BTreeMap::new();
    for x in 1..=width as i64 {
        // bottom bonds: the initial configuration
        let bottom = cell_bonds(x, 1)[2];
        caps.insert(bottom, if x == mid as i64 + 1 { superposed.clone() } else { empty.clone() });
    }
    for y in 1..=steps as i64 {
        caps.insert(cell_bonds(1, y)[3], empty.clone());
        caps.insert(cell_bonds(width as i64, y)[1], empty.clone());
    }

    let top = tile.contract_with_boundary(&shape, &caps, budget)?;
    debug_assert_eq!(top.free_bonds().len(), width);

    let mut p = vec![[0.0, 0.0]; width];
    let mut idx = vec![WALK_EMPTY; width];
    for (pos, probs) in p.iter_mut().enumerate() {
        for (slot, color) in [(0, WALK_LEFT), (1, WALK_RIGHT)] {
            idx[pos] = color;
            probs[slot] = top.get(&idx).norm_sqr();
            idx[pos] = WALK_EMPTY;
        }
    }
    Ok(WalkDistribution::new(p))
}
