//! Concrete tilesets: classical lifts, the dimer model and its weighted
//! variant, the cancelling tile whose contractions vanish on every multi-cell
//! shape, interference-aperiodic unions, quantum-walk tiles, partitioned
//! automaton tiles, and a published aperiodic fixture.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::tensor::{C64, Tensor, TensorError};
use crate::tile::{TensorialTile, TileError};

#[derive(Debug, Error)]
pub enum ConstructionError {
    #[error("color {color} out of range for alphabet size {dim}")]
    ColorOutOfRange { color: usize, dim: usize },
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error(transparent)]
    Tile(#[from] TileError),
}

/// A classical Wang tileset: quadruples (up, right, down, left) over a finite
/// color alphabet.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassicalTileset {
    colors: usize,
    tiles: BTreeSet<[usize; 4]>,
}

impl ClassicalTileset {
    pub fn new(
        colors: usize,
        tiles: impl IntoIterator<Item = [usize; 4]>,
    ) -> Result<Self, ConstructionError> {
        let tiles: BTreeSet<[usize; 4]> = tiles.into_iter().collect();
        for tile in &tiles {
            for &c in tile {
                if c >= colors {
                    return Err(ConstructionError::ColorOutOfRange { color: c, dim: colors });
                }
            }
        }
        Ok(ClassicalTileset { colors, tiles })
    }

    /// Every quadruple over the alphabet.
    pub fn full(colors: usize) -> Self {
        let mut tiles = BTreeSet::new();
        for u in 0..colors {
            for r in 0..colors {
                for d in 0..colors {
                    for l in 0..colors {
                        tiles.insert([u, r, d, l]);
                    }
                }
            }
        }
        ClassicalTileset { colors, tiles }
    }

    pub fn empty(colors: usize) -> Self {
        ClassicalTileset { colors, tiles: BTreeSet::new() }
    }

    pub fn colors(&self) -> usize {
        self.colors
    }

    pub fn len(&self) -> usize {
        self.tiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tiles.is_empty()
    }

    pub fn tiles(&self) -> impl Iterator<Item = [usize; 4]> + '_ {
        self.tiles.iter().copied()
    }

    pub fn contains(&self, tile: [usize; 4]) -> bool {
        self.tiles.contains(&tile)
    }

    /// The possibilistic tile carried by this tileset.
    pub fn to_tile(&self) -> TensorialTile {
        from_classical(self)
    }
}

/// Possibilistic lift: coefficient 1 exactly on the tileset's quadruples.
pub fn from_classical(ts: &ClassicalTileset) -> TensorialTile {
    let mut t = Tensor::zeros(ts.colors(), 4);
    for tile in ts.tiles() {
        t.set(&tile, C64::new(1.0, 0.0));
    }
    TensorialTile::new(t).expect("arity 4 by construction")
}

/// The dimer tileset over two colors: a cell carries exactly one dimer end,
/// so a tile is admissible iff exactly one side has color 1.
pub fn dimer_tileset() -> ClassicalTileset {
    let tiles = (0..4).map(|side| {
        let mut t = [0usize; 4];
        t[side] = 1;
        t
    });
    ClassicalTileset::new(2, tiles).expect("colors in range")
}

/// Possibilistic dimer tile.
pub fn dimer() -> TensorialTile {
    dimer_tileset().to_tile()
}

/// Quantum dimer variant: vertical dimers carry weight 7/16, horizontal ones
/// −1/16, with amplitudes √7/4, √7/4, −1/4 and 1/4 on the four dimer ends.
pub fn weighted_dimer() -> TensorialTile {
    let s7 = 7f64.sqrt() / 4.0;
    TensorialTile::from_entries(
        2,
        &[
            ([1, 0, 0, 0], C64::new(s7, 0.0)),
            ([0, 0, 1, 0], C64::new(s7, 0.0)),
            ([0, 1, 0, 0], C64::new(-0.25, 0.0)),
            ([0, 0, 0, 1], C64::new(0.25, 0.0)),
        ],
    )
    .expect("indices in range")
}

/// The rank-one pairing of a matrix with itself:
/// `T[x, y, z, t] = n[x, z] · n[t, y]` (up/down through `n`, left/right
/// through `n`). With a nilpotent `n`, every rectangle strictly larger than
/// one cell contracts to zero.
pub fn nilpotent_tile(n: &Tensor) -> Result<TensorialTile, ConstructionError> {
    if n.arity() != 2 {
        return Err(TensorError::ArityMismatch(n.arity(), 2).into());
    }
    let d = n.dim();
    let mut t = Tensor::zeros(d, 4);
    for x in 0..d {
        for y in 0..d {
            for z in 0..d {
                for w in 0..d {
                    t.set(&[x, y, z, w], n.get(&[x, z]) * n.get(&[w, y]));
                }
            }
        }
    }
    Ok(TensorialTile::new(t)?)
}

/// The full-support matrix `½ [[1, 1], [−1, −1]]`, which squares to zero.
pub fn cancelling_matrix() -> Tensor {
    Tensor::from_real_rows(&[vec![0.5, 0.5], vec![-0.5, -0.5]]).expect("square rows")
}

/// [`nilpotent_tile`] of [`cancelling_matrix`]: full support, yet zero on
/// every shape with two or more cells.
pub fn nilpotent_tile_default() -> TensorialTile {
    nilpotent_tile(&cancelling_matrix()).expect("arity 2")
}

/// Union with the default cancelling tile. When `base` tiles the plane
/// aperiodically, the union keeps tiling the plane and stays trace-aperiodic
/// while its support gains periodic tilings.
pub fn quantum_aperiodic(base: &TensorialTile) -> TensorialTile {
    base.union(&nilpotent_tile_default())
}

/// 2×2 coin operator driving a walker's direction update.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoinOperator {
    pub a: C64,
    pub b: C64,
    pub c: C64,
    pub d: C64,
}

impl CoinOperator {
    pub fn new(a: C64, b: C64, c: C64, d: C64) -> Self {
        CoinOperator { a, b, c, d }
    }

    pub fn from_reals(a: f64, b: f64, c: f64, d: f64) -> Self {
        CoinOperator {
            a: C64::new(a, 0.0),
            b: C64::new(b, 0.0),
            c: C64::new(c, 0.0),
            d: C64::new(d, 0.0),
        }
    }

    pub fn hadamard() -> Self {
        let s = 1.0 / 2f64.sqrt();
        Self::from_reals(s, s, s, -s)
    }

    pub fn identity() -> Self {
        Self::from_reals(1.0, 0.0, 0.0, 1.0)
    }

    /// All-ones coin: the walk degenerates to the uniform random walk once
    /// probabilities are renormalized.
    pub fn classical() -> Self {
        Self::from_reals(1.0, 1.0, 1.0, 1.0)
    }

    /// Columns orthonormal within `eps`.
    pub fn is_unitary(&self, eps: f64) -> bool {
        let col0 = self.a.norm_sqr() + self.c.norm_sqr();
        let col1 = self.b.norm_sqr() + self.d.norm_sqr();
        let cross = self.a.conj() * self.b + self.c.conj() * self.d;
        (col0 - 1.0).abs() <= eps && (col1 - 1.0).abs() <= eps && cross.norm() <= eps
    }
}

/// Walker colors on bonds: empty, moving left, moving right.
pub const WALK_EMPTY: usize = 0;
pub const WALK_LEFT: usize = 1;
pub const WALK_RIGHT: usize = 2;

/// One row of tiles advances a walk step: three propagation tiles move the
/// walker (or its absence) across the row, four coin tiles apply the
/// direction update. The tile is left unnormalized (Σ|·|² = 5 for a unitary
/// coin); tiling predicates are scale-invariant and walk readouts are
/// renormalized downstream.
pub fn walk_tile(coin: &CoinOperator) -> TensorialTile {
    let one = C64::new(1.0, 0.0);
    let (e, l, r) = (WALK_EMPTY, WALK_LEFT, WALK_RIGHT);
    TensorialTile::from_entries(
        3,
        &[
            // propagation: empty cells, and walkers in transit entering from a side
            ([e, e, e, e], one),
            ([r, e, e, r], one),
            ([l, l, e, e], one),
            // coin: walker on the lower edge leaves through a side
            ([e, e, l, l], coin.a),
            ([e, r, l, e], coin.c),
            ([e, e, r, l], coin.b),
            ([e, r, r, e], coin.d),
        ],
    )
    .expect("indices in range")
}

/// Wrap a partitioned-automaton local operator as a tile. The operator's
/// indices are read as (out₁, out₂, in₁, in₂); inputs sit on the down and
/// right sides, outputs on the up and left sides, so stacking rows composes
/// time steps. For a unitary operator the squared norm is `dim²`, and the
/// rescaled tile `u / dim` is quantum.
pub fn pqca_tile(u: &Tensor) -> Result<TensorialTile, ConstructionError> {
    if u.arity() != 4 {
        return Err(TensorError::ArityMismatch(u.arity(), 4).into());
    }
    // (out₁, out₂, in₁, in₂) → (up, left, down, right): position k moves to σ(k)
    let tile = u.permute(&[0, 3, 2, 1])?;
    Ok(TensorialTile::new(tile)?)
}

#[derive(Deserialize)]
struct FixtureFile {
    version: u32,
    name: String,
    colors: usize,
    tiles: Vec<[usize; 4]>,
}

/// A published aperiodic Wang tileset: the eleven-tile set over colors
/// {0..4} (four distinct horizontal colors) that is minimal for aperiodicity.
/// Only bounded properties are verified in this repository — the tileset
/// tiles rectangles and has no toroidal period within tested bounds; full
/// aperiodicity is taken from the literature.
pub fn fixture_aperiodic() -> &'static ClassicalTileset {
    static FIXTURE: OnceLock<ClassicalTileset> = OnceLock::new();
    FIXTURE.get_or_init(|| {
        let raw = include_str!("../data/jeandel_rao_v1.json");
        let file: FixtureFile = serde_json::from_str(raw).expect("fixture data parses");
        assert_eq!(file.version, 1);
        assert_eq!(file.name, "jeandel-rao-11");
        ClassicalTileset::new(file.colors, file.tiles).expect("fixture colors in range")
    })
}
