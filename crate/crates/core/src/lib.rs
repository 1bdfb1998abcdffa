//! Tensorial Wang dominoes and tiles.
//!
//! Classical Wang tiles generalize to tensors: a complex coefficient per
//! tile assigns a count (possibilistic), a probability (probabilistic) or an
//! amplitude (quantum) to each colored tile, and juxtaposition becomes tensor
//! contraction. Matrix powers enumerate line patterns, shape contractions
//! enumerate plane patterns, and traces enumerate periodic ones — so tiling
//! and aperiodicity questions turn into nilpotency and trace-vanishing
//! questions that survive the leap to complex coefficients, where destructive
//! interference can remove patterns the underlying classical tileset allows.
//!
//! The crate provides:
//!
//! - [`tensor`]: dense complex tensor arithmetic (products, contractions,
//!   permutations, direct sums);
//! - [`domino`]: one-dimensional tensorial dominoes, line tiling via the
//!   trace characterization of nilpotency;
//! - [`tile`] and [`transfer`]: two-dimensional tensorial tiles, shape
//!   contraction, toroidal and directional traces, bounded plane-tiling and
//!   weak/strong aperiodicity verdicts;
//! - [`constructions`]: the dimer and weighted dimer tiles, the cancelling
//!   (nilpotent) tile, interference-aperiodic unions, quantum-walk and
//!   partitioned-automaton tiles, and a published aperiodic eleven-tile
//!   fixture;
//! - [`oracle`]: independent brute-force tiling counters and a state-vector
//!   quantum-walk simulator used as ground truth in the test suite;
//! - [`walk`]: quantum walks run as grid contractions;
//! - [`io`]: the JSON tile-file format shared with the command-line tool.

pub mod classify;
pub mod constructions;
pub mod domino;
pub mod io;
pub mod network;
pub mod oracle;
pub mod shape;
pub mod tensor;
pub mod tile;
pub mod transfer;
pub mod verdict;
pub mod walk;

pub use classify::Classification;
pub use constructions::{ClassicalTileset, CoinOperator, ConstructionError};
pub use domino::{DominoError, TensorialDomino};
pub use io::{TileFile, TileFileError};
pub use network::{Budget, ContractionError};
pub use oracle::{BoundarySpec, OracleError};
pub use shape::{BondPosition, Shape};
pub use tensor::{C64, Tensor, TensorError, DEFAULT_EPS};
pub use tile::{BoundaryTensor, TensorialTile, TileError};
pub use verdict::{DirectionRefutation, SquareRefutation, TorusRefutation, Verdict};
pub use walk::{WalkDistribution, WalkError};
