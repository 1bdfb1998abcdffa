//! Shared generators for the integration suites. Everything is seeded so
//! failures reproduce.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use tensortiles::constructions::ClassicalTileset;
use tensortiles::{C64, Shape, Tensor, TensorialDomino, TensorialTile};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(rng: &mut ChaCha8Rng) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn random_tensor(rng: &mut ChaCha8Rng, dim: usize, arity: usize) -> Tensor {
    let coeffs = (0..dim.pow(arity as u32)).map(|_| gaussian(rng)).collect();
    Tensor::new(dim, arity, coeffs).expect("sizes agree")
}

pub fn random_domino(rng: &mut ChaCha8Rng, dim: usize) -> TensorialDomino {
    TensorialDomino::new(random_tensor(rng, dim, 2)).expect("arity 2")
}

pub fn random_tile(rng: &mut ChaCha8Rng, dim: usize) -> TensorialTile {
    TensorialTile::new(random_tensor(rng, dim, 4)).expect("arity 4")
}

/// Tile with small integer complex entries: arithmetic on it is exact.
pub fn random_integer_tile(rng: &mut ChaCha8Rng, dim: usize) -> TensorialTile {
    let coeffs = (0..dim.pow(4))
        .map(|_| C64::new(rng.gen_range(-2..=2) as f64, rng.gen_range(-2..=2) as f64))
        .collect();
    TensorialTile::new(Tensor::new(dim, 4, coeffs).expect("sizes agree")).expect("arity 4")
}

/// Random subset of all quadruples, each kept with probability `density`.
pub fn random_tileset(rng: &mut ChaCha8Rng, colors: usize, density: f64) -> ClassicalTileset {
    let mut tiles = Vec::new();
    for u in 0..colors {
        for r in 0..colors {
            for d in 0..colors {
                for l in 0..colors {
                    if rng.gen_bool(density) {
                        tiles.push([u, r, d, l]);
                    }
                }
            }
        }
    }
    ClassicalTileset::new(colors, tiles).expect("colors in range")
}

/// Possibilistic tile that tiles the `(p, q)` torus by construction: color
/// every bond of the torus at random and collect the tiles this induces.
pub fn planted_periodic_tile(
    rng: &mut ChaCha8Rng,
    p: usize,
    q: usize,
    colors: usize,
) -> TensorialTile {
    let vertical: Vec<Vec<usize>> =
        (0..p).map(|_| (0..q).map(|_| rng.gen_range(0..colors)).collect()).collect();
    let horizontal: Vec<Vec<usize>> =
        (0..p).map(|_| (0..q).map(|_| rng.gen_range(0..colors)).collect()).collect();
    let mut tiles = Vec::new();
    for x in 0..p {
        for y in 0..q {
            let up = vertical[x][y];
            let down = vertical[x][(y + q - 1) % q];
            let right = horizontal[x][y];
            let left = horizontal[(x + p - 1) % p][y];
            tiles.push([up, right, down, left]);
        }
    }
    ClassicalTileset::new(colors, tiles).expect("colors in range").to_tile()
}

/// Every subset of the `w × h` grid (including the empty one).
pub fn all_subshapes(w: i64, h: i64) -> Vec<Shape> {
    let cells: Vec<(i64, i64)> =
        (1..=w).flat_map(|x| (1..=h).map(move |y| (x, y))).collect();
    let mut shapes = Vec::with_capacity(1 << cells.len());
    for mask in 0..(1u32 << cells.len()) {
        let selected = cells
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, &c)| c);
        shapes.push(Shape::new(selected));
    }
    shapes
}

/// The five-cell shape used as the running contraction example.
pub fn five_cell_shape() -> Shape {
    Shape::new([(-1, 1), (1, 1), (0, 0), (1, 0), (0, -1)])
}
