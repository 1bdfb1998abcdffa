//! Two-dimensional tensorial tiles and shape contraction.
//!
//! A tensorial tile is an arity-4 tensor with indices in clockwise order
//! starting from the top: (up, right, down, left). Placing one copy of the
//! tile on every cell of a finite shape and contracting every bond shared by
//! two cells yields the shape's boundary tensor `S·T`; its free indices are
//! the boundary colors, ordered lexicographically by bond position.
//!
//! Nonzero tests never materialize `S·T`: they contract the doubled network
//! in which every cell carries the tile and its conjugate, with each free
//! bond contracted between the two copies, producing `‖S·T‖²` directly.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::classify::{self, Classification};
use crate::network::{peak_open_labels, Budget, ContractionError, Network, Role};
use crate::shape::{cell_bonds, BondPosition, Shape};
use crate::tensor::{C64, Tensor, TensorError};

#[derive(Debug, Error)]
pub enum TileError {
    #[error("a tensorial tile must have arity 4, got {0}")]
    NotArity4(usize),
    #[error("direction vector must be nonzero")]
    ZeroDirection,
    #[error("boundary vector given for {0}, which is not a free bond of the shape")]
    NotAFreeBond(BondPosition),
    #[error(transparent)]
    Contraction(#[from] ContractionError),
    #[error(transparent)]
    Tensor(#[from] TensorError),
}

/// Arity-4 tensor over the color alphabet; indices (up, right, down, left).
#[derive(Clone, Debug, PartialEq)]
pub struct TensorialTile {
    tensor: Tensor,
}

impl TensorialTile {
    pub fn new(tensor: Tensor) -> Result<Self, TileError> {
        if tensor.arity() != 4 {
            return Err(TileError::NotArity4(tensor.arity()));
        }
        Ok(TensorialTile { tensor })
    }

    /// Tile with the given nonzero entries, zero elsewhere.
    pub fn from_entries(dim: usize, entries: &[([usize; 4], C64)]) -> Result<Self, TileError> {
        let mut t = Tensor::zeros(dim, 4);
        for (idx, value) in entries {
            for &i in idx {
                if i >= dim {
                    return Err(TensorError::IndexOutOfRange { index: i, dim }.into());
                }
            }
            t.set(idx, *value);
        }
        Ok(TensorialTile { tensor: t })
    }

    pub fn tensor(&self) -> &Tensor {
        &self.tensor
    }

    pub fn into_tensor(self) -> Tensor {
        self.tensor
    }

    pub fn dim(&self) -> usize {
        self.tensor.dim()
    }

    /// Coefficient at (up, right, down, left).
    pub fn get(&self, up: usize, right: usize, down: usize, left: usize) -> C64 {
        self.tensor.get(&[up, right, down, left])
    }

    pub fn classify(&self, eps: f64) -> Classification {
        classify::classify_tensor(&self.tensor, eps)
    }

    pub fn is_possibilistic(&self, eps: f64) -> bool {
        classify::is_possibilistic(&self.tensor, eps)
    }

    pub fn is_probabilistic(&self, eps: f64) -> bool {
        classify::is_probabilistic(&self.tensor, eps)
    }

    pub fn is_quantum(&self, eps: f64) -> bool {
        classify::is_quantum(&self.tensor, eps)
    }

    /// Quadruples (up, right, down, left) with coefficient above `eps`.
    pub fn support(&self, eps: f64) -> Vec<[usize; 4]> {
        let d = self.dim();
        let mut out = Vec::new();
        let mut idx = [0usize; 4];
        loop {
            if self.tensor.get(&idx).norm() > eps {
                out.push(idx);
            }
            if !crate::tensor::increment(&mut idx, d) {
                break;
            }
        }
        out
    }

    /// 0/1 tile carried by the support.
    pub fn support_lift(&self, eps: f64) -> TensorialTile {
        let mut t = Tensor::zeros(self.dim(), 4);
        for idx in self.support(eps) {
            t.set(&idx, C64::new(1.0, 0.0));
        }
        TensorialTile { tensor: t }
    }

    /// Disjoint union of alphabets: the direct sum of the tensors.
    pub fn union(&self, other: &TensorialTile) -> TensorialTile {
        TensorialTile {
            tensor: self.tensor.direct_sum(&other.tensor).expect("both arity 4"),
        }
    }

    /// Cartesian product of alphabets: the per-index Kronecker product.
    pub fn product(&self, other: &TensorialTile) -> TensorialTile {
        TensorialTile {
            tensor: self.tensor.kron_per_index(&other.tensor).expect("both arity 4"),
        }
    }

    pub fn conj(&self) -> TensorialTile {
        TensorialTile { tensor: self.tensor.conj() }
    }

    pub fn scaled(&self, factor: C64) -> TensorialTile {
        TensorialTile { tensor: self.tensor.scaled(factor) }
    }

    /// `S·T`: one copy of the tile per cell, shared bonds contracted, free
    /// bonds in canonical order. Translation invariant.
    pub fn contract_shape(&self, shape: &Shape, budget: Budget) -> Result<BoundaryTensor, TileError> {
        self.contract_with_boundary(shape, &BTreeMap::new(), budget)
    }

    /// `S·T` with some free bonds contracted against fixed boundary vectors.
    pub fn contract_with_boundary(
        &self,
        shape: &Shape,
        caps: &BTreeMap<BondPosition, Vec<C64>>,
        budget: Budget,
    ) -> Result<BoundaryTensor, TileError> {
        let multiplicities = shape.bond_multiplicities();
        for bond in caps.keys() {
            if multiplicities.get(bond) != Some(&1) {
                return Err(TileError::NotAFreeBond(*bond));
            }
        }

        let mut interner = Interner::default();
        let mut roles = Vec::new();
        let mut free_bonds = Vec::new();
        let mut free_order = Vec::new();
        for (&bond, &count) in &multiplicities {
            let id = interner.id(bond);
            debug_assert_eq!(id as usize, roles.len());
            if count >= 2 {
                roles.push(Role::Sum);
            } else if let Some(vector) = caps.get(&bond) {
                roles.push(Role::Cap(vector.clone()));
            } else {
                roles.push(Role::Free);
                free_bonds.push(bond);
                free_order.push(id);
            }
        }

        let needed = checked_pow(self.dim(), free_bonds.len());
        if needed.map_or(true, |n| n > budget.max_coeffs()) {
            return Err(ContractionError::FreeBondsOverBudget {
                free_bonds: free_bonds.len(),
                needed: needed.unwrap_or(u128::MAX),
                limit: budget.max_coeffs(),
            }
            .into());
        }

        let cells = best_cell_order(shape, &roles, &interner);
        let nodes = cells
            .iter()
            .map(|&(x, y)| {
                let labels = cell_bonds(x, y).iter().map(|&b| interner.id_existing(b)).collect();
                (&self.tensor, labels)
            })
            .collect();

        let tensor = Network { nodes, roles, free_order, budget }.contract()?;
        Ok(BoundaryTensor { free_bonds, tensor })
    }

    /// `‖S·T‖²` through the doubled network, without materializing `S·T`.
    /// Returns the squared norm and the recorded scale of the doubled
    /// contraction (a proxy for `scale(S·T)²`).
    pub fn shape_norm_sq(&self, shape: &Shape, budget: Budget) -> Result<(f64, f64), TileError> {
        let multiplicities = shape.bond_multiplicities();
        let mut interner = Interner::default();
        let mut bond_ids = Vec::new();
        for (&bond, &count) in &multiplicities {
            let id = interner.id(bond);
            debug_assert_eq!(id as usize, bond_ids.len());
            bond_ids.push((bond, count));
        }
        // Shared bonds get a ket and a bra label; free bonds share one label
        // between the two layers, which contracts the copies against each
        // other (the norm).
        let mut roles = Vec::new();
        let mut ket_label = vec![0u32; bond_ids.len()];
        let mut bra_label = vec![0u32; bond_ids.len()];
        for (id, &(_, count)) in bond_ids.iter().enumerate() {
            if count >= 2 {
                ket_label[id] = roles.len() as u32;
                roles.push(Role::Sum);
                bra_label[id] = roles.len() as u32;
                roles.push(Role::Sum);
            } else {
                let l = roles.len() as u32;
                ket_label[id] = l;
                bra_label[id] = l;
                roles.push(Role::Sum);
            }
        }

        let conj = self.tensor.conj();
        let order = doubled_cell_order(shape, &interner, &ket_label, &bra_label, &roles);
        let mut nodes = Vec::with_capacity(order.len() * 2);
        for &(x, y) in &order {
            let bonds = cell_bonds(x, y);
            let kets: Vec<u32> =
                bonds.iter().map(|&b| ket_label[interner.id_existing(b) as usize]).collect();
            let bras: Vec<u32> =
                bonds.iter().map(|&b| bra_label[interner.id_existing(b) as usize]).collect();
            nodes.push((&self.tensor, kets));
            nodes.push((&conj, bras));
        }

        let result = Network { nodes, roles, free_order: vec![], budget }.contract()?;
        let value = result.scalar_value().expect("scalar network");
        Ok((value.re, result.scale()))
    }

    /// Whether `S·T ≠ 0`, decided through the doubled network at tolerance
    /// `eps` relative to the recorded scale.
    pub fn shape_nonzero(&self, shape: &Shape, eps: f64, budget: Budget) -> Result<bool, TileError> {
        let (norm_sq, scale) = self.shape_norm_sq(shape, budget)?;
        Ok(norm_sq > eps * eps * scale.max(1.0))
    }

    /// Directional trace: bond positions are identified modulo integer
    /// multiples of `u`; identified bonds are summed together, the remaining
    /// ones stay free.
    pub fn directional_trace(
        &self,
        u: (i64, i64),
        m: u32,
        n: u32,
        budget: Budget,
    ) -> Result<BoundaryTensor, TileError> {
        let plan = DirectionalPlan::new(u, m, n)?;
        let needed = checked_pow(self.dim(), plan.free_bonds.len());
        if needed.map_or(true, |c| c > budget.max_coeffs()) {
            return Err(ContractionError::FreeBondsOverBudget {
                free_bonds: plan.free_bonds.len(),
                needed: needed.unwrap_or(u128::MAX),
                limit: budget.max_coeffs(),
            }
            .into());
        }
        let cells = plan.best_single_order();
        let nodes = cells
            .iter()
            .map(|&(x, y)| (&self.tensor, plan.cell_labels(x, y)))
            .collect();
        let tensor = Network {
            nodes,
            roles: plan.roles.clone(),
            free_order: plan.free_order.clone(),
            budget,
        }
        .contract()?;
        Ok(BoundaryTensor { free_bonds: plan.free_bonds.clone(), tensor })
    }

    /// Zero test for a directional trace through the doubled network.
    pub fn directional_trace_is_zero(
        &self,
        u: (i64, i64),
        m: u32,
        n: u32,
        eps: f64,
        budget: Budget,
    ) -> Result<bool, TileError> {
        let plan = DirectionalPlan::new(u, m, n)?;
        let (value, scale) = plan.doubled_norm(&self.tensor, budget)?;
        Ok(value <= eps * eps * scale.max(1.0))
    }
}

/// `S·T` together with the canonical ordering of its free indices.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryTensor {
    free_bonds: Vec<BondPosition>,
    tensor: Tensor,
}

impl BoundaryTensor {
    pub fn free_bonds(&self) -> &[BondPosition] {
        &self.free_bonds
    }

    pub fn tensor(&self) -> &Tensor {
        &self.tensor
    }

    pub fn into_tensor(self) -> Tensor {
        self.tensor
    }

    pub fn scalar_value(&self) -> Option<C64> {
        self.tensor.scalar_value()
    }

    /// Coefficient at a boundary coloring, colors listed in free-bond order.
    pub fn get(&self, colors: &[usize]) -> C64 {
        self.tensor.get(colors)
    }

    pub fn is_zero(&self, eps: f64) -> bool {
        self.tensor.is_zero(eps)
    }

    /// Contract together all free bonds lying in a common coset of `ℤu`.
    pub fn trace_mod(&self, u: (i64, i64)) -> Result<BoundaryTensor, TileError> {
        if u == (0, 0) {
            return Err(TileError::ZeroDirection);
        }
        let n = self.free_bonds.len();
        // group bonds whose difference is an integer multiple of u
        let mut group = (0..n).collect::<Vec<usize>>();
        for i in 0..n {
            for j in (i + 1)..n {
                if in_same_coset(self.free_bonds[i], self.free_bonds[j], u) {
                    let g = group[i];
                    let old = group[j];
                    for slot in group.iter_mut() {
                        if *slot == old {
                            *slot = g;
                        }
                    }
                }
            }
        }
        let mut sizes = BTreeMap::new();
        for &g in &group {
            *sizes.entry(g).or_insert(0usize) += 1;
        }
        let mut roles = vec![Role::Sum; n];
        let mut free_bonds = Vec::new();
        let mut free_order = Vec::new();
        for (i, &g) in group.iter().enumerate() {
            if g == i && sizes[&g] == 1 {
                roles[i] = Role::Free;
                free_bonds.push(self.free_bonds[i]);
                free_order.push(i as u32);
            }
        }
        let labels: Vec<u32> = group.iter().map(|&g| g as u32).collect();
        // the tensor already exists, so intermediates can only shrink
        let budget = Budget::with_max_bond_dim(1 << 26);
        let tensor =
            Network { nodes: vec![(&self.tensor, labels)], roles, free_order, budget }.contract()?;
        Ok(BoundaryTensor { free_bonds, tensor })
    }
}

fn in_same_coset(p: BondPosition, q: BondPosition, u: (i64, i64)) -> bool {
    let dx = p.x2() - q.x2();
    let dy = p.y2() - q.y2();
    let (ux, uy) = (2 * u.0, 2 * u.1);
    match (ux, uy) {
        (0, 0) => unreachable!("u is nonzero"),
        (0, uy) => dx == 0 && dy % uy == 0,
        (ux, 0) => dy == 0 && dx % ux == 0,
        (ux, uy) => dx % ux == 0 && dy % uy == 0 && dx / ux == dy / uy,
    }
}

fn checked_pow(base: usize, exp: usize) -> Option<u128> {
    let mut out: u128 = 1;
    for _ in 0..exp {
        out = out.checked_mul(base as u128)?;
    }
    Some(out)
}

#[derive(Clone, Default)]
struct Interner {
    ids: BTreeMap<BondPosition, u32>,
}

impl Interner {
    fn id(&mut self, p: BondPosition) -> u32 {
        let next = self.ids.len() as u32;
        *self.ids.entry(p).or_insert(next)
    }

    fn id_existing(&self, p: BondPosition) -> u32 {
        self.ids[&p]
    }
}

/// Pick the cell sweep (column-major or row-major) with the smaller peak
/// number of open bonds.
fn best_cell_order(shape: &Shape, roles: &[Role], interner: &Interner) -> Vec<(i64, i64)> {
    let mut col: Vec<(i64, i64)> = shape.cells().collect();
    col.sort_by_key(|&(x, y)| (x, y));
    let mut row = col.clone();
    row.sort_by_key(|&(x, y)| (y, x));
    let labels = |cells: &[(i64, i64)]| -> Vec<Vec<u32>> {
        cells
            .iter()
            .map(|&(x, y)| cell_bonds(x, y).iter().map(|&b| interner.id_existing(b)).collect())
            .collect()
    };
    if peak_open_labels(&labels(&col), roles) <= peak_open_labels(&labels(&row), roles) {
        col
    } else {
        row
    }
}

fn doubled_cell_order(
    shape: &Shape,
    interner: &Interner,
    ket: &[u32],
    bra: &[u32],
    roles: &[Role],
) -> Vec<(i64, i64)> {
    let mut col: Vec<(i64, i64)> = shape.cells().collect();
    col.sort_by_key(|&(x, y)| (x, y));
    let mut row = col.clone();
    row.sort_by_key(|&(x, y)| (y, x));
    let labels = |cells: &[(i64, i64)]| -> Vec<Vec<u32>> {
        let mut out = Vec::with_capacity(cells.len() * 2);
        for &(x, y) in cells {
            let bonds = cell_bonds(x, y);
            out.push(bonds.iter().map(|&b| ket[interner.id_existing(b) as usize]).collect());
            out.push(bonds.iter().map(|&b| bra[interner.id_existing(b) as usize]).collect());
        }
        out
    };
    if peak_open_labels(&labels(&col), roles) <= peak_open_labels(&labels(&row), roles) {
        col
    } else {
        row
    }
}

/// Bond identification of `R_{m,n}` modulo `ℤu`, shared by the materializing
/// and the zero-testing directional traces.
struct DirectionalPlan {
    m: u32,
    n: u32,
    u: (i64, i64),
    rep_ids: BTreeMap<BondPosition, u32>,
    roles: Vec<Role>,
    free_bonds: Vec<BondPosition>,
    free_order: Vec<u32>,
}

impl DirectionalPlan {
    fn new(u: (i64, i64), m: u32, n: u32) -> Result<Self, TileError> {
        if u == (0, 0) {
            return Err(TileError::ZeroDirection);
        }
        let shape = Shape::rect(m, n);
        let mut slot_counts: BTreeMap<BondPosition, usize> = BTreeMap::new();
        for (x, y) in shape.cells() {
            for b in cell_bonds(x, y) {
                *slot_counts.entry(rep_mod_u(b, u, m, n)).or_insert(0) += 1;
            }
        }
        let mut rep_ids = BTreeMap::new();
        let mut roles = Vec::new();
        let mut free_bonds = Vec::new();
        let mut free_order = Vec::new();
        for (&rep, &count) in &slot_counts {
            let id = roles.len() as u32;
            rep_ids.insert(rep, id);
            if count >= 2 {
                roles.push(Role::Sum);
            } else {
                roles.push(Role::Free);
                free_bonds.push(rep);
                free_order.push(id);
            }
        }
        Ok(DirectionalPlan { m, n, u, rep_ids, roles, free_bonds, free_order })
    }

    fn cell_labels(&self, x: i64, y: i64) -> Vec<u32> {
        cell_bonds(x, y)
            .iter()
            .map(|&b| self.rep_ids[&rep_mod_u(b, self.u, self.m, self.n)])
            .collect()
    }

    fn best_single_order(&self) -> Vec<(i64, i64)> {
        let shape = Shape::rect(self.m, self.n);
        let mut col: Vec<(i64, i64)> = shape.cells().collect();
        col.sort_by_key(|&(x, y)| (x, y));
        let mut row = col.clone();
        row.sort_by_key(|&(x, y)| (y, x));
        let labels = |cells: &[(i64, i64)]| -> Vec<Vec<u32>> {
            cells.iter().map(|&(x, y)| self.cell_labels(x, y)).collect()
        };
        if peak_open_labels(&labels(&col), &self.roles) <= peak_open_labels(&labels(&row), &self.roles)
        {
            col
        } else {
            row
        }
    }

    /// `‖tr_u(R·T)‖²` through the doubled network.
    fn doubled_norm(&self, tile: &Tensor, budget: Budget) -> Result<(f64, f64), TileError> {
        let base = self.roles.len();
        // labels 0..base are the ket copies; free reps share them with the
        // bra layer, summed reps get a second label
        let mut roles = vec![Role::Sum; base];
        let mut bra_of = vec![0u32; base];
        for (id, role) in self.roles.iter().enumerate() {
            match role {
                Role::Free => bra_of[id] = id as u32,
                _ => {
                    bra_of[id] = roles.len() as u32;
                    roles.push(Role::Sum);
                }
            }
        }

        let conj = tile.conj();
        let cells = {
            let shape = Shape::rect(self.m, self.n);
            let mut col: Vec<(i64, i64)> = shape.cells().collect();
            col.sort_by_key(|&(x, y)| (x, y));
            let mut row = col.clone();
            row.sort_by_key(|&(x, y)| (y, x));
            let labels = |cells: &[(i64, i64)]| -> Vec<Vec<u32>> {
                let mut out = Vec::with_capacity(cells.len() * 2);
                for &(x, y) in cells {
                    let kets = self.cell_labels(x, y);
                    let bras: Vec<u32> = kets.iter().map(|&l| bra_of[l as usize]).collect();
                    out.push(kets);
                    out.push(bras);
                }
                out
            };
            if peak_open_labels(&labels(&col), &roles) <= peak_open_labels(&labels(&row), &roles) {
                col
            } else {
                row
            }
        };

        let mut nodes = Vec::with_capacity(cells.len() * 2);
        for &(x, y) in &cells {
            let kets = self.cell_labels(x, y);
            let bras: Vec<u32> = kets.iter().map(|&l| bra_of[l as usize]).collect();
            nodes.push((tile, kets));
            nodes.push((&conj, bras));
        }
        let result = Network { nodes, roles, free_order: vec![], budget }.contract()?;
        let value = result.scalar_value().expect("scalar network");
        Ok((value.re, result.scale()))
    }
}

/// Canonical coset representative: walk backwards along `u` for as long as
/// the bond stays inside the rectangle's bond extent.
fn rep_mod_u(p: BondPosition, u: (i64, i64), m: u32, n: u32) -> BondPosition {
    let mut q = p;
    loop {
        let next = q.translated(-u.0, -u.1);
        if in_extent(next, m, n) {
            q = next;
        } else {
            return q;
        }
    }
}

fn in_extent(p: BondPosition, m: u32, n: u32) -> bool {
    let (m, n) = (m as i64, n as i64);
    if p.is_vertical() {
        p.x2() >= 2 && p.x2() <= 2 * m && p.y2() >= 1 && p.y2() <= 2 * n + 1
    } else {
        p.x2() >= 1 && p.x2() <= 2 * m + 1 && p.y2() >= 2 && p.y2() <= 2 * n
    }
}
