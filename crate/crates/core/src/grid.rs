//! Uniform cell-centred meshes with ghost layers, and component-major field
//! storage over the padded index space.

use crate::state::{cons_to_prim, Vars, NVAR};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    /// Zero-order extrapolation.
    Free,
    /// Reflection with the normal velocity negated.
    Wall,
    /// Wrap-around; used by the convergence and conservation tests.
    Periodic,
}

impl Boundary {
    pub fn name(self) -> &'static str {
        match self {
            Boundary::Free => "free",
            Boundary::Wall => "wall",
            Boundary::Periodic => "periodic",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "free" => Some(Boundary::Free),
            "wall" | "solid_wall" => Some(Boundary::Wall),
            "periodic" => Some(Boundary::Periodic),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Boundaries {
    pub left: Boundary,
    pub right: Boundary,
    pub bottom: Boundary,
    pub top: Boundary,
}

impl Boundaries {
    pub const fn all(b: Boundary) -> Self {
        Self {
            left: b,
            right: b,
            bottom: b,
            top: b,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dim {
    One,
    Two,
}

/// Uniform mesh. A one-dimensional grid has `ny == 1` and no y ghosts.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub dim: Dim,
    pub nx: usize,
    pub ny: usize,
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
    pub dx: f64,
    pub dy: f64,
    pub ghost: usize,
    pub bc: Boundaries,
}

impl Grid {
    pub fn one_d(x0: f64, x1: f64, nx: usize, left: Boundary, right: Boundary, ghost: usize) -> Self {
        assert!(nx > 0 && x1 > x0, "empty 1-D grid");
        Self {
            dim: Dim::One,
            nx,
            ny: 1,
            x0,
            x1,
            y0: 0.0,
            y1: 1.0,
            dx: (x1 - x0) / nx as f64,
            dy: 1.0,
            ghost,
            bc: Boundaries {
                left,
                right,
                bottom: Boundary::Free,
                top: Boundary::Free,
            },
        }
    }

    pub fn two_d(
        (x0, x1): (f64, f64),
        (y0, y1): (f64, f64),
        nx: usize,
        ny: usize,
        bc: Boundaries,
        ghost: usize,
    ) -> Self {
        assert!(nx > 0 && ny > 0 && x1 > x0 && y1 > y0, "empty 2-D grid");
        Self {
            dim: Dim::Two,
            nx,
            ny,
            x0,
            x1,
            y0,
            y1,
            dx: (x1 - x0) / nx as f64,
            dy: (y1 - y0) / ny as f64,
            ghost,
            bc,
        }
    }

    pub fn with_ghost(mut self, ghost: usize) -> Self {
        self.ghost = ghost;
        self
    }

    #[inline]
    pub fn gx(&self) -> usize {
        self.ghost
    }

    #[inline]
    pub fn gy(&self) -> usize {
        match self.dim {
            Dim::One => 0,
            Dim::Two => self.ghost,
        }
    }

    /// Padded row length.
    #[inline]
    pub fn pnx(&self) -> usize {
        self.nx + 2 * self.gx()
    }

    #[inline]
    pub fn pny(&self) -> usize {
        self.ny + 2 * self.gy()
    }

    /// Number of padded cells.
    #[inline]
    pub fn len(&self) -> usize {
        self.pnx() * self.pny()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Flat index of padded coordinates.
    #[inline]
    pub fn pidx(&self, ip: usize, jp: usize) -> usize {
        jp * self.pnx() + ip
    }

    /// Flat index of interior cell `(i, j)`.
    #[inline]
    pub fn idx(&self, i: usize, j: usize) -> usize {
        self.pidx(i + self.gx(), j + self.gy())
    }

    /// Cell centres are measured from the domain midpoint so that a
    /// symmetric domain has exactly symmetric centres.
    #[inline]
    pub fn xc(&self, i: usize) -> f64 {
        0.5 * (self.x0 + self.x1) + (i as f64 + 0.5 - 0.5 * self.nx as f64) * self.dx
    }

    #[inline]
    pub fn yc(&self, j: usize) -> f64 {
        match self.dim {
            Dim::One => 0.0,
            Dim::Two => 0.5 * (self.y0 + self.y1) + (j as f64 + 0.5 - 0.5 * self.ny as f64) * self.dy,
        }
    }

    pub fn cell_area(&self) -> f64 {
        match self.dim {
            Dim::One => self.dx,
            Dim::Two => self.dx * self.dy,
        }
    }

    /// Same layout ignoring ghost width.
    pub fn same_mesh(&self, other: &Grid) -> bool {
        self.dim == other.dim
            && self.nx == other.nx
            && self.ny == other.ny
            && self.x0 == other.x0
            && self.x1 == other.x1
            && self.y0 == other.y0
            && self.y1 == other.y1
    }
}

/// Conserved variables over the padded mesh, one contiguous block per
/// component.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    pub grid: Grid,
    pub(crate) data: Vec<f64>,
}

impl Field {
    pub fn new(grid: Grid) -> Self {
        let data = vec![0.0; NVAR * grid.len()];
        Self { grid, data }
    }

    pub fn comp(&self, c: usize) -> &[f64] {
        let n = self.grid.len();
        &self.data[c * n..(c + 1) * n]
    }

    pub fn comp_mut(&mut self, c: usize) -> &mut [f64] {
        let n = self.grid.len();
        &mut self.data[c * n..(c + 1) * n]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    #[inline]
    pub fn get(&self, k: usize) -> Vars {
        let n = self.grid.len();
        std::array::from_fn(|c| self.data[c * n + k])
    }

    #[inline]
    pub fn set(&mut self, k: usize, u: Vars) {
        let n = self.grid.len();
        for (c, v) in u.into_iter().enumerate() {
            self.data[c * n + k] = v;
        }
    }

    /// Conserved vector of interior cell `(i, j)`.
    pub fn cell(&self, i: usize, j: usize) -> Vars {
        self.get(self.grid.idx(i, j))
    }

    pub fn set_cell(&mut self, i: usize, j: usize, u: Vars) {
        let k = self.grid.idx(i, j);
        self.set(k, u);
    }

    /// Primitive vector of interior cell `(i, j)`.
    pub fn primitive(&self, i: usize, j: usize) -> Result<Vars, &'static str> {
        cons_to_prim(&self.cell(i, j))
    }

    /// Sum of one component over the interior.
    pub fn interior_sum(&self, c: usize) -> f64 {
        let g = &self.grid;
        let col = self.comp(c);
        let mut s = 0.0;
        for j in 0..g.ny {
            let row = g.idx(0, j);
            s += col[row..row + g.nx].iter().sum::<f64>();
        }
        s
    }

    /// First interior cell (row-major scan) holding an invalid state.
    pub fn first_invalid(&self) -> Option<((usize, usize), &'static str)> {
        let g = &self.grid;
        (0..g.ny)
            .flat_map(|j| (0..g.nx).map(move |i| (i, j)))
            .find_map(|(i, j)| self.cell_fault(i, j).map(|r| ((i, j), r)))
    }

    /// All interior cells failing the validity check, x index fastest.
    pub fn invalid_cells(&self) -> Vec<(usize, usize)> {
        let g = &self.grid;
        (0..g.ny)
            .flat_map(|j| (0..g.nx).map(move |i| (i, j)))
            .filter(|&(i, j)| self.cell_fault(i, j).is_some())
            .collect()
    }

    fn cell_fault(&self, i: usize, j: usize) -> Option<&'static str> {
        if let Err(reason) = self.primitive(i, j) {
            return Some(reason);
        }
        if !self.cell(i, j).iter().all(|v| v.is_finite()) {
            return Some("non-finite value");
        }
        None
    }

    /// Interior values of one primitive slot, x index fastest.
    pub fn primitive_component(&self, c: usize) -> Vec<f64> {
        let g = &self.grid;
        let mut out = Vec::with_capacity(g.nx * g.ny);
        for j in 0..g.ny {
            for i in 0..g.nx {
                let v = self.primitive(i, j).unwrap_or([f64::NAN; NVAR]);
                out.push(v[c]);
            }
        }
        out
    }
}
