//! Uniform Cartesian meshes of intervals (1D) and rectangles (2D).
//!
//! Cells are numbered lexicographically with x running fastest. Every cell
//! owns `2 * dim` faces, ordered x-low, x-high, y-low, y-high. A face normal
//! points out of its `left` cell; for periodic wrap faces the right cell sits
//! on the opposite end of the domain.

use crate::error::{Error, Result};
use crate::basis::gauss_rule_1d;

/// Boundary condition class attached to a domain side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum BoundaryTag {
    Periodic,
    Inflow,
    ReflectingWall,
    Outflow,
    TimeDependentDirichlet,
}

/// Domain sides in local-face order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    XLow = 0,
    XHigh = 1,
    YLow = 2,
    YHigh = 3,
}

impl Side {
    pub fn axis(self) -> usize {
        self as usize / 2
    }

    pub fn is_high(self) -> bool {
        self as usize % 2 == 1
    }

    pub fn from_local(local: usize) -> Side {
        match local {
            0 => Side::XLow,
            1 => Side::XHigh,
            2 => Side::YLow,
            3 => Side::YHigh,
            _ => panic!("local face index {local} out of range"),
        }
    }

    /// Local index of the face on the other side of the same axis.
    pub fn opposite_local(local: usize) -> usize {
        local ^ 1
    }
}

/// Per-side boundary tags, indexed by [`Side`]. Only the first two entries
/// are used in 1D.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundarySpec(pub [BoundaryTag; 4]);

impl BoundarySpec {
    pub fn uniform(tag: BoundaryTag) -> Self {
        BoundarySpec([tag; 4])
    }

    pub fn periodic() -> Self {
        Self::uniform(BoundaryTag::Periodic)
    }

    pub fn tag(&self, side: Side) -> BoundaryTag {
        self.0[side as usize]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FaceNeighbor {
    Cell(usize),
    Boundary(BoundaryTag),
}

#[derive(Debug, Clone)]
pub struct Cell {
    pub id: usize,
    /// Lattice index (ix, iy); iy = 0 in 1D.
    pub index: [usize; 2],
    /// Corner coordinates, counter-clockwise from the lower-left corner.
    pub vertices: Vec<[f64; 2]>,
    pub volume: f64,
    /// Local mesh size: the cell diameter.
    pub h: f64,
    pub faces: Vec<usize>,
}

impl Cell {
    pub fn lower(&self) -> [f64; 2] {
        self.vertices[0]
    }
}

#[derive(Debug, Clone)]
pub struct Face {
    pub id: usize,
    pub left: usize,
    pub right: FaceNeighbor,
    /// Unit normal pointing out of `left`.
    pub normal: [f64; 2],
    /// Face length in 2D, 1 in 1D.
    pub measure: f64,
    /// Local face index of this face in `left`.
    pub left_local: usize,
    /// Local face index in the right cell, if there is one.
    pub right_local: Option<usize>,
    /// Set for faces that join the two ends of a periodic axis.
    pub periodic_wrap: bool,
    /// Endpoints as seen from the left cell (identical in 1D).
    pub endpoints: [[f64; 2]; 2],
}

impl Face {
    pub fn is_boundary(&self) -> bool {
        matches!(self.right, FaceNeighbor::Boundary(_))
    }
}

#[derive(Debug, Clone)]
pub struct Mesh {
    pub dim: usize,
    pub bounds: Vec<(f64, f64)>,
    pub counts: Vec<usize>,
    pub spacing: [f64; 2],
    pub periodic: [bool; 2],
    pub boundary: BoundarySpec,
    pub cells: Vec<Cell>,
    pub faces: Vec<Face>,
    /// neighbor[e][local] is the cell across local face `local`, if any.
    neighbors: Vec<[Option<usize>; 4]>,
}

/// Builds a uniform Cartesian mesh of `counts[a]` cells per axis over `bounds`.
pub fn build_structured_mesh(
    bounds: &[(f64, f64)],
    counts: &[usize],
    boundary: BoundarySpec,
) -> Result<Mesh> {
    let dim = bounds.len();
    if !(1..=2).contains(&dim) {
        return Err(Error::Mesh(format!("dimension {dim} not supported")));
    }
    if counts.len() != dim {
        return Err(Error::Mesh(format!(
            "{} cell counts given for a {dim}D domain",
            counts.len()
        )));
    }
    for (a, (&(lo, hi), &n)) in bounds.iter().zip(counts).enumerate() {
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::Mesh(format!("axis {a}: bounds ({lo}, {hi}) are not increasing")));
        }
        if n == 0 {
            return Err(Error::Mesh(format!("axis {a}: zero cell count")));
        }
    }
    let mut periodic = [false; 2];
    for a in 0..dim {
        let lo = boundary.0[2 * a] == BoundaryTag::Periodic;
        let hi = boundary.0[2 * a + 1] == BoundaryTag::Periodic;
        if lo != hi {
            return Err(Error::Mesh(format!(
                "axis {a}: periodic side without a periodic partner"
            )));
        }
        periodic[a] = lo;
    }

    let nx = counts[0];
    let ny = if dim == 2 { counts[1] } else { 1 };
    let dx = (bounds[0].1 - bounds[0].0) / nx as f64;
    let dy = if dim == 2 {
        (bounds[1].1 - bounds[1].0) / ny as f64
    } else {
        1.0
    };
    let (x0, y0) = (bounds[0].0, if dim == 2 { bounds[1].0 } else { 0.0 });
    let volume = if dim == 2 { dx * dy } else { dx };
    let h = if dim == 2 { dx.hypot(dy) } else { dx };

    let cell_id = |ix: usize, iy: usize| ix + nx * iy;
    let n_cells = nx * ny;
    let mut cells = Vec::with_capacity(n_cells);
    for iy in 0..ny {
        for ix in 0..nx {
            let xl = x0 + ix as f64 * dx;
            let yl = y0 + iy as f64 * dy;
            let vertices = if dim == 2 {
                vec![[xl, yl], [xl + dx, yl], [xl + dx, yl + dy], [xl, yl + dy]]
            } else {
                vec![[xl, 0.0], [xl + dx, 0.0]]
            };
            cells.push(Cell {
                id: cell_id(ix, iy),
                index: [ix, iy],
                vertices,
                volume,
                h,
                faces: vec![usize::MAX; 2 * dim],
            });
        }
    }

    let mut faces: Vec<Face> = Vec::new();
    let mut neighbors = vec![[None; 4]; n_cells];

    // x-normal faces: one per vertical line per cell row
    for iy in 0..ny {
        for i in 0..=nx {
            let x = x0 + i as f64 * dx;
            let y_lo = y0 + iy as f64 * dy;
            let endpoints = if dim == 2 {
                [[x, y_lo], [x, y_lo + dy]]
            } else {
                [[x, 0.0], [x, 0.0]]
            };
            let measure = if dim == 2 { dy } else { 1.0 };
            if i == 0 && periodic[0] {
                // the wrap face is created at i == nx
                continue;
            }
            let id = faces.len();
            if i == 0 {
                let c = cell_id(0, iy);
                faces.push(Face {
                    id,
                    left: c,
                    right: FaceNeighbor::Boundary(boundary.tag(Side::XLow)),
                    normal: [-1.0, 0.0],
                    measure,
                    left_local: 0,
                    right_local: None,
                    periodic_wrap: false,
                    endpoints,
                });
                cells[c].faces[0] = id;
            } else if i == nx && !periodic[0] {
                let c = cell_id(nx - 1, iy);
                faces.push(Face {
                    id,
                    left: c,
                    right: FaceNeighbor::Boundary(boundary.tag(Side::XHigh)),
                    normal: [1.0, 0.0],
                    measure,
                    left_local: 1,
                    right_local: None,
                    periodic_wrap: false,
                    endpoints,
                });
                cells[c].faces[1] = id;
            } else {
                let l = cell_id(i - 1, iy);
                let r = cell_id(i % nx, iy);
                faces.push(Face {
                    id,
                    left: l,
                    right: FaceNeighbor::Cell(r),
                    normal: [1.0, 0.0],
                    measure,
                    left_local: 1,
                    right_local: Some(0),
                    periodic_wrap: i == nx,
                    endpoints,
                });
                cells[l].faces[1] = id;
                cells[r].faces[0] = id;
                neighbors[l][1] = Some(r);
                neighbors[r][0] = Some(l);
            }
        }
    }

    if dim == 2 {
        for j in 0..=ny {
            for ix in 0..nx {
                let y = y0 + j as f64 * dy;
                let x_lo = x0 + ix as f64 * dx;
                let endpoints = [[x_lo, y], [x_lo + dx, y]];
                if j == 0 && periodic[1] {
                    continue;
                }
                let id = faces.len();
                if j == 0 {
                    let c = cell_id(ix, 0);
                    faces.push(Face {
                        id,
                        left: c,
                        right: FaceNeighbor::Boundary(boundary.tag(Side::YLow)),
                        normal: [0.0, -1.0],
                        measure: dx,
                        left_local: 2,
                        right_local: None,
                        periodic_wrap: false,
                        endpoints,
                    });
                    cells[c].faces[2] = id;
                } else if j == ny && !periodic[1] {
                    let c = cell_id(ix, ny - 1);
                    faces.push(Face {
                        id,
                        left: c,
                        right: FaceNeighbor::Boundary(boundary.tag(Side::YHigh)),
                        normal: [0.0, 1.0],
                        measure: dx,
                        left_local: 3,
                        right_local: None,
                        periodic_wrap: false,
                        endpoints,
                    });
                    cells[c].faces[3] = id;
                } else {
                    let l = cell_id(ix, j - 1);
                    let r = cell_id(ix, j % ny);
                    faces.push(Face {
                        id,
                        left: l,
                        right: FaceNeighbor::Cell(r),
                        normal: [0.0, 1.0],
                        measure: dx,
                        left_local: 3,
                        right_local: Some(2),
                        periodic_wrap: j == ny,
                        endpoints,
                    });
                    cells[l].faces[3] = id;
                    cells[r].faces[2] = id;
                    neighbors[l][3] = Some(r);
                    neighbors[r][2] = Some(l);
                }
            }
        }
    }

    Ok(Mesh {
        dim,
        bounds: bounds.to_vec(),
        counts: counts.to_vec(),
        spacing: [dx, dy],
        periodic,
        boundary,
        cells,
        faces,
        neighbors,
    })
}

impl Mesh {
    pub fn n_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn faces_per_cell(&self) -> usize {
        2 * self.dim
    }

    /// Cell across local face `local` of cell `e` (periodic wraps included).
    pub fn neighbor(&self, e: usize, local: usize) -> Option<usize> {
        self.neighbors[e][local]
    }

    pub fn domain_measure(&self) -> f64 {
        self.bounds.iter().map(|(lo, hi)| hi - lo).product()
    }

    /// Domain period along `axis`.
    pub fn period(&self, axis: usize) -> f64 {
        self.bounds[axis].1 - self.bounds[axis].0
    }

    /// Maps a reference point in [0,1]^dim to physical coordinates in cell `e`.
    pub fn map_to_physical(&self, e: usize, xi: &[f64; 2]) -> [f64; 2] {
        let lo = self.cells[e].lower();
        if self.dim == 2 {
            [lo[0] + xi[0] * self.spacing[0], lo[1] + xi[1] * self.spacing[1]]
        } else {
            [lo[0] + xi[0] * self.spacing[0], 0.0]
        }
    }

    /// Outward unit normal of local face `local`.
    pub fn local_normal(local: usize) -> [f64; 2] {
        match local {
            0 => [-1.0, 0.0],
            1 => [1.0, 0.0],
            2 => [0.0, -1.0],
            3 => [0.0, 1.0],
            _ => panic!("local face index {local} out of range"),
        }
    }

    /// Measure of local face `local` (1 in 1D).
    pub fn local_face_measure(&self, local: usize) -> f64 {
        if self.dim == 1 {
            1.0
        } else if local < 2 {
            self.spacing[1]
        } else {
            self.spacing[0]
        }
    }
}

/// Quadrature points and weights on a face, in physical coordinates. Weights
/// sum to the face measure.
pub fn face_trace_points(mesh: &Mesh, face: &Face, npoints: usize) -> Vec<([f64; 2], f64)> {
    if mesh.dim == 1 {
        return vec![(face.endpoints[0], 1.0)];
    }
    let rule = gauss_rule_1d(npoints);
    let [a, b] = face.endpoints;
    rule.points
        .iter()
        .zip(&rule.weights)
        .map(|(s, w)| {
            let s = s[0];
            (
                [a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1])],
                w * face.measure,
            )
        })
        .collect()
}
