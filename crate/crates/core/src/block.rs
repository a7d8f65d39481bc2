//! Block operator matrices: an n x n grid of conformal complex blocks acting
//! on a direct sum of spaces.

use serde::{Deserialize, Serialize};

use crate::linalg::CMatrix;

/// Errors from block assembly and validation.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BlockError {
    #[error("blocks are not conformal: {0}")]
    NonConformal(String),
    #[error("expected a 2x2 block matrix, got {0}x{0}")]
    NotTwoByTwo(usize),
    #[error("block grid must be square and non-empty")]
    BadGrid,
}

/// An n x n grid of conformal blocks. Row heights are constant along each
/// block row and column widths along each block column.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockMatrix {
    n: usize,
    blocks: Vec<CMatrix>, // row-major grid
    row_dims: Vec<usize>,
    col_dims: Vec<usize>,
}

impl BlockMatrix {
    /// Build from a row-major grid of blocks, validating conformality.
    pub fn new(grid: Vec<Vec<CMatrix>>) -> Result<Self, BlockError> {
        let n = grid.len();
        if n == 0 || grid.iter().any(|row| row.len() != n) {
            return Err(BlockError::BadGrid);
        }
        let row_dims: Vec<usize> = grid.iter().map(|row| row[0].rows()).collect();
        let col_dims: Vec<usize> = grid[0].iter().map(|b| b.cols()).collect();
        for (i, row) in grid.iter().enumerate() {
            for (j, b) in row.iter().enumerate() {
                if b.rows() != row_dims[i] || b.cols() != col_dims[j] {
                    return Err(BlockError::NonConformal(format!(
                        "block ({i},{j}) is {}x{}, expected {}x{}",
                        b.rows(),
                        b.cols(),
                        row_dims[i],
                        col_dims[j]
                    )));
                }
            }
        }
        let blocks = grid.into_iter().flatten().collect();
        Ok(Self { n, blocks, row_dims, col_dims })
    }

    /// 2x2 convenience constructor.
    pub fn two_by_two(a: CMatrix, b: CMatrix, c: CMatrix, d: CMatrix) -> Result<Self, BlockError> {
        Self::new(vec![vec![a, b], vec![c, d]])
    }

    /// [[a, 0], [0, 0]] with zero blocks matching the size of `a`; evaluated
    /// over the doubled model DirectSum(m, m).
    pub fn corner_embed(a: &CMatrix) -> Self {
        let n = a.rows();
        assert!(a.is_square(), "corner embedding requires a square block");
        let z = CMatrix::zeros(n, n);
        Self::two_by_two(a.clone(), z.clone(), z.clone(), z).expect("conformal by construction")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn block(&self, i: usize, j: usize) -> &CMatrix {
        &self.blocks[i * self.n + j]
    }

    pub fn row_dims(&self) -> &[usize] {
        &self.row_dims
    }

    pub fn col_dims(&self) -> &[usize] {
        &self.col_dims
    }

    /// Total rows of the assembled matrix.
    pub fn total_rows(&self) -> usize {
        self.row_dims.iter().sum()
    }

    pub fn total_cols(&self) -> usize {
        self.col_dims.iter().sum()
    }

    /// True when every block is square of equal dimension (all factors on a
    /// common space).
    pub fn on_common_space(&self) -> bool {
        let d = self.row_dims[0];
        self.row_dims.iter().chain(self.col_dims.iter()).all(|&x| x == d)
    }

    /// Flatten into the single matrix acting on the direct sum.
    pub fn assemble(&self) -> CMatrix {
        let rows = self.total_rows();
        let cols = self.total_cols();
        let mut out = CMatrix::zeros(rows, cols);
        let mut roff = 0;
        for i in 0..self.n {
            let mut coff = 0;
            for j in 0..self.n {
                let b = self.block(i, j);
                for r in 0..b.rows() {
                    for c in 0..b.cols() {
                        out[(roff + r, coff + c)] = b[(r, c)];
                    }
                }
                coff += self.col_dims[j];
            }
            roff += self.row_dims[i];
        }
        out
    }

    /// Inverse of [`assemble`]: slice a flat matrix back into blocks with the
    /// given row/column dimensions.
    pub fn extract(flat: &CMatrix, row_dims: &[usize], col_dims: &[usize]) -> Result<Self, BlockError> {
        let n = row_dims.len();
        if n == 0 || col_dims.len() != n {
            return Err(BlockError::BadGrid);
        }
        if flat.rows() != row_dims.iter().sum::<usize>() || flat.cols() != col_dims.iter().sum::<usize>() {
            return Err(BlockError::NonConformal("flat matrix does not match block dims".into()));
        }
        let mut grid = Vec::with_capacity(n);
        let mut roff = 0;
        for &rd in row_dims {
            let mut row = Vec::with_capacity(n);
            let mut coff = 0;
            for &cd in col_dims {
                let mut b = CMatrix::zeros(rd, cd);
                for r in 0..rd {
                    for c in 0..cd {
                        b[(r, c)] = flat[(roff + r, coff + c)];
                    }
                }
                coff += cd;
                row.push(b);
            }
            roff += rd;
            grid.push(row);
        }
        Self::new(grid)
    }
}
