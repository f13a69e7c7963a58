//! Dunford-Schwartz operators on tailed models.
//!
//! An operator is a dense kernel over the atoms plus a column describing how
//! the constant tail value feeds the atoms, plus a coefficient multiplying
//! the tail itself:
//!
//! ```text
//! (T f)(i) = sum_j K[i][j] f(j)  +  b[i] * f_tail,        (T f)_tail = eta * f_tail.
//! ```
//!
//! `T` is Dunford-Schwartz when it contracts both endpoints of the
//! interpolation scale simultaneously:
//!
//! ```text
//! L1:    sum_i w_i |K[i][j]|            <=  w_j   for every column j,
//! Linf:  sum_j |K[i][j]|  +  |b[i]|     <=  1     for every row i,   and |eta| <= 1.
//! ```
//!
//! [`verify_ds`] reports the margin of every bound. The entrywise modulus
//! |T| and the weighted adjoint T* stay inside the class, and every
//! Dunford-Schwartz operator contracts rearrangements in the
//! Hardy-Littlewood order: Tf -<-< f, checked by [`majorization_contract`].

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::measure::{check_shape, TailedFunction, TailedMeasureSpace};
use crate::rearrangement::{majorizes, rearrange};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OperatorError {
    #[error("kernel row {row} has {got} entries, expected {expected}")]
    RaggedKernel { row: usize, got: usize, expected: usize },
    #[error("tail injection has {got} entries, expected {expected}")]
    BadTailInjection { got: usize, expected: usize },
    #[error("operator entry at ({row}, {column}) is not finite")]
    NonfiniteEntry { row: usize, column: usize },
    #[error("kernel must have at least one row")]
    Empty,
    #[error("permutation image {image} out of range or repeated")]
    BadPermutation { image: usize },
    #[error("L1 substochasticity fails at column {column}: weighted column sum exceeds the atom weight by {excess}")]
    L1BoundViolated { column: usize, excess: f64 },
}

/// A kernel operator with tail coupling. See the module docs for the action.
#[derive(Debug, Clone, PartialEq)]
pub struct DsOperator {
    dim: usize,
    kernel: Vec<Complex64>, // row-major, dim * dim
    tail_injection: Vec<Complex64>,
    tail_coeff: Complex64,
}

impl DsOperator {
    /// Builds an operator from kernel rows, the tail injection column, and
    /// the tail coefficient. Validates shape and finiteness, nothing more;
    /// contraction bounds are [`verify_ds`]'s job.
    pub fn new(
        rows: Vec<Vec<Complex64>>,
        tail_injection: Vec<Complex64>,
        tail_coeff: Complex64,
    ) -> Result<Self, OperatorError> {
        let dim = rows.len();
        if dim == 0 {
            return Err(OperatorError::Empty);
        }
        if tail_injection.len() != dim {
            return Err(OperatorError::BadTailInjection { got: tail_injection.len(), expected: dim });
        }
        let mut kernel = Vec::with_capacity(dim * dim);
        for (row_index, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(OperatorError::RaggedKernel {
                    row: row_index,
                    got: row.len(),
                    expected: dim,
                });
            }
            for (column, entry) in row.iter().enumerate() {
                if !entry.re.is_finite() || !entry.im.is_finite() {
                    return Err(OperatorError::NonfiniteEntry { row: row_index, column });
                }
                kernel.push(*entry);
            }
        }
        for (row, entry) in tail_injection.iter().enumerate() {
            if !entry.re.is_finite() || !entry.im.is_finite() {
                return Err(OperatorError::NonfiniteEntry { row, column: dim });
            }
        }
        if !tail_coeff.re.is_finite() || !tail_coeff.im.is_finite() {
            return Err(OperatorError::NonfiniteEntry { row: dim, column: dim });
        }
        Ok(Self { dim, kernel, tail_injection, tail_coeff })
    }

    pub fn identity(dim: usize) -> Self {
        let mut kernel = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            kernel[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        Self {
            dim,
            kernel,
            tail_injection: vec![Complex64::new(0.0, 0.0); dim],
            tail_coeff: Complex64::new(1.0, 0.0),
        }
    }

    /// The composition operator (T f)(i) = f(sigma(i)) of a permutation.
    pub fn from_permutation(sigma: &[usize]) -> Result<Self, OperatorError> {
        let dim = sigma.len();
        if dim == 0 {
            return Err(OperatorError::Empty);
        }
        let mut seen = vec![false; dim];
        for &image in sigma {
            if image >= dim || seen[image] {
                return Err(OperatorError::BadPermutation { image });
            }
            seen[image] = true;
        }
        let mut kernel = vec![Complex64::new(0.0, 0.0); dim * dim];
        for (i, &image) in sigma.iter().enumerate() {
            kernel[i * dim + image] = Complex64::new(1.0, 0.0);
        }
        Ok(Self {
            dim,
            kernel,
            tail_injection: vec![Complex64::new(0.0, 0.0); dim],
            tail_coeff: Complex64::new(1.0, 0.0),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, row: usize, column: usize) -> Complex64 {
        self.kernel[row * self.dim + column]
    }

    pub fn row(&self, row: usize) -> &[Complex64] {
        &self.kernel[row * self.dim..(row + 1) * self.dim]
    }

    pub fn tail_injection(&self) -> &[Complex64] {
        &self.tail_injection
    }

    pub fn tail_coeff(&self) -> Complex64 {
        self.tail_coeff
    }

    /// Applies the operator.
    ///
    /// # Panics
    ///
    /// On atom-count mismatch. Keep tail values at zero on spaces without an
    /// infinite tail; the tail column takes part whenever `f` carries one.
    pub fn apply(&self, f: &TailedFunction) -> TailedFunction {
        assert_eq!(self.dim, f.atom_count(), "operator dim {} vs function atoms {}", self.dim, f.atom_count());
        let tail = f.tail_value();
        let mut values = Vec::with_capacity(self.dim);
        for i in 0..self.dim {
            let mut acc = self.tail_injection[i] * tail;
            let row = self.row(i);
            for (entry, value) in row.iter().zip(f.values()) {
                acc += entry * value;
            }
            values.push(acc);
        }
        TailedFunction::new(values, self.tail_coeff * tail)
            .expect("finite kernel times finite function stays finite")
    }

    /// The linear modulus |T|: entrywise absolute values everywhere.
    pub fn modulus(&self) -> Self {
        Self {
            dim: self.dim,
            kernel: self.kernel.iter().map(|z| Complex64::new(z.norm(), 0.0)).collect(),
            tail_injection: self
                .tail_injection
                .iter()
                .map(|z| Complex64::new(z.norm(), 0.0))
                .collect(),
            tail_coeff: Complex64::new(self.tail_coeff.norm(), 0.0),
        }
    }

    /// The adjoint with respect to the weighted pairing:
    /// `K*[i][j] = (w_j / w_i) conj(K[j][i])`, with no tail injection and the
    /// conjugated tail coefficient. Satisfies `<T* u, v> = <u, T v>` whenever
    /// the tail values vanish.
    ///
    /// # Panics
    ///
    /// On atom-count mismatch with `space`.
    pub fn adjoint(&self, space: &TailedMeasureSpace) -> Self {
        assert_eq!(self.dim, space.atom_count(), "operator dim {} vs space atoms {}", self.dim, space.atom_count());
        let w = space.weights();
        let mut kernel = Vec::with_capacity(self.dim * self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                kernel.push(self.entry(j, i).conj() * (w[j] / w[i]));
            }
        }
        Self {
            dim: self.dim,
            kernel,
            tail_injection: vec![Complex64::new(0.0, 0.0); self.dim],
            tail_coeff: self.tail_coeff.conj(),
        }
    }

    /// True when every kernel entry, the tail injection, and the tail
    /// coefficient are real and nonnegative.
    pub fn is_entrywise_nonnegative(&self) -> bool {
        self.kernel
            .iter()
            .chain(&self.tail_injection)
            .chain(core::iter::once(&self.tail_coeff))
            .all(|z| z.im == 0.0 && z.re >= 0.0)
    }

    /// Recognizes exact permutation kernels (entries 0 or 1, one per row and
    /// column, no tail injection) and returns sigma with (Tf)(i) = f(sigma(i)).
    pub fn permutation(&self) -> Option<Vec<usize>> {
        if self.tail_injection.iter().any(|z| *z != Complex64::new(0.0, 0.0)) {
            return None;
        }
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let mut sigma = Vec::with_capacity(self.dim);
        let mut hit = vec![false; self.dim];
        for i in 0..self.dim {
            let mut image = None;
            for j in 0..self.dim {
                let entry = self.entry(i, j);
                if entry == one {
                    if image.is_some() {
                        return None;
                    }
                    image = Some(j);
                } else if entry != zero {
                    return None;
                }
            }
            let image = image?;
            if hit[image] {
                return None;
            }
            hit[image] = true;
            sigma.push(image);
        }
        Some(sigma)
    }
}

/// Margins of the two contraction bounds; nonnegative margins mean the bound
/// holds. Produced by [`verify_ds`].
#[derive(Debug, Clone, PartialEq)]
pub struct DsReport {
    /// `w_j - sum_i w_i |K[i][j]|`, per column.
    pub column_margins: Vec<f64>,
    /// `1 - (sum_j |K[i][j]| + |b[i]|)`, per row.
    pub row_margins: Vec<f64>,
    /// `1 - |eta|`.
    pub tail_margin: f64,
    /// Both margins clear `-tol` columnwise.
    pub l1_contraction: bool,
    /// Row margins and the tail margin clear `-tol`.
    pub linf_contraction: bool,
    /// Entrywise real and nonnegative.
    pub positive: bool,
    /// The slack the verdicts used.
    pub tol: f64,
}

impl DsReport {
    pub fn is_dunford_schwartz(&self) -> bool {
        self.l1_contraction && self.linf_contraction
    }

    pub fn is_positive_dunford_schwartz(&self) -> bool {
        self.is_dunford_schwartz() && self.positive
    }
}

/// Checks both substochasticity bounds within `tol` and reports every margin.
///
/// # Panics
///
/// On atom-count mismatch.
pub fn verify_ds(space: &TailedMeasureSpace, op: &DsOperator, tol: f64) -> DsReport {
    assert_eq!(op.dim(), space.atom_count(), "operator dim {} vs space atoms {}", op.dim(), space.atom_count());
    assert!(tol >= 0.0, "tolerance must be nonnegative");
    let dim = op.dim();
    let w = space.weights();

    let mut column_margins = vec![0.0; dim];
    for j in 0..dim {
        let mut weighted_column = 0.0;
        for i in 0..dim {
            weighted_column += w[i] * op.entry(i, j).norm();
        }
        column_margins[j] = w[j] - weighted_column;
    }

    let mut row_margins = vec![0.0; dim];
    for i in 0..dim {
        let mut row_sum = op.tail_injection()[i].norm();
        for entry in op.row(i) {
            row_sum += entry.norm();
        }
        row_margins[i] = 1.0 - row_sum;
    }
    let tail_margin = 1.0 - op.tail_coeff().norm();

    DsReport {
        l1_contraction: column_margins.iter().all(|&m| m >= -tol),
        linf_contraction: row_margins.iter().all(|&m| m >= -tol) && tail_margin >= -tol,
        positive: op.is_entrywise_nonnegative(),
        column_margins,
        row_margins,
        tail_margin,
        tol,
    }
}

/// Extends an L1-contraction kernel to the whole model the canonical way:
/// no tail injection, tail coefficient one. Rejects kernels that violate the
/// L1 bound by more than `tol`.
pub fn extend_from_l1(
    space: &TailedMeasureSpace,
    kernel_rows: Vec<Vec<Complex64>>,
    tol: f64,
) -> Result<DsOperator, OperatorError> {
    let dim = kernel_rows.len();
    let op = DsOperator::new(
        kernel_rows,
        vec![Complex64::new(0.0, 0.0); dim],
        Complex64::new(1.0, 0.0),
    )?;
    assert_eq!(dim, space.atom_count(), "kernel dim {} vs space atoms {}", dim, space.atom_count());
    let w = space.weights();
    for j in 0..dim {
        let mut weighted_column = 0.0;
        for i in 0..dim {
            weighted_column += w[i] * op.entry(i, j).norm();
        }
        if weighted_column > w[j] + tol {
            return Err(OperatorError::L1BoundViolated { column: j, excess: weighted_column - w[j] });
        }
    }
    Ok(op)
}

/// The weighted pairing `sum_i w_i f_i conj(g_i)` over the atoms.
///
/// The infinite tail cannot be paired; the value is the honest inner product
/// whenever one of the functions has zero tail value.
pub fn weighted_pairing(
    space: &TailedMeasureSpace,
    f: &TailedFunction,
    g: &TailedFunction,
) -> Complex64 {
    check_shape(space, f);
    check_shape(space, g);
    let mut acc = Complex64::new(0.0, 0.0);
    for ((value, other), &weight) in f.values().iter().zip(g.values()).zip(space.weights()) {
        acc += value * other.conj() * weight;
    }
    acc
}

/// Does `T f -<-< f` hold on this input, within `tol`?
pub fn majorization_contract(
    space: &TailedMeasureSpace,
    op: &DsOperator,
    f: &TailedFunction,
    tol: f64,
) -> bool {
    let image = op.apply(f);
    majorizes(&rearrange(space, f), &rearrange(space, &image), tol)
}
