//! Dense matrices over polynomials and scalars.

use crate::poly::Polynomial;
use crate::scalar::Scalar;

/// Minimal ring interface shared by [`Polynomial`] and [`Scalar`].
pub trait RingElement: Clone + PartialEq + std::fmt::Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn from_scalar_like(&self, c: Scalar) -> Self;
}

impl RingElement for Polynomial {
    fn zero_like(&self) -> Self {
        Polynomial::zero(self.nvars())
    }
    fn one_like(&self) -> Self {
        Polynomial::one(self.nvars())
    }
    fn is_zero(&self) -> bool {
        Polynomial::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        Polynomial::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        Polynomial::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        Polynomial::mul(self, o)
    }
    fn neg(&self) -> Self {
        Polynomial::neg(self)
    }
    fn from_scalar_like(&self, c: Scalar) -> Self {
        Polynomial::constant(self.nvars(), c)
    }
}

impl RingElement for Scalar {
    fn zero_like(&self) -> Self {
        Scalar::zero()
    }
    fn one_like(&self) -> Self {
        Scalar::one()
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn from_scalar_like(&self, c: Scalar) -> Self {
        c
    }
}

/// Row-major dense matrix. `zero` is a prototype element so empty matrices
/// still know their ring.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
    zero: T,
}

pub type PolyMatrix = Matrix<Polynomial>;
pub type ScalarMatrix = Matrix<Scalar>;

impl<T: RingElement> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize, zero: T) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![zero.clone(); rows * cols],
            zero,
        }
    }

    pub fn identity(n: usize, zero: T) -> Self {
        let mut m = Self::zeros(n, n, zero.clone());
        for i in 0..n {
            m.data[i * n + i] = zero.one_like();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>, zero: T) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
            zero,
        }
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        zero: T,
        mut f: impl FnMut(usize, usize) -> T,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix {
            rows,
            cols,
            data,
            zero,
        }
    }

    pub fn diagonal(entries: Vec<T>, zero: T) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n, zero);
        for (i, e) in entries.into_iter().enumerate() {
            m.data[i * n + i] = e;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn zero_elem(&self) -> &T {
        &self.zero
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn map<U: RingElement>(&self, zero: U, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
            zero,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(RingElement::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "matrix shape mismatch in product");
        let mut out = Self::zeros(self.rows, o.cols, self.zero.clone());
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * o.cols + j;
                    out.data[idx] = out.data[idx].add(&a.mul(b));
                }
            }
        }
        out
    }

    fn zip(&self, o: &Self, f: impl Fn(&T, &T) -> T) -> Self {
        assert_eq!(
            (self.rows, self.cols),
            (o.rows, o.cols),
            "matrix shape mismatch"
        );
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&o.data)
                .map(|(a, b)| f(a, b))
                .collect(),
            zero: self.zero.clone(),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        self.zip(o, T::add)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.zip(o, T::sub)
    }

    pub fn neg(&self) -> Self {
        self.map(self.zero.clone(), T::neg)
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(self.zero.clone(), |a| a.mul(c))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, self.zero.clone(), |i, j| {
            self.get(j, i).clone()
        })
    }

    pub fn trace(&self) -> T {
        assert!(self.is_square());
        (0..self.rows).fold(self.zero.clone(), |acc, i| acc.add(self.get(i, i)))
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Self {
        let (r0, c0) = (rows.start, cols.start);
        Self::from_fn(rows.len(), cols.len(), self.zero.clone(), |i, j| {
            self.get(r0 + i, c0 + j).clone()
        })
    }

    /// Selects rows and columns by index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), self.zero.clone(), |i, j| {
            self.get(rows[i], cols[j]).clone()
        })
    }

    /// 2×2 block matrix `[[a, b], [c, d]]`.
    pub fn from_blocks(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        assert_eq!(a.rows, b.rows);
        assert_eq!(c.rows, d.rows);
        assert_eq!(a.cols, c.cols);
        assert_eq!(b.cols, d.cols);
        let (r, cc) = (a.rows + c.rows, a.cols + b.cols);
        Self::from_fn(r, cc, a.zero.clone(), |i, j| {
            match (i < a.rows, j < a.cols) {
                (true, true) => a.get(i, j),
                (true, false) => b.get(i, j - a.cols),
                (false, true) => c.get(i - a.rows, j),
                (false, false) => d.get(i - a.rows, j - a.cols),
            }
            .clone()
        })
    }

    pub fn kron(&self, o: &Self) -> Self {
        Self::from_fn(
            self.rows * o.rows,
            self.cols * o.cols,
            self.zero.clone(),
            |i, j| {
                self.get(i / o.rows, j / o.cols)
                    .mul(o.get(i % o.rows, j % o.cols))
            },
        )
    }

    /// Determinant by cofactor expansion with zero skipping; intended for small sizes.
    pub fn det(&self) -> T {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        let cols: Vec<usize> = (0..n).collect();
        self.det_rec(0, &cols)
    }

    fn det_rec(&self, row: usize, cols: &[usize]) -> T {
        if cols.is_empty() {
            return self.zero.one_like();
        }
        let mut acc = self.zero.clone();
        for (k, &c) in cols.iter().enumerate() {
            let a = self.get(row, c);
            if a.is_zero() {
                continue;
            }
            let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let term = a.mul(&self.det_rec(row + 1, &rest));
            acc = if k % 2 == 0 {
                acc.add(&term)
            } else {
                acc.sub(&term)
            };
        }
        acc
    }
}

impl PolyMatrix {
    pub fn partial_derivative(&self, i: usize) -> Self {
        self.map(self.zero.clone(), |p| p.partial_derivative(i))
    }

    pub fn substitute(&self, targets: &[Polynomial], target_nvars: usize) -> Self {
        self.map(Polynomial::zero(target_nvars), |p| {
            p.substitute(targets, target_nvars)
        })
    }

    pub fn restrict(&self, keep: &[usize]) -> Self {
        self.map(Polynomial::zero(keep.len()), |p| p.restrict(keep))
    }

    pub fn embed(&self, nvars: usize, map: &[usize]) -> Self {
        self.map(Polynomial::zero(nvars), |p| p.embed(nvars, map))
    }

    pub fn scale_variables(&self, factors: &[Scalar]) -> Self {
        self.map(self.zero.clone(), |p| p.scale_variables(factors))
    }

    pub fn from_scalars(m: &ScalarMatrix, nvars: usize) -> Self {
        m.map(Polynomial::zero(nvars), |c| {
            Polynomial::constant(nvars, c.clone())
        })
    }

    pub fn poly_identity(n: usize, nvars: usize) -> Self {
        Self::identity(n, Polynomial::zero(nvars))
    }

    pub fn poly_zeros(rows: usize, cols: usize, nvars: usize) -> Self {
        Self::zeros(rows, cols, Polynomial::zero(nvars))
    }

    pub fn nvars(&self) -> usize {
        self.zero.nvars()
    }

    /// Constant part, if every entry is constant.
    pub fn to_scalars(&self) -> Option<ScalarMatrix> {
        if self.data.iter().all(Polynomial::is_constant) {
            Some(self.map(Scalar::zero(), Polynomial::constant_term))
        } else {
            None
        }
    }
}

/// Reduced row echelon data for repeated solving.
#[derive(Clone, Debug)]
pub struct Echelon {
    /// `transform · A = rref`
    transform: ScalarMatrix,
    pivots: Vec<usize>,
    cols: usize,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// The unique solution supported on pivot columns of `A x = b`, or `None` if inconsistent.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        let t = &self.transform;
        let mut y = vec![Scalar::zero(); t.rows()];
        for (i, yi) in y.iter_mut().enumerate() {
            for (j, bj) in b.iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                let tij = t.get(i, j);
                if !tij.is_zero() {
                    *yi = &*yi + &(tij * bj);
                }
            }
        }
        if y[self.rank()..].iter().any(|v| !v.is_zero()) {
            return None;
        }
        let mut x = vec![Scalar::zero(); self.cols];
        for (k, &p) in self.pivots.iter().enumerate() {
            x[p] = y[k].clone();
        }
        Some(x)
    }
}

impl ScalarMatrix {
    pub fn scalar_identity(n: usize) -> Self {
        Self::identity(n, Scalar::zero())
    }

    pub fn scalar_zeros(rows: usize, cols: usize) -> Self {
        Self::zeros(rows, cols, Scalar::zero())
    }

    /// Gauss–Jordan elimination recording the row operations.
    pub fn echelon(&self) -> Echelon {
        let (r, c) = (self.rows, self.cols);
        let mut a = self.clone();
        let mut t = Self::scalar_identity(r);
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..c {
            if row == r {
                break;
            }
            let Some(p) = (row..r).find(|&i| !a.get(i, col).is_zero()) else {
                continue;
            };
            a.swap_rows(row, p);
            t.swap_rows(row, p);
            let inv = a.get(row, col).inv().expect("nonzero pivot");
            a.scale_row(row, &inv);
            t.scale_row(row, &inv);
            for i in 0..r {
                if i != row && !a.get(i, col).is_zero() {
                    let f = a.get(i, col).clone();
                    a.axpy_row(i, row, &f);
                    t.axpy_row(i, row, &f);
                }
            }
            pivots.push(col);
            row += 1;
        }
        Echelon {
            transform: t,
            pivots,
            cols: c,
        }
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i != j {
            for k in 0..self.cols {
                self.data.swap(i * self.cols + k, j * self.cols + k);
            }
        }
    }

    fn scale_row(&mut self, i: usize, f: &Scalar) {
        for k in 0..self.cols {
            let idx = i * self.cols + k;
            if !self.data[idx].is_zero() {
                self.data[idx] = &self.data[idx] * f;
            }
        }
    }

    /// row_i −= f · row_j
    fn axpy_row(&mut self, i: usize, j: usize, f: &Scalar) {
        for k in 0..self.cols {
            let b = &self.data[j * self.cols + k];
            if !b.is_zero() {
                let idx = i * self.cols + k;
                self.data[idx] = &self.data[idx] - &(f * b);
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.echelon().rank()
    }

    pub fn inverse(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let e = self.echelon();
        (e.rank() == self.rows).then_some(e.transform)
    }

    pub fn det_gauss(&self) -> Scalar {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.clone();
        let mut det = Scalar::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&i| !a.get(i, col).is_zero()) else {
                return Scalar::zero();
            };
            if p != col {
                a.swap_rows(p, col);
                det = -det;
            }
            let piv = a.get(col, col).clone();
            det = &det * &piv;
            let inv = piv.inv().unwrap();
            for i in col + 1..n {
                if !a.get(i, col).is_zero() {
                    let f = a.get(i, col) * &inv;
                    a.axpy_row(i, col, &f);
                }
            }
        }
        det
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sm(rows: &[&[i64]]) -> ScalarMatrix {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Scalar::from_int(x)).collect())
                .collect(),
            Scalar::zero(),
        )
    }

    #[test]
    fn inverse_and_det() {
        let a = sm(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), ScalarMatrix::scalar_identity(3));
        assert_eq!(a.det(), Scalar::from_int(18));
        assert_eq!(a.det_gauss(), Scalar::from_int(18));
        assert!(sm(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn echelon_solve() {
        let a = sm(&[&[1, 2, 0], &[0, 0, 1], &[1, 2, 1]]);
        let e = a.echelon();
        assert_eq!(e.rank(), 2);
        let b = [
            Scalar::from_int(3),
            Scalar::from_int(1),
            Scalar::from_int(4),
        ];
        let x = e.solve(&b).unwrap();
        let ax: Vec<_> = (0..3)
            .map(|i| (0..3).fold(Scalar::zero(), |acc, j| acc + a.get(i, j) * &x[j]))
            .collect();
        assert_eq!(ax, b.to_vec());
        assert!(e
            .solve(&[Scalar::one(), Scalar::zero(), Scalar::zero()])
            .is_none());
    }

    #[test]
    fn kron_and_blocks() {
        let a = sm(&[&[1, 2], &[3, 4]]);
        let i = ScalarMatrix::scalar_identity(2);
        let k = a.kron(&i);
        assert_eq!(k.get(2, 0), &Scalar::from_int(3));
        assert_eq!(k.get(3, 1), &Scalar::from_int(3));
        assert_eq!(k.get(2, 1), &Scalar::zero());
        let b = Matrix::from_blocks(&a, &i, &i, &a);
        assert_eq!(b.submatrix(2..4, 2..4), a);
    }
}
