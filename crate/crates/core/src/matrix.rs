//! Dense matrices over [`Rat`] and over [`Poly`].

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::rat::Rat;

/// Row-major rational matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RatMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rat::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::DimensionMismatch {
                    expected: c,
                    found: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(RatMatrix {
            rows: r,
            cols: c,
            data,
        })
    }

    /// Panics if `vals.len() != rows * cols`.
    pub fn from_i64(rows: usize, cols: usize, vals: &[i64]) -> Self {
        assert_eq!(vals.len(), rows * cols);
        RatMatrix {
            rows,
            cols,
            data: vals.iter().map(|&v| Rat::int(v)).collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rat {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rat) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> Vec<Rat> {
        self.data[r * self.cols..(r + 1) * self.cols].to_vec()
    }

    pub fn col(&self, c: usize) -> Vec<Rat> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn transpose(&self) -> RatMatrix {
        let mut t = RatMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &RatMatrix) -> Result<RatMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = RatMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + &(a * other.get(k, j));
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Result<Vec<Rat>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|r| {
                (0..self.cols)
                    .map(|c| self.get(r, c) * &v[c])
                    .sum::<Rat>()
            })
            .collect())
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (RatMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            m.swap_rows(row, p);
            let inv = m.get(row, col).recip();
            for c in 0..m.cols {
                let v = m.get(row, c) * &inv;
                m.set(row, c, v);
            }
            for r in 0..m.rows {
                if r == row {
                    continue;
                }
                let f = m.get(r, col).clone();
                if f.is_zero() {
                    continue;
                }
                for c in 0..m.cols {
                    let v = m.get(r, c) - &(&f * m.get(row, c));
                    m.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{v : M v = 0}`, each vector scaled so that its first
    /// nonzero entry is positive.
    pub fn nullspace(&self) -> Vec<Vec<Rat>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Rat::zero(); self.cols];
                v[f] = Rat::one();
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = -r.get(i, f);
                }
                orient_positive(v)
            })
            .collect()
    }

    /// Basis of `{w : wᵀ M = 0}`.
    pub fn left_nullspace(&self) -> Vec<Vec<Rat>> {
        self.transpose().nullspace()
    }

    pub fn det(&self) -> Result<Rat> {
        if self.rows != self.cols {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let mut m = self.clone();
        let n = self.rows;
        let mut det = Rat::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !m.get(r, col).is_zero()) else {
                return Ok(Rat::zero());
            };
            if p != col {
                m.swap_rows(p, col);
                det = -det;
            }
            let pivot = m.get(col, col).clone();
            det *= &pivot;
            let inv = pivot.recip();
            for r in col + 1..n {
                let f = m.get(r, col) * &inv;
                if f.is_zero() {
                    continue;
                }
                for c in col..n {
                    let v = m.get(r, c) - &(&f * m.get(col, c));
                    m.set(r, c, v);
                }
            }
        }
        Ok(det)
    }

    pub fn inverse(&self) -> Result<Option<RatMatrix>> {
        if self.rows != self.cols {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut aug = RatMatrix::zeros(n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, n + r, Rat::one());
        }
        let (red, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Ok(None);
        }
        let mut inv = RatMatrix::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                inv.set(r, c, red.get(r, n + c).clone());
            }
        }
        Ok(Some(inv))
    }
}

pub(crate) fn orient_positive(mut v: Vec<Rat>) -> Vec<Rat> {
    if let Some(first) = v.iter().find(|x| !x.is_zero()) {
        if first.signum() < 0 {
            for x in v.iter_mut() {
                *x = -&*x;
            }
        }
    }
    v
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            write!(f, "{}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Row-major matrix of polynomials sharing one variable count.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    nvars: usize,
    entries: Vec<Poly>,
}

impl PolyMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Poly>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Precondition("empty matrix".into()));
        }
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: entries.len(),
            });
        }
        let nvars = entries[0].nvars();
        if let Some(bad) = entries.iter().find(|p| p.nvars() != nvars) {
            return Err(Error::DimensionMismatch {
                expected: nvars,
                found: bad.nvars(),
            });
        }
        Ok(PolyMatrix {
            rows,
            cols,
            nvars,
            entries,
        })
    }

    pub fn identity(n: usize, nvars: usize) -> Self {
        let entries = (0..n * n)
            .map(|k| {
                if k / n == k % n {
                    Poly::one(nvars)
                } else {
                    Poly::zero(nvars)
                }
            })
            .collect();
        PolyMatrix {
            rows: n,
            cols: n,
            nvars,
            entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn get(&self, r: usize, c: usize) -> &Poly {
        &self.entries[r * self.cols + c]
    }

    pub fn entries(&self) -> &[Poly] {
        &self.entries
    }

    pub fn column(&self, c: usize) -> Vec<Poly> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn map(&self, f: impl Fn(&Poly) -> Poly) -> PolyMatrix {
        PolyMatrix {
            rows: self.rows,
            cols: self.cols,
            nvars: self.nvars,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn mul(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        if self.nvars != other.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                found: other.nvars,
            });
        }
        let mut entries = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Poly::zero(self.nvars);
                for k in 0..self.cols {
                    acc = &acc + &(self.get(i, k) * other.get(k, j));
                }
                entries.push(acc);
            }
        }
        PolyMatrix::new(self.rows, other.cols, entries)
    }

    pub fn eval(&self, point: &[Rat]) -> Result<RatMatrix> {
        let vals = self
            .entries
            .iter()
            .map(|p| p.eval(point))
            .collect::<Result<Vec<_>>>()?;
        Ok(RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: vals,
        })
    }

    pub fn eval_origin(&self) -> RatMatrix {
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.entries.iter().map(|p| p.constant_term()).collect(),
        }
    }

    fn require_square(&self) -> Result<()> {
        if self.rows != self.cols {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        } else {
            Ok(())
        }
    }

    /// Exact determinant by cofactor expansion (memoized over column subsets).
    pub fn det(&self) -> Result<Poly> {
        self.require_square()?;
        Ok(self.minor_det(&(0..self.rows).collect::<Vec<_>>(), &(0..self.cols).collect::<Vec<_>>(), None))
    }

    /// Determinant with every intermediate product truncated at `max_degree`;
    /// equals `det().truncate(max_degree)`.
    pub fn det_truncated(&self, max_degree: u32) -> Result<Poly> {
        self.require_square()?;
        Ok(self.minor_det(
            &(0..self.rows).collect::<Vec<_>>(),
            &(0..self.cols).collect::<Vec<_>>(),
            Some(max_degree),
        ))
    }

    /// Determinant of the submatrix on `rows × cols` (equal lengths).
    fn minor_det(&self, rows: &[usize], cols: &[usize], max_degree: Option<u32>) -> Poly {
        debug_assert_eq!(rows.len(), cols.len());
        let k = rows.len();
        let nv = self.nvars;
        // dets[mask] = determinant of rows[0..popcount(mask)] × {cols[j] : j ∈ mask}
        let mut dets: HashMap<u32, Poly> = HashMap::new();
        dets.insert(0, Poly::one(nv));
        let mut frontier: Vec<u32> = vec![0];
        for (r, &row) in rows.iter().enumerate() {
            let mut next: HashMap<u32, Poly> = HashMap::new();
            for &mask in &frontier {
                let base = match dets.get(&mask) {
                    Some(p) => p.clone(),
                    None => continue,
                };
                if base.is_zero() {
                    continue;
                }
                for (j, &col) in cols.iter().enumerate() {
                    if mask & (1 << j) != 0 {
                        continue;
                    }
                    let entry = self.get(row, col);
                    if entry.is_zero() {
                        continue;
                    }
                    // Row r is the last row of the (r+1)-minor; column j sits at
                    // position `above` within the sorted column subset.
                    let pos = (mask & ((1u32 << j) - 1)).count_ones() as usize;
                    let newmask = mask | (1 << j);
                    // Laplace along the last row: sign (-1)^{r + pos}.
                    let neg = (r + pos) % 2 == 1;
                    let mut term = match max_degree {
                        Some(d) => entry.mul_truncated(&base, d).expect("shared nvars"),
                        None => entry.checked_mul(&base).expect("shared nvars"),
                    };
                    if neg {
                        term = -term;
                    }
                    let slot = next.entry(newmask).or_insert_with(|| Poly::zero(nv));
                    *slot = &*slot + &term;
                }
            }
            frontier = next.keys().copied().collect();
            frontier.sort_unstable();
            dets = next;
        }
        if k == 0 {
            return Poly::one(nv);
        }
        dets.remove(&((1u32 << k) - 1)).unwrap_or_else(|| Poly::zero(nv))
    }

    /// `(-1)^{i+j}` times the determinant with row `i` and column `j` removed.
    pub fn cofactor(&self, i: usize, j: usize) -> Result<Poly> {
        self.cofactor_impl(i, j, None)
    }

    fn cofactor_impl(&self, i: usize, j: usize, max_degree: Option<u32>) -> Result<Poly> {
        self.require_square()?;
        let rows: Vec<usize> = (0..self.rows).filter(|&r| r != i).collect();
        let cols: Vec<usize> = (0..self.cols).filter(|&c| c != j).collect();
        let m = self.minor_det(&rows, &cols, max_degree);
        Ok(if (i + j) % 2 == 1 { -m } else { m })
    }

    /// Column `j` of the adjugate: entries `C_{j,i}` for `i = 0..n`.
    pub fn adjugate_column(&self, j: usize) -> Result<Vec<Poly>> {
        self.adjugate_column_impl(j, None)
    }

    pub fn adjugate_column_truncated(&self, j: usize, max_degree: u32) -> Result<Vec<Poly>> {
        self.adjugate_column_impl(j, Some(max_degree))
    }

    fn adjugate_column_impl(&self, j: usize, max_degree: Option<u32>) -> Result<Vec<Poly>> {
        self.require_square()?;
        if j >= self.cols {
            return Err(Error::IndexOutOfRange {
                index: j,
                nvars: self.cols,
            });
        }
        (0..self.rows)
            .map(|i| self.cofactor_impl(j, i, max_degree))
            .collect()
    }

    /// Transposed cofactor matrix: `M · adj(M) = det(M) · I`.
    pub fn adjugate(&self) -> Result<PolyMatrix> {
        self.require_square()?;
        let n = self.rows;
        if n == 1 {
            return Ok(PolyMatrix::identity(1, self.nvars));
        }
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(self.cofactor(j, i)?);
            }
        }
        PolyMatrix::new(n, n, entries)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(n: usize, i: usize) -> Poly {
        Poly::var(n, i)
    }

    fn c(n: usize, v: i64) -> Poly {
        Poly::constant(n, Rat::int(v))
    }

    #[test]
    fn cusp_jacobian_determinant() {
        let (x1, x2) = (x(2, 0), x(2, 1));
        let j = PolyMatrix::new(
            2,
            2,
            vec![&x1.pow(2).scale(&Rat::int(3)) + &x2, x1.clone(), c(2, 0), c(2, 1)],
        )
        .unwrap();
        assert_eq!(j.det().unwrap(), &x1.pow(2).scale(&Rat::int(3)) + &x2);
    }

    #[test]
    fn adjugate_of_diagonal() {
        let x1 = x(2, 0);
        let m = PolyMatrix::new(2, 2, vec![x1.scale(&Rat::int(2)), c(2, 0), c(2, 0), c(2, 1)])
            .unwrap();
        let adj = m.adjugate().unwrap();
        let expected =
            PolyMatrix::new(2, 2, vec![c(2, 1), c(2, 0), c(2, 0), x1.scale(&Rat::int(2))])
                .unwrap();
        assert_eq!(adj, expected);
    }

    #[test]
    fn identity_determinant() {
        assert_eq!(PolyMatrix::identity(4, 3).det().unwrap(), Poly::one(3));
    }

    #[test]
    fn non_square_errors() {
        let m = PolyMatrix::new(1, 2, vec![c(1, 1), c(1, 2)]).unwrap();
        assert_eq!(m.det(), Err(Error::NotSquare { rows: 1, cols: 2 }));
        assert!(m.adjugate().is_err());
        assert!(RatMatrix::from_i64(2, 3, &[1, 2, 3, 4, 5, 6]).det().is_err());
    }

    #[test]
    fn rat_determinant_and_rank() {
        let m = RatMatrix::from_i64(3, 3, &[2, 0, 1, 1, 3, 2, 1, 1, 1]);
        // 2(3-2) - 0 + 1(1-3) = 0
        assert!(m.det().unwrap().is_zero());
        assert_eq!(m.rank(), 2);
        let p = RatMatrix::from_i64(3, 3, &[0, 1, 0, 0, 0, 1, 1, 0, 0]);
        assert_eq!(p.det().unwrap(), Rat::one());
    }

    #[test]
    fn nullspace_is_oriented_and_annihilated() {
        let m = RatMatrix::from_i64(2, 3, &[1, 2, 3, 2, 4, 6]);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 2);
        for v in &ns {
            let mv = m.mul_vec(v).unwrap();
            assert!(mv.iter().all(|x| x.is_zero()));
            assert!(v.iter().find(|x| !x.is_zero()).unwrap().signum() > 0);
        }
    }

    #[test]
    fn inverse_roundtrip() {
        let m = RatMatrix::from_i64(2, 2, &[2, 1, 1, 1]);
        let inv = m.inverse().unwrap().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), RatMatrix::identity(2));
        assert!(RatMatrix::from_i64(2, 2, &[1, 2, 2, 4]).inverse().unwrap().is_none());
    }

    #[test]
    fn determinant_by_subsets_matches_gaussian_elimination() {
        let vals = [3, -1, 2, 0, 1, 4, -2, 5, 0, 2, 1, 1, 7, -3, 2, 2];
        let rm = RatMatrix::from_i64(4, 4, &vals);
        let pm = PolyMatrix::new(4, 4, vals.iter().map(|&v| c(1, v)).collect()).unwrap();
        assert_eq!(pm.det().unwrap().constant_term(), rm.det().unwrap());
    }
}
