//! Integer matrices, Smith normal form and finitely generated abelian groups.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntegerMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntegerMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    /// Builds a matrix from row vectors. All rows must have length `cols`.
    pub fn from_rows<T: Into<BigInt> + Clone>(cols: usize, rows: &[Vec<T>]) -> Self {
        let mut m = IntegerMatrix::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "row {i} has wrong length");
            for (j, v) in row.iter().enumerate() {
                m.set(i, j, v.clone().into());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul(&self, other: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = IntegerMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.entries[idx] += a * other.get(k, j);
                }
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.entries.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.entries.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] += factor * row[src]
    fn add_row(&mut self, dst: usize, src: usize, factor: &BigInt) {
        for j in 0..self.cols {
            let v = self.get(src, j) * factor;
            self.entries[dst * self.cols + j] += v;
        }
    }

    /// col[dst] += factor * col[src]
    fn add_col(&mut self, dst: usize, src: usize, factor: &BigInt) {
        for i in 0..self.rows {
            let v = self.get(i, src) * factor;
            self.entries[i * self.cols + dst] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let idx = i * self.cols + j;
            self.entries[idx] = -std::mem::take(&mut self.entries[idx]);
        }
    }
}

impl fmt::Display for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

/// Result of [`smith_normal_form`]: `left * m * right == diagonal matrix`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    /// Diagonal entries, `min(rows, cols)` of them, each dividing the next.
    pub diagonal: Vec<BigInt>,
    pub left: IntegerMatrix,
    pub right: IntegerMatrix,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.diagonal.iter().filter(|d| !d.is_zero()).count()
    }

    pub fn diagonal_matrix(&self, rows: usize, cols: usize) -> IntegerMatrix {
        let mut d = IntegerMatrix::zeros(rows, cols);
        for (i, v) in self.diagonal.iter().enumerate() {
            d.set(i, i, v.clone());
        }
        d
    }
}

/// Smith normal form by unimodular row and column operations, pivoting on the
/// entry of least absolute value in the remaining block.
pub fn smith_normal_form(m: &IntegerMatrix) -> SmithForm {
    let (rows, cols) = (m.rows, m.cols);
    let mut a = m.clone();
    let mut left = IntegerMatrix::identity(rows);
    let mut right = IntegerMatrix::identity(cols);
    let steps = rows.min(cols);

    for t in 0..steps {
        loop {
            let Some((pi, pj)) = min_abs_entry(&a, t) else {
                break;
            };
            a.swap_rows(t, pi);
            left.swap_rows(t, pi);
            a.swap_cols(t, pj);
            right.swap_cols(t, pj);

            let mut clean = true;
            for i in t + 1..rows {
                if a.get(i, t).is_zero() {
                    continue;
                }
                let q = -a.get(i, t).div_floor(a.get(t, t));
                a.add_row(i, t, &q);
                left.add_row(i, t, &q);
                if !a.get(i, t).is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if a.get(t, j).is_zero() {
                    continue;
                }
                let q = -a.get(t, j).div_floor(a.get(t, t));
                a.add_col(j, t, &q);
                right.add_col(j, t, &q);
                if !a.get(t, j).is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // Row and column t are clear; enforce divisibility into the rest.
            let pivot = a.get(t, t).clone();
            let offender =
                (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !a.get(i, j).is_multiple_of(&pivot)));
            match offender {
                Some(i) => {
                    let one = BigInt::one();
                    a.add_row(t, i, &one);
                    left.add_row(t, i, &one);
                }
                None => break,
            }
        }
        if a.get(t, t).is_negative() {
            a.negate_row(t);
            left.negate_row(t);
        }
    }

    let diagonal = (0..steps).map(|i| a.get(i, i).clone()).collect();
    SmithForm {
        diagonal,
        left,
        right,
    }
}

fn min_abs_entry(a: &IntegerMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, BigInt)> = None;
    for i in t..a.rows {
        for j in t..a.cols {
            let v = a.get(i, j);
            if v.is_zero() {
                continue;
            }
            let abs = v.abs();
            if best.as_ref().is_none_or(|(_, _, b)| abs < *b) {
                best = Some((i, j, abs));
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

/// `Z^free_rank + Z/d1 + ... + Z/dk` with `d1 | d2 | ... | dk`, all `d >= 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianGroupDescriptor {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl AbelianGroupDescriptor {
    pub fn trivial() -> Self {
        AbelianGroupDescriptor {
            free_rank: 0,
            torsion: Vec::new(),
        }
    }

    pub fn free(rank: usize) -> Self {
        AbelianGroupDescriptor {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Cokernel of a relation matrix whose columns index generators.
    pub fn cokernel(m: &IntegerMatrix) -> Self {
        let snf = smith_normal_form(m);
        let rank = snf.rank();
        let torsion = snf
            .diagonal
            .into_iter()
            .filter(|d| *d > BigInt::one())
            .collect();
        AbelianGroupDescriptor {
            free_rank: m.cols() - rank,
            torsion,
        }
    }
}

impl fmt::Display for AbelianGroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return f.write_str("trivial");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        f.write_str(&parts.join(" + "))
    }
}

impl Serialize for AbelianGroupDescriptor {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("AbelianGroupDescriptor", 3)?;
        st.serialize_field("free_rank", &self.free_rank)?;
        let torsion: Vec<String> = self.torsion.iter().map(ToString::to_string).collect();
        st.serialize_field("torsion", &torsion)?;
        st.serialize_field("text", &self.to_string())?;
        st.end()
    }
}
