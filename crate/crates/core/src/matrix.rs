//! Square matrices indexed by a [`PolicySet`].

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::order::PolicySet;

/// Exact rational scalar used throughout.
pub type Rational = BigRational;

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// A nonnegative square matrix whose rows and columns are labelled by
/// policies. Storage is row-major.
#[derive(Clone, PartialEq, Debug)]
pub struct LabeledMatrix<T> {
    labels: PolicySet,
    entries: Vec<T>,
}

impl<T> LabeledMatrix<T> {
    pub fn from_fn(labels: PolicySet, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let n = labels.len();
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(f(i, j));
            }
        }
        LabeledMatrix { labels, entries }
    }

    pub fn labels(&self) -> &PolicySet {
        &self.labels
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.entries[i * self.dim() + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        let n = self.dim();
        self.entries[i * n + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        let n = self.dim();
        &self.entries[i * n..(i + 1) * n]
    }

    pub fn rows(&self) -> std::slice::ChunksExact<'_, T> {
        self.entries.chunks_exact(self.dim())
    }

    pub fn map<U>(&self, f: impl Fn(&T) -> U) -> LabeledMatrix<U> {
        LabeledMatrix {
            labels: self.labels.clone(),
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn to_rows(&self) -> Vec<Vec<T>>
    where
        T: Clone,
    {
        self.rows().map(<[T]>::to_vec).collect()
    }
}

impl LabeledMatrix<Rational> {
    /// Validate nonnegativity and shape.
    pub fn from_rows(labels: PolicySet, rows: Vec<Vec<Rational>>) -> Result<Self> {
        let n = labels.len();
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidMatrix(format!("expected {n}x{n} entries")));
        }
        let entries: Vec<Rational> = rows.into_iter().flatten().collect();
        if entries.iter().any(Signed::is_negative) {
            return Err(Error::InvalidMatrix("negative entry".into()));
        }
        Ok(LabeledMatrix { labels, entries })
    }

    pub fn to_f64(&self) -> LabeledMatrix<f64> {
        self.map(rational_to_f64)
    }

    /// Elementwise sum. Both operands must share labels.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.labels != other.labels {
            return Err(Error::ForeignPolicySet(format!("{:?}", other.labels)));
        }
        Ok(LabeledMatrix {
            labels: self.labels.clone(),
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn scale(&self, k: &Rational) -> Self {
        self.map(|v| v * k)
    }

    /// First row whose entries do not sum to exactly one, if any.
    pub fn non_stochastic_row(&self) -> Option<usize> {
        let one = Rational::from_integer(1.into());
        self.rows().position(|r| r.iter().fold(Rational::zero(), |a, b| a + b) != one)
    }
}

impl LabeledMatrix<f64> {
    pub fn from_rows_f64(labels: PolicySet, rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = labels.len();
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidMatrix(format!("expected {n}x{n} entries")));
        }
        let entries: Vec<f64> = rows.into_iter().flatten().collect();
        if entries.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::InvalidMatrix("negative or non-finite entry".into()));
        }
        Ok(LabeledMatrix { labels, entries })
    }
}
