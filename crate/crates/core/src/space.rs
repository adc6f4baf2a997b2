//! Labeled composite Hilbert spaces.
//!
//! A [`CompositeSpace`] is an ordered list of subsystems, each with a name and
//! a dimension. Composite basis indices are big-endian in label order: the
//! first subsystem is the slowest-varying index. For two qubits with levels
//! g = 0 and e = 1 this puts the basis in the order (gg, ge, eg, ee).

use crate::error::{Error, Result};
use crate::tol;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompositeSpace {
    labels: Vec<String>,
    dims: Vec<usize>,
}

impl CompositeSpace {
    pub fn new<L: Into<String>>(labels: Vec<L>, dims: Vec<usize>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.len() != dims.len() {
            return Err(Error::LabelDimMismatch {
                labels: labels.len(),
                dims: dims.len(),
            });
        }
        if labels.is_empty() {
            return Err(Error::InvalidParameter("space must have at least one subsystem".into()));
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        let mut total: usize = 1;
        for &d in &dims {
            if d < 2 {
                return Err(Error::SubsystemTooSmall(d));
            }
            total = total.saturating_mul(d);
            if total > tol::MAX_DIMENSION {
                return Err(Error::DimensionGuard(total, tol::MAX_DIMENSION));
            }
        }
        Ok(Self { labels, dims })
    }

    /// Space of `n` qubits with the given labels.
    pub fn qubits<L: Into<String>>(labels: Vec<L>) -> Result<Self> {
        let n = labels.len();
        Self::new(labels, vec![2; n])
    }

    /// Single-subsystem space, used for flattened (non-tensor) bases.
    pub fn flat<L: Into<String>>(label: L, dim: usize) -> Result<Self> {
        Self::new(vec![label], vec![dim])
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn n_subsystems(&self) -> usize {
        self.labels.len()
    }

    /// Total Hilbert-space dimension (product of subsystem dimensions).
    pub fn dim(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn position(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn positions<S: AsRef<str>>(&self, labels: &[S]) -> Result<Vec<usize>> {
        labels.iter().map(|l| self.position(l.as_ref())).collect()
    }

    /// Concatenation of two spaces; labels must stay unique.
    pub fn concat(&self, other: &Self) -> Result<Self> {
        let labels = self
            .labels
            .iter()
            .chain(other.labels.iter())
            .cloned()
            .collect();
        let dims = self.dims.iter().chain(other.dims.iter()).copied().collect();
        Self::new::<String>(labels, dims)
    }

    /// Sub-space made of the named subsystems, in the order given.
    pub fn subspace<S: AsRef<str>>(&self, labels: &[S]) -> Result<Self> {
        let pos = self.positions(labels)?;
        Self::new(
            pos.iter().map(|&p| self.labels[p].clone()).collect(),
            pos.iter().map(|&p| self.dims[p]).collect(),
        )
    }

    /// Same dims with new labels, e.g. when an abstract two-qubit state is
    /// assigned to concrete hardware qubits.
    pub fn relabeled<L: Into<String>>(&self, labels: Vec<L>) -> Result<Self> {
        Self::new(labels, self.dims.clone())
    }

    /// Strides of each subsystem in the flat index (big-endian).
    pub(crate) fn strides(&self) -> Vec<usize> {
        let n = self.dims.len();
        let mut s = vec![1usize; n];
        for k in (0..n.saturating_sub(1)).rev() {
            s[k] = s[k + 1] * self.dims[k + 1];
        }
        s
    }

    pub(crate) fn flat_index(&self, multi: &[usize]) -> usize {
        debug_assert_eq!(multi.len(), self.dims.len());
        self.strides()
            .iter()
            .zip(multi)
            .map(|(s, i)| s * i)
            .sum()
    }

    pub(crate) fn multi_index(&self, mut flat: usize) -> Vec<usize> {
        let strides = self.strides();
        let mut out = Vec::with_capacity(self.dims.len());
        for s in strides {
            out.push(flat / s);
            flat %= s;
        }
        out
    }
}

impl std::fmt::Display for CompositeSpace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self
            .labels
            .iter()
            .zip(&self.dims)
            .map(|(l, d)| format!("{l}:{d}"))
            .collect();
        write!(f, "[{}]", parts.join(", "))
    }
}
