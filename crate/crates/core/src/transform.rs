//! Transformations of `{0, …, n-1}` and tuples of them.
//!
//! Composition is left to right: `q(st) = (qs)t`. Ranks are mixed-radix
//! numbers over the image vector with the image of state 0 as the most
//! significant digit; tuple ranks put component 0 first.

use std::fmt;

use crate::error::{Error, Result};

/// A total map from `{0, …, n-1}` into itself.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Transformation {
    image: Vec<u32>,
}

/// Position of a transformation or tuple in rank order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rank(pub u64);

/// Number of transformations of an `n`-set, or `None` on overflow.
pub fn monoid_size(n: usize) -> Option<u64> {
    (n as u64).checked_pow(n as u32)
}

/// `∏ n_j^{n_j}`, computed without overflow for any realistic shape.
pub fn tuple_monoid_size(shape: &[usize]) -> u128 {
    shape.iter().fold(1u128, |acc, &n| {
        acc.saturating_mul((n as u128).saturating_pow(n as u32))
    })
}

impl Transformation {
    pub fn new(image: Vec<usize>) -> Result<Self> {
        let n = image.len();
        if n == 0 {
            return Err(Error::InvalidConfig("transformation domain must be non-empty".into()));
        }
        if let Some(&bad) = image.iter().find(|&&x| x >= n) {
            return Err(Error::StateOutOfRange { state: bad, states: n });
        }
        Ok(Transformation { image: image.into_iter().map(|x| x as u32).collect() })
    }

    pub fn identity(n: usize) -> Self {
        Transformation { image: (0..n as u32).collect() }
    }

    pub fn constant(n: usize, c: usize) -> Self {
        assert!(c < n, "constant value out of range");
        Transformation { image: vec![c as u32; n] }
    }

    pub fn n(&self) -> usize {
        self.image.len()
    }

    #[inline]
    pub fn apply(&self, q: usize) -> usize {
        self.image[q] as usize
    }

    pub fn image(&self) -> Vec<usize> {
        self.image.iter().map(|&x| x as usize).collect()
    }

    /// `self` followed by `then`.
    pub fn compose(&self, then: &Transformation) -> Result<Transformation> {
        if self.n() != then.n() {
            return Err(Error::SizeMismatch { left: self.n(), right: then.n() });
        }
        Ok(Transformation { image: self.image.iter().map(|&q| then.image[q as usize]).collect() })
    }

    pub fn rank(&self) -> Rank {
        let n = self.n() as u64;
        Rank(self.image.iter().fold(0u64, |acc, &d| acc * n + d as u64))
    }

    pub fn unrank(n: usize, rank: Rank) -> Result<Transformation> {
        let limit = monoid_size(n).ok_or(Error::LetterLimit {
            letters: u128::MAX,
            limit: usize::MAX,
        })?;
        if n == 0 || rank.0 >= limit {
            return Err(Error::RankOutOfRange { index: rank.0, limit });
        }
        Ok(Transformation { image: digits(rank.0, n) })
    }
}

/// Base-`n` digits of `index`, most significant first, `n` of them.
fn digits(mut index: u64, n: usize) -> Vec<u32> {
    let mut image = vec![0u32; n];
    for slot in image.iter_mut().rev() {
        *slot = (index % n as u64) as u32;
        index /= n as u64;
    }
    image
}

impl fmt::Display for Transformation {
    /// 1-based image list, e.g. `[2 1 1]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, &x) in self.image.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", x + 1)?;
        }
        write!(f, "]")
    }
}

/// One transformation per component `Q_1, …, Q_m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TransformationTuple {
    parts: Vec<Transformation>,
}

impl TransformationTuple {
    pub fn new(parts: Vec<Transformation>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidConfig("a transformation tuple needs m >= 1".into()));
        }
        Ok(TransformationTuple { parts })
    }

    pub fn parts(&self) -> &[Transformation] {
        &self.parts
    }

    pub fn shape(&self) -> Vec<usize> {
        self.parts.iter().map(Transformation::n).collect()
    }

    pub fn compose(&self, then: &TransformationTuple) -> Result<TransformationTuple> {
        if self.parts.len() != then.parts.len() {
            return Err(Error::SizeMismatch { left: self.parts.len(), right: then.parts.len() });
        }
        let parts = self
            .parts
            .iter()
            .zip(&then.parts)
            .map(|(s, t)| s.compose(t))
            .collect::<Result<Vec<_>>>()?;
        Ok(TransformationTuple { parts })
    }

    pub fn rank(&self) -> Rank {
        let mut acc = 0u64;
        for t in &self.parts {
            let radix = monoid_size(t.n()).expect("component rank fits in u64");
            acc = acc * radix + t.rank().0;
        }
        Rank(acc)
    }

    pub fn unrank(shape: &[usize], rank: Rank) -> Result<TransformationTuple> {
        if shape.is_empty() || shape.contains(&0) {
            return Err(Error::InvalidConfig("tuple shape needs sizes >= 1".into()));
        }
        let total = tuple_monoid_size(shape);
        if (rank.0 as u128) >= total {
            return Err(Error::RankOutOfRange {
                index: rank.0,
                limit: u64::try_from(total).unwrap_or(u64::MAX),
            });
        }
        let mut rest = rank.0;
        let mut parts = Vec::with_capacity(shape.len());
        for &n in shape.iter().rev() {
            let radix = monoid_size(n).expect("checked above");
            parts.push(Transformation { image: digits(rest % radix, n) });
            rest /= radix;
        }
        parts.reverse();
        Ok(TransformationTuple { parts })
    }
}

impl fmt::Display for TransformationTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, t) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{t}")?;
        }
        write!(f, ")")
    }
}

fn check_cap(letters: u128, cap: usize) -> Result<usize> {
    if letters > cap as u128 {
        return Err(Error::LetterLimit { letters, limit: cap });
    }
    Ok(letters as usize)
}

/// Lazily yields every transformation of an `n`-set in rank order.
pub fn full_monoid(n: usize) -> impl Iterator<Item = Transformation> {
    let count = monoid_size(n).unwrap_or(0);
    (0..count).map(move |r| Transformation { image: digits(r, n) })
}

/// The full transformation monoid on `n` points, in rank order.
pub fn enumerate_full_monoid(n: usize, cap: usize) -> Result<Vec<Transformation>> {
    if n == 0 {
        return Err(Error::InvalidConfig("domain size must be >= 1".into()));
    }
    check_cap(tuple_monoid_size(&[n]), cap)?;
    Ok(full_monoid(n).collect())
}

/// All tuples in `𝒯_{n_1} × ⋯ × 𝒯_{n_m}`, in rank order.
pub fn enumerate_full_tuple_monoid(shape: &[usize], cap: usize) -> Result<Vec<TransformationTuple>> {
    if shape.is_empty() || shape.contains(&0) {
        return Err(Error::InvalidConfig("tuple shape needs sizes >= 1".into()));
    }
    let total = check_cap(tuple_monoid_size(shape), cap)?;
    (0..total as u64).map(|r| TransformationTuple::unrank(shape, Rank(r))).collect()
}
