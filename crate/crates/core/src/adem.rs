//! Compositions of Steenrod squares and normalization to the admissible
//! Serre-Cartan basis via the Adem relations.

use std::collections::BTreeSet;
use std::fmt;

use crate::steenrod::binomial_odd;

/// A composition `Sq^{i_1} ∘ ... ∘ Sq^{i_r}` of Steenrod squares.
///
/// The word is admissible when `i_j >= 2 i_{j+1}` for every adjacent pair;
/// admissible words form an additive basis of the Steenrod algebra.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SqWord {
    indices: Vec<u32>,
}

impl SqWord {
    pub fn new(indices: Vec<u32>) -> Self {
        SqWord { indices }
    }

    /// The empty composition (the identity operation).
    pub fn identity() -> Self {
        SqWord { indices: Vec::new() }
    }

    pub fn indices(&self) -> &[u32] {
        &self.indices
    }

    pub fn degree(&self) -> u64 {
        self.indices.iter().map(|&i| i as u64).sum()
    }

    pub fn is_admissible(&self) -> bool {
        self.indices.windows(2).all(|w| w[0] >= 2 * w[1])
    }

    /// Copy with all `Sq^0` factors removed (`Sq^0` is the identity).
    fn strip_zeros(&self) -> SqWord {
        SqWord {
            indices: self.indices.iter().copied().filter(|&i| i != 0).collect(),
        }
    }
}

impl fmt::Display for SqWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.indices.is_empty() {
            return write!(f, "1");
        }
        for (k, i) in self.indices.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "Sq^{i}")?;
        }
        Ok(())
    }
}

/// An F2-sum of equal-degree words; addition is symmetric difference.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SqSum {
    words: BTreeSet<SqWord>,
}

impl SqSum {
    pub fn zero() -> Self {
        SqSum::default()
    }

    pub fn from_words(words: impl IntoIterator<Item = SqWord>) -> Self {
        let mut sum = SqSum::zero();
        for w in words {
            sum.toggle(w);
        }
        sum
    }

    /// Add one word mod 2.
    pub fn toggle(&mut self, w: SqWord) {
        if !self.words.remove(&w) {
            self.words.insert(w);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.is_empty()
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> impl Iterator<Item = &SqWord> {
        self.words.iter()
    }
}

impl fmt::Display for SqSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.words.is_empty() {
            return write!(f, "0");
        }
        // descending leading index reads more naturally
        for (k, w) in self.words.iter().rev().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{w}")?;
        }
        Ok(())
    }
}

/// Rewrite a composition as an F2-sum of admissible words.
///
/// The leftmost inadmissible adjacent pair `Sq^i Sq^j` (with `i < 2j`) is
/// replaced through the Adem relation
/// `Sq^i Sq^j = sum_t C(j-t-1, i-2t) Sq^{i+j-t} Sq^t` and the rewriting
/// repeats until every surviving word is admissible. Each rewrite strictly
/// increases the pair's leading index, bounded by the word degree, so the
/// process terminates. `Sq^0` factors are dropped.
pub fn adem_normalize(w: &SqWord) -> SqSum {
    let mut pending: BTreeSet<SqWord> = BTreeSet::new();
    pending.insert(w.strip_zeros());
    let mut result = SqSum::zero();

    while let Some(word) = pending.pop_first() {
        let bad = word
            .indices
            .windows(2)
            .position(|pair| pair[0] < 2 * pair[1]);
        let Some(pos) = bad else {
            result.toggle(word);
            continue;
        };
        let (i, j) = (word.indices[pos], word.indices[pos + 1]);
        for t in 0..=i / 2 {
            // t <= i/2 < j, so j - t - 1 never underflows
            if !binomial_odd((j - t - 1) as u64, (i - 2 * t) as u64) {
                continue;
            }
            let mut indices = Vec::with_capacity(word.indices.len());
            indices.extend_from_slice(&word.indices[..pos]);
            indices.push(i + j - t);
            if t > 0 {
                indices.push(t);
            }
            indices.extend_from_slice(&word.indices[pos + 2..]);
            let rewritten = SqWord::new(indices);
            // toggle into the worklist: duplicate words cancel mod 2
            if !pending.remove(&rewritten) {
                pending.insert(rewritten);
            }
        }
    }
    result
}
