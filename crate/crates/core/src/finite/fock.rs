//! A truncated model of the free-semigroup action fixing a unit vector:
//! `H = ℂξ ⊕ (words of length ≤ depth)^{(d-1)}` with `S_1 ξ = ξ`,
//! `S_i ξ = ξ_i` for `i ≥ 2`, and left creation on word components.
//! Images beyond the depth are zero-padded, so every inner product of
//! words inside the depth is exact.

use std::collections::HashMap;

use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Words over `{1..d}` of length `0..=max_len`, by length then lexicographic.
pub fn words_up_to(d: usize, max_len: usize) -> Vec<Vec<u8>> {
    let mut out: Vec<Vec<u8>> = vec![vec![]];
    let mut level: Vec<Vec<u8>> = vec![vec![]];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(level.len() * d);
        for w in &level {
            for letter in 1..=d as u8 {
                let mut nw = w.clone();
                nw.push(letter);
                next.push(nw);
            }
        }
        out.extend(next.iter().cloned());
        level = next;
    }
    out
}

/// The truncated model with its letter actions precomputed.
pub struct TruncatedFock {
    d: usize,
    depth: usize,
    words: Vec<Vec<u8>>,
    /// `prepend[w][j-1]` = index of `j·w`, or None past the depth.
    prepend: Vec<Vec<Option<usize>>>,
}

impl TruncatedFock {
    pub fn new(d: usize, depth: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidSpec("free-semigroup rank d must be ≥ 2".into()));
        }
        if d > 9 {
            return Err(Error::InvalidSpec(
                "letters are encoded as digits; d ≤ 9".into(),
            ));
        }
        if depth < 1 {
            return Err(Error::InvalidSpec("depth must be ≥ 1".into()));
        }
        let words = words_up_to(d, depth);
        let dim = 1 + (d - 1) * words.len();
        if dim > 2_000_000 {
            return Err(Error::InvalidSpec(format!(
                "truncated model dimension {dim} exceeds the budget"
            )));
        }
        let index: HashMap<&[u8], usize> = words
            .iter()
            .enumerate()
            .map(|(i, w)| (w.as_slice(), i))
            .collect();
        let prepend = words
            .iter()
            .map(|w| {
                (1..=d as u8)
                    .map(|letter| {
                        if w.len() == depth {
                            None
                        } else {
                            let mut nw = Vec::with_capacity(w.len() + 1);
                            nw.push(letter);
                            nw.extend_from_slice(w);
                            Some(index[nw.as_slice()])
                        }
                    })
                    .collect()
            })
            .collect();
        Ok(TruncatedFock {
            d,
            depth,
            words,
            prepend,
        })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn dim(&self) -> usize {
        1 + (self.d - 1) * self.words.len()
    }

    fn component(&self, copy: usize, word_index: usize) -> usize {
        debug_assert!((2..=self.d).contains(&copy));
        1 + (copy - 2) * self.words.len() + word_index
    }

    /// The fixed unit vector ξ.
    pub fn fixed_vector(&self) -> DVector<Complex64> {
        let mut v = DVector::zeros(self.dim());
        v[0] = Complex64::new(1.0, 0.0);
        v
    }

    /// ξ_i = S_i ξ: the vacuum of the i-th word component, `2 ≤ i ≤ d`.
    pub fn copy_vacuum(&self, copy: usize) -> DVector<Complex64> {
        let mut v = DVector::zeros(self.dim());
        v[self.component(copy, 0)] = Complex64::new(1.0, 0.0);
        v
    }

    /// Apply the creation operator of one letter.
    pub fn apply_letter(&self, letter: u8, v: &DVector<Complex64>) -> DVector<Complex64> {
        assert!((1..=self.d as u8).contains(&letter));
        let mut out = DVector::zeros(self.dim());
        // the fixed line: S_1 ξ = ξ, S_i ξ = ξ_i
        if letter == 1 {
            out[0] += v[0];
        } else {
            out[self.component(letter as usize, 0)] += v[0];
        }
        // left creation on each word component, zero past the depth
        for copy in 2..=self.d {
            for widx in 0..self.words.len() {
                let src = self.component(copy, widx);
                if v[src] == Complex64::new(0.0, 0.0) {
                    continue;
                }
                if let Some(dst) = self.prepend[widx][(letter - 1) as usize] {
                    out[self.component(copy, dst)] += v[src];
                }
            }
        }
        out
    }

    /// Apply `S_w = S_{w_1} ⋯ S_{w_k}` (rightmost letter acts first).
    pub fn apply_word(&self, word: &[u8], v: &DVector<Complex64>) -> DVector<Complex64> {
        let mut out = v.clone();
        for &letter in word.iter().rev() {
            out = self.apply_letter(letter, &out);
        }
        out
    }

    /// `⟨S_w ξ, ξ⟩`.
    pub fn moment(&self, word: &[u8]) -> Complex64 {
        self.apply_word(word, &self.fixed_vector())[0]
    }

    /// `⟨S_w ξ_i, ξ_i⟩`.
    pub fn wandering_value(&self, copy: usize, word: &[u8]) -> Complex64 {
        let v = self.apply_word(word, &self.copy_vacuum(copy));
        v[self.component(copy, 0)]
    }
}

/// The moment the fixed-vector state should produce: 1 on runs of the
/// first letter (including the empty word), 0 otherwise.
pub fn expected_moment(word: &[u8]) -> f64 {
    if word.iter().all(|&l| l == 1) {
        1.0
    } else {
        0.0
    }
}

/// One word moment.
#[derive(Clone, Debug, PartialEq)]
pub struct WordMoment {
    pub word: Vec<u8>,
    pub value: Complex64,
}

/// All moments up to the depth plus the wandering-vector report.
#[derive(Clone, Debug)]
pub struct FockReport {
    pub d: usize,
    pub depth: usize,
    pub moments: Vec<WordMoment>,
    /// Largest `|⟨S_w ξ_i, ξ_i⟩|` over nonempty words of length
    /// `≤ depth − 2` and all copies `i`.
    pub wandering_max_abs: f64,
    pub wandering_checked: usize,
}

/// Compute every word moment `⟨S_w ξ, ξ⟩` for `|w| ≤ depth` and check
/// the wandering property of the `ξ_i`.
pub fn fock_moments(d: usize, depth: usize) -> Result<FockReport> {
    let fock = TruncatedFock::new(d, depth)?;
    let moments = words_up_to(d, depth)
        .into_iter()
        .map(|word| {
            let value = fock.moment(&word);
            WordMoment { word, value }
        })
        .collect();

    let mut wandering_max_abs: f64 = 0.0;
    let mut wandering_checked = 0;
    let wander_len = depth.saturating_sub(2);
    for word in words_up_to(d, wander_len) {
        if word.is_empty() {
            continue;
        }
        for copy in 2..=d {
            wandering_max_abs = wandering_max_abs.max(fock.wandering_value(copy, &word).norm());
            wandering_checked += 1;
        }
    }
    Ok(FockReport {
        d,
        depth,
        moments,
        wandering_max_abs,
        wandering_checked,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn word_enumeration_counts() {
        let words = words_up_to(2, 3);
        assert_eq!(words.len(), 1 + 2 + 4 + 8);
        assert_eq!(words[0], Vec::<u8>::new());
        assert_eq!(words[1], vec![1]);
        assert_eq!(words[2], vec![2]);
    }

    #[test]
    fn model_dimension() {
        let fock = TruncatedFock::new(2, 6).unwrap();
        assert_eq!(fock.dim(), 128);
        assert!(TruncatedFock::new(1, 3).is_err());
        assert!(TruncatedFock::new(2, 0).is_err());
    }

    #[test]
    fn moments_match_ones_run_pattern() {
        let report = fock_moments(2, 6).unwrap();
        assert_eq!(report.moments.len(), 127);
        for m in &report.moments {
            let expected = expected_moment(&m.word);
            assert_eq!(
                m.value,
                Complex64::new(expected, 0.0),
                "word {:?}",
                m.word
            );
        }
        assert_eq!(report.wandering_max_abs, 0.0);
        // nonempty words of length ≤ 4 over two letters, one copy
        assert_eq!(report.wandering_checked, 2 + 4 + 8 + 16);
    }

    #[test]
    fn moments_three_letters() {
        let report = fock_moments(3, 4).unwrap();
        for m in &report.moments {
            assert_eq!(m.value, Complex64::new(expected_moment(&m.word), 0.0));
        }
        assert_eq!(report.wandering_max_abs, 0.0);
    }

    #[test]
    fn creation_isometry_on_interior() {
        // ⟨S_i u, S_j v⟩ = δ_ij ⟨u, v⟩ for vectors supported on word
        // length ≤ depth − 1
        let fock = TruncatedFock::new(2, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let interior_vector = |rng: &mut ChaCha8Rng| {
            let mut v = DVector::<Complex64>::zeros(fock.dim());
            v[0] = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            for (widx, word) in fock.words.iter().enumerate() {
                if word.len() <= fock.depth() - 1 {
                    v[fock.component(2, widx)] =
                        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                }
            }
            v
        };
        for _ in 0..5 {
            let u = interior_vector(&mut rng);
            let v = interior_vector(&mut rng);
            let base = crate::linalg::inner(&u, &v);
            for i in 1..=2u8 {
                for j in 1..=2u8 {
                    let siu = fock.apply_letter(i, &u);
                    let sjv = fock.apply_letter(j, &v);
                    let got = crate::linalg::inner(&siu, &sjv);
                    let expected = if i == j {
                        base
                    } else {
                        Complex64::new(0.0, 0.0)
                    };
                    assert!((got - expected).norm() < 1e-12, "i={i} j={j}");
                }
            }
        }
    }

    #[test]
    fn truncation_boundary_zero_pads() {
        let fock = TruncatedFock::new(2, 2).unwrap();
        // a full-depth word component is annihilated by another letter
        let deep = fock.words.iter().position(|w| w.len() == 2).unwrap();
        let mut v = DVector::<Complex64>::zeros(fock.dim());
        v[fock.component(2, deep)] = Complex64::new(1.0, 0.0);
        let out = fock.apply_letter(1, &v);
        assert!(out.iter().all(|e| *e == Complex64::new(0.0, 0.0)));
    }
}
