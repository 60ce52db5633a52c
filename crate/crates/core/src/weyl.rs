//! The Weyl group, enumerated as the orbit of the Weyl vector.
//!
//! An element `w` is identified by `w(rho)`; since `rho` is regular dominant the
//! action on it is faithful. Enumeration is breadth-first from the identity,
//! multiplying by simple reflections on the left, so BFS depth equals length.
//! A stored word `[j1, ..., jl]` denotes `s_{j1} s_{j2} ... s_{jl}`, which acts on a
//! weight by applying `s_{jl}` first.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::rootdata::{RootDatum, Weight};

pub const DEFAULT_ELEMENT_CAP: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeylElt {
    key: Weight,
    word: Vec<usize>,
}

impl WeylElt {
    /// The canonical key `w(rho)`.
    pub fn key(&self) -> &Weight {
        &self.key
    }

    /// One reduced word (0-based simple indices).
    pub fn word(&self) -> &[usize] {
        &self.word
    }

    pub fn length(&self) -> usize {
        self.word.len()
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_empty()
    }

    /// `(-1)^length`.
    pub fn sign(&self) -> i64 {
        if self.word.len() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Simple indices `j` with `l(s_j w) < l(w)`, i.e. `<w(rho), alpha_j^vee> < 0`.
    pub fn left_descents(&self) -> impl Iterator<Item = usize> + '_ {
        self.key.coords().iter().enumerate().filter(|(_, &c)| c < 0).map(|(j, _)| j)
    }
}

#[derive(Clone, Debug)]
pub struct WeylGroup {
    datum: RootDatum,
    elements: Vec<WeylElt>,
    index: HashMap<Weight, usize>,
}

impl WeylGroup {
    pub fn enumerate(datum: &RootDatum) -> Result<Self> {
        Self::enumerate_with_cap(datum, DEFAULT_ELEMENT_CAP)
    }

    pub fn enumerate_with_cap(datum: &RootDatum, cap: usize) -> Result<Self> {
        let identity = WeylElt { key: datum.weyl_vector().clone(), word: Vec::new() };
        let mut index = HashMap::new();
        index.insert(identity.key.clone(), 0);
        let mut elements = vec![identity];
        let mut queue = VecDeque::from([0usize]);
        while let Some(at) = queue.pop_front() {
            for j in 0..datum.rank() {
                let current = &elements[at];
                // only ascents produce new elements one level down
                if current.key.coords()[j] <= 0 {
                    continue;
                }
                let key = datum.reflect_unchecked(j, &current.key);
                if index.contains_key(&key) {
                    continue;
                }
                if elements.len() >= cap {
                    return Err(Error::SafetyBoundExceeded(cap));
                }
                let mut word = Vec::with_capacity(current.word.len() + 1);
                word.push(j);
                word.extend_from_slice(&current.word);
                index.insert(key.clone(), elements.len());
                queue.push_back(elements.len());
                elements.push(WeylElt { key, word });
            }
        }
        Ok(WeylGroup { datum: datum.clone(), elements, index })
    }

    pub fn datum(&self) -> &RootDatum {
        &self.datum
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Elements in BFS order (non-decreasing length, identity first).
    pub fn elements(&self) -> &[WeylElt] {
        &self.elements
    }

    pub fn identity(&self) -> &WeylElt {
        &self.elements[0]
    }

    /// The unique element of maximal length.
    pub fn longest(&self) -> &WeylElt {
        self.elements.last().expect("group is never empty")
    }

    pub fn by_key(&self, key: &Weight) -> Option<&WeylElt> {
        self.index.get(key).map(|&i| &self.elements[i])
    }

    pub fn position(&self, w: &WeylElt) -> usize {
        self.index[&w.key]
    }

    pub fn simple_reflection(&self, j: usize) -> Result<&WeylElt> {
        self.datum.check_index(j)?;
        Ok(self.by_key(&self.datum.reflect_unchecked(j, self.datum.weyl_vector())).unwrap())
    }

    /// Applies `s_{j1} ... s_{jl}` to `lambda`, rightmost reflection first.
    pub fn act_word(&self, word: &[usize], lambda: &Weight) -> Weight {
        word.iter()
            .rev()
            .fold(lambda.clone(), |acc, &j| self.datum.reflect_unchecked(j, &acc))
    }

    pub fn act(&self, w: &WeylElt, lambda: &Weight) -> Weight {
        self.act_word(&w.word, lambda)
    }

    /// The element represented by an arbitrary (not necessarily reduced) word.
    pub fn from_word(&self, word: &[usize]) -> Result<&WeylElt> {
        for &j in word {
            self.datum.check_index(j)?;
        }
        let key = self.act_word(word, self.datum.weyl_vector());
        Ok(self.by_key(&key).expect("orbit of rho is closed"))
    }

    pub fn multiply(&self, a: &WeylElt, b: &WeylElt) -> &WeylElt {
        self.by_key(&self.act(a, &b.key)).expect("orbit of rho is closed")
    }

    pub fn inverse(&self, w: &WeylElt) -> &WeylElt {
        let rev: Vec<usize> = w.word.iter().rev().copied().collect();
        self.from_word(&rev).expect("indices already validated")
    }

    /// Every reduced word of `w`, in lexicographic order.
    ///
    /// Walks the predecessor DAG: each left descent `j` of `w` contributes
    /// `[j] ++ v` for every reduced word `v` of `s_j w`.
    pub fn all_reduced_words(&self, w: &WeylElt) -> Vec<Vec<usize>> {
        let mut memo: HashMap<Weight, BTreeSet<Vec<usize>>> = HashMap::new();
        self.words_rec(&w.key, &mut memo).iter().cloned().collect()
    }

    fn words_rec<'a>(
        &self,
        key: &Weight,
        memo: &'a mut HashMap<Weight, BTreeSet<Vec<usize>>>,
    ) -> &'a BTreeSet<Vec<usize>> {
        if !memo.contains_key(key) {
            let descents: Vec<usize> =
                key.coords().iter().enumerate().filter(|(_, &c)| c < 0).map(|(j, _)| j).collect();
            let mut words = BTreeSet::new();
            if descents.is_empty() {
                words.insert(Vec::new());
            }
            for j in descents {
                let below = self.datum.reflect_unchecked(j, key);
                for tail in self.words_rec(&below, memo).clone() {
                    let mut word = Vec::with_capacity(tail.len() + 1);
                    word.push(j);
                    word.extend(tail);
                    words.insert(word);
                }
            }
            memo.insert(key.clone(), words);
        }
        &memo[key]
    }

    /// The W-orbit of a weight, sorted.
    pub fn orbit(&self, lambda: &Weight) -> BTreeSet<Weight> {
        let mut seen = BTreeSet::from([lambda.clone()]);
        let mut stack = vec![lambda.clone()];
        while let Some(mu) = stack.pop() {
            for j in 0..self.datum.rank() {
                let image = self.datum.reflect_unchecked(j, &mu);
                if seen.insert(image.clone()) {
                    stack.push(image);
                }
            }
        }
        seen
    }

    /// The dominant representative of the orbit of `lambda`.
    pub fn dominant_conjugate(&self, lambda: &Weight) -> Weight {
        self.dominant_with_word(lambda).0
    }

    /// `(mu, word)` with `mu` dominant and `lambda = s_{word[0]} ... s_{word[k-1]} (mu)`;
    /// the word is reduced and of minimal length among such words.
    pub fn dominant_with_word(&self, lambda: &Weight) -> (Weight, Vec<usize>) {
        let mut mu = lambda.clone();
        let mut word = Vec::new();
        while let Some(j) = mu.coords().iter().position(|&c| c < 0) {
            mu = self.datum.reflect_unchecked(j, &mu);
            word.push(j);
        }
        (mu, word)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group(name: &str) -> WeylGroup {
        WeylGroup::enumerate(&RootDatum::named(name).unwrap()).unwrap()
    }

    #[test]
    fn orders_and_longest_lengths() {
        for (name, order, longest) in [
            ("A1", 2, 1),
            ("A2", 6, 3),
            ("A3", 24, 6),
            ("B2", 8, 4),
            ("B3", 48, 9),
            ("C3", 48, 9),
            ("D4", 192, 12),
            ("G2", 12, 6),
        ] {
            let w = group(name);
            assert_eq!(w.order(), order, "{name}");
            assert_eq!(w.longest().length(), longest, "{name}");
            assert_eq!(w.elements().iter().filter(|e| e.length() == longest).count(), 1);
            assert_eq!(longest, w.datum().longest_length());
        }
    }

    #[test]
    fn a2_longest_word_and_action() {
        let w = group("A2");
        assert_eq!(w.longest().word(), &[0, 1, 0]);
        assert_eq!(w.act(w.longest(), &Weight::new(vec![1, 0])), Weight::new(vec![0, -1]));
        assert_eq!(w.longest().sign(), -1);
    }

    #[test]
    fn a1_action() {
        let w = group("A1");
        let s = w.simple_reflection(0).unwrap();
        assert_eq!(w.act(s, &Weight::new(vec![3])), Weight::new(vec![-3]));
        assert_eq!(w.act(w.identity(), &Weight::new(vec![3])), Weight::new(vec![3]));
        assert_eq!(s.sign(), -1);
        assert_eq!(w.identity().sign(), 1);
    }

    #[test]
    fn reduced_words() {
        let a2 = group("A2");
        assert_eq!(a2.all_reduced_words(a2.identity()), vec![Vec::<usize>::new()]);
        assert_eq!(a2.all_reduced_words(a2.longest()), vec![vec![0, 1, 0], vec![1, 0, 1]]);
        let b2 = group("B2");
        assert_eq!(b2.all_reduced_words(b2.longest()), vec![vec![0, 1, 0, 1], vec![1, 0, 1, 0]]);
        let a3 = group("A3");
        assert_eq!(a3.all_reduced_words(a3.longest()).len(), 16);
    }

    #[test]
    fn group_structure() {
        let g2 = group("G2");
        for a in g2.elements() {
            let inv = g2.inverse(a);
            assert!(g2.multiply(a, inv).is_identity());
            assert_eq!(inv.length(), a.length());
        }
        let w0 = g2.longest();
        assert!(g2.multiply(w0, w0).is_identity());
    }

    #[test]
    fn element_cap() {
        let d = RootDatum::named("B3").unwrap();
        assert_eq!(WeylGroup::enumerate_with_cap(&d, 10).unwrap_err(), Error::SafetyBoundExceeded(10));
    }

    #[test]
    fn dominant_conjugate_lands_in_orbit() {
        let b2 = group("B2");
        let lambda = Weight::new(vec![-3, 1]);
        let dom = b2.dominant_conjugate(&lambda);
        assert!(dom.is_dominant());
        assert!(b2.orbit(&lambda).contains(&dom));
    }
}
