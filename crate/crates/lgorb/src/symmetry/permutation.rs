//! Permutations of coordinates in cycle notation, and finite permutation
//! groups with conjugacy classes, subgroup enumeration, and the
//! parity-of-orbits check used to gate E-function computations.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use crate::error::{LgError, Result};

/// A permutation of `{0, .., n-1}`, stored as the image list: `images[i]`
/// is where index `i` is sent.  Text form is 1-based cycle notation, e.g.
/// `"(1 3)(2 4)"`; the identity prints as `"1"`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation { images: (0..n).collect() }
    }

    /// Builds a permutation from its image list, validating bijectivity.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &img in &images {
            if img >= n || seen[img] {
                return Err(LgError::Parse(format!(
                    "image list {images:?} is not a permutation of 0..{n}"
                )));
            }
            seen[img] = true;
        }
        Ok(Permutation { images })
    }

    /// Parses 1-based cycle notation over `n` points: `"(1 3)(2 4)"`.
    /// `"1"`, `"id"`, and `"()"` all denote the identity.
    pub fn parse(text: &str, n: usize) -> Result<Self> {
        let trimmed = text.trim();
        if trimmed == "1" || trimmed == "id" || trimmed == "()" {
            return Ok(Self::identity(n));
        }
        let mut images: Vec<usize> = (0..n).collect();
        let mut used = vec![false; n];
        let bytes = trimmed.as_bytes();
        let mut pos = 0usize;
        while pos < bytes.len() {
            if bytes[pos].is_ascii_whitespace() {
                pos += 1;
                continue;
            }
            if bytes[pos] != b'(' {
                return Err(LgError::Parse(format!(
                    "expected '(' at byte {pos} of permutation {trimmed:?}"
                )));
            }
            pos += 1;
            let mut cycle: Vec<usize> = Vec::new();
            loop {
                while pos < bytes.len()
                    && (bytes[pos].is_ascii_whitespace() || bytes[pos] == b',')
                {
                    pos += 1;
                }
                if pos >= bytes.len() {
                    return Err(LgError::Parse(format!(
                        "unterminated cycle in permutation {trimmed:?}"
                    )));
                }
                if bytes[pos] == b')' {
                    pos += 1;
                    break;
                }
                let start = pos;
                while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                    pos += 1;
                }
                if pos == start {
                    return Err(LgError::Parse(format!(
                        "expected index at byte {start} of permutation {trimmed:?}"
                    )));
                }
                let value: usize = trimmed[start..pos].parse().map_err(|_| {
                    LgError::Parse(format!(
                        "invalid index {:?} in permutation {trimmed:?}",
                        &trimmed[start..pos]
                    ))
                })?;
                if value == 0 || value > n {
                    return Err(LgError::Parse(format!(
                        "index {value} out of range 1..={n} in permutation {trimmed:?}"
                    )));
                }
                let idx = value - 1;
                if used[idx] {
                    return Err(LgError::Parse(format!(
                        "index {value} repeated in permutation {trimmed:?}"
                    )));
                }
                used[idx] = true;
                cycle.push(idx);
            }
            if cycle.len() == 1 {
                return Err(LgError::Parse(format!(
                    "singleton cycle in permutation {trimmed:?}; fixed points are implicit"
                )));
            }
            for k in 0..cycle.len() {
                images[cycle[k]] = cycle[(k + 1) % cycle.len()];
            }
        }
        Self::from_images(images)
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// Where index `i` is sent.
    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &img)| i == img)
    }

    /// `self ∘ other`: apply `other` first, then `self`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.n(), other.n());
        Permutation {
            images: (0..self.n()).map(|i| self.images[other.images[i]]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0usize; self.n()];
        for (i, &img) in self.images.iter().enumerate() {
            images[img] = i;
        }
        Permutation { images }
    }

    /// Nontrivial cycles, each rotated to start at its smallest index and
    /// listed in order of smallest index.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n()];
        let mut cycles = Vec::new();
        for start in 0..self.n() {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut cur = self.images[start];
            while cur != start {
                seen[cur] = true;
                cycle.push(cur);
                cur = self.images[cur];
            }
            if cycle.len() > 1 {
                cycles.push(cycle);
            }
        }
        cycles
    }

    /// All cycles including fixed points, for orbit bookkeeping.
    pub fn all_cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n()];
        let mut cycles = Vec::new();
        for start in 0..self.n() {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut cur = self.images[start];
            while cur != start {
                seen[cur] = true;
                cycle.push(cur);
                cur = self.images[cur];
            }
            cycles.push(cycle);
        }
        cycles
    }

    pub fn order(&self) -> u64 {
        let mut ord = 1u64;
        for cycle in self.cycles() {
            ord = crate::arith::lcm_u64(ord, cycle.len() as u64);
        }
        ord
    }

    /// Sign of the permutation: `true` for even.
    pub fn is_even(&self) -> bool {
        self.cycles().iter().map(|c| c.len() - 1).sum::<usize>() % 2 == 0
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "1");
        }
        for cycle in cycles {
            write!(f, "(")?;
            for (k, idx) in cycle.iter().enumerate() {
                if k > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", idx + 1)?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// Enumerates all permutations of `{0, .., n-1}` in lexicographic order of
/// image lists.  Intended for the brute-force search of coordinate
/// symmetries of small polynomials.
pub fn all_permutations(n: usize) -> Vec<Permutation> {
    fn rec(prefix: &mut Vec<usize>, free: &mut Vec<bool>, out: &mut Vec<Permutation>) {
        let n = free.len();
        if prefix.len() == n {
            out.push(Permutation { images: prefix.clone() });
            return;
        }
        for i in 0..n {
            if free[i] {
                free[i] = false;
                prefix.push(i);
                rec(prefix, free, out);
                prefix.pop();
                free[i] = true;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![true; n], &mut out);
    out
}

/// A finite group of permutations of `{0, .., n-1}`, stored with its full
/// sorted element list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermGroup {
    n: usize,
    generators: Vec<Permutation>,
    elements: Vec<Permutation>,
}

impl PermGroup {
    pub fn trivial(n: usize) -> Self {
        PermGroup {
            n,
            generators: Vec::new(),
            elements: vec![Permutation::identity(n)],
        }
    }

    /// The closure of the given generators.
    pub fn closure(n: usize, generators: Vec<Permutation>) -> Self {
        for g in &generators {
            assert_eq!(g.n(), n, "generator acts on the wrong number of points");
        }
        let mut set: BTreeSet<Permutation> = BTreeSet::new();
        let mut queue: VecDeque<Permutation> = VecDeque::new();
        let id = Permutation::identity(n);
        set.insert(id.clone());
        queue.push_back(id);
        while let Some(cur) = queue.pop_front() {
            for g in &generators {
                let next = g.compose(&cur);
                if set.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
        }
        PermGroup {
            n,
            generators,
            elements: set.into_iter().collect(),
        }
    }

    /// Group from a known-closed element list (asserted closed).
    pub fn from_elements(n: usize, mut elements: Vec<Permutation>) -> Self {
        elements.sort();
        elements.dedup();
        let set: BTreeSet<&Permutation> = elements.iter().collect();
        for a in &elements {
            for b in &elements {
                assert!(set.contains(&a.compose(b)), "element list is not closed");
            }
        }
        PermGroup {
            n,
            generators: elements.clone(),
            elements,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.elements.binary_search(p).is_ok()
    }

    /// Conjugacy classes, each sorted, ordered by their smallest member.
    pub fn conjugacy_classes(&self) -> Vec<Vec<Permutation>> {
        let mut assigned: BTreeSet<Permutation> = BTreeSet::new();
        let mut classes = Vec::new();
        for rep in &self.elements {
            if assigned.contains(rep) {
                continue;
            }
            let mut class: BTreeSet<Permutation> = BTreeSet::new();
            for h in &self.elements {
                class.insert(h.compose(rep).compose(&h.inverse()));
            }
            for member in &class {
                assigned.insert(member.clone());
            }
            classes.push(class.into_iter().collect());
        }
        classes
    }

    /// Every subgroup, found by closing subsets one generator at a time
    /// starting from the trivial group.  Ordered by (order, element list).
    pub fn subgroups(&self) -> Vec<PermGroup> {
        let mut known: BTreeMap<Vec<Permutation>, Vec<Permutation>> = BTreeMap::new();
        let trivial = vec![Permutation::identity(self.n)];
        known.insert(trivial.clone(), Vec::new());
        let mut frontier = vec![trivial];
        while let Some(base) = frontier.pop() {
            for g in &self.elements {
                if base.binary_search(g).is_ok() {
                    continue;
                }
                let mut gens: Vec<Permutation> = known[&base].clone();
                gens.push(g.clone());
                let bigger = PermGroup::closure(self.n, gens.clone());
                if !known.contains_key(&bigger.elements) {
                    known.insert(bigger.elements.clone(), gens);
                    frontier.push(bigger.elements);
                }
            }
        }
        let mut out: Vec<PermGroup> = known
            .into_iter()
            .map(|(elements, generators)| PermGroup {
                n: self.n,
                generators,
                elements,
            })
            .collect();
        out.sort_by(|a, b| {
            (a.order(), &a.elements).cmp(&(b.order(), &b.elements))
        });
        out
    }

    /// Number of orbits of the group on `{0, .., n-1}`.
    pub fn orbit_count(&self) -> usize {
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(parent: &mut Vec<usize>, mut i: usize) -> usize {
            while parent[i] != i {
                parent[i] = parent[parent[i]];
                i = parent[i];
            }
            i
        }
        for g in &self.elements {
            for i in 0..self.n {
                let (a, b) = (find(&mut parent, i), find(&mut parent, g.apply(i)));
                if a != b {
                    parent[a] = b;
                }
            }
        }
        (0..self.n)
            .filter(|&i| find(&mut parent, i) == i)
            .count()
    }

    /// Parity condition: every subgroup must have an orbit count congruent
    /// to `n` mod 2.  Returns `(true, None)` when satisfied, otherwise
    /// `(false, Some(violating subgroup))` with the smallest violator.
    pub fn pc_check(&self) -> (bool, Option<PermGroup>) {
        for sub in self.subgroups() {
            if sub.orbit_count() % 2 != self.n % 2 {
                return (false, Some(sub));
            }
        }
        (true, None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display_round_trip() {
        let p = Permutation::parse("(1 3)(2 4)", 4).unwrap();
        assert_eq!(p.images(), &[2, 3, 0, 1]);
        assert_eq!(p.to_string(), "(1 3)(2 4)");
        assert_eq!(Permutation::parse("1", 4).unwrap(), Permutation::identity(4));
        assert_eq!(Permutation::identity(3).to_string(), "1");
        let q = Permutation::parse("(2 3 1)", 3).unwrap();
        assert_eq!(q.to_string(), "(1 2 3)");
        assert_eq!(q.images(), &[1, 2, 0]);
    }

    #[test]
    fn parse_rejects_bad_input() {
        assert!(Permutation::parse("(1 5)", 4).is_err());
        assert!(Permutation::parse("(1 1)", 4).is_err());
        assert!(Permutation::parse("(1 2)(2 3)", 4).is_err());
        assert!(Permutation::parse("(1)", 4).is_err());
        assert!(Permutation::parse("(1 2", 4).is_err());
    }

    #[test]
    fn composition_follows_right_to_left_convention() {
        // (1 2) then (2 3): 1 -> 2 -> 3, so the product (2 3)(1 2) = (1 3 2)
        // as functions applied right to left.
        let a = Permutation::parse("(2 3)", 3).unwrap();
        let b = Permutation::parse("(1 2)", 3).unwrap();
        let ab = a.compose(&b);
        assert_eq!(ab, Permutation::parse("(1 3 2)", 3).unwrap());
        assert_eq!(ab.compose(&ab.inverse()), Permutation::identity(3));
    }

    #[test]
    fn order_and_parity() {
        let p = Permutation::parse("(1 2 3)(4 5)", 5).unwrap();
        assert_eq!(p.order(), 6);
        assert!(!p.is_even());
        assert!(Permutation::parse("(1 2 3)", 3).unwrap().is_even());
    }

    #[test]
    fn symmetric_group_closure_and_classes() {
        let s3 = PermGroup::closure(
            3,
            vec![
                Permutation::parse("(1 2)", 3).unwrap(),
                Permutation::parse("(1 2 3)", 3).unwrap(),
            ],
        );
        assert_eq!(s3.order(), 6);
        let classes = s3.conjugacy_classes();
        let sizes: Vec<usize> = classes.iter().map(|c| c.len()).collect();
        assert_eq!(sizes, vec![1, 3, 2]);
    }

    #[test]
    fn subgroup_lattice_of_s3() {
        let s3 = PermGroup::closure(
            3,
            vec![
                Permutation::parse("(1 2)", 3).unwrap(),
                Permutation::parse("(1 2 3)", 3).unwrap(),
            ],
        );
        let subs = s3.subgroups();
        let orders: Vec<usize> = subs.iter().map(|g| g.order()).collect();
        assert_eq!(orders, vec![1, 2, 2, 2, 3, 6]);
    }

    #[test]
    fn parity_check_flags_transposition_subgroup() {
        let s3 = PermGroup::closure(
            3,
            vec![
                Permutation::parse("(1 2)", 3).unwrap(),
                Permutation::parse("(1 2 3)", 3).unwrap(),
            ],
        );
        let (ok, witness) = s3.pc_check();
        assert!(!ok);
        let witness = witness.unwrap();
        assert_eq!(witness.order(), 2);
        assert_eq!(witness.orbit_count(), 2);

        // The double transposition on 4 points has 2 orbits on 4 points and
        // every subgroup of the cyclic group it generates behaves likewise.
        let z2 = PermGroup::closure(4, vec![Permutation::parse("(1 3)(2 4)", 4).unwrap()]);
        let (ok, witness) = z2.pc_check();
        assert!(ok);
        assert!(witness.is_none());
    }

    #[test]
    fn all_permutations_of_three_points() {
        let all = all_permutations(3);
        assert_eq!(all.len(), 6);
        let closure = PermGroup::from_elements(3, all);
        assert_eq!(closure.order(), 6);
    }
}
