//! Simon's factorisation theorem, constructively.
//!
//! The construction descends through the ideal structure: a sequence whose
//! product lies in the J-class `J` is cut into blocks strictly J-above `J`,
//! regrouped into factors inside `J`, and the factors are then split at the
//! recurring `(L, R)` boundary into segments that live in a single H-class,
//! which is a group. Within a group, cutting at the recurrences of the first
//! prefix product leaves segments whose products are the identity.

use crate::automaton::MaxPlusAutomaton;
use crate::error::Result;
use crate::semigroup::{generators, paths_closure, ClosureConfig, PathElement};
use crate::word::Word;

use super::contributors::compute_contributors;
use super::green::GreenStructure;
use super::tree::{FactTree, TreeBuilder};

/// Builds a factorisation tree on `w` over the semigroup of paths of `(A, B)`
/// with contributors filled in. `A` must be deterministic and accept `w`.
pub fn build_tree(w: &Word, a: &MaxPlusAutomaton, b: &MaxPlusAutomaton) -> Result<FactTree> {
    build_tree_with(w, a, b, ClosureConfig::default())
}

pub fn build_tree_with(
    w: &Word,
    a: &MaxPlusAutomaton,
    b: &MaxPlusAutomaton,
    config: ClosureConfig,
) -> Result<FactTree> {
    let mut builder = TreeBuilder::new(w, a, b)?;
    let gens = generators(a, b)?;
    let paths = paths_closure(&gens, config)?;
    let gens: Vec<PathElement> = gens.into_iter().map(|(e, _)| e).collect();
    let green = GreenStructure::new(&paths, &gens);
    let leaves: Vec<usize> = (0..w.len()).map(|i| builder.leaf(i)).collect();
    let root = Simon {
        builder: &mut builder,
        green: &green,
    }
    .tree(&leaves);
    let mut tree = builder.finish(root)?;
    compute_contributors(&mut tree, b);
    Ok(tree)
}

struct Simon<'a> {
    builder: &'a mut TreeBuilder,
    green: &'a GreenStructure,
}

impl Simon<'_> {
    fn value(&self, ids: &[usize]) -> PathElement {
        let mut v = self.builder.alpha(ids[0]).clone();
        for &id in &ids[1..] {
            v = v.mul(self.builder.alpha(id));
        }
        v
    }

    /// All labels equal one idempotent: a single idempotent node will do.
    fn uniform_idempotent(&self, ids: &[usize]) -> bool {
        let e = self.builder.alpha(ids[0]);
        e.is_idempotent() && ids.iter().all(|&id| self.builder.alpha(id) == e)
    }

    /// Any nonempty sequence of nodes.
    fn tree(&mut self, ids: &[usize]) -> usize {
        if ids.len() == 1 {
            return ids[0];
        }
        if let Some(node) = self.periodic(ids) {
            return node;
        }
        let j = self.green.j(&self.value(ids));

        // Maximal blocks strictly above J; a single factor in J stands alone.
        let mut blocks: Vec<(Vec<usize>, bool)> = Vec::new();
        let mut i = 0;
        while i < ids.len() {
            let mut v = self.builder.alpha(ids[i]).clone();
            let mut end = i + 1;
            if self.green.j(&v) != j {
                while end < ids.len() {
                    let next = v.mul(self.builder.alpha(ids[end]));
                    if self.green.j(&next) == j {
                        break;
                    }
                    v = next;
                    end += 1;
                }
            }
            blocks.push((ids[i..end].to_vec(), self.green.j(&v) == j));
            i = end;
        }

        // A block above J times the first factor of its successor falls into
        // J, so pairing each such block with its successor lands in J.
        let mut factors: Vec<usize> = Vec::new();
        let mut pending: Option<usize> = None;
        for (block, in_j) in blocks {
            let node = if in_j { block[0] } else { self.tree(&block) };
            match pending.take() {
                Some(p) => factors.push(self.builder.product(p, node)),
                None if in_j => factors.push(node),
                None => pending = Some(node),
            }
        }
        if let Some(p) = pending {
            let last = factors.pop().expect("the whole sequence lies in J");
            factors.push(self.builder.product(last, p));
        }
        self.regular(&factors)
    }

    /// Shortcut for `u^k v` with `v` a prefix of `u`: when some power `u^m`
    /// is idempotent and occurs at least three times, its copies become the
    /// children of one idempotent node. Only the smallest period is tried.
    fn periodic(&mut self, ids: &[usize]) -> Option<usize> {
        let n = ids.len();
        let same = |s: &Self, i: usize, j: usize| s.builder.alpha(ids[i]) == s.builder.alpha(ids[j]);
        let p = (1..=n / 3).find(|&p| (0..n - p).all(|i| same(self, i, i + p)))?;
        let u = self.value(&ids[..p]);
        let mut power = u.clone();
        let mut m = 1;
        while 3 * m * p <= n {
            if power.is_idempotent() {
                let chunk = m * p;
                let k = n / chunk;
                let copies: Vec<usize> = (0..k).map(|c| self.tree(&ids[c * chunk..(c + 1) * chunk])).collect();
                let idem = self.builder.idempotent(copies);
                let rest = &ids[k * chunk..];
                return Some(if rest.is_empty() {
                    idem
                } else {
                    let r = self.tree(rest);
                    self.builder.product(idem, r)
                });
            }
            power = power.mul(&u);
            m += 1;
        }
        None
    }

    /// Nodes all in one J-class, with their product in that class too.
    fn regular(&mut self, ids: &[usize]) -> usize {
        if ids.len() <= 2 || self.uniform_idempotent(ids) {
            return self.builder.combine(ids);
        }
        let kappa = |s: &Self, t: usize| {
            (
                s.green.l(s.builder.alpha(ids[t])),
                s.green.r(s.builder.alpha(ids[t + 1])),
            )
        };
        let first = kappa(self, 0);
        let mut cuts = vec![0];
        cuts.extend((1..ids.len() - 1).filter(|&t| kappa(self, t) == first));

        // Between consecutive cuts the products lie in the H-class R(d₂) ∩ L(d₁),
        // which holds an idempotent, hence is a group.
        let mut group = Vec::new();
        for w in cuts.windows(2) {
            let segment = &ids[w[0] + 1..=w[1]];
            group.push(self.regular(segment));
        }
        let tail = &ids[cuts.last().unwrap() + 1..];
        let mut parts = vec![ids[0]];
        if !group.is_empty() {
            parts.push(self.group(&group));
        }
        if !tail.is_empty() {
            parts.push(self.regular(tail));
        }
        self.builder.chain(&parts)
    }

    /// Nodes whose labels lie in one group.
    fn group(&mut self, ids: &[usize]) -> usize {
        if ids.len() <= 2 || self.uniform_idempotent(ids) {
            return self.builder.combine(ids);
        }
        let x = self.builder.alpha(ids[0]).clone();
        let mut cuts = vec![0];
        let mut prefix = x.clone();
        for (t, &id) in ids.iter().enumerate().skip(1) {
            prefix = prefix.mul(self.builder.alpha(id));
            if prefix == x {
                cuts.push(t);
            }
        }
        // Each segment between cuts multiplies to the identity of the group,
        // and none of its proper prefixes does.
        let mut units = Vec::new();
        for w in cuts.windows(2) {
            let segment = &ids[w[0] + 1..=w[1]];
            let (&last, init) = segment.split_last().unwrap();
            units.push(if init.is_empty() {
                last
            } else {
                let head = self.group(init);
                self.builder.product(head, last)
            });
        }
        let tail = &ids[cuts.last().unwrap() + 1..];
        let mut parts = vec![ids[0]];
        if !units.is_empty() {
            parts.push(self.builder.combine(&units));
        }
        if !tail.is_empty() {
            parts.push(self.group(tail));
        }
        self.builder.chain(&parts)
    }
}
