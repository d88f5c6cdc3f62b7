use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::automaton::MaxPlusAutomaton;
use crate::error::{Error, Result};
use crate::semigroup::{Element, PathElement};
use crate::semiring::BarValue;
use crate::word::{RleWord, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NodeKind {
    Leaf,
    Product,
    Idempotent,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Node {
    /// Half-open range of leaf positions `[start, end)`.
    pub span: (usize, usize),
    pub alpha: PathElement,
    pub kind: NodeKind,
    pub children: Vec<usize>,
    pub parent: Option<usize>,
    pub contributors: BTreeSet<(usize, usize)>,
}

/// A factorisation tree over the leaves `α_w(w₁) … α_w(w_k)`, stored as an
/// arena; node ids are indices.
#[derive(Clone, Debug)]
pub struct FactTree {
    pub(crate) nodes: Vec<Node>,
    pub(crate) root: usize,
    pub(crate) word: Word,
    /// `p₀ … p_k`, the run of `A` on the word.
    pub(crate) run: Vec<usize>,
}

/// Leaf labels along the unique run of a deterministic `A` from its initial
/// state, and that run. Fails if the word is empty or rejected.
pub fn leaf_labels(
    w: &Word,
    a: &MaxPlusAutomaton,
    b: &MaxPlusAutomaton,
) -> Result<(Vec<PathElement>, Vec<usize>)> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    let run = a.accepting_run(w)?.ok_or(Error::WordRejected)?;
    let labels = w
        .letters()
        .iter()
        .enumerate()
        .map(|(i, &l)| {
            let (p, q) = (run.states[i], run.states[i + 1]);
            crate::semigroup::generator_element(a, b, l, p, q).expect("transition on the run")
        })
        .collect();
    Ok((labels, run.states))
}

/// Assembles a tree bottom-up. Used by the construction and for hand-built
/// trees in tests; [`TreeBuilder::finish`] checks the label laws.
#[derive(Clone, Debug)]
pub struct TreeBuilder {
    nodes: Vec<Node>,
    word: Word,
    run: Vec<usize>,
}

impl TreeBuilder {
    pub fn new(w: &Word, a: &MaxPlusAutomaton, b: &MaxPlusAutomaton) -> Result<Self> {
        let (labels, run) = leaf_labels(w, a, b)?;
        let nodes = labels
            .into_iter()
            .enumerate()
            .map(|(i, alpha)| Node {
                span: (i, i + 1),
                alpha,
                kind: NodeKind::Leaf,
                children: Vec::new(),
                parent: None,
                contributors: BTreeSet::new(),
            })
            .collect();
        Ok(TreeBuilder {
            nodes,
            word: w.clone(),
            run,
        })
    }

    /// Node id of the `i`-th leaf.
    pub fn leaf(&self, i: usize) -> usize {
        i
    }

    pub fn alpha(&self, id: usize) -> &PathElement {
        &self.nodes[id].alpha
    }

    pub fn product(&mut self, left: usize, right: usize) -> usize {
        let alpha = self.nodes[left].alpha.mul(&self.nodes[right].alpha);
        self.push(NodeKind::Product, vec![left, right], alpha)
    }

    /// An idempotent node; the label laws are checked by [`TreeBuilder::finish`].
    pub fn idempotent(&mut self, children: Vec<usize>) -> usize {
        let alpha = self.nodes[children[0]].alpha.clone();
        self.push(NodeKind::Idempotent, children, alpha)
    }

    /// Combines `ids` into one node: itself, a product, or an idempotent node.
    pub fn combine(&mut self, ids: &[usize]) -> usize {
        match ids.len() {
            0 => panic!("nothing to combine"),
            1 => ids[0],
            2 => self.product(ids[0], ids[1]),
            _ => self.idempotent(ids.to_vec()),
        }
    }

    /// Right-nested products of `ids`.
    pub fn chain(&mut self, ids: &[usize]) -> usize {
        let (&last, rest) = ids.split_last().expect("nothing to chain");
        rest.iter().rev().fold(last, |acc, &id| self.product(id, acc))
    }

    fn push(&mut self, kind: NodeKind, children: Vec<usize>, alpha: PathElement) -> usize {
        let id = self.nodes.len();
        let span = (
            self.nodes[children[0]].span.0,
            self.nodes[*children.last().unwrap()].span.1,
        );
        for &c in &children {
            self.nodes[c].parent = Some(id);
        }
        self.nodes.push(Node {
            span,
            alpha,
            kind,
            children,
            parent: None,
            contributors: BTreeSet::new(),
        });
        id
    }

    pub fn finish(self, root: usize) -> Result<FactTree> {
        let tree = FactTree {
            nodes: self.nodes,
            root,
            word: self.word,
            run: self.run,
        };
        tree.validate().map_err(Error::InvalidAutomaton)?;
        Ok(tree)
    }
}

impl FactTree {
    pub fn root(&self) -> usize {
        self.root
    }

    pub fn node(&self, id: usize) -> &Node {
        &self.nodes[id]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn run(&self) -> &[usize] {
        &self.run
    }

    /// Node ids reachable from the root, in pre-order.
    pub fn preorder(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![self.root];
        while let Some(v) = stack.pop() {
            out.push(v);
            stack.extend(self.nodes[v].children.iter().rev());
        }
        out
    }

    pub fn node_height(&self, id: usize) -> usize {
        self.nodes[id]
            .children
            .iter()
            .map(|&c| 1 + self.node_height(c))
            .max()
            .unwrap_or(0)
    }

    pub fn height(&self) -> usize {
        self.node_height(self.root)
    }

    /// Position of `id` among its siblings, and their number.
    pub fn child_position(&self, id: usize) -> Option<(usize, usize)> {
        let parent = self.nodes[id].parent?;
        let siblings = &self.nodes[parent].children;
        Some((siblings.iter().position(|&c| c == id)?, siblings.len()))
    }

    /// Checks the label laws: leaves in order, products of children, and
    /// idempotent nodes with at least three children sharing one idempotent label.
    pub fn validate(&self) -> std::result::Result<(), String> {
        let mut next_leaf = 0;
        for id in self.preorder() {
            let n = &self.nodes[id];
            if n.alpha.is_bot() {
                return Err(format!("node {id} is labelled by bot"));
            }
            match n.kind {
                NodeKind::Leaf => {
                    if !n.children.is_empty() || n.span != (next_leaf, next_leaf + 1) {
                        return Err(format!("leaf {id} is out of order"));
                    }
                    next_leaf += 1;
                }
                NodeKind::Product => {
                    if n.children.len() != 2 {
                        return Err(format!("product node {id} needs two children"));
                    }
                    let (l, r) = (&self.nodes[n.children[0]], &self.nodes[n.children[1]]);
                    if l.alpha.mul(&r.alpha) != n.alpha {
                        return Err(format!("product node {id} is mislabelled"));
                    }
                }
                NodeKind::Idempotent => {
                    if n.children.len() < 3 {
                        return Err(format!("idempotent node {id} needs three children"));
                    }
                    if !n.alpha.is_idempotent() {
                        return Err(format!("idempotent node {id} has a non-idempotent label"));
                    }
                    if n.children.iter().any(|&c| self.nodes[c].alpha != n.alpha) {
                        return Err(format!("idempotent node {id} has a child with another label"));
                    }
                }
            }
            for w in n.children.windows(2) {
                if self.nodes[w[0]].span.1 != self.nodes[w[1]].span.0 {
                    return Err(format!("children of node {id} are not contiguous"));
                }
            }
            if let (Some(first), Some(last)) = (n.children.first(), n.children.last()) {
                if n.span != (self.nodes[*first].span.0, self.nodes[*last].span.1) {
                    return Err(format!("node {id} has a wrong span"));
                }
            }
        }
        if next_leaf != self.word.len() {
            return Err("leaves do not cover the word".into());
        }
        Ok(())
    }

    /// The factor of the word under `id`, compressed for display.
    pub fn factor(&self, id: usize) -> RleWord {
        let (i, j) = self.nodes[id].span;
        compress(&self.word.letters()[i..j])
    }

    /// Graphviz rendering: labels show the factor and the matrix, contributor
    /// entries are bracketed, and faults are drawn in red.
    pub fn to_dot(&self, a: &MaxPlusAutomaton, faults: &[usize]) -> String {
        let mut out = String::from("digraph factorisation {\n  node [shape=box, fontname=monospace];\n");
        for id in self.preorder() {
            let n = &self.nodes[id];
            let Element::Path { weight, matrix, .. } = &n.alpha else {
                continue;
            };
            let mut label = format!("{}\\nx={weight}", self.factor(id).display(a.alphabet()));
            for i in 0..matrix.rows() {
                label.push_str("\\n");
                for j in 0..matrix.cols() {
                    let v = short(*matrix.get(i, j));
                    if n.contributors.contains(&(i, j)) {
                        let _ = write!(label, "[{v}]");
                    } else {
                        let _ = write!(label, " {v} ");
                    }
                }
            }
            let style = if faults.contains(&id) {
                ", color=red, penwidth=2"
            } else if n.kind == NodeKind::Idempotent {
                ", style=rounded"
            } else {
                ""
            };
            let _ = writeln!(out, "  n{id} [label=\"{label}\"{style}];");
            for &c in &n.children {
                let _ = writeln!(out, "  n{id} -> n{c};");
            }
        }
        out.push_str("}\n");
        out
    }

    /// Indented text rendering with the same information as [`FactTree::to_dot`].
    pub fn to_text(&self, a: &MaxPlusAutomaton, faults: &[usize]) -> String {
        let mut out = String::new();
        self.text_rec(self.root, 0, a, faults, &mut out);
        out
    }

    fn text_rec(&self, id: usize, depth: usize, a: &MaxPlusAutomaton, faults: &[usize], out: &mut String) {
        let n = &self.nodes[id];
        let kind = match n.kind {
            NodeKind::Leaf => "leaf",
            NodeKind::Product => "product",
            NodeKind::Idempotent => "idempotent",
        };
        let contributors: Vec<String> = n
            .contributors
            .iter()
            .map(|(i, j)| format!("({},{})", i + 1, j + 1))
            .collect();
        let _ = writeln!(
            out,
            "{}{kind} {}  {}  C={{{}}}{}",
            "  ".repeat(depth),
            self.factor(id).display(a.alphabet()),
            n.alpha.describe(a),
            contributors.join(" "),
            if faults.contains(&id) { "  FAULT" } else { "" }
        );
        for &c in &n.children {
            self.text_rec(c, depth + 1, a, faults, out);
        }
    }
}

fn short(v: BarValue) -> &'static str {
    match v {
        BarValue::NegInf => "-",
        BarValue::Zero => "0",
        BarValue::One => "1",
    }
}

/// Letter runs become powers.
fn compress(letters: &[usize]) -> RleWord {
    let mut parts = Vec::new();
    let mut i = 0;
    while i < letters.len() {
        let mut j = i + 1;
        while j < letters.len() && letters[j] == letters[i] {
            j += 1;
        }
        parts.push(RleWord::power(RleWord::letter(letters[i]), (j - i) as u64));
        i = j;
    }
    RleWord::concat(parts)
}
