use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;
use std::fmt::Write as _;

use super::{Bitstream, ProbabilityModel};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Prefix-free code table indexed by symbol.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeBook {
    codes: Vec<Vec<bool>>,
}

struct Pending<T> {
    weight: T,
    min_symbol: usize,
    node: usize,
}

impl<T: Real> PartialEq for Pending<T> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl<T: Real> Eq for Pending<T> {}

impl<T: Real> PartialOrd for Pending<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: Real> Ord for Pending<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        // Weights are validated finite, so partial_cmp never fails.
        self.weight
            .partial_cmp(&other.weight)
            .unwrap_or(Ordering::Equal)
            .then(self.min_symbol.cmp(&other.min_symbol))
    }
}

enum Node {
    Leaf(usize),
    Internal(usize, usize),
}

/// Builds the Huffman code for `model`.
///
/// The two lightest subtrees are merged first; equal weights go to the
/// subtree holding the smaller symbol id. The lighter subtree becomes the
/// left child and left edges carry bit 0. A one-symbol alphabet gets the
/// code `0`.
pub fn huffman_build<T: Real>(model: &ProbabilityModel<T>) -> Result<CodeBook> {
    let n = model.alphabet_size();
    if n == 0 {
        return Err(Error::EmptyAlphabet);
    }
    if n == 1 {
        return Ok(CodeBook {
            codes: vec![vec![false]],
        });
    }
    let mut nodes: Vec<Node> = (0..n).map(Node::Leaf).collect();
    let mut heap: BinaryHeap<Reverse<Pending<T>>> = model
        .weights()
        .iter()
        .enumerate()
        .map(|(s, &weight)| {
            Reverse(Pending {
                weight,
                min_symbol: s,
                node: s,
            })
        })
        .collect();
    while heap.len() > 1 {
        let Reverse(left) = heap.pop().expect("len > 1");
        let Reverse(right) = heap.pop().expect("len > 1");
        nodes.push(Node::Internal(left.node, right.node));
        heap.push(Reverse(Pending {
            weight: left.weight + right.weight,
            min_symbol: left.min_symbol.min(right.min_symbol),
            node: nodes.len() - 1,
        }));
    }
    let root = heap.pop().expect("one root").0.node;
    let mut codes = vec![Vec::new(); n];
    let mut stack = vec![(root, Vec::new())];
    while let Some((id, prefix)) = stack.pop() {
        match nodes[id] {
            Node::Leaf(s) => codes[s] = prefix,
            Node::Internal(l, r) => {
                let mut right = prefix.clone();
                right.push(true);
                let mut left = prefix;
                left.push(false);
                stack.push((r, right));
                stack.push((l, left));
            }
        }
    }
    Ok(CodeBook { codes })
}

impl CodeBook {
    /// Wraps an explicit code table, rejecting empty or non-prefix-free ones.
    pub fn from_codes(codes: Vec<Vec<bool>>) -> Result<Self> {
        if codes.is_empty() {
            return Err(Error::EmptyAlphabet);
        }
        if let Some(s) = codes.iter().position(|c| c.is_empty()) {
            return Err(Error::param(format!("symbol {s} has an empty codeword")));
        }
        let book = CodeBook { codes };
        if !book.is_prefix_free() {
            return Err(Error::param("code table is not prefix-free"));
        }
        Ok(book)
    }

    pub fn alphabet_size(&self) -> usize {
        self.codes.len()
    }

    pub fn code(&self, symbol: usize) -> &[bool] {
        &self.codes[symbol]
    }

    pub fn code_len(&self, symbol: usize) -> usize {
        self.codes[symbol].len()
    }

    pub fn lengths(&self) -> Vec<usize> {
        self.codes.iter().map(Vec::len).collect()
    }

    pub fn max_len(&self) -> usize {
        self.codes.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// `Σ 2^(-len)`; equal to 1 for a complete code tree.
    pub fn kraft_sum(&self) -> f64 {
        self.codes.iter().map(|c| (-(c.len() as f64)).exp2()).sum()
    }

    pub fn is_prefix_free(&self) -> bool {
        let mut sorted: Vec<&Vec<bool>> = self.codes.iter().collect();
        sorted.sort();
        sorted.windows(2).all(|w| !w[1].starts_with(w[0]))
    }

    /// Total bits needed to encode `sequence`.
    pub fn encoded_len(&self, sequence: &[usize]) -> Result<u64> {
        sequence.iter().try_fold(0u64, |acc, &s| {
            self.codes
                .get(s)
                .map(|c| acc + c.len() as u64)
                .ok_or(Error::SymbolOutOfRange {
                    symbol: s,
                    n: self.codes.len(),
                })
        })
    }

    pub fn encode(&self, sequence: &[usize]) -> Result<Bitstream> {
        let mut out = Bitstream::new();
        for &s in sequence {
            let code = self.codes.get(s).ok_or(Error::SymbolOutOfRange {
                symbol: s,
                n: self.codes.len(),
            })?;
            out.extend_bits(code);
        }
        Ok(out)
    }

    pub fn decode(&self, bits: &Bitstream) -> Result<Vec<usize>> {
        const NONE: usize = usize::MAX;
        // Binary trie; `children[i]` holds (zero, one) child ids, `leaf[i]`
        // the symbol ending at node i.
        let mut children: Vec<[usize; 2]> = vec![[NONE, NONE]];
        let mut leaf: Vec<usize> = vec![NONE];
        for (s, code) in self.codes.iter().enumerate() {
            let mut at = 0;
            for &b in code {
                let next = children[at][b as usize];
                at = if next == NONE {
                    children.push([NONE, NONE]);
                    leaf.push(NONE);
                    let id = children.len() - 1;
                    children[at][b as usize] = id;
                    id
                } else {
                    next
                };
            }
            leaf[at] = s;
        }
        let mut out = Vec::new();
        let mut at = 0;
        for (i, b) in bits.iter().enumerate() {
            at = children[at][b as usize];
            if at == NONE {
                return Err(Error::MalformedStream(format!(
                    "bit {i} leaves the code tree"
                )));
            }
            if leaf[at] != NONE {
                out.push(leaf[at]);
                at = 0;
            }
        }
        if at != 0 {
            return Err(Error::MalformedStream(
                "stream ends inside a codeword".into(),
            ));
        }
        Ok(out)
    }

    /// One `symbol<TAB>bits` line per symbol, in symbol order.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (s, code) in self.codes.iter().enumerate() {
            let bits: String = code.iter().map(|&b| if b { '1' } else { '0' }).collect();
            let _ = writeln!(out, "{s}\t{bits}");
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut codes = Vec::new();
        for (i, line) in text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty())
        {
            let err = |message: String| Error::Parse {
                line: i + 1,
                message,
            };
            let (sym, bits) = line
                .split_once('\t')
                .ok_or_else(|| err("expected symbol<TAB>bits".into()))?;
            let sym: usize = sym
                .trim()
                .parse()
                .map_err(|_| err(format!("bad symbol {sym:?}")))?;
            if sym != codes.len() {
                return Err(err(format!("expected symbol {}, got {sym}", codes.len())));
            }
            let code = bits
                .trim()
                .chars()
                .map(|c| match c {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    _ => Err(err(format!("bad bit {c:?}"))),
                })
                .collect::<Result<Vec<bool>>>()?;
            codes.push(code);
        }
        CodeBook::from_codes(codes)
    }
}
