//! Finite groups given by multiplication tables, and the wreath-type groups
//! `G_n = G wr S_n` acting in every degree.
//!
//! Elements of `G_n` are pairs `(perm, dec)`: a permutation of `{0,..,n-1}`
//! in one-line notation plus a decoration `dec[i] in G` at each source point.
//! Composition follows the category convention used throughout the crate:
//! `a.compose(b)` means "apply `b` first", with
//!
//! ```text
//! (a o b).perm[i] = a.perm[b.perm[i]]
//! (a o b).dec[i]  = b.dec[i] * a.dec[b.perm[i]]
//! ```
//!
//! so that any representation satisfies `rho(a o b) = rho(a) * rho(b)` for
//! matrices acting on column vectors from the left.
//!
//! `G_n` is generated by the adjacent transpositions `s_1 .. s_{n-1}` (the
//! 1-based label `s_i` swaps points `i-1` and `i` of `{0,..,n-1}`) together
//! with one letter `a_k` per generator of `G`, placed in the first slot.
//! [`factor_element`] rewrites an arbitrary element as a word in these
//! letters, which is how module actions are evaluated from generator data.

use crate::error::{FigError, Result};

/// A finite group presented by its full multiplication table.
/// Element `0` is required to be the identity.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    pub order: usize,
    mul_table: Vec<usize>,
    inv_table: Vec<usize>,
    pub generators: Vec<usize>,
    /// For each element, a word in `generators` (indices into that list)
    /// whose left-to-right product in `G` equals the element.
    pub elem_words: Vec<Vec<usize>>,
}

impl FiniteGroup {
    /// Validate a multiplication table and precompute inverses and generator
    /// words. `generators` defaults to every non-identity element.
    pub fn new(order: usize, table: Vec<Vec<usize>>, generators: Option<Vec<usize>>) -> Result<Self> {
        if order == 0 {
            return Err(FigError::BadGroup("group order must be at least 1".into()));
        }
        if table.len() != order || table.iter().any(|row| row.len() != order) {
            return Err(FigError::BadGroup(format!(
                "multiplication table must be {order}x{order}"
            )));
        }
        let mut mul_table = vec![0usize; order * order];
        for (i, row) in table.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if v >= order {
                    return Err(FigError::BadGroup(format!(
                        "table entry ({i},{j}) = {v} is out of range"
                    )));
                }
                mul_table[i * order + j] = v;
            }
        }
        let at = |i: usize, j: usize| mul_table[i * order + j];
        // Identity must sit at index 0.
        for j in 0..order {
            if at(0, j) != j || at(j, 0) != j {
                return Err(FigError::BadGroup(
                    "element 0 must be a two-sided identity".into(),
                ));
            }
        }
        // Latin square: rows and columns are permutations.
        for i in 0..order {
            let mut seen_row = vec![false; order];
            let mut seen_col = vec![false; order];
            for j in 0..order {
                if std::mem::replace(&mut seen_row[at(i, j)], true) {
                    return Err(FigError::BadGroup(format!("row {i} repeats a value")));
                }
                if std::mem::replace(&mut seen_col[at(j, i)], true) {
                    return Err(FigError::BadGroup(format!("column {i} repeats a value")));
                }
            }
        }
        // Associativity, with a witness on failure.
        for i in 0..order {
            for j in 0..order {
                for k in 0..order {
                    if at(at(i, j), k) != at(i, at(j, k)) {
                        return Err(FigError::BadGroup(format!(
                            "not associative: ({i}*{j})*{k} != {i}*({j}*{k})"
                        )));
                    }
                }
            }
        }
        let mut inv_table = vec![0usize; order];
        for i in 0..order {
            inv_table[i] = (0..order)
                .find(|&j| at(i, j) == 0)
                .expect("latin square has inverses");
        }
        let generators = match generators {
            Some(g) => {
                let mut g = g;
                g.dedup();
                for &x in &g {
                    if x >= order {
                        return Err(FigError::BadGroup(format!("generator {x} out of range")));
                    }
                }
                g
            }
            None => (1..order).collect(),
        };
        // BFS from the identity to get a word for every element.
        let mut elem_words: Vec<Option<Vec<usize>>> = vec![None; order];
        elem_words[0] = Some(vec![]);
        let mut queue = std::collections::VecDeque::from([0usize]);
        while let Some(e) = queue.pop_front() {
            for (k, &g) in generators.iter().enumerate() {
                let next = at(e, g);
                if elem_words[next].is_none() {
                    let mut w = elem_words[e].clone().unwrap();
                    w.push(k);
                    elem_words[next] = Some(w);
                    queue.push_back(next);
                }
            }
        }
        if let Some(missing) = elem_words.iter().position(|w| w.is_none()) {
            return Err(FigError::BadGroup(format!(
                "generators do not generate: element {missing} is unreachable"
            )));
        }
        Ok(FiniteGroup {
            order,
            mul_table,
            inv_table,
            generators,
            elem_words: elem_words.into_iter().map(|w| w.unwrap()).collect(),
        })
    }

    pub fn trivial() -> Self {
        FiniteGroup::new(1, vec![vec![0]], Some(vec![])).unwrap()
    }

    pub fn cyclic(k: usize) -> Self {
        let table = (0..k).map(|i| (0..k).map(|j| (i + j) % k).collect()).collect();
        let gens = if k > 1 { Some(vec![1]) } else { Some(vec![]) };
        FiniteGroup::new(k, table, gens).unwrap()
    }

    #[inline]
    /// The multiplication table as nested rows (the serialisation form).
    pub fn table(&self) -> Vec<Vec<usize>> {
        (0..self.order).map(|i| (0..self.order).map(|j| self.mul(i, j)).collect()).collect()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul_table[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv_table[a]
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    /// `|G_n| = n! * |G|^n`, erroring on overflow.
    pub fn gn_order(&self, n: usize) -> Result<usize> {
        let mut acc: usize = 1;
        for i in 1..=n {
            acc = acc
                .checked_mul(i)
                .and_then(|x| x.checked_mul(self.order))
                .ok_or_else(|| FigError::Precondition(format!("|G_{n}| overflows usize")))?;
        }
        Ok(acc)
    }
}

/// An element of `G_n`: permutation in one-line notation plus decorations.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GnElement {
    /// `perm[i]` is the image of point `i` (0-based).
    pub perm: Vec<usize>,
    /// `dec[i]` is the `G`-decoration at source point `i`.
    pub dec: Vec<usize>,
}

impl GnElement {
    pub fn identity(n: usize) -> Self {
        GnElement { perm: (0..n).collect(), dec: vec![0; n] }
    }

    pub fn degree(&self) -> usize {
        self.perm.len()
    }

    /// `self o other` (apply `other` first).
    pub fn compose(&self, g: &FiniteGroup, other: &GnElement) -> GnElement {
        let n = self.perm.len();
        assert_eq!(n, other.perm.len(), "compose degree");
        let mut perm = vec![0; n];
        let mut dec = vec![0; n];
        for i in 0..n {
            perm[i] = self.perm[other.perm[i]];
            dec[i] = g.mul(other.dec[i], self.dec[other.perm[i]]);
        }
        GnElement { perm, dec }
    }

    pub fn inverse(&self, g: &FiniteGroup) -> GnElement {
        let n = self.perm.len();
        let mut perm = vec![0; n];
        let mut dec = vec![0; n];
        for i in 0..n {
            perm[self.perm[i]] = i;
        }
        for j in 0..n {
            dec[j] = g.inv(self.dec[perm[j]]);
        }
        GnElement { perm, dec }
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| i == p) && self.dec.iter().all(|&d| d == 0)
    }

    /// Remove source point `src` (and its image) and relabel both sides
    /// order-preservingly. Returns the smaller element together with the
    /// decoration that was attached at `src`.
    pub fn delete_point(&self, src: usize) -> (GnElement, usize) {
        let n = self.perm.len();
        let tgt = self.perm[src];
        let mut perm = Vec::with_capacity(n - 1);
        let mut dec = Vec::with_capacity(n - 1);
        for i in 0..n {
            if i == src {
                continue;
            }
            let p = self.perm[i];
            perm.push(if p > tgt { p - 1 } else { p });
            dec.push(self.dec[i]);
        }
        (GnElement { perm, dec }, self.dec[src])
    }
}

/// A generator letter of `G_n`: `S(i)` is the adjacent transposition with
/// 1-based label `i`, `A(k)` puts the `k`-th generator of `G` in slot 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WreathLetter {
    S(usize),
    A(usize),
}

pub type WreathWord = Vec<WreathLetter>;

/// The element of `G_n` a single letter stands for.
pub fn letter_element(g: &FiniteGroup, n: usize, letter: WreathLetter) -> GnElement {
    let mut e = GnElement::identity(n);
    match letter {
        WreathLetter::S(i) => {
            assert!(i >= 1 && i < n, "s_{i} undefined in degree {n}");
            e.perm.swap(i - 1, i);
        }
        WreathLetter::A(k) => {
            assert!(n >= 1, "a-letters undefined in degree 0");
            e.dec[0] = g.generators[k];
        }
    }
    e
}

/// Evaluate a word as the composition of its letters, leftmost outermost:
/// `[w1, w2, w3]` evaluates to `w1 o w2 o w3`.
pub fn eval_word(g: &FiniteGroup, n: usize, word: &[WreathLetter]) -> GnElement {
    let mut acc = GnElement::identity(n);
    for &letter in word {
        acc = acc.compose(g, &letter_element(g, n, letter));
    }
    acc
}

/// Word in `s`-letters for a bare permutation (one-line, 0-based).
pub fn perm_word(perm: &[usize]) -> Vec<usize> {
    let mut p = perm.to_vec();
    let mut swaps = Vec::new();
    loop {
        let mut done = true;
        for i in 0..p.len().saturating_sub(1) {
            if p[i] > p[i + 1] {
                p.swap(i, i + 1);
                swaps.push(i + 1);
                done = false;
            }
        }
        if done {
            break;
        }
    }
    swaps.reverse();
    swaps
}

/// Rewrite an arbitrary element as a word in the generator letters.
///
/// The element factors as `(perm, trivial) o (id, dec)`; the permutation part
/// is bubble-sorted into adjacent transpositions, and each nontrivial
/// decoration `dec[j] = x` contributes a conjugated slot word
/// `s_j .. s_1, (a-letters of x), s_1 .. s_j` moving slot `j+1` to slot 1 and
/// back.
pub fn factor_element(g: &FiniteGroup, e: &GnElement) -> WreathWord {
    let n = e.degree();
    let mut word: WreathWord = perm_word(&e.perm).into_iter().map(WreathLetter::S).collect();
    for j in 0..n {
        let x = e.dec[j];
        if x == 0 {
            continue;
        }
        // Conjugate slot 1 into slot j+1 (1-based): c = s_j o ... o s_1.
        for i in (1..=j).rev() {
            word.push(WreathLetter::S(i));
        }
        // Decoration word for x, reversed because composition of decorated
        // identities multiplies decorations in the opposite order.
        for &k in g.elem_words[x].iter().rev() {
            word.push(WreathLetter::A(k));
        }
        for i in 1..=j {
            word.push(WreathLetter::S(i));
        }
    }
    word
}

/// The order-preserving-on-the-complement permutation sending `i` to the
/// `i`-th smallest element of `subset` (0-based everywhere), as one-line
/// notation on `{0,..,m-1}`.
pub fn coset_perm(subset: &[usize], m: usize) -> Vec<usize> {
    let n = subset.len();
    debug_assert!(subset.windows(2).all(|w| w[0] < w[1]), "subset must be sorted");
    let mut in_subset = vec![false; m];
    for &s in subset {
        in_subset[s] = true;
    }
    let mut one_line = Vec::with_capacity(m);
    one_line.extend_from_slice(subset);
    one_line.extend((0..m).filter(|&x| !in_subset[x]));
    debug_assert_eq!(one_line.len(), m);
    let _ = n;
    one_line
}

/// Lehmer decoding: the `idx`-th permutation of `{0,..,n-1}` in
/// lexicographic order.
pub fn perm_from_index(n: usize, mut idx: usize) -> Vec<usize> {
    let mut fact = vec![1usize; n.max(1)];
    for i in 1..n {
        fact[i] = fact[i - 1] * i;
    }
    let mut pool: Vec<usize> = (0..n).collect();
    let mut out = Vec::with_capacity(n);
    for i in (0..n).rev() {
        let f = fact[i];
        let d = idx / f;
        idx %= f;
        out.push(pool.remove(d));
    }
    out
}

/// Decode index `idx < |G_n|` into an element; permutation part is the high
/// digits, decorations the low mixed-radix digits.
pub fn gn_element_from_index(g: &FiniteGroup, n: usize, idx: usize) -> GnElement {
    let dec_space = g.order.pow(n as u32);
    let perm = perm_from_index(n, idx / dec_space);
    let mut rest = idx % dec_space;
    let mut dec = vec![0; n];
    for d in dec.iter_mut() {
        *d = rest % g.order;
        rest /= g.order;
    }
    GnElement { perm, dec }
}

pub fn gn_element_index(g: &FiniteGroup, e: &GnElement) -> usize {
    let n = e.degree();
    // Lehmer encoding of the permutation.
    let mut fact = vec![1usize; n.max(1)];
    for i in 1..n {
        fact[i] = fact[i - 1] * i;
    }
    let mut pidx = 0usize;
    for i in 0..n {
        let smaller = (i + 1..n).filter(|&j| e.perm[j] < e.perm[i]).count();
        pidx += smaller * fact[n - 1 - i];
    }
    let mut didx = 0usize;
    for i in (0..n).rev() {
        didx = didx * g.order + e.dec[i];
    }
    pidx * g.order.pow(n as u32) + didx
}
