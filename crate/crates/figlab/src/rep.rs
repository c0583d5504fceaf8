//! Finite-dimensional representations of `G_n` given by generator matrices.
//!
//! A representation assigns a matrix to each adjacent transposition
//! `s_1 .. s_{n-1}` and to each slot-1 letter `a_k` (one per generator of
//! `G`), acting on column vectors from the left with
//! `rho(a o b) = rho(a) rho(b)`.
//!
//! [`GnRep::validate`] checks the defining relations of the wreath product:
//! the Coxeter relations among the `s_i`, the multiplication table of `G`
//! inside slot 1, commutation of slot 1 with `s_j` for `j >= 2`, and
//! commutation of slot 1 with slot 2 (the `s_1`-conjugate of slot 1). The
//! last family is where most hand-rolled "representations" fail; without it
//! the matrices can generate something much bigger than `G wr S_n`.
//!
//! Note the slot embedding `x -> (id, x at slot 1)` is an anti-homomorphism
//! under the category composition, so the table check reads
//! `phi(x) phi(y) = phi(y x)`.

use std::sync::Arc;

use crate::error::{FigError, Result};
use crate::field::Field;
use crate::group::{
    factor_element, FiniteGroup, GnElement, WreathLetter, WreathWord,
};
use crate::matrix::Matrix;

#[derive(Clone)]
pub struct GnRep<F: Field> {
    pub field: F,
    pub group: Arc<FiniteGroup>,
    pub n: usize,
    pub dim: usize,
    /// Matrices for `s_1 .. s_{n-1}` (index `i-1`).
    pub s_mats: Vec<Matrix<F>>,
    /// Matrices for the slot-1 letters, one per generator of `G`
    /// (empty when `n == 0`).
    pub a_mats: Vec<Matrix<F>>,
}

/// Letters of the slot-1 word for a group element: the stored generator word
/// reversed, because decorated identities compose in the opposite order.
pub fn slot_one_word(group: &FiniteGroup, x: usize) -> WreathWord {
    group.elem_words[x].iter().rev().map(|&k| WreathLetter::A(k)).collect()
}

impl<F: Field> GnRep<F> {
    pub fn trivial(field: F, group: Arc<FiniteGroup>, n: usize) -> Self {
        let id = Matrix::identity(field, 1);
        let a_count = if n == 0 { 0 } else { group.generators.len() };
        GnRep {
            field,
            group,
            n,
            dim: 1,
            s_mats: vec![id.clone(); n.saturating_sub(1)],
            a_mats: vec![id; a_count],
        }
    }

    pub fn zero(field: F, group: Arc<FiniteGroup>, n: usize) -> Self {
        let z = Matrix::zeros(field, 0, 0);
        let a_count = if n == 0 { 0 } else { group.generators.len() };
        GnRep {
            field,
            group,
            n,
            dim: 0,
            s_mats: vec![z.clone(); n.saturating_sub(1)],
            a_mats: vec![z; a_count],
        }
    }

    /// One-dimensional representation from scalar values: `eps` for every
    /// `s_i` and `chi[k]` for the `k`-th slot-1 letter.
    pub fn character(field: F, group: Arc<FiniteGroup>, n: usize, eps: F::El, chi: Vec<F::El>) -> Self {
        let s = Matrix::from_rows(field, 1, vec![vec![eps]]);
        let a_mats = if n == 0 {
            vec![]
        } else {
            chi.into_iter().map(|c| Matrix::from_rows(field, 1, vec![vec![c]])).collect()
        };
        GnRep { field, group, n, dim: 1, s_mats: vec![s; n.saturating_sub(1)], a_mats }
    }

    /// The left regular representation of `G_n`: permutation matrices of
    /// left multiplication on the elements of `G_n` (indexed canonically).
    pub fn regular(field: F, group: Arc<FiniteGroup>, n: usize) -> Result<Self> {
        let order = group.gn_order(n)?;
        let letter_mat = |letter: WreathLetter| -> Matrix<F> {
            let le = crate::group::letter_element(&group, n, letter);
            let mut m = Matrix::zeros(field, order, order);
            for idx in 0..order {
                let x = crate::group::gn_element_from_index(&group, n, idx);
                let lx = le.compose(&group, &x);
                m.set(crate::group::gn_element_index(&group, &lx), idx, field.one());
            }
            m
        };
        let s_mats = (1..n).map(|i| letter_mat(WreathLetter::S(i))).collect();
        let a_mats = if n == 0 {
            vec![]
        } else {
            (0..group.generators.len()).map(|k| letter_mat(WreathLetter::A(k))).collect()
        };
        Ok(GnRep { field, group, n, dim: order, s_mats, a_mats })
    }

    pub fn direct_sum(&self, other: &GnRep<F>) -> GnRep<F> {
        assert_eq!(self.n, other.n, "direct_sum degree");
        let glue = |a: &[Matrix<F>], b: &[Matrix<F>]| {
            a.iter().zip(b).map(|(x, y)| Matrix::block_diag(self.field, &[x, y])).collect()
        };
        GnRep {
            field: self.field,
            group: Arc::clone(&self.group),
            n: self.n,
            dim: self.dim + other.dim,
            s_mats: glue(&self.s_mats, &other.s_mats),
            a_mats: glue(&self.a_mats, &other.a_mats),
        }
    }

    pub fn letter_matrix(&self, letter: WreathLetter) -> &Matrix<F> {
        match letter {
            WreathLetter::S(i) => {
                assert!(i >= 1 && i < self.n, "s_{i} out of range in degree {}", self.n);
                &self.s_mats[i - 1]
            }
            WreathLetter::A(k) => &self.a_mats[k],
        }
    }

    /// Product of letter matrices in word order (empty word = identity).
    pub fn word_matrix(&self, word: &[WreathLetter]) -> Matrix<F> {
        let mut acc = Matrix::identity(self.field, self.dim);
        for &letter in word {
            acc = acc.mul(self.letter_matrix(letter));
        }
        acc
    }

    /// Matrix of an arbitrary element, via its generator-word factorisation.
    pub fn element_matrix(&self, e: &GnElement) -> Matrix<F> {
        debug_assert_eq!(e.degree(), self.n);
        self.word_matrix(&factor_element(&self.group, e))
    }

    fn relation_err(&self, relation: &str, detail: &str) -> FigError {
        FigError::BadRepresentation {
            degree: self.n,
            relation: relation.to_string(),
            detail: detail.to_string(),
        }
    }

    /// Check shapes and all defining relations of `G wr S_n`.
    pub fn validate(&self) -> Result<()> {
        let n = self.n;
        let expected_a = if n == 0 { 0 } else { self.group.generators.len() };
        if self.s_mats.len() != n.saturating_sub(1) {
            return Err(self.relation_err("shape", &format!("expected {} s-matrices, got {}", n.saturating_sub(1), self.s_mats.len())));
        }
        if self.a_mats.len() != expected_a {
            return Err(self.relation_err("shape", &format!("expected {} a-matrices, got {}", expected_a, self.a_mats.len())));
        }
        for (i, m) in self.s_mats.iter().enumerate() {
            if m.rows != self.dim || m.cols != self.dim {
                return Err(self.relation_err("shape", &format!("s_{} is {}x{}, expected {}x{}", i + 1, m.rows, m.cols, self.dim, self.dim)));
            }
        }
        for (k, m) in self.a_mats.iter().enumerate() {
            if m.rows != self.dim || m.cols != self.dim {
                return Err(self.relation_err("shape", &format!("a_{k} is {}x{}, expected {}x{}", m.rows, m.cols, self.dim, self.dim)));
            }
        }
        let id = Matrix::identity(self.field, self.dim);
        // Coxeter relations.
        for i in 1..n {
            let s = &self.s_mats[i - 1];
            if s.mul(s) != id {
                return Err(self.relation_err("involution", &format!("s_{i}^2 != 1")));
            }
        }
        for i in 1..n.saturating_sub(1) {
            let a = &self.s_mats[i - 1];
            let b = &self.s_mats[i];
            if a.mul(b).mul(a) != b.mul(a).mul(b) {
                return Err(self.relation_err("braid", &format!("s_{i} s_{} s_{i} != s_{} s_{i} s_{}", i + 1, i + 1, i + 1)));
            }
        }
        for i in 1..n {
            for j in i + 2..n {
                let a = &self.s_mats[i - 1];
                let b = &self.s_mats[j - 1];
                if a.mul(b) != b.mul(a) {
                    return Err(self.relation_err("disjoint-commutation", &format!("s_{i} s_{j} != s_{j} s_{i}")));
                }
            }
        }
        if n >= 1 {
            // Slot-1 copy of the group table (anti-homomorphism check).
            let order = self.group.order;
            let phi: Vec<Matrix<F>> = (0..order).map(|x| self.word_matrix(&slot_one_word(&self.group, x))).collect();
            for x in 0..order {
                for y in 0..order {
                    if phi[x].mul(&phi[y]) != phi[self.group.mul(y, x)] {
                        return Err(self.relation_err("group-table", &format!("slot-1 letters violate the table at ({x},{y})")));
                    }
                }
            }
            // Slot 1 commutes with s_j for j >= 2.
            for (k, a) in self.a_mats.iter().enumerate() {
                for j in 2..n {
                    let s = &self.s_mats[j - 1];
                    if a.mul(s) != s.mul(a) {
                        return Err(self.relation_err("slot-transposition", &format!("a_{k} does not commute with s_{j}")));
                    }
                }
            }
            // Slot 1 commutes with slot 2 (the s_1-conjugate of slot 1).
            if n >= 2 {
                let s1 = &self.s_mats[0];
                for (k, a) in self.a_mats.iter().enumerate() {
                    for (l, b) in self.a_mats.iter().enumerate() {
                        let conj = s1.mul(b).mul(s1);
                        if a.mul(&conj) != conj.mul(a) {
                            return Err(self.relation_err("slot-slot", &format!("a_{k} does not commute with s_1 a_{l} s_1")));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Restriction along `G_{n-1} -> G_n` (drop the last transposition).
    pub fn restrict(&self) -> GnRep<F> {
        assert!(self.n >= 1, "cannot restrict below degree 0");
        let n = self.n - 1;
        GnRep {
            field: self.field,
            group: Arc::clone(&self.group),
            n,
            dim: self.dim,
            s_mats: self.s_mats[..n.saturating_sub(1)].to_vec(),
            a_mats: if n == 0 { vec![] } else { self.a_mats.clone() },
        }
    }
}

/// Left cosets of `G_n` inside `G_{n+1}`.
///
/// A coset is determined by where the last point goes and which decoration
/// it carries: the key of `z` is `(z.perm[n], z.dec[n])`, flattened as
/// `j * |G| + g`. The stored representative for key `(j, g)` sends the last
/// point to `j` (shifting `j.. ` up by one, order-preserving elsewhere) and
/// decorates it with `g`.
pub struct CosetTable {
    pub upper_degree: usize,
    pub group_order: usize,
    pub reps: Vec<GnElement>,
}

impl CosetTable {
    pub fn new(group: &FiniteGroup, upper_degree: usize) -> Self {
        assert!(upper_degree >= 1);
        let n = upper_degree - 1;
        let mut reps = Vec::with_capacity(upper_degree * group.order);
        for j in 0..upper_degree {
            let mut perm: Vec<usize> = (0..upper_degree).map(|i| if i < j { i } else { i + 1 }).collect();
            perm[n] = j;
            for g in 0..group.order {
                let mut dec = vec![0; upper_degree];
                dec[n] = g;
                reps.push(GnElement { perm: perm.clone(), dec });
            }
        }
        CosetTable { upper_degree, group_order: group.order, reps }
    }

    pub fn count(&self) -> usize {
        self.reps.len()
    }

    #[inline]
    pub fn key_of(&self, z: &GnElement) -> usize {
        let n = self.upper_degree - 1;
        z.perm[n] * self.group_order + z.dec[n]
    }

    /// Factor `z = y_key o iota(h)`; returns `(key, h)`.
    pub fn reduce(&self, group: &FiniteGroup, z: &GnElement) -> (usize, GnElement) {
        let key = self.key_of(z);
        let u = self.reps[key].inverse(group).compose(group, z);
        let n = self.upper_degree - 1;
        debug_assert_eq!(u.perm[n], n, "reduction must fix the last point");
        debug_assert_eq!(u.dec[n], 0, "reduction must clear the last decoration");
        let (h, _) = u.delete_point(n);
        (key, h)
    }
}

/// Induction from `G_n` to `G_{n+1}`: basis `(coset key, basis of W)`, with
/// `x . (y (x) w) = y' (x) rho_W(h') w` where `x o y = y' o iota(h')`.
pub fn induce_rep<F: Field>(w: &GnRep<F>) -> Result<GnRep<F>> {
    let field = w.field;
    let group = Arc::clone(&w.group);
    let n = w.n;
    let m = n + 1;
    let table = CosetTable::new(&group, m);
    let dim = table.count() * w.dim;
    let letter_mat = |letter: WreathLetter| -> Matrix<F> {
        let le = crate::group::letter_element(&group, m, letter);
        let mut mat = Matrix::zeros(field, dim, dim);
        for (key, y) in table.reps.iter().enumerate() {
            let z = le.compose(&group, y);
            let (key2, h) = table.reduce(&group, &z);
            let block = w.element_matrix(&h);
            for r in 0..w.dim {
                for c in 0..w.dim {
                    let v = block.at(r, c).clone();
                    if !field.is_zero(&v) {
                        mat.set(key2 * w.dim + r, key * w.dim + c, v);
                    }
                }
            }
        }
        mat
    };
    let s_mats = (1..m).map(|i| letter_mat(WreathLetter::S(i))).collect();
    let a_mats = (0..group.generators.len()).map(|k| letter_mat(WreathLetter::A(k))).collect();
    Ok(GnRep { field, group, n: m, dim, s_mats, a_mats })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use crate::group::{eval_word, gn_element_from_index};
    use rand::{Rng, SeedableRng};

    #[test]
    fn trivial_and_regular_validate() {
        let g = Arc::new(FiniteGroup::cyclic(2));
        for n in 0..=3 {
            GnRep::trivial(Rationals, Arc::clone(&g), n).validate().unwrap();
            GnRep::regular(Rationals, Arc::clone(&g), n).unwrap().validate().unwrap();
        }
        let g3 = Arc::new(FiniteGroup::cyclic(3));
        GnRep::regular(PrimeField::new(3).unwrap(), Arc::clone(&g3), 2).unwrap().validate().unwrap();
    }

    #[test]
    fn regular_rep_is_a_homomorphism() {
        let g = Arc::new(FiniteGroup::cyclic(2));
        let rep = GnRep::regular(Rationals, Arc::clone(&g), 3).unwrap();
        let total = g.gn_order(3).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let a = gn_element_from_index(&g, 3, rng.gen_range(0..total));
            let b = gn_element_from_index(&g, 3, rng.gen_range(0..total));
            let ab = a.compose(&g, &b);
            assert_eq!(rep.element_matrix(&a).mul(&rep.element_matrix(&b)), rep.element_matrix(&ab));
        }
    }

    #[test]
    fn element_matrix_respects_word_evaluation() {
        let g = Arc::new(FiniteGroup::cyclic(3));
        let rep = GnRep::regular(Rationals, Arc::clone(&g), 2).unwrap();
        // Evaluating a word and factoring the result give the same matrix.
        let word = vec![WreathLetter::A(0), WreathLetter::S(1), WreathLetter::A(0), WreathLetter::A(0)];
        let e = eval_word(&g, 2, &word);
        assert_eq!(rep.word_matrix(&word), rep.element_matrix(&e));
    }

    #[test]
    fn missing_slot_slot_relation_is_caught() {
        // s = swap, a = [[1,1],[0,-1]] satisfies every relation except
        // commutation of slot 1 with slot 2.
        let g = Arc::new(FiniteGroup::cyclic(2));
        let f = Rationals;
        let s = Matrix::from_rows(f, 2, vec![
            vec![f.from_i64(0), f.from_i64(1)],
            vec![f.from_i64(1), f.from_i64(0)],
        ]);
        let a = Matrix::from_rows(f, 2, vec![
            vec![f.from_i64(1), f.from_i64(1)],
            vec![f.from_i64(0), f.from_i64(-1)],
        ]);
        let rep = GnRep { field: f, group: g, n: 2, dim: 2, s_mats: vec![s], a_mats: vec![a] };
        let err = rep.validate().unwrap_err();
        assert!(err.to_string().contains("slot-slot"), "{err}");
    }

    #[test]
    fn broken_involution_is_caught() {
        let g = Arc::new(FiniteGroup::trivial());
        let f = PrimeField::new(5).unwrap();
        let s = Matrix::from_rows(f, 1, vec![vec![2]]);
        let rep = GnRep { field: f, group: g, n: 2, dim: 1, s_mats: vec![s], a_mats: vec![] };
        assert!(rep.validate().is_err());
    }

    #[test]
    fn coset_reduction_roundtrip() {
        let g = FiniteGroup::cyclic(2);
        let table = CosetTable::new(&g, 3);
        assert_eq!(table.count(), 6);
        let total = g.gn_order(3).unwrap();
        for idx in 0..total {
            let z = gn_element_from_index(&g, 3, idx);
            let (key, h) = table.reduce(&g, &z);
            // Reassemble z = y_key o iota(h).
            let mut iota_perm = h.perm.clone();
            iota_perm.push(2);
            let mut iota_dec = h.dec.clone();
            iota_dec.push(0);
            let iota_h = GnElement { perm: iota_perm, dec: iota_dec };
            assert_eq!(table.reps[key].compose(&g, &iota_h), z);
        }
    }

    #[test]
    fn induced_rep_validates_and_has_predicted_dimension() {
        let g = Arc::new(FiniteGroup::cyclic(2));
        let w = GnRep::trivial(Rationals, Arc::clone(&g), 1);
        let ind = induce_rep(&w).unwrap();
        assert_eq!(ind.dim, 2 * 2 * 1);
        ind.validate().unwrap();
        // Inducing the regular representation of G_1 gives the regular
        // representation of G_2 up to isomorphism; dimensions certainly match.
        let r1 = GnRep::regular(Rationals, Arc::clone(&g), 1).unwrap();
        let ind2 = induce_rep(&r1).unwrap();
        assert_eq!(ind2.dim, g.gn_order(2).unwrap());
        ind2.validate().unwrap();
    }

    #[test]
    fn restriction_validates() {
        let g = Arc::new(FiniteGroup::cyclic(2));
        let r = GnRep::regular(Rationals, Arc::clone(&g), 3).unwrap();
        let res = r.restrict();
        assert_eq!(res.n, 2);
        res.validate().unwrap();
    }
}
