//! Finite presentations: generator slots (a degree plus a representation of
//! the group at that degree) and relation elements inside the free module the
//! slots span. Materialising a presentation on a window builds that free
//! module, closes the relation elements into a submodule (downward-closed
//! under nothing, upward-closed under transitions, closed under the action
//! degreewise), and returns the quotient.
//!
//! A relation is a single element of the free module, written as a linear
//! combination of decorated-injection translates of slot basis vectors; this
//! is the smallest data from which the generated submodule is recoverable,
//! and the quotient depends only on that submodule.

use std::sync::Arc;

use crate::error::{FigError, Result};
use crate::field::Field;
use crate::group::FiniteGroup;
use crate::homology::saturate;
use crate::matrix::Subspace;
use crate::module::{build_free, quotient, FiMorphism, ModuleMap, WindowedModule};
use crate::rep::GnRep;

/// One generator slot: a free summand `M(rep)` based at `degree`.
pub struct GeneratorSlot<F: Field> {
    pub degree: usize,
    pub rep: GnRep<F>,
}

/// One term of a relation element: `coeff * (morphism . e_w)` inside the
/// generator slot `gen`, where `morphism` is a decorated injection from the
/// slot's degree into the relation's degree and `e_w` is a basis vector of
/// the slot representation.
pub struct RelationTerm<F: Field> {
    pub gen: usize,
    pub morphism: FiMorphism,
    pub w: usize,
    pub coeff: F::El,
}

/// A relation: one element of the free module at `degree`.
pub struct Relation<F: Field> {
    pub degree: usize,
    pub terms: Vec<RelationTerm<F>>,
}

pub struct Presentation<F: Field> {
    pub field: F,
    pub group: Arc<FiniteGroup>,
    pub generators: Vec<GeneratorSlot<F>>,
    pub relations: Vec<Relation<F>>,
}

impl<F: Field> Presentation<F> {
    /// Structural validation: slot representations are genuine, every term
    /// references an existing slot, and its morphism really goes from the
    /// slot's degree to the relation's degree.
    pub fn validate(&self) -> Result<()> {
        for (j, slot) in self.generators.iter().enumerate() {
            if slot.rep.n != slot.degree {
                return Err(FigError::Precondition(format!(
                    "generator {j} is based at degree {} but its representation lives at degree {}",
                    slot.degree, slot.rep.n
                )));
            }
            slot.rep.validate()?;
        }
        for (r, rel) in self.relations.iter().enumerate() {
            for (t, term) in rel.terms.iter().enumerate() {
                let ctx = |msg: String| {
                    FigError::Precondition(format!("relation {r}, term {t}: {msg}"))
                };
                let slot = self
                    .generators
                    .get(term.gen)
                    .ok_or_else(|| ctx(format!("no generator {}", term.gen)))?;
                term.morphism.check(&self.group).map_err(|e| ctx(e.to_string()))?;
                if term.morphism.source() != slot.degree {
                    return Err(ctx(format!(
                        "morphism starts at degree {} but generator {} sits at degree {}",
                        term.morphism.source(),
                        term.gen,
                        slot.degree
                    )));
                }
                if term.morphism.target != rel.degree {
                    return Err(ctx(format!(
                        "morphism ends at degree {} but the relation is at degree {}",
                        term.morphism.target, rel.degree
                    )));
                }
                if term.w >= slot.rep.dim {
                    return Err(ctx(format!(
                        "basis index {} out of range for a {}-dimensional slot",
                        term.w, slot.rep.dim
                    )));
                }
            }
        }
        Ok(())
    }

    /// The largest degree mentioned by a generator or relation.
    pub fn max_degree(&self) -> usize {
        let g = self.generators.iter().map(|s| s.degree).max().unwrap_or(0);
        let r = self.relations.iter().map(|r| r.degree).max().unwrap_or(0);
        g.max(r)
    }

    /// Default working window: twice the largest mentioned degree plus two.
    pub fn default_window(&self) -> usize {
        2 * self.max_degree() + 2
    }

    /// The free module on the generator slots, kept both as individual
    /// summands (for evaluating relation terms) and as their direct sum.
    fn free_module(
        &self,
        window: usize,
    ) -> Result<(Vec<WindowedModule<F>>, Arc<WindowedModule<F>>)> {
        let mut slots = Vec::with_capacity(self.generators.len());
        for slot in &self.generators {
            slots.push(build_free(&slot.rep, window)?);
        }
        let mut total = WindowedModule::zero(self.field, Arc::clone(&self.group), window);
        for s in &slots {
            total = total.direct_sum(s);
        }
        Ok((slots, Arc::new(total)))
    }

    /// Evaluate one relation as a vector in the degree-`rel.degree` piece of
    /// the direct sum, slot blocks in generator order.
    fn relation_vector(&self, slots: &[WindowedModule<F>], rel: &Relation<F>) -> Result<Vec<F::El>> {
        let f = self.field;
        let a = rel.degree;
        let total: usize = slots.iter().map(|s| s.dims[a]).sum();
        let mut v = vec![f.zero(); total];
        for term in &rel.terms {
            let offset: usize = slots[..term.gen].iter().map(|s| s.dims[a]).sum();
            let mat = slots[term.gen].evaluate_action(&term.morphism)?;
            for (r, val) in mat.col(term.w).into_iter().enumerate() {
                v[offset + r] = f.add(&v[offset + r], &f.mul(&term.coeff, &val));
            }
        }
        Ok(v)
    }

    /// Build the presented module on `0..=window` together with the
    /// projection from the free module on the generator slots.
    pub fn materialize(
        &self,
        window: usize,
    ) -> Result<(Arc<WindowedModule<F>>, ModuleMap<F>)> {
        self.validate()?;
        if self.max_degree() > window {
            return Err(FigError::WindowExhausted { needed: self.max_degree(), have: window });
        }
        let (slots, free) = self.free_module(window)?;
        // Seed each degree with its relation elements, then close upward:
        // push the previous closed degree through the transition and saturate
        // under the degree's group action.
        let mut seeds: Vec<Subspace<F>> =
            (0..=window).map(|n| Subspace::zero(self.field, free.dims[n])).collect();
        for rel in &self.relations {
            let v = self.relation_vector(&slots, rel)?;
            seeds[rel.degree].insert(&v);
        }
        let mut closed: Vec<Subspace<F>> = Vec::with_capacity(window + 1);
        for n in 0..=window {
            let mut seed = seeds[n].clone();
            if n > 0 {
                let prev = &closed[n - 1];
                for i in 0..prev.dim() {
                    seed.insert(&free.trans[n - 1].mul_vec(prev.basis.row(i)));
                }
            }
            closed.push(saturate(&free.actions[n], &seed));
        }
        quotient(&free, &closed)
    }
}
