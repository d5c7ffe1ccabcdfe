//! The set of models (and concepts) visible at a point in the program.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::sema::{ConceptDecl, ModelDecl, ModelId};
use crate::types::{freshening, match_all, unify_all, AssocTy, QualName, Type};

/// Scope level of the module's own models; imports sit at [`SCOPE_IMPORTED`].
pub const SCOPE_LOCAL: u8 = 0;
pub const SCOPE_IMPORTED: u8 = 1;

#[derive(Debug, Clone)]
pub struct WorldEntry {
    pub model: Arc<ModelDecl>,
    pub scope: u8,
}

#[derive(Debug, Clone, Default)]
pub struct ModelWorld {
    /// Topological module order, then declaration order.
    pub entries: Vec<WorldEntry>,
    pub concepts: BTreeMap<QualName, Arc<ConceptDecl>>,
    /// Module whose point of view this is; `None` for the link world.
    pub module: Option<String>,
    /// Scoped policy: path-tagged projections are opaque outside their
    /// model's module, and inner scopes shadow outer ones.
    pub scoped: bool,
}

impl ModelWorld {
    pub fn models(&self) -> impl Iterator<Item = &Arc<ModelDecl>> {
        self.entries.iter().map(|e| &e.model)
    }

    pub fn models_of<'a>(&'a self, concept: &'a QualName) -> impl Iterator<Item = &'a WorldEntry> + 'a {
        self.entries.iter().filter(move |e| &e.model.concept == concept)
    }

    pub fn model(&self, id: &ModelId) -> Option<&Arc<ModelDecl>> {
        self.models().find(|m| &m.id == id)
    }

    pub fn model_by_path(&self, path: &QualName) -> Option<&Arc<ModelDecl>> {
        self.models().find(|m| m.path().as_ref() == Some(path))
    }

    pub fn concept(&self, id: &QualName) -> Option<&Arc<ConceptDecl>> {
        self.concepts.get(id)
    }

    fn transparent(&self, m: &ModelDecl) -> bool {
        match &self.module {
            None => true,
            Some(here) => !self.scoped || m.origin() == here,
        }
    }

    /// One rewrite step for a projection, if one applies.
    pub fn reduce_assoc(&self, a: &AssocTy) -> Option<Type> {
        if let Some(path) = &a.path {
            let m = self.model_by_path(path)?;
            if !self.transparent(m) {
                return None;
            }
            return binding_at(m, a);
        }
        let level = |e: &WorldEntry| if self.scoped { e.scope } else { 0 };
        let matching: Vec<&WorldEntry> =
            self.models_of(&a.concept).filter(|e| binding_at(&e.model, a).is_some()).collect();
        let inner = matching.iter().map(|e| level(e)).min()?;
        let mut at_level = matching.iter().filter(|e| level(e) == inner);
        let chosen = at_level.next()?;
        if at_level.next().is_some() {
            return None;
        }
        // A head that merely unifies could still apply after substitution,
        // so rigid subjects only reduce when no rival model can.
        let rivals = self
            .models_of(&a.concept)
            .filter(|e| level(e) == inner && !Arc::ptr_eq(&e.model, &chosen.model))
            .any(|e| heads_unify(&e.model, &a.subjects));
        if rivals {
            return None;
        }
        if self.scoped && !self.transparent(&chosen.model) {
            let path = chosen.model.path()?;
            return Some(Type::Assoc(Box::new(AssocTy { path: Some(path), ..a.clone() })));
        }
        binding_at(&chosen.model, a)
    }
}

/// The model's binding for `a.member`, instantiated at `a.subjects`.
fn binding_at(m: &ModelDecl, a: &AssocTy) -> Option<Type> {
    if m.concept != a.concept {
        return None;
    }
    let fr = freshening(m.vars.iter().cloned());
    let head: Vec<Type> = m.head.iter().map(|t| fr.apply(t)).collect();
    let s = match_all(&head, &a.subjects)?;
    let (_, b) = m.assoc.iter().find(|(n, _)| n == &a.member)?;
    Some(s.apply(&fr.apply(b)))
}

fn heads_unify(m: &ModelDecl, subjects: &[Type]) -> bool {
    let fr = freshening(m.vars.iter().cloned());
    let pairs: Vec<(Type, Type)> = m.head.iter().map(|t| fr.apply(t)).zip(subjects.iter().cloned()).collect();
    pairs.len() == subjects.len() && unify_all(&pairs).is_ok()
}
