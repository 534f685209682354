use std::collections::{BTreeMap, BTreeSet};

use crate::symbolic::{Q, Symbol, Var};

use super::ops::opposite_from;
use super::relem::{LambdaPoly, Parity, RElem};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorDecl {
    pub name: Symbol,
    pub parity: Parity,
    pub weight: Q,
}

impl GeneratorDecl {
    pub fn new(name: &str, parity: Parity, weight: Q) -> GeneratorDecl {
        GeneratorDecl { name: Symbol::new(name), parity, weight }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VlieError {
    #[error("duplicate name `{0}`")]
    DuplicateName(String),
    #[error("reserved name `{0}`")]
    ReservedName(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("unknown central element `{0}`")]
    UnknownCentral(String),
    #[error("unknown parameter `{0}`")]
    UnknownParameter(String),
    #[error("bracket {0} {1} declared in both orientations")]
    BothOrientations(String, String),
    #[error("bracket {0} {1} declared twice")]
    DuplicateBracket(String, String),
    #[error("bracket {a} {b}: coefficient of l^({t}) has weight {found}, expected {expected}")]
    Inhomogeneous { a: String, b: String, t: u16, expected: Q, found: Q },
    #[error("bracket {a} {b}: term `{term}` has parity {found}, expected {expected}")]
    ParityMismatch { a: String, b: String, term: String, found: Parity, expected: Parity },
    #[error("bracket {a} {b} uses variables other than l")]
    ForeignVariable { a: String, b: String },
    #[error("{0}")]
    Invalid(String),
}

/// A finite vertex Lie algebra presentation: generators, central symbols,
/// parameters and a λ-bracket table on generator pairs.
#[derive(Clone, Debug, PartialEq)]
pub struct Presentation {
    name: String,
    generators: Vec<GeneratorDecl>,
    index: BTreeMap<Symbol, usize>,
    centrals: Vec<Symbol>,
    params: Vec<Symbol>,
    table: BTreeMap<(Symbol, Symbol), LambdaPoly>,
    declared: BTreeSet<(Symbol, Symbol)>,
    synthesized: Vec<(Symbol, Symbol)>,
    graded: bool,
}

/// Incremental construction of a [`Presentation`]; `build` validates.
#[derive(Clone, Debug, Default)]
pub struct PresentationBuilder {
    name: String,
    generators: Vec<GeneratorDecl>,
    centrals: Vec<Symbol>,
    params: Vec<Symbol>,
    entries: Vec<((Symbol, Symbol), LambdaPoly)>,
    graded: bool,
    auto_params: bool,
}

impl PresentationBuilder {
    pub fn new(name: &str) -> PresentationBuilder {
        PresentationBuilder { name: name.to_string(), graded: true, auto_params: true, ..Default::default() }
    }

    pub fn generator(mut self, name: &str, parity: Parity, weight: Q) -> Self {
        self.generators.push(GeneratorDecl::new(name, parity, weight));
        self
    }

    pub fn central(mut self, name: &str) -> Self {
        self.centrals.push(Symbol::new(name));
        self
    }

    pub fn param(mut self, name: &str) -> Self {
        self.params.push(Symbol::new(name));
        self
    }

    /// Parameters must be declared explicitly instead of being collected
    /// from the bracket coefficients.
    pub fn strict_params(mut self) -> Self {
        self.auto_params = false;
        self
    }

    pub fn ungraded(mut self) -> Self {
        self.graded = false;
        self
    }

    pub fn bracket(mut self, a: &str, b: &str, value: LambdaPoly) -> Self {
        self.entries.push(((Symbol::new(a), Symbol::new(b)), value));
        self
    }

    pub fn add_bracket(&mut self, a: &str, b: &str, value: LambdaPoly) {
        self.entries.push(((Symbol::new(a), Symbol::new(b)), value));
    }

    pub fn build(self) -> Result<Presentation, VlieError> {
        let mut seen = BTreeSet::new();
        for n in self.generators.iter().map(|g| &g.name).chain(&self.centrals).chain(&self.params) {
            if matches!(n.as_str(), "T" | "l") {
                return Err(VlieError::ReservedName(n.to_string()));
            }
            if !seen.insert(n.clone()) {
                return Err(VlieError::DuplicateName(n.to_string()));
            }
        }
        let mut generators = self.generators;
        generators.sort_by(|a, b| a.name.cmp(&b.name));
        let index: BTreeMap<Symbol, usize> =
            generators.iter().enumerate().map(|(i, g)| (g.name.clone(), i)).collect();
        let mut centrals = self.centrals;
        centrals.sort();
        let mut params: BTreeSet<Symbol> = self.params.into_iter().collect();

        let mut pres = Presentation {
            name: self.name,
            generators,
            index,
            centrals,
            params: Vec::new(),
            table: BTreeMap::new(),
            declared: BTreeSet::new(),
            synthesized: Vec::new(),
            graded: self.graded,
        };

        for ((a, b), value) in self.entries {
            for g in [&a, &b] {
                if !pres.index.contains_key(g) {
                    return Err(VlieError::UnknownGenerator(g.to_string()));
                }
            }
            if pres.declared.contains(&(a.clone(), b.clone())) {
                return Err(VlieError::DuplicateBracket(a.to_string(), b.to_string()));
            }
            if a != b && pres.declared.contains(&(b.clone(), a.clone())) {
                return Err(VlieError::BothOrientations(a.to_string(), b.to_string()));
            }
            for (e, c) in value.terms() {
                if e.0.iter().enumerate().any(|(i, &x)| i != Var::Lambda.index() && x > 0) {
                    return Err(VlieError::ForeignVariable { a: a.to_string(), b: b.to_string() });
                }
                for (g, _, _) in c.gen_terms() {
                    if !pres.index.contains_key(g) {
                        return Err(VlieError::UnknownGenerator(g.to_string()));
                    }
                }
                for (z, _) in c.central_terms() {
                    if pres.centrals.binary_search(z).is_err() {
                        return Err(VlieError::UnknownCentral(z.to_string()));
                    }
                }
                for p in c.params() {
                    if !params.contains(&p) {
                        if self.auto_params {
                            params.insert(p);
                        } else {
                            return Err(VlieError::UnknownParameter(p.to_string()));
                        }
                    }
                }
            }
            pres.validate_entry(&a, &b, &value)?;
            pres.declared.insert((a.clone(), b.clone()));
            pres.table.insert((a, b), value);
        }
        pres.params = params.into_iter().collect();

        // Synthesize missing orientations of declared pairs.
        let declared: Vec<(Symbol, Symbol)> = pres.declared.iter().cloned().collect();
        for (a, b) in declared {
            if a != b && !pres.table.contains_key(&(b.clone(), a.clone())) {
                let opp = opposite_from(
                    &pres.table[&(a.clone(), b.clone())],
                    pres.parity(&a).koszul(pres.parity(&b)),
                );
                pres.table.insert((b.clone(), a.clone()), opp);
                pres.synthesized.push((b, a));
            }
        }
        Ok(pres)
    }
}

impl Presentation {
    fn validate_entry(&self, a: &Symbol, b: &Symbol, value: &LambdaPoly) -> Result<(), VlieError> {
        let expected_parity = self.parity(a).combine(self.parity(b));
        for (e, c) in value.terms() {
            let t = e.get(Var::Lambda);
            for (g, k, s) in c.gen_terms() {
                let p = self.parity(g);
                if p != expected_parity {
                    return Err(VlieError::ParityMismatch {
                        a: a.to_string(),
                        b: b.to_string(),
                        term: format!("{s}*{g}"),
                        found: p,
                        expected: expected_parity,
                    });
                }
                if self.graded {
                    let expected = &(&self.weight(a) + &self.weight(b)) - &Q::int(t as i64 + 1);
                    let found = &self.weight(g) + &Q::int(k as i64);
                    if found != expected {
                        return Err(VlieError::Inhomogeneous {
                            a: a.to_string(),
                            b: b.to_string(),
                            t,
                            expected,
                            found,
                        });
                    }
                }
            }
            for (z, _) in c.central_terms() {
                if expected_parity != Parity::Even {
                    return Err(VlieError::ParityMismatch {
                        a: a.to_string(),
                        b: b.to_string(),
                        term: z.to_string(),
                        found: Parity::Even,
                        expected: expected_parity,
                    });
                }
                if self.graded {
                    let expected = &(&self.weight(a) + &self.weight(b)) - &Q::int(t as i64 + 1);
                    if !expected.is_zero() {
                        return Err(VlieError::Inhomogeneous {
                            a: a.to_string(),
                            b: b.to_string(),
                            t,
                            expected,
                            found: Q::zero(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn generators(&self) -> &[GeneratorDecl] {
        &self.generators
    }

    pub fn centrals(&self) -> &[Symbol] {
        &self.centrals
    }

    pub fn params(&self) -> &[Symbol] {
        &self.params
    }

    pub fn is_graded(&self) -> bool {
        self.graded
    }

    pub fn has_generator(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    pub fn has_central(&self, name: &str) -> bool {
        self.centrals.iter().any(|c| c.as_str() == name)
    }

    pub fn generator(&self, name: &str) -> Option<&GeneratorDecl> {
        self.index.get(name).map(|&i| &self.generators[i])
    }

    /// Position of a generator in the name-sorted generator list.
    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    /// Parity of a generator; panics on unknown names (validated elsewhere).
    pub fn parity(&self, name: &str) -> Parity {
        self.generator(name).map(|g| g.parity).unwrap_or(Parity::Even)
    }

    pub fn weight(&self, name: &str) -> Q {
        self.generator(name).map(|g| g.weight.clone()).unwrap_or_default()
    }

    /// Raw table entry `[a_λ b]` for generators (zero when undeclared).
    pub fn entry(&self, a: &str, b: &str) -> LambdaPoly {
        self.table.get(&(Symbol::new(a), Symbol::new(b))).cloned().unwrap_or_default()
    }

    pub fn entry_ref(&self, a: &Symbol, b: &Symbol) -> Option<&LambdaPoly> {
        self.table.get(&(a.clone(), b.clone()))
    }

    /// Pairs whose bracket was written explicitly.
    pub fn declared_pairs(&self) -> impl Iterator<Item = &(Symbol, Symbol)> {
        self.declared.iter()
    }

    /// Orientations filled in from conformal skew-symmetry.
    pub fn synthesized_pairs(&self) -> &[(Symbol, Symbol)] {
        &self.synthesized
    }

    /// Parity of a homogeneous element; `None` if it mixes parities.
    pub fn parity_of(&self, x: &RElem) -> Option<Parity> {
        let mut out: Option<Parity> = None;
        let parities = x
            .gen_terms()
            .map(|(g, _, _)| self.parity(g))
            .chain(x.central_terms().map(|_| Parity::Even));
        for p in parities {
            match out {
                None => out = Some(p),
                Some(q) if q != p => return None,
                _ => {}
            }
        }
        Some(out.unwrap_or(Parity::Even))
    }

    /// Weight of a homogeneous element; `None` if inhomogeneous. Zero has
    /// no well-defined weight and also yields `None`.
    pub fn weight_of(&self, x: &RElem) -> Option<Q> {
        let mut out: Option<Q> = None;
        let weights = x
            .gen_terms()
            .map(|(g, k, _)| &self.weight(g) + &Q::int(k as i64))
            .chain(x.central_terms().map(|_| Q::zero()));
        for w in weights {
            match &out {
                None => out = Some(w),
                Some(v) if *v != w => return None,
                _ => {}
            }
        }
        out
    }

    /// Checks that every symbol in `x` belongs to this presentation.
    pub fn validate_elem(&self, x: &RElem) -> Result<(), VlieError> {
        for (g, _, _) in x.gen_terms() {
            if !self.has_generator(g) {
                return Err(VlieError::UnknownGenerator(g.to_string()));
            }
        }
        for (z, _) in x.central_terms() {
            if !self.has_central(z) {
                return Err(VlieError::UnknownCentral(z.to_string()));
            }
        }
        Ok(())
    }

    /// Replaces a table entry without validation; used to build negative
    /// controls (corrupted tables) and by the file parser round trip.
    pub fn with_entry_unchecked(&self, a: &str, b: &str, value: LambdaPoly) -> Presentation {
        let mut out = self.clone();
        out.table.insert((Symbol::new(a), Symbol::new(b)), value);
        out
    }

    pub fn rename(mut self, name: &str) -> Presentation {
        self.name = name.to_string();
        self
    }
}
