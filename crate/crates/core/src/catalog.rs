//! Machine-readable catalog of the named axioms and principles of the
//! NACT family: the ten-axiom NACT+4 / ZFC4 block, the J-principles
//! (J1)–(J4), the closed-comprehension gate, and the cardinality policy
//! flags (GCH), (FCA), (AC-small).
//!
//! First-order renderable entries carry a formula that round-trips
//! through the parser and evaluates over finite structures; schemata and
//! inherently second-order entries carry template text only. A handful
//! of named symbols (omega0, tau0, Ord, aleph, AC(x)) are cataloged with
//! their sources but have no operational semantics here.

use crate::formula::{expand_sugar, parse, print, Formula, Var};
use crate::stratify::is_nfum_closed_eligible;
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("unknown axiom name: {0}")]
    UnknownName(String),
}

/// How an entry is rendered.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rendering {
    /// A closed first-order formula of the core language.
    Formula(Formula),
    /// Schema or principle text with `X` (and `F`) as class slots.
    Template(String),
    /// Named but deliberately opaque.
    Opaque,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomSchema {
    pub name: &'static str,
    pub rendering: Rendering,
    /// Needs a smallness predicate (instantiated with Slim here).
    pub requires_smallness: bool,
    /// Not evaluable over finite structures (quantifies over classes,
    /// functions, or an infinite set).
    pub second_order_ish: bool,
    pub source: &'static str,
}

impl AxiomSchema {
    fn formula(name: &'static str, f: Formula, source: &'static str) -> AxiomSchema {
        AxiomSchema {
            name,
            rendering: Rendering::Formula(f),
            requires_smallness: false,
            second_order_ish: false,
            source,
        }
    }

    fn template(name: &'static str, text: &str, source: &'static str) -> AxiomSchema {
        AxiomSchema {
            name,
            rendering: Rendering::Template(text.to_string()),
            requires_smallness: false,
            second_order_ish: false,
            source,
        }
    }

    fn opaque(name: &'static str, source: &'static str) -> AxiomSchema {
        AxiomSchema {
            name,
            rendering: Rendering::Opaque,
            requires_smallness: false,
            second_order_ish: false,
            source,
        }
    }

    fn smallness(mut self) -> AxiomSchema {
        self.requires_smallness = true;
        self
    }

    fn second_order(mut self) -> AxiomSchema {
        self.second_order_ish = true;
        self
    }

    /// Instantiates a disjunctive schema like 5a at a class expression,
    /// normalizing double complements; the result is the unordered pair
    /// of sethood claims, so `instantiate(X) == instantiate(-X)`.
    pub fn instantiate_disjunctive(&self, class_expr: &str) -> BTreeSet<String> {
        let normalized = normalize_complement(class_expr);
        let complement = normalize_complement(&format!("-{normalized}"));
        [normalized, complement]
            .into_iter()
            .map(|c| format!("Set({c})"))
            .collect()
    }
}

fn normalize_complement(expr: &str) -> String {
    let mut s = expr.trim().to_string();
    while let Some(stripped) = s.strip_prefix("--") {
        s = stripped.to_string();
    }
    s
}

/// Extensionality: sets with the same members are equal.
pub fn extensionality() -> Formula {
    parse("forall x1 . forall x2 . (forall x3 . (x3 in x1 -> x3 in x2) & (x3 in x2 -> x3 in x1)) -> x1 = x2")
        .expect("fixed formula parses")
}

/// The constituting formula of omega: membership in every inductive set,
/// sugar-expanded into the pure language.
pub fn omega_formula() -> Formula {
    let sugared = parse(
        "forall x1 . 0 in x1 & (forall x2 . x2 in x1 -> x2 cup { x2 } in x1) -> x in x1",
    )
    .expect("fixed formula parses");
    expand_sugar(&sugared)
}

/// The ten NACT+4 / ZFC4 schemata: six basic axioms and the four
/// smallness-relativized ZF axioms, with Small instantiated by Slim.
pub fn emit_zfc4() -> Vec<AxiomSchema> {
    vec![
        AxiomSchema::template(
            "ClassOp",
            "{|x: A(x)|} always denotes a class; {x: A(x)} denotes a set for qualifying A, else 0",
            "NACT+4 axiom 1 (class operator)",
        ),
        AxiomSchema::template(
            "ChS",
            "y in {x: A(x)} <-> A(y)  [for arbitrary A]",
            "NACT+4 axiom 2 (Church schema)",
        )
        .second_order(),
        AxiomSchema::formula("Ext", extensionality(), "NACT+4 axiom 3 (extensionality)"),
        AxiomSchema::opaque("AC-weak", "NACT+4 axiom 4 (a weak choice principle, unspecified)"),
        AxiomSchema::template(
            "5a",
            "Set(X) or Set(-X)",
            "NACT+4 axiom 5a (disjunctive sets; the J3 principle)",
        )
        .second_order(),
        AxiomSchema::template(
            "6c",
            "Small(X) -> Set(X) & Set(-X)",
            "NACT+4 axiom 6c (ordering; the J2 principle, Small := Slim)",
        )
        .smallness()
        .second_order(),
        AxiomSchema {
            name: "ZFC7#",
            rendering: Rendering::Formula(omega_formula()),
            requires_smallness: true,
            second_order_ish: true,
            source: "ZFC4 axiom (7#): Small(omega0); rendered by omega0's constituting formula",
        },
        AxiomSchema::template(
            "ZFC8#",
            "Small(X) -> Small(Power(X))",
            "ZFC4 axiom (8#) (power set smallness)",
        )
        .smallness()
        .second_order(),
        AxiomSchema::template(
            "ZFC9#",
            "Small(X) & (forall y in X: Small(y)) -> Small(Union(X))",
            "ZFC4 axiom (9#) (large union smallness)",
        )
        .smallness()
        .second_order(),
        AxiomSchema::template(
            "ZFC10#",
            "Small(X) & Function(F) -> Small(F[X])",
            "ZFC4 axiom (10#) (image smallness)",
        )
        .smallness()
        .second_order(),
    ]
}

/// The closed-comprehension gate: the comprehension axiom of `{x: A(x)}`
/// for stratified A whose only free variable is x. Nothing otherwise,
/// which keeps the generated axiom set recursively enumerable.
pub fn emit_nfum_closed_axiom(a: &Formula) -> Option<AxiomSchema> {
    if !is_nfum_closed_eligible(a) {
        return None;
    }
    let canonical = crate::formula::canonicalize(a);
    let axiom = Formula::forall(
        Var::Indexed(1000),
        Formula::iff(
            Formula::Member(
                crate::formula::Term::Var(Var::Indexed(1000)),
                crate::formula::Term::set_of(canonical.clone()),
            ),
            instantiate_x(&canonical, Var::Indexed(1000)),
        ),
    );
    Some(AxiomSchema {
        name: "NFUM()-comprehension",
        rendering: Rendering::Formula(crate::formula::canonicalize(&axiom)),
        requires_smallness: false,
        second_order_ish: false,
        source: "the J4 principle: Stratified(A(x)) -> Set({x: A(x)}) for closed A",
    })
}

fn instantiate_x(f: &Formula, v: Var) -> Formula {
    use crate::formula::Term;
    fn term(t: &Term, v: Var) -> Term {
        match t {
            Term::Var(Var::X) => Term::Var(v),
            Term::Var(u) => Term::Var(*u),
            Term::Empty => Term::Empty,
            Term::Singleton(t) => Term::Singleton(Box::new(term(t, v))),
            Term::Union(a, b) => Term::Union(Box::new(term(a, v)), Box::new(term(b, v))),
            // comprehension binders shadow x only when they bind x itself
            Term::Comprehension(op, bound, body) => {
                if *bound == Var::X {
                    Term::Comprehension(*op, *bound, body.clone())
                } else {
                    Term::Comprehension(*op, *bound, Box::new(instantiate_x(body, v)))
                }
            }
        }
    }
    match f {
        Formula::Verum => Formula::Verum,
        Formula::Falsum => Formula::Falsum,
        Formula::Member(a, b) => Formula::Member(term(a, v), term(b, v)),
        Formula::Equal(a, b) => Formula::Equal(term(a, v), term(b, v)),
        Formula::Mirimanoff(t) => Formula::Mirimanoff(term(t, v)),
        Formula::Not(a) => Formula::not(instantiate_x(a, v)),
        Formula::And(a, b) => Formula::and(instantiate_x(a, v), instantiate_x(b, v)),
        Formula::Or(a, b) => Formula::or(instantiate_x(a, v), instantiate_x(b, v)),
        Formula::Implies(a, b) => Formula::implies(instantiate_x(a, v), instantiate_x(b, v)),
        Formula::Exists(u, a) => Formula::exists(*u, instantiate_x(a, v)),
        Formula::Forall(u, a) => Formula::forall(*u, instantiate_x(a, v)),
    }
}

/// Entries beyond the ZFC4 block: the J-principles, policy flags, the
/// worked complement example, and named symbols without operational
/// semantics.
fn extra_entries() -> Vec<AxiomSchema> {
    vec![
        AxiomSchema::template(
            "J1",
            "the generation of new sets is independent of the already existing sets",
            "NACT principle (J1); the step from the W-systems to Moon/Star",
        ),
        AxiomSchema::template(
            "J2",
            "Small(X) -> Set(X) & Set(-X)  [Small := Slim, slim(X) := card(X) < card(-X)]",
            "NACT principle (J2): small and large classes are sets",
        )
        .smallness(),
        AxiomSchema::template(
            "J3",
            "Set({x: A(x)}) or Set({x: not A(x)})",
            "NACT principle (J3): of A and not-A, at least one generates a set",
        ),
        AxiomSchema::template(
            "J4",
            "Stratified(A(x)) -> Set({x: A(x)})  [A closed, only free variable x]",
            "NACT principle (J4): J2 and J3 applied to closed stratified comprehension",
        ),
        AxiomSchema::template(
            "GCH",
            "|X| = aleph_a -> |Power(X)| = aleph_{a+1}",
            "cardinality policy flag (GCH); representation only",
        )
        .second_order(),
        AxiomSchema::template(
            "FCA",
            "|X| <= omega0",
            "cardinality policy flag (FCA), the finite-or-countable anti-thesis",
        )
        .second_order(),
        AxiomSchema::opaque("AC-small", "choice restricted to small sets; policy flag"),
        AxiomSchema::template(
            "V",
            "V = -0  (the universe as complement of the empty set, via J2)",
            "worked example: a set produced by J2 that ZFC4 alone lacks",
        ),
        AxiomSchema {
            name: "omega0",
            rendering: Rendering::Formula(omega_formula()),
            requires_smallness: false,
            second_order_ish: true,
            source: "the set generated by the inductive-membership formula",
        },
        AxiomSchema::opaque("tau0", "Tarski's inaccessible; named, no operational semantics"),
        AxiomSchema::opaque("Ord", "the class of ordinals; named, no operational semantics"),
        AxiomSchema::opaque("aleph", "the aleph scale; named, no operational semantics"),
        AxiomSchema::opaque(
            "ACx",
            "AC(x), the class of sets satisfying choice; expressing it needs notions beyond the sugar layer",
        ),
    ]
}

/// Lookup across the whole closed catalog.
pub fn catalog_lookup(name: &str) -> Result<AxiomSchema, CatalogError> {
    emit_zfc4()
        .into_iter()
        .chain(extra_entries())
        .find(|s| s.name == name)
        .ok_or_else(|| CatalogError::UnknownName(name.to_string()))
}

pub fn catalog_names() -> Vec<&'static str> {
    emit_zfc4()
        .into_iter()
        .chain(extra_entries())
        .map(|s| s.name)
        .collect()
}

/// JSON export for reports.
pub fn export_json() -> serde_json::Value {
    let entries: Vec<serde_json::Value> = emit_zfc4()
        .into_iter()
        .chain(extra_entries())
        .map(|s| {
            let (kind, rendering) = match &s.rendering {
                Rendering::Formula(f) => ("formula", print(f)),
                Rendering::Template(t) => ("template", t.clone()),
                Rendering::Opaque => ("opaque", String::new()),
            };
            serde_json::json!({
                "name": s.name,
                "kind": kind,
                "rendering": rendering,
                "requires_smallness": s.requires_smallness,
                "second_order_ish": s.second_order_ish,
                "source": s.source,
            })
        })
        .collect();
    serde_json::json!({ "catalog": entries })
}
