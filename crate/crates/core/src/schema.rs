//! The axiom-schema catalog and schema instantiation.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::formula::{Formula, METAVARIABLES};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum SchemaId {
    L1,
    L2,
    L3,
    J1,
    J2,
    J3,
    J4,
    J5,
    M,
    P,
    M0,
    W,
    Wstar,
    P0,
    R,
    Rstar,
}

impl SchemaId {
    pub const ALL: [SchemaId; 16] = [
        SchemaId::L1,
        SchemaId::L2,
        SchemaId::L3,
        SchemaId::J1,
        SchemaId::J2,
        SchemaId::J3,
        SchemaId::J4,
        SchemaId::J5,
        SchemaId::M,
        SchemaId::P,
        SchemaId::M0,
        SchemaId::W,
        SchemaId::Wstar,
        SchemaId::P0,
        SchemaId::R,
        SchemaId::Rstar,
    ];

    /// The axioms of the base logic IL.
    pub const IL: [SchemaId; 8] = [
        SchemaId::L1,
        SchemaId::L2,
        SchemaId::L3,
        SchemaId::J1,
        SchemaId::J2,
        SchemaId::J3,
        SchemaId::J4,
        SchemaId::J5,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SchemaId::L1 => "L1",
            SchemaId::L2 => "L2",
            SchemaId::L3 => "L3",
            SchemaId::J1 => "J1",
            SchemaId::J2 => "J2",
            SchemaId::J3 => "J3",
            SchemaId::J4 => "J4",
            SchemaId::J5 => "J5",
            SchemaId::M => "M",
            SchemaId::P => "P",
            SchemaId::M0 => "M0",
            SchemaId::W => "W",
            SchemaId::Wstar => "Wstar",
            SchemaId::P0 => "P0",
            SchemaId::R => "R",
            SchemaId::Rstar => "Rstar",
        }
    }

    pub fn is_il_axiom(self) -> bool {
        SchemaId::IL.contains(&self)
    }

    fn body_text(self) -> &'static str {
        match self {
            SchemaId::L1 => "[](A -> B) -> ([]A -> []B)",
            SchemaId::L2 => "[]A -> [][]A",
            SchemaId::L3 => "[]([]A -> A) -> []A",
            SchemaId::J1 => "[](A -> B) -> A |> B",
            SchemaId::J2 => "(A |> B) & (B |> C) -> A |> C",
            SchemaId::J3 => "(A |> C) & (B |> C) -> A | B |> C",
            SchemaId::J4 => "A |> B -> (<>A -> <>B)",
            SchemaId::J5 => "<>A |> A",
            SchemaId::M => "A |> B -> A & []C |> B & []C",
            SchemaId::P => "A |> B -> [](A |> B)",
            SchemaId::M0 => "A |> B -> <>A & []C |> B & []C",
            SchemaId::W => "A |> B -> A |> B & []~A",
            SchemaId::Wstar => "A |> B -> B & []C |> B & []C & []~A",
            SchemaId::P0 => "A |> <>B -> [](A |> B)",
            SchemaId::R => "A |> B -> ~(A |> ~C) |> B & []C",
            SchemaId::Rstar => "A |> B -> ~(A |> ~C) |> B & []C & []~A",
        }
    }

    pub fn schema(self) -> &'static Schema {
        static CATALOG: OnceLock<Vec<Schema>> = OnceLock::new();
        let catalog = CATALOG.get_or_init(|| {
            SchemaId::ALL
                .iter()
                .map(|&id| Schema {
                    id,
                    body: Formula::parse_schema(id.body_text())
                        .expect("catalog bodies are well-formed"),
                })
                .collect()
        });
        &catalog[self as usize]
    }
}

impl fmt::Display for SchemaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchemaId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let id = match t {
            "W*" => SchemaId::Wstar,
            "R*" => SchemaId::Rstar,
            _ => *SchemaId::ALL
                .iter()
                .find(|id| id.name().eq_ignore_ascii_case(t))
                .ok_or_else(|| Error::UnknownSchema(t.to_string()))?,
        };
        Ok(id)
    }
}

/// Parses a comma-separated list of schema ids.
pub fn parse_schema_list(s: &str) -> Result<Vec<SchemaId>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(SchemaId::from_str)
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Schema {
    pub id: SchemaId,
    pub body: Formula,
}

impl Schema {
    /// Metavariables occurring in the body, in `A, B, C` order.
    pub fn metavariables(&self) -> Vec<&'static str> {
        let atoms = self.body.atoms();
        METAVARIABLES.iter().copied().filter(|m| atoms.contains(*m)).collect()
    }

    /// Homomorphic substitution of formulas for metavariables.
    pub fn instantiate(&self, subst: &BTreeMap<String, Formula>) -> Result<Formula> {
        for m in self.metavariables() {
            if !subst.contains_key(m) {
                return Err(Error::MissingBinding(m.to_string()));
            }
        }
        Ok(self.body.substitute(&|name| subst.get(name).cloned()))
    }
}

pub fn instantiate(s: &Schema, subst: &BTreeMap<String, Formula>) -> Result<Formula> {
    s.instantiate(subst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn subst(pairs: &[(&str, &str)]) -> BTreeMap<String, Formula> {
        pairs
            .iter()
            .map(|(k, v)| (k.to_string(), Formula::parse(v).unwrap()))
            .collect()
    }

    #[test]
    fn catalog_has_sixteen_parseable_schemata() {
        assert_eq!(SchemaId::ALL.len(), 16);
        for id in SchemaId::ALL {
            assert_eq!(id.schema().id, id);
            assert_eq!(id.name().parse::<SchemaId>().unwrap(), id);
        }
    }

    #[test]
    fn instantiates_r() {
        let f = SchemaId::R
            .schema()
            .instantiate(&subst(&[("A", "p"), ("B", "q"), ("C", "r")]))
            .unwrap();
        assert_eq!(f, Formula::parse("p|>q -> ~(p|>~r) |> q & []r").unwrap());
    }

    #[test]
    fn instantiates_p0_and_l2() {
        let f = SchemaId::P0.schema().instantiate(&subst(&[("A", "p"), ("B", "q")])).unwrap();
        assert_eq!(f, Formula::parse("p |> <>q -> [](p |> q)").unwrap());
        let g = SchemaId::L2.schema().instantiate(&subst(&[("A", "false")])).unwrap();
        assert_eq!(g, Formula::parse("[]false -> [][]false").unwrap());
    }

    #[test]
    fn missing_binding_is_an_error() {
        let err = SchemaId::R.schema().instantiate(&subst(&[("A", "p"), ("B", "q")]));
        assert_eq!(err, Err(Error::MissingBinding("C".into())));
    }

    #[test]
    fn object_atoms_are_untouched() {
        // A substitution that maps metavariables to themselves leaves the body as is.
        let s = SchemaId::J2.schema();
        let id: BTreeMap<String, Formula> = s
            .metavariables()
            .into_iter()
            .map(|m| (m.to_string(), Formula::atom(m)))
            .collect();
        assert_eq!(s.instantiate(&id).unwrap(), s.body);
    }

    #[test]
    fn rstar_extends_r_consequent() {
        let r = &SchemaId::R.schema().body;
        let rstar = &SchemaId::Rstar.schema().body;
        let Formula::Implies(r_ante, r_cons) = r else { panic!() };
        let Formula::Rhd(r_left, r_right) = &**r_cons else { panic!() };
        let not_a_boxed = Formula::boxed(Formula::not(Formula::atom("A")));
        let expected = Formula::implies(
            (**r_ante).clone(),
            Formula::rhd((**r_left).clone(), Formula::and((**r_right).clone(), not_a_boxed)),
        );
        assert_eq!(*rstar, expected);
    }

    #[test]
    fn parses_lists_with_star_spellings() {
        assert_eq!(
            parse_schema_list("P0, W*,R").unwrap(),
            vec![SchemaId::P0, SchemaId::Wstar, SchemaId::R]
        );
        assert!(parse_schema_list("Q").is_err());
    }
}
