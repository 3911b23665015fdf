//! The shipped diagram corpus: the classic nets with their expected
//! verdicts, embedded so tests and the CLI agree on one source.

use crate::dsl::{self, NetFile};
use crate::net::Diagram;

/// The corpus file as shipped (`corpus/corpus.inet`).
pub const CORPUS_INET: &str = include_str!("../corpus/corpus.inet");

/// Parses the embedded corpus. The file is validated by tests, so this
/// cannot fail at runtime.
pub fn corpus() -> NetFile {
    dsl::parse(CORPUS_INET).expect("embedded corpus parses")
}

fn diagram(name: &str) -> Diagram {
    corpus()
        .net(name)
        .unwrap_or_else(|| panic!("corpus net {name}"))
        .diagram
        .clone()
}

pub fn tweety() -> Diagram {
    diagram("tweety")
}

pub fn nixon() -> Diagram {
    diagram("nixon")
}

pub fn updown() -> Diagram {
    diagram("updown")
}

pub fn splittotal() -> Diagram {
    diagram("splittotal")
}

pub fn inheruniv() -> Diagram {
    diagram("inheruniv")
}

pub fn dovis1() -> Diagram {
    diagram("dovis1")
}

/// Every corpus diagram, in file order.
pub fn all_diagrams() -> Vec<Diagram> {
    corpus().nets.into_iter().map(|n| n.diagram).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_parses_and_names_resolve() {
        let file = corpus();
        let names: Vec<&str> = file.nets.iter().map(|n| n.name.as_str()).collect();
        assert_eq!(
            names,
            vec![
                "tweety",
                "nixon",
                "updown",
                "splittotal",
                "inheruniv",
                "dovis1"
            ]
        );
        assert!(!file.queries.is_empty());
    }

    #[test]
    fn corpus_round_trips() {
        let file = corpus();
        let text = dsl::serialize(&file);
        assert_eq!(dsl::parse(&text).unwrap(), file);
    }
}
