//! Parse/serialize round-trip checks: a proptest strategy over arbitrary
//! well-formed files and a seeded generator shared with the acceptance
//! suite.

use proptest::prelude::*;

use inet_core::dsl::{self, NamedNet, NetFile, Query};
use inet_core::net::{build_diagram, Link, NodeId, Polarity, Verdict};
use inet_core::oracle::{random_netfile, SplitMix64};

fn node_name() -> impl Strategy<Value = String> {
    "[a-z][a-z0-9_]{0,5}".prop_map(|s| s)
}

fn arb_netfile() -> impl Strategy<Value = NetFile> {
    let net = (
        prop::collection::btree_set(node_name(), 2..7),
        prop::collection::vec((any::<u16>(), any::<u16>(), any::<bool>()), 0..12),
    )
        .prop_map(|(names, raw_links)| {
            let names: Vec<NodeId> = names.into_iter().map(|n| NodeId::new(n).unwrap()).collect();
            let mut links = Vec::new();
            for (a, b, neg) in raw_links {
                let i = a as usize % names.len();
                let j = b as usize % names.len();
                if i < j {
                    let polarity = if neg {
                        Polarity::Negative
                    } else {
                        Polarity::Positive
                    };
                    links.push(Link::new(names[i].clone(), names[j].clone(), polarity).unwrap());
                }
            }
            // Forward links only: acyclic; contradictions repaired by
            // keeping the first polarity drawn per pair. The text format
            // declares nets by their links, so isolated nodes are dropped.
            let mut seen = std::collections::BTreeSet::new();
            links.retain(|l| seen.insert((l.source.clone(), l.target.clone())));
            build_diagram([], links).expect("forward links are acyclic")
        });
    prop::collection::vec(net, 1..4).prop_flat_map(|diagrams| {
        let nets: Vec<NamedNet> = diagrams
            .into_iter()
            .enumerate()
            .map(|(i, diagram)| NamedNet {
                name: format!("n{i}"),
                diagram,
            })
            .collect();
        let query_slots =
            prop::collection::vec((any::<u16>(), any::<u16>(), any::<u16>(), 0..4u8), 0..5);
        (Just(nets), query_slots).prop_map(|(nets, slots)| {
            let queryable: Vec<usize> = nets
                .iter()
                .enumerate()
                .filter(|(_, n)| !n.diagram.nodes().is_empty())
                .map(|(i, _)| i)
                .collect();
            let queries = if queryable.is_empty() {
                Vec::new()
            } else {
                slots
                    .into_iter()
                    .map(|(n, s, p, e)| {
                        let net = &nets[queryable[n as usize % queryable.len()]];
                        let nodes: Vec<&NodeId> = net.diagram.nodes().iter().collect();
                        Query {
                            net: net.name.clone(),
                            subject: nodes[s as usize % nodes.len()].clone(),
                            predicate: nodes[p as usize % nodes.len()].clone(),
                            expected: match e {
                                0 => Some(Verdict::Positive),
                                1 => Some(Verdict::Negative),
                                2 => Some(Verdict::None),
                                _ => None,
                            },
                        }
                    })
                    .collect()
            };
            NetFile { nets, queries }
        })
    })
}

proptest! {
    #[test]
    fn parse_inverts_serialize(file in arb_netfile()) {
        let text = dsl::serialize(&file);
        let reparsed = dsl::parse(&text).unwrap();
        prop_assert_eq!(&reparsed, &file);
        // Serialization of the reparse is bit-identical: a fixed point.
        prop_assert_eq!(dsl::serialize(&reparsed), text);
    }
}

#[test]
fn seeded_round_trip_batch() {
    let mut rng = SplitMix64::new(0xd51);
    for i in 0..200 {
        let file = random_netfile(&mut rng);
        let text = dsl::serialize(&file);
        let reparsed = dsl::parse(&text).unwrap_or_else(|e| panic!("case {i}: {e}"));
        assert_eq!(reparsed, file, "case {i}");
    }
}
