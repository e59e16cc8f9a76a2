//! graph6 codec, short form only (n <= 62).
//!
//! The body is the upper triangle of the adjacency matrix read column by
//! column (`x(0,1) x(0,2) x(1,2) x(0,3) ...`), packed six bits per byte,
//! big-endian within the group, each group offset by 63 and zero padded.

use super::{bit, Graph};
use crate::error::{Error, Result};

pub const GRAPH6_MAX_VERTICES: usize = 62;

const OFFSET: u8 = 63;
const HEADER: &str = ">>graph6<<";

fn codec(offset: usize, reason: impl Into<String>) -> Error {
    Error::Codec {
        offset,
        reason: reason.into(),
    }
}

pub fn parse_graph6(text: &str) -> Result<Graph> {
    let line = text.trim_end_matches(['\n', '\r']);
    let (base, line) = match line.strip_prefix(HEADER) {
        Some(rest) => (HEADER.len(), rest),
        None => (0, line),
    };
    let bytes = line.as_bytes();
    let Some(&first) = bytes.first() else {
        return Err(codec(base, "empty input"));
    };
    match first {
        b':' => return Err(codec(base, "sparse6 input is not supported")),
        b'&' => return Err(codec(base, "digraph6 input is not supported")),
        126 => {
            return Err(codec(
                base,
                format!("long-form size header (n > {GRAPH6_MAX_VERTICES}) is not supported"),
            ))
        }
        63..=125 => {}
        other => return Err(codec(base, format!("byte {other} outside 63..=126"))),
    }
    let n = (first - OFFSET) as usize;
    let bits = n * n.saturating_sub(1) / 2;
    let expected = bits.div_ceil(6);
    let body = &bytes[1..];
    if body.len() != expected {
        let at = base + 1 + body.len().min(expected);
        return Err(codec(
            at,
            format!(
                "expected {expected} data bytes for n = {n}, found {}",
                body.len()
            ),
        ));
    }

    let mut adj = vec![0u64; n];
    let mut k = 0;
    for v in 1..n {
        for u in 0..v {
            let byte_at = k / 6;
            let raw = body[byte_at];
            if !(63..=126).contains(&raw) {
                return Err(codec(base + 1 + byte_at, format!("byte {raw} outside 63..=126")));
            }
            if (raw - OFFSET) >> (5 - k % 6) & 1 == 1 {
                adj[u] |= bit(v);
                adj[v] |= bit(u);
            }
            k += 1;
        }
    }
    if let Some(&last) = body.last() {
        if !(63..=126).contains(&last) {
            return Err(codec(base + body.len(), format!("byte {last} outside 63..=126")));
        }
        let pad = expected * 6 - bits;
        if (last - OFFSET) & ((1u8 << pad) - 1) != 0 {
            return Err(codec(base + body.len(), "nonzero padding bits"));
        }
    }
    Ok(Graph::from_adjacency(adj))
}

pub fn emit_graph6(g: &Graph) -> Result<String> {
    let n = g.n();
    if n > GRAPH6_MAX_VERTICES {
        return Err(Error::UnsupportedSize {
            n,
            max: GRAPH6_MAX_VERTICES,
        });
    }
    let bits = n * n.saturating_sub(1) / 2;
    let mut out = Vec::with_capacity(1 + bits.div_ceil(6));
    out.push(OFFSET + n as u8);
    let mut group = 0u8;
    let mut k = 0;
    for v in 1..n {
        for u in 0..v {
            group = group << 1 | g.has_edge(u, v) as u8;
            k += 1;
            if k % 6 == 0 {
                out.push(OFFSET + group);
                group = 0;
            }
        }
    }
    if k % 6 != 0 {
        out.push(OFFSET + (group << (6 - k % 6)));
    }
    Ok(String::from_utf8(out).expect("graph6 bytes are ASCII"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::tests::arb_graph;
    use proptest::prelude::*;

    #[test]
    fn known_encodings() {
        let k3 = parse_graph6("Bw").unwrap();
        assert_eq!(k3.edges(), &[(0, 1), (0, 2), (1, 2)]);
        assert_eq!(parse_graph6("C~").unwrap(), Graph::complete(4).unwrap());
        let c5 = parse_graph6("Dhc").unwrap();
        assert_eq!(c5.edges(), &[(0, 1), (0, 4), (1, 2), (2, 3), (3, 4)]);

        assert_eq!(emit_graph6(&Graph::complete(3).unwrap()).unwrap(), "Bw");
        assert_eq!(emit_graph6(&Graph::complete(4).unwrap()).unwrap(), "C~");
        assert_eq!(emit_graph6(&Graph::empty(1).unwrap()).unwrap(), "@");
        assert_eq!(emit_graph6(&Graph::cycle(5).unwrap()).unwrap(), "Dhc");
    }

    #[test]
    fn header_and_newline_are_accepted() {
        assert_eq!(parse_graph6(">>graph6<<Bw\n").unwrap().edge_count(), 3);
    }

    #[test]
    fn malformed_input_names_offset() {
        match parse_graph6("Bwa") {
            Err(Error::Codec { offset, .. }) => assert_eq!(offset, 2),
            other => panic!("{other:?}"),
        }
        match parse_graph6("C") {
            Err(Error::Codec { offset, .. }) => assert_eq!(offset, 1),
            other => panic!("{other:?}"),
        }
        // 'x' = 63 + 57 = 0b111001: the low padding bits of K3's byte are set.
        match parse_graph6("Bx") {
            Err(Error::Codec { offset, reason }) => {
                assert_eq!(offset, 1);
                assert!(reason.contains("padding"));
            }
            other => panic!("{other:?}"),
        }
        match parse_graph6("D h") {
            Err(Error::Codec { offset, .. }) => assert_eq!(offset, 1),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_graph6(":Bw"), Err(Error::Codec { offset: 0, .. })));
        assert!(matches!(parse_graph6("~??"), Err(Error::Codec { offset: 0, .. })));
        assert!(parse_graph6("").is_err());
    }

    #[test]
    fn oversized_graph_is_rejected() {
        let g = Graph::empty(63).unwrap();
        assert!(matches!(
            emit_graph6(&g),
            Err(Error::UnsupportedSize { n: 63, max: 62 })
        ));
    }

    proptest! {
        #[test]
        fn round_trip(g in arb_graph(20)) {
            let text = emit_graph6(&g).unwrap();
            prop_assert_eq!(parse_graph6(&text).unwrap(), g);
        }
    }

    #[test]
    fn round_trip_at_size_limit() {
        let g = Graph::new(62, (0..61).map(|i| (i, i + 1)).chain([(0, 61), (3, 40)])).unwrap();
        assert_eq!(parse_graph6(&emit_graph6(&g).unwrap()).unwrap(), g);
    }
}
