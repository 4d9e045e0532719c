//! graph6 reading and writing for graphs of at most 62 vertices.
//!
//! Layout: one header byte `n + 63`, then the upper triangle of the adjacency
//! matrix in column order `x(0,1) x(0,2) x(1,2) x(0,3) ...`, zero-padded to a
//! multiple of six bits, each six-bit group written as `value + 63`.

use super::{Graph, GraphError};

pub const GRAPH6_MAX_VERTICES: usize = 62;

pub fn to_graph6(g: &Graph) -> String {
    let n = g.vertex_count();
    assert!(n <= GRAPH6_MAX_VERTICES, "graph6 header supports n <= 62");
    let mut out = String::with_capacity(1 + (n * n.saturating_sub(1) / 2).div_ceil(6));
    out.push((n as u8 + 63) as char);
    let mut group = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            group = (group << 1) | g.has_edge(i, j) as u8;
            filled += 1;
            if filled == 6 {
                out.push((group + 63) as char);
                group = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push(((group << (6 - filled)) + 63) as char);
    }
    out
}

/// Parses one graph6 line. A single trailing newline is tolerated.
pub fn parse_graph6(text: &str) -> Result<Graph, GraphError> {
    parse_graph6_bytes(text.as_bytes())
}

pub fn parse_graph6_bytes(bytes: &[u8]) -> Result<Graph, GraphError> {
    let err = |msg: String| Err(GraphError::Graph6(msg));
    let bytes = bytes.strip_suffix(b"\n").unwrap_or(bytes);
    let Some((&header, body)) = bytes.split_first() else {
        return err("empty input".into());
    };
    if let Some(pos) = bytes.iter().position(|b| !(63..=126).contains(b)) {
        return err(format!(
            "byte {} at offset {pos} outside 63..=126",
            bytes[pos]
        ));
    }
    if header == 126 {
        return err("multi-byte size header (n > 62) not supported".into());
    }
    let n = (header - 63) as usize;
    let bits = n * n.saturating_sub(1) / 2;
    let expected = bits.div_ceil(6);
    if body.len() != expected {
        return err(format!(
            "expected {expected} body bytes for {n} vertices, found {}",
            body.len()
        ));
    }
    let bit = |k: usize| (body[k / 6] - 63) >> (5 - k % 6) & 1 == 1;
    let mut k = 0;
    let mut pairs = Vec::new();
    for j in 1..n {
        for i in 0..j {
            if bit(k) {
                pairs.push((i, j));
            }
            k += 1;
        }
    }
    // padding bits must be zero for the encoding to be canonical
    if (k..expected * 6).any(bit) {
        return err("nonzero padding bits".into());
    }
    Graph::from_edge_list(n, &pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::FamilySpec;

    #[test]
    fn known_encodings() {
        // K2 is "A_", C4 (0-1-2-3-0) is "Cl" under the column ordering
        let k2 = FamilySpec::Complete(2).generate().unwrap();
        assert_eq!(to_graph6(&k2), "A_");
        let c4 = FamilySpec::Cycle(4).generate().unwrap();
        assert_eq!(to_graph6(&c4), "Cl");
        let p = FamilySpec::Petersen.generate().unwrap();
        let back = parse_graph6(&to_graph6(&p)).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn five_vertex_strings_round_trip() {
        // canonical strings, each a connected 5-vertex graph
        for s in ["D?{", "DQw", "D`{", "DR{", "D~{", "DBw", "Dhc"] {
            let g = parse_graph6(s).unwrap_or_else(|e| panic!("{s}: {e}"));
            assert_eq!(to_graph6(&g), s);
        }
    }

    #[test]
    fn rejects_malformed_input() {
        assert!(matches!(parse_graph6(""), Err(GraphError::Graph6(_))));
        let bad_byte = String::from_utf8_lossy(&[b'D', 200, b'{']).into_owned();
        assert!(matches!(
            parse_graph6(&bad_byte),
            Err(GraphError::Graph6(_))
        ));
        assert!(matches!(parse_graph6("D?{?"), Err(GraphError::Graph6(_))));
        assert!(matches!(parse_graph6("D?"), Err(GraphError::Graph6(_))));
        assert!(matches!(parse_graph6("D?{ "), Err(GraphError::Graph6(_))));
        assert!(matches!(parse_graph6("~??"), Err(GraphError::Graph6(_))));
        // two disjoint edges on four vertices
        assert_eq!(parse_graph6("C`").unwrap_err().code(), "disconnected");
    }

    #[test]
    fn byte_value_200_is_rejected() {
        match parse_graph6_bytes(&[b'D', 200, b'{']) {
            Err(GraphError::Graph6(msg)) => assert!(msg.contains("200"), "{msg}"),
            other => panic!("unexpected {other:?}"),
        }
    }
}
