use super::Graph;
use crate::error::{Error, Result};

/// Parses `n <count>` followed by one `u v` pair per line.
///
/// Blank lines are skipped; duplicate and reversed pairs collapse to one edge.
/// Errors carry the 1-based line number.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());

    let (header_line, header) = lines
        .next()
        .ok_or_else(|| Error::input("empty edge list: expected header `n <count>`"))?;
    let mut tokens = header.split_whitespace();
    let n = match (tokens.next(), tokens.next(), tokens.next()) {
        (Some("n"), Some(count), None) => count
            .parse::<usize>()
            .map_err(|_| Error::input_at(header_line, format!("bad vertex count `{count}`")))?,
        _ => {
            return Err(Error::input_at(
                header_line,
                format!("expected header `n <count>`, found `{header}`"),
            ))
        }
    };

    let mut edges = Vec::new();
    for (line_no, line) in lines {
        let mut tokens = line.split_whitespace();
        let (Some(a), Some(b), None) = (tokens.next(), tokens.next(), tokens.next()) else {
            return Err(Error::input_at(line_no, format!("expected `u v`, found `{line}`")));
        };
        let parse = |t: &str| {
            t.parse::<usize>()
                .map_err(|_| Error::input_at(line_no, format!("unparsable vertex `{t}`")))
        };
        let (u, v) = (parse(a)?, parse(b)?);
        if u >= n || v >= n {
            return Err(Error::input_at(
                line_no,
                format!("endpoint out of range: ({u}, {v}) with n = {n}"),
            ));
        }
        if u == v {
            return Err(Error::input_at(line_no, format!("self-loop at vertex {u}")));
        }
        edges.push((u, v));
    }
    Graph::new(n, edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle() {
        let g = parse_edge_list("n 3\n0 1\n1 2\n0 2").unwrap();
        assert_eq!(g, Graph::complete(3).unwrap());
    }

    #[test]
    fn duplicates_collapse() {
        let g = parse_edge_list("n 4\n0 1\n1 0").unwrap();
        assert_eq!(g.n(), 4);
        assert_eq!(g.edges(), &[(0, 1)]);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let line_of = |text: &str| match parse_edge_list(text) {
            Err(Error::Input { line, .. }) => line,
            other => panic!("{other:?}"),
        };
        assert_eq!(line_of("n 2\n0 2"), Some(2));
        assert_eq!(line_of("n 3\n0 1\n\n2 2"), Some(4));
        assert_eq!(line_of("n 3\n0 x"), Some(2));
        assert_eq!(line_of("m 3"), Some(1));
        assert_eq!(line_of("n 3\n0 1 2"), Some(2));
        assert_eq!(line_of(""), None);
    }
}
