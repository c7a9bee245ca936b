//! Finite loops given by Cayley tables.

use std::convert::Infallible;
use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::carrier::{InverseConvention, LoopCarrier, Side};
use crate::identity::{holds, Counterexample, Law};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Line {
    Row,
    Column,
}

impl fmt::Display for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Line::Row => "row",
            Line::Column => "column",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableError {
    #[error("bad shape: {0}")]
    BadShape(String),
    #[error("entry {value} at ({row}, {col}) is out of range")]
    EntryOutOfRange { row: usize, col: usize, value: usize },
    #[error("Latin square violation: {line} {index} is not a permutation")]
    LatinViolation { line: Line, index: usize },
    #[error("no two-sided identity element")]
    NoIdentity,
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// A finite loop: an n×n Latin square with a two-sided identity.
///
/// `table[x*n + y]` is the product `x·y`. Left and right division tables are
/// precomputed at validation.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LoopTable {
    n: usize,
    table: Vec<usize>,
    ldiv: Vec<usize>,
    rdiv: Vec<usize>,
    e: usize,
}

impl LoopTable {
    /// Validates a square array of element indices as a loop.
    pub fn validate(rows: &[Vec<usize>]) -> Result<LoopTable, TableError> {
        let n = rows.len();
        if n == 0 {
            return Err(TableError::BadShape("empty table".into()));
        }
        let mut table = Vec::with_capacity(n * n);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(TableError::BadShape(format!("row {r} has {} entries, expected {n}", row.len())));
            }
            for (c, &value) in row.iter().enumerate() {
                if value >= n {
                    return Err(TableError::EntryOutOfRange { row: r, col: c, value });
                }
            }
            table.extend_from_slice(row);
        }
        Self::from_flat(n, table)
    }

    /// Like [`validate`](Self::validate) for a row-major flat array of length n².
    pub fn from_flat(n: usize, table: Vec<usize>) -> Result<LoopTable, TableError> {
        if n == 0 || table.len() != n * n {
            return Err(TableError::BadShape(format!("expected {} entries, got {}", n * n, table.len())));
        }
        if let Some(pos) = table.iter().position(|&v| v >= n) {
            return Err(TableError::EntryOutOfRange { row: pos / n, col: pos % n, value: table[pos] });
        }
        let mut seen = vec![false; n];
        for r in 0..n {
            seen.fill(false);
            for c in 0..n {
                let v = table[r * n + c];
                if std::mem::replace(&mut seen[v], true) {
                    return Err(TableError::LatinViolation { line: Line::Row, index: r });
                }
            }
        }
        for c in 0..n {
            seen.fill(false);
            for r in 0..n {
                let v = table[r * n + c];
                if std::mem::replace(&mut seen[v], true) {
                    return Err(TableError::LatinViolation { line: Line::Column, index: c });
                }
            }
        }
        let e = (0..n)
            .find(|&e| (0..n).all(|x| table[e * n + x] == x && table[x * n + e] == x))
            .ok_or(TableError::NoIdentity)?;

        let mut ldiv = vec![0; n * n];
        let mut rdiv = vec![0; n * n];
        for x in 0..n {
            for y in 0..n {
                let p = table[x * n + y];
                ldiv[x * n + p] = y;
                rdiv[y * n + p] = x;
            }
        }
        Ok(LoopTable { n, table, ldiv, rdiv, e })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn identity_element(&self) -> usize {
        self.e
    }

    pub fn rows(&self) -> impl Iterator<Item = &[usize]> {
        self.table.chunks(self.n)
    }

    pub fn as_flat(&self) -> &[usize] {
        &self.table
    }

    #[inline]
    pub fn product(&self, x: usize, y: usize) -> usize {
        self.table[x * self.n + y]
    }

    /// `div(Left, a, b)` solves `a·x = b`; `div(Right, a, b)` solves `x·a = b`.
    #[inline]
    pub fn divide(&self, side: Side, a: usize, b: usize) -> usize {
        match side {
            Side::Left => self.ldiv[a * self.n + b],
            Side::Right => self.rdiv[a * self.n + b],
        }
    }

    /// `inverse(Left, x) = e/x` and `inverse(Right, x) = x\e`.
    pub fn inverse(&self, side: Side, x: usize) -> usize {
        match side {
            Side::Left => self.divide(Side::Right, x, self.e),
            Side::Right => self.divide(Side::Left, x, self.e),
        }
    }

    /// The principal isotope with `x∘y = (x/b)·(a\y)`. Its identity is `a·b`.
    pub fn principal_isotope(&self, a: usize, b: usize) -> LoopTable {
        let n = self.n;
        let mut table = Vec::with_capacity(n * n);
        for x in 0..n {
            let xb = self.divide(Side::Right, b, x);
            for y in 0..n {
                table.push(self.product(xb, self.divide(Side::Left, a, y)));
            }
        }
        LoopTable::from_flat(n, table).expect("principal isotopes of loops are loops")
    }

    /// Checks `law` on every principal isotope. Scan order is `a`-major, then
    /// `b`, then assignments lexicographically; the first failure in that order
    /// is returned regardless of how the work is split across threads.
    pub fn is_universal(&self, law: &Law, conv: InverseConvention) -> Option<IsotopeWitness> {
        let n = self.n;
        (0..n * n).into_par_iter().find_map_first(|idx| {
            let (a, b) = (idx / n, idx % n);
            holds(&self.principal_isotope(a, b), law, conv).map(|counterexample| IsotopeWitness {
                a,
                b,
                counterexample,
            })
        })
    }

    /// Intersection of the left, middle and right nuclei.
    pub fn nucleus(&self) -> Vec<usize> {
        let n = self.n;
        let m = |x, y| self.product(x, y);
        (0..n)
            .filter(|&x| {
                (0..n).all(|y| {
                    (0..n).all(|z| {
                        m(x, m(y, z)) == m(m(x, y), z)
                            && m(y, m(x, z)) == m(m(y, x), z)
                            && m(y, m(z, x)) == m(m(y, z), x)
                    })
                })
            })
            .collect()
    }

    /// Parses the text format: optional `#` comment lines, the order `n`,
    /// then `n` lines of `n` whitespace-separated entries.
    pub fn from_text(text: &str) -> Result<LoopTable, TableError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (line_no, first) =
            lines.next().ok_or_else(|| TableError::Parse { line: 1, message: "missing order line".into() })?;
        let n: usize = first.parse().map_err(|_| TableError::Parse {
            line: line_no,
            message: format!("expected the order, found `{first}`"),
        })?;
        if n == 0 {
            return Err(TableError::BadShape("order must be positive".into()));
        }
        let mut rows = Vec::with_capacity(n);
        for (line_no, line) in lines {
            let row = line
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<usize>().map_err(|_| TableError::Parse {
                        line: line_no,
                        message: format!("`{tok}` is not a non-negative integer"),
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            rows.push(row);
        }
        if rows.len() != n {
            return Err(TableError::BadShape(format!("expected {n} rows, found {}", rows.len())));
        }
        LoopTable::validate(&rows)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.n);
        for row in self.rows() {
            let line: Vec<String> = row.iter().map(usize::to_string).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }
}

impl fmt::Debug for LoopTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LoopTable(n={}, e={}, {:?})", self.n, self.e, self.rows().collect::<Vec<_>>())
    }
}

impl LoopCarrier for LoopTable {
    type Elem = usize;
    type Error = Infallible;

    fn identity(&self) -> usize {
        self.e
    }

    fn mul(&self, x: &usize, y: &usize) -> Result<usize, Infallible> {
        Ok(self.product(*x, *y))
    }

    fn div(&self, side: Side, a: &usize, b: &usize) -> Result<usize, Infallible> {
        Ok(self.divide(side, *a, *b))
    }
}

/// First principal isotope `(a, b)` on which a law fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsotopeWitness {
    pub a: usize,
    pub b: usize,
    pub counterexample: Counterexample,
}

/// Small reference loops.
pub mod fixtures {
    use super::LoopTable;

    pub fn cyclic(n: usize) -> LoopTable {
        LoopTable::from_flat(n, (0..n * n).map(|i| (i / n + i % n) % n).collect()).unwrap()
    }

    /// S₃ as permutations of {0,1,2}, listed with the identity first.
    pub fn symmetric3() -> LoopTable {
        let perms: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let index = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap();
        let rows: Vec<Vec<usize>> = perms
            .iter()
            .map(|p| {
                perms
                    .iter()
                    // (p·q)(i) = p(q(i))
                    .map(|q| index([p[q[0]], p[q[1]], p[q[2]]]))
                    .collect()
            })
            .collect();
        LoopTable::validate(&rows).unwrap()
    }

    /// ℤ₂ × ℤ₂.
    pub fn klein() -> LoopTable {
        LoopTable::from_flat(4, (0..16).map(|i| (i / 4) ^ (i % 4)).collect()).unwrap()
    }

    /// The group fixtures ℤ₄, ℤ₅, ℤ₆, S₃.
    pub fn groups() -> Vec<LoopTable> {
        vec![cyclic(4), cyclic(5), cyclic(6), symmetric3()]
    }

    /// A non-associative loop of order 5 whose left and right inverses differ.
    pub fn nonassociative5() -> LoopTable {
        LoopTable::validate(&[
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 3, 4, 0, 1],
            vec![3, 4, 1, 2, 0],
            vec![4, 2, 0, 1, 3],
        ])
        .unwrap()
    }

    pub fn all() -> Vec<LoopTable> {
        let mut v = vec![cyclic(1), cyclic(2), cyclic(3), klein()];
        v.extend(groups());
        v.push(nonassociative5());
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::identity::{builtin, eval_law, Env};

    #[test]
    fn validate_examples() {
        let z3 = LoopTable::validate(&[vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]]).unwrap();
        assert_eq!(z3.identity_element(), 0);
        assert_eq!(z3, fixtures::cyclic(3));
        assert_eq!(
            LoopTable::validate(&[vec![0, 1], vec![1, 1]]),
            Err(TableError::LatinViolation { line: Line::Row, index: 1 })
        );
        assert!(matches!(LoopTable::validate(&[vec![0, 1], vec![1]]), Err(TableError::BadShape(_))));
        assert!(matches!(LoopTable::validate(&[]), Err(TableError::BadShape(_))));
        assert_eq!(
            LoopTable::validate(&[vec![0, 5], vec![1, 0]]),
            Err(TableError::EntryOutOfRange { row: 0, col: 1, value: 5 })
        );
        assert_eq!(
            LoopTable::validate(&[vec![0, 1], vec![0, 1]]),
            Err(TableError::LatinViolation { line: Line::Column, index: 0 })
        );
    }

    #[test]
    fn identity_is_detected_anywhere() {
        // 1 is a two-sided identity here: this is Z2 relabeled.
        let relabeled = LoopTable::validate(&[vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(relabeled.identity_element(), 1);
        let z3_shifted = LoopTable::validate(&[vec![2, 0, 1], vec![0, 1, 2], vec![1, 2, 0]]).unwrap();
        assert_eq!(z3_shifted.identity_element(), 1);
        // x*y = -x-y mod 3 is a quasigroup without identity.
        let idempotent = LoopTable::validate(&[vec![0, 2, 1], vec![2, 1, 0], vec![1, 0, 2]]);
        assert_eq!(idempotent, Err(TableError::NoIdentity));
    }

    #[test]
    fn z3_operations() {
        let z3 = fixtures::cyclic(3);
        assert_eq!(z3.product(1, 2), 0);
        assert_eq!(z3.divide(Side::Left, 1, 2), 1);
        assert_eq!(z3.inverse(Side::Left, 1), 2);
    }

    #[test]
    fn division_round_trips() {
        for t in fixtures::all() {
            let e = t.identity_element();
            for a in 0..t.order() {
                assert_eq!(t.divide(Side::Left, a, a), e);
                assert_eq!(t.divide(Side::Right, a, a), e);
                for b in 0..t.order() {
                    assert_eq!(t.product(a, t.divide(Side::Left, a, b)), b);
                    assert_eq!(t.product(t.divide(Side::Right, a, b), a), b);
                }
                assert_eq!(t.product(t.inverse(Side::Left, a), a), e);
                assert_eq!(t.product(a, t.inverse(Side::Right, a)), e);
            }
        }
    }

    #[test]
    fn group_inverses_agree() {
        for g in fixtures::groups() {
            for x in 0..g.order() {
                assert_eq!(g.inverse(Side::Left, x), g.inverse(Side::Right, x));
            }
        }
    }

    #[test]
    fn nonassociative_loop_has_distinct_inverses() {
        let t = fixtures::nonassociative5();
        assert!(holds(&t, &builtin("associative").unwrap(), InverseConvention::Right).is_some());
        assert!((0..5).any(|x| t.inverse(Side::Left, x) != t.inverse(Side::Right, x)));
    }

    #[test]
    fn isotope_examples() {
        let z3 = fixtures::cyclic(3);
        assert_eq!(z3.principal_isotope(0, 0), z3);
        assert_eq!(z3.principal_isotope(1, 1).identity_element(), 2);
        let z5 = fixtures::cyclic(5);
        for a in 0..5 {
            for b in 0..5 {
                assert_eq!(z5.principal_isotope(a, b).identity_element(), z5.product(a, b));
            }
        }
        let t = fixtures::nonassociative5();
        for a in 0..5 {
            for b in 0..5 {
                assert_eq!(t.principal_isotope(a, b).identity_element(), t.product(a, b));
            }
        }
    }

    #[test]
    fn universality_examples() {
        let osborn = builtin("osborn").unwrap();
        let conv = InverseConvention::Right;
        assert_eq!(fixtures::cyclic(5).is_universal(&osborn, conv), None);
        let trivial = Law::parse("x*y=x*y").unwrap();
        for t in fixtures::all() {
            assert_eq!(t.is_universal(&trivial, conv), None);
        }
        let s3 = fixtures::symmetric3();
        let w = s3.is_universal(&builtin("commutative").unwrap(), conv).unwrap();
        assert_eq!((w.a, w.b), (0, 0));
    }

    #[test]
    fn universality_witness_refails() {
        let t = fixtures::nonassociative5();
        for law in ["associative", "commutative", "moufang", "osborn", "lip"] {
            let law = builtin(law).unwrap();
            for conv in InverseConvention::ALL {
                if let Some(w) = t.is_universal(&law, conv) {
                    let iso = t.principal_isotope(w.a, w.b);
                    let env = w.counterexample.assignment.iter().fold(Env::new(), |env, &(v, x)| env.with(v, x));
                    let (l, r) = eval_law(&law, &env, &iso, conv).unwrap();
                    assert_ne!(l, r);
                }
            }
        }
    }

    #[test]
    fn nucleus_examples() {
        assert_eq!(fixtures::cyclic(3).nucleus(), vec![0, 1, 2]);
        assert_eq!(fixtures::symmetric3().nucleus(), (0..6).collect::<Vec<_>>());
        for t in fixtures::all() {
            assert!(t.nucleus().contains(&t.identity_element()));
        }
        assert_eq!(fixtures::nonassociative5().nucleus(), vec![0]);
    }

    #[test]
    fn text_format() {
        let text = "# S3\n6\n0 1 2 3 4 5\n1 0 3 2 5 4\n2 4 0 5 1 3\n3 5 1 4 0 2\n4 2 5 0 3 1\n5 3 4 1 2 0\n";
        let t = LoopTable::from_text(text).unwrap();
        assert_eq!(LoopTable::from_text(&t.to_text()).unwrap(), t);
        assert!(!t.to_text().contains('#'));
        assert!(matches!(LoopTable::from_text("2\n0 1\n1 x\n"), Err(TableError::Parse { line: 3, .. })));
        assert!(matches!(LoopTable::from_text("3\n0 1 2\n"), Err(TableError::BadShape(_))));
        assert!(matches!(LoopTable::from_text("# only\n"), Err(TableError::Parse { .. })));
        assert_eq!(
            LoopTable::from_text("2\n0 1\n1 1\n"),
            Err(TableError::LatinViolation { line: Line::Row, index: 1 })
        );
    }
}
