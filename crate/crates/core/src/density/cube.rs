//! Gaussian cube reader and writer.
//!
//! Layout: two comment lines; `natoms ox oy oz`; three lines `n_i sx sy sz`;
//! `natoms` lines `Z charge x y z`; then `n1*n2*n3` values, third index
//! fastest. Lengths are Bohr in the file and angstrom in memory. Values are
//! carried through unchanged.

use std::fmt::Write as _;

use thiserror::Error;

use super::{Atom, GridField, SpinDensityField, Vec3, BOHR_TO_ANGSTROM};
use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CubeError {
    #[error("cube input is not valid UTF-8")]
    NotUtf8,

    #[error("line {line}: unexpected end of input while reading {what}")]
    Truncated { line: usize, what: &'static str },

    #[error("line {line}: malformed header: {msg}")]
    Header { line: usize, msg: String },

    #[error("line {line}: atom count mismatch (header declares {declared}, found {found})")]
    AtomCountMismatch { line: usize, declared: usize, found: usize },

    #[error("line {line}: non-numeric token '{token}'")]
    NonNumeric { line: usize, token: String },

    #[error("line {line}: inconsistent value count (expected {expected}, found {found})")]
    ValueCount { line: usize, expected: usize, found: usize },
}

fn float(token: &str, line: usize) -> Result<f64, CubeError> {
    token.parse::<f64>().map_err(|_| CubeError::NonNumeric {
        line,
        token: token.to_string(),
    })
}

fn integer(token: &str, line: usize, what: &str) -> Result<i64, CubeError> {
    token.parse::<i64>().map_err(|_| CubeError::Header {
        line,
        msg: format!("expected integer {what}, found '{token}'"),
    })
}

/// Parses `natoms/n_i` followed by a 3-vector.
fn count_and_vector(text: &str, line: usize, what: &str) -> Result<(i64, [f64; 3]), CubeError> {
    let tokens: Vec<&str> = text.split_whitespace().collect();
    if tokens.len() < 4 || tokens.len() > 5 {
        return Err(CubeError::Header {
            line,
            msg: format!(
                "expected {what} followed by 3 coordinates, found {} tokens",
                tokens.len()
            ),
        });
    }
    let n = integer(tokens[0], line, what)?;
    let mut v = [0.0; 3];
    for (slot, tok) in v.iter_mut().zip(&tokens[1..4]) {
        *slot = float(tok, line)?;
    }
    Ok((n, v))
}

fn to_angstrom<T: Scalar>(v: [f64; 3]) -> Vec3<T> {
    v.map(|c| T::lit(c * BOHR_TO_ANGSTROM))
}

/// Reads a cube file into a grid field.
pub fn parse_cube<T: Scalar>(bytes: &[u8]) -> Result<SpinDensityField<T>, CubeError> {
    let text = std::str::from_utf8(bytes).map_err(|_| CubeError::NotUtf8)?;
    parse_cube_str(text)
}

pub fn parse_cube_str<T: Scalar>(text: &str) -> Result<SpinDensityField<T>, CubeError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let mut next = |what: &'static str, last: usize| lines.next().ok_or(CubeError::Truncated { line: last + 1, what });

    let (l1, _) = next("comment line 1", 0)?;
    let (l2, _) = next("comment line 2", l1)?;

    let (l3, header) = next("atom count and origin", l2)?;
    let (natoms, origin) = count_and_vector(header, l3, "atom count")?;
    if natoms < 0 {
        return Err(CubeError::Header {
            line: l3,
            msg: "negative atom count (orbital cubes are not supported)".into(),
        });
    }
    let natoms = natoms as usize;

    let mut dims = [0usize; 3];
    let mut steps = [[0.0f64; 3]; 3];
    let mut last = l3;
    for axis in 0..3 {
        let (ln, text) = next("voxel axis", last)?;
        let (n, step) = count_and_vector(text, ln, "voxel count")?;
        if n < 0 {
            return Err(CubeError::Header {
                line: ln,
                msg: "negative voxel count (angstrom-unit cubes are not supported)".into(),
            });
        }
        if n < 2 {
            return Err(CubeError::Header {
                line: ln,
                msg: format!("voxel count must be at least 2, found {n}"),
            });
        }
        dims[axis] = n as usize;
        steps[axis] = step;
        last = ln;
    }

    let mut atoms = Vec::with_capacity(natoms);
    for found in 0..natoms {
        let Some((ln, text)) = lines.next() else {
            return Err(CubeError::AtomCountMismatch {
                line: last + 1,
                declared: natoms,
                found,
            });
        };
        let tokens: Vec<&str> = text.split_whitespace().collect();
        let atomic_number = match tokens.first().map(|t| t.parse::<i32>()) {
            Some(Ok(z)) if tokens.len() == 5 => z,
            _ => {
                return Err(CubeError::AtomCountMismatch {
                    line: ln,
                    declared: natoms,
                    found,
                })
            }
        };
        let charge = float(tokens[1], ln)?;
        let mut pos = [0.0; 3];
        for (slot, tok) in pos.iter_mut().zip(&tokens[2..5]) {
            *slot = float(tok, ln)?;
        }
        atoms.push(Atom {
            atomic_number,
            charge: T::lit(charge),
            position: to_angstrom(pos),
        });
        last = ln;
    }

    let expected = dims[0] * dims[1] * dims[2];
    let mut values = Vec::with_capacity(expected);
    for (ln, text) in lines {
        for tok in text.split_whitespace() {
            let v = float(tok, ln)?;
            if values.len() == expected {
                return Err(CubeError::ValueCount {
                    line: ln,
                    expected,
                    found: expected + 1,
                });
            }
            values.push(T::lit(v));
        }
        last = ln;
    }
    if values.len() != expected {
        return Err(CubeError::ValueCount {
            line: last,
            expected,
            found: values.len(),
        });
    }

    let grid = GridField::new(to_angstrom(origin), steps.map(to_angstrom), dims, values, atoms).map_err(|e| {
        CubeError::Header {
            line: 4,
            msg: e.to_string(),
        }
    })?;
    Ok(SpinDensityField::Grid(grid))
}

fn bohr<T: Scalar>(v: Vec3<T>) -> [f64; 3] {
    v.map(|c| c.as_f64() / BOHR_TO_ANGSTROM)
}

/// Writes a grid in cube format (six values per line, shortest round-trip
/// float representation).
pub fn write_cube<T: Scalar>(grid: &GridField<T>, comment: &str) -> String {
    let mut out = String::new();
    let first = comment.lines().next().unwrap_or("");
    let _ = writeln!(out, "{first}");
    let _ = writeln!(out, "net spin density");
    let o = bohr(grid.origin);
    let _ = writeln!(out, "{} {:?} {:?} {:?}", grid.atoms.len(), o[0], o[1], o[2]);
    for (n, step) in grid.dims.iter().zip(grid.steps.iter()) {
        let s = bohr(*step);
        let _ = writeln!(out, "{} {:?} {:?} {:?}", n, s[0], s[1], s[2]);
    }
    for atom in &grid.atoms {
        let p = bohr(atom.position);
        let _ = writeln!(
            out,
            "{} {:?} {:?} {:?} {:?}",
            atom.atomic_number,
            atom.charge.as_f64(),
            p[0],
            p[1],
            p[2]
        );
    }
    for chunk in grid.values.chunks(6) {
        let row: Vec<String> = chunk.iter().map(|v| format!("{:?}", v.as_f64())).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIXTURE: &str = "\
fixture
2x2x2 ramp
1 0.0 0.0 0.0
2 1.0 0.0 0.0
2 0.0 1.0 0.0
2 0.0 0.0 1.0
1 1.0 0.0 0.0 0.0
0.0 1.0 2.0 3.0 4.0 5.0
6.0 7.0
";

    fn grid(f: &SpinDensityField<f64>) -> &GridField<f64> {
        f.as_grid().unwrap()
    }

    #[test]
    fn parses_fixture() {
        let f = parse_cube::<f64>(FIXTURE.as_bytes()).unwrap();
        let g = grid(&f);
        assert_eq!(g.dims, [2, 2, 2]);
        assert_eq!(g.value_at(0, 0, 1), 1.0);
        assert_eq!(g.value_at(1, 1, 1), 7.0);
        assert!((g.steps[0][0] - 0.529177).abs() < 1e-15);
        assert_eq!(g.atoms.len(), 1);
        let node = g.node_position(0, 0, 1);
        assert_eq!(f.sample(node).unwrap(), 1.0);
        let mid = [0.529177 / 2.0; 3];
        assert!((f.sample(mid).unwrap() - 3.5).abs() < 1e-12);
    }

    #[test]
    fn atom_count_mismatch() {
        let text = FIXTURE.replacen("1 0.0 0.0 0.0", "3 0.0 0.0 0.0", 1).replacen(
            "1 1.0 0.0 0.0 0.0",
            "1 1.0 0.0 0.0 0.0\n8 8.0 1.0 1.0 1.0",
            1,
        );
        let err = parse_cube_str::<f64>(&text).unwrap_err();
        assert_eq!(
            err,
            CubeError::AtomCountMismatch {
                line: 9,
                declared: 3,
                found: 2
            }
        );
        assert!(err.to_string().contains("atom count mismatch"));
    }

    #[test]
    fn value_count_and_tokens() {
        let short = FIXTURE.replace("6.0 7.0\n", "6.0\n");
        let err = parse_cube_str::<f64>(&short).unwrap_err();
        assert!(matches!(
            err,
            CubeError::ValueCount {
                line: 9,
                expected: 8,
                found: 7
            }
        ));

        let long = FIXTURE.replace("6.0 7.0\n", "6.0 7.0 8.0\n");
        assert!(matches!(
            parse_cube_str::<f64>(&long).unwrap_err(),
            CubeError::ValueCount { line: 9, .. }
        ));

        let bad = FIXTURE.replace("4.0", "four");
        let err = parse_cube_str::<f64>(&bad).unwrap_err();
        assert_eq!(
            err,
            CubeError::NonNumeric {
                line: 8,
                token: "four".into()
            }
        );
    }

    #[test]
    fn header_errors() {
        let neg = FIXTURE.replacen("2 1.0 0.0 0.0", "-2 1.0 0.0 0.0", 1);
        let err = parse_cube_str::<f64>(&neg).unwrap_err();
        assert!(matches!(err, CubeError::Header { line: 4, .. }));
        assert!(err.to_string().contains("negative voxel count"));

        let trunc = "a\nb\n1 0 0\n";
        assert!(matches!(
            parse_cube_str::<f64>(trunc).unwrap_err(),
            CubeError::Header { line: 3, .. }
        ));

        assert!(matches!(
            parse_cube_str::<f64>("only one line").unwrap_err(),
            CubeError::Truncated { line: 2, .. }
        ));

        let flat = FIXTURE.replacen("2 0.0 1.0 0.0", "2 2.0 0.0 0.0", 1);
        assert!(parse_cube_str::<f64>(&flat).is_err());

        assert_eq!(parse_cube::<f64>(&[0xff, 0xfe]).unwrap_err(), CubeError::NotUtf8);
    }

    #[test]
    fn write_then_parse() {
        let f = parse_cube::<f64>(FIXTURE.as_bytes()).unwrap();
        let text = write_cube(grid(&f), "again");
        let back = parse_cube_str::<f64>(&text).unwrap();
        let (a, b) = (grid(&f), grid(&back));
        assert_eq!(a.dims, b.dims);
        for (x, y) in a.values.iter().zip(&b.values) {
            assert!((x - y).abs() < 1e-10);
        }
        for axis in 0..3 {
            assert!((a.origin[axis] - b.origin[axis]).abs() < 1e-10);
        }
    }
}
