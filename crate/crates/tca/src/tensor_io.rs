//! Plain-text three-way arrays.
//!
//! ```text
//! n m t
//! x[0,0,0] x[0,1,0] ... x[0,m-1,0]
//! ...                                  (n lines for k = 0)
//! x[0,0,1] ...                         (n lines for k = 1, and so on)
//! ```

use std::fmt::Write as _;
use std::path::Path;

use taxicab_core::residual::Array3;

use crate::csv_io::read;
use crate::error::{Error, Result};

pub fn load_tensor(path: impl AsRef<Path>) -> Result<Array3> {
    parse_tensor(&read(path.as_ref())?)
}

pub fn parse_tensor(text: &str) -> Result<Array3> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(n, l)| (n + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let (line, header) = lines.next().ok_or_else(|| Error::input(1, None, "empty tensor file"))?;
    let dims: Vec<usize> = header
        .split_whitespace()
        .enumerate()
        .map(|(k, t)| {
            t.parse()
                .map_err(|_| Error::input(line, Some(k + 1), format!("bad dimension {t:?}")))
        })
        .collect::<Result<_>>()?;
    let &[n, m, t] = dims.as_slice() else {
        return Err(Error::input(line, None, "expected three dimensions \"n m t\""));
    };
    if n == 0 || m == 0 || t == 0 {
        return Err(Error::input(line, None, "dimensions must be positive"));
    }

    let mut out = Array3::zeros(n, m, t);
    for k in 0..t {
        for i in 0..n {
            let (line, body) = lines.next().ok_or_else(|| {
                Error::input(line, None, format!("expected {} value lines", n * t))
            })?;
            let values: Vec<&str> = body.split_whitespace().collect();
            if values.len() != m {
                return Err(Error::input(line, None, format!("{} values, expected {m}", values.len())));
            }
            for (j, token) in values.into_iter().enumerate() {
                let v: f64 = token
                    .parse()
                    .ok()
                    .filter(|v: &f64| v.is_finite())
                    .ok_or_else(|| Error::input(line, Some(j + 1), format!("not a number: {token:?}")))?;
                out.set(i, j, k, v);
            }
        }
    }
    if let Some((line, _)) = lines.next() {
        return Err(Error::input(line, None, "trailing data after the last slab"));
    }
    Ok(out)
}

pub fn format_tensor(x: &Array3) -> String {
    let [n, m, t] = x.dims();
    let mut s = format!("{n} {m} {t}\n");
    for k in 0..t {
        for i in 0..n {
            let row: Vec<String> = (0..m).map(|j| format!("{:?}", x.get(i, j, k))).collect();
            writeln!(s, "{}", row.join(" ")).unwrap();
        }
    }
    s
}

pub fn write_tensor(path: impl AsRef<Path>, x: &Array3) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, format_tensor(x)).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar() {
        let x = parse_tensor("1 1 1\n5\n").unwrap();
        assert_eq!(x.dims(), [1, 1, 1]);
        assert_eq!(x.get(0, 0, 0), 5.0);
    }

    #[test]
    fn slabs_are_k_major() {
        let x = parse_tensor("2 2 2\n1 2\n3 4\n5 6\n7 8\n").unwrap();
        assert_eq!(x.get(1, 0, 0), 3.0);
        assert_eq!(x.get(0, 1, 1), 6.0);
        assert_eq!(x.get(1, 1, 1), 8.0);
        assert_eq!(parse_tensor(&format_tensor(&x)).unwrap(), x);
    }

    #[test]
    fn malformed() {
        for bad in ["", "2 2\n1 2\n", "0 1 1\n", "1 1 x\n1\n", "1 2 1\n1\n", "1 1 1\nq\n", "1 1 1\n1\n2\n"] {
            assert!(matches!(parse_tensor(bad), Err(Error::Input { .. })), "{bad:?}");
        }
        let err = parse_tensor("1 2 1\n1 z\n").unwrap_err();
        assert!(err.to_string().contains("line 2, column 2"), "{err}");
    }
}
