use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// Invariant factors `d_1 | d_2 | ...` of an integer matrix, `min(rows, cols)`
/// of them, zeros included.
pub fn smith_invariants(a: &[Vec<i64>]) -> Vec<BigInt> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<BigInt>> = a
        .iter()
        .map(|r| {
            assert_eq!(r.len(), cols, "ragged matrix rows");
            r.iter().map(|&x| BigInt::from(x)).collect()
        })
        .collect();
    let k = rows.min(cols);
    for t in 0..k {
        loop {
            // smallest nonzero entry of the trailing block becomes the pivot
            let Some((pi, pj)) = (t..rows)
                .flat_map(|i| (t..cols).map(move |j| (i, j)))
                .filter(|&(i, j)| !m[i][j].is_zero())
                .min_by(|&(i, j), &(k2, l)| m[i][j].abs().cmp(&m[k2][l].abs()))
            else {
                // remaining block is zero
                return finish(m, k);
            };
            m.swap(t, pi);
            for row in m.iter_mut() {
                row.swap(t, pj);
            }
            let mut dirty = false;
            for i in t + 1..rows {
                if m[i][t].is_zero() {
                    continue;
                }
                let q = m[i][t].div_floor(&m[t][t]);
                for j in t..cols {
                    let d = &q * &m[t][j];
                    m[i][j] -= d;
                }
                dirty |= !m[i][t].is_zero();
            }
            for j in t + 1..cols {
                if m[t][j].is_zero() {
                    continue;
                }
                let q = m[t][j].div_floor(&m[t][t]);
                for i in t..rows {
                    let d = &q * &m[i][t];
                    m[i][j] -= d;
                }
                dirty |= !m[t][j].is_zero();
            }
            if dirty {
                continue;
            }
            // pivot must divide the whole trailing block
            let bad = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !m[i][j].is_multiple_of(&m[t][t]));
            match bad {
                Some((i, _)) => {
                    for j in t..cols {
                        let v = m[i][j].clone();
                        m[t][j] += v;
                    }
                }
                None => break,
            }
        }
    }
    finish(m, k)
}

fn finish(m: Vec<Vec<BigInt>>, k: usize) -> Vec<BigInt> {
    let mut d: Vec<BigInt> = (0..k).map(|t| m[t][t].abs()).collect();
    // zero blocks can leave zeros ahead of nonzero entries only if we returned early;
    // in that case every later diagonal entry is zero as well.
    d.sort_by(|a, b| match (a.is_zero(), b.is_zero()) {
        (true, false) => std::cmp::Ordering::Greater,
        (false, true) => std::cmp::Ordering::Less,
        _ => std::cmp::Ordering::Equal,
    });
    d
}
