use super::{ModElem, ModuleCtx, Submodule};
use crate::error::Result;

/// The projection `M -> M/L`, with `M/L` rebuilt in block form over the same ring.
#[derive(Clone, Debug)]
pub struct QuotientMap {
    source: ModuleCtx,
    target: ModuleCtx,
    kernel: Submodule,
    table: Vec<ModElem>,
}

impl QuotientMap {
    pub fn source(&self) -> &ModuleCtx {
        &self.source
    }

    pub fn target(&self) -> &ModuleCtx {
        &self.target
    }

    pub fn kernel(&self) -> &Submodule {
        &self.kernel
    }

    pub fn project(&self, x: ModElem) -> ModElem {
        self.table[x.index()]
    }

    /// `(N + L)/L`.
    pub fn image(&self, n: &Submodule) -> Result<Submodule> {
        self.source.check_same(n.ctx(), "quotient image")?;
        Ok(Submodule::from_elements(
            &self.target,
            n.elements().map(|x| self.project(x)),
        ))
    }

    /// The submodule of `M` containing `L` that corresponds to `n`.
    pub fn preimage(&self, n: &Submodule) -> Result<Submodule> {
        self.target.check_same(n.ctx(), "quotient preimage")?;
        Ok(Submodule::from_elements(
            &self.source,
            self.source
                .elements()
                .filter(|&x| n.contains(self.project(x))),
        ))
    }
}

/// Diagonal form `U A V = D` of an integer relation matrix.
///
/// Returns the diagonal (one entry per column) and `V`. Row operations are
/// not tracked: only the column change of basis is needed to map elements.
/// A column of the change-of-basis matrix with the order of its block.
type Column = (Vec<i64>, u64);

#[allow(clippy::needless_range_loop)] // row operations read one row while writing another
pub(crate) fn diagonalize(mut a: Vec<Vec<i64>>, cols: usize) -> (Vec<i64>, Vec<Vec<i64>>) {
    let rows = a.len();
    let mut v: Vec<Vec<i64>> = (0..cols)
        .map(|i| (0..cols).map(|j| i64::from(i == j)).collect())
        .collect();
    let mut diag = vec![0i64; cols];
    for t in 0..cols.min(rows) {
        loop {
            let pivot = (t..rows)
                .flat_map(|i| (t..cols).map(move |j| (i, j)))
                .filter(|&(i, j)| a[i][j] != 0)
                .min_by_key(|&(i, j)| a[i][j].abs());
            let Some((pi, pj)) = pivot else {
                return (diag, v);
            };
            a.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            for row in v.iter_mut() {
                row.swap(t, pj);
            }
            let p = a[t][t];
            let mut clean = true;
            for i in t + 1..rows {
                let q = a[i][t] / p;
                if q != 0 {
                    for j in t..cols {
                        a[i][j] -= q * a[t][j];
                    }
                }
                clean &= a[i][t] == 0;
            }
            for j in t + 1..cols {
                let q = a[t][j] / p;
                if q != 0 {
                    for row in a.iter_mut() {
                        row[j] -= q * row[t];
                    }
                    for row in v.iter_mut() {
                        row[j] -= q * row[t];
                    }
                }
                clean &= a[t][j] == 0;
            }
            if clean {
                diag[t] = p.abs();
                break;
            }
        }
    }
    (diag, v)
}

impl ModuleCtx {
    /// `M/L` together with the projection.
    ///
    /// Each ring factor's block is the abelian group `Z^b` modulo the block
    /// orders and the factor components of `L`'s generators; diagonalising that
    /// relation matrix gives the cyclic decomposition and the coordinate map.
    pub fn quotient(&self, l: &Submodule) -> Result<QuotientMap> {
        self.check_same(l.ctx(), "quotient")?;
        let gens: Vec<Vec<u64>> = l.generators().iter().map(|&g| self.coords(g)).collect();
        let mut blocks = Vec::new();
        // per factor: source coordinate indices, kept columns of V with their orders
        let mut maps: Vec<(Vec<usize>, Vec<Column>)> = Vec::new();
        for i in 0..self.ring().num_factors() {
            let coords: Vec<usize> = self.factor_coords(i).collect();
            let b = coords.len();
            let mut rel: Vec<Vec<i64>> = Vec::new();
            for (k, &j) in coords.iter().enumerate() {
                let mut row = vec![0i64; b];
                row[k] = self.0.orders[j] as i64;
                rel.push(row);
            }
            for g in &gens {
                rel.push(coords.iter().map(|&j| g[j] as i64).collect());
            }
            let (diag, v) = diagonalize(rel, b);
            let mut kept = Vec::new();
            let mut orders = Vec::new();
            for (k, &d) in diag.iter().enumerate() {
                debug_assert!(d > 0, "relations include every block order");
                if d > 1 {
                    let column: Vec<i64> = (0..b).map(|r| v[r][k].rem_euclid(d)).collect();
                    kept.push((column, d as u64));
                    orders.push(d as u64);
                }
            }
            blocks.push(orders);
            maps.push((coords, kept));
        }
        let target = match self.split() {
            Some(k) => ModuleCtx::new(self.ring(), blocks)?.with_split(k)?,
            None => ModuleCtx::new(self.ring(), blocks)?,
        };
        let table = self
            .elements()
            .map(|x| {
                let c = self.coords(x);
                target.elem_from_coords(maps.iter().flat_map(|(coords, kept)| {
                    kept.iter().map(|(column, d)| {
                        let s: i128 = coords
                            .iter()
                            .zip(column)
                            .map(|(&j, &w)| c[j] as i128 * w as i128)
                            .sum();
                        s.rem_euclid(*d as i128) as u64
                    })
                }))
            })
            .collect();
        Ok(QuotientMap {
            source: self.clone(),
            target,
            kernel: l.clone(),
            table,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::diagonalize;

    #[test]
    fn diagonal_form_of_small_relations() {
        // Z4 x Z6 modulo the order-2 subgroup generated by (2,3)
        let (d, _) = diagonalize(vec![vec![4, 0], vec![0, 6], vec![2, 3]], 2);
        assert_eq!(d.iter().product::<i64>(), 12);
        let (d, _) = diagonalize(vec![vec![12]], 1);
        assert_eq!(d, vec![12]);
    }
}
