use crate::module::{product_context, ModuleCtx};
use crate::ring::{divisors_of, FiniteRing};

fn zn(n: u64) -> FiniteRing {
    FiniteRing::new(&[n]).expect("n >= 2")
}

/// `Z_n` over itself for `2 <= n <= 16`.
pub fn regular_suite() -> Vec<ModuleCtx> {
    (2..=16).map(|n| ModuleCtx::regular(&zn(n))).collect()
}

/// Block modules `Z_{d1} x ... x Z_{dk}` over `Z_n` for `n <= 16`: one to
/// three nonincreasing divisors `d > 1` of `n` with product at most 200,
/// leaving out the regular module.
pub fn block_suite() -> Vec<ModuleCtx> {
    fn extend(divs: &[u64], max_len: usize, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        if cur.len() == max_len {
            return;
        }
        let size: u64 = cur.iter().product();
        for &d in divs {
            if cur.last().is_some_and(|&l| d > l) || size * d > 200 {
                continue;
            }
            cur.push(d);
            extend(divs, max_len, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    for n in 2..=16 {
        let mut divs: Vec<u64> = divisors_of(n).into_iter().filter(|&d| d > 1).collect();
        divs.sort_unstable_by(|a, b| b.cmp(a));
        let mut shapes = Vec::new();
        extend(&divs, 3, &mut Vec::new(), &mut shapes);
        let ring = zn(n);
        for shape in shapes.into_iter().filter(|s| s != &[n]) {
            out.push(ModuleCtx::new(&ring, vec![shape]).expect("divisors give a valid module"));
        }
    }
    out
}

/// `Z_m x Z_n` over itself for `2 <= m, n <= 6`, split into its two factors.
pub fn product_suite() -> Vec<ModuleCtx> {
    let mut out = Vec::new();
    for m in 2..=6 {
        for n in 2..=6 {
            let a = ModuleCtx::regular(&zn(m));
            let b = ModuleCtx::regular(&zn(n));
            out.push(product_context(&a, &b).expect("regular factors"));
        }
    }
    out
}

/// Regular, block and product contexts, in that order.
pub fn standard_suite() -> Vec<ModuleCtx> {
    let mut out = regular_suite();
    out.extend(block_suite());
    out.extend(product_suite());
    out
}
