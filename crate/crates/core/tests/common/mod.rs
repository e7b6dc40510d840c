//! Fixtures and brute-force oracles shared by the integration tests.
//!
//! Oracles here deliberately avoid the library's lattice and derivative code:
//! they work on raw element sets, explicit coordinates and rank counts.

#![allow(dead_code)]

use std::collections::BTreeSet;

use profscope::group::cyclic_action;
use profscope::{direct_product, make_cyclic, make_dihedral, semidirect, Budget, FiniteGroup, Tower};

pub fn b() -> Budget {
    Budget::default()
}

pub fn cyc(n: usize) -> FiniteGroup {
    make_cyclic(n).unwrap()
}

pub fn prod(groups: &[FiniteGroup]) -> FiniteGroup {
    let mut acc = cyc(1);
    for g in groups {
        acc = direct_product(&acc, g, &b()).unwrap();
    }
    let label = groups.iter().map(|g| g.label().to_string()).collect::<Vec<_>>().join("x");
    acc.with_label(label)
}

pub fn dihedral(n: usize) -> FiniteGroup {
    make_dihedral(n, &b()).unwrap()
}

/// `C_n ⋊ C_m` where the generator of `C_m` acts as multiplication by `r`.
pub fn metacyclic(n: usize, m: usize, r: usize) -> FiniteGroup {
    let cn = cyc(n);
    let cm = cyc(m);
    let aut: Vec<u32> = (0..n).map(|x| (x * r % n) as u32).collect();
    let action = cyclic_action(&cn, &cm, &aut).unwrap();
    semidirect(&cn, &cm, &action, &b())
        .unwrap()
        .with_label(format!("C{n}:C{m}"))
}

/// `C2² ⋊ C3`, the alternating group on four letters.
pub fn a4() -> FiniteGroup {
    let v = prod(&[cyc(2), cyc(2)]);
    let c3 = cyc(3);
    let action = cyclic_action(&v, &c3, &[0, 2, 3, 1]).unwrap();
    semidirect(&v, &c3, &action, &b()).unwrap().with_label("A4")
}

/// Quaternion group; element `2q + s` is `(-1)^s · q` for `q ∈ {1, i, j, k}`.
pub fn q8() -> FiniteGroup {
    // unit products: sign and result index, for 1, i, j, k
    let unit = |a: usize, b: usize| -> (usize, usize) {
        match (a, b) {
            (0, x) | (x, 0) => (0, x),
            (x, y) if x == y => (1, 0),
            (1, 2) => (0, 3),
            (2, 1) => (1, 3),
            (2, 3) => (0, 1),
            (3, 2) => (1, 1),
            (3, 1) => (0, 2),
            (1, 3) => (1, 2),
            _ => unreachable!(),
        }
    };
    let rows: Vec<Vec<u32>> = (0..8)
        .map(|x| {
            (0..8)
                .map(|y| {
                    let (s, q) = unit(x / 2, y / 2);
                    let sign = (x % 2 + y % 2 + s) % 2;
                    (2 * q + sign) as u32
                })
                .collect()
        })
        .collect();
    FiniteGroup::from_rows(&rows, "Q8", 1).unwrap()
}

/// Groups of order at most 64 covering cyclic, elementary abelian, mixed
/// abelian, dihedral, metacyclic and quaternion shapes.
pub fn group_corpus() -> Vec<FiniteGroup> {
    vec![
        cyc(1),
        cyc(2),
        cyc(3),
        cyc(4),
        cyc(6),
        cyc(8),
        cyc(12),
        cyc(16),
        prod(&[cyc(2), cyc(2)]),
        prod(&[cyc(2), cyc(2), cyc(2)]),
        prod(&[cyc(3), cyc(3)]),
        prod(&[cyc(2), cyc(4)]),
        prod(&[cyc(2), cyc(6)]),
        prod(&[cyc(4), cyc(4)]),
        prod(&[cyc(2), cyc(2), cyc(2), cyc(2)]),
        dihedral(3),
        dihedral(4),
        dihedral(5),
        dihedral(6),
        dihedral(8),
        q8(),
        metacyclic(3, 4, 2),
        metacyclic(7, 3, 2),
        a4(),
        prod(&[dihedral(3), cyc(3)]),
        prod(&[dihedral(4), cyc(2)]),
        prod(&[q8(), cyc(3)]),
        prod(&[a4(), cyc(2)]),
        prod(&[dihedral(3), dihedral(3)]),
    ]
}

/// Built-in towers used across the suites, with the deepest level the
/// default lattice budget reaches.
pub fn tower_corpus() -> Vec<(Tower, usize)> {
    let p2 = Tower::padic(2).unwrap();
    let p3 = Tower::padic(3).unwrap();
    vec![
        (p2.clone(), 9),
        (p3.clone(), 5),
        (Tower::product(&p2, &p3), 3),
        (Tower::finite_times(&cyc(2), &p2), 8),
        (Tower::finite_times(&cyc(3), &p2), 7),
        (Tower::torsion(&cyc(2)).unwrap(), 6),
        (Tower::torsion(&cyc(3)).unwrap(), 4),
        (Tower::finite_times(&cyc(4), &p2), 6),
        (Tower::finite_times(&cyc(2), &p3), 5),
        (Tower::finite_times(&dihedral(3), &p2), 6),
    ]
}

/// Budget with room for lattices of the corpus levels.
pub fn wide() -> Budget {
    Budget {
        max_lattice_order: 1024,
        ..Budget::default()
    }
}

/// Mixed-radix index of a coordinate vector in `Z_{m_1} × … × Z_{m_r}`.
pub fn encode(moduli: &[u64], x: &[u64]) -> usize {
    x.iter().zip(moduli).fold(0, |acc, (&a, &m)| acc * m as usize + a as usize)
}

pub fn decode(moduli: &[u64], mut i: usize) -> Vec<u64> {
    let mut out = vec![0; moduli.len()];
    for (k, &m) in moduli.iter().enumerate().rev() {
        out[k] = (i % m as usize) as u64;
        i /= m as usize;
    }
    out
}

/// Addition table of `Z_{m_1} × … × Z_{m_r}` on mixed-radix indices.
pub fn addition_table(moduli: &[u64]) -> Vec<u32> {
    let total: usize = moduli.iter().product::<u64>() as usize;
    let coords: Vec<Vec<u64>> = (0..total).map(|i| decode(moduli, i)).collect();
    let mut table = vec![0u32; total * total];
    for a in 0..total {
        for c in 0..total {
            let y: Vec<u64> = coords[a].iter().zip(&coords[c]).zip(moduli).map(|((x, z), m)| (x + z) % m).collect();
            table[a * total + c] = encode(moduli, &y) as u32;
        }
    }
    table
}

/// Subgroup spanned by `gens`, as sorted indices, given the addition table.
pub fn abelian_span(table: &[u32], total: usize, gens: &[usize]) -> Vec<usize> {
    let mut seen = vec![false; total];
    seen[0] = true;
    let mut frontier = vec![0usize];
    while let Some(i) = frontier.pop() {
        for &g in gens {
            let j = table[i * total + g] as usize;
            if !seen[j] {
                seen[j] = true;
                frontier.push(j);
            }
        }
    }
    (0..total).filter(|&i| seen[i]).collect()
}

/// All subgroups of `Z_{m_1} × … × Z_{m_r}` generated by at most two
/// elements, found by spanning every pair.
pub fn two_generated_subgroups(moduli: &[u64]) -> BTreeSet<Vec<usize>> {
    let total: usize = moduli.iter().product::<u64>() as usize;
    let table = addition_table(moduli);
    let mut out = BTreeSet::new();
    for a in 0..total {
        for c in a..total {
            out.insert(abelian_span(&table, total, &[a, c]));
        }
    }
    out
}

/// Number of subsets of `C2^d` that are closed under addition and contain 0,
/// by running through the whole power set.
pub fn powerset_subgroup_count(d: u32) -> usize {
    let n = 1usize << d;
    let mut count = 0;
    for mask in 0u64..(1u64 << n) {
        if mask & 1 == 0 {
            continue;
        }
        let closed = (0..n).all(|a| mask >> a & 1 == 0 || (0..n).all(|c| mask >> c & 1 == 0 || mask >> (a ^ c) & 1 == 1));
        if closed {
            count += 1;
        }
    }
    count
}

/// Cantor–Bendixson rank profile of `ω^h·n+1` (or `n` points when `h = 0`);
/// `None` stands for countably infinitely many points.
pub fn ordinal_profile(h: u32, n: u64) -> Vec<Option<u64>> {
    let mut v: Vec<Option<u64>> = vec![None; h as usize];
    v.push(Some(n));
    v
}

fn mul_count(a: Option<u64>, b: Option<u64>) -> Option<u64> {
    match (a, b) {
        (Some(0), _) | (_, Some(0)) => Some(0),
        (Some(x), Some(y)) => Some(x * y),
        _ => None,
    }
}

fn add_count(a: Option<u64>, b: Option<u64>) -> Option<u64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x + y),
        _ => None,
    }
}

/// Rank profile of a product: ranks add, counts multiply.
pub fn product_profile(a: &[Option<u64>], b: &[Option<u64>]) -> Vec<Option<u64>> {
    let mut out = vec![Some(0); a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = add_count(out[i + j], mul_count(x, y));
        }
    }
    out
}
