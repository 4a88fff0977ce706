//! Oracles and generators shared by the integration tests. Nothing here
//! calls into the library's algebra; it only reads inputs through accessors.

#![allow(dead_code)]

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

use structura::exactla::{CyclicSum, FgAbGroup, Field, GroupMap, IntMatrix};
use structura::finspace::{FiniteSpace, PointSet};
use structura::hochschild::FiniteDimAlgebra;
use structura::sheaf::Presheaf;
use structura::strcat::{Carrier, Component};

/// A group as `(rank, invariant factors > 1)`.
pub type Canon = (usize, Vec<i128>);

pub fn canon_of(g: &FgAbGroup) -> Canon {
    (g.rank(), g.torsion().iter().map(|d| d.to_i128().expect("small torsion")).collect())
}

/// Invariant factors of an integer matrix by elementary row and column
/// operations; zeros are dropped, the result is a divisibility chain.
pub fn invariant_factors(m: &[Vec<i128>]) -> Vec<i128> {
    let mut a: Vec<Vec<i128>> = m.to_vec();
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut out = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // Smallest nonzero entry of the remaining block as pivot.
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if a[i][j] != 0 && best.map_or(true, |(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
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
                for i in t..rows {
                    a[i][j] -= q * a[i][t];
                }
            }
            clean &= a[t][j] == 0;
        }
        if !clean {
            continue;
        }
        // The pivot must divide the rest of the block; otherwise fold a row in.
        let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| a[i][j] % p != 0));
        if let Some(i) = bad {
            for j in t..cols {
                a[t][j] += a[i][j];
            }
            continue;
        }
        out.push(p.abs());
        t += 1;
    }
    out
}

pub fn rank_of(m: &[Vec<i128>]) -> usize {
    invariant_factors(m).len()
}

/// Cohomology of `Z^{dims[0]} -> Z^{dims[1]} -> ...`, with `diffs[n]` having
/// `dims[n + 1]` rows.
pub fn free_cohomology(dims: &[usize], diffs: &[Vec<Vec<i128>>]) -> Vec<Canon> {
    (0..dims.len())
        .map(|n| {
            let out_rank = diffs.get(n).map_or(0, |d| rank_of(d));
            let (in_rank, torsion) = match n.checked_sub(1).and_then(|k| diffs.get(k)) {
                None => (0, Vec::new()),
                Some(d) => {
                    let f = invariant_factors(d);
                    (f.len(), f.into_iter().filter(|&x| x > 1).collect())
                }
            };
            (dims[n] - out_rank - in_rank, torsion)
        })
        .collect()
}

/// Canonical form of a direct sum.
pub fn sum_canon(parts: &[Canon]) -> Canon {
    let rank = parts.iter().map(|p| p.0).sum();
    let ts: Vec<i128> = parts.iter().flat_map(|p| p.1.iter().copied()).collect();
    let diag: Vec<Vec<i128>> = (0..ts.len()).map(|i| (0..ts.len()).map(|j| if i == j { ts[i] } else { 0 }).collect()).collect();
    (rank, invariant_factors(&diag).into_iter().filter(|&x| x > 1).collect())
}

/// Strict chains `x0 < x1 < ... < xn` of the specialization order.
pub fn order_chains(x: &FiniteSpace, n: usize) -> Vec<Vec<usize>> {
    let pts = x.npoints();
    let below = |a: usize, b: usize| a != b && x.leq(a, b);
    let mut chains: Vec<Vec<usize>> = (0..pts).map(|p| vec![p]).collect();
    for _ in 0..n {
        chains = chains
            .iter()
            .flat_map(|c| (0..pts).filter(|&q| below(*c.last().unwrap(), q)).map(move |q| [c.clone(), vec![q]].concat()))
            .collect();
    }
    chains
}

/// Simplicial cohomology with `Z` coefficients of the order complex, degrees `0..=max`.
pub fn order_complex_cohomology(x: &FiniteSpace, max: usize) -> Vec<Canon> {
    let simplices: Vec<Vec<Vec<usize>>> = (0..=max + 1).map(|n| order_chains(x, n)).collect();
    let dims: Vec<usize> = simplices.iter().map(Vec::len).collect();
    let diffs: Vec<Vec<Vec<i128>>> = (0..=max)
        .map(|n| {
            simplices[n + 1]
                .iter()
                .map(|s| {
                    let mut row = vec![0i128; dims[n]];
                    for i in 0..s.len() {
                        let mut face = s.clone();
                        face.remove(i);
                        let k = simplices[n].iter().position(|f| *f == face).expect("faces of chains are chains");
                        row[k] += if i % 2 == 0 { 1 } else { -1 };
                    }
                    row
                })
                .collect()
        })
        .collect();
    free_cohomology(&dims, &diffs)[..=max].to_vec()
}

/// Every partial order on `n` labelled points, as `rel[x][y] = x <= y`.
pub fn all_partial_orders(n: usize) -> Vec<Vec<Vec<bool>>> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|x| (0..n).filter(move |&y| y != x).map(move |y| (x, y))).collect();
    let mut out = Vec::new();
    for mask in 0u64..(1 << pairs.len()) {
        let mut rel = vec![vec![false; n]; n];
        for (x, row) in rel.iter_mut().enumerate() {
            row[x] = true;
        }
        for (k, &(x, y)) in pairs.iter().enumerate() {
            rel[x][y] = mask >> k & 1 == 1;
        }
        let antisymmetric = (0..n).all(|x| (0..n).all(|y| x == y || !(rel[x][y] && rel[y][x])));
        let transitive = (0..n).all(|x| (0..n).all(|y| (0..n).all(|z| !(rel[x][y] && rel[y][z]) || rel[x][z])));
        if antisymmetric && transitive {
            out.push(rel);
        }
    }
    out
}

pub fn labels(n: usize) -> Vec<String> {
    (0..n).map(|i| ((b'a' + i as u8) as char).to_string()).collect()
}

pub fn space_of_order(rel: &[Vec<bool>]) -> FiniteSpace {
    FiniteSpace::from_order(&labels(rel.len()), |x, y| rel[x][y]).expect("orders give spaces")
}

/// A random finite T0 space: the transitive closure of random edges `i -> j`, `i < j`.
pub fn random_space(rng: &mut impl Rng, max_points: usize) -> FiniteSpace {
    let n = rng.gen_range(1..=max_points);
    let mut rel = vec![vec![false; n]; n];
    for x in 0..n {
        rel[x][x] = true;
        for y in x + 1..n {
            rel[x][y] = rng.gen_bool(0.35);
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if rel[i][k] && rel[k][j] {
                    rel[i][j] = true;
                }
            }
        }
    }
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    FiniteSpace::from_order(&labels(n), |x, y| rel[perm[x]][perm[y]]).expect("orders give spaces")
}

/// One summand of a generated presheaf.
#[derive(Clone, Debug)]
pub enum Summand {
    /// `Z/order` (`0` for `Z`) on every open containing one of `generators`,
    /// with projections as restrictions.
    Projection { order: u64, generators: Vec<PointSet> },
    /// `Z/order` on every nonempty open with identity restrictions.
    Constant { order: u64 },
}

fn summand_present(s: &Summand, open: PointSet) -> bool {
    match s {
        Summand::Projection { generators, .. } => generators.iter().any(|g| g.is_subset(open)),
        Summand::Constant { .. } => !open.is_empty(),
    }
}

fn summand_order(s: &Summand) -> u64 {
    match s {
        Summand::Projection { order, .. } | Summand::Constant { order } => *order,
    }
}

/// Direct sums of projection and constant summands.
pub fn presheaf_of_summands(x: &FiniteSpace, summands: &[Summand]) -> Presheaf<GroupMap> {
    let present = |o: PointSet| -> Vec<usize> { (0..summands.len()).filter(|&k| summand_present(&summands[k], o)).collect() };
    let group = |o: PointSet| CyclicSum::new(present(o).iter().map(|&k| BigInt::from(summand_order(&summands[k]))).collect()).expect("orders are valid");
    let restriction = |u: PointSet, v: PointSet| {
        let (pu, pv) = (present(u), present(v));
        let rows: Vec<Vec<i64>> = pu.iter().map(|k| pv.iter().map(|l| i64::from(k == l)).collect()).collect();
        GroupMap::new(group(v), group(u), IntMatrix::from_rows_with_cols(&rows, pv.len())).expect("projections are homomorphisms")
    };
    Presheaf::from_fn(x.clone(), group, restriction).expect("projections compose")
}

pub fn random_summands(rng: &mut impl Rng, x: &FiniteSpace, finite_only: bool) -> Vec<Summand> {
    let opens: Vec<PointSet> = x.opens()[1..].to_vec();
    let count = rng.gen_range(1..=3);
    (0..count)
        .map(|_| {
            let order = if finite_only { *[2u64, 3].choose(rng).unwrap() } else { *[0u64, 0, 2, 3].choose(rng).unwrap() };
            if rng.gen_bool(0.25) {
                Summand::Constant { order }
            } else {
                let k = rng.gen_range(1..=2);
                Summand::Projection { order, generators: (0..k).map(|_| *opens.choose(rng).unwrap()).collect() }
            }
        })
        .collect()
}

/// Finite sections as indices, with every restriction as a lookup table.
struct SectionTables {
    sizes: Vec<usize>,
    /// `res[sub][sup][s]`: restriction of section `s` of `F(opens[sup])`.
    res: Vec<Vec<Vec<usize>>>,
}

fn orders_u64(g: &CyclicSum) -> Vec<u64> {
    g.orders()
        .iter()
        .map(|d| {
            let d = d.to_u64().expect("small orders");
            assert!(d > 0, "enumeration needs finite values");
            d
        })
        .collect()
}

fn decode(orders: &[u64], mut k: usize) -> Vec<BigInt> {
    orders
        .iter()
        .map(|&d| {
            let c = k as u64 % d;
            k /= d as usize;
            BigInt::from(c)
        })
        .collect()
}

fn encode(orders: &[u64], v: &[BigInt]) -> usize {
    orders.iter().zip(v).rev().fold(0usize, |acc, (&d, c)| {
        let d_big = BigInt::from(d);
        let c = ((c % &d_big) + &d_big) % &d_big;
        acc * d as usize + c.to_usize().unwrap()
    })
}

impl SectionTables {
    fn new(f: &Presheaf<GroupMap>) -> SectionTables {
        let x = f.space();
        let n = x.nopens();
        let orders: Vec<Vec<u64>> = (0..n).map(|k| orders_u64(f.value(k))).collect();
        let sizes: Vec<usize> = orders.iter().map(|o| o.iter().product::<u64>() as usize).collect();
        let mut res = vec![vec![Vec::new(); n]; n];
        for sub in 0..n {
            for sup in 0..n {
                if !x.opens()[sub].is_subset(x.opens()[sup]) {
                    continue;
                }
                let m = f.restriction_between(x.opens()[sub], x.opens()[sup]).expect("inclusion of opens").matrix().clone();
                res[sub][sup] = (0..sizes[sup])
                    .map(|k| {
                        let v = decode(&orders[sup], k);
                        let image: Vec<BigInt> = (0..m.nrows()).map(|i| m.row(i).iter().zip(&v).map(|(a, b)| a * b).sum()).collect();
                        encode(&orders[sub], &image)
                    })
                    .collect();
            }
        }
        SectionTables { sizes, res }
    }
}

/// Whether the sheaf condition holds for one cover of `u`, by enumeration.
fn cover_condition(x: &FiniteSpace, t: &SectionTables, u: usize, members: &[usize]) -> bool {
    let opens = x.opens();
    let meet = |i: usize, j: usize| x.open_index(opens[i].intersection(opens[j])).expect("opens are closed under intersection");
    // Backtracking over compatible families.
    let mut families: Vec<Vec<usize>> = vec![Vec::new()];
    for (i, &mi) in members.iter().enumerate() {
        let meets: Vec<usize> = members[..i].iter().map(|&mj| meet(mi, mj)).collect();
        let mut next = Vec::new();
        for fam in &families {
            for s in 0..t.sizes[mi] {
                if (0..i).all(|j| t.res[meets[j]][mi][s] == t.res[meets[j]][members[j]][fam[j]]) {
                    let mut extended = fam.clone();
                    extended.push(s);
                    next.push(extended);
                }
            }
        }
        families = next;
    }
    let mut images: Vec<Vec<usize>> = (0..t.sizes[u]).map(|g| members.iter().map(|&m| t.res[m][u][g]).collect()).collect();
    images.sort();
    images.dedup();
    images.len() == t.sizes[u] && images.len() == families.len()
}

/// Sheaf condition for every cover of every open by opens, finite values only.
/// Covers containing the open itself satisfy it trivially and are skipped.
pub fn is_sheaf_all_covers(f: &Presheaf<GroupMap>) -> bool {
    let x = f.space();
    let t = SectionTables::new(f);
    if t.sizes[0] != 1 {
        return false;
    }
    (1..x.nopens()).all(|u| {
        let ou = x.opens()[u];
        let proper: Vec<usize> = (1..x.nopens()).filter(|&o| o != u && x.opens()[o].is_subset(ou)).collect();
        (1u64..(1 << proper.len())).all(|mask| {
            let members: Vec<usize> = (0..proper.len()).filter(|&k| mask >> k & 1 == 1).map(|k| proper[k]).collect();
            let union = members.iter().fold(PointSet::from_bits(0), |a, &b| a.union(x.opens()[b]));
            union != ou || cover_condition(x, &t, u, &members)
        })
    })
}

/// Presheaf of carriers from a group presheaf.
pub fn as_components(f: &Presheaf<GroupMap>) -> Presheaf<Component> {
    f.map(|g| Carrier::Group(g.clone()), |m| Component::Group(m.clone())).expect("functors preserve presheaves")
}

/// `a mod p` in `0..p`.
fn modp(a: i64, p: i64) -> i64 {
    a.rem_euclid(p)
}

/// Rank of a matrix over `F_p` (`p > 0`) or `Q` (`p == 0`) by Gaussian elimination.
pub fn field_rank(m: &[Vec<BigRational>], p: i64) -> usize {
    if p > 0 {
        let mut a: Vec<Vec<i64>> = m.iter().map(|r| r.iter().map(|e| to_modp(e, p)).collect()).collect();
        let cols = a.first().map_or(0, Vec::len);
        let mut rank = 0;
        for c in 0..cols {
            let Some(pr) = (rank..a.len()).find(|&r| a[r][c] != 0) else { continue };
            a.swap(rank, pr);
            let inv = modinv(&BigInt::from(a[rank][c]), p);
            for r in 0..a.len() {
                if r != rank && a[r][c] != 0 {
                    let factor = a[r][c] * inv % p;
                    for k in 0..cols {
                        a[r][k] = modp(a[r][k] - factor * a[rank][k], p);
                    }
                }
            }
            rank += 1;
        }
        return rank;
    }
    let mut a: Vec<Vec<BigRational>> = m.to_vec();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(pr) = (rank..a.len()).find(|&r| !a[r][c].is_zero()) else { continue };
        a.swap(rank, pr);
        let inv = a[rank][c].recip();
        for r in 0..a.len() {
            if r != rank && !a[r][c].is_zero() {
                let factor = &a[r][c] * &inv;
                for k in 0..cols {
                    let v = &a[r][k] - &factor * &a[rank][k];
                    a[r][k] = v;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn to_modp(e: &BigRational, p: i64) -> i64 {
    let n = modp((e.numer() % p).to_i64().unwrap(), p);
    modp(n * modinv(e.denom(), p), p)
}

fn modinv(a: &BigInt, p: i64) -> i64 {
    let a = modp((a % p).to_i64().unwrap(), p);
    (1..p).find(|&x| (a * x) % p == 1).expect("invertible mod p")
}

/// `dim Z(A)` as the nullity of `z -> (z e_i - e_i z)_i`.
pub fn center_dimension(c: &[Vec<Vec<BigRational>>], p: i64) -> usize {
    let d = c.len();
    // Unknown coordinates z_j; equation for (i, k): sum_j z_j (c[j][i][k] - c[i][j][k]) = 0.
    let rows: Vec<Vec<BigRational>> = (0..d).flat_map(|i| (0..d).map(move |k| (i, k))).map(|(i, k)| (0..d).map(|j| &c[j][i][k] - &c[i][j][k]).collect()).collect();
    d - field_rank(&rows, p)
}

/// Multiplication tables of monoids on `{1, a, b}` restricted to `size` elements, by rejection.
pub fn random_monoid_table(rng: &mut impl Rng, size: usize) -> Vec<Vec<usize>> {
    loop {
        let mut t = vec![vec![0; size]; size];
        for x in 0..size {
            t[0][x] = x;
            t[x][0] = x;
        }
        for x in 1..size {
            for y in 1..size {
                t[x][y] = rng.gen_range(0..size);
            }
        }
        let assoc = (0..size).all(|x| (0..size).all(|y| (0..size).all(|z| t[t[x][y]][z] == t[x][t[y][z]])));
        if assoc {
            return t;
        }
    }
}

/// Structure constants of the monoid algebra of `t`, in a random basis.
pub fn random_algebra(rng: &mut impl Rng) -> (FiniteDimAlgebra, Vec<Vec<Vec<BigRational>>>, i64) {
    let size = rng.gen_range(1..=3);
    let t = random_monoid_table(rng, size);
    let p: i64 = *[0i64, 2, 3, 5].choose(rng).unwrap();
    let field = if p == 0 { Field::Rationals } else { Field::prime(p as u64).unwrap() };
    let q = |v: i64| BigRational::from_integer(BigInt::from(v));
    // Random unimodular change of basis: unit lower triangular.
    let mut b = vec![vec![0i64; size]; size];
    for i in 0..size {
        b[i][i] = 1;
        for j in 0..i {
            b[i][j] = rng.gen_range(-2..=2);
        }
    }
    // Inverse of a unit lower triangular matrix by forward substitution.
    let mut inv = vec![vec![0i64; size]; size];
    for col in 0..size {
        for i in 0..size {
            let mut v = i64::from(i == col);
            for j in 0..i {
                v -= b[i][j] * inv[j][col];
            }
            inv[i][col] = v;
        }
    }
    // New basis f_i = sum_j b[i][j] e_j; f_i f_k = sum_{j,l} b[i][j] b[k][l] e_{t[j][l]}.
    let mut c = vec![vec![vec![q(0); size]; size]; size];
    for i in 0..size {
        for k in 0..size {
            let mut in_e = vec![0i64; size];
            for j in 0..size {
                for l in 0..size {
                    in_e[t[j][l]] += b[i][j] * b[k][l];
                }
            }
            // e_m = sum_n inv[m][n] f_n, since b is the matrix from e to f.
            for m in 0..size {
                for n in 0..size {
                    c[i][k][n] += q(in_e[m] * inv[m][n]);
                }
            }
        }
    }
    // The unit e_0 = sum_n inv[0][n] f_n.
    let one: Vec<BigRational> = (0..size).map(|n| q(inv[0][n])).collect();
    let a = FiniteDimAlgebra::new(field, c.clone(), one).expect("monoid algebras are unital and associative");
    (a, c, p)
}

/// Number of classes of `(a1, a2) ~ (b1, b2) iff a1 + b2 + c = b1 + a2 + c` for some `c`,
/// closed under transitivity.
pub fn naive_completion_order(op: &[Vec<usize>]) -> usize {
    let n = op.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).collect();
    let mut parent: Vec<usize> = (0..pairs.len()).collect();
    fn find(p: &mut Vec<usize>, x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    for (i, &(a1, a2)) in pairs.iter().enumerate() {
        for (j, &(b1, b2)) in pairs.iter().enumerate() {
            if (0..n).any(|c| op[op[a1][b2]][c] == op[op[b1][a2]][c]) {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                parent[ri] = rj;
            }
        }
    }
    (0..pairs.len()).filter(|&i| find(&mut parent, i) == i).count()
}

/// Random commutative monoid tables of the given size with identity `0`.
pub fn random_commutative_monoid(rng: &mut impl Rng, size: usize) -> Vec<Vec<usize>> {
    loop {
        let mut t = vec![vec![0; size]; size];
        for x in 0..size {
            t[0][x] = x;
            t[x][0] = x;
        }
        for x in 1..size {
            for y in x..size {
                let v = rng.gen_range(0..size);
                t[x][y] = v;
                t[y][x] = v;
            }
        }
        if (0..size).all(|x| (0..size).all(|y| (0..size).all(|z| t[t[x][y]][z] == t[x][t[y][z]]))) {
            return t;
        }
    }
}

pub fn z(n: usize) -> FgAbGroup {
    FgAbGroup::free(n)
}

pub fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

pub fn is_unimodular(m: &IntMatrix) -> bool {
    let d = m.determinant();
    d.abs().is_one()
}

pub fn to_i128_rows(m: &IntMatrix) -> Vec<Vec<i128>> {
    m.to_rows().iter().map(|r| r.iter().map(|e| e.to_i128().unwrap()).collect()).collect()
}

pub fn timed<T>(f: impl FnOnce() -> T) -> (T, std::time::Duration) {
    let start = std::time::Instant::now();
    let v = f();
    (v, start.elapsed())
}

pub fn labels_map(x: &FiniteSpace) -> BTreeMap<String, usize> {
    x.labels().iter().enumerate().map(|(i, l)| (l.clone(), i)).collect()
}
