//! Random instances and an independent dense rank oracle shared by the
//! integration tests.
#![allow(dead_code)]

use std::sync::Arc;

use dgdeform::cochain::{CochainComplex, DgModule};
use dgdeform::deform::{gauge_transform, MapSeries};
use dgdeform::dsl::Document;
use dgdeform::field::{FieldSpec, Scalar};
use dgdeform::gmap::GradedMap;
use dgdeform::graded::GradedModule;
use num::{BigInt, BigRational, One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn fields() -> [FieldSpec; 3] {
    [
        FieldSpec::Rationals,
        FieldSpec::prime(2).unwrap(),
        FieldSpec::prime(5).unwrap(),
    ]
}

pub fn random_field(rng: &mut TestRng) -> FieldSpec {
    *fields().choose(rng).unwrap()
}

/// Small integers, and small fractions over `Q`.
pub fn random_scalar(rng: &mut TestRng, field: FieldSpec) -> Scalar {
    let num = rng.gen_range(-3..=3i64);
    let den = if field == FieldSpec::Rationals && rng.gen_bool(0.25) {
        rng.gen_range(2..=3i64)
    } else {
        1
    };
    Scalar::from_frac(field, num, den).unwrap()
}

pub fn random_nonzero(rng: &mut TestRng, field: FieldSpec) -> Scalar {
    loop {
        let c = random_scalar(rng, field);
        if !c.is_zero() {
            return c;
        }
    }
}

/// Basis `e0, e1, ...` of size `2..=max_dim` in degrees `0..=3`.
pub fn random_module(rng: &mut TestRng, field: FieldSpec, max_dim: usize) -> Arc<GradedModule> {
    let dim = rng.gen_range(2..=max_dim);
    let basis = (0..dim).map(|k| (format!("e{k}"), rng.gen_range(0..=3i64)));
    GradedModule::new("V", field, basis.collect::<Vec<_>>()).unwrap()
}

/// Random map of the given degree; each admissible entry is nonzero with
/// probability `density`.
pub fn random_map(
    rng: &mut TestRng,
    v: &Arc<GradedModule>,
    degree: i64,
    density: f64,
) -> GradedMap {
    let mut m = GradedMap::zero(v, v, degree);
    for j in 0..v.dim() {
        for i in v.component_indices(v.degree_of(j) + degree) {
            if rng.gen_bool(density) {
                let c = random_nonzero(rng, v.field());
                let e = GradedMap::elementary(v, v.name_of(i), v.name_of(j), c).unwrap();
                m = m.add(&e).unwrap();
            }
        }
    }
    m
}

/// `Id + c e_{ij}` with `|x_i| = |x_j|`, `i ≠ j`, together with its inverse.
fn random_transvection(rng: &mut TestRng, v: &Arc<GradedModule>) -> Option<(GradedMap, GradedMap)> {
    let j = rng.gen_range(0..v.dim());
    let others: Vec<usize> = v
        .component_indices(v.degree_of(j))
        .into_iter()
        .filter(|&i| i != j)
        .collect();
    let &i = others.choose(rng)?;
    let c = random_nonzero(rng, v.field());
    let e = GradedMap::elementary(v, v.name_of(i), v.name_of(j), c).unwrap();
    let id = GradedMap::identity(v);
    Some((id.add(&e).unwrap(), id.sub(&e).unwrap()))
}

/// Random degree-preserving automorphism and its inverse.
pub fn random_automorphism(rng: &mut TestRng, v: &Arc<GradedModule>) -> (GradedMap, GradedMap) {
    let (mut g, mut g_inv) = (GradedMap::identity(v), GradedMap::identity(v));
    for _ in 0..2 * v.dim() {
        if let Some((t, t_inv)) = random_transvection(rng, v) {
            g = t.compose(&g).unwrap();
            g_inv = g_inv.compose(&t_inv).unwrap();
        }
    }
    (g, g_inv)
}

/// A random differential of degree -1: a random matching `x_a -> x_b` with
/// `|x_b| = |x_a| - 1`, conjugated by a random automorphism.
pub fn random_complex(rng: &mut TestRng, field: FieldSpec, max_dim: usize) -> DgModule {
    let v = random_module(rng, field, max_dim);
    let mut order: Vec<usize> = (0..v.dim()).collect();
    order.shuffle(rng);
    let mut used = vec![false; v.dim()];
    let mut d = GradedMap::zero(&v, &v, -1);
    for &a in &order {
        if used[a] || !rng.gen_bool(0.8) {
            continue;
        }
        let free: Vec<usize> = v
            .component_indices(v.degree_of(a) - 1)
            .into_iter()
            .filter(|&b| !used[b])
            .collect();
        if let Some(&b) = free.choose(rng) {
            used[a] = true;
            used[b] = true;
            let e = GradedMap::elementary(&v, v.name_of(b), v.name_of(a), field.one()).unwrap();
            d = d.add(&e).unwrap();
        }
    }
    let (g, g_inv) = random_automorphism(rng, &v);
    let d = g.compose(&d).unwrap().compose(&g_inv).unwrap();
    DgModule::new(d).unwrap()
}

/// Rejection-samples a random complex whose endomorphism cohomology vanishes
/// in degree `p`.
pub fn random_complex_with_vanishing(rng: &mut TestRng, max_dim: usize, p: i64) -> DgModule {
    loop {
        let field = random_field(rng);
        let dg = random_complex(rng, field, max_dim);
        if CochainComplex::endomorphisms(dg.clone())
            .cohomology(p)
            .dim_h
            == 0
        {
            return dg;
        }
    }
}

pub fn cochain_map(cx: &CochainComplex, p: i64, coords: &[Scalar]) -> GradedMap {
    let v = cx.source().module();
    let basis = cx.basis(p);
    let mut m = GradedMap::zero(v, v, -p);
    for (&(j, i), c) in basis.iter().zip(coords) {
        if !c.is_zero() {
            let e = GradedMap::elementary(v, v.name_of(i), v.name_of(j), c.clone()).unwrap();
            m = m.add(&e).unwrap();
        }
    }
    m
}

/// Random element of the cocycle space `Z^p`.
pub fn random_cocycle(rng: &mut TestRng, cx: &CochainComplex, p: i64) -> GradedMap {
    let field = cx.field();
    let kernel = cx.coboundary_matrix(p).kernel_basis();
    let mut coords = vec![field.zero(); cx.dim(p)];
    for k in &kernel {
        let c = random_scalar(rng, field);
        for (x, y) in coords.iter_mut().zip(k) {
            *x = &*x + &(&c * y);
        }
    }
    cochain_map(cx, p, &coords)
}

/// `φ_t ∘ (d + 0 t + ...) ∘ φ_t^{-1}` for a random `φ_t = Id + t φ_1 + ...`.
pub fn random_gauge_deformation(rng: &mut TestRng, dg: &DgModule, order: usize) -> MapSeries {
    let v = dg.module();
    let mut coeffs = vec![GradedMap::identity(v)];
    for _ in 0..order {
        coeffs.push(random_map(rng, v, 0, 0.3));
    }
    let phi = MapSeries::from_coeffs(v, 0, coeffs, order).unwrap();
    let d_t = MapSeries::deformation(dg.differential(), &[], order).unwrap();
    gauge_transform(&d_t, &phi).unwrap()
}

fn random_ident(rng: &mut TestRng, prefix: &str) -> String {
    const CHARS: &[u8] = b"abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_";
    let len = rng.gen_range(0..5);
    let tail: String = (0..len)
        .map(|_| *CHARS.choose(rng).unwrap() as char)
        .collect();
    format!("{prefix}{tail}")
}

/// A random document: module with random names and degrees in `-2..=3`,
/// a few maps of random degrees, and sometimes a deformation block.
pub fn random_document(rng: &mut TestRng) -> Document {
    let field = *[
        FieldSpec::Rationals,
        FieldSpec::prime(2).unwrap(),
        FieldSpec::prime(5).unwrap(),
        FieldSpec::prime(101).unwrap(),
    ]
    .choose(rng)
    .unwrap();
    let dim = rng.gen_range(0..=8);
    let mut names: Vec<String> = Vec::new();
    while names.len() < dim {
        let n = random_ident(rng, &format!("b{}", names.len()));
        if !names.contains(&n) {
            names.push(n);
        }
    }
    let basis: Vec<(String, i64)> = names
        .into_iter()
        .map(|n| (n, rng.gen_range(-2..=3)))
        .collect();
    let v = GradedModule::new(random_ident(rng, "M"), field, basis).unwrap();
    let mut maps = Vec::new();
    for k in 0..rng.gen_range(0..=4) {
        let degree = rng.gen_range(-2..=1);
        maps.push((
            format!("{}{k}", random_ident(rng, "f")),
            random_map(rng, &v, degree, 0.4),
        ));
    }
    let deformation = if !maps.is_empty() && rng.gen_bool(0.5) {
        let mut orders: Vec<usize> = (1..=6).collect();
        orders.shuffle(rng);
        let count = rng.gen_range(0..=maps.len().min(3));
        Some(
            orders[..count]
                .iter()
                .map(|&k| (k, maps.choose(rng).unwrap().0.clone()))
                .collect(),
        )
    } else {
        None
    };
    Document::new(v, maps, deformation).unwrap()
}

/// Exact rank by dense Gaussian elimination, over `Q` with big rationals or
/// over `GF(p)` with machine residues.
pub fn oracle_rank(field: FieldSpec, rows: Vec<Vec<Scalar>>) -> usize {
    match field {
        FieldSpec::Rationals => {
            let m = rows
                .into_iter()
                .map(|r| {
                    r.into_iter()
                        .map(|s| {
                            let (n, d) = s.as_fraction();
                            BigRational::new(n, d)
                        })
                        .collect()
                })
                .collect();
            rank_q(m)
        }
        FieldSpec::PrimeField(p) => {
            let m = rows
                .into_iter()
                .map(|r| {
                    r.into_iter()
                        .map(|s| {
                            let (n, _) = s.as_fraction();
                            let r = n % BigInt::from(p);
                            let r = if r.is_negative() {
                                r + BigInt::from(p)
                            } else {
                                r
                            };
                            u64::try_from(r).unwrap()
                        })
                        .collect()
                })
                .collect();
            rank_mod(m, p)
        }
    }
}

fn rank_q(mut m: Vec<Vec<BigRational>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(r) = (rank..rows).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, r);
        let inv = BigRational::one() / m[rank][c].clone();
        for r in 0..rows {
            if r != rank && !m[r][c].is_zero() {
                let factor = m[r][c].clone() * inv.clone();
                let pivot_row = m[rank].clone();
                for (x, y) in m[r].iter_mut().zip(&pivot_row).skip(c) {
                    *x -= factor.clone() * y.clone();
                }
            }
        }
        rank += 1;
    }
    rank
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

fn rank_mod(mut m: Vec<Vec<u64>>, p: u64) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(r) = (rank..rows).find(|&r| m[r][c] != 0) else {
            continue;
        };
        m.swap(rank, r);
        let inv = pow_mod(m[rank][c], p - 2, p);
        for r in 0..rows {
            if r != rank && m[r][c] != 0 {
                let factor = m[r][c] * inv % p;
                let pivot_row = m[rank].clone();
                for (x, y) in m[r].iter_mut().zip(&pivot_row).skip(c) {
                    *x = (*x + p - factor * y % p) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Dense matrix of `d`: entry `[i][j]` is the coefficient of `x_i` in `d(x_j)`.
pub fn dense(d: &GradedMap) -> Vec<Vec<Scalar>> {
    let n = d.source().dim();
    let mut out = vec![vec![d.field().zero(); n]; n];
    for (j, i, c) in d.entries() {
        out[i][j] = c.clone();
    }
    out
}

/// `(dim C^p, rank δ^p)` for `C*(V; V)`, built from scratch with dense
/// `n × n` matrices: `δ(E_ij) = D E_ij - (-1)^p E_ij D`.
pub fn oracle_delta(d: &GradedMap, p: i64) -> (usize, usize) {
    let v = d.source();
    let field = d.field();
    let n = v.dim();
    let dm = dense(d);
    let sign = if p.rem_euclid(2) == 0 {
        field.one()
    } else {
        -field.one()
    };
    let mut columns: Vec<Vec<Scalar>> = Vec::new();
    for j in 0..n {
        for i in 0..n {
            if v.degree_of(i) != v.degree_of(j) - p {
                continue;
            }
            let mut img = vec![vec![field.zero(); n]; n];
            for a in 0..n {
                img[a][j] = &img[a][j] + &dm[a][i];
            }
            for b in 0..n {
                img[i][b] = &img[i][b] - &(&sign * &dm[j][b]);
            }
            columns.push(img.into_iter().flatten().collect());
        }
    }
    let dim = columns.len();
    (dim, oracle_rank(field, columns))
}

/// `(dim Z^p, dim B^p, dim H^p)` from the oracle.
pub fn oracle_cohomology(d: &GradedMap, p: i64) -> (usize, usize, usize) {
    let (dim, rank_p) = oracle_delta(d, p);
    let (_, rank_prev) = oracle_delta(d, p - 1);
    let cocycles = dim - rank_p;
    (cocycles, rank_prev, cocycles - rank_prev)
}
