#![allow(dead_code)]
#![allow(clippy::needless_range_loop)]

use rand::Rng;
use semiso::fmap::PolyMap;
use semiso::gf::{Elem, Field, FieldSpec};
use semiso::planar::{ea_transform, is_planar_bruteforce, quadratic_part};

pub fn f9() -> Field {
    Field::new(FieldSpec::new(3, &[1, 0, 1]).unwrap())
}

pub fn f27() -> Field {
    Field::new(FieldSpec::new(3, &[1, 2, 0, 1]).unwrap())
}

/// f1 = x^270 - x^246 + x^90 - x^82 - x^54 + x^30 - x^10 - x^2 over the canonical field.
pub fn f1(field: &Field) -> PolyMap {
    PolyMap::from_int_terms(
        field,
        &[
            (270, 1),
            (246, -1),
            (90, 1),
            (82, -1),
            (54, -1),
            (30, 1),
            (10, -1),
            (2, -1),
        ],
    )
}

/// f2 = l^3 (x^270 - x^246 - l^2 x^90 + l^2 x^82 - x^54 + x^30 + l^2 x^10 + l^2 x^2), l = xi^91.
pub fn f2(field: &Field) -> PolyMap {
    let l = field.pow(field.generator(), 91);
    let l2 = field.pow(l, 2);
    let one = Elem::ONE;
    let m1 = field.neg(one);
    PolyMap::from_terms(
        field,
        &[
            (270, one),
            (246, m1),
            (90, field.neg(l2)),
            (82, l2),
            (54, m1),
            (30, one),
            (10, l2),
            (2, l2),
        ],
    )
    .scale(field.pow(l, 3))
}

pub fn random_elem<R: Rng>(field: &Field, rng: &mut R) -> Elem {
    Elem(rng.gen_range(0..field.order() as u32))
}

/// A random affine permutation `sum a_i x^(p^i) + c`.
pub fn random_affine_permutation<R: Rng>(field: &Field, rng: &mut R) -> PolyMap {
    let p = u64::from(field.p());
    loop {
        let mut terms: Vec<(u64, Elem)> = (0..field.degree())
            .map(|i| (p.pow(i as u32), random_elem(field, rng)))
            .collect();
        terms.push((0, random_elem(field, rng)));
        let l = PolyMap::from_terms(field, &terms);
        if l.is_permutation() {
            return l;
        }
    }
}

pub fn random_linear_permutation<R: Rng>(field: &Field, rng: &mut R) -> PolyMap {
    let l = random_affine_permutation(field, rng);
    let c = l.coeff(0);
    l.sub(&PolyMap::constant(field, c)).unwrap()
}

/// A random affine function (not necessarily a permutation).
pub fn random_affine<R: Rng>(field: &Field, rng: &mut R) -> PolyMap {
    let p = u64::from(field.p());
    let mut terms: Vec<(u64, Elem)> = (0..field.degree())
        .map(|i| (p.pow(i as u32), random_elem(field, rng)))
        .collect();
    terms.push((0, random_elem(field, rng)));
    PolyMap::from_terms(field, &terms)
}

pub fn random_ea_transform<R: Rng>(f: &PolyMap, rng: &mut R) -> PolyMap {
    let field = f.field();
    let l1 = random_affine_permutation(field, rng);
    let l2 = random_affine_permutation(field, rng);
    let l3 = random_affine(field, rng);
    ea_transform(f, &l1, &l2, &l3).unwrap()
}

/// Random planar DO polynomials found by rejection sampling.
pub fn planar_do_candidates<R: Rng>(field: &Field, rng: &mut R, wanted: usize) -> Vec<PolyMap> {
    let p = u64::from(field.p());
    let n = field.degree() as u32;
    let exps: Vec<u64> = (0..n)
        .flat_map(|i| (i..n).map(move |j| p.pow(i) + p.pow(j)))
        .collect();
    let mut out = Vec::new();
    while out.len() < wanted {
        let terms: Vec<(u64, Elem)> = exps.iter().map(|&e| (e, random_elem(field, rng))).collect();
        let f = PolyMap::from_terms(field, &terms);
        if is_planar_bruteforce(&f) {
            out.push(f);
        }
    }
    out
}

/// Independent affine-equivalence oracle for planar DO functions over small
/// fields. Works on coordinate vectors only: it runs through every
/// invertible matrix `M` over F_p and checks whether `x -> Q_f(Mx)` and
/// `Q_g` differ by an invertible linear map on the output side, where `Q`
/// drops affine terms. Returns `(M, L)` as row-major matrices when found.
pub fn oracle_affine_equivalent(f: &PolyMap, g: &PolyMap) -> Option<(Vec<u32>, Vec<u32>)> {
    let field = f.field();
    let p = field.p();
    let n = field.degree();
    let q = field.order();
    let vec_of = |e: Elem| field.coeffs(e);
    let elem_of = |v: &[u32]| {
        field
            .from_coeffs(&v.iter().map(|&x| i64::from(x)).collect::<Vec<_>>())
            .unwrap()
    };
    let tf: Vec<Vec<u32>> = quadratic_part(f).table().into_iter().map(vec_of).collect();
    let tg: Vec<Vec<u32>> = quadratic_part(g).table().into_iter().map(vec_of).collect();
    let points: Vec<Vec<u32>> = field.elements().map(vec_of).collect();

    let entries = n * n;
    let total = (p as u64).pow(entries as u32);
    for code in 0..total {
        let mut mat = vec![0u32; entries];
        let mut c = code;
        for e in mat.iter_mut() {
            *e = (c % u64::from(p)) as u32;
            c /= u64::from(p);
        }
        if det_mod(&mat, n, p) == 0 {
            continue;
        }
        // h(x) = Q_f(Mx) as a table over coordinate vectors
        let h: Vec<&Vec<u32>> = points
            .iter()
            .map(|x| {
                let mx: Vec<u32> = (0..n)
                    .map(|i| (0..n).map(|j| mat[i * n + j] * x[j]).sum::<u32>() % p)
                    .collect();
                &tf[elem_of(&mx).index()]
            })
            .collect();
        if let Some(l) = solve_output_map(&h, &tg, n, p, q) {
            return Some((mat, l));
        }
    }
    None
}

/// Finds an invertible `L` with `L h(x) = t(x)` for all x.
fn solve_output_map(h: &[&Vec<u32>], t: &[Vec<u32>], n: usize, p: u32, q: usize) -> Option<Vec<u32>> {
    // pick a basis among the h values
    let mut basis_idx: Vec<usize> = Vec::new();
    let mut rows: Vec<Vec<u32>> = Vec::new();
    for x in 0..q {
        let mut cand = rows.clone();
        cand.push(h[x].clone());
        if rank_mod(&cand, n, p) > rows.len() {
            rows = cand;
            basis_idx.push(x);
            if rows.len() == n {
                break;
            }
        }
    }
    if rows.len() < n {
        return None;
    }
    // L B = T where B has the basis h values as columns
    let mut b = vec![0u32; n * n];
    for (c, &x) in basis_idx.iter().enumerate() {
        for r in 0..n {
            b[r * n + c] = h[x][r];
        }
    }
    let binv = inverse_mod(&b, n, p)?;
    let mut l = vec![0u32; n * n];
    for r in 0..n {
        for c in 0..n {
            let mut s = 0;
            for k in 0..n {
                s += t[basis_idx[k]][r] * binv[k * n + c];
            }
            l[r * n + c] = s % p;
        }
    }
    if det_mod(&l, n, p) == 0 {
        return None;
    }
    for x in 0..q {
        for r in 0..n {
            let v: u32 = (0..n).map(|c| l[r * n + c] * h[x][c]).sum::<u32>() % p;
            if v != t[x][r] {
                return None;
            }
        }
    }
    Some(l)
}

fn rank_mod(rows: &[Vec<u32>], n: usize, p: u32) -> usize {
    let mut m: Vec<Vec<u32>> = rows.to_vec();
    let mut rank = 0;
    for c in 0..n {
        let Some(piv) = (rank..m.len()).find(|&r| m[r][c] != 0) else {
            continue;
        };
        m.swap(rank, piv);
        let inv = inv(m[rank][c], p);
        let pr: Vec<u32> = m[rank].iter().map(|&v| v * inv % p).collect();
        m[rank] = pr.clone();
        for r in 0..m.len() {
            if r != rank && m[r][c] != 0 {
                let f = m[r][c];
                for k in 0..n {
                    m[r][k] = (m[r][k] + (p - f) * pr[k]) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn inv(a: u32, p: u32) -> u32 {
    (1..p).find(|&b| a * b % p == 1).unwrap()
}

fn det_mod(m: &[u32], n: usize, p: u32) -> u32 {
    let rows: Vec<Vec<u32>> = (0..n).map(|r| m[r * n..(r + 1) * n].to_vec()).collect();
    u32::from(rank_mod(&rows, n, p) == n)
}

fn inverse_mod(m: &[u32], n: usize, p: u32) -> Option<Vec<u32>> {
    let mut a: Vec<Vec<u32>> = (0..n)
        .map(|r| {
            let mut row = m[r * n..(r + 1) * n].to_vec();
            row.extend((0..n).map(|c| u32::from(c == r)));
            row
        })
        .collect();
    for c in 0..n {
        let piv = (c..n).find(|&r| a[r][c] != 0)?;
        a.swap(c, piv);
        let iv = inv(a[c][c], p);
        for k in 0..2 * n {
            a[c][k] = a[c][k] * iv % p;
        }
        for r in 0..n {
            if r != c && a[r][c] != 0 {
                let f = a[r][c];
                for k in 0..2 * n {
                    a[r][k] = (a[r][k] + (p - f) * a[c][k]) % p;
                }
            }
        }
    }
    Some((0..n).flat_map(|r| a[r][n..].to_vec()).collect())
}
