//! Tridiagonal pairs of q-Racah type realized on quantum loop algebra
//! modules: `A = a X01 + a^{-1} X12`, `A* = b X23 + b^{-1} X30`.
//!
//! Eigenvalues are never solved for. The q-Racah formula predicts them and
//! the eigenspaces are kernels; a parameter point where the prediction does
//! not produce a full eigenspace decomposition is rejected as degenerate.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matrix::{Matrix, SpanBuilder, Subspace};
use crate::report::{Status, VerificationReport, Witness};
use crate::scalar::{pow, q_minus_qinv, Rational};
use crate::uq::{equitable_generators, EquitableGenerators, Representation};

const AXIOMS: &str = "td-pair-axioms";
const SPLIT: &str = "split-decomposition";

/// `a q^{2i-d} + a^{-1} q^{d-2i}` for `i = 0..=d`.
pub fn qracah_eigenvalues(a: &Rational, q: &Rational, d: usize) -> Vec<Rational> {
    let d = d as i64;
    (0..=d)
        .map(|i| a * pow(q, 2 * i - d) + a.recip() * pow(q, d - 2 * i))
        .collect()
}

/// `(th[i-2] - th[i+1]) / (th[i-1] - th[i])` for `2 <= i <= d-1`.
pub fn eigenvalue_ratios(th: &[Rational]) -> Vec<Rational> {
    let d = th.len().saturating_sub(1);
    (2..d)
        .map(|i| (&th[i - 2] - &th[i + 1]) / (&th[i - 1] - &th[i]))
        .collect()
}

#[derive(Clone, Debug)]
pub struct TdPairData {
    pub a_mat: Matrix,
    pub astar: Matrix,
    pub d: usize,
    pub a: Rational,
    pub b: Rational,
    pub q: Rational,
    pub theta: Vec<Rational>,
    pub theta_star: Vec<Rational>,
    /// Eigenspaces of `A` in the q-Racah (standard) order.
    pub v_spaces: Vec<Subspace>,
    /// Eigenspaces of `A*` in the q-Racah (standard) order.
    pub vstar_spaces: Vec<Subspace>,
    pub equitable: EquitableGenerators,
}

impl TdPairData {
    pub fn dim(&self) -> usize {
        self.a_mat.rows()
    }
}

fn all_distinct(xs: &[Rational]) -> bool {
    xs.iter()
        .enumerate()
        .all(|(i, x)| xs[i + 1..].iter().all(|y| x != y))
}

fn eigenspaces(m: &Matrix, theta: &[Rational], which: &str) -> Result<Vec<Subspace>> {
    let n = m.rows();
    let spaces: Vec<Subspace> = theta
        .iter()
        .map(|th| (m - &Matrix::identity(n).scale(th)).kernel())
        .collect();
    if let Some(i) = spaces.iter().position(|s| s.dim() == 0) {
        return Err(Error::DegenerateParameters(format!(
            "{which} has no eigenvector for predicted eigenvalue {} (index {i})",
            theta[i]
        )));
    }
    let total: usize = spaces.iter().map(Subspace::dim).sum();
    if total != n {
        return Err(Error::DegenerateParameters(format!(
            "{which} eigenspaces have total dimension {total}, expected {n}"
        )));
    }
    Ok(spaces)
}

/// Assembles the pair from the equitable generators of `rep` and computes
/// both eigenspace decompositions from the predicted spectra.
pub fn build_td_pair(rep: &Representation, a: &Rational, b: &Rational) -> Result<TdPairData> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::InvalidParameter("a and b must be nonzero".into()));
    }
    let x = equitable_generators(rep)?;
    let q = rep.q().clone();
    let d = rep.diameter();
    let a_mat = x.x01.scale(a) + x.x12.scale(&a.recip());
    let astar = x.x23.scale(b) + x.x30.scale(&b.recip());
    let theta = qracah_eigenvalues(a, &q, d);
    let theta_star = qracah_eigenvalues(b, &q, d);
    if !all_distinct(&theta) {
        return Err(Error::DegenerateParameters(
            "eigenvalues of A coincide".into(),
        ));
    }
    if !all_distinct(&theta_star) {
        return Err(Error::DegenerateParameters(
            "eigenvalues of A* coincide".into(),
        ));
    }
    let v_spaces = eigenspaces(&a_mat, &theta, "A")?;
    let vstar_spaces = eigenspaces(&astar, &theta_star, "A*")?;
    Ok(TdPairData {
        a_mat,
        astar,
        d,
        a: a.clone(),
        b: b.clone(),
        q,
        theta,
        theta_star,
        v_spaces,
        vstar_spaces,
        equitable: x,
    })
}

/// True iff `op` maps each `spaces[order[i]]` into the sum of its
/// neighbours in `order`.
pub fn is_standard_ordering(op: &Matrix, spaces: &[Subspace], order: &[usize]) -> bool {
    let n = op.rows();
    (0..order.len()).all(|i| {
        let lo = i.saturating_sub(1);
        let hi = (i + 1).min(order.len() - 1);
        let target = Subspace::sum_all(n, order[lo..=hi].iter().map(|&k| &spaces[k]));
        target.contains_subspace(&spaces[order[i]].image(op))
    })
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut p = p.clone();
            p.insert(pos, n - 1);
            out.push(p);
        }
    }
    out.sort();
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Irreducibility {
    Irreducible,
    Reducible,
    Inconclusive,
}

/// Outcome of the word-span search together with its certificate: the span
/// dimension after words of length 0, 1, 2, ...
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IrreducibilityCertificate {
    pub verdict: Irreducibility,
    pub profile: Vec<usize>,
}

/// Dimension of the unital algebra generated by `gens`, grown one word
/// length at a time. Stops at `n^2` (full matrix algebra), when a round adds
/// nothing, or after `max_len` rounds.
pub fn algebra_span(gens: &[&Matrix], max_len: usize) -> IrreducibilityCertificate {
    let n = gens.first().map_or(0, |g| g.rows());
    let full = n * n;
    let mut span = SpanBuilder::new();
    let id = Matrix::identity(n);
    span.insert(id.entries());
    let mut frontier = vec![id];
    let mut profile = vec![span.dim()];
    if span.dim() == full {
        return IrreducibilityCertificate {
            verdict: Irreducibility::Irreducible,
            profile,
        };
    }
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for g in gens {
                let m = *g * w;
                if span.insert(m.entries()) {
                    next.push(m);
                }
            }
        }
        profile.push(span.dim());
        if span.dim() == full {
            return IrreducibilityCertificate {
                verdict: Irreducibility::Irreducible,
                profile,
            };
        }
        if next.is_empty() {
            return IrreducibilityCertificate {
                verdict: Irreducibility::Reducible,
                profile,
            };
        }
        frontier = next;
    }
    IrreducibilityCertificate {
        verdict: Irreducibility::Inconclusive,
        profile,
    }
}

/// Burnside test: the pair acts irreducibly iff words in `A, A*` span the
/// full matrix algebra. Word length is capped at `dim^2`.
pub fn verify_irreducible(td: &TdPairData) -> IrreducibilityCertificate {
    let n = td.dim();
    algebra_span(&[&td.a_mat, &td.astar], n * n)
}

fn eigen_check(r: &mut VerificationReport, name: String, m: &Matrix, th: &Rational, s: &Subspace) {
    r.check_eq(name, AXIOMS, || {
        let b = s.basis_matrix();
        (m * &b, b.scale(th))
    });
}

/// Diagonalizability, eigenvalues, both tridiagonal containments, the
/// uniqueness of the standard ordering up to reversal, the constant
/// eigenvalue ratio and irreducibility.
pub fn verify_tridiagonal_axioms(td: &TdPairData) -> VerificationReport {
    let n = td.dim();
    let d = td.d;
    let mut r = VerificationReport::new();
    for (label, m, th, spaces) in [
        ("A", &td.a_mat, &td.theta, &td.v_spaces),
        ("A*", &td.astar, &td.theta_star, &td.vstar_spaces),
    ] {
        r.check(format!("{label} diagonalizable"), AXIOMS, || {
            let total: usize = spaces.iter().map(Subspace::dim).sum();
            if total == n && Subspace::is_direct_sum(spaces).unwrap_or(false) {
                Ok(())
            } else {
                Err(Witness::Text(format!("eigenspace dimensions sum to {total} of {n}")))
            }
        });
        for (i, (t, s)) in th.iter().zip(spaces).enumerate() {
            eigen_check(&mut r, format!("{label} acts as theta_{i} on its eigenspace {i}"), m, t, s);
        }
    }
    if td.v_spaces.len() != td.vstar_spaces.len() {
        r.push(
            "diameters agree",
            AXIOMS,
            Status::Fail,
            Some(Witness::Text(format!(
                "{} vs {} eigenspaces",
                td.v_spaces.len(),
                td.vstar_spaces.len()
            ))),
        );
    }
    let natural: Vec<usize> = (0..=d).collect();
    let reversed: Vec<usize> = (0..=d).rev().collect();
    for (label, op, spaces) in [
        ("A* on eigenspaces of A", &td.astar, &td.v_spaces),
        ("A on eigenspaces of A*", &td.a_mat, &td.vstar_spaces),
    ] {
        for i in 0..=d {
            r.check(format!("{label}: tridiagonal at {i}"), AXIOMS, || {
                let lo = i.saturating_sub(1);
                let hi = (i + 1).min(d);
                let target = Subspace::sum_all(n, spaces[lo..=hi].iter());
                if target.contains_subspace(&spaces[i].image(op)) {
                    Ok(())
                } else {
                    Err(Witness::Text(format!("image of space {i} leaves spaces {lo}..={hi}")))
                }
            });
        }
        r.check(format!("{label}: reversed ordering is standard"), AXIOMS, || {
            if is_standard_ordering(op, spaces, &reversed) {
                Ok(())
            } else {
                Err(Witness::Text("reversed ordering is not standard".into()))
            }
        });
        if d == 2 {
            for p in permutations(3) {
                if p == natural || p == reversed {
                    continue;
                }
                r.check(format!("{label}: ordering {p:?} is not standard"), AXIOMS, || {
                    if is_standard_ordering(op, spaces, &p) {
                        Err(Witness::Text(format!("ordering {p:?} is standard")))
                    } else {
                        Ok(())
                    }
                });
            }
        }
    }
    if d >= 3 {
        let q = &td.q;
        let expected = pow(q, 2) + Rational::one() + pow(q, -2);
        for (label, th) in [("theta", &td.theta), ("theta*", &td.theta_star)] {
            for (k, ratio) in eigenvalue_ratios(th).into_iter().enumerate() {
                let i = k + 2;
                r.check(format!("{label} ratio at i={i} is q^2 + 1 + q^-2"), AXIOMS, || {
                    if ratio == expected {
                        Ok(())
                    } else {
                        Err(Witness::Scalar(ratio - &expected))
                    }
                });
            }
        }
    }
    let cert = verify_irreducible(td);
    let status = match cert.verdict {
        Irreducibility::Irreducible => Status::Pass,
        Irreducibility::Reducible => Status::Fail,
        Irreducibility::Inconclusive => Status::Inconclusive,
    };
    let witness = (status != Status::Pass)
        .then(|| Witness::Text(format!("span dimension profile {:?}", cert.profile)));
    r.push("words in A, A* span the full matrix algebra", AXIOMS, status, witness);
    r
}

#[derive(Clone, Debug)]
pub struct SplitDecomposition {
    pub u_spaces: Vec<Subspace>,
    /// Columns are the concatenated bases of `U_0, ..., U_d`.
    pub adapted_basis: Matrix,
    pub k: Matrix,
    pub k_inv: Matrix,
    pub r: Matrix,
}

impl SplitDecomposition {
    /// Column ranges of each `U_i` inside the adapted basis.
    pub fn blocks(&self) -> Vec<std::ops::Range<usize>> {
        let mut start = 0;
        self.u_spaces
            .iter()
            .map(|u| {
                let r = start..start + u.dim();
                start += u.dim();
                r
            })
            .collect()
    }

    pub fn u(&self, i: isize) -> Subspace {
        let n = self.k.rows();
        if i < 0 || i as usize >= self.u_spaces.len() {
            Subspace::zero(n)
        } else {
            self.u_spaces[i as usize].clone()
        }
    }
}

fn partial_sums(spaces: &[Subspace], n: usize) -> Vec<Subspace> {
    let mut acc = Subspace::zero(n);
    spaces
        .iter()
        .map(|s| {
            acc = acc.sum(s).expect("same ambient");
            acc.clone()
        })
        .collect()
}

/// `U_i = (V*_0 + ... + V*_i) ∩ (V_0 + ... + V_{d-i})`, then `K` with
/// eigenvalue `q^{d-2i}` on `U_i` and `R = A - aK - a^{-1}K^{-1}`.
pub fn split_decomposition(td: &TdPairData) -> Result<SplitDecomposition> {
    let n = td.dim();
    let d = td.d;
    let star_sums = partial_sums(&td.vstar_spaces, n);
    let sums = partial_sums(&td.v_spaces, n);
    let u_spaces: Vec<Subspace> = (0..=d)
        .map(|i| star_sums[i].intersect(&sums[d - i]))
        .collect::<Result<_>>()?;
    if !Subspace::is_direct_sum(&u_spaces)? || u_spaces.iter().map(Subspace::dim).sum::<usize>() != n {
        return Err(Error::DegenerateParameters(format!(
            "split spaces do not decompose V (dimensions {:?})",
            u_spaces.iter().map(Subspace::dim).collect::<Vec<_>>()
        )));
    }
    let lower = partial_sums(&u_spaces, n);
    let upper: Vec<Subspace> = (0..=d)
        .map(|i| Subspace::sum_all(n, u_spaces[i..].iter()))
        .collect();
    for i in 0..=d {
        if lower[i] != star_sums[i] || upper[i] != sums[d - i] {
            return Err(Error::DegenerateParameters(format!(
                "partial sums of the split decomposition disagree at {i}"
            )));
        }
    }
    let cols: Vec<Vec<Rational>> = u_spaces.iter().flat_map(|u| u.basis().iter().cloned()).collect();
    let p = Matrix::from_columns(n, &cols);
    let p_inv = p.inverse()?;
    let mut kd = Vec::with_capacity(n);
    for (i, u) in u_spaces.iter().enumerate() {
        kd.extend(std::iter::repeat_n(pow(&td.q, d as i64 - 2 * i as i64), u.dim()));
    }
    let kd_inv: Vec<Rational> = kd.iter().map(|x| x.recip()).collect();
    let k = &(&p * &Matrix::diag(&kd)) * &p_inv;
    let k_inv = &(&p * &Matrix::diag(&kd_inv)) * &p_inv;
    let r = &td.a_mat - &(k.scale(&td.a) + k_inv.scale(&td.a.recip()));
    Ok(SplitDecomposition {
        u_spaces,
        adapted_basis: p,
        k,
        k_inv,
        r,
    })
}

fn maps_into(r: &mut VerificationReport, name: String, m: &Matrix, from: &Subspace, to: &Subspace) {
    r.check(name, SPLIT, || {
        let img = from.image(m);
        if to.contains_subspace(&img) {
            Ok(())
        } else {
            Err(Witness::Text(format!("image of dimension {} escapes target", img.dim())))
        }
    });
}

/// Every structural property of the split decomposition, `K` and `R`.
pub fn verify_split_decomposition(td: &TdPairData, sd: &SplitDecomposition) -> VerificationReport {
    let n = td.dim();
    let d = td.d;
    let id = Matrix::identity(n);
    let mut r = VerificationReport::new();
    r.check("U_0 + ... + U_d is direct and equals V", SPLIT, || {
        let total = Subspace::sum_all(n, sd.u_spaces.iter());
        match Subspace::is_direct_sum(&sd.u_spaces) {
            Ok(true) if total.dim() == n => Ok(()),
            _ => Err(Witness::Text(format!("sum has dimension {}", total.dim()))),
        }
    });
    let star_sums = partial_sums(&td.vstar_spaces, n);
    let sums = partial_sums(&td.v_spaces, n);
    for i in 0..=d {
        r.check(format!("U_0 + ... + U_{i} = V*_0 + ... + V*_{i}"), SPLIT, || {
            if Subspace::sum_all(n, sd.u_spaces[..=i].iter()) == star_sums[i] {
                Ok(())
            } else {
                Err(Witness::Text("partial sums differ".into()))
            }
        });
        r.check(format!("U_{i} + ... + U_d = V_0 + ... + V_{}", d - i), SPLIT, || {
            if Subspace::sum_all(n, sd.u_spaces[i..].iter()) == sums[d - i] {
                Ok(())
            } else {
                Err(Witness::Text("partial sums differ".into()))
            }
        });
    }
    for (i, u) in sd.u_spaces.iter().enumerate() {
        let ii = i as isize;
        let b = u.basis_matrix();
        let eig = pow(&td.q, d as i64 - 2 * i as i64);
        r.check_eq(format!("K = q^(d-2i) on U_{i}"), SPLIT, || (&sd.k * &b, b.scale(&eig)));
        r.check_eq(format!("aK + a^-1 K^-1 = theta_(d-i) on U_{i}"), SPLIT, || {
            let m = sd.k.scale(&td.a) + sd.k_inv.scale(&td.a.recip());
            (&m * &b, b.scale(&td.theta[d - i]))
        });
        maps_into(
            &mut r,
            format!("(A - theta_(d-i)) U_{i} in U_{}", i + 1),
            &(&td.a_mat - &id.scale(&td.theta[d - i])),
            u,
            &sd.u(ii + 1),
        );
        maps_into(
            &mut r,
            format!("(A* - theta*_i) U_{i} in U_{}", ii - 1),
            &(&td.astar - &id.scale(&td.theta_star[i])),
            u,
            &sd.u(ii - 1),
        );
        maps_into(&mut r, format!("R U_{i} in U_{}", i + 1), &sd.r, u, &sd.u(ii + 1));
    }
    r.check_eq("K K^-1 = 1", SPLIT, || (&sd.k * &sd.k_inv, id.clone()));
    r.check_eq("A = aK + a^-1 K^-1 + R", SPLIT, || {
        (
            td.a_mat.clone(),
            sd.k.scale(&td.a) + sd.k_inv.scale(&td.a.recip()) + &sd.r,
        )
    });
    r.check_zero("R^(d+1) = 0", SPLIT, || sd.r.pow(d as u32 + 1));
    r
}

/// `K = X31` and `K^{-1} = X13`.
pub fn verify_k_is_x31(sd: &SplitDecomposition, x: &EquitableGenerators) -> VerificationReport {
    let mut r = VerificationReport::new();
    r.check_eq("K = X31", SPLIT, || (sd.k.clone(), x.x31.clone()));
    r.check_eq("K^-1 = X13", SPLIT, || (sd.k_inv.clone(), x.x13.clone()));
    r
}

/// Both closed forms of `R`: through the equitable generators and through
/// the Chevalley generators.
pub fn verify_r_forms(
    sd: &SplitDecomposition,
    rep: &Representation,
    x: &EquitableGenerators,
    a: &Rational,
) -> VerificationReport {
    let q = rep.q();
    let ainv = a.recip();
    let equitable = (&x.x01 - &x.x31).scale(a) + (&x.x12 - &x.x13).scale(&ainv);
    let chevalley = ((rep.k(0) * rep.f(0)).scale(&(a * q)) - rep.e(1).scale(&ainv)).scale(&q_minus_qinv(q));
    let mut r = VerificationReport::new();
    r.check_eq("R = a(X01 - X31) + a^-1(X12 - X13)", SPLIT, || {
        (sd.r.clone(), equitable.clone())
    });
    r.check_eq("R = (q - q^-1)(a q K0 F0 - a^-1 E1)", SPLIT, || {
        (sd.r.clone(), chevalley.clone())
    });
    r
}
