//! The Bockting operator `psi`, computed two ways: as the unique solution of
//! its defining linear constraints on the split decomposition, and as
//! `-a L00^{-1} L01` for an L-operator with parameter `a^2`.

use crate::error::{Error, Result};
use crate::loperator::{check_l00_invertible, LOperator};
use crate::matrix::Matrix;
use crate::report::{Status, VerificationReport, Witness};
use crate::scalar::{pow, q_minus_qinv, Rational};
use crate::tdpair::SplitDecomposition;
use crate::uq::Representation;

const PSI: &str = "bockting-psi";
const THEOREM: &str = "psi-from-l-operator";
const PROOF: &str = "psi-proof-identities";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockProfile {
    pub i: usize,
    pub dim_u: usize,
    /// Rank of `psi` restricted to `U_i` (its image lies in `U_{i-1}`).
    pub image_dim: usize,
}

#[derive(Clone, Debug)]
pub struct PsiOperator {
    /// `psi` in the module basis.
    pub psi: Matrix,
    /// `psi` in the split-adapted basis `U_0, ..., U_d`.
    pub adapted: Matrix,
    pub block_profile: Vec<BlockProfile>,
    /// Dimension of the homogeneous solution space, when `psi` came from the
    /// linear solve.
    pub kernel_dim: Option<usize>,
}

fn block(m: &Matrix, rows: &std::ops::Range<usize>, cols: &std::ops::Range<usize>) -> Matrix {
    Matrix::from_fn(rows.len(), cols.len(), |i, j| m[(rows.start + i, cols.start + j)].clone())
}

fn profile(adapted: &Matrix, sd: &SplitDecomposition) -> Vec<BlockProfile> {
    let blocks = sd.blocks();
    blocks
        .iter()
        .enumerate()
        .map(|(i, cols)| BlockProfile {
            i,
            dim_u: cols.len(),
            image_dim: if i == 0 || cols.is_empty() {
                0
            } else {
                block(adapted, &blocks[i - 1], cols).rank()
            },
        })
        .collect()
}

/// Solves `psi U_i ⊆ U_{i-1}` and `psi R - R psi = (q - q^{-1})(K - K^{-1})`.
///
/// Unknowns are only the lowering blocks `U_i -> U_{i-1}` of `psi` in the
/// adapted basis; the other blocks are zero by construction.
pub fn solve_psi(sd: &SplitDecomposition, q: &Rational) -> Result<PsiOperator> {
    let n = sd.k.rows();
    let p = &sd.adapted_basis;
    let p_inv = p.inverse()?;
    let r = &(&p_inv * &sd.r) * p;
    let k = &(&p_inv * &sd.k) * p;
    let k_inv = &(&p_inv * &sd.k_inv) * p;
    let blocks = sd.blocks();

    let mut unknowns = Vec::new();
    for i in 1..blocks.len() {
        for row in blocks[i - 1].clone() {
            for col in blocks[i].clone() {
                unknowns.push((row, col));
            }
        }
    }
    // column u holds vec(E_u R - R E_u) for the matrix unit E_u
    let mut system = Matrix::zeros(n * n, unknowns.len());
    for (u, &(a, b)) in unknowns.iter().enumerate() {
        for j in 0..n {
            system[(a * n + j, u)] += &r[(b, j)];
        }
        for i in 0..n {
            system[(i * n + b, u)] -= &r[(i, a)];
        }
    }
    let rhs = (&k - &k_inv).scale(&q_minus_qinv(q));
    let (x, kernel) = system.solve_affine(rhs.entries())?;
    if kernel.dim() > 0 {
        return Err(Error::NonUniqueSolution { kernel });
    }
    let mut adapted = Matrix::zeros(n, n);
    for (&(a, b), v) in unknowns.iter().zip(x) {
        adapted[(a, b)] = v;
    }
    let psi = &(p * &adapted) * &p_inv;
    Ok(PsiOperator {
        block_profile: profile(&adapted, sd),
        psi,
        adapted,
        kernel_dim: Some(kernel.dim()),
    })
}

/// `psi-hat = -a L00^{-1} L01`, after checking that `L` has parameter `a^2`
/// and that the result lowers the split grading.
pub fn psi_from_loperator(
    l: &LOperator,
    a: &Rational,
    sd: &SplitDecomposition,
    q: &Rational,
) -> Result<PsiOperator> {
    let expected = a * a;
    if l.t != expected {
        return Err(Error::WrongParameter {
            t: l.t.to_string(),
            expected: expected.to_string(),
        });
    }
    if l.dim() != sd.k.rows() {
        return Err(Error::DimensionMismatch(format!(
            "L-operator on dimension {}, split decomposition on {}",
            l.dim(),
            sd.k.rows()
        )));
    }
    let l00_inv = check_l00_invertible(l, q)?;
    let psi = (&l00_inv * &l.l01).scale(&-a);
    for (i, u) in sd.u_spaces.iter().enumerate() {
        let target = sd.u(i as isize - 1);
        if !target.contains_subspace(&u.image(&psi)) {
            return Err(Error::ShapeViolation(format!("psi-hat U_{i} is not inside U_{}", i as isize - 1)));
        }
    }
    let p = &sd.adapted_basis;
    let adapted = &(&p.inverse()? * &psi) * p;
    Ok(PsiOperator {
        block_profile: profile(&adapted, sd),
        psi,
        adapted,
        kernel_dim: None,
    })
}

/// The defining properties of `psi`, checked on an already computed map.
pub fn verify_psi_constraints(psi: &PsiOperator, sd: &SplitDecomposition, q: &Rational, label: &str) -> VerificationReport {
    let mut r = VerificationReport::new();
    let m = &psi.psi;
    for (i, u) in sd.u_spaces.iter().enumerate() {
        let to = sd.u(i as isize - 1);
        r.check(format!("{label}: psi U_{i} in U_{}", i as isize - 1), PSI, || {
            if to.contains_subspace(&u.image(m)) {
                Ok(())
            } else {
                Err(Witness::Text("image escapes the lower split space".into()))
            }
        });
    }
    r.check_eq(format!("{label}: psi R - R psi = (q - q^-1)(K - K^-1)"), PSI, || {
        (m * &sd.r - &sd.r * m, (&sd.k - &sd.k_inv).scale(&q_minus_qinv(q)))
    });
    r.check_eq(format!("{label}: K psi = q^2 psi K"), PSI, || {
        (&sd.k * m, (m * &sd.k).scale(&pow(q, 2)))
    });
    r.check_zero(format!("{label}: psi^(d+1) = 0"), PSI, || m.pow(sd.u_spaces.len() as u32));
    r
}

/// `psi = psi-hat` as matrices in the module basis.
pub fn verify_theorem(psi_solved: &PsiOperator, psi_hat: &PsiOperator) -> VerificationReport {
    let mut r = VerificationReport::new();
    r.check_eq("psi = -a L00^-1 L01", THEOREM, || {
        (psi_solved.psi.clone(), psi_hat.psi.clone())
    });
    r
}

fn chain(r: &mut VerificationReport, name: &str, steps: Vec<Matrix>) {
    for (j, w) in steps.windows(2).enumerate() {
        r.check_eq(format!("{name}: step {} = step {}", j, j + 1), PROOF, || {
            (w[0].clone(), w[1].clone())
        });
    }
}

/// The intermediate identities of the argument that `-a L00^{-1} L01`
/// satisfies the defining constraints of `psi`.
pub fn verify_proof_identities(
    l: &LOperator,
    rep: &Representation,
    sd: &SplitDecomposition,
    a: &Rational,
) -> VerificationReport {
    let mut r = VerificationReport::new();
    let q = rep.q();
    let l00_inv = match check_l00_invertible(l, q) {
        Ok(m) => m,
        Err(e) => {
            r.push("L00 invertible", PROOF, Status::Fail, Some(Witness::Text(e.to_string())));
            return r;
        }
    };
    let psi = (&l00_inv * &l.l01).scale(&-a);
    let (l00, l01, l10, l11) = (&l.l00, &l.l01, &l.l10, &l.l11);
    let (e1, f0, k0, k1) = (rep.e(1), rep.f(0), rep.k(0), rep.k(1));
    let qi = q.recip();
    let ai = a.recip();
    let am2 = pow(a, -2);
    let c = q_minus_qinv(q);
    let k0f0 = k0 * f0;

    r.check_eq("K0 psi-hat = q^2 psi-hat K0", PROOF, || {
        (k0 * &psi, (&psi * k0).scale(&pow(q, 2)))
    });
    r.check_eq("K psi-hat = q^2 psi-hat K", PROOF, || {
        (&sd.k * &psi, (&psi * &sd.k).scale(&pow(q, 2)))
    });
    r.check_eq("L00 (psi-hat R - R psi-hat) = (q - q^-1) L00 (K0 - K1)", PROOF, || {
        (
            l00 * &(&psi * &sd.r - &sd.r * &psi),
            (l00 * &(k0 - k1)).scale(&c),
        )
    });
    r.check_zero(
        "a q L00 (psi-hat K0F0 - K0F0 psi-hat) - a^-1 L00 (psi-hat E1 - E1 psi-hat) + L00 (K1 - K0) = 0",
        PROOF,
        || {
            (l00 * &(&psi * &k0f0 - &k0f0 * &psi)).scale(&(a * q))
                - (l00 * &(&psi * e1 - e1 * &psi)).scale(&ai)
                + l00 * &(k1 - k0)
        },
    );

    chain(
        &mut r,
        "L00 psi-hat K0 F0",
        vec![
            &(l00 * &psi) * &k0f0,
            (l01 * &k0f0).scale(&-a),
            (&(k0 * l01) * f0).scale(&(-a * pow(q, -2))),
            (k0 * &(f0 * l01 - l00.scale(&am2) + (k1 * l11).scale(&am2))).scale(&(-a * &qi)),
        ],
    );
    chain(
        &mut r,
        "L00 K0 F0 psi-hat",
        vec![
            &(l00 * &k0f0) * &psi,
            &(&(k0 * l00) * f0) * &psi,
            (&(k0 * &((k1 * l10).scale(&am2) + f0 * l00)) * &psi).scale(&qi),
            (k0 * &(&(k1 * l10) * &psi).scale(&am2) - (k0 * &(f0 * l01)).scale(a)).scale(&qi),
        ],
    );
    chain(
        &mut r,
        "L00 psi-hat E1",
        vec![
            &(l00 * &psi) * e1,
            (l01 * e1).scale(&-a),
            ((e1 * l01).scale(q) + l11 - l00 * k1).scale(&-a),
            ((e1 * l01).scale(q) + l11 - k1 * l00).scale(&-a),
        ],
    );
    chain(
        &mut r,
        "L00 E1 psi-hat",
        vec![
            &(l00 * e1) * &psi,
            &(l10 + &(e1 * l00).scale(q)) * &psi,
            l10 * &psi - (e1 * l01).scale(&(q * a)),
        ],
    );
    r.check_eq("L00 K1 = K1 L00", PROOF, || (l00 * k1, k1 * l00));
    r.check_eq("L00 K0 = K0 L00", PROOF, || (l00 * k0, k0 * l00));
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::loperator::{composite_loperator, eval_loperator};
    use crate::scalar::{rat, ratio, Factor};
    use crate::tdpair::{build_td_pair, split_decomposition};
    use crate::uq::{eval_module_rep, tensor_of_evaluations};

    fn d1_split() -> (Representation, SplitDecomposition) {
        let rep = eval_module_rep(1, &rat(5), &rat(2)).unwrap();
        let td = build_td_pair(&rep, &rat(3), &rat(7)).unwrap();
        let sd = split_decomposition(&td).unwrap();
        (rep, sd)
    }

    fn closed_form() -> Matrix {
        Matrix::from_rows(vec![vec![rat(0), rat(0)], vec![ratio(45, 8), rat(0)]]).unwrap()
    }

    #[test]
    fn d1_closed_form() {
        // c = (q - q^-1) a mu / (a^2 - mu)
        let (q, a, mu) = (rat(2), rat(3), rat(5));
        let c = q_minus_qinv(&q) * &a * &mu / (&a * &a - &mu);
        assert_eq!(c, ratio(45, 8));

        let (_, sd) = d1_split();
        let solved = solve_psi(&sd, &q).unwrap();
        assert_eq!(solved.psi, closed_form());
        assert_eq!(solved.kernel_dim, Some(0));
        // adapted basis is (U_0 = e1, U_1 = e0): psi sends the U_1 vector to c times the U_0 vector
        assert_eq!(solved.adapted, Matrix::from_rows(vec![vec![rat(0), c], vec![rat(0), rat(0)]]).unwrap());
        assert_eq!(solved.block_profile[0].image_dim, 0);
        assert_eq!(solved.block_profile[1].image_dim, 1);
        assert!(verify_psi_constraints(&solved, &sd, &q, "solved").all_pass());
    }

    #[test]
    fn d1_from_loperator() {
        let q = rat(2);
        let (_, sd) = d1_split();
        let l = eval_loperator(1, &rat(5), &rat(9), &rat(1), &q).unwrap();
        assert_eq!(l.l00, Matrix::diag(&[ratio(11, 15), ratio(-8, 15)]));
        let hat = psi_from_loperator(&l, &rat(3), &sd, &q).unwrap();
        assert_eq!(hat.psi, closed_form());
        let solved = solve_psi(&sd, &q).unwrap();
        assert!(verify_theorem(&solved, &hat).all_pass());
        assert!(verify_psi_constraints(&hat, &sd, &q, "hat").all_pass());
    }

    #[test]
    fn wrong_parameter_is_rejected() {
        let q = rat(2);
        let (_, sd) = d1_split();
        let l = eval_loperator(1, &rat(5), &rat(10), &rat(1), &q).unwrap();
        assert!(matches!(
            psi_from_loperator(&l, &rat(3), &sd, &q),
            Err(Error::WrongParameter { .. })
        ));
    }

    #[test]
    fn xi_gauge_invariance() {
        let q = rat(2);
        let (_, sd) = d1_split();
        let base = psi_from_loperator(
            &eval_loperator(1, &rat(5), &rat(9), &rat(1), &q).unwrap(),
            &rat(3),
            &sd,
            &q,
        )
        .unwrap();
        for xi in [ratio(-2, 7), rat(13), ratio(5, 3)] {
            let l = eval_loperator(1, &rat(5), &rat(9), &xi, &q).unwrap();
            assert_eq!(psi_from_loperator(&l, &rat(3), &sd, &q).unwrap().psi, base.psi);
        }
    }

    #[test]
    fn tensor_routes_agree() {
        let q = rat(2);
        let a = rat(3);
        let rep = tensor_of_evaluations(&[(1, rat(5)), (1, rat(11))], &q).unwrap();
        let td = build_td_pair(&rep, &a, &rat(7)).unwrap();
        let sd = split_decomposition(&td).unwrap();
        let solved = solve_psi(&sd, &q).unwrap();
        let l = composite_loperator(
            &[Factor::new(1, rat(5), rat(1)), Factor::new(1, rat(11), rat(1))],
            &rat(9),
            &q,
        )
        .unwrap();
        let hat = psi_from_loperator(&l, &a, &sd, &q).unwrap();
        assert!(verify_theorem(&solved, &hat).all_pass());
        let proof = verify_proof_identities(&l, &rep, &sd, &a);
        assert!(proof.all_pass(), "{:?}", proof.failures().collect::<Vec<_>>());
    }

    #[test]
    fn proof_identities_d1() {
        let q = rat(2);
        let (rep, sd) = d1_split();
        let l = eval_loperator(1, &rat(5), &rat(9), &rat(1), &q).unwrap();
        let r = verify_proof_identities(&l, &rep, &sd, &rat(3));
        assert!(r.all_pass(), "{:?}", r.failures().collect::<Vec<_>>());
        // 4 single identities, 3+3+3+2 chain steps, 2 commutations
        assert_eq!(r.len(), 4 + 11 + 2);
    }
}
