//! Finite-dimensional modules for the quantum loop algebra of sl2:
//! evaluation modules, their tensor products, the Chevalley and equitable
//! generator matrices, and exact checks of both presentations.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::report::VerificationReport;
use crate::scalar::{pow, q_minus_qinv, qint, Rational};

const CHEVALLEY: &str = "chevalley-relations";
const EQUITABLE: &str = "equitable-relations";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    E0,
    E1,
    F0,
    F1,
    K0,
    K0Inv,
    K1,
    K1Inv,
}

impl Generator {
    pub const ALL: [Generator; 8] = [
        Generator::E0,
        Generator::E1,
        Generator::F0,
        Generator::F1,
        Generator::K0,
        Generator::K0Inv,
        Generator::K1,
        Generator::K1Inv,
    ];

    fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Generator::E0 => "E0",
            Generator::E1 => "E1",
            Generator::F0 => "F0",
            Generator::F1 => "F1",
            Generator::K0 => "K0",
            Generator::K0Inv => "K0inv",
            Generator::K1 => "K1",
            Generator::K1Inv => "K1inv",
        }
    }

    pub fn e(i: usize) -> Generator {
        [Generator::E0, Generator::E1][i]
    }

    pub fn f(i: usize) -> Generator {
        [Generator::F0, Generator::F1][i]
    }

    pub fn k(i: usize) -> Generator {
        [Generator::K0, Generator::K1][i]
    }

    pub fn k_inv(i: usize) -> Generator {
        [Generator::K0Inv, Generator::K1Inv][i]
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A module given by the matrices of the eight Chevalley generators in a
/// fixed basis. Tensor bases are ordered lexicographically, first factor
/// slowest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representation {
    q: Rational,
    dim: usize,
    chevalley: [Matrix; 8],
    factors: Vec<(usize, Rational)>,
}

impl Representation {
    pub fn q(&self) -> &Rational {
        &self.q
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn gen(&self, g: Generator) -> &Matrix {
        &self.chevalley[g.index()]
    }

    pub fn e(&self, i: usize) -> &Matrix {
        self.gen(Generator::e(i))
    }

    pub fn f(&self, i: usize) -> &Matrix {
        self.gen(Generator::f(i))
    }

    pub fn k(&self, i: usize) -> &Matrix {
        self.gen(Generator::k(i))
    }

    pub fn k_inv(&self, i: usize) -> &Matrix {
        self.gen(Generator::k_inv(i))
    }

    /// `(d_j, mu_j)` for each evaluation factor, in tensor order.
    pub fn factor_spec(&self) -> &[(usize, Rational)] {
        &self.factors
    }

    pub fn diameter(&self) -> usize {
        self.factors.iter().map(|(d, _)| d).sum()
    }

    /// Multi-indices `(i_1, ..., i_k)` labeling the basis, in basis order.
    pub fn basis_labels(&self) -> Vec<Vec<usize>> {
        let mut labels = vec![Vec::new()];
        for (d, _) in &self.factors {
            labels = labels
                .into_iter()
                .flat_map(|l| {
                    (0..=*d).map(move |i| {
                        let mut l = l.clone();
                        l.push(i);
                        l
                    })
                })
                .collect();
        }
        labels
    }

    /// Copy with one generator matrix replaced. Used to build corrupted
    /// modules for negative controls.
    pub fn with_generator(&self, g: Generator, m: Matrix) -> Result<Representation> {
        if m.rows() != self.dim || m.cols() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "generator {g} must be {0}x{0}",
                self.dim
            )));
        }
        let mut out = self.clone();
        out.chevalley[g.index()] = m;
        Ok(out)
    }
}

/// The evaluation module `V(d, mu)` in its standard basis `v_0, ..., v_d`.
pub fn eval_module_rep(d: usize, mu: &Rational, q: &Rational) -> Result<Representation> {
    if d == 0 {
        return Err(Error::InvalidParameter("diameter must be positive".into()));
    }
    if mu.is_zero() {
        return Err(Error::InvalidParameter("evaluation parameter zero".into()));
    }
    // validates q
    qint(1, q)?;
    for i in 1..=d as i64 {
        if pow(q, 2 * i).is_one() {
            return Err(Error::InvalidParameter(format!(
                "q^{} = 1; V({d}, mu) would be reducible",
                2 * i
            )));
        }
    }
    let n = d + 1;
    let di = d as i64;
    let qi = |k: i64| qint(k, q).expect("q validated");
    let mut e1 = Matrix::zeros(n, n);
    let mut f1 = Matrix::zeros(n, n);
    let mut e0 = Matrix::zeros(n, n);
    let mut f0 = Matrix::zeros(n, n);
    let mut k1 = Matrix::zeros(n, n);
    let mut k0 = Matrix::zeros(n, n);
    let mu_inv = mu.recip();
    for i in 0..n {
        let ii = i as i64;
        k1[(i, i)] = pow(q, di - 2 * ii);
        k0[(i, i)] = pow(q, 2 * ii - di);
        if i >= 1 {
            e1[(i - 1, i)] = qi(di - ii + 1);
            f0[(i - 1, i)] = &mu_inv * qi(di - ii + 1);
        }
        if i < d {
            f1[(i + 1, i)] = qi(ii + 1);
            e0[(i + 1, i)] = mu * qi(ii + 1);
        }
    }
    let k0_inv = k1.clone();
    let k1_inv = k0.clone();
    Ok(Representation {
        q: q.clone(),
        dim: n,
        chevalley: [e0, e1, f0, f1, k0, k0_inv, k1, k1_inv],
        factors: vec![(d, mu.clone())],
    })
}

/// `U (x) V` with the action given by the coproduct
/// `E -> E(x)1 + K(x)E`, `F -> 1(x)F + F(x)K^{-1}`, `K -> K(x)K`.
pub fn tensor_rep(u: &Representation, v: &Representation) -> Result<Representation> {
    if u.q != v.q {
        return Err(Error::QMismatch);
    }
    let iu = Matrix::identity(u.dim);
    let iv = Matrix::identity(v.dim);
    let gens: Vec<Matrix> = Generator::ALL
        .iter()
        .map(|&g| match g {
            Generator::E0 | Generator::E1 => {
                let i = (g == Generator::E1) as usize;
                u.e(i).kron(&iv) + u.k(i).kron(v.e(i))
            }
            Generator::F0 | Generator::F1 => {
                let i = (g == Generator::F1) as usize;
                iu.kron(v.f(i)) + u.f(i).kron(v.k_inv(i))
            }
            _ => u.gen(g).kron(v.gen(g)),
        })
        .collect();
    let chevalley: [Matrix; 8] = gens.try_into().expect("eight generators");
    let mut factors = u.factors.clone();
    factors.extend(v.factors.iter().cloned());
    Ok(Representation {
        q: u.q.clone(),
        dim: u.dim * v.dim,
        chevalley,
        factors,
    })
}

/// Left-associated tensor product of evaluation modules
/// `((V(d_1,mu_1) (x) V(d_2,mu_2)) (x) ...)`.
pub fn tensor_of_evaluations(factors: &[(usize, Rational)], q: &Rational) -> Result<Representation> {
    let mut it = factors.iter();
    let (d, mu) = it
        .next()
        .ok_or_else(|| Error::InvalidParameter("no tensor factors".into()))?;
    let mut rep = eval_module_rep(*d, mu, q)?;
    for (d, mu) in it {
        rep = tensor_rep(&rep, &eval_module_rep(*d, mu, q)?)?;
    }
    Ok(rep)
}

fn serre(x: &Matrix, y: &Matrix, q3: &Rational) -> Matrix {
    let x2 = x * x;
    let x3 = &x2 * x;
    &(&(&x3 * y) - &(q3 * &(&(&x2 * y) * x))) + &(&(q3 * &(&(x * y) * &x2)) - &(y * &x3))
}

/// Checks every relation of the Chevalley presentation as an exact matrix
/// identity, one record per instance.
pub fn verify_defining_relations(rep: &Representation) -> VerificationReport {
    let q = rep.q.clone();
    let q2 = pow(&q, 2);
    let qm2 = pow(&q, -2);
    let one = Matrix::identity(rep.dim);
    let mut r = VerificationReport::new();
    for i in 0..2 {
        r.check_eq(format!("K{i}*K{i}inv = 1"), CHEVALLEY, || {
            (rep.k(i) * rep.k_inv(i), one.clone())
        });
        r.check_eq(format!("K{i}inv*K{i} = 1"), CHEVALLEY, || {
            (rep.k_inv(i) * rep.k(i), one.clone())
        });
    }
    r.check_eq("K0*K1 = 1", CHEVALLEY, || (rep.k(0) * rep.k(1), one.clone()));
    r.check_eq("K1*K0 = 1", CHEVALLEY, || (rep.k(1) * rep.k(0), one.clone()));
    r.check_eq("K0 = K1inv", CHEVALLEY, || {
        (rep.k(0).clone(), rep.k_inv(1).clone())
    });
    for i in 0..2 {
        r.check_eq(format!("K{i}*E{i} = q^2 E{i}*K{i}"), CHEVALLEY, || {
            (rep.k(i) * rep.e(i), (rep.e(i) * rep.k(i)).scale(&q2))
        });
        r.check_eq(format!("K{i}*F{i} = q^-2 F{i}*K{i}"), CHEVALLEY, || {
            (rep.k(i) * rep.f(i), (rep.f(i) * rep.k(i)).scale(&qm2))
        });
    }
    for (i, j) in [(0, 1), (1, 0)] {
        r.check_eq(format!("K{i}*E{j} = q^-2 E{j}*K{i}"), CHEVALLEY, || {
            (rep.k(i) * rep.e(j), (rep.e(j) * rep.k(i)).scale(&qm2))
        });
        r.check_eq(format!("K{i}*F{j} = q^2 F{j}*K{i}"), CHEVALLEY, || {
            (rep.k(i) * rep.f(j), (rep.f(j) * rep.k(i)).scale(&q2))
        });
    }
    let denom = q_minus_qinv(&q).recip();
    for i in 0..2 {
        for j in 0..2 {
            r.check_eq(format!("E{i}*F{j} - F{j}*E{i}"), CHEVALLEY, || {
                let lhs = rep.e(i) * rep.f(j) - rep.f(j) * rep.e(i);
                let rhs = if i == j {
                    (rep.k(i) - rep.k_inv(i)).scale(&denom)
                } else {
                    Matrix::zeros(rep.dim, rep.dim)
                };
                (lhs, rhs)
            });
        }
    }
    let q3 = qint(3, &q).expect("valid q");
    for (i, j) in [(0, 1), (1, 0)] {
        r.check_zero(format!("Serre E{i}^3 E{j}"), CHEVALLEY, || {
            serre(rep.e(i), rep.e(j), &q3)
        });
        r.check_zero(format!("Serre F{i}^3 F{j}"), CHEVALLEY, || {
            serre(rep.f(i), rep.f(j), &q3)
        });
    }
    r
}

/// The six equitable generators acting on a module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquitableGenerators {
    pub x01: Matrix,
    pub x12: Matrix,
    pub x23: Matrix,
    pub x30: Matrix,
    pub x13: Matrix,
    pub x31: Matrix,
}

impl EquitableGenerators {
    /// `X_{i,i+1}` for `i` in Z/4.
    pub fn cyclic(&self, i: usize) -> &Matrix {
        match i % 4 {
            0 => &self.x01,
            1 => &self.x12,
            2 => &self.x23,
            _ => &self.x30,
        }
    }
}

/// Chevalley images of the equitable generators.
pub fn equitable_from_chevalley(rep: &Representation) -> EquitableGenerators {
    let q = &rep.q;
    let c = q_minus_qinv(q);
    let qc = q * &c;
    EquitableGenerators {
        x01: rep.k(0) + (rep.k(0) * rep.f(0)).scale(&qc),
        x12: rep.k(1) - rep.e(1).scale(&c),
        x23: rep.k(1) + (rep.k(1) * rep.f(1)).scale(&qc),
        x30: rep.k(0) - rep.e(0).scale(&c),
        x13: rep.k(1).clone(),
        x31: rep.k(0).clone(),
    }
}

/// Inverse substitution: `(E0, E1, F0, F1, K0, K1)` recovered from the
/// equitable generators.
pub fn chevalley_from_equitable(x: &EquitableGenerators, q: &Rational) -> [Matrix; 6] {
    let cinv = q_minus_qinv(q).recip();
    let qcinv = &cinv / q;
    let one = Matrix::identity(x.x01.rows());
    [
        (&x.x31 - &x.x30).scale(&cinv),
        (&x.x13 - &x.x12).scale(&cinv),
        (&x.x13 * &x.x01 - &one).scale(&qcinv),
        (&x.x31 * &x.x23 - &one).scale(&qcinv),
        x.x31.clone(),
        x.x13.clone(),
    ]
}

/// Equitable generators of `rep`, after confirming that the inverse
/// substitution gives back the Chevalley matrices exactly.
pub fn equitable_generators(rep: &Representation) -> Result<EquitableGenerators> {
    let x = equitable_from_chevalley(rep);
    let back = chevalley_from_equitable(&x, &rep.q);
    let expected = [
        Generator::E0,
        Generator::E1,
        Generator::F0,
        Generator::F1,
        Generator::K0,
        Generator::K1,
    ];
    for (m, g) in back.iter().zip(expected) {
        if m != rep.gen(g) {
            return Err(Error::Internal(format!(
                "equitable round trip does not reproduce {g}"
            )));
        }
    }
    Ok(x)
}

/// Checks all relations of the equitable presentation.
pub fn verify_equitable_relations(x: &EquitableGenerators, q: &Rational) -> VerificationReport {
    let n = x.x01.rows();
    let one = Matrix::identity(n);
    let qinv = q.recip();
    let cinv = q_minus_qinv(q).recip();
    let mut r = VerificationReport::new();
    r.check_eq("X13*X31 = 1", EQUITABLE, || (&x.x13 * &x.x31, one.clone()));
    r.check_eq("X31*X13 = 1", EQUITABLE, || (&x.x31 * &x.x13, one.clone()));
    let pairs: [(&str, &Matrix, &str, &Matrix); 8] = [
        ("X01", &x.x01, "X12", &x.x12),
        ("X12", &x.x12, "X23", &x.x23),
        ("X23", &x.x23, "X30", &x.x30),
        ("X30", &x.x30, "X01", &x.x01),
        ("X01", &x.x01, "X13", &x.x13),
        ("X31", &x.x31, "X12", &x.x12),
        ("X23", &x.x23, "X31", &x.x31),
        ("X13", &x.x13, "X30", &x.x30),
    ];
    for (na, a, nb, b) in pairs {
        r.check_eq(
            format!("(q {na}{nb} - q^-1 {nb}{na})/(q - q^-1) = 1"),
            EQUITABLE,
            || (((a * b).scale(q) - (b * a).scale(&qinv)).scale(&cinv), one.clone()),
        );
    }
    let q3 = qint(3, q).expect("valid q");
    for i in 0..4 {
        let names = ["X01", "X12", "X23", "X30"];
        r.check_zero(
            format!("Serre {}^3 {}", names[i], names[(i + 2) % 4]),
            EQUITABLE,
            || serre(x.cyclic(i), x.cyclic(i + 2), &q3),
        );
    }
    r
}
