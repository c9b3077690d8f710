//! L-operators on `V (x) V(1,t)`: the closed-form family on evaluation
//! modules, composition over tensor products, and the two equivalent
//! characterizations (component equations and coproduct intertwining).

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::report::VerificationReport;
use crate::scalar::{pow, q_minus_qinv, qint, Factor, Rational};
use crate::uq::{eval_module_rep, Generator, Representation};

const COMPONENTS: &str = "l-operator-equations";
const INTERTWINER: &str = "l-operator-intertwiner";

/// The four components `L_rs : V -> V` of a map on `V (x) V(1,t)`, defined by
/// `L(v (x) v_s) = L_0s(v) (x) v_0 + L_1s(v) (x) v_1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LOperator {
    pub t: Rational,
    pub l00: Matrix,
    pub l01: Matrix,
    pub l10: Matrix,
    pub l11: Matrix,
    /// Evaluation factors this operator was assembled from, in tensor order.
    /// Empty for hand-built operators.
    pub factors: Vec<Factor>,
}

impl LOperator {
    pub fn from_components(t: Rational, l00: Matrix, l01: Matrix, l10: Matrix, l11: Matrix) -> Result<Self> {
        if t.is_zero() {
            return Err(Error::InvalidParameter("spectral parameter t is zero".into()));
        }
        let n = l00.rows();
        if [&l00, &l01, &l10, &l11]
            .iter()
            .any(|m| m.rows() != n || m.cols() != n)
        {
            return Err(Error::DimensionMismatch(
                "L-operator components must share one square shape".into(),
            ));
        }
        Ok(LOperator {
            t,
            l00,
            l01,
            l10,
            l11,
            factors: Vec::new(),
        })
    }

    pub fn dim(&self) -> usize {
        self.l00.rows()
    }

    /// Component `L_rs`.
    pub fn component(&self, r: usize, s: usize) -> &Matrix {
        match (r, s) {
            (0, 0) => &self.l00,
            (0, 1) => &self.l01,
            (1, 0) => &self.l10,
            (1, 1) => &self.l11,
            _ => panic!("L-operator component index out of range: ({r}, {s})"),
        }
    }

    pub fn scale(&self, c: &Rational) -> LOperator {
        LOperator {
            t: self.t.clone(),
            l00: self.l00.scale(c),
            l01: self.l01.scale(c),
            l10: self.l10.scale(c),
            l11: self.l11.scale(c),
            factors: self.factors.clone(),
        }
    }

    /// The whole map on `V (x) V(1,t)`, basis `v (x) v_s` with the
    /// `V`-index slowest.
    pub fn full_matrix(&self) -> Matrix {
        let mut out = Matrix::zeros(2 * self.dim(), 2 * self.dim());
        for r in 0..2 {
            for s in 0..2 {
                let mut unit = Matrix::zeros(2, 2);
                unit[(r, s)] = Rational::from_integer(1.into());
                out = out + self.component(r, s).kron(&unit);
            }
        }
        out
    }
}

fn l00_diag(i: i64, d: i64, mu: &Rational, t: &Rational, q: &Rational) -> Rational {
    (pow(q, 1 - i) - mu.recip() * t * pow(q, i - d)) / q_minus_qinv(q)
}

fn l11_diag(i: i64, d: i64, mu: &Rational, t: &Rational, q: &Rational) -> Rational {
    (pow(q, i - d + 1) - mu.recip() * t * pow(q, -i)) / q_minus_qinv(q)
}

/// The closed-form L-operator on `V(d, mu)` with parameter `t` and
/// normalization `xi`.
pub fn eval_loperator(d: usize, mu: &Rational, t: &Rational, xi: &Rational, q: &Rational) -> Result<LOperator> {
    if d == 0 {
        return Err(Error::InvalidParameter("diameter must be positive".into()));
    }
    if mu.is_zero() || t.is_zero() || xi.is_zero() {
        return Err(Error::InvalidParameter("mu, t and xi must be nonzero".into()));
    }
    qint(1, q)?;
    let n = d + 1;
    let di = d as i64;
    let mut l00 = Matrix::zeros(n, n);
    let mut l01 = Matrix::zeros(n, n);
    let mut l10 = Matrix::zeros(n, n);
    let mut l11 = Matrix::zeros(n, n);
    let mu_inv = mu.recip();
    for i in 0..n {
        let ii = i as i64;
        l00[(i, i)] = l00_diag(ii, di, mu, t, q) * xi;
        l11[(i, i)] = l11_diag(ii, di, mu, t, q) * xi;
        if i >= 1 {
            l01[(i, i - 1)] = qint(ii, q)? * pow(q, 1 - ii) * xi;
            l10[(i - 1, i)] = qint(di - ii + 1, q)? * pow(q, ii - di) * &mu_inv * t * xi;
        }
    }
    Ok(LOperator {
        t: t.clone(),
        l00,
        l01,
        l10,
        l11,
        factors: vec![Factor::new(d, mu.clone(), xi.clone())],
    })
}

/// L-operator on `U (x) V` from operators on `U` and `V`:
/// `L_rs = L^U_r0 (x) L^V_0s + L^U_r1 (x) L^V_1s`.
pub fn tensor_loperator(lu: &LOperator, lv: &LOperator) -> Result<LOperator> {
    if lu.t != lv.t {
        return Err(Error::SpectralParameterMismatch);
    }
    let comp = |r: usize, s: usize| {
        lu.component(r, 0).kron(lv.component(0, s)) + lu.component(r, 1).kron(lv.component(1, s))
    };
    let mut factors = lu.factors.clone();
    factors.extend(lv.factors.iter().cloned());
    Ok(LOperator {
        t: lu.t.clone(),
        l00: comp(0, 0),
        l01: comp(0, 1),
        l10: comp(1, 0),
        l11: comp(1, 1),
        factors,
    })
}

/// Left-associated composite of the evaluation L-operators for `factors`,
/// matching [`crate::uq::tensor_of_evaluations`].
pub fn composite_loperator(factors: &[Factor], t: &Rational, q: &Rational) -> Result<LOperator> {
    let mut it = factors.iter();
    let f = it
        .next()
        .ok_or_else(|| Error::InvalidParameter("no tensor factors".into()))?;
    let mut l = eval_loperator(f.d, &f.mu, t, &f.xi, q)?;
    for f in it {
        l = tensor_loperator(&l, &eval_loperator(f.d, &f.mu, t, &f.xi, q)?)?;
    }
    Ok(l)
}

fn check_shapes(l: &LOperator, rep: &Representation) -> Option<String> {
    (l.dim() != rep.dim()).then(|| {
        format!(
            "L-operator acts on dimension {}, module has dimension {}",
            l.dim(),
            rep.dim()
        )
    })
}

type Identity<'a> = (&'static str, Box<dyn Fn() -> (Matrix, Matrix) + 'a>);

/// The twenty-four component equations characterizing an L-operator.
pub fn verify_loperator_equations(l: &LOperator, rep: &Representation) -> VerificationReport {
    let mut r = VerificationReport::new();
    if let Some(msg) = check_shapes(l, rep) {
        r.push("shape", COMPONENTS, crate::Status::Fail, Some(crate::Witness::Text(msg)));
        return r;
    }
    let q = rep.q();
    let qi = q.recip();
    let q2 = pow(q, 2);
    let qm2 = pow(q, -2);
    let t = &l.t;
    let ti = t.recip();
    let (l00, l01, l10, l11) = (&l.l00, &l.l01, &l.l10, &l.l11);
    let (e0, e1, f0, f1) = (rep.e(0), rep.e(1), rep.f(0), rep.f(1));
    let (k0, k1) = (rep.k(0), rep.k(1));
    let zero = || Matrix::zeros(l.dim(), l.dim());

    // weight relations
    for (name, k, c00, c01, c10, c11) in [
        ("K1", k1, None, Some(&qm2), Some(&q2), None),
        ("K0", k0, None, Some(&q2), Some(&qm2), None),
    ] {
        for (lbl, m, c) in [("L00", l00, c00), ("L01", l01, c01), ("L10", l10, c10), ("L11", l11, c11)] {
            let coef = c.map_or(String::new(), |c| format!("{c} "));
            r.check_eq(format!("{name} {lbl} = {coef}{lbl} {name}"), COMPONENTS, || {
                let rhs = m * k;
                (k * m, c.map_or(rhs.clone(), |c| rhs.scale(c)))
            });
        }
    }

    let eqs: Vec<Identity<'_>> = vec![
        ("L00 E1 - q E1 L00 = L10", Box::new(|| (l00 * e1 - (e1 * l00).scale(q), l10.clone()))),
        ("L01 E1 - q E1 L01 = L11 - L00 K1", Box::new(|| (l01 * e1 - (e1 * l01).scale(q), l11 - l00 * k1))),
        ("L10 E1 - q^-1 E1 L10 = 0", Box::new(|| (l10 * e1 - (e1 * l10).scale(&qi), zero()))),
        ("L11 E1 - q^-1 E1 L11 = -L10 K1", Box::new(|| (l11 * e1 - (e1 * l11).scale(&qi), -(l10 * k1)))),
        ("F1 L00 - q^-1 L00 F1 = L01", Box::new(|| (f1 * l00 - (l00 * f1).scale(&qi), l01.clone()))),
        ("F1 L01 - q L01 F1 = 0", Box::new(|| (f1 * l01 - (l01 * f1).scale(q), zero()))),
        ("F1 L10 - q^-1 L10 F1 = L11 - K0 L00", Box::new(|| (f1 * l10 - (l10 * f1).scale(&qi), l11 - k0 * l00))),
        ("F1 L11 - q L11 F1 = -K0 L01", Box::new(|| (f1 * l11 - (l11 * f1).scale(q), -(k0 * l01)))),
        ("L00 E0 - q^-1 E0 L00 = -t L01 K0", Box::new(|| (l00 * e0 - (e0 * l00).scale(&qi), -(l01 * k0).scale(t)))),
        ("L01 E0 - q^-1 E0 L01 = 0", Box::new(|| (l01 * e0 - (e0 * l01).scale(&qi), zero()))),
        ("L10 E0 - q E0 L10 = t L00 - t L11 K0", Box::new(|| (l10 * e0 - (e0 * l10).scale(q), (l00 - l11 * k0).scale(t)))),
        ("L11 E0 - q E0 L11 = t L01", Box::new(|| (l11 * e0 - (e0 * l11).scale(q), l01.scale(t)))),
        ("F0 L00 - q L00 F0 = -t^-1 K1 L10", Box::new(|| (f0 * l00 - (l00 * f0).scale(q), -(k1 * l10).scale(&ti)))),
        ("F0 L01 - q^-1 L01 F0 = t^-1 L00 - t^-1 K1 L11", Box::new(|| (f0 * l01 - (l01 * f0).scale(&qi), (l00 - k1 * l11).scale(&ti)))),
        ("F0 L10 - q L10 F0 = 0", Box::new(|| (f0 * l10 - (l10 * f0).scale(q), zero()))),
        ("F0 L11 - q^-1 L11 F0 = t^-1 L10", Box::new(|| (f0 * l11 - (l11 * f0).scale(&qi), l10.scale(&ti)))),
    ];
    for (name, f) in eqs {
        r.check_eq(name, COMPONENTS, f);
    }
    r
}

/// Coproduct `Delta(u)` and opposite coproduct of a generator, as matrices
/// on `V (x) W` (first leg slowest).
pub fn coproduct_pair(v: &Representation, w: &Representation, g: Generator) -> (Matrix, Matrix) {
    let iv = Matrix::identity(v.dim());
    let iw = Matrix::identity(w.dim());
    match g {
        Generator::E0 | Generator::E1 => {
            let i = (g == Generator::E1) as usize;
            (
                v.e(i).kron(&iw) + v.k(i).kron(w.e(i)),
                iv.kron(w.e(i)) + v.e(i).kron(w.k(i)),
            )
        }
        Generator::F0 | Generator::F1 => {
            let i = (g == Generator::F1) as usize;
            (
                iv.kron(w.f(i)) + v.f(i).kron(w.k_inv(i)),
                v.f(i).kron(&iw) + v.k_inv(i).kron(w.f(i)),
            )
        }
        _ => {
            let k = v.gen(g).kron(w.gen(g));
            (k.clone(), k)
        }
    }
}

/// Checks `L Delta(u) = Delta^op(u) L` on `V (x) V(1,t)` for every
/// Chevalley generator `u`, plus the unit.
pub fn verify_intertwiner(l: &LOperator, rep: &Representation) -> VerificationReport {
    let mut r = VerificationReport::new();
    if let Some(msg) = check_shapes(l, rep) {
        r.push("shape", INTERTWINER, crate::Status::Fail, Some(crate::Witness::Text(msg)));
        return r;
    }
    let w = match eval_module_rep(1, &l.t, rep.q()) {
        Ok(w) => w,
        Err(e) => {
            r.push("V(1,t)", INTERTWINER, crate::Status::Fail, Some(crate::Witness::Text(e.to_string())));
            return r;
        }
    };
    let full = l.full_matrix();
    r.check_eq("L 1 = 1 L", INTERTWINER, || (full.clone(), full.clone()));
    for g in Generator::ALL {
        r.check_eq(format!("L Delta({g}) = Delta^op({g}) L"), INTERTWINER, || {
            let (delta, delta_op) = coproduct_pair(rep, &w, g);
            (&full * &delta, &delta_op * &full)
        });
    }
    r
}

/// `L00^{-1}`, or a diagnosis naming the evaluation factors whose diagonal
/// entry vanishes.
pub fn check_l00_invertible(l: &LOperator, q: &Rational) -> Result<Matrix> {
    match l.l00.inverse() {
        Ok(inv) => Ok(inv),
        Err(Error::SingularMatrix { rank, dim }) => {
            let mut offending = Vec::new();
            for (j, f) in l.factors.iter().enumerate() {
                for i in 0..=f.d {
                    if l00_diag(i as i64, f.d as i64, &f.mu, &l.t, q).is_zero() {
                        offending.push((j, i));
                    }
                }
            }
            Err(Error::SingularL00 {
                rank,
                dim,
                offending,
            })
        }
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, ratio};
    use crate::uq::tensor_of_evaluations;

    #[test]
    fn table_entries_d1() {
        let l = eval_loperator(1, &rat(5), &rat(9), &rat(1), &rat(2)).unwrap();
        assert_eq!(l.l01[(1, 0)], rat(1));
        assert_eq!(l.l00[(0, 0)], ratio(11, 15));
        assert_eq!(l.l00[(1, 1)], ratio(-8, 15));
        let xi = ratio(-3, 7);
        let lx = eval_loperator(1, &rat(5), &rat(9), &xi, &rat(2)).unwrap();
        assert_eq!(lx.l01[(1, 0)], xi);
    }

    #[test]
    fn eval_operators_satisfy_both_characterizations() {
        let q = rat(2);
        for d in 1..=4 {
            let rep = eval_module_rep(d, &rat(5), &q).unwrap();
            let l = eval_loperator(d, &rat(5), &rat(9), &ratio(2, 3), &q).unwrap();
            let eqs = verify_loperator_equations(&l, &rep);
            assert_eq!(eqs.len(), 24);
            assert!(eqs.all_pass(), "d={d}: {:?}", eqs.failures().collect::<Vec<_>>());
            let tw = verify_intertwiner(&l, &rep);
            assert!(tw.all_pass(), "d={d}: {:?}", tw.failures().collect::<Vec<_>>());
        }
    }

    #[test]
    fn zero_operator_passes() {
        let q = rat(2);
        let rep = eval_module_rep(2, &rat(5), &q).unwrap();
        let z = Matrix::zeros(3, 3);
        let l = LOperator::from_components(rat(9), z.clone(), z.clone(), z.clone(), z).unwrap();
        assert!(verify_loperator_equations(&l, &rep).all_pass());
        assert!(verify_intertwiner(&l, &rep).all_pass());
    }

    #[test]
    fn perturbed_l10_fails() {
        let q = rat(2);
        let rep = eval_module_rep(1, &rat(5), &q).unwrap();
        let mut l = eval_loperator(1, &rat(5), &rat(9), &rat(1), &q).unwrap();
        l.l10[(0, 1)] += rat(1);
        let r = verify_loperator_equations(&l, &rep);
        assert!(!r.passed("L00 E1 - q E1 L00 = L10"));
        assert!(!verify_intertwiner(&l, &rep).all_pass());
    }

    #[test]
    fn composite_is_an_loperator() {
        let q = rat(2);
        let factors = [
            Factor::new(1, rat(5), rat(1)),
            Factor::new(1, rat(11), rat(1)),
        ];
        let rep = tensor_of_evaluations(&[(1, rat(5)), (1, rat(11))], &q).unwrap();
        let l = composite_loperator(&factors, &rat(9), &q).unwrap();
        let lu = eval_loperator(1, &rat(5), &rat(9), &rat(1), &q).unwrap();
        let lv = eval_loperator(1, &rat(11), &rat(9), &rat(1), &q).unwrap();
        assert_eq!(l.l00, lu.l00.kron(&lv.l00) + lu.l01.kron(&lv.l10));
        assert!(verify_loperator_equations(&l, &rep).all_pass());
        assert!(verify_intertwiner(&l, &rep).all_pass());
    }

    #[test]
    fn composite_scales_with_factor_xi() {
        let q = rat(2);
        let c = ratio(-5, 3);
        let base = composite_loperator(
            &[Factor::new(1, rat(5), rat(1)), Factor::new(2, rat(11), rat(1))],
            &rat(9),
            &q,
        )
        .unwrap();
        let scaled = composite_loperator(
            &[Factor::new(1, rat(5), rat(1)), Factor::new(2, rat(11), c.clone())],
            &rat(9),
            &q,
        )
        .unwrap();
        assert_eq!(scaled.l00, base.l00.scale(&c));
        assert_eq!(scaled.l01, base.l01.scale(&c));
        assert_eq!(scaled.l10, base.l10.scale(&c));
        assert_eq!(scaled.l11, base.l11.scale(&c));
    }

    #[test]
    fn mismatched_spectral_parameters() {
        let q = rat(2);
        let a = eval_loperator(1, &rat(5), &rat(9), &rat(1), &q).unwrap();
        let b = eval_loperator(1, &rat(5), &rat(8), &rat(1), &q).unwrap();
        assert!(matches!(tensor_loperator(&a, &b), Err(Error::SpectralParameterMismatch)));
    }

    #[test]
    fn l00_inverse_and_singularity() {
        let q = rat(2);
        let l = eval_loperator(1, &rat(5), &rat(9), &rat(1), &q).unwrap();
        assert_eq!(
            check_l00_invertible(&l, &q).unwrap(),
            Matrix::diag(&[ratio(15, 11), ratio(-15, 8)])
        );
        // t = mu q^{d+1-2i} kills the i-th diagonal entry; d=1, i=0: t = 5*4
        let l = eval_loperator(1, &rat(5), &rat(20), &rat(1), &q).unwrap();
        match check_l00_invertible(&l, &q) {
            Err(Error::SingularL00 { rank, offending, .. }) => {
                assert_eq!(rank, 1);
                assert_eq!(offending, vec![(0, 0)]);
            }
            other => panic!("expected SingularL00, got {other:?}"),
        }
        assert!(eval_loperator(1, &rat(5), &rat(9), &rat(0), &q).is_err());
    }
}
