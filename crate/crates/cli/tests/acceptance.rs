//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use qracah_cli::config::{RawConfig, Suite};
use qracah_cli::runner::{run_params, Outcome};
use qracah_cli::sweep::sweep;
use qracah_core::bockting::{psi_from_loperator, solve_psi, verify_proof_identities, verify_psi_constraints, verify_theorem};
use qracah_core::loperator::{composite_loperator, eval_loperator, verify_intertwiner, verify_loperator_equations};
use qracah_core::report::VerificationReport;
use qracah_core::scalar::{rat, ratio, Factor};
use qracah_core::tdpair::{
    build_td_pair, eigenvalue_ratios, qracah_eigenvalues, split_decomposition, verify_k_is_x31, verify_r_forms,
    verify_split_decomposition, verify_tridiagonal_axioms, SplitDecomposition, TdPairData,
};
use qracah_core::uq::{
    equitable_generators, tensor_of_evaluations, verify_defining_relations, verify_equitable_relations, Generator,
    Representation,
};
use qracah_core::{Error, Rational};

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn configurations() -> Vec<Vec<(usize, i64)>> {
    vec![
        vec![(1, 5)],
        vec![(2, 5)],
        vec![(3, 5)],
        vec![(4, 5)],
        vec![(1, 5), (1, 11)],
        vec![(2, 5), (1, 11)],
        vec![(1, 5), (1, 11), (1, 13)],
    ]
}

fn label(c: &[(usize, i64)]) -> String {
    c.iter().map(|(d, mu)| format!("V({d},{mu})")).collect::<Vec<_>>().join("x")
}

fn q() -> Rational {
    rat(2)
}

fn a() -> Rational {
    rat(3)
}

fn rep(c: &[(usize, i64)]) -> Representation {
    let spec: Vec<_> = c.iter().map(|&(d, mu)| (d, rat(mu))).collect();
    tensor_of_evaluations(&spec, &q()).expect("valid module")
}

fn factors(c: &[(usize, i64)]) -> Vec<Factor> {
    c.iter().map(|&(d, mu)| Factor::new(d, rat(mu), rat(1))).collect()
}

fn require(what: &str, r: &VerificationReport) -> Result<(), String> {
    if r.all_pass() {
        Ok(())
    } else {
        let names: Vec<_> = r.failures().map(|c| format!("{} [{}]", c.name, c.status.as_str())).collect();
        Err(format!("{what}: {}", names.join("; ")))
    }
}

enum Td {
    Ready(Box<TdPairData>, Box<SplitDecomposition>),
    Degenerate(String),
}

fn td(c: &[(usize, i64)]) -> Result<Td, String> {
    match build_td_pair(&rep(c), &a(), &rat(7)) {
        Ok(td) => match split_decomposition(&td) {
            Ok(sd) => Ok(Td::Ready(Box::new(td), Box::new(sd))),
            Err(Error::DegenerateParameters(m)) => Ok(Td::Degenerate(m)),
            Err(e) => Err(format!("{}: {e}", label(c))),
        },
        Err(Error::DegenerateParameters(m)) => Ok(Td::Degenerate(m)),
        Err(e) => Err(format!("{}: {e}", label(c))),
    }
}

fn criterion_1() -> Verdict {
    let mut n = 0;
    for c in configurations() {
        let r = rep(&c);
        let rel = verify_defining_relations(&r);
        require(&label(&c), &rel)?;
        let x = equitable_generators(&r).map_err(|e| e.to_string())?;
        let eq = verify_equitable_relations(&x, &q());
        require(&label(&c), &eq)?;
        n += rel.len() + eq.len();
    }
    Ok(format!("{n} relation instances on 7 modules"))
}

fn criterion_2() -> Verdict {
    let t = rat(9);
    let mut n = 0;
    for c in configurations() {
        let r = rep(&c);
        let l = if c.len() == 1 {
            eval_loperator(c[0].0, &rat(c[0].1), &t, &rat(1), &q())
        } else {
            composite_loperator(&factors(&c), &t, &q())
        }
        .map_err(|e| e.to_string())?;
        let eqs = verify_loperator_equations(&l, &r);
        if eqs.len() != 24 {
            return Err(format!("{}: expected 24 identities, got {}", label(&c), eqs.len()));
        }
        require(&label(&c), &eqs)?;
        let int = verify_intertwiner(&l, &r);
        require(&label(&c), &int)?;
        n += 1;
    }
    Ok(format!("{n} L-operators pass both characterizations"))
}

fn criterion_3() -> Verdict {
    let l = eval_loperator(1, &rat(5), &rat(9), &rat(1), &q()).map_err(|e| e.to_string())?;
    if l.l00[(0, 0)] != ratio(11, 15) || l.l00[(1, 1)] != ratio(-8, 15) {
        return Err(format!("L00 = {}", l.l00));
    }
    for d in 1..=4 {
        let l = eval_loperator(d, &rat(5), &rat(9), &rat(1), &q()).map_err(|e| e.to_string())?;
        for i in 0..=d {
            for j in 0..=d {
                let zero = |m: &qracah_core::Matrix| m[(i, j)] == rat(0);
                let ok = (i == j || zero(&l.l00) && zero(&l.l11))
                    && (i == j + 1 || zero(&l.l01))
                    && (i + 1 == j || zero(&l.l10));
                if !ok {
                    return Err(format!("d={d}: zero pattern broken at ({i},{j})"));
                }
            }
        }
    }
    Ok("(L00)00 = 11/15, (L00)11 = -8/15, zero pattern holds for d=1..4".into())
}

fn criterion_4() -> Verdict {
    let (mut pass, mut skip) = (0, 0);
    for c in configurations() {
        match td(&c)? {
            Td::Degenerate(m) => {
                println!("    skip {}: {m}", label(&c));
                skip += 1;
            }
            Td::Ready(td, _) => {
                require(&label(&c), &verify_tridiagonal_axioms(&td))?;
                let d = td.d;
                if td.theta != qracah_eigenvalues(&a(), &q(), d) || td.theta_star != qracah_eigenvalues(&rat(7), &q(), d) {
                    return Err(format!("{}: eigenvalues differ from the closed form", label(&c)));
                }
                if d >= 3 {
                    for th in [&td.theta, &td.theta_star] {
                        if eigenvalue_ratios(th).iter().any(|r| *r != ratio(21, 4)) {
                            return Err(format!("{}: ratio is not 21/4", label(&c)));
                        }
                    }
                }
                pass += 1;
            }
        }
    }
    if pass == 0 {
        return Err("every configuration was degenerate".into());
    }
    Ok(format!("{pass} pairs verified, {skip} degenerate skipped"))
}

fn criterion_5() -> Verdict {
    let mut n = 0;
    for c in configurations() {
        let Td::Ready(td, sd) = td(&c)? else { continue };
        let r = rep(&c);
        let x = equitable_generators(&r).map_err(|e| e.to_string())?;
        let mut rep_ = verify_split_decomposition(&td, &sd);
        rep_.extend(verify_k_is_x31(&sd, &x));
        rep_.extend(verify_r_forms(&sd, &r, &x, &a()));
        for name in ["K = X31", "A = aK + a^-1 K^-1 + R", "U_0 + ... + U_d is direct and equals V"] {
            if !rep_.passed(name) {
                return Err(format!("{}: {name}", label(&c)));
            }
        }
        require(&label(&c), &rep_)?;
        n += 1;
    }
    Ok(format!("split decomposition identities hold on {n} configurations"))
}

fn criterion_6() -> Verdict {
    let Td::Ready(_, sd) = td(&[(1, 5)])? else { return Err("d=1 instance is degenerate".into()) };
    let solved = solve_psi(&sd, &q()).map_err(|e| e.to_string())?;
    let l = eval_loperator(1, &rat(5), &rat(9), &rat(1), &q()).map_err(|e| e.to_string())?;
    let hat = psi_from_loperator(&l, &a(), &sd, &q()).map_err(|e| e.to_string())?;
    for (route, p) in [("solve", &solved), ("L-operator", &hat)] {
        let nonzero: Vec<_> = p.adapted.entries().iter().filter(|x| **x != rat(0)).collect();
        if nonzero != vec![&ratio(45, 8)] {
            return Err(format!("{route} route gives {}", p.adapted));
        }
    }
    Ok("both routes give the single entry 45/8".into())
}

fn criterion_7() -> Verdict {
    let start = Instant::now();
    let suites: BTreeSet<Suite> = [Suite::Psi].into();
    let mut checked = 0;
    for c in configurations() {
        let params = qracah_core::ParamSet::sample(&c);
        let r = run_params(&params, &suites, 3, 11, serde_json::Value::Null);
        match r.outcome {
            Outcome::Pass => {
                let thm = r.checks.iter().filter(|(_, ch)| ch.name.starts_with("psi = -a L00^-1 L01")).count();
                if thm < 4 {
                    return Err(format!("{}: only {thm} theorem checks", label(&c)));
                }
                checked += thm;
            }
            Outcome::Degenerate => println!("    skip {}: {}", label(&c), r.diagnosis.unwrap_or_default()),
            _ => return Err(format!("{}: {}", label(&c), r.failed_names().join("; "))),
        }
    }
    let cfg = RawConfig::from_json(r#"{"q":"2","a":"3","b":"7","factors":[{"d":1,"mu":"5"},{"d":1,"mu":"11"}],"suites":["psi"],"gauges":3}"#)
        .and_then(RawConfig::validate)
        .map_err(|e| e.to_string())?;
    let s = sweep(&cfg, 25, 1);
    for p in &s.points {
        if p.outcome == Outcome::Degenerate {
            println!("    sweep point {} skipped: {}", p.index, p.diagnosis.clone().unwrap_or_default());
        }
    }
    if s.count(Outcome::Fail) > 0 {
        return Err(s.summary_text());
    }
    if s.count(Outcome::Pass) == 0 {
        return Err("no sweep point passed".into());
    }
    Ok(format!(
        "{checked} exact theorem checks over configurations and gauges; sweep: {} pass, {} degenerate, 0 fail ({:.1} s)",
        s.count(Outcome::Pass),
        s.count(Outcome::Degenerate),
        start.elapsed().as_secs_f64()
    ))
}

fn criterion_8() -> Verdict {
    for c in [vec![(1, 5)], vec![(1, 5), (1, 11)]] {
        let Td::Ready(_, sd) = td(&c)? else { return Err(format!("{} is degenerate", label(&c))) };
        let l = composite_loperator(&factors(&c), &rat(9), &q()).map_err(|e| e.to_string())?;
        require(&label(&c), &verify_proof_identities(&l, &rep(&c), &sd, &a()))?;
    }
    Ok("all proof chains are exact on d=1 and the 4-dimensional module".into())
}

fn criterion_9() -> Verdict {
    let mut n = 0;
    for c in configurations() {
        let Td::Ready(_, sd) = td(&c)? else { continue };
        let solved = solve_psi(&sd, &q()).map_err(|e| format!("{}: {e}", label(&c)))?;
        if solved.kernel_dim != Some(0) {
            return Err(format!("{}: kernel dimension {:?}", label(&c), solved.kernel_dim));
        }
        require(&label(&c), &verify_psi_constraints(&solved, &sd, &q(), "solved"))?;
        n += 1;
    }
    Ok(format!("kernel is zero on {n} configurations"))
}

fn criterion_10() -> Verdict {
    let r = rep(&[(1, 5)]);
    let mut e1 = r.e(1).clone();
    e1[(0, 1)] += rat(1);
    let bad = r.with_generator(Generator::E1, e1).map_err(|e| e.to_string())?;
    if verify_defining_relations(&bad).all_pass() {
        return Err("perturbed E1 passes the relation suite".into());
    }

    let mut l = eval_loperator(1, &rat(5), &rat(9), &rat(1), &q()).map_err(|e| e.to_string())?;
    l.l10[(0, 1)] += rat(1);
    if verify_loperator_equations(&l, &r).all_pass() {
        return Err("perturbed L10 passes the L-operator identities".into());
    }

    let Td::Ready(_, sd) = td(&[(1, 5)])? else { return Err("d=1 instance is degenerate".into()) };
    let wrong = eval_loperator(1, &rat(5), &rat(10), &rat(1), &q()).map_err(|e| e.to_string())?;
    match psi_from_loperator(&wrong, &a(), &sd, &q()) {
        Err(Error::WrongParameter { .. }) => {}
        other => return Err(format!("t = 10 was not rejected: {:?}", other.map(|p| p.psi))),
    }
    let solved = solve_psi(&sd, &q()).map_err(|e| e.to_string())?;
    let ok = eval_loperator(1, &rat(5), &rat(9), &rat(1), &q()).map_err(|e| e.to_string())?;
    let mut hat = psi_from_loperator(&ok, &a(), &sd, &q()).map_err(|e| e.to_string())?;
    hat.psi[(1, 0)] += rat(1);
    if verify_theorem(&solved, &hat).all_pass() {
        return Err("a perturbed psi-hat still matches".into());
    }
    Ok("perturbed E1, perturbed L10, t != a^2 and a perturbed psi are all rejected".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("defining and equitable relations", criterion_1),
        ("L-operator equivalence", criterion_2),
        ("L-operator table entries", criterion_3),
        ("tridiagonal pair axioms", criterion_4),
        ("split decomposition", criterion_5),
        ("psi closed form 45/8", criterion_6),
        ("psi = -a L00^-1 L01", criterion_7),
        ("proof identities", criterion_8),
        ("uniqueness of psi", criterion_9),
        ("negative controls", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let res = f();
        let secs = start.elapsed().as_secs_f64();
        match res {
            Ok(msg) => println!("criterion {:>2} PASS  {name}: {msg} [{secs:.2}s]", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {msg} [{secs:.2}s]", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
