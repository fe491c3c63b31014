//! One function per verb. Each returns the rendered body in all three formats
//! plus the checks that decide the exit status.

use crate::config::ConfigError;
use serde_json::{json, Value};
use std::time::Instant;
use wsub_core::qseries::{self, BigradedSeries};
use wsub_core::report::{Check, Report};
use wsub_core::scalar::gamma_index;
use wsub_core::subreg::{self, Mode};
use wsub_core::{golden, walgebra, Basis, Engine, Rat, Scalar};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("malformed rational: {0}")]
    Rational(String),
    #[error("{0}")]
    Range(String),
    #[error("configuration error: {0}")]
    Config(#[from] ConfigError),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Rational(_) => 3,
            CliError::Range(_) => 4,
            CliError::Config(_) => 5,
            CliError::Internal(_) => 6,
        }
    }
}

fn internal(e: impl std::fmt::Display) -> CliError {
    CliError::Internal(e.to_string())
}

pub fn parse_rat(s: &str) -> Result<Rat, CliError> {
    let t = s.trim();
    let ok = !t.is_empty() && t.chars().all(|c| c.is_ascii_digit() || c == '/' || c == '-' || c == '+');
    let r = ok.then(|| t.parse::<Rat>().ok()).flatten();
    r.ok_or_else(|| CliError::Rational(s.to_string()))
}

pub fn check_rank(n: usize, cap: usize) -> Result<(), CliError> {
    if n == 0 || n > cap {
        return Err(CliError::Range(format!("rank n = {n} is outside 1..={cap}")));
    }
    Ok(())
}

/// A level argument: absent means symbolic `k`.
pub fn basis(n: usize, k: Option<&Rat>) -> Basis {
    match k {
        Some(k) => Basis::at_level(n, k.clone()),
        None => Basis::symbolic(n),
    }
}

pub struct Output {
    pub text: String,
    pub json: Value,
    pub latex: String,
    pub report: Report,
}

impl Output {
    fn info(text: String, json: Value, latex: String) -> Self {
        Output { text, json, latex, report: Report::default() }
    }

    fn with_report(mut self, report: Report, timing: bool) -> Self {
        if !report.checks.is_empty() {
            self.text.push_str(&report.to_text(timing));
            self.json["report"] = report.to_json(timing);
            self.latex.push_str(&report_latex(&report));
        }
        self.report = report;
        self
    }

    pub fn passed(&self) -> bool {
        self.report.passed()
    }
}

fn report_latex(r: &Report) -> String {
    let mut s = String::from("\\begin{tabular}{ll}\n");
    for c in &r.checks {
        let status = match c.status {
            wsub_core::report::Status::Pass => "pass",
            wsub_core::report::Status::Fail => "fail",
            wsub_core::report::Status::Skipped => "skipped",
        };
        s.push_str(&format!("\\verb|{}| & {status} \\\\\n", c.name));
    }
    s.push_str("\\end{tabular}\n");
    s
}

fn timed(check: impl FnOnce() -> Check) -> Check {
    let t = Instant::now();
    let c = check();
    c.with_elapsed(t.elapsed())
}

fn opt_scalar(s: &Option<Scalar>) -> Value {
    s.as_ref().map_or(Value::Null, |x| json!(x.to_string()))
}

pub fn generators(n: usize, k: Option<&Rat>, brief: bool) -> Result<Output, CliError> {
    let e = Engine::new(basis(n, k));
    let g = subreg::strong_generators(&e).map_err(internal)?;
    let b = e.basis();
    let mut text = String::new();
    let mut latex = String::new();
    let mut rows = Vec::new();
    let show = |s: &Option<Scalar>| s.as_ref().map_or("-".to_string(), Scalar::to_string);
    let top = format!("U{}", n + 1);
    let top_weight = e.conformal_weight(&g.l, &g.u_top).map_err(internal)?;
    let top_charge = e.j_charge(&g.u_top);
    let fields = g
        .table
        .iter()
        .map(|x| (x.name.as_str(), &x.field, x.weight.clone(), x.charge.clone()))
        .chain(std::iter::once((top.as_str(), &g.u_top, top_weight, top_charge)));
    for (name, field, weight, charge) in fields {
        text.push_str(&format!("{name}: weight {} charge {}\n", show(&weight), show(&charge)));
        if !brief {
            text.push_str(&format!("  {}\n", b.to_text(field)));
            latex.push_str(&format!("{name} &= {} \\\\\n", b.to_latex(field)));
        }
        rows.push(json!({
            "name": name,
            "weight": opt_scalar(&weight),
            "charge": opt_scalar(&charge),
            "field": (!brief).then(|| b.to_text(field)),
        }));
    }
    let [a1, a2, a3] = &g.l_coeffs;
    text.push_str(&format!("L = ({a1})*U2 + ({a2})*D(J) + ({a3})*:J J:\n"));
    let json = json!({ "n": n, "generators": rows, "l_in_u2": [a1.to_string(), a2.to_string(), a3.to_string()] });
    Ok(Output::info(text, json, latex))
}

pub fn miura(n: usize, k: Option<&Rat>, s: Option<usize>) -> Result<Output, CliError> {
    let b = basis(n, k);
    let ws = walgebra::miura_fields(&b).map_err(internal)?;
    let range: Vec<usize> = match s {
        Some(s) if s > n + 1 => return Err(CliError::Range(format!("s = {s} is outside 0..={}", n + 1))),
        Some(s) => vec![s],
        None => (0..=n + 1).collect(),
    };
    let mut text = String::new();
    let mut latex = String::new();
    let mut rows = Vec::new();
    for s in range {
        text.push_str(&format!("W{s} = {}\n", b.to_text(&ws[s])));
        latex.push_str(&format!("W_{{{s}}} &= {} \\\\\n", b.to_latex(&ws[s])));
        rows.push(json!({ "s": s, "field": b.to_text(&ws[s]) }));
    }
    Ok(Output::info(text, json!({ "n": n, "miura": rows }), latex))
}

#[allow(clippy::too_many_arguments)]
pub fn character(
    n: usize,
    k: Option<&Rat>,
    r: &str,
    lambda: Option<&Rat>,
    qmax: i64,
    zmax: i64,
    expand: bool,
) -> Result<Output, CliError> {
    let r = qseries::integer_sector(&parse_rat(r)?).map_err(|e| CliError::Rational(e.to_string()))?;
    let kk = k.map_or(Scalar::var(wsub_core::scalar::K), |k| Scalar::rat(k.clone()));
    let lam = lambda.map_or(qseries::lambda(), |l| Scalar::rat(l.clone()));
    let ch = qseries::char_pi_module(n, &kk, r, &lam, qmax, zmax).map_err(internal)?;
    let base = qseries::char_pi_module(n, &kk, -1, &lam, qmax, zmax).map_err(internal)?;
    let flowed = qseries::flow_transform(&base, n, &kk, r);
    let shown: BigradedSeries = if expand { ch.expand_comb() } else { ch.clone() };
    let check = Check::compare("character agrees with the flowed r = -1 character", "half-lattice module characters", ch.equivalent(&flowed), || {
        (format!("{:?}", ch.to_json()), format!("{:?}", flowed.to_json()), "prefactor or coefficients differ".into())
    });
    let latex = format!("z^{{{}}} q^{{{}}}\n", shown.z_offset.to_latex(), shown.q_offset.to_latex());
    let out = Output::info(shown.to_table(), json!({ "n": n, "r": r, "character": shown.to_json() }), latex);
    Ok(out.with_report(Report::new(vec![check]), false))
}

pub fn singular(n: usize, k: &Rat, m: i64, timing: bool) -> Result<Output, CliError> {
    let e = Engine::new(Basis::at_level(n, k.clone()));
    let rho = subreg::RhoFamily::new(e.basis()).map_err(internal)?;
    let gm = subreg::g_minus(e.basis(), &rho);
    let r = subreg::singular_vector_check(&e, &gm, m).map_err(internal)?;
    let text = format!(
        "singular: {}\npredicted: {}\ncoefficient: {}\nembeds: {}\n",
        r.singular,
        r.predicted,
        r.coefficient,
        subreg::simple_quotient_embeds(n, k)
    );
    let json = json!({
        "n": n, "k": k.to_string(), "m": m,
        "singular": r.singular, "predicted": r.predicted,
        "coefficient": r.coefficient.to_string(),
        "embeds": subreg::simple_quotient_embeds(n, k),
    });
    let anchor = "singular vectors (G+_{-1})^m 1 in the vacuum module";
    let checks = vec![
        Check::compare("coefficient matches the closed form", anchor, r.closed_form_matches, || {
            (r.coefficient.to_string(), subreg::singular_closed_form(n, &e.basis().kn(), m).to_string(), String::new())
        }),
        Check::compare("singular iff i(k+n) = m for some i", anchor, r.singular == r.predicted, || {
            (r.singular.to_string(), r.predicted.to_string(), String::new())
        }),
    ];
    let latex = format!("G^-_{{({n})}} e^{{{m}c}} = {} \\, e^{{{}c}}\n", r.coefficient.to_latex(), m - 1);
    Ok(Output::info(text, json, latex).with_report(Report::new(checks), timing))
}

pub fn zeromode(n: usize, k: Option<&Rat>) -> Result<Output, CliError> {
    let e = Engine::new(basis(n, k));
    let g = subreg::strong_generators(&e).map_err(internal)?;
    let content = subreg::decompose_regular_content(e.basis(), &g, subreg::Target::Gminus).map_err(internal)?;
    let gamma: Vec<Scalar> = (2..=n + 1).map(|j| Scalar::var(gamma_index(j))).collect();
    let z = subreg::zero_mode_polynomial(&e, &content, &gamma).map_err(internal)?;
    let mut text = format!("p = {}\n", z.p);
    for (i, c) in z.coeffs.iter().enumerate() {
        text.push_str(&format!("  x^{i}: {c}\n"));
    }
    let json = json!({ "n": n, "p": z.p.to_string(), "coeffs": z.coeffs.iter().map(Scalar::to_string).collect::<Vec<_>>() });
    let check = Check::compare(format!("degree in x is at most {}", n + 1), "zero mode of G- on relaxed top spaces", z.degree() <= n + 1, || {
        (z.degree().to_string(), (n + 1).to_string(), String::new())
    });
    let latex = format!("p(\\gamma, x) = {}\n", z.p.to_latex());
    Ok(Output::info(text, json, latex).with_report(Report::new(vec![check]), false))
}

pub fn sflow(n: usize, k: Option<&Rat>, l: i64, m: i64, weight: Option<(Rat, Rat)>) -> Result<Output, CliError> {
    let kk = k.map_or(Scalar::var(wsub_core::scalar::K), |k| Scalar::rat(k.clone()));
    let modes = [Mode::Gp(m), Mode::Gm(m), Mode::J(m), Mode::L(m), Mode::Lt(m)];
    let mut text = String::new();
    let mut rows = Vec::new();
    for mode in modes {
        let img = subreg::flow_mode(n, &kk, l, mode);
        text.push_str(&format!("sigma^{l}({mode}) = {img}\n"));
        rows.push(json!({ "mode": mode.to_string(), "image": img.to_string() }));
    }
    let mut json = json!({ "n": n, "l": l, "modes": rows });
    if let Some((j, d)) = weight {
        let (j2, d2) = subreg::spectral_flow_weight(n, &kk, &Scalar::rat(j), &Scalar::rat(d), l);
        text.push_str(&format!("weight: j = {j2}, Delta = {d2}\n"));
        json["weight"] = json!({ "j": j2.to_string(), "delta": d2.to_string() });
    }
    Ok(Output::info(text.clone(), json, format!("\\begin{{verbatim}}\n{text}\\end{{verbatim}}\n")))
}

pub fn central_charges(n: usize, k: Option<&Rat>) -> Result<Output, CliError> {
    let kk = k.map_or(Scalar::var(wsub_core::scalar::K), |k| Scalar::rat(k.clone()));
    let (sub, reg, pi) = subreg::central_charges(n, &kk).map_err(internal)?;
    let text = format!("Subcc = {sub}\nRegcc = {reg}\nPicc = {pi}\n");
    let json = json!({ "n": n, "subregular": sub.to_string(), "regular": reg.to_string(), "pi": pi.to_string() });
    let latex = format!(
        "c_{{\\mathrm{{sub}}}} = {}, \\quad c_{{\\mathrm{{reg}}}} = {}, \\quad c_\\Pi = {}\n",
        sub.to_latex(),
        reg.to_latex(),
        pi.to_latex()
    );
    let sum = reg.add(&pi);
    let check = Check::compare("Subcc = Regcc + Picc", "central charge additivity", sub == sum, || {
        (sub.to_string(), sum.to_string(), sub.sub(&sum).to_string())
    });
    Ok(Output::info(text, json, latex).with_report(Report::new(vec![check]), false))
}

pub fn verify_appendix(n: usize, timing: bool) -> Result<Output, CliError> {
    let corpus = golden::corpus(n).map_err(|e| match e {
        golden::GoldenError::NoCorpus(n) => CliError::Range(format!("no OPE table for rank {n}; tables exist for 1..=3")),
        other => internal(other),
    })?;
    let e = Engine::new(Basis::symbolic(n));
    let g = subreg::strong_generators(&e).map_err(internal)?;
    let report = golden::verify(&e, &g, &corpus).map_err(internal)?;
    let text = format!("{} (rank {n})\n", corpus.anchor);
    let json = json!({ "n": n, "anchor": corpus.anchor });
    Ok(Output::info(text, json, String::new()).with_report(report, timing))
}

pub fn verify_screening(n: usize, timing: bool) -> Result<Output, CliError> {
    let e = Engine::new(Basis::symbolic(n));
    let g = subreg::strong_generators(&e).map_err(internal)?;
    let anchor = "inverse-reduction screening kernel";
    let mut checks = Vec::new();
    for gen in &g.table {
        checks.push(timed(|| match subreg::verify_inverse_screening(&e, &gen.field) {
            Ok(ok) => Check::compare(format!("A{n} screening kills {}", gen.name), anchor, ok, || {
                (gen.name.clone(), "0".into(), "nonzero zeroth product".into())
            }),
            Err(err) => Check::fail(format!("A{n} screening kills {}", gen.name), anchor, err.to_string(), "0".into(), String::new()),
        }));
    }
    let fms = subreg::verify_fms(&e).map_err(internal)?;
    checks.push(Check::compare(format!("A{n} FMS bosonisation"), "beta-gamma system inside the half-lattice", fms.holds(), || {
        (format!("{fms:?}"), "beta-gamma OPEs and screening".into(), String::new())
    }));
    let out = Output::info(format!("screening checks (rank {n})\n"), json!({ "n": n }), String::new());
    Ok(out.with_report(Report::new(checks), timing))
}

pub fn verify_regular_screening(n: usize, timing: bool) -> Result<Output, CliError> {
    let e = Engine::new(Basis::symbolic(n));
    let ws = walgebra::miura_fields(e.basis()).map_err(internal)?;
    let anchor = "regular W-algebra as a joint screening kernel";
    let mut checks = Vec::new();
    for (s, w) in ws.iter().enumerate() {
        for i in 1..=n {
            let name = format!("A{n} screening {i} kills W{s}");
            checks.push(timed(|| match walgebra::verify_regular_screening(&e, i, w) {
                Ok(ok) => Check::compare(name.clone(), anchor, ok, || (format!("W{s}"), "0".into(), String::new())),
                Err(err) => Check::fail(name.clone(), anchor, err.to_string(), "0".into(), String::new()),
            }));
        }
    }
    let out = Output::info(format!("regular screening checks (rank {n})\n"), json!({ "n": n }), String::new());
    Ok(out.with_report(Report::new(checks), timing))
}
