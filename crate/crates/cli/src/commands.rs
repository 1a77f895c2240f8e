use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};
use tensornorm::chebyshev::{binary_lower_bound_max, optimal_decomposition_m2, psi, psi_exact};
use tensornorm::euclid2::{
    constants_l2, extreme_points, half_circle_lp, matrix_tensor, norms_ab, positive_wedge_lp, trace_norm_2x2,
    BallKind, UVWCoords,
};
use tensornorm::exchangeable::{
    chi_nN, distribution_from_json, kappa_bounds, kappa_nNm_bounds, kappa_nN_bounds, represent, uv_bound_exact,
    verify_representation, ExtendibilityBounds, RepresentMethod,
};
use tensornorm::format::number;
use tensornorm::norms::{
    kappa, norm_pi, norm_pip, norm_pis, norm_pisp, polarization_constants, NormBounds, NormOptions,
    SpaceDescriptor,
};
use tensornorm::{Error, SignedPowerCombination, SymmetricTensor};

use crate::args::{Arithmetic, Ball, Command, Euclid2Command, GlobalOpts, Method, NormKind, Space};
use crate::output::Table;

pub const MAX_KAPPA_ORDER: usize = 10;
pub const MAX_PSI_ORDER: usize = 1000;
pub const MAX_SWEEP_N: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Failure {
    /// Bad parameters or input; exit status 2.
    Validation(String),
    /// The computation itself broke down; exit status 1.
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::SingularSystem(_) => Failure::Internal(e.to_string()),
            _ => Failure::Validation(e.to_string()),
        }
    }
}

fn validation(msg: impl Into<String>) -> Failure {
    Failure::Validation(msg.into())
}

pub struct Outcome {
    pub value: Value,
    pub table: Table,
    pub converged: bool,
}

impl Outcome {
    fn flat(value: Value, converged: bool) -> Self {
        Outcome {
            table: Table::flatten(&value),
            value,
            converged,
        }
    }
}

pub struct Context<'a> {
    pub global: &'a GlobalOpts,
    /// Lazily read JSON document.
    pub input: &'a mut dyn FnMut() -> Result<Value, Failure>,
}

impl Context<'_> {
    pub fn options(&self) -> Result<NormOptions, Failure> {
        let g = self.global;
        if !(g.tol.is_finite() && g.tol > 0.0 && g.tol < 1.0) {
            return Err(validation(format!("--tol must lie in (0, 1), got {}", g.tol)));
        }
        if g.max_iters == 0 {
            return Err(validation("--max-iters must be positive"));
        }
        let mut o = NormOptions {
            tol: g.tol,
            max_rounds: g.max_iters,
            ..NormOptions::default()
        };
        if let Some(seed) = g.seed {
            o.seed = seed;
        }
        Ok(o)
    }

    fn rational(&self) -> bool {
        self.global.arithmetic == Arithmetic::Rational
    }

    fn float_only(&self, command: &str) -> Result<(), Failure> {
        if self.rational() {
            Err(validation(format!("`{command}` supports only --arithmetic float")))
        } else {
            Ok(())
        }
    }
}

pub fn dispatch(cmd: &Command, ctx: &mut Context) -> Result<Outcome, Failure> {
    match cmd {
        Command::Psi { a, b, n } => cmd_psi(a, b, *n, ctx),
        Command::Decompose { a, b, n } => cmd_decompose(a, b, *n, ctx),
        Command::Kappa { n } => cmd_kappa(*n, ctx),
        Command::Constants { n, space, resolution } => cmd_constants(*n, *space, *resolution, ctx),
        Command::Represent { method } => cmd_represent(*method, ctx),
        Command::Chi { n, big_n } => {
            ctx.float_only("chi")?;
            let d = chi_nN(*n, *big_n)?;
            Ok(Outcome::flat(d.to_json(), true))
        }
        Command::ExtendBounds { n, big_n, m, exact } => cmd_extend(*n, big_n, *m, *exact, ctx),
        Command::Euclid2 { which } => {
            ctx.float_only("euclid2")?;
            cmd_euclid2(which, ctx)
        }
        Command::Norm { kind, space } => cmd_norm(*kind, *space, ctx),
    }
}

/// Parses `p/q`, an integer or a finite decimal such as `-0.125` or `2.5e-3`
/// into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational, Failure> {
    let bad = || validation(format!("not a rational number: {s:?}"));
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(validation(format!("zero denominator in {s:?}")));
        }
        return Ok(BigRational::new(p, q));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    if exp.unsigned_abs() > 4096 {
        return Err(validation(format!("exponent out of range in {s:?}")));
    }
    let num: BigInt = format!("{int_part}{frac_part}").parse().map_err(|_| bad())?;
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut r = BigRational::from_integer(if negative { -num } else { num });
    if scale >= 0 {
        r *= BigRational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        r /= BigRational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Ok(r)
}

fn parse_float(s: &str, name: &str) -> Result<f64, Failure> {
    let x: f64 = s
        .trim()
        .parse()
        .map_err(|_| validation(format!("--{name} is not a number: {s:?}")))?;
    if !x.is_finite() {
        return Err(validation(format!("--{name} must be finite")));
    }
    Ok(x)
}

fn check_order(n: usize, max: usize) -> Result<(), Failure> {
    if n == 0 || n > max {
        return Err(validation(format!("--n must lie in 1..={max}, got {n}")));
    }
    Ok(())
}

fn rational_text(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn cmd_psi(a: &str, b: &str, n: usize, ctx: &Context) -> Result<Outcome, Failure> {
    check_order(n, MAX_PSI_ORDER)?;
    let value = if ctx.rational() {
        let (ra, rb) = (parse_rational(a)?, parse_rational(b)?);
        let p = psi_exact(&ra, &rb, n);
        json!({
            "a": rational_text(&ra),
            "b": rational_text(&rb),
            "n": n,
            "psi": rational_text(&p),
        })
    } else {
        let (fa, fb) = (parse_float(a, "a")?, parse_float(b, "b")?);
        json!({"a": number(fa), "b": number(fb), "n": n, "psi": number(psi(fa, fb, n))})
    };
    Ok(Outcome::flat(value, true))
}

fn combination_json(c: &SignedPowerCombination<f64>) -> Value {
    let terms: Vec<Value> = c
        .terms()
        .iter()
        .map(|t| json!({"w": number(t.weight), "x": t.vector.iter().map(|v| number(*v)).collect::<Vec<_>>()}))
        .collect();
    Value::Array(terms)
}

fn cmd_decompose(a: &str, b: &str, n: usize, ctx: &Context) -> Result<Outcome, Failure> {
    check_order(n, MAX_PSI_ORDER)?;
    let (fa, fb) = (parse_float(a, "a")?, parse_float(b, "b")?);
    let d = optimal_decomposition_m2(fa, fb, n)?;
    let merged = d.merged();
    let residual = merged
        .evaluate()
        .max_abs_diff(&tensornorm::tensor::power(&[fa, fb], n)?)?;
    let mut value = json!({
        "a": number(fa),
        "b": number(fb),
        "n": n,
        "tv": number(d.total_variation),
        "psi": number(psi(fa, fb, n)),
        "residual": number(residual),
        "terms": combination_json(&merged),
    });
    if ctx.rational() {
        let p = psi_exact(&parse_rational(a)?, &parse_rational(b)?, n);
        value["psi_exact"] = json!(rational_text(&p));
    }
    let rows = merged
        .terms()
        .iter()
        .map(|t| {
            vec![
                tensornorm::format::format_g17(t.weight),
                tensornorm::format::format_g17(t.vector[0]),
                tensornorm::format::format_g17(t.vector[1]),
            ]
        })
        .collect();
    Ok(Outcome {
        value,
        table: Table {
            header: vec!["w".into(), "x0".into(), "x1".into()],
            rows,
        },
        converged: true,
    })
}

fn factorial_big(n: usize) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

fn cmd_kappa(n: usize, ctx: &Context) -> Result<Outcome, Failure> {
    check_order(n, MAX_KAPPA_ORDER)?;
    let opts = ctx.options()?;
    let b = kappa(n, &opts)?;
    let reference = kappa_bounds(n)?;
    let mut value = b.to_json();
    value["n"] = json!(n);
    if let Some(c) = b.primal.powers() {
        value["atoms"] = combination_json(&c.merged());
    }
    value["reference"] = reference.to_json();
    if ctx.rational() {
        let classical = BigRational::new(num_traits::pow(BigInt::from(n), n), factorial_big(n));
        let binary = binary_lower_bound_max(n);
        let lower = if binary > classical { binary } else { classical.clone() };
        let crude = classical * BigRational::from_integer(num_traits::pow(BigInt::from(2), n - 1));
        value["reference_exact"] = json!({
            "lower": rational_text(&lower),
            "uv_upper": rational_text(&uv_bound_exact(n)?),
            "crude_upper": rational_text(&crude),
        });
    }
    let mut flat = value.clone();
    flat.as_object_mut().map(|m| m.remove("dual"));
    Ok(Outcome {
        table: Table::flatten(&flat),
        converged: b.converged,
        value,
    })
}

fn cmd_constants(n: Option<usize>, space: Space, resolution: usize, ctx: &Context) -> Result<Outcome, Failure> {
    ctx.float_only("constants")?;
    let opts = ctx.options()?;
    match space {
        Space::L1 => {
            let n = n.ok_or_else(|| validation("--n is required for --space l1"))?;
            check_order(n, MAX_KAPPA_ORDER)?;
            let c = polarization_constants(n, &opts)?;
            let brief = |b: &NormBounds| json!({"lower": number(b.lower), "upper": number(b.upper), "converged": b.converged});
            let value = json!({
                "n": n,
                "space": "l1",
                "kappa": brief(&c.kappa),
                "cssp": brief(&c.cssp),
                "gamma_reference": number(c.gamma_reference),
                "classical_cs_lower": number(c.classical_cs_lower),
            });
            Ok(Outcome::flat(value, c.kappa.converged && c.cssp.converged))
        }
        Space::L2 => {
            if n.is_some_and(|n| n != 2) {
                return Err(validation("--space l2 covers only n = 2"));
            }
            check_resolution(resolution)?;
            let c = constants_l2(resolution, &opts)?;
            let mut value = c.to_json();
            value["n"] = json!(2);
            value["space"] = json!("l2");
            value["verified"] = json!(
                c.csp_check.straddles(1e-6) && c.cpsp_check.straddles(1e-6) && c.cp_squared_check.straddles(1e-6)
            );
            Ok(Outcome::flat(value, true))
        }
    }
}

fn check_resolution(r: usize) -> Result<(), Failure> {
    if !(4..=4096).contains(&r) {
        return Err(validation(format!("--resolution must lie in 4..=4096, got {r}")));
    }
    Ok(())
}

fn cmd_represent(method: Method, ctx: &mut Context) -> Result<Outcome, Failure> {
    ctx.float_only("represent")?;
    let opts = ctx.options()?;
    let doc = (ctx.input)()?;
    let d = distribution_from_json(&doc)?;
    let method = match method {
        Method::Lp => RepresentMethod::Lp,
        Method::Constructive => RepresentMethod::Constructive,
    };
    let m = represent(&d, method, &opts)?;
    let report = verify_representation(&d, &m)?;
    let mut value = m.to_json(report.residual);
    value["mass"] = number(m.mass());
    value["method"] = json!(match method {
        RepresentMethod::Lp => "lp",
        RepresentMethod::Constructive => "constructive",
    });
    value["states"] = json!(d.states);
    value["order"] = json!(d.order);
    Ok(Outcome::flat(value, m.converged))
}

/// `a..b`, `a..=b` (both inclusive), a single value, or a comma list.
pub fn parse_sweep(s: &str) -> Result<Vec<usize>, Failure> {
    let bad = || validation(format!("--N expects a value, a list or a range like 2..8, got {s:?}"));
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
    let values: Vec<usize> = if let Some((lo, hi)) = s.split_once("..") {
        let hi = hi.strip_prefix('=').unwrap_or(hi);
        let r: RangeInclusive<usize> = num(lo)?..=num(hi)?;
        if r.is_empty() {
            return Err(bad());
        }
        r.collect()
    } else {
        s.split(',').map(num).collect::<Result<_, _>>()?
    };
    if values.len() > 4096 {
        return Err(validation("--N sweep is limited to 4096 points"));
    }
    Ok(values)
}

fn cmd_extend(n: usize, big_n: &str, m: Option<usize>, exact: bool, ctx: &Context) -> Result<Outcome, Failure> {
    ctx.float_only("extend-bounds")?;
    check_order(n, MAX_SWEEP_N)?;
    let opts = ctx.options()?;
    let sweep = parse_sweep(big_n)?;
    if let Some(&bad) = sweep.iter().find(|&&v| v < n) {
        return Err(validation(format!("every N must be at least n = {n}, got {bad}")));
    }
    if m == Some(0) {
        return Err(validation("--m must be positive"));
    }
    let rows: Vec<ExtendibilityBounds> = sweep
        .par_iter()
        .map(|&big| {
            let point = |exact| match m {
                Some(m) => kappa_nNm_bounds(n, big, m, exact, &opts),
                None => kappa_nN_bounds(n, big, exact, &opts),
            };
            // points beyond the exact solver's reach keep their analytic bounds
            match point(exact) {
                Err(Error::Unsupported(_)) if exact => point(false),
                other => other,
            }
        })
        .collect::<Result<_, _>>()?;
    let converged = rows.iter().all(|r| r.lp_value.as_ref().is_none_or(|b| b.converged));
    let table = Table {
        header: ExtendibilityBounds::csv_header().iter().map(|h| h.to_string()).collect(),
        rows: rows.iter().map(|r| r.csv_record()).collect(),
    };
    Ok(Outcome {
        value: Value::Array(rows.iter().map(|r| r.to_json()).collect()),
        table,
        converged,
    })
}

fn bracket(b: &NormBounds) -> Value {
    json!({"lower": number(b.lower), "upper": number(b.upper), "converged": b.converged})
}

fn matrix_report(a: [[f64; 2]; 2], opts: &NormOptions) -> Result<(Value, bool), Failure> {
    let pisp = half_circle_lp(&a, opts)?;
    let pip = positive_wedge_lp(&matrix_tensor(&a), opts)?;
    let uvw = UVWCoords::from_matrix(&a);
    let value = json!({
        "matrix": [[number(a[0][0]), number(a[0][1])], [number(a[1][0]), number(a[1][1])]],
        "uvw": {"u": number(uvw.u), "v": number(uvw.v), "w": number(uvw.w)},
        "pi": number(trace_norm_2x2(&a)),
        "pisp": bracket(&pisp),
        "pip": bracket(&pip),
    });
    Ok((value, pisp.converged && pip.converged))
}

fn cmd_euclid2(which: &Euclid2Command, ctx: &Context) -> Result<Outcome, Failure> {
    let opts = ctx.options()?;
    match which {
        Euclid2Command::Ab { a, b } => {
            if !a.is_finite() || !b.is_finite() {
                return Err(validation("--a and --b must be finite"));
            }
            let closed = norms_ab(*a, *b);
            let (mut value, converged) = matrix_report([[*a, *b], [*b, *a]], &opts)?;
            value["closed_form"] = json!({
                "pi": number(closed.pi),
                "pisp": number(closed.pisp),
                "pip": number(closed.pip),
            });
            Ok(Outcome::flat(value, converged))
        }
        Euclid2Command::Matrix { entries } => {
            if entries.len() != 3 || entries.iter().any(|x| !x.is_finite()) {
                return Err(validation("--entries expects three finite numbers a00,a01,a11"));
            }
            let a = [[entries[0], entries[1]], [entries[1], entries[2]]];
            let (value, converged) = matrix_report(a, &opts)?;
            Ok(Outcome::flat(value, converged))
        }
        Euclid2Command::Points { kind, resolution } => {
            check_resolution(*resolution)?;
            let (ball, name) = match kind {
                Ball::Pi => (BallKind::Pi, "pi"),
                Ball::Pisp => (BallKind::Pisp, "pisp"),
                Ball::Pip => (BallKind::Pip, "pip"),
            };
            let points: Vec<Value> = extreme_points(ball, *resolution)
                .iter()
                .map(|p| json!({"u": number(p.u), "v": number(p.v), "w": number(p.w)}))
                .collect();
            let table = Table::records(&points);
            Ok(Outcome {
                value: json!({"kind": name, "resolution": resolution, "points": points}),
                table,
                converged: true,
            })
        }
        Euclid2Command::Constants { resolution } => {
            check_resolution(*resolution)?;
            let c = constants_l2(*resolution, &opts)?;
            Ok(Outcome::flat(c.to_json(), true))
        }
    }
}

fn cmd_norm(kind: NormKind, space: Space, ctx: &mut Context) -> Result<Outcome, Failure> {
    ctx.float_only("norm")?;
    let opts = ctx.options()?;
    let doc = (ctx.input)()?;
    let t = SymmetricTensor::from_json(&doc)?;
    let s = match space {
        Space::L1 => SpaceDescriptor::l1(t.dim()),
        Space::L2 => SpaceDescriptor::l2_dim2(),
    };
    let b = match kind {
        NormKind::Pi => norm_pi(&t, &s)?,
        NormKind::Pip => norm_pip(&t, &s, &opts)?,
        NormKind::Pis => norm_pis(&t, &s, &opts)?,
        NormKind::Pisp => norm_pisp(&t, &s, &opts)?,
    };
    let value = b.to_json();
    let mut flat = value.clone();
    flat.as_object_mut().map(|m| m.remove("dual"));
    Ok(Outcome {
        table: Table::flatten(&flat),
        converged: b.converged,
        value,
    })
}
