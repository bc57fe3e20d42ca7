use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::process::ExitCode;

use ncdomain::domains::{boundary_slice, domain_membership};
use ncdomain::fock::{build_shifts, homogeneous_norm, numerical_norm, poisson_kernel};
use ncdomain::iso::{
    disk_witness, obstruction_search, sunada_all, sunada_equivalence, zero_fixing_known, BoundMethod, Certificate,
    ObstructionVerdict, Outcome, SunadaMatch, ZeroSet,
};
use ncdomain::selftest::{run_all, SelftestConfig};
use ncdomain::weights::{compute_weights, weight_by_compositions, COMPOSITION_ORACLE_MAX_LEN};
use ncdomain::{MatrixTuple, PolyElement, Symbol};

use crate::error::CliError;
use crate::{Cli, Command};

type Out = Box<dyn Write>;

pub fn run(cli: &Cli) -> Result<ExitCode, CliError> {
    if !(cli.tol > 0.0 && cli.tol.is_finite()) {
        return Err(CliError::Usage(format!("--tol must be positive, got {}", cli.tol)));
    }
    let out_path = cli.out.as_deref();
    match &cli.command {
        Command::Weights { symbol, max_len, oracle } => {
            check_len(*max_len)?;
            weights(cli, &load_symbol(symbol)?, *max_len, *oracle, open(out_path)?)
        }
        Command::Shifts { symbol, max_len } => {
            check_len(*max_len)?;
            shifts(&load_symbol(symbol)?, *max_len, out_path)
        }
        Command::Norm { symbol, poly, max_len } => {
            if let Some(l) = max_len {
                check_len(*l)?;
            }
            norm(cli, &load_symbol(symbol)?, &load(poly, PolyElement::parse)?, *max_len, open(out_path)?)
        }
        Command::Member { symbol, tuple } => {
            member(cli, &load_symbol(symbol)?, &load(tuple, MatrixTuple::parse)?, open(out_path)?)
        }
        Command::Slice { symbol, axes, res } => {
            check_res(*res)?;
            slice(&load_symbol(symbol)?, parse_axes(axes)?, *res, open(out_path)?)
        }
        Command::Poisson { symbol, tuple, max_len } => {
            check_len(*max_len)?;
            poisson(cli, &load_symbol(symbol)?, &load(tuple, MatrixTuple::parse)?, *max_len, open(out_path)?)
        }
        Command::Iso { f, g, dmax, res, all } => {
            if *dmax < 2 {
                return Err(CliError::Usage(format!("--dmax must be at least 2, got {dmax}")));
            }
            check_res(*res)?;
            iso(&load_symbol(f)?, &load_symbol(g)?, *dmax, *res, *all, open(out_path)?)
        }
        Command::Disk { symbol } => disk(&load_symbol(symbol)?, open(out_path)?),
        Command::Selftest { poisson_len } => {
            check_len(*poisson_len)?;
            selftest(cli.seed, *poisson_len, open(out_path)?)
        }
    }
}

fn check_len(len: usize) -> Result<(), CliError> {
    if len == 0 {
        return Err(CliError::Usage("--max-len must be at least 1".into()));
    }
    Ok(())
}

fn check_res(res: usize) -> Result<(), CliError> {
    if res < 10 {
        return Err(CliError::Usage(format!("--res must be at least 10, got {res}")));
    }
    Ok(())
}

fn parse_axes(text: &str) -> Result<(usize, usize), CliError> {
    let bad = || CliError::Usage(format!("--axes expects two one-based indices like 1,2, got {text:?}"));
    let (i, j) = text.split_once(',').ok_or_else(bad)?;
    let i: usize = i.trim().parse().map_err(|_| bad())?;
    let j: usize = j.trim().parse().map_err(|_| bad())?;
    if i == 0 || j == 0 || i == j {
        return Err(bad());
    }
    Ok((i - 1, j - 1))
}

fn load<T>(path: &Path, parse: impl Fn(&str) -> ncdomain::Result<T>) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::File { path: path.into(), source })?;
    parse(&text).map_err(|source| CliError::Content { path: path.into(), source })
}

fn load_symbol(path: &Path) -> Result<Symbol, CliError> {
    load(path, Symbol::parse)
}

fn open(path: Option<&Path>) -> Result<Out, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|source| CliError::File { path: p.into(), source })?)),
        None => Box::new(BufWriter::new(std::io::stdout())),
    })
}

fn list(v: &[f64]) -> String {
    let items: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("[{}]", items.join(", "))
}

fn weights(cli: &Cli, sym: &Symbol, max_len: usize, oracle: bool, mut out: Out) -> Result<ExitCode, CliError> {
    if oracle && max_len > COMPOSITION_ORACLE_MAX_LEN {
        return Err(CliError::Usage(format!("--oracle supports --max-len up to {COMPOSITION_ORACLE_MAX_LEN}")));
    }
    let table = compute_weights(sym, max_len)?;
    writeln!(out, "# weights n={} max_len={max_len} tol={:e}", sym.n(), cli.tol)?;
    if oracle {
        writeln!(out, "word b oracle rel_diff")?;
    } else {
        writeln!(out, "word b")?;
    }
    for (word, b) in table.iter() {
        let name = word.render(sym.n());
        if oracle {
            let o = if word.is_empty() { 1.0 } else { weight_by_compositions(sym, &word)? };
            writeln!(out, "{name} {b} {o} {:.3e}", (b - o).abs() / o)?;
        } else {
            writeln!(out, "{name} {b}")?;
        }
    }
    out.flush()?;
    Ok(ExitCode::SUCCESS)
}

fn shifts(sym: &Symbol, max_len: usize, out_path: Option<&Path>) -> Result<ExitCode, CliError> {
    let ops = build_shifts(sym, max_len)?;
    let mut out = open(out_path)?;
    out.write_all(ops.to_text().as_bytes())?;
    out.flush()?;
    if let Some(p) = out_path {
        println!("wrote {} matrices of dimension {} to {}", ops.n(), ops.fock().dim(), p.display());
    }
    Ok(ExitCode::SUCCESS)
}

fn norm(cli: &Cli, sym: &Symbol, x: &PolyElement, max_len: Option<usize>, mut out: Out) -> Result<ExitCode, CliError> {
    let degree = x.degree();
    let len = max_len.unwrap_or(degree + 3).max(1);
    let shifts = build_shifts(sym, len.max(degree))?;
    writeln!(out, "# norm n={} degree={degree} max_len={len} tol={:e}", sym.n(), cli.tol)?;
    let numeric = numerical_norm(&shifts.assemble(x)?)?;
    match x.homogeneous_degree() {
        Ok(_) => {
            let closed = homogeneous_norm(shifts.weights(), x)?;
            writeln!(out, "closed {closed}")?;
            writeln!(out, "numerical {numeric}")?;
            writeln!(out, "gap {:.3e}", (closed - numeric).abs())?;
        }
        Err(_) => {
            for j in 0..=degree {
                let part = x.homogeneous_part(j);
                if !part.is_zero() {
                    writeln!(out, "part {j} closed {}", homogeneous_norm(shifts.weights(), &part)?)?;
                }
            }
            writeln!(out, "numerical {numeric}")?;
        }
    }
    out.flush()?;
    Ok(ExitCode::SUCCESS)
}

fn member(cli: &Cli, sym: &Symbol, t: &MatrixTuple, mut out: Out) -> Result<ExitCode, CliError> {
    let v = domain_membership(sym, t, cli.tol)?;
    writeln!(out, "# member n={} k={} tol={:e}", t.n(), t.k(), cli.tol)?;
    writeln!(out, "status {}", v.status)?;
    writeln!(out, "margin {:.12e}", v.margin)?;
    out.flush()?;
    Ok(ExitCode::SUCCESS)
}

fn slice(sym: &Symbol, axes: (usize, usize), res: usize, mut out: Out) -> Result<ExitCode, CliError> {
    let points = boundary_slice(&sym.collapse(), axes, res)?;
    writeln!(out, "x,y")?;
    for (x, y) in points {
        writeln!(out, "{x},{y}")?;
    }
    out.flush()?;
    Ok(ExitCode::SUCCESS)
}

fn poisson(cli: &Cli, sym: &Symbol, t: &MatrixTuple, max_len: usize, mut out: Out) -> Result<ExitCode, CliError> {
    let kern = poisson_kernel(sym, t, max_len)?;
    writeln!(out, "# poisson n={} k={} max_len={max_len} tol={:e}", t.n(), t.k(), cli.tol)?;
    writeln!(out, "rho1 {:.6e}", kern.isometry_residual)?;
    writeln!(out, "rho2 {:.6e}", kern.intertwining_residual)?;
    out.flush()?;
    Ok(ExitCode::SUCCESS)
}

fn sunada_line(n: usize, m: &SunadaMatch) -> String {
    let sigma: Vec<String> = m.sigma.iter().map(|s| (s + 1).to_string()).collect();
    debug_assert_eq!(sigma.len(), n);
    format!("sigma=({}) s={} residual={:.3e}", sigma.join(" "), list(&m.s), m.residual)
}

fn iso(f: &Symbol, g: &Symbol, dmax: usize, res: usize, all: bool, mut out: Out) -> Result<ExitCode, CliError> {
    writeln!(out, "# assumption: the degree constraints bind only isomorphisms whose dual map fixes 0")?;
    if zero_fixing_known(f, g)? {
        writeln!(out, "#   holds for this pair: both collapse to z1 + z2 + z1z2, whose origin is fixed")?;
    } else {
        writeln!(out, "#   not established for this pair; an Obstructed verdict is conditional on it")?;
    }
    if f.n() != g.n() {
        writeln!(out, "verdict: different numbers of variables ({} vs {})", f.n(), g.n())?;
        out.flush()?;
        return Ok(ExitCode::from(2));
    }
    let (fnorm, cf) = f.normalize()?;
    let (gnorm, cg) = g.normalize()?;
    writeln!(out, "normalization f: c={}", list(&cf))?;
    writeln!(out, "normalization g: c={}", list(&cg))?;
    if all {
        let matches = sunada_all(f, g)?;
        if matches.is_empty() {
            writeln!(out, "sunada: none")?;
        }
        for m in &matches {
            writeln!(out, "sunada: {}", sunada_line(f.n(), m))?;
        }
    } else {
        match sunada_equivalence(f, g)? {
            Some(m) => writeln!(out, "sunada: {}", sunada_line(f.n(), &m))?,
            None => writeln!(out, "sunada: none")?,
        }
    }
    let verdict = obstruction_search(&fnorm, &gnorm, dmax, res)?;
    write_verdict(&mut out, &verdict)?;
    out.flush()?;
    Ok(ExitCode::from(match verdict.outcome() {
        Outcome::CandidateFound => 0,
        Outcome::Obstructed => 2,
        Outcome::Inconclusive => 3,
    }))
}

fn write_verdict(out: &mut Out, v: &ObstructionVerdict) -> std::io::Result<()> {
    for d in &v.degrees {
        writeln!(
            out,
            "degree {}: constraints={} targets=[{}, {}] hull=[{}, {}] identity_residual={:.3e}",
            d.degree, d.constraints, d.target_range.0, d.target_range.1, d.hull.0, d.hull.1, d.identity_residual
        )?;
    }
    writeln!(out, "verdict: {}", v.outcome())?;
    match &v.certificate {
        Certificate::Obstructed { degree, lower_bound, method } => {
            writeln!(out, "certificate: degree={degree} violation_lower_bound={lower_bound:.6e}")?;
            match method {
                BoundMethod::Grid { resolution, half_width, grid_minimum, argmin } => writeln!(
                    out,
                    "  method: grid resolution={resolution} half_width={half_width:.3e} grid_minimum={grid_minimum:.6e} at p={argmin}"
                )?,
                BoundMethod::Hull { beta, target, range } => writeln!(
                    out,
                    "  method: hull beta={beta} target={target} outside [{}, {}]",
                    range.0, range.1
                )?,
                BoundMethod::Exact { beta } => writeln!(out, "  method: exact beta={beta}")?,
            }
        }
        Certificate::CandidateFound { candidate, max_residual } => {
            writeln!(out, "certificate: max_residual={max_residual:.3e}")?;
            for row in candidate.to_string().lines() {
                writeln!(out, "  P {row}")?;
            }
            writeln!(out, "  note: satisfying these necessary conditions does not establish an isomorphism")?;
        }
        Certificate::Inconclusive { best_residual, .. } => {
            writeln!(out, "certificate: none (best max residual {best_residual:.3e})")?;
        }
    }
    if let Some(a) = &v.two_letter {
        for c in &a.constraints {
            let zeros = match &c.zeros {
                ZeroSet::Everywhere => "all of [0, 1]".to_string(),
                ZeroSet::Points(ps) if ps.is_empty() => "none".to_string(),
                ZeroSet::Points(ps) => list(ps),
            };
            writeln!(out, "constraint {}: residual(p) = {}; zeros in [0,1]: {zeros}", c.beta, c.residual)?;
        }
        for e in &a.endpoints {
            if let Some((beta, viol)) = e.worst() {
                writeln!(out, "endpoint p={}: worst norm violation {viol:.6} at {beta}", e.p)?;
            }
        }
    }
    Ok(())
}

fn disk(sym: &Symbol, mut out: Out) -> Result<ExitCode, CliError> {
    match disk_witness(sym)? {
        Some(c) => {
            writeln!(out, "true")?;
            writeln!(out, "witness: rescale by c={} to obtain the sum of the generators", list(&c))?;
        }
        None => writeln!(out, "false")?,
    }
    out.flush()?;
    Ok(ExitCode::SUCCESS)
}

fn selftest(seed: u64, poisson_len: usize, mut out: Out) -> Result<ExitCode, CliError> {
    let config = SelftestConfig { seed, poisson_len, ..SelftestConfig::default() };
    let reports = run_all(&config);
    for r in &reports {
        writeln!(out, "{r}")?;
    }
    let passed = reports.iter().filter(|r| r.passed).count();
    writeln!(out, "passed {passed}/{}", reports.len())?;
    out.flush()?;
    Ok(if passed == reports.len() { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axes() {
        assert_eq!(parse_axes("1,2").unwrap(), (0, 1));
        assert_eq!(parse_axes(" 3 , 1").unwrap(), (2, 0));
        for bad in ["1", "0,1", "2,2", "a,b", "1,2,3"] {
            assert!(matches!(parse_axes(bad), Err(CliError::Usage(_))), "{bad}");
        }
    }

    #[test]
    fn list_formatting() {
        assert_eq!(list(&[1.0, 0.5]), "[1, 0.5]");
        assert_eq!(list(&[]), "[]");
    }
}
