use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{anyhow, bail, Context};
use serde_json::{json, Value};

use sonc_core::polyalg::{parse_poly, parse_rational};
use sonc_core::socrep::BuildResult;
use sonc_core::{
    build_lower_bound, build_membership, copositive_cert_verify, enumerate_circuits,
    extract_certificate, gram_reconstruct, module_verify, psd_check, solve, sos_extract, Circuit,
    CircuitPoly, GramCertificate, ModuleCertificate, SolverStatus, SparsePoly, SymMatrix,
};

use crate::config::RunConfig;

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_INFEASIBLE: u8 = 2;
pub const EXIT_NUMERICAL: u8 = 3;

/// Result JSON goes to stdout, the human summary to stderr.
fn emit(command: &str, config: &RunConfig, payload: Value) {
    let mut doc = json!({
        "command": command,
        "config": config,
        "timestamp": SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs_f64())
            .unwrap_or(0.0),
    });
    if let (Value::Object(doc), Value::Object(extra)) = (&mut doc, payload) {
        doc.extend(extra);
    }
    println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
}

/// `@path` loads a file; anything else is inline JSON.
fn load_json_arg(arg: &str) -> anyhow::Result<String> {
    if let Some(path) = arg.strip_prefix('@') {
        std::fs::read_to_string(path).with_context(|| format!("reading {path}"))
    } else {
        Ok(arg.to_string())
    }
}

fn parse_input_poly(text: &str) -> anyhow::Result<SparsePoly> {
    parse_poly(text, None).map_err(|e| anyhow!("{e}"))
}

/// The degree bound 2d: the given value (must be even and at least the
/// polynomial degree) or the smallest admissible even bound.
fn resolve_two_d(f: &SparsePoly, deg: Option<u32>) -> anyhow::Result<u32> {
    let fdeg = f.degree().max(0) as u32;
    match deg {
        Some(d) => {
            if d % 2 != 0 {
                bail!("--deg must be even, got {d}");
            }
            if fdeg > d {
                bail!("polynomial degree {fdeg} exceeds --deg {d}");
            }
            Ok(d)
        }
        None => Ok((fdeg + 1) / 2 * 2).map(|d: u32| d.max(2)),
    }
}

fn candidates(
    f: &SparsePoly,
    two_d: u32,
    config: &RunConfig,
) -> anyhow::Result<Vec<Circuit>> {
    let support: Vec<_> = f.support().cloned().collect();
    enumerate_circuits(f.nvars(), &support, two_d, config.support_cap)
        .map_err(|e| anyhow!("{e}"))
}

fn status_str(status: SolverStatus) -> &'static str {
    match status {
        SolverStatus::Optimal => "optimal",
        SolverStatus::Infeasible => "infeasible",
        SolverStatus::Unbounded => "unbounded",
        SolverStatus::MaxIter => "max_iter",
        SolverStatus::Numerical => "numerical",
    }
}

/// Shared tail of `bound` and `member`: solve, extract, report.
#[allow(clippy::too_many_arguments)]
fn run_relaxation(
    command: &str,
    config: &RunConfig,
    f: &SparsePoly,
    two_d: u32,
    poly_text: &str,
    build: BuildResult,
    n_candidates: usize,
    lower_bound: bool,
) -> anyhow::Result<u8> {
    let res = solve(&build.program, &config.solver_options()).map_err(|e| anyhow!("{e}"))?;
    let base = json!({
        "poly": poly_text,
        "deg": two_d,
        "status": status_str(res.status),
        "support_restricted": build.support_restricted,
        "circuits_considered": n_candidates,
        "circuits_skipped": build.skipped_circuits,
        "circuits_pruned": build.pruned_circuits,
        "iterations": res.iterations,
        "residuals": { "primal": res.residuals.primal, "dual": res.residuals.dual,
                       "gap": res.residuals.gap },
    });
    match res.status {
        SolverStatus::Optimal => {
            let cert = match extract_certificate(&build, f, &res) {
                Ok(c) => c,
                Err(e) => {
                    let mut payload = base;
                    payload["status"] = json!("numerical");
                    payload["error"] = json!(format!("{e}"));
                    emit(command, config, payload);
                    eprintln!("certificate extraction failed: {e}");
                    return Ok(EXIT_NUMERICAL);
                }
            };
            let mut payload = base;
            payload["bound"] = json!(cert.bound);
            payload["feasible"] = json!(true);
            payload["circuits_used"] = json!(cert.circuit_terms.len());
            payload["certificate"] = serde_json::to_value(&cert)?;
            emit(command, config, payload);
            if lower_bound {
                eprintln!(
                    "bound: {:.9} (status optimal, {} iterations, {} circuit terms, {} squares)",
                    cert.bound,
                    res.iterations,
                    cert.circuit_terms.len(),
                    cert.square_terms.len()
                );
            } else {
                eprintln!(
                    "member: yes ({} iterations, {} circuit terms, {} squares)",
                    res.iterations,
                    cert.circuit_terms.len(),
                    cert.square_terms.len()
                );
            }
            Ok(EXIT_OK)
        }
        SolverStatus::Infeasible => {
            let mut payload = base;
            payload["feasible"] = json!(false);
            emit(command, config, payload);
            eprintln!("{command}: infeasible (certified improving ray)");
            Ok(EXIT_INFEASIBLE)
        }
        SolverStatus::Unbounded | SolverStatus::MaxIter | SolverStatus::Numerical => {
            emit(command, config, base);
            eprintln!("{command}: solver stopped with status {}", status_str(res.status));
            Ok(EXIT_NUMERICAL)
        }
    }
}

pub fn cmd_bound(
    config: &RunConfig,
    poly_text: &str,
    deg: Option<u32>,
) -> anyhow::Result<u8> {
    let f = parse_input_poly(poly_text)?;
    let two_d = resolve_two_d(&f, deg)?;
    let circuits = candidates(&f, two_d, config)?;
    match build_lower_bound(&f, &circuits, &config.build_options()) {
        Ok(build) => run_relaxation(
            "bound", config, &f, two_d, poly_text, build, circuits.len(), true,
        ),
        Err(sonc_core::SocrepError::UncoverableTerm(e)) => {
            emit(
                "bound",
                config,
                json!({
                    "poly": poly_text,
                    "deg": two_d,
                    "status": "infeasible",
                    "reason": format!("uncoverable term {e}"),
                    "support_restricted": true,
                }),
            );
            eprintln!("bound: infeasible by structure (term {e} is uncoverable)");
            Ok(EXIT_INFEASIBLE)
        }
        Err(e) => Err(anyhow!("{e}")),
    }
}

pub fn cmd_member(
    config: &RunConfig,
    poly_text: &str,
    deg: Option<u32>,
) -> anyhow::Result<u8> {
    let f = parse_input_poly(poly_text)?;
    let two_d = resolve_two_d(&f, deg)?;
    let circuits = candidates(&f, two_d, config)?;
    match build_membership(&f, &circuits, &config.build_options()) {
        Ok(build) => run_relaxation(
            "member", config, &f, two_d, poly_text, build, circuits.len(), false,
        ),
        Err(sonc_core::SocrepError::UncoverableTerm(e)) => {
            emit(
                "member",
                config,
                json!({
                    "poly": poly_text,
                    "deg": two_d,
                    "status": "infeasible",
                    "feasible": false,
                    "reason": format!("uncoverable term {e}"),
                    "support_restricted": true,
                }),
            );
            eprintln!("member: no (term {e} is uncoverable)");
            Ok(EXIT_INFEASIBLE)
        }
        Err(e) => Err(anyhow!("{e}")),
    }
}

pub fn cmd_circuit_check(
    config: &RunConfig,
    circuit_arg: &str,
    coeffs_arg: &str,
) -> anyhow::Result<u8> {
    let circuit: Circuit = serde_json::from_str(&load_json_arg(circuit_arg)?)
        .context("parsing circuit JSON")?;
    let values: Vec<_> = coeffs_arg
        .split(',')
        .map(|s| parse_rational(s.trim()).map_err(|e| anyhow!("coefficient {s:?}: {e}")))
        .collect::<Result<_, _>>()?;
    let expected = circuit.vertices().len() + 1;
    if values.len() != expected {
        bail!(
            "expected {expected} coefficients ({} vertex coefficients plus the inner one), got {}",
            circuit.vertices().len(),
            values.len()
        );
    }
    let mut vertex_coeffs = values;
    let beta_coeff = vertex_coeffs.pop().expect("nonempty");
    let poly =
        CircuitPoly::new(circuit, vertex_coeffs, beta_coeff).map_err(|e| anyhow!("{e}"))?;
    let theta = poly.circuit_number().ok();
    let nonnegative = poly.is_nonnegative();
    let strict = poly.is_strict_member();
    let boundary = poly.is_boundary();
    let verdict = if !nonnegative {
        "not nonnegative".to_string()
    } else {
        let kind = if boundary { "boundary" } else { "interior" };
        match theta {
            Some(t) => format!("nonnegative ({kind}), Theta = {t}"),
            None => format!("nonnegative ({kind})"),
        }
    };
    emit(
        "circuit-check",
        config,
        json!({
            "theta": theta,
            "nonnegative": nonnegative,
            "strict_member": strict,
            "boundary": boundary,
            "verdict": verdict,
            "polynomial": poly.to_poly().to_string(),
        }),
    );
    eprintln!("{verdict}");
    Ok(EXIT_OK)
}

pub fn cmd_gram_verify(
    config: &RunConfig,
    poly_text: &str,
    gram_arg: &str,
) -> anyhow::Result<u8> {
    let f = parse_input_poly(poly_text)?;
    let cert: GramCertificate =
        serde_json::from_str(&load_json_arg(gram_arg)?).context("parsing Gram JSON")?;
    if cert.nvars() != f.nvars() {
        bail!(
            "Gram certificate is over {} variables, polynomial over {}",
            cert.nvars(),
            f.nvars()
        );
    }
    let reconstructed = gram_reconstruct(&cert);
    let diff = &reconstructed - &f;
    let residual = diff.max_abs_coeff();
    let worst = diff
        .terms()
        .max_by(|a, b| {
            let fa = sonc_core::polyalg::rat_to_f64(a.1).abs();
            let fb = sonc_core::polyalg::rat_to_f64(b.1).abs();
            fa.partial_cmp(&fb).expect("finite coefficients")
        })
        .map(|(e, _)| e.to_string());
    let check = psd_check(cert.matrix(), sonc_core::soscert::DEFAULT_PSD_TOL);
    let matched = residual <= config.tol;
    let verified = matched && check.psd;
    let squares: Vec<String> = if check.psd {
        sos_extract(&cert, sonc_core::soscert::DEFAULT_PSD_TOL)
            .map(|sq| sq.iter().map(|s| s.to_string()).collect())
            .unwrap_or_default()
    } else {
        Vec::new()
    };
    emit(
        "gram-verify",
        config,
        json!({
            "verified": verified,
            "coefficients_match": matched,
            "residual": residual,
            "worst_exponent": worst,
            "psd": check.psd,
            "witness": check.witness.as_ref().map(|(v, val)| json!({
                "vector": v, "value": val,
            })),
            "squares": squares,
            "gram_size": cert.size(),
        }),
    );
    if verified {
        eprintln!(
            "verified: f = sum of {} squares (residual {residual:.3e})",
            squares.len()
        );
    } else if !check.psd {
        eprintln!("rejected: Gram matrix is not PSD (witness attached)");
    } else {
        eprintln!("rejected: coefficient residual {residual:.3e} exceeds tol {}", config.tol);
    }
    Ok(EXIT_OK)
}

pub fn cmd_module_verify(
    config: &RunConfig,
    poly_text: &str,
    cert_arg: &str,
) -> anyhow::Result<u8> {
    let f = parse_input_poly(poly_text)?;
    let cert: ModuleCertificate =
        serde_json::from_str(&load_json_arg(cert_arg)?).context("parsing module certificate")?;
    let report = module_verify(&f, &cert, config.tol).map_err(|e| anyhow!("{e}"))?;
    emit(
        "module-verify",
        config,
        serde_json::to_value(&report).expect("report serializes"),
    );
    if report.ok {
        eprintln!("verified (residual {:.3e})", report.residual);
    } else {
        eprintln!(
            "rejected: residual {:.3e}{}",
            report.residual,
            report
                .worst_exponent
                .as_deref()
                .map(|e| format!(" at {e}"))
                .unwrap_or_default()
        );
    }
    Ok(EXIT_OK)
}

pub fn cmd_copositive_verify(
    config: &RunConfig,
    m_arg: &str,
    p_arg: &str,
    n_arg: &str,
) -> anyhow::Result<u8> {
    let parse = |arg: &str, name: &str| -> anyhow::Result<SymMatrix> {
        serde_json::from_str(&load_json_arg(arg)?)
            .with_context(|| format!("parsing matrix {name}"))
    };
    let m = parse(m_arg, "M")?;
    let p = parse(p_arg, "P")?;
    let n = parse(n_arg, "N")?;
    if m.size() != p.size() || m.size() != n.size() {
        bail!("matrix sizes disagree: {} / {} / {}", m.size(), p.size(), n.size());
    }
    let report = copositive_cert_verify(&m, &p, &n, config.tol);
    let complete_form = m.size() <= 4;
    emit(
        "copositive-verify",
        config,
        json!({
            "ok": report.ok,
            "split_residual": report.split_residual,
            "p_is_psd": report.p_is_psd,
            "min_n_entry": report.min_n_entry,
            // The P + N split is a complete certificate form only for
            // matrices of size at most 4.
            "complete_certificate_form": complete_form,
        }),
    );
    eprintln!(
        "{} (split residual {:.3e}, P psd: {}, min N entry {:.3e})",
        if report.ok { "verified" } else { "rejected" },
        report.split_residual,
        report.p_is_psd,
        report.min_n_entry
    );
    Ok(EXIT_OK)
}

pub fn cmd_witness(
    config: &RunConfig,
    n: usize,
    d: u32,
    points: usize,
    subset_size: Option<usize>,
    out_dir: &Path,
) -> anyhow::Result<u8> {
    use sonc_core::neighborly::{
        sample_general_position, slack_table_csv, verify_star, witness_family,
    };
    let dim = sonc_core::space_dim(n, d).map_err(|e| anyhow!("{e}"))?;
    let k = subset_size.unwrap_or(dim - 1);
    if points < k {
        bail!("need at least {k} points for subsets of size {k}, got {points}");
    }
    let configuration = match sample_general_position(n, d, points, config.seed) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("sampling failed: {e}");
            return Ok(EXIT_NUMERICAL);
        }
    };
    let family = witness_family(&configuration, k).map_err(|e| anyhow!("{e}"))?;
    let report = verify_star(&family);

    std::fs::create_dir_all(out_dir)
        .with_context(|| format!("creating {}", out_dir.display()))?;
    let config_path = out_dir.join("witness_config.json");
    let csv_path = out_dir.join("witness_slack.csv");
    std::fs::write(
        &config_path,
        serde_json::to_string_pretty(&configuration)?,
    )?;
    std::fs::write(&csv_path, slack_table_csv(&family))?;

    emit(
        "witness",
        config,
        json!({
            "n": n,
            "d": d,
            "points": points,
            "subset_size": k,
            "families": family.polys.len(),
            "ok": report.ok,
            "worst_zero_slack": report.worst_zero_slack,
            "worst_positive_margin": report.worst_positive_margin,
            "violations": report.violations.len(),
            "files": {
                "configuration": config_path.to_string_lossy(),
                "slack_csv": csv_path.to_string_lossy(),
            },
        }),
    );
    eprintln!(
        "witness family: {} subsets, verdict {} (zero slack {:.2e}, margin {:.2e})",
        family.polys.len(),
        report.ok,
        report.worst_zero_slack,
        report.worst_positive_margin
    );
    Ok(EXIT_OK)
}

pub fn cmd_export(config: &RunConfig, poly_text: &str, deg: Option<u32>) -> anyhow::Result<u8> {
    let f = parse_input_poly(poly_text)?;
    let two_d = resolve_two_d(&f, deg)?;
    let circuits = candidates(&f, two_d, config)?;
    match build_lower_bound(&f, &circuits, &config.build_options()) {
        Ok(build) => {
            println!("{}", build.program.to_json());
            eprintln!(
                "exported cone program: {} variables, {} equalities, {} cone blocks",
                build.program.nvar,
                build.program.equalities.rows,
                build.program.cones.len()
            );
            Ok(EXIT_OK)
        }
        Err(sonc_core::SocrepError::UncoverableTerm(e)) => {
            eprintln!("export: infeasible by structure (term {e} is uncoverable)");
            Ok(EXIT_INFEASIBLE)
        }
        Err(e) => Err(anyhow!("{e}")),
    }
}

/// Solve an exported cone-program JSON (the `--solve` path of round
/// trips).
pub fn cmd_solve_program(config: &RunConfig, program_arg: &str) -> anyhow::Result<u8> {
    let program = sonc_core::ConeProgram::from_json(&load_json_arg(program_arg)?)
        .context("parsing cone program JSON")?;
    let res = solve(&program, &config.solver_options()).map_err(|e| anyhow!("{e}"))?;
    emit(
        "solve-program",
        config,
        json!({
            "status": status_str(res.status),
            "objective": if res.objective.is_finite() { json!(res.objective) } else { json!(null) },
            "iterations": res.iterations,
            "residuals": { "primal": res.residuals.primal, "dual": res.residuals.dual,
                           "gap": res.residuals.gap },
        }),
    );
    eprintln!(
        "status {}: objective {} in {} iterations",
        status_str(res.status),
        res.objective,
        res.iterations
    );
    Ok(match res.status {
        SolverStatus::Optimal => EXIT_OK,
        SolverStatus::Infeasible => EXIT_INFEASIBLE,
        _ => EXIT_NUMERICAL,
    })
}
