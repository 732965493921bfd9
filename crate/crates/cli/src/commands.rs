//! Single-module subcommands. Each reads its parameters from the `RunConfig`.

use std::path::Path;

use serde::Deserialize;
use serde_json::{json, Value};

use randcal_green::{
    averaged_green, conductivity_invariant_recover, default_directions, finite_model_recover, jensen_green_check,
    law_mixed_moments, monomial_name, recover_mean_variance, rigidity_residual, two_atom_pipeline, CoefficientSampler,
    Field, GreenError, Grid, Kind, PipelineConfig, ProbeConfig,
};
use randcal_moments::{build_moment_matched_laws, default_nodes, mean_potential_gap, run_product_trials, s_moment_gap};
use randcal_radial::{
    dn_table_numeric, rational_string, to_f64, verify_affine_identity, Mode, QNFamily, RadialPotential,
};
use randcal_symcalc::{
    conductivity_symbol, compose, parametrix, parse_rational, schrodinger_symbol, to_records, triangularity_report,
    Symbol,
};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::{cell, OutDir};
use crate::verdict::{render, Tolerance, Verdict};

fn mode(cfg: &RunConfig) -> Result<Mode, CliError> {
    match cfg.text("mode", "schrodinger")?.as_str() {
        "schrodinger" => Ok(Mode::Schrodinger),
        "conductivity" => Ok(Mode::Conductivity),
        other => Err(CliError::Config(format!("unknown mode {other:?}; expected schrodinger or conductivity"))),
    }
}

/// `symbols`: parametrix of the Schrödinger or 1D conductivity symbol, with triangularity.
pub fn symbols(cfg: &RunConfig, out: &OutDir) -> Result<Verdict, CliError> {
    cfg.expect_keys(&["kind", "cutoff", "triangularity"])?;
    let cutoff = cfg.int("cutoff", -8)? as i32;
    if cutoff > -2 {
        return Err(CliError::Config("cutoff must be <= -2".into()));
    }
    let kind = cfg.text("kind", "schrodinger")?;
    let p = match kind.as_str() {
        "schrodinger" => schrodinger_symbol(cutoff - 2),
        "conductivity" => conductivity_symbol(cutoff - 2),
        other => return Err(CliError::Config(format!("unknown symbol kind {other:?}"))),
    };
    let r = parametrix(&p, cutoff - 2)?;
    let shown = r.truncate(cutoff);
    let mut v = Verdict::new(format!("symbols {kind}"));
    let residual = compose(&p, &r, cutoff).sub(&Symbol::one(cutoff));
    v.measure(
        "terms of p#r - 1 above the cutoff",
        crate::verdict::Measured::Count(residual.len() as u64),
        Tolerance::AtMost(0.0),
    );
    if kind == "schrodinger" {
        let kmax = cfg.uint("triangularity", 6)?;
        let mut ok = true;
        for k in 1..=kmax {
            ok &= triangularity_report(k).is_ok();
        }
        v.flag(format!("triangularity for k <= {kmax}"), ok);
    }
    v.artifacts.push(out.write("symbols.json", render(&to_records(&shown)).as_bytes())?);
    v.artifacts.push(out.write("symbols.txt", format!("{shown}\n").as_bytes())?);
    Ok(v)
}

/// `radial`: exact vs shooting DN eigenvalues for a list of `Q_N`.
pub fn radial(cfg: &RunConfig, out: &OutDir) -> Result<Verdict, CliError> {
    cfg.expect_keys(&["family", "lambda", "lmax", "dim", "tolerance"])?;
    let lambda = cfg.rational("lambda", "16")?;
    let lmax = cfg.uint("lmax", 20)?;
    let dim = cfg.uint("dim", 3)?;
    let tol = cfg.float("tolerance", 1e-8)?;
    let mut rows = Vec::new();
    let mut worst: f64 = 0.0;
    for n in cfg.uint_list("family", &[1, 5, 7])? {
        let fam = QNFamily::new(lambda.clone(), n, dim)?;
        let num = dn_table_numeric(&RadialPotential::from_family(&fam), lmax, dim)?;
        for (&l, e) in &num.entries {
            let exact = fam.dn_eig_exact(l);
            let dev = (e.as_f64() - to_f64(&exact)).abs();
            worst = worst.max(dev);
            rows.push(vec![n.to_string(), l.to_string(), rational_string(&exact), cell(e.as_f64()), cell(dev)]);
        }
    }
    let mut v = Verdict::new("radial");
    v.float("max |numeric - exact|", worst, Tolerance::AtMost(tol));
    v.artifacts.push(out.write_csv("radial.csv", &["N", "l", "exact", "numeric", "deviation"], &rows)?);
    Ok(v)
}

/// `verify counterexample`: exact barycentric DN identity.
pub fn verify_counterexample(cfg: &RunConfig, out: &OutDir) -> Result<Verdict, CliError> {
    cfg.expect_keys(&["mode", "lmax", "lambda", "dim"])?;
    let m = mode(cfg)?;
    let lmax = cfg.uint("lmax", 50)?;
    let lambda = cfg.rational("lambda", "16")?;
    let dim = cfg.uint("dim", 3)?;
    let combo = [(randcal_radial::q(1, 2), 1), (randcal_radial::q(1, 2), 7)];
    let dev = verify_affine_identity(5, &combo, &lambda, dim, lmax, m)?;
    let mut v = Verdict::new(format!("verify counterexample {m:?}").to_lowercase());
    v.exact("max_deviation", dev.clone(), Tolerance::EqualsExact(randcal_radial::q(0, 1)));
    let body = json!({
        "schema_version": crate::verdict::SCHEMA_VERSION,
        "identity": format!("N=5 vs 1/2 N=1 + 1/2 N=7, l <= {lmax}"),
        "max_deviation": rational_string(&dev),
        "pass": v.pass(),
    });
    v.artifacts.push(out.write("identity.json", render(&body).as_bytes())?);
    Ok(v)
}

/// `moments`: moment-matched laws, moment table, product trials.
pub fn moments(cfg: &RunConfig, out: &OutDir) -> Result<Verdict, CliError> {
    cfg.expect_keys(&["order", "nodes", "lambda", "trials", "dim"])?;
    let order = cfg.uint("order", 2)?;
    let nodes = cfg.uint_list("nodes", &default_nodes(order))?;
    let lambda = cfg.rational("lambda", "16")?;
    let trials = cfg.uint("trials", 100)? as usize;
    let dim = cfg.uint("dim", 3)?;
    let m = build_moment_matched_laws(order, &nodes)?;
    let gap = mean_potential_gap(&m, &lambda, &randcal_radial::q(0, 1))?;
    let table = m.moment_table(order + 1);
    let mut v = Verdict::new("moments");
    v.flag(format!("E_A S^r = E_B S^r for r <= {order}"), table.iter().filter(|(r, ..)| *r <= order).all(|(_, a, b)| a == b));
    v.exact(format!("S-moment gap at r = {}", order + 1), s_moment_gap(&m, order + 1), Tolerance::NonzeroExact);
    v.exact("gap_at_zero", gap.clone(), Tolerance::PositiveExact);
    let mut rows = Vec::new();
    let mut equal = true;
    for r in 1..=order as usize {
        for t in run_product_trials(&m, &lambda, dim, r, trials, cfg.seed, false)? {
            equal &= t.equal();
            rows.push(vec![
                r.to_string(),
                t.trial.to_string(),
                rational_string(&t.e_a.re),
                rational_string(&t.e_a.im),
                rational_string(&t.e_b.re),
                rational_string(&t.e_b.im),
                t.equal().to_string(),
            ]);
        }
    }
    v.flag("product moments equal for every batch", equal);
    let law = |l: &std::collections::BTreeMap<u32, randcal_radial::Rational>| -> Value {
        l.iter().map(|(n, p)| json!({"N": n, "weight": rational_string(p)})).collect()
    };
    let body = json!({
        "schema_version": crate::verdict::SCHEMA_VERSION,
        "kernel": m.kernel.iter().map(rational_string).collect::<Vec<_>>(),
        "lawA": law(&m.law_a),
        "lawB": law(&m.law_b),
        "moment_table": table.iter().map(|(r, a, b)| json!({"r": r, "A": rational_string(a), "B": rational_string(b)})).collect::<Vec<_>>(),
        "gap_at_zero": rational_string(&gap),
    });
    v.artifacts.push(out.write("moments.json", render(&body).as_bytes())?);
    v.artifacts.push(out.write_csv("products.csv", &["r", "trial", "EA_re", "EA_im", "EB_re", "EB_im", "equal"], &rows)?);
    Ok(v)
}

/// Field given inline (full-grid values) or as a one-column CSV file.
#[derive(Deserialize)]
#[serde(untagged)]
enum FieldSpec {
    Inline(Vec<f64>),
    Csv { csv: String },
}

#[derive(Deserialize)]
#[serde(untagged)]
enum WeightSpec {
    Exact(String),
    Float(f64),
}

#[derive(Deserialize)]
struct AtomSpec {
    weight: WeightSpec,
    field: FieldSpec,
}

#[derive(Deserialize)]
struct SupportSpec {
    weight: WeightSpec,
    x: Vec<f64>,
}

#[derive(Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
enum SamplerSpec {
    Atoms { atoms: Vec<AtomSpec> },
    FiniteModel { q0: FieldSpec, v: Vec<FieldSpec>, law: Vec<SupportSpec> },
}

fn weight(w: &WeightSpec) -> Result<f64, CliError> {
    match w {
        WeightSpec::Float(x) => Ok(*x),
        WeightSpec::Exact(s) => parse_rational(s)
            .map(|r| to_f64(&r))
            .ok_or_else(|| CliError::Config(format!("weight {s:?} is not a rational"))),
    }
}

fn load_field(spec: &FieldSpec, grid: Grid, base: &Path) -> Result<Field, CliError> {
    let values = match spec {
        FieldSpec::Inline(v) => v.clone(),
        FieldSpec::Csv { csv } => {
            let mut r = csv::ReaderBuilder::new()
                .has_headers(false)
                .from_path(base.join(csv))
                .map_err(|e| CliError::Config(format!("{csv}: {e}")))?;
            let mut v = Vec::new();
            for rec in r.records() {
                let rec = rec.map_err(|e| CliError::Config(format!("{csv}: {e}")))?;
                for c in rec.iter() {
                    v.push(c.trim().parse().map_err(|_| CliError::Config(format!("{csv}: bad number {c:?}")))?);
                }
            }
            v
        }
    };
    Ok(Field::new(grid, values)?)
}

fn load_sampler(path: &Path, grid: Grid) -> Result<CoefficientSampler, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let spec: SamplerSpec =
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let base = path.parent().unwrap_or(Path::new("."));
    Ok(match spec {
        SamplerSpec::Atoms { atoms } => CoefficientSampler::Atoms(
            atoms.iter().map(|a| Ok((weight(&a.weight)?, load_field(&a.field, grid, base)?))).collect::<Result<_, CliError>>()?,
        ),
        SamplerSpec::FiniteModel { q0, v, law } => CoefficientSampler::FiniteModel {
            q0: load_field(&q0, grid, base)?,
            v: v.iter().map(|f| load_field(f, grid, base)).collect::<Result<_, _>>()?,
            law: law.iter().map(|s| Ok((weight(&s.weight)?, s.x.clone()))).collect::<Result<_, CliError>>()?,
        },
    })
}

fn parse_grid(s: &str) -> Result<Grid, CliError> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |t: &str| t.parse::<usize>().map_err(|_| CliError::Config(format!("bad grid size {t:?}")));
    match parts.as_slice() {
        [n] => Ok(Grid::new(1, num(n)?)?),
        [n, m] if num(n)? == num(m)? => Ok(Grid::new(2, num(n)?)?),
        [_, _] => Err(CliError::Config("2D grids must be square (n,n)".into())),
        _ => Err(CliError::Config(format!("grid {s:?} must be n or n,n"))),
    }
}

/// Probe nodes as 1-based full-grid coordinates `[i]` or `[i, j]`.
fn load_probes(path: &Path, grid: Grid) -> Result<Vec<usize>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let coords: Vec<Vec<usize>> =
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    coords
        .iter()
        .map(|c| {
            let (i, j) = match (grid.dim(), c.as_slice()) {
                (1, [i]) => (*i, 0),
                (2, [i, j]) => (*i, *j),
                _ => return Err(CliError::Config(format!("probe {c:?} does not match a {}D grid", grid.dim()))),
            };
            grid.interior_index(i, j).ok_or_else(|| CliError::Config(format!("probe {c:?} is not interior")))
        })
        .collect()
}

fn kind(cfg: &RunConfig) -> Result<Kind, CliError> {
    match cfg.text("kind", "potential")?.as_str() {
        "potential" => Ok(Kind::Potential),
        "conductivity" => Ok(Kind::Conductivity),
        other => Err(CliError::Config(format!("unknown kind {other:?}; expected potential or conductivity"))),
    }
}

fn coords_of(grid: Grid, k: usize) -> String {
    let (i, j) = grid.coords(k);
    if grid.dim() == 1 {
        i.to_string()
    } else {
        format!("{i};{j}")
    }
}

/// `green <task>`: jensen, mean-variance, two-atom, finite-model, rigidity, invariant.
pub fn green(task: &str, cfg: &RunConfig, out: &OutDir) -> Result<Verdict, CliError> {
    cfg.expect_keys(&["grid", "kind", "sampler", "probes", "tau", "kmax"])?;
    let sampler_path = cfg.opt_text("sampler")?.ok_or_else(|| CliError::Config("--sampler <json> is required".into()))?;
    let grid = parse_grid(&cfg.text("grid", "400")?)?;
    let sampler = load_sampler(Path::new(&sampler_path), grid)?;
    let kind = kind(cfg)?;
    sampler.validate(kind)?;
    let probes = match cfg.opt_text("probes")? {
        Some(p) => load_probes(Path::new(&p), grid)?,
        None => (0..grid.len()).collect(),
    };
    let mut v = Verdict::new(format!("green {task}"));
    match task {
        "jensen" => {
            let r = jensen_green_check(&sampler)?;
            v.float("lambda_min(Ebar - G_qbar)", r.lambda_min, Tolerance::AtLeast(-1e-10));
            v.float("second-order identity residual", r.second_order_residual, Tolerance::AtMost(1e-10));
        }
        "mean-variance" => {
            let ebar = averaged_green(&sampler, Kind::Potential)?;
            let mv = recover_mean_variance(&ebar, &ProbeConfig::for_grid(&grid))?;
            let mean = sampler.mean()?.interior();
            let m2 = &sampler.moment_fields(2)?[1].interior();
            let var: Vec<f64> = m2.iter().zip(&mean).map(|(a, m)| a - m * m).collect();
            let rows = probes
                .iter()
                .map(|&k| vec![coords_of(grid, k), cell(mv.mean[k]), cell(mean[k]), cell(mv.variance[k]), cell(var[k])])
                .collect::<Vec<_>>();
            let rel = |a: &[f64], b: &[f64]| probes.iter().map(|&k| (a[k] / b[k] - 1.0).abs()).fold(0.0, f64::max);
            v.float("max relative error of qbar", rel(&mv.mean, &mean), Tolerance::AtMost(0.05));
            v.float("max relative error of Var", rel(&mv.variance, &var), Tolerance::AtMost(0.10));
            v.artifacts.push(out.write_csv("mean_variance.csv", &["node", "mean", "mean_true", "var", "var_true"], &rows)?);
        }
        "two-atom" => {
            let CoefficientSampler::Atoms(atoms) = &sampler else {
                return Err(CliError::Config("two-atom recovery needs an atoms sampler".into()));
            };
            if atoms.len() != 2 {
                return Err(CliError::Config("two-atom recovery needs exactly two atoms".into()));
            }
            let tau = cfg.float("tau", atoms[0].0)?;
            let ebar = averaged_green(&sampler, Kind::Potential)?;
            let res = two_atom_pipeline(&ebar, tau, &PipelineConfig::default())?;
            let (q1, q2) = (atoms[0].1.interior(), atoms[1].1.interior());
            let mut worst: f64 = 0.0;
            let rows = probes
                .iter()
                .map(|&k| {
                    let ((a, b), br) = res.atoms[k];
                    worst = worst.max((a / q1[k] - 1.0).abs()).max((b / q2[k] - 1.0).abs());
                    vec![coords_of(grid, k), cell(a), cell(q1[k]), cell(b), cell(q2[k]), format!("{br:?}")]
                })
                .collect::<Vec<_>>();
            v.float("max relative atom error", worst, Tolerance::AtMost(0.10));
            v.artifacts.push(out.write_csv("two_atom.csv", &["node", "q1", "q1_true", "q2", "q2_true", "branch"], &rows)?);
        }
        "finite-model" => {
            let CoefficientSampler::FiniteModel { q0, v: fields, law } = &sampler else {
                return Err(CliError::Config("finite-model recovery needs a finite_model sampler".into()));
            };
            let kmax = cfg.uint("kmax", 3)?;
            let pick = |f: &Field| -> Vec<f64> {
                let vals = f.interior();
                probes.iter().map(|&k| vals[k]).collect()
            };
            let moments: Vec<Vec<f64>> = sampler.moment_fields(kmax)?.iter().map(pick).collect();
            let fv: Vec<Vec<f64>> = fields.iter().map(pick).collect();
            match finite_model_recover(&moments, &pick(q0), &fv, kmax) {
                Ok(got) => {
                    let want = law_mixed_moments(law, fields.len(), kmax);
                    let mut worst: f64 = 0.0;
                    let rows = want
                        .iter()
                        .map(|(a, w)| {
                            worst = worst.max((got[a] - w).abs());
                            vec![monomial_name(a), cell(got[a]), cell(*w)]
                        })
                        .collect::<Vec<_>>();
                    v.float("max |E X^alpha error|", worst, Tolerance::AtMost(1e-8));
                    v.artifacts.push(out.write_csv("mixed_moments.csv", &["monomial", "recovered", "true"], &rows)?);
                }
                Err(GreenError::RankDeficient { degree, monomials }) => {
                    v.flag("monomials independent on the probe region", false);
                    v.note(format!("dependent at degree {degree}: {}", monomials.join(", ")));
                }
                Err(e) => return Err(e.into()),
            }
        }
        "rigidity" => {
            let CoefficientSampler::Atoms(atoms) = &sampler else {
                return Err(CliError::Config("rigidity needs an atoms sampler".into()));
            };
            if atoms.len() != 2 {
                return Err(CliError::Config("rigidity needs exactly two atoms".into()));
            }
            let tau = atoms[0].0;
            let (q1, q2) = (&atoms[0].1, &atoms[1].1);
            let q = match kind {
                Kind::Potential => Field::combine(&[(tau, q1), (1.0 - tau, q2)])?,
                Kind::Conductivity => q1.zip_with(q2, |a, b| 1.0 / (tau / a + (1.0 - tau) / b))?,
            };
            let r = rigidity_residual(&q, q1, q2, tau, kind)?;
            v.float("residual", r.residual, Tolerance::Info);
            if let Some(p) = r.proportional {
                v.note(format!("proportional pair: {p}"));
                v.flag("residual vanishes exactly for proportional pairs", p == (r.residual <= 1e-10));
            }
        }
        "invariant" => {
            if kind != Kind::Conductivity {
                return Err(CliError::Config("the invariant task needs --kind conductivity".into()));
            }
            let ebar = averaged_green(&sampler, Kind::Conductivity)?;
            let inv = conductivity_invariant_recover(&ebar, &probes, &default_directions(4), &ProbeConfig::plane(), &[1, 2, 3, 4])?;
            let rows = inv
                .points
                .iter()
                .map(|p| vec![coords_of(grid, p.node), cell(p.c[0][0]), cell(p.c[0][1]), cell(p.c[1][1])])
                .collect::<Vec<_>>();
            v.measure("probe points", crate::verdict::Measured::Count(rows.len() as u64), Tolerance::AtLeast(1.0));
            v.artifacts.push(out.write_csv("invariant.csv", &["node", "C11", "C12", "C22"], &rows)?);
            let m = inv.m.interior();
            let mrows = (0..grid.len()).map(|k| vec![coords_of(grid, k), cell(m[k])]).collect::<Vec<_>>();
            v.artifacts.push(out.write_csv("m_field.csv", &["node", "m"], &mrows)?);
        }
        other => return Err(CliError::Config(format!("unknown green task {other:?}"))),
    }
    Ok(v)
}
