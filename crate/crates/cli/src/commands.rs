use std::fs;
use std::path::{Path, PathBuf};

use planarcode::dispersion::{
    display_grid, resolvent_shift, BoundaryCouplings, DispersionCurve, MAX_RESOLVENT_ORDER,
};
use planarcode::entropy::{entropy_report, Bipartition, EntropyReport};
use planarcode::groundspace::{degeneracy_log2, BoundaryConfig, CoefficientFamily};
use planarcode::lattice::Lattice;
use planarcode::spectrum::{
    build_hamiltonian, default_cluster_tol, dense_eigenvalues, ground_splitting_width,
    loglog_slope, lowest_eigenpairs, HamiltonianParams, Spectrum,
};
use serde::Serialize;

use crate::config::{pick, pick_opt, BoundaryArg, FamilyArg, FileConfig, Format};
use crate::{
    Common, DegeneracyArgs, DispersionArgs, EntropyArgs, Failure, PerturbArgs, SpectrumArgs,
};

/// Spin-count ceiling for the zero-field spectral cross-check in
/// `degeneracy` (the largest real lattice under it is 12 spins, a 4096
/// state dense solve).
const CROSSCHECK_SPINS: usize = 14;

/// Agreement gates behind exit code 2.
const ENTROPY_TOL: f64 = 1e-9;
const PERTURB_REL_TOL: f64 = 1e-10;

struct Ctx {
    rows: usize,
    cols: usize,
    bc: BoundaryArg,
    je: f64,
    jm: f64,
    hx: f64,
    format: Format,
    out: Option<PathBuf>,
    file: FileConfig,
}

impl Ctx {
    fn resolve(common: &Common) -> Result<Self, Failure> {
        Self::resolve_with(common, 2, 2)
    }

    fn resolve_with(common: &Common, rows: usize, cols: usize) -> Result<Self, Failure> {
        let file = FileConfig::load(common.config.as_deref())?;
        Ok(Ctx {
            rows: pick(common.rows, file.rows, rows),
            cols: pick(common.cols, file.cols, cols),
            bc: pick(common.bc, file.bc, BoundaryArg::Plaquette),
            je: pick(common.je, file.je, 1.0),
            jm: pick(common.jm, file.jm, 1.0),
            hx: pick(common.hx, file.hx, 0.0),
            format: pick(common.format, file.format, Format::Json),
            out: pick_opt(common.out.clone(), file.out.clone()),
            file,
        })
    }

    fn lattice(&self) -> Result<Lattice, Failure> {
        Ok(Lattice::new(self.rows, self.cols, self.bc.to_boundary())?)
    }

    fn require_json(&self, what: &str) -> Result<(), Failure> {
        if self.format != Format::Json {
            return Err(Failure::usage(format!("{what} reports are json only")));
        }
        Ok(())
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(path) => Ok(fs::write(path, text)?),
    }
}

fn emit_json<T: Serialize>(ctx: &Ctx, value: &T) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    emit(ctx.out.as_deref(), &text)
}

fn parse_f64(name: &str, s: &str) -> Result<f64, Failure> {
    s.trim()
        .parse()
        .map_err(|_| Failure::usage(format!("{name}: not a number: {s:?}")))
}

fn parse_usize_list(name: &str, s: &str) -> Result<Vec<usize>, Failure> {
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| {
            p.parse()
                .map_err(|_| Failure::usage(format!("{name}: not an index: {p:?}")))
        })
        .collect()
}

fn parse_f64_list(name: &str, s: &str) -> Result<Vec<f64>, Failure> {
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| parse_f64(name, p))
        .collect()
}

// --- degeneracy -----------------------------------------------------------

#[derive(Serialize)]
struct DegeneracyConfig {
    rows: usize,
    cols: usize,
    bc: BoundaryArg,
    je: f64,
    jm: f64,
}

#[derive(Serialize)]
struct DegeneracyReport {
    config: DegeneracyConfig,
    spins: usize,
    log2_rank: usize,
    dim_rank: Option<u64>,
    /// Ground-level population of the zero-field dense spectrum; absent
    /// above the cross-check size.
    dim_spectrum: Option<usize>,
    agree: Option<bool>,
}

pub fn degeneracy(args: &DegeneracyArgs) -> Result<(), Failure> {
    let ctx = Ctx::resolve(&args.common)?;
    ctx.require_json("degeneracy")?;
    let lat = ctx.lattice()?;

    let log2_rank = degeneracy_log2(&lat);
    let dim_rank = (log2_rank < 64).then(|| 1u64 << log2_rank);
    // The rank route counts unperturbed code states, so the spectral route
    // diagonalizes at zero field whatever --hx says.
    let dim_spectrum = if lat.spin_count() <= CROSSCHECK_SPINS {
        let op = build_hamiltonian(&lat, HamiltonianParams::new(ctx.je, ctx.jm, 0.0)?)?;
        let values = dense_eigenvalues(&op)?;
        let e0 = values[0];
        Some(values.iter().filter(|v| (*v - e0).abs() <= 1e-10).count())
    } else {
        None
    };
    let agree = dim_spectrum.map(|d| Some(d as u64) == dim_rank);

    emit_json(
        &ctx,
        &DegeneracyReport {
            config: DegeneracyConfig {
                rows: ctx.rows,
                cols: ctx.cols,
                bc: ctx.bc,
                je: ctx.je,
                jm: ctx.jm,
            },
            spins: lat.spin_count(),
            log2_rank,
            dim_rank,
            dim_spectrum,
            agree,
        },
    )?;
    if agree == Some(false) {
        return Err(Failure::inconsistent(format!(
            "rank method gives 2^{log2_rank} ground states, spectrum clustering gives {}",
            dim_spectrum.unwrap_or(0)
        )));
    }
    Ok(())
}

// --- entropy ---------------------------------------------------------------

#[derive(Serialize)]
struct EntropyConfig {
    rows: usize,
    cols: usize,
    bc: BoundaryArg,
    family: FamilyArg,
    a: Option<f64>,
    phases: Option<Vec<(usize, f64)>>,
    partition_rect: Option<[usize; 4]>,
    partition_spins: Option<Vec<usize>>,
}

#[derive(Serialize)]
struct EntropyOutput {
    config: EntropyConfig,
    /// Set when one side is empty: every method gives zero and the report
    /// body is skipped.
    trivial_entropy: Option<f64>,
    report: Option<EntropyReport>,
}

pub fn entropy(args: &EntropyArgs) -> Result<(), Failure> {
    let ctx = Ctx::resolve(&args.common)?;
    ctx.require_json("entropy")?;
    let lat = ctx.lattice()?;

    let rect = match &args.partition_rect {
        Some(s) => {
            let v = parse_usize_list("--partition-rect", s)?;
            let &[r0, c0, r1, c1] = v.as_slice() else {
                return Err(Failure::usage(format!(
                    "--partition-rect wants four indices r0,c0,r1,c1, got {}",
                    v.len()
                )));
            };
            Some([r0, c0, r1, c1])
        }
        None => ctx.file.partition_rect,
    };
    let spins = match &args.partition_spins {
        Some(s) => Some(parse_usize_list("--partition-spins", s)?),
        None => ctx.file.partition_spins.clone(),
    };

    let family_kind = pick(args.family, ctx.file.family, FamilyArg::Equal);
    let (family, a, phases) = match family_kind {
        FamilyArg::Equal => (CoefficientFamily::EqualAmplitude, None, None),
        FamilyArg::Geometric => {
            let a = pick(args.a, ctx.file.a, 0.5);
            let phases = match &args.phases {
                Some(s) => Some(parse_phase_list(s)?),
                None => ctx.file.phases.clone(),
            };
            (
                CoefficientFamily::geometric_with_phases(a, phases.clone().unwrap_or_default())?,
                Some(a),
                phases,
            )
        }
    };

    let config = EntropyConfig {
        rows: ctx.rows,
        cols: ctx.cols,
        bc: ctx.bc,
        family: family_kind,
        a,
        phases,
        partition_rect: rect,
        partition_spins: spins.clone(),
    };

    let part = match (rect, spins) {
        (Some(_), Some(_)) => {
            return Err(Failure::usage(
                "give the partition as a rectangle or a spin list, not both",
            ))
        }
        (None, None) => {
            return Err(Failure::usage(
                "a partition is required: --partition-rect or --partition-spins",
            ))
        }
        (Some([r0, c0, r1, c1]), None) => Bipartition::from_vertex_rect(&lat, r0, c0, r1, c1)?,
        (None, Some(list)) => {
            if list.is_empty() || list.len() >= lat.spin_count() {
                // one side empty: zero by every method
                return emit_json(
                    &ctx,
                    &EntropyOutput {
                        config,
                        trivial_entropy: Some(0.0),
                        report: None,
                    },
                );
            }
            Bipartition::from_spins(&lat, &list)?
        }
    };

    let report = entropy_report(&lat, &part, &family)?;
    let gate = match (report.s_rank, report.s_dense) {
        (Some(r), Some(d)) if (r - d).abs() > ENTROPY_TOL => Some((r, d)),
        _ => None,
    };
    emit_json(
        &ctx,
        &EntropyOutput {
            config,
            trivial_entropy: None,
            report: Some(report),
        },
    )?;
    if let Some((r, d)) = gate {
        return Err(Failure::inconsistent(format!(
            "rank entropy {r} and dense entropy {d} disagree beyond {ENTROPY_TOL:e}"
        )));
    }
    Ok(())
}

fn parse_phase_list(s: &str) -> Result<Vec<(usize, f64)>, Failure> {
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|pair| {
            let (w, phi) = pair
                .split_once(':')
                .ok_or_else(|| Failure::usage(format!("--phases wants w:phi pairs, got {pair:?}")))?;
            Ok((
                w.trim()
                    .parse()
                    .map_err(|_| Failure::usage(format!("--phases: bad weight {w:?}")))?,
                parse_f64("--phases", phi)?,
            ))
        })
        .collect()
}

// --- dispersion -------------------------------------------------------------

#[derive(Serialize)]
struct DispersionConfig {
    hx: f64,
    jm: f64,
    boundary_length: usize,
    kpoints: usize,
}

#[derive(Serialize)]
struct DispersionOutput {
    config: DispersionConfig,
    lambda: f64,
    finite_size_bound: f64,
    curve: DispersionCurve,
}

pub fn dispersion(args: &DispersionArgs) -> Result<(), Failure> {
    let ctx = Ctx::resolve(&args.common)?;
    let boundary_length = pick(
        args.boundary_length,
        ctx.file.boundary_length,
        2 * (ctx.rows + ctx.cols),
    );
    let kpoints = pick(args.kpoints, ctx.file.kpoints, 256);
    if kpoints == 0 {
        return Err(Failure::usage("--kpoints must be at least 1"));
    }

    let couplings = BoundaryCouplings::new(ctx.hx, ctx.jm, boundary_length)?;
    let curve = DispersionCurve::sample(&couplings, &display_grid(kpoints))?;
    let config = DispersionConfig {
        hx: ctx.hx,
        jm: ctx.jm,
        boundary_length,
        kpoints,
    };
    match ctx.format {
        Format::Json => emit_json(
            &ctx,
            &DispersionOutput {
                config,
                lambda: couplings.lambda(),
                finite_size_bound: couplings.finite_size_bound()?,
                curve,
            },
        ),
        Format::Csv => {
            let mut text = config_comments(&config)?;
            text.push_str(&curve.to_csv());
            emit(ctx.out.as_deref(), &text)
        }
    }
}

/// `# key = value` header lines embedding the resolved config into csv.
fn config_comments<T: Serialize>(config: &T) -> Result<String, Failure> {
    let value = serde_json::to_value(config)?;
    let map = value
        .as_object()
        .ok_or_else(|| Failure::usage("config did not serialize to an object"))?;
    let mut text = String::new();
    for (key, val) in map {
        text.push_str(&format!("# {key} = {val}\n"));
    }
    Ok(text)
}

// --- perturb ----------------------------------------------------------------

#[derive(Serialize)]
struct PerturbConfig {
    rows: usize,
    cols: usize,
    bc: BoundaryArg,
    hx: f64,
    jm: f64,
    rmax: usize,
    order: Option<usize>,
}

#[derive(Serialize)]
struct PerturbEntry {
    range: usize,
    order: usize,
    formula: f64,
    oracle: Option<f64>,
    ratio: Option<f64>,
    note: Option<String>,
}

#[derive(Serialize)]
struct PerturbOutput {
    config: PerturbConfig,
    lambda: f64,
    entries: Vec<PerturbEntry>,
}

pub fn perturb(args: &PerturbArgs) -> Result<(), Failure> {
    // Resolve rmax ahead of the lattice so the default rectangle is big
    // enough to host a straight run of rmax interior boundary positions.
    let file = FileConfig::load(args.common.config.as_deref())?;
    let rmax = pick(args.rmax, file.rmax, 2);
    if rmax == 0 {
        return Err(Failure::usage("--rmax must be at least 1"));
    }
    let side = (rmax + 1).max(2);
    let ctx = Ctx::resolve_with(&args.common, side, side)?;
    ctx.require_json("perturb")?;
    let order_cap = pick_opt(args.order, ctx.file.order).unwrap_or(MAX_RESOLVENT_ORDER);

    let lat = ctx.lattice()?;
    let couplings = BoundaryCouplings::for_lattice(&lat, ctx.hx, ctx.jm)?;
    let corners = lat.corner_positions()?;
    let len = couplings.ring_len();

    let mut entries = Vec::new();
    let mut gate = None;
    for range in 1..=rmax {
        let formula = couplings.delta_e(range)?;
        let order = range + 2;
        // a straight run: `range` consecutive non-corner ring positions
        let start = (0..len).find(|&s| {
            (s..s + range).all(|p| !corners.contains(&(p % len)))
        });
        let (oracle, note) = match start {
            None => (
                None,
                Some(format!(
                    "no straight run of {range} interior positions on this ring"
                )),
            ),
            Some(_) if order > order_cap => (
                None,
                Some(format!("walk order {order} beyond the cap {order_cap}")),
            ),
            Some(s) => {
                let from = BoundaryConfig::new(len, 0)?;
                let positions: Vec<usize> = (s..s + range).map(|p| p % len).collect();
                let to = BoundaryConfig::from_positions(len, &positions)?;
                (
                    Some(resolvent_shift(&lat, &from, &to, &couplings, order)?),
                    None,
                )
            }
        };
        let ratio = oracle.and_then(|o| (formula != 0.0).then(|| o / formula));
        if let Some(o) = oracle {
            if formula != 0.0 && ((o - formula) / formula).abs() > PERTURB_REL_TOL {
                gate = Some((range, formula, o));
            }
        }
        entries.push(PerturbEntry {
            range,
            order,
            formula,
            oracle,
            ratio,
            note,
        });
    }

    emit_json(
        &ctx,
        &PerturbOutput {
            config: PerturbConfig {
                rows: ctx.rows,
                cols: ctx.cols,
                bc: ctx.bc,
                hx: ctx.hx,
                jm: ctx.jm,
                rmax,
                order: pick_opt(args.order, ctx.file.order),
            },
            lambda: couplings.lambda(),
            entries,
        },
    )?;
    if let Some((range, formula, oracle)) = gate {
        return Err(Failure::inconsistent(format!(
            "range-{range} hop: formula {formula} vs resolvent walk {oracle} \
             disagree beyond {PERTURB_REL_TOL:e} relative"
        )));
    }
    Ok(())
}

// --- spectrum ----------------------------------------------------------------

#[derive(Serialize)]
struct SpectrumConfig {
    rows: usize,
    cols: usize,
    bc: BoundaryArg,
    je: f64,
    jm: f64,
    hx: f64,
    k: usize,
    tol: f64,
    sweep: Option<Vec<f64>>,
}

#[derive(Serialize)]
struct SweepReport {
    field: Vec<f64>,
    ground_dim: usize,
    width: Vec<f64>,
    log_log_slope: f64,
}

#[derive(Serialize)]
struct SpectrumOutput {
    config: SpectrumConfig,
    spectrum: Spectrum,
    sweep: Option<SweepReport>,
}

pub fn spectrum(args: &SpectrumArgs) -> Result<(), Failure> {
    let ctx = Ctx::resolve(&args.common)?;
    let k = pick(args.k, ctx.file.k, 8);
    let tol = pick(args.tol, ctx.file.tol, 1e-8);
    let sweep_fields = match &args.sweep {
        Some(s) => Some(parse_f64_list("--sweep", s)?),
        None => ctx.file.sweep.clone(),
    };

    let lat = ctx.lattice()?;
    let params = HamiltonianParams::new(ctx.je, ctx.jm, ctx.hx)?;
    let op = build_hamiltonian(&lat, params)?;
    let k = k.min(op.dimension());
    let pairs = lowest_eigenpairs(&op, k, tol)?;
    let spectrum = Spectrum::from_eigenpairs(
        params,
        &pairs,
        default_cluster_tol(&pairs.iter().map(|p| p.value).collect::<Vec<_>>()),
    );

    let sweep = match &sweep_fields {
        None => None,
        Some(fields) => Some(run_sweep(&lat, &ctx, fields)?),
    };

    let config = SpectrumConfig {
        rows: ctx.rows,
        cols: ctx.cols,
        bc: ctx.bc,
        je: ctx.je,
        jm: ctx.jm,
        hx: ctx.hx,
        k,
        tol,
        sweep: sweep_fields,
    };
    match ctx.format {
        Format::Json => emit_json(
            &ctx,
            &SpectrumOutput {
                config,
                spectrum,
                sweep,
            },
        ),
        Format::Csv => {
            if sweep.is_some() {
                return Err(Failure::usage("the splitting sweep is json only"));
            }
            let mut text = config_comments(&config)?;
            text.push_str("index,eigenvalue,residual\n");
            for (i, (v, r)) in spectrum
                .eigenvalues
                .iter()
                .zip(&spectrum.residuals)
                .enumerate()
            {
                text.push_str(&format!("{i},{v},{r}\n"));
            }
            emit(ctx.out.as_deref(), &text)
        }
    }
}

fn run_sweep(lat: &Lattice, ctx: &Ctx, fields: &[f64]) -> Result<SweepReport, Failure> {
    if fields.len() < 2 {
        return Err(Failure::usage("--sweep wants at least two field values"));
    }
    if fields.iter().any(|h| !(h.is_finite() && *h > 0.0)) {
        return Err(Failure::usage("--sweep field values must be positive"));
    }
    let ground_dim = 1usize << degeneracy_log2(lat);
    let mut widths = Vec::with_capacity(fields.len());
    for &h in fields {
        let op = build_hamiltonian(lat, HamiltonianParams::new(ctx.je, ctx.jm, h)?)?;
        let values = dense_eigenvalues(&op)?;
        widths.push(ground_splitting_width(&values, ground_dim)?);
    }
    Ok(SweepReport {
        field: fields.to_vec(),
        ground_dim,
        width: widths.clone(),
        log_log_slope: loglog_slope(fields, &widths)?,
    })
}
