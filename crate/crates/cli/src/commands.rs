use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use ermakov_susy::darboux::partner_state;
use ermakov_susy::families::{oscillator_eigenstate, Construction, FamilySpec};
use ermakov_susy::function::{Domain, WaveFunction};
use ermakov_susy::spectral::{discretize, spectrum, Grid, SpectralReport};
use ermakov_susy::suite::{verify, Verification};
use ermakov_susy::superpotential::Branch;
use serde::Serialize;

use crate::config::{CliError, CliResult, Format, RunConfig, SpectrumTolerances};
use crate::output::{to_json, write_file, Cell, Table, SCHEMA_VERSION};

/// Grid sizes used when `--grid` is absent (the family's default domain is used).
const DEFAULT_DATA_POINTS: usize = 2001;
const DEFAULT_SPECTRUM_POINTS: usize = 1500;
const DEFAULT_LEVELS: usize = 5;

fn grid_or_default(cfg: &RunConfig, n: usize) -> CliResult<Grid> {
    match cfg.grid {
        Some(g) => Ok(g),
        None => {
            let d = cfg.family.default_domain();
            Ok(Grid::new(d.min, d.max, n)?)
        }
    }
}

/// Refuses the excluded branch before any work, with the classification in
/// the message.
fn check_branch(spec: &FamilySpec) -> CliResult<Branch> {
    let branch = spec.branch();
    if branch == Branch::Excluded {
        return Err(CliError::Config(format!(
            "λ₀ = {} < 0 lies on the excluded branch (imaginary λ); nothing to compute",
            spec.lambda0()
        )));
    }
    spec.validate()?;
    Ok(branch)
}

fn construct(spec: &FamilySpec, grid: &Grid) -> CliResult<Construction> {
    Ok(spec.construct(Domain::new(grid.x_min(), grid.x_max())?)?)
}

fn branch_label(branch: Branch) -> &'static str {
    match branch {
        Branch::Complex => "complex",
        Branch::Conventional => "conventional (λ₀ = 0, real superpotential)",
        Branch::Excluded => "excluded",
    }
}

#[derive(Serialize)]
struct GridInfo {
    x_min: f64,
    x_max: f64,
    n: usize,
}

impl From<&Grid> for GridInfo {
    fn from(g: &Grid) -> Self {
        Self {
            x_min: g.x_min(),
            x_max: g.x_max(),
            n: g.len(),
        }
    }
}

#[derive(Serialize)]
struct DataFile<'a> {
    schema_version: u32,
    object: &'a str,
    family: &'a FamilySpec,
    branch: Branch,
    grid: GridInfo,
    #[serde(flatten)]
    table: &'a Table,
}

fn save(path: &Path, contents: String) -> CliResult<()> {
    write_file(path, &contents).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn json(value: &impl Serialize) -> CliResult<String> {
    to_json(value).map_err(|e| CliError::Numerical(format!("serialization failed: {e}")))
}

fn wave_table(psi: &dyn WaveFunction, grid: &Grid) -> Table {
    let mut t = Table::new(&["x", "re_psi", "im_psi", "rho"]);
    for x in grid.points() {
        let v = psi.value(x);
        t.push(vec![Cell::Num(x), Cell::Num(v.re), Cell::Num(v.im), Cell::Num(v.norm_sqr())]);
    }
    t
}

/// Writes potential, missing-state and (oscillator) partner-state tables.
/// Returns the stdout summary.
pub fn generate(cfg: &RunConfig) -> CliResult<String> {
    let spec = &cfg.family;
    let branch = check_branch(spec)?;
    let dir = cfg
        .out
        .clone()
        .ok_or_else(|| CliError::Config("generate needs --out <directory>".into()))?;
    let format = cfg.format.unwrap_or(Format::Csv);
    let grid = grid_or_default(cfg, DEFAULT_DATA_POINTS)?;
    if cfg.states.is_some() && !matches!(spec, FamilySpec::Oscillator(_)) {
        return Err(CliError::Config(
            "--states is only available for the oscillator family".into(),
        ));
    }
    let c = construct(spec, &grid)?;

    let mut objects: Vec<(String, Table)> = Vec::new();
    let mut potential = Table::new(&["x", "re_v", "im_v"]);
    for x in grid.points() {
        let v = c.potential.value(x);
        potential.push(vec![Cell::Num(x), Cell::Num(v.re), Cell::Num(v.im)]);
    }
    objects.push(("potential".into(), potential));
    let missing = c.missing_state(&grid)?;
    objects.push(("missing_state".into(), wave_table(&missing, &grid)));
    if let Some(levels) = &cfg.states {
        for n in levels.clone() {
            let s = oscillator_eigenstate(n)?;
            let psi = partner_state(Arc::new(s), s.energy(), &c.beta, false)?;
            objects.push((format!("state_{n}"), wave_table(&psi, &grid)));
        }
    }

    let mut summary = String::new();
    writeln!(summary, "family: {}  branch: {}", spec.tag(), branch_label(branch)).unwrap();
    writeln!(summary, "epsilon = {}  lambda = {}", c.alpha.epsilon(), c.beta.lambda()).unwrap();
    let v0 = c.potential.value(0.5 * (grid.x_min() + grid.x_max()));
    writeln!(summary, "V(centre) = {} {:+}i", v0.re, v0.im).unwrap();
    if missing.is_normalizable() {
        writeln!(summary, "missing state normalizable, c_eps = {}", missing.c_eps().re).unwrap();
    } else {
        writeln!(summary, "missing state not normalizable on this grid (c_eps = 1)").unwrap();
    }
    for (name, table) in &objects {
        let path: PathBuf = dir.join(format!("{name}.{}", format.extension()));
        let contents = match format {
            Format::Csv => table.to_csv(),
            Format::Json => json(&DataFile {
                schema_version: SCHEMA_VERSION,
                object: name,
                family: spec,
                branch,
                grid: GridInfo::from(&grid),
                table,
            })?,
        };
        save(&path, contents)?;
        writeln!(summary, "wrote {}", path.display()).unwrap();
    }
    Ok(summary)
}

#[derive(Serialize)]
struct VerifyReport<'a> {
    schema_version: u32,
    command: &'static str,
    family: &'a FamilySpec,
    grid: GridInfo,
    tolerances: &'a ermakov_susy::suite::Tolerances,
    passed: bool,
    #[serde(flatten)]
    verification: &'a Verification,
}

/// Runs the invariant suite; fails with a numerical error if any check fails.
pub fn run_verify(cfg: &RunConfig) -> CliResult<String> {
    let spec = &cfg.family;
    check_branch(spec)?;
    let grid = grid_or_default(cfg, DEFAULT_DATA_POINTS)?;
    let v = verify(spec, &grid, &cfg.tolerances)?;
    let mut summary = String::new();
    writeln!(summary, "family: {}  branch: {}", spec.tag(), branch_label(v.branch)).unwrap();
    for c in &v.checks {
        let status = match (c.threshold, c.passed) {
            (None, _) => "INFO",
            (Some(_), true) => "PASS",
            (Some(_), false) => "FAIL",
        };
        match c.threshold {
            Some(t) => writeln!(summary, "{status} {:<22} {:.3e}  (< {t:.1e})", c.name, c.value),
            None => writeln!(summary, "{status} {:<22} {:.6e}", c.name, c.value),
        }
        .unwrap();
    }
    if let Some(path) = &cfg.out {
        let contents = match cfg.format.unwrap_or(Format::Json) {
            Format::Json => json(&VerifyReport {
                schema_version: SCHEMA_VERSION,
                command: "verify",
                family: spec,
                grid: GridInfo::from(&grid),
                tolerances: &cfg.tolerances,
                passed: v.passed(),
                verification: &v,
            })?,
            Format::Csv => {
                let mut t = Table::new(&["name", "value", "threshold", "passed"]);
                for c in &v.checks {
                    t.push(vec![
                        Cell::Text(c.name.clone()),
                        Cell::Num(c.value),
                        c.threshold.map_or(Cell::Empty, Cell::Num),
                        Cell::Text(c.passed.to_string()),
                    ]);
                }
                t.to_csv()
            }
        };
        save(path, contents)?;
        writeln!(summary, "wrote {}", path.display()).unwrap();
    }
    if v.passed() {
        Ok(summary)
    } else {
        print!("{summary}");
        let failed: Vec<&str> = v.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
        Err(CliError::Numerical(failed.join(", ")))
    }
}

#[derive(Serialize)]
struct EigenRow {
    index: usize,
    re: f64,
    im: f64,
    abs_im: f64,
}

#[derive(Serialize)]
struct ReferenceRow {
    expected: f64,
    found_re: f64,
    found_im: f64,
    delta: f64,
}

#[derive(Serialize)]
struct SpectrumReport<'a> {
    schema_version: u32,
    command: &'static str,
    family: &'a FamilySpec,
    branch: Branch,
    grid: GridInfo,
    solver: ermakov_susy::spectral::Solver,
    tolerances: &'a SpectrumTolerances,
    eigenvalues: Vec<EigenRow>,
    references: Vec<ReferenceRow>,
    max_imag_low_m: f64,
    passed: bool,
}

/// Reference energies: ε when the missing state is normalizable, then the
/// source bound states.
fn references(c: &Construction, spec: &FamilySpec, grid: &Grid, levels: usize) -> CliResult<Vec<f64>> {
    let mut refs = Vec::new();
    if c.missing_state(grid)?.is_normalizable() {
        refs.push(c.alpha.epsilon());
    }
    let room = levels.saturating_sub(refs.len());
    refs.extend(spec.source_energies(room));
    Ok(refs)
}

pub fn run_spectrum(cfg: &RunConfig) -> CliResult<String> {
    let spec = &cfg.family;
    let branch = check_branch(spec)?;
    let grid = grid_or_default(cfg, DEFAULT_SPECTRUM_POINTS)?;
    let levels = cfg.levels.unwrap_or(DEFAULT_LEVELS);
    let c = construct(spec, &grid)?;
    let h = discretize(&c.potential, &grid)?;
    let mut report: SpectralReport = spectrum(&h, levels.min(h.dim()))?;
    let refs = references(&c, spec, &grid, report.lowest)?;
    let tol = cfg.spectrum_tolerances;
    report.match_reference(&refs, tol.spectrum);
    // families without bound states are reported, not judged
    let passed = refs.is_empty() || (report.all_matched() && report.max_imag_low_m < tol.imag);

    let mut summary = String::new();
    writeln!(summary, "family: {}  branch: {}", spec.tag(), branch_label(branch)).unwrap();
    writeln!(summary, "grid [{}, {}], n = {}, solver {:?}", grid.x_min(), grid.x_max(), grid.len(), report.solver).unwrap();
    for (i, e) in report.low().iter().enumerate() {
        writeln!(summary, "E[{i}] = {:.10} {:+.3e}i", e.re, e.im).unwrap();
    }
    for m in &report.matched_reference {
        writeln!(summary, "reference {:>8} -> {:.10} (|Δ| = {:.3e})", m.expected, m.found.re, m.delta).unwrap();
    }
    if refs.is_empty() {
        writeln!(summary, "no bound-state references for this family; report only").unwrap();
    }
    writeln!(summary, "max |Im| (lowest {}) = {:.3e}", report.lowest, report.max_imag_low_m).unwrap();

    if let Some(path) = &cfg.out {
        let contents = match cfg.format.unwrap_or(Format::Json) {
            Format::Json => json(&SpectrumReport {
                schema_version: SCHEMA_VERSION,
                command: "spectrum",
                family: spec,
                branch,
                grid: GridInfo::from(&grid),
                solver: report.solver,
                tolerances: &tol,
                eigenvalues: report
                    .low()
                    .iter()
                    .enumerate()
                    .map(|(index, e)| EigenRow {
                        index,
                        re: e.re,
                        im: e.im,
                        abs_im: e.im.abs(),
                    })
                    .collect(),
                references: report
                    .matched_reference
                    .iter()
                    .map(|m| ReferenceRow {
                        expected: m.expected,
                        found_re: m.found.re,
                        found_im: m.found.im,
                        delta: m.delta,
                    })
                    .collect(),
                max_imag_low_m: report.max_imag_low_m,
                passed,
            })?,
            Format::Csv => {
                let mut t = Table::new(&["index", "re", "im", "abs_im", "reference", "delta"]);
                for (i, e) in report.low().iter().enumerate() {
                    let m = report.matched_reference.iter().find(|m| m.found == *e);
                    t.push(vec![
                        Cell::Int(i as i64),
                        Cell::Num(e.re),
                        Cell::Num(e.im),
                        Cell::Num(e.im.abs()),
                        m.map_or(Cell::Empty, |m| Cell::Num(m.expected)),
                        m.map_or(Cell::Empty, |m| Cell::Num(m.delta)),
                    ]);
                }
                t.to_csv()
            }
        };
        save(path, contents)?;
        writeln!(summary, "wrote {}", path.display()).unwrap();
    }
    if passed {
        Ok(summary)
    } else {
        print!("{summary}");
        Err(CliError::Numerical(format!(
            "spectrum does not match references within {} (|Im| limit {})",
            tol.spectrum, tol.imag
        )))
    }
}
