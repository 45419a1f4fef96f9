//! `dirac-visc` command-line tool.
//!
//! Exit codes: 0 success, 1 compute error (including any failed sweep point),
//! 2 input/output or usage error.

mod svg;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{Map, Value};

use dirac_visc::model::{LandauSpectrum, ModelParams, SelfEnergyModel};
use dirac_visc::sweep::{self, Format, SweepResult, SweepSpec};
use dirac_visc::{scba, validate, vertex};

#[derive(Parser)]
#[command(name = "dirac-visc", version, about = "Shear and Hall viscosity of disordered graphene")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the self-consistent self-energy at one or more energies.
    SolveSigma(SigmaArgs),
    /// Run a sweep described by a JSON config, with flag overrides.
    Sweep {
        /// Flat JSON sweep description.
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        over: Overrides,
    },
    /// Run a figure preset (fig1, fig2a, fig2b, fig3, fig4, fig5, fig6).
    Figure {
        name: String,
        /// Optional JSON overlay applied on top of the preset.
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        over: Overrides,
    },
    /// Report the first-order vertex correction.
    VertexCheck {
        #[arg(long, allow_hyphen_values = true)]
        energy: f64,
        #[arg(long, default_value_t = 20.0)]
        a: f64,
        /// Magnetic field in T; 0 selects the momentum basis.
        #[arg(long, default_value_t = 0.0)]
        b: f64,
        #[arg(long, default_value_t = 64)]
        nodes: usize,
    },
    /// Run the oracle-equivalence suite and print a pass/fail table.
    Validate,
}

#[derive(Args)]
struct SigmaArgs {
    /// Energies in eV, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    energy: Vec<f64>,
    #[arg(long, default_value_t = 20.0)]
    a: f64,
    /// Magnetic field in T; 0 for none.
    #[arg(long, default_value_t = 0.0)]
    b: f64,
    /// full or imaginary_only.
    #[arg(long, default_value = "full")]
    sigma_model: String,
}

/// Flags that override keys of the JSON sweep description.
#[derive(Args, Default)]
struct Overrides {
    #[arg(long)]
    quantity: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    e_start: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    e_stop: Option<f64>,
    #[arg(long)]
    e_count: Option<usize>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    e_values: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    b_values: Option<Vec<f64>>,
    #[arg(long)]
    omega_start: Option<f64>,
    #[arg(long)]
    omega_stop: Option<f64>,
    #[arg(long)]
    omega_count: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    omega_values: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    a_values: Option<Vec<f64>>,
    #[arg(long)]
    sigma_model: Option<String>,
    /// Constant level width in eV for dynamic Landau sums.
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    level_cap: Option<usize>,
    /// Output file; stdout when absent.
    #[arg(long, short)]
    output: Option<String>,
    /// csv or json.
    #[arg(long)]
    format: Option<String>,
    /// Worker threads, 0 for one per core.
    #[arg(long, env = "DIRAC_VISC_THREADS")]
    threads: Option<usize>,
    /// Also write a line-plot SVG here.
    #[arg(long)]
    svg: Option<PathBuf>,
}

impl Overrides {
    fn to_map(&self) -> Map<String, Value> {
        let mut obj = Map::new();
        let mut set = |k: &str, v: Option<Value>| {
            if let Some(v) = v {
                obj.insert(k.to_string(), v);
            }
        };
        let f = |x: Option<f64>| x.map(Value::from);
        let u = |x: Option<usize>| x.map(Value::from);
        let l = |x: &Option<Vec<f64>>| x.clone().map(Value::from);
        let s = |x: &Option<String>| x.clone().map(Value::from);
        set("quantity", s(&self.quantity));
        set("e_start", f(self.e_start));
        set("e_stop", f(self.e_stop));
        set("e_count", u(self.e_count));
        set("e_values", l(&self.e_values));
        set("b_values", l(&self.b_values));
        set("omega_start", f(self.omega_start));
        set("omega_stop", f(self.omega_stop));
        set("omega_count", u(self.omega_count));
        set("omega_values", l(&self.omega_values));
        set("a_values", l(&self.a_values));
        set("sigma_model", s(&self.sigma_model));
        set("broadening", self.gamma.map(|g| serde_json::json!({ "kind": "constant", "gamma": g })));
        set("level_cap", u(self.level_cap));
        set("output_path", s(&self.output));
        set("format", s(&self.format));
        set("threads", u(self.threads));
        obj
    }
}

/// Merges `top` over `base`. An axis mentioned in `top` replaces that axis
/// of `base` entirely, so a value list can override a range and vice versa.
fn overlay(base: &mut Map<String, Value>, top: Map<String, Value>) {
    for axis in ["e", "b", "omega"] {
        let keys = ["start", "stop", "count", "values"].map(|k| format!("{axis}_{k}"));
        if keys.iter().any(|k| top.contains_key(k)) {
            for k in &keys {
                base.remove(k);
            }
        }
    }
    base.extend(top);
}

enum Failure {
    Compute(String),
    Input(String),
}

impl From<dirac_visc::Error> for Failure {
    fn from(e: dirac_visc::Error) -> Self {
        match e {
            // Domain errors here come from user-supplied values.
            dirac_visc::Error::Spec { .. } | dirac_visc::Error::UnknownPreset(_) | dirac_visc::Error::Domain(_) => {
                Failure::Input(e.to_string())
            }
            _ => Failure::Compute(e.to_string()),
        }
    }
}

fn read_object(path: &Path) -> Result<Map<String, Value>, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
    match serde_json::from_str(&text) {
        Ok(Value::Object(m)) => Ok(m),
        Ok(_) => Err(Failure::Input(format!("{}: expected a JSON object", path.display()))),
        Err(e) => Err(Failure::Input(format!("{}: {e}", path.display()))),
    }
}

fn resolve(base: Map<String, Value>, config: Option<&Path>, over: &Overrides) -> Result<SweepSpec, Failure> {
    let mut obj = base;
    if let Some(p) = config {
        overlay(&mut obj, read_object(p)?);
    }
    overlay(&mut obj, over.to_map());
    let spec: SweepSpec = serde_json::from_value(Value::Object(obj)).map_err(|e| Failure::Input(format!("invalid config: {e}")))?;
    spec.validate()?;
    Ok(spec)
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display())))
}

fn emit(result: &SweepResult, svg_path: Option<&Path>) -> Result<(), Failure> {
    let spec = &result.header.config;
    let body = match spec.format {
        Format::Csv => result.to_csv(),
        Format::Json => result.to_json(),
    };
    match &spec.output_path {
        Some(p) => {
            let p = Path::new(p);
            write_file(p, &body)?;
            if spec.format == Format::Csv {
                let mut meta = p.as_os_str().to_owned();
                meta.push(".meta.json");
                write_file(Path::new(&meta), &result.meta_json())?;
            }
        }
        None => print!("{body}"),
    }
    if let Some(s) = svg_path {
        write_file(s, &svg::render(result))?;
    }
    // Failed points stay in the output; the exit code still reports them.
    let failed = result.failures();
    if failed > 0 {
        return Err(Failure::Compute(format!("{failed} of {} points failed; see the error column", result.rows.len())));
    }
    Ok(())
}

fn solve_sigma(args: &SigmaArgs) -> Result<(), Failure> {
    let model: SelfEnergyModel = serde_json::from_value(Value::from(args.sigma_model.clone()))
        .map_err(|_| Failure::Input(format!("unknown sigma model `{}` (full, imaginary_only)", args.sigma_model)))?;
    let params = ModelParams::new(args.a).with_self_energy(model);
    params.validate()?;
    let emax = args.energy.iter().fold(0.0f64, |m, e| m.max(e.abs()));
    let sp = if args.b > 0.0 { Some(LandauSpectrum::new(args.b, &params, emax)?) } else { None };
    println!("energy (eV),sigma_re (eV),sigma_im (eV),residual (1),iterations (1),converged");
    for &e in &args.energy {
        let s = match &sp {
            Some(sp) => scba::solve_self_energy_landau(e, &params, sp)?,
            None => scba::solve_self_energy_b0(e, &params)?,
        };
        let n = sweep::format_number;
        println!("{},{},{},{},{},{}", n(e), n(s.sigma.re), n(s.sigma.im), n(s.residual), s.iterations, s.converged);
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::SolveSigma(args) => solve_sigma(&args),
        Command::Sweep { config, over } => {
            if config.is_none() && over.quantity.is_none() {
                return Err(Failure::Input("sweep needs --config or --quantity".into()));
            }
            let spec = resolve(Map::new(), config.as_deref(), &over)?;
            emit(&sweep::run_sweep(&spec)?, over.svg.as_deref())
        }
        Command::Figure { name, config, over } => {
            let preset = sweep::figure_preset(&name)?;
            let Value::Object(base) = serde_json::to_value(&preset).expect("spec serializes") else { unreachable!() };
            let spec = resolve(base, config.as_deref(), &over)?;
            emit(&sweep::run_sweep(&spec)?, over.svg.as_deref())
        }
        Command::VertexCheck { energy, a, b, nodes } => {
            let params = ModelParams::new(a);
            let r = if b > 0.0 {
                let sp = LandauSpectrum::new(b, &params, energy)?;
                vertex::vertex_correction_landau(energy, &params, &sp)?
            } else {
                vertex::vertex_correction_b0(energy, &params, nodes)?
            };
            println!("{}", serde_json::to_string_pretty(&r).expect("report serializes"));
            Ok(())
        }
        Command::Validate => {
            let checks = validate::oracle_suite();
            print!("{}", validate::format_table(&checks));
            let failed = checks.iter().filter(|c| !c.pass).count();
            if failed > 0 {
                return Err(Failure::Compute(format!("{failed} oracle checks failed")));
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Compute(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
