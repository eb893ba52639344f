use std::f64::consts::PI;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use omega_probe::harness::{gen_with_n, hausdorff_aligned};
use omega_probe::io::{
    cloud_to_csv, cloud_to_svg, polygon_to_json, read_polygon, transcript_from_jsonl,
    transcript_to_jsonl,
};
use omega_probe::{
    build_cloud, count_narrow, duel, new_session, replay, run_suite, Algorithm, ArmPolicy,
    DirectedLine, ExperimentConfig, Point, Prober, TranscriptRecord,
};

#[derive(Parser)]
#[command(
    name = "omega-probe",
    version,
    about = "Reconstruct hidden convex polygons with ω-wedge probes"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Seed {
    #[arg(long, env = "OMEGA_PROBE_SEED", default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write a random polygon with a given number of narrow vertices.
    Generate {
        #[arg(long, value_parser = parse_angle)]
        omega: f64,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        narrow: usize,
        #[arg(long, default_value_t = 0.05)]
        margin: f64,
        #[arg(long, value_parser = parse_angle)]
        epsilon: Option<f64>,
        #[arg(long)]
        adjacent_narrow: bool,
        #[command(flatten)]
        seed: Seed,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Probe a polygon along one directed line.
    Probe {
        #[arg(long)]
        polygon: PathBuf,
        #[arg(long, value_parser = parse_angle)]
        omega: f64,
        /// "ox,oy,dx,dy"
        #[arg(long, allow_hyphen_values = true, value_parser = parse_line)]
        line: DirectedLine,
        #[arg(long, default_value = "adversarial-minimal")]
        policy: ArmPolicy,
        #[command(flatten)]
        seed: Seed,
    },
    /// Print the ω-cloud as CSV, one row per arc.
    Cloud {
        #[arg(long)]
        polygon: PathBuf,
        #[arg(long, value_parser = parse_angle)]
        omega: f64,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Reconstruct a polygon through its probe oracle.
    Reconstruct {
        #[arg(long)]
        polygon: PathBuf,
        #[arg(long, value_parser = parse_angle)]
        omega: f64,
        #[arg(long, default_value = "auto")]
        algorithm: Algorithm,
        #[arg(long, value_parser = parse_angle)]
        epsilon: Option<f64>,
        #[arg(long, default_value = "adversarial-minimal")]
        policy: ArmPolicy,
        #[command(flatten)]
        seed: Seed,
        #[arg(long, short)]
        out: Option<PathBuf>,
        #[arg(long)]
        transcript: Option<PathBuf>,
    },
    /// Play an algorithm against the lower-bound adversary.
    Duel {
        #[arg(long, value_parser = parse_angle)]
        omega: f64,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "input1")]
        algorithm: Algorithm,
        #[command(flatten)]
        seed: Seed,
        #[arg(long)]
        transcript: Option<PathBuf>,
        /// Where to write the adversary's final polygon.
        #[arg(long)]
        polygon_out: Option<PathBuf>,
    },
    /// Replay a transcript against a polygon with an honest oracle.
    Verify {
        #[arg(long)]
        polygon: PathBuf,
        #[arg(long, value_parser = parse_angle)]
        omega: f64,
        #[arg(long)]
        transcript: PathBuf,
    },
    /// Run a budget experiment over random instances.
    Suite {
        #[arg(long, value_parser = parse_angle)]
        omega: f64,
        #[arg(long, default_value_t = 5)]
        n_min: usize,
        #[arg(long, default_value_t = 30)]
        n_max: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        narrow: usize,
        #[arg(long, default_value_t = 0.05)]
        margin: f64,
        /// Defaults to ω/10 with two or more narrow vertices.
        #[arg(long, value_parser = parse_angle)]
        epsilon: Option<f64>,
        #[arg(long)]
        no_epsilon: bool,
        #[arg(long, default_value = "auto")]
        algorithm: Algorithm,
        #[arg(long)]
        adjacent_narrow: bool,
        #[command(flatten)]
        seed: Seed,
        /// CSV destination; stdout when absent.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

/// Radians, or multiples of pi such as `pi/3`, `2pi/5`, `0.25*pi`.
fn parse_angle(s: &str) -> Result<f64, String> {
    let t = s.trim().to_ascii_lowercase().replace(' ', "");
    let Some(i) = t.find("pi") else {
        return t.parse().map_err(|e| format!("bad angle `{s}`: {e}"));
    };
    let head = t[..i].trim_end_matches('*');
    let tail = &t[i + 2..];
    let k: f64 = if head.is_empty() {
        1.0
    } else {
        head.parse().map_err(|e| format!("bad angle `{s}`: {e}"))?
    };
    let d: f64 = match tail.strip_prefix('/') {
        Some(d) => d.parse().map_err(|e| format!("bad angle `{s}`: {e}"))?,
        None if tail.is_empty() => 1.0,
        None => return Err(format!("bad angle `{s}`")),
    };
    Ok(k * PI / d)
}

fn parse_line(s: &str) -> Result<DirectedLine, String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|x| {
            x.trim()
                .parse::<f64>()
                .map_err(|e| format!("bad line `{s}`: {e}"))
        })
        .collect::<Result<_, _>>()?;
    match v[..] {
        [ox, oy, dx, dy] if dx != 0.0 || dy != 0.0 => {
            Ok(DirectedLine::new(Point::new(ox, oy), Point::new(dx, dy)))
        }
        _ => Err(format!(
            "expected \"ox,oy,dx,dy\" with a nonzero direction, got `{s}`"
        )),
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> omega_probe::Result<()> {
    match out {
        Some(p) => Ok(fs::write(p, text)?),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn write_transcript(
    path: &Option<PathBuf>,
    records: &[TranscriptRecord],
) -> omega_probe::Result<()> {
    if let Some(p) = path {
        fs::write(p, transcript_to_jsonl(records))?;
    }
    Ok(())
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn run(cli: Cli) -> omega_probe::Result<bool> {
    match cli.cmd {
        Cmd::Generate {
            omega,
            n,
            narrow,
            margin,
            epsilon,
            adjacent_narrow,
            seed,
            out,
        } => {
            let mut cfg = ExperimentConfig::new(omega, n, n, 1, narrow);
            cfg.margin = margin;
            cfg.seed = seed.seed;
            cfg.adjacent_narrow = adjacent_narrow;
            if epsilon.is_some() {
                cfg.epsilon = epsilon;
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed.seed);
            let poly = gen_with_n(&cfg, n, &mut rng)?;
            emit(&out, &(polygon_to_json(&poly) + "\n"))?;
            eprintln!(
                "n = {}, narrow = {}",
                poly.len(),
                count_narrow(&poly, omega)
            );
            Ok(true)
        }
        Cmd::Probe {
            polygon,
            omega,
            line,
            policy,
            seed,
        } => {
            let poly = read_polygon(&polygon)?;
            let mut s = new_session(poly, omega, policy, seed.seed)?;
            s.probe(&line);
            print!("{}", transcript_to_jsonl(s.transcript()));
            Ok(true)
        }
        Cmd::Cloud {
            polygon,
            omega,
            svg,
        } => {
            let poly = read_polygon(&polygon)?;
            let cloud = build_cloud(&poly, omega)?;
            print!("{}", cloud_to_csv(&cloud));
            if let Some(p) = svg {
                fs::write(p, cloud_to_svg(&poly, &cloud, 600.0))?;
            }
            eprintln!(
                "arcs = {}, closure gap = {:.3e}",
                cloud.len(),
                cloud.closure_gap()
            );
            Ok(true)
        }
        Cmd::Reconstruct {
            polygon,
            omega,
            algorithm,
            epsilon,
            policy,
            seed,
            out,
            transcript,
        } => {
            let poly = read_polygon(&polygon)?;
            let n_b = count_narrow(&poly, omega);
            let algorithm = algorithm.resolve(omega, poly.len(), n_b);
            let mut s = new_session(poly.clone(), omega, policy, seed.seed)?;
            let result = algorithm.run(&mut s, epsilon);
            write_transcript(&transcript, s.transcript())?;
            let bound = algorithm.bound(poly.len(), n_b);
            let r = match result {
                Ok(r) => r,
                Err(e) => {
                    eprintln!(
                        "algorithm = {}, probes_used = {}, bound = {bound}",
                        algorithm.name(),
                        s.probes_used()
                    );
                    eprintln!("error: {e}");
                    eprintln!("FAIL");
                    return Ok(false);
                }
            };
            let err = hausdorff_aligned(&r.vertices, poly.vertices());
            let exact = r.is_exact() && err <= 1e-6 * poly.diameter();
            let ok = exact && r.probes_used <= bound;
            if let Ok(q) = r.polygon() {
                emit(&out, &(polygon_to_json(&q) + "\n"))?;
            }
            eprintln!(
                "algorithm = {}, probes_used = {}, bound = {bound}, exact = {exact}, hausdorff = {err:.3e}",
                algorithm.name(),
                r.probes_used
            );
            eprintln!("{}", verdict(ok));
            Ok(ok)
        }
        Cmd::Duel {
            omega,
            n,
            algorithm,
            seed,
            transcript,
            polygon_out,
        } => {
            let (report, adv) = duel(omega, n, algorithm, seed.seed)?;
            write_transcript(&transcript, adv.transcript())?;
            if let (Some(p), Some(poly)) = (polygon_out, adv.final_polygon()) {
                fs::write(p, polygon_to_json(&poly) + "\n")?;
            }
            println!(
                "algorithm = {}, n = {n}, probes_used = {}, lower_bound = {}, exact = {}",
                report.algorithm.name(),
                report.probes_used,
                report.lower_bound,
                report.exact
            );
            if let Some(e) = &report.error {
                println!("algorithm error: {e}");
            }
            match (&report.audit, &report.audit_error) {
                (Some(a), _) => println!(
                    "audit: ok, max potential gain after init = {}, unconfirmed = {}",
                    a.max_gain_after_init, a.unconfirmed
                ),
                (_, Some(e)) => println!("audit: {e}"),
                _ => {}
            }
            println!("{}", verdict(report.passed()));
            Ok(report.passed())
        }
        Cmd::Verify {
            polygon,
            omega,
            transcript,
        } => {
            let poly = read_polygon(&polygon)?;
            let records = transcript_from_jsonl(&fs::read_to_string(transcript)?)?;
            match replay(&poly, omega, &records) {
                Ok(()) => {
                    println!("{} records consistent", records.len());
                    println!("PASS");
                    Ok(true)
                }
                Err(e) => {
                    println!("{e}");
                    println!("FAIL");
                    Ok(false)
                }
            }
        }
        Cmd::Suite {
            omega,
            n_min,
            n_max,
            trials,
            narrow,
            margin,
            epsilon,
            no_epsilon,
            algorithm,
            adjacent_narrow,
            seed,
            csv,
        } => {
            let mut cfg = ExperimentConfig::new(omega, n_min, n_max, trials, narrow);
            cfg.margin = margin;
            cfg.seed = seed.seed;
            cfg.algorithm = algorithm;
            cfg.adjacent_narrow = adjacent_narrow;
            if epsilon.is_some() {
                cfg.epsilon = epsilon;
            }
            if no_epsilon {
                cfg.epsilon = None;
            }
            let report = run_suite(&cfg)?;
            emit(&csv, &report.to_csv())?;
            eprint!("{}", report.summary());
            Ok(report.passed())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
