use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use fdlp::bench::{run_benchmark, BenchConfig};
use fdlp::cepstrum::{modulation_spectrum, modulation_spectrum_direct};
use fdlp::dsp::{synth_am, AmComponent, AmSignalSpec};
use fdlp::error::{Error, Result};
use fdlp::features::{write_features, FeatureFormat};
use fdlp::lp::LpModel;
use fdlp::models::{complex_fdlp, conventional_fdlp, signal_envelope, squared_hilbert_envelope};
use fdlp::spectrogram::{fdlp_spectrogram, SpectrogramConfig};
use fdlp::verify::run_all;
use fdlp::wav::{read_wav, write_wav};
use fdlp::{ModelDomain, Signal};

#[derive(Parser)]
#[command(name = "fdlp", version, about = "Frequency domain linear prediction tools")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Conventional,
    Complex,
}

#[derive(Clone, Copy, ValueEnum)]
enum EnvelopeMethod {
    Conventional,
    Complex,
    Hilbert,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Bin,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Write an amplitude-modulated sine to a WAV file.
    Synth {
        #[arg(long, value_name = "HZ")]
        carrier: f64,
        /// Envelope components as FREQ:DEPTH:PHASE_DEG, comma separated.
        #[arg(long = "mod", value_name = "F:DEPTH:PHASE", value_delimiter = ',', value_parser = parse_component, required = true)]
        components: Vec<AmComponent>,
        #[arg(long, value_name = "S")]
        dur: f64,
        #[arg(long, value_name = "HZ", default_value_t = AmSignalSpec::DEFAULT_SAMPLE_RATE)]
        rate: f64,
        /// Output scale; keeps peaks below PCM full scale.
        #[arg(long, default_value_t = 0.5)]
        gain: f64,
        #[arg(long, value_name = "WAV")]
        out: PathBuf,
    },
    /// Temporal power envelope as time,value rows.
    Envelope {
        #[arg(long = "in", value_name = "WAV")]
        input: PathBuf,
        #[arg(long, value_enum)]
        method: EnvelopeMethod,
        #[arg(long, value_name = "P", default_value_t = 20)]
        order: usize,
        #[arg(long, value_name = "CSV")]
        out: PathBuf,
    },
    /// Modulation spectrum as freq_hz,magnitude rows.
    Modspec {
        #[arg(long = "in", value_name = "WAV")]
        input: PathBuf,
        #[arg(long, value_enum)]
        method: Method,
        #[arg(long, value_name = "P", default_value_t = 20)]
        order: usize,
        /// Log-response transform instead of the cepstral recursion.
        #[arg(long)]
        direct: bool,
        #[arg(long, value_name = "HZ", default_value_t = 30.0)]
        max_hz: f64,
        #[arg(long, value_name = "CSV")]
        out: PathBuf,
    },
    /// Sub-band FDLP-spectrogram features.
    Spectrogram {
        #[arg(long = "in", value_name = "WAV")]
        input: PathBuf,
        #[arg(long, default_value_t = 50)]
        bands: usize,
        #[arg(long, value_name = "P", default_value_t = 80)]
        order: usize,
        #[arg(long, value_name = "HZ", default_value_t = 100.0)]
        frame_rate: f64,
        #[arg(long, value_enum, default_value_t = Format::Bin)]
        format: Format,
        #[arg(long, value_name = "PATH")]
        out: PathBuf,
    },
    /// Time conventional against complex FDLP fits.
    Bench {
        #[arg(long, default_value_t = 5000)]
        n: usize,
        #[arg(long, value_name = "S", default_value_t = 1.5)]
        dur: f64,
        #[arg(long, value_name = "P", default_value_t = 300)]
        conv_order: usize,
        #[arg(long, value_name = "Q", default_value_t = 150)]
        cplx_order: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Run the numerical self-checks.
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn parse_component(s: &str) -> std::result::Result<AmComponent, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [f, d, p] = parts[..] else {
        return Err(format!("expected FREQ:DEPTH:PHASE, got {s:?}"));
    };
    let num = |v: &str| v.trim().parse::<f64>().map_err(|e| format!("{v:?}: {e}"));
    Ok(AmComponent {
        freq_hz: num(f)?,
        depth: num(d)?,
        phase_deg: num(p)?,
    })
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn fit(x: &Signal, method: Method, order: usize) -> Result<LpModel> {
    match method {
        Method::Conventional => conventional_fdlp(x, order),
        Method::Complex => complex_fdlp(x, order),
    }
}

fn envelope_csv(x: &Signal, method: EnvelopeMethod, order: usize) -> Result<String> {
    let (times, values): (Vec<f64>, Vec<f64>) = match method {
        EnvelopeMethod::Hilbert => {
            let v = squared_hilbert_envelope(x)?;
            ((0..v.len()).map(|i| i as f64 / x.sample_rate()).collect(), v)
        }
        EnvelopeMethod::Conventional | EnvelopeMethod::Complex => {
            let m = fit(
                x,
                match method {
                    EnvelopeMethod::Conventional => Method::Conventional,
                    _ => Method::Complex,
                },
                order,
            )?;
            let env = signal_envelope(&m)?;
            (env.time_axis, env.values)
        }
    };
    let mut out = String::from("time,value\n");
    for (t, v) in times.iter().zip(&values) {
        writeln!(out, "{t:.9e},{v:.9e}").unwrap();
    }
    Ok(out)
}

fn modspec_csv(x: &Signal, method: Method, order: usize, direct: bool, max_hz: f64) -> Result<String> {
    if !(max_hz > 0.0) {
        return Err(Error::Argument(format!("--max-hz must be positive, got {max_hz}")));
    }
    let m = fit(x, method, order)?;
    let spec = if direct {
        let n_points = match m.domain {
            ModelDomain::ConventionalFdlp => 2 * x.len(),
            _ => x.len(),
        };
        modulation_spectrum_direct(&m, n_points)?
    } else {
        modulation_spectrum(&m, (max_hz * m.duration_s).ceil() as usize + 1)?
    };
    let mut out = String::from("freq_hz,magnitude\n");
    for (f, v) in spec.freqs_hz.iter().zip(&spec.magnitudes) {
        if *f > max_hz + 1e-9 {
            break;
        }
        writeln!(out, "{f:.9e},{v:.9e}").unwrap();
    }
    Ok(out)
}

fn run(command: Command) -> Result<bool> {
    match command {
        Command::Synth {
            carrier,
            components,
            dur,
            rate,
            gain,
            out,
        } => {
            let spec = AmSignalSpec {
                carrier_hz: carrier,
                components,
                duration_s: dur,
                sample_rate: rate,
            };
            write_wav(&synth_am(&spec)?.scaled(gain), &out)?;
        }
        Command::Envelope {
            input,
            method,
            order,
            out,
        } => write_text(&out, &envelope_csv(&read_wav(&input)?, method, order)?)?,
        Command::Modspec {
            input,
            method,
            order,
            direct,
            max_hz,
            out,
        } => write_text(&out, &modspec_csv(&read_wav(&input)?, method, order, direct, max_hz)?)?,
        Command::Spectrogram {
            input,
            bands,
            order,
            frame_rate,
            format,
            out,
        } => {
            let x = read_wav(&input)?;
            let cfg = SpectrogramConfig {
                n_bands: bands,
                lp_order: order,
                frame_rate_hz: frame_rate,
                ..SpectrogramConfig::with_sample_rate(x.sample_rate())
            };
            let mut features = fdlp_spectrogram(&x, &cfg)?;
            features.source = Some(input.display().to_string());
            let format = match format {
                Format::Bin => FeatureFormat::Binary,
                Format::Csv => FeatureFormat::Csv,
            };
            write_features(&features, &out, format)?;
        }
        Command::Bench {
            n,
            dur,
            conv_order,
            cplx_order,
            seed,
            json,
        } => {
            let report = run_benchmark(&BenchConfig {
                n_signals: n,
                duration_s: dur,
                conv_order,
                cplx_order,
                seed,
                ..BenchConfig::default()
            })?;
            if json {
                println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
            } else {
                println!("signals      {} x {} s", report.n_signals, report.duration_s);
                for (name, t) in [("conventional", &report.conventional), ("complex", &report.complex)] {
                    println!(
                        "{name:<12} order {:>4}  {:.3} ms +- {:.3}",
                        t.order, t.mean_ms, t.std_ms
                    );
                }
                println!("reduction    {:.1} %", report.reduction_pct);
                println!("host         {}", report.host);
            }
        }
        Command::Verify { seed } => {
            let checks = run_all(seed)?;
            for c in &checks {
                let tag = if c.passed { "ok  " } else { "FAIL" };
                println!("{tag} {}: {}", c.name, c.detail);
            }
            return Ok(checks.iter().all(|c| c.passed));
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
