use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use xorshift_gf2::bench::run_bench;
use xorshift_gf2::construct::default_max_attempts;
use xorshift_gf2::{
    census, check_triplet, construct_from_primitive, factor_mersenne, orbit_period, sample_k_tap,
    seed, tap_count, weakness_trace, write_stream, Error, FactorTable, Factorization, Gf2Poly,
    SeedQuality, TripletSpec, XorshiftSpec,
};

/// Writes to stdout, treating a closed pipe (`| head`) as normal termination.
fn say(text: &str) {
    let _ = io::stdout().lock().write_all(text.as_bytes());
}

macro_rules! out {
    ($($t:tt)*) => { say(&format!($($t)*)) };
}

macro_rules! outln {
    ($($t:tt)*) => { say(&format!("{}\n", format_args!($($t)*))) };
}

#[derive(Parser)]
#[command(
    name = "xorshift-gf2",
    version,
    about = "Full-period xorshift generators from primitive polynomials"
)]
struct Cli {
    /// Factor table for 2^d - 1, consulted before the built-in table.
    #[arg(long, global = true, env = "XORSHIFT_FACTOR_TABLE")]
    factor_table: Option<PathBuf>,

    /// Accept table factors too large to certify prime.
    #[arg(long, global = true)]
    trust_table: bool,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Tsv,
}

#[derive(Subcommand)]
enum Command {
    /// Split a primitive polynomial into tap words.
    Construct {
        /// `hex:...` or `degs:...`
        #[arg(long)]
        poly: String,
        /// Bits per word; must divide the degree.
        #[arg(long)]
        word_size: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search for a primitive generator with exactly k xorshift operations.
    Sample {
        /// Bits per word.
        #[arg(long)]
        m: usize,
        /// Number of stages.
        #[arg(long)]
        n: usize,
        /// xorshift operations per step, 2 <= k <= n + 1.
        #[arg(long)]
        k: usize,
        /// Seed for the reproducible search.
        #[arg(long, default_value_t = 0)]
        search_seed: u64,
        /// Defaults to 64 * m * n.
        #[arg(long)]
        max_attempts: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the generator's output bitstream.
    Stream {
        #[arg(long)]
        spec: PathBuf,
        /// Comma-separated seed words, oldest stage first.
        #[arg(long)]
        seed: String,
        /// Number of bits; scientific notation such as 1e8 is accepted.
        #[arg(long)]
        bits: String,
        /// Defaults to standard output.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Skip the warning for seeds whose low bits are all zero.
        #[arg(long)]
        allow_degraded: bool,
    },
    /// Time one degree-mn polynomial at several word sizes.
    Bench {
        /// Polynomial degree shared by every row.
        #[arg(long)]
        mn: usize,
        /// Comma-separated word sizes, each dividing mn.
        #[arg(long, value_delimiter = ',')]
        word_sizes: Vec<usize>,
        /// Bits generated per run.
        #[arg(long)]
        bits: String,
        #[arg(long, default_value_t = 3)]
        repetitions: usize,
    },
    /// Walk one orbit exhaustively (m * n <= 24).
    Period {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        seed: String,
    },
    /// Trace the start-up of a seed (0, ..., 0, d) with 2^l | d.
    Weakness {
        #[arg(long)]
        spec: PathBuf,
        /// Last seed word; the other stages start at zero.
        #[arg(long)]
        d: String,
        /// Output words are traced for n * l steps.
        #[arg(long)]
        l: u32,
    },
    /// Count full-period generators of order n over GF(2^m).
    Census {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
    },
    /// Check shift triplets; with no shifts given, scan a, b, c in [1, max-shift).
    CheckTriplet {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, requires_all = ["b", "c"])]
        a: Option<usize>,
        #[arg(long, requires_all = ["a", "c"])]
        b: Option<usize>,
        #[arg(long, requires_all = ["a", "b"])]
        c: Option<usize>,
        /// Defaults to m.
        #[arg(long)]
        max_shift: Option<usize>,
    },
}

fn io_error(path: &Path) -> impl FnOnce(io::Error) -> Error + '_ {
    move |source| Error::Io {
        context: path.display().to_string(),
        source,
    }
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::NotPrimitive(_) => 2,
        Error::FactorizationUnavailable { .. } => 3,
        Error::AttemptsExhausted { .. } => 4,
        _ => 1,
    }
}

struct Ctx {
    table: Option<FactorTable>,
    format: Format,
}

impl Ctx {
    fn factorization(&self, d: usize) -> xorshift_gf2::Result<Factorization> {
        factor_mersenne(d, self.table.as_ref())
    }
}

fn parse_word(s: &str) -> xorshift_gf2::Result<u64> {
    let s = s.trim();
    let parsed = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => match s.strip_prefix("0b") {
            Some(bin) => u64::from_str_radix(bin, 2),
            None => s.parse(),
        },
    };
    parsed.map_err(|_| Error::Parse(format!("bad word `{s}`")))
}

fn parse_words(s: &str) -> xorshift_gf2::Result<Vec<u64>> {
    s.split(',').map(parse_word).collect()
}

/// Bit counts accept plain integers and exact scientific notation (`1e8`).
fn parse_bits(s: &str) -> xorshift_gf2::Result<u64> {
    let s = s.trim();
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    let bad = || Error::Parse(format!("bad bit count `{s}`"));
    let (mantissa, exp) = s.split_once(['e', 'E']).ok_or_else(bad)?;
    let mantissa: u64 = mantissa.parse().map_err(|_| bad())?;
    let exp: u32 = exp.trim_start_matches('+').parse().map_err(|_| bad())?;
    10u64
        .checked_pow(exp)
        .and_then(|p| p.checked_mul(mantissa))
        .ok_or_else(bad)
}

fn read_spec(path: &Path) -> xorshift_gf2::Result<XorshiftSpec> {
    let text = fs::read_to_string(path).map_err(io_error(path))?;
    XorshiftSpec::parse_text(&text)
}

fn emit(out: Option<&Path>, text: &str) -> xorshift_gf2::Result<()> {
    match out {
        Some(p) => fs::write(p, text).map_err(io_error(p)),
        None => {
            out!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> xorshift_gf2::Result<()> {
    let table = cli
        .factor_table
        .as_deref()
        .map(|p| FactorTable::load(p, cli.trust_table))
        .transpose()?;
    let ctx = Ctx {
        table,
        format: cli.format,
    };

    match cli.command {
        Command::Construct {
            poly,
            word_size,
            out,
        } => {
            let f = Gf2Poly::parse_text(&poly)?;
            let fact = ctx.factorization(f.degree())?;
            let spec = construct_from_primitive(&f, word_size, &fact)?;
            let note = format!("from {}", f.to_degs_text());
            emit(out.as_deref(), &spec.to_text_with_comments(&[&note]))
        }
        Command::Sample {
            m,
            n,
            k,
            search_seed,
            max_attempts,
            out,
        } => {
            let fact = ctx.factorization(m * n)?;
            let mut rng = ChaCha8Rng::seed_from_u64(search_seed);
            let attempts = max_attempts.unwrap_or_else(|| default_max_attempts(m, n));
            let s = sample_k_tap(m, n, k, &mut rng, &fact, attempts)?;
            eprintln!("found after {} attempts", s.attempts);
            let notes = [
                format!("from {}", s.polynomial.to_degs_text()),
                format!(
                    "tap_count={} attempts={} search_seed={search_seed}",
                    tap_count(&s.spec),
                    s.attempts
                ),
            ];
            let notes: Vec<&str> = notes.iter().map(String::as_str).collect();
            emit(out.as_deref(), &s.spec.to_text_with_comments(&notes))
        }
        Command::Stream {
            spec,
            seed: seed_text,
            bits,
            out,
            allow_degraded,
        } => {
            let spec = read_spec(&spec)?;
            let (mut state, quality) = seed(&spec, &parse_words(&seed_text)?)?;
            if let SeedQuality::Degraded(l) = quality {
                if !allow_degraded {
                    eprintln!(
                        "warning: every seed word is divisible by 2^{l}; the first {} outputs are plain right shifts",
                        spec.n() * l as usize
                    );
                }
            }
            let nbits = parse_bits(&bits)?;
            let mut sink: Box<dyn Write> = match &out {
                Some(p) => Box::new(io::BufWriter::new(
                    fs::File::create(p).map_err(io_error(p))?,
                )),
                None => Box::new(io::BufWriter::new(io::stdout().lock())),
            };
            let written = write_stream(&spec, &mut state, nbits, |chunk| sink.write_all(chunk));
            match written.and_then(|()| sink.flush()) {
                // A reader that hangs up early (`| head -c`) is not a failure.
                Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(Error::Io {
                    context: "writing stream".into(),
                    source: e,
                }),
                _ => Ok(()),
            }
        }
        Command::Bench {
            mn,
            word_sizes,
            bits,
            repetitions,
        } => {
            let nbits = parse_bits(&bits)?;
            let results = run_bench(mn, &word_sizes, nbits, repetitions)?;
            let rows: Vec<[String; 6]> = results
                .iter()
                .map(|r| {
                    let secs = r.elapsed.as_secs_f64();
                    let rate = if secs > 0.0 {
                        r.bits as f64 / secs / 1e6
                    } else {
                        0.0
                    };
                    [
                        r.m.to_string(),
                        r.n.to_string(),
                        r.bits.to_string(),
                        format!("{secs:.6}"),
                        format!("{rate:.1}"),
                        r.ratio_to_previous
                            .map_or("-".into(), |x| format!("{x:.3}")),
                    ]
                })
                .collect();
            let headers = ["m", "n", "bits", "seconds", "Mbit/s", "ratio"];
            if ctx.format == Format::Text {
                outln!("degree {mn}, median of {repetitions}; period unverified");
            }
            print_table(ctx.format, &headers, &rows);
            Ok(())
        }
        Command::Period {
            spec,
            seed: seed_text,
        } => {
            let spec = read_spec(&spec)?;
            let period = orbit_period(&spec, &parse_words(&seed_text)?)?;
            match ctx.format {
                Format::Text => outln!("{period}"),
                Format::Tsv => outln!("period\n{period}"),
            }
            Ok(())
        }
        Command::Weakness { spec, d, l } => {
            let spec = read_spec(&spec)?;
            let report = weakness_trace(&spec, parse_word(&d)?, l)?;
            match ctx.format {
                Format::Text => {
                    out!("{}", report.summary());
                    out!("{}", report.render_table());
                }
                Format::Tsv => {
                    outln!("step\tstates_newest_first\toutput\tpredicted");
                    for (k, st) in report.states.iter().enumerate().skip(1) {
                        let words: Vec<String> =
                            st.iter().rev().map(|w| format!("{w:#x}")).collect();
                        outln!(
                            "{k}\t{}\t{:#x}\t{:#x}",
                            words.join(","),
                            report.trace[k - 1],
                            report.predicted[k - 1]
                        );
                    }
                }
            }
            Ok(())
        }
        Command::Census { m, n } => {
            let count = census(m, n, &ctx.factorization(m * n)?)?;
            match ctx.format {
                Format::Text => outln!("{count}"),
                Format::Tsv => outln!("m\tn\tcensus\n{m}\t{n}\t{count}"),
            }
            Ok(())
        }
        Command::CheckTriplet {
            m,
            n,
            a,
            b,
            c,
            max_shift,
        } => {
            let fact = ctx.factorization(m * n)?;
            let triplets: Vec<TripletSpec> = match (a, b, c) {
                (Some(a), Some(b), Some(c)) => vec![TripletSpec { a, b, c, m, n }],
                _ => {
                    let top = max_shift.unwrap_or(m).max(1);
                    (1..top)
                        .flat_map(|a| (1..top).flat_map(move |b| (1..top).map(move |c| (a, b, c))))
                        .map(|(a, b, c)| TripletSpec { a, b, c, m, n })
                        .collect()
                }
            };
            let mut rows = Vec::new();
            for t in &triplets {
                let ok = check_triplet(t, &fact)?;
                rows.push([
                    t.a.to_string(),
                    t.b.to_string(),
                    t.c.to_string(),
                    ok.to_string(),
                ]);
            }
            print_table(ctx.format, &["a", "b", "c", "primitive"], &rows);
            Ok(())
        }
    }
}

fn print_table<const N: usize>(format: Format, headers: &[&str; N], rows: &[[String; N]]) {
    match format {
        Format::Tsv => {
            outln!("{}", headers.join("\t"));
            for r in rows {
                outln!("{}", r.join("\t"));
            }
        }
        Format::Text => {
            let mut widths = headers.map(str::len);
            for r in rows {
                for (w, cell) in widths.iter_mut().zip(r) {
                    *w = (*w).max(cell.len());
                }
            }
            let rule: String = widths
                .iter()
                .map(|w| format!("+{}", "-".repeat(w + 2)))
                .collect::<String>()
                + "+";
            let line = |cells: Vec<&str>| {
                cells
                    .iter()
                    .zip(&widths)
                    .map(|(c, w)| format!("| {c:>w$} "))
                    .collect::<String>()
                    + "|"
            };
            outln!("{rule}");
            outln!("{}", line(headers.to_vec()));
            outln!("{rule}");
            for r in rows {
                outln!("{}", line(r.iter().map(String::as_str).collect()));
            }
            outln!("{rule}");
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    ExitCode::SUCCESS
                }
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
