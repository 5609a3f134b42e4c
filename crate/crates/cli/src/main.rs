// Copyright 2026 the Metaglyph Authors
// SPDX-License-Identifier: Apache-2.0 OR MIT

//! `metaglyph`: compile glyph programs, build and check masters, cut
//! instances, emit font source packages and serve the playground.

use std::collections::BTreeMap;
use std::io::Write as _;
use std::net::{IpAddr, SocketAddr};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use metaglyph::dsl::{compile, EvalOptions, FileLoader};
use metaglyph_pipeline::{
    build_all, build_master, check_compatibility, derive_education_variant, emit_package, glyph_svg, interpolate,
    write_svg, write_ufo, EducationMode, Error, GlyphSet, Location, Manifest, SvgOptions, UfoMetadata,
};

#[derive(Parser)]
#[command(name = "metaglyph", version, about = "Parametric glyph compiler")]
struct Cli {
    /// More log output; repeat for debug messages.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compile one glyph program to SVG.
    Compile {
        /// Glyph program (`.mpg`).
        file: PathBuf,
        /// Fix a numeric parameter, overriding its assignment in the program.
        #[arg(long = "set", value_name = "NAME=VALUE", value_parser = parse_set)]
        set: Vec<(String, f64)>,
        /// Output file; standard output when absent.
        #[arg(long, value_name = "FILE")]
        svg: Option<PathBuf>,
        #[command(flatten)]
        render: Render,
    },
    /// Build masters and optionally write their SVGs.
    Build {
        #[command(flatten)]
        manifest: ManifestArg,
        /// Build only these masters.
        #[arg(long = "master", value_name = "NAME")]
        masters: Vec<String>,
        /// Write `<dir>/<master>/<glyph>.svg`.
        #[arg(long, value_name = "DIR")]
        svg_dir: Option<PathBuf>,
        #[command(flatten)]
        render: Render,
        #[command(flatten)]
        education: Education,
    },
    /// Build all masters and report interpolation compatibility.
    Check {
        #[command(flatten)]
        manifest: ManifestArg,
    },
    /// Interpolate an instance.
    Instance {
        #[command(flatten)]
        manifest: ManifestArg,
        /// Design-space location, e.g. `wght=550,wdth=80`.
        #[arg(long, value_name = "AXES", value_parser = parse_location, required_unless_present = "name", conflicts_with = "name")]
        loc: Option<Location>,
        /// A named instance from the manifest.
        #[arg(long, value_name = "STYLE")]
        name: Option<String>,
        /// Write `<dir>/<glyph>.svg`.
        #[arg(long, value_name = "DIR")]
        svg_dir: Option<PathBuf>,
        /// Write the instance as a UFO package.
        #[arg(long, value_name = "DIR")]
        ufo: Option<PathBuf>,
        #[command(flatten)]
        render: Render,
        #[command(flatten)]
        education: Education,
    },
    /// Write master UFOs and a designspace document.
    Emit {
        #[command(flatten)]
        manifest: ManifestArg,
        /// Directory receiving `masters/*.ufo` and the designspace.
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
    },
    /// Start the playground service.
    Serve {
        #[arg(long, env = "METAGLYPH_PORT", default_value_t = 8080)]
        port: u16,
        #[arg(long, env = "METAGLYPH_HOST", default_value = "127.0.0.1")]
        host: IpAddr,
        /// Directory holding the playground UI bundle.
        #[arg(long, env = "METAGLYPH_STATIC_DIR", value_name = "DIR")]
        static_dir: Option<PathBuf>,
        /// Largest accepted program, in bytes.
        #[arg(long, env = "METAGLYPH_MAX_SOURCE", default_value_t = metaglyph_service::DEFAULT_MAX_SOURCE)]
        max_source: usize,
    },
}

#[derive(Args)]
struct ManifestArg {
    /// Project manifest.
    #[arg(long, env = "METAGLYPH_MANIFEST", default_value = "manifest.toml", value_name = "FILE")]
    manifest: PathBuf,
}

#[derive(Args)]
struct Render {
    /// Overlay knots, control handles and stroke centre lines.
    #[arg(long)]
    debug: bool,
    /// CSS replacing the built-in overlay style.
    #[arg(long, value_name = "FILE")]
    style: Option<PathBuf>,
}

#[derive(Args)]
struct Education {
    /// Replace strokes with dots or arrows along their centre lines.
    #[arg(long, value_enum)]
    education: Option<Mode>,
    /// Distance between marks, in font units.
    #[arg(long, default_value_t = 40.0)]
    spacing: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Dots,
    Arrows,
}

fn parse_set(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or("expected NAME=VALUE")?;
    let k = k.trim();
    let valid = k.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && k.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '.');
    if !valid {
        return Err(format!("`{k}` is not a parameter name"));
    }
    let v: f64 = v.trim().parse().map_err(|_| format!("`{}` is not a number", v.trim()))?;
    if !v.is_finite() {
        return Err(format!("`{v}` is not finite"));
    }
    Ok((k.to_string(), v))
}

fn parse_location(s: &str) -> Result<Location, String> {
    let mut loc = Location::new();
    for part in s.split(',').filter(|p| !p.trim().is_empty()) {
        let (tag, v) = parse_set(part)?;
        if loc.insert(tag.clone(), v).is_some() {
            return Err(format!("axis `{tag}` given twice"));
        }
    }
    Ok(loc)
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn validation(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            message: message.into(),
        }
    }

    fn io(path: &Path, e: impl std::fmt::Display) -> Self {
        Failure {
            code: 3,
            message: format!("{}: {e}", path.display()),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if matches!(e, Error::Io { .. }) { 3 } else { 1 };
        let message = match &e {
            Error::Build { master, failures } => {
                let mut lines = Vec::new();
                for f in failures {
                    lines.extend(f.diagnostics.iter().cloned());
                }
                lines.push(format!("error: master `{master}`: {} glyph(s) failed", failures.len()));
                lines.join("\n")
            }
            _ => format!("error: {e}"),
        };
        Failure { code, message }
    }
}

type Outcome = Result<(), Failure>;

fn read_style(render: &Render) -> Result<Option<String>, Failure> {
    render
        .style
        .as_ref()
        .map(|p| std::fs::read_to_string(p).map_err(|e| Failure::io(p, e)))
        .transpose()
}

fn load_manifest(arg: &ManifestArg) -> Result<Manifest, Failure> {
    Ok(Manifest::load(&arg.manifest)?)
}

fn educate(set: GlyphSet, education: &Education) -> Result<GlyphSet, Failure> {
    let mode = match education.education {
        None => return Ok(set),
        Some(Mode::Dots) => EducationMode::Dots,
        Some(Mode::Arrows) => EducationMode::Arrows,
    };
    if !(education.spacing > 0.0) {
        return Err(Failure::validation("error: --spacing must be positive"));
    }
    Ok(derive_education_variant(&set, mode, education.spacing)?)
}

fn cmd_compile(file: &Path, set: Vec<(String, f64)>, svg: Option<PathBuf>, render: &Render) -> Outcome {
    let source = std::fs::read_to_string(file).map_err(|e| Failure::io(file, e))?;
    let style = read_style(render)?;
    let name = file.display().to_string();
    let options = EvalOptions::with_overrides(set.into_iter().collect::<BTreeMap<_, _>>());
    let glyph = compile(&source, &name, &FileLoader, &options);
    for d in &glyph.diagnostics {
        eprintln!("{}", d.render(&name));
    }
    if glyph.has_errors() {
        return Err(Failure::validation(format!("error: {name} did not compile")));
    }
    let text = glyph_svg(
        &glyph.outline,
        &glyph.strokes,
        &SvgOptions {
            debug: render.debug,
            style,
            ..Default::default()
        },
    );
    match svg {
        Some(out) => metaglyph_pipeline::write_atomic(&out, text.as_bytes())?,
        None => stdout_bytes(text.as_bytes())?,
    }
    Ok(())
}

fn cmd_build(
    manifest: &ManifestArg,
    masters: &[String],
    svg_dir: Option<PathBuf>,
    render: &Render,
    education: &Education,
) -> Outcome {
    let m = load_manifest(manifest)?;
    let style = read_style(render)?;
    let sets = if masters.is_empty() {
        build_all(&m)?.masters
    } else {
        let mut sets = Vec::new();
        for name in masters {
            let spec = m
                .master(name)
                .ok_or_else(|| Failure::validation(format!("error: no master named `{name}`")))?;
            sets.push(build_master(&m, spec)?);
        }
        sets
    };
    for set in sets {
        let set = educate(set, education)?;
        say(format_args!("{}: {} glyphs", set.name, set.glyphs.len()))?;
        if let Some(dir) = &svg_dir {
            write_svg(&set, &dir.join(&set.name), render.debug, style.as_deref())?;
        }
    }
    Ok(())
}

fn cmd_check(manifest: &ManifestArg) -> Outcome {
    let m = load_manifest(manifest)?;
    let set = build_all(&m)?;
    let report = check_compatibility(&set);
    say(format_args!("{report}"))?;
    if report.is_compatible() {
        Ok(())
    } else {
        Err(Failure::validation(format!(
            "error: {} compatibility problem(s)",
            report.mismatches.len()
        )))
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_instance(
    manifest: &ManifestArg,
    loc: Option<Location>,
    name: Option<String>,
    svg_dir: Option<PathBuf>,
    ufo: Option<PathBuf>,
    render: &Render,
    education: &Education,
) -> Outcome {
    let m = load_manifest(manifest)?;
    let style = read_style(render)?;
    let (location, style_name) = match (loc, name) {
        (Some(l), _) => (l, None),
        (None, Some(n)) => {
            let inst = m
                .instances
                .iter()
                .find(|i| i.name == n)
                .ok_or_else(|| Failure::validation(format!("error: no instance named `{n}`")))?;
            (inst.location.clone(), Some(n))
        }
        (None, None) => unreachable!("clap requires one of --loc and --name"),
    };
    m.check_location(&location).map_err(|e| Failure::validation(format!("error: {e}")))?;
    let set = build_all(&m)?;
    let mut instance = interpolate(&set, &location)?;
    if let Some(n) = &style_name {
        instance.name = n.clone();
    }
    let instance = educate(instance, education)?;
    say(format_args!("{}: {} glyphs", instance.name, instance.glyphs.len()))?;
    if let Some(dir) = &svg_dir {
        write_svg(&instance, dir, render.debug, style.as_deref())?;
    }
    if let Some(dir) = &ufo {
        let meta = UfoMetadata {
            family: m.font.family.clone(),
            style: instance.name.clone(),
            version: m.font.version.clone(),
        };
        write_ufo(&instance, &meta, dir)?;
    }
    Ok(())
}

fn cmd_emit(manifest: &ManifestArg, out: &Path) -> Outcome {
    let m = load_manifest(manifest)?;
    let set = build_all(&m)?;
    let report = check_compatibility(&set);
    if !report.is_compatible() {
        say(format_args!("{report}"))?;
        return Err(Failure::validation("error: masters are not compatible"));
    }
    let path = emit_package(&set, out)?;
    say(format_args!("{}", path.display()))?;
    Ok(())
}

fn cmd_serve(port: u16, host: IpAddr, static_dir: Option<PathBuf>, max_source: usize) -> Outcome {
    let config = metaglyph_service::Config { max_source, static_dir };
    let runtime = tokio::runtime::Runtime::new().map_err(|e| Failure::io(Path::new("<runtime>"), e))?;
    let addr = SocketAddr::new(host, port);
    runtime
        .block_on(metaglyph_service::serve(addr, config))
        .map_err(|e| Failure {
            code: 3,
            message: format!("error: {addr}: {e}"),
        })
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Compile { file, set, svg, render } => cmd_compile(&file, set, svg, &render),
        Command::Build {
            manifest,
            masters,
            svg_dir,
            render,
            education,
        } => cmd_build(&manifest, &masters, svg_dir, &render, &education),
        Command::Check { manifest } => cmd_check(&manifest),
        Command::Instance {
            manifest,
            loc,
            name,
            svg_dir,
            ufo,
            render,
            education,
        } => cmd_instance(&manifest, loc, name, svg_dir, ufo, &render, &education),
        Command::Emit { manifest, out } => cmd_emit(&manifest, &out),
        Command::Serve {
            port,
            host,
            static_dir,
            max_source,
        } => cmd_serve(port, host, static_dir, max_source),
    }
}

/// Writes to standard output. A closed pipe ends the process quietly.
fn stdout_bytes(bytes: &[u8]) -> Result<(), Failure> {
    match std::io::stdout().write_all(bytes) {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => std::process::exit(0),
        r => r.map_err(|e| Failure::io(Path::new("<stdout>"), e)),
    }
}

fn say(line: std::fmt::Arguments) -> Result<(), Failure> {
    stdout_bytes(format!("{line}\n").as_bytes())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    env_logger::Builder::new()
        .filter_level(level)
        .parse_default_env()
        .format(|buf, record| writeln!(buf, "{}: {}", record.level().as_str().to_lowercase(), record.args()))
        .init();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{}", f.message);
            ExitCode::from(f.code)
        }
    }
}
