//! Subcommand implementations.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::sync::Arc;

use anyhow::{Context, Result};
use log::{info, warn};
use zetadim::covering::DEFAULT_ORACLE_CAP;
use zetadim::dimension::{
    abscissa_estimate, assouad_certificate, box_dimension_estimate, counting_profile, dyadic_ladder, geometric_ladder,
    plot_data, render_rung_table, sigma_grid, zeta_estimates, AssouadConfig, DEFAULT_WINDOW,
};
use zetadim::generators::{
    gen_dyadic_blocks, gen_gaussian_irreducibles, gen_lattice, gen_power_set, gen_quadratic_irreducibles,
    ingest_points, primes_from_sieve, read_points, super_primes_from_sieve, write_points, PointFormat,
    QuadraticInteger, SieveCache, DEFAULT_SIEVE_BUDGET,
};
use zetadim::geometry::{lex_cmp, PointSet};
use zetadim::patches::{
    find_patch, guarantee_report, read_witness, standard_orientation, write_witness, GuaranteeConfig, PatchQuery,
};
use zetadim::Error;

use crate::cache::{cache_dir, sha256_hex, sidecar_path, Cache, Lookup, Meta};
use crate::config::Config;
use crate::{
    usage, CacheAction, CacheArgs, Cli, Command, EstimateArgs, FormatArg, GenerateArgs, Mode, PatchArgs,
    ReportArgs, SetName, VerifyArgs, EXIT_NOT_FOUND,
};

type Set = PointSet<f64>;

pub fn run(cli: Cli) -> Result<u8> {
    let config = match &cli.config {
        Some(p) => Config::load(p).map_err(|e| usage(format!("{e:#}")))?,
        None => Config::default(),
    };
    let cache = Cache::new(cache_dir(cli.cache_dir.clone(), config.get_str("cache_dir")));
    match cli.command {
        Command::Generate(a) => generate(a, &config, &cache),
        Command::Estimate(a) => estimate(a, &config),
        Command::Patch(a) => patch(a, &config),
        Command::Verify(a) => verify(a),
        Command::Report(a) => report(a, &config),
        Command::Cache(a) => cache_cmd(a, &cache),
    }
}

fn required<T>(v: Option<T>, what: &str) -> Result<T> {
    v.ok_or_else(|| usage(format!("missing required option --{what}")))
}

fn format_of(flag: Option<FormatArg>, path: &Path) -> PointFormat {
    match flag {
        Some(FormatArg::Csv) => PointFormat::Csv,
        Some(FormatArg::Jsonl) => PointFormat::JsonLines,
        None => PointFormat::from_path(path),
    }
}

fn format_tag(f: PointFormat) -> &'static str {
    match f {
        PointFormat::Csv => "csv",
        PointFormat::JsonLines => "jsonl",
    }
}

fn as_count(v: f64, what: &str) -> Result<u64> {
    if v.is_nan() || v < 0.0 || v.fract() != 0.0 || v > u64::MAX as f64 {
        return Err(usage(format!("--{what} must be a nonnegative integer")));
    }
    Ok(v as u64)
}

fn build_set(a: &GenerateArgs, config: &Config) -> Result<(String, Set)> {
    let budget: u64 = config.resolve(None, "sieve_budget", DEFAULT_SIEVE_BUDGET)?;
    let sieve = |limit: u64| -> Result<Arc<SieveCache>> { Ok(Arc::new(SieveCache::with_budget(limit, budget)?)) };
    Ok(match a.set {
        SetName::Lattice => {
            let dim = config.resolve(a.dim, "dim", 1usize)?;
            let radius = required(a.radius, "radius")?;
            (format!("dim={dim},radius={radius}"), gen_lattice(dim, radius)?)
        }
        SetName::Primes => {
            let limit = as_count(required(a.limit, "limit")?, "limit")?;
            (format!("limit={limit}"), primes_from_sieve(sieve(limit)?)?)
        }
        SetName::Superprimes => {
            let limit = as_count(required(a.limit, "limit")?, "limit")?;
            (format!("limit={limit}"), super_primes_from_sieve(sieve(limit)?)?)
        }
        SetName::Gaussian => {
            let radius = required(a.radius, "radius")?;
            (format!("radius={radius}"), gen_gaussian_irreducibles(radius)?.set)
        }
        SetName::Quadratic => {
            let trace = a.trace.unwrap_or(0);
            let norm = required(a.norm, "norm")?;
            let radius = required(a.radius, "radius")?;
            let alpha = QuadraticInteger::new(trace, norm)?;
            (format!("trace={trace},norm={norm},radius={radius}"), gen_quadratic_irreducibles(alpha, radius)?.0)
        }
        SetName::Power => {
            let alpha = required(a.alpha, "alpha")?;
            let limit = required(a.limit, "limit")?;
            (format!("alpha={alpha},limit={limit}"), gen_power_set(alpha, limit)?)
        }
        SetName::Blocks => {
            let limit = as_count(required(a.limit, "limit")?, "limit")?;
            (format!("limit={limit}"), gen_dyadic_blocks(limit)?)
        }
    })
}

fn set_name(s: SetName) -> &'static str {
    match s {
        SetName::Lattice => "lattice",
        SetName::Primes => "primes",
        SetName::Superprimes => "superprimes",
        SetName::Gaussian => "gaussian",
        SetName::Quadratic => "quadratic",
        SetName::Power => "power",
        SetName::Blocks => "blocks",
    }
}

/// Canonical parameter string, computed without generating the set.
fn params_of(a: &GenerateArgs, config: &Config) -> Result<String> {
    Ok(match a.set {
        SetName::Lattice => format!("dim={},radius={}", config.resolve(a.dim, "dim", 1usize)?, required(a.radius, "radius")?),
        SetName::Primes | SetName::Superprimes | SetName::Blocks => {
            format!("limit={}", as_count(required(a.limit, "limit")?, "limit")?)
        }
        SetName::Gaussian => format!("radius={}", required(a.radius, "radius")?),
        SetName::Quadratic => format!(
            "trace={},norm={},radius={}",
            a.trace.unwrap_or(0),
            required(a.norm, "norm")?,
            required(a.radius, "radius")?
        ),
        SetName::Power => format!("alpha={},limit={}", required(a.alpha, "alpha")?, required(a.limit, "limit")?),
    })
}

fn generate(a: GenerateArgs, config: &Config, cache: &Cache) -> Result<u8> {
    let format = format_of(a.format, &a.out);
    let generator = set_name(a.set);
    let params = params_of(&a, config)?;
    let tag = format_tag(format);
    let (bytes, meta, source) = match (a.no_cache, cache.lookup(generator, &params, tag)) {
        (false, Lookup::Hit(bytes, meta)) => (bytes, meta, "cache hit"),
        (no_cache, lookup) => {
            if !no_cache && matches!(lookup, Lookup::Corrupt) {
                warn!("cached {generator} ({params}) failed its checksum; regenerating");
            }
            let (_, set) = build_set(&a, config)?;
            let mut bytes = Vec::new();
            write_points(&mut bytes, set.lex_order().into_iter().map(|i| set.point(i)), format)?;
            let meta = Meta {
                generator: generator.to_string(),
                params: params.clone(),
                format: tag.to_string(),
                count: set.len(),
                sha256: sha256_hex(&bytes),
            };
            if let Err(e) = cache.store(&bytes, &meta) {
                warn!("could not write cache entry: {e:#}");
            }
            (bytes, meta, "generated")
        }
    };
    fs::write(&a.out, &bytes).with_context(|| format!("writing {}", a.out.display()))?;
    fs::write(sidecar_path(&a.out), meta.render())?;
    println!("{source}: {} points of {generator} ({params}) -> {}", meta.count, a.out.display());
    println!("sha256={}", meta.sha256);
    Ok(0)
}

fn load(path: &Path) -> Result<Set> {
    let ing = ingest_points::<f64>(path, None).with_context(|| format!("reading {}", path.display()))?;
    if ing.duplicates > 0 {
        info!("dropped {} duplicate points", ing.duplicates);
    }
    if ing.set.is_empty() {
        return Err(Error::EmptySet.into());
    }
    Ok(ing.set)
}

fn parse_list(text: &str, what: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|_| usage(format!("bad number `{x}` in --{what}"))))
        .collect()
}

/// `start:end[:ratio]`.
fn parse_ladder(text: &str) -> Result<(f64, f64, f64)> {
    let parts: Vec<&str> = text.split(':').collect();
    if !(2..=3).contains(&parts.len()) {
        return Err(usage("--ladder expects start:end[:ratio]"));
    }
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| usage(format!("bad number `{s}` in --ladder")));
    let ratio = if parts.len() == 3 { num(parts[2])? } else { 2.0 };
    Ok((num(parts[0])?, num(parts[1])?, ratio))
}

fn increasing_ladder(start: f64, end: f64, ratio: f64) -> Result<Vec<f64>> {
    if !(start > 0.0 && end >= start && ratio > 1.0) {
        return Err(usage("ladder needs 0 < start ≤ end and ratio > 1"));
    }
    let n = ((end / start).ln() / ratio.ln() * (1.0 + 1e-12)).floor() as usize + 1;
    Ok(geometric_ladder(start, ratio, n)?)
}

fn center_of(a: &EstimateArgs, set: &Set) -> Result<Vec<f64>> {
    match &a.center {
        Some(c) => {
            let v = parse_list(c, "center")?;
            if v.len() != set.dim() {
                return Err(usage(format!("--center has {} coordinates, the set has dimension {}", v.len(), set.dim())));
            }
            Ok(v)
        }
        None => Ok(vec![0.0; set.dim()]),
    }
}

fn default_start(set: &Set) -> f64 {
    set.separation().filter(|g| *g > 0.0).unwrap_or(1.0)
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    print!("{text}");
    if let Some(p) = out {
        fs::write(p, text).with_context(|| format!("writing {}", p.display()))?;
    }
    Ok(())
}

fn estimate(a: EstimateArgs, config: &Config) -> Result<u8> {
    let mode = match a.mode {
        Some(m) => m,
        None => match config.get_str("mode") {
            None | Some("zeta") => Mode::Zeta,
            Some("box") => Mode::Box,
            Some("abscissa") => Mode::Abscissa,
            Some("assouad") => Mode::Assouad,
            Some(other) => return Err(usage(format!("unknown mode `{other}` in config"))),
        },
    };
    let set = load(&a.input)?;
    let center = center_of(&a, &set)?;
    let window = config.resolve(a.window, "window", DEFAULT_WINDOW)?;
    let ladder_spec = config.resolve_opt(a.ladder.clone(), "ladder")?;
    let mut text = format!("# input {}\n# points {}\n# dimension {}\n", a.input.display(), set.len(), set.dim());
    match mode {
        Mode::Zeta | Mode::Abscissa => {
            let ladder = match &ladder_spec {
                Some(s) => {
                    let (start, end, ratio) = parse_ladder(s)?;
                    increasing_ladder(start, end, ratio)?
                }
                None => dyadic_ladder(default_start(&set), set.usable_radius(&center))?,
            };
            if mode == Mode::Zeta {
                let r = config.resolve(a.r, "r", default_start(&set) / 2.0)?;
                let profile = counting_profile(&set, &center, r, &ladder)?;
                let est = zeta_estimates(&profile, window)?;
                writeln!(text, "# mode zeta\n# cover_scale {r}")?;
                text.push_str(&render_rung_table(&profile, &est));
                writeln!(text, "upper {:.6}\nlower {:.6}", est.upper, est.lower)?;
                if let Some(p) = &a.plot {
                    fs::write(p, plot_data(&profile))?;
                }
            } else {
                let step = config.resolve(a.sigma_step, "sigma_step", 0.05)?;
                let grid = sigma_grid(0.0, set.dim() as f64 + step, step);
                let abs = abscissa_estimate(&set, &center, &grid, &ladder)?;
                writeln!(text, "# mode abscissa\n# tau {}\n# sigma growth_slope", abs.tau)?;
                for (s, g) in &abs.grid_slopes {
                    writeln!(text, "{s:.4} {g:.6}")?;
                }
                if abs.saturated {
                    writeln!(text, "# saturated: every grid value looked divergent")?;
                }
                writeln!(text, "abscissa {:.6}", abs.value)?;
            }
        }
        Mode::Box => {
            let (start, floor, ratio) = match &ladder_spec {
                Some(s) => parse_ladder(s)?,
                None => (set.sample_radius().max(1.0), default_start(&set) / 2.0, 2.0),
            };
            if !(floor > 0.0 && start >= floor && ratio > 1.0) {
                return Err(usage("box ladder needs start ≥ floor > 0"));
            }
            let scales: Vec<f64> = increasing_ladder(floor, start, ratio)?.into_iter().rev().collect();
            let b = box_dimension_estimate(&set, &scales, window)?;
            writeln!(text, "# mode box\n# r lower upper slope")?;
            let mut plot = String::new();
            for (j, (r, bound)) in b.scales.iter().zip(&b.bounds).enumerate() {
                let slope = b.estimate.window_slopes[j].map_or("-".to_string(), |s| format!("{s:.6}"));
                writeln!(text, "{r} {} {} {slope}", bound.lower, bound.upper)?;
                writeln!(plot, "{:.9} {:.9}", -r.ln(), (bound.upper.max(1) as f64).ln())?;
            }
            if b.estimate.diagnostics.frozen {
                writeln!(text, "# frozen: counts constant, scales below the separation")?;
            }
            writeln!(text, "upper {:.6}\nlower {:.6}", b.estimate.upper, b.estimate.lower)?;
            if let Some(p) = &a.plot {
                fs::write(p, plot)?;
            }
        }
        Mode::Assouad => {
            let mut cfg = AssouadConfig {
                seed: config.resolve(a.seed, "seed", 0u64)?,
                oracle_cap: config.resolve(None, "oracle_cap", DEFAULT_ORACLE_CAP)?,
                ..AssouadConfig::default()
            };
            cfg.centers = config.resolve(a.centers, "centers", cfg.centers)?;
            if let Some(s) = &ladder_spec {
                let (start, end, ratio) = parse_ladder(s)?;
                cfg.radii = increasing_ladder(start, end, ratio)?;
            }
            let c = assouad_certificate(&set, &cfg)?;
            writeln!(text, "# mode assouad\n# triples {}\n# center radius scale lower ratio", c.triples.len())?;
            for t in &c.triples {
                let x: Vec<String> = t.center.iter().map(|v| v.to_string()).collect();
                writeln!(text, "{} {} {} {} {:.6}", x.join(","), t.radius, t.scale, t.lower, t.ratio)?;
            }
            writeln!(text, "assouad_certificate {:.6}", c.value)?;
        }
    }
    emit(&text, a.out.as_deref())?;
    Ok(0)
}

fn parse_orientation(text: &str, d: usize) -> Result<Vec<Vec<f64>>> {
    text.split(';')
        .map(|v| {
            let e = parse_list(v, "orientation")?;
            if e.len() != d {
                return Err(usage(format!("orientation vector `{v}` needs {d} coordinates")));
            }
            Ok(e)
        })
        .collect()
}

fn patch(a: PatchArgs, config: &Config) -> Result<u8> {
    let k = required(config.resolve_opt(a.k, "k")?, "k")?;
    let eps = required(config.resolve_opt(a.eps, "eps")?, "eps")?;
    let set = load(&a.input)?;
    let d = set.dim();
    let orientation = match config.resolve_opt(a.orientation.clone(), "orientation")? {
        Some(s) => parse_orientation(&s, d)?,
        None => standard_orientation(d, config.resolve(a.m, "m", d)?),
    };
    let mut query = PatchQuery::new(k, eps, orientation);
    if let Some(s) = config.resolve_opt(a.ladder.clone(), "patch_ladder")? {
        let (lo, hi, ratio) = parse_ladder(&s)?;
        query.delta_min = Some(lo);
        query.delta_max = Some(hi);
        query.ratio = if s.split(':').count() == 3 { ratio } else { query.ratio };
    }
    query.pair_candidates = !a.no_pairs;
    let rep = find_patch(&set, &query)?;
    let mut text = format!(
        "# k {k}\n# epsilon {eps}\n# scales searched {} (ladder {}, pair candidates {})\n# {}\n",
        rep.stats.scales_searched, rep.stats.ladder_scales, rep.stats.pair_candidates, rep.soundness
    );
    let Some(w) = &rep.witness else {
        text.push_str("not found\n");
        emit(&text, None)?;
        return Ok(EXIT_NOT_FOUND);
    };
    text.push_str("found\n");
    let format = a.out.as_deref().map_or(PointFormat::Csv, PointFormat::from_path);
    let mut buf = Vec::new();
    write_witness(&mut buf, w, format)?;
    text.push_str(std::str::from_utf8(&buf).expect("witness text is UTF-8"));
    emit(&text, None)?;
    if let Some(p) = &a.out {
        fs::write(p, &buf).with_context(|| format!("writing {}", p.display()))?;
    }
    Ok(0)
}

fn verify(a: VerifyArgs) -> Result<u8> {
    let text = fs::read_to_string(&a.patch).with_context(|| format!("reading {}", a.patch.display()))?;
    let w = read_witness::<f64, _>(text.as_bytes(), PointFormat::from_path(&a.patch))?;
    let points = fs::read(&a.points).with_context(|| format!("reading {}", a.points.display()))?;
    let set = read_points::<f64, _>(points.as_slice(), PointFormat::from_path(&a.points), Some(w.patch.dim()))?.set;
    let mut members: Vec<&[f64]> = set.iter().collect();
    members.sort_by(|x, y| lex_cmp(x, y));
    let outside = w.q.iter().filter(|q| members.binary_search_by(|m| lex_cmp(m, q)).is_err()).count();
    if outside > 0 {
        println!("invalid: {outside} witness points are not in the point file");
        return Ok(EXIT_NOT_FOUND);
    }
    if !w.verify() {
        println!("invalid: witness fails the (k, epsilon, e) test");
        return Ok(EXIT_NOT_FOUND);
    }
    println!("valid");
    Ok(0)
}

fn report(a: ReportArgs, config: &Config) -> Result<u8> {
    let k = required(config.resolve_opt(a.k, "k")?, "k")?;
    let eps = required(config.resolve_opt(a.eps, "eps")?, "eps")?;
    let set = load(&a.input)?;
    let m = config.resolve(a.m, "m", 1usize)?;
    let mut cfg = GuaranteeConfig::default();
    if let Some(s) = config.resolve_opt(a.ladder.clone(), "ladder")? {
        let (start, end, ratio) = parse_ladder(&s)?;
        cfg.ladder = Some(increasing_ladder(start, end, ratio)?);
    }
    let rep = guarantee_report(&set, k, eps, m, &cfg)?;
    print!("{}", rep.render());
    Ok(0)
}

fn cache_cmd(a: CacheArgs, cache: &Cache) -> Result<u8> {
    match a.action {
        CacheAction::Path => println!("{}", cache.dir.display()),
        CacheAction::List => {
            for (path, meta) in cache.list()? {
                println!("{} {} {} {} {}", meta.generator, meta.params, meta.count, meta.sha256, path.display());
            }
        }
        CacheAction::Clear => println!("removed {} entries", cache.clear()?),
    }
    Ok(0)
}
