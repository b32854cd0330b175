use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context};
use serde::Deserialize;

use resetlab::bench::{self, MixSpec};
use resetlab::billing::{
    self, fit_time_model, Catalog, Currency, Exact, Money, PricingModel, ReceiptRow, TaskReceipt,
    BELL_TIME_CALIBRATION, REPORT_COLUMNS,
};
use resetlab::circuit::Circuit;
use resetlab::guard;
use resetlab::sim::{self, NoiseModel, QubitNoise};
use resetlab::splice::{splice, split_counts, SpliceMap, SpliceSpec};
use resetlab::text;

use crate::Command;

pub const MALFORMED: u8 = 2;
pub const CONFIG: u8 = 3;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub error: anyhow::Error,
}

type Result<T> = std::result::Result<T, Failure>;

trait Code<T> {
    fn code(self, code: u8) -> Result<T>;
}

impl<T, E: Into<anyhow::Error>> Code<T> for std::result::Result<T, E> {
    fn code(self, code: u8) -> Result<T> {
        self.map_err(|e| Failure {
            code,
            error: e.into(),
        })
    }
}

fn config<T>(msg: impl std::fmt::Display) -> Result<T> {
    Err(Failure {
        code: CONFIG,
        error: anyhow!("{msg}"),
    })
}

pub fn run(cmd: Command) -> Result<()> {
    match cmd {
        Command::Parse { input, canonical } => parse(&input, canonical),
        Command::Simulate {
            input,
            shots,
            seed,
            noiseless,
            noise,
            out,
            map,
        } => simulate(
            &input,
            shots,
            seed,
            noiseless,
            noise.as_deref(),
            out.as_deref(),
            map.as_deref(),
        ),
        Command::Splice {
            parts,
            resets,
            copies,
            out,
            name,
        } => splice_cmd(&parts, resets, copies, &out, &name),
        Command::Bill {
            input,
            model,
            shots,
            time,
            parts,
            catalog,
        } => bill(
            &input,
            &model,
            shots,
            time,
            parts,
            catalog.catalog.as_deref(),
        ),
        Command::Report {
            receipts,
            model,
            baseline,
            out,
            catalog,
        } => report(
            &receipts,
            &model,
            &baseline,
            out.as_deref(),
            catalog.catalog.as_deref(),
        ),
        Command::Detect {
            input,
            billed,
            fair,
            threshold,
            catalog,
        } => detect(
            &input,
            billed.as_deref(),
            &fair,
            &threshold,
            catalog.catalog.as_deref(),
        ),
        Command::Mix {
            preset,
            size,
            seed,
            resets,
            out,
        } => mix(preset.as_deref(), size, seed, resets, &out),
        Command::Fixtures { out } => fixtures(&out),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))
        .code(CONFIG)
}

fn write(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)
            .with_context(|| format!("cannot create {}", dir.display()))
            .code(CONFIG)?;
    }
    fs::write(path, contents)
        .with_context(|| format!("cannot write {}", path.display()))
        .code(CONFIG)
}

fn stdout(text: &str) -> Result<()> {
    std::io::stdout()
        .write_all(text.as_bytes())
        .context("cannot write to stdout")
        .code(CONFIG)
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "circuit".to_string())
}

fn load_circuit(path: &Path) -> Result<Circuit> {
    let text = read(path)?;
    let c = text::parse(&text)
        .with_context(|| format!("{}", path.display()))
        .code(MALFORMED)?;
    Ok(c.with_label(stem(path)))
}

fn load_catalog(path: Option<&Path>) -> Result<Catalog> {
    match path {
        None => Ok(Catalog::builtin()),
        Some(p) => Catalog::parse(&read(p)?)
            .with_context(|| format!("{}", p.display()))
            .code(CONFIG),
    }
}

fn model<'a>(catalog: &'a Catalog, name: &str) -> Result<&'a PricingModel> {
    match catalog.get(name) {
        Some(m) => Ok(m),
        None => {
            let names: Vec<&str> = catalog.entries.iter().map(|e| e.name.as_str()).collect();
            config(format!(
                "unknown model '{name}' (catalog has: {})",
                names.join(", ")
            ))
        }
    }
}

fn parse(input: &Path, canonical: bool) -> Result<()> {
    let c = load_circuit(input)?;
    if canonical {
        return stdout(&text::serialize(&c));
    }
    let g = c.census();
    stdout(&format!(
        "qubits={} clbits={} 1q={} 2q={} meas={} reset={} depth={}\n",
        c.width(),
        c.num_clbits(),
        g.n_1q,
        g.n_2q,
        g.n_meas,
        g.n_reset,
        g.depth
    ))
}

/// `eps_read=F,eps_condx=F`; omitted keys keep their defaults.
fn parse_noise(spec: &str) -> Result<NoiseModel> {
    let mut read = sim::DEFAULT_READOUT_ERROR;
    let mut condx = sim::DEFAULT_CONDX_ERROR;
    for field in spec.split(',').map(str::trim).filter(|f| !f.is_empty()) {
        let Some((k, v)) = field.split_once('=') else {
            return config(format!("noise field '{field}' is not KEY=VALUE"));
        };
        let v: f64 = match v.trim().parse() {
            Ok(v) => v,
            Err(_) => return config(format!("noise value '{v}' is not a number")),
        };
        match k.trim() {
            "eps_read" => read = v,
            "eps_condx" => condx = v,
            other => {
                return config(format!(
                    "unknown noise key '{other}' (expected eps_read, eps_condx)"
                ))
            }
        }
    }
    let q = QubitNoise::symmetric(read, condx).code(CONFIG)?;
    Ok(NoiseModel::uniform(q))
}

fn simulate(
    input: &Path,
    shots: u64,
    seed: u64,
    noiseless: bool,
    noise: Option<&str>,
    out: Option<&Path>,
    map: Option<&Path>,
) -> Result<()> {
    if shots == 0 {
        return config("--shots must be at least 1");
    }
    let model = match (noiseless, noise) {
        (true, _) => NoiseModel::noiseless(),
        (false, Some(spec)) => parse_noise(spec)?,
        (false, None) => NoiseModel::default(),
    };
    let map = match map {
        Some(p) => Some(
            SpliceMap::parse_text(&read(p)?)
                .with_context(|| format!("{}", p.display()))
                .code(MALFORMED)?,
        ),
        None => None,
    };
    let c = load_circuit(input)?;
    let counts = sim::run_shots(&c, &model, shots, seed).code(CONFIG)?;
    let mut outputs = vec![(
        out.map(Path::to_path_buf),
        counts.to_text(seed, sim::RNG_NAME),
    )];
    if let Some(map) = &map {
        let parts = split_counts(&counts, map)
            .context("splice map does not match the circuit")
            .code(MALFORMED)?;
        for (i, (span, table)) in map.parts.iter().zip(&parts).enumerate() {
            let path = out.map(|o| part_path(o, i));
            let text = table.to_text(seed, sim::RNG_NAME);
            let text = if path.is_none() {
                format!("# part {i} {}\n{text}", span.label)
            } else {
                text
            };
            outputs.push((path, text));
        }
    }
    for (path, text) in outputs {
        match path {
            Some(p) => write(&p, &text)?,
            None => stdout(&text)?,
        }
    }
    Ok(())
}

/// `dir/name.counts` → `dir/name.part3.counts`
fn part_path(out: &Path, index: usize) -> PathBuf {
    let stem = stem(out);
    let name = match out.extension() {
        Some(ext) => format!("{stem}.part{index}.{}", ext.to_string_lossy()),
        None => format!("{stem}.part{index}"),
    };
    out.with_file_name(name)
}

fn write_composite(out: &Path, name: &str, c: &Circuit, map: &SpliceMap) -> Result<()> {
    write(&out.join(format!("{name}.qct")), &text::serialize(c))?;
    write(&out.join(format!("{name}.map")), &map.to_text())
}

fn splice_cmd(
    paths: &[PathBuf],
    resets: usize,
    copies: usize,
    out: &Path,
    name: &str,
) -> Result<()> {
    if copies == 0 {
        return config("--copies must be at least 1");
    }
    let mut labels: Vec<(String, &PathBuf)> = Vec::new();
    let mut parts = Vec::new();
    for p in paths {
        let label = stem(p);
        if let Some((_, other)) = labels.iter().find(|(l, q)| *l == label && *q != p) {
            return config(format!(
                "duplicate part label '{label}' ({} and {})",
                other.display(),
                p.display()
            ));
        }
        labels.push((label, p));
        parts.push(load_circuit(p)?);
    }
    let parts: Vec<Circuit> = std::iter::repeat_n(parts, copies).flatten().collect();
    let n = parts.len();
    let (c, map) = splice(&SpliceSpec::new(parts, resets)).code(CONFIG)?;
    write_composite(out, name, &c, &map)?;
    let g = c.census();
    stdout(&format!(
        "{name}: {n} parts, width {}, {} resets, {} ops\n",
        c.width(),
        g.n_reset,
        c.ops().len()
    ))
}

fn bill(
    input: &Path,
    model_name: &str,
    shots: u64,
    time: Option<u64>,
    parts: u64,
    catalog: Option<&Path>,
) -> Result<()> {
    if shots == 0 || parts == 0 {
        return config("--shots and --parts must be at least 1");
    }
    let catalog = load_catalog(catalog)?;
    let m = model(&catalog, model_name)?;
    let c = load_circuit(input)?;
    let time = match time {
        Some(t) => t,
        None => fit_time_model(&BELL_TIME_CALIBRATION)
            .code(CONFIG)?
            .estimate_seconds(parts),
    };
    let receipt = TaskReceipt::new(shots, time, c.census(), parts);
    let cost = billing::price(m, &receipt).code(CONFIG)?;
    stdout(&format!(
        "model,kind,shots,parts,eff_shots,time_s,cost,currency\n{model_name},{},{shots},{parts},{},{time},{},{}\n",
        m.kind(),
        receipt.effective_shots(),
        cost.format_trimmed(2),
        cost.currency()
    ))
}

#[derive(Debug, Deserialize)]
struct ReceiptCsv {
    label: String,
    parts: u64,
    resets: u64,
    shots: u64,
    wall_time_s: u64,
}

fn read_receipts(path: &Path) -> Result<Vec<ReceiptRow>> {
    let text = read(path)?;
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for (i, rec) in rdr.deserialize::<ReceiptCsv>().enumerate() {
        let row = i + 1;
        let r = rec
            .with_context(|| format!("{}: row {row}", path.display()))
            .code(MALFORMED)?;
        if r.parts == 0 || r.shots == 0 {
            return Err(Failure {
                code: MALFORMED,
                error: anyhow!(
                    "{}: row {row}: parts and shots must be at least 1",
                    path.display()
                ),
            });
        }
        rows.push(ReceiptRow {
            label: r.label,
            parts: r.parts,
            resets: r.resets,
            shots: r.shots,
            wall_time_s: r.wall_time_s,
        });
    }
    Ok(rows)
}

fn report(
    receipts: &Path,
    model_name: &str,
    baseline: &str,
    out: Option<&Path>,
    catalog: Option<&Path>,
) -> Result<()> {
    let catalog = load_catalog(catalog)?;
    let m = model(&catalog, model_name)?;
    let baseline = Money::parse(baseline, m.currency())
        .context("--baseline")
        .code(CONFIG)?;
    let rows = read_receipts(receipts)?;
    let table = billing::report(&rows, m, baseline).code(CONFIG)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(REPORT_COLUMNS).code(CONFIG)?;
    for r in &table {
        w.write_record(r.fields()).code(CONFIG)?;
    }
    let bytes = w.into_inner().map_err(|e| anyhow!("{e}")).code(CONFIG)?;
    let text = String::from_utf8(bytes).code(CONFIG)?;
    match out {
        Some(p) => write(p, &text),
        None => stdout(&text),
    }
}

/// Non-negative decimal with up to 6 places.
fn parse_fraction(s: &str) -> Result<Exact> {
    match Money::parse(s, Currency::Credits) {
        Ok(m) if m.micros() >= 0 => Ok(Exact::new(m.micros() as i128, 1_000_000)),
        _ => config(format!("threshold '{s}' is not a non-negative decimal")),
    }
}

fn detect(
    input: &Path,
    billed: Option<&str>,
    fair: &str,
    threshold: &str,
    catalog: Option<&Path>,
) -> Result<()> {
    let threshold = parse_fraction(threshold)?;
    let c = load_circuit(input)?;
    let mut findings = guard::scan(&c);
    if let Some(billed) = billed {
        let catalog = load_catalog(catalog)?;
        let fair = model(&catalog, fair)?;
        let billed = Money::parse(billed, fair.currency())
            .context("--billed")
            .code(CONFIG)?;
        findings.extend(guard::audit(&c, billed, fair, threshold).code(CONFIG)?);
    }
    let mut text: String = findings
        .iter()
        .map(|f| format!("{}\n", f.report_line()))
        .collect();
    text.push_str(&format!("# findings: {}\n", findings.len()));
    stdout(&text)
}

fn mix(
    preset: Option<&str>,
    size: Option<usize>,
    seed: u64,
    resets: usize,
    out: &Path,
) -> Result<()> {
    let (name, kinds) = match (preset, size) {
        (Some(p), _) => (p.to_string(), bench::preset_mix(p).code(CONFIG)?),
        (None, Some(n)) => {
            let spec = MixSpec {
                pool: bench::mix_pool(),
                count: n,
                seed,
            };
            (
                format!("mix{n}_seed{seed}"),
                bench::generate_mix(&spec).code(CONFIG)?,
            )
        }
        (None, None) => return config("give --preset NAME or --size N"),
    };
    let parts: Vec<Circuit> = kinds
        .iter()
        .map(bench::build)
        .collect::<std::result::Result<_, _>>()
        .code(CONFIG)?;
    let (c, map) = splice(&SpliceSpec::new(parts, resets)).code(CONFIG)?;
    write_composite(out, &name, &c, &map)?;
    let list: String = kinds.iter().map(|k| format!("{}\n", k.slug())).collect();
    write(&out.join(format!("{name}.list")), &list)?;
    stdout(&list)
}

fn fixtures(out: &Path) -> Result<()> {
    let all = resetlab::fixtures::all();
    for f in &all {
        write(&out.join(&f.path), &f.contents)?;
    }
    stdout(&format!(
        "wrote {} files under {}\n",
        all.len(),
        out.display()
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn noise_spec() {
        let m = parse_noise("eps_read=0.1,eps_condx=0.05").unwrap();
        assert_eq!(m.base.read_1to0, 0.1);
        assert_eq!(m.base.read_0to1, 0.1);
        assert_eq!(m.base.condx, 0.05);
        let m = parse_noise("eps_condx=0").unwrap();
        assert_eq!(m.base.read_1to0, sim::DEFAULT_READOUT_ERROR);
        assert!(parse_noise("eps_read=2").is_err());
        assert!(parse_noise("shots=3").is_err());
        assert!(parse_noise("eps_read").is_err());
    }

    #[test]
    fn part_paths() {
        assert_eq!(
            part_path(Path::new("out/x.counts"), 2),
            Path::new("out/x.part2.counts")
        );
        assert_eq!(part_path(Path::new("x"), 0), Path::new("x.part0"));
    }

    #[test]
    fn thresholds() {
        assert_eq!(parse_fraction("0.5").ok(), Some(Exact::new(1, 2)));
        assert_eq!(parse_fraction("0").ok(), Some(Exact::from_integer(0)));
        assert!(parse_fraction("-1").is_err());
        assert!(parse_fraction("x").is_err());
    }
}
