use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use iface_core::analysis::ReportStats;
use iface_core::hierarchy::{sub_h, RedundantEdge};
use iface_core::java::scan_paths;
use iface_core::model_json::{load_model_json, model_to_json};
use iface_core::report::{validate_threshold, CorpusStats, DEFAULT_THRESHOLD};
use iface_core::similarity::{partners, PairScore};
use iface_core::{analyze, AnalysisConfig, CodeModel, ExclusionPolicy, TypeDecl, TypeName};

#[derive(Parser, Debug)]
#[command(name = "iface-metrics", version, about = "Interface design metrics for Java code bases")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute all metrics, findings and suggestions
    Analyze {
        #[command(flatten)]
        input: InputArgs,
        /// Exit with status 1 when any finding is reported
        #[arg(long)]
        fail_on_findings: bool,
        /// Also write report.json, similarity.csv and hierarchy.csv here
        #[arg(long, value_name = "DIR")]
        output_dir: Option<PathBuf>,
    },
    /// Corpus statistics
    Stats {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Interfaces sharing signatures with INTERFACE, most similar first
    Similar {
        #[command(flatten)]
        input: InputArgs,
        interface: String,
    },
    /// Sub-hierarchy bag and IRIH of INTERFACE
    Hierarchy {
        #[command(flatten)]
        input: InputArgs,
        interface: String,
    },
    /// Write the unfiltered code model as JSON
    ExportModel {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
    },
}

#[derive(Args, Debug)]
struct InputArgs {
    /// Java source trees or files, or model files with --model-json
    #[arg(required = true, value_name = "PATH")]
    inputs: Vec<PathBuf>,
    /// Read inputs as iface-model/1 JSON documents
    #[arg(long)]
    model_json: bool,
    #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
    threshold: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Keep test classes and test packages
    #[arg(long)]
    no_test_exclude: bool,
    /// Skip source files matching this glob (repeatable)
    #[arg(long, value_name = "GLOB")]
    exclude: Vec<String>,
    /// Count static interface methods as part of the interface
    #[arg(long)]
    include_static_methods: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Table,
}

impl InputArgs {
    fn policy(&self) -> ExclusionPolicy {
        ExclusionPolicy {
            exclude_tests: !self.no_test_exclude,
            exclude_globs: self.exclude.clone(),
            include_static_interface_methods: self.include_static_methods,
            ..ExclusionPolicy::default()
        }
    }

    fn config(&self) -> Result<AnalysisConfig> {
        let threshold = validate_threshold(self.threshold)?;
        Ok(AnalysisConfig {
            threshold,
            policy: self.policy(),
        })
    }

    /// The unfiltered model.
    fn load(&self) -> Result<CodeModel> {
        let decls = if self.model_json {
            let mut decls: Vec<TypeDecl> = Vec::new();
            for path in &self.inputs {
                decls.extend(load_model_json(path)?);
            }
            decls
        } else {
            let scan = scan_paths(&self.inputs, &self.policy())?;
            for warning in &scan.warnings {
                eprintln!("warning: {warning}");
            }
            scan.decls
        };
        Ok(CodeModel::build(decls)?)
    }

    fn system_name(&self) -> String {
        let first = &self.inputs[0];
        let name = first.file_stem().or_else(|| first.file_name());
        name.map_or_else(|| first.display().to_string(), |n| n.to_string_lossy().into_owned())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Analyze {
            input,
            fail_on_findings,
            output_dir,
        } => cmd_analyze(&input, fail_on_findings, output_dir.as_deref()),
        Command::Stats { input } => cmd_stats(&input),
        Command::Similar { input, interface } => cmd_similar(&input, &interface),
        Command::Hierarchy { input, interface } => cmd_hierarchy(&input, &interface),
        Command::ExportModel { input, out } => cmd_export_model(&input, &out),
    }
}

fn cmd_analyze(input: &InputArgs, fail_on_findings: bool, output_dir: Option<&Path>) -> Result<ExitCode> {
    let config = input.config()?;
    let model = input.load()?;
    let analysis = analyze(&model, &config)?;
    let json = analysis.report_json();
    let similarity_csv = analysis.similarity_csv();
    let hierarchy_csv = analysis.hierarchy_csv();

    if let Some(dir) = output_dir {
        fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
        for (file, text) in [
            ("report.json", &json),
            ("similarity.csv", &similarity_csv),
            ("hierarchy.csv", &hierarchy_csv),
        ] {
            let path = dir.join(file);
            fs::write(&path, text).with_context(|| format!("cannot write {}", path.display()))?;
        }
    }

    match input.format {
        Format::Json => print!("{json}"),
        Format::Csv => print!("{similarity_csv}\n{hierarchy_csv}"),
        Format::Table => {
            let report = analysis.report();
            let mut out = String::new();
            writeln!(out, "{}", CorpusStats::TABLE_HEADER)?;
            writeln!(out, "{}", analysis.stats.table_row(&input.system_name()))?;
            writeln!(
                out,
                "IIS {:.4}  IIC {:.4}  IRIH {:.4}",
                report.stats.system_iis, report.stats.system_iic, report.stats.system_irih
            )?;
            writeln!(out, "\nfindings: {}", report.findings.len())?;
            for finding in &report.findings {
                let subjects: Vec<&str> = finding.subjects.iter().map(TypeName::as_str).collect();
                writeln!(out, "  {:<22} {:.4}  {}", finding.kind.to_string(), finding.score, subjects.join(" "))?;
            }
            writeln!(out, "\nsuggestions: {}", report.suggestions.len())?;
            for suggestion in &report.suggestions {
                let subjects: Vec<&str> = suggestion.subjects.iter().map(TypeName::as_str).collect();
                writeln!(out, "  {:<22} {}", suggestion.action.to_string(), subjects.join(" "))?;
                writeln!(out, "      {}", suggestion.rationale)?;
            }
            print!("{out}");
        }
    }

    if fail_on_findings && !analysis.findings.is_empty() {
        return Ok(ExitCode::from(1));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_stats(input: &InputArgs) -> Result<ExitCode> {
    let config = input.config()?;
    let model = input.load()?;
    let stats: ReportStats = analyze(&model, &config)?.report().stats;
    match input.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&stats)?),
        Format::Csv => {
            let c = &stats.corpus;
            let opt = |v: Option<usize>| v.map_or_else(String::new, |v| v.to_string());
            println!("system,classes,interfaces,pct_classes_implementing,size_min,size_max,size_sum,system_iis,system_iic,system_irih");
            println!(
                "{},{},{},{},{},{},{},{},{},{}",
                input.system_name(),
                c.class_count,
                c.interface_count,
                c.pct_classes_implementing,
                opt(c.size_min),
                opt(c.size_max),
                c.size_sum,
                stats.system_iis,
                stats.system_iic,
                stats.system_irih
            );
        }
        Format::Table => {
            println!("{}", CorpusStats::TABLE_HEADER);
            println!("{}", stats.corpus.table_row(&input.system_name()));
        }
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct SimilarOutput<'a> {
    interface: &'a TypeName,
    size: usize,
    partners: Vec<PairScore>,
}

fn cmd_similar(input: &InputArgs, name: &str) -> Result<ExitCode> {
    let config = input.config()?;
    let model = input.load()?.filter(&config.policy);
    let name = lookup_interface(&model, name)?;
    let mut rows = partners(&model, &name)?;
    rows.sort_by(|x, y| y.is.total_cmp(&x.is).then_with(|| x.b.cmp(&y.b)));
    let size = model.interface_size(&name)?;
    match input.format {
        Format::Json => {
            let out = SimilarOutput {
                interface: &name,
                size,
                partners: rows,
            };
            println!("{}", serde_json::to_string_pretty(&out)?);
        }
        Format::Csv => {
            println!("partner,size,shared,is,ic,ic_reverse");
            for row in &rows {
                let other = row.union_size + row.shared - size;
                println!("{},{},{},{},{},{}", row.b, other, row.shared, row.is, row.ic_ab, row.ic_ba);
            }
        }
        Format::Table => {
            println!("{name} ({size} signatures), {} partners", rows.len());
            for row in &rows {
                println!("  IS {:.4}  IC {:.4}  IC' {:.4}  shared {:>3}  {}", row.is, row.ic_ab, row.ic_ba, row.shared, row.b);
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct HierarchyOutput<'a> {
    interface: &'a TypeName,
    total: u64,
    distinct: usize,
    rep: u64,
    irih: f64,
    members: Vec<Member<'a>>,
    redundant_edges: Vec<RedundantEdge>,
}

#[derive(Serialize)]
struct Member<'a> {
    name: &'a TypeName,
    count: u64,
}

fn cmd_hierarchy(input: &InputArgs, name: &str) -> Result<ExitCode> {
    let config = input.config()?;
    let model = input.load()?.filter(&config.policy);
    let name = lookup_interface(&model, name)?;
    let bag = sub_h(&model, &name)?;
    let redundant: Vec<RedundantEdge> = iface_core::hierarchy::redundant_edges(&model)
        .into_iter()
        .filter(|edge| edge.interface == name)
        .collect();
    let out = HierarchyOutput {
        interface: &name,
        total: bag.total,
        distinct: bag.distinct(),
        rep: bag.rep_total(),
        irih: bag.irih(),
        members: bag.counts.iter().map(|(name, &count)| Member { name, count }).collect(),
        redundant_edges: redundant,
    };
    match input.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&out)?),
        Format::Csv => {
            println!("member,count");
            for member in &out.members {
                println!("{},{}", member.name, member.count);
            }
        }
        Format::Table => {
            println!("{name}");
            println!("  total {}  distinct {}  rep {}  IRIH {:.4}", out.total, out.distinct, out.rep, out.irih);
            for member in &out.members {
                println!("  {:>4}  {}", member.count, member.name);
            }
            for edge in &out.redundant_edges {
                let path: Vec<&str> = edge.witness.iter().map(TypeName::as_str).collect();
                println!("  redundant {} -> {} via {}", edge.subtype, edge.interface, path.join(" -> "));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_export_model(input: &InputArgs, out: &Path) -> Result<ExitCode> {
    let model = input.load()?;
    fs::write(out, model_to_json(model.types())).with_context(|| format!("cannot write {}", out.display()))?;
    eprintln!("wrote {} types to {}", model.len(), out.display());
    Ok(ExitCode::SUCCESS)
}

/// Accepts a qualified name or a simple name that is unique among interfaces.
fn lookup_interface(model: &CodeModel, query: &str) -> Result<TypeName> {
    if let Ok(name) = TypeName::new(query) {
        if model.interface(&name).is_ok() {
            return Ok(name);
        }
    }
    let by_simple: Vec<&TypeName> = model.interfaces().map(|d| &d.name).filter(|n| n.simple() == query).collect();
    if let [only] = by_simple.as_slice() {
        return Ok((*only).clone());
    }
    if by_simple.len() > 1 {
        let names: Vec<&str> = by_simple.iter().map(|n| n.as_str()).collect();
        bail!("`{query}` is ambiguous: {}", names.join(", "));
    }
    let suggestions = nearest_names(model, query, 5);
    if suggestions.is_empty() {
        bail!("no interface named `{query}`");
    }
    bail!("no interface named `{query}`; did you mean: {}", suggestions.join(", "))
}

fn nearest_names(model: &CodeModel, query: &str, limit: usize) -> Vec<String> {
    let mut scored: Vec<(f64, &str)> = model
        .interfaces()
        .map(|d| {
            let full = strsim::jaro_winkler(query, d.name.as_str());
            let simple = strsim::jaro_winkler(query, d.name.simple());
            (full.max(simple), d.name.as_str())
        })
        .filter(|(score, _)| *score >= 0.7)
        .collect();
    scored.sort_by(|a, b| b.0.total_cmp(&a.0).then_with(|| a.1.cmp(b.1)));
    scored.into_iter().take(limit).map(|(_, name)| name.to_string()).collect()
}
