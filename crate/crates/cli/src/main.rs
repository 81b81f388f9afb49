//! `ndi`: node dissimilarity analysis from the command line.
//!
//! Exit codes: 0 on success, 1 on input errors (unreadable or malformed
//! files, disconnected graphs, bad arguments), 2 when an eigensolver fails to
//! converge.

mod svg;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use ndi_core::analysis::{load_manifest, read_summaries, write_summaries, CorrelationStudy};
use ndi_core::centrality::centrality_table;
use ndi_core::nsi::{compute_nsi_from_table, DEFAULT_EPSILON};
use ndi_core::report::{format_number, ndi_report_json, nsi_json, round_significant};
use ndi_core::{
    batch_evaluate, compute_ndi, correlation_study, AveragingConvention, BatchEntry, BatchOptions,
    Graph, NdiError, NdiOptions, NetworkSummary, ThresholdMethod, VarianceDivisor,
};

#[derive(Parser)]
#[command(
    name = "ndi",
    version,
    about = "Node dissimilarity analysis for undirected networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Network- and node-level dissimilarity index of one graph
    Ndi {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        pipeline: PipelineArgs,
        #[command(flatten)]
        output: OutputArgs,
        /// Write a plot of the sorted node-level values
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Write the node dissimilarity matrix as headerless CSV
        #[arg(long)]
        ndm_csv: Option<PathBuf>,
    },
    /// Unit-disk node similarity index of one graph
    Nsi {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        nsi: NsiArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Per-node degree, eigenvector, betweenness and closeness centrality
    Centrality {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Evaluate every graph in a `name,path` manifest and fit NDI against
    /// the other network measures
    Batch {
        /// Manifest CSV with header `name,path`
        #[arg(
            required_unless_present = "fit_from_csv",
            conflicts_with = "fit_from_csv"
        )]
        manifest: Option<PathBuf>,
        /// Skip evaluation and fit a `name,nodes,edges,lambda_sp,ndi,nsi` table
        #[arg(long)]
        fit_from_csv: Option<PathBuf>,
        /// Analyze the largest connected component of each graph
        #[arg(long)]
        lcc: bool,
        #[command(flatten)]
        pipeline: PipelineArgs,
        #[command(flatten)]
        nsi: NsiArgs,
        #[command(flatten)]
        output: OutputArgs,
        /// Directory for the two scatter plots
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Also write the correlation study as JSON
        #[arg(long)]
        study: Option<PathBuf>,
    },
    /// Linear fits over a summary table
    Fit {
        /// CSV with header `name,nodes,edges,lambda_sp,ndi,nsi`
        input: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Args)]
struct GraphArgs {
    /// Whitespace-separated edge list; `#` and `%` start comment lines
    input: PathBuf,
    /// Analyze the largest connected component instead of rejecting
    /// disconnected input
    #[arg(long)]
    lcc: bool,
}

#[derive(Args)]
struct PipelineArgs {
    /// Denominator of the network-level ratio
    #[arg(long, value_enum, default_value_t = Convention::RowMean)]
    convention: Convention,
    /// Minimum score variance for a principal component to be kept
    #[arg(long, default_value_t = 1.0)]
    retention: f64,
    /// Variance divisor used for standardization
    #[arg(long, value_enum, default_value_t = Divisor::Sample)]
    divisor: Divisor,
}

impl PipelineArgs {
    fn options(&self, largest_component: bool) -> NdiOptions {
        NdiOptions {
            retention_threshold: self.retention,
            convention: self.convention.into(),
            divisor: self.divisor.into(),
            largest_component,
        }
    }
}

#[derive(Args)]
struct NsiArgs {
    /// How the minimum connectivity threshold is found
    #[arg(long, value_enum, default_value_t = Method::Mst)]
    method: Method,
    /// Bracket width at which the binary search stops
    #[arg(long, default_value_t = DEFAULT_EPSILON)]
    epsilon: f64,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Significant digits in numeric output; 0 prints full precision
    #[arg(long, default_value_t = 6)]
    precision: usize,
    /// Write to this file instead of standard output
    #[arg(short, long)]
    output: Option<PathBuf>,
}

impl OutputArgs {
    fn digits(&self) -> Option<usize> {
        (self.precision > 0).then_some(self.precision)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Convention {
    RowMean,
    NondiagNm1,
    EntryMean,
}

impl From<Convention> for AveragingConvention {
    fn from(c: Convention) -> Self {
        match c {
            Convention::RowMean => AveragingConvention::RowMean,
            Convention::NondiagNm1 => AveragingConvention::NondiagOverNMinus1,
            Convention::EntryMean => AveragingConvention::EntryMean,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Divisor {
    Sample,
    Population,
}

impl From<Divisor> for VarianceDivisor {
    fn from(d: Divisor) -> Self {
        match d {
            Divisor::Sample => VarianceDivisor::Sample,
            Divisor::Population => VarianceDivisor::Population,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Mst,
    Bsearch,
}

impl From<Method> for ThresholdMethod {
    fn from(m: Method) -> Self {
        match m {
            Method::Mst => ThresholdMethod::MstBottleneck,
            Method::Bsearch => ThresholdMethod::BinarySearch,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

enum Failure {
    Input(String),
    Numerical(String),
}

impl From<NdiError> for Failure {
    fn from(e: NdiError) -> Self {
        if let NdiError::Disconnected { components } = e {
            return Failure::Input(format!(
                "graph has {components} components; rerun with --lcc to analyze the largest one"
            ));
        }
        if e.is_numerical() {
            Failure::Numerical(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

type CliResult<T> = Result<T, Failure>;

fn io_failure(path: &Path, e: io::Error) -> Failure {
    Failure::Input(format!("{}: {e}", path.display()))
}

fn read_graph(path: &Path) -> CliResult<Graph> {
    let text = fs::read_to_string(path).map_err(|e| io_failure(path, e))?;
    let g = Graph::parse_edge_list(&text)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let w = g.warnings();
    if w.self_loops > 0 {
        eprintln!("warning: dropped {} self-loop(s)", w.self_loops);
    }
    if w.duplicate_edges > 0 {
        eprintln!("warning: merged {} duplicate edge(s)", w.duplicate_edges);
    }
    Ok(g)
}

/// The graph to analyze: its largest component under `--lcc`, otherwise the
/// whole graph, which must then be connected.
fn prepare(graph: &GraphArgs) -> CliResult<Graph> {
    let g = read_graph(&graph.input)?;
    if graph.lcc {
        return Ok(g.largest_component());
    }
    g.require_connected()?;
    Ok(g)
}

fn write_file(path: &Path, bytes: &[u8]) -> CliResult<()> {
    fs::write(path, bytes).map_err(|e| io_failure(path, e))
}

fn emit(output: &OutputArgs, bytes: &[u8]) -> CliResult<()> {
    match &output.output {
        Some(path) => write_file(path, bytes),
        None => io::stdout()
            .write_all(bytes)
            .map_err(|e| Failure::Input(format!("stdout: {e}"))),
    }
}

fn json_bytes(value: &Value) -> Vec<u8> {
    let mut bytes = serde_json::to_vec_pretty(value).expect("JSON values serialize");
    bytes.push(b'\n');
    bytes
}

fn csv_bytes(rows: &[Vec<String>]) -> CliResult<Vec<u8>> {
    let mut wtr = csv_writer();
    for row in rows {
        wtr.write_record(row)
            .map_err(|e| Failure::Input(e.to_string()))?;
    }
    wtr.into_inner().map_err(|e| Failure::Input(e.to_string()))
}

fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::Writer::from_writer(Vec::new())
}

fn cmd_ndi(
    graph: &GraphArgs,
    pipeline: &PipelineArgs,
    output: &OutputArgs,
    svg_path: Option<&Path>,
    ndm_csv: Option<&Path>,
) -> CliResult<()> {
    let g = read_graph(&graph.input)?;
    let report = compute_ndi(&g, &pipeline.options(graph.lcc))?;
    let digits = output.digits();

    let bytes = match output.format {
        Format::Json => json_bytes(&ndi_report_json(&report, digits)),
        Format::Csv => {
            let mut header = vec!["node".to_string()];
            header.extend(report.table.column_names().iter().cloned());
            header.extend(["node_ndi", "rank", "category"].map(String::from));
            let ranks = report.ranks();
            let mut rows = vec![header];
            for i in 0..report.n {
                let mut row = vec![report.labels()[i].clone()];
                row.extend(
                    report
                        .table
                        .values()
                        .row(i)
                        .iter()
                        .map(|&x| format_number(x, digits)),
                );
                row.push(format_number(report.node_ndi[i], digits));
                row.push(ranks[i].to_string());
                row.push(
                    if report.is_dissimilar(i) {
                        "dissimilar"
                    } else {
                        "similar"
                    }
                    .into(),
                );
                rows.push(row);
            }
            csv_bytes(&rows)?
        }
    };
    emit(output, &bytes)?;

    if let Some(path) = ndm_csv {
        write_file(path, report.ndm.to_csv(digits).as_bytes())?;
    }
    if let Some(path) = svg_path {
        write_file(path, svg::sorted_node_ndi(&report).as_bytes())?;
    }
    Ok(())
}

fn cmd_nsi(graph: &GraphArgs, nsi: &NsiArgs, output: &OutputArgs) -> CliResult<()> {
    let g = prepare(graph)?;
    let table = centrality_table(&g)?;
    let result = compute_nsi_from_table(&table, nsi.method.into(), nsi.epsilon)?;
    let digits = output.digits();
    let bytes = match output.format {
        Format::Json => json_bytes(&nsi_json(&result, digits)),
        Format::Csv => csv_bytes(&[
            vec!["min_threshold".into(), "nsi".into(), "method".into()],
            vec![
                format_number(result.min_threshold, digits),
                format_number(result.nsi, digits),
                match result.method {
                    ThresholdMethod::BinarySearch => "binary_search".into(),
                    ThresholdMethod::MstBottleneck => "mst_bottleneck".into(),
                },
            ],
        ])?,
    };
    emit(output, &bytes)
}

fn cmd_centrality(graph: &GraphArgs, output: &OutputArgs) -> CliResult<()> {
    let g = prepare(graph)?;
    let table = centrality_table(&g)?;
    let digits = output.digits();
    let bytes = match output.format {
        Format::Csv => {
            let mut buf = Vec::new();
            table.write_csv(&mut buf, digits)?;
            buf
        }
        Format::Json => {
            let nodes: Vec<Value> = (0..table.n())
                .map(|i| {
                    let mut node = serde_json::Map::new();
                    node.insert(
                        "label".into(),
                        Value::String(table.node_labels()[i].clone()),
                    );
                    for (name, &x) in table.column_names().iter().zip(table.values().row(i)) {
                        node.insert(name.clone(), rounded(x, digits));
                    }
                    Value::Object(node)
                })
                .collect();
            json_bytes(&Value::Array(nodes))
        }
    };
    emit(output, &bytes)
}

fn rounded(x: f64, digits: Option<usize>) -> Value {
    serde_json::Number::from_f64(round_significant(x, digits))
        .map(Value::Number)
        .unwrap_or(Value::Null)
}

fn summaries_json(summaries: &[NetworkSummary], digits: Option<usize>) -> Value {
    summaries
        .iter()
        .map(|s| {
            json!({
                "name": s.name,
                "nodes": s.n,
                "edges": s.edges,
                "lambda_sp": rounded(s.lambda_sp, digits),
                "ndi": rounded(s.ndi, digits),
                "nsi": rounded(s.nsi, digits),
            })
        })
        .collect()
}

fn study_json(study: &CorrelationStudy, digits: Option<usize>) -> Value {
    json!({
        "fits": study.fits.iter().map(|f| json!({
            "x": f.x,
            "y": f.y,
            "slope": rounded(f.fit.slope, digits),
            "intercept": rounded(f.fit.intercept, digits),
            "r_squared": rounded(f.fit.r_squared, digits),
        })).collect::<Vec<_>>(),
        "omitted": study.omitted.iter().map(|o| json!({
            "x": o.x,
            "y": o.y,
            "reason": o.reason,
        })).collect::<Vec<_>>(),
    })
}

fn study_csv(study: &CorrelationStudy, digits: Option<usize>) -> CliResult<Vec<u8>> {
    let mut rows = vec![["x", "y", "slope", "intercept", "r_squared"]
        .map(String::from)
        .to_vec()];
    for f in &study.fits {
        rows.push(vec![
            f.x.clone(),
            f.y.clone(),
            format_number(f.fit.slope, digits),
            format_number(f.fit.intercept, digits),
            format_number(f.fit.r_squared, digits),
        ]);
    }
    csv_bytes(&rows)
}

fn load_summaries(path: &Path) -> CliResult<Vec<NetworkSummary>> {
    let file = fs::File::open(path).map_err(|e| io_failure(path, e))?;
    read_summaries(file).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn scatter_plots(
    dir: &Path,
    summaries: &[NetworkSummary],
    study: Option<&CorrelationStudy>,
) -> CliResult<()> {
    fs::create_dir_all(dir).map_err(|e| io_failure(dir, e))?;
    let names: Vec<String> = summaries.iter().map(|s| s.name.clone()).collect();
    let ndi: Vec<f64> = summaries.iter().map(|s| s.ndi).collect();
    let panels: [(&str, &str, Vec<f64>); 2] = [
        (
            "lambda_sp",
            "spectral radius ratio",
            summaries.iter().map(|s| s.lambda_sp).collect(),
        ),
        ("nsi", "NSI", summaries.iter().map(|s| s.nsi).collect()),
    ];
    for (key, label, xs) in panels {
        let fit = study.and_then(|s| s.fit(key, "ndi"));
        let doc = svg::scatter(
            &format!("Network-level NDI vs. {label}"),
            label,
            "NDI",
            &xs,
            &ndi,
            &names,
            fit,
        );
        write_file(&dir.join(format!("ndi_vs_{key}.svg")), doc.as_bytes())?;
    }
    Ok(())
}

struct BatchRequest<'a> {
    manifest: Option<&'a Path>,
    fit_from_csv: Option<&'a Path>,
    options: BatchOptions,
    output: &'a OutputArgs,
    svg_dir: Option<&'a Path>,
    study_path: Option<&'a Path>,
}

fn cmd_batch(req: BatchRequest<'_>) -> CliResult<()> {
    let digits = req.output.digits();
    let (summaries, failed) = match (req.fit_from_csv, req.manifest) {
        (Some(csv), _) => (load_summaries(csv)?, Vec::new()),
        (None, Some(manifest)) => {
            let entries = load_manifest(manifest)
                .map_err(|e| Failure::Input(format!("{}: {e}", manifest.display())))?;
            let mut summaries = Vec::new();
            let mut failed = Vec::new();
            for entry in batch_evaluate(&entries, &req.options) {
                match entry {
                    BatchEntry::Evaluated(s) => summaries.push(s),
                    BatchEntry::Failed { name, path, error } => {
                        eprintln!("error: {name} ({}): {error}", path.display());
                        failed.push(json!({ "name": name, "path": path, "error": error }));
                    }
                }
            }
            (summaries, failed)
        }
        (None, None) => {
            return Err(Failure::Input(
                "a manifest or --fit-from-csv is required".into(),
            ))
        }
    };

    let study = if summaries.len() >= 3 {
        Some(correlation_study(&summaries)?)
    } else {
        eprintln!(
            "note: {} network(s) evaluated; fits need at least 3",
            summaries.len()
        );
        None
    };
    if let Some(study) = &study {
        for o in &study.omitted {
            eprintln!("note: fit {} -> {} omitted: {}", o.x, o.y, o.reason);
        }
    }

    let bytes = match req.output.format {
        Format::Json => json_bytes(&json!({
            "networks": summaries_json(&summaries, digits),
            "failed": failed,
            "study": study.as_ref().map(|s| study_json(s, digits)),
        })),
        Format::Csv => {
            let mut buf = Vec::new();
            write_summaries(&mut buf, &summaries, digits)?;
            buf
        }
    };
    emit(req.output, &bytes)?;

    if let (Some(path), Some(study)) = (req.study_path, &study) {
        write_file(path, &json_bytes(&study_json(study, digits)))?;
    }
    if let Some(dir) = req.svg_dir {
        scatter_plots(dir, &summaries, study.as_ref())?;
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Input(format!(
            "{} of the manifest entries failed",
            failed.len()
        )))
    }
}

fn cmd_fit(input: &Path, output: &OutputArgs) -> CliResult<()> {
    let study = correlation_study(&load_summaries(input)?)?;
    let digits = output.digits();
    let bytes = match output.format {
        Format::Json => json_bytes(&study_json(&study, digits)),
        Format::Csv => study_csv(&study, digits)?,
    };
    emit(output, &bytes)
}

fn run(cli: Cli) -> CliResult<()> {
    match &cli.command {
        Command::Ndi {
            graph,
            pipeline,
            output,
            svg,
            ndm_csv,
        } => cmd_ndi(graph, pipeline, output, svg.as_deref(), ndm_csv.as_deref()),
        Command::Nsi { graph, nsi, output } => cmd_nsi(graph, nsi, output),
        Command::Centrality { graph, output } => cmd_centrality(graph, output),
        Command::Batch {
            manifest,
            fit_from_csv,
            lcc,
            pipeline,
            nsi,
            output,
            svg,
            study,
        } => cmd_batch(BatchRequest {
            manifest: manifest.as_deref(),
            fit_from_csv: fit_from_csv.as_deref(),
            options: BatchOptions {
                ndi: pipeline.options(*lcc),
                nsi_method: nsi.method.into(),
                epsilon: nsi.epsilon,
            },
            output,
            svg_dir: svg.as_deref(),
            study_path: study.as_deref(),
        }),
        Command::Fit { input, output } => cmd_fit(input, output),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // clap reports usage errors with 2, which is reserved here for
            // numerical failures
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Numerical(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
