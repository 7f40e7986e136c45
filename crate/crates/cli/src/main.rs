use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use snarkforge_core::families::{
    build_halin, composite_family, even_order_family, halin_poles, halin_snark, treelike,
    verify_certificate, windmill, Certificate, CompositeVariant, FamilyMember, HalinFragment, Orientation, TreeSpec,
};
use snarkforge_core::flows::{circular_flow_ladder, perfect_matching_index, PmiOptions, PmiValue, PmiWitness};
use snarkforge_core::multipole::{
    cyclic_edge_connectivity_at_least, emit_dot, emit_graph6, emit_json, girth, is_bipartite, CYCLIC_CUT_CAP,
};
use snarkforge_core::transitions::{
    classify_dipole, transition_relation, weighted_transition_relation, Named, RelationOptions,
};
use snarkforge_core::{Error, Graph, Multipole};

mod input;

use input::{load_graph, parse_fragments, parse_path};

/// Perfect matching covers, transition relations and snark families.
#[derive(Parser, Debug)]
#[command(name = "snarkforge", version)]
struct Cli {
    /// Worker threads for the parallel searches.
    #[arg(long, global = true, env = "SNARKFORGE_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a member of a snark family with its certificate.
    Generate(GenerateArgs),
    /// Perfect matching index with a witness.
    Pmi(PmiArgs),
    /// Transition relation of the dipole left by removing a path.
    Transitions(TransitionsArgs),
    /// Circular nowhere-zero flow ladder.
    Cfn(CfnArgs),
    /// Replay a certificate against a graph.
    Verify(VerifyArgs),
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Family {
    Windmill,
    Treelike,
    Halin,
    EvenOrder,
    Composite,
}

#[derive(Copy, Clone, Debug, Default, ValueEnum)]
enum GraphFormat {
    #[default]
    Graph6,
    Dot,
    Json,
}

#[derive(Args, Debug)]
struct GenerateArgs {
    family: Family,
    /// Order, for even-order.
    #[arg(long)]
    n: Option<usize>,
    /// Comma-separated fragments: petersen, heawood or block=<graph>.
    #[arg(long)]
    fragments: Option<String>,
    /// Tree as nested JSON lists, e.g. [[],[],[[],[]]].
    #[arg(long)]
    tree: Option<String>,
    /// Caterpillar tree with this many internal vertices.
    #[arg(long, conflicts_with = "tree")]
    caterpillar: Option<usize>,
    #[arg(long, value_enum, default_value = "forward")]
    orientation: OrientationArg,
    /// Composite: g1 (decollineator then Halin collineators) or g2
    /// (extended Halin poles).
    #[arg(long, value_enum, default_value = "g1")]
    variant: VariantArg,
    /// Composite: number of parts.
    #[arg(long, default_value_t = 2)]
    parts: usize,
    /// Write <prefix>.g6 (or .dot/.json), <prefix>.cert.json and
    /// <prefix>.meta.json instead of printing the graph.
    #[arg(long, short)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "graph6")]
    format: GraphFormat,
    /// Replay the certificate before writing.
    #[arg(long)]
    verify: bool,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum OrientationArg {
    Forward,
    Reverse,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum VariantArg {
    G1,
    G2,
}

#[derive(Args, Debug)]
struct PmiArgs {
    /// graph6 or JSON file, or name:<graph>.
    input: String,
    #[arg(long, default_value_t = 10_000_000)]
    budget: u64,
    #[arg(long, default_value_t = 60)]
    direct_cap: usize,
    #[arg(long, default_value_t = 200_000)]
    matching_cap: usize,
    /// Where to write the witness (default: next to the input).
    #[arg(long)]
    witness: Option<PathBuf>,
    /// Certificate used above the direct-search cap.
    #[arg(long)]
    certificate: Option<PathBuf>,
    /// Write the JSON report here.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Include wall-clock timing in the report.
    #[arg(long)]
    timing: bool,
    /// Exit 1 unless the index is at least five.
    #[arg(long)]
    require_five: bool,
}

#[derive(Args, Debug)]
struct TransitionsArgs {
    input: String,
    /// Vertices to remove, e.g. 0,1 or 0,3,1.
    #[arg(long)]
    path: String,
    /// Record the weight of the residual value (three-vertex paths).
    #[arg(long)]
    weighted: bool,
    #[arg(long)]
    split_degenerate: bool,
    /// DOT instead of JSON.
    #[arg(long)]
    dot: bool,
    /// Exit 1 unless the relation equals this named relation.
    #[arg(long)]
    expect: Option<String>,
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CfnArgs {
    input: String,
    #[arg(long, default_value_t = 2)]
    qmax: u64,
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    graph: String,
    certificate: PathBuf,
}

#[derive(Serialize)]
struct GraphMeta {
    order: usize,
    girth: Option<usize>,
    bipartite: bool,
    cyclic4: Option<bool>,
}

fn graph_meta(g: &Graph) -> GraphMeta {
    GraphMeta {
        order: g.n(),
        girth: girth(g).ok(),
        bipartite: is_bipartite(g).is_some(),
        cyclic4: cyclic_edge_connectivity_at_least(g, 4, CYCLIC_CUT_CAP).ok(),
    }
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn tree_arg(a: &GenerateArgs) -> Result<TreeSpec> {
    Ok(match (&a.tree, a.caterpillar) {
        (Some(t), _) => TreeSpec::parse(t)?,
        (None, Some(k)) => TreeSpec::caterpillar(k),
        (None, None) => TreeSpec::claw(),
    })
}

fn build_member(a: &GenerateArgs) -> Result<FamilyMember> {
    let frags = a.fragments.as_deref().map(parse_fragments).transpose()?;
    Ok(match a.family {
        Family::EvenOrder => even_order_family(a.n.ok_or_else(|| anyhow!("even-order needs --n"))?)?,
        Family::Windmill => {
            let f = frags.unwrap_or_else(|| vec![HalinFragment::petersen(); 3]);
            if f.len() != 3 {
                bail!("windmill takes exactly three fragments, got {}", f.len());
            }
            windmill(&f[0], &f[1], &f[2])?
        }
        Family::Treelike => treelike(&build_halin(&tree_arg(a)?)?)?,
        Family::Halin => {
            let h = build_halin(&tree_arg(a)?)?;
            let f = frags.unwrap_or_else(|| vec![HalinFragment::petersen(); h.spec.leaves()]);
            let o = match a.orientation {
                OrientationArg::Forward => Orientation::Forward,
                OrientationArg::Reverse => Orientation::Reverse,
            };
            halin_snark(&h, &f, o)?
        }
        Family::Composite => {
            if a.parts < 2 {
                bail!("composite needs at least two parts");
            }
            let h = build_halin(&tree_arg(a)?)?;
            let f = frags.unwrap_or_else(|| vec![HalinFragment::petersen(); h.spec.leaves()]);
            let poles = halin_poles(&h, &f)?;
            let (parts, variant): (Vec<Multipole>, _) = match a.variant {
                VariantArg::G1 => {
                    let mut p = vec![HalinFragment::petersen().d.clone()];
                    p.extend(std::iter::repeat_n(poles.y, a.parts - 1));
                    (p, CompositeVariant::DecollineatorFirst)
                }
                VariantArg::G2 => (vec![poles.z; a.parts], CompositeVariant::Extended),
            };
            composite_family(&parts, variant)?
        }
    })
}

fn cmd_generate(a: GenerateArgs) -> Result<bool> {
    let m = build_member(&a)?;
    if a.verify && !verify_certificate(&m.certificate, &m.graph)? {
        bail!("certificate of the generated graph does not conclude");
    }
    let text = match a.format {
        GraphFormat::Graph6 => emit_graph6(&m.graph)? + "\n",
        GraphFormat::Dot => emit_dot(&m.graph),
        GraphFormat::Json => emit_json(&m.graph) + "\n",
    };
    let Some(prefix) = a.out else {
        print!("{text}");
        eprintln!("{} ({} vertices)", m.description, m.graph.n());
        return Ok(true);
    };
    let ext = match a.format {
        GraphFormat::Graph6 => ".g6",
        GraphFormat::Dot => ".dot",
        GraphFormat::Json => ".json",
    };
    let gpath = with_suffix(&prefix, ext);
    let cpath = with_suffix(&prefix, ".cert.json");
    let mpath = with_suffix(&prefix, ".meta.json");
    write(&gpath, &text)?;
    write(&cpath, &m.certificate.to_json())?;
    let meta = json!({
        "schema": 1,
        "family": format!("{:?}", a.family).to_lowercase(),
        "description": m.description,
        "graph": graph_meta(&m.graph),
        "graph_file": gpath,
        "certificate": cpath,
        "certificate_kind": m.certificate.kind,
    });
    write(&mpath, &(serde_json::to_string_pretty(&meta)? + "\n"))?;
    println!("{}", gpath.display());
    println!("{}", cpath.display());
    println!("{}", mpath.display());
    Ok(true)
}

fn witness_json(w: &PmiWitness) -> Option<String> {
    match w {
        PmiWitness::Flow { flow, .. } => Some(serde_json::to_string(flow).expect("flows serialise")),
        PmiWitness::Colouring { cover } | PmiWitness::Cover { cover } => {
            Some(serde_json::to_string(cover).expect("covers serialise"))
        }
        PmiWitness::Exhausted { .. } => None,
    }
}

fn cmd_pmi(a: PmiArgs) -> Result<bool> {
    let start = Instant::now();
    let g = load_graph(&a.input)?;
    g.require_cubic()?;
    let opts = PmiOptions { budget: Some(a.budget), direct_cap: a.direct_cap, matching_cap: Some(a.matching_cap) };
    let mut witness_path = None;
    let mut cert_path = None;
    let (value, kind) = if g.n() > a.direct_cap {
        let Some(cp) = &a.certificate else {
            return Err(Error::TooLarge { size: g.n(), cap: a.direct_cap })
                .context("above the direct-search cap a certificate is required (--certificate)");
        };
        let text = std::fs::read_to_string(cp).with_context(|| format!("cannot read {}", cp.display()))?;
        let cert = Certificate::from_json(&text)?;
        match verify_certificate(&cert, &g) {
            Ok(true) => {}
            Ok(false) => bail!("certificate replays but does not conclude"),
            Err(e) => return Err(e).context("certificate rejected"),
        }
        cert_path = Some(cp.clone());
        (PmiValue::AtLeastFive, "certificate".to_string())
    } else {
        let r = perfect_matching_index(&g, &opts)?;
        let kind = match &r.witness {
            PmiWitness::Colouring { .. } => "colouring",
            PmiWitness::Flow { .. } => "flow",
            PmiWitness::Cover { .. } => "cover",
            PmiWitness::Exhausted { .. } => "none",
        };
        if let Some(text) = witness_json(&r.witness) {
            let path = match (&a.witness, a.input.strip_prefix("name:")) {
                (Some(p), _) => Some(p.clone()),
                (None, None) => Some(with_suffix(Path::new(&a.input), ".witness.json")),
                (None, Some(_)) => None,
            };
            if let Some(p) = path {
                write(&p, &(text + "\n"))?;
                witness_path = Some(p);
            }
        }
        (r.value, kind.to_string())
    };
    match (&witness_path, &cert_path) {
        (Some(p), _) => println!("{value} (witness: {})", p.display()),
        (None, Some(p)) => println!("{value} (certificate: {})", p.display()),
        (None, None) => println!("{value}"),
    }
    if let Some(rp) = &a.report {
        let mut report = json!({
            "schema": 1,
            "command": "pmi",
            "input": a.input,
            "graph": graph_meta(&g),
            "pmi": { "value": value, "witness_kind": kind },
            "witness": witness_path,
            "certificate": cert_path,
        });
        if a.timing {
            report["timing_ms"] = json!(start.elapsed().as_millis() as u64);
        }
        write(rp, &(serde_json::to_string_pretty(&report)? + "\n"))?;
    }
    Ok(!a.require_five || matches!(value, PmiValue::Five | PmiValue::AtLeastFive))
}

fn cmd_transitions(a: TransitionsArgs) -> Result<bool> {
    let g = load_graph(&a.input)?;
    let path = parse_path(&a.path)?;
    let weighted = match (path.len(), a.weighted) {
        (2, false) => false,
        (3, _) => true,
        (2, true) => bail!("--weighted needs a three-vertex path"),
        (k, _) => bail!("path must have two or three vertices, got {k}"),
    };
    let m = Multipole::remove_path(&g, &path)?;
    let opts = RelationOptions { split_degenerate: a.split_degenerate, budget: a.budget, fresh: false };
    let r = if weighted { weighted_transition_relation(&m, &opts)? } else { transition_relation(&m, &opts)? };
    let r = r.without_pairs();
    let merged = r.merged();
    let classes: Vec<String> = if weighted {
        Vec::new()
    } else {
        classify_dipole(&merged).into_iter().map(|c| c.to_string()).collect()
    };
    let equals: Vec<&str> = Named::ALL.into_iter().filter(|n| n.relation() == &merged).map(|n| n.name()).collect();
    let inside: Vec<&str> =
        Named::ALL.into_iter().filter(|n| merged.is_subset(n.relation())).map(|n| n.name()).collect();
    let text = if a.dot {
        r.to_dot(&a.path)
    } else {
        let v = json!({
            "schema": 1,
            "command": "transitions",
            "input": a.input,
            "path": path,
            "weighted": weighted,
            "table": r.to_string(),
            "relation": r,
            "classes": classes,
            "equals": equals,
            "inside": inside,
        });
        serde_json::to_string_pretty(&v)? + "\n"
    };
    match &a.out {
        Some(p) => {
            write(p, &text)?;
            println!("{r}");
        }
        None => print!("{text}"),
    }
    if !classes.is_empty() {
        eprintln!("{}", classes.join(", "));
    }
    match &a.expect {
        None => Ok(true),
        Some(name) => {
            let n = Named::from_name(name).ok_or_else(|| anyhow!("unknown relation {name:?}"))?;
            Ok(n.relation() == &merged)
        }
    }
}

fn cmd_cfn(a: CfnArgs) -> Result<bool> {
    let g = load_graph(&a.input)?;
    let ladder = circular_flow_ladder(&g, a.qmax, a.budget)?;
    if a.json {
        let v = json!({ "schema": 1, "command": "cfn", "input": a.input, "ladder": ladder });
        println!("{}", serde_json::to_string_pretty(&v)?);
    } else {
        println!("{ladder}");
    }
    Ok(true)
}

fn cmd_verify(a: VerifyArgs) -> Result<bool> {
    let g = load_graph(&a.graph)?;
    let text = std::fs::read_to_string(&a.certificate)
        .with_context(|| format!("cannot read {}", a.certificate.display()))?;
    let cert = Certificate::from_json(&text)?;
    match verify_certificate(&cert, &g) {
        Ok(true) => {
            println!("certificate verifies: π >= 5 ({} vertices, {:?})", g.n(), cert.kind);
            Ok(true)
        }
        Ok(false) => {
            println!("certificate replays but does not conclude");
            Ok(false)
        }
        Err(Error::CertificateMismatch(why)) => {
            println!("certificate rejected: {why}");
            Ok(false)
        }
        Err(e) => Err(e.into()),
    }
}

fn run(cli: Cli) -> Result<bool> {
    if let Some(n) = cli.threads {
        if n == 0 {
            bail!("--threads must be positive");
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    match cli.command {
        Command::Generate(a) => cmd_generate(a),
        Command::Pmi(a) => cmd_pmi(a),
        Command::Transitions(a) => cmd_transitions(a),
        Command::Cfn(a) => cmd_cfn(a),
        Command::Verify(a) => cmd_verify(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
