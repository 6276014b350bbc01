//! Command line front end.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use nalgebra::Vector3;
use serde::Serialize;

use crate::config::{GridConfig, GridKind, RawConfig, RunConfig};
use crate::curves::write_point_cloud;
use crate::elements::{compose_edge_element, EdgeElementType};
use crate::geometry::Lattice;
use crate::interlock::{sampled_directions, verify_disassembly_sequence, verify_interlocked, EscapeReport, Removal};
use crate::mesh::{mesh_volume, voxels_to_mesh, watertight_check, write_stl_binary};
use crate::planner::{make_hex_grid, make_square_grid, plan_assembly, validate_plan, AssemblyPlan, KeyPolicy};
use crate::split::make_loose_pieces;
use crate::vertex::VertexDesign;
use crate::{Error, Result, VoxelSet};

#[derive(Debug, Parser)]
#[command(name = "interlock-truss", version, about = "Interlocking truss Connectors, Edge Elements and grid plans")]
pub struct Cli {
    /// JSON run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Voxels per cross-section side.
    #[arg(long, global = true)]
    pub resolution: Option<usize>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// edge-key or loose-key.
    #[arg(long, global = true)]
    pub policy: Option<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Connector meshes, split pieces, site curves and labels for one vertex.
    Connector,
    /// One Edge Element mesh: basic, one-key, two-key or split.
    Element { kind: String },
    /// Grid plan, manifest and one mesh per piece kind.
    Grid {
        /// hex or square.
        kind: Option<String>,
        width: Option<usize>,
        height: Option<usize>,
    },
    /// Interlocking check of the unsplit and split vertex.
    Verify,
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io(_) | Error::Json(_) | Error::EmptyMesh => EXIT_IO,
        Error::PlanViolation(_) => EXIT_VERIFY,
        _ => EXIT_CONFIG,
    }
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

/// Applies flag overrides to the file config and resolves it.
pub fn load_config(cli: &Cli) -> Result<RunConfig> {
    let mut raw = match &cli.config {
        Some(p) => RawConfig::load(p)?,
        None => RawConfig::default(),
    };
    if let Some(o) = &cli.out {
        raw.output_dir = Some(o.clone());
    }
    if let Some(r) = cli.resolution {
        raw.resolution = Some(r);
    }
    if let Some(s) = cli.seed {
        raw.seed = Some(s);
    }
    if let Some(p) = &cli.policy {
        raw.policy = Some(KeyPolicy::parse(p).ok_or_else(|| {
            Error::Config(format!("policy must be edge-key or loose-key, got {p:?}"))
        })?);
    }
    if let Command::Grid { kind, width, height } = &cli.command {
        if let Some(k) = kind {
            raw.grid.kind =
                Some(GridKind::parse(k).ok_or_else(|| Error::Config(format!("grid kind must be hex or square, got {k:?}")))?);
        }
        if let Some(w) = width {
            raw.grid.width = Some(*w);
            if height.is_none() {
                raw.grid.height = Some(*w);
            }
        }
        if let Some(h) = height {
            raw.grid.height = Some(*h);
        }
    }
    RunConfig::resolve(raw)
}

/// Runs a parsed command. Verification failures return `EXIT_VERIFY`.
pub fn execute(cli: &Cli) -> Result<i32> {
    let cfg = load_config(cli)?;
    std::fs::create_dir_all(&cfg.output_dir)?;
    match &cli.command {
        Command::Connector => cmd_connector(&cfg).map(|_| EXIT_OK),
        Command::Element { kind } => {
            let kind = EdgeElementType::parse(kind)
                .ok_or_else(|| Error::Config(format!("unknown element type {kind:?}")))?;
            cmd_element(&cfg, kind).map(|_| EXIT_OK)
        }
        Command::Grid { .. } => cmd_grid(&cfg).map(|_| EXIT_OK),
        Command::Verify => cmd_verify(&cfg).map(|r| if r.holds { EXIT_OK } else { EXIT_VERIFY }),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MeshInfo {
    pub file: String,
    pub voxels: usize,
    pub triangles: usize,
    pub volume: f64,
    pub watertight: bool,
}

fn write_mesh(voxels: &VoxelSet, lattice: &Lattice, shift: Vector3<f64>, dir: &Path, file: &str) -> Result<MeshInfo> {
    let mut mesh = voxels_to_mesh(voxels, lattice)?;
    mesh.translate(shift);
    let info = MeshInfo {
        file: file.to_string(),
        voxels: voxels.len(),
        triangles: mesh.triangle_count(),
        volume: mesh_volume(&mesh),
        watertight: watertight_check(&mesh),
    };
    if !info.watertight {
        return Err(Error::Composition(format!("mesh {file} is not closed")));
    }
    write_stl_binary(&mesh, &dir.join(file))?;
    Ok(info)
}

fn build_vertex(cfg: &RunConfig) -> Result<VertexDesign> {
    VertexDesign::build(cfg.vertex_params())
}

fn vertex_shift(v: &VertexDesign) -> Vector3<f64> {
    -v.grid.lattice().origin.coords
}

pub fn cmd_connector(cfg: &RunConfig) -> Result<Vec<MeshInfo>> {
    let v = build_vertex(cfg)?;
    let dir = &cfg.output_dir;
    let lattice = v.grid.lattice();
    let shift = vertex_shift(&v);
    let h3 = lattice.voxel_volume();
    println!(
        "vertex n={} resolution={} h={:.6} inside voxels={} volume={:.6} (analytic {:.6})",
        v.valence(),
        cfg.resolution,
        lattice.spacing,
        v.field.inside_count(),
        v.field.inside_count() as f64 * h3,
        cfg.torus.volume()
    );
    let mut infos = Vec::new();
    for r in &v.regions {
        let info = write_mesh(&r.voxels, lattice, shift, dir, &format!("{}.stl", VertexDesign::connector_id(r.label)))?;
        println!(
            "connector {}: voxels={} volume={:.6} components={} triangles={}",
            r.label,
            r.voxels.len(),
            r.volume,
            r.voxels.components().len(),
            info.triangles
        );
        infos.push(info);
    }
    for (id, set) in make_loose_pieces(&v.split) {
        let info = write_mesh(&set, lattice, shift, dir, &format!("split_{id}.stl"))?;
        println!("split {id}: voxels={} triangles={}", set.len(), info.triangles);
        infos.push(info);
    }
    let mut curves = Vec::new();
    write_point_cloud(&v.curves, &mut curves)?;
    std::fs::write(dir.join("curves.txt"), curves)?;
    let mut labels = Vec::new();
    v.field.write_to(&mut labels)?;
    std::fs::write(dir.join("labels.bin"), labels)?;
    Ok(infos)
}

fn element_meshes(v: &VertexDesign, cfg: &RunConfig, kind: EdgeElementType) -> Result<Vec<MeshInfo>> {
    let lattice = v.grid.lattice();
    let dir = &cfg.output_dir;
    let n = v.valence();
    if kind == EdgeElementType::SplitConnectorPieces {
        return make_loose_pieces(&v.split)
            .into_iter()
            .map(|(id, set)| write_mesh(&set, lattice, vertex_shift(v), dir, &format!("split_{id}.stl")))
            .collect();
    }
    let ends = v.end_geometry()?;
    let el = compose_edge_element(kind, cfg.grid.edge_length, &ends, &cfg.torus, lattice)?;
    let shift = vertex_shift(v) - Vector3::new(el.length / 2.0, 0.0, 0.0);
    Ok(vec![write_mesh(&el.solid, lattice, shift, dir, &format!("{}_{n}.stl", kind.file_stem()))?])
}

pub fn cmd_element(cfg: &RunConfig, kind: EdgeElementType) -> Result<Vec<MeshInfo>> {
    let v = build_vertex(cfg)?;
    let infos = element_meshes(&v, cfg, kind)?;
    for i in &infos {
        println!("{}: voxels={} triangles={} volume={:.6}", i.file, i.voxels, i.triangles, i.volume);
    }
    Ok(infos)
}

#[derive(Clone, Debug, Serialize)]
pub struct Manifest {
    pub resolution: usize,
    pub seed: u64,
    pub grid: GridConfig,
    pub plan: AssemblyPlan,
    /// Piece kind to mesh file. Meshes are in the vertex frame, except
    /// tube-mounted elements, which are centred on their edge midpoint.
    pub meshes: BTreeMap<String, String>,
}

pub fn plan_for(cfg: &RunConfig) -> Result<AssemblyPlan> {
    let g = &cfg.grid;
    let graph = match g.kind {
        GridKind::Hex => make_hex_grid(g.width, g.height, g.edge_length, &cfg.torus)?,
        GridKind::Square => make_square_grid(g.width, g.height, g.edge_length, &cfg.torus)?,
    };
    let plan = plan_assembly(&graph, cfg.curves.valence, g.edge_length, cfg.policy)?;
    validate_plan(&plan)?;
    Ok(plan)
}

pub fn cmd_grid(cfg: &RunConfig) -> Result<Manifest> {
    let plan = plan_for(cfg)?;
    let v = build_vertex(cfg)?;
    let dir = &cfg.output_dir;
    let lattice = v.grid.lattice();
    let mut meshes = BTreeMap::new();
    for kind in plan.element_kinds() {
        for info in element_meshes(&v, cfg, kind)? {
            meshes.insert(kind.file_stem().to_string(), info.file);
        }
    }
    if plan.bom.split_pairs > 0 {
        for (id, set) in make_loose_pieces(&v.split).into_iter().filter(|(id, _)| id != "peg") {
            let info = write_mesh(&set, lattice, vertex_shift(&v), dir, &format!("split_{id}.stl"))?;
            meshes.insert(format!("split_{id}"), info.file);
        }
    }
    if plan.bom.loose_pegs > 0 {
        let info = write_mesh(&v.split.peg, lattice, vertex_shift(&v), dir, "split_peg.stl")?;
        meshes.insert("loose_peg".into(), info.file);
    }
    let mut labels: Vec<usize> = plan.loose.connectors.iter().map(|c| c.label).collect();
    labels.sort_unstable();
    labels.dedup();
    for l in labels {
        let id = VertexDesign::connector_id(l);
        let info = write_mesh(&v.regions[l].voxels, lattice, vertex_shift(&v), dir, &format!("{id}.stl"))?;
        meshes.insert(format!("loose_{id}"), info.file);
    }
    let manifest = Manifest {
        resolution: cfg.resolution,
        seed: cfg.seed,
        grid: cfg.grid.clone(),
        plan,
        meshes,
    };
    std::fs::write(dir.join("manifest.json"), serde_json::to_string_pretty(&manifest)?)?;
    let b = &manifest.plan.bom;
    println!("{:<18} {:>6}", "piece", "count");
    for (name, count) in [
        ("Basic", b.basic),
        ("OneKey", b.one_key),
        ("TwoKey", b.two_key),
        ("split pairs", b.split_pairs),
        ("loose Connectors", b.loose_connectors),
        ("loose pegs", b.loose_pegs),
    ] {
        println!("{name:<18} {count:>6}");
    }
    Ok(manifest)
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub valence: usize,
    pub resolution: usize,
    pub seed: u64,
    pub unsplit: EscapeReport,
    pub split: EscapeReport,
    pub sequence: Option<Vec<Removal>>,
    pub stuck: Option<Vec<String>>,
    pub unsplit_interlocked: bool,
    pub halves_held_by_peg: bool,
    pub peg_then_halves_then_connectors: bool,
    pub holds: bool,
}

/// The vertex interlocks unsplit, and the split vertex comes apart peg first,
/// then both halves, then the remaining Connectors.
pub fn verify_vertex(v: &VertexDesign, seed: u64, random_directions: usize) -> Result<VerifyReport> {
    let dirs = sampled_directions(seed, random_directions);
    let unsplit = verify_interlocked(&v.unsplit_assembly()?, &dirs)?;
    let split_asm = v.split_assembly()?;
    let split = verify_interlocked(&split_asm, &dirs)?;
    let (sequence, stuck) = match verify_disassembly_sequence(&split_asm, &dirs) {
        Ok(seq) => (Some(seq), None),
        Err(s) => (None, Some(s.remaining)),
    };
    let order_ok = sequence.as_ref().is_some_and(|seq| {
        let ids: Vec<&str> = seq.iter().map(|r| r.piece.as_str()).collect();
        let mut halves = ids.get(1..3).map(|s| s.to_vec()).unwrap_or_default();
        halves.sort_unstable();
        ids.first() == Some(&"peg") && halves == ["half_a", "half_b"]
    });
    let halves_held = split.escapes_of("half_a").is_empty() && split.escapes_of("half_b").is_empty();
    let holds = unsplit.interlocked && halves_held && order_ok;
    Ok(VerifyReport {
        valence: v.valence(),
        resolution: v.params.resolution,
        seed,
        unsplit_interlocked: unsplit.interlocked,
        unsplit,
        split,
        sequence,
        stuck,
        halves_held_by_peg: halves_held,
        peg_then_halves_then_connectors: order_ok,
        holds,
    })
}

pub fn cmd_verify(cfg: &RunConfig) -> Result<VerifyReport> {
    let v = build_vertex(cfg)?;
    let report = verify_vertex(&v, cfg.seed, cfg.random_directions)?;
    std::fs::write(cfg.output_dir.join("verify_report.json"), serde_json::to_string_pretty(&report)?)?;
    println!("unsplit interlocked: {}", report.unsplit_interlocked);
    println!("halves held by peg: {}", report.halves_held_by_peg);
    match (&report.sequence, &report.stuck) {
        (Some(seq), _) => {
            let ids: Vec<&str> = seq.iter().map(|r| r.piece.as_str()).collect();
            println!("disassembly: {}", ids.join(" -> "));
        }
        (None, Some(rest)) => println!("disassembly stuck with {}", rest.join(", ")),
        _ => {}
    }
    println!("{}", if report.holds { "interlocking verified" } else { "interlocking NOT verified" });
    Ok(report)
}
