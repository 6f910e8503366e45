use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::Args;
use num_complex::Complex64;
use quasisd::{EdgeKind, Endpoint, EvaluationRequest, EvaluationResult, Terminal, VertexKind};
use serde_json::{json, Value};

use crate::args::EvalArgs;
use crate::{run_request, CliError};

pub const SCHEMA: &str = "pathfinder-deformation/1";

#[derive(Debug, Clone, Args)]
pub struct DeformationArgs {
    #[command(flatten)]
    pub eval: EvalArgs,

    /// Output JSON file.
    #[arg(long)]
    pub out: PathBuf,
}

fn point(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn endpoint(e: &Endpoint) -> Value {
    match e {
        Endpoint::Finite(z) => json!({ "finite": point(*z) }),
        Endpoint::Infinite(angle) => json!({ "infinite": angle }),
    }
}

fn vertex_kind(kind: VertexKind) -> &'static str {
    match kind {
        VertexKind::Stationary => "stationary",
        VertexKind::FiniteEndpoint => "endpoint",
        VertexKind::Exit => "exit",
        VertexKind::Entrance => "entrance",
        VertexKind::Valley => "valley",
    }
}

pub fn document(req: &EvaluationRequest, result: &EvaluationResult) -> Value {
    let removed: Vec<Complex64> = result.region.removed.iter().map(|r| r.point).collect();
    let stationary: Vec<Value> = result
        .stationary_points
        .iter()
        .map(|&z| json!({ "point": point(z), "removed": removed.contains(&z) }))
        .collect();
    let balls: Vec<Value> = result
        .region
        .balls
        .iter()
        .map(|b| json!({ "center": point(b.center), "radius": b.radius }))
        .collect();
    let exits: Vec<Value> = result
        .exits
        .iter()
        .map(|e| json!({ "point": point(e.location), "ball": e.owner }))
        .collect();
    let paths: Vec<Value> = result
        .paths
        .iter()
        .map(|p| {
            let terminal = match p.terminal {
                Terminal::Entrance { ball, point: z } => json!({ "entrance": { "ball": ball, "point": point(z) } }),
                Terminal::Valley { index, angle } => json!({ "valley": { "index": index, "angle": angle } }),
            };
            json!({
                "origin": point(p.origin),
                "terminal": terminal,
                "p": p.p,
                "points": p.h.iter().map(|&z| point(z)).collect::<Vec<_>>(),
            })
        })
        .collect();
    let (vertices, edges, entrances) = match &result.graph {
        Some(graph) => {
            let vertices: Vec<Value> = graph
                .vertices
                .iter()
                .map(|v| {
                    json!({
                        "kind": vertex_kind(v.kind),
                        "location": point(v.location),
                        "angle": v.angle,
                        "ball": v.ball,
                    })
                })
                .collect();
            let edges: Vec<Value> = graph
                .edges
                .iter()
                .map(|e| {
                    let (kind, path) = match e.kind {
                        EdgeKind::BallLine => ("ball-line", None),
                        EdgeKind::SDContour { path } => ("sd-contour", Some(path)),
                    };
                    json!({ "kind": kind, "path": path, "from": e.from, "to": e.to, "length": e.length })
                })
                .collect();
            let entrances: Vec<Value> = graph
                .vertices
                .iter()
                .filter(|v| v.kind == VertexKind::Entrance)
                .map(|v| json!({ "point": point(v.location), "ball": v.ball }))
                .collect();
            (vertices, edges, entrances)
        }
        None => (Vec::new(), Vec::new(), Vec::new()),
    };
    let shortest: Vec<Value> = result
        .deformation
        .edges
        .iter()
        .map(|e| json!({ "edge": e.edge, "sign": e.sign }))
        .collect();
    let contributions: Vec<Value> = result
        .contributions
        .iter()
        .map(|c| {
            json!({
                "edge": c.edge,
                "sign": c.sign,
                "kind": format!("{:?}", c.kind).to_lowercase(),
                "value": point(c.value),
                "skipped": c.skipped,
                "nodes_used": c.nodes_used,
                "nodes": c.nodes.iter().map(|&z| point(z)).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({
        "schema": SCHEMA,
        "omega": req.omega,
        "phase_ascending": req.g.coeffs().iter().map(|&z| point(z)).collect::<Vec<_>>(),
        "a": endpoint(&result.a),
        "b": endpoint(&result.b),
        "value": point(result.value),
        "n_total": result.n_total,
        "branch": format!("{:?}", result.branch),
        "valleys": result.valleys,
        "r_star": result.r_star,
        "stationary_points": stationary,
        "balls": balls,
        "exits": exits,
        "entrances": entrances,
        "paths": paths,
        "graph": { "vertices": vertices, "edges": edges },
        "shortest_path": { "vertices": result.deformation.vertices, "edges": shortest },
        "contributions": contributions,
    })
}

pub fn run(args: &DeformationArgs) -> Result<(), CliError> {
    let req = args.eval.request()?;
    let result = run_request(&req)?;
    let mut out = BufWriter::new(File::create(&args.out)?);
    serde_json::to_writer_pretty(&mut out, &document(&req, &result)).map_err(std::io::Error::from)?;
    writeln!(out)?;
    out.flush()?;
    println!("{}", crate::format_value(result.value));
    Ok(())
}
