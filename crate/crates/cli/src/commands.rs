use borromean::decide::{enumerate, find_homomorphisms, Strategy};
use borromean::icosa::{certify_a5_isomorphism, five_octahedra, icosahedron, rotation_group};
use borromean::{
    AbelianGroupDescriptor, DecideError, Homomorphism, LinkDiagram, PermutationGroup, Presentation,
};
use serde_json::{json, Value};
use thiserror::Error;

use crate::{read_input, Command, ExportFormat, IcosaCommand, RunConfig, StrategyArg};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
        }
    }
}

pub struct Output {
    pub text: String,
    pub json: Value,
    pub code: u8,
}

impl Output {
    fn ok(text: String, json: Value) -> Self {
        Output {
            text,
            json,
            code: 0,
        }
    }
}

fn input_err(path: &str, e: impl std::fmt::Display) -> CliError {
    CliError::Input(format!("{path}: {e}"))
}

enum Parsed {
    Diagram(LinkDiagram),
    Presentation(Presentation),
}

// A presentation starts with '<' once comments are removed.
fn parse_any(path: &str) -> Result<Parsed, CliError> {
    let text = read_input(path)?;
    let looks_like_pres = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .find(|l| !l.is_empty())
        .is_some_and(|l| l.starts_with('<'));
    if looks_like_pres {
        Presentation::parse(&text)
            .map(Parsed::Presentation)
            .map_err(|e| input_err(path, e))
    } else {
        LinkDiagram::parse(&text)
            .map(Parsed::Diagram)
            .map_err(|e| input_err(path, e))
    }
}

fn parse_diagram(path: &str) -> Result<LinkDiagram, CliError> {
    match parse_any(path)? {
        Parsed::Diagram(d) => Ok(d),
        Parsed::Presentation(_) => Err(CliError::Input(format!(
            "{path}: expected a PD diagram, found a presentation"
        ))),
    }
}

fn as_presentation(path: &str) -> Result<Presentation, CliError> {
    Ok(match parse_any(path)? {
        Parsed::Presentation(p) => p,
        Parsed::Diagram(d) => d.wirtinger().0,
    })
}

fn check_max_cosets(n: usize) -> Result<(), CliError> {
    if n == 0 {
        return Err(CliError::Input("--max-cosets must be at least 1".into()));
    }
    Ok(())
}

fn presentation_json(p: &Presentation) -> Value {
    json!({
        "generators": p.generators().iter().map(|g| g.name()).collect::<Vec<_>>(),
        "relators": p.relators().iter().map(|r| r.to_string()).collect::<Vec<_>>(),
        "text": p.to_string(),
    })
}

pub fn run(config: &RunConfig) -> Result<Output, CliError> {
    match &config.command {
        Command::Wirtinger { pd, simplify } => wirtinger(pd, *simplify),
        Command::H1 { input } => h1(input),
        Command::Surgery { pd, framings, raw } => surgery(pd, framings, *raw),
        Command::Decide {
            input,
            max_cosets,
            strategy,
        } => decide(input, *max_cosets, *strategy),
        Command::Distinguish {
            pd_a,
            pd_b,
            framings,
            max_cosets,
        } => distinguish(pd_a, pd_b, framings, *max_cosets),
        Command::Icosa { what } => Ok(icosa(*what)),
    }
}

fn wirtinger(path: &str, simplify: bool) -> Result<Output, CliError> {
    let d = parse_diagram(path)?;
    let (p, meridians) = d.wirtinger();
    let p = if simplify { p.simplify().0 } else { p };
    let json = json!({
        "command": "wirtinger",
        "input": path,
        "simplified": simplify,
        "components": d.component_count(),
        "meridians": meridians.components.iter().map(|g| g.name()).collect::<Vec<_>>(),
        "presentation": presentation_json(&p),
    });
    Ok(Output::ok(format!("{p}\n"), json))
}

fn h1(path: &str) -> Result<Output, CliError> {
    let p = as_presentation(path)?;
    let h = p.h1();
    let json = json!({ "command": "h1", "input": path, "h1": h });
    Ok(Output::ok(format!("{h}\n"), json))
}

fn surgered(
    path: &str,
    framings: &[i64],
    raw: bool,
) -> Result<(LinkDiagram, Presentation), CliError> {
    let d = parse_diagram(path)?;
    let p = if raw {
        d.surgery_presentation(framings)
    } else {
        d.simplified_surgery_presentation(framings)
    }
    .map_err(|e| input_err(path, e))?;
    Ok((d, p))
}

fn surgery(path: &str, framings: &[i64], raw: bool) -> Result<Output, CliError> {
    let (_, p) = surgered(path, framings, raw)?;
    let json = json!({
        "command": "surgery",
        "input": path,
        "framings": framings,
        "simplified": !raw,
        "presentation": presentation_json(&p),
    });
    Ok(Output::ok(format!("{p}\n"), json))
}

/// Order and A5 surjections of one group.
struct Decision {
    order: Result<usize, DecideError>,
    a5: Option<Vec<Homomorphism>>,
}

impl Decision {
    fn exhausted(&self) -> bool {
        self.order.is_err()
    }
}

fn decide_group(p: &Presentation, max_cosets: usize, strategy: Strategy) -> Decision {
    let order = enumerate(p, &[], max_cosets, strategy).map(|t| t.index());
    // A group of order 1 has no surjection onto A5, and one of order not
    // divisible by 60 cannot have one either.
    let a5 = match order {
        Ok(n) if n % 60 != 0 => Some(Vec::new()),
        _ => find_homomorphisms(p, &PermutationGroup::alternating(5), true).ok(),
    };
    Decision { order, a5 }
}

fn order_text(d: &Decision) -> String {
    match &d.order {
        Ok(n) => format!("order {n}"),
        Err(DecideError::Exhausted { max_cosets, .. }) => {
            format!("inconclusive: coset enumeration exhausted {max_cosets} cosets")
        }
        Err(e) => format!("inconclusive: {e}"),
    }
}

fn decision_json(d: &Decision) -> Value {
    let (order, exhausted) = match &d.order {
        Ok(n) => (json!(n), Value::Null),
        Err(DecideError::Exhausted { max_cosets, stats }) => (
            Value::Null,
            json!({ "max_cosets": max_cosets, "stats": stats }),
        ),
        Err(e) => (Value::Null, json!(e.to_string())),
    };
    json!({
        "order": order,
        "exhausted": exhausted,
        "a5_surjections": d.a5.as_ref().map(|v| v.len()),
        "a5_certificate": d.a5.as_ref().and_then(|v| v.first()),
    })
}

fn decide(path: &str, max_cosets: usize, strategy: StrategyArg) -> Result<Output, CliError> {
    check_max_cosets(max_cosets)?;
    let p = as_presentation(path)?;
    let strategy = match strategy {
        StrategyArg::Hlt => Strategy::Hlt,
        StrategyArg::Felsch => Strategy::Felsch,
    };
    let d = decide_group(&p, max_cosets, strategy);
    let mut text = order_text(&d);
    if let Some(h) = d.a5.as_ref().and_then(|v| v.first()) {
        text.push_str(&format!("; surjection onto A5: {}", h.assignment_text()));
    }
    text.push('\n');
    let mut json = decision_json(&d);
    json["command"] = json!("decide");
    json["input"] = json!(path);
    json["presentation"] = presentation_json(&p);
    Ok(Output {
        text,
        json,
        code: if d.exhausted() { 3 } else { 0 },
    })
}

fn distinguish(a: &str, b: &str, framings: &[i64], max_cosets: usize) -> Result<Output, CliError> {
    check_max_cosets(max_cosets)?;
    let (da, pa) = surgered(a, framings, false)?;
    let (db, pb) = surgered(b, framings, false)?;
    if da.component_count() != db.component_count() {
        return Err(CliError::Input(format!(
            "component counts differ: {} has {}, {} has {}",
            a,
            da.component_count(),
            b,
            db.component_count()
        )));
    }
    let (ha, hb): (AbelianGroupDescriptor, AbelianGroupDescriptor) = (pa.h1(), pb.h1());
    let xa = decide_group(&pa, max_cosets, Strategy::Hlt);
    let xb = decide_group(&pb, max_cosets, Strategy::Hlt);

    let mut reasons = Vec::new();
    if let (Ok(m), Ok(n)) = (&xa.order, &xb.order) {
        if m != n {
            reasons.push(format!("order {m} vs order {n}"));
        }
    }
    if ha != hb {
        reasons.push(format!("h1 {ha} vs h1 {hb}"));
    }
    if let (Some(s), Some(t)) = (&xa.a5, &xb.a5) {
        if s.len() != t.len() {
            reasons.push(format!("{} vs {} surjections onto A5", s.len(), t.len()));
        }
    }

    let different = !reasons.is_empty();
    let exhausted = xa.exhausted() || xb.exhausted();
    let text = if different {
        // The first reason is the headline, the rest follow on their own lines.
        let mut t = format!("DIFFERENT ({})\n", reasons[0]);
        for r in &reasons[1..] {
            t.push_str(&format!("  also: {r}\n"));
        }
        t
    } else if exhausted {
        format!("INCONCLUSIVE ({}, {})\n", order_text(&xa), order_text(&xb))
    } else if xa.order == xb.order {
        format!("INCONCLUSIVE (both {})\n", order_text(&xa))
    } else {
        format!(
            "INCONCLUSIVE ({} vs {})\n",
            order_text(&xa),
            order_text(&xb)
        )
    };
    let json = json!({
        "command": "distinguish",
        "framings": framings,
        "verdict": if different { "DIFFERENT" } else { "INCONCLUSIVE" },
        "reasons": reasons,
        "a": { "input": a, "presentation": presentation_json(&pa), "h1": ha, "decision": decision_json(&xa) },
        "b": { "input": b, "presentation": presentation_json(&pb), "h1": hb, "decision": decision_json(&xb) },
    });
    Ok(Output {
        text,
        json,
        code: if !different && exhausted { 3 } else { 0 },
    })
}

fn matrix_text(m: &[[borromean::GoldenNumber; 3]; 3]) -> String {
    let rows: Vec<String> = m
        .iter()
        .map(|r| format!("[{}, {}, {}]", r[0], r[1], r[2]))
        .collect();
    format!("[{}]", rows.join(", "))
}

fn icosa(what: IcosaCommand) -> Output {
    match what {
        IcosaCommand::Counts => {
            let (v, e, f) = icosahedron().counts();
            Output::ok(
                format!("V={v} E={e} F={f}\n"),
                json!({ "command": "icosa counts", "vertices": v, "edges": e, "faces": f }),
            )
        }
        IcosaCommand::Rotations => {
            let rots = rotation_group();
            let mut text = String::new();
            let mut rows = Vec::new();
            for (i, c) in rots.iter().enumerate() {
                let axis = serde_json::to_value(c.axis).expect("serializable");
                let axis = axis.as_str().unwrap_or_default().to_string();
                let m = matrix_text(c.rotation.doubled());
                text.push_str(&format!("{:2} {:8} {} {}\n", i + 1, axis, c.order, m));
                rows.push(json!({
                    "index": i + 1,
                    "axis": axis,
                    "order": c.order,
                    "doubled_matrix": m,
                    "matrix": c.rotation.to_f64(),
                }));
            }
            Output::ok(
                text,
                json!({ "command": "icosa rotations", "count": rots.len(), "rotations": rows }),
            )
        }
        IcosaCommand::Octahedra => {
            let octs = five_octahedra();
            let mut text =
                String::from("# vertices doubled (edge midpoints of the icosahedron, times 2)\n");
            let mut rows = Vec::new();
            for (k, o) in octs.iter().enumerate() {
                let vs: Vec<String> = o.iter().map(|v| v.to_string()).collect();
                text.push_str(&format!("O{}: {}\n", k + 1, vs.join(" ")));
                rows.push(json!({ "label": k + 1, "doubled_vertices": vs }));
            }
            Output::ok(
                text,
                json!({ "command": "icosa octahedra", "octahedra": rows }),
            )
        }
        IcosaCommand::Certify => {
            let c = certify_a5_isomorphism();
            let text = if c.holds() {
                format!(
                    "rotation group ~ A5 (order {}); labels: vertex-axis={}, face-axis={}, edge-axis={}\n",
                    c.group_order, c.vertex_axis, c.face_axis, c.edge_axis
                )
            } else {
                format!(
                    "certificate FAILED: order {}, image {}, kernel trivial {}, image A5 {}, pairs {}\n",
                    c.group_order,
                    c.image_order,
                    c.kernel_trivial,
                    c.image_is_alternating,
                    c.homomorphism_pairs_checked
                )
            };
            let code = if c.holds() { 0 } else { 1 };
            Output {
                text,
                json: json!({
                    "command": "icosa certify",
                    "holds": c.holds(),
                    "group_order": c.group_order,
                    "image_order": c.image_order,
                    "kernel_trivial": c.kernel_trivial,
                    "image_is_alternating": c.image_is_alternating,
                    "homomorphism_pairs_checked": c.homomorphism_pairs_checked,
                    "vertex_axis": c.vertex_axis.to_string(),
                    "face_axis": c.face_axis.to_string(),
                    "edge_axis": c.edge_axis.to_string(),
                    "face_axis_direction_tripled": c.face_axis_direction.to_string(),
                    "edge_axis_direction_doubled": c.edge_axis_direction.to_string(),
                }),
                code,
            }
        }
        IcosaCommand::Export { format } => {
            let ico = icosahedron();
            let json = json!({
                "command": "icosa export",
                "vertices": ico.vertices.iter().map(|v| v.to_f64()).collect::<Vec<_>>(),
                "exact_vertices": ico.vertices.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                "edges": ico.edges,
                "faces": ico.faces,
            });
            let text = match format {
                ExportFormat::Off => ico.to_off(),
                ExportFormat::Json => {
                    let mut s = serde_json::to_string_pretty(&json).expect("serializable");
                    s.push('\n');
                    s
                }
            };
            Output::ok(text, json)
        }
    }
}
