//! Command implementations.

use crate::cache::{format_dv, parse_dv, CacheStore};
use crate::render::Rendered;
use crate::{Cli, CliError, Command};
use cyclic_hall_core::affine_comb::{
    dim_simple, format_element, orbit_count, orbit_count_direct_k1, pi_k, CartanKind, RootSystem,
};
use cyclic_hall_core::hallalg::{CyclicQuiver, HallAlgebra, HallQuiver, Limits, LinearQuiver};
use cyclic_hall_core::induction::{decomposition_matrix, Inducer};
use cyclic_hall_core::multiseg::{Multisegment, PeriodicMultisegment, PeriodicPair, Window};
use serde_json::{json, Value};
use std::path::PathBuf;

type Result<T> = std::result::Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Either kind of label, decided by the `per(` prefix.
enum AnyLabel {
    Periodic(PeriodicMultisegment),
    Finite(Multisegment),
}

fn parse_any(s: &str) -> Result<AnyLabel> {
    if s.trim_start().starts_with("per") {
        Ok(AnyLabel::Periodic(s.parse::<PeriodicMultisegment>()?))
    } else {
        Ok(AnyLabel::Finite(s.parse::<Multisegment>()?))
    }
}

fn parse_window(s: &str) -> Result<Window> {
    let (lo, hi) = s
        .split_once(':')
        .ok_or_else(|| usage(format!("window must be lo:hi, got {s:?}")))?;
    let lo: i64 = lo
        .trim()
        .parse()
        .map_err(|_| usage(format!("bad window bound {lo:?}")))?;
    let hi: i64 = hi
        .trim()
        .parse()
        .map_err(|_| usage(format!("bad window bound {hi:?}")))?;
    Window::new(lo, hi).map_err(CliError::from)
}

/// Resolved run configuration: flags override the environment, which
/// overrides the defaults.
pub struct Config {
    pub window: Option<Window>,
    pub limits: Limits,
    pub cache_dir: Option<PathBuf>,
    pub format: crate::FormatArg,
}

impl Config {
    fn from_cli(cli: &Cli) -> Result<Config> {
        let window = match &cli.window {
            Some(w) => Some(parse_window(w)?),
            None => None,
        };
        let limits = Limits {
            max_order: cli.limit.unwrap_or(Limits::default().max_order),
        };
        let cache_dir = if cli.no_cache {
            None
        } else if let Some(dir) = &cli.cache_dir {
            Some(dir.clone())
        } else {
            match std::env::var("CYCLIC_HALL_CACHE") {
                Ok(env_dir) if !env_dir.is_empty() => Some(PathBuf::from(env_dir)),
                _ => Some(PathBuf::from(".")),
            }
        };
        Ok(Config {
            window,
            limits,
            cache_dir,
            format: cli.format,
        })
    }
}

struct Ctx {
    window: Option<Window>,
    limits: Limits,
    store: CacheStore,
}

impl Ctx {
    fn window(&self) -> Result<Window> {
        self.window
            .ok_or_else(|| usage("this command needs --window lo:hi"))
    }
}

pub fn run(cli: Cli) -> Result<String> {
    let config = Config::from_cli(&cli)?;
    let store = CacheStore::open(config.cache_dir.clone());
    let mut ctx = Ctx {
        window: config.window,
        limits: config.limits,
        store,
    };
    let rendered = match &cli.command {
        Command::Order { label } => cmd_order(label),
        Command::Fold { m, label } => cmd_fold(*m, label),
        Command::Unfold { label } => cmd_unfold(&ctx, label),
        Command::Closure { x, y } => cmd_closure(x, y),
        Command::Hallpoly {
            m_label,
            n_label,
            p_label,
        } => cmd_hallpoly(&mut ctx, m_label, n_label, p_label),
        Command::Canon { m, dv } => cmd_canon(&mut ctx, *m, dv, false),
        Command::Decomp { m, dv } => cmd_canon(&mut ctx, *m, dv, true),
        Command::Delta { x } => cmd_delta(&ctx, x),
        Command::Mult { m, x, xbar } => cmd_mult(&mut ctx, *m, x, xbar.as_deref()),
        Command::Induce { m, xbar } => cmd_induce(&mut ctx, *m, xbar),
        Command::CanonicalPair { pair } => cmd_canonical_pair(pair),
        Command::Pik { kind, k } => cmd_pik(kind, *k),
        Command::Orbits { kind, k, direct } => cmd_orbits(kind, *k, *direct),
        Command::Dim { kind, k } => cmd_dim(kind, *k),
    }?;
    Ok(rendered.render(config.format))
}

fn cmd_order(label: &str) -> Result<Rendered> {
    let (order, rendered_label) = match parse_any(label)? {
        AnyLabel::Periodic(x) => (x.order(), x.to_string()),
        AnyLabel::Finite(x) => (x.order(), x.to_string()),
    };
    Ok(Rendered::uniform(
        order.to_string(),
        json!({"command": "order", "label": rendered_label, "order": order}),
    ))
}

fn cmd_fold(m: u32, label: &str) -> Result<Rendered> {
    if m == 0 {
        return Err(usage("--m must be positive"));
    }
    let x: Multisegment = label.parse()?;
    let folded = x.fold(m);
    Ok(Rendered::uniform(
        folded.to_string(),
        json!({"command": "fold", "m": m, "input": x.to_string(), "folded": folded.to_string()}),
    ))
}

fn cmd_unfold(ctx: &Ctx, label: &str) -> Result<Rendered> {
    let window = ctx.window()?;
    let x: PeriodicMultisegment = label.parse()?;
    let fiber = x.unfold_fiber_bounded(window, 1_000_000)?;
    let lines: Vec<String> = fiber.iter().map(|f| f.to_string()).collect();
    Ok(Rendered::uniform(
        lines.join("\n"),
        json!({
            "command": "unfold",
            "label": x.to_string(),
            "window": [window.lo, window.hi],
            "count": fiber.len(),
            "fiber": lines,
        }),
    ))
}

fn cmd_closure(x: &str, y: &str) -> Result<Rendered> {
    let (leq, xs, ys) = match (parse_any(x)?, parse_any(y)?) {
        (AnyLabel::Periodic(a), AnyLabel::Periodic(b)) => {
            (a.degeneration_leq(&b)?, a.to_string(), b.to_string())
        }
        (AnyLabel::Finite(a), AnyLabel::Finite(b)) => {
            (a.degeneration_leq(&b)?, a.to_string(), b.to_string())
        }
        _ => {
            return Err(usage(
                "closure expects two labels of the same kind (both periodic or both plain)",
            ))
        }
    };
    Ok(Rendered::uniform(
        leq.to_string(),
        json!({"command": "closure", "x": xs, "y": ys, "leq": leq}),
    ))
}

fn cmd_hallpoly(ctx: &mut Ctx, m_label: &str, n_label: &str, p_label: &str) -> Result<Rendered> {
    let poly_str;
    let labels_json;
    match parse_any(m_label)? {
        AnyLabel::Periodic(m) => {
            let (n, p) = (
                n_label.parse::<PeriodicMultisegment>()?,
                p_label.parse::<PeriodicMultisegment>()?,
            );
            if n.period() != m.period() || p.period() != m.period() {
                return Err(usage("M, N, P must share one period"));
            }
            let mut alg =
                HallAlgebra::with_limits(CyclicQuiver { m: m.period() }, ctx.limits);
            ctx.store.seed_cyclic(&mut alg);
            let g = alg.table.hall_polynomial(&m, &n, &p)?;
            ctx.store.harvest_cyclic(&alg);
            poly_str = g.to_string();
            labels_json = json!({"M": m.to_string(), "N": n.to_string(), "P": p.to_string()});
        }
        AnyLabel::Finite(m) => {
            let (n, p) = (
                n_label.parse::<Multisegment>()?,
                p_label.parse::<Multisegment>()?,
            );
            let window = enclosing_window(&[&m, &n, &p], ctx.window);
            let mut alg = HallAlgebra::with_limits(LinearQuiver { window }, ctx.limits);
            ctx.store.seed_linear(&mut alg);
            let g = alg.table.hall_polynomial(&m, &n, &p)?;
            ctx.store.harvest_linear(&alg);
            poly_str = g.to_string();
            labels_json = json!({"M": m.to_string(), "N": n.to_string(), "P": p.to_string()});
        }
    }
    ctx.store.save()?;
    Ok(Rendered::uniform(
        poly_str.clone(),
        json!({"command": "hallpoly", "labels": labels_json, "poly": poly_str}),
    ))
}

/// Smallest window covering every label, unless one was supplied.
fn enclosing_window(labels: &[&Multisegment], given: Option<Window>) -> Window {
    if let Some(w) = given {
        return w;
    }
    let mut lo = i64::MAX;
    let mut hi = i64::MIN;
    for l in labels {
        if let Some((a, b)) = l.support() {
            lo = lo.min(a);
            hi = hi.max(b);
        }
    }
    if lo > hi {
        (lo, hi) = (0, 0);
    }
    Window::new(lo, hi).unwrap()
}

fn cmd_canon(ctx: &mut Ctx, m: Option<u32>, dv: &str, at_v1: bool) -> Result<Rendered> {
    let dv = parse_dv(dv).ok_or_else(|| usage("--dv must be a comma-separated list"))?;
    match m {
        Some(m) => {
            if m == 0 {
                return Err(usage("--m must be positive"));
            }
            if dv.len() != m as usize {
                return Err(usage(format!(
                    "dimension vector has {} entries but the quiver has {m} vertices",
                    dv.len()
                )));
            }
            let mut alg = HallAlgebra::with_limits(CyclicQuiver { m }, ctx.limits);
            ctx.store.seed_cyclic(&mut alg);
            let out = if at_v1 {
                render_decomp(&mut alg, &dv)?
            } else {
                render_canon(&mut alg, &dv)?
            };
            ctx.store.harvest_cyclic(&alg);
            ctx.store.save()?;
            Ok(out)
        }
        None => {
            let window = ctx.window()?;
            if dv.len() != window.width() as usize {
                return Err(usage(format!(
                    "dimension vector has {} entries but the window has {} vertices",
                    dv.len(),
                    window.width()
                )));
            }
            let mut alg = HallAlgebra::with_limits(LinearQuiver { window }, ctx.limits);
            ctx.store.seed_linear(&mut alg);
            let out = if at_v1 {
                render_decomp(&mut alg, &dv)?
            } else {
                render_canon(&mut alg, &dv)?
            };
            ctx.store.harvest_linear(&alg);
            ctx.store.save()?;
            Ok(out)
        }
    }
}

fn render_canon<Q: HallQuiver>(alg: &mut HallAlgebra<Q>, dv: &[u64]) -> Result<Rendered> {
    let conv = alg.canonical_basis(dv)?;
    let mut text = String::new();
    text.push_str(&format!(
        "# algebra={} dv={} labels={}\n",
        alg.quiver.algebra_id(),
        format_dv(dv),
        conv.labels.len()
    ));
    for (i, l) in conv.labels.iter().enumerate() {
        text.push_str(&format!("label\t{i}\t{l}\n"));
    }
    for (name, matrix) in [("F->B", &conv.f_to_b), ("B->F", &conv.b_to_f)] {
        for (i, row) in matrix.iter().enumerate() {
            let cells: Vec<String> = row.iter().map(|c| c.to_string()).collect();
            text.push_str(&format!("{name}\t{i}\t{}\n", cells.join("\t")));
        }
    }
    let json = json!({
        "command": "canon",
        "algebra": alg.quiver.algebra_id(),
        "dv": dv,
        "labels": conv.labels.iter().map(|l| l.to_string()).collect::<Vec<_>>(),
        "f_to_b": matrix_json(&conv.f_to_b),
        "b_to_f": matrix_json(&conv.b_to_f),
    });
    Ok(Rendered::uniform(text, json))
}

fn matrix_json(m: &[Vec<cyclic_hall_core::hallalg::LaurentInt>]) -> Value {
    Value::Array(
        m.iter()
            .map(|row| {
                Value::Array(
                    row.iter()
                        .map(|c| Value::String(c.to_string()))
                        .collect(),
                )
            })
            .collect(),
    )
}

fn render_decomp<Q: HallQuiver>(alg: &mut HallAlgebra<Q>, dv: &[u64]) -> Result<Rendered> {
    let (labels, matrix) = decomposition_matrix(alg, dv)?;
    let mut text = String::new();
    text.push_str(&format!(
        "# algebra={} dv={} labels={}\n",
        alg.quiver.algebra_id(),
        format_dv(dv),
        labels.len()
    ));
    for (i, l) in labels.iter().enumerate() {
        text.push_str(&format!("label\t{i}\t{l}\n"));
    }
    for row in &matrix {
        let cells: Vec<String> = row.iter().map(|c| c.to_string()).collect();
        text.push_str(&format!("{}\n", cells.join("\t")));
    }
    let json = json!({
        "command": "decomp",
        "algebra": alg.quiver.algebra_id(),
        "dv": dv,
        "labels": labels.iter().map(|l| l.to_string()).collect::<Vec<_>>(),
        "matrix": matrix
            .iter()
            .map(|row| row.iter().map(|c| c.to_string()).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
    });
    Ok(Rendered::uniform(text, json))
}

fn cmd_delta(ctx: &Ctx, x: &str) -> Result<Rendered> {
    let window = ctx.window()?;
    let x: PeriodicMultisegment = x.parse()?;
    let ind = Inducer::with_limits(x.period(), ctx.limits);
    let delta = ind.delta_f(&x, window)?;
    let mut text = String::new();
    text.push_str(&format!("# x={x} window={window}\n"));
    for (label, coeff) in &delta {
        text.push_str(&format!("{label}\t{coeff}\n"));
    }
    let json = json!({
        "command": "delta",
        "x": x.to_string(),
        "window": [window.lo, window.hi],
        "terms": delta
            .iter()
            .map(|(l, c)| json!({"label": l.to_string(), "coeff": c.to_string()}))
            .collect::<Vec<_>>(),
    });
    Ok(Rendered::uniform(text, json))
}

fn make_inducer(ctx: &mut Ctx, m: u32) -> Inducer {
    let mut ind = Inducer::with_limits(m, ctx.limits);
    ctx.store.seed_cyclic(&mut ind.cyclic);
    ind.set_linear_poly_seed(ctx.store.linear_poly_seed());
    ind
}

fn cmd_mult(ctx: &mut Ctx, m: Option<u32>, x: &str, xbar: Option<&str>) -> Result<Rendered> {
    let x: PeriodicMultisegment = x.parse()?;
    if let Some(m) = m {
        if m != x.period() {
            return Err(usage(format!(
                "--m {m} disagrees with the period of {x}"
            )));
        }
    }
    let mut ind = make_inducer(ctx, x.period());
    let out = match xbar {
        Some(xbar) => {
            let xbar: Multisegment = xbar.parse()?;
            let value = ind.multiplicity(&x, &xbar)?;
            Rendered {
                text: format!("{value}\nstable=yes"),
                tsv: format!("{value}\tstable=yes"),
                json: json!({
                    "command": "mult",
                    "x": x.to_string(),
                    "xbar": xbar.to_string(),
                    "multiplicity": value,
                    "stable": true,
                }),
            }
        }
        None => {
            let window = ctx.window()?;
            let report = ind.simple_multiplicities(&x, window)?;
            let stable = if report.stable { "yes" } else { "no" };
            let mut text = format!(
                "# x={} m={} window={} stable={stable}\n",
                report.x,
                x.period(),
                report.window
            );
            for (xbar, mult) in &report.entries {
                text.push_str(&format!("{xbar}\t{mult}\n"));
            }
            Rendered::uniform(
                text,
                json!({
                    "command": "mult",
                    "x": report.x.to_string(),
                    "m": x.period(),
                    "window": [report.window.lo, report.window.hi],
                    "stable": report.stable,
                    "entries": report
                        .entries
                        .iter()
                        .map(|(l, v)| json!({"xbar": l.to_string(), "multiplicity": v}))
                        .collect::<Vec<_>>(),
                }),
            )
        }
    };
    ctx.store.harvest_inducer(&ind);
    ctx.store.save()?;
    Ok(out)
}

fn cmd_induce(ctx: &mut Ctx, m: u32, xbar: &str) -> Result<Rendered> {
    if m == 0 {
        return Err(usage("--m must be positive"));
    }
    let xbar: Multisegment = xbar.parse()?;
    let mut ind = make_inducer(ctx, m);
    let report = ind.induce_simple(&xbar)?;
    let stable = if report.stable { "yes" } else { "no" };
    let mut text = format!(
        "# xbar={} m={} window={} stable={stable}\n",
        report.xbar, report.m, report.window
    );
    for (x, mult) in &report.entries {
        text.push_str(&format!("{x}\t{mult}\n"));
    }
    let json = json!({
        "command": "induce",
        "xbar": report.xbar.to_string(),
        "m": report.m,
        "window": [report.window.lo, report.window.hi],
        "stable": report.stable,
        "entries": report
            .entries
            .iter()
            .map(|(l, v)| json!({"x": l.to_string(), "multiplicity": v}))
            .collect::<Vec<_>>(),
    });
    ctx.store.harvest_inducer(&ind);
    ctx.store.save()?;
    Ok(Rendered::uniform(text, json))
}

fn cmd_canonical_pair(pair: &str) -> Result<Rendered> {
    let pair: PeriodicPair = pair.parse()?;
    let canonical = pair.canonical();
    Ok(Rendered::uniform(
        canonical.to_string(),
        json!({
            "command": "canonical-pair",
            "input": pair.to_string(),
            "canonical": canonical.to_string(),
        }),
    ))
}

fn root_system(kind: &str) -> Result<RootSystem> {
    let kind: CartanKind = kind.parse()?;
    Ok(RootSystem::of_kind(kind)?)
}

fn cmd_pik(kind: &str, k: i64) -> Result<Rendered> {
    let rs = root_system(kind)?;
    let pik = pi_k(&rs, k)?;
    let lines: Vec<String> = pik.elements.iter().map(format_element).collect();
    Ok(Rendered::uniform(
        lines.join("\n"),
        json!({
            "command": "pik",
            "type": kind,
            "k": k,
            "a": pik.a,
            "b": pik.b,
            "elements": pik
                .elements
                .iter()
                .map(|(root, level)| json!({"root": root, "level": level}))
                .collect::<Vec<_>>(),
        }),
    ))
}

fn cmd_orbits(kind: &str, k: i64, direct: bool) -> Result<Rendered> {
    let rs = root_system(kind)?;
    if direct && k != 1 {
        return Err(usage("--direct enumeration is defined for k = 1 only"));
    }
    let count = if direct {
        orbit_count_direct_k1(&rs)?
    } else {
        orbit_count(&rs, k)?
    };
    Ok(Rendered::uniform(
        count.to_string(),
        json!({
            "command": "orbits",
            "type": kind,
            "k": k,
            "direct": direct,
            "orbits": count.to_string(),
        }),
    ))
}

fn cmd_dim(kind: &str, k: i64) -> Result<Rendered> {
    let rs = root_system(kind)?;
    let dim = dim_simple(&rs, k)?;
    Ok(Rendered::uniform(
        dim.to_string(),
        json!({"command": "dim", "type": kind, "k": k, "dim": dim.to_string()}),
    ))
}
