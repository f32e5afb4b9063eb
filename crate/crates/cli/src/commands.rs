use std::sync::Arc;
use std::time::Instant;

use anyhow::Result;
use serde_json::{json, Value};
use shintani_core::characters::{
    clifford_nilpotent_chars, dixon_table, orbit_map, orbit_twist_offenders, sh_fixed_rows, verify_invariance,
    CharacterTable,
};
use shintani_core::flags::{cycle_report, CycleOptions};
use shintani_core::groups::{geometric_partition, ClassTable, Family, GroupTable};
use shintani_core::twist::{lang_audit, n_f, verify_twist, Check};

use crate::config::RunConfig;
use crate::report::{Report, Table};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Twist,
    Characters,
    Flags,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Twist => "twist",
            Command::Characters => "characters",
            Command::Flags => "flags",
        }
    }
}

pub fn run(cmd: Command, cfg: &RunConfig) -> Result<Report> {
    match cmd {
        Command::Twist => cmd_twist(cfg),
        Command::Characters => cmd_characters(cfg),
        Command::Flags => cmd_flags(cfg),
    }
}

fn classes(cfg: &RunConfig) -> Result<ClassTable> {
    let gt = GroupTable::build(cfg.spec()?, cfg.max_order as u128)?;
    Ok(ClassTable::build(Arc::new(gt)))
}

fn s<T: ToString>(x: T) -> String {
    x.to_string()
}

pub fn cmd_twist(cfg: &RunConfig) -> Result<Report> {
    let start = Instant::now();
    let ct = classes(cfg)?;
    let tp = n_f(&ct, cfg.seed)?;
    let rep = verify_twist(&ct, &tp, cfg.seed);
    let mut checks = rep.checks.clone();
    if cfg.family == Family::GL {
        checks.push(Check::from_bool(
            "n_F is the identity for GL",
            rep.moved.is_empty() && rep.sh_order == 1,
            format!("{} moved classes, sh_order {}", rep.moved.len(), rep.sh_order),
        ));
    }

    let audit = lang_audit(&ct, cfg.seed);
    let dim = cfg.n * cfg.n * cfg.r;
    checks.push(Check::from_bool(
        "Lang solutions sound on every element",
        audit.failures.is_empty(),
        if audit.failures.is_empty() { format!("{} elements", audit.elements) } else { audit.failures.join("; ") },
    ));
    checks.push(Check::from_bool(
        "Lang kernel dimension n^2 r",
        audit.kernel_dims == [dim],
        format!("observed {:?}, expected {dim}", audit.kernel_dims),
    ));

    let gp = geometric_partition(&ct, cfg.m_max)?;
    let crossing: Vec<usize> = (0..ct.len()).filter(|&c| gp.block_of[c] != gp.block_of[tp.image(c)]).collect();
    checks.push(Check::new("n_F preserves geometric classes", &crossing, "classes"));
    if cfg.family == Family::GL {
        let merged: Vec<usize> = gp.blocks.iter().filter(|b| b.len() > 1).flat_map(|b| b.iter().copied()).collect();
        checks.push(Check::new("geometric classes of GL are rational classes", &merged, "classes"));
    }

    let mut table = Table::new("classes", &["class", "size", "level", "order", "semisimple", "unipotent", "image", "fixed", "lang_degree"]);
    for c in &rep.classes {
        table.push(vec![
            s(c.class),
            s(c.size),
            s(c.level),
            s(c.element_order),
            s(c.semisimple),
            s(c.unipotent),
            s(c.image),
            s(c.fixed),
            s(c.lang_degree),
        ]);
    }
    let data = json!({
        "order": ct.group().order(),
        "num_classes": ct.len(),
        "classes": ct.to_json(),
        "n_f": tp,
        "sh_order": rep.sh_order,
        "moved": rep.moved,
        "twist_classes": rep.classes,
        "lang_audit": audit,
        "geometric": gp,
    });
    Ok(Report::new("twist", cfg, checks, data, vec![table], start.elapsed().as_secs_f64()))
}

fn table_json(tab: &CharacterTable) -> Value {
    json!({
        "e": tab.prime.e,
        "ell": tab.prime.ell,
        "theta": tab.prime.theta,
        "class_sizes": tab.sizes,
        "degrees": tab.degrees,
        "rows": tab.rows,
    })
}

pub fn cmd_characters(cfg: &RunConfig) -> Result<Report> {
    let start = Instant::now();
    let ct = classes(cfg)?;
    let tab = dixon_table(&ct, cfg.max_classes)?;
    let tp = n_f(&ct, cfg.seed)?;
    let order = ct.group().order() as u64;
    let mut checks = vec![
        Check::from_bool("row orthogonality mod ell", tab.row_orthogonality(), format!("ell = {}", tab.prime.ell)),
        Check::from_bool("column orthogonality mod ell", tab.column_orthogonality(), format!("ell = {}", tab.prime.ell)),
        Check::from_bool(
            "sum of squared degrees is |G|",
            tab.degrees.iter().map(|d| d * d).sum::<u64>() == order,
            format!("|G| = {order}, {} characters", tab.len()),
        ),
    ];
    let fixed = sh_fixed_rows(&tab, &tp);
    let mut data = json!({
        "order": order,
        "num_classes": ct.len(),
        "table": table_json(&tab),
        "n_f": tp,
        "sh_fixed": fixed,
    });

    let mut values = Table::new("table", &["row", "degree"]);
    values.header.extend((0..ct.len()).map(|c| format!("c{c}")));
    for i in 0..tab.len() {
        let mut row = vec![s(i), s(tab.degrees[i])];
        row.extend(tab.mod_row(i).into_iter().map(s));
        values.push(row);
    }
    let mut summary = Table::new("rows", &["row", "degree", "sh_fixed", "orbit", "orbit_type", "orbit_label", "multiplicity", "primitive"]);

    let spec = ct.group().spec();
    let orbit_stage = cfg.r >= 2 && !(cfg.family == Family::SL && (cfg.n as u32).is_multiple_of(cfg.p));
    if orbit_stage {
        let (ctx, om) = orbit_map(&ct, &tab)?;
        let off = orbit_twist_offenders(&ctx, &tab, &om, &tp);
        checks.push(Check {
            name: "orbit map is Sh-invariant".into(),
            pass: off.is_empty(),
            detail: if off.is_empty() { format!("all {} rows", tab.len()) } else { format!("offending rows {off:?}") },
        });
        for (i, ro) in om.rows.iter().enumerate() {
            let orb = &om.orbits[ro.orbit];
            summary.push(vec![
                s(i),
                s(tab.degrees[i]),
                s(fixed[i]),
                s(ro.orbit),
                serde_json::to_value(orb.kind)?.as_str().unwrap_or_default().to_string(),
                orb.label.clone().unwrap_or_default(),
                s(ro.multiplicity),
                s(ro.primitive),
            ]);
        }
        data["orbit_map"] = serde_json::to_value(&om)?;
        data["orbit_twist_offenders"] = json!(off);

        if spec.family == Family::SL && spec.n == 2 && spec.r == 2 && spec.p != 2 {
            let cl = clifford_nilpotent_chars(&ct, &tab, &ctx)?;
            let inv = verify_invariance(&ct, &tab, &om, &tp, &cl)?;
            checks.extend(cl.checks.iter().map(|c| Check { name: format!("induced: {}", c.name), ..c.clone() }));
            checks.extend(inv.checks.iter().cloned());
            data["clifford"] = serde_json::to_value(&cl)?;
            data["invariance"] = serde_json::to_value(&inv)?;
        }
    } else {
        for i in 0..tab.len() {
            summary.push(vec![s(i), s(tab.degrees[i]), s(fixed[i]), String::new(), String::new(), String::new(), String::new(), String::new()]);
        }
        data["orbit_map"] = Value::Null;
    }
    Ok(Report::new("characters", cfg, checks, data, vec![values, summary], start.elapsed().as_secs_f64()))
}

/// Flag varieties always live in `GL_{nr}`; the report is named `flags-gl…`.
pub fn cmd_flags(cfg: &RunConfig) -> Result<Report> {
    let start = Instant::now();
    let cfg = RunConfig { family: Family::GL, ..cfg.clone() };
    let opts = CycleOptions { m_list: cfg.m_list.clone(), xcheck: cfg.xcheck, max_flags: cfg.max_flags as u128 };
    let mut checks = Vec::new();
    let mut reports = Vec::new();
    let mut counts = Table::new("counts", &["z", "case", "m", "count", "brute", "coxeter", "n_comp"]);
    let opt = |x: Option<u64>| x.map(s).unwrap_or_default();
    for z in cfg.z_list() {
        let rep = cycle_report(cfg.n, cfg.r, cfg.p, cfg.k, z, &opts)?;
        checks.extend(rep.checks.iter().map(|c| Check { name: format!("z={z}: {}", c.name), ..c.clone() }));
        for row in &rep.counts {
            counts.push(vec![s(z), rep.case.label().into(), s(row.m), s(row.count), opt(row.brute), opt(row.coxeter), opt(row.n_comp)]);
        }
        reports.push(rep);
    }
    let data = json!({ "cycles": reports });
    Ok(Report::new("flags", &cfg, checks, data, vec![counts], start.elapsed().as_secs_f64()))
}

/// The fixed grid behind `verify-all`, inheriting seed, guards and output
/// directory from `base`.
pub fn suite(base: &RunConfig) -> Vec<(Command, RunConfig)> {
    let at = |family, n, p, r| RunConfig { family, n, p, k: 1, r, z: Vec::new(), ..base.clone() };
    vec![
        (Command::Twist, RunConfig { m_max: 4, ..at(Family::GL, 2, 3, 2) }),
        (Command::Twist, RunConfig { m_max: 6, ..at(Family::SL, 2, 3, 2) }),
        (Command::Characters, at(Family::SL, 2, 3, 2)),
        (Command::Characters, at(Family::SL, 2, 5, 2)),
        (Command::Flags, RunConfig { z: vec![1, 2, 3, 4], m_list: vec![1, 2, 3], xcheck: true, ..at(Family::GL, 2, 3, 2) }),
        (Command::Flags, RunConfig { z: vec![2], m_list: vec![2, 3], xcheck: true, ..at(Family::GL, 3, 2, 2) }),
    ]
}
