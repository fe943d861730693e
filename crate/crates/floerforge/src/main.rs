//! Command-line surface: validation, homology, decomposition, Conway
//! pipelines, polytopes, constraint gauntlets, candidate search, Khovanov
//! arithmetic, catalog access, and the torus-link detection pipelines.
//! All output is deterministic byte-for-byte across runs and thread
//! counts.
//!
//! Exit codes: 0 success / verdict matched, 1 verdict mismatch,
//! 2 input error, 3 internal invariant breach.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use floerforge::botany::{self, SearchWindow};
use floerforge::catalog;
use floerforge::complexes::{project_to_hfk, BifilteredComplex, BigradedModule, ComponentData};
use floerforge::constraints::{self, Verdict};
use floerforge::decomposition::{decompose_e2, summand_census_oracle, Decomposition, SummandDescriptor};
use floerforge::exactalg::{FieldKind, HalfInt};
use floerforge::invariants::{self, LinkingMode};
use floerforge::jsonio;
use floerforge::khovanov::{self, KhTable};

struct CliError {
    code: i32,
    message: String,
}

impl CliError {
    fn input(msg: impl Into<String>) -> CliError {
        CliError { code: 2, message: msg.into() }
    }
}

struct Flags {
    json: bool,
    field: FieldKind,
    mode: LinkingMode,
    threads: usize,
    window: Option<i64>,
    budget: Option<usize>,
    lk: Option<i64>,
    rules: Vec<String>,
    link: Option<String>,
    complex: Option<String>,
    fixed: Option<String>,
    unknotted: bool,
    positional: Vec<String>,
}

fn parse_flags(args: &[String]) -> Result<Flags, CliError> {
    let mut f = Flags {
        json: false,
        field: FieldKind::GF2,
        mode: LinkingMode::LowestCoefficient,
        threads: 1,
        window: None,
        budget: None,
        lk: None,
        rules: Vec::new(),
        link: None,
        complex: None,
        fixed: None,
        unknotted: false,
        positional: Vec::new(),
    };
    let mut it = args.iter().peekable();
    while let Some(a) = it.next() {
        let mut take = |name: &str| -> Result<String, CliError> {
            it.next()
                .cloned()
                .ok_or_else(|| CliError::input(format!("{} needs a value", name)))
        };
        match a.as_str() {
            "--json" => f.json = true,
            "--unknotted" => f.unknotted = true,
            "--field" => {
                f.field = match take("--field")?.as_str() {
                    "gf2" => FieldKind::GF2,
                    "q" => FieldKind::Q,
                    other => return Err(CliError::input(format!("unknown field {:?}", other))),
                }
            }
            "--mode" => {
                f.mode = match take("--mode")?.as_str() {
                    "strict-hoste" => LinkingMode::StrictHoste,
                    "paper-lowest" | "lowest" => LinkingMode::LowestCoefficient,
                    other => return Err(CliError::input(format!("unknown mode {:?}", other))),
                }
            }
            "--threads" => {
                f.threads = take("--threads")?
                    .parse()
                    .map_err(|_| CliError::input("--threads needs a positive integer"))?;
                if f.threads == 0 {
                    return Err(CliError::input("--threads needs a positive integer"));
                }
            }
            "--window" => {
                f.window = Some(
                    take("--window")?
                        .parse()
                        .map_err(|_| CliError::input("--window needs a doubled integer bound"))?,
                )
            }
            "--budget" => {
                f.budget = Some(
                    take("--budget")?
                        .parse()
                        .map_err(|_| CliError::input("--budget needs an integer"))?,
                )
            }
            "--lk" => {
                f.lk = Some(
                    take("--lk")?
                        .parse()
                        .map_err(|_| CliError::input("--lk needs an integer"))?,
                )
            }
            "--rules" => {
                let v = take("--rules")?;
                f.rules = v.split(',').map(|s| s.trim().to_string()).collect();
            }
            "--link" => f.link = Some(take("--link")?),
            "--complex" => f.complex = Some(take("--complex")?),
            "--fixed" => f.fixed = Some(take("--fixed")?),
            other if other.starts_with("--") => {
                return Err(CliError::input(format!("unknown flag {:?}", other)));
            }
            other => f.positional.push(other.to_string()),
        }
    }
    Ok(f)
}

fn read_complex(path: &str) -> Result<BifilteredComplex, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("cannot read {}: {}", path, e)))?;
    jsonio::complex_from_json(&text).map_err(CliError::input)
}

/// The module a subcommand operates on: an explicit complex file or a
/// catalog link id.
fn resolve_module(f: &Flags) -> Result<(BigradedModule, Option<ComponentData>), CliError> {
    if let Some(path) = &f.complex {
        let c = read_complex(path)?;
        let violations = c.validate();
        if !violations.is_empty() {
            return Err(CliError::input(format!("invalid complex: {}", violations[0])));
        }
        return Ok((c.associated_graded_homology(), None));
    }
    if let Some(id) = &f.link {
        let entry = catalog::lookup(id).map_err(|e| CliError::input(e.to_string()))?;
        let module = entry.module.clone().ok_or_else(|| {
            CliError::input(format!("catalog entry {} has no bigraded module", id))
        })?;
        return Ok((module, Some(entry.cd)));
    }
    Err(CliError::input("needs --complex FILE or --link ID"))
}

fn render_halfint_map(m: &BTreeMap<HalfInt, usize>) -> String {
    m.iter()
        .map(|(k, v)| format!("{}: {}", k, v))
        .collect::<Vec<_>>()
        .join(", ")
}

fn cmd_validate(f: &Flags) -> Result<String, CliError> {
    let path = f
        .positional
        .first()
        .or(f.complex.as_ref())
        .ok_or_else(|| CliError::input("validate needs a complex file"))?;
    let c = read_complex(path)?;
    let violations = c.validate();
    if f.json {
        let items: Vec<String> = violations.iter().map(|v| jsonio::json_string(&v.0)).collect();
        let out = format!(
            "{{\"schema\":\"floerforge/validate/1\",\"ok\":{},\"violations\":[{}]}}",
            violations.is_empty(),
            items.join(",")
        );
        if violations.is_empty() {
            Ok(out)
        } else {
            Err(CliError { code: 1, message: out })
        }
    } else if violations.is_empty() {
        Ok(format!("ok: {} generators, {} arrows", c.len(), c.arrow_count()))
    } else {
        let mut s = String::new();
        for v in &violations {
            let _ = writeln!(s, "violation: {}", v);
        }
        Err(CliError { code: 1, message: s.trim_end().to_string() })
    }
}

fn cmd_homology(f: &Flags) -> Result<String, CliError> {
    let path = f
        .positional
        .first()
        .or(f.complex.as_ref())
        .ok_or_else(|| CliError::input("homology needs a complex file"))?;
    let c = read_complex(path)?;
    let violations = c.validate();
    if !violations.is_empty() {
        return Err(CliError::input(format!("invalid complex: {}", violations[0])));
    }
    let e1 = c.associated_graded_homology();
    let total = c.total_homology();
    if f.json {
        let total_parts: Vec<String> = total
            .iter()
            .map(|(m, r)| format!("{{\"maslov\":\"{}\",\"rank\":{}}}", m.doubled(), r))
            .collect();
        Ok(format!(
            "{{\"schema\":\"floerforge/homology/1\",\"associated_graded\":{},\"total\":[{}]}}",
            jsonio::module_to_json(&e1),
            total_parts.join(",")
        ))
    } else {
        let mut s = String::new();
        let _ = writeln!(s, "associated-graded ranks:");
        for (g, r) in e1.ranks.iter() {
            let _ = writeln!(s, "  {}: {}", g, r);
        }
        let _ = writeln!(s, "total homology by maslov: {}", render_halfint_map(&total));
        Ok(s.trim_end().to_string())
    }
}

fn cmd_decompose(f: &Flags) -> Result<String, CliError> {
    let path = f
        .positional
        .first()
        .or(f.complex.as_ref())
        .ok_or_else(|| CliError::input("decompose needs a complex file"))?;
    let c = read_complex(path)?;
    let d = decompose_e2(&c).map_err(|e| CliError::input(e.to_string()))?;
    let census = summand_census_oracle(&c).map_err(|e| CliError::input(e.to_string()))?;
    if d != census {
        return Err(CliError {
            code: 3,
            message: format!(
                "internal invariant breach: decomposition {} disagrees with census {}",
                d, census
            ),
        });
    }
    if f.json {
        let items: Vec<String> = d
            .summands
            .iter()
            .map(|s| jsonio::json_string(&s.to_string()))
            .collect();
        Ok(format!(
            "{{\"schema\":\"floerforge/decompose/1\",\"summands\":[{}]}}",
            items.join(",")
        ))
    } else {
        Ok(d.summands
            .iter()
            .map(|s| s.to_string())
            .collect::<Vec<_>>()
            .join("\n"))
    }
}

fn cmd_conway(f: &Flags) -> Result<String, CliError> {
    let (module, _) = resolve_module(f)?;
    let alex = invariants::alexander_single(&module).map_err(|e| CliError::input(e.to_string()))?;
    let in_t = alex.substitute_square();
    let nabla = invariants::conway_from_alexander(&alex)
        .map_err(|e| CliError::input(e.to_string()))?;
    let strict = invariants::linking_from_conway(&nabla, LinkingMode::StrictHoste);
    let lowest = invariants::linking_from_conway(&nabla, LinkingMode::LowestCoefficient);
    let chosen = match f.mode {
        LinkingMode::StrictHoste => &strict,
        LinkingMode::LowestCoefficient => &lowest,
    };
    if f.json {
        Ok(format!(
            "{{\"schema\":\"floerforge/conway/1\",\"alexander\":{},\"nabla_t\":{},\"nabla\":{},\"linking_strict_hoste\":{},\"linking_paper_lowest\":{},\"linking\":{}}}",
            jsonio::json_string(&alex.render(&["t"])),
            jsonio::json_string(&in_t.render(&["t"])),
            jsonio::json_string(&nabla.render(&["z"])),
            jsonio::json_string(&strict.to_string()),
            jsonio::json_string(&lowest.to_string()),
            jsonio::json_string(&chosen.to_string()),
        ))
    } else {
        let mut s = String::new();
        let _ = writeln!(s, "alexander: {}", alex.render(&["t"]));
        let _ = writeln!(s, "nabla(t - 1/t): {}", in_t.render(&["t"]));
        let _ = writeln!(s, "nabla: {}", nabla.render(&["z"]));
        let _ = writeln!(s, "linking (strict-hoste): {}", strict);
        let _ = writeln!(s, "linking (paper-lowest): {}", lowest);
        Ok(s.trim_end().to_string())
    }
}

fn cmd_polytope(f: &Flags) -> Result<String, CliError> {
    let (module, _) = resolve_module(f)?;
    let hull = invariants::floer_polytope(&module).map_err(|e| CliError::input(e.to_string()))?;
    let spectrum = invariants::delta_spectrum(&module);
    let thin = invariants::is_thin(&module);
    let slices: Vec<String> = [1u8, 2u8]
        .iter()
        .filter_map(|axis| {
            invariants::dual_thurston_axis_slice(&module, *axis)
                .ok()
                .map(|s| format!("axis {}: [{}, {}]", axis, s.lo, s.hi))
        })
        .collect();
    if f.json {
        let verts: Vec<String> = hull
            .vertices
            .iter()
            .map(|(a, b)| format!("[\"{}\",\"{}\"]", a.doubled(), b.doubled()))
            .collect();
        let deltas: Vec<String> = spectrum
            .values
            .iter()
            .map(|(d, r)| format!("{{\"delta\":\"{}\",\"rank\":{}}}", d.doubled(), r))
            .collect();
        Ok(format!(
            "{{\"schema\":\"floerforge/polytope/1\",\"vertices\":[{}],\"thin\":{},\"delta\":[{}],\"dual_slices\":[{}]}}",
            verts.join(","),
            thin,
            deltas.join(","),
            slices
                .iter()
                .map(|s| jsonio::json_string(s))
                .collect::<Vec<_>>()
                .join(","),
        ))
    } else {
        let mut s = String::new();
        let verts: Vec<String> = hull
            .vertices
            .iter()
            .map(|(a, b)| format!("({},{})", a, b))
            .collect();
        let _ = writeln!(s, "polytope vertices (ccw): {}", verts.join(" "));
        let _ = writeln!(s, "thin: {}", thin);
        let deltas: Vec<String> = spectrum
            .values
            .iter()
            .map(|(d, r)| format!("{}:{}", d, r))
            .collect();
        let _ = writeln!(s, "delta spectrum: {}", deltas.join(", "));
        for line in slices {
            let _ = writeln!(s, "dual thurston slice {}", line);
        }
        Ok(s.trim_end().to_string())
    }
}

fn cmd_gauntlet(f: &Flags) -> Result<String, CliError> {
    let (module, cd) = resolve_module(f)?;
    let cd = match cd {
        Some(cd) => cd,
        None => {
            let lk = f
                .lk
                .ok_or_else(|| CliError::input("gauntlet on a raw complex needs --lk"))?;
            let mut cd = ComponentData::two_component(lk);
            if f.unknotted {
                cd.unknotted = vec![Some(true), Some(true)];
            }
            cd
        }
    };
    let hfk = project_to_hfk(&module, cd.n_components);
    let mut reports = Vec::new();
    reports.push(constraints::check_symmetry(&module, false));
    reports.extend(constraints::check_parity_rules(Some(&module), &hfk, &cd));
    reports.push(constraints::check_global_degeneration(&hfk, cd.n_components));
    for axis in [1, 2] {
        reports.push(constraints::check_braid_axis(&module, &cd, axis));
    }
    reports.push(constraints::check_braid_polytope(&module, &cd));
    reports.sort_by(|a, b| a.rule.cmp(&b.rule));
    let failed = reports.iter().any(|r| r.verdict == Verdict::Fail);
    if f.json {
        let items: Vec<String> = reports
            .iter()
            .map(|r| {
                format!(
                    "{{\"rule\":{},\"verdict\":{},\"witness\":{}}}",
                    jsonio::json_string(&r.rule),
                    jsonio::json_string(&r.verdict.to_string()),
                    jsonio::json_string(&r.witness)
                )
            })
            .collect();
        let out = format!(
            "{{\"schema\":\"floerforge/gauntlet/1\",\"reports\":[{}]}}",
            items.join(",")
        );
        if failed {
            Err(CliError { code: 1, message: out })
        } else {
            Ok(out)
        }
    } else {
        let mut s = String::new();
        for r in &reports {
            let _ = writeln!(s, "{}", r);
        }
        let out = s.trim_end().to_string();
        if failed {
            Err(CliError { code: 1, message: out })
        } else {
            Ok(out)
        }
    }
}

fn cmd_botany(f: &Flags) -> Result<String, CliError> {
    let budget = f.budget.ok_or_else(|| CliError::input("botany needs --budget"))?;
    let window = f.window.ok_or_else(|| CliError::input("botany needs --window (doubled bound)"))?;
    let lk = f.lk.ok_or_else(|| CliError::input("botany needs --lk"))?;
    if budget > 24 {
        return Err(CliError::input("budget above the tractability guard (24)"));
    }
    let a_max = HalfInt::from_doubled(window);
    let fixed = match &f.fixed {
        None => Decomposition::default(),
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::input(format!("cannot read {}: {}", path, e)))?;
            let mut summands = Vec::new();
            for line in text.lines() {
                let line = line.trim();
                if line.is_empty() {
                    continue;
                }
                summands.push(
                    line.parse::<SummandDescriptor>()
                        .map_err(CliError::input)?,
                );
            }
            Decomposition::new(summands)
        }
    };
    let w = SearchWindow::symmetric(a_max, budget, f.field, lk);
    let cands = botany::enumerate_candidates(&w, &fixed)
        .map_err(|e| CliError::input(e.to_string()))?;
    let full: Vec<botany::Candidate> = cands
        .into_iter()
        .filter(|c| c.decomposition.total_rank() == budget)
        .collect();
    let mut cd = ComponentData::two_component(lk);
    cd.unknotted = vec![Some(true), Some(true)];
    let rule_names: Vec<&str> = if f.rules.is_empty() || f.rules == ["all"] {
        botany::DEFAULT_RULE_ORDER.to_vec()
    } else {
        f.rules.iter().map(|s| s.as_str()).collect()
    };
    let (survivors, ledger) = botany::run_gauntlet(full, &rule_names, &cd, f.threads);
    if f.json {
        let surv: Vec<String> = survivors
            .iter()
            .map(|c| jsonio::json_string(&c.decomposition.render()))
            .collect();
        let led: Vec<String> = ledger
            .iter()
            .map(|(c, r)| {
                format!(
                    "{{\"candidate\":{},\"rule\":{},\"witness\":{}}}",
                    jsonio::json_string(c),
                    jsonio::json_string(&r.rule),
                    jsonio::json_string(&r.witness)
                )
            })
            .collect();
        Ok(format!(
            "{{\"schema\":\"floerforge/botany/1\",\"survivors\":[{}],\"eliminated\":[{}]}}",
            surv.join(","),
            led.join(",")
        ))
    } else {
        let mut s = String::new();
        let _ = writeln!(s, "survivors ({}):", survivors.len());
        for c in &survivors {
            let _ = writeln!(s, "  {}", c.decomposition);
        }
        let _ = writeln!(s, "eliminated ({}):", ledger.len());
        for (c, r) in &ledger {
            let _ = writeln!(s, "  {}  [{}: {}]", c, r.rule, r.witness);
        }
        Ok(s.trim_end().to_string())
    }
}

fn cmd_kh(f: &Flags) -> Result<String, CliError> {
    let table: KhTable = if let Some(path) = f.positional.first() {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::input(format!("cannot read {}: {}", path, e)))?;
        KhTable::from_json(&text).map_err(CliError::input)?
    } else if let Some(id) = &f.link {
        catalog::lookup(id)
            .map_err(|e| CliError::input(e.to_string()))?
            .kh
            .ok_or_else(|| CliError::input(format!("catalog entry {} has no Khovanov table", id)))?
    } else {
        return Err(CliError::input("kh needs a table file or --link ID"));
    };
    let q = table.total_rank(FieldKind::Q);
    let f2 = table.total_rank(FieldKind::GF2);
    let reduced = table.reduced_rank_f2().map_err(|e| CliError::input(e.to_string()))?;
    let lee = khovanov::lee_data(&table);
    let thin = khovanov::kh_thin_s_chi(&table);
    let dowlin = khovanov::dowlin_bound(reduced, 2);
    if f.json {
        Ok(format!(
            "{{\"schema\":\"floerforge/kh/1\",\"rank_q\":{},\"rank_gf2\":{},\"reduced_gf2\":{},\"dowlin_bound_two_components\":{},\"lee_gradings\":[{}],\"lee_lk\":{},\"thin\":{},\"s\":{},\"chi_bound\":{}}}",
            q,
            f2,
            reduced,
            dowlin,
            lee.surviving
                .iter()
                .map(|i| i.to_string())
                .collect::<Vec<_>>()
                .join(","),
            lee.lk.map(|v| v.to_string()).unwrap_or_else(|| "null".into()),
            thin.thin,
            thin.s.map(|v| v.to_string()).unwrap_or_else(|| "null".into()),
            thin.chi_bound.map(|v| v.to_string()).unwrap_or_else(|| "null".into()),
        ))
    } else {
        let mut s = String::new();
        let _ = writeln!(s, "rank over Q: {}", q);
        let _ = writeln!(s, "rank over GF(2): {}", f2);
        let _ = writeln!(s, "reduced rank over GF(2): {}", reduced);
        let _ = writeln!(s, "knot Floer bound (two components): {}", dowlin);
        let _ = writeln!(
            s,
            "Lee gradings: {:?}  linking: {}",
            lee.surviving,
            lee.lk.map(|v| v.to_string()).unwrap_or_else(|| "n/a".into())
        );
        let _ = writeln!(
            s,
            "thin: {}  s: {}  chi >= {}",
            thin.thin,
            thin.s.map(|v| v.to_string()).unwrap_or_else(|| "n/a".into()),
            thin.chi_bound.map(|v| v.to_string()).unwrap_or_else(|| "n/a".into())
        );
        Ok(s.trim_end().to_string())
    }
}

fn cmd_catalog(f: &Flags) -> Result<String, CliError> {
    match f.positional.first().map(|s| s.as_str()) {
        Some("list") => {
            let ids = catalog::known_ids();
            if f.json {
                let items: Vec<String> = ids.iter().map(|s| jsonio::json_string(s)).collect();
                Ok(format!(
                    "{{\"schema\":\"floerforge/catalog-list/1\",\"ids\":[{}]}}",
                    items.join(",")
                ))
            } else {
                Ok(ids.join("\n"))
            }
        }
        Some("show") => {
            let id = f
                .positional
                .get(1)
                .ok_or_else(|| CliError::input("catalog show needs an id"))?;
            let entry = catalog::lookup(id).map_err(|e| CliError::input(e.to_string()))?;
            if f.json {
                let complex = entry
                    .complex
                    .as_ref()
                    .map(jsonio::complex_to_json)
                    .unwrap_or_else(|| "null".to_string());
                let kh = entry
                    .kh
                    .as_ref()
                    .map(|t| t.to_json())
                    .unwrap_or_else(|| "null".to_string());
                Ok(format!(
                    "{{\"schema\":\"floerforge/catalog-entry/1\",\"id\":{},\"components\":{},\"hfk\":{},\"complex\":{},\"kh\":{},\"provenance\":{}}}",
                    jsonio::json_string(&entry.id),
                    entry.cd.n_components,
                    jsonio::hfk_to_json(&entry.hfk),
                    complex,
                    kh,
                    jsonio::json_string(&entry.provenance),
                ))
            } else {
                let mut s = String::new();
                let _ = writeln!(s, "id: {}", entry.id);
                let _ = writeln!(s, "components: {}", entry.cd.n_components);
                if entry.cd.n_components >= 2 {
                    let _ = writeln!(s, "lk(0,1): {}", entry.cd.lk_pair(0, 1));
                }
                if let Some(d) = &entry.decomposition {
                    let _ = writeln!(s, "decomposition: {}", d);
                }
                let _ = writeln!(s, "projected ranks (A, maslov, rank):");
                for ((a, m), r) in entry.hfk.iter() {
                    let _ = writeln!(s, "  {} {} {}", a, m, r);
                }
                if !entry.hfk_alternates.is_empty() {
                    let _ = writeln!(
                        s,
                        "ambiguous entry: {} alternate rank table(s) stored",
                        entry.hfk_alternates.len()
                    );
                }
                let _ = writeln!(s, "provenance: {}", entry.provenance);
                Ok(s.trim_end().to_string())
            }
        }
        Some("selfcheck") => {
            let failures = catalog::selfcheck_catalog();
            if failures.is_empty() {
                Ok("catalog selfcheck: all entries pass".to_string())
            } else {
                let mut s = String::new();
                for (id, rule, detail) in failures {
                    let _ = writeln!(s, "{}: {} ({})", id, rule, detail);
                }
                Err(CliError { code: 1, message: s.trim_end().to_string() })
            }
        }
        _ => Err(CliError::input("catalog needs: list | show <id> | selfcheck")),
    }
}

fn cmd_detect(f: &Flags) -> Result<String, CliError> {
    let target = f
        .positional
        .first()
        .ok_or_else(|| CliError::input("detect needs a target: t28 | t210"))?;
    let n = match target.as_str() {
        "t28" => 4,
        "t210" => 5,
        other => return Err(CliError::input(format!("unknown detect target {:?}", other))),
    };
    let report = botany::detect_t2(n, f.threads);
    if f.json {
        let steps: Vec<String> = report.steps.iter().map(|s| jsonio::json_string(s)).collect();
        let cands: Vec<String> = report
            .candidates
            .iter()
            .map(|s| jsonio::json_string(s))
            .collect();
        let ledger: Vec<String> = report
            .ledger
            .iter()
            .map(|(c, r)| {
                format!(
                    "{{\"candidate\":{},\"rule\":{},\"witness\":{}}}",
                    jsonio::json_string(c),
                    jsonio::json_string(&r.rule),
                    jsonio::json_string(&r.witness)
                )
            })
            .collect();
        let out = format!(
            "{{\"schema\":\"floerforge/detect/1\",\"target\":{},\"steps\":[{}],\"candidates\":[{}],\"eliminated\":[{}],\"survivors\":[{}],\"verdict\":{}}}",
            jsonio::json_string(&report.target),
            steps.join(","),
            cands.join(","),
            ledger.join(","),
            report
                .survivors
                .iter()
                .map(|s| jsonio::json_string(s))
                .collect::<Vec<_>>()
                .join(","),
            report
                .verdict
                .as_ref()
                .map(|v| jsonio::json_string(v))
                .unwrap_or_else(|| "null".to_string()),
        );
        if report.matched() {
            Ok(out)
        } else {
            Err(CliError { code: 1, message: out })
        }
    } else {
        let mut s = String::new();
        let _ = writeln!(s, "target: {}", report.target);
        for step in &report.steps {
            let _ = writeln!(s, "  - {}", step);
        }
        let _ = writeln!(s, "candidates:");
        for c in &report.candidates {
            let _ = writeln!(s, "  {}", c);
        }
        let _ = writeln!(s, "eliminations:");
        for (c, r) in &report.ledger {
            let _ = writeln!(s, "  {}  [{}: {}]", c, r.rule, r.witness);
        }
        match &report.verdict {
            Some(v) => {
                let _ = writeln!(s, "survivor matches the catalog module");
                let _ = writeln!(s, "verdict: {}", v);
                Ok(s.trim_end().to_string())
            }
            None => {
                let _ = writeln!(s, "verdict: no match");
                Err(CliError { code: 1, message: s.trim_end().to_string() })
            }
        }
    }
}

fn dispatch(cmd: &str, flags: &Flags) -> Result<String, CliError> {
    match cmd {
        "validate" => cmd_validate(flags),
        "homology" => cmd_homology(flags),
        "decompose" => cmd_decompose(flags),
        "conway" => cmd_conway(flags),
        "polytope" => cmd_polytope(flags),
        "gauntlet" => cmd_gauntlet(flags),
        "botany" => cmd_botany(flags),
        "kh" => cmd_kh(flags),
        "catalog" => cmd_catalog(flags),
        "detect" => cmd_detect(flags),
        other => Err(CliError::input(format!("unknown subcommand {:?}", other))),
    }
}

const USAGE: &str = "usage: floerforge <subcommand> [options]

subcommands:
  validate <complex.json>         check the structural axioms
  homology <complex.json>         associated-graded and total homology
  decompose <complex.json>        summand decomposition (census-checked)
  conway   --complex F | --link L Alexander/Conway pipeline and linking
  polytope --complex F | --link L support hull, delta spectrum, dual slices
  gauntlet --complex F | --link L structural rule reports
  botany   --window W --budget B --lk L [--fixed F] [--rules ...]
  kh       <table.json> | --link L Khovanov rank arithmetic
  catalog  list | show <id> | selfcheck
  detect   t28 | t210             torus-link detection pipelines

options: --json --field {gf2,q} --mode {strict-hoste,paper-lowest}
         --threads N --window W --budget B --lk N --rules a,b --fixed F
         --unknotted";

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    if args.is_empty() || args[0] == "--help" || args[0] == "help" {
        println!("{}", USAGE);
        std::process::exit(if args.is_empty() { 2 } else { 0 });
    }
    let cmd = args[0].clone();
    let result = std::panic::catch_unwind(|| {
        let flags = parse_flags(&args[1..])?;
        dispatch(&cmd, &flags)
    });
    match result {
        Ok(Ok(out)) => {
            println!("{}", out);
        }
        Ok(Err(e)) => {
            if e.code == 2 && !e.message.starts_with('{') {
                eprintln!(
                    "{{\"schema\":\"floerforge/error/1\",\"error\":{}}}",
                    jsonio::json_string(&e.message)
                );
            } else {
                println!("{}", e.message);
            }
            std::process::exit(e.code);
        }
        Err(_) => {
            eprintln!(
                "{{\"schema\":\"floerforge/error/1\",\"error\":\"internal invariant breach; please file a bug report with the input\"}}"
            );
            std::process::exit(3);
        }
    }
}
