//! `compare`, `density` and `top`: analyses over ranking TSVs.

use std::path::{Path, PathBuf};

use log::info;

use super::output::Staging;
use super::Failure;
use crate::analysis::{density_grid, overlap, top_table};
use crate::ingest::open_input;
use crate::matrix::Model;
use crate::rank::{read_ranking_tsv, RankingList, RankingTable};

/// A ranking named either by a path to a `.tsv` file or by its file stem in
/// `ranks`.
pub fn list_path(ranks: &Path, name: &str) -> PathBuf {
    let direct = PathBuf::from(name);
    if direct.extension().is_some_and(|e| e == "tsv") && direct.is_file() {
        direct
    } else {
        ranks.join(format!("{name}.tsv"))
    }
}

/// Display name of a list argument: the file stem for paths.
pub fn list_name(name: &str) -> String {
    let p = Path::new(name);
    if p.extension().is_some_and(|e| e == "tsv") {
        p.file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| name.to_owned())
    } else {
        name.to_owned()
    }
}

pub fn load_list(ranks: &Path, name: &str) -> Result<RankingTable, Failure> {
    let path = list_path(ranks, name);
    if !path.is_file() {
        return Err(Failure::Config(format!(
            "unknown ranking list `{name}` ({} not found)",
            path.display()
        )));
    }
    Ok(read_ranking_tsv(
        open_input(&path)?,
        &path.display().to_string(),
    )?)
}

fn same_universe(tables: &[&RankingTable]) -> Result<(), Failure> {
    if tables.windows(2).any(|w| w[0].keys != w[1].keys) {
        return Err(Failure::Input(
            "ranking lists cover different node universes".into(),
        ));
    }
    Ok(())
}

pub fn run_compare(
    ranks: &Path,
    a: &str,
    b: &str,
    j_max: Option<usize>,
    out: &Path,
) -> Result<PathBuf, Failure> {
    let (ta, tb) = (load_list(ranks, a)?, load_list(ranks, b)?);
    same_universe(&[&ta, &tb])?;
    let j_max = j_max.unwrap_or(ta.list.len());
    let curve = overlap(&ta.list, &tb.list, j_max)?;
    let path = out.join(format!("overlap.{}.{}.tsv", list_name(a), list_name(b)));
    let mut staging = Staging::new();
    staging.write(&path, |w| {
        curve.write_tsv(w).map_err(|e| Failure::output(&path, e))
    })?;
    staging.commit()?;
    info!(
        "eta_N({j_max}) = {}, eta_O({j_max}) = {}",
        curve.eta_n[j_max - 1],
        curve.eta_o[j_max - 1]
    );
    Ok(path)
}

/// `(list name, count)` parsed from `NAME[:COUNT]`.
pub fn parse_overlay(spec: &str) -> Result<(String, usize), Failure> {
    match spec.rsplit_once(':') {
        Some((name, count)) => {
            let count = count.parse().map_err(|_| {
                Failure::Config(format!("bad overlay `{spec}`: expected NAME[:COUNT]"))
            })?;
            Ok((name.to_owned(), count))
        }
        None => Ok((spec.to_owned(), 100)),
    }
}

pub fn run_density(
    ranks: &Path,
    model: Model,
    cells: usize,
    overlays: &[(String, usize)],
    out: &Path,
) -> Result<(), Failure> {
    let k = load_list(ranks, &format!("pagerank.{model}"))?;
    let kstar = load_list(ranks, &format!("cheirank.{model}"))?;
    same_universe(&[&k, &kstar])?;
    let mut grid = density_grid(&k.list, &kstar.list, cells)?;
    for (name, count) in overlays {
        let t = load_list(ranks, name)?;
        same_universe(&[&k, &t])?;
        grid.add_overlay(&list_name(name), t.list.top(*count.min(&t.list.len())));
    }
    let mut staging = Staging::new();
    let path = out.join(format!("density.{model}.tsv"));
    staging.write(&path, |w| {
        grid.write_tsv(w).map_err(|e| Failure::output(&path, e))
    })?;
    for o in &grid.overlays {
        let path = out.join(format!("overlay.{model}.{}.tsv", o.name));
        staging.write(&path, |w| {
            use std::io::Write;
            let io = |e| Failure::output(&path, e);
            writeln!(w, "# id\tlanguage\ttitle\tcell_x\tcell_y").map_err(io)?;
            for &(id, x, y) in &o.points {
                let key = &k.keys[id as usize];
                writeln!(w, "{id}\t{}\t{}\t{x}\t{y}", key.language, key.title).map_err(io)?;
            }
            Ok(())
        })?;
    }
    staging.commit()
}

/// Lists shown next to `base` when none are requested: the same ranking
/// family in model order wcpv, wc, nowc, then the click and pageview lists.
pub fn default_top_lists(ranks: &Path, base: &str) -> Vec<String> {
    let family = list_name(base)
        .split('.')
        .next()
        .unwrap_or("pagerank")
        .to_owned();
    let family = if matches!(family.as_str(), "pagerank" | "cheirank" | "2drank") {
        family
    } else {
        "pagerank".into()
    };
    let mut names: Vec<String> = [Model::Wcpv, Model::Wc, Model::Nowc]
        .iter()
        .map(|m| format!("{family}.{m}"))
        .chain(["cr".to_string(), "vr".to_string()])
        .filter(|n| ranks.join(format!("{n}.tsv")).is_file())
        .collect();
    if !names.iter().any(|n| *n == list_name(base)) {
        names.insert(0, base.to_owned());
    }
    names
}

pub fn run_top(
    ranks: &Path,
    base: &str,
    lists: &[String],
    k: usize,
    out: &Path,
) -> Result<(), Failure> {
    let mut names: Vec<String> = lists.to_vec();
    if !names.iter().any(|n| list_name(n) == list_name(base)) {
        names.insert(0, base.to_owned());
    }
    let tables: Vec<RankingTable> = names
        .iter()
        .map(|n| load_list(ranks, n))
        .collect::<Result<_, _>>()?;
    same_universe(&tables.iter().collect::<Vec<_>>())?;
    let keys = tables[0].keys.clone();
    let named: Vec<(String, RankingList)> = names
        .iter()
        .zip(tables)
        .map(|(n, t)| (list_name(n), t.list))
        .collect();
    let table = top_table(&named, &list_name(base), k, &keys)?;
    let stem = format!("top.{}", list_name(base));
    let mut staging = Staging::new();
    let tsv = out.join(format!("{stem}.tsv"));
    staging.write(&tsv, |w| {
        table.write_tsv(w).map_err(|e| Failure::output(&tsv, e))
    })?;
    let json = out.join(format!("{stem}.json"));
    staging.write(&json, |w| {
        table.write_json(w).map_err(|e| Failure::output(&json, e))
    })?;
    staging.commit()
}
