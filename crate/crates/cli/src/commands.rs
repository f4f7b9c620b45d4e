use std::io::Write;
use std::path::Path;

use kuramoto_trees::dynamics::{integrate, InitialPhases, SimulationConfig};
use kuramoto_trees::figures::{figure, FigureSettings};
use kuramoto_trees::io::{read_tree, rearrangement_to_string, report_to_string, tree_to_string, write_text};
use kuramoto_trees::montecarlo::{run_campaign_with_workers, CampaignRow, McCampaign};
use kuramoto_trees::rearrange::rearrange;
use kuramoto_trees::{
    critical_coupling, generate_topology, sample_frequencies, Error, FrequencyDistribution, KuramotoTree, Result,
    TopologyKind,
};

use crate::{Command, Common};

pub fn run(command: Command) -> Result<()> {
    match command {
        Command::Critical { tree, common } => critical(&tree, &common),
        Command::Simulate {
            tree,
            k,
            dt,
            t_max,
            fp_tol,
            stride,
            random_phases,
            common,
        } => {
            let cfg = SimulationConfig {
                dt,
                t_max,
                fp_tol,
                init: if random_phases { InitialPhases::SeededUniform } else { InitialPhases::Zeros },
                save_stride: stride,
            };
            simulate(&tree, k, &cfg, &common)
        }
        Command::Montecarlo {
            family,
            n,
            dist,
            samples,
            common,
        } => montecarlo(&family, n, &dist, samples, &common),
        Command::Figures { id, samples, common } => figures(id, samples, &common),
        Command::Rearrange { tree, root, common } => rearrange_cmd(&tree, root, &common),
        Command::Generate { kind, n, dist, common } => generate(&kind, n, &dist, &common),
    }
}

fn workers(common: &Common) -> Result<Option<usize>> {
    match common.workers {
        Some(0) => Err(Error::BadParameters("--workers must be at least 1".into())),
        w => Ok(w),
    }
}

fn emit(common: &Common, text: &str) -> Result<()> {
    match &common.out {
        Some(path) => write_text(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn critical(path: &Path, common: &Common) -> Result<()> {
    let tree = read_tree(path)?;
    let report = critical_coupling(&tree);
    if let Some(out) = &common.out {
        write_text(out, &report_to_string(&report))?;
    }
    let mut s = String::new();
    s.push_str(&format!("k_c: {:.6}\n", report.k_c));
    s.push_str(&format!("argmax_edge: {} {}\n", report.argmax_edge.0, report.argmax_edge.1));
    s.push_str(&format!("diameter: {}\nmax_partition: {}\n", report.diameter, report.max_partition));
    s.push_str("u,v,omega\n");
    for e in &report.edge_omegas {
        s.push_str(&format!("{},{},{:.6}\n", e.edge.0, e.edge.1, e.omega));
    }
    print!("{s}");
    Ok(())
}

fn simulate(path: &Path, k: f64, cfg: &SimulationConfig, common: &Common) -> Result<()> {
    let tree = read_tree(path)?;
    let traj = integrate(&tree, k, cfg, common.seed)?;
    if let Some(out) = &common.out {
        let mut buf = Vec::new();
        traj.write_csv(&mut buf).expect("writing to memory");
        write_text(out, &String::from_utf8(buf).expect("csv is utf-8"))?;
    }
    println!("synchronized: {}", traj.synchronized);
    println!("max_final_speed: {:e}", traj.max_final_speed());
    Ok(())
}

fn montecarlo(family: &str, n: usize, dist: &str, samples: u64, common: &Common) -> Result<()> {
    let kind: TopologyKind = family.parse()?;
    let dist: FrequencyDistribution = dist.parse()?;
    let campaign = McCampaign::new(kind, n, dist, samples, common.seed);
    let est = run_campaign_with_workers(&campaign, workers(common)?)?;
    let row = CampaignRow::new(&campaign, &est);
    emit(common, &format!("{}\n{}\n", CampaignRow::HEADER, row.to_csv()))
}

fn figures(id: u32, samples: u64, common: &Common) -> Result<()> {
    let settings = FigureSettings {
        samples,
        seed: common.seed,
        workers: workers(common)?,
    };
    let table = figure(id, &settings)?;
    let dir = common.out.clone().unwrap_or_else(|| ".".into());
    std::fs::create_dir_all(&dir).map_err(|e| Error::Io {
        path: dir.display().to_string(),
        message: e.to_string(),
    })?;
    let path = dir.join(table.file_name());
    write_text(&path, &table.to_csv())?;
    println!("{}", path.display());
    Ok(())
}

fn rearrange_cmd(path: &Path, root: usize, common: &Common) -> Result<()> {
    let tree = read_tree(path)?;
    if root >= tree.n() {
        return Err(Error::BadParameters(format!("root {root} is not a vertex of a {}-vertex tree", tree.n())));
    }
    let r = rearrange(&tree, root)?;
    let doc = rearrangement_to_string(&r);
    match &common.out {
        Some(out) => {
            write_text(out, &doc)?;
            println!("k_c_before: {:.6}\nk_c_after: {:.6}\nbound: {:.6}", r.k_c_before, r.k_c_after, r.bound);
        }
        None => print!("{doc}"),
    }
    std::io::stdout().flush().ok();
    Ok(())
}

fn generate(kind: &str, n: usize, dist: &str, common: &Common) -> Result<()> {
    let kind: TopologyKind = kind.parse()?;
    let dist: FrequencyDistribution = dist.parse()?;
    let edges = generate_topology(kind, n, common.seed)?;
    let tree = KuramotoTree::new(n, edges, sample_frequencies(&dist, n, common.seed))?;
    emit(common, &tree_to_string(&tree))
}
