//! Text artifacts: CSV tables, the run summary and SVG charts.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::Result;
use crate::replication::ScalingRow;
use crate::result::{KernelTimings, RunResult};
use crate::tally::{KeffSeries, TallyTable};
use crate::CellId;

pub const TALLIES_FILE: &str = "tallies.csv";
pub const KEFF_FILE: &str = "keff.csv";
pub const TIMINGS_FILE: &str = "timings.csv";
pub const SUMMARY_FILE: &str = "summary.txt";

fn opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:e}")).unwrap_or_default()
}

pub fn tallies_csv(table: &TallyTable) -> String {
    let mut s = String::from("region_kind,axial_index,score,mean,stderr\n");
    for row in &table.rows {
        let axial = match row.region {
            CellId::Fuel { axial_index } => axial_index.to_string(),
            CellId::Moderator => String::new(),
        };
        let _ = writeln!(
            s,
            "{},{},{},{:e},{:e}",
            row.region.kind(),
            axial,
            row.score,
            row.mean,
            row.stderr
        );
    }
    s
}

pub fn keff_csv(k: &KeffSeries) -> String {
    let mut s = String::from("batch,phase,k\n");
    for (i, v) in k.values.iter().enumerate() {
        let phase = if (i as u32) < k.inactive_batches {
            "inactive"
        } else {
            "active"
        };
        let _ = writeln!(s, "{i},{phase},{v:e}");
    }
    s
}

pub fn timings_csv(t: &KernelTimings) -> String {
    let mut s = String::from("kernel,seconds\n");
    for (name, secs) in t.rows() {
        let _ = writeln!(s, "{name},{secs:e}");
    }
    s
}

pub fn summary_text(r: &RunResult) -> String {
    let c = &r.config;
    let mut s = String::new();
    let _ = writeln!(s, "eventmc run summary");
    let _ = writeln!(
        s,
        "mode {} | sort {} every {} | max_in_flight {} | tally {} | accel {} | workers {} | reduction {}",
        c.mode,
        if c.sort_enabled { "on" } else { "off" },
        c.sort_every_n,
        c.max_in_flight,
        c.tally_mode,
        c.accel,
        r.workers,
        c.reduction
    );
    let _ = writeln!(
        s,
        "particles/batch {} | inactive {} | active {} | seed {}",
        c.particles_per_batch, c.inactive_batches, c.active_batches, c.seed
    );
    let _ = writeln!(s, "library {}", r.library_hash);
    let _ = writeln!(s, "geometry {}", r.geometry_hash);
    match r.physics.keff.stats {
        Some((m, e)) => {
            let _ = writeln!(s, "k-eff {m:.6} +/- {e:.6}");
        }
        None => {
            let last = r.physics.keff.values.last().copied().unwrap_or(f64::NAN);
            let _ = writeln!(s, "k-eff (last batch, no active statistics) {last:.6}");
        }
    }
    let rate = |v: Option<f64>| v.map(|x| format!("{x:.1}")).unwrap_or_else(|| "n/a".into());
    let _ = writeln!(s, "inactive rate {} particles/s", rate(r.inactive_rate()));
    let _ = writeln!(s, "active rate {} particles/s", rate(r.active_rate()));
    let _ = writeln!(s, "max histories in flight {}", r.max_live);
    let _ = writeln!(s, "max draws per history {}", r.physics.max_history_draws);
    let n = &r.counters;
    let _ = writeln!(
        s,
        "lookups {} | collisions {} | crossings {} | scored tracks {} | scoring xs evals {}",
        n.lookups, n.collisions, n.crossings, n.scored_tracks, n.scoring_xs_evals
    );
    let _ = writeln!(s, "physics digest {}", r.physics.digest());
    s
}

/// Writes `summary.txt`, `tallies.csv`, `keff.csv` and `timings.csv`.
/// Without active statistics the tally file carries only its header.
pub fn write_run_outputs(dir: &Path, r: &RunResult) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let tallies = r
        .physics
        .tallies
        .as_ref()
        .map(tallies_csv)
        .unwrap_or_else(|| tallies_csv(&TallyTable { rows: Vec::new() }));
    let files = [
        (SUMMARY_FILE, summary_text(r)),
        (TALLIES_FILE, tallies),
        (KEFF_FILE, keff_csv(&r.physics.keff)),
        (TIMINGS_FILE, timings_csv(&r.timings)),
    ];
    let mut written = Vec::new();
    for (name, body) in files {
        let path = dir.join(name);
        fs::write(&path, body)?;
        written.push(path);
    }
    Ok(written)
}

/// One-row benchmark table. `active_rate` is left out entirely when
/// `inactive_only` is set.
pub fn bench_csv(r: &RunResult, inactive_only: bool) -> String {
    let c = &r.config;
    let mut header = vec![
        "mode",
        "sort",
        "max_in_flight",
        "tally_mode",
        "accel",
        "particles",
        "inactive_rate",
    ];
    if !inactive_only {
        header.push("active_rate");
    }
    header.extend([
        "lookup_s",
        "advance_s",
        "collision_s",
        "sort_s",
        "reduce_s",
        "k_mean",
        "k_stderr",
        "digest",
    ]);
    let mut row = vec![
        c.mode.to_string(),
        if c.sort_enabled { "on" } else { "off" }.to_string(),
        c.max_in_flight.to_string(),
        c.tally_mode.to_string(),
        c.accel.to_string(),
        c.particles_per_batch.to_string(),
        opt(r.inactive_rate()),
    ];
    if !inactive_only {
        row.push(opt(r.active_rate()));
    }
    let t = &r.timings;
    for v in [t.lookup, t.advance, t.collision, t.sort, t.reduce] {
        row.push(format!("{v:e}"));
    }
    let (m, e) = match r.physics.keff.stats {
        Some((m, e)) => (Some(m), Some(e)),
        None => (r.physics.keff.values.last().copied(), None),
    };
    row.push(opt(m));
    row.push(opt(e));
    row.push(r.physics.digest());
    format!("{}\n{}\n", header.join(","), row.join(","))
}

pub fn compare_csv(results: &[RunResult]) -> String {
    let mut s =
        String::from("mode,sort,max_in_flight,tally_mode,inactive_rate,active_rate,digest\n");
    for r in results {
        let c = &r.config;
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{}",
            c.mode,
            if c.sort_enabled { "on" } else { "off" },
            c.max_in_flight,
            c.tally_mode,
            opt(r.inactive_rate()),
            opt(r.active_rate()),
            r.physics.digest()
        );
    }
    s
}

pub fn scaling_csv(rows: &[ScalingRow]) -> String {
    let mut s = String::from("workers,particles,inactive_rate,active_rate,efficiency\n");
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{:e}",
            r.workers,
            r.particles,
            opt(r.inactive_rate),
            opt(r.active_rate),
            r.efficiency
        );
    }
    s
}

const W: f64 = 720.0;
const H: f64 = 420.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 90.0;
const COLORS: [&str; 4] = ["#3b6ea5", "#e08a2c", "#4f9d55", "#b8413b"];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

fn svg_open(title: &str) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" font-family=\"sans-serif\" font-size=\"11\">\n\
         <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n\
         <text x=\"{}\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n",
        W / 2.0,
        escape(title)
    )
}

fn y_axis(s: &mut String, max: f64, label: &str) {
    let plot_h = H - TOP - BOTTOM;
    let _ = writeln!(
        s,
        "<line x1=\"{LEFT}\" y1=\"{TOP}\" x2=\"{LEFT}\" y2=\"{}\" stroke=\"black\"/>",
        H - BOTTOM
    );
    let _ = writeln!(
        s,
        "<line x1=\"{LEFT}\" y1=\"{y}\" x2=\"{}\" y2=\"{y}\" stroke=\"black\"/>",
        W - RIGHT,
        y = H - BOTTOM
    );
    for i in 0..=4 {
        let v = max * i as f64 / 4.0;
        let y = H - BOTTOM - plot_h * i as f64 / 4.0;
        let _ = writeln!(
            s,
            "<text x=\"{}\" y=\"{:.1}\" text-anchor=\"end\">{:.3e}</text>",
            LEFT - 6.0,
            y + 4.0,
            v
        );
    }
    let _ = writeln!(
        s,
        "<text x=\"16\" y=\"{}\" transform=\"rotate(-90 16 {})\" text-anchor=\"middle\">{}</text>",
        H / 2.0,
        H / 2.0,
        escape(label)
    );
}

/// Grouped bar chart: one group per category, one bar per series.
pub fn svg_bar_chart(title: &str, series: &[&str], groups: &[(String, Vec<f64>)]) -> String {
    let mut s = svg_open(title);
    let max = groups
        .iter()
        .flat_map(|g| g.1.iter().copied())
        .filter(|v| v.is_finite())
        .fold(0.0f64, f64::max)
        .max(f64::MIN_POSITIVE);
    y_axis(&mut s, max, "particles/s");
    let plot_w = W - LEFT - RIGHT;
    let plot_h = H - TOP - BOTTOM;
    let group_w = plot_w / groups.len().max(1) as f64;
    let bar_w = group_w * 0.8 / series.len().max(1) as f64;
    for (gi, (name, values)) in groups.iter().enumerate() {
        let x0 = LEFT + gi as f64 * group_w + group_w * 0.1;
        for (si, v) in values.iter().enumerate() {
            let v = if v.is_finite() { *v } else { 0.0 };
            let h = plot_h * v / max;
            let _ = writeln!(
                s,
                "<rect x=\"{:.1}\" y=\"{:.1}\" width=\"{:.1}\" height=\"{:.1}\" fill=\"{}\"/>",
                x0 + si as f64 * bar_w,
                H - BOTTOM - h,
                bar_w,
                h,
                COLORS[si % COLORS.len()]
            );
        }
        let cx = x0 + group_w * 0.4;
        let _ = writeln!(
            s,
            "<text x=\"{cx:.1}\" y=\"{y:.1}\" transform=\"rotate(-40 {cx:.1} {y:.1})\" text-anchor=\"end\">{}</text>",
            escape(name),
            y = H - BOTTOM + 14.0
        );
    }
    for (si, name) in series.iter().enumerate() {
        let x = W - RIGHT - 150.0;
        let y = TOP + 14.0 * si as f64;
        let _ = writeln!(
            s,
            "<rect x=\"{x}\" y=\"{}\" width=\"10\" height=\"10\" fill=\"{}\"/><text x=\"{}\" y=\"{}\">{}</text>",
            y - 9.0,
            COLORS[si % COLORS.len()],
            x + 14.0,
            y,
            escape(name)
        );
    }
    s.push_str("</svg>\n");
    s
}

/// Rate against worker count, with the ideal-linear line through the
/// one-worker point.
pub fn svg_scaling_chart(title: &str, rows: &[ScalingRow]) -> String {
    let mut s = svg_open(title);
    let points: Vec<(f64, f64)> = rows
        .iter()
        .filter_map(|r| r.figure_of_merit().map(|v| (r.workers as f64, v)))
        .collect();
    let base = points.first().map(|p| p.1).unwrap_or(0.0);
    let max_w = points.iter().map(|p| p.0).fold(1.0f64, f64::max);
    let max = points
        .iter()
        .map(|p| p.1)
        .fold(base * max_w, f64::max)
        .max(f64::MIN_POSITIVE);
    y_axis(&mut s, max, "particles/s");
    let plot_w = W - LEFT - RIGHT;
    let plot_h = H - TOP - BOTTOM;
    let px = |w: f64| {
        LEFT + plot_w
            * if max_w > 1.0 {
                (w - 1.0) / (max_w - 1.0)
            } else {
                0.5
            }
    };
    let py = |v: f64| H - BOTTOM - plot_h * v / max;
    let _ = writeln!(
        s,
        "<line x1=\"{:.1}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" stroke=\"gray\" stroke-dasharray=\"6 4\"/>",
        px(1.0),
        py(base),
        px(max_w),
        py(base * max_w)
    );
    let path: Vec<String> = points
        .iter()
        .map(|&(w, v)| format!("{:.1},{:.1}", px(w), py(v)))
        .collect();
    let _ = writeln!(
        s,
        "<polyline points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"2\"/>",
        path.join(" "),
        COLORS[0]
    );
    for &(w, v) in &points {
        let _ = writeln!(
            s,
            "<circle cx=\"{:.1}\" cy=\"{:.1}\" r=\"4\" fill=\"{}\"/><text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\">{}</text>",
            px(w),
            py(v),
            COLORS[0],
            px(w),
            H - BOTTOM + 16.0,
            w
        );
    }
    let _ = writeln!(
        s,
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">workers</text>",
        LEFT + plot_w / 2.0,
        H - BOTTOM + 40.0
    );
    let _ = writeln!(
        s,
        "<text x=\"{}\" y=\"{}\">measured</text><text x=\"{}\" y=\"{}\" fill=\"gray\">ideal linear</text>",
        W - RIGHT - 150.0,
        TOP,
        W - RIGHT - 150.0,
        TOP + 14.0
    );
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tally::{Score, TallyRow};

    #[test]
    fn tallies_csv_layout() {
        let t = TallyTable {
            rows: vec![
                TallyRow {
                    region: CellId::Fuel { axial_index: 3 },
                    score: Score::Flux,
                    mean: 1.5,
                    stderr: 0.25,
                },
                TallyRow {
                    region: CellId::Moderator,
                    score: Score::FissionRate,
                    mean: 0.0,
                    stderr: 0.0,
                },
            ],
        };
        let csv = tallies_csv(&t);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "region_kind,axial_index,score,mean,stderr");
        assert_eq!(lines[1], "fuel,3,flux,1.5e0,2.5e-1");
        assert_eq!(lines[2], "moderator,,fission_rate,0e0,0e0");
    }

    #[test]
    fn scaling_csv_round_trips_efficiency() {
        let rows = vec![ScalingRow {
            workers: 2,
            particles: 200,
            inactive_rate: Some(1234.5),
            active_rate: None,
            efficiency: 0.8123456789012345,
        }];
        let csv = scaling_csv(&rows);
        let fields: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
        assert_eq!(fields[3], "");
        assert_eq!(fields[4].parse::<f64>().unwrap(), 0.8123456789012345);
    }

    #[test]
    fn charts_are_svg() {
        let bar = svg_bar_chart("t", &["a", "b"], &[("x".into(), vec![1.0, 2.0])]);
        assert!(bar.starts_with("<svg") && bar.trim_end().ends_with("</svg>"));
        let line = svg_scaling_chart(
            "s",
            &[ScalingRow {
                workers: 1,
                particles: 10,
                inactive_rate: Some(5.0),
                active_rate: None,
                efficiency: 1.0,
            }],
        );
        assert!(line.contains("polyline"));
    }
}
