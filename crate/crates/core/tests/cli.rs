use std::path::Path;
use std::process::{Command, Output};

fn perc_lab(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_perc-lab")).args(args).current_dir(dir).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn value<'a>(text: &'a str, key: &str) -> &'a str {
    text.lines()
        .find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix('=')))
        .unwrap_or_else(|| panic!("no {key} in\n{text}"))
}

#[test]
fn pipeline_from_generation_to_analysis() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let o = perc_lab(&["gen", "--family", "random-regular", "--n", "400", "--d", "16", "--seed", "4", "--out", "host.txt"], d);
    assert!(o.status.success(), "{o:?}");
    assert_eq!(value(&stdout(&o), "m"), "3200");

    let o = perc_lab(&["spectrum", "--graph", "host.txt", "--samples", "500", "--csv", "spec.csv"], d);
    assert!(o.status.success(), "{o:?}");
    let text = stdout(&o);
    assert_eq!(value(&text, "mixing_violations"), "0");
    let lambda: f64 = value(&text, "lambda").parse().unwrap();
    assert!(lambda > 0.0 && lambda < 16.0);
    assert!(std::fs::read_to_string(d.join("spec.csv")).unwrap().starts_with("n,d,lambda"));

    let o = perc_lab(&["percolate", "--graph", "host.txt", "--p", "0.7", "--seed", "2", "--out", "gp.txt"], d);
    assert!(o.status.success(), "{o:?}");

    let o = perc_lab(&["peel", "--graph", "host.txt", "--percolated", "gp.txt", "--p", "0.7", "--d", "16"], d);
    assert!(o.status.success(), "{o:?}");
    let trace = stdout(&o);
    assert!(trace.starts_with("S0:"));
    assert!(trace.lines().last().unwrap().starts_with("SURVIVORS:"));
    std::fs::write(d.join("trace.txt"), &trace).unwrap();

    let o = perc_lab(&["peel", "--graph", "host.txt", "--percolated", "gp.txt", "--p", "0.7", "--d", "16", "--out", "t2.txt"], d);
    assert!(o.status.success());
    assert_eq!(std::fs::read_to_string(d.join("t2.txt")).unwrap(), trace);

    let o = perc_lab(
        &["analyze", "--graph", "host.txt", "--percolated", "gp.txt", "--trace", "trace.txt", "--p", "0.7", "--d", "16", "--samples", "300"],
        d,
    );
    assert!(o.status.success(), "{o:?}");
    let text = stdout(&o);
    assert_eq!(value(&text, "trace_violations"), "0");
    assert!(text.contains("condition.core_min_degree="));
    assert!(text.contains("size,min_vertex,s0_count,s0_fraction,balanced,has_edge_to_giant"));
}

#[test]
fn expansion_subcommand() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert!(perc_lab(&["gen", "--family", "complete", "--n", "4", "--out", "k4.txt"], d).status.success());
    let o = perc_lab(&["expansion", "--graph", "k4.txt", "--exact"], d);
    assert_eq!(value(&stdout(&o), "value"), "2");
    let o = perc_lab(&["expansion", "--graph", "k4.txt", "--exact", "--rule", "strict"], d);
    assert_eq!(value(&stdout(&o), "value"), "3");
    assert!(perc_lab(&["gen", "--family", "cycle", "--n", "1000", "--out", "c.txt"], d).status.success());
    let o = perc_lab(&["expansion", "--graph", "c.txt", "--bounded"], d);
    assert!(o.status.success(), "{o:?}");
    let ub: f64 = value(&stdout(&o), "upper_bound").parse().unwrap();
    assert!(ub <= 0.004 + 1e-12);
    let o = perc_lab(&["expansion", "--graph", "c.txt", "--exact"], d);
    assert!(!o.status.success());
}

#[test]
fn paley_and_errors() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let o = perc_lab(&["gen", "--family", "paley", "--q", "13", "--out", "p.txt"], d);
    assert_eq!(value(&stdout(&o), "m"), "39");
    let o = perc_lab(&["gen", "--family", "paley", "--q", "12", "--out", "p.txt"], d);
    assert_eq!(o.status.code(), Some(2));
    let o = perc_lab(&["gen", "--family", "random-regular", "--n", "9", "--d", "3", "--out", "x.txt"], d);
    assert!(String::from_utf8_lossy(&o.stderr).contains("even"));
}

#[test]
fn experiment_exit_codes_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("k50.conf"), "# complete graph at p = 1\nid = k50\nfamily = complete\nn = 50\ntrials = 3\nseed = 7\np = 1\nsamples = 100\n").unwrap();
    let o = perc_lab(&["experiment", "--config", "k50.conf", "--out", "k50.csv"], d);
    assert_eq!(o.status.code(), Some(0), "{o:?}");
    let csv = std::fs::read_to_string(d.join("k50.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().collect();
    assert_eq!(rows.len(), 4);
    assert!(rows[0].starts_with("experiment_id,trial,seed,n,d,lambda,c,p,"));
    assert!(rows[1..].iter().all(|r| r.starts_with("k50,") && r.contains(",50,50,0,0,") && r.ends_with(",1,ok")));
    assert!(!csv.contains('\r'));

    let o = perc_lab(&["experiment", "--config", "k50.conf", "--trials", "2", "--seed", "8", "--out", "again.csv"], d);
    assert!(o.status.success());
    assert_eq!(std::fs::read_to_string(d.join("again.csv")).unwrap().lines().count(), 3);

    let o = perc_lab(&["experiment", "--preset", "cycle-negative-control", "--trials", "2", "--out", "cyc.csv"], d);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("overall: fail"));

    std::fs::write(d.join("bad.conf"), "family = complete\nn = 50\nwidth = 3\n").unwrap();
    let o = perc_lab(&["experiment", "--config", "bad.conf"], d);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
}

#[test]
fn thread_cap_does_not_change_output() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("rr.conf"), "family = random-regular\nn = 300\nd = 10\ntrials = 4\nseed = 5\np = 0.7\nsamples = 200\n").unwrap();
    let run = |threads: &str, out: &str| {
        let o = Command::new(env!("CARGO_BIN_EXE_perc-lab"))
            .args(["experiment", "--config", "rr.conf", "--out", out])
            .env("PERC_LAB_THREADS", threads)
            .current_dir(d)
            .output()
            .unwrap();
        assert!(o.status.code().is_some());
        std::fs::read(d.join(out)).unwrap()
    };
    assert_eq!(run("1", "serial.csv"), run("4", "parallel.csv"));
}
