//! Command-line behaviour: output files, determinism and exit codes.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use photon_subtraction::RunConfig;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_photon-subtraction"))
}

fn run(args: &[&str], dir: &Path) -> Output {
    bin().args(args).current_dir(dir).output().expect("binary runs")
}

fn write_config(dir: &Path, name: &str, config: &RunConfig) -> String {
    let path = dir.join(name);
    fs::write(&path, config.to_json()).unwrap();
    path.to_string_lossy().into_owned()
}

fn small_fig3() -> RunConfig {
    let mut c = RunConfig::default();
    c.sweep.points = 4;
    c.state.modes = vec![3, 5];
    c
}

#[test]
fn config_round_trips_through_json() {
    for config in [RunConfig::default(), RunConfig::upconversion_default(), RunConfig::comb_default()] {
        let text = config.to_json();
        let back = RunConfig::from_json(&text).unwrap();
        assert_eq!(back, config);
        assert_eq!(back.to_json(), text);
        assert_eq!(back.hash(), config.hash());
    }
}

#[test]
fn fig3_output_is_deterministic_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "fig3.json", &small_fig3());
    let mut outputs = Vec::new();
    for threads in ["1", "4", "1"] {
        let out = bin()
            .args(["fig3", "--config", &cfg, "--out", "a.csv"])
            .current_dir(dir.path())
            .env("RAYON_NUM_THREADS", threads)
            .output()
            .unwrap();
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        outputs.push(fs::read(dir.path().join("a.csv")).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    assert_eq!(outputs[0], outputs[2]);
}

#[test]
fn csv_header_carries_config_hash_and_round_trip_floats() {
    let dir = tempfile::tempdir().unwrap();
    let mut config = small_fig3();
    config.output = "out.csv".into();
    let cfg = write_config(dir.path(), "c.json", &config);
    let out = run(&["fig3", "--config", &cfg], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(dir.path().join("out.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), format!("# config-hash: {}", config.hash()));
    assert_eq!(lines.next().unwrap(), "omega_f_tau,N,purity,P_normalized,purity_no_filter");
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 4 * 2);
    for row in rows {
        for cell in row.split(',') {
            let v: f64 = cell.parse().unwrap();
            assert_eq!(v.to_string(), cell);
        }
    }
}

#[test]
fn every_subcommand_writes_its_tables() {
    let dir = tempfile::tempdir().unwrap();
    let mut up = RunConfig::upconversion_default();
    up.sweep.points = 3;
    up.sweep.stop = 5.0;
    let up_cfg = write_config(dir.path(), "up.json", &up);
    let mut wig = RunConfig::default();
    wig.wigner.samples = 101;
    let wig_cfg = write_config(dir.path(), "w.json", &wig);
    let fig3_cfg = write_config(dir.path(), "f.json", &small_fig3());
    let cases: [(&str, &str, &[&str], &str); 6] = [
        ("fig3", fig3_cfg.as_str(), &["fig3.csv"], "omega_f_tau,N,purity"),
        ("fig45", fig3_cfg.as_str(), &["fig45.csv"], "omega_f_tau,N,p_s,p_f,w_0"),
        ("fig678", up_cfg.as_str(), &["fig678.csv", "fig678_modes.csv", "fig678_efficiencies.csv"], "N,purity"),
        ("decompose", up_cfg.as_str(), &["decompose.csv", "decompose_modes.csv"], "j,sigma,sigma_analytic"),
        ("wigner", wig_cfg.as_str(), &["wigner.csv"], "re_alpha,im_alpha,w"),
        ("fig9", "", &["fig9.csv"], "t,re,im"),
    ];
    for (cmd, cfg, files, header) in cases {
        let out_name = format!("{cmd}.csv");
        let mut args = vec![cmd, "--out", out_name.as_str()];
        if !cfg.is_empty() {
            args.extend(["--config", cfg]);
        }
        let out = run(&args, dir.path());
        assert!(out.status.success(), "{cmd}: {}", String::from_utf8_lossy(&out.stderr));
        for f in files {
            let text = fs::read_to_string(dir.path().join(f)).unwrap_or_else(|_| panic!("{cmd}: missing {f}"));
            assert!(text.starts_with("# config-hash: "), "{f}");
            assert!(text.lines().count() > 2, "{f} has no rows");
        }
        let main = fs::read_to_string(dir.path().join(files[0])).unwrap();
        assert!(main.lines().nth(1).unwrap().starts_with(header), "{cmd}: {}", main.lines().nth(1).unwrap());
    }
}

#[test]
fn points_flag_overrides_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "f.json", &small_fig3());
    let out = run(&["fig3", "--config", &cfg, "--points", "2", "--out", "p.csv"], dir.path());
    assert!(out.status.success());
    let text = fs::read_to_string(dir.path().join("p.csv")).unwrap();
    assert_eq!(text.lines().count(), 2 + 2 * 2);
}

#[test]
fn configuration_errors_exit_with_2() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("bad.json"), "{\n  \"scheme\": \"beamsplitter\",\n  \"bogus\": 1\n}").unwrap();
    fs::write(dir.path().join("broken.json"), "{ \"scheme\": ").unwrap();
    let mut negative = RunConfig::default();
    negative.state.photons = -1.0;
    let neg = write_config(dir.path(), "neg.json", &negative);
    for args in [
        vec!["fig3", "--config", "bad.json"],
        vec!["fig3", "--config", "broken.json"],
        vec!["fig3", "--config", "missing.json"],
        vec!["fig3", "--config", neg.as_str()],
        vec!["fig3", "--points", "0"],
        vec!["decompose", "--config", "bad.json"],
    ] {
        let out = run(&args, dir.path());
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(!out.stderr.is_empty());
    }
    let comb = write_config(dir.path(), "comb.json", &RunConfig::comb_default());
    let out = run(&["decompose", "--config", &comb], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["fig678", "--config", &neg], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn numerical_failures_exit_with_3() {
    let dir = tempfile::tempdir().unwrap();
    // Photon numbers so small that the subtraction probability underflows.
    let mut config = small_fig3();
    config.state.photons = f64::from_bits(1);
    let cfg = write_config(dir.path(), "tiny.json", &config);
    let out = run(&["fig3", "--config", &cfg, "--out", "t.csv"], dir.path());
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}
