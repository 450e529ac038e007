use std::fs;
use std::process::{Command, Output};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cavity-field"))
        .args(args)
        .output()
        .unwrap()
}

#[test]
fn pnd_to_stdout_with_headers() {
    let out = bin(&["pnd", "--alpha", "0.5", "--nmax", "20", "--mode", "paper"]);
    assert_eq!(out.status.code(), Some(0));
    let csv = String::from_utf8(out.stdout).unwrap();
    assert!(csv.starts_with("# cavity-field "));
    assert!(csv.contains("# params: g=1.0000000000000000e0 delta=0.0000000000000000e0"));
    assert!(csv.contains("# t=1.0000000000000000e0 n_max=20"));
    assert!(!csv.contains('\r'));
    let rows: Vec<&str> = csv.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows[0], "n,p_paper");
    let p0: f64 = rows[1].strip_prefix("0,").unwrap().parse().unwrap();
    assert!((p0 - (-0.25f64).exp()).abs() < 1e-15);
    assert_eq!(rows[1].len(), "0,".len() + "7.7880078307140499e-1".len());
    assert_eq!(rows.len(), 1 + 22);
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("defaults: g=1 delta=0"));
}

#[test]
fn negative_values_and_complex_alpha_parse() {
    let out = bin(&[
        "squeeze", "--alpha", "0.3,-0.4", "--delta", "-1.5", "--sweep", "t:0:1:3", "--mode",
        "exact",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = String::from_utf8(out.stdout).unwrap();
    assert!(csv.contains("delta=-1.5000000000000000e0"));
    assert!(csv.contains("alpha=0.3-0.4i"));
    assert!(csv.lines().any(|l| l == "gt,s_x_exact,s_p_exact"));
}

#[test]
fn bad_arguments_exit_2() {
    for args in [
        &["pnd", "--g", "-1"][..],
        &["pnd", "--g", "0", "--delta", "0"],
        &["pnd", "--alpha", "3", "--nmax", "4"],
        &["qscan", "--sweep", "alpha:2:1:10"],
        &["wigner", "--window", "-1:1:-1:1:4"],
        &["wigner", "--nmax", "8", "--n", "9"],
        &["frobnicate"],
        &["pnd", "--mode", "neither"],
    ] {
        let out = bin(args);
        assert_eq!(
            out.status.code(),
            Some(2),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
}

#[test]
fn out_file_is_not_overwritten_without_force() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pnd.csv");
    let p = path.to_str().unwrap();
    assert_eq!(bin(&["pnd", "--out", p]).status.code(), Some(0));
    let first = fs::read(&path).unwrap();
    let out = bin(&["pnd", "--alpha", "1", "--out", p]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--force"));
    assert_eq!(fs::read(&path).unwrap(), first);
    assert_eq!(
        bin(&["pnd", "--alpha", "1", "--out", p, "--force"])
            .status
            .code(),
        Some(0)
    );
    assert_ne!(fs::read(&path).unwrap(), first);
    let leftovers = fs::read_dir(dir.path()).unwrap().count();
    assert_eq!(leftovers, 1);
}

#[test]
fn unwritable_destination_exits_3() {
    let out = bin(&["pnd", "--out", "/nonexistent-dir/x.csv"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn verify_reports_checks_and_discrepancies() {
    let out = bin(&["verify", "--alpha", "0", "--gt", "0.7853981633974483"]);
    assert_eq!(out.status.code(), Some(0));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr
        .lines()
        .any(|l| l.starts_with("PASS closed_form_vs_integrator")));
    assert!(stderr.contains(
        "REPORT coherence_01 exact_abs=0.0000000000000000e0 literal_abs=5.0000000000000000e-1"
    ));
    assert!(stderr.contains("RESULT pass"));
    let csv = String::from_utf8(out.stdout).unwrap();
    assert!(csv
        .lines()
        .any(|l| l == "section,m,n,paper_re,paper_im,exact_re,exact_im,abs_diff"));
}

#[test]
fn wigner_emits_sources_and_summaries() {
    let out = bin(&[
        "wigner",
        "--n",
        "4,7",
        "--window",
        "-2:2:-2:2:17",
        "--mode",
        "paper",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let csv = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = csv.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows[0], "source,re_beta,im_beta,W");
    assert_eq!(rows.len(), 1 + 2 * 17 * 17);
    assert!(rows[1].starts_with("paper:n=4,-2.0000000000000000e0,-2.0000000000000000e0,"));
    assert_eq!(
        csv.lines()
            .filter(|l| l.starts_with("# summary source=paper:n="))
            .count(),
        2
    );
}
