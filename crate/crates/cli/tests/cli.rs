//! End-to-end checks of the installed binary: exit-code contract, fan file
//! parsing, report writing and determinism.

use std::process::Command;

fn twistoric() -> Command {
    Command::new(env!("CARGO_BIN_EXE_twistoric"))
}

#[test]
fn exit_codes_follow_the_contract() {
    let out = twistoric()
        .args([
            "check",
            "--fan",
            "builtin:affine:2",
            "--character",
            "1/2,1/3",
            "--perversity",
            "middle",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "twisted input vanishes");
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("verdict: vanishes"));

    let out = twistoric()
        .args([
            "check",
            "--fan",
            "builtin:affine:2",
            "--character",
            "0,0",
            "--perversity",
            "middle",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2), "trivial input is inconclusive");

    let out = twistoric()
        .args(["check", "--fan", "builtin:nope", "--character", "0"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1), "unknown fan is an error");
}

#[test]
fn fan_files_parse_with_warnings() {
    let dir = std::env::temp_dir().join(format!("twistoric-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let fan_path = dir.join("quadric.fan");
    std::fs::write(
        &fan_path,
        "# affine plane\nrank = 2\ncone \"sigma\" = [[2,0],[0,1]]\n",
    )
    .unwrap();

    let out = twistoric()
        .args([
            "check",
            "--fan",
            fan_path.to_str().unwrap(),
            "--character",
            "1/2,1/3",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(
        stderr.contains("non-primitive generator normalized"),
        "stderr: {stderr}"
    );
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn reports_are_deterministic_and_replayable() {
    let dir = std::env::temp_dir().join(format!("twistoric-report-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let r1 = dir.join("a.report");
    let r2 = dir.join("b.report");
    for path in [&r1, &r2] {
        let out = twistoric()
            .args([
                "check",
                "--fan",
                "builtin:weighted_p112",
                "--character",
                "1/2,0",
                "--report",
                path.to_str().unwrap(),
            ])
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0));
    }
    let a = std::fs::read(&r1).unwrap();
    let b = std::fs::read(&r2).unwrap();
    assert_eq!(a, b, "identical inputs give byte-identical reports");

    let report =
        twistoric_cli::report::RunReport::from_machine_text(&String::from_utf8(a).unwrap())
            .unwrap();
    assert!(
        report.replay().unwrap(),
        "certificate replays to the same verdict"
    );
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn orbits_and_stalk_commands_run() {
    let out = twistoric()
        .args([
            "orbits",
            "--fan",
            "builtin:a1_surface",
            "--character",
            "1/2,1/2",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("cone"), "{stdout}");

    let out = twistoric()
        .args([
            "stalk",
            "--fan",
            "builtin:affine:2",
            "--cone",
            "3",
            "--character",
            "0,1/3",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("stalk"), "{stdout}");

    let out = twistoric()
        .args([
            "oracle",
            "--max-rank",
            "2",
            "--max-order",
            "4",
            "--samples",
            "20",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn strict_gm_flag_and_explicit_dual() {
    // a non-monotone perversity is rejected under --strict-gm
    let out = twistoric()
        .args([
            "check",
            "--fan",
            "builtin:affine:2",
            "--character",
            "1/2,1/3",
            "--perversity",
            "p(1)=0,p(2)=5",
            "--strict-gm",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("strict"), "{stderr}");

    // without an explicit dual it cannot run either
    let out = twistoric()
        .args([
            "check",
            "--fan",
            "builtin:affine:2",
            "--character",
            "1/2,1/3",
            "--perversity",
            "p(1)=0,p(2)=5",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));

    // supplying the dual by hand makes it checkable
    let out = twistoric()
        .args([
            "check",
            "--fan",
            "builtin:affine:2",
            "--character",
            "1/2,1/3",
            "--perversity",
            "p(1)=0,p(2)=5",
            "--dual-perversity",
            "p(1)=0,p(2)=-5",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "twisted character still vanishes");
}

#[test]
fn invalid_fan_file_reports_violations() {
    let dir = std::env::temp_dir().join(format!("twistoric-invalid-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let fan_path = dir.join("overlap.fan");
    // two 2-cones overlapping in their interiors
    std::fs::write(
        &fan_path,
        "rank = 2\ncone = [[1,0],[0,1]]\ncone = [[1,0],[1,2]]\n",
    )
    .unwrap();
    let out = twistoric()
        .args([
            "check",
            "--fan",
            fan_path.to_str().unwrap(),
            "--character",
            "1/2,1/3",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("common face"), "stderr: {stderr}");
    std::fs::remove_dir_all(&dir).ok();
}
