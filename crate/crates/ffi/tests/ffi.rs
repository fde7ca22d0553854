use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use antijam_ffi::*;

fn scenario_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/examples/six_uav_mission.scenario")
}

fn load() -> *mut AjScenario {
    let path = CString::new(scenario_path().to_str().unwrap()).unwrap();
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { aj_scenario_load(path.as_ptr(), &mut s) }, AjStatus::Ok);
    assert!(!s.is_null());
    s
}

fn last_error() -> String {
    let p = aj_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn dims_and_payoffs() {
    let s = load();
    let (mut n, mut m, mut z) = (0, 0, 0);
    unsafe {
        assert_eq!(aj_scenario_dims(s, &mut n, &mut m, &mut z), AjStatus::Ok);
        assert_eq!((n, m, z), (6, 4, 6));

        let spread = [0usize, 1, 2, 3, 0, 1];
        let (mut loss, mut pot, mut ju) = (0.0, 0.0, 0.0);
        assert_eq!(aj_total_loss(s, 0, spread.as_ptr(), 6, 3, &mut loss), AjStatus::Ok);
        assert_eq!(aj_potential(s, 0, spread.as_ptr(), 6, 3, &mut pot), AjStatus::Ok);
        assert_eq!(aj_jammer_utility(s, 0, spread.as_ptr(), 6, 3, &mut ju), AjStatus::Ok);
        assert!(loss > 0.0 && ju > 0.0);
        assert_eq!(loss, pot);

        let stacked = [0usize; 6];
        let mut worse = 0.0;
        assert_eq!(aj_total_loss(s, 0, stacked.as_ptr(), 6, 0, &mut worse), AjStatus::Ok);
        assert!(worse > loss);
        aj_scenario_free(s);
    }
}

#[test]
fn errors_carry_codes_and_messages() {
    let s = load();
    let mut v = 0.0;
    let a = [0usize; 6];
    unsafe {
        assert_eq!(aj_total_loss(s, 0, a.as_ptr(), 6, 9, &mut v), AjStatus::OutOfRange);
        assert!(last_error().contains("channel"), "{}", last_error());
        assert_eq!(aj_total_loss(s, 99, a.as_ptr(), 6, 0, &mut v), AjStatus::OutOfRange);
        assert_eq!(aj_total_loss(s, 0, a.as_ptr(), 5, 0, &mut v), AjStatus::OutOfRange);
        assert_eq!(aj_total_loss(ptr::null(), 0, a.as_ptr(), 6, 0, &mut v), AjStatus::NullPointer);
        assert!(last_error().contains("scenario"));

        let text = CString::new("[world]\nperiods = 1\n").unwrap();
        let mut bad = ptr::null_mut();
        assert_eq!(aj_scenario_parse(text.as_ptr(), &mut bad), AjStatus::Parse);
        assert!(bad.is_null());
        assert!(last_error().contains("channels"), "{}", last_error());

        let missing = CString::new("/nonexistent/x.scenario").unwrap();
        assert_eq!(aj_scenario_load(missing.as_ptr(), &mut bad), AjStatus::Io);

        let mut jam = 0;
        let mut out = [0usize; 2];
        assert_eq!(
            aj_solve_stackelberg(s, 0, AjSelector::BestNe, 10, out.as_mut_ptr(), 2, &mut jam, &mut v),
            AjStatus::EnumerationCap
        );
        assert_eq!(
            aj_solve_stackelberg(s, 0, AjSelector::BestNe, 1 << 20, out.as_mut_ptr(), 2, &mut jam, &mut v),
            AjStatus::BufferTooSmall
        );
        aj_scenario_free(s);
        aj_scenario_free(ptr::null_mut());
        aj_run_result_free(ptr::null_mut());
    }
}

#[test]
fn invalid_scenario_is_validation_error() {
    let text = std::fs::read_to_string(scenario_path()).unwrap().replace("count = 4", "count = 0");
    let text = CString::new(text).unwrap();
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { aj_scenario_parse(text.as_ptr(), &mut s) }, AjStatus::Validation);
    assert!(last_error().contains("channel"), "{}", last_error());
}

#[test]
fn learning_and_oracle_agree_with_core() {
    let s = load();
    let mut cfg = aj_learning_config_default();
    cfg.seed = 3;
    let mut r = ptr::null_mut();
    unsafe {
        assert_eq!(aj_run(s, &cfg, &mut r), AjStatus::Ok);
        let core = antijam::run_all_periods(
            &antijam::load_scenario(scenario_path()).unwrap(),
            &antijam::LearningConfig { seed: 3, record_traces: false, ..Default::default() },
        )
        .unwrap();

        let mut total = 0.0;
        assert_eq!(aj_run_result_total_loss(r, &mut total), AjStatus::Ok);
        assert_eq!(total, core.total_loss());

        let mut ch = [usize::MAX; 6];
        let mut sum = AjPeriodSummary::default();
        for (z, p) in core.periods.iter().enumerate() {
            assert_eq!(aj_run_result_period(r, z, ch.as_mut_ptr(), 6, &mut sum), AjStatus::Ok);
            assert_eq!(&ch[..], &p.uav_channels[..]);
            assert_eq!(sum.jammer_channel, p.jammer_channel);
            assert_eq!(sum.total_loss, p.total_loss);
        }
        assert_eq!(aj_run_result_period(r, 6, ch.as_mut_ptr(), 6, &mut sum), AjStatus::OutOfRange);

        let (mut jam, mut loss) = (0, 0.0);
        assert_eq!(
            aj_solve_stackelberg(s, 0, AjSelector::BestNe, 1 << 20, ch.as_mut_ptr(), 6, &mut jam, &mut loss),
            AjStatus::Ok
        );
        let mut check = 0.0;
        assert_eq!(aj_total_loss(s, 0, ch.as_ptr(), 6, jam, &mut check), AjStatus::Ok);
        assert_eq!(check, loss);

        aj_run_result_free(r);
        aj_scenario_free(s);
    }
}

#[test]
fn version_matches_crate() {
    let v = unsafe { CStr::from_ptr(aj_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_api() {
    let header = std::fs::read_to_string(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include/antijam.h")).unwrap();
    for name in [
        "ANTIJAM_H",
        "typedef struct AjScenario AjScenario",
        "typedef struct AjRunResult AjRunResult",
        "AJ_STATUS_ENUMERATION_CAP = 6",
        "aj_scenario_load",
        "aj_total_loss",
        "aj_run_result_period",
        "aj_solve_stackelberg",
        "aj_last_error",
    ] {
        assert!(header.contains(name), "header lacks {name}");
    }
}

#[test]
fn c_program_links_against_static_library() {
    let Some(cc) = ["cc", "gcc", "clang"]
        .into_iter()
        .find(|c| Command::new(c).arg("--version").output().is_ok())
    else {
        eprintln!("no C compiler found, skipping");
        return;
    };
    let crate_dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    // tests/<name>-<hash> lives in target/<profile>/deps
    let deps = std::env::current_exe().unwrap().parent().unwrap().to_path_buf();
    let lib = deps.parent().unwrap().join("libantijam_ffi.a");
    if !lib.exists() {
        eprintln!("{} not built, skipping", lib.display());
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("main.c");
    std::fs::write(
        &src,
        r#"
#include <stdio.h>
#include "antijam.h"
int main(int argc, char **argv) {
    AjScenario *s = NULL;
    if (aj_scenario_load(argv[1], &s) != AJ_STATUS_OK) { fprintf(stderr, "%s\n", aj_last_error()); return 1; }
    size_t ch[6] = {0, 1, 2, 3, 0, 1};
    double loss = 0.0;
    if (aj_total_loss(s, 0, ch, 6, 3, &loss) != AJ_STATUS_OK) return 2;
    AjLearningConfig cfg = aj_learning_config_default();
    AjRunResult *r = NULL;
    if (aj_run(s, &cfg, &r) != AJ_STATUS_OK) return 3;
    double total = 0.0;
    aj_run_result_total_loss(r, &total);
    if (aj_scenario_load("/nonexistent", &s) != AJ_STATUS_IO) return 4;
    printf("%s %.6f %d\n", aj_version(), loss, total > 0.0);
    aj_run_result_free(r);
    aj_scenario_free(s);
    return 0;
}
"#,
    )
    .unwrap();
    let exe = dir.path().join("demo");
    let status = Command::new(cc)
        .arg(&src)
        .arg("-I")
        .arg(crate_dir.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success(), "C compile failed");
    let out = Command::new(&exe).arg(scenario_path()).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.starts_with(env!("CARGO_PKG_VERSION")) && stdout.trim_end().ends_with(" 1"), "{stdout}");
}
