//! CLI contract: flags and exit codes (0 success, 1 validation failure,
//! 2 runtime failure, 64 usage error).

use std::path::{Path, PathBuf};

use urbandtn::cli::cli_main;

fn argv(args: &[&str]) -> Vec<String> {
    std::iter::once("urbandtn".to_string())
        .chain(args.iter().map(|s| s.to_string()))
        .collect()
}

fn write_cross_scenario(dir: &Path) -> PathBuf {
    let maps = dir.join("maps");
    std::fs::create_dir_all(&maps).unwrap();
    std::fs::write(
        maps.join("cross.osm"),
        r#"<osm>
  <node id="1" lat="0.0" lon="-0.0002"/>
  <node id="2" lat="0.0" lon="0.0002"/>
  <node id="3" lat="0.0" lon="0.0"/>
  <node id="4" lat="-0.0002" lon="0.0"/>
  <node id="5" lat="0.0002" lon="0.0"/>
  <way id="10"><nd ref="1"/><nd ref="3"/><nd ref="2"/><tag k="highway" v="highway"/></way>
  <way id="20"><nd ref="4"/><nd ref="3"/><nd ref="5"/><tag k="highway" v="remote"/></way>
</osm>"#,
    )
    .unwrap();
    let config = "\
Simulation_Name = CliTest
No_of_Simulations = 1
Simulation_Time = 0.005
Map = maps/cross.osm
Report_Directory = logs
GUI_Enabled = False
Path_Types = {footpath: 1, remote: 2, highway: 3}
Random_Msg_Gen_Parameter = [2, 0.001]
No_of_Hosts_Groups = 2

Group_ID = G1
Label = T
Paths = [2, 3]
No_of_Hosts = 2
TX_Range = 30
Buffer_Size = 10M
Speed = 36
Mobile = True
Movement = PathType
Junction_Delay = 0
Color = red
Protocol = Epidemic

Group_ID = G2
Label = S
Paths = [1, 2, 3]
No_of_Hosts = 1
TX_Range = 50
Buffer_Size = 10M
Speed = 0
Mobile = False
Movement = Stationary
Junction_Delay = 0
Color = yellow
Protocol = Depot
";
    let path = dir.join("sim.config");
    std::fs::write(&path, config).unwrap();
    path
}

#[test]
fn missing_config_flag_is_a_usage_error() {
    assert_eq!(cli_main(argv(&[])), 64);
}

#[test]
fn unknown_flag_is_a_usage_error() {
    assert_eq!(cli_main(argv(&["--config", "x", "--frobnicate"])), 64);
}

#[test]
fn help_exits_zero() {
    assert_eq!(cli_main(argv(&["--help"])), 0);
}

#[test]
fn validate_map_succeeds_on_cross_fixture() {
    let tmp = tempfile::tempdir().unwrap();
    let config = write_cross_scenario(tmp.path());
    assert_eq!(cli_main(argv(&["--config", config.to_str().unwrap(), "--validate-map"])), 0);
}

#[test]
fn full_run_exits_zero_and_writes_logs() {
    let tmp = tempfile::tempdir().unwrap();
    let config = write_cross_scenario(tmp.path());
    let out = tmp.path().join("out");
    let code = cli_main(argv(&[
        "--config",
        config.to_str().unwrap(),
        "--seed",
        "7",
        "--report-dir",
        out.to_str().unwrap(),
        "--quiet",
    ]));
    assert_eq!(code, 0);
    assert!(out.join("T1/contacts_0.dat").exists());
    assert!(out.join("S1/messages_0.dat").exists());
    assert!(out.join("summary_0.json").exists());
    assert!(out.join("events").is_dir());
}

#[test]
fn runs_flag_overrides_simulation_count() {
    let tmp = tempfile::tempdir().unwrap();
    let config = write_cross_scenario(tmp.path());
    let out = tmp.path().join("out");
    let code = cli_main(argv(&[
        "--config",
        config.to_str().unwrap(),
        "--runs",
        "3",
        "--report-dir",
        out.to_str().unwrap(),
        "--quiet",
    ]));
    assert_eq!(code, 0);
    for r in 0..3 {
        assert!(out.join(format!("summary_{r}.json")).exists(), "missing run {r}");
    }
}

#[test]
fn invalid_scenario_exits_one() {
    let tmp = tempfile::tempdir().unwrap();
    let config = write_cross_scenario(tmp.path());
    let text = std::fs::read_to_string(&config).unwrap();
    std::fs::write(&config, text.replace("Speed = 36", "Speed = 0")).unwrap();
    assert_eq!(cli_main(argv(&["--config", config.to_str().unwrap(), "--quiet"])), 1);
}

#[test]
fn missing_map_exits_one() {
    let tmp = tempfile::tempdir().unwrap();
    let config = write_cross_scenario(tmp.path());
    std::fs::remove_file(tmp.path().join("maps/cross.osm")).unwrap();
    assert_eq!(cli_main(argv(&["--config", config.to_str().unwrap(), "--validate-map"])), 1);
}

#[test]
fn runtime_io_failure_exits_two() {
    let tmp = tempfile::tempdir().unwrap();
    let config = write_cross_scenario(tmp.path());
    let out = tmp.path().join("out");
    // A directory squatting on a log-file path breaks the run's report
    // phase without invalidating the scenario itself.
    std::fs::create_dir_all(out.join("T1/contacts_0.dat")).unwrap();
    let code = cli_main(argv(&[
        "--config",
        config.to_str().unwrap(),
        "--report-dir",
        out.to_str().unwrap(),
        "--quiet",
    ]));
    assert_eq!(code, 2);
}
