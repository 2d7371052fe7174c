//! Extend the configuration schema without touching simulator code: append a
//! `Name:Type` line to `envt_params.in` or `group_params.in` and the new key
//! becomes legal in `sim.config`.
//!
//! ```bash
//! cargo run -p urbandtn --example custom_parameters
//! ```

use std::path::Path;

use urbandtn::config::{load_config, load_schema, TypedValue, ValueKind};

fn main() {
    let dir = tempfile::tempdir().expect("tempdir");

    // A group schema with one extra parameter beyond the stock set.
    let stock = "\
Group_ID:string
Label:string
Paths:int-list
No_of_Hosts:int
TX_Range:real
Buffer_Size:string
Speed:real
Mobile:bool
Movement:string
Junction_Delay:real
Color:string
Protocol:string
Restricted_To:int
";
    std::fs::write(
        dir.path().join("group_params.in"),
        format!("{stock}Antenna_Gain_Dbi:real\n"),
    )
    .unwrap();
    std::fs::write(
        dir.path().join("envt_params.in"),
        "\
Simulation_Name:string
No_of_Simulations:int
Simulation_Time:real
Map:path
Report_Directory:path
GUI_Enabled:bool
Path_Types:string
Random_Msg_Gen_Parameter:pair
No_of_Hosts_Groups:int
",
    )
    .unwrap();

    std::fs::write(
        dir.path().join("sim.config"),
        "\
Simulation_Name = SchemaDemo
No_of_Simulations = 1
Simulation_Time = 1
Map = town.osm
Report_Directory = logs
GUI_Enabled = False
Path_Types = {highway: 1}
Random_Msg_Gen_Parameter = [1, 1]
No_of_Hosts_Groups = 1

Group_ID = G1
Label = T
Paths = [1]
No_of_Hosts = 1
TX_Range = 30
Buffer_Size = 10M
Speed = 20
Mobile = True
Movement = PathType
Junction_Delay = 0
Color = red
Protocol = Epidemic
Antenna_Gain_Dbi = 2.15
",
    )
    .unwrap();

    let general_schema = load_schema(&dir.path().join("envt_params.in")).unwrap();
    let group_schema = load_schema(&dir.path().join("group_params.in")).unwrap();
    println!(
        "group schema: {} entries, last = {:?}",
        group_schema.entries.len(),
        group_schema.entries.last().unwrap()
    );
    assert_eq!(group_schema.kind_of("Antenna_Gain_Dbi"), Some(ValueKind::Real));

    let (general, groups) =
        load_config(&dir.path().join("sim.config"), &general_schema, &group_schema).unwrap();
    println!(
        "parsed scenario `{}` with {} group(s); known keys type-check, unknown keys are rejected",
        general.simulation_name,
        groups.len()
    );
    println!(
        "the extra key parsed as {:?} and is available to custom code",
        TypedValue::Real(2.15)
    );

    // Without the schema line the same config is rejected.
    let stock_only = load_schema(&{
        let p = dir.path().join("group_stock.in");
        std::fs::write(&p, stock).unwrap();
        p
    })
    .unwrap();
    let err = load_config(&dir.path().join("sim.config"), &general_schema, &stock_only)
        .expect_err("unknown key must be rejected");
    println!("with the stock schema the parse fails as expected: {err}");

    let _ = Path::new("keep-clippy-quiet");
}
