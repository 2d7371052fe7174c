//! Settings-file parsing.
//!
//! A scenario is described by three files living in one directory:
//!
//! * `sim.config`: `Key = Value` lines; `#` starts a comment; a group block
//!   begins at a `Group_ID` line and runs to the next `Group_ID` or EOF.
//! * `envt_params.in` / `group_params.in`: one `Name:Type` line per
//!   parameter, defining which keys are accepted and how they are typed.
//!   When a schema file is absent the built-in base schema applies.
//!
//! Relative paths inside `sim.config` (map, report directory) resolve
//! against the config file's directory.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("line {0}: malformed schema line (expected Name:Type)")]
    MalformedSchemaLine(usize),
    #[error("duplicate parameter in schema: {0}")]
    DuplicateParam(String),
    #[error("line {line}: unknown value type `{token}`")]
    UnknownTypeToken { line: usize, token: String },
    #[error("unknown key: {0}")]
    UnknownKey(String),
    #[error("key {key}: cannot parse `{raw}` as {expected}")]
    TypeMismatch { key: String, raw: String, expected: &'static str },
    #[error("missing required key: {0}")]
    MissingRequired(String),
    #[error("group {group_id}: path type {value} is not defined in Path_Types")]
    PathTypeUndefined { group_id: String, value: i64 },
    #[error("line {0}: expected `Key = Value`")]
    MalformedLine(usize),
    #[error("{0} defined before any Group_ID line")]
    GroupKeyOutsideGroup(String),
    #[error("io error reading {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

/// Value kinds a schema entry may declare.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValueKind {
    Str,
    Int,
    Real,
    Bool,
    IntList,
    Pair,
    Path,
}

impl ValueKind {
    fn parse_token(tok: &str) -> Option<Self> {
        match tok {
            "string" => Some(Self::Str),
            "int" => Some(Self::Int),
            "real" => Some(Self::Real),
            "bool" => Some(Self::Bool),
            "int-list" => Some(Self::IntList),
            "pair" => Some(Self::Pair),
            "path" => Some(Self::Path),
            _ => None,
        }
    }

    pub fn token(self) -> &'static str {
        match self {
            Self::Str => "string",
            Self::Int => "int",
            Self::Real => "real",
            Self::Bool => "bool",
            Self::IntList => "int-list",
            Self::Pair => "pair",
            Self::Path => "path",
        }
    }
}

/// Ordered list of `Name:Type` schema entries with unique names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamSchema {
    pub entries: Vec<(String, ValueKind)>,
}

impl ParamSchema {
    pub fn kind_of(&self, name: &str) -> Option<ValueKind> {
        self.entries.iter().find(|(n, _)| n == name).map(|(_, k)| *k)
    }
}

/// A value typed according to its schema entry.
#[derive(Debug, Clone, PartialEq)]
pub enum TypedValue {
    Str(String),
    Int(i64),
    Real(f64),
    Bool(bool),
    IntList(Vec<i64>),
    Pair(i64, f64),
    Path(PathBuf),
}

/// Movement models an agent group may use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MovementModel {
    Stationary,
    SimpleRandom,
    PathType,
    PathMemory,
    Restricted,
    Wait,
}

impl MovementModel {
    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "Stationary" | "StationaryMovement" => Some(Self::Stationary),
            "SimpleRandom" | "SimpleRandomMovement" => Some(Self::SimpleRandom),
            "PathType" | "PathTypeMovement" => Some(Self::PathType),
            "PathMemory" | "PathMemoryMovement" => Some(Self::PathMemory),
            "Restricted" | "RestrictedMovement" => Some(Self::Restricted),
            "Wait" | "WaitMovement" => Some(Self::Wait),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Stationary => "Stationary",
            Self::SimpleRandom => "SimpleRandom",
            Self::PathType => "PathType",
            Self::PathMemory => "PathMemory",
            Self::Restricted => "Restricted",
            Self::Wait => "Wait",
        }
    }
}

/// Handoff protocols an agent group may use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProtocolKind {
    Epidemic,
    SuperiorOnly,
    SuperiorPeer,
    Depot,
}

impl ProtocolKind {
    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "Epidemic" | "EpidemicHandoff" => Some(Self::Epidemic),
            "SuperiorOnly" | "SuperiorOnlyHandoff" => Some(Self::SuperiorOnly),
            "SuperiorPeer" | "SuperiorPeerHandoff" => Some(Self::SuperiorPeer),
            "Depot" => Some(Self::Depot),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Epidemic => "Epidemic",
            Self::SuperiorOnly => "SuperiorOnly",
            Self::SuperiorPeer => "SuperiorPeer",
            Self::Depot => "Depot",
        }
    }
}

/// Environment-level parameters shared by every component of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralParams {
    pub simulation_name: String,
    pub num_simulations: u32,
    pub simulation_time_hours: f64,
    pub map_path: PathBuf,
    pub report_directory: PathBuf,
    pub gui_enabled: bool,
    /// Road-type name -> unique small integer.
    pub path_types: BTreeMap<String, i64>,
    /// (m, n): m events generated in every n hours.
    pub msg_gen_rate: (u32, f64),
    pub num_host_groups: u32,
    /// Lifetime of each generated event in hours.
    pub event_duration_hours: f64,
    /// Random payload size per event message, in bytes.
    pub event_payload_bytes: usize,
    /// Base step length in meters; one tick moves the fastest group this far.
    pub step_base_m: f64,
}

/// Per-group parameters; every agent in a group shares them.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupSpec {
    pub group_id: String,
    pub label: String,
    pub paths: Vec<i64>,
    pub num_hosts: u32,
    pub tx_range_m: f64,
    /// Declared capacity in bytes; buffers are unbounded, the value is kept
    /// so a finite-buffer extension needs no format change.
    pub buffer_size: u64,
    pub speed_kmh: f64,
    pub mobile: bool,
    pub movement_model: MovementModel,
    pub junction_delay_s: f64,
    pub color: String,
    pub protocol: ProtocolKind,
    /// Road class Restricted/Wait lock onto; None means the scenario default
    /// (the maximum Path_Types value, the class every group can reach).
    pub restricted_to: Option<i64>,
}

/// One cross-field consistency problem found by [`validate_scenario`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub subject: String,
    pub message: String,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.subject, self.message)
    }
}

const GENERAL_SCHEMA_TEXT: &str = "\
Simulation_Name:string
No_of_Simulations:int
Simulation_Time:real
Map:path
Report_Directory:path
GUI_Enabled:bool
Path_Types:string
Random_Msg_Gen_Parameter:pair
No_of_Hosts_Groups:int
Event_Duration:real
Event_Payload_Bytes:int
Step_Base:real
";

const GROUP_SCHEMA_TEXT: &str = "\
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

/// Built-in schema for the general parameter block (what a stock
/// `envt_params.in` contains).
pub fn builtin_general_schema() -> ParamSchema {
    parse_schema_text(GENERAL_SCHEMA_TEXT).expect("builtin schema is well-formed")
}

/// Built-in schema for group blocks (what a stock `group_params.in` contains).
pub fn builtin_group_schema() -> ParamSchema {
    parse_schema_text(GROUP_SCHEMA_TEXT).expect("builtin schema is well-formed")
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(pos) => &line[..pos],
        None => line,
    }
}

fn parse_schema_text(text: &str) -> Result<ParamSchema, ConfigError> {
    let mut entries: Vec<(String, ValueKind)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        let (name, ty) = line
            .split_once(':')
            .ok_or(ConfigError::MalformedSchemaLine(line_no))?;
        let name = name.trim();
        let ty = ty.trim();
        if name.is_empty() || ty.is_empty() || name.contains(char::is_whitespace) {
            return Err(ConfigError::MalformedSchemaLine(line_no));
        }
        let kind = ValueKind::parse_token(ty).ok_or(ConfigError::UnknownTypeToken {
            line: line_no,
            token: ty.to_string(),
        })?;
        if entries.iter().any(|(n, _)| n == name) {
            return Err(ConfigError::DuplicateParam(name.to_string()));
        }
        entries.push((name.to_string(), kind));
    }
    Ok(ParamSchema { entries })
}

/// Loads a `Name:Type` schema file.
pub fn load_schema(schema_file: &Path) -> Result<ParamSchema, ConfigError> {
    let text = std::fs::read_to_string(schema_file).map_err(|source| ConfigError::Io {
        path: schema_file.to_path_buf(),
        source,
    })?;
    parse_schema_text(&text)
}

fn parse_typed(key: &str, raw: &str, kind: ValueKind) -> Result<TypedValue, ConfigError> {
    let mismatch = |expected: &'static str| ConfigError::TypeMismatch {
        key: key.to_string(),
        raw: raw.to_string(),
        expected,
    };
    match kind {
        ValueKind::Str => Ok(TypedValue::Str(raw.to_string())),
        ValueKind::Path => Ok(TypedValue::Path(PathBuf::from(raw))),
        ValueKind::Int => raw
            .parse::<i64>()
            .map(TypedValue::Int)
            .map_err(|_| mismatch("int")),
        ValueKind::Real => raw
            .parse::<f64>()
            .map(TypedValue::Real)
            .map_err(|_| mismatch("real")),
        ValueKind::Bool => match raw {
            "True" | "true" => Ok(TypedValue::Bool(true)),
            "False" | "false" => Ok(TypedValue::Bool(false)),
            _ => Err(mismatch("bool")),
        },
        ValueKind::IntList => {
            let inner = raw
                .strip_prefix('[')
                .and_then(|s| s.strip_suffix(']'))
                .ok_or_else(|| mismatch("int-list"))?;
            let mut items = Vec::new();
            for part in inner.split(',') {
                let part = part.trim();
                if part.is_empty() {
                    continue;
                }
                items.push(part.parse::<i64>().map_err(|_| mismatch("int-list"))?);
            }
            Ok(TypedValue::IntList(items))
        }
        ValueKind::Pair => {
            let inner = raw
                .strip_prefix('[')
                .and_then(|s| s.strip_suffix(']'))
                .ok_or_else(|| mismatch("pair"))?;
            let (m, n) = inner.split_once(',').ok_or_else(|| mismatch("pair"))?;
            let m = m.trim().parse::<i64>().map_err(|_| mismatch("pair"))?;
            let n = n.trim().parse::<f64>().map_err(|_| mismatch("pair"))?;
            Ok(TypedValue::Pair(m, n))
        }
    }
}

/// Parses a `Path_Types` value of the form `{name: int, name: int, ...}`.
fn parse_path_types(key: &str, raw: &str) -> Result<BTreeMap<String, i64>, ConfigError> {
    let mismatch = || ConfigError::TypeMismatch {
        key: key.to_string(),
        raw: raw.to_string(),
        expected: "{name: int, ...}",
    };
    let inner = raw
        .strip_prefix('{')
        .and_then(|s| s.strip_suffix('}'))
        .ok_or_else(mismatch)?;
    let mut map = BTreeMap::new();
    for part in inner.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let (name, num) = part.split_once(':').ok_or_else(mismatch)?;
        let name = name.trim().to_string();
        let num = num.trim().parse::<i64>().map_err(|_| mismatch())?;
        if name.is_empty() || map.insert(name, num).is_some() {
            return Err(mismatch());
        }
    }
    Ok(map)
}

/// Parses a buffer capacity like `500K`, `10M`, `1G`, or a plain byte count.
fn parse_buffer_size(key: &str, raw: &str) -> Result<u64, ConfigError> {
    let mismatch = || ConfigError::TypeMismatch {
        key: key.to_string(),
        raw: raw.to_string(),
        expected: "size with optional K/M/G suffix",
    };
    let raw = raw.trim();
    let (digits, mult) = match raw.chars().last() {
        Some('K') => (&raw[..raw.len() - 1], 1u64 << 10),
        Some('M') => (&raw[..raw.len() - 1], 1u64 << 20),
        Some('G') => (&raw[..raw.len() - 1], 1u64 << 30),
        _ => (raw, 1),
    };
    let n = digits.trim().parse::<u64>().map_err(|_| mismatch())?;
    Ok(n * mult)
}

struct RawBlock {
    values: BTreeMap<String, TypedValue>,
}

impl RawBlock {
    fn take(&mut self, key: &str) -> Result<TypedValue, ConfigError> {
        self.values
            .remove(key)
            .ok_or_else(|| ConfigError::MissingRequired(key.to_string()))
    }

    fn take_opt(&mut self, key: &str) -> Option<TypedValue> {
        self.values.remove(key)
    }
}

fn expect_str(key: &str, v: TypedValue) -> Result<String, ConfigError> {
    match v {
        TypedValue::Str(s) => Ok(s),
        other => Err(ConfigError::TypeMismatch {
            key: key.to_string(),
            raw: format!("{other:?}"),
            expected: "string",
        }),
    }
}

macro_rules! expect_variant {
    ($fn_name:ident, $variant:ident, $out:ty, $label:expr) => {
        fn $fn_name(key: &str, v: TypedValue) -> Result<$out, ConfigError> {
            match v {
                TypedValue::$variant(x) => Ok(x),
                other => Err(ConfigError::TypeMismatch {
                    key: key.to_string(),
                    raw: format!("{other:?}"),
                    expected: $label,
                }),
            }
        }
    };
}

expect_variant!(expect_int, Int, i64, "int");
expect_variant!(expect_real, Real, f64, "real");
expect_variant!(expect_bool, Bool, bool, "bool");
expect_variant!(expect_int_list, IntList, Vec<i64>, "int-list");
expect_variant!(expect_path, Path, PathBuf, "path");

fn expect_pair(key: &str, v: TypedValue) -> Result<(i64, f64), ConfigError> {
    match v {
        TypedValue::Pair(m, n) => Ok((m, n)),
        other => Err(ConfigError::TypeMismatch {
            key: key.to_string(),
            raw: format!("{other:?}"),
            expected: "pair",
        }),
    }
}

fn build_general(mut block: RawBlock) -> Result<GeneralParams, ConfigError> {
    let simulation_name = expect_str("Simulation_Name", block.take("Simulation_Name")?)?;
    let num_simulations = expect_int("No_of_Simulations", block.take("No_of_Simulations")?)? as u32;
    let simulation_time_hours = expect_real("Simulation_Time", block.take("Simulation_Time")?)?;
    let map_path = expect_path("Map", block.take("Map")?)?;
    let report_directory = expect_path("Report_Directory", block.take("Report_Directory")?)?;
    let gui_enabled = expect_bool("GUI_Enabled", block.take("GUI_Enabled")?)?;
    let path_types_raw = expect_str("Path_Types", block.take("Path_Types")?)?;
    let path_types = parse_path_types("Path_Types", &path_types_raw)?;
    let (m, n) = expect_pair(
        "Random_Msg_Gen_Parameter",
        block.take("Random_Msg_Gen_Parameter")?,
    )?;
    let num_host_groups = expect_int("No_of_Hosts_Groups", block.take("No_of_Hosts_Groups")?)? as u32;

    let event_duration_hours = match block.take_opt("Event_Duration") {
        Some(v) => expect_real("Event_Duration", v)?,
        None => 24.0,
    };
    let event_payload_bytes = match block.take_opt("Event_Payload_Bytes") {
        Some(v) => expect_int("Event_Payload_Bytes", v)? as usize,
        None => 5,
    };
    let step_base_m = match block.take_opt("Step_Base") {
        Some(v) => expect_real("Step_Base", v)?,
        None => 5.0,
    };

    Ok(GeneralParams {
        simulation_name,
        num_simulations,
        simulation_time_hours,
        map_path,
        report_directory,
        gui_enabled,
        path_types,
        msg_gen_rate: (m as u32, n),
        num_host_groups,
        event_duration_hours,
        event_payload_bytes,
        step_base_m,
    })
}

fn build_group(mut block: RawBlock, general: &GeneralParams) -> Result<GroupSpec, ConfigError> {
    let group_id = expect_str("Group_ID", block.take("Group_ID")?)?;
    let label = expect_str("Label", block.take("Label")?)?;
    let paths = expect_int_list("Paths", block.take("Paths")?)?;
    for &p in &paths {
        if !general.path_types.values().any(|&v| v == p) {
            return Err(ConfigError::PathTypeUndefined {
                group_id,
                value: p,
            });
        }
    }
    let num_hosts = expect_int("No_of_Hosts", block.take("No_of_Hosts")?)? as u32;
    let tx_range_m = expect_real("TX_Range", block.take("TX_Range")?)?;
    let buffer_raw = expect_str("Buffer_Size", block.take("Buffer_Size")?)?;
    let buffer_size = parse_buffer_size("Buffer_Size", &buffer_raw)?;
    let speed_kmh = expect_real("Speed", block.take("Speed")?)?;
    let mobile = expect_bool("Mobile", block.take("Mobile")?)?;
    let movement_raw = expect_str("Movement", block.take("Movement")?)?;
    let movement_model =
        MovementModel::parse(&movement_raw).ok_or_else(|| ConfigError::TypeMismatch {
            key: "Movement".to_string(),
            raw: movement_raw.clone(),
            expected: "movement model name",
        })?;
    let junction_delay_s = expect_real("Junction_Delay", block.take("Junction_Delay")?)?;
    let color = expect_str("Color", block.take("Color")?)?;
    let protocol_raw = expect_str("Protocol", block.take("Protocol")?)?;
    let protocol = ProtocolKind::parse(&protocol_raw).ok_or_else(|| ConfigError::TypeMismatch {
        key: "Protocol".to_string(),
        raw: protocol_raw.clone(),
        expected: "protocol name",
    })?;
    let restricted_to = match block.take_opt("Restricted_To") {
        Some(v) => Some(expect_int("Restricted_To", v)?),
        None => None,
    };

    Ok(GroupSpec {
        group_id,
        label,
        paths,
        num_hosts,
        tx_range_m,
        buffer_size,
        speed_kmh,
        mobile,
        movement_model,
        junction_delay_s,
        color,
        protocol,
        restricted_to,
    })
}

/// Parses `sim.config` text against the two schemas.
pub fn load_config_text(
    text: &str,
    config_dir: &Path,
    general_schema: &ParamSchema,
    group_schema: &ParamSchema,
) -> Result<(GeneralParams, Vec<GroupSpec>), ConfigError> {
    let mut general_block = RawBlock { values: BTreeMap::new() };
    let mut group_blocks: Vec<RawBlock> = Vec::new();
    let mut in_groups = false;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or(ConfigError::MalformedLine(line_no))?;
        let key = key.trim();
        let value = value.trim();

        if key == "Group_ID" {
            in_groups = true;
            group_blocks.push(RawBlock { values: BTreeMap::new() });
        }

        let (kind, block) = if in_groups {
            let kind = group_schema
                .kind_of(key)
                .ok_or_else(|| ConfigError::UnknownKey(key.to_string()))?;
            (kind, group_blocks.last_mut().expect("group block exists"))
        } else if let Some(kind) = general_schema.kind_of(key) {
            (kind, &mut general_block)
        } else if group_schema.kind_of(key).is_some() {
            return Err(ConfigError::GroupKeyOutsideGroup(key.to_string()));
        } else {
            return Err(ConfigError::UnknownKey(key.to_string()));
        };

        let typed = parse_typed(key, value, kind)?;
        block.values.insert(key.to_string(), typed);
    }

    let mut general = build_general(general_block)?;
    // Resolve file references relative to the config's own directory.
    if general.map_path.is_relative() {
        general.map_path = config_dir.join(&general.map_path);
    }
    if general.report_directory.is_relative() {
        general.report_directory = config_dir.join(&general.report_directory);
    }

    let mut groups = Vec::new();
    for block in group_blocks {
        groups.push(build_group(block, &general)?);
    }
    Ok((general, groups))
}

/// Loads and parses a `sim.config` file.
pub fn load_config(
    config_file: &Path,
    general_schema: &ParamSchema,
    group_schema: &ParamSchema,
) -> Result<(GeneralParams, Vec<GroupSpec>), ConfigError> {
    let text = std::fs::read_to_string(config_file).map_err(|source| ConfigError::Io {
        path: config_file.to_path_buf(),
        source,
    })?;
    let dir = config_file.parent().unwrap_or(Path::new("."));
    load_config_text(&text, dir, general_schema, group_schema)
}

/// Checks cross-field invariants. Violations are data, not errors; an empty
/// report means the scenario is runnable.
pub fn validate_scenario(gp: &GeneralParams, groups: &[GroupSpec]) -> Vec<Violation> {
    let mut report = Vec::new();
    let v = |subject: &str, message: String| Violation {
        subject: subject.to_string(),
        message,
    };

    let mut seen = BTreeMap::new();
    for (name, &num) in &gp.path_types {
        if let Some(prev) = seen.insert(num, name.clone()) {
            report.push(v(
                "Path_Types",
                format!("value {num} assigned to both {prev} and {name}"),
            ));
        }
    }
    if gp.path_types.is_empty() {
        report.push(v("Path_Types", "at least one road type is required".into()));
    }
    if gp.num_simulations == 0 {
        report.push(v("No_of_Simulations", "must be >= 1".into()));
    }
    if gp.simulation_time_hours < 0.0 {
        report.push(v("Simulation_Time", "must be >= 0".into()));
    }
    if gp.msg_gen_rate.1 <= 0.0 {
        report.push(v("Random_Msg_Gen_Parameter", "n must be > 0".into()));
    }
    if gp.msg_gen_rate.0 == 0 {
        report.push(v("Random_Msg_Gen_Parameter", "m must be >= 1".into()));
    }
    if gp.num_host_groups as usize != groups.len() {
        report.push(v(
            "No_of_Hosts_Groups",
            format!("declared {} but {} group blocks present", gp.num_host_groups, groups.len()),
        ));
    }
    if !gp.map_path.exists() {
        report.push(v("Map", format!("map file {} does not exist", gp.map_path.display())));
    }

    let mut ids = BTreeMap::new();
    let mut labels = BTreeMap::new();
    for g in groups {
        if let Some(()) = ids.insert(g.group_id.clone(), ()) {
            report.push(v(&g.group_id, "duplicate Group_ID".into()));
        }
        if let Some(()) = labels.insert(g.label.clone(), ()) {
            report.push(v(&g.group_id, format!("label {} already used; object ids would collide", g.label)));
        }
        if g.num_hosts == 0 {
            report.push(v(&g.group_id, "No_of_Hosts must be >= 1".into()));
        }
        if g.paths.is_empty() {
            report.push(v(&g.group_id, "Paths must not be empty".into()));
        }
        if g.tx_range_m < 0.0 {
            report.push(v(&g.group_id, "TX_Range must be >= 0".into()));
        }
        if g.junction_delay_s < 0.0 {
            report.push(v(&g.group_id, "Junction_Delay must be >= 0".into()));
        }
        if g.mobile {
            if g.speed_kmh <= 0.0 {
                report.push(v(&g.group_id, "speed_kmh must be > 0 for mobile groups".into()));
            }
            if g.movement_model == MovementModel::Stationary {
                report.push(v(&g.group_id, "mobile group cannot use Stationary movement".into()));
            }
        } else {
            if g.movement_model != MovementModel::Stationary {
                report.push(v(
                    &g.group_id,
                    format!("stationary group cannot use {} movement", g.movement_model.name()),
                ));
            }
            if g.speed_kmh != 0.0 {
                report.push(v(&g.group_id, "stationary group must have Speed = 0".into()));
            }
        }
        if let Some(rt) = g.restricted_to {
            if !gp.path_types.values().any(|&t| t == rt) {
                report.push(v(&g.group_id, format!("Restricted_To {rt} is not a Path_Types value")));
            }
        }
    }
    report
}

fn format_bool(b: bool) -> &'static str {
    if b { "True" } else { "False" }
}

fn format_int_list(items: &[i64]) -> String {
    let inner: Vec<String> = items.iter().map(|i| i.to_string()).collect();
    format!("[{}]", inner.join(", "))
}

/// Renders parsed parameters back to `sim.config` text. Re-parsing the output
/// yields an equal `(GeneralParams, Vec<GroupSpec>)`.
pub fn to_config_text(gp: &GeneralParams, groups: &[GroupSpec]) -> String {
    let mut out = String::new();
    let mut line = |k: &str, v: String| {
        let _ = writeln!(out, "{k} = {v}");
    };
    line("Simulation_Name", gp.simulation_name.clone());
    line("No_of_Simulations", gp.num_simulations.to_string());
    line("Simulation_Time", gp.simulation_time_hours.to_string());
    line("Map", gp.map_path.display().to_string());
    line("Report_Directory", gp.report_directory.display().to_string());
    line("GUI_Enabled", format_bool(gp.gui_enabled).to_string());
    let types: Vec<String> = gp.path_types.iter().map(|(k, v)| format!("{k}: {v}")).collect();
    line("Path_Types", format!("{{{}}}", types.join(", ")));
    line(
        "Random_Msg_Gen_Parameter",
        format!("[{}, {}]", gp.msg_gen_rate.0, gp.msg_gen_rate.1),
    );
    line("No_of_Hosts_Groups", gp.num_host_groups.to_string());
    line("Event_Duration", gp.event_duration_hours.to_string());
    line("Event_Payload_Bytes", gp.event_payload_bytes.to_string());
    line("Step_Base", gp.step_base_m.to_string());

    for g in groups {
        let _ = writeln!(out);
        let mut line = |k: &str, v: String| {
            let _ = writeln!(out, "{k} = {v}");
        };
        line("Group_ID", g.group_id.clone());
        line("Label", g.label.clone());
        line("Paths", format_int_list(&g.paths));
        line("No_of_Hosts", g.num_hosts.to_string());
        line("TX_Range", g.tx_range_m.to_string());
        line("Buffer_Size", g.buffer_size.to_string());
        line("Speed", g.speed_kmh.to_string());
        line("Mobile", format_bool(g.mobile).to_string());
        line("Movement", g.movement_model.name().to_string());
        line("Junction_Delay", g.junction_delay_s.to_string());
        line("Color", g.color.clone());
        line("Protocol", g.protocol.name().to_string());
        if let Some(rt) = g.restricted_to {
            line("Restricted_To", rt.to_string());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write_schema(dir: &Path, name: &str, text: &str) -> PathBuf {
        let p = dir.join(name);
        std::fs::write(&p, text).unwrap();
        p
    }

    fn sample_config_text() -> String {
        "\
# sample scenario
Simulation_Name = SampleDTN
No_of_Simulations = 2
Simulation_Time = 1.0
Map = maps/town.osm
Report_Directory = logs
GUI_Enabled = False
Path_Types = {footpath: 1, remote: 2, highway: 3}
Random_Msg_Gen_Parameter = [2, 1]
No_of_Hosts_Groups = 2

Group_ID = G1
Label = T
Paths = [2, 3]
No_of_Hosts = 3
TX_Range = 50
Buffer_Size = 10M
Speed = 18
Mobile = True
Movement = PathType
Junction_Delay = 4
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
"
        .to_string()
    }

    fn parse_sample() -> (GeneralParams, Vec<GroupSpec>) {
        load_config_text(
            &sample_config_text(),
            Path::new("/tmp/scenario"),
            &builtin_general_schema(),
            &builtin_group_schema(),
        )
        .unwrap()
    }

    #[test]
    fn schema_line_parses_name_and_type() {
        let s = parse_schema_text("TX_Range:real").unwrap();
        assert_eq!(s.entries, vec![("TX_Range".to_string(), ValueKind::Real)]);
    }

    #[test]
    fn empty_schema_file_is_empty_schema() {
        let s = parse_schema_text("").unwrap();
        assert!(s.entries.is_empty());
    }

    #[test]
    fn duplicate_schema_entry_rejected() {
        let err = parse_schema_text("Speed:real\nSpeed:real").unwrap_err();
        assert!(matches!(err, ConfigError::DuplicateParam(name) if name == "Speed"));
    }

    #[test]
    fn malformed_schema_line_reports_line_number() {
        let err = parse_schema_text("Speed:real\nnot a schema line").unwrap_err();
        assert!(matches!(err, ConfigError::MalformedSchemaLine(2)));
    }

    #[test]
    fn unknown_type_token_rejected() {
        let err = parse_schema_text("Speed:velocity").unwrap_err();
        assert!(matches!(err, ConfigError::UnknownTypeToken { token, .. } if token == "velocity"));
    }

    #[test]
    fn load_schema_reads_from_disk() {
        let dir = tempfile::tempdir().unwrap();
        let p = write_schema(dir.path(), "envt_params.in", "Speed:real\n# comment\nName:string\n");
        let s = load_schema(&p).unwrap();
        assert_eq!(s.entries.len(), 2);
    }

    #[test]
    fn msg_gen_parameter_parses_as_pair() {
        let (gp, _) = parse_sample();
        assert_eq!(gp.msg_gen_rate, (2, 1.0));
    }

    #[test]
    fn stationary_group_parses() {
        let (_, groups) = parse_sample();
        let depot = &groups[1];
        assert!(!depot.mobile);
        assert_eq!(depot.movement_model, MovementModel::Stationary);
        assert_eq!(depot.protocol, ProtocolKind::Depot);
        assert_eq!(depot.speed_kmh, 0.0);
    }

    #[test]
    fn relative_paths_resolve_against_config_dir() {
        let (gp, _) = parse_sample();
        assert_eq!(gp.map_path, Path::new("/tmp/scenario/maps/town.osm"));
        assert_eq!(gp.report_directory, Path::new("/tmp/scenario/logs"));
    }

    #[test]
    fn undefined_path_type_in_group_rejected() {
        let text = sample_config_text().replace("Paths = [2, 3]", "Paths = [9]");
        let err = load_config_text(
            &text,
            Path::new("."),
            &builtin_general_schema(),
            &builtin_group_schema(),
        )
        .unwrap_err();
        assert!(
            matches!(err, ConfigError::PathTypeUndefined { group_id, value } if group_id == "G1" && value == 9)
        );
    }

    #[test]
    fn unknown_key_rejected() {
        let text = format!("{}\nFrobnicate = yes\n", sample_config_text());
        let err = load_config_text(
            &text,
            Path::new("."),
            &builtin_general_schema(),
            &builtin_group_schema(),
        )
        .unwrap_err();
        assert!(matches!(err, ConfigError::UnknownKey(k) if k == "Frobnicate"));
    }

    #[test]
    fn type_mismatch_reported_with_key_and_raw() {
        let text = sample_config_text().replace("No_of_Hosts = 3", "No_of_Hosts = many");
        let err = load_config_text(
            &text,
            Path::new("."),
            &builtin_general_schema(),
            &builtin_group_schema(),
        )
        .unwrap_err();
        assert!(
            matches!(err, ConfigError::TypeMismatch { key, raw, .. } if key == "No_of_Hosts" && raw == "many")
        );
    }

    #[test]
    fn missing_required_key_reported() {
        let text = sample_config_text().replace("Label = T\n", "");
        let err = load_config_text(
            &text,
            Path::new("."),
            &builtin_general_schema(),
            &builtin_group_schema(),
        )
        .unwrap_err();
        assert!(matches!(err, ConfigError::MissingRequired(k) if k == "Label"));
    }

    #[test]
    fn buffer_size_suffixes_parse_to_bytes() {
        assert_eq!(parse_buffer_size("Buffer_Size", "500K").unwrap(), 500 * 1024);
        assert_eq!(parse_buffer_size("Buffer_Size", "10M").unwrap(), 10 * 1024 * 1024);
        assert_eq!(parse_buffer_size("Buffer_Size", "1G").unwrap(), 1 << 30);
        assert_eq!(parse_buffer_size("Buffer_Size", "4096").unwrap(), 4096);
    }

    #[test]
    fn valid_scenario_yields_empty_report() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::create_dir(dir.path().join("maps")).unwrap();
        std::fs::write(dir.path().join("maps/town.osm"), "<osm></osm>").unwrap();
        let (gp, groups) = load_config_text(
            &sample_config_text(),
            dir.path(),
            &builtin_general_schema(),
            &builtin_group_schema(),
        )
        .unwrap();
        assert!(validate_scenario(&gp, &groups).is_empty());
    }

    #[test]
    fn mobile_group_with_zero_speed_is_a_violation() {
        let (gp, mut groups) = parse_sample();
        groups[0].speed_kmh = 0.0;
        let report = validate_scenario(&gp, &groups);
        assert!(report.iter().any(|v| v.message.contains("speed_kmh must be > 0")));
    }

    #[test]
    fn group_count_mismatch_is_a_violation() {
        let (mut gp, groups) = parse_sample();
        gp.num_host_groups = 3;
        let report = validate_scenario(&gp, &groups);
        assert!(report.iter().any(|v| v.subject == "No_of_Hosts_Groups"));
    }

    #[test]
    fn duplicate_path_type_values_are_a_violation() {
        let (mut gp, groups) = parse_sample();
        gp.path_types.insert("alley".into(), 3);
        let report = validate_scenario(&gp, &groups);
        assert!(report.iter().any(|v| v.subject == "Path_Types"));
    }

    #[test]
    fn round_trip_preserves_values() {
        let (gp, groups) = parse_sample();
        let text = to_config_text(&gp, &groups);
        // Paths inside the rendered text are already absolute.
        let (gp2, groups2) = load_config_text(
            &text,
            Path::new("/elsewhere"),
            &builtin_general_schema(),
            &builtin_group_schema(),
        )
        .unwrap();
        assert_eq!(gp, gp2);
        assert_eq!(groups, groups2);
    }

    #[test]
    fn parsing_is_order_insensitive_within_a_block() {
        let base = parse_sample();
        let text = sample_config_text();
        let mut lines: Vec<&str> = text.lines().collect();
        // Swap two lines inside the first group block (after its Group_ID).
        let g1 = lines.iter().position(|l| l.starts_with("Group_ID = G1")).unwrap();
        lines.swap(g1 + 1, g1 + 5);
        let permuted = lines.join("\n");
        let got = load_config_text(
            &permuted,
            Path::new("/tmp/scenario"),
            &builtin_general_schema(),
            &builtin_group_schema(),
        )
        .unwrap();
        assert_eq!(base, got);
    }

    #[test]
    fn long_form_model_and_protocol_names_accepted() {
        let text = sample_config_text()
            .replace("Movement = PathType\n", "Movement = PathTypeMovement\n")
            .replace("Protocol = Epidemic\n", "Protocol = EpidemicHandoff\n");
        let (_, groups) = load_config_text(
            &text,
            Path::new("."),
            &builtin_general_schema(),
            &builtin_group_schema(),
        )
        .unwrap();
        assert_eq!(groups[0].movement_model, MovementModel::PathType);
        assert_eq!(groups[0].protocol, ProtocolKind::Epidemic);
    }
}
