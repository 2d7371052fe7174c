//! OSM XML ingestion: node/way extraction, intersection splitting, and
//! per-way lengths.
//!
//! The input subset is `<node id lat lon>` plus `<way id>` elements carrying
//! `<nd ref>` and `<tag k v>` children. A way's road class is the value of
//! its `k="highway"` tag, mapped to an integer through the scenario's
//! `Path_Types`; ways with no recognized class are dropped and counted.
//!
//! [`normalize_map`] turns the raw tables into a junction-segmented map:
//! every node shared by two or more ways becomes a split point, and each way
//! is replaced by the segments between consecutive split points. Ways that
//! need no split keep their id; segments of a split way get
//! `parent_id * 1000 + ordinal` so the operation is deterministic and
//! idempotent.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use quick_xml::events::Event;
use quick_xml::Reader;
use thiserror::Error;

use crate::geo::{geodesic_distance, Bounds, GeoPoint};

#[derive(Debug, Error)]
pub enum MapError {
    #[error("xml syntax error at line {line}: {detail}")]
    XmlSyntax { line: usize, detail: String },
    #[error("way {way_id} references missing node {node_id}")]
    DanglingNodeRef { way_id: i64, node_id: i64 },
    #[error("io error reading {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

/// A geographic point parsed from a `<node>` element.
#[derive(Debug, Clone, PartialEq)]
pub struct GeoNode {
    pub node_id: i64,
    pub lat: f64,
    pub lon: f64,
    /// Optional (y, x) in projected units; filled by [`apply_projection`].
    pub projected: Option<(f64, f64)>,
    /// Ids of the ways whose node sequence contains this node.
    pub member_ways: Vec<i64>,
}

impl GeoNode {
    pub fn point(&self) -> GeoPoint {
        GeoPoint::new(self.lat, self.lon)
    }
}

/// A road parsed from a `<way>` element (or a segment of one after
/// normalization).
#[derive(Debug, Clone, PartialEq)]
pub struct Way {
    pub way_id: i64,
    pub node_sequence: Vec<i64>,
    pub way_type: i64,
    pub length_km: f64,
}

/// Node and way tables plus the enclosing geographic bounds.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct MapTables {
    pub nodes: BTreeMap<i64, GeoNode>,
    pub ways: BTreeMap<i64, Way>,
    pub bounds: Option<Bounds>,
}

impl MapTables {
    pub fn total_length_km(&self) -> f64 {
        self.ways.values().map(|w| w.length_km).sum()
    }
}

/// What [`parse_osm`] produced: the tables plus drop counters.
#[derive(Debug)]
pub struct OsmParseResult {
    pub tables: MapTables,
    /// Ways dropped because their road-class tag maps to no Path_Types entry
    /// (or they carry no road tag at all).
    pub dropped_no_class: usize,
    /// Ways dropped because they reference fewer than two nodes.
    pub dropped_short: usize,
}

/// Outcome of extracting one `<way>` element.
#[derive(Debug, PartialEq)]
pub enum TraverseOutcome {
    Way { node_sequence: Vec<i64>, way_type: i64 },
    NoRoadClass,
    TooShort,
}

struct RawWay {
    way_id: i64,
    refs: Vec<i64>,
    tags: Vec<(String, String)>,
}

fn line_of(text: &str, byte_pos: usize) -> usize {
    text[..byte_pos.min(text.len())].matches('\n').count() + 1
}

fn attr_map(
    e: &quick_xml::events::BytesStart<'_>,
    text: &str,
    pos: usize,
) -> Result<BTreeMap<String, String>, MapError> {
    let mut out = BTreeMap::new();
    for attr in e.attributes() {
        let attr = attr.map_err(|err| MapError::XmlSyntax {
            line: line_of(text, pos),
            detail: err.to_string(),
        })?;
        let key = String::from_utf8_lossy(attr.key.as_ref()).to_string();
        let value = attr
            .unescape_value()
            .map_err(|err| MapError::XmlSyntax {
                line: line_of(text, pos),
                detail: err.to_string(),
            })?
            .to_string();
        out.insert(key, value);
    }
    Ok(out)
}

fn required<T: std::str::FromStr>(
    attrs: &BTreeMap<String, String>,
    key: &str,
    text: &str,
    pos: usize,
) -> Result<T, MapError> {
    attrs
        .get(key)
        .and_then(|v| v.parse::<T>().ok())
        .ok_or_else(|| MapError::XmlSyntax {
            line: line_of(text, pos),
            detail: format!("missing or invalid `{key}` attribute"),
        })
}

/// Extracts one raw way: resolves its `<nd ref>` sequence and maps its road
/// class through `path_types`.
pub fn traverse_way(
    way_id: i64,
    refs: &[i64],
    tags: &[(String, String)],
    nodes: &BTreeMap<i64, GeoNode>,
    path_types: &BTreeMap<String, i64>,
) -> Result<TraverseOutcome, MapError> {
    for &r in refs {
        if !nodes.contains_key(&r) {
            return Err(MapError::DanglingNodeRef { way_id, node_id: r });
        }
    }
    if refs.len() < 2 {
        return Ok(TraverseOutcome::TooShort);
    }
    let class = tags
        .iter()
        .find(|(k, _)| k == "highway")
        .and_then(|(_, v)| path_types.get(v.as_str()).copied());
    match class {
        Some(way_type) => Ok(TraverseOutcome::Way {
            node_sequence: refs.to_vec(),
            way_type,
        }),
        None => Ok(TraverseOutcome::NoRoadClass),
    }
}

/// Sum of geodesic distances over consecutive node pairs, in kilometers.
pub fn compute_way_length(node_sequence: &[i64], nodes: &BTreeMap<i64, GeoNode>) -> f64 {
    node_sequence
        .windows(2)
        .map(|w| geodesic_distance(nodes[&w[0]].point(), nodes[&w[1]].point()))
        .sum()
}

/// Parses OSM XML text into raw (un-normalized) map tables.
pub fn parse_osm_text(
    text: &str,
    path_types: &BTreeMap<String, i64>,
) -> Result<OsmParseResult, MapError> {
    let mut reader = Reader::from_str(text);
    reader.config_mut().trim_text(true);

    let mut nodes: BTreeMap<i64, GeoNode> = BTreeMap::new();
    let mut raw_ways: Vec<RawWay> = Vec::new();
    let mut current_way: Option<RawWay> = None;

    loop {
        let pos = reader.buffer_position() as usize;
        let event = reader.read_event().map_err(|err| MapError::XmlSyntax {
            line: line_of(text, reader.buffer_position() as usize),
            detail: err.to_string(),
        })?;
        match event {
            Event::Start(ref e) | Event::Empty(ref e) => {
                let self_closing = matches!(event, Event::Empty(_));
                match e.name().as_ref() {
                    b"node" => {
                        let attrs = attr_map(e, text, pos)?;
                        let node_id: i64 = required(&attrs, "id", text, pos)?;
                        let lat: f64 = required(&attrs, "lat", text, pos)?;
                        let lon: f64 = required(&attrs, "lon", text, pos)?;
                        nodes.insert(
                            node_id,
                            GeoNode { node_id, lat, lon, projected: None, member_ways: Vec::new() },
                        );
                    }
                    b"way" => {
                        let attrs = attr_map(e, text, pos)?;
                        let way_id: i64 = required(&attrs, "id", text, pos)?;
                        let raw = RawWay { way_id, refs: Vec::new(), tags: Vec::new() };
                        if self_closing {
                            raw_ways.push(raw);
                        } else {
                            current_way = Some(raw);
                        }
                    }
                    b"nd" => {
                        if let Some(way) = current_way.as_mut() {
                            let attrs = attr_map(e, text, pos)?;
                            let r: i64 = required(&attrs, "ref", text, pos)?;
                            way.refs.push(r);
                        }
                    }
                    b"tag" => {
                        if let Some(way) = current_way.as_mut() {
                            let attrs = attr_map(e, text, pos)?;
                            let k = attrs.get("k").cloned().unwrap_or_default();
                            let v = attrs.get("v").cloned().unwrap_or_default();
                            way.tags.push((k, v));
                        }
                    }
                    _ => {}
                }
            }
            Event::End(e) => {
                if e.name().as_ref() == b"way" {
                    if let Some(way) = current_way.take() {
                        raw_ways.push(way);
                    }
                }
            }
            Event::Eof => break,
            _ => {}
        }
    }

    let mut tables = MapTables { nodes, ways: BTreeMap::new(), bounds: None };
    let mut dropped_no_class = 0;
    let mut dropped_short = 0;

    for raw in raw_ways {
        match traverse_way(raw.way_id, &raw.refs, &raw.tags, &tables.nodes, path_types)? {
            TraverseOutcome::Way { node_sequence, way_type } => {
                let length_km = compute_way_length(&node_sequence, &tables.nodes);
                tables
                    .ways
                    .insert(raw.way_id, Way { way_id: raw.way_id, node_sequence, way_type, length_km });
            }
            TraverseOutcome::NoRoadClass => dropped_no_class += 1,
            TraverseOutcome::TooShort => dropped_short += 1,
        }
    }

    rebuild_member_ways(&mut tables);
    tables.bounds = compute_bounds(&tables);

    Ok(OsmParseResult { tables, dropped_no_class, dropped_short })
}

/// Parses an `.osm` file from disk.
pub fn parse_osm(
    osm_file: &Path,
    path_types: &BTreeMap<String, i64>,
) -> Result<OsmParseResult, MapError> {
    let text = std::fs::read_to_string(osm_file).map_err(|source| MapError::Io {
        path: osm_file.to_path_buf(),
        source,
    })?;
    parse_osm_text(&text, path_types)
}

fn compute_bounds(tables: &MapTables) -> Option<Bounds> {
    let mut iter = tables.nodes.values();
    let first = iter.next()?;
    let mut b = Bounds {
        min_lat: first.lat,
        min_lon: first.lon,
        max_lat: first.lat,
        max_lon: first.lon,
    };
    for n in iter {
        b.min_lat = b.min_lat.min(n.lat);
        b.min_lon = b.min_lon.min(n.lon);
        b.max_lat = b.max_lat.max(n.lat);
        b.max_lon = b.max_lon.max(n.lon);
    }
    Some(b)
}

fn rebuild_member_ways(tables: &mut MapTables) {
    for node in tables.nodes.values_mut() {
        node.member_ways.clear();
    }
    for way in tables.ways.values() {
        let mut seen = BTreeSet::new();
        for &n in &way.node_sequence {
            if seen.insert(n) {
                if let Some(node) = tables.nodes.get_mut(&n) {
                    node.member_ways.push(way.way_id);
                }
            }
        }
    }
}

/// Splits every way at its interior junctions (nodes shared with another
/// way). Pure: the input tables are not modified.
pub fn normalize_map(tables: &MapTables) -> MapTables {
    // Junction = node contained in >= 2 distinct ways.
    let mut membership: BTreeMap<i64, BTreeSet<i64>> = BTreeMap::new();
    for way in tables.ways.values() {
        for &n in &way.node_sequence {
            membership.entry(n).or_default().insert(way.way_id);
        }
    }
    let is_junction = |n: i64| membership.get(&n).is_some_and(|s| s.len() >= 2);

    let mut out = MapTables {
        nodes: tables.nodes.clone(),
        ways: BTreeMap::new(),
        bounds: tables.bounds,
    };

    for way in tables.ways.values() {
        let seq = &way.node_sequence;
        let cuts: Vec<usize> = (1..seq.len().saturating_sub(1))
            .filter(|&i| is_junction(seq[i]))
            .collect();

        if cuts.is_empty() {
            out.ways.insert(way.way_id, way.clone());
            continue;
        }

        let mut boundaries = Vec::with_capacity(cuts.len() + 2);
        boundaries.push(0);
        boundaries.extend(cuts);
        boundaries.push(seq.len() - 1);

        for (ordinal, pair) in boundaries.windows(2).enumerate() {
            let segment: Vec<i64> = seq[pair[0]..=pair[1]].to_vec();
            let way_id = way.way_id * 1000 + ordinal as i64;
            let length_km = compute_way_length(&segment, &tables.nodes);
            out.ways.insert(
                way_id,
                Way { way_id, node_sequence: segment, way_type: way.way_type, length_km },
            );
        }
    }

    rebuild_member_ways(&mut out);
    out
}

/// Fills every node's projected (y, x) coordinate.
pub fn apply_projection(tables: &mut MapTables, spec: &crate::geo::ProjectionSpec) {
    for node in tables.nodes.values_mut() {
        node.projected = Some(crate::geo::geo_to_projected(node.point(), spec));
    }
}

/// Line-oriented dump of the way table: `id type length_km node ids...`.
pub fn export_ways_text(tables: &MapTables) -> String {
    let mut out = String::new();
    for way in tables.ways.values() {
        let ids: Vec<String> = way.node_sequence.iter().map(|n| n.to_string()).collect();
        out.push_str(&format!(
            "{} {} {} {}\n",
            way.way_id,
            way.way_type,
            way.length_km,
            ids.join(" ")
        ));
    }
    out
}
