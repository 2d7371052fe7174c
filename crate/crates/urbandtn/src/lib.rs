//! A deterministic, headless simulator for urban delay-tolerant networks.
//!
//! Typed agents move over an OpenStreetMap-derived road graph under
//! configurable mobility models, exchange messages through store-and-forward
//! handoff protocols, and leave reproducible contact/message/event logs plus
//! delivery metrics. Identical scenario and seed always produce a
//! byte-identical report tree.
//!
//! The pieces, bottom to top:
//!
//! * [`config`]: `sim.config` parsing with schema-file extensibility.
//! * [`map`]: OSM XML ingestion and intersection normalization.
//! * [`geo`]: haversine distances, projection, path interpolation.
//! * [`graph`]: the road multigraph with canonical neighbor ordering.
//! * [`mobility`]: the six movement models.
//! * [`routing`]: neighbor discovery and the four handoff protocols.
//! * [`events`]: timed data generation at stationary nodes.
//! * [`report`]: the log-file tree and run summaries.
//! * [`engine`]: per-tick loop and multi-run orchestration.
//! * [`cli`]: the `urbandtn` binary's front end.
//!
//! See the crate's `examples/` directory for one runnable walkthrough per
//! capability, starting with `full_run`.

pub mod cli;
pub mod config;
pub mod engine;
pub mod events;
pub mod geo;
pub mod graph;
pub mod map;
pub mod mobility;
pub mod report;
pub mod routing;
