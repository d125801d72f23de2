//! Finite layers of branched Z_p^d towers of graphs: derived-graph
//! construction from voltage and inertia data, Jacobians and spanning-tree
//! counts, characteristic elements over Z_p[[T_1..T_d]], growth-law checks,
//! and planar dual towers.

pub mod corpus;
pub mod graph;
pub mod growth;
pub mod intlinalg;
pub mod iwasawa;
pub mod jacobian;
pub mod planar;
pub mod report;
pub mod specfile;
pub mod tower;
