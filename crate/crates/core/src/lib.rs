//! Exact computations on quivers, cluster seeds, and belt dynamics of box
//! products of bipartite diagrams.
//!
//! All arithmetic is over arbitrary-precision rationals. The main entry
//! points are [`Quiver`]/[`Seed`] for mutation, [`product_of`] for box
//! products of Dynkin diagrams, [`BeltState`] for the bipartite belt,
//! [`minimal_order`] for linear recurrence detection, [`classify`] for
//! labelling certificates, and [`annulus`] for annulus Plücker seeds.

pub mod annulus;
pub mod belt;
pub mod dynkin;
pub mod error;
pub mod io;
pub mod labelling;
pub mod linalg;
pub mod quiver;
pub mod rational;
pub mod recurrence;
pub mod simplex;

pub use belt::{check_coloring, infer_coloring, is_recurrent, random_values, BeltState, Color, Trace};
pub use dynkin::{belt_coloring, box_product, build_diagram, coxeter_number, product_of, BipartiteGraph, DynkinSpec, Family, ProductInfo};
pub use error::{Error, Result};
pub use labelling::{classify, Classification, LabellingProblem, LabellingResult, Tightness};
pub use quiver::{Quiver, Seed};
pub use rational::{format_rational, int, parse_rational, ratio, Rational};
pub use recurrence::{combine, minimal_order, CharPoly, CombineMode, RationalSequence, RecurrenceReport};
