//! Legendrian contact homology over F₂: Chekanov-Eliashberg DGAs, their
//! linearizations and filtered capacities, and the resulting length bounds
//! for Lagrangian cobordisms, together with the matching constructive upper
//! bounds.

pub mod algebra;
pub mod augment;
pub mod bound;
pub mod cobordism;
pub mod cohomology;
pub mod construction;
pub mod diagram;
pub mod f2;
pub mod fixtures;
pub mod numeric;
pub mod par;
pub mod report;
