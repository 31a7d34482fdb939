//! Exact-arithmetic tools for amenability and inner amenability of discrete
//! transformation groups.
//!
//! Groups, measures and nets carry exact rationals throughout. The only
//! floating-point surface is the square-root net and the kernel checks in
//! [`inner`].

pub mod action;
pub mod error;
pub mod foelner;
pub mod group;
pub mod inner;
pub mod measure;
pub mod rational;
pub mod semidirect;

pub use action::{Point, Ray, Space, TransformationGroup, Window};
pub use error::{Error, Result};
pub use group::{Element, Group};
pub use measure::{FinFn, ProbMeasure};
pub use rational::Rational;
