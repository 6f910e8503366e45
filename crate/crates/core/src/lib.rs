pub mod amplitude;
pub mod engine;
pub mod error;
pub mod geometry;
pub mod graph;
pub mod oracle;
pub mod polynomial;
pub mod quadrature;
pub mod tracer;
pub mod twofold;

pub use amplitude::Amplitude;
pub use error::{Error, Result, Stage};
pub use geometry::{ExitPoint, NoReturnData, NonOscBall, NonOscRegion, PhaseContext};
pub use graph::{DeformationGraph, Edge, EdgeKind, QuasiSDDeformation, Vertex, VertexKind};
pub use polynomial::ComplexPolynomial;
pub use quadrature::{ContourContribution, QuadratureRule, Type2Rule};
pub use tracer::{SDPath, Terminal, TraceContext, TraceParams};
pub use engine::{evaluate, Branch, Endpoint, EvaluationRequest, EvaluationResult, Parameters};
