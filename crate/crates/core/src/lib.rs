//! Exact-arithmetic integrability detection for second-order difference
//! equations `y_{j+1} + y_{j-1} = (a_j y_j² + b_j y_j + c_j) / y_j²`.

pub mod arith;
pub mod confine;
pub mod degree;
pub mod experiment;
pub mod fit;
pub mod height;
pub mod laurent;
pub mod poly;
