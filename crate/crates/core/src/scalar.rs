use std::fmt::{Debug, Display};

/// Float type accepted by the dense path: `f32` or `f64`.
pub trait Real:
    num_traits::Float
    + num_traits::FromPrimitive
    + nalgebra::RealField
    + Copy
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Casts an `f64` literal into this type.
    fn lit(x: f64) -> Self {
        <Self as num_traits::FromPrimitive>::from_f64(x).expect("finite literal")
    }

    /// A tolerance no tighter than the type can resolve: `max(requested, 100 eps)`.
    fn tol(requested: f64) -> Self {
        let floor = <Self as num_traits::Float>::epsilon() * Self::lit(100.0);
        let req = Self::lit(requested);
        if req > floor {
            req
        } else {
            floor
        }
    }
}

impl Real for f32 {}
impl Real for f64 {}
