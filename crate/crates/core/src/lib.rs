//! Exact calculus for rank-2 instanton-type bundles on the index-one Fano
//! threefold `F`, the product of a projective line with the one-point
//! blow-up of the projective plane.
//!
//! Everything is computed over the integers or exact rationals; there is no
//! floating point anywhere in the crate. The modules are:
//!
//! * [`chow`] — intersection theory on the Chow ring of `F`, slopes and the
//!   stability half-space.
//! * [`cohomology`] — closed-form cohomology of line bundles on the line,
//!   the surface and `F`, Riemann--Roch and Serre duality.
//! * [`cox`] — a brute-force monomial oracle for section spaces in Cox
//!   coordinates, with exact multiplication matrices.
//! * [`charges`] — the charge calculus: admissibility, degrees, minimality
//!   enumeration, moduli dimensions and the monad dimension table.
//! * [`monad`] — monad shapes attached to a charge, K-classes, Chern data
//!   and twisted Euler characteristics.
//! * [`exceptional`] — machine verification of the two length-8 collections
//!   of line bundles and their right-dual pairing pattern.
//! * [`kernel`] — explicit minimal instantons presented as kernels of
//!   concrete surjections, with certified stability, aCM, earnestness,
//!   weak-Ulrich and line-splitting checks.
//! * [`suite`] — the executable acceptance checklist shared by the test
//!   suite and the command-line frontend.
//!
//! The sign-storage convention for classes is fixed once in
//! [`chow::SIGN_CONVENTION`] and repeated in every report header.

pub mod charges;
pub mod chow;
pub mod cohomology;
pub mod cox;
pub mod error;
pub mod exceptional;
pub mod kernel;
pub mod linalg;
pub mod monad;
pub mod suite;

pub use error::Error;

#[cfg(test)]
mod concurrency_contract {
    // every public value type must be shareable across threads: grid sweeps
    // and twist computations are run concurrently by the frontend
    fn assert_send_sync<T: Send + Sync>() {}

    #[test]
    fn public_types_are_send_and_sync() {
        assert_send_sync::<crate::chow::DivClass>();
        assert_send_sync::<crate::chow::CurveClass>();
        assert_send_sync::<crate::cohomology::CohomTable>();
        assert_send_sync::<crate::cox::SectionVector>();
        assert_send_sync::<crate::cox::CoxPoint>();
        assert_send_sync::<crate::linalg::SparseCols>();
        assert_send_sync::<crate::charges::InstantonCharge>();
        assert_send_sync::<crate::charges::Table1>();
        assert_send_sync::<crate::monad::MonadShape>();
        assert_send_sync::<crate::monad::KClass>();
        assert_send_sync::<crate::kernel::KernelBundlePresentation>();
        assert_send_sync::<crate::kernel::TwistCohomResult>();
        assert_send_sync::<crate::Error>();
    }
}
