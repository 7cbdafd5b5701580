//! Orbits of birational maps in exact and high-precision float arithmetic,
//! global periodicity, periodic points, leaf itineraries, escape scans and
//! the closed-form singular solutions of Somos-5.

mod closed_form;
mod fixed_points;
mod itinerary;
mod orbit;
mod periodicity;
mod scan;

pub use closed_form::{plastic_number, verify_closed_form, ClosedForm, ClosedFormReport, Family};
pub use fixed_points::{find_periodic_points, PeriodicPoint, SearchBox};
pub use itinerary::{leaf_itinerary, LabelSummary, LeafItinerary};
pub use orbit::{iterate_orbit, log10_distance, render_point, render_points, Mode, Orbit, OrbitScalar, DEFAULT_DIGITS};
pub use periodicity::{
    detect_global_periodicity, first_integral_check, Certificate, PeriodKind, PeriodReport, DEFAULT_GLOBAL_P_MAX,
    SCREEN_SAMPLES,
};
pub use scan::{no_periodic_points_scan, SampleScan, ScanReport, DEFAULT_SCAN_P_MAX, GROWTH_STREAK};
