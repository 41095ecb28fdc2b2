//! Image traces, box counting, the Farey ball cover and its content sums,
//! and the cone test for tangents.

mod boxcount;
mod cone;
mod content;
mod cover;
mod polyline;

pub use boxcount::{box_count, box_count_seeded, BoxCount};
pub use cone::{cone_ratio_at, cone_tangent_ratio, Cone, ConeScan, CONE_FLOOR};
pub use content::{
    content_partial_sum, content_totient_sum, jaffard_dim, refined_cover_exponent, spectrum_bound, ContentSum,
    RefinedCover, SpectrumValue, SumVerdict,
};
pub use cover::{build_cover, verify_cover, CoverBall, CoverBallSet, CoverageEntry, CoverageReport};
pub use polyline::{diameter, h1_content, trace_image, trace_image_with, Polyline};
