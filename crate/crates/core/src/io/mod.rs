//! Text formats: state files, cycle notation and SVG diagrams.

mod notation;
mod state_file;
mod svg;

pub use notation::{format_labels, parse_labels, parse_monomial, parse_perm_tuple};
pub use state_file::{StateFile, SCHEMA_VERSION};
pub use svg::{render_svg, BOX_SIZE, ROW_PITCH, SVG_MAX_BOXES, SVG_MAX_ROWS};
