//! Step scattering and mean-position jitter, each run both with and without
//! the positive-frequency restriction.

pub mod klein;
pub mod packet;
pub mod zitter;

pub use klein::{klein_step, KleinGridOptions, KleinRegime, KleinResult};
pub use packet::{make_packet, PacketContent, PacketParams};
pub use zitter::{zitterbewegung_compare, PacketKind, ZitterParams, ZitterResult};
