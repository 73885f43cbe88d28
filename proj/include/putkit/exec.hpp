#pragma once

namespace putkit {

/// Execution mode for the data-parallel kernels. serial is the reference
/// implementation; parallel uses OpenMP when compiled in and must produce
/// bit-identical results.
enum class Exec { serial, parallel };

}  // namespace putkit
