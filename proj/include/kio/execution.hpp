#pragma once

namespace kio {

/// Kernels with both variants produce bit-identical results; Serial is the reference.
enum class Execution { Serial, Parallel };

}  // namespace kio
