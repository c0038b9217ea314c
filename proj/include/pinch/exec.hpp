#pragma once

namespace pinch {

/// Kernels with data-parallel loops take a policy; `serial` is the reference
/// path and must produce bit-identical results to `parallel`.
enum class ExecPolicy { serial, parallel };

}  // namespace pinch
