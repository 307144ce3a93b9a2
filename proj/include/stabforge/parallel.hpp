#pragma once

namespace stabforge {

/// Worker count for OpenMP regions: the runtime default, capped by the
/// STABFORGE_THREADS environment variable when it holds a positive integer.
int worker_count();

}  // namespace stabforge
