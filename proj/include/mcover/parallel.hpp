#pragma once

#include <cstddef>

namespace mcover {

// Number of fixed-size chunks used by parallel reductions. Results are summed chunk by chunk
// in index order, so they do not depend on the OpenMP thread count.
inline constexpr std::size_t kReductionChunks = 64;

int max_threads();

}  // namespace mcover
