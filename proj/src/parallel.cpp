#include "mcover/parallel.hpp"

#include <omp.h>

namespace mcover {

int max_threads() { return omp_get_max_threads(); }

}  // namespace mcover
