#include "pecfdtd/common.hpp"

#include <omp.h>

namespace pecfdtd {

void set_thread_count(int n) { omp_set_num_threads(n > 0 ? n : 1); }

int thread_count() { return omp_get_max_threads(); }

}  // namespace pecfdtd
