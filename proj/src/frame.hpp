// Local splitting frame with its dual covectors (internal).
#pragma once

#include "phlab/cocycle.hpp"

namespace phlab::detail {

struct Frame {
  Vec eu, ec, es;  // ec / es empty when absent
  Mat basis;       // columns: eu, then ec, then es (present ones)
  Mat dual;        // basis^{-1}; row 0 reads the unstable coordinate
  int row_c = -1, row_s = -1;
};

Frame local_frame(const SystemSpec& sys, const OrbitHistory& h, const CocycleOptions& opts);

}  // namespace phlab::detail
