#ifndef ZK_ZK_HPP
#define ZK_ZK_HPP

#include "zk/grid.hpp"
#include "zk/fft.hpp"
#include "zk/wide_int.hpp"
#include "zk/spectral.hpp"
#include "zk/csv.hpp"
#include "zk/stats.hpp"
#include "zk/solver.hpp"
#include "zk/resonance.hpp"
#include "zk/approx_solution.hpp"
#include "zk/illposedness.hpp"
#include "zk/strichartz.hpp"
#include "zk/experiment.hpp"

#endif
