#pragma once

#include "gslrec/experiments/config.hpp"
#include "gslrec/experiments/csv.hpp"
#include "gslrec/experiments/outputs.hpp"
#include "gslrec/experiments/runner.hpp"
#include "gslrec/experiments/svg.hpp"
#include "gslrec/generative/activation.hpp"
#include "gslrec/generative/layers.hpp"
#include "gslrec/generative/model.hpp"
#include "gslrec/generative/normal.hpp"
#include "gslrec/generative/serialize.hpp"
#include "gslrec/metrics/metrics.hpp"
#include "gslrec/nnlm/lmmse.hpp"
#include "gslrec/nnlm/score.hpp"
#include "gslrec/numerics/cholesky.hpp"
#include "gslrec/numerics/matrix.hpp"
#include "gslrec/numerics/rng.hpp"
#include "gslrec/reconstruct/adam.hpp"
#include "gslrec/reconstruct/loss.hpp"
#include "gslrec/reconstruct/solver.hpp"
#include "gslrec/sensing/sensing.hpp"
