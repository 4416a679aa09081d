#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kio/micronet/training.hpp"

namespace kio {

struct GradcheckEntry {
  std::string tensor;
  std::size_t index = 0;
  double analytic = 0.0;
  double numeric = 0.0;
  double rel_error = 0.0;
  bool kink = false;  // one-sided differences disagree, so the loss is not smooth here
};

struct GradcheckReport {
  std::vector<GradcheckEntry> entries;
  double max_rel_error = 0.0;  // over smooth entries
  int kinks = 0;
};

/// |a − n| / max(|a|, |n|, floor).
double relative_error(double analytic, double numeric, double floor = 1e-6);

/// Central differences of the full frame loss against backprop, for `per_tensor` randomly
/// chosen entries of every parameter tensor.
GradcheckReport gradcheck_policy(nn::PolicyNet& net, const nn::TrainingSample& sample,
                                 const nn::TrainingContext& ctx, int per_tensor, std::uint64_t seed,
                                 double step = 1e-5);

}  // namespace kio
