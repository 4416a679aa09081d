#include "kio/gradcheck.hpp"

#include <algorithm>
#include <cmath>

#include "kio/rng.hpp"

namespace kio {

namespace {

// One-sided slopes further apart than this (relative) mark a kink. A kink inside the stencil
// shifts the central difference by at most half that gap, so this stays below the 1e-3 bar.
// Thousands of rectifiers sit in the graph; a looser bound lets single flips through.
constexpr double kKinkTolerance = 5e-4;

}  // namespace

double relative_error(double analytic, double numeric, double floor) {
  return std::abs(analytic - numeric) / std::max({std::abs(analytic), std::abs(numeric), floor});
}

GradcheckReport gradcheck_policy(nn::PolicyNet& net, const nn::TrainingSample& sample,
                                 const nn::TrainingContext& ctx, int per_tensor, std::uint64_t seed,
                                 double step) {
  net.zero_grad();
  const double base = nn::frame_loss(net, sample, ctx, 1.0).total;
  // Roundoff in a difference quotient of f scales with |f|; tiny gradients are judged against it.
  const double floor = 1e-6 * std::max(1.0, std::abs(base));
  GradcheckReport report;
  Rng rng(seed);
  for (const auto& p : net.parameters()) {
    nn::Tensor& t = *p.tensor;
    const std::vector<double> grad = t.grad();
    for (int n = 0; n < per_tensor; ++n) {
      const std::size_t i = static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(t.size()) - 1));
      const double saved = t[i];
      t[i] = saved + step;
      const double up = nn::frame_loss(net, sample, ctx, 0.0).total;
      t[i] = saved - step;
      const double down = nn::frame_loss(net, sample, ctx, 0.0).total;
      t[i] = saved;
      GradcheckEntry e;
      e.tensor = p.name;
      e.index = i;
      e.analytic = grad[i];
      e.numeric = (up - down) / (2.0 * step);
      e.rel_error = relative_error(e.analytic, e.numeric, floor);
      e.kink = relative_error((up - base) / step, (base - down) / step, floor) > kKinkTolerance;
      if (e.kink) {
        ++report.kinks;
      } else {
        report.max_rel_error = std::max(report.max_rel_error, e.rel_error);
      }
      report.entries.push_back(e);
    }
  }
  return report;
}

}  // namespace kio
