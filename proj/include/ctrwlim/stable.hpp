#pragma once

#include <cstddef>
#include <vector>

#include "ctrwlim/rng.hpp"

namespace ctrwlim {

enum class Skew { symmetric, positive };

/// Strictly stable law. Symmetric laws have characteristic function
/// exp(-scale^alpha |k|^alpha); positive (totally skewed, alpha < 1) laws have
/// Laplace transform exp(-scale^alpha s^alpha).
struct StableLaw {
  double alpha = 2.0;
  double scale = 1.0;
  Skew skew = Skew::symmetric;

  void validate() const;
};

/// Waiting-time law with survival P(J > t) = E_beta(-(t/scale)^beta).
struct MittagLefflerLaw {
  double beta = 1.0;
  double scale = 1.0;

  void validate() const;
};

// Single draws with unit scale. Callers validate parameters.
double draw_symmetric_stable(double alpha, Engine& engine);
double draw_positive_stable(double alpha, Engine& engine);
double draw_mittag_leffler(double beta, Engine& engine);

std::vector<double> sample_symmetric_stable(const StableLaw& law, SeedSpec seed,
                                            std::size_t count);
std::vector<double> sample_subordinator_increment(const StableLaw& law, SeedSpec seed,
                                                  std::size_t count);
std::vector<double> sample_ml_waiting_time(const MittagLefflerLaw& law, SeedSpec seed,
                                           std::size_t count);

}  // namespace ctrwlim
