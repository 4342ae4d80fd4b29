#pragma once

#include <cmath>
#include <cstddef>
#include <span>

namespace sis {

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;  // standard error of the mean; 0 for fewer than two samples
};

inline MeanSe mean_se(std::span<const double> xs) {
  MeanSe r;
  if (xs.empty()) return r;
  double sum = 0.0;
  for (double x : xs) sum += x;
  r.mean = sum / static_cast<double>(xs.size());
  if (xs.size() < 2) return r;
  double ss = 0.0;
  for (double x : xs) ss += (x - r.mean) * (x - r.mean);
  r.se = std::sqrt(ss / static_cast<double>(xs.size() - 1) / static_cast<double>(xs.size()));
  return r;
}

}  // namespace sis
