#pragma once

#include <cstddef>

namespace ppcheck {

struct ConfusionMatrix {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;

  std::size_t total() const { return tp + fp + tn + fn; }
};

inline double accuracy(const ConfusionMatrix& m) {
  return m.total() == 0 ? 0.0
                        : static_cast<double>(m.tp + m.tn) / m.total();
}

inline double sensitivity(const ConfusionMatrix& m) {
  std::size_t denom = m.tp + m.fn;
  return denom == 0 ? 0.0 : static_cast<double>(m.tp) / denom;
}

inline double specificity(const ConfusionMatrix& m) {
  std::size_t denom = m.tn + m.fp;
  return denom == 0 ? 0.0 : static_cast<double>(m.tn) / denom;
}

inline double precision(const ConfusionMatrix& m) {
  std::size_t denom = m.tp + m.fp;
  return denom == 0 ? 0.0 : static_cast<double>(m.tp) / denom;
}

}  // namespace ppcheck
