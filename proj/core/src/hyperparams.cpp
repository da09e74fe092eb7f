#include "bcm/hyperparams.hpp"

#include <cmath>
#include <sstream>

#include "bcm/error.hpp"

namespace bcm {

void Hyperparams::validate() const {
  auto finite = [](double x) { return std::isfinite(x); };
  if (clusters < 1) throw ConfigError("clusters (S) must be >= 1");
  if (!finite(alpha) || alpha <= 0.0) throw ConfigError("alpha must be > 0");
  if (!finite(q) || q <= 0.0 || q >= 1.0) throw ConfigError("q must lie in (0, 1)");
  if (!finite(lambda) || lambda <= 0.0) throw ConfigError("lambda must be > 0");
  if (!finite(c) || c < 0.0) throw ConfigError("c must be >= 0");
  if (similarity.kind == Similarity::Kind::thresholded && (!finite(similarity.epsilon) || similarity.epsilon < 0.0))
    throw ConfigError("similarity threshold epsilon must be >= 0");
}

std::string to_string(const Hyperparams& h) {
  std::ostringstream out;
  out << "S=" << h.clusters << " alpha=" << h.alpha << " q=" << h.q << " lambda=" << h.lambda << " c=" << h.c;
  if (h.similarity.kind == Similarity::Kind::thresholded) out << " epsilon=" << h.similarity.epsilon;
  return out.str();
}

}  // namespace bcm
