#include "mihpo/param_space.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mihpo/rng.hpp"

namespace mihpo {

ParamSpace::ParamSpace(std::vector<ParamSpec> specs) : specs_(std::move(specs)) {
  for (const ParamSpec& p : specs_) {
    if (!(p.lower < p.upper)) {
      throw std::invalid_argument("ParamSpace: bounds of '" + p.name + "' must satisfy lower < upper");
    }
    if (!(p.std_dev > 0.0)) {
      throw std::invalid_argument("ParamSpace: std_dev of '" + p.name + "' must be positive");
    }
    if (p.mean < p.lower || p.mean > p.upper) {
      throw std::invalid_argument("ParamSpace: mean of '" + p.name + "' must lie within its bounds");
    }
  }
}

Eigen::VectorXd ParamSpace::means() const {
  Eigen::VectorXd v(size());
  for (Eigen::Index i = 0; i < size(); ++i) v[i] = specs_[static_cast<size_t>(i)].mean;
  return v;
}

Eigen::VectorXd ParamSpace::std_devs() const {
  Eigen::VectorXd v(size());
  for (Eigen::Index i = 0; i < size(); ++i) v[i] = specs_[static_cast<size_t>(i)].std_dev;
  return v;
}

Eigen::VectorXd ParamSpace::lower_bounds() const {
  Eigen::VectorXd v(size());
  for (Eigen::Index i = 0; i < size(); ++i) v[i] = specs_[static_cast<size_t>(i)].lower;
  return v;
}

Eigen::VectorXd ParamSpace::upper_bounds() const {
  Eigen::VectorXd v(size());
  for (Eigen::Index i = 0; i < size(); ++i) v[i] = specs_[static_cast<size_t>(i)].upper;
  return v;
}

void ParamSpace::clamp(Eigen::Ref<Eigen::VectorXd> values) const {
  for (Eigen::Index i = 0; i < size(); ++i) {
    const ParamSpec& p = specs_[static_cast<size_t>(i)];
    values[i] = std::clamp(values[i], p.lower, p.upper);
  }
}

bool ParamSpace::contains(const Eigen::Ref<const Eigen::VectorXd>& values) const {
  if (values.size() != size()) return false;
  for (Eigen::Index i = 0; i < size(); ++i) {
    const ParamSpec& p = specs_[static_cast<size_t>(i)];
    if (values[i] < p.lower || values[i] > p.upper) return false;
  }
  return true;
}

std::vector<ParamConfig> sample_configs(const ParamSpace& space, std::int64_t n,
                                        std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sample_configs: n must be >= 1");
  std::vector<ParamConfig> configs(static_cast<size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) {
    RngStream rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
    Eigen::VectorXd values(space.size());
    for (Eigen::Index d = 0; d < space.size(); ++d) {
      const ParamSpec& p = space.spec(d);
      values[d] = p.mean + p.std_dev * rng.normal();
    }
    space.clamp(values);
    configs[static_cast<size_t>(i)].values = std::move(values);
  }
  return configs;
}

}  // namespace mihpo
