#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mihpo {

/// One dimension of the parameter search space: the sampling prior
/// Normal(mean, std_dev) and hard bounds [lower, upper].
struct ParamSpec {
  std::string name;
  double mean = 0.0;
  double std_dev = 1.0;
  double lower = -1.0;
  double upper = 1.0;
};

/// Box-bounded parameter space with a per-dimension Gaussian sampling prior.
class ParamSpace {
 public:
  ParamSpace() = default;
  explicit ParamSpace(std::vector<ParamSpec> specs);

  Eigen::Index size() const { return static_cast<Eigen::Index>(specs_.size()); }
  const ParamSpec& spec(Eigen::Index i) const { return specs_[static_cast<size_t>(i)]; }
  const std::vector<ParamSpec>& specs() const { return specs_; }

  Eigen::VectorXd means() const;
  Eigen::VectorXd std_devs() const;
  Eigen::VectorXd lower_bounds() const;
  Eigen::VectorXd upper_bounds() const;
  Eigen::VectorXd ranges() const { return upper_bounds() - lower_bounds(); }

  /// Clamp a point to the box, in place.
  void clamp(Eigen::Ref<Eigen::VectorXd> values) const;

  bool contains(const Eigen::Ref<const Eigen::VectorXd>& values) const;

 private:
  std::vector<ParamSpec> specs_;
};

/// A point in model-parameter space together with its last evaluated loss
/// and the optimization resource it has consumed so far. `loss` is only
/// set once a finite objective value has been observed.
struct ParamConfig {
  Eigen::VectorXd values;
  std::optional<double> loss;
  std::int64_t resource_spent = 0;

  /// Loss for ranking purposes; configs never evaluated to a finite value
  /// sort last.
  double loss_or_inf() const {
    return loss ? *loss : std::numeric_limits<double>::infinity();
  }
};

/// Draw n configurations from the space's Gaussian prior, clamped to the
/// bounds. Deterministic for a fixed seed; each config uses its own
/// derived stream so the result does not depend on evaluation order.
std::vector<ParamConfig> sample_configs(const ParamSpace& space, std::int64_t n,
                                        std::uint64_t seed);

}  // namespace mihpo
