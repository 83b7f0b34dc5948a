#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace bdes {

struct ArmSpec {
  double r = 0.0;  // in-the-vacuum reward
  double b = 0.0;  // end state
};

enum class NoiseKind { gaussian, uniform };

// Perturbs only the sampling probability; sigma = 0 is a no-op that draws nothing.
struct NoiseModel {
  double sigma = 0.0;
  NoiseKind kind = NoiseKind::gaussian;
  bool clip = true;
};

struct Instance {
  std::vector<ArmSpec> arms;
  double lambda = 0.0;
  int horizon = 1;
  double q0 = 1.0;
  std::optional<NoiseModel> noise;

  std::size_t num_arms() const { return arms.size(); }
  // Throws DomainError on any violated invariant.
  void validate() const;
};

Instance instance_from_json(const nlohmann::json& j);
nlohmann::json instance_to_json(const Instance& inst);
Instance load_instance(const std::string& path);

const char* noise_kind_name(NoiseKind k);

}  // namespace bdes
