#include "bdes/instance.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "bdes/errors.hpp"

namespace bdes {

namespace {

bool in_unit(double x) { return std::isfinite(x) && x >= 0.0 && x <= 1.0; }

double get_number(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) throw DomainError(std::string("instance: missing '") + key + "'");
  const auto& v = j.at(key);
  if (!v.is_number()) throw DomainError(std::string("instance: '") + key + "' is not a number");
  double x = v.get<double>();
  if (!std::isfinite(x)) throw DomainError(std::string("instance: '") + key + "' is not finite");
  return x;
}

}  // namespace

const char* noise_kind_name(NoiseKind k) {
  return k == NoiseKind::gaussian ? "gaussian" : "uniform";
}

void Instance::validate() const {
  if (arms.empty()) throw DomainError("instance: need at least one arm");
  if (horizon < 1) throw DomainError("instance: horizon must be >= 1");
  if (!in_unit(lambda)) throw DomainError("instance: lambda must be in [0,1]");
  if (!in_unit(q0)) throw DomainError("instance: q0 must be in [0,1]");
  for (std::size_t i = 0; i < arms.size(); ++i) {
    if (!in_unit(arms[i].r) || !in_unit(arms[i].b)) {
      throw DomainError("instance: arm " + std::to_string(i) + " has r or b outside [0,1]");
    }
  }
  if (noise && !(std::isfinite(noise->sigma) && noise->sigma >= 0.0)) {
    throw DomainError("instance: noise sigma must be finite and >= 0");
  }
}

Instance instance_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw DomainError("instance: expected a JSON object");
  Instance inst;
  inst.lambda = get_number(j, "lambda");
  double T = get_number(j, "horizon");
  if (T != std::floor(T) || T < 1 || T > 2e9) throw DomainError("instance: horizon must be a positive integer");
  inst.horizon = static_cast<int>(T);
  if (j.contains("q0")) inst.q0 = get_number(j, "q0");
  if (!j.contains("arms") || !j.at("arms").is_array()) throw DomainError("instance: 'arms' must be an array");
  for (const auto& a : j.at("arms")) {
    if (!a.is_object()) throw DomainError("instance: arm must be an object {r,b}");
    inst.arms.push_back({get_number(a, "r"), get_number(a, "b")});
  }
  if (j.contains("noise") && !j.at("noise").is_null()) {
    const auto& n = j.at("noise");
    NoiseModel nm;
    nm.sigma = get_number(n, "sigma");
    std::string kind = n.value("kind", std::string("gaussian"));
    if (kind == "gaussian") {
      nm.kind = NoiseKind::gaussian;
    } else if (kind == "uniform" || kind == "truncated-uniform") {
      nm.kind = NoiseKind::uniform;
    } else {
      throw DomainError("instance: unknown noise kind '" + kind + "'");
    }
    nm.clip = n.value("clip", true);
    inst.noise = nm;
  }
  inst.validate();
  return inst;
}

nlohmann::json instance_to_json(const Instance& inst) {
  nlohmann::json j;
  j["lambda"] = inst.lambda;
  j["horizon"] = inst.horizon;
  j["q0"] = inst.q0;
  j["arms"] = nlohmann::json::array();
  for (const auto& a : inst.arms) j["arms"].push_back({{"r", a.r}, {"b", a.b}});
  if (inst.noise) {
    j["noise"] = {{"sigma", inst.noise->sigma},
                  {"kind", noise_kind_name(inst.noise->kind)},
                  {"clip", inst.noise->clip}};
  }
  return j;
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open instance file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DomainError("instance file " + path + ": " + e.what());
  }
  return instance_from_json(j);
}

}  // namespace bdes
