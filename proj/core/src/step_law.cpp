#include "tailwalk/step_law.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

#include "tailwalk/errors.hpp"

namespace tailwalk {

std::string family_name(Family f) {
  return f == Family::ShiftedLomax ? "shifted_lomax" : "shifted_pareto";
}

Family family_from_name(const std::string& name) {
  if (name == "shifted_lomax") return Family::ShiftedLomax;
  if (name == "shifted_pareto") return Family::ShiftedPareto;
  throw ConfigError("unknown step law family: " + name);
}

StepLaw::StepLaw(Family family, double alpha, double scale, double shift)
    : family_(family), alpha_(alpha), scale_(scale), shift_(shift) {
  if (!(alpha > 1.0)) {
    throw ConstructionError("step law requires tail index alpha > 1, got " +
                            std::to_string(alpha));
  }
  if (!(scale > 0.0)) {
    throw ConstructionError("step law requires a positive scale, got " +
                            std::to_string(scale));
  }
  if (!std::isfinite(shift)) {
    throw ConstructionError("step law shift must be finite");
  }
  if (family_ == Family::ShiftedLomax) {
    support_left_ = -shift_;
    mean_ = scale_ / (alpha_ - 1.0) - shift_;
  } else {
    support_left_ = scale_ - shift_;
    mean_ = alpha_ * scale_ / (alpha_ - 1.0) - shift_;
  }
  if (!(mean_ < 0.0)) {
    throw ConstructionError("step law must have negative drift; mean = " +
                            std::to_string(mean_));
  }
}

double StepLaw::sf(double t) const {
  if (t <= support_left_) return 1.0;
  if (family_ == Family::ShiftedLomax) {
    return std::pow(1.0 + (t + shift_) / scale_, -alpha_);
  }
  return std::pow((t + shift_) / scale_, -alpha_);
}

double StepLaw::pdf(double t) const {
  if (t < support_left_) return 0.0;
  if (family_ == Family::ShiftedLomax) {
    return (alpha_ / scale_) * std::pow(1.0 + (t + shift_) / scale_, -alpha_ - 1.0);
  }
  return (alpha_ / scale_) * std::pow((t + shift_) / scale_, -alpha_ - 1.0);
}

double StepLaw::integrated_tail(double t) const {
  if (t <= support_left_) {
    // sf = 1 below the support, so the integral grows linearly there; at the
    // support edge both families give scale/(alpha - 1).
    return scale_ / (alpha_ - 1.0) + (support_left_ - t);
  }
  if (family_ == Family::ShiftedLomax) {
    return scale_ / (alpha_ - 1.0) *
           std::pow(1.0 + (t + shift_) / scale_, 1.0 - alpha_);
  }
  return scale_ / (alpha_ - 1.0) * std::pow((t + shift_) / scale_, 1.0 - alpha_);
}

double StepLaw::quantile(double u) const {
  if (!(u > 0.0) || !(u <= 1.0)) {
    throw DomainError("quantile argument must lie in (0, 1], got " + std::to_string(u));
  }
  if (u == 1.0) return support_left_;
  if (family_ == Family::ShiftedLomax) {
    return scale_ * (std::pow(u, -1.0 / alpha_) - 1.0) - shift_;
  }
  return scale_ * std::pow(u, -1.0 / alpha_) - shift_;
}

double StepLaw::sf_ratio_minus_one(double t, double s) const {
  if (t <= support_left_) {
    throw DomainError("sf_ratio_minus_one requires t inside the support");
  }
  if (t - s <= support_left_) return 1.0 / sf(t) - 1.0;
  // Both families have sf(t) = base(t)^-alpha with base affine in t, so
  // sf(t-s)/sf(t) = (1 - s/base_arg)^-alpha with base_arg = t + m (+ sigma
  // for the Lomax form).
  const double base_arg =
      family_ == Family::ShiftedLomax ? t + shift_ + scale_ : t + shift_;
  return std::expm1(-alpha_ * std::log1p(-s / base_arg));
}

std::string StepLaw::to_json() const {
  nlohmann::json j;
  j["family"] = family_name(family_);
  j["alpha"] = alpha_;
  j[family_ == Family::ShiftedLomax ? "sigma" : "x_m"] = scale_;
  j["m"] = shift_;
  return j.dump();
}

StepLaw StepLaw::from_json(const std::string& json_text) {
  nlohmann::json j = nlohmann::json::parse(json_text);
  const Family family = family_from_name(j.at("family").get<std::string>());
  const char* scale_key = family == Family::ShiftedLomax ? "sigma" : "x_m";
  if (!j.contains(scale_key)) {
    throw ConfigError(std::string("step law JSON missing \"") + scale_key + "\"");
  }
  try {
    return StepLaw(family, j.at("alpha").get<double>(), j.at(scale_key).get<double>(),
                   j.at("m").get<double>());
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad step law JSON: ") + e.what());
  }
}

}  // namespace tailwalk
