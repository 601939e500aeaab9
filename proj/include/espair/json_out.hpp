#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <string>

#include <json.hpp>

#include "espair/exact.hpp"
#include "espair/flows.hpp"
#include "espair/harmonic.hpp"
#include "espair/reproduce.hpp"
#include "espair/sampler.hpp"
#include "espair/spectral.hpp"

namespace espair {

/// Serializes with doubles rendered at 17 significant digits ("%.17g"),
/// enough to round-trip any double exactly and stable across platforms.
/// Object keys come out in nlohmann's sorted order, so equal reports are
/// byte-identical.
inline void dump_json_17(const nlohmann::json& j, std::string& out) {
  switch (j.type()) {
    case nlohmann::json::value_t::null:
      out += "null";
      return;
    case nlohmann::json::value_t::boolean:
      out += j.get<bool>() ? "true" : "false";
      return;
    case nlohmann::json::value_t::number_integer:
      out += std::to_string(j.get<std::int64_t>());
      return;
    case nlohmann::json::value_t::number_unsigned:
      out += std::to_string(j.get<std::uint64_t>());
      return;
    case nlohmann::json::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) {
        out += "null";
        return;
      }
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out += buf;
      // Keep the value a JSON number that parses back as floating point.
      if (out.find_first_of(".eE", out.size() - std::strlen(buf)) ==
          std::string::npos)
        out += ".0";
      return;
    }
    case nlohmann::json::value_t::string:
      out += nlohmann::json(j.get<std::string>()).dump();
      return;
    case nlohmann::json::value_t::array: {
      out += '[';
      bool first = true;
      for (const auto& item : j) {
        if (!first) out += ',';
        first = false;
        dump_json_17(item, out);
      }
      out += ']';
      return;
    }
    case nlohmann::json::value_t::object: {
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        out += nlohmann::json(it.key()).dump();
        out += ':';
        dump_json_17(it.value(), out);
      }
      out += '}';
      return;
    }
    default:
      out += "null";
      return;
  }
}

inline std::string dump_json_17(const nlohmann::json& j) {
  std::string out;
  dump_json_17(j, out);
  return out;
}

inline nlohmann::json sides_to_json(const SidesReport& r) {
  nlohmann::json j{{"lhs", r.lhs},
                   {"rhs_terms", r.rhs_terms},
                   {"rhs_sum", r.rhs_sum},
                   {"bound", r.bound},
                   {"satisfied", r.satisfied}};
  j["ratio"] = r.ratio ? nlohmann::json(*r.ratio) : nlohmann::json(nullptr);
  return j;
}

inline nlohmann::json certify_to_json(const CertifyResult& r, int n) {
  nlohmann::json bounds;
  bounds["exchangeable"] = r.exchangeable
                               ? nlohmann::json(r.exchangeable->value)
                               : nlohmann::json(nullptr);
  bounds["rho"] = r.rho_bound ? nlohmann::json(r.rho_bound->value)
                              : nlohmann::json(nullptr);
  bounds["cycle"] = r.cycle_bound ? nlohmann::json(r.cycle_bound->value)
                                  : nlohmann::json(nullptr);
  bounds["cauchy_schwarz"] = n;
  std::vector<double> extremal;
  extremal.reserve(r.worst.extremal_f.size());
  for (const auto& z : r.worst.extremal_f.values) extremal.push_back(z.real());
  return nlohmann::json{{"lambda_max", r.worst.lambda_max},
                        {"bounds", std::move(bounds)},
                        {"extremal_f", std::move(extremal)},
                        {"kernel_consistent", r.worst.kernel_consistent},
                        {"tightest_bound", r.tightest_bound},
                        {"pass", r.pass}};
}

inline nlohmann::json rho_to_json(const RhoResult& r) {
  return nlohmann::json{{"rho", r.rho},
                        {"argmax_m", r.argmax_m},
                        {"argmax_u", r.argmax_u},
                        {"kappa_half_bound", r.kappa_half_bound}};
}

inline nlohmann::json decomposition_to_json(const CycleDecomposition& d) {
  nlohmann::json components = nlohmann::json::array();
  for (const auto& c : d.components)
    components.push_back({{"cycle", c.cycle}, {"weight", c.weight}});
  return nlohmann::json{{"components", std::move(components)},
                        {"max_cycle_length", d.max_cycle_length},
                        {"refined_constant", d.refined_constant}};
}

inline nlohmann::json estimate_to_json(const McEstimate& e) {
  return nlohmann::json{{"mean", e.mean},
                        {"stderr", e.std_error},
                        {"ci95", {e.ci_low, e.ci_high}}};
}

inline nlohmann::json sign_flip_to_json(const SignFlipReport& r,
                                        const SignFlipConfig& cfg) {
  nlohmann::json increments = nlohmann::json::array();
  for (const auto& e : r.increments) increments.push_back(estimate_to_json(e));
  return nlohmann::json{{"lhs", estimate_to_json(r.lhs)},
                        {"rhs", estimate_to_json(r.poincare_rhs)},
                        {"increments", std::move(increments)},
                        {"bound_holds", r.bound_holds},
                        {"seed", cfg.seed},
                        {"samples", cfg.samples}};
}

inline nlohmann::json rotation_to_json(const RotationReport& r,
                                       std::uint64_t seed,
                                       std::uint64_t samples) {
  nlohmann::json rhs = nlohmann::json::array();
  for (const auto& e : r.rhs_terms) rhs.push_back(estimate_to_json(e));
  const bool consistent =
      std::abs(r.lhs.mean - r.closed_form_lhs) <= 3.0 * r.lhs.std_error;
  return nlohmann::json{{"lhs", estimate_to_json(r.lhs)},
                        {"rhs_terms", std::move(rhs)},
                        {"closed_form_lhs", r.closed_form_lhs},
                        {"closed_form_rhs_term", r.closed_form_rhs_term},
                        {"ratio", r.ratio_estimate},
                        {"ratio_stderr", r.ratio_std_error},
                        {"consistent", consistent},
                        {"seed", seed},
                        {"samples", samples}};
}

inline nlohmann::json reproduce_to_json(const ReproduceReport& r) {
  nlohmann::json keys;
  for (const auto& c : r.checks)
    keys[c.key] = {{"passed", c.passed}, {"detail", c.detail}};
  return nlohmann::json{{"keys", std::move(keys)},
                        {"all_passed", r.all_passed}};
}

}  // namespace espair
