#pragma once

// Frozen numeric budgets used by the coarse inequalities, plus the override
// and fingerprinting machinery. Every constant here was produced by the
// calibrate tool (see its provenance string) and is treated as part of the
// library's contract: reports embed the FNV-1a hash of the active values so
// that two runs are comparable only when their budgets agree.
//
// Set TEICHPATH_CALIB to a JSON file to override individual constants.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace teich {

inline std::string format_g17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

struct Calibration {
  // Additive slack certified for the pants curve-length decomposition:
  // each truncated perpendicular length tracks the corresponding signed
  // length defect within this constant.
  double pants_slack = 2.7;

  // Coarse twist budgets: drift of tw under composition of comparisons, and
  // the worst deviation of tw from the applied twist count after a full-turn
  // earthquake.
  double twist_additivity = 4.0;
  double twist_response = 3.0;

  // Section and staged-path budgets: how far annulus and subsurface
  // projections may drift along a controlled section, and the margins used
  // when scheduling length targets.
  double section_projection_drift = 4.0;
  double path_length_margin = 4.0;
  double path_projection_margin = 4.0;

  // Ordering thresholds: projections below order_near_threshold are treated
  // as unordered noise; comparisons require a margin of order_margin and pad
  // intermediate estimates by order_pad.
  double order_near_threshold = 4.0;
  double order_margin = 4.0;
  double order_pad = 4.0;

  // Collar paddings: the boundary of the standard collar around a geodesic
  // of length l has length between max(l, collar_floor) and l + collar_pad.
  double collar_pad = 2.0;
  double collar_floor = 2.0;

  // Thin-part threshold: curve lengths below this count as pinched. Staged
  // paths aim for half of it, and their preconditions require the shrink
  // parameter K to be at least its reciprocal.
  double thin_threshold = 0.1;

  // Certified ceiling on witness projections along staged paths, per surface
  // kind, at the default stage budget.
  std::map<std::string, double> path_height_budget = {
      {"genus1_1", 60.0}, {"genus0_4", 60.0}, {"genus1_2", 80.0}, {"genus2_0", 100.0}};

  // Length caps used by the deterministic corpora.
  std::map<std::string, double> corpus_length_cap = {
      {"genus1_1", 8.0}, {"genus0_4", 8.0}, {"genus1_2", 8.0}, {"genus2_0", 8.0}};

  std::uint64_t default_seed = 20260822ull;

  // Free-text notes on how each constant was produced; excluded from the
  // fingerprint.
  std::map<std::string, std::string> provenance;

  std::map<std::string, double> scalar_view() const {
    std::map<std::string, double> m = {
        {"pants_slack", pants_slack},
        {"twist_additivity", twist_additivity},
        {"twist_response", twist_response},
        {"section_projection_drift", section_projection_drift},
        {"path_length_margin", path_length_margin},
        {"path_projection_margin", path_projection_margin},
        {"order_near_threshold", order_near_threshold},
        {"order_margin", order_margin},
        {"order_pad", order_pad},
        {"collar_pad", collar_pad},
        {"collar_floor", collar_floor},
        {"thin_threshold", thin_threshold},
    };
    for (const auto& [k, v] : path_height_budget) m["path_height_budget." + k] = v;
    for (const auto& [k, v] : corpus_length_cap) m["corpus_length_cap." + k] = v;
    m["default_seed"] = static_cast<double>(default_seed);
    return m;
  }

  bool assign_scalar(const std::string& key, double v) {
    auto set_mapped = [&](const char* prefix, std::map<std::string, double>& dst) {
      std::string p = prefix;
      if (key.rfind(p, 0) == 0) {
        dst[key.substr(p.size())] = v;
        return true;
      }
      return false;
    };
    if (key == "pants_slack") pants_slack = v;
    else if (key == "twist_additivity") twist_additivity = v;
    else if (key == "twist_response") twist_response = v;
    else if (key == "section_projection_drift") section_projection_drift = v;
    else if (key == "path_length_margin") path_length_margin = v;
    else if (key == "path_projection_margin") path_projection_margin = v;
    else if (key == "order_near_threshold") order_near_threshold = v;
    else if (key == "order_margin") order_margin = v;
    else if (key == "order_pad") order_pad = v;
    else if (key == "collar_pad") collar_pad = v;
    else if (key == "collar_floor") collar_floor = v;
    else if (key == "thin_threshold") thin_threshold = v;
    else if (key == "default_seed") default_seed = static_cast<std::uint64_t>(v);
    else if (set_mapped("path_height_budget.", path_height_budget)) return true;
    else if (set_mapped("corpus_length_cap.", corpus_length_cap)) return true;
    else return false;
    return true;
  }

  std::string canonical_serialization() const {
    std::ostringstream os;
    for (const auto& [k, v] : scalar_view()) os << k << '=' << format_g17(v) << ';';
    return os.str();
  }

  std::uint64_t fingerprint() const {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : canonical_serialization()) {
      h ^= c;
      h *= 1099511628211ull;
    }
    return h;
  }

  std::string fingerprint_hex() const {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fingerprint()));
    return buf;
  }

  void apply_json(const nlohmann::json& j) {
    if (j.contains("constants")) {
      for (const auto& [k, v] : j.at("constants").items()) {
        if (v.is_object()) {
          for (const auto& [k2, v2] : v.items())
            if (!assign_scalar(k + "." + k2, v2.get<double>()))
              throw std::runtime_error("unknown calibration key: " + k + "." + k2);
        } else if (!assign_scalar(k, v.get<double>())) {
          throw std::runtime_error("unknown calibration key: " + k);
        }
      }
    }
    if (j.contains("provenance"))
      for (const auto& [k, v] : j.at("provenance").items())
        provenance[k] = v.get<std::string>();
  }

  nlohmann::json to_json() const {
    nlohmann::json c = nlohmann::json::object();
    for (const auto& [k, v] : scalar_view()) {
      auto dot = k.find('.');
      if (dot == std::string::npos) c[k] = v;
      else c[k.substr(0, dot)][k.substr(dot + 1)] = v;
    }
    nlohmann::json j;
    j["constants"] = c;
    j["fingerprint"] = fingerprint_hex();
    if (!provenance.empty()) j["provenance"] = provenance;
    return j;
  }

  static Calibration load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open calibration file: " + path);
    nlohmann::json j;
    in >> j;
    Calibration cal;
    cal.apply_json(j);
    return cal;
  }

  // Active configuration: defaults, overridden once per process from the
  // file named by TEICHPATH_CALIB if that variable is set.
  static const Calibration& active() {
    static Calibration cal = [] {
      Calibration c;
      if (const char* p = std::getenv("TEICHPATH_CALIB")) c = load(p);
      return c;
    }();
    return cal;
  }
};

}  // namespace teich
