#pragma once

// JSON plumbing shared by trace sidecars, reports, and the front end.
// Coordinates round-trip exactly: doubles are emitted as JSON numbers
// (shortest exact form) and the text reports use 17 significant digits.

#include <teich/calibration.hpp>
#include <teich/surface.hpp>

#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace teich {

inline nlohmann::json fn_to_json(const FNPoint& X) {
  nlohmann::json j;
  j["length"] = X.length;
  j["twist"] = X.twist;
  return j;
}

inline FNPoint fn_from_json(const nlohmann::json& j) {
  FNPoint X;
  if (!j.contains("length") || !j.contains("twist"))
    throw std::runtime_error("point needs length and twist arrays");
  X.length = j.at("length").get<std::vector<double>>();
  X.twist = j.at("twist").get<std::vector<double>>();
  if (X.length.size() != X.twist.size())
    throw std::runtime_error("length and twist arrays disagree in size");
  return X;
}

}  // namespace teich
