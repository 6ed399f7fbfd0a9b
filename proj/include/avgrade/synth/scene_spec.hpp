#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace avgrade {

/// Scheie-style severity grades, ordered by increasing venular narrowing.
enum class Severity : int { none = 0, mild = 1, moderate = 2, severe = 3 };

enum class OverVessel : int { artery = 0, vein = 1 };

constexpr int kNumSeverityClasses = 4;

inline const char* to_string(Severity s) {
  switch (s) {
    case Severity::none: return "none";
    case Severity::mild: return "mild";
    case Severity::moderate: return "moderate";
    case Severity::severe: return "severe";
  }
  return "?";
}

inline Severity severity_from_string(const std::string& s) {
  if (s == "none") return Severity::none;
  if (s == "mild") return Severity::mild;
  if (s == "moderate") return Severity::moderate;
  if (s == "severe") return Severity::severe;
  throw std::invalid_argument("unknown severity: " + s);
}

inline const char* to_string(OverVessel o) {
  return o == OverVessel::artery ? "artery" : "vein";
}

inline OverVessel over_vessel_from_string(const std::string& s) {
  if (s == "artery") return OverVessel::artery;
  if (s == "vein") return OverVessel::vein;
  throw std::invalid_argument("unknown over_vessel: " + s);
}

/// Knobs for one synthetic scene. Class priors default to the observed
/// none/mild/moderate/severe patch counts 1177:816:457:57.
struct SceneSpec {
  std::uint64_t seed = 0;
  int canvas_width = 512;
  int canvas_height = 512;
  int n_arteries = 2;
  int n_veins = 2;
  double vessel_width_min = 5.0;
  double vessel_width_max = 9.0;
  double cup_center_x = 80.0;
  double cup_center_y = 80.0;
  double cup_radius = 48.0;
  std::array<double, 4> severity_priors = {1177.0 / 2507.0, 816.0 / 2507.0,
                                           457.0 / 2507.0, 57.0 / 2507.0};
  // Chance that the artery passes over the vein at a crossing; the observed
  // true:false patch ratio is 2507:1733.
  double artery_over_prob = 0.59;
  int examinee_id = 0;

  void validate() const {
    double sum = 0.0;
    for (double p : severity_priors) {
      if (p < 0.0) throw std::invalid_argument("severity_priors entry < 0");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9)
      throw std::invalid_argument("severity_priors must sum to 1");
    if (vessel_width_min < 2.0)
      throw std::invalid_argument("vessel_width_min must be >= 2");
    if (vessel_width_min > vessel_width_max)
      throw std::invalid_argument("vessel_width_min > vessel_width_max");
    if (canvas_width <= 0 || canvas_height <= 0)
      throw std::invalid_argument("canvas size must be positive");
    if (n_arteries < 0 || n_veins < 0)
      throw std::invalid_argument("vessel counts must be >= 0");
    if (artery_over_prob < 0.0 || artery_over_prob > 1.0)
      throw std::invalid_argument("artery_over_prob outside [0, 1]");
  }
};

struct Crossing {
  int x = 0;
  int y = 0;
  OverVessel over = OverVessel::artery;
  Severity severity = Severity::none;  // meaningful only when over == artery
};

/// Construction-time truth for one scene.
struct GroundTruth {
  std::vector<Crossing> crossings;
  int examinee_id = 0;
};

inline nlohmann::json to_json(const SceneSpec& s) {
  return nlohmann::json{{"seed", s.seed},
                        {"canvas", {s.canvas_width, s.canvas_height}},
                        {"n_arteries", s.n_arteries},
                        {"n_veins", s.n_veins},
                        {"vessel_width", {s.vessel_width_min, s.vessel_width_max}},
                        {"cup", {{"x", s.cup_center_x},
                                 {"y", s.cup_center_y},
                                 {"r", s.cup_radius}}},
                        {"severity_priors", s.severity_priors},
                        {"artery_over_prob", s.artery_over_prob},
                        {"examinee_id", s.examinee_id}};
}

inline SceneSpec scene_spec_from_json(const nlohmann::json& j) {
  SceneSpec s;
  s.seed = j.at("seed").get<std::uint64_t>();
  s.canvas_width = j.at("canvas")[0].get<int>();
  s.canvas_height = j.at("canvas")[1].get<int>();
  s.n_arteries = j.at("n_arteries").get<int>();
  s.n_veins = j.at("n_veins").get<int>();
  s.vessel_width_min = j.at("vessel_width")[0].get<double>();
  s.vessel_width_max = j.at("vessel_width")[1].get<double>();
  s.cup_center_x = j.at("cup").at("x").get<double>();
  s.cup_center_y = j.at("cup").at("y").get<double>();
  s.cup_radius = j.at("cup").at("r").get<double>();
  auto priors = j.at("severity_priors");
  for (int i = 0; i < 4; ++i) s.severity_priors[i] = priors[i].get<double>();
  s.artery_over_prob = j.at("artery_over_prob").get<double>();
  s.examinee_id = j.at("examinee_id").get<int>();
  return s;
}

/// Sidecar record written next to each scene raster.
inline nlohmann::json to_json(const GroundTruth& gt, const SceneSpec& spec) {
  nlohmann::json crossings = nlohmann::json::array();
  for (const auto& c : gt.crossings) {
    nlohmann::json jc{{"x", c.x}, {"y", c.y}, {"over", to_string(c.over)}};
    if (c.over == OverVessel::artery) jc["severity"] = to_string(c.severity);
    crossings.push_back(jc);
  }
  return nlohmann::json{{"examinee_id", gt.examinee_id},
                        {"crossings", crossings},
                        {"spec", to_json(spec)}};
}

inline GroundTruth ground_truth_from_json(const nlohmann::json& j) {
  GroundTruth gt;
  gt.examinee_id = j.at("examinee_id").get<int>();
  for (const auto& jc : j.at("crossings")) {
    Crossing c;
    c.x = jc.at("x").get<int>();
    c.y = jc.at("y").get<int>();
    c.over = over_vessel_from_string(jc.at("over").get<std::string>());
    if (jc.contains("severity"))
      c.severity = severity_from_string(jc.at("severity").get<std::string>());
    gt.crossings.push_back(c);
  }
  return gt;
}

}  // namespace avgrade
