#ifndef NOISE_IO_HPP
#define NOISE_IO_HPP

#include <json.hpp>
#include <string>

#include "noise/noisebool.hpp"
#include "noise/scenarios.hpp"

namespace noise {

struct LoadError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Scenario JSON:
// { "probs": [...],
//   "fields": { name: [[outcome indices]...] },   // canonicalized on load
//   "rvs":    { name: [values...] },
//   "algebra": { "atoms": [field names] },        // optional
//   "chain":  [ [[atom indices]...], ... ],       // optional
//   "metadata": { "generator": ..., "params": {...} } }  // optional
nlohmann::json scenario_to_json(const Scenario& sc);
Scenario scenario_from_json(const nlohmann::json& j);

Scenario load_scenario(const std::string& path);
void save_scenario(const Scenario& sc, const std::string& path);

// 17-significant-digit, locale-independent float formatting for tables.
std::string format_double(double v);

}  // namespace noise

#endif
