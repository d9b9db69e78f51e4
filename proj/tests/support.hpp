// Copyright 2026 The mergelab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Shared helpers for the test binaries: an independent brute-force recovery
// oracle, a subprocess runner for CLI round trips, and a small JSON Schema
// checker covering the subset the shipped schemas use.

#ifndef MERGELAB_TESTS_SUPPORT_HPP
#define MERGELAB_TESTS_SUPPORT_HPP

#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>

#include "json.hpp"
#include "mergelab/linalg.hpp"

namespace testsupport {

using mergelab::cx;
using mergelab::PureState;

// |<target| (I_R (x) V(theta, p1, p2)) |post>|^2 for the standard U(2)
// parametrization (global phase dropped; it cannot change the modulus).
// Both states are laid out (R, rest) with dim 2 each.
inline double recovery_objective(const PureState& post, const PureState& target,
                                 double theta, double p1, double p2) {
  const cx v00 = std::polar(std::cos(theta), p1);
  const cx v01 = std::polar(std::sin(theta), p2);
  const cx v10 = -std::polar(std::sin(theta), -p2);
  const cx v11 = std::polar(std::cos(theta), -p1);
  cx ip{};
  for (int r = 0; r < 2; ++r) {
    const cx a0 = post.amps()[r * 2 + 0];
    const cx a1 = post.amps()[r * 2 + 1];
    const cx b0 = v00 * a0 + v01 * a1;
    const cx b1 = v10 * a0 + v11 * a1;
    ip += std::conj(target.amps()[r * 2 + 0]) * b0;
    ip += std::conj(target.amps()[r * 2 + 1]) * b1;
  }
  return std::norm(ip);
}

// Grid search plus coordinate refinement over U(2). Accurate to well below
// 1e-5 on these smooth objectives; used as the oracle for the closed-form
// recovery fidelity.
inline double brute_force_recovery_fidelity(const PureState& post,
                                            const PureState& target) {
  const double pi = std::numbers::pi;
  std::array<double, 3> best{0.0, 0.0, 0.0};
  double bestVal = -1.0;
  const int n = 24;
  for (int a = 0; a <= n / 2; ++a) {
    for (int b = 0; b < n; ++b) {
      for (int c = 0; c < n; ++c) {
        const double th = pi * a / n;  // [0, pi/2]
        const double f1 = 2 * pi * b / n;
        const double f2 = 2 * pi * c / n;
        const double v = recovery_objective(post, target, th, f1, f2);
        if (v > bestVal) {
          bestVal = v;
          best = {th, f1, f2};
        }
      }
    }
  }
  std::array<double, 3> width{pi / n, 2 * pi / n, 2 * pi / n};
  for (int round = 0; round < 40; ++round) {
    for (int p = 0; p < 3; ++p) {
      for (int s = -4; s <= 4; ++s) {
        auto cand = best;
        cand[p] += width[p] * s / 4.0;
        const double v = recovery_objective(post, target, cand[0], cand[1], cand[2]);
        if (v > bestVal) {
          bestVal = v;
          best = cand;
        }
      }
      width[p] *= 0.6;
    }
  }
  return bestVal;
}

struct CliResult {
  int exitCode = -1;
  std::string out;
};

// Runs `cmd` with stderr folded into stdout and captures everything.
inline CliResult run_cli(const std::string& cmd) {
  CliResult r;
  FILE* pipe = popen((cmd + " 2>&1").c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t n = 0;
  while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  if (WIFEXITED(status)) r.exitCode = WEXITSTATUS(status);
  return r;
}

// Minimal JSON Schema subset: type, properties, required, items, enum.
// Returns an empty string when `value` conforms, else a short reason.
inline std::string schema_mismatch(const nlohmann::ordered_json& schema,
                                   const nlohmann::ordered_json& value,
                                   const std::string& path = "$") {
  using Json = nlohmann::ordered_json;
  if (schema.contains("enum")) {
    for (const auto& option : schema["enum"]) {
      if (value == option) return "";
    }
    return path + ": not in enum";
  }
  if (schema.contains("type")) {
    const std::string t = schema["type"].get<std::string>();
    const bool ok =
        (t == "object" && value.is_object()) ||
        (t == "array" && value.is_array()) ||
        (t == "string" && value.is_string()) ||
        (t == "boolean" && value.is_boolean()) ||
        (t == "integer" && value.is_number_integer()) ||
        (t == "number" && value.is_number());
    if (!ok) return path + ": expected " + t;
  }
  if (schema.contains("required")) {
    for (const auto& key : schema["required"]) {
      if (!value.contains(key.get<std::string>())) {
        return path + ": missing required key " + key.get<std::string>();
      }
    }
  }
  if (schema.contains("properties") && value.is_object()) {
    for (const auto& [key, sub] : schema["properties"].items()) {
      if (!value.contains(key)) continue;
      const std::string r = schema_mismatch(sub, value.at(key), path + "." + key);
      if (!r.empty()) return r;
    }
  }
  if (schema.contains("items") && value.is_array()) {
    int i = 0;
    for (const auto& element : value) {
      const std::string r = schema_mismatch(schema["items"], element,
                                            path + "[" + std::to_string(i) + "]");
      if (!r.empty()) return r;
      ++i;
    }
  }
  return "";
}

}  // namespace testsupport

#endif  // MERGELAB_TESTS_SUPPORT_HPP
