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

// Command-line front door. Exit codes: 0 success, 1 verification failure,
// 2 usage error. Every verb prints a JSON report to stdout; --json FILE
// writes the same bytes to a file so runs can be diffed.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "mergelab/json_io.hpp"
#include "mergelab/kernels.hpp"
#include "mergelab/koashi_imoto.hpp"
#include "mergelab/linalg.hpp"
#include "mergelab/measure.hpp"
#include "mergelab/protocols.hpp"
#include "mergelab/search.hpp"
#include "mergelab/states.hpp"

namespace ml = mergelab;
using ml::Json;

namespace {

bool parse_double_full(const std::string& s, double* out) {
  if (s.empty()) return false;
  char* end = nullptr;
  *out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size();
}

// Accepts "re", "re+imi", "re-imi", "imi", "i", "-i" and polar "exp:theta".
bool parse_gamma(const std::string& text, ml::cx* out) {
  if (text.rfind("exp:", 0) == 0) {
    double theta = 0.0;
    if (!parse_double_full(text.substr(4), &theta)) return false;
    *out = std::polar(1.0, theta);
    return true;
  }
  std::string t = text;
  const bool hasI = !t.empty() && (t.back() == 'i' || t.back() == 'I');
  if (hasI) t.pop_back();
  std::size_t split = std::string::npos;
  for (std::size_t k = t.size(); k-- > 1;) {
    const char c = t[k];
    if ((c == '+' || c == '-') && t[k - 1] != 'e' && t[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  double re = 0.0, im = 0.0;
  if (split != std::string::npos) {
    if (!hasI) return false;
    std::string imStr = t.substr(split);
    if (imStr == "+") imStr = "1";
    if (imStr == "-") imStr = "-1";
    if (!parse_double_full(t.substr(0, split), &re)) return false;
    if (!parse_double_full(imStr, &im)) return false;
  } else if (hasI) {
    if (t.empty()) {
      im = 1.0;
    } else if (t == "-") {
      im = -1.0;
    } else if (!parse_double_full(t, &im)) {
      return false;
    }
  } else {
    if (!parse_double_full(t, &re)) return false;
  }
  *out = ml::cx(re, im);
  return true;
}

struct CommonOpts {
  std::string gamma1Text;
  std::string gamma2Text;
  std::string jsonPath;
  int threads = 0;
};

void add_gamma_flags(CLI::App* cmd, CommonOpts* o) {
  cmd->add_option("--gamma1", o->gamma1Text,
                  "First phase, as re+imi literal or exp:theta");
  cmd->add_option("--gamma2", o->gamma2Text,
                  "Second phase, as re+imi literal or exp:theta");
}

void add_json_flag(CLI::App* cmd, CommonOpts* o) {
  cmd->add_option("--json", o->jsonPath, "Also write the report to this file");
}

// Returns false (after printing to stderr) on malformed gamma text.
bool resolve_gammas(const CommonOpts& o, ml::GammaParams* g) {
  *g = ml::default_gammas();
  if (!o.gamma1Text.empty() && !parse_gamma(o.gamma1Text, &g->gamma1)) {
    std::cerr << "cannot parse --gamma1 '" << o.gamma1Text << "'\n";
    return false;
  }
  if (!o.gamma2Text.empty() && !parse_gamma(o.gamma2Text, &g->gamma2)) {
    std::cerr << "cannot parse --gamma2 '" << o.gamma2Text << "'\n";
    return false;
  }
  return true;
}

void emit(const Json& report, const std::string& jsonPath) {
  const std::string text = ml::dump_stable(report);
  std::cout << text;
  if (!jsonPath.empty()) {
    std::ofstream f(jsonPath, std::ios::binary);
    f << text;
  }
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3g", x);
  return buf;
}

struct Check {
  std::string name;
  bool ok = false;
  std::string detail;
};

Json json_of_checks(const std::vector<Check>& checks) {
  Json a = Json::array();
  for (const Check& c : checks) {
    a.push_back(Json{{"name", c.name}, {"ok", c.ok}, {"detail", c.detail}});
  }
  return a;
}

Json run_summary(const ml::RunReport& r) {
  return Json{{"costBits", ml::round12(r.costBits)},
              {"direction", ml::direction_string(r.direction)},
              {"minFidelitySq", ml::round12(r.minFidelitySq)},
              {"totalProb", ml::round12(r.totalProb)},
              {"branches", r.branches.size()}};
}

double purity_on(const ml::PureState& s, const ml::Labels& want) {
  ml::Labels keep;
  for (const auto& l : want) {
    if (s.has_label(l)) keep.push_back(l);
  }
  if (keep.size() == s.labels().size()) return 1.0;  // nothing to trace out
  ml::DensityOperator rho = ml::reduce(s, keep);
  return ml::kern::nrm2sq(rho.mat().data(), rho.mat().size());
}

struct EntropySet {
  double hR, hB, hAB, hAgivenB;
};

EntropySet entropies_of(const ml::MergeInstance& inst) {
  EntropySet e{};
  e.hR = ml::entropy_bits(ml::reduce(inst.psi, {"R"}));
  e.hB = ml::entropy_bits(ml::reduce(inst.psi, {"B"}));
  e.hAB = ml::entropy_bits(ml::reduce(inst.psi, {"A", "B"}));
  e.hAgivenB = ml::cond_entropy_bits(inst.psi, "A", "B");
  return e;
}

int cmd_verify(const CommonOpts& opts) {
  ml::GammaParams g;
  if (!resolve_gammas(opts, &g)) return 2;

  std::vector<Check> checks;
  Json report;
  report["gammas"] = Json{{"gamma1", ml::json_of_complex(g.gamma1)},
                          {"gamma2", ml::json_of_complex(g.gamma2)}};
  report["kernels"] = ml::kern::active_name();

  const auto violations = ml::validate_gammas(g);
  Check gammaCheck{"gamma-constraints", violations.empty(), ""};
  if (violations.empty()) {
    gammaCheck.detail = "|gamma|=1, nonreal, gamma2 != +-i*gamma1^2";
  } else {
    std::ostringstream os;
    for (std::size_t i = 0; i < violations.size(); ++i) {
      if (i) os << "; ";
      os << violations[i];
    }
    gammaCheck.detail = os.str();
  }
  checks.push_back(gammaCheck);

  if (!gammaCheck.ok) {
    report["checks"] = json_of_checks(checks);
    report["ok"] = false;
    emit(report, opts.jsonPath);
    std::cerr << "FAILED: gamma-constraints\n";
    return 1;
  }

  const ml::MergeInstance inst = ml::build_instance(g);

  {
    double dev = 0.0;
    for (int l = 0; l < 3; ++l) {
      for (int m = 0; m < 3; ++m) {
        const ml::cx got = ml::overlap(inst.family[l], inst.family[m]);
        const ml::cx want = (l == m) ? ml::cx(1, 0) : ml::cx(0, 0);
        dev = std::max(dev, std::abs(got - want));
      }
    }
    checks.push_back({"family-orthonormality", dev <= 1e-12,
                      "max Gram deviation " + fmt(dev)});
  }

  {
    const auto rep = ml::is_complete(ml::build_b_measurement(), 1e-10);
    checks.push_back({"b-completeness", rep.complete,
                      "residual " + fmt(rep.residual) + " over 3 outcomes"});
  }

  {
    double worst = 0.0;
    bool ok = true;
    for (int j = 0; j < 3; ++j) {
      const auto rep = ml::is_complete(ml::build_a_measurement(j, g), 1e-10);
      worst = std::max(worst, rep.residual);
      ok = ok && rep.complete;
    }
    checks.push_back({"a-completeness", ok,
                      "max residual " + fmt(worst) + " over j=0..2"});
  }

  std::optional<ml::KIDecomposition> ki;
  {
    ki = ml::build_ki(g);
    const auto v = ml::verify_ki(inst.psi, *ki, 1e-10);
    bool probsOk = std::abs(ki->blocks[0].prob - 2.0 / 11.0) <= 1e-12;
    for (int j = 1; j < 4; ++j) {
      probsOk = probsOk && std::abs(ki->blocks[j].prob - 3.0 / 11.0) <= 1e-12;
    }
    checks.push_back({"ki-reconstruction", v.ok && probsOk,
                      "residual " + fmt(v.residual) + ", block probs (2,3,3,3)/11"});
  }

  ml::RunReport twoWay;
  {
    const ml::Protocol p = ml::build_two_way(g);
    int lastMeasure = -1;
    for (std::size_t i = 0; i < p.steps.size(); ++i) {
      if (std::holds_alternative<ml::MeasureNode>(p.steps[i])) {
        lastMeasure = static_cast<int>(i);
      }
    }
    double redDev = 0.0;
    auto hook = [&](const ml::StepEvent& ev) {
      if (ev.step != lastMeasure) return;
      const ml::DensityOperator r = ml::reduce(ev.state, {"R"});
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
          const ml::cx want = (i == j) ? ml::cx(1.0 / 3.0, 0) : ml::cx(0, 0);
          redDev = std::max(redDev, std::abs(r.mat()[i * 3 + j] - want));
        }
      }
    };
    twoWay = ml::run_merge(p, inst, hook);
    const bool ok = redDev <= 1e-9 &&
                    std::abs(twoWay.minFidelitySq - 1.0) <= 1e-9 &&
                    twoWay.costBits == 0.0 &&
                    twoWay.direction == ml::Direction::TwoWay &&
                    std::abs(twoWay.totalProb - 1.0) <= 1e-9;
    checks.push_back({"two-way-exactness", ok,
                      std::to_string(twoWay.branches.size()) +
                          " branches, max |rho_R - I/3| = " + fmt(redDev) +
                          ", 1 - min fidelity^2 = " +
                          fmt(1.0 - twoWay.minFidelitySq)});
  }

  ml::RunReport oneWay;
  {
    oneWay = ml::run_merge(ml::build_one_way(g), inst);
    const bool ok = std::abs(oneWay.minFidelitySq - 1.0) <= 1e-9 &&
                    oneWay.costBits == 1.0 &&
                    oneWay.direction == ml::Direction::OneWayAB &&
                    std::abs(oneWay.totalProb - 1.0) <= 1e-9;
    checks.push_back({"one-way-exactness", ok,
                      std::to_string(oneWay.branches.size()) +
                          " branches, 1 - min fidelity^2 = " +
                          fmt(1.0 - oneWay.minFidelitySq)});
  }

  {
    const ml::Labels want{"R", "Bp", "B"};
    double dev = 0.0;
    for (const auto& b : twoWay.branches) {
      dev = std::max(dev, std::abs(purity_on(b.finalState, want) - 1.0));
    }
    for (const auto& b : oneWay.branches) {
      dev = std::max(dev, std::abs(purity_on(b.finalState, want) - 1.0));
    }
    checks.push_back({"resource-purity", dev <= 1e-9,
                      "max |tr(rho^2) - 1| = " + fmt(dev) + " on (R,Bp,B)"});
  }

  {
    const EntropySet e = entropies_of(inst);
    const double l3 = std::log2(3.0), l11 = std::log2(11.0);
    const double dev = std::max({std::abs(e.hR - l3), std::abs(e.hB - l11),
                                 std::abs(e.hAB - l3),
                                 std::abs(e.hAgivenB - (l3 - l11))});
    checks.push_back({"entropy-consistency", dev <= 1e-9,
                      "max deviation " + fmt(dev) +
                          "; H(A|B) = log2(3) - log2(11) < 0"});
  }

  bool allOk = true;
  for (const Check& c : checks) allOk = allOk && c.ok;
  report["checks"] = json_of_checks(checks);
  report["twoWay"] = run_summary(twoWay);
  report["oneWay"] = run_summary(oneWay);
  report["ok"] = allOk;
  emit(report, opts.jsonPath);
  if (!allOk) {
    for (const Check& c : checks) {
      if (!c.ok) std::cerr << "FAILED: " << c.name << "\n";
    }
    return 1;
  }
  return 0;
}

struct NamedProtocol {
  ml::Protocol protocol;
  ml::MergeInstance instance;
};

NamedProtocol make_protocol(const std::string& name, const ml::GammaParams& g) {
  if (name == "twoway") return {ml::build_two_way(g), ml::build_instance(g)};
  if (name == "oneway") return {ml::build_one_way(g), ml::build_instance(g)};
  return {ml::build_elimination_protocol(), ml::elimination_instance()};
}

int cmd_run(const std::string& name, const CommonOpts& opts, bool trace,
            bool states) {
  ml::GammaParams g;
  if (!resolve_gammas(opts, &g)) return 2;
  NamedProtocol np = make_protocol(name, g);
  const ml::RunReport rep = ml::run_merge(np.protocol, np.instance);
  if (trace) {
    for (const auto& b : rep.branches) {
      Json line;
      line["transcript"] = b.transcript;
      line["prob"] = ml::round12(b.probability);
      line["fidelitySq"] = ml::round12(b.fidelitySq);
      std::cout << line.dump() << "\n";
    }
  }
  emit(ml::json_of(rep, states), opts.jsonPath);
  return 0;
}

int cmd_entropy(const CommonOpts& opts) {
  ml::GammaParams g;
  if (!resolve_gammas(opts, &g)) return 2;
  const EntropySet e = entropies_of(ml::build_instance(g));
  Json report;
  report["H_R"] = ml::round12(e.hR);
  report["H_B"] = ml::round12(e.hB);
  report["H_AB"] = ml::round12(e.hAB);
  report["H_A_given_B"] = ml::round12(e.hAgivenB);
  emit(report, opts.jsonPath);
  return 0;
}

int cmd_discriminate(int l, const std::string& name, const CommonOpts& opts) {
  ml::GammaParams g;
  if (!resolve_gammas(opts, &g)) return 2;
  NamedProtocol np = make_protocol(name, g);
  if (l < 0 || l >= np.instance.D) {
    std::cerr << "l must be in [0, " << np.instance.D << ")\n";
    return 2;
  }
  const auto d = ml::discriminate(np.protocol, np.instance, l);
  Json report;
  report["protocol"] = name;
  report["l"] = l;
  const Json body = ml::json_of(d);
  for (const auto& [k, v] : body.items()) report[k] = v;
  emit(report, opts.jsonPath);
  return 0;
}

int cmd_decode(const std::string& alphaText, const std::string& name,
               const CommonOpts& opts) {
  ml::GammaParams g;
  if (!resolve_gammas(opts, &g)) return 2;
  NamedProtocol np = make_protocol(name, g);
  std::vector<ml::cx> alpha;
  std::stringstream ss(alphaText);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    ml::cx v;
    if (!parse_gamma(tok, &v)) {
      std::cerr << "cannot parse --alpha entry '" << tok << "'\n";
      return 2;
    }
    alpha.push_back(v);
  }
  if (static_cast<int>(alpha.size()) != np.instance.D) {
    std::cerr << "--alpha needs " << np.instance.D << " comma-separated entries\n";
    return 2;
  }
  const ml::RunReport rep = ml::decode_superposition(np.protocol, np.instance, alpha);
  Json report;
  report["alpha"] = Json::array();
  for (const ml::cx& a : alpha) report["alpha"].push_back(ml::json_of_complex(a));
  const Json body = ml::json_of(rep, false);
  for (const auto& [k, v] : body.items()) report[k] = v;
  emit(report, opts.jsonPath);
  return 0;
}

int cmd_search(const std::string& instName, ml::SearchConfig cfg,
               const CommonOpts& opts) {
  ml::GammaParams g;
  if (!resolve_gammas(opts, &g)) return 2;
  ml::MergeInstance inst = instName == "psi" ? ml::build_instance(g)
                           : instName == "trivial" ? ml::trivial_instance()
                                                   : ml::elimination_instance();
  cfg.threads = opts.threads;
  const ml::SearchReport rep = ml::optimize_one_way_zero_cost(inst, cfg);
  Json report;
  report["instance"] = instName;
  const Json body = ml::json_of(rep, cfg);
  for (const auto& [k, v] : body.items()) report[k] = v;
  emit(report, opts.jsonPath);
  return 0;
}

int cmd_export(const std::string& outPath, const std::string& kiPath,
               const CommonOpts& opts) {
  ml::GammaParams g;
  if (!resolve_gammas(opts, &g)) return 2;
  const ml::MergeInstance inst = ml::build_instance(g);
  {
    std::ofstream f(outPath, std::ios::binary);
    if (!f) {
      std::cerr << "cannot open '" << outPath << "' for writing\n";
      return 2;
    }
    f << ml::dump_stable(ml::json_of(inst));
  }
  Json manifest;
  manifest["out"] = outPath;
  if (!kiPath.empty()) {
    std::ofstream f(kiPath, std::ios::binary);
    if (!f) {
      std::cerr << "cannot open '" << kiPath << "' for writing\n";
      return 2;
    }
    f << ml::dump_stable(ml::json_of(ml::build_ki(g)));
    manifest["ki"] = kiPath;
  }
  emit(manifest, opts.jsonPath);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"One-shot state merging: protocol runs, verification, search"};
  app.require_subcommand(1);

  CommonOpts verifyOpts;
  CLI::App* verify = app.add_subcommand("verify", "Run the full invariant suite");
  add_gamma_flags(verify, &verifyOpts);
  add_json_flag(verify, &verifyOpts);
  verify->add_option("--threads", verifyOpts.threads,
                     "Accepted for symmetry; verification is deterministic");

  CommonOpts runOpts;
  std::string runName;
  bool runTrace = false, runStates = false;
  CLI::App* runCmd = app.add_subcommand("run", "Simulate a merging protocol");
  runCmd->add_option("protocol", runName, "twoway | oneway | elimination")
      ->required()
      ->check(CLI::IsMember({"twoway", "oneway", "elimination"}));
  runCmd->add_flag("--trace", runTrace, "One JSON line per branch before the report");
  runCmd->add_flag("--states", runStates, "Embed final branch states in the report");
  add_gamma_flags(runCmd, &runOpts);
  add_json_flag(runCmd, &runOpts);
  runCmd->add_option("--threads", runOpts.threads,
                     "Accepted for symmetry; simulation is deterministic");

  CommonOpts entropyOpts;
  CLI::App* entropy = app.add_subcommand("entropy", "Entropies of the instance");
  add_gamma_flags(entropy, &entropyOpts);
  add_json_flag(entropy, &entropyOpts);

  CommonOpts discOpts;
  int discL = 0;
  std::string discProto = "twoway";
  CLI::App* disc = app.add_subcommand("discriminate",
                                      "Identify which family member was sent");
  disc->add_option("l", discL, "Family index")->required();
  disc->add_option("--protocol", discProto, "twoway | oneway | elimination")
      ->check(CLI::IsMember({"twoway", "oneway", "elimination"}));
  add_gamma_flags(disc, &discOpts);
  add_json_flag(disc, &discOpts);

  CommonOpts decodeOpts;
  std::string decodeAlpha;
  std::string decodeProto = "twoway";
  CLI::App* decode = app.add_subcommand("decode",
                                        "Merge a superposition of family members");
  decode->add_option("--alpha", decodeAlpha,
                     "Comma-separated coefficients (normalized internally)")
      ->required();
  decode->add_option("--protocol", decodeProto, "twoway | oneway | elimination")
      ->check(CLI::IsMember({"twoway", "oneway", "elimination"}));
  add_gamma_flags(decode, &decodeOpts);
  add_json_flag(decode, &decodeOpts);

  CommonOpts searchOpts;
  std::string searchInst = "psi";
  ml::SearchConfig searchCfg;
  CLI::App* search = app.add_subcommand(
      "search", "Seesaw search for a zero-cost one-way decoder");
  search->add_option("--restarts", searchCfg.restarts, "Random restarts")
      ->check(CLI::PositiveNumber);
  search->add_option("--iterations", searchCfg.iterations, "Max ascent steps")
      ->check(CLI::PositiveNumber);
  search->add_option("--max-kraus", searchCfg.maxKraus, "Measurement outcomes");
  search->add_option("--seed", searchCfg.seed, "Base RNG seed")
      ->envname("MERGELAB_SEED");
  search->add_option("--tolerance", searchCfg.tolerance, "Stop when gain falls below");
  search->add_option("--threads", searchOpts.threads,
                     "Worker threads (0 = available parallelism)");
  search->add_option("--instance", searchInst, "psi | trivial | elimination")
      ->check(CLI::IsMember({"psi", "trivial", "elimination"}));
  add_gamma_flags(search, &searchOpts);
  add_json_flag(search, &searchOpts);

  CommonOpts exportOpts;
  std::string exportOut = "instance.json";
  std::string exportKi;
  CLI::App* exportCmd = app.add_subcommand("export", "Write the instance to JSON");
  exportCmd->add_option("--out", exportOut, "Instance output path");
  exportCmd->add_option("--ki", exportKi, "Also write the block decomposition here");
  add_gamma_flags(exportCmd, &exportOpts);
  add_json_flag(exportCmd, &exportOpts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(verify)) return cmd_verify(verifyOpts);
    if (app.got_subcommand(runCmd)) {
      return cmd_run(runName, runOpts, runTrace, runStates);
    }
    if (app.got_subcommand(entropy)) return cmd_entropy(entropyOpts);
    if (app.got_subcommand(disc)) return cmd_discriminate(discL, discProto, discOpts);
    if (app.got_subcommand(decode)) {
      return cmd_decode(decodeAlpha, decodeProto, decodeOpts);
    }
    if (app.got_subcommand(search)) {
      return cmd_search(searchInst, searchCfg, searchOpts);
    }
    if (app.got_subcommand(exportCmd)) {
      return cmd_export(exportOut, exportKi, exportOpts);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
