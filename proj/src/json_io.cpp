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

#include "mergelab/json_io.hpp"

#include <cstdio>
#include <cstdlib>

namespace mergelab {
namespace {

Json re_array(const CVec& v) {
  Json a = Json::array();
  for (const cx& z : v) a.push_back(round12(z.real()));
  return a;
}

Json im_array(const CVec& v) {
  Json a = Json::array();
  for (const cx& z : v) a.push_back(round12(z.imag()));
  return a;
}

const char* party_string(Party p) { return p == Party::A ? "A" : "B"; }

Json json_of_key(const std::vector<int>& key) {
  Json a = Json::array();
  for (int k : key) a.push_back(k);
  return a;
}

}  // namespace

double round12(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return std::strtod(buf, nullptr);
}

Json json_of_complex(cx v) {
  return Json{{"re", round12(v.real())}, {"im", round12(v.imag())}};
}

Json json_of(const PureState& s) {
  Json j;
  j["dims"] = s.dims();
  j["labels"] = s.labels();
  j["re"] = re_array(s.amps());
  j["im"] = im_array(s.amps());
  return j;
}

Json json_of(const DensityOperator& rho) {
  Json j;
  j["dims"] = rho.dims();
  j["labels"] = rho.labels();
  j["re"] = re_array(rho.mat());
  j["im"] = im_array(rho.mat());
  return j;
}

Json json_of(const LinearMap& m) {
  Json j;
  j["dims"] = m.domain;
  j["codims"] = m.codomain;
  j["re"] = re_array(m.mat);
  j["im"] = im_array(m.mat);
  return j;
}

Json json_of(const KrausFamily& f) {
  Json j;
  if (f.actsOn.size() == 1) {
    j["actsOn"] = f.actsOn[0];
  } else {
    j["actsOn"] = f.actsOn;
  }
  Json ops = Json::array();
  for (const LinearMap& op : f.operators) ops.push_back(json_of(op));
  j["operators"] = std::move(ops);
  if (!f.outcomeLabels.empty()) j["outcomeLabels"] = f.outcomeLabels;
  return j;
}

Json json_of(const Protocol& p) {
  Json j;
  j["name"] = p.name;
  j["resourceK"] = p.resourceK;
  Json steps = Json::array();
  for (const Step& step : p.steps) {
    Json s;
    if (const auto* m = std::get_if<MeasureNode>(&step)) {
      s["type"] = "measure";
      s["party"] = party_string(m->party);
      if (!m->produces.empty()) s["produces"] = m->produces;
      Json fams = Json::array();
      for (const auto& [key, fam] : m->families) {
        fams.push_back(Json{{"key", json_of_key(key)}, {"family", json_of(fam)}});
      }
      s["families"] = std::move(fams);
    } else if (const auto* c = std::get_if<CorrectNode>(&step)) {
      s["type"] = "correct";
      s["party"] = party_string(c->party);
      s["actsOn"] = c->actsOn;
      s["produces"] = c->produces;
      Json isos = Json::array();
      for (const auto& [key, iso] : c->isometries) {
        isos.push_back(Json{{"key", json_of_key(key)}, {"isometry", json_of(iso)}});
      }
      s["isometries"] = std::move(isos);
    } else {
      const auto& msg = std::get<MessageNode>(step);
      s["type"] = "message";
      s["from"] = party_string(msg.from);
      s["to"] = party_string(msg.to);
    }
    steps.push_back(std::move(s));
  }
  j["steps"] = std::move(steps);
  return j;
}

Json json_of(const RunReport& r, bool includeStates) {
  Json j;
  j["protocol"] = r.protocol;
  j["direction"] = direction_string(r.direction);
  j["costBits"] = r.costBits;
  j["totalProb"] = round12(r.totalProb);
  j["minFidelitySq"] = round12(r.minFidelitySq);
  j["avgFidelitySq"] = round12(r.avgFidelitySq);
  j["epsilonAchieved"] = round12(r.epsilonAchieved);
  Json branches = Json::array();
  for (const BranchResult& b : r.branches) {
    Json bj;
    bj["transcript"] = b.transcript;
    bj["probability"] = round12(b.probability);
    bj["fidelitySq"] = round12(b.fidelitySq);
    if (includeStates) bj["state"] = json_of(b.finalState);
    branches.push_back(std::move(bj));
  }
  j["branches"] = std::move(branches);
  return j;
}

Json json_of(const KIDecomposition& ki) {
  Json j;
  j["flagDim"] = ki.flagDim;
  Json blocks = Json::array();
  for (const KIBlock& b : ki.blocks) {
    blocks.push_back(Json{{"prob", round12(b.prob)},
                          {"omega", json_of(b.omega)},
                          {"phi", json_of(b.phi)}});
  }
  j["blocks"] = std::move(blocks);
  j["embedA"] = json_of(ki.embedA);
  j["embedB"] = json_of(ki.embedB);
  return j;
}

Json json_of(const MergeInstance& inst) {
  Json j;
  j["D"] = inst.D;
  j["gammas"] = Json{{"gamma1", json_of_complex(inst.gammas.gamma1)},
                     {"gamma2", json_of_complex(inst.gammas.gamma2)}};
  j["psi"] = json_of(inst.psi);
  Json fam = Json::array();
  for (const PureState& s : inst.family) fam.push_back(json_of(s));
  j["family"] = std::move(fam);
  return j;
}

Json json_of(const SearchConfig& cfg) {
  Json j;
  j["restarts"] = cfg.restarts;
  j["maxKraus"] = cfg.maxKraus;
  j["iterations"] = cfg.iterations;
  j["seed"] = cfg.seed;
  j["tolerance"] = round12(cfg.tolerance);
  j["threads"] = cfg.threads;
  return j;
}

Json json_of(const SearchReport& rep, const SearchConfig& cfg) {
  Json j;
  j["config"] = json_of(cfg);
  j["bestFidelitySq"] = round12(rep.bestFidelitySq);
  j["gapEstimate"] = round12(rep.gapEstimate);
  j["bestRestart"] = rep.bestRestart;
  Json per = Json::array();
  for (const RestartResult& r : rep.perRestart) {
    per.push_back(Json{{"restart", r.restart},
                       {"seed", r.seed},
                       {"iterations", r.iterations},
                       {"best", round12(r.best)}});
  }
  j["perRestart"] = std::move(per);
  j["bestKraus"] = json_of(rep.bestKraus);
  return j;
}

Json json_of(const DiscriminationReport& d) {
  Json j;
  j["outcome"] = d.outcome;
  j["probability"] = round12(d.probability);
  Json dist = Json::array();
  for (double p : d.distribution) dist.push_back(round12(p));
  j["distribution"] = std::move(dist);
  return j;
}

std::string dump_stable(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace mergelab
