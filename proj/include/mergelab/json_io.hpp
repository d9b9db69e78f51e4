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

#ifndef MERGELAB_JSON_IO_HPP
#define MERGELAB_JSON_IO_HPP

#include <string>

#include "json.hpp"
#include "mergelab/koashi_imoto.hpp"
#include "mergelab/linalg.hpp"
#include "mergelab/measure.hpp"
#include "mergelab/protocols.hpp"
#include "mergelab/search.hpp"
#include "mergelab/states.hpp"

// JSON serialization. States carry {"dims","labels","re","im"}, operators
// {"dims","codims","re","im"} (row-major, codomain rows). Every double is
// rounded to 12 significant digits before dumping so that regression diffs
// and determinism checks compare stable bytes.

namespace mergelab {

using Json = nlohmann::ordered_json;

double round12(double x);
Json json_of_complex(cx v);  // {"re":..., "im":...}

Json json_of(const PureState& s);
Json json_of(const DensityOperator& rho);
Json json_of(const LinearMap& m);
Json json_of(const KrausFamily& f);
Json json_of(const Protocol& p);
Json json_of(const RunReport& r, bool includeStates = false);
Json json_of(const KIDecomposition& ki);
Json json_of(const MergeInstance& inst);
Json json_of(const SearchConfig& cfg);
Json json_of(const SearchReport& rep, const SearchConfig& cfg);
Json json_of(const DiscriminationReport& d);

// 2-space indent plus trailing newline; insertion-ordered keys.
std::string dump_stable(const Json& j);

}  // namespace mergelab

#endif  // MERGELAB_JSON_IO_HPP
