// Copyright 2026 The hmimo Authors.
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

#include "hmimo/app/policy_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "hmimo/error.hpp"

namespace hmimo::app {

using Json = nlohmann::ordered_json;

void write_policy_json(std::ostream& os, const ControlPolicy& policy, int num_bs, int dim) {
  Json root;
  root["N"] = num_bs;
  root["K"] = policy.controls.empty() ? 0 : policy.controls.front().num_users();
  root["M"] = dim;
  Json controls = Json::array();
  for (std::size_t j = 0; j < policy.size(); ++j) {
    const auto& c = policy.controls[j];
    Json jc;
    jc["q"] = policy.probs[j];
    jc["selected"] = c.selected;
    jc["power"] = std::vector<double>(c.power.data(), c.power.data() + c.power.size());
    Json dims = Json::array();
    Json outer = Json::array();
    for (const auto& f : c.outer) {
      dims.push_back(f.cols());
      std::vector<double> re;
      std::vector<double> im;
      for (Eigen::Index col = 0; col < f.cols(); ++col) {
        for (Eigen::Index row = 0; row < f.rows(); ++row) {
          re.push_back(f(row, col).real());
          im.push_back(f(row, col).imag());
        }
      }
      outer.push_back(Json{{"rows", f.rows()}, {"cols", f.cols()}, {"re", re}, {"im", im}});
    }
    jc["outer_dims"] = dims;
    jc["outer"] = outer;
    controls.push_back(jc);
  }
  root["controls"] = controls;
  os << root.dump(2) << '\n';
}

ControlPolicy read_policy_json(std::istream& is) {
  ControlPolicy p;
  try {
    const Json root = Json::parse(is);
    const int K = root.at("K").get<int>();
    for (const auto& jc : root.at("controls")) {
      CompositeControl c;
      c.selected = jc.at("selected").get<std::vector<UserSet>>();
      const auto power = jc.at("power").get<std::vector<double>>();
      if (static_cast<int>(power.size()) != K) throw ValidationError("power vector length differs from K");
      c.power = Eigen::Map<const RVector>(power.data(), K);
      for (const auto& jf : jc.at("outer")) {
        const auto rows = jf.at("rows").get<Eigen::Index>();
        const auto cols = jf.at("cols").get<Eigen::Index>();
        const auto re = jf.at("re").get<std::vector<double>>();
        const auto im = jf.at("im").get<std::vector<double>>();
        if (static_cast<Eigen::Index>(re.size()) != rows * cols || im.size() != re.size()) {
          throw ValidationError("outer precoder entry count differs from rows * cols");
        }
        CMatrix f(rows, cols);
        for (Eigen::Index i = 0; i < rows * cols; ++i) {
          f(i % rows, i / rows) = cd(re[static_cast<std::size_t>(i)], im[static_cast<std::size_t>(i)]);
        }
        c.outer.push_back(std::move(f));
      }
      if (c.outer.size() != c.selected.size()) throw ValidationError("outer and selected lists differ in length");
      p.probs.push_back(jc.at("q").get<double>());
      p.rates.push_back(control_rates(c));
      p.controls.push_back(std::move(c));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed policy: ") + e.what());
  }
  return p;
}

ControlPolicy load_policy_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open policy file '" + path + "'");
  return read_policy_json(in);
}

}  // namespace hmimo::app
