// Copyright 2026 The mos Authors.
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

#include "mos/cli/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "mos/error.hpp"

namespace mos::cli {
namespace {

const std::set<std::string> kKeys = {
    "name", "regime", "trials", "seed",   "design",    "coef",
    "redraw_design",  "n",      "p",      "k0",        "snr_db",
    "sigma2",         "selectors", "workers", "out",   "svg"};

template <typename T>
T scalar(const YAML::Node& node, const std::string& field) {
  if (!node.IsScalar()) {
    throw ConfigError(field, "config field '" + field + "' must be a scalar");
  }
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError(field, "config field '" + field + "' has value '" +
                                 node.Scalar() + "' of the wrong type");
  }
}

template <typename T>
std::vector<T> scalar_or_list(const YAML::Node& node, const std::string& field) {
  std::vector<T> out;
  if (node.IsSequence()) {
    for (const auto& item : node) out.push_back(scalar<T>(item, field));
    if (out.empty()) {
      throw ConfigError(field, "config field '" + field + "' is an empty list");
    }
  } else {
    out.push_back(scalar<T>(node, field));
  }
  return out;
}

}  // namespace

RunConfig parse_run_config(const std::string& text,
                           const std::filesystem::path& base_dir,
                           const std::string& default_name) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError("", std::string("config is not valid YAML: ") + e.what());
  }
  if (!root.IsMap()) throw ConfigError("", "config must be a key/value mapping");
  for (const auto& kv : root) {
    const auto key = kv.first.as<std::string>();
    if (!kKeys.count(key)) {
      throw ConfigError(key, "config has unknown field '" + key + "'");
    }
  }

  RunConfig cfg;
  ExperimentSpec& spec = cfg.spec;
  const bool has_regime = static_cast<bool>(root["regime"]);
  if (has_regime) {
    const auto name = scalar<std::string>(root["regime"], "regime");
    auto base = find_regime(name);
    if (!base) {
      throw ConfigError("regime", "config field 'regime': unknown regime '" +
                                      name + "'");
    }
    spec = *base;
  } else {
    spec.name = default_name;
    for (const char* req : {"trials", "n", "p", "k0", "selectors"}) {
      if (!root[req]) {
        throw ConfigError(req, std::string("config is missing required field '") +
                                   req + "'");
      }
    }
    if (!root["snr_db"] && !root["sigma2"]) {
      throw ConfigError("snr_db",
                        "config is missing required field 'snr_db' (or 'sigma2')");
    }
  }

  if (root["name"]) spec.name = scalar<std::string>(root["name"], "name");
  if (root["trials"]) {
    const auto t = scalar<long long>(root["trials"], "trials");
    if (t < 1 || t > 100000000) {
      throw ConfigError("trials", "config field 'trials' must be in [1, 1e8]");
    }
    spec.trials = static_cast<int>(t);
  }
  if (root["seed"]) {
    spec.seed = scalar<std::uint64_t>(root["seed"], "seed");
    cfg.seed_set = true;
  }
  if (root["design"]) {
    const auto s = scalar<std::string>(root["design"], "design");
    auto d = parse_design_model(s);
    if (!d) {
      throw ConfigError("design", "config field 'design': unknown model '" + s +
                                      "'");
    }
    spec.design = *d;
  }
  if (root["coef"]) {
    const auto s = scalar<std::string>(root["coef"], "coef");
    auto c = parse_coef_kind(s);
    if (!c) {
      throw ConfigError("coef", "config field 'coef': unknown model '" + s + "'");
    }
    spec.coef = *c;
  }
  if (root["redraw_design"]) {
    spec.redraw_design = scalar<bool>(root["redraw_design"], "redraw_design");
  }
  if (root["sigma2"]) {
    const double s2 = scalar<double>(root["sigma2"], "sigma2");
    if (!(s2 >= 0.0)) {
      throw ConfigError("sigma2", "config field 'sigma2' must be >= 0");
    }
    spec.sigma2 = s2;
  }

  const bool any_axis = root["n"] || root["p"] || root["k0"] || root["snr_db"];
  if (any_axis) {
    for (const char* req : {"n", "p", "k0"}) {
      if (!root[req]) {
        throw ConfigError(req, std::string("config sets a grid but is missing '") +
                                   req + "'");
      }
    }
    const auto ns = scalar_or_list<int>(root["n"], "n");
    const auto ps = scalar_or_list<int>(root["p"], "p");
    const auto ks = scalar_or_list<int>(root["k0"], "k0");
    const auto snrs = root["snr_db"] ? scalar_or_list<double>(root["snr_db"], "snr_db")
                                     : std::vector<double>{0.0};
    spec.grid.clear();
    for (int n : ns) {
      for (int p : ps) {
        for (int k0 : ks) {
          for (double snr : snrs) spec.grid.push_back({n, p, k0, snr});
        }
      }
    }
  }

  if (root["selectors"]) {
    const YAML::Node sel = root["selectors"];
    if (!sel.IsSequence() || sel.size() == 0) {
      throw ConfigError("selectors",
                        "config field 'selectors' must be a nonempty list");
    }
    spec.selectors.clear();
    for (const auto& item : sel) {
      const auto label = scalar<std::string>(item, "selectors");
      auto parsed = parse_selector(label);
      if (!parsed) {
        throw ConfigError("selectors", "config field 'selectors': unknown selector '" +
                                           label + "'");
      }
      spec.selectors.push_back(*parsed);
    }
  }

  if (root["workers"]) {
    const int w = scalar<int>(root["workers"], "workers");
    if (w < 0) throw ConfigError("workers", "config field 'workers' must be >= 0");
    cfg.workers = w;
  }
  if (root["out"]) {
    cfg.out = base_dir / scalar<std::string>(root["out"], "out");
  }
  if (root["svg"]) {
    cfg.svg = base_dir / scalar<std::string>(root["svg"], "svg");
  }

  try {
    spec.validate();
  } catch (const DomainError& e) {
    const std::string msg = e.what();
    const auto colon = msg.find(':');
    throw ConfigError(colon == std::string::npos ? "" : msg.substr(0, colon),
                      "config is invalid: " + msg);
  }
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  auto base = path.parent_path();
  return parse_run_config(ss.str(), base.empty() ? "." : base,
                          path.stem().string());
}

}  // namespace mos::cli
