// Copyright 2026 The csgd-lab Authors. All Rights Reserved.
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
// =============================================================================

#include "csgd/config.h"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "csgd/types.h"

namespace csgd {

namespace {

std::string Trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void Fail(const std::string& source, int line,
                       const std::string& msg) {
  // line 0 marks a key injected by a sweep rather than read from the file
  const std::string where = line > 0 ? std::to_string(line) : "override";
  throw Error(ErrorCode::kConfig, source + ":" + where + ": " + msg);
}

struct Ctx {
  const std::string& source;
  const ConfigEntry& e;

  [[noreturn]] void Bad(const std::string& what) const {
    Fail(source, e.line, "key '" + e.key + "': " + what);
  }

  double Real() const {
    const char* s = e.value.c_str();
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(s, &end);
    if (end == s || *end != '\0' || errno == ERANGE || std::isnan(v))
      Bad("expected a real number, got '" + e.value + "'");
    return v;
  }

  std::int64_t Int() const {
    const char* s = e.value.c_str();
    char* end = nullptr;
    errno = 0;
    const long long v = std::strtoll(s, &end, 10);
    if (end == s || *end != '\0' || errno == ERANGE)
      Bad("expected an integer, got '" + e.value + "'");
    return v;
  }

  int PositiveInt() const {
    const auto v = Int();
    if (v < 1 || v > 1'000'000'000) Bad("must be a positive integer");
    return static_cast<int>(v);
  }

  bool Bool() const {
    if (e.value == "true" || e.value == "1" || e.value == "yes") return true;
    if (e.value == "false" || e.value == "0" || e.value == "no") return false;
    Bad("expected true or false, got '" + e.value + "'");
  }
};

void ApplyObjective(const std::string& src, const ConfigEntry& e,
                    ObjectiveSpec* o) {
  const Ctx c{src, e};
  if (e.key == "kind") {
    try {
      o->kind = ParseObjectiveKind(e.value);
    } catch (const Error& err) {
      c.Bad(err.what());
    }
  } else if (e.key == "n") {
    o->n = c.PositiveInt();
  } else if (e.key == "d") {
    o->d = c.PositiveInt();
  } else if (e.key == "feature_std") {
    o->feature_std = c.Real();
  } else if (e.key == "mu_floor") {
    o->mu_floor = c.Real();
  } else if (e.key == "seed") {
    const auto v = c.Int();
    if (v < 0) c.Bad("seed must be nonnegative");
    o->seed = static_cast<std::uint64_t>(v);
  } else if (e.key == "curvatures") {
    o->curvatures.clear();
    for (const auto& item : SplitList(e.value)) {
      ConfigEntry sub{e.key, item, e.line};
      o->curvatures.push_back(Ctx{src, sub}.Real());
    }
  } else if (e.key == "curvature_law") {
    if (e.value != "inverse_pow2" && e.value != "constant")
      c.Bad("expected inverse_pow2 or constant");
    o->curvature_law = e.value;
  } else if (e.key == "curvature_exponent") {
    o->curvature_exponent = c.Real();
  } else {
    Fail(src, e.line, "unknown key '" + e.key + "' in [objective]");
  }
}

Algorithm ParseAlgorithm(const Ctx& c) {
  const auto& v = c.e.value;
  if (v == "csgd_asss") return Algorithm::kCsgdAsss;
  if (v == "scaled_gd") return Algorithm::kScaledGd;
  if (v == "nonadaptive_csgd") return Algorithm::kNonadaptiveCsgd;
  if (v == "sgd_armijo") return Algorithm::kSgdArmijo;
  if (v == "dcsgd_asss") return Algorithm::kDcsgdAsss;
  c.Bad("unknown algorithm '" + v + "'");
}

void ApplyAlgorithm(const std::string& src, const ConfigEntry& e,
                    AlgorithmSpec* a) {
  const Ctx c{src, e};
  auto& ar = a->armijo;
  if (e.key == "name") a->name = ParseAlgorithm(c);
  else if (e.key == "sigma") ar.sigma = c.Real();
  else if (e.key == "rho") ar.rho = c.Real();
  else if (e.key == "omega") ar.omega = c.Real();
  else if (e.key == "scale_a") ar.scale_a = c.Real();
  else if (e.key == "alpha_max_init") ar.alpha_max_init = c.Real();
  else if (e.key == "alpha_max_cap") ar.alpha_max_cap = c.Real();
  else if (e.key == "max_backtracks") ar.max_backtracks = c.PositiveInt();
  else if (e.key == "alpha_max_policy") {
    try {
      ar.policy = ParseAlphaMaxPolicy(e.value);
    } catch (const Error& err) {
      c.Bad(err.what());
    }
  } else if (e.key == "k") {
    a->k = c.PositiveInt();
  } else if (e.key == "gamma") {
    a->gamma = c.Real();
    if (!(a->gamma > 0.0 && a->gamma <= 1.0)) c.Bad("gamma must lie in (0,1]");
  } else if (e.key == "eta_fixed") {
    a->eta_fixed = c.Real();
    a->has_eta_fixed = true;
  } else if (e.key == "workers") {
    a->workers = c.PositiveInt();
  } else if (e.key == "batch") {
    a->batch = c.PositiveInt();
  } else if (e.key == "parallel_workers") {
    a->parallel_workers = c.Bool();
  } else {
    Fail(src, e.line, "unknown key '" + e.key + "' in algorithm section");
  }
}

void ApplyRun(const std::string& src, const ConfigEntry& e, RunSpec* r) {
  const Ctx c{src, e};
  if (e.key == "T") {
    r->T = c.PositiveInt();
  } else if (e.key == "passes") {
    r->passes = c.Real();
    if (!(r->passes > 0.0)) c.Bad("passes must be positive");
  } else if (e.key == "seeds") {
    try {
      r->seeds = ParseSeedList(e.value);
    } catch (const Error& err) {
      c.Bad(err.what());
    }
  } else if (e.key == "x0") {
    if (e.value != "zeros" && e.value != "ones" &&
        e.value.rfind("gaussian:", 0) != 0)
      c.Bad("expected zeros, ones or gaussian:<seed>");
    r->x0 = e.value;
  } else if (e.key == "output_dir") {
    if (e.value.empty()) c.Bad("empty path");
    r->output_dir = e.value;
  } else if (e.key == "store_iterates") {
    r->store_iterates = c.Bool();
  } else {
    Fail(src, e.line, "unknown key '" + e.key + "' in [run]");
  }
}

void CheckAlgorithm(const std::string& src, int line, const std::string& who,
                    const AlgorithmSpec& a) {
  auto bad = [&](const std::string& m) { Fail(src, line, who + ": " + m); };
  if (a.name == Algorithm::kNonadaptiveCsgd && !a.has_eta_fixed)
    bad("nonadaptive_csgd requires eta_fixed");
  if (a.name != Algorithm::kNonadaptiveCsgd && a.has_eta_fixed)
    bad("eta_fixed only applies to nonadaptive_csgd");
  if (a.name == Algorithm::kDcsgdAsss && a.workers < 1)
    bad("dcsgd_asss requires workers");
  if (a.name != Algorithm::kDcsgdAsss && a.workers > 0)
    bad("workers only applies to dcsgd_asss");
  if (a.k > 0 && a.gamma > 0.0) bad("give k or gamma, not both");
  if (a.name != Algorithm::kNonadaptiveCsgd) {
    try {
      a.armijo.Validate();
    } catch (const Error& e) {
      bad(e.what());
    }
  }
}

}  // namespace

void RawConfig::Set(const std::string& section, const std::string& key,
                    const std::string& value) {
  for (auto& s : sections) {
    if (s.name != section) continue;
    for (auto& e : s.entries)
      if (e.key == key) {
        e.value = value;
        return;
      }
    s.entries.push_back({key, value, 0});
    return;
  }
  sections.push_back({section, "", 0, {{key, value, 0}}});
}

RawConfig ParseConfigText(const std::string& text, const std::string& source) {
  RawConfig raw;
  raw.source = source;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = Trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') Fail(source, lineno, "unterminated section");
      std::string head = Trim(line.substr(1, line.size() - 2));
      ConfigSection sec;
      sec.line = lineno;
      const auto sp = head.find_first_of(" \t");
      if (sp != std::string::npos) {
        sec.name = head.substr(0, sp);
        sec.label = Trim(head.substr(sp));
      } else {
        sec.name = head;
      }
      if (sec.name == "variant") {
        if (sec.label.empty()) Fail(source, lineno, "variant needs a name");
        for (const auto& s : raw.sections)
          if (s.name == "variant" && s.label == sec.label)
            Fail(source, lineno, "duplicate variant '" + sec.label + "'");
      } else if (sec.name == "objective" || sec.name == "algorithm" ||
                 sec.name == "run") {
        if (!sec.label.empty())
          Fail(source, lineno, "section [" + sec.name + "] takes no label");
        for (const auto& s : raw.sections)
          if (s.name == sec.name)
            Fail(source, lineno, "duplicate section [" + sec.name + "]");
      } else {
        Fail(source, lineno, "unknown section [" + sec.name + "]");
      }
      raw.sections.push_back(std::move(sec));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      Fail(source, lineno, "expected 'key = value'");
    if (raw.sections.empty())
      Fail(source, lineno, "key outside of any section");
    ConfigEntry e{Trim(line.substr(0, eq)), Trim(line.substr(eq + 1)), lineno};
    if (e.key.empty()) Fail(source, lineno, "empty key");
    for (const auto& prev : raw.sections.back().entries)
      if (prev.key == e.key)
        Fail(source, lineno, "duplicate key '" + e.key + "'");
    raw.sections.back().entries.push_back(std::move(e));
  }
  return raw;
}

RawConfig LoadConfigFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kConfig, path + ": cannot open");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ParseConfigText(ss.str(), path);
}

ExperimentConfig BuildConfig(const RawConfig& raw) {
  ExperimentConfig cfg;
  cfg.source = raw.source;
  AlgorithmSpec base;
  const ConfigSection* algo = nullptr;
  bool have_objective = false;
  for (const auto& s : raw.sections) {
    if (s.name == "objective") {
      have_objective = true;
      for (const auto& e : s.entries) ApplyObjective(raw.source, e, &cfg.objective);
    } else if (s.name == "run") {
      for (const auto& e : s.entries) ApplyRun(raw.source, e, &cfg.run);
    } else if (s.name == "algorithm") {
      algo = &s;
      for (const auto& e : s.entries) ApplyAlgorithm(raw.source, e, &base);
    }
  }
  if (!have_objective) Fail(raw.source, 1, "missing [objective] section");
  if (!algo) Fail(raw.source, 1, "missing [algorithm] section");
  if (cfg.run.T == 0 && cfg.run.passes == 0.0)
    Fail(raw.source, 1, "[run] needs T or passes");
  if (cfg.run.T > 0 && cfg.run.passes > 0.0)
    Fail(raw.source, 1, "[run] takes T or passes, not both");

  for (const auto& s : raw.sections) {
    if (s.name != "variant") continue;
    Variant v{s.label, base};
    for (const auto& e : s.entries) ApplyAlgorithm(raw.source, e, &v.algorithm);
    CheckAlgorithm(raw.source, s.line, "variant " + s.label, v.algorithm);
    cfg.variants.push_back(std::move(v));
  }
  if (cfg.variants.empty()) {
    CheckAlgorithm(raw.source, algo->line, "[algorithm]", base);
    cfg.variants.push_back({"main", base});
  }
  // Surface objective errors at load time rather than mid-run.
  const auto& o = cfg.objective;
  if (o.kind == ObjectiveKind::kDiagQuadratic) {
    if (o.curvatures.empty() && o.curvature_law.empty())
      Fail(raw.source, 1, "diag_quadratic needs curvatures or curvature_law");
  } else if (!o.curvatures.empty() || !o.curvature_law.empty()) {
    Fail(raw.source, 1, "curvatures only apply to diag_quadratic");
  }
  return cfg;
}

ExperimentConfig LoadExperiment(const std::string& path) {
  return BuildConfig(LoadConfigFile(path));
}

FiniteSumObjective BuildObjective(const ObjectiveSpec& spec) {
  switch (spec.kind) {
    case ObjectiveKind::kDiagQuadratic: {
      if (!spec.curvatures.empty()) return MakeDiagQuadratic(spec.curvatures);
      std::vector<double> c(spec.d);
      for (int j = 0; j < spec.d; ++j)
        c[j] = spec.curvature_law == "inverse_pow2"
                   ? std::ldexp(1.0, -(j + 1))
                   : std::exp2(-spec.curvature_exponent);
      return MakeDiagQuadratic(c);
    }
    case ObjectiveKind::kInterpolatedRegression:
      return MakeInterpolatedRegression(spec.n, spec.d, spec.feature_std,
                                        spec.seed);
    case ObjectiveKind::kStronglyConvexMix:
      return MakeStronglyConvexMix(spec.n, spec.d, spec.mu_floor, spec.seed);
  }
  throw Error(ErrorCode::kInvalidSpec, "unknown objective kind");
}

const char* AlgorithmName(Algorithm a) {
  switch (a) {
    case Algorithm::kCsgdAsss: return "csgd_asss";
    case Algorithm::kScaledGd: return "scaled_gd";
    case Algorithm::kNonadaptiveCsgd: return "nonadaptive_csgd";
    case Algorithm::kSgdArmijo: return "sgd_armijo";
    case Algorithm::kDcsgdAsss: return "dcsgd_asss";
  }
  return "unknown";
}

int AlgorithmSpec::ResolveK(int d) const {
  if (k > 0) {
    if (k > d)
      throw Error(ErrorCode::kInvalidSpec,
                  "k=" + std::to_string(k) + " exceeds d=" + std::to_string(d));
    return k;
  }
  if (gamma > 0.0)
    return std::max(1, static_cast<int>(std::lround(gamma * d)));
  return d;
}

std::int64_t RunSpec::ResolveT(int n, int batch) const {
  if (T > 0) return T;
  return static_cast<std::int64_t>(
      std::ceil(passes * static_cast<double>(n) / batch));
}

std::vector<std::string> SplitList(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) {
    item = Trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<std::uint64_t> ParseSeedList(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  auto num = [](const std::string& s) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
    if (s.empty() || *end != '\0' || s[0] == '-')
      throw Error(ErrorCode::kConfig, "bad seed '" + s + "'");
    return static_cast<std::uint64_t>(v);
  };
  for (const auto& item : SplitList(text)) {
    const auto dash = item.find('-');
    if (dash == std::string::npos) {
      seeds.push_back(num(item));
      continue;
    }
    const auto lo = num(Trim(item.substr(0, dash)));
    const auto hi = num(Trim(item.substr(dash + 1)));
    if (hi < lo || hi - lo > 100000)
      throw Error(ErrorCode::kConfig, "bad seed range '" + item + "'");
    for (auto s = lo; s <= hi; ++s) seeds.push_back(s);
  }
  if (seeds.empty()) throw Error(ErrorCode::kConfig, "empty seed list");
  return seeds;
}

}  // namespace csgd
