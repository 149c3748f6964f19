#include "gmix/bench/config.hpp"

#include "gmix/bench/models.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace gmix::bench {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

[[noreturn]] void fail(int line, const std::string& msg) {
  throw ConfigError("config line " + std::to_string(line) + ": " + msg);
}

long long to_int(const std::string& v, int line) {
  long long out = 0;
  const auto* end = v.data() + v.size();
  const auto r = std::from_chars(v.data(), end, out);
  if (r.ec != std::errc() || r.ptr != end) fail(line, "expected an integer, got '" + v + "'");
  return out;
}

std::uint64_t to_u64(const std::string& v, int line) {
  std::uint64_t out = 0;
  const auto* end = v.data() + v.size();
  const auto r = std::from_chars(v.data(), end, out);
  if (r.ec != std::errc() || r.ptr != end) fail(line, "expected a nonnegative integer, got '" + v + "'");
  return out;
}

double to_real(const std::string& v, int line) {
  // from_chars for double is missing on older toolchains.
  char* end = nullptr;
  const double out = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size() || !std::isfinite(out))
    fail(line, "expected a finite number, got '" + v + "'");
  return out;
}

bool to_bool(const std::string& v, int line) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  fail(line, "expected true or false, got '" + v + "'");
}

std::string fmt_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

double ExperimentConfig::c1() const {
  if (C1) return *C1;
  return (experiment == "k02_k3" || experiment == "dirichlet") ? 2.0 : 1.0;
}

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig c;
  std::set<std::string> seen;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string s = trim(raw);
    if (s.empty() || s[0] == '#') continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos) fail(line, "expected key=value");
    const std::string key = trim(std::string_view(s).substr(0, eq));
    const std::string val = trim(std::string_view(s).substr(eq + 1));
    if (!seen.insert(key).second) fail(line, "duplicate key '" + key + "'");
    if (key == "experiment") {
      if (!is_known_model(val)) fail(line, "unknown experiment '" + val + "'");
      c.experiment = val;
    } else if (key == "k") {
      c.k = to_int(val, line);
      if (c.k < 0) fail(line, "k must be >= 0");
    } else if (key == "d") {
      c.d = to_int(val, line);
      if (c.d < 1) fail(line, "d must be >= 1");
    } else if (key == "n") {
      c.n.clear();
      for (const auto& item : split_list(val)) c.n.push_back(to_int(item, line));
      if (c.n.empty()) fail(line, "n list is empty");
      for (std::size_t i = 0; i < c.n.size(); ++i) {
        if (c.n[i] < 1) fail(line, "n entries must be positive");
        if (i > 0 && c.n[i] <= c.n[i - 1]) fail(line, "n entries must be increasing");
      }
    } else if (key == "reps") {
      const auto r = to_int(val, line);
      if (r < 1) fail(line, "reps must be >= 1");
      c.reps = static_cast<int>(r);
    } else if (key == "seed") {
      c.seed = to_u64(val, line);
    } else if (key == "R") {
      c.R = to_real(val, line);
      if (!(c.R > 0)) fail(line, "R must be positive");
    } else if (key == "C1") {
      c.C1 = to_real(val, line);
      if (!(*c.C1 > 0)) fail(line, "C1 must be positive");
    } else if (key == "C2") {
      c.C2 = to_real(val, line);
      if (!(c.C2 > 0)) fail(line, "C2 must be positive");
    } else if (key == "methods") {
      c.methods = split_list(val);
      if (c.methods.empty()) fail(line, "methods list is empty");
      for (const auto& m : c.methods)
        if (m != "dmm" && m != "em" && m != "density2gm" && m != "densitykgm")
          fail(line, "unknown method '" + m + "'");
    } else if (key == "center") {
      c.center = to_bool(val, line);
    } else if (key == "split") {
      c.split = to_bool(val, line);
    } else if (key == "hellinger") {
      c.hellinger = to_bool(val, line);
    } else if (key == "mc_draws") {
      c.mc_draws = to_int(val, line);
      if (c.mc_draws < 1000) fail(line, "mc_draws must be >= 1000");
    } else if (key == "timing") {
      c.timing = to_bool(val, line);
    } else if (key == "model_file") {
      c.model_file = val;
    } else if (key == "eps_scale") {
      c.eps_scale = to_real(val, line);
      if (!(c.eps_scale > 0)) fail(line, "eps_scale must be positive");
    } else if (key == "budget") {
      c.budget = to_real(val, line);
      if (!(c.budget > 0)) fail(line, "budget must be positive");
    } else {
      fail(line, "unknown key '" + key + "'");
    }
  }
  if (c.experiment == "custom" && c.model_file.empty())
    throw ConfigError("experiment=custom needs model_file");
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

std::string to_text(const ExperimentConfig& c) {
  std::ostringstream o;
  o << "experiment=" << c.experiment << "\n";
  o << "k=" << c.k << "\n";
  o << "d=" << c.d << "\n";
  o << "n=";
  for (std::size_t i = 0; i < c.n.size(); ++i) o << (i ? "," : "") << c.n[i];
  o << "\nreps=" << c.reps << "\n";
  o << "seed=" << c.seed << "\n";
  o << "R=" << fmt_real(c.R) << "\n";
  if (c.C1) o << "C1=" << fmt_real(*c.C1) << "\n";
  o << "C2=" << fmt_real(c.C2) << "\n";
  o << "methods=";
  for (std::size_t i = 0; i < c.methods.size(); ++i) o << (i ? "," : "") << c.methods[i];
  o << "\ncenter=" << (c.center ? "true" : "false") << "\n";
  o << "split=" << (c.split ? "true" : "false") << "\n";
  o << "hellinger=" << (c.hellinger ? "true" : "false") << "\n";
  o << "mc_draws=" << c.mc_draws << "\n";
  o << "timing=" << (c.timing ? "true" : "false") << "\n";
  if (!c.model_file.empty()) o << "model_file=" << c.model_file << "\n";
  o << "eps_scale=" << fmt_real(c.eps_scale) << "\n";
  o << "budget=" << fmt_real(c.budget) << "\n";
  return o.str();
}

}  // namespace gmix::bench
