#include "gmix/bench/summarize.hpp"

#include "gmix/bench/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

namespace gmix::bench {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

[[noreturn]] void bad(int line, const std::string& msg) {
  throw IoError("results line " + std::to_string(line) + ": " + msg);
}

double real_field(const std::string& s, int line, const char* name) {
  if (s == "nan") return std::nan("");
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) bad(line, std::string("bad ") + name + " '" + s + "'");
  return v;
}

template <typename T>
T int_field(const std::string& s, int line, const char* name) {
  T v{};
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || r.ec != std::errc() || r.ptr != s.data() + s.size())
    bad(line, std::string("bad ") + name + " '" + s + "'");
  return v;
}

void mean_std(const std::vector<double>& v, double& mean, double& sd) {
  mean = 0.0;
  sd = 0.0;
  if (v.empty()) return;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  if (v.size() < 2) return;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
}

}  // namespace

std::vector<ResultRecord> parse_results(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  if (!std::getline(in, line)) throw IoError("results: empty file");
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kResultsHeader) bad(1, "header does not match the results schema");
  std::vector<ResultRecord> out;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto f = split_csv(line);
    if (f.size() != 11) bad(line_no, "expected 11 fields, got " + std::to_string(f.size()));
    ResultRecord r;
    r.experiment = f[0];
    r.model = f[1];
    r.method = f[2];
    r.k = int_field<Index>(f[3], line_no, "k");
    r.d = int_field<Index>(f[4], line_no, "d");
    r.n = int_field<Index>(f[5], line_no, "n");
    r.rep = int_field<int>(f[6], line_no, "rep");
    r.seed = int_field<std::uint64_t>(f[7], line_no, "seed");
    r.w1_error = real_field(f[8], line_no, "w1_error");
    if (!f[9].empty()) r.hellinger = real_field(f[9], line_no, "hellinger");
    r.wall_time_s = real_field(f[10], line_no, "wall_time_s");
    if (r.experiment.empty() || r.method.empty()) bad(line_no, "empty experiment or method");
    if (r.n < 1) bad(line_no, "n must be positive");
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<ResultRecord> read_results(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path + "' for reading");
  std::stringstream ss;
  ss << f.rdbuf();
  try {
    return parse_results(ss.str());
  } catch (const IoError& e) {
    throw IoError(path + ": " + e.what());
  }
}

std::vector<SummaryRow> summarize(const std::vector<ResultRecord>& records) {
  // Group order: (experiment, method) by first appearance, then n ascending.
  std::vector<std::pair<std::string, std::string>> groups;
  std::map<std::pair<std::string, std::string>, std::map<Index, std::vector<const ResultRecord*>>> g;
  for (const auto& r : records) {
    const auto key = std::make_pair(r.experiment, r.method);
    if (!g.count(key)) groups.push_back(key);
    g[key][r.n].push_back(&r);
  }
  std::vector<SummaryRow> out;
  for (const auto& key : groups) {
    for (const auto& [n, rows] : g[key]) {
      SummaryRow s;
      s.experiment = key.first;
      s.method = key.second;
      s.n = n;
      std::vector<double> w1, hel;
      double time = 0.0;
      for (const auto* r : rows) {
        time += r->wall_time_s;
        if (std::isnan(r->w1_error)) {
          ++s.failed;
          continue;
        }
        w1.push_back(r->w1_error);
        if (r->hellinger) hel.push_back(*r->hellinger);
      }
      s.count = static_cast<Index>(w1.size());
      s.hellinger_count = static_cast<Index>(hel.size());
      mean_std(w1, s.mean_w1, s.std_w1);
      mean_std(hel, s.mean_hellinger, s.std_hellinger);
      s.mean_wall_time_s = time / static_cast<double>(rows.size());
      out.push_back(std::move(s));
    }
  }
  return out;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("slope needs >= 2 points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0) || !(y[i] > 0)) throw InvalidArgument("log-log slope needs positive values");
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  if (sxx == 0.0) throw InvalidArgument("slope needs distinct x values");
  return sxy / sxx;
}

std::vector<SlopeRow> fit_slopes(const std::vector<SummaryRow>& rows) {
  std::vector<SlopeRow> out;
  std::size_t i = 0;
  while (i < rows.size()) {
    std::size_t j = i;
    while (j < rows.size() && rows[j].experiment == rows[i].experiment &&
           rows[j].method == rows[i].method)
      ++j;
    for (const char* metric : {"w1_error", "hellinger"}) {
      const bool hel = std::string(metric) == "hellinger";
      std::vector<double> xs, ys;
      for (std::size_t q = i; q < j; ++q) {
        const double v = hel ? rows[q].mean_hellinger : rows[q].mean_w1;
        const Index cnt = hel ? rows[q].hellinger_count : rows[q].count;
        if (cnt > 0 && v > 0) {
          xs.push_back(static_cast<double>(rows[q].n));
          ys.push_back(v);
        }
      }
      if (xs.size() >= 2)
        out.push_back({rows[i].experiment, rows[i].method, metric, loglog_slope(xs, ys),
                       static_cast<Index>(xs.size())});
    }
    i = j;
  }
  return out;
}

std::string slopes_path_for(const std::string& out_path) {
  const auto slash = out_path.find_last_of('/');
  const auto dot = out_path.find_last_of('.');
  const bool has_ext = dot != std::string::npos && (slash == std::string::npos || dot > slash);
  return (has_ext ? out_path.substr(0, dot) : out_path) + "_slopes.csv";
}

void write_summary(const std::string& out_path, const std::vector<SummaryRow>& rows,
                   const std::vector<SlopeRow>& slopes) {
  {
    std::ofstream f(out_path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open '" + out_path + "' for writing");
    f << "experiment,method,n,count,failed,mean_w1,std_w1,hellinger_count,mean_hellinger,"
         "std_hellinger,mean_wall_time_s\n";
    for (const auto& r : rows)
      f << r.experiment << "," << r.method << "," << r.n << "," << r.count << "," << r.failed << ","
        << format_real(r.mean_w1) << "," << format_real(r.std_w1) << "," << r.hellinger_count << ","
        << format_real(r.mean_hellinger) << "," << format_real(r.std_hellinger) << ","
        << format_real(r.mean_wall_time_s) << "\n";
    if (!f) throw IoError("write failed for '" + out_path + "'");
  }
  const std::string sp = slopes_path_for(out_path);
  std::ofstream f(sp, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open '" + sp + "' for writing");
  f << "experiment,method,metric,slope,points\n";
  for (const auto& s : slopes)
    f << s.experiment << "," << s.method << "," << s.metric << "," << format_real(s.slope) << ","
      << s.points << "\n";
  if (!f) throw IoError("write failed for '" + sp + "'");
}

}  // namespace gmix::bench
