#include "gsbmi/io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "gsbmi/errors.hpp"

namespace gsbmi {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split_csv_row(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_finite_double(const std::string& s, long line_no) {
  const std::string t = trim(s);
  const std::string where = line_no > 0 ? "line " + std::to_string(line_no) + ": " : "";
  double v = 0.0;
  const auto* begin = t.data();
  const auto* end = t.data() + t.size();
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc{} || ptr != end)
    throw ParseError(where + "not a number: '" + t + "'", line_no);
  if (!std::isfinite(v)) throw ParseError(where + "non-finite value", line_no);
  return v;
}

int parse_group(const std::string& s, long line_no) {
  const std::string t = trim(s);
  if (t == "0") return 0;
  if (t == "1") return 1;
  throw ParseError("line " + std::to_string(line_no) + ": group must be 0 or 1, got '" + t + "'",
                   line_no);
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

// Shortest representation that round-trips the double exactly.
std::string fmt17(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

TwoSampleData load_samples_csv(const std::string& path) {
  const auto lines = read_lines(path);
  if (lines.empty()) throw SchemaError(path + ": empty file");
  const auto header = split_csv_row(lines[0]);
  long col_group = -1, col_y = -1;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == "group") col_group = static_cast<long>(i);
    if (header[i] == "y") col_y = static_cast<long>(i);
  }
  if (col_group < 0 || col_y < 0)
    throw SchemaError(path + ": header must contain 'group' and 'y' columns");
  std::vector<double> y0, y1;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    const long line_no = static_cast<long>(i) + 1;
    const auto row = split_csv_row(lines[i]);
    if (row.size() <= static_cast<std::size_t>(std::max(col_group, col_y)))
      throw ParseError("line " + std::to_string(line_no) + ": too few fields", line_no);
    const int g = parse_group(row[static_cast<std::size_t>(col_group)], line_no);
    const double v = parse_finite_double(row[static_cast<std::size_t>(col_y)], line_no);
    (g == 0 ? y0 : y1).push_back(v);
  }
  if (y0.size() < 2 || y1.size() < 2)
    throw OneGroupEmpty(path + ": need at least 2 observations in each group");
  return TwoSampleData::from_samples(std::move(y0), std::move(y1));
}

namespace {

std::vector<double> load_single_column(const std::string& path) {
  const auto lines = read_lines(path);
  if (lines.empty()) throw SchemaError(path + ": empty file");
  const auto header = split_csv_row(lines[0]);
  long col_y = -1;
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == "y") col_y = static_cast<long>(i);
  if (col_y < 0) throw SchemaError(path + ": header must contain a 'y' column");
  std::vector<double> out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    const long line_no = static_cast<long>(i) + 1;
    const auto row = split_csv_row(lines[i]);
    if (row.size() <= static_cast<std::size_t>(col_y))
      throw ParseError("line " + std::to_string(line_no) + ": too few fields", line_no);
    out.push_back(parse_finite_double(row[static_cast<std::size_t>(col_y)], line_no));
  }
  return out;
}

}  // namespace

TwoSampleData load_samples_csv(const std::string& path0, const std::string& path1) {
  auto y0 = load_single_column(path0);
  auto y1 = load_single_column(path1);
  if (y0.size() < 2) throw OneGroupEmpty(path0 + ": need at least 2 observations");
  if (y1.size() < 2) throw OneGroupEmpty(path1 + ": need at least 2 observations");
  return TwoSampleData::from_samples(std::move(y0), std::move(y1));
}

nlohmann::json to_json(const TestResult& r) {
  return nlohmann::json{
      {"i_hat", r.i_hat},
      {"mu_hat", r.moments.mu},
      {"sigma_hat", std::sqrt(r.moments.sigma2)},
      {"t_hat", r.t_hat},
      {"p_value", r.p_value},
      {"method", to_string(r.method)},
      {"reject", r.reject},
      {"level", r.level},
      {"family_path", to_string(r.moments.family_path)},
      {"params",
       {{"alpha", r.params.alpha},
        {"lambda", r.params.lambda},
        {"beta", r.params.beta},
        {"A", r.params.A()},
        {"B", r.params.B()}}},
      {"n0", r.n0},
      {"n1", r.n1},
      {"h", r.h},
      {"seed", r.seed}};
}

TestResult test_result_from_json(const nlohmann::json& j) {
  TestResult r;
  r.i_hat = j.at("i_hat").get<double>();
  r.moments.mu = j.at("mu_hat").get<double>();
  const double sigma = j.at("sigma_hat").get<double>();
  r.moments.sigma2 = sigma * sigma;
  r.t_hat = j.at("t_hat").get<double>();
  r.p_value = j.at("p_value").get<double>();
  const std::string m = j.at("method").get<std::string>();
  r.method = m == "permutation" ? Method::Permutation : Method::Asymptotic;
  r.reject = j.at("reject").get<bool>();
  r.level = j.at("level").get<double>();
  r.params.alpha = j.at("params").at("alpha").get<double>();
  r.params.lambda = j.at("params").at("lambda").get<double>();
  r.params.beta = j.at("params").at("beta").get<double>();
  r.n0 = j.at("n0").get<std::size_t>();
  r.n1 = j.at("n1").get<std::size_t>();
  r.h = j.at("h").get<double>();
  r.seed = j.at("seed").get<std::uint64_t>();
  return r;
}

nlohmann::json to_json(const RiskSurface& s) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : s.entries)
    entries.push_back({{"alpha", e.params.alpha},
                       {"lambda", e.params.lambda},
                       {"beta", e.params.beta},
                       {"p_hat", e.p_hat},
                       {"risk", e.risk}});
  return nlohmann::json{{"entries", entries},
                        {"best", s.best},
                        {"pilot",
                         {{"alpha", s.decision.pilot.alpha},
                          {"lambda", s.decision.pilot.lambda},
                          {"beta", s.decision.pilot.beta},
                          {"p1", s.decision.p1},
                          {"rejected", s.decision.rejected}}}};
}

nlohmann::json to_json(const RejectionTable& t) {
  nlohmann::json cells = nlohmann::json::array();
  for (std::size_t li = 0; li < t.lambda_grid.size(); ++li) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t ai = 0; ai < t.alpha_grid.size(); ++ai)
      row.push_back({{"rejection", t.cell(li, ai)}, {"se", t.cell_se(li, ai)}});
    cells.push_back(row);
  }
  return nlohmann::json{{"alpha", t.alpha_grid},
                        {"lambda", t.lambda_grid},
                        {"beta", t.beta},
                        {"replications", t.replications},
                        {"cells", cells}};
}

nlohmann::json to_json(const RobustnessReport& r) {
  nlohmann::json j{{"ges2", r.ges2},
                   {"region", to_string(r.region)},
                   {"policy", r.policy.kind == DeltaPolicy::Kind::Bump ? "bump" : "evaluation"},
                   {"eta", r.policy.eta},
                   {"params",
                    {{"alpha", r.params.alpha},
                     {"lambda", r.params.lambda},
                     {"beta", r.params.beta}}},
                   {"y0", r.y0},
                   {"if2", r.if2}};
  if (r.breakdown) j["breakdown"] = *r.breakdown;
  return j;
}

std::string to_csv(const RejectionTable& t) {
  std::string out = "lambda\\alpha";
  for (double a : t.alpha_grid) out += "," + fmt17(a);
  out += "\n";
  for (std::size_t li = 0; li < t.lambda_grid.size(); ++li) {
    out += fmt17(t.lambda_grid[li]);
    for (std::size_t ai = 0; ai < t.alpha_grid.size(); ++ai)
      out += "," + fmt17(t.cell(li, ai));
    out += "\n";
  }
  return out;
}

std::string to_csv(const RiskSurface& s) {
  std::string out = "alpha,lambda,beta,p_hat,risk\n";
  for (const auto& e : s.entries)
    out += fmt17(e.params.alpha) + "," + fmt17(e.params.lambda) + "," + fmt17(e.params.beta) +
           "," + fmt17(e.p_hat) + "," + fmt17(e.risk) + "\n";
  return out;
}

std::string to_csv(const RobustnessReport& r) {
  std::string out = "y0,if2\n";
  for (std::size_t i = 0; i < r.y0.size(); ++i)
    out += fmt17(r.y0[i]) + "," + fmt17(r.if2[i]) + "\n";
  return out;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << text;
  if (!out) throw IoError("failed while writing " + path);
}

namespace {

DistSpec parse_dist(const std::map<std::string, std::string>& kv, const std::string& section) {
  DistSpec d;
  auto get = [&](const std::string& key) -> const std::string* {
    auto it = kv.find(key);
    return it == kv.end() ? nullptr : &it->second;
  };
  auto num = [&](const std::string& key, double fallback) {
    const auto* s = get(key);
    return s ? parse_finite_double(*s, -1) : fallback;
  };
  const auto* kind = get("dist");
  if (kind && *kind == "mixture") {
    d.kind = DistSpec::Kind::Mixture;
    d.w = num("w", 0.5);
    d.mean2 = num("mean2", 0.0);
    if (get("var2"))
      d.sd2 = std::sqrt(num("var2", 1.0));
    else
      d.sd2 = num("sd2", 1.0);
  } else if (kind && *kind != "normal") {
    throw SchemaError("[" + section + "]: unknown dist '" + *kind + "'");
  }
  d.mean = num("mean", 0.0);
  if (get("var"))
    d.sd = std::sqrt(num("var", 1.0));
  else
    d.sd = num("sd", 1.0);
  if (!(d.sd > 0.0) || (d.kind == DistSpec::Kind::Mixture && !(d.sd2 > 0.0)))
    throw SchemaError("[" + section + "]: standard deviations must be positive");
  return d;
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const std::string t = trim(item);
    if (!t.empty()) out.push_back(parse_finite_double(t, -1));
  }
  return out;
}

}  // namespace

SimulationPlan parse_scenario_text(const std::string& text) {
  std::map<std::string, std::map<std::string, std::string>> sections;
  std::string current = "run";
  std::stringstream ss(text);
  std::string line;
  long line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (t.front() == '[' && t.back() == ']') {
      current = trim(t.substr(1, t.size() - 2));
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ParseError("line " + std::to_string(line_no) + ": expected key=value", line_no);
    sections[current][trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
  }

  SimulationPlan plan;
  if (sections.count("model0")) plan.scenario.sample0 = parse_dist(sections["model0"], "model0");
  if (sections.count("model1")) plan.scenario.sample1 = parse_dist(sections["model1"], "model1");
  if (sections.count("contamination")) {
    auto& kv = sections["contamination"];
    Contamination c;
    if (!kv.count("epsilon")) throw SchemaError("[contamination]: epsilon is required");
    c.epsilon = parse_finite_double(kv["epsilon"], -1);
    c.dist = parse_dist(kv, "contamination");
    plan.scenario.contamination = c;
  }
  if (sections.count("grids")) {
    auto& kv = sections["grids"];
    if (kv.count("alpha")) plan.alpha_grid = parse_list(kv["alpha"]);
    if (kv.count("lambda")) plan.lambda_grid = parse_list(kv["lambda"]);
    if (kv.count("beta")) plan.beta = parse_finite_double(kv["beta"], -1);
  }
  if (sections.count("run")) {
    auto& kv = sections["run"];
    auto num = [&](const std::string& key, double fallback) {
      return kv.count(key) ? parse_finite_double(kv[key], -1) : fallback;
    };
    plan.scenario.n0 = static_cast<std::size_t>(num("n0", 100));
    plan.scenario.n1 = static_cast<std::size_t>(num("n1", 100));
    plan.scenario.replications = static_cast<std::size_t>(num("replications", 200));
    plan.scenario.level = num("level", 0.05);
    plan.scenario.seed = static_cast<std::uint64_t>(num("seed", 0));
    plan.n_perm = static_cast<std::size_t>(num("n_perm", 500));
    plan.grid_points = static_cast<std::size_t>(num("grid_points", 512));
  }
  if (plan.alpha_grid.empty() || plan.lambda_grid.empty())
    throw SchemaError("[grids]: alpha and lambda grids must be nonempty");
  return plan;
}

SimulationPlan parse_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario_text(ss.str());
}

}  // namespace gsbmi
