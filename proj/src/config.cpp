#include "fracstab/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <vector>

#include "fracstab/errors.hpp"

namespace fracstab {
namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

struct Entry {
  std::string value;
  int line = 0;
  bool consumed = false;
};

class ConfigReader {
 public:
  ConfigReader(const std::string& path) : path_(path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
      ++number;
      const std::size_t hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      line = trim(line);
      if (line.empty()) continue;
      const std::size_t eq = line.find('=');
      if (eq == std::string::npos) {
        fail(number, "expected 'key = value'");
      }
      const std::string key = trim(line.substr(0, eq));
      const std::string value = trim(line.substr(eq + 1));
      if (key.empty()) fail(number, "empty key");
      auto [it, inserted] = entries_.emplace(key, Entry{value, number, false});
      if (!inserted) {
        fail(number, "duplicate key '" + key + "' (first at line " +
                         std::to_string(it->second.line) + ")");
      }
    }
  }

  [[noreturn]] void fail(int line, const std::string& message) const {
    throw ConfigError(path_ + ":" + std::to_string(line) + ": " + message);
  }

  bool has(const std::string& key) const { return entries_.count(key) != 0; }

  std::optional<std::string> take(const std::string& key) {
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    it->second.consumed = true;
    return it->second.value;
  }

  std::string require(const std::string& key) {
    auto v = take(key);
    if (!v) throw ConfigError(path_ + ": missing required key '" + key + "'");
    return *v;
  }

  int line_of(const std::string& key) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? 0 : it->second.line;
  }

  double number(const std::string& key, const std::string& raw) const {
    try {
      std::size_t used = 0;
      const double v = std::stod(raw, &used);
      if (trim(raw.substr(used)).empty()) return v;
    } catch (const std::exception&) {
    }
    fail(line_of(key), "value for '" + key + "' is not a number: '" + raw + "'");
  }

  double take_number(const std::string& key, double fallback) {
    auto v = take(key);
    return v ? number(key, *v) : fallback;
  }

  long long integer(const std::string& key, const std::string& raw) const {
    try {
      std::size_t used = 0;
      const long long v = std::stoll(raw, &used);
      if (trim(raw.substr(used)).empty()) return v;
    } catch (const std::exception&) {
    }
    fail(line_of(key), "value for '" + key + "' is not an integer: '" + raw + "'");
  }

  std::vector<double> vector(const std::string& key, const std::string& raw) const {
    std::vector<double> out;
    std::istringstream in(raw);
    std::string token;
    while (in >> token) out.push_back(number(key, token));
    return out;
  }

  bool boolean(const std::string& key, const std::string& raw) const {
    if (raw == "true") return true;
    if (raw == "false") return false;
    fail(line_of(key), "value for '" + key + "' must be true or false");
  }

  void finish() const {
    std::vector<const std::pair<const std::string, Entry>*> leftover;
    for (const auto& kv : entries_) {
      if (!kv.second.consumed) leftover.push_back(&kv);
    }
    if (leftover.empty()) return;
    std::sort(leftover.begin(), leftover.end(),
              [](const auto* a, const auto* b) { return a->second.line < b->second.line; });
    std::string message = path_ + ": unknown key(s):";
    for (const auto* kv : leftover) {
      message += " '" + kv->first + "' (line " + std::to_string(kv->second.line) + ")";
    }
    throw ConfigError(message);
  }

 private:
  std::string path_;
  std::map<std::string, Entry> entries_;
};

// Mark family syntaxes: "(v,p) (v,p) ...", "uniform(a,b)", "gaussian(m,s)".
MarkFamily parse_marks(ConfigReader& reader, const std::string& key,
                       const std::string& raw) {
  auto inner_pair = [&](const std::string& body) -> std::pair<double, double> {
    const std::size_t comma = body.find(',');
    if (comma == std::string::npos) {
      reader.fail(reader.line_of(key), "expected two comma-separated numbers in '" +
                                           body + "'");
    }
    return {reader.number(key, trim(body.substr(0, comma))),
            reader.number(key, trim(body.substr(comma + 1)))};
  };

  MarkFamily family;
  const std::string value = trim(raw);
  if (value.rfind("uniform(", 0) == 0 && value.back() == ')') {
    family.kind = MarkFamily::Kind::uniform;
    auto [a, b] = inner_pair(value.substr(8, value.size() - 9));
    family.lower = a;
    family.upper = b;
    return family;
  }
  if (value.rfind("gaussian(", 0) == 0 && value.back() == ')') {
    family.kind = MarkFamily::Kind::gaussian;
    auto [m, s] = inner_pair(value.substr(9, value.size() - 10));
    family.mean = m;
    family.sd = s;
    return family;
  }

  family.kind = MarkFamily::Kind::discrete;
  family.values.clear();
  family.probs.clear();
  std::size_t pos = 0;
  while (pos < value.size()) {
    while (pos < value.size() && std::isspace(static_cast<unsigned char>(value[pos]))) {
      ++pos;
    }
    if (pos >= value.size()) break;
    if (value[pos] != '(') {
      reader.fail(reader.line_of(key),
                  "marks must be '(value,prob)' pairs, 'uniform(a,b)', or "
                  "'gaussian(mean,sd)'");
    }
    const std::size_t close = value.find(')', pos);
    if (close == std::string::npos) {
      reader.fail(reader.line_of(key), "unbalanced '(' in marks");
    }
    auto [v, p] = inner_pair(value.substr(pos + 1, close - pos - 1));
    family.values.push_back(v);
    family.probs.push_back(p);
    pos = close + 1;
  }
  if (family.values.empty()) {
    reader.fail(reader.line_of(key), "marks list is empty");
  }
  return family;
}

NonlinearityHandle parse_handle(ConfigReader& reader, const std::string& block) {
  NonlinearityHandle handle;
  if (auto name = reader.take(block + ".name")) handle.name = trim(*name);
  if (auto params = reader.take(block + ".params")) {
    handle.params = reader.vector(block + ".params", *params);
  }
  return handle;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_vector(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i != 0) out += ' ';
    out += fmt(v[i]);
  }
  return out;
}

void emit_handle(std::string& out, const std::string& block,
                 const NonlinearityHandle& handle) {
  out += block + ".name = " + handle.name + "\n";
  if (!handle.params.empty()) {
    out += block + ".params = " + fmt_vector(handle.params) + "\n";
  }
}

}  // namespace

RunConfig parse_config(const std::string& path) {
  ConfigReader reader(path);
  RunConfig cfg;
  FracSystem& sys = cfg.system;

  {
    const std::string raw = reader.require("system.n");
    const long long n = reader.integer("system.n", raw);
    if (n < 1 || n > 64) {
      reader.fail(reader.line_of("system.n"), "system.n must lie in [1, 64]");
    }
    sys.n = static_cast<int>(n);
  }
  sys.q = reader.number("system.q", reader.require("system.q"));
  sys.T = reader.number("system.T", reader.require("system.T"));
  {
    const std::vector<double> x0 =
        reader.vector("system.x0", reader.require("system.x0"));
    if (static_cast<int>(x0.size()) != sys.n) {
      reader.fail(reader.line_of("system.x0"),
                  "system.x0 must list exactly n components");
    }
    sys.x0 = Eigen::Map<const Eigen::VectorXd>(x0.data(),
                                               static_cast<Eigen::Index>(x0.size()));
  }
  if (auto flag = reader.take("system.allow_any_order")) {
    sys.allow_any_order = reader.boolean("system.allow_any_order", *flag);
  }

  sys.A = Eigen::MatrixXd::Zero(sys.n, sys.n);
  for (int i = 0; i < sys.n; ++i) {
    const std::string key = "A.row" + std::to_string(i);
    const std::vector<double> row = reader.vector(key, reader.require(key));
    if (static_cast<int>(row.size()) != sys.n) {
      reader.fail(reader.line_of(key), key + " must list exactly n entries");
    }
    for (int j = 0; j < sys.n; ++j) sys.A(i, j) = row[static_cast<std::size_t>(j)];
  }

  sys.f = parse_handle(reader, "f");
  sys.sigma = parse_handle(reader, "sigma");
  sys.g = parse_handle(reader, "g");

  sys.jumps.intensity = reader.take_number("jump.intensity", 0.0);
  if (auto marks = reader.take("jump.marks")) {
    sys.jumps.marks = parse_marks(reader, "jump.marks", *marks);
  }

  cfg.h = reader.number("numerics.h", reader.require("numerics.h"));

  if (auto mode = reader.take("mode")) {
    const std::string m = trim(*mode);
    if (m == "rectified") {
      cfg.mode = CertMode::rectified;
    } else if (m == "verbatim") {
      cfg.mode = CertMode::verbatim;
    } else {
      reader.fail(reader.line_of("mode"), "mode must be 'rectified' or 'verbatim'");
    }
  }

  static const char* const kHypKeys[] = {
      "L_f", "L_sigma", "L_g", "beta_exp", "alpha_exp", "N1",      "N2",
      "omega", "R_f",   "R_sigma", "R_g", "V_f",       "V_sigma", "V_g",
      "c_p",  "E_x0_sq"};
  for (const char* k : kHypKeys) {
    if (reader.has(std::string("hypothesis.") + k)) {
      cfg.has_hypothesis = true;
      break;
    }
  }
  if (cfg.has_hypothesis) {
    HypothesisConstants& hyp = cfg.hypothesis;
    hyp.L_f = reader.number("hypothesis.L_f", reader.require("hypothesis.L_f"));
    hyp.L_sigma =
        reader.number("hypothesis.L_sigma", reader.require("hypothesis.L_sigma"));
    hyp.L_g = reader.number("hypothesis.L_g", reader.require("hypothesis.L_g"));
    hyp.omega = reader.number("hypothesis.omega", reader.require("hypothesis.omega"));
    hyp.N1 = reader.take_number("hypothesis.N1", 1.0);
    hyp.N2 = reader.take_number("hypothesis.N2", 1.0);
    hyp.beta_exp = reader.take_number("hypothesis.beta_exp", 2.0);
    if (reader.has("hypothesis.alpha_exp")) {
      hyp.alpha_exp =
          reader.number("hypothesis.alpha_exp", *reader.take("hypothesis.alpha_exp"));
    } else if (hyp.beta_exp > 1.0) {
      hyp.alpha_exp = hyp.beta_exp / (hyp.beta_exp - 1.0);
    }
    hyp.R_f = reader.take_number("hypothesis.R_f", 0.0);
    hyp.R_sigma = reader.take_number("hypothesis.R_sigma", 0.0);
    hyp.R_g = reader.take_number("hypothesis.R_g", 0.0);
    hyp.V_f = reader.take_number("hypothesis.V_f", 0.0);
    hyp.V_sigma = reader.take_number("hypothesis.V_sigma", 0.0);
    hyp.V_g = reader.take_number("hypothesis.V_g", 0.0);
    hyp.c_p = reader.take_number("hypothesis.c_p", 1.0);
    hyp.E_x0_sq = reader.take_number("hypothesis.E_x0_sq", sys.x0.squaredNorm());
  }

  if (auto paths = reader.take("ensemble.paths")) {
    const long long p = reader.integer("ensemble.paths", *paths);
    if (p < 2 || p > 10'000'000) {
      reader.fail(reader.line_of("ensemble.paths"),
                  "ensemble.paths must lie in [2, 1e7]");
    }
    cfg.ensemble.paths = static_cast<int>(p);
  }
  if (auto seed = reader.take("ensemble.seed")) {
    const long long s = reader.integer("ensemble.seed", *seed);
    if (s < 0) reader.fail(reader.line_of("ensemble.seed"), "seed must be >= 0");
    cfg.ensemble.seed = static_cast<std::uint64_t>(s);
  }
  cfg.ensemble.window_fraction =
      reader.take_number("ensemble.window_fraction", cfg.ensemble.window_fraction);

  reader.finish();
  return cfg;
}

std::string serialize_config(const RunConfig& config) {
  const FracSystem& sys = config.system;
  std::string out;
  out += "system.n = " + std::to_string(sys.n) + "\n";
  out += "system.q = " + fmt(sys.q) + "\n";
  out += "system.T = " + fmt(sys.T) + "\n";
  {
    std::vector<double> x0(sys.x0.data(), sys.x0.data() + sys.x0.size());
    out += "system.x0 = " + fmt_vector(x0) + "\n";
  }
  if (sys.allow_any_order) out += "system.allow_any_order = true\n";
  for (int i = 0; i < sys.n; ++i) {
    out += "A.row" + std::to_string(i) + " =";
    for (int j = 0; j < sys.n; ++j) out += " " + fmt(sys.A(i, j));
    out += "\n";
  }
  emit_handle(out, "f", sys.f);
  emit_handle(out, "sigma", sys.sigma);
  emit_handle(out, "g", sys.g);
  out += "jump.intensity = " + fmt(sys.jumps.intensity) + "\n";
  switch (sys.jumps.marks.kind) {
    case MarkFamily::Kind::discrete: {
      out += "jump.marks =";
      for (std::size_t i = 0; i < sys.jumps.marks.values.size(); ++i) {
        out += " (" + fmt(sys.jumps.marks.values[i]) + "," +
               fmt(sys.jumps.marks.probs[i]) + ")";
      }
      out += "\n";
      break;
    }
    case MarkFamily::Kind::uniform:
      out += "jump.marks = uniform(" + fmt(sys.jumps.marks.lower) + "," +
             fmt(sys.jumps.marks.upper) + ")\n";
      break;
    case MarkFamily::Kind::gaussian:
      out += "jump.marks = gaussian(" + fmt(sys.jumps.marks.mean) + "," +
             fmt(sys.jumps.marks.sd) + ")\n";
      break;
  }
  out += "numerics.h = " + fmt(config.h) + "\n";
  out += std::string("mode = ") +
         (config.mode == CertMode::verbatim ? "verbatim" : "rectified") + "\n";
  if (config.has_hypothesis) {
    const HypothesisConstants& hyp = config.hypothesis;
    out += "hypothesis.L_f = " + fmt(hyp.L_f) + "\n";
    out += "hypothesis.L_sigma = " + fmt(hyp.L_sigma) + "\n";
    out += "hypothesis.L_g = " + fmt(hyp.L_g) + "\n";
    out += "hypothesis.beta_exp = " + fmt(hyp.beta_exp) + "\n";
    out += "hypothesis.alpha_exp = " + fmt(hyp.alpha_exp) + "\n";
    out += "hypothesis.N1 = " + fmt(hyp.N1) + "\n";
    out += "hypothesis.N2 = " + fmt(hyp.N2) + "\n";
    out += "hypothesis.omega = " + fmt(hyp.omega) + "\n";
    out += "hypothesis.R_f = " + fmt(hyp.R_f) + "\n";
    out += "hypothesis.R_sigma = " + fmt(hyp.R_sigma) + "\n";
    out += "hypothesis.R_g = " + fmt(hyp.R_g) + "\n";
    out += "hypothesis.V_f = " + fmt(hyp.V_f) + "\n";
    out += "hypothesis.V_sigma = " + fmt(hyp.V_sigma) + "\n";
    out += "hypothesis.V_g = " + fmt(hyp.V_g) + "\n";
    out += "hypothesis.c_p = " + fmt(hyp.c_p) + "\n";
    out += "hypothesis.E_x0_sq = " + fmt(hyp.E_x0_sq) + "\n";
  }
  out += "ensemble.paths = " + std::to_string(config.ensemble.paths) + "\n";
  out += "ensemble.seed = " + std::to_string(config.ensemble.seed) + "\n";
  out += "ensemble.window_fraction = " + fmt(config.ensemble.window_fraction) + "\n";
  return out;
}

}  // namespace fracstab
