#include "svmch/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "svmch/errors.hpp"

namespace svmch {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

double parse_double(std::string_view key, std::string_view v) {
  // strtod rather than from_chars: libstdc++ 11 lacks the floating overloads.
  const std::string s(v);
  char* end = nullptr;
  const double x = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(x)) {
    throw ConfigError("invalid number for '" + std::string(key) + "': '" + s + "'");
  }
  return x;
}

template <typename Int>
Int parse_int(std::string_view key, std::string_view v) {
  Int x{};
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ConfigError("invalid integer for '" + std::string(key) + "': '" + std::string(v) + "'");
  }
  return x;
}

bool parse_bool(std::string_view key, std::string_view v) {
  if (v == "1" || v == "true" || v == "on" || v == "yes") return true;
  if (v == "0" || v == "false" || v == "off" || v == "no") return false;
  throw ConfigError("invalid boolean for '" + std::string(key) + "': '" + std::string(v) + "'");
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

const char* to_string(Scheme s) {
  switch (s) {
    case Scheme::Svm1: return "svm1";
    case Scheme::Svm2: return "svm2";
    case Scheme::SavCn: return "savcn";
    case Scheme::Ficn: return "ficn";
  }
  return "unknown";
}

Scheme parse_scheme(std::string_view name) {
  if (name == "svm1") return Scheme::Svm1;
  if (name == "svm2") return Scheme::Svm2;
  if (name == "savcn") return Scheme::SavCn;
  if (name == "ficn") return Scheme::Ficn;
  throw ConfigError("unknown scheme '" + std::string(name) + "' (expected svm1, svm2, savcn or ficn)");
}

std::int64_t SchemeConfig::step_count() const {
  return static_cast<std::int64_t>(std::ceil(t_end / tau - 1e-9));
}

void SchemeConfig::validate() const {
  if (n < 8 || n > 1024 || (n & (n - 1)) != 0) {
    throw ConfigError("n must be a power of two in [8, 1024], got " + std::to_string(n));
  }
  if (!(std::isfinite(tau) && tau > 0.0)) throw ConfigError("tau must be positive");
  if (!(std::isfinite(t_end) && t_end >= tau * (1.0 - 1e-12))) throw ConfigError("t_end must be >= tau");
  params().validate();
  if (init != "taylor" && init != "coarsening" && init.rfind("file:", 0) != 0) {
    throw ConfigError("unknown init '" + init + "' (expected taylor, coarsening or file:<path>)");
  }
  if (!(c0 >= 0.0)) throw ConfigError("c0 must be >= 0");
  if (!(newton_tol > 0.0) || !(picard_tol > 0.0)) throw ConfigError("solver tolerances must be positive");
  if (max_newton_iters < 1 || max_picard_iters < 1) throw ConfigError("iteration limits must be >= 1");
  if (!(beta_limit > 0.0)) throw ConfigError("beta-limit must be positive");
  for (double t : snapshot_times) {
    if (!(t >= 0.0 && t <= t_end * (1.0 + 1e-12))) throw ConfigError("snapshot time outside [0, t_end]");
  }
}

void SchemeConfig::set(std::string_view raw_key, std::string_view raw_value) {
  std::string key(trim(raw_key));
  for (auto& ch : key) {
    if (ch == '_') ch = '-';
  }
  const std::string_view value = trim(raw_value);

  if (key == "scheme") scheme = parse_scheme(value);
  else if (key == "n") n = parse_int<std::size_t>(key, value);
  else if (key == "tau") tau = parse_double(key, value);
  else if (key == "t-end") t_end = parse_double(key, value);
  else if (key == "epsilon") epsilon = parse_double(key, value);
  else if (key == "lambda") lambda = parse_double(key, value);
  else if (key == "init") init = std::string(value);
  else if (key == "c0") c0 = parse_double(key, value);
  else if (key == "newton-tol") newton_tol = parse_double(key, value);
  else if (key == "max-newton-iters") max_newton_iters = parse_int<int>(key, value);
  else if (key == "beta-limit") beta_limit = parse_double(key, value);
  else if (key == "picard-tol") picard_tol = parse_double(key, value);
  else if (key == "max-picard-iters") max_picard_iters = parse_int<int>(key, value);
  else if (key == "dealias") dealias = parse_bool(key, value);
  else if (key == "out") out_dir = std::string(value);
  else if (key == "seed") seed = parse_int<std::uint64_t>(key, value);
  else if (key == "snapshot-at") {
    snapshot_times.clear();
    std::string_view rest = value;
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      const std::string_view item = trim(rest.substr(0, comma));
      if (!item.empty()) snapshot_times.push_back(parse_double(key, item));
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

std::string SchemeConfig::to_text() const {
  std::ostringstream os;
  os << "scheme = " << to_string(scheme) << '\n'
     << "n = " << n << '\n'
     << "tau = " << format_double(tau) << '\n'
     << "t-end = " << format_double(t_end) << '\n'
     << "epsilon = " << format_double(epsilon) << '\n'
     << "lambda = " << format_double(lambda) << '\n'
     << "init = " << init << '\n'
     << "c0 = " << format_double(c0) << '\n'
     << "newton-tol = " << format_double(newton_tol) << '\n'
     << "max-newton-iters = " << max_newton_iters << '\n'
     << "beta-limit = " << format_double(beta_limit) << '\n'
     << "picard-tol = " << format_double(picard_tol) << '\n'
     << "max-picard-iters = " << max_picard_iters << '\n'
     << "dealias = " << (dealias ? "true" : "false") << '\n';
  os << "snapshot-at = ";
  for (std::size_t i = 0; i < snapshot_times.size(); ++i) {
    os << (i ? "," : "") << format_double(snapshot_times[i]);
  }
  os << '\n';
  if (!out_dir.empty()) os << "out = " << out_dir << '\n';
  os << "seed = " << seed << '\n';
  return os.str();
}

SchemeConfig parse_config_text(std::string_view text, SchemeConfig base) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty() || line.front() == '[') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    std::string_view value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    base.set(line.substr(0, eq), value);
  }
  return base;
}

SchemeConfig load_config_file(const std::string& path, SchemeConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), std::move(base));
}

}  // namespace svmch
