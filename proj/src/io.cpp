#include "dfwer/io.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <map>
#include <optional>

namespace dfwer {

namespace {

std::optional<std::int64_t> to_int(std::string_view s) {
  std::int64_t v = 0;
  const auto* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end) return std::nullopt;
  return v;
}

std::optional<double> to_double(std::string_view s) {
  if (s.empty()) return std::nullopt;
  // strtod needs a terminated buffer.
  const std::string buf(s);
  char* end = nullptr;
  const double v = std::strtod(buf.c_str(), &end);
  if (end != buf.c_str() + buf.size()) return std::nullopt;
  return v;
}

std::string lower(std::string_view s) {
  std::string out;
  for (char c : s) out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  return out;
}

}  // namespace

ParseError::ParseError(std::size_t line, const std::string& what)
    : UsageError(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string> split_fields(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.emplace_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<CountRow> parse_counts(std::istream& in) {
  std::vector<CountRow> rows;
  std::string line;
  std::size_t lineno = 0;
  bool first_content = true;
  while (std::getline(in, line)) {
    ++lineno;
    const auto body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto fields = split_fields(body);
    if (fields.size() != 3) {
      throw ParseError(lineno, "expected 3 fields (label,x1,x2), found " + std::to_string(fields.size()));
    }
    const auto x1 = to_int(fields[1]);
    const auto x2 = to_int(fields[2]);
    if (first_content && !x1 && !x2) {
      first_content = false;  // header
      continue;
    }
    first_content = false;
    if (!x1 || *x1 < 0) throw ParseError(lineno, "x1 is not a nonnegative integer: '" + fields[1] + "'");
    if (!x2 || *x2 < 0) throw ParseError(lineno, "x2 is not a nonnegative integer: '" + fields[2] + "'");
    rows.push_back({fields[0], *x1, *x2});
  }
  if (rows.empty()) throw ParseError(0, "no data rows");
  return rows;
}

SimRequest parse_sim_config(std::istream& in) {
  std::map<std::string, std::pair<std::string, std::size_t>> kv;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto body = line.substr(0, line.find('#'));
    const auto t = trim(body);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string_view::npos) throw ParseError(lineno, "expected key=value");
    const auto key = lower(trim(t.substr(0, eq)));
    if (key.empty()) throw ParseError(lineno, "empty key");
    if (kv.count(key)) throw ParseError(lineno, "duplicate key '" + key + "'");
    kv[key] = {std::string(trim(t.substr(eq + 1))), lineno};
  }

  SimRequest req;
  auto& cfg = req.config;
  auto take = [&](const std::string& key) -> std::optional<std::pair<std::string, std::size_t>> {
    const auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    auto v = it->second;
    kv.erase(it);
    return v;
  };
  auto need = [&](const std::string& key) {
    auto v = take(key);
    if (!v) throw ParseError(0, "missing required key '" + key + "'");
    return *v;
  };
  auto as_double = [](const std::pair<std::string, std::size_t>& v, const std::string& key) {
    const auto d = to_double(v.first);
    if (!d) throw ParseError(v.second, "invalid value for '" + key + "': '" + v.first + "'");
    return *d;
  };
  auto as_count = [](const std::pair<std::string, std::size_t>& v, const std::string& key) {
    const auto n = to_int(v.first);
    if (!n || *n < 0) throw ParseError(v.second, "invalid value for '" + key + "': '" + v.first + "'");
    return *n;
  };

  const auto kind = need("test_kind");
  const auto kind_name = lower(kind.first);
  if (kind_name == "fet") {
    cfg.test_kind = TestKind::FET;
  } else if (kind_name == "bet") {
    cfg.test_kind = TestKind::BET;
  } else {
    throw ParseError(kind.second, "invalid value for 'test_kind': '" + kind.first + "' (FET or BET)");
  }
  cfg.m = static_cast<std::size_t>(as_count(need("m"), "m"));
  cfg.pi0 = as_double(need("pi0"), "pi0");
  if (cfg.test_kind == TestKind::FET) {
    cfg.sample_size = as_count(need("n"), "N");
  } else if (auto v = take("n")) {
    cfg.sample_size = as_count(*v, "N");
  }
  if (auto v = take("p_null")) cfg.p_null = as_double(*v, "p_null");
  if (auto v = take("p_alt")) cfg.p_alt = as_double(*v, "p_alt");
  if (auto v = take("lambda_null")) cfg.lambda_null = as_double(*v, "lambda_null");
  if (auto v = take("lambda_alt")) cfg.lambda_alt = as_double(*v, "lambda_alt");
  if (auto v = take("rho")) cfg.rho = as_double(*v, "rho");
  if (auto v = take("b")) cfg.replicates = static_cast<std::size_t>(as_count(*v, "B"));
  if (auto v = take("alpha")) cfg.alpha = as_double(*v, "alpha");
  if (auto v = take("seed")) {
    std::uint64_t s = 0;
    const auto* end = v->first.data() + v->first.size();
    const auto res = std::from_chars(v->first.data(), end, s);
    if (res.ec != std::errc() || res.ptr != end) throw ParseError(v->second, "invalid value for 'seed': '" + v->first + "'");
    cfg.seed = s;
  }
  if (auto v = take("procedures")) {
    try {
      req.procedures = parse_procedure_list(v->first);
    } catch (const UsageError& e) {
      throw ParseError(v->second, std::string("invalid value for 'procedures': ") + e.what());
    }
  } else {
    req.procedures.assign(all_procedures().begin(), all_procedures().end());
  }
  if (!kv.empty()) {
    const auto& [key, v] = *kv.begin();
    throw ParseError(v.second, "unknown key '" + key + "'");
  }
  cfg.validate();
  return req;
}

std::string format_probability(double p, int precision) {
  char buf[64];
  if (precision < 0) {
    std::snprintf(buf, sizeof buf, "%.17g", p);
  } else {
    std::snprintf(buf, sizeof buf, "%.*f", precision, p);
  }
  return buf;
}

}  // namespace dfwer
