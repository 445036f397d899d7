#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "spectra_lab/cantor/regular_cantor_set.hpp"
#include "spectra_lab/cf/gauss_cantor.hpp"
#include "spectra_lab/core/bigint.hpp"
#include "spectra_lab/reports/expression.hpp"

namespace spectra_lab {

using nlohmann::json;

struct ValidationError {
  std::string path;
  std::string message;
};

class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(std::vector<ValidationError> errors)
      : std::invalid_argument(summary(errors)), errors_(std::move(errors)) {}
  ConfigError(const std::string& path, const std::string& message)
      : ConfigError(std::vector<ValidationError>{{path, message}}) {}
  const std::vector<ValidationError>& errors() const { return errors_; }

 private:
  static std::string summary(const std::vector<ValidationError>& errors) {
    std::string s = "invalid config:";
    for (const auto& e : errors) s += "\n  " + e.path + ": " + e.message;
    return s;
  }
  std::vector<ValidationError> errors_;
};

// Exact value of a decimal literal ("0.9", "-1.25e-3") or a fraction ("9/10").
inline BigRational parse_exact(const std::string& text) {
  std::string s = text;
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }), s.end());
  if (s.empty()) throw std::invalid_argument("empty number");
  if (auto slash = s.find('/'); slash != std::string::npos) {
    BigRational p = parse_exact(s.substr(0, slash)), q = parse_exact(s.substr(slash + 1));
    if (q == 0) throw std::invalid_argument("zero denominator in '" + text + "'");
    return p / q;
  }
  std::size_t i = 0;
  bool negative = false;
  if (s[i] == '+' || s[i] == '-') negative = s[i++] == '-';
  std::string digits;
  int scale = 0;
  bool dot = false, any = false;
  for (; i < s.size() && s[i] != 'e' && s[i] != 'E'; ++i) {
    if (s[i] == '.' && !dot) {
      dot = true;
    } else if (std::isdigit(static_cast<unsigned char>(s[i]))) {
      digits += s[i];
      any = true;
      if (dot) --scale;
    } else {
      throw std::invalid_argument("not a number: '" + text + "'");
    }
  }
  if (!any) throw std::invalid_argument("not a number: '" + text + "'");
  if (i < s.size()) {
    std::size_t used = 0;
    int e = 0;
    try {
      e = std::stoi(s.substr(i + 1), &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad exponent in '" + text + "'");
    }
    if (used != s.size() - i - 1 || std::abs(e) > 4000) throw std::invalid_argument("bad exponent in '" + text + "'");
    scale += e;
  }
  digits.erase(0, std::min(digits.find_first_not_of('0'), digits.size() - 1));  // a leading 0 would read as octal
  BigRational v{BigInt(digits)};
  BigInt ten_power = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(std::abs(scale)));
  v = scale >= 0 ? v * BigRational(ten_power) : v / BigRational(ten_power);
  return negative ? BigRational(-v) : v;
}

// JSON numbers are read through their shortest decimal form, so 0.9 means 9/10.
inline BigRational exact_from_json(const json& v) {
  if (v.is_number_integer()) return BigRational(v.get<std::int64_t>());
  if (v.is_number()) return parse_exact(v.dump());
  if (v.is_string()) return parse_exact(v.get<std::string>());
  throw std::invalid_argument("expected a number or a fraction string");
}

// "midthird", "interval", "interval:lo:hi", "gauss:N", "C(N)", "affine:r".
inline RegularCantorSet parse_cantor_set(const std::string& spec) {
  if (spec == "midthird" || spec == "middle-third") return middle_third();
  if (spec == "interval") return interval_set();
  auto tail = [&](std::size_t n) { return spec.substr(n); };
  auto integer = [&](const std::string& s) {
    if (s.empty() || !std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); }) || s.size() > 4)
      throw std::invalid_argument("bad digit bound in set '" + spec + "'");
    return std::stoi(s);
  };
  if (spec.rfind("gauss:", 0) == 0 || (spec.rfind("C(", 0) == 0 && spec.back() == ')')) {
    int n = spec[0] == 'g' ? integer(tail(6)) : integer(spec.substr(2, spec.size() - 3));
    if (n < 2 || n > 64) throw std::invalid_argument("gauss digit bound must lie in [2, 64]");
    return gauss_cantor_set(n);
  }
  if (spec.rfind("affine:", 0) == 0) return affine_two_branch(parse_exact(tail(7)));
  if (spec.rfind("interval:", 0) == 0) {
    auto colon = spec.find(':', 9);
    if (colon == std::string::npos) throw std::invalid_argument("interval set needs interval:lo:hi");
    return interval_set(parse_exact(spec.substr(9, colon - 9)), parse_exact(spec.substr(colon + 1)));
  }
  throw std::invalid_argument("unknown set '" + spec + "' (midthird, interval, interval:lo:hi, gauss:N, C(N), affine:r)");
}

enum class KeyType { integer, number, exact, string, boolean, int_list, exact_pair, int_pair, object };

struct KeySpec {
  std::string name;
  KeyType type = KeyType::string;
  json fallback;  // null: optional without default
  std::optional<double> min;
  std::optional<double> max;
  std::vector<std::string> choices;
  bool required = false;
  std::string help;
};

inline const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"spectrum", "cf",    "dimension", "thickness", "sumset",
                                              "sweep",    "avoid", "catmap",    "limitgeom", "report"};
  return names;
}

inline const std::vector<std::string>& plot_kinds() {
  static const std::vector<std::string> kinds{"spectrum-rug", "dimension-vs-depth", "sweep"};
  return kinds;
}

inline std::vector<KeySpec> command_keys(const std::string& command) {
  using K = KeyType;
  std::vector<KeySpec> keys{
      {"command", K::string, nullptr, {}, {}, command_names(), true, "subcommand"},
      {"out", K::string, nullptr, {}, {}, {}, false, "JSON report path (stdout if absent)"},
      {"csv", K::string, nullptr, {}, {}, {}, false, "plot data CSV path"},
      {"plot", K::string, nullptr, {}, {}, plot_kinds(), false, "plot data kind"},
      {"seed", K::integer, 0, 0, 9007199254740991.0, {}, false, "recorded seed"},
  };
  auto add = [&](KeySpec k) { keys.push_back(std::move(k)); };
  if (command == "spectrum") {
    add({"system", K::string, "cf", {}, {}, {"cf", "catmap", "horseshoe", "suspension"}, false, "dynamical system"});
    add({"digits", K::integer, 2, 1, 9, {}, false, "largest CF digit"});
    add({"max_period", K::integer, 6, 1, 24, {}, false, "largest orbit period"});
    add({"observable", K::string, nullptr, {}, {}, {}, false, "named observable or expression"});
    add({"resolution", K::number, 0.01, 1e-9, 1.0, {}, false, "gap/run resolution"});
    add({"lambda_s", K::exact, "1/3", 0, 0.5, {}, false, "horseshoe stable ratio"});
    add({"lambda_u", K::exact, "1/3", 0, 0.5, {}, false, "horseshoe unstable ratio"});
    add({"roof", K::string, "1", {}, {}, {}, false, "suspension roof expression in x, y"});
    add({"samples", K::integer, 64, 4, 65536, {}, false, "flow samples per fiber"});
    add({"lipschitz_time", K::number, nullptr, 0, 1e12, {}, false, "Lipschitz constant of F in s"});
  } else if (command == "cf") {
    add({"left_period", K::int_list, json::array({1}), 1, 1e9, {}, false, "left periodic tail"});
    add({"center", K::int_list, json::array(), 1, 1e9, {}, false, "finite middle block"});
    add({"right_period", K::int_list, nullptr, 1, 1e9, {}, true, "right periodic tail"});
    add({"position", K::integer, 0, -1e6, 1e6, {}, false, "index for the height"});
    add({"convergents", K::integer, 8, 0, 256, {}, false, "convergents of the forward tail"});
  } else if (command == "dimension") {
    add({"set", K::string, nullptr, {}, {}, {}, true, "Cantor set"});
    add({"tol", K::number, 1e-6, 1e-14, 0.5, {}, false, "enclosure width target"});
    add({"depth_cap", K::integer, 16, 1, 24, {}, false, "largest graph-directed depth"});
    add({"box", K::boolean, true, {}, {}, {}, false, "include the box-counting estimate"});
    add({"depths", K::int_pair, nullptr, 1, 24, {}, false, "box-counting depth range"});
  } else if (command == "thickness") {
    add({"set", K::string, nullptr, {}, {}, {}, true, "Cantor set"});
    add({"depth", K::integer, nullptr, 1, 10, {}, false, "working depth"});
  } else if (command == "sumset") {
    add({"K", K::string, nullptr, {}, {}, {}, true, "first Cantor set"});
    add({"K2", K::string, nullptr, {}, {}, {}, true, "second Cantor set"});
    add({"target", K::exact_pair, nullptr, -1e6, 1e6, {}, true, "interval [lo, hi]"});
    add({"depth_cap", K::integer, 14, 0, 64, {}, false, "largest refinement depth"});
    add({"node_budget", K::integer, 500000, 1, 1e8, {}, false, "proof node budget"});
    add({"proof", K::boolean, true, {}, {}, {}, false, "include the proof tree"});
  } else if (command == "sweep") {
    add({"K", K::string, nullptr, {}, {}, {}, true, "first Cantor set"});
    add({"K2", K::string, nullptr, {}, {}, {}, true, "second Cantor set"});
    add({"t_range", K::exact_pair, nullptr, -1e6, 1e6, {}, true, "translation range [a, b]"});
    add({"steps", K::integer, 101, 1, 100000, {}, false, "grid points"});
    add({"thickness_depth", K::integer, nullptr, 1, 10, {}, false, "thickness working depth"});
    add({"cross_check_depth", K::integer, 0, 0, 16, {}, false, "cylinder-pair cross-check depth, 0 = off"});
  } else if (command == "avoid") {
    add({"system", K::string, "catmap", {}, {}, {}, false, "catmap, shift:N, or sft"});
    add({"subshift", K::object, nullptr, {}, {}, {}, false, "SFT for system sft"});
    add({"forbid_cells", K::int_list, nullptr, 0, 1e6, {}, false, "symbols removed"});
    add({"forbid_word", K::int_list, nullptr, 0, 1e6, {}, false, "word removed"});
    add({"ratio", K::number, 1.0 / 3.0, 1e-9, 1 - 1e-9, {}, false, "contraction ratio for symbolic systems"});
  } else if (command == "catmap") {
    add({"max_period", K::integer, 6, 1, 14, {}, false, "largest period"});
    add({"points", K::string, nullptr, {}, {}, {}, false, "periodic points CSV path"});
  } else if (command == "limitgeom") {
    add({"set", K::string, "gauss:2", {}, {}, {}, false, "Cantor set"});
    add({"theta", K::int_list, nullptr, 0, 1e6, {}, true, "backward itinerary, symbols"});
    add({"n_range", K::int_pair, json::array({2, 10}), 0, 60, {}, false, "renormalization depths"});
    add({"points", K::integer, 33, 33, 4097, {}, false, "grid points"});
  } else if (command == "report") {
    add({"input", K::string, nullptr, {}, {}, {}, true, "report JSON to read"});
  }
  return keys;
}

namespace detail {

inline std::string type_name(KeyType t) {
  switch (t) {
    case KeyType::integer:
      return "an integer";
    case KeyType::number:
      return "a number";
    case KeyType::exact:
      return "a number or fraction string";
    case KeyType::string:
      return "a string";
    case KeyType::boolean:
      return "a boolean";
    case KeyType::int_list:
      return "a list of integers";
    case KeyType::exact_pair:
      return "a pair [lo, hi]";
    case KeyType::int_pair:
      return "a pair of integers [lo, hi]";
    case KeyType::object:
      return "an object";
  }
  return "?";
}

inline std::string bound_text(const KeySpec& k) {
  auto num = [](double x) {
    json j = x;
    if (x == std::floor(x) && std::abs(x) < 1e15) j = static_cast<std::int64_t>(x);
    return j.dump();
  };
  return "[" + (k.min ? num(*k.min) : "-inf") + ", " + (k.max ? num(*k.max) : "inf") + "]";
}

inline void check_key(const KeySpec& k, const json& v, std::vector<ValidationError>& errors) {
  const std::string& p = k.name;
  auto fail = [&](const std::string& path, const std::string& m) { errors.push_back({path, m}); };
  auto in_range = [&](double x) { return (!k.min || x >= *k.min) && (!k.max || x <= *k.max); };
  auto exact_in_range = [&](const BigRational& x) {
    return (!k.min || x >= rational_from_double(*k.min)) && (!k.max || x <= rational_from_double(*k.max));
  };
  switch (k.type) {
    case KeyType::integer:
      if (!v.is_number_integer()) return fail(p, "expected " + type_name(k.type));
      if (!in_range(static_cast<double>(v.get<std::int64_t>()))) fail(p, "must lie in " + bound_text(k));
      return;
    case KeyType::number:
      if (!v.is_number()) return fail(p, "expected " + type_name(k.type));
      if (!std::isfinite(v.get<double>()) || !in_range(v.get<double>())) fail(p, "must lie in " + bound_text(k));
      return;
    case KeyType::exact:
      try {
        if (!exact_in_range(exact_from_json(v))) fail(p, "must lie in " + bound_text(k));
      } catch (const std::exception& e) {
        fail(p, e.what());
      }
      return;
    case KeyType::string:
      if (!v.is_string()) return fail(p, "expected " + type_name(k.type));
      if (!k.choices.empty() && std::find(k.choices.begin(), k.choices.end(), v.get<std::string>()) == k.choices.end()) {
        std::string c;
        for (const auto& x : k.choices) c += (c.empty() ? "" : ", ") + x;
        fail(p, "must be one of " + c);
      }
      return;
    case KeyType::boolean:
      if (!v.is_boolean()) fail(p, "expected " + type_name(k.type));
      return;
    case KeyType::object:
      if (!v.is_object()) fail(p, "expected " + type_name(k.type));
      return;
    case KeyType::int_list:
      if (!v.is_array()) return fail(p, "expected " + type_name(k.type));
      for (std::size_t i = 0; i < v.size(); ++i) {
        std::string q = p + "[" + std::to_string(i) + "]";
        if (!v[i].is_number_integer()) {
          fail(q, "expected an integer");
        } else if (!in_range(static_cast<double>(v[i].get<std::int64_t>()))) {
          fail(q, "must lie in " + bound_text(k));
        }
      }
      return;
    case KeyType::int_pair:
    case KeyType::exact_pair: {
      if (!v.is_array() || v.size() != 2) return fail(p, "expected " + type_name(k.type));
      bool ok = true;
      std::vector<BigRational> x;
      for (std::size_t i = 0; i < 2; ++i) {
        std::string q = p + "[" + std::to_string(i) + "]";
        if (k.type == KeyType::int_pair && !v[i].is_number_integer()) {
          fail(q, "expected an integer");
          ok = false;
          continue;
        }
        try {
          x.push_back(exact_from_json(v[i]));
          if (!exact_in_range(x.back())) {
            fail(q, "must lie in " + bound_text(k));
            ok = false;
          }
        } catch (const std::exception& e) {
          fail(q, e.what());
          ok = false;
        }
      }
      if (ok && !(x[0] <= x[1])) fail(p, "needs lo <= hi");
      return;
    }
  }
}

inline void check_set(const json& params, const std::string& key, std::vector<ValidationError>& errors) {
  if (!params.contains(key) || !params[key].is_string()) return;
  try {
    parse_cantor_set(params[key].get<std::string>());
  } catch (const std::exception& e) {
    errors.push_back({key, e.what()});
  }
}

inline void check_expression(const json& params, const std::string& key, std::vector<std::string> vars,
                             std::vector<ValidationError>& errors) {
  if (!params.contains(key) || !params[key].is_string()) return;
  try {
    Expression(params[key].get<std::string>(), std::move(vars));
  } catch (const std::exception& e) {
    errors.push_back({key, e.what()});
  }
}

// Relations between keys that single-key bounds cannot express.
inline void check_command(const std::string& cmd, const json& c, std::vector<ValidationError>& errors) {
  auto has = [&](const char* k) { return c.contains(k) && !c[k].is_null(); };
  auto fail = [&](const std::string& path, const std::string& m) { errors.push_back({path, m}); };
  if (cmd == "spectrum") {
    std::string sys = c.value("system", "cf");
    if (has("observable") && c["observable"].is_string()) {
      std::string obs = c["observable"];
      if (sys == "cf" && obs != "height") check_expression(c, "observable", {"alpha", "beta"}, errors);
      if (sys == "catmap") check_expression(c, "observable", {"x", "y"}, errors);
      if (sys == "horseshoe" && obs != "x+y") check_expression(c, "observable", {"x", "y"}, errors);
      if (sys == "suspension") check_expression(c, "observable", {"x", "y", "s"}, errors);
    }
    check_expression(c, "roof", {"x", "y"}, errors);
    for (const char* k : {"lambda_s", "lambda_u"}) {
      if (!has(k)) continue;
      try {
        BigRational l = exact_from_json(c[k]);
        if (!(l > 0 && l < BigRational(1, 2))) fail(k, "must lie strictly inside (0, 1/2)");
      } catch (const std::exception&) {
      }
    }
  } else if (cmd == "cf") {
    if (has("right_period") && c["right_period"].is_array() && c["right_period"].empty())
      fail("right_period", "must not be empty");
    if (has("left_period") && c["left_period"].is_array() && c["left_period"].empty())
      fail("left_period", "must not be empty");
  } else if (cmd == "dimension" || cmd == "thickness" || cmd == "limitgeom") {
    check_set(c, "set", errors);
    if (cmd == "dimension" && has("depths") && c["depths"].is_array() && c["depths"].size() == 2 &&
        c["depths"][0].is_number_integer() && c["depths"][1].is_number_integer() &&
        c["depths"][1].get<int>() - c["depths"][0].get<int>() < 2)
      fail("depths", "needs at least 3 depths");
    if (cmd == "limitgeom" && has("theta") && c["theta"].is_array() && c["theta"].empty())
      fail("theta", "must not be empty");
  } else if (cmd == "sumset" || cmd == "sweep") {
    check_set(c, "K", errors);
    check_set(c, "K2", errors);
    if (cmd == "sumset" && has("target") && c["target"].is_array() && c["target"].size() == 2) {
      try {
        if (!(exact_from_json(c["target"][0]) < exact_from_json(c["target"][1]))) fail("target", "needs lo < hi");
      } catch (const std::exception&) {
      }
    }
  } else if (cmd == "avoid") {
    std::string sys = c.value("system", "catmap");
    bool known = sys == "catmap" || sys == "sft" || sys.rfind("shift:", 0) == 0;
    if (!known) fail("system", "must be catmap, shift:N or sft");
    if (sys.rfind("shift:", 0) == 0) {
      std::string n = sys.substr(6);
      if (n.empty() || n.size() > 2 || !std::all_of(n.begin(), n.end(), [](unsigned char ch) { return std::isdigit(ch); }) ||
          std::stoi(n) < 1)
        fail("system", "shift:N needs 1 <= N <= 99");
    }
    if (sys == "sft" && !has("subshift")) fail("subshift", "required when system is sft");
    if (sys != "sft" && has("subshift")) fail("subshift", "only allowed when system is sft");
    if (has("forbid_cells") == has("forbid_word")) fail("forbid_cells", "give exactly one of forbid_cells, forbid_word");
    for (const char* k : {"forbid_cells", "forbid_word"})
      if (has(k) && c[k].is_array() && c[k].empty()) fail(k, "must not be empty");
  }
}

}  // namespace detail

// Validates raw config JSON and fills defaults. Unknown keys are errors.
inline std::vector<ValidationError> validate_config(const json& raw, json* normalized = nullptr) {
  std::vector<ValidationError> errors;
  if (!raw.is_object()) return {{"$", "config must be a JSON object"}};
  if (!raw.contains("command") || !raw["command"].is_string()) return {{"command", "required string"}};
  const std::string cmd = raw["command"];
  if (std::find(command_names().begin(), command_names().end(), cmd) == command_names().end())
    return {{"command", "unknown command '" + cmd + "'"}};
  const auto keys = command_keys(cmd);
  json out = json::object();
  for (auto it = raw.begin(); it != raw.end(); ++it) {
    auto k = std::find_if(keys.begin(), keys.end(), [&](const KeySpec& s) { return s.name == it.key(); });
    if (k == keys.end()) {
      errors.push_back({it.key(), "unknown key for command '" + cmd + "'"});
      continue;
    }
    if (it.value().is_null()) continue;
    detail::check_key(*k, it.value(), errors);
    out[it.key()] = it.value();
  }
  for (const auto& k : keys) {
    if (out.contains(k.name)) continue;
    if (k.required) {
      errors.push_back({k.name, "required"});
    } else if (!k.fallback.is_null()) {
      out[k.name] = k.fallback;
    }
  }
  if (errors.empty()) detail::check_command(cmd, out, errors);
  if (normalized && errors.empty()) *normalized = std::move(out);
  return errors;
}

struct ExperimentConfig {
  std::string command;
  json params;  // validated, defaults filled
  std::optional<std::string> out;
  std::optional<std::string> csv;
  std::optional<std::string> plot;
  std::int64_t seed = 0;

  static ExperimentConfig from_json(const json& raw) {
    json params;
    auto errors = validate_config(raw, &params);
    if (!errors.empty()) throw ConfigError(std::move(errors));
    ExperimentConfig c;
    c.command = params["command"];
    c.seed = params["seed"];
    auto opt = [&](const char* k) -> std::optional<std::string> {
      if (params.contains(k)) return params[k].get<std::string>();
      return std::nullopt;
    };
    c.out = opt("out");
    c.csv = opt("csv");
    c.plot = opt("plot");
    if (c.csv && !c.plot) throw ConfigError("plot", "required when csv is given");
    if (c.command == "report" && !c.plot) throw ConfigError("plot", "required for the report command");
    if (c.command != "report" && c.plot && !c.csv) throw ConfigError("csv", "required when plot is given");
    c.params = std::move(params);
    return c;
  }

  // Echo without output locations, so the payload does not depend on where it is written.
  json echo() const {
    json e = params;
    for (const char* k : {"out", "csv"}) e.erase(k);
    return e;
  }
};

// Reads a flag value for a key: lists and pairs accept JSON or comma-separated text.
inline json flag_value(const KeySpec& k, const std::string& text) {
  switch (k.type) {
    case KeyType::string:
      return text;
    case KeyType::exact:
      return text;
    case KeyType::boolean:
      if (text == "true" || text == "1" || text == "yes") return true;
      if (text == "false" || text == "0" || text == "no") return false;
      return text;
    case KeyType::integer:
    case KeyType::number:
    case KeyType::object: {
      json v = json::parse(text, nullptr, false);
      return v.is_discarded() ? json(text) : v;
    }
    case KeyType::int_list:
    case KeyType::int_pair:
    case KeyType::exact_pair: {
      std::string t = text;
      if (t.empty() || t.front() != '[') t = "[" + t + "]";
      json v = json::parse(t, nullptr, false);
      if (!v.is_discarded()) return v;
      // fractions such as 1/2 are not JSON; keep the pieces as strings
      json arr = json::array();
      std::string inner = t.substr(1, t.size() - 2), piece;
      for (char ch : inner + ",") {
        if (ch == ',') {
          json n = json::parse(piece, nullptr, false);
          arr.push_back(n.is_discarded() ? json(piece) : n);
          piece.clear();
        } else if (!std::isspace(static_cast<unsigned char>(ch))) {
          piece += ch;
        }
      }
      return arr;
    }
  }
  return text;
}

}  // namespace spectra_lab
