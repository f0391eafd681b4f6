#include "lognls/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <variant>

namespace lognls {

namespace {

using Member = std::variant<int RunConfig::*, std::int64_t RunConfig::*, double RunConfig::*,
                            bool RunConfig::*, std::string RunConfig::*,
                            std::vector<double> RunConfig::*>;

struct KeyDef {
  const char *section;
  const char *key;
  Member member;
};

// Canonical key order; echo_config writes them in this order.
const std::vector<KeyDef> &key_table() {
  static const std::vector<KeyDef> table = {
      {"grid", "dims", &RunConfig::dims},
      {"grid", "points_per_axis", &RunConfig::points_per_axis},
      {"grid", "length_per_axis", &RunConfig::length_per_axis},
      {"physics", "hbar", &RunConfig::hbar},
      {"physics", "mass", &RunConfig::mass},
      {"physics", "kT", &RunConfig::kT},
      {"physics", "potential", &RunConfig::potential},
      {"physics", "omega", &RunConfig::omega},
      {"physics", "v0", &RunConfig::v0},
      {"evolution", "dt", &RunConfig::dt},
      {"evolution", "steps", &RunConfig::steps},
      {"evolution", "mode", &RunConfig::mode},
      {"evolution", "density_floor", &RunConfig::density_floor},
      {"evolution", "record_every", &RunConfig::record_every},
      {"scenario", "name", &RunConfig::name},
      {"scenario", "seed", &RunConfig::seed},
      {"scenario", "tolerance", &RunConfig::tolerance},
      {"scenario", "mode_index", &RunConfig::mode_index},
      {"scenario", "mode_index_y", &RunConfig::mode_index_y},
      {"scenario", "mode_index_z", &RunConfig::mode_index_z},
      {"scenario", "amplitude", &RunConfig::amplitude},
      {"scenario", "center", &RunConfig::center},
      {"scenario", "sigma", &RunConfig::sigma},
      {"scenario", "momentum", &RunConfig::momentum},
      {"scenario", "c_re", &RunConfig::c_re},
      {"scenario", "c_im", &RunConfig::c_im},
      {"scenario", "factor_x", &RunConfig::factor_x},
      {"scenario", "factor_y", &RunConfig::factor_y},
      {"scenario", "kt_values", &RunConfig::kt_values},
      {"scenario", "volumes", &RunConfig::volumes},
      {"scenario", "seeds", &RunConfig::seeds},
      {"scenario", "adversaries", &RunConfig::adversaries},
      {"scenario", "max_iters", &RunConfig::max_iters},
      {"scenario", "kkt_tolerance", &RunConfig::kkt_tolerance},
      {"scenario", "step_size", &RunConfig::step_size},
      {"output", "directory", &RunConfig::directory},
  };
  return table;
}

const std::set<std::string> &scenario_names() {
  static const std::set<std::string> names = {"plane_wave", "gausson", "scaling", "factorization",
                                              "spreading", "energy_bound_sweep", "relaxation"};
  return names;
}

struct RawValue {
  enum class Kind { Number, Bool, String } kind;
  std::string text; // number literal or unescaped string
  bool flag = false;
};

const char *kind_name(RawValue::Kind k) {
  switch (k) {
  case RawValue::Kind::Number: return "a number";
  case RawValue::Kind::Bool: return "a boolean";
  case RawValue::Kind::String: return "a string";
  }
  return "?";
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

// Drops a trailing `#` comment that is not inside a quoted string.
std::string strip_comment(std::string_view line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '\\' && quoted) {
      ++i;
    } else if (line[i] == '"') {
      quoted = !quoted;
    } else if (line[i] == '#' && !quoted) {
      return std::string(line.substr(0, i));
    }
  }
  return std::string(line);
}

RawValue lex_value(const std::string &where, const std::string &v) {
  if (v.empty()) throw ConfigError(where, "missing value");
  if (v.front() == '"') {
    if (v.size() < 2 || v.back() != '"') throw ConfigError(where, "unterminated string");
    std::string out;
    for (std::size_t i = 1; i + 1 < v.size(); ++i) {
      if (v[i] == '\\') {
        if (i + 2 >= v.size()) throw ConfigError(where, "dangling escape in string");
        const char c = v[++i];
        if (c == 'n') out += '\n';
        else if (c == 't') out += '\t';
        else out += c;
      } else if (v[i] == '"') {
        throw ConfigError(where, "unexpected quote inside string");
      } else {
        out += v[i];
      }
    }
    return {RawValue::Kind::String, out};
  }
  if (v == "true" || v == "false") return {RawValue::Kind::Bool, v, v == "true"};
  double probe = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), probe);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw ConfigError(where, "cannot parse value '" + v + "' (expected a number, boolean or quoted string)");
  return {RawValue::Kind::Number, v};
}

double to_double(const std::string &where, const std::string &text) {
  double d = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), d);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(d))
    throw ConfigError(where, "expected a finite number, got '" + text + "'");
  return d;
}

std::int64_t to_int(const std::string &where, const std::string &text) {
  std::int64_t i = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), i);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw ConfigError(where, "type mismatch: expected an integer, got '" + text + "'");
  return i;
}

std::vector<double> to_list(const std::string &where, const std::string &text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const std::string t = trim(item);
    if (t.empty()) throw ConfigError(where, "empty entry in list");
    out.push_back(to_double(where, t));
  }
  if (out.empty()) throw ConfigError(where, "list must not be empty");
  return out;
}

void assign(RunConfig &cfg, const KeyDef &def, const std::string &where, const RawValue &raw) {
  auto mismatch = [&](const char *expected) {
    throw ConfigError(where, std::string("type mismatch: expected ") + expected + ", got " +
                                 kind_name(raw.kind));
  };
  std::visit(
      [&](auto member) {
        using T = std::remove_cvref_t<decltype(cfg.*member)>;
        if constexpr (std::is_same_v<T, int>) {
          if (raw.kind != RawValue::Kind::Number) mismatch("an integer");
          const std::int64_t v = to_int(where, raw.text);
          if (v < -1000000000 || v > 1000000000) throw ConfigError(where, "integer out of range");
          cfg.*member = static_cast<int>(v);
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          if (raw.kind != RawValue::Kind::Number) mismatch("an integer");
          cfg.*member = to_int(where, raw.text);
        } else if constexpr (std::is_same_v<T, double>) {
          if (raw.kind != RawValue::Kind::Number) mismatch("a number");
          cfg.*member = to_double(where, raw.text);
        } else if constexpr (std::is_same_v<T, bool>) {
          if (raw.kind != RawValue::Kind::Bool) mismatch("a boolean");
          cfg.*member = raw.flag;
        } else if constexpr (std::is_same_v<T, std::string>) {
          if (raw.kind != RawValue::Kind::String) mismatch("a quoted string");
          cfg.*member = raw.text;
        } else {
          if (raw.kind != RawValue::Kind::String) mismatch("a quoted comma-separated list of numbers");
          cfg.*member = to_list(where, raw.text);
        }
      },
      def.member);
}

void require(bool ok, const char *key, const std::string &constraint) {
  if (!ok) throw ConfigError(key, "constraint violated: " + constraint);
}

void validate(const RunConfig &c) {
  require(c.dims >= 1 && c.dims <= 3, "grid.dims", "must be 1, 2 or 3");
  require(c.points_per_axis >= 8 && c.points_per_axis % 2 == 0, "grid.points_per_axis",
          "must be even, ≥ 8");
  require(c.length_per_axis > 0.0, "grid.length_per_axis", "must be > 0");

  require(c.hbar > 0.0, "physics.hbar", "must be > 0");
  require(c.mass > 0.0, "physics.mass", "must be > 0");
  require(c.potential == "zero" || c.potential == "harmonic" || c.potential == "constant",
          "physics.potential", "must be \"zero\", \"harmonic\" or \"constant\"");
  require(c.omega > 0.0, "physics.omega", "must be > 0");

  require(c.dt > 0.0, "evolution.dt", "must be > 0");
  require(c.steps >= 1, "evolution.steps", "must be ≥ 1");
  require(c.mode == "real" || c.mode == "imaginary", "evolution.mode",
          "must be \"real\" or \"imaginary\"");
  require(c.density_floor > 0.0, "evolution.density_floor", "must be > 0");
  require(c.record_every >= 1 && c.record_every <= c.steps, "evolution.record_every",
          "must be in [1, steps]");

  require(!c.name.empty(), "scenario.name", "is required");
  require(scenario_names().count(c.name) == 1, "scenario.name",
          "must be one of plane_wave, gausson, scaling, factorization, spreading, "
          "energy_bound_sweep, relaxation");
  require(c.seed >= 0, "scenario.seed", "must be ≥ 0");
  require(!c.has_tolerance || c.tolerance >= 0.0, "scenario.tolerance", "must be ≥ 0");
  require(c.sigma > 0.0, "scenario.sigma", "must be > 0");
  require(c.amplitude > 0.0, "scenario.amplitude", "must be > 0");
  require(std::abs(c.center) < 0.5 * c.length_per_axis, "scenario.center",
          "must lie inside the box (|center| < length_per_axis / 2)");
  require(c.seeds >= 1, "scenario.seeds", "must be ≥ 1");
  require(c.adversaries >= 0, "scenario.adversaries", "must be ≥ 0");
  require(c.max_iters >= 1, "scenario.max_iters", "must be ≥ 1");
  require(c.kkt_tolerance > 0.0, "scenario.kkt_tolerance", "must be > 0");
  require(c.step_size > 0.0 && c.step_size <= 1.0, "scenario.step_size", "must be in (0, 1]");
  for (double v : c.volumes) require(v > 0.0, "scenario.volumes", "entries must be > 0");
  for (const auto *f : {&c.factor_x, &c.factor_y})
    require(*f == "gaussian" || *f == "plane_wave" || *f == "gausson",
            f == &c.factor_x ? "scenario.factor_x" : "scenario.factor_y",
            "must be \"gaussian\", \"plane_wave\" or \"gausson\"");

  const bool real_time = c.mode == "real";
  const auto half = c.points_per_axis / 2;
  if (c.name == "plane_wave") {
    require(real_time, "evolution.mode", "plane_wave requires \"real\"");
    require(c.potential != "harmonic", "physics.potential",
            "plane_wave requires a spatially constant potential");
    require(std::abs(c.mode_index) < half, "scenario.mode_index", "|mode_index| must be < n/2");
    require(std::abs(c.mode_index_y) < half, "scenario.mode_index_y", "|mode_index_y| must be < n/2");
    require(std::abs(c.mode_index_z) < half, "scenario.mode_index_z", "|mode_index_z| must be < n/2");
  } else if (c.name == "gausson") {
    require(real_time, "evolution.mode", "gausson requires \"real\"");
    require(c.kT < 0.0, "physics.kT", "gausson requires kT < 0");
  } else if (c.name == "scaling") {
    require(real_time, "evolution.mode", "scaling requires \"real\"");
    require(c.c_re != 0.0 || c.c_im != 0.0, "scenario.c_re", "c must be nonzero");
  } else if (c.name == "factorization") {
    require(c.dims == 2, "grid.dims", "factorization requires dims = 2");
    require(c.potential != "constant", "physics.potential",
            "factorization requires a separable potential (zero or harmonic)");
    if (c.factor_x == "gausson" || c.factor_y == "gausson")
      require(c.kT < 0.0, "physics.kT", "gausson factors require kT < 0");
    if (c.factor_x == "plane_wave" || c.factor_y == "plane_wave")
      require(std::abs(c.mode_index) < half, "scenario.mode_index", "|mode_index| must be < n/2");
  } else if (c.name == "spreading") {
    require(real_time, "evolution.mode", "spreading requires \"real\"");
    bool has_zero = false;
    for (double k : c.kt_values) has_zero = has_zero || k == 0.0;
    require(has_zero, "scenario.kt_values", "must include 0");
  } else if (c.name == "relaxation") {
    require(!real_time, "evolution.mode", "relaxation requires \"imaginary\"");
  }
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string quote(const std::string &s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch;
  }
  return out + "\"";
}

} // namespace

RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  std::map<std::string, const KeyDef *> defs;
  std::set<std::string> sections;
  for (const KeyDef &d : key_table()) {
    defs[std::string(d.section) + "." + d.key] = &d;
    sections.insert(d.section);
  }

  std::set<std::string> seen;
  std::string section;
  std::istringstream in{std::string(text)};
  std::string raw_line;
  int line_no = 0;
  while (std::getline(in, raw_line)) {
    ++line_no;
    const std::string line = trim(strip_comment(raw_line));
    if (line.empty()) continue;
    const std::string at = "line " + std::to_string(line_no);
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("", at + ": malformed section header");
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      if (sections.count(section) == 0) throw ConfigError("[" + section + "]", "unknown section");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("", at + ": expected key = value");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (section.empty()) throw ConfigError(key, at + ": key outside of any section");
    const std::string where = section + "." + key;
    const auto it = defs.find(where);
    if (it == defs.end()) throw ConfigError(where, "unknown key");
    if (!seen.insert(where).second) throw ConfigError(where, "duplicate key");
    assign(cfg, *it->second, where, lex_value(where, value));
    if (where == "scenario.tolerance") cfg.has_tolerance = true;
  }
  validate(cfg);
  // Module preconditions that only show up when the spec is assembled.
  (void)to_scenario_spec(cfg);
  return cfg;
}

std::string echo_config(const RunConfig &cfg) {
  std::ostringstream os;
  std::string section;
  for (const KeyDef &d : key_table()) {
    if (std::string_view(d.key) == "tolerance" && !cfg.has_tolerance) continue;
    if (section != d.section) {
      if (!section.empty()) os << '\n';
      section = d.section;
      os << '[' << section << "]\n";
    }
    os << d.key << " = ";
    std::visit(
        [&](auto member) {
          using T = std::remove_cvref_t<decltype(cfg.*member)>;
          const auto &v = cfg.*member;
          if constexpr (std::is_same_v<T, double>) {
            os << format_double(v);
          } else if constexpr (std::is_same_v<T, bool>) {
            os << (v ? "true" : "false");
          } else if constexpr (std::is_same_v<T, std::string>) {
            os << quote(v);
          } else if constexpr (std::is_same_v<T, std::vector<double>>) {
            std::string list;
            for (std::size_t i = 0; i < v.size(); ++i) list += (i ? ", " : "") + format_double(v[i]);
            os << quote(list);
          } else {
            os << v;
          }
        },
        d.member);
    os << '\n';
  }
  return os.str();
}

ScenarioSpec to_scenario_spec(const RunConfig &c) {
  try {
    const GridSpec grid = make_cubic_grid(c.dims, c.points_per_axis, c.length_per_axis);
    PhysicalParams params{.hbar = c.hbar, .mass = c.mass, .kT = c.kT};
    if (c.potential == "harmonic") {
      params.potential = HarmonicPotential{{c.omega, c.omega, c.omega}, {0.0, 0.0, 0.0}};
    } else if (c.potential == "constant") {
      params.potential = SampledPotential{RealField(grid, std::vector<double>(grid.size(), c.v0))};
    }
    EvolutionConfig evo{.dt = c.dt,
                        .steps = static_cast<std::size_t>(c.steps),
                        .mode = c.mode == "imaginary" ? TimeMode::ImaginaryTime : TimeMode::RealTime,
                        .density_floor = c.density_floor,
                        .record_every = static_cast<std::size_t>(c.record_every)};
    ScenarioSetup setup{grid, params, evo};

    GaussianPacket packet;
    packet.sigma = c.sigma;
    packet.center = {c.center, c.dims > 1 ? c.center : 0.0, c.dims > 2 ? c.center : 0.0};
    packet.momentum = {c.momentum, 0.0, 0.0};

    auto factor = [&](const std::string &kind) {
      FactorState f;
      if (kind == "plane_wave") f.kind = FactorState::Kind::PlaneWave;
      else if (kind == "gausson") f.kind = FactorState::Kind::Gausson;
      f.packet.sigma = c.sigma;
      f.packet.center = {c.center, 0.0, 0.0};
      f.packet.momentum = {c.momentum, 0.0, 0.0};
      f.mode_index = static_cast<int>(c.mode_index);
      f.amplitude = c.amplitude;
      f.center = c.center;
      return f;
    };

    if (c.name == "plane_wave")
      return PlaneWaveSpec{setup,
                           {static_cast<int>(c.mode_index), static_cast<int>(c.mode_index_y),
                            static_cast<int>(c.mode_index_z)},
                           c.amplitude};
    if (c.name == "gausson") return GaussonSpec{setup, packet.center};
    if (c.name == "scaling") return ScalingSpec{setup, Complex(c.c_re, c.c_im), packet};
    if (c.name == "factorization")
      return FactorizationSpec{setup, factor(c.factor_x), factor(c.factor_y)};
    if (c.name == "spreading") return SpreadingSpec{setup, c.kt_values, packet};
    if (c.name == "relaxation") return RelaxationSpec{setup, packet};
    if (c.name == "energy_bound_sweep") {
      EnergyBoundSweepSpec s;
      s.volumes = c.volumes;
      s.dims = c.dims;
      s.points = c.points_per_axis;
      s.seeds = static_cast<std::size_t>(c.seeds);
      s.random_adversaries = static_cast<std::size_t>(c.adversaries);
      s.minimizer = MinimizerConfig{static_cast<std::size_t>(c.max_iters), c.kkt_tolerance,
                                    c.step_size, static_cast<std::uint64_t>(c.seed)};
      return s;
    }
  } catch (const InvalidArgument &e) {
    throw ConfigError("scenario", e.what());
  }
  throw ConfigError("scenario.name", "unknown scenario '" + c.name + "'");
}

} // namespace lognls
