#include "degtherm/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace degtherm {

namespace {

struct Value {
  std::string text;
  std::size_t line = 0;
  std::size_t column = 0;

  [[noreturn]] void fail(const std::string& what, std::size_t offset = 0) const {
    throw ConfigError(what, line, column + offset);
  }
};

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

double to_double(const Value& v) {
  const std::string s = trim(v.text);
  char* end = nullptr;
  const double d = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(d))
    v.fail("expected a finite number, got '" + s + "'");
  return d;
}

long long to_integer(const Value& v) {
  const std::string s = trim(v.text);
  char* end = nullptr;
  const long long n = std::strtoll(s.c_str(), &end, 10);
  if (s.empty() || end != s.c_str() + s.size()) v.fail("expected an integer, got '" + s + "'");
  return n;
}

std::uint64_t to_u64(const Value& v) {
  const std::string s = trim(v.text);
  char* end = nullptr;
  if (s.empty() || s[0] == '-') v.fail("expected a nonnegative integer, got '" + s + "'");
  const unsigned long long n = std::strtoull(s.c_str(), &end, 10);
  if (end != s.c_str() + s.size()) v.fail("expected a nonnegative integer, got '" + s + "'");
  return n;
}

bool to_bool(const Value& v) {
  const std::string s = trim(v.text);
  if (s == "true") return true;
  if (s == "false") return false;
  v.fail("expected true or false, got '" + s + "'");
}

std::vector<Value> split_list(const Value& v) {
  std::vector<Value> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= v.text.size(); ++i) {
    if (i == v.text.size() || v.text[i] == ',') {
      out.push_back({v.text.substr(start, i - start), v.line, v.column + start});
      start = i + 1;
    }
  }
  return out;
}

std::vector<double> to_doubles(const Value& v) {
  std::vector<double> out;
  for (const auto& item : split_list(v)) out.push_back(to_double(item));
  return out;
}

std::vector<Index> to_indices(const Value& v) {
  std::vector<Index> out;
  for (const auto& item : split_list(v)) out.push_back(static_cast<Index>(to_integer(item)));
  return out;
}

std::vector<std::uint64_t> to_u64s(const Value& v) {
  std::vector<std::uint64_t> out;
  for (const auto& item : split_list(v)) out.push_back(to_u64(item));
  return out;
}

template <typename T>
std::string join(const std::vector<T>& v) {
  std::string s;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (k) s += ", ";
    if constexpr (std::is_floating_point_v<T>) s += format_double(v[k]);
    else s += std::to_string(v[k]);
  }
  return s;
}

Expression to_expression(const Value& v) {
  const std::size_t lead = v.text.find_first_not_of(" \t");
  const std::string s = trim(v.text);
  try {
    return Expression::parse(s);
  } catch (const ExpressionError& e) {
    const std::string msg = e.what();
    const std::size_t colon = msg.find(": ");
    v.fail(colon == std::string::npos ? msg : msg.substr(colon + 2),
           (lead == std::string::npos ? 0 : lead) + e.column - 1);
  }
}

// -- model syntax: name(key=value, key=[v v v]) ------------------------------

struct ModelCall {
  std::string name;
  std::vector<std::pair<std::string, std::vector<double>>> args;
  std::vector<std::size_t> arg_columns;
};

ModelCall parse_call(const Value& v) {
  const std::string& s = v.text;
  std::size_t i = 0;
  auto skip = [&] {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  };
  auto word = [&] {
    const std::size_t a = i;
    while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
    return s.substr(a, i - a);
  };
  auto number = [&] {
    skip();
    const char* b = s.c_str() + i;
    char* e = nullptr;
    const double d = std::strtod(b, &e);
    if (e == b || !std::isfinite(d)) v.fail("expected a number", i);
    i += static_cast<std::size_t>(e - b);
    return d;
  };
  ModelCall call;
  skip();
  call.name = word();
  if (call.name.empty()) v.fail("expected a model name", i);
  skip();
  if (i == s.size()) return call;
  if (s[i] != '(') v.fail("expected '('", i);
  ++i;
  skip();
  if (i < s.size() && s[i] == ')') {
    ++i;
  } else {
    for (;;) {
      skip();
      const std::size_t col = i;
      const std::string key = word();
      if (key.empty()) v.fail("expected a parameter name", i);
      skip();
      if (i >= s.size() || s[i] != '=') v.fail("expected '=' after " + key, i);
      ++i;
      skip();
      std::vector<double> vals;
      if (i < s.size() && s[i] == '[') {
        ++i;
        for (;;) {
          skip();
          if (i < s.size() && s[i] == ']') {
            ++i;
            break;
          }
          vals.push_back(number());
          skip();
          if (i < s.size() && s[i] == ',') ++i;
        }
      } else {
        vals.push_back(number());
      }
      call.args.emplace_back(key, std::move(vals));
      call.arg_columns.push_back(col);
      skip();
      if (i < s.size() && s[i] == ',') {
        ++i;
        continue;
      }
      if (i < s.size() && s[i] == ')') {
        ++i;
        break;
      }
      v.fail("expected ',' or ')'", i);
    }
  }
  skip();
  if (i != s.size()) v.fail("unexpected text after model", i);
  return call;
}

// Assigns scalar arguments to the named slots; unknown names are errors.
void bind(const Value& v, const ModelCall& call, const std::map<std::string, double*>& slots) {
  for (std::size_t k = 0; k < call.args.size(); ++k) {
    const auto& [key, vals] = call.args[k];
    const auto it = slots.find(key);
    if (it == slots.end())
      v.fail("unknown parameter '" + key + "' for " + call.name, call.arg_columns[k]);
    if (vals.size() != 1) v.fail("parameter '" + key + "' takes one number", call.arg_columns[k]);
    *it->second = vals[0];
  }
}

ResistivityModel to_resistivity(const Value& v) {
  const ModelCall call = parse_call(v);
  try {
    if (call.name == "powerlaw") {
      PowerLaw m;
      bind(v, call, {{"a", &m.a}, {"b", &m.b}, {"p", &m.p}});
      return ResistivityModel(m);
    }
    if (call.name == "semiconductor") {
      Semiconductor m;
      bind(v, call, {{"sigma0", &m.sigma0}, {"q", &m.q}});
      return ResistivityModel(m);
    }
    if (call.name == "blochgruneisen") {
      BlochGruneisen m;
      bind(v, call, {{"rho0", &m.rho0}, {"A", &m.A}, {"theta", &m.theta}, {"n", &m.n}});
      return ResistivityModel(m);
    }
  } catch (const DomainError& e) {
    v.fail(e.what());
  }
  v.fail("unknown resistivity model '" + call.name +
         "' (powerlaw, semiconductor, blochgruneisen)");
}

ConductivityModel to_conductivity(const Value& v) {
  const ModelCall call = parse_call(v);
  try {
    if (call.name == "constant") {
      ConstantKappa m;
      bind(v, call, {{"kappa0", &m.kappa0}});
      return ConductivityModel(m);
    }
    if (call.name == "wiedemannfranz") {
      WiedemannFranz m;
      bind(v, call, {{"lorentz", &m.lorentz}});
      return ConductivityModel(m);
    }
    if (call.name == "table") {
      SmoothTable m;
      for (std::size_t k = 0; k < call.args.size(); ++k) {
        const auto& [key, vals] = call.args[k];
        if (key == "s") m.s = vals;
        else if (key == "kappa") m.kappa = vals;
        else v.fail("unknown parameter '" + key + "' for table", call.arg_columns[k]);
      }
      return ConductivityModel(m);
    }
  } catch (const DomainError& e) {
    v.fail(e.what());
  }
  v.fail("unknown conductivity model '" + call.name + "' (constant, wiedemannfranz, table)");
}

std::string list_text(const std::vector<double>& v) {
  std::string s = "[";
  for (std::size_t k = 0; k < v.size(); ++k) s += (k ? ", " : "") + format_double(v[k]);
  return s + "]";
}

// -- key registry -------------------------------------------------------------

struct Field {
  std::string section;  // "" for top level
  std::string key;
  std::function<void(RunConfig&, const Value&)> set;
  std::function<std::string(const RunConfig&)> get;
};

template <typename T>
Field number_field(std::string section, std::string key, T RunConfig::*member) {
  return {section, key,
          [member](RunConfig& c, const Value& v) {
            if constexpr (std::is_floating_point_v<T>) c.*member = to_double(v);
            else c.*member = static_cast<T>(to_integer(v));
          },
          [member](const RunConfig& c) {
            if constexpr (std::is_floating_point_v<T>) return format_double(c.*member);
            else return std::to_string(c.*member);
          }};
}

// Member of a nested struct: access(c) returns a reference to the value.
template <typename T, typename Access>
Field nested(std::string section, std::string key, Access access) {
  return {section, key,
          [access](RunConfig& c, const Value& v) {
            T& slot = access(c);
            if constexpr (std::is_same_v<T, bool>) slot = to_bool(v);
            else if constexpr (std::is_floating_point_v<T>) slot = to_double(v);
            else slot = static_cast<T>(to_integer(v));
          },
          [access](const RunConfig& c) {
            const T& slot = access(const_cast<RunConfig&>(c));
            if constexpr (std::is_same_v<T, bool>) return std::string(slot ? "true" : "false");
            else if constexpr (std::is_floating_point_v<T>) return format_double(slot);
            else return std::to_string(slot);
          }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> f = [] {
    std::vector<Field> v;
    v.push_back({"", "seed", [](RunConfig& c, const Value& x) { c.seed = to_u64(x); },
                 [](const RunConfig& c) { return std::to_string(c.seed); }});
    v.push_back(number_field("domain", "lx", &RunConfig::lx));
    v.push_back(number_field("domain", "ly", &RunConfig::ly));
    v.push_back(number_field("domain", "nx", &RunConfig::nx));
    v.push_back(number_field("domain", "ny", &RunConfig::ny));
    v.push_back(number_field("domain", "x0", &RunConfig::x0));
    v.push_back(number_field("domain", "y0", &RunConfig::y0));
    v.push_back(number_field("time", "T", &RunConfig::T));
    v.push_back(number_field("time", "dt", &RunConfig::dt));
    v.push_back(number_field("time", "save_every", &RunConfig::save_every));
    v.push_back({"material", "resistivity",
                 [](RunConfig& c, const Value& x) { c.materials.resistivity = to_resistivity(x); },
                 [](const RunConfig& c) { return emit_resistivity(c.materials.resistivity); }});
    v.push_back({"material", "conductivity",
                 [](RunConfig& c, const Value& x) { c.materials.conductivity = to_conductivity(x); },
                 [](const RunConfig& c) { return emit_conductivity(c.materials.conductivity); }});
    v.push_back({"data", "u0",
                 [](RunConfig& c, const Value& x) {
                   const std::string s = trim(x.text);
                   if (s.rfind("file:", 0) == 0) {
                     c.u0_file = trim(s.substr(5));
                     if (c.u0_file.empty()) x.fail("empty file name");
                     c.u0 = Expression::parse("1");
                   } else {
                     c.u0_file.clear();
                     c.u0 = to_expression(x);
                   }
                 },
                 [](const RunConfig& c) {
                   return c.u0_file.empty() ? c.u0.text() : "file:" + c.u0_file;
                 }});
    v.push_back({"data", "g", [](RunConfig& c, const Value& x) { c.g = to_expression(x); },
                 [](const RunConfig& c) { return c.g.text(); }});
    v.push_back({"data", "h", [](RunConfig& c, const Value& x) { c.h = to_expression(x); },
                 [](const RunConfig& c) { return c.h.text(); }});
    v.push_back(number_field("regularization", "eps", &RunConfig::eps));
    v.push_back(nested<double>("regularization", "eps0", [](RunConfig& c) -> double& { return c.schedule.eps0; }));
    v.push_back(nested<double>("regularization", "gamma", [](RunConfig& c) -> double& { return c.schedule.gamma; }));
    v.push_back(nested<int>("regularization", "count", [](RunConfig& c) -> int& { return c.schedule.count; }));
    v.push_back(nested<double>("solver", "tol_couple", [](RunConfig& c) -> double& { return c.tol.tol_couple; }));
    v.push_back(nested<int>("solver", "max_couple", [](RunConfig& c) -> int& { return c.tol.max_couple; }));
    v.push_back(nested<double>("solver", "tol_picard", [](RunConfig& c) -> double& { return c.tol.picard.tol_picard; }));
    v.push_back(nested<int>("solver", "max_picard", [](RunConfig& c) -> int& { return c.tol.picard.max_picard; }));
    v.push_back(nested<double>("solver", "cg_rtol", [](RunConfig& c) -> double& { return c.tol.cg.rtol; }));
    v.push_back(nested<int>("solver", "cg_max_iter", [](RunConfig& c) -> int& { return c.tol.cg.max_iter; }));
    v.push_back(nested<double>("solver", "invariant_tol", [](RunConfig& c) -> double& { return c.tol.invariant_tol; }));
    v.push_back(number_field("solver", "threads", &RunConfig::threads));
    v.push_back(nested<Index>("norms", "stride", [](RunConfig& c) -> Index& { return c.norms.stride; }));
    v.push_back(nested<double>("norms", "r_min", [](RunConfig& c) -> double& { return c.norms.r_min; }));
    v.push_back(nested<double>("norms", "r_max", [](RunConfig& c) -> double& { return c.norms.r_max; }));
    v.push_back({"norms", "radii",
                 [](RunConfig& c, const Value& x) {
                   const std::string s = trim(x.text);
                   if (s == "dyadic") c.norms.radii = WindowPolicy::Radii::Dyadic;
                   else if (s == "linear") c.norms.radii = WindowPolicy::Radii::Linear;
                   else x.fail("expected dyadic or linear, got '" + s + "'");
                 },
                 [](const RunConfig& c) {
                   return std::string(c.norms.radii == WindowPolicy::Radii::Dyadic ? "dyadic" : "linear");
                 }});
    v.push_back(nested<Index>("norms", "time_stride", [](RunConfig& c) -> Index& { return c.norms.time_stride; }));
    v.push_back(nested<Index>("norms", "time_subsample", [](RunConfig& c) -> Index& { return c.norms.time_subsample; }));
    v.push_back(nested<Index>("norms", "random_pairs", [](RunConfig& c) -> Index& { return c.norms.random_pairs; }));
    v.push_back(nested<double>("norms", "c_ext", [](RunConfig& c) -> double& { return c.norms.c_ext; }));
    v.push_back({"norms", "alphas", [](RunConfig& c, const Value& x) { c.norms.alphas = to_doubles(x); },
                 [](const RunConfig& c) { return join(c.norms.alphas); }});
    auto thr = [&v](const char* key, double Thresholds::*m) {
      v.push_back(nested<double>("verify", key, [m](RunConfig& c) -> double& { return c.verify.thresholds.*m; }));
    };
    thr("energy_refinement", &Thresholds::energy_refinement);
    thr("energy_scaling", &Thresholds::energy_scaling);
    thr("bmo_growth", &Thresholds::bmo_growth);
    thr("a2_variation", &Thresholds::a2_variation);
    thr("holder_change", &Thresholds::holder_change);
    thr("linear_horizon", &Thresholds::linear_horizon);
    thr("seed_spread", &Thresholds::seed_spread);
    thr("uniqueness_spread", &Thresholds::uniqueness_spread);
    v.push_back({"verify", "deltas", [](RunConfig& c, const Value& x) { c.verify.deltas = to_doubles(x); },
                 [](const RunConfig& c) { return join(c.verify.deltas); }});
    v.push_back({"verify", "refinement",
                 [](RunConfig& c, const Value& x) { c.verify.refinement = to_indices(x); },
                 [](const RunConfig& c) { return join(c.verify.refinement); }});
    v.push_back(nested<int>("verify", "horizon_factor", [](RunConfig& c) -> int& { return c.verify.horizon_factor; }));
    v.push_back(nested<bool>("verify", "linear", [](RunConfig& c) -> bool& { return c.verify.linear; }));
    auto lin = [](RunConfig& c) -> LinearExperimentConfig& { return c.verify.experiment; };
    v.push_back(nested<Index>("verify", "linear_n", [lin](RunConfig& c) -> Index& { return lin(c).n; }));
    v.push_back(nested<double>("verify", "linear_T", [lin](RunConfig& c) -> double& { return lin(c).T; }));
    v.push_back(nested<double>("verify", "linear_dt", [lin](RunConfig& c) -> double& { return lin(c).dt; }));
    v.push_back(nested<double>("verify", "contrast", [lin](RunConfig& c) -> double& { return lin(c).contrast; }));
    v.push_back(nested<Index>("verify", "blocks", [lin](RunConfig& c) -> Index& { return lin(c).blocks; }));
    v.push_back(nested<double>("verify", "time_block", [lin](RunConfig& c) -> double& { return lin(c).time_block; }));
    v.push_back({"verify", "time_pattern",
                 [lin](RunConfig& c, const Value& x) {
                   const std::string s = trim(x.text);
                   using P = LinearExperimentConfig::TimePattern;
                   if (s == "alternating") lin(c).time_pattern = P::Alternating;
                   else if (s == "redraw") lin(c).time_pattern = P::Redraw;
                   else x.fail("expected alternating or redraw, got '" + s + "'");
                 },
                 [lin](const RunConfig& c) {
                   return std::string(lin(const_cast<RunConfig&>(c)).time_pattern ==
                                              LinearExperimentConfig::TimePattern::Alternating
                                          ? "alternating"
                                          : "redraw");
                 }});
    v.push_back(nested<bool>("verify", "uniform_coefficient", [lin](RunConfig& c) -> bool& { return lin(c).uniform_coefficient; }));
    v.push_back(nested<double>("verify", "source_scale", [lin](RunConfig& c) -> double& { return lin(c).source_scale; }));
    v.push_back(nested<Index>("verify", "linear_time_subsample", [lin](RunConfig& c) -> Index& { return lin(c).time_subsample; }));
    v.push_back({"verify", "seeds", [lin](RunConfig& c, const Value& x) { lin(c).seeds = to_u64s(x); },
                 [lin](const RunConfig& c) { return join(lin(const_cast<RunConfig&>(c)).seeds); }});
    return v;
  }();
  return f;
}

const std::vector<std::string>& section_order() {
  static const std::vector<std::string> s{"domain", "time", "material", "data", "regularization",
                                          "solver", "norms", "verify"};
  return s;
}

// Maps a spec validation failure to the key it concerns.
std::string key_for(const std::string& message) {
  if (message.find("min g") != std::string::npos || message.find("compatib") != std::string::npos)
    return "data.g";
  if (message.find("u0") != std::string::npos) return "data.u0";
  if (message.find("regularization") != std::string::npos) return "regularization.eps";
  if (message.find("multiple of dt") != std::string::npos) return "time.dt";
  if (message.find("H1") != std::string::npos || message.find("H2") != std::string::npos ||
      message.find("material") != std::string::npos)
    return "material.resistivity";
  return "";
}

}  // namespace

std::string emit_resistivity(const ResistivityModel& m) {
  return std::visit(
      [](const auto& r) -> std::string {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, PowerLaw>)
          return "powerlaw(a=" + format_double(r.a) + ", b=" + format_double(r.b) +
                 ", p=" + format_double(r.p) + ")";
        else if constexpr (std::is_same_v<T, Semiconductor>)
          return "semiconductor(sigma0=" + format_double(r.sigma0) + ", q=" + format_double(r.q) + ")";
        else
          return "blochgruneisen(rho0=" + format_double(r.rho0) + ", A=" + format_double(r.A) +
                 ", theta=" + format_double(r.theta) + ", n=" + format_double(r.n) + ")";
      },
      m.variant());
}

std::string emit_conductivity(const ConductivityModel& m) {
  return std::visit(
      [](const auto& k) -> std::string {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, ConstantKappa>)
          return "constant(kappa0=" + format_double(k.kappa0) + ")";
        else if constexpr (std::is_same_v<T, WiedemannFranz>)
          return "wiedemannfranz(lorentz=" + format_double(k.lorentz) + ")";
        else
          return "table(s=" + list_text(k.s) + ", kappa=" + list_text(k.kappa) + ")";
      },
      m.variant());
}

RunConfig parse_config(const std::string& text, bool validate) {
  RunConfig c;
  std::map<std::string, Value> where;
  std::string section;
  std::istringstream is(text);
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(is, raw)) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    std::string line = raw;
    const std::size_t hash = line.find_first_of("#;");
    if (hash != std::string::npos) line = line.substr(0, hash);
    const std::size_t lead = line.find_first_not_of(" \t");
    if (lead == std::string::npos) continue;
    if (line[lead] == '[') {
      const std::size_t close = line.find(']', lead);
      if (close == std::string::npos) throw ConfigError("unterminated section header", line_no, lead + 1);
      if (!trim(line.substr(close + 1)).empty())
        throw ConfigError("unexpected text after section header", line_no, close + 2);
      section = trim(line.substr(lead + 1, close - lead - 1));
      if (std::find(section_order().begin(), section_order().end(), section) == section_order().end())
        throw ConfigError("unknown section [" + section + "]", line_no, lead + 1);
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("expected key = value", line_no, lead + 1);
    const std::string key = trim(line.substr(lead, eq - lead));
    const auto it = std::find_if(fields().begin(), fields().end(), [&](const Field& f) {
      return f.section == section && f.key == key;
    });
    if (it == fields().end())
      throw ConfigError("unknown key '" + key + "'" + (section.empty() ? "" : " in [" + section + "]"),
                        line_no, lead + 1);
    const std::string qualified = section.empty() ? key : section + "." + key;
    if (where.count(qualified)) throw ConfigError("duplicate key '" + key + "'", line_no, lead + 1);
    std::size_t vstart = eq + 1;
    while (vstart < line.size() && std::isspace(static_cast<unsigned char>(line[vstart]))) ++vstart;
    const Value v{line.substr(vstart), line_no, vstart + 1};
    if (trim(v.text).empty()) v.fail("missing value for '" + key + "'");
    it->set(c, v);
    where[qualified] = v;
  }
  if (!validate) return c;

  auto fail_at = [&](const std::string& key, const std::string& what) {
    const auto w = where.find(key);
    if (w == where.end()) throw ConfigError(what + " (default value of " + key + ")", 0, 0);
    throw ConfigError(what, w->second.line, w->second.column);
  };
  if (c.save_every < 1) fail_at("time.save_every", "save_every must be >= 1");
  if (c.threads < 0) fail_at("solver.threads", "threads must be >= 0");
  try {
    make_grid(c);
  } catch (const DomainError& e) {
    fail_at("domain.nx", e.what());
  }
  try {
    validate_spec(to_problem_spec(c));
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    const std::string key = key_for(e.what());
    if (key.empty()) throw ConfigError(e.what(), 0, 0);
    fail_at(key, e.what());
  }
  return c;
}

RunConfig read_config_file(const std::string& path, bool validate) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path, 0, 0);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), validate);
}

std::string emit_config(const RunConfig& c) {
  std::ostringstream os;
  for (const auto& f : fields())
    if (f.section.empty()) os << f.key << " = " << f.get(c) << "\n";
  for (const auto& s : section_order()) {
    os << "\n[" << s << "]\n";
    for (const auto& f : fields())
      if (f.section == s) os << f.key << " = " << f.get(c) << "\n";
  }
  return os.str();
}

RunConfig reference_config() { return RunConfig{}; }

Grid2D make_grid(const RunConfig& c) {
  if (!(c.lx > 0.0) || !(c.ly > 0.0)) throw DomainError("domain lengths must be positive");
  return Grid2D::rectangle(c.lx, c.ly, c.nx, c.ny, c.x0, c.y0);
}

ProblemSpec to_problem_spec(const RunConfig& c) {
  ProblemSpec s;
  s.grid = make_grid(c);
  s.T = c.T;
  s.dt = c.dt;
  s.materials = c.materials;
  s.eps = c.eps;
  s.tol = c.tol;
  if (c.u0_file.empty()) {
    const Expression u0 = c.u0;
    s.u0 = [u0](double x, double y) { return u0(x, y, 0.0); };
  } else {
    const ScalarField f = read_snapshot_file(c.u0_file);
    if (!(f.grid == s.grid)) throw DomainError("u0 snapshot grid differs from [domain]");
    const Grid2D g = s.grid;
    s.u0 = [f, g](double x, double y) {
      const auto i = static_cast<Index>(std::llround((x - g.x0()) / g.dx()));
      const auto j = static_cast<Index>(std::llround((y - g.y0()) / g.dy()));
      return f(std::clamp<Index>(i, 0, g.nx()), std::clamp<Index>(j, 0, g.ny()));
    };
  }
  const Expression g = c.g, h = c.h;
  s.g = [g](double x, double y, double t) { return g(x, y, t); };
  s.h = [h](double x, double y, double t) { return h(x, y, t); };
  return s;
}

NormPolicy to_norm_policy(const RunConfig& c, const Grid2D& g, double c_data) {
  NormPolicy p;
  p.windows.stride = c.norms.stride > 0 ? c.norms.stride : std::max<Index>(1, g.nx() / 32);
  p.windows.r_min = c.norms.r_min;
  p.windows.r_max = c.norms.r_max;
  p.windows.radii = c.norms.radii;
  p.windows.time_stride = c.norms.time_stride;
  p.c_ext = c.norms.c_ext > 0.0 ? c.norms.c_ext : c_data;
  p.seed = c.seed;
  p.random_pairs = c.norms.random_pairs;
  if (!c.norms.alphas.empty()) p.alpha = c.norms.alphas.back();
  return p;
}

CampaignConfig to_campaign(const RunConfig& c) {
  CampaignConfig k;
  k.spec = to_problem_spec(c);
  k.schedule = c.schedule;
  k.deltas = c.verify.deltas;
  k.refinement = c.verify.refinement;
  k.horizon_factor = c.verify.horizon_factor;
  k.norms = to_norm_policy(c, k.spec.grid, 0.0);
  k.auto_stride = c.norms.stride == 0;
  k.time_subsample = c.norms.time_subsample;
  k.alphas = c.norms.alphas;
  k.linear = c.verify.experiment;
  k.linear.cg = c.tol.cg;
  k.run_linear = c.verify.linear;
  k.thresholds = c.verify.thresholds;
  k.thresholds.invariant_tol = c.tol.invariant_tol;
  return k;
}

}  // namespace degtherm
