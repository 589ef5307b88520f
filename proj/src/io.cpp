// Copyright 2026 The essecon Authors
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

#include "essecon/io.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "report_json.hpp"

namespace essecon {

namespace fs = std::filesystem;
namespace pt = boost::property_tree;

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::optional<double> to_double(const std::string& s) {
  double v = 0.0;
  const char* b = s.data();
  const char* e = s.data() + s.size();
  if (b != e && *b == '+') ++b;
  const auto [ptr, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || ptr != e || s.empty()) return std::nullopt;
  return v;
}

std::optional<long> to_long(const std::string& s) {
  long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

// Shortest text that parses back to the same double.
std::string repr_exact(double v) {
  std::array<char, 40> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

enum class Col {
  Slot,
  Demand,
  Pv,
  Purchase,
  Sale,
  Rmccp,
  Rmpcp,
  Perf,
  Mileage,
  RegUp,
  Reserve
};

constexpr std::array<std::pair<const char*, Col>, 11> kColumns{{
    {"slot", Col::Slot},
    {"demand_kw", Col::Demand},
    {"pv_kw", Col::Pv},
    {"price_purchase", Col::Purchase},
    {"price_sale", Col::Sale},
    {"rmccp", Col::Rmccp},
    {"rmpcp", Col::Rmpcp},
    {"perf_score", Col::Perf},
    {"mileage_ratio", Col::Mileage},
    {"reg_up_flag", Col::RegUp},
    {"sr_price", Col::Reserve},
}};

}  // namespace

std::vector<SlotExogenous> parse_timeseries_csv(std::istream& in, const MarketSpec& market) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("time series: missing header", 0);
  const auto header = split(line, ',');
  std::vector<Col> layout;
  std::set<std::string> seen;
  for (const auto& name : header) {
    auto it = std::find_if(kColumns.begin(), kColumns.end(),
                           [&](const auto& c) { return name == c.first; });
    if (it == kColumns.end())
      throw ParseError("time series: unknown column '" + name + "'", 0, name);
    if (!seen.insert(name).second)
      throw ParseError("time series: duplicate column '" + name + "'", 0, name);
    layout.push_back(it->second);
  }
  for (const auto& [name, col] : kColumns) {
    if (col == Col::Sale) continue;
    if (!seen.count(name))
      throw ParseError(std::string("time series: missing column '") + name + "'", 0, name);
  }
  const bool has_sale = seen.count("price_sale") > 0;

  std::vector<SlotExogenous> out;
  long row = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    ++row;
    const auto cells = split(line, ',');
    if (cells.size() != layout.size())
      throw ParseError("time series: row " + std::to_string(row) + " has " +
                           std::to_string(cells.size()) + " cells, expected " +
                           std::to_string(layout.size()),
                       row);
    SlotExogenous x;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const std::string& name = header[c];
      auto fail = [&](const std::string& why) {
        return ParseError("time series: row " + std::to_string(row) + ", column '" + name +
                              "': " + why + " ('" + cells[c] + "')",
                          row, name);
      };
      if (layout[c] == Col::Slot || layout[c] == Col::RegUp) {
        const auto v = to_long(cells[c]);
        if (!v) throw fail("not an integer");
        if (layout[c] == Col::RegUp) {
          if (*v != 0 && *v != 1) throw fail("reg_up_flag must be 0 or 1");
          x.reg_up_flag = static_cast<int>(*v);
        } else if (*v != row - 1) {
          throw fail("slot index out of sequence");
        }
        continue;
      }
      const auto v = to_double(cells[c]);
      if (!v || !std::isfinite(*v)) throw fail("not a finite number");
      switch (layout[c]) {
        case Col::Demand: x.demand = *v; break;
        case Col::Pv: x.renewable = *v; break;
        case Col::Purchase: x.price_purchase = *v; break;
        case Col::Sale: x.price_sale = *v; break;
        case Col::Rmccp: x.price_rmccp = *v; break;
        case Col::Rmpcp: x.price_rmpcp = *v; break;
        case Col::Perf: x.perf_score = *v; break;
        case Col::Mileage: x.mileage_ratio = *v; break;
        case Col::Reserve: x.price_reserve = *v; break;
        default: break;
      }
    }
    if (!has_sale) x.price_sale = market.sale_price_ratio * x.price_purchase;
    out.push_back(x);
  }
  if (out.empty()) throw ParseError("time series: no data rows", 0);
  const auto report = validate_inputs({}, market, out);
  if (!report.ok()) throw ValidationError(report);
  return out;
}

std::vector<SlotExogenous> load_timeseries_csv(const fs::path& path, const MarketSpec& market) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return parse_timeseries_csv(in, market);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), e.row(), e.column());
  }
}

void write_timeseries_csv(std::ostream& out, const std::vector<SlotExogenous>& series) {
  out << "slot";
  for (const auto& [name, col] : kColumns)
    if (col != Col::Slot) out << ',' << name;
  out << '\n';
  for (std::size_t t = 0; t < series.size(); ++t) {
    const auto& x = series[t];
    out << t << ',' << repr_exact(x.demand) << ',' << repr_exact(x.renewable) << ','
        << repr_exact(x.price_purchase) << ',' << repr_exact(x.price_sale) << ','
        << repr_exact(x.price_rmccp)
        << ',' << repr_exact(x.price_rmpcp) << ',' << repr_exact(x.perf_score) << ','
        << repr_exact(x.mileage_ratio) << ',' << x.reg_up_flag << ',' << repr_exact(x.price_reserve)
        << '\n';
  }
}

void write_timeseries_csv(const fs::path& path, const std::vector<SlotExogenous>& series) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  write_timeseries_csv(out, series);
  if (!out) throw IoError("write failed: " + path.string());
}

const char* to_string(Experiment e) {
  switch (e) {
    case Experiment::Single: return "single";
    case Experiment::AlphaSweep: return "alpha-sweep";
    case Experiment::HorizonSweep: return "horizon-sweep";
    case Experiment::ForecastStudy: return "forecast-study";
  }
  return "?";
}

Experiment parse_experiment(const std::string& name) {
  for (auto e : {Experiment::Single, Experiment::AlphaSweep, Experiment::HorizonSweep,
                 Experiment::ForecastStudy})
    if (name == to_string(e)) return e;
  throw ParseError("unknown experiment '" + name +
                       "' (expected single, alpha-sweep, horizon-sweep or forecast-study)",
                   0, "experiment");
}

// ---------------------------------------------------------------------------
// Config

namespace {

class Section {
 public:
  Section(std::string name, const pt::ptree& tree, bool strict)
      : name_(std::move(name)), tree_(tree), strict_(strict) {}

  ~Section() = default;

  /// Call after every key was read.
  void finish() const {
    if (!strict_) return;
    for (const auto& [key, value] : tree_) {
      if (!used_.count(key))
        throw ParseError("config: unknown key '" + key + "' in [" + name_ + "]", 0, key);
    }
  }

  std::optional<std::string> raw(const std::string& key) {
    used_.insert(key);
    auto child = tree_.get_child_optional(pt::ptree::path_type(key, '\0'));
    if (!child) return std::nullopt;
    return trim(child->data());
  }

  void number(const std::string& key, double& out) {
    if (auto s = raw(key)) {
      auto v = to_double(*s);
      if (!v) throw bad(key, *s, "a number");
      out = *v;
    }
  }

  template <typename Int>
  void integer(const std::string& key, Int& out) {
    if (auto s = raw(key)) {
      auto v = to_long(*s);
      if (!v) throw bad(key, *s, "an integer");
      out = static_cast<Int>(*v);
    }
  }

  void flag(const std::string& key, bool& out) {
    if (auto s = raw(key)) {
      if (*s == "true" || *s == "1" || *s == "yes") {
        out = true;
      } else if (*s == "false" || *s == "0" || *s == "no") {
        out = false;
      } else {
        throw bad(key, *s, "a boolean");
      }
    }
  }

  void numbers(const std::string& key, std::vector<double>& out) {
    if (auto s = raw(key)) {
      out.clear();
      for (const auto& item : split(*s, ',')) {
        auto v = to_double(item);
        if (!v) throw bad(key, *s, "a comma-separated list of numbers");
        out.push_back(*v);
      }
    }
  }

  template <typename Int>
  void integers(const std::string& key, std::vector<Int>& out) {
    if (auto s = raw(key)) {
      out.clear();
      for (const auto& item : split(*s, ',')) {
        auto v = to_long(item);
        if (!v || *v < 0) throw bad(key, *s, "a comma-separated list of nonnegative integers");
        out.push_back(static_cast<Int>(*v));
      }
    }
  }

  bool segments(const std::string& key, SegmentSet& out) {
    auto s = raw(key);
    if (!s) return false;
    out.segments.clear();
    for (const auto& item : split(*s, ',')) {
      const auto parts = split(item, ':');
      std::optional<double> a, b;
      if (parts.size() == 2) {
        a = to_double(parts[0]);
        b = to_double(parts[1]);
      }
      if (!a || !b) throw bad(key, *s, "a list of a:b pairs");
      out.segments.push_back({*a, *b});
    }
    return true;
  }

  ParseError bad(const std::string& key, const std::string& value, const char* expected) const {
    return ParseError("config: [" + name_ + "] " + key + " = '" + value + "' is not " + expected,
                      0, key);
  }

 private:
  std::string name_;
  const pt::ptree& tree_;
  bool strict_;
  std::set<std::string> used_;
};

constexpr std::array<const char*, kForecastSignalCount> kSignalKeys{
    "kappa_demand", "kappa_renewable", "kappa_rmccp", "kappa_rmpcp", "kappa_reserve"};

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + repr_exact(v[i]);
  return s;
}

template <typename Int>
std::string join_int(const std::vector<Int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + std::to_string(v[i]);
  return s;
}

std::string join_segments(const SegmentSet& set) {
  std::string s;
  for (std::size_t i = 0; i < set.segments.size(); ++i)
    s += (i ? ", " : "") + repr_exact(set.segments[i].quadratic) + ":" +
         repr_exact(set.segments[i].linear);
  return s;
}

}  // namespace

Config default_config() {
  Config c;
  c.specs = {table_one_type1(100.0), table_one_type2(100.0)};
  return c;
}

Config parse_config(std::istream& in, bool strict, const fs::path& base_dir) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ParseError("config: " + e.message() + " (line " + std::to_string(e.line()) + ")",
                     static_cast<long>(e.line()));
  }

  Config cfg;
  SegmentSet shared = default_segment_set();
  std::map<long, const pt::ptree*> ess_sections;
  const pt::ptree* aging = nullptr;
  std::map<std::string, const pt::ptree*> other;
  for (const auto& [name, sub] : tree) {
    if (name.rfind("ess.", 0) == 0) {
      auto idx = to_long(name.substr(4));
      if (!idx || *idx < 0) throw ParseError("config: bad section name [" + name + "]", 0, name);
      ess_sections[*idx] = &sub;
    } else if (name == "aging") {
      aging = &sub;
    } else if (name == "market" || name == "solver" || name == "forecast" || name == "run") {
      other[name] = &sub;
    } else if (!sub.data().empty() || sub.empty()) {
      // A key outside any section.
      if (strict) throw ParseError("config: key '" + name + "' outside a section", 0, name);
    } else if (strict) {
      throw ParseError("config: unknown section [" + name + "]", 0, name);
    }
  }

  if (aging) {
    Section s("aging", *aging, strict);
    s.segments("segments", shared);
    s.finish();
  }

  if (ess_sections.empty()) {
    cfg.specs = default_config().specs;
    for (auto& spec : cfg.specs) spec.aging_segments = shared;
  }
  for (const auto& [idx, sub] : ess_sections) {
    Section s("ess." + std::to_string(idx), *sub, strict);
    EssSpec spec;
    spec.id = static_cast<int>(idx);
    s.integer("id", spec.id);
    for (const char* required :
         {"energy_capacity", "charge_rate_max", "discharge_rate_max", "eff_charge",
          "eff_discharge"}) {
      if (!sub->get_child_optional(pt::ptree::path_type(required, '\0')))
        throw ParseError("config: [ess." + std::to_string(idx) + "] is missing " + required, 0,
                         required);
    }
    s.number("energy_capacity", spec.energy_capacity);
    s.number("soc_min", spec.soc_min);
    s.number("soc_max", spec.soc_max);
    s.number("charge_rate_max", spec.charge_rate_max);
    s.number("discharge_rate_max", spec.discharge_rate_max);
    s.number("eff_charge", spec.eff_charge);
    s.number("eff_discharge", spec.eff_discharge);
    spec.unit_capital_cost = 100.0;
    s.number("unit_capital_cost", spec.unit_capital_cost);
    s.number("charge_cost_fraction", spec.charge_cost_fraction);
    SegmentSet own;
    const bool has_own = s.segments("aging_segments", own);
    s.finish();
    cfg.specs.push_back(EssSpec::make(spec.id, spec.energy_capacity, spec.soc_min, spec.soc_max,
                                      spec.charge_rate_max, spec.discharge_rate_max,
                                      spec.eff_charge, spec.eff_discharge,
                                      spec.unit_capital_cost, spec.charge_cost_fraction,
                                      has_own ? own : shared));
  }

  if (auto it = other.find("market"); it != other.end()) {
    Section s("market", *it->second, strict);
    s.number("slot_hours", cfg.market.slot_hours);
    s.number("reg_min_power", cfg.market.reg_min_power);
    s.number("reserve_min_power", cfg.market.reserve_min_power);
    s.number("reserve_min_duration", cfg.market.reserve_min_duration);
    s.number("export_power_max", cfg.market.export_power_max);
    s.number("sale_price_ratio", cfg.market.sale_price_ratio);
    s.finish();
  }

  if (auto it = other.find("solver"); it != other.end()) {
    Section s("solver", *it->second, strict);
    s.number("integrality_tol", cfg.solver.integrality_tol);
    s.number("gap", cfg.solver.gap);
    s.number("oa_tol", cfg.solver.oa_tol);
    s.integer("node_limit", cfg.solver.node_limit);
    s.integer("cut_round_limit", cfg.solver.cut_round_limit);
    s.integer("seed", cfg.solver.seed);
    s.finish();
  }
  if (!(cfg.solver.integrality_tol > 0) || !(cfg.solver.gap > 0) || !(cfg.solver.oa_tol > 0) ||
      cfg.solver.node_limit <= 0 || cfg.solver.cut_round_limit <= 0)
    throw ParseError("config: [solver] tolerances and limits must be positive", 0, "solver");

  if (auto it = other.find("forecast"); it != other.end()) {
    Section s("forecast", *it->second, strict);
    std::vector<double> all;
    s.numbers("kappa", all);
    if (!all.empty()) cfg.forecast.kappa.assign(kForecastSignalCount, all);
    for (int k = 0; k < kForecastSignalCount; ++k) s.numbers(kSignalKeys[k], cfg.forecast.kappa[k]);
    s.number("low_ratio", cfg.forecast.low_ratio);
    s.number("high_ratio", cfg.forecast.high_ratio);
    s.integer("seed", cfg.forecast.seed);
    s.finish();
  }
  try {
    cfg.forecast.validate();
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("config: [forecast] ") + e.what(), 0, "forecast");
  }

  if (auto it = other.find("run"); it != other.end()) {
    Section s("run", *it->second, strict);
    if (auto v = s.raw("experiment")) cfg.run.experiment = parse_experiment(*v);
    if (auto v = s.raw("series")) cfg.run.series_path = *v;
    if (auto v = s.raw("output")) cfg.run.output_dir = *v;
    s.integer("horizon", cfg.run.horizon);
    s.numbers("initial_soc", cfg.run.initial_soc);
    s.flag("use_forecast", cfg.run.use_forecast);
    s.numbers("alpha_grid", cfg.run.alpha_grid);
    s.integers("horizon_grid", cfg.run.horizon_grid);
    s.integers("seeds", cfg.run.seeds);
    s.finish();
  }
  if (!cfg.run.series_path.empty() && !base_dir.empty() &&
      fs::path(cfg.run.series_path).is_relative())
    cfg.run.series_path = (base_dir / cfg.run.series_path).lexically_normal().string();

  auto& run = cfg.run;
  if (run.horizon < 1) throw ParseError("config: [run] horizon must be >= 1", 0, "horizon");
  if (run.initial_soc.size() != 1 && run.initial_soc.size() != cfg.specs.size())
    throw ParseError("config: [run] initial_soc needs one value or one per unit", 0,
                     "initial_soc");
  for (std::size_t i = 0; i < cfg.specs.size(); ++i) {
    const double soc = run.initial_soc.size() == 1 ? run.initial_soc[0] : run.initial_soc[i];
    if (soc < cfg.specs[i].soc_min || soc > cfg.specs[i].soc_max)
      throw ParseError("config: [run] initial_soc outside the SOC bounds of unit " +
                           std::to_string(i + 1),
                       0, "initial_soc");
  }
  const bool needs_alpha = run.experiment == Experiment::AlphaSweep;
  const bool needs_h = run.experiment == Experiment::HorizonSweep;
  const bool needs_seeds = run.experiment == Experiment::ForecastStudy;
  if ((needs_alpha && run.alpha_grid.empty()) || (needs_h && run.horizon_grid.empty()) ||
      (needs_seeds && run.seeds.empty()))
    throw ParseError("config: [run] grid for the selected experiment is empty", 0, "run");
  for (int h : run.horizon_grid)
    if (h < 1)
      throw ParseError("config: [run] horizon_grid entries must be >= 1", 0, "horizon_grid");
  for (double a : run.alpha_grid)
    if (!(a >= 0.0))
      throw ParseError("config: [run] alpha_grid entries must be >= 0", 0, "alpha_grid");

  const auto report = validate_inputs(cfg.specs, cfg.market, {});
  if (!report.ok()) throw ValidationError(report);
  return cfg;
}

Config load_config(const fs::path& path, bool strict) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return parse_config(in, strict, path.parent_path());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), e.row(), e.column());
  }
}

void write_config(std::ostream& out, const Config& c) {
  for (std::size_t i = 0; i < c.specs.size(); ++i) {
    const auto& s = c.specs[i];
    out << "[ess." << (i + 1) << "]\n"
        << "id = " << s.id << '\n'
        << "energy_capacity = " << repr_exact(s.energy_capacity) << '\n'
        << "soc_min = " << repr_exact(s.soc_min) << '\n'
        << "soc_max = " << repr_exact(s.soc_max) << '\n'
        << "charge_rate_max = " << repr_exact(s.charge_rate_max) << '\n'
        << "discharge_rate_max = " << repr_exact(s.discharge_rate_max) << '\n'
        << "eff_charge = " << repr_exact(s.eff_charge) << '\n'
        << "eff_discharge = " << repr_exact(s.eff_discharge) << '\n'
        << "unit_capital_cost = " << repr_exact(s.unit_capital_cost) << '\n'
        << "charge_cost_fraction = " << repr_exact(s.charge_cost_fraction) << '\n'
        << "aging_segments = " << join_segments(s.aging_segments) << "\n\n";
  }
  const auto& m = c.market;
  out << "[market]\n"
      << "slot_hours = " << repr_exact(m.slot_hours) << '\n'
      << "reg_min_power = " << repr_exact(m.reg_min_power) << '\n'
      << "reserve_min_power = " << repr_exact(m.reserve_min_power) << '\n'
      << "reserve_min_duration = " << repr_exact(m.reserve_min_duration) << '\n'
      << "export_power_max = " << repr_exact(m.export_power_max) << '\n'
      << "sale_price_ratio = " << repr_exact(m.sale_price_ratio) << "\n\n";
  const auto& sv = c.solver;
  out << "[solver]\n"
      << "integrality_tol = " << repr_exact(sv.integrality_tol) << '\n'
      << "gap = " << repr_exact(sv.gap) << '\n'
      << "oa_tol = " << repr_exact(sv.oa_tol) << '\n'
      << "node_limit = " << sv.node_limit << '\n'
      << "cut_round_limit = " << sv.cut_round_limit << '\n'
      << "seed = " << sv.seed << "\n\n";
  out << "[forecast]\n";
  for (int k = 0; k < kForecastSignalCount; ++k) {
    const auto& kap = static_cast<std::size_t>(k) < c.forecast.kappa.size()
                          ? c.forecast.kappa[k]
                          : std::vector<double>{0.0};
    out << kSignalKeys[k] << " = " << join(kap) << '\n';
  }
  out << "low_ratio = " << repr_exact(c.forecast.low_ratio) << '\n'
      << "high_ratio = " << repr_exact(c.forecast.high_ratio) << '\n'
      << "seed = " << c.forecast.seed << "\n\n";
  const auto& r = c.run;
  out << "[run]\n"
      << "experiment = " << to_string(r.experiment) << '\n';
  if (!r.series_path.empty()) out << "series = " << r.series_path << '\n';
  out << "output = " << r.output_dir << '\n'
      << "horizon = " << r.horizon << '\n'
      << "initial_soc = " << join(r.initial_soc) << '\n'
      << "use_forecast = " << (r.use_forecast ? "true" : "false") << '\n'
      << "alpha_grid = " << join(r.alpha_grid) << '\n'
      << "horizon_grid = " << join_int(r.horizon_grid) << '\n'
      << "seeds = " << join_int(r.seeds) << '\n';
}

// ---------------------------------------------------------------------------
// Reports

std::string format_number(double v) {
  if (v == 0.0) v = 0.0;  // drops the sign of -0
  std::array<char, 40> buf{};
  std::snprintf(buf.data(), buf.size(), "%.*g", kReportDigits, v);
  return buf.data();
}

double round_report(double v) { return std::strtod(format_number(v).c_str(), nullptr); }

nlohmann::ordered_json totals_json(const SimulationReport& r) {
  nlohmann::ordered_json j;
  j["R_sc"] = round_report(r.totals.r_sc);
  j["R_fr"] = round_report(r.totals.r_fr);
  j["R_sr"] = round_report(r.totals.r_sr);
  j["R_br"] = round_report(r.totals.r_br);
  j["aging_cost"] = round_report(r.totals.aging_cost);
  j["net_profit"] = round_report(r.net_profit);
  j["baseline_profit"] = round_report(r.baseline_profit);
  j["ess_attributable_profit"] = round_report(r.ess_attributable_profit);
  j["slots"] = r.ledger.size();
  j["solver"] = {{"solves", r.stats.solves},
                 {"nodes", r.stats.nodes},
                 {"max_nodes", r.stats.max_nodes},
                 {"lp_iterations", r.stats.lp_iterations},
                 {"cut_rounds", r.stats.cut_rounds}};
  return j;
}

void write_ledger_csv(std::ostream& out, const SimulationReport& r) {
  const std::size_t n_ess = r.initial_soc.soc.size();
  out << "slot,R_sc,R_fr,R_sr,R_br,aging_cost,net_profit,renewable_selfuse,renewable_export,"
         "reg_participate,reserve_participate";
  for (std::size_t i = 0; i < n_ess; ++i) {
    for (const char* f : {"charge_total", "discharge_total", "charge_from_renewable",
                          "charge_for_regulation", "discharge_for_regulation", "reserve_commit",
                          "charge_future", "discharge_bill", "mode_flag", "soc"})
      out << ',' << f << '_' << (i + 1);
  }
  out << '\n';
  for (const auto& e : r.ledger) {
    const auto& s = e.services;
    const auto& d = e.decision;
    out << e.slot << ',' << format_number(s.r_sc) << ',' << format_number(s.r_fr) << ','
        << format_number(s.r_sr) << ',' << format_number(s.r_br) << ','
        << format_number(s.aging_cost) << ',' << format_number(e.net) << ','
        << format_number(d.renewable_selfuse) << ',' << format_number(d.renewable_export) << ','
        << d.reg_participate << ',' << d.reserve_participate;
    for (std::size_t i = 0; i < d.ess.size(); ++i) {
      const auto& x = d.ess[i];
      out << ',' << format_number(x.charge_total) << ',' << format_number(x.discharge_total)
          << ',' << format_number(x.charge_from_renewable) << ','
          << format_number(x.charge_for_regulation) << ','
          << format_number(x.discharge_for_regulation) << ','
          << format_number(x.reserve_commit) << ',' << format_number(x.charge_future) << ','
          << format_number(x.discharge_bill) << ',' << x.mode_flag << ','
          << format_number(e.soc.soc[i]);
    }
    out << '\n';
  }
}

void write_schedule_csv(std::ostream& out, const SimulationReport& r) {
  const std::size_t n_ess = r.initial_soc.soc.size();
  out << "slot";
  for (std::size_t i = 0; i < n_ess; ++i)
    out << ",soc_" << (i + 1) << ",net_power_" << (i + 1);
  out << ",revenue,aging_cost,cumulative_profit\n";
  double cumulative = 0.0;
  for (const auto& e : r.ledger) {
    cumulative += e.net;
    out << e.slot;
    for (std::size_t i = 0; i < n_ess; ++i)
      out << ',' << format_number(e.soc.soc[i]) << ','
          << format_number(e.decision.ess[i].discharge_total - e.decision.ess[i].charge_total);
    out << ',' << format_number(e.net + e.services.aging_cost) << ','
        << format_number(e.services.aging_cost) << ',' << format_number(cumulative) << '\n';
  }
}

std::ofstream open_output(const fs::path& path) {
  std::error_code ec;
  fs::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

void emit_report(const SimulationReport& report, const fs::path& dir) {
  {
    auto out = open_output(dir / "ledger.csv");
    write_ledger_csv(out, report);
    if (!out) throw IoError("write failed: " + (dir / "ledger.csv").string());
  }
  {
    auto out = open_output(dir / "plotdata" / "schedule.csv");
    write_schedule_csv(out, report);
  }
  nlohmann::ordered_json j;
  j["experiment"] = "single";
  j.update(totals_json(report));
  auto out = open_output(dir / "summary.json");
  out << j.dump(2) << '\n';
  if (!out) throw IoError("write failed: " + (dir / "summary.json").string());
}

}  // namespace essecon
