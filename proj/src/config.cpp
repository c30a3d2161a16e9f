#include "lilab/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <limits>
#include <sstream>

#include "lilab/errors.hpp"
#include "lilab/families.hpp"

namespace lilab {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> tokenize(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

double parse_double(const std::string& s, const std::string& where) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("cannot parse '" + s + "' as a number (" + where + ")");
  }
}

int parse_int(const std::string& s, const std::string& where) {
  try {
    std::size_t pos = 0;
    const long v = std::stol(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return static_cast<int>(v);
  } catch (const std::exception&) {
    throw ConfigError("cannot parse '" + s + "' as an integer (" + where +
                      ")");
  }
}

// section -> exact keys and numbered-key prefixes.
struct SectionSchema {
  std::vector<std::string> keys;
  std::vector<std::string> prefixes;
};

const std::map<std::string, SectionSchema>& schema() {
  static const std::map<std::string, SectionSchema> s = {
      {"system", {{"dim", "drift"}, {"diffusion_"}}},
      {"limit", {{"drift"}, {"diffusion_"}}},
      {"initial", {{"kind", "bound"}, {}}},
      {"grid", {{"ratio", "windows", "delta"}, {}}},
      {"run", {{"seeds", "threads", "scheme"}, {}}},
      {"simulate",
       {{"horizon", "u", "output_cells", "route", "write_path", "write_flow"},
        {}}},
      {"skeleton", {{"control", "cells", "substeps", "x0"}, {}}},
      {"rate",
       {{"target", "cells", "substeps", "match_tol", "iters", "lr", "starts",
         "seed", "x0", "method", "betas", "lambdas"},
        {}}},
      {"dist",
       {{"target", "cells", "substeps", "match_tol", "iters", "lr", "starts",
         "seed", "x0", "energy_cap", "betas", "lambdas"},
        {}}},
      {"lil",
       {{"mode", "output_cells", "burn_in", "rho", "subgrid", "scan",
         "opt_cells", "opt_substeps", "opt_iters", "opt_starts", "opt_lr",
         "opt_seed", "opt_match_tol"},
        {"target_"}}},
      {"check_h", {{"box_lo", "box_hi", "points", "scales", "tol"}, {}}},
      {"check_c", {{"delta", "scales", "mc_samples", "mc_seed"}, {}}},
  };
  return s;
}

bool key_allowed(const SectionSchema& sec, const std::string& key) {
  if (std::find(sec.keys.begin(), sec.keys.end(), key) != sec.keys.end()) {
    return true;
  }
  for (const auto& p : sec.prefixes) {
    if (key.size() > p.size() && key.compare(0, p.size(), p) == 0) {
      const std::string tail = key.substr(p.size());
      if (!tail.empty() &&
          std::all_of(tail.begin(), tail.end(), [](unsigned char c) {
            return std::isdigit(c);
          })) {
        return true;
      }
    }
  }
  return false;
}

const std::map<std::string, std::vector<std::string>>& required_sections() {
  static const std::map<std::string, std::vector<std::string>> r = {
      {"simulate", {"system", "grid"}},
      {"skeleton", {"skeleton"}},
      {"rate", {"rate"}},
      {"dist", {"dist"}},
      {"lil", {"system", "grid", "lil"}},
      {"check-h", {"system", "limit", "check_h"}},
      {"check-c", {"initial", "check_c"}},
  };
  return r;
}

}  // namespace

Config Config::parse_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError("cannot open config file '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_text(buf.str(), path);
}

Config Config::parse_text(const std::string& text, const std::string& name) {
  Config cfg;
  cfg.name_ = name;
  cfg.text_ = text;

  std::istringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError(name + ":" + std::to_string(lineno) +
                          ": malformed section header");
      }
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) {
        throw ConfigError(name + ":" + std::to_string(lineno) +
                          ": empty section name");
      }
      cfg.values_[section];  // records empty sections too
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(name + ":" + std::to_string(lineno) +
                        ": expected key = value");
    }
    if (section.empty()) {
      throw ConfigError(name + ":" + std::to_string(lineno) +
                        ": key outside any section");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError(name + ":" + std::to_string(lineno) + ": empty key");
    }
    auto& sec = cfg.values_[section];
    if (sec.count(key)) {
      throw ConfigError(name + ":" + std::to_string(lineno) +
                        ": duplicate key '" + key + "' in [" + section + "]");
    }
    sec[key] = value;
  }
  return cfg;
}

void Config::apply_override(const std::string& assignment) {
  const auto eq = assignment.find('=');
  const auto dot = assignment.find('.');
  if (eq == std::string::npos || dot == std::string::npos || dot > eq) {
    throw ConfigError("override '" + assignment +
                      "' must look like section.key=value");
  }
  const std::string section = trim(assignment.substr(0, dot));
  const std::string key = trim(assignment.substr(dot + 1, eq - dot - 1));
  const std::string value = trim(assignment.substr(eq + 1));
  if (section.empty() || key.empty()) {
    throw ConfigError("override '" + assignment + "' has an empty name");
  }
  values_[section][key] = value;
}

bool Config::has(const std::string& section, const std::string& key) const {
  auto it = values_.find(section);
  return it != values_.end() && it->second.count(key) > 0;
}

std::vector<std::string> Config::keys(const std::string& section) const {
  std::vector<std::string> out;
  auto it = values_.find(section);
  if (it == values_.end()) return out;
  for (const auto& [k, v] : it->second) out.push_back(k);
  return out;
}

std::vector<std::string> Config::sections() const {
  std::vector<std::string> out;
  for (const auto& [s, kv] : values_) out.push_back(s);
  return out;
}

std::string Config::raw(const std::string& section,
                        const std::string& key) const {
  auto it = values_.find(section);
  if (it == values_.end() || !it->second.count(key)) {
    throw ConfigError("missing config key [" + section + "] " + key);
  }
  return it->second.at(key);
}

std::string Config::raw_or(const std::string& section, const std::string& key,
                           const std::string& fallback) const {
  return has(section, key) ? raw(section, key) : fallback;
}

int Config::get_int(const std::string& section, const std::string& key,
                    int fallback) const {
  if (!has(section, key)) return fallback;
  return parse_int(raw(section, key), "[" + section + "] " + key);
}

double Config::get_double(const std::string& section, const std::string& key,
                          double fallback) const {
  if (!has(section, key)) return fallback;
  return parse_double(raw(section, key), "[" + section + "] " + key);
}

bool Config::get_bool(const std::string& section, const std::string& key,
                      bool fallback) const {
  if (!has(section, key)) return fallback;
  const std::string v = raw(section, key);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("cannot parse '" + v + "' as a boolean ([" + section +
                    "] " + key + ")");
}

std::vector<double> Config::get_doubles(const std::string& section,
                                        const std::string& key) const {
  std::vector<double> out;
  for (const auto& tok : tokenize(raw(section, key))) {
    out.push_back(parse_double(tok, "[" + section + "] " + key));
  }
  return out;
}

std::vector<std::uint64_t> Config::get_u64s(const std::string& section,
                                            const std::string& key) const {
  std::vector<std::uint64_t> out;
  for (const auto& tok : tokenize(raw(section, key))) {
    try {
      std::size_t pos = 0;
      out.push_back(std::stoull(tok, &pos));
      if (pos != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw ConfigError("cannot parse '" + tok + "' as a seed ([" + section +
                        "] " + key + ")");
    }
  }
  return out;
}

void Config::validate_for(const std::string& subcommand) const {
  const auto& sch = schema();
  for (const auto& [section, kv] : values_) {
    auto sit = sch.find(section);
    if (sit == sch.end()) {
      throw ConfigError("unknown config section [" + section + "]");
    }
    for (const auto& [key, value] : kv) {
      if (!key_allowed(sit->second, key)) {
        throw ConfigError("unknown config key '" + key + "' in [" + section +
                          "]");
      }
    }
  }
  auto rit = required_sections().find(subcommand);
  if (rit != required_sections().end()) {
    for (const auto& section : rit->second) {
      if (!values_.count(section)) {
        throw ConfigError("subcommand '" + subcommand +
                          "' needs a [" + section + "] section");
      }
    }
  }
}

namespace {

VectorField field_from_spec(const std::string& spec, int dim,
                            const std::string& where) {
  const auto toks = tokenize(spec);
  if (toks.empty()) {
    throw ConfigError("empty field spec (" + where + ")");
  }
  std::vector<double> params;
  for (std::size_t i = 1; i < toks.size(); ++i) {
    params.push_back(parse_double(toks[i], where));
  }
  return make_field(toks[0], params, dim);
}

FieldSystem fields_from_section(const Config& cfg, const std::string& section,
                                int dim) {
  VectorField drift =
      field_from_spec(cfg.raw(section, "drift"), dim, "[" + section + "] drift");
  std::vector<VectorField> diffusion;
  for (int j = 1; cfg.has(section, "diffusion_" + std::to_string(j)); ++j) {
    diffusion.push_back(
        field_from_spec(cfg.raw(section, "diffusion_" + std::to_string(j)),
                        dim, "[" + section + "] diffusion_" +
                                 std::to_string(j)));
  }
  if (diffusion.empty()) {
    throw ConfigError("section [" + section +
                      "] declares no diffusion fields");
  }
  return FieldSystem(std::move(drift), std::move(diffusion));
}

}  // namespace

int config_dim(const Config& cfg) {
  const int dim = cfg.get_int("system", "dim", 1);
  if (dim < 1) {
    throw ConfigError("[system] dim must be positive");
  }
  return dim;
}

CoefficientSystem build_system(const Config& cfg) {
  const int dim = config_dim(cfg);
  FieldSystem fields = fields_from_section(cfg, "system", dim);
  if (cfg.has("limit", "drift")) {
    FieldSystem limit = fields_from_section(cfg, "limit", dim);
    return CoefficientSystem(std::move(fields), std::move(limit));
  }
  return CoefficientSystem(std::move(fields));
}

FieldSystem build_limit_or_system(const Config& cfg) {
  const int dim = config_dim(cfg);
  if (cfg.has("limit", "drift")) {
    return fields_from_section(cfg, "limit", dim);
  }
  return fields_from_section(cfg, "system", dim);
}

InitialConditionSpec build_initial(const Config& cfg, int dim) {
  InitialConditionSpec spec = InitialConditionSpec::point(Vec::Zero(dim));
  if (cfg.has("initial", "kind")) {
    const auto toks = tokenize(cfg.raw("initial", "kind"));
    if (toks.empty()) {
      throw ConfigError("[initial] kind is empty");
    }
    const std::string& kind = toks[0];
    if (kind == "point") {
      if (static_cast<int>(toks.size()) - 1 != dim) {
        throw ConfigError("[initial] point needs " + std::to_string(dim) +
                          " coordinates");
      }
      Vec x(dim);
      for (int i = 0; i < dim; ++i) {
        x[i] = parse_double(toks[static_cast<std::size_t>(i) + 1],
                            "[initial] kind");
      }
      spec = InitialConditionSpec::point(std::move(x));
    } else if (kind == "wiener_endpoint") {
      spec = InitialConditionSpec::wiener_endpoint();
    } else if (kind == "running_max") {
      const int coord =
          toks.size() > 1 ? parse_int(toks[1], "[initial] kind") : 0;
      spec = InitialConditionSpec::running_max(coord);
    } else if (kind == "gaussian") {
      if (toks.size() != 2) {
        throw ConfigError("[initial] gaussian needs a sigma");
      }
      spec = InitialConditionSpec::gaussian(
          parse_double(toks[1], "[initial] kind"));
    } else if (kind == "cauchy") {
      if (toks.size() != 2) {
        throw ConfigError("[initial] cauchy needs a scale");
      }
      spec = InitialConditionSpec::cauchy(
          parse_double(toks[1], "[initial] kind"));
    } else {
      throw ConfigError("unknown initial condition kind '" + kind + "'");
    }
  }
  if (cfg.has("initial", "bound")) {
    spec = spec.bounded(cfg.get_double("initial", "bound", 0.0));
  }
  return spec;
}

GeometricGrid build_grid_from_config(const Config& cfg) {
  return GeometricGrid(cfg.get_double("grid", "ratio", 2.0),
                       cfg.get_int("grid", "windows", 40),
                       cfg.get_double("grid", "delta", 1e-3));
}

namespace {

Mat read_csv_table(const std::string& path, std::vector<std::string>* header) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open CSV file '" + path + "'");
  }
  std::string line;
  if (!std::getline(in, line)) {
    throw ConfigError("CSV file '" + path + "' is empty");
  }
  header->clear();
  std::istringstream hs(line);
  std::string cell;
  while (std::getline(hs, cell, ',')) header->push_back(trim(cell));

  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream rs(line);
    while (std::getline(rs, cell, ',')) {
      cell = trim(cell);
      row.push_back(cell.empty() ? std::numeric_limits<double>::quiet_NaN()
                                 : parse_double(cell, path));
    }
    if (row.size() != header->size()) {
      throw ConfigError("ragged CSV row in '" + path + "'");
    }
    rows.push_back(std::move(row));
  }
  Mat out(static_cast<Eigen::Index>(rows.size()),
          static_cast<Eigen::Index>(header->size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          rows[i][j];
    }
  }
  return out;
}

}  // namespace

Control build_control(const std::string& spec, int cells, int noise_dim) {
  const auto toks = tokenize(spec);
  if (toks.empty()) {
    throw ConfigError("empty control spec");
  }
  if (toks[0] == "zero") {
    return Control::zero(cells, noise_dim);
  }
  if (toks[0] == "constant") {
    if (static_cast<int>(toks.size()) - 1 != noise_dim) {
      throw ConfigError("constant control needs " +
                        std::to_string(noise_dim) + " rates");
    }
    Mat rates(cells, noise_dim);
    for (int j = 0; j < noise_dim; ++j) {
      rates.col(j).setConstant(
          parse_double(toks[static_cast<std::size_t>(j) + 1], "control"));
    }
    return Control(std::move(rates));
  }
  if (toks[0] == "random") {
    if (toks.size() != 3) {
      throw ConfigError("random control spec is 'random ENERGY SEED'");
    }
    const double energy = parse_double(toks[1], "control");
    std::uint64_t seed = 0;
    try {
      seed = std::stoull(toks[2]);
    } catch (const std::exception&) {
      throw ConfigError("cannot parse control seed '" + toks[2] + "'");
    }
    return Control::random(cells, noise_dim, energy, seed);
  }
  if (toks[0] == "csv") {
    if (toks.size() != 2) {
      throw ConfigError("csv control spec is 'csv PATH'");
    }
    std::vector<std::string> header;
    Mat table = read_csv_table(toks[1], &header);
    if (header.size() != static_cast<std::size_t>(noise_dim) + 1 ||
        header[0] != "cell_index") {
      throw ConfigError("control CSV '" + toks[1] +
                        "' must have columns cell_index,f_dot_1..");
    }
    if (table.rows() < 1) {
      throw ConfigError("control CSV '" + toks[1] + "' has no rows");
    }
    Control c(table.rightCols(noise_dim));
    return c.cells() == cells ? c : c.refined(1);
  }
  throw ConfigError("unknown control spec '" + toks[0] + "'");
}

SamplePath build_target(const std::string& spec, int cells, int dim) {
  const auto toks = tokenize(spec);
  if (toks.empty()) {
    throw ConfigError("empty target spec");
  }
  if (toks[0] == "zero") {
    return SamplePath::zero(cells, dim);
  }
  if (toks[0] == "line") {
    if (static_cast<int>(toks.size()) - 1 != dim) {
      throw ConfigError("line target needs " + std::to_string(dim) +
                        " slope components");
    }
    Vec slope(dim);
    for (int i = 0; i < dim; ++i) {
      slope[i] = parse_double(toks[static_cast<std::size_t>(i) + 1], "target");
    }
    return SamplePath::line(cells, slope);
  }
  if (toks[0] == "csv") {
    if (toks.size() != 2) {
      throw ConfigError("csv target spec is 'csv PATH'");
    }
    std::vector<std::string> header;
    Mat table = read_csv_table(toks[1], &header);
    if (header.size() != static_cast<std::size_t>(dim) + 1 ||
        header[0] != "t") {
      throw ConfigError("target CSV '" + toks[1] +
                        "' must have columns t,X_1..X_" + std::to_string(dim));
    }
    if (table.rows() < 2) {
      throw ConfigError("target CSV '" + toks[1] + "' needs two rows");
    }
    // Interpolate the table onto the uniform grid.
    Mat nodes(cells + 1, dim);
    for (int i = 0; i <= cells; ++i) {
      const double t = static_cast<double>(i) / cells;
      Eigen::Index lo = 0;
      while (lo + 2 < table.rows() && table(lo + 1, 0) <= t) ++lo;
      const double t0 = table(lo, 0), t1 = table(lo + 1, 0);
      const double w = t1 > t0 ? std::clamp((t - t0) / (t1 - t0), 0.0, 1.0)
                               : 0.0;
      nodes.row(i) = (1.0 - w) * table.row(lo).tail(dim) +
                     w * table.row(lo + 1).tail(dim);
    }
    return SamplePath(std::move(nodes));
  }
  throw ConfigError("unknown target spec '" + toks[0] + "'");
}

RateOptions build_rate_options(const Config& cfg, const std::string& section,
                               int dim) {
  RateOptions opts;
  opts.cells = cfg.get_int(section, "cells", opts.cells);
  opts.substeps = cfg.get_int(section, "substeps", opts.substeps);
  opts.match_tol = cfg.get_double(section, "match_tol", opts.match_tol);
  opts.iters_per_stage = cfg.get_int(section, "iters", opts.iters_per_stage);
  opts.learning_rate = cfg.get_double(section, "lr", opts.learning_rate);
  opts.random_starts = cfg.get_int(section, "starts", opts.random_starts);
  if (cfg.has(section, "seed")) {
    opts.seed = cfg.get_u64s(section, "seed").at(0);
  }
  if (cfg.has(section, "x0")) {
    const auto x = cfg.get_doubles(section, "x0");
    if (static_cast<int>(x.size()) != dim) {
      throw ConfigError("[" + section + "] x0 needs " + std::to_string(dim) +
                        " coordinates");
    }
    opts.x0 = Eigen::Map<const Vec>(x.data(), dim);
  }
  if (cfg.has(section, "energy_cap")) {
    opts.energy_cap = cfg.get_double(section, "energy_cap", opts.energy_cap);
  }
  if (cfg.has(section, "betas")) {
    opts.betas = cfg.get_doubles(section, "betas");
  }
  if (cfg.has(section, "lambdas")) {
    opts.lambdas = cfg.get_doubles(section, "lambdas");
  }
  return opts;
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace lilab
