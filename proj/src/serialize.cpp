#include "lilab/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "lilab/errors.hpp"

namespace lilab {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Json json_number(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw ConfigError("cannot write to '" + path + "'");
  }
  out << text;
}

namespace {

void append_cell(std::string& s, double v) {
  s += ',';
  if (!std::isnan(v)) s += format_double(v);
}

}  // namespace

std::string path_csv(const WienerPath& path) {
  std::string out = "window,t";
  for (int j = 1; j <= path.noise_dim(); ++j) {
    out += ",W_" + std::to_string(j);
  }
  out += '\n';
  const auto& grid = path.grid();
  for (std::size_t i = 0; i < grid.node_count(); ++i) {
    const int window =
        i == 0 ? 0 : grid.window_of_cell(i - 1);  // window of the ending cell
    out += std::to_string(window);
    out += ',';
    out += format_double(grid.node(i));
    for (int j = 0; j < path.noise_dim(); ++j) {
      append_cell(out, path.values()(static_cast<Eigen::Index>(i), j));
    }
    out += '\n';
  }
  return out;
}

std::string flow_csv(const FlowPath& flow) {
  std::string out = "t";
  for (int j = 1; j <= flow.dim(); ++j) out += ",X_" + std::to_string(j);
  out += '\n';
  for (std::size_t i = 0; i < flow.times.size(); ++i) {
    out += format_double(flow.times[i]);
    for (int j = 0; j < flow.dim(); ++j) {
      append_cell(out, flow.states(static_cast<Eigen::Index>(i), j));
    }
    out += '\n';
  }
  return out;
}

std::string sample_path_csv(const SamplePath& path) {
  std::string out = "t";
  for (int j = 1; j <= path.dim(); ++j) out += ",X_" + std::to_string(j);
  out += '\n';
  for (int i = 0; i <= path.cells(); ++i) {
    out += format_double(path.time(i));
    for (int j = 0; j < path.dim(); ++j) {
      append_cell(out, path.values()(i, j));
    }
    out += '\n';
  }
  return out;
}

std::string rescaled_csv(const std::vector<double>& scales,
                         const std::vector<SamplePath>& paths) {
  if (scales.size() != paths.size() || paths.empty()) {
    throw DomainError("rescaled output needs one path per scale");
  }
  std::string out = "u,t";
  for (int j = 1; j <= paths.front().dim(); ++j) {
    out += ",xi_" + std::to_string(j);
  }
  out += '\n';
  for (std::size_t s = 0; s < scales.size(); ++s) {
    const SamplePath& p = paths[s];
    for (int i = 0; i <= p.cells(); ++i) {
      out += format_double(scales[s]);
      out += ',';
      out += format_double(p.time(i));
      for (int j = 0; j < p.dim(); ++j) {
        append_cell(out, p.values()(i, j));
      }
      out += '\n';
    }
  }
  return out;
}

std::string control_csv(const Control& control) {
  std::string out = "cell_index";
  for (int j = 1; j <= control.noise_dim(); ++j) {
    out += ",f_dot_" + std::to_string(j);
  }
  out += '\n';
  for (int c = 0; c < control.cells(); ++c) {
    out += std::to_string(c);
    for (int j = 0; j < control.noise_dim(); ++j) {
      append_cell(out, control.rates()(c, j));
    }
    out += '\n';
  }
  return out;
}

std::string lil_csv(const LilReport& report) {
  std::string out =
      "seed,i,u,dist_theta,endpoint_norm,gamma,target_id,dist_target\n";
  for (const auto& r : report.rows) {
    out += std::to_string(r.seed);
    out += ',';
    out += std::to_string(r.i);
    out += ',';
    out += format_double(r.u);
    append_cell(out, r.dist_theta);
    append_cell(out, r.endpoint_norm);
    append_cell(out, r.gamma);
    out += ',';
    if (r.target_id >= 0) out += std::to_string(r.target_id);
    append_cell(out, r.dist_target);
    out += '\n';
  }
  return out;
}

std::string lil_series_csv(const LilReport& report) {
  std::string out = "i,median_dist\n";
  for (std::size_t q = 0; q < report.index.size(); ++q) {
    out += std::to_string(report.index[q]);
    append_cell(out, report.median_dist[q]);
    out += '\n';
  }
  return out;
}

Json rate_json(const RateResult& result) {
  Json j;
  j["value"] = json_number(result.value);
  j["residual"] = json_number(result.residual);
  j["method"] = result.method;
  j["iterations"] = result.iterations;
  j["start_index"] = result.start_index;
  j["converged"] = result.converged;
  j["energy"] = json_number(result.control.energy());
  return j;
}

Json theta_json(const ThetaQuery& query) {
  Json j;
  j["distance"] = json_number(query.distance);
  j["residual"] = json_number(query.distance);
  j["method"] = "variational";
  j["iterations"] = query.iterations;
  j["start_index"] = query.start_index;
  j["converged"] = query.converged;
  j["control_energy"] = json_number(query.control.energy());
  return j;
}

Json lil_summary_json(const LilReport& report) {
  Json j;
  j["mode"] = report.mode;
  j["burn_in"] = report.burn_in;
  j["rows"] = report.rows.size();
  Json per_window = Json::array();
  for (std::size_t q = 0; q < report.index.size(); ++q) {
    Json w;
    w["i"] = report.index[q];
    w["median_dist"] = json_number(report.median_dist[q]);
    w["min_dist"] = json_number(report.min_dist[q]);
    w["exceed_count"] = report.exceed_count[q];
    per_window.push_back(std::move(w));
  }
  j["per_window"] = std::move(per_window);
  if (!report.target_hit_fraction.empty()) {
    Json t = Json::array();
    for (double f : report.target_hit_fraction) t.push_back(json_number(f));
    j["target_hit_fraction"] = std::move(t);
  }
  return j;
}

namespace {

Json vec_json(const Vec& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(json_number(v[i]));
  return a;
}

}  // namespace

std::string h_report_jsonl(const HReport& report) {
  std::string out;
  for (const auto& e : report.entries) {
    Json j;
    j["u"] = json_number(e.u);
    j["field"] = e.field;
    j["sup_dev"] = json_number(e.sup_dev);
    j["sup_dev_jacobian"] = json_number(e.sup_dev_jacobian);
    j["witness_point"] = vec_json(e.witness);
    j["witness_point_jacobian"] = vec_json(e.witness_jacobian);
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::string c_report_jsonl(const CReport& report) {
  std::string out;
  for (const auto& e : report.entries) {
    Json j;
    j["u"] = json_number(e.u);
    j["estimate"] = json_number(e.estimate);
    j["method"] = e.method;
    out += j.dump();
    out += '\n';
  }
  return out;
}

Json h_verdict_json(const HReport& report) {
  Json j;
  j["pass"] = report.pass;
  j["tol"] = json_number(report.tol);
  j["detail"] = report.detail;
  return j;
}

Json c_verdict_json(const CReport& report) {
  Json j;
  j["pass"] = report.pass;
  j["delta"] = json_number(report.delta);
  j["detail"] = report.detail;
  return j;
}

}  // namespace lilab
