#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "lilab/control.hpp"
#include "lilab/flow_solver.hpp"
#include "lilab/hypothesis_checks.hpp"
#include "lilab/lil_lab.hpp"
#include "lilab/rate.hpp"
#include "lilab/sample_path.hpp"
#include "lilab/wiener_path.hpp"

namespace lilab {

using Json = nlohmann::ordered_json;

// All writers format doubles with %.17g and never emit timestamps, so byte
// identical reruns come for free.
std::string format_double(double v);
// Doubles become JSON numbers; infinities the strings "inf"/"-inf"; NaN null.
Json json_number(double v);

void write_text_file(const std::string& path, const std::string& text);

std::string path_csv(const WienerPath& path);
std::string flow_csv(const FlowPath& flow);
std::string sample_path_csv(const SamplePath& path);
std::string rescaled_csv(const std::vector<double>& scales,
                         const std::vector<SamplePath>& paths);
std::string control_csv(const Control& control);
std::string lil_csv(const LilReport& report);
std::string lil_series_csv(const LilReport& report);

Json rate_json(const RateResult& result);
Json theta_json(const ThetaQuery& query);
Json lil_summary_json(const LilReport& report);
std::string h_report_jsonl(const HReport& report);
std::string c_report_jsonl(const CReport& report);
Json h_verdict_json(const HReport& report);
Json c_verdict_json(const CReport& report);

}  // namespace lilab
