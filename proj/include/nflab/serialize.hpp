#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "nflab/caratheodory.hpp"
#include "nflab/marty.hpp"
#include "nflab/zalcman.hpp"

namespace nflab {

using json = nlohmann::ordered_json;

/// Shortest decimal that round-trips; NaN and infinities spelled out.
std::string format_double(double v);

json to_json(const ScanReport& r);
json to_json(const RescalingStep& s);
json to_json(const VerificationReport& r);
json to_json(const SequenceReport& r);
json to_json(const LimitReport& r);
json to_json(const SeparationResult& r);
json to_json(const OmissionResult& r);
json to_json(const LiouvilleReport& r);
json to_json(const ScenarioReport& r);

// CSV writers; LF line endings, '.' decimal separator.
void write_scan_csv(std::ostream& os, const ScanReport& r);  // n,sup,argmax_re,argmax_im
void write_grid_csv(std::ostream& os, const std::vector<GridSample>& samples);
void write_separation_csv(std::ostream& os, const std::vector<SeparationResult>& rows);

}  // namespace nflab
