#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "qkdlab/keyrates.hpp"
#include "qkdlab/postprocess.hpp"
#include "qkdlab/protocols.hpp"
#include "qkdlab/quantum.hpp"
#include "qkdlab/report.hpp"
#include "qkdlab/squashing.hpp"

namespace qkdlab {

using Json = nlohmann::json;

// matrices serialize as nested [re, im] pair arrays
Json matrix_to_json(const Mat& m);
Mat matrix_from_json(const Json& j);

Json povm_to_json(const Povm& p);
Povm povm_from_json(const Json& j);

ProtocolConfig protocol_config_from_json(const Json& j);
Json protocol_config_to_json(const ProtocolConfig& c);

Json summary_to_json(const SimResult& result, const ProtocolConfig& config);

/// RFC-4180 CSV with a header row (CRLF line endings).
void write_records_csv(std::ostream& os, const std::vector<RoundRecord>& records);

Json rate_report_to_json(const RateReport& report);

Json decoy_data_to_json(const DecoyData& d);
DecoyData decoy_data_from_json(const Json& j);
Json decoy_result_to_json(const DecoyResult& r);

Json squash_certificate_to_json(const SquashCertificate& cert);

PipelineConfig pipeline_config_from_json(const Json& j);
Json pipeline_result_to_json(const PipelineResult& r);

} // namespace qkdlab
