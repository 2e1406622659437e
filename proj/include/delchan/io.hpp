#pragma once

#include <json.hpp>
#include <string>

#include "delchan/adversary.hpp"
#include "delchan/codeword.hpp"
#include "delchan/delpat.hpp"
#include "delchan/harness.hpp"
#include "delchan/layers.hpp"
#include "delchan/querydist.hpp"

namespace delchan {

using Json = nlohmann::ordered_json;

Json code_to_json(const Code& code);
Code code_from_json(const Json& j);

Json pattern_to_json(const Pattern& pattern);
Pattern pattern_from_json(const Json& j);

Json channel_to_json(const Channel& channel);
Channel channel_from_json(const Json& j);

Json instance_to_json(const PatternInstance& instance);

Json dist_to_json(const OutputDist& dist);
Json approx_report_to_json(const ApproxReport& report);

Json adversary_params_to_json(const AdversaryParams& params);
AdversaryParams adversary_params_from_json(const Json& j);

Json rep_family_to_json(const RepFamily& rep);
RepFamily rep_family_from_json(const Json& j);

Json record_to_json(const CompressedRecord& record, const RepFamily& rep);

Json attack_report_to_json(const AttackReport& report);
Json gap_distances_to_json(const GapDistances& report);
Json four_query_to_json(const FourQueryReport& report);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& contents);
Json read_json_file(const std::string& path);

}  // namespace delchan
