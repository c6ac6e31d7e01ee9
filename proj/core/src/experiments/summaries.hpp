#pragma once

#include "hypmax/report.hpp"

namespace hypmax {

Json summarize_prop21(const Json& params, const Json& records);
Json summarize_cor22(const Json& params, const Json& records);
Json summarize_lemma31(const Json& params, const Json& records);
Json summarize_lemma32(const Json& params, const Json& records);
Json summarize_lemma33(const Json& params, const Json& records);
Json summarize_fs(const Json& params, const Json& records);
Json summarize_example41_case1(const Json& params, const Json& records);
Json summarize_example41_case2(const Json& params, const Json& records);
Json summarize_example41_case3(const Json& params, const Json& records);
Json summarize_condition(const Json& params, const Json& records);
Json summarize_maximal(const Json& params, const Json& records);

/// Finalizes a report: summary from records, version stamp.
ExperimentReport finish(std::string experiment, Json params, Json records, std::uint64_t seed);

}  // namespace hypmax
