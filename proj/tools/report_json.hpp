#pragma once

#include <json.hpp>

#include "ranksieve/metrics.hpp"
#include "ranksieve/model.hpp"
#include "ranksieve/refsolver.hpp"
#include "ranksieve/synth.hpp"

namespace ranksieve::cli {

nlohmann::json vector_json(const Vector& v);
nlohmann::json index_json(const IndexSet& s);

nlohmann::json report_json(const SolveReport& r);
nlohmann::json report_json(const SplittingResult& r);
nlohmann::json spec_json(const SynthSpec& s, double lambda);

}  // namespace ranksieve::cli
