#pragma once

#include "arbhedge/csls.hpp"
#include "arbhedge/hedging.hpp"
#include "arbhedge/pde.hpp"
#include "arbhedge/smile.hpp"
#include "arbhedge/transform.hpp"

#include <json.hpp>

namespace arbhedge {

nlohmann::json to_json(const DerivedConstants& dc);
nlohmann::json to_json(const CslsReport& report);
nlohmann::json to_json(const HedgeSimResult& result);
nlohmann::json to_json(const SmileCurve& curve);

/// Summary of a solve: grid, final profile extrema, crossing of u = A.
nlohmann::json solve_summary(const SolutionSurface& surface, const DerivedConstants& dc);

}  // namespace arbhedge
