#pragma once

#include "mpxeq/compstat.hpp"
#include "mpxeq/jsonio.hpp"
#include "mpxeq/lindahl.hpp"
#include "mpxeq/oracle.hpp"
#include "mpxeq/welfare.hpp"

namespace mpxeq {

inline constexpr const char* kToolVersion = "0.1.0";

// Report documents carry the tool version and the economy hash so outputs
// can be traced back to their exact input.
json report_envelope(const MultiplexEconomy& economy);

json to_json(const AssumptionReport& report);
json to_json(const MultiplexEconomy& economy, const EquilibriumSolution& solution);
json to_json(const ResidualReport& report);
json to_json(const ParallelVerdict& verdict);
json to_json(const MultiplexEconomy& economy, const WelfareReport& report);
json to_json(const ResourceUtilization& cru);
json to_json(const MultiplexEconomy& economy, const ImprovementResult& improvement);
json to_json(const MultiplexEconomy& economy, const LindahlSolution& solution);
json to_json(const MultiplexEconomy& economy, const LindahlComparison& comparison);
json to_json(const MultiplexEconomy& economy, const PerturbationResult& result);
json to_json(const DerivativeReport& report);
json to_json(const Error& error);

std::string curves_csv(const CurveSample& sample);
json to_json(const CurveSample& sample);

} // namespace mpxeq
