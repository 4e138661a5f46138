#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "qres/extended_real.hpp"
#include "qres/oracle.hpp"
#include "qres/reach.hpp"
#include "qres/resilience.hpp"
#include "qres/sim.hpp"

namespace qres::report {

using json = nlohmann::json;

/// Finite values as numbers, infinities as the strings "inf" / "-inf".
json to_json(ExtendedReal x);
json to_json(const Eigen::VectorXd& v);

/// Column indices are written 1-based, matching the command line.
json to_json(const resilience::ResilienceReport& r);
json to_json(const resilience::ReachTimeVerdict& v);
json to_json(const oracle::ScanReport& s);
json to_json(const reach::ReachResult& r);

/// Crossing times and ratios only; trajectories go to CSV.
json to_json(const sim::SmoothReachResult& r);

/// Human-readable number: "∞" for infinities, %.*g otherwise.
std::string display(ExtendedReal x, int precision = 6);
std::string display(double x, int precision = 6);
std::string display(const Eigen::VectorXd& v, int precision = 6);

}  // namespace qres::report
