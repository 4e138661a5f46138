#include "qres/report.hpp"

#include <cmath>

namespace qres::report {

json to_json(ExtendedReal x) {
  if (x.is_finite()) return x.value();
  return x.to_string();
}

json to_json(const Eigen::VectorXd& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::isfinite(v[i])) arr.push_back(v[i]);
    else arr.push_back(ExtendedReal(v[i]).to_string());
  }
  return arr;
}

json to_json(const resilience::ResilienceReport& r) {
  json doc;
  doc["lost_column"] = r.lost_column + 1;
  doc["lambda_plus"] = to_json(r.lambda_plus);
  doc["lambda_minus"] = to_json(r.lambda_minus);
  doc["r_plus"] = r.r_plus;
  doc["r_minus"] = r.r_minus;
  doc["r_min"] = std::min(r.r_plus, r.r_minus);
  doc["r_q"] = r.r_q;
  doc["r_kq"] = r.r_kq;
  doc["order"] = r.order;
  doc["controllable"] = r.controllable;
  doc["resilient"] = r.resilient;
  doc["containment"] = r.containment ? json(*r.containment) : json(nullptr);
  doc["diagnostics"] = r.diagnostics;
  return doc;
}

json to_json(const resilience::ReachTimeVerdict& v) {
  return {{"nominal_plus", to_json(v.nominal_plus)},
          {"malfunction_plus", to_json(v.malfunction_plus)},
          {"nominal_minus", to_json(v.nominal_minus)},
          {"malfunction_minus", to_json(v.malfunction_minus)},
          {"controllable", v.controllable},
          {"resilient", v.resilient},
          {"worst_ratio", v.worst_ratio}};
}

json to_json(const oracle::ScanReport& s) {
  return {{"worst_value", to_json(s.worst_value)},
          {"worst_argument", to_json(s.worst_argument)},
          {"theory_value", to_json(s.theory_value)},
          {"max_violation", to_json(ExtendedReal(s.max_violation))},
          {"evaluations", s.evaluations}};
}

json to_json(const reach::ReachResult& r) {
  json doc;
  doc["time"] = to_json(r.time);
  doc["order"] = r.order;
  doc["optimizer_u"] = r.optimizer_u ? to_json(*r.optimizer_u) : json(nullptr);
  doc["optimizer_w"] = r.optimizer_w ? to_json(*r.optimizer_w) : json(nullptr);
  doc["worst_vertex"] = r.worst_vertex ? json(*r.worst_vertex) : json(nullptr);
  return doc;
}

json to_json(const sim::SmoothReachResult& r) {
  auto run = [](const sim::ScenarioRun& s) {
    return json{{"nominal_time", s.nominal_time},
                {"malfunctioning_time", s.malfunctioning_time},
                {"ratio", s.ratio()}};
  };
  return {{"tau", r.tau},
          {"bang", run(r.bang)},
          {"smooth", run(r.smooth)},
          {"ratio_bangbang", r.ratio_bangbang},
          {"ratio_smooth", r.ratio_smooth}};
}

std::string display(ExtendedReal x, int precision) { return x.to_display(precision); }

std::string display(double x, int precision) {
  if (std::isnan(x)) return "nan";
  return ExtendedReal(x).to_display(precision);
}

std::string display(const Eigen::VectorXd& v, int precision) {
  std::string out = "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i > 0) out += ", ";
    out += display(v[i], precision);
  }
  return out + "]";
}

}  // namespace qres::report
