#include "qres/catalog.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qres/errors.hpp"

namespace qres::catalog {

namespace {

using json = nlohmann::json;

constexpr double kDeg = std::numbers::pi / 180.0;

// Printed entries, in units of 1e-6.
constexpr double kPrinted[6][14] = {
    {0, 0, 0, 18314, 40583, 0, 0, 0, 0, 0, 0, 0, 0, 0},
    {0, 0, 0, 1.1, -3.4, 2.3, -0.4, 0, 0, 0, 0, 0, 0, 0},
    {0, 0, 0, 0, 0, 0, 0, 0, 0, -5.2, 3.8, -0.9, -0.7, 0.2},
    {0, 0, 0, 0, 0, 0, 0, 0, 0, -5.5, 4, -0.9, 5.6, -1.9},
    {3, -2.7, 0, 0, 0, 0, 0, 4.7, -1, 5.2, -3.8, 1.3, -5.6, 1.9},
    {-12.3, 7.2, -0.9, 0, 0, 0, 0, -3.5, 0.8, 0, 0, 0, 0, 0},
};

// Position of blocks B1..B5 in the 6x14 layout: first row, first column, rows, columns.
struct Block {
  int row, col, rows, cols;
};
constexpr Block kBlocks[5] = {{0, 3, 2, 4}, {2, 9, 2, 5}, {4, 0, 2, 3}, {4, 7, 2, 2}, {4, 9, 2, 5}};

std::vector<std::string> fourier_labels() {
  std::vector<std::string> out;
  for (int j = 1; j <= 14; ++j) out.push_back("fourier_" + std::to_string(j));
  return out;
}

std::vector<std::string> propeller_labels() {
  std::vector<std::string> out;
  for (int j = 1; j <= 8; ++j) out.push_back("propeller_" + std::to_string(j));
  return out;
}

double parse_degrees(const std::string& text) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end || !std::isfinite(v))
    throw ArgumentError("invalid yaw angle '" + text + "' (degrees expected)");
  return v;
}

double read_number(const json& doc, const char* key) {
  if (!doc.contains(key) || !doc.at(key).is_number())
    throw ParseError(std::string("orbital elements: field '") + key + "' must be a number");
  return doc.at(key).get<double>();
}

}  // namespace

OrbitalElements OrbitalElements::raising_initial() {
  return {6678.0, 0.67, 20.0 * kDeg, 20.0 * kDeg, 20.0 * kDeg, 20.0 * kDeg};
}

OrbitalElements OrbitalElements::parse(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("orbital elements: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("orbital elements: document must be an object");
  OrbitalElements el;
  el.a_km = read_number(doc, "a_km");
  el.e = read_number(doc, "e");
  el.i = read_number(doc, "i_deg") * kDeg;
  el.raan = read_number(doc, "raan_deg") * kDeg;
  el.argp = read_number(doc, "argp_deg") * kDeg;
  el.mean_anomaly = read_number(doc, "M_deg") * kDeg;
  return el;
}

OrbitalElements OrbitalElements::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open orbital elements file '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse(buf.str());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void OctocopterParams::validate() const {
  const std::pair<const char*, double> fields[] = {
      {"arm", arm},       {"mass", mass},         {"inertia_x", inertia_x},
      {"inertia_y", inertia_y}, {"inertia_z", inertia_z}, {"k_thrust", k_thrust},
      {"d_drag", d_drag}, {"inertia_rotor", inertia_rotor}, {"omega_max", omega_max},
      {"coupling", coupling}, {"gravity", gravity}, {"tau", tau}};
  for (const auto& [name, value] : fields)
    if (!(value > 0.0) || !std::isfinite(value)) throw InvariantError(name, "must be positive");
}

IntegratorSystem spacecraft_printed() {
  Eigen::MatrixXd b(6, 14);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 14; ++j) b(i, j) = kPrinted[i][j] * 1e-6;
  return IntegratorSystem::make("spacecraft-printed", 1, b, Eigen::VectorXd::Constant(14, -1.0),
                                Eigen::VectorXd::Constant(14, 1.0), fourier_labels());
}

IntegratorSystem spacecraft_bbar(const OrbitalElements& el) {
  const double e = el.e;
  if (!(el.a_km > 0.0)) throw DomainError("semi-major axis must be positive");
  if (!(e >= 1e-6)) throw DomainError("eccentricity below 1e-6: the 1/e terms diverge");
  if (!(e < 1.0)) throw DomainError("eccentricity must be below 1");
  if (!(el.i > 0.0 && el.i < std::numbers::pi) || std::abs(std::sin(el.i)) < 1e-9)
    throw DomainError("inclination must lie strictly between 0 and 180 degrees");
  const double sw = std::sin(el.argp), cw = std::cos(el.argp);
  if (std::abs(sw) < 1e-9 || std::abs(cw) < 1e-9)
    throw DomainError("argument of perigee makes tan or cot singular");

  const double a = el.a_km * 1e3;
  const double s = std::sqrt(1.0 - e * e);
  const double tw = sw / cw;
  const double csc_i = 1.0 / std::sin(el.i);
  const double cot_i = std::cos(el.i) * csc_i;

  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(6, 14);
  // B1
  m.block(0, 3, 2, 4) << a * e, 2.0 * a * s, 0.0, 0.0,
                         0.5 * (1 - e * e), -1.5 * e * s, s, -0.25 * e * s;
  // B2
  Eigen::MatrixXd b2(2, 5);
  b2 << -1.5 * e / s, 0.5 * (1 + e * e) / s, -0.25 * e / s, -0.5 * tw, 0.25 * e * tw,
        -1.5 * e / s, 0.5 * (1 + e * e) / s, -0.25 * e / s, 0.5 / tw, -0.25 * e / tw;
  b2.row(0) *= cw;
  b2.row(1) *= sw * csc_i;
  m.block(2, 9, 2, 5) = b2;
  // B3
  m.block(4, 0, 2, 3) << s, -s / (2 * e), 0.0,
                         -3.0, 1.5 * e + 0.5 / e, -0.5 * e * e;
  // B4
  m.block(4, 7, 2, 2) << (2 - e * e) / (2 * e), -0.25,
                         -(2 - e * e) / (2 * e) * s, 0.25 * s;
  // B5, second row zero
  m.block(4, 9, 1, 5) << 1.5 * e * sw / s, -0.5 * (1 + e * e) * sw / s, 0.25 * e * sw / s, -0.5, 0.25 * e;
  m.block(4, 9, 1, 5) *= cot_i;

  m *= std::sqrt(a / kMuEarth);
  return IntegratorSystem::make("spacecraft-appendix", 1, m, Eigen::VectorXd::Constant(14, -1.0),
                                Eigen::VectorXd::Constant(14, 1.0), fourier_labels());
}

std::vector<double> appendix_block_scale_ratios(const IntegratorSystem& rebuilt) {
  const Eigen::MatrixXd printed = spacecraft_printed().b_bar();
  if (rebuilt.b_bar().rows() != 6 || rebuilt.b_bar().cols() != 14)
    throw ArgumentError("appendix_block_scale_ratios: expected a 6x14 matrix");
  std::vector<double> out;
  for (const Block& b : kBlocks) {
    const double num = rebuilt.b_bar().block(b.row, b.col, b.rows, b.cols).norm();
    const double den = printed.block(b.row, b.col, b.rows, b.cols).norm();
    out.push_back(num / den);
  }
  return out;
}

bool sign_pattern_matches_printed(const IntegratorSystem& rebuilt, double min_printed) {
  const Eigen::MatrixXd printed = spacecraft_printed().b_bar();
  const Eigen::MatrixXd& m = rebuilt.b_bar();
  if (m.rows() != 6 || m.cols() != 14) return false;
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 14; ++j) {
      const double p = printed(i, j);
      if (p == 0.0) {
        if (m(i, j) != 0.0) return false;
      } else if (std::abs(p) > min_printed && (p > 0.0) != (m(i, j) > 0.0)) {
        return false;
      }
    }
  }
  return true;
}

IntegratorSystem octocopter_rotational(const OctocopterParams& p, int order) {
  p.validate();
  const double b = p.coupling;
  Eigen::MatrixXd pattern(3, 8);
  pattern << -1, 0, 1, 0, 0, 0, b, -b,
              0, 1, 0, -1, b, -b, 0, 0,
             -1, 1, -1, 1, 0, 0, 0, 0;
  const Eigen::Vector3d gains(p.arm * p.k_thrust / p.inertia_x, p.arm * p.k_thrust / p.inertia_y,
                              p.d_drag / p.inertia_z);
  const double w2 = p.omega_max * p.omega_max;
  return IntegratorSystem::make("octocopter-rot", order, gains.asDiagonal() * pattern,
                                Eigen::VectorXd::Zero(8), Eigen::VectorXd::Constant(8, w2),
                                propeller_labels());
}

IntegratorSystem octocopter_translational(const OctocopterParams& p, double psi, int order) {
  p.validate();
  if (!std::isfinite(psi)) throw ArgumentError("yaw angle must be finite");
  const double b = p.coupling;
  Eigen::MatrixXd b_trans(3, 8);
  b_trans << 0, 0, 0, 0, 1, -1, 0, 0,
             0, 0, 0, 0, 0, 0, 1, -1,
             1, 1, 1, 1, b, b, b, b;
  Eigen::Matrix3d rot;
  rot << std::cos(psi), -std::sin(psi), 0,
         std::sin(psi), std::cos(psi), 0,
         0, 0, 1;
  const double thrust_max = p.k_thrust * p.omega_max * p.omega_max;
  const double hover = p.mass * p.gravity / 4.0;
  Eigen::VectorXd lo(8), hi(8);
  lo << -hover, -hover, -hover, -hover, 0, 0, 0, 0;
  hi << thrust_max - hover, thrust_max - hover, thrust_max - hover, thrust_max - hover,
        thrust_max, thrust_max, thrust_max, thrust_max;
  return IntegratorSystem::make("octocopter-trans", order, rot * b_trans / p.mass, lo, hi,
                                propeller_labels());
}

std::vector<CatalogEntry> entries() {
  return {
      {"spacecraft-printed", "orbit-raising spacecraft, printed 6x14 matrix, inputs in [-1, 1]"},
      {"spacecraft-appendix:<elements.json>", "orbit-raising spacecraft rebuilt from orbital elements"},
      {"octocopter-rot", "octocopter angular dynamics, squared propeller speeds in [0, omega_max^2]"},
      {"octocopter-trans:<psi-degrees>", "octocopter level-mode translational dynamics at yaw psi"},
  };
}

IntegratorSystem resolve(const std::string& source) {
  std::string name = source;
  if (name.rfind("catalog:", 0) == 0) name = name.substr(8);
  if (name == "spacecraft-printed") return spacecraft_printed();
  if (name == "octocopter-rot") return octocopter_rotational();
  if (name == "octocopter-trans") return octocopter_translational();
  if (name.rfind("octocopter-trans:", 0) == 0)
    return octocopter_translational({}, parse_degrees(name.substr(17)) * kDeg);
  if (name.rfind("spacecraft-appendix:", 0) == 0)
    return spacecraft_bbar(OrbitalElements::load(name.substr(20)));
  if (source.rfind("catalog:", 0) == 0) throw ArgumentError("unknown catalog entry '" + name + "'");
  return load_system(source);
}

}  // namespace qres::catalog
