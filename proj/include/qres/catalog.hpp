#pragma once

#include <filesystem>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qres/model.hpp"

namespace qres::catalog {

/// Standard gravitational parameter of the Earth, m^3 s^-2.
inline constexpr double kMuEarth = 3.986e14;

/// Classical orbital elements. Angles in radians, semi-major axis in km.
struct OrbitalElements {
  double a_km = 0.0;
  double e = 0.0;
  double i = 0.0;
  double raan = 0.0;
  double argp = 0.0;
  double mean_anomaly = 0.0;

  /// Initial state of the orbit-raising maneuver.
  static OrbitalElements raising_initial();

  /// Reads {"a_km", "e", "i_deg", "raan_deg", "argp_deg", "M_deg"}.
  static OrbitalElements load(const std::filesystem::path& path);
  static OrbitalElements parse(const std::string& text);
};

struct OctocopterParams {
  double arm = 0.4;            // l, m
  double mass = 1.64;          // kg
  double inertia_x = 0.044;    // kg m^2
  double inertia_y = 0.044;
  double inertia_z = 0.088;
  double k_thrust = 1e-5;      // N s^2
  double d_drag = 0.3e-6;      // N m s^2
  double inertia_rotor = 9e-5; // kg m^2
  double omega_max = 8000.0 * 2.0 * std::numbers::pi / 60.0;  // rad/s
  double coupling = 0.64;      // b
  double gravity = 9.81;       // m/s^2
  double tau = 0.1;            // propeller time constant, s

  /// Throws InvariantError naming the first non-positive field.
  void validate() const;
};

/// The printed 6x14 orbit-raising matrix (scaled by 1e-6), inputs in [-1, 1].
IntegratorSystem spacecraft_printed();

/// Averaged variational equations evaluated at `el`: sqrt(a/mu) times the
/// five-block layout, with a converted to metres. Inputs in [-1, 1].
/// Throws DomainError for e < 1e-6, e >= 1, i outside (0, pi), or
/// sin(argp), cos(argp) within 1e-9 of zero.
IntegratorSystem spacecraft_bbar(const OrbitalElements& el);

/// ||rebuilt block|| / ||printed block|| for the five nonzero blocks B1..B5.
std::vector<double> appendix_block_scale_ratios(const IntegratorSystem& rebuilt);

/// Entry-wise agreement of zero pattern and signs with the printed matrix.
/// Signs are compared where the printed entry exceeds `min_printed` in magnitude.
bool sign_pattern_matches_printed(const IntegratorSystem& rebuilt, double min_printed = 0.1e-6);

/// Angular acceleration from squared propeller speeds, inputs in [0, omega_max^2].
IntegratorSystem octocopter_rotational(const OctocopterParams& p = {}, int order = 1);

/// Level-mode translational dynamics (1/m) R_z(psi) B_trans with gravity folded
/// into the inputs of propellers 1-4. psi in radians.
IntegratorSystem octocopter_translational(const OctocopterParams& p = {}, double psi = 0.0,
                                          int order = 1);

struct CatalogEntry {
  std::string name;
  std::string description;
};

std::vector<CatalogEntry> entries();

/// Resolves "spacecraft-printed", "spacecraft-appendix:<file>", "octocopter-rot",
/// "octocopter-trans:<psi-degrees>" (optionally prefixed by "catalog:"), or
/// otherwise loads a model file.
IntegratorSystem resolve(const std::string& source);

}  // namespace qres::catalog
