#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace magreg::app {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Angular potential on S¹: constant AB flux, the normalised tilted loop, or
/// explicit real Fourier data for α and h.
struct PotentialSpec {
  std::string kind = "ab_flux";  // ab_flux | tilt | trig
  double flux = 0.5;
  double beta = 0.0;
  double alpha0 = 0.5;
  std::vector<double> alpha_cos, alpha_sin;
  double h0 = 0.0;
  std::vector<double> h_cos, h_sin;
};

struct TiltSpec {
  double beta_min = 0.0;
  double beta_max = 1.5;
  int steps = 31;
};

struct MathieuSpec {
  std::vector<double> q{0.0, 1.0, 10.0, 100.0, 1e4};
  int count = 4;
};

struct GammaSpec {
  std::vector<double> metric_diag{1.0, 1.0, 1.0};
  std::vector<double> x_grid{-1.0, -0.5, 0.0, 0.5, 1.0};
  std::string data = "holder";  // holder | lebesgue
  double q = 6.0;
};

struct SolenoidSpec {
  std::string loop = "tilted";  // tilted | axial | samples
  double beta = 0.3;
  double radius = 1.0;
  std::vector<std::vector<double>> samples;
  double current = 1.0;
  double mu0 = 1.0;
  std::vector<double> deltas{0.04, 0.02, 0.01};
  std::vector<std::vector<double>> points{{0.3, 0.8, -0.5}, {-0.2, 0.5, 0.6}, {0.0, -0.7, 0.4}};
};

struct CurveSpec {
  std::string kind = "helix";  // helix | circle | perturbed_helix | samples
  double r = 1.0;
  double b = 0.5;
  double amp = 0.1;
  double turns = 1.0;
  std::vector<std::vector<double>> samples;  // rows (x, η₁, η₂, η₃)
  int points = 100;
  std::vector<double> rhos{1e-4, 1e-3, 1e-2, 0.1};
  int thetas = 8;
  double x = 0.0;
  double current = 1.0;
  double c_gamma = 3.141592653589793;
};

struct AnnulusSpec {
  double R = 1.0;
  std::vector<double> eps{0.2, 0.1, 0.05, 0.025, 1e-2, 1e-3, 1e-4};
  std::vector<double> eigen{1.0};  // g = Σ c_k ψ_k when non-empty
  double a0 = 0.0;
  std::vector<double> cos_coeffs, sin_coeffs;
};

struct HardySpec {
  int trials = 100;
  double R = 1.0;
  int max_mode = 3;
  int max_degree = 3;
};

struct RunConfig {
  std::string command;
  std::string source = "<defaults>";
  std::uint64_t seed = 42;
  double tol = 1e-10;
  int truncation = 16;
  int n_eigs = 5;
  PotentialSpec potential;
  TiltSpec tilt;
  MathieuSpec mathieu;
  GammaSpec gamma;
  SolenoidSpec solenoid;
  CurveSpec curve;
  AnnulusSpec annulus;
  HardySpec hardy;

  /// Every field, defaults included, as block YAML.
  std::string to_yaml() const;
};

/// Throws ConfigError naming the line and key for malformed YAML, unknown
/// keys, type mismatches and out-of-range values.
RunConfig parse_config(const std::string& text, const std::string& source = "<string>");
RunConfig load_config(const std::string& path);
void validate(const RunConfig& cfg);

}  // namespace magreg::app
