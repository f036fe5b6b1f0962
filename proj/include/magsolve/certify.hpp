#ifndef MAGSOLVE_CERTIFY_HPP
#define MAGSOLVE_CERTIFY_HPP

#include <optional>
#include <string>
#include <vector>

#include "magsolve/descent.hpp"
#include "magsolve/material.hpp"

namespace magsolve {

/// Guaranteed-convergence constants of the generalized descent iteration:
/// curvature bounds (gamma, L) of the energy density, metric bounds
/// (alpha, beta), the Armijo parameters, the step-size floor tau_star, the
/// per-step energy-gap contraction factor q and the norm constant C = L/gamma.
struct ConvergenceCertificate {
  double gamma = 0.0;
  double L = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double rho = 0.0;
  double sigma = 0.0;
  double tau_star = 0.0;
  double q = 0.0;
  double C = 0.0;
  std::optional<double> C_Omega;  ///< user-supplied Poincare constant, not estimated

  void validate() const;  ///< throws NumericalError on violated invariants
};

/// Global curvature bounds over all region laws: (min gamma_mat, max L_mat).
std::pair<double, double> global_material_bounds(const std::vector<MaterialLaw> &laws);

/// Uniform eigenvalue bounds of the chosen metric family over all iterates:
/// (nu_bar, nu_bar) for the fixed-point metric, (gamma, L) for Kacanov and
/// Newton. nu_bar must be given exactly for the fixed-point choice.
std::pair<double, double> derive_metric_bounds(Method method, double gamma, double L,
                                               std::optional<double> nu_bar = std::nullopt);

/// tau_star = rho min{2(1-sigma) alpha/L, 1},
/// q = 1 - tau_star sigma 2 gamma^2 / (L beta), C = L/gamma.
/// Throws NumericalError when the input invariants fail.
struct ContractionConstants {
  double tau_star;
  double q;
  double C;
};
ContractionConstants contraction_factor(double gamma, double L, double alpha, double beta,
                                        double rho, double sigma);

/// Bounds, metric bounds and contraction constants in one step.
ConvergenceCertificate make_certificate(const std::vector<MaterialLaw> &laws,
                                        const SolverConfig &config);

/// Comparison of an observed run against the certificate. The minimum energy
/// is estimated as the final energy minus the last recorded drop, so every
/// stored gap stays positive.
struct CertReport {
  double phi_star = 0.0;           ///< estimated minimum energy
  bool envelope_ok = true;         ///< gap_n <= q^n gap_0 (1 + 1e-9)
  bool ratios_ok = true;           ///< per-step gap ratio <= q (same slack); 0/0 skipped
  bool monotone_ok = true;         ///< energies nonincreasing along the trace
  bool tau_floor_ok = true;        ///< every accepted tau >= tau_star
  int violations = 0;
  std::vector<std::string> messages;

  bool all_ok() const { return envelope_ok && ratios_ok && monotone_ok && tau_floor_ok; }
};

CertReport check_decay(const std::vector<IterationRecord> &trace, double final_energy,
                       const ConvergenceCertificate &cert);

/// Human-readable key-value block, also embedded in study CSV headers.
std::string certificate_to_text(const ConvergenceCertificate &cert);
std::string report_to_text(const CertReport &report);

} // namespace magsolve

#endif
