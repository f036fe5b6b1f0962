#include "magsolve/certify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "magsolve/errors.hpp"

namespace magsolve {

void ConvergenceCertificate::validate() const {
  std::ostringstream bad;
  if (!(gamma > 0.0 && gamma <= L))
    bad << "certificate: need 0 < gamma <= L\n";
  if (!(alpha > 0.0 && alpha <= beta))
    bad << "certificate: need 0 < alpha <= beta\n";
  if (!(rho > 0.0 && rho < 1.0))
    bad << "certificate: need 0 < rho < 1\n";
  if (!(sigma > 0.0 && sigma < 0.5))
    bad << "certificate: need 0 < sigma < 1/2\n";
  if (!(tau_star > 0.0 && tau_star <= 1.0))
    bad << "certificate: need 0 < tau_star <= 1\n";
  if (!(q > 0.0 && q < 1.0))
    bad << "certificate: need 0 < q < 1\n";
  if (!(C >= 1.0))
    bad << "certificate: need C >= 1\n";
  const std::string msg = bad.str();
  if (!msg.empty())
    throw NumericalError(msg);
}

std::pair<double, double> global_material_bounds(const std::vector<MaterialLaw> &laws) {
  if (laws.empty())
    throw ConfigError("global_material_bounds: no laws given");
  double gamma = laws.front().gamma_bound();
  double L = laws.front().L_bound();
  for (const MaterialLaw &law : laws) {
    gamma = std::min(gamma, law.gamma_bound());
    L = std::max(L, law.L_bound());
  }
  return {gamma, L};
}

std::pair<double, double> derive_metric_bounds(Method method, double gamma, double L,
                                               std::optional<double> nu_bar) {
  if (method == Method::FixedPoint) {
    if (!nu_bar || !(*nu_bar > 0.0))
      throw ConfigError("derive_metric_bounds: fixed-point metric needs nu_bar > 0");
    return {*nu_bar, *nu_bar};
  }
  // Kacanov chord values and Newton Hessian eigenvalues both sit inside the
  // curvature bounds.
  return {gamma, L};
}

ContractionConstants contraction_factor(double gamma, double L, double alpha, double beta,
                                        double rho, double sigma) {
  if (!(gamma > 0.0 && gamma <= L && alpha > 0.0 && alpha <= beta && rho > 0.0 && rho < 1.0 &&
        sigma > 0.0 && sigma < 0.5))
    throw NumericalError("contraction_factor: invalid certificate inputs");
  ContractionConstants c;
  c.tau_star = rho * std::min(2.0 * (1.0 - sigma) * alpha / L, 1.0);
  c.q = 1.0 - c.tau_star * sigma * 2.0 * gamma * gamma / (L * beta);
  c.C = L / gamma;
  if (!(c.q > 0.0 && c.q < 1.0))
    throw NumericalError("contraction_factor: q escaped (0, 1)");
  return c;
}

ConvergenceCertificate make_certificate(const std::vector<MaterialLaw> &laws,
                                        const SolverConfig &config) {
  const auto [gamma, L] = global_material_bounds(laws);
  const auto nu_bar = config.method == Method::FixedPoint ? std::optional<double>(config.nu_bar)
                                                          : std::nullopt;
  const auto [alpha, beta] = derive_metric_bounds(config.method, gamma, L, nu_bar);
  const ContractionConstants c =
      contraction_factor(gamma, L, alpha, beta, config.rho, config.sigma);
  ConvergenceCertificate cert;
  cert.gamma = gamma;
  cert.L = L;
  cert.alpha = alpha;
  cert.beta = beta;
  cert.rho = config.rho;
  cert.sigma = config.sigma;
  cert.tau_star = c.tau_star;
  cert.q = c.q;
  cert.C = c.C;
  cert.validate();
  return cert;
}

CertReport check_decay(const std::vector<IterationRecord> &trace, double final_energy,
                       const ConvergenceCertificate &cert) {
  cert.validate();
  CertReport report;
  if (trace.empty()) {
    report.messages.push_back("empty trace: nothing to check");
    return report;
  }

  const double last_drop = trace.back().energy - final_energy;
  report.phi_star = final_energy - last_drop;
  const double slack = 1.0 + 1e-9;

  std::vector<double> gaps;
  gaps.reserve(trace.size() + 1);
  for (const auto &r : trace)
    gaps.push_back(r.energy - report.phi_star);
  gaps.push_back(final_energy - report.phi_star);

  const double gap0 = gaps.front();
  double envelope = gap0;
  for (std::size_t n = 0; n < gaps.size(); ++n) {
    if (n > 0) {
      envelope *= cert.q;
      if (gaps[n] > gaps[n - 1] * slack) {
        report.monotone_ok = false;
        ++report.violations;
        std::ostringstream msg;
        msg << "energy gap increased at step " << n << ": " << gaps[n - 1] << " -> " << gaps[n];
        report.messages.push_back(msg.str());
      }
      if (gaps[n - 1] > 0.0 && gaps[n] > cert.q * gaps[n - 1] * slack) {
        report.ratios_ok = false;
        ++report.violations;
        std::ostringstream msg;
        msg << "per-step gap ratio " << gaps[n] / gaps[n - 1] << " exceeds q = " << cert.q
            << " at step " << n;
        report.messages.push_back(msg.str());
      }
    }
    if (gaps[n] > envelope * slack) {
      report.envelope_ok = false;
      ++report.violations;
      std::ostringstream msg;
      msg << "gap " << gaps[n] << " above the guaranteed envelope " << envelope << " at step "
          << n;
      report.messages.push_back(msg.str());
    }
  }

  for (const auto &r : trace) {
    if (r.tau < cert.tau_star * (1.0 - 1e-12)) {
      report.tau_floor_ok = false;
      ++report.violations;
      std::ostringstream msg;
      msg << "accepted stepsize " << r.tau << " below the floor tau_star = " << cert.tau_star
          << " at iteration " << r.n;
      report.messages.push_back(msg.str());
    }
  }
  return report;
}

std::string certificate_to_text(const ConvergenceCertificate &cert) {
  std::ostringstream out;
  out.precision(12);
  out << "gamma " << cert.gamma << "\n"
      << "L " << cert.L << "\n"
      << "alpha " << cert.alpha << "\n"
      << "beta " << cert.beta << "\n"
      << "rho " << cert.rho << "\n"
      << "sigma " << cert.sigma << "\n"
      << "tau_star " << cert.tau_star << "\n"
      << "q " << cert.q << "\n"
      << "C " << cert.C << "\n";
  if (cert.C_Omega)
    out << "C_Omega " << *cert.C_Omega << "\n";
  return out.str();
}

std::string report_to_text(const CertReport &report) {
  std::ostringstream out;
  out.precision(12);
  out << "phi_star " << report.phi_star << "\n"
      << "envelope_ok " << (report.envelope_ok ? 1 : 0) << "\n"
      << "ratios_ok " << (report.ratios_ok ? 1 : 0) << "\n"
      << "monotone_ok " << (report.monotone_ok ? 1 : 0) << "\n"
      << "tau_floor_ok " << (report.tau_floor_ok ? 1 : 0) << "\n"
      << "violations " << report.violations << "\n";
  for (const auto &m : report.messages)
    out << "violation: " << m << "\n";
  return out.str();
}

} // namespace magsolve
