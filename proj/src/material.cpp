#include "magsolve/material.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "magsolve/errors.hpp"

namespace magsolve {

std::array<double, 2> SymTensor2::eigenvalues() const {
  const double mean = 0.5 * (xx + yy);
  const double disc = std::sqrt(0.25 * (xx - yy) * (xx - yy) + xy * xy);
  return {mean - disc, mean + disc};
}

// ---------------------------------------------------------------------------
// MonotoneSpline
// ---------------------------------------------------------------------------

MonotoneSpline MonotoneSpline::build(const std::vector<std::pair<double, double>> &data,
                                     double extrapolation_floor) {
  if (data.size() < 2)
    throw ConfigError("spline: need at least two (s, h) samples");
  if (std::abs(data.front().first) > 0.0 || std::abs(data.front().second) > 0.0)
    throw ConfigError("spline: curve must start at (0, 0)");
  for (std::size_t i = 1; i < data.size(); ++i) {
    if (!(data[i].first > data[i - 1].first))
      throw ConfigError("spline: |b| samples must be strictly increasing");
    if (!(data[i].second > data[i - 1].second))
      throw ConfigError("spline: |h| samples must be strictly increasing");
  }
  for (const auto &[s, h] : data)
    if (s < 0.0 || h < 0.0 || !std::isfinite(s) || !std::isfinite(h))
      throw ConfigError("spline: samples must be finite and nonnegative");

  MonotoneSpline sp;
  const std::size_t n = data.size();
  sp.knots_.resize(n);
  sp.values_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    sp.knots_[i] = data[i].first;
    sp.values_[i] = data[i].second;
  }

  std::vector<double> secant(n - 1);
  double min_secant = std::numeric_limits<double>::max();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    secant[i] = (sp.values_[i + 1] - sp.values_[i]) / (sp.knots_[i + 1] - sp.knots_[i]);
    min_secant = std::min(min_secant, secant[i]);
  }

  // Fritsch-Carlson: average secants, cap at 3x the smaller neighbor so the
  // cubic is nondecreasing on every segment, then floor at a small positive
  // slope for strict monotonicity.
  const double slope_floor = 1e-8 * min_secant;
  sp.slopes_.resize(n);
  sp.slopes_.front() = secant.front();
  sp.slopes_.back() = secant.back();
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double cap = 3.0 * std::min(secant[i - 1], secant[i]);
    sp.slopes_[i] = std::min(0.5 * (secant[i - 1] + secant[i]), cap);
  }
  for (double &d : sp.slopes_)
    d = std::max(d, slope_floor);

  sp.extrapolation_slope_ = std::max(sp.slopes_.back(), extrapolation_floor);

  // Exact cumulative integrals of the piecewise cubic at the knots.
  sp.integrals_.resize(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double ds = sp.knots_[i + 1] - sp.knots_[i];
    const double seg = ds * (0.5 * (sp.values_[i] + sp.values_[i + 1]) +
                             ds * (sp.slopes_[i] - sp.slopes_[i + 1]) / 12.0);
    sp.integrals_[i + 1] = sp.integrals_[i] + seg;
  }
  return sp;
}

int MonotoneSpline::segment(double s) const {
  const auto it = std::upper_bound(knots_.begin(), knots_.end(), s);
  const int i = static_cast<int>(it - knots_.begin()) - 1;
  return std::clamp(i, 0, static_cast<int>(knots_.size()) - 2);
}

double MonotoneSpline::eval(double s) const {
  if (s >= knots_.back())
    return values_.back() + extrapolation_slope_ * (s - knots_.back());
  const int i = segment(s);
  const double ds = knots_[i + 1] - knots_[i];
  const double t = (s - knots_[i]) / ds;
  const double h00 = (2.0 * t - 3.0) * t * t + 1.0;
  const double h10 = ((t - 2.0) * t + 1.0) * t;
  const double h01 = (3.0 - 2.0 * t) * t * t;
  const double h11 = (t - 1.0) * t * t;
  return values_[i] * h00 + ds * slopes_[i] * h10 + values_[i + 1] * h01 +
         ds * slopes_[i + 1] * h11;
}

double MonotoneSpline::derivative(double s) const {
  if (s >= knots_.back())
    return extrapolation_slope_;
  const int i = segment(s);
  const double ds = knots_[i + 1] - knots_[i];
  const double t = (s - knots_[i]) / ds;
  const double dh00 = 6.0 * t * (t - 1.0);
  const double dh10 = (3.0 * t - 4.0) * t + 1.0;
  const double dh01 = 6.0 * t * (1.0 - t);
  const double dh11 = (3.0 * t - 2.0) * t;
  return values_[i] * dh00 / ds + slopes_[i] * dh10 + values_[i + 1] * dh01 / ds +
         slopes_[i + 1] * dh11;
}

double MonotoneSpline::integral(double s) const {
  if (s >= knots_.back()) {
    const double ds = s - knots_.back();
    return integrals_.back() + values_.back() * ds + 0.5 * extrapolation_slope_ * ds * ds;
  }
  const int i = segment(s);
  const double ds = knots_[i + 1] - knots_[i];
  const double t = (s - knots_[i]) / ds;
  // Antiderivatives of the Hermite basis on [0, t].
  const double i00 = ((0.5 * t - 1.0) * t * t + 1.0) * t;
  const double i10 = ((0.25 * t - 2.0 / 3.0) * t + 0.5) * t * t;
  const double i01 = (1.0 - 0.5 * t) * t * t * t;
  const double i11 = (0.25 * t - 1.0 / 3.0) * t * t * t;
  return integrals_[i] + ds * (values_[i] * i00 + ds * slopes_[i] * i10 +
                               values_[i + 1] * i01 + ds * slopes_[i + 1] * i11);
}

double MonotoneSpline::chord(double s) const {
  if (s <= 0.0)
    return slopes_.front();
  return eval(s) / s;
}

// ---------------------------------------------------------------------------
// MaterialLaw
// ---------------------------------------------------------------------------

MaterialLaw MaterialLaw::linear(double nu) {
  if (!(nu > 0.0))
    throw ConfigError("linear law: reluctivity must be positive");
  MaterialLaw m;
  m.law_ = LinearLaw{nu};
  m.gamma_ = nu;
  m.L_ = nu;
  return m;
}

MaterialLaw MaterialLaw::permanent_magnet(double nu, Flux2 remanence) {
  if (!(nu > 0.0))
    throw ConfigError("permanent-magnet law: reluctivity must be positive");
  MaterialLaw m;
  m.law_ = PermanentMagnetLaw{nu, remanence};
  m.gamma_ = nu;
  m.L_ = nu;
  return m;
}

MaterialLaw MaterialLaw::isotropic_spline(MonotoneSpline spline, double s_max) {
  MaterialLaw m;
  m.law_ = IsotropicSplineLaw{std::move(spline)};
  const auto [g, L] = estimate_bounds(m, s_max);
  m.gamma_ = g;
  m.L_ = L;
  return m;
}

bool MaterialLaw::is_isotropic() const {
  return !std::holds_alternative<PermanentMagnetLaw>(law_);
}

double MaterialLaw::energy_density(const Flux2 &b) const {
  if (const auto *lin = std::get_if<LinearLaw>(&law_))
    return 0.5 * lin->nu * (b.bx * b.bx + b.by * b.by);
  if (const auto *pm = std::get_if<PermanentMagnetLaw>(&law_)) {
    const double dx = b.bx - pm->remanence.bx;
    const double dy = b.by - pm->remanence.by;
    return 0.5 * pm->nu * (dx * dx + dy * dy);
  }
  const auto &sp = std::get<IsotropicSplineLaw>(law_).spline;
  return sp.integral(std::hypot(b.bx, b.by));
}

Field2 MaterialLaw::field_intensity(const Flux2 &b) const {
  if (const auto *lin = std::get_if<LinearLaw>(&law_))
    return {lin->nu * b.bx, lin->nu * b.by};
  if (const auto *pm = std::get_if<PermanentMagnetLaw>(&law_))
    return {pm->nu * (b.bx - pm->remanence.bx), pm->nu * (b.by - pm->remanence.by)};
  const auto &sp = std::get<IsotropicSplineLaw>(law_).spline;
  const double nu_ch = sp.chord(std::hypot(b.bx, b.by));
  return {nu_ch * b.bx, nu_ch * b.by};
}

SymTensor2 MaterialLaw::differential_reluctivity(const Flux2 &b) const {
  if (const auto *lin = std::get_if<LinearLaw>(&law_))
    return {lin->nu, 0.0, lin->nu};
  if (const auto *pm = std::get_if<PermanentMagnetLaw>(&law_))
    return {pm->nu, 0.0, pm->nu};
  const auto &sp = std::get<IsotropicSplineLaw>(law_).spline;
  const double s = std::hypot(b.bx, b.by);
  if (s == 0.0) {
    const double d0 = sp.derivative(0.0);
    return {d0, 0.0, d0};
  }
  const double nu_ch = sp.chord(s);
  const double diff = (sp.derivative(s) - nu_ch) / (s * s);
  return {nu_ch + diff * b.bx * b.bx, diff * b.bx * b.by, nu_ch + diff * b.by * b.by};
}

double MaterialLaw::chord_reluctivity(double s) const {
  if (const auto *lin = std::get_if<LinearLaw>(&law_)) {
    (void)s;
    return lin->nu;
  }
  if (std::holds_alternative<PermanentMagnetLaw>(law_))
    throw UnsupportedMethodError(
        "chord reluctivity is undefined for the anisotropic permanent-magnet law");
  return std::get<IsotropicSplineLaw>(law_).spline.chord(s);
}

std::pair<double, double> estimate_bounds(const MaterialLaw &law, double s_max) {
  if (!(s_max > 0.0))
    throw ConfigError("estimate_bounds: s_max must be positive");
  if (const auto *lin = law.as_linear())
    return {lin->nu, lin->nu};
  if (const auto *pm = law.as_magnet())
    return {pm->nu, pm->nu};

  const MonotoneSpline &sp = law.as_spline()->spline;
  const int samples = 100000;
  double lo = std::min(sp.derivative(0.0), sp.extrapolation_slope());
  double hi = std::max(sp.derivative(0.0), sp.extrapolation_slope());
  for (int i = 1; i <= samples; ++i) {
    const double s = s_max * static_cast<double>(i) / samples;
    const double d = sp.derivative(s);
    const double c = sp.chord(s);
    lo = std::min(lo, std::min(d, c));
    hi = std::max(hi, std::max(d, c));
  }
  if (!(lo > 0.0))
    throw NumericalError("material bound certification failed: curvature not positive");
  return {0.99 * lo, 1.01 * hi};
}

std::vector<std::pair<double, double>> load_bh_csv(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot open B-H curve file: " + path);
  std::vector<std::pair<double, double>> data;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    for (char &c : line)
      if (c == ',' || c == ';' || c == '\t')
        c = ' ';
    std::istringstream ss(line);
    double s = 0.0, h = 0.0;
    if (!(ss >> s >> h)) {
      std::string word;
      std::istringstream probe(line);
      const bool blank = !(probe >> word) || word[0] == '#';
      if (blank || first) {  // comment, empty line, or a header row
        first = false;
        continue;
      }
      throw ConfigError("malformed B-H curve line: '" + line + "'");
    }
    first = false;
    data.emplace_back(s, h);
  }
  if (data.size() < 2)
    throw ConfigError("B-H curve file has fewer than two samples: " + path);
  return data;
}

std::vector<std::pair<double, double>> bundled_bh_curve() {
  // Soft saturation: initial relative permeability 5000, knee parameter 3 T,
  // so the effective permeability falls smoothly across the working range.
  const double nu_init = nu0 / 5000.0;
  const double dnu = nu0 - nu_init;
  const double b0 = 3.0;
  const int knots = 50;
  std::vector<std::pair<double, double>> data;
  data.reserve(knots);
  for (int i = 0; i < knots; ++i) {
    const double s = 3.0 * static_cast<double>(i) / (knots - 1);
    const double h = (nu0 - dnu * std::exp(-s * s / (b0 * b0))) * s;
    data.emplace_back(s, h);
  }
  return data;
}

} // namespace magsolve
