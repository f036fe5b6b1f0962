#ifndef MAGSOLVE_MATERIAL_HPP
#define MAGSOLVE_MATERIAL_HPP

#include <array>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace magsolve {

/// Magnetic flux density components (T).
struct Flux2 {
  double bx = 0.0;
  double by = 0.0;
};

/// Magnetic field intensity components (A/m).
struct Field2 {
  double hx = 0.0;
  double hy = 0.0;
};

/// Symmetric 2x2 tensor, stored as (xx, xy, yy).
struct SymTensor2 {
  double xx = 0.0, xy = 0.0, yy = 0.0;

  std::array<double, 2> eigenvalues() const;
  Flux2 apply(const Flux2 &b) const {
    return {xx * b.bx + xy * b.by, xy * b.bx + yy * b.by};
  }
};

constexpr double mu0 = 4.0e-7 * 3.14159265358979323846;  ///< vacuum permeability (H/m)
constexpr double nu0 = 1.0 / mu0;                        ///< vacuum reluctivity (m/H)

/// Strictly increasing C1 interpolant of scalar B-H samples: monotone cubic
/// Hermite inside the data range, linear beyond the last knot. The stored
/// curve maps s = |b| (T) to h = |h| (A/m) with h(0) = 0.
class MonotoneSpline {
public:
  /// Fritsch-Carlson slope limiting on strictly increasing samples starting
  /// at (0, 0); limited slopes are floored at a small positive fraction of
  /// the smallest secant so the interpolant is strictly increasing. Beyond
  /// the last knot the curve continues linearly with slope
  /// max(last limited slope, extrapolation_floor).
  static MonotoneSpline build(const std::vector<std::pair<double, double>> &data,
                              double extrapolation_floor = nu0);

  double eval(double s) const;        ///< h(s)
  double derivative(double s) const;  ///< h'(s)
  double integral(double s) const;    ///< integral of h from 0 to s, exact per segment
  double chord(double s) const;       ///< h(s)/s with the limit h'(0) at s = 0

  double s_max() const { return knots_.back(); }
  double extrapolation_slope() const { return extrapolation_slope_; }
  std::size_t num_knots() const { return knots_.size(); }
  double knot(std::size_t i) const { return knots_[i]; }
  double value(std::size_t i) const { return values_[i]; }

private:
  std::vector<double> knots_;
  std::vector<double> values_;
  std::vector<double> slopes_;
  std::vector<double> integrals_;  ///< cumulative integral at each knot
  double extrapolation_slope_ = 0.0;

  int segment(double s) const;
};

struct LinearLaw {
  double nu = nu0;  ///< scalar reluctivity (m/H)
};

struct PermanentMagnetLaw {
  double nu = nu0;
  Flux2 remanence;  ///< zero-field flux b_r (T)
};

struct IsotropicSplineLaw {
  MonotoneSpline spline;
};

/// Per-region magnetic energy density w(b) together with certified two-sided
/// bounds gamma_mat <= eig(d2w/db2) <= L_mat. Immutable after construction.
class MaterialLaw {
public:
  static MaterialLaw linear(double nu);
  static MaterialLaw permanent_magnet(double nu, Flux2 remanence);
  /// Bounds are certified by dense sampling over (0, s_max]; see estimate_bounds.
  static MaterialLaw isotropic_spline(MonotoneSpline spline, double s_max = 3.0);

  double energy_density(const Flux2 &b) const;              ///< w(b), J/m^3
  Field2 field_intensity(const Flux2 &b) const;             ///< h = dw/db
  SymTensor2 differential_reluctivity(const Flux2 &b) const;///< d2w/db2
  /// Secant slope h(s)/s of the scalar curve; only defined for isotropic laws.
  /// Throws UnsupportedMethodError for the permanent-magnet law.
  double chord_reluctivity(double s) const;

  bool is_isotropic() const;
  double gamma_bound() const { return gamma_; }
  double L_bound() const { return L_; }

  const LinearLaw *as_linear() const { return std::get_if<LinearLaw>(&law_); }
  const IsotropicSplineLaw *as_spline() const { return std::get_if<IsotropicSplineLaw>(&law_); }
  const PermanentMagnetLaw *as_magnet() const { return std::get_if<PermanentMagnetLaw>(&law_); }

private:
  std::variant<LinearLaw, PermanentMagnetLaw, IsotropicSplineLaw> law_;
  double gamma_ = 0.0;
  double L_ = 0.0;
};

/// Min/max of {h'(s), h(s)/s} over a dense sample of (0, s_max] plus the
/// extrapolation slope, widened by a 1% margin. Linear and permanent-magnet
/// laws return (nu, nu) exactly. Throws NumericalError if the lower bound
/// is not positive.
std::pair<double, double> estimate_bounds(const MaterialLaw &law, double s_max);

/// Parse a two-column CSV of |b| (T) and |h| (A/m); header line optional.
std::vector<std::pair<double, double>> load_bh_csv(const std::string &path);

/// The bundled saturation curve h(s) = (nu0 - dnu exp(-s^2/b0^2)) s with
/// dnu = nu0 - nu0/5000 and b0 = 3 T, sampled at 50 knots over [0, 3].
std::vector<std::pair<double, double>> bundled_bh_curve();

} // namespace magsolve

#endif
