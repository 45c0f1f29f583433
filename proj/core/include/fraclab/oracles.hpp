#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fraclab/core.hpp"
#include "fraclab/errors.hpp"

namespace fraclab {

struct OracleClaim
{
    enum class Kind { sharmonic_on, constant_image_on, explicit_image };

    Kind kind = Kind::sharmonic_on;
    /// Open interval where the claim holds (infinite ends allowed).
    Interval on;
    /// explicit_image only.
    std::function<double(double)> image;
    /// constant_image_on: the value of the constant under the normalization of fraclap.
    std::optional<double> expected_constant;
};

struct OracleEntry
{
    std::string name;
    FunctionHandle function;
    /// Order the claim refers to.
    double s = 0.5;
    /// False for entries whose claim holds only at one s.
    bool parametric = false;
    OracleClaim claim;
    std::string description;
    /// Quadrature settings the claim is verified with by default.
    QuadratureSpec quadrature;
};

/// Catalog names: u_s, u_half, u_minus_half, halfspace_power, arctan_layer, kelvin_w, kelvin_wstar,
/// U_s, gaussian, const.  Entries tied to s = 1/2 reject any other order.
OracleEntry oracle(std::string_view name, std::optional<FracOrder> s = std::nullopt);

std::vector<std::string> oracle_names();

/// Evaluation points suggested for verification, interior to the claim interval.
std::vector<double> default_points(const OracleEntry& entry);

struct OracleReport
{
    std::string name;
    double s = 0.5;
    std::vector<double> points;
    std::vector<Estimate> values;
    /// Max |fraclap| (sharmonic), max |value - mean| (constant), max |fraclap - image| (explicit).
    double max_abs = 0.0;
    /// max_abs divided by the characteristic magnitude of the claim.
    double residual = 0.0;
    /// Mean of the values for constant-image claims.
    std::optional<double> measured_constant;
};

/// Uses entry.quadrature unless q is given.
OracleReport verify_oracle(const OracleEntry& entry, std::span<const double> points,
                           const std::optional<QuadratureSpec>& q = std::nullopt, unsigned threads = 1);

struct LayerDecayReport
{
    std::vector<double> t;
    /// t (1 - u(t)) for u = 2/pi arctan.
    std::vector<double> products;
    double limit = 0.0;
    /// |product(100) - 2/pi| / (2/pi).
    double relative_gap_at_100 = 0.0;
    /// Relative deviation of product(10) from (2/pi)(1 - 1/(3 t^2)).
    double correction_gap_at_10 = 0.0;
    /// Minimum second difference of log(1 - u) on a uniform t grid; positive means convex.
    double min_log_curvature = 0.0;
};

LayerDecayReport layer_decay_check();

/// Max over (0.05, 0.95) of |U_s'(x) - s (w_s(x) - w*_s(x))| with U_s' in closed form.
double primitive_identity_check(FracOrder s);

} // namespace fraclab
