#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "fraclab/core.hpp"

namespace fraclab {

enum class FracLapMethod {
    /// Excludes B_eps(x), integrates both one-sided tails, adds a finite-difference inner correction.
    pv_split,
    /// Integrates the symmetric second difference u(x+y) + u(x-y) - 2u(x) directly.
    second_difference,
};

/// (-Delta)^s u(x) on the line, normalized by C(1, s) so that its symbol is |xi|^{2s}.
///
/// Tails beyond the outer radius are either exact (declared support, periodic lattice sum),
/// estimated to leading order (declared power growth) or certified by the sup bound.
/// Throws ValidationError when summability cannot be established for the declared class,
/// ToleranceError when the panel budget runs out.
Estimate fraclap(const FunctionHandle& u, double x, FracOrder s, const QuadratureSpec& q = {},
                 FracLapMethod method = FracLapMethod::second_difference);

std::vector<Estimate> fraclap_batch(const FunctionHandle& u, std::span<const double> xs, FracOrder s,
                                    const QuadratureSpec& q = {},
                                    FracLapMethod method = FracLapMethod::second_difference, unsigned threads = 1);

/// Regional operator: the principal-value integral restricted to omega.  A full_line domain
/// reduces to fraclap.
Estimate regional_fraclap(const FunctionHandle& u, double x, FracOrder s, const Domain& omega,
                          const QuadratureSpec& q = {});

/// (-Delta)^{1/2} u(x) as -d/dy of the Poisson extension at y = 0, extrapolated from the
/// difference quotients (u(x) - U(x, y)) / y at the given decreasing heights.
Estimate extension_halflap(const FunctionHandle& u, double x, const QuadratureSpec& q = {},
                           std::span<const double> heights = {});

/// Raw integral of (u(x+2y) + u(x-2y) - 4u(x+y) - 4u(x-y) + 6u(x)) / |y|^3 over the line.
/// Its ratio to -u''(x) is the universal constant 8 ln 2.
Estimate nonlocal_classical_lap(const FunctionHandle& u, double x, const QuadratureSpec& q = {});

struct DecaySample
{
    double radius = 0.0;
    /// radius^{1+2s} * |(-Delta)^s u(radius)|
    double product = 0.0;
    double value = 0.0;
};

/// Far-field profile of (-Delta)^s u for a Schwartz-class u at increasing radii.
std::vector<DecaySample> decay_profile(const FunctionHandle& u, FracOrder s, std::span<const double> radii,
                                       const QuadratureSpec& q = {});

using Mat2 = std::array<std::array<double, 2>, 2>;

/// Matrix field M(z, y) defining the master kernel 1/|M(., y) y|^{n+2s}.
struct MasterKernel
{
    enum class Form {
        /// Kernel evaluated at M(x - y, y); requires M(x - y, y) = M(x, -y).
        divergence,
        /// Kernel evaluated at M(x, y); requires M(x, y) = M(x, -y).
        nondivergence,
    };

    int dimension = 2;
    Form form = Form::nondivergence;
    std::function<Mat2(Point2 base, Point2 y)> matrix;
    /// Declared bounds on the singular values of M.
    double min_eig = 1.0;
    double max_eig = 1.0;
    /// Angular trapezoid nodes for n = 2.
    int angular_nodes = 64;

    static MasterKernel constant(Mat2 m, int dimension = 2);

    /// Checks the declared symmetry identity at sampled points (1e-12) and the eigenvalue bounds.
    void validate() const;
};

/// (1 - s) * integral of (u(x) - u(x - y)) / |M y|^{n+2s} dy, with M evaluated per the form.
/// For n = 1 only the first coordinate of points and the [0][0] entry of M are used.
Estimate master_operator(const FunctionHandle2& u, Point2 x, FracOrder s, const MasterKernel& k,
                         const QuadratureSpec& q = {});

struct CoefficientMatrix
{
    int dimension = 2;
    Mat2 a{};
    /// Drift b_j = sum_i d_i a_ij (divergence form only; zero otherwise).
    std::array<double, 2> b{};

    /// -sum a_ij d_ij u - sum b_j d_j u for the given gradient and Hessian.
    double apply(std::array<double, 2> gradient, Mat2 hessian) const;
};

/// Coefficients of the classical operator obtained as s -> 1:
/// a_ij(x) = 1/4 * integral over the unit sphere of w_i w_j / |M(x, 0) w|^{n+2}.
CoefficientMatrix classical_limit_coefficients(const MasterKernel& k, Point2 x);

} // namespace fraclab
