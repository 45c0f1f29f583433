#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "fraclab/core.hpp"

namespace fraclab {

/// Counter-based stream: splitmix64 over (seed, stream index).
class CounterRng
{
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t next() noexcept;
    /// Uniform on [0, 1).
    double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    static std::uint64_t mix(std::uint64_t z) noexcept;

private:
    std::uint64_t state_;
};

/// Walker's alias method over a finite categorical distribution.
class AliasTable
{
public:
    AliasTable() = default;
    explicit AliasTable(const std::vector<double>& weights);

    std::size_t sample(CounterRng& rng) const noexcept;
    std::size_t size() const noexcept { return prob_.size(); }

private:
    std::vector<double> prob_;
    std::vector<std::uint32_t> alias_;
};

enum class WalkKind { classical, long_jump };

struct WalkConfig
{
    WalkKind kind = WalkKind::classical;
    double h = 0.01;
    /// Jump exponent (long-jump walks only).
    double s = 0.5;
    double horizon = 1.0;
    std::size_t ensemble = 1000;
    std::uint64_t seed = 1;
    /// Censoring interval (censored walk only).
    std::optional<Interval> domain;
    /// Model times at which positions are recorded; the horizon is always recorded last.
    std::vector<double> checkpoints;
    double start = 0.0;
    unsigned threads = 1;

    /// h^2 (classical) or h^{2s} (long jump).
    double time_step() const;
    std::size_t steps_until(double t) const;
    void validate() const;
};

struct EnsembleResult
{
    /// Model times (steps * tau) of the recorded snapshots; the last one is the horizon.
    std::vector<double> times;
    std::vector<std::size_t> steps;
    /// x[k][w]: position of walker w at snapshot k.
    std::vector<std::vector<double>> x;
    /// Finger coordinate (comb walk only).
    std::vector<std::vector<double>> y;
    std::vector<std::uint64_t> seeds;
    /// Starting point; displacements are measured from it.
    double origin = 0.0;

    const std::vector<double>& final_positions() const { return x.back(); }
    double elapsed() const { return times.back(); }
    /// Ensemble mean squared displacement at every snapshot, summed in walker order.
    std::vector<double> msd_x() const;
    std::vector<double> msd_y() const;
};

/// Nearest-neighbour walk on hZ with tau = h^2: MSD equals t exactly.
EnsembleResult run_classical_walk(const WalkConfig& cfg);

/// Censored long-jump walk on the sites of omega cap hZ.
class CensoredWalkModel
{
public:
    CensoredWalkModel(double h, FracOrder s, Interval omega);

    std::size_t sites() const noexcept { return sites_.size(); }
    double site(std::size_t i) const { return sites_.at(i); }
    /// Index of the site nearest to x.
    std::size_t nearest(double x) const;
    /// Full-lattice normalizer sum_{k != 0} |k|^{-1-2s} = 2 zeta(1 + 2s).
    double normalizer() const noexcept { return normalizer_; }
    double probability(std::size_t from, std::size_t to) const;
    double stay(std::size_t i) const { return stay_.at(i); }
    /// Time factor c with (1/tau) (P - I) -> -c (-Delta)^s_omega.
    double time_scale() const noexcept;

    std::size_t step(std::size_t from, CounterRng& rng) const noexcept;

private:
    double h_;
    FracOrder s_;
    double normalizer_;
    std::vector<double> sites_;
    std::vector<double> stay_;
    std::vector<AliasTable> rows_;
};

EnsembleResult run_censored_walk(const WalkConfig& cfg);

struct LongJumpLaw
{
    enum class Kind {
        /// Alias table over 1 <= |k| <= k_max, renormalized.
        lattice_power_law,
        /// Lattice law for |k| <= k_max, continuous Pareto tail (density ~ r^{-1-2s}) beyond.
        continuum_pareto,
    };
    Kind kind = Kind::continuum_pareto;
    std::size_t k_max = 1 << 16;
    /// Largest radius the caller intends to study; the lattice law rejects k_max * h below it.
    double tail_radius = 0.0;
};

EnsembleResult run_free_longjump_walk(const WalkConfig& cfg, const LongJumpLaw& law = {});

/// Probability mass of |k| > k_max under the untruncated lattice law.
double lattice_tail_mass(FracOrder s, std::size_t k_max);

struct CombConfig
{
    double eps = 1.0;
    /// Relative rates of horizontal (backbone) and vertical moves.
    double d1 = 1.0;
    double d2 = 1.0;
    std::size_t steps = 10000;
    std::size_t ensemble = 1000;
    std::uint64_t seed = 1;
    /// Step counts at which positions are recorded; the final step is always recorded.
    std::vector<std::size_t> checkpoints;
    unsigned threads = 1;
};

/// 2D walk on the comb: on y = 0 a move is horizontal with probability d1 / (d1 + d2),
/// otherwise every move is vertical.  Time is measured in steps.
EnsembleResult run_comb_walk(const CombConfig& cfg);

/// Fraction of walkers on the backbone at every snapshot.
std::vector<double> backbone_fraction(const EnsembleResult& res);

struct HistogramSpec
{
    double lo = -1.0;
    double hi = 1.0;
    std::size_t bins = 100;
};

/// Normalized histogram of the final positions as a grid function on the bin centers.
GridFunction empirical_density(const EnsembleResult& res, const HistogramSpec& bins);
GridFunction empirical_density(const std::vector<double>& samples, const HistogramSpec& bins);

} // namespace fraclab
