#include "fraclab/walkers.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "fraclab/errors.hpp"
#include "fraclab/parallel.hpp"

namespace fraclab {

std::uint64_t CounterRng::mix(std::uint64_t z) noexcept
{
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : state_(mix(seed + 0x9e3779b97f4a7c15ULL) ^ mix(stream * 0xd1b54a32d192ed03ULL + 1))
{
}

std::uint64_t CounterRng::next() noexcept
{
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix(state_);
}

AliasTable::AliasTable(const std::vector<double>& weights)
{
    const std::size_t n = weights.size();
    if (n == 0 || n > (std::size_t{1} << 31)) {
        throw ValidationError("alias table needs between 1 and 2^31 outcomes");
    }
    double total = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0) || !std::isfinite(w)) {
            throw ValidationError("alias weights must be finite and nonnegative");
        }
        total += w;
    }
    if (!(total > 0.0)) {
        throw ValidationError("alias weights sum to zero");
    }
    prob_.resize(n);
    alias_.resize(n);
    std::vector<double> scaled(n);
    std::vector<std::uint32_t> small;
    std::vector<std::uint32_t> large;
    for (std::size_t i = 0; i < n; ++i) {
        scaled[i] = weights[i] * static_cast<double>(n) / total;
        (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
    }
    while (!small.empty() && !large.empty()) {
        const std::uint32_t l = small.back();
        small.pop_back();
        const std::uint32_t g = large.back();
        prob_[l] = scaled[l];
        alias_[l] = g;
        scaled[g] = (scaled[g] + scaled[l]) - 1.0;
        if (scaled[g] < 1.0) {
            large.pop_back();
            small.push_back(g);
        }
    }
    for (std::uint32_t i : large) {
        prob_[i] = 1.0;
        alias_[i] = i;
    }
    for (std::uint32_t i : small) {
        prob_[i] = 1.0;
        alias_[i] = i;
    }
}

std::size_t AliasTable::sample(CounterRng& rng) const noexcept
{
    const double u = rng.uniform() * static_cast<double>(prob_.size());
    const auto i = std::min(static_cast<std::size_t>(u), prob_.size() - 1);
    return (u - static_cast<double>(i)) < prob_[i] ? i : alias_[i];
}

double WalkConfig::time_step() const
{
    return kind == WalkKind::classical ? h * h : std::pow(h, 2.0 * s);
}

std::size_t WalkConfig::steps_until(double t) const
{
    return static_cast<std::size_t>(std::llround(t / time_step()));
}

void WalkConfig::validate() const
{
    if (!(h > 0.0) || !std::isfinite(h)) {
        throw ValidationError("lattice spacing must be positive");
    }
    if (kind == WalkKind::long_jump) {
        FracOrder check(s);
        (void)check;
    }
    if (!(horizon >= 0.0) || ensemble == 0) {
        throw ValidationError("horizon must be nonnegative and the ensemble nonempty");
    }
    for (double t : checkpoints) {
        if (!(t >= 0.0) || t > horizon) {
            throw ValidationError("checkpoints must lie in [0, horizon]");
        }
    }
}

namespace {

std::vector<std::size_t> snapshot_steps(std::vector<std::size_t> steps, std::size_t last)
{
    steps.push_back(last);
    std::sort(steps.begin(), steps.end());
    steps.erase(std::unique(steps.begin(), steps.end()), steps.end());
    return steps;
}

std::vector<std::size_t> snapshot_steps(const WalkConfig& cfg)
{
    std::vector<std::size_t> steps;
    for (double t : cfg.checkpoints) {
        steps.push_back(cfg.steps_until(t));
    }
    return snapshot_steps(std::move(steps), cfg.steps_until(cfg.horizon));
}

EnsembleResult prepare(const std::vector<std::size_t>& steps, double tau, std::size_t ensemble, std::uint64_t seed,
                       double origin, bool two_d)
{
    EnsembleResult r;
    r.steps = steps;
    for (std::size_t n : steps) {
        r.times.push_back(static_cast<double>(n) * tau);
    }
    r.x.assign(steps.size(), std::vector<double>(ensemble));
    if (two_d) {
        r.y.assign(steps.size(), std::vector<double>(ensemble));
    }
    r.seeds.resize(ensemble);
    for (std::size_t w = 0; w < ensemble; ++w) {
        r.seeds[w] = CounterRng::mix(seed ^ CounterRng::mix(w));
    }
    r.origin = origin;
    return r;
}

/// Runs advance(rng, state) between snapshots for every walker; record(k, w, state) stores it.
template <typename State, typename Advance, typename Record>
void drive(const std::vector<std::size_t>& steps, std::size_t ensemble, std::uint64_t seed, unsigned threads,
           State initial, Advance advance, Record record)
{
    parallel_for(ensemble, threads, [&](std::size_t b, std::size_t e, unsigned) {
        for (std::size_t w = b; w < e; ++w) {
            CounterRng rng(seed, w);
            State state = initial;
            std::size_t done = 0;
            for (std::size_t k = 0; k < steps.size(); ++k) {
                advance(rng, state, steps[k] - done);
                done = steps[k];
                record(k, w, state);
            }
        }
    });
}

double mean_square(const std::vector<double>& v, double origin)
{
    double sum = 0.0;
    for (double x : v) {
        sum += (x - origin) * (x - origin);
    }
    return sum / static_cast<double>(v.size());
}

} // namespace

std::vector<double> EnsembleResult::msd_x() const
{
    std::vector<double> out;
    for (const auto& snap : x) {
        out.push_back(mean_square(snap, origin));
    }
    return out;
}

std::vector<double> EnsembleResult::msd_y() const
{
    std::vector<double> out;
    for (const auto& snap : y) {
        out.push_back(mean_square(snap, 0.0));
    }
    return out;
}

EnsembleResult run_classical_walk(const WalkConfig& cfg)
{
    cfg.validate();
    if (cfg.kind != WalkKind::classical) {
        throw ValidationError("classical walk needs the classical kind (tau = h^2)");
    }
    const auto steps = snapshot_steps(cfg);
    EnsembleResult r = prepare(steps, cfg.time_step(), cfg.ensemble, cfg.seed, cfg.start, false);
    drive(
        steps, cfg.ensemble, cfg.seed, cfg.threads, std::int64_t{0},
        [](CounterRng& rng, std::int64_t& k, std::size_t n) {
            while (n > 0) {
                const std::size_t batch = std::min<std::size_t>(n, 64);
                const std::uint64_t bits = rng.next();
                const int ones = std::popcount(batch == 64 ? bits : bits & ((std::uint64_t{1} << batch) - 1));
                k += 2 * ones - static_cast<std::int64_t>(batch);
                n -= batch;
            }
        },
        [&](std::size_t snap, std::size_t w, std::int64_t k) {
            r.x[snap][w] = cfg.start + static_cast<double>(k) * cfg.h;
        });
    return r;
}

CensoredWalkModel::CensoredWalkModel(double h, FracOrder s, Interval omega)
    : h_(h), s_(s), normalizer_(2.0 * std::riemann_zeta(1.0 + 2.0 * s.value()))
{
    if (!(h > 0.0) || !(omega.hi > omega.lo)) {
        throw ValidationError("censored walk needs h > 0 and a nonempty interval");
    }
    const auto first = static_cast<std::int64_t>(std::floor(omega.lo / h)) + 1;
    const auto last = static_cast<std::int64_t>(std::ceil(omega.hi / h)) - 1;
    for (std::int64_t k = first; k <= last; ++k) {
        sites_.push_back(static_cast<double>(k) * h);
    }
    if (sites_.size() < 64) {
        throw ValidationError("interval too coarse: fewer than 64 lattice sites");
    }
    const std::size_t n = sites_.size();
    stay_.resize(n);
    rows_.reserve(n);
    std::vector<double> row(n);
    for (std::size_t i = 0; i < n; ++i) {
        double out = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            row[j] = j == i ? 0.0 : probability(i, j);
            out += row[j];
        }
        stay_[i] = 1.0 - out;
        row[i] = stay_[i];
        rows_.emplace_back(row);
    }
}

std::size_t CensoredWalkModel::nearest(double x) const
{
    const double idx = std::round((x - sites_.front()) / h_);
    return static_cast<std::size_t>(std::clamp(idx, 0.0, static_cast<double>(sites_.size() - 1)));
}

double CensoredWalkModel::probability(std::size_t from, std::size_t to) const
{
    if (from >= sites_.size() || to >= sites_.size()) {
        throw ValidationError("site index out of range");
    }
    if (from == to) {
        return stay_.empty() ? 0.0 : stay_[from];
    }
    const double k = std::abs(static_cast<double>(from) - static_cast<double>(to));
    return std::pow(k, -1.0 - 2.0 * s_.value()) / normalizer_;
}

double CensoredWalkModel::time_scale() const noexcept
{
    return 1.0 / (normalizer_ * normalization_constant(1, s_));
}

std::size_t CensoredWalkModel::step(std::size_t from, CounterRng& rng) const noexcept
{
    return rows_[from].sample(rng);
}

EnsembleResult run_censored_walk(const WalkConfig& cfg)
{
    cfg.validate();
    if (cfg.kind != WalkKind::long_jump || !cfg.domain) {
        throw ValidationError("censored walk needs the long-jump kind and a domain");
    }
    if (!cfg.domain->contains(cfg.start)) {
        throw ValidationError("starting point outside the domain");
    }
    const CensoredWalkModel model(cfg.h, FracOrder(cfg.s), *cfg.domain);
    const auto steps = snapshot_steps(cfg);
    EnsembleResult r = prepare(steps, cfg.time_step(), cfg.ensemble, cfg.seed, cfg.start, false);
    drive(
        steps, cfg.ensemble, cfg.seed, cfg.threads, model.nearest(cfg.start),
        [&](CounterRng& rng, std::size_t& site, std::size_t n) {
            for (std::size_t i = 0; i < n; ++i) {
                site = model.step(site, rng);
            }
        },
        [&](std::size_t snap, std::size_t w, std::size_t site) { r.x[snap][w] = model.site(site); });
    return r;
}

double lattice_tail_mass(FracOrder s, std::size_t k_max)
{
    const double p = 1.0 + 2.0 * s.value();
    // Midpoint rule for the tail sum: sum_{k > K} k^{-p} ~ (K + 1/2)^{1-p} / (p - 1).
    return std::pow(static_cast<double>(k_max) + 0.5, 1.0 - p) / (p - 1.0) / std::riemann_zeta(p);
}

EnsembleResult run_free_longjump_walk(const WalkConfig& cfg, const LongJumpLaw& law)
{
    cfg.validate();
    if (cfg.kind != WalkKind::long_jump) {
        throw ValidationError("free long-jump walk needs the long-jump kind");
    }
    if (law.k_max < 1 || law.k_max > (std::size_t{1} << 24)) {
        throw ValidationError("k_max must lie in [1, 2^24]");
    }
    const bool pareto = law.kind == LongJumpLaw::Kind::continuum_pareto;
    if (!pareto && law.tail_radius > static_cast<double>(law.k_max) * cfg.h) {
        throw ValidationError("k_max too small for the requested tail radius");
    }
    const double p = 1.0 + 2.0 * cfg.s;
    std::vector<double> weights;
    weights.reserve(law.k_max + 1);
    for (std::size_t k = 1; k <= law.k_max; ++k) {
        weights.push_back(std::pow(static_cast<double>(k), -p));
    }
    if (pareto) {
        weights.push_back(std::pow(static_cast<double>(law.k_max) + 0.5, 1.0 - p) / (p - 1.0));
    }
    const AliasTable table(weights);
    const double r0 = static_cast<double>(law.k_max) + 0.5;
    const double inv_alpha = 1.0 / (2.0 * cfg.s);

    const auto steps = snapshot_steps(cfg);
    EnsembleResult r = prepare(steps, cfg.time_step(), cfg.ensemble, cfg.seed, cfg.start, false);
    drive(
        steps, cfg.ensemble, cfg.seed, cfg.threads, 0.0,
        [&](CounterRng& rng, double& k, std::size_t n) {
            for (std::size_t i = 0; i < n; ++i) {
                const std::size_t idx = table.sample(rng);
                double jump = idx < law.k_max ? static_cast<double>(idx + 1)
                                              : r0 * std::pow(1.0 - rng.uniform(), -inv_alpha);
                if (rng.next() >> 63) {
                    jump = -jump;
                }
                k += jump;
            }
        },
        [&](std::size_t snap, std::size_t w, double k) { r.x[snap][w] = cfg.start + k * cfg.h; });
    return r;
}

EnsembleResult run_comb_walk(const CombConfig& cfg)
{
    if (!(cfg.eps > 0.0) || !(cfg.d1 > 0.0) || !(cfg.d2 > 0.0) || cfg.ensemble == 0) {
        throw ValidationError("comb walk needs positive spacing, rates and ensemble");
    }
    const auto steps = snapshot_steps(cfg.checkpoints, cfg.steps);
    EnsembleResult r = prepare(steps, 1.0, cfg.ensemble, cfg.seed, 0.0, true);
    const double horizontal = cfg.d1 / (cfg.d1 + cfg.d2);
    struct Pos
    {
        std::int64_t x = 0;
        std::int64_t y = 0;
    };
    drive(
        steps, cfg.ensemble, cfg.seed, cfg.threads, Pos{},
        [&](CounterRng& rng, Pos& p, std::size_t n) {
            std::uint64_t bits = 0;
            int left = 0;
            for (std::size_t i = 0; i < n; ++i) {
                if (p.y == 0) {
                    const std::uint64_t z = rng.next();
                    const int dir = (z & 1) ? 1 : -1;
                    if (static_cast<double>(z >> 11) * 0x1.0p-53 < horizontal) {
                        p.x += dir;
                    } else {
                        p.y += dir;
                    }
                    continue;
                }
                if (left == 0) {
                    bits = rng.next();
                    left = 64;
                }
                p.y += (bits & 1) ? 1 : -1;
                bits >>= 1;
                --left;
            }
        },
        [&](std::size_t snap, std::size_t w, const Pos& p) {
            r.x[snap][w] = static_cast<double>(p.x) * cfg.eps;
            r.y[snap][w] = static_cast<double>(p.y) * cfg.eps;
        });
    return r;
}

std::vector<double> backbone_fraction(const EnsembleResult& res)
{
    if (res.y.empty()) {
        throw ValidationError("backbone fraction needs a comb ensemble");
    }
    std::vector<double> out;
    for (const auto& snap : res.y) {
        const auto on = std::count(snap.begin(), snap.end(), 0.0);
        out.push_back(static_cast<double>(on) / static_cast<double>(snap.size()));
    }
    return out;
}

GridFunction empirical_density(const std::vector<double>& samples, const HistogramSpec& spec)
{
    if (samples.empty()) {
        throw ValidationError("empty ensemble");
    }
    if (!(spec.hi > spec.lo) || spec.bins < 2) {
        throw ValidationError("histogram needs lo < hi and at least two bins");
    }
    const double width = (spec.hi - spec.lo) / static_cast<double>(spec.bins);
    std::vector<double> counts(spec.bins, 0.0);
    for (double x : samples) {
        if (!(x >= spec.lo && x < spec.hi)) {
            throw ValidationError("sample outside the histogram range");
        }
        const auto i = std::min(static_cast<std::size_t>((x - spec.lo) / width), spec.bins - 1);
        counts[i] += 1.0;
    }
    const double scale = 1.0 / (static_cast<double>(samples.size()) * width);
    for (double& c : counts) {
        c *= scale;
    }
    return GridFunction(Domain::interval(spec.lo + 0.5 * width, spec.hi - 0.5 * width), std::move(counts));
}

GridFunction empirical_density(const EnsembleResult& res, const HistogramSpec& spec)
{
    if (res.x.empty()) {
        throw ValidationError("empty ensemble");
    }
    return empirical_density(res.final_positions(), spec);
}

} // namespace fraclab
