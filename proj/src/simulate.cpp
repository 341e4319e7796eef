#include "cfmm/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <random>
#include <string>
#include <thread>

#include "cfmm/cfmm.hpp"
#include "cfmm/errors.hpp"
#include "cfmm/normal.hpp"

namespace cfmm {

void PricePath::validate() const {
    if (prices.empty() || times.size() != prices.size())
        throw InvalidParameter("price path needs matching, non-empty times and prices");
    if (times.front() != 0.0) throw InvalidParameter("price path must start at time 0");
    for (std::size_t i = 0; i < prices.size(); ++i) {
        if (!(prices[i] > 0.0) || !std::isfinite(prices[i]))
            throw InvalidParameter("price path has a non-positive price at step " + std::to_string(i));
        if (i > 0 && !(times[i] > times[i - 1]))
            throw InvalidParameter("price path times must be strictly increasing");
    }
}

void GbmParams::validate() const {
    if (!(p_start > 0.0) || !std::isfinite(p_start)) throw InvalidParameter("GBM start price must be > 0");
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw InvalidParameter("GBM sigma must be >= 0");
    if (!(horizon > 0.0) || !std::isfinite(horizon)) throw InvalidParameter("GBM horizon must be > 0");
    if (steps < 1) throw InvalidParameter("GBM needs at least one step");
}

struct NormalSampler::State {
    std::mt19937_64 engine;
};

NormalSampler::NormalSampler(std::uint64_t seed) : state_(std::make_shared<State>(State{std::mt19937_64(seed)})) {}

double NormalSampler::operator()() {
    // Midpoint of one of 2^53 equal cells, so u is never 0 or 1.
    const double u = (static_cast<double>(state_->engine() >> 11) + 0.5) * 0x1.0p-53;
    return normal_quantile(u);
}

PricePath gbm_path(const GbmParams& params) {
    params.validate();
    const double dt = params.horizon / params.steps;
    const double vol = params.sigma * std::sqrt(dt);
    const double drift = -0.5 * params.sigma * params.sigma * dt;
    NormalSampler normal(params.seed);
    PricePath path;
    path.times.reserve(params.steps + 1);
    path.prices.reserve(params.steps + 1);
    path.times.push_back(0.0);
    path.prices.push_back(params.p_start);
    double p = params.p_start;
    for (int i = 1; i <= params.steps; ++i) {
        const double z = normal();
        if (vol > 0.0) p *= std::exp(vol * z + drift);
        path.times.push_back(i == params.steps ? params.horizon : dt * i);
        path.prices.push_back(p);
    }
    return path;
}

EarningsReport run_arbitrage(std::shared_ptr<const ReplicationProfile> profile, const PricePath& path) {
    if (!profile) throw InvalidParameter("run_arbitrage needs a profile");
    path.validate();
    const PriceInterval& iv = profile->interval();
    const double p0 = iv.clamp(path.prices.front());

    EarningsReport report;
    report.step_profits.reserve(path.prices.size() - 1);
    PoolState pool = pool_init(profile, p0);
    const double v_start = profile->value(p0);
    double prev = p0;
    for (std::size_t i = 1; i < path.prices.size(); ++i) {
        const double p = iv.clamp(path.prices[i]);
        const double g_prev = pool.r2();
        ArbitrageResult res = arbitrage_to_price(pool, p);
        report.step_profits.push_back(res.step.profit);
        report.total_w += res.step.profit;
        report.path_term += g_prev * (p - prev);
        pool = std::move(res.pool);
        prev = p;
    }
    report.payoff_term = v_start - profile->value(prev);
    return report;
}

MonteCarloResult monte_carlo_earnings(std::shared_ptr<const ReplicationProfile> profile, const GbmParams& params,
                                      int n_paths, unsigned threads) {
    if (!profile) throw InvalidParameter("monte_carlo_earnings needs a profile");
    params.validate();
    if (n_paths < 2) throw InvalidParameter("Monte Carlo needs at least two paths");

    MonteCarloResult out;
    out.w.assign(n_paths, 0.0);
    out.payoff_terms.assign(n_paths, 0.0);
    out.path_terms.assign(n_paths, 0.0);

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(n_paths));
    std::vector<std::exception_ptr> errors(threads);
    auto worker = [&](unsigned t) {
        try {
            for (int i = static_cast<int>(t); i < n_paths; i += static_cast<int>(threads)) {
                GbmParams pp = params;
                pp.seed = params.seed + static_cast<std::uint64_t>(i);
                const EarningsReport r = run_arbitrage(profile, gbm_path(pp));
                out.w[i] = r.total_w;
                out.payoff_terms[i] = r.payoff_term;
                out.path_terms[i] = r.path_term;
            }
        } catch (...) {
            errors[t] = std::current_exception();
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker, t);
    worker(0);
    for (auto& th : pool) th.join();
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);

    // Reduce in path order so the result is independent of scheduling.
    double sum = 0.0;
    for (double w : out.w) sum += w;
    out.mean = sum / n_paths;
    double ss = 0.0;
    for (double w : out.w) ss += (w - out.mean) * (w - out.mean);
    out.standard_error = std::sqrt(ss / (n_paths - 1) / n_paths);
    return out;
}

}  // namespace cfmm
