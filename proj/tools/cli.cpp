#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <ostream>

#include "cfmm/cfmm.hpp"
#include "cfmm/errors.hpp"
#include "cfmm/payoff_io.hpp"
#include "cfmm/replication.hpp"
#include "cfmm/simulate.hpp"
#include "cfmm/verify.hpp"

namespace cfmm::cli {
namespace {

using nlohmann::json;

constexpr std::string_view kCatalogPrefix = "catalog:";

/// Bad flags or arguments; maps to exit code 2.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct FamilyInfo {
    std::string_view name;
    std::string_view payoff;
    std::string_view constraints;
    std::string_view interval;
    std::string_view closed_forms;
};

constexpr FamilyInfo kFamilies[] = {
    {"cash_or_nothing", "f(p) = 1 if p > p0, else 0", "p0 > 0", "[0, inf)",
     "g(p) = (1 - f(p))/p0; g^-1(R2) = p0 for R2 > 0, inf at R2 = 0; psi = R1 + p0 R2 - 1"},
    {"capped_call", "f(p) = min(max(p - p0, 0), p1 - p0)", "0 < p0 <= p1, p1 finite", "[p0, p1]",
     "g(p) = log(p1/p) on [p0, p1]; g^-1(R2) = p1 exp(-R2); psi = R1 + p0 - p1 exp(-R2)"},
    {"black_scholes_binary", "f(p) = Phi((log(p/K) - sigma^2 tau/2) / (sigma sqrt(tau)))",
     "K > 0, sigma >= 0, tau > 0 (sigma = 0 is a cash-or-nothing step at K)", "[0, inf)",
     "g(p) = (1 - Phi(d(p) + sigma sqrt(tau)))/K; psi = R1 - Phi(Phi^-1(1 - K R2) - sigma sqrt(tau))"},
    {"logarithmic", "f(p) = max(log(p/p0), 0)", "p0 > 0", "[0, inf)",
     "g(p) = 1/max(p, p0); g^-1(R2) = 1/R2; psi = R1 + log(p0 R2)"},
    {"capped_power", "f(p) = min(max(p, p0), p1)^a - p0^a",
     "0 <= p0 <= p1, a > 0; p1 = inf only when a < 1 (a >= 1 needs a finite p1 for finite replication cost)",
     "[p0, p1]; alpha moves off 0 when p0 = 0 and a <= 1",
     "g(p) = a/(a-1) (p1^(a-1) - p^(a-1)) (log(p1/p) at a = 1); "
     "psi = R1 + p0^a - (p1^(a-1) + (1-a)/a R2)^(a/(a-1))"},
    {"constant_proportion", "f(p) = C p^w", "0 < w < 1, C >= 0", "[0.01, inf) (g is infinite at 0)",
     "g(p) = C w/(1-w) p^(w-1); psi = R1 - C (R2 (1-w)/(C w))^(-w/(1-w)); "
     "pools keep r1^(1-w) r2^w = C (w/(1-w))^w, the constant product at w = 1/2"},
};

json param_value(const std::string& key, const std::string& text) {
    if (text == "inf") return "inf";
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size())
        throw UsageError("--param " + key + "=" + text + ": value must be a number or 'inf'");
    return v;
}

ExtendedPrice parse_price(const std::string& flag, const std::string& text) {
    if (text == "inf") return ExtendedPrice::infinity();
    const json v = param_value(flag, text);
    return v.get<double>();
}

PayoffSpec load_payoff(const RunConfig& cfg) {
    if (cfg.payoff_source.empty()) throw UsageError("--payoff is required");
    if (cfg.payoff_source.rfind(kCatalogPrefix, 0) == 0) {
        json doc;
        doc["catalog"] = cfg.payoff_source.substr(kCatalogPrefix.size());
        for (const auto& kv : cfg.params) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos || eq == 0) throw UsageError("--param expects key=value, got '" + kv + "'");
            const std::string key = kv.substr(0, eq);
            doc[key] = param_value(key, kv.substr(eq + 1));
        }
        if (cfg.alpha) doc["alpha"] = param_value("alpha", *cfg.alpha);
        if (cfg.beta) doc["beta"] = param_value("beta", *cfg.beta);
        return parse_payoff_file(doc.dump());
    }
    if (!cfg.params.empty()) throw UsageError("--param only applies to catalog:NAME payoffs");
    PayoffSpec spec = load_payoff_file(cfg.payoff_source);
    if (!cfg.alpha && !cfg.beta) return spec;
    const PriceInterval iv(cfg.alpha ? parse_price("alpha", *cfg.alpha).value() : spec.interval().alpha(),
                           cfg.beta ? parse_price("beta", *cfg.beta) : spec.interval().beta());
    if (spec.catalog()) return make_catalog_payoff(*spec.catalog(), iv);
    return spec.with_interval(iv);
}

std::string num(double x) { return format_number(x); }

std::string price_text(const ExtendedPrice& p) { return p.is_infinite() ? "inf" : num(p.value()); }

int cmd_replicate(const RunConfig& cfg, std::ostream& out, std::ostream&) {
    if (cfg.grid < 2) throw UsageError("--grid must be >= 2");
    const ReplicationProfile pr(load_payoff(cfg));
    double hi = 0.0;
    if (pr.beta().is_finite()) {
        hi = pr.beta().value();
    } else {
        hi = 10.0 * std::max(pr.alpha(), 1.0);
        for (double b : pr.payoff().breakpoints()) hi = std::max(hi, 10.0 * b);
    }
    if (cfg.p_max) hi = std::min(hi, *cfg.p_max);
    double lo = std::max(pr.alpha(), cfg.p_min.value_or(0.0));
    if (lo == 0.0) lo = 1e-6 * hi;
    if (!(hi >= lo) || !(lo > 0.0))
        throw UsageError("empty price range [" + num(lo) + ", " + num(hi) + "] after applying --p-min/--p-max");

    out << "p,f,g,V\n";
    for (int i = 0; i < cfg.grid; ++i) {
        double p = i + 1 == cfg.grid ? hi : lo * std::pow(hi / lo, static_cast<double>(i) / (cfg.grid - 1));
        if (i == 0) p = lo;
        const Portfolio pf = portfolio_at(pr, p);
        out << num(p) << ',' << num(pf.numeraire) << ',' << num(pf.risky) << ',' << num(pr.value(p)) << '\n';
    }
    return kOk;
}

int cmd_trading_function(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    if (cfg.grid < 2) throw UsageError("--grid must be >= 2");
    const TradingFunction tf(ReplicationProfile(load_payoff(cfg)));
    const double cap = tf.max_risky_reserve();
    const double lo = cfg.r2_min.value_or(0.0);
    const double hi = cfg.r2_max.value_or(cap);

    out << "r2,g_inv,psi_at_zero_r1" << (cfg.check_infimum ? ",psi_inf" : "") << '\n';
    int mismatches = 0;
    for (int i = 0; i < cfg.grid; ++i) {
        const double r2 = i + 1 == cfg.grid ? hi : lo + (hi - lo) * i / (cfg.grid - 1);
        if (!(r2 >= 0.0) || r2 > cap * (1.0 + 1e-12)) {
            err << "warning: r2 = " << num(r2) << " outside the valid reserve range [0, " << num(cap)
                << "]; row omitted\n";
            continue;
        }
        double psi = 0.0;
        try {
            psi = trading_function_eval(tf, 0.0, r2);
        } catch (const UnboundedBelow& e) {
            err << "warning: r2 = " << num(r2) << ": " << e.what() << "; row omitted\n";
            continue;
        }
        out << num(r2) << ',' << price_text(tf.profile().inverse_cost(r2)) << ',' << num(psi);
        if (cfg.check_infimum) {
            const double inf = trading_function_infimum(tf, 0.0, r2, 512);
            out << ',' << num(inf);
            if (std::abs(psi - inf) > 1e-6 * std::max(1.0, std::abs(psi))) ++mismatches;
        }
        out << '\n';
    }
    if (mismatches > 0) {
        err << "error: psi and its infimum oracle disagree beyond 1e-6 relative on " << mismatches << " rows\n";
        return kFailure;
    }
    return kOk;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& summary) {
    const PayoffSpec spec = load_payoff(cfg);
    const auto pr = std::make_shared<const ReplicationProfile>(spec);
    if (cfg.paths < 2) throw UsageError("--paths must be >= 2");
    GbmParams gp{cfg.start_price, cfg.sigma, cfg.horizon, cfg.steps, cfg.seed};
    try {
        gp.validate();
    } catch (const InvalidParameter& e) {
        throw UsageError(e.what());
    }
    const MonteCarloResult mc = monte_carlo_earnings(pr, gp, cfg.paths, cfg.threads);

    out << "path_id,w,payoff_term,path_term\n";
    for (int i = 0; i < cfg.paths; ++i)
        out << i << ',' << num(mc.w[i]) << ',' << num(mc.payoff_terms[i]) << ',' << num(mc.path_terms[i]) << '\n';

    const bool logarithmic = spec.catalog() && std::holds_alternative<Logarithmic>(*spec.catalog());
    summary << "mean,stderr,theory\n"
            << num(mc.mean) << ',' << num(mc.standard_error) << ','
            << (logarithmic ? num(0.5 * cfg.sigma * cfg.sigma * cfg.horizon) : "") << '\n';
    return kOk;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream&) {
    const PayoffSpec spec = load_payoff(cfg);
    VerifyOptions opts;
    opts.seed = cfg.seed;
    const auto checks = verify_payoff(spec, opts);
    std::size_t passed = 0;
    for (const auto& c : checks) {
        passed += c.passed ? 1 : 0;
        out << (c.passed ? "PASS " : "FAIL ") << c.name << "  worst=" << num(c.worst_residual)
            << "  tol=" << num(c.tolerance);
        if (!c.note.empty()) out << "  (" << c.note << ')';
        out << '\n';
    }
    out << passed << '/' << checks.size() << " checks passed\n";
    return passed == checks.size() ? kOk : kFailure;
}

int cmd_catalog(const RunConfig& cfg, std::ostream& out, std::ostream&) {
    std::string name = cfg.family.empty() ? cfg.payoff_source : cfg.family;
    if (name.rfind(kCatalogPrefix, 0) == 0) name = name.substr(kCatalogPrefix.size());
    auto params_of = [](std::string_view family) {
        std::string s;
        for (auto p : catalog_parameter_names(family)) s += (s.empty() ? "" : ", ") + std::string(p);
        return s;
    };
    if (name.empty()) {
        for (const auto& f : kFamilies) out << f.name << "  (" << params_of(f.name) << ")  " << f.payoff << '\n';
        return kOk;
    }
    const auto it = std::find_if(std::begin(kFamilies), std::end(kFamilies),
                                 [&](const FamilyInfo& f) { return f.name == name; });
    if (it == std::end(kFamilies)) throw UsageError("unknown catalog family '" + name + "'");
    out << it->name << '\n'
        << "  parameters:   " << params_of(it->name) << '\n'
        << "  payoff:       " << it->payoff << '\n'
        << "  constraints:  " << it->constraints << '\n'
        << "  interval:     " << it->interval << '\n'
        << "  closed forms: " << it->closed_forms << '\n';
    return kOk;
}

void add_payoff_options(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--payoff", cfg.payoff_source, "Payoff JSON file or catalog:NAME")->required();
    sub->add_option("--param", cfg.params, "Catalog parameter key=value (repeatable)");
    sub->add_option("--alpha", cfg.alpha, "Interval lower end");
    sub->add_option("--beta", cfg.beta, "Interval upper end (number or inf)");
    sub->add_option("--out", cfg.output_path, "Write results to this file instead of stdout");
}

}  // namespace

int execute(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        std::ofstream file;
        std::ostream* dest = &out;
        if (!cfg.output_path.empty()) {
            file.open(cfg.output_path);
            if (!file) throw UsageError("cannot open output file '" + cfg.output_path + "'");
            dest = &file;
        }
        if (cfg.command == "replicate") return cmd_replicate(cfg, *dest, err);
        if (cfg.command == "trading-function") return cmd_trading_function(cfg, *dest, err);
        // The summary follows the per-path CSV on stdout only when that CSV goes to a file.
        if (cfg.command == "simulate") return cmd_simulate(cfg, *dest, dest == &out ? err : out);
        if (cfg.command == "verify") return cmd_verify(cfg, *dest, err);
        if (cfg.command == "catalog") return cmd_catalog(cfg, *dest, err);
        throw UsageError("unknown command '" + cfg.command + "'");
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const PayoffFormatError& e) {
        err << "payoff error: " << e.what() << '\n';
        return kUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kFailure;
    }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Replicating market makers: payoff replication, trading functions and arbitrage simulation"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto* rep = app.add_subcommand("replicate", "Tabulate f, g and V on a log-spaced price grid");
    add_payoff_options(rep, cfg);
    rep->add_option("--grid", cfg.grid, "Number of rows")->capture_default_str();
    rep->add_option("--p-min", cfg.p_min, "Lower price bound");
    rep->add_option("--p-max", cfg.p_max, "Upper price bound (default 10x the largest breakpoint on unbounded intervals)");

    auto* tfn = app.add_subcommand("trading-function", "Tabulate g^-1 and psi(0, r2) over the valid reserve range");
    add_payoff_options(tfn, cfg);
    tfn->add_option("--grid", cfg.grid, "Number of rows")->capture_default_str();
    tfn->add_option("--r2-min", cfg.r2_min, "Smallest r2 (default 0)");
    tfn->add_option("--r2-max", cfg.r2_max, "Largest r2 (default g(alpha))");
    tfn->add_flag("--check-infimum", cfg.check_infimum, "Compare against the infimum oracle");

    auto* sim = app.add_subcommand("simulate", "Monte Carlo arbitrage earnings on GBM paths");
    add_payoff_options(sim, cfg);
    sim->add_option("--sigma", cfg.sigma, "Volatility")->capture_default_str();
    sim->add_option("--horizon", cfg.horizon, "Horizon T")->capture_default_str();
    sim->add_option("--steps", cfg.steps, "Steps per path")->capture_default_str();
    sim->add_option("--paths", cfg.paths, "Number of paths")->capture_default_str();
    sim->add_option("--seed", cfg.seed, "Seed; path i uses seed + i")->capture_default_str();
    sim->add_option("--start-price", cfg.start_price, "P_0")->capture_default_str();
    sim->add_option("--threads", cfg.threads, "Worker threads (0 = all cores)")->capture_default_str();

    auto* ver = app.add_subcommand("verify", "Run the invariant checks against a payoff");
    add_payoff_options(ver, cfg);
    ver->add_option("--seed", cfg.seed, "Sampling seed")->capture_default_str();

    auto* cat = app.add_subcommand("catalog", "List catalog families or describe one");
    cat->add_option("name", cfg.family, "Family name (optionally catalog:NAME)");
    cat->add_option("--payoff", cfg.payoff_source, "catalog:NAME to describe");
    cat->add_option("--out", cfg.output_path, "Write to this file instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }
    for (auto* sub : {rep, tfn, sim, ver, cat})
        if (sub->parsed()) cfg.command = sub->get_name();
    return execute(cfg, out, err);
}

}  // namespace cfmm::cli
