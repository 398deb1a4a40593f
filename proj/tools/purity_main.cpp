#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "purity/asymptotics.hpp"
#include "purity/closed_forms.hpp"
#include "purity/entropy.hpp"
#include "purity/errors.hpp"
#include "purity/io.hpp"
#include "purity/tradeoff.hpp"

namespace {

using namespace purity;

// "start:stop:count" inclusive grid
std::vector<double> parse_grid(const std::string& spec) {
    std::size_t c1 = spec.find(':');
    std::size_t c2 = c1 == std::string::npos ? c1 : spec.find(':', c1 + 1);
    if (c2 == std::string::npos || spec.find(':', c2 + 1) != std::string::npos)
        throw ParseError(0, "grid spec '" + spec + "' is not start:stop:count");
    auto num = [&](const std::string& tok) {
        errno = 0;
        char* end = nullptr;
        double v = std::strtod(tok.c_str(), &end);
        if (tok.empty() || end != tok.c_str() + tok.size() || errno == ERANGE)
            throw ParseError(0, "bad number '" + tok + "' in grid spec '" + spec + "'");
        return v;
    };
    double start = num(spec.substr(0, c1));
    double stop = num(spec.substr(c1 + 1, c2 - c1 - 1));
    double countd = num(spec.substr(c2 + 1));
    long long count = static_cast<long long>(countd);
    if (countd != static_cast<double>(count) || count < 1 || count > 1000000)
        throw ParseError(0, "grid count must be a positive integer, got '" + spec + "'");
    std::vector<double> g;
    g.reserve(count);
    if (count == 1) {
        g.push_back(start);
    } else {
        for (long long i = 0; i < count; ++i)
            g.push_back(start + (stop - start) * static_cast<double>(i) /
                                    static_cast<double>(count - 1));
    }
    return g;
}

// comma-separated list of reals
std::vector<double> parse_list(const std::string& spec) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (true) {
        std::size_t comma = spec.find(',', pos);
        std::string tok = spec.substr(pos, comma == std::string::npos ? comma : comma - pos);
        errno = 0;
        char* end = nullptr;
        double v = std::strtod(tok.c_str(), &end);
        if (tok.empty() || end != tok.c_str() + tok.size() || errno == ERANGE)
            throw ParseError(0, "bad number '" + tok + "' in list '" + spec + "'");
        out.push_back(v);
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

std::uint64_t seed_from_env_or(std::uint64_t flag_value, bool flag_given) {
    if (flag_given) return flag_value;
    const char* env = std::getenv("PURITY_SEED");
    if (!env || !*env) return flag_value;
    errno = 0;
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (*end != '\0' || errno == ERANGE)
        throw ParseError(0, std::string("PURITY_SEED is not an unsigned integer: '") + env + "'");
    return v;
}

std::vector<CurveRow> curve_rows(const TradeoffCurve& curve) {
    std::vector<CurveRow> rows;
    rows.reserve(curve.points().size());
    for (const TradeoffPoint& pt : curve.points()) rows.push_back({pt.multiplier, pt.r, pt.p});
    return rows;
}

void emit_curve(const TradeoffCurve& curve, const std::string& out,
                const std::string& envelope_out) {
    write_points_csv(out, curve_rows(curve));
    if (!envelope_out.empty()) write_envelope_csv(envelope_out, curve.envelope());
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"local purity / classical communication tradeoff toolkit"};
    app.require_subcommand(1);

    // shared option storage
    std::string in_path, ensemble_path, channel_path, out_path, envelope_path;
    std::string mu_grid_spec = "0:1:41", lambda_spec, r_spec, p_spec;
    double theta = 0.0, delta = 0.0, grid_step = 0.01, r_value = 0.0;
    int nodes = 32, y_size = 0, restarts = 64, max_iterations = 5000;
    long long n = 1;
    long long mc_samples = 100000;
    std::uint64_t seed = 0;
    bool d_form = false, closed_form = false, allow_mc = false;

    auto* c_entropy = app.add_subcommand("entropy", "entropy and purity of a density matrix");
    c_entropy->add_option("--in", in_path, "density-matrix text file")->required();

    auto* c_curve = app.add_subcommand("curve", "tradeoff curve for an ensemble file");
    c_curve->add_option("--ensemble", ensemble_path, "ensemble text file")->required();
    c_curve->add_option("--mu-grid", mu_grid_spec, "multiplier grid start:stop:count");
    c_curve->add_flag("--d-form", d_form, "sweep the deficit form of the constraint");
    c_curve->add_option("--y-size", y_size, "output alphabet size (0: |X|+2)");
    c_curve->add_option("--restarts", restarts, "random restarts per multiplier");
    c_curve->add_option("--max-iterations", max_iterations, "ascent iteration cap");
    auto* curve_seed = c_curve->add_option("--seed", seed, "master seed");
    c_curve->add_option("--out", out_path, "points CSV destination")->required();
    c_curve->add_option("--envelope", envelope_path, "envelope CSV destination");

    auto* c_bb84 = app.add_subcommand("bb84", "tradeoff curve for the parametrized BB84 ensemble");
    c_bb84->add_option("--theta", theta, "state angle in radians")->required();
    c_bb84->add_option("--mu-grid", mu_grid_spec, "multiplier grid start:stop:count");
    c_bb84->add_option("--y-size", y_size, "output alphabet size (0: |X|+2)");
    c_bb84->add_option("--restarts", restarts, "random restarts per multiplier");
    auto* bb84_seed = c_bb84->add_option("--seed", seed, "master seed");
    c_bb84->add_option("--out", out_path, "points CSV destination")->required();
    c_bb84->add_option("--envelope", envelope_path, "envelope CSV destination");

    auto* c_uniform = app.add_subcommand("uniform", "uniform qubit ensemble curve");
    c_uniform->add_flag("--closed-form", closed_form, "parametric closed form instead of the optimizer");
    c_uniform->add_option("--lambdas", lambda_spec, "closed-form parameter grid start:stop:count");
    c_uniform->add_option("--nodes", nodes, "sphere discretization size (optimizer mode)");
    c_uniform->add_option("--mu-grid", mu_grid_spec, "multiplier grid start:stop:count");
    c_uniform->add_option("--y-size", y_size, "output alphabet size (0: |X|+2)");
    c_uniform->add_option("--restarts", restarts, "random restarts per multiplier");
    auto* uniform_seed = c_uniform->add_option("--seed", seed, "master seed");
    c_uniform->add_option("--out", out_path, "points CSV destination")->required();
    c_uniform->add_option("--envelope", envelope_path, "envelope CSV destination");

    auto* c_verify = app.add_subcommand("verify-pd", "consistency of the two tradeoff forms");
    c_verify->add_option("--ensemble", ensemble_path, "ensemble text file")->required();
    c_verify->add_option("--r-grid", r_spec, "rate samples start:stop:count")->required();
    c_verify->add_option("--y-size", y_size, "output alphabet size (0: |X|+2)");
    c_verify->add_option("--restarts", restarts, "random restarts per multiplier");
    auto* verify_seed = c_verify->add_option("--seed", seed, "master seed");

    auto* c_oracle = app.add_subcommand("oracle", "exhaustive grid-search reference value");
    c_oracle->add_option("--ensemble", ensemble_path, "ensemble text file")->required();
    c_oracle->add_option("--r", r_value, "communication rate bound")->required();
    c_oracle->add_option("--y-size", y_size, "output alphabet size")->required();
    c_oracle->add_option("--grid-step", grid_step, "channel entry resolution");

    auto* c_typ = app.add_subcommand("typicality", "typical-set probability / subspace stats");
    c_typ->add_option("--p", p_spec, "distribution, comma-separated");
    c_typ->add_option("--state", in_path, "density-matrix file (subspace stats mode)");
    c_typ->add_option("--n", n, "block length")->required();
    c_typ->add_option("--delta", delta, "typicality width")->required();
    c_typ->add_flag("--mc", allow_mc, "allow Monte Carlo for alphabets over 8");
    c_typ->add_option("--samples", mc_samples, "Monte Carlo sample count");
    auto* typ_seed = c_typ->add_option("--seed", seed, "master seed");

    auto* c_ledger = app.add_subcommand("ledger", "block-protocol resource accounting");
    c_ledger->add_option("--ensemble", ensemble_path, "ensemble text file");
    c_ledger->add_option("--theta", theta, "use the BB84 ensemble at this angle instead");
    c_ledger->add_option("--channel", channel_path, "channel text file (default: identity)");
    c_ledger->add_option("--n", n, "block length")->required();
    c_ledger->add_option("--delta", delta, "slack parameter")->required();
    c_ledger->add_option("--out", out_path, "ledger destination (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*c_entropy) {
            DensityMatrix rho = load_density(in_path);
            std::cout << "H_bits=" << format_double(von_neumann_entropy(rho)) << "\n";
            std::cout << "kappa_bits=" << format_double(purity_kappa(rho)) << "\n";
        } else if (*c_curve || *c_bb84 || *c_uniform) {
            OptimizerOptions opts;
            opts.y_size = y_size;
            opts.restarts = restarts;
            opts.max_iterations = max_iterations;

            if (*c_uniform && closed_form) {
                if (lambda_spec.empty())
                    throw ValidationError("--closed-form needs --lambdas start:stop:count");
                std::vector<CurveRow> rows;
                for (double lam : parse_grid(lambda_spec)) {
                    auto [r, p] = uniform_curve_point(UniformCurveParam{lam});
                    rows.push_back({lam, r, p});
                }
                write_points_csv(out_path, rows);
                return 0;
            }

            CQEnsemble ens;
            const CLI::Option* seed_opt = nullptr;
            if (*c_curve) {
                ens = load_ensemble(ensemble_path);
                seed_opt = curve_seed;
            } else if (*c_bb84) {
                ens = bb84_ensemble(theta);
                seed_opt = bb84_seed;
            } else {
                ens = discretize_uniform_sphere(nodes);
                seed_opt = uniform_seed;
            }
            opts.master_seed = seed_from_env_or(seed, seed_opt->count() > 0);
            std::vector<double> grid = parse_grid(mu_grid_spec);
            TradeoffCurve curve = (*c_curve && d_form) ? compute_D_curve(ens, grid, opts)
                                                       : compute_P_curve(ens, grid, opts);
            emit_curve(curve, out_path, envelope_path);
        } else if (*c_verify) {
            OptimizerOptions opts;
            opts.y_size = y_size;
            opts.restarts = restarts;
            opts.master_seed = seed_from_env_or(seed, verify_seed->count() > 0);
            CQEnsemble ens = load_ensemble(ensemble_path);
            for (const PDCheck& c : verify_PD_relation(ens, parse_grid(r_spec), opts))
                std::cout << "R=" << format_double(c.r) << " D=" << format_double(c.d_value)
                          << " P_at_D_plus_R=" << format_double(c.p_value)
                          << " discrepancy=" << format_double(c.discrepancy) << "\n";
        } else if (*c_oracle) {
            CQEnsemble ens = load_ensemble(ensemble_path);
            double p = brute_force_oracle(ens, r_value, y_size, grid_step);
            std::cout << "R=" << format_double(r_value) << " P_oracle=" << format_double(p)
                      << "\n";
        } else if (*c_typ) {
            if (p_spec.empty() == in_path.empty())
                throw ValidationError("typicality needs exactly one of --p or --state");
            if (!p_spec.empty()) {
                ProbabilityDistribution dist(parse_list(p_spec));
                TypicalSetSpec spec(dist, n, delta);
                std::uint64_t s = seed_from_env_or(seed, typ_seed->count() > 0);
                TypicalEstimate est = typical_probability(spec, allow_mc, s, mc_samples);
                std::cout << "probability=" << format_double(est.probability) << "\n";
                if (!est.exact)
                    std::cout << "std_error=" << format_double(est.std_error) << "\n";
            } else {
                DensityMatrix rho = load_density(in_path);
                TypicalSubspaceStats st = typical_subspace_stats(rho, n, delta);
                std::cout << "rate=" << format_double(st.rate) << "\n";
                std::cout << "mass=" << format_double(st.mass) << "\n";
            }
        } else if (*c_ledger) {
            if (ensemble_path.empty() == (c_ledger->count("--theta") == 0))
                throw ValidationError("ledger needs exactly one of --ensemble or --theta");
            CQEnsemble ens = ensemble_path.empty() ? bb84_ensemble(theta)
                                                   : load_ensemble(ensemble_path);
            ClassicalChannel w = channel_path.empty()
                                     ? ClassicalChannel::identity(ens.alphabet_size())
                                     : load_channel(channel_path);
            ResourceLedger led = resource_ledger(ens, w, n, delta);
            if (out_path.empty())
                std::cout << format_ledger(led);
            else
                write_ledger(out_path, led);
        }
    } catch (const ParseError& e) {
        if (e.line() > 0)
            std::cerr << "parse error (line " << e.line() << "): " << e.what() << "\n";
        else
            std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const GuardError& e) {
        std::cerr << "refused: " << e.what() << "\n";
        return 1;
    } catch (const ValidationError& e) {
        std::cerr << "invalid: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
