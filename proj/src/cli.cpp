#include "ptcop/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <ostream>
#include <vector>

#include <nlohmann/json.hpp>

#include "ptcop/csv.hpp"
#include "ptcop/empirical.hpp"
#include "ptcop/functional.hpp"
#include "ptcop/pt.hpp"
#include "ptcop/stats.hpp"
#include "ptcop/verify.hpp"

namespace ptcop::cli {

namespace {

using nlohmann::json;

// Fixed stream indices per task, so adding a task never perturbs the draws of
// an earlier one.
enum Stream : std::uint64_t {
    kStreamMain = 1,
    kStreamVerifySamples = 2,
    kStreamVerifyNorm = 3,
    kStreamVerifyPot = 4,
    kStreamVerifyGenerator = 5,
    kStreamVerifyReference = 6,
};

const json& get_section(const json& j, const std::string& key) {
    require(j.contains(key), ErrorCode::invalid_config,
            "missing config section '" + key + "'");
    return j.at(key);
}

double get_number(const json& j, const std::string& key) {
    require(j.contains(key) && j.at(key).is_number(), ErrorCode::invalid_config,
            "missing or non-numeric config field '" + key + "'");
    return j.at(key).get<double>();
}

double get_number_or(const json& j, const std::string& key, double fallback) {
    if (!j.contains(key)) return fallback;
    require(j.at(key).is_number(), ErrorCode::invalid_config,
            "non-numeric config field '" + key + "'");
    return j.at(key).get<double>();
}

Index get_count(const json& j, const std::string& key) {
    const double v = get_number(j, key);
    require(v >= 1.0 && v == std::floor(v), ErrorCode::invalid_config,
            "config field '" + key + "' must be a positive integer");
    return static_cast<Index>(v);
}

std::string get_string(const json& j, const std::string& key) {
    require(j.contains(key) && j.at(key).is_string(), ErrorCode::invalid_config,
            "missing or non-string config field '" + key + "'");
    return j.at(key).get<std::string>();
}

Vector get_vector(const json& j, const std::string& key) {
    require(j.contains(key) && j.at(key).is_array(), ErrorCode::invalid_config,
            "missing or non-array config field '" + key + "'");
    const auto& arr = j.at(key);
    Vector v(static_cast<Index>(arr.size()));
    Index i = 0;
    for (const auto& item : arr) {
        require(item.is_number(), ErrorCode::invalid_config,
                "non-numeric entry in config array '" + key + "'");
        v[i++] = item.get<double>();
    }
    return v;
}

CopulaModel parse_copula(const json& j);

GeneratorSpec parse_generator(const json& j) {
    const std::string family = get_string(j, "family");
    if (family == "constant") return GeneratorSpec::constant(get_count(j, "dim"));
    if (family == "unit_vector") return GeneratorSpec::unit_vector(get_count(j, "dim"));
    if (family == "scaled_copula")
        return GeneratorSpec::scaled_copula(parse_copula(get_section(j, "copula")));
    if (family == "bernoulli_mixture")
        return GeneratorSpec::bernoulli_mixture(get_vector(j, "weights"));
    throw Error(ErrorCode::invalid_config, "unknown generator family '" + family + "'");
}

CopulaModel parse_copula(const json& j) {
    const std::string family = get_string(j, "family");
    if (family == "independence") return CopulaModel::independence(get_count(j, "dim"));
    if (family == "comonotone") return CopulaModel::comonotone(get_count(j, "dim"));
    if (family == "clayton")
        return CopulaModel::clayton(get_count(j, "dim"), get_number(j, "theta"));
    if (family == "gumbel")
        return CopulaModel::gumbel(get_count(j, "dim"), get_number(j, "theta"));
    if (family == "gaussian")
        return CopulaModel::gaussian_exchangeable(get_count(j, "dim"),
                                                  get_number(j, "rho"));
    if (family == "gpd_copula")
        return as_copula(GpdCopulaModel(parse_generator(get_section(j, "generator")),
                                        get_number_or(j, "M", 0.0)));
    throw Error(ErrorCode::invalid_config, "unknown copula family '" + family + "'");
}

AtomSpec parse_atoms(const json& j) {
    const std::string type = get_string(j, "type");
    if (type == "constant") return AtomSpec::constant();
    if (type == "uniform02") return AtomSpec::uniform02();
    if (type == "two_point")
        return AtomSpec::two_point(get_number(j, "lo"), get_number(j, "hi"),
                                   get_number(j, "p_hi"));
    throw Error(ErrorCode::invalid_config, "unknown atom type '" + type + "'");
}

std::vector<BasisFunction> parse_basis(const json& j) {
    const std::string type = get_string(j, "type");
    if (type == "hat") return make_hat_basis(get_count(j, "count"));
    throw Error(ErrorCode::invalid_config, "unknown basis type '" + type + "'");
}

CopulaModel parse_copula_process(const json& j, const Vector& grid) {
    const std::string type = get_string(j, "type");
    if (type == "gaussian")
        return gaussian_process_copula(grid, get_number(j, "lengthscale"));
    if (type == "comonotone") return comonotone_process_copula(grid);
    throw Error(ErrorCode::invalid_config, "unknown copula process type '" + type + "'");
}

QuantileFunction parse_margin(const json& j) {
    const std::string type = get_string(j, "type");
    if (type == "identity") return [](double p) { return p; };
    if (type == "exponential") {
        const double rate = get_number(j, "rate");
        require(rate > 0.0, ErrorCode::invalid_config, "exponential rate must be positive");
        return [rate](double p) { return -std::log1p(-p) / rate; };
    }
    if (type == "normal") {
        const double mean = get_number_or(j, "mean", 0.0);
        const double sd = get_number_or(j, "sd", 1.0);
        require(sd > 0.0, ErrorCode::invalid_config, "normal sd must be positive");
        return [mean, sd](double p) { return mean + sd * normal_quantile(p); };
    }
    if (type == "pareto") {
        const double alpha = get_number(j, "alpha");
        const double scale = get_number_or(j, "scale", 1.0);
        require(alpha > 0.0 && scale > 0.0, ErrorCode::invalid_config,
                "pareto needs positive alpha and scale");
        return [alpha, scale](double p) { return scale * std::pow(1.0 - p, -1.0 / alpha); };
    }
    if (type == "empirical_gpd") {
        const std::string path = get_string(j, "data");
        const Index column = j.contains("column") ? get_count(j, "column") : 1;
        Matrix data = read_csv(path, j.value("has_header", false));
        require(column >= 1 && column <= data.cols(), ErrorCode::invalid_config,
                "margin data column out of range");
        Vector col = data.col(column - 1);
        double x0;
        if (j.contains("x0")) {
            x0 = get_number(j, "x0");
        } else {
            const double prob = get_number(j, "threshold_probability");
            require(prob > 0.0 && prob < 1.0, ErrorCode::invalid_config,
                    "threshold_probability in (0,1)");
            x0 = EmpiricalCdf(col).quantile(prob);
        }
        auto pt = std::make_shared<UnivariatePT>(make_empirical_pt(col, x0));
        auto ecdf = std::make_shared<EmpiricalCdf>(col);
        return [pt, ecdf](double p) {
            return p > pt->base_at_threshold() ? pt->high_quantile(p) : ecdf->quantile(p);
        };
    }
    throw Error(ErrorCode::invalid_config, "unknown margin type '" + type + "'");
}

void write_json_file(const std::string& path, const json& payload) {
    std::ofstream out(path);
    require(out.good(), ErrorCode::io_error, "cannot write '" + path + "'");
    out << payload.dump(2) << '\n';
    require(out.good(), ErrorCode::io_error, "write to '" + path + "' failed");
}

// --- subcommands -----------------------------------------------------------

struct Context {
    json config;
    std::uint64_t seed = 0;
    std::string output;
    std::ostream* log = nullptr;
    bool quiet = false;

    void note(const std::string& line) const {
        if (!quiet && log != nullptr) *log << line << '\n';
    }
};

int cmd_simulate(const Context& ctx) {
    const json& section = get_section(ctx.config, "simulate");
    const Index n = get_count(section, "n");
    const std::string target = get_string(section, "target");
    RngStream rng(ctx.seed, kStreamMain);
    Matrix samples;
    if (target == "generator") {
        samples = parse_generator(get_section(section, "generator")).sample(rng, n);
    } else if (target == "copula") {
        samples = parse_copula(get_section(section, "copula")).sample(rng, n);
    } else if (target == "gpd_copula") {
        GpdCopulaModel model(parse_generator(get_section(section, "generator")),
                             get_number_or(section, "M", 0.0));
        samples = model.sample(rng, n);
    } else {
        throw Error(ErrorCode::invalid_config, "unknown simulate target '" + target + "'");
    }
    write_csv(ctx.output, samples);
    ctx.note("wrote " + ctx.output + " (" + std::to_string(samples.rows()) + " x " +
             std::to_string(samples.cols()) + ")");
    return kExitOk;
}

int cmd_pt(const Context& ctx) {
    const json& section = get_section(ctx.config, "pt");
    const Index n = get_count(section, "n");
    PTConfig config(get_vector(section, "threshold"),
                    parse_copula(get_section(section, "copula")),
                    GpdCopulaModel(parse_generator(get_section(section, "generator")),
                                   get_number_or(section, "M", 0.0)));
    RngStream rng(ctx.seed, kStreamMain);
    config.check_threshold_mass(rng);
    Matrix y = pt_sample(config, rng, n);
    write_csv(ctx.output, y);
    ctx.note("wrote " + ctx.output + " (" + std::to_string(y.rows()) + " x " +
             std::to_string(y.cols()) + ")");
    if (section.contains("margins")) {
        const auto& margin_cfg = section.at("margins");
        require(margin_cfg.is_array() &&
                    static_cast<Index>(margin_cfg.size()) == config.dim(),
                ErrorCode::invalid_config, "need one margin spec per dimension");
        std::vector<QuantileFunction> quantiles;
        for (const auto& m : margin_cfg) quantiles.push_back(parse_margin(m));
        const std::string data_path = get_string(section, "data_output");
        Matrix data = inject_margins(y, quantiles);
        write_csv(data_path, data);
        ctx.note("wrote " + data_path + " (margin-injected)");
    }
    return kExitOk;
}

int cmd_empirical_pt(const Context& ctx) {
    const json& section = get_section(ctx.config, "empirical_pt");
    const std::string input = get_string(ctx.config, "input");
    Matrix data = read_csv(input, ctx.config.value("has_header", false));
    RankMatrix ranks = standardized_ranks(data);
    const Index n = get_count(section, "n");
    GpdCopulaModel gpd(parse_generator(get_section(section, "generator")),
                       get_number_or(section, "M", 0.0));
    RngStream rng(ctx.seed, kStreamMain);
    Matrix y = empirical_pt_sample(ranks, gpd, get_vector(section, "threshold"), rng, n);
    write_csv(ctx.output, y);
    ctx.note("wrote " + ctx.output + " (" + std::to_string(y.rows()) + " x " +
             std::to_string(y.cols()) + ")");
    return kExitOk;
}

int cmd_functional(const Context& ctx) {
    const json& section = get_section(ctx.config, "functional");
    const Index m = get_count(section, "grid_m");
    const Index n_paths = get_count(section, "n_paths");
    const Vector grid = make_uniform_grid(m);
    GeneratorProcessSpec process(parse_basis(get_section(section, "basis")),
                                 parse_atoms(get_section(section, "atoms")), grid);
    const double clip_m = get_number_or(section, "M", 0.0);
    const std::string op = get_string(section, "op");
    RngStream rng(ctx.seed, kStreamMain);
    Matrix paths;
    if (op == "gpp") {
        paths = sample_gpp_ensemble(process, clip_m, rng, n_paths);
    } else if (op == "gpcp") {
        paths = sample_gpcp_ensemble(process, clip_m, rng, n_paths);
    } else if (op == "pt") {
        FunctionalPTConfig config(
            parse_copula_process(get_section(section, "copula_process"), grid), process,
            get_number(section, "threshold"), clip_m);
        paths = functional_pt_ensemble(config, rng, n_paths);
    } else {
        throw Error(ErrorCode::invalid_config, "unknown functional op '" + op + "'");
    }
    // grid column followed by one column per path
    Matrix table(grid.size(), n_paths + 1);
    table.col(0) = grid;
    table.rightCols(n_paths) = paths.transpose();
    write_csv(ctx.output, table);
    ctx.note("wrote " + ctx.output + " (" + std::to_string(n_paths) + " paths on " +
             std::to_string(grid.size()) + " grid points)");
    return kExitOk;
}

int cmd_quantile(const Context& ctx) {
    const json& section = get_section(ctx.config, "quantile");
    const std::string input = get_string(ctx.config, "input");
    Matrix data = read_csv(input, ctx.config.value("has_header", false));
    const Index column = section.contains("column") ? get_count(section, "column") : 1;
    require(column >= 1 && column <= data.cols(), ErrorCode::invalid_config,
            "quantile column out of range");
    Vector col = data.col(column - 1);

    double x0;
    if (section.contains("x0")) {
        x0 = get_number(section, "x0");
    } else {
        const double prob = get_number(section, "threshold_probability");
        require(prob > 0.0 && prob < 1.0, ErrorCode::invalid_config,
                "threshold_probability in (0,1)");
        x0 = EmpiricalCdf(col).quantile(prob);
    }

    GpdFitResult fit = fit_gpd_tail(col, x0);
    EmpiricalCdf ecdf(col);
    UnivariatePT pt([&ecdf](double x) { return ecdf.cdf(x); }, x0, fit.tail);

    json quantiles = json::object();
    if (section.contains("levels")) {
        for (const auto& level : section.at("levels")) {
            require(level.is_number(), ErrorCode::invalid_config,
                    "quantile levels must be numeric");
            const double p = level.get<double>();
            quantiles[format_double(p)] = pt.high_quantile(p);
        }
    }
    json payload{{"gamma", fit.tail.gamma},
                 {"mu", fit.tail.mu},
                 {"sigma", fit.tail.sigma},
                 {"x0", x0},
                 {"F_x0", pt.base_at_threshold()},
                 {"n_exceedances", fit.n_exceedances},
                 {"method", fit.used_pwm ? "pwm" : "ml"},
                 {"quantiles", quantiles}};
    write_json_file(ctx.output, payload);
    ctx.note("wrote " + ctx.output);
    return kExitOk;
}

// Default verification battery for a PT configuration: margin uniformity,
// lower-region coincidence with C, upper-tail agreement with the thinned
// norm, thinned-generator unit means, and the POT conditioning comparison.
int cmd_verify(const Context& ctx) {
    const json& section = get_section(ctx.config, "verify");
    const Index n = section.contains("n") ? get_count(section, "n") : 100000;
    GeneratorSpec gen = parse_generator(get_section(section, "generator"));
    CopulaModel copula = parse_copula(get_section(section, "copula"));
    const double clip_m = get_number_or(section, "M", 0.0);
    PTConfig config(get_vector(section, "threshold"), copula,
                    GpdCopulaModel(gen, clip_m));
    const Vector& u = config.threshold;
    const Index d = config.dim();

    std::vector<std::string> selected;
    if (section.contains("checks"))
        for (const auto& c : section.at("checks")) selected.push_back(c.get<std::string>());
    auto enabled = [&selected](const std::string& name) {
        return selected.empty() ||
               std::find(selected.begin(), selected.end(), name) != selected.end();
    };

    std::vector<CheckReport> reports;
    RngStream sample_rng(ctx.seed, kStreamVerifySamples);
    config.check_threshold_mass(sample_rng);
    Matrix y = pt_sample(config, sample_rng, n);

    if (enabled("margin_uniformity")) {
        auto margins = margin_uniformity(y, ctx.seed, "pt_margin");
        reports.insert(reports.end(), margins.begin(), margins.end());
    }

    if (enabled("lower_coincidence")) {
        std::vector<Vector> pts;
        for (double f : {0.2, 0.4, 0.6, 0.8, 1.0}) pts.push_back((f * u.array()).matrix());
        auto reference_rng =
            std::make_shared<RngStream>(ctx.seed, kStreamVerifyReference);
        auto expected = [&copula, reference_rng](const Vector& x) {
            if (auto exact = copula.cdf(x)) return MCEstimate::exact(*exact);
            // no closed form: estimate C(x) from an independent draw
            Matrix us = copula.sample(*reference_rng, 100000);
            Index count = 0;
            for (Index i = 0; i < us.rows(); ++i) {
                bool dom = true;
                for (Index j = 0; j < us.cols(); ++j)
                    if (!(us(i, j) <= x[j])) {
                        dom = false;
                        break;
                    }
                if (dom) ++count;
            }
            MCEstimate e;
            e.n_samples = us.rows();
            e.value = static_cast<double>(count) / static_cast<double>(us.rows());
            e.std_error = binomial_se(e.value, us.rows());
            return e;
        };
        CheckReport r = cdf_agreement(y, expected, pts, "lower_coincidence", ctx.seed, true);
        reports.push_back(std::move(r));
    }

    if (enabled("upper_tail")) {
        const Vector lower = config.exact_region_lower();
        std::vector<Vector> grid;
        const Index per_dim = d <= 3 ? 4 : (d <= 6 ? 2 : 1);
        Index total = 1;
        for (Index j = 0; j < d; ++j) total *= per_dim;
        for (Index idx = 0; idx < total; ++idx) {
            Vector x(d);
            Index rem = idx;
            for (Index j = 0; j < d; ++j) {
                const Index step = rem % per_dim;
                rem /= per_dim;
                const double lo = std::max(lower[j], 0.9);
                const double hi = 0.99;
                require(lo < hi, ErrorCode::invalid_config,
                        "exact upper region is empty at the default grid; "
                        "decrease |K| or the threshold");
                x[j] = per_dim == 1
                           ? 0.5 * (lo + hi)
                           : lo + (hi - lo) * static_cast<double>(step) /
                                 static_cast<double>(per_dim - 1);
            }
            grid.push_back(std::move(x));
        }
        RngStream norm_rng(ctx.seed, kStreamVerifyNorm);
        auto evaluator = [&gen, &copula, &u, &norm_rng, n](const Vector& offset) {
            return thinned_dnorm(gen, copula, u, offset, n, norm_rng);
        };
        reports.push_back(upper_tail_agreement(y, evaluator, grid, ctx.seed));
    }

    if (enabled("thinned_means")) {
        RngStream rng(ctx.seed, kStreamVerifyGenerator);
        Matrix z = gen.sample(rng, n);
        Matrix uu = copula.sample(rng, n);
        CheckReport r;
        r.name = "thinned_generator_unit_means";
        r.n_used = n;
        r.seed = ctx.seed;
        r.statistic = 0.0;
        r.band = 1.0;
        for (Index j = 0; j < d; ++j) {
            double mean = 0.0;
            for (Index i = 0; i < n; ++i)
                if (uu(i, j) > u[j]) mean += z(i, j);
            mean /= static_cast<double>(n) * (1.0 - u[j]);
            const double band = kSigmaBand * gen.bound() /
                                ((1.0 - u[j]) * std::sqrt(static_cast<double>(n)));
            r.statistic = std::max(r.statistic, std::abs(mean - 1.0) / band);
        }
        r.pass = r.statistic <= r.band;
        reports.push_back(std::move(r));
    }

    if (enabled("pot_conditional")) {
        const bool exact = copula.family().rfind("gpd_copula", 0) == 0;
        const double k = config.gpd.clip_k();
        std::vector<Vector> v_grid;
        for (double t : {0.90, 0.95, 0.99}) {
            Vector v(d);
            for (Index j = 0; j < d; ++j)
                v[j] = std::max({t, u[j] + 1e-6, 1.0 + k + 1e-6});
            v_grid.push_back(std::move(v));
        }
        reports.push_back(pot_conditional_agreement(copula, gen, u, v_grid, n, ctx.seed,
                                                    kStreamVerifyPot, exact));
    }

    const json payload = reports_to_json(reports, ctx.seed);
    write_json_file(ctx.output, payload);
    bool all_pass = true;
    for (const auto& r : reports) {
        ctx.note(std::string(r.pass ? "PASS " : "FAIL ") + r.name);
        all_pass = all_pass && r.pass;
    }
    ctx.note("wrote " + ctx.output);
    return all_pass ? kExitOk : kExitCheckFailure;
}

int exit_code_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::ingestion:
        case ErrorCode::io_error:
        case ErrorCode::insufficient_data:
            return kExitDataError;
        default:
            return kExitConfigError;
    }
}

}  // namespace

int run(const RunOptions& options, std::ostream& log) {
    try {
        Context ctx;
        ctx.log = &log;
        ctx.quiet = options.quiet;

        std::ifstream in(options.config_path);
        require(in.good(), ErrorCode::invalid_config,
                "cannot open config '" + options.config_path + "'");
        try {
            in >> ctx.config;
        } catch (const json::exception& e) {
            throw Error(ErrorCode::invalid_config,
                        std::string("config is not valid JSON: ") + e.what());
        }

        if (options.seed_override) {
            ctx.seed = *options.seed_override;
        } else {
            require(ctx.config.contains("seed") &&
                        ctx.config.at("seed").is_number_unsigned(),
                    ErrorCode::invalid_config,
                    "config must carry a nonnegative integer 'seed' (no wall-clock "
                    "default); or pass --seed");
            ctx.seed = ctx.config.at("seed").get<std::uint64_t>();
        }

        if (options.output_override) {
            ctx.output = *options.output_override;
        } else {
            ctx.output = get_string(ctx.config, "output");
        }

        const std::string& sub = options.subcommand;
        if (sub == "simulate") return cmd_simulate(ctx);
        if (sub == "pt") return cmd_pt(ctx);
        if (sub == "empirical-pt") return cmd_empirical_pt(ctx);
        if (sub == "functional") return cmd_functional(ctx);
        if (sub == "verify") return cmd_verify(ctx);
        if (sub == "quantile") return cmd_quantile(ctx);
        throw Error(ErrorCode::invalid_config, "unknown subcommand '" + sub + "'");
    } catch (const Error& e) {
        log << "error: " << e.what() << '\n';
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        log << "error: " << e.what() << '\n';
        return kExitConfigError;
    }
}

}  // namespace ptcop::cli
