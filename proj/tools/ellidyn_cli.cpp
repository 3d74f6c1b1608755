// Command-line front end for the ellidyn toolkit.
#include <CLI11.hpp>

#include <omp.h>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <ellidyn/dynamics.hpp>
#include <ellidyn/errors.hpp>
#include <ellidyn/hyperbolic.hpp>
#include <ellidyn/misiurewicz.hpp>
#include <ellidyn/run_config.hpp>
#include <ellidyn/scan.hpp>

using namespace ellidyn;

namespace
{

struct Common {
    std::string kind = "square";
    double eval_tol = 1e-12;
    double pole_eps = 1e-6;
    double newton_tol = 1e-10;
    int max_lattice_radius = 300;
    int threads = 0;
    std::string config;

    ToleranceConfig tolerances() const
    {
        ToleranceConfig cfg{eval_tol, pole_eps, newton_tol, max_lattice_radius};
        cfg.validate();
        return cfg;
    }
    LatticeKind lattice_kind() const { return parse_lattice_kind(kind); }
};

// A complex option given either whole ("a+bi") or by its components.
struct ComplexArg {
    std::string text;
    std::optional<double> re;
    std::optional<double> im;

    Complex value() const
    {
        Complex z = text.empty() ? Complex{} : parse_complex(text);
        if (re) {
            z.real(*re);
        }
        if (im) {
            z.imag(*im);
        }
        return z;
    }
    bool given() const { return !text.empty() || re || im; }
};

void add_common(CLI::App *sub, Common &c)
{
    sub->add_option("--config", c.config, "flat key = value config file");
    sub->add_option("--kind", c.kind, "lattice family: triangular or square")->capture_default_str();
    sub->add_option("--eval-tol", c.eval_tol)->capture_default_str();
    sub->add_option("--pole-eps", c.pole_eps)->capture_default_str();
    sub->add_option("--newton-tol", c.newton_tol)->capture_default_str();
    sub->add_option("--max-lattice-radius", c.max_lattice_radius)->capture_default_str();
    sub->add_option("--threads", c.threads, "worker threads, 0 = all cores")->capture_default_str();
}

void add_complex(CLI::App *sub, const std::string &name, ComplexArg &arg, const std::string &help)
{
    sub->add_option("--" + name, arg.text, help + " as a+bi");
    sub->add_option("--" + name + "-re", arg.re, help + ", real part");
    sub->add_option("--" + name + "-im", arg.im, help + ", imaginary part");
}

Complex require_complex(const ComplexArg &arg, const std::string &name)
{
    if (!arg.given()) {
        throw std::invalid_argument("--" + name + " is required");
    }
    return arg.value();
}

// Prints every option of the subcommand as "# key = value".
void echo_config(const CLI::App *sub)
{
    std::cout << "# " << sub->get_name() << "\n";
    for (const CLI::Option *opt : sub->get_options()) {
        const std::string name = opt->get_single_name();
        if (name == "help" || name == "config") {
            continue;
        }
        std::string value;
        if (opt->count() > 0) {
            value = opt->results().back();
        } else {
            value = opt->get_default_str();
        }
        if (value.empty()) {
            continue;
        }
        std::string key = name;
        for (char &ch : key) {
            ch = ch == '-' ? '_' : ch;
        }
        std::cout << "# " << key << " = " << value << "\n";
    }
}

std::string format_real(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

int run_classify(const Common &c, const ComplexArg &lambda_arg, int budget, int max_period)
{
    ClassifyOptions opts;
    opts.max_period = max_period;
    const Verdict v = classify(c.lattice_kind(), require_complex(lambda_arg, "lambda"), budget, c.tolerances(), opts);
    if (const auto *a = std::get_if<AttractingCycles>(&v)) {
        std::cout << "AttractingCycles count=" << a->count << " period=" << a->cycle.period
                  << " point=" << format_complex(a->cycle.point) << " multiplier=" << format_complex(a->cycle.multiplier)
                  << " abs_multiplier=" << format_real(std::abs(a->cycle.multiplier)) << "\n";
        return 0;
    }
    if (const auto *p = std::get_if<AllCriticalPrepole>(&v)) {
        std::cout << "AllCriticalPrepole steps=[";
        for (std::size_t i = 0; i < p->steps.size(); ++i) {
            std::cout << (i ? "," : "") << p->steps[i];
        }
        std::cout << "]\n";
        return 0;
    }
    std::cout << "Indeterminate iterations=" << std::get<Indeterminate>(v).iterations_used << "\n";
    return 2;
}

// Fails before any work is done when an output directory is missing.
void require_output_dir(const std::string &path)
{
    const std::filesystem::path parent = std::filesystem::absolute(path).parent_path();
    if (!std::filesystem::is_directory(parent)) {
        throw IoFailure("output directory " + parent.string() + " does not exist");
    }
}

Region parse_region(const std::string &text)
{
    const std::vector<double> b = parse_real_list(text);
    if (b.size() != 4) {
        throw std::invalid_argument("--region needs re_min,re_max,im_min,im_max");
    }
    return {b[0], b[1], b[2], b[3]};
}

struct PrepoleArgs {
    int n_min = 0;
    int n_max = 2;
    int jk_max = 1;
    std::string region = "0.5,3,0.5,3";
    int grid = 256;
    std::string out = "prepole_roots.csv";
};

int run_find_prepoles(const Common &c, const PrepoleArgs &a)
{
    const Region region = parse_region(a.region);
    require_output_dir(a.out);
    if (a.grid < 8) {
        throw std::invalid_argument("--grid must be at least 8");
    }
    if (a.n_min < 0 || a.n_max < a.n_min || a.jk_max < 0) {
        throw std::invalid_argument("invalid n or j/k range");
    }
    const ToleranceConfig cfg = c.tolerances();
    std::string csv = "lambda_re,lambda_im,n,j,k,residual,isolation_radius\n";
    std::size_t count = 0;
    for (int n = a.n_min; n <= a.n_max; ++n) {
        for (long j = -a.jk_max; j <= a.jk_max; ++j) {
            for (long k = -a.jk_max; k <= a.jk_max; ++k) {
                for (const PrepoleRoot &r : find_prepole_params(c.lattice_kind(), n, j, k, region, a.grid, cfg)) {
                    csv += format_real(r.lambda_star.real()) + "," + format_real(r.lambda_star.imag()) + ","
                           + std::to_string(r.n) + "," + std::to_string(r.j) + "," + std::to_string(r.k) + ","
                           + format_real(r.residual) + "," + format_real(r.isolation_radius) + "\n";
                    ++count;
                }
            }
        }
    }
    write_text_file(csv, a.out);
    std::cout << "roots=" << count << " written to " << a.out << "\n";
    return 0;
}

struct VerifyArgs {
    int M = 100;
    double delta = 0.02;
    int n_range = 32;
    double rho = 1e-5;
    int samples = 64;
    double radius = 1e-6;
    int pairs = 20;
    double delta_prime = 1e-3;
    std::uint64_t seed = 1;
    int motion_steps = 48;
    int distortion_steps = 64;
    int step_cap = 0;
};

int run_verify(const Common &c, const ComplexArg &lambda_arg, const VerifyArgs &a)
{
    const ToleranceConfig cfg = c.tolerances();
    const Complex lambda0 = require_complex(lambda_arg, "lambda0");
    HyperbolicSample sample;
    ExpansionReport exp;
    try {
        sample = build_sample(c.lattice_kind(), lambda0, a.M, a.delta, cfg);
        exp = fit_expansion(sample, std::min(a.n_range, SampleOptions{}.extension));
    } catch (const SeparationViolated &e) {
        std::cout << "SeparationViolated step=" << e.step
                  << " kind=" << (e.kind == SeparationKind::Critical ? "crit" : "infinity") << "\n";
        return 2;
    } catch (const NoExpansion &e) {
        std::cout << "NoExpansion " << e.what() << "\n";
        return 2;
    }
    bool ok = true;
    std::cout << "sample points=" << sample.size() << " min_crit_dist=" << format_real(sample.min_crit_dist)
              << " min_inf_dist=" << format_real(sample.min_inf_dist) << " N_exp=" << sample.n_exp
              << " a_tilde=" << format_real(sample.a_tilde) << "\n";
    std::cout << "expansion C=" << format_real(exp.C) << " a=" << format_real(exp.a) << " n_range=" << exp.n_range
              << "\n";
    for (std::size_t k = 0; k < exp.per_step_min.size(); ++k) {
        if (exp.per_step_min[k] < exp.C * std::pow(exp.a, static_cast<double>(k)) * (1.0 - 1e-12)) {
            ok = false;
        }
    }

    double c1 = 0.0;
    std::vector<double> metric(sample.points.size());
    for (std::size_t i = 0; i < sample.points.size(); ++i) {
        metric[i] = adapted_metric(sample.points[i], sample.lattice, sample.n_exp, cfg);
        c1 = std::max(c1, metric[i]);
    }
    const double bound = 1.0 + (sample.a_tilde - 1.0) / (sample.n_exp * c1);
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < sample.points.size(); ++i) {
        const double next = adapted_metric(sample.orbit.points[i + 1], sample.lattice, sample.n_exp, cfg);
        worst = std::min(worst, sample.orbit.sph_derivs[i] * next / metric[i]);
    }
    ok = ok && worst >= bound * (1.0 - 1e-12);
    std::cout << "adapted_metric C1=" << format_real(c1) << " min_derivative=" << format_real(worst)
              << " bound=" << format_real(bound) << "\n";

    MotionOptions mopts;
    mopts.n_steps = a.motion_steps;
    try {
        const Complex lambda = lambda0 + Complex{a.radius, 0.0};
        double max_residual = 0.0;
        const std::size_t stride = std::max<std::size_t>(1, sample.points.size() / 8);
        for (std::size_t i = 0; i < sample.points.size(); i += stride) {
            const MotionFrame f = track_motion(sample, sample.points[i], lambda, cfg, mopts);
            max_residual = std::max(max_residual, f.conj_residual);
        }
        ok = ok && max_residual < 10.0 * cfg.newton_tol;
        std::cout << "motion lambda=" << format_complex(lambda) << " max_conj_residual=" << format_real(max_residual)
                  << "\n";

        const int K = order_K(sample, a.rho, a.samples, cfg, mopts);
        ok = ok && K >= 1;
        std::cout << "order_K=" << K << " rho=" << format_real(a.rho) << "\n";

        DistortionOptions dopts;
        dopts.delta_prime = a.delta_prime;
        dopts.seed = a.seed;
        dopts.max_steps = a.distortion_steps;
        dopts.step_cap = a.step_cap;
        dopts.motion = mopts;
        const DistortionReport d = distortion_report(sample, a.radius, a.pairs, cfg, dopts);
        std::cout << "distortion r=" << format_real(a.radius) << " pairs=" << d.pairs.size()
                  << " n_min=" << d.min_n << " n_max=" << d.max_n << " max_ratio=" << format_real(d.max_ratio)
                  << " corollary_ratio=" << format_real(d.max_corollary_ratio) << "\n";
    } catch (const Error &e) {
        std::cout << "motion failure: " << e.what() << "\n";
        ok = false;
    }
    std::cout << (ok ? "verify: all invariants held" : "verify: invariant violated") << "\n";
    return ok ? 0 : 3;
}

struct RenderArgs {
    ComplexArg origin;
    ComplexArg extent;
    int width = 64;
    int height = 64;
    int budget = 500;
    double capture_eps = 1e-3;
    std::string out = "render.ppm";
    std::string csv;
};

ScanGrid make_grid(RenderArgs &r)
{
    ScanGrid g{require_complex(r.origin, "origin"), require_complex(r.extent, "extent"), r.width, r.height};
    g.validate();
    return g;
}

int run_render_param(const Common &c, RenderArgs &r)
{
    const ScanGrid grid = make_grid(r);
    require_output_dir(r.out);
    if (!r.csv.empty()) {
        require_output_dir(r.csv);
    }
    const ParameterScan scan = render_parameter_plane(c.lattice_kind(), grid, r.budget, c.tolerances());
    write_ppm(scan.image, r.out);
    if (!r.csv.empty()) {
        try {
            write_text_file(scan.csv, r.csv);
        } catch (const IoFailure &) {
            std::error_code ec;
            std::filesystem::remove(r.out, ec);
            throw;
        }
    }
    std::cout << "image " << r.out << " " << grid.width_px << "x" << grid.height_px << "\n";
    return 0;
}

int run_render_dyn(const Common &c, const ComplexArg &lambda_arg, RenderArgs &r)
{
    const ScanGrid grid = make_grid(r);
    require_output_dir(r.out);
    ToleranceConfig cfg = c.tolerances();
    cfg.pole_eps = r.capture_eps;
    cfg.validate();
    const Image img = render_dynamical_plane(c.lattice_kind(), require_complex(lambda_arg, "lambda"), grid, r.budget, cfg);
    write_ppm(img, r.out);
    std::cout << "image " << r.out << " " << grid.width_px << "x" << grid.height_px << "\n";
    return 0;
}

struct DensityArgs {
    std::string radii = "1e-3,1e-4";
    int samples = 2000;
    double delta = 0.05;
    int M = 200;
    std::uint64_t seed = 0;
    std::string out = "density.csv";
};

int run_density(const Common &c, const ComplexArg &lambda_arg, const DensityArgs &a)
{
    require_output_dir(a.out);
    const std::vector<DensityRow> rows = density_scan(c.lattice_kind(), require_complex(lambda_arg, "lambda0"),
                                                      parse_real_list(a.radii), a.samples, a.delta, a.M, a.seed,
                                                      c.tolerances());
    std::string csv = "radius,n_samples,fail_fraction,seed\n";
    for (const DensityRow &row : rows) {
        const std::string line = format_real(row.radius) + "," + std::to_string(row.n_samples) + ","
                                 + format_real(row.fail_fraction) + "," + std::to_string(row.seed);
        csv += line + "\n";
        std::cout << line << "\n";
    }
    write_text_file(csv, a.out);
    return 0;
}

struct CoveringArgs {
    ComplexArg center;
    double d = 1.0;
    double delta = 0.05;
    int max_n = 8;
    int grid = 64;
};

int run_covering(const Common &c, const ComplexArg &lambda_arg, const CoveringArgs &a)
{
    const ToleranceConfig cfg = c.tolerances();
    const Lattice lat = make_lattice(c.lattice_kind(), require_complex(lambda_arg, "lambda"), cfg);
    const std::optional<int> m =
        covering_steps(lat, require_complex(a.center, "center"), a.d, a.delta, a.max_n, a.grid, cfg);
    std::cout << "covering_steps=" << (m ? std::to_string(*m) : std::string("none")) << "\n";
    return 0;
}

// Turns the --config file of the selected subcommand into leading arguments so
// that explicit flags, parsed later, win under the take-last policy.
std::vector<std::string> expand_config(const CLI::App &app, const std::vector<std::string> &args)
{
    if (args.size() < 2) {
        return args;
    }
    const CLI::App *sub = nullptr;
    try {
        sub = app.get_subcommand(args[1]);
    } catch (const CLI::OptionNotFound &) {
        return args;
    }
    std::string path;
    for (std::size_t i = 2; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            path = args[i + 1];
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
        }
    }
    if (path.empty()) {
        return args;
    }
    std::vector<std::string> out{args[0], args[1]};
    for (const auto &[key, value] : read_config_file(path)) {
        std::string flag = key;
        for (char &ch : flag) {
            ch = ch == '_' ? '-' : ch;
        }
        if (flag == "config" || sub->get_option_no_throw("--" + flag) == nullptr) {
            throw std::invalid_argument("unknown config key '" + key + "' for " + args[1]);
        }
        out.push_back("--" + flag + "=" + value);
    }
    out.insert(out.end(), args.begin() + 2, args.end());
    return out;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Weierstrass elliptic dynamics toolkit"};
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    Common common;
    ComplexArg lambda;
    int budget = 2000;
    int max_period = 64;
    PrepoleArgs prepole;
    VerifyArgs verify;
    RenderArgs param_render;
    RenderArgs dyn_render;
    DensityArgs density;
    CoveringArgs covering;

    auto *classify_cmd = app.add_subcommand("classify", "classify a parameter by its critical orbits");
    add_common(classify_cmd, common);
    add_complex(classify_cmd, "lambda", lambda, "lattice parameter");
    classify_cmd->add_option("--budget", budget)->capture_default_str();
    classify_cmd->add_option("--max-period", max_period)->capture_default_str();

    auto *prepole_cmd = app.add_subcommand("find-prepoles", "solve f^n(e_1) = p_{j,k} in a parameter region");
    add_common(prepole_cmd, common);
    prepole_cmd->add_option("--n-min", prepole.n_min)->capture_default_str();
    prepole_cmd->add_option("--n-max", prepole.n_max)->capture_default_str();
    prepole_cmd->add_option("--jk-max", prepole.jk_max, "bound on |j| and |k|")->capture_default_str();
    prepole_cmd->add_option("--region", prepole.region, "re_min,re_max,im_min,im_max")->capture_default_str();
    prepole_cmd->add_option("--grid", prepole.grid)->capture_default_str();
    prepole_cmd->add_option("--out", prepole.out)->capture_default_str();

    auto *verify_cmd = app.add_subcommand("verify", "expansion, motion, order and distortion report");
    add_common(verify_cmd, common);
    add_complex(verify_cmd, "lambda0", lambda, "base parameter");
    verify_cmd->add_option("--M", verify.M)->capture_default_str();
    verify_cmd->add_option("--delta", verify.delta)->capture_default_str();
    verify_cmd->add_option("--n-range", verify.n_range)->capture_default_str();
    verify_cmd->add_option("--rho", verify.rho)->capture_default_str();
    verify_cmd->add_option("--samples", verify.samples)->capture_default_str();
    verify_cmd->add_option("--radius", verify.radius)->capture_default_str();
    verify_cmd->add_option("--pairs", verify.pairs)->capture_default_str();
    verify_cmd->add_option("--delta-prime", verify.delta_prime)->capture_default_str();
    verify_cmd->add_option("--seed", verify.seed)->capture_default_str();
    verify_cmd->add_option("--motion-steps", verify.motion_steps)->capture_default_str();
    verify_cmd->add_option("--distortion-steps", verify.distortion_steps)->capture_default_str();
    verify_cmd->add_option("--step-cap", verify.step_cap, "upper bound on the distortion n; 0 for none")
        ->capture_default_str();

    const auto add_render = [&](CLI::App *cmd, RenderArgs &render, int default_budget) {
        render.budget = default_budget;
        add_common(cmd, common);
        add_complex(cmd, "origin", render.origin, "plane point of pixel (0,0)");
        add_complex(cmd, "extent", render.extent, "width + i height of the view");
        cmd->add_option("--width", render.width)->capture_default_str();
        cmd->add_option("--height", render.height)->capture_default_str();
        cmd->add_option("--budget", render.budget)->capture_default_str();
        cmd->add_option("--out", render.out)->capture_default_str();
    };
    auto *param_cmd = app.add_subcommand("render-param", "parameter-plane classification map");
    add_render(param_cmd, param_render, 500);
    param_cmd->add_option("--csv", param_render.csv, "classification CSV path");
    auto *dyn_cmd = app.add_subcommand("render-dyn", "dynamical-plane pole-hit map");
    add_render(dyn_cmd, dyn_render, 64);
    add_complex(dyn_cmd, "lambda", lambda, "lattice parameter");
    dyn_cmd->add_option("--capture-eps", dyn_render.capture_eps, "pole capture radius in generator units")
        ->capture_default_str();

    auto *density_cmd = app.add_subcommand("density", "Misiurewicz-check failure fractions around lambda0");
    add_common(density_cmd, common);
    add_complex(density_cmd, "lambda0", lambda, "centre parameter");
    density_cmd->add_option("--radii", density.radii, "comma-separated decreasing radii")->capture_default_str();
    density_cmd->add_option("--samples", density.samples)->capture_default_str();
    density_cmd->add_option("--delta", density.delta)->capture_default_str();
    density_cmd->add_option("--M", density.M)->capture_default_str();
    density_cmd->add_option("--seed", density.seed)->required();
    density_cmd->add_option("--out", density.out)->capture_default_str();

    auto *covering_cmd = app.add_subcommand("covering", "steps for a disc to cover U_delta");
    add_common(covering_cmd, common);
    add_complex(covering_cmd, "lambda", lambda, "lattice parameter");
    add_complex(covering_cmd, "center", covering.center, "disc centre");
    covering_cmd->add_option("--d", covering.d, "disc radius")->capture_default_str();
    covering_cmd->add_option("--delta", covering.delta)->capture_default_str();
    covering_cmd->add_option("--max-n", covering.max_n)->capture_default_str();
    covering_cmd->add_option("--grid", covering.grid)->capture_default_str();

    try {
        const std::vector<std::string> args = expand_config(app, std::vector<std::string>(argv, argv + argc));
        std::vector<char *> ptrs;
        for (const std::string &s : args) {
            ptrs.push_back(const_cast<char *>(s.c_str()));
        }
        try {
            app.parse(static_cast<int>(ptrs.size()), ptrs.data());
        } catch (const CLI::ParseError &e) {
            const int code = app.exit(e);
            return code == 0 ? 0 : 1;
        }

        if (common.threads > 0) {
            omp_set_num_threads(common.threads);
        }
        const CLI::App *sub = app.get_subcommands().front();
        echo_config(sub);
        if (sub == classify_cmd) {
            return run_classify(common, lambda, budget, max_period);
        }
        if (sub == prepole_cmd) {
            return run_find_prepoles(common, prepole);
        }
        if (sub == verify_cmd) {
            return run_verify(common, lambda, verify);
        }
        if (sub == param_cmd) {
            return run_render_param(common, param_render);
        }
        if (sub == dyn_cmd) {
            return run_render_dyn(common, lambda, dyn_render);
        }
        if (sub == density_cmd) {
            return run_density(common, lambda, density);
        }
        return run_covering(common, lambda, covering);
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
