#include "conetree/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <openssl/evp.h>

#include "conetree/errors.hpp"
#include "conetree/frechet.hpp"
#include "conetree/greens_free.hpp"
#include "conetree/random_sim.hpp"
#include "conetree/verify.hpp"

#ifndef CONETREE_VERSION
#define CONETREE_VERSION "0.0.0"
#endif

namespace conetree::cli {

using nlohmann::json;

std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string sha256_hex(std::string_view data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw NumericFailure("SHA-256 digest failed");
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[md[i] >> 4]);
        out.push_back(hex[md[i] & 0xf]);
    }
    return out;
}

unsigned resolve_threads(std::optional<int> flag) {
    if (flag) {
        if (*flag < 1) throw InvalidArgument("--threads must be >= 1");
        return static_cast<unsigned>(*flag);
    }
    if (const char* env = std::getenv("CONETREE_THREADS"); env && *env) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (*end != '\0' || v < 1) throw InvalidArgument("CONETREE_THREADS must be a positive integer");
        return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<double> parse_number_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            throw InvalidArgument("not a number: '" + item + "'");
        }
        if (used != item.size()) throw InvalidArgument("not a number: '" + item + "'");
        out.push_back(v);
    }
    if (out.empty()) throw InvalidArgument("empty number list");
    return out;
}

std::vector<double> parse_grid(const std::string& text) {
    const auto first = text.find(':');
    const auto second = first == std::string::npos ? first : text.find(':', first + 1);
    if (second == std::string::npos) throw InvalidArgument("grid must look like lo:hi:n, got '" + text + "'");
    const double lo = parse_number_list(text.substr(0, first)).at(0);
    const double hi = parse_number_list(text.substr(first + 1, second - first - 1)).at(0);
    const double nd = parse_number_list(text.substr(second + 1)).at(0);
    if (nd < 1 || nd != std::floor(nd)) throw InvalidArgument("grid size must be a positive integer");
    const auto n = static_cast<std::size_t>(nd);
    if (n == 1) return {lo};
    if (!(hi > lo)) throw InvalidArgument("grid needs lo < hi");
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    out.back() = hi;
    return out;
}

namespace {

struct Common {
    std::string format;
    std::string out;
    std::string manifest;
    std::optional<int> threads;
};

void add_common(CLI::App* cmd, Common& c, const std::string& default_format) {
    c.format = default_format;
    cmd->add_option("--format", c.format, "output format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
    cmd->add_option("--out", c.out, "write the result here instead of standard output");
    cmd->add_option("--manifest", c.manifest, "run manifest path (default: <out>.manifest.json)");
    cmd->add_option("--threads", c.threads, "worker threads (fallback: CONETREE_THREADS)");
}

std::optional<std::string> path_or_stdout(const std::string& p) {
    if (p.empty()) return std::nullopt;
    return p;
}

json complex_matrix_json(const Eigen::MatrixXcd& M) {
    json re = json::array(), im = json::array();
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        json r = json::array(), c = json::array();
        for (Eigen::Index j = 0; j < M.cols(); ++j) {
            r.push_back(M(i, j).real());
            c.push_back(M(i, j).imag());
        }
        re.push_back(r);
        im.push_back(c);
    }
    return {{"re", re}, {"im", im}};
}

json real_matrix_json(const Eigen::MatrixXd& M) {
    json out = json::array();
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        json r = json::array();
        for (Eigen::Index j = 0; j < M.cols(); ++j) r.push_back(M(i, j));
        out.push_back(r);
    }
    return out;
}

std::string csv_quote(const std::string& s) {
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out.push_back('"');
        out.push_back(ch);
    }
    out.push_back('"');
    return out;
}

// ---- spectrum --------------------------------------------------------------

struct SpectrumFlags {
    int K = 0, L = 0;
    std::string A;
    std::string grid = "-4:4:801";
    std::string trace;
};

std::string spectrum_trace_csv(int K, int L, const std::vector<double>& grid) {
    std::ostringstream os;
    os << "E,D";
    for (int p = 0; p <= L; ++p) os << ",re_gamma_" << p << ",im_gamma_" << p;
    os << '\n';
    for (double E : grid) {
        os << format_double(E) << ',' << format_double(discriminant(K, L, E));
        std::optional<GreensVector> gv;
        try {
            gv = boundary_greens(K, L, E);
        } catch (const DomainRejection&) {
        }
        for (int p = 0; p <= L; ++p) {
            if (gv)
                os << ',' << format_double(gv->gamma[static_cast<std::size_t>(p)].real()) << ','
                   << format_double(gv->gamma[static_cast<std::size_t>(p)].imag());
            else
                os << ",,";
        }
        os << '\n';
    }
    return os.str();
}

Execution run_spectrum(const SpectrumFlags& f, const Common& c) {
    Execution ex;
    ex.command = "spectrum";
    const auto grid = parse_grid(f.grid);
    std::optional<VerticalOperator> A;
    if (!f.A.empty()) A = VerticalOperator(parse_number_list(f.A));
    const SpectralIntervals I = A ? ac_intervals_strip(f.K, f.L, *A) : ac_intervals(f.K, f.L);

    ex.parameters = {{"K", f.K}, {"L", f.L}, {"grid", f.grid}};
    if (A) ex.parameters["A"] = A->eigenvalues();
    if (I.empty()) ex.warnings.push_back("the a.c. set is empty for these parameters");

    json result = I.to_json();
    result["K"] = f.K;
    result["L"] = f.L;
    if (A) result["A"] = A->eigenvalues();
    result["total_length"] = I.total_length();

    const std::string trace = spectrum_trace_csv(f.K, f.L, grid);
    if (c.format == "csv") {
        ex.artifacts.push_back({"main", path_or_stdout(c.out), trace});
    } else {
        ex.artifacts.push_back({"main", path_or_stdout(c.out), result.dump(2) + "\n"});
        if (!f.trace.empty()) ex.artifacts.push_back({"trace", f.trace, trace});
    }
    return ex;
}

// ---- greens ----------------------------------------------------------------

struct GreensFlags {
    int K = 0, L = 0;
    double E = 0.0, eta = 0.0;
};

Execution run_greens(const GreensFlags& f, const Common& c) {
    Execution ex;
    ex.command = "greens";
    ex.parameters = {{"K", f.K}, {"L", f.L}, {"E", f.E}, {"eta", f.eta}};
    if (f.eta < 0.0) throw InvalidArgument("--eta must be >= 0");
    const auto S = make_kl_matrix(f.K, f.L);
    const cplx z(f.E, f.eta);
    const GreensVector gv = f.eta == 0.0 ? boundary_greens(f.K, f.L, f.E) : greens_halfplane(f.K, f.L, z);

    json result{{"K", f.K}, {"L", f.L}, {"E", f.E}, {"eta", f.eta},
                {"method", f.eta == 0.0 ? "cubic" : "iteration"}, {"iterations", gv.iterations},
                {"recursion_residual", recursion_residual(S, z, gv.gamma)}};
    json gamma = json::array();
    for (std::size_t p = 0; p < gv.gamma.size(); ++p)
        gamma.push_back({{"label", p}, {"re", gv.gamma[p].real()}, {"im", gv.gamma[p].imag()}});
    result["gamma"] = gamma;
    // Both identities hold only on the real axis.
    result["norm_identity_residual"] = f.eta == 0.0 ? json(norm_identity_residual(f.K, gv)) : json(nullptr);
    result["general_identity_residual"] = f.eta == 0.0 ? json(verify_general_identity(gv, S)) : json(nullptr);

    if (c.format == "csv") {
        std::ostringstream os;
        os << "label,re,im\n";
        for (std::size_t p = 0; p < gv.gamma.size(); ++p)
            os << p << ',' << format_double(gv.gamma[p].real()) << ',' << format_double(gv.gamma[p].imag()) << '\n';
        ex.artifacts.push_back({"main", path_or_stdout(c.out), os.str()});
    } else {
        ex.artifacts.push_back({"main", path_or_stdout(c.out), result.dump(2) + "\n"});
    }
    return ex;
}

// ---- verify ----------------------------------------------------------------

struct VerifyFlags {
    std::string suite;
    int cutoff = 4;
    int energies = 50;
};

Execution run_verify(const VerifyFlags& f, const Common& c) {
    Execution ex;
    ex.command = "verify";
    ex.parameters = {{"suite", f.suite}, {"cutoff", f.cutoff}, {"energies", f.energies}};
    if (f.cutoff < 0 || f.cutoff > kMaxFrechetCutoff) throw InvalidArgument("--cutoff must lie in [0, 6]");
    if (f.energies < 1) throw InvalidArgument("--energies must be >= 1");
    const auto results = run_verify_suite(f.suite, {f.cutoff, f.energies});
    const bool all_pass = std::all_of(results.begin(), results.end(), [](const auto& r) { return r.pass; });
    ex.exit_code = all_pass ? kOk : kCheckFailed;

    if (c.format == "csv") {
        std::ostringstream os;
        os << "check,residual,threshold,relation,pass,params\n";
        for (const auto& r : results)
            os << r.check << ',' << format_double(r.value) << ',' << format_double(r.threshold) << ','
               << (r.upper_bound ? "<" : ">") << ',' << (r.pass ? "true" : "false") << ','
               << csv_quote(r.params.dump()) << '\n';
        ex.artifacts.push_back({"main", path_or_stdout(c.out), os.str()});
    } else {
        json checks = json::array();
        for (const auto& r : results) checks.push_back(to_json(r));
        const json report{{"suite", f.suite}, {"pass", all_pass}, {"checks", checks}};
        ex.artifacts.push_back({"main", path_or_stdout(c.out), report.dump(2) + "\n"});
    }
    return ex;
}

// ---- simulate / dos --------------------------------------------------------

struct SimFlags {
    int K = 1, L = 1, depth = 12;
    std::size_t root = 0;
    std::optional<std::size_t> m;
    std::string A;
    double lambda = 0.0;
    double E = 0.0;
    double eta = 0.05;
    std::string disorder = "diagonal:1";
    std::size_t samples = 100;
    std::uint64_t seed = 0;
    std::string boundary = "wired";
    std::string estimand = "G";
    std::string grid;
};

void add_sim_options(CLI::App* cmd, SimFlags& f, bool with_energy) {
    cmd->add_option("--K", f.K)->capture_default_str();
    cmd->add_option("--L", f.L)->capture_default_str();
    cmd->add_option("--root", f.root, "root label")->capture_default_str();
    cmd->add_option("--depth", f.depth, "number of generations")->capture_default_str();
    cmd->add_option("--m", f.m, "strip width (defaults to the length of --A, else 1)");
    cmd->add_option("--A", f.A, "eigenvalues of the vertical operator, comma separated");
    cmd->add_option("--lambda", f.lambda, "disorder coupling")->capture_default_str();
    if (with_energy) cmd->add_option("--E", f.E, "real part of z")->required();
    cmd->add_option("--eta", f.eta, "imaginary part of z")->capture_default_str();
    cmd->add_option("--disorder", f.disorder, "kind:half_width with kind in diagonal, scalar, dense")
        ->capture_default_str();
    cmd->add_option("--samples", f.samples)->capture_default_str();
    cmd->add_option("--seed", f.seed)->capture_default_str();
    cmd->add_option("--boundary", f.boundary)->check(CLI::IsMember({"zero", "wired"}))->capture_default_str();
}

SimulationConfig make_config(const SimFlags& f) {
    SimulationConfig cfg;
    cfg.K = f.K;
    cfg.L = f.L;
    cfg.root_label = f.root;
    cfg.depth = f.depth;
    if (!f.A.empty()) {
        cfg.A = VerticalOperator(parse_number_list(f.A));
        if (f.m && *f.m != cfg.A.size()) throw InvalidArgument("--m does not match the number of --A values");
    } else {
        const std::size_t m = f.m.value_or(1);
        if (m < 1) throw InvalidArgument("--m must be >= 1");
        cfg.A = VerticalOperator(std::vector<double>(m, 0.0));
    }
    cfg.lambda = f.lambda;
    cfg.z = cplx(f.E, f.eta);
    cfg.disorder = parse_disorder(f.disorder, cfg.A.size());
    cfg.samples = f.samples;
    cfg.seed = f.seed;
    cfg.boundary = f.boundary == "zero" ? Boundary::Zero : Boundary::Wired;
    return cfg;
}

json config_json(const SimulationConfig& cfg) {
    return {{"K", cfg.K},
            {"L", cfg.L},
            {"root_label", cfg.root_label},
            {"depth", cfg.depth},
            {"m", cfg.m()},
            {"A", cfg.A.eigenvalues()},
            {"lambda", cfg.lambda},
            {"E", cfg.z.real()},
            {"eta", cfg.z.imag()},
            {"disorder", {{"kind", to_string(cfg.disorder.kind)}, {"half_width", cfg.disorder.half_width}}},
            {"samples", cfg.samples},
            {"seed", cfg.seed},
            {"boundary", cfg.boundary == Boundary::Wired ? "wired" : "zero"}};
}

Execution run_simulate(const SimFlags& f, const Common& c) {
    Execution ex;
    ex.command = "simulate";
    const SimulationConfig cfg = make_config(f);
    if (f.estimand != "G" && f.estimand != "absG2") throw InvalidArgument("--estimand must be G or absG2");
    ex.parameters = config_json(cfg);
    ex.parameters["estimand"] = f.estimand;
    ex.seed = cfg.seed;

    const Estimand which = f.estimand == "G" ? Estimand::G : Estimand::AbsG2;
    const McEstimate est = monte_carlo_expectation(cfg, which, resolve_threads(c.threads));
    if (est.degenerate > 0)
        ex.warnings.push_back(std::to_string(est.degenerate) + " degenerate samples were excluded");

    if (c.format == "csv") {
        std::ostringstream os;
        os << "j,k,mean_re,mean_im,stderr_re,stderr_im\n";
        for (Eigen::Index j = 0; j < est.mean.rows(); ++j)
            for (Eigen::Index k = 0; k < est.mean.cols(); ++k)
                os << j << ',' << k << ',' << format_double(est.mean(j, k).real()) << ','
                   << format_double(est.mean(j, k).imag()) << ',' << format_double(est.stderr_real(j, k)) << ','
                   << format_double(est.stderr_imag(j, k)) << '\n';
        ex.artifacts.push_back({"main", path_or_stdout(c.out), os.str()});
    } else {
        json result{{"config", config_json(cfg)},
                    {"estimand", f.estimand},
                    {"mean", complex_matrix_json(est.mean)},
                    {"stderr", {{"re", real_matrix_json(est.stderr_real)}, {"im", real_matrix_json(est.stderr_imag)}}},
                    {"samples_used", est.samples_used},
                    {"degenerate", est.degenerate}};
        if (which == Estimand::G) result["min_imag_eigenvalue"] = MatrixGreens{est.mean}.min_imag_eigenvalue();
        ex.artifacts.push_back({"main", path_or_stdout(c.out), result.dump(2) + "\n"});
    }
    return ex;
}

Execution run_dos(const SimFlags& f, const Common& c) {
    Execution ex;
    ex.command = "dos";
    const SimulationConfig cfg = make_config(f);
    const auto grid = parse_grid(f.grid);
    ex.parameters = config_json(cfg);
    ex.parameters.erase("E");
    ex.parameters["E_grid"] = f.grid;
    ex.seed = cfg.seed;

    const auto points = dos_estimate(cfg, grid, resolve_threads(c.threads));
    std::size_t degenerate = 0;
    for (const auto& p : points) degenerate += p.degenerate;
    if (degenerate > 0) ex.warnings.push_back(std::to_string(degenerate) + " degenerate samples were excluded");

    const auto m = static_cast<Eigen::Index>(cfg.m());
    if (c.format == "csv") {
        std::ostringstream os;
        os << 'E';
        for (Eigen::Index j = 0; j < m; ++j)
            for (Eigen::Index k = 0; k < m; ++k) os << ",density_" << j << k;
        for (Eigen::Index j = 0; j < m; ++j)
            for (Eigen::Index k = 0; k < m; ++k) os << ",stderr_" << j << k;
        os << ",degenerate\n";
        for (const auto& p : points) {
            os << format_double(p.E);
            for (Eigen::Index j = 0; j < m; ++j)
                for (Eigen::Index k = 0; k < m; ++k) os << ',' << format_double(p.density(j, k));
            for (Eigen::Index j = 0; j < m; ++j)
                for (Eigen::Index k = 0; k < m; ++k) os << ',' << format_double(p.standard_error(j, k));
            os << ',' << p.degenerate << '\n';
        }
        ex.artifacts.push_back({"main", path_or_stdout(c.out), os.str()});
    } else {
        json pts = json::array();
        for (const auto& p : points)
            pts.push_back({{"E", p.E},
                           {"density", real_matrix_json(p.density)},
                           {"stderr", real_matrix_json(p.standard_error)},
                           {"degenerate", p.degenerate}});
        json cfg_json = config_json(cfg);
        cfg_json.erase("E");
        const json result{{"config", cfg_json}, {"E_grid", f.grid}, {"points", pts}};
        ex.artifacts.push_back({"main", path_or_stdout(c.out), result.dump(2) + "\n"});
    }
    return ex;
}

// ---- replay ----------------------------------------------------------------

Execution run_replay(const std::string& manifest_path, const Common& c) {
    Execution ex;
    ex.command = "replay";
    ex.parameters = {{"manifest", manifest_path}};
    std::ifstream in(manifest_path);
    if (!in) throw InvalidArgument("cannot read manifest '" + manifest_path + "'");
    json manifest;
    try {
        manifest = json::parse(in);
    } catch (const json::exception& e) {
        throw InvalidArgument("manifest is not valid JSON: " + std::string(e.what()));
    }
    if (!manifest.contains("argv") || !manifest.contains("outputs"))
        throw InvalidArgument("manifest lacks argv or outputs");
    const auto args = manifest.at("argv").get<std::vector<std::string>>();
    if (!args.empty() && args.front() == "replay") throw InvalidArgument("cannot replay a replay");

    const Execution again = execute(args);
    bool all_match = again.exit_code == manifest.value("exit_code", 0);
    json outputs = json::array();
    for (const auto& recorded : manifest.at("outputs")) {
        const std::string role = recorded.at("role");
        const auto it = std::find_if(again.artifacts.begin(), again.artifacts.end(),
                                     [&](const Artifact& a) { return a.role == role; });
        const std::string replayed = it == again.artifacts.end() ? "" : sha256_hex(it->content);
        const bool match = replayed == recorded.at("sha256").get<std::string>();
        all_match = all_match && match;
        outputs.push_back({{"role", role}, {"recorded", recorded.at("sha256")}, {"replayed", replayed}, {"match", match}});
    }
    ex.exit_code = all_match ? kOk : kCheckFailed;
    const json report{{"manifest", manifest_path}, {"command", again.command}, {"match", all_match}, {"outputs", outputs}};
    ex.artifacts.push_back({"main", path_or_stdout(c.out), report.dump(2) + "\n"});
    return ex;
}

}  // namespace

Execution execute(const std::vector<std::string>& args) {
    CLI::App app{"Schrodinger operators on trees of finite cone type", "conetree"};
    app.require_subcommand(1, 1);
    app.set_version_flag("--version", CONETREE_VERSION);

    Common c_spec, c_greens, c_verify, c_sim, c_dos, c_replay;

    SpectrumFlags sf;
    auto* spectrum = app.add_subcommand("spectrum", "a.c. set as a union of intervals, with a discriminant trace");
    spectrum->add_option("--K", sf.K)->required();
    spectrum->add_option("--L", sf.L)->required();
    spectrum->add_option("--A", sf.A, "eigenvalues of the vertical operator, comma separated");
    spectrum->add_option("--grid", sf.grid, "trace grid lo:hi:n")->capture_default_str();
    spectrum->add_option("--trace", sf.trace, "also write the CSV trace here (json format)");
    add_common(spectrum, c_spec, "json");

    GreensFlags gf;
    auto* greens = app.add_subcommand("greens", "free root Green's functions at z = E + i eta");
    greens->add_option("--K", gf.K)->required();
    greens->add_option("--L", gf.L)->required();
    greens->add_option("--E", gf.E)->required();
    greens->add_option("--eta", gf.eta)->capture_default_str();
    add_common(greens, c_greens, "json");

    VerifyFlags vf;
    auto* verify = app.add_subcommand("verify", "numerical identity checks");
    verify->add_option("suite", vf.suite)->required()->check(CLI::IsMember({"identities", "frechet", "susy", "all"}));
    verify->add_option("--cutoff", vf.cutoff, "multi-index norm cutoff for the frechet suite")->capture_default_str();
    verify->add_option("--energies", vf.energies, "energies sampled by the frechet suite")->capture_default_str();
    add_common(verify, c_verify, "json");

    SimFlags simf;
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimate of E[G] or E[G^* G] at the root");
    add_sim_options(simulate, simf, true);
    simulate->add_option("--estimand", simf.estimand)->check(CLI::IsMember({"G", "absG2"}))->capture_default_str();
    add_common(simulate, c_sim, "json");

    SimFlags dosf;
    auto* dos = app.add_subcommand("dos", "density of states estimate on an energy grid");
    add_sim_options(dos, dosf, false);
    dos->add_option("--E-grid", dosf.grid, "lo:hi:n")->required();
    add_common(dos, c_dos, "csv");

    std::string manifest_path;
    auto* replay = app.add_subcommand("replay", "re-run a manifest and compare output digests");
    replay->add_option("path", manifest_path, "manifest to replay")->required();
    add_common(replay, c_replay, "json");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        const auto subs = app.get_subcommands();
        throw HelpRequested{subs.empty() ? app.help() : subs.front()->help()};
    } catch (const CLI::CallForVersion&) {
        throw HelpRequested{std::string(CONETREE_VERSION) + "\n"};
    } catch (const CLI::ParseError& e) {
        throw InvalidArgument(e.what());
    }

    const auto finish = [](Execution ex, const Common& c) {
        if (!c.manifest.empty()) ex.manifest_path = c.manifest;
        else if (!c.out.empty()) ex.manifest_path = c.out + ".manifest.json";
        return ex;
    };
    if (spectrum->parsed()) return finish(run_spectrum(sf, c_spec), c_spec);
    if (greens->parsed()) return finish(run_greens(gf, c_greens), c_greens);
    if (verify->parsed()) return finish(run_verify(vf, c_verify), c_verify);
    if (simulate->parsed()) return finish(run_simulate(simf, c_sim), c_sim);
    if (dos->parsed()) return finish(run_dos(dosf, c_dos), c_dos);
    return finish(run_replay(manifest_path, c_replay), c_replay);
}

json make_manifest(const std::vector<std::string>& args, const Execution& ex, double wall_seconds) {
    json outputs = json::array();
    for (const auto& a : ex.artifacts)
        outputs.push_back({{"role", a.role},
                           {"path", a.path ? json(*a.path) : json(nullptr)},
                           {"sha256", sha256_hex(a.content)},
                           {"bytes", a.content.size()}});
    return {{"tool", "conetree"},
            {"tool_version", CONETREE_VERSION},
            {"command", ex.command},
            {"argv", args},
            {"parameters", ex.parameters},
            {"seed", ex.seed ? json(*ex.seed) : json(nullptr)},
            {"exit_code", ex.exit_code},
            {"wall_time_seconds", wall_seconds},
            {"outputs", outputs}};
}

namespace {

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw InvalidArgument("cannot open '" + path + "' for writing");
    f << content;
    if (!f) throw InvalidArgument("failed writing '" + path + "'");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    try {
        const auto start = std::chrono::steady_clock::now();
        const Execution ex = execute(args);
        const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        for (const auto& w : ex.warnings) err << "warning: " << w << '\n';
        for (const auto& a : ex.artifacts) {
            if (a.path) write_file(*a.path, a.content);
            else out << a.content;
        }
        if (ex.manifest_path) write_file(*ex.manifest_path, make_manifest(args, ex, wall).dump(2) + "\n");
        return ex.exit_code;
    } catch (const HelpRequested& h) {
        out << h.text;
        return kOk;
    } catch (const InvalidArgument& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const DomainRejection& e) {
        err << "rejected: " << e.what() << '\n';
        return kDomainRejection;
    } catch (const NumericFailure& e) {
        err << "numeric failure: " << e.what() << '\n';
        return kNumericFailure;
    } catch (const std::exception& e) {
        err << "numeric failure: " << e.what() << '\n';
        return kNumericFailure;
    }
}

}  // namespace conetree::cli
