// Command-line front end: single-point observables, parameter sweeps,
// critical-point scans, brute-force verification suites, semiclassical
// stability reports, and Wigner-function grids.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include "pairlat/config.hpp"
#include "pairlat/mean_field.hpp"
#include "pairlat/moments.hpp"
#include "pairlat/oracle.hpp"
#include "pairlat/parallel.hpp"
#include "pairlat/semiclassics.hpp"
#include "pairlat/verification.hpp"
#include "pairlat/wigner.hpp"

using json = nlohmann::json;
using namespace pairlat;

namespace {

constexpr const char* kSchemaVersion = "pairlat-csv-1";

struct GlobalOpts {
    std::string config;
    std::string out;
    double tol = 1e-12;
    long max_terms = 2'000'000;
    int threads = 1;
    unsigned seed = 1;
    bool oracle = false;
    bool absolute_units = false;
};

MomentOptions moment_options(const GlobalOpts& g) {
    MomentOptions opt;
    opt.tol = g.tol;
    opt.series.tol = g.tol;
    opt.series.max_terms = g.max_terms;
    return opt;
}

// by default all energies in the file are multiples of U; the flag takes
// them as absolute numbers instead
ModelSpec load_spec(const GlobalOpts& g) {
    ModelSpec s = load_model_spec(g.config);
    if (!g.absolute_units) {
        const double u = s.big_u;
        s.delta *= u;
        s.kappa *= u;
        s.g *= u;
        s.lambda_nn *= u;
        if (s.m_override) *s.m_override *= u;
    }
    return s;
}

std::string git_revision() {
    namespace fs = std::filesystem;
    fs::path head = fs::path(".git") / "HEAD";
    std::ifstream in(head);
    if (!in) return "unknown";
    std::string line;
    std::getline(in, line);
    if (line.rfind("ref: ", 0) == 0) {
        std::ifstream ref(fs::path(".git") / line.substr(5));
        if (ref) std::getline(ref, line);
    }
    return line.empty() ? "unknown" : line.substr(0, 12);
}

void write_metadata(std::ostream& out, const GlobalOpts& g, const std::string& what) {
    out << "# schema=" << kSchemaVersion << " kind=" << what << "\n";
    out << "# revision=" << git_revision() << "\n";
    out << "# tol=" << g.tol << " max_terms=" << g.max_terms << " seed=" << g.seed << "\n";
    out << "# units=" << (g.absolute_units ? "absolute" : "U") << "\n";
}

std::ostream& open_out(std::ofstream& file, const GlobalOpts& g) {
    if (g.out.empty()) return std::cout;
    file.open(g.out);
    if (!file) throw std::runtime_error("cannot open output file: " + g.out);
    return file;
}

json observables_to_json(const ObservableSet& os) {
    json j;
    j["nbar"] = os.nbar;
    j["nbar_site"] = std::vector<double>(os.nbar_site.data(),
                                         os.nbar_site.data() + os.nbar_site.size());
    auto cmap = [](const std::map<int, Complex>& m) {
        json arr = json::array();
        for (const auto& [r, v] : m)
            arr.push_back({{"r", r}, {"re", v.real()}, {"im", v.imag()}});
        return arr;
    };
    j["one_particle"] = cmap(os.one_particle);
    j["pairing"] = cmap(os.pairing);
    json g2 = json::array();
    for (const auto& [r, v] : os.g2) g2.push_back({{"r", r}, {"value", v}});
    j["g2"] = g2;
    json g2avg = json::array();
    for (const auto& [r, v] : os.g2_avg) g2avg.push_back({{"r", r}, {"value", v}});
    j["g2_averaged"] = g2avg;
    if (os.has_g2_k) j["g2_k"] = os.g2_k;
    if (os.has_g2_phi) j["g2_phi"] = os.g2_phi;
    j["log_norm"] = os.norm_log;
    j["ref_site"] = os.ref_site;
    j["cutoff_used"] = os.cutoff_used;
    return j;
}

std::vector<int> default_displacements(const ModelSpec& s) {
    std::vector<int> r;
    const int reach = s.d >= 1 ? s.dims[0] / 2 : std::min(s.n - 1, 1);
    for (int i = 0; i <= reach; ++i) r.push_back(i);
    return r;
}

double set_param(ModelSpec& s, const std::string& name, double value) {
    if (name == "delta") return s.delta = value;
    if (name == "kappa") return s.kappa = value;
    if (name == "big_u") return s.big_u = value;
    if (name == "g_re") { s.g = Complex(value, s.g.imag()); return value; }
    if (name == "g_im") { s.g = Complex(s.g.real(), value); return value; }
    if (name == "lambda_re") { s.lambda_nn = Complex(value, s.lambda_nn.imag()); return value; }
    if (name == "lambda_im") { s.lambda_nn = Complex(s.lambda_nn.real(), value); return value; }
    throw std::invalid_argument("unknown sweep parameter: " + name);
}

struct Axis {
    std::string name;
    double start = 0.0, stop = 0.0;
    int count = 1;
    bool log = false;

    double at(int i) const {
        if (count <= 1) return start;
        if (log) {
            const double a = std::log(start), b = std::log(stop);
            return std::exp(a + (b - a) * i / (count - 1));
        }
        return start + (stop - start) * i / (count - 1);
    }
};

Axis parse_axis(const std::string& text) {
    Axis ax;
    std::istringstream in(text);
    std::string tok;
    std::vector<std::string> parts;
    while (std::getline(in, tok, ':')) parts.push_back(tok);
    if (parts.size() < 4) throw std::invalid_argument(
        "axis format: name:start:stop:count[:log], got " + text);
    ax.name = parts[0];
    ax.start = std::stod(parts[1]);
    ax.stop = std::stod(parts[2]);
    ax.count = std::stoi(parts[3]);
    if (ax.count < 1) throw std::invalid_argument("axis count must be >= 1");
    ax.log = parts.size() > 4 && parts[4] == "log";
    return ax;
}

// ---------------------------------------------------------------------------
// observables
// ---------------------------------------------------------------------------

int cmd_observables(const GlobalOpts& g, bool quartics) {
    const ModelSpec spec = load_spec(g);
    const DerivedScalars ds = derived_scalars(spec);
    const MomentOptions opt = moment_options(g);
    const PairingSpectrum ps = takagi(build_pairing_matrix(spec), ds.u);

    CorrelatorRequest req;
    req.displacements = default_displacements(spec);
    req.quartics = quartics;
    ObservableSet os;
    try {
        os = correlators(spec, ps, ds.delta_dl, req, opt);
    } catch (const ResonanceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        if (e.suggested_kappa > 0.0)
            std::cerr << "nearest safe loss: kappa >= " << e.suggested_kappa << "\n";
        return 1;
    }

    json j = observables_to_json(os);
    j["pcs_residual"] = pcs_residual(ps, spec.n, ds.delta_dl, 200, opt);
    try {
        j["max_pairing_concentration"] = max_pairing_concentration(ps, ds.delta_dl, opt);
    } catch (const std::domain_error&) {
        j["max_pairing_concentration"] = nullptr;
    }
    j["lambda_star"] = ps.lambda_star;
    j["multiplicity"] = ps.multiplicity;
    j["delta_dimensionless"] = {ds.delta_dl.real(), ds.delta_dl.imag()};

    if (g.oracle) {
        if (spec.n > 3) {
            std::cerr << "error: --oracle supports n <= 3\n";
            return 1;
        }
        const double nbar_est = os.nbar;
        const FockConfig fock = suggest_fock(spec, nbar_est, spec.n == 1 ? 50 : (spec.n == 2 ? 22 : 12));
        const SteadyStateOracle ss = steady_state(spec, fock);
        const OracleObservables oo = oracle_observables(spec, ss, req.displacements);
        json o;
        o["nbar"] = oo.nbar;
        o["truncation_indicator"] = ss.truncation_indicator;
        o["residual"] = ss.residual;
        json rows = json::array();
        for (const auto& [r, v] : oo.one_particle) {
            json row;
            row["r"] = r;
            row["one_particle_exact"] = {os.one_particle.at(r).real(), os.one_particle.at(r).imag()};
            row["one_particle_oracle"] = {v.real(), v.imag()};
            row["pairing_exact"] = {os.pairing.at(r).real(), os.pairing.at(r).imag()};
            row["pairing_oracle"] = {oo.pairing.at(r).real(), oo.pairing.at(r).imag()};
            rows.push_back(row);
        }
        o["rows"] = rows;
        j["oracle"] = o;
    }

    std::ofstream file;
    std::ostream& out = open_out(file, g);
    out << j.dump(2) << "\n";
    // terse key-value echo for the terminal when writing to a file
    if (!g.out.empty()) {
        std::cout << "nbar = " << os.nbar << "\n";
        if (os.has_g2_k) std::cout << "g2_k = " << os.g2_k << "\n";
        std::cout << "wrote " << g.out << "\n";
    }
    return 0;
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

int cmd_sweep(const GlobalOpts& g, const std::vector<std::string>& axis_specs, bool quartics,
              bool with_chi) {
    const ModelSpec base = load_spec(g);
    std::vector<Axis> axes;
    for (const auto& t : axis_specs) axes.push_back(parse_axis(t));
    if (axes.empty() || axes.size() > 2)
        throw std::invalid_argument("sweep needs one or two --axis definitions");

    const long rows = axes.size() == 2
                          ? static_cast<long>(axes[0].count) * axes[1].count
                          : axes[0].count;
    const MomentOptions opt = moment_options(g);
    const double scale = g.absolute_units ? 1.0 : base.big_u;

    struct Row {
        std::vector<double> params;
        double nbar = std::nan("");
        Complex pair_r1{std::nan(""), 0.0};
        Complex hop_r1{std::nan(""), 0.0};
        double g2_far = std::nan("");
        double g2_k = std::nan("");
        double g2_phi = std::nan("");
        double chi = std::nan("");
        long cutoff = 0;
        std::string error;
    };
    std::vector<Row> data(rows);

    parallel_for(rows, g.threads, [&](long idx) {
        Row& row = data[idx];
        ModelSpec spec = base;
        const int i0 = axes.size() == 2 ? static_cast<int>(idx / axes[1].count)
                                        : static_cast<int>(idx);
        row.params.push_back(axes[0].at(i0));
        set_param(spec, axes[0].name, axes[0].at(i0) * scale);
        if (axes.size() == 2) {
            const int i1 = static_cast<int>(idx % axes[1].count);
            row.params.push_back(axes[1].at(i1));
            set_param(spec, axes[1].name, axes[1].at(i1) * scale);
        }
        try {
            const DerivedScalars ds = derived_scalars(spec);
            const PairingSpectrum ps = takagi(build_pairing_matrix(spec), ds.u);
            CorrelatorRequest req;
            req.displacements = default_displacements(spec);
            req.quartics = quartics;
            req.averaged_g2 = false;
            const ObservableSet os = correlators(spec, ps, ds.delta_dl, req, opt);
            row.nbar = os.nbar;
            row.cutoff = os.cutoff_used;
            if (os.one_particle.count(1)) row.hop_r1 = os.one_particle.at(1);
            if (os.pairing.count(1)) row.pair_r1 = os.pairing.at(1);
            if (!os.g2.empty()) row.g2_far = os.g2.rbegin()->second;
            if (os.has_g2_k) row.g2_k = os.g2_k;
            if (os.has_g2_phi) row.g2_phi = os.g2_phi;
            if (with_chi) {
                const double h = 1e-4 * std::abs(spec.big_u);
                ModelSpec up = spec, dn = spec;
                up.delta += h;
                dn.delta -= h;
                const double nu = mean_density(ps, spec.n, derived_scalars(up).delta_dl, opt);
                const double nd = mean_density(ps, spec.n, derived_scalars(dn).delta_dl, opt);
                row.chi = (nu - nd) / (2.0 * h);
            }
        } catch (const std::exception& e) {
            row.error = e.what();
        }
    });

    std::ofstream file;
    std::ostream& out = open_out(file, g);
    write_metadata(out, g, "sweep");
    out << axes[0].name;
    if (axes.size() == 2) out << "," << axes[1].name;
    out << ",nbar,one_particle_r1_re,one_particle_r1_im,pairing_r1_re,pairing_r1_im,"
           "g2_far,g2_k,g2_phi,chi,cutoff\n";
    long failures = 0;
    std::ofstream sidecar;
    for (const Row& row : data) {
        for (size_t a = 0; a < row.params.size(); ++a)
            out << (a ? "," : "") << row.params[a];
        out << "," << row.nbar << "," << row.hop_r1.real() << "," << row.hop_r1.imag()
            << "," << row.pair_r1.real() << "," << row.pair_r1.imag() << "," << row.g2_far
            << "," << row.g2_k << "," << row.g2_phi << "," << row.chi << "," << row.cutoff
            << "\n";
        if (!row.error.empty()) {
            ++failures;
            if (!sidecar.is_open() && !g.out.empty()) sidecar.open(g.out + ".errors.log");
            (sidecar.is_open() ? sidecar : std::cerr)
                << "row";
            for (double p : row.params) (sidecar.is_open() ? sidecar : std::cerr) << " " << p;
            (sidecar.is_open() ? sidecar : std::cerr) << ": " << row.error << "\n";
        }
    }
    if (failures > 0) {
        std::cerr << failures << " of " << rows << " grid points failed\n";
        return 2;
    }
    return 0;
}

// ---------------------------------------------------------------------------
// critical
// ---------------------------------------------------------------------------

int cmd_critical(const GlobalOpts& g, const std::vector<int>& n_list,
                 const std::string& kappa_axis_text, double delta_lo, double delta_hi,
                 int delta_grid) {
    const ModelSpec base = load_spec(g);
    if (base.d != 0) throw std::invalid_argument("critical: requires a d = 0 model");
    const MomentOptions opt = moment_options(g);
    const double uu = std::abs(base.big_u);

    const CriticalPoint cp = critical_point(base.big_u, base.g);
    const Axis kax = parse_axis("kappa:" + kappa_axis_text);

    struct Cell {
        double kappa = 0.0;
        std::vector<double> chimax;
    };
    std::vector<Cell> table(kax.count);

    std::vector<std::pair<int, int>> jobs;
    for (int i = 0; i < kax.count; ++i)
        for (size_t j = 0; j < n_list.size(); ++j) jobs.emplace_back(i, static_cast<int>(j));
    for (int i = 0; i < kax.count; ++i) {
        table[i].kappa = kax.at(i) * uu;
        table[i].chimax.assign(n_list.size(), 0.0);
    }
    parallel_for(static_cast<long>(jobs.size()), g.threads, [&](long idx) {
        const auto [i, j] = jobs[idx];
        ModelSpec spec = base;
        spec.kappa = table[i].kappa;
        spec.n = n_list[j];
        const PairingSpectrum ps = takagi(build_pairing_matrix(spec), spec.u());
        const auto nbar_of = [&](double delta) {
            ModelSpec at = spec;
            at.delta = delta;
            return mean_density(ps, spec.n, derived_scalars(at).delta_dl, opt);
        };
        const SusceptibilityPoint sp =
            susceptibility_max(nbar_of, delta_lo * uu, delta_hi * uu, delta_grid,
                               1e-4 * uu);
        table[i].chimax[j] = sp.chi_max;
    });

    // a kappa row "diverges" when chi_max keeps growing near-linearly with N
    const auto diverging = [&](const Cell& c) {
        const size_t last = n_list.size() - 1;
        const double growth = c.chimax[last] / std::max(1e-300, c.chimax[last - 1]);
        const double nratio = static_cast<double>(n_list[last]) / n_list[last - 1];
        return growth > 0.5 * nratio;
    };
    double kappa_c = 0.0;
    for (const Cell& c : table)
        if (diverging(c)) kappa_c = std::max(kappa_c, c.kappa);

    // exponent fit: chi_max(N_max) ~ tau^gamma above the mean-field cusp
    std::vector<double> log_tau, log_chi;
    for (const Cell& c : table) {
        const double tau = (c.kappa - cp.kappa_star) / cp.kappa_star;
        if (tau > 0.02 && !diverging(c)) {
            log_tau.push_back(std::log(tau));
            log_chi.push_back(std::log(c.chimax.back()));
        }
    }
    double gamma = std::nan("");
    if (log_tau.size() >= 3) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (size_t i = 0; i < log_tau.size(); ++i) {
            sx += log_tau[i];
            sy += log_chi[i];
            sxx += log_tau[i] * log_tau[i];
            sxy += log_tau[i] * log_chi[i];
        }
        const double n = static_cast<double>(log_tau.size());
        gamma = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    }

    std::ofstream file;
    std::ostream& out = open_out(file, g);
    write_metadata(out, g, "critical");
    out << "# mean_field_kappa_star=" << cp.kappa_star
        << " mean_field_delta_star=" << cp.delta_star << "\n";
    out << "# exact_kappa_c_estimate=" << kappa_c << " fitted_gamma=" << gamma << "\n";
    out << "kappa";
    for (int n : n_list) out << ",chimax_n" << n;
    out << ",diverging\n";
    for (const Cell& c : table) {
        out << c.kappa;
        for (double v : c.chimax) out << "," << v;
        out << "," << (diverging(c) ? 1 : 0) << "\n";
    }
    return 0;
}

// ---------------------------------------------------------------------------
// semiclassics
// ---------------------------------------------------------------------------

int cmd_semiclassics(const GlobalOpts& g) {
    const ModelSpec spec = load_spec(g);
    const PairingSpectrum ps = takagi(build_pairing_matrix(spec), spec.u());

    json j;
    j["lambda"] = std::vector<double>(ps.lambda.data(), ps.lambda.data() + ps.lambda.size());
    j["multiplicity"] = ps.multiplicity;
    const auto sp = stable_sphere(spec, ps);
    if (sp) {
        j["stable_sphere"] = {{"radius", sp->radius},
                              {"theta", sp->theta},
                              {"multiplicity", sp->multiplicity},
                              {"minus_root_radius", sp->minus_exists ? sp->radius_minus : -1.0}};
        Eigen::VectorXd dir = Eigen::VectorXd::Zero(ps.multiplicity);
        dir(0) = 1.0;
        const auto fp = ring_fixed_point(spec, ps, 0, dir);
        if (fp) {
            j["fixed_point_residual"] = fixed_point_residual(spec, ps, fp->beta);
            const auto closed = stability_eigenvalues_closed(spec, ps, *fp);
            const auto numeric = stability_eigenvalues_numeric(spec, ps, fp->beta);
            j["spectrum_distance"] = spectrum_distance(closed, numeric);
            json eig = json::array();
            for (const Complex& e : closed) eig.push_back({e.real(), e.imag()});
            j["eigenvalues"] = eig;
        }
    } else {
        j["stable_sphere"] = nullptr;
        FixedPoint origin{VectorXc::Zero(spec.n), 0.0, 0.0, 0.0};
        const auto closed = stability_eigenvalues_closed(spec, ps, origin);
        json eig = json::array();
        for (const Complex& e : closed) eig.push_back({e.real(), e.imag()});
        j["origin_eigenvalues"] = eig;
    }

    std::ofstream file;
    std::ostream& out = open_out(file, g);
    out << j.dump(2) << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// wigner-grid
// ---------------------------------------------------------------------------

int cmd_wigner_grid(const GlobalOpts& g, int mode, double radius, int points) {
    const ModelSpec spec = load_spec(g);
    const DerivedScalars ds = derived_scalars(spec);
    const PairingSpectrum ps = takagi(build_pairing_matrix(spec), ds.u);
    const MomentOptions opt = moment_options(g);
    const WignerContext ctx = make_wigner_context(spec, ps, ds.delta_dl, opt);
    if (mode < 0 || mode >= spec.n) throw std::invalid_argument("wigner-grid: bad mode index");

    std::vector<double> values(static_cast<size_t>(points) * points);
    const double h = 2.0 * radius / (points - 1);
    parallel_for(static_cast<long>(points) * points, g.threads, [&](long idx) {
        const int ix = static_cast<int>(idx / points);
        const int iy = static_cast<int>(idx % points);
        VectorXc alpha = VectorXc::Zero(spec.n);
        alpha(mode) = Complex(-radius + ix * h, -radius + iy * h);
        values[idx] = wigner_at(ctx, alpha);
    });

    std::ofstream file;
    std::ostream& out = open_out(file, g);
    write_metadata(out, g, "wigner-grid");
    out << "re_alpha,im_alpha,w\n";
    for (int ix = 0; ix < points; ++ix)
        for (int iy = 0; iy < points; ++iy)
            out << -radius + ix * h << "," << -radius + iy * h << ","
                << values[static_cast<size_t>(ix) * points + iy] << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// oracle-check
// ---------------------------------------------------------------------------

int cmd_oracle_check(const GlobalOpts& g, int draws) {
    SuiteOptions sopt;
    sopt.seed = g.seed;
    sopt.draws = draws;
    sopt.threads = g.threads;
    sopt.tol_floor = std::max(1e-7, g.tol);
    const std::vector<SuiteCheck> checks = run_equivalence_suite(sopt);

    int failures = 0;
    for (const SuiteCheck& c : checks) {
        const bool ok = c.pass();
        std::cout << (ok ? "PASS" : "FAIL") << "  " << c.name << ": "
                  << (c.lower_bound ? "min" : "worst") << "=" << c.worst
                  << (c.lower_bound ? " required>=" : " tol=") << c.tolerance
                  << " samples=" << c.samples << "\n";
        if (!ok) ++failures;
    }
    std::cout << (failures == 0 ? "all checks passed" : "SUITE FAILED") << " (seed=" << g.seed
              << ", draws=" << draws << ")\n";
    return failures == 0 ? 0 : 1;
}

}  // namespace



int main(int argc, char** argv) {
    CLI::App app{"exact steady states of two-photon-driven dissipative bosonic lattices"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand

    GlobalOpts g;
    app.add_option("--config", g.config, "model configuration file (TOML subset)");
    app.add_option("--out", g.out, "output path (stdout when empty)");
    app.add_option("--tol", g.tol, "series tolerance")->capture_default_str();
    app.add_option("--max-terms", g.max_terms, "series term budget")->capture_default_str();
    app.add_option("--threads", g.threads, "worker threads")->capture_default_str();
    app.add_option("--seed", g.seed, "random seed for draw-based commands")
        ->capture_default_str();
    app.add_flag("--oracle", g.oracle, "attach truncated-Fock comparison columns (n <= 3)");
    app.add_flag("--absolute-units", g.absolute_units,
                 "config energies are absolute, not multiples of U");

    auto* obs = app.add_subcommand("observables", "single-point observable report (JSON)");
    bool obs_quartics = true;
    obs->add_flag("--quartics,!--no-quartics", obs_quartics,
                  "include density-density correlators");

    auto* sweep = app.add_subcommand("sweep", "grid sweep to CSV");
    std::vector<std::string> axis_specs;
    bool sweep_quartics = false, sweep_chi = false;
    sweep->add_option("--axis", axis_specs, "axis as name:start:stop:count[:log]")
        ->required()
        ->expected(1, 2);
    sweep->add_flag("--quartics", sweep_quartics, "include density-density correlators");
    sweep->add_flag("--chi", sweep_chi, "finite-difference susceptibility column");

    auto* crit = app.add_subcommand("critical", "susceptibility scan and critical point");
    std::vector<int> n_list{250, 500, 1000, 2000};
    std::string kappa_axis = "1.05:3.0:12:log";
    double delta_lo = 0.0, delta_hi = 8.0;
    int delta_grid = 240;
    crit->add_option("--nlist", n_list, "system sizes");
    crit->add_option("--kappa-axis", kappa_axis, "start:stop:count[:log], units of kappa_star");
    crit->add_option("--delta-lo", delta_lo, "detuning window low, units of U");
    crit->add_option("--delta-hi", delta_hi, "detuning window high, units of U");
    crit->add_option("--delta-grid", delta_grid, "detuning grid points");

    auto* orc = app.add_subcommand("oracle-check", "randomized equivalence suite (n <= 3)");
    int draws = 20;
    orc->add_option("--draws", draws, "random parameter sets")->capture_default_str();

    auto* semi = app.add_subcommand("semiclassics", "fixed points and stability (JSON)");

    auto* wg = app.add_subcommand("wigner-grid", "wigner function on a phase-space grid");
    int wg_mode = 0, wg_points = 101;
    double wg_radius = 3.0;
    wg->add_option("--mode", wg_mode, "mode index carrying the grid");
    wg->add_option("--radius", wg_radius, "grid half-width");
    wg->add_option("--points", wg_points, "points per axis");

    CLI11_PARSE(app, argc, argv);

    try {
        if (obs->parsed()) return cmd_observables(g, obs_quartics);
        if (sweep->parsed()) return cmd_sweep(g, axis_specs, sweep_quartics, sweep_chi);
        if (crit->parsed())
            return cmd_critical(g, n_list, kappa_axis.substr(0), delta_lo, delta_hi,
                                delta_grid);
        if (orc->parsed()) return cmd_oracle_check(g, draws);
        if (semi->parsed()) return cmd_semiclassics(g);
        if (wg->parsed()) return cmd_wigner_grid(g, wg_mode, wg_radius, wg_points);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
