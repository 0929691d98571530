#include "molcol/study.hpp"

#include "molcol/mesh.hpp"
#include "molcol/problems.hpp"
#include "molcol/random.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace molcol {

double fit_rate(std::span<const double> h, std::span<const double> e) {
    if (h.size() != e.size()) throw std::invalid_argument("fit_rate: size mismatch");
    std::vector<double> x, y;
    for (std::size_t i = 0; i < h.size(); ++i) {
        if (!std::isfinite(h[i]) || !std::isfinite(e[i])) continue;
        if (h[i] <= 0.0 || e[i] <= 0.0) throw std::invalid_argument("fit_rate: non-positive value");
        x.push_back(std::log(h[i]));
        y.push_back(std::log(e[i]));
    }
    if (x.size() < 2) throw std::invalid_argument("fit_rate: need at least two finite pairs");
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    if (sxx == 0.0) throw std::invalid_argument("fit_rate: all h equal");
    return sxy / sxx;
}

StudyConfig resolve_defaults(StudyConfig c) {
    const ProblemCase p = make_problem(c.case_name);
    if (c.rp < 0) throw std::invalid_argument("rp must be >= 0");
    if (c.replicates < 1) throw std::invalid_argument("replicates must be >= 1");
    if (c.beta == 0) {
        if (c.case_name == "poisson1d") c.beta = 6;
        else if (c.case_name == "biharmonic1d") c.beta = c.rp <= 5 ? 8 : 10;
        else c.beta = 16;
    }
    if (c.beta < 1) throw std::invalid_argument("beta must be >= 1");
    if (c.gamma == 0) {
        if (c.case_name == "plate_hole") c.gamma = c.rp + 2;
        else if (c.case_name == "plate_bending") c.gamma = 7;
        else if (p.dim() == 1 && c.scheme == Scheme::Gauss) c.gamma = 2 * c.beta - 1;  // beta points per cell
    }
    if (c.sigma < 0.0) c.sigma = p.dim() == 1 ? 0.1 : 0.15;
    if (c.levels == 0) c.levels = c.case_name == "biharmonic1d" ? 3 : p.dim() == 1 ? 4 : 3;
    if (c.scheme != Scheme::QuasiRandom) c.replicates = 1;
    return c;
}

namespace {

Mesh level_mesh(const StudyConfig& c, int level) {
    if (c.case_name == "poisson1d") {
        Mesh m = intervals_1d({0.0, 0.15, 0.35, 0.5, 0.65, 0.85, 1.0});
        for (int k = 0; k < level; ++k) m = bisect_1d(m);
        return m;
    }
    if (c.case_name == "biharmonic1d") return uniform_intervals_1d(0.0, 1.0, c.base_cells << level);
    if (c.case_name == "plate_hole") return quarter_plate_hole_mesh(level);
    const std::size_t n = std::size_t{16} << (2 * level);
    const auto seeds = quasi_uniform_seeds(n, Point(0, 0), Point(1, 1), c.seed * 7919 + static_cast<std::uint64_t>(level));
    return voronoi_2d(seeds, Point(0, 0), Point(1, 1));
}

std::size_t grid_per_axis(const ProblemCase& p, const StudyConfig& c, std::size_t n_c) {
    const double total = static_cast<double>(c.beta) * static_cast<double>(n_c);
    return p.dim() == 1 ? static_cast<std::size_t>(total) : static_cast<std::size_t>(std::ceil(std::sqrt(total)));
}

std::vector<BoundaryPoint> boundary_for(const ProblemCase& p, const Mesh& mesh, std::size_t n_interior) {
    if (p.dim() == 1) return box_boundary_points(p.domain, 2, p.bc);
    if (p.domain.is_box()) {
        const auto per_edge = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n_interior))));
        return box_boundary_points(p.domain, std::max<std::size_t>(per_edge, 2), p.bc);
    }
    // Segments as long as the cell edges.
    const double seg = std::sqrt(mesh.domain.box_measure() / static_cast<double>(mesh.size()));
    return gauss_boundary_points(p.domain, seg, 8, p.bc);
}

struct Setup {
    ProblemCase problem;
    Mesh mesh;
    std::shared_ptr<const BasisSet> basis;
};

Setup make_setup(const StudyConfig& c, int level) {
    Setup s{make_problem(c.case_name), level_mesh(c, level), nullptr};
    const double h_m = mollifier_width(s.mesh, c.kappa);
    s.basis = std::make_shared<const BasisSet>(pad_ghost(s.mesh, h_m), Mollifier(c.mollifier, h_m, s.problem.dim()), c.rp);
    return s;
}

CollocationSet make_points(const StudyConfig& c, const Setup& s, int level, int replicate, int gamma) {
    CollocationSet pts;
    switch (c.scheme) {
        case Scheme::Uniform:
            pts.interior = uniform_points(s.problem.domain, grid_per_axis(s.problem, c, s.mesh.size()));
            break;
        case Scheme::QuasiRandom: {
            const std::uint64_t stream = (static_cast<std::uint64_t>(level) << 32) | static_cast<std::uint64_t>(replicate);
            pts.interior = quasirandom_points(s.problem.domain, grid_per_axis(s.problem, c, s.mesh.size()), c.sigma,
                                              c.seed, stream);
            break;
        }
        case Scheme::Gauss:
            pts.interior = gauss_points(s.mesh, gamma);
            break;
    }
    pts.boundary = boundary_for(s.problem, s.mesh, pts.interior.size());
    return pts;
}

// Smallest degree from r_p + 2 up whose point count reaches the basis size.
int first_counting_gamma(const StudyConfig& c, const Setup& s) {
    for (int g = std::min(c.rp + 2, kMaxTriangleDegree); g <= kMaxTriangleDegree; ++g)
        if (make_points(c, s, 0, 0, g).size() >= s.basis->size()) return g;
    return kMaxTriangleDegree;
}

void dump_level(const StudyConfig& c, int level, const CollocationSystem& sys, const CollocationSet& pts,
                const Solution& sol) {
    namespace fs = std::filesystem;
    fs::create_directories(c.dump_dir);
    const std::string stem = c.dump_dir + "/level" + std::to_string(level);
    std::ofstream(stem + "_C.txt") << [&] { std::ostringstream o; write_matrix(o, sys.C); return o.str(); }();
    std::ofstream(stem + "_s.txt") << [&] { std::ostringstream o; write_vector(o, sys.s); return o.str(); }();
    std::ofstream(stem + "_u.txt") << [&] { std::ostringstream o; write_vector(o, sol.u); return o.str(); }();
    std::ofstream(stem + "_points.csv") << [&] { std::ostringstream o; write_points_csv(o, pts); return o.str(); }();
}

}  // namespace

LevelResult run_level(const StudyConfig& config, int level, int replicate) {
    const StudyConfig c = resolve_defaults(config);
    const Setup s = make_setup(c, level);
    LevelResult r;
    r.level = level;
    r.n_c = s.mesh.interior_count();
    r.h = s.problem.dim() == 1 ? s.mesh.max_interior_h() : s.mesh.h_avg;
    r.n_b = s.basis->size() * static_cast<std::size_t>(s.problem.fields);

    // An automatic gauss degree is raised until the system has full rank.
    const bool auto_gamma = c.scheme == Scheme::Gauss && c.gamma == 0;
    r.gamma = c.scheme != Scheme::Gauss ? 0 : auto_gamma ? first_counting_gamma(c, s) : c.gamma;
    CollocationSet pts;
    CollocationSystem sys;
    Solution sol;
    for (;;) {
        pts = make_points(c, s, level, replicate, r.gamma);
        sys = assemble(s.problem, *s.basis, pts);
        try {
            sol = solve(sys, s.basis);
            break;
        } catch (const RankDeficientError&) {
            if (!auto_gamma || r.gamma >= kMaxTriangleDegree) throw;
            ++r.gamma;
        }
    }
    r.n_z = pts.size();
    if (!c.dump_dir.empty()) dump_level(c, level, sys, pts, sol);
    const auto where = pts.locations();
    const ErrorNorms e = compute_errors(s.problem, sol, where);
    r.e_l2 = e.l2;
    r.e_h1 = e.h1;
    r.e_energy = e.energy;
    r.mean = e.l2;
    r.replicate_l2 = {e.l2};
    return r;
}

StudyResult run_study(const StudyConfig& config) {
    StudyResult out;
    out.config = resolve_defaults(config);
    const StudyConfig& c = out.config;
    for (int level = 0; level < c.levels; ++level) {
        try {
            LevelResult agg;
            double s_h1 = 0.0, s_en = 0.0;
            for (int rep = 0; rep < c.replicates; ++rep) {
                LevelResult r = run_level(c, level, rep);
                if (rep == 0) {
                    agg = r;
                    agg.replicate_l2.clear();
                }
                agg.replicate_l2.push_back(r.e_l2);
                s_h1 += r.e_h1;
                s_en += r.e_energy;
            }
            const double n = static_cast<double>(c.replicates);
            const auto& v = agg.replicate_l2;
            agg.mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
            double var = 0.0;
            for (double x : v) var += (x - agg.mean) * (x - agg.mean);
            agg.std = c.replicates > 1 ? std::sqrt(var / (n - 1)) : 0.0;
            agg.e_l2 = agg.mean;
            agg.e_h1 = s_h1 / n;
            agg.e_energy = s_en / n;
            out.levels.push_back(std::move(agg));
        } catch (const std::exception& ex) {
            throw std::runtime_error("level " + std::to_string(level) + ": " + ex.what());
        }
    }
    std::vector<double> h, l2, h1, en;
    for (const auto& r : out.levels) {
        h.push_back(r.h);
        l2.push_back(r.e_l2);
        h1.push_back(r.e_h1);
        en.push_back(r.e_energy);
    }
    const double nan = std::numeric_limits<double>::quiet_NaN();
    auto rate = [&](const std::vector<double>& e) {
        try {
            return fit_rate(h, e);
        } catch (const std::invalid_argument&) {
            return nan;
        }
    };
    out.rate_l2 = rate(l2);
    out.rate_h1 = rate(h1);
    out.rate_energy = rate(en);
    return out;
}

void apply_setting(StudyConfig& c, const std::string& key, const std::string& value) {
    auto to_int = [&] {
        std::size_t pos = 0;
        const int v = std::stoi(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("bad integer for " + key + ": " + value);
        return v;
    };
    auto to_double = [&] {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("bad number for " + key + ": " + value);
        return v;
    };
    if (key == "case") {
        make_problem(value);
        c.case_name = value;
    } else if (key == "rp") c.rp = to_int();
    else if (key == "mollifier") c.mollifier = parse_mollifier_family(value);
    else if (key == "kappa") c.kappa = to_double();
    else if (key == "scheme") c.scheme = parse_scheme(value);
    else if (key == "beta") c.beta = to_int();
    else if (key == "gamma") c.gamma = to_int();
    else if (key == "sigma") c.sigma = to_double();
    else if (key == "replicates") c.replicates = to_int();
    else if (key == "seed") c.seed = static_cast<std::uint64_t>(std::stoull(value));
    else if (key == "levels") c.levels = to_int();
    else if (key == "base_cells") c.base_cells = to_int();
    else if (key == "out") c.out = value;
    else if (key == "dump_dir") c.dump_dir = value;
    else throw std::invalid_argument("unknown config key '" + key + "'");
}

StudyConfig parse_config(std::istream& is, StudyConfig base) {
    std::string line;
    int lineno = 0;
    auto trim = [](std::string s) {
        const auto a = s.find_first_not_of(" \t\r");
        const auto b = s.find_last_not_of(" \t\r");
        return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    while (std::getline(is, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key=value");
        apply_setting(base, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return base;
}

void write_csv(std::ostream& os, const StudyResult& r) {
    os << "level,n_c,h,n_b,n_z,e_L2,e_H1,e_energy,mean,std\n";
    os.precision(10);
    for (const auto& l : r.levels) {
        os << l.level << ',' << l.n_c << ',' << l.h << ',' << l.n_b << ',' << l.n_z << ',' << l.e_l2 << ',' << l.e_h1
           << ',';
        if (std::isfinite(l.e_energy)) os << l.e_energy;
        os << ',' << l.mean << ',' << l.std << '\n';
    }
}

void write_rates(std::ostream& os, const StudyResult& r) {
    const auto& c = r.config;
    os << "case " << c.case_name << ", r_p " << c.rp << ", mollifier " << to_string(c.mollifier) << ", kappa "
       << c.kappa << ", scheme " << to_string(c.scheme) << ", beta " << c.beta << ", gamma " << c.gamma
       << ", replicates " << c.replicates << ", seed " << c.seed << " (" << CounterRng::name() << ")\n";
    os.precision(4);
    os << std::fixed;
    os << "rate L2     " << r.rate_l2 << '\n';
    os << "rate H1     " << r.rate_h1 << '\n';
    if (std::isfinite(r.rate_energy)) os << "rate energy " << r.rate_energy << '\n';
}

}  // namespace molcol
