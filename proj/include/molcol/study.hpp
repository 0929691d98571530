#pragma once

#include "molcol/collocation.hpp"
#include "molcol/mollifier.hpp"
#include "molcol/system.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace molcol {

struct StudyConfig {
    std::string case_name = "poisson1d";
    int rp = 2;
    MollifierFamily mollifier = MollifierFamily::BSpline2;
    double kappa = 1.0;
    Scheme scheme = Scheme::Uniform;
    /// Interior points per cell for grid schemes; 0 picks the case default.
    int beta = 0;
    /// Quadrature degree for the gauss scheme; 0 picks the case default.
    int gamma = 0;
    /// Perturbation as a fraction of the spacing; negative picks 0.1 (1D) or 0.15 (2D).
    double sigma = -1.0;
    int replicates = 1;
    std::uint64_t seed = 1;
    int levels = 0;  // 0: case default
    /// Cells of the coarsest uniform 1D mesh (biharmonic1d).
    int base_cells = 8;
    std::string out;
    /// When set, per-level matrices and point sets are written here.
    std::string dump_dir;
};

struct LevelResult {
    int level = 0;
    std::size_t n_c = 0;
    double h = 0.0;
    std::size_t n_b = 0;
    std::size_t n_z = 0;
    int gamma = 0;
    double e_l2 = 0.0;
    double e_h1 = 0.0;
    double e_energy = 0.0;
    /// Mean and standard deviation of e_l2 over replicates.
    double mean = 0.0;
    double std = 0.0;
    std::vector<double> replicate_l2;
};

struct StudyResult {
    StudyConfig config;
    std::vector<LevelResult> levels;
    double rate_l2 = 0.0;
    double rate_h1 = 0.0;
    double rate_energy = 0.0;
};

/// Least-squares slope of log e against log h over the finite positive pairs.
double fit_rate(std::span<const double> h, std::span<const double> e);

/// Fills in case defaults for the zero/negative fields.
StudyConfig resolve_defaults(StudyConfig c);

/// Runs one refinement sequence. Errors are rethrown with the level prepended.
StudyResult run_study(const StudyConfig& config);

/// Single level: mesh, basis, points, solve, errors (replicate index selects
/// the random stream).
LevelResult run_level(const StudyConfig& config, int level, int replicate = 0);

/// Applies "key = value" lines ('#' starts a comment) on top of base.
StudyConfig parse_config(std::istream& is, StudyConfig base = {});
void apply_setting(StudyConfig& c, const std::string& key, const std::string& value);

void write_csv(std::ostream& os, const StudyResult& r);
void write_rates(std::ostream& os, const StudyResult& r);

}  // namespace molcol
