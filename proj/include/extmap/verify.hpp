#pragma once

#include <limits>
#include <string>

#include "extmap/boundary_map.hpp"

namespace extmap {

/// True for circle, ellipse und cassini curves (closed-form exterior maps).
bool has_analytic_reference(const Curve& curve);

/// Exact boundary value of the exterior map: circle p/r, ellipse e^{it},
/// cassini (p(t)^2 - 1)^{1/2}/a with the square-root branch tracked
/// continuously from Psi(p(0)) = 1. Throws for polygons.
Complex analytic_boundary_map(const Curve& curve, double t);

/// Exact capacity coefficient where known: 1/r, 2/(a+1), 1/a.
std::optional<double> analytic_alpha1(const Curve& curve);

/// Sup over parameter-equispaced samples of |computed - analytic| boundary
/// map values; off-node values through the interpolation pipeline.
double boundary_error(const BoundaryMap& map, const Curve& curve, int samples = 36);

struct ConvergenceRow {
    int n_or_level = 0;
    double sup_error = std::numeric_limits<double>::quiet_NaN();
    double alpha1_error = std::numeric_limits<double>::quiet_NaN();
    double runtime_seconds = 0.0;
    double condition_estimate = 0.0;
    double corner_symmetry = std::numeric_limits<double>::quiet_NaN();
    bool reference_row = false;  // deepest level of a self-convergence study
    bool ok = true;
    std::string message;
};

struct ConvergenceReport {
    nlohmann::json curve;
    bool self_convergence = false;
    int sample_count = 36;
    std::vector<ConvergenceRow> rows;  // ordered by increasing n / level
};

struct StudyOptions {
    std::vector<int> n_values;      // trapezoid sweeps (smooth curves)
    int max_refinements = 30;       // panel sweeps (curves with corners)
    int base_panels_per_side = 16;
    int gauss_order = 8;
    int samples = 36;
    int jobs = 1;
};

/// Runs solve -> recover -> error per row. Smooth curves sweep n against the
/// analytic reference; cornered curves sweep refinement levels against the
/// deepest level (self-convergence) and record the corner-symmetry metric.
/// Per-row failures are recorded in the row, not thrown.
ConvergenceReport convergence_study(const Curve& curve, const StudyOptions& opt);

/// Independent contour-integral evaluation of the m-th Faber polynomial,
///   P_m(z0) = (1/2pi i) sum_j w_j psi_j^m p'_j / (p_j - z0),  m >= 1.
Complex faber_oracle(const BoundaryMap& map, int m, Complex z0);

/// For an origin-centered axis-aligned square: maximum deviation of the
/// corner-image angles (one-sided limits of theta along the adjacent panels)
/// from the symmetric eighth roots, combined with the quarter-turn node
/// symmetry check theta(t + side) - theta(t) = pi/2.
double square_corner_symmetry(const BoundaryMap& map);

/// CSV columns: n_or_level, sup_error, alpha1_error, condition_estimate,
/// corner_symmetry. Runtimes stay in the JSON document so identical configs
/// produce byte-identical CSV.
void write_report_csv(const ConvergenceReport& report, std::ostream& out);

nlohmann::json report_json(const ConvergenceReport& report);

}  // namespace extmap
