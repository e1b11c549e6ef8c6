#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "extmap/io.hpp"
#include "extmap/verify.hpp"

namespace {

using extmap::Complex;

extmap::Curve parse_curve(const std::string& spec) {
    std::string text = spec;
    if (!spec.empty() && spec.front() != '{') {
        std::ifstream in(spec);
        if (!in) throw std::invalid_argument("cannot open curve file: " + spec);
        std::stringstream buf;
        buf << in.rdbuf();
        text = buf.str();
    }
    return extmap::Curve::from_descriptor(nlohmann::json::parse(text));
}

struct Discretization {
    std::optional<int> n;
    int panels = 16;
    int gauss = 8;
    int refine = 0;
};

extmap::QuadratureMesh build_mesh(const extmap::Curve& curve, const Discretization& d) {
    if (curve.has_corners()) {
        if (d.n)
            throw std::invalid_argument(
                "curve has corners: use --panels/--gauss/--refine, not --n");
        extmap::QuadratureMesh mesh = extmap::panel_mesh(curve, d.panels, d.gauss);
        for (int i = 0; i < d.refine; ++i) mesh = extmap::refine_corners(mesh);
        return mesh;
    }
    if (!d.n) throw std::invalid_argument("smooth curve: choose the trapezoid size with --n");
    return extmap::trapezoid_mesh(curve, *d.n);
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << contents;
}

int cmd_solve(const std::string& curve_spec, const Discretization& disc,
              const std::string& out_path, const std::string& format) {
    const extmap::Curve curve = parse_curve(curve_spec);
    const extmap::QuadratureMesh mesh = build_mesh(curve, disc);
    const extmap::DensitySolution sol = extmap::solve_density(mesh);
    const extmap::BoundaryMap map = extmap::compute_boundary_map(sol);

    std::cout << "alpha1 = " << extmap::format_full(map.alpha1) << "\n"
              << "alpha0 = " << extmap::format_full(map.alpha0.real()) << " + "
              << extmap::format_full(map.alpha0.imag()) << "i\n"
              << "residual_norm = " << extmap::format_full(sol.residual_norm) << "\n";

    if (!out_path.empty()) {
        if (format == "json") {
            nlohmann::json doc = extmap::boundary_map_header(map);
            nlohmann::json rows = nlohmann::json::array();
            for (std::size_t j = 0; j < mesh.size(); ++j) {
                nlohmann::json r{{"t", mesh.nodes[j]},
                                 {"p", {mesh.p[j].real(), mesh.p[j].imag()}},
                                 {"theta", map.theta[j]},
                                 {"psi", {map.psi[j].real(), map.psi[j].imag()}}};
                if (map.theta_prime) r["theta_prime"] = (*map.theta_prime)[j];
                rows.push_back(std::move(r));
            }
            doc["nodes"] = std::move(rows);
            write_file(out_path, doc.dump(2) + "\n");
        } else {
            std::ostringstream csv;
            extmap::write_boundary_map_csv(map, csv);
            write_file(out_path, csv.str());
            write_file(out_path + ".json", extmap::boundary_map_header(map).dump(2) + "\n");
        }
    }
    return 0;
}

int cmd_errors(const std::string& curve_spec, const Discretization& disc, int samples) {
    const extmap::Curve curve = parse_curve(curve_spec);
    if (!extmap::has_analytic_reference(curve)) {
        std::cerr << "errors: no analytic reference for this curve family\n";
        return 1;
    }
    const extmap::QuadratureMesh mesh = build_mesh(curve, disc);
    const extmap::BoundaryMap map = extmap::compute_boundary_map(extmap::solve_density(mesh));
    std::cout << extmap::format_full(extmap::boundary_error(map, curve, samples)) << "\n";
    return 0;
}

int cmd_convergence(const std::string& curve_spec, const std::vector<int>& n_list,
                    int max_refinements, int panels, int gauss, int samples, int jobs,
                    const std::string& out_path, const std::string& format) {
    const extmap::Curve curve = parse_curve(curve_spec);
    extmap::StudyOptions opt;
    opt.n_values = n_list;
    opt.max_refinements = max_refinements;
    opt.base_panels_per_side = panels;
    opt.gauss_order = gauss;
    opt.samples = samples;
    opt.jobs = jobs;
    const extmap::ConvergenceReport report = extmap::convergence_study(curve, opt);

    std::ostringstream csv;
    extmap::write_report_csv(report, csv);
    if (out_path.empty()) {
        std::cout << csv.str();
    } else if (format == "json") {
        write_file(out_path, extmap::report_json(report).dump(2) + "\n");
    } else {
        write_file(out_path, csv.str());
        write_file(out_path + ".json", extmap::report_json(report).dump(2) + "\n");
    }

    bool any_ok = false;
    for (const auto& row : report.rows) any_ok = any_ok || row.ok;
    return any_ok ? 0 : 2;
}

int cmd_grid(const std::string& curve_spec, const Discretization& disc, int offsets, int rays,
             double near_factor, double far_factor, int points, const std::string& out_path) {
    const extmap::Curve curve = parse_curve(curve_spec);
    const extmap::QuadratureMesh mesh = build_mesh(curve, disc);
    const extmap::BoundaryMap map = extmap::compute_boundary_map(extmap::solve_density(mesh));

    double scale = 0.0;
    for (const Complex& p : mesh.p) scale = std::max(scale, std::abs(p));

    const double beta = curve.period();
    std::ostringstream csv;
    csv << "group,re_z,im_z,re_psi,im_psi,near_boundary\n";
    int group = 0;

    auto emit = [&](Complex z) {
        const extmap::PointValue v = extmap::eval_exterior(map, z);
        csv << group << ',' << extmap::format_full(z.real()) << ','
            << extmap::format_full(z.imag()) << ',' << extmap::format_full(v.value.real()) << ','
            << extmap::format_full(v.value.imag()) << ',' << (v.near_boundary ? 1 : 0) << '\n';
    };

    // offset curves: boundary shifted along the outward normal
    for (int c = 0; c < offsets; ++c) {
        const double frac = offsets == 1 ? 0.0 : static_cast<double>(c) / (offsets - 1);
        const double d = scale * (near_factor + (far_factor - near_factor) * frac);
        for (int k = 0; k < points; ++k) {
            const extmap::CurvePoint cp = curve.eval(beta * ((k + 0.5) / points));
            const Complex normal = Complex(0.0, -1.0) * cp.dp / std::abs(cp.dp);
            emit(cp.p + d * normal);
        }
        ++group;
    }
    // rays leaving the boundary outward
    for (int r = 0; r < rays; ++r) {
        const extmap::CurvePoint cp = curve.eval(beta * ((r + 0.5) / std::max(1, rays)));
        const Complex normal = Complex(0.0, -1.0) * cp.dp / std::abs(cp.dp);
        for (int k = 0; k < points; ++k) {
            const double d =
                scale * (near_factor + (far_factor - near_factor) * (k / std::max(1.0, points - 1.0)));
            emit(cp.p + d * normal);
        }
        ++group;
    }

    if (out_path.empty())
        std::cout << csv.str();
    else
        write_file(out_path, csv.str());
    return 0;
}

int cmd_faber_check(const std::string& curve_spec, const Discretization& disc, int m_max,
                    double threshold, int points, double radius_factor) {
    const extmap::Curve curve = parse_curve(curve_spec);
    const extmap::QuadratureMesh mesh = build_mesh(curve, disc);
    const extmap::BoundaryMap map = extmap::compute_boundary_map(extmap::solve_density(mesh));

    const double beta = curve.period();
    double max_diff = 0.0;
    for (int m = 1; m <= m_max; ++m) {
        for (int k = 0; k < points; ++k) {
            const Complex z0 = radius_factor * curve.point(beta * ((k + 0.5) / points));
            const Complex a = extmap::faber_dlp(map, m, z0).value;
            const Complex b = extmap::faber_oracle(map, m, z0);
            max_diff = std::max(max_diff, std::abs(a - b));
        }
    }
    std::cout << "max |faber_dlp - faber_oracle| = " << extmap::format_full(max_diff) << " ("
              << (max_diff <= threshold ? "pass" : "fail") << ", threshold "
              << extmap::format_full(threshold) << ")\n";
    return max_diff <= threshold ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exterior conformal maps of piecewise-smooth Jordan curves via a "
                 "second-kind double-layer integral equation"};
    app.require_subcommand(1);

    std::string curve_spec;
    Discretization disc;
    std::string out_path;
    std::string format = "csv";
    int samples = 36;
    int jobs = 1;

    auto add_common = [&](CLI::App* cmd, bool with_out) {
        cmd->add_option("--curve", curve_spec, "curve descriptor JSON (inline or file path)")
            ->required();
        cmd->add_option("--n", disc.n, "trapezoid points (smooth curves)");
        cmd->add_option("--panels", disc.panels, "base panels per side (cornered curves)");
        cmd->add_option("--gauss", disc.gauss, "Gauss order per panel");
        cmd->add_option("--refine", disc.refine, "corner refinement levels");
        if (with_out) {
            cmd->add_option("--out", out_path, "output path");
            cmd->add_option("--format", format, "csv|json")
                ->check(CLI::IsMember({"csv", "json"}));
        }
    };

    CLI::App* solve = app.add_subcommand("solve", "solve for the boundary map");
    add_common(solve, true);

    CLI::App* errors = app.add_subcommand("errors", "sup error against the analytic map");
    add_common(errors, false);
    errors->add_option("--samples", samples, "equispaced sample count");

    CLI::App* conv = app.add_subcommand("convergence", "error sweep over n / refinement level");
    std::vector<int> n_list;
    int max_refinements = 30;
    add_common(conv, true);
    conv->add_option("--n-list", n_list, "trapezoid sizes (default doubling 4..512)");
    conv->add_option("--levels", max_refinements, "refinement levels for cornered curves");
    conv->add_option("--samples", samples, "equispaced sample count");
    conv->add_option("--jobs", jobs, "worker threads for study rows");

    CLI::App* grid = app.add_subcommand("grid", "export exterior plot data (offset curves/rays)");
    int offsets = 8, rays = 0, grid_points = 200;
    double near_factor = 0.75, far_factor = 2.5;
    add_common(grid, true);
    grid->add_option("--offsets", offsets, "number of offset curves");
    grid->add_option("--rays", rays, "number of outward rays");
    grid->add_option("--near", near_factor, "nearest offset distance / curve scale");
    grid->add_option("--far", far_factor, "farthest offset distance / curve scale");
    grid->add_option("--points", grid_points, "samples per group");

    CLI::App* faber = app.add_subcommand("faber-check", "cross-check the two Faber evaluations");
    int m_max = 5, faber_points = 20;
    double threshold = 1e-8, radius_factor = 0.3;
    add_common(faber, false);
    faber->add_option("--m-max", m_max, "highest Faber degree");
    faber->add_option("--threshold", threshold, "pass/fail threshold");
    faber->add_option("--points", faber_points, "interior check points");
    faber->add_option("--radius-factor", radius_factor, "interior points at factor * boundary");

    CLI11_PARSE(app, argc, argv);

    try {
        if (samples < 4) throw std::invalid_argument("--samples must be >= 4");
        if (solve->parsed()) return cmd_solve(curve_spec, disc, out_path, format);
        if (errors->parsed()) return cmd_errors(curve_spec, disc, samples);
        if (conv->parsed())
            return cmd_convergence(curve_spec, n_list, max_refinements, disc.panels, disc.gauss,
                                   samples, jobs, out_path, format);
        if (grid->parsed())
            return cmd_grid(curve_spec, disc, offsets, rays, near_factor, far_factor, grid_points,
                            out_path);
        if (faber->parsed())
            return cmd_faber_check(curve_spec, disc, m_max, threshold, faber_points, radius_factor);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
