// Command-line front end: batch experiments over measures and zero sets,
// emitting deterministic CSV reports plus a manifest per run.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "sublog/counterexample.hpp"
#include "sublog/io.hpp"
#include "sublog/metrics.hpp"
#include "sublog/pipeline.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace sublog;

namespace {

constexpr const char* kVersion = "0.1.0";

struct CommonArgs {
    std::string input;
    std::string psi_spec = "log_e_r";
    std::string r_grid = "16,64,256,1024,4096";
    std::string out_dir = "sublog_out";
    std::string config_path;
    double tol = 1e-3;
    std::uint64_t seed = 20240901;
    double alpha = 0.0;
    std::string rect_spec;   // sigma_min,sigma_max,t_min,t_max
    std::string zeros_path;  // adversary zero set for sharpness
    bool shift_origin = false;
};

std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> grid;
    std::stringstream ss(text);
    std::string token;
    while (std::getline(ss, token, ',')) {
        if (token.empty()) continue;
        const std::size_t caret = token.find('^');
        double value;
        std::size_t used = 0;
        if (caret != std::string::npos) {
            const double base = std::stod(token.substr(0, caret));
            const double expo = std::stod(token.substr(caret + 1));
            value = std::pow(base, expo);
        } else {
            value = std::stod(token, &used);
            if (used != token.size())
                throw std::invalid_argument("bad radius token: " + token);
        }
        if (!(value > 0.0) || !std::isfinite(value))
            throw std::invalid_argument("radii must be positive: " + token);
        grid.push_back(value);
    }
    if (grid.empty()) throw std::invalid_argument("empty radius grid");
    if (!std::is_sorted(grid.begin(), grid.end()))
        throw std::invalid_argument("radius grid must be increasing");
    return grid;
}

/// `u_phi:<count>:<phi-spec>` builds the half-mass radial family; anything
/// else is a measure file path.
Measure load_measure(const std::string& input) {
    if (input.rfind("u_phi:", 0) == 0) {
        const std::string rest = input.substr(6);
        const std::size_t colon = rest.find(':');
        if (colon == std::string::npos)
            throw std::invalid_argument("expected u_phi:<count>:<phi-spec>");
        UPhiSpec spec{parse_psi_spec(rest.substr(colon + 1)), 2.0,
                      std::stoi(rest.substr(0, colon))};
        return build_u_phi(spec);
    }
    return read_measure_file(input);
}

LogRectangle parse_rect(const std::string& text) {
    LogRectangle rect;
    if (std::sscanf(text.c_str(), "%lf,%lf,%lf,%lf", &rect.sigma_min, &rect.sigma_max,
                    &rect.t_min, &rect.t_max) != 4)
        throw std::invalid_argument("expected --rect sigma_min,sigma_max,t_min,t_max");
    rect.validate();
    return rect;
}

LogRectangle bounding_rect(const Measure& m) {
    LogRectangle rect;
    bool first = true;
    for (const Atom& a : m.atoms()) {
        const double x = a.position.real(), y = a.position.imag();
        if (first) {
            rect = {x, x, y, y};
            first = false;
        } else {
            rect.sigma_min = std::min(rect.sigma_min, x);
            rect.sigma_max = std::max(rect.sigma_max, x);
            rect.t_min = std::min(rect.t_min, y);
            rect.t_max = std::max(rect.t_max, y);
        }
    }
    // Give zero-extent sides a little room so the rectangle stays valid.
    if (!(rect.sigma_max > rect.sigma_min)) {
        rect.sigma_min -= 0.5;
        rect.sigma_max += 0.5;
    }
    if (!(rect.t_max > rect.t_min)) {
        rect.t_min -= 0.5;
        rect.t_max += 0.5;
    }
    return rect;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

void write_manifest(const fs::path& out_dir, const std::string& command,
                    const CommonArgs& args, const std::vector<std::string>& outputs) {
    json manifest;
    manifest["command"] = command;
    manifest["version"] = kVersion;
    manifest["seed"] = args.seed;
    manifest["config"] = {{"input", args.input},     {"psi", args.psi_spec},
                          {"r_grid", args.r_grid},   {"tol", args.tol},
                          {"out", args.out_dir},     {"alpha", args.alpha},
                          {"rect", args.rect_spec},  {"zeros", args.zeros_path},
                          {"shift_origin", args.shift_origin}};
    manifest["outputs"] = outputs;
    write_file(out_dir / "manifest.json", manifest.dump(2) + "\n");
}

// Overlays config-file values onto options the user did not pass on the
// command line; explicit flags always win.
void apply_config(const CLI::App& app, CommonArgs& args) {
    if (args.config_path.empty()) return;
    std::ifstream in(args.config_path);
    if (!in) throw std::invalid_argument("cannot open config: " + args.config_path);
    json cfg = json::parse(in, nullptr, true, true);
    const auto overlay = [&](const char* flag, auto& slot, const char* key) {
        const CLI::Option* opt = app.get_option_no_throw(flag);
        if (opt != nullptr && opt->count() > 0) return;  // flag wins
        if (cfg.contains(key)) cfg.at(key).get_to(slot);
    };
    overlay("--input", args.input, "input");
    overlay("--psi", args.psi_spec, "psi");
    overlay("--r-grid", args.r_grid, "r_grid");
    overlay("--tol", args.tol, "tol");
    overlay("--seed", args.seed, "seed");
    overlay("--out", args.out_dir, "out");
    overlay("--alpha", args.alpha, "alpha");
    overlay("--rect", args.rect_spec, "rect");
    overlay("--zeros", args.zeros_path, "zeros");
    overlay("--shift-origin", args.shift_origin, "shift_origin");
}

fs::path prepare_out(const CommonArgs& args) {
    fs::path dir(args.out_dir);
    fs::create_directories(dir);
    return dir;
}

int run_approximate(const CommonArgs& args) {
    const Measure m = load_measure(args.input);
    const SlowlyVarying psi = parse_psi_spec(args.psi_spec);
    const fs::path out_dir = prepare_out(args);

    PipelineOptions opts(psi);
    opts.seed = args.seed;
    opts.auto_origin_shift = args.shift_origin;
    const PipelineResult result = approximate(m, opts);

    {
        std::ostringstream zs;
        write_zero_set(zs, result.f);
        write_file(out_dir / "zeros.txt", zs.str());
    }
    {
        std::ostringstream ds;
        write_decomposition_csv(ds, result.dec);
        write_file(out_dir / "decomposition.csv", ds.str());
    }
    ErrorReport report;
    if (!result.normalized.remainder.empty()) {
        QuadratureParams quad;
        quad.rel_tol = args.tol;
        for (double R : parse_grid(args.r_grid)) {
            const L1Result res = l1_disk_error(result.normalized.remainder, result.f, R, quad);
            const double norm = R * R * psi.log_psi(R);
            report.radii.push_back(R);
            report.I.push_back(res.value);
            report.norm.push_back(norm);
            report.ratio.push_back(norm > 0.0 ? res.value / norm : 0.0);
            report.quad_error.push_back(res.error_bound);
        }
    }
    {
        std::ostringstream es;
        write_error_report_csv(es, report);
        write_file(out_dir / "error_report.csv", es.str());
    }
    write_manifest(out_dir, "approximate", args,
                   {"zeros.txt", "decomposition.csv", "error_report.csv"});
    return 0;
}

int run_partition(const CommonArgs& args) {
    const Measure nu = load_measure(args.input);
    if (nu.empty()) throw std::invalid_argument("partition: empty measure");
    const LogRectangle rect =
        args.rect_spec.empty() ? bounding_rect(nu) : parse_rect(args.rect_spec);
    const fs::path out_dir = prepare_out(args);

    const std::vector<PartitionPiece> pieces = partition_mass_two(rect, nu, {});
    const PartitionReport report = verify_partition(pieces, rect, nu);

    std::ostringstream ps;
    write_pieces_csv(ps, pieces);
    write_file(out_dir / "pieces.csv", ps.str());
    write_manifest(out_dir, "partition", args, {"pieces.csv"});
    if (!report.all_pass()) {
        std::cerr << "partition properties failed:\n" << report.summary() << "\n";
        return 1;
    }
    return 0;
}

int run_atomize(const CommonArgs& args) {
    const Measure nu = load_measure(args.input);
    if (nu.empty()) throw std::invalid_argument("atomize: empty measure");
    const LogRectangle rect =
        args.rect_spec.empty() ? bounding_rect(nu) : parse_rect(args.rect_spec);
    const fs::path out_dir = prepare_out(args);

    const std::vector<PartitionPiece> pieces = partition_mass_two(rect, nu, {});
    std::ostringstream cs;
    cs << "piece,omega1_re,omega1_im,omega2_re,omega2_im,zeta1_re,zeta1_im,"
          "zeta2_re,zeta2_im,diameter\n";
    int index = 0;
    for (const PartitionPiece& piece : pieces) {
        const AtomPair pair = atomize_pair(piece);
        cs << index++ << ',' << format_double(pair.omega1.real()) << ','
           << format_double(pair.omega1.imag()) << ',' << format_double(pair.omega2.real())
           << ',' << format_double(pair.omega2.imag()) << ','
           << format_double(pair.zeta1.real()) << ',' << format_double(pair.zeta1.imag())
           << ',' << format_double(pair.zeta2.real()) << ','
           << format_double(pair.zeta2.imag()) << ',' << format_double(pair.d) << '\n';
    }
    write_file(out_dir / "pairs.csv", cs.str());
    write_manifest(out_dir, "atomize", args, {"pairs.csv"});
    return 0;
}

int run_sharpness(const CommonArgs& args) {
    const Measure u = load_measure(args.input);
    const SlowlyVarying psi = parse_psi_spec(args.psi_spec);
    const fs::path out_dir = prepare_out(args);

    ZeroSet f;
    if (!args.zeros_path.empty()) {
        f = read_zero_set_file(args.zeros_path);
    } else {
        std::vector<double> radii;
        const Measure cu = u.canonicalized();
        for (const Atom& a : cu.atoms())
            radii.push_back(std::abs(a.position));
        f = best_rounding_zero_set(radii);
    }

    const std::vector<double> grid = parse_grid(args.r_grid);
    QuadratureParams quad;
    quad.rel_tol = args.tol;
    const ErrorReport report = sharpness_ratio(u, f, args.alpha, psi, grid, quad);
    const GapReport gaps = counting_gap_scan(u, f, args.alpha, grid);

    std::ostringstream es, gs;
    write_error_report_csv(es, report);
    write_gap_report_csv(gs, gaps);
    write_file(out_dir / "sharpness.csv", es.str());
    write_file(out_dir / "gap.csv", gs.str());
    write_manifest(out_dir, "sharpness", args, {"sharpness.csv", "gap.csv"});
    return 0;
}

int run_jensen(const CommonArgs& args) {
    const Measure m = load_measure(args.input);
    const fs::path out_dir = prepare_out(args);

    std::ostringstream cs;
    cs << "r,circle_mean,N,residual,bound,nodes\n";
    for (double r : parse_grid(args.r_grid)) {
        const CircleMeanResult mean = circle_mean(m, r);
        const double N = integrated_counting(m, r);
        cs << format_double(r) << ',' << format_double(mean.value) << ','
           << format_double(N) << ',' << format_double(mean.value - N) << ','
           << format_double(mean.error_bound) << ',' << mean.nodes_used << '\n';
    }
    write_file(out_dir / "jensen.csv", cs.str());
    write_manifest(out_dir, "jensen", args, {"jensen.csv"});
    return 0;
}

int run_verify(const CommonArgs& args) {
    const Measure m = load_measure(args.input);
    const SlowlyVarying psi = parse_psi_spec(args.psi_spec);

    PipelineOptions opts(psi);
    opts.seed = args.seed;
    opts.auto_origin_shift = args.shift_origin;
    const PipelineResult result = approximate(m, opts);

    bool all_ok = true;
    const auto line = [&](const char* what, bool ok, const std::string& detail = "") {
        std::cout << (ok ? "PASS " : "FAIL ") << what;
        if (!ok && !detail.empty()) std::cout << "  (" << detail << ")";
        std::cout << "\n";
        all_ok = all_ok && ok;
    };

    const DecompositionReport dec_report =
        verify_decomposition(result.dec, result.normalized.remainder, psi);
    line("decomposition stage properties", dec_report.all_pass(), dec_report.detail);
    if (!dec_report.density_condition)
        std::cout << "NOTE input density below the annulus-mass threshold on some stages\n";

    bool partitions_ok = true;
    std::string partition_detail;
    for (std::size_t k = 0; k < result.stages.size(); ++k) {
        const StageArtifacts& art = result.stages[k];
        if (art.pieces.empty()) continue;
        const AnnulusStage& stage = result.dec.stages[k];
        LogRectangle rect{std::log(stage.R), std::log(stage.psi_R), 0.0, kTwoPi};
        const IntegerAtomExtraction ext = extract_integer_atoms(stage.mu1);
        const PartitionReport rep =
            verify_partition(art.pieces, rect, to_log_coords(ext.remainder));
        if (!rep.all_pass()) {
            partitions_ok = false;
            partition_detail = "stage " + std::to_string(k + 1) + ": " + rep.summary();
        }
    }
    line("partition properties per stage", partitions_ok, partition_detail);

    const std::vector<TailStepCheck> tail = verify_tail_schedule(result.sched, psi);
    bool tail_ok = true;
    for (const TailStepCheck& t : tail) tail_ok = tail_ok && t.ok;
    line("heavy-tail step bounds", tail_ok);

    const CountingCheck counting = verify_counting_agreement(result);
    line("counting-function agreement", counting.ok_global && counting.ok_at_stages,
         "max gap " + format_double(counting.max_gap) + ", at stage boundaries " +
             format_double(counting.max_gap_at_stages));

    return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"subharmonic-to-entire approximation toolkit"};
    app.require_subcommand(1);

    CommonArgs args;
    CLI::App* sub[6] = {
        app.add_subcommand("approximate", "run the full measure-to-zeros pipeline"),
        app.add_subcommand("partition", "mass-2 rectangle partition of a log-plane measure"),
        app.add_subcommand("atomize", "partition plus moment-matched pair per piece"),
        app.add_subcommand("sharpness", "lower-bound diagnostics against an adversary"),
        app.add_subcommand("jensen", "circle means against integrated counting"),
        app.add_subcommand("verify", "run the pipeline and check every invariant"),
    };
    for (CLI::App* s : sub) {
        s->add_option("--input", args.input,
                      "measure file or builtin u_phi:<count>:<phi-spec>");
        s->add_option("--psi", args.psi_spec, "weight spec, e.g. log_e_r or constant:4");
        s->add_option("--r-grid", args.r_grid, "comma list of radii; 2^k tokens allowed");
        s->add_option("--tol", args.tol, "relative quadrature tolerance");
        s->add_option("--seed", args.seed, "seed for randomized steps");
        s->add_option("--out", args.out_dir, "output directory");
        s->add_option("--alpha", args.alpha, "counting-gap offset in [0,1)");
        s->add_option("--rect", args.rect_spec, "root rectangle for partition/atomize");
        s->add_option("--zeros", args.zeros_path, "adversary zero-set file for sharpness");
        s->add_flag("--shift-origin", args.shift_origin,
                    "translate to a generic origin when the raw one fails the check");
        s->add_option("--config", args.config_path, "JSON config; explicit flags win");
    }

    try {
        app.parse(argc, argv);
        const CLI::App* active = app.get_subcommands().front();
        apply_config(*active, args);
        if (args.input.empty())
            throw std::invalid_argument("--input is required (flag or config)");
        const std::string name = active->get_name();
        if (name == "approximate") return run_approximate(args);
        if (name == "partition") return run_partition(args);
        if (name == "atomize") return run_atomize(args);
        if (name == "sharpness") return run_sharpness(args);
        if (name == "jensen") return run_jensen(args);
        return run_verify(args);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
}
