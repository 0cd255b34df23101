#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <complex>
#include <utility>
#include <vector>

#include "sublog/atomize.hpp"
#include "sublog/counterexample.hpp"
#include "sublog/measure.hpp"
#include "sublog/metrics.hpp"
#include "sublog/partition.hpp"
#include "sublog/pipeline.hpp"
#include "sublog/potential.hpp"
#include "sublog/slowly_varying.hpp"

namespace py = pybind11;
using namespace sublog;

namespace {

Measure measure_from_pairs(
    const std::vector<std::pair<std::complex<double>, double>>& items) {
    std::vector<Atom> atoms;
    atoms.reserve(items.size());
    for (const auto& [pos, mass] : items) atoms.push_back({pos, mass});
    return Measure(std::move(atoms));
}

ZeroSet zeroset_from_pairs(
    const std::vector<std::pair<std::complex<double>, int>>& items) {
    std::vector<Zero> zeros;
    zeros.reserve(items.size());
    for (const auto& [pos, mult] : items) zeros.push_back({pos, mult});
    return ZeroSet(std::move(zeros));
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
    mod.doc() =
        "Riesz-measure approximation by zero sets: annular decomposition, "
        "mass-2 partition, moment-matched atom pairs, and the error metrics.";

    py::class_<Atom>(mod, "Atom")
        .def_readonly("position", &Atom::position)
        .def_readonly("mass", &Atom::mass)
        .def("__repr__", [](const Atom& a) {
            return "Atom(" + std::to_string(a.position.real()) + "+" +
                   std::to_string(a.position.imag()) + "j, mass=" +
                   std::to_string(a.mass) + ")";
        });

    py::class_<Measure>(mod, "Measure")
        .def(py::init<>())
        .def(py::init(&measure_from_pairs),
             "Build from [(position, mass), ...]; masses must be positive.")
        .def("atoms", &Measure::atoms)
        .def("total_mass", &Measure::total_mass)
        .def("canonicalized", &Measure::canonicalized)
        .def("min_modulus", &Measure::min_modulus)
        .def("max_modulus", &Measure::max_modulus)
        .def("__len__", &Measure::size)
        .def("__bool__", [](const Measure& m) { return !m.empty(); });

    py::enum_<ZeroSource>(mod, "ZeroSource")
        .value("HeavyTail", ZeroSource::HeavyTail)
        .value("IntegerAtom", ZeroSource::IntegerAtom)
        .value("Pair", ZeroSource::Pair);

    py::class_<Zero>(mod, "Zero")
        .def_readonly("position", &Zero::position)
        .def_readonly("multiplicity", &Zero::multiplicity)
        .def_readonly("source", &Zero::source);

    py::class_<ZeroSet>(mod, "ZeroSet")
        .def(py::init<>())
        .def(py::init(&zeroset_from_pairs),
             "Build from [(position, multiplicity), ...]; positions nonzero.")
        .def("zeros", &ZeroSet::zeros)
        .def("total_multiplicity", &ZeroSet::total_multiplicity)
        .def("canonicalized", &ZeroSet::canonicalized)
        .def("as_measure", &ZeroSet::as_measure)
        .def("__len__", &ZeroSet::size)
        .def("__bool__", [](const ZeroSet& f) { return !f.empty(); });

    py::class_<SlowlyVarying>(mod, "SlowlyVarying")
        .def("__call__", &SlowlyVarying::operator())
        .def("log_psi", &SlowlyVarying::log_psi)
        .def("Psi1", &SlowlyVarying::Psi1)
        .def("Psi", &SlowlyVarying::Psi)
        .def_property_readonly("name", &SlowlyVarying::name);
    mod.def("psi", &parse_psi_spec, py::arg("spec"),
            "Weight from a spec string: constant:<v>, log_e_r, exp_sqrt_log, "
            "squared:<spec>, sigma:one_over_log.");

    mod.def(
        "u_phi",
        [](int count, const std::string& phi_spec, double r0) {
            return build_u_phi(UPhiSpec{parse_psi_spec(phi_spec), r0, count});
        },
        py::arg("count"), py::arg("phi_spec") = "log_e_r", py::arg("r0") = 2.0,
        "Half-mass atoms at radii r_{k+1} = r_k * phi(r_k).");
    mod.def("u_phi_radii",
            [](int count, const std::string& phi_spec, double r0) {
                return u_phi_radii(UPhiSpec{parse_psi_spec(phi_spec), r0, count});
            },
            py::arg("count"), py::arg("phi_spec") = "log_e_r", py::arg("r0") = 2.0);
    mod.def("best_rounding_zero_set", &best_rounding_zero_set, py::arg("radii"),
            "Simple zeros at every second radius (the near-optimal rounding).");

    mod.def("log_potential", &log_potential, py::arg("m"), py::arg("z"),
            "Sum of mass * log|1 - z/zeta|; None on collision with an atom.");
    mod.def("log_modulus", &log_modulus, py::arg("f"), py::arg("z"));

    mod.def("counting_function",
            py::overload_cast<const Measure&, double>(&counting_function),
            py::arg("m"), py::arg("r"));
    mod.def("counting_function",
            py::overload_cast<const ZeroSet&, double>(&counting_function),
            py::arg("f"), py::arg("r"));
    mod.def("integrated_counting",
            py::overload_cast<const Measure&, double>(&integrated_counting),
            py::arg("m"), py::arg("r"));
    mod.def("integrated_counting",
            py::overload_cast<const ZeroSet&, double>(&integrated_counting),
            py::arg("f"), py::arg("r"));
    mod.def("jensen_residual", &jensen_residual, py::arg("m"), py::arg("r"),
            py::arg("nodes") = 4096);

    py::class_<L1Result>(mod, "L1Result")
        .def_readonly("value", &L1Result::value)
        .def_readonly("error_bound", &L1Result::error_bound)
        .def_readonly("converged", &L1Result::converged)
        .def_readonly("cells", &L1Result::cells);
    mod.def(
        "l1_disk_error",
        [](const Measure& m, const ZeroSet& f, double R, double rel_tol,
           double alpha) {
            QuadratureParams quad;
            quad.rel_tol = rel_tol;
            return l1_disk_error(m, f, R, quad, alpha);
        },
        py::arg("m"), py::arg("f"), py::arg("R"), py::arg("rel_tol") = 1e-3,
        py::arg("alpha") = 0.0,
        "Integral over |z| < R of |u - log|f| - alpha*log|z|| dA.");

    py::class_<LogRectangle>(mod, "LogRectangle")
        .def(py::init([](double smin, double smax, double tmin, double tmax) {
                 LogRectangle r{smin, smax, tmin, tmax};
                 r.validate();
                 return r;
             }),
             py::arg("sigma_min"), py::arg("sigma_max"), py::arg("t_min"),
             py::arg("t_max"))
        .def_readonly("sigma_min", &LogRectangle::sigma_min)
        .def_readonly("sigma_max", &LogRectangle::sigma_max)
        .def_readonly("t_min", &LogRectangle::t_min)
        .def_readonly("t_max", &LogRectangle::t_max)
        .def("width", &LogRectangle::width)
        .def("height", &LogRectangle::height)
        .def("diameter", &LogRectangle::diameter);

    py::class_<PartitionPiece>(mod, "PartitionPiece")
        .def_readonly("rect", &PartitionPiece::rect)
        .def_readonly("nu", &PartitionPiece::nu)
        .def_readonly("depth", &PartitionPiece::depth)
        .def_readonly("middle_third_ok", &PartitionPiece::middle_third_ok);
    mod.def(
        "partition_mass_two",
        [](const LogRectangle& rect, const Measure& nu) {
            return partition_mass_two(rect, nu);
        },
        py::arg("rect"), py::arg("nu"),
        "Cut (rect, nu) into rectangles each carrying exactly mass 2.");
    mod.def(
        "verify_partition",
        [](const std::vector<PartitionPiece>& pieces, const LogRectangle& root,
           const Measure& nu) {
            const PartitionReport rep = verify_partition(pieces, root, nu);
            return py::make_tuple(rep.all_pass(), rep.summary());
        },
        py::arg("pieces"), py::arg("root"), py::arg("nu"));

    py::class_<AtomPair>(mod, "AtomPair")
        .def_readonly("omega1", &AtomPair::omega1)
        .def_readonly("omega2", &AtomPair::omega2)
        .def_readonly("zeta1", &AtomPair::zeta1)
        .def_readonly("zeta2", &AtomPair::zeta2)
        .def_readonly("omega_center", &AtomPair::omega_center)
        .def_readonly("d", &AtomPair::d);
    mod.def("atomize_pair", &atomize_pair, py::arg("piece"),
            "Two unit atoms matching the piece's first two complex moments.");

    py::class_<PipelineResult>(mod, "PipelineResult")
        .def_readonly("origin", &PipelineResult::origin)
        .def_readonly("shifted", &PipelineResult::shifted)
        .def_readonly("f", &PipelineResult::f)
        .def_readonly("consumed_mass", &PipelineResult::consumed_mass);
    mod.def(
        "approximate",
        [](const Measure& m, const std::string& psi_spec, std::uint64_t seed,
           bool shift_origin) {
            PipelineOptions opts(parse_psi_spec(psi_spec));
            opts.seed = seed;
            opts.auto_origin_shift = shift_origin;
            return approximate(m, opts);
        },
        py::arg("m"), py::arg("psi_spec") = "log_e_r",
        py::arg("seed") = 20240901, py::arg("shift_origin") = false,
        "Full run: normalization, annular split, partition, atom pairs, "
        "heavy-tail blocks, assembly into a zero set.");
    mod.def(
        "verify_counting_agreement",
        [](const PipelineResult& result) {
            const CountingCheck c = verify_counting_agreement(result);
            return py::make_tuple(c.max_gap, c.max_gap_at_stages, c.ok_global);
        },
        py::arg("result"),
        "(max gap over jump radii, max gap at stage boundaries, global ok).");

    py::class_<GapReport>(mod, "GapReport")
        .def_readonly("r", &GapReport::r)
        .def_readonly("n_u", &GapReport::n_u)
        .def_readonly("n_f", &GapReport::n_f)
        .def_readonly("N_u", &GapReport::N_u)
        .def_readonly("N_f", &GapReport::N_f)
        .def_readonly("alpha", &GapReport::alpha)
        .def_readonly("violations", &GapReport::violations)
        .def_readonly("lattice_ok", &GapReport::lattice_ok)
        .def_readonly("half_step_signature", &GapReport::half_step_signature);
    mod.def("counting_gap_scan", &counting_gap_scan, py::arg("u"), py::arg("f"),
            py::arg("alpha"), py::arg("r_grid"));

    py::class_<ErrorReport>(mod, "ErrorReport")
        .def_readonly("radii", &ErrorReport::radii)
        .def_readonly("I", &ErrorReport::I)
        .def_readonly("norm", &ErrorReport::norm)
        .def_readonly("ratio", &ErrorReport::ratio)
        .def_readonly("quad_error", &ErrorReport::quad_error);
    mod.def(
        "sharpness_ratio",
        [](const Measure& u, const ZeroSet& f, double alpha,
           const std::string& psi_spec, const std::vector<double>& R_grid) {
            return sharpness_ratio(u, f, alpha, parse_psi_spec(psi_spec), R_grid);
        },
        py::arg("u"), py::arg("f"), py::arg("alpha"), py::arg("psi_spec"),
        py::arg("R_grid"),
        "I_alpha(R) on the grid against the R^2 log psi(R) normalization.");

    mod.def("verify_generic_origin", &verify_generic_origin, py::arg("m"),
            py::arg("origin"), py::arg("tol") = 1e-9);
    mod.def("generic_origin_shift", &generic_origin_shift, py::arg("m"),
            py::arg("radius"), py::arg("seed"), py::arg("max_tries") = 10000);
}
