#include "sublog/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sublog {

namespace {

[[noreturn]] void bad_line(const char* what, int line, const std::string& text) {
    throw std::invalid_argument(std::string(what) + " at line " + std::to_string(line) +
                                ": \"" + text + "\"");
}

// Strips comments/whitespace; true when the line carries data.
bool payload(const std::string& raw, std::string& out) {
    const std::size_t hash = raw.find('#');
    out = raw.substr(0, hash);
    return out.find_first_not_of(" \t\r") != std::string::npos;
}

struct Triple {
    double a, b, c;
};

Triple parse_triple(const std::string& text, int line) {
    std::istringstream ss(text);
    Triple t{};
    std::string extra;
    if (!(ss >> t.a >> t.b >> t.c)) bad_line("expected `re im value`", line, text);
    if (ss >> extra) bad_line("trailing tokens", line, text);
    if (!std::isfinite(t.a) || !std::isfinite(t.b) || !std::isfinite(t.c))
        bad_line("non-finite value", line, text);
    return t;
}

}  // namespace

// Shortest decimal form that round-trips to the same double.
std::string format_double(double v) {
    char buf[40];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, p);
}

Measure read_measure(std::istream& in) {
    std::vector<Atom> atoms;
    std::string raw, text;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        if (!payload(raw, text)) continue;
        const Triple t = parse_triple(text, line);
        if (t.c <= 0.0) bad_line("mass must be positive", line, text);
        atoms.push_back(Atom{Complex(t.a, t.b), t.c});
    }
    return Measure(std::move(atoms));
}

Measure read_measure_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open measure file: " + path);
    return read_measure(in);
}

void write_measure(std::ostream& out, const Measure& m) {
    for (const Atom& a : m.atoms())
        out << format_double(a.position.real()) << ' ' << format_double(a.position.imag())
            << ' ' << format_double(a.mass) << '\n';
}

ZeroSet read_zero_set(std::istream& in) {
    std::vector<Zero> zeros;
    std::string raw, text;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        if (!payload(raw, text)) continue;
        const Triple t = parse_triple(text, line);
        const double rounded = std::nearbyint(t.c);
        if (t.c <= 0.0 || t.c != rounded || rounded > 2147483647.0)
            bad_line("multiplicity must be a positive integer", line, text);
        if (t.a == 0.0 && t.b == 0.0) bad_line("zero at the origin", line, text);
        zeros.push_back(Zero{Complex(t.a, t.b), static_cast<int>(rounded), ZeroSource::Pair});
    }
    return ZeroSet(std::move(zeros));
}

ZeroSet read_zero_set_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open zero-set file: " + path);
    return read_zero_set(in);
}

void write_zero_set(std::ostream& out, const ZeroSet& f) {
    for (const Zero& z : f.zeros())
        out << format_double(z.position.real()) << ' ' << format_double(z.position.imag())
            << ' ' << z.multiplicity << '\n';
}

void write_pieces_csv(std::ostream& out, const std::vector<PartitionPiece>& pieces) {
    out << "sigma_min,sigma_max,t_min,t_max,mass,depth\n";
    for (const PartitionPiece& p : pieces)
        out << format_double(p.rect.sigma_min) << ',' << format_double(p.rect.sigma_max)
            << ',' << format_double(p.rect.t_min) << ',' << format_double(p.rect.t_max)
            << ',' << format_double(p.nu.total_mass()) << ',' << p.depth << '\n';
}

void write_decomposition_csv(std::ostream& out, const AnnularDecomposition& dec) {
    out << "k,R_k,R_k*psi,mass_mu1,mass_mu2_part\n";
    for (std::size_t i = 0; i < dec.stages.size(); ++i) {
        const AnnulusStage& s = dec.stages[i];
        out << (i + 1) << ',' << format_double(s.R) << ',' << format_double(s.psi_R) << ','
            << format_double(s.mu1.total_mass()) << ','
            << format_double(s.mu2_part.total_mass()) << '\n';
    }
}

void write_error_report_csv(std::ostream& out, const ErrorReport& rep) {
    out << "R,I,norm,ratio,quad_error\n";
    for (std::size_t i = 0; i < rep.radii.size(); ++i)
        out << format_double(rep.radii[i]) << ',' << format_double(rep.I[i]) << ','
            << format_double(rep.norm[i]) << ',' << format_double(rep.ratio[i]) << ','
            << format_double(rep.quad_error[i]) << '\n';
}

void write_gap_report_csv(std::ostream& out, const GapReport& rep) {
    out << "r,n_u,n_f,N_u,N_f,gap,violation\n";
    for (std::size_t i = 0; i < rep.r.size(); ++i) {
        const double gap = rep.n_u[i] - rep.n_f[i] - rep.alpha;
        const bool violation = std::abs(gap) > 0.5 + 1e-9;
        out << format_double(rep.r[i]) << ',' << format_double(rep.n_u[i]) << ','
            << format_double(rep.n_f[i]) << ',' << format_double(rep.N_u[i]) << ','
            << format_double(rep.N_f[i]) << ',' << format_double(gap) << ','
            << (violation ? 1 : 0) << '\n';
    }
}

}  // namespace sublog
