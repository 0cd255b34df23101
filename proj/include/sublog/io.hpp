#ifndef SUBLOG_IO_HPP
#define SUBLOG_IO_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "sublog/decomposition.hpp"
#include "sublog/measure.hpp"
#include "sublog/metrics.hpp"
#include "sublog/partition.hpp"
#include "sublog/potential.hpp"

namespace sublog {

/// Shortest round-trippable decimal form ("%.17g"); all writers below use
/// it so identical runs produce byte-identical files.
std::string format_double(double v);

/// Measure text: one `re im mass` triple per line, `#` starts a comment,
/// blank lines skipped. Throws std::invalid_argument naming the offending
/// line on malformed input, NaN/inf values, or mass <= 0.
Measure read_measure(std::istream& in);
Measure read_measure_file(const std::string& path);
void write_measure(std::ostream& out, const Measure& m);

/// Zero-set text: `re im multiplicity` per line, same comment rules;
/// multiplicity must be a positive integer, position nonzero.
ZeroSet read_zero_set(std::istream& in);
ZeroSet read_zero_set_file(const std::string& path);
void write_zero_set(std::ostream& out, const ZeroSet& f);

// CSV emitters, one header line then data rows.
void write_pieces_csv(std::ostream& out, const std::vector<PartitionPiece>& pieces);
void write_decomposition_csv(std::ostream& out, const AnnularDecomposition& dec);
void write_error_report_csv(std::ostream& out, const ErrorReport& rep);
void write_gap_report_csv(std::ostream& out, const GapReport& rep);

}  // namespace sublog

#endif
