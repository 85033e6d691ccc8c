#pragma once

#include "monolab/trees.hpp"

#include <iosfwd>
#include <string>

namespace monolab {

/// Series file format (.gps, line-based, bit-exact):
///   gps <m> <n>
///   radius <r_1> ... <r_{m+n}>
///   <coeff> : <e_1> <e_2> ... <e_{m+n}>
/// Rationals are written p or p/q (q > 0, reduced). '#' starts a comment. Terms
/// must appear in canonical exponent order; duplicates are a parse error.
GenSeries parse_series(std::istream& in);
GenSeries parse_series_file(const std::string& path);
std::string serialize_series(const GenSeries& series);
void write_series_file(const std::string& path, const GenSeries& series);

/// Tree serialization (.qtree): structured text records with a deterministic
/// field order; leaf records embed the normal-decomposition snapshots.
std::string serialize_tree(const AdmissibleTree& tree);
AdmissibleTree parse_tree(const std::string& text);
AdmissibleTree parse_tree_file(const std::string& path);
void write_tree_file(const std::string& path, const AdmissibleTree& tree);

/// Fixed-format real for reports: 17 significant digits, locale-independent.
std::string format_real(double value);

/// One-line rendering of a transform, 1-based indices, e.g. "blowA(1,2;3/2)".
std::string describe_transform(const ElementaryTransform& t);
std::string describe_chain(const TransformChain& chain);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

} // namespace monolab
