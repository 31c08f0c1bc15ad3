#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "softk/funcalg.hpp"
#include "softk/homotopy.hpp"
#include "softk/pairs.hpp"
#include "softk/reduction.hpp"
#include "softk/universal.hpp"

/// Text file formats. All documents are JSON; numbers are written with 17
/// significant digits so values round-trip bit for bit. See docs/formats.md.
namespace softk::io {

/// Formats a double with 17 significant digits, independent of locale.
std::string format_real(double x);

std::string matrix_to_json(const CMatrix& m);
CMatrix matrix_from_json(const std::string& text);

struct PairDocument {
  SoftPair pair;
  std::optional<PairMeta> meta;
};

std::string pair_to_json(const SoftPair& pair, const std::optional<PairMeta>& meta = std::nullopt);
PairDocument pair_from_json(const std::string& text);

std::string delement_to_json(const DElement& e);
DElement delement_from_json(const std::string& text);

std::string field_to_json(const MatrixField& f);
MatrixField field_from_json(const std::string& text);
std::string field_pair_to_json(const FieldPair& fp);
FieldPair field_pair_from_json(const std::string& text);

/// Whitespace-separated table, one row per sample: t r1 r2 class step.
void write_path_trace(std::ostream& out, const PairPath& path, const PathReport& report);
/// CSV, one row per point: index,x,y,z,r1,r2,trace.
void write_field_csv(std::ostream& out, const FieldPair& fp, const FieldReport& report);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

inline CMatrix read_matrix(const std::filesystem::path& p) { return matrix_from_json(read_text(p)); }
inline void write_matrix(const std::filesystem::path& p, const CMatrix& m) { write_text(p, matrix_to_json(m)); }
inline PairDocument read_pair(const std::filesystem::path& p) { return pair_from_json(read_text(p)); }
inline void write_pair(const std::filesystem::path& p, const SoftPair& pair,
                       const std::optional<PairMeta>& meta = std::nullopt) {
  write_text(p, pair_to_json(pair, meta));
}

}  // namespace softk::io
