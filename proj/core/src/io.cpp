#include "softk/io.hpp"

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <fstream>
#include <ostream>
#include <sstream>

#include "softk/errors.hpp"

namespace softk::io {

using nlohmann::json;

namespace {

std::string flat_entries(const CMatrix& m) {
  std::string out = "[";
  bool first = true;
  for (const auto& z : m.data()) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw Error(ErrorKind::InvalidInput, "cannot write non-finite entries");
    if (!first) out += ", ";
    out += format_real(z.real());
    out += ", ";
    out += format_real(z.imag());
    first = false;
  }
  out += "]";
  return out;
}

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
}

template <typename T>
T get(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw Error(ErrorKind::ParseError, std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("bad field '") + key + "': " + e.what());
  }
}

CMatrix matrix_from_flat(std::size_t n, const json& entries) {
  if (!entries.is_array() || entries.size() != 2 * n * n)
    throw Error(ErrorKind::ParseError, "expected " + std::to_string(2 * n * n) + " reals in entries");
  CMatrix m(n, n);
  std::size_t k = 0;
  for (auto& z : m.data()) {
    if (!entries[k].is_number() || !entries[k + 1].is_number())
      throw Error(ErrorKind::ParseError, "entries must be numbers");
    z = Complex(entries[k].get<double>(), entries[k + 1].get<double>());
    k += 2;
  }
  if (!m.all_finite()) throw Error(ErrorKind::ParseError, "entries must be finite");
  return m;
}

CMatrix matrix_from_object(const json& j) {
  const auto n = get<long>(j, "n");
  if (n <= 0) throw Error(ErrorKind::ParseError, "matrix dimension must be positive");
  return matrix_from_flat(static_cast<std::size_t>(n), j.at("entries"));
}

std::string grid_to_json(const SpaceGrid& g) {
  std::string out = fmt::format("{{\"kind\": \"{}\", \"resolution\": [", to_string(g.kind));
  for (std::size_t i = 0; i < g.resolution.size(); ++i) out += fmt::format("{}{}", i ? ", " : "", g.resolution[i]);
  out += "], \"regions\": {";
  bool first = true;
  for (const auto& [name, idx] : g.regions) {
    out += fmt::format("{}\"{}\": [", first ? "" : ", ", name);
    for (std::size_t i = 0; i < idx.size(); ++i) out += fmt::format("{}{}", i ? ", " : "", idx[i]);
    out += "]";
    first = false;
  }
  out += "}}";
  return out;
}

std::shared_ptr<const SpaceGrid> grid_from_json(const json& j) {
  SpaceGrid g = make_grid(space_kind_from_string(get<std::string>(j, "kind")),
                          get<std::vector<std::size_t>>(j, "resolution"));
  if (j.contains("regions")) {
    for (const auto& [name, idx] : j.at("regions").items()) {
      auto indices = idx.get<std::vector<std::size_t>>();
      for (auto i : indices)
        if (i >= g.size()) throw Error(ErrorKind::ParseError, "region index out of range");
      g.regions[name] = std::move(indices);
    }
  }
  return std::make_shared<const SpaceGrid>(std::move(g));
}

std::string field_values(const std::vector<CMatrix>& values) {
  std::string out = "[";
  for (std::size_t i = 0; i < values.size(); ++i) {
    out += i ? ",\n    " : "\n    ";
    out += flat_entries(values[i]);
  }
  out += "\n  ]";
  return out;
}

std::vector<CMatrix> values_from_json(const json& j, std::size_t n, std::size_t count) {
  if (!j.is_array() || j.size() != count) throw Error(ErrorKind::ParseError, "expected one matrix per grid point");
  std::vector<CMatrix> out;
  out.reserve(count);
  for (const auto& e : j) out.push_back(matrix_from_flat(n, e));
  return out;
}

std::size_t field_dim(const std::vector<CMatrix>& values) {
  if (values.empty()) throw Error(ErrorKind::InvalidInput, "empty field");
  return values.front().rows();
}

}  // namespace

std::string format_real(double x) { return fmt::format("{:.17g}", x); }

std::string matrix_to_json(const CMatrix& m) {
  if (!m.is_square() || m.empty()) throw Error(ErrorKind::ShapeError, "only non-empty square matrices are written");
  return fmt::format("{{\"n\": {}, \"entries\": {}}}", m.rows(), flat_entries(m));
}

CMatrix matrix_from_json(const std::string& text) { return matrix_from_object(parse(text)); }

std::string pair_to_json(const SoftPair& pair, const std::optional<PairMeta>& meta) {
  std::string out = "{\n  \"a\": " + matrix_to_json(pair.a) + ",\n  \"b\": " + matrix_to_json(pair.b);
  if (meta) {
    out += fmt::format(
        ",\n  \"meta\": {{\"seed\": {}, \"k\": {}, \"rank_p\": {}, \"rank_q\": {}, \"rank_difference\": {}}}",
        meta->seed, meta->k, meta->rank_p, meta->rank_q, meta->rank_difference());
  }
  out += "\n}\n";
  return out;
}

PairDocument pair_from_json(const std::string& text) {
  const json j = parse(text);
  PairDocument doc;
  doc.pair.a = matrix_from_object(get<json>(j, "a"));
  doc.pair.b = matrix_from_object(get<json>(j, "b"));
  if (doc.pair.a.rows() != doc.pair.b.rows()) throw Error(ErrorKind::ShapeError, "a and b differ in size");
  if (j.contains("meta")) {
    const json& m = j.at("meta");
    PairMeta meta;
    meta.seed = get<std::uint64_t>(m, "seed");
    meta.k = get<std::size_t>(m, "k");
    meta.rank_p = get<std::size_t>(m, "rank_p");
    meta.rank_q = get<std::size_t>(m, "rank_q");
    doc.meta = meta;
  }
  return doc;
}

std::string delement_to_json(const DElement& e) {
  if (e.grid.size() != e.values.size()) throw Error(ErrorKind::ShapeError, "one value per grid point required");
  std::string out = "{\n  \"grid\": [";
  for (std::size_t i = 0; i < e.grid.size(); ++i) out += (i ? ", " : "") + format_real(e.grid[i]);
  out += "],\n  \"values\": " + field_values(e.values) + "\n}\n";
  return out;
}

DElement delement_from_json(const std::string& text) {
  const json j = parse(text);
  DElement e;
  e.grid = get<std::vector<double>>(j, "grid");
  validate_grid(e.grid);
  e.values = values_from_json(get<json>(j, "values"), 2, e.grid.size());
  return e;
}

std::string field_to_json(const MatrixField& f) {
  if (!f.grid) throw Error(ErrorKind::BadGrid, "field has no grid");
  return fmt::format("{{\n  \"grid\": {},\n  \"n\": {},\n  \"values\": {}\n}}\n", grid_to_json(*f.grid),
                     field_dim(f.values), field_values(f.values));
}

MatrixField field_from_json(const std::string& text) {
  const json j = parse(text);
  MatrixField f;
  f.grid = grid_from_json(get<json>(j, "grid"));
  f.values = values_from_json(get<json>(j, "values"), get<std::size_t>(j, "n"), f.grid->size());
  return f;
}

std::string field_pair_to_json(const FieldPair& fp) {
  if (!fp.a.grid) throw Error(ErrorKind::BadGrid, "field has no grid");
  return fmt::format("{{\n  \"grid\": {},\n  \"n\": {},\n  \"a\": {},\n  \"b\": {}\n}}\n", grid_to_json(*fp.a.grid),
                     field_dim(fp.a.values), field_values(fp.a.values), field_values(fp.b.values));
}

FieldPair field_pair_from_json(const std::string& text) {
  const json j = parse(text);
  auto grid = grid_from_json(get<json>(j, "grid"));
  const auto n = get<std::size_t>(j, "n");
  FieldPair fp{{grid, values_from_json(get<json>(j, "a"), n, grid->size())},
               {grid, values_from_json(get<json>(j, "b"), n, grid->size())}};
  return fp;
}

void write_path_trace(std::ostream& out, const PairPath& path, const PathReport& report) {
  out << fmt::format("# parameter={} scale={}\n", path.parameter_label, format_real(path.parameter_scale));
  out << "# t r1 r2 class step\n";
  for (std::size_t i = 0; i < path.params.size(); ++i) {
    const auto& s = report.samples.at(i);
    out << format_real(path.params[i]) << ' ' << format_real(s.relations.r1) << ' ' << format_real(s.relations.r2) << ' '
        << (s.klass ? std::to_string(*s.klass) : std::string("NA")) << ' ' << format_real(s.step) << '\n';
  }
}

void write_field_csv(std::ostream& out, const FieldPair& fp, const FieldReport& report) {
  out << "index,x,y,z,r1,r2,trace\n";
  const auto& pts = fp.a.grid->points;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double tr = (fp.a.values[i].trace() - fp.b.values[i].trace()).real();
    out << fmt::format("{},", i) << format_real(pts[i][0]) << ',' << format_real(pts[i][1]) << ',' << format_real(pts[i][2]) << ','
        << format_real(report.points.at(i).r1) << ',' << format_real(report.points.at(i).r2) << ',' << format_real(tr)
        << '\n';
  }
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorKind::IoError, "write failed for " + path.string());
}

}  // namespace softk::io
