// softk: command-line front end for soft projection pairs.
//
// Exit codes: 0 success, 1 usage or I/O error, 2 mathematical failure.
// Reports go to stderr; machine-readable data goes to stdout.

#include <fmt/format.h>

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "softk/softk.hpp"

namespace fs = std::filesystem;
using namespace softk;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitMath = 2;

enum class Format { Human, Tabular };

struct RunConfig {
  double tol = kDefaultRelationTol;
  double cluster_tol = kDefaultReductionClusterTol;
  double gluing_tol = kDefaultGluingTol;
  std::size_t steps = kDefaultSteps;
  std::uint64_t seed = 0;
  std::size_t grid = 0;  // 0: the demo's own default
  std::string out;
  Format format = Format::Human;

  void validate() const {
    if (!(tol > 0.0) || !(cluster_tol > 0.0) || !(gluing_tol > 0.0))
      throw Error(ErrorKind::InvalidInput, "tolerances must be positive");
    if (grid != 0 && grid < 3) throw Error(ErrorKind::InvalidInput, "grid resolution must be at least 3");
    if (steps < 2) throw Error(ErrorKind::InvalidInput, "steps must be at least 2");
  }
};

std::string real(double x) { return io::format_real(x); }

void print_relations(const RelationReport& r, const RunConfig& cfg) {
  if (cfg.format == Format::Tabular) {
    std::cout << "norm_a norm_b positivity_a positivity_b r1 r2 pass\n";
    std::cout << fmt::format("{} {} {} {} {} {} {}\n", real(r.norm_a), real(r.norm_b), real(r.positivity_a),
                             real(r.positivity_b), real(r.r1), real(r.r2), r.pass ? 1 : 0);
  }
  std::cerr << fmt::format(
      "norm_a       {}\nnorm_b       {}\npositivity_a {}\npositivity_b {}\nr1           {}\nr2           {}\n"
      "tol          {}\nverdict      {}\n",
      real(r.norm_a), real(r.norm_b), real(r.positivity_a), real(r.positivity_b), real(r.r1), real(r.r2), real(r.tol),
      r.pass ? "PASS" : "FAIL");
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
  } else {
    io::write_text(path, text);
  }
}

int cmd_verify(const std::string& file, const RunConfig& cfg) {
  const auto doc = io::read_pair(file);
  const auto report = check_relations(doc.pair, cfg.tol);
  print_relations(report, cfg);
  return report.pass ? kExitOk : kExitMath;
}

int cmd_class(const std::string& file, const RunConfig& cfg) {
  const auto doc = io::read_pair(file);
  require_relations(doc.pair, cfg.tol);
  std::cout << class_of_pair(doc.pair) << '\n';
  return kExitOk;
}

int cmd_reduce(const std::string& file, const RunConfig& cfg) {
  const auto doc = io::read_pair(file);
  const auto r = reduce_to_projections(doc.pair, cfg.cluster_tol, cfg.tol);
  const std::size_t n = doc.pair.dim();
  std::cerr << fmt::format("n       {}\nk       {}\nrank_p  {}\nrank_q  {}\nclass   {}\n", n, r.k, r.rank_p, r.rank_q,
                           r.klass());
  if (r.k == n) std::cerr << "projection part empty\n";
  if (r.k == 0) std::cerr << "common part empty\n";
  if (cfg.format == Format::Tabular) {
    std::cout << "n k rank_p rank_q class\n" << fmt::format("{} {} {} {} {}\n", n, r.k, r.rank_p, r.rank_q, r.klass());
  }
  if (!cfg.out.empty()) {
    io::write_matrix(cfg.out + ".frame.json", r.frame);
    if (r.k > 0) io::write_matrix(cfg.out + ".c.json", r.c);
    if (r.k < n) {
      io::write_matrix(cfg.out + ".p.json", r.p);
      io::write_matrix(cfg.out + ".q.json", r.q);
    }
  }
  return kExitOk;
}

ScalarFunction reparam_function(const std::string& name) {
  if (name == "t2") return fn::power(2);
  if (name == "t3") return fn::power(3);
  if (name == "smoothstep") return fn::smoothstep();
  throw Error(ErrorKind::InvalidInput, "unknown function '" + name + "' (expected t2, t3 or smoothstep)");
}

int cmd_homotopy(const std::string& kind, const std::string& file, const std::string& func, const RunConfig& cfg) {
  const auto doc = io::read_pair(file);
  const SoftPair& pair = doc.pair;
  PairPath path;
  double endpoint_error = 0.0;
  if (kind == "flip") {
    path = rotation_flip_path(pair, cfg.steps, cfg.tol);
    endpoint_error = std::max(op_norm(path.pairs.front().b - direct_sum(pair.b, pair.a)),
                              op_norm(path.pairs.back().b - direct_sum(pair.a, pair.b)));
  } else if (kind == "scale") {
    path = linear_scaling_path(pair.a, cfg.steps);
  } else if (kind == "reparam") {
    path = reparam_path(pair, reparam_function(func), cfg.steps, cfg.tol);
  } else if (kind == "pq-scale") {
    path = scaling_homotopy_PQ(pair, cfg.steps, cfg.tol);
    const auto pq = build_PQ(pair, cfg.tol);
    const CMatrix zero = CMatrix::zero(pair.dim());
    endpoint_error = std::max({op_norm(path.pairs.back().a - pq.P), op_norm(path.pairs.back().b - pq.Q),
                               op_norm(path.pairs.front().a - direct_sum(zero, pair.a)),
                               op_norm(path.pairs.front().b - direct_sum(zero, pair.b))});
  } else {
    throw Error(ErrorKind::InvalidInput, "unknown homotopy kind '" + kind + "'");
  }

  const auto report = verify_path(path, cfg.tol);
  std::ostringstream trace;
  io::write_path_trace(trace, path, report);
  emit(trace.str(), cfg.out);

  const bool endpoints_ok = endpoint_error <= 1e-12;
  std::cerr << fmt::format("kind        {}\nsamples     {}\nworst_r1    {}\nworst_r2    {}\nstep_bound  {}\n", kind,
                           path.pairs.size(), real(report.worst_r1), real(report.worst_r2), real(report.step_bound));
  if (report.first_failure) std::cerr << fmt::format("first_fail  {}\n", *report.first_failure);
  if (report.samples.front().klass) std::cerr << fmt::format("class       {}\n", *report.samples.front().klass);
  std::cerr << fmt::format("class_const {}\nendpoints   {}\nverdict     {}\n", report.class_constant ? "yes" : "no",
                           real(endpoint_error), report.pass && endpoints_ok ? "CERTIFIED" : "FAILED");
  return report.pass && endpoints_ok ? kExitOk : kExitMath;
}

std::string join_classes(const std::vector<long>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

int demo_universal(const RunConfig& cfg, const fs::path& dir) {
  const auto grid = uniform_grid(cfg.grid == 0 ? kDefaultUniversalGrid : cfg.grid);
  const DElement a = generator_a(grid);
  const DElement b = generator_b(grid);
  io::write_text(dir / "universal_a.json", io::delement_to_json(a));
  io::write_text(dir / "universal_b.json", io::delement_to_json(b));

  const auto ma = check_membership(a);
  const auto mb = check_membership(b);
  const auto mab = check_membership(a * b);
  const FieldPair fp{to_interval_field(a), to_interval_field(b)};
  const auto rel = check_relations_field(fp, cfg.tol);
  const auto cls = pointwise_class(fp);

  std::cerr << fmt::format("grid points       {}\nmembership a      {}\nmembership b      {}\nmembership a*b    {}\n",
                           grid.size(), ma.pass ? "pass" : "FAIL", mb.pass ? "pass" : "FAIL",
                           mab.pass ? "pass" : "FAIL");
  std::cerr << fmt::format("worst r1          {}\nworst r2          {}\npointwise class   {}\n", real(rel.worst_r1),
                           real(rel.worst_r2), join_classes(cls.component_class));
  const bool ok = ma.pass && mb.pass && mab.pass && rel.pass && cls.component_class == std::vector<long>{0};
  return ok ? kExitOk : kExitMath;
}

int demo_bott(const RunConfig& cfg, const fs::path& dir) {
  const std::size_t rings = cfg.grid == 0 ? 32 : cfg.grid;
  auto coarse = std::make_shared<const SpaceGrid>(make_sphere(rings, 2 * rings));
  auto fine = std::make_shared<const SpaceGrid>(make_sphere(2 * rings, 4 * rings));
  const MatrixField p = bott_projection(coarse);
  io::write_text(dir / "bott_field.json", io::field_to_json(p));

  const long c = chern_number(p);
  const long c_fine = chern_number(bott_projection(fine));
  const long c_complement = chern_number(complement(p));
  const long c_constant = chern_number(constant_field(coarse, CMatrix::diagonal({1.0, 0.0})));
  std::cerr << fmt::format("mesh              {}x{}\nchern             {}\nchern (refined)   {}\n"
                           "chern complement  {}\nchern constant    {}\ncontinuity        {}\n",
                           rings, 2 * rings, c, c_fine, c_complement, c_constant, real(continuity_witness(p)));
  std::cout << c << '\n';
  return c == 1 && c_fine == 1 && c_complement == -1 && c_constant == 0 ? kExitOk : kExitMath;
}

int demo_clutch(const RunConfig& cfg, const fs::path& dir) {
  const std::size_t rings = cfg.grid == 0 ? 16 : cfg.grid;
  const FieldPair fp = hemisphere_clutch_demo(rings, cfg.gluing_tol);
  const auto rel = check_relations_field(fp, cfg.tol);
  io::write_text(dir / "clutch_pair.json", io::field_pair_to_json(fp));
  std::ostringstream csv;
  io::write_field_csv(csv, fp, rel);
  io::write_text(dir / "clutch_residuals.csv", csv.str());

  const auto cls = pointwise_class(fp);
  std::cerr << fmt::format("mesh              {}x{}\nworst r1          {}\nworst r2          {}\n", rings, 2 * rings,
                           real(rel.worst_r1), real(rel.worst_r2));
  for (const auto& [name, summary] : rel.regions) {
    std::cerr << fmt::format("region {:<10} r1 {} r2 {} class {}\n", name, real(summary.worst_r1),
                             real(summary.worst_r2), join_classes(cls.region_classes.at(name)));
  }
  std::cerr << fmt::format("verdict           {}\n", rel.pass ? "PASS" : "FAIL");
  return rel.pass ? kExitOk : kExitMath;
}

int cmd_demo(const std::string& name, const RunConfig& cfg) {
  const fs::path dir = cfg.out.empty() ? fs::path(".") : fs::path(cfg.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::IoError, "cannot create " + dir.string());
  if (name == "universal") return demo_universal(cfg, dir);
  if (name == "bott") return demo_bott(cfg, dir);
  if (name == "clutch") return demo_clutch(cfg, dir);
  throw Error(ErrorKind::InvalidInput, "unknown demo '" + name + "' (expected universal, bott or clutch)");
}

int cmd_gen(std::size_t n, std::size_t k, const RunConfig& cfg) {
  if (n == 0) throw Error(ErrorKind::ShapeError, "n must be positive");
  const auto g = random_valid_pair(n, k, cfg.seed);
  emit(io::pair_to_json(g.pair, g.meta), cfg.out);
  std::cerr << fmt::format("generated n={} k={} seed={} rank_p={} rank_q={} class={}\n", n, k, cfg.seed, g.meta.rank_p,
                           g.meta.rank_q, g.meta.rank_difference());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"softk: soft projection pairs, their integer classes and homotopies"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "Configuration file (TOML/INI); command-line flags take precedence");

  RunConfig cfg;
  std::string format = "human";
  app.add_option("--tol", cfg.tol, "Relation tolerance")->capture_default_str();
  app.add_option("--cluster-tol", cfg.cluster_tol, "Spectral cluster tolerance for reduce")->capture_default_str();
  app.add_option("--gluing-tol", cfg.gluing_tol, "Gluing tolerance for clutching")->capture_default_str();
  app.add_option("--steps", cfg.steps, "Samples per homotopy path")->capture_default_str();
  app.add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
  app.add_option("--grid", cfg.grid, "Grid resolution for demos (0: demo default)")->capture_default_str();
  app.add_option("--out", cfg.out, "Output file, prefix or directory");
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"human", "tabular"}))->capture_default_str();

  std::string pair_file;
  auto* verify = app.add_subcommand("verify", "Check the pair relations");
  verify->add_option("pair", pair_file, "Pair file")->required();

  auto* klass = app.add_subcommand("class", "Print the integer class tr(a - b)");
  klass->add_option("pair", pair_file, "Pair file")->required();

  auto* reduce = app.add_subcommand("reduce", "Split a pair into common part and projections");
  reduce->add_option("pair", pair_file, "Pair file")->required();

  std::string kind;
  std::string func = "t2";
  auto* homotopy = app.add_subcommand("homotopy", "Build and certify a homotopy, writing its trace table");
  homotopy->add_option("kind", kind, "flip | scale | reparam | pq-scale")
      ->required()
      ->check(CLI::IsMember({"flip", "scale", "reparam", "pq-scale"}));
  homotopy->add_option("pair", pair_file, "Pair file")->required();
  homotopy->add_option("--func", func, "Reparametrization for kind=reparam: t2 | t3 | smoothstep")
      ->capture_default_str();

  std::string demo_name;
  auto* demo = app.add_subcommand("demo", "Run a self-verifying demo and write its files");
  demo->add_option("name", demo_name, "universal | bott | clutch")->required();

  std::size_t gen_n = 0;
  std::size_t gen_k = 0;
  auto* gen = app.add_subcommand("gen", "Generate a seeded valid pair");
  gen->add_option("n", gen_n, "Matrix size")->required();
  gen->add_option("k", gen_k, "Size of the common part")->required();
  std::optional<std::uint64_t> gen_seed;
  gen->add_option("seed", gen_seed, "Random seed (overrides --seed)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    cfg.format = format == "tabular" ? Format::Tabular : Format::Human;
    cfg.validate();
    if (*verify) return cmd_verify(pair_file, cfg);
    if (*klass) return cmd_class(pair_file, cfg);
    if (*reduce) return cmd_reduce(pair_file, cfg);
    if (*homotopy) return cmd_homotopy(kind, pair_file, func, cfg);
    if (*demo) return cmd_demo(demo_name, cfg);
    if (*gen) {
      if (gen_seed) cfg.seed = *gen_seed;
      return cmd_gen(gen_n, gen_k, cfg);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return is_mathematical(e.kind()) ? kExitMath : kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
