// Acceptance run: one PASS/FAIL line per criterion, exit status 0 only when
// every criterion passes.

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

#include "oracles.hpp"

#ifndef SOFTK_CLI_PATH
#error "SOFTK_CLI_PATH must point at the softk executable"
#endif

namespace fs = std::filesystem;
using namespace softk;

namespace {

constexpr double kRelationTol = 1e-10;
constexpr double kIdentityTol = 1e-8;
constexpr double kPathTol = 1e-9;
constexpr double kEndpointTol = 1e-12;
constexpr double kNegativeControlTol = 1e-12;

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt_g(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

const std::vector<GeneratedPair>& corpus() {
  static const std::vector<GeneratedPair> c = testing::corpus(1000);
  return c;
}

Outcome relation_soundness() {
  const auto start = Clock::now();
  double worst = 0.0;
  double worst_oracle = 0.0;
  std::size_t failures = 0;
  for (const auto& e : testing::corpus_entries(1000)) {
    const auto g = random_valid_pair(e.n, e.k, e.seed);
    const auto r = check_relations(g.pair, kRelationTol);
    const auto [o1, o2] = testing::oracle_residuals(g.pair);
    worst = std::max({worst, r.r1, r.r2});
    worst_oracle = std::max({worst_oracle, o1, o2});
    if (!r.pass || o1 > kRelationTol || o2 > kRelationTol) ++failures;
  }
  const double elapsed = seconds_since(start);
  return {failures == 0 && elapsed < 5.0,
          "1000 pairs, failures " + std::to_string(failures) + ", worst residual " + fmt_g(worst) + " (oracle " +
              fmt_g(worst_oracle) + "), " + fmt_g(elapsed) + " s (limit 5 s)"};
}

Outcome derived_identities() {
  const auto start = Clock::now();
  double worst = 0.0;
  for (const auto& g : corpus()) {
    const auto r = check_derived_identities(g.pair, kRelationTol);
    worst = std::max(worst, r.max_deviation());
  }
  const double elapsed = seconds_since(start);
  return {worst <= kIdentityTol && elapsed < 10.0,
          "worst deviation " + fmt_g(worst) + " over g, h, sqrt identities, " + fmt_g(elapsed) + " s (limit 10 s)"};
}

Outcome integer_class() {
  std::size_t mismatches = 0;
  double worst_gap = 0.0;
  for (const auto& g : corpus()) {
    const long c = class_of_pair(g.pair);
    const double tau = (g.pair.a.trace() - g.pair.b.trace()).real();
    worst_gap = std::max(worst_gap, std::abs(tau - static_cast<double>(c)));
    if (reduce_to_projections(g.pair).klass() != c || g.meta.rank_difference() != c) ++mismatches;
    SeededStream rng(g.meta.seed, 0xc1a55);
    for (int j = 0; j < 10; ++j) {
      const CMatrix u = random_unitary(g.pair.dim(), rng);
      if (class_of_pair({u * g.pair.a * u.adjoint(), u * g.pair.b * u.adjoint()}) != c) ++mismatches;
    }
  }
  return {mismatches == 0 && worst_gap <= 1e-8,
          "mismatches " + std::to_string(mismatches) + ", worst |trace - class| " + fmt_g(worst_gap)};
}

Outcome flip_certification() {
  const auto start = Clock::now();
  double worst = 0.0;
  double worst_endpoint = 0.0;
  std::size_t failures = 0;
  for (std::size_t i = 0; i < 100; ++i) {
    const auto& g = corpus()[i];
    const auto path = rotation_flip_path(g.pair, 101, kRelationTol);
    const auto report = verify_path(path, kPathTol);
    worst = std::max({worst, report.worst_r1, report.worst_r2});
    bool zero_class = true;
    for (const auto& s : report.samples) zero_class = zero_class && s.klass == 0;
    if (!report.pass || !zero_class || path.pairs.size() != 101) ++failures;
    const CMatrix ab = direct_sum(g.pair.a, g.pair.b);
    const CMatrix ba = direct_sum(g.pair.b, g.pair.a);
    worst_endpoint = std::max({worst_endpoint, testing::oracle_norm(path.pairs.front().b - ba),
                               testing::oracle_norm(path.pairs.back().b - ab),
                               testing::oracle_norm(path.pairs.front().a - ab)});
  }
  const double elapsed = seconds_since(start);
  return {failures == 0 && worst <= kPathTol && worst_endpoint <= kEndpointTol && elapsed < 30.0,
          "100 paths x 101 samples, failures " + std::to_string(failures) + ", worst residual " + fmt_g(worst) +
              ", endpoint error " + fmt_g(worst_endpoint) + ", " + fmt_g(elapsed) + " s (limit 30 s)"};
}

Outcome reparametrization() {
  std::size_t failures = 0;
  double worst_diff = 0.0;
  double worst_residual = 0.0;
  for (const auto& f : {fn::power(2), fn::smoothstep()}) {
    for (const auto& g : corpus()) {
      const auto path = reparam_path(g.pair, f, 101, kRelationTol);
      const auto report = verify_path(path, kIdentityTol);
      worst_residual = std::max({worst_residual, report.worst_r1, report.worst_r2});
      if (!report.pass) ++failures;
      const SoftPair& end = path.pairs.back();
      worst_diff = std::max(worst_diff, testing::oracle_norm((end.a - end.b) - (g.pair.a - g.pair.b)));
    }
  }
  return {failures == 0 && worst_diff <= kIdentityTol,
          "2000 paths, failures " + std::to_string(failures) + ", worst residual " + fmt_g(worst_residual) +
              ", worst |(f(a) - f(b)) - (a - b)| " + fmt_g(worst_diff)};
}

Outcome universal_model() {
  const auto grid = uniform_grid(201);
  const bool membership = grid.size() == 201 && check_membership(generator_a(grid)).pass &&
                          check_membership(generator_b(grid)).pass;

  double worst_defect = 0.0;
  double worst_endpoint = 0.0;
  std::size_t path_failures = 0;
  for (const auto& g : corpus()) {
    const auto pq = build_PQ(g.pair, kRelationTol);
    worst_defect = std::max({worst_defect, testing::oracle_norm(pq.P * pq.P - pq.P),
                             testing::oracle_norm(pq.Q * pq.Q - pq.Q)});
    const auto path = scaling_homotopy_PQ(g.pair, 101, kRelationTol);
    if (!verify_path(path, kPathTol).pass) ++path_failures;
    const CMatrix zero = CMatrix::zero(g.pair.dim());
    worst_endpoint = std::max({worst_endpoint, testing::oracle_norm(path.pairs.back().a - pq.P),
                               testing::oracle_norm(path.pairs.back().b - pq.Q),
                               testing::oracle_norm(path.pairs.front().a - direct_sum(zero, g.pair.a)),
                               testing::oracle_norm(path.pairs.front().b - direct_sum(zero, g.pair.b))});
  }

  std::size_t roundtrip_failures = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    SeededStream rng(seed, 0x10a);
    const std::size_t n = 1 + seed % 8;
    const std::size_t rp = rng.next_u64() % (n + 1);
    const std::size_t rq = rng.next_u64() % (n + 1);
    const CMatrix p = testing::random_projection(n, rp, rng);
    const CMatrix q = testing::random_projection(n, rq, rng);
    if (kappa(iota(p, q)) != static_cast<long>(rp) - static_cast<long>(rq)) ++roundtrip_failures;
  }
  return {membership && worst_defect <= kIdentityTol && path_failures == 0 && worst_endpoint <= kEndpointTol &&
              roundtrip_failures == 0,
          std::string("membership ") + (membership ? "ok" : "FAILED") + ", worst projection defect " +
              fmt_g(worst_defect) + ", scaling path failures " + std::to_string(path_failures) +
              ", endpoint error " + fmt_g(worst_endpoint) + ", kappa(iota) failures " +
              std::to_string(roundtrip_failures) + "/200"};
}

Outcome topological_demo() {
  const auto start = Clock::now();
  auto coarse = std::make_shared<const SpaceGrid>(make_sphere(32, 64));
  auto fine = std::make_shared<const SpaceGrid>(make_sphere(64, 128));
  const MatrixField p = bott_projection(coarse);
  const long c = chern_number(p);
  const long c_fine = chern_number(bott_projection(fine));
  const long c_const = chern_number(constant_field(coarse, CMatrix::diagonal({1.0, 0.0})));
  const long c_comp = chern_number(complement(p));
  const double elapsed = seconds_since(start);
  return {c == 1 && c_fine == 1 && c_const == 0 && c_comp == -1 && elapsed < 20.0,
          "bott " + std::to_string(c) + " (32x64), " + std::to_string(c_fine) + " (64x128), constant " +
              std::to_string(c_const) + ", complement " + std::to_string(c_comp) + ", " + fmt_g(elapsed) +
              " s (limit 20 s)"};
}

Outcome negative_controls() {
  const SoftPair bad{CMatrix::diagonal({0.5, 1.0}), CMatrix::diagonal({0.6, 0.0})};
  const auto r = check_relations(bad, kRelationTol);
  const bool rejected = !r.pass && std::abs(r.r1 - 0.025) <= kNegativeControlTol;

  // (diag(1,0), diag(0,1)) moved linearly against each other: the sample at
  // t = 1/2 is (diag(0.5,0), diag(0,0.5)) with first residual 0.125.
  std::vector<double> params;
  std::vector<SoftPair> pairs;
  for (std::size_t i = 0; i <= 100; ++i) {
    const double t = static_cast<double>(i) / 100.0;
    params.push_back(t);
    pairs.push_back({CMatrix::diagonal({1.0 - t, 0.0}), CMatrix::diagonal({0.0, t})});
  }
  const auto report = verify_path(make_path(params, pairs), kRelationTol);
  const auto& mid = report.samples[50].relations;
  const bool midpoint_fails = !report.pass && !mid.pass && std::abs(mid.r1 - 0.125) <= kNegativeControlTol;

  // Linear path diag(1 - t, t) against its reverse diag(t, 1 - t).
  std::vector<SoftPair> crossed;
  for (double t : params) crossed.push_back({CMatrix::diagonal({1.0 - t, t}), CMatrix::diagonal({t, 1.0 - t})});
  const bool crossed_fails = !verify_path(make_path(params, crossed), kRelationTol).pass;

  return {rejected && midpoint_fails && crossed_fails,
          "verifier r1 " + io::format_real(r.r1) + (r.pass ? " accepted" : " rejected") + ", midpoint r1 " +
              fmt_g(mid.r1) + (mid.pass ? " accepted" : " rejected") + ", crossed path " +
              (crossed_fails ? "rejected" : "accepted")};
}

int run_cli(const fs::path& dir, const std::string& args) {
  const std::string cmd =
      "cd '" + dir.string() + "' && '" SOFTK_CLI_PATH "' " + args + " > stdout.txt 2> stderr.txt";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Runs the command in two fresh directories and compares every file produced.
bool identical_reruns(const fs::path& root, const std::string& args, const std::string& input, std::string& why) {
  std::map<std::string, std::string> first;
  for (int round = 0; round < 2; ++round) {
    const fs::path dir = root / ("run" + std::to_string(round));
    fs::remove_all(dir);
    fs::create_directories(dir);
    if (!input.empty()) fs::copy_file(root / input, dir / input);
    const int code = run_cli(dir, args);
    if (code != 0) {
      why = "'" + args + "' exited " + std::to_string(code);
      return false;
    }
    std::map<std::string, std::string> files;
    for (const auto& e : fs::recursive_directory_iterator(dir)) {
      if (e.is_regular_file() && e.path().filename() != "stderr.txt")
        files[fs::relative(e.path(), dir).string()] = slurp(e.path());
    }
    if (round == 0) {
      first = std::move(files);
    } else if (files != first) {
      why = "'" + args + "' differs between runs";
      return false;
    }
  }
  return true;
}

Outcome determinism() {
  const fs::path root = fs::temp_directory_path() / "softk_acceptance_determinism";
  fs::remove_all(root);
  fs::create_directories(root);
  if (run_cli(root, "gen 6 3 --seed 17 --out pair.json") != 0) return {false, "gen failed"};

  const std::vector<std::pair<std::string, std::string>> commands{
      {"gen 6 3 --seed 17 --out g.json", ""},
      {"gen 8 0 --seed 3", ""},
      {"verify pair.json --format tabular", "pair.json"},
      {"class pair.json", "pair.json"},
      {"reduce pair.json --format tabular --out red", "pair.json"},
      {"homotopy flip pair.json --out flip.txt", "pair.json"},
      {"homotopy scale pair.json --out scale.txt", "pair.json"},
      {"homotopy reparam pair.json --func smoothstep --out reparam.txt", "pair.json"},
      {"homotopy pq-scale pair.json --out pq.txt", "pair.json"},
      {"demo universal --out demo", ""},
      {"demo bott --grid 16 --out demo", ""},
      {"demo clutch --out demo", ""},
  };
  std::size_t ok = 0;
  std::string why;
  for (const auto& [args, input] : commands) {
    if (identical_reruns(root, args, input, why)) ++ok;
    else break;
  }
  fs::remove_all(root);
  const bool pass = ok == commands.size();
  return {pass, std::to_string(ok) + "/" + std::to_string(commands.size()) + " commands bit-identical" +
                    (pass ? "" : " (" + why + ")")};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1 relation soundness", relation_soundness},
      {"2 derived identities", derived_identities},
      {"3 integer class", integer_class},
      {"4 flip certification", flip_certification},
      {"5 reparametrization", reparametrization},
      {"6 universal model", universal_model},
      {"7 topological demo", topological_demo},
      {"8 negative controls", negative_controls},
      {"9 determinism", determinism},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    std::printf("%s  %-24s %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
