// sharpmult: command-line front end for the multiplier, martingale and
// Bellman routines. Every table goes to stdout as CSV; optional artifacts go
// to the paths given. Nothing is written before the computation succeeds.
//
// Exit status: 0 success, 2 invalid input, 3 solver failure.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "sharpmult/bellman.hpp"
#include "sharpmult/constants.hpp"
#include "sharpmult/errors.hpp"
#include "sharpmult/io.hpp"
#include "sharpmult/martingale.hpp"
#include "sharpmult/symbols.hpp"
#include "sharpmult/torus.hpp"
#include "sharpmult/witness.hpp"

namespace {

using namespace sharpmult;
using io::format_number;
using io::write_csv_row;

std::string fmt_int(long long value) { return std::to_string(value); }

/// Writes to a file, or stdout for "-".
void emit(const std::string& path, const std::string& content) {
  if (path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path);
  out << content;
}

struct SymbolSource {
  std::string spec_path;
  std::string spec_json;

  void add_to(CLI::App* app) {
    app->add_option("--spec", spec_path, "symbol spec JSON file");
    app->add_option("--spec-json", spec_json, "inline symbol spec JSON");
  }

  [[nodiscard]] symbols::MultiplierSymbol load() const {
    require(spec_path.empty() != spec_json.empty(), "give exactly one of --spec and --spec-json");
    return io::symbol_from_json(spec_path.empty() ? io::parse_json(spec_json)
                                                  : io::read_json_file(spec_path));
  }
};

// ---------------------------------------------------------------------------

struct ConstantsCmd {
  std::vector<double> p;
  double b = -1.0;
  double B = 1.0;

  void run() const {
    std::ostringstream out;
    write_csv_row(out, {"p", "burkholder", "choi_series", "choi_lo", "choi_hi", "b", "B", "kind",
                        "C_lo", "C_hi"});
    for (double q : p) {
      const auto choi = constants::choi_bounds(q);
      const auto known = constants::known_constant(q, b, B);
      write_csv_row(out, {format_number(q), format_number(constants::burkholder_constant(q)),
                          format_number(constants::choi_approx(q)), format_number(choi.lo),
                          format_number(choi.hi), format_number(b), format_number(B),
                          std::string(constants::to_string(known.kind)),
                          format_number(known.bounds.lo),
                          format_number(known.bounds.hi)});
    }
    std::cout << out.str();
  }
};

struct SymbolCmd {
  SymbolSource source;
  std::vector<std::string> at;
  std::size_t check = 0;
  std::uint64_t seed = 0;

  void run() const {
    const auto symbol = source.load();
    std::ostringstream out;
    if (!at.empty()) {
      write_csv_row(out, {"xi", "re", "im"});
      for (const auto& text : at) {
        std::vector<double> xi;
        std::stringstream ss(text);
        std::string part;
        while (std::getline(ss, part, ',')) {
          try {
            xi.push_back(std::stod(part));
          } catch (const std::exception&) {
            throw ValidationError("bad coordinate \"" + part + "\" in --at");
          }
        }
        require(static_cast<int>(xi.size()) == symbol.dimension(),
                "--at point must have d coordinates");
        const auto m = symbol(xi);
        write_csv_row(out, {"\"" + text + "\"", format_number(m.real()), format_number(m.imag())});
      }
    }
    if (check > 0) {
      const auto report = symbols::check_properties(symbol, check, seed);
      write_csv_row(out, {"family", "d", "samples", "seed", "realness", "evenness",
                          "homogeneity"});
      write_csv_row(out, {symbols::to_string(symbol.family()), fmt_int(symbol.dimension()),
                          fmt_int(static_cast<long long>(report.samples)), fmt_int(report.seed),
                          format_number(report.realness), format_number(report.evenness),
                          format_number(report.homogeneity)});
    }
    if (at.empty() && check == 0) out << io::dump(io::symbol_to_json(symbol));
    std::cout << out.str();
  }
};

struct ApplyCmd {
  SymbolSource source;
  std::string input;
  std::string output;

  void run() const {
    const auto symbol = source.load();
    const auto grid = torus::read_grid(input);
    const auto result = torus::apply_multiplier(grid, symbol);
    std::ostringstream bytes;
    torus::write_grid(bytes, result);
    emit(output, bytes.str());
  }
};

struct NormCmd {
  SymbolSource source;
  double p = 2.0;
  int n = 32;
  int iterations = 50;
  std::uint64_t seed = 0;
  std::string start = "random";
  std::string trace;

  void run() const {
    const auto symbol = source.load();
    torus::NormOptions options;
    require(start == "random" || start == "low", "--start must be random or low");
    options.start = start == "random" ? torus::StartMode::random_grid
                                      : torus::StartMode::low_frequency;
    const auto estimate = torus::estimate_norm_lower(symbol, p, n, iterations, seed, options);
    std::ostringstream summary;
    write_csv_row(summary, {"p", "n", "iterations", "seed", "ratio", "iterations_run",
                            "restarts"});
    write_csv_row(summary, {format_number(p), fmt_int(n), fmt_int(iterations), fmt_int(seed),
                            format_number(estimate.ratio), fmt_int(estimate.iterations_run),
                            fmt_int(estimate.restarts)});
    if (!trace.empty()) {
      std::ostringstream rows;
      write_csv_row(rows, {"iter", "ratio"});
      for (std::size_t i = 0; i < estimate.trace.size(); ++i)
        write_csv_row(rows, {fmt_int(static_cast<long long>(i + 1)),
                             format_number(estimate.trace[i])});
      emit(trace, rows.str());
    }
    std::cout << summary.str();
  }
};

struct BellmanCmd {
  double p = 2.0;
  double b = -1.0;
  double B = 1.0;
  double tol_C = 1e-3;
  int resolution = 4096;
  int max_iters = 400000;
  std::string surface;

  void run() const {
    bellman::EstimateOptions options;
    options.envelope.resolution = resolution;
    options.max_iters = max_iters;
    const auto estimate = bellman::estimate_C(p, b, B, tol_C, options);
    std::ostringstream out;
    write_csv_row(out, {"step", "lo", "hi", "C", "feasible", "iterations"});
    for (std::size_t i = 0; i < estimate.history.size(); ++i) {
      const auto& h = estimate.history[i];
      write_csv_row(out, {fmt_int(static_cast<long long>(i + 1)), format_number(h.lo),
                          format_number(h.hi), format_number(h.C), h.feasible ? "1" : "0",
                          fmt_int(h.iterations)});
    }
    write_csv_row(out, {"estimate", "", "", format_number(estimate.C), "", ""});
    if (!surface.empty()) {
      const auto run = bellman::envelope(p, b, B, estimate.C, options.envelope_tol, max_iters,
                                         options.envelope);
      std::ostringstream rows;
      write_csv_row(rows, {"phi", "u"});
      for (int i = 0; i < run.surface.resolution(); ++i)
        write_csv_row(rows, {format_number(run.surface.angle(i)), format_number(run.surface.u[i])});
      emit(surface, rows.str());
    }
    std::cout << out.str();
  }
};

struct WitnessCmd {
  SymbolSource source;
  double p = 4.0;
  int depth = 6;
  int budget = 50;
  std::uint64_t seed = 0;
  std::string output = "-";

  void run() const {
    const auto symbol = source.load();
    const auto certificate = witness::certify_lower_bound(symbol, p, depth, budget, seed);
    emit(output, io::dump(io::certificate_to_json(certificate)));
  }
};

struct SearchCmd {
  double p = 4.0;
  double b = -1.0;
  double B = 1.0;
  int depth = 6;
  int budget = 50;
  std::uint64_t seed = 0;
  std::string trace;
  std::string dump;

  void run() const {
    const auto result = martingale::search_extremal(p, b, B, depth, budget, seed);
    std::ostringstream out;
    write_csv_row(out, {"p", "b", "B", "N", "budget", "seed", "ratio"});
    write_csv_row(out, {format_number(p), format_number(b), format_number(B), fmt_int(depth),
                        fmt_int(budget), fmt_int(seed), format_number(result.ratio)});
    if (!trace.empty()) {
      std::ostringstream rows;
      write_csv_row(rows, {"restart", "sweep", "ratio"});
      for (const auto& r : result.trace)
        write_csv_row(rows, {fmt_int(r.restart), fmt_int(r.sweep), format_number(r.ratio)});
      emit(trace, rows.str());
    }
    if (!dump.empty()) emit(dump, io::dump(io::martingale_to_json(result.f, result.v)));
    std::cout << out.str();
  }
};

struct DpCmd {
  double p = 4.0;
  double b = -1.0;
  double B = 1.0;
  int max_depth = 6;
  int resolution = 4096;
  bool check_resolution = true;

  void run() const {
    require(max_depth >= 1 && max_depth <= 12, "--N must lie in [1, 12]");
    martingale::DpOptions options;
    options.check_resolution = check_resolution;
    std::ostringstream out;
    write_csv_row(out, {"N", "ratio", "refined_ratio", "resolution_too_coarse", "alpha"});
    for (int n = 1; n <= max_depth; ++n) {
      const auto r = martingale::dp_optimal_ratio(p, b, B, n, resolution, options);
      std::string alpha;
      for (std::size_t i = 0; i < r.best_alpha.size(); ++i)
        alpha += (i ? " " : "") + format_number(r.best_alpha[i]);
      write_csv_row(out, {fmt_int(n), format_number(r.ratio),
                          r.refined_ratio ? format_number(*r.refined_ratio) : "",
                          r.resolution_too_coarse ? "1" : "0", alpha});
    }
    std::cout << out.str();
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sharp L^p bounds for Fourier multipliers and martingale transforms"};
  app.require_subcommand(1);

  ConstantsCmd constants_cmd;
  auto* c = app.add_subcommand("constants", "Burkholder, Choi and C_{p,b,B} bounds as CSV");
  c->add_option("--p", constants_cmd.p, "exponent(s)")->required()->expected(1, -1);
  c->add_option("--b", constants_cmd.b, "lower transform bound");
  c->add_option("--B", constants_cmd.B, "upper transform bound");
  c->callback([&] { constants_cmd.run(); });

  SymbolCmd symbol_cmd;
  auto* s = app.add_subcommand("symbol", "evaluate or check a symbol spec");
  symbol_cmd.source.add_to(s);
  s->add_option("--at", symbol_cmd.at, "comma-separated frequency, repeatable");
  s->add_option("--check", symbol_cmd.check, "random samples for realness/evenness/homogeneity");
  s->add_option("--seed", symbol_cmd.seed, "sampling seed");
  s->callback([&] { symbol_cmd.run(); });

  ApplyCmd apply_cmd;
  auto* a = app.add_subcommand("apply", "apply a multiplier to a TGRD grid");
  apply_cmd.source.add_to(a);
  a->add_option("--in", apply_cmd.input, "input grid")->required();
  a->add_option("--out", apply_cmd.output, "output grid, - for stdout")->required();
  a->callback([&] { apply_cmd.run(); });

  NormCmd norm_cmd;
  auto* n = app.add_subcommand("norm", "power-iteration lower bound for the L^p norm");
  norm_cmd.source.add_to(n);
  n->add_option("--p", norm_cmd.p, "exponent")->required();
  n->add_option("--n", norm_cmd.n, "grid points per axis");
  n->add_option("--iterations", norm_cmd.iterations, "power iterations");
  n->add_option("--seed", norm_cmd.seed, "start seed");
  n->add_option("--start", norm_cmd.start, "random or low");
  n->add_option("--trace", norm_cmd.trace, "CSV trace path (iter, ratio)");
  n->callback([&] { norm_cmd.run(); });

  BellmanCmd bellman_cmd;
  auto* bl = app.add_subcommand("bellman", "estimate C_{p,b,B} by envelope bisection");
  bl->add_option("--p", bellman_cmd.p, "exponent")->required();
  bl->add_option("--b", bellman_cmd.b, "lower transform bound");
  bl->add_option("--B", bellman_cmd.B, "upper transform bound");
  bl->add_option("--tol-C", bellman_cmd.tol_C, "final bracket width");
  bl->add_option("--resolution", bellman_cmd.resolution, "angular nodes");
  bl->add_option("--max-iters", bellman_cmd.max_iters, "sweeps per envelope");
  bl->add_option("--surface", bellman_cmd.surface, "CSV dump (phi, u) of the envelope at the estimate");
  bl->callback([&] { bellman_cmd.run(); });

  WitnessCmd witness_cmd;
  auto* w = app.add_subcommand("witness", "certified lower bound as JSON");
  witness_cmd.source.add_to(w);
  w->add_option("--p", witness_cmd.p, "exponent")->required();
  w->add_option("--N", witness_cmd.depth, "martingale depth");
  w->add_option("--budget", witness_cmd.budget, "search restarts");
  w->add_option("--seed", witness_cmd.seed, "search seed");
  w->add_option("--out", witness_cmd.output, "certificate path, - for stdout");
  w->callback([&] { witness_cmd.run(); });

  SearchCmd search_cmd;
  auto* sr = app.add_subcommand("search", "extremal martingale transform search");
  sr->add_option("--p", search_cmd.p, "exponent")->required();
  sr->add_option("--b", search_cmd.b, "lower transform bound");
  sr->add_option("--B", search_cmd.B, "upper transform bound");
  sr->add_option("--N", search_cmd.depth, "martingale depth");
  sr->add_option("--budget", search_cmd.budget, "restarts");
  sr->add_option("--seed", search_cmd.seed, "seed");
  sr->add_option("--trace", search_cmd.trace, "CSV trace path (restart, sweep, ratio)");
  sr->add_option("--dump", search_cmd.dump, "JSON martingale dump path");
  sr->callback([&] { search_cmd.run(); });

  DpCmd dp_cmd;
  auto* d = app.add_subcommand("dp", "finite-depth optimum table over N = 1..N");
  d->add_option("--p", dp_cmd.p, "exponent")->required();
  d->add_option("--b", dp_cmd.b, "lower transform bound");
  d->add_option("--B", dp_cmd.B, "upper transform bound");
  d->add_option("--N", dp_cmd.max_depth, "largest depth");
  d->add_option("--resolution", dp_cmd.resolution, "angular nodes");
  d->add_flag("!--no-refine", dp_cmd.check_resolution, "skip the doubled-resolution rerun");
  d->callback([&] { dp_cmd.run(); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const EvaluationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const SolverError& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
