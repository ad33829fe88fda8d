// Command-line front end for the bandeig library: slice-based eigensolves of
// dense Hermitian matrices, SCF-style sequences with warm starts, spectrum
// partition and inertia inspection, and layout-redistribution accounting.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <variant>
#include <vector>

#include "CLI11.hpp"

#include "bandeig/matrix_io.hpp"
#include "bandeig/perturb.hpp"
#include "bandeig/pipeline.hpp"

namespace {

using namespace bandeig;

struct CommonOpts {
  PipelineConfig cfg;
  std::string format = "auto";
  std::string config_path_doc_only;  // consumed before CLI11 parsing; see expand_config
  bool no_grid = false;

  void finalize() { cfg.use_grid = !no_grid; }

  void attach(CLI::App* app) {
    app->add_option("--config", config_path_doc_only,
                    "key=value config file; flags take precedence");
    app->add_option("--nev", cfg.nev, "number of smallest eigenpairs")->required();
    app->add_option("--slices,-k", cfg.k, "spectrum slices")->capture_default_str();
    app->add_option("--n-bw", cfg.n_bw, "semibandwidth after reduction")->capture_default_str();
    app->add_option("--n-b", cfg.n_b, "block-cyclic block size")->capture_default_str();
    app->add_option("--n-e", cfg.n_e, "contour quadrature nodes (even)")->capture_default_str();
    app->add_option("--eps", cfg.eps, "relative residual tolerance")->capture_default_str();
    app->add_option("--max-iter", cfg.max_iter, "filter passes per slice")->capture_default_str();
    app->add_option("--grid-p", cfg.grid_p, "process grid rows")->capture_default_str();
    app->add_option("--grid-q", cfg.grid_q, "process grid columns")->capture_default_str();
    app->add_flag("--no-grid", no_grid, "skip the simulated distributed-layout paths");
    app->add_option("--alpha", cfg.alpha, "upper bound margin")->capture_default_str();
    app->add_option("--beta", cfg.beta, "lower bound margin")->capture_default_str();
    app->add_option("--seed", cfg.seed, "subspace RNG seed")->capture_default_str();
    app->add_option("--format", format, "matrix format: auto|mm|raw")->capture_default_str();
  }

  MatrixFormat matrix_format() const {
    if (format == "mm") return MatrixFormat::matrix_market;
    if (format == "raw") return MatrixFormat::raw_binary;
    return MatrixFormat::auto_detect;
  }
};

void print_traffic_csv(const TrafficReport& traffic, std::ostream& os) {
  os << "phase,messages,bytes,max_rank_bytes\n";
  for (const auto& ph : traffic.phases)
    os << ph.name << ',' << ph.messages << ',' << ph.bytes << ',' << ph.max_rank_bytes << '\n';
}

template <class S>
void print_result(const PipelineResult<S>& r, bool with_traffic) {
  std::printf("pairs      %lld\n", static_cast<long long>(r.pairs.count()));
  std::printf("slices     %lld\n", static_cast<long long>(r.partition.k));
  std::printf("warm       %s\n", r.warm_started ? "yes" : "no");
  std::printf("residual   %.3e\n", r.accuracy.max_residual);
  std::printf("orth       %.3e\n", r.accuracy.orth);
  std::printf("recovery   %lld rounds, %lld inertia calls\n",
              static_cast<long long>(r.recovery_rounds), static_cast<long long>(r.inertia_calls));
  if (with_traffic) print_traffic_csv(r.traffic, std::cout);
}

template <class S>
void save_outputs(const PipelineResult<S>& r, const std::string& values_path,
                  const std::string& vectors_path) {
  if (!values_path.empty()) {
    std::ofstream f(values_path);
    f.precision(17);
    for (Index i = 0; i < r.pairs.count(); ++i) f << r.pairs.values(i) << '\n';
  }
  if (!vectors_path.empty()) save_vectors_raw(vectors_path, r.pairs.vectors);
}

int run_solve(const CommonOpts& opts, const std::string& path, const std::string& values_path,
              const std::string& vectors_path, bool traffic) {
  AnyHermitian any = load_matrix(path, opts.matrix_format());
  std::visit(
      [&](const auto& A) {
        auto r = solve_one(A, opts.cfg);
        print_result(r, traffic);
        save_outputs(r, values_path, vectors_path);
      },
      any);
  return 0;
}

int run_scf(const CommonOpts& opts, const std::vector<std::string>& paths, Index synthesize,
            double tau, std::uint64_t perturb_seed) {
  std::vector<AnyHermitian> steps;
  for (const auto& p : paths) steps.push_back(load_matrix(p, opts.matrix_format()));
  if (steps.empty()) throw std::runtime_error("scf: at least one matrix required");
  if (synthesize > 1 && steps.size() > 1)
    throw std::runtime_error("scf: --synthesize takes a single base matrix");

  auto drive = [&](auto tag) {
    using S = decltype(tag);
    std::vector<DenseHermitian<S>> seq;
    if (synthesize > 1) {
      seq = perturb_sequence(std::get<DenseHermitian<S>>(steps[0]), tau, synthesize, perturb_seed);
    } else {
      for (auto& any : steps) seq.push_back(std::get<DenseHermitian<S>>(std::move(any)));
    }
    auto results = solve_sequence(seq, opts.cfg);
    std::printf("step warm residual  orth      slices recovery\n");
    for (size_t s = 0; s < results.size(); ++s) {
      const auto& r = results[s];
      std::printf("%4zu %-4s %.3e %.3e %6lld %8lld\n", s, r.warm_started ? "yes" : "no",
                  r.accuracy.max_residual, r.accuracy.orth, static_cast<long long>(r.partition.k),
                  static_cast<long long>(r.recovery_rounds));
    }
  };
  for (const auto& any : steps)
    if (any.index() != steps[0].index())
      throw std::runtime_error("scf: all matrices must share one scalar type");
  if (steps[0].index() == 0)
    drive(double{});
  else
    drive(Complex{});
  return 0;
}

template <class S>
BandedHermitian<S> reduce_to_band(const DenseHermitian<S>& A, Index n_bw) {
  return band_reduce(A, std::min<Index>(n_bw, A.n() - 1)).first;
}

int run_partition(const CommonOpts& opts, const std::string& path) {
  AnyHermitian any = load_matrix(path, opts.matrix_format());
  std::visit(
      [&](const auto& A) {
        auto D = reduce_to_band(A, opts.cfg.n_bw);
        auto [glo, ghi] = D.gershgorin_bounds();
        const double pad = 1e-3 * std::max(1.0, ghi - glo);
        const double bk = gap_shift_above(D, opts.cfg.nev, glo - pad, ghi + pad);
        auto part = inertia_bisection_partition(D, glo - pad, bk, opts.cfg.k);
        std::printf("slices %lld\n", static_cast<long long>(part.k));
        for (Index i = 0; i < part.k; ++i)
          std::printf("slice %lld: [%.12e, %.12e) count %lld\n", static_cast<long long>(i),
                      part.boundaries[i], part.boundaries[i + 1],
                      static_cast<long long>(part.expected_counts[i]));
      },
      any);
  return 0;
}

int run_inertia(const CommonOpts& opts, const std::string& path,
                const std::vector<double>& shifts) {
  AnyHermitian any = load_matrix(path, opts.matrix_format());
  std::visit(
      [&](const auto& A) {
        auto D = reduce_to_band(A, opts.cfg.n_bw);
        std::printf("shift          n_neg n_zero n_pos\n");
        for (double s : shifts) {
          auto in = inertia_robust(D, s);
          std::printf("%.8e %5lld %6lld %5lld\n", in.shift, static_cast<long long>(in.n_neg),
                      static_cast<long long>(in.n_zero), static_cast<long long>(in.n_pos));
        }
      },
      any);
  return 0;
}

int run_redistribute_bench(Index n, Index nev, Index p, Index q, Index n_b, std::uint64_t seed,
                           bool naive) {
  ProcessGrid g(p, q);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  MatrixX<double> X(n, nev);
  for (Index j = 0; j < nev; ++j)
    for (Index i = 0; i < n; ++i) X(i, j) = dist(rng);
  // uneven slice ownership, as after a slice solve
  std::vector<Index> counts(g.ranks(), 0);
  for (Index j = 0; j < nev; ++j) counts[(j * j) % g.ranks()] += 1;
  std::sort(counts.begin(), counts.end(), std::greater<>());
  auto X1 = Irregular1DLayout<double>::scatter(X, counts);

  TrafficReport traffic;
  if (naive) {
    auto [X2, t] = naive_redistribute_oracle(X1, n_b, n_b, g);
    if ((X2.gather() - X).norm() != 0.0) throw std::runtime_error("redistribute-bench: mismatch");
    traffic = std::move(t);
  } else {
    auto [X2, fwd] = redistribute_1d_to_2d(X1, n_b, n_b, g);
    if ((X2.gather() - X).norm() != 0.0) throw std::runtime_error("redistribute-bench: mismatch");
    auto [X1b, bwd] = redistribute_2d_to_1d(X2, counts);
    if ((X1b.gather() - X).norm() != 0.0) throw std::runtime_error("redistribute-bench: mismatch");
    traffic = std::move(fwd);
    for (auto& ph : bwd.phases) traffic.phases.push_back(std::move(ph));
  }
  print_traffic_csv(traffic, std::cout);
  return 0;
}

int run_report(const CommonOpts& opts, const std::string& matrix_path,
               const std::string& values_path, const std::string& vectors_path) {
  AnyHermitian any = load_matrix(matrix_path, opts.matrix_format());
  std::vector<double> values;
  {
    std::ifstream f(values_path);
    if (!f) throw std::runtime_error("report: cannot open " + values_path);
    double v;
    while (f >> v) values.push_back(v);
  }
  std::visit(
      [&](const auto& A) {
        using S = typename std::decay_t<decltype(A)>::Scalar;
        EigenPairs<S> pairs;
        pairs.values =
            Eigen::Map<const VectorX<double>>(values.data(), static_cast<Index>(values.size()));
        AnyVectors any_vecs = load_vectors_raw(vectors_path);
        if (std::holds_alternative<MatrixX<S>>(any_vecs)) {
          pairs.vectors = std::get<MatrixX<S>>(std::move(any_vecs));
        } else if constexpr (is_complex_v<S>) {
          pairs.vectors = std::get<MatrixX<double>>(any_vecs).template cast<S>();
        } else {
          throw std::runtime_error("report: complex vectors given with a real matrix");
        }
        if (pairs.vectors.cols() != pairs.values.size())
          throw std::runtime_error("report: value/vector count mismatch");
        auto rep = accuracy_report(A, pairs);
        std::printf("pairs      %lld\n", static_cast<long long>(pairs.count()));
        std::printf("residual   %.3e\n", rep.max_residual);
        std::printf("orth       %.3e\n", rep.orth);
      },
      any);
  return 0;
}

// Consume "--config FILE" (or --config=FILE) and splice the file's key=value
// entries into the argument list as "--key=value", skipping keys the user
// already supplied on the command line so explicit flags always win.
std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> args;
  std::string config_file;
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    if (a == "--config" && i + 1 < argc) {
      config_file = argv[++i];
    } else if (a.rfind("--config=", 0) == 0) {
      config_file = a.substr(9);
    } else {
      args.push_back(std::move(a));
    }
  }
  if (config_file.empty()) return args;

  std::ifstream f(config_file);
  if (!f) throw CLI::FileError::Missing(config_file);
  auto given = [&args](const std::string& opt) {
    for (const auto& a : args)
      if (a == opt || a.rfind(opt + "=", 0) == 0) return true;
    return false;
  };
  std::string line;
  while (std::getline(f, line)) {
    const auto start = line.find_first_not_of(" \t");
    if (start == std::string::npos || line[start] == '#') continue;
    const auto eq = line.find('=', start);
    if (eq == std::string::npos)
      throw CLI::ConversionError("config line is not key=value: " + line);
    auto trim = [](std::string s) {
      s.erase(0, s.find_first_not_of(" \t"));
      s.erase(s.find_last_not_of(" \t\r") + 1);
      return s;
    };
    const std::string key = trim(line.substr(start, eq - start));
    const std::string value = trim(line.substr(eq + 1));
    const std::string opt = "--" + key;
    if (given(opt)) continue;
    if (value == "true" || value == "false") {
      if (value == "true") args.push_back(opt);
    } else {
      args.push_back(opt + "=" + value);
    }
  }
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bandeig: spectrum-sliced dense Hermitian eigensolver"};
  app.require_subcommand(1);

  CommonOpts solve_opts, scf_opts, part_opts, inertia_opts, report_opts;
  std::string matrix_path, values_path, vectors_path;
  bool with_traffic = false;

  auto* solve = app.add_subcommand("solve", "solve one matrix for the nev smallest pairs");
  solve_opts.attach(solve);
  solve->add_option("matrix", matrix_path, "input matrix file")->required();
  solve->add_option("--out-values", values_path, "write eigenvalues (text)");
  solve->add_option("--out-vectors", vectors_path, "write eigenvectors (raw)");
  solve->add_flag("--traffic", with_traffic, "print layout traffic CSV");

  std::vector<std::string> scf_paths;
  Index synthesize = 0;
  double tau = 1e-4;
  std::uint64_t perturb_seed = 1;
  auto* scf = app.add_subcommand("scf", "solve a sequence of slowly varying matrices");
  scf_opts.attach(scf);
  scf->add_option("matrices", scf_paths, "matrix files, in order")->required();
  scf->add_option("--synthesize", synthesize, "generate N perturbed steps from one base matrix");
  scf->add_option("--tau", tau, "relative perturbation magnitude")->capture_default_str();
  scf->add_option("--perturb-seed", perturb_seed, "perturbation RNG seed")->capture_default_str();

  auto* part = app.add_subcommand("partition", "cold-start spectrum partition of one matrix");
  part_opts.attach(part);
  std::string part_path;
  part->add_option("matrix", part_path, "input matrix file")->required();

  auto* inertia_cmd = app.add_subcommand("inertia", "eigenvalue counts below given shifts");
  inertia_opts.attach(inertia_cmd);
  std::string inertia_path;
  std::vector<double> shifts;
  inertia_cmd->add_option("matrix", inertia_path, "input matrix file")->required();
  inertia_cmd->add_option("--shift", shifts, "shift value (repeatable)")->required();

  Index rb_n = 512, rb_nev = 128, rb_p = 2, rb_q = 2, rb_nb = 64;
  std::uint64_t rb_seed = 3;
  bool rb_naive = false;
  auto* rbench = app.add_subcommand("redistribute-bench", "layout redistribution traffic CSV");
  rbench->add_option("--n", rb_n, "matrix order")->capture_default_str();
  rbench->add_option("--nev", rb_nev, "eigenvector count")->capture_default_str();
  rbench->add_option("--grid-p", rb_p, "process grid rows")->capture_default_str();
  rbench->add_option("--grid-q", rb_q, "process grid columns")->capture_default_str();
  rbench->add_option("--n-b", rb_nb, "block size")->capture_default_str();
  rbench->add_option("--seed", rb_seed, "RNG seed")->capture_default_str();
  rbench->add_flag("--naive", rb_naive, "use the gather/scatter reference path");

  auto* report = app.add_subcommand("report", "accuracy report for saved eigenpairs");
  report_opts.attach(report);
  std::string rep_matrix, rep_values, rep_vectors;
  report->add_option("matrix", rep_matrix, "input matrix file")->required();
  report->add_option("--values", rep_values, "eigenvalue file (text)")->required();
  report->add_option("--vectors", rep_vectors, "eigenvector file (raw)")->required();

  try {
    std::vector<std::string> args = expand_config(argc, argv);
    std::reverse(args.begin(), args.end());  // CLI11 consumes from the back
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // usage problems exit 2, --help exits 0
  }

  for (CommonOpts* o : {&solve_opts, &scf_opts, &part_opts, &inertia_opts, &report_opts})
    o->finalize();

  try {
    if (solve->parsed())
      return run_solve(solve_opts, matrix_path, values_path, vectors_path, with_traffic);
    if (scf->parsed()) return run_scf(scf_opts, scf_paths, synthesize, tau, perturb_seed);
    if (part->parsed()) return run_partition(part_opts, part_path);
    if (inertia_cmd->parsed()) return run_inertia(inertia_opts, inertia_path, shifts);
    if (rbench->parsed())
      return run_redistribute_bench(rb_n, rb_nev, rb_p, rb_q, rb_nb, rb_seed, rb_naive);
    if (report->parsed()) return run_report(report_opts, rep_matrix, rep_values, rep_vectors);
  } catch (const bandeig::PipelineError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
