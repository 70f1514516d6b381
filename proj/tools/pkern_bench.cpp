// Copyright 2026 The pkern Authors
// SPDX-License-Identifier: Apache-2.0

// pkern-bench: oracle verification and timing for every kernel.
//
//   pkern-bench verify <kernel> [--n N] [--trials T] [--seed S]
//   pkern-bench verify-all [--seed S] [--inject-fault KERNEL]
//   pkern-bench bench <kernel> [--variant V|all] [--sizes a,b,..] ...
//
// Bench output is CSV with the columns
//   kernel,variant,rows,cols,nnz,batch,threads,seed,rep,min_ms,mean_ms,max_ms,check
// plus a trailing `speedup` column when --compare is given.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bench_cases.hpp"
#include "pkern/pkern.hpp"
#include "pkern/verify/suite.hpp"

namespace {

using pkern::bench::Case;
using pkern::bench::Options;

struct Timing {
  double min_ms = 0, mean_ms = 0, max_ms = 0;
};

Timing time_case(Case& c, int warmups, int reps) {
  using clock = std::chrono::steady_clock;
  for (int w = 0; w < warmups; ++w) {
    if (c.reset) c.reset();
    c.run();
  }
  Timing t;
  t.min_ms = 1e300;
  double total = 0;
  for (int r = 0; r < reps; ++r) {
    if (c.reset) c.reset();
    const auto t0 = clock::now();
    c.run();
    const double ms = std::chrono::duration<double, std::milli>(clock::now() - t0).count();
    t.min_ms = std::min(t.min_ms, ms);
    t.max_ms = std::max(t.max_ms, ms);
    total += ms;
  }
  t.mean_ms = total / reps;
  return t;
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(4) << v;
  return os.str();
}

int run_bench(Options o, int threads, const std::string& out_path) {
  const auto* info = pkern::bench::find_info(o.kernel);
  if (info == nullptr) {
    std::cerr << "pkern-bench: unknown kernel '" << o.kernel << "'\n";
    return 2;
  }
  auto known = [&](const std::string& v) {
    return std::find(info->variants.begin(), info->variants.end(), v) != info->variants.end();
  };
  if (o.variant.empty() && o.kernel.rfind("batched-", 0) == 0) o.variant = o.layout;
  std::vector<std::string> variants;
  if (o.variant == "all") {
    variants = info->variants;
  } else {
    variants.push_back(o.variant.empty() ? info->variants.front() : o.variant);
  }
  if (!o.compare.empty() && std::find(variants.begin(), variants.end(), o.compare) == variants.end()) {
    variants.push_back(o.compare);
  }
  for (const auto& v : variants) {
    if (!known(v)) {
      std::cerr << "pkern-bench: kernel " << o.kernel << " has no variant '" << v << "'\n";
      return 2;
    }
  }

  std::ofstream file;
  std::ostream* os = &std::cout;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) {
      std::cerr << "pkern-bench: cannot open " << out_path << "\n";
      return 1;
    }
    os = &file;
  }

  std::cerr << "# bench " << o.kernel << " variants=";
  for (const auto& v : variants) std::cerr << v << ' ';
  std::cerr << "reps=" << o.reps << " warmups=" << o.warmups << " threads=" << threads << " seed=" << o.seed
            << (o.include_symbolic ? " include-symbolic" : "") << (o.matrix.empty() ? "" : " matrix=" + o.matrix)
            << "\n";

  auto cases = pkern::bench::make_cases(o, variants);
  std::vector<Timing> times;
  std::vector<bool> checks;
  for (auto& c : cases) {
    times.push_back(time_case(c, o.warmups, o.reps));
    checks.push_back(c.check ? c.check() : true);
  }

  const bool with_speedup = !o.compare.empty();
  *os << "kernel,variant,rows,cols,nnz,batch,threads,seed,rep,min_ms,mean_ms,max_ms,check"
      << (with_speedup ? ",speedup" : "") << "\n";
  bool all_ok = true;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const auto& c = cases[i];
    all_ok = all_ok && checks[i];
    *os << o.kernel << ',' << c.variant << ',' << c.rows << ',' << c.cols << ',' << c.nnz << ',' << c.batch << ','
        << threads << ',' << o.seed << ',' << o.reps << ',' << fmt(times[i].min_ms) << ',' << fmt(times[i].mean_ms)
        << ',' << fmt(times[i].max_ms) << ',' << (checks[i] ? "pass" : "fail");
    if (with_speedup) {
      // Mean time of the --compare variant on the same input over this one.
      double base = 0.0;
      for (std::size_t j = 0; j < cases.size(); ++j)
        if (cases[j].group == c.group && cases[j].variant == o.compare) base = times[j].mean_ms;
      *os << ',' << fmt(times[i].mean_ms > 0 ? base / times[i].mean_ms : 0.0);
    }
    *os << "\n";
  }
  return all_ok ? 0 : 1;
}

int run_verify(const std::string& kernel, const pkern::verify::Config& cfg) {
  const auto* k = pkern::verify::find_kernel(kernel);
  if (k == nullptr) {
    std::cerr << "pkern-bench: unknown kernel '" << kernel << "'\n";
    return 2;
  }
  const auto r = k->run(cfg);
  std::cout << r.kernel << ": " << r.passed << "/" << r.total << " oracle matches\n";
  if (!r.ok()) std::cout << "FAIL " << r.kernel << ": " << r.first_failure << "\n";
  return r.ok() ? 0 : 1;
}

int run_verify_all(const pkern::verify::Config& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  int failures = 0;
  for (const auto& k : pkern::verify::kernels()) {
    pkern::verify::Config c = cfg;
    const auto r = k.run(c);
    std::cout << std::left << std::setw(16) << r.kernel << ' ' << r.passed << "/" << r.total << " oracle matches\n";
    if (!r.ok()) {
      ++failures;
      std::cout << "FAIL " << r.kernel << ": " << r.first_failure << "\n";
    }
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::cout << (failures == 0 ? "all kernels passed" : std::to_string(failures) + " kernel(s) failed") << " in "
            << fmt(s) << " s\n";
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pkern kernel verification and benchmarking"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "Thread count (default: PKERN_NUM_THREADS or the OpenMP default)");

  pkern::verify::Config vcfg;
  std::string vkernel;
  auto* verify = app.add_subcommand("verify", "Run one kernel's oracle suite");
  verify->add_option("kernel", vkernel, "Kernel name")->required();
  verify->add_option("--n", vcfg.n, "Problem size bound");
  verify->add_option("--trials", vcfg.trials, "Number of random cases");
  verify->add_option("--seed", vcfg.seed, "Random seed");
  verify->add_option("--batch", vcfg.batch, "Batch count for batched kernels");

  pkern::verify::Config acfg;
  auto* verify_all = app.add_subcommand("verify-all", "Run every kernel's oracle suite at small sizes");
  verify_all->add_option("--seed", acfg.seed, "Random seed");
  verify_all->add_option("--inject-fault", acfg.inject_fault, "Corrupt one kernel's symbolic output (spadd, spgemm)")
      ->check(CLI::IsMember({"spadd", "spgemm"}));

  Options bo;
  std::string out_path;
  auto* bench = app.add_subcommand("bench", "Time one kernel and emit CSV");
  bench->add_option("kernel", bo.kernel, "Kernel name")->required();
  bench->add_option("--variant", bo.variant, "Algorithm variant, or 'all'");
  bench->add_option("--compare", bo.compare, "Variant to compare against (adds a speedup column)");
  bench->add_option("--sizes", bo.sizes, "Comma-separated problem sizes")->delimiter(',');
  bench->add_option("--n", bo.n, "Problem size");
  bench->add_option("--nnz-per-row", bo.nnz_per_row, "Entries per row for generated matrices");
  bench->add_option("--batch", bo.batch, "Batch count for batched kernels");
  bench->add_option("--stencil", bo.stencil, "Stencil kind for spmv-structured (3pt, 5pt, 7pt, 9pt, 27pt)");
  bench->add_option("--dims", bo.dims, "Box dimensions, comma-separated")->delimiter(',');
  bench->add_option("--layout", bo.layout, "Batch layout (contiguous, interleaved)")
      ->check(CLI::IsMember({"contiguous", "interleaved"}));
  bench->add_option("--matrix", bo.matrix, "MatrixMarket input instead of a generated matrix")->check(CLI::ExistingFile);
  bench->add_flag("--include-symbolic", bo.include_symbolic, "Time the symbolic phase as well");
  bench->add_option("--reps", bo.reps, "Timed repetitions")->check(CLI::PositiveNumber);
  bench->add_option("--warmups", bo.warmups, "Untimed warmup runs")->check(CLI::NonNegativeNumber);
  bench->add_option("--seed", bo.seed, "Random seed");
  bench->add_option("--out", out_path, "CSV output file (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  if (threads <= 0) threads = pkern::threads_from_environment();
  if (threads > 0) pkern::set_num_threads(threads);
  threads = pkern::max_threads();

  try {
    if (*verify) return run_verify(vkernel, vcfg);
    if (*verify_all) return run_verify_all(acfg);
    return run_bench(bo, threads, out_path);
  } catch (const std::exception& e) {
    std::cerr << "pkern-bench: " << e.what() << "\n";
    return 1;
  }
}
