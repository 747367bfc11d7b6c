#include "rankdiff/commands.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>
#include <vector>

#include "rankdiff/csv.hpp"
#include "rankdiff/dynamics.hpp"
#include "rankdiff/finite_law.hpp"
#include "rankdiff/nonlinear_law.hpp"
#include "rankdiff/oracles.hpp"
#include "rankdiff/stats.hpp"
#include "rankdiff/svg_plot.hpp"
#include "rankdiff/transport.hpp"

namespace rankdiff {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitDomain = 3;
constexpr int kExitNumeric = 4;

template <class Fn>
void parallel_for(std::size_t count, int workers, Fn fn) {
  workers = std::max(1, std::min<int>(workers, static_cast<int>(count)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    });
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

std::filesystem::path ensure_out_dir(const ExperimentConfig& cfg) {
  std::filesystem::path dir(cfg.out_dir);
  std::filesystem::create_directories(dir);
  return dir;
}

// Wall time is deliberately kept out of the CSVs (they must be byte-stable
// for a fixed config and seed); it goes to a side file instead.
struct RunMetadata {
  std::string command;
  std::filesystem::path dir;
  std::string hash;
  std::chrono::steady_clock::time_point start =
      std::chrono::steady_clock::now();

  ~RunMetadata() {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    std::ofstream out(dir / "run_metadata.txt", std::ios::trunc);
    if (!out) return;
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    out << "command=" << command << "\n"
        << "config_hash=" << hash << "\n"
        << "wall_time_seconds=" << fmt(seconds) << "\n";
  }
};

// every command validates the model first (exit 2 contract)
bool validate_or_report(const DriftModel& model, std::ostream& log) {
  const ValidationReport rep = validate_assumption_E(model);
  if (!rep.passed) log << "model validation failed: " << rep.message << "\n";
  return rep.passed;
}

void print_validation_table(const ValidationReport& rep, std::ostream& log) {
  log << std::left << std::setw(28) << "check" << std::setw(16) << "measured"
      << std::setw(12) << "tolerance" << "result\n";
  for (const auto& c : rep.checks)
    log << std::left << std::setw(28) << c.name << std::setw(16)
        << fmt(c.measured) << std::setw(12) << fmt(c.tolerance)
        << (c.passed ? "pass" : "FAIL") << "\n";
  log << (rep.passed ? "PASS" : "FAIL") << ": " << rep.message << "\n";
}

struct LaplaceRow {
  std::string text;
  bool violated = false;
};

std::string nan_cell() { return "nan"; }

}  // namespace

int cmd_validate(const ExperimentConfig& cfg, std::ostream& log) {
  DriftModel model = cfg.model.build();
  const ValidationReport rep = validate_assumption_E(model);
  print_validation_table(rep, log);
  return rep.passed ? kExitOk : kExitConfig;
}

int cmd_laplace_table(const ExperimentConfig& cfg, const RunOptions& opt,
                      std::ostream& log) {
  DriftModel model = cfg.model.build();
  if (!validate_or_report(model, log)) return kExitConfig;
  const auto dir = ensure_out_dir(cfg);
  RunMetadata meta{"laplace-table", dir, cfg.hash_hex};
  NonlinearLaw law(model);
  const LaplaceDomainV V = law.laplace_domain();

  const auto& ladder = cfg.laplace.n_ladder;
  const auto& grid = cfg.laplace.grid;
  std::vector<LaplaceRow> rows(ladder.size() * grid.size());

  parallel_for(ladder.size(), opt.workers, [&](std::size_t li) {
    FiniteLaw fin(model, ladder[li]);
    for (std::size_t gi = 0; gi < grid.size(); ++gi) {
      const auto [s, t] = grid[gi];
      const bool in_V2 =
          V.contains(s) && V.contains(t) && V.contains(s + t);
      std::string l2n = nan_cell(), l1s = nan_cell(), l1t = nan_cell();
      std::string lis = nan_cell(), lit = nan_cell(), err = nan_cell();
      std::string status = in_V2 ? "ok" : "outside_V2";
      double l2nv = 0.0;
      bool have_l2n = false;
      try {
        l2nv = fin.laplace_L2n(s, t);
        l2n = fmt(l2nv);
        have_l2n = true;
        l1s = fmt(fin.laplace_L1n(s));
        l1t = fmt(fin.laplace_L1n(t));
      } catch (const std::domain_error&) {
        status = "infeasible";
      }
      if (V.contains(s) && V.contains(t)) {
        const double ls = law.laplace(s), lt = law.laplace(t);
        lis = fmt(ls);
        lit = fmt(lt);
        if (have_l2n) err = fmt(std::abs(l2nv - ls * lt));
      }
      std::ostringstream os;
      os << ladder[li] << "," << fmt(s) << "," << fmt(t) << "," << l2n << ","
         << l1s << "," << l1t << "," << lis << "," << lit << "," << err << ","
         << status << "," << cfg.hash_hex;
      rows[li * grid.size() + gi] = {os.str(), status != "ok"};
    }
  });

  CsvWriter csv((dir / "laplace_table.csv").string());
  csv.meta("command", "laplace-table");
  csv.meta("model", model.describe());
  csv.meta("config_hash", cfg.hash_hex);
  csv.header({"n", "s", "t", "L2n", "L1n_s", "L1n_t", "Linf_s", "Linf_t",
              "abs_error", "status", "config"});
  bool any_violation = false;
  for (const auto& r : rows) {
    csv.row({r.text});
    any_violation = any_violation || r.violated;
  }
  log << "wrote " << (dir / "laplace_table.csv").string() << "\n";
  if (any_violation && opt.strict) {
    log << "strict mode: grid contains points outside the admissible domain\n";
    return kExitDomain;
  }
  return kExitOk;
}

int cmd_chaoticity_scan(const ExperimentConfig& cfg, const RunOptions& opt,
                        std::ostream& log) {
  DriftModel model = cfg.model.build();
  if (!validate_or_report(model, log)) return kExitConfig;
  const auto dir = ensure_out_dir(cfg);
  RunMetadata meta{"chaoticity-scan", dir, cfg.hash_hex};
  NonlinearLaw law(model);
  const LaplaceDomainV V = law.laplace_domain();

  const auto& ladder = cfg.chaoticity.n_ladder;
  const auto& grid = cfg.chaoticity.grid;
  for (const auto& [s, t] : grid)
    if (!(V.contains(s) && V.contains(t) && V.contains(s + t))) {
      log << "chaoticity grid point (" << s << "," << t
          << ") outside V_2\n";
      if (opt.strict) return kExitDomain;
    }

  struct Cell {
    double l2n = std::numeric_limits<double>::quiet_NaN();
    bool ok = false;
  };
  std::vector<Cell> cells(ladder.size() * grid.size());
  parallel_for(ladder.size(), opt.workers, [&](std::size_t li) {
    FiniteLaw fin(model, ladder[li]);
    for (std::size_t gi = 0; gi < grid.size(); ++gi) {
      const auto [s, t] = grid[gi];
      try {
        cells[li * grid.size() + gi] = {fin.laplace_L2n(s, t), true};
      } catch (const std::domain_error&) {
      }
    }
  });

  CsvWriter csv((dir / "chaoticity_scan.csv").string());
  csv.meta("command", "chaoticity-scan");
  csv.meta("model", model.describe());
  csv.meta("config_hash", cfg.hash_hex);
  csv.header({"n", "s", "t", "L2n", "Linf_product", "abs_error", "config"});

  std::vector<PlotSeries> series(grid.size());
  std::vector<std::array<double, 2>> fits;  // (slope, points)
  for (std::size_t gi = 0; gi < grid.size(); ++gi) {
    const auto [s, t] = grid[gi];
    double limit = std::numeric_limits<double>::quiet_NaN();
    if (V.contains(s) && V.contains(t))
      limit = law.laplace(s) * law.laplace(t);
    std::ostringstream label;
    label << "(" << fmt(s) << "," << fmt(t) << ")";
    series[gi].label = label.str();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (std::size_t li = 0; li < ladder.size(); ++li) {
      const Cell& c = cells[li * grid.size() + gi];
      const double err =
          (c.ok && std::isfinite(limit)) ? std::abs(c.l2n - limit)
                                         : std::numeric_limits<double>::quiet_NaN();
      csv.row({std::to_string(ladder[li]), fmt(s), fmt(t),
               c.ok ? fmt(c.l2n) : nan_cell(),
               std::isfinite(limit) ? fmt(limit) : nan_cell(),
               std::isfinite(err) ? fmt(err) : nan_cell(), cfg.hash_hex});
      if (std::isfinite(err) && err > 0.0) {
        series[gi].points.push_back({static_cast<double>(ladder[li]), err});
        const double lx = std::log(static_cast<double>(ladder[li]));
        const double ly = std::log(err);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++m;
      }
    }
    const double denom = m * sxx - sx * sx;
    fits.push_back({m >= 2 && denom != 0.0
                        ? (m * sxy - sx * sy) / denom
                        : std::numeric_limits<double>::quiet_NaN(),
                    static_cast<double>(m)});
  }

  CsvWriter slopes((dir / "chaoticity_slopes.csv").string());
  slopes.meta("command", "chaoticity-scan");
  slopes.meta("config_hash", cfg.hash_hex);
  slopes.meta("note", "descriptive log-log fit, no theoretical rate implied");
  slopes.header({"s", "t", "fitted_slope", "points", "config"});
  for (std::size_t gi = 0; gi < grid.size(); ++gi)
    slopes.row({fmt(grid[gi].first), fmt(grid[gi].second),
                std::isfinite(fits[gi][0]) ? fmt(fits[gi][0]) : nan_cell(),
                fmt(fits[gi][1]), cfg.hash_hex});

  PlotSpec spec;
  spec.title = "|L2n - Linf x Linf| vs n";
  spec.x_label = "n";
  spec.y_label = "absolute error";
  spec.log_x = true;
  spec.log_y = true;
  write_svg_plot((dir / "chaoticity_scan.svg").string(), spec, series);
  log << "wrote " << (dir / "chaoticity_scan.csv").string() << " and .svg\n";
  return kExitOk;
}

namespace {

std::vector<std::pair<double, double>> gate_points(const LaplaceDomainV& V) {
  const double r = 0.4 * std::min(-V.lower, V.upper);
  return {{r, 0.0}, {-r, 0.0}, {0.0, r}, {0.5 * r, 0.5 * r}, {-0.5 * r, 0.5 * r}};
}

}  // namespace

int cmd_sample(const ExperimentConfig& cfg, const RunOptions& opt,
               std::ostream& log) {
  (void)opt;
  DriftModel model = cfg.model.build();
  if (!validate_or_report(model, log)) return kExitConfig;
  const auto dir = ensure_out_dir(cfg);
  RunMetadata meta{"sample", dir, cfg.hash_hex};
  NonlinearLaw law(model);
  const bool want_finite =
      cfg.sample.law == "finite" || cfg.sample.law == "both";
  const bool want_nonlinear =
      cfg.sample.law == "nonlinear" || cfg.sample.law == "both";

  if (want_finite) {
    FiniteLaw fin(model, cfg.sample.n);
    const auto checks =
        fin.mc_laplace_check(cfg.seed, cfg.sample.count, gate_points(law.laplace_domain()));
    double worst = 0.0;
    for (const auto& c : checks) worst = std::max(worst, c.zscore);
    log << "finite sampler gate: worst |z| = " << fmt(worst) << " over "
        << checks.size() << " grid points\n";
    if (worst > 3.0) {
      log << "sampler self-check failed (MC vs closed form beyond 3 SE)\n";
      return kExitNumeric;
    }
    CsvWriter csv((dir / "sample_finite.csv").string());
    csv.meta("command", "sample");
    csv.meta("sampler", "finite-gap-exponential");
    csv.meta("model", model.describe());
    csv.meta("seed", std::to_string(cfg.seed));
    csv.meta("n", std::to_string(cfg.sample.n));
    csv.meta("count", std::to_string(cfg.sample.count));
    csv.meta("config_hash", cfg.hash_hex);
    for (const auto& c : checks) {
      std::ostringstream os;
      os << "(" << fmt(c.s) << "," << fmt(c.t) << ") mc=" << fmt(c.estimate)
         << " exact=" << fmt(c.exact) << " z=" << fmt(c.zscore);
      csv.meta("gate", os.str());
    }
    std::vector<std::string> head{"draw"};
    for (long long i = 1; i <= cfg.sample.n; ++i)
      head.push_back("z_" + std::to_string(i));
    csv.header(head);
    std::mt19937_64 rng = make_stream(cfg.seed, 0);
    Eigen::VectorXd z;
    std::vector<std::string> cells(static_cast<std::size_t>(cfg.sample.n) + 1);
    for (std::size_t i = 0; i < cfg.sample.count; ++i) {
      fin.draw(rng, z);
      cells[0] = std::to_string(i);
      for (long long j = 0; j < cfg.sample.n; ++j)
        cells[static_cast<std::size_t>(j) + 1] = fmt(z(j));
      csv.row(cells);
    }
    log << "wrote " << (dir / "sample_finite.csv").string() << "\n";
  }

  if (want_nonlinear) {
    // the same MC-vs-closed-form idea gates the inverse-CDF sampler
    const double r = 0.4 * std::min(-law.laplace_domain().lower,
                                    law.laplace_domain().upper);
    std::mt19937_64 rng = make_stream(cfg.seed, 1);
    double acc = 0.0, acc2 = 0.0;
    for (std::size_t i = 0; i < cfg.sample.count; ++i) {
      const double v = std::exp(r * law.draw(rng));
      acc += v;
      acc2 += v * v;
    }
    const double nc = static_cast<double>(cfg.sample.count);
    const double mean = acc / nc;
    const double se =
        std::sqrt(std::max(0.0, acc2 / nc - mean * mean) / nc);
    const double exact = law.laplace(r);
    const double z = se > 0.0 ? std::abs(mean - exact) / se
                              : std::numeric_limits<double>::infinity();
    log << "nonlinear sampler gate: |z| = " << fmt(z) << " at r=" << fmt(r)
        << "\n";
    if (z > 3.0) {
      log << "sampler self-check failed (MC vs closed form beyond 3 SE)\n";
      return kExitNumeric;
    }
    CsvWriter csv((dir / "sample_nonlinear.csv").string());
    csv.meta("command", "sample");
    csv.meta("sampler", "nonlinear-inverse-cdf");
    csv.meta("model", model.describe());
    csv.meta("seed", std::to_string(cfg.seed));
    csv.meta("count", std::to_string(cfg.sample.count));
    csv.meta("config_hash", cfg.hash_hex);
    csv.meta("gate", "r=" + fmt(r) + " mc=" + fmt(mean) + " exact=" +
                         fmt(exact) + " z=" + fmt(z));
    csv.header({"draw", "x"});
    std::mt19937_64 rng2 = make_stream(cfg.seed, 1);
    for (std::size_t i = 0; i < cfg.sample.count; ++i)
      csv.row({std::to_string(i), fmt(law.draw(rng2))});
    log << "wrote " << (dir / "sample_nonlinear.csv").string() << "\n";
  }
  return kExitOk;
}

int cmd_simulate(const ExperimentConfig& cfg, const RunOptions& opt,
                 std::ostream& log) {
  (void)opt;
  DriftModel model = cfg.model.build();
  if (!validate_or_report(model, log)) return kExitConfig;
  const auto dir = ensure_out_dir(cfg);
  RunMetadata meta{"simulate", dir, cfg.hash_hex};

  SimulationPlan plan;
  plan.step = cfg.simulate.step;
  plan.horizon = cfg.simulate.horizon;
  plan.burn_in = cfg.simulate.burn_in;
  plan.thinning = cfg.simulate.thinning;
  plan.seed = cfg.seed;
  const StationaryRun run = simulate_stationary(model, cfg.simulate.n, plan);
  log << "retained " << run.states.rows() << " states, ess(z_1) = "
      << fmt(run.ess) << "\n";

  CsvWriter traj((dir / "trajectory.csv").string());
  traj.meta("command", "simulate");
  traj.meta("model", model.describe());
  traj.meta("seed", std::to_string(cfg.seed));
  traj.meta("h", fmt(plan.step));
  traj.meta("horizon", fmt(plan.horizon));
  traj.meta("burn_in", fmt(run.plan.burn_in));
  traj.meta("thinning", std::to_string(run.thinning));
  traj.meta("ess_z1", fmt(run.ess));
  traj.meta("config_hash", cfg.hash_hex);
  std::vector<std::string> head{"t"};
  for (long long i = 1; i <= cfg.simulate.n; ++i)
    head.push_back("z_" + std::to_string(i));
  traj.header(head);
  std::vector<std::string> cells(head.size());
  for (Eigen::Index r = 0; r < run.states.rows(); ++r) {
    cells[0] = fmt(run.times[static_cast<std::size_t>(r)]);
    for (long long j = 0; j < cfg.simulate.n; ++j)
      cells[static_cast<std::size_t>(j) + 1] = fmt(run.states(r, j));
    traj.row(cells);
  }

  FiniteLaw fin(model, cfg.simulate.n);
  CsvWriter cmp((dir / "laplace_compare.csv").string());
  cmp.meta("command", "simulate");
  cmp.meta("config_hash", cfg.hash_hex);
  cmp.header({"t", "empirical", "batch_se", "exact", "zscore", "config"});
  for (double t : cfg.simulate.t_grid) {
    Eigen::VectorXd series(run.states.rows());
    for (Eigen::Index r = 0; r < run.states.rows(); ++r)
      series(r) = (t * run.states.row(r).transpose().array()).exp().mean();
    const MeanSe bm = batch_means(series);
    const double exact = fin.laplace_L1n(t);
    const double z = bm.se > 0.0 ? std::abs(bm.mean - exact) / bm.se
                                 : std::numeric_limits<double>::infinity();
    cmp.row({fmt(t), fmt(bm.mean), fmt(bm.se), fmt(exact), fmt(z),
             cfg.hash_hex});
  }
  log << "wrote " << (dir / "trajectory.csv").string() << " and "
      << (dir / "laplace_compare.csv").string() << "\n";

  if (run.ess < cfg.simulate.ess_floor) {
    log << "effective sample size " << fmt(run.ess) << " below floor "
        << fmt(cfg.simulate.ess_floor) << "\n";
    return kExitNumeric;
  }
  return kExitOk;
}

int cmd_wasserstein_report(const ExperimentConfig& cfg, const RunOptions& opt,
                           std::ostream& log) {
  DriftModel model = cfg.model.build();
  if (!validate_or_report(model, log)) return kExitConfig;
  const auto dir = ensure_out_dir(cfg);
  RunMetadata meta{"wasserstein-report", dir, cfg.hash_hex};
  NonlinearLaw law(model);
  auto quantile = [&law](double u) { return law.phi(u); };

  const auto& ladder = cfg.wasserstein.n_ladder;
  const auto& qs = cfg.wasserstein.q;
  const std::size_t N = cfg.wasserstein.draws;

  struct Row {
    long long n;
    int k;
    double q;
    std::size_t N;
    double dist, se, lo, hi;
    std::string method, what;
  };
  std::vector<Row> rows(ladder.size() * qs.size());

  parallel_for(ladder.size(), opt.workers, [&](std::size_t li) {
    FiniteLaw fin(model, ladder[li]);
    std::mt19937_64 rng = make_stream(cfg.seed, 100 + li);
    Eigen::VectorXd z, marg(N);
    for (std::size_t i = 0; i < N; ++i) {
      fin.draw(rng, z);
      marg(static_cast<Eigen::Index>(i)) = z(0);
    }
    std::mt19937_64 boot_rng = make_stream(cfg.seed, 200 + li);
    for (std::size_t qi = 0; qi < qs.size(); ++qi) {
      const double q = qs[qi];
      const double dist = wasserstein_1d_vs_quantile(marg, quantile, q).distance;
      const BootstrapBand band = bootstrap_band(
          marg,
          [&](const Eigen::VectorXd& re) {
            return wasserstein_1d_vs_quantile(re, quantile, q).distance;
          },
          cfg.wasserstein.bootstrap, boot_rng);
      rows[li * qs.size() + qi] = {ladder[li], 1, q, N, dist, band.se,
                                   band.lo, band.hi, "quantile-1d",
                                   "finite_vs_phi"};
    }
  });

  CsvWriter csv((dir / "wasserstein_report.csv").string());
  csv.meta("command", "wasserstein-report");
  csv.meta("model", model.describe());
  csv.meta("seed", std::to_string(cfg.seed));
  csv.meta("config_hash", cfg.hash_hex);
  csv.header({"n", "k", "q", "N", "distance", "boot_se", "band_lo", "band_hi",
              "method", "case", "config"});
  for (const auto& r : rows)
    csv.row({std::to_string(r.n), std::to_string(r.k), fmt(r.q),
             std::to_string(r.N), fmt(r.dist), fmt(r.se), fmt(r.lo),
             fmt(r.hi), r.method, r.what, cfg.hash_hex});

  // identical-law smoke row: two independent mean-field samples
  {
    const std::size_t M = std::min<std::size_t>(N, 100000);
    std::mt19937_64 ra = make_stream(cfg.seed, 301);
    std::mt19937_64 rb = make_stream(cfg.seed, 302);
    Eigen::VectorXd xa(M), xb(M);
    for (std::size_t i = 0; i < M; ++i) {
      xa(static_cast<Eigen::Index>(i)) = law.draw(ra);
      xb(static_cast<Eigen::Index>(i)) = law.draw(rb);
    }
    for (double q : qs) {
      const double d = wasserstein_1d(xa, xb, q).distance;
      csv.row({"0", "1", fmt(q), std::to_string(M), fmt(d), nan_cell(),
               nan_cell(), nan_cell(), "quantile-1d",
               "nonlinear_twice_smoke", cfg.hash_hex});
    }
  }

  if (cfg.wasserstein.pair_k2) {
    const std::size_t M = cfg.wasserstein.pair_draws;
    if (M > 4096) {
      log << "wasserstein.pair_draws exceeds the exact-solver cap (4096)\n";
      return kExitConfig;
    }
    for (std::size_t li = 0; li < ladder.size(); ++li) {
      FiniteLaw fin(model, ladder[li]);
      std::mt19937_64 rng = make_stream(cfg.seed, 400 + li);
      Eigen::MatrixXd X(M, 2), Y(M, 2);
      Eigen::VectorXd z;
      for (std::size_t i = 0; i < M; ++i) {
        fin.draw(rng, z);
        X(static_cast<Eigen::Index>(i), 0) = z(0);
        X(static_cast<Eigen::Index>(i), 1) = z(1);
        Y(static_cast<Eigen::Index>(i), 0) = law.draw(rng);
        Y(static_cast<Eigen::Index>(i), 1) = law.draw(rng);
      }
      for (double q : qs) {
        const double d = wasserstein_assignment(X, Y, q).distance;
        csv.row({std::to_string(ladder[li]), "2", fmt(q), std::to_string(M),
                 fmt(d), nan_cell(), nan_cell(), nan_cell(),
                 "assignment-exact", "finite_pair_vs_product", cfg.hash_hex});
      }
    }
  }

  std::vector<PlotSeries> series;
  for (std::size_t qi = 0; qi < qs.size(); ++qi) {
    PlotSeries s;
    s.label = "q=" + fmt(qs[qi]);
    for (std::size_t li = 0; li < ladder.size(); ++li) {
      const Row& r = rows[li * qs.size() + qi];
      s.points.push_back({static_cast<double>(r.n), r.dist});
    }
    series.push_back(std::move(s));
  }
  PlotSpec spec;
  spec.title = "W_q(1-marginal, mean-field law) vs n";
  spec.x_label = "n";
  spec.y_label = "distance";
  spec.log_x = true;
  spec.log_y = true;
  write_svg_plot((dir / "wasserstein_report.svg").string(), spec, series);
  log << "wrote " << (dir / "wasserstein_report.csv").string()
      << " and .svg\n";
  return kExitOk;
}

int cmd_selfcheck(const ExperimentConfig& cfg, std::ostream& log) {
  (void)cfg;  // the oracle suite always runs on the closed-form demo model
  struct Item {
    std::string name;
    bool pass;
    std::string detail;
  };
  std::vector<Item> items;
  auto record = [&](const std::string& name, bool pass,
                    const std::string& detail) {
    items.push_back({name, pass, detail});
  };

  const DriftModel demo = DriftModel::linear(2.0, std::sqrt(2.0));
  NonlinearLaw law(demo);

  {
    std::mt19937_64 rng = make_stream(7, 0);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const double u = uniform_open01(rng);
      worst = std::max(worst,
                       std::abs(law.phi(u) - std::log(u / (1.0 - u))));
    }
    record("quantile vs log(u/(1-u))", worst <= 1e-9,
           "max abs err " + fmt(worst));
  }
  {
    double worst = 0.0;
    for (double r : {-0.9, -0.5, -0.1, 0.1, 0.5, 0.9}) {
      const double exact = std::numbers::pi * r / std::sin(std::numbers::pi * r);
      worst = std::max(worst, std::abs(law.laplace(r) - exact) / exact);
    }
    record("Laplace vs pi r / sin(pi r)", worst <= 1e-8,
           "max rel err " + fmt(worst));
  }
  {
    const double c = law.centering_integral();
    record("centering integral", std::abs(c) <= 1e-10, "value " + fmt(c));
  }
  {
    FiniteLaw two(demo, 2);
    const double a = std::abs(two.laplace_L1n(0.5) - 4.0 / 3.0);
    const double b = std::abs(two.laplace_L2n(0.3, -0.2) - 4.0 / 3.0);
    record("n=2 closed forms", a <= 1e-12 && b <= 1e-12,
           "errs " + fmt(a) + ", " + fmt(b));
    const double o = laplace_by_quadrature(two, 0.3, -0.2, 1e-9);
    const double rel = std::abs(o - two.laplace_L2n(0.3, -0.2)) / o;
    record("n=2 quadrature oracle", rel <= 1e-8, "rel err " + fmt(rel));
  }
  {
    FiniteLaw three(demo, 3);
    double worst = 0.0;
    for (auto [s, t] : std::vector<std::pair<double, double>>{
             {0.3, -0.2}, {0.5, 0.2}, {-0.4, 0.1}}) {
      const double o = laplace_by_quadrature(three, s, t, 1e-8);
      worst = std::max(worst, std::abs(o - three.laplace_L2n(s, t)) / o);
    }
    record("n=3 quadrature oracle", worst <= 1e-6, "max rel err " + fmt(worst));
  }
  {
    FiniteLaw ten(demo, 10);
    const auto checks = ten.mc_laplace_check(
        11, 200000, gate_points(law.laplace_domain()));
    double worst = 0.0;
    for (const auto& c : checks) worst = std::max(worst, c.zscore);
    record("sampler MC gate (n=10)", worst <= 3.0, "worst |z| " + fmt(worst));
  }
  {
    std::mt19937_64 rng = make_stream(3, 0);
    std::normal_distribution<double> g(0.0, 1.0);
    double worst = 0.0;
    for (int rep = 0; rep < 20; ++rep) {
      const int n = 2 + static_cast<int>(rng() % 6);
      const int k = 1 + static_cast<int>(rng() % 3);
      Eigen::MatrixXd X(n, k), Y(n, k);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < k; ++j) {
          X(i, j) = g(rng);
          Y(i, j) = g(rng);
        }
      for (double q : {1.0, 2.0}) {
        const double a = wasserstein_assignment(X, Y, q).distance;
        const double b = wasserstein_brute_force(X, Y, q).distance;
        worst = std::max(worst, std::abs(a - b));
      }
    }
    record("assignment vs brute force", worst <= 1e-10,
           "max abs err " + fmt(worst));
  }

  bool all = true;
  for (const auto& item : items) {
    log << (item.pass ? "[PASS] " : "[FAIL] ") << std::left << std::setw(34)
        << item.name << " " << item.detail << "\n";
    all = all && item.pass;
  }
  log << (all ? "selfcheck passed" : "selfcheck FAILED") << "\n";
  return all ? kExitOk : kExitNumeric;
}

}  // namespace rankdiff
