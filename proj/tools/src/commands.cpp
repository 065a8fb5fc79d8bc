#include "commands.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "bdris/dsca_engine.hpp"
#include "bdris/linkalg.hpp"

namespace bdris::cli {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_text(const std::string& out, const std::string& text) {
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write '" + out + "'");
  f << text;
}

Scenario load_with_overrides(const std::string& config,
                             const std::optional<std::uint64_t>& seed,
                             const std::optional<std::string>& scheme) {
  Scenario s = load_scenario(config);
  if (seed) s.seed = *seed;
  if (scheme) s.scheme = parse_scheme(*scheme);
  return s;
}

std::string trace_csv(const RunTrace& trace, int users) {
  std::ostringstream csv;
  csv << "iteration,sum_rate";
  for (int q = 0; q < users; ++q) csv << ",rate_user" << (q + 1);
  csv << ",alpha\n";
  for (int t = 0; t < trace.iterations; ++t) {
    csv << (t + 1) << "," << fmt(trace.sum_rate[t]);
    for (int q = 0; q < users; ++q) csv << "," << fmt(trace.user_rates[t][q]);
    csv << "," << fmt(trace.alpha[t]) << "\n";
  }
  return csv.str();
}

// Runs jobs 0..count-1 on `workers` threads; each job writes only its own
// result slot, so the output is independent of scheduling.
void run_pool(int count, int workers, const std::function<void(int)>& job) {
  std::atomic<int> next{0};
  auto drain = [&] {
    for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) job(i);
  };
  const int extra = std::max(0, std::min(workers, count) - 1);
  std::vector<std::thread> pool;
  pool.reserve(extra);
  for (int i = 0; i < extra; ++i) pool.emplace_back(drain);
  drain();
  for (auto& th : pool) th.join();
}

}  // namespace

Scenario gradcheck_fixture() {
  Scenario s;
  s.users = 2;
  s.bs_antennas = 2;
  s.ris_elements = 4;
  s.subcarriers = 2;
  s.delay_taps = 2;
  s.power_w = dbm_to_watt(25.0);
  s.noise_w = dbm_to_watt(-90.0);
  s.geometry = default_geometry(s.users, s.square_width_m);
  return s;
}

int cmd_run(const RunOptions& opt) {
  const Scenario s =
      load_with_overrides(opt.config, opt.seed, opt.scheme);
  if (!opt.save_config.empty()) save_scenario(s, opt.save_config);

  DscaEngine engine(s);
  const RunTrace& trace = engine.run();

  write_text(opt.out, trace_csv(trace, s.users));
  std::ostream& info = opt.out.empty() ? std::cerr : std::cout;
  info << "final_sum_rate=" << fmt(trace.sum_rate.back())
       << " iterations=" << trace.iterations
       << " converged=" << (trace.converged ? 1 : 0) << "\n";
  return 0;
}

int cmd_sweep(const SweepOptions& opt) {
  if (opt.values.empty()) throw std::runtime_error("sweep: no values given");
  if (opt.seeds < 1) throw std::runtime_error("sweep: seeds must be >= 1");
  if (opt.param != "p_dbm" && opt.param != "P" && opt.param != "M" &&
      opt.param != "N" && opt.param != "Q") {
    throw std::runtime_error("sweep: unknown parameter '" + opt.param +
                             "' (expected p_dbm|M|N|Q)");
  }
  const Scenario base = load_with_overrides(opt.config, opt.seed, {});
  std::vector<std::string> schemes = opt.schemes;
  if (schemes.empty()) schemes.push_back(scheme_name(base.scheme));

  struct Job {
    std::string scheme;
    double value;
    std::uint64_t seed;
  };
  struct Result {
    double rate = 0.0;
    int iterations = 0;
    bool converged = false;
  };
  std::vector<Job> jobs;
  for (const auto& scheme : schemes) {
    for (double value : opt.values) {
      for (int i = 0; i < opt.seeds; ++i) {
        jobs.push_back({scheme, value, base.seed + static_cast<std::uint64_t>(i)});
      }
    }
  }

  std::vector<Result> results(jobs.size());
  run_pool(static_cast<int>(jobs.size()), opt.workers, [&](int i) {
    Scenario s = base;
    s.scheme = parse_scheme(jobs[i].scheme);
    s.seed = jobs[i].seed;
    if (opt.param == "p_dbm" || opt.param == "P") {
      s.power_w = dbm_to_watt(jobs[i].value);
    } else if (opt.param == "M") {
      s.ris_elements = static_cast<int>(jobs[i].value);
    } else if (opt.param == "N") {
      s.bs_antennas = static_cast<int>(jobs[i].value);
    } else {
      s.users = static_cast<int>(jobs[i].value);
      s.geometry = default_geometry(s.users, s.square_width_m);
    }
    s.validate();
    const RunTrace trace = run(s);
    results[i] = {trace.sum_rate.back(), trace.iterations, trace.converged};
  });

  std::ostringstream csv;
  csv << "scheme,param,value,seed,final_sum_rate,iterations,converged\n";
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    csv << jobs[i].scheme << "," << opt.param << "," << fmt(jobs[i].value)
        << "," << jobs[i].seed << "," << fmt(results[i].rate) << ","
        << results[i].iterations << "," << (results[i].converged ? 1 : 0)
        << "\n";
  }
  // mean and normal-approximation 95% half width per (scheme, value)
  std::size_t idx = 0;
  for (const auto& scheme : schemes) {
    for (double value : opt.values) {
      double mean = 0.0, sq = 0.0;
      for (int i = 0; i < opt.seeds; ++i) mean += results[idx + i].rate;
      mean /= opt.seeds;
      for (int i = 0; i < opt.seeds; ++i) {
        const double d = results[idx + i].rate - mean;
        sq += d * d;
      }
      const double sd = opt.seeds > 1 ? std::sqrt(sq / (opt.seeds - 1)) : 0.0;
      const double ci = 1.96 * sd / std::sqrt(double(opt.seeds));
      csv << scheme << "," << opt.param << "," << fmt(value) << ",mean,"
          << fmt(mean) << ",,\n";
      csv << scheme << "," << opt.param << "," << fmt(value) << ",ci95,"
          << fmt(ci) << ",,\n";
      idx += opt.seeds;
    }
  }
  write_text(opt.out, csv.str());
  return 0;
}

int cmd_profile(const ProfileOptions& opt) {
  Scenario s = load_with_overrides(opt.config, opt.seed, opt.scheme);
  if (s.scheme.ris == RisMode::kNoRis) {
    throw std::runtime_error("profile: scheme has no surfaces to profile");
  }
  if (opt.seeds < 1) throw std::runtime_error("profile: seeds must be >= 1");

  const auto freqs = s.subcarrier_freqs();
  std::vector<double> amp(s.subcarriers, 0.0), phase(s.subcarriers, 0.0);
  long samples = 0;
  for (int i = 0; i < opt.seeds; ++i) {
    Scenario run_s = s;
    run_s.seed = s.seed + static_cast<std::uint64_t>(i);
    DscaEngine engine(run_s);
    engine.run();
    for (const auto& u : engine.states()) {
      for (int k = 0; k < s.subcarriers; ++k) {
        for (int e = 0; e < s.ris_elements; ++e) {
          amp[k] += std::abs(u.phi[k][e]);
          phase[k] += std::arg(u.phi[k][e]);
        }
      }
    }
    samples += static_cast<long>(s.users) * s.ris_elements;
  }

  std::ostringstream csv;
  csv << "subcarrier,frequency_hz,mean_amplitude,mean_phase_rad\n";
  for (int k = 0; k < s.subcarriers; ++k) {
    csv << (k + 1) << "," << fmt(freqs[k]) << "," << fmt(amp[k] / samples)
        << "," << fmt(phase[k] / samples) << "\n";
  }
  write_text(opt.out, csv.str());
  return 0;
}

int cmd_gradcheck(const GradcheckCliOptions& opt) {
  Scenario fixture =
      opt.config.empty() ? gradcheck_fixture() : load_scenario(opt.config);
  GradCheckOptions gopt;
  gopt.seeds = opt.seeds;
  gopt.first_seed = opt.seed.value_or(fixture.seed);
  gopt.threshold = opt.threshold;
  if (!opt.corrupt.empty()) {
    gopt.corrupt = true;
    bool known = false;
    for (GradFamily f :
         {GradFamily::kPrecoderPricing, GradFamily::kSurrogateFirstOrder,
          GradFamily::kCapacitanceOwn, GradFamily::kCapacitancePricing,
          GradFamily::kSwitch}) {
      if (family_name(f) == opt.corrupt) {
        gopt.corrupt_family = f;
        known = true;
      }
    }
    if (!known) {
      throw std::runtime_error("gradcheck: unknown family '" + opt.corrupt +
                               "'");
    }
  }

  const auto results = run_gradcheck(fixture, gopt);
  std::ostringstream csv;
  csv << "family,worst_rel_err,pass\n";
  for (const auto& r : results) {
    const bool ok = r.worst_rel_err < gopt.threshold;
    std::cout << family_name(r.family) << ": worst_rel_err="
              << fmt(r.worst_rel_err) << " -> " << (ok ? "PASS" : "FAIL")
              << "\n";
    csv << family_name(r.family) << "," << fmt(r.worst_rel_err) << ","
        << (ok ? 1 : 0) << "\n";
  }
  if (!opt.out.empty()) write_text(opt.out, csv.str());
  return gradcheck_passed(results, gopt.threshold) ? 0 : 1;
}

}  // namespace bdris::cli
