// Acceptance suite. Runs every criterion (or the ids given on the command
// line, e.g. `ook_bcc_acceptance 5 8`) and prints one PASS/FAIL line per
// criterion followed by the measurements behind it.
//
// Confidence tolerances: "within 2 half-widths" of two BER estimates a and b
// means |a - b| (or the one-sided excess) is at most a.ci95 + b.ci95.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "../oracles.hpp"
#include "ook_bcc/cli.hpp"
#include "ook_bcc/ook_bcc.hpp"

namespace {

using namespace ook_bcc;

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void check(bool ok, std::string note) {
    pass = pass && ok;
    notes.push_back(std::string(ok ? "ok   " : "FAIL ") + note);
  }
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), f, args...);
  return buf;
}

const BerPoint& at(const std::vector<BerPoint>& points, Technique t, double power,
                   std::optional<int> n_t = {}) {
  for (const auto& p : points) {
    if (p.technique == t && p.tx_power_dbm == power && (!n_t || p.n_t == *n_t)) {
      return p;
    }
  }
  throw std::runtime_error("missing BER point");
}

std::string show(const BerPoint& p) { return fmt("%.3e+-%.1e", p.ber, p.ci95); }

RunOptions options() { return {std::max(1u, std::thread::hardware_concurrency())}; }

// 1. a_th == (a_one + a_zero) / 2 to 1e-15 relative over 10^4 training frames.
Outcome identity_suite() {
  Outcome out;
  const auto& registry = channel_registry();
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> power(-20.0, 30.0);
  double worst = 0.0;
  for (int frame = 0; frame < 10'000; ++frame) {
    PhiloxStream engine(101, static_cast<std::uint64_t>(frame));
    const std::span<const NodeProfile> node(&registry[frame % registry.size()], 1);
    const auto rx = generate_received(training_symbols(50), node,
                                      LinkParams::from_dbm(power(rng)), engine);
    const auto s = compute_training_stats(rx)[0];
    worst = std::max(worst, std::abs(s.a_th - 0.5 * (s.a_one + s.a_zero)) / s.a_th);
  }
  out.check(worst <= 1e-15, fmt("10000 frames, worst relative gap %.3g (limit 1e-15)", worst));
  return out;
}

// 2. K = 1, informative stats: probability and deviation agree on every non-tie input.
Outcome single_node_equivalence() {
  Outcome out;
  std::mt19937_64 rng(202);
  std::uniform_real_distribution<double> amp(1e-9, 1e-5);
  std::uniform_real_distribution<double> frac(0.0, 3.0);
  const int n_t_choices[] = {4, 10, 50, 200, 1000};
  long pairs = 0;
  long disagreements = 0;
  while (pairs < 100'000) {
    const int n_t = n_t_choices[rng() % 5];
    const int half = n_t / 2;
    std::uniform_int_distribution<int> count(0, half);
    TrainingStats s;
    s.n_t = n_t;
    double a = amp(rng);
    double b = amp(rng);
    if (a < b) std::swap(a, b);
    s.a_one = a;
    s.a_zero = b;
    s.a_th = 0.5 * (a + b);
    s.p11 = std::clamp(count(rng) / double(half), probability_floor(n_t), probability_cap(n_t));
    s.p00 = std::clamp(count(rng) / double(half), probability_floor(n_t), probability_cap(n_t));
    if (s.p11 + s.p00 <= 1.0) continue;
    const double y = frac(rng) * s.a_th;
    if (y == s.a_th) continue;
    const double ys[] = {y};
    const TrainingStats ss[] = {s};
    disagreements +=
        detect(Technique::probability, ys, ss) != detect(Technique::deviation, ys, ss) ? 1 : 0;
    ++pairs;
  }
  out.check(disagreements == 0, fmt("%ld pairs, %ld disagreements", pairs, disagreements));
  return out;
}

// 3. Saturated stats: probability fusion equals majority vote, all 2^K patterns, K <= 5.
Outcome majority_limit() {
  Outcome out;
  std::mt19937_64 rng(303);
  std::uniform_real_distribution<double> amp(1e-8, 1e-5);
  long patterns = 0;
  long mismatches = 0;
  for (int n_t : {10, 50, 1000}) {
    for (int k = 1; k <= 5; ++k) {
      std::vector<TrainingStats> stats(k);
      for (auto& s : stats) {
        s.n_t = n_t;
        s.a_zero = amp(rng);
        s.a_one = s.a_zero + amp(rng);
        s.a_th = 0.5 * (s.a_one + s.a_zero);
        s.p11 = s.p00 = probability_cap(n_t);
      }
      for (int pattern = 0; pattern < (1 << k); ++pattern) {
        std::vector<double> y(k);
        std::vector<int> decisions(k);
        for (int i = 0; i < k; ++i) {
          decisions[i] = (pattern >> i) & 1;
          y[i] = decisions[i] ? stats[i].a_th * 1.5 : stats[i].a_th * 0.5;
        }
        mismatches += detect(Technique::probability, y, stats) != testing::majority(decisions);
        ++patterns;
      }
    }
  }
  out.check(mismatches == 0, fmt("%ld patterns (K=1..5, N_t in {10,50,1000}), %ld mismatches",
                                 patterns, mismatches));
  return out;
}

// 4. KS test of 10^6 samples against the analytic CDF at 1% significance, all nine laws.
Outcome distribution_fidelity() {
  Outcome out;
  std::uint64_t stream = 0;
  for (const auto& node : channel_registry()) {
    PhiloxStream engine(404, stream++);
    auto uniform = [&] { return uniform_open01(engine); };
    std::vector<double> samples(1'000'000);
    for (auto& s : samples) s = sample_channel(node.dist, uniform);
    const auto oracle = [&node](double x) {
      if (const auto* b = std::get_if<BurrXII>(&node.dist)) {
        return testing::burr_cdf_textbook(x, b->alpha, b->c, b->k);
      }
      const auto& w = std::get<Weibull>(node.dist);
      return testing::weibull_cdf_textbook(x, w.a, w.b);
    };
    const double d = testing::ks_statistic(std::move(samples), oracle);
    const double p = testing::ks_p_value(d, 1'000'000);
    out.check(p > 0.01, fmt("%s: D=%.5f p=%.3f", node.id.c_str(), d, p));
  }
  return out;
}

// 5. Single f9 node: MRC best, probability == deviation, combination beats probability at 30 dBm.
Outcome fig4_shape() {
  Outcome out;
  auto e = preset("fig4");
  e.scenario.n_data_symbols = 1'000'000;
  e.scenario.seed = 505;
  const auto points = run_experiment(e, options());
  bool mrc_best = true;
  bool prob_dev_agree = true;
  for (double p : e.scenario.power_sweep_dbm) {
    const auto& mrc = at(points, Technique::mrc, p);
    for (auto t : {Technique::probability, Technique::deviation, Technique::combination}) {
      const auto& q = at(points, t, p);
      if (mrc.ber > q.ber + mrc.ci95 + q.ci95) {
        mrc_best = false;
        out.notes.push_back(fmt("     mrc %s above %s %s at %g dBm", show(mrc).c_str(),
                                technique_name(t).data(), show(q).c_str(), p));
      }
    }
    const auto& pr = at(points, Technique::probability, p);
    const auto& dv = at(points, Technique::deviation, p);
    if (std::abs(pr.ber - dv.ber) > pr.ci95 + dv.ci95) {
      prob_dev_agree = false;
      out.notes.push_back(fmt("     probability %s vs deviation %s at %g dBm", show(pr).c_str(),
                              show(dv).c_str(), p));
    }
  }
  out.check(mrc_best, "MRC BER <= every noncoherent BER at all 26 powers (2 half-widths)");
  out.check(prob_dev_agree, "probability and deviation agree pointwise (2 half-widths)");
  const auto& comb30 = at(points, Technique::combination, 30.0);
  const auto& prob30 = at(points, Technique::probability, 30.0);
  out.check(comb30.ber < prob30.ber, fmt("30 dBm: combination %s < probability %s",
                                         show(comb30).c_str(), show(prob30).c_str()));
  return out;
}

// 6. Single node, probability technique, 10 dBm: every strong BER below every weak BER.
Outcome fig3_grouping() {
  Outcome out;
  constexpr double kPower = 10.0;
  double worst_strong = 0.0;
  double best_weak = 1.0;
  std::string detail;
  for (auto e : expand_preset("fig3")) {
    e.scenario.n_data_symbols = 100'000;
    e.scenario.power_sweep_dbm = {kPower};
    e.scenario.seed = 606;
    const auto p = run_experiment(e, options()).front();
    const auto& node = e.scenario.nodes.front();
    detail += fmt(" %s=%.2e", node.id.c_str(), p.ber);
    if (node.condition == ChannelCondition::strong) {
      worst_strong = std::max(worst_strong, p.ber);
    } else {
      best_weak = std::min(best_weak, p.ber);
    }
  }
  out.check(worst_strong < best_weak,
            fmt("worst strong %.3e < best weak %.3e at %g dBm;", worst_strong, best_weak, kPower) +
                detail);
  return out;
}

// 7. Weak K=6 and mixed K=9: combination <= min(probability, deviation) + 2 half-widths, P >= 0 dBm.
Outcome fig5_fig6_robustness() {
  Outcome out;
  for (const char* name : {"fig5-weak", "fig6"}) {
    auto e = preset(name);
    e.scenario.n_data_symbols = 200'000;
    e.scenario.power_sweep_dbm = power_range_dbm(0.0, 30.0, 2.0);
    e.scenario.seed = 707;
    const auto points = run_experiment(e, options());
    bool ok = true;
    for (double p : e.scenario.power_sweep_dbm) {
      const auto& comb = at(points, Technique::combination, p);
      const auto& pr = at(points, Technique::probability, p);
      const auto& dv = at(points, Technique::deviation, p);
      const auto& best = pr.ber <= dv.ber ? pr : dv;
      if (comb.ber > best.ber + comb.ci95 + best.ci95) {
        ok = false;
        out.notes.push_back(fmt("     %s %g dBm: combination %s vs best %s", name, p,
                                show(comb).c_str(), show(best).c_str()));
      }
    }
    const auto& c0 = at(points, Technique::combination, 0.0);
    out.check(ok, fmt("%s (K=%zu): combination never worse at 0..30 dBm; at 0 dBm comb %s prob %s dev %s",
                      name, e.scenario.nodes.size(), show(c0).c_str(),
                      show(at(points, Technique::probability, 0.0)).c_str(),
                      show(at(points, Technique::deviation, 0.0)).c_str()));
  }
  return out;
}

// 8. Training-length sweep at 10 dBm, weak K=6. Deviation variation is
// (max - min) / max over the seven N_t values.
Outcome fig7_trends() {
  Outcome out;
  auto e = preset("fig7");
  e.scenario.n_data_symbols = 1'000'000;
  e.scenario.seed = 808;
  const auto points = run_experiment(e, options());
  const auto& nts = e.nt_sweep->values;
  const double power = e.nt_sweep->power_dbm;

  bool monotone = true;
  std::string prob_line = "probability:";
  for (std::size_t i = 0; i < nts.size(); ++i) {
    const auto& cur = at(points, Technique::probability, power, nts[i]);
    prob_line += fmt(" %d:%.2e", nts[i], cur.ber);
    if (i > 0) {
      const auto& prev = at(points, Technique::probability, power, nts[i - 1]);
      monotone = monotone && cur.ber <= prev.ber + prev.ci95 + cur.ci95;
    }
  }
  out.check(monotone, prob_line + " (non-increasing within 2 half-widths)");

  double lo = 1.0;
  double hi = 0.0;
  std::string dev_line = "deviation:";
  for (int nt : nts) {
    const auto& d = at(points, Technique::deviation, power, nt);
    lo = std::min(lo, d.ber);
    hi = std::max(hi, d.ber);
    dev_line += fmt(" %d:%.3e", nt, d.ber);
  }
  const double variation = (hi - lo) / hi;
  out.check(variation < 0.20,
            dev_line + fmt(" relative variation (max-min)/max = %.3f (limit 0.20)", variation));

  bool comb_lowest = true;
  std::string comb_line = "combination:";
  for (int nt : nts) {
    const auto& c = at(points, Technique::combination, power, nt);
    const auto& pr = at(points, Technique::probability, power, nt);
    const auto& dv = at(points, Technique::deviation, power, nt);
    const auto& best = pr.ber <= dv.ber ? pr : dv;
    comb_line += fmt(" %d:%.2e", nt, c.ber);
    comb_lowest = comb_lowest && c.ber < best.ber;
  }
  out.check(comb_lowest, comb_line + " (below probability and deviation at every N_t)");
  return out;
}

// 9. Same seed, 1 vs N workers: byte-identical CSV from the command line.
Outcome determinism() {
  Outcome out;
  auto run_cli = [](std::vector<std::string> args) {
    args.insert(args.begin(), "ook_bcc_sim");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream o;
    std::ostringstream e;
    const int status = run_command(static_cast<int>(argv.size()), argv.data(), o, e);
    return std::pair{status, o.str()};
  };
  for (const char* name : {"fig4", "fig6", "fig7"}) {
    const std::vector<std::string> base{"run", "--preset", name, "--seed", "99", "--symbols",
                                        "20000"};
    auto one = base;
    one.insert(one.end(), {"--jobs", "1"});
    auto many = base;
    many.insert(many.end(), {"--jobs", "4"});
    const auto [s1, csv1] = run_cli(one);
    const auto [s2, csv2] = run_cli(many);
    const auto [s3, csv3] = run_cli(one);
    out.check(s1 == 0 && s2 == 0 && s3 == 0 && csv1 == csv2 && csv1 == csv3,
              fmt("%s: --jobs 1 / --jobs 4 / repeat -> %zu bytes, identical=%s", name, csv1.size(),
                  (csv1 == csv2 && csv1 == csv3) ? "yes" : "no"));
  }
  return out;
}

// 10. Zero noise gives BER exactly 0; zero power gives 0.5 +- 0.01 at 10^5 symbols.
Outcome degenerate_limits() {
  Outcome out;
  const std::vector<std::vector<const char*>> noiseless_sets{{"f2"}, {"f4"}, {"f2", "f4", "f9"}};
  for (const auto& names : noiseless_sets) {
    Scenario s;
    for (auto* n : names) s.nodes.push_back(*find_registry_entry(n));
    s.n_data_symbols = 100'000;
    s.seed = 1010;
    const auto points = run_link_point(s, LinkParams::from_watts(dbm_to_watts(10.0), 0.0), 0,
                                       options());
    std::uint64_t errors = 0;
    for (const auto& p : points) errors += p.error_count + (p.failed() ? 1 : 0);
    out.check(errors == 0, fmt("zero noise, %zu strong node(s), 4 techniques: %llu errors",
                               names.size(), static_cast<unsigned long long>(errors)));
  }
  for (const char* name : {"fig4", "fig5-weak"}) {
    auto s = preset(name).scenario;
    s.techniques = {Technique::probability, Technique::deviation, Technique::combination,
                    Technique::mrc};
    s.n_data_symbols = 100'000;
    s.seed = 1011;
    const auto points = run_link_point(
        s, LinkParams::from_watts(0.0, noise_variance(s.n0_dbm_per_hz, s.bandwidth_hz)), 1,
        options());
    for (const auto& p : points) {
      out.check(std::abs(p.ber - 0.5) <= 0.01, fmt("zero power, %s nodes, %s: BER %.4f", name,
                                                   technique_name(p.technique).data(), p.ber));
    }
  }
  return out;
}

struct Criterion {
  int id;
  const char* title;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {1, "training identity a_th = (a_one + a_zero)/2", identity_suite},
      {2, "single-node probability/deviation equivalence", single_node_equivalence},
      {3, "saturated probability fusion is majority vote", majority_limit},
      {4, "channel sampler KS fidelity, nine laws", distribution_fidelity},
      {5, "single f9 node curve shape", fig4_shape},
      {6, "strong channels beat weak channels, single node", fig3_grouping},
      {7, "combination robustness, weak K=6 and mixed K=9", fig5_fig6_robustness},
      {8, "training-length trends at 10 dBm, weak K=6", fig7_trends},
      {9, "determinism across worker counts", determinism},
      {10, "degenerate limits (zero noise, zero power)", degenerate_limits},
  };

  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));

  int failures = 0;
  for (const auto& c : criteria) {
    if (!selected.empty() && std::find(selected.begin(), selected.end(), c.id) == selected.end()) {
      continue;
    }
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.check(false, std::string("exception: ") + e.what());
    }
    std::printf("[%s] criterion %2d: %s\n", o.pass ? "PASS" : "FAIL", c.id, c.title);
    for (const auto& note : o.notes) std::printf("        %s\n", note.c_str());
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
