#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "replay/adversaries.hpp"
#include "replay/class_io.hpp"
#include "replay/convex.hpp"
#include "replay/dimensions.hpp"
#include "replay/distributions.hpp"
#include "replay/generators.hpp"
#include "replay/learners.hpp"
#include "replay/replay_engine.hpp"
#include "replay/rng.hpp"

namespace replay {

/// Raised when a game ends with an illegal adversary move or no consistent target.
class InvalidTranscript : public Error {
 public:
  using Error::Error;
};

enum class Status { Pass, Fail, Inconclusive };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::Inconclusive: return "inconclusive";
  }
  return "?";
}

/// Worst status of a set: fail beats inconclusive beats pass.
inline Status combine(Status a, Status b) {
  if (a == Status::Fail || b == Status::Fail) return Status::Fail;
  if (a == Status::Inconclusive || b == Status::Inconclusive) return Status::Inconclusive;
  return Status::Pass;
}

inline int exit_code(Status s) {
  switch (s) {
    case Status::Pass: return 0;
    case Status::Fail: return 1;
    case Status::Inconclusive: return 2;
  }
  return 1;
}

struct ResultRow {
  std::string experiment;
  std::string cls;
  std::string learner;
  std::string adversary;
  std::size_t n = 0;
  std::size_t rounds = 0;
  std::vector<double> mistakes;  // one entry per trial, in trial order
  double mean = 0.0;
  double se = 0.0;
  double bound = 0.0;  // the bound the pass check is against
  std::optional<double> lower;
  std::optional<double> upper;
  Status status = Status::Pass;
  std::string note;
};

struct Summary {
  double mean = 0.0;
  double se = 0.0;
};

inline Summary summarize(const std::vector<double>& xs) {
  Summary s;
  if (xs.empty()) return s;
  const double n = static_cast<double>(xs.size());
  for (double x : xs) s.mean += x;
  s.mean /= n;
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.se = std::sqrt(ss / (n - 1.0) / n);
  }
  return s;
}

/// Worker count from REPLAY_WORKERS, else the hardware concurrency.
inline unsigned worker_count() {
  if (const char* env = std::getenv("REPLAY_WORKERS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  return std::max(1U, std::thread::hardware_concurrency());
}

/// Evaluates fn(0..trials-1) across workers; results are stored by trial index,
/// so the output does not depend on scheduling. The first exception is rethrown.
template <typename T>
std::vector<T> run_trials(std::size_t trials, unsigned workers, const std::function<T(std::size_t)>& fn) {
  std::vector<T> out(trials);
  workers = static_cast<unsigned>(std::min<std::size_t>(std::max(1U, workers), std::max<std::size_t>(trials, 1)));
  if (workers == 1) {
    for (std::size_t i = 0; i < trials; ++i) out[i] = fn(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < trials && !failed; i = next++) {
        try {
          out[i] = fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          failed = true;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
  return out;
}

/// Plays one game and insists on a valid transcript.
inline GameTranscript play(Learner& learner, Adversary& adversary, const HypothesisClass& H, std::size_t rounds,
                           CommitMode commit = CommitMode::WorstCase) {
  GameTranscript tr = run_game(learner, adversary, H, {rounds, commit});
  if (!tr.valid) {
    throw InvalidTranscript("invalid transcript at round " + std::to_string(tr.violation_round.value_or(0)) + ": " +
                            tr.violation);
  }
  return tr;
}

/// Conservative threshold learner against i.i.d. uniform true labels of the
/// all-ones target on [N], for domains too large for bit-set hypotheses. The
/// learner errs exactly when x falls below every earlier positive, and every
/// such round is reliable, so the mistake count is the number of new minima.
/// Draws come from the same sampler the general engine uses.
inline std::size_t threshold_uniform_mistakes(std::size_t n, std::size_t rounds, Rng& rng) {
  std::vector<Point> pts(n);
  for (std::size_t i = 0; i < n; ++i) pts[i] = static_cast<Point>(i);
  const DiscreteDistribution dist = uniform_distribution(std::move(pts));
  std::size_t mistakes = 0;
  std::size_t threshold = n;  // n encodes the all-zero hypothesis
  for (std::size_t t = 0; t < rounds; ++t) {
    const Point x = dist.sample(rng);
    if (x < threshold) {
      ++mistakes;
      threshold = x;
    }
  }
  return mistakes;
}

struct Table1Params {
  std::size_t n = 8;
  std::size_t rounds = 32;
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  std::optional<std::string> cls;  // generator name or class file
  unsigned workers = 1;
};

inline const std::vector<std::string>& table1_rows() {
  static const std::vector<std::string> rows{"thresholds-adaptive", "thresholds-stochastic", "intclosed-adaptive",
                                             "general-adaptive", "general-stochastic"};
  return rows;
}

namespace detail {

inline ResultRow make_row(std::string experiment, std::string cls, std::string learner, std::string adversary,
                          std::size_t n, std::size_t rounds, std::vector<double> mistakes) {
  ResultRow r;
  r.experiment = std::move(experiment);
  r.cls = std::move(cls);
  r.learner = std::move(learner);
  r.adversary = std::move(adversary);
  r.n = n;
  r.rounds = rounds;
  r.mistakes = std::move(mistakes);
  const Summary s = summarize(r.mistakes);
  r.mean = s.mean;
  r.se = s.se;
  return r;
}

/// Per-trial mistake counts of a named learner against a named adversary.
inline std::vector<double> named_trials(const HypothesisClass& H, const std::string& learner_name,
                                        const std::string& adversary_name, std::size_t rounds, std::size_t trials,
                                        std::uint64_t seed, unsigned workers) {
  return run_trials<double>(trials, workers, [&](std::size_t trial) {
    auto learner = make_learner(learner_name, H);
    AdversaryOptions opt;
    opt.seed = make_stream(seed, trial)();
    opt.rounds = rounds;
    auto adversary = make_adversary(adversary_name, H, opt);
    return static_cast<double>(play(*learner, *adversary, H, rounds).mistakes);
  });
}

inline bool all_at_most(const std::vector<double>& xs, double bound) {
  return std::all_of(xs.begin(), xs.end(), [bound](double x) { return x <= bound; });
}

/// One-sided lower check: pass when the mean clears the bound, inconclusive when
/// it clears it only within two standard errors, fail otherwise.
inline Status judge_lower(double mean, double se, double lower) {
  if (mean >= lower) return Status::Pass;
  if (mean + 2.0 * se >= lower) return Status::Inconclusive;
  return Status::Fail;
}

/// Two-sided band check: inside the band with standard error below a tenth of
/// its width passes; inside with a wider error, or outside by less than two
/// standard errors, is inconclusive.
inline Status judge_band(double mean, double se, double lo, double hi) {
  if (mean >= lo && mean <= hi) return se < 0.1 * (hi - lo) ? Status::Pass : Status::Inconclusive;
  if (mean + 2.0 * se >= lo && mean - 2.0 * se <= hi) return Status::Inconclusive;
  return Status::Fail;
}

}  // namespace detail

inline std::vector<ResultRow> reproduce_table1(const std::string& row, const Table1Params& p) {
  if (p.trials == 0) throw Error("trials must be at least 1");
  if (p.rounds == 0) throw Error("rounds must be at least 1");
  std::vector<ResultRow> out;

  if (row == "thresholds-adaptive") {
    const std::string spec = "thresholds:" + std::to_string(p.n);
    const HypothesisClass H = load_class(spec);
    const double tdim = static_cast<double>(threshold_dimension(H).value);
    auto ms = detail::named_trials(H, "conservative_threshold", "descending", p.rounds, p.trials, p.seed, p.workers);
    ResultRow r = detail::make_row(row, spec, "conservative_threshold", "descending", p.n, p.rounds, std::move(ms));
    r.bound = std::min(tdim, static_cast<double>(p.rounds));
    r.lower = r.upper = r.bound;
    const bool exact = std::all_of(r.mistakes.begin(), r.mistakes.end(), [&](double m) { return m == r.bound; });
    r.status = exact ? Status::Pass : Status::Fail;
    r.note = "expects exactly min{TDim, T}";
    out.push_back(std::move(r));
    return out;
  }

  if (row == "thresholds-stochastic") {
    const std::string spec = "thresholds:" + std::to_string(p.n);
    // Upper: all-ones target, uniform draws. The bit-set engine handles N <= 64;
    // larger domains use the dedicated integer simulation.
    std::vector<double> upper;
    double n_dim = static_cast<double>(p.n);
    std::string note = "uniform truth, f* = all ones; band [0.5 ln m, ln m + 2], m = min{N, T}";
    if (p.n <= kMaxDomainSize) {
      const HypothesisClass H = load_class(spec);
      n_dim = static_cast<double>(threshold_dimension(H).value);
      upper = detail::named_trials(H, "conservative_threshold", "uniform_stochastic", p.rounds, p.trials, p.seed,
                                   p.workers);
    } else {
      upper = run_trials<double>(p.trials, p.workers, [&](std::size_t trial) {
        Rng rng = make_stream(make_stream(p.seed, trial)(), 0);
        return static_cast<double>(threshold_uniform_mistakes(p.n, p.rounds, rng));
      });
      note += "; N > 64 simulated on integer thresholds, TDim = N by construction";
    }
    ResultRow up = detail::make_row(row + "/upper", spec, "conservative_threshold", "uniform_stochastic", p.n,
                                    p.rounds, std::move(upper));
    const double log_m = std::log(std::min(n_dim, static_cast<double>(p.rounds)));
    up.lower = 0.5 * log_m;
    up.upper = log_m + 2.0;
    up.bound = *up.upper;
    up.status = detail::judge_band(up.mean, up.se, *up.lower, *up.upper);
    up.note = note;
    out.push_back(std::move(up));

    if (p.n <= kMaxDomainSize) {
      const HypothesisClass H = load_class(spec);
      auto lower = detail::named_trials(H, "conservative_threshold", "geometric_stochastic", p.rounds, p.trials,
                                        p.seed, p.workers);
      ResultRow lo = detail::make_row(row + "/lower", spec, "conservative_threshold", "geometric_stochastic", p.n,
                                      p.rounds, std::move(lower));
      const double half_log2 = std::floor(std::log2(static_cast<double>(p.rounds)) / 2.0);
      lo.lower = std::min(n_dim, half_log2) / 3.0;
      lo.bound = *lo.lower;
      lo.status = detail::judge_lower(lo.mean, lo.se, *lo.lower);
      lo.note = "worst-case commitment; lower envelope min{TDim, floor(log2 T / 2)} / 3";
      out.push_back(std::move(lo));
    }
    return out;
  }

  if (row == "intclosed-adaptive") {
    const std::string spec = p.cls.value_or("thresholds:" + std::to_string(p.n));
    const HypothesisClass H = load_class(spec);
    if (!is_intersection_closed(H)) throw Error("intclosed-adaptive needs an intersection-closed class");
    const double tdim = static_cast<double>(threshold_dimension(H).value);
    auto ms = detail::named_trials(H, "closure", "witness_chain", p.rounds, p.trials, p.seed, p.workers);
    ResultRow r = detail::make_row(row, spec, "closure", "witness_chain", H.domain().size(), p.rounds, std::move(ms));
    r.bound = std::min(tdim, static_cast<double>(p.rounds));
    r.upper = r.bound;
    const bool exact = std::all_of(r.mistakes.begin(), r.mistakes.end(), [&](double m) { return m == r.bound; });
    r.status = exact ? Status::Pass : Status::Fail;
    r.note = "expects exactly min{TDim, T} on the witness chain";
    out.push_back(std::move(r));
    return out;
  }

  if (row == "general-adaptive") {
    const std::string spec = p.cls.value_or("blowup:4");
    const HypothesisClass H = load_class(spec);
    const auto ext = extended_threshold_dimension(H, p.workers);
    const double tdim = static_cast<double>(threshold_dimension(H).value);
    auto ms = detail::named_trials(H, "closure_extdim", "witness_chain", p.rounds, p.trials, p.seed, p.workers);
    ResultRow r =
        detail::make_row(row, spec, "closure_extdim", "witness_chain", H.domain().size(), p.rounds, std::move(ms));
    r.bound = static_cast<double>(ext.value);
    r.upper = r.bound;
    r.status = detail::all_at_most(r.mistakes, r.bound) ? Status::Pass : Status::Fail;
    r.note = "mistakes <= ExtTDim";
    out.push_back(std::move(r));

    auto naive = detail::named_trials(H, "closure", "witness_chain", p.rounds, p.trials, p.seed, p.workers);
    ResultRow nv =
        detail::make_row(row + "/naive", spec, "closure", "witness_chain", H.domain().size(), p.rounds, std::move(naive));
    const double closure_tdim = static_cast<double>(threshold_dimension(intersection_closure(H)).value);
    nv.bound = tdim;
    nv.upper = closure_tdim;
    nv.status = detail::all_at_most(nv.mistakes, closure_tdim) ? Status::Pass : Status::Fail;
    const bool exceeds = std::all_of(nv.mistakes.begin(), nv.mistakes.end(), [&](double m) { return m > tdim; });
    nv.note = "f = 0 closure learner, bounded by TDim(closure); " +
              std::string(exceeds ? "exceeds" : "does not exceed") + " TDim(H)";
    out.push_back(std::move(nv));
    return out;
  }

  if (row == "general-stochastic") {
    const std::string spec = p.cls.value_or("two_intervals:6");
    const HypothesisClass H = load_class(spec);
    const auto ext = extended_threshold_dimension(H, p.workers);
    const double closure_tdim = static_cast<double>(threshold_dimension(intersection_closure(H)).value);
    const double vc = static_cast<double>(vc_dimension(H));
    auto ms = detail::named_trials(H, "closure", "geometric_stochastic", p.rounds, p.trials, p.seed, p.workers);
    ResultRow r = detail::make_row(row, spec, "closure", "geometric_stochastic", H.domain().size(), p.rounds,
                                   std::move(ms));
    const double half_log2 = std::floor(std::log2(static_cast<double>(p.rounds)) / 2.0);
    r.lower = std::min(static_cast<double>(ext.value), half_log2) / 3.0;
    r.upper = closure_tdim;
    r.bound = *r.lower;
    r.status = combine(detail::judge_lower(r.mean, r.se, *r.lower),
                       detail::all_at_most(r.mistakes, closure_tdim) ? Status::Pass : Status::Fail);
    char buf[160];
    std::snprintf(buf, sizeof buf, "lower min{ExtTDim, floor(log2 T / 2)} / 3; upper TDim(closure); vc ln T = %.3f",
                  vc * std::log(static_cast<double>(p.rounds)));
    r.note = buf;
    out.push_back(std::move(r));
    return out;
  }

  throw Error("unknown table1 row: " + row);
}

struct SeparationParams {
  std::size_t n = 12;
  std::size_t rounds = 200;
  std::size_t halving_n = 8;
  double slack = 3.0;  // the constant c in T/4 - c
};

/// Wraps the halving learner and records the first round after which the
/// committed target has left its version space.
class EjectionProbe final : public Learner {
 public:
  EjectionProbe(const HypothesisClass& H, Hypothesis target) : inner_(H), target_(target) {}

  Hypothesis hypothesis() override { return inner_.hypothesis(); }

  void observe(Point x, bool y) override {
    ++t_;
    inner_.observe(x, y);
    if (!ejected_at_ && !inner_.version_space_contains(target_)) ejected_at_ = t_;
  }

  std::optional<std::size_t> ejected_at() const { return ejected_at_; }

 private:
  HalvingLearner inner_;
  Hypothesis target_;
  std::size_t t_ = 0;
  std::optional<std::size_t> ejected_at_;
};

inline std::vector<ResultRow> separation_demo(const SeparationParams& p) {
  std::vector<ResultRow> out;
  const std::string spec = "two_intervals:" + std::to_string(p.n);
  const HypothesisClass H = load_class(spec);
  const double T = static_cast<double>(p.rounds);

  auto single = [&](const std::string& learner_name) {
    auto learner = make_learner(learner_name, H);
    WitnessChainAdversary adversary;
    return static_cast<double>(play(*learner, adversary, H, p.rounds).mistakes);
  };

  ResultRow a = detail::make_row("separation/proper", spec, "greedy_proper", "witness_chain", p.n, p.rounds,
                                 {single("greedy_proper")});
  a.lower = T / 4.0 - p.slack;
  a.bound = *a.lower;
  a.status = a.mean >= *a.lower ? Status::Pass : Status::Fail;
  a.note = "proper learner forced into a trap; expects >= T/4 - c";
  out.push_back(std::move(a));

  ResultRow b = detail::make_row("separation/improper", spec, "closure", "witness_chain", p.n, p.rounds,
                                 {single("closure")});
  b.upper = static_cast<double>(p.n + 1);
  b.bound = *b.upper;
  b.status = b.mean <= *b.upper ? Status::Pass : Status::Fail;
  b.note = "closure learner; expects <= |X| + 1";
  out.push_back(std::move(b));

  {
    const std::string tspec = "thresholds:" + std::to_string(p.halving_n);
    const HypothesisClass TH = load_class(tspec);
    const Hypothesis target = largest_member(TH);
    EjectionProbe probe(TH, target);
    ReplayFirstAdversary adversary(target);
    const std::size_t rounds = p.halving_n;
    play(probe, adversary, TH, rounds, CommitMode::Fixed);
    const auto at = probe.ejected_at();
    ResultRow c = detail::make_row("separation/halving", tspec, "halving", "replay_first", p.halving_n, rounds,
                                   {static_cast<double>(at.value_or(0))});
    c.upper = static_cast<double>(p.halving_n);
    c.bound = *c.upper;
    c.status = at && *at <= p.halving_n ? Status::Pass : Status::Fail;
    c.note = at ? "target ejected from the halving version space at round " + std::to_string(*at)
                : "target never ejected";
    out.push_back(std::move(c));
  }

  {
    const std::string tspec = "thresholds:" + std::to_string(p.halving_n);
    const HypothesisClass TH = load_class(tspec);
    const double tdim = static_cast<double>(threshold_dimension(TH).value);
    GreedyProperLearner learner(TH);
    WitnessChainAdversary adversary;
    const double m = static_cast<double>(play(learner, adversary, TH, p.rounds).mistakes);
    ResultRow d = detail::make_row("separation/intclosed", tspec, "greedy_proper", "witness_chain", p.halving_n,
                                   p.rounds, {m});
    d.upper = tdim;
    d.bound = tdim;
    d.status = m <= tdim ? Status::Pass : Status::Fail;
    d.note = "intersection-closed class; proper learner stays within TDim";
    out.push_back(std::move(d));
  }
  return out;
}

struct ConvexParams {
  std::size_t d = 2;
  std::vector<std::size_t> grid{64, 128, 256, 512, 1024, 2048, 4096};
  std::size_t trials = 200;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  std::size_t bootstrap = 400;
  std::optional<convex::Body> body;
};

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double sse = 0.0;
};

inline LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  LineFit f;
  const double denom = n * sxx - sx * sx;
  f.slope = denom == 0.0 ? 0.0 : (n * sxy - sx * sy) / denom;
  f.intercept = (sy - f.slope * sx) / n;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (f.slope * x[i] + f.intercept);
    f.sse += r * r;
  }
  return f;
}

struct ConvexScaling {
  std::vector<ResultRow> rows;  // one per horizon
  double estimate = 0.0;        // slope (d >= 2) or log-fit coefficient (d = 1)
  double ci_low = 0.0;
  double ci_high = 0.0;
  double log_sse = 0.0;
  double linear_sse = 0.0;
  Status status = Status::Pass;
  std::string note;
};

/// Monte-Carlo scaling of the hull learner's mistakes against uniform
/// positives from a convex body. For d = 1 compares a ln T + b with a T + b;
/// for d >= 2 fits the log-log slope, with a bootstrap interval over trials.
inline ConvexScaling convex_scaling(const ConvexParams& p) {
  if (p.d < 1 || p.d > 3) throw Error("convex experiment needs d in {1,2,3}");
  if (p.grid.empty() || p.trials == 0) throw Error("convex experiment needs a grid and at least one trial");
  std::vector<std::size_t> grid = p.grid;
  std::sort(grid.begin(), grid.end());
  const convex::Body body = p.body.value_or(convex::default_body(p.d));
  if (convex::body_dimension(body) != p.d) throw Error("convex body does not match d");

  const auto curves = run_trials<std::vector<std::size_t>>(p.trials, p.workers, [&](std::size_t trial) {
    Rng rng = make_stream(p.seed, trial);
    return convex::run_uniform(body, grid, rng);
  });

  auto means_of = [&](const std::vector<std::size_t>& pick) {
    std::vector<double> means(grid.size(), 0.0);
    for (std::size_t trial : pick) {
      for (std::size_t j = 0; j < grid.size(); ++j) means[j] += static_cast<double>(curves[trial][j]);
    }
    for (double& m : means) m /= static_cast<double>(pick.size());
    return means;
  };
  std::vector<double> log_t, t_values;
  for (std::size_t T : grid) {
    log_t.push_back(std::log(static_cast<double>(T)));
    t_values.push_back(static_cast<double>(T));
  }
  auto estimate = [&](const std::vector<double>& means) {
    if (p.d == 1) return least_squares(log_t, means).slope;
    std::vector<double> log_m;
    for (double m : means) log_m.push_back(std::log(std::max(m, 1e-12)));
    return least_squares(log_t, log_m).slope;
  };

  std::vector<std::size_t> all(p.trials);
  for (std::size_t i = 0; i < p.trials; ++i) all[i] = i;
  const std::vector<double> means = means_of(all);

  ConvexScaling out;
  out.estimate = estimate(means);
  Rng boot = make_stream(p.seed, 0xB007);
  std::vector<double> draws;
  std::vector<std::size_t> pick(p.trials);
  for (std::size_t b = 0; b < p.bootstrap; ++b) {
    for (auto& i : pick) i = uniform_index(boot, p.trials);
    draws.push_back(estimate(means_of(pick)));
  }
  std::sort(draws.begin(), draws.end());
  if (!draws.empty()) {
    out.ci_low = draws[static_cast<std::size_t>(0.025 * static_cast<double>(draws.size() - 1))];
    out.ci_high = draws[static_cast<std::size_t>(0.975 * static_cast<double>(draws.size() - 1))];
  }
  const Summary boot_summary = summarize(draws);
  const double est_se = draws.size() > 1 ? boot_summary.se * std::sqrt(static_cast<double>(draws.size())) : 0.0;

  out.log_sse = least_squares(log_t, means).sse;
  out.linear_sse = least_squares(t_values, means).sse;
  char buf[200];
  if (p.d == 1) {
    out.status = out.log_sse < out.linear_sse ? Status::Pass : Status::Fail;
    std::snprintf(buf, sizeof buf, "log fit a = %.4f, sse %.4g vs linear sse %.4g", out.estimate, out.log_sse,
                  out.linear_sse);
  } else {
    const double lo = p.d == 2 ? 0.18 : 0.35;
    const double hi = p.d == 2 ? 0.48 : 0.65;
    out.status = detail::judge_band(out.estimate, est_se, lo, hi);
    std::snprintf(buf, sizeof buf, "log-log slope %.4f, 95%% CI [%.4f, %.4f], band [%.2f, %.2f] (harness tolerance)",
                  out.estimate, out.ci_low, out.ci_high, lo, hi);
  }
  out.note = buf;

  const std::string body_name = body == convex::Body::Interval ? "interval"
                                : body == convex::Body::Disk   ? "disk"
                                : body == convex::Body::Polygon ? "polygon"
                                                                : "ball";
  for (std::size_t j = 0; j < grid.size(); ++j) {
    std::vector<double> ms;
    for (const auto& c : curves) ms.push_back(static_cast<double>(c[j]));
    ResultRow r = detail::make_row("convex/d" + std::to_string(p.d), body_name, "convex_hull", "convex_uniform", p.d,
                                   grid[j], std::move(ms));
    r.bound = out.estimate;
    r.status = out.status;
    r.note = out.note;
    out.rows.push_back(std::move(r));
  }
  return out;
}

inline Status overall_status(const std::vector<ResultRow>& rows) {
  Status s = Status::Pass;
  for (const auto& r : rows) s = combine(s, r.status);
  return s;
}

namespace detail {

inline std::string format_number(double v) {
  if (std::isfinite(v) && v == std::floor(v) && std::abs(v) < 1e15) {
    return std::to_string(static_cast<long long>(v));
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace detail

/// One line per trial: experiment,class,learner,adversary,N,T,trial,mistakes,bound,pass.
inline void write_csv(std::ostream& os, const std::vector<ResultRow>& rows) {
  os << "experiment,class,learner,adversary,N,T,trial,mistakes,bound,pass\n";
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.mistakes.size(); ++i) {
      os << detail::csv_field(r.experiment) << ',' << detail::csv_field(r.cls) << ',' << r.learner << ','
         << r.adversary << ',' << r.n << ',' << r.rounds << ',' << i << ',' << detail::format_number(r.mistakes[i])
         << ',' << detail::format_number(r.bound) << ',' << to_string(r.status) << '\n';
    }
  }
}

inline nlohmann::json row_to_json(const ResultRow& r) {
  nlohmann::json j{{"experiment", r.experiment}, {"class", r.cls},      {"learner", r.learner},
                   {"adversary", r.adversary},   {"N", r.n},            {"T", r.rounds},
                   {"mistakes", r.mistakes},     {"mean", r.mean},      {"se", r.se},
                   {"bound", r.bound},           {"status", to_string(r.status)}, {"note", r.note}};
  if (r.lower) j["lower"] = *r.lower;
  if (r.upper) j["upper"] = *r.upper;
  return j;
}

inline void write_json(std::ostream& os, const std::vector<ResultRow>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows) arr.push_back(row_to_json(r));
  os << arr.dump(2) << '\n';
}

/// Transcript for audit: rounds with sources, I_T, f*, M_T and validity.
inline nlohmann::json transcript_to_json(const GameTranscript& tr, const HypothesisClass& H) {
  nlohmann::json rounds = nlohmann::json::array();
  for (const auto& r : tr.rounds) {
    nlohmann::json source = r.origin.kind == LabelSource::Truth
                                ? nlohmann::json("truth")
                                : nlohmann::json("replay(" + std::to_string(r.origin.replay_round) + ")");
    rounds.push_back({{"t", r.t},
                      {"hypothesis", to_bitstring(r.hypothesis, H.domain())},
                      {"x", r.x},
                      {"y", r.y ? 1 : 0},
                      {"prediction", r.prediction() ? 1 : 0},
                      {"source", source}});
  }
  const auto reliable = tr.final_state.reliable_indices();
  nlohmann::json j{{"rounds", std::move(rounds)},
                   {"reliable_indices", std::vector<std::size_t>(reliable.begin(), reliable.end())},
                   {"mistakes", tr.mistakes},
                   {"false_positive_mistakes", tr.false_positives},
                   {"valid", tr.valid},
                   {"version_space_size", tr.final_state.version_space().size()}};
  j["target"] = tr.target ? nlohmann::json(to_bitstring(*tr.target, H.domain())) : nlohmann::json(nullptr);
  if (tr.first_trap_round()) j["first_trap_round"] = *tr.first_trap_round();
  if (!tr.valid) {
    j["violation_round"] = tr.violation_round.value_or(0);
    j["violation"] = tr.violation;
  }
  return j;
}

}  // namespace replay
