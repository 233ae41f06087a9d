#include "ipdlearn/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <random>
#include <stdexcept>
#include <thread>

namespace ipdlearn {

std::uint64_t Mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t PairId(const InformationClass& a, const InformationClass& b) {
  const std::string key = std::min(a.code(), b.code()) + ":" + std::max(a.code(), b.code());
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : key) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

std::uint64_t SampleSeed(std::uint64_t master, std::uint64_t pair_id, std::uint64_t index) {
  return Mix64(master ^ Mix64(pair_id ^ Mix64(index)));
}

std::vector<double> DrawClassPoint(const InformationClass& c, std::uint64_t stream_seed) {
  std::mt19937_64 rng(stream_seed);
  std::vector<double> out(c.num_blocks());
  for (double& v : out) v = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return out;
}

LearningConfig EnsembleSpec::MatchConfig() const {
  LearningConfig cfg = learning;
  cfg.class_x = class_x;
  cfg.class_y = class_y;
  return cfg;
}

void EnsembleSpec::Validate() const {
  if (samples == 0) throw std::invalid_argument("sample count must be at least 1");
  if (jobs == 0) throw std::invalid_argument("jobs must be at least 1");
  if (!(delta > 0.0 && delta < 0.5)) throw std::invalid_argument("delta must lie in (0, 0.5)");
  if (t_extend < 0.0) throw std::invalid_argument("t_extend must be nonnegative");
  MatchConfig().Validate();
}

void ParallelFor(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& fn) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::min(std::max<std::size_t>(jobs, 1), std::max<std::size_t>(n, 1));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

namespace {

constexpr double kEdgeTol = 1e-2;

// One payoff at R (within kEdgeTol), the other strictly between P and R.
bool OnRewardEdge(double u, double v, const PayoffMatrix& pm) {
  auto edge = [&](double a, double b) {
    return std::abs(a - pm.R()) < kEdgeTol && b > pm.P() && b < pm.R() - kEdgeTol;
  };
  return edge(u, v) || edge(v, u);
}

// Continues a trajectory from its end state so that the result matches a
// single run to `t_total`, including the trailing window length.
Trajectory Extend(const Trajectory& tr, const LearningConfig& cfg, double t_total) {
  LearningConfig more = cfg;
  more.t_max = t_total - cfg.t_max;
  more.window_fraction = cfg.window_fraction * t_total / more.t_max;
  if (more.window_fraction >= 1.0) {
    throw std::invalid_argument("extension horizon too short for the trailing window");
  }
  Trajectory out = IntegrateMatch(tr.final_x(), tr.final_y(), more);
  for (double& t : out.times) t += cfg.t_max;
  out.window_start += cfg.t_max;
  return out;
}

}  // namespace

std::pair<std::vector<double>, std::vector<double>> SampleInits(const EnsembleSpec& spec,
                                                                std::size_t index) {
  const std::uint64_t seed = SampleSeed(spec.seed, PairId(spec.class_x, spec.class_y), index);
  const std::uint64_t role_x = spec.class_x.code() <= spec.class_y.code() ? 0 : 1;
  return {DrawClassPoint(spec.class_x, Mix64(seed + role_x)),
          DrawClassPoint(spec.class_y, Mix64(seed + (1 - role_x)))};
}

SampleRun RunSampleDetailed(const EnsembleSpec& spec, std::size_t index) {
  const LearningConfig cfg = spec.MatchConfig();
  SampleRun run;
  SampleRecord& rec = run.record;
  rec.id = index;
  rec.seed = SampleSeed(spec.seed, PairId(spec.class_x, spec.class_y), index);
  std::tie(rec.init_x, rec.init_y) = SampleInits(spec, index);

  run.trajectory = IntegrateMatch({spec.class_x, rec.init_x}, {spec.class_y, rec.init_y}, cfg);
  Trajectory& tr = run.trajectory;
  rec.t_end = cfg.t_max;
  OutcomeLabel label = ClassifyOutcome(tr.window_average, spec.delta);
  const bool settled = label == OutcomeLabel::kMutualCooperation ||
                       label == OutcomeLabel::kMutualDefection ||
                       tr.attractor != AttractorLabel::kUndecided;
  if (!settled && spec.t_extend > cfg.t_max) {
    tr = Extend(tr, cfg, spec.t_extend);
    rec.t_end = spec.t_extend;
    label = ClassifyOutcome(tr.window_average, spec.delta);
  }
  rec.final_x = tr.x.back();
  rec.final_y = tr.y.back();
  rec.window_average = tr.window_average;
  std::tie(rec.u, rec.v) = tr.window_payoffs(cfg.payoff);
  rec.label = label;
  rec.attractor = tr.attractor;
  rec.dropped = spec.drop_reward_edge && label != OutcomeLabel::kMutualCooperation &&
                OnRewardEdge(rec.u, rec.v, cfg.payoff);
  return run;
}

SampleRecord RunSample(const EnsembleSpec& spec, std::size_t index) {
  return RunSampleDetailed(spec, index).record;
}

CensusReport RunMatchEnsemble(const EnsembleSpec& spec) {
  spec.Validate();
  if (spec.learning.mode != LearningMode::kMutual) {
    throw std::invalid_argument("match ensembles need mutual learning");
  }
  CensusReport rep;
  rep.class_x = spec.class_x;
  rep.class_y = spec.class_y;
  rep.payoff = spec.learning.payoff;
  rep.records.resize(spec.samples);
  ParallelFor(spec.samples, spec.jobs, [&](std::size_t i) { rep.records[i] = RunSample(spec, i); });

  for (const SampleRecord& r : rep.records) {
    if (r.dropped) {
      ++rep.dropped;
      continue;
    }
    ++rep.counts[static_cast<std::size_t>(r.label)];
    rep.mean_u += r.u;
    rep.mean_v += r.v;
    if (IsExploitation(r.label)) {
      if (r.u > r.v) ++rep.x_exploits;
      if (r.v > r.u) ++rep.y_exploits;
    }
  }
  if (rep.kept() > 0) {
    rep.mean_u /= static_cast<double>(rep.kept());
    rep.mean_v /= static_cast<double>(rep.kept());
  }
  return rep;
}

OneSidedTable RunOneSidedLearning(const EnsembleSpec& spec,
                                  const std::vector<InformationClass>& learners,
                                  const ClassStrategy& fixed_opponent,
                                  const std::vector<double>& sample_times) {
  spec.Validate();
  if (learners.empty()) throw std::invalid_argument("no learner classes given");
  auto coarse = std::find_if(learners.begin(), learners.end(), [&](const InformationClass& c) {
    return std::all_of(learners.begin(), learners.end(),
                       [&](const InformationClass& l) { return Refines(l, c); });
  });
  if (coarse == learners.end()) {
    throw std::invalid_argument("learner classes need a common coarsest class for matched starts");
  }

  OneSidedTable table;
  table.learners = learners;
  table.opponent = fixed_opponent;
  table.times = sample_times;
  const std::size_t nl = learners.size(), nt = sample_times.size(), ns = spec.samples;
  table.init.resize(ns);
  std::vector<std::vector<std::vector<double>>> at(ns);  // [sample][learner][time]
  std::vector<std::vector<double>> terminal(ns);

  const std::uint64_t pair = PairId(*coarse, fixed_opponent.info_class);
  ParallelFor(ns, spec.jobs, [&](std::size_t i) {
    table.init[i] = DrawClassPoint(*coarse, Mix64(SampleSeed(spec.seed, pair, i)));
    const MemoryOneStrategy start = ClassStrategy(*coarse, table.init[i]).Embed();
    at[i].assign(nl, std::vector<double>(nt, 0.0));
    terminal[i].resize(nl);
    for (std::size_t l = 0; l < nl; ++l) {
      LearningConfig cfg = spec.learning;
      cfg.class_x = learners[l];
      cfg.class_y = fixed_opponent.info_class;
      cfg.mode = LearningMode::kOneSidedX;
      std::vector<double> probs;
      for (const auto& block : learners[l].blocks()) probs.push_back(start[block.front()]);
      const Trajectory tr = IntegrateMatch({learners[l], probs}, fixed_opponent, cfg);
      std::size_t k = 0;
      for (std::size_t t = 0; t < nt; ++t) {
        while (k + 1 < tr.times.size() && tr.times[k + 1] <= sample_times[t] + 1e-9) ++k;
        at[i][l][t] = tr.u[k];
      }
      terminal[i][l] = tr.u.back();
    }
  });

  table.mean_u.assign(nl, std::vector<double>(nt, 0.0));
  table.terminal_u.assign(nl, std::vector<double>(ns, 0.0));
  for (std::size_t i = 0; i < ns; ++i) {
    for (std::size_t l = 0; l < nl; ++l) {
      for (std::size_t t = 0; t < nt; ++t) table.mean_u[l][t] += at[i][l][t];
      table.terminal_u[l][i] = terminal[i][l];
    }
  }
  for (auto& row : table.mean_u) {
    for (double& m : row) m /= static_cast<double>(ns);
  }
  return table;
}

GenerosityReport RunGenerosityExperiment(std::size_t n_equilibria, const EnsembleSpec& spec) {
  spec.Validate();
  if (!IsSubmodular(spec.learning.payoff)) {
    throw std::invalid_argument("generosity experiment needs a submodular payoff matrix");
  }
  if (!(spec.class_x == spec.class_y)) {
    throw std::invalid_argument("generosity experiment harvests from self-play of one class");
  }
  GenerosityReport rep;
  rep.class_exploiter = spec.class_x;
  rep.class_opponent = spec.class_y;

  // Harvest in fixed-size batches; only index order decides which samples are kept.
  constexpr std::size_t kBatch = 64;
  std::vector<SampleRecord> found;
  for (std::size_t begin = 0; begin < spec.samples && found.size() < n_equilibria;
       begin += kBatch) {
    const std::size_t n = std::min(kBatch, spec.samples - begin);
    std::vector<SampleRecord> batch(n);
    ParallelFor(n, spec.jobs, [&](std::size_t k) { batch[k] = RunSample(spec, begin + k); });
    for (const SampleRecord& r : batch) {
      if (found.size() == n_equilibria) break;
      rep.scanned = r.id + 1;
      if (IsExploitation(r.label)) found.push_back(r);
    }
  }
  if (found.empty()) return rep;
  const InformationClass memory_one("1234");
  rep.cases.resize(found.size());
  ParallelFor(found.size(), spec.jobs, [&](std::size_t k) {
    const SampleRecord& r = found[k];
    GenerosityCase& c = rep.cases[k];
    c.sample_id = r.id;
    const bool by_x = r.label == OutcomeLabel::kExploitByX;
    c.exploiter = by_x ? Seat::kX : Seat::kY;
    c.exploiter_before = by_x ? r.final_x : r.final_y;
    c.opponent = by_x ? r.final_y : r.final_x;
    c.u_before = by_x ? r.u : r.v;
    c.v_before = by_x ? r.v : r.u;
    const InformationClass& ce = by_x ? spec.class_x : spec.class_y;
    const InformationClass& co = by_x ? spec.class_y : spec.class_x;

    LearningConfig cfg = spec.learning;
    cfg.class_x = memory_one;
    cfg.class_y = co;
    cfg.mode = LearningMode::kOneSidedX;
    const MemoryOneStrategy start = ClassStrategy(ce, c.exploiter_before).Embed();
    const Trajectory tr = IntegrateMatch({memory_one, {start.x.begin(), start.x.end()}},
                                         {co, c.opponent}, cfg);
    const auto& fx = tr.x.back();
    c.after = MemoryOneStrategy{{fx[0], fx[1], fx[2], fx[3]}};
    std::tie(c.u_after, c.v_after) = tr.window_payoffs(cfg.payoff);
  });
  for (const GenerosityCase& c : rep.cases) {
    rep.mean_du += c.u_after - c.u_before;
    rep.mean_dv += c.v_after - c.v_before;
  }
  rep.mean_du /= static_cast<double>(rep.cases.size());
  rep.mean_dv /= static_cast<double>(rep.cases.size());
  return rep;
}

const CensusReport& TournamentReport::cell(std::size_t i, std::size_t j) const {
  if (i > j) std::swap(i, j);
  const std::size_t n = classes.size();
  if (j >= n) throw std::out_of_range("tournament cell index out of range");
  // rows 0..i-1 hold n, n-1, ... cells
  const std::size_t offset = i * n - i * (i - 1) / 2;
  return cells[offset + (j - i)];
}

TournamentReport RunClassTournament(const std::vector<InformationClass>& classes,
                                    const EnsembleSpec& spec) {
  spec.Validate();
  TournamentReport t;
  t.classes = classes;
  const std::size_t n = classes.size();
  t.exploit_counts.assign(n, std::vector<std::size_t>(n, 0));
  t.mean_payoff.assign(n, std::vector<double>(n, 0.0));
  t.payoff_difference.assign(n, std::vector<double>(n, 0.0));
  t.class_mean_payoff.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      EnsembleSpec s = spec;
      s.class_x = classes[i];
      s.class_y = classes[j];
      CensusReport c = RunMatchEnsemble(s);
      if (i == j) {
        t.exploit_counts[i][i] = c.x_exploits + c.y_exploits;
        t.mean_payoff[i][i] = 0.5 * (c.mean_u + c.mean_v);
        t.payoff_difference[i][i] = c.mean_u - c.mean_v;
      } else {
        t.exploit_counts[i][j] = c.x_exploits;
        t.exploit_counts[j][i] = c.y_exploits;
        t.mean_payoff[i][j] = c.mean_u;
        t.mean_payoff[j][i] = c.mean_v;
        t.payoff_difference[i][j] = c.mean_u - c.mean_v;
        t.payoff_difference[j][i] = c.mean_v - c.mean_u;
      }
      t.cells.push_back(std::move(c));
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) t.class_mean_payoff[i] += t.mean_payoff[i][j];
    t.class_mean_payoff[i] /= static_cast<double>(n);
  }
  return t;
}

std::vector<ExploitEdge> ExploitationEdges(const TournamentReport& t, std::size_t min_count) {
  std::vector<ExploitEdge> edges;
  for (std::size_t i = 0; i < t.classes.size(); ++i) {
    for (std::size_t j = 0; j < t.classes.size(); ++j) {
      if (i != j && t.exploit_counts[i][j] >= std::max<std::size_t>(min_count, 1)) {
        edges.push_back({t.classes[i], t.classes[j], t.exploit_counts[i][j]});
      }
    }
  }
  return edges;
}

std::vector<ExploitEdge> ComplexExploitsSimple(const TournamentReport& t, std::size_t min_count) {
  auto edges = ExploitationEdges(t, min_count);
  std::erase_if(edges, [](const ExploitEdge& e) {
    return !(Refines(e.exploiter, e.exploited) && !(e.exploiter == e.exploited));
  });
  return edges;
}

std::vector<SweepEntry> RunSubmodularitySweep(const std::vector<std::array<double, 4>>& matrices,
                                              const std::vector<InformationClass>& classes,
                                              const EnsembleSpec& spec) {
  std::vector<PayoffMatrix> payoffs;
  for (const auto& m : matrices) payoffs.emplace_back(m[0], m[1], m[2], m[3]);
  spec.Validate();

  std::vector<SweepEntry> out;
  for (const PayoffMatrix& pm : payoffs) {
    EnsembleSpec s = spec;
    s.learning.payoff = pm;
    SweepEntry e;
    e.payoff = pm;
    e.submodular = IsSubmodular(pm);
    e.tournament = RunClassTournament(classes, s);
    for (const CensusReport& c : e.tournament.cells) {
      for (std::size_t k = 0; k < e.counts.size(); ++k) e.counts[k] += c.counts[k];
    }
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace ipdlearn
