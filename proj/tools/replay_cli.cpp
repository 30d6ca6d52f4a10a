#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "replay/class_io.hpp"
#include "replay/dimensions.hpp"
#include "replay/experiments.hpp"

namespace {

using namespace replay;
using nlohmann::json;

constexpr int kExitConfig = 4;

json witness_json(const WitnessSet& w, const Domain& d) {
  json hs = json::array();
  for (Hypothesis h : w.hypotheses) hs.push_back(to_bitstring(h, d));
  return {{"points", w.points}, {"hypotheses", hs}, {"verified", verify_witness(w)}};
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) throw Error("cannot write " + out);
  f << text;
}

int run_dims(const std::string& spec, const std::vector<std::string>& which, const std::string& out) {
  const HypothesisClass H = load_class(spec);
  DimensionSelection sel{false, false, false, false, false};
  for (const auto& w : which) {
    if (w == "vc") sel.vc = true;
    else if (w == "ldim") sel.littlestone = true;
    else if (w == "tdim") sel.threshold = true;
    else if (w == "depth") sel.depth = true;
    else if (w == "extdim") sel.extended = true;
    else throw Error("unknown dimension: " + w);
  }
  const DimensionReport r = dimension_report(H, sel, worker_count());
  const Domain& d = H.domain();
  json j{{"class", spec},
         {"domain_size", d.size()},
         {"size", H.size()},
         {"intersection_closed", is_intersection_closed(H)}};
  if (r.vc) j["vc"] = *r.vc;
  if (r.littlestone) j["littlestone"] = *r.littlestone;
  if (r.threshold) j["threshold"] = {{"value", r.threshold->value}, {"witness", witness_json(r.threshold->witness, d)}};
  if (r.depth) {
    json chain = json::array();
    for (Hypothesis h : r.depth->chain) chain.push_back(to_bitstring(h, d));
    j["depth"] = {{"value", r.depth->depth}, {"chain", chain}};
  }
  if (r.threshold_of_closure) {
    j["threshold_of_closure"] = {{"value", r.threshold_of_closure->value},
                                 {"witness", witness_json(r.threshold_of_closure->witness, d)}};
  }
  if (r.extended) {
    j["extended"] = {{"value", r.extended->value},
                     {"f", to_bitstring(r.extended->f.mask, d)},
                     {"witness", witness_json(r.extended->witness, d)}};
  }
  emit(j.dump(2) + "\n", out);
  return 0;
}

struct GameArgs {
  std::string learner = "closure";
  std::string adversary = "witness_chain";
  std::string cls = "thresholds:8";
  std::size_t rounds = 16;
  std::uint64_t seed = 0;
  std::string out;
  bool fixed = false;
  double replay_prob = 0.5;
  double bias = 0.5;
};

int run_game_cmd(const GameArgs& a) {
  const HypothesisClass H = load_class(a.cls);
  auto learner = make_learner(a.learner, H, worker_count());
  AdversaryOptions opt;
  opt.seed = a.seed;
  opt.rounds = a.rounds;
  opt.replay_prob = a.replay_prob;
  opt.bias = a.bias;
  auto adversary = make_adversary(a.adversary, H, opt);
  const GameTranscript tr =
      run_game(*learner, *adversary, H, {a.rounds, a.fixed ? CommitMode::Fixed : CommitMode::WorstCase});
  json j = transcript_to_json(tr, H);
  j["class"] = a.cls;
  j["learner"] = a.learner;
  j["adversary"] = a.adversary;
  j["seed"] = a.seed;
  emit(j.dump(2) + "\n", a.out);
  return tr.valid ? 0 : 3;
}

struct ExperimentArgs {
  std::string format = "csv";
  std::string out;
  std::uint64_t seed = 0;
  std::size_t trials = 0;  // 0 picks the experiment's default
  std::size_t rounds = 0;
};

int report(const std::vector<ResultRow>& rows, const ExperimentArgs& a) {
  std::ostringstream os;
  if (a.format == "json") write_json(os, rows);
  else write_csv(os, rows);
  emit(os.str(), a.out);
  for (const auto& r : rows) {
    std::cerr << r.experiment << " [" << r.cls << "] mean=" << r.mean << " se=" << r.se << " bound=" << r.bound
              << " -> " << to_string(r.status);
    if (!r.note.empty()) std::cerr << " (" << r.note << ")";
    std::cerr << '\n';
  }
  return exit_code(overall_status(rows));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Replay-setting online learning simulator"};
  app.require_subcommand(1);

  std::string dims_class;
  std::vector<std::string> dims_which{"vc", "ldim", "tdim", "depth", "extdim"};
  std::string dims_out;
  auto* dims = app.add_subcommand("dims", "Dimension report with certificates (JSON)");
  dims->add_option("--class", dims_class, "Generator name (e.g. thresholds:8) or class file")->required();
  dims->add_option("--which", dims_which, "Subset of vc,ldim,tdim,depth,extdim")->delimiter(',');
  dims->add_option("--out", dims_out, "Output file (default stdout)");

  GameArgs game_args;
  auto* game = app.add_subcommand("game", "Play one replay game and write its transcript (JSON)");
  game->add_option("--learner", game_args.learner)->required();
  game->add_option("--adversary", game_args.adversary)->required();
  game->add_option("--class", game_args.cls)->required();
  game->add_option("--rounds", game_args.rounds)->required()->check(CLI::PositiveNumber);
  game->add_option("--seed", game_args.seed);
  game->add_option("--out", game_args.out);
  game->add_flag("--fixed-target", game_args.fixed, "Score against the adversary's own target");
  game->add_option("--replay-prob", game_args.replay_prob)->check(CLI::Range(0.0, 1.0));
  game->add_option("--bias", game_args.bias)->check(CLI::Range(0.0, 1.0));

  ExperimentArgs ex;
  auto* experiment = app.add_subcommand("experiment", "Run an experiment and emit CSV or JSON");
  experiment->require_subcommand(1);
  auto common = [&ex](CLI::App* sub) {
    sub->add_option("--seed", ex.seed);
    sub->add_option("--trials", ex.trials)->check(CLI::PositiveNumber);
    sub->add_option("--rounds", ex.rounds)->check(CLI::PositiveNumber);
    sub->add_option("--out", ex.out);
    sub->add_option("--format", ex.format)->check(CLI::IsMember({"csv", "json"}));
  };

  std::string row;
  std::size_t table_n = 8;
  std::string table_class;
  auto* table1 = experiment->add_subcommand("table1", "One row of the mistake-bound table");
  table1->add_option("--row", row)->required()->check(CLI::IsMember(table1_rows()));
  table1->add_option("--n", table_n, "Domain size for threshold rows")->check(CLI::PositiveNumber);
  table1->add_option("--class", table_class, "Class for the intclosed/general rows");
  common(table1);

  SeparationParams sep;
  auto* separation = experiment->add_subcommand("separation", "Proper versus improper and halving demos");
  separation->add_option("--n", sep.n, "Grid size of two_intervals")->check(CLI::Range(3, 20));
  separation->add_option("--halving-n", sep.halving_n)->check(CLI::Range(2, 64));
  common(separation);

  ConvexParams cvx;
  std::string body;
  auto* convex_cmd = experiment->add_subcommand("convex", "Hull learner scaling on uniform convex bodies");
  convex_cmd->add_option("--d", cvx.d)->required()->check(CLI::Range(1, 3));
  convex_cmd->add_option("--grid", cvx.grid, "Horizons, e.g. 64,128,256")->delimiter(',');
  convex_cmd->add_option("--body", body)->check(CLI::IsMember({"interval", "disk", "polygon", "ball"}));
  common(convex_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*dims) return run_dims(dims_class, dims_which, dims_out);
    if (*game) return run_game_cmd(game_args);
    const unsigned workers = worker_count();
    if (*table1) {
      Table1Params p;
      p.n = table_n;
      p.rounds = ex.rounds ? ex.rounds : 4 * table_n;
      p.trials = ex.trials ? ex.trials : 1;
      p.seed = ex.seed;
      p.workers = workers;
      if (!table_class.empty()) p.cls = table_class;
      return report(reproduce_table1(row, p), ex);
    }
    if (*separation) {
      if (ex.rounds) sep.rounds = ex.rounds;
      return report(separation_demo(sep), ex);
    }
    if (*convex_cmd) {
      cvx.seed = ex.seed;
      cvx.workers = workers;
      if (ex.trials) cvx.trials = ex.trials;
      if (!body.empty()) cvx.body = convex::parse_body(body);
      const ConvexScaling s = convex_scaling(cvx);
      std::cerr << s.note << '\n';
      return report(s.rows, ex);
    }
  } catch (const InvalidTranscript& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitConfig;
}
