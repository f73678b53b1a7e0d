// Command-line frontend: info | bipartition | ssgb | verify | sweep | perturb.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "genmod/genmod.hpp"

namespace {

using genmod::Index;
using genmod::json::Json;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitSingleCommunity = 2;
constexpr int kExitInput = 3;
constexpr int kExitNumerical = 4;
constexpr int kExitUsage = 64;

struct RunConfig {
  std::string input;
  std::string format = "edgelist";
  std::string model = "ng";
  double gamma = 1.0;
  double tol = 1e-10;
  double residual_tol = 1e-10;
  std::uint64_t seed = 42;
  Index size_floor = 1;
  int max_depth = 256;
  bool greedy_q = false;
  std::string output;
  std::string partition;
  std::string edge;
  double eps = 1e-4;
  std::vector<std::string> theorems{"all"};
  std::vector<double> gammas;
};

class UsageError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

genmod::ModelSpec model_spec(const RunConfig& c, double gamma) {
  return {genmod::parse_model(c.model), gamma};
}

genmod::PartitionOptions partition_options(const RunConfig& c) {
  genmod::PartitionOptions o;
  o.solver.sign_tol = c.tol;
  o.solver.residual_tol = c.residual_tol;
  o.solver.seed = c.seed;
  o.size_floor = c.size_floor;
  o.max_depth = c.max_depth;
  o.greedy_q = c.greedy_q;
  return o;
}

genmod::oracles::OracleOptions oracle_options(const RunConfig& c) {
  genmod::oracles::OracleOptions o;
  o.solver = partition_options(c).solver;
  return o;
}

genmod::io::LoadedGraph load(const RunConfig& c) {
  if (c.input.empty())
    throw UsageError("--input is required");
  return genmod::io::read_graph_file(c.input, genmod::io::parse_format(c.format));
}

std::vector<genmod::NodeSet> load_partition(const std::string& path,
                                            const genmod::io::LoadedGraph& lg) {
  std::ifstream in(path);
  if (!in)
    genmod::detail::fail(genmod::ErrorCode::io_error, "cannot open '" + path + "'");
  return genmod::io::read_flat_partition(in, lg);
}

std::pair<Index, Index> parse_edge(const std::string& text, const genmod::io::LoadedGraph& lg) {
  const auto comma = text.find(',');
  if (comma == std::string::npos)
    throw UsageError("--edge expects 'i,j'");
  try {
    const auto i = std::stoll(text.substr(0, comma));
    const auto j = std::stoll(text.substr(comma + 1));
    return {lg.index_of(i), lg.index_of(j)};
  } catch (const std::logic_error&) {
    throw UsageError("--edge expects two integer node IDs");
  }
}

void emit(const Json& j) { std::cout << j.dump(2) << '\n'; }

int cmd_info(const RunConfig& c) {
  const auto lg = load(c);
  const auto& g = lg.graph;
  const auto comps = genmod::connected_components(g);
  const auto& d = g.degrees();
  Json out{{"n", g.n()},
           {"edges", g.edge_count()},
           {"volume", g.volume()},
           {"connected", comps.count == 1},
           {"components", comps.count},
           {"degree",
            Json{{"min", d.minCoeff()},
                 {"max", d.maxCoeff()},
                 {"mean", d.mean()}}}};
  if (!c.partition.empty()) {
    const auto parts = load_partition(c.partition, lg);
    const auto spec = model_spec(c, c.gamma);
    const auto m = genmod::build(g, spec);
    Json reports = Json::array();
    for (const auto& p : parts)
      reports.push_back(genmod::json::report(genmod::modularity(m, p), &lg.ids));
    out["partition"] = Json{{"model", genmod::json::model(spec)},
                            {"communities", parts.size()},
                            {"modularity", genmod::partition_modularity(m, parts)},
                            {"parts", reports}};
  }
  emit(out);
  return kExitOk;
}

int cmd_bipartition(const RunConfig& c) {
  const auto lg = load(c);
  const auto spec = model_spec(c, c.gamma);
  const auto m = genmod::build(lg.graph, spec);
  const auto opt = partition_options(c);
  const auto b = genmod::spectral_bipartition(m, lg.graph, opt);
  const bool single = b.leading.value <= opt.solver.sign_tol * b.leading.frobenius ||
                      b.positive.empty() || b.negative.empty();
  Json out = genmod::json::bipartition(b, &lg.ids);
  out["model"] = genmod::json::model(spec);
  out["communities"] = single ? 1 : 2;
  if (!single) {
    out["q_positive"] = genmod::modularity(m, b.positive).q;
    out["q_negative"] = genmod::modularity(m, b.negative).q;
  }
  emit(out);
  return single ? kExitSingleCommunity : kExitOk;
}

int cmd_ssgb(const RunConfig& c) {
  const auto lg = load(c);
  const auto d = genmod::ssgb(lg.graph, model_spec(c, c.gamma), partition_options(c));
  Json out = genmod::json::dendrogram(d, &lg.ids);
  out["audit"] = genmod::json::audit(genmod::connectivity_audit(d, lg.graph));
  if (!c.output.empty()) {
    std::ofstream f(c.output);
    if (!f)
      genmod::detail::fail(genmod::ErrorCode::io_error, "cannot write '" + c.output + "'");
    genmod::io::write_flat_partition(f, d.leaf_sets(), lg.ids);
  }
  emit(out);
  return d.leaf_sets().size() == 1 ? kExitSingleCommunity : kExitOk;
}

int cmd_verify(const RunConfig& c) {
  static const std::vector<std::string> known{"gap", "nodal", "sign", "perturb", "counts", "all"};
  std::vector<std::string> selected;
  for (const auto& t : c.theorems) {
    if (std::find(known.begin(), known.end(), t) == known.end())
      throw UsageError("unknown theorem selector '" + t + "'");
    if (t == "all")
      selected.assign(known.begin(), known.end() - 1);
    else if (std::find(selected.begin(), selected.end(), t) == selected.end())
      selected.push_back(t);
  }

  const auto lg = load(c);
  const auto& g = lg.graph;
  const auto spec = model_spec(c, c.gamma);
  const auto m = genmod::build(g, spec);
  const auto opt = oracle_options(c);
  namespace ora = genmod::oracles;
  Json verdicts = Json::array();

  for (const auto& t : selected) {
    if (t == "gap") {
      verdicts.push_back(genmod::json::verdict(ora::check_strict_gap(m, g, opt), opt));
    } else if (t == "nodal") {
      verdicts.push_back(genmod::json::verdict(
          ora::check_nodal_connectivity(m, g, {0.0, 1e-3, 1e-1, 1.0, 10.0}, opt), opt, &lg.ids));
    } else if (t == "sign") {
      const auto lp = genmod::leading_eigenpair(m, opt.solver);
      const auto s = genmod::NodeSet::where(
          g.n(), [&](Index i) { return lp.vector(i) >= -opt.zero_tol; });
      verdicts.push_back(
          genmod::json::verdict(ora::sign_pattern_certificate(m, s, 0.0, opt), opt, &lg.ids));
      verdicts.push_back(genmod::json::verdict(
          ora::sign_pattern_certificate(m, s, std::nullopt, opt), opt, &lg.ids));
    } else if (t == "counts") {
      std::vector<genmod::NodeSet> parts;
      if (!c.partition.empty()) {
        parts = load_partition(c.partition, lg);
      } else {
        genmod::PartitionOptions po;
        po.solver = opt.solver;
        parts = genmod::ssgb(g, spec, po).leaf_sets();
      }
      verdicts.push_back(
          genmod::json::verdict(ora::module_count_bound(m, parts, std::nullopt, opt), opt, &lg.ids));
    } else if (t == "perturb") {
      if (c.edge.empty()) {
        verdicts.push_back(genmod::json::verdict("perturbation-rate", false, Json::object(), false,
                                                 true, Json::object(),
                                                 {"skipped: no --edge given"}));
        continue;
      }
      const auto [i, j] = parse_edge(c.edge, lg);
      try {
        verdicts.push_back(genmod::json::verdict(ora::perturbation_rate(g, spec, i, j, c.eps, opt),
                                                 opt, &lg.ids));
      } catch (const genmod::Error& e) {
        if (e.code() != genmod::ErrorCode::not_simple)
          throw;
        verdicts.push_back(genmod::json::verdict("perturbation-rate", false, Json::object(), false,
                                                 true, Json::object(), {e.what()}));
      }
    }
  }

  bool all = true;
  for (const auto& v : verdicts)
    all = all && v["pass"].get<bool>();
  emit(Json{{"model", genmod::json::model(spec)}, {"pass", all}, {"verdicts", verdicts}});
  return all ? kExitOk : kExitVerifyFailed;
}

int cmd_sweep(const RunConfig& c) {
  if (c.gammas.empty())
    throw UsageError("sweep needs at least one --gammas value");
  const auto lg = load(c);
  std::ostringstream csv;
  csv.precision(17);
  csv << "gamma,communities,modularity,positive_eigenvalues,error\n";
  for (double gamma : c.gammas) {
    csv << gamma << ',';
    try {
      const auto spec = model_spec(c, gamma);
      const auto opt = partition_options(c);
      const auto d = genmod::ssgb(lg.graph, spec, opt);
      const auto count =
          genmod::positive_eigenvalue_count(genmod::build(lg.graph, spec), opt.solver);
      csv << d.leaf_sets().size() << ',' << d.modularity << ',' << count << ",\n";
    } catch (const genmod::Error& e) {
      std::string msg = e.what();
      std::replace(msg.begin(), msg.end(), ',', ';');
      std::replace(msg.begin(), msg.end(), '"', '\'');
      csv << ",,," << genmod::to_string(e.code()) << ": " << msg << '\n';
    }
  }
  if (c.output.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream f(c.output);
    if (!f)
      genmod::detail::fail(genmod::ErrorCode::io_error, "cannot write '" + c.output + "'");
    f << csv.str();
  }
  return kExitOk;
}

int cmd_perturb(const RunConfig& c) {
  if (c.edge.empty())
    throw UsageError("perturb needs --edge i,j");
  const auto lg = load(c);
  const auto [i, j] = parse_edge(c.edge, lg);
  const auto opt = oracle_options(c);
  const auto spec = model_spec(c, c.gamma);
  emit(genmod::json::verdict(
      genmod::oracles::perturbation_rate(lg.graph, spec, i, j, c.eps, opt), opt, &lg.ids));
  return kExitOk;
}

int exit_code_for(genmod::ErrorCode code) {
  using genmod::ErrorCode;
  switch (code) {
  case ErrorCode::not_converged:
  case ErrorCode::not_simple:
  case ErrorCode::internal_consistency:
    return kExitNumerical;
  default:
    return kExitInput;
  }
}

void report_error(std::string_view code, int number, const std::string& message) {
  Json err{{"error", Json{{"code", code}, {"number", number}, {"message", message}}}};
  std::cerr << err.dump() << '\n';
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral community detection with generalized modularity matrices"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  app.set_config("--config", "", "TOML/INI file with option values; command-line flags win");

  RunConfig c;
  app.add_option("--input,-i", c.input, "graph file");
  app.add_option("--format", c.format, "edgelist | matrixmarket")->capture_default_str();
  app.add_option("--model", c.model, "ng | norm | rb | rn | afg")->capture_default_str();
  app.add_option("--gamma", c.gamma, "resolution parameter")->capture_default_str();
  app.add_option("--tol", c.tol, "sign threshold tau, relative to ||M||_F")->capture_default_str();
  app.add_option("--residual-tol", c.residual_tol, "eigenpair residual tolerance")
      ->capture_default_str();
  app.add_option("--seed", c.seed, "Lanczos start-vector seed")->capture_default_str();
  app.add_option("--size-floor", c.size_floor, "do not split subsets this small")
      ->capture_default_str();
  app.add_option("--max-depth", c.max_depth, "SSGB depth limit")->capture_default_str();
  app.add_flag("--greedy-q", c.greedy_q, "refuse splits that lower total modularity");
  app.add_option("--output,-o", c.output, "flat partition (ssgb) or CSV (sweep) destination");
  app.add_option("--partition", c.partition, "flat partition to score (info, verify counts)");
  app.add_option("--edge", c.edge, "node pair 'i,j' (1-based IDs)");
  app.add_option("--eps", c.eps, "perturbation size")->capture_default_str();
  app.add_option("--theorems", c.theorems, "gap nodal sign perturb counts all")
      ->delimiter(',')
      ->capture_default_str();
  app.add_option("--gammas", c.gammas, "comma-separated gamma values for sweep")->delimiter(',');

  auto* info = app.add_subcommand("info", "graph summary; with --partition, its modularity");
  auto* bip = app.add_subcommand("bipartition", "leading-eigenvector bipartition");
  auto* ssgb = app.add_subcommand("ssgb", "successive spectral bipartition");
  auto* verify = app.add_subcommand("verify", "run theorem oracles on the input graph");
  auto* sweep = app.add_subcommand("sweep", "SSGB over a list of gamma values, CSV out");
  auto* perturb = app.add_subcommand("perturb", "first-order response of m_G to one edge");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    report_error("usage", kExitUsage, e.what());
    return kExitUsage;
  }

  try {
    if (*info) return cmd_info(c);
    if (*bip) return cmd_bipartition(c);
    if (*ssgb) return cmd_ssgb(c);
    if (*verify) return cmd_verify(c);
    if (*sweep) return cmd_sweep(c);
    if (*perturb) return cmd_perturb(c);
  } catch (const UsageError& e) {
    report_error("usage", kExitUsage, e.what());
    return kExitUsage;
  } catch (const genmod::Error& e) {
    report_error(genmod::to_string(e.code()), static_cast<int>(e.code()), e.what());
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    report_error("internal", 1, e.what());
    return kExitNumerical;
  }
  return kExitUsage;
}
