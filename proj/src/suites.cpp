#include "ncgossip/suites.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <set>
#include <sstream>

#include "ncgossip/capacity.hpp"
#include "ncgossip/engine.hpp"
#include "ncgossip/errors.hpp"
#include "ncgossip/util.hpp"

namespace ncg {

namespace {

using nlohmann::json;

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  require(j.is_object(), Err::Config, where + " must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    require(allowed.count(it.key()) > 0, Err::Config, "unknown key '" + where + "." + it.key() + "'");
  }
}

std::uint64_t config_hash(const json& config) {
  json canon = config;
  canon.erase("threads");  // execution detail, never affects the data
  return fnv1a64(canon.dump());  // nlohmann orders keys, so the dump is canonical
}

std::string hash_hex(std::uint64_t hash) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64, hash);
  return buf;
}

std::string file_header(std::uint64_t hash, std::uint64_t seed) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "# config_hash=%s seed=%" PRIu64 "\n", hash_hex(hash).c_str(), seed);
  return buf;
}

std::uint64_t get_seed(const json& config) { return config.value("seed", 20240501ull); }

unsigned get_threads(const json& config) {
  if (config.contains("threads")) return config.at("threads").get<unsigned>();
  return default_thread_count();
}

FieldRef field_from_json(const json& j) {
  check_keys(j, {"p", "m", "modulus"}, "field");
  std::uint32_t p = j.value("p", 2u);
  std::uint32_t m = j.value("m", 1u);
  std::optional<std::vector<std::uint32_t>> modulus;
  if (j.contains("modulus")) modulus = j.at("modulus").get<std::vector<std::uint32_t>>();
  return Field::make(p, m, modulus);
}

void validate_model_keys(const json& j) {
  require(j.is_object() && j.contains("kind"), Err::Config, "model must be an object with a 'kind'");
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "uniform-gossip") {
    check_keys(j, {"kind", "n", "mode", "graph"}, "model");
  } else if (kind == "random-phone-call") {
    check_keys(j, {"kind", "n", "mode"}, "model");
  } else if (kind == "static") {
    check_keys(j, {"kind", "n", "graph"}, "model");
  } else if (kind == "edge-markovian") {
    check_keys(j, {"kind", "n", "p_birth", "p_death", "initial"}, "model");
  } else if (kind == "lossy") {
    check_keys(j, {"kind", "n", "loss", "inner"}, "model");
    validate_model_keys(j.at("inner"));
  }
  // unknown kinds fall through to ModelSpec::from_json, which reports them
}

ModelSpec model_from_json(const json& j) {
  validate_model_keys(j);
  return ModelSpec::from_json(j);
}

json flood_params_json(const FloodParams& p) {
  return json{{"T", p.T},
              {"alpha", p.alpha},
              {"q", p.q},
              {"trials", p.trials},
              {"residual", p.residual},
              {"diagnostics",
               json{{"alpha_fit", p.alpha_fit},
                    {"alpha_se", p.alpha_se},
                    {"insufficient_tail", p.insufficient_tail},
                    {"tail_points", p.tail_points}}}};
}

SuiteResult run_flood_estimate(const json& config) {
  check_keys(config, {"suite", "seed", "threads", "model", "q", "trials", "max_rounds", "starts", "alpha_cap"},
             "config");
  ModelSpec model = model_from_json(config.at("model"));
  std::uint32_t q = config.at("q").get<std::uint32_t>();
  std::uint32_t trials = config.value("trials", 10000u);
  FloodEstimateOptions options;
  options.max_rounds = config.value("max_rounds", 4096u);
  options.max_starts = config.value("starts", 8u);
  options.alpha_cap = config.value("alpha_cap", 16.0);
  options.threads = get_threads(config);
  std::uint64_t seed = get_seed(config);

  FloodEstimate est = estimate_flood_params(model, q, trials, RngStream(seed), options);

  std::uint64_t hash = config_hash(config);
  SuiteResult result;
  result.summary = flood_params_json(est.params);
  result.summary["seed"] = seed;
  result.summary["config_hash"] = hash_hex(hash);
  json starts = json::array();
  for (const auto& d : est.starts) {
    starts.push_back(json{{"start", d.start},
                          {"T", d.T},
                          {"alpha", d.alpha},
                          {"alpha_fit", d.alpha_fit},
                          {"residual", d.residual},
                          {"tail_points", d.tail_points},
                          {"insufficient_tail", d.insufficient_tail}});
  }
  result.summary["starts"] = starts;

  std::ostringstream csv;
  csv << file_header(hash, seed);
  csv << "start,t,p_stop_ge_t\n";
  for (const auto& d : est.starts) {
    std::uint64_t total = 0;
    for (auto c : d.histogram) total += c;
    std::uint64_t at_least = total;
    for (std::size_t t = 0; t < d.histogram.size(); ++t) {
      if (t > 0) at_least -= d.histogram[t - 1];
      if (at_least == 0) break;
      char row[128];
      std::snprintf(row, sizeof(row), "%u,%zu,%.10g\n", d.start, t,
                    static_cast<double>(at_least) / static_cast<double>(total));
      csv << row;
    }
  }
  result.files["flood_tail.csv"] = csv.str();
  result.files["flood_params.json"] = result.summary.dump(2) + "\n";
  return result;
}

ExperimentSpec experiment_from_json(const json& config) {
  check_keys(config,
             {"suite", "seed", "threads", "model", "source", "scenario", "k", "coding", "placement", "stop_rule",
              "epsilon", "max_rounds", "trials", "trace_nodes", "consistency_checks", "bound"},
             "config");
  ExperimentSpec spec;
  spec.model = model_from_json(config.at("model"));

  const json& coding = config.at("coding");
  check_keys(coding, {"field", "l", "s", "delta"}, "coding");
  spec.field = field_from_json(coding.at("field"));
  spec.l = coding.value("l", 1u);
  spec.s = coding.at("s").get<std::uint32_t>();
  spec.delta = coding.value("delta", 0.1);

  std::string scenario = config.value("scenario", "plain");
  if (scenario == "plain") {
    spec.scenario = Scenario::PlainMessages;
    spec.k_plain = config.value("k", 1u);
    require(spec.k_plain >= 1, Err::Config, "k must be >= 1");
  } else if (scenario == "single") {
    spec.scenario = Scenario::SingleSourceSideInfo;
  } else if (scenario == "joint") {
    spec.scenario = Scenario::TwoSourceJoint;
  } else {
    fail(Err::Config, "unknown scenario '" + scenario + "' (expected plain|single|joint)");
  }
  if (spec.scenario != Scenario::PlainMessages) {
    require(config.contains("source"), Err::Config, "scenario requires a source");
    spec.source = JointSource::from_json(config.at("source"), spec.model.n);
  }

  std::uint32_t k = spec.scenario == Scenario::PlainMessages ? spec.k_plain : spec.source->k();
  if (config.contains("placement")) {
    for (auto it = config.at("placement").begin(); it != config.at("placement").end(); ++it) {
      std::uint32_t msg = static_cast<std::uint32_t>(std::stoul(it.key()));
      spec.placement[msg] = it.value().get<std::vector<std::uint32_t>>();
    }
  } else {
    for (std::uint32_t i = 0; i < k; ++i) spec.placement[i] = {i % spec.model.n};
  }

  if (config.contains("stop_rule") && config.at("stop_rule").is_object()) {
    check_keys(config.at("stop_rule"), {"node"}, "stop_rule");
    spec.stop.kind = StopRule::Kind::SingleNode;
    spec.stop.node = config.at("stop_rule").at("node").get<std::uint32_t>();
  } else if (config.contains("stop_rule")) {
    require(config.at("stop_rule").get<std::string>() == "all", Err::Config,
            "stop_rule must be \"all\" or {\"node\": v}");
  }

  spec.epsilon = config.value("epsilon", 0.1);
  spec.max_rounds = config.value("max_rounds", 1000u);
  spec.trials = config.value("trials", 100u);
  if (config.contains("trace_nodes")) spec.trace_nodes = config.at("trace_nodes").get<std::vector<std::uint32_t>>();
  spec.check_consistency = config.value("consistency_checks", false);
  return spec;
}

SuiteResult run_gossip(const json& config) {
  ExperimentSpec spec = experiment_from_json(config);
  std::uint64_t seed = get_seed(config);
  unsigned threads = get_threads(config);

  // optional bound: explicit {T, alpha} or a flood estimate run inline
  std::optional<double> bound;
  json bound_info;
  if (config.contains("bound") && !config.at("bound").is_null()) {
    const json& b = config.at("bound");
    check_keys(b, {"T", "alpha", "formula", "flood_trials", "flood_max_rounds", "epsilon_split"}, "bound");
    FloodParams params;
    params.q = spec.field->order();
    if (b.contains("T")) {
      params.T = b.at("T").get<double>();
      params.alpha = b.at("alpha").get<double>();
    } else {
      FloodEstimateOptions options;
      options.max_rounds = b.value("flood_max_rounds", 4096u);
      options.threads = threads;
      auto est = estimate_flood_params(spec.model, spec.field->order(), b.value("flood_trials", 10000u),
                                       RngStream(seed).child(rngtag::kScan), options);
      params = est.params;
    }
    double eps = spec.epsilon;
    if (b.value("epsilon_split", false)) eps /= 2.0;
    std::string formula = b.value("formula", "theorem1");
    if (formula == "theorem1") {
      bound = theorem1_bound(params, spec.scenario == Scenario::PlainMessages ? spec.k_plain : spec.source->k(), eps);
    } else if (formula == "theorem2") {
      require(spec.scenario == Scenario::SingleSourceSideInfo, Err::Config, "theorem2 bound needs scenario=single");
      // worst case over nodes: largest conditional entropy
      double h = 0.0;
      for (std::uint32_t v = 0; v < spec.model.n; ++v) h = std::max(h, spec.source->cond_entropy(1u, v));
      bound = theorem2_bound(params, spec.l, spec.s, h, spec.delta, eps);
    } else if (formula == "theorem3") {
      require(spec.scenario == Scenario::TwoSourceJoint, Err::Config, "theorem3 bound needs scenario=joint");
      bound = theorem3_bound(params, spec.l, spec.s, spec.source->joint_entropy_x(), spec.delta, eps);
    } else {
      fail(Err::Config, "unknown bound formula '" + formula + "'");
    }
    bound_info = flood_params_json(params);
    bound_info["formula"] = formula;
    bound_info["value"] = *bound;
  }

  StoppingSummary summary = stopping_time_distribution(spec, RngStream(seed), bound, threads, /*keep_trials=*/true);

  std::uint64_t hash = config_hash(config);
  SuiteResult result;
  result.summary["suite"] = "gossip-run";
  result.summary["seed"] = seed;
  result.summary["config_hash"] = hash_hex(hash);
  result.summary["trials"] = summary.trials;
  result.summary["timeouts"] = summary.timeouts;
  if (!summary.stop_flood_times.empty()) {
    result.summary["stopping_flood_units"] = json{{"mean", summary.mean},
                                                  {"q50", summary.quantile(0.5)},
                                                  {"q90", summary.quantile(0.9)},
                                                  {"q95", summary.quantile(0.95)}};
  }
  if (bound) {
    bound_info["exceed_fraction"] = summary.exceed_fraction;
    result.summary["bound"] = bound_info;
  }

  std::ostringstream csv;
  csv << file_header(hash, seed);
  csv << "trial,node,threshold,decode_round,decode_flood_time\n";
  for (std::uint32_t i = 0; i < summary.per_trial.size(); ++i) {
    const auto& trial = summary.per_trial[i];
    for (std::uint32_t v = 0; v < trial.decode_round.size(); ++v) {
      long long round = trial.decode_round[v] ? static_cast<long long>(*trial.decode_round[v]) : -1;
      long long flood = round >= 0 ? round + 1 : -1;
      csv << i << ',' << v << ',' << trial.thresholds[v] << ',' << round << ',' << flood << '\n';
    }
  }
  result.files["decode_times.csv"] = csv.str();
  result.files["summary.json"] = result.summary.dump(2) + "\n";
  return result;
}

CapacityDemand demand_from_json(const json& j) {
  check_keys(j, {"sink", "sources"}, "demand");
  CapacityDemand demand;
  demand.sink = j.at("sink").get<std::uint32_t>();
  for (const auto& s : j.at("sources")) {
    check_keys(s, {"node", "c"}, "demand.sources[]");
    DemandSource src;
    src.node = s.at("node").get<std::uint32_t>();
    if (s.at("c").is_string())
      src.c = Rational::parse(s.at("c").get<std::string>());
    else if (s.at("c").is_number_integer())
      src.c = Rational(s.at("c").get<std::int64_t>(), 1);
    else
      src.c = Rational::parse(std::to_string(s.at("c").get<double>()));
    demand.sources.push_back(src);
  }
  return demand;
}

std::string format_rational(const Rational& r) {
  if (r.den == 1) return std::to_string(r.num);
  return std::to_string(r.num) + "/" + std::to_string(r.den);
}

SuiteResult run_capacity_scan(const json& config) {
  check_keys(config,
             {"suite", "seed", "threads", "model", "demand", "trials", "max_rounds", "max_denominator", "dump_paths"},
             "config");
  ModelSpec model = model_from_json(config.at("model"));
  CapacityDemand demand = demand_from_json(config.at("demand"));
  std::uint32_t trials = config.value("trials", 200u);
  std::uint32_t max_rounds = config.value("max_rounds", 1000u);
  std::int64_t max_den = config.value("max_denominator", 1024);
  bool dump_paths = config.value("dump_paths", false);
  std::uint64_t seed = get_seed(config);
  unsigned threads = get_threads(config);

  std::vector<std::optional<std::uint32_t>> times(trials);
  parallel_for(trials, threads, [&](std::size_t i) {
    times[i] = first_feasible_time(model, demand, max_rounds, RngStream(seed).child(rngtag::kScan, i), max_den);
  });

  std::vector<double> finished;
  std::uint32_t timeouts = 0;
  for (const auto& t : times) {
    if (t)
      finished.push_back(static_cast<double>(*t));
    else
      ++timeouts;
  }
  std::sort(finished.begin(), finished.end());

  std::uint64_t hash = config_hash(config);
  SuiteResult result;
  result.summary["suite"] = "capacity-scan";
  result.summary["seed"] = seed;
  result.summary["config_hash"] = hash_hex(hash);
  result.summary["trials"] = trials;
  result.summary["timeouts"] = timeouts;
  if (!finished.empty()) {
    result.summary["first_feasible"] = json{{"median", sorted_quantile(finished, 0.5)},
                                            {"q90", sorted_quantile(finished, 0.9)},
                                            {"mean", std::accumulate(finished.begin(), finished.end(), 0.0) /
                                                         static_cast<double>(finished.size())}};
  }

  std::ostringstream csv;
  csv << file_header(hash, seed);
  csv << "trial,first_feasible_time\n";
  for (std::uint32_t i = 0; i < trials; ++i)
    csv << i << ',' << (times[i] ? static_cast<long long>(*times[i]) : -1) << '\n';
  result.files["feasible_times.csv"] = csv.str();

  if (dump_paths) {
    // replay trial 0 and dump the witness at its first feasible round
    std::ostringstream dump;
    dump << file_header(hash, seed);
    if (times[0]) {
      ModelSampler sampler(model, RngStream(seed).child(rngtag::kScan, 0));
      std::vector<std::vector<Edge>> rounds;
      for (std::uint32_t t = 1; t <= *times[0]; ++t) rounds.push_back(sampler.next().edges);
      auto fr = feasible(TimeExpandedGraph(model.n, rounds), demand, max_den);
      for (const auto& path : fr.paths) {
        dump << format_rational(path.weight) << ':';
        for (std::uint32_t t = 0; t < path.nodes.size(); ++t) dump << ' ' << path.nodes[t] << '@' << t;
        dump << '\n';
      }
    }
    result.files["witness_paths.txt"] = dump.str();
  }
  result.files["scan_summary.json"] = result.summary.dump(2) + "\n";
  return result;
}

SuiteResult run_lemma4(const json& config) {
  check_keys(config, {"suite", "seed", "threads", "grid"}, "config");
  json grid = json::array();
  if (config.contains("grid")) {
    grid = config.at("grid");
  } else {
    // default: q in {2,3,4}, ambient in {2,3,4}, h in {0,1,2} with h < ambient
    for (auto [p, m] : {std::pair<int, int>{2, 1}, {3, 1}, {2, 2}}) {
      for (int ambient = 2; ambient <= 4; ++ambient)
        for (int h = 0; h <= 2 && h < ambient; ++h)
          grid.push_back(json{{"p", p}, {"m", m}, {"ambient", ambient}, {"h", h}});
    }
  }

  SuiteResult result;
  json rows = json::array();
  bool all_ok = true;
  std::ostringstream csv;
  std::uint64_t hash = config_hash(config);
  std::uint64_t seed = get_seed(config);
  csv << file_header(hash, seed);
  csv << "q,p,m,ambient,h,witnesses,subspaces_checked,verified\n";
  for (const auto& cell : grid) {
    check_keys(cell, {"p", "m", "ambient", "h"}, "grid[]");
    auto field = Field::make(cell.at("p").get<std::uint32_t>(), cell.at("m").get<std::uint32_t>());
    std::uint32_t ambient = cell.at("ambient").get<std::uint32_t>();
    std::uint32_t h = cell.at("h").get<std::uint32_t>();
    auto res = verify_lemma4(field, ambient, h);
    all_ok = all_ok && res.verified;
    rows.push_back(json{{"q", field->order()},
                        {"p", field->characteristic()},
                        {"m", field->degree()},
                        {"ambient", ambient},
                        {"h", h},
                        {"witnesses", res.witnesses.size()},
                        {"subspaces_checked", res.subspaces_checked},
                        {"verified", res.verified}});
    csv << field->order() << ',' << field->characteristic() << ',' << field->degree() << ',' << ambient << ',' << h
        << ',' << res.witnesses.size() << ',' << res.subspaces_checked << ',' << (res.verified ? 1 : 0) << '\n';
  }
  result.summary["suite"] = "lemma4-verify";
  result.summary["seed"] = seed;
  result.summary["config_hash"] = hash_hex(hash);
  result.summary["rows"] = rows;
  result.summary["all_verified"] = all_ok;
  result.files["lemma4.csv"] = csv.str();
  result.files["lemma4.json"] = result.summary.dump(2) + "\n";
  return result;
}

json& navigate(json& root, const std::string& dotted) {
  json* cur = &root;
  std::size_t pos = 0;
  for (;;) {
    auto dot = dotted.find('.', pos);
    std::string key = dotted.substr(pos, dot == std::string::npos ? std::string::npos : dot - pos);
    require(!key.empty(), Err::Config, "bad override path '" + dotted + "'");
    if (dot == std::string::npos) return (*cur)[key];
    cur = &(*cur)[key];
    pos = dot + 1;
  }
}

SuiteResult run_sweep(const json& config) {
  check_keys(config, {"suite", "seed", "threads", "param", "values", "base"}, "config");
  std::string param = config.at("param").get<std::string>();
  const json& values = config.at("values");
  require(values.is_array() && !values.empty(), Err::Config, "sweep values must be a nonempty array");
  json base = config.at("base");
  require(base.is_object() && base.contains("suite"), Err::Config, "sweep base must carry a suite");
  if (config.contains("seed") && !base.contains("seed")) base["seed"] = config.at("seed");
  if (config.contains("threads") && !base.contains("threads")) base["threads"] = config.at("threads");

  SuiteResult result;
  json runs = json::array();
  for (const auto& value : values) {
    json sub = base;
    navigate(sub, param) = value;
    SuiteResult inner = run_suite(sub);
    std::string tag = param + "=" + (value.is_string() ? value.get<std::string>() : value.dump());
    std::replace(tag.begin(), tag.end(), '.', '_');
    for (const auto& [name, content] : inner.files) {
      auto dot = name.rfind('.');
      std::string renamed = dot == std::string::npos ? name + "_" + tag
                                                     : name.substr(0, dot) + "_" + tag + name.substr(dot);
      result.files[renamed] = content;
    }
    runs.push_back(json{{"value", value}, {"summary", inner.summary}});
  }
  result.summary["suite"] = "sweep";
  result.summary["param"] = param;
  result.summary["seed"] = get_seed(config);
  result.summary["runs"] = runs;
  result.files["sweep_summary.json"] = result.summary.dump(2) + "\n";
  return result;
}

}  // namespace

SuiteResult run_suite(const nlohmann::json& config) {
  require(config.is_object(), Err::Config, "config must be a JSON object");
  require(config.contains("suite"), Err::Config, "config requires a 'suite'");
  std::string suite = config.at("suite").get<std::string>();
  if (suite == "flood-estimate") return run_flood_estimate(config);
  if (suite == "gossip-run") return run_gossip(config);
  if (suite == "capacity-scan") return run_capacity_scan(config);
  if (suite == "lemma4-verify") return run_lemma4(config);
  if (suite == "sweep") return run_sweep(config);
  fail(Err::Config, "unknown suite '" + suite + "'");
}

std::string suite_schema() {
  return
      "flood-estimate: flood_tail.csv columns start,t,p_stop_ge_t\n"
      "  start: start node of the flooding trials\n"
      "  t: flooding time (S_1 is the start set)\n"
      "  p_stop_ge_t: empirical P[stopping time >= t]\n"
      "  flood_params.json: {T, alpha, q, trials, residual, diagnostics, starts}\n"
      "gossip-run: decode_times.csv columns trial,node,threshold,decode_round,decode_flood_time\n"
      "  decode_round: first communication round (1-based) at which the node's rank\n"
      "  reached its threshold; 0 = before any communication; -1 = timeout\n"
      "  decode_flood_time: decode_round + 1, comparable against round bounds\n"
      "capacity-scan: feasible_times.csv columns trial,first_feasible_time (-1 = timeout)\n"
      "  witness_paths.txt lines: weight: v@0 v@1 ... v@T (weight as num/den)\n"
      "lemma4-verify: lemma4.csv columns q,p,m,ambient,h,witnesses,subspaces_checked,verified\n"
      "sweep: per-value copies of the inner suite's files plus sweep_summary.json\n";
}

}  // namespace ncg
