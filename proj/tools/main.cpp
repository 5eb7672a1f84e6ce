// Experiment driver for the ncgossip library. All functionality goes through
// the C API in ncgossip.h; this binary only handles configs, files, and exit
// codes.
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "ncgossip/ncgossip.h"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitConfig = 2;
constexpr int kExitTimeout = 3;
constexpr int kExitInternal = 4;

int exit_code_for(ncg_status status) {
  switch (status) {
    case NCG_OK:
      return kExitOk;
    case NCG_ERR_TIMEOUT:
      return kExitTimeout;
    case NCG_ERR_INTERNAL:
      return kExitInternal;
    case NCG_ERR_CONFIG:
    case NCG_ERR_INVALID_ARGUMENT:
    case NCG_ERR_TOO_LARGE:
    case NCG_ERR_K_TOO_LARGE:
    case NCG_ERR_DENOMINATOR_TOO_LARGE:
    case NCG_ERR_INSUFFICIENT_CAPACITY:
      return kExitConfig;
    default:
      return kExitError;
  }
}

json parse_override_value(const std::string& text) {
  json v = json::parse(text, nullptr, false);
  if (v.is_discarded()) return json(text);  // bare strings stay strings
  return v;
}

// applies a dotted-path override like model.n=64
void apply_override(json& config, const std::string& assignment) {
  auto eq = assignment.find('=');
  if (eq == std::string::npos) throw CLI::ValidationError("--set expects key.path=value");
  std::string path = assignment.substr(0, eq);
  json value = parse_override_value(assignment.substr(eq + 1));
  json* cur = &config;
  std::size_t pos = 0;
  for (;;) {
    auto dot = path.find('.', pos);
    std::string key = path.substr(pos, dot == std::string::npos ? std::string::npos : dot - pos);
    if (key.empty()) throw CLI::ValidationError("--set has an empty path segment");
    if (dot == std::string::npos) {
      (*cur)[key] = value;
      return;
    }
    cur = &(*cur)[key];
    pos = dot + 1;
  }
}

void write_atomic(const fs::path& target, const std::string& content) {
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
  }
  fs::rename(tmp, target);
}

void print_lemma4_table(const json& summary) {
  std::printf("%6s %4s %8s %3s %10s %10s %9s\n", "q", "p^m", "ambient", "h", "witnesses", "subspaces", "verified");
  for (const auto& row : summary.at("rows")) {
    char pm[16];
    std::snprintf(pm, sizeof(pm), "%u^%u", row.at("p").get<unsigned>(), row.at("m").get<unsigned>());
    std::printf("%6u %4s %8u %3u %10llu %10llu %9s\n", row.at("q").get<unsigned>(), pm,
                row.at("ambient").get<unsigned>(), row.at("h").get<unsigned>(),
                static_cast<unsigned long long>(row.at("witnesses").get<std::uint64_t>()),
                static_cast<unsigned long long>(row.at("subspaces_checked").get<std::uint64_t>()),
                row.at("verified").get<bool>() ? "true" : "false");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"network-coded gossip simulation and verification toolkit"};
  app.require_subcommand(0, 1);

  std::string config_path;
  std::string out_dir = ".";
  std::vector<std::string> overrides;
  std::uint64_t seed = 0;
  bool seed_set = false;
  unsigned threads = 0;
  bool show_schema = false;

  app.add_flag("--schema", show_schema, "print the CSV column documentation and exit");

  const std::vector<std::string> suites = {"flood-estimate", "gossip-run", "capacity-scan", "lemma4-verify", "sweep"};
  std::vector<CLI::App*> subcommands;
  for (const auto& name : suites) {
    CLI::App* sub = app.add_subcommand(name, "run the " + name + " suite");
    sub->add_option("-c,--config", config_path, "JSON config file (optional for lemma4-verify)");
    sub->add_option("--set", overrides, "override a config entry, e.g. --set model.n=64")->take_all();
    sub->add_option("-o,--out-dir", out_dir, "directory for output artifacts");
    sub->add_option("--seed", seed, "override the config seed")->each([&](const std::string&) { seed_set = true; });
    sub->add_option("--threads", threads, "worker threads for independent trials");
    subcommands.push_back(sub);
  }

  CLI11_PARSE(app, argc, argv);

  if (show_schema) {
    std::fputs(ncg_suite_schema(), stdout);
    return kExitOk;
  }

  CLI::App* active = nullptr;
  for (std::size_t i = 0; i < subcommands.size(); ++i)
    if (subcommands[i]->parsed()) active = subcommands[i];
  if (!active) {
    std::fputs(app.help().c_str(), stderr);
    return kExitConfig;
  }

  json config = json::object();
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) {
      std::fprintf(stderr, "error: cannot open config file '%s'\n", config_path.c_str());
      return kExitConfig;
    }
    config = json::parse(in, nullptr, false);
    if (config.is_discarded()) {
      std::fprintf(stderr, "error: config file '%s' is not valid JSON\n", config_path.c_str());
      return kExitConfig;
    }
  }
  config["suite"] = active->get_name();
  try {
    for (const auto& o : overrides) apply_override(config, o);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  }
  if (seed_set) config["seed"] = seed;
  if (threads > 0) config["threads"] = threads;

  char* result_json = nullptr;
  ncg_status status = ncg_suite_run(config.dump().c_str(), &result_json);
  if (status != NCG_OK) {
    std::fprintf(stderr, "error: %s\n", ncg_last_error());
    return exit_code_for(status);
  }

  json result = json::parse(result_json);
  ncg_free(result_json);

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  try {
    for (auto it = result.at("files").begin(); it != result.at("files").end(); ++it)
      write_atomic(fs::path(out_dir) / it.key(), it.value().get<std::string>());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitError;
  }

  const json& summary = result.at("summary");
  if (active->get_name() == "lemma4-verify") {
    print_lemma4_table(summary);
    if (!summary.at("all_verified").get<bool>()) return kExitError;
  } else {
    std::printf("%s\n", summary.dump(2).c_str());
  }
  return kExitOk;
}
