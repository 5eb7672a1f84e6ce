// Exercises the shared-library C API end to end: handles, error codes, and
// the JSON suite entry point.
#include <cassert>
#include <cstdio>
#include <cstring>
#include <string>

#include "json.hpp"
#include "ncgossip/ncgossip.h"

#define CHECK(cond)                                                          \
  do {                                                                       \
    if (!(cond)) {                                                           \
      std::fprintf(stderr, "FAILED %s:%d: %s\n", __FILE__, __LINE__, #cond); \
      std::fprintf(stderr, "  last error: %s\n", ncg_last_error());          \
      return 1;                                                              \
    }                                                                        \
  } while (0)

int main() {
  CHECK(std::strlen(ncg_version()) > 0);

  // fields: GF(4) arithmetic and error codes
  ncg_field* gf4 = nullptr;
  CHECK(ncg_field_create(2, 2, nullptr, 0, &gf4) == NCG_OK);
  CHECK(ncg_field_order(gf4) == 4);
  uint32_t out = 0;
  CHECK(ncg_field_add(gf4, 2, 3, &out) == NCG_OK && out == 1);
  CHECK(ncg_field_mul(gf4, 2, 2, &out) == NCG_OK && out == 3);
  CHECK(ncg_field_inv(gf4, 2, &out) == NCG_OK && out == 3);
  CHECK(ncg_field_inv(gf4, 0, &out) == NCG_ERR_ZERO_INVERSE);
  CHECK(ncg_field_add(gf4, 9, 1, &out) == NCG_ERR_INVALID_ARGUMENT);

  ncg_field* bad = nullptr;
  CHECK(ncg_field_create(4, 1, nullptr, 0, &bad) == NCG_ERR_INVALID_ARGUMENT);
  CHECK(ncg_field_create(2, 30, nullptr, 0, &bad) == NCG_ERR_TOO_LARGE);

  // row spaces
  ncg_rowspace* space = nullptr;
  CHECK(ncg_rowspace_create(gf4, 3, &space) == NCG_OK);
  uint32_t v1[3] = {1, 0, 2};
  uint32_t v2[3] = {0, 1, 1};
  int grew = 0;
  CHECK(ncg_rowspace_insert(space, v1, 3, &grew) == NCG_OK && grew == 1);
  CHECK(ncg_rowspace_insert(space, v2, 3, &grew) == NCG_OK && grew == 1);
  CHECK(ncg_rowspace_insert(space, v1, 3, &grew) == NCG_OK && grew == 0);
  CHECK(ncg_rowspace_rank(space) == 2);
  CHECK(ncg_rowspace_insert(space, v1, 2, &grew) == NCG_ERR_DIMENSION_MISMATCH);
  int knows = 0;
  uint32_t mu[3] = {1, 0, 0};
  CHECK(ncg_rowspace_knows(space, mu, 3, &knows) == NCG_OK && knows == 1);
  ncg_rowspace* comp = nullptr;
  CHECK(ncg_rowspace_complement(space, &comp) == NCG_OK);
  CHECK(ncg_rowspace_rank(comp) == 1);
  ncg_rowspace_destroy(comp);
  ncg_rowspace_destroy(space);
  ncg_field_destroy(gf4);

  // rank witness-set verifier
  int verified = 0;
  uint64_t witnesses = 0;
  CHECK(ncg_lemma4_verify(2, 1, 3, 1, &verified, &witnesses) == NCG_OK);
  CHECK(verified == 1 && witnesses == 3);
  CHECK(ncg_lemma4_verify(2, 2, 16, 3, &verified, &witnesses) == NCG_ERR_TOO_LARGE);

  // models
  const char* model_json = R"({"kind": "static", "n": 8, "graph": {"kind": "complete"}})";
  ncg_model* model = nullptr;
  CHECK(ncg_model_create(model_json, &model) == NCG_OK);
  CHECK(ncg_model_is_iid(model) == 1);
  CHECK(ncg_model_node_count(model) == 8);
  uint32_t* edges = nullptr;
  size_t edge_count = 0;
  CHECK(ncg_model_sample_round(model, 7, 1, &edges, &edge_count) == NCG_OK);
  CHECK(edge_count == 56);
  ncg_free(edges);

  ncg_model* bad_model = nullptr;
  CHECK(ncg_model_create("{\"kind\": \"nope\", \"n\": 2}", &bad_model) == NCG_ERR_CONFIG);
  CHECK(ncg_model_create("not json", &bad_model) == NCG_ERR_CONFIG);

  // flooding: complete graph, no faults, stops at 2
  int64_t stop = 0;
  uint32_t start = 0;
  CHECK(ncg_flood_run(model, 0.0, &start, 1, 100, 11, &stop) == NCG_OK);
  CHECK(stop == 2);
  char* flood_json = nullptr;
  CHECK(ncg_flood_estimate(model, 2, 1500, 500, 3, &flood_json) == NCG_OK);
  {
    auto parsed = nlohmann::json::parse(flood_json);
    CHECK(parsed.at("T").get<double>() == 2.0);
    CHECK(parsed.at("alpha").get<double>() > 0.0);
  }
  ncg_free(flood_json);

  // sources
  const char* source_json = R"({"family": "dsbs", "classes": [{"nodes": [0], "crossover": 0.11}]})";
  ncg_source* source = nullptr;
  CHECK(ncg_source_create(source_json, 2, &source) == NCG_OK);
  CHECK(ncg_source_k(source) == 1);
  double bits = 0.0;
  CHECK(ncg_source_cond_entropy(source, 1, 0, &bits) == NCG_OK);
  CHECK(bits > 0.49 && bits < 0.51);
  CHECK(ncg_source_cond_entropy(source, 1, 1, &bits) == NCG_OK);
  CHECK(bits > 0.99);
  uint32_t threshold = 0;
  CHECK(ncg_source_decode_threshold(source, 0, 100, 10, 0.1, 0, &threshold) == NCG_OK);
  CHECK(threshold == 6);
  double caps1[1] = {1.0};
  int sufficient = 0;
  CHECK(ncg_source_sw_sufficient(source, 0, caps1, 1, &sufficient) == NCG_OK && sufficient == 1);
  double caps_low[1] = {0.2};
  CHECK(ncg_source_sw_sufficient(source, 1, caps_low, 1, &sufficient) == NCG_OK && sufficient == 0);
  ncg_source_destroy(source);

  // capacity feasibility
  int64_t first = 0;
  const char* demand_json = R"({"sink": 7, "sources": [{"node": 0, "c": "1/2"}, {"node": 1, "c": "1/2"}]})";
  CHECK(ncg_capacity_first_feasible(model, demand_json, 50, 13, &first) == NCG_OK);
  CHECK(first == 1);
  ncg_model_destroy(model);

  // suite entry point
  char* result_json = nullptr;
  const char* config = R"({"suite": "lemma4-verify", "seed": 1,
                           "grid": [{"p": 2, "m": 1, "ambient": 3, "h": 1}]})";
  CHECK(ncg_suite_run(config, &result_json) == NCG_OK);
  {
    auto parsed = nlohmann::json::parse(result_json);
    CHECK(parsed.at("summary").at("all_verified").get<bool>());
    CHECK(parsed.at("files").contains("lemma4.csv"));
  }
  ncg_free(result_json);
  CHECK(ncg_suite_run("{\"suite\": \"gossip-run\", \"bogus\": 1}", &result_json) == NCG_ERR_CONFIG);
  CHECK(std::strlen(ncg_last_error()) > 0);

  CHECK(std::string(ncg_suite_schema()).find("decode_times.csv") != std::string::npos);

  std::puts("capi tests passed");
  return 0;
}
