#include "ncgossip/ncgossip.h"

#include <cstring>
#include <new>
#include <string>

#include "json.hpp"
#include "ncgossip/capacity.hpp"
#include "ncgossip/engine.hpp"
#include "ncgossip/errors.hpp"
#include "ncgossip/flooding.hpp"
#include "ncgossip/suites.hpp"

namespace {

thread_local std::string g_last_error;

int code_of(ncg::Err err) {
  switch (err) {
    case ncg::Err::Ok: return NCG_OK;
    case ncg::Err::InvalidArgument: return NCG_ERR_INVALID_ARGUMENT;
    case ncg::Err::DimensionMismatch: return NCG_ERR_DIMENSION_MISMATCH;
    case ncg::Err::ZeroInverse: return NCG_ERR_ZERO_INVERSE;
    case ncg::Err::TooLarge: return NCG_ERR_TOO_LARGE;
    case ncg::Err::Timeout: return NCG_ERR_TIMEOUT;
    case ncg::Err::Config: return NCG_ERR_CONFIG;
    case ncg::Err::KTooLarge: return NCG_ERR_K_TOO_LARGE;
    case ncg::Err::DenominatorTooLarge: return NCG_ERR_DENOMINATOR_TOO_LARGE;
    case ncg::Err::InsufficientCapacity: return NCG_ERR_INSUFFICIENT_CAPACITY;
    case ncg::Err::Internal: return NCG_ERR_INTERNAL;
  }
  return NCG_ERR_INTERNAL;
}

template <typename Fn>
ncg_status guarded(Fn&& fn) {
  try {
    fn();
    return NCG_OK;
  } catch (const ncg::Error& e) {
    g_last_error = e.what();
    return code_of(e.code());
  } catch (const nlohmann::json::exception& e) {
    g_last_error = e.what();
    return NCG_ERR_CONFIG;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return NCG_ERR_TOO_LARGE;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return NCG_ERR_INTERNAL;
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(::operator new(s.size() + 1));
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

ncg_status invalid(const char* message) {
  g_last_error = message;
  return NCG_ERR_INVALID_ARGUMENT;
}

}  // namespace

struct ncg_field {
  ncg::FieldRef field;
};

struct ncg_rowspace {
  ncg::RowSpace space;
};

struct ncg_model {
  ncg::ModelSpec spec;
};

struct ncg_source {
  std::shared_ptr<const ncg::JointSource> source;
};

extern "C" {

const char* ncg_version(void) { return "1.0.0"; }

const char* ncg_last_error(void) { return g_last_error.c_str(); }

void ncg_free(void* ptr) { ::operator delete(ptr); }

ncg_status ncg_field_create(uint32_t p, uint32_t m, const uint32_t* modulus, size_t modulus_len, ncg_field** out) {
  if (!out) return invalid("null out pointer");
  return guarded([&] {
    std::optional<std::vector<std::uint32_t>> mod;
    if (modulus && modulus_len > 0) mod = std::vector<std::uint32_t>(modulus, modulus + modulus_len);
    *out = new ncg_field{ncg::Field::make(p, m, mod)};
  });
}

void ncg_field_destroy(ncg_field* field) { delete field; }

uint32_t ncg_field_order(const ncg_field* field) { return field ? field->field->order() : 0; }

ncg_status ncg_field_add(const ncg_field* field, uint32_t a, uint32_t b, uint32_t* out) {
  if (!field || !out) return invalid("null argument");
  return guarded([&] {
    ncg::require(field->field->valid(a) && field->field->valid(b), ncg::Err::InvalidArgument,
                 "element out of range");
    *out = field->field->add(a, b);
  });
}

ncg_status ncg_field_mul(const ncg_field* field, uint32_t a, uint32_t b, uint32_t* out) {
  if (!field || !out) return invalid("null argument");
  return guarded([&] {
    ncg::require(field->field->valid(a) && field->field->valid(b), ncg::Err::InvalidArgument,
                 "element out of range");
    *out = field->field->mul(a, b);
  });
}

ncg_status ncg_field_inv(const ncg_field* field, uint32_t a, uint32_t* out) {
  if (!field || !out) return invalid("null argument");
  return guarded([&] {
    ncg::require(field->field->valid(a), ncg::Err::InvalidArgument, "element out of range");
    *out = field->field->inv(a);
  });
}

ncg_status ncg_rowspace_create(const ncg_field* field, uint32_t dim, ncg_rowspace** out) {
  if (!field || !out) return invalid("null argument");
  return guarded([&] { *out = new ncg_rowspace{ncg::RowSpace(field->field, dim)}; });
}

void ncg_rowspace_destroy(ncg_rowspace* space) { delete space; }

ncg_status ncg_rowspace_insert(ncg_rowspace* space, const uint32_t* vec, size_t len, int* rank_increased) {
  if (!space || !vec) return invalid("null argument");
  return guarded([&] {
    bool grew = space->space.insert(std::span<const std::uint32_t>(vec, len));
    if (rank_increased) *rank_increased = grew ? 1 : 0;
  });
}

ncg_status ncg_rowspace_knows(const ncg_rowspace* space, const uint32_t* mu, size_t len, int* knows) {
  if (!space || !mu || !knows) return invalid("null argument");
  return guarded([&] { *knows = space->space.knows(std::span<const std::uint32_t>(mu, len)) ? 1 : 0; });
}

uint32_t ncg_rowspace_rank(const ncg_rowspace* space) { return space ? space->space.rank() : 0; }

ncg_status ncg_rowspace_complement(const ncg_rowspace* space, ncg_rowspace** out) {
  if (!space || !out) return invalid("null argument");
  return guarded([&] { *out = new ncg_rowspace{space->space.orthogonal_complement()}; });
}

ncg_status ncg_lemma4_verify(uint32_t p, uint32_t m, uint32_t ambient_dim, uint32_t h, int* verified,
                             uint64_t* witness_count) {
  if (!verified) return invalid("null out pointer");
  return guarded([&] {
    auto res = ncg::verify_lemma4(ncg::Field::make(p, m), ambient_dim, h);
    *verified = res.verified ? 1 : 0;
    if (witness_count) *witness_count = res.witnesses.size();
  });
}

ncg_status ncg_model_create(const char* json, ncg_model** out) {
  if (!json || !out) return invalid("null argument");
  return guarded([&] { *out = new ncg_model{ncg::ModelSpec::from_json(nlohmann::json::parse(json))}; });
}

void ncg_model_destroy(ncg_model* model) { delete model; }

int ncg_model_is_iid(const ncg_model* model) { return model && ncg::is_iid(model->spec) ? 1 : 0; }

uint32_t ncg_model_node_count(const ncg_model* model) { return model ? model->spec.n : 0; }

ncg_status ncg_model_sample_round(const ncg_model* model, uint64_t seed, uint32_t t, uint32_t** edges, size_t* count) {
  if (!model || !edges || !count) return invalid("null argument");
  return guarded([&] {
    auto round = ncg::ModelSampler::sample_iid(model->spec, t, ncg::RngStream(seed));
    auto* buf = static_cast<uint32_t*>(::operator new(sizeof(uint32_t) * 2 * round.edges.size()));
    for (std::size_t i = 0; i < round.edges.size(); ++i) {
      buf[2 * i] = round.edges[i].from;
      buf[2 * i + 1] = round.edges[i].to;
    }
    *edges = buf;
    *count = round.edges.size();
  });
}

ncg_status ncg_source_create(const char* json, uint32_t node_count, ncg_source** out) {
  if (!json || !out) return invalid("null argument");
  return guarded([&] {
    *out = new ncg_source{ncg::JointSource::from_json(nlohmann::json::parse(json), node_count)};
  });
}

void ncg_source_destroy(ncg_source* source) { delete source; }

uint32_t ncg_source_k(const ncg_source* source) { return source ? source->source->k() : 0; }

ncg_status ncg_source_cond_entropy(const ncg_source* source, uint32_t subset_mask, uint32_t node, double* bits) {
  if (!source || !bits) return invalid("null argument");
  return guarded([&] { *bits = source->source->cond_entropy(subset_mask, node); });
}

ncg_status ncg_source_sw_sufficient(const ncg_source* source, uint32_t node, const double* caps, size_t k,
                                    int* sufficient) {
  if (!source || !caps || !sufficient) return invalid("null argument");
  return guarded([&] {
    *sufficient = source->source->sw_sufficient(node, std::span<const double>(caps, k)) ? 1 : 0;
  });
}

ncg_status ncg_source_decode_threshold(const ncg_source* source, uint32_t node, uint32_t l, uint32_t s, double delta,
                                       int joint, uint32_t* out) {
  if (!source || !out) return invalid("null argument");
  return guarded([&] {
    *out = joint ? source->source->decode_threshold_joint(l, s, delta)
                 : source->source->decode_threshold_single(node, l, s, delta);
  });
}

ncg_status ncg_flood_run(const ncg_model* model, double p_fault, const uint32_t* start, size_t start_len,
                         uint32_t max_rounds, uint64_t seed, int64_t* stop_time) {
  if (!model || !start || !stop_time) return invalid("null argument");
  return guarded([&] {
    std::vector<std::uint32_t> start_set(start, start + start_len);
    auto traj = ncg::flood(model->spec, p_fault, start_set, max_rounds, ncg::RngStream(seed));
    *stop_time = traj.stop_time ? static_cast<int64_t>(*traj.stop_time) : -1;
  });
}

ncg_status ncg_flood_estimate(const ncg_model* model, uint32_t q, uint32_t trials, uint32_t max_rounds, uint64_t seed,
                              char** json_out) {
  if (!model || !json_out) return invalid("null argument");
  return guarded([&] {
    ncg::FloodEstimateOptions options;
    options.max_rounds = max_rounds;
    auto est = ncg::estimate_flood_params(model->spec, q, trials, ncg::RngStream(seed), options);
    nlohmann::json j{{"T", est.params.T},          {"alpha", est.params.alpha},
                     {"q", est.params.q},          {"trials", est.params.trials},
                     {"residual", est.params.residual}, {"alpha_fit", est.params.alpha_fit},
                     {"insufficient_tail", est.params.insufficient_tail}};
    *json_out = dup_string(j.dump());
  });
}

ncg_status ncg_capacity_first_feasible(const ncg_model* model, const char* demand_json, uint32_t max_rounds,
                                       uint64_t seed, int64_t* first_feasible) {
  if (!model || !demand_json || !first_feasible) return invalid("null argument");
  return guarded([&] {
    nlohmann::json j = nlohmann::json::parse(demand_json);
    ncg::CapacityDemand demand;
    demand.sink = j.at("sink").get<std::uint32_t>();
    for (const auto& s : j.at("sources")) {
      ncg::DemandSource src;
      src.node = s.at("node").get<std::uint32_t>();
      if (s.at("c").is_string())
        src.c = ncg::Rational::parse(s.at("c").get<std::string>());
      else
        src.c = ncg::Rational::parse(s.at("c").dump());
      demand.sources.push_back(src);
    }
    auto t = ncg::first_feasible_time(model->spec, demand, max_rounds, ncg::RngStream(seed));
    *first_feasible = t ? static_cast<int64_t>(*t) : -1;
  });
}

ncg_status ncg_suite_run(const char* config_json, char** result_json) {
  if (!config_json || !result_json) return invalid("null argument");
  return guarded([&] {
    nlohmann::json config = nlohmann::json::parse(config_json);
    ncg::SuiteResult res = ncg::run_suite(config);
    nlohmann::json out{{"summary", res.summary}, {"files", res.files}};
    *result_json = dup_string(out.dump());
  });
}

const char* ncg_suite_schema(void) {
  static const std::string schema = ncg::suite_schema();
  return schema.c_str();
}

}  // extern "C"
