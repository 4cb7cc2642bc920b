#include "epsnum/epsnum.h"

#include <cstring>
#include <new>
#include <string>

#include "../core/bounds.hpp"
#include "../core/commands.hpp"
#include "../core/config.hpp"
#include "../core/covering.hpp"
#include "../core/errors.hpp"
#include "../core/norms.hpp"
#include "../core/operators.hpp"

using epsnum::Error;
using epsnum::ErrorCode;
using epsnum::Field;
using epsnum::PNorm;

struct eps_spec {
  epsnum::linop::DiagonalSpec inner;
};
struct eps_op {
  epsnum::linop::DenseOperator inner;
};

namespace {

thread_local std::string g_last_error;

eps_status status_from(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument:
      return EPS_ERR_INVALID;
    case ErrorCode::Config:
      return EPS_ERR_CONFIG;
    case ErrorCode::Capability:
      return EPS_ERR_CAPABILITY;
    case ErrorCode::Numerical:
      return EPS_ERR_NUMERIC;
    case ErrorCode::Budget:
      return EPS_ERR_BUDGET;
  }
  return EPS_ERR_INVALID;
}

template <typename F>
eps_status guarded(F&& f) {
  try {
    f();
    return EPS_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return status_from(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return EPS_ERR_INVALID;
  }
}

char* dup_string(const std::string& s) {
  char* out = new (std::nothrow) char[s.size() + 1];
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

Field to_field(eps_field f) { return f == EPS_FIELD_COMPLEX ? Field::Complex : Field::Real; }

}  // namespace

extern "C" {

const char* eps_version(void) { return epsnum::cmd::version(); }

const char* eps_last_error(void) { return g_last_error.c_str(); }

void eps_string_free(char* s) { delete[] s; }

eps_status eps_spec_create(const double* prefix, size_t prefix_len, double tail, double p,
                           eps_field field, eps_spec** out) {
  return guarded([&] {
    if (!out || (prefix_len > 0 && !prefix))
      epsnum::fail(ErrorCode::InvalidArgument, "null argument");
    std::vector<double> pre(prefix, prefix + prefix_len);
    *out = new eps_spec{epsnum::linop::make_diagonal_spec(std::move(pre), tail, PNorm(p),
                                                          to_field(field))};
  });
}

void eps_spec_destroy(eps_spec* spec) { delete spec; }

eps_status eps_op_create_real(const double* entries, int rows, int cols, double p, eps_op** out) {
  return guarded([&] {
    if (!out || !entries) epsnum::fail(ErrorCode::InvalidArgument, "null argument");
    *out = new eps_op{epsnum::linop::make_dense_real(
        rows, cols, PNorm(p),
        std::span<const double>(entries, static_cast<size_t>(rows) * cols))};
  });
}

eps_status eps_op_create_complex(const double* re, const double* im, int rows, int cols, double p,
                                 eps_op** out) {
  return guarded([&] {
    if (!out || !re || !im) epsnum::fail(ErrorCode::InvalidArgument, "null argument");
    const size_t n = static_cast<size_t>(rows) * cols;
    *out = new eps_op{epsnum::linop::make_dense_complex(rows, cols, PNorm(p),
                                                        std::span<const double>(re, n),
                                                        std::span<const double>(im, n))};
  });
}

eps_status eps_op_identity(int dim, double p, eps_field field, eps_op** out) {
  return guarded([&] {
    if (!out) epsnum::fail(ErrorCode::InvalidArgument, "null argument");
    *out = new eps_op{epsnum::linop::identity_operator(dim, PNorm(p), to_field(field))};
  });
}

eps_status eps_op_truncate(const eps_spec* spec, int n, eps_op** out) {
  return guarded([&] {
    if (!out || !spec) epsnum::fail(ErrorCode::InvalidArgument, "null argument");
    *out = new eps_op{epsnum::linop::truncate(spec->inner, n)};
  });
}

eps_status eps_op_adjoint(const eps_op* a, eps_op** out) {
  return guarded([&] {
    if (!out || !a) epsnum::fail(ErrorCode::InvalidArgument, "null argument");
    *out = new eps_op{epsnum::linop::adjoint(a->inner)};
  });
}

eps_status eps_op_modulus(const eps_op* a, eps_op** out) {
  return guarded([&] {
    if (!out || !a) epsnum::fail(ErrorCode::InvalidArgument, "null argument");
    *out = new eps_op{epsnum::linop::modulus(a->inner)};
  });
}

eps_status eps_op_polar(const eps_op* a, eps_op** isometry, eps_op** modulus) {
  return guarded([&] {
    if (!a || !isometry || !modulus) epsnum::fail(ErrorCode::InvalidArgument, "null argument");
    auto parts = epsnum::linop::polar(a->inner);
    *isometry = new eps_op{std::move(parts.partial_isometry)};
    *modulus = new eps_op{std::move(parts.modulus_part)};
  });
}

eps_status eps_op_compose(const eps_op* a, const eps_op* b, eps_op** out) {
  return guarded([&] {
    if (!out || !a || !b) epsnum::fail(ErrorCode::InvalidArgument, "null argument");
    *out = new eps_op{epsnum::linop::compose(a->inner, b->inner)};
  });
}

eps_status eps_op_add(const eps_op* a, const eps_op* b, eps_op** out) {
  return guarded([&] {
    if (!out || !a || !b) epsnum::fail(ErrorCode::InvalidArgument, "null argument");
    *out = new eps_op{epsnum::linop::add(a->inner, b->inner)};
  });
}

eps_status eps_op_scale(double re, double im, const eps_op* a, eps_op** out) {
  return guarded([&] {
    if (!out || !a) epsnum::fail(ErrorCode::InvalidArgument, "null argument");
    *out = new eps_op{epsnum::linop::scale({re, im}, a->inner)};
  });
}

void eps_op_destroy(eps_op* op) { delete op; }

eps_status eps_op_shape(const eps_op* a, int* rows, int* cols, eps_field* field, double* p) {
  return guarded([&] {
    if (!a) epsnum::fail(ErrorCode::InvalidArgument, "null argument");
    if (rows) *rows = a->inner.rows;
    if (cols) *cols = a->inner.cols;
    if (field)
      *field = a->inner.field == Field::Complex ? EPS_FIELD_COMPLEX : EPS_FIELD_REAL;
    if (p) *p = a->inner.p.value();
  });
}

eps_status eps_op_entries(const eps_op* a, double* re, double* im) {
  return guarded([&] {
    if (!a) epsnum::fail(ErrorCode::InvalidArgument, "null argument");
    for (size_t i = 0; i < a->inner.a.size(); ++i) {
      if (re) re[i] = a->inner.a[i].real();
      if (im) im[i] = a->inner.a[i].imag();
    }
  });
}

eps_status eps_op_norm(const eps_op* a, double* lower, double* upper) {
  return guarded([&] {
    if (!a || !lower || !upper) epsnum::fail(ErrorCode::InvalidArgument, "null argument");
    const auto nb = epsnum::norms::operator_norm(a->inner);
    *lower = nb.lower;
    *upper = nb.upper;
  });
}

eps_status eps_delta(const eps_spec* spec, int n, double tol, double* value, int* attained_k,
                     double* tolerance) {
  return guarded([&] {
    if (!spec || !value) epsnum::fail(ErrorCode::InvalidArgument, "null argument");
    const auto dv = epsnum::bounds::delta(spec->inner, n, tol);
    *value = dv.value;
    if (attained_k) *attained_k = dv.attained_k ? *dv.attained_k : -1;
    if (tolerance) *tolerance = dv.tolerance;
  });
}

eps_status eps_diagonal_sandwich(const eps_spec* spec, int n, double* lower, double* upper) {
  return guarded([&] {
    if (!spec || !lower || !upper) epsnum::fail(ErrorCode::InvalidArgument, "null argument");
    const auto iv = epsnum::bounds::diagonal_sandwich(spec->inner, n);
    *lower = iv.lower;
    *upper = iv.upper;
  });
}

eps_status eps_volume_lower_bound(const eps_spec* spec, int k, int n, double* out) {
  return guarded([&] {
    if (!spec || !out) epsnum::fail(ErrorCode::InvalidArgument, "null argument");
    *out = epsnum::bounds::volume_lower_bound(spec->inner, k, n);
  });
}

eps_status eps_projection_entropy_lower(int k, int rank_n, eps_field field, double* out) {
  return guarded([&] {
    if (!out) epsnum::fail(ErrorCode::InvalidArgument, "null argument");
    *out = epsnum::bounds::projection_entropy_lower(k, rank_n, to_field(field));
  });
}

eps_status eps_entropy_bracket(const eps_op* a, int n, double eta, eps_effort effort,
                               double* lower, double* upper, char** witness_json) {
  return guarded([&] {
    if (!a || !lower || !upper) epsnum::fail(ErrorCode::InvalidArgument, "null argument");
    const auto effort_mode = effort == EPS_EFFORT_EXACT ? epsnum::covering::Effort::Exact
                                                        : epsnum::covering::Effort::Greedy;
    const auto bracket = epsnum::covering::entropy_bracket(a->inner, n, eta, effort_mode);
    *lower = bracket.lower;
    *upper = bracket.upper;
    if (witness_json) {
      nlohmann::json j{{"n", bracket.n},
                       {"eta", bracket.eta},
                       {"methods", bracket.methods},
                       {"truncated_search", bracket.truncated_search}};
      if (bracket.lower_witness)
        j["lower_witness_separation"] = bracket.lower_witness->min_separation;
      if (bracket.upper_witness) j["upper_witness_radius"] = bracket.upper_witness->radius;
      *witness_json = dup_string(j.dump());
    }
  });
}

eps_status eps_check_subadditivity(int n, double lower_ts, double upper_t, double norm_s_upper,
                                   int* ok) {
  return guarded([&] {
    if (!ok) epsnum::fail(ErrorCode::InvalidArgument, "null argument");
    epsnum::covering::EntropyBracket t, ts;
    t.n = ts.n = n;
    t.upper = upper_t;
    ts.lower = lower_ts;
    epsnum::norms::NormBracket s;
    s.upper = norm_s_upper;
    *ok = epsnum::bounds::check_subadditivity(t, ts, s) ? 1 : 0;
  });
}

eps_status eps_check_submultiplicativity(int n, double lower_srt, double upper_r,
                                         double norm_s_upper, double norm_t_upper, int* ok) {
  return guarded([&] {
    if (!ok) epsnum::fail(ErrorCode::InvalidArgument, "null argument");
    epsnum::covering::EntropyBracket r, srt;
    r.n = srt.n = n;
    r.upper = upper_r;
    srt.lower = lower_srt;
    epsnum::norms::NormBracket s, t;
    s.upper = norm_s_upper;
    t.upper = norm_t_upper;
    *ok = epsnum::bounds::check_submultiplicativity(r, srt, s, t) ? 1 : 0;
  });
}

eps_status eps_config_parse(const char* kv_text, char** json_out) {
  return guarded([&] {
    if (!kv_text || !json_out) epsnum::fail(ErrorCode::InvalidArgument, "null argument");
    *json_out = dup_string(epsnum::cfg::parse_kv_text(kv_text).dump());
  });
}

eps_status eps_run_command(const char* command, const char* config_json, char** json_out) {
  return guarded([&] {
    if (!command || !config_json || !json_out)
      epsnum::fail(ErrorCode::InvalidArgument, "null argument");
    nlohmann::json cfg = nlohmann::json::parse(config_json, nullptr, false);
    if (cfg.is_discarded()) epsnum::fail(ErrorCode::Config, "configuration is not valid JSON");
    const auto res = epsnum::cmd::run_command(command, cfg);
    nlohmann::json wrapped{{"payload", res.payload}, {"metrics", res.metrics}};
    *json_out = dup_string(wrapped.dump());
  });
}

}  // extern "C"
