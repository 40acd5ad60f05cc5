#include "domeforge/domeforge.h"

#include "domeforge/confmetric.hpp"
#include "domeforge/json_io.hpp"
#include "domeforge/suites.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <numbers>
#include <string>

using namespace domeforge;

struct df_domain {
  FiniteDomain domain;
};

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

df_status status_of(const Error& e) {
  switch (e.code) {
    case ErrorCode::invalid_input: return DF_ERR_INVALID_INPUT;
    case ErrorCode::degenerate: return DF_ERR_DEGENERATE;
    case ErrorCode::out_of_domain: return DF_ERR_OUT_OF_DOMAIN;
    case ErrorCode::non_transverse: return DF_ERR_NON_TRANSVERSE;
    case ErrorCode::budget_exhausted: return DF_ERR_BUDGET;
  }
  return DF_ERR_INTERNAL;
}

template <typename Fn>
df_status guarded(Fn&& fn) {
  try {
    fn();
    return DF_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return status_of(e);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return DF_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return DF_ERR_INTERNAL;
  }
}

io::json parse(const char* text, const char* what) {
  if (text == nullptr) throw Error(ErrorCode::invalid_input, std::string(what) + ": null input");
  io::json j = io::json::parse(text, nullptr, false);
  if (j.is_discarded())
    throw Error(ErrorCode::invalid_input, std::string(what) + ": malformed JSON");
  return j;
}

}  // namespace

extern "C" {

const char* df_version(void) { return "0.1.0"; }

const char* df_last_error(void) { return g_last_error.c_str(); }

void df_string_free(char* s) { std::free(s); }

df_status df_domain_create(const char* points_json, df_domain** out) {
  return guarded([&] {
    if (out == nullptr) throw Error(ErrorCode::invalid_input, "df_domain_create: null out");
    io::json j = parse(points_json, "df_domain_create");
    auto X = io::points_from_json(j);
    auto* d = new df_domain{FiniteDomain::create(std::move(X))};
    *out = d;
  });
}

void df_domain_free(df_domain* d) { delete d; }

df_status df_domain_hull_json(const df_domain* d, char** out) {
  return guarded([&] {
    if (!d || !out) throw Error(ErrorCode::invalid_input, "df_domain_hull_json: null argument");
    *out = dup_string(io::hull_to_json(d->domain.hull).dump());
  });
}

df_status df_domain_retract(const df_domain* d, double re, double im, char** out) {
  return guarded([&] {
    if (!d || !out) throw Error(ErrorCode::invalid_input, "df_domain_retract: null argument");
    RetractionResult r = retract(d->domain, ExtPoint(re, im));
    *out = dup_string(io::retraction_to_json(r, 1.0 / r.h).dump());
  });
}

df_status df_domain_metric(const df_domain* d, double re, double im, char** out) {
  return guarded([&] {
    if (!d || !out) throw Error(ErrorCode::invalid_input, "df_domain_metric: null argument");
    cplx z(re, im);
    double q = confmetric::qh_density(d->domain.points, z);
    double b = confmetric::beta(d->domain.points, z);
    confmetric::Envelope env = confmetric::bp_envelope_from(q, b);
    double tau = thurston_density(d->domain, ExtPoint(z));
    io::json j{{"q", q},
               {"beta", std::isfinite(b) ? io::json(b) : io::json("inf")},
               {"rho_lower", env.lower},
               {"rho_upper", env.upper},
               {"tau", tau}};
    *out = dup_string(j.dump());
  });
}

df_status df_domain_dome_distance(const df_domain* d, const char* request_json, char** out) {
  return guarded([&] {
    if (!d || !out)
      throw Error(ErrorCode::invalid_input, "df_domain_dome_distance: null argument");
    io::json j = parse(request_json, "df_domain_dome_distance");
    auto read_point = [&](const char* key) {
      const io::json& p = j.at(key);
      return DomePoint{p.at("face").get<int>(),
                       cplx(p.at("re").get<double>(), p.at("im").get<double>())};
    };
    DomePoint a = read_point("a"), b = read_point("b");
    if (a.face < 0 || a.face >= static_cast<int>(d->domain.dome.charts.size()) ||
        b.face < 0 || b.face >= static_cast<int>(d->domain.dome.charts.size()))
      throw Error(ErrorCode::invalid_input, "dome_distance: face id out of range");
    if (!d->domain.dome.contains(a, 1e-7) || !d->domain.dome.contains(b, 1e-7))
      throw Error(ErrorCode::invalid_input, "dome_distance: point outside its face chart");
    GeodesicResult g = geodesic_distance(d->domain.dome, a, b);
    *out = dup_string(io::geodesic_result_to_json(g).dump());
  });
}

df_status df_domain_tau_distance(const df_domain* d, const char* request_json, char** out) {
  return guarded([&] {
    if (!d || !out) throw Error(ErrorCode::invalid_input, "df_domain_tau_distance: null argument");
    io::json j = parse(request_json, "df_domain_tau_distance");
    cplx z(j.at("z").at("re").get<double>(), j.at("z").at("im").get<double>());
    cplx w(j.at("w").at("re").get<double>(), j.at("w").at("im").get<double>());
    confmetric::BracketSchedule sched;
    if (j.contains("spacings")) sched.spacings = j.at("spacings").get<std::vector<double>>();
    if (j.contains("target_gap")) sched.target_gap = j.at("target_gap").get<double>();
    confmetric::DistanceBracket br = confmetric::tau_distance_bracket(d->domain, z, w, sched);
    *out = dup_string(io::bracket_to_json(br).dump());
  });
}

df_status df_domain_svg(const df_domain* d, const char* viewport_json, char** out) {
  return guarded([&] {
    if (!d || !out) throw Error(ErrorCode::invalid_input, "df_domain_svg: null argument");
    SvgViewport vp;
    if (viewport_json != nullptr && viewport_json[0] != '\0') {
      io::json j = parse(viewport_json, "df_domain_svg");
      vp.x = j.value("x", vp.x);
      vp.y = j.value("y", vp.y);
      vp.width = j.value("width", vp.width);
      vp.height = j.value("height", vp.height);
      vp.scale = j.value("scale", vp.scale);
    }
    CellDecomposition C = cell_decomposition(d->domain);
    *out = dup_string(svg_export(d->domain, C, vp));
  });
}

df_status df_annulus_metric(double s, double re, double im, char** out) {
  return guarded([&] {
    if (!out) throw Error(ErrorCode::invalid_input, "df_annulus_metric: null out");
    cplx z(re, im);
    // Evaluate before assembling the object: a throw inside a json braced
    // initializer leaks the temporaries.
    double q = confmetric::annulus_qh_density(s, z);
    double beta = confmetric::annulus_beta(s, z);
    double rho = confmetric::annulus_poincare_density(s, z);
    double tau = confmetric::annulus_thurston_density(s, z);
    io::json j{{"q", q}, {"beta", beta}, {"rho_exact", rho}, {"tau", tau}};
    *out = dup_string(j.dump());
  });
}

df_status df_annulus_report(const char* request_json, char** out) {
  return guarded([&] {
    if (!out) throw Error(ErrorCode::invalid_input, "df_annulus_report: null out");
    io::json j = parse(request_json, "df_annulus_report");
    double s = j.at("s").get<double>();
    confmetric::AnnulusClosedForms forms = confmetric::annulus_closed_forms(s);
    io::json closed{{"rho_core", forms.rho_core},
                    {"dome_core", forms.dome_core},
                    {"tau_core", forms.tau_core}};
    if (forms.t_s_valid) closed["t_s"] = forms.t_s;
    io::json approx = io::json::array();
    if (j.contains("n_schedule")) {
      for (int n : j.at("n_schedule").get<std::vector<int>>()) {
        FiniteDomain D =
            FiniteDomain::create(suites::annulus_points(s, n, std::numbers::pi / n));
        auto core = geodesic_in_class(D.dome, suites::band_face_cycle(D.hull));
        if (!core) continue;
        approx.push_back(io::json{{"n", n},
                                  {"dome_core", core->length},
                                  {"tau_core", core->length + core->inumber}});
      }
    }
    io::json outj{{"closed_forms", closed}, {"approx", approx}};
    *out = dup_string(outj.dump());
  });
}

df_status df_constants(char** out) {
  return guarded([&] {
    if (!out) throw Error(ErrorCode::invalid_input, "df_constants: null out");
    *out = dup_string(io::constants_to_json().dump());
  });
}

df_status df_run_suite(const char* config_json, char** report_json, int* aggregate_pass) {
  return guarded([&] {
    if (!report_json || !aggregate_pass)
      throw Error(ErrorCode::invalid_input, "df_run_suite: null argument");
    io::json j = parse(config_json, "df_run_suite");
    suites::SuiteConfig cfg;
    cfg.suite = j.at("suite").get<std::string>();
    cfg.seed = j.value("seed", 1ull);
    if (j.contains("params")) cfg.params = j.at("params");
    bool timing = j.value("timing", false);
    suites::VerifyReport rep = suites::run_suite(cfg);
    *report_json = dup_string(rep.to_json(timing).dump(2));
    *aggregate_pass = rep.aggregate_pass ? 1 : 0;
  });
}

df_status df_suite_names(char** out) {
  return guarded([&] {
    if (!out) throw Error(ErrorCode::invalid_input, "df_suite_names: null out");
    io::json j = suites::suite_names();
    *out = dup_string(j.dump());
  });
}

}  // extern "C"
