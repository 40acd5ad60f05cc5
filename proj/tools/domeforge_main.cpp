// domeforge: hyperbolic-domain geometry lab CLI.
//
// All structured input arrives as JSON (--config file or inline --json);
// results are JSON on stdout or --out. Exit codes: 0 ok / all checks passed,
// 1 at least one verification violation, 2 configuration or input error.

#include <CLI11.hpp>
#include <json.hpp>

#include "domeforge/domeforge.h"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

namespace {

using nlohmann::json;

struct StringGuard {
  char* s = nullptr;
  ~StringGuard() { df_string_free(s); }
};

struct DomainGuard {
  df_domain* d = nullptr;
  ~DomainGuard() { df_domain_free(d); }
};

[[noreturn]] void fail(const std::string& msg) {
  std::cerr << "domeforge: " << msg << "\n";
  std::exit(2);
}

json load_config(const std::string& path, const std::string& inline_json) {
  if (!inline_json.empty()) {
    json j = json::parse(inline_json, nullptr, false);
    if (j.is_discarded()) fail("--json is not valid JSON");
    return j;
  }
  if (path.empty()) fail("missing --config (or --json)");
  std::ifstream in(path);
  if (!in) fail("cannot open config file: " + path);
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) fail("config file is not valid JSON: " + path);
  return j;
}

void write_output(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text << "\n";
    return;
  }
  std::ofstream out(out_path);
  if (!out) fail("cannot open output file: " + out_path);
  out << text;
  if (!text.empty() && text.back() != '\n') out << "\n";
}

void check(df_status st, const char* what) {
  if (st != DF_OK) fail(std::string(what) + ": " + df_last_error());
}

df_domain* make_domain(const json& cfg) {
  if (!cfg.contains("points")) fail("config needs a \"points\" array");
  df_domain* d = nullptr;
  check(df_domain_create(json{{"points", cfg.at("points")}}.dump().c_str(), &d),
        "domain construction failed");
  return d;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Geometry of hyperbolic domains: ideal hulls, domes, the Thurston "
               "metric and the nearest point retraction"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, inline_json, out_path;
  std::uint64_t seed = 1;
  app.add_option("--config", config_path, "JSON configuration file")->capture_default_str();
  app.add_option("--json", inline_json, "inline JSON configuration");
  app.add_option("--out", out_path, "output file (default: stdout)");
  app.add_option("--seed", seed, "random seed for verification suites");
  bool sweep = false;
  bool timing = false;
  app.add_flag("--sweep", sweep, "metric: CSV sweep over a grid of sample points");
  app.add_flag("--timing", timing, "verify: include wall time in the report");

  auto* c_hull = app.add_subcommand("hull", "ideal hull of a finite point set");
  auto* c_retract = app.add_subcommand("retract", "nearest point retraction at z");
  auto* c_metric = app.add_subcommand("metric", "pointwise densities q, beta, rho bounds, tau");
  auto* c_domedist = app.add_subcommand("dome-dist", "intrinsic dome distance");
  auto* c_taudist = app.add_subcommand("tau-dist", "Thurston distance bracket");
  auto* c_annulus = app.add_subcommand("annulus", "round annulus closed forms and approximations");
  auto* c_constants = app.add_subcommand("constants", "explicit constant table");
  auto* c_svg = app.add_subcommand("svg", "cell decomposition drawing");
  auto* c_verify = app.add_subcommand("verify", "named verification suites");
  std::string suite_name = "all";
  c_verify->add_option("--suite", suite_name, "suite name or \"all\"");

  CLI11_PARSE(app, argc, argv);

  if (c_constants->parsed()) {
    StringGuard s;
    check(df_constants(&s.s), "constants");
    write_output(out_path, s.s);
    return 0;
  }

  if (c_hull->parsed()) {
    json cfg = load_config(config_path, inline_json);
    DomainGuard d{make_domain(cfg)};
    StringGuard s;
    check(df_domain_hull_json(d.d, &s.s), "hull");
    write_output(out_path, s.s);
    return 0;
  }

  if (c_retract->parsed()) {
    json cfg = load_config(config_path, inline_json);
    DomainGuard d{make_domain(cfg)};
    if (!cfg.contains("z")) fail("retract config needs z");
    StringGuard s;
    check(df_domain_retract(d.d, cfg["z"].value("re", 0.0), cfg["z"].value("im", 0.0), &s.s),
          "retract");
    write_output(out_path, s.s);
    return 0;
  }

  if (c_metric->parsed()) {
    json cfg = load_config(config_path, inline_json);
    bool annulus_mode = cfg.contains("annulus");
    double s_param = annulus_mode ? cfg["annulus"].value("s", 2.0) : 0.0;
    DomainGuard d;
    if (!annulus_mode) d.d = make_domain(cfg);

    auto eval_at = [&](double re, double im, std::string& out) {
      StringGuard s;
      df_status st = annulus_mode ? df_annulus_metric(s_param, re, im, &s.s)
                                  : df_domain_metric(d.d, re, im, &s.s);
      if (st != DF_OK) return st;
      out = s.s;
      return DF_OK;
    };

    if (!sweep) {
      if (!cfg.contains("z")) fail("metric config needs z");
      std::string txt;
      check(eval_at(cfg["z"].value("re", 0.0), cfg["z"].value("im", 0.0), txt), "metric");
      write_output(out_path, txt);
      return 0;
    }
    json sw = cfg.value("sweep", json::object());
    int n = sw.value("n", 20);
    double x0 = sw.value("x0", annulus_mode ? -std::exp(s_param) : -2.0);
    double x1 = sw.value("x1", annulus_mode ? std::exp(s_param) : 2.0);
    double y0 = sw.value("y0", x0), y1 = sw.value("y1", x1);
    std::ostringstream csv;
    csv << (annulus_mode ? "re,im,q,beta,rho_exact,tau\n" : "re,im,q,beta,rho_lower,rho_upper,tau\n");
    csv.precision(12);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        double re = x0 + (x1 - x0) * (i + 0.5) / n;
        double im = y0 + (y1 - y0) * (j + 0.5) / n;
        std::string txt;
        if (eval_at(re, im, txt) != DF_OK) continue;  // outside domain etc.
        json row = json::parse(txt);
        csv << re << "," << im << "," << row["q"].get<double>() << ",";
        if (row["beta"].is_string())
          csv << "inf";
        else
          csv << row["beta"].get<double>();
        if (annulus_mode)
          csv << "," << row["rho_exact"].get<double>();
        else
          csv << "," << row["rho_lower"].get<double>() << "," << row["rho_upper"].get<double>();
        csv << "," << row["tau"].get<double>() << "\n";
      }
    }
    write_output(out_path, csv.str());
    return 0;
  }

  if (c_domedist->parsed()) {
    json cfg = load_config(config_path, inline_json);
    DomainGuard d{make_domain(cfg)};
    StringGuard s;
    json req{{"a", cfg.at("a")}, {"b", cfg.at("b")}};
    check(df_domain_dome_distance(d.d, req.dump().c_str(), &s.s), "dome-dist");
    write_output(out_path, s.s);
    return 0;
  }

  if (c_taudist->parsed()) {
    json cfg = load_config(config_path, inline_json);
    DomainGuard d{make_domain(cfg)};
    json req{{"z", cfg.at("z")}, {"w", cfg.at("w")}};
    if (cfg.contains("spacings")) req["spacings"] = cfg["spacings"];
    if (cfg.contains("target_gap")) req["target_gap"] = cfg["target_gap"];
    StringGuard s;
    check(df_domain_tau_distance(d.d, req.dump().c_str(), &s.s), "tau-dist");
    write_output(out_path, s.s);
    return 0;
  }

  if (c_annulus->parsed()) {
    json cfg = load_config(config_path, inline_json);
    StringGuard s;
    check(df_annulus_report(cfg.dump().c_str(), &s.s), "annulus");
    write_output(out_path, s.s);
    return 0;
  }

  if (c_svg->parsed()) {
    json cfg = load_config(config_path, inline_json);
    DomainGuard d{make_domain(cfg)};
    std::string vp = cfg.contains("viewport") ? cfg["viewport"].dump() : "";
    StringGuard s;
    check(df_domain_svg(d.d, vp.c_str(), &s.s), "svg");
    write_output(out_path, s.s);
    return 0;
  }

  if (c_verify->parsed()) {
    json cfg = json::object();
    if (!config_path.empty() || !inline_json.empty()) cfg = load_config(config_path, inline_json);
    if (cfg.contains("suite")) suite_name = cfg["suite"].get<std::string>();
    if (cfg.contains("seed")) seed = cfg["seed"].get<std::uint64_t>();

    std::vector<std::string> names;
    if (suite_name == "all") {
      StringGuard s;
      check(df_suite_names(&s.s), "suite names");
      for (const auto& n : json::parse(std::string(s.s))) names.push_back(n.get<std::string>());
    } else {
      names.push_back(suite_name);
    }

    json combined = json::array();
    bool all_pass = true;
    for (const auto& name : names) {
      json req{{"suite", name}, {"seed", seed}, {"timing", timing}};
      if (cfg.contains("params")) req["params"] = cfg["params"];
      StringGuard s;
      int pass = 0;
      check(df_run_suite(req.dump().c_str(), &s.s, &pass), "verify");
      json rep = json::parse(std::string(s.s));
      std::cerr << (pass ? "[PASS] " : "[FAIL] ") << name << " (" << rep["checks"].size()
                << " checks)\n";
      combined.push_back(rep);
      all_pass = all_pass && pass;
    }
    write_output(out_path, names.size() == 1 ? combined[0].dump(2) : combined.dump(2));
    return all_pass ? 0 : 1;
  }

  return 2;
}
