#pragma once

#include "domeforge/confmetric.hpp"
#include "domeforge/json_io.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace domeforge::suites {

/// Deterministic splitmix64 generator; identical streams on every platform.
struct Rng {
  std::uint64_t state;
  explicit Rng(std::uint64_t seed) : state(seed) {}
  std::uint64_t next();
  double u01();                       // [0, 1)
  double uniform(double a, double b);
  int uniform_int(int a, int b);      // inclusive
};

struct SuiteConfig {
  std::string suite;
  std::uint64_t seed = 1;
  io::json params;  // suite-specific overrides (sample counts, s, radii, ...)
};

struct CheckRecord {
  std::string name;
  std::string digest;  // short hash of the inputs behind this check
  double measured = 0;
  double bound = 0;
  double margin = 0;  // >= 0 on pass
  bool pass = false;
};

struct VerifyReport {
  std::string suite;
  std::uint64_t seed = 0;
  std::vector<CheckRecord> checks;
  bool aggregate_pass = false;
  double wall_ms = 0;

  io::json to_json(bool include_timing = false) const;
};

std::vector<std::string> suite_names();
VerifyReport run_suite(const SuiteConfig& cfg);

/// Point-set generators. Random families honor the hull non-degeneracy rules
/// (pair separation 1e-3 spherical; no near-concyclic quadruple within 1e-6).
std::vector<ExtPoint> gen_random_points(int n, Rng& rng);
std::vector<ExtPoint> two_cluster_points(double radius, int per_cluster, Rng& rng);
std::vector<ExtPoint> annulus_points(double s, int n, double twist);

/// family: "random-N" | "two-cluster:R" | "annulus:s,n[,twist]"
FiniteDomain gen_config(const std::string& family, std::uint64_t seed);

/// Faces of the lateral band of an annulus-like hull, in adjacency order.
std::vector<int> band_face_cycle(const IdealPolyhedron& P);

/// Worker count: DOMEFORGE_THREADS, else min(hardware, 4).
int worker_count();
/// Deterministic parallel loop: fn(i) for i in [0, n); results must depend
/// only on i.
void parallel_for(int n, const std::function<void(int)>& fn);

}  // namespace domeforge::suites
