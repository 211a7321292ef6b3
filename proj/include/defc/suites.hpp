#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "defc/json_io.hpp"

namespace defc {

struct CheckRow {
  std::string id;
  cplx target, computed;
  double residual = 0, tolerance = 0;
  bool pass = false;
  double wall_time = 0;  // seconds
  std::string note;      // error message when the check threw
};

struct SuiteReport {
  std::string suite;
  std::uint64_t seed = 0;
  std::vector<CheckRow> rows;

  bool all_pass() const;
  std::string to_csv() const;
  json to_json() const;
  static SuiteReport from_csv(const std::string& text);
  static SuiteReport from_json(const json& j);
};

struct SuiteConfig {
  int nmax = 4;
  double fd_step = 1e-3;
  int rot_iters = 100000;
  std::uint64_t seed = 20261017;
  int triples = 20;
  double tol = 0;  // when positive, replaces every row tolerance
};

// witt | cocycles | decompose | moduli | all
SuiteReport run_suite(const std::string& name, const SuiteConfig& config = {});

// Seeded polynomial perturbation z + sum c_k z^k, k in {-1, 0, 2, 3}, |c_k| <= bound.
Deformation random_near_identity(std::uint64_t seed, double bound = 0.05);

}  // namespace defc
