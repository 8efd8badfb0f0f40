#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "simplexdyn/simplexdyn.hpp"

namespace simplexdyn::cli {

struct SuiteResult {
  std::string suite;
  std::vector<TestReport> gates;
  std::vector<std::string> notes;

  bool pass() const;
};

struct GeometryOptions {
  std::uint64_t seed = 1;
  int instances = 1000;
};

struct DirichletOptions {
  std::uint64_t seed = 3;
  Matrix a = -3.0 * Matrix::Identity(3, 3);
  Vector alpha = Vector::Ones(3);
  std::size_t paths = 100000;
  double dt = 1e-3;
  double t_end = 1.0;
  double mixing_t_end = 5.0;
  Vector mixing_start = Vector{{0.7, 0.2, 0.1}};
  unsigned workers = 0;
};

struct ContractionOptions {
  std::uint64_t seed = 5;
  Matrix a;                      // default: telema - 10 id
  Matrix negative_control;       // default: diag(1, -1)
  int pairs = 100;
  int control_seeds = 100;
  double t_end = 1.0;
  double dt = 1e-3;
  double sigma = 1.0;
  ContractionOptions();
};

struct WongZakaiOptions {
  std::uint64_t seed = 6;
  std::vector<double> lambdas{0.8, 0.4, 0.2, 0.1};
  std::size_t paths = 10000;
  double t_end = 1.0;
  double sigma = 1.0;
  int n = 3;
  unsigned workers = 0;
};

struct DonskerOptions {
  std::uint64_t seed = 7;
  std::vector<int> n_steps{16, 64, 256};
  std::size_t walks = 10000;
  int n = 3;
};

struct TransienceOptions {
  std::uint64_t seed = 8;
  std::size_t paths = 30000;
  double t = 1e4;
  int n = 3;
};

struct JkoOptions {
  int m = 1000;
  double t_end = 0.2;
  std::vector<int> n_steps{10, 20, 40};
  double sigma = 1.0;
  double sd0 = 1.0;
};

Matrix telema();

SuiteResult run_geometry(const GeometryOptions& o);
SuiteResult run_dirichlet(const DirichletOptions& o);
SuiteResult run_contraction(const ContractionOptions& o);
SuiteResult run_wongzakai(const WongZakaiOptions& o);
SuiteResult run_donsker(const DonskerOptions& o);
SuiteResult run_transience(const TransienceOptions& o);
SuiteResult run_jko(const JkoOptions& o);

}  // namespace simplexdyn::cli
