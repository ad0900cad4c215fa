#pragma once
// Named verification suites over the default desk-scale grid.  Each suite
// bundles a module's invariants into CheckReports so the command line and
// the acceptance harness can run them wholesale and render one line per
// check.

#include "dmt/diffops.hpp"

namespace dmt {

// exhaustive comparison of W_n(F_p) with the integer oracle Z/p^{n+1}
// through the residue bijection: the addition and multiplication laws are
// specialized per left argument and swept over every right argument, and
// negation, Teichmuller multiplicativity, the shift/Frobenius factorization
// of p, and the public entry points are checked on top
CheckReport ring_oracle_check(long p, long n);

struct VerifyOptions {
  long p = 0;   // 0 = whole default grid, otherwise restrict to this prime
  long n = -1;  // optional level filters where a suite has an (n, m) grid
  long m = -1;
};

struct SuiteResult {
  std::string suite;
  std::vector<CheckReport> reports;
  bool pass() const;
  nlohmann::json to_json() const;
};

// ghost, hopf, dieudonne, duality, diffops, all
const std::vector<std::string>& suite_names();

SuiteResult run_suite(const std::string& name, const VerifyOptions& opt = {});

}  // namespace dmt
