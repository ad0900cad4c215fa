#pragma once
// Sparse multivariate polynomials with exact rational coefficients. Terms live
// in a std::map keyed by exponent vector, so iteration (and therefore JSON
// output) is lexicographic and deterministic.

#include "dmt/numeric.hpp"

#include "json.hpp"

#include <map>
#include <string>
#include <vector>

namespace dmt {

using Exps = std::vector<uint32_t>;

class MultiPoly {
 public:
  MultiPoly() = default;
  explicit MultiPoly(std::vector<std::string> vars) : vars_(std::move(vars)) {}

  static MultiPoly constant(std::vector<std::string> vars, const Rational& c);
  static MultiPoly variable(std::vector<std::string> vars, size_t index);

  const std::vector<std::string>& vars() const { return vars_; }
  const std::map<Exps, Rational>& terms() const { return terms_; }
  bool zero() const { return terms_.empty(); }
  size_t term_count() const { return terms_.size(); }

  void add_term(const Exps& e, const Rational& c);

  MultiPoly operator+(const MultiPoly& o) const;
  MultiPoly operator-(const MultiPoly& o) const;
  MultiPoly operator-() const;
  MultiPoly operator*(const MultiPoly& o) const;
  MultiPoly operator*(const Rational& c) const;
  bool operator==(const MultiPoly& o) const { return vars_ == o.vars_ && terms_ == o.terms_; }
  bool operator!=(const MultiPoly& o) const { return !(*this == o); }

  MultiPoly pow(unsigned long e) const;

  // reinterpret into a larger variable list; index_map[i] = new index of old var i
  MultiPoly remap(std::vector<std::string> new_vars, const std::vector<size_t>& index_map) const;

  // substitute images[i] for variable i; images share one variable list
  MultiPoly substitute(const std::vector<MultiPoly>& images) const;

  bool is_integral() const;
  // asserts v_p(coeff) >= n for every coefficient, then divides by p^n
  MultiPoly divide_by_p_power(long p, long n) const;

  // weighted degree of one term and homogeneity across all of them
  static long weighted_degree(const Exps& e, const std::vector<long>& weights);
  bool is_weighted_homogeneous(const std::vector<long>& weights, long degree) const;

  nlohmann::json to_json() const;
  static MultiPoly from_json(const nlohmann::json& j);

  // human order: decreasing weight, ties broken by exponents read along
  // display_sequence (indices into vars), larger first
  std::string to_display_string(const std::vector<long>& weights,
                                const std::vector<size_t>& display_sequence) const;
  std::string to_display_string() const;  // unit weights, natural sequence

 private:
  std::vector<std::string> vars_;
  std::map<Exps, Rational> terms_;
};

}  // namespace dmt
