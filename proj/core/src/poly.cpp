#include "dmt/poly.hpp"

#include <algorithm>
#include <sstream>

namespace dmt {

MultiPoly MultiPoly::constant(std::vector<std::string> vars, const Rational& c) {
  MultiPoly r(std::move(vars));
  r.add_term(Exps(r.vars_.size(), 0), c);
  return r;
}

MultiPoly MultiPoly::variable(std::vector<std::string> vars, size_t index) {
  MultiPoly r(std::move(vars));
  if (index >= r.vars_.size()) throw std::out_of_range("variable index");
  Exps e(r.vars_.size(), 0);
  e[index] = 1;
  r.add_term(e, 1);
  return r;
}

void MultiPoly::add_term(const Exps& e, const Rational& c) {
  if (e.size() != vars_.size()) throw std::invalid_argument("exponent vector length mismatch");
  if (c == 0) return;
  auto it = terms_.find(e);
  if (it == terms_.end()) {
    terms_.emplace(e, c);
  } else {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

MultiPoly MultiPoly::operator+(const MultiPoly& o) const {
  if (vars_ != o.vars_) throw std::invalid_argument("variable list mismatch");
  MultiPoly r = *this;
  for (const auto& [e, c] : o.terms_) r.add_term(e, c);
  return r;
}

MultiPoly MultiPoly::operator-(const MultiPoly& o) const {
  if (vars_ != o.vars_) throw std::invalid_argument("variable list mismatch");
  MultiPoly r = *this;
  for (const auto& [e, c] : o.terms_) r.add_term(e, -c);
  return r;
}

MultiPoly MultiPoly::operator-() const {
  MultiPoly r(vars_);
  for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
  return r;
}

MultiPoly MultiPoly::operator*(const MultiPoly& o) const {
  if (vars_ != o.vars_) throw std::invalid_argument("variable list mismatch");
  MultiPoly r(vars_);
  Exps e(vars_.size());
  for (const auto& [ea, ca] : terms_)
    for (const auto& [eb, cb] : o.terms_) {
      for (size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      r.add_term(e, ca * cb);
    }
  return r;
}

MultiPoly MultiPoly::operator*(const Rational& c) const {
  MultiPoly r(vars_);
  if (c == 0) return r;
  for (const auto& [e, cc] : terms_) r.terms_.emplace(e, cc * c);
  return r;
}

MultiPoly MultiPoly::pow(unsigned long e) const {
  MultiPoly acc = constant(vars_, 1);
  MultiPoly base = *this;
  while (e) {
    if (e & 1) acc = acc * base;
    if (e >>= 1) base = base * base;
  }
  return acc;
}

MultiPoly MultiPoly::remap(std::vector<std::string> new_vars,
                           const std::vector<size_t>& index_map) const {
  if (index_map.size() != vars_.size()) throw std::invalid_argument("index map size mismatch");
  MultiPoly r(std::move(new_vars));
  for (const auto& [e, c] : terms_) {
    Exps ne(r.vars_.size(), 0);
    for (size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (index_map[i] >= ne.size()) throw std::out_of_range("index map target");
      ne[index_map[i]] += e[i];
    }
    r.add_term(ne, c);
  }
  return r;
}

MultiPoly MultiPoly::substitute(const std::vector<MultiPoly>& images) const {
  if (images.size() != vars_.size()) throw std::invalid_argument("one image per variable required");
  std::vector<std::string> tvars =
      images.empty() ? std::vector<std::string>{} : images[0].vars();
  for (const auto& im : images)
    if (im.vars() != tvars) throw std::invalid_argument("images must share a variable list");

  // memoize powers of each image as needed
  std::vector<std::vector<MultiPoly>> powers(images.size());
  auto power = [&](size_t i, uint32_t e) -> const MultiPoly& {
    auto& tab = powers[i];
    if (tab.empty()) tab.push_back(constant(tvars, 1));
    while (tab.size() <= e) tab.push_back(tab.back() * images[i]);
    return tab[e];
  };

  MultiPoly acc(tvars);
  for (const auto& [e, c] : terms_) {
    MultiPoly term = constant(tvars, c);
    for (size_t i = 0; i < e.size(); ++i)
      if (e[i]) term = term * power(i, e[i]);
    acc = acc + term;
  }
  return acc;
}

bool MultiPoly::is_integral() const {
  for (const auto& [e, c] : terms_)
    if (c.get_den() != 1) return false;
  return true;
}

MultiPoly MultiPoly::divide_by_p_power(long p, long n) const {
  BigInt pn = pow_ui(BigInt(p), static_cast<unsigned long>(n));
  for (const auto& [e, c] : terms_) {
    if (valuation(c, p) < n) {
      std::ostringstream os;
      os << "coefficient " << c.get_str() << " not divisible by " << p << "^" << n;
      throw std::domain_error(os.str());
    }
  }
  MultiPoly r(vars_);
  for (const auto& [e, c] : terms_) r.terms_.emplace(e, c / Rational(pn));
  return r;
}

long MultiPoly::weighted_degree(const Exps& e, const std::vector<long>& weights) {
  if (e.size() != weights.size()) throw std::invalid_argument("weight vector length mismatch");
  long d = 0;
  for (size_t i = 0; i < e.size(); ++i) d += static_cast<long>(e[i]) * weights[i];
  return d;
}

bool MultiPoly::is_weighted_homogeneous(const std::vector<long>& weights, long degree) const {
  for (const auto& [e, c] : terms_)
    if (weighted_degree(e, weights) != degree) return false;
  return true;
}

nlohmann::json MultiPoly::to_json() const {
  nlohmann::json j;
  j["vars"] = vars_;
  auto& arr = j["terms"] = nlohmann::json::array();
  for (const auto& [e, c] : terms_) {
    nlohmann::json t;
    t["coeff"] = c.get_den() == 1 ? c.get_num().get_str() : c.get_str();
    t["exps"] = e;
    arr.push_back(std::move(t));
  }
  return j;
}

MultiPoly MultiPoly::from_json(const nlohmann::json& j) {
  MultiPoly r(j.at("vars").get<std::vector<std::string>>());
  for (const auto& t : j.at("terms")) {
    Rational c(t.at("coeff").get<std::string>());
    c.canonicalize();
    r.add_term(t.at("exps").get<Exps>(), c);
  }
  return r;
}

std::string MultiPoly::to_display_string(const std::vector<long>& weights,
                                         const std::vector<size_t>& display_sequence) const {
  if (terms_.empty()) return "0";
  std::vector<const std::pair<const Exps, Rational>*> order;
  order.reserve(terms_.size());
  for (const auto& t : terms_) order.push_back(&t);
  std::stable_sort(order.begin(), order.end(), [&](auto* a, auto* b) {
    long wa = weighted_degree(a->first, weights), wb = weighted_degree(b->first, weights);
    if (wa != wb) return wa > wb;
    for (size_t i : display_sequence)
      if (a->first[i] != b->first[i]) return a->first[i] > b->first[i];
    return false;
  });

  std::ostringstream os;
  bool first = true;
  for (auto* t : order) {
    Rational c = t->second;
    bool negative = c < 0;
    if (first) {
      if (negative) os << "-";
    } else {
      os << (negative ? " - " : " + ");
    }
    first = false;
    Rational a = negative ? Rational(-c) : c;
    std::string mono;
    for (size_t i = 0; i < t->first.size(); ++i) {
      if (!t->first[i]) continue;
      if (!mono.empty()) mono += "*";
      mono += vars_[i];
      if (t->first[i] > 1) mono += "^" + std::to_string(t->first[i]);
    }
    if (mono.empty()) {
      os << a.get_str();
    } else {
      if (a != 1) os << a.get_str() << "*";
      os << mono;
    }
  }
  return os.str();
}

std::string MultiPoly::to_display_string() const {
  std::vector<long> w(vars_.size(), 1);
  std::vector<size_t> seq(vars_.size());
  for (size_t i = 0; i < seq.size(); ++i) seq[i] = i;
  return to_display_string(w, seq);
}

}  // namespace dmt
